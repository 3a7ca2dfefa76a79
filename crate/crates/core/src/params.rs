//! Parameter conditions for the spherical subalgebra at `lambda`:
//! regularity, absence of finite-dimensional modules, dominance, candidate
//! dimensions of simple finite-dimensional modules, and the construction of a
//! shift `xi in Lambda_+` that pushes those dimensions above a given bound.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::{LatticeVector, Quiver};
use crate::rational::{dot_int, format_complex, parse_complex, Q};
use crate::roots::{self, require_normalized, Root};

/// Complex parameter with exact rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamVector {
    pub re: Vec<Q>,
    pub im: Vec<Q>,
}

impl ParamVector {
    pub fn real(re: Vec<Q>) -> Self {
        let im = vec![Q::zero(); re.len()];
        ParamVector { re, im }
    }

    pub fn new(re: Vec<Q>, im: Vec<Q>) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::Length { expected: re.len(), got: im.len() });
        }
        Ok(ParamVector { re, im })
    }

    /// Parses comma separated complex tokens such as `"1/2+i,1/2-i"`.
    pub fn parse(s: &str) -> Result<Self> {
        let (re, im) = s.split(',').map(parse_complex).collect::<Result<Vec<_>>>()?.into_iter().unzip();
        Ok(ParamVector { re, im })
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.im.iter().all(Zero::is_zero)
    }

    /// `(Re(lambda . a), Im(lambda . a))`.
    pub fn pair(&self, alpha: &[i64]) -> (Q, Q) {
        (dot_int(&self.re, alpha), dot_int(&self.im, alpha))
    }

    pub fn pairs_to_zero(&self, alpha: &[i64]) -> bool {
        let (re, im) = self.pair(alpha);
        re.is_zero() && im.is_zero()
    }

    pub fn add_lattice(&self, xi: &[i64]) -> ParamVector {
        let re = self.re.iter().zip(xi).map(|(x, &k)| x + Q::from_integer(k.into())).collect();
        ParamVector { re, im: self.im.clone() }
    }

    pub fn tokens(&self) -> Vec<String> {
        self.re.iter().zip(&self.im).map(|(r, i)| format_complex(r, i)).collect()
    }
}

impl Serialize for ParamVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.tokens())
    }
}

impl<'de> Deserialize<'de> for ParamVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let (re, im) = raw
            .iter()
            .map(|t| parse_complex(t))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?
            .into_iter()
            .unzip();
        Ok(ParamVector { re, im })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamReport {
    pub lambda: ParamVector,
    pub regular: bool,
    pub no_findim: bool,
    pub dominant: bool,
    /// Candidate dimensions of simple finite-dimensional modules (an upper bound
    /// on what occurs).
    pub candidate_dims: BTreeSet<u64>,
    pub annihilated_roots: Vec<Root>,
}

pub fn is_regular(q: &Quiver, lambda: &ParamVector) -> Result<bool> {
    require_normalized(q, lambda)?;
    Ok(roots::dynkin_roots(q)?.iter().all(|r| !lambda.pairs_to_zero(&r.coords)))
}

pub fn has_no_findim(q: &Quiver, lambda: &ParamVector) -> Result<bool> {
    Ok(roots::roots_annihilated_by(q, lambda)?.iter().all(|r| r.is_dynkin))
}

/// `Re(lambda . a) > 0` for every positive Dynkin root.
pub fn is_dominant(q: &Quiver, lambda: &ParamVector) -> Result<bool> {
    require_normalized(q, lambda)?;
    Ok(roots::positive_dynkin_roots(q)?.iter().all(|r| lambda.pair(&r.coords).0.is_positive()))
}

/// `{ e_0 . b > 0 : b positive root, lambda . b = 0 }`.
pub fn simple_module_dims(q: &Quiver, lambda: &ParamVector) -> Result<BTreeSet<u64>> {
    Ok(dims_of(&roots::roots_annihilated_by(q, lambda)?))
}

fn dims_of(annihilated: &[Root]) -> BTreeSet<u64> {
    annihilated
        .iter()
        .filter(|r| r.is_positive && r.extending_coord() > 0)
        .map(|r| r.extending_coord() as u64)
        .collect()
}

pub fn analyze(q: &Quiver, lambda: &ParamVector) -> Result<ParamReport> {
    let annihilated = roots::roots_annihilated_by(q, lambda)?;
    Ok(ParamReport {
        lambda: lambda.clone(),
        regular: is_regular(q, lambda)?,
        no_findim: annihilated.iter().all(|r| r.is_dynkin),
        dominant: is_dominant(q, lambda)?,
        candidate_dims: dims_of(&annihilated),
        annihilated_roots: annihilated,
    })
}

/// `N = max |e_0 . a|` over roots annihilated by `lambda` (zero if none).
pub fn annihilator_bound(q: &Quiver, lambda: &ParamVector) -> Result<i64> {
    Ok(roots::roots_annihilated_by(q, lambda)?.iter().map(|r| r.extending_coord().abs()).max().unwrap_or(0))
}

/// True when `lambda + xi` is regular and has no candidate dimension in `[1, d]`.
pub fn shift_is_valid(q: &Quiver, lambda: &ParamVector, xi: &[i64], d: u64) -> Result<bool> {
    let shifted = lambda.add_lattice(xi);
    Ok(is_regular(q, &shifted)? && simple_module_dims(q, &shifted)?.range(1..=d).next().is_none())
}

/// Builds `xi in Lambda_+` with `xi_i = N + d + 1` off the extending vertex.
///
/// Then `xi . psi > N + d` for every positive Dynkin root `psi`, so every root
/// annihilated by `lambda + xi` has `|e_0 . b| > d`.
pub fn choose_xi(q: &Quiver, lambda: &ParamVector, d: u64) -> Result<LatticeVector> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be positive".into()));
    }
    if !is_regular(q, lambda)? {
        return Err(Error::NotRegular);
    }
    let bound = annihilator_bound(q, lambda)?;
    let delta = q.delta()?;
    let step = bound + d as i64 + 1;
    let mut xi = vec![step; q.vertex_count()];
    xi[0] = -step * delta.iter().skip(1).sum::<i64>();
    debug_assert_eq!(delta.dot(&xi), 0);
    if !shift_is_valid(q, lambda, &xi, d)? {
        return Err(Error::Invariant(format!("constructed shift {xi:?} failed verification")));
    }
    Ok(LatticeVector(xi))
}

/// Exhaustive scan for a valid shift with off-extending coordinates in
/// `[0, N + d + 1]`, minimizing the coordinate sum (ties broken lexicographically).
pub fn search_min_xi(q: &Quiver, lambda: &ParamVector, d: u64) -> Result<LatticeVector> {
    let uniform = choose_xi(q, lambda, d)?;
    let top = uniform[1];
    let delta = q.delta()?;
    let n = q.vertex_count();
    let mut best: Option<(i64, Vec<i64>)> = None;
    let mut tail = vec![0i64; n - 1];
    loop {
        let sum: i64 = tail.iter().sum();
        if best.as_ref().is_none_or(|(s, _)| sum < *s) {
            let mut xi = vec![0];
            xi.extend(&tail);
            xi[0] = -delta.iter().zip(&xi).skip(1).map(|(a, b)| a * b).sum::<i64>();
            if shift_is_valid(q, lambda, &xi, d)? {
                best = Some((sum, xi));
            }
        }
        let mut k = tail.len();
        loop {
            if k == 0 {
                let (_, xi) = best.expect("the uniform shift is always valid");
                return Ok(LatticeVector(xi));
            }
            k -= 1;
            if tail[k] < top {
                tail[k] += 1;
                break;
            }
            tail[k] = 0;
        }
    }
}

/// One trial of the dominance experiment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominanceTrial {
    pub lambda: ParamVector,
    pub obstructed_dims: BTreeSet<u64>,
}

/// Scans the given dominant parameters and records those whose candidate
/// dimensions meet `[1, d]`.
pub fn dominance_obstructions(q: &Quiver, lambdas: &[ParamVector], d: u64) -> Result<Vec<DominanceTrial>> {
    let mut out = Vec::new();
    for lambda in lambdas {
        if !is_dominant(q, lambda)? {
            continue;
        }
        let dims: BTreeSet<u64> = simple_module_dims(q, lambda)?.range(1..=d).copied().collect();
        if !dims.is_empty() {
            out.push(DominanceTrial { lambda: lambda.clone(), obstructed_dims: dims });
        }
    }
    Ok(out)
}

/// Membership of `xi` in `Lambda_+`, by enumeration.
pub fn in_lambda_plus(q: &Quiver, xi: &[i64]) -> Result<bool> {
    Ok(roots::classify_weight(q, xi)?.in_lambda_plus())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::build_from_label;
    use crate::rational::frac;

    fn a1() -> Quiver {
        build_from_label("A1").unwrap()
    }

    fn lam(v: &[(i64, i64)]) -> ParamVector {
        ParamVector::real(v.iter().map(|&(n, d)| frac(n, d)).collect())
    }

    #[test]
    fn regularity() {
        assert!(is_regular(&a1(), &lam(&[(1, 2), (1, 2)])).unwrap());
        assert!(!is_regular(&a1(), &lam(&[(1, 1), (0, 1)])).unwrap());
        assert!(is_regular(&a1(), &lam(&[(0, 1), (1, 1)])).unwrap());
        assert!(matches!(is_regular(&a1(), &lam(&[(1, 1), (1, 1)])), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn findim() {
        assert!(has_no_findim(&a1(), &lam(&[(1, 2), (1, 2)])).unwrap());
        assert!(!has_no_findim(&a1(), &lam(&[(2, 1), (-1, 1)])).unwrap());
        // Independent of regularity.
        assert!(has_no_findim(&a1(), &lam(&[(1, 1), (0, 1)])).unwrap());
    }

    #[test]
    fn dominance() {
        assert!(is_dominant(&a1(), &lam(&[(1, 2), (1, 2)])).unwrap());
        assert!(!is_dominant(&a1(), &lam(&[(2, 1), (-1, 1)])).unwrap());
        let complex = ParamVector::parse("1/2+i,1/2-i").unwrap();
        assert!(!complex.is_real());
        assert!(is_dominant(&a1(), &complex).unwrap());
    }

    #[test]
    fn complex_parameters_never_hit_roots_with_imaginary_pairing() {
        let complex = ParamVector::parse("1+i,0-i").unwrap();
        assert!(is_regular(&a1(), &complex).unwrap());
        assert!(roots::roots_annihilated_by(&a1(), &complex).unwrap().is_empty());
    }

    #[test]
    fn candidate_dims() {
        assert_eq!(simple_module_dims(&a1(), &lam(&[(2, 1), (-1, 1)])).unwrap(), BTreeSet::from([1]));
        assert!(simple_module_dims(&a1(), &lam(&[(1, 2), (1, 2)])).unwrap().is_empty());
        assert_eq!(simple_module_dims(&a1(), &lam(&[(3, 1), (-2, 1)])).unwrap(), BTreeSet::from([2]));
        assert!(simple_module_dims(&a1(), &lam(&[(1, 1), (0, 1)])).unwrap().is_empty());
    }

    #[test]
    fn choose_xi_examples() {
        let xi = choose_xi(&a1(), &lam(&[(2, 1), (-1, 1)]), 1).unwrap();
        assert_eq!(xi.0, vec![-3, 3]);
        let shifted = lam(&[(2, 1), (-1, 1)]).add_lattice(&xi);
        assert_eq!(shifted, lam(&[(-1, 1), (2, 1)]));
        let ann: Vec<_> = roots::roots_annihilated_by(&a1(), &shifted)
            .unwrap()
            .into_iter()
            .filter(|r| r.is_positive)
            .map(|r| r.coords.0)
            .collect();
        assert_eq!(ann, vec![vec![2, 1]]);

        for d in 1..=5u64 {
            let half = lam(&[(1, 2), (1, 2)]);
            let xi = choose_xi(&a1(), &half, d).unwrap();
            let k = d as i64 + 1;
            assert_eq!(xi.0, vec![-k, k]);
            assert!(simple_module_dims(&a1(), &half.add_lattice(&xi)).unwrap().is_empty());
            assert!(roots::classify_weight(&a1(), &xi).unwrap().in_lambda_plus());
        }
    }

    #[test]
    fn choose_xi_preconditions() {
        assert_eq!(choose_xi(&a1(), &lam(&[(1, 1), (0, 1)]), 1), Err(Error::NotRegular));
        assert!(choose_xi(&a1(), &lam(&[(1, 2), (1, 2)]), 0).is_err());
        assert!(choose_xi(&a1(), &lam(&[(1, 2), (1, 1)]), 1).is_err());
    }

    #[test]
    fn search_finds_smaller_valid_shift() {
        let q = build_from_label("A2").unwrap();
        let l = lam(&[(3, 1), (-1, 2), (-3, 2)]);
        let uniform = choose_xi(&q, &l, 2).unwrap();
        let small = search_min_xi(&q, &l, 2).unwrap();
        assert!(shift_is_valid(&q, &l, &small, 2).unwrap());
        assert!(small[1..].iter().sum::<i64>() <= uniform[1..].iter().sum::<i64>());
        assert!(in_lambda_plus(&q, &small).unwrap());
    }

    #[test]
    fn report_json_round_trip() {
        let r = analyze(&build_from_label("A3").unwrap(), &lam(&[(1, 2), (1, 6), (1, 6), (1, 6)])).unwrap();
        let js = serde_json::to_string(&r).unwrap();
        assert!(js.contains("\"1/6\""));
        let back: ParamReport = serde_json::from_str(&js).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn dominance_experiment_finds_obstruction() {
        let trials = vec![lam(&[(-1, 1), (2, 1)]), lam(&[(1, 2), (1, 2)]), lam(&[(2, 1), (-1, 1)])];
        let hits = dominance_obstructions(&a1(), &trials, 3).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].lambda, trials[0]);
        assert_eq!(hits[0].obstructed_dims, BTreeSet::from([2]));
    }
}
