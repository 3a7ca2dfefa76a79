//! Roots of affine ADE root systems and the weight cones `Lambda`,
//! `Lambda_+`, `Lambda_++`.
//!
//! A root is a nonzero integer vector with Tits form at most one. Real roots
//! have `q = 1`; imaginary roots are the nonzero multiples of `delta`. Every
//! real root is `a' + k delta` for a unique Dynkin root `a'` (a root with zero
//! extending coordinate) and integer `k`.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ParamVector;
use crate::quiver::{LatticeVector, Quiver};
use crate::rational::is_integer;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root {
    pub coords: LatticeVector,
    pub is_real: bool,
    pub is_dynkin: bool,
    pub is_positive: bool,
}

impl Root {
    /// Classifies `coords`, returning `None` unless it is a root of `q`.
    pub fn classify(q: &Quiver, coords: LatticeVector) -> Option<Root> {
        if coords.is_zero() {
            return None;
        }
        let tits = q.tits_form(&coords);
        if tits > 1 {
            return None;
        }
        let is_positive = coords.iter().all(|&x| x >= 0);
        debug_assert!(is_positive || coords.iter().all(|&x| x <= 0), "root {coords:?} has mixed signs");
        Some(Root { is_real: tits == 1, is_dynkin: coords[0] == 0, is_positive, coords })
    }

    /// Extending coordinate `e_0 . a`.
    pub fn extending_coord(&self) -> i64 {
        self.coords[0]
    }

    pub fn neg(&self) -> Root {
        Root { coords: self.coords.neg(), is_positive: !self.is_positive, ..self.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeightClass {
    NotInLambda,
    LambdaOnly,
    LambdaPlus,
    LambdaPlusPlus,
}

impl WeightClass {
    pub fn in_lambda(self) -> bool {
        self != WeightClass::NotInLambda
    }

    pub fn in_lambda_plus(self) -> bool {
        matches!(self, WeightClass::LambdaPlus | WeightClass::LambdaPlusPlus)
    }
}

/// All roots with every coordinate in `[-bound, bound]`, in lexicographic order.
pub fn enumerate_roots(q: &Quiver, bound: i64) -> Vec<Root> {
    let n = q.vertex_count();
    let mut out = Vec::new();
    let mut v = vec![-bound; n];
    loop {
        if let Some(r) = Root::classify(q, LatticeVector(v.clone())) {
            out.push(r);
        }
        // Odometer increment, last coordinate fastest.
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if v[k] < bound {
                v[k] += 1;
                break;
            }
            v[k] = -bound;
        }
    }
}

/// Positive Dynkin roots found by scanning the box `[-m, m]` on the non-extending
/// coordinates, `m = max delta_i`.
pub fn positive_dynkin_roots_by_box(q: &Quiver) -> Result<Vec<Root>> {
    let delta = q.delta()?;
    let m = *delta.iter().max().unwrap_or(&1);
    let n = q.vertex_count();
    let mut out = Vec::new();
    let mut v = vec![-m; n];
    v[0] = 0;
    loop {
        if let Some(r) = Root::classify(q, LatticeVector(v.clone())) {
            if r.is_positive {
                out.push(r);
            }
        }
        let mut k = n;
        loop {
            if k == 1 {
                return Ok(out);
            }
            k -= 1;
            if v[k] < m {
                v[k] += 1;
                break;
            }
            v[k] = -m;
        }
    }
}

/// Positive Dynkin roots generated from the simple roots `e_i` (`i != 0`) by
/// closure under the finite simple reflections `s_i(a) = a - (Ca)_i e_i`.
pub fn positive_dynkin_roots(q: &Quiver) -> Result<Vec<Root>> {
    let c = q.undoubled().cartan()?;
    let n = q.vertex_count();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut stack: Vec<Vec<i64>> = (1..n).map(|i| LatticeVector::unit(n, i).0).collect();
    while let Some(a) = stack.pop() {
        if !seen.insert(a.clone()) {
            continue;
        }
        let ca = c.apply(&a);
        for i in 1..n {
            let mut b = a.clone();
            b[i] -= ca[i];
            if b.iter().all(|&x| x >= 0) && b.iter().any(|&x| x > 0) && !seen.contains(&b) {
                stack.push(b);
            }
        }
    }
    seen.into_iter()
        .map(|v| {
            Root::classify(q, LatticeVector(v.clone()))
                .filter(|r| r.is_real && r.is_dynkin && r.is_positive)
                .ok_or_else(|| Error::Invariant(format!("reflection closure produced non-root {v:?}")))
        })
        .collect()
}

/// All Dynkin roots, positive then negative.
pub fn dynkin_roots(q: &Quiver) -> Result<Vec<Root>> {
    let pos = positive_dynkin_roots(q)?;
    let neg: Vec<Root> = pos.iter().map(Root::neg).collect();
    Ok(pos.into_iter().chain(neg).collect())
}

pub fn classify_weight(q: &Quiver, xi: &[i64]) -> Result<WeightClass> {
    q.check_len(xi.len())?;
    let delta = q.delta()?;
    if delta.dot(xi) != 0 {
        return Ok(WeightClass::NotInLambda);
    }
    let pairings: Vec<i64> = positive_dynkin_roots(q)?.iter().map(|r| r.coords.dot(xi)).collect();
    Ok(if pairings.iter().all(|&p| p > 0) {
        WeightClass::LambdaPlusPlus
    } else if pairings.iter().all(|&p| p >= 0) {
        WeightClass::LambdaPlus
    } else {
        WeightClass::LambdaOnly
    })
}

/// Requires `lambda . delta = 1` (real part one, imaginary part zero).
pub(crate) fn require_normalized(q: &Quiver, lambda: &ParamVector) -> Result<()> {
    q.check_len(lambda.len())?;
    let delta = q.delta()?;
    let (re, im) = lambda.pair(&delta);
    if re != crate::rational::q(1) || !im.is_zero() {
        return Err(Error::NotNormalized(crate::rational::format_complex(&re, &im)));
    }
    Ok(())
}

/// The finite set of roots `a` with `lambda . a = 0`, sorted.
///
/// Imaginary roots never qualify since `lambda . k delta = k`. A real root
/// `a' + k delta` qualifies iff `k = -lambda . a'` is an integer.
pub fn roots_annihilated_by(q: &Quiver, lambda: &ParamVector) -> Result<Vec<Root>> {
    require_normalized(q, lambda)?;
    let delta = q.delta()?;
    let mut out = Vec::new();
    for dr in dynkin_roots(q)? {
        let (re, im) = lambda.pair(&dr.coords);
        if !im.is_zero() || !is_integer(&re) {
            continue;
        }
        let k = -i64::try_from(re.to_integer()).map_err(|_| Error::Invariant("pairing overflow".into()))?;
        let coords = dr.coords.scaled_add(k, &delta);
        let root = Root::classify(q, coords)
            .ok_or_else(|| Error::Invariant("shifted Dynkin root is not a root".into()))?;
        out.push(root);
    }
    out.sort();
    Ok(out)
}

/// `a -> a - (xi . a) delta` on each root.
pub fn shift_bijection(q: &Quiver, xi: &[i64], roots: &[Root]) -> Result<Vec<Root>> {
    q.check_len(xi.len())?;
    let delta = q.delta()?;
    let pairing = delta.dot(xi);
    if pairing != 0 {
        return Err(Error::NotInLambda(pairing));
    }
    roots
        .iter()
        .map(|r| {
            let coords = r.coords.scaled_add(-r.coords.dot(xi), &delta);
            Root::classify(q, coords).ok_or_else(|| Error::Invariant("shift left the root set".into()))
        })
        .collect()
}

/// Dynkin part `a' = a - (e_0 . a) delta` of a real root.
pub fn dynkin_part(q: &Quiver, alpha: &[i64]) -> Result<LatticeVector> {
    let delta = q.delta()?;
    Ok(LatticeVector(alpha.to_vec()).scaled_add(-alpha[0], &delta))
}
