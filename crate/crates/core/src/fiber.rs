//! Coordinate ring of the zero fiber of the moment map for the cyclic quiver
//! with dimension vector `(1, ..., 1)`, and its semi-invariant slices.
//!
//! Variables: `a_i : i -> i+1` and `a_i* : i+1 -> i` (indices mod `n`). With
//! one-dimensional spaces at every vertex the moment map components are
//! `a_{i-1} a_{i-1}* - a_i a_i*`; they sum to zero, and the `n - 1` binomials
//! `a_i a_i* - a_0 a_0*` (`i >= 1`) generate the same ideal. Their leading
//! monomials `a_i a_i*` are pairwise coprime, so they form a Groebner basis
//! and normal forms of monomials are monomials. Every span question about
//! monomials therefore reduces to comparing sets of normal-form monomials.
//!
//! Weights: the variable of an arrow `i -> j` has torus weight `e_j - e_i`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, SparseVec};
use crate::rational::q;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(vars: usize) -> Self {
        Monomial(vec![0; vars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|a| a * k).collect())
    }
}

/// Binomial rewrite rule `lead -> tail`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Binomial {
    pub lead: Vec<u32>,
    pub tail: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub tail: usize,
    pub head: usize,
    pub dual: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberRing {
    pub n: usize,
    pub variables: Vec<Variable>,
    pub weights: Vec<Vec<i64>>,
    pub relations: Vec<Binomial>,
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.0.len() / 2;
        let mut first = true;
        for (v, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let star = if v >= n { "*" } else { "" };
            write!(f, "a{}{star}", v % n)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl FiberRing {
    pub fn var_count(&self) -> usize {
        2 * self.n
    }

    pub fn arrow(&self, i: usize) -> usize {
        i % self.n
    }

    pub fn dual(&self, i: usize) -> usize {
        self.n + i % self.n
    }

    pub fn weight(&self, m: &Monomial) -> Vec<i64> {
        let mut w = vec![0; self.n];
        for (v, &e) in m.0.iter().enumerate() {
            for (acc, x) in w.iter_mut().zip(&self.weights[v]) {
                *acc += i64::from(e) * x;
            }
        }
        w
    }

    /// One rewrite step with the first applicable relation (by index `>= from`).
    pub fn rewrite_once(&self, m: &Monomial, rule: usize) -> Option<Monomial> {
        let r = &self.relations[rule];
        let lead = Monomial(r.lead.clone());
        lead.divides(m).then(|| m.div(&lead).mul(&Monomial(r.tail.clone())))
    }

    pub fn is_normal(&self, m: &Monomial) -> bool {
        self.relations.iter().all(|r| !Monomial(r.lead.clone()).divides(m))
    }

    pub fn normal_form(&self, m: &Monomial) -> Monomial {
        // a_i a_i* -> a_0 a_0* applied to saturation at each i.
        let mut e = m.0.clone();
        for i in 1..self.n {
            let k = e[i].min(e[self.n + i]);
            e[i] -= k;
            e[self.n + i] -= k;
            e[0] += k;
            e[self.n] += k;
        }
        Monomial(e)
    }

    /// `x = a_0 a_0*`.
    pub fn x(&self) -> Monomial {
        let mut e = vec![0; self.var_count()];
        e[0] = 1;
        e[self.n] = 1;
        Monomial(e)
    }

    /// `A = a_0 a_1 ... a_{n-1}`.
    pub fn cycle(&self) -> Monomial {
        let mut e = vec![0; self.var_count()];
        e[..self.n].iter_mut().for_each(|x| *x = 1);
        Monomial(e)
    }

    /// `B = a_0* a_1* ... a_{n-1}*`.
    pub fn dual_cycle(&self) -> Monomial {
        let mut e = vec![0; self.var_count()];
        e[self.n..].iter_mut().for_each(|x| *x = 1);
        Monomial(e)
    }

    /// Exponent differences `c_i = e(a_i) - e(a_i*)`.
    fn log_coords(&self, m: &Monomial) -> Vec<i64> {
        (0..self.n).map(|i| i64::from(m.0[i]) - i64::from(m.0[self.n + i])).collect()
    }

    /// The involution exchanging each `a_i` with `a_i*`.
    pub fn swap_duals(&self, m: &Monomial) -> Monomial {
        let mut e = m.0[self.n..].to_vec();
        e.extend_from_slice(&m.0[..self.n]);
        Monomial(e)
    }

    /// Normal-form monomials of degree `d`, grouped by weight.
    pub fn normal_monomials_by_weight(&self, d: u32) -> BTreeMap<Vec<i64>, Vec<Monomial>> {
        let mut out: BTreeMap<Vec<i64>, Vec<Monomial>> = BTreeMap::new();
        let mut e = vec![0u32; self.var_count()];
        self.enumerate(0, d, &mut e, &mut |m| {
            out.entry(self.weight(m)).or_default().push(m.clone());
        });
        out.values_mut().for_each(|v| v.sort());
        out
    }

    fn enumerate(&self, v: usize, remaining: u32, e: &mut Vec<u32>, f: &mut dyn FnMut(&Monomial)) {
        if v == e.len() {
            if remaining == 0 {
                f(&Monomial(e.clone()));
            }
            return;
        }
        // a_i* with i >= 1 may only appear when a_i does not.
        let max = if v > self.n && e[v - self.n] > 0 { 0 } else { remaining };
        for k in 0..=max {
            e[v] = k;
            self.enumerate(v + 1, remaining - k, e, f);
        }
        e[v] = 0;
    }

    fn check_chi(&self, chi: &[i64]) -> Result<()> {
        if chi.len() != self.n {
            return Err(Error::Length { expected: self.n, got: chi.len() });
        }
        let s: i64 = chi.iter().sum();
        if s != 0 {
            return Err(Error::NotInLambda(s));
        }
        Ok(())
    }
}

pub fn build_fiber_ring(n: usize) -> Result<FiberRing> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("fiber ring needs n >= 2 vertices, got {n}")));
    }
    let mut variables = Vec::with_capacity(2 * n);
    let mut weights = Vec::with_capacity(2 * n);
    for dual in [false, true] {
        for i in 0..n {
            let (tail, head) = if dual { ((i + 1) % n, i) } else { (i, (i + 1) % n) };
            let star = if dual { "*" } else { "" };
            variables.push(Variable { name: format!("a{i}{star}"), tail, head, dual });
            let mut w = vec![0; n];
            w[head] += 1;
            w[tail] -= 1;
            weights.push(w);
        }
    }
    let unit = |v: usize| {
        let mut e = vec![0; 2 * n];
        e[v] += 1;
        e
    };
    let loop_at = |i: usize| -> Vec<u32> {
        let (a, b) = (unit(i), unit(n + i));
        a.iter().zip(&b).map(|(x, y)| x + y).collect()
    };
    let relations = (1..n).map(|i| Binomial { lead: loop_at(i), tail: loop_at(0) }).collect();
    let ring = FiberRing { n, variables, weights, relations };
    verify_moment_relations(&ring)?;
    verify_groebner(&ring)?;
    Ok(ring)
}

/// Moment map components per vertex, as vectors over the loops `x_i = a_i a_i*`
/// (index `i`). `sign` flips every component.
pub fn moment_components(n: usize, sign: i64) -> Vec<SparseVec> {
    (0..n)
        .map(|i| {
            let prev = (i + n - 1) % n;
            let mut v = SparseVec::new();
            *v.entry(prev).or_insert_with(|| q(0)) += q(sign);
            *v.entry(i).or_insert_with(|| q(0)) -= q(sign);
            v.retain(|_, x| *x != q(0));
            v
        })
        .collect()
}

/// The binomial relations span exactly the moment map components.
fn verify_moment_relations(ring: &FiberRing) -> Result<()> {
    let n = ring.n;
    let comps = moment_components(n, 1);
    let mut total = SparseVec::new();
    for c in &comps {
        for (k, x) in c {
            *total.entry(*k).or_insert_with(|| q(0)) += x;
        }
    }
    if total.values().any(|x| *x != q(0)) {
        return Err(Error::Invariant("moment components do not sum to zero".into()));
    }
    let rels: Vec<SparseVec> = ring
        .relations
        .iter()
        .map(|r| {
            let i = (0..n).find(|&i| r.lead[i] == 1 && r.lead[n + i] == 1).expect("loop relation");
            SparseVec::from([(i, q(1)), (0, q(-1))])
        })
        .collect();
    let rank_c = linalg::rank(comps.iter().cloned());
    let rank_r = linalg::rank(rels.iter().cloned());
    let rank_both = linalg::rank(comps.into_iter().chain(rels));
    if rank_c != n - 1 || rank_r != n - 1 || rank_both != n - 1 {
        return Err(Error::Invariant("relations do not match the moment map".into()));
    }
    Ok(())
}

/// All S-pairs of the binomial rules reduce to zero, and every rule is
/// decreasing for the degree-lexicographic order with `a_0, a_0*` smallest.
pub fn verify_groebner(ring: &FiberRing) -> Result<()> {
    let key = |m: &[u32]| -> (u32, Vec<u32>) {
        // Lexicographic on variables ordered a_{n-1}*, ..., a_1*, a_{n-1}, ..., a_1, a_0*, a_0.
        let n = ring.n;
        let mut order: Vec<u32> = (1..n).rev().map(|i| m[n + i]).collect();
        order.extend((1..n).rev().map(|i| m[i]));
        order.push(m[n]);
        order.push(m[0]);
        (m.iter().sum(), order)
    };
    for r in &ring.relations {
        if key(&r.lead) <= key(&r.tail) {
            return Err(Error::Invariant("rule is not decreasing".into()));
        }
    }
    for (i, ri) in ring.relations.iter().enumerate() {
        for rj in &ring.relations[i + 1..] {
            let (li, lj) = (Monomial(ri.lead.clone()), Monomial(rj.lead.clone()));
            let l = li.lcm(&lj);
            let left = l.div(&li).mul(&Monomial(ri.tail.clone()));
            let right = l.div(&lj).mul(&Monomial(rj.tail.clone()));
            if ring.normal_form(&left) != ring.normal_form(&right) {
                return Err(Error::Invariant("S-pair does not reduce to zero".into()));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedSlice {
    pub m: i64,
    pub degree: u32,
    pub dimension: usize,
    pub basis: Vec<String>,
    #[serde(skip)]
    pub monomials: Vec<Monomial>,
}

impl GradedSlice {
    fn new(m: i64, degree: u32, monomials: Vec<Monomial>) -> Self {
        GradedSlice {
            m,
            degree,
            dimension: monomials.len(),
            basis: monomials.iter().map(ToString::to_string).collect(),
            monomials,
        }
    }
}

fn scaled(chi: &[i64], m: i64) -> Vec<i64> {
    chi.iter().map(|x| x * m).collect()
}

/// Degree-`d` part of `S_m`, the `chi^m`-eigenspace.
pub fn slice(ring: &FiberRing, chi: &[i64], m: i64, d: u32) -> Result<GradedSlice> {
    ring.check_chi(chi)?;
    let mut by_weight = ring.normal_monomials_by_weight(d);
    Ok(GradedSlice::new(m, d, by_weight.remove(&scaled(chi, m)).unwrap_or_default()))
}

/// Normal-form monomials of degrees `0..=d_max`, grouped by weight; shared by
/// the checks below.
pub struct MonomialTable {
    by_degree: Vec<BTreeMap<Vec<i64>, Vec<Monomial>>>,
}

impl MonomialTable {
    pub fn new(ring: &FiberRing, d_max: u32) -> Self {
        let by_degree = (0..=d_max).into_par_iter().map(|d| ring.normal_monomials_by_weight(d)).collect();
        MonomialTable { by_degree }
    }

    pub fn d_max(&self) -> u32 {
        self.by_degree.len() as u32 - 1
    }

    pub fn get(&self, weight: &[i64], d: u32) -> &[Monomial] {
        self.by_degree.get(d as usize).and_then(|m| m.get(weight)).map_or(&[], Vec::as_slice)
    }

    /// All monomials of the given weight with degree at most `d_max`.
    pub fn up_to(&self, weight: &[i64]) -> Vec<&Monomial> {
        (0..=self.d_max()).flat_map(|d| self.get(weight, d)).collect()
    }
}

/// `dim (S_0)_d` for `d = 0..=d_max`.
pub fn invariant_hilbert(ring: &FiberRing, d_max: u32) -> Vec<usize> {
    let table = MonomialTable::new(ring, d_max);
    let zero = vec![0; ring.n];
    (0..=d_max).map(|d| table.get(&zero, d).len()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSpan {
    pub degree: u32,
    pub target_dim: usize,
    pub image_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurjectivityReport {
    pub left: i64,
    pub right: i64,
    pub d_max: u32,
    pub surjective: bool,
    pub first_failure: Option<u32>,
    pub degrees: Vec<DegreeSpan>,
}

/// Normal forms of all products `u v` with `u` in `lhs`, `v` in `rhs` and
/// total degree at most `d_max`, bucketed by degree.
fn product_image(ring: &FiberRing, lhs: &[&Monomial], rhs: &[&Monomial], d_max: u32) -> Vec<BTreeSet<Monomial>> {
    let mut image = vec![BTreeSet::new(); d_max as usize + 1];
    for u in lhs {
        for v in rhs {
            let d = u.degree() + v.degree();
            if d <= d_max {
                image[d as usize].insert(ring.normal_form(&u.mul(v)));
            }
        }
    }
    image
}

fn compare_spans(image: &[BTreeSet<Monomial>], table: &MonomialTable, target: &[i64]) -> (Vec<DegreeSpan>, Option<u32>) {
    let mut rows = Vec::new();
    let mut first = None;
    for d in 0..=table.d_max() {
        let tgt = table.get(target, d);
        let img = &image[d as usize];
        debug_assert!(img.iter().all(|m| tgt.binary_search(m).is_ok()));
        if img.len() != tgt.len() && first.is_none() {
            first = Some(d);
        }
        rows.push(DegreeSpan { degree: d, target_dim: tgt.len(), image_dim: img.len() });
    }
    (rows, first)
}

pub fn check_mult_surjective_with(table: &MonomialTable, ring: &FiberRing, chi: &[i64], left: i64, right: i64) -> SurjectivityReport {
    let d_max = table.d_max();
    let lhs = table.up_to(&scaled(chi, left));
    let rhs = table.up_to(&scaled(chi, right));
    let image = product_image(ring, &lhs, &rhs, d_max);
    let (degrees, first_failure) = compare_spans(&image, table, &scaled(chi, left + right));
    SurjectivityReport { left, right, d_max, surjective: first_failure.is_none(), first_failure, degrees }
}

/// Whether `S_left . S_right` spans `S_{left+right}` in every degree up to `d_max`.
pub fn check_mult_surjective(ring: &FiberRing, chi: &[i64], left: i64, right: i64, d_max: u32) -> Result<SurjectivityReport> {
    ring.check_chi(chi)?;
    if left < 0 || right < 0 {
        return Err(Error::InvalidArgument("powers must be nonnegative".into()));
    }
    Ok(check_mult_surjective_with(&MonomialTable::new(ring, d_max), ring, chi, left, right))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerFailure {
    pub j: u32,
    pub degree: u32,
    pub target_dim: usize,
    pub image_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerReport {
    pub power: i64,
    pub j_max: u32,
    pub d_max: u32,
    pub holds: bool,
    pub failures: Vec<PowerFailure>,
}

/// Checks `(S_N)^j = S_{jN}` degree-wise up to `d_max` for `1 <= j <= j_max`.
pub fn check_power_stabilization(ring: &FiberRing, chi: &[i64], power: i64, j_max: u32, d_max: u32) -> Result<PowerReport> {
    ring.check_chi(chi)?;
    if power < 1 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let table = MonomialTable::new(ring, d_max);
    let generators = table.up_to(&scaled(chi, power));
    let mut current: Vec<Monomial> = generators.iter().map(|m| (*m).clone()).collect();
    let mut failures = Vec::new();
    for j in 1..=j_max {
        if j > 1 {
            let prev: Vec<&Monomial> = current.iter().collect();
            let image = product_image(ring, &prev, &generators, d_max);
            current = image.into_iter().flatten().collect();
        }
        let target = scaled(chi, power * i64::from(j));
        for d in 0..=d_max {
            let tgt = table.get(&target, d).len();
            let img = current.iter().filter(|m| m.degree() == d).count();
            if tgt != img {
                failures.push(PowerFailure { j, degree: d, target_dim: tgt, image_dim: img });
            }
        }
    }
    Ok(PowerReport { power, j_max, d_max, holds: failures.is_empty(), failures })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalPassing {
    pub range: (i64, i64),
    pub d_max: u32,
    pub minimal_n: Option<i64>,
    pub reports: Vec<SurjectivityReport>,
}

/// Smallest `N` in `1..=max` such that `S_m S_k -> S_{m+k}` is surjective up to
/// `d_max` for all `N <= m, k <= max`.
pub fn minimal_surjective_power(ring: &FiberRing, chi: &[i64], max: i64, d_max: u32) -> Result<MinimalPassing> {
    ring.check_chi(chi)?;
    let table = MonomialTable::new(ring, d_max);
    let reports: Vec<SurjectivityReport> = (1..=max)
        .flat_map(|m| (1..=max).map(move |k| (m, k)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(m, k)| check_mult_surjective_with(&table, ring, chi, m, k))
        .collect();
    let passes = |n: i64| reports.iter().filter(|r| r.left >= n && r.right >= n).all(|r| r.surjective);
    let minimal_n = (1..=max).find(|&n| passes(n));
    Ok(MinimalPassing { range: (1, max), d_max, minimal_n, reports })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KleinianReport {
    pub n: usize,
    pub d_max: u32,
    /// Normal form of `A B`, expected to be `x^n`.
    pub ab_normal_form: String,
    pub ab_is_x_power: bool,
    pub spanning: bool,
    pub failing_degrees: Vec<u32>,
    pub hilbert: Vec<usize>,
    pub passed: bool,
}

/// Checks that `S_0` is spanned by monomials in `x`, `A`, `B` up to `d_max` and
/// that `A B = x^n` in the fiber ring.
pub fn verify_kleinian_presentation(ring: &FiberRing, d_max: u32) -> KleinianReport {
    let n = ring.n as u32;
    let (x, a, b) = (ring.x(), ring.cycle(), ring.dual_cycle());
    let ab = ring.normal_form(&a.mul(&b));
    let ab_is_x_power = ab == x.pow(n);

    let mut generated = vec![BTreeSet::new(); d_max as usize + 1];
    for i in 0..=d_max / 2 {
        for j in 0..=d_max / n {
            for k in 0..=d_max / n {
                let m = x.pow(i).mul(&a.pow(j)).mul(&b.pow(k));
                if m.degree() <= d_max {
                    generated[m.degree() as usize].insert(ring.normal_form(&m));
                }
            }
        }
    }
    let table = MonomialTable::new(ring, d_max);
    let zero = vec![0; ring.n];
    let (rows, _) = compare_spans(&generated, &table, &zero);
    let failing_degrees: Vec<u32> = rows.iter().filter(|r| r.image_dim != r.target_dim).map(|r| r.degree).collect();
    let spanning = failing_degrees.is_empty();
    KleinianReport {
        n: ring.n,
        d_max,
        ab_normal_form: ab.to_string(),
        ab_is_x_power,
        spanning,
        failing_degrees,
        hilbert: rows.iter().map(|r| r.target_dim).collect(),
        passed: ab_is_x_power && spanning,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOneReport {
    pub m: i64,
    pub d_max: u32,
    /// The reference monomial `u`; `None` when the slice is empty in range.
    pub generator: Option<String>,
    /// For each basis monomial `w`, the pair `(k, c)` with `w = u x^k A^c` after
    /// inverting `x` (`A^{-1} = B x^{-n}`).
    pub quotients: Vec<(String, i64, i64)>,
    pub holds: bool,
}

/// Exhibits every monomial of `S_m` (degree `<= d_max`) as `u` times an element
/// of `S_0[x^-1]` for one fixed monomial `u`.
pub fn rank_one_proxy(ring: &FiberRing, chi: &[i64], m: i64, d_max: u32) -> Result<RankOneReport> {
    ring.check_chi(chi)?;
    let table = MonomialTable::new(ring, d_max);
    let basis = table.up_to(&scaled(chi, m));
    let Some(u) = basis.first() else {
        return Ok(RankOneReport { m, d_max, generator: None, quotients: vec![], holds: true });
    };
    let cu = ring.log_coords(u);
    let fu: i64 = u.0[ring.n..].iter().map(|&x| i64::from(x)).sum();
    let mut holds = true;
    let mut quotients = Vec::new();
    for w in &basis {
        let diff: Vec<i64> = ring.log_coords(w).iter().zip(&cu).map(|(a, b)| a - b).collect();
        let c = diff[0];
        if diff.iter().any(|&x| x != c) {
            holds = false;
            continue;
        }
        // In the localization a_i* = x / a_i, so w = x^{sum f(w)} prod a_i^{c_i(w)}.
        let fw: i64 = w.0[ring.n..].iter().map(|&x| i64::from(x)).sum();
        quotients.push((w.to_string(), fw - fu, c));
    }
    Ok(RankOneReport { m, d_max, generator: Some(u.to_string()), quotients, holds })
}
