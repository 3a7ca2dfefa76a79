//! Finite subgroups of SL(2) with exact cyclotomic entries, and their Molien
//! series on `C[x, y]`.
//!
//! Entries live in `Q(zeta_m)`, stored as coefficient vectors reduced modulo
//! the cyclotomic polynomial `Phi_m`. Only cyclic groups `Z/n` and binary
//! dihedral groups `BD_{4n}` are built; the tetrahedral, octahedral and
//! icosahedral groups would need `zeta_8`, `zeta_5` and `sqrt 2` style
//! generators but otherwise plug into the same machinery.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::QuiverType;
use crate::rational::{q, Q};

/// `Phi_m` as integer coefficients, lowest degree first.
pub fn cyclotomic_polynomial(m: usize) -> Vec<i64> {
    // x^m - 1 divided by Phi_d for every proper divisor d.
    let mut num = vec![0i64; m + 1];
    num[0] = -1;
    num[m] = 1;
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        num = poly_div_exact(&num, &cyclotomic_polynomial(d));
    }
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    debug_assert!(lead == 1);
    let mut quot = vec![0i64; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd] / lead;
        quot[k] = c;
        for (i, &x) in den.iter().enumerate() {
            rem[k + i] -= c * x;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    quot
}

/// Element of `Q(zeta_m)` in the power basis `1, zeta, ..., zeta^{phi(m)-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyclo {
    coeffs: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloField {
    m: usize,
    modulus: Vec<i64>,
}

impl CycloField {
    pub fn new(m: usize) -> Self {
        CycloField { m, modulus: cyclotomic_polynomial(m) }
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn reduce(&self, mut c: Vec<Q>) -> Cyclo {
        let d = self.degree();
        for k in (d..c.len()).rev() {
            let top = std::mem::replace(&mut c[k], Q::zero());
            if top.is_zero() {
                continue;
            }
            for (i, &x) in self.modulus.iter().enumerate().take(d) {
                c[k - d + i] -= &top * q(x);
            }
        }
        c.truncate(d);
        c.resize(d, Q::zero());
        Cyclo { coeffs: c }
    }

    pub fn rational(&self, x: Q) -> Cyclo {
        let mut c = vec![Q::zero(); self.degree()];
        c[0] = x;
        Cyclo { coeffs: c }
    }

    pub fn zero(&self) -> Cyclo {
        self.rational(Q::zero())
    }

    pub fn one(&self) -> Cyclo {
        self.rational(Q::one())
    }

    /// `zeta^k` for any integer `k`.
    pub fn zeta_pow(&self, k: i64) -> Cyclo {
        let e = k.rem_euclid(self.m as i64) as usize;
        let mut c = vec![Q::zero(); e + 1];
        c[e] = Q::one();
        self.reduce(c)
    }

    pub fn add(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        Cyclo { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        Cyclo { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect() }
    }

    pub fn mul(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        let mut c = vec![Q::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        self.reduce(c)
    }

    pub fn scale(&self, a: &Cyclo, s: &Q) -> Cyclo {
        Cyclo { coeffs: a.coeffs.iter().map(|x| x * s).collect() }
    }
}

impl Cyclo {
    /// The value as a rational, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<Q> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0].clone())
    }
}

/// 2x2 matrix `[[a, b], [c, d]]` over `Q(zeta_m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub entries: [Cyclo; 4],
}

impl Mat2 {
    fn mul(&self, other: &Mat2, k: &CycloField) -> Mat2 {
        let [a, b, c, d] = &self.entries;
        let [e, f, g, h] = &other.entries;
        Mat2 {
            entries: [
                k.add(&k.mul(a, e), &k.mul(b, g)),
                k.add(&k.mul(a, f), &k.mul(b, h)),
                k.add(&k.mul(c, e), &k.mul(d, g)),
                k.add(&k.mul(c, f), &k.mul(d, h)),
            ],
        }
    }

    pub fn trace(&self, k: &CycloField) -> Cyclo {
        k.add(&self.entries[0], &self.entries[3])
    }

    pub fn det(&self, k: &CycloField) -> Cyclo {
        let [a, b, c, d] = &self.entries;
        k.sub(&k.mul(a, d), &k.mul(b, c))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupType {
    /// `Z/n`.
    Cyclic(usize),
    /// Binary dihedral group of order `4n`.
    BinaryDihedral(usize),
}

impl GroupType {
    pub fn order(self) -> usize {
        match self {
            GroupType::Cyclic(n) => n,
            GroupType::BinaryDihedral(n) => 4 * n,
        }
    }

    /// Quiver attached by the McKay correspondence.
    pub fn mckay_type(self) -> Option<QuiverType> {
        match self {
            GroupType::Cyclic(n) if n >= 2 => Some(QuiverType::A(n - 1)),
            GroupType::BinaryDihedral(n) => Some(QuiverType::D(n + 2)),
            GroupType::Cyclic(_) => None,
        }
    }

    pub fn for_quiver(ty: QuiverType) -> Option<GroupType> {
        match ty {
            QuiverType::A(n) => Some(GroupType::Cyclic(n + 1)),
            QuiverType::D(n) => Some(GroupType::BinaryDihedral(n - 2)),
            _ => None,
        }
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupType::Cyclic(n) => write!(f, "Z{n}"),
            GroupType::BinaryDihedral(n) => write!(f, "BD{}", 4 * n),
        }
    }
}

impl FromStr for GroupType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_uppercase();
        let err = || Error::InvalidGroup(s.to_string());
        if let Some(rest) = t.strip_prefix("BD") {
            let order: usize = rest.parse().map_err(|_| err())?;
            if !order.is_multiple_of(4) || order < 8 {
                return Err(err());
            }
            Ok(GroupType::BinaryDihedral(order / 4))
        } else if let Some(rest) = t.strip_prefix('Z') {
            let n: usize = rest.parse().map_err(|_| err())?;
            if n == 0 {
                return Err(err());
            }
            Ok(GroupType::Cyclic(n))
        } else {
            Err(err())
        }
    }
}

impl Serialize for GroupType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Explicit finite subgroup of SL(2) over a cyclotomic field.
#[derive(Clone, Debug)]
pub struct Group {
    pub label: GroupType,
    pub field: CycloField,
    pub elements: Vec<Mat2>,
}

impl Group {
    pub fn build(label: GroupType) -> Result<Group> {
        let (m, gens) = match label {
            GroupType::Cyclic(n) => (n, vec![diag_root(n, n)]),
            GroupType::BinaryDihedral(n) => {
                let m = 2 * n;
                let k = CycloField::new(m);
                let tau = Mat2 { entries: [k.zero(), k.one(), k.rational(q(-1)), k.zero()] };
                (m, vec![diag_root(m, m), tau])
            }
        };
        let field = CycloField::new(m);
        let elements = closure(&field, &gens);
        let group = Group { label, field, elements };
        group.validate()?;
        Ok(group)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Every element has determinant one, the set is closed under products, and
    /// it has the expected order.
    pub fn validate(&self) -> Result<()> {
        let k = &self.field;
        if self.elements.len() != self.label.order() {
            return Err(Error::Invariant(format!("{} generated {} elements", self.label, self.elements.len())));
        }
        if self.elements.iter().any(|g| g.det(k) != k.one()) {
            return Err(Error::Invariant(format!("{} has an element of determinant != 1", self.label)));
        }
        let set: std::collections::HashSet<&Mat2> = self.elements.iter().collect();
        for a in &self.elements {
            for b in &self.elements {
                if !set.contains(&a.mul(b, k)) {
                    return Err(Error::Invariant(format!("{} is not closed under products", self.label)));
                }
            }
        }
        Ok(())
    }
}

fn diag_root(m: usize, order: usize) -> Mat2 {
    let k = CycloField::new(m);
    let step = (m / order) as i64;
    Mat2 { entries: [k.zeta_pow(step), k.zero(), k.zero(), k.zeta_pow(-step)] }
}

fn closure(k: &CycloField, gens: &[Mat2]) -> Vec<Mat2> {
    let id = Mat2 { entries: [k.one(), k.zero(), k.zero(), k.one()] };
    let mut seen = std::collections::HashSet::new();
    let mut out = vec![];
    let mut queue = std::collections::VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        if !seen.insert(g.clone()) {
            continue;
        }
        for s in gens {
            let h = g.mul(s, k);
            if !seen.contains(&h) {
                queue.push_back(h);
            }
        }
        out.push(g);
    }
    out
}

/// Dimensions of the degree-`d` invariants of `C[x, y]` for `d = 0..=d_max`,
/// by averaging `1 / det(1 - t g) = 1 / (1 - tr(g) t + t^2)` over the group.
pub fn molien_dims(group: &Group, d_max: usize) -> Result<Vec<u64>> {
    let k = &group.field;
    let mut total = vec![k.zero(); d_max + 1];
    for g in &group.elements {
        let (tr, det) = (g.trace(k), g.det(k));
        let mut prev2 = k.zero();
        let mut prev = k.one();
        total[0] = k.add(&total[0], &prev);
        for slot in total.iter_mut().skip(1) {
            let next = k.sub(&k.mul(&tr, &prev), &k.mul(&det, &prev2));
            *slot = k.add(slot, &next);
            prev2 = std::mem::replace(&mut prev, next);
        }
    }
    let inv = Q::new(1.into(), (group.order() as i64).into());
    total
        .iter()
        .map(|c| {
            let v = k.scale(c, &inv).as_rational().ok_or_else(|| Error::Invariant("Molien coefficient is irrational".into()))?;
            if !v.denom().is_one() || v < Q::zero() {
                return Err(Error::Invariant(format!("Molien coefficient {v} is not a natural number")));
            }
            u64::try_from(v.to_integer()).map_err(|_| Error::Invariant("Molien coefficient overflow".into()))
        })
        .collect()
}

pub fn molien_for(label: GroupType, d_max: usize) -> Result<Vec<u64>> {
    molien_dims(&Group::build(label)?, d_max)
}

/// Running sums `sum_{e <= d} dims[e]`.
pub fn cumulative(dims: &[u64]) -> Vec<u64> {
    dims.iter()
        .scan(0u64, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}
