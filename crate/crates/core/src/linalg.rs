//! Exact linear algebra over the rationals.
//!
//! Two tools: a dense nullspace for small integer matrices, and an incremental
//! sparse echelon basis whose pivots are always the *largest* column present in
//! a row. With columns numbered compatibly with a filtration, the rows whose
//! pivot lies at or below a level span the intersection of the row space with
//! that filtration level.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Q;

/// Basis of the right nullspace of an integer matrix, over Q.
pub fn nullspace(rows: &[Vec<i64>]) -> Vec<Vec<Q>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Q::from_integer(BigInt::from(x))).collect())
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..ncols {
                    let sub = &f * &m[r][k];
                    m[i][k] -= sub;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (row, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -m[row][f].clone();
            }
            v
        })
        .collect()
}

/// Scales a rational vector to a primitive integer vector whose first nonzero
/// entry is positive.
pub fn primitive_integer(v: &[Q]) -> Vec<i64> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return vec![0; v.len()];
    }
    let sign = ints.iter().find(|x| !x.is_zero()).map_or(1, |x| if x.is_negative() { -1 } else { 1 });
    ints.iter()
        .map(|x| {
            let y: BigInt = x / &g * sign;
            i64::try_from(y).expect("entry fits in i64")
        })
        .collect()
}

pub type SparseVec = BTreeMap<usize, Q>;

/// Incremental echelon basis of a subspace of Q^n.
#[derive(Debug, Default, Clone)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Pivot columns in increasing order.
    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Reduces `v` until its leading column is not a pivot column (or `v` is zero).
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        v.retain(|_, x| !x.is_zero());
        while let Some((&lead, coef)) = v.iter().next_back() {
            let Some(row) = self.pivots.get(&lead) else {
                break;
            };
            let f = coef / &row[&lead];
            for (&c, x) in row {
                let e = v.entry(c).or_insert_with(Q::zero);
                *e -= &f * x;
                if e.is_zero() {
                    v.remove(&c);
                }
            }
        }
        v
    }

    /// Inserts `v`; returns its new pivot column if it was independent.
    pub fn insert(&mut self, v: SparseVec) -> Option<usize> {
        let v = self.reduce(v);
        let (&lead, _) = v.iter().next_back()?;
        self.pivots.insert(lead, v);
        Some(lead)
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_empty()
    }
}

/// Rank of a family of sparse vectors.
pub fn rank<I: IntoIterator<Item = SparseVec>>(vectors: I) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}
