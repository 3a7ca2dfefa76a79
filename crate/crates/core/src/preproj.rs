//! Filtration dimensions of deformed preprojective algebras by truncated
//! linear algebra on paths of the double quiver.
//!
//! Paths compose right to left: `p q` traverses `q` first. The relation at
//! vertex `i` is the vertex-`i` part of `sum_a [a, a*] - lambda`, namely
//! `sum_{h(a)=i} a a* - sum_{t(a)=i} a* a - lambda_i e_i`. The dimension of
//! `F_l(e_i P e_j)` is bounded above by the number of paths `j -> i` of length
//! `<= l` minus the dimension of the span of `p rho_k q` (length `<= l + b`)
//! intersected with the length-`<= l` paths, where `b` is the buffer. The
//! bound is exact once the ideal's filtered pieces are reached; agreement with
//! the Molien oracle certifies it.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::molien;
use crate::quiver::{Quiver, QuiverType};
use crate::rational::{self, Q};

/// Hard cap on the number of path columns per vertex pair.
pub const MAX_COLUMNS: usize = 200_000;

/// Paths of the double quiver starting at a vertex, stored in traversal order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Path {
    start: usize,
    arrows: Vec<u16>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationTable {
    #[serde(rename = "type")]
    pub ty: QuiverType,
    #[serde(with = "rational::serde_vec")]
    pub lambda: Vec<Q>,
    pub max_length: usize,
    pub buffer: usize,
    /// `dims[i][j][l]`: upper bound on `dim F_l(e_i P e_j)`.
    pub dims: Vec<Vec<Vec<usize>>>,
}

impl FiltrationTable {
    pub fn spherical(&self) -> &[usize] {
        &self.dims[0][0]
    }
}

struct Doubled {
    n: usize,
    /// (tail, head) for every arrow of the double quiver.
    ends: Vec<(usize, usize)>,
    /// Loops appearing in each vertex relation: (coefficient, [first, second]) in
    /// traversal order.
    relation_loops: Vec<Vec<(i64, [u16; 2])>>,
}

impl Doubled {
    fn new(q: &Quiver) -> Result<Self> {
        let base = q.undoubled();
        let dq = base.double()?;
        let n = dq.vertex_count();
        let m = base.arrows().len();
        let ends: Vec<(usize, usize)> = dq.arrows().iter().map(|a| (a.tail, a.head)).collect();
        let mut relation_loops = vec![Vec::new(); n];
        for (k, a) in base.arrows().iter().enumerate() {
            let (arr, star) = (k as u16, (m + k) as u16);
            // a a*: traverse a* then a, a loop at h(a).
            relation_loops[a.head].push((1, [star, arr]));
            // a* a: traverse a then a*, a loop at t(a).
            relation_loops[a.tail].push((-1, [arr, star]));
        }
        Ok(Doubled { n, ends, relation_loops })
    }

    fn end(&self, p: &Path) -> usize {
        p.arrows.last().map_or(p.start, |&a| self.ends[a as usize].1)
    }

    /// `paths[v][len]`: all paths from `v` of length `len`, sorted.
    fn paths_from(&self, max_len: usize) -> Vec<Vec<Vec<Path>>> {
        (0..self.n)
            .map(|v| {
                let mut by_len = vec![vec![Path { start: v, arrows: vec![] }]];
                for _ in 0..max_len {
                    let next: Vec<Path> = by_len
                        .last()
                        .unwrap()
                        .iter()
                        .flat_map(|p| {
                            let end = self.end(p);
                            self.ends.iter().enumerate().filter(move |(_, e)| e.0 == end).map(move |(a, _)| {
                                let mut arrows = p.arrows.clone();
                                arrows.push(a as u16);
                                Path { start: v, arrows }
                            })
                        })
                        .collect();
                    by_len.push(next);
                }
                by_len
            })
            .collect()
    }
}

fn concat(first: &Path, middle: &[u16], last: &Path) -> Path {
    let mut arrows = first.arrows.clone();
    arrows.extend_from_slice(middle);
    arrows.extend_from_slice(&last.arrows);
    Path { start: first.start, arrows }
}

/// Dimensions for one source/target pair, for lengths `0..=max_len`.
fn pair_dims(
    dq: &Doubled,
    paths: &[Vec<Vec<Path>>],
    lambda: &[Q],
    source: usize,
    target: usize,
    max_len: usize,
    buffer: usize,
) -> Result<Vec<usize>> {
    let top = max_len + buffer;
    // Columns ordered by length, then lexicographically: pivots are longest terms.
    let columns: Vec<&Path> = paths[source][..=top]
        .iter()
        .flat_map(|layer| layer.iter().filter(|p| dq.end(p) == target))
        .collect();
    if columns.len() > MAX_COLUMNS {
        return Err(Error::ResourceLimit { what: "path columns", size: columns.len(), limit: MAX_COLUMNS });
    }
    let index: HashMap<&Path, usize> = columns.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let length_of = |c: usize| columns[c].arrows.len();

    let mut echelon = Echelon::new();
    for k in (0..dq.n).filter(|_| top >= 2) {
        // q : source -> k traversed first, p : k -> target traversed last.
        for lq in 0..=top - 2 {
            for qpath in paths[source][lq].iter().filter(|p| dq.end(p) == k) {
                for lp in 0..=(top - 2 - lq) {
                    for ppath in paths[k][lp].iter().filter(|p| dq.end(p) == target) {
                        let mut row = SparseVec::new();
                        for (coef, lp2) in &dq.relation_loops[k] {
                            let c = index[&concat(qpath, lp2, ppath)];
                            *row.entry(c).or_insert_with(Q::zero) += Q::from_integer((*coef).into());
                        }
                        if !lambda[k].is_zero() {
                            let c = index[&concat(qpath, &[], ppath)];
                            *row.entry(c).or_insert_with(Q::zero) -= &lambda[k];
                        }
                        echelon.insert(row);
                    }
                }
            }
        }
    }

    let mut pivots_at = vec![0usize; top + 1];
    for c in echelon.pivot_columns() {
        pivots_at[length_of(c)] += 1;
    }
    let mut out = Vec::with_capacity(max_len + 1);
    let (mut paths_le, mut pivots_le) = (0usize, 0usize);
    for l in 0..=max_len {
        paths_le += paths[source][l].iter().filter(|p| dq.end(p) == target).count();
        pivots_le += pivots_at[l];
        out.push(paths_le - pivots_le);
    }
    Ok(out)
}

/// Upper bounds on `dim F_l(e_i P^lambda e_j)` for all vertex pairs.
pub fn truncated_dims(q: &Quiver, lambda: &[Q], max_length: usize, buffer: usize) -> Result<FiltrationTable> {
    q.check_len(lambda.len())?;
    let dq = Doubled::new(q)?;
    let top = max_length + buffer;
    let paths = dq.paths_from(top);
    let total: usize = paths.iter().map(|v| v.iter().map(Vec::len).sum::<usize>()).sum();
    if total > MAX_COLUMNS * dq.n {
        return Err(Error::ResourceLimit { what: "paths", size: total, limit: MAX_COLUMNS * dq.n });
    }
    let n = dq.n;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let flat: Vec<Vec<usize>> = pairs
        .par_iter()
        .map(|&(i, j)| pair_dims(&dq, &paths, lambda, j, i, max_length, buffer))
        .collect::<Result<_>>()?;
    let mut dims = vec![vec![Vec::new(); n]; n];
    for ((i, j), d) in pairs.into_iter().zip(flat) {
        dims[i][j] = d;
    }
    Ok(FiltrationTable { ty: q.ty(), lambda: lambda.to_vec(), max_length, buffer, dims })
}

/// The `e_0 - e_0` row: filtration dimensions of the spherical subalgebra.
pub fn spherical_dims(q: &Quiver, lambda: &[Q], max_length: usize, buffer: usize) -> Result<Vec<usize>> {
    q.check_len(lambda.len())?;
    let dq = Doubled::new(q)?;
    let paths = dq.paths_from(max_length + buffer);
    pair_dims(&dq, &paths, lambda, 0, 0, max_length, buffer)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MolienComparison {
    pub spherical: Vec<usize>,
    pub molien_cumulative: Vec<u64>,
    pub upper_bound_holds: bool,
    pub agrees: bool,
    /// First length where the truncation over-counts ("truncation artifact").
    pub truncation_artifact: Option<usize>,
}

pub fn compare_with_molien(spherical: &[usize], molien_dims: &[u64]) -> MolienComparison {
    let cum = molien::cumulative(molien_dims);
    let upper_bound_holds = spherical.iter().zip(&cum).all(|(&s, &m)| s as u64 >= m);
    let truncation_artifact = spherical.iter().zip(&cum).position(|(&s, &m)| s as u64 != m);
    MolienComparison {
        spherical: spherical.to_vec(),
        molien_cumulative: cum[..spherical.len().min(cum.len())].to_vec(),
        upper_bound_holds,
        agrees: truncation_artifact.is_none() && spherical.len() <= cum.len(),
        truncation_artifact,
    }
}

/// Compares the spherical dimensions with the Molien series of the McKay group.
pub fn molien_check(q: &Quiver, lambda: &[Q], max_length: usize, buffer: usize) -> Result<MolienComparison> {
    let group = molien::GroupType::for_quiver(q.ty())
        .ok_or_else(|| Error::InvalidArgument(format!("no Molien oracle for type {}", q.ty())))?;
    let sph = spherical_dims(q, lambda, max_length, buffer)?;
    let mol = molien::molien_for(group, max_length)?;
    Ok(compare_with_molien(&sph, &mol))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BufferStabilization {
    pub buffers: Vec<usize>,
    pub spherical: Vec<Vec<usize>>,
    pub stable: bool,
}

/// Spherical dimensions for each buffer; stable when they all coincide.
pub fn buffer_stabilization(q: &Quiver, lambda: &[Q], max_length: usize, buffers: &[usize]) -> Result<BufferStabilization> {
    let spherical: Vec<Vec<usize>> = buffers
        .iter()
        .map(|&b| spherical_dims(q, lambda, max_length, b))
        .collect::<Result<_>>()?;
    let stable = spherical.windows(2).all(|w| w[0] == w[1]);
    Ok(BufferStabilization { buffers: buffers.to_vec(), spherical, stable })
}

/// A parameter with `lambda . delta = 1` is needed for the deformation to be
/// flat; this helper checks it without rejecting other inputs.
pub fn is_normalized(q: &Quiver, lambda: &[Q]) -> Result<bool> {
    let delta = q.delta()?;
    Ok(rational::dot_int(lambda, &delta).is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::build_from_label;
    use crate::rational::frac;

    #[test]
    fn a1_length_two() {
        let q = build_from_label("A1").unwrap();
        let lam = vec![frac(1, 2), frac(1, 2)];
        assert_eq!(spherical_dims(&q, &lam, 2, 0).unwrap(), vec![1, 1, 4]);
    }

    #[test]
    fn length_zero_is_identity() {
        for ty in ["A1", "A2", "D4"] {
            let q = build_from_label(ty).unwrap();
            let n = q.vertex_count();
            let lam = vec![Q::zero(); n];
            let t = truncated_dims(&q, &lam, 0, 0).unwrap();
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(t.dims[i][j], vec![usize::from(i == j)]);
                }
            }
        }
    }

    #[test]
    fn a1_matches_z2_molien() {
        let q = build_from_label("A1").unwrap();
        let lam = vec![frac(1, 2), frac(1, 2)];
        let sph = spherical_dims(&q, &lam, 8, 0).unwrap();
        assert_eq!(sph, vec![1, 1, 4, 4, 9, 9, 16, 16, 25]);
        let cmp = molien_check(&q, &lam, 8, 0).unwrap();
        assert!(cmp.agrees && cmp.upper_bound_holds);
    }

    #[test]
    fn a2_length_three() {
        let q = build_from_label("A2").unwrap();
        let lam = vec![frac(1, 3), frac(1, 3), frac(1, 3)];
        assert_eq!(spherical_dims(&q, &lam, 3, 0).unwrap()[3], 4);
    }

    #[test]
    fn monotone_in_length() {
        let q = build_from_label("A2").unwrap();
        let lam = vec![frac(1, 2), frac(1, 3), frac(1, 6)];
        let t = truncated_dims(&q, &lam, 5, 1).unwrap();
        for row in &t.dims {
            for d in row {
                assert!(d.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }

    #[test]
    fn artifact_is_reported() {
        let cmp = compare_with_molien(&[1, 1, 5], &[1, 0, 3]);
        assert_eq!(cmp.truncation_artifact, Some(2));
        assert!(cmp.upper_bound_holds);
        assert!(!cmp.agrees);
    }

    #[test]
    fn undeformed_case_matches_too() {
        let q = build_from_label("A1").unwrap();
        let zero = vec![Q::zero(); 2];
        let cmp = molien_check(&q, &zero, 6, 0).unwrap();
        assert!(cmp.agrees, "{cmp:?}");
    }

    #[test]
    fn table_json_round_trip() {
        let q = build_from_label("A1").unwrap();
        let t = truncated_dims(&q, &[frac(1, 2), frac(1, 2)], 3, 1).unwrap();
        let js = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<FiltrationTable>(&js).unwrap(), t);
    }
}
