//! Extended Dynkin quivers, their doubles, the Tits form, the minimal
//! imaginary root and the defect vector.
//!
//! Canonical orientations: type `A_n` is the cycle `0 -> 1 -> ... -> n -> 0`;
//! types `D` and `E` are trees oriented away from the extending vertex `0`.
//!
//! Vertex labels:
//! * `D_n` (n + 1 vertices): leaves `0, 1` hang off vertex `4`, leaves `2, 3`
//!   hang off vertex `n`, and `4 - 5 - ... - n` is a chain. For `D_4` the
//!   center is vertex `4`.
//! * `E_6`, `E_7`, `E_8`: Bourbaki labels `1..r` for the finite diagram, with
//!   `0` attached to the node that the highest root touches.

use std::fmt;
use std::ops::{Deref, DerefMut};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuiverType {
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
}

impl QuiverType {
    pub fn vertex_count(self) -> usize {
        match self {
            QuiverType::A(n) | QuiverType::D(n) => n + 1,
            QuiverType::E6 => 7,
            QuiverType::E7 => 8,
            QuiverType::E8 => 9,
        }
    }

    /// Undirected edges of the extended Dynkin diagram, in table order.
    fn edges(self) -> Vec<(usize, usize)> {
        match self {
            QuiverType::A(n) => (0..=n).map(|i| (i, (i + 1) % (n + 1))).collect(),
            QuiverType::D(n) => {
                let mut e = vec![(0, 4), (1, 4), (2, n), (3, n)];
                e.extend((4..n).map(|i| (i, i + 1)));
                e
            }
            QuiverType::E6 => vec![(0, 2), (2, 4), (1, 3), (3, 4), (4, 5), (5, 6)],
            QuiverType::E7 => vec![(0, 1), (1, 3), (3, 4), (2, 4), (4, 5), (5, 6), (6, 7)],
            QuiverType::E8 => vec![(0, 8), (8, 7), (7, 6), (6, 5), (5, 4), (4, 3), (3, 1), (2, 4)],
        }
    }

    /// Tabulated minimal imaginary roots; used only to validate the kernel computation.
    pub fn delta_table(self) -> Vec<i64> {
        match self {
            QuiverType::A(n) => vec![1; n + 1],
            QuiverType::D(n) => {
                let mut d = vec![1, 1, 1, 1];
                d.extend(std::iter::repeat_n(2, n - 3));
                d
            }
            QuiverType::E6 => vec![1, 1, 2, 2, 3, 2, 1],
            QuiverType::E7 => vec![1, 2, 2, 3, 4, 3, 2, 1],
            QuiverType::E8 => vec![1, 2, 3, 4, 6, 5, 4, 3, 2],
        }
    }
}

impl fmt::Display for QuiverType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuiverType::A(n) => write!(f, "A{n}"),
            QuiverType::D(n) => write!(f, "D{n}"),
            QuiverType::E6 => f.write_str("E6"),
            QuiverType::E7 => f.write_str("E7"),
            QuiverType::E8 => f.write_str("E8"),
        }
    }
}

impl FromStr for QuiverType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().replace('_', "");
        let err = || Error::InvalidType(s.to_string());
        let (head, rest) = t.split_at(t.chars().next().map_or(0, char::len_utf8));
        let n: usize = rest.parse().map_err(|_| err())?;
        match (head.to_ascii_uppercase().as_str(), n) {
            ("A", n) if n >= 1 => Ok(QuiverType::A(n)),
            ("D", n) if n >= 4 => Ok(QuiverType::D(n)),
            ("E", 6) => Ok(QuiverType::E6),
            ("E", 7) => Ok(QuiverType::E7),
            ("E", 8) => Ok(QuiverType::E8),
            _ => Err(err()),
        }
    }
}

impl Serialize for QuiverType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QuiverType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Integer vector indexed by the vertices of a quiver.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn zero(len: usize) -> Self {
        LatticeVector(vec![0; len])
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = vec![0; len];
        v[i] = 1;
        LatticeVector(v)
    }

    pub fn dot(&self, other: &[i64]) -> i64 {
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn scaled_add(&self, k: i64, other: &[i64]) -> LatticeVector {
        LatticeVector(self.0.iter().zip(other).map(|(a, b)| a + k * b).collect())
    }

    pub fn neg(&self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|x| -x).collect())
    }
}

impl Deref for LatticeVector {
    type Target = [i64];

    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl DerefMut for LatticeVector {
    fn deref_mut(&mut self) -> &mut [i64] {
        &mut self.0
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        LatticeVector(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub tail: usize,
    pub head: usize,
    pub dual: bool,
}

/// An extended Dynkin quiver, possibly doubled. Vertex `0` is the extending vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "QuiverDoc", into = "QuiverDoc")]
pub struct Quiver {
    ty: QuiverType,
    arrows: Vec<Arrow>,
}

/// Wire form: `{type, vertices, extending, arrows}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct QuiverDoc {
    #[serde(rename = "type")]
    ty: QuiverType,
    vertices: Vec<usize>,
    extending: usize,
    arrows: Vec<Arrow>,
}

impl From<Quiver> for QuiverDoc {
    fn from(q: Quiver) -> Self {
        QuiverDoc {
            ty: q.ty,
            vertices: (0..q.vertex_count()).collect(),
            extending: 0,
            arrows: q.arrows,
        }
    }
}

impl TryFrom<QuiverDoc> for Quiver {
    type Error = Error;

    fn try_from(doc: QuiverDoc) -> Result<Self> {
        let base = build_extended_dynkin(doc.ty);
        let candidate = if doc.arrows.iter().any(|a| a.dual) { base.double()? } else { base };
        if doc.extending != 0
            || doc.vertices != (0..candidate.vertex_count()).collect::<Vec<_>>()
            || doc.arrows != candidate.arrows
        {
            return Err(Error::InvalidArgument(format!(
                "quiver document does not match the canonical {} quiver",
                doc.ty
            )));
        }
        Ok(candidate)
    }
}

pub fn build_extended_dynkin(ty: QuiverType) -> Quiver {
    let arrows = match ty {
        QuiverType::A(_) => ty.edges(),
        _ => orient_away_from_root(ty.vertex_count(), &ty.edges()),
    }
    .into_iter()
    .map(|(tail, head)| Arrow { tail, head, dual: false })
    .collect();
    Quiver { ty, arrows }
}

/// Parses a type label and builds the quiver.
pub fn build_from_label(label: &str) -> Result<Quiver> {
    Ok(build_extended_dynkin(label.parse()?))
}

fn orient_away_from_root(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut depth = vec![usize::MAX; n];
    depth[0] = 0;
    let mut frontier = vec![0];
    while let Some(v) = frontier.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && depth[y] == usize::MAX {
                    depth[y] = depth[v] + 1;
                    frontier.push(y);
                }
            }
        }
    }
    edges.iter().map(|&(a, b)| if depth[a] < depth[b] { (a, b) } else { (b, a) }).collect()
}

impl Quiver {
    pub fn ty(&self) -> QuiverType {
        self.ty
    }

    pub fn vertex_count(&self) -> usize {
        self.ty.vertex_count()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn is_doubled(&self) -> bool {
        self.arrows.iter().any(|a| a.dual)
    }

    pub fn double(&self) -> Result<Quiver> {
        if self.is_doubled() {
            return Err(Error::AlreadyDoubled);
        }
        let duals = self.arrows.iter().map(|a| Arrow { tail: a.head, head: a.tail, dual: true });
        let arrows = self.arrows.iter().copied().chain(duals).collect();
        Ok(Quiver { ty: self.ty, arrows })
    }

    /// The undoubled quiver underlying this one.
    pub fn undoubled(&self) -> Quiver {
        Quiver { ty: self.ty, arrows: self.arrows.iter().copied().filter(|a| !a.dual).collect() }
    }

    /// Number of undirected edges between each pair of vertices.
    pub fn adjacency(&self) -> Vec<Vec<i64>> {
        let n = self.vertex_count();
        let mut adj = vec![vec![0; n]; n];
        for a in self.arrows.iter().filter(|a| !a.dual) {
            adj[a.tail][a.head] += 1;
            adj[a.head][a.tail] += 1;
        }
        adj
    }

    pub fn cartan(&self) -> Result<CartanData> {
        if self.is_doubled() {
            return Err(Error::Doubled);
        }
        let adj = self.adjacency();
        let n = self.vertex_count();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 2 - adj[i][j] } else { -adj[i][j] }).collect())
            .collect();
        Ok(CartanData { matrix })
    }

    /// Tits form by the arrow sum `sum a_i^2 - sum_{a} a_t(a) a_h(a)`.
    pub fn tits_form(&self, alpha: &[i64]) -> i64 {
        let sq: i64 = alpha.iter().map(|x| x * x).sum();
        let cross: i64 = self
            .arrows
            .iter()
            .filter(|a| !a.dual)
            .map(|a| alpha[a.tail] * alpha[a.head])
            .sum();
        sq - cross
    }

    /// Minimal positive imaginary root, computed as the primitive generator of ker C.
    pub fn delta(&self) -> Result<LatticeVector> {
        let c = self.undoubled().cartan()?;
        let ns = linalg::nullspace(&c.matrix);
        if ns.len() != 1 {
            return Err(Error::Invariant(format!(
                "Cartan kernel of {} has dimension {}",
                self.ty,
                ns.len()
            )));
        }
        let mut d = linalg::primitive_integer(&ns[0]);
        if d.iter().any(|&x| x < 0) {
            d.iter_mut().for_each(|x| *x = -*x);
        }
        if d.iter().any(|&x| x <= 0) || d[0] != 1 {
            return Err(Error::Invariant(format!("kernel generator {d:?} is not a positive root with delta_0 = 1")));
        }
        Ok(LatticeVector(d))
    }

    /// Defect `d_i = -delta_i + sum_{t(a) = i} delta_h(a)` for the canonical orientation.
    pub fn defect(&self) -> Result<LatticeVector> {
        if self.is_doubled() {
            return Err(Error::Doubled);
        }
        let delta = self.delta()?;
        let mut d: Vec<i64> = delta.iter().map(|x| -x).collect();
        for a in &self.arrows {
            d[a.tail] += delta[a.head];
        }
        Ok(LatticeVector(d))
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.vertex_count() {
            return Err(Error::Length { expected: self.vertex_count(), got: len });
        }
        Ok(())
    }
}

/// Symmetric generalized Cartan matrix `C = 2 Id - adjacency`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanData {
    pub matrix: Vec<Vec<i64>>,
}

impl CartanData {
    pub fn size(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.matrix.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// `q(a) = a^T C a / 2`; exact since the diagonal is even.
    pub fn tits_form(&self, alpha: &[i64]) -> i64 {
        let ca = self.apply(alpha);
        let twice: i64 = alpha.iter().zip(&ca).map(|(a, b)| a * b).sum();
        debug_assert!(twice % 2 == 0);
        twice / 2
    }
}
