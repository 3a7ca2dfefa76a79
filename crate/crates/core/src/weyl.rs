//! Affine Weyl group and graph automorphisms acting on the hyperplane
//! `E = { lambda : lambda . delta = 1 }`, and the expression of lattice
//! translations as words in those generators.
//!
//! Conventions. The simple reflection at vertex `i` acts by
//! `r_i(lambda)_j = lambda_j - C_ji lambda_i`. A graph automorphism `s`, given
//! as the image list `s[j]`, acts by moving coordinates: `(s lambda)_{s[j]} =
//! lambda_j`. A [`WeylWord`] applies its automorphism first, then its
//! reflections from the last entry to the first, i.e. it is the map
//! `r_{w[0]} o r_{w[1]} o ... o r_{w[k-1]} o s`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ParamVector;
use crate::quiver::{CartanData, Quiver};
use crate::rational::{frac, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylWord {
    pub automorphism: Vec<usize>,
    pub reflections: Vec<usize>,
}

impl WeylWord {
    pub fn identity(n: usize) -> Self {
        WeylWord { automorphism: (0..n).collect(), reflections: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.reflections.is_empty() && self.automorphism.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// Linear action of a word on `C^I`; it preserves `E` since every generator
/// fixes the pairing with `delta`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMap {
    pub matrix: Vec<Vec<i64>>,
}

impl AffineMap {
    /// Returns `xi` when the map restricted to `E` is `lambda -> lambda + xi`,
    /// i.e. when the matrix equals `Id + xi delta^T`.
    pub fn as_translation(&self, delta: &[i64]) -> Option<Vec<i64>> {
        let n = self.matrix.len();
        let xi: Vec<i64> = (0..n).map(|i| self.matrix[i][0] - i64::from(i == 0)).collect();
        let ok = (0..n).all(|i| (0..n).all(|j| self.matrix[i][j] == i64::from(i == j) + xi[i] * delta[j]));
        ok.then_some(xi)
    }
}

fn reflect_coords(c: &CartanData, i: usize, v: &[Q]) -> Vec<Q> {
    let vi = v[i].clone();
    v.iter().enumerate().map(|(j, x)| x - Q::from_integer(c.matrix[j][i].into()) * &vi).collect()
}

pub fn reflect(q: &Quiver, i: usize, lambda: &ParamVector) -> Result<ParamVector> {
    q.check_len(lambda.len())?;
    if i >= q.vertex_count() {
        return Err(Error::InvalidArgument(format!("vertex {i} out of range")));
    }
    let c = q.undoubled().cartan()?;
    Ok(ParamVector { re: reflect_coords(&c, i, &lambda.re), im: reflect_coords(&c, i, &lambda.im) })
}

fn permute<T: Clone>(perm: &[usize], v: &[T]) -> Vec<T> {
    let mut out = v.to_vec();
    for (j, x) in v.iter().enumerate() {
        out[perm[j]] = x.clone();
    }
    out
}

pub fn apply_automorphism(perm: &[usize], lambda: &ParamVector) -> ParamVector {
    ParamVector { re: permute(perm, &lambda.re), im: permute(perm, &lambda.im) }
}

/// All vertex permutations preserving the undirected edge multiset, in
/// lexicographic order of image lists.
pub fn graph_automorphisms(q: &Quiver) -> Vec<Vec<usize>> {
    let adj = q.adjacency();
    let n = adj.len();
    let degree: Vec<i64> = adj.iter().map(|r| r.iter().sum()).collect();
    let mut out = Vec::new();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        k: usize,
        adj: &[Vec<i64>],
        degree: &[i64],
        image: &mut [usize],
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = adj.len();
        if k == n {
            out.push(image.to_vec());
            return;
        }
        for t in 0..n {
            if used[t] || degree[t] != degree[k] {
                continue;
            }
            if (0..k).any(|j| adj[k][j] != adj[t][image[j]]) || adj[k][k] != adj[t][t] {
                continue;
            }
            image[k] = t;
            used[t] = true;
            extend(k + 1, adj, degree, image, used, out);
            used[t] = false;
        }
        image[k] = usize::MAX;
    }
    extend(0, &adj, &degree, &mut image, &mut used, &mut out);
    out
}

pub fn apply_word(q: &Quiver, w: &WeylWord, lambda: &ParamVector) -> Result<ParamVector> {
    q.check_len(lambda.len())?;
    check_word(q, w)?;
    let c = q.undoubled().cartan()?;
    let mut re = permute(&w.automorphism, &lambda.re);
    let mut im = permute(&w.automorphism, &lambda.im);
    for &i in w.reflections.iter().rev() {
        re = reflect_coords(&c, i, &re);
        im = reflect_coords(&c, i, &im);
    }
    Ok(ParamVector { re, im })
}

fn check_word(q: &Quiver, w: &WeylWord) -> Result<()> {
    let n = q.vertex_count();
    let mut sorted = w.automorphism.clone();
    sorted.sort_unstable();
    if sorted != (0..n).collect::<Vec<_>>() {
        return Err(Error::InvalidArgument(format!("{:?} is not a permutation of the vertices", w.automorphism)));
    }
    let adj = q.adjacency();
    if (0..n).any(|i| (0..n).any(|j| adj[i][j] != adj[w.automorphism[i]][w.automorphism[j]])) {
        return Err(Error::InvalidArgument(format!("{:?} is not a graph automorphism", w.automorphism)));
    }
    if let Some(&bad) = w.reflections.iter().find(|&&i| i >= n) {
        return Err(Error::InvalidArgument(format!("reflection index {bad} out of range")));
    }
    Ok(())
}

/// Integer matrix of the word's action on `C^I`.
pub fn word_map(q: &Quiver, w: &WeylWord) -> Result<AffineMap> {
    let n = q.vertex_count();
    let mut matrix = vec![vec![0i64; n]; n];
    for j in 0..n {
        let mut e = vec![Q::from_integer(0.into()); n];
        e[j] = Q::from_integer(1.into());
        let img = apply_word(q, w, &ParamVector::real(e))?;
        for (i, x) in img.re.iter().enumerate() {
            matrix[i][j] = i64::try_from(x.to_integer()).map_err(|_| Error::Invariant("matrix overflow".into()))?;
        }
    }
    Ok(AffineMap { matrix })
}

/// A random point of `E` with rational coordinates.
pub fn random_point<R: Rng>(delta: &[i64], rng: &mut R) -> ParamVector {
    let n = delta.len();
    let mut re: Vec<Q> = (0..n).map(|_| frac(rng.gen_range(-50..=50), rng.gen_range(1..=12))).collect();
    let pairing: Q = re.iter().zip(delta).skip(1).map(|(x, &d)| x * Q::from_integer(d.into())).sum();
    re[0] = Q::from_integer(1.into()) - pairing;
    ParamVector::real(re)
}

/// A random rational point in the open fundamental alcove `{lambda_i > 0}`.
fn random_alcove_point<R: Rng>(delta: &[i64], rng: &mut R) -> Vec<Q> {
    let w: Vec<i64> = delta.iter().map(|_| rng.gen_range(1000..2000)).collect();
    let total: i64 = w.iter().zip(delta).map(|(a, b)| a * b).sum();
    w.iter().map(|&x| frac(x, total)).collect()
}

/// Number of random points each decomposition is verified on.
pub const VERIFY_POINTS: usize = 5;

/// Expresses `lambda -> lambda + xi` as a [`WeylWord`] by an alcove walk.
///
/// Starting from a generic `l*` in the fundamental alcove, reflections at the
/// smallest negative coordinate bring `l* + xi` back into the alcove; the
/// remaining discrepancy is a graph automorphism. The result is checked on
/// `VERIFY_POINTS` random points of `E` and against the exact matrix
/// `Id + xi delta^T`.
pub fn decompose_translation(q: &Quiver, xi: &[i64], seed: u64) -> Result<WeylWord> {
    q.check_len(xi.len())?;
    let q = q.undoubled();
    let delta = q.delta()?;
    let pairing = delta.dot(xi);
    if pairing != 0 {
        return Err(Error::NotInLambda(pairing));
    }
    let n = q.vertex_count();
    if xi.iter().all(|&x| x == 0) {
        return Ok(WeylWord::identity(n));
    }
    let c = q.cartan()?;
    let autos = graph_automorphisms(&q);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step_limit = 1000 + 100 * n * xi.iter().map(|x| x.unsigned_abs() as usize).sum::<usize>();

    for _attempt in 0..16 {
        let base = random_alcove_point(&delta, &mut rng);
        let mut mu: Vec<Q> = base.iter().zip(xi).map(|(x, &k)| x + Q::from_integer(k.into())).collect();
        let mut reflections = Vec::new();
        while let Some(i) = mu.iter().position(|x| x < &Q::from_integer(0.into())) {
            mu = reflect_coords(&c, i, &mu);
            reflections.push(i);
            if reflections.len() > step_limit {
                return Err(Error::Invariant(format!("alcove walk exceeded {step_limit} steps")));
            }
        }
        if mu.iter().any(|x| x == &Q::from_integer(0.into())) {
            continue;
        }
        for perm in autos.iter().filter(|p| permute(p, &base) == mu) {
            let word = WeylWord { automorphism: perm.clone(), reflections: reflections.clone() };
            if verify_translation(&q, &word, xi, &mut rng)? {
                return Ok(word);
            }
        }
        return Err(Error::Invariant(format!("no graph automorphism closes the alcove walk for xi = {xi:?}")));
    }
    Err(Error::Invariant("could not find a generic base point".into()))
}

/// Checks that `word` acts as `lambda -> lambda + xi` on random points and as
/// the matrix `Id + xi delta^T`.
pub fn verify_translation<R: Rng>(q: &Quiver, word: &WeylWord, xi: &[i64], rng: &mut R) -> Result<bool> {
    let delta = q.delta()?;
    for _ in 0..VERIFY_POINTS {
        let lambda = random_point(&delta, rng);
        if apply_word(q, word, &lambda)? != lambda.add_lattice(xi) {
            return Ok(false);
        }
    }
    Ok(word_map(q, word)?.as_translation(&delta).as_deref() == Some(xi))
}
