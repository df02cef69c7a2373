//! Simply-laced root systems in their standard ambient models.
//!
//! A_n lives in the sum-zero hyperplane of ℝ^{n+1} (coordinates b_0..b_n),
//! D_n in ℝ^n (b_1..b_n), and every E type inside the E_8 lattice in ℝ^8.
//! Coordinates are stored as integers over a global denominator `den`
//! (2 for the E types, where half-integer entries occur).
//!
//! Root order: positive roots in decreasing lexicographic order, then the
//! negatives in the same order, so `neg(i) = (i + npos) % nroots`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{qi, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CartanType {
    A,
    D,
    E,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CartanType::A => "A",
            CartanType::D => "D",
            CartanType::E => "E",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for CartanType {
    type Err = RootError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(CartanType::A),
            "D" | "d" => Ok(CartanType::D),
            "E" | "e" => Ok(CartanType::E),
            _ => Err(RootError::UnknownType(s.to_string())),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("unknown type {0:?}; expected A, D or E")]
    UnknownType(String),
    #[error("unsupported rank {rank} for type {kind}; admitted ranks: A_n with n>=3, D_n with n>=4, E_n with n in {{6,7,8}}")]
    UnsupportedRank { kind: CartanType, rank: usize },
    #[error("vector {0:?} is not a root")]
    NotARoot(Vec<i64>),
}

pub type Vector = Vec<i64>;

pub fn vadd(u: &[i64], v: &[i64]) -> Vector {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

pub fn vsub(u: &[i64], v: &[i64]) -> Vector {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub fn vneg(u: &[i64]) -> Vector {
    u.iter().map(|a| -a).collect()
}

pub fn vscale(u: &[i64], c: i64) -> Vector {
    u.iter().map(|a| a * c).collect()
}

/// Pairs of roots summing to one weight λ.
#[derive(Clone, Debug)]
pub struct WeightEntry {
    pub weight: Vector,
    /// κ(α,β) for any pair in `pairs`; λ ∈ Λ_class.
    pub class: i64,
    /// Unordered pairs (i ≤ j) of root indices with r_i + r_j = λ.
    pub pairs: Vec<(usize, usize)>,
}

impl WeightEntry {
    pub fn n(&self) -> usize {
        self.pairs.len()
    }
}

/// The sets Λ_{-2..2} with their pair lists N_λ.
#[derive(Clone, Debug)]
pub struct WeightSets {
    pub entries: Vec<WeightEntry>,
    index: HashMap<Vector, usize>,
}

impl WeightSets {
    pub fn get(&self, w: &[i64]) -> Option<&WeightEntry> {
        self.index.get(w).map(|&i| &self.entries[i])
    }

    pub fn n(&self, w: &[i64]) -> usize {
        self.get(w).map_or(0, |e| e.n())
    }

    pub fn lambda(&self, class: i64) -> impl Iterator<Item = &WeightEntry> {
        self.entries.iter().filter(move |e| e.class == class)
    }
}

/// A weight λ ∈ Λ_0 with its canonical orthogonal pair.
#[derive(Clone, Debug)]
pub struct Lambda0 {
    pub weight: Vector,
    /// (α_λ, β_λ): the least index pair of orthogonal roots summing to λ.
    pub alpha: usize,
    pub beta: usize,
    pub n: usize,
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub kind: CartanType,
    pub rank: usize,
    pub den: i64,
    pub dim: usize,
    roots: Vec<Vector>,
    npos: usize,
    simple: Vec<usize>,
    simple_coords: Vec<Vec<i64>>,
    cartan: Vec<Vec<i64>>,
    kappa: Vec<i8>,
    index: HashMap<Vector, usize>,
    highest: usize,
    weights: WeightSets,
    lambda0: Vec<Lambda0>,
    lambda0_index: HashMap<Vector, usize>,
}

fn e8_simple() -> Vec<Vector> {
    let b = |i: usize, s: i64| {
        let mut v = vec![0; 8];
        v[i - 1] = 2 * s;
        v
    };
    vec![
        vec![-1, -1, -1, -1, -1, 1, 1, 1],
        vadd(&b(5, 1), &b(6, 1)),
        vadd(&b(5, 1), &b(6, -1)),
        vadd(&b(4, 1), &b(5, -1)),
        vadd(&b(3, 1), &b(4, -1)),
        vadd(&b(2, 1), &b(3, -1)),
        vadd(&b(1, 1), &b(2, -1)),
        vadd(&b(1, -1), &b(8, -1)),
    ]
}

fn e6_simple() -> Vec<Vector> {
    let diff = |i: usize, j: usize| {
        let mut v = vec![0; 8];
        v[i - 1] = 2;
        v[j - 1] = -2;
        v
    };
    vec![
        diff(1, 2),
        vec![-1, -1, -1, 1, 1, 1, 1, 1],
        diff(2, 3),
        diff(3, 4),
        diff(4, 5),
        diff(5, 6),
    ]
}

/// All roots of the ambient model, unordered.
fn raw_roots(kind: CartanType, rank: usize) -> (usize, i64, Vec<Vector>, Vec<Vector>) {
    match kind {
        CartanType::A => {
            let dim = rank + 1;
            let mut roots = Vec::new();
            for i in 0..dim {
                for j in 0..dim {
                    if i != j {
                        let mut v = vec![0; dim];
                        v[i] = 1;
                        v[j] = -1;
                        roots.push(v);
                    }
                }
            }
            let simple = (0..rank)
                .map(|i| {
                    let mut v = vec![0; dim];
                    v[i] = 1;
                    v[i + 1] = -1;
                    v
                })
                .collect();
            (dim, 1, roots, simple)
        }
        CartanType::D => {
            let dim = rank;
            let mut roots = Vec::new();
            for i in 0..dim {
                for j in i + 1..dim {
                    for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                        let mut v = vec![0; dim];
                        v[i] = si;
                        v[j] = sj;
                        roots.push(v);
                    }
                }
            }
            let mut simple: Vec<Vector> = (0..rank - 1)
                .map(|i| {
                    let mut v = vec![0; dim];
                    v[i] = 1;
                    v[i + 1] = -1;
                    v
                })
                .collect();
            let mut last = vec![0; dim];
            last[rank - 2] = 1;
            last[rank - 1] = 1;
            simple.push(last);
            (dim, 1, roots, simple)
        }
        CartanType::E => {
            let mut roots = Vec::new();
            for i in 0..8 {
                for j in i + 1..8 {
                    for (si, sj) in [(2, 2), (2, -2), (-2, 2), (-2, -2)] {
                        let mut v = vec![0; 8];
                        v[i] = si;
                        v[j] = sj;
                        roots.push(v);
                    }
                }
            }
            for mask in 0u32..256 {
                if mask.count_ones() % 2 == 1 {
                    roots.push((0..8).map(|k| if mask >> k & 1 == 1 { -1 } else { 1 }).collect());
                }
            }
            let keep = |v: &Vector| match rank {
                8 => true,
                7 => v[6] == v[7],
                _ => v[6] == v[7] && v[..6].iter().sum::<i64>() == 0,
            };
            roots.retain(keep);
            let simple = match rank {
                8 => e8_simple(),
                7 => e8_simple()[..7].to_vec(),
                _ => e6_simple(),
            };
            (8, 2, roots, simple)
        }
    }
}

impl RootSystem {
    pub fn new(kind: CartanType, rank: usize) -> Result<Self, RootError> {
        let ok = match kind {
            CartanType::A => rank >= 3,
            CartanType::D => rank >= 4,
            CartanType::E => (6..=8).contains(&rank),
        };
        if !ok {
            return Err(RootError::UnsupportedRank { kind, rank });
        }
        let (dim, den, raw, simple_vecs) = raw_roots(kind, rank);
        let dot = |u: &[i64], v: &[i64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<i64>() / (den * den);

        let cartan: Vec<Vec<i64>> =
            simple_vecs.iter().map(|a| simple_vecs.iter().map(|b| dot(a, b)).collect()).collect();
        let kinv = Matrix::from_i64(&cartan).inverse().expect("Cartan matrix is invertible");
        let coords_of = |v: &[i64]| -> Vec<i64> {
            let pair: Vec<_> = simple_vecs.iter().map(|a| qi(dot(v, a))).collect();
            kinv.mul_vec(&pair)
                .expect("dimension")
                .into_iter()
                .map(|c| {
                    assert!(c.is_integer(), "root not in the root lattice");
                    c.to_integer().try_into().expect("small coordinate")
                })
                .collect()
        };

        let mut pos: Vec<Vector> = raw
            .iter()
            .filter(|v| {
                let c = coords_of(v);
                let nonneg = c.iter().all(|&x| x >= 0);
                assert!(nonneg || c.iter().all(|&x| x <= 0), "mixed-sign simple coordinates");
                nonneg
            })
            .cloned()
            .collect();
        pos.sort_by(|a, b| b.cmp(a));
        let npos = pos.len();
        let mut roots = pos.clone();
        roots.extend(pos.iter().map(|v| vneg(v)));
        assert_eq!(roots.len(), raw.len());

        let index: HashMap<Vector, usize> = roots.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let simple: Vec<usize> = simple_vecs.iter().map(|v| index[v]).collect();
        let simple_coords: Vec<Vec<i64>> = roots.iter().map(|v| coords_of(v)).collect();
        let n = roots.len();
        let mut kappa = vec![0i8; n * n];
        for i in 0..n {
            for j in 0..n {
                kappa[i * n + j] = dot(&roots[i], &roots[j]) as i8;
            }
        }
        let dominant: Vec<usize> =
            (0..n).filter(|&i| simple.iter().all(|&s| kappa[i * n + s] >= 0)).collect();
        assert_eq!(dominant.len(), 1, "highest root is not unique");
        let highest = dominant[0];

        let mut rs = RootSystem {
            kind,
            rank,
            den,
            dim,
            roots,
            npos,
            simple,
            simple_coords,
            cartan,
            kappa,
            index,
            highest,
            weights: WeightSets { entries: Vec::new(), index: HashMap::new() },
            lambda0: Vec::new(),
            lambda0_index: HashMap::new(),
        };
        rs.weights = rs.build_weight_sets();
        let mut l0: Vec<Lambda0> = rs
            .weights
            .lambda(0)
            .map(|e| {
                let &(a, b) = e.pairs.iter().min().expect("nonempty");
                Lambda0 { weight: e.weight.clone(), alpha: a, beta: b, n: e.n() }
            })
            .collect();
        l0.sort_by(|a, b| b.weight.cmp(&a.weight));
        rs.lambda0_index = l0.iter().enumerate().map(|(i, l)| (l.weight.clone(), i)).collect();
        rs.lambda0 = l0;
        Ok(rs)
    }

    fn build_weight_sets(&self) -> WeightSets {
        let n = self.roots.len();
        let mut map: BTreeMap<Vector, WeightEntry> = BTreeMap::new();
        for i in 0..n {
            for j in i..n {
                let w = vadd(&self.roots[i], &self.roots[j]);
                let class = self.kappa(i, j);
                let e = map.entry(w.clone()).or_insert_with(|| WeightEntry { weight: w, class, pairs: Vec::new() });
                debug_assert_eq!(e.class, class);
                e.pairs.push((i, j));
            }
        }
        let entries: Vec<WeightEntry> = map.into_values().collect();
        let index = entries.iter().enumerate().map(|(i, e)| (e.weight.clone(), i)).collect();
        WeightSets { entries, index }
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.kind, self.rank)
    }

    pub fn nroots(&self) -> usize {
        self.roots.len()
    }

    pub fn npos(&self) -> usize {
        self.npos
    }

    pub fn root(&self, i: usize) -> &[i64] {
        &self.roots[i]
    }

    pub fn roots(&self) -> &[Vector] {
        &self.roots
    }

    pub fn is_positive(&self, i: usize) -> bool {
        i < self.npos
    }

    pub fn neg(&self, i: usize) -> usize {
        (i + self.npos) % self.roots.len()
    }

    pub fn simple(&self) -> &[usize] {
        &self.simple
    }

    /// Coordinates of root `i` in the basis of simple roots.
    pub fn simple_coords(&self, i: usize) -> &[i64] {
        &self.simple_coords[i]
    }

    pub fn height(&self, i: usize) -> i64 {
        self.simple_coords[i].iter().sum()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn cartan_matrix(&self) -> Matrix {
        Matrix::from_i64(&self.cartan)
    }

    pub fn index_of(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn highest_root(&self) -> usize {
        self.highest
    }

    #[inline]
    pub fn kappa(&self, i: usize, j: usize) -> i64 {
        self.kappa[i * self.roots.len() + j] as i64
    }

    /// κ on arbitrary lattice vectors of the model.
    pub fn pairing(&self, u: &[i64], v: &[i64]) -> i64 {
        let d: i64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
        assert!(d % (self.den * self.den) == 0, "vectors are not in the root lattice");
        d / (self.den * self.den)
    }

    /// Index of α+β when it is a root.
    pub fn sum_root(&self, i: usize, j: usize) -> Option<usize> {
        if self.kappa(i, j) != -1 {
            return None;
        }
        self.index_of(&vadd(&self.roots[i], &self.roots[j]))
    }

    pub fn reflect(&self, alpha: usize, v: &[i64]) -> Vector {
        let k = self.pairing(v, &self.roots[alpha]);
        vsub(v, &vscale(&self.roots[alpha], k))
    }

    pub fn reflect_root(&self, alpha: usize, beta: usize) -> usize {
        let k = self.kappa(alpha, beta);
        if k == 0 {
            return beta;
        }
        self.index[&vsub(&self.roots[beta], &vscale(&self.roots[alpha], k))]
    }

    /// Applies a word of simple reflections, rightmost letter first.
    pub fn apply_word(&self, word: &[usize], v: &[i64]) -> Vector {
        word.iter().rev().fold(v.to_vec(), |acc, &s| self.reflect(self.simple[s], &acc))
    }

    pub fn weight_sets(&self) -> &WeightSets {
        &self.weights
    }

    pub fn lambda0(&self) -> &[Lambda0] {
        &self.lambda0
    }

    pub fn lambda0_index(&self, w: &[i64]) -> Option<usize> {
        self.lambda0_index.get(w).copied()
    }

    /// r = 2n_α for any root α (independent of α).
    pub fn r(&self) -> i64 {
        2 * self.weights.n(&self.roots[self.highest]) as i64
    }

    /// Roots orthogonal to `alpha`.
    pub fn perp(&self, alpha: usize) -> Vec<usize> {
        (0..self.roots.len()).filter(|&b| self.kappa(alpha, b) == 0).collect()
    }

    /// ρ, doubled so it stays integral in the model.
    pub fn two_rho(&self) -> Vector {
        (0..self.npos).fold(vec![0; self.dim], |acc, i| vadd(&acc, &self.roots[i]))
    }

    /// JSON document of the root list.
    pub fn to_doc(&self) -> RootSystemDoc {
        RootSystemDoc {
            kind: self.kind,
            rank: self.rank,
            den: self.den,
            roots: self.roots.clone(),
            positive: self.npos,
            simple: self.simple.clone(),
            cartan: self.cartan.clone(),
            highest_root: self.highest,
        }
    }

    /// Checks that a rational vector given as integers over `den` is zero.
    pub fn is_zero_vec(v: &[i64]) -> bool {
        v.iter().all(|x| x.is_zero())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootSystemDoc {
    #[serde(rename = "type")]
    pub kind: CartanType,
    pub rank: usize,
    pub den: i64,
    pub roots: Vec<Vector>,
    pub positive: usize,
    pub simple: Vec<usize>,
    pub cartan: Vec<Vec<i64>>,
    pub highest_root: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_types() -> Vec<(CartanType, usize)> {
        vec![
            (CartanType::A, 3),
            (CartanType::A, 4),
            (CartanType::A, 6),
            (CartanType::D, 4),
            (CartanType::D, 5),
            (CartanType::D, 7),
            (CartanType::E, 6),
            (CartanType::E, 7),
            (CartanType::E, 8),
        ]
    }

    #[test]
    fn root_counts() {
        for (k, n) in all_types() {
            let rs = RootSystem::new(k, n).unwrap();
            let expected = match (k, n) {
                (CartanType::A, n) => n * (n + 1),
                (CartanType::D, n) => 2 * n * (n - 1),
                (CartanType::E, 6) => 72,
                (CartanType::E, 7) => 126,
                _ => 240,
            };
            assert_eq!(rs.nroots(), expected, "{}", rs.label());
            assert_eq!(rs.npos() * 2, expected);
            for i in 0..rs.nroots() {
                assert_eq!(rs.kappa(i, i), 2);
                assert_eq!(rs.root(rs.neg(i)), vneg(rs.root(i)).as_slice());
                for j in 0..rs.nroots() {
                    assert!((-2..=2).contains(&rs.kappa(i, j)));
                }
            }
        }
    }

    #[test]
    fn cartan_types() {
        let e8 = RootSystem::new(CartanType::E, 8).unwrap();
        let c = e8.cartan();
        let edges: Vec<(usize, usize)> =
            (0..8).flat_map(|i| (i + 1..8).map(move |j| (i, j))).filter(|&(i, j)| c[i][j] == -1).collect();
        assert_eq!(edges, vec![(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)]);
        let e6 = RootSystem::new(CartanType::E, 6).unwrap();
        let c = e6.cartan();
        let edges: Vec<(usize, usize)> =
            (0..6).flat_map(|i| (i + 1..6).map(move |j| (i, j))).filter(|&(i, j)| c[i][j] == -1).collect();
        assert_eq!(edges, vec![(0, 2), (1, 3), (2, 3), (3, 4), (4, 5)]);
    }

    #[test]
    fn highest_roots() {
        let a3 = RootSystem::new(CartanType::A, 3).unwrap();
        assert_eq!(a3.root(a3.highest_root()), &[1, 0, 0, -1]);
        let d4 = RootSystem::new(CartanType::D, 4).unwrap();
        assert_eq!(d4.root(d4.highest_root()), &[1, 1, 0, 0]);
        let e8 = RootSystem::new(CartanType::E, 8).unwrap();
        assert_eq!(e8.root(e8.highest_root()), &[0, 0, 0, 0, 0, 0, 2, -2]);
        for r in [6, 7] {
            let e = RootSystem::new(CartanType::E, r).unwrap();
            assert_eq!(e.root(e.highest_root()), &[0, 0, 0, 0, 0, 0, 2, 2]);
        }
    }

    #[test]
    fn rejects_bad_rank() {
        assert!(matches!(RootSystem::new(CartanType::A, 2), Err(RootError::UnsupportedRank { .. })));
        assert!(RootSystem::new(CartanType::D, 3).is_err());
        assert!(RootSystem::new(CartanType::E, 5).is_err());
        assert!(RootSystem::new(CartanType::E, 9).is_err());
    }

    #[test]
    fn weight_set_invariants() {
        for (k, n) in all_types() {
            let rs = RootSystem::new(k, n).unwrap();
            let ws = rs.weight_sets();
            let zero = vec![0; rs.dim];
            assert_eq!(ws.n(&zero), rs.nroots() / 2);
            let lm2: Vec<_> = ws.lambda(-2).collect();
            assert_eq!(lm2.len(), 1);
            assert_eq!(lm2[0].weight, zero);
            assert_eq!(ws.lambda(-1).count(), rs.nroots());
            for e in &ws.entries {
                assert_eq!(rs.pairing(&e.weight, &e.weight), 4 + 2 * e.class);
                match e.class {
                    1 | 2 => assert_eq!(e.n(), 1),
                    0 => assert!(e.n() > 1),
                    _ => {}
                }
            }
        }
        let e8 = RootSystem::new(CartanType::E, 8).unwrap();
        assert_eq!(e8.lambda0().len(), 2160);
    }

    #[test]
    fn root_closure_and_lemma_checks() {
        for (k, n) in all_types().into_iter().take(6) {
            let rs = RootSystem::new(k, n).unwrap();
            let nr = rs.nroots();
            for i in 0..nr {
                for j in 0..nr {
                    if rs.kappa(i, j) == -1 {
                        assert!(rs.sum_root(i, j).is_some());
                    }
                }
            }
            for e in &rs.weight_sets().entries {
                for a in 0..nr {
                    let is_root = rs.index_of(&vsub(&e.weight, rs.root(a))).is_some();
                    assert_eq!(is_root, rs.pairing(rs.root(a), &e.weight) == 2 + e.class);
                }
            }
            for a in 0..nr {
                for b in 0..nr {
                    if rs.kappa(a, b) != 0 {
                        continue;
                    }
                    let cnt = (0..rs.npos())
                        .filter(|&g| {
                            let (x, y) = (rs.kappa(a, g), rs.kappa(b, g));
                            x.abs() == 1 && x == -y
                        })
                        .count();
                    let lam = vadd(rs.root(a), rs.root(b));
                    assert_eq!(cnt, 2 * (rs.weight_sets().n(&lam) - 1));
                }
            }
        }
    }

    #[test]
    fn canonical_pairs() {
        let d4 = RootSystem::new(CartanType::D, 4).unwrap();
        for l in d4.lambda0() {
            assert_eq!(d4.kappa(l.alpha, l.beta), 0);
            assert!(l.alpha < l.beta);
            assert_eq!(vadd(d4.root(l.alpha), d4.root(l.beta)), l.weight);
        }
        let n = d4.lambda0().len();
        for (i, l) in d4.lambda0().iter().enumerate() {
            assert_eq!(d4.lambda0()[n - 1 - i].weight, vneg(&l.weight));
        }
    }

    #[test]
    fn reflections() {
        let rs = RootSystem::new(CartanType::D, 5).unwrap();
        for a in 0..rs.nroots() {
            assert_eq!(rs.reflect_root(a, a), rs.neg(a));
            for b in 0..rs.nroots() {
                let c = rs.reflect_root(a, b);
                assert_eq!(rs.reflect_root(a, c), b);
                for d in 0..rs.nroots() {
                    assert_eq!(rs.kappa(c, rs.reflect_root(a, d)), rs.kappa(b, d));
                }
            }
        }
        let mut orbit = vec![rs.highest_root()];
        let mut seen = std::collections::HashSet::from([rs.highest_root()]);
        while let Some(x) = orbit.pop() {
            for &s in rs.simple() {
                let y = rs.reflect_root(s, x);
                if seen.insert(y) {
                    orbit.push(y);
                }
            }
        }
        assert_eq!(seen.len(), rs.nroots());
    }

    #[test]
    fn r_values() {
        assert_eq!(RootSystem::new(CartanType::A, 3).unwrap().r(), 4);
        assert_eq!(RootSystem::new(CartanType::E, 8).unwrap().r(), 56);
    }
}
