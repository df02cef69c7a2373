//! Fusion laws, global and local decompositions of 𝔍 and 𝔄, fusion-law
//! verification, gradings and Miyamoto involutions.
//!
//! Parts are built from explicit spanning sets in the ambient coordinates of
//! the root system model, closed under the relevant Lie generators, and
//! stored as weight vectors. Every product of weight vectors is a weight
//! vector, so decomposing a product only needs the parts at one weight.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::corealg::CoreAlgebra;
use crate::exactla::{q, qi, Echelon, Matrix, SparseVec, TaggedEchelon, Q};
use crate::rootsys::{vadd, CartanType, RootSystem, Vector};
use num_traits::{One, Zero};

#[derive(Debug, thiserror::Error)]
pub enum DecompError {
    #[error("{what} for {label} is only tabulated for {need}")]
    OutOfRange { what: &'static str, label: String, need: &'static str },
    #[error("root {0} is not a positive root")]
    NotPositive(usize),
    #[error("local decompositions of the full algebra are built at the highest root {highest}, got {got}")]
    UnsupportedRoot { highest: usize, got: usize },
    #[error("fusion law {0} has no grading")]
    NoGrading(String),
    #[error("part {0} is not a label of the fusion law")]
    UnknownLabel(String),
    #[error("part {0} mixes even and odd vectors")]
    MixedParity(String),
    #[error("even and odd parts do not form a direct sum")]
    NotDirect,
}

// ---------------------------------------------------------------- laws

/// A fusion law (X, ⊛) with optional unit and ℤ/2 grading.
#[derive(Clone, Debug)]
pub struct FusionLaw {
    pub name: String,
    pub labels: Vec<String>,
    table: Vec<Vec<BTreeSet<usize>>>,
    pub unit: Option<usize>,
    /// ξ(x) ∈ {0, 1}.
    pub grading: Option<Vec<u8>>,
}

#[derive(Serialize)]
pub struct FusionLawDoc {
    pub name: String,
    pub labels: Vec<String>,
    pub table: Vec<Vec<Vec<String>>>,
    pub unit: Option<String>,
    pub odd: Vec<String>,
}

impl FusionLaw {
    /// Rows are `|`-separated cells of `,`-separated labels. A label may
    /// carry a trailing marker character which `keep` decides on.
    fn parse(name: &str, labels: &[&str], rows: &[&str], odd: &[&str], keep: impl Fn(char) -> bool) -> FusionLaw {
        let idx: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        let table: Vec<Vec<BTreeSet<usize>>> = rows
            .iter()
            .map(|row| {
                let cells: Vec<&str> = row.split('|').collect();
                assert_eq!(cells.len(), labels.len(), "row width in {name}");
                cells
                    .iter()
                    .map(|cell| {
                        cell.split(',')
                            .filter(|t| !t.is_empty())
                            .filter_map(|t| {
                                let (lab, mark) = match t.chars().last() {
                                    Some(c @ ('†' | '‡')) => (&t[..t.len() - c.len_utf8()], Some(c)),
                                    _ => (t, None),
                                };
                                mark.is_none_or(&keep).then(|| idx[lab])
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        assert_eq!(table.len(), labels.len(), "row count in {name}");
        let grading = (!odd.is_empty()).then(|| labels.iter().map(|l| u8::from(odd.contains(l))).collect());
        let mut law = FusionLaw { name: name.to_string(), labels: labels.iter().map(|s| s.to_string()).collect(), table, unit: None, grading };
        law.unit = (0..labels.len()).find(|&u| {
            (0..labels.len()).all(|x| law.table[u][x].iter().all(|&z| z == x)) && law.table[u][u].contains(&u)
        });
        law
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn product(&self, x: usize, y: usize) -> &BTreeSet<usize> {
        &self.table[x][y]
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.labels.len();
        (0..n).all(|x| (0..n).all(|y| self.table[x][y] == self.table[y][x]))
    }

    /// ξ(z) = ξ(x) + ξ(y) for every z ∈ x ⊛ y.
    pub fn grading_respected(&self) -> bool {
        let Some(g) = &self.grading else { return true };
        let n = self.labels.len();
        (0..n).all(|x| (0..n).all(|y| self.table[x][y].iter().all(|&z| g[z] == (g[x] + g[y]) % 2)))
    }

    pub fn to_doc(&self) -> FusionLawDoc {
        let name = |i: &usize| self.labels[*i].clone();
        FusionLawDoc {
            name: self.name.clone(),
            labels: self.labels.clone(),
            table: self.table.iter().map(|r| r.iter().map(|c| c.iter().map(name).collect()).collect()).collect(),
            unit: self.unit.as_ref().map(name),
            odd: self
                .grading
                .iter()
                .flat_map(|g| g.iter().enumerate().filter(|(_, &v)| v == 1).map(|(i, _)| self.labels[i].clone()))
                .collect(),
        }
    }
}

fn out_of_range(what: &'static str, rs: &RootSystem, need: &'static str) -> DecompError {
    DecompError::OutOfRange { what, label: rs.label(), need }
}

const ABC: [&str; 3] = ["a", "b", "c"];

/// Global law of 𝔍 under W.
pub fn j_global_law(rs: &RootSystem) -> Result<FusionLaw, DecompError> {
    let n = rs.rank;
    Ok(match rs.kind {
        CartanType::A => FusionLaw::parse("J global A", &ABC, &["a|b|c", "b|a,b,c|b,c‡", "c|b,c‡|a,b‡,c"], &[], |_| n != 3),
        CartanType::D if n == 4 => FusionLaw::parse(
            "J global D4",
            &["a", "b", "c", "d"],
            &["a|b|c|d", "b|a,b|d|c", "c|d|a,c|b", "d|c|b|a,d"],
            &[],
            |_| true,
        ),
        CartanType::D => FusionLaw::parse("J global D", &ABC, &["a|b|c", "b|a,b|c", "c|c|a,b,c"], &[], |_| true),
        CartanType::E => FusionLaw::parse("J global E", &["a", "b"], &["a|b", "b|a,b"], &[], |_| true),
    })
}

/// Local law of 𝔍 under C_W(s_α), graded by the action of s_α.
pub fn j_local_law(rs: &RootSystem) -> Result<FusionLaw, DecompError> {
    let n = rs.rank;
    Ok(match (rs.kind, n) {
        (CartanType::A, _) => FusionLaw::parse(
            "J local A",
            &["1", "2", "3", "4", "5"],
            &["1|2|3†|4|5", "2|1,2‡,3†|2†,3†|5|4,5‡", "3†|2†,3†|1†,2†,3†||5†", "4|5||1|2", "5|4,5‡|5†|2|1,2‡,3†"],
            j_local_odd_labels(CartanType::A),
            |m| match m {
                '‡' => n != 3,
                _ => n > 4,
            },
        ),
        (CartanType::D, n) if n > 6 => FusionLaw::parse(
            "J local D",
            &["1", "2", "3", "4", "5", "6"],
            &["1|2|3|4|5|6", "2|1,2|3|4|5|", "3|3|1,2,3|4|5|", "4|4|4|1,2,3|6|5", "5|5|5|6|1,2,3|4", "6|||5|4|1"],
            &["4", "6"],
            |_| true,
        ),
        (CartanType::D, _) => return Err(out_of_range("local law of J", rs, "n > 6")),
        (CartanType::E, 6) => FusionLaw::parse(
            "J local E6",
            &["1", "2", "3", "5"],
            &["1|2|3|5", "2|1,2,3|2,3|5", "3|2,3|1,2,3|5", "5|5|5|1,2,3"],
            &["5"],
            |_| true,
        ),
        (CartanType::E, 7) => FusionLaw::parse(
            "J local E7",
            &["1", "2", "3", "5"],
            &["1|2|3|5", "2|1,2|3|5", "3|3|1,2,3|5", "5|5|5|1,2,3"],
            &["5"],
            |_| true,
        ),
        (CartanType::E, _) => FusionLaw::parse("J local E8", &["1", "3", "5"], &["1|3|5", "3|1,3|5", "5|5|1,3"], &["5"], |_| true),
    })
}

/// Global law of 𝔄 under 𝓛.
pub fn a_global_law(rs: &RootSystem) -> Result<FusionLaw, DecompError> {
    let n = rs.rank;
    Ok(match rs.kind {
        CartanType::A if n > 3 => FusionLaw::parse("A global A", &ABC, &["a|b|c", "b|a,b,c|b,c", "c|b,c|a,b,c"], &[], |_| true),
        CartanType::A => return Err(out_of_range("global law of the algebra", rs, "n > 3")),
        CartanType::D if n > 5 => FusionLaw::parse("A global D", &ABC, &["a|b|c", "b|a,b|c", "c|c|a,b,c"], &[], |_| true),
        CartanType::D => return Err(out_of_range("global law of the algebra", rs, "n > 5")),
        CartanType::E => FusionLaw::parse("A global E", &["a", "b"], &["a|b", "b|a,b"], &[], |_| true),
    })
}

/// Local law of 𝔄 under 𝓛_𝔦, graded by the parity of h_α.
pub fn a_local_law(rs: &RootSystem) -> Result<FusionLaw, DecompError> {
    let n = rs.rank;
    Ok(match (rs.kind, n) {
        (CartanType::A, n) if n > 5 => FusionLaw::parse(
            "A local A",
            &["1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11"],
            &[
                "1|2|3|4|5|6|7|8|9|10|11",
                "2|1,2,3|2,3|5|4,5|6|7|8,10|9,11|8,10|9,11",
                "3|2,3|1,2,3||5|6|7|10|11|8,10|9,11",
                "4|5||1,4|2,5|||8|9|10|11",
                "5|4,5|5|2,5|1,2,3,4,5|||8,10|9,11|8,10|9,11",
                "6|6|6|||7‡|1,2,3||8,10||8,10",
                "7|7|7|||1,2,3|6‡|9,11||9,11|",
                "8|8,10|10|8|8,10||9,11|6|1,2,4,5|6|2,3,5",
                "9|9,11|11|9|9,11|8,10||1,2,4,5|7|2,3,5|7",
                "10|8,10|8,10|10|8,10||9,11|6|2,3,5|6|1,2,3,4,5",
                "11|9,11|9,11|11|9,11|8,10||2,3,5|7|1,2,3,4,5|7",
            ],
            &["8", "9", "10", "11"],
            |_| n == 7,
        ),
        (CartanType::A, _) => return Err(out_of_range("local law of the algebra", rs, "n > 5")),
        (CartanType::D, n) if n > 7 => FusionLaw::parse(
            "A local D",
            &["1", "2", "3", "4", "5", "6", "7", "8"],
            &[
                "1|2|3|4|5|6|7|8",
                "2|1,2|3|4|5||7|8",
                "3|3|1,2,3|4|5||8|7,8",
                "4|4|4|1,2,3,4|6|5|7,8|7,8",
                "5|5|5|6|1,2,3,5|4|7,8|7,8",
                "6|||5|4|1,6|7|8",
                "7|7|8|7,8|7,8|7|1,2,4,5,6|3,4,5",
                "8|8|7,8|7,8|7,8|8|3,4,5|1,2,3,4,5,6",
            ],
            &["7", "8"],
            |_| true,
        ),
        (CartanType::D, _) => return Err(out_of_range("local law of the algebra", rs, "n > 7")),
        (CartanType::E, 6) => FusionLaw::parse(
            "A local E6",
            &["1", "2", "3", "5", "12", "13", "14"],
            &[
                "1|2|3|5|12|13|14",
                "2|1,2,3|2,3|5|12,13,14|12,13|12,14",
                "3|2,3|1,2,3|5|12,13,14|12,13,14|12,13,14",
                "5|5|5|1,2,3,5|12,13,14|12,13|12,14",
                "12|12,13,14|12,13,14|12,13,14|1,2,3,5|2,3,5|2,3,5",
                "13|12,13|12,13,14|12,13|2,3,5|3|1,2,3,5",
                "14|12,14|12,13,14|12,14|2,3,5|1,2,3,5|3",
            ],
            &["12", "13", "14"],
            |_| true,
        ),
        (CartanType::E, 7) => FusionLaw::parse(
            "A local E7",
            &["1", "2", "3", "5", "9", "10"],
            &[
                "1|2|3|5|9|10",
                "2|1,2|3|5|10|9,10",
                "3|3|1,2,3|5|9,10|9,10",
                "5|5|5|1,2,3,5|9,10|9,10",
                "9|10|9,10|9,10|1,3,5|2,3,5",
                "10|9,10|9,10|9,10|2,3,5|1,2,3,5",
            ],
            &["9", "10"],
            |_| true,
        ),
        (CartanType::E, _) => FusionLaw::parse(
            "A local E8",
            &["1", "3", "5", "6", "7"],
            &["1|3|5|6|7", "3|1,3|5|6,7|6,7", "5|5|1,3,5|6,7|6,7", "6|6,7|6,7|1,3,5|3,5", "7|6,7|6,7|3,5|1,3,5"],
            &["6", "7"],
            |_| true,
        ),
    })
}

/// The law 𝓕′ of the E_8 axial family.
pub fn f_prime_law() -> FusionLaw {
    FusionLaw::parse(
        "F'",
        &["e", "e'", "3", "5", "6", "7"],
        &[
            "e||3|5|6|7",
            "|e'|3|5|6|7",
            "3|3|e,e',3|5|6,7|6,7",
            "5|5|5|e,e',3,5|6,7|6,7",
            "6|6|6,7|6,7|e,e',3,5|3,5",
            "7|7|6,7|6,7|3,5|e,e',3,5",
        ],
        &["6", "7"],
        |_| true,
    )
}

// ---------------------------------------------------------------- parts

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Context {
    /// Parts of the zero weight subalgebra 𝔍.
    Zero,
    /// Parts of the whole algebra 𝔄.
    Full,
}

#[derive(Clone, Debug)]
pub struct Part {
    pub label: String,
    /// Independent weight vectors spanning the part.
    pub basis: Vec<SparseVec>,
    /// Dimension predicted by the closed formula.
    pub expected: usize,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub name: String,
    pub context: Context,
    pub root: Option<usize>,
    pub parts: Vec<Part>,
}

#[derive(Serialize)]
pub struct PartDoc {
    pub label: String,
    pub dim: usize,
    pub expected: usize,
}

impl Decomposition {
    pub fn part(&self, label: &str) -> Option<&Part> {
        self.parts.iter().find(|p| p.label == label)
    }

    pub fn dims(&self) -> Vec<(String, usize)> {
        self.parts.iter().map(|p| (p.label.clone(), p.basis.len())).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.parts.iter().map(|p| p.basis.len()).sum()
    }

    /// Parts whose dimension differs from the closed formula.
    pub fn dim_mismatches(&self) -> Vec<(String, usize, usize)> {
        self.parts
            .iter()
            .filter(|p| p.basis.len() != p.expected)
            .map(|p| (p.label.clone(), p.expected, p.basis.len()))
            .collect()
    }

    pub fn to_doc(&self) -> Vec<PartDoc> {
        self.parts.iter().map(|p| PartDoc { label: p.label.clone(), dim: p.basis.len(), expected: p.expected }).collect()
    }

    /// Pairs of distinct labels whose parts are not ℬ-orthogonal.
    pub fn orthogonality_violations(&self, alg: &CoreAlgebra) -> Vec<(String, String)> {
        let mut by_w: Vec<HashMap<Vector, Vec<&SparseVec>>> = Vec::new();
        for p in &self.parts {
            let mut m: HashMap<Vector, Vec<&SparseVec>> = HashMap::new();
            for v in &p.basis {
                m.entry(weight_of(alg, v)).or_default().push(v);
            }
            by_w.push(m);
        }
        let pairs: Vec<(usize, usize)> =
            (0..self.parts.len()).flat_map(|x| (x + 1..self.parts.len()).map(move |y| (x, y))).collect();
        pairs
            .into_par_iter()
            .filter(|&(x, y)| {
                by_w[x].iter().any(|(w, us)| {
                    let neg: Vector = w.iter().map(|c| -c).collect();
                    by_w[y].get(&neg).is_some_and(|vs| us.iter().any(|u| vs.iter().any(|v| !alg.form(u, v).is_zero())))
                })
            })
            .map(|(x, y)| (self.parts[x].label.clone(), self.parts[y].label.clone()))
            .collect()
    }
}

fn weight_of(alg: &CoreAlgebra, v: &SparseVec) -> Vector {
    alg.weight(v.leading().expect("nonzero vector").0).to_vec()
}

fn split_by_weight(alg: &CoreAlgebra, v: &SparseVec) -> BTreeMap<Vector, SparseVec> {
    let mut m: BTreeMap<Vector, Vec<(usize, Q)>> = BTreeMap::new();
    for (i, c) in v.iter() {
        m.entry(alg.weight(*i).to_vec()).or_default().push((*i, c.clone()));
    }
    m.into_iter().map(|(w, e)| (w, SparseVec::from_pairs(e))).collect()
}

/// Per-weight echelon over all part vectors, remembering which part each
/// inserted vector came from.
pub struct PartIndex {
    by_weight: HashMap<Vector, (TaggedEchelon, Vec<(usize, SparseVec)>)>,
    pub direct: bool,
}

impl PartIndex {
    pub fn new(alg: &CoreAlgebra, parts: &[&[SparseVec]]) -> PartIndex {
        let mut by_weight: HashMap<Vector, (TaggedEchelon, Vec<(usize, SparseVec)>)> = HashMap::new();
        let mut direct = true;
        for (pi, basis) in parts.iter().enumerate() {
            for v in basis.iter() {
                let e = by_weight.entry(weight_of(alg, v)).or_default();
                direct &= e.0.insert(v);
                e.1.push((pi, v.clone()));
            }
        }
        PartIndex { by_weight, direct }
    }

    pub fn of(alg: &CoreAlgebra, dec: &Decomposition) -> PartIndex {
        let parts: Vec<&[SparseVec]> = dec.parts.iter().map(|p| p.basis.as_slice()).collect();
        Self::new(alg, &parts)
    }

    /// Components of `v` per part, or the residual outside the span.
    pub fn split(&self, alg: &CoreAlgebra, v: &SparseVec) -> Result<BTreeMap<usize, SparseVec>, SparseVec> {
        let mut out: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (w, vw) in split_by_weight(alg, v) {
            let Some((ech, vecs)) = self.by_weight.get(&w) else {
                return Err(vw);
            };
            let (rem, comb) = ech.reduce(&vw);
            if !rem.is_zero() {
                return Err(rem);
            }
            for (tag, c) in comb.iter() {
                let (pi, vec) = &vecs[*tag];
                let e = out.entry(*pi).or_default();
                *e = e.add_scaled(vec, c);
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }
}

// ---------------------------------------------------------------- builders

/// Ambient coordinates helper: vectors are real coordinates b_1, b_2, …
/// of the model, converted to simple-coroot coordinates by orthogonal
/// projection onto the span of the roots.
struct Amb<'a> {
    alg: &'a CoreAlgebra,
    kinv: Matrix,
}

impl<'a> Amb<'a> {
    fn new(alg: &'a CoreAlgebra) -> Self {
        Amb { alg, kinv: alg.zs.cartan_inverse().clone() }
    }

    fn rs(&self) -> &RootSystem {
        &self.alg.rs
    }

    fn b(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.rs().dim];
        v[i] = Q::one();
        v
    }

    fn lin(&self, terms: &[(i64, usize)]) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.rs().dim];
        for &(c, i) in terms {
            v[i] += qi(c);
        }
        v
    }

    fn root(&self, r: usize) -> Vec<Q> {
        let den = self.rs().den;
        self.rs().root(r).iter().map(|&x| q(x, den)).collect()
    }

    fn dot(&self, u: &[Q], v: &[Q]) -> Q {
        u.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// Simple-coroot coordinates of the projection of `v` onto 𝓗.
    fn cor(&self, v: &[Q]) -> Vec<Q> {
        let rs = self.rs();
        let u: Vec<Q> = rs.simple().iter().map(|&s| self.dot(v, &self.root(s))).collect();
        self.kinv.mul_vec(&u).expect("dim")
    }

    fn sym(&self, v: &[Q], w: &[Q]) -> SparseVec {
        SparseVec::from_dense(&self.alg.zs.sym_product(&self.cor(v), &self.cor(w)))
    }

    fn sq(&self, v: &[Q]) -> SparseVec {
        self.sym(v, v)
    }

    fn id(&self) -> SparseVec {
        SparseVec::from_dense(&self.alg.zs.identity())
    }

    /// [h]_β for an ambient vector h.
    fn h(&self, h: &[Q], beta: usize) -> SparseVec {
        self.alg.h_elem(beta, &self.cor(h))
    }

    /// x_λ for λ the sum of two roots given in model coordinates.
    fn x(&self, a: &[i64], b: &[i64]) -> SparseVec {
        let l = self.rs().lambda0_index(&vadd(a, b)).expect("weight in Λ_0");
        self.alg.x_elem(l)
    }

    /// Root index from ambient integer coefficients.
    fn root_of(&self, terms: &[(i64, usize)]) -> usize {
        let den = self.rs().den;
        let mut v = vec![0; self.rs().dim];
        for &(c, i) in terms {
            v[i] += c * den;
        }
        self.rs().index_of(&v).expect("root")
    }
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scale(c: &Q, a: &[Q]) -> Vec<Q> {
    a.iter().map(|x| c * x).collect()
}

/// Echelon basis of the span of `seeds`, as weight vectors.
fn span(alg: &CoreAlgebra, seeds: &[SparseVec]) -> Vec<SparseVec> {
    close(alg, seeds, &[])
}

/// Closure of the span of `seeds` under the action of the root vectors `gens`.
fn close(alg: &CoreAlgebra, seeds: &[SparseVec], gens: &[usize]) -> Vec<SparseVec> {
    let mut ech: HashMap<Vector, Echelon> = HashMap::new();
    let mut queue = VecDeque::new();
    let push = |v: &SparseVec, ech: &mut HashMap<Vector, Echelon>, queue: &mut VecDeque<SparseVec>| {
        for (w, vw) in split_by_weight(alg, v) {
            if let Some(r) = ech.entry(w).or_default().insert(&vw) {
                queue.push_back(r);
            }
        }
    };
    for s in seeds.iter().filter(|s| !s.is_zero()) {
        push(s, &mut ech, &mut queue);
    }
    while let Some(v) = queue.pop_front() {
        for &g in gens {
            let u = alg.act(g, &v);
            if !u.is_zero() {
                push(&u, &mut ech, &mut queue);
            }
        }
    }
    let mut keys: Vec<&Vector> = ech.keys().collect();
    keys.sort();
    keys.into_iter().flat_map(|k| ech[k].basis().cloned()).collect()
}

/// Generators ±(simple roots) of 𝓛.
fn global_gens(rs: &RootSystem) -> Vec<usize> {
    rs.simple().iter().flat_map(|&s| [s, rs.neg(s)]).collect()
}

/// Generators of 𝓛_𝔦 for 𝔦 = ⟨e_α, e_{−α}⟩: ±α and ± the simple roots of
/// the subsystem orthogonal to α.
pub fn local_gens(rs: &RootSystem, alpha: usize) -> Vec<usize> {
    let perp: Vec<usize> = (0..rs.npos()).filter(|&b| rs.kappa(alpha, b) == 0).collect();
    let simple = perp.iter().copied().filter(|&b| {
        !perp.iter().any(|&c| c != b && rs.index_of(&crate::rootsys::vsub(rs.root(b), rs.root(c))).is_some_and(|d| rs.is_positive(d) && rs.kappa(alpha, d) == 0))
    });
    let mut g = vec![alpha, rs.neg(alpha)];
    for b in simple {
        g.push(b);
        g.push(rs.neg(b));
    }
    g
}

fn part(alg: &CoreAlgebra, label: &str, seeds: &[SparseVec], expected: usize) -> Part {
    Part { label: label.to_string(), basis: span(alg, seeds), expected }
}

/// Global decomposition of 𝔍 with respect to W.
pub fn j_global(alg: &CoreAlgebra) -> Result<Decomposition, DecompError> {
    let a = Amb::new(alg);
    let rs = &alg.rs;
    let n = rs.rank;
    let id = a.id();
    let parts = match rs.kind {
        CartanType::A => {
            let m = n + 1;
            let b: Vec<SparseVec> = (1..m).map(|i| a.sq(&a.b(0)).sub(&a.sq(&a.b(i)))).collect();
            let mut c = Vec::new();
            for (i, j, k, l) in disjoint_pairs(0..m) {
                c.push(a.sym(&sub(&a.b(i), &a.b(j)), &sub(&a.b(k), &a.b(l))));
            }
            vec![part(alg, "a", &[id], 1), part(alg, "b", &b, n), part(alg, "c", &c, (n * n - n - 2) / 2)]
        }
        CartanType::D if n == 4 => {
            let b: Vec<SparseVec> = (1..4).map(|i| a.sq(&a.b(0)).sub(&a.sq(&a.b(i)))).collect();
            let pairings = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))];
            let prod = |(i, j): (usize, usize)| a.sym(&a.b(i), &a.b(j));
            let c: Vec<SparseVec> = pairings.iter().map(|&(p, r)| prod(p).add(&prod(r))).collect();
            let d: Vec<SparseVec> = pairings.iter().map(|&(p, r)| prod(p).sub(&prod(r))).collect();
            vec![part(alg, "a", &[id], 1), part(alg, "b", &b, 3), part(alg, "c", &c, 3), part(alg, "d", &d, 3)]
        }
        CartanType::D => {
            let b: Vec<SparseVec> = (1..n).map(|i| a.sq(&a.b(0)).sub(&a.sq(&a.b(i)))).collect();
            let c: Vec<SparseVec> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| a.sym(&a.b(i), &a.b(j))).collect();
            vec![part(alg, "a", &[id], 1), part(alg, "b", &b, n - 1), part(alg, "c", &c, n * (n - 1) / 2)]
        }
        CartanType::E => {
            let b = complement_of_unit(alg);
            vec![part(alg, "a", &[id], 1), part(alg, "b", &b, alg.jdim() - 1)]
        }
    };
    Ok(Decomposition { name: format!("J global {}", rs.label()), context: Context::Zero, root: None, parts })
}

/// Coordinate vectors of 𝔍 made ℬ-orthogonal to the identity.
fn complement_of_unit(alg: &CoreAlgebra) -> Vec<SparseVec> {
    let zs = &alg.zs;
    let id = zs.identity();
    let nn = zs.form(&id, &id);
    (0..alg.jdim())
        .map(|k| {
            let mut e = zs.zero();
            e[k] = Q::one();
            let c = zs.form(&e, &id) / &nn;
            SparseVec::from_dense(&sub(&e, &scale(&c, &id)))
        })
        .collect()
}

/// Ordered index quadruples (i,j,k,l) with i<j, k<l, i<k and {i,j}∩{k,l}=∅.
fn disjoint_pairs(r: std::ops::Range<usize>) -> Vec<(usize, usize, usize, usize)> {
    let idx: Vec<usize> = r.collect();
    let mut out = Vec::new();
    for &i in &idx {
        for &j in idx.iter().filter(|&&j| j > i) {
            for &k in idx.iter().filter(|&&k| k > i && k != j) {
                for &l in idx.iter().filter(|&&l| l > k && l != j) {
                    out.push((i, j, k, l));
                }
            }
        }
    }
    out
}

/// Local decomposition of 𝔍 at the highest root, from the spanning formulas.
fn j_local_highest(alg: &CoreAlgebra) -> Result<Vec<Part>, DecompError> {
    let a = Amb::new(alg);
    let rs = &alg.rs;
    let n = rs.rank;
    let id = a.id();
    let parts = match (rs.kind, n) {
        (CartanType::A, _) => {
            let (b0, bn) = (a.b(0), a.b(n));
            let nq = qi(n as i64);
            let b1 = a.sq(&b0).add(&a.sq(&bn)).scale(&qi(n as i64 + 1)).sub(&id.scale(&qi(2)));
            let c1 = a.sq(&b0).add(&a.sq(&bn)).scale(&nq).add(&a.sym(&b0, &bn).scale(&qi((n * (n - 1)) as i64))).sub(&id);
            let mid: Vec<(usize, usize)> = (1..n).flat_map(|k| (k + 1..n).map(move |l| (k, l))).collect();
            let b2: Vec<SparseVec> = mid.iter().map(|&(k, l)| a.sq(&a.b(k)).sub(&a.sq(&a.b(l)))).collect();
            let c2: Vec<SparseVec> = mid
                .iter()
                .map(|&(k, l)| {
                    let left = add(&scale(&qi(n as i64 - 1), &add(&b0, &bn)), &scale(&qi(2), &add(&a.b(k), &a.b(l))));
                    a.sym(&left, &sub(&a.b(k), &a.b(l)))
                })
                .collect();
            let c3: Vec<SparseVec> = disjoint_pairs(1..n)
                .into_iter()
                .map(|(i, j, k, l)| a.sym(&sub(&a.b(i), &a.b(j)), &sub(&a.b(k), &a.b(l))))
                .collect();
            let c5: Vec<SparseVec> = mid.iter().map(|&(k, l)| a.sym(&sub(&b0, &bn), &sub(&a.b(k), &a.b(l)))).collect();
            let two: Vec<SparseVec> = b2.into_iter().chain(c2).collect();
            vec![
                part(alg, "1", &[id, b1, c1], 3),
                part(alg, "2", &two, 2 * (n - 2)),
                part(alg, "3", &c3, (n - 1) * (n.saturating_sub(4)) / 2),
                part(alg, "4", &[a.sq(&b0).sub(&a.sq(&bn))], 1),
                part(alg, "5", &c5, n - 2),
            ]
        }
        (CartanType::D, _) => {
            let (b1, b2) = (a.b(0), a.b(1));
            let x1 = a.sq(&b1).add(&a.sq(&b2)).scale(&qi(n as i64)).sub(&id.scale(&qi(2)));
            let y1 = a.sym(&b1, &b2);
            let rest: Vec<usize> = (2..n).collect();
            let two: Vec<SparseVec> = rest.windows(2).map(|w| a.sq(&a.b(w[0])).sub(&a.sq(&a.b(w[1])))).collect();
            let three: Vec<SparseVec> =
                rest.iter().flat_map(|&k| rest.iter().filter(move |&&l| l > k).map(move |&l| (k, l))).map(|(k, l)| a.sym(&a.b(k), &a.b(l))).collect();
            let four: Vec<SparseVec> = rest.iter().map(|&k| a.sym(&add(&b1, &b2), &a.b(k))).collect();
            let five: Vec<SparseVec> = rest.iter().map(|&k| a.sym(&sub(&b1, &b2), &a.b(k))).collect();
            vec![
                part(alg, "1", &[id, x1, y1], 3),
                part(alg, "2", &two, n - 3),
                part(alg, "3", &three, (n - 2) * (n - 3) / 2),
                part(alg, "4", &four, n - 2),
                part(alg, "5", &five, n - 2),
                part(alg, "6", &[a.sq(&b1).sub(&a.sq(&b2))], 1),
            ]
        }
        (CartanType::E, 6) | (CartanType::E, 7) => {
            let w = a.lin(&[(1, 6), (1, 7)]);
            let c = if n == 6 { q(1, 3) } else { q(2, 7) };
            let one = a.sq(&w).sub(&id.scale(&c));
            let six: Vec<(usize, usize)> = (0..6).flat_map(|i| (i + 1..6).map(move |j| (i, j))).collect();
            let two: Vec<SparseVec> = (1..6).map(|j| a.sq(&a.b(0)).sub(&a.sq(&a.b(j)))).collect();
            let (three, five): (Vec<SparseVec>, Vec<SparseVec>) = if n == 6 {
                (
                    disjoint_pairs(0..6).into_iter().map(|(i, j, k, l)| a.sym(&sub(&a.b(i), &a.b(j)), &sub(&a.b(k), &a.b(l)))).collect(),
                    six.iter().map(|&(i, j)| a.sym(&w, &sub(&a.b(i), &a.b(j)))).collect(),
                )
            } else {
                (six.iter().map(|&(i, j)| a.sym(&a.b(i), &a.b(j))).collect(), (0..6).map(|i| a.sym(&w, &a.b(i))).collect())
            };
            let (d3, d5) = if n == 6 { (9, 5) } else { (15, 6) };
            vec![part(alg, "1", &[id, one], 2), part(alg, "2", &two, 5), part(alg, "3", &three, d3), part(alg, "5", &five, d5)]
        }
        (CartanType::E, _) => {
            let al = a.root(rs.highest_root());
            let one = a.sq(&al).sub(&id.scale(&q(1, 4)));
            let perp: Vec<usize> = (0..rs.npos()).filter(|&b| rs.kappa(rs.highest_root(), b) == 0).collect();
            let aa = a.sq(&al);
            let mut three = Vec::new();
            for (i, &v) in perp.iter().enumerate() {
                for &w in &perp[i..] {
                    let k = qi(rs.kappa(v, w));
                    three.push(a.sym(&a.root(v), &a.root(w)).sub(&id.scale(&(&k / qi(7)))).add(&aa.scale(&(&k / qi(14)))));
                }
            }
            let five: Vec<SparseVec> = perp.iter().map(|&v| a.sym(&al, &a.root(v))).collect();
            vec![part(alg, "1", &[id, one], 2), part(alg, "3", &three, 27), part(alg, "5", &five, 7)]
        }
    };
    Ok(parts)
}

/// A word w in the simple reflections with w(ω) = α for the highest root ω.
pub fn word_to_root(rs: &RootSystem, alpha: usize) -> Vec<usize> {
    let start = rs.highest_root();
    let mut prev: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    let mut seen = vec![false; rs.nroots()];
    seen[start] = true;
    while let Some(r) = queue.pop_front() {
        if r == alpha {
            break;
        }
        for (i, &s) in rs.simple().iter().enumerate() {
            let t = rs.reflect_root(s, r);
            if !seen[t] {
                seen[t] = true;
                prev.insert(t, (r, i));
                queue.push_back(t);
            }
        }
    }
    let mut word = Vec::new();
    let mut cur = alpha;
    while cur != start {
        let (p, i) = prev[&cur];
        word.push(i);
        cur = p;
    }
    word
}

/// Local decomposition of 𝔍 with respect to C_W(s_α), for a positive root α.
///
/// Built at the highest root from the spanning formulas and transported to α
/// by a Weyl element. For D_n with n ≤ 6 the parts are not isotypic, and for
/// A_3 they are not independent.
pub fn j_local(alg: &CoreAlgebra, alpha: usize) -> Result<Decomposition, DecompError> {
    let rs = &alg.rs;
    if !rs.is_positive(alpha) {
        return Err(DecompError::NotPositive(alpha));
    }
    let mut parts = j_local_highest(alg)?;
    if alpha != rs.highest_root() {
        let w = alg.zs.word_matrix(&word_to_root(rs, alpha));
        for p in &mut parts {
            let moved: Vec<SparseVec> =
                p.basis.iter().map(|v| SparseVec::from_dense(&alg.zs.weyl_act_j(&w, &v.to_dense(alg.jdim())))).collect();
            p.basis = span(alg, &moved);
        }
    }
    Ok(Decomposition { name: format!("J local {}", rs.label()), context: Context::Zero, root: Some(alpha), parts })
}

/// Global decomposition of 𝔄 into 𝓛-isotypic components.
pub fn a_global(alg: &CoreAlgebra) -> Result<Decomposition, DecompError> {
    let rs = &alg.rs;
    a_global_law(rs)?;
    let n = rs.rank;
    let gens = global_gens(rs);
    let j = j_global(alg)?;
    let expected: Vec<usize> = match rs.kind {
        CartanType::A => vec![1, n * (n + 2), (n + 2) * (n + 1) * (n + 1) * (n - 2) / 4],
        CartanType::D => vec![1, (2 * n - 1) * (n + 1), (2 * n - 3) * (2 * n - 1) * (n - 1) * n / 6],
        CartanType::E => vec![1, alg.dim() - 1],
    };
    let parts = j
        .parts
        .iter()
        .zip(expected)
        .map(|(p, e)| Part { label: p.label.clone(), basis: close(alg, &p.basis, &gens), expected: e })
        .collect();
    Ok(Decomposition { name: format!("A global {}", rs.label()), context: Context::Full, root: None, parts })
}

/// Local decomposition of 𝔄 into 𝓛_𝔦-isotypic components, 𝔦 = ⟨e_α, e_{−α}⟩
/// for the highest root α.
pub fn a_local(alg: &CoreAlgebra, alpha: usize) -> Result<Decomposition, DecompError> {
    let rs = &alg.rs;
    a_local_law(rs)?;
    if alpha != rs.highest_root() {
        return Err(DecompError::UnsupportedRoot { highest: rs.highest_root(), got: alpha });
    }
    let n = rs.rank;
    let a = Amb::new(alg);
    let gens = local_gens(rs, alpha);
    let jparts = j_local_highest(alg)?;
    let mut seeds: Vec<(String, Vec<SparseVec>, usize)> = Vec::new();
    let even_dims: Vec<usize> = match rs.kind {
        CartanType::A => vec![3, 2 * n * (n - 2), n * (n - 1) * (n - 1) * (n - 4) / 4, 3, 3 * n * (n - 2)],
        CartanType::D => {
            vec![3, (2 * n - 5) * (n - 1), (2 * n - 7) * (2 * n - 5) * (n - 3) * (n - 2) / 6, 3 * (2 * n - 5) * (n - 2), 3 * (2 * n - 5) * (n - 2), 9]
        }
        CartanType::E => match n {
            6 => vec![2, 35, 189, 105],
            7 => vec![2, 77, 495, 198],
            _ => vec![2, 1539, 399],
        },
    };
    for (p, d) in jparts.into_iter().zip(even_dims) {
        seeds.push((p.label, p.basis, d));
    }
    let root = |t: &[(i64, usize)]| a.root_of(t);
    let model = |r: usize| rs.root(r).to_vec();
    match rs.kind {
        CartanType::A => {
            let (p, qn) = (0, n);
            let mid: Vec<usize> = (1..n).collect();
            let pairs: Vec<(usize, usize)> = mid.iter().flat_map(|&i| mid.iter().filter(move |&&j| j > i).map(move |&j| (i, j))).collect();
            let x_of = |plus: &[usize], minus: &[usize]| {
                let r1 = root(&[(1, plus[0]), (-1, minus[0])]);
                let r2 = root(&[(1, plus[1]), (-1, minus[1])]);
                a.x(&model(r1), &model(r2))
            };
            let six: Vec<SparseVec> = pairs.iter().map(|&(i, j)| x_of(&[p, qn], &[i, j])).collect();
            let seven: Vec<SparseVec> = pairs.iter().map(|&(i, j)| x_of(&[i, j], &[p, qn])).collect();
            let hb = |h: Vec<Q>, t: &[(i64, usize)]| a.h(&h, root(t));
            let mut eight = Vec::new();
            let mut nine = Vec::new();
            for &i in &mid {
                eight.push(hb(add(&a.b(p), &a.b(i)), &[(1, p), (-1, i)]));
                eight.push(hb(add(&a.b(qn), &a.b(i)), &[(1, qn), (-1, i)]));
                eight.push(hb(a.b(p), &[(1, qn), (-1, i)]));
                eight.push(hb(a.b(qn), &[(1, p), (-1, i)]));
                nine.push(hb(add(&a.b(p), &a.b(i)), &[(1, i), (-1, p)]));
                nine.push(hb(add(&a.b(qn), &a.b(i)), &[(1, i), (-1, qn)]));
                nine.push(hb(a.b(p), &[(1, i), (-1, qn)]));
                nine.push(hb(a.b(qn), &[(1, i), (-1, p)]));
            }
            let mut ten = Vec::new();
            let mut eleven = Vec::new();
            for &i in &mid {
                for &j in mid.iter().filter(|&&j| j != i) {
                    for &k in mid.iter().filter(|&&k| k != i && k != j) {
                        for e in [p, qn] {
                            // Σ b_i' = 0, so only traceless combinations stay clear of 8 and 9.
                            ten.push(hb(sub(&a.b(i), &a.b(k)), &[(1, e), (-1, j)]));
                            ten.push(x_of(&[e, i], &[j, k]));
                            eleven.push(hb(sub(&a.b(i), &a.b(k)), &[(1, j), (-1, e)]));
                            eleven.push(x_of(&[j, k], &[e, i]));
                        }
                    }
                }
            }
            let half = (n - 1) * (n - 2) / 2;
            seeds.push(("6".into(), six, half));
            seeds.push(("7".into(), seven, half));
            seeds.push(("8".into(), eight, 4 * (n - 1)));
            seeds.push(("9".into(), nine, 4 * (n - 1)));
            seeds.push(("10".into(), ten, n * (n - 1) * (n - 3)));
            seeds.push(("11".into(), eleven, n * (n - 1) * (n - 3)));
        }
        CartanType::D => {
            let signs = [(1, 1), (1, -1), (-1, 1), (-1, -1)];
            let mut seven = Vec::new();
            let mut eight = Vec::new();
            for i in 2..n {
                for (s, t) in signs {
                    for (e, other) in [(0, 1), (1, 0)] {
                        let beta = root(&[(s, e), (t, i)]);
                        seven.push(a.h(&a.b(e), beta));
                        seven.push(a.h(&a.b(other), beta));
                        for k in (2..n).filter(|&k| k != i) {
                            eight.push(a.h(&a.b(k), beta));
                            for l in (2..n).filter(|&l| l != i && l != k) {
                                for (u, v) in signs {
                                    let gamma = root(&[(u, k), (v, l)]);
                                    eight.push(a.x(&model(beta), &model(gamma)));
                                }
                            }
                        }
                    }
                }
            }
            seeds.push(("7".into(), seven, 16 * (n - 2)));
            seeds.push(("8".into(), eight, 8 * (2 * n - 5) * (n - 3) * (n - 2) / 3));
        }
        CartanType::E => {
            let al = a.root(alpha);
            let s: Vec<usize> = (0..rs.nroots()).filter(|&b| rs.kappa(alpha, b).abs() == 1).collect();
            let odd_a: Vec<SparseVec> = s.iter().map(|&b| a.h(&al, b)).collect();
            let gamma_parts = |gammas: &[usize], beta: usize, out: &mut Vec<SparseVec>| {
                for &g in gammas.iter().filter(|&&g| rs.kappa(g, beta) == 0) {
                    out.push(a.h(&a.root(g), beta));
                    out.push(a.x(&model(beta), &model(g)));
                }
            };
            match n {
                6 => {
                    let mut p13 = Vec::new();
                    let mut p14 = Vec::new();
                    for i in 0..6 {
                        for j in i + 1..6 {
                            let g = root(&[(1, i), (-1, j)]);
                            let bij = add(&a.b(i), &a.b(j));
                            for &b in &s {
                                let k = a.dot(&bij, &a.root(b));
                                if k == Q::one() {
                                    gamma_parts(&[g], b, &mut p13);
                                } else if k == -Q::one() {
                                    gamma_parts(&[g], b, &mut p14);
                                }
                            }
                        }
                    }
                    seeds.push(("12".into(), odd_a, 40));
                    seeds.push(("13".into(), p13, 140));
                    seeds.push(("14".into(), p14, 140));
                }
                7 => {
                    let mut gammas = Vec::new();
                    for i in 0..6 {
                        for j in i + 1..6 {
                            for (u, v) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                                gammas.push(root(&[(u, i), (v, j)]));
                            }
                        }
                    }
                    let mut p10 = Vec::new();
                    for &b in &s {
                        gamma_parts(&gammas, b, &mut p10);
                    }
                    seeds.push(("9".into(), odd_a, 64));
                    seeds.push(("10".into(), p10, 704));
                }
                _ => {
                    let perp: Vec<usize> = (0..rs.nroots()).filter(|&g| rs.kappa(alpha, g) == 0).collect();
                    let mut p7 = Vec::new();
                    for &b in &s {
                        gamma_parts(&perp, b, &mut p7);
                    }
                    seeds.push(("6".into(), odd_a, 112));
                    seeds.push(("7".into(), p7, 1824));
                }
            }
        }
    }
    let parts = seeds
        .into_par_iter()
        .map(|(label, s, e)| Part { label, basis: close(alg, &s, &gens), expected: e })
        .collect();
    Ok(Decomposition { name: format!("A local {}", rs.label()), context: Context::Full, root: Some(alpha), parts })
}

// ---------------------------------------------------------------- gradings

/// Parity of each part: the sign of s_α on 𝔍, or the parity of the h_α
/// eigenvalues on 𝔄.
pub fn grading_assign(alg: &CoreAlgebra, dec: &Decomposition) -> Result<Vec<u8>, DecompError> {
    let alpha = dec.root.expect("local decomposition");
    let rs = &alg.rs;
    let zs = &alg.zs;
    let refl = reflection_matrix(alg, alpha);
    dec.parts
        .iter()
        .map(|p| {
            let mut parity = None;
            for v in &p.basis {
                let par = match dec.context {
                    Context::Zero => {
                        let d = v.to_dense(alg.jdim());
                        let img = SparseVec::from_dense(&zs.weyl_act_j(&refl, &d));
                        if img == *v {
                            0
                        } else if img == v.neg() {
                            1
                        } else {
                            return Err(DecompError::MixedParity(p.label.clone()));
                        }
                    }
                    Context::Full => (rs.pairing(rs.root(alpha), &weight_of(alg, v)).rem_euclid(2)) as u8,
                };
                if parity.is_some_and(|x| x != par) {
                    return Err(DecompError::MixedParity(p.label.clone()));
                }
                parity = Some(par);
            }
            Ok(parity.unwrap_or(0))
        })
        .collect()
}

/// Matrix of s_α on simple-coroot coordinates.
pub fn reflection_matrix(alg: &CoreAlgebra, alpha: usize) -> Matrix {
    let a = alg.coroot(alpha);
    let n = a.len();
    let u = alg.zs.cartan().mul_vec(a).expect("dim");
    let mut m = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            let v = m.get(i, j) - &a[i] * &u[j];
            m.set(i, j, v);
        }
    }
    m
}

/// τ: +1 on even parts, −1 on odd parts.
pub struct MiyamotoMap {
    pub signs: Vec<(String, i8)>,
    index: PartIndex,
}

impl MiyamotoMap {
    pub fn apply(&self, alg: &CoreAlgebra, v: &SparseVec) -> SparseVec {
        let comps = self.index.split(alg, v).unwrap_or_else(|r| panic!("vector outside the decomposition, residual {r:?}"));
        comps.get(&0).cloned().unwrap_or_default().sub(&comps.get(&1).cloned().unwrap_or_default())
    }

    /// The map on 𝔍 as a matrix acting on coordinate columns.
    pub fn j_matrix(&self, alg: &CoreAlgebra) -> Matrix {
        let d = alg.jdim();
        let mut m = Matrix::zeros(d, d);
        for c in 0..d {
            let img = self.apply(alg, &SparseVec::unit(c));
            for (r, x) in img.iter() {
                m.set(*r, c, x.clone());
            }
        }
        m
    }
}

/// ξ per part from the labels of a graded law.
pub fn law_grading(law: &FusionLaw, dec: &Decomposition) -> Result<Vec<u8>, DecompError> {
    let grading = law.grading.as_ref().ok_or_else(|| DecompError::NoGrading(law.name.clone()))?;
    dec.parts
        .iter()
        .map(|p| law.index(&p.label).map(|x| grading[x]).ok_or_else(|| DecompError::UnknownLabel(p.label.clone())))
        .collect()
}

/// Odd labels of the local law of 𝔍. The D_n grading is also meaningful for
/// 4 ≤ n ≤ 6, where the parts exist but are not isotypic.
pub fn j_local_odd_labels(kind: CartanType) -> &'static [&'static str] {
    match kind {
        CartanType::A => &["4", "5"],
        CartanType::D => &["4", "6"],
        CartanType::E => &["5"],
    }
}

/// The Miyamoto involution for a grading given per part.
///
/// Only the even and odd spans need to be complementary, so decompositions
/// with dependent parts of equal parity are accepted.
pub fn miyamoto(alg: &CoreAlgebra, dec: &Decomposition, grading: &[u8]) -> Result<MiyamotoMap, DecompError> {
    let mut even = Vec::new();
    let mut odd = Vec::new();
    let mut signs = Vec::new();
    for (p, &g) in dec.parts.iter().zip(grading) {
        if g == 0 { &mut even } else { &mut odd }.extend(p.basis.iter().cloned());
        signs.push((p.label.clone(), if g == 0 { 1 } else { -1 }));
    }
    let even = span(alg, &even);
    let odd = span(alg, &odd);
    let index = PartIndex::new(alg, &[&even, &odd]);
    if !index.direct {
        return Err(DecompError::NotDirect);
    }
    Ok(MiyamotoMap { signs, index })
}

/// (−1)^{κ(α,μ)} on each weight space 𝔄_μ.
pub fn weight_parity_tau(alg: &CoreAlgebra, alpha: usize, v: &SparseVec) -> SparseVec {
    let rs = &alg.rs;
    let terms = v.iter().map(|(i, c)| {
        let odd = rs.pairing(rs.root(alpha), alg.weight(*i)).rem_euclid(2) == 1;
        (*i, if odd { -c.clone() } else { c.clone() })
    });
    SparseVec::from_pairs(terms.collect::<Vec<_>>())
}

/// Labels of parts not mapped into themselves by the symmetry group of the
/// decomposition: W or C_W(s_α) on 𝔍, 𝓛 or 𝓛_𝔦 on 𝔄.
pub fn invariance_violations(alg: &CoreAlgebra, dec: &Decomposition) -> Vec<String> {
    let rs = &alg.rs;
    let gens = match dec.root {
        Some(a) => local_gens(rs, a),
        None => global_gens(rs),
    };
    let check = |p: &Part| -> bool {
        let mut ech = Echelon::new();
        for v in &p.basis {
            ech.insert(v);
        }
        match dec.context {
            Context::Zero => {
                // Reflections in the positive generators; s_α for the local case.
                let d = alg.jdim();
                gens.iter().filter(|&&g| rs.is_positive(g)).all(|&g| {
                    let m = reflection_matrix(alg, g);
                    p.basis.iter().all(|v| ech.contains(&SparseVec::from_dense(&alg.zs.weyl_act_j(&m, &v.to_dense(d)))))
                })
            }
            Context::Full => gens.iter().all(|&g| p.basis.iter().all(|v| ech.contains(&alg.act(g, v)))),
        }
    };
    dec.parts.par_iter().filter(|p| !check(p)).map(|p| p.label.clone()).collect()
}

/// Order of the group generated by `gens`, or `None` once it exceeds `limit`.
pub fn generated_group_order(gens: &[Matrix], limit: usize) -> Option<usize> {
    let n = gens.first().map_or(0, |g| g.rows);
    let id = Matrix::identity(n);
    let mut seen = std::collections::HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        for g in gens {
            let p = g.mul(&m).expect("square matrices");
            if seen.insert(p.clone()) {
                if seen.len() > limit {
                    return None;
                }
                queue.push_back(p);
            }
        }
    }
    Some(seen.len())
}

// ---------------------------------------------------------------- verification

#[derive(Clone, Copy, Debug, Serialize)]
pub enum Sampling {
    /// Every pair of basis vectors.
    Full,
    /// At most `per_pair` random basis-vector pairs per part pair.
    Sample { per_pair: usize, seed: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct FusionCheck {
    pub pair: (String, String),
    pub allowed: Vec<String>,
    pub observed: Vec<String>,
    pub products: usize,
    pub ok: bool,
    /// A product that left the span of the decomposition.
    pub outside_span: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FusionReport {
    pub law: String,
    pub decomposition: String,
    pub direct: bool,
    pub checks: Vec<FusionCheck>,
    pub ok: bool,
}

pub type Product<'a> = dyn Fn(&SparseVec, &SparseVec) -> SparseVec + Sync + 'a;

/// Checks A_x A_y ⊆ ⊕_{z ∈ x⊛y} A_z on products of spanning vectors.
pub fn verify_fusion(
    alg: &CoreAlgebra,
    dec: &Decomposition,
    law: &FusionLaw,
    product: &Product,
    sampling: Sampling,
) -> Result<FusionReport, DecompError> {
    let labels: Vec<usize> = dec
        .parts
        .iter()
        .map(|p| law.index(&p.label).ok_or_else(|| DecompError::UnknownLabel(p.label.clone())))
        .collect::<Result<_, _>>()?;
    let index = PartIndex::of(alg, dec);
    let np = dec.parts.len();
    let pairs: Vec<(usize, usize)> = (0..np).flat_map(|x| (x..np).map(move |y| (x, y))).collect();
    let checks: Vec<FusionCheck> = pairs
        .par_iter()
        .map(|&(x, y)| {
            let (px, py) = (&dec.parts[x], &dec.parts[y]);
            let mut vp: Vec<(usize, usize)> = Vec::new();
            for i in 0..px.basis.len() {
                let j0 = if x == y { i } else { 0 };
                for j in j0..py.basis.len() {
                    vp.push((i, j));
                }
            }
            if let Sampling::Sample { per_pair, seed } = sampling {
                if vp.len() > per_pair {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((x as u64) << 32 | y as u64));
                    vp.shuffle(&mut rng);
                    vp.truncate(per_pair);
                }
            }
            let allowed = law.product(labels[x], labels[y]);
            let mut observed: BTreeSet<usize> = BTreeSet::new();
            let mut outside = false;
            for &(i, j) in &vp {
                let w = product(&px.basis[i], &py.basis[j]);
                match index.split(alg, &w) {
                    Ok(c) => observed.extend(c.keys().map(|&k| labels[k])),
                    Err(_) => outside = true,
                }
            }
            let name = |s: &BTreeSet<usize>| s.iter().map(|&z| law.labels[z].clone()).collect::<Vec<_>>();
            FusionCheck {
                pair: (px.label.clone(), py.label.clone()),
                allowed: name(allowed),
                observed: name(&observed),
                products: vp.len(),
                ok: !outside && observed.is_subset(allowed),
                outside_span: outside,
            }
        })
        .collect();
    let ok = index.direct && checks.iter().all(|c| c.ok);
    Ok(FusionReport { law: law.name.clone(), decomposition: dec.name.clone(), direct: index.direct, checks, ok })
}

/// Builds the star product closure for `verify_fusion`.
pub fn star(alg: &CoreAlgebra) -> impl Fn(&SparseVec, &SparseVec) -> SparseVec + Sync + '_ {
    move |a, b| alg.mul(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(k: CartanType, n: usize) -> CoreAlgebra {
        CoreAlgebra::build(k, n).unwrap()
    }

    #[test]
    fn tables_are_symmetric_and_graded() {
        for (k, n) in [(CartanType::A, 3), (CartanType::A, 7), (CartanType::D, 4), (CartanType::D, 8), (CartanType::E, 6), (CartanType::E, 7), (CartanType::E, 8)] {
            let rs = RootSystem::new(k, n).unwrap();
            for law in [j_global_law(&rs), j_local_law(&rs), a_global_law(&rs), a_local_law(&rs)].into_iter().flatten() {
                assert!(law.is_symmetric(), "{}", law.name);
                assert!(law.grading_respected(), "{}", law.name);
                assert!(law.unit.is_some(), "{}", law.name);
            }
        }
        let f = f_prime_law();
        assert!(f.is_symmetric() && f.grading_respected());
        assert_eq!(f.unit, f.index("e"));
    }

    #[test]
    fn markers() {
        let r3 = RootSystem::new(CartanType::A, 3).unwrap();
        let r5 = RootSystem::new(CartanType::A, 5).unwrap();
        let l3 = j_local_law(&r3).unwrap();
        let l5 = j_local_law(&r5).unwrap();
        let two = l3.index("2").unwrap();
        assert_eq!(l3.product(two, two).len(), 1);
        assert_eq!(l5.product(two, two).len(), 3);
        let r6 = RootSystem::new(CartanType::A, 6).unwrap();
        let r7 = RootSystem::new(CartanType::A, 7).unwrap();
        let six = 5;
        assert!(a_local_law(&r6).unwrap().product(six, six).is_empty());
        assert_eq!(a_local_law(&r7).unwrap().product(six, six).len(), 1);
    }

    #[test]
    fn out_of_range_refused() {
        let rs = RootSystem::new(CartanType::D, 6).unwrap();
        assert!(matches!(j_local_law(&rs), Err(DecompError::OutOfRange { .. })));
        assert!(matches!(a_local_law(&rs), Err(DecompError::OutOfRange { .. })));
        let rs = RootSystem::new(CartanType::A, 3).unwrap();
        assert!(a_global_law(&rs).is_err());
    }

    #[test]
    fn j_decompositions_small() {
        let a = alg(CartanType::A, 5);
        let g = j_global(&a).unwrap();
        assert!(g.dim_mismatches().is_empty(), "{:?}", g.dim_mismatches());
        let l = j_local(&a, a.rs.highest_root()).unwrap();
        assert!(l.dim_mismatches().is_empty(), "{:?}", l.dim_mismatches());
        assert_eq!(l.total_dim(), a.jdim());
        assert!(PartIndex::of(&a, &l).direct);
        assert_eq!(grading_assign(&a, &l).unwrap(), vec![0, 0, 0, 1, 1]);
        assert!(l.orthogonality_violations(&a).is_empty());
        assert!(invariance_violations(&a, &l).is_empty());
        assert!(invariance_violations(&a, &g).is_empty());
    }

    #[test]
    fn miyamoto_is_reflection() {
        let a = alg(CartanType::A, 4);
        let law = j_local_law(&a.rs).unwrap();
        for r in 0..a.rs.npos() {
            let dec = j_local(&a, r).unwrap();
            let tau = miyamoto(&a, &dec, &law_grading(&law, &dec).unwrap()).unwrap();
            let m = tau.j_matrix(&a);
            let refl = reflection_matrix(&a, r);
            for c in 0..a.jdim() {
                let e = SparseVec::unit(c);
                let want = SparseVec::from_dense(&a.zs.weyl_act_j(&refl, &e.to_dense(a.jdim())));
                assert_eq!(SparseVec::from_dense(&m.col(c)), want);
            }
        }
    }

    #[test]
    fn local_gens_span() {
        let rs = RootSystem::new(CartanType::E, 8).unwrap();
        // ±α plus ± the seven simple roots of E_7.
        assert_eq!(local_gens(&rs, rs.highest_root()).len(), 16);
    }
}
