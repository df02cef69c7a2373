//! Brute-force model of 𝒜 inside S²(𝓛).
//!
//! Builds the symmetric square over the Chevalley basis, the submodule 𝒱
//! generated by e_ω e_ω, and projects onto 𝒜 = 𝒱^⊥ weight space by weight.
//! Everything is computed from the bracket and κ alone.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, VecDeque};

use chevalgebra::chevalley::{LieAlgebra, StructConstants};
use chevalgebra::exactla::{q, qi, solve, Accum, Echelon, Matrix, SparseVec, Q};
use chevalgebra::rootsys::{vadd, RootSystem, Vector};
use num_traits::{One, Zero};

pub struct Oracle<'a> {
    pub lie: LieAlgebra<'a>,
    pub d: usize,
    pairs: Vec<(usize, usize)>,
    pair_index: HashMap<(usize, usize), usize>,
    weights: Vec<Vector>,
    /// Echelon basis of 𝒱 per weight.
    pub v_parts: BTreeMap<Vector, Echelon>,
}

impl<'a> Oracle<'a> {
    pub fn new(rs: &'a RootSystem, sc: &'a StructConstants) -> Self {
        let lie = LieAlgebra::new(rs, sc);
        let d = lie.dim();
        let mut pairs = Vec::new();
        for p in 0..d {
            for r in p..d {
                pairs.push((p, r));
            }
        }
        let pair_index = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let lw = |x: usize| -> Vector {
            if x < rs.rank { vec![0; rs.dim] } else { rs.root(x - rs.rank).to_vec() }
        };
        let weights = pairs.iter().map(|&(p, r)| vadd(&lw(p), &lw(r))).collect();
        let mut o = Oracle { lie, d, pairs, pair_index, weights, v_parts: BTreeMap::new() };
        o.build_v();
        o
    }

    pub fn rs(&self) -> &RootSystem {
        self.lie.rs
    }

    pub fn s2_dim(&self) -> usize {
        self.pairs.len()
    }

    pub fn mono(&self, x: usize, y: usize) -> SparseVec {
        let key = if x <= y { (x, y) } else { (y, x) };
        SparseVec::unit(self.pair_index[&key])
    }

    /// Symmetric product of two elements of 𝓛.
    pub fn sym(&self, u: &[(usize, Q)], v: &[(usize, Q)]) -> SparseVec {
        let mut acc = Accum::new();
        for (x, a) in u {
            for (y, b) in v {
                let key = if x <= y { (*x, *y) } else { (*y, *x) };
                acc.add(self.pair_index[&key], a * b);
            }
        }
        acc.finish()
    }

    fn weight_of(&self, v: &SparseVec) -> Vector {
        let w = self.weights[v.leading().expect("nonzero").0].clone();
        debug_assert!(v.iter().all(|(i, _)| self.weights[*i] == w));
        w
    }

    /// ℓ · (l1 l2) = [ℓ,l1] l2 + l1 [ℓ,l2], for a basis element ℓ.
    pub fn act(&self, l: usize, v: &SparseVec) -> SparseVec {
        let mut acc = Accum::new();
        for (i, c) in v.iter() {
            let (x, y) = self.pairs[*i];
            for (z, k) in self.lie.bracket_basis(l, x) {
                acc.add_vec(&self.mono(z, y), &(c * qi(k)));
            }
            for (z, k) in self.lie.bracket_basis(l, y) {
                acc.add_vec(&self.mono(x, z), &(c * qi(k)));
            }
        }
        acc.finish()
    }

    pub fn bullet(&self, u: &SparseVec, v: &SparseVec) -> SparseVec {
        let k = |a: usize, b: usize| self.lie.kappa_basis(a, b);
        let mut acc = Accum::new();
        for (i, a) in u.iter() {
            let (l1, l2) = self.pairs[*i];
            for (j, b) in v.iter() {
                let (l3, l4) = self.pairs[*j];
                let c = a * b * q(1, 4);
                for (kk, x, y) in [(k(l1, l3), l2, l4), (k(l1, l4), l2, l3), (k(l2, l3), l1, l4), (k(l2, l4), l1, l3)] {
                    if kk != 0 {
                        acc.add_vec(&self.mono(x, y), &(&c * qi(kk)));
                    }
                }
            }
        }
        acc.finish()
    }

    pub fn form(&self, u: &SparseVec, v: &SparseVec) -> Q {
        let k = |a: usize, b: usize| self.lie.kappa_basis(a, b);
        let mut s = Q::zero();
        for (i, a) in u.iter() {
            let (l1, l2) = self.pairs[*i];
            for (j, b) in v.iter() {
                let (l3, l4) = self.pairs[*j];
                let f = k(l1, l3) * k(l2, l4) + k(l1, l4) * k(l2, l3);
                if f != 0 {
                    s += a * b * q(f, 2);
                }
            }
        }
        s
    }

    fn build_v(&mut self) {
        let rs = self.lie.rs;
        let rk = rs.rank;
        let w = rs.highest_root();
        let start = self.mono(rk + w, rk + w);
        let gens: Vec<usize> = rs.simple().iter().flat_map(|&s| [rk + s, rk + rs.neg(s)]).collect();
        let mut queue = VecDeque::new();
        self.v_parts.entry(self.weight_of(&start)).or_default().insert(&start);
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for &g in &gens {
                let u = self.act(g, &v);
                if u.is_zero() {
                    continue;
                }
                let wt = self.weight_of(&u);
                if self.v_parts.entry(wt).or_default().insert(&u).is_some() {
                    queue.push_back(u);
                }
            }
        }
    }

    pub fn v_dim(&self) -> usize {
        self.v_parts.values().map(|e| e.dim()).sum()
    }

    /// Projection onto 𝒜 along 𝒱 for a weight vector.
    pub fn project(&self, u: &SparseVec) -> SparseVec {
        if u.is_zero() {
            return u.clone();
        }
        let mu = self.weight_of(u);
        let neg: Vector = mu.iter().map(|x| -x).collect();
        let (Some(vp), Some(vn)) = (self.v_parts.get(&mu), self.v_parts.get(&neg)) else {
            return u.clone();
        };
        let vb: Vec<&SparseVec> = vp.basis().collect();
        let wb: Vec<&SparseVec> = vn.basis().collect();
        let mut m = Matrix::zeros(wb.len(), vb.len());
        for (l, w) in wb.iter().enumerate() {
            for (k, v) in vb.iter().enumerate() {
                m.set(l, k, self.form(v, w));
            }
        }
        let rhs: Vec<Q> = wb.iter().map(|w| self.form(u, w)).collect();
        let d = solve(&m, &rhs).expect("form is nondegenerate on 𝒱").x;
        let mut out = u.clone();
        for (k, v) in vb.iter().enumerate() {
            out = out.add_scaled(v, &-d[k].clone());
        }
        out
    }

    /// Projection of an arbitrary element (split by weight).
    pub fn project_any(&self, u: &SparseVec) -> SparseVec {
        let mut by_w: BTreeMap<Vector, Vec<(usize, Q)>> = BTreeMap::new();
        for (i, c) in u.iter() {
            by_w.entry(self.weights[*i].clone()).or_default().push((*i, c.clone()));
        }
        let mut acc = Accum::new();
        for (_, parts) in by_w {
            acc.add_vec(&self.project(&SparseVec::from_pairs(parts)), &Q::one());
        }
        acc.finish()
    }

    fn h_vec(&self, h: &[Q]) -> Vec<(usize, Q)> {
        h.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
    }

    /// θ(h_i h_j), the image of a 𝔍 monomial.
    pub fn theta_j(&self, i: usize, j: usize) -> SparseVec {
        self.project(&self.mono(i, j))
    }

    /// θ([h]_α) = \overline{e_α h}.
    pub fn theta_h(&self, r: usize, h: &[Q]) -> SparseVec {
        let e = vec![(self.lie.e(r), Q::one())];
        self.project(&self.sym(&e, &self.h_vec(h)))
    }

    /// θ(x_λ) = \overline{e_{α_λ} e_{β_λ}}.
    pub fn theta_x(&self, a: usize, b: usize) -> SparseVec {
        self.project(&self.mono(self.lie.e(a), self.lie.e(b)))
    }
}
