//! Chevalley basis signs.
//!
//! `c(α,β)` is the sign in `[e_α, e_β] = c(α,β) e_{α+β}`, built from the
//! asymmetry function ε on the root lattice (ε(α_i,α_j) = κ_ij for i < j,
//! 1 on the diagonal, 0 below) and twisted by the root signs so that the
//! normalization `[e_α, e_{-α}] = h_α` holds:
//!
//! `c(α,β) = s(α) s(β) s(α+β) (-1)^{ε(α,β)}`, with s = ±1 on Φ^±.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::rootsys::RootSystem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChevalleyError {
    #[error("sign identity `{identity}` fails at roots {roots:?}")]
    Identity { identity: &'static str, roots: Vec<usize> },
    #[error("roots {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),
    #[error("weight is not in Λ_0")]
    NotInLambda0,
}

#[derive(Clone, Debug)]
pub struct StructConstants {
    nroots: usize,
    c: Vec<i8>,
    f: Vec<i8>,
}

impl StructConstants {
    pub fn new(rs: &RootSystem) -> Result<Self, ChevalleyError> {
        let n = rs.nroots();
        let rank = rs.rank;
        let cart = rs.cartan();
        let eps_mat: Vec<Vec<i64>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| match i.cmp(&j) {
                        std::cmp::Ordering::Less => cart[i][j],
                        std::cmp::Ordering::Equal => 1,
                        std::cmp::Ordering::Greater => 0,
                    })
                    .collect()
            })
            .collect();
        let eps = |a: usize, b: usize| -> i64 {
            let (x, y) = (rs.simple_coords(a), rs.simple_coords(b));
            let mut s = 0;
            for i in 0..rank {
                if x[i] == 0 {
                    continue;
                }
                for j in 0..rank {
                    s += x[i] * eps_mat[i][j] * y[j];
                }
            }
            s
        };
        let sgn = |i: usize| if rs.is_positive(i) { 1i8 } else { -1 };
        let mut c = vec![0i8; n * n];
        for a in 0..n {
            for b in 0..n {
                if let Some(g) = rs.sum_root(a, b) {
                    let e = if eps(a, b).rem_euclid(2) == 0 { 1 } else { -1 };
                    c[a * n + b] = sgn(a) * sgn(b) * sgn(g) * e;
                }
            }
        }
        let mut sc = StructConstants { nroots: n, c, f: vec![0; n * n] };
        for l in rs.lambda0() {
            let (al, bl) = (l.alpha, l.beta);
            for a in 0..n {
                let Some(b) = rs.index_of(&crate::rootsys::vsub(&l.weight, rs.root(a))) else {
                    continue;
                };
                if rs.kappa(a, b) != 0 {
                    continue;
                }
                let v = if (a, b) == (al, bl) || (a, b) == (bl, al) {
                    1
                } else {
                    -sc.c(a, rs.neg(al)) * sc.c(b, rs.neg(bl))
                };
                sc.f[a * n + b] = v as i8;
            }
        }
        sc.check_identities(rs)?;
        Ok(sc)
    }

    /// Sign of `[e_a, e_b]`; 0 when `a+b` is not a root.
    #[inline]
    pub fn c(&self, a: usize, b: usize) -> i64 {
        self.c[a * self.nroots + b] as i64
    }

    /// The sign f_{α,β} for orthogonal roots.
    pub fn f_sign(&self, a: usize, b: usize) -> Result<i64, ChevalleyError> {
        match self.f[a * self.nroots + b] {
            0 => Err(ChevalleyError::NotOrthogonal(a, b)),
            v => Ok(v as i64),
        }
    }

    #[inline]
    pub fn f(&self, a: usize, b: usize) -> i64 {
        let v = self.f[a * self.nroots + b];
        assert!(v != 0, "f requested for non-orthogonal roots {a}, {b}");
        v as i64
    }

    pub fn canonical_pair(&self, rs: &RootSystem, weight: &[i64]) -> Result<(usize, usize), ChevalleyError> {
        let i = rs.lambda0_index(weight).ok_or(ChevalleyError::NotInLambda0)?;
        let l = &rs.lambda0()[i];
        Ok((l.alpha, l.beta))
    }

    fn check_identities(&self, rs: &RootSystem) -> Result<(), ChevalleyError> {
        match self.identity_violations(rs, 1).into_iter().next() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    /// Violations of the sign identities, up to `limit` of them.
    pub fn identity_violations(&self, rs: &RootSystem, limit: usize) -> Vec<ChevalleyError> {
        let n = self.nroots;
        let mut out = Vec::new();
        let mut bad = |identity: &'static str, roots: Vec<usize>| {
            if out.len() < limit {
                out.push(ChevalleyError::Identity { identity, roots });
            }
        };
        for a in 0..n {
            for b in 0..n {
                let Some(g) = rs.sum_root(a, b) else { continue };
                if self.c(a, b) != -self.c(b, a) {
                    bad("c(a,b) = -c(b,a)", vec![a, b]);
                }
                if self.c(a, b) != -self.c(rs.neg(a), rs.neg(b)) {
                    bad("c(a,b) = -c(-a,-b)", vec![a, b]);
                }
                let mg = rs.neg(g);
                if self.c(a, b) != self.c(b, mg) || self.c(b, mg) != self.c(mg, a) {
                    bad("cyclic", vec![a, b, mg]);
                }
            }
        }
        for l in rs.lambda0() {
            if self.f(l.alpha, l.beta) != 1 {
                bad("f at canonical pair", vec![l.alpha, l.beta]);
            }
        }
        for a in 0..n {
            for b in 0..n {
                if rs.kappa(a, b) != 0 {
                    continue;
                }
                if self.f(a, b) != self.f(b, a) {
                    bad("f symmetric", vec![a, b]);
                }
                let w = crate::rootsys::vadd(rs.root(a), rs.root(b));
                match self.canonical_pair(rs, &w) {
                    Ok((al, bl)) => {
                        if self.f(rs.neg(a), rs.neg(b)) != self.f(a, b) * self.f(rs.neg(al), rs.neg(bl)) {
                            bad("f(-a,-b) = f(a,b) f(-al,-bl)", vec![a, b]);
                        }
                    }
                    Err(_) => bad("canonical pair", vec![a, b]),
                }
            }
        }
        out
    }

    /// Sign table as JSON-friendly triples.
    pub fn to_doc(&self) -> Vec<SignEntry> {
        let n = self.nroots;
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.c(a, b) != 0 {
                    out.push(SignEntry { alpha: a, beta: b, sign: self.c(a, b) });
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SignEntry {
    pub alpha: usize,
    pub beta: usize,
    pub sign: i64,
}

/// The Lie algebra 𝓛 over ℤ in the Chevalley basis: indices `0..rank` are the
/// simple coroots h_i, and `rank + r` is e_r.
pub struct LieAlgebra<'a> {
    pub rs: &'a RootSystem,
    pub sc: &'a StructConstants,
}

pub type LieVec = Vec<(usize, i64)>;

impl<'a> LieAlgebra<'a> {
    pub fn new(rs: &'a RootSystem, sc: &'a StructConstants) -> Self {
        LieAlgebra { rs, sc }
    }

    pub fn dim(&self) -> usize {
        self.rs.rank + self.rs.nroots()
    }

    pub fn e(&self, r: usize) -> usize {
        self.rs.rank + r
    }

    /// Bracket of two basis elements.
    pub fn bracket_basis(&self, x: usize, y: usize) -> LieVec {
        let (rk, rs) = (self.rs.rank, self.rs);
        match (x < rk, y < rk) {
            (true, true) => vec![],
            (true, false) => {
                let k = rs.kappa(rs.simple()[x], y - rk);
                if k == 0 { vec![] } else { vec![(y, k)] }
            }
            (false, true) => {
                let k = rs.kappa(rs.simple()[y], x - rk);
                if k == 0 { vec![] } else { vec![(x, -k)] }
            }
            (false, false) => {
                let (a, b) = (x - rk, y - rk);
                if b == rs.neg(a) {
                    rs.simple_coords(a)
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, &c)| (i, c))
                        .collect()
                } else if let Some(g) = rs.sum_root(a, b) {
                    vec![(rk + g, self.sc.c(a, b))]
                } else {
                    vec![]
                }
            }
        }
    }

    pub fn bracket(&self, u: &LieVec, v: &LieVec) -> LieVec {
        let mut acc = std::collections::BTreeMap::new();
        for &(i, a) in u {
            for &(j, b) in v {
                for (k, c) in self.bracket_basis(i, j) {
                    *acc.entry(k).or_insert(0) += a * b * c;
                }
            }
        }
        acc.into_iter().filter(|&(_, c)| c != 0).collect()
    }

    /// κ on basis elements: K on the coroots, κ(e_α, e_{-α}) = 1.
    pub fn kappa_basis(&self, x: usize, y: usize) -> i64 {
        let rk = self.rs.rank;
        match (x < rk, y < rk) {
            (true, true) => self.rs.cartan()[x][y],
            (false, false) if self.rs.neg(x - rk) == y - rk => 1,
            _ => 0,
        }
    }

    pub fn kappa(&self, u: &LieVec, v: &LieVec) -> i64 {
        u.iter().flat_map(|&(i, a)| v.iter().map(move |&(j, b)| (i, j, a * b))).map(|(i, j, c)| c * self.kappa_basis(i, j)).sum()
    }

    /// Root triples violating the Jacobi identity, up to `limit` of them.
    pub fn jacobi_violations(&self, limit: usize) -> Vec<(usize, usize, usize)> {
        let n = self.rs.nroots();
        let rk = self.rs.rank;
        let found: Vec<(usize, usize, usize)> = (0..n)
            .into_par_iter()
            .flat_map_iter(|a| {
                let mut bad = Vec::new();
                for b in 0..n {
                    for c in 0..n {
                        if !self.jacobi_ok(rk + a, rk + b, rk + c) {
                            bad.push((a, b, c));
                        }
                    }
                }
                bad
            })
            .collect();
        found.into_iter().take(limit).collect()
    }

    fn jacobi_ok(&self, x: usize, y: usize, z: usize) -> bool {
        let mut acc: Vec<(usize, i64)> = Vec::with_capacity(12);
        for (p, q, r) in [(x, y, z), (y, z, x), (z, x, y)] {
            for (k, c) in self.bracket_basis(q, r) {
                for (m, d) in self.bracket_basis(p, k) {
                    acc.push((m, c * d));
                }
            }
        }
        acc.sort_unstable_by_key(|e| e.0);
        let mut i = 0;
        while i < acc.len() {
            let mut s = 0;
            let k = acc[i].0;
            while i < acc.len() && acc[i].0 == k {
                s += acc[i].1;
                i += 1;
            }
            if s != 0 {
                return false;
            }
        }
        true
    }
}
