//! The full algebra 𝔄 = 𝔍 ⊕ ⨁_α 𝔥_α ⊕ ⟨x_λ⟩.
//!
//! Flat basis layout:
//! - `0..jdim`: the monomials h_i h_j (i ≤ j) of 𝔍;
//! - `hoff + r*(n-1) + t`: the t-th canonical basis vector of α_r^⊥ in 𝔥_{α_r};
//! - `xoff + l`: x_λ for the l-th element of Λ_0.
//!
//! The canonical basis of α^⊥ is the reduced row echelon form of
//! {h_i − (κ(h_i,α)/2) h_α}, so the coordinates of a vector of α^⊥ are its
//! entries at the pivot columns.
//!
//! Products of weight vectors reduce to 𝔍 by the 𝓛-action:
//! `[h]_α ∗ w = ½ e_α·(y ∗ w) − ½ y ∗ (e_α·w)` with `y = e_{-α}·[h]_α ∈ 𝔍`,
//! and likewise for x_λ through α_λ.

use std::collections::HashMap;
use std::sync::RwLock;

use num_traits::{One, Zero};

use crate::chevalley::{ChevalleyError, StructConstants};
use crate::exactla::{q, qi, Accum, Matrix, SparseVec, Q};
use crate::rootsys::{vadd, CartanType, RootError, RootSystem, Vector};
use crate::zerosub::{ZeroSub, ZeroSubError};

#[derive(Debug, thiserror::Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Chevalley(#[from] ChevalleyError),
    #[error(transparent)]
    ZeroSub(#[from] ZeroSubError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisIndex {
    /// h_i h_j with i ≤ j.
    J(usize, usize),
    /// t-th basis vector of 𝔥_α for root index `root`.
    H { root: usize, t: usize },
    /// x_λ for λ = Λ_0[l].
    X(usize),
}

pub struct CoreAlgebra {
    pub rs: RootSystem,
    pub sc: StructConstants,
    pub zs: ZeroSub,
    n: usize,
    jd: usize,
    hoff: usize,
    xoff: usize,
    dim: usize,
    root_a: Vec<Vec<Q>>,
    root_u: Vec<Vec<Q>>,
    perp_rows: Vec<Vec<Vec<Q>>>,
    perp_piv: Vec<Vec<usize>>,
    eps: Vec<Vec<Q>>,
    ba_eps: Vec<Vec<Q>>,
    weights: Vec<Vector>,
    act_memo: RwLock<HashMap<(u32, u32), SparseVec>>,
    mul_memo: RwLock<HashMap<(u32, u32), SparseVec>>,
    form_memo: RwLock<HashMap<(u32, u32), Q>>,
}

fn dot(x: &[Q], y: &[Q]) -> Q {
    x.iter().zip(y).fold(Q::zero(), |s, (a, b)| if a.is_zero() || b.is_zero() { s } else { s + a * b })
}

impl CoreAlgebra {
    pub fn build(kind: CartanType, rank: usize) -> Result<Self, AlgebraError> {
        let rs = RootSystem::new(kind, rank)?;
        Self::new(rs)
    }

    pub fn new(rs: RootSystem) -> Result<Self, AlgebraError> {
        let sc = StructConstants::new(&rs)?;
        let zs = ZeroSub::new(&rs)?;
        let n = rs.rank;
        let jd = zs.jdim();
        let nr = rs.nroots();
        let hoff = jd;
        let xoff = hoff + nr * (n - 1);
        let dim = xoff + rs.lambda0().len();
        let k = rs.cartan_matrix();
        let root_a: Vec<Vec<Q>> = (0..nr).map(|r| rs.simple_coords(r).iter().map(|&x| qi(x)).collect()).collect();
        let root_u: Vec<Vec<Q>> = root_a.iter().map(|a| k.mul_vec(a).expect("dim")).collect();
        let mut perp_rows = Vec::with_capacity(nr);
        let mut perp_piv = Vec::with_capacity(nr);
        for r in 0..nr {
            let rows: Vec<Vec<Q>> = (0..n)
                .map(|i| {
                    let c = &root_u[r][i] * q(1, 2);
                    (0..n)
                        .map(|j| {
                            let d = if i == j { Q::one() } else { Q::zero() };
                            d - &c * &root_a[r][j]
                        })
                        .collect()
                })
                .collect();
            let (m, piv) = Matrix::from_rows(&rows).rref();
            assert_eq!(piv.len(), n - 1, "α^⊥ must have dimension n-1");
            perp_rows.push((0..n - 1).map(|t| m.row(t)).collect());
            perp_piv.push(piv);
        }
        let mut eps = Vec::new();
        let mut ba_eps = Vec::new();
        for l in rs.lambda0() {
            let mut v = zs.zero();
            for g in 0..nr {
                if rs.pairing(rs.root(g), &l.weight) == 2 {
                    for (a, b) in v.iter_mut().zip(zs.j_root(&rs, g)) {
                        *a += b;
                    }
                }
            }
            let scale = q(1, 4 * l.n as i64);
            let v: Vec<Q> = v.into_iter().map(|x| x * &scale).collect();
            ba_eps.push(zs.form_matrix().mul_vec(&v).expect("dim"));
            eps.push(v);
        }
        let zero = vec![0; rs.dim];
        let mut weights = vec![zero; jd];
        for r in 0..nr {
            for _ in 0..n - 1 {
                weights.push(rs.root(r).to_vec());
            }
        }
        for l in rs.lambda0() {
            weights.push(l.weight.clone());
        }
        Ok(CoreAlgebra {
            rs,
            sc,
            zs,
            n,
            jd,
            hoff,
            xoff,
            dim,
            root_a,
            root_u,
            perp_rows,
            perp_piv,
            eps,
            ba_eps,
            weights,
            act_memo: RwLock::new(HashMap::new()),
            mul_memo: RwLock::new(HashMap::new()),
            form_memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn jdim(&self) -> usize {
        self.jd
    }

    pub fn hoff(&self) -> usize {
        self.hoff
    }

    pub fn xoff(&self) -> usize {
        self.xoff
    }

    pub fn decode(&self, idx: usize) -> BasisIndex {
        if idx < self.jd {
            let (i, j) = self.zs.pair(idx);
            BasisIndex::J(i, j)
        } else if idx < self.xoff {
            let off = idx - self.hoff;
            BasisIndex::H { root: off / (self.n - 1), t: off % (self.n - 1) }
        } else {
            BasisIndex::X(idx - self.xoff)
        }
    }

    pub fn encode(&self, b: BasisIndex) -> usize {
        match b {
            BasisIndex::J(i, j) => self.zs.pair_index(i, j),
            BasisIndex::H { root, t } => self.hoff + root * (self.n - 1) + t,
            BasisIndex::X(l) => self.xoff + l,
        }
    }

    pub fn weight(&self, idx: usize) -> &[i64] {
        &self.weights[idx]
    }

    /// Whether the algebra has a nonzero weight space at `w`.
    pub fn has_weight(&self, w: &[i64]) -> bool {
        w.iter().all(|&x| x == 0) || self.rs.index_of(w).is_some() || self.rs.lambda0_index(w).is_some()
    }

    /// Simple-coroot coordinates of h_α.
    pub fn coroot(&self, r: usize) -> &[Q] {
        &self.root_a[r]
    }

    /// The t-th canonical basis vector of α_r^⊥.
    pub fn perp_vector(&self, r: usize, t: usize) -> &[Q] {
        &self.perp_rows[r][t]
    }

    /// κ(h, α_r) for h in coroot coordinates.
    pub fn kappa_h_root(&self, h: &[Q], r: usize) -> Q {
        dot(h, &self.root_u[r])
    }

    pub fn j_elem(&self, coords: &[Q]) -> SparseVec {
        SparseVec::from_dense(coords)
    }

    /// [h]_α for any h ∈ 𝓗 (projected onto α^⊥).
    pub fn h_elem(&self, r: usize, h: &[Q]) -> SparseVec {
        let k = self.kappa_h_root(h, r) * q(1, 2);
        let base = self.hoff + r * (self.n - 1);
        let pairs = self.perp_piv[r].iter().enumerate().filter_map(|(t, &p)| {
            let c = &h[p] - &k * &self.root_a[r][p];
            if c.is_zero() { None } else { Some((base + t, c)) }
        });
        SparseVec::from_pairs(pairs)
    }

    pub fn x_elem(&self, l: usize) -> SparseVec {
        SparseVec::unit(self.xoff + l)
    }

    /// J-part as dense coordinates.
    pub fn j_part(&self, v: &SparseVec) -> Vec<Q> {
        let mut out = self.zs.zero();
        for (i, c) in v.iter() {
            if *i < self.jd {
                out[*i] = c.clone();
            }
        }
        out
    }

    /// The 𝔥_α component as a coroot vector.
    pub fn h_part(&self, v: &SparseVec, r: usize) -> Vec<Q> {
        let base = self.hoff + r * (self.n - 1);
        let mut out = vec![Q::zero(); self.n];
        for (i, c) in v.iter() {
            if *i >= base && *i < base + self.n - 1 {
                for (o, x) in out.iter_mut().zip(&self.perp_rows[r][i - base]) {
                    *o += c * x;
                }
            }
        }
        out
    }

    pub fn unit(&self) -> SparseVec {
        let r = self.rs.r();
        let s = q(6 + r, 2);
        self.j_elem(&self.zs.identity().iter().map(|x| x * &s).collect::<Vec<_>>())
    }

    /// 𝔢_λ in 𝔍 coordinates.
    pub fn eps_lambda(&self, l: usize) -> &[Q] {
        &self.eps[l]
    }

    // ---- the 𝓛-action ----

    pub fn act_basis(&self, alpha: usize, idx: usize) -> SparseVec {
        let key = (alpha as u32, idx as u32);
        if let Some(v) = self.act_memo.read().expect("lock").get(&key) {
            return v.clone();
        }
        let v = self.act_basis_raw(alpha, idx);
        self.act_memo.write().expect("lock").insert(key, v.clone());
        v
    }

    fn act_basis_raw(&self, alpha: usize, idx: usize) -> SparseVec {
        let rs = &self.rs;
        let a = &self.root_a[alpha];
        match self.decode(idx) {
            BasisIndex::J(..) => {
                let mut e = self.zs.zero();
                e[idx] = Q::one();
                let s = self.zs.to_s(&e);
                let ska = s.mul_vec(&self.root_u[alpha]).expect("dim");
                let h: Vec<Q> = ska.into_iter().map(|x| x * qi(-2)).collect();
                self.h_elem(alpha, &h)
            }
            BasisIndex::H { root: beta, t } => {
                let h = &self.perp_rows[beta][t];
                match rs.kappa(alpha, beta) {
                    -2 => self.j_elem(&self.zs.sym_product(a, h)),
                    -1 => {
                        let g = rs.sum_root(alpha, beta).expect("root sum");
                        let ka = self.kappa_h_root(h, alpha);
                        let v: Vec<Q> = h.iter().zip(&self.root_a[beta]).map(|(x, y)| x + &ka * y).collect();
                        self.h_elem(g, &v).scale(&qi(self.sc.c(alpha, beta)))
                    }
                    0 => {
                        let l = rs.lambda0_index(&vadd(rs.root(alpha), rs.root(beta))).expect("Λ_0 weight");
                        let c = -self.kappa_h_root(h, alpha) * qi(self.sc.f(alpha, beta));
                        SparseVec::single(self.xoff + l, c)
                    }
                    _ => SparseVec::new(),
                }
            }
            BasisIndex::X(l) => {
                let lam = &rs.lambda0()[l];
                let (al, bl) = (lam.alpha, lam.beta);
                match rs.pairing(rs.root(alpha), &lam.weight) {
                    -2 => {
                        let g = rs.index_of(&vadd(&lam.weight, rs.root(alpha))).expect("λ+α is a root");
                        self.h_elem(g, a).scale(&qi(self.sc.f(g, rs.neg(alpha))))
                    }
                    -1 => {
                        let target = rs.lambda0_index(&vadd(&lam.weight, rs.root(alpha))).expect("λ+α ∈ Λ_0");
                        let sign = match (rs.kappa(alpha, al), rs.kappa(alpha, bl)) {
                            (-1, 0) => {
                                let g = rs.sum_root(alpha, al).expect("root");
                                self.sc.c(alpha, al) * self.sc.f(g, bl)
                            }
                            (0, -1) => {
                                let g = rs.sum_root(alpha, bl).expect("root");
                                self.sc.c(alpha, bl) * self.sc.f(al, g)
                            }
                            other => panic!("uncovered action case κ(α,α_λ),κ(α,β_λ) = {other:?}"),
                        };
                        SparseVec::single(self.xoff + target, qi(sign))
                    }
                    0..=2 => SparseVec::new(),
                    k => panic!("κ(α,λ) = {k} is impossible for a simply-laced system"),
                }
            }
        }
    }

    /// e_α · v.
    pub fn act(&self, alpha: usize, v: &SparseVec) -> SparseVec {
        let mut acc = Accum::new();
        for (i, c) in v.iter() {
            acc.add_vec(&self.act_basis(alpha, *i), c);
        }
        acc.finish()
    }

    /// h · v for h in simple-coroot coordinates.
    pub fn act_cartan(&self, h: &[Q], v: &SparseVec) -> SparseVec {
        let simple: Vec<Vector> = self.rs.simple().iter().map(|&s| self.rs.root(s).to_vec()).collect();
        SparseVec::from_pairs(v.iter().map(|(i, c)| {
            let w = self.weight(*i);
            let k = simple.iter().zip(h).fold(Q::zero(), |s, (a, x)| s + x * qi(self.rs.pairing(w, a)));
            (*i, c * k)
        }))
    }

    /// Action of an element of 𝓛 given in the Chevalley basis (see `LieAlgebra`).
    pub fn act_lie(&self, x: &[(usize, i64)], v: &SparseVec) -> SparseVec {
        let n = self.n;
        let mut h = vec![Q::zero(); n];
        let mut acc = Accum::new();
        for &(i, c) in x {
            if i < n {
                h[i] += qi(c);
            } else {
                acc.add_vec(&self.act(i - n, v), &qi(c));
            }
        }
        if h.iter().any(|x| !x.is_zero()) {
            acc.add_vec(&self.act_cartan(&h, v), &Q::one());
        }
        acc.finish()
    }

    // ---- product and form ----

    pub fn mul_basis(&self, x: usize, y: usize) -> SparseVec {
        let (x, y) = if x <= y { (x, y) } else { (y, x) };
        if !self.has_weight(&vadd(self.weight(x), self.weight(y))) {
            return SparseVec::new();
        }
        let key = (x as u32, y as u32);
        if let Some(v) = self.mul_memo.read().expect("lock").get(&key) {
            return v.clone();
        }
        let v = self.mul_basis_raw(x, y);
        self.mul_memo.write().expect("lock").insert(key, v.clone());
        v
    }

    fn mul_basis_raw(&self, x: usize, y: usize) -> SparseVec {
        let half = q(1, 2);
        match (self.decode(x), self.decode(y)) {
            (BasisIndex::J(..), BasisIndex::J(..)) => self.j_elem(self.zs.diamond_basis(x, y)),
            (BasisIndex::J(..), BasisIndex::H { root, .. }) => {
                let w = self.act_basis(self.rs.neg(root), y);
                let mut ex = self.zs.zero();
                ex[x] = Q::one();
                let d = self.zs.diamond(&ex, &self.j_part(&w));
                self.act(root, &self.j_elem(&d)).scale(&half)
            }
            (BasisIndex::J(..), BasisIndex::X(l)) => SparseVec::single(y, self.ba_eps[l][x].clone()),
            (BasisIndex::H { root, .. }, _) => self.reduce_mul(root, x, y),
            (BasisIndex::X(l), _) => {
                let al = self.rs.lambda0()[l].alpha;
                self.reduce_mul(al, x, y)
            }
        }
    }

    /// `x ∗ w` via `½ e_α·(y ∗ w) − ½ y ∗ (e_α·w)` with `y = e_{-α}·x`.
    fn reduce_mul(&self, alpha: usize, x: usize, w: usize) -> SparseVec {
        let half = q(1, 2);
        let y = self.act_basis(self.rs.neg(alpha), x);
        let ew = self.act_basis(alpha, w);
        let first = self.act(alpha, &self.mul(&y, &SparseVec::unit(w)));
        let second = self.mul(&y, &ew);
        first.sub(&second).scale(&half)
    }

    pub fn mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut acc = Accum::new();
        for (i, ca) in a.iter() {
            for (j, cb) in b.iter() {
                let p = self.mul_basis(*i, *j);
                if !p.is_zero() {
                    acc.add_vec(&p, &(ca * cb));
                }
            }
        }
        acc.finish()
    }

    pub fn form_basis(&self, x: usize, y: usize) -> Q {
        let (x, y) = if x <= y { (x, y) } else { (y, x) };
        if vadd(self.weight(x), self.weight(y)).iter().any(|&c| c != 0) {
            return Q::zero();
        }
        let key = (x as u32, y as u32);
        if let Some(v) = self.form_memo.read().expect("lock").get(&key) {
            return v.clone();
        }
        let v = match self.decode(x) {
            BasisIndex::J(..) => self.zs.form_basis(x, y).clone(),
            BasisIndex::H { root, .. } => self.reduce_form(root, x, y),
            BasisIndex::X(l) => self.reduce_form(self.rs.lambda0()[l].alpha, x, y),
        };
        self.form_memo.write().expect("lock").insert(key, v.clone());
        v
    }

    /// `ℬ(x, w) = −½ ℬ(e_{-α}·x, e_α·w)`.
    fn reduce_form(&self, alpha: usize, x: usize, w: usize) -> Q {
        let y = self.act_basis(self.rs.neg(alpha), x);
        let ew = self.act_basis(alpha, w);
        self.form(&y, &ew) * q(-1, 2)
    }

    pub fn form(&self, a: &SparseVec, b: &SparseVec) -> Q {
        let mut s = Q::zero();
        for (i, ca) in a.iter() {
            for (j, cb) in b.iter() {
                let f = self.form_basis(*i, *j);
                if !f.is_zero() {
                    s += ca * cb * f;
                }
            }
        }
        s
    }

    /// Gram matrix of ℬ on the flat basis.
    pub fn gram(&self) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for x in 0..self.dim {
            for y in x..self.dim {
                let f = self.form_basis(x, y);
                if !f.is_zero() {
                    m.set(x, y, f.clone());
                    m.set(y, x, f);
                }
            }
        }
        m
    }

    /// Basis indices of the weight space at `w`.
    pub fn weight_space(&self, w: &[i64]) -> Vec<usize> {
        if w.iter().all(|&c| c == 0) {
            return (0..self.jd).collect();
        }
        if let Some(r) = self.rs.index_of(w) {
            let base = self.hoff + r * (self.n - 1);
            return (base..base + self.n - 1).collect();
        }
        if let Some(l) = self.rs.lambda0_index(w) {
            return vec![self.xoff + l];
        }
        Vec::new()
    }

    pub fn memo_sizes(&self) -> (usize, usize, usize) {
        (
            self.act_memo.read().expect("lock").len(),
            self.mul_memo.read().expect("lock").len(),
            self.form_memo.read().expect("lock").len(),
        )
    }
}
