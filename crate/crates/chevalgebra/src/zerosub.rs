//! The zero-weight algebra.
//!
//! An element of 𝔍 ≅ S²(𝓗) is stored by coordinates over the monomials
//! h_i h_j (i ≤ j) of simple coroots. As an operator on 𝓗 (in coroot
//! coordinates) it is `M = S K`, where S is the symmetric matrix with
//! `S_ii = c_ii`, `S_ij = c_ij / 2` and K is the Cartan matrix. Then
//! j_α has `S = a aᵀ` (a = simple coordinates of α), the identity has
//! `S = K⁻¹`, the Jordan product is `½(S K T + T K S)` and the trace form is
//! `tr(S K T K)`.
//!
//! 𝔷 is indexed by positive roots. v_α = 2z_α − j_α spans 𝔙 and π is the
//! B-orthogonal projection onto 𝔙^⊥.

use std::collections::HashMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactla::{q, qi, solve, LaError, Matrix, Q};
use crate::rootsys::RootSystem;

#[derive(Debug, Error)]
pub enum ZeroSubError {
    #[error("linear algebra: {0}")]
    La(#[from] LaError),
}

/// An element of 𝔖₀ = 𝔍 ⊕ 𝔷.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct S0Elem {
    pub j: Vec<Q>,
    pub z: Vec<Q>,
}

pub struct ZeroSub {
    pub n: usize,
    npos: usize,
    k: Matrix,
    kinv: Matrix,
    pairs: Vec<(usize, usize)>,
    pair_index: HashMap<(usize, usize), usize>,
    /// Simple coordinates of positive roots.
    a: Vec<Vec<Q>>,
    /// K a: the vector (κ(α, α_i))_i.
    u: Vec<Vec<Q>>,
    ginv: Matrix,
    /// Per basis element: c(b) and P(b) as an S-matrix.
    basis_c: Vec<Vec<Q>>,
    basis_p: Vec<Matrix>,
    diamond: Vec<Vec<Q>>,
    form_a: Matrix,
    root_of_pos: Vec<usize>,
}

impl ZeroSub {
    pub fn new(rs: &RootSystem) -> Result<Self, ZeroSubError> {
        let n = rs.rank;
        let npos = rs.npos();
        let k = rs.cartan_matrix();
        let kinv = k.inverse()?;
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i..n {
                pairs.push((i, j));
            }
        }
        let pair_index = pairs.iter().enumerate().map(|(x, &p)| (p, x)).collect();
        let a: Vec<Vec<Q>> = (0..npos).map(|r| rs.simple_coords(r).iter().map(|&x| qi(x)).collect()).collect();
        let u: Vec<Vec<Q>> = a.iter().map(|v| k.mul_vec(v).expect("dim")).collect();
        let mut g = Matrix::zeros(npos, npos);
        for x in 0..npos {
            for y in 0..npos {
                let kv = rs.kappa(x, y);
                let d = if x == y { 2 } else { 0 };
                g.set(x, y, qi(d + kv * kv));
            }
        }
        let ginv = g.inverse()?;
        let mut zs = ZeroSub {
            n,
            npos,
            k,
            kinv,
            pairs,
            pair_index,
            a,
            u,
            ginv,
            basis_c: Vec::new(),
            basis_p: Vec::new(),
            diamond: Vec::new(),
            form_a: Matrix::zeros(0, 0),
            root_of_pos: (0..npos).collect(),
        };
        let jd = zs.jdim();
        for b in 0..jd {
            let e = zs.unit_coord(b);
            let c = zs.c_of(&e);
            let p = zs.p_of(&e, &c);
            zs.basis_c.push(c);
            zs.basis_p.push(p);
        }
        let mut diamond = vec![Vec::new(); jd * jd];
        let mut form_a = Matrix::zeros(jd, jd);
        for x in 0..jd {
            for y in x..jd {
                let d = zs.diamond_from_parts(x, y);
                diamond[x * jd + y] = d.clone();
                diamond[y * jd + x] = d;
                let f = zs.trace_form_s(&zs.basis_p[x], &zs.basis_p[y])
                    + qi(2) * dot(&zs.basis_c[x], &zs.basis_c[y]);
                form_a.set(x, y, f.clone());
                form_a.set(y, x, f);
            }
        }
        zs.diamond = diamond;
        zs.form_a = form_a;
        Ok(zs)
    }

    pub fn jdim(&self) -> usize {
        self.pairs.len()
    }

    pub fn npos(&self) -> usize {
        self.npos
    }

    pub fn pair(&self, x: usize) -> (usize, usize) {
        self.pairs[x]
    }

    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.pair_index[&(i, j)]
    }

    pub fn cartan(&self) -> &Matrix {
        &self.k
    }

    pub fn cartan_inverse(&self) -> &Matrix {
        &self.kinv
    }

    pub fn zero(&self) -> Vec<Q> {
        vec![Q::zero(); self.jdim()]
    }

    fn unit_coord(&self, x: usize) -> Vec<Q> {
        let mut v = self.zero();
        v[x] = Q::one();
        v
    }

    pub fn to_s(&self, c: &[Q]) -> Matrix {
        let mut s = Matrix::zeros(self.n, self.n);
        let half = q(1, 2);
        for (x, &(i, j)) in self.pairs.iter().enumerate() {
            if i == j {
                s.set(i, i, c[x].clone());
            } else {
                s.set(i, j, &c[x] * &half);
                s.set(j, i, &c[x] * &half);
            }
        }
        s
    }

    pub fn from_s(&self, s: &Matrix) -> Vec<Q> {
        self.pairs
            .iter()
            .map(|&(i, j)| if i == j { s.get(i, i).clone() } else { s.get(i, j) * qi(2) })
            .collect()
    }

    /// Coordinates of the symmetric product x·y of two coroot vectors.
    pub fn sym_product(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let mut s = Matrix::zeros(self.n, self.n);
        let half = q(1, 2);
        for i in 0..self.n {
            for j in 0..self.n {
                s.set(i, j, (&x[i] * &y[j] + &x[j] * &y[i]) * &half);
            }
        }
        self.from_s(&s)
    }

    /// j_α for a root given by simple coordinates.
    pub fn j_coords(&self, a: &[Q]) -> Vec<Q> {
        self.sym_product(a, a)
    }

    pub fn j_root(&self, rs: &RootSystem, r: usize) -> Vec<Q> {
        let a: Vec<Q> = rs.simple_coords(r).iter().map(|&x| qi(x)).collect();
        self.j_coords(&a)
    }

    /// The identity operator on 𝓗.
    pub fn identity(&self) -> Vec<Q> {
        self.from_s(&self.kinv)
    }

    fn jordan_s(&self, s: &Matrix, t: &Matrix) -> Matrix {
        let skt = s.mul(&self.k).and_then(|m| m.mul(t)).expect("dim");
        skt.add(&skt.transpose()).scale(&q(1, 2))
    }

    fn trace_form_s(&self, s: &Matrix, t: &Matrix) -> Q {
        let m = s.mul(&self.k).and_then(|m| m.mul(t)).and_then(|m| m.mul(&self.k)).expect("dim");
        m.trace()
    }

    /// Jordan product on 𝔍.
    pub fn jordan(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        self.from_s(&self.jordan_s(&self.to_s(x), &self.to_s(y)))
    }

    /// Trace form B on 𝔍.
    pub fn trace_form(&self, x: &[Q], y: &[Q]) -> Q {
        self.trace_form_s(&self.to_s(x), &self.to_s(y))
    }

    /// B(x, j_β) for every positive β.
    fn pair_with_js(&self, s: &Matrix) -> Vec<Q> {
        self.u
            .iter()
            .map(|u| {
                let su = s.mul_vec(u).expect("dim");
                dot(u, &su)
            })
            .collect()
    }

    /// Coefficients c with π(x) = x − Σ c_β v_β for x ∈ 𝔍.
    pub fn c_of(&self, x: &[Q]) -> Vec<Q> {
        let rhs: Vec<Q> = self.pair_with_js(&self.to_s(x)).into_iter().map(|v| -v).collect();
        self.ginv.mul_vec(&rhs).expect("dim")
    }

    fn p_of(&self, x: &[Q], c: &[Q]) -> Matrix {
        let mut s = self.to_s(x);
        for (b, cb) in c.iter().enumerate() {
            if cb.is_zero() {
                continue;
            }
            let a = &self.a[b];
            for i in 0..self.n {
                for j in 0..self.n {
                    let v = s.get(i, j) + cb * &a[i] * &a[j];
                    s.set(i, j, v);
                }
            }
        }
        s
    }

    fn diamond_from_parts(&self, x: usize, y: usize) -> Vec<Q> {
        let mut s = self.jordan_s(&self.basis_p[x], &self.basis_p[y]);
        for b in 0..self.npos {
            let cc = &self.basis_c[x][b] * &self.basis_c[y][b];
            if cc.is_zero() {
                continue;
            }
            let a = &self.a[b];
            for i in 0..self.n {
                for j in 0..self.n {
                    let v = s.get(i, j) + &cc * &a[i] * &a[j];
                    s.set(i, j, v);
                }
            }
        }
        self.from_s(&s)
    }

    /// Product ⋄ on basis elements.
    pub fn diamond_basis(&self, x: usize, y: usize) -> &[Q] {
        &self.diamond[x * self.jdim() + y]
    }

    pub fn diamond(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let jd = self.jdim();
        let mut out = self.zero();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, v) in self.diamond[i * jd + j].iter().enumerate() {
                    if !v.is_zero() {
                        out[k] += &ab * v;
                    }
                }
            }
        }
        out
    }

    /// Form B_A on basis elements.
    pub fn form_basis(&self, x: usize, y: usize) -> &Q {
        self.form_a.get(x, y)
    }

    pub fn form(&self, x: &[Q], y: &[Q]) -> Q {
        let gy = self.form_a.mul_vec(y).expect("dim");
        dot(x, &gy)
    }

    pub fn form_matrix(&self) -> &Matrix {
        &self.form_a
    }

    // ---- the full 𝔖₀ picture, used to cross-check the transfer ----

    pub fn s0_from_j(&self, x: &[Q]) -> S0Elem {
        S0Elem { j: x.to_vec(), z: vec![Q::zero(); self.npos] }
    }

    pub fn z_elem(&self, pos: usize) -> S0Elem {
        let mut z = vec![Q::zero(); self.npos];
        z[pos] = Q::one();
        S0Elem { j: self.zero(), z }
    }

    /// v_α = 2z_α − j_α for a positive root.
    pub fn v_elem(&self, rs: &RootSystem, pos: usize) -> S0Elem {
        let mut e = self.z_elem(pos);
        e.z[pos] = qi(2);
        e.j = self.j_root(rs, pos).into_iter().map(|x| -x).collect();
        e
    }

    pub fn bullet(&self, x: &S0Elem, y: &S0Elem) -> S0Elem {
        S0Elem {
            j: self.jordan(&x.j, &y.j),
            z: x.z.iter().zip(&y.z).map(|(a, b)| a * b * q(1, 2)).collect(),
        }
    }

    pub fn form_b(&self, x: &S0Elem, y: &S0Elem) -> Q {
        self.trace_form(&x.j, &y.j) + dot(&x.z, &y.z) * q(1, 2)
    }

    /// The orthogonal projection π onto 𝔙^⊥.
    pub fn project(&self, x: &S0Elem) -> S0Elem {
        let pj = self.pair_with_js(&self.to_s(&x.j));
        let rhs: Vec<Q> = pj.iter().zip(&x.z).map(|(p, z)| z - p).collect();
        let c = self.ginv.mul_vec(&rhs).expect("dim");
        let mut s = self.to_s(&x.j);
        for (b, cb) in c.iter().enumerate() {
            let a = &self.a[b];
            for i in 0..self.n {
                for j in 0..self.n {
                    let v = s.get(i, j) + cb * &a[i] * &a[j];
                    s.set(i, j, v);
                }
            }
        }
        let z = x.z.iter().zip(&c).map(|(z, cb)| z - cb * qi(2)).collect();
        S0Elem { j: self.from_s(&s), z }
    }

    /// Coefficients μ_β with π(j_α) = j_α + Σ μ_β v_β.
    pub fn mu_of_root(&self, rs: &RootSystem, r: usize) -> Vec<Q> {
        self.c_of(&self.j_root(rs, r)).into_iter().map(|c| -c).collect()
    }

    // ---- Weyl group ----

    /// Matrix of the simple reflection s_i on simple (co)root coordinates.
    pub fn simple_reflection(&self, i: usize) -> Matrix {
        let mut w = Matrix::identity(self.n);
        for j in 0..self.n {
            let v = w.get(i, j) - self.k.get(i, j);
            w.set(i, j, v);
        }
        w
    }

    /// Matrix of a word in simple reflections (rightmost letter acts first).
    pub fn word_matrix(&self, word: &[usize]) -> Matrix {
        word.iter().fold(Matrix::identity(self.n), |acc, &i| acc.mul(&self.simple_reflection(i)).expect("dim"))
    }

    /// w · x on 𝔍 for a Weyl element given by its matrix.
    pub fn weyl_act_j(&self, w: &Matrix, x: &[Q]) -> Vec<Q> {
        let s = w.mul(&self.to_s(x)).and_then(|m| m.mul(&w.transpose())).expect("dim");
        self.from_s(&s)
    }

    /// w · x on 𝔖₀, permuting the z_α.
    pub fn weyl_act(&self, rs: &RootSystem, word: &[usize], x: &S0Elem) -> S0Elem {
        let w = self.word_matrix(word);
        let mut z = vec![Q::zero(); self.npos];
        for (b, zb) in x.z.iter().enumerate() {
            if zb.is_zero() {
                continue;
            }
            let img = rs.apply_word(word, rs.root(self.root_of_pos[b]));
            let mut t = rs.index_of(&img).expect("root");
            if !rs.is_positive(t) {
                t = rs.neg(t);
            }
            z[t] += zb;
        }
        S0Elem { j: self.weyl_act_j(&w, &x.j), z }
    }
}

fn dot(x: &[Q], y: &[Q]) -> Q {
    x.iter().zip(y).fold(Q::zero(), |s, (a, b)| if a.is_zero() || b.is_zero() { s } else { s + a * b })
}

/// Orbits of W on ordered pairs of positive roots (lines), the constants b_i,
/// and the solution μ_i of the intersection-parameter system.
#[derive(Clone, Debug)]
pub struct MuSystem {
    pub orbit_of: Vec<usize>,
    pub npos: usize,
    pub b: Vec<Q>,
    pub mu: Vec<Q>,
}

impl MuSystem {
    pub fn orbit(&self, x: usize, y: usize) -> usize {
        self.orbit_of[x * self.npos + y]
    }
}

pub fn mu_system_solve(rs: &RootSystem) -> Result<MuSystem, ZeroSubError> {
    let npos = rs.npos();
    let line = |r: usize| if rs.is_positive(r) { r } else { rs.neg(r) };
    let mut orbit_of = vec![usize::MAX; npos * npos];
    let mut reps: Vec<(usize, usize)> = Vec::new();
    // Diagonal first so that O_0 is the diagonal.
    let mut starts: Vec<(usize, usize)> = vec![(0, 0)];
    starts.extend((0..npos).flat_map(|x| (0..npos).map(move |y| (x, y))));
    for (x0, y0) in starts {
        if orbit_of[x0 * npos + y0] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push((x0, y0));
        orbit_of[x0 * npos + y0] = id;
        let mut stack = vec![(x0, y0)];
        while let Some((x, y)) = stack.pop() {
            for &s in rs.simple() {
                let (a, b) = (line(rs.reflect_root(s, x)), line(rs.reflect_root(s, y)));
                if orbit_of[a * npos + b] == usize::MAX {
                    orbit_of[a * npos + b] = id;
                    stack.push((a, b));
                }
            }
        }
    }
    let d = reps.len();
    let b: Vec<Q> = reps.iter().map(|&(x, y)| qi(rs.kappa(x, y) * rs.kappa(x, y))).collect();
    let mut m = Matrix::zeros(d, d);
    for (kk, &(x, z)) in reps.iter().enumerate() {
        for y in 0..npos {
            let i = orbit_of[x * npos + y];
            let j = orbit_of[y * npos + z];
            let v = m.get(kk, i) + &b[j];
            m.set(kk, i, v);
        }
        let v = m.get(kk, kk) + qi(2);
        m.set(kk, kk, v);
    }
    let sol = solve(&m, &b)?;
    if !sol.kernel.is_empty() {
        return Err(ZeroSubError::La(LaError::Degenerate { radical: sol.kernel.len() }));
    }
    Ok(MuSystem { orbit_of, npos, b, mu: sol.x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::CartanType;

    fn setup(k: CartanType, n: usize) -> (RootSystem, ZeroSub) {
        let rs = RootSystem::new(k, n).unwrap();
        let zs = ZeroSub::new(&rs).unwrap();
        (rs, zs)
    }

    #[test]
    fn jordan_products_of_js() {
        let (rs, zs) = setup(CartanType::D, 4);
        for x in 0..rs.nroots() {
            let jx = zs.j_root(&rs, x);
            for y in 0..rs.nroots() {
                let jy = zs.j_root(&rs, y);
                let p = zs.jordan(&jx, &jy);
                let kv = rs.kappa(x, y);
                let expected: Vec<Q> = match kv {
                    2 | -2 => jx.iter().map(|v| v * qi(2)).collect(),
                    0 => zs.zero(),
                    _ => {
                        let js = zs.j_root(&rs, rs.reflect_root(y, x));
                        (0..zs.jdim()).map(|i| (&jx[i] + &jy[i] - &js[i]) * q(1, 2)).collect()
                    }
                };
                assert_eq!(p, expected);
                assert_eq!(zs.trace_form(&jx, &jy), qi(kv * kv));
            }
        }
    }

    #[test]
    fn projection_properties() {
        let (rs, zs) = setup(CartanType::A, 3);
        for p in 0..rs.npos() {
            let v = zs.v_elem(&rs, p);
            assert_eq!(zs.form_b(&v, &v), qi(6));
            let pv = zs.project(&v);
            assert!(pv.j.iter().chain(&pv.z).all(|x| x.is_zero()));
            let pj = zs.project(&zs.s0_from_j(&zs.j_root(&rs, p)));
            let pz = zs.project(&zs.z_elem(p));
            let twice: Vec<Q> = pz.j.iter().map(|x| x * qi(2)).collect();
            assert_eq!(pj.j, twice);
            assert_eq!(zs.project(&pj), pj);
            for r in 0..rs.npos() {
                let other = zs.s0_from_j(&zs.j_root(&rs, r));
                assert_eq!(zs.form_b(&pj, &other), zs.form_b(&zs.s0_from_j(&zs.j_root(&rs, p)), &zs.project(&other)));
            }
        }
    }

    #[test]
    fn transfer_matches_s0() {
        let (rs, zs) = setup(CartanType::A, 3);
        let jd = zs.jdim();
        let e = |i: usize| {
            let mut v = zs.zero();
            v[i] = Q::one();
            v
        };
        for x in 0..jd {
            for y in 0..jd {
                let (px, py) = (zs.project(&zs.s0_from_j(&e(x))), zs.project(&zs.s0_from_j(&e(y))));
                let lhs = zs.project(&zs.s0_from_j(zs.diamond_basis(x, y)));
                let rhs = zs.project(&zs.bullet(&px, &py));
                assert_eq!(lhs, rhs);
                assert_eq!(zs.form_basis(x, y), &zs.form_b(&px, &py));
            }
        }
        let _ = rs;
    }

    #[test]
    fn frobenius_and_unit() {
        for (k, n) in [(CartanType::A, 4), (CartanType::D, 5), (CartanType::E, 6)] {
            let (rs, zs) = setup(k, n);
            let jd = zs.jdim();
            let r = rs.r();
            let unit: Vec<Q> = zs.identity().iter().map(|x| x * q(6 + r, 2)).collect();
            for x in 0..jd {
                let mut e = zs.zero();
                e[x] = Q::one();
                assert_eq!(zs.diamond(&unit, &e), e);
                for y in 0..jd {
                    assert_eq!(zs.diamond_basis(x, y), zs.diamond_basis(y, x));
                    for z in 0..jd {
                        let mut ez = zs.zero();
                        ez[z] = Q::one();
                        let mut ex = zs.zero();
                        ex[x] = Q::one();
                        let lhs = zs.form(zs.diamond_basis(x, y), &ez);
                        let rhs = zs.form(&ex, zs.diamond_basis(y, z));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
            let sum = (0..rs.npos()).fold(zs.zero(), |acc, p| {
                acc.iter().zip(zs.j_root(&rs, p)).map(|(a, b)| a + b).collect()
            });
            let expected: Vec<Q> = zs.identity().iter().map(|x| x * q(4 + r, 2)).collect();
            assert_eq!(sum, expected);
        }
    }

    #[test]
    fn weyl_equivariance() {
        let (rs, zs) = setup(CartanType::D, 4);
        let words: [&[usize]; 3] = [&[0], &[1, 2], &[3, 1, 0, 2]];
        for word in words {
            let w = zs.word_matrix(word);
            for p in 0..rs.npos() {
                let img = rs.index_of(&rs.apply_word(word, rs.root(p))).unwrap();
                assert_eq!(zs.weyl_act_j(&w, &zs.j_root(&rs, p)), zs.j_root(&rs, img));
                let v = zs.v_elem(&rs, p);
                let line = if rs.is_positive(img) { img } else { rs.neg(img) };
                assert_eq!(zs.weyl_act(&rs, word, &v), zs.v_elem(&rs, line));
                let pj = zs.project(&zs.s0_from_j(&zs.j_root(&rs, p)));
                assert_eq!(zs.weyl_act(&rs, word, &pj), zs.project(&zs.s0_from_j(&zs.j_root(&rs, img))));
            }
        }
    }

    #[test]
    fn mu_system_matches_projection() {
        for (k, n) in [(CartanType::A, 3), (CartanType::A, 5), (CartanType::D, 4), (CartanType::E, 6)] {
            let (rs, zs) = setup(k, n);
            let ms = mu_system_solve(&rs).unwrap();
            assert_eq!(ms.b[ms.orbit(0, 0)], qi(4));
            for a in 0..rs.npos() {
                let mu = zs.mu_of_root(&rs, a);
                for b in 0..rs.npos() {
                    assert_eq!(mu[b], ms.mu[ms.orbit(a, b)], "{} {a} {b}", rs.label());
                }
            }
        }
    }
}
