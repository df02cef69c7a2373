//! The one-parameter family (𝔄, ⊙, ℬ_p) for E_8 and its axial structure.
//!
//! Write x = c·𝟏 + x′ with x′ ⊥ 𝟏. Then
//!
//! ```text
//! (c₁𝟏 + a₁) ⊙ (c₂𝟏 + a₂) = (c₁c₂ + p ℬ(a₁,a₂)) 𝟏 + c₁a₂ + c₂a₁ + a₁ ∗ a₂
//! ℬ_p(c₁𝟏 + a₁, c₂𝟏 + a₂) = c₁c₂ ℬ(𝟏,𝟏) + (1 + p ℬ(𝟏,𝟏)) ℬ(a₁,a₂)
//! ```
//!
//! The idempotents of ⟨𝟏, a_α⟩ are parameterized by a rational `s`:
//! c₁ = ½ ± 9s/4, c₂ = (98/9)(1 − 2c₁) and p = (62/s² − 2456)/297724.
//! These solve e ⊙ e = e given a_α ⊙ a_α = (1/496 + p/2)𝟏 + (9/98)a_α.

use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::corealg::CoreAlgebra;
use crate::decomp::{self, Decomposition, FusionReport, Part, Sampling};
use crate::exactla::{q, qi, RatDoc, SparseVec, Q};
use crate::rootsys::{CartanType, RootSystem};

#[derive(Debug, thiserror::Error)]
pub enum AxialError {
    #[error("s must be nonzero")]
    ZeroS,
    #[error("unknown branch {0:?}, expected plus or minus")]
    BadBranch(String),
    #[error("p = -614/74431 admits no idempotent other than 0 and 1")]
    Nilpotent,
    #[error(transparent)]
    Decomp(#[from] decomp::DecompError),
    #[error(transparent)]
    Algebra(#[from] crate::corealg::AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl FromStr for Branch {
    type Err = AxialError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plus" | "+" => Ok(Branch::Plus),
            "minus" | "-" => Ok(Branch::Minus),
            _ => Err(AxialError::BadBranch(s.to_string())),
        }
    }
}

/// ℬ(𝟏,𝟏) = dim 𝓛 for E_8.
pub const DIM_L: i64 = 248;

/// p without an idempotent e ∉ {0, 𝟏} in ⟨𝟏, a_α⟩.
pub fn nilpotent_p() -> Q {
    q(-614, 74431)
}

/// p with a degenerate ℬ_p.
pub fn degenerate_p() -> Q {
    q(-1, DIM_L)
}

#[derive(Clone, Debug)]
pub struct ParamContext {
    pub s: Q,
    pub branch: Branch,
    pub p: Q,
    pub c1: Q,
    pub c2: Q,
}

impl ParamContext {
    pub fn new(s: Q, branch: Branch) -> Result<Self, AxialError> {
        if s.is_zero() {
            return Err(AxialError::ZeroS);
        }
        let p = (qi(62) / (&s * &s) - qi(2456)) / qi(297724);
        let shift = q(9, 4) * &s;
        let c1 = match branch {
            Branch::Plus => q(1, 2) + shift,
            Branch::Minus => q(1, 2) - shift,
        };
        let c2 = q(98, 9) * (Q::one() - qi(2) * &c1);
        Ok(ParamContext { s, branch, p, c1, c2 })
    }

    pub fn to_doc(&self) -> ParamDoc {
        ParamDoc {
            s: RatDoc::from(&self.s),
            branch: self.branch,
            p: RatDoc::from(&self.p),
            c1: RatDoc::from(&self.c1),
            c2: RatDoc::from(&self.c2),
            degenerate_form: self.degenerate_form(),
        }
    }

    /// 1 + p·248 = 0.
    pub fn degenerate_form(&self) -> bool {
        self.p == degenerate_p()
    }

    /// The printed closed form p = (62/s² − 2456)/74431, kept for comparison.
    pub fn printed_p(&self) -> Q {
        (qi(62) / (&self.s * &self.s) - qi(2456)) / qi(74431)
    }
}

/// E_8 algebra with a chosen root α and the axis a_α.
pub struct E8Family {
    pub alg: CoreAlgebra,
    pub alpha: usize,
    /// The ℬ-projection of j_α onto 𝟏^⊥.
    pub a: SparseVec,
    one: SparseVec,
    norm_one: Q,
}

impl E8Family {
    pub fn new() -> Result<Self, AxialError> {
        let alg = CoreAlgebra::build(CartanType::E, 8)?;
        let alpha = alg.rs.highest_root();
        Ok(Self::with_root(alg, alpha))
    }

    pub fn with_root(alg: CoreAlgebra, alpha: usize) -> Self {
        let one = alg.unit();
        let norm_one = alg.form(&one, &one);
        let j = alg.j_elem(&alg.zs.j_root(&alg.rs, alpha));
        let c = alg.form(&j, &one) / &norm_one;
        let a = j.add_scaled(&one, &-c);
        E8Family { alg, alpha, a, one, norm_one }
    }

    pub fn rs(&self) -> &RootSystem {
        &self.alg.rs
    }

    pub fn one(&self) -> &SparseVec {
        &self.one
    }

    /// (c, x′) with x = c·𝟏 + x′ and ℬ(x′, 𝟏) = 0.
    pub fn split(&self, x: &SparseVec) -> (Q, SparseVec) {
        let c = self.alg.form(x, &self.one) / &self.norm_one;
        let rest = x.add_scaled(&self.one, &-c.clone());
        (c, rest)
    }

    pub fn mul_p(&self, p: &Q, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let (cx, xr) = self.split(x);
        let (cy, yr) = self.split(y);
        let prod = self.alg.mul(&xr, &yr);
        // a₁ ∗ a₂ may have a 𝟏-component of its own; ⊙ keeps it.
        let k = &cx * &cy + p * self.alg.form(&xr, &yr);
        prod.add_scaled(&self.one, &k).add_scaled(&yr, &cx).add_scaled(&xr, &cy)
    }

    pub fn form_p(&self, p: &Q, x: &SparseVec, y: &SparseVec) -> Q {
        let (cx, xr) = self.split(x);
        let (cy, yr) = self.split(y);
        cx * cy * &self.norm_one + (Q::one() + p * &self.norm_one) * self.alg.form(&xr, &yr)
    }

    /// e = c₁𝟏 + c₂a_α.
    pub fn axis(&self, ctx: &ParamContext) -> SparseVec {
        self.one.scale(&ctx.c1).add_scaled(&self.a, &ctx.c2)
    }

    /// One witness per component of the local decomposition, labelled as the
    /// parts of the local law.
    pub fn witnesses(&self) -> Vec<(String, SparseVec)> {
        let rs = self.rs();
        let alg = &self.alg;
        let al = self.alpha;
        let perp: Vec<usize> = (0..rs.npos()).filter(|&b| rs.kappa(al, b) == 0).collect();
        let (v, w) = perp
            .iter()
            .flat_map(|&v| perp.iter().map(move |&w| (v, w)))
            .find(|&(v, w)| rs.kappa(v, w) == 0)
            .expect("orthogonal pair in the E_7 subsystem");
        let cv = alg.coroot(v).to_vec();
        let cw = alg.coroot(w).to_vec();
        let ca = alg.coroot(al).to_vec();
        let three = alg.j_elem(&alg.zs.sym_product(&cv, &cw));
        let five = alg.j_elem(&alg.zs.sym_product(&ca, &cv));
        let beta = (0..rs.nroots()).find(|&b| rs.kappa(al, b) == 1).expect("root at angle π/3");
        let six = alg.h_elem(beta, &ca);
        let gamma = (0..rs.nroots()).find(|&g| rs.kappa(al, g) == 0 && rs.kappa(beta, g) == 0).expect("γ ⊥ α, β");
        let seven_h = alg.h_elem(beta, alg.coroot(gamma));
        let lam = crate::rootsys::vadd(rs.root(beta), rs.root(gamma));
        let seven_x = alg.x_elem(rs.lambda0_index(&lam).expect("weight in Λ_0"));
        vec![
            ("3".into(), three),
            ("5".into(), five),
            ("6".into(), six),
            ("7".into(), seven_h),
            ("7".into(), seven_x),
        ]
    }

    /// a_α ⊙ w for each witness, expected to be a scalar multiple of w.
    pub fn ad_scalar_checks(&self, p: &Q) -> Vec<ScalarCheck> {
        let expected = |l: &str| match l {
            "3" => q(-3, 196),
            "5" | "6" => q(9, 196),
            _ => Q::zero(),
        };
        self.witnesses()
            .into_iter()
            .map(|(label, w)| {
                let img = self.mul_p(p, &self.a, &w);
                let want = expected(&label);
                scalar_check(label, &img, &w, want)
            })
            .collect()
    }

    /// a_α ⊙ a_α = (1/496 + p/2) 𝟏 + (9/98) a_α.
    pub fn axis_square_check(&self, p: &Q) -> SquareCheck {
        let sq = self.mul_p(p, &self.a, &self.a);
        let c_one = q(1, 496) + p * q(1, 2);
        let c_a = q(9, 98);
        let want = self.one.scale(&c_one).add_scaled(&self.a, &c_a);
        let residual = sq.sub(&want);
        SquareCheck { one_coeff: RatDoc::from(&c_one), axis_coeff: RatDoc::from(&c_a), ok: residual.is_zero(), residual_terms: residual.len() }
    }

    pub fn idempotent_check(&self, ctx: &ParamContext) -> IdempotentCheck {
        let e = self.axis(ctx);
        let ee = self.mul_p(&ctx.p, &e, &e);
        let comp = self.one.sub(&e);
        let cross = self.mul_p(&ctx.p, &e, &comp);
        let cc = self.mul_p(&ctx.p, &comp, &comp);
        IdempotentCheck {
            e_squared_is_e: ee == e,
            complement_idempotent: cc == comp,
            orthogonal: cross.is_zero(),
            form_with_one: RatDoc::from(&(self.alg.form(&e, &self.one))),
            c1_times_dim: RatDoc::from(&(&ctx.c1 * qi(DIM_L))),
        }
    }

    /// e ⊙ v = ν v on each witness and on e, 𝟏 − e.
    pub fn spectrum_check(&self, ctx: &ParamContext) -> Vec<ScalarCheck> {
        let e = self.axis(ctx);
        let c1 = &ctx.c1;
        let nu = |l: &str| match l {
            "3" => q(4, 3) * c1 - q(1, 6),
            "5" | "6" => q(1, 2),
            "7" => c1.clone(),
            "e" => Q::one(),
            _ => Q::zero(),
        };
        let mut items = vec![("e".to_string(), e.clone()), ("e'".to_string(), self.one.sub(&e))];
        items.extend(self.witnesses());
        items
            .into_iter()
            .map(|(label, w)| {
                let img = self.mul_p(&ctx.p, &e, &w);
                let want = nu(&label);
                scalar_check(label, &img, &w, want)
            })
            .collect()
    }

    /// ν = c₁ + c₂λ for each ad-scalar λ, compared with the evaluation map.
    pub fn bridge_check(&self, ctx: &ParamContext) -> Vec<BridgeEntry> {
        let c1 = &ctx.c1;
        [("3", q(-3, 196), q(4, 3) * c1 - q(1, 6)), ("5", q(9, 196), q(1, 2)), ("6", q(9, 196), q(1, 2)), ("7", Q::zero(), c1.clone())]
            .into_iter()
            .map(|(l, lam, nu)| {
                let bridged = c1 + &ctx.c2 * &lam;
                BridgeEntry { label: l.to_string(), scalar: RatDoc::from(&lam), bridged: RatDoc::from(&bridged), listed: RatDoc::from(&nu), ok: bridged == nu }
            })
            .collect()
    }

    /// At p = −614/74431 the element 𝟏 − (196/9)a_α squares to zero.
    pub fn nilpotent_check(&self) -> bool {
        let p = nilpotent_p();
        let n = self.one.add_scaled(&self.a, &q(-196, 9));
        !n.is_zero() && self.mul_p(&p, &n, &n).is_zero()
    }

    /// The decomposition ⟨e⟩ ⊕ ⟨𝟏−e⟩ ⊕ A_3 ⊕ A_5 ⊕ A_6 ⊕ A_7.
    pub fn axial_decomposition(&self, ctx: &ParamContext) -> Result<Decomposition, AxialError> {
        let local = decomp::a_local(&self.alg, self.alpha)?;
        let e = self.axis(ctx);
        let mut parts = vec![
            Part { label: "e".into(), basis: vec![e.clone()], expected: 1 },
            Part { label: "e'".into(), basis: vec![self.one.sub(&e)], expected: 1 },
        ];
        parts.extend(local.parts.into_iter().filter(|p| p.label != "1"));
        Ok(Decomposition { name: "F' E8".into(), context: decomp::Context::Full, root: Some(self.alpha), parts })
    }

    pub fn fusion_check(&self, ctx: &ParamContext, sampling: Sampling) -> Result<FusionReport, AxialError> {
        let dec = self.axial_decomposition(ctx)?;
        let p = ctx.p.clone();
        let prod = move |x: &SparseVec, y: &SparseVec| self.mul_p(&p, x, y);
        Ok(decomp::verify_fusion(&self.alg, &dec, &decomp::f_prime_law(), &prod, sampling)?)
    }

    /// Compares the two candidate values of p at c₁ = 0: the corrected closed
    /// form and the printed one. The consistent value admits e = c₂a_α with
    /// e ⊙ e = e.
    pub fn c1_zero_probe(&self) -> C1ZeroProbe {
        let ctx = ParamContext::new(q(2, 9), Branch::Minus).expect("nonzero s");
        let candidates = [("closed form", ctx.p.clone()), ("printed closed form", ctx.printed_p()), ("claimed", degenerate_p())];
        let e = self.a.scale(&ctx.c2);
        let entries = candidates
            .into_iter()
            .map(|(name, p)| {
                let ok = self.mul_p(&p, &e, &e) == e;
                ProbeEntry { source: name.to_string(), p: RatDoc::from(&p), idempotent: ok }
            })
            .collect::<Vec<_>>();
        let consistent: Vec<String> = entries.iter().filter(|e| e.idempotent).map(|e| e.source.clone()).collect();
        C1ZeroProbe { c1: RatDoc::from(&ctx.c1), c2: RatDoc::from(&ctx.c2), entries, consistent }
    }
}

fn scalar_check(label: String, img: &SparseVec, w: &SparseVec, want: Q) -> ScalarCheck {
    let residual = img.add_scaled(w, &-want.clone());
    let (i, c) = w.leading().expect("nonzero witness");
    let observed = img.get(*i) / c;
    ScalarCheck { label, expected: RatDoc::from(&want), observed: RatDoc::from(&observed), ok: residual.is_zero(), residual_terms: residual.len() }
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamDoc {
    pub s: RatDoc,
    pub branch: Branch,
    pub p: RatDoc,
    pub c1: RatDoc,
    pub c2: RatDoc,
    pub degenerate_form: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalarCheck {
    pub label: String,
    pub expected: RatDoc,
    pub observed: RatDoc,
    pub ok: bool,
    pub residual_terms: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SquareCheck {
    pub one_coeff: RatDoc,
    pub axis_coeff: RatDoc,
    pub ok: bool,
    pub residual_terms: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdempotentCheck {
    pub e_squared_is_e: bool,
    pub complement_idempotent: bool,
    pub orthogonal: bool,
    pub form_with_one: RatDoc,
    pub c1_times_dim: RatDoc,
}

impl IdempotentCheck {
    pub fn ok(&self) -> bool {
        self.e_squared_is_e && self.complement_idempotent && self.orthogonal && self.form_with_one == self.c1_times_dim
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BridgeEntry {
    pub label: String,
    pub scalar: RatDoc,
    pub bridged: RatDoc,
    pub listed: RatDoc,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeEntry {
    pub source: String,
    pub p: RatDoc,
    pub idempotent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct C1ZeroProbe {
    pub c1: RatDoc,
    pub c2: RatDoc,
    pub entries: Vec<ProbeEntry>,
    pub consistent: Vec<String>,
}
