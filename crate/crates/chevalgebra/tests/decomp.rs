use chevalgebra::corealg::CoreAlgebra;
use chevalgebra::decomp::*;
use chevalgebra::exactla::SparseVec;
use chevalgebra::rootsys::CartanType::{self, A, D, E};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn build(k: CartanType, n: usize) -> CoreAlgebra {
    CoreAlgebra::build(k, n).unwrap()
}

fn assert_fusion(alg: &CoreAlgebra, dec: &Decomposition, law: &FusionLaw, sampling: Sampling) {
    let rep = verify_fusion(alg, dec, law, &star(alg), sampling).unwrap();
    let bad: Vec<_> = rep.checks.iter().filter(|c| !c.ok).collect();
    assert!(rep.direct, "{} not direct", dec.name);
    assert!(bad.is_empty(), "{}: {bad:?}", dec.name);
}

#[test]
fn zero_weight_global_laws() {
    for (k, n) in [(A, 4), (D, 4), (D, 7), (E, 6)] {
        let alg = build(k, n);
        let dec = j_global(&alg).unwrap();
        assert!(dec.dim_mismatches().is_empty(), "{:?}", dec.dim_mismatches());
        assert_eq!(dec.total_dim(), alg.jdim());
        assert!(invariance_violations(&alg, &dec).is_empty());
        assert!(dec.orthogonality_violations(&alg).is_empty());
        assert_fusion(&alg, &dec, &j_global_law(&alg.rs).unwrap(), Sampling::Full);
    }
}

#[test]
fn zero_weight_local_laws() {
    for (k, n) in [(A, 6), (E, 6), (E, 7)] {
        let alg = build(k, n);
        let dec = j_local(&alg, alg.rs.highest_root()).unwrap();
        assert!(dec.dim_mismatches().is_empty(), "{:?}", dec.dim_mismatches());
        assert!(invariance_violations(&alg, &dec).is_empty());
        let law = j_local_law(&alg.rs).unwrap();
        assert_eq!(grading_assign(&alg, &dec).unwrap(), law_grading(&law, &dec).unwrap());
        assert_fusion(&alg, &dec, &law, Sampling::Full);
    }
}

#[test]
fn zero_weight_local_transported() {
    let alg = build(D, 7);
    let law = j_local_law(&alg.rs).unwrap();
    for r in [0, 5, alg.rs.npos() - 1] {
        let dec = j_local(&alg, r).unwrap();
        assert!(dec.dim_mismatches().is_empty());
        assert!(invariance_violations(&alg, &dec).is_empty());
        assert_fusion(&alg, &dec, &law, Sampling::Full);
    }
}

#[test]
fn e8_zero_weight_local_dims() {
    let alg = build(E, 8);
    let dec = j_local(&alg, alg.rs.highest_root()).unwrap();
    let dims: Vec<usize> = dec.parts.iter().map(|p| p.basis.len()).collect();
    assert_eq!(dims, [2, 27, 7]);
}

#[test]
fn full_algebra_global() {
    let alg = build(A, 4);
    let dec = a_global(&alg).unwrap();
    assert_eq!(dec.dims().iter().map(|d| d.1).collect::<Vec<_>>(), [1, 24, 75]);
    assert!(invariance_violations(&alg, &dec).is_empty());
    assert!(dec.orthogonality_violations(&alg).is_empty());
    assert_fusion(&alg, &dec, &a_global_law(&alg.rs).unwrap(), Sampling::Full);

    let e7 = build(E, 7);
    let dec = a_global(&e7).unwrap();
    assert_eq!(dec.dims().iter().map(|d| d.1).collect::<Vec<_>>(), [1, 1539]);
}

#[test]
fn full_algebra_local() {
    for (k, n) in [(A, 6), (E, 6)] {
        let alg = build(k, n);
        let dec = a_local(&alg, alg.rs.highest_root()).unwrap();
        assert!(dec.dim_mismatches().is_empty(), "{:?}", dec.dim_mismatches());
        assert_eq!(dec.total_dim(), alg.dim());
        assert!(invariance_violations(&alg, &dec).is_empty());
        let law = a_local_law(&alg.rs).unwrap();
        assert_eq!(grading_assign(&alg, &dec).unwrap(), law_grading(&law, &dec).unwrap());
        assert_fusion(&alg, &dec, &law, Sampling::Sample { per_pair: 20, seed: 7 });
    }
    let e7 = build(E, 7);
    let dims: Vec<usize> = a_local(&e7, e7.rs.highest_root()).unwrap().parts.iter().map(|p| p.basis.len()).collect();
    assert_eq!(dims, [2, 77, 495, 198, 64, 704]);
}

#[test]
fn local_refused_off_highest_root() {
    let alg = build(E, 6);
    assert!(matches!(a_local(&alg, 3), Err(DecompError::UnsupportedRoot { .. })));
    assert!(matches!(j_local(&alg, alg.rs.neg(0)), Err(DecompError::NotPositive(_))));
}

#[test]
fn miyamoto_on_zero_weight_is_reflection() {
    for (k, n) in [(A, 3), (A, 5), (D, 4)] {
        let alg = build(k, n);
        let odd = j_local_odd_labels(k);
        for r in 0..alg.rs.npos() {
            let dec = j_local(&alg, r).unwrap();
            let grading: Vec<u8> = dec.parts.iter().map(|p| u8::from(odd.contains(&p.label.as_str()))).collect();
            let tau = miyamoto(&alg, &dec, &grading).unwrap();
            assert_eq!(tau.j_matrix(&alg), reflection_j_matrix(&alg, r), "{} root {r}", alg.rs.label());
        }
    }
}

fn reflection_j_matrix(alg: &CoreAlgebra, r: usize) -> chevalgebra::exactla::Matrix {
    let d = alg.jdim();
    let refl = reflection_matrix(alg, r);
    let mut m = chevalgebra::exactla::Matrix::zeros(d, d);
    for c in 0..d {
        let mut e = vec![num_traits::Zero::zero(); d];
        e[c] = num_traits::One::one();
        for (i, x) in alg.zs.weyl_act_j(&refl, &e).into_iter().enumerate() {
            m.set(i, c, x);
        }
    }
    m
}

#[test]
fn miyamoto_group_a3_is_symmetric_group() {
    let alg = build(A, 3);
    let law = j_local_law(&alg.rs).unwrap();
    let gens: Vec<_> = (0..alg.rs.npos())
        .map(|r| {
            let dec = j_local(&alg, r).unwrap();
            miyamoto(&alg, &dec, &law_grading(&law, &dec).unwrap()).unwrap().j_matrix(&alg)
        })
        .collect();
    assert_eq!(generated_group_order(&gens, 1000), Some(24));
}

#[test]
fn miyamoto_full_algebra_is_automorphism() {
    let alg = build(E, 6);
    let alpha = alg.rs.highest_root();
    let dec = a_local(&alg, alpha).unwrap();
    let law = a_local_law(&alg.rs).unwrap();
    let tau = miyamoto(&alg, &dec, &law_grading(&law, &dec).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let x = SparseVec::unit(rng.gen_range(0..alg.dim()));
        let y = SparseVec::unit(rng.gen_range(0..alg.dim()));
        let tx = tau.apply(&alg, &x);
        assert_eq!(tx, weight_parity_tau(&alg, alpha, &x));
        assert_eq!(tau.apply(&alg, &tx), x);
        assert_eq!(tau.apply(&alg, &alg.mul(&x, &y)), alg.mul(&tx, &tau.apply(&alg, &y)));
    }
}

#[test]
fn law_tables() {
    let rs = chevalgebra::rootsys::RootSystem::new(E, 8).unwrap();
    let g = a_global_law(&rs).unwrap();
    let b = g.index("b").unwrap();
    assert_eq!(g.product(b, b).len(), 2);
    let l = a_local_law(&rs).unwrap();
    let six = l.index("6").unwrap();
    let names: Vec<&str> = l.product(six, six).iter().map(|&z| l.labels[z].as_str()).collect();
    assert_eq!(names, ["1", "3", "5"]);
    let ra = chevalgebra::rootsys::RootSystem::new(A, 5).unwrap();
    let j = j_local_law(&ra).unwrap();
    let four = j.index("4").unwrap();
    assert_eq!(j.product(four, four).iter().map(|&z| j.labels[z].clone()).collect::<Vec<_>>(), ["1"]);
}
