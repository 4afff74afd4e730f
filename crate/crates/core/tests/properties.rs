use std::collections::BTreeMap;

use isotropy_core::canonical::build_s;
use isotropy_core::congruence::{solve_congruence, verify_congruence, CongruenceData, FreeParams};
use isotropy_core::generators::{gen_g, gen_v, generator_inverse};
use isotropy_core::isotropy::{form_to_q, q_to_form, sample_isotropy};
use isotropy_core::linalg::{nullspace, rank};
use isotropy_core::random::{
    random_invertible, random_isotropy_params, random_matrix, random_skew, random_structure,
    random_symmetric_invertible, rng_from_seed, ParamOptions, SeededRng,
};
use isotropy_core::scalar::rat;
use isotropy_core::{ExactMatrix, ExactScalar, SegreStructure, ToeplitzForm};
use proptest::prelude::*;
use rand::Rng;

fn scalar() -> impl Strategy<Value = ExactScalar> {
    let part = (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d));
    (part.clone(), part.clone(), part.clone(), part)
        .prop_map(|(a, b, c, d)| ExactScalar::new(a, b, c, d))
}

fn sparse_scalar() -> impl Strategy<Value = ExactScalar> {
    prop_oneof![Just(ExactScalar::zero()), scalar()]
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec(sparse_scalar(), rows * cols)
        .prop_map(move |e| ExactMatrix::from_entries(rows, cols, e).unwrap())
}

fn structure(rng: &mut SeededRng, max_n: usize) -> SegreStructure {
    random_structure(rng, max_n, 3, ExactScalar::zero()).unwrap()
}

/// A random form with every coefficient of every block filled.
fn random_form(rng: &mut SeededRng, st: &SegreStructure) -> ToeplitzForm {
    let mut f = ToeplitzForm::zero(st);
    for r in 0..st.len() {
        for s in 0..st.len() {
            for j in 0..st.b(r, s) {
                f.set(r, s, j, random_matrix(rng, st.m(r), st.m(s), 0.5));
            }
        }
    }
    f
}

/// Unipotent form whose nonzero off-identity coefficients all have weight ≥ `w`.
fn random_form_of_weight(rng: &mut SeededRng, st: &SegreStructure, w: usize) -> ToeplitzForm {
    let mut f = ToeplitzForm::zero(st);
    for r in 0..st.len() {
        for s in 0..st.len() {
            for j in 0..st.b(r, s) {
                if f.weight(r, s, j) >= w && rng.random_bool(0.5) {
                    f.set(r, s, j, random_matrix(rng, st.m(r), st.m(s), 0.3));
                }
            }
        }
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn scalar_text_round_trip(x in scalar()) {
        let text = x.format();
        prop_assert_eq!(ExactScalar::parse(&text).unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn field_axioms(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x - &x, ExactScalar::zero());
        if !x.is_zero() {
            prop_assert!((&x * &x.try_inv().unwrap()).is_one());
        } else {
            prop_assert!(x.try_inv().is_err());
        }
    }

    #[test]
    fn conjugations_are_automorphisms(x in scalar(), y in scalar()) {
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        prop_assert_eq!((&x * &y).conj_sqrt2(), &x.conj_sqrt2() * &y.conj_sqrt2());
        prop_assert_eq!((&x + &y).conj(), &x.conj() + &y.conj());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_plus_nullity(m in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| matrix(r, c))) {
        let (basis, null) = nullspace(&m);
        prop_assert_eq!(rank(&m) + null, m.cols());
        for v in &basis {
            prop_assert!((&m * v).is_zero());
        }
    }

    #[test]
    fn matmul_is_associative(
        (a, b, c) in (1usize..4, 1usize..4, 1usize..4, 1usize..4)
            .prop_flat_map(|(p, q, r, s)| (matrix(p, q), matrix(q, r), matrix(r, s)))
    ) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!((&a * &b).transpose(), &b.transpose() * &a.transpose());
    }

    #[test]
    fn inverse_is_two_sided(m in (1usize..5).prop_flat_map(|n| matrix(n, n))) {
        match m.inverse() {
            Ok(inv) => {
                prop_assert!((&m * &inv).is_identity());
                prop_assert!((&inv * &m).is_identity());
            }
            Err(_) => prop_assert!(rank(&m) < m.rows()),
        }
    }

    #[test]
    fn extract_inverts_assemble(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let st = structure(&mut rng, 9);
        let f = random_form(&mut rng, &st);
        prop_assert_eq!(ToeplitzForm::extract(&f.assemble(), &st).unwrap(), f);
    }

    #[test]
    fn form_product_matches_dense(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let st = structure(&mut rng, 9);
        let (x, y) = (random_form(&mut rng, &st), random_form(&mut rng, &st));
        let prod = x.try_mul(&y).unwrap();
        prop_assert_eq!(prod.assemble(), &x.assemble() * &y.assemble());
        prop_assert_eq!(x.twist().twist(), x);
    }

    #[test]
    fn weights_add_under_products(seed in any::<u64>(), w1 in 1usize..5, w2 in 1usize..5) {
        let mut rng = rng_from_seed(seed);
        let st = structure(&mut rng, 10);
        let x = random_form_of_weight(&mut rng, &st, w1);
        let y = random_form_of_weight(&mut rng, &st, w2);
        if let Some(w) = x.try_mul(&y).unwrap().min_weight() {
            prop_assert!(w >= w1 + w2);
        }
        // Any strictly positive-weight form is nilpotent below 2α₁ − 1.
        let e = ToeplitzForm::max_weight(&st) as u32 + 1;
        prop_assert!(x.pow(e).is_zero());
    }

    #[test]
    fn unipotent_inverse_inverts(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let st = structure(&mut rng, 9);
        let u = ToeplitzForm::identity(&st).try_add(&random_form_of_weight(&mut rng, &st, 1)).unwrap();
        let inv = u.unipotent_inverse().unwrap();
        prop_assert!(u.try_mul(&inv).unwrap().is_identity());
        prop_assert_eq!(u.inverse().unwrap(), inv);
    }
}

/// General data: random symmetric `ℬ`, random symmetric higher `𝒞`
/// coefficients, `C_0 = A_0ᵀ B_0 A_0` for a random seed `A_0`.
fn general_problem(rng: &mut SeededRng, st: &SegreStructure) -> (CongruenceData, FreeParams) {
    let mut b = Vec::new();
    let mut c = Vec::new();
    let mut params = isotropy_core::random::random_free_params(
        rng,
        st,
        &st.blocks().iter().map(|x| ExactMatrix::identity(x.m)).collect::<Vec<_>>(),
        ParamOptions { zero_prob: 0.5, random_seeds: false },
    );
    for r in 0..st.len() {
        let m = st.m(r);
        let b0 = random_symmetric_invertible(rng, m);
        let a0 = random_invertible(rng, m);
        let c0 = &(&a0.transpose() * &b0) * &a0;
        let sym = |rng: &mut SeededRng| {
            let x = random_matrix(rng, m, m, 0.5);
            &x + &x.transpose()
        };
        let mut bl = vec![b0];
        let mut cl = vec![c0];
        for _ in 1..st.alpha(r) {
            bl.push(sym(rng));
            cl.push(sym(rng));
        }
        b.push(bl);
        c.push(cl);
        params.diag_seeds[r] = a0;
    }
    (CongruenceData::new(st, b, c).unwrap(), params)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solver_output_satisfies_equation(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let st = structure(&mut rng, 8);
        let (data, params) = general_problem(&mut rng, &st);
        let x = solve_congruence(&data, &params).unwrap();
        prop_assert!(verify_congruence(&data, &x).unwrap().holds);
        // Free sub-diagonal data is reproduced verbatim.
        for (&(r, s, j), m) in &params.sub_blocks {
            prop_assert_eq!(x.get(r, s, j), m);
        }
        // Dense residual ℱ𝒳ᵀℱℬ𝒳 − 𝒞.
        let f = isotropy_core::canonical::build_f(&st);
        let lhs = &(&(&(&f * &x.assemble().transpose()) * &f) * &data.b_form().assemble()) * &x.assemble();
        prop_assert_eq!(lhs, data.c_form().assemble());
    }

    #[test]
    fn generators_satisfy_their_equation(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let st = structure(&mut rng, 10);
        let b_diag: Vec<ExactMatrix> = st.blocks().iter().map(|b| random_symmetric_invertible(&mut rng, b.m)).collect();
        let data = CongruenceData::constant(&st, &b_diag).unwrap();
        let mut skews = BTreeMap::new();
        for r in 0..st.len() {
            for j in 1..st.alpha(r) {
                skews.insert((r, j), random_skew(&mut rng, st.m(r), 0.3));
            }
        }
        let v = gen_v(&st, &b_diag, &skews).unwrap();
        prop_assert!(verify_congruence(&data, &v).unwrap().holds);
        prop_assert!(generator_inverse(&v, &b_diag).unwrap().try_mul(&v).unwrap().is_identity());
        if st.len() >= 2 {
            let t = rng.random_range(1..st.len());
            let p = rng.random_range(0..t);
            let k = rng.random_range(0..st.alpha(t));
            let f = random_matrix(&mut rng, st.m(t), st.m(p), 0.2);
            let g = gen_g(&st, p, t, k, &f, &b_diag).unwrap();
            prop_assert!(verify_congruence(&data, &g).unwrap().holds);
            let g_neg = gen_g(&st, p, t, k, &-&f, &b_diag).unwrap();
            prop_assert!(g.try_mul(&g_neg).unwrap().is_identity());
        }
    }

    #[test]
    fn isotropy_samples_round_trip(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let lambda = isotropy_core::random::random_lambda(&mut rng);
        let st = random_structure(&mut rng, 8, 3, lambda).unwrap();
        let params = random_isotropy_params(&mut rng, &st, ParamOptions::default());
        let sample = sample_isotropy(&st, &params).unwrap();
        let q = &sample.q;
        let s = build_s(&st);
        prop_assert!((&q.transpose() * q).is_identity());
        prop_assert_eq!(&(&q.transpose() * &s) * q, s);
        prop_assert_eq!(&q_to_form(&st, q).unwrap(), &sample.form);
        prop_assert_eq!(&form_to_q(&st, &sample.form), q);
    }
}
