use std::collections::BTreeMap;

use isotropy_core::acceptance::{worked_example_expected, worked_example_f};
use isotropy_core::canonical::{build_f, build_s, symmetric_block, transition_p};
use isotropy_core::congruence::{solution_dimension, solve_congruence, verify_congruence, CongruenceData, FreeParams};
use isotropy_core::generators::{factor_unipotent, gen_g, gen_two_block, gen_v, gen_w, GeneratorSpec};
use isotropy_core::isotropy::{
    describe_isotropy, describe_multi, form_to_q, orthogonal_element, sample_isotropy_element, verify_isotropy,
    IsotropyElement,
};
use isotropy_core::linalg::{cayley_orthogonal, nullity};
use isotropy_core::orbit::{codim_formula, codim_formula_multi, consistency_check, tangent_oracle};
use isotropy_core::random::{random_isotropy_params, rng_from_seed, ParamOptions};
use isotropy_core::{ExactMatrix, ExactScalar, MultiSegreStructure, SegreStructure, ToeplitzForm};

fn st(blocks: &[(usize, usize)]) -> SegreStructure {
    SegreStructure::new(ExactScalar::zero(), blocks.iter().copied()).unwrap()
}

fn ints(rows: &[&[i64]]) -> ExactMatrix {
    ExactMatrix::from_int_rows(rows)
}

fn ids(s: &SegreStructure) -> Vec<ExactMatrix> {
    s.blocks().iter().map(|b| ExactMatrix::identity(b.m)).collect()
}

#[test]
fn scalar_field_relations() {
    let r2 = ExactScalar::sqrt2();
    assert_eq!(&r2 * &r2, ExactScalar::from_int(2));
    let i = ExactScalar::i();
    assert_eq!(&i * &i, ExactScalar::from_int(-1));
    let one = ExactScalar::one();
    assert_eq!(&(&one + &r2) * &(&-&one + &r2), one);
    assert_eq!(
        ExactScalar::parse("1/2 - 1/2 i").unwrap(),
        ExactScalar::gaussian(isotropy_core::scalar::rat(1, 2), isotropy_core::scalar::rat(-1, 2))
    );
    assert_eq!(ExactScalar::parse("(1/2) r2").unwrap(), ExactScalar::inv_sqrt2());
}

#[test]
fn commutator_nullity_for_small_structure() {
    let s = symmetric_block(2, &ExactScalar::zero()).direct_sum(&symmetric_block(1, &ExactScalar::zero()));
    let map = ExactMatrix::from_fn(9, 9, |row, col| {
        let (i, j, a, b) = (row / 3, row % 3, col / 3, col % 3);
        let mut v = ExactScalar::zero();
        if j == b {
            v += s.get(i, a);
        }
        if i == a {
            v -= s.get(b, j);
        }
        v
    });
    assert_eq!(nullity(&map), 5);
}

#[test]
fn cayley_examples() {
    let z = ints(&[&[0, 1], &[-1, 0]]);
    assert_eq!(cayley_orthogonal(&z, &[1, 1]).unwrap(), ints(&[&[0, -1], &[1, 0]]));
    assert!(cayley_orthogonal(&ExactMatrix::zeros(3, 3), &[1, 1, 1]).unwrap().is_identity());
}

#[test]
fn transition_squares_to_i_e() {
    let p = transition_p(2);
    let ie = ExactMatrix::backward_identity(2).scale(&ExactScalar::i());
    assert_eq!(&p * &p, ie);
    for n in 1..=6 {
        let l = ExactScalar::from_ratio(3, 2);
        assert_eq!(symmetric_block(n, &l).trace(), &l * &ExactScalar::from_int(n as i64));
    }
}

#[test]
fn solver_reproduces_two_block_example() {
    let s = st(&[(4, 2), (2, 3), (1, 1)]);
    let f = worked_example_f();
    let mut params = FreeParams::trivial(&s);
    params.sub_blocks.insert((1, 0, 0), f.clone());
    let x = solve_congruence(&CongruenceData::identity(&s), &params).unwrap();
    assert_eq!(x.assemble(), worked_example_expected(&f));
    assert_eq!(x, gen_g(&s, 0, 1, 0, &f, &ids(&s)).unwrap());
}

#[test]
fn solver_small_cases() {
    let s = st(&[(2, 1)]);
    let data = CongruenceData::identity(&s);
    let mut p = FreeParams::trivial(&s);
    assert!(solve_congruence(&data, &p).unwrap().is_identity());
    p.diag_seeds[0] = ints(&[&[-1]]);
    assert_eq!(solve_congruence(&data, &p).unwrap().assemble(), ints(&[&[-1, 0], &[0, -1]]));

    let s = st(&[(1, 2)]);
    let q = cayley_orthogonal(&ints(&[&[0, 2], &[-2, 0]]), &[1, -1]).unwrap();
    let mut p = FreeParams::trivial(&s);
    p.diag_seeds[0] = q.clone();
    assert_eq!(solve_congruence(&CongruenceData::identity(&s), &p).unwrap().assemble(), q);

    assert_eq!(solution_dimension(&st(&[(1, 4)])), 6);
    assert_eq!(solution_dimension(&st(&[(2, 1)])), 0);
    assert_eq!(solution_dimension(&st(&[(2, 1), (1, 1)])), 1);
}

#[test]
fn diagonal_generator_examples() {
    let s = st(&[(2, 2)]);
    let z = ints(&[&[0, 1], &[-1, 0]]);
    let w = gen_w(&s, &BTreeMap::from([((0, 1), z.clone())])).unwrap();
    let half = z.scale(&ExactScalar::from_ratio(1, 2));
    let expected = ExactMatrix::block_assemble(&[
        vec![ExactMatrix::identity(2), half],
        vec![ExactMatrix::zeros(2, 2), ExactMatrix::identity(2)],
    ])
    .unwrap();
    assert_eq!(w.assemble(), expected);
    let f = build_f(&s);
    let dense = w.assemble();
    assert!((&(&(&f * &dense.transpose()) * &f) * &dense).is_identity());

    let s = st(&[(2, 1)]);
    assert!(gen_v(&s, &[ints(&[&[2]])], &BTreeMap::new()).unwrap().is_identity());
}

#[test]
fn two_block_generator_examples() {
    let (d, d_inv) = gen_two_block(3, 1, 0, &ExactMatrix::zeros(1, 2), &ExactMatrix::identity(2), &ints(&[&[4]])).unwrap();
    assert!(d.is_identity() && d_inv.is_identity());
    let f = worked_example_f();
    let (d, _) = gen_two_block(4, 2, 0, &f, &ExactMatrix::identity(2), &ExactMatrix::identity(3)).unwrap();
    let top = d.block(0, 4, 2, 2);
    assert_eq!(top, (&f.transpose() * &f).scale(&ExactScalar::from_ratio(-1, 2)));
}

#[test]
fn factorization_examples() {
    let s = st(&[(3, 1), (1, 2)]);
    let b = ids(&s);
    let w = gen_w(&s, &BTreeMap::from([((0, 2), ExactMatrix::zeros(1, 1))])).unwrap();
    let fact = factor_unipotent(&s, &w, &b).unwrap();
    assert!(fact.factors.is_empty());
    assert_eq!(fact.diagonal, w);

    let g = gen_g(&s, 0, 1, 0, &ints(&[&[1], &[-2]]), &b).unwrap();
    assert_eq!(factor_unipotent(&s, &g, &b).unwrap().product(&b).unwrap(), g);

    let specs = [
        GeneratorSpec::TwoBlock { p: 0, t: 1, k: 0, f: ints(&[&[2], &[1]]) },
        GeneratorSpec::TwoBlock { p: 0, t: 1, k: 0, f: ints(&[&[0], &[3]]) },
        GeneratorSpec::TwoBlock { p: 0, t: 1, k: 0, f: ints(&[&[-1], &[1]]) },
    ];
    let mut y = ToeplitzForm::identity(&s);
    for h in &specs {
        y = y.try_mul(&h.build(&s, &b).unwrap()).unwrap();
    }
    let fact = factor_unipotent(&s, &y, &b).unwrap();
    assert_eq!(fact.product(&b).unwrap(), y);
}

#[test]
fn isotropy_examples() {
    let d = describe_isotropy(&st(&[(1, 4)]));
    assert_eq!((d.dimension, d.unipotent_dimension), (6, 0));
    assert_eq!(d.orthogonal_factors, vec![4]);
    assert_eq!(describe_isotropy(&st(&[(2, 1)])).dimension, 0);

    let l = |x: i64| ExactScalar::from_int(x);
    let multi = MultiSegreStructure::new(vec![
        SegreStructure::new(l(1), [(1, 1)]).unwrap(),
        SegreStructure::new(l(2), [(1, 1)]).unwrap(),
    ])
    .unwrap();
    assert_eq!(describe_multi(&multi).dimension, 0);
    assert_eq!(codim_formula_multi(&multi), 2);

    let s = SegreStructure::new(l(3), [(1, 2)]).unwrap();
    let mut p = FreeParams::trivial(&s);
    p.diag_seeds[0] = cayley_orthogonal(&ints(&[&[0, 1], &[-1, 0]]), &[1, 1]).unwrap();
    assert_eq!(sample_isotropy_element(&s, &p).unwrap(), ints(&[&[0, -1], &[1, 0]]));

    let s = SegreStructure::new(ExactScalar::i(), [(2, 1)]).unwrap();
    let mut p = FreeParams::trivial(&s);
    p.diag_seeds[0] = ints(&[&[-1]]);
    assert_eq!(sample_isotropy_element(&s, &p).unwrap(), ints(&[&[-1, 0], &[0, -1]]));

    let s = st(&[(2, 1), (1, 1)]);
    let mut p = FreeParams::trivial(&s);
    p.sub_blocks.insert((1, 0, 0), ints(&[&[3]]));
    let q = sample_isotropy_element(&s, &p).unwrap();
    assert!(!q.is_identity());
    assert!(verify_isotropy(&s, &q).unwrap().member);
}

#[test]
fn membership_examples() {
    let s = st(&[(3, 1), (1, 2)]);
    assert!(verify_isotropy(&s, &ExactMatrix::identity(5)).unwrap().member);
    assert!(verify_isotropy(&s, &-&ExactMatrix::identity(5)).unwrap().member);
    let bad = ExactMatrix::identity(5).scale(&ExactScalar::from_int(2));
    let report = verify_isotropy(&s, &bad).unwrap();
    assert!(!report.member && !report.orthogonal);
    assert!(report.failure.unwrap().contains("QᵀQ"));
}

#[test]
fn normality_of_unipotent_part() {
    let s = st(&[(3, 2), (1, 1)]);
    let mut rng = rng_from_seed(11);
    let opts = ParamOptions { zero_prob: 0.3, random_seeds: false };
    let v = IsotropyElement::new(&s, sample_isotropy_element(&s, &random_isotropy_params(&mut rng, &s, opts)).unwrap()).unwrap();
    assert!(v.form().unwrap().has_identity_diagonal());
    let o_blocks = vec![
        cayley_orthogonal(&ints(&[&[0, 1], &[-1, 0]]), &[1, -1]).unwrap(),
        ints(&[&[-1]]),
    ];
    let o = IsotropyElement::new(&s, form_to_q(&s, &orthogonal_element(&s, &o_blocks).unwrap())).unwrap();
    let c = v.conjugate_by(&o).unwrap();
    assert!(c.form().unwrap().has_identity_diagonal());
    assert!(c.mul(&c.inverse().unwrap()).unwrap().q().is_identity());
    let full = IsotropyElement::new(&s, sample_isotropy_element(&s, &random_isotropy_params(&mut rng, &s, ParamOptions::default())).unwrap()).unwrap();
    let recombined = ToeplitzForm::block_diagonal(&s, &full.orthogonal_part().unwrap())
        .unwrap()
        .try_mul(&full.unipotent_part().unwrap())
        .unwrap();
    assert_eq!(recombined, full.form().unwrap());
}

#[test]
fn orbit_examples() {
    for n in 1..6 {
        assert_eq!(codim_formula(&st(&[(1, n)])), n * (n + 1) / 2);
    }
    assert_eq!(codim_formula(&st(&[(2, 1), (1, 1)])), 4);
    let t = tangent_oracle(&build_s(&st(&[(2, 1), (1, 1)]))).unwrap();
    assert_eq!((t.kernel_dim, t.oracle_codim), (1, 4));
    let t = tangent_oracle(&symmetric_block(2, &ExactScalar::i())).unwrap();
    assert_eq!((t.kernel_dim, t.oracle_codim), (0, 2));
    let r = consistency_check(&st(&[(3, 1)])).unwrap();
    assert!(r.consistent && r.codim_formula == 3 && r.isotropy_dim == 0);
}

#[test]
fn congruence_verifier_examples() {
    let s = st(&[(2, 1)]);
    assert!(verify_congruence(&CongruenceData::identity(&s), &ToeplitzForm::identity(&s)).unwrap().holds);
    let data = CongruenceData::new(&s, vec![vec![ints(&[&[1]]), ints(&[&[0]])]], vec![vec![ints(&[&[1]]), ints(&[&[1]])]]).unwrap();
    assert!(!verify_congruence(&data, &ToeplitzForm::identity(&s)).unwrap().holds);
}
