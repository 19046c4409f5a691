mod common;

use common::*;
use kraus_core::cp_map::KrausFamily;
use kraus_core::exact_linalg::{extract_basis, hs_orthocomplement, span_contains, GaussianRational, Mat};
use kraus_core::oracles::{stochastic_embed, StochasticMatrix};
use kraus_core::positivity::{
    check, check_classical, check_exact_small, check_numeric, check_with, is_classical, verify_witness,
    BilinearWitness, Method, NumericOptions, PositivityVerdict, Status,
};
use kraus_core::reduction::{reduce_cnf_to_kraus, Cnf};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn swap() -> KrausFamily {
    KrausFamily::unweighted(vec![Mat::unit(2, 0, 1), Mat::unit(2, 1, 0)]).unwrap()
}

fn depolarizer() -> KrausFamily {
    KrausFamily::weighted((0..4).map(|k| (Mat::unit(2, k / 2, k % 2), rat(1, 2))).collect()).unwrap()
}

fn witness(x: Vec<GaussianRational>, y: Vec<GaussianRational>) -> BilinearWitness {
    BilinearWitness::new(x, y).unwrap()
}

fn assert_sound(psi: &KrausFamily, v: &PositivityVerdict) {
    if let Some(w) = &v.witness {
        assert_eq!(v.status, Status::NotStrictlyPositive);
        assert!(verify_witness(psi, w).unwrap());
    }
}

fn unsat4() -> Cnf {
    Cnf::from_ints(2, &[[1, 2, 2], [1, -2, -2], [-1, 2, 2], [-1, -2, -2]]).unwrap()
}

#[test]
fn verify_witness_examples() {
    assert!(verify_witness(&swap(), &witness(e(2, 0), e(2, 0))).unwrap());
    let id = KrausFamily::unweighted(vec![Mat::identity(2)]).unwrap();
    assert!(!verify_witness(&id, &witness(e(2, 0), e(2, 0))).unwrap());
    let zero = vec![GaussianRational::zero(); 2];
    assert!(!verify_witness(&swap(), &witness(zero, e(2, 0))).unwrap());
    assert!(verify_witness(&swap(), &witness(e(3, 0), e(3, 0))).is_err());
    assert!(BilinearWitness::new(e(2, 0), e(3, 0)).is_err());
}

#[test]
fn exact_small_examples() {
    let id = KrausFamily::unweighted(vec![Mat::identity(2)]).unwrap();
    let v = check_exact_small(&id).unwrap();
    assert_eq!((v.status, v.method), (Status::NotStrictlyPositive, Method::ExactN2));
    assert_sound(&id, &v);

    let v = check_exact_small(&depolarizer()).unwrap();
    assert_eq!(v.status, Status::StrictlyPositive);
    assert!(v.witness.is_none());

    let v = check_exact_small(&swap()).unwrap();
    assert_eq!(v.status, Status::NotStrictlyPositive);
    assert_eq!(v.witness, Some(witness(e(2, 0), e(2, 0))));

    let scalar = KrausFamily::unweighted(vec![Mat::identity(1)]).unwrap();
    let v = check_exact_small(&scalar).unwrap();
    assert_eq!((v.status, v.method), (Status::StrictlyPositive, Method::ExactN1));
    let zero = KrausFamily::unweighted(vec![Mat::zeros(1, 1)]).unwrap();
    assert_eq!(check_exact_small(&zero).unwrap().status, Status::NotStrictlyPositive);

    assert!(check_exact_small(&KrausFamily::unweighted(vec![Mat::identity(3)]).unwrap()).is_err());
}

#[test]
fn exact_small_irrational_common_root() {
    // det[V₁y | V₂y] = y₁² − 2y₂² has only irrational roots.
    let v1 = Mat::identity(2);
    let v2 = Mat::from_rows(vec![vec![g(0, 0), g(2, 0)], vec![g(1, 0), g(0, 0)]]).unwrap();
    let fam = KrausFamily::unweighted(vec![v1, v2]).unwrap();
    let v = check_exact_small(&fam).unwrap();
    assert_eq!(v.status, Status::NotStrictlyPositive);
    assert!(v.witness.is_none());
    assert!(v.irrational_witness);
}

#[test]
fn classical_examples() {
    let half = StochasticMatrix::new(vec![vec![rat(1, 2), rat(1, 2)], vec![rat(1, 2), rat(1, 2)]]).unwrap();
    assert_eq!(check_classical(&stochastic_embed(&half)).unwrap().status, Status::StrictlyPositive);

    let perm = StochasticMatrix::new(vec![
        vec![rat(0, 1), rat(1, 1), rat(0, 1)],
        vec![rat(0, 1), rat(0, 1), rat(1, 1)],
        vec![rat(1, 1), rat(0, 1), rat(0, 1)],
    ])
    .unwrap();
    let fam = stochastic_embed(&perm);
    let v = check_classical(&fam).unwrap();
    assert_eq!((v.status, v.method), (Status::NotStrictlyPositive, Method::ExactClassical));
    assert_sound(&fam, &v);

    assert!(is_classical(&swap()));
    let dense = KrausFamily::unweighted(vec![Mat::identity(3)]).unwrap();
    assert!(!is_classical(&dense));
    assert!(check_classical(&dense).is_err());
}

#[test]
fn classical_agrees_with_exact_small_on_all_2x2_families() {
    let levels = [rat(0, 1), rat(1, 2), rat(1, 1)];
    let mut checked = 0;
    for code in 0..81u32 {
        let mut c = code;
        let mut ops: Vec<(Mat, BigRational)> = Vec::new();
        for k in 0..4 {
            let w = &levels[(c % 3) as usize];
            c /= 3;
            if !w.is_zero() {
                ops.push((Mat::unit(2, k / 2, k % 2), w.clone()));
            }
        }
        if ops.is_empty() {
            continue;
        }
        let fam = KrausFamily::weighted(ops).unwrap();
        let a = check_classical(&fam).unwrap();
        let b = check_exact_small(&fam).unwrap();
        assert_eq!(a.status, b.status, "family code {code}");
        assert_sound(&fam, &a);
        assert_sound(&fam, &b);
        checked += 1;
    }
    assert_eq!(checked, 80);
}

#[test]
fn numeric_examples() {
    let opts = NumericOptions::default();
    let v = check_numeric(&depolarizer(), &opts).unwrap();
    assert_eq!(v.status, Status::Unknown);
    assert!((v.numeric_margin.unwrap() - 0.5).abs() < 1e-6);

    let v = check_numeric(&swap(), &opts).unwrap();
    assert_eq!((v.status, v.method), (Status::NotStrictlyPositive, Method::Numeric));
    assert_sound(&swap(), &v);

    let inst = reduce_cnf_to_kraus(&Cnf::from_ints(2, &[[1, 2, 2]]).unwrap()).unwrap();
    let small = NumericOptions { starts: 8, ..opts };
    let v = check_numeric(&inst.family, &small).unwrap();
    assert_ne!(v.status, Status::StrictlyPositive);
    assert_sound(&inst.family, &v);

    assert!(check_numeric(&swap(), &NumericOptions { starts: 0, ..opts }).is_err());
}

#[test]
fn numeric_is_deterministic_for_a_seed() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let fam = random_family(&mut rng, 3, 3, 2, 0.4);
    let opts = NumericOptions { starts: 16, seed: 42, ..NumericOptions::default() };
    assert_eq!(check_numeric(&fam, &opts).unwrap(), check_numeric(&fam, &opts).unwrap());
}

#[test]
fn dispatcher_examples() {
    let id = KrausFamily::unweighted(vec![Mat::identity(2)]).unwrap();
    let v = check(&id);
    assert_eq!((v.status, v.method), (Status::NotStrictlyPositive, Method::ExactN2));

    let third = rat(1, 3);
    let p = StochasticMatrix::new(vec![vec![third.clone(); 3]; 3]).unwrap();
    let v = check(&stochastic_embed(&p));
    assert_eq!((v.status, v.method), (Status::StrictlyPositive, Method::ExactClassical));

    let unsat = reduce_cnf_to_kraus(&unsat4()).unwrap();
    let v = check(&unsat.family);
    assert_eq!((v.status, v.method), (Status::StrictlyPositive, Method::OracleReduced));

    let sat = reduce_cnf_to_kraus(&Cnf::from_ints(2, &[[1, 2, 2]]).unwrap()).unwrap();
    let v = check(&sat.family);
    assert_eq!((v.status, v.method), (Status::NotStrictlyPositive, Method::OracleReduced));
    assert_eq!(v.assignment, Some(vec![true, true]));
    assert_sound(&sat.family, &v);

    // Without provenance the oracle is unavailable.
    let bare = sat.family.clone().with_provenance(None);
    let v = check_with(&bare, &NumericOptions { starts: 4, ..NumericOptions::default() });
    assert_eq!(v.method, Method::Numeric);
    assert_ne!(v.status, Status::StrictlyPositive);
}

#[test]
fn witnesses_are_rank_one_points_of_the_orthocomplement() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let mut found = 0;
    for _ in 0..200 {
        let n = rng.random_range(2..=3);
        let fam = if n == 2 {
            let m = rng.random_range(1..=4);
            random_family(&mut rng, 2, m, 2, 0.5)
        } else {
            stochastic_embed(&random_stochastic(&mut rng, 3))
        };
        let v = check(&fam);
        let Some(w) = v.witness else { continue };
        found += 1;
        let span = extract_basis(&fam.matrices().cloned().collect::<Vec<_>>()).unwrap();
        let comp = hs_orthocomplement(&span);
        assert!(span_contains(&comp, &w.rank_one()).unwrap());
    }
    assert!(found > 20);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scaling_invariance(seed in any::<u64>(), num in 1i64..9, den in 1i64..9, re in -3i64..4, im in -3i64..4) {
        prop_assume!(re != 0 || im != 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.random_range(1..=4);
        let fam = random_family(&mut rng, 2, m, 2, 0.5);
        let base = check_exact_small(&fam).unwrap();
        let c = g(re, im);
        let ops: Vec<(Mat, BigRational)> = fam
            .ops()
            .iter()
            .enumerate()
            .map(|(i, op)| {
                let mat = if i == 0 { op.matrix.scale(&c) } else { op.matrix.clone() };
                (mat, &op.weight * rat(num, den))
            })
            .collect();
        let scaled = KrausFamily::weighted(ops).unwrap();
        let v = check_exact_small(&scaled).unwrap();
        prop_assert_eq!(base.status, v.status);
        if let Some(w) = &base.witness {
            prop_assert!(verify_witness(&scaled, w).unwrap());
        }
    }

    #[test]
    fn exact_verdicts_are_sound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fam = random_unital2(&mut rng);
        let v = check(&fam);
        prop_assert_ne!(v.status, Status::Unknown);
        if v.status == Status::NotStrictlyPositive {
            prop_assert!(v.witness.is_some() || v.irrational_witness);
        }
        if let Some(w) = &v.witness {
            prop_assert!(verify_witness(&fam, w).unwrap());
        }
    }
}
