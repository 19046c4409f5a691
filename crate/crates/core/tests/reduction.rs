mod common;

use common::*;
use kraus_core::exact_linalg::{GaussianRational, Mat};
use kraus_core::oracles::sat_brute_force;
use kraus_core::positivity::{verify_witness, BilinearWitness};
use kraus_core::reduction::{
    assignment_from_index, build_system, decide_reduced_instance, decode_witness, encode_assignment, format_assignment,
    parse_assignment, parse_dimacs, parse_dimacs_raw, reduce_cnf_to_kraus, Cnf, EquationTag, Role,
};
use kraus_core::Error;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn one_clause() -> Cnf {
    Cnf::from_ints(2, &[[1, 2, 2]]).unwrap()
}

fn unsat4() -> Cnf {
    Cnf::from_ints(2, &[[1, 2, 2], [1, -2, -2], [-1, 2, 2], [-1, -2, -2]]).unwrap()
}

fn ints(v: &[i64]) -> Vec<GaussianRational> {
    v.iter().map(|&k| GaussianRational::from_int(k)).collect()
}

#[test]
fn parse_dimacs_examples() {
    let cnf = parse_dimacs("p cnf 3 1\n1 2 3 0\n").unwrap();
    assert_eq!((cnf.num_vars(), cnf.num_clauses()), (3, 1));
    assert!(cnf.clauses()[0].iter().all(|l| l.positive && l.coefficient() == -1));

    let cnf = parse_dimacs("p cnf 2 1\n1 -1 2 0\n").unwrap();
    let c = cnf.clauses()[0];
    assert_ne!(c[0].var, c[1].var);
    assert_eq!(cnf.num_vars(), 2);

    let cnf = parse_dimacs("c comment\np cnf 1 1\n1 1 1 0\n").unwrap();
    assert_eq!(cnf.num_vars(), 2);
    assert_eq!(cnf.num_clauses(), 2);
    assert!(cnf.is_normalized());

    assert!(parse_dimacs("p cnf 2 1\n1 2 0\n").is_err());
    assert!(parse_dimacs("p cnf 2 1\n1 2 3 0\n").is_err());
    assert!(parse_dimacs("1 2 3 0\n").is_err());
    assert!(matches!(parse_dimacs("p cnf 2 1\n1 x 2 0\n"), Err(Error::Dimacs { .. })));
}

#[test]
fn count_formulas() {
    let s = build_system(&one_clause()).unwrap();
    assert_eq!((s.n(), s.mats.len()), (5, 20));
    let s = build_system(&Cnf::from_ints(3, &[[1, 2, 3]]).unwrap()).unwrap();
    assert_eq!((s.n(), s.mats.len()), (6, 27));
    assert!(build_system(&Cnf::from_ints(1, &[[1, 1, 1]]).unwrap()).is_err());
}

#[test]
fn group_four_matrix() {
    let s = build_system(&one_clause()).unwrap();
    let idx = s.tags.iter().position(|t| *t == EquationTag::Square(1)).unwrap();
    assert_eq!(idx, 7);
    assert_eq!(s.mats[idx], Mat::unit(5, 1, 1).sub(&Mat::unit(5, 0, 0)).unwrap());
    assert_eq!(s.tags[0], EquationTag::Clause(1));
    assert_eq!(s.tags[1], EquationTag::ProductLink(1));
}

#[test]
fn unitalized_instance_structure() {
    let inst = reduce_cnf_to_kraus(&one_clause()).unwrap();
    assert_eq!(inst.scale, 15);
    let allowed: Vec<GaussianRational> = [(0, 1), (1, 15), (-1, 15), (1, 45), (-1, 45)]
        .iter()
        .map(|&(a, b)| GaussianRational::new(rat(a, b), rat(0, 1)))
        .collect();
    for m in inst.family.matrices() {
        assert!(m.entries().iter().all(|z| allowed.contains(z)));
    }
    assert!(inst.family.is_unital());
    assert_eq!(inst.special_indices, vec![2, 3, 4, 5, 6]);
    let frozen: Vec<BigInt> = [215, 217, 216, 216, 214].iter().map(|&k| BigInt::from(k)).collect();
    assert_eq!(inst.multiplicities, frozen);
    assert_eq!(inst.expanded_count(), BigInt::from(3254));
    assert_eq!(inst.family.expanded_len(), Some(BigInt::from(3254)));
    assert_eq!(
        inst.roles(),
        vec![Role::Homogenizer, Role::Variable(1), Role::Variable(2), Role::Product(1), Role::ClauseAux(1)]
    );
    assert_eq!(inst.family.provenance(), Some(&inst.cnf));
}

#[test]
fn encode_example() {
    let inst = reduce_cnf_to_kraus(&one_clause()).unwrap();
    let w = encode_assignment(&inst, &[true, true]).unwrap();
    assert_eq!(w.x, ints(&[1, 1, 1, 1, 0]));
    assert_eq!(w.x, w.y);
    assert!(verify_witness(&inst.family, &w).unwrap());
    for z in &w.x[..=3] {
        assert!(z.is_one() || *z == -GaussianRational::one());
    }
}

#[test]
fn violated_assignment_fails_on_group_one() {
    let inst = reduce_cnf_to_kraus(&one_clause()).unwrap();
    assert_eq!(
        encode_assignment(&inst, &[false, false]),
        Err(Error::UnsatisfiedClause { clause: 1, operator: 0 })
    );
    // The forced vector for (−1, −1) is rejected only by the clause matrix.
    let x = ints(&[1, -1, -1, 1, 2]);
    let w = BilinearWitness::new(x.clone(), x.clone()).unwrap();
    assert!(!verify_witness(&inst.family, &w).unwrap());
    let nonzero: Vec<usize> = inst
        .family
        .matrices()
        .enumerate()
        .filter(|(_, m)| !m.sesquilinear(&x, &x).unwrap().is_zero())
        .map(|(i, _)| i)
        .collect();
    assert_eq!(nonzero, vec![0]);
    assert!(encode_assignment(&inst, &[true]).is_err());
}

#[test]
fn decide_examples() {
    let inst = reduce_cnf_to_kraus(&one_clause()).unwrap();
    let d = decide_reduced_instance(&inst, 24).unwrap();
    assert!(d.feasible);
    assert!(verify_witness(&inst.family, d.witness.as_ref().unwrap()).unwrap());

    let inst = reduce_cnf_to_kraus(&unsat4()).unwrap();
    let d = decide_reduced_instance(&inst, 24).unwrap();
    assert!(!d.feasible && d.witness.is_none() && d.assignment.is_none());
    assert!(inst.family.is_unital());
    assert!(matches!(decide_reduced_instance(&inst, 1), Err(Error::OverCap { .. })));
}

#[test]
fn decide_agrees_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..200 {
        let cnf = random_cnf(&mut rng, 8, 6).normalized();
        let inst = reduce_cnf_to_kraus(&cnf).unwrap();
        let d = decide_reduced_instance(&inst, 24).unwrap();
        let s = sat_brute_force(&cnf).unwrap();
        assert_eq!(d.feasible, s.sat);
        assert_eq!(d.assignment, s.assignment);
    }
}

#[test]
fn decode_examples() {
    let inst = reduce_cnf_to_kraus(&one_clause()).unwrap();
    let w = encode_assignment(&inst, &[true, false]).unwrap();
    assert_eq!(decode_witness(&inst, &w).unwrap(), vec![true, false]);
    let two = GaussianRational::from_int(2);
    let three = GaussianRational::new(rat(0, 1), rat(3, 1));
    let scaled = BilinearWitness::new(
        w.x.iter().map(|z| z * &two).collect(),
        w.y.iter().map(|z| z * &three).collect(),
    )
    .unwrap();
    assert_eq!(decode_witness(&inst, &scaled).unwrap(), vec![true, false]);

    let mut bad = w.clone();
    bad.x[0] = GaussianRational::zero();
    bad.y[0] = GaussianRational::zero();
    assert!(matches!(decode_witness(&inst, &bad), Err(Error::WitnessRejected(_))));
}

#[test]
fn decode_inverts_encode_on_small_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..40 {
        let cnf = random_cnf(&mut rng, 4, 4).normalized();
        let inst = reduce_cnf_to_kraus(&cnf).unwrap();
        let nv = cnf.num_vars();
        for k in 0..(1u64 << nv) {
            let a = assignment_from_index(nv, k);
            if cnf.is_satisfied_by(&a) {
                let w = encode_assignment(&inst, &a).unwrap();
                assert_eq!(decode_witness(&inst, &w).unwrap(), a);
            }
        }
    }
}

#[test]
fn assignment_text() {
    assert_eq!(parse_assignment("+1,-1, 1").unwrap(), vec![true, false, true]);
    assert!(parse_assignment("+1,0").is_err());
    assert_eq!(format_assignment(&[true, false]), "+1,-1");
    assert_eq!(assignment_from_index(3, 0), vec![true, true, true]);
    assert_eq!(assignment_from_index(3, 1), vec![true, true, false]);
}

fn arb_cnf() -> impl Strategy<Value = Cnf> {
    (1usize..5).prop_flat_map(|nv| {
        let lit = (1..=nv as i64, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v });
        prop::collection::vec([lit.clone(), lit.clone(), lit], 1..6)
            .prop_map(move |cs| Cnf::from_ints(nv, &cs).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn normalization_is_equisatisfiable(cnf in arb_cnf()) {
        let norm = cnf.normalized();
        prop_assert!(norm.is_normalized());
        prop_assert!(norm.num_vars() >= cnf.num_vars());
        prop_assert_eq!(sat_brute_force(&cnf).unwrap().sat, sat_brute_force(&norm).unwrap().sat);
    }

    #[test]
    fn dimacs_round_trip(cnf in arb_cnf()) {
        prop_assert_eq!(parse_dimacs_raw(&cnf.to_dimacs()).unwrap(), cnf.clone());
        let norm = cnf.normalized();
        prop_assert_eq!(parse_dimacs(&norm.to_dimacs()).unwrap(), norm);
    }

    #[test]
    fn every_reduction_is_unital_and_counted(cnf in arb_cnf()) {
        let inst = reduce_cnf_to_kraus(&cnf).unwrap();
        let (nv, nc) = (inst.cnf.num_vars(), inst.cnf.num_clauses());
        prop_assert_eq!(inst.n(), nv + 2 * nc + 1);
        prop_assert_eq!(inst.equation_count(), nv + 3 * nc + (nv + 2 * nc + 1) * (4 * nc + nv) / 2);
        prop_assert!(inst.family.is_unital());
        prop_assert_eq!(inst.scale as usize, 2 * nv + 7 * nc + 4);
    }
}
