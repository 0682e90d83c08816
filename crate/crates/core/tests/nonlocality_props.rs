use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semiqt::nonlocality::{
    build_empirical_model, check_no_signalling, chsh_oracle, lhv_check_nonneg, lhv_solve_field, marginals, parity_bell,
    pythagorean_chsh, random_scenario, random_unitary, BellScenario, EmpiricalModel, NonnegLhv, ScenarioLimits,
};
use semiqt::semiring::positive_subsemiring;
use semiqt::{Element, Error, Matrix, Semiring};

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn random_models_are_no_signalling() {
    let carriers = [
        Semiring::rational(),
        Semiring::z2(),
        Semiring::quadratic(3, 1).unwrap(),
        Semiring::boolean(),
        Semiring::split_complex(),
        Semiring::tropical_int(),
    ];
    for (k, s) in carriers.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + k as u64);
        for _ in 0..25 {
            let sc = random_scenario(s, ScenarioLimits::default(), &mut rng).unwrap();
            let m = build_empirical_model(&sc).unwrap();
            assert!(check_no_signalling(&m).unwrap().holds, "{}", s.name());
            assert!(m.non_positive_entries().unwrap().is_empty(), "{}", s.name());
        }
    }
}

#[test]
fn field_lhv_reproduces_every_table() {
    let limits = ScenarioLimits { max_assignments: Some(128), ..Default::default() };
    for (k, s) in [Semiring::z2(), Semiring::quadratic(3, 1).unwrap(), Semiring::split_complex()].iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(200 + k as u64);
        for _ in 0..15 {
            let m = build_empirical_model(&random_scenario(s, limits, &mut rng).unwrap()).unwrap();
            let sol = lhv_solve_field(&m).unwrap().expect("field models are local");
            assert!(sol.residual_zero);
            let view = positive_subsemiring(s).unwrap().field_view().unwrap();
            let tables = marginals(&m, &sol.field, &sol.weights).unwrap();
            for (t, orig) in tables.iter().zip(m.tables()) {
                let mapped: Vec<Element> = orig.iter().map(|e| view.to_field(e).unwrap()).collect();
                assert_eq!(t, &mapped);
            }
        }
    }
}

#[test]
fn parity_model_is_locally_explained() {
    let m = build_empirical_model(&parity_bell()).unwrap();
    assert!(lhv_solve_field(&m).unwrap().unwrap().residual_zero);
}

/// Two-party real models with random orthogonal measurements.
fn real_corpus() -> Vec<EmpiricalModel> {
    let q = Semiring::rational();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut out = vec![EmpiricalModel::pr_box(), build_empirical_model(&pythagorean_chsh()).unwrap()];
    for _ in 0..40 {
        let state = loop {
            let v: Vec<Element> = (0..4).map(|_| Element::int(rng.gen_range(-3..=3))).collect();
            if v.iter().any(|x| !q.is_zero(x)) {
                break Matrix::column(&q, v).unwrap();
            }
        };
        let ms = (0..2).map(|_| (0..2).map(|_| random_unitary(&q, 2, &mut rng).unwrap()).collect()).collect();
        out.push(build_empirical_model(&BellScenario::new(&q, state, ms).unwrap()).unwrap());
    }
    // noisy PR boxes at visibilities around the local threshold
    for (n, d) in [(1, 4), (1, 2), (3, 5), (3, 4)] {
        let pr = EmpiricalModel::pr_box();
        let v = Element::rat(n, d);
        let noise = Element::rat(d - n, 4 * d);
        let tables = pr
            .tables()
            .iter()
            .map(|t| t.iter().map(|e| q.add(&q.mul(e, &v).unwrap(), &noise).unwrap()).collect())
            .collect();
        out.push(EmpiricalModel::two_by_two(&q, tables).unwrap());
    }
    out
}

#[test]
fn nonneg_lhv_agrees_with_vertex_oracle() {
    for m in real_corpus() {
        let lp = lhv_check_nonneg(&m).unwrap();
        let oracle = chsh_oracle(&m).unwrap();
        match lp {
            NonnegLhv::Local { weights } => {
                assert_eq!(oracle.visibility, r(1, 1));
                assert!(weights.iter().all(|w| w >= &r(0, 1)));
                let q = Semiring::rational();
                let ws: Vec<Element> = weights.into_iter().map(Element::Rat).collect();
                assert_eq!(marginals(&m, &q, &ws).unwrap(), m.tables());
            }
            NonnegLhv::Nonlocal { visibility, certificate } => {
                assert_eq!(visibility, oracle.visibility);
                assert_eq!(certificate.bound, r(2, 1));
                assert_eq!(certificate.margin, oracle.normalised_margin());
            }
        }
    }
}

#[test]
fn pythagorean_chsh_frozen_values() {
    let m = build_empirical_model(&pythagorean_chsh()).unwrap();
    assert!(check_no_signalling(&m).unwrap().holds);
    let NonnegLhv::Nonlocal { visibility, certificate } = lhv_check_nonneg(&m).unwrap() else {
        panic!("the Pythagorean CHSH model is nonlocal")
    };
    assert_eq!(visibility, r(3814697265625, 5361199787321));
    assert_eq!(certificate.value, r(10722399574642, 3814697265625));
    assert_eq!(certificate.margin, r(3093005043392, 3814697265625));
    let near = [r(13689, 31250), r(968, 15625), r(968, 15625), r(13689, 31250)];
    for t in &m.tables()[..3] {
        let got: Vec<BigRational> = t.iter().map(|e| e.as_rational().unwrap().clone()).collect();
        assert_eq!(got, near);
    }
    let far: Vec<BigRational> = m.tables()[3].iter().map(|e| e.as_rational().unwrap().clone()).collect();
    assert_eq!(far[0], r(850225993929, 7629394531250));
    assert_eq!(far[1], r(1482235635848, 3814697265625));
}

#[test]
fn pr_box_is_no_signalling_and_nonlocal() {
    let m = EmpiricalModel::pr_box();
    assert!(check_no_signalling(&m).unwrap().holds);
    let NonnegLhv::Nonlocal { certificate, .. } = lhv_check_nonneg(&m).unwrap() else { panic!() };
    assert_eq!((certificate.value, certificate.bound), (r(4, 1), r(2, 1)));
}

#[test]
fn tropical_models_have_no_field_solver() {
    let s = Semiring::tropical_int();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let m = build_empirical_model(&random_scenario(&s, ScenarioLimits::default(), &mut rng).unwrap()).unwrap();
    assert!(matches!(lhv_solve_field(&m), Err(Error::NotAField(_))));
}

#[test]
fn signalling_models_are_rejected_by_the_lp() {
    let q = Semiring::rational();
    let mut tables = EmpiricalModel::pr_box().tables().to_vec();
    tables[1] = vec![Element::int(1), Element::int(0), Element::int(0), Element::int(0)];
    let m = EmpiricalModel::two_by_two(&q, tables).unwrap();
    let ns = check_no_signalling(&m).unwrap();
    assert!(!ns.holds && ns.witness.is_some());
    assert!(matches!(lhv_check_nonneg(&m), Err(Error::Unsupported(_))));
}
