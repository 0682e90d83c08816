use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semiqt::cpm::{
    classical_lift_auto, classical_project, compose, cp_equal, decoherence, discard, double, is_normalised, tensor,
    CPMap,
};
use semiqt::nonlocality::random_unitary;
use semiqt::{Matrix, Semiring};

fn random_matrix(s: &Semiring, rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..rows * cols).map(|_| s.sample(&mut rng)).collect();
    Matrix::new(s, rows, cols, data).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn doubling_is_functorial(seed in any::<u64>()) {
        for s in [Semiring::quadratic(3, 1).unwrap(), Semiring::split_complex(), Semiring::z2()] {
            let f = random_matrix(&s, 3, 2, seed);
            let g = random_matrix(&s, 2, 3, seed ^ 0x9e37);
            let lhs = double(&g.matmul(&f).unwrap());
            let rhs = compose(&double(&g), &double(&f)).unwrap();
            prop_assert!(cp_equal(&lhs, &rhs).unwrap());
            prop_assert_eq!(lhs.choi(), &double(&g).choi().matmul(double(&f).choi()).unwrap());
            let t = tensor(&double(&f), &double(&g)).unwrap();
            prop_assert_eq!(t.choi().rows(), 36);
        }
    }

    #[test]
    fn unitaries_are_normalised(seed in any::<u64>(), d in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for s in [Semiring::rational(), Semiring::quadratic(3, 1).unwrap(), Semiring::tropical_int(), Semiring::boolean()] {
            let u = random_unitary(&s, d, &mut rng).unwrap();
            prop_assert!(is_normalised(&double(&u)).unwrap());
            let m = compose(&decoherence(&s, d), &double(&u)).unwrap();
            prop_assert!(is_normalised(&m).unwrap());
        }
    }

    #[test]
    fn classical_round_trip(seed in any::<u64>()) {
        let s = Semiring::quadratic(3, 1).unwrap();
        let f9_cone = semiqt::semiring::positive_subsemiring(&s).unwrap();
        let members = f9_cone.members().unwrap().to_vec();
        let m = Matrix::from_fn(&s, 2, 3, |i, j| members[((seed >> (3 * i + j)) as usize) % members.len()].clone());
        let lifted = classical_lift_auto(&m).unwrap();
        prop_assert_eq!(classical_project(&lifted).unwrap(), m);
    }
}

#[test]
fn discard_is_monoidal() {
    let s = Semiring::rational();
    let lhs = tensor(&discard(&s, 2), &discard(&s, 3)).unwrap();
    assert!(cp_equal(&lhs, &discard(&s, 6)).unwrap());
    assert!(cp_equal(&compose(&discard(&s, 3), &decoherence(&s, 3)).unwrap(), &discard(&s, 3)).unwrap());
    assert_eq!(CPMap::identity(&s, 2), double(&Matrix::identity(&s, 2)));
}
