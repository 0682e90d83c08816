//! Seeded random Bell scenarios for property tests.

use rand::seq::SliceRandom;
use rand::Rng;

use super::BellScenario;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::phases::enumerate_phases;
use crate::semiring::{CarrierSpec, Element, Semiring};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScenarioLimits {
    pub max_dim: usize,
    pub max_parties: usize,
    pub max_choices: usize,
    /// Cap on `d^(total choices)`, the number of global assignments.
    pub max_assignments: Option<u128>,
}

impl Default for ScenarioLimits {
    fn default() -> Self {
        ScenarioLimits { max_dim: 4, max_parties: 3, max_choices: 2, max_assignments: None }
    }
}

const TRIES: usize = 200;

fn small_int<R: Rng + ?Sized>(s: &Semiring, rng: &mut R) -> Element {
    match s.spec() {
        CarrierSpec::Rational => Element::int(rng.gen_range(-3..=3)),
        CarrierSpec::SplitComplex => Element::split_int(rng.gen_range(-3..=3), rng.gen_range(-2..=2)),
        _ => s.sample(rng),
    }
}

fn permutation<R: Rng + ?Sized>(s: &Semiring, d: usize, rng: &mut R) -> Matrix {
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(rng);
    Matrix::from_fn(s, d, d, |i, j| if perm[j] == i { s.one() } else { s.zero() })
}

fn phase_list(s: &Semiring) -> Vec<Element> {
    match s.spec() {
        CarrierSpec::SplitComplex => {
            let q = |n: i64, d: i64| Element::rat(n, d).as_rational().cloned().expect("rational");
            // points (1 + t^2, 2t) / (1 - t^2) of the unit hyperbola, t = 1/2 and 1/3
            vec![
                Element::split_int(1, 0),
                Element::split_int(-1, 0),
                Element::split(q(5, 3), q(4, 3)),
                Element::split(q(5, 4), q(3, 4)),
            ]
        }
        _ => enumerate_phases(s).map(|g| g.elements().to_vec()).unwrap_or_else(|_| vec![s.one()]),
    }
}

/// `I - 2 v v^dagger / (v^dagger v)` for a random `v` with invertible norm.
fn householder<R: Rng + ?Sized>(s: &Semiring, d: usize, rng: &mut R) -> Result<Option<Matrix>> {
    let two = s.from_int(2)?;
    if s.inv(&two)?.is_none() {
        return Ok(None);
    }
    for _ in 0..TRIES {
        let v = Matrix::column(s, (0..d).map(|_| small_int(s, rng)).collect())?;
        let n = v.dagger().matmul(&v)?.get(0, 0).clone();
        let Some(inv) = s.inv(&n)?.filter(|_| !s.is_zero(&n)) else { continue };
        let proj = v.matmul(&v.dagger())?.scale(&s.mul(&two, &inv)?)?;
        return Ok(Some(Matrix::identity(s, d).sub(&proj)?));
    }
    Ok(None)
}

/// A random `U` with `U^dagger U = 1` built from the carrier's stock of
/// unitaries: permutations, phases, Householder reflections and, over Z2
/// in even dimension, `J - I`.
pub fn random_unitary<R: Rng + ?Sized>(s: &Semiring, d: usize, rng: &mut R) -> Result<Matrix> {
    let mut u = permutation(s, d, rng);
    if s.has_negation() {
        let phases = phase_list(s);
        let diag: Vec<Element> = (0..d).map(|_| phases.choose(rng).unwrap().clone()).collect();
        u = u.matmul(&Matrix::from_fn(s, d, d, |i, j| if i == j { diag[i].clone() } else { s.zero() }))?;
        for _ in 0..rng.gen_range(1..=2) {
            if let Some(h) = householder(s, d, rng)? {
                u = u.matmul(&h)?;
            }
        }
        if matches!(s.spec(), CarrierSpec::Z2) && d.is_multiple_of(2) && rng.gen_bool(0.5) {
            let j = Matrix::from_fn(s, d, d, |i, k| if i == k { s.zero() } else { s.one() });
            u = u.matmul(&j)?.matmul(&permutation(s, d, rng))?;
        }
    }
    if u.dagger().matmul(&u)? != Matrix::identity(s, d) {
        return Err(Error::InvalidParameter(format!("generated a non-unitary matrix over {}", s.name())));
    }
    Ok(u)
}

fn random_state<R: Rng + ?Sized>(s: &Semiring, n: usize, rng: &mut R) -> Result<Matrix> {
    let entry = |rng: &mut R| match s.spec() {
        CarrierSpec::TropicalInt | CarrierSpec::TropicalNat => {
            if rng.gen_bool(0.3) {
                Element::TROP_INF
            } else {
                Element::trop(rng.gen_range(0..=4))
            }
        }
        _ => small_int(s, rng),
    };
    Matrix::column(s, (0..n).map(|_| entry(rng)).collect())
}

/// A random scenario whose components pass [`BellScenario::validate`].
pub fn random_scenario<R: Rng + ?Sized>(s: &Semiring, limits: ScenarioLimits, rng: &mut R) -> Result<BellScenario> {
    for _ in 0..TRIES {
        let d = rng.gen_range(2..=limits.max_dim.max(2));
        let parties = rng.gen_range(2..=limits.max_parties.max(2));
        let choices: Vec<usize> = (0..parties).map(|_| rng.gen_range(1..=limits.max_choices.max(1))).collect();
        let total_choices: u32 = choices.iter().map(|&c| c as u32).sum();
        let joint = (d as u128).pow(parties as u32);
        if joint > 64 {
            continue;
        }
        if let Some(cap) = limits.max_assignments {
            if (d as u128).checked_pow(total_choices).is_none_or(|n| n > cap) {
                continue;
            }
        }
        let measurements = choices
            .iter()
            .map(|&c| (0..c).map(|_| random_unitary(s, d, rng)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        for _ in 0..TRIES {
            let state = random_state(s, joint as usize, rng)?;
            let sc = BellScenario::new(s, state, measurements.clone())?;
            if sc.validate().is_ok() {
                return Ok(sc);
            }
        }
    }
    Err(Error::InvalidParameter(format!("no valid random scenario found over {}", s.name())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitaries_on_every_carrier() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for s in [
            Semiring::rational(),
            Semiring::z2(),
            Semiring::boolean(),
            Semiring::split_complex(),
            Semiring::tropical_int(),
            Semiring::quadratic(3, 1).unwrap(),
        ] {
            for d in 2..=4 {
                random_unitary(&s, d, &mut rng).unwrap();
            }
            let sc = random_scenario(&s, ScenarioLimits::default(), &mut rng).unwrap();
            assert!(sc.parties() >= 2);
        }
    }

    #[test]
    fn assignment_cap_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let limits = ScenarioLimits { max_assignments: Some(128), ..Default::default() };
        for _ in 0..20 {
            let sc = random_scenario(&Semiring::z2(), limits, &mut rng).unwrap();
            let total: u32 = sc.choices().iter().map(|&c| c as u32).sum();
            assert!((sc.dim() as u128).pow(total) <= 128);
        }
    }
}
