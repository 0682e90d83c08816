use proptest::prelude::*;
use semiqt::arith::is_square_free;
use semiqt::frobenius::FiniteAbelianGroup;
use semiqt::phases::{
    coset_labels, divisibility_criterion, enumerate_phases, enumerate_phases_brute, has_fourier_basis,
    mermin_brute_force, mermin_feasible, multiplicative_characters, phase_gate_group, run_abelian_hsp,
};
use semiqt::semiring::CarrierSpec;
use semiqt::{Exec, Semiring};

#[test]
fn phase_counts_match_brute_force() {
    for (p, n) in [(3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (3, 2), (5, 2)] {
        let s = Semiring::quadratic(p, n).unwrap();
        let fast = enumerate_phases(&s).unwrap();
        let slow = enumerate_phases_brute(&s, Exec::Sequential).unwrap();
        assert_eq!(fast.elements(), slow.elements());
        let big_n = p.pow(n) + 1;
        assert_eq!(fast.order() as u64, big_n);
        assert_eq!(fast.cyclic_factors(), &[big_n]);
    }
}

#[test]
fn sequential_and_parallel_enumeration_agree() {
    let s = Semiring::quadratic(7, 2).unwrap();
    let a = semiqt::phases::enumerate_phases_with(&s, Exec::Sequential).unwrap();
    let b = semiqt::phases::enumerate_phases_with(&s, Exec::Parallel).unwrap();
    assert_eq!(a.elements(), b.elements());
    assert_eq!(a.order(), 50);
}

#[test]
fn padic_residue_phase_counts() {
    for (p, k) in [(3u64, 2u32), (3, 3), (5, 2), (7, 2)] {
        let s = Semiring::new(CarrierSpec::PadicResidue { p, precision: k }).unwrap();
        let g = enumerate_phases(&s).unwrap();
        assert_eq!(g.order() as u64, (p + 1) * p.pow(k - 1));
    }
}

#[test]
fn fourier_basis_matches_divisibility_for_small_groups() {
    for (p, s) in [(3, Semiring::quadratic(3, 1).unwrap()), (5, Semiring::quadratic(5, 1).unwrap())] {
        for order in 1..=12 {
            for g in FiniteAbelianGroup::all_of_order(order) {
                let fourier = has_fourier_basis(&g, &s).unwrap();
                let criterion = divisibility_criterion(&g, p, 1).unwrap();
                assert_eq!(fourier, criterion, "{:?} over {}", g.factors(), s.name());
            }
        }
    }
}

#[test]
fn character_count_is_product_of_gcds() {
    let s = Semiring::quadratic(3, 1).unwrap();
    for order in 1..=12 {
        for g in FiniteAbelianGroup::all_of_order(order) {
            let expect: u64 = g.factors().iter().map(|&n| semiqt::arith::gcd(n, 4)).product();
            assert_eq!(multiplicative_characters(&g, &s).unwrap().len() as u64, expect);
        }
    }
}

#[test]
fn hsp_recovers_every_subgroup() {
    let cases = [
        (FiniteAbelianGroup::new(vec![2, 2]).unwrap(), Semiring::rational()),
        (FiniteAbelianGroup::cyclic(4), Semiring::quadratic(3, 1).unwrap()),
        (FiniteAbelianGroup::new(vec![2, 4]).unwrap(), Semiring::quadratic(7, 1).unwrap()),
    ];
    for (g, s) in cases {
        for h in g.subgroups() {
            let out = run_abelian_hsp(&g, &s, &coset_labels(&g, &h)).unwrap();
            let expect: Vec<Vec<u64>> = h.iter().map(|&x| g.element(x)).collect();
            assert_eq!(out.subgroup, expect, "{:?}", g.factors());
            let gens: Vec<usize> = out.generators.iter().map(|x| g.index(x)).collect();
            assert_eq!(g.generated(&gens), h);
        }
    }
}

#[test]
fn simon_instance() {
    let g = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
    let out = run_abelian_hsp(&g, &Semiring::rational(), &coset_labels(&g, &[0, 3])).unwrap();
    assert_eq!(out.annihilator, vec![vec![0, 0], vec![1, 1]]);
    assert_eq!(out.generators, vec![vec![1, 1]]);
}

#[test]
fn phase_gate_groups() {
    let q = phase_gate_group(&Semiring::rational(), 3, 64).unwrap();
    assert_eq!(q.cyclic_factors, vec![2, 2]);
    let f = phase_gate_group(&Semiring::quadratic(3, 1).unwrap(), 3, 64).unwrap();
    assert_eq!((f.order, f.cyclic_factors.clone()), (16, vec![4, 4]));
    assert!(f.report.all_pass());
}

proptest! {
    #[test]
    fn mermin_agrees_with_brute_force(idx in 0usize..12, n in 1u32..3) {
        let p = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41][idx];
        let r = mermin_feasible(p, n).unwrap();
        prop_assert_eq!(r.feasible, !is_square_free(r.order));
        // brute force sees every square factor whose prime is at most 5
        let small_square = [2u64, 3, 5].iter().any(|q| r.order.is_multiple_of(q * q));
        let large_square = r.factorization.iter().any(|&(q, e)| q > 5 && e >= 2);
        if !large_square {
            prop_assert_eq!(mermin_brute_force(r.order, 5), small_square);
            prop_assert_eq!(r.feasible, small_square);
        }
        if let Some(w) = r.witness {
            prop_assert!(w.no_solution_in_k && w.solution_verified);
        }
    }
}
