use semiqt::par::Exec;
use semiqt::zoo::{run, run_all_with, verify_ffqt, verify_padic, DEFAULT_SEED, THEORIES};

#[test]
fn suite_is_deterministic_and_passes() {
    let a = run_all_with(DEFAULT_SEED, Exec::Parallel).unwrap();
    let b = run_all_with(DEFAULT_SEED, Exec::Sequential).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 7);
    for (rep, id) in a.iter().zip(THEORIES) {
        assert_eq!(rep.theory, id);
        assert!(rep.all_pass(), "{}", serde_json::to_string_pretty(&rep.to_json()).unwrap());
    }
    let text = |rs: &[semiqt::zoo::Report]| {
        serde_json::to_string(&rs.iter().map(|r| r.to_json()).collect::<Vec<_>>()).unwrap()
    };
    assert_eq!(text(&a), text(&b));
}

#[test]
fn claim_ids_are_unique() {
    for id in THEORIES {
        let r = run(id, 7).unwrap();
        let mut ids: Vec<&str> = r.claims.iter().map(|c| c.id.as_str()).collect();
        let n = ids.len();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), n, "{id}");
    }
}

#[test]
fn ffqt_phase_counts_match_enumeration() {
    for (p, n) in [(3, 1), (5, 1), (3, 2)] {
        let r = verify_ffqt(p, n).unwrap();
        let expect = semiqt::phases::enumerate_phases(&semiqt::Semiring::quadratic(p, n).unwrap()).unwrap().order();
        assert_eq!(r.claim("phase_count").unwrap().witness["order"], expect);
    }
}

#[test]
fn padic_torsion_census_mod_27() {
    let r = verify_padic(3, 3, 100, 2).unwrap();
    assert_eq!(r.claim("torsion_census").unwrap().witness["order_divides_p_plus_1"], 4);
    assert!(r.all_pass());
}
