use cubic7::gitstab::*;

#[test]
fn quoted_certificates() {
    let w = hm_weights(&[-25, -1, 3, 1, -1, 23]);
    assert!([1, 2, 3, 4, 5, 7].iter().all(|&i| w[i] > 0));
    let w = hm_weights(&[-8, -5, 10, 1, -2, 4]);
    assert!(w[0] < 0 && w[1..].iter().all(|&x| x >= 0));
    let all_but = |skip: &[usize]| pattern_from_slots(&(0..8).filter(|i| !skip.contains(i)).collect::<Vec<_>>());
    assert!(verify_certificate(Family::C7, all_but(&[0, 6]), true, &[-25, -1, 3, 1, -1, 23]));
    assert!(verify_certificate(Family::C7, all_but(&[0]), false, &[-8, -5, 10, 1, -2, 4]));
    assert!(destabilizer_exists(Family::C7, all_but(&[0, 6]), true).is_some());
    assert!(destabilizer_exists(Family::C7, 0xff, false).is_none());
    assert!(destabilizer_exists(Family::C7, pattern_from_slots(&[6, 7]), true).is_none());
}

#[test]
fn c7_sweep_matches_closed_form() {
    let rows = sweep(Family::C7);
    assert_eq!(rows.len(), 256);
    for r in &rows {
        assert!(r.agree, "{r:?}");
    }
    assert!(monotone(Family::C7, &rows));
}

#[test]
fn f21_sweep_matches_closed_form() {
    let rows = sweep(Family::F21);
    assert_eq!(rows.len(), 16);
    assert!(rows.iter().all(|r| r.agree));
    assert!(rows.iter().all(|r| r.oracle != Stability::SemistableNotStable));
    assert_eq!(closed_form_f21(pattern_from_slots(&[0, 1])), Stability::Stable);
    assert_eq!(closed_form_f21(pattern_from_slots(&[0, 2])), Stability::Unstable);
}

#[test]
fn fm_basic() {
    use cubic7::exactnum::rat;
    // x >= 1, -x >= -1/2 infeasible
    let c = vec![Ineq { a: vec![rat(1, 1)], rhs: rat(1, 1) }, Ineq { a: vec![rat(-1, 1)], rhs: rat(-1, 2) }];
    assert!(fm_feasible(&c, 1).is_none());
    let c = vec![Ineq { a: vec![rat(1, 1), rat(1, 1)], rhs: rat(3, 1) }, Ineq { a: vec![rat(-1, 1), rat(0, 1)], rhs: rat(-1, 1) }];
    let x = fm_feasible(&c, 2).unwrap();
    assert!(&x[0] + &x[1] >= rat(3, 1) && x[0] <= rat(1, 1));
}
