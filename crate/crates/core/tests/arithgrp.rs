use cubic7::arithgrp::*;
use cubic7::lattices::{t1, t2};

#[test]
fn table2_rows_and_labels() {
    let r = verify_table2();
    for row in &r.rows {
        assert!(row.member, "{:?}", row.ty);
        assert!(row.matches_display, "{:?}", row.ty);
        assert!(row.in_so_plus, "{:?}", row.ty);
        assert_eq!(row.preserves_computed, Some(row.preserves_listed), "{:?}", row.ty);
    }
    assert!(r.elementary_abelian);
    assert!(r.labels_consistent);
    assert_eq!(r.duplicate_labels, vec![(5, 6)]);
    assert_eq!(r.label_mismatches.len(), 1, "{:?}", r.label_mismatches);
    let bad = r.label_mismatches[0];
    assert!(bad == 5 || bad == 6);
}

#[test]
fn sampled_cosets_and_normality() {
    assert!(sampled_coset_check(6));
    let (p, c, ok) = closure_and_normality(7, 40);
    assert_eq!((p, c), (40, 40));
    assert!(ok);
}

#[test]
fn membership_errors() {
    let bad = TypedElementRank3 { ty: [1, 21, 6, 14], coords: [1, 0, 0, 0] };
    assert_eq!(gamma2_member(&bad), Err(ArithError::NormNotFour));
    let bad = TypedElementRank3 { ty: [5, 21, 6, 14], coords: [2, 0, 0, 0] };
    assert!(matches!(gamma2_member(&bad), Err(ArithError::UnknownType(_))));
}

#[test]
fn completeness_small_box() {
    let r = small_box_completeness(3);
    assert!(r.so_plus > 0);
    assert!(r.untyped.is_empty(), "{:?}", r.untyped);
    assert_eq!(r.typed, r.so_plus);
}

#[test]
fn parity_survey_runs() {
    let rows = parity_survey(6);
    assert_eq!(rows.len(), 8);
    for r in &rows {
        assert!(r.integral <= r.tuples);
    }
}

#[test]
fn quaternion_units_embed() {
    let units = quaternion_units(12);
    assert!(units.len() > 2);
    for q in &units {
        let t = quaternion_embed(q).unwrap();
        assert_eq!(t.coords, [2 * q.p, -2 * q.q, -2 * q.r, 6 * q.s]);
    }
    let (n, ok) = mod3_lemma(20);
    assert!(n > 0 && ok);
    assert_eq!(quaternion_embed(&Quaternion { p: 2, q: 0, r: 0, s: 0 }), Err(ArithError::NormNotOne));
}

#[test]
fn table3_and_rejection() {
    let r = verify_table3();
    for row in &r.rows {
        assert!(row.member, "{:?}", row.ty);
        assert!(row.matches_display, "{:?}", row.ty);
    }
    assert!(r.klein_four);
    assert!(r.impossible_pattern_mod4);
    let e = TypedElementRank4 { ty: [1, 21, 3, 7], c: [2, 2, 1, 0, 0, 0, 0, 0] };
    assert_eq!(gammaprime_member(&e), Err(ArithError::ParityViolation));
}

#[test]
fn rank4_samples_are_members() {
    let s = sample_rank4([1, 21, 3, 7], 2);
    assert!(!s.is_empty());
    for e in s.iter().take(30) {
        let m = gammaprime_member(e).unwrap();
        let (h1, h2) = e.pair();
        assert_eq!(type_of_pair(&h1, &h2), Some(*e));
        assert!(is_isometry(&m, &t2()));
    }
}

#[test]
fn hilbert_roundtrip_small() {
    let r = hilbert_roundtrip(1, 20, 4);
    assert_eq!(r.forward_ok, 20);
    assert_eq!(r.roundtrip_ok, 20);
    assert_eq!(r.pullback_ok, r.pullback_samples);
}

#[test]
fn involutions() {
    let r = involution_checks();
    assert!(r.p_isometry && r.p_in_o_plus && r.p_squared_identity);
    assert_eq!(r.p_det, -1);
    assert_eq!(r.minus_id_t1_z3, Some(Z3Action::Negates));
    assert!(r.f_hat_involution);
    assert_eq!(r.f_hat_det, Some(1));
    assert!(r.kernel_trivial);
    let _ = t1();
}

#[test]
fn homomorphisms_and_determinant_condition() {
    assert!(homomorphism_check(3, 4));
    assert!(determinant_equivalence(5, 40));
}
