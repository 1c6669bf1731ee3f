use cubic7::lattices::*;
use num_bigint::BigInt;
use num_traits::Signed;

fn factors(l: &Lattice) -> Vec<i64> {
    invariant_factors(&l.gram_int()).iter().map(|x| i64::try_from(x).unwrap()).collect()
}

#[test]
fn smith_forms() {
    assert_eq!(factors(&t1()), vec![1, 7, 84]);
    assert_eq!(factors(&t2()), vec![1, 7, 7, 21]);
    assert_eq!(factors(&e8()), vec![1; 8]);
    let m = int_mat(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let (u, d, v) = smith_normal_form(&m);
    assert_eq!(mat_mul(&mat_mul(&u, &m), &v), d);
    assert_eq!((0..3).map(|i| d[i][i].clone()).collect::<Vec<_>>(), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    assert_eq!(det(&u).abs(), BigInt::from(1));
    assert_eq!(det(&v).abs(), BigInt::from(1));
}

#[test]
fn discriminant_groups() {
    for (l, order) in [(t1(), 588u64), (t2(), 1029)] {
        let a = discriminant_group(&l);
        assert_eq!(a.order(), order);
        assert_eq!(BigInt::from(order), l.det().abs());
        assert!(check_qb_consistency(&l, &a));
    }
    assert_eq!(discriminant_group(&t1()).invariant_factors, vec![7, 84]);
    assert_eq!(discriminant_group(&t2()).invariant_factors, vec![7, 7, 21]);
    assert_eq!(discriminant_group(&e8()).order(), 1);
}

#[test]
fn signatures_and_milgram() {
    assert_eq!(t1().signature(), (1, 2));
    assert_eq!(t2().signature(), (2, 2));
    assert_eq!(hyperbolic().signature(), (1, 1));
    assert_eq!(e8().signature(), (8, 0));
    for l in [t1(), t2(), hyperbolic(), a2(), e8()] {
        let r = milgram_phase(&l).unwrap();
        assert!(r.matches, "{r:?}");
    }
    assert_eq!(milgram_phase(&t1()).unwrap().phase_mod8, 7);
    let odd = Lattice::new(vec![vec![1]]).unwrap();
    assert_eq!(milgram_phase(&odd).unwrap_err(), LatticeError::NotEven);
}

#[test]
fn isotropy() {
    assert_eq!(isotropic_search(&t1(), 200), None);
    let v = isotropic_search(&t2(), 10).unwrap();
    assert_eq!(t2().norm_int(&v), 0);
    assert!(isotropic_search(&hyperbolic(), 1).is_some());
    assert!(local_obstruction(&t1_half_form(), 4).unwrap());
    assert!(local_obstruction(&quaternion_norm_form(), 49).unwrap());
    assert!(!local_obstruction(&QuadForm::diagonal(&[1, 1, -1]), 4).unwrap());
    assert!(local_obstruction(&t1_half_form(), 2000).is_err());
    assert!(local_obstruction(&t1_half_form(), 12).is_err());
}

#[test]
fn json_loading() {
    let l = Lattice::from_json(r#"{"gram": [[0,1],[1,0]]}"#).unwrap();
    assert_eq!(l.signature(), (1, 1));
    assert!(Lattice::from_json(r#"{"gram": [[0,1],[2,0]]}"#).is_err());
}
