use cubic7::exactnum::{parse_number, rat, AlgebraicNumber};
use cubic7::polyalg::{f_ab, Poly};
use cubic7::singular::*;

fn num(s: &str) -> AlgebraicNumber {
    parse_number(s).unwrap()
}

#[test]
fn curve_point_three_quarters() {
    let (a, b) = (num("3/4"), num("0"));
    assert_eq!(discriminant_curve(&a, &b), [true, false, false]);
    let pts = singular_points(&a, &b);
    assert_eq!(pts.len(), 7);
    assert!(pts.iter().all(|p| p.k == 0 && p.tau == num("-1/2")));
    let f = f_ab(&a, &b);
    for p in &pts {
        assert_eq!(classify(&f, &p.coords).unwrap().tag, SingTag::A1);
    }
}

#[test]
fn cusps_at_one_one() {
    let (a, b) = (num("1"), num("1"));
    let pts = singular_points(&a, &b);
    assert_eq!(pts.len(), 7);
    let f = f_ab(&a, &b);
    for p in &pts {
        assert_eq!(classify(&f, &p.coords).unwrap().tag, SingTag::A2);
        let l = p.l as i64;
        let z = |e: i64| num(&format!("zeta7^{}", (e * l).rem_euclid(7)));
        let want = [num("1"), -z(6), z(1), -z(4), z(5), -z(3)];
        let k = &p.coords[0].inverse().unwrap();
        assert!(p.coords.iter().zip(&want).all(|(x, y)| &(x * k) == y));
    }
    // twisted copies (omega, omega) and (omega^2, omega^2)
    for w in ["omega", "omega^2"] {
        let a = num(w);
        let f = f_ab(&a, &a);
        let pts = singular_points(&a, &a);
        assert_eq!(pts.len(), 7);
        assert!(pts.iter().all(|p| classify(&f, &p.coords).unwrap().tag == SingTag::A2));
    }
}

#[test]
fn smooth_off_curve() {
    let (a, b) = (num("2"), num("5"));
    assert_eq!(discriminant_curve(&a, &b), [false; 3]);
    assert!(singular_points(&a, &b).is_empty());
}

#[test]
fn hessian_formula() {
    for tau in ["-1/2", "2", "-3", "1/5"] {
        let t = num(tau);
        let a = -(&(&t * &num("2")) + &(&t * &t));
        let b = -(&(&t.inverse().unwrap() * &num("2")) + &(&t * &t).inverse().unwrap());
        let f = f_ab(&a, &b);
        for p in singular_points(&a, &b) {
            let h = f.hessian_at(0, &p.coords).unwrap().scale(&num("1/2"));
            assert_eq!(h.det(), predicted_hessian_det(&p), "tau {tau} l {}", p.l);
        }
    }
}

#[test]
fn affine_classifier() {
    let f = Poly::parse("x1^2 + x2^2 + x3^2 + x4^2 + x5^3", 5).unwrap();
    let o = vec![num("0"); 5];
    let c = classify_affine(&f, &o).unwrap();
    assert_eq!((c.tag, c.corank), (SingTag::A2, 1));
    let g = Poly::parse("x1^2 + x2^2 + x3^2 + x4^2 + x5^4", 5).unwrap();
    assert_eq!(classify_affine(&g, &o).unwrap().tag, SingTag::HigherCorank);
    let n = Poly::parse("x1^2 + x2^2 + x3^2 + x4^2 + x5^2", 5).unwrap();
    assert_eq!(classify_affine(&n, &o).unwrap().tag, SingTag::A1);
    let one = vec![num("1"); 5];
    assert_eq!(classify_affine(&n, &one).unwrap_err(), SingError::NotSingular);
}

#[test]
fn no_zero_coordinates() {
    for (a, b) in [(rat(3, 4), rat(0, 1)), (rat(1, 1), rat(1, 1)), (rat(2, 1), rat(-7, 3))] {
        for i in 0..6 {
            assert!(no_zero_coordinate_certificate(&a, &b, i).is_some(), "{a} {b} {i}");
        }
    }
}

#[test]
fn gcd_monic() {
    let p = vec![num("-1"), num("0"), num("1")];
    let q = vec![num("2"), num("2")];
    assert_eq!(ugcd(&p, &q), vec![num("1"), num("1")]);
}

#[test]
fn pencil_table() {
    let rows = l27_table_scan().unwrap();
    for r in &rows {
        assert!(r.matches, "{r:?}");
    }
}

#[test]
fn veronese_sextic_restriction() {
    let r = veronese_sextic().unwrap();
    assert!(r.gx1_is_standard, "{r:?}");
    assert!(!r.listed_is_bijection);
    assert!(r.corrected_is_valid, "{r:?}");
    assert!(r.x1_prime_restricts_to_zero);
    assert!(r.restriction_f1_scalar.is_some() && r.restriction_f2_scalar.is_some(), "{r:?}");
}
