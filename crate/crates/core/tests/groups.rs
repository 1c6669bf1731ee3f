use cubic7::exactnum::{parse_number, rationals, AlgebraicNumber};
use cubic7::groups::*;
use cubic7::linalg::FMatrix;
use cubic7::polyalg::*;

fn num(s: &str) -> AlgebraicNumber {
    parse_number(s).unwrap()
}

#[test]
fn invariant_dimensions() {
    let c7 = invariant_subspace(&[g7()], 3, 6).unwrap();
    assert_eq!(c7.len(), 8);
    let f21 = invariant_subspace(&[g7(), g3()], 3, 6).unwrap();
    assert_eq!(f21.len(), 4);
    let id = invariant_subspace(&[FMatrix::identity(6, &rationals())], 3, 6).unwrap();
    assert_eq!(id.len(), 56);
    let l27 = invariant_subspace(&l27_generators(), 3, 6).unwrap();
    assert_eq!(l27.len(), 2);
    for f in [f1(), f2()] {
        assert!(f.coords_in(&l27).is_ok());
    }
}

#[test]
fn family_forms_are_invariant() {
    for b in f21_basis() {
        assert_eq!(b.act(&g7()).unwrap(), b);
        assert!(b.proj_eq(&b.act(&g3()).unwrap()));
    }
    for b in c7_basis() {
        assert_eq!(b.act(&g7()).unwrap(), b);
    }
}

#[test]
fn euler_and_round_trip() {
    let f = f_ab(&num("3/4"), &num("-2"));
    assert_eq!(f.euler(), f.scale(&num("3")));
    let back = Poly::parse(&f.render("x"), 6).unwrap();
    assert_eq!(back, f);
    let g = f1() + f2().scale(&num("3*(1+sqrt-7)/4"));
    assert_eq!(Poly::parse_in(&g.render("x"), 6, &g.field()).unwrap(), g);
}

#[test]
fn action_is_left() {
    let f = f_ab(&num("2"), &num("5"));
    let (a, b) = (g3(), d_t(&num("3")));
    let lhs = f.act(&b).unwrap().act(&a).unwrap();
    let rhs = f.act(&(&a * &b)).unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn conjugations_hold() {
    for c in conjugation_identities() {
        assert!(c.holds, "{}", c.name);
    }
}

#[test]
fn group_orders() {
    assert_eq!(build_c7().unwrap().order(), 7);
    assert_eq!(build_f21().unwrap().order(), 21);
    let l = build_l27().unwrap();
    assert_eq!(l.order(), 168);
    assert!(l.normalized_by(&e_prime()));
    assert_eq!(build_l27_ext().unwrap().order(), 336);
}

#[test]
fn e_prime_on_pencil() {
    let e = e7();
    assert!((&e * &e).proj_eq(&perm7(&[&[1, 6, 2], &[4, 5, 7]])));
    let ep = e_prime();
    assert_eq!(f1().act(&ep).unwrap(), f2().scale(&num("3*sqrt2/2")));
    assert_eq!(f2().act(&ep).unwrap(), f1().scale(&num("sqrt2/3")));
    // fixed members f1 + lambda f2, lambda = +-3 sqrt2/2
    assert!(pencil_extra_symmetry(&num("1"), &num("3*sqrt2/2")).unwrap());
    assert!(pencil_extra_symmetry(&num("1"), &num("-3*sqrt2/2")).unwrap());
    assert!(!pencil_extra_symmetry(&num("1"), &num("1")).unwrap());
}

#[test]
fn s_intertwines() {
    let s = build_s().unwrap();
    let si = s.inverse().unwrap();
    assert!((&(&s * &g7_prime()) * &si).proj_eq(&g7()));
    assert!((&(&s * &g3_prime()) * &si).proj_eq(&g3()));
    // S moves f1, f2 into the F21 family
    assert!(family_coords(&f1().act(&s).unwrap(), FamilyTag::F21).is_ok());
    assert!(family_coords(&f2().act(&s).unwrap(), FamilyTag::F21).is_ok());
}

#[test]
fn induced_actions_match() {
    let om = num("omega");
    let z = num("0");
    let one = num("1");
    assert!(induced_family_action(&g7()).unwrap().is_identity());
    let k = induced_family_action(&k_elem()).unwrap();
    assert_eq!(k, FMatrix::diag(&[one.clone(), om.clone(), one.clone(), one.clone()]));
    for t in ["2", "3", "5", "-1/2"] {
        let t = num(t);
        let r = induced_family_action(&d_t(&t)).unwrap();
        assert_eq!(r, FMatrix::diag(&[t.clone(), t.pow(2), one.clone(), t.pow(3)]));
    }
    let r = induced_family_action(&gtau()).unwrap();
    let swap = FMatrix::from_rows(vec![
        vec![z.clone(), one.clone(), z.clone(), z.clone()],
        vec![one.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), z.clone(), one.clone()],
        vec![z.clone(), z.clone(), one.clone(), z.clone()],
    ]);
    assert_eq!(r, swap);
}

#[test]
fn stabilizers() {
    let p = |c: &[i64]| FamilyPoint::from_ints(FamilyTag::F21, c).unwrap();
    assert_eq!(stabilizer_check(&p(&[1, 2, 3, 5])).order, Some(1));
    assert_eq!(stabilizer_check(&p(&[1, 2, 3, 24])).order, Some(2));
    assert_eq!(stabilizer_check(&p(&[1, 1, 0, 0])).order, Some(6));
}
