use cubic7::exactnum::*;
use num_rational::BigRational;
use proptest::prelude::*;

fn n(s: &str) -> AlgebraicNumber {
    parse_number(s).unwrap()
}

#[test]
fn roots_of_unity() {
    let f = cyclotomic(7);
    let z = AlgebraicNumber::zeta_power(&f, 1);
    assert!((&z * &z.pow(6)).is_one());
    let mut s = AlgebraicNumber::zero(&f);
    for k in 0..7 {
        s = &s + &z.pow(k);
    }
    assert!(s.is_zero());
}

#[test]
fn signs() {
    assert_eq!(AlgebraicNumber::zero(&rationals()).sign().unwrap(), Sign::Zero);
    assert_eq!(n("sqrt21 - 4").sign().unwrap(), Sign::Positive);
    assert_eq!(n("(sqrt3 - sqrt7)/2").sign().unwrap(), Sign::Negative);
    assert_eq!(n("zeta7 + zeta7^6 - 1").sign().unwrap(), Sign::Positive);
    assert_eq!(n("zeta7 + zeta7^6").sign().unwrap(), Sign::Positive);
    assert_eq!(n("zeta7^2 + zeta7^5").sign().unwrap(), Sign::Negative);
    assert_eq!(n("zeta7").sign(), Err(NumError::NotRealEmbedding));
    assert_eq!(n("sqrt-7").sign(), Err(NumError::NotRealEmbedding));
}

#[test]
fn composites() {
    let f = compose_fields(&quadratic(3), &quadratic(7)).unwrap();
    assert_eq!(f.degree(), 4);
    assert!(sqrt_of(21, &f).is_some());
    let g = compose_fields(&cyclotomic(3), &cyclotomic(7)).unwrap();
    assert_eq!(g.kind(), &FieldKind::Cyclotomic(21));
    let h = compose_fields(&rationals(), &quadratic(2)).unwrap();
    assert_eq!(h.kind(), &FieldKind::Quadratic(2));
    let k = multiquadratic(&[2, 3, 7]);
    assert_eq!(k.degree(), 8);
    assert_eq!(compose_fields(&quadratic(6), &quadratic(14)).unwrap().degree(), 4);
}

#[test]
fn gauss_sum_square_roots() {
    // sqrt-7 equals the quadratic Gauss sum in Q(zeta7)
    let f = cyclotomic(7);
    let g = parse_number_in("zeta7 + zeta7^2 + zeta7^4 - zeta7^3 - zeta7^5 - zeta7^6", &f).unwrap();
    assert_eq!(g, n("sqrt-7"));
    let z24 = cyclotomic(24);
    for d in [2i64, 3, 6, -1, -2, -3, -6] {
        let r = sqrt_of(d, &z24).unwrap();
        assert_eq!(&r * &r, AlgebraicNumber::from_int(&z24, d));
    }
    // designated root is the principal one
    let r2 = sqrt_of(2, &z24).unwrap();
    assert_eq!(r2.sign().unwrap(), Sign::Positive);
    let (re, im) = sqrt_of(-3, &z24).unwrap().to_complex_f64();
    assert!(re.abs() < 1e-12 && (im - 3f64.sqrt()).abs() < 1e-12);
}

#[test]
fn cyclotomic_constant_e() {
    // a = 2 sqrt2/7 + 1/7 and b = -3 sqrt2/14 + 1/7 satisfy a^2 + ... relations used for E
    let a = n("2*sqrt2/7 + 1/7");
    let b = n("-3*sqrt2/14 + 1/7");
    // a + 2b... sum of row of E is 3a + 4b = 1
    assert!((&a.scale(&rat(3, 1)) + &b.scale(&rat(4, 1))).is_one());
}

#[test]
fn serialization() {
    let x = n("1/7 + 2/7*sqrt2");
    assert_eq!(x.serialize(), "(1/7, 2/7) over a^2 - 2");
    assert_eq!(x.expr_string(), "1/7 + 2/7*sqrt2");
    let k = multiquadratic(&[2, 3, 7]);
    let y = parse_number_in("sqrt21/42 - 1/2 + sqrt6", &k).unwrap();
    assert_eq!(y.expr_string(), "-1/2 + sqrt6 + 1/42*sqrt21");
    assert_eq!(parse_number_in(&y.expr_string(), &k).unwrap(), y);
    let w = n("3*(1 + sqrt-7)/4");
    assert_eq!(parse_number(&w.expr_string()).unwrap(), w);
}

#[test]
fn errors() {
    assert_eq!(AlgebraicNumber::zero(&cyclotomic(7)).inverse(), Err(NumError::DivisionByZero));
    assert!(parse_number("foo").is_err());
    assert!(parse_number("1/0").is_err());
}

fn small(k: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-20i64..20, 1i64..6), k)
}

fn build(f: &Field, c: &[(i64, i64)]) -> AlgebraicNumber {
    AlgebraicNumber::from_coords(f, c.iter().map(|(p, q)| rat(*p, *q)).collect())
}

fn catalog() -> Vec<Field> {
    vec![
        cyclotomic(3),
        cyclotomic(4),
        cyclotomic(7),
        cyclotomic(8),
        cyclotomic(12),
        cyclotomic(21),
        quadratic(21),
        quadratic(-7),
        multiquadratic(&[2, 3, 7]),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn field_axioms(i in 0usize..9, a in small(12), b in small(12), c in small(12)) {
        let f = catalog()[i].clone();
        let d = f.degree();
        let (x, y, z) = (build(&f, &a[..d]), build(&f, &b[..d]), build(&f, &c[..d]));
        prop_assert_eq!((&x + &y) + &z, &x + (&y + &z));
        prop_assert_eq!(&x * (&y + &z), &x * &y + &x * &z);
        if !x.is_zero() {
            prop_assert!((&x * &x.inverse().unwrap()).is_one());
        }
        if x.is_real() && !x.is_zero() {
            // interval refinement terminates away from zero
            prop_assert_ne!(x.sign().unwrap(), Sign::Zero);
        }
    }

    #[test]
    fn quadratic_conjugation(d in prop::sample::select(vec![2i64, 3, 21, -7, -3]), a in small(2), b in small(2)) {
        let f = quadratic(d);
        let (x, y) = (build(&f, &a), build(&f, &b));
        prop_assert_eq!((&x * &y).quadratic_conj(), x.quadratic_conj() * y.quadratic_conj());
        prop_assert_eq!((&x + &y).quadratic_conj(), x.quadratic_conj() + y.quadratic_conj());
        let (p, q) = (x.coord(0), x.coord(1));
        prop_assert_eq!(x.quadratic_norm(), &p * &p - BigRational::from_integer(d.into()) * &q * &q);
        prop_assert_eq!(AlgebraicNumber::from_rational(&f, &x.quadratic_norm()), &x * x.quadratic_conj());
    }
}
