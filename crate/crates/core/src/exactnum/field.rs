use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::element::AlgebraicNumber;
use super::interval::{cos_sin_enclosure, pi_enclosure, sqrt_enclosure, Interval};
use super::ratmat::{self, RatMat};
use super::NumError;

/// Catalog key of a number field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldKind {
    Rational,
    /// Q(zeta_n), n >= 3 and n not 2 mod 4.
    Cyclotomic(u32),
    /// Q(sqrt d), d squarefree, d != 0, 1.
    Quadratic(i64),
    /// Q(sqrt g1, ..., sqrt gk), canonical independent positive generators, k >= 2.
    Multiquadratic(Vec<u64>),
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::Cyclotomic(n) => write!(f, "Q(zeta{n})"),
            FieldKind::Quadratic(d) => write!(f, "Q(sqrt{d})"),
            FieldKind::Multiquadratic(g) => {
                let parts: Vec<String> = g.iter().map(|x| format!("sqrt{x}")).collect();
                write!(f, "Q({})", parts.join(","))
            }
        }
    }
}

/// A number field Q[a]/(m(a)) with a designated complex embedding.
///
/// Cyclotomic fields embed with zeta_n = exp(2 pi i / n); quadratic and
/// multiquadratic fields take positive square roots (i*sqrt|d| for d < 0).
pub struct NumberField {
    pub(crate) kind: FieldKind,
    pub(crate) modulus: Vec<BigInt>,
    pub(crate) degree: usize,
    /// Names of the display basis ("" for 1).
    pub(crate) basis_names: Vec<String>,
    /// Radicand of each display basis element for real radical fields.
    pub(crate) radicands: Vec<u64>,
    /// display = to_display * power; None means the display basis is the power basis.
    pub(crate) to_display: Option<RatMat>,
    pub(crate) from_display: Option<RatMat>,
}

pub type Field = Arc<NumberField>;

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}
impl Eq for NumberField {}

impl NumberField {
    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Monic integer minimal polynomial, coefficients low to high.
    pub fn minimal_polynomial(&self) -> &[BigInt] {
        &self.modulus
    }

    pub fn is_real(&self) -> bool {
        match &self.kind {
            FieldKind::Rational | FieldKind::Multiquadratic(_) => true,
            FieldKind::Quadratic(d) => *d > 0,
            FieldKind::Cyclotomic(_) => false,
        }
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    /// Minimal polynomial rendered in the variable `a`.
    pub fn modulus_string(&self) -> String {
        poly_string(&self.modulus, "a")
    }

    /// Rational interval enclosing the designated embedding of the generator,
    /// as (real part, imaginary part).
    pub fn embedding_seed(self: &Arc<Self>, bits: u32) -> (Interval, Interval) {
        let mut c = vec![BigRational::zero(); self.degree];
        if self.degree > 1 {
            c[1] = BigRational::one();
        }
        let g = AlgebraicNumber::from_coords(self, c);
        self.enclosure(&g, bits)
    }

    /// Enclosure (re, im) of the designated embedding of x.
    pub fn enclosure(&self, x: &AlgebraicNumber, bits: u32) -> (Interval, Interval) {
        match &self.kind {
            FieldKind::Rational => (Interval::point(x.coord(0)), Interval::zero()),
            FieldKind::Quadratic(d) if *d < 0 => {
                let s = sqrt_enclosure(&BigInt::from(-d), bits + 8);
                (Interval::point(x.coord(0)), s.scale(&x.coord(1)))
            }
            FieldKind::Quadratic(_) | FieldKind::Multiquadratic(_) => {
                let disp = x.display_coords();
                let mut acc = Interval::zero();
                for (c, r) in disp.iter().zip(&self.radicands) {
                    if c.is_zero() {
                        continue;
                    }
                    let s = sqrt_enclosure(&BigInt::from(*r), bits + 8);
                    acc = acc.add(&s.scale(c));
                }
                (acc.round_out(bits + 4), Interval::zero())
            }
            FieldKind::Cyclotomic(n) => {
                let two_pi = pi_enclosure(bits + 16)
                    .scale(&BigRational::new(BigInt::from(2), BigInt::from(*n)));
                let (c, s) = cos_sin_enclosure(&two_pi, bits + 16);
                // Horner in complex interval arithmetic
                let coords = x.coords();
                let mut re = Interval::zero();
                let mut im = Interval::zero();
                for k in (0..self.degree).rev() {
                    let nre = re.mul(&c).sub(&im.mul(&s));
                    let nim = re.mul(&s).add(&im.mul(&c));
                    re = nre.add(&Interval::point(coords[k].clone())).round_out(bits + 12);
                    im = nim.round_out(bits + 12);
                }
                (re, im)
            }
        }
    }
}

fn poly_string(c: &[BigInt], var: &str) -> String {
    let mut out = String::new();
    for (k, coef) in c.iter().enumerate().rev() {
        if coef.is_zero() {
            continue;
        }
        let neg = coef.is_negative();
        let abs = coef.abs();
        let mon = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        let body = if k == 0 {
            abs.to_string()
        } else if abs.is_one() {
            mon
        } else {
            format!("{abs}*{mon}")
        };
        if out.is_empty() {
            out = if neg { format!("-{body}") } else { body };
        } else {
            out += if neg { " - " } else { " + " };
            out += &body;
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

// ---------------------------------------------------------------- catalog

fn catalog() -> &'static Mutex<HashMap<FieldKind, Field>> {
    static C: OnceLock<Mutex<HashMap<FieldKind, Field>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn lookup_or_build(kind: FieldKind, build: impl FnOnce() -> NumberField) -> Field {
    if let Some(f) = catalog().lock().unwrap().get(&kind) {
        return f.clone();
    }
    let f = Arc::new(build());
    catalog().lock().unwrap().entry(kind).or_insert(f).clone()
}

pub fn rationals() -> Field {
    lookup_or_build(FieldKind::Rational, || NumberField {
        kind: FieldKind::Rational,
        modulus: vec![BigInt::zero(), BigInt::one()],
        degree: 1,
        basis_names: vec![String::new()],
        radicands: vec![1],
        to_display: None,
        from_display: None,
    })
}

pub(crate) fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = BigInt::from(-1);
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = poly_exact_div(&p, &cyclotomic_poly(d));
        }
    }
    p
}

fn poly_exact_div(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    // b monic
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let dq = r.len() - 1 - db;
    let mut q = vec![BigInt::zero(); dq + 1];
    for k in (0..=dq).rev() {
        let c = r[k + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        q[k] = c;
    }
    debug_assert!(r.iter().all(|x| x.is_zero()));
    q
}

/// Q(zeta_n).  Panics for n = 0 or n = 2 mod 4 with n > 2.
pub fn cyclotomic(n: u32) -> Field {
    assert!(n > 0 && (n <= 2 || n % 4 != 2), "unsupported conductor {n}");
    if n <= 2 {
        return rationals();
    }
    lookup_or_build(FieldKind::Cyclotomic(n), || {
        let modulus = cyclotomic_poly(n);
        let degree = modulus.len() - 1;
        let g = match n {
            3 => "omega".to_string(),
            4 => "i".to_string(),
            _ => format!("zeta{n}"),
        };
        let basis_names = (0..degree)
            .map(|k| match k {
                0 => String::new(),
                1 => g.clone(),
                _ => format!("{g}^{k}"),
            })
            .collect();
        NumberField {
            kind: FieldKind::Cyclotomic(n),
            modulus,
            degree,
            basis_names,
            radicands: vec![],
            to_display: None,
            from_display: None,
        }
    })
}

pub(crate) fn is_squarefree(d: i64) -> bool {
    let mut m = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p * p) {
            return false;
        }
        if m.is_multiple_of(p) {
            m /= p;
        }
        p += 1;
    }
    true
}

/// Q(sqrt d) for squarefree d.  d = 1 gives Q.
pub fn quadratic(d: i64) -> Field {
    assert!(d != 0 && is_squarefree(d), "d must be squarefree and nonzero");
    if d == 1 {
        return rationals();
    }
    lookup_or_build(FieldKind::Quadratic(d), || NumberField {
        kind: FieldKind::Quadratic(d),
        modulus: vec![BigInt::from(-d), BigInt::zero(), BigInt::one()],
        degree: 2,
        basis_names: vec![String::new(), format!("sqrt{d}")],
        radicands: if d > 0 { vec![1, d as u64] } else { vec![] },
        to_display: None,
        from_display: None,
    })
}

fn sqfree_mul(a: u64, b: u64) -> (u64, u64) {
    // sqrt a * sqrt b = g * sqrt(ab/g^2)
    let g = a.gcd(&b);
    (g, (a / g) * (b / g))
}

/// All squarefree products of subsets of the generators, sorted, including 1.
fn span(gens: &[u64]) -> Vec<u64> {
    let mut s = vec![1u64];
    for &g in gens {
        let extra: Vec<u64> = s.iter().map(|&x| sqfree_mul(x, g).1).collect();
        for e in extra {
            if !s.contains(&e) {
                s.push(e);
            }
        }
    }
    s.sort();
    s
}

fn canonical_gens(gens: &[u64]) -> Vec<u64> {
    let all = span(gens);
    let mut picked: Vec<u64> = vec![];
    for &x in all.iter().skip(1) {
        if !span(&picked).contains(&x) {
            picked.push(x);
        }
    }
    picked
}

/// Real multiquadratic field generated by square roots of positive squarefree integers.
pub fn multiquadratic(gens: &[u64]) -> Field {
    assert!(gens.iter().all(|&g| g > 0 && is_squarefree(g as i64)));
    let canon = canonical_gens(gens);
    match canon.len() {
        0 => return rationals(),
        1 => return quadratic(canon[0] as i64),
        _ => {}
    }
    lookup_or_build(FieldKind::Multiquadratic(canon.clone()), || build_multiquadratic(canon))
}

fn native_mul(basis: &[u64], x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); basis.len()];
    for (i, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let (g, r) = sqfree_mul(basis[i], basis[j]);
            let k = basis.binary_search(&r).unwrap();
            out[k] += a * b * BigRational::from_integer(BigInt::from(g));
        }
    }
    out
}

fn build_multiquadratic(gens: Vec<u64>) -> NumberField {
    let basis = span(&gens);
    let n = basis.len();
    // primitive element theta = sum of sqrt(g)
    let mut theta = vec![BigRational::zero(); n];
    for g in &gens {
        theta[basis.binary_search(g).unwrap()] = BigRational::one();
    }
    let mut pows = vec![];
    let mut cur = vec![BigRational::zero(); n];
    cur[0] = BigRational::one();
    for _ in 0..=n {
        pows.push(cur.clone());
        cur = native_mul(&basis, &cur, &theta);
    }
    // columns theta^0..theta^{n-1}
    let to_display: RatMat =
        (0..n).map(|r| (0..n).map(|c| pows[c][r].clone()).collect()).collect();
    let from_display = ratmat::inverse(&to_display).expect("theta is primitive");
    let c = ratmat::mat_vec(&from_display, &pows[n]);
    let mut modulus: Vec<BigInt> = c
        .iter()
        .map(|x| {
            assert!(x.is_integer(), "minimal polynomial must be integral");
            -x.to_integer()
        })
        .collect();
    modulus.push(BigInt::one());
    let basis_names = basis
        .iter()
        .map(|&r| if r == 1 { String::new() } else { format!("sqrt{r}") })
        .collect();
    NumberField {
        kind: FieldKind::Multiquadratic(gens),
        modulus,
        degree: n,
        basis_names,
        radicands: basis,
        to_display: Some(to_display),
        from_display: Some(from_display),
    }
}

// ------------------------------------------------------------ injections

fn conductor(d: i64) -> u32 {
    let a = d.unsigned_abs() as u32;
    if d.rem_euclid(4) == 1 {
        a
    } else {
        4 * a
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

fn in_span(d: u64, gens: &[u64]) -> bool {
    span(gens).contains(&d)
}

/// True when F1 embeds canonically into F2.
pub fn embeds(f1: &NumberField, f2: &NumberField) -> bool {
    use FieldKind::*;
    match (&f1.kind, &f2.kind) {
        (Rational, _) => true,
        (a, b) if a == b => true,
        (Cyclotomic(m), Cyclotomic(n)) => n % m == 0,
        (Quadratic(d), Cyclotomic(n)) => n % conductor(*d) == 0,
        (Quadratic(d), Multiquadratic(g)) => *d > 0 && in_span(*d as u64, g),
        (Multiquadratic(a), Multiquadratic(b)) => a.iter().all(|x| in_span(*x, b)),
        (Multiquadratic(a), Cyclotomic(n)) => a.iter().all(|x| n % conductor(*x as i64) == 0),
        (Cyclotomic(3), Quadratic(-3)) | (Cyclotomic(4), Quadratic(-1)) => true,
        _ => false,
    }
}

/// Smallest catalog field containing both.
pub fn compose_fields(f1: &Field, f2: &Field) -> Result<Field, NumError> {
    use FieldKind::*;
    if embeds(f1, f2) {
        return Ok(f2.clone());
    }
    if embeds(f2, f1) {
        return Ok(f1.clone());
    }
    let cond = |k: &FieldKind| -> Option<u32> {
        match k {
            Cyclotomic(n) => Some(*n),
            Quadratic(d) => Some(conductor(*d)),
            Multiquadratic(g) => Some(g.iter().fold(1, |acc, x| lcm(acc, conductor(*x as i64)))),
            Rational => Some(1),
        }
    };
    let real_gens = |k: &FieldKind| -> Option<Vec<u64>> {
        match k {
            Quadratic(d) if *d > 0 => Some(vec![*d as u64]),
            Multiquadratic(g) => Some(g.clone()),
            _ => None,
        }
    };
    if let (Some(a), Some(b)) = (real_gens(&f1.kind), real_gens(&f2.kind)) {
        let mut all = a;
        all.extend(b);
        return Ok(multiquadratic(&all));
    }
    match (cond(&f1.kind), cond(&f2.kind)) {
        (Some(a), Some(b)) => {
            let mut n = lcm(a, b);
            if n % 4 == 2 {
                n /= 2;
            }
            if n > 420 {
                return Err(NumError::UnsupportedComposite(f1.kind.to_string(), f2.kind.to_string()));
            }
            Ok(cyclotomic(n))
        }
        _ => Err(NumError::UnsupportedComposite(f1.kind.to_string(), f2.kind.to_string())),
    }
}

fn legendre(a: u32, p: u32) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let mut r: u64 = 1;
    let mut b = a as u64;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            m /= p;
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// The designated square root of d inside Q(zeta_n) (requires conductor(d) | n).
pub(crate) fn sqrt_in_cyclotomic(d: i64, f: &Field) -> AlgebraicNumber {
    let FieldKind::Cyclotomic(n) = f.kind else { unreachable!() };
    let zeta = |k: u32| AlgebraicNumber::zeta_power(f, k as i64);
    let mut g = AlgebraicNumber::one(f);
    let mut m = 0; // primes = 3 mod 4
    let mut two = false;
    for p in prime_factors(d.unsigned_abs()) {
        if p == 2 {
            two = true;
            continue;
        }
        let p = p as u32;
        let step = n / p;
        let mut gp = AlgebraicNumber::zero(f);
        for a in 1..p {
            let t = zeta(a * step);
            gp = if legendre(a, p) == 1 { &gp + &t } else { &gp - &t };
        }
        if p % 4 == 3 {
            m += 1;
        }
        g = &g * &gp;
    }
    // sqrt|d| = i^{-m} * G * sqrt(2^e); sqrt d = sqrt|d| * (i if d < 0)
    let s = (-(m as i64) + if d < 0 { 1 } else { 0 }).rem_euclid(4);
    // i^s * sqrt2^e as a root of unity combination
    let factor = match (s, two) {
        (0, false) => AlgebraicNumber::one(f),
        (2, false) => -AlgebraicNumber::one(f),
        (1, false) | (3, false) => {
            let i = zeta(n / 4);
            if s == 1 { i } else { -i }
        }
        (s, true) => {
            // sqrt2 = z8 + z8^7, i*sqrt2 = z8 + z8^3
            let z = |k: u32| zeta(k * n / 8);
            let r2 = &z(1) + &z(7);
            let ir2 = &z(1) + &z(3);
            match s {
                0 => r2,
                1 => ir2,
                2 => -r2,
                _ => -ir2,
            }
        }
        _ => unreachable!(),
    };
    let r = &g * &factor;
    debug_assert_eq!(&r * &r, AlgebraicNumber::from_int(f, d));
    r
}

fn native_to_power(f: &NumberField, native: &[BigRational]) -> Vec<BigRational> {
    ratmat::mat_vec(f.from_display.as_ref().unwrap(), native)
}

/// sqrt(d) inside a real radical field, if present.
pub(crate) fn sqrt_in_real(d: u64, f: &Field) -> Option<AlgebraicNumber> {
    match &f.kind {
        FieldKind::Quadratic(e) if *e as u64 == d => {
            Some(AlgebraicNumber::from_coords(f, vec![BigRational::zero(), BigRational::one()]))
        }
        FieldKind::Multiquadratic(_) => {
            let k = f.radicands.binary_search(&d).ok()?;
            let mut v = vec![BigRational::zero(); f.degree];
            v[k] = BigRational::one();
            Some(AlgebraicNumber::from_coords(f, native_to_power(f, &v)))
        }
        _ => None,
    }
}

fn injection_cache() -> &'static Mutex<HashMap<(FieldKind, FieldKind), AlgebraicNumber>> {
    static C: OnceLock<Mutex<HashMap<(FieldKind, FieldKind), AlgebraicNumber>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Image of the power-basis generator of `src` inside `dst`.
pub(crate) fn generator_image(src: &Field, dst: &Field) -> Option<AlgebraicNumber> {
    use FieldKind::*;
    if !embeds(src, dst) {
        return None;
    }
    let key = (src.kind.clone(), dst.kind.clone());
    if let Some(x) = injection_cache().lock().unwrap().get(&key) {
        return Some(x.clone());
    }
    let img = match (&src.kind, &dst.kind) {
        (Rational, _) => AlgebraicNumber::zero(dst),
        (a, b) if a == b => {
            let mut c = vec![BigRational::zero(); dst.degree];
            c[1] = BigRational::one();
            AlgebraicNumber::from_coords(dst, c)
        }
        (Cyclotomic(m), Cyclotomic(n)) => AlgebraicNumber::zeta_power(dst, (n / m) as i64),
        (Quadratic(d), Cyclotomic(_)) => sqrt_in_cyclotomic(*d, dst),
        (Quadratic(d), Multiquadratic(_)) => sqrt_in_real(*d as u64, dst)?,
        (Multiquadratic(a), Multiquadratic(_)) => {
            let mut acc = AlgebraicNumber::zero(dst);
            for g in a {
                acc = &acc + &sqrt_in_real(*g, dst)?;
            }
            acc
        }
        (Multiquadratic(a), Cyclotomic(_)) => {
            let mut acc = AlgebraicNumber::zero(dst);
            for g in a {
                acc = &acc + &sqrt_in_cyclotomic(*g as i64, dst);
            }
            acc
        }
        (Cyclotomic(3), Quadratic(-3)) => {
            let s = AlgebraicNumber::from_coords(dst, vec![BigRational::zero(), BigRational::one()]);
            (&s - &AlgebraicNumber::one(dst)).scale(&BigRational::new(1.into(), 2.into()))
        }
        (Cyclotomic(4), Quadratic(-1)) => {
            AlgebraicNumber::from_coords(dst, vec![BigRational::zero(), BigRational::one()])
        }
        _ => return None,
    };
    injection_cache().lock().unwrap().insert(key, img.clone());
    Some(img)
}

/// Square root of an integer d in the given field, when the field contains it.
pub fn sqrt_of(d: i64, f: &Field) -> Option<AlgebraicNumber> {
    if d == 0 {
        return Some(AlgebraicNumber::zero(f));
    }
    // strip square factors
    let mut core = d.signum();
    let mut outside = 1i64;
    for p in prime_factors(d.unsigned_abs()) {
        let p = p as i64;
        let mut e = 0;
        let mut m = d.abs();
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        outside *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p;
        }
    }
    let base = if core == 1 {
        AlgebraicNumber::one(f)
    } else {
        let home = quadratic(core);
        
        generator_image(&home, f)?
    };
    Some(base.scale(&BigRational::from_integer(BigInt::from(outside))))
}

pub(crate) fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
