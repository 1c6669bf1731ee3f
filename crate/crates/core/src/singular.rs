//! Singular loci of F_{a,b} and of the L2(7) pencil.
//!
//! Singular points of F_{a,b} come from the parametrization
//! [1 : t : w z^l : t w z^-2l : w^-1 z^-2l : t w^-1 z^-3l] with w = omega^k,
//! z = zeta7, t = z^-l tau and tau a common root of
//! w tau^2 + 2 tau + a and b tau^2 + 2 w tau + 1.  Common roots are found by
//! a polynomial gcd, so no square roots are ever adjoined.  Every point is
//! re-checked by exact gradient evaluation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::exactnum::{compose_fields, cyclotomic, parse_number, rationals, AlgebraicNumber, Field, NumError};
use crate::groups::{self, d_t, GroupError};
use crate::linalg::{common_field, FMatrix};
use crate::polyalg::{f1, f2, f_ab, family_coords, monomials, FamilyPoint, FamilyTag, Monomial, Poly, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SingError {
    #[error("point is not singular")]
    NotSingular,
    #[error("no assignment of the quadratic monomials parametrizes the singular locus")]
    ParametrizationMismatch,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Num(#[from] NumError),
}

fn omega(k: i64) -> AlgebraicNumber {
    groups::omega(k)
}

/// G(a,b) = a^2 b^2 - 6ab + 4a + 4b - 3.
pub fn g_curve(a: &AlgebraicNumber, b: &AlgebraicNumber) -> AlgebraicNumber {
    let q = rationals();
    let n = |x| AlgebraicNumber::from_int(&q, x);
    let ab = a * b;
    &(&(&(&ab * &ab) - &(&ab * &n(6))) + &(&(a + b) * &n(4))) - &n(3)
}

/// Membership of (a,b) in omega^j Z(G) for j = 0,1,2, i.e. G(omega^-j a, omega^-j b) = 0.
pub fn discriminant_curve(a: &AlgebraicNumber, b: &AlgebraicNumber) -> [bool; 3] {
    let mut out = [false; 3];
    for (j, o) in out.iter_mut().enumerate() {
        let w = omega(-(j as i64));
        *o = g_curve(&(&w * a), &(&w * b)).is_zero();
    }
    out
}

#[derive(Clone, Debug)]
pub struct SingularPoint {
    pub coords: Vec<AlgebraicNumber>,
    pub k: u32,
    pub l: u32,
    pub tau: AlgebraicNumber,
    pub t: AlgebraicNumber,
}

// ----------------------------------------------------- univariate helpers

type UPoly = Vec<AlgebraicNumber>;

fn trim(p: &mut UPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn urem(a: &UPoly, b: &UPoly) -> UPoly {
    let mut r = a.clone();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = b[db].inverse().unwrap();
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap() * &lead_inv;
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = &r[k + j] - &(&c * bj);
        }
        r.pop();
        trim(&mut r);
    }
    r
}

/// Monic gcd (empty vector for the zero polynomial).
pub fn ugcd(a: &UPoly, b: &UPoly) -> UPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = urem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        let inv = l.inverse().unwrap();
        x = x.iter().map(|c| c * &inv).collect();
    }
    x
}

/// Working field for (a,b): contains a, b, omega and zeta7.
pub fn working_field(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Field {
    let f = common_field([a, b].into_iter());
    compose_fields(&f, &cyclotomic(21)).expect("catalog composite")
}

/// The common roots tau of the two branch quadratics for each k.
pub fn branch_roots(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Vec<(u32, AlgebraicNumber)> {
    let f = working_field(a, b);
    let (a, b) = (a.inject(&f).unwrap(), b.inject(&f).unwrap());
    let two = AlgebraicNumber::from_int(&f, 2);
    let one = AlgebraicNumber::one(&f);
    let mut out = vec![];
    for k in 0..3u32 {
        let w = omega(k as i64).inject(&f).unwrap();
        let q1 = vec![a.clone(), two.clone(), w.clone()];
        let q2 = vec![one.clone(), &two * &w, b.clone()];
        let g = ugcd(&q1, &q2);
        match g.len() {
            0 | 1 => {}
            2 => out.push((k, -&g[0])),
            _ => {
                // q1 and q2 proportional: a = b = w^2, double root -1/w
                let disc = &(&g[1] * &g[1]) - &(&g[0] * &AlgebraicNumber::from_int(&f, 4));
                assert!(disc.is_zero(), "proportional branch quadratics have a double root");
                out.push((k, -&w.inverse().unwrap()));
            }
        }
    }
    out
}

/// All singular points of F_{a,b}, each re-verified by exact gradient vanishing.
pub fn singular_points(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Vec<SingularPoint> {
    let f = working_field(a, b);
    let form = f_ab(a, b);
    let jac = form.jacobian();
    let mut out = vec![];
    for (k, tau) in branch_roots(a, b) {
        let w = omega(k as i64).inject(&f).unwrap();
        let wi = w.inverse().unwrap();
        for l in 0..7u32 {
            let z = |e: i64| AlgebraicNumber::zeta_power(&cyclotomic(7), e * l as i64).inject(&f).unwrap();
            let t = &z(-1) * &tau;
            let coords = vec![
                AlgebraicNumber::one(&f),
                t.clone(),
                &w * &z(1),
                &(&t * &w) * &z(-2),
                &wi * &z(-2),
                &(&t * &wi) * &z(-3),
            ];
            assert!(jac.iter().all(|d| d.eval(&coords).is_zero()), "parametrized point is singular");
            out.push(SingularPoint { coords, k, l, tau: tau.clone(), t });
        }
    }
    out
}

// ------------------------------------------------------------ classification

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SingTag {
    A1,
    A2,
    HigherCorank,
    Nonisolated,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularityClass {
    pub tag: SingTag,
    pub corank: usize,
    pub hessian_rank: usize,
}

/// Classify an affine singular point of f by Hessian corank and the cubic
/// term along the kernel direction.
pub fn classify_affine(f: &Poly, p: &[AlgebraicNumber]) -> Result<SingularityClass, SingError> {
    if !f.eval(p).is_zero() || f.jacobian().iter().any(|d| !d.eval(p).is_zero()) {
        return Err(SingError::NotSingular);
    }
    let n = f.nvars();
    let firsts = f.jacobian();
    let h = FMatrix::from_fn(n, n, |i, j| firsts[i].derivative(j).eval(p));
    let rank = h.rank();
    let corank = n - rank;
    let tag = match corank {
        0 => SingTag::A1,
        1 => {
            let v = &h.nullspace()[0];
            // f(p + s v) as a polynomial in s
            let subs: Vec<Poly> = (0..n)
                .map(|i| {
                    let mut q = Poly::constant(1, p[i].clone());
                    q = &q + &Poly::var(1, 0).scale(&v[i]);
                    q
                })
                .collect();
            let g = f.compose(&subs)?;
            let c3 = g.coeff_or_zero(&Monomial(vec![3]));
            if c3.is_zero() {
                SingTag::HigherCorank
            } else {
                SingTag::A2
            }
        }
        _ => SingTag::HigherCorank,
    };
    Ok(SingularityClass { tag, corank, hessian_rank: rank })
}

/// Classify a singular point of a projective hypersurface in the chart of its
/// first nonzero coordinate.
pub fn classify(form: &Poly, p: &[AlgebraicNumber]) -> Result<SingularityClass, SingError> {
    let chart = p.iter().position(|x| !x.is_zero()).ok_or(SingError::NotSingular)?;
    let n = form.nvars();
    let inv = p[chart].inverse()?;
    let q: Vec<AlgebraicNumber> = (0..n).filter(|&i| i != chart).map(|i| &p[i] * &inv).collect();
    let one = AlgebraicNumber::one(&rationals());
    let subs: Vec<Poly> = (0..n)
        .map(|i| match i.cmp(&chart) {
            std::cmp::Ordering::Equal => Poly::constant(n - 1, one.clone()),
            std::cmp::Ordering::Less => Poly::var(n - 1, i),
            std::cmp::Ordering::Greater => Poly::var(n - 1, i - 1),
        })
        .collect();
    let affine = form.compose(&subs)?;
    classify_affine(&affine, &q)
}

// ----------------------------------------- no zero coordinates (certificate)

const PRIME: u64 = 2_147_483_647;

fn modp(r: &BigRational) -> Option<u64> {
    let p = BigInt::from(PRIME);
    let n = r.numer().mod_floor(&p).to_u64()?;
    let d = r.denom().mod_floor(&p).to_u64()?;
    if d == 0 {
        return None;
    }
    Some(n * powmod(d, PRIME - 2) % PRIME)
}

fn powmod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    b %= PRIME;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % PRIME;
        }
        b = b * b % PRIME;
        e >>= 1;
    }
    r
}

fn rank_modp(mut m: Vec<Vec<u64>>, cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(rank, p);
        let inv = powmod(m[rank][c], PRIME - 2);
        for j in c..cols {
            m[rank][j] = m[rank][j] * inv % PRIME;
        }
        let piv = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && row[c] != 0 {
                let f = row[c];
                for j in c..cols {
                    row[j] = (row[j] + PRIME - f * piv[j] % PRIME) % PRIME;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Certify that F_{a,b} (a,b rational) has no singular point with x_i = 0:
/// the gradient restricted to x_i = 0 generates every form of some degree
/// D <= 8, checked by full rank modulo a prime (which implies full rank over Q).
/// Returns the degree D that worked.
pub fn no_zero_coordinate_certificate(a: &BigRational, b: &BigRational, i: usize) -> Option<u32> {
    let q = rationals();
    let form = f_ab(&AlgebraicNumber::from_rational(&q, a), &AlgebraicNumber::from_rational(&q, b));
    let zero = AlgebraicNumber::zero(&q);
    let subs: Vec<Poly> = (0..6)
        .map(|j| match j.cmp(&i) {
            std::cmp::Ordering::Equal => Poly::constant(5, zero.clone()),
            std::cmp::Ordering::Less => Poly::var(5, j),
            std::cmp::Ordering::Greater => Poly::var(5, j - 1),
        })
        .collect();
    let gens: Vec<Poly> = form.jacobian().iter().map(|d| d.compose(&subs).unwrap()).collect();
    for deg in 6..=8u32 {
        let target = monomials(5, deg);
        let idx: std::collections::HashMap<&Monomial, usize> = target.iter().enumerate().map(|(k, m)| (m, k)).collect();
        let mut rows = vec![];
        for g in &gens {
            for m in monomials(5, deg - 2) {
                let mut row = vec![0u64; target.len()];
                for (gm, c) in g.terms() {
                    let r = c.to_rational()?;
                    row[idx[&gm.mul(&m)]] = modp(&r)?;
                }
                rows.push(row);
            }
        }
        if rank_modp(rows, target.len()) == target.len() {
            return Some(deg);
        }
    }
    None
}

// ------------------------------------------------------------- L2(7) pencil

#[derive(Clone, Debug, Serialize)]
pub struct Table1Row {
    pub lambda: String,
    pub expected: String,
    pub f21_coords: Vec<String>,
    pub twists: Vec<usize>,
    pub singular_count: Option<usize>,
    pub classes: Vec<SingTag>,
    pub nonisolated: bool,
    pub matches: bool,
}

/// F21 coordinates of S.f1 and S.f2.
pub fn pencil_f21_coords() -> Result<(FamilyPoint, FamilyPoint, FMatrix), SingError> {
    let s = groups::build_s()?;
    let c1 = family_coords(&f1().act(&s)?, FamilyTag::F21)?;
    let c2 = family_coords(&f2().act(&s)?, FamilyTag::F21)?;
    Ok((c1, c2, s))
}

/// The standard determinantal member [1,0,-2,-1].
pub fn x1_prime() -> FamilyPoint {
    FamilyPoint::from_ints(FamilyTag::F21, &[1, 0, -2, -1]).unwrap()
}

/// A matrix M with M . (form with F21 coordinates c) proportional to [1,0,-2,-1],
/// for c with c1 = 0 or c2 = 0.
pub fn determinantal_motion(c: &[AlgebraicNumber]) -> Option<FMatrix> {
    let (mut c, mut pre) = (c.to_vec(), None);
    if c[0].is_zero() {
        c = vec![c[1].clone(), c[0].clone(), c[3].clone(), c[2].clone()];
        pre = Some(groups::gtau());
    }
    if c[0].is_zero() || !c[1].is_zero() {
        return None;
    }
    let f = common_field(c.iter());
    let u = -(&c[2] / &(&c[0] * &AlgebraicNumber::from_int(&f, 2)));
    if u.is_zero() || &(&c[3] * &(&u * &u)) / &c[0] != AlgebraicNumber::from_int(&f, -1) {
        return None;
    }
    let d = d_t(&u);
    Some(match pre {
        Some(p) => &d * &p,
        None => d,
    })
}

/// Substitute x = v(z) for a list of six quadratic monomials in z1,z2,z3.
fn restrict_to(form: &Poly, slots: &[Monomial]) -> Poly {
    let one = AlgebraicNumber::one(&rationals());
    let subs: Vec<Poly> = slots.iter().map(|m| Poly::monomial(m.clone(), one.clone())).collect();
    form.compose(&subs).unwrap()
}

/// Substitute x = v(z) M.
fn restrict_moved(form: &Poly, slots: &[Monomial], m: &FMatrix) -> Poly {
    let one = AlgebraicNumber::one(&rationals());
    let v: Vec<Poly> = slots.iter().map(|s| Poly::monomial(s.clone(), one.clone())).collect();
    let subs: Vec<Poly> = (0..6)
        .map(|i| (0..6).fold(Poly::zero(3), |acc, j| &acc + &v[j].scale(m.get(j, i))))
        .collect();
    form.compose(&subs).unwrap()
}

fn zmono(e: [u16; 3]) -> Monomial {
    Monomial(e.to_vec())
}

/// The six slots as printed in the source listing (z1z3 appears twice).
pub fn veronese_listed() -> Vec<Monomial> {
    vec![zmono([0, 1, 1]), zmono([2, 0, 0]), zmono([1, 0, 1]), zmono([0, 2, 0]), zmono([1, 0, 1]), zmono([0, 0, 2])]
}

/// The listing with the repeated z1z3 in slot 5 replaced by the missing z1z2.
pub fn veronese_corrected() -> Vec<Monomial> {
    let mut v = veronese_listed();
    v[4] = zmono([1, 1, 0]);
    v
}

/// All bijections from the six quadratic monomials to the six slots along
/// which the gradient of the form vanishes identically.
pub fn veronese_assignments(form: &Poly) -> Vec<Vec<Monomial>> {
    let quads = monomials(3, 2);
    let jac = form.jacobian();
    let mut out = vec![];
    let mut perm: Vec<usize> = (0..6).collect();
    permutations(&mut perm, 0, &mut |p| {
        let slots: Vec<Monomial> = p.iter().map(|&i| quads[i].clone()).collect();
        if jac.iter().all(|d| restrict_to(d, &slots).is_zero()) {
            out.push(slots);
        }
    });
    out
}

fn permutations(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

/// The sextic z1^5 z3 + z2^5 z1 + z3^5 z2 - 5 z1^2 z2^2 z3^2.
pub fn sextic() -> Poly {
    Poly::parse("x1^5*x3 + x2^5*x1 + x3^5*x2 - 5*x1^2*x2^2*x3^2", 3).unwrap()
}

fn rank_of_jacobian_on_surface(form: &Poly, slots: &[Monomial], m: &FMatrix) -> bool {
    // gradient of the form vanishes on v(z) M identically
    form.jacobian().iter().all(|d| restrict_moved(d, slots, m).is_zero())
}

/// Reproduce the six singular members of the pencil f1 + lambda f2.
pub fn l27_table_scan() -> Result<Vec<Table1Row>, SingError> {
    let (c1, c2, s) = pencil_f21_coords()?;
    let rows: [(&str, &str); 6] = [
        ("3*(1+sqrt-7)/4", "determinantal"),
        ("3*(1-sqrt-7)/4", "determinantal"),
        ("-3/10", "7 nodes"),
        ("-15", "7 nodes"),
        ("-3/2", "14 nodes"),
        ("-3", "14 nodes"),
    ];
    let mut out = vec![];
    for (lam_s, expected) in rows {
        let lam = parse_number(lam_s)?;
        out.push(scan_member(&lam, lam_s, expected, &c1, &c2, &s)?);
    }
    Ok(out)
}

/// Singular data of one pencil member; `expected` is the table's label.
pub fn scan_member(
    lam: &AlgebraicNumber,
    lam_s: &str,
    expected: &str,
    c1: &FamilyPoint,
    c2: &FamilyPoint,
    s: &FMatrix,
) -> Result<Table1Row, SingError> {
    let form = &f1() + &f2().scale(lam);
    let c: Vec<AlgebraicNumber> = c1.coeffs.iter().zip(&c2.coeffs).map(|(x, y)| x + &(y * lam)).collect();
    let strs = c.iter().map(|x| x.expr_string()).collect();
    if c[0].is_zero() || c[1].is_zero() {
        // determinantal: singular along the moved Veronese surface
        let motion = determinantal_motion(&c).ok_or(SingError::ParametrizationMismatch)?;
        let m = &motion * s;
        let xp = crate::polyalg::family_embed(&x1_prime());
        if !xp.proj_eq(&form.act(&m)?) {
            return Err(SingError::ParametrizationMismatch);
        }
        let slots = veronese_assignments(&xp).into_iter().next().ok_or(SingError::ParametrizationMismatch)?;
        let nonisolated = rank_of_jacobian_on_surface(&form, &slots, &m);
        return Ok(Table1Row {
            lambda: lam_s.into(),
            expected: expected.into(),
            f21_coords: strs,
            twists: vec![],
            singular_count: None,
            classes: vec![SingTag::Nonisolated],
            nonisolated,
            matches: nonisolated && expected == "determinantal",
        });
    }
    // normalize to F_{a,b} by D_u, u = c1/c2
    let u = &c[0] / &c[1];
    let a = &(&c[2] * &c[1]) / &(&c[0] * &c[0]);
    let b = &(&c[3] * &c[0]) / &(&c[1] * &c[1]);
    let m = &d_t(&u) * s;
    let moved = form.act(&m)?;
    if !f_ab(&a, &b).proj_eq(&moved) {
        return Err(SingError::ParametrizationMismatch);
    }
    let flags = discriminant_curve(&a, &b);
    let pts = singular_points(&a, &b);
    let mut classes = vec![];
    for p in &pts {
        // pull back to the pencil member and re-verify there
        let y = m.vec_mul(&p.coords);
        let cl = classify(&form, &y)?;
        classes.push(cl.tag);
    }
    let n = pts.len();
    let want = match expected {
        "7 nodes" => 7,
        "14 nodes" => 14,
        _ => 0,
    };
    Ok(Table1Row {
        lambda: lam_s.into(),
        expected: expected.into(),
        f21_coords: strs,
        twists: (0..3).filter(|&j| flags[j]).collect(),
        singular_count: Some(n),
        matches: n == want && classes.iter().all(|t| *t == SingTag::A1),
        classes,
        nonisolated: false,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct VeroneseReport {
    pub gx1_coords: Vec<String>,
    pub gx1_is_standard: bool,
    pub valid_assignments: usize,
    pub listed_is_bijection: bool,
    pub corrected_is_valid: bool,
    pub restriction_f1_scalar: Option<String>,
    pub restriction_f2_scalar: Option<String>,
    pub x1_prime_restricts_to_zero: bool,
}

/// s = -2 zeta^5 - 2 zeta^3 - zeta - 1.
pub fn s_constant() -> AlgebraicNumber {
    parse_number("-2*zeta7^5 - 2*zeta7^3 - zeta7 - 1").unwrap()
}

pub fn veronese_sextic() -> Result<VeroneseReport, SingError> {
    let s = groups::build_s()?;
    let g = d_t(&s_constant().inverse()?);
    let gs = &g * &s;
    let lam = parse_number("3*(1-sqrt-7)/4")?;
    let x1 = &f1() + &f2().scale(&lam);
    let gx1 = family_coords(&x1.act(&gs)?, FamilyTag::F21)?;
    let k = gx1.coeffs.iter().find(|x| !x.is_zero()).unwrap().inverse()?;
    let normed: Vec<AlgebraicNumber> = gx1.coeffs.iter().map(|x| x * &k).collect();
    let standard = x1_prime().coeffs;
    let gx1_is_standard = normed.iter().zip(&standard).all(|(x, y)| x == y);
    let xp = crate::polyalg::family_embed(&x1_prime());
    let valid = veronese_assignments(&xp);
    if valid.is_empty() {
        return Err(SingError::ParametrizationMismatch);
    }
    let listed = veronese_listed();
    let mut sorted = listed.clone();
    sorted.sort();
    sorted.dedup();
    let corrected = veronese_corrected();
    let corrected_is_valid = valid.contains(&corrected);
    let target = sextic();
    let ratio = |f: &Poly| -> Option<String> {
        let r = restrict_moved(f, &corrected, &gs);
        target.scalar_ratio(&r).map(|l| l.expr_string())
    };
    Ok(VeroneseReport {
        gx1_coords: normed.iter().map(|x| x.expr_string()).collect(),
        gx1_is_standard,
        valid_assignments: valid.len(),
        listed_is_bijection: sorted.len() == 6,
        corrected_is_valid,
        restriction_f1_scalar: ratio(&f1()),
        restriction_f2_scalar: ratio(&f2()),
        x1_prime_restricts_to_zero: restrict_to(&xp, &corrected).is_zero(),
    })
}

/// det of half the chart Hessian predicted at a parametrized point:
/// -(147/16) c^14 t (c t + 1), c = omega^k zeta^l.
pub fn predicted_hessian_det(p: &SingularPoint) -> AlgebraicNumber {
    let f = p.t.field().clone();
    let c = &omega(p.k as i64) * &AlgebraicNumber::zeta_power(&cyclotomic(7), p.l as i64);
    let c = c.inject(&f).unwrap();
    let ct = &c * &p.t;
    let k = AlgebraicNumber::rational(crate::exactnum::rat(-147, 16));
    &(&(&k * &c.pow(14)) * &p.t) * &(&ct + &AlgebraicNumber::one(&f))
}

// ------------------------------------------------------------------ sweeps

/// One (a,b) evaluation: curve membership, singular count and classes.
#[derive(Clone, Debug, Serialize)]
pub struct SweepPoint {
    pub a: String,
    pub b: String,
    pub on_curve: [bool; 3],
    pub singular: usize,
    pub classes: Vec<SingTag>,
    /// singular iff on some twist of Z(G)
    pub consistent: bool,
}

pub fn sweep_point(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Result<SweepPoint, SingError> {
    let on_curve = discriminant_curve(a, b);
    let pts = singular_points(a, b);
    let form = f_ab(a, b);
    let classes = pts.iter().map(|p| classify(&form, &p.coords).map(|c| c.tag)).collect::<Result<Vec<_>, _>>()?;
    Ok(SweepPoint {
        a: a.to_string(),
        b: b.to_string(),
        on_curve,
        singular: pts.len(),
        consistent: on_curve.iter().any(|&x| x) == !pts.is_empty(),
        classes,
    })
}

/// The curve point with parameter tau: a = -(2 tau + tau^2), b = -(2/tau + 1/tau^2).
pub fn curve_point(tau: &AlgebraicNumber) -> (AlgebraicNumber, AlgebraicNumber) {
    let q = rationals();
    let two = AlgebraicNumber::from_int(&q, 2);
    let ti = tau.inverse().expect("tau nonzero");
    (-(&(&two * tau) + &(tau * tau)), -(&(&two * &ti) + &(&ti * &ti)))
}

/// Seeded mixture of sample points: `n/2` random rational pairs and `n/2`
/// points on the three curves from random rational tau (tau = -1 avoided, it
/// gives the cusp orbit).
pub fn sample_plane(seed: u64, n: usize) -> Vec<(AlgebraicNumber, AlgebraicNumber)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let q = rationals();
    let r = |rng: &mut rand_chacha::ChaCha8Rng| {
        let num = rng.gen_range(-12i64..=12);
        let den = rng.gen_range(1i64..=6);
        AlgebraicNumber::from_rational(&q, &crate::exactnum::rat(num, den))
    };
    let mut out = vec![];
    while out.len() < n / 2 {
        out.push((r(&mut rng), r(&mut rng)));
    }
    while out.len() < n {
        let tau = r(&mut rng);
        if tau.is_zero() || tau == AlgebraicNumber::from_int(&q, -1) {
            continue;
        }
        let (a, b) = curve_point(&tau);
        let j = rng.gen_range(0..3i64);
        let w = omega(j);
        out.push((&w * &a, &w * &b));
    }
    out
}
