//! Distinguished matrices: the C7 and F21 generators, the normalizer elements
//! g_tau and k, the seven-dimensional permutation model of L2(7), E and S.
//!
//! Permutation matrices follow A[sigma(j)][j] = 1, so acting on forms a
//! permutation sends x_i to x_{sigma(i)}.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::exactnum::{cyclotomic, parse_number, quadratic, rationals, AlgebraicNumber, Field, NumError};
use crate::linalg::{FMatrix, LinalgError};
use crate::polyalg::{f21_basis, family_coords, FamilyPoint, FamilyTag, Poly, PolyError};

pub type ProjectiveMatrix = FMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("closure did not stabilize at {expected} (reached {reached})")]
    ClosureFailure { expected: usize, reached: usize },
    #[error("matrix does not normalize the group")]
    NotInNormalizer,
    #[error("averaging sum is singular")]
    SingularS,
    #[error("unknown element '{0}'")]
    UnknownElement(String),
    #[error("matrix is not of the block form diag(A, 1) after conjugation")]
    NotBlockForm,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Num(#[from] NumError),
}

// ------------------------------------------------------------ permutations

/// Zero-based image table of a permutation given by 1-based cycles.
pub fn perm_from_cycles(n: usize, cycles: &[&[usize]]) -> Vec<usize> {
    let mut sigma: Vec<usize> = (0..n).collect();
    for c in cycles {
        for k in 0..c.len() {
            sigma[c[k] - 1] = c[(k + 1) % c.len()] - 1;
        }
    }
    sigma
}

/// Parse cycle notation such as "(135)(246)" (single-digit points) or
/// "(1,3,5)(2,4,6)".
pub fn parse_cycles(n: usize, s: &str) -> Result<Vec<usize>, GroupError> {
    let bad = || GroupError::UnknownElement(s.to_string());
    let mut cycles: Vec<Vec<usize>> = vec![];
    for part in s.split('(').skip(1) {
        let body = part.split(')').next().ok_or_else(bad)?;
        let pts: Vec<usize> = if body.contains(',') {
            body.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<_, _>>()?
        } else {
            body.chars().filter(|c| !c.is_whitespace()).map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect::<Result<_, _>>()?
        };
        if pts.iter().any(|&p| p == 0 || p > n) {
            return Err(bad());
        }
        cycles.push(pts);
    }
    if cycles.is_empty() && s.trim() != "()" {
        return Err(bad());
    }
    let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
    Ok(perm_from_cycles(n, &refs))
}

pub fn perm_matrix(n: usize, cycles: &[&[usize]]) -> FMatrix {
    FMatrix::permutation(&perm_from_cycles(n, cycles))
}

// -------------------------------------------------------- basic elements

pub fn q7() -> Field {
    cyclotomic(7)
}

pub fn zeta7(k: i64) -> AlgebraicNumber {
    AlgebraicNumber::zeta_power(&q7(), k)
}

pub fn omega(k: i64) -> AlgebraicNumber {
    AlgebraicNumber::zeta_power(&cyclotomic(3), k)
}

/// g7 = diag(zeta7^(1,5,4,6,2,3)).
pub fn g7() -> FMatrix {
    FMatrix::diag(&[1, 5, 4, 6, 2, 3].map(zeta7))
}

/// g3: x_j -> x_{j+2}, the permutation (135)(246).
pub fn g3() -> FMatrix {
    perm_matrix(6, &[&[1, 3, 5], &[2, 4, 6]])
}

/// g_tau: the permutation (123456); g_tau^2 = g3.
pub fn gtau() -> FMatrix {
    perm_matrix(6, &[&[1, 2, 3, 4, 5, 6]])
}

/// k = diag(1,1,omega,omega,omega^2,omega^2).
pub fn k_elem() -> FMatrix {
    FMatrix::diag(&[0, 0, 1, 1, 2, 2].map(omega))
}

/// Torus element diag(t^w1, ..., t^w6) at a concrete t.
pub fn torus(t: &AlgebraicNumber, w: [i64; 6]) -> FMatrix {
    FMatrix::diag(&w.map(|e| t.pow(e)))
}

/// D_t = diag(1,t,1,t,1,t).
pub fn d_t(t: &AlgebraicNumber) -> FMatrix {
    torus(t, [0, 1, 0, 1, 0, 1])
}

// ----------------------------------------------- seven-dimensional model

/// The change of basis T: T[i][j] = 6 delta_ij - 1 (i,j < 6), last column 1,
/// last row (-1,...,-1,1).
pub fn t_matrix() -> FMatrix {
    let q = rationals();
    FMatrix::from_fn(7, 7, |i, j| {
        let v = match (i, j) {
            (_, 6) => 1,
            (6, _) => -1,
            _ if i == j => 6,
            _ => -1,
        };
        AlgebraicNumber::from_int(&q, v)
    })
}

/// Psi(A) = T diag(A, 1) T^-1.
pub fn psi(a: &FMatrix) -> FMatrix {
    let t = t_matrix();
    let one = FMatrix::identity(1, &rationals());
    &(&t * &a.block_diag(&one)) * &t.inverse().unwrap()
}

/// Inverse of Psi on its image.
pub fn psi_inv(m: &FMatrix) -> Result<FMatrix, GroupError> {
    let t = t_matrix();
    let b = &(&t.inverse().unwrap() * m) * &t;
    for i in 0..6 {
        if !b.get(6, i).is_zero() || !b.get(i, 6).is_zero() {
            return Err(GroupError::NotBlockForm);
        }
    }
    if !b.get(6, 6).is_one() {
        return Err(GroupError::NotBlockForm);
    }
    Ok(b.submatrix(0, 6, 0, 6))
}

pub fn perm7(cycles: &[&[usize]]) -> FMatrix {
    perm_matrix(7, cycles)
}

/// The 7-cycle (1234567) in the permutation model.
pub fn p7() -> FMatrix {
    perm7(&[&[1, 2, 3, 4, 5, 6, 7]])
}

/// Generators of L2(7): images of (12)(36) and (1234567).
pub fn l27_generators() -> Vec<FMatrix> {
    vec![psi_inv(&perm7(&[&[1, 2], &[3, 6]])).unwrap(), psi_inv(&p7()).unwrap()]
}

/// The constants a = 2 sqrt2/7 + 1/7 and b = -3 sqrt2/14 + 1/7.
pub fn e_constants() -> (AlgebraicNumber, AlgebraicNumber) {
    (parse_number("2*sqrt2/7 + 1/7").unwrap(), parse_number("-3*sqrt2/14 + 1/7").unwrap())
}

/// E = (243756) (a(I + P^4 + P^6) + b(P + P^2 + P^3 + P^5)) in the 7-dim model.
pub fn e7() -> FMatrix {
    let (a, b) = e_constants();
    let p = p7();
    let f = quadratic(2);
    let mut acc = FMatrix::zeros(7, 7, &f);
    for k in 0..7 {
        let c = if [0, 4, 6].contains(&k) { &a } else { &b };
        acc = &acc + &p.pow(k).scale(c);
    }
    &perm7(&[&[2, 4, 3, 7, 5, 6]]) * &acc
}

/// E' = Psi^-1(E), acting on six variables.
pub fn e_prime() -> FMatrix {
    psi_inv(&e7()).expect("E preserves the block form")
}

pub fn g7_prime() -> FMatrix {
    psi_inv(&p7()).unwrap()
}

pub fn g3_prime() -> FMatrix {
    psi_inv(&perm7(&[&[2, 3, 5], &[4, 7, 6]])).unwrap()
}

/// S = sum_{i<3, j<7} (g3^i g7^j)^-1 g3'^i g7'^j.
pub fn build_s() -> Result<FMatrix, GroupError> {
    let (a, b, a2, b2) = (g3(), g7(), g3_prime(), g7_prime());
    let f = q7();
    let mut s = FMatrix::zeros(6, 6, &f);
    for i in 0..3 {
        for j in 0..7 {
            let left = (&a.pow(i) * &b.pow(j)).inverse()?;
            let right = &a2.pow(i) * &b2.pow(j);
            s = &s + &(&left * &right);
        }
    }
    if s.det().is_zero() {
        return Err(GroupError::SingularS);
    }
    Ok(s)
}

/// P on the rank-4 lattice: fixes e1, e2 and swaps e3, e4 with a sign.
pub fn p_involution() -> FMatrix {
    FMatrix::from_ints(&rationals(), &[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 0, -1], vec![0, 0, -1, 0]])
}

/// Look up a named element: g7, g3, gtau, k, E, E7, S, P, or cycle notation
/// on 6 (or 7 with the prefix "7:") points.
pub fn named_element(name: &str) -> Result<FMatrix, GroupError> {
    let name = name.trim();
    Ok(match name {
        "g7" => g7(),
        "g3" => g3(),
        "gtau" => gtau(),
        "k" => k_elem(),
        "E" => e_prime(),
        "E7" => e7(),
        "S" => build_s()?,
        "P" => p_involution(),
        "g7'" => g7_prime(),
        "g3'" => g3_prime(),
        _ => {
            if let Some(c) = name.strip_prefix("7:") {
                FMatrix::permutation(&parse_cycles(7, c)?)
            } else if name.starts_with('(') {
                FMatrix::permutation(&parse_cycles(6, name)?)
            } else {
                return Err(GroupError::UnknownElement(name.to_string()));
            }
        }
    })
}

// ------------------------------------------------------------ groups

/// Finite matrix group enumerated projectively.
pub struct MatrixGroup {
    pub generators: Vec<FMatrix>,
    elements: Vec<FMatrix>,
    index: HashMap<Vec<(Vec<BigInt>, BigInt)>, usize>,
    field: Field,
}

impl MatrixGroup {
    /// Enumerate the projective closure; fails if it exceeds `limit`.
    pub fn generate(gens: Vec<FMatrix>, limit: usize) -> Result<Self, GroupError> {
        let field = gens
            .iter()
            .fold(rationals(), |f, g| crate::exactnum::compose_fields(&f, &g.field()).unwrap());
        let gens: Vec<FMatrix> = gens.iter().map(|g| g.lift(&field).unwrap().normalized()).collect();
        let n = gens[0].nrows();
        let id = FMatrix::identity(n, &field);
        let mut grp = MatrixGroup { generators: gens.clone(), elements: vec![], index: HashMap::new(), field };
        grp.insert(id);
        let mut frontier = 0;
        while frontier < grp.elements.len() {
            let x = grp.elements[frontier].clone();
            frontier += 1;
            for g in &gens {
                let y = (&x * g).normalized();
                if grp.insert(y) && grp.elements.len() > limit {
                    return Err(GroupError::ClosureFailure { expected: limit, reached: grp.elements.len() });
                }
            }
        }
        Ok(grp)
    }

    fn insert(&mut self, m: FMatrix) -> bool {
        let m = m.lift(&self.field).unwrap();
        let key = m.proj_key();
        if self.index.contains_key(&key) {
            return false;
        }
        self.index.insert(key, self.elements.len());
        self.elements.push(m);
        true
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[FMatrix] {
        &self.elements
    }

    pub fn contains(&self, m: &FMatrix) -> bool {
        match m.lift(&self.field) {
            Ok(x) => self.index.contains_key(&x.normalized().proj_key()),
            Err(_) => false,
        }
    }

    /// g normalizes the group when g x g^-1 lies in it for every generator x.
    pub fn normalized_by(&self, g: &FMatrix) -> bool {
        let gi = g.inverse().unwrap();
        self.generators.iter().all(|x| self.contains(&(&(g * x) * &gi)))
    }
}

pub fn build_c7() -> Result<MatrixGroup, GroupError> {
    check_order(MatrixGroup::generate(vec![g7()], 7)?, 7)
}

pub fn build_f21() -> Result<MatrixGroup, GroupError> {
    check_order(MatrixGroup::generate(vec![g7(), g3()], 21)?, 21)
}

pub fn build_l27() -> Result<MatrixGroup, GroupError> {
    check_order(MatrixGroup::generate(l27_generators(), 168)?, 168)
}

/// L2(7) extended by E', order 336.
pub fn build_l27_ext() -> Result<MatrixGroup, GroupError> {
    let mut g = l27_generators();
    g.push(e_prime());
    check_order(MatrixGroup::generate(g, 336)?, 336)
}

fn check_order(g: MatrixGroup, want: usize) -> Result<MatrixGroup, GroupError> {
    if g.order() != want {
        return Err(GroupError::ClosureFailure { expected: want, reached: g.order() });
    }
    Ok(g)
}

// -------------------------------------------------------------- identities

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
    pub exact: bool,
}

fn check(name: &str, lhs: &FMatrix, rhs: &FMatrix) -> IdentityCheck {
    IdentityCheck { name: name.into(), holds: lhs.proj_eq(rhs), exact: lhs == rhs }
}

/// The conjugation identities among g7, g3, g_tau and k.
pub fn conjugation_identities() -> Vec<IdentityCheck> {
    let (a7, a3, t, k) = (g7(), g3(), gtau(), k_elem());
    let conj = |x: &FMatrix, y: &FMatrix| &(x * y) * &x.inverse().unwrap();
    vec![
        check("gtau g7 gtau^-1 = g7^3", &conj(&t, &a7), &a7.pow(3)),
        check("g3 g7 g3^-1 = g7^2", &conj(&a3, &a7), &a7.pow(2)),
        check("k g3 k^-1 = omega g3", &conj(&k, &a3), &a3.scale(&omega(1))),
        check("k g7 k^-1 = g7", &conj(&k, &a7), &a7),
        check("gtau^2 = g3", &t.pow(2), &a3),
        check("gtau g3 gtau^-1 = g3", &conj(&t, &a3), &a3),
    ]
}

// -------------------------------------------------- action on F21 coordinates

/// The matrix R(g) with g . (sum c_j B_j) = sum (R(g) c)_i B_i on the F21 basis.
pub fn induced_family_action(g: &FMatrix) -> Result<FMatrix, GroupError> {
    let basis = f21_basis();
    let mut cols = vec![];
    for b in &basis {
        let img = b.act(g)?;
        let c = family_coords(&img, FamilyTag::F21).map_err(|_| GroupError::NotInNormalizer)?;
        cols.push(c.coeffs);
    }
    Ok(FMatrix::from_fn(4, 4, |i, j| cols[j][i].clone()))
}

/// Character of the torus diag(t^w) on each F21 basis form, found by degree
/// counting (valid for every t).
pub fn torus_characters(w: [i64; 6]) -> Result<Vec<i64>, GroupError> {
    let mut out = vec![];
    for b in f21_basis() {
        let degs: Vec<i64> = b
            .terms()
            .keys()
            .map(|m| m.0.iter().zip(w.iter()).map(|(&e, &wi)| e as i64 * wi).sum())
            .collect();
        if degs.iter().any(|&d| d != degs[0]) {
            return Err(GroupError::NotInNormalizer);
        }
        out.push(degs[0]);
    }
    Ok(out)
}

/// The torus diag(t^w) normalizes F21 when it commutes with g3 up to scalar
/// for every t, i.e. w is constant on the orbits of (135)(246).
pub fn torus_normalizes_f21(w: [i64; 6]) -> bool {
    let s = perm_from_cycles(6, &[&[1, 3, 5], &[2, 4, 6]]);
    (0..6).all(|i| w[s[i]] - w[i] == w[s[0]] - w[0])
}

/// One element of the finite-by-torus part of N(F21) fixing a point:
/// g_tau^m k^n D_t with t ranging over the roots of t^order = value.
#[derive(Clone, Debug)]
pub struct StabilizerFamily {
    pub m: u32,
    pub n: u32,
    /// None when every t works (a whole torus fixes the point).
    pub t_equation: Option<(u64, AlgebraicNumber)>,
}

impl StabilizerFamily {
    pub fn count(&self) -> Option<u64> {
        self.t_equation.as_ref().map(|(g, _)| *g)
    }
}

#[derive(Clone, Debug)]
pub struct StabilizerReport {
    pub families: Vec<StabilizerFamily>,
    /// Number of projective transformations of the F21 coordinates fixing the
    /// point, or None if infinite.
    pub order: Option<u64>,
}

impl StabilizerReport {
    pub fn group_name(&self) -> String {
        match self.order {
            None => "infinite".into(),
            Some(1) => "F21".into(),
            Some(k) => format!("F21 x| C{k}"),
        }
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Which g_tau^m k^n D_t fix the F21 point c projectively.  The induced
/// action is R = S^m diag(t, omega^n t^2, 1, t^3) with S swapping c1<->c2
/// and c3<->c4; the t-conditions are solved exactly via Bezout.
pub fn stabilizer_check(p: &FamilyPoint) -> StabilizerReport {
    assert_eq!(p.tag, FamilyTag::F21);
    let c = &p.coeffs;
    let mut fams = vec![];
    let mut total = Some(0u64);
    let tdeg = [1i64, 2, 0, 3];
    for m in 0..2u32 {
        let perm: [usize; 4] = if m == 0 { [0, 1, 2, 3] } else { [1, 0, 3, 2] };
        for n in 0..3u32 {
            // (R c)_i = kappa_i t^{d_i} c_{perm(i)}
            let kap: Vec<AlgebraicNumber> = (0..4)
                .map(|i| {
                    let j = perm[i];
                    let w = if j == 1 { omega(n as i64) } else { omega(0) };
                    &w * &c[j]
                })
                .collect();
            let d: Vec<i64> = (0..4).map(|i| tdeg[perm[i]]).collect();
            // zero patterns must agree
            if (0..4).any(|i| kap[i].is_zero() != c[i].is_zero()) {
                continue;
            }
            let nz: Vec<usize> = (0..4).filter(|&i| !c[i].is_zero()).collect();
            // kap_i t^d_i / c_i equal for all i in nz: t^(d_i - d_0) = (c_i kap_0)/(c_0 kap_i)
            let i0 = nz[0];
            let mut eqs: Vec<(i64, AlgebraicNumber)> = vec![];
            for &i in &nz[1..] {
                let e = d[i] - d[i0];
                let beta = &(&c[i] * &kap[i0]) / &(&c[i0] * &kap[i]);
                eqs.push((e, beta));
            }
            match solve_power_system(&eqs) {
                PowerSolution::Empty => {}
                PowerSolution::All => {
                    fams.push(StabilizerFamily { m, n, t_equation: None });
                    total = None;
                }
                PowerSolution::Roots(g, gamma) => {
                    fams.push(StabilizerFamily { m, n, t_equation: Some((g, gamma)) });
                    total = total.map(|t| t + g);
                }
            }
        }
    }
    StabilizerReport { families: fams, order: total }
}

enum PowerSolution {
    Empty,
    All,
    /// t^g = gamma
    Roots(u64, AlgebraicNumber),
}

fn solve_power_system(eqs: &[(i64, AlgebraicNumber)]) -> PowerSolution {
    // e = 0 equations are consistency conditions
    let mut rest = vec![];
    for (e, b) in eqs {
        if *e == 0 {
            if !b.is_one() {
                return PowerSolution::Empty;
            }
        } else {
            rest.push((*e, b.clone()));
        }
    }
    if rest.is_empty() {
        return PowerSolution::All;
    }
    // gamma = prod beta_k^u_k with sum u_k e_k = g
    let (mut g, mut gamma) = (rest[0].0, rest[0].1.clone());
    for (e, b) in &rest[1..] {
        let (h, x, y) = ext_gcd(g, *e);
        gamma = &gamma.pow(x) * &b.pow(y);
        g = h;
    }
    if g < 0 {
        g = -g;
        gamma = gamma.inverse().unwrap();
    }
    for (e, b) in &rest {
        let q = e / g;
        if gamma.pow(q) != *b {
            return PowerSolution::Empty;
        }
    }
    debug_assert!(rest.iter().all(|(e, _)| e.is_multiple_of(&g)));
    PowerSolution::Roots(g as u64, gamma)
}

/// Action of E' on the pencil coordinates (c1, c2) of c1 f1 + c2 f2.
pub fn pencil_action(g: &FMatrix) -> Result<FMatrix, GroupError> {
    let basis = crate::polyalg::l27_basis();
    let mut cols = vec![];
    for b in &basis {
        let img = b.act(g)?;
        cols.push(img.coords_in(&basis).map_err(|_| GroupError::NotInNormalizer)?);
    }
    Ok(FMatrix::from_fn(2, 2, |i, j| cols[j][i].clone()))
}

/// Whether E' fixes the pencil member c1 f1 + c2 f2 projectively (the only
/// finite symmetry beyond L2(7) in its normalizer).
pub fn pencil_extra_symmetry(c1: &AlgebraicNumber, c2: &AlgebraicNumber) -> Result<bool, GroupError> {
    let r = pencil_action(&e_prime())?;
    let v = r.mul_vec(&[c1.clone(), c2.clone()]);
    // v proportional to (c1, c2)
    Ok((&v[0] * c2 - &v[1] * c1).is_zero())
}

/// Evaluate a polynomial identity g . F = lambda F, returning lambda.
pub fn invariance_scalar(g: &FMatrix, f: &Poly) -> Option<AlgebraicNumber> {
    f.scalar_ratio(&f.act(g).ok()?)
}
