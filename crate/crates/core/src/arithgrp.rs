//! Arithmetic groups of the two period domains.
//!
//! Rank 3: Phi1 sends h in SL2(R) to B A(h) B^-1 acting on T1 (signature
//! (1,2)); its integral preimage is the group of typed matrices
//! [[(u s(u') + v s(v'))/2, (w s(w') + x s(x'))/2], [(w s(w') - x s(x'))/2, (u s(u') - v s(v'))/2]]
//! with s = sqrt.  Rank 4: Phi2 sends (h1, h2) to B (h1 (x) h2) B^-1 on T2.
//! Every square root lives in Q(sqrt2, sqrt3, sqrt7).

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactnum::{multiquadratic, parse_number, rat, sqrt_of, AlgebraicNumber, Field, Rational, Sign};
use crate::lattices::{discriminant_group, t1, t2, Lattice};
use crate::linalg::FMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("determinant is not 1")]
    NotUnimodular,
    #[error("norm equation does not give 4")]
    NormNotFour,
    #[error("image is not an integral matrix")]
    NonIntegralImage,
    #[error("matrix is not an isometry of the lattice")]
    NotIsometry,
    #[error("parity condition violated")]
    ParityViolation,
    #[error("the two factor determinants disagree")]
    DeterminantMismatch,
    #[error("reduced norm is not 1")]
    NormNotOne,
    #[error("conjugated matrix leaves the multiquadratic field")]
    NotInField,
    #[error("type {0:?} is not admissible")]
    UnknownType([i64; 4]),
}

pub type IMat = Vec<Vec<i64>>;

// ------------------------------------------------------------------ field

pub fn kfield() -> Field {
    static K: OnceLock<Field> = OnceLock::new();
    K.get_or_init(|| multiquadratic(&[2, 3, 7])).clone()
}

fn k(n: i64) -> AlgebraicNumber {
    AlgebraicNumber::from_int(&kfield(), n)
}

fn kq(r: Rational) -> AlgebraicNumber {
    AlgebraicNumber::from_rational(&kfield(), &r)
}

/// sqrt(n) in K for a positive integer n whose squarefree part divides 42.
pub fn rt(n: i64) -> AlgebraicNumber {
    assert!(n > 0);
    let (mut s, mut f) = (1i64, n);
    let mut p = 2;
    while p * p <= f {
        while f % (p * p) == 0 {
            f /= p * p;
            s *= p;
        }
        p += 1;
    }
    if f == 1 {
        return k(s);
    }
    sqrt_of(f, &kfield()).expect("radicand inside K").scale(&rat(s, 1))
}

fn m2(a: AlgebraicNumber, b: AlgebraicNumber, c: AlgebraicNumber, d: AlgebraicNumber) -> FMatrix {
    FMatrix::from_rows(vec![vec![a, b], vec![c, d]])
}

fn to_imat(m: &FMatrix) -> Option<IMat> {
    m.to_integer().map(|rows| rows.iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect())
}

fn imat_to_f(m: &IMat) -> FMatrix {
    FMatrix::from_ints(&kfield(), m)
}

pub fn imat_mul(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    (0..n).map(|i| (0..b[0].len()).map(|j| (0..b.len()).map(|t| a[i][t] * b[t][j]).sum()).collect()).collect()
}

pub fn imat_det(a: &IMat) -> i64 {
    let m = crate::lattices::int_mat(a);
    crate::lattices::det(&m).to_i64().unwrap()
}

fn imat_identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// M^T G M = G.
pub fn is_isometry(m: &IMat, l: &Lattice) -> bool {
    let g = &l.gram;
    let n = g.len();
    (0..n).all(|i| (0..n).all(|j| (0..n).map(|a| (0..n).map(|b| m[a][i] * g[a][b] * m[b][j]).sum::<i64>()).sum::<i64>() == g[i][j]))
}

/// A negative definite 2-frame of the lattice used to test O+.
fn negative_frame(l: &Lattice) -> [Vec<i64>; 2] {
    if l.rank() == 3 {
        [vec![1, 0, 0], vec![0, 0, 1]]
    } else {
        [vec![1, 0, 0, 0], vec![0, 0, 1, -1]]
    }
}

/// Orientation of the negative definite part is preserved: det((M w_i, w_j)) > 0.
pub fn in_o_plus(m: &IMat, l: &Lattice) -> bool {
    let w = negative_frame(l);
    let g = &l.gram;
    let n = g.len();
    let mv = |v: &Vec<i64>| -> Vec<i64> { (0..n).map(|i| (0..n).map(|j| m[i][j] * v[j]).sum()).collect() };
    let pair = |x: &[i64], y: &[i64]| -> i64 { (0..n).map(|i| (0..n).map(|j| x[i] * g[i][j] * y[j]).sum::<i64>()).sum() };
    let p: Vec<Vec<i64>> = w.iter().map(|wi| w.iter().map(|wj| pair(&mv(wi), wj)).collect()).collect();
    p[0][0] * p[1][1] - p[0][1] * p[1][0] > 0
}

// --------------------------------------------------- discriminant Z/3

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Z3Action {
    Preserves,
    Negates,
}

/// Generator of the 3-part of the discriminant group, in rational coordinates.
pub fn z3_generator(l: &Lattice) -> Vec<Rational> {
    let a = discriminant_group(l);
    let (i, d) = a.invariant_factors.iter().enumerate().find(|(_, d)| *d % 3 == 0).expect("3-part present");
    let m = Rational::from_integer(BigInt::from(d / 3));
    a.generators[i].iter().map(|x| x * &m).collect()
}

pub fn z3_action(m: &IMat, l: &Lattice) -> Result<Z3Action, ArithError> {
    if !is_isometry(m, l) {
        return Err(ArithError::NotIsometry);
    }
    let g = z3_generator(l);
    let n = l.rank();
    let mg: Vec<Rational> = (0..n).map(|i| (0..n).map(|j| &g[j] * Rational::from_integer(BigInt::from(m[i][j]))).sum()).collect();
    let integral = |v: &Vec<Rational>| v.iter().all(|x| x.is_integer());
    if integral(&mg.iter().zip(&g).map(|(a, b)| a - b).collect()) {
        Ok(Z3Action::Preserves)
    } else if integral(&mg.iter().zip(&g).map(|(a, b)| a + b).collect()) {
        Ok(Z3Action::Negates)
    } else {
        Err(ArithError::NotIsometry)
    }
}

// ------------------------------------------------------------------ rank 3

/// Klein four-group acting on positions: id, (12)(34), (13)(24), (14)(23).
pub fn klein(p: [i64; 4], which: usize) -> [i64; 4] {
    match which {
        0 => p,
        1 => [p[1], p[0], p[3], p[2]],
        2 => [p[2], p[3], p[0], p[1]],
        _ => [p[3], p[2], p[1], p[0]],
    }
}

/// The eight rank-3 types in table order.
pub fn rank3_types() -> Vec<[i64; 4]> {
    [[1, 21, 6, 14], [2, 42, 3, 7]].iter().flat_map(|&b| (0..4).map(move |w| klein(b, w))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TypedElementRank3 {
    pub ty: [i64; 4],
    pub coords: [i64; 4],
}

impl TypedElementRank3 {
    pub fn norm(&self) -> i64 {
        let (t, c) = (self.ty, self.coords);
        c[0] * c[0] * t[0] - c[1] * c[1] * t[1] - c[2] * c[2] * t[2] + c[3] * c[3] * t[3]
    }

    pub fn parity_ok(&self) -> bool {
        let c = self.coords;
        (c[0] - c[1]).is_even() && (c[2] - c[3]).is_even()
    }

    pub fn matrix(&self) -> FMatrix {
        let (t, c) = (self.ty, self.coords);
        let half = kq(rat(1, 2));
        let s = |i: usize| rt(t[i]).scale(&rat(c[i], 1));
        m2(
            &(&s(0) + &s(1)) * &half,
            &(&s(2) + &s(3)) * &half,
            &(&s(2) - &s(3)) * &half,
            &(&s(0) - &s(1)) * &half,
        )
    }
}

pub fn b1() -> FMatrix {
    let q = |s: &str| parse_number(s).unwrap().inject(&kfield()).unwrap();
    FMatrix::from_rows(vec![
        vec![q("-sqrt21/42 - 1/2"), q("0"), q("-sqrt21/42 + 1/2")],
        vec![q("-sqrt21/21"), q("0"), q("-sqrt21/21")],
        vec![q("0"), q("sqrt14/14"), q("0")],
    ])
}

fn b1_inv() -> FMatrix {
    static INV: OnceLock<FMatrix> = OnceLock::new();
    INV.get_or_init(|| b1().inverse().unwrap()).clone()
}

/// The action of h on binary quadratic forms in the basis f, e, g.
pub fn a_of_h(h: &FMatrix) -> FMatrix {
    let (a, b, c, d) = (h.get(0, 0), h.get(0, 1), h.get(1, 0), h.get(1, 1));
    let two = k(2);
    FMatrix::from_rows(vec![
        vec![a * a, &(&two * a) * b, b * b],
        vec![a * c, &(a * d) + &(b * c), b * d],
        vec![c * c, &(&two * c) * d, d * d],
    ])
}

pub fn phi1(h: &FMatrix) -> Result<FMatrix, ArithError> {
    if !h.det().is_one() {
        return Err(ArithError::NotUnimodular);
    }
    let h = h.lift(&kfield()).map_err(|_| ArithError::NotInField)?;
    Ok(&(&b1() * &a_of_h(&h)) * &b1_inv())
}

pub fn gamma2_member(e: &TypedElementRank3) -> Result<IMat, ArithError> {
    if !rank3_types().contains(&e.ty) {
        return Err(ArithError::UnknownType(e.ty));
    }
    if e.norm() != 4 {
        return Err(ArithError::NormNotFour);
    }
    let m = to_imat(&phi1(&e.matrix())?).ok_or(ArithError::NonIntegralImage)?;
    if !is_isometry(&m, &t1()) {
        return Err(ArithError::NotIsometry);
    }
    Ok(m)
}

/// Divide by sqrt(t) and require an integer.
fn int_over_sqrt(x: &AlgebraicNumber, t: i64) -> Option<i64> {
    let q = (x / &rt(t)).to_rational()?;
    q.is_integer().then(|| q.to_integer().to_i64().unwrap())
}

/// Read off the type and coordinates of a matrix in typed form, if any.
pub fn type_of_h3(h: &FMatrix) -> Option<TypedElementRank3> {
    let h = h.lift(&kfield()).ok()?;
    let (a, b, c, d) = (h.get(0, 0), h.get(0, 1), h.get(1, 0), h.get(1, 1));
    let vals = [a + d, a - d, b + c, b - c];
    rank3_types().into_iter().find_map(|ty| {
        let mut coords = [0i64; 4];
        for i in 0..4 {
            coords[i] = int_over_sqrt(&vals[i], ty[i])?;
        }
        Some(TypedElementRank3 { ty, coords })
    })
}

/// Recover +-h from an integral isometry M = Phi1(h) and type it.
pub fn type_of_m3(m: &IMat) -> Option<TypedElementRank3> {
    let a = &(&b1_inv() * &imat_to_f(m)) * &b1();
    let e = |i: usize, j: usize| a.get(i, j).clone();
    let half = kq(rat(1, 2));
    let one = k(1);
    let sq = [
        &(&(&e(0, 0) + &e(2, 2)) + &e(1, 1)) + &one,
        &(&(&e(0, 0) + &e(2, 2)) - &e(1, 1)) - &one,
        &(&(&e(0, 2) + &e(2, 0)) + &e(1, 1)) - &one,
        &(&(&e(0, 2) + &e(2, 0)) - &e(1, 1)) + &one,
    ];
    // products of pairs: uv, uw, ux, vw, vx, wx
    let (ab, ac, bd, cd) = (&e(0, 1) * &half, e(1, 0), e(1, 2), &e(2, 1) * &half);
    let prod = |i: usize, j: usize| -> AlgebraicNumber {
        match (i, j) {
            (0, 1) => &e(0, 0) - &e(2, 2),
            (0, 2) => &(&(&ab + &ac) + &bd) + &cd,
            (0, 3) => &(&(&ab - &ac) + &bd) - &cd,
            (1, 2) => &(&(&ab + &ac) - &bd) - &cd,
            (1, 3) => &(&(&ab - &ac) - &bd) + &cd,
            _ => &e(0, 2) - &e(2, 0),
        }
    };
    let sqr: Vec<Rational> = sq.iter().map(|x| x.to_rational()).collect::<Option<_>>()?;
    let lead = sqr.iter().position(|x| !x.is_zero())?;
    rank3_types().into_iter().find_map(|ty| {
        let mut coords = [0i64; 4];
        for i in 0..4 {
            let c2 = &sqr[i] / Rational::from_integer(BigInt::from(ty[i]));
            if !c2.is_integer() {
                return None;
            }
            let n = c2.to_integer();
            let r = n.sqrt();
            if &r * &r != n {
                return None;
            }
            coords[i] = r.to_i64()?;
        }
        // signs relative to the leading coordinate (taken positive)
        for i in 0..4 {
            if i != lead && coords[i] != 0 {
                let p = if lead < i { prod(lead, i) } else { prod(i, lead) };
                if p.sign().ok()? == Sign::Negative {
                    coords[i] = -coords[i];
                }
            }
        }
        let t = TypedElementRank3 { ty, coords };
        (gamma2_member(&t).ok()? == *m).then_some(t)
    })
}

// ----------------------------------------------------------------- Table 2

#[derive(Clone, Debug)]
pub struct Table2Entry {
    pub ty: [i64; 4],
    pub coords: [i64; 4],
    pub display: [&'static str; 4],
    pub preserves: bool,
    pub label: [u8; 3],
}

pub fn table2_data() -> Vec<Table2Entry> {
    let e = |ty, coords, display, preserves, label| Table2Entry { ty, coords, display, preserves, label };
    vec![
        e([1, 21, 6, 14], [2, 0, 0, 0], ["1", "0", "0", "1"], true, [0, 0, 0]),
        e([21, 1, 14, 6], [1, 3, 1, 1], ["(sqrt21+3)/2", "(sqrt14+sqrt6)/2", "(sqrt14-sqrt6)/2", "(sqrt21-3)/2"], false, [1, 0, 0]),
        e([6, 14, 1, 21], [3, 1, 6, 0], ["(3*sqrt6+sqrt14)/2", "3", "3", "(3*sqrt6-sqrt14)/2"], false, [0, 1, 0]),
        e([14, 6, 21, 1], [0, 0, 0, 2], ["0", "1", "-1", "0"], true, [1, 1, 0]),
        e([2, 42, 3, 7], [0, 0, 1, 1], ["0", "(sqrt3+sqrt7)/2", "(sqrt3-sqrt7)/2", "0"], true, [0, 0, 1]),
        e([42, 2, 7, 3], [0, 2, 3, 5], ["sqrt2", "(3*sqrt7+5*sqrt3)/2", "(3*sqrt7-5*sqrt3)/2", "-sqrt2"], false, [0, 1, 1]),
        e([3, 7, 2, 42], [2, 0, 2, 0], ["sqrt3", "sqrt2", "sqrt2", "sqrt3"], false, [0, 1, 1]),
        e([7, 3, 42, 2], [1, 1, 0, 0], ["(sqrt7+sqrt3)/2", "0", "0", "(sqrt7-sqrt3)/2"], true, [1, 1, 1]),
    ]
}

fn display_matrix(d: &[&str; 4]) -> FMatrix {
    let q = |s: &str| parse_number(s).unwrap().inject(&kfield()).unwrap();
    m2(q(d[0]), q(d[1]), q(d[2]), q(d[3]))
}

#[derive(Clone, Debug, Serialize)]
pub struct Table2Row {
    pub ty: [i64; 4],
    pub coords: [i64; 4],
    pub member: bool,
    pub matches_display: bool,
    pub in_so_plus: bool,
    pub image: Option<IMat>,
    pub preserves_listed: bool,
    pub preserves_computed: Option<bool>,
    pub label_listed: [u8; 3],
    pub label_computed: Option<[u8; 3]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table2Report {
    pub rows: Vec<Table2Row>,
    /// cayley[i][j] = index of the type of r_i r_j.
    pub cayley: Vec<Vec<usize>>,
    pub elementary_abelian: bool,
    pub labels_consistent: bool,
    /// Rows whose listed label disagrees with the computed one.
    pub label_mismatches: Vec<usize>,
    /// Pairs of rows sharing a listed label.
    pub duplicate_labels: Vec<(usize, usize)>,
}

fn type_index3(ty: &[i64; 4]) -> usize {
    rank3_types().iter().position(|t| t == ty).unwrap()
}

/// Multiply typed representatives and retype the product.
pub fn type_compose3(a: &TypedElementRank3, b: &TypedElementRank3) -> Option<TypedElementRank3> {
    type_of_h3(&(&a.matrix() * &b.matrix()))
}

pub fn verify_table2() -> Table2Report {
    let data = table2_data();
    let reps: Vec<TypedElementRank3> = data.iter().map(|d| TypedElementRank3 { ty: d.ty, coords: d.coords }).collect();
    let t = t1();
    let mut rows = vec![];
    for (d, r) in data.iter().zip(&reps) {
        let image = gamma2_member(r).ok();
        let in_so_plus = image.as_ref().is_some_and(|m| imat_det(m) == 1 && in_o_plus(m, &t));
        let preserves_computed = image.as_ref().and_then(|m| z3_action(m, &t).ok()).map(|a| a == Z3Action::Preserves);
        rows.push(Table2Row {
            ty: d.ty,
            coords: d.coords,
            member: image.is_some(),
            matches_display: display_matrix(&d.display) == r.matrix(),
            in_so_plus,
            image,
            preserves_listed: d.preserves,
            preserves_computed,
            label_listed: d.label,
            label_computed: None,
        });
    }
    let cayley: Vec<Vec<usize>> = reps
        .iter()
        .map(|a| reps.iter().map(|b| type_compose3(a, b).map_or(usize::MAX, |p| type_index3(&p.ty))).collect())
        .collect();
    let (labels, labels_consistent) = labels_from_cayley(&cayley, &[(1, data[1].label), (2, data[2].label), (4, data[4].label)]);
    for (row, l) in rows.iter_mut().zip(&labels) {
        row.label_computed = *l;
    }
    let elementary_abelian = is_elementary_abelian(&cayley);
    let label_mismatches = rows.iter().enumerate().filter(|(_, r)| r.label_computed != Some(r.label_listed)).map(|(i, _)| i).collect();
    let mut duplicate_labels = vec![];
    for i in 0..data.len() {
        for j in i + 1..data.len() {
            if data[i].label == data[j].label {
                duplicate_labels.push((i, j));
            }
        }
    }
    Table2Report { rows, cayley, elementary_abelian, labels_consistent, label_mismatches, duplicate_labels }
}

fn is_elementary_abelian(c: &[Vec<usize>]) -> bool {
    let n = c.len();
    (0..n).all(|i| c[i][i] == 0 && (0..n).all(|j| c[i][j] == c[j][i] && c[i][j] < n))
        && (0..n).all(|i| (0..n).all(|j| (0..n).all(|l| c[c[i][j]][l] == c[i][c[j][l]])))
}

/// Extend labels on a basis to the whole quotient via the multiplication table.
fn labels_from_cayley(c: &[Vec<usize>], basis: &[(usize, [u8; 3])]) -> (Vec<Option<[u8; 3]>>, bool) {
    let n = c.len();
    let mut lab: Vec<Option<[u8; 3]>> = vec![None; n];
    lab[0] = Some([0, 0, 0]);
    for &(i, l) in basis {
        lab[i] = Some(l);
    }
    let add = |a: [u8; 3], b: [u8; 3]| [a[0] ^ b[0], a[1] ^ b[1], a[2] ^ b[2]];
    for _ in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (lab[i], lab[j]) {
                    if c[i][j] < n && lab[c[i][j]].is_none() {
                        lab[c[i][j]] = Some(add(a, b));
                    }
                }
            }
        }
    }
    let consistent = (0..n).all(|i| {
        (0..n).all(|j| match (lab[i], lab[j]) {
            (Some(a), Some(b)) => c[i][j] < n && lab[c[i][j]] == Some(add(a, b)),
            _ => false,
        })
    });
    (lab, consistent)
}

/// Norm-4 tuples of a type with |coords| <= radius (not filtered by integrality).
pub fn norm4_tuples3(ty: [i64; 4], radius: i64) -> Vec<TypedElementRank3> {
    let mut out = vec![];
    for u in -radius..=radius {
        for v in -radius..=radius {
            for w in -radius..=radius {
                let rest = 4 - u * u * ty[0] + v * v * ty[1] + w * w * ty[2];
                if rest % ty[3] != 0 {
                    continue;
                }
                let x2 = rest / ty[3];
                if x2 < 0 {
                    continue;
                }
                let x = x2.isqrt();
                if x * x != x2 || x > radius {
                    continue;
                }
                for s in if x == 0 { vec![0] } else { vec![x, -x] } {
                    out.push(TypedElementRank3 { ty, coords: [u, v, w, s] });
                }
            }
        }
    }
    out
}

/// Members of a type with |coords| <= radius.
pub fn sample_rank3(ty: [i64; 4], radius: i64) -> Vec<TypedElementRank3> {
    norm4_tuples3(ty, radius).into_iter().filter(|e| gamma2_member(e).is_ok()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ParityRow {
    pub ty: [i64; 4],
    pub tuples: usize,
    pub integral: usize,
    pub parity_holds: usize,
    pub parity_iff_integral: bool,
}

/// Whether u = v, w = x mod 2 is exactly the integrality condition, per type.
pub fn parity_survey(radius: i64) -> Vec<ParityRow> {
    rank3_types()
        .into_par_iter()
        .map(|ty| {
            let tuples = norm4_tuples3(ty, radius);
            let flags: Vec<(bool, bool)> = tuples.iter().map(|e| (gamma2_member(e).is_ok(), e.parity_ok())).collect();
            ParityRow {
                ty,
                tuples: tuples.len(),
                integral: flags.iter().filter(|f| f.0).count(),
                parity_holds: flags.iter().filter(|f| f.1).count(),
                parity_iff_integral: flags.iter().all(|(a, b)| a == b),
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CompletenessReport {
    pub bound: i64,
    pub isometries: usize,
    pub so_plus: usize,
    pub typed: usize,
    pub other_components: usize,
    pub untyped: Vec<IMat>,
}

/// Integral isometries of a lattice with entries bounded by `bound`, found
/// column by column.
pub fn bounded_isometries(l: &Lattice, bound: i64) -> Vec<IMat> {
    let n = l.rank();
    let g = &l.gram;
    let width = 2 * bound + 1;
    let vecs: Vec<Vec<i64>> = (0..width.pow(n as u32))
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let c = idx % width - bound;
                    idx /= width;
                    c
                })
                .collect()
        })
        .collect();
    let pair = |x: &[i64], y: &[i64]| -> i64 { (0..n).map(|i| (0..n).map(|j| x[i] * g[i][j] * y[j]).sum::<i64>()).sum() };
    let cands: Vec<Vec<&Vec<i64>>> = (0..n).map(|j| vecs.iter().filter(|v| pair(v, v) == g[j][j]).collect()).collect();
    let mut out = vec![];
    let mut cols: Vec<&Vec<i64>> = vec![];
    fn rec<'a>(
        j: usize,
        n: usize,
        cands: &[Vec<&'a Vec<i64>>],
        cols: &mut Vec<&'a Vec<i64>>,
        g: &[Vec<i64>],
        pair: &dyn Fn(&[i64], &[i64]) -> i64,
        out: &mut Vec<IMat>,
    ) {
        if j == n {
            out.push((0..n).map(|i| (0..n).map(|c| cols[c][i]).collect()).collect());
            return;
        }
        for v in &cands[j] {
            if (0..j).all(|i| pair(cols[i], v) == g[i][j]) {
                cols.push(v);
                rec(j + 1, n, cands, cols, g, pair, out);
                cols.pop();
            }
        }
    }
    rec(0, n, &cands, &mut cols, g, &pair, &mut out);
    out
}

/// Every SO+ isometry of T1 with small entries is Phi1 of a typed element.
pub fn small_box_completeness(bound: i64) -> CompletenessReport {
    let t = t1();
    let all = bounded_isometries(&t, bound);
    let so: Vec<&IMat> = all.iter().filter(|m| imat_det(m) == 1 && in_o_plus(m, &t)).collect();
    let results: Vec<Option<TypedElementRank3>> = so.par_iter().map(|m| type_of_m3(m)).collect();
    let untyped: Vec<IMat> = so.iter().zip(&results).filter(|(_, r)| r.is_none()).map(|(m, _)| (*m).clone()).collect();
    CompletenessReport {
        bound,
        isometries: all.len(),
        so_plus: so.len(),
        typed: results.iter().filter(|r| r.is_some()).count(),
        other_components: all.len() - so.len(),
        untyped,
    }
}

// ------------------------------------------------------------- quaternions

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Quaternion {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub s: i64,
}

impl Quaternion {
    /// p^2 - 21 q^2 - 6 r^2 + 126 s^2.
    pub fn reduced_norm(&self) -> i64 {
        self.p * self.p - 21 * self.q * self.q - 6 * self.r * self.r + 126 * self.s * self.s
    }

    /// psi(q) with i -> diag(sqrt21, -sqrt21), j -> [[0,1],[6,0]], k -> [[0,sqrt21],[-6 sqrt21,0]].
    pub fn matrix(&self) -> FMatrix {
        let s21 = rt(21);
        let (p, q, r, s) = (k(self.p), k(self.q), k(self.r), k(self.s));
        m2(&p + &(&q * &s21), &r + &(&s * &s21), &(&r * &k(6)) - &(&(&s * &k(6)) * &s21), &p - &(&q * &s21))
    }
}

/// x + y theta with theta = 6^(1/4), theta^2 = sqrt6.
#[derive(Clone, Debug, PartialEq)]
struct Ext6(AlgebraicNumber, AlgebraicNumber);

impl Ext6 {
    fn base(x: AlgebraicNumber) -> Self {
        Ext6(x, k(0))
    }
    fn mul(&self, o: &Ext6) -> Ext6 {
        Ext6(&(&self.0 * &o.0) + &(&(&self.1 * &o.1) * &rt(6)), &(&self.0 * &o.1) + &(&self.1 * &o.0))
    }
    fn add(&self, o: &Ext6) -> Ext6 {
        Ext6(&self.0 + &o.0, &self.1 + &o.1)
    }
}

fn ext_mat_mul(a: &[[Ext6; 2]; 2], b: &[[Ext6; 2]; 2]) -> [[Ext6; 2]; 2] {
    let e = |i: usize, j: usize| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Conjugate X by A^-1 ( . ) A with A = [[0, 6^(-1/4)], [-6^(1/4), 0]], in K(6^(1/4)).
pub fn conjugate_by_a_inverse(x: &FMatrix) -> Result<FMatrix, ArithError> {
    let z = || Ext6::base(k(0));
    // 6^(-1/4) = 6^(3/4)/6 = theta^3 / 6 = theta sqrt6 / 6
    let th_inv = Ext6(k(0), rt(6) / k(6));
    let th = Ext6(k(0), k(1));
    let neg = |e: &Ext6| Ext6(-&e.0, -&e.1);
    let a = [[z(), th_inv.clone()], [neg(&th), z()]];
    let a_inv = [[z(), neg(&th_inv)], [th, z()]];
    let xe = [[Ext6::base(x.get(0, 0).clone()), Ext6::base(x.get(0, 1).clone())], [Ext6::base(x.get(1, 0).clone()), Ext6::base(x.get(1, 1).clone())]];
    let y = ext_mat_mul(&ext_mat_mul(&a_inv, &xe), &a);
    if y.iter().flatten().any(|e| !e.1.is_zero()) {
        return Err(ArithError::NotInField);
    }
    Ok(m2(y[0][0].0.clone(), y[0][1].0.clone(), y[1][0].0.clone(), y[1][1].0.clone()))
}

/// A unit of the order lands in the principal-type subgroup with even coordinates.
pub fn quaternion_embed(q: &Quaternion) -> Result<TypedElementRank3, ArithError> {
    if q.reduced_norm() != 1 {
        return Err(ArithError::NormNotOne);
    }
    let x = q.matrix();
    debug_assert!(x.det().is_one());
    let y = conjugate_by_a_inverse(&x)?;
    let t = type_of_h3(&y).ok_or(ArithError::NonIntegralImage)?;
    if t.ty != [1, 21, 6, 14] || t.coords.iter().any(|c| c % 2 != 0) {
        return Err(ArithError::NonIntegralImage);
    }
    gamma2_member(&t)?;
    Ok(t)
}

/// Units of the order with |p|,|q|,|r|,|s| <= bound.
pub fn quaternion_units(bound: i64) -> Vec<Quaternion> {
    let mut out = vec![];
    for q in -bound..=bound {
        for r in -bound..=bound {
            for s in -bound..=bound {
                let p2 = 1 + 21 * q * q + 6 * r * r - 126 * s * s;
                if p2 < 0 {
                    continue;
                }
                let p = p2.isqrt();
                if p * p == p2 && p <= bound {
                    for pp in if p == 0 { vec![0] } else { vec![p, -p] } {
                        out.push(Quaternion { p: pp, q, r, s });
                    }
                }
            }
        }
    }
    out
}

/// Every solution of u^2 - 21v^2 - 6w^2 + 14x^2 = 4 in the box has 3 | x.
/// Returns (number of solutions, all divisible).
pub fn mod3_lemma(bound: i64) -> (usize, bool) {
    let sols = norm4_tuples3([1, 21, 6, 14], bound);
    let ok = sols.iter().all(|e| e.coords[3] % 3 == 0);
    (sols.len(), ok)
}

// ------------------------------------------------------------------ rank 4

pub fn rank4_types() -> Vec<[i64; 4]> {
    [[1, 21, 3, 7], [2, 42, 6, 14]].iter().flat_map(|&b| (0..4).map(move |w| klein(b, w))).collect()
}

/// Octuple (a1, a2, b1, b2, g1, g2, d1, d2) of a type (alpha, beta, gamma, delta).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TypedElementRank4 {
    pub ty: [i64; 4],
    pub c: [i64; 8],
}

impl TypedElementRank4 {
    pub fn norm(&self) -> i64 {
        let (t, c) = (self.ty, self.c);
        c[0] * c[1] * t[0] - c[2] * c[3] * t[1] - c[4] * c[5] * t[2] + c[6] * c[7] * t[3]
    }

    pub fn parity_ok(&self) -> bool {
        let c = self.c;
        (c[0] - c[2]).is_even() && (c[1] - c[3]).is_even() && (c[4] - c[6]).is_even() && (c[5] - c[7]).is_even()
    }

    pub fn det_condition(&self) -> bool {
        let c = self.c;
        c[0] * c[3] - c[1] * c[2] == c[4] * c[7] - c[5] * c[6]
    }

    pub fn pair(&self) -> (FMatrix, FMatrix) {
        let (t, c) = (self.ty, self.c);
        let s = |i: usize, x: i64| rt(t[i]).scale(&rat(x, 1));
        let half = kq(rat(1, 2));
        let r7 = rt(7);
        let r7i = r7.inverse().unwrap();
        let (a1, a2, b1, b2, g1, g2, d1, d2) = (c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7]);
        let h1 = m2(
            &(&s(0, a1) + &s(1, b1)) * &half,
            &(&(&s(2, g1) + &s(3, d1)) * &half) * &r7i,
            &(&(&s(2, g2) - &s(3, d2)) * &half) * &r7,
            &(&s(0, a2) - &s(1, b2)) * &half,
        );
        let h2 = m2(
            &(&s(0, a2) + &s(1, b2)) * &half,
            &(&(&s(2, g2) + &s(3, d2)) * &half) * &r7,
            &(&(&s(2, g1) - &s(3, d1)) * &half) * &r7i,
            &(&s(0, a1) - &s(1, b1)) * &half,
        );
        (h1, h2)
    }
}

pub fn b2() -> FMatrix {
    let q = |s: &str| parse_number(s).unwrap().inject(&kfield()).unwrap();
    FMatrix::from_rows(vec![
        vec![q("-sqrt21/42 - 1/2"), q("0"), q("0"), q("-sqrt21/42 + 1/2")],
        vec![q("-sqrt21/21"), q("0"), q("0"), q("-sqrt21/21")],
        vec![q("0"), q("1"), q("0"), q("0")],
        vec![q("0"), q("0"), q("-1/7"), q("0")],
    ])
}

fn b2_inv() -> FMatrix {
    static INV: OnceLock<FMatrix> = OnceLock::new();
    INV.get_or_init(|| b2().inverse().unwrap()).clone()
}

pub fn phi2(h1: &FMatrix, h2: &FMatrix) -> Result<FMatrix, ArithError> {
    if !h1.det().is_one() || !h2.det().is_one() {
        return Err(ArithError::NotUnimodular);
    }
    let (h1, h2) = (h1.lift(&kfield()).map_err(|_| ArithError::NotInField)?, h2.lift(&kfield()).map_err(|_| ArithError::NotInField)?);
    Ok(&(&b2() * &h1.kron(&h2)) * &b2_inv())
}

pub fn gammaprime_member(e: &TypedElementRank4) -> Result<IMat, ArithError> {
    if !rank4_types().contains(&e.ty) {
        return Err(ArithError::UnknownType(e.ty));
    }
    if !e.parity_ok() {
        return Err(ArithError::ParityViolation);
    }
    if !e.det_condition() {
        return Err(ArithError::DeterminantMismatch);
    }
    if e.norm() != 4 {
        return Err(ArithError::NormNotFour);
    }
    let (h1, h2) = e.pair();
    let m = to_imat(&phi2(&h1, &h2)?).ok_or(ArithError::NonIntegralImage)?;
    let t = t2();
    if !is_isometry(&m, &t) || imat_det(&m) != 1 || !in_o_plus(&m, &t) {
        return Err(ArithError::NotIsometry);
    }
    Ok(m)
}

pub fn type_of_pair(h1: &FMatrix, h2: &FMatrix) -> Option<TypedElementRank4> {
    let (h1, h2) = (h1.lift(&kfield()).ok()?, h2.lift(&kfield()).ok()?);
    let r7 = rt(7);
    let (a1, b1, c1, d1) = (h1.get(0, 0), h1.get(0, 1), h1.get(1, 0), h1.get(1, 1));
    let (a2, b2, c2, d2) = (h2.get(0, 0), h2.get(0, 1), h2.get(1, 0), h2.get(1, 1));
    // (u1, u2, v1, v2, w1, w2, x1, x2)
    let vals = [
        a1 + d2,
        a2 + d1,
        a1 - d2,
        a2 - d1,
        &r7 * &(b1 + c2),
        &(b2 + c1) / &r7,
        &r7 * &(b1 - c2),
        &(b2 - c1) / &r7,
    ];
    rank4_types().into_iter().find_map(|ty| {
        let mut c = [0i64; 8];
        for i in 0..8 {
            c[i] = int_over_sqrt(&vals[i], ty[i / 2])?;
        }
        let e = TypedElementRank4 { ty, c };
        let (g1, g2) = e.pair();
        (g1 == h1 && g2 == h2).then_some(e)
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Table3Row {
    pub ty: [i64; 4],
    pub c: [i64; 8],
    pub member: bool,
    pub matches_display: bool,
    pub image: Option<IMat>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table3Report {
    pub rows: Vec<Table3Row>,
    pub cayley: Vec<Vec<usize>>,
    pub klein_four: bool,
    pub impossible_pattern_mod4: bool,
}

fn table3_data() -> Vec<([i64; 4], [i64; 8], [&'static str; 8])> {
    vec![
        ([1, 21, 3, 7], [2, 2, 0, 0, 0, 0, 0, 0], ["1", "0", "0", "1", "1", "0", "0", "1"]),
        ([21, 1, 7, 3], [0, 0, 2, -2, 0, 0, 0, 0], ["1", "0", "0", "1", "-1", "0", "0", "-1"]),
        ([3, 7, 1, 21], [0, 0, 0, 0, 2, -2, 0, 0], ["0", "1/sqrt7", "-sqrt7", "0", "0", "-sqrt7", "1/sqrt7", "0"]),
        ([7, 3, 21, 1], [0, 0, 0, 0, 0, 0, 2, 2], ["0", "1/sqrt7", "-sqrt7", "0", "0", "sqrt7", "-1/sqrt7", "0"]),
    ]
}

pub fn verify_table3() -> Table3Report {
    let q = |s: &str| parse_number(s).unwrap().inject(&kfield()).unwrap();
    let mut rows = vec![];
    let mut reps = vec![];
    for (ty, c, d) in table3_data() {
        let e = TypedElementRank4 { ty, c };
        let (h1, h2) = e.pair();
        let disp1 = m2(q(d[0]), q(d[1]), q(d[2]), q(d[3]));
        let disp2 = m2(q(d[4]), q(d[5]), q(d[6]), q(d[7]));
        let image = gammaprime_member(&e).ok();
        rows.push(Table3Row { ty, c, member: image.is_some(), matches_display: disp1 == h1 && disp2 == h2, image });
        reps.push((h1, h2));
    }
    let types: Vec<[i64; 4]> = rows.iter().map(|r| r.ty).collect();
    let cayley: Vec<Vec<usize>> = reps
        .iter()
        .map(|a| {
            reps.iter()
                .map(|b| {
                    type_of_pair(&(&a.0 * &b.0), &(&a.1 * &b.1)).and_then(|t| types.iter().position(|x| *x == t.ty)).unwrap_or(usize::MAX)
                })
                .collect()
        })
        .collect();
    let klein_four = is_elementary_abelian(&cayley);
    Table3Report { rows, cayley, klein_four, impossible_pattern_mod4: pattern_2_42_6_14_impossible() }
}

/// For every Klein permutation of (2,42,6,14): no residue class mod 4 with the
/// parity and determinant conditions makes the halved norm equal 2.
pub fn pattern_2_42_6_14_impossible() -> bool {
    (0..4).all(|w| {
        let t = klein([1, 21, 3, 7], w);
        (0..4u32.pow(8)).all(|idx| {
            let c: Vec<i64> = (0..8).map(|i| ((idx >> (2 * i)) & 3) as i64).collect();
            let par = (c[0] - c[2]) % 2 == 0 && (c[1] - c[3]) % 2 == 0 && (c[4] - c[6]) % 2 == 0 && (c[5] - c[7]) % 2 == 0;
            let det = (c[0] * c[3] - c[1] * c[2] - c[4] * c[7] + c[5] * c[6]).rem_euclid(4) == 0;
            let half_norm = c[0] * c[1] * t[0] - c[2] * c[3] * t[1] - c[4] * c[5] * t[2] + c[6] * c[7] * t[3];
            !(par && det && half_norm.rem_euclid(4) == 2)
        })
    })
}

/// Norm-4 octuples of type (1,21,3,7)-family with small entries, solving
/// the two constraints for (a2, b2).
pub fn sample_rank4(ty: [i64; 4], radius: i64) -> Vec<TypedElementRank4> {
    let mut out = vec![];
    let r = radius;
    for a1 in -r..=r {
        for b1 in -r..=r {
            let det = a1 * a1 * ty[0] - b1 * b1 * ty[1];
            if det == 0 {
                continue;
            }
            for g1 in -r..=r {
                for d1 in -r..=r {
                    for g2 in -r..=r {
                        for d2 in -r..=r {
                            // a1 ty0 a2 - b1 ty1 b2 = n ; -b1 a2 + a1 b2 = m
                            let n = 4 + g1 * g2 * ty[2] - d1 * d2 * ty[3];
                            let m = g1 * d2 - g2 * d1;
                            let a2n = n * a1 + ty[1] * b1 * m;
                            let b2n = a1 * ty[0] * m + b1 * n;
                            if a2n % det != 0 || b2n % det != 0 {
                                continue;
                            }
                            let e = TypedElementRank4 { ty, c: [a1, a2n / det, b1, b2n / det, g1, g2, d1, d2] };
                            if e.parity_ok() && e.norm() == 4 && e.det_condition() {
                                out.push(e);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

// ----------------------------------------------------------- Hilbert side

/// a + b sqrt21 with rational a, b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadElt {
    pub a: Rational,
    pub b: Rational,
}

impl QuadElt {
    pub fn new(a: Rational, b: Rational) -> Self {
        QuadElt { a, b }
    }
    pub fn int(n: i64) -> Self {
        QuadElt::new(rat(n, 1), rat(0, 1))
    }
    pub fn add(&self, o: &Self) -> Self {
        QuadElt::new(&self.a + &o.a, &self.b + &o.b)
    }
    pub fn sub(&self, o: &Self) -> Self {
        QuadElt::new(&self.a - &o.a, &self.b - &o.b)
    }
    pub fn mul(&self, o: &Self) -> Self {
        QuadElt::new(&self.a * &o.a + &self.b * &o.b * rat(21, 1), &self.a * &o.b + &self.b * &o.a)
    }
    pub fn conj(&self) -> Self {
        QuadElt::new(self.a.clone(), -self.b.clone())
    }
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * rat(21, 1)
    }
    pub fn inverse(&self) -> Self {
        let n = self.norm();
        let c = self.conj();
        QuadElt::new(&c.a / &n, &c.b / &n)
    }
    /// Membership in Z[(1+sqrt21)/2]: 2a, 2b integers of equal parity.
    pub fn is_integral(&self) -> bool {
        let (a2, b2) = (&self.a * rat(2, 1), &self.b * rat(2, 1));
        a2.is_integer() && b2.is_integer() && (a2.to_integer() - b2.to_integer()).is_even()
    }
    pub fn to_k(&self) -> AlgebraicNumber {
        &kq(self.a.clone()) + &(&kq(self.b.clone()) * &rt(21))
    }
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

/// The prime (7 + sqrt21)/2 above 7.
pub fn prime_p() -> QuadElt {
    QuadElt::new(rat(7, 2), rat(1, 2))
}

/// (1 + sqrt21)/2.
pub fn omega_f() -> QuadElt {
    QuadElt::new(rat(1, 2), rat(1, 2))
}

/// The fundamental unit (5 + sqrt21)/2.
pub fn unit_f() -> QuadElt {
    QuadElt::new(rat(5, 2), rat(1, 2))
}

pub type QMat = [[QuadElt; 2]; 2];

pub fn qmat_mul(x: &QMat, y: &QMat) -> QMat {
    let e = |i: usize, j: usize| x[i][0].mul(&y[0][j]).add(&x[i][1].mul(&y[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn qmat_det(x: &QMat) -> QuadElt {
    x[0][0].mul(&x[1][1]).sub(&x[0][1].mul(&x[1][0]))
}

fn qmat_to_k(x: &QMat) -> FMatrix {
    m2(x[0][0].to_k(), x[0][1].to_k(), x[1][0].to_k(), x[1][1].to_k())
}

/// a, d in O_F; b in p^-1; c in p.
pub fn hilbert_member(m: &QMat) -> Result<bool, ArithError> {
    if qmat_det(m) != QuadElt::int(1) {
        return Err(ArithError::NotUnimodular);
    }
    let p = prime_p();
    Ok(m[0][0].is_integral() && m[1][1].is_integral() && m[0][1].mul(&p).is_integral() && m[1][0].mul(&p.inverse()).is_integral())
}

/// (M, C M' C^-1) with M' the Galois conjugate and C = [[0,-1],[1,0]].
pub fn hilbert_map(m: &QMat) -> Result<(FMatrix, FMatrix), ArithError> {
    if qmat_det(m) != QuadElt::int(1) {
        return Err(ArithError::NotUnimodular);
    }
    let c = |x: &QuadElt| x.conj();
    // C [[a,b],[c,d]] C^-1 = [[d,-c],[-b,a]]
    let neg = |x: &QuadElt| QuadElt::new(-x.a.clone(), -x.b.clone());
    let h2: QMat = [[c(&m[1][1]), neg(&c(&m[1][0]))], [neg(&c(&m[0][1])), c(&m[0][0])]];
    Ok((qmat_to_k(m), qmat_to_k(&h2)))
}

fn k_to_quad(x: &AlgebraicNumber) -> Option<QuadElt> {
    // x = a + b sqrt21 exactly
    let r21 = rt(21);
    for_quad(x, &r21)
}

fn for_quad(x: &AlgebraicNumber, r21: &AlgebraicNumber) -> Option<QuadElt> {
    let y = x.inject(&kfield()).ok()?;
    // coordinates: try b = (x - x')/(2 sqrt21) with x' the sqrt3 flip
    let conj = y.radical_automorphism(|r| r % 3 == 0);
    let b = (&(&y - &conj) / &(r21 * &k(2))).to_rational()?;
    let a = (&y - &(r21 * &kq(b.clone()))).to_rational()?;
    Some(QuadElt::new(a, b))
}

/// Inverse of hilbert_map on its image.
pub fn hilbert_pullback(h1: &FMatrix, h2: &FMatrix) -> Option<QMat> {
    let e = |i: usize, j: usize| k_to_quad(h1.get(i, j));
    let m: QMat = [[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]];
    let (g1, g2) = hilbert_map(&m).ok()?;
    (g1 == *h1 && g2 == *h2).then_some(m)
}

/// A random element of Gamma(O_F + p): a word of `height` elementary factors.
pub fn random_hilbert_element(rng: &mut ChaCha8Rng, height: usize) -> QMat {
    let one = QuadElt::int(1);
    let zero = QuadElt::int(0);
    let mut m: QMat = [[one.clone(), zero.clone()], [zero.clone(), one.clone()]];
    let p = prime_p();
    let pinv = p.inverse();
    for _ in 0..height {
        let n = QuadElt::int(rng.gen_range(-2..=2));
        let scale = if rng.gen_bool(0.5) { one.clone() } else { omega_f() };
        let g: QMat = match rng.gen_range(0..3) {
            0 => [[one.clone(), n.mul(&scale).mul(&pinv)], [zero.clone(), one.clone()]],
            1 => [[one.clone(), zero.clone()], [n.mul(&scale).mul(&p), one.clone()]],
            _ => {
                let u = if rng.gen_bool(0.5) { unit_f() } else { unit_f().inverse() };
                [[u.clone(), zero.clone()], [zero.clone(), u.inverse()]]
            }
        };
        m = qmat_mul(&m, &g);
    }
    m
}

#[derive(Clone, Debug, Serialize)]
pub struct HilbertReport {
    pub seed: u64,
    pub count: usize,
    pub height: usize,
    pub forward_ok: usize,
    pub roundtrip_ok: usize,
    pub pullback_samples: usize,
    pub pullback_ok: usize,
}

/// Random Hilbert elements map to type (1,21,3,7) members and back; random
/// products of small H elements pull back to the Hilbert group.
pub fn hilbert_roundtrip(seed: u64, count: usize, height: usize) -> HilbertReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words: Vec<QMat> = (0..count).map(|_| random_hilbert_element(&mut rng, height)).collect();
    let results: Vec<(bool, bool)> = words
        .par_iter()
        .map(|m| {
            let Ok((h1, h2)) = hilbert_map(m) else { return (false, false) };
            let typed = type_of_pair(&h1, &h2);
            let fwd = hilbert_member(m) == Ok(true)
                && typed.is_some_and(|t| t.ty == [1, 21, 3, 7] && gammaprime_member(&t).is_ok());
            let back = hilbert_pullback(&h1, &h2).is_some_and(|b| &b == m);
            (fwd, back)
        })
        .collect();
    let seeds = sample_rank4([1, 21, 3, 7], 2);
    let samples: Vec<(FMatrix, FMatrix)> = (0..count)
        .map(|_| {
            let mut acc = (FMatrix::identity(2, &kfield()), FMatrix::identity(2, &kfield()));
            for _ in 0..rng.gen_range(1..=3) {
                let (g1, g2) = seeds[rng.gen_range(0..seeds.len())].pair();
                acc = (&acc.0 * &g1, &acc.1 * &g2);
            }
            acc
        })
        .collect();
    let pull_ok = samples.par_iter().filter(|(h1, h2)| hilbert_pullback(h1, h2).is_some_and(|m| hilbert_member(&m) == Ok(true))).count();
    HilbertReport {
        seed,
        count,
        height,
        forward_ok: results.iter().filter(|r| r.0).count(),
        roundtrip_ok: results.iter().filter(|r| r.1).count(),
        pullback_samples: samples.len(),
        pullback_ok: pull_ok,
    }
}

// ------------------------------------------------------------- involutions

pub fn p_matrix() -> IMat {
    vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 0, -1], vec![0, 0, -1, 0]]
}

/// F-hat = ([[0, 1/sqrt7], [-sqrt7, 0]], [[0, sqrt7], [-1/sqrt7, 0]]).
pub fn f_hat() -> (FMatrix, FMatrix) {
    let r7 = rt(7);
    let r7i = r7.inverse().unwrap();
    (m2(k(0), r7i.clone(), -&r7, k(0)), m2(k(0), r7.clone(), -&r7i, k(0)))
}

#[derive(Clone, Debug, Serialize)]
pub struct InvolutionReport {
    pub p_isometry: bool,
    pub p_in_o_plus: bool,
    pub p_squared_identity: bool,
    pub p_det: i64,
    pub minus_id_t1_z3: Option<Z3Action>,
    pub f_hat_image: Option<IMat>,
    pub f_hat_involution: bool,
    pub f_hat_det: Option<i64>,
    pub f_hat_z3: Option<Z3Action>,
    pub kernel_trivial: bool,
}

pub fn involution_checks() -> InvolutionReport {
    let (t1l, t2l) = (t1(), t2());
    let p = p_matrix();
    let minus = vec![vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]];
    let (f1, f2) = f_hat();
    let img = phi2(&f1, &f2).ok().and_then(|m| to_imat(&m));
    let id2 = FMatrix::identity(2, &kfield());
    let mid = id2.scale(&k(-1));
    let kernel_trivial = phi2(&mid, &mid).is_ok_and(|m| m.is_identity()) && phi2(&id2, &id2).is_ok_and(|m| m.is_identity());
    InvolutionReport {
        p_isometry: is_isometry(&p, &t2l),
        p_in_o_plus: in_o_plus(&p, &t2l),
        p_squared_identity: imat_mul(&p, &p) == imat_identity(4),
        p_det: imat_det(&p),
        minus_id_t1_z3: z3_action(&minus, &t1l).ok(),
        f_hat_involution: img.as_ref().is_some_and(|m| imat_mul(m, m) == imat_identity(4)),
        f_hat_det: img.as_ref().map(imat_det),
        f_hat_z3: img.as_ref().and_then(|m| z3_action(m, &t2l).ok()),
        f_hat_image: img,
        kernel_trivial,
    }
}

// ------------------------------------------------------------ properties

/// A random SL2 matrix over K built from elementary factors.
pub fn random_sl2_k(rng: &mut ChaCha8Rng) -> FMatrix {
    let mut m = FMatrix::identity(2, &kfield());
    for _ in 0..3 {
        let t = &kq(rat(rng.gen_range(-3..=3), rng.gen_range(1..=3))) + &rt([1, 2, 3, 6, 7, 14, 21, 42][rng.gen_range(0..8)]).scale(&rat(rng.gen_range(-2..=2), 1));
        let e = if rng.gen_bool(0.5) { m2(k(1), t, k(0), k(1)) } else { m2(k(1), k(0), t, k(1)) };
        m = &m * &e;
    }
    m
}

/// Phi1 and Phi2 are homomorphisms and land in the isometry groups of
/// T1 and T2 (checked over K).
pub fn homomorphism_check(seed: u64, trials: usize) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g1 = FMatrix::from_ints(&kfield(), &t1().gram);
    let g2 = FMatrix::from_ints(&kfield(), &t2().gram);
    (0..trials).all(|_| {
        let (a, b, c, d) = (random_sl2_k(&mut rng), random_sl2_k(&mut rng), random_sl2_k(&mut rng), random_sl2_k(&mut rng));
        let (pa, pb) = (phi1(&a).unwrap(), phi1(&b).unwrap());
        let hom1 = phi1(&(&a * &b)).unwrap() == &pa * &pb;
        let iso1 = &(&pa.transpose() * &g1) * &pa == g1;
        let (qa, qb) = (phi2(&a, &c).unwrap(), phi2(&b, &d).unwrap());
        let hom2 = phi2(&(&a * &b), &(&c * &d)).unwrap() == &qa * &qb;
        let iso2 = &(&qa.transpose() * &g2) * &qa == g2;
        hom1 && iso1 && hom2 && iso2
    })
}

/// On norm-4 octuples (solved for a2 from the norm), the determinant
/// condition holds iff both factors have determinant 1.
pub fn determinant_equivalence(seed: u64, trials: usize) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    let mut guard = 0;
    while checked < trials && guard < 100 * trials {
        guard += 1;
        let ty = [1, 21, 3, 7];
        let mut c = [0i64; 8];
        for x in c.iter_mut() {
            *x = rng.gen_range(-4..=4);
        }
        // solve a1 a2 = 4 + 21 b1 b2 + 3 g1 g2 - 7 d1 d2 for a2
        let n = 4 + 21 * c[2] * c[3] + 3 * c[4] * c[5] - 7 * c[6] * c[7];
        if c[0] == 0 || n % c[0] != 0 {
            continue;
        }
        c[1] = n / c[0];
        let e = TypedElementRank4 { ty, c };
        debug_assert_eq!(e.norm(), 4);
        let (h1, h2) = e.pair();
        let dets = h1.det().is_one() && h2.det().is_one();
        if dets != e.det_condition() {
            return false;
        }
        checked += 1;
    }
    checked == trials
}

/// Products of sampled H elements stay in H, and conjugates by every table
/// representative stay in H.  Returns (products checked, conjugates checked, ok).
pub fn closure_and_normality(seed: u64, trials: usize) -> (usize, usize, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = sample_rank3([1, 21, 6, 14], 6);
    let reps: Vec<TypedElementRank3> = table2_data().iter().map(|d| TypedElementRank3 { ty: d.ty, coords: d.coords }).collect();
    let mut ok = true;
    let mut prods = 0;
    let mut conjs = 0;
    for _ in 0..trials {
        let (a, b) = (&h[rng.gen_range(0..h.len())], &h[rng.gen_range(0..h.len())]);
        ok &= type_compose3(a, b).is_some_and(|t| t.ty == [1, 21, 6, 14]);
        prods += 1;
        let r = &reps[rng.gen_range(0..reps.len())];
        let rm = r.matrix();
        let c = &(&rm * &a.matrix()) * &rm.inverse().unwrap();
        ok &= type_of_h3(&c).is_some_and(|t| t.ty == [1, 21, 6, 14]);
        conjs += 1;
    }
    (prods, conjs, ok)
}

/// Cosets multiply consistently with the representative table on sampled elements.
pub fn sampled_coset_check(radius: i64) -> bool {
    let report_cayley = {
        let reps: Vec<TypedElementRank3> = table2_data().iter().map(|d| TypedElementRank3 { ty: d.ty, coords: d.coords }).collect();
        reps.iter().map(|a| reps.iter().map(|b| type_compose3(a, b).map(|t| t.ty)).collect::<Vec<_>>()).collect::<Vec<_>>()
    };
    let types = rank3_types();
    let samples: Vec<Vec<TypedElementRank3>> = types.iter().map(|&t| sample_rank3(t, radius).into_iter().take(3).collect()).collect();
    (0..8).into_par_iter().all(|i| {
        (0..8).all(|j| {
            samples[i].iter().all(|a| samples[j].iter().all(|b| type_compose3(a, b).map(|t| t.ty) == report_cayley[i][j]))
        })
    })
}
