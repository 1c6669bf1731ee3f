//! Integral lattices: Smith form, discriminant forms, Milgram's formula,
//! isotropic vectors and local obstructions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{cyclotomic, AlgebraicNumber, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("gram matrix is degenerate")]
    Degenerate,
    #[error("lattice is not even")]
    NotEven,
    #[error("modulus {0} is not a prime power <= 1024")]
    ModulusTooLarge(u64),
    #[error("bad lattice description: {0}")]
    Parse(String),
}

pub type IntMat = Vec<Vec<BigInt>>;

fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn int_mat(rows: &[Vec<i64>]) -> IntMat {
    rows.iter().map(|r| r.iter().map(|&x| bi(x)).collect()).collect()
}

fn identity(n: usize) -> IntMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn mat_mul(a: &IntMat, b: &IntMat) -> IntMat {
    let (n, m, p) = (a.len(), b.len(), b[0].len());
    (0..n).map(|i| (0..p).map(|j| (0..m).map(|k| &a[i][k] * &b[k][j]).sum()).collect()).collect()
}

pub fn transpose(a: &IntMat) -> IntMat {
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Smith normal form: (U, D, V) with U M V = D, U and V unimodular and
/// d_i | d_(i+1) with nonnegative diagonal.
pub fn smith_normal_form(m: &IntMat) -> (IntMat, IntMat, IntMat) {
    let (r, c) = (m.len(), m[0].len());
    let mut d = m.clone();
    let mut u = identity(r);
    let mut v = identity(c);
    let row_op = |a: &mut IntMat, i: usize, j: usize, k: &BigInt| {
        // row i -= k * row j
        let rj = a[j].clone();
        for (x, y) in a[i].iter_mut().zip(&rj) {
            *x -= k * y;
        }
    };
    let col_op = |a: &mut IntMat, i: usize, j: usize, k: &BigInt| {
        for row in a.iter_mut() {
            let y = row[j].clone();
            row[i] -= k * y;
        }
    };
    let swap_cols = |a: &mut IntMat, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    };
    for t in 0..r.min(c) {
        loop {
            // smallest nonzero entry of the remaining block to (t,t)
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if !d[i][j].is_zero() && best.is_none_or(|(a, b)| d[i][j].abs() < d[a][b].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { return (u, d, v) };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);
            let mut clean = true;
            for i in t + 1..r {
                let q = d[i][t].div_floor(&d[t][t]);
                row_op(&mut d, i, t, &q);
                row_op(&mut u, i, t, &q);
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..c {
                let q = d[t][j].div_floor(&d[t][t]);
                col_op(&mut d, j, t, &q);
                col_op(&mut v, j, t, &q);
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold a non-multiple into row t
            let bad = (t + 1..r).flat_map(|i| (t + 1..c).map(move |j| (i, j))).find(|&(i, j)| !d[i][j].is_multiple_of(&d[t][t]));
            match bad {
                Some((i, _)) => {
                    let one = bi(-1);
                    row_op(&mut d, t, i, &one);
                    row_op(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    (u, d, v)
}

pub fn invariant_factors(m: &IntMat) -> Vec<BigInt> {
    let (_, d, _) = smith_normal_form(m);
    (0..m.len().min(m[0].len())).map(|i| d[i][i].clone()).collect()
}

pub fn det(m: &IntMat) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.iter().map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return BigInt::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    det.to_integer()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lattice {
    pub gram: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct LatticeJson {
    gram: Vec<Vec<i64>>,
}

impl Lattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) || (0..n).any(|i| (0..n).any(|j| gram[i][j] != gram[j][i])) {
            return Err(LatticeError::NotSymmetric);
        }
        let l = Lattice { gram };
        if l.det().is_zero() {
            return Err(LatticeError::Degenerate);
        }
        Ok(l)
    }

    pub fn from_json(s: &str) -> Result<Self, LatticeError> {
        let j: LatticeJson = serde_json::from_str(s).map_err(|e| LatticeError::Parse(e.to_string()))?;
        Lattice::new(j.gram)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram_int(&self) -> IntMat {
        int_mat(&self.gram)
    }

    pub fn det(&self) -> BigInt {
        det(&self.gram_int())
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i] % 2 == 0)
    }

    /// (p, q) by rational congruence diagonalization.
    pub fn signature(&self) -> (usize, usize) {
        let n = self.rank();
        let mut a: Vec<Vec<Rational>> =
            self.gram.iter().map(|r| r.iter().map(|&x| Rational::from_integer(bi(x))).collect()).collect();
        let (mut p, mut q) = (0, 0);
        for k in 0..n {
            if a[k][k].is_zero() {
                if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                    a.swap(k, i);
                    for row in a.iter_mut() {
                        row.swap(k, i);
                    }
                } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                    // e_k <- e_k + e_j gives diagonal 2 a_kj
                    for c in 0..n {
                        let t = a[j][c].clone();
                        a[k][c] += t;
                    }
                    for r in 0..n {
                        let t = a[r][j].clone();
                        a[r][k] += t;
                    }
                } else {
                    continue;
                }
            }
            let piv = a[k][k].clone();
            if piv.is_positive() {
                p += 1;
            } else {
                q += 1;
            }
            for i in k + 1..n {
                let f = &a[i][k] / &piv;
                for j in k..n {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
            }
            for j in k + 1..n {
                a[k][j] = Rational::zero();
            }
            for i in k + 1..n {
                a[i][k] = Rational::zero();
            }
        }
        (p, q)
    }

    /// x G y^T for rational coordinate vectors.
    pub fn pair(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let n = self.rank();
        let mut s = Rational::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if self.gram[i][j] != 0 {
                    s += &x[i] * &y[j] * Rational::from_integer(bi(self.gram[i][j]));
                }
            }
        }
        s
    }

    pub fn norm_int(&self, v: &[i64]) -> i64 {
        let n = self.rank();
        (0..n).map(|i| (0..n).map(|j| v[i] * self.gram[i][j] * v[j]).sum::<i64>()).sum()
    }
}

pub fn t1() -> Lattice {
    Lattice::new(vec![vec![-2, 1, 0], vec![1, 10, 0], vec![0, 0, -28]]).unwrap()
}

pub fn t2() -> Lattice {
    Lattice::new(vec![vec![-2, 1, 0, 0], vec![1, 10, 0, 0], vec![0, 0, 0, 7], vec![0, 0, 7, 0]]).unwrap()
}

pub fn hyperbolic() -> Lattice {
    Lattice::new(vec![vec![0, 1], vec![1, 0]]).unwrap()
}

pub fn a2() -> Lattice {
    Lattice::new(vec![vec![2, -1], vec![-1, 2]]).unwrap()
}

pub fn e8() -> Lattice {
    let mut g = vec![vec![0i64; 8]; 8];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = 2;
    }
    // Bourbaki labelling: chain 1-3-4-5-6-7-8 with 2 attached to 4
    for (a, b) in [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)] {
        g[a][b] = -1;
        g[b][a] = -1;
    }
    Lattice::new(g).unwrap()
}

/// Discriminant group L*/L = sum Z/d_i with generators in rational coordinates.
#[derive(Clone, Debug, Serialize)]
pub struct DiscriminantGroup {
    pub rank: usize,
    pub invariant_factors: Vec<u64>,
    #[serde(skip)]
    pub generators: Vec<Vec<Rational>>,
    pub generator_strings: Vec<Vec<String>>,
    /// q(g_i) mod 2Z.
    pub q_values: Vec<String>,
    /// b(g_i, g_j) mod Z.
    pub b_values: Vec<Vec<String>>,
}

fn mod_q(x: &Rational, m: i64) -> Rational {
    let m = Rational::from_integer(bi(m));
    let k = (x / &m).floor();
    x - k * m
}

impl DiscriminantGroup {
    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    /// Every element as a rational coordinate vector.
    pub fn elements(&self) -> Vec<Vec<Rational>> {
        let n = self.rank;
        let mut out = vec![vec![Rational::zero(); n]];
        for (g, &d) in self.generators.iter().zip(&self.invariant_factors) {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for x in &out {
                for k in 0..d {
                    let kk = Rational::from_integer(bi(k as i64));
                    next.push(x.iter().zip(g).map(|(a, b)| a + b * &kk).collect());
                }
            }
            out = next;
        }
        out
    }

    /// Coordinates of x (a dual vector) on the generators, as residues mod d_i.
    pub fn coordinates(&self, lat: &Lattice, x: &[Rational]) -> Vec<u64> {
        let (_, _, v) = smith_normal_form(&lat.gram_int());
        // x = V y with y_i in (1/d_i)Z: y = V^-1 x
        let vinv = int_inverse(&v);
        let n = lat.rank();
        let offset = n - self.invariant_factors.len();
        (0..self.invariant_factors.len())
            .map(|i| {
                let yi: Rational = (0..n).map(|j| Rational::from_integer(vinv[offset + i][j].clone()) * &x[j]).sum();
                let d = self.invariant_factors[i] as i64;
                let k = (yi * Rational::from_integer(bi(d))).to_integer();
                k.mod_floor(&bi(d)).to_u64().unwrap()
            })
            .collect()
    }
}

/// Inverse of a unimodular integer matrix.
pub fn int_inverse(m: &IntMat) -> IntMat {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.iter().map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    let mut inv: Vec<Vec<Rational>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero()).expect("invertible");
        a.swap(p, c);
        inv.swap(p, c);
        let f = a[c][c].clone();
        for j in 0..n {
            a[c][j] = &a[c][j] / &f;
            inv[c][j] = &inv[c][j] / &f;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let g = a[i][c].clone();
                for j in 0..n {
                    let (t, s) = (&g * &a[c][j], &g * &inv[c][j]);
                    a[i][j] -= t;
                    inv[i][j] -= s;
                }
            }
        }
    }
    inv.iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect()
}

pub fn discriminant_group(l: &Lattice) -> DiscriminantGroup {
    let gram = l.gram_int();
    let (_, d, v) = smith_normal_form(&gram);
    let n = l.rank();
    let mut factors = vec![];
    let mut gens = vec![];
    for i in 0..n {
        let di = d[i][i].to_u64().unwrap();
        if di > 1 {
            factors.push(di);
            let den = Rational::from_integer(bi(di as i64));
            gens.push((0..n).map(|r| Rational::from_integer(v[r][i].clone()) / &den).collect::<Vec<_>>());
        }
    }
    let q_values = gens.iter().map(|g| mod_q(&l.pair(g, g), 2).to_string()).collect();
    let b_values = gens.iter().map(|g| gens.iter().map(|h| mod_q(&l.pair(g, h), 1).to_string()).collect()).collect();
    DiscriminantGroup {
        rank: n,
        invariant_factors: factors,
        generator_strings: gens.iter().map(|g| g.iter().map(|x| x.to_string()).collect()).collect(),
        generators: gens,
        q_values,
        b_values,
    }
}

/// q(x+y) - q(x) - q(y) = 2 b(x,y) mod 2Z over every pair of generators and
/// every element against each generator.
pub fn check_qb_consistency(l: &Lattice, a: &DiscriminantGroup) -> bool {
    let els = a.elements();
    els.par_iter().all(|x| {
        a.generators.iter().all(|y| {
            let s: Vec<Rational> = x.iter().zip(y).map(|(p, q)| p + q).collect();
            let lhs = l.pair(&s, &s) - l.pair(x, x) - l.pair(y, y);
            let rhs = l.pair(x, y) * Rational::from_integer(bi(2));
            mod_q(&(lhs - rhs), 2).is_zero()
        })
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MilgramReport {
    pub group_order: u64,
    pub signature: (usize, usize),
    pub phase_mod8: u32,
    pub signature_mod8: u32,
    pub matches: bool,
}

/// Gauss sum sum_x exp(pi i q(x)) over A_L, evaluated exactly in a
/// cyclotomic field; its phase is exp(2 pi i k / 8) for the returned k.
pub fn milgram_phase(l: &Lattice) -> Result<MilgramReport, LatticeError> {
    if !l.is_even() {
        return Err(LatticeError::NotEven);
    }
    let a = discriminant_group(l);
    let e = a.invariant_factors.iter().fold(1u64, |acc, &d| acc.lcm(&d));
    let n = (8u64).lcm(&(2 * e));
    let field = cyclotomic(n as u32);
    let mut counts = vec![BigInt::zero(); n as usize];
    for x in a.elements() {
        // exp(pi i q) = zeta_n^(q n / 2)
        let q = mod_q(&l.pair(&x, &x), 2) * Rational::from_integer(bi(n as i64)) / Rational::from_integer(bi(2));
        assert!(q.is_integer());
        counts[q.to_integer().to_usize().unwrap() % n as usize] += 1;
    }
    let sum = AlgebraicNumber::from_zeta_counts(&field, &counts);
    let order = a.order();
    let step = (n / 8) as i64;
    let mut phase = None;
    for k in 0..8u32 {
        let rot = &sum * &AlgebraicNumber::zeta_power(&field, -(k as i64) * step);
        // rot must be the positive real sqrt(order)
        if rot.conj() == rot && rot.sign() == Ok(crate::exactnum::Sign::Positive) && (&rot * &rot).to_rational() == Some(Rational::from_integer(bi(order as i64))) {
            phase = Some(k);
            break;
        }
    }
    let sig = l.signature();
    let sig8 = ((sig.0 as i64 - sig.1 as i64).rem_euclid(8)) as u32;
    let phase = phase.expect("Gauss sum has modulus sqrt|A|");
    Ok(MilgramReport { group_order: order, signature: sig, phase_mod8: phase, signature_mod8: sig8, matches: phase == sig8 })
}

/// Search max|v_i| <= bound for a nonzero v with v G v^T = 0, solving for the
/// last coordinate so the work is O(bound^(n-1)).
pub fn isotropic_search(l: &Lattice, bound: i64) -> Option<Vec<i64>> {
    let n = l.rank();
    let g = &l.gram;
    let last = n - 1;
    let width = (2 * bound + 1) as u64;
    let total = width.pow(last as u32);
    (0..total).into_par_iter().find_map_first(|idx| {
        let mut v = vec![0i64; n];
        let mut r = idx;
        for c in v.iter_mut().take(last) {
            *c = (r % width) as i64 - bound;
            r /= width;
        }
        // g_ll z^2 + 2 s z + c = 0
        let s: i64 = (0..last).map(|i| g[i][last] * v[i]).sum();
        let c: i64 = (0..last).map(|i| (0..last).map(|j| v[i] * g[i][j] * v[j]).sum::<i64>()).sum();
        let a = g[last][last];
        let roots: Vec<i64> = if a == 0 {
            if s == 0 {
                if c == 0 {
                    vec![0]
                } else {
                    vec![]
                }
            } else if c % (2 * s) == 0 {
                vec![-c / (2 * s)]
            } else {
                vec![]
            }
        } else {
            let disc = s * s - a * c;
            if disc < 0 {
                vec![]
            } else {
                let r = disc.isqrt();
                if r * r != disc {
                    vec![]
                } else {
                    [(-s + r), (-s - r)].into_iter().filter(|x| x % a == 0).map(|x| x / a).collect()
                }
            }
        };
        roots.into_iter().filter(|z| z.abs() <= bound).find_map(|z| {
            let mut w = v.clone();
            w[last] = z;
            (w.iter().any(|&x| x != 0) && l.norm_int(&w) == 0).then_some(w)
        })
    })
}

/// An integer quadratic form sum_{i<=j} c_ij x_i x_j.
#[derive(Clone, Debug, Serialize)]
pub struct QuadForm {
    pub n: usize,
    pub terms: Vec<(usize, usize, i64)>,
}

impl QuadForm {
    pub fn diagonal(c: &[i64]) -> Self {
        QuadForm { n: c.len(), terms: c.iter().enumerate().map(|(i, &x)| (i, i, x)).collect() }
    }

    pub fn eval_mod(&self, x: &[u64], m: u64) -> u64 {
        let m = m as i128;
        let mut s: i128 = 0;
        for &(i, j, c) in &self.terms {
            s = (s + c as i128 * x[i] as i128 % m * x[j] as i128) % m;
        }
        s.rem_euclid(m) as u64
    }
}

fn prime_power(m: u64) -> Option<u64> {
    if m < 2 {
        return None;
    }
    let p = (2..=m).find(|d| m.is_multiple_of(*d))?;
    let mut r = m;
    while r.is_multiple_of(p) {
        r /= p;
    }
    (r == 1).then_some(p)
}

/// True iff the form has no primitive zero modulo `modulus` (a prime power),
/// found by exhaustive residue enumeration.
pub fn local_obstruction(form: &QuadForm, modulus: u64) -> Result<bool, LatticeError> {
    if modulus > 1024 {
        return Err(LatticeError::ModulusTooLarge(modulus));
    }
    let p = prime_power(modulus).ok_or(LatticeError::ModulusTooLarge(modulus))?;
    let n = form.n;
    let total = modulus.pow(n as u32);
    let found = (0..total).into_par_iter().any(|idx| {
        let mut x = vec![0u64; n];
        let mut r = idx;
        for c in x.iter_mut() {
            *c = r % modulus;
            r /= modulus;
        }
        x.iter().any(|&c| c % p != 0) && form.eval_mod(&x, modulus) == 0
    });
    Ok(!found)
}

/// -x^2 + xy + 5y^2 - 14z^2, half the T1 norm.
pub fn t1_half_form() -> QuadForm {
    QuadForm { n: 3, terms: vec![(0, 0, -1), (0, 1, 1), (1, 1, 5), (2, 2, -14)] }
}

/// u^2 - 21v^2 - 6w^2 + 126x^2, the reduced norm of the quaternion order.
pub fn quaternion_norm_form() -> QuadForm {
    QuadForm::diagonal(&[1, -21, -6, 126])
}

/// The value of a rational vector's coordinates as strings (for reports).
pub fn rat_vec_strings(v: &[BigRational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}
