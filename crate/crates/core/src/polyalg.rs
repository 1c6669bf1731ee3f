//! Sparse multivariate polynomials over catalog number fields.
//!
//! Matrices act on forms by (A F)(x) = F(x A) with x a row vector, that is
//! x_i -> sum_j x_j A[j][i].  This is a left action: act(AB, F) = act(A, act(B, F)).

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::exactnum::{
    compose_fields, parse_expr, rat_string, rationals, AlgebraicNumber, Field, NumError, NumExpr,
};
use crate::linalg::{common_field, FMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("chart coordinate vanishes at the point")]
    ChartVanishes,
    #[error("not in span")]
    NotInSpan,
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Exponent vector, ordered graded-lexicographically with x1 > x2 > ...
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_vars(n: usize, vars: &[usize]) -> Self {
        let mut e = vec![0; n];
        for &v in vars {
            e[v] += 1;
        }
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    fn render(&self, name: &str) -> String {
        let mut parts = vec![];
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("{name}{}", i + 1)),
                _ => parts.push(format!("{name}{}^{e}", i + 1)),
            }
        }
        parts.join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.render("x");
        write!(f, "{}", if s.is_empty() { "1".into() } else { s })
    }
}

/// All monomials of degree d in n variables, grlex-descending.
pub fn monomials(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if prefix.len() == n - 1 {
            prefix.push(d as u16);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e as u16);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = vec![];
    rec(n, d, &mut vec![], &mut out);
    out
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, AlgebraicNumber>,
}

/// Homogeneous cubic; same representation as any polynomial.
pub type CubicForm = Poly;

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: AlgebraicNumber) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, i), AlgebraicNumber::one(&rationals()));
        p
    }

    pub fn monomial(m: Monomial, c: AlgebraicNumber) -> Self {
        let mut p = Self::zero(m.nvars());
        p.add_term(m, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, AlgebraicNumber)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, AlgebraicNumber> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: AlgebraicNumber) {
        assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&AlgebraicNumber> {
        self.terms.get(m)
    }

    pub fn coeff_or_zero(&self, m: &Monomial) -> AlgebraicNumber {
        self.terms.get(m).cloned().unwrap_or_else(|| AlgebraicNumber::zero(&rationals()))
    }

    pub fn field(&self) -> Field {
        common_field(self.terms.values())
    }

    pub fn lift(&self, f: &Field) -> Result<Poly, NumError> {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c.inject(f)?);
        }
        Ok(out)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Some(d) if every term has degree d.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn scale(&self, k: &AlgebraicNumber) -> Poly {
        if k.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::constant(self.nvars, AlgebraicNumber::one(&rationals()));
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Substitute x_i -> subs[i].
    pub fn compose(&self, subs: &[Poly]) -> Result<Poly, PolyError> {
        if subs.len() != self.nvars {
            return Err(PolyError::DimensionMismatch(format!(
                "{} substitutions for {} variables",
                subs.len(),
                self.nvars
            )));
        }
        let n = subs.first().map_or(0, |s| s.nvars);
        let mut cache: HashMap<(usize, u16), Poly> = HashMap::new();
        let mut out = Poly::zero(n);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(n, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache.entry((i, e)).or_insert_with(|| subs[i].pow(e as u32)).clone();
                t = &t * &p;
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// (A F)(x) = F(x A).
    pub fn act(&self, a: &FMatrix) -> Result<Poly, PolyError> {
        if !a.is_square() || a.nrows() != self.nvars {
            return Err(PolyError::DimensionMismatch(format!(
                "{}x{} matrix on {} variables",
                a.nrows(),
                a.ncols(),
                self.nvars
            )));
        }
        let n = self.nvars;
        let subs: Vec<Poly> = (0..n)
            .map(|i| Poly::from_terms(n, (0..n).map(|j| (Monomial::var(n, j), a.get(j, i).clone()))))
            .collect();
        self.compose(&subs)
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, c.scale(&crate::exactnum::rat(e as i64, 1)));
        }
        out
    }

    pub fn jacobian(&self) -> Vec<Poly> {
        (0..self.nvars).map(|i| self.derivative(i)).collect()
    }

    pub fn eval(&self, p: &[AlgebraicNumber]) -> AlgebraicNumber {
        assert_eq!(p.len(), self.nvars);
        let f = compose_fields(&self.field(), &common_field(p.iter())).expect("compatible fields");
        let pts: Vec<AlgebraicNumber> = p.iter().map(|x| x.inject(&f).unwrap()).collect();
        let mut powers: Vec<Vec<AlgebraicNumber>> = pts.iter().map(|x| vec![AlgebraicNumber::one(&f), x.clone()]).collect();
        let mut acc = AlgebraicNumber::zero(&f);
        for (m, c) in &self.terms {
            let mut t = c.inject(&f).unwrap();
            for (i, &e) in m.0.iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let nx = powers[i].last().unwrap() * &pts[i];
                    powers[i].push(nx);
                }
                if e > 0 {
                    t = &t * &powers[i][e];
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    pub fn gradient_at(&self, p: &[AlgebraicNumber]) -> Vec<AlgebraicNumber> {
        self.jacobian().iter().map(|d| d.eval(p)).collect()
    }

    /// Hessian of the dehomogenized form (chart variable set to 1) at p,
    /// in the remaining variables.
    pub fn hessian_at(&self, chart: usize, p: &[AlgebraicNumber]) -> Result<FMatrix, PolyError> {
        if p[chart].is_zero() {
            return Err(PolyError::ChartVanishes);
        }
        let inv = p[chart].inverse()?;
        let q: Vec<AlgebraicNumber> = p.iter().map(|x| x * &inv).collect();
        let others: Vec<usize> = (0..self.nvars).filter(|&i| i != chart).collect();
        let firsts: Vec<Poly> = others.iter().map(|&i| self.derivative(i)).collect();
        let k = others.len();
        let mut rows: Vec<Vec<AlgebraicNumber>> = vec![vec![]; k];
        for a in 0..k {
            for b in 0..k {
                let v = if b < a { rows[b][a].clone() } else { firsts[a].derivative(others[b]).eval(&q) };
                rows[a].push(v);
            }
        }
        Ok(FMatrix::from_rows(rows))
    }

    /// sum x_i dF/dx_i.
    pub fn euler(&self) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for i in 0..self.nvars {
            out = &out + &(&Poly::var(self.nvars, i) * &self.derivative(i));
        }
        out
    }

    /// Coordinates of self in the span of `basis`, if it lies there.
    pub fn coords_in(&self, basis: &[Poly]) -> Result<Vec<AlgebraicNumber>, PolyError> {
        let mut mons: Vec<Monomial> = self.terms.keys().cloned().collect();
        for b in basis {
            mons.extend(b.terms.keys().cloned());
        }
        mons.sort();
        mons.dedup();
        let k = basis.len();
        let z = AlgebraicNumber::zero(&rationals());
        let m = FMatrix::from_fn(mons.len(), k + 1, |i, j| {
            let src = if j < k { &basis[j] } else { self };
            src.terms.get(&mons[i]).cloned().unwrap_or_else(|| z.clone())
        });
        let (r, piv) = m.rref();
        if piv.contains(&k) {
            return Err(PolyError::NotInSpan);
        }
        if piv.len() < k {
            return Err(PolyError::DimensionMismatch("basis is dependent".into()));
        }
        Ok((0..k).map(|i| r.get(i, k).clone()).collect())
    }

    /// Scalar lambda with other = lambda * self.
    pub fn scalar_ratio(&self, other: &Poly) -> Option<AlgebraicNumber> {
        let (m, c) = self.terms.iter().next()?;
        let lambda = other.terms.get(m)?.try_div(c).ok()?;
        (&self.scale(&lambda) == other).then_some(lambda)
    }

    pub fn proj_eq(&self, other: &Poly) -> bool {
        self.scalar_ratio(other).is_some()
    }

    /// Render with variables named `name1, name2, ...`.
    pub fn render(&self, name: &str) -> String {
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let ms = m.render(name);
            let (neg, coef) = if let Some(r) = c.to_rational() {
                (r.is_negative(), if r.abs() == crate::exactnum::rat(1, 1) && !ms.is_empty() { String::new() } else { rat_string(&r.abs()) })
            } else if c.term_count() == 1 {
                let s = c.expr_string();
                match s.strip_prefix('-') {
                    Some(t) => (true, t.to_string()),
                    None => (false, s),
                }
            } else {
                (false, format!("({})", c.expr_string()))
            };
            let body = match (coef.is_empty(), ms.is_empty()) {
                (true, _) => ms,
                (false, true) => coef,
                (false, false) => format!("{coef}*{ms}"),
            };
            if out.is_empty() {
                out = if neg { format!("-{body}") } else { body };
            } else {
                out.push_str(if neg { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }

    /// Parse text such as "3/2*x1^2*x2 - (1/7 + 2/7*sqrt2)*x3^3".
    pub fn parse(s: &str, nvars: usize) -> Result<Poly, PolyError> {
        let e = parse_expr(s)?;
        let f = e.natural_field()?;
        Self::from_expr(&e, nvars, &f)
    }

    pub fn parse_in(s: &str, nvars: usize, field: &Field) -> Result<Poly, PolyError> {
        Self::from_expr(&parse_expr(s)?, nvars, field)
    }

    fn from_expr(e: &NumExpr, n: usize, f: &Field) -> Result<Poly, PolyError> {
        use NumExpr::*;
        if let Some(v) = e.max_var() {
            if v >= n {
                return Err(PolyError::DimensionMismatch(format!("x{} with {} variables", v + 1, n)));
            }
        }
        Ok(match e {
            Int(_) | Const(_) => Poly::constant(n, e.eval(f)?),
            Var(i) => Poly::var(n, *i),
            Add(a, b) => &Self::from_expr(a, n, f)? + &Self::from_expr(b, n, f)?,
            Sub(a, b) => &Self::from_expr(a, n, f)? - &Self::from_expr(b, n, f)?,
            Mul(a, b) => &Self::from_expr(a, n, f)? * &Self::from_expr(b, n, f)?,
            Div(a, b) => {
                if b.max_var().is_some() {
                    return Err(NumError::Parse("division by a polynomial".into()).into());
                }
                let d = b.eval(f)?;
                Self::from_expr(a, n, f)?.scale(&d.inverse()?)
            }
            Neg(a) => -&Self::from_expr(a, n, f)?,
            Pow(a, k) => {
                if *k < 0 {
                    if a.max_var().is_some() {
                        return Err(NumError::Parse("negative power of a polynomial".into()).into());
                    }
                    Poly::constant(n, a.eval(f)?.pow(*k))
                } else {
                    Self::from_expr(a, n, f)?.pow(*k as u32)
                }
            }
        })
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.nvars, self)
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars);
        let mut acc: BTreeMap<Monomial, AlgebraicNumber> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m = m1.mul(m2);
                let t = c1 * c2;
                match acc.get_mut(&m) {
                    Some(v) => *v = &*v + &t,
                    None => {
                        acc.insert(m, t);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Poly { nvars: self.nvars, terms: acc }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

/// Monomial from 1-based variable indices, e.g. mono(6, &[1, 1, 2]) = x1^2*x2.
pub fn mono(n: usize, vars: &[usize]) -> Monomial {
    Monomial::from_vars(n, &vars.iter().map(|v| v - 1).collect::<Vec<_>>())
}

fn unit_poly(n: usize, vars: &[&[usize]]) -> Poly {
    let one = AlgebraicNumber::one(&rationals());
    Poly::from_terms(n, vars.iter().map(|v| (mono(n, v), one.clone())))
}

// ---------------------------------------------------------------- families

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FamilyTag {
    C7,
    F21,
    L27,
}

/// Projective point of one of the three coefficient families.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyPoint {
    pub tag: FamilyTag,
    pub coeffs: Vec<AlgebraicNumber>,
}

impl FamilyPoint {
    pub fn new(tag: FamilyTag, coeffs: Vec<AlgebraicNumber>) -> Result<Self, PolyError> {
        let want = match tag {
            FamilyTag::C7 => 8,
            FamilyTag::F21 => 4,
            FamilyTag::L27 => 2,
        };
        if coeffs.len() != want {
            return Err(PolyError::DimensionMismatch(format!("{tag:?} needs {want} coefficients")));
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(PolyError::DimensionMismatch("all coefficients zero".into()));
        }
        Ok(FamilyPoint { tag, coeffs })
    }

    pub fn from_ints(tag: FamilyTag, c: &[i64]) -> Result<Self, PolyError> {
        let q = rationals();
        Self::new(tag, c.iter().map(|&x| AlgebraicNumber::from_int(&q, x)).collect())
    }
}

/// C7 basis in the order a1..a8: x_i^2 x_{i+1} (cyclic), x1x3x5, x2x4x6.
pub fn c7_basis() -> Vec<Poly> {
    let mut v: Vec<Poly> = (1..=6).map(|i| unit_poly(6, &[&[i, i, i % 6 + 1]])).collect();
    v.push(unit_poly(6, &[&[1, 3, 5]]));
    v.push(unit_poly(6, &[&[2, 4, 6]]));
    v
}

/// The eight C7-invariant monomials in the listing order
/// x1^2x2, x3^2x4, x5^2x6, x2^2x3, x4^2x5, x6^2x1, x1x3x5, x2x4x6.
pub fn c7_span_list() -> Vec<Poly> {
    let b = c7_basis();
    [0, 2, 4, 1, 3, 5, 6, 7].iter().map(|&i| b[i].clone()).collect()
}

/// F21 basis: P1, P2, x1x3x5, x2x4x6.
pub fn f21_basis() -> Vec<Poly> {
    vec![
        unit_poly(6, &[&[1, 1, 2], &[3, 3, 4], &[5, 5, 6]]),
        unit_poly(6, &[&[2, 2, 3], &[4, 4, 5], &[6, 6, 1]]),
        unit_poly(6, &[&[1, 3, 5]]),
        unit_poly(6, &[&[2, 4, 6]]),
    ]
}

/// f1 = sum x_i^3 - (sum x_i)^3.
pub fn f1() -> Poly {
    let n = 6;
    let s = (0..n).fold(Poly::zero(n), |acc, i| &acc + &Poly::var(n, i));
    let cubes = (0..n).fold(Poly::zero(n), |acc, i| &acc + &Poly::var(n, i).pow(3));
    &cubes - &s.pow(3)
}

/// The seven-variable cubic whose restriction to x7 = -(x1+...+x6) is f2.
pub fn f2_seven() -> Poly {
    unit_poly(
        7,
        &[&[1, 2, 4], &[2, 3, 5], &[3, 4, 6], &[1, 5, 6], &[1, 3, 7], &[4, 5, 7], &[2, 6, 7]],
    )
}

pub fn f2() -> Poly {
    let n = 6;
    let mut subs: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
    subs.push(-&(0..n).fold(Poly::zero(n), |acc, i| &acc + &Poly::var(n, i)));
    f2_seven().compose(&subs).unwrap()
}

pub fn l27_basis() -> Vec<Poly> {
    vec![f1(), f2()]
}

/// F_{a,b} = P1 + P2 + a x1x3x5 + b x2x4x6.
pub fn f_ab(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Poly {
    let one = AlgebraicNumber::one(&rationals());
    family_embed(&FamilyPoint { tag: FamilyTag::F21, coeffs: vec![one.clone(), one, a.clone(), b.clone()] })
}

pub fn family_embed(p: &FamilyPoint) -> Poly {
    let basis = match p.tag {
        FamilyTag::C7 => c7_basis(),
        FamilyTag::F21 => f21_basis(),
        FamilyTag::L27 => l27_basis(),
    };
    basis.iter().zip(&p.coeffs).fold(Poly::zero(6), |acc, (b, c)| &acc + &b.scale(c))
}

/// The F21 point [a,b,c,d] as a C7 point: [a,b,a,b,a,b,c,d] in the a1..a8
/// order, which is [a,a,a,b,b,b,c,d] in the listing order.
pub fn f21_to_c7(p: &FamilyPoint) -> FamilyPoint {
    assert_eq!(p.tag, FamilyTag::F21);
    let c = &p.coeffs;
    FamilyPoint {
        tag: FamilyTag::C7,
        coeffs: vec![
            c[0].clone(),
            c[1].clone(),
            c[0].clone(),
            c[1].clone(),
            c[0].clone(),
            c[1].clone(),
            c[2].clone(),
            c[3].clone(),
        ],
    }
}

/// Coordinates of a form in a family basis.
pub fn family_coords(f: &Poly, tag: FamilyTag) -> Result<FamilyPoint, PolyError> {
    let basis = match tag {
        FamilyTag::C7 => c7_basis(),
        FamilyTag::F21 => f21_basis(),
        FamilyTag::L27 => l27_basis(),
    };
    FamilyPoint::new(tag, f.coords_in(&basis)?)
}

/// Matrix of g acting on the degree-d monomials (column j = g . m_j).
pub fn action_matrix(g: &FMatrix, mons: &[Monomial]) -> Result<FMatrix, PolyError> {
    let index: HashMap<&Monomial, usize> = mons.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let n = mons[0].nvars();
    let f = g.field();
    let mut out = FMatrix::zeros(mons.len(), mons.len(), &f);
    for (j, m) in mons.iter().enumerate() {
        let img = Poly::monomial(m.clone(), AlgebraicNumber::one(&f)).act(g)?;
        for (mm, c) in img.terms() {
            let i = *index.get(mm).ok_or_else(|| PolyError::DimensionMismatch("degree changed".into()))?;
            out.set(i, j, c.clone());
        }
        debug_assert_eq!(img.nvars(), n);
    }
    Ok(out)
}

/// Basis of the forms of the given degree fixed by every generator, in
/// reduced echelon form with pivots on the grlex-largest monomials.
pub fn invariant_subspace(gens: &[FMatrix], degree: u32, nvars: usize) -> Result<Vec<Poly>, PolyError> {
    let mons = monomials(nvars, degree);
    let n = mons.len();
    let mut blocks = vec![];
    for g in gens {
        let a = action_matrix(g, &mons)?;
        let id = FMatrix::identity(n, &a.field());
        blocks.push(&a - &id);
    }
    let null = if blocks.is_empty() {
        (0..n)
            .map(|i| (0..n).map(|j| AlgebraicNumber::from_int(&rationals(), (i == j) as i64)).collect())
            .collect()
    } else {
        let rows: Vec<Vec<AlgebraicNumber>> = blocks.iter().flat_map(|b| b.to_rows()).collect();
        FMatrix::from_rows(rows).nullspace()
    };
    if null.is_empty() {
        return Ok(vec![]);
    }
    let (r, piv) = FMatrix::from_rows(null).rref();
    Ok((0..piv.len())
        .map(|i| Poly::from_terms(nvars, (0..n).map(|j| (mons[j].clone(), r.get(i, j).clone()))))
        .collect())
}
