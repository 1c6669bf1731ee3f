use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::{compose_fields, generator_image, rationals, Field, FieldKind};
use super::interval::Interval;
use super::ratmat;
use super::{rat_string, NumError, Sign};

/// Element of a catalog number field: integer power-basis numerators over
/// one positive common denominator, always in lowest terms.
#[derive(Clone)]
pub struct AlgebraicNumber {
    field: Field,
    num: Vec<BigInt>,
    den: BigInt,
}

fn pow_table(f: &Field) -> Arc<Vec<Vec<BigInt>>> {
    // reduced a^0 .. a^{n-1} for cyclotomic fields, integer coordinates
    static C: OnceLock<Mutex<HashMap<u32, Arc<Vec<Vec<BigInt>>>>>> = OnceLock::new();
    let FieldKind::Cyclotomic(n) = f.kind else { unreachable!() };
    let cache = C.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&n) {
        return t.clone();
    }
    let d = f.degree;
    let m = &f.modulus;
    let mut rows = Vec::with_capacity(n as usize);
    let mut cur = vec![BigInt::zero(); d];
    cur[0] = BigInt::one();
    for _ in 0..n {
        rows.push(cur.clone());
        // multiply by a
        let top = cur[d - 1].clone();
        for k in (1..d).rev() {
            cur[k] = cur[k - 1].clone();
        }
        cur[0] = BigInt::zero();
        if !top.is_zero() {
            for k in 0..d {
                cur[k] -= &top * &m[k];
            }
        }
    }
    let t = Arc::new(rows);
    cache.lock().unwrap().insert(n, t.clone());
    t
}

impl AlgebraicNumber {
    fn normalized(field: Field, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        assert!(!den.is_zero());
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den = &den / &g;
        }
        if num.iter().all(|c| c.is_zero()) {
            den = BigInt::one();
        }
        AlgebraicNumber { field, num, den }
    }

    pub fn from_coords(field: &Field, coords: Vec<BigRational>) -> Self {
        assert_eq!(coords.len(), field.degree);
        let den = coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coords.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Self::normalized(field.clone(), num, den)
    }

    pub fn from_integers(field: &Field, num: Vec<BigInt>, den: BigInt) -> Self {
        assert_eq!(num.len(), field.degree);
        Self::normalized(field.clone(), num, den)
    }

    /// Coordinates in the display basis (radical basis for real radical fields).
    pub fn from_display_coords(field: &Field, coords: Vec<BigRational>) -> Self {
        match &field.from_display {
            None => Self::from_coords(field, coords),
            Some(m) => Self::from_coords(field, ratmat::mat_vec(m, &coords)),
        }
    }

    pub fn from_rational(field: &Field, r: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); field.degree];
        num[0] = r.numer().clone();
        Self::normalized(field.clone(), num, r.denom().clone())
    }

    pub fn from_int(field: &Field, n: i64) -> Self {
        Self::from_rational(field, &BigRational::from_integer(n.into()))
    }

    pub fn rational(r: BigRational) -> Self {
        Self::from_rational(&rationals(), &r)
    }

    pub fn zero(field: &Field) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: &Field) -> Self {
        Self::from_int(field, 1)
    }

    /// The power-basis generator a of the field.
    pub fn generator(field: &Field) -> Self {
        let mut c = vec![BigRational::zero(); field.degree];
        if field.degree > 1 {
            c[1] = BigRational::one();
        } else {
            return Self::zero(field);
        }
        Self::from_coords(field, c)
    }

    /// zeta_n^k in Q(zeta_n).
    pub fn zeta_power(field: &Field, k: i64) -> Self {
        let FieldKind::Cyclotomic(n) = field.kind else {
            panic!("zeta_power needs a cyclotomic field, got {}", field.kind)
        };
        let t = pow_table(field);
        let e = k.rem_euclid(n as i64) as usize;
        Self::normalized(field.clone(), t[e].clone(), BigInt::one())
    }

    /// Sum of counts[k] * zeta_n^k.
    pub fn from_zeta_counts(field: &Field, counts: &[BigInt]) -> Self {
        let FieldKind::Cyclotomic(n) = field.kind else {
            panic!("from_zeta_counts needs a cyclotomic field")
        };
        let t = pow_table(field);
        let mut num = vec![BigInt::zero(); field.degree];
        for (k, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (a, b) in num.iter_mut().zip(&t[k % n as usize]) {
                *a += c * b;
            }
        }
        Self::normalized(field.clone(), num, BigInt::one())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coord(&self, i: usize) -> BigRational {
        BigRational::new(self.num[i].clone(), self.den.clone())
    }

    pub fn coords(&self) -> Vec<BigRational> {
        (0..self.num.len()).map(|i| self.coord(i)).collect()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn display_coords(&self) -> Vec<BigRational> {
        match &self.field.to_display {
            None => self.coords(),
            Some(m) => ratmat::mat_vec(m, &self.coords()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(|c| c.is_zero())
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coord(0))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let num = self.num.iter().map(|c| c * k.numer()).collect();
        Self::normalized(self.field.clone(), num, &self.den * k.denom())
    }

    /// Image under the canonical injection into `target`.
    pub fn inject(&self, target: &Field) -> Result<Self, NumError> {
        if self.field.kind == target.kind {
            return Ok(self.clone());
        }
        if self.is_rational() {
            return Ok(Self::from_rational(target, &self.coord(0)));
        }
        let img = generator_image(&self.field, target).ok_or_else(|| {
            NumError::FieldMismatch(self.field.kind.to_string(), target.kind.to_string())
        })?;
        // Horner with integer numerators
        let mut acc = Self::zero(target);
        for c in self.num.iter().rev() {
            acc = acc.mul_same(&img);
            acc.num[0] += c * &acc.den;
            acc = Self::normalized(target.clone(), acc.num, acc.den);
        }
        Ok(acc.scale(&BigRational::new(BigInt::one(), self.den.clone())))
    }

    /// Lift both operands to a common field.
    pub fn unify(a: &Self, b: &Self) -> Result<(Self, Self), NumError> {
        if a.field.kind == b.field.kind {
            return Ok((a.clone(), b.clone()));
        }
        if a.is_rational() {
            return Ok((Self::from_rational(&b.field, &a.coord(0)), b.clone()));
        }
        if b.is_rational() {
            return Ok((a.clone(), Self::from_rational(&a.field, &b.coord(0))));
        }
        let f = compose_fields(&a.field, &b.field)?;
        Ok((a.inject(&f)?, b.inject(&f)?))
    }

    fn add_same(&self, o: &Self) -> Self {
        let l = self.den.lcm(&o.den);
        let (ka, kb) = (&l / &self.den, &l / &o.den);
        let num = self.num.iter().zip(&o.num).map(|(x, y)| x * &ka + y * &kb).collect();
        Self::normalized(self.field.clone(), num, l)
    }

    fn mul_same(&self, o: &Self) -> Self {
        let d = self.field.degree;
        if d == 1 {
            return Self::normalized(
                self.field.clone(),
                vec![&self.num[0] * &o.num[0]],
                &self.den * &o.den,
            );
        }
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.num.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let m = &self.field.modulus;
        for k in (d..2 * d - 1).rev() {
            let top = std::mem::take(&mut prod[k]);
            if top.is_zero() {
                continue;
            }
            for j in 0..d {
                if !m[j].is_zero() {
                    prod[k - d + j] -= &top * &m[j];
                }
            }
        }
        prod.truncate(d);
        Self::normalized(self.field.clone(), prod, &self.den * &o.den)
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, NumError> {
        let (a, b) = Self::unify(self, o)?;
        Ok(a.add_same(&b))
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self, NumError> {
        let (a, b) = Self::unify(self, o)?;
        Ok(a.add_same(&-b))
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, NumError> {
        let (a, b) = Self::unify(self, o)?;
        Ok(a.mul_same(&b))
    }

    pub fn try_div(&self, o: &Self) -> Result<Self, NumError> {
        let (a, b) = Self::unify(self, o)?;
        Ok(a.mul_same(&b.inverse()?))
    }

    pub fn inverse(&self) -> Result<Self, NumError> {
        if self.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(Self::from_rational(&self.field, &self.coord(0).recip()));
        }
        let d = self.field.degree;
        // columns: self * a^j
        let a = Self::generator(&self.field);
        let mut cols = Vec::with_capacity(d);
        let mut cur = self.clone();
        for _ in 0..d {
            cols.push(cur.coords());
            cur = cur.mul_same(&a);
        }
        let m: ratmat::RatMat = (0..d).map(|r| (0..d).map(|c| cols[c][r].clone()).collect()).collect();
        let mut e = vec![BigRational::zero(); d];
        e[0] = BigRational::one();
        let y = ratmat::solve(&m, &e).ok_or(NumError::DivisionByZero)?;
        Ok(Self::from_coords(&self.field, y))
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inverse().expect("nonzero base").pow(-e);
        }
        let mut result = Self::one(&self.field);
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_same(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_same(&base);
            }
        }
        result
    }

    /// Complex conjugate under the designated embedding.
    pub fn conj(&self) -> Self {
        match &self.field.kind {
            FieldKind::Cyclotomic(n) => {
                let t = pow_table(&self.field);
                let mut num = vec![BigInt::zero(); self.field.degree];
                for (k, c) in self.num.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let row = &t[(*n as usize - k) % *n as usize];
                    for (a, b) in num.iter_mut().zip(row) {
                        *a += c * b;
                    }
                }
                Self::normalized(self.field.clone(), num, self.den.clone())
            }
            FieldKind::Quadratic(d) if *d < 0 => self.quadratic_conj(),
            _ => self.clone(),
        }
    }

    /// sqrt d -> -sqrt d in a quadratic field.
    pub fn quadratic_conj(&self) -> Self {
        assert!(matches!(self.field.kind, FieldKind::Quadratic(_)));
        let num = vec![self.num[0].clone(), -&self.num[1]];
        Self::normalized(self.field.clone(), num, self.den.clone())
    }

    /// Automorphism of a real radical field negating sqrt r exactly when flip(r)
    /// is odd; flip must be a character on radicands (e.g. parity of a prime's exponent).
    pub fn radical_automorphism(&self, flip: impl Fn(u64) -> bool) -> Self {
        match &self.field.kind {
            FieldKind::Rational => self.clone(),
            FieldKind::Quadratic(d) if *d > 0 => {
                if flip(*d as u64) {
                    self.quadratic_conj()
                } else {
                    self.clone()
                }
            }
            FieldKind::Multiquadratic(_) => {
                let disp: Vec<BigRational> = self
                    .display_coords()
                    .into_iter()
                    .zip(&self.field.radicands)
                    .map(|(c, r)| if flip(*r) { -c } else { c })
                    .collect();
                Self::from_display_coords(&self.field, disp)
            }
            _ => panic!("radical_automorphism needs a real radical field"),
        }
    }

    /// a^2 - d b^2 for a + b sqrt d.
    pub fn quadratic_norm(&self) -> BigRational {
        let FieldKind::Quadratic(d) = self.field.kind else {
            panic!("quadratic_norm needs a quadratic field")
        };
        let a = self.coord(0);
        let b = self.coord(1);
        &a * &a - BigRational::from_integer(d.into()) * &b * &b
    }

    pub fn is_real(&self) -> bool {
        self.field.is_real() || *self == self.conj()
    }

    pub fn enclosure(&self, bits: u32) -> (Interval, Interval) {
        self.field.enclosure(self, bits)
    }

    /// Exact sign under the designated real embedding.
    pub fn sign(&self) -> Result<Sign, NumError> {
        if self.is_zero() {
            return Ok(Sign::Zero);
        }
        if let Some(r) = self.to_rational() {
            return Ok(if r.is_positive() { Sign::Positive } else { Sign::Negative });
        }
        if !self.is_real() {
            return Err(NumError::NotRealEmbedding);
        }
        let mut bits = 64;
        loop {
            let (re, _) = self.enclosure(bits);
            if re.lo.is_positive() {
                return Ok(Sign::Positive);
            }
            if re.hi.is_negative() {
                return Ok(Sign::Negative);
            }
            bits *= 2;
        }
    }

    pub fn to_complex_f64(&self) -> (f64, f64) {
        let (re, im) = self.enclosure(64);
        let mid = |i: &Interval| super::field::to_f64(&((&i.lo + &i.hi) / BigRational::from_integer(2.into())));
        (mid(&re), mid(&im))
    }

    pub fn to_f64(&self) -> f64 {
        self.to_complex_f64().0
    }

    /// "(c0, c1, ...) over m(a)" in the power basis.
    pub fn serialize(&self) -> String {
        let cs: Vec<String> = self.coords().iter().map(rat_string).collect();
        format!("({}) over {}", cs.join(", "), self.field.modulus_string())
    }

    /// Human-readable expression in the display basis, accepted by the parser.
    pub fn expr_string(&self) -> String {
        let names = &self.field.basis_names;
        let mut out = String::new();
        for (c, nm) in self.display_coords().iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            let body = if nm.is_empty() {
                rat_string(&a)
            } else if a.is_one() {
                nm.clone()
            } else {
                format!("{}*{}", rat_string(&a), nm)
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

    /// Number of nonzero display coordinates.
    pub fn term_count(&self) -> usize {
        self.display_coords().iter().filter(|c| !c.is_zero()).count()
    }

    /// Canonical hashable key (field, numerators, denominator).
    pub fn key(&self) -> (FieldKind, Vec<BigInt>, BigInt) {
        (self.field.kind.clone(), self.num.clone(), self.den.clone())
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr_string())
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] in {}", self.expr_string(), self.field.kind)
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.field.kind == other.field.kind {
            return self.den == other.den && self.num == other.num;
        }
        match Self::unify(self, other) {
            Ok((a, b)) => a.den == b.den && a.num == b.num,
            Err(_) => false,
        }
    }
}

impl Eq for AlgebraicNumber {}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&AlgebraicNumber> for &AlgebraicNumber {
            type Output = AlgebraicNumber;
            fn $m(self, o: &AlgebraicNumber) -> AlgebraicNumber {
                self.$try(o).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<AlgebraicNumber> for AlgebraicNumber {
            type Output = AlgebraicNumber;
            fn $m(self, o: AlgebraicNumber) -> AlgebraicNumber {
                (&self).$m(&o)
            }
        }
        impl $tr<&AlgebraicNumber> for AlgebraicNumber {
            type Output = AlgebraicNumber;
            fn $m(self, o: &AlgebraicNumber) -> AlgebraicNumber {
                (&self).$m(o)
            }
        }
        impl $tr<AlgebraicNumber> for &AlgebraicNumber {
            type Output = AlgebraicNumber;
            fn $m(self, o: AlgebraicNumber) -> AlgebraicNumber {
                self.$m(&o)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl Neg for &AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn neg(self) -> AlgebraicNumber {
        AlgebraicNumber {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn neg(self) -> AlgebraicNumber {
        -&self
    }
}
