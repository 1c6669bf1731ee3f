//! Recursive-descent parser for number and polynomial expressions.
//!
//! Grammar: sums of products of powers of atoms; atoms are integers,
//! catalog constants (zeta7, omega, i, sqrt2, sqrt-7, ...), variables x1..xn
//! and parenthesised subexpressions.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::element::AlgebraicNumber;
use super::field::{compose_fields, cyclotomic, quadratic, rationals, sqrt_of, Field};
use super::NumError;

#[derive(Clone, Debug, PartialEq)]
pub enum NumExpr {
    Int(BigInt),
    Const(String),
    /// zero-based variable index (x1 is 0)
    Var(usize),
    Add(Box<NumExpr>, Box<NumExpr>),
    Sub(Box<NumExpr>, Box<NumExpr>),
    Mul(Box<NumExpr>, Box<NumExpr>),
    Div(Box<NumExpr>, Box<NumExpr>),
    Neg(Box<NumExpr>),
    Pow(Box<NumExpr>, i64),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn perr(msg: impl Into<String>) -> NumError {
    NumError::Parse(msg.into())
}

fn tokenize(s: &str) -> Result<Vec<Tok>, NumError> {
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = vec![];
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[st..i].iter().collect();
            out.push(Tok::Int(t.parse().unwrap()));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_alphabetic() {
                i += 1;
            }
            let word: String = cs[st..i].iter().collect();
            let mut id = word.clone();
            // sqrt-7 is one token
            if word == "sqrt" && i < cs.len() && cs[i] == '-' {
                id.push('-');
                i += 1;
            }
            while i < cs.len() && cs[i].is_ascii_digit() {
                id.push(cs[i]);
                i += 1;
            }
            out.push(Tok::Ident(id));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(perr(format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<NumExpr, NumError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = NumExpr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = NumExpr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<NumExpr, NumError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = NumExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = NumExpr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<NumExpr, NumError> {
        if self.eat('-') {
            return Ok(NumExpr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<NumExpr, NumError> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let e: i64 = n.try_into().map_err(|_| perr("exponent too large"))?;
                    return Ok(NumExpr::Pow(Box::new(base), if neg { -e } else { e }));
                }
                _ => return Err(perr("expected integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<NumExpr, NumError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(NumExpr::Int(n))
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                if let Some(rest) = id.strip_prefix('x') {
                    let k: usize = rest.parse().map_err(|_| perr(format!("bad variable {id}")))?;
                    if k == 0 {
                        return Err(perr("variables are numbered from x1"));
                    }
                    return Ok(NumExpr::Var(k - 1));
                }
                const_home(&id)?;
                Ok(NumExpr::Const(id))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(perr("missing ')'"));
                }
                Ok(e)
            }
            t => Err(perr(format!("unexpected token {t:?}"))),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<NumExpr, NumError> {
    let mut p = Parser { toks: tokenize(s)?, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(perr(format!("trailing input in '{s}'")));
    }
    Ok(e)
}

/// Value of a named constant in its home field.
pub fn const_home(id: &str) -> Result<AlgebraicNumber, NumError> {
    let bad = || perr(format!("unknown constant '{id}'"));
    match id {
        "omega" => return Ok(AlgebraicNumber::zeta_power(&cyclotomic(3), 1)),
        "i" => return Ok(AlgebraicNumber::zeta_power(&cyclotomic(4), 1)),
        _ => {}
    }
    if let Some(n) = id.strip_prefix("zeta") {
        let n: u32 = n.parse().map_err(|_| bad())?;
        if n == 0 || n > 1000 {
            return Err(bad());
        }
        if n <= 2 {
            return Ok(AlgebraicNumber::from_int(&rationals(), if n == 1 { 1 } else { -1 }));
        }
        if n % 4 == 2 {
            // zeta_{2m} = -zeta_m^{(m+1)/2} for odd m
            let m = n / 2;
            return Ok(-AlgebraicNumber::zeta_power(&cyclotomic(m), m.div_ceil(2) as i64));
        }
        return Ok(AlgebraicNumber::zeta_power(&cyclotomic(n), 1));
    }
    if let Some(d) = id.strip_prefix("sqrt") {
        let d: i64 = d.parse().map_err(|_| bad())?;
        if d == 0 {
            return Ok(AlgebraicNumber::zero(&rationals()));
        }
        let core = squarefree_core(d);
        let home = if core == 1 { rationals() } else { quadratic(core) };
        return sqrt_of(d, &home).ok_or_else(bad);
    }
    Err(bad())
}

pub(crate) fn squarefree_core(d: i64) -> i64 {
    let mut m = d.unsigned_abs();
    let mut core: i64 = d.signum();
    let mut p = 2u64;
    while p * p <= m {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        if e % 2 == 1 {
            core *= p as i64;
        }
        p += 1;
    }
    core * m as i64
}

impl NumExpr {
    pub fn constants(&self, out: &mut Vec<String>) {
        use NumExpr::*;
        match self {
            Const(c) => {
                if !out.contains(c) {
                    out.push(c.clone())
                }
            }
            Int(_) | Var(_) => {}
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => {
                a.constants(out);
                b.constants(out);
            }
            Neg(a) | Pow(a, _) => a.constants(out),
        }
    }

    pub fn max_var(&self) -> Option<usize> {
        use NumExpr::*;
        match self {
            Var(i) => Some(*i),
            Int(_) | Const(_) => None,
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => a.max_var().max(b.max_var()),
            Neg(a) | Pow(a, _) => a.max_var(),
        }
    }

    /// Smallest catalog field holding every constant in the expression.
    pub fn natural_field(&self) -> Result<Field, NumError> {
        let mut cs = vec![];
        self.constants(&mut cs);
        let mut f = rationals();
        for c in cs {
            f = compose_fields(&f, const_home(&c)?.field())?;
        }
        Ok(f)
    }

    /// Evaluate a variable-free expression in `field`.
    pub fn eval(&self, field: &Field) -> Result<AlgebraicNumber, NumError> {
        use NumExpr::*;
        Ok(match self {
            Int(n) => AlgebraicNumber::from_rational(field, &BigRational::from_integer(n.clone())),
            Const(c) => const_home(c)?.inject(field)?,
            Var(i) => return Err(perr(format!("variable x{} in a number", i + 1))),
            Add(a, b) => a.eval(field)?.try_add(&b.eval(field)?)?,
            Sub(a, b) => a.eval(field)?.try_sub(&b.eval(field)?)?,
            Mul(a, b) => a.eval(field)?.try_mul(&b.eval(field)?)?,
            Div(a, b) => a.eval(field)?.try_div(&b.eval(field)?)?,
            Neg(a) => -a.eval(field)?,
            Pow(a, e) => {
                let v = a.eval(field)?;
                if *e < 0 && v.is_zero() {
                    return Err(NumError::DivisionByZero);
                }
                v.pow(*e)
            }
        })
    }
}

/// Parse a number in its natural field.
pub fn parse_number(s: &str) -> Result<AlgebraicNumber, NumError> {
    let e = parse_expr(s)?;
    let f = e.natural_field()?;
    e.eval(&f)
}

/// Parse a number directly into `field`.
pub fn parse_number_in(s: &str, field: &Field) -> Result<AlgebraicNumber, NumError> {
    parse_expr(s)?.eval(field)
}
