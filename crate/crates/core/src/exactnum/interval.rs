//! Closed rational intervals with outward dyadic rounding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn point(x: BigRational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Self::point(BigRational::zero())
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    pub fn scale(&self, k: &BigRational) -> Interval {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    /// Widen symmetrically by `r` >= 0.
    pub fn widen(&self, r: &BigRational) -> Interval {
        Interval { lo: &self.lo - r, hi: &self.hi + r }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// Round endpoints outward to the grid 2^-bits.
    pub fn round_out(&self, bits: u32) -> Interval {
        let scale = BigInt::one() << bits;
        let lo = (&self.lo * BigRational::from_integer(scale.clone())).floor().to_integer();
        let hi = (&self.hi * BigRational::from_integer(scale.clone())).ceil().to_integer();
        Interval {
            lo: BigRational::new(lo, scale.clone()),
            hi: BigRational::new(hi, scale),
        }
    }
}

/// Enclosure of sqrt(n) for n >= 0 with width 2^-bits.
pub fn sqrt_enclosure(n: &BigInt, bits: u32) -> Interval {
    let scaled: BigInt = n << (2 * bits);
    let r = scaled.sqrt();
    let den = BigInt::one() << bits;
    let lo = BigRational::new(r.clone(), den.clone());
    let hi = if &r * &r == scaled { lo.clone() } else { BigRational::new(r + 1, den) };
    Interval { lo, hi }
}

fn arctan_inv(x: u32, bits: u32) -> Interval {
    // alternating series sum (-1)^k / ((2k+1) x^(2k+1)); partial sums bracket the value
    let xb = BigInt::from(x);
    let x2 = &xb * &xb;
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (bits + 8));
    let mut sum = BigRational::zero();
    let mut pow = xb.clone();
    let mut k: u64 = 0;
    loop {
        let term = BigRational::new(BigInt::one(), &pow * BigInt::from(2 * k + 1));
        if term < eps {
            // next term bounds the truncation error
            return Interval { lo: &sum - &term, hi: &sum + &term }.round_out(bits + 4);
        }
        if k.is_even() {
            sum += term;
        } else {
            sum -= term;
        }
        pow *= &x2;
        k += 1;
    }
}

/// Enclosure of pi (Machin's formula).
pub fn pi_enclosure(bits: u32) -> Interval {
    let a = arctan_inv(5, bits + 4).scale(&BigRational::from_integer(16.into()));
    let b = arctan_inv(239, bits + 4).scale(&BigRational::from_integer(4.into()));
    a.sub(&b).round_out(bits + 2)
}

/// Enclosures of (cos x, sin x) for an interval 0 <= x <= 4.
pub fn cos_sin_enclosure(x: &Interval, bits: u32) -> (Interval, Interval) {
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (bits + 8));
    let xmax = x.hi.abs().max(x.lo.abs());
    let mut c = Interval::zero();
    let mut s = Interval::zero();
    let mut pow = Interval::point(BigRational::one()); // x^n
    let mut fact = BigInt::one(); // n!
    let mut xmax_pow = BigRational::one();
    let mut n: u64 = 0;
    loop {
        let term = pow.scale(&BigRational::new(BigInt::one(), fact.clone()));
        match n % 4 {
            0 => c = c.add(&term),
            1 => s = s.add(&term),
            2 => c = c.sub(&term),
            _ => s = s.sub(&term),
        }
        n += 1;
        pow = pow.mul(x).round_out(bits + 16);
        fact *= BigInt::from(n);
        xmax_pow *= &xmax;
        let rem = &xmax_pow / BigRational::from_integer(fact.clone());
        if n > 4 && rem < eps {
            return (c.widen(&rem).round_out(bits + 4), s.widen(&rem).round_out(bits + 4));
        }
    }
}
