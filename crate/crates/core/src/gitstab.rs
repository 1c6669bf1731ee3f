//! Hilbert-Mumford stability for the C7 and F21 families.
//!
//! A diagonal 1-PS diag(t^r1, ..., t^r6) with sum r = 0 acts on each family
//! monomial with an integer weight.  A support pattern is unstable when some
//! r makes every active weight positive, and not stable when some nonzero r
//! makes every active weight nonnegative.  Both are decided exactly by
//! Fourier-Motzkin elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::exactnum::Rational;

pub type OnePs = Vec<i64>;

/// Weights of the C7 monomials x_i^2 x_(i+1) (i = 1..6), x1x3x5, x2x4x6.
pub fn hm_weights(r: &[i64]) -> [i64; 8] {
    assert_eq!(r.len(), 6);
    let mut w = [0; 8];
    for i in 0..6 {
        w[i] = 2 * r[i] + r[(i + 1) % 6];
    }
    w[6] = r[0] + r[2] + r[4];
    w[7] = r[1] + r[3] + r[5];
    w
}

/// Weights of the F21 slots under the rank-1 torus diag(t^n, t^-n, ...).
pub fn f21_weights(n: i64) -> [i64; 4] {
    [n, -n, 3 * n, -3 * n]
}

// --------------------------------------------------------- Fourier-Motzkin

/// One inequality a . x >= rhs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ineq {
    pub a: Vec<Rational>,
    pub rhs: Rational,
}

fn normalize(c: Ineq) -> Ineq {
    // scale so the first nonzero coefficient has absolute value 1
    match c.a.iter().find(|x| !x.is_zero()) {
        Some(p) => {
            let s = p.abs();
            Ineq { a: c.a.iter().map(|x| x / &s).collect(), rhs: &c.rhs / &s }
        }
        None => c,
    }
}

/// Find x with every a . x >= rhs, or None if infeasible.
pub fn fm_feasible(cons: &[Ineq], nvars: usize) -> Option<Vec<Rational>> {
    // stages[k] holds the system in variables 0..nvars-k
    let mut stages: Vec<Vec<Ineq>> = vec![cons.to_vec()];
    for v in (0..nvars).rev() {
        let cur = stages.last().unwrap();
        let (mut pos, mut neg, mut rest) = (vec![], vec![], vec![]);
        for c in cur {
            match c.a[v].cmp(&Rational::zero()) {
                std::cmp::Ordering::Greater => pos.push(c),
                std::cmp::Ordering::Less => neg.push(c),
                std::cmp::Ordering::Equal => rest.push(c.clone()),
            }
        }
        for p in &pos {
            for n in &neg {
                let (sp, sn) = (p.a[v].clone(), -n.a[v].clone());
                let a: Vec<Rational> = p.a.iter().zip(&n.a).map(|(x, y)| x * &sn + y * &sp).collect();
                rest.push(normalize(Ineq { a, rhs: &p.rhs * &sn + &n.rhs * &sp }));
            }
        }
        rest.sort_by(|x, y| format!("{x:?}").cmp(&format!("{y:?}")));
        rest.dedup();
        stages.push(rest);
    }
    if stages.last().unwrap().iter().any(|c| c.rhs.is_positive()) {
        return None;
    }
    // back-substitution, variable 0 first
    let mut x: Vec<Rational> = vec![];
    for v in 0..nvars {
        let sys = &stages[nvars - 1 - v];
        let (mut lo, mut hi): (Option<Rational>, Option<Rational>) = (None, None);
        for c in sys.iter().filter(|c| !c.a[v].is_zero()) {
            let rest: Rational = (0..v).map(|j| &c.a[j] * &x[j]).sum();
            let bound = (&c.rhs - rest) / &c.a[v];
            if c.a[v].is_positive() {
                lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
            } else if c.a[v].is_negative() {
                hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
            }
        }
        x.push(pick(lo, hi));
    }
    Some(x)
}

/// A simple value in [lo, hi]: zero if allowed, otherwise an integer, otherwise the bound nearest zero.
fn pick(lo: Option<Rational>, hi: Option<Rational>) -> Rational {
    let zero = Rational::zero();
    match (lo, hi) {
        (None, None) => zero,
        (Some(l), None) => {
            if l <= zero {
                zero
            } else {
                l.ceil()
            }
        }
        (None, Some(h)) => {
            if h >= zero {
                zero
            } else {
                h.floor()
            }
        }
        (Some(l), Some(h)) => {
            debug_assert!(l <= h);
            if l <= zero && zero <= h {
                zero
            } else if l > zero {
                if l.ceil() <= h {
                    l.ceil()
                } else {
                    l
                }
            } else if h.floor() >= l {
                h.floor()
            } else {
                h
            }
        }
    }
}

fn clear_denominators(x: &[Rational]) -> Vec<BigInt> {
    let l = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = x.iter().map(|v| (v * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        ints
    } else {
        ints.iter().map(|v| v / &g).collect()
    }
}

// ---------------------------------------------------------- destabilizers

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    C7,
    F21,
}

impl Family {
    pub fn slots(self) -> usize {
        match self {
            Family::C7 => 8,
            Family::F21 => 4,
        }
    }

    pub fn slot_name(self, i: usize) -> String {
        match self {
            Family::C7 => format!("a{}", i + 1),
            Family::F21 => format!("c{}", i + 1),
        }
    }

    /// Weight of slot i as a linear form in the free torus parameters.
    fn weight_rows(self) -> Vec<Vec<i64>> {
        match self {
            // r6 = -(r1 + ... + r5)
            Family::C7 => (0..8)
                .map(|i| {
                    let c: Vec<i64> = (0..6).map(|j| hm_weights(&unit(j))[i]).collect();
                    (0..5).map(|j| c[j] - c[5]).collect()
                })
                .collect(),
            Family::F21 => f21_weights(1).iter().map(|&w| vec![w]).collect(),
        }
    }

    fn expand(self, free: &[BigInt]) -> OnePs {
        let f: Vec<i64> = free.iter().map(|x| x.to_i64().expect("small certificate")).collect();
        match self {
            Family::C7 => {
                let mut r = f.clone();
                r.push(-f.iter().sum::<i64>());
                r
            }
            Family::F21 => vec![f[0], -f[0], f[0], -f[0], f[0], -f[0]],
        }
    }

    /// Slot weights of a full 1-PS.
    pub fn weights(self, r: &[i64]) -> Vec<i64> {
        match self {
            Family::C7 => hm_weights(r).to_vec(),
            Family::F21 => f21_weights(r[0]).to_vec(),
        }
    }
}

fn unit(j: usize) -> [i64; 6] {
    let mut u = [0; 6];
    u[j] = 1;
    u
}

/// Active slots as a bitmask (bit i = slot i nonzero).
pub type Pattern = u32;

pub fn pattern_from_slots(slots: &[usize]) -> Pattern {
    slots.iter().fold(0, |m, &i| m | (1 << i))
}

/// Search for r with every active weight > 0 (strict) or with r != 0 and
/// every active weight >= 0.  Returns an integer certificate.
pub fn destabilizer_exists(family: Family, active: Pattern, strict: bool) -> Option<OnePs> {
    let rows = family.weight_rows();
    let nv = rows[0].len();
    let r = |x: i64| Rational::from_integer(x.into());
    let base: Vec<Ineq> = (0..family.slots())
        .filter(|i| active & (1 << i) != 0)
        .map(|i| Ineq { a: rows[i].iter().map(|&x| r(x)).collect(), rhs: r(if strict { 1 } else { 0 }) })
        .collect();
    let found = if strict {
        fm_feasible(&base, nv)
    } else {
        // r != 0: some free coordinate is >= 1 or <= -1 (by scaling)
        (0..nv).flat_map(|j| [1i64, -1].map(move |s| (j, s))).find_map(|(j, s)| {
            let mut sys = base.clone();
            let mut a = vec![r(0); nv];
            a[j] = r(s);
            sys.push(Ineq { a, rhs: r(1) });
            fm_feasible(&sys, nv)
        })
    }?;
    let mut cert = family.expand(&clear_denominators(&found));
    if cert.iter().all(|&x| x == 0) {
        // empty support: any nontrivial 1-PS destabilizes
        cert = family.expand(&[BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()][..nv]);
    }
    assert!(verify_certificate(family, active, strict, &cert), "certificate re-verifies");
    Some(cert)
}

/// Exact re-check of the sign conditions a certificate claims.
pub fn verify_certificate(family: Family, active: Pattern, strict: bool, r: &[i64]) -> bool {
    if r.iter().sum::<i64>() != 0 || r.iter().all(|&x| x == 0) {
        return false;
    }
    let w = family.weights(r);
    (0..family.slots()).filter(|i| active & (1 << i) != 0).all(|i| if strict { w[i] > 0 } else { w[i] >= 0 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Unstable,
    SemistableNotStable,
    Stable,
}

impl Stability {
    pub fn as_str(self) -> &'static str {
        match self {
            Stability::Unstable => "unstable",
            Stability::SemistableNotStable => "semistable_not_stable",
            Stability::Stable => "stable",
        }
    }
}

/// Classification by the feasibility oracle, with the certificate used.
pub fn oracle_classify(family: Family, active: Pattern) -> (Stability, Option<OnePs>) {
    if let Some(c) = destabilizer_exists(family, active, true) {
        return (Stability::Unstable, Some(c));
    }
    match destabilizer_exists(family, active, false) {
        Some(c) => (Stability::SemistableNotStable, Some(c)),
        None => (Stability::Stable, None),
    }
}

/// Closed-form criterion for the C7 family (slots a1..a8 = bits 0..7).
pub fn closed_form_c7(active: Pattern) -> Stability {
    let has = |slots: &[usize]| slots.iter().all(|&i| active & (1 << (i - 1)) != 0);
    if has(&[1, 2, 3, 4, 5, 6]) {
        Stability::Stable
    } else if has(&[7, 8]) || has(&[2, 4, 6, 7]) || has(&[1, 3, 5, 8]) {
        Stability::SemistableNotStable
    } else {
        Stability::Unstable
    }
}

/// Closed-form criterion for F21: unstable exactly on the lines c1 = c3 = 0
/// and c2 = c4 = 0; otherwise stable.
pub fn closed_form_f21(active: Pattern) -> Stability {
    let on_line = |a: usize, b: usize| active & ((1 << a) | (1 << b)) == 0;
    if on_line(0, 2) || on_line(1, 3) {
        Stability::Unstable
    } else {
        Stability::Stable
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub pattern: String,
    pub oracle: Stability,
    pub closed_form: Stability,
    pub certificate: Option<OnePs>,
    pub agree: bool,
}

pub fn pattern_string(family: Family, active: Pattern) -> String {
    let names: Vec<String> = (0..family.slots()).filter(|i| active & (1 << i) != 0).map(|i| family.slot_name(i)).collect();
    format!("{{{}}}", names.join(","))
}

/// All 2^8 (C7) or 2^4 (F21) support patterns.
pub fn sweep(family: Family) -> Vec<SweepRow> {
    let n = 1u32 << family.slots();
    (0..n)
        .into_par_iter()
        .map(|p| {
            let (oracle, certificate) = oracle_classify(family, p);
            let closed_form = match family {
                Family::C7 => closed_form_c7(p),
                Family::F21 => closed_form_f21(p),
            };
            SweepRow { pattern: pattern_string(family, p), oracle, closed_form, certificate, agree: oracle == closed_form }
        })
        .collect()
}

/// Enlarging the support never makes the oracle verdict less stable.
pub fn monotone(family: Family, rows: &[SweepRow]) -> bool {
    let n = 1usize << family.slots();
    (0..n).all(|p| (0..family.slots()).all(|i| rows[p | (1 << i)].oracle >= rows[p].oracle))
}
