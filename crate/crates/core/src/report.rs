//! Verification suites, configuration and report emission.
//!
//! Every suite is a static entry in [`registry`]; each check inside a suite
//! carries a citation string naming the claim it verifies.  Reports are
//! deterministic for a fixed seed and bound; wall time is kept out of the
//! serialized form so output files are reproducible byte for byte.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::arithgrp;
use crate::exactnum::{parse_number, rat, rationals, AlgebraicNumber, Rational};
use crate::gitstab::{self, Family, Stability};
use crate::groups;
use crate::lattices;
use crate::linalg::FMatrix;
use crate::polyalg::{self, FamilyPoint, FamilyTag, Monomial, Poly};
use crate::singular::{self, SingTag};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReportError {
    #[error("unknown suite `{0}` (see list-suites)")]
    UnknownSuite(String),
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("bad grid: {0}")]
    Grid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Flagged,
}

impl Verdict {
    fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Flagged => "flagged",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub citation: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub explanation: String,
    pub certificate: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub bound: i64,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub wall_time_ms: u128,
}

impl Report {
    pub fn passed(&self, strict: bool) -> bool {
        self.checks.iter().all(|c| c.verdict == Verdict::Pass || (!strict && c.verdict == Verdict::Flagged))
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.checks.iter().filter(|c| c.verdict == v).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub suites: Vec<String>,
    pub seed: u64,
    /// Overrides every suite's default search bound when set.
    pub bound: Option<i64>,
    pub search_bounds: BTreeMap<String, i64>,
    pub output_path: Option<String>,
    pub format: Format,
    pub strict: bool,
    pub parallelism: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suites: vec![],
            seed: 7,
            bound: None,
            search_bounds: BTreeMap::new(),
            output_path: None,
            format: Format::Json,
            strict: false,
            parallelism: 1,
        }
    }
}

impl SuiteConfig {
    pub fn bound_for(&self, suite: &str, default: i64) -> i64 {
        self.search_bounds.get(suite).copied().or(self.bound).unwrap_or(default)
    }

    /// Parse a flat `key = value` file.  Keys mirror the CLI flags:
    /// suites, seed, bound, bound.<suite>, out, format, strict, parallelism.
    /// `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ReportError> {
        let mut cfg = SuiteConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| ReportError::Config { line: i + 1, msg: msg.to_string() };
            let (k, v) = line.split_once('=').ok_or_else(|| err("expected key = value"))?;
            let (k, v) = (k.trim(), v.trim());
            let int = |v: &str| v.parse::<i64>().map_err(|_| err("expected an integer"));
            match k {
                "suites" => cfg.suites = v.split([',', ' ']).filter(|s| !s.is_empty()).map(str::to_string).collect(),
                "seed" => cfg.seed = v.parse().map_err(|_| err("expected an unsigned integer"))?,
                "bound" => cfg.bound = Some(int(v)?),
                "out" | "output" => cfg.output_path = Some(v.to_string()),
                "format" => {
                    cfg.format = match v {
                        "json" => Format::Json,
                        "csv" => Format::Csv,
                        _ => return Err(err("format is json or csv")),
                    }
                }
                "strict" => cfg.strict = matches!(v, "true" | "1" | "yes"),
                "parallelism" => cfg.parallelism = int(v)?.max(1) as usize,
                _ if k.starts_with("bound.") => {
                    cfg.search_bounds.insert(k["bound.".len()..].to_string(), int(v)?);
                }
                _ => return Err(err(&format!("unknown key `{k}`"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ReportError> {
        for s in self.suites.iter().chain(self.search_bounds.keys()) {
            if find_suite(s).is_none() {
                return Err(ReportError::UnknownSuite(s.clone()));
            }
        }
        let bad = self.bound.iter().chain(self.search_bounds.values()).any(|&b| b <= 0);
        if bad {
            return Err(ReportError::Config { line: 0, msg: "bounds must be positive".into() });
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- registry

pub struct SuiteInfo {
    pub name: &'static str,
    pub citation: &'static str,
    pub summary: &'static str,
    pub default_bound: i64,
    run: fn(&mut Ctx),
}

pub fn registry() -> &'static [SuiteInfo] {
    static R: &[SuiteInfo] = &[
        SuiteInfo {
            name: "invariants",
            citation: "spaces of invariant cubics for the order-7 and order-21 actions and for L2(7)",
            summary: "invariant subspaces have dimensions 8, 4, 2 and match the monomial span lists",
            default_bound: 0,
            run: suite_invariants,
        },
        SuiteInfo {
            name: "git-c7",
            citation: "closed-form stability criterion for the C7 family by the numerical criterion",
            summary: "256 support patterns: exact 1-PS oracle equals the closed form; quoted certificates",
            default_bound: 0,
            run: suite_git_c7,
        },
        SuiteInfo {
            name: "git-f21",
            citation: "closed-form stability criterion for the F21 family by the numerical criterion",
            summary: "16 support patterns: exact 1-PS oracle equals the closed form",
            default_bound: 0,
            run: suite_git_f21,
        },
        SuiteInfo {
            name: "singular",
            citation: "singular members of F_{a,b} lie on three twisted curves and carry A1 or A2 points",
            summary: "cusp orbit at (1,1), seeded plane sweep, A1 counts, Hessian formula",
            default_bound: 50,
            run: suite_singular,
        },
        SuiteInfo {
            name: "l27",
            citation: "the L2(7) pencil: extra involution E', intertwiner S, determinantal members and sextic",
            summary: "E^2, normalizing, E' on f1 f2, S identities, pencil table, Veronese sextic",
            default_bound: 0,
            run: suite_l27,
        },
        SuiteInfo {
            name: "automorphisms",
            citation: "classification of automorphism groups of cubic fourfolds with an order-7 symmetry",
            summary: "stabilizer witnesses for F21, F21:C2, F21:C6 and the L2(7) pencil",
            default_bound: 0,
            run: suite_automorphisms,
        },
        SuiteInfo {
            name: "lattices",
            citation: "transcendental lattices T1, T2: discriminant forms, signatures, anisotropy",
            summary: "Smith forms, Milgram phase, isotropic search and local obstructions",
            default_bound: 200,
            run: suite_lattices,
        },
        SuiteInfo {
            name: "table2",
            citation: "table of elements of the quotient of the rank-3 arithmetic group by its principal subgroup",
            summary: "8 representatives, Z/3 and label columns, coset group, small-box completeness",
            default_bound: 3,
            run: suite_table2,
        },
        SuiteInfo {
            name: "table3",
            citation: "table of elements of the quotient of the rank-4 arithmetic group by its principal subgroup",
            summary: "4 representatives, Klein four quotient, mod-4 rejection of (2,42,6,14), homomorphism",
            default_bound: 2,
            run: suite_table3,
        },
        SuiteInfo {
            name: "hilbert",
            citation: "identification of the principal rank-4 subgroup with a Hilbert modular group over Q(sqrt21)",
            summary: "seeded round trips between Gamma(O_F + p) and H",
            default_bound: 100,
            run: suite_hilbert,
        },
        SuiteInfo {
            name: "quaternion",
            citation: "identification of the principal rank-3 subgroup with units of a quaternion order",
            summary: "box-enumerated units embed with type (1,21,6,14); 3 | x on norm-4 solutions",
            default_bound: 12,
            run: suite_quaternion,
        },
        SuiteInfo {
            name: "involutions",
            citation: "involutions of the rank-4 domain and the kernel of the tensor map",
            summary: "P in O+(T2), -Id on discriminant, F-hat image, kernel {+-(Id,Id)}",
            default_bound: 0,
            run: suite_involutions,
        },
        SuiteInfo {
            name: "invariant-ring",
            citation: "the C6 quotient of the (a,b)-plane is the cubic surface xy = z^3",
            summary: "(a+b)^3, (ab)^3, ab(a+b) are invariant, satisfy xy = z^3 and generate",
            default_bound: 12,
            run: suite_invariant_ring,
        },
    ];
    R
}

pub fn find_suite(name: &str) -> Option<&'static SuiteInfo> {
    registry().iter().find(|s| s.name == name)
}

struct Ctx {
    seed: u64,
    bound: i64,
    checks: Vec<Check>,
}

impl Ctx {
    fn check(&mut self, id: &str, citation: &str, ok: bool, cert: Value) {
        self.checks.push(Check { id: id.into(), citation: citation.into(), verdict: Verdict::from_bool(ok), explanation: String::new(), certificate: cert });
    }

    fn flag(&mut self, id: &str, citation: &str, why: String, cert: Value) {
        self.checks.push(Check { id: id.into(), citation: citation.into(), verdict: Verdict::Flagged, explanation: why, certificate: cert });
    }
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Report, ReportError> {
    let info = find_suite(name).ok_or_else(|| ReportError::UnknownSuite(name.to_string()))?;
    let bound = cfg.bound_for(name, info.default_bound);
    let start = Instant::now();
    let mut ctx = Ctx { seed: cfg.seed, bound, checks: vec![] };
    (info.run)(&mut ctx);
    Ok(Report { suite: name.to_string(), seed: cfg.seed, bound, checks: ctx.checks, wall_time_ms: start.elapsed().as_millis() })
}

/// Run the configured suites on a pool of `parallelism` workers; reports come
/// back in the requested order.
pub fn run_suites(cfg: &SuiteConfig) -> Result<Vec<Report>, ReportError> {
    cfg.validate()?;
    let names: Vec<String> = if cfg.suites.is_empty() { registry().iter().map(|s| s.name.to_string()).collect() } else { cfg.suites.clone() };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.parallelism.max(1)).build().expect("thread pool");
    pool.install(|| names.par_iter().map(|n| run_suite(n, cfg)).collect())
}

pub fn all_pass(reports: &[Report], strict: bool) -> bool {
    reports.iter().all(|r| r.passed(strict))
}

pub fn to_json(reports: &[Report]) -> String {
    serde_json::to_string_pretty(reports).unwrap()
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(vec![])
}

pub fn to_csv(reports: &[Report]) -> String {
    let mut w = csv_writer();
    w.write_record(["suite", "seed", "bound", "check", "verdict", "citation", "explanation", "certificate"]).unwrap();
    for r in reports {
        for c in &r.checks {
            w.write_record([
                r.suite.as_str(),
                &r.seed.to_string(),
                &r.bound.to_string(),
                &c.id,
                c.verdict.as_str(),
                &c.citation,
                &c.explanation,
                &c.certificate.to_string(),
            ])
            .unwrap();
        }
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

// ------------------------------------------------------------------ helpers

fn num(s: &str) -> AlgebraicNumber {
    parse_number(s).expect("built-in constant parses")
}

fn mat_strings(m: &FMatrix) -> Vec<Vec<String>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m.get(i, j).to_string()).collect()).collect()
}

/// Two bases span the same space of polynomials.
fn same_span(a: &[Poly], b: &[Poly]) -> bool {
    a.len() == b.len() && b.iter().all(|p| p.coords_in(a).is_ok())
}

// ------------------------------------------------------------------ suites

fn suite_invariants(c: &mut Ctx) {
    let cite = "invariant cubics: span lists for the order-7 and order-21 actions";
    let c7 = polyalg::invariant_subspace(&[groups::g7()], 3, 6);
    let f21 = polyalg::invariant_subspace(&[groups::g7(), groups::g3()], 3, 6);
    let l27 = polyalg::invariant_subspace(&groups::l27_generators(), 3, 6);
    match (c7, f21, l27) {
        (Ok(c7), Ok(f21), Ok(l27)) => {
            c.check("c7-dimension", cite, c7.len() == 8, json!(c7.len()));
            c.check("c7-span", cite, same_span(&c7, &polyalg::c7_basis()), json!(polyalg::c7_basis().iter().map(|p| p.render("x")).collect::<Vec<_>>()));
            c.check("f21-dimension", cite, f21.len() == 4, json!(f21.len()));
            c.check("f21-span", cite, same_span(&f21, &polyalg::f21_basis()), json!(polyalg::f21_basis().iter().map(|p| p.render("x")).collect::<Vec<_>>()));
            let pencil = vec![polyalg::f1(), polyalg::f2()];
            c.check("l27-pencil", "L2(7)-invariant cubics form the pencil spanned by f1, f2", same_span(&l27, &pencil), json!([polyalg::f1().render("x"), polyalg::f2().render("x")]));
        }
        (a, b, d) => c.check("invariant-subspaces", cite, false, json!(format!("{:?} {:?} {:?}", a.err(), b.err(), d.err()))),
    }
}

fn git_suite(c: &mut Ctx, family: Family, cite: &str) {
    let rows = gitstab::sweep(family);
    for r in &rows {
        let id = format!("pattern-{}", r.pattern);
        c.check(&id, cite, r.agree, json!({"oracle": r.oracle.as_str(), "closed_form": r.closed_form.as_str(), "certificate": r.certificate}));
    }
    c.check("monotone", "stability only improves as the support grows", gitstab::monotone(family, &rows), json!(rows.len()));
}

fn suite_git_c7(c: &mut Ctx) {
    let cite = "closed-form stability criterion for the C7 family";
    git_suite(c, Family::C7, cite);
    let all_but = |skip: &[usize]| gitstab::pattern_from_slots(&(0..8).filter(|i| !skip.contains(i)).collect::<Vec<_>>());
    let q1 = [-25, -1, 3, 1, -1, 23];
    let q2 = [-8, -5, 10, 1, -2, 4];
    c.check(
        "quoted-certificate-unstable",
        "quoted destabilizing weights (-25,-1,3,1,-1,23) when a1 and a7 vanish",
        gitstab::verify_certificate(Family::C7, all_but(&[0, 6]), true, &q1),
        json!({"weights": q1, "hm_weights": gitstab::hm_weights(&q1)}),
    );
    c.check(
        "quoted-certificate-not-stable",
        "quoted weights (-8,-5,10,1,-2,4) when a1 vanishes",
        gitstab::verify_certificate(Family::C7, all_but(&[0]), false, &q2),
        json!({"weights": q2, "hm_weights": gitstab::hm_weights(&q2)}),
    );
}

fn suite_git_f21(c: &mut Ctx) {
    git_suite(c, Family::F21, "closed-form stability criterion for the F21 family");
    let rows = gitstab::sweep(Family::F21);
    c.check(
        "no-strictly-semistable",
        "every F21 support is stable or unstable",
        rows.iter().all(|r| r.oracle != Stability::SemistableNotStable),
        json!(null),
    );
}

fn suite_singular(c: &mut Ctx) {
    let (one, omega) = (num("1"), num("omega"));
    let f = polyalg::f_ab(&one, &one);
    let pts = singular::singular_points(&one, &one);
    let classes: Vec<_> = pts.iter().map(|p| singular::classify(&f, &p.coords).map(|k| k.tag)).collect();
    let quoted = pts.iter().all(|p| {
        let l = p.l as i64;
        let z = |e: i64| num(&format!("zeta7^{}", (e * l).rem_euclid(7)));
        let want = [num("1"), -z(6), z(1), -z(4), z(5), -z(3)];
        let k = p.coords[0].inverse().unwrap();
        p.coords.iter().zip(&want).all(|(x, y)| &(x * &k) == y)
    });
    c.check(
        "cusps-at-(1,1)",
        "F_{1,1} is singular exactly at the seven quoted points, all of type A2",
        pts.len() == 7 && quoted && classes.iter().all(|t| *t == Ok(SingTag::A2)),
        json!(pts.iter().map(|p| p.coords.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()),
    );
    for (name, a) in [("(omega,omega)", omega.clone()), ("(omega^2,omega^2)", &omega * &omega)] {
        let f = polyalg::f_ab(&a, &a);
        let p = singular::singular_points(&a, &a);
        let ok = p.len() == 7 && p.iter().all(|x| singular::classify(&f, &x.coords).map(|k| k.tag) == Ok(SingTag::A2));
        c.check(&format!("cusps-at-{name}"), "the cusp orbit consists of three points", ok, json!(p.len()));
    }
    let n = c.bound.max(1) as usize;
    let pts = singular::sample_plane(c.seed, n);
    let sweep: Vec<_> = pts.par_iter().map(|(a, b)| singular::sweep_point(a, b)).collect();
    let mut consistent = 0;
    let mut a1_ok = true;
    for s in &sweep {
        match s {
            Ok(p) => {
                consistent += usize::from(p.consistent);
                if p.on_curve.iter().any(|&x| x) {
                    a1_ok &= p.singular == 7 && p.classes.iter().all(|t| *t == SingTag::A1);
                }
            }
            Err(_) => a1_ok = false,
        }
    }
    c.check(
        "sweep-singular-iff-on-curve",
        "F_{a,b} is singular iff (a,b) lies on Z(G), omega Z(G) or omega^2 Z(G)",
        consistent == n,
        json!({"seed": c.seed, "points": n, "consistent": consistent}),
    );
    c.check(
        "sweep-curve-points-are-nodal",
        "off the cusp orbit a singular member has exactly seven A1 points",
        a1_ok,
        json!(sweep.iter().filter_map(|s| s.as_ref().ok()).filter(|p| p.singular > 0).map(|p| json!([p.a, p.b, p.singular])).collect::<Vec<_>>()),
    );
    let mut hess = true;
    for tau in ["-1/2", "2", "-3", "1/5"] {
        let (a, b) = singular::curve_point(&num(tau));
        let f = polyalg::f_ab(&a, &b);
        for p in singular::singular_points(&a, &b) {
            hess &= f.hessian_at(0, &p.coords).map(|h| h.scale(&num("1/2")).det()) == Ok(singular::predicted_hessian_det(&p));
        }
    }
    c.check("hessian-formula", "closed form of the Hessian determinant at the singular points", hess, json!(null));
    let mut cert = vec![];
    for (a, b) in [(rat(3, 4), rat(0, 1)), (rat(1, 1), rat(1, 1)), (rat(2, 1), rat(-7, 3))] {
        for i in 0..6 {
            cert.push(singular::no_zero_coordinate_certificate(&a, &b, i));
        }
    }
    c.check(
        "no-zero-coordinate",
        "singular points have no vanishing coordinate (mod-p rank certificate)",
        cert.iter().all(Option::is_some),
        json!(cert),
    );
}

fn suite_l27(c: &mut Ctx) {
    let e = groups::e7();
    c.check("e-squared", "E^2 = (162)(457) projectively", (&e * &e).proj_eq(&groups::perm7(&[&[1, 6, 2], &[4, 5, 7]])), json!(mat_strings(&e)));
    match (groups::build_l27(), groups::build_l27_ext()) {
        (Ok(l), Ok(x)) => {
            c.check("l27-order", "the seven-dimensional model of L2(7) has order 168", l.order() == 168, json!(l.order()));
            c.check("e-normalizes", "E normalizes L2(7) (checked through Psi on E')", l.normalized_by(&groups::e_prime()), json!(null));
            c.check("extension-order", "adjoining E' gives L2(7):C2 of order 336", x.order() == 336, json!(x.order()));
        }
        _ => c.check("l27-order", "the seven-dimensional model of L2(7)", false, json!(null)),
    }
    let ep = groups::e_prime();
    let ok1 = polyalg::f1().act(&ep).ok() == Some(polyalg::f2().scale(&num("3*sqrt2/2")));
    let ok2 = polyalg::f2().act(&ep).ok() == Some(polyalg::f1().scale(&num("sqrt2/3")));
    c.check("e-prime-f1", "E'(f1) = (3 sqrt2/2) f2", ok1, json!("3*sqrt2/2"));
    c.check("e-prime-f2", "E'(f2) = (sqrt2/3) f1", ok2, json!("sqrt2/3"));
    for id in groups::conjugation_identities() {
        c.check(&format!("identity-{}", id.name), "conjugation identities of g7, g3, S and E'", id.holds, json!(id.name));
    }
    match groups::build_s() {
        Ok(s) => {
            let si = s.inverse().unwrap();
            c.check("s-g7", "S g7' S^-1 = g7", (&(&s * &groups::g7_prime()) * &si).proj_eq(&groups::g7()), json!(mat_strings(&s)));
            c.check("s-g3", "S g3' S^-1 = g3", (&(&s * &groups::g3_prime()) * &si).proj_eq(&groups::g3()), json!(null));
            let moved = [polyalg::f1(), polyalg::f2()].iter().all(|f| f.act(&s).is_ok_and(|g| polyalg::family_coords(&g, FamilyTag::F21).is_ok()));
            c.check("s-moves-pencil", "S carries the pencil into the F21 family", moved, json!(null));
        }
        Err(e) => c.check("s-build", "the intertwiner S", false, json!(e.to_string())),
    }
    match singular::l27_table_scan() {
        Ok(rows) => {
            for r in rows {
                c.check(
                    &format!("pencil-{}", r.lambda),
                    "singular members of the L2(7) pencil: counts 7, 14 and nonisolated",
                    r.matches,
                    serde_json::to_value(&r).unwrap(),
                );
            }
        }
        Err(e) => c.check("pencil-table", "singular members of the L2(7) pencil", false, json!(e.to_string())),
    }
    match singular::veronese_sextic() {
        Ok(v) => {
            c.check(
                "veronese-sextic",
                "the pencil restricts to z1^5 z3 + z2^5 z1 + z3^5 z2 - 5 z1^2 z2^2 z3^2 on the Veronese surface",
                v.gx1_is_standard && v.corrected_is_valid && v.x1_prime_restricts_to_zero && v.restriction_f1_scalar.is_some() && v.restriction_f2_scalar.is_some(),
                serde_json::to_value(&v).unwrap(),
            );
            if !v.listed_is_bijection {
                c.flag(
                    "veronese-slot-list",
                    "listed Veronese coordinate assignment",
                    "the listed assignment repeats z1z3; with z1z2 in the fifth slot it is a valid assignment".into(),
                    json!({"corrected": singular::veronese_corrected().iter().map(Monomial::to_string).collect::<Vec<_>>()}),
                );
            }
        }
        Err(e) => c.check("veronese-sextic", "restriction to the Veronese surface", false, json!(e.to_string())),
    }
}

fn suite_automorphisms(c: &mut Ctx) {
    let p = |v: &[i64]| FamilyPoint::from_ints(FamilyTag::F21, v).unwrap();
    for (v, want, cite) in [
        (vec![1, 2, 3, 5], 1u64, "generic [1,a,b,c]: automorphism group F21"),
        (vec![1, 2, 3, 24], 2, "[1,a,b,a^3 b]: an extra involution, F21:C2"),
        (vec![1, 1, 0, 0], 6, "[1,1,0,0] (Klein): extra order-6 element, F21:C6"),
    ] {
        let r = groups::stabilizer_check(&p(&v));
        c.check(&format!("stabilizer-{v:?}"), cite, r.order == Some(want), json!({"order": r.order, "group": r.group_name()}));
    }
    let lam = [("generic", "1", false), ("plus", "3*sqrt2/2", true), ("minus", "-3*sqrt2/2", true)];
    for (name, l, want) in lam {
        let got = groups::pencil_extra_symmetry(&num("1"), &num(l)).ok();
        c.check(
            &format!("pencil-{name}"),
            "f1 + lambda f2 gains the involution E' exactly at lambda = +-3 sqrt2/2",
            got == Some(want),
            json!({"lambda": l, "extra": got}),
        );
    }
    c.check("f21-order", "F21 generated by g7, g3", groups::build_f21().map(|g| g.order()) == Ok(21), json!(21));
}

fn suite_lattices(c: &mut Ctx) {
    let cite = "transcendental lattices and their discriminant forms";
    let fac = |l: &lattices::Lattice| lattices::invariant_factors(&l.gram_int()).iter().map(|x| x.to_string()).collect::<Vec<_>>();
    c.check("snf-t1", cite, fac(&lattices::t1()) == ["1", "7", "84"], json!(fac(&lattices::t1())));
    c.check("snf-t2", cite, fac(&lattices::t2()) == ["1", "7", "7", "21"], json!(fac(&lattices::t2())));
    for (name, l) in [("t1", lattices::t1()), ("t2", lattices::t2()), ("u", lattices::hyperbolic()), ("a2", lattices::a2()), ("e8", lattices::e8())] {
        let a = lattices::discriminant_group(&l);
        c.check(&format!("qb-{name}"), "q and b are compatible on the discriminant group", lattices::check_qb_consistency(&l, &a), json!({"order": a.order(), "factors": a.invariant_factors}));
        match lattices::milgram_phase(&l) {
            Ok(m) => c.check(&format!("milgram-{name}"), "Milgram: Gauss sum phase equals signature mod 8", m.matches, serde_json::to_value(&m).unwrap()),
            Err(e) => c.check(&format!("milgram-{name}"), "Milgram", false, json!(e.to_string())),
        }
    }
    let b = c.bound;
    let iso = lattices::isotropic_search(&lattices::t1(), b);
    c.check("t1-anisotropic-box", "T1 has no isotropic vector (box search)", iso.is_none(), json!({"bound": b, "found": iso}));
    c.check("t1-mod4", "u^2 - 21v^2 - 6w^2 + 14x^2 = 0 only trivially mod 4", lattices::local_obstruction(&lattices::t1_half_form(), 4) == Ok(true), json!(4));
    c.check(
        "quaternion-mod49",
        "u^2 - 21v^2 - 6w^2 + 126x^2 = 0 only trivially mod 49",
        lattices::local_obstruction(&lattices::quaternion_norm_form(), 49) == Ok(true),
        json!(49),
    );
    let v = lattices::isotropic_search(&lattices::t2(), 10);
    c.check("t2-isotropic", "T2 is isotropic (noncompact quotient)", v.as_ref().is_some_and(|v| lattices::t2().norm_int(v) == 0), json!(v));
}

fn suite_table2(c: &mut Ctx) {
    let cite = "table of elements of the rank-3 quotient group";
    let r = arithgrp::verify_table2();
    for (i, row) in r.rows.iter().enumerate() {
        let id = format!("row-{:?}", row.ty);
        c.check(
            &format!("{id}-member"),
            cite,
            row.member && row.matches_display && row.in_so_plus,
            json!({"type": row.ty, "coords": row.coords, "image": row.image}),
        );
        c.check(&format!("{id}-z3"), "Z/3 column: action on the discriminant 3-part", row.preserves_computed == Some(row.preserves_listed), json!(row.preserves_computed));
        if row.label_computed == Some(row.label_listed) {
            c.check(&format!("{id}-label"), "label column", true, json!(row.label_listed));
        } else if r.duplicate_labels.iter().any(|&(a, b)| a == i || b == i) {
            c.flag(
                &format!("{id}-label"),
                "label column",
                match row.label_computed {
                    Some(l) => format!("listed label {:?} duplicates another row; products give {:?}", row.label_listed, l),
                    None => format!("listed label {:?} duplicates another row; no label derivable from products", row.label_listed),
                },
                json!({"listed": row.label_listed, "computed": row.label_computed}),
            );
        } else {
            c.check(&format!("{id}-label"), "label column", false, json!({"listed": row.label_listed, "computed": row.label_computed}));
        }
    }
    c.check("quotient-elementary-abelian", "the quotient is (Z/2)^3", r.elementary_abelian && r.labels_consistent, json!(r.cayley));
    c.check("sampled-cosets", "products of sampled elements follow the coset table", arithgrp::sampled_coset_check(6), json!(6));
    let (p, q, ok) = arithgrp::closure_and_normality(c.seed, 40);
    c.check("principal-subgroup-normal", "the principal-type subgroup is closed and normal", ok, json!({"products": p, "conjugates": q, "seed": c.seed}));
    let comp = arithgrp::small_box_completeness(c.bound);
    c.check(
        "small-box-completeness",
        "every SO+ isometry of T1 with small entries comes from a typed element",
        comp.untyped.is_empty() && comp.typed == comp.so_plus,
        serde_json::to_value(&comp).unwrap(),
    );
    let par = arithgrp::parity_survey(8);
    c.check(
        "parity-normalization",
        "u = v and w = x mod 2 is the integrality condition for every type",
        par.iter().all(|p| p.parity_iff_integral),
        serde_json::to_value(&par).unwrap(),
    );
}

fn suite_table3(c: &mut Ctx) {
    let cite = "table of elements of the rank-4 quotient group";
    let r = arithgrp::verify_table3();
    for row in &r.rows {
        c.check(&format!("row-{:?}", row.ty), cite, row.member && row.matches_display, json!({"octuple": row.c, "image": row.image}));
    }
    c.check("quotient-klein-four", "the quotient is the Klein four-group", r.klein_four, json!(r.cayley));
    c.check("reject-(2,42,6,14)", "no element has type pattern (2,42,6,14): mod-4 residue enumeration", r.impossible_pattern_mod4, json!(4u32.pow(8)));
    let s = arithgrp::sample_rank4([1, 21, 3, 7], c.bound);
    let ok = !s.is_empty() && s.par_iter().all(|e| arithgrp::gammaprime_member(e).is_ok());
    c.check("sampled-members", "box-enumerated octuples satisfying the conditions are members", ok, json!({"radius": c.bound, "count": s.len()}));
    c.check("homomorphisms", "Phi1 and Phi2 are homomorphisms into the orthogonal groups", arithgrp::homomorphism_check(c.seed, 4), json!({"seed": c.seed}));
    c.check("determinant-condition", "a1 b2 - a2 b1 = g1 d2 - g2 d1 iff both factors have determinant 1", arithgrp::determinant_equivalence(c.seed, 50), json!(50));
}

fn suite_hilbert(c: &mut Ctx) {
    let n = c.bound.max(1) as usize;
    let r = arithgrp::hilbert_roundtrip(c.seed, n, 4);
    c.check("forward", "Gamma(O_F + p) maps into H", r.forward_ok == n, serde_json::to_value(&r).unwrap());
    c.check("roundtrip", "the map is inverted exactly on its image", r.roundtrip_ok == n, json!(r.roundtrip_ok));
    c.check("pullback", "sampled H elements satisfy the four ideal conditions", r.pullback_ok == r.pullback_samples, json!(r.pullback_ok));
}

fn suite_quaternion(c: &mut Ctx) {
    let units = arithgrp::quaternion_units(c.bound);
    let emb: Vec<_> = units.iter().map(|q| (q, arithgrp::quaternion_embed(q))).collect();
    let ok = units.len() > 1
        && emb.iter().all(|(q, e)| e.as_ref().is_ok_and(|t| t.ty == [1, 21, 6, 14] && t.coords == [2 * q.p, -2 * q.q, -2 * q.r, 6 * q.s]));
    c.check(
        "units-embed",
        "norm-1 units conjugate into type (1,21,6,14) with coordinates (2p,-2q,-2r,6s)",
        ok,
        json!({"box": c.bound, "units": units.len()}),
    );
    let (n, ok) = arithgrp::mod3_lemma(20);
    c.check("three-divides-x", "every norm-4 solution of u^2-21v^2-6w^2+14x^2 has 3 | x", ok, json!({"box": 20, "solutions": n}));
}

fn suite_involutions(c: &mut Ctx) {
    let r = arithgrp::involution_checks();
    c.check("p-in-o-plus", "P is an isometry of T2 in O+ with det -1 and P^2 = 1", r.p_isometry && r.p_in_o_plus && r.p_squared_identity && r.p_det == -1, json!(arithgrp::p_matrix()));
    c.check("minus-id-t1", "-Id negates the discriminant 3-part of T1", r.minus_id_t1_z3 == Some(arithgrp::Z3Action::Negates), json!(r.minus_id_t1_z3));
    c.check("f-hat", "Phi2(F-hat) is an integral involution of determinant 1", r.f_hat_involution && r.f_hat_det == Some(1), json!({"image": r.f_hat_image, "z3": r.f_hat_z3}));
    c.check("kernel", "Phi2(-Id,-Id) = Id", r.kernel_trivial, json!(null));
}

fn suite_invariant_ring(c: &mut Ctx) {
    let f = crate::exactnum::cyclotomic(3);
    let w = groups::omega(1).inject(&f).unwrap();
    let z = AlgebraicNumber::zero(&f);
    // (a,b) -> (omega b, omega a)
    let sigma = FMatrix::from_rows(vec![vec![z.clone(), w.clone()], vec![w, z]]);
    let a = Poly::var(2, 0);
    let b = Poly::var(2, 1);
    let s = &a + &b;
    let p = &a * &b;
    let x = &(&s * &s) * &s;
    let y = &(&p * &p) * &p;
    let zz = &p * &s;
    let inv = [&x, &y, &zz].iter().all(|g| g.act(&sigma).ok().as_ref() == Some(*g));
    c.check("generators-invariant", "(a+b)^3, (ab)^3, ab(a+b) are C6-invariant", inv, json!([x.render("ab"), y.render("ab"), zz.render("ab")]));
    let rel = &(&x * &y) - &(&(&zz * &zz) * &zz);
    c.check("relation", "x y = z^3", rel.is_zero(), json!("xy - z^3"));
    let top = c.bound.max(3) as u32;
    let mut dims = vec![];
    let mut ok = true;
    for d in 1..=top {
        let want = polyalg::invariant_subspace(std::slice::from_ref(&sigma), d, 2).map(|v| v.len()).unwrap_or(usize::MAX);
        let mut prods = vec![];
        for i in 0..=d / 3 {
            for j in 0..=d / 6 {
                for k in 0..=d / 3 {
                    if 3 * i + 6 * j + 3 * k == d {
                        prods.push(&(&x.pow(i) * &y.pow(j)) * &zz.pow(k));
                    }
                }
            }
        }
        let got = span_dim(&prods, d);
        ok &= got == want;
        dims.push(json!([d, want, got]));
    }
    c.check("generation", "graded dimensions of the invariant ring match the span of monomials in x, y, z", ok, json!(dims));
}

fn span_dim(ps: &[Poly], d: u32) -> usize {
    if ps.is_empty() {
        return 0;
    }
    let mons = polyalg::monomials(2, d);
    let rows: Vec<Vec<AlgebraicNumber>> = ps.iter().map(|p| mons.iter().map(|m| p.coeff_or_zero(m)).collect()).collect();
    FMatrix::from_rows(rows).rank()
}

// ------------------------------------------------------------- moduli plane

#[derive(Clone, Debug, Serialize)]
pub struct PlaneRow {
    pub a: String,
    pub b: String,
    pub label: String,
}

/// Stratum of [c1, c2, c3, c4] in the F21 coefficient space.
pub fn stratum_label(c: &[AlgebraicNumber]) -> String {
    let nz: Vec<usize> = (0..4).filter(|&i| !c[i].is_zero()).collect();
    let pattern = gitstab::pattern_from_slots(&nz);
    if gitstab::closed_form_f21(pattern) == Stability::Unstable {
        return "unstable".into();
    }
    match (c[0].is_zero(), c[1].is_zero()) {
        (false, false) => {
            let a = &(&c[2] * &c[1]) / &(&c[0] * &c[0]);
            let b = &(&c[3] * &c[0]) / &(&c[1] * &c[1]);
            plane_label(&a, &b)
        }
        (true, true) => "point [0,0,1,1]".into(),
        _ => "boundary [1,0,t,-1]".into(),
    }
}

/// Label of F_{a,b}: A2 orbit, a twist curve, or smooth.
pub fn plane_label(a: &AlgebraicNumber, b: &AlgebraicNumber) -> String {
    for j in 0..3 {
        let w = groups::omega(j);
        if a == &w && b == &w {
            return "A2 orbit".into();
        }
    }
    match singular::discriminant_curve(a, b).iter().position(|&x| x) {
        Some(j) => format!("twist curve {j}"),
        None => "smooth".into(),
    }
}

pub struct Grid {
    pub a0: Rational,
    pub a1: Rational,
    pub b0: Rational,
    pub b1: Rational,
    pub step: Rational,
}

impl Grid {
    pub fn parse(s: &str) -> Result<Self, ReportError> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(ReportError::Grid("expected a0,a1,b0,b1,step".into()));
        }
        let q = |t: &str| -> Result<Rational, ReportError> {
            let x = parse_number(t).map_err(|e| ReportError::Grid(e.to_string()))?;
            x.to_rational().ok_or_else(|| ReportError::Grid(format!("{t} is not rational")))
        };
        let g = Grid { a0: q(parts[0])?, a1: q(parts[1])?, b0: q(parts[2])?, b1: q(parts[3])?, step: q(parts[4])? };
        if g.step <= rat(0, 1) || g.a1 < g.a0 || g.b1 < g.b0 {
            return Err(ReportError::Grid("need step > 0, a0 <= a1, b0 <= b1".into()));
        }
        let n = |lo: &Rational, hi: &Rational| ((hi - lo) / &g.step).floor();
        if n(&g.a0, &g.a1) * n(&g.b0, &g.b1) > rat(1_000_000, 1) {
            return Err(ReportError::Grid("grid larger than 10^6 points".into()));
        }
        Ok(g)
    }

    fn axis(lo: &Rational, hi: &Rational, step: &Rational) -> Vec<Rational> {
        let mut out = vec![];
        let mut x = lo.clone();
        while &x <= hi {
            out.push(x.clone());
            x += step;
        }
        out
    }
}

/// Stratum labels on a rational grid, plus sample rows for the boundary
/// curve [1,0,t,-1] and the point [0,0,1,1].
pub fn export_moduli_plane(g: &Grid) -> Vec<PlaneRow> {
    let q = rationals();
    let xs = Grid::axis(&g.a0, &g.a1, &g.step);
    let ys = Grid::axis(&g.b0, &g.b1, &g.step);
    let pts: Vec<(Rational, Rational)> = xs.iter().flat_map(|a| ys.iter().map(move |b| (a.clone(), b.clone()))).collect();
    let mut rows: Vec<PlaneRow> = pts
        .par_iter()
        .map(|(a, b)| {
            let (x, y) = (AlgebraicNumber::from_rational(&q, a), AlgebraicNumber::from_rational(&q, b));
            PlaneRow { a: a.to_string(), b: b.to_string(), label: plane_label(&x, &y) }
        })
        .collect();
    let one = AlgebraicNumber::one(&q);
    let zero = AlgebraicNumber::zero(&q);
    for t in &xs {
        let c = [one.clone(), zero.clone(), AlgebraicNumber::from_rational(&q, t), -one.clone()];
        rows.push(PlaneRow { a: format!("[1,0,{t},-1]"), b: String::new(), label: stratum_label(&c) });
    }
    let c = [zero.clone(), zero, one.clone(), one];
    rows.push(PlaneRow { a: "[0,0,1,1]".into(), b: String::new(), label: stratum_label(&c) });
    rows
}

pub fn plane_csv(rows: &[PlaneRow]) -> String {
    let mut w = csv_writer();
    w.write_record(["a", "b", "label"]).unwrap();
    for r in rows {
        w.write_record([&r.a, &r.b, &r.label]).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Minimal SVG: grid points colored by label and the real branch of Z(G).
pub fn plane_svg(g: &Grid, rows: &[PlaneRow]) -> String {
    let (a0, a1, b0, b1) = (to_f64(&g.a0), to_f64(&g.a1), to_f64(&g.b0), to_f64(&g.b1));
    let (w, h) = (600.0, 600.0);
    let sx = |a: f64| 20.0 + (a - a0) / (a1 - a0).max(1e-9) * (w - 40.0);
    let sy = |b: f64| h - 20.0 - (b - b0) / (b1 - b0).max(1e-9) * (h - 40.0);
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for r in rows.iter().filter(|r| !r.b.is_empty()) {
        let (Ok(a), Ok(b)) = (parse_number(&r.a), parse_number(&r.b)) else { continue };
        let (a, b) = (to_f64(&a.to_rational().unwrap()), to_f64(&b.to_rational().unwrap()));
        let color = match r.label.as_str() {
            "smooth" => "#9aa",
            "A2 orbit" => "#d22",
            _ => "#22d",
        };
        let rad = if r.label == "smooth" { 1.5 } else { 4.0 };
        let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="{rad}" fill="{color}"><title>({}, {}) {}</title></circle>"#, sx(a), sy(b), r.a, r.b, r.label);
    }
    // Z(G) through the parametrization a = -(2t + t^2), b = -(2/t + 1/t^2)
    for (lo, hi) in [(-8.0f64, -0.05f64), (0.05, 8.0)] {
        let mut poly = vec![];
        for i in 0..=400 {
            let t = lo + (hi - lo) * i as f64 / 400.0;
            let (a, b) = (-(2.0 * t + t * t), -(2.0 / t + 1.0 / (t * t)));
            if (a0..=a1).contains(&a) && (b0..=b1).contains(&b) {
                poly.push(format!("{:.2},{:.2}", sx(a), sy(b)));
            } else if !poly.is_empty() {
                let _ = writeln!(out, r##"<polyline fill="none" stroke="#22d" stroke-width="1" points="{}"/>"##, poly.join(" "));
                poly.clear();
            }
        }
        if !poly.is_empty() {
            let _ = writeln!(out, r##"<polyline fill="none" stroke="#22d" stroke-width="1" points="{}"/>"##, poly.join(" "));
        }
    }
    out.push_str("</svg>\n");
    out
}
