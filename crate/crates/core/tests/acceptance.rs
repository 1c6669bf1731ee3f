//! Acceptance harness: one line per criterion, with its time budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cubic7::lattices;
use cubic7::report::{run_suite, Report, SuiteConfig, Verdict};

fn suite(name: &str, bound: Option<i64>) -> Report {
    let cfg = SuiteConfig { bound, ..Default::default() };
    run_suite(name, &cfg).expect("registered suite")
}

fn failures(r: &Report) -> Vec<String> {
    r.checks.iter().filter(|c| c.verdict == Verdict::Fail).map(|c| format!("{}/{}", r.suite, c.id)).collect()
}

fn invariants() -> Vec<String> {
    failures(&suite("invariants", None))
}

fn git() -> Vec<String> {
    let mut f = failures(&suite("git-c7", None));
    f.extend(failures(&suite("git-f21", None)));
    f
}

fn singular() -> Vec<String> {
    failures(&suite("singular", Some(50)))
}

fn l27() -> Vec<String> {
    failures(&suite("l27", None))
}

fn lattice() -> Vec<String> {
    let r = suite("lattices", Some(200));
    let mut f = failures(&r);
    let t1 = lattices::milgram_phase(&lattices::t1()).unwrap();
    let t2 = lattices::milgram_phase(&lattices::t2()).unwrap();
    if t1.phase_mod8 != 7 || t2.phase_mod8 != 0 {
        f.push(format!("milgram phases {} {}", t1.phase_mod8, t2.phase_mod8));
    }
    f
}

fn table2() -> Vec<String> {
    let r = suite("table2", Some(3));
    let mut f = failures(&r);
    let flagged: Vec<_> = r.checks.iter().filter(|c| c.verdict == Verdict::Flagged).map(|c| c.id.clone()).collect();
    if flagged.len() != 1 || !flagged[0].ends_with("-label") {
        f.push(format!("expected exactly the duplicated label flagged, got {flagged:?}"));
    }
    f
}

fn arith_rank4() -> Vec<String> {
    let mut f = failures(&suite("table3", None));
    f.extend(failures(&suite("hilbert", Some(100))));
    f.extend(failures(&suite("quaternion", Some(12))));
    f
}

fn automorphisms() -> Vec<String> {
    failures(&suite("automorphisms", None))
}

fn main() -> ExitCode {
    type Crit = (u32, &'static str, u64, fn() -> Vec<String>);
    let criteria: [Crit; 8] = [
        (1, "invariant spaces: dims 8 and 4 with matching span lists", 1, invariants),
        (2, "GIT: oracle equals closed form on 256 + 16 supports, quoted certificates", 5, git),
        (3, "singularities: F_{1,1} cusps, 50-point sweep, seven A1 points on the curves", 30, singular),
        (4, "L2(7): E^2, E' on the pencil, S identities, pencil table, Veronese sextic", 60, l27),
        (5, "lattices: Smith forms, Milgram phases, anisotropy and local obstructions", 60, lattice),
        (6, "rank-3 group: table of representatives, coset group, small-box completeness", 120, table2),
        (7, "rank-4 group: table, (2,42,6,14) rejection, Hilbert round trip, quaternion units", 300, arith_rank4),
        (8, "automorphism groups on witnesses and the pencil", 60, automorphisms),
    ];
    let mut ok = true;
    for (n, name, budget, run) in criteria {
        let t = Instant::now();
        let fails = run();
        let dt = t.elapsed();
        let in_time = dt <= Duration::from_secs(budget);
        let pass = fails.is_empty() && in_time;
        ok &= pass;
        println!("{} criterion {n}: {name} ({:.2}s, budget {budget}s)", if pass { "PASS" } else { "FAIL" }, dt.as_secs_f64());
        for f in &fails {
            println!("      failed check {f}");
        }
        if !in_time {
            println!("      over budget");
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
