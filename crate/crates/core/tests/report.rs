use cubic7::exactnum::parse_number;
use cubic7::report::*;

#[test]
fn every_suite_passes() {
    let cfg = SuiteConfig::default();
    for s in registry() {
        let t = std::time::Instant::now();
        let r = run_suite(s.name, &cfg).unwrap();
        for c in r.checks.iter().filter(|c| c.verdict != Verdict::Pass) {
            println!("{} {} {:?} {}", s.name, c.id, c.verdict, c.explanation);
        }
        println!("{} {} checks {:?}", s.name, r.checks.len(), t.elapsed());
        assert!(r.passed(false), "{}", s.name);
        assert!(r.checks.iter().all(|c| !c.citation.is_empty()));
    }
}

#[test]
fn table2_flags_one_label() {
    let r = run_suite("table2", &SuiteConfig::default()).unwrap();
    assert_eq!(r.count(Verdict::Flagged), 1);
    assert!(r.passed(false));
    assert!(!r.passed(true));
    // 8 membership checks plus two column checks per row
    assert_eq!(r.checks.iter().filter(|c| c.id.starts_with("row-")).count(), 24);
}

#[test]
fn reports_are_reproducible() {
    let cfg = SuiteConfig { suites: vec!["hilbert".into(), "git-f21".into()], bound: Some(10), ..Default::default() };
    let a = to_json(&run_suites(&cfg).unwrap());
    let b = to_json(&run_suites(&cfg).unwrap());
    assert_eq!(a, b);
    assert!(to_csv(&run_suites(&cfg).unwrap()).starts_with("suite,seed,bound,check"));
}

#[test]
fn config_parsing() {
    let c = SuiteConfig::parse("# demo\nsuites = git-c7, lattices\nseed = 3\nbound.lattices = 50\nformat = csv\nstrict = true\n").unwrap();
    assert_eq!(c.suites, vec!["git-c7", "lattices"]);
    assert_eq!(c.bound_for("lattices", 200), 50);
    assert_eq!(c.bound_for("git-c7", 0), 0);
    assert_eq!(c.format, Format::Csv);
    assert!(c.strict);
    assert!(matches!(SuiteConfig::parse("suites = nope"), Err(ReportError::UnknownSuite(_))));
    assert!(matches!(SuiteConfig::parse("bound = -1"), Err(ReportError::Config { .. })));
    assert!(matches!(SuiteConfig::parse("colour = red"), Err(ReportError::Config { line: 1, .. })));
    assert!(matches!(run_suite("nope", &c), Err(ReportError::UnknownSuite(_))));
}

#[test]
fn plane_labels() {
    let n = |s: &str| parse_number(s).unwrap();
    assert_eq!(plane_label(&n("1"), &n("1")), "A2 orbit");
    assert_eq!(plane_label(&n("omega"), &n("omega")), "A2 orbit");
    assert_eq!(plane_label(&n("2"), &n("3")), "smooth");
    assert_eq!(plane_label(&n("3/4"), &n("0")), "twist curve 0");
    assert_eq!(stratum_label(&[n("0"), n("0"), n("1"), n("1")]), "point [0,0,1,1]");
    assert_eq!(stratum_label(&[n("1"), n("0"), n("2"), n("-1")]), "boundary [1,0,t,-1]");
    let g = Grid::parse("-1,2,-1,2,1/2").unwrap();
    let rows = export_moduli_plane(&g);
    assert_eq!(rows.iter().filter(|r| !r.b.is_empty()).count(), 49);
    assert!(rows.iter().any(|r| r.a == "1" && r.b == "1" && r.label == "A2 orbit"));
    assert!(plane_csv(&rows).starts_with("a,b,label"));
    assert!(plane_svg(&g, &rows).contains("<polyline"));
    assert!(Grid::parse("0,1,0,1,0").is_err());
}
