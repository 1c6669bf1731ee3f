use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use cubic7::arithgrp;
use cubic7::gitstab::{self, Family};
use cubic7::report::{self, Format, Grid, SuiteConfig, Verdict};
use serde_json::json;

#[derive(Parser)]
#[command(name = "cubic7", version, about = "Exact checks for cubic fourfolds with an order-7 automorphism")]
struct Cli {
    /// Flat key = value file; explicit flags win over its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification suites ("all" runs every registered suite).
    Verify {
        suites: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        bound: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Fmt>,
        /// Treat flagged checks as failures.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        parallelism: Option<usize>,
    },
    /// Print the suite registry with citations.
    ListSuites,
    /// Stratum labels on a rational grid of the (a,b)-plane.
    ExportPlane {
        /// a0,a1,b0,b1,step
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long, value_enum, default_value = "csv")]
        emit: PlaneFmt,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify every support pattern by the exact 1-PS oracle and the closed form.
    GitSweep {
        #[arg(long, value_enum)]
        family: Fam,
        #[arg(long, value_enum, default_value = "json")]
        emit: Fmt,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Arithmetic-group checks.
    Arith {
        #[command(subcommand)]
        cmd: ArithCmd,
    },
}

#[derive(Subcommand)]
enum ArithCmd {
    VerifyTable2,
    VerifyTable3,
    HilbertRoundtrip {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        height: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    QuatEmbed {
        #[arg(long = "box", default_value_t = 12)]
        bound: i64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlaneFmt {
    Csv,
    Svg,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fam {
    C7,
    F21,
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => match std::io::stdout().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).unwrap() + "\n"
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let mut cfg = match &cli.config {
        Some(p) => SuiteConfig::parse(&fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?,
        None => SuiteConfig::default(),
    };
    match cli.cmd {
        Cmd::Verify { suites, seed, bound, out, format, strict, parallelism } => {
            if !suites.is_empty() {
                cfg.suites = if suites.iter().any(|s| s == "all") { vec![] } else { suites };
            } else if cli.config.is_none() {
                bail!("name at least one suite, or `all` (see list-suites)");
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if bound.is_some() {
                cfg.bound = bound;
            }
            if let Some(p) = out {
                cfg.output_path = Some(p.display().to_string());
            }
            if let Some(f) = format {
                cfg.format = match f {
                    Fmt::Json => Format::Json,
                    Fmt::Csv => Format::Csv,
                };
            }
            cfg.strict |= strict;
            if let Some(p) = parallelism {
                cfg.parallelism = p.max(1);
            }
            let reports = report::run_suites(&cfg)?;
            let text = match cfg.format {
                Format::Json => report::to_json(&reports) + "\n",
                Format::Csv => report::to_csv(&reports),
            };
            emit(&cfg.output_path.as_ref().map(PathBuf::from), &text)?;
            for r in &reports {
                let (p, f, fl) = (r.count(Verdict::Pass), r.count(Verdict::Fail), r.count(Verdict::Flagged));
                eprintln!("{:<15} pass {p:>4}  fail {f:>3}  flagged {fl:>2}  {:>8} ms", r.suite, r.wall_time_ms);
                for c in r.checks.iter().filter(|c| c.verdict == Verdict::Flagged) {
                    eprintln!("  warning: {} flagged: {}", c.id, c.explanation);
                }
            }
            Ok(report::all_pass(&reports, cfg.strict))
        }
        Cmd::ListSuites => {
            let mut text = String::new();
            for s in report::registry() {
                text += &format!("{:<15} {}\n{:<15} cites: {}\n", s.name, s.summary, "", s.citation);
            }
            emit(&None, &text)?;
            Ok(true)
        }
        Cmd::ExportPlane { grid, emit: fmt, out } => {
            let g = Grid::parse(&grid)?;
            let rows = report::export_moduli_plane(&g);
            let text = match fmt {
                PlaneFmt::Csv => report::plane_csv(&rows),
                PlaneFmt::Svg => report::plane_svg(&g, &rows),
                PlaneFmt::Json => pretty(&json!(rows)),
            };
            emit(&out, &text)?;
            Ok(true)
        }
        Cmd::GitSweep { family, emit: fmt, out } => {
            let fam = match family {
                Fam::C7 => Family::C7,
                Fam::F21 => Family::F21,
            };
            let rows = gitstab::sweep(fam);
            let text = match fmt {
                Fmt::Json => {
                    let v: Vec<_> = rows
                        .iter()
                        .map(|r| {
                            json!({
                                "pattern": r.pattern.clone(),
                                "oracle": r.oracle.as_str(),
                                "closed_form": r.closed_form.as_str(),
                                "certificate": r.certificate,
                                "agree": r.agree,
                            })
                        })
                        .collect();
                    pretty(&json!(v))
                }
                Fmt::Csv => {
                    let mut w = csv::Writer::from_writer(vec![]);
                    w.write_record(["pattern", "oracle", "closed_form", "certificate", "agree"])?;
                    for r in &rows {
                        let cert = r.certificate.as_ref().map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).unwrap_or_default();
                        w.write_record([r.pattern.clone(), r.oracle.as_str().into(), r.closed_form.as_str().into(), cert, r.agree.to_string()])?;
                    }
                    String::from_utf8(w.into_inner()?)?
                }
            };
            emit(&out, &text)?;
            Ok(rows.iter().all(|r| r.agree))
        }
        Cmd::Arith { cmd } => arith(cmd, cfg.strict),
    }
}

fn arith(cmd: ArithCmd, strict: bool) -> Result<bool> {
    match cmd {
        ArithCmd::VerifyTable2 => {
            let r = arithgrp::verify_table2();
            let rows: Vec<_> = r
                .rows
                .iter()
                .map(|row| {
                    let h = arithgrp::TypedElementRank3 { ty: row.ty, coords: row.coords }.matrix();
                    json!({"row": row, "h": mat_strings(&h)})
                })
                .collect();
            let ok = r.rows.iter().all(|x| x.member && x.matches_display && x.in_so_plus && x.preserves_computed == Some(x.preserves_listed))
                && r.elementary_abelian
                && r.labels_consistent;
            let flagged = !r.label_mismatches.is_empty();
            let corrected: Vec<_> = r.rows.iter().map(|x| json!({"type": x.ty, "label": x.label_computed})).collect();
            emit(&None, &pretty(&json!({"rows": rows, "cayley": r.cayley, "duplicate_labels": r.duplicate_labels, "label_mismatches": r.label_mismatches, "corrected_labels": corrected})))?;
            if flagged {
                eprintln!("warning: listed labels disagree with products at rows {:?} (flagged)", r.label_mismatches);
            }
            Ok(ok && !(strict && flagged))
        }
        ArithCmd::VerifyTable3 => {
            let r = arithgrp::verify_table3();
            let rows: Vec<_> = r
                .rows
                .iter()
                .map(|row| {
                    let (h1, h2) = arithgrp::TypedElementRank4 { ty: row.ty, c: row.c }.pair();
                    json!({"row": row, "h1": mat_strings(&h1), "h2": mat_strings(&h2)})
                })
                .collect();
            emit(&None, &pretty(&json!({"rows": rows, "cayley": r.cayley, "klein_four": r.klein_four, "rejects_2_42_6_14": r.impossible_pattern_mod4})))?;
            Ok(r.rows.iter().all(|x| x.member && x.matches_display) && r.klein_four && r.impossible_pattern_mod4)
        }
        ArithCmd::HilbertRoundtrip { count, height, seed } => {
            let r = arithgrp::hilbert_roundtrip(seed, count, height);
            emit(&None, &pretty(&json!(r)))?;
            Ok(r.forward_ok == count && r.roundtrip_ok == count && r.pullback_ok == r.pullback_samples)
        }
        ArithCmd::QuatEmbed { bound } => {
            let units = arithgrp::quaternion_units(bound);
            let mut ok = true;
            let rows: Vec<_> = units
                .iter()
                .map(|q| match arithgrp::quaternion_embed(q) {
                    Ok(t) => json!({"unit": q, "type": t.ty, "coords": t.coords}),
                    Err(e) => {
                        ok = false;
                        json!({"unit": q, "error": e.to_string()})
                    }
                })
                .collect();
            let (n, div) = arithgrp::mod3_lemma(20);
            emit(&None, &pretty(&json!({"box": bound, "units": rows, "norm4_solutions": n, "three_divides_x": div})))?;
            Ok(ok && div)
        }
    }
}

fn mat_strings(m: &cubic7::linalg::FMatrix) -> Vec<Vec<String>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m.get(i, j).to_string()).collect()).collect()
}
