//! Command-line surface over all modules.
//!
//! Exit codes: 0 success, 1 domain error (invalid tuple, disconnected beta,
//! wrong ambient manifold), 2 usage error, 3 internal-consistency failure.

use std::fs::File;
use std::io::{BufWriter, IsTerminal, Write};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::cfk;
use crate::coherence::downstairs_census;
use crate::cover::{build_walk, extend_and_normalize, extended_walk};
use crate::diagram::FourTuple;
use crate::floer::{alexander_polynomial, hfk_hat, knot_complex};
use crate::pipeline::{
    classify, enumerate_tuples, reproduce_table1, write_csv, write_records, Ambient,
};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "oneone", version, about = "L-space and almost L-space detection for (1,1) knots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format for the primary result.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Tuple component order of the input text (pqsr swaps the last two).
    #[arg(long, global = true, value_enum, default_value_t = Order::Pqrs)]
    order: Order,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Order {
    /// The standard reading: p, q, r, s.
    Pqrs,
    /// Nonstandard escape hatch: p, q, s, r.
    Pqsr,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a four-tuple and print its normal form, mirror, and canonical
    /// representative.
    Validate { tuple: String },
    /// Dump the closed-traversal walk as JSON.
    Walk { tuple: String },
    /// Print the downstairs and universal-cover inconsistent-arc censuses.
    Census { tuple: String },
    /// Classify as l-space / almost-l-space / neither.
    Classify {
        tuple: String,
        /// Also compute the Floer complex and verify the predicted shapes.
        #[arg(long)]
        deep: bool,
        /// Emit censuses and witness data.
        #[arg(long)]
        diagnostics: bool,
    },
    /// HFK-hat ranks by Alexander grading.
    Hfk { tuple: String },
    /// The symmetrized Alexander polynomial (knots in the three-sphere).
    Alexander { tuple: String },
    /// The combinatorial knot Floer complex.
    Cfk {
        tuple: String,
        /// Print generators and weighted differential components.
        #[arg(long)]
        dump: bool,
        /// Print the staircase-plus-box decomposition of the exceptional
        /// class.
        #[arg(long)]
        decompose: bool,
    },
    /// Classify every tuple with p up to the bound.
    Enumerate(EnumerateArgs),
    /// Re-derive the golden table of almost L-space knots with p <= 15.
    Table1,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[arg(long, default_value_t = 7)]
    max_p: i64,
    #[arg(long, value_enum, default_value_t = AmbientArg::S3)]
    ambient: AmbientArg,
    /// Worker threads for the tuple scan.
    #[arg(long)]
    jobs: Option<usize>,
    /// Write JSONL here instead of stdout ('.csv' suffix switches format).
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    deep: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AmbientArg {
    S3,
    All,
}

/// Parses and runs; returns the process exit code.
pub fn run<W: Write, E: Write>(argv: &[String], out: &mut W, err: &mut E) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/usage text; version/help exit 0.
            return if e.use_stderr() {
                let _ = write!(err, "{e}");
                2
            } else {
                let _ = write!(out, "{e}");
                0
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_internal() {
                3
            } else {
                1
            }
        }
    }
}

fn parse_tuple(text: &str, order: Order) -> Result<FourTuple> {
    match order {
        Order::Pqrs => FourTuple::from_str(text),
        Order::Pqsr => {
            let parts: Vec<&str> = text.split(',').map(str::trim).collect();
            if parts.len() != 4 {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("expected four comma-separated integers, got {text:?}"),
                });
            }
            FourTuple::from_str(&format!(
                "{},{},{},{}",
                parts[0], parts[1], parts[3], parts[2]
            ))
        }
    }
}

fn paint(text: &str, enabled: bool) -> String {
    if enabled {
        format!("\x1b[1m{text}\x1b[0m")
    } else {
        text.to_string()
    }
}

fn color_enabled() -> bool {
    match std::env::var("ONEONE_COLOR").as_deref() {
        Ok("never") => false,
        _ => std::io::stdout().is_terminal(),
    }
}

fn dispatch<W: Write>(cli: &Cli, out: &mut W) -> Result<()> {
    let io_err = |e: std::io::Error| Error::Io { path: "<stdout>".into(), msg: e.to_string() };
    match &cli.command {
        Command::Validate { tuple } => {
            let t = parse_tuple(tuple, cli.order)?;
            match cli.format {
                Format::Json => {
                    let doc = json!({
                        "tuple": t.as_array(),
                        "mirror": t.mirror().as_array(),
                        "canonical": t.canonical_rep().as_array(),
                    });
                    writeln!(out, "{doc}").map_err(io_err)?;
                }
                Format::Text => {
                    writeln!(out, "valid: {t}").map_err(io_err)?;
                    writeln!(out, "mirror: {}", t.mirror()).map_err(io_err)?;
                    writeln!(out, "canonical: {}", t.canonical_rep()).map_err(io_err)?;
                }
            }
            Ok(())
        }
        Command::Walk { tuple } => {
            let t = parse_tuple(tuple, cli.order)?;
            let walk = build_walk(&t)?;
            let entries: Vec<[i64; 4]> = walk.entries().iter().map(|e| e.as_signs()).collect();
            let doc = json!({
                "tuple": t.as_array(),
                "entries": entries,
                "delta_height": walk.delta_height(),
                "drift": walk.drift(),
            });
            writeln!(out, "{doc}").map_err(io_err)?;
            Ok(())
        }
        Command::Census { tuple } => {
            let t = parse_tuple(tuple, cli.order)?;
            let down = downstairs_census(&t)?;
            let walk = extend_and_normalize(&build_walk(&t)?);
            let cover = walk.arc_census().ok();
            match cli.format {
                Format::Json => {
                    let doc = json!({
                        "tuple": t.as_array(),
                        "downstairs": {
                            "bottom": {"rightward": down.bottom.rightward(), "leftward": down.bottom.leftward(), "tie": down.bottom.tie()},
                            "top": {"rightward": down.top.rightward(), "leftward": down.top.leftward(), "tie": down.top.tie()},
                            "inconsistent": down.total_inconsistent(),
                        },
                        "cover": cover.as_ref().map(|c| json!({
                            "upper": {"rightward": c.upper.rightward, "leftward": c.upper.leftward},
                            "lower": {"rightward": c.lower.rightward, "leftward": c.lower.leftward},
                            "inconsistent": c.total_inconsistent(),
                            "lines": c.lines,
                        })),
                    });
                    writeln!(out, "{doc}").map_err(io_err)?;
                }
                Format::Text => {
                    writeln!(
                        out,
                        "downstairs: bottom {}R/{}L top {}R/{}L inconsistent {}",
                        down.bottom.rightward(),
                        down.bottom.leftward(),
                        down.top.rightward(),
                        down.top.leftward(),
                        down.total_inconsistent()
                    )
                    .map_err(io_err)?;
                    match cover {
                        Some(c) => writeln!(
                            out,
                            "cover: upper {}R/{}L lower {}R/{}L inconsistent {}",
                            c.upper.rightward,
                            c.upper.leftward,
                            c.lower.rightward,
                            c.lower.leftward,
                            c.total_inconsistent()
                        )
                        .map_err(io_err)?,
                        None => writeln!(out, "cover: not a rational homology sphere")
                            .map_err(io_err)?,
                    }
                }
            }
            Ok(())
        }
        Command::Classify { tuple, deep, diagnostics } => {
            let t = parse_tuple(tuple, cli.order)?;
            let c = classify(&t, *deep)?;
            match cli.format {
                Format::Json => {
                    let mut doc = json!({
                        "tuple": t.as_array(),
                        "verdict": c.verdict.as_str(),
                        "delta_height": c.delta_height,
                        "spin_structures": c.spin_count,
                    });
                    if *diagnostics {
                        doc["down_inconsistent"] =
                            json!([c.down_inconsistent.0, c.down_inconsistent.1]);
                        doc["cover_inconsistent"] = json!(c.cover_inconsistent);
                        doc["witness"] = serde_json::to_value(&c.witness)
                            .unwrap_or(serde_json::Value::Null);
                        if let Some(shapes) = &c.shapes {
                            doc["shapes"] = json!(shapes
                                .iter()
                                .map(|s| s.kind())
                                .collect::<Vec<_>>());
                        }
                    }
                    writeln!(out, "{doc}").map_err(io_err)?;
                }
                Format::Text => {
                    writeln!(out, "{}", paint(c.verdict.as_str(), color_enabled()))
                        .map_err(io_err)?;
                    if *diagnostics {
                        writeln!(
                            out,
                            "downstairs inconsistent: {}+{}; cover: {}",
                            c.down_inconsistent.0, c.down_inconsistent.1, c.cover_inconsistent
                        )
                        .map_err(io_err)?;
                        if let Some(shapes) = &c.shapes {
                            for (class, s) in shapes.iter().enumerate() {
                                writeln!(out, "class {class}: {}", s.kind()).map_err(io_err)?;
                            }
                        }
                    }
                }
            }
            Ok(())
        }
        Command::Hfk { tuple } => {
            let t = parse_tuple(tuple, cli.order)?;
            let ranks = hfk_hat(&t)?;
            if ranks.spin_count == 1 {
                let flat: std::collections::BTreeMap<String, usize> =
                    ranks.ranks[&0].iter().map(|(&a, &n)| (a.to_string(), n)).collect();
                let doc = json!({"ranks": flat, "total": ranks.total});
                writeln!(out, "{doc}").map_err(io_err)?;
            } else {
                let by_class: std::collections::BTreeMap<String, _> = ranks
                    .ranks
                    .iter()
                    .map(|(class, m)| {
                        (
                            class.to_string(),
                            m.iter()
                                .map(|(&a, &n)| (a.to_string(), n))
                                .collect::<std::collections::BTreeMap<String, usize>>(),
                        )
                    })
                    .collect();
                let doc = json!({"classes": by_class, "total": ranks.total});
                writeln!(out, "{doc}").map_err(io_err)?;
            }
            Ok(())
        }
        Command::Alexander { tuple } => {
            let t = parse_tuple(tuple, cli.order)?;
            let poly = alexander_polynomial(&t)?;
            match cli.format {
                Format::Json => {
                    let coeffs: std::collections::BTreeMap<String, i64> =
                        poly.coeffs.iter().map(|(&e, &c)| (e.to_string(), c)).collect();
                    writeln!(out, "{}", json!({ "coefficients": coeffs })).map_err(io_err)?;
                }
                Format::Text => writeln!(out, "{poly}").map_err(io_err)?,
            }
            Ok(())
        }
        Command::Cfk { tuple, dump, decompose } => {
            let t = parse_tuple(tuple, cli.order)?;
            let complex = knot_complex(&t)?;
            let walk = extended_walk(&t)?;
            if *dump || !*decompose {
                dump_complex(&complex, cli.format, out)?;
            }
            if *decompose {
                let d = cfk::decompose_staircase_plus_box(&complex, &walk)?;
                match cli.format {
                    Format::Json => {
                        let doc = json!({
                            "tuple": t.as_array(),
                            "spin_class": d.spin_class,
                            "staircase_generators": d.staircase.generator_count(),
                            "box": true,
                            "basis": d.basis.iter().map(|b| b.label.clone()).collect::<Vec<_>>(),
                        });
                        writeln!(out, "{doc}").map_err(io_err)?;
                    }
                    Format::Text => {
                        writeln!(
                            out,
                            "staircase of {} generators + box (class {})",
                            d.staircase.generator_count(),
                            d.spin_class
                        )
                        .map_err(io_err)?;
                        for b in &d.basis {
                            writeln!(out, "  {}", b.label).map_err(io_err)?;
                        }
                    }
                }
            }
            Ok(())
        }
        Command::Enumerate(args) => {
            let ambient = match args.ambient {
                AmbientArg::S3 => Ambient::S3,
                AmbientArg::All => Ambient::AnyQhs,
            };
            let records = match args.jobs {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::Io { path: "<threads>".into(), msg: e.to_string() })?
                    .install(|| enumerate_tuples(args.max_p, ambient, args.deep)),
                None => enumerate_tuples(args.max_p, ambient, args.deep),
            }?;
            match &args.out {
                Some(path) => {
                    let file = File::create(path)
                        .map_err(|e| Error::Io { path: path.clone(), msg: e.to_string() })?;
                    let mut sink = BufWriter::new(file);
                    if path.ends_with(".csv") {
                        write_csv(&mut sink, &records)?;
                    } else {
                        write_records(&mut sink, &records)?;
                    }
                    writeln!(out, "{} records -> {path}", records.len()).map_err(io_err)?;
                }
                None => write_records(out, &records)?,
            }
            Ok(())
        }
        Command::Table1 => {
            let report = reproduce_table1()?;
            if !report.is_clean() {
                writeln!(out, "{}/12 matched", report.matched.len()).map_err(io_err)?;
                for t in &report.missing {
                    writeln!(out, "missing: {t}").map_err(io_err)?;
                }
                for t in &report.extra {
                    writeln!(out, "extra: {t}").map_err(io_err)?;
                }
                return Err(Error::DecompositionFailed(
                    "table reproduction diff is nonempty".into(),
                ));
            }
            match cli.format {
                Format::Json => {
                    let doc = json!({
                        "matched": report
                            .matched
                            .iter()
                            .map(|(t, name)| json!({"tuple": t.as_array(), "knot": name}))
                            .collect::<Vec<_>>(),
                    });
                    writeln!(out, "{doc}").map_err(io_err)?;
                }
                Format::Text => {
                    writeln!(out, "{}/12 matched", report.matched.len()).map_err(io_err)?;
                    for (t, name) in &report.matched {
                        writeln!(out, "{t}  {name}").map_err(io_err)?;
                    }
                }
            }
            Ok(())
        }
    }
}

fn dump_complex<W: Write>(
    complex: &crate::floer::KnotComplex,
    format: Format,
    out: &mut W,
) -> Result<()> {
    let io_err = |e: std::io::Error| Error::Io { path: "<stdout>".into(), msg: e.to_string() };
    match format {
        Format::Json => {
            let doc = json!({
                "tuple": complex.tuple.as_array(),
                "spin_count": complex.spin_count,
                "generators": complex.generators.iter().map(|g| json!({
                    "id": g.id,
                    "residue": g.residue,
                    "class": g.spin_class,
                    "alexander": g.alexander,
                    "maslov": g.maslov,
                })).collect::<Vec<_>>(),
                "components": complex.components.iter().map(|c| json!({
                    "from": c.from, "to": c.to, "n_w": c.n_w, "n_z": c.n_z,
                })).collect::<Vec<_>>(),
            });
            writeln!(out, "{doc}").map_err(io_err)?;
        }
        Format::Text => {
            for g in &complex.generators {
                writeln!(
                    out,
                    "x{}: class {} A {} M {}",
                    g.residue, g.spin_class, g.alexander, g.maslov
                )
                .map_err(io_err)?;
            }
            for c in &complex.components {
                writeln!(
                    out,
                    "x{} -> x{}  (n_w {}, n_z {})",
                    complex.generators[c.from].residue,
                    complex.generators[c.to].residue,
                    c.n_w,
                    c.n_z
                )
                .map_err(io_err)?;
            }
        }
    }
    Ok(())
}

/// Entry point used by the binary.
pub fn run_main() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    let mut out = std::io::stdout();
    let mut err = std::io::stderr();
    run(&args, &mut out, &mut err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let argv: Vec<String> =
            std::iter::once("oneone").chain(args.iter().copied()).map(String::from).collect();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(&argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn classify_command() {
        let (code, out, _) = run_capture(&["classify", "7,3,0,2"]);
        assert_eq!(code, 0);
        assert!(out.contains("almost-l-space"));
    }

    #[test]
    fn classify_disconnected_is_domain_error() {
        let (code, _, err) = run_capture(&["classify", "3,1,0,0"]);
        assert_eq!(code, 1);
        assert!(err.contains("disconnected"));
    }

    #[test]
    fn usage_error_is_exit_2() {
        let (code, _, _) = run_capture(&["no-such-command"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn walk_json_golden() {
        let (code, out, _) = run_capture(&["walk", "5,2,0,1"]);
        assert_eq!(code, 0);
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(doc["delta_height"], -1);
        assert_eq!(doc["drift"], -5);
        assert_eq!(doc["entries"].as_array().unwrap().len(), 11);
        assert_eq!(doc["entries"][0], serde_json::json!([0, 1, 1, 0]));
    }

    #[test]
    fn hfk_json_shape() {
        let (code, out, _) = run_capture(&["hfk", "5,2,0,1"]);
        assert_eq!(code, 0);
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(doc["ranks"]["0"], 3);
        assert_eq!(doc["total"], 5);
    }

    #[test]
    fn alexander_text() {
        let (code, out, _) = run_capture(&["alexander", "7,3,0,2"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "2t - 3 + 2t^-1");
    }

    #[test]
    fn order_flag_swaps_last_two() {
        let (code, out, _) = run_capture(&["--order", "pqsr", "classify", "7,3,2,0"]);
        assert_eq!(code, 0);
        assert!(out.contains("almost-l-space"));
    }

    #[test]
    fn json_output_is_deterministic() {
        let (_, a, _) = run_capture(&["--format", "json", "classify", "5,2,0,1", "--diagnostics"]);
        let (_, b, _) = run_capture(&["--format", "json", "classify", "5,2,0,1", "--diagnostics"]);
        assert_eq!(a, b);
    }
}
