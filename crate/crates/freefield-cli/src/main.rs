//! `freefield`: command-line front end for the free-field kernel.
//!
//! Every run prints one report. JSON reports have the shape
//! `{"tool", "version", "params", "command", "result", "checks"}` with keys
//! in sorted order and all numbers exact (rationals as `"a/b"`, surds as
//! `"a+b√D"`). Exit status is 0 on success, 1 when the input is rejected,
//! and 2 when an internal invariant or a reported check fails.

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use freefield::atlas::{export_diagram, Atlas, Check, ExportFormat};
use freefield::fock::partition_count;
use freefield::lattice::{KacLabel, Params, Sign};
use freefield::linalg::Matrix;
use freefield::logdef::{build_deformed, jordan_profile, GlueTriple, Variant};
use freefield::scalars::{FieldElem, Rat};
use freefield::verma::Verma;
use freefield::vertex::{
    commutation_defect, compare_with_solved, map_rank_profile, screening, solve_intertwiner,
    FelderComplex, GradedMap, ScreeningSpec,
};
use freefield::{Error, VERSION};

#[derive(Parser, Debug)]
#[command(
    name = "freefield",
    version,
    about = "Exact free-field computations for (p₊, p₋) minimal-model lattices"
)]
struct Cli {
    /// The coprime pair `p₊ p₋`.
    #[arg(long, num_args = 2, value_names = ["P_PLUS", "P_MINUS"], default_values_t = [2, 3], global = true)]
    p: Vec<i64>,
    /// Truncation level N.
    #[arg(long, default_value_t = 8, global = true)]
    trunc: usize,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Show rationals with a decimal approximation (text output only).
    #[arg(long, global = true)]
    decimal: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Kac-table weights h_{r,s} and lowest weights Δ± of the simple modules.
    Weights,
    /// Singular vector S_{r,s} and the linearization of its norm.
    Singular {
        #[arg(long)]
        r: i64,
        #[arg(long)]
        s: i64,
    },
    /// Screening intertwiner between two Fock modules, labels "r,s,n".
    Screening {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Homology of the Felder complex through F_{r,s;0}.
    Felder {
        #[arg(long)]
        r: i64,
        #[arg(long)]
        s: i64,
        #[arg(long, allow_hyphen_values = true)]
        pos: i64,
        /// Screening sign, "+" or "-".
        #[arg(long, default_value = "+")]
        sign: String,
    },
    /// Logarithmic deformation along a glue triple.
    Logdef {
        /// "t0-row:R", "t0-col:S", "tmin+:R,S", "tmin-:R,S" or "±:r,s,n/r,s,n/r,s,n".
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        /// "single" or "tilde".
        #[arg(long, default_value = "single")]
        variant: String,
        /// Largest |m| in the bracket check.
        #[arg(long, default_value_t = 4)]
        max_mode: i64,
    },
    /// Structural data: consistency harness or a socle-series diagram.
    Atlas {
        #[arg(long)]
        check: bool,
        #[arg(long)]
        diagram: Option<String>,
        /// Shorthand for `--format dot` with `--diagram`.
        #[arg(long)]
        dot: bool,
        /// Print the Zhu-centre polynomial.
        #[arg(long)]
        zhu: bool,
    },
}

/// A finished report, or raw text for DOT output.
enum Output {
    Report {
        command: Value,
        result: Value,
        checks: Vec<Check>,
    },
    Raw(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let report = json!({
                "tool": "freefield",
                "version": VERSION,
                "error": {"code": "usage", "message": e.to_string().trim_end()},
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("json"));
            return ExitCode::from(1);
        }
    };
    let (params_value, outcome) = match Params::new(cli.p[0], cli.p[1]) {
        Ok(params) => (params_json(&params, cli.trunc), run(&cli, params)),
        Err(e) => (
            json!({"p_plus": cli.p[0], "p_minus": cli.p[1], "trunc": cli.trunc}),
            Err(e),
        ),
    };
    let (text, code) = match outcome {
        Ok(Output::Raw(s)) => (s, 0),
        Ok(Output::Report {
            command,
            result,
            checks,
        }) => {
            let code = if checks.iter().all(|c| c.passed) {
                0
            } else {
                2
            };
            let mut report = Map::new();
            report.insert("tool".into(), json!("freefield"));
            report.insert("version".into(), json!(VERSION));
            report.insert("params".into(), params_value);
            report.insert("command".into(), command);
            report.insert("result".into(), result);
            report.insert(
                "checks".into(),
                serde_json::to_value(&checks).expect("json"),
            );
            (render(&Value::Object(report), &cli), code)
        }
        Err(e) => {
            let code = if e.is_invariant() { 2 } else { 1 };
            let report = json!({
                "tool": "freefield",
                "version": VERSION,
                "params": params_value,
                "command": command_json(&cli.command),
                "error": {"code": e.code(), "message": e.to_string()},
            });
            (render(&report, &cli), code)
        }
    };
    if let Err(e) = emit(&cli, &text) {
        eprintln!("freefield: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn render(v: &Value, cli: &Cli) -> String {
    match cli.format {
        Format::Text => {
            let mut s = String::new();
            text_lines(v, 0, cli.decimal, &mut s);
            s
        }
        _ => serde_json::to_string_pretty(v).expect("json") + "\n",
    }
}

fn text_scalar(s: &str, decimal: bool) -> String {
    match s.parse::<Rat>() {
        Ok(r) if decimal && !r.is_integer() => format!("{s} (≈ {:.6})", r.to_f64()),
        _ => s.to_string(),
    }
}

fn text_lines(v: &Value, indent: usize, decimal: bool, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) | Value::Array(_) if !is_flat(x) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text_lines(x, indent + 1, decimal, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", inline(x, decimal))),
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                if is_flat(x) {
                    out.push_str(&format!("{pad}- {}\n", inline(x, decimal)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    text_lines(x, indent + 1, decimal, out);
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", inline(v, decimal))),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_object() && !x.is_array()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn inline(v: &Value, decimal: bool) -> String {
    match v {
        Value::String(s) => text_scalar(s, decimal),
        Value::Array(a) => format!(
            "[{}]",
            a.iter()
                .map(|x| inline(x, decimal))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        other => other.to_string(),
    }
}

fn params_json(p: &Params, trunc: usize) -> Value {
    json!({
        "p_plus": p.p_plus(),
        "p_minus": p.p_minus(),
        "central_charge": p.central_charge(),
        "trunc": trunc,
    })
}

fn command_json(c: &Command) -> Value {
    match c {
        Command::Weights => json!({"name": "weights"}),
        Command::Singular { r, s } => json!({"name": "singular", "r": r, "s": s}),
        Command::Screening { from, to } => json!({"name": "screening", "from": from, "to": to}),
        Command::Felder { r, s, pos, sign } => {
            json!({"name": "felder", "r": r, "s": s, "pos": pos, "sign": sign})
        }
        Command::Logdef {
            tau,
            variant,
            max_mode,
        } => {
            json!({"name": "logdef", "tau": tau, "variant": variant, "max_mode": max_mode})
        }
        Command::Atlas {
            check,
            diagram,
            dot,
            zhu,
        } => {
            json!({"name": "atlas", "check": check, "diagram": diagram, "dot": dot, "zhu": zhu})
        }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn check(name: &str, passed: bool, detail: Option<String>) -> Check {
    Check {
        name: name.to_string(),
        passed,
        detail: if passed { None } else { detail },
    }
}

fn parse_label(params: Params, text: &str) -> Result<KacLabel, Error> {
    let v: Vec<i64> = text
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Error::UnknownName(format!("Fock label {text:?}, expected \"r,s,n\"")))?;
    if v.len() != 3 {
        return Err(Error::UnknownName(format!(
            "Fock label {text:?}, expected \"r,s,n\""
        )));
    }
    Ok(KacLabel::new(params, v[0], v[1], v[2]))
}

fn parse_sign(text: &str) -> Result<Sign, Error> {
    match text {
        "+" | "plus" => Ok(Sign::Plus),
        "-" | "minus" => Ok(Sign::Minus),
        _ => Err(Error::UnknownName(format!("sign {text:?}"))),
    }
}

fn run(cli: &Cli, params: Params) -> Result<Output, Error> {
    let n = cli.trunc;
    let command = command_json(&cli.command);
    let report = |result: Value, checks: Vec<Check>| {
        Ok(Output::Report {
            command: command.clone(),
            result,
            checks,
        })
    };
    match &cli.command {
        Command::Weights => report(weights(&params)?, vec![]),
        Command::Singular { r, s } => {
            let verma = Verma::new(params, n);
            let sv = verma.shapovalov_element(*r, *s)?;
            let lin = verma.shapovalov_linearization(*r, *s)?;
            let coeffs: Map<String, Value> = sv
                .coeffs
                .iter()
                .map(|(w, c)| (format!("L{w}"), to_value(c)))
                .collect();
            let result = json!({
                "h": params.h(*r, *s, 0),
                "level": sv.level(),
                "singular_vector": coeffs,
                "norm": lin.norm.to_string(),
                "norm_at_root": lin.value_at_root,
                "r_bruteforce": lin.r_bruteforce,
                "r_formula": lin.r_formula,
            });
            let checks = vec![
                check(
                    "norm vanishes at h_rs",
                    lin.value_at_root.is_zero(),
                    Some(lin.value_at_root.to_string()),
                ),
                check(
                    "derivative matches product formula",
                    lin.r_bruteforce == lin.r_formula,
                    Some(format!("{} vs {}", lin.r_bruteforce, lin.r_formula)),
                ),
            ];
            report(result, checks)
        }
        Command::Screening { from, to } => {
            let src = parse_label(params, from)?;
            let tgt = parse_label(params, to)?.normalized();
            let spec = [Sign::Plus, Sign::Minus]
                .into_iter()
                .filter_map(|s| ScreeningSpec::new(s, &src).ok())
                .find(|spec| spec.target == tgt)
                .ok_or_else(|| {
                    Error::OutOfRange(format!("no screening from F[{from}] to F[{to}]"))
                })?;
            let q = screening(spec.sign, &spec.source, n)?;
            let prof = map_rank_profile(&q);
            let mut checks = Vec::new();
            let defect = commutation_defect(&q, 4)?;
            checks.push(check(
                "commutes with L_m, |m| <= 4",
                defect.is_none(),
                defect.map(|(m, k)| format!("L_{m} at source level {k}")),
            ));
            let mut comparison = None;
            if spec.index == 1 && spec.shift <= n as i64 {
                let solved = solve_intertwiner(&spec.source, &spec.target, n)?;
                let cmp = compare_with_solved(&q, &solved);
                checks.push(check(
                    "residue lies in the solved space",
                    cmp.in_span,
                    Some(format!("{} solutions", cmp.solution_dim)),
                ));
                checks.push(check(
                    "residue proportional to the unique solution",
                    cmp.proportional,
                    Some(format!("unique through level {:?}", cmp.determined_through)),
                ));
                comparison = Some(cmp);
            }
            let result = json!({
                "spec": spec,
                "rank_profile": prof,
                "solved_comparison": comparison,
                "blocks": map_blocks(&q),
            });
            report(result, checks)
        }
        Command::Felder { r, s, pos, sign } => {
            let sign = parse_sign(sign)?;
            let cx = FelderComplex::new(params, sign, *r, *s)?;
            let dims = cx.homology(*pos, n)?;
            let mut checks = Vec::new();
            let interior = (1..params.p_plus()).contains(r) && (1..params.p_minus()).contains(s);
            if *pos == 0 && interior {
                let want = Verma::new(params, n).irreducible_dims(&params.h(*r, *s, 0), n)?;
                checks.push(check(
                    "homology equals irreducible character",
                    dims == want,
                    Some(format!("{want:?}")),
                ));
            }
            let fock: Vec<usize> = (0..=n).map(partition_count).collect();
            let result = json!({
                "module": cx.module_at(*pos),
                "fock_dims": fock,
                "homology_dims": dims,
            });
            report(result, checks)
        }
        Command::Logdef {
            tau,
            variant,
            max_mode,
        } => {
            let triple = GlueTriple::parse(params, tau)?;
            let variant: Variant = variant.parse()?;
            let m = build_deformed(&triple, variant, n)?;
            let prof = jordan_profile(&m, n)?;
            let max_block = prof.iter().map(|l| l.max_block()).max().unwrap_or(0);
            let defect = m.bracket_defect(*max_mode, n)?;
            let checks = vec![
                check(
                    "size-2 Jordan block present",
                    max_block >= 2,
                    Some(format!("largest block {max_block}")),
                ),
                check(
                    "no Jordan block above size 2",
                    max_block <= 2,
                    Some(format!("largest block {max_block}")),
                ),
                check(
                    "deformed Virasoro brackets",
                    defect.is_none(),
                    defect.map(|(a, b, l)| format!("[L_{a}, L_{b}] at level {l}")),
                ),
            ];
            let result = json!({
                "triple": triple,
                "variant": variant,
                "jordan": prof,
                "max_block": max_block,
            });
            report(result, checks)
        }
        Command::Atlas {
            check: run_check,
            diagram,
            dot,
            zhu,
        } => {
            let atlas = Atlas::new(params, n);
            if let Some(name) = diagram {
                let d = atlas.socle_series(name)?;
                if *dot || cli.format == Format::Dot {
                    return Ok(Output::Raw(export_diagram(&d, ExportFormat::Dot)?));
                }
                let c = atlas.check_diagram(&d);
                return report(to_value(&d), vec![c]);
            }
            if cli.format == Format::Dot {
                return Err(Error::OutOfRange("dot output needs --diagram".into()));
            }
            let z = atlas.zhu_center();
            let mut result = json!({
                "simple_count": atlas.simple_list().len(),
                "block_count": atlas.block_partition().len(),
                "blocks": atlas
                    .block_partition()
                    .iter()
                    .map(|(b, m)| (b.to_string(), to_value(m)))
                    .collect::<Map<_, _>>(),
                "ext": atlas.ext_table(),
                "zhu_degree": z.degree(),
            });
            if *zhu {
                result["zhu"] = to_value(&z);
            }
            let checks = if *run_check {
                atlas.check_consistency().checks
            } else {
                vec![]
            };
            report(result, checks)
        }
    }
}

fn weights(p: &Params) -> Result<Value, Error> {
    let mut kac = Vec::new();
    let mut simples = Vec::new();
    for r in 1..=p.p_plus() {
        for s in 1..=p.p_minus() {
            kac.push(json!({"r": r, "s": s, "h": p.h(r, s, 0)}));
            simples.push(json!({
                "r": r,
                "s": s,
                "delta_plus": p.delta_weight(Sign::Plus, r, s, 0)?,
                "delta_minus": p.delta_weight(Sign::Minus, r, s, 0)?,
            }));
        }
    }
    Ok(json!({"kac": kac, "x_lowest_weights": simples}))
}

fn matrix_json(m: &Matrix<FieldElem>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(to_value).collect()))
            .collect(),
    )
}

fn map_blocks(q: &GradedMap) -> Value {
    Value::Object(
        q.blocks
            .iter()
            .filter(|(_, b)| b.rows() > 0)
            .map(|(k, b)| (format!("{k:02}"), matrix_json(b)))
            .collect(),
    )
}
