use std::fs::File;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qk_core::cohomology::{betti_constraints, forms_decomposition, forms_decomposition_all, harmonic_candidates, BettiTable};
use qk_core::fusion::{fuse_exterior, fuse_sp1};
use qk_core::labels::{label_dimension, IrrepLabel, QuatDim, TwistLabel};
use qk_core::oracle::spinor_part;
use qk_core::spectra::{dirac_bound_untwisted, dirac_kernel, laplace_bound};
use qk_core::twist::{
    extremal_twists, index, index_closed_form, is_admissible, multiplicity_set, ExtremeMode, Regime,
};
use qk_core::verify::{run_suite, Suite, VerifyConfig};
use qk_core::QkError;

#[derive(Parser, Debug)]
#[command(name = "qk", version, about = "Exact representation-theory calculator for Sp(1)·Sp(n) holonomy")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Sign {
    Pos,
    Neg,
}

impl From<Sign> for Regime {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Pos => Regime::Positive,
            Sign::Neg => Regime::Negative,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Max,
    Min,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    All,
    Fusion,
    Twists,
    Index,
    Extremal,
    Casimir,
    Hyper,
    Forms,
    Betti,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spinor module S = ⊕ Symʳ H ⊗ Λ^{n-r}∘E with its half-spin split.
    DecomposeSpinor {
        #[arg(long)]
        n: u32,
    },
    /// Irreducible decomposition of the k-forms (all degrees if omitted).
    DecomposeForms {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Λᶜ∘E ⊗ Λᵈ∘E and/or Symᵏ H ⊗ Symˡ H.
    Fuse {
        #[arg(long)]
        n: u32,
        /// Exterior degrees as c,d.
        #[arg(long, value_parser = parse_pair)]
        exterior: Option<(u32, u32)>,
        /// Symmetric degrees as k,l.
        #[arg(long, value_parser = parse_pair)]
        sp1: Option<(u32, u32)>,
    },
    /// Whether a rep embeds in S ⊗ R^{l,d}, and how often.
    Admissible {
        #[arg(long)]
        n: u32,
        /// Rep as k,a,b.
        #[arg(long, value_parser = parse_triple)]
        rep: (u32, u32, u32),
        /// Twist as l,d.
        #[arg(long, value_parser = parse_pair)]
        twist: (u32, u32),
        /// Also report the multiplicity interval.
        #[arg(long)]
        detail: bool,
    },
    /// Index multiplicity of a rep in S⁺ ⊗ R minus S⁻ ⊗ R.
    Index {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_triple)]
        rep: (u32, u32, u32),
        #[arg(long, value_parser = parse_pair)]
        twist: (u32, u32),
    },
    /// Maximal or minimal twists of a rep.
    Extremal {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_triple)]
        rep: (u32, u32, u32),
        #[arg(long, value_enum)]
        mode: Mode,
    },
    /// Laplace bound on a rep, or the untwisted Dirac bound on S_r.
    Bound {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_triple, required_unless_present = "dirac_r")]
        rep: Option<(u32, u32, u32)>,
        #[arg(long, value_enum, default_value_t = Sign::Pos)]
        sign: Sign,
        /// Bound D² on the spinor summand S_r instead.
        #[arg(long, conflicts_with = "rep")]
        dirac_r: Option<u32>,
    },
    /// Reps contributing to the kernel of the Dirac square twisted by R^{l,d}.
    DiracKernel {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_pair)]
        twist: (u32, u32),
        #[arg(long, value_enum, default_value_t = Sign::Pos)]
        sign: Sign,
        /// Allow the negative-curvature analogue.
        #[arg(long)]
        extrapolate: bool,
    },
    /// Reps that may carry harmonic forms, with their form degrees.
    HarmonicCandidates {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum)]
        sign: Sign,
    },
    /// Check a Betti table (CSV rows degree,b_sp1,b_expt; '-' for stdin).
    BettiCheck {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum)]
        sign: Sign,
        #[arg(long)]
        table: String,
    },
    /// Run closed-form versus oracle checks.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 3)]
        n_max: u32,
        #[arg(long)]
        k_max: Option<u32>,
        #[arg(long)]
        l_max: Option<u32>,
        /// Random Betti tables per n and regime.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
}

fn parse_nums(s: &str, len: usize) -> Result<Vec<u32>, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != len {
        return Err(format!("expected {len} comma-separated integers, got '{s}'"));
    }
    parts
        .iter()
        .map(|p| p.parse::<u32>().map_err(|_| format!("'{p}' is not a nonnegative integer")))
        .collect()
}

fn parse_pair(s: &str) -> Result<(u32, u32), String> {
    let v = parse_nums(s, 2)?;
    Ok((v[0], v[1]))
}

fn parse_triple(s: &str) -> Result<(u32, u32, u32), String> {
    let v = parse_nums(s, 3)?;
    Ok((v[0], v[1], v[2]))
}

enum Failure {
    Input(QkError),
    Io(io::Error),
    Verification,
}

impl From<QkError> for Failure {
    fn from(e: QkError) -> Self {
        Failure::Input(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn rep_of(n: QuatDim, (k, a, b): (u32, u32, u32)) -> Result<IrrepLabel, QkError> {
    IrrepLabel::new(n, k, a, b)
}

fn twist_of(n: QuatDim, (l, d): (u32, u32)) -> Result<TwistLabel, QkError> {
    TwistLabel::new(n, l, d)
}

fn rep_json(n: QuatDim, r: &IrrepLabel) -> Value {
    json!({"k": r.k(), "a": r.a(), "b": r.b(), "dim": label_dimension(n, r)})
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), Failure> {
    let value = match cli.command {
        Command::DecomposeSpinor { n } => {
            let n = QuatDim::new(n)?;
            let rows: Vec<Value> = (0..=n.get())
                .map(|r| {
                    let hw = spinor_part(n, r);
                    let label = hw.to_label(n).expect("spinor summands are labelled");
                    let half = if (r + n.get()) % 2 == 0 { "plus" } else { "minus" };
                    let mut v = rep_json(n, &label);
                    v["r"] = json!(r);
                    v["half"] = json!(half);
                    v
                })
                .collect();
            Value::Array(rows)
        }
        Command::DecomposeForms { n, degree } => {
            let n = QuatDim::new(n)?;
            let chars = match degree {
                Some(k) => vec![(k, forms_decomposition(n, k)?)],
                None => forms_decomposition_all(n)?
                    .into_iter()
                    .enumerate()
                    .map(|(k, c)| (k as u32, c))
                    .collect(),
            };
            let mut rows = Vec::new();
            for (k, ch) in chars {
                for (hw, m) in ch.iter() {
                    let label = hw.to_label(n).expect("forms decompose into labelled reps");
                    let mut v = rep_json(n, &label);
                    v["degree"] = json!(k);
                    v["mult"] = json!(m);
                    rows.push(v);
                }
            }
            Value::Array(rows)
        }
        Command::Fuse { n, exterior, sp1 } => {
            let n = QuatDim::new(n)?;
            if exterior.is_none() && sp1.is_none() {
                return Err(Failure::Input(QkError::OutOfRange {
                    what: "fuse arguments",
                    detail: "give --exterior c,d and/or --sp1 k,l".into(),
                }));
            }
            let mut v = json!({});
            if let Some((c, d)) = exterior {
                let terms: Vec<Value> = fuse_exterior(n, c, d)?
                    .into_iter()
                    .map(|(a, b)| json!({"a": a, "b": b}))
                    .collect();
                v["exterior"] = Value::Array(terms);
            }
            if let Some((k, l)) = sp1 {
                v["sp1"] = json!(fuse_sp1(k, l));
            }
            v
        }
        Command::Admissible { n, rep, twist, detail } => {
            let n = QuatDim::new(n)?;
            let (r, t) = (rep_of(n, rep)?, twist_of(n, twist)?);
            let m = multiplicity_set(n, &r, &t);
            let mut v = json!({"admissible": is_admissible(n, &r, &t), "multiplicity": m.cardinality()});
            if detail {
                v["interval"] = json!({"lo": m.lo, "hi": m.hi, "parity": m.parity, "elements": m.elements()});
            }
            v
        }
        Command::Index { n, rep, twist } => {
            let n = QuatDim::new(n)?;
            let (r, t) = (rep_of(n, rep)?, twist_of(n, twist)?);
            let adm = is_admissible(n, &r, &t);
            let mut v = json!({"index": index(n, &r, &t), "admissible": adm});
            if adm {
                v["closed_form"] = json!(index_closed_form(n, &r, &t).to_string());
            }
            v
        }
        Command::Extremal { n, rep, mode } => {
            let n = QuatDim::new(n)?;
            let r = rep_of(n, rep)?;
            let mode = match mode {
                Mode::Max => ExtremeMode::Max,
                Mode::Min => ExtremeMode::Min,
            };
            serde_json::to_value(extremal_twists(n, &r, mode.regime())).expect("report serializes")
        }
        Command::Bound { n, rep, sign, dirac_r } => {
            let n = QuatDim::new(n)?;
            match (rep, dirac_r) {
                (_, Some(r)) => {
                    let c = dirac_bound_untwisted(n, r)?;
                    json!({"r": r, "regime": c.regime, "bound_coeff": c.to_json()})
                }
                (Some(rep), None) => laplace_bound(n, &rep_of(n, rep)?, sign.into())?.to_json(),
                (None, None) => unreachable!("clap requires --rep or --dirac-r"),
            }
        }
        Command::DiracKernel { n, twist, sign, extrapolate } => {
            let n = QuatDim::new(n)?;
            dirac_kernel(n, &twist_of(n, twist)?, sign.into(), extrapolate)?.to_json()
        }
        Command::HarmonicCandidates { n, sign } => {
            let n = QuatDim::new(n)?;
            serde_json::to_value(harmonic_candidates(n, sign.into())).expect("candidates serialize")
        }
        Command::BettiCheck { n, sign, table } => {
            let n = QuatDim::new(n)?;
            let mut text = String::new();
            if table == "-" {
                io::stdin().read_to_string(&mut text)?;
            } else {
                File::open(&table)?.read_to_string(&mut text)?;
            }
            let t = BettiTable::from_csv(n, text.as_bytes())?;
            let report = betti_constraints(sign.into(), &t);
            let mut v = serde_json::to_value(&report).expect("report serializes");
            v["consistent"] = json!(report.is_consistent());
            v
        }
        Command::Verify { suite, n_max, k_max, l_max, trials, seed } => {
            let cfg = VerifyConfig { n_max, k_max, l_max, betti_trials: trials, seed };
            let suites: Vec<Suite> = match suite {
                SuiteArg::All => Suite::ALL.to_vec(),
                SuiteArg::Fusion => vec![Suite::Fusion],
                SuiteArg::Twists => vec![Suite::Twists],
                SuiteArg::Index => vec![Suite::Index],
                SuiteArg::Extremal => vec![Suite::Extremal],
                SuiteArg::Casimir => vec![Suite::Casimir],
                SuiteArg::Hyper => vec![Suite::Hyper],
                SuiteArg::Forms => vec![Suite::Forms],
                SuiteArg::Betti => vec![Suite::Betti],
            };
            let mut rows = Vec::new();
            let mut failed = false;
            for s in suites {
                let rep = run_suite(s, &cfg)?;
                let mut v = json!({"suite": s.name(), "checks": rep.checks, "failures": rep.failures.len(), "passed": rep.passed()});
                if let Some(f) = rep.first_failure() {
                    failed = true;
                    v["first_failure"] = json!({"key": f.key, "detail": f.detail});
                    eprintln!("{s}: first failing tuple {:?}: {}", f.key, f.detail);
                }
                rows.push(v);
            }
            emit(out, cli.format, &Value::Array(rows))?;
            return if failed { Err(Failure::Verification) } else { Ok(()) };
        }
    };
    emit(out, cli.format, &value)?;
    Ok(())
}

fn scalar_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Arrays of flat objects become tables; anything else becomes key,value rows.
fn to_csv(v: &Value) -> String {
    let mut lines = Vec::new();
    match v {
        Value::Array(rows) if rows.iter().all(Value::is_object) && !rows.is_empty() => {
            let mut keys: Vec<String> = Vec::new();
            for r in rows {
                for k in r.as_object().expect("object").keys() {
                    if !keys.contains(k) {
                        keys.push(k.clone());
                    }
                }
            }
            keys.sort();
            lines.push(keys.join(","));
            for r in rows {
                let cells: Vec<String> = keys.iter().map(|k| csv_escape(&scalar_cell(&r[k.as_str()]))).collect();
                lines.push(cells.join(","));
            }
        }
        Value::Object(map) => {
            lines.push("key,value".into());
            for (k, x) in map {
                lines.push(format!("{k},{}", csv_escape(&scalar_cell(x))));
            }
        }
        other => lines.push(csv_escape(&scalar_cell(other))),
    }
    lines.join("\n")
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn emit(out: &mut impl Write, format: Format, v: &Value) -> io::Result<()> {
    let text = match format {
        Format::Json => v.to_string(),
        Format::Pretty => serde_json::to_string_pretty(v).expect("value serializes"),
        Format::Csv => to_csv(v),
    };
    writeln!(out, "{text}")
}

fn configure_threads() -> Result<(), String> {
    if let Ok(s) = std::env::var("QK_THREADS") {
        let n: usize = s
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| format!("QK_THREADS must be a positive integer, got '{s}'"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
