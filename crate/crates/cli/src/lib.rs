//! `fockdual` command-line front end.
//!
//! Exit codes: 0 when every check passes, 2 when a check fails, 1 on usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fockdual::bilinears::{commutation_failures, horizontal_span_dim, measured_central_charge, Horizontal};
use fockdual::duality::verify_decomposition;
use fockdual::fock::{graded_dimension, PairConfig};
use fockdual::hwv::{check_recipe, Branch, HwvRecipe};
use fockdual::rational::{fmt_doubled, fmt_q, parse_q, to_doubled};
use fockdual::reciprocity::{branch_decomposition, check_seesaw, SeesawCase};
use fockdual::weights::{lambda_map, weyl_dim, FiniteWeightLabel, GroupKind};
use fockdual::{DualPairKind, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CHECK: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "fockdual", version, about = "Exact checks of Fock-space dual pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Joint highest weight vectors and dimension ledger of one pair.
    Decompose {
        #[arg(long)]
        pair: String,
        #[arg(long)]
        dmax: String,
        #[command(flatten)]
        output: Output,
    },
    /// Central charge, commutation, horizontal closure and decomposition checks.
    VerifyPair {
        #[arg(long)]
        pair: String,
        #[arg(long)]
        dmax: String,
        #[command(flatten)]
        output: Output,
    },
    /// Build one explicit highest weight vector and check its weights.
    Hwv {
        #[arg(long)]
        pair: String,
        #[arg(long)]
        label: String,
        #[arg(long, default_value = "default")]
        branch: String,
        #[command(flatten)]
        output: Output,
    },
    /// Restriction of an orthogonal-group label to a block subgroup.
    Branch {
        /// Seesaw case file; its λ and subgroup are used.
        #[arg(long, conflicts_with_all = ["label", "subgroup"])]
        case: Option<PathBuf>,
        #[arg(long, requires = "subgroup")]
        label: Option<String>,
        /// For example "O(2)xO(2)".
        #[arg(long)]
        subgroup: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Compare the Fock-side d∞ tensor multiplicity with the branching multiplicity.
    Seesaw {
        #[arg(long)]
        case: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Graded dimensions of a Fock configuration.
    Ledger {
        #[arg(long)]
        config: String,
        #[arg(long)]
        dmax: String,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Label(_) | Error::LabelPair { .. } | Error::Config(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Engine(other),
        }
    }
}

struct Report {
    body: String,
    pass: bool,
}

impl Report {
    fn json(v: Value, pass: bool) -> Self {
        let mut body = serde_json::to_string_pretty(&v).expect("json values serialize");
        body.push('\n');
        Report { body, pass }
    }
}

fn parse_dmax(s: &str) -> Result<i64, Failure> {
    let bad = || Failure::Usage(format!("bad --dmax {s:?}: expected a nonnegative multiple of 1/2"));
    let x = parse_q(s.trim()).ok_or_else(bad)?;
    let d2 = to_doubled(&x).ok_or_else(bad)?;
    if d2 < 0 {
        return Err(bad());
    }
    Ok(d2)
}

fn parse_pair(s: &str) -> Result<DualPairKind, Failure> {
    s.parse().map_err(|e: Error| Failure::Usage(e.to_string()))
}

/// Accepts "[2]" for the pair's group as well as a fully qualified "Sp(2):[2]".
fn parse_label_for(group: GroupKind, s: &str) -> Result<FiniteWeightLabel, Failure> {
    let label = if s.contains("):") { s.parse()? } else { FiniteWeightLabel::parse_for(group, s)? };
    if label.group != group {
        return Err(Failure::Usage(format!("label {label} is not for {group}")));
    }
    Ok(label)
}

fn read_case(path: &PathBuf) -> Result<SeesawCase, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(SeesawCase::from_json(&v)?)
}

fn csv_only_for_ledger(cmd: &str, f: Format) -> Result<(), Failure> {
    if f == Format::Csv && cmd != "ledger" && cmd != "decompose" {
        return Err(Failure::Usage(format!("--format csv is not available for {cmd}")));
    }
    Ok(())
}

fn decompose(pair: &str, dmax: &str, format: Format) -> Result<Report, Failure> {
    let pair = parse_pair(pair)?;
    let report = verify_decomposition(&pair, parse_dmax(dmax)?)?;
    if format == Format::Csv {
        let mut body = String::from("degree,label,finite_weight,infinite_weight,mult,finite_dim\n");
        for h in &report.hwvs {
            body.push_str(&format!(
                "{},{},\"{}\",\"{}\",{},{}\n",
                fmt_doubled(h.key.degree2),
                h.label.as_ref().map_or_else(|| "?".to_string(), |l| l.to_text()),
                h.key.finite.iter().map(fmt_q).collect::<Vec<_>>().join(" "),
                h.key.infinite,
                h.mult,
                h.finite_dim
            ));
        }
        return Ok(Report { body, pass: report.pass() });
    }
    Ok(Report::json(report.to_json(), report.pass()))
}

fn verify_pair(pair: &str, dmax: &str) -> Result<Report, Failure> {
    let pair = parse_pair(pair)?;
    let dmax2 = parse_dmax(dmax)?;
    let cfg = pair.cfg();
    let probe2 = dmax2.min(4);
    let measured = measured_central_charge(&cfg, pair.infinite(), probe2)?;
    let expected = cfg.central_charge();
    let comm = commutation_failures(&pair, 3, dmax2.min(6))?;
    let span = horizontal_span_dim(&pair, probe2)?;
    let span_expected = Horizontal::expected_dim(&pair);
    let dec = verify_decomposition(&pair, dmax2)?;
    let pass = measured == expected && comm.is_empty() && span == span_expected && dec.pass();
    let v = json!({
        "pair": pair.to_string(),
        "d_max": fmt_doubled(dmax2),
        "central_charge": {"expected": fmt_q(&expected), "measured": fmt_q(&measured), "pass": measured == expected},
        "commutation": {"failures": comm, "pass": comm.is_empty()},
        "horizontal_span": {"dim": span, "expected": span_expected, "pass": span == span_expected},
        "decomposition": dec.to_json(),
        "pass": pass,
    });
    Ok(Report::json(v, pass))
}

fn hwv(pair: &str, label: &str, branch: &str) -> Result<Report, Failure> {
    let pair = parse_pair(pair)?;
    let label = parse_label_for(pair.finite(), label)?;
    let branch: Branch = branch.parse()?;
    let recipe = HwvRecipe::new(pair, label.clone(), branch)?;
    let expected = lambda_map(&pair, &label)?;
    let base = json!({
        "recipe": recipe.to_text(),
        "expected_infinite": expected.to_json(),
    });
    let mut obj = base.as_object().cloned().expect("object");
    let pass = match check_recipe(&recipe) {
        Ok((v, rep)) => {
            obj.insert("vector".into(), json!(v.to_text()));
            obj.insert("finite_weight".into(), json!(rep.finite_weight.iter().map(fmt_q).collect::<Vec<_>>()));
            obj.insert("infinite_weight".into(), rep.infinite.to_json());
            true
        }
        Err(e @ (Error::NotHighest(_) | Error::NotEigen(_) | Error::ZeroVector | Error::LabelPair { .. })) => {
            obj.insert("error".into(), json!(e.to_string()));
            false
        }
        Err(e) => return Err(e.into()),
    };
    obj.insert("pass".into(), json!(pass));
    Ok(Report::json(Value::Object(obj), pass))
}

fn parse_subgroup(s: &str) -> Result<(GroupKind, GroupKind), Failure> {
    let (a, b) = s
        .split_once(['x', '×'])
        .ok_or_else(|| Failure::Usage(format!("bad --subgroup {s:?}: expected G1xG2")))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn branch(case: Option<&PathBuf>, label: Option<&str>, subgroup: Option<&str>) -> Result<Report, Failure> {
    let (lambda, g1, g2) = match (case, label, subgroup) {
        (Some(p), _, _) => {
            let c = read_case(p)?;
            (c.lambda, c.mu.group, c.nu.group)
        }
        (None, Some(l), Some(s)) => {
            let (g1, g2) = parse_subgroup(s)?;
            (l.parse::<FiniteWeightLabel>()?, g1, g2)
        }
        _ => return Err(Failure::Usage("branch needs --case or --label with --subgroup".into())),
    };
    let dec = branch_decomposition(&lambda, g1, g2)?;
    let dim = weyl_dim(lambda.group, &lambda)?;
    let mut total = 0u64;
    let mut parts = Vec::new();
    for (mu, nu, k) in &dec {
        let d = weyl_dim(g1, mu)? * weyl_dim(g2, nu)?;
        total += k * d;
        parts.push(json!({"mu": mu.to_text(), "nu": nu.to_text(), "mult": k, "dim": d}));
    }
    let pass = total == dim;
    let v = json!({
        "lambda": lambda.to_text(),
        "subgroup": format!("{g1}x{g2}"),
        "components": parts,
        "dim_lambda": dim,
        "dim_sum": total,
        "pass": pass,
    });
    Ok(Report::json(v, pass))
}

fn seesaw(case: &PathBuf) -> Result<Report, Failure> {
    let c = read_case(case)?;
    let out = check_seesaw(&c)?;
    Ok(Report::json(out.to_json(), out.pass()))
}

fn ledger(config: &str, dmax: &str, format: Format) -> Result<Report, Failure> {
    let cfg: PairConfig = config.parse()?;
    let dmax2 = parse_dmax(dmax)?;
    let rows: Vec<(i64, usize)> = (0..=dmax2).map(|d2| (d2, graded_dimension(&cfg, d2))).collect();
    if format == Format::Csv {
        let mut body = String::from("degree,dim\n");
        for (d2, n) in &rows {
            body.push_str(&format!("{},{}\n", fmt_doubled(*d2), n));
        }
        return Ok(Report { body, pass: true });
    }
    let v = json!({
        "config": cfg.to_string(),
        "d_max": fmt_doubled(dmax2),
        "rows": rows.iter().map(|(d2, n)| json!({"degree": fmt_doubled(*d2), "dim": n})).collect::<Vec<_>>(),
    });
    Ok(Report::json(v, true))
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("FOCKDUAL_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("FOCKDUAL_THREADS={raw:?} is not a positive integer")))?;
    // A second call in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn dispatch(cmd: &Command) -> Result<(Report, &Output), Failure> {
    configure_threads()?;
    Ok(match cmd {
        Command::Decompose { pair, dmax, output } => (decompose(pair, dmax, output.format)?, output),
        Command::VerifyPair { pair, dmax, output } => {
            csv_only_for_ledger("verify-pair", output.format)?;
            (verify_pair(pair, dmax)?, output)
        }
        Command::Hwv { pair, label, branch: b, output } => {
            csv_only_for_ledger("hwv", output.format)?;
            (hwv(pair, label, b)?, output)
        }
        Command::Branch { case, label, subgroup, output } => {
            csv_only_for_ledger("branch", output.format)?;
            (branch(case.as_ref(), label.as_deref(), subgroup.as_deref())?, output)
        }
        Command::Seesaw { case, output } => {
            csv_only_for_ledger("seesaw", output.format)?;
            (seesaw(case)?, output)
        }
        Command::Ledger { config, dmax, output } => (ledger(config, dmax, output.format)?, output),
    })
}

/// Runs one command, writing reports to `stdout` (or `--out`) and diagnostics to `stderr`.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok((report, output)) => {
            let written = match &output.out {
                Some(path) => std::fs::write(path, &report.body).map_err(|e| format!("{}: {e}", path.display())),
                None => stdout.write_all(report.body.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_USAGE;
            }
            if report.pass {
                EXIT_OK
            } else {
                let _ = writeln!(stderr, "check failed");
                EXIT_CHECK
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Engine(e)) => {
            let _ = writeln!(stderr, "check failed: {e}");
            EXIT_CHECK
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}
