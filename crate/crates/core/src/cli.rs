//! Command-line front end.
//!
//! Every subcommand prints one report: key-value lines by default, or a
//! JSON object with `--format json`. Exact values are lowest-terms `p/q`
//! strings; decimal renderings sit next to them and are for reading only.
//! Output depends only on the arguments and file contents, except for the
//! opt-in `--timing` line.
//!
//! Exit codes: 0 success, 2 malformed input or usage, 3 refusal (a cap or
//! budget would be exceeded).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::approx::approx_lindisc;
use crate::error::Error;
use crate::exec::Limits;
use crate::lowdim::lindisc_lowdim;
use crate::matrix::{eval_residual, parse_matrix, Coloring, Matrix, Weight};
use crate::onerow::{lindisc_onerow, round_onerow};
use crate::oracle::{grid_steps, lindisc_at, lindisc_grid_bracket};
use crate::rational::{half, parse_rational, to_decimal, to_pq, Rational};
use crate::reduction::{incidence_matrix, nae_satisfiable, subset_sum_weight, MonotoneCnf, SubsetSumInstance};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_REFUSAL: i32 = 3;

const DECIMAL_PLACES: usize = 6;

#[derive(Parser, Debug)]
#[command(name = "lindisc", version, about = "Linear discrepancy of rational matrices")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Append wall-clock time to the report (breaks byte-stability).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Single-row matrices.
    #[command(subcommand)]
    Onerow(OnerowCmd),
    /// Integer matrices with one or two rows.
    #[command(subcommand)]
    Lowdim(LowdimCmd),
    /// Operator-norm bracket.
    Approx { matrix: PathBuf },
    /// Brute-force oracles.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Instance generators from the hardness reductions.
    #[command(subcommand)]
    Gen(GenCmd),
}

#[derive(Subcommand, Debug)]
enum OnerowCmd {
    /// Exact lindisc of a 1 x n matrix.
    Exact { matrix: PathBuf },
    /// Round a weight vector within lindisc.
    Round {
        matrix: PathBuf,
        #[command(flatten)]
        w: WeightArg,
    },
}

#[derive(Subcommand, Debug)]
enum LowdimCmd {
    /// Exact lindisc and a deep hole.
    Exact { matrix: PathBuf },
}

#[derive(Subcommand, Debug)]
enum OracleCmd {
    /// lindisc(A, w) by enumerating all colorings.
    At {
        matrix: PathBuf,
        #[command(flatten)]
        w: WeightArg,
    },
    /// Bracket on lindisc(A) from the weight grid of step h = 1/k.
    Grid {
        matrix: PathBuf,
        #[arg(long)]
        h: String,
    },
}

#[derive(Subcommand, Debug)]
enum GenCmd {
    /// Incidence matrix of a monotone 3-CNF and its half-vector probe.
    Nae {
        cnf: PathBuf,
        /// Also write the incidence matrix to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Subset-sum probe lindisc([values], t 1).
    Subsetsum {
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// Also write the 1 x n matrix to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct WeightArg {
    /// Comma-separated rationals.
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    /// File of comma- or whitespace-separated rationals.
    #[arg(long)]
    w_file: Option<PathBuf>,
}

/// Ordered report fields.
enum Field {
    Text(String),
    Count(u64),
    Flag(bool),
    Exact(Rational),
    Vector(Vec<Rational>),
    Lines(Vec<String>),
}

struct RunReport {
    fields: Vec<(&'static str, Field)>,
}

impl RunReport {
    fn new(command: String, algorithm: &str) -> Self {
        RunReport {
            fields: vec![
                ("command", Field::Text(command)),
                ("algorithm", Field::Text(algorithm.into())),
            ],
        }
    }

    fn push(&mut self, key: &'static str, f: Field) -> &mut Self {
        self.fields.push((key, f));
        self
    }

    fn digest(&mut self, bytes: &[u8]) -> &mut Self {
        let d = Sha256::digest(bytes);
        self.push("input_sha256", Field::Text(hex::encode(d)))
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Json => self.render_json(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        for (key, f) in &self.fields {
            match f {
                Field::Text(s) => out.push_str(&format!("{key} = {s}\n")),
                Field::Count(c) => out.push_str(&format!("{key} = {c}\n")),
                Field::Flag(b) => out.push_str(&format!("{key} = {b}\n")),
                Field::Exact(r) => {
                    out.push_str(&format!("{key} = {}\n", to_pq(r)));
                    out.push_str(&format!("{key}.decimal = {} (display only)\n", to_decimal(r, DECIMAL_PLACES)));
                }
                Field::Vector(v) => {
                    let exact: Vec<String> = v.iter().map(to_pq).collect();
                    let dec: Vec<String> = v.iter().map(|r| to_decimal(r, DECIMAL_PLACES)).collect();
                    out.push_str(&format!("{key} = {}\n", exact.join(",")));
                    out.push_str(&format!("{key}.decimal = {} (display only)\n", dec.join(",")));
                }
                Field::Lines(lines) => {
                    for (k, l) in lines.iter().enumerate() {
                        out.push_str(&format!("{key}[{}] = {l}\n", k + 1));
                    }
                }
            }
        }
        out
    }

    fn render_json(&self) -> String {
        let mut obj = Map::new();
        for (key, f) in &self.fields {
            let v = match f {
                Field::Text(s) => json!(s),
                Field::Count(c) => json!(c),
                Field::Flag(b) => json!(b),
                Field::Exact(r) => json!({"exact": to_pq(r), "decimal": to_decimal(r, DECIMAL_PLACES)}),
                Field::Vector(v) => json!({
                    "exact": v.iter().map(to_pq).collect::<Vec<_>>(),
                    "decimal": v.iter().map(|r| to_decimal(r, DECIMAL_PLACES)).collect::<Vec<_>>(),
                }),
                Field::Lines(lines) => json!(lines),
            };
            obj.insert((*key).to_string(), v);
        }
        obj.insert("decimal_fields".into(), json!("display only"));
        let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable");
        s.push('\n');
        s
    }
}

/// Parses `args` (including the program name) and runs one subcommand.
pub fn run<I, S>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let echo = std::iter::once("lindisc".to_string())
        .chain(args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()))
        .collect::<Vec<_>>()
        .join(" ");
    let limits = Limits::from_env();
    let start = Instant::now();
    match execute(&cli.command, echo, &limits) {
        Ok(mut report) => {
            if cli.timing {
                report.push("elapsed_ms", Field::Text(format!("{:.3}", start.elapsed().as_secs_f64() * 1e3)));
            }
            if write!(out, "{}", report.render(cli.format)).is_err() {
                return EXIT_INPUT;
            }
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_refusal() {
                EXIT_REFUSAL
            } else {
                EXIT_INPUT
            }
        }
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, Error> {
    fs::read(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))
}

fn load_matrix(path: &Path, report: &mut RunReport) -> Result<Matrix, Error> {
    let bytes = read_bytes(path)?;
    report.digest(&bytes);
    let a = parse_matrix(&bytes)?;
    report
        .push("rows", Field::Count(a.rows() as u64))
        .push("cols", Field::Count(a.cols() as u64));
    Ok(a)
}

fn load_weight(arg: &WeightArg, a: &Matrix) -> Result<Weight, Error> {
    let w = match (&arg.w, &arg.w_file) {
        (Some(text), _) => Weight::parse(text)?,
        (None, Some(path)) => {
            let bytes = read_bytes(path)?;
            let text = String::from_utf8(bytes)
                .map_err(|_| Error::Input(format!("{} is not UTF-8", path.display())))?;
            Weight::parse(&text)?
        }
        (None, None) => return Err(Error::Input("a weight vector is required".into())),
    };
    if w.len() != a.cols() {
        return Err(Error::Dimension(format!(
            "weight has {} coordinates, matrix has {} columns",
            w.len(),
            a.cols()
        )));
    }
    Ok(w)
}

fn coloring_field(x: &Coloring) -> Field {
    Field::Text(x.to_string())
}

fn execute(cmd: &Command, echo: String, limits: &Limits) -> Result<RunReport, Error> {
    match cmd {
        Command::Onerow(OnerowCmd::Exact { matrix }) => {
            let mut r = RunReport::new(echo, "onerow-gap-fold");
            let a = load_matrix(matrix, &mut r)?;
            let v = lindisc_onerow(&a)?;
            r.push("value", Field::Exact(v));
            Ok(r)
        }
        Command::Onerow(OnerowCmd::Round { matrix, w }) => {
            let mut r = RunReport::new(echo, "onerow-subset-sum-rounding");
            let a = load_matrix(matrix, &mut r)?;
            let w = load_weight(w, &a)?;
            let bound = lindisc_onerow(&a)?;
            let x = round_onerow(&a, &w)?;
            let residual = eval_residual(&a, &w, &x)?;
            r.push("w", Field::Vector(w.coords().to_vec()))
                .push("coloring", coloring_field(&x))
                .push("residual", Field::Exact(residual))
                .push("lindisc", Field::Exact(bound));
            Ok(r)
        }
        Command::Lowdim(LowdimCmd::Exact { matrix }) => {
            let mut r = RunReport::new(echo, "lowdim-reachability-linf-leb");
            let a = load_matrix(matrix, &mut r)?;
            let res = lindisc_lowdim(&a, limits)?;
            let sites: Vec<String> = res
                .leb
                .nearest_sites
                .iter()
                .map(|p| p.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
                .collect();
            r.push("value", Field::Exact(res.leb.radius.clone()))
                .push("center", Field::Vector(res.leb.center.clone()))
                .push("nearest_sites", Field::Lines(sites))
                .push("deep_hole", Field::Vector(res.deep_hole.w.coords().to_vec()))
                .push("deep_hole_value", Field::Exact(res.deep_hole.value.clone()))
                .push("deep_hole_minimizer", coloring_field(&res.deep_hole.minimizer));
            Ok(r)
        }
        Command::Approx { matrix } => {
            let mut r = RunReport::new(echo, "operator-norm-bracket");
            let a = load_matrix(matrix, &mut r)?;
            let b = approx_lindisc(&a);
            r.push("lower", Field::Exact(b.lower.clone()))
                .push("lower_provenance", Field::Text(b.lower_provenance.as_str().into()))
                .push("upper", Field::Exact(b.upper.clone()))
                .push("upper_provenance", Field::Text(b.upper_provenance.as_str().into()));
            Ok(r)
        }
        Command::Oracle(OracleCmd::At { matrix, w }) => {
            let mut r = RunReport::new(echo, "coloring-enumeration");
            let a = load_matrix(matrix, &mut r)?;
            let w = load_weight(w, &a)?;
            let rep = lindisc_at(&a, &w, limits)?;
            r.push("w", Field::Vector(rep.w.coords().to_vec()))
                .push("value", Field::Exact(rep.value))
                .push("minimizer", coloring_field(&rep.minimizer));
            Ok(r)
        }
        Command::Oracle(OracleCmd::Grid { matrix, h }) => {
            let mut r = RunReport::new(echo, "weight-grid-sweep");
            let a = load_matrix(matrix, &mut r)?;
            let h = parse_rational(h.trim(), 1, 1)?;
            grid_steps(&h)?;
            let g = lindisc_grid_bracket(&a, &h, limits)?;
            r.push("h", Field::Exact(h))
                .push("lower", Field::Exact(g.bracket.lower.clone()))
                .push("lower_provenance", Field::Text(g.bracket.lower_provenance.as_str().into()))
                .push("upper", Field::Exact(g.bracket.upper.clone()))
                .push("upper_provenance", Field::Text(g.bracket.upper_provenance.as_str().into()))
                .push("witness", Field::Vector(g.witness.w.coords().to_vec()))
                .push("witness_value", Field::Exact(g.witness.value.clone()))
                .push("witness_minimizer", coloring_field(&g.witness.minimizer))
                .push("distinct_images", Field::Count(g.distinct_images as u64));
            Ok(r)
        }
        Command::Gen(GenCmd::Nae { cnf, out }) => {
            let mut r = RunReport::new(echo, "monotone-nae3sat-incidence");
            let bytes = read_bytes(cnf)?;
            r.digest(&bytes);
            let text = String::from_utf8(bytes)
                .map_err(|_| Error::Input(format!("{} is not UTF-8", cnf.display())))?;
            let c = MonotoneCnf::parse(&text)?;
            let a = incidence_matrix(&c)?;
            let witness = nae_satisfiable(&c, limits)?;
            let probe = lindisc_at(&a, &Weight::constant(a.cols(), half())?, limits)?;
            let serialized = a.serialize();
            if let Some(path) = out {
                write_file(path, &serialized)?;
            }
            r.push("variables", Field::Count(c.num_vars() as u64))
                .push("clauses", Field::Count(c.clauses().len() as u64))
                .push("matrix", Field::Lines(serialized.lines().map(String::from).collect()))
                .push("nae_satisfiable", Field::Flag(witness.is_some()));
            if let Some(tau) = witness {
                r.push("nae_witness", coloring_field(&Coloring::new(tau)));
            }
            r.push("half_vector_value", Field::Exact(probe.value))
                .push("half_vector_minimizer", coloring_field(&probe.minimizer));
            Ok(r)
        }
        Command::Gen(GenCmd::Subsetsum { values, t, out }) => {
            let mut r = RunReport::new(echo, "subset-sum-probe");
            r.digest(format!("values={values}\nt={t}\n").as_bytes());
            let s = SubsetSumInstance::parse(values, t)?;
            let (a, w) = subset_sum_weight(&s)?;
            let probe = lindisc_at(&a, &w, limits)?;
            let serialized = a.serialize();
            if let Some(path) = out {
                write_file(path, &serialized)?;
            }
            let hit = probe.value == Rational::from_integer(0.into());
            r.push("target", Field::Exact(s.target()))
                .push("matrix", Field::Lines(serialized.lines().map(String::from).collect()))
                .push("w", Field::Vector(w.coords().to_vec()))
                .push("value", Field::Exact(probe.value))
                .push("minimizer", coloring_field(&probe.minimizer))
                .push("target_is_subset_sum", Field::Flag(hit));
            Ok(r)
        }
    }
}
