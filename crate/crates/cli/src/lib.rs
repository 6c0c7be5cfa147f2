//! Batch command-line surface for the `laced` crate.
//!
//! [`run`] parses an argument list, executes one subcommand and writes its
//! records to the given sinks. Exit codes: `0` success, `1` domain or usage
//! error, `2` verification failure (oracle disagreement or bound violation).

pub mod record;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use laced::brute::{Brute, DEFAULT_ENUMERATION_LIMIT};
use laced::counting::laced_weight_multiset;
use laced::modmath::is_prime;
use laced::sieve::{complement_lower_bound, cycle_index_identity_check, distinct_sum_lower_bound, enumerate_types, fourier_bias, is_smooth, type_count};
use laced::{asymptotic_table, avg_sensitivity_exact, eval_f, s_of, weight_exact, InputVector, LacedParams, ResidueMultiset};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

pub use record::{Format, OutputRecord, Scalar};

/// Seed used by randomized commands when `--seed` is absent.
pub const DEFAULT_SEED: u64 = 0;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "laced", version, about = "Exact weight, sensitivity and subset-sum counts for the laced Boolean function")]
struct Cli {
    /// Output format (default: csv for `table`, text otherwise).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write records to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// s(X) and f(X) for one input.
    Eval(EvalArgs),
    /// Weight of f.
    Weight(WeightArgs),
    /// Exact average sensitivity of f.
    Avgsens(AvgsensArgs),
    /// Fourier bias of a residue set.
    Bias(BiasArgs),
    /// Lower bounds on distinct-element subset-sum counts.
    Bound(BoundArgs),
    /// Randomized agreement trials between the sieve, the DP and enumeration.
    SieveVerify(SieveVerifyArgs),
    /// Cycle-index identity and class-size sums over S_k.
    Identity(IdentityArgs),
    /// Asymptotic sweep of weight and sensitivity ratios.
    Table(TableArgs),
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Number of variables; defaults to the length of --x.
    #[arg(long)]
    n: Option<usize>,
    /// Input bits, leftmost is x_1.
    #[arg(long)]
    x: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WeightMethod {
    Dp,
    Brute,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SensMethod {
    Exact,
    Brute,
}

#[derive(Debug, Args)]
struct WeightArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "dp")]
    method: WeightMethod,
    /// Largest n the brute method will enumerate.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
    limit: usize,
}

#[derive(Debug, Args)]
struct AvgsensArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "exact")]
    method: SensMethod,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
    limit: usize,
}

#[derive(Debug, Args)]
struct SetArgs {
    /// Prime modulus of an explicit set.
    #[arg(long)]
    p: Option<usize>,
    /// Explicit residues, comma separated.
    #[arg(long, value_delimiter = ',')]
    set: Option<Vec<i64>>,
    /// Use the laced weight set {k mod p : k in 1..=n} instead.
    #[arg(long, conflicts_with_all = ["set", "p"])]
    n: Option<usize>,
    /// Coordinates left out of the laced weight set.
    #[arg(long, value_delimiter = ',', requires = "n")]
    exclude: Vec<usize>,
}

impl SetArgs {
    fn resolve(&self) -> laced::Result<ResidueMultiset> {
        match (self.n, self.p, &self.set) {
            (Some(n), _, _) => {
                let params = LacedParams::new(n)?;
                laced_weight_multiset(&params, &self.exclude.iter().copied().collect())
            }
            (None, Some(p), Some(set)) => ResidueMultiset::reduced(p, set.iter().copied()),
            (None, Some(p), None) => ResidueMultiset::full(p),
            _ => Err(laced::Error::Invalid("give either --n or --p with an optional --set".into())),
        }
    }
}

fn render_set(d: &ResidueMultiset) -> String {
    d.elements().iter().map(|e| e.to_string()).collect::<Vec<_>>().join(";")
}

#[derive(Debug, Args)]
struct BiasArgs {
    #[command(flatten)]
    set: SetArgs,
    /// Ambient size for the smoothness ratio (default p).
    #[arg(long)]
    ambient: Option<usize>,
    /// Constant C in the smoothness test phi <= C * sqrt(|D| ln ambient).
    #[arg(long, default_value_t = 1.0)]
    smooth_constant: f64,
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[command(flatten)]
    set: SetArgs,
    /// Closed-form bound for Z_p with c residues removed (needs --p).
    #[arg(long, conflicts_with_all = ["set", "n"])]
    c: Option<usize>,
    /// Target residue; every residue when absent.
    #[arg(long)]
    b: Option<usize>,
    /// Number of summands.
    #[arg(long)]
    k: usize,
}

#[derive(Debug, Args)]
struct SieveVerifyArgs {
    /// Fixed prime; otherwise drawn from {5, 7, 11, 13} per trial.
    #[arg(long)]
    p: Option<usize>,
    /// Fixed set size; otherwise drawn from 1..=min(8, p).
    #[arg(long)]
    size: Option<usize>,
    /// Fixed number of summands; otherwise drawn from 1..=5.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug, Args)]
struct IdentityArgs {
    /// Single k; otherwise 1..=max-k.
    #[arg(long)]
    k: Option<usize>,
    /// Single q; otherwise 0..=max-q.
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, default_value_t = 12)]
    max_k: usize,
    #[arg(long, default_value_t = 10)]
    max_q: u64,
}

#[derive(Debug, Args)]
struct TableArgs {
    /// Values of n, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "16,32,64,128")]
    n: Vec<usize>,
}

/// Records plus the exit code they were produced under.
struct Outcome {
    records: Vec<OutputRecord>,
    code: i32,
    diagnostics: Vec<String>,
}

impl Outcome {
    fn ok(records: Vec<OutputRecord>) -> Self {
        Self { records, code: EXIT_OK, diagnostics: Vec::new() }
    }

    fn checked(records: Vec<OutputRecord>, passed: bool, failure: &str) -> Self {
        if passed {
            Self::ok(records)
        } else {
            Self { records, code: EXIT_VERIFY, diagnostics: vec![failure.to_owned()] }
        }
    }
}

/// Runs one invocation. `argv[0]` is the program name.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                EXIT_OK
            } else {
                let _ = write!(stderr, "{e}");
                EXIT_DOMAIN
            };
        }
    };
    let default_format = match cli.command {
        Command::Table(_) => Format::Csv,
        _ => Format::Text,
    };
    let format = cli.format.unwrap_or(default_format);
    let outcome = match dispatch(cli.command) {
        Ok(outcome) => outcome,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_DOMAIN;
        }
    };
    for d in &outcome.diagnostics {
        let _ = writeln!(stderr, "{d}");
    }
    let text = record::render(&outcome.records, format);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return EXIT_DOMAIN;
            }
        }
        None => {
            let _ = stdout.write_all(text.as_bytes());
        }
    }
    outcome.code
}

fn dispatch(command: Command) -> laced::Result<Outcome> {
    match command {
        Command::Eval(a) => eval(a),
        Command::Weight(a) => weight(a),
        Command::Avgsens(a) => avgsens(a),
        Command::Bias(a) => bias(a),
        Command::Bound(a) => bound(a),
        Command::SieveVerify(a) => verify::sieve_verify(a.p, a.size, a.k, a.trials, a.seed),
        Command::Identity(a) => identity(a),
        Command::Table(a) => Ok(table(a)),
    }
}

fn eval(a: EvalArgs) -> laced::Result<Outcome> {
    let x: InputVector = a.x.parse()?;
    let params = LacedParams::new(a.n.unwrap_or(x.len()))?;
    let s = s_of(&params, &x)?;
    let f = eval_f(&params, &x)?;
    let sensitivity = Brute::default().sensitivity_at(&params, &x)?;
    Ok(Outcome::ok(vec![OutputRecord::new("eval")
        .param("n", params.n())
        .param("x", x.to_string())
        .result("p", params.p())
        .result("s", s.value())
        .result("f", f as u32)
        .result("sensitivity", sensitivity)]))
}

fn ratio_f64(num: &BigInt, den: &BigInt) -> f64 {
    BigRational::new(num.clone(), den.clone()).to_f64().unwrap_or(f64::NAN)
}

fn weight(a: WeightArgs) -> laced::Result<Outcome> {
    let params = LacedParams::new(a.n)?;
    let (w, method) = match a.method {
        WeightMethod::Dp => (weight_exact(&params), "dp"),
        WeightMethod::Brute => (Brute::with_limit(a.limit)?.weight(&params)?, "brute"),
    };
    let ratio = ratio_f64(&BigInt::from(w.clone()), &(BigInt::from(1) << (a.n - 1)));
    Ok(Outcome::ok(vec![OutputRecord::new("weight")
        .param("n", a.n)
        .param("method", method)
        .result("p", params.p())
        .result("weight", w)
        .result("weight_ratio", ratio)]))
}

fn avgsens(a: AvgsensArgs) -> laced::Result<Outcome> {
    let params = LacedParams::new(a.n)?;
    let (report, method) = match a.method {
        SensMethod::Exact => (avg_sensitivity_exact(&params), "exact"),
        SensMethod::Brute => (Brute::with_limit(a.limit)?.avg_sensitivity(&params)?, "brute"),
    };
    let mut rec = OutputRecord::new("avgsens")
        .param("n", a.n)
        .param("method", method)
        .result("p", params.p())
        .result("total_flips", &report.total_flips)
        .result("average", &report.average)
        .result("average_float", report.average.to_f64().unwrap_or(f64::NAN))
        .result("sens_ratio", ratio_f64(report.average.numer(), &(report.average.denom() * BigInt::from(a.n))));
    if let Some(max) = report.maximum {
        rec = rec.result("maximum", max);
    }
    Ok(Outcome::ok(vec![rec]))
}

fn bias(a: BiasArgs) -> laced::Result<Outcome> {
    let d = a.set.resolve()?;
    let report = fourier_bias(&d);
    let ambient = a.ambient.unwrap_or(d.p());
    let mut rec = OutputRecord::new("bias")
        .param("p", d.p())
        .param("set", render_set(&d))
        .result("size", d.len())
        .result("phi", report.phi)
        .result("witness_t", report.witness.t());
    if !d.is_empty() {
        let smooth = is_smooth(&d, ambient, a.smooth_constant)?;
        rec = rec
            .result("ambient", ambient)
            .result("smooth", smooth.smooth)
            .result("smooth_ratio", smooth.ratio);
    }
    Ok(Outcome::ok(vec![rec]))
}

fn bound(a: BoundArgs) -> laced::Result<Outcome> {
    if let Some(c) = a.c {
        let p = a.set.p.ok_or_else(|| laced::Error::Invalid("--c needs --p".into()))?;
        if !is_prime(p) {
            return Err(laced::Error::NotPrime(p));
        }
        let value = complement_lower_bound(p, c, a.k)?;
        return Ok(Outcome::ok(vec![OutputRecord::new("bound")
            .param("kind", "complement")
            .param("p", p)
            .param("c", c)
            .param("k", a.k)
            .result("rhs_exact", &value)
            .result("rhs", value.to_f64().unwrap_or(f64::NAN))]));
    }
    let d = a.set.resolve()?;
    let residues: Vec<usize> = match a.b {
        Some(b) => vec![b],
        None => (0..d.p()).collect(),
    };
    let mut records = Vec::new();
    let mut all_hold = true;
    for b in residues {
        let r = distinct_sum_lower_bound(&d, b, a.k)?;
        all_hold &= r.holds;
        records.push(
            OutputRecord::new("bound")
                .param("kind", "bias")
                .param("p", d.p())
                .param("set", render_set(&d))
                .param("b", b)
                .param("k", a.k)
                .result("exact_over_kfact", &r.exact_over_kfact)
                .result("phi", r.phi)
                .result("rhs", r.rhs)
                .result("holds", r.holds)
                .result("k_below_p", r.k_below_p),
        );
    }
    Ok(Outcome::checked(records, all_hold, "verification failed: lower bound violated"))
}

fn identity(a: IdentityArgs) -> laced::Result<Outcome> {
    let ks: Vec<usize> = a.k.map_or_else(|| (1..=a.max_k).collect(), |k| vec![k]);
    let qs: Vec<u64> = a.q.map_or_else(|| (0..=a.max_q).collect(), |q| vec![q]);
    let mut records = Vec::new();
    let mut passed = true;
    for &k in &ks {
        let types = enumerate_types(k)?;
        let class_sum: num_bigint::BigUint = types.iter().map(type_count).sum();
        let k_fact = laced::modmath::factorial(k);
        passed &= class_sum == k_fact;
        for &q in &qs {
            let (lhs, rhs) = cycle_index_identity_check(k, q)?;
            let equal = lhs == rhs;
            passed &= equal;
            records.push(
                OutputRecord::new("identity")
                    .param("k", k)
                    .param("q", q)
                    .result("types", types.len())
                    .result("class_size_sum", &class_sum)
                    .result("k_factorial", &k_fact)
                    .result("lhs", lhs)
                    .result("rhs", rhs)
                    .result("equal", equal),
            );
        }
    }
    Ok(Outcome::checked(records, passed, "verification failed: identity mismatch"))
}

fn table(a: TableArgs) -> Outcome {
    let mut records = Vec::new();
    let mut diagnostics = Vec::new();
    for (n, row) in a.n.iter().zip(asymptotic_table(&a.n)) {
        match row {
            Ok(row) => records.push(
                OutputRecord::new("table")
                    .result("n", row.n)
                    .result("p", row.p)
                    .result("weight", &row.weight)
                    .result("weight_ratio", row.weight_ratio)
                    .result("sens_total_flips", &row.sens_total)
                    .result("sens_avg", row.sens_avg.to_f64().unwrap_or(f64::NAN))
                    .result("sens_ratio", row.sens_ratio),
            ),
            Err(e) => diagnostics.push(format!("error: n = {n}: {e}")),
        }
    }
    let code = if diagnostics.is_empty() { EXIT_OK } else { EXIT_DOMAIN };
    Outcome { records, code, diagnostics }
}

/// Convenience for tests: run and capture both streams.
pub fn run_captured<I, T>(argv: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).expect("utf-8"), String::from_utf8(err).expect("utf-8"))
}

