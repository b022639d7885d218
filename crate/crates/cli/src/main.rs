use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use jsrlab::alphastar::{alpha_star_with, tau, DEFAULT_MAX_DIGITS};
use jsrlab::arith::{parse_decimal, Fraction, PrecisionPolicy, RealBall, TargetRad};
use jsrlab::jsr::{bounds_table, WordStats, MAX_DEPTH};
use jsrlab::mat::{
    commutator_k, log_euclidean_norm_with, log_spectral_radius_with, rho_norm_chain_check,
    word_product,
};
use jsrlab::scurve::{fraction_grid, rcurve_table_with, s_of_with, scurve_table_with};
use jsrlab::verify::{run_suite, SUITES};
use jsrlab::words::{
    enumerate_x, fibonacci_word, find_suboptimal_triple, is_balanced, is_power_balanced,
    mechanical_periodic, FiniteWord,
};
use jsrlab::Error;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "jsrlab", version, about = "Certified computations for products of the matrices [[1,1],[0,1]] and [[1,0],[1,1]]")]
struct Cli {
    /// Starting working precision in bits.
    #[arg(long, global = true, env = "JSRLAB_PRECISION", default_value_t = 128)]
    precision: u32,
    /// Precision ceiling in bits.
    #[arg(long, global = true, default_value_t = 8192)]
    max_precision: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized verification suites.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certified decimal digits of alpha*.
    Alphastar {
        #[arg(long)]
        digits: usize,
        /// Emit the JSON certificate.
        #[arg(long)]
        json: bool,
    },
    /// The sequence tau_0..tau_N.
    Tau { n: usize },
    /// Enclosure of S(p/q).
    SEval { p: u64, q: u64 },
    /// S over all Farey fractions of order Q.
    SCurve {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximiser of S(gamma) + gamma ln(alpha) along a grid of alpha.
    RCurve {
        /// `start:stop:count`, endpoints as decimals or fractions.
        #[arg(long)]
        grid: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower and upper bounds for ln rho(alpha), per word length.
    JsrBounds {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        balanced_only: bool,
    },
    /// Word utilities.
    Word {
        #[command(subcommand)]
        action: WordAction,
    },
    /// Run invariant suites.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
    },
}

#[derive(Subcommand, Debug)]
enum WordAction {
    /// Whether equal-length factors differ by at most one in ones count.
    Balanced { word: String },
    /// Whether the periodic extension is balanced.
    PowerBalanced { word: String },
    /// Matrix product, trace and determinant.
    Product { word: String },
    /// k with product(reverse) - product = k diag(1,-1).
    Commutator { word: String },
    /// A witness (a, w, b) of unbalancedness.
    Triple { word: String },
    /// Least rotation.
    Canonical { word: String },
    /// Lower mechanical word of slope p/q.
    Mechanical {
        p: u64,
        q: u64,
        #[arg(default_value_t = 0)]
        shift: u64,
    },
    /// The n-th Fibonacci word.
    Fibonacci { n: usize },
    /// Periods of the balanced words with ones ratio p/q.
    EnumerateX { p: u64, q: u64 },
    /// Enclosures of ln rho and ln of the spectral norm.
    Spectral { word: String },
    /// Integer spectral-radius/norm inequality check.
    Chain { word: String, n: usize },
}

#[derive(Clone, Debug)]
struct RunConfig {
    precision_bits: u32,
    max_precision_bits: u32,
    output_format: Format,
    threads: usize,
    seed: u64,
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Result<Self, Error> {
        let threads = match cli.threads {
            Some(0) => return Err(Error::Parameter("--threads must be at least 1".into())),
            Some(t) => t,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        if cli.precision < 32 {
            return Err(Error::Parameter("--precision must be at least 32".into()));
        }
        if cli.precision > cli.max_precision {
            return Err(Error::Parameter(format!(
                "--precision {} exceeds --max-precision {}",
                cli.precision, cli.max_precision
            )));
        }
        Ok(RunConfig {
            precision_bits: cli.precision,
            max_precision_bits: cli.max_precision,
            output_format: cli.format,
            threads,
            seed: cli.seed,
        })
    }

    fn policy(&self) -> Result<PrecisionPolicy, Error> {
        PrecisionPolicy::new(self.precision_bits, self.max_precision_bits)
    }

    fn target(&self) -> TargetRad {
        TargetRad::bits(self.precision_bits - 16)
    }

    /// Decimal places that the target radius supports.
    fn digits(&self) -> usize {
        (self.target().bits as usize * 3) / 10
    }
}

enum Failure {
    Usage(String),
    Precision(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PrecisionExhausted { .. } | Error::Indeterminate { .. } => {
                Failure::Precision(e.to_string())
            }
            Error::Internal(_) => Failure::Other(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = RunConfig::from_cli(&cli)
        .map_err(Failure::from)
        .and_then(|cfg| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.threads)
                .build_global()
                .map_err(|e| Failure::Other(e.to_string()))?;
            run(&cfg, cli.command)
        });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Precision(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn run(cfg: &RunConfig, command: Command) -> CmdResult {
    match command {
        Command::Alphastar { digits, json } => cmd_alphastar(cfg, digits, json),
        Command::Tau { n } => cmd_tau(cfg, n),
        Command::SEval { p, q } => cmd_s_eval(cfg, p, q),
        Command::SCurve { q, out } => cmd_s_curve(cfg, q, out),
        Command::RCurve { grid, q, out } => cmd_r_curve(cfg, &grid, q, out),
        Command::JsrBounds {
            alpha,
            n_max,
            balanced_only,
        } => cmd_jsr(cfg, &alpha, n_max, balanced_only),
        Command::Word { action } => cmd_word(cfg, action),
        Command::Verify { suite } => cmd_verify(cfg, &suite),
    }
}

fn stdout() -> io::StdoutLock<'static> {
    io::stdout().lock()
}

fn sink(out: Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn emit_json(v: &Value) -> CmdResult {
    let mut o = stdout();
    writeln!(o, "{}", serde_json::to_string_pretty(v).map_err(|e| Failure::Other(e.to_string()))?)?;
    Ok(())
}

fn ball_json(b: &RealBall, digits: usize) -> Value {
    let (mid, rad) = b.to_decimal_parts(digits);
    json!({ "mid": mid, "rad": rad })
}

fn fraction_json(r: &Fraction) -> Value {
    json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

/// Parses `p/q`, an integer, or a decimal literal.
fn parse_fraction(s: &str) -> Result<Fraction, Error> {
    let t = s.trim();
    if t.contains('/') {
        let r = Fraction::from_str(t).map_err(|_| Error::Parameter(format!("not a fraction: {s:?}")))?;
        return Ok(r);
    }
    parse_decimal(t)
}

fn parse_word(s: &str) -> Result<FiniteWord, Error> {
    FiniteWord::from_str(s)
}

fn cmd_alphastar(cfg: &RunConfig, digits: usize, json_flag: bool) -> CmdResult {
    let cert = alpha_star_with(digits, DEFAULT_MAX_DIGITS, &cfg.policy()?)?;
    if json_flag || cfg.output_format == Format::Json {
        let factors: Vec<Value> = cert
            .value
            .factors()
            .iter()
            .map(|(base, exp)| json!({ "base": base.to_string(), "exp": exp }))
            .collect();
        return emit_json(&json!({
            "digits": cert.digits,
            "requested": cert.requested,
            "value": { "factors": factors },
            "n_used": cert.n_used,
            "error_exponent": cert.error_exponent,
        }));
    }
    let mut o = stdout();
    match cfg.output_format {
        Format::Csv => {
            writeln!(o, "digits,value,n_used,error_exponent")?;
            writeln!(o, "{},{},{},{}", cert.requested, cert.digits, cert.n_used, cert.error_exponent)?;
        }
        _ => writeln!(o, "{}", cert.digits)?,
    }
    Ok(())
}

fn cmd_tau(cfg: &RunConfig, n: usize) -> CmdResult {
    let seq = tau(n);
    match cfg.output_format {
        Format::Json => emit_json(&Value::Array(
            seq.values().iter().map(|t| Value::String(t.to_string())).collect(),
        )),
        Format::Csv => {
            let mut o = stdout();
            writeln!(o, "n,tau")?;
            for (i, t) in seq.values().iter().enumerate() {
                writeln!(o, "{i},{t}")?;
            }
            Ok(())
        }
        Format::Text => {
            let mut o = stdout();
            for t in seq.values() {
                writeln!(o, "{t}")?;
            }
            Ok(())
        }
    }
}

fn cmd_s_eval(cfg: &RunConfig, p: u64, q: u64) -> CmdResult {
    let pt = s_of_with(p, q, cfg.target(), &cfg.policy()?)?;
    let digits = cfg.digits();
    let (mid, rad) = pt.value.to_decimal_parts(digits);
    let mut o = stdout();
    match cfg.output_format {
        Format::Json => {
            drop(o);
            return emit_json(&json!({
                "gamma": fraction_json(&pt.gamma),
                "trace": pt.trace.to_string(),
                "s": ball_json(&pt.value, digits),
            }));
        }
        Format::Csv => {
            writeln!(o, "gamma_num,gamma_den,s_mid,s_rad")?;
            writeln!(o, "{},{},{mid},{rad}", pt.gamma.numer(), pt.gamma.denom())?;
        }
        Format::Text => writeln!(o, "{mid} +/- {rad}")?,
    }
    Ok(())
}

fn cmd_s_curve(cfg: &RunConfig, q: u64, out: Option<PathBuf>) -> CmdResult {
    if q == 0 {
        return Err(Failure::Usage("--q must be at least 1".into()));
    }
    let rows = scurve_table_with(q, cfg.target(), &cfg.policy()?)?;
    let digits = cfg.digits();
    let mut w = sink(out)?;
    if cfg.output_format == Format::Json {
        let arr: Vec<Value> = rows
            .iter()
            .map(|r| json!({ "gamma": fraction_json(&r.gamma), "s": ball_json(&r.value, digits) }))
            .collect();
        writeln!(w, "{}", Value::Array(arr))?;
    } else {
        writeln!(w, "gamma_num,gamma_den,s_mid,s_rad")?;
        for r in &rows {
            let (mid, rad) = r.value.to_decimal_parts(digits);
            writeln!(w, "{},{},{mid},{rad}", r.gamma.numer(), r.gamma.denom())?;
        }
    }
    w.flush()?;
    Ok(())
}

fn parse_grid(spec: &str) -> Result<Vec<Fraction>, Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, count] = parts.as_slice() else {
        return Err(Error::Parameter(format!("grid must be start:stop:count, got {spec:?}")));
    };
    let start = parse_fraction(start)?;
    let stop = parse_fraction(stop)?;
    let count: usize = count
        .trim()
        .parse()
        .map_err(|_| Error::Parameter(format!("bad grid count {count:?}")))?;
    if start > stop {
        return Err(Error::Parameter("grid start exceeds stop".into()));
    }
    fraction_grid(&start, &stop, count)
}

fn cmd_r_curve(cfg: &RunConfig, grid: &str, q: u64, out: Option<PathBuf>) -> CmdResult {
    let alphas = parse_grid(grid)?;
    let rows = rcurve_table_with(&alphas, q, cfg.target(), &cfg.policy()?)?;
    let mut w = sink(out)?;
    if cfg.output_format == Format::Json {
        let arr: Vec<Value> = alphas
            .iter()
            .zip(&rows)
            .map(|(a, r)| {
                json!({
                    "alpha": fraction_json(a),
                    "r": fraction_json(&r.best),
                    "bracket": [fraction_json(&r.bracket.0), fraction_json(&r.bracket.1)],
                })
            })
            .collect();
        writeln!(w, "{}", Value::Array(arr))?;
    } else {
        writeln!(w, "alpha_num,alpha_den,r_num,r_den,bracket_lo,bracket_hi")?;
        for (a, r) in alphas.iter().zip(&rows) {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                a.numer(),
                a.denom(),
                r.best.numer(),
                r.best.denom(),
                r.bracket.0,
                r.bracket.1
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_jsr(cfg: &RunConfig, alpha: &str, n_max: usize, balanced_only: bool) -> CmdResult {
    let a = parse_fraction(alpha)?;
    if a < Fraction::from_integer(BigInt::from(0)) || a > Fraction::from_integer(BigInt::from(1)) {
        return Err(Failure::Usage(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    if n_max == 0 || n_max > MAX_DEPTH {
        return Err(Failure::Usage(format!("--n-max must lie in 1..={MAX_DEPTH}")));
    }
    let prec = cfg.max_precision_bits;
    let ball = RealBall::from_fraction(&a, prec);
    let stats = WordStats::compute(n_max, balanced_only)?;
    let rows = bounds_table(&stats, &ball, cfg.target(), &cfg.policy()?)?;
    let digits = cfg.digits();
    if cfg.output_format == Format::Json {
        let arr: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "n": r.n,
                    "lower": ball_json(&r.lower, digits),
                    "upper": ball_json(&r.upper, digits),
                    "witness": r.witness.to_string(),
                })
            })
            .collect();
        return emit_json(&Value::Array(arr));
    }
    let mut o = stdout();
    writeln!(o, "n,lower_mid,lower_rad,upper_mid,upper_rad,witness")?;
    for r in &rows {
        let (lm, lr) = r.lower.to_decimal_parts(digits);
        let (um, ur) = r.upper.to_decimal_parts(digits);
        writeln!(o, "{},{lm},{lr},{um},{ur},{}", r.n, r.witness)?;
    }
    Ok(())
}

fn print_value(cfg: &RunConfig, text: String, v: Value) -> CmdResult {
    if cfg.output_format == Format::Json {
        return emit_json(&v);
    }
    writeln!(stdout(), "{text}")?;
    Ok(())
}

fn print_words(cfg: &RunConfig, words: &[FiniteWord]) -> CmdResult {
    let strs: Vec<String> = words.iter().map(|w| w.to_string()).collect();
    print_value(cfg, strs.join("\n"), json!(strs))
}

fn cmd_word(cfg: &RunConfig, action: WordAction) -> CmdResult {
    match action {
        WordAction::Balanced { word } => {
            let b = is_balanced(&parse_word(&word)?);
            print_value(cfg, b.to_string(), json!(b))
        }
        WordAction::PowerBalanced { word } => {
            let b = is_power_balanced(&parse_word(&word)?)?;
            print_value(cfg, b.to_string(), json!(b))
        }
        WordAction::Product { word } => {
            let m = word_product(&parse_word(&word)?);
            let (a, b, c, d) = (&m.a, &m.b, &m.c, &m.d);
            print_value(
                cfg,
                format!("[[{a}, {b}], [{c}, {d}]]\ntrace {}\ndet {}", m.trace(), m.det()),
                json!({
                    "matrix": [[a.to_string(), b.to_string()], [c.to_string(), d.to_string()]],
                    "trace": m.trace().to_string(),
                    "det": m.det().to_string(),
                }),
            )
        }
        WordAction::Commutator { word } => {
            let k = commutator_k(&parse_word(&word)?)?;
            print_value(cfg, k.to_string(), json!(k.to_string()))
        }
        WordAction::Triple { word } => match find_suboptimal_triple(&parse_word(&word)?) {
            None => print_value(cfg, "none".into(), Value::Null),
            Some(t) => print_value(
                cfg,
                format!("{} {} {}", t.a(), t.w(), t.b()),
                json!({ "a": t.a().to_string(), "w": t.w().to_string(), "b": t.b().to_string() }),
            ),
        },
        WordAction::Canonical { word } => {
            let c = parse_word(&word)?.canonical_rotation();
            print_value(cfg, c.to_string(), json!(c.to_string()))
        }
        WordAction::Mechanical { p, q, shift } => {
            let w = mechanical_periodic(p, q, shift)?;
            print_value(cfg, w.to_string(), json!(w.to_string()))
        }
        WordAction::Fibonacci { n } => {
            let w = fibonacci_word(n)?;
            print_value(cfg, w.to_string(), json!(w.to_string()))
        }
        WordAction::EnumerateX { p, q } => print_words(cfg, &enumerate_x(p, q)?),
        WordAction::Spectral { word } => {
            let u = parse_word(&word)?;
            let m = word_product(&u);
            let policy = cfg.policy()?;
            let rho = log_spectral_radius_with(&m, cfg.target(), &policy)?;
            let norm = log_euclidean_norm_with(&m, cfg.target(), &policy)?;
            let digits = cfg.digits();
            let (rm, rr) = rho.to_decimal_parts(digits);
            let (nm, nr) = norm.to_decimal_parts(digits);
            print_value(
                cfg,
                format!("ln_rho {rm} +/- {rr}\nln_norm {nm} +/- {nr}"),
                json!({ "ln_rho": ball_json(&rho, digits), "ln_norm": ball_json(&norm, digits) }),
            )
        }
        WordAction::Chain { word, n } => {
            let ok = rho_norm_chain_check(&parse_word(&word)?, n)?;
            print_value(cfg, ok.to_string(), json!(ok))
        }
    }
}

fn cmd_verify(cfg: &RunConfig, suite: &str) -> CmdResult {
    if suite != "all" && !SUITES.contains(&suite) {
        return Err(Failure::Usage(format!(
            "unknown suite {suite:?}; expected one of all, {}",
            SUITES.join(", ")
        )));
    }
    let results = run_suite(suite, cfg.seed)?;
    let failed = results.iter().filter(|r| !r.passed).count();
    if cfg.output_format == Format::Json {
        let arr: Vec<Value> = results
            .iter()
            .map(|r| json!({ "suite": r.suite, "name": r.name, "passed": r.passed, "detail": r.detail }))
            .collect();
        emit_json(&Value::Array(arr))?;
    } else {
        let mut o = stdout();
        for r in &results {
            writeln!(o, "{r}")?;
        }
        writeln!(o, "{} checks, {failed} failed", results.len())?;
    }
    if failed > 0 {
        return Err(Failure::Other(format!("{failed} checks failed")));
    }
    Ok(())
}
