mod oeis;
mod verify;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use combs::bounds::{beta_root_convergence, supermultiplicativity_report, thm4_bounds, thm6_sandwich};
use combs::closed::{
    a231_321_uneven, a231_uneven, a312_uneven, a321_alpha_spine2, a321_beta, a_pair,
    a_pair_uneven, a_single_alpha, a_single_beta, Eval, Labeling, Method,
};
use combs::perm::{count_avoiding_extensions, PatternSet, Permutation};
use combs::poset::LabeledPoset;
use combs::series::thm1_gf;
use combs::Count;

const EXIT_OK: i32 = 0;
const EXIT_UNAVAILABLE: i32 = 2;
const EXIT_MISMATCH: i32 = 3;
const EXIT_USAGE: i32 = 64;

/// An error carrying the process exit code it should produce.
pub struct AppError {
    pub code: i32,
    pub msg: String,
}

impl AppError {
    pub fn usage(msg: impl Into<String>) -> Self {
        AppError { code: EXIT_USAGE, msg: msg.into() }
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        AppError { code: 1, msg: msg.into() }
    }
}

impl From<combs::Error> for AppError {
    fn from(e: combs::Error) -> Self {
        AppError::usage(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "combs", version, about = "Count pattern-avoiding linear extensions of combs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count extensions of one comb avoiding the given patterns
    Count(CountArgs),
    /// Sweep the closed forms against the brute-force oracle
    Verify(VerifyArgs),
    /// Reproduce a published table of values
    Table(TableArgs),
    /// Compare an OEIS b-file snapshot against the computed sequence
    OeisCheck(OeisArgs),
    /// Print coefficients of the Catalan-composition generating function
    Gf(GfArgs),
    /// Evaluate growth-rate bounds and their supporting inequalities
    Bounds(BoundsArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Oracle,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct CountArgs {
    /// Spine-major labeling (label(i,j) = (j-1)s + i)
    #[arg(long, conflicts_with = "beta")]
    alpha: bool,
    /// Tooth-major labeling (label(i,j) = (i-1)t + j)
    #[arg(long)]
    beta: bool,
    /// Comma-separated patterns to avoid, e.g. "321" or "231,312"
    #[arg(long)]
    patterns: String,
    /// Spine length
    #[arg(long)]
    s: u32,
    /// Tooth length
    #[arg(long, conflicts_with = "n")]
    t: Option<u32>,
    /// Total size of an uneven comb (alpha labeling only)
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// key=value file overriding brute_cap / series_order
    #[arg(long)]
    config: Option<PathBuf>,
    /// Include wall-clock timings in the output (non-deterministic)
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// all, y1, y2, y3, thm1, thm2, thm3, thm5, thm7, corollary
    #[arg(long, default_value = "all")]
    scope: String,
    /// Largest comb size st (and uneven size n) to sweep
    #[arg(long, default_value_t = 12)]
    max: u32,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    /// table1, alpha321-spine2, conjecture2
    name: String,
}

#[derive(Args)]
struct OeisArgs {
    /// A275941 (spine 3) or A275942 (spine 4)
    #[arg(long)]
    sequence: String,
    /// Read the b-file from this path instead of the committed snapshot
    #[arg(long)]
    file: Option<PathBuf>,
    /// Download the b-file (base URL from OEIS_BASE_URL, default https://oeis.org)
    #[arg(long, conflicts_with = "file")]
    fetch: bool,
}

#[derive(Args)]
struct GfArgs {
    /// Power of the shifted Catalan factor
    #[arg(long, default_value_t = 0)]
    h: u32,
    /// Truncation order (defaults from config, else 16)
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    /// Spine growth-rate bounds at fixed tooth length
    #[arg(long)]
    thm4: bool,
    /// Supermultiplicativity + root-boundedness report
    #[arg(long)]
    fekete: bool,
    /// Tooth growth-rate sandwich at fixed spine length
    #[arg(long)]
    thm6: bool,
    /// Monitored convergence of t-th roots toward 2^s
    #[arg(long)]
    convergence: bool,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long, default_value_t = 13)]
    max_s: u32,
    #[arg(long, default_value_t = 12)]
    max_t: u32,
}

/// Defaults that a key=value config file may override.
pub struct Config {
    pub brute_cap: usize,
    pub series_order: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { brute_cap: 16, series_order: 16 }
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<Config, AppError> {
    let mut cfg = Config::default();
    let Some(path) = path else { return Ok(cfg) };
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::runtime(format!("cannot read {}: {e}", path.display())))?;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(AppError::runtime(format!(
                "{}:{}: expected key=value",
                path.display(),
                lineno + 1
            )));
        };
        let parse = |v: &str| {
            v.trim().parse::<usize>().map_err(|e| {
                AppError::runtime(format!("{}:{}: {e}", path.display(), lineno + 1))
            })
        };
        match key.trim() {
            "brute_cap" => cfg.brute_cap = parse(value)?,
            "series_order" => cfg.series_order = parse(value)?,
            other => {
                return Err(AppError::runtime(format!(
                    "{}:{}: unknown key {other:?}",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    Ok(cfg)
}

/// Format a float to six significant digits, deterministically.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (5 - mag).clamp(0, 17) as usize;
    format!("{x:.decimals$}")
}

fn parse_patterns(spec: &str) -> Result<Vec<Permutation>, AppError> {
    let pats: Result<Vec<Permutation>, _> =
        spec.split(',').map(|p| Permutation::parse(p.trim())).collect();
    let pats = pats.map_err(|e| AppError::usage(format!("bad pattern list {spec:?}: {e}")))?;
    if pats.is_empty() {
        return Err(AppError::usage("at least one pattern is required"));
    }
    Ok(pats)
}

fn oracle_count(poset: &LabeledPoset, patterns: &[Permutation], cap: usize) -> Result<Eval, AppError> {
    if poset.n() as usize > cap {
        return Ok(Eval::Unavailable);
    }
    let pats = PatternSet::new(patterns.to_vec()).map_err(|e| AppError::usage(e.to_string()))?;
    let value = count_avoiding_extensions(poset, &pats, cap)
        .map_err(|e| AppError::runtime(e.to_string()))?;
    Ok(Eval::Value { value, method: Method::Oracle })
}

fn pat_digits(p: &Permutation) -> Option<[u32; 3]> {
    let e = p.entries();
    (e.len() == 3).then(|| [e[0], e[1], e[2]])
}

fn dispatch_uneven(patterns: &[Permutation], s: u32, n: u32, cap: usize) -> Result<Eval, AppError> {
    let known = match patterns {
        [p] => match pat_digits(p) {
            Some([2, 3, 1]) => {
                Some(Eval::Value { value: a231_uneven(s, n)?, method: Method::Recurrence })
            }
            Some([3, 1, 2]) => {
                Some(Eval::Value { value: a312_uneven(s, n)?, method: Method::Recurrence })
            }
            _ => None,
        },
        [p, q] => match a_pair_uneven(p, q, s, n)? {
            Eval::Unavailable => None,
            v => Some(v),
        },
        _ => None,
    };
    if let Some(eval) = known {
        return Ok(eval);
    }
    oracle_count(&LabeledPoset::uneven_alpha(s, n)?, patterns, cap)
}

fn cmd_count(args: &CountArgs) -> Result<i32, AppError> {
    let cfg = load_config(&args.config)?;
    let labeling = match (args.alpha, args.beta) {
        (true, false) => Labeling::Alpha,
        (false, true) => Labeling::Beta,
        _ => return Err(AppError::usage("exactly one of --alpha / --beta is required")),
    };
    let patterns = parse_patterns(&args.patterns)?;
    let (t_or_n, uneven) = match (args.t, args.n) {
        (Some(t), None) => (t, false),
        (None, Some(n)) => {
            if labeling != Labeling::Alpha {
                return Err(AppError::usage("uneven combs (--n) only exist for --alpha"));
            }
            (n, true)
        }
        _ => return Err(AppError::usage("exactly one of --t / --n is required")),
    };
    let s = args.s;
    let started = Instant::now();
    let eval = if args.method == MethodArg::Oracle {
        let poset = if uneven {
            LabeledPoset::uneven_alpha(s, t_or_n)?
        } else {
            match labeling {
                Labeling::Alpha => LabeledPoset::comb_alpha(s, t_or_n)?,
                Labeling::Beta => LabeledPoset::comb_beta(s, t_or_n)?,
            }
        };
        oracle_count(&poset, &patterns, cfg.brute_cap)?
    } else if uneven {
        dispatch_uneven(&patterns, s, t_or_n, cfg.brute_cap)?
    } else {
        match (labeling, patterns.as_slice()) {
            (Labeling::Alpha, [p]) => a_single_alpha(p, s, t_or_n, cfg.brute_cap)?,
            (Labeling::Beta, [p]) => a_single_beta(p, s, t_or_n, cfg.brute_cap)?,
            (l, [p, q]) => a_pair(l, p, q, s, t_or_n, cfg.brute_cap)?,
            (Labeling::Alpha, ps) => {
                oracle_count(&LabeledPoset::comb_alpha(s, t_or_n)?, ps, cfg.brute_cap)?
            }
            (Labeling::Beta, ps) => {
                oracle_count(&LabeledPoset::comb_beta(s, t_or_n)?, ps, cfg.brute_cap)?
            }
        }
    };
    let elapsed_ms = started.elapsed().as_millis();
    let Eval::Value { value, method } = eval else {
        eprintln!("no closed form applies and the comb exceeds the brute-force cap ({})", cfg.brute_cap);
        return Ok(EXIT_UNAVAILABLE);
    };

    let pattern_names: Vec<String> =
        patterns.iter().map(|p| p.entries().iter().map(|e| e.to_string()).collect()).collect();
    match args.format {
        FormatArg::Csv => {
            let pats = pattern_names.join(",");
            let pats = if pattern_names.len() > 1 { format!("\"{pats}\"") } else { pats };
            let elapsed = if args.timings { elapsed_ms.to_string() } else { String::new() };
            println!("labeling,patterns,s,t_or_n,value,method,elapsed_ms");
            println!("{labeling},{pats},{s},{t_or_n},{value},{method},{elapsed}");
        }
        FormatArg::Json => {
            let row = json!({
                "labeling": labeling.to_string(),
                "patterns": pattern_names,
                "s": s,
                "t_or_n": t_or_n,
                "value": value.to_string(),
                "method": method.to_string(),
                "elapsed_ms": if args.timings { Some(elapsed_ms as u64) } else { None },
            });
            println!("{row}");
        }
    }
    Ok(EXIT_OK)
}

fn cmd_table(args: &TableArgs) -> Result<i32, AppError> {
    let mut out = String::new();
    match args.name.as_str() {
        "table1" => {
            writeln!(out, "s,t,value").unwrap();
            let rows: [(u32, u32); 8] =
                [(2, 7), (3, 7), (4, 7), (5, 7), (6, 7), (7, 5), (8, 3), (9, 3)];
            for (s, t_max) in rows {
                for t in 2..=t_max {
                    writeln!(out, "{s},{t},{}", a321_beta(s, t)?).unwrap();
                }
            }
        }
        "alpha321-spine2" => {
            writeln!(out, "s,value").unwrap();
            for s in 1..=13u32 {
                writeln!(out, "{s},{}", a321_alpha_spine2(s)?).unwrap();
            }
        }
        "conjecture2" => {
            writeln!(out, "s,value").unwrap();
            for s in 1..=16u32 {
                writeln!(out, "{s},{}", a231_321_uneven(s, 2 * s)?).unwrap();
            }
        }
        other => return Err(AppError::usage(format!("unknown table {other:?}"))),
    }
    print!("{out}");
    Ok(EXIT_OK)
}

fn cmd_gf(args: &GfArgs) -> Result<i32, AppError> {
    let cfg = load_config(&args.config)?;
    let order = args.order.unwrap_or(cfg.series_order);
    let gf = thm1_gf(args.h, order).map_err(|e| AppError::usage(e.to_string()))?;
    for k in 0..=order {
        let c = gf.coeff_count(k).map_err(|e| AppError::runtime(e.to_string()))?;
        println!("{k} {c}");
    }
    Ok(EXIT_OK)
}

fn cmd_bounds(args: &BoundsArgs) -> Result<i32, AppError> {
    let picked =
        [args.thm4, args.fekete, args.thm6, args.convergence].iter().filter(|&&f| f).count();
    if picked != 1 {
        return Err(AppError::usage(
            "pick exactly one of --thm4 / --fekete / --thm6 / --convergence",
        ));
    }
    if args.thm4 {
        let t = args.t.ok_or_else(|| AppError::usage("--thm4 needs --t"))?;
        let (lower, upper) = thm4_bounds(t)?;
        println!("lower {}", sig6(lower));
        println!("upper {}", sig6(upper));
    } else if args.fekete {
        let t = args.t.ok_or_else(|| AppError::usage("--fekete needs --t"))?;
        if t != 2 {
            return Err(AppError::usage(
                "the spine sequence is only computable in closed form at --t 2",
            ));
        }
        let values: Result<Vec<Count>, _> = (1..=args.max_s).map(a321_alpha_spine2).collect();
        let report = supermultiplicativity_report(&values?, t)?;
        let ok = report.violations.is_empty();
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
        return Ok(if ok { EXIT_OK } else { EXIT_MISMATCH });
    } else if args.thm6 {
        let (s, t) = match (args.s, args.t) {
            (Some(s), Some(t)) => (s, t),
            _ => return Err(AppError::usage("--thm6 needs --s and --t")),
        };
        let (lower, upper) = thm6_sandwich(s, t)?;
        println!("lower {}", sig6(lower));
        println!("upper {}", sig6(upper));
    } else {
        let s = args.s.ok_or_else(|| AppError::usage("--convergence needs --s"))?;
        let report = beta_root_convergence(s, args.max_t)?;
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    }
    Ok(EXIT_OK)
}

fn real_main() -> Result<i32, AppError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return Ok(code);
        }
    };
    match &cli.command {
        Command::Count(args) => cmd_count(args),
        Command::Verify(args) => verify::run(args.scope.as_str(), args.max, &args.config),
        Command::Table(args) => cmd_table(args),
        Command::OeisCheck(args) => oeis::run(args),
        Command::Gf(args) => cmd_gf(args),
        Command::Bounds(args) => cmd_bounds(args),
    }
}

fn main() {
    match real_main() {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {}", e.msg);
            std::process::exit(e.code);
        }
    }
}
