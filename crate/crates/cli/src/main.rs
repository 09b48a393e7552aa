use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand};
use cyclic_covers::charsum::{chi_at_point, fibers, points};
use cyclic_covers::coverparam::{
    count_tuples, enumerate_tuples, genus_of, make_regime, twisted_model, CoverParams,
    LabelingRule, Regime, Tuple,
};
use cyclic_covers::ensemble::{exhaustive_distribution, monte_carlo_distribution, RegimeEcho};
use cyclic_covers::gf::CharClass;
use cyclic_covers::lseries::{g_series, l_polynomial, root_magnitudes, CharW};
use cyclic_covers::verify::verify;
use cyclic_covers::Error;

#[derive(Parser)]
#[command(name = "cyclic-covers", version)]
#[command(about = "Point counts on l-cyclic covers of P^1 over F_q with q not 0, 1 mod l")]
struct Cli {
    /// Worker threads (default: available parallelism). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RegimeArgs {
    /// Size of the base field
    #[arg(long)]
    q: u32,
    /// Prime degree of the covers
    #[arg(long)]
    ell: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Regime data: n_q, field moduli, admissible genera
    Info {
        #[command(flatten)]
        regime: RegimeArgs,
    },
    /// List the parameter tuples of total degree D
    Enumerate {
        #[command(flatten)]
        regime: RegimeArgs,
        #[arg(long = "D")]
        d: u64,
        /// Print only the number of tuples
        #[arg(long)]
        count_only: bool,
    },
    /// Per-fiber point count of one cover
    CountPoints {
        #[command(flatten)]
        regime: RegimeArgs,
        /// Slot polynomials "f1;...;f_{l-1}", each a comma-separated literal list
        #[arg(long)]
        tuple: String,
        /// Twist, a literal of F_Q
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = LabelingRule::Least)]
        labeling: LabelingRule,
    },
    /// L-polynomial of a character chi_w
    Lseries {
        #[command(flatten)]
        regime: RegimeArgs,
        /// Distinct points of F_q, e.g. "0,1"
        #[arg(long)]
        points: String,
        /// Exponents in 0..l, one per point
        #[arg(long)]
        w: String,
        /// Also print the Euler product G_w up to u^D
        #[arg(long)]
        trunc: Option<usize>,
    },
    /// Point-count distribution over a genus stratum
    #[command(group(ArgGroup::new("mode").required(true).args(["exhaustive", "samples"])))]
    Ensemble {
        #[command(flatten)]
        regime: RegimeArgs,
        #[arg(long)]
        g: u64,
        /// Visit every cover of the stratum
        #[arg(long)]
        exhaustive: bool,
        /// Number of uniform draws
        #[arg(long, requires = "seed")]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = LabelingRule::Least)]
        labeling: LabelingRule,
        /// Record wall time in runtime_ms (breaks byte-identical reports)
        #[arg(long)]
        timing: bool,
    },
    /// Invariant sweep over all strata up to a degree bound
    Verify {
        #[command(flatten)]
        regime: RegimeArgs,
        #[arg(long = "max-D")]
        max_d: u64,
    },
}

enum Failure {
    Domain(Error),
    Usage(String),
    Io(io::Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Parse(msg) => Failure::Usage(msg),
            e => Failure::Domain(e),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Io(e)
    }
}

type Outcome = Result<(), Failure>;

fn regime_of(args: &RegimeArgs) -> Result<Regime, Failure> {
    Ok(make_regime(args.q, args.ell)?)
}

fn lits(v: &[u32]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn header(out: &mut impl Write, regime: &Regime) -> io::Result<()> {
    let echo = RegimeEcho::of(regime);
    writeln!(
        out,
        "q = {}, ell = {}, n_q = {}, Q = {}, p = {}, k = {}",
        echo.q,
        echo.ell,
        echo.n_q,
        regime.big_q(),
        echo.p,
        echo.k
    )?;
    writeln!(out, "modulus F_q: {}", lits(&echo.modulus.base))?;
    writeln!(out, "modulus F_Q: {}", lits(&echo.modulus.ext))
}

fn class_str(c: CharClass) -> String {
    match c {
        CharClass::Zero => "0".into(),
        CharClass::Exp(e) => format!("zeta^{e}"),
    }
}

fn info(out: &mut impl Write, regime: &Regime) -> Outcome {
    header(out, regime)?;
    let (l, n) = (regime.ell() as u64, regime.n_q() as u64);
    // g = ((l-1) D - 2l + 2)/2 over D = n, 2n, ...
    let first = ((l - 1) * n + 2 - 2 * l) as i64 / 2;
    let step = (l - 1) * n / 2;
    writeln!(
        out,
        "admissible genera: g = {first} + {step}m (D = {n}(m + 1), m >= 0), g >= 0"
    )?;
    let gs: Vec<String> = (0..)
        .map(|m| first + (step * m) as i64)
        .filter(|&g| g >= 0)
        .take(8)
        .map(|g| g.to_string())
        .collect();
    writeln!(out, "first genera: {}", gs.join(", "))?;
    Ok(())
}

fn enumerate(out: &mut impl Write, regime: &Regime, d: u64, count_only: bool) -> Outcome {
    let n = regime.n_q() as u64;
    if d % n != 0 {
        return Err(Error::EmptyStratum(format!("D = {d} is not divisible by n_q = {n}")).into());
    }
    header(out, regime)?;
    writeln!(out, "D = {d}")?;
    writeln!(out, "count = {}", count_tuples(regime, d))?;
    if !count_only {
        for t in enumerate_tuples(regime, d)? {
            writeln!(out, "{t}")?;
        }
    }
    Ok(())
}

fn count_points(
    out: &mut impl Write,
    regime: &Regime,
    tuple: &str,
    b: &str,
    rule: LabelingRule,
) -> Outcome {
    let tuple = Tuple::parse(regime, tuple)?;
    let b = regime.ext().parse_elem(b)?;
    let params = CoverParams::new(regime, tuple, b)?;
    let model = twisted_model(regime, &params, rule)?;
    header(out, regime)?;
    writeln!(out, "labeling = {rule}")?;
    writeln!(out, "tuple = {}", params.tuple)?;
    writeln!(out, "b = {}", b.literal())?;
    writeln!(out, "D = {}, g = {}", params.degree(), genus_of(regime, &params)?)?;
    writeln!(out, "F_v0 = {}", model.f_v0)?;
    writeln!(out, "{:>6} {:>8} {:>4}", "x", "chi", "N_x")?;
    let mut total = 0;
    for (x, fc) in points(regime).into_iter().zip(fibers(regime, &model)?) {
        let chi = chi_at_point(regime, &model, x)?;
        writeln!(out, "{:>6} {:>8} {:>4}", x.to_string(), class_str(chi), fc.n_x)?;
        total += fc.n_x;
    }
    writeln!(out, "total = {total}")?;
    Ok(())
}

fn lseries(
    out: &mut impl Write,
    regime: &Regime,
    pts: &str,
    w: &str,
    trunc: Option<usize>,
) -> Outcome {
    let chi = CharW::parse(regime, pts, w)?;
    let l = l_polynomial(regime, &chi)?;
    header(out, regime)?;
    let pl: Vec<u32> = chi.points().iter().map(|p| p.literal()).collect();
    writeln!(out, "points = {}, w = {}", lits(&pl), lits(chi.w()))?;
    writeln!(out, "L coefficients (basis 1, zeta, ..., zeta^(l-2)):")?;
    let deg = l.degree().unwrap_or(0);
    for (i, (c, z)) in l.coeffs.iter().zip(l.to_complex()).enumerate().take(deg + 1) {
        writeln!(out, "  u^{i}: {c}  ~ {:.12} {:+.12}i", z.re, z.im)?;
    }
    let mags: Vec<String> = root_magnitudes(&l)?.iter().map(|m| format!("{m:.12}")).collect();
    writeln!(out, "root magnitudes: {}", mags.join(", "))?;
    if let Some(t) = trunc {
        let g = g_series(regime, &chi, t)?;
        writeln!(out, "G_w to u^{t}:")?;
        for (i, c) in g.coeffs.iter().enumerate() {
            writeln!(out, "  u^{i}: {c}")?;
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn ensemble(
    out: &mut impl Write,
    regime: &Regime,
    g: u64,
    samples: Option<u64>,
    seed: Option<u64>,
    json: Option<PathBuf>,
    csv: Option<PathBuf>,
    rule: LabelingRule,
    timing: bool,
) -> Outcome {
    let start = Instant::now();
    let mut report = match (samples, seed) {
        (Some(n), Some(s)) => monte_carlo_distribution(regime, g, n, s, rule)?,
        _ => exhaustive_distribution(regime, g, rule)?,
    };
    if timing {
        report.runtime_ms = Some(start.elapsed().as_millis() as u64);
    }
    if let Some(path) = &csv {
        report.write_csv(BufWriter::new(File::create(path)?))?;
    }
    match &json {
        Some(path) => {
            File::create(path)?.write_all(report.to_json().as_bytes())?;
            header(out, regime)?;
            writeln!(out, "labeling = {}, mode = {}", report.labeling, report.mode)?;
            writeln!(out, "g = {}, D = {}, ensemble_size = {}", report.g, report.d, report.ensemble_size)?;
            let tv = &report.tv_distance;
            writeln!(out, "tv_distance = {}/{} ~ {:.6}", tv.num, tv.den, tv.approx)?;
        }
        None => out.write_all(report.to_json().as_bytes())?,
    }
    Ok(())
}

fn run_verify(out: &mut impl Write, regime: &Regime, max_d: u64) -> Outcome {
    let report = verify(regime, max_d)?;
    header(out, regime)?;
    writeln!(out, "max D = {max_d}")?;
    for check in &report.checks {
        writeln!(out, "{check}")?;
    }
    if report.passed() {
        writeln!(out, "all checks passed")?;
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run(cli: Cli) -> Outcome {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Info { regime } => info(&mut out, &regime_of(&regime)?),
        Command::Enumerate { regime, d, count_only } => {
            enumerate(&mut out, &regime_of(&regime)?, d, count_only)
        }
        Command::CountPoints { regime, tuple, b, labeling } => {
            count_points(&mut out, &regime_of(&regime)?, &tuple, &b, labeling)
        }
        Command::Lseries { regime, points, w, trunc } => {
            lseries(&mut out, &regime_of(&regime)?, &points, &w, trunc)
        }
        Command::Ensemble { regime, g, exhaustive: _, samples, seed, json, csv, labeling, timing } => {
            ensemble(&mut out, &regime_of(&regime)?, g, samples, seed, json, csv, labeling, timing)
        }
        Command::Verify { regime, max_d } => run_verify(&mut out, &regime_of(&regime)?, max_d),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .expect("thread pool is configured once");
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(3)
        }
    }
}
