//! Command-line front end: run verification suites, write report artifacts,
//! and print what each suite checks.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
//! or input errors.  Every flag has an environment-variable mirror prefixed
//! `FRACVERIFY_` so CI configuration needs no wrapper scripts.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fracverify::hopf::{hopf_coefficients, write_hopf_csv};
use fracverify::pohozaev::Nonlinearity;
use fracverify::report::{all_pass, to_csv, to_json, VerificationReport};
use fracverify::suite::{
    hopf_export_function, pohozaev_export_solution, run_suite, MapChoice, Suite, SuiteConfig,
};

#[derive(Parser)]
#[command(
    name = "fracverify",
    version,
    about = "Numerical verification suites for nonlocal fractional-calculus identities",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write its report artifacts.
    Verify(VerifyArgs),
    /// Print the identities a suite checks and the tolerances it enforces.
    Describe {
        /// Suite name (see `verify --help` for the list).
        #[arg(value_parser = parse_suite)]
        suite: Suite,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite: spectral | gagliardo | divgrad | noether | hopf | pohozaev |
    /// circle-pohozaev.
    #[arg(value_parser = parse_suite)]
    suite: Suite,

    /// Override the suite's default grid or Fourier resolution.
    #[arg(long, env = "FRACVERIFY_RESOLUTION")]
    resolution: Option<usize>,

    /// Override the default pass tolerance of residual checks (lower-bound
    /// witness checks keep their built-in thresholds).
    #[arg(long, env = "FRACVERIFY_TOLERANCE")]
    tolerance: Option<f64>,

    /// Seed for the suite's random draws; a fixed seed reproduces reports
    /// byte for byte.
    #[arg(long, env = "FRACVERIFY_SEED", default_value_t = 7)]
    seed: u64,

    /// Directory the report artifacts are written into.
    #[arg(long, env = "FRACVERIFY_OUT", default_value = ".")]
    out: PathBuf,

    /// Report file format.
    #[arg(long, env = "FRACVERIFY_FORMAT", value_enum, default_value = "json")]
    format: Format,

    /// Input map for the noether and hopf suites: circle-identity | z2 |
    /// witness | cosine.  Omitted: each suite runs its default map set.
    #[arg(long, value_parser = parse_map)]
    map: Option<MapChoice>,

    /// Noether component pair, 1-based "i,k", or "all".
    #[arg(long, value_parser = parse_pairs)]
    pairs: Option<PairsArg>,

    /// Nonlinearity for the pohozaev suite: const1 | const:<c> |
    /// affine:<c0>,<c1>.
    #[arg(long, value_parser = parse_nonlinearity)]
    f: Option<Nonlinearity>,

    /// Interval "a,b" for the pohozaev suite.
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true)]
    interval: Option<(f64, f64)>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq)]
enum PairsArg {
    All,
    One(usize, usize),
}

fn parse_suite(text: &str) -> Result<Suite, String> {
    Suite::from_str(text).map_err(|_| {
        let names: Vec<&str> = Suite::all().iter().map(|s| s.name()).collect();
        format!("unknown suite {text:?}; expected one of: {}", names.join(", "))
    })
}

fn parse_map(text: &str) -> Result<MapChoice, String> {
    MapChoice::from_str(text)
        .map_err(|_| format!("unknown map {text:?}; expected circle-identity, z2, witness, or cosine"))
}

fn parse_pairs(text: &str) -> Result<PairsArg, String> {
    if text == "all" {
        return Ok(PairsArg::All);
    }
    let (i, k) = text
        .split_once(',')
        .ok_or_else(|| format!("pair {text:?} is not \"all\" or \"i,k\""))?;
    let i: usize = i.trim().parse().map_err(|_| format!("bad pair index {i:?}"))?;
    let k: usize = k.trim().parse().map_err(|_| format!("bad pair index {k:?}"))?;
    if i == 0 || k == 0 {
        return Err("pair indices are 1-based".into());
    }
    if i == k {
        return Err("pair indices must differ".into());
    }
    Ok(PairsArg::One(i - 1, k - 1))
}

fn parse_nonlinearity(text: &str) -> Result<Nonlinearity, String> {
    Nonlinearity::from_str(text).map_err(|e| e.to_string())
}

fn parse_interval(text: &str) -> Result<(f64, f64), String> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| format!("interval {text:?} is not \"a,b\""))?;
    let a: f64 = a.trim().parse().map_err(|_| format!("bad endpoint {a:?}"))?;
    let b: f64 = b.trim().parse().map_err(|_| format!("bad endpoint {b:?}"))?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(format!("interval ({a}, {b}) needs finite a < b"));
    }
    Ok((a, b))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Describe { suite } => {
            print!("{}", describe(suite));
            ExitCode::SUCCESS
        }
        Command::Verify(args) => match verify(&args) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(message) => {
                eprintln!("fracverify: {message}");
                ExitCode::from(2)
            }
        },
    }
}

/// Runs the suite, prints one line per check, writes artifacts.  Ok(passed)
/// reflects the aggregate verdict; Err carries input/config failures.
fn verify(args: &VerifyArgs) -> Result<bool, String> {
    let config = SuiteConfig {
        resolution: args.resolution,
        tolerance: args.tolerance,
        seed: args.seed,
        map: args.map,
        pairs: match args.pairs {
            None | Some(PairsArg::All) => None,
            Some(PairsArg::One(i, k)) => Some((i, k)),
        },
        nonlinearity: args.f,
        interval: args.interval,
    };

    let reports = run_suite(args.suite, &config).map_err(|e| e.to_string())?;

    for report in &reports {
        println!("{}", report_line(report));
    }
    let passed = all_pass(&reports);
    let n_pass = reports.iter().filter(|r| r.pass).count();
    println!(
        "suite {}: {}/{} checks passed",
        args.suite.name(),
        n_pass,
        reports.len()
    );

    fs::create_dir_all(&args.out)
        .map_err(|e| format!("cannot create {}: {e}", args.out.display()))?;
    let stem = args.suite.name().replace('-', "_");
    let report_path = match args.format {
        Format::Json => {
            let path = args.out.join(format!("{stem}_report.json"));
            let text = to_json(&reports).map_err(|e| e.to_string())?;
            fs::write(&path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            path
        }
        Format::Csv => {
            let path = args.out.join(format!("{stem}_report.csv"));
            let text = to_csv(&reports).map_err(|e| e.to_string())?;
            fs::write(&path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            path
        }
    };
    println!("wrote {}", report_path.display());

    // Plot-ready side artifacts for the suites with a distinguished input.
    if args.suite == Suite::Hopf {
        let u = hopf_export_function(&config).map_err(|e| e.to_string())?;
        let coeffs = hopf_coefficients(&u);
        let path = args.out.join("hopf_coeffs.csv");
        let file = fs::File::create(&path)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        write_hopf_csv(&coeffs, file).map_err(|e| e.to_string())?;
        println!("wrote {}", path.display());
    }
    if args.suite == Suite::Pohozaev {
        let solution = pohozaev_export_solution(&config).map_err(|e| e.to_string())?;
        let path = args.out.join("pohozaev_solution.json");
        fs::write(&path, solution.to_json().map_err(|e| e.to_string())?)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        println!("wrote {}", path.display());
    }

    Ok(passed)
}

fn report_line(report: &VerificationReport) -> String {
    let mut line = format!(
        "{}  {:<34} residual {:>12.5e}  tolerance {:>9.1e}",
        if report.pass { "PASS" } else { "FAIL" },
        report.check,
        report.residual,
        report.tolerance,
    );
    if !report.params.is_empty() {
        let params: Vec<String> = report
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let _ = write!(line, "  [{}]", params.join(" "));
    }
    line
}

fn describe(suite: Suite) -> String {
    let text = match suite {
        Suite::Spectral => {
            "suite spectral: circle spectral calculus.\n\
             Identities checked:\n\
             - (-Delta)^s e^{ik theta} = |k|^{2s} e^{ik theta}: multiplier route exact to\n\
             \u{20}  1e-12 relative for s in {1/4, 1/2, 1} on modes |k| <= 8.\n\
             - H^2 = -(I - mean): the Hilbert transform squares to minus the identity\n\
             \u{20}  on mean-free functions, exact to 1e-12.\n\
             - (-Delta)^{1/4} composed with itself equals (-Delta)^{1/2}, exact to 1e-12.\n\
             - Principal-value route: the singular integral with kernel\n\
             \u{20}  1/(4 pi sin^2((x-y)/2)) reproduces the multiplier route to 1e-6\n\
             \u{20}  sup-error for degree <= 8 trigonometric polynomials at 4096 nodes.\n"
        }
        Suite::Gagliardo => {
            "suite gagliardo: Gagliardo seminorm equivalence on the circle.\n\
             Identity checked:\n\
             - 1/(4(2π)²) * double integral of |u(x)-u(y)|^2 / sin^2((x-y)/2)\n\
             \u{20}  equals the Fourier-side seminorm sum |k| |u_hat(k)|^2, within 1e-5\n\
             \u{20}  relative on 20 seeded random trigonometric polynomials (bandwidth 8).\n\
             The diagonal of the double integral is filled analytically with its\n\
             limit 4|u'|^2 so the quadrature sees no singularity.\n"
        }
        Suite::DivGrad => {
            "suite divgrad: fractional div-grad identity on the line.\n\
             Identities checked:\n\
             - <(-Delta)^s u, phi> = (C_{1,s}/2) * div_s d_s u[phi] for s in {1/4, 1/2}\n\
             \u{20}  on smooth bumps, residual < 1e-3 relative, where\n\
             \u{20}  d_s u(x,y) = (u(x)-u(y))/|x-y|^s and\n\
             \u{20}  div_s F[phi] = double integral of F(x,y) d_s phi(x,y) / |x-y|.\n\
             - C_{1,1/2} = 1/pi from the Gamma-function formula, exact to 1e-12.\n\
             The pointwise side is principal-value quadrature with analytic exterior\n\
             tails; the pairing side adds the closed-form strip contributions where\n\
             one integration variable leaves the grid.\n"
        }
        Suite::Noether => {
            "suite noether: divergence-free currents of sphere-valued maps.\n\
             Identities checked:\n\
             - div_{1/2} Omega_ik[phi] = 2 * integral of\n\
             \u{20}  (u^i (-Delta)^{1/2} u^k - u^k (-Delta)^{1/2} u^i) phi, where\n\
             \u{20}  Omega_ik(x,y) = u^k(x) d_{1/2}u^i(x,y) - u^i(x) d_{1/2}u^k(x,y).\n\
             - For the half-harmonic traces (circle-identity, z2) the divergence\n\
             \u{20}  vanishes: residual < 1e-12 against every test mode cos(k theta),\n\
             \u{20}  sin(k theta), 1 up to twice the map bandwidth, and the pointwise\n\
             \u{20}  wedge u^i (-Delta)^{1/2}u^k - u^k (-Delta)^{1/2}u^i is < 1e-12.\n\
             - For the perturbed witness e^{i(theta + 0.3 sin theta)} the divergence\n\
             \u{20}  exceeds 1e-2 on some odd mode (even modes pair to zero by parity).\n\
             - A direct double quadrature of the Omega pairing agrees with the\n\
             \u{20}  spectral reduction to 1e-3.\n\
             Flags: --map, --pairs.\n"
        }
        Suite::Hopf => {
            "suite hopf: the half-Hopf differential as a stationarity criterion.\n\
             Identities checked:\n\
             - u is a stationary point of E if and only if the half-fractional Hopf\n\
             \u{20}  differential vanishes; H(k) = sum over a+b=k of a u_hat(a) b u_hat(b)\n\
             \u{20}  on positive frequencies.\n\
             - Circle traces give H = 0 to 1e-12; their harmonic extensions are\n\
             \u{20}  conformal: |d_r P u| = (1/r)|d_theta P u| and orthogonality, with\n\
             \u{20}  residual < 1e-8 on radii <= 0.99.\n\
             - u = cos theta gives H(2) = 1/4 exactly and H^{-3} norm sqrt(1/2000).\n\
             - Norm bound: ||H||^2 in H^{-3} is at most (pi^2/3) [u]^4 (seminorm of\n\
             \u{20}  order 1/2), checked on 100 seeded random inputs.\n\
             Flags: --map.\n"
        }
        Suite::Pohozaev => {
            "suite pohozaev: Pohozaev identities for (-Delta)^{1/2} u = f(u) on (a,b),\n\
             u = 0 outside. Assume that u²∈C²([a,b]); with the boundary limits\n\
             l_a = lim u^2(x)/(x-a) and l_b = lim u^2(x)/(b-x):\n\
             - dilation:    -integral of x u'(x) (-Delta)^{1/2}u(x) dx = (pi/8)(a l_a - b l_b)\n\
             - translation: -integral of   u'(x) (-Delta)^{1/2}u(x) dx = (pi/8)(l_a - l_b)\n\
             both to 1e-3 via a Chebyshev solve of the equation (for f = 1 on (-1,1)\n\
             the solution is sqrt(1-x^2), each dilation side equals -pi/2, the\n\
             translation sides vanish, and the interval (1,3) reproduces -pi/2).\n\
             Support checks: the eigenrelation (-Delta)^{1/2} [sqrt(1-t^2) U_n] =\n\
             (n+1) U_n scaled to the interval holds to 1e-3 for n <= 8; boundary\n\
             limits l = 2 to 1e-4; the sqrt-distance boundary coefficient\n\
             alpha = sqrt(2) to 1e-3.\n\
             Flags: --f, --interval.\n"
        }
        Suite::CirclePohozaev => {
            "suite circle-pohozaev: Pohozaev integrals on the circle.\n\
             Identities checked, for random trigonometric polynomials u and a random\n\
             rotation angle delta (both seeded):\n\
             - integral of u'(theta) (-Delta)^{1/2}u(theta) d theta = 0\n\
             - integral of u'(theta) (-Delta)^{1/2}u(theta) sin(theta - delta) d theta = 0\n\
             both spectrally exact, residual < 1e-10.  These are the invariances\n\
             behind traces of automorphisms of the disk.\n"
        }
    };
    text.to_string()
}
