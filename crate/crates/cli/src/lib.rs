//! The `cthermo` command-line front end.
//!
//! Every subcommand is a plain function from parsed arguments to an
//! [`Output`], so the binary and the tests go through the same code path.
//! Exit codes: 0 success, 1 input error, 2 partial or uncertified result.
//! Floats are printed as `{:.14e}` (15 significant digits).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use cocycle_thermo::certify::{self, QMCertificate, Tolerances};
use cocycle_thermo::equilibrium::{self, DEFAULT_FD_STEP};
use cocycle_thermo::lyapunov;
use cocycle_thermo::pressure::{self, PressureBracket, DEFAULT_TOL_S};
use cocycle_thermo::specfile::{self, LoadedSpec};
use cocycle_thermo::symbolic::{HomoclinicSpec, Word};
use cocycle_thermo::{matalg, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_PARTIAL: i32 = 2;

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: Vec<u8>,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn ok(text: String, code: i32) -> Self {
        Output { stdout: text.into_bytes(), stderr: String::new(), code }
    }

    fn input_error(message: impl std::fmt::Display) -> Self {
        Output { stdout: Vec::new(), stderr: format!("error: {message}\n"), code: EXIT_INPUT }
    }

    pub fn stdout_str(&self) -> &str {
        std::str::from_utf8(&self.stdout).expect("output is UTF-8")
    }
}

#[derive(Debug, Parser)]
#[command(name = "cthermo", version, about = "Thermodynamic formalism for matrix cocycles over subshifts of finite type")]
pub struct Cli {
    /// Worker threads; defaults to the machine's parallelism.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the result to FILE (plus FILE.manifest.json) instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pressure brackets as CSV: s,lower,upper,n,fekete_C.
    Pressure(PressureArgs),
    /// Affinity dimension (Bowen root) as JSON.
    Dimension(DimensionArgs),
    /// Typicality report and quasi-multiplicativity certificate as JSON.
    Certify(CertifyArgs),
    /// Gibbs approximant as CSV (word,mu,gibbs_ratio) or a JSON summary.
    Gibbs(GibbsArgs),
    /// Periodic exponents, running exponents, or the periodic spectrum hull.
    Lyapunov(LyapunovArgs),
    /// Running exponents along the concatenation witness as CSV (m,t,value).
    Witness(WitnessArgs),
    /// Multifractal points as CSV.
    Multifractal(MultifractalArgs),
}

#[derive(Debug, Args)]
pub struct CertSource {
    /// Certificate JSON, either bare or as written by `certify`.
    #[arg(long, value_name = "FILE")]
    pub cert: Option<PathBuf>,
    /// Search for a certificate (indices 0..=d, horizon 4, k_max 2).
    #[arg(long, conflicts_with = "cert")]
    pub auto_cert: bool,
}

#[derive(Debug, Args)]
pub struct PressureArgs {
    pub spec: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    /// Evaluate on the grid a, a+step, ..., b instead of a single s.
    #[arg(long, value_name = "A:B:STEP")]
    pub grid: Option<String>,
    #[command(flatten)]
    pub cert: CertSource,
}

#[derive(Debug, Args)]
pub struct DimensionArgs {
    pub spec: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOL_S)]
    pub tol: f64,
    #[arg(long, default_value_t = 12)]
    pub n_max: usize,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    pub spec: PathBuf,
    /// Period block of the periodic point.
    #[arg(long)]
    pub p: String,
    /// Excursion of the homoclinic orbit (`-` for empty).
    #[arg(long)]
    pub z: String,
    /// Return time; must equal 1 + |z|.
    #[arg(long)]
    pub ell: usize,
    #[arg(long = "L", default_value_t = 6)]
    pub horizon: usize,
    #[arg(long, default_value_t = 4)]
    pub kmax: usize,
    #[arg(long, default_value_t = matalg::DEFAULT_GAP_TOL)]
    pub gap_tol: f64,
    #[arg(long, default_value_t = certify::DEFAULT_ZERO_TOL)]
    pub zero_tol: f64,
}

#[derive(Debug, Args)]
pub struct GibbsArgs {
    pub spec: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    /// JSON summary with Gibbs ratios and the variational gap.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub cert: CertSource,
}

#[derive(Debug, Args)]
pub struct LyapunovArgs {
    pub spec: PathBuf,
    /// Periodic word; prints its exponent vector.
    #[arg(long, conflicts_with = "hull")]
    pub word: Option<String>,
    /// With --word: running exponents along the periodic itinerary up to N.
    #[arg(long, requires = "word")]
    pub horizon: Option<usize>,
    /// Spectrum hull over cyclic words of period <= L.
    #[arg(long, value_name = "L")]
    pub hull: Option<usize>,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    pub spec: PathBuf,
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub y: String,
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
    #[arg(long, default_value_t = 10_000)]
    pub prefix: usize,
    /// Print every STRIDE-th step.
    #[arg(long, default_value_t = 100)]
    pub stride: usize,
    #[arg(long = "L", default_value_t = 3)]
    pub horizon: usize,
    #[arg(long, default_value_t = 2)]
    pub kmax: usize,
}

#[derive(Debug, Args)]
pub struct MultifractalArgs {
    pub spec: PathBuf,
    /// Comma-separated weights q_i.
    #[arg(long, default_value = "1")]
    pub q: String,
    /// Comma-separated exterior indices t_i.
    #[arg(long, default_value = "1")]
    pub t: String,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    /// Scan q_1 over A:B:STEP, keeping the other weights fixed.
    #[arg(long, value_name = "A:B:STEP")]
    pub grid: Option<String>,
    #[arg(long, default_value_t = DEFAULT_FD_STEP)]
    pub step: f64,
    #[command(flatten)]
    pub cert: CertSource,
}

fn fmt_f(x: f64) -> String {
    format!("{x:.14e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f).unwrap_or_default()
}

/// Replaces every float in a JSON tree by its 15-digit rendering so JSON
/// output obeys the same formatting rule as CSV.
fn fixed_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64");
            Value::Number(serde_json::Number::from_f64(fmt_f(x).parse().expect("formatted float")).expect("finite"))
        }
        Value::Array(a) => Value::Array(a.into_iter().map(fixed_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, fixed_floats(v))).collect()),
        other => other,
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let v = fixed_floats(serde_json::to_value(value).expect("serialisable"));
    let mut s = serde_json::to_string_pretty(&v).expect("serialisable");
    s.push('\n');
    s
}

fn load_spec(path: &Path) -> Result<(String, LoadedSpec), String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let spec = specfile::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((text, spec))
}

fn load_cert(path: &Path) -> Result<QMCertificate, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let inner = match v.get("certificate") {
        Some(c) => c.clone(),
        None => v,
    };
    serde_json::from_value(inner).map_err(|e| format!("{}: not a certificate: {e}", path.display()))
}

fn resolve_cert(src: &CertSource, spec: &LoadedSpec) -> Result<Option<QMCertificate>, String> {
    if let Some(path) = &src.cert {
        let cert = load_cert(path)?;
        cert.check_compatible(&spec.cocycle).map_err(|e| e.to_string())?;
        return Ok(Some(cert));
    }
    if src.auto_cert {
        return pressure::dimension_certificate(&spec.cocycle).map(Some).map_err(|e| e.to_string());
    }
    Ok(None)
}

/// Parses `a:b:step` into the points `a + i step <= b`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || format!("grid {text:?} is not of the form a:b:step");
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<Vec<_>, _>>()?;
    let (a, b, step) = (nums[0], nums[1], nums[2]);
    if !(step > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
        return Err(format!("grid {text:?} needs a <= b and step > 0"));
    }
    let count = ((b - a) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| a + i as f64 * step).collect())
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, String> {
    text.split(',')
        .map(|p| p.trim().parse::<T>().map_err(|_| format!("bad {what} {p:?} in {text:?}")))
        .collect()
}

fn parse_word(text: &str) -> Result<Word, String> {
    Word::parse(text).map_err(|e| e.to_string())
}

/// Maps library errors: invalid input gives exit 1, everything else too, with
/// the message on stderr.
fn lib_err(e: Error) -> String {
    e.to_string()
}

type CmdResult = Result<(String, i32), String>;

pub fn cmd_pressure(a: &PressureArgs) -> CmdResult {
    let (_, spec) = load_spec(&a.spec)?;
    let cert = resolve_cert(&a.cert, &spec)?;
    let grid = match &a.grid {
        Some(g) => parse_grid(g)?,
        None => vec![a.s],
    };
    let rows = pressure::pressure_curve(&spec.cocycle, cert.as_ref(), &grid, a.n).map_err(lib_err)?;
    let mut out = String::from("s,lower,upper,n,fekete_C\n");
    for b in &rows {
        writeln!(out, "{},{},{},{},{}", fmt_f(b.s), fmt_opt(b.lower), fmt_f(b.upper), b.n, fmt_opt(b.fekete_c)).unwrap();
    }
    let code = if rows.iter().any(PressureBracket::is_one_sided) { EXIT_PARTIAL } else { EXIT_OK };
    Ok((out, code))
}

pub fn cmd_dimension(a: &DimensionArgs) -> CmdResult {
    let (_, spec) = load_spec(&a.spec)?;
    let c = &spec.cocycle;
    if !c.is_contracting() {
        return Err(format!("cocycle is not contracting (max norm {})", fmt_f(c.upsilon())));
    }
    let cert = pressure::dimension_certificate(c).map_err(lib_err)?;
    let root = pressure::bowen_root(c, &cert, a.tol, a.n_max).map_err(lib_err)?;
    let b = &root.bracket_at_root;
    let out = json!({
        "s_star": root.s_star,
        "interval": [root.interval.0, root.interval.1],
        "bracket": {"lower": b.lower, "upper": b.upper, "n": b.n},
        "n_used": root.n_used,
        "conclusive": root.conclusive,
        "degenerate": root.degenerate,
    });
    let code = if root.conclusive { EXIT_OK } else { EXIT_PARTIAL };
    Ok((to_json(&out), code))
}

pub fn cmd_certify(a: &CertifyArgs) -> CmdResult {
    let (_, spec) = load_spec(&a.spec)?;
    let c = &spec.cocycle;
    let p = parse_word(&a.p)?;
    let h = HomoclinicSpec::with_ell(p.clone(), parse_word(&a.z)?, a.ell).map_err(lib_err)?;
    h.validate(c.subshift()).map_err(lib_err)?;
    let tol = Tolerances { gap_tol: a.gap_tol, zero_tol: a.zero_tol };
    let report = certify::typicality_report(c, &p, &h, tol).map_err(lib_err)?;
    let t_set: Vec<usize> = (0..=c.d()).collect();
    let cert = certify::qm_search(c, &t_set, a.horizon, a.kmax).map_err(lib_err)?;
    let cert = if cert.c > 0.0 { certify::extend_certificate_to_s(&cert).map_err(lib_err)? } else { cert };
    let out = json!({
        "irreducibility": certify::irreducibility(c),
        "typicality": report,
        "certificate": cert,
    });
    // certificates are written verbatim so that `--cert` can read them back exactly
    let mut text = serde_json::to_string_pretty(&json!({
        "irreducibility": out["irreducibility"],
        "typicality": fixed_floats(out["typicality"].clone()),
        "certificate": out["certificate"],
    }))
    .expect("serialisable");
    text.push('\n');
    let code = if report.typical && cert.c > 0.0 { EXIT_OK } else { EXIT_PARTIAL };
    Ok((text, code))
}

pub fn cmd_gibbs(a: &GibbsArgs) -> CmdResult {
    let (_, spec) = load_spec(&a.spec)?;
    let c = &spec.cocycle;
    let cert = resolve_cert(&a.cert, &spec)?;
    let bracket = pressure::pressure_bracket(c, a.s, a.n, cert.as_ref()).map_err(lib_err)?;
    let mu = equilibrium::gibbs_mu(c, a.s, a.n, a.m).map_err(lib_err)?;
    let p_mid = bracket.midpoint();
    let code = if bracket.is_one_sided() { EXIT_PARTIAL } else { EXIT_OK };
    if a.json {
        let ratios = equilibrium::gibbs_ratio_check(&mu, c, a.s, p_mid).map_err(lib_err)?;
        let gap = equilibrium::variational_gap(c, a.s, &mu, &bracket).map_err(lib_err)?;
        let out = json!({
            "s": a.s,
            "n": a.n,
            "m": a.m,
            "bracket": bracket,
            "gibbs_ratios": ratios,
            "variational_gap": gap,
            "shift_invariance_defect": mu.shift_invariance_defect(),
        });
        return Ok((to_json(&out), code));
    }
    let m = a.m as f64;
    let mut out = String::from("word,mu,gibbs_ratio\n");
    for (w, p) in &mu.weights {
        let ratio = if *p > 0.0 { (p.ln() + m * p_mid - c.log_phi_word(w, a.s).map_err(lib_err)?).exp() } else { 0.0 };
        writeln!(out, "{w},{},{}", fmt_f(*p), fmt_f(ratio)).unwrap();
    }
    Ok((out, code))
}

pub fn cmd_lyapunov(a: &LyapunovArgs) -> CmdResult {
    let (_, spec) = load_spec(&a.spec)?;
    let c = &spec.cocycle;
    let d = c.d();
    let header = |first: &str| {
        let mut h = String::from(first);
        for t in 1..=d {
            write!(h, ",lambda_{t}").unwrap();
        }
        h
    };
    if let Some(max_period) = a.hull {
        let sample = lyapunov::spectrum_hull(c, max_period).map_err(lib_err)?;
        let mut out = header("word");
        out.push_str(",vertex\n");
        for (i, (w, pt)) in sample.sources.iter().zip(&sample.points).enumerate() {
            let values: Vec<String> = pt.iter().map(|&x| fmt_f(x)).collect();
            writeln!(out, "{w},{},{}", values.join(","), u8::from(sample.hull.contains(&i))).unwrap();
        }
        return Ok((out, EXIT_OK));
    }
    let word = parse_word(a.word.as_deref().ok_or("give --word or --hull")?)?;
    match a.horizon {
        Some(n) => {
            c.subshift().check_cyclic(&word).map_err(lib_err)?;
            let t_set: Vec<usize> = (1..=d).collect();
            let run = lyapunov::pointwise_exponents(c, &word.periodic_prefix(n), n, &t_set).map_err(lib_err)?;
            let mut out = String::from("m,t,value\n");
            for m in 1..=run.horizon() {
                for (t, v) in t_set.iter().zip(run.at(m)) {
                    writeln!(out, "{m},{t},{}", fmt_f(v)).unwrap();
                }
            }
            Ok((out, EXIT_OK))
        }
        None => {
            let values = lyapunov::periodic_exponents(c, &word).map_err(lib_err)?;
            let values: Vec<String> = values.iter().map(|&x| fmt_f(x)).collect();
            Ok((format!("{}\n{word},{}\n", header("word"), values.join(",")), EXIT_OK))
        }
    }
}

pub fn cmd_witness(a: &WitnessArgs) -> CmdResult {
    let (_, spec) = load_spec(&a.spec)?;
    let c = &spec.cocycle;
    if a.stride == 0 {
        return Err("stride must be positive".into());
    }
    let (x, y) = (parse_word(&a.x)?, parse_word(&a.y)?);
    let t_set: Vec<usize> = (1..=c.d()).collect();
    let cert = certify::qm_search(c, &t_set, a.horizon, a.kmax).map_err(lib_err)?;
    let w = lyapunov::convexity_witness(c, &x, &y, a.gamma, &cert, a.prefix).map_err(lib_err)?;
    let mut out = String::from("m,t,value,target\n");
    let n = w.trace.horizon();
    for m in (a.stride..=n).step_by(a.stride).chain((n % a.stride != 0).then_some(n)) {
        for ((t, v), target) in w.trace.t_set.iter().zip(w.trace.at(m)).zip(&w.target) {
            writeln!(out, "{m},{t},{},{}", fmt_f(v), fmt_f(*target)).unwrap();
        }
    }
    let code = if w.below_certificate.is_empty() { EXIT_OK } else { EXIT_PARTIAL };
    Ok((out, code))
}

pub fn cmd_multifractal(a: &MultifractalArgs) -> CmdResult {
    let (_, spec) = load_spec(&a.spec)?;
    let c = &spec.cocycle;
    let cert = resolve_cert(&a.cert, &spec)?;
    let q_base: Vec<f64> = parse_list(&a.q, "weight")?;
    let t_vec: Vec<usize> = parse_list(&a.t, "index")?;
    let q_points: Vec<Vec<f64>> = match &a.grid {
        Some(g) => parse_grid(g)?
            .into_iter()
            .map(|q1| {
                let mut q = q_base.clone();
                q[0] = q1;
                q
            })
            .collect(),
        None => vec![q_base],
    };
    let mut out = String::from("q,lower,upper,alpha,level_entropy,flagged\n");
    let mut one_sided = false;
    let join = |v: &[f64]| v.iter().map(|&x| fmt_f(x)).collect::<Vec<_>>().join(";");
    for q in &q_points {
        let pt = equilibrium::multifractal_point(c, q, &t_vec, a.n, cert.as_ref(), a.step).map_err(lib_err)?;
        one_sided |= pt.pressure.is_one_sided();
        let flagged: Vec<String> = pt.flagged.iter().map(|i| (i + 1).to_string()).collect();
        writeln!(
            out,
            "{},{},{},{},{},{}",
            join(q),
            fmt_opt(pt.pressure.lower),
            fmt_f(pt.pressure.upper),
            join(&pt.alpha_vec),
            fmt_f(pt.level_entropy),
            flagged.join(";")
        )
        .unwrap();
    }
    Ok((out, if one_sided { EXIT_PARTIAL } else { EXIT_OK }))
}

fn spec_path(cmd: &Command) -> &Path {
    match cmd {
        Command::Pressure(a) => &a.spec,
        Command::Dimension(a) => &a.spec,
        Command::Certify(a) => &a.spec,
        Command::Gibbs(a) => &a.spec,
        Command::Lyapunov(a) => &a.spec,
        Command::Witness(a) => &a.spec,
        Command::Multifractal(a) => &a.spec,
    }
}

fn dispatch(cmd: &Command) -> CmdResult {
    match cmd {
        Command::Pressure(a) => cmd_pressure(a),
        Command::Dimension(a) => cmd_dimension(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Gibbs(a) => cmd_gibbs(a),
        Command::Lyapunov(a) => cmd_lyapunov(a),
        Command::Witness(a) => cmd_witness(a),
        Command::Multifractal(a) => cmd_multifractal(a),
    }
}

fn write_with_manifest(path: &Path, body: &str, args: &[String], cmd: &Command, seconds: f64, code: i32) -> Result<(), String> {
    std::fs::write(path, body).map_err(|e| format!("{}: {e}", path.display()))?;
    let spec_hash = std::fs::read(spec_path(cmd))
        .map(|bytes| Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect::<String>())
        .unwrap_or_default();
    let manifest = json!({
        "output": path.file_name().map(|f| f.to_string_lossy().into_owned()),
        "spec": spec_path(cmd).display().to_string(),
        "spec_sha256": spec_hash,
        "args": args,
        "version": env!("CARGO_PKG_VERSION"),
        "exit_code": code,
        "wall_time_seconds": seconds,
    });
    let mut manifest_path = path.as_os_str().to_owned();
    manifest_path.push(".manifest.json");
    let text = serde_json::to_string_pretty(&manifest).expect("serialisable") + "\n";
    std::fs::write(&manifest_path, text).map_err(|e| format!("{}: {e}", PathBuf::from(&manifest_path).display()))
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { stdout: Vec::new(), stderr: text, code: EXIT_INPUT }
            } else {
                Output::ok(text, EXIT_OK)
            };
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Output::input_error("--threads must be positive");
        }
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => return Output::input_error(e),
    };
    let start = Instant::now();
    let result = pool.install(|| dispatch(&cli.command));
    let seconds = start.elapsed().as_secs_f64();
    let (body, code) = match result {
        Ok(r) => r,
        Err(message) => return Output::input_error(message),
    };
    match &cli.out {
        Some(path) => match write_with_manifest(path, &body, &args[1..], &cli.command, seconds, code) {
            Ok(()) => Output::ok(String::new(), code),
            Err(message) => Output::input_error(message),
        },
        None => Output::ok(body, code),
    }
}
