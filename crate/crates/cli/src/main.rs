//! Command line front end: compute quasi-norms, generate test families,
//! classify embedding relations, run ratio scans, and drive the
//! acceptance suite. Reports go to stdout and optionally to CSV/JSON
//! files (`--out` + `--format`).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mixnorm::{
    classify_f_into_sf, classify_sf_into_f, quasi_norm, quasi_norm_spectrum, random_corpus_check,
    ratio_scan_on, run_all_criteria, run_criterion, CoeffPolicy, Comparison, CorpusReport,
    CriterionOutcome, Error, FamilySpec, Grid, GridFunction, Result, ScanReport, SpaceParams,
    TestFamily, Verdict,
};

const SCHEMA_VERSION: u32 = 1;

const EXIT_HELP: &str = "exit codes:
  0  success
  1  verification criterion failed
  2  invalid parameters or arguments
  3  grid, bandwidth, or lattice violation
  4  i/o or file format error
  5  degenerate fit (too few or collinear points)";

/// Map library errors onto the documented exit codes.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidSpace(_) | Error::InvalidArgument(_) => 2,
        Error::InvalidGrid(_) | Error::Nyquist { .. } | Error::GridMismatch(_) => 3,
        Error::Io(_) | Error::Format(_) => 4,
        Error::DegenerateFit(_) => 5,
    }
}

/// 12 significant digits, the precision used for all printed numbers.
fn sig12(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    format!("{v:.11e}")
}

fn timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Quote a CSV cell if it contains a delimiter, quote, or newline.
fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Parser)]
#[command(
    name = "mixnorm",
    version,
    about = "Dyadic band analysis of periodic grid functions: quasi-norms on the \
             isotropic and dominating-mixed smoothness scales",
    after_help = EXIT_HELP
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute one quasi-norm of a test-family member or a function file
    Norm(NormArgs),
    /// Write a test-family member to a function container plus JSON sidecar
    Generate(GenerateArgs),
    /// Embedding verdicts between the two scales, at a point or on a sweep
    Region(RegionArgs),
    /// Norm-ratio scan along a test family with a fitted growth slope
    Scan(ScanArgs),
    /// Run the acceptance suite (all criteria or a single one)
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpaceKind {
    #[value(name = "F", alias = "f")]
    F,
    #[value(name = "B", alias = "b")]
    B,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScaleKind {
    /// single dyadic level index (isotropic decomposition)
    Iso,
    /// one level index per axis (dominating mixed decomposition)
    Mixed,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Direction {
    /// mixed-scale space against the isotropic space of equal smoothness
    Equal,
    /// isotropic space with dimension-scaled smoothness t*d against mixed t
    Scaled,
    Both,
}

#[derive(Args)]
struct SpaceArgs {
    /// Smoothness parameter t
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    t: f64,
    /// Integrability p (0 < p; "inf" only on the B scale)
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Summability q (0 < q <= inf)
    #[arg(long, default_value_t = 2.0)]
    q: f64,
    /// Norm family
    #[arg(long, value_enum, default_value = "F")]
    space: SpaceKind,
}

impl SpaceArgs {
    fn params(&self, scale: ScaleKind, d: usize) -> Result<SpaceParams> {
        let sp = match (self.space, scale) {
            (SpaceKind::F, ScaleKind::Iso) => SpaceParams::isotropic_f(self.t, self.p, self.q, d),
            (SpaceKind::F, ScaleKind::Mixed) => SpaceParams::mixed_f(self.t, self.p, self.q, d),
            (SpaceKind::B, ScaleKind::Iso) => SpaceParams::isotropic_b(self.t, self.p, self.q, d),
            (SpaceKind::B, ScaleKind::Mixed) => SpaceParams::mixed_b(self.t, self.p, self.q, d),
        };
        sp.validate()?;
        Ok(sp)
    }
}

#[derive(Args)]
struct FamilyArgs {
    /// Test family (ex1..ex6)
    #[arg(long)]
    family: Option<String>,
    /// Scale index: dilation level or train length
    #[arg(long, visible_alias = "j", default_value_t = 1)]
    l: u32,
    /// Train coefficients a_1..a_l, comma separated (ex1/ex4/ex5 only)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    coeffs: Option<Vec<f64>>,
    /// Dimension of the torus
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Samples per axis (overrides the member's default grid)
    #[arg(long)]
    n: Option<usize>,
    /// Period per axis; default 16 pi, the dyadic lattice with spacing 1/8
    #[arg(long)]
    period: Option<f64>,
}

impl FamilyArgs {
    fn member(&self) -> Result<FamilySpec> {
        let name = self
            .family
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("no --family given".into()))?;
        let family: TestFamily = name.parse()?;
        match &self.coeffs {
            Some(c) => FamilySpec::with_coeffs(family, self.l, self.d, c.clone()),
            None => FamilySpec::new(family, self.l, self.d),
        }
    }

    /// Explicit grid if any override flag was set.
    fn pinned_grid(&self) -> Result<Option<Grid>> {
        if self.n.is_none() && self.period.is_none() {
            return Ok(None);
        }
        let n = self.n.unwrap_or(256);
        let period = self.period.unwrap_or(16.0 * std::f64::consts::PI);
        Ok(Some(Grid::uniform(self.d, n, period)?))
    }

    fn grid_for(&self, member: &FamilySpec) -> Result<Grid> {
        match self.pinned_grid()? {
            Some(g) => {
                member.check_grid(&g)?;
                Ok(g)
            }
            None => member.default_grid(),
        }
    }
}

#[derive(Args)]
struct OutArgs {
    /// Write a machine-readable report here
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format for --out
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

impl OutArgs {
    fn write(&self, json: &impl Serialize, csv: &str) -> Result<()> {
        let Some(path) = &self.out else {
            return Ok(());
        };
        let body = match self.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(json)
                    .map_err(|e| Error::Format(e.to_string()))?;
                s.push('\n');
                s
            }
            Format::Csv => csv.to_string(),
        };
        std::fs::write(path, body)?;
        Ok(())
    }
}

#[derive(Args)]
struct NormArgs {
    /// Function container file (instead of a named family)
    #[arg(long = "in", conflicts_with_all = ["family", "coeffs", "n", "period"])]
    input: Option<PathBuf>,
    #[command(flatten)]
    fam: FamilyArgs,
    #[command(flatten)]
    space: SpaceArgs,
    /// Level decomposition used by the norm
    #[arg(long, value_enum, default_value = "mixed")]
    scale: ScaleKind,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Serialize)]
struct NormReport {
    schema_version: u32,
    timestamp: u64,
    command: &'static str,
    source: String,
    space: SpaceParams,
    grid_n: Vec<usize>,
    grid_period: Vec<f64>,
    value: f64,
}

fn cmd_norm(args: NormArgs) -> Result<i32> {
    let (value, sp, grid, source) = if let Some(path) = &args.input {
        let f = GridFunction::load(path)?;
        let sp = args.space.params(args.scale, f.grid().dim())?;
        let value = quasi_norm(&f, &sp)?;
        (value, sp, f.grid().clone(), path.display().to_string())
    } else {
        let member = args.fam.member()?;
        let sp = args.space.params(args.scale, args.fam.d)?;
        let grid = args.fam.grid_for(&member)?;
        let spec = member.spectrum(&grid)?;
        let value = quasi_norm_spectrum(&spec, &sp)?;
        (value, sp, grid, format!("{} l={}", member.family, member.scale))
    };
    println!("{}", sig12(value));
    let report = NormReport {
        schema_version: SCHEMA_VERSION,
        timestamp: timestamp(),
        command: "norm",
        source: source.clone(),
        space: sp,
        grid_n: grid.n().to_vec(),
        grid_period: grid.period().to_vec(),
        value,
    };
    let csv = format!(
        "source,t,p,q,d,value\n{},{},{},{},{},{}\n",
        csv_cell(&source),
        sig12(sp.t),
        sig12(sp.p),
        sig12(sp.q),
        sp.d,
        sig12(value)
    );
    args.out.write(&report, &csv)?;
    Ok(0)
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    fam: FamilyArgs,
    /// Container file to write; the sidecar goes to <out>.json
    #[arg(long)]
    out: PathBuf,
}

#[derive(Serialize)]
struct Sidecar {
    schema_version: u32,
    timestamp: u64,
    command: &'static str,
    family: TestFamily,
    scale_index: u32,
    coeffs: Vec<f64>,
    d: usize,
    grid_n: Vec<usize>,
    grid_period: Vec<f64>,
    required_bandwidth: Vec<f64>,
    container: String,
}

fn cmd_generate(args: GenerateArgs) -> Result<i32> {
    let member = args.fam.member()?;
    let grid = args.fam.grid_for(&member)?;
    let f = member.function(&grid)?;
    f.save(&args.out)?;
    let sidecar = Sidecar {
        schema_version: SCHEMA_VERSION,
        timestamp: timestamp(),
        command: "generate",
        family: member.family,
        scale_index: member.scale,
        coeffs: member.coeffs.clone(),
        d: member.d,
        grid_n: grid.n().to_vec(),
        grid_period: grid.period().to_vec(),
        required_bandwidth: member.required_bandwidth(),
        container: args.out.display().to_string(),
    };
    let mut body =
        serde_json::to_string_pretty(&sidecar).map_err(|e| Error::Format(e.to_string()))?;
    body.push('\n');
    let sidecar_path = sidecar_path(&args.out);
    std::fs::write(&sidecar_path, body)?;
    println!(
        "wrote {} ({} samples) and {}",
        args.out.display(),
        grid.len(),
        sidecar_path.display()
    );
    Ok(0)
}

fn sidecar_path(container: &Path) -> PathBuf {
    let mut os = container.as_os_str().to_owned();
    os.push(".json");
    PathBuf::from(os)
}

#[derive(Args)]
struct RegionArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// Dimension (the comparison needs d >= 2)
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Which comparison(s) to classify
    #[arg(long, value_enum, default_value = "both")]
    direction: Direction,
    /// Sweep a (1/p, t) lattice at fixed q instead of the single point
    #[arg(long)]
    sweep: bool,
    /// Lattice steps per axis for --sweep
    #[arg(long, default_value_t = 40)]
    steps: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Serialize)]
struct RegionRow {
    comparison: &'static str,
    t: f64,
    p: f64,
    q: f64,
    d: usize,
    forward: Verdict,
    reverse: Verdict,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct RegionReport {
    schema_version: u32,
    timestamp: u64,
    command: &'static str,
    rows: Vec<RegionRow>,
}

fn verdict_word(v: &Verdict) -> String {
    match v {
        Verdict::Embeds { tag } => format!("Yes [{tag}]"),
        Verdict::Fails { tag } => format!("No [{tag}]"),
        Verdict::Open => "Open".into(),
    }
}

fn region_row(
    comparison: &'static str,
    t: f64,
    p: f64,
    q: f64,
    d: usize,
    c: Comparison,
) -> RegionRow {
    RegionRow {
        comparison,
        t,
        p,
        q,
        d,
        forward: c.forward,
        reverse: c.reverse,
        notes: c.notes,
    }
}

fn cmd_region(args: RegionArgs) -> Result<i32> {
    let q = args.space.q;
    let d = args.d;
    let mut rows = Vec::new();
    let mut push_point = |t: f64, p: f64| -> Result<()> {
        if args.direction != Direction::Scaled {
            rows.push(region_row(
                "mixed-vs-isotropic",
                t,
                p,
                q,
                d,
                classify_sf_into_f(t, p, q, d)?,
            ));
        }
        if args.direction != Direction::Equal {
            rows.push(region_row(
                "scaled-isotropic-vs-mixed",
                t,
                p,
                q,
                d,
                classify_f_into_sf(t, p, q, d)?,
            ));
        }
        Ok(())
    };

    if args.sweep {
        let steps = args.steps.max(2);
        for ip in 1..=steps {
            let p = 1.0 / (ip as f64 * (2.0 / steps as f64));
            for it in 1..=steps {
                let t = -2.0 + (it as f64 - 0.5) * (4.0 / steps as f64);
                push_point(t, p)?;
            }
        }
        println!("classified {} lattice points at q = {}", rows.len(), sig12(q));
    } else {
        push_point(args.space.t, args.space.p)?;
        for row in &rows {
            println!("{} (t={}, p={}, q={}, d={}):", row.comparison, row.t, row.p, row.q, row.d);
            println!("  forward: {}", verdict_word(&row.forward));
            println!("  reverse: {}", verdict_word(&row.reverse));
            for note in &row.notes {
                println!("  note: {note}");
            }
        }
    }

    let mut csv = String::from("comparison,t,inv_p,q,d,forward,forward_tag,reverse,reverse_tag\n");
    for row in &rows {
        let (fw, ft) = verdict_cells(&row.forward);
        let (rw, rt) = verdict_cells(&row.reverse);
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{}",
            row.comparison,
            sig12(row.t),
            sig12(1.0 / row.p),
            sig12(row.q),
            row.d,
            fw,
            csv_cell(&ft),
            rw,
            csv_cell(&rt)
        );
    }
    let report = RegionReport {
        schema_version: SCHEMA_VERSION,
        timestamp: timestamp(),
        command: "region",
        rows,
    };
    args.out.write(&report, &csv)?;
    Ok(0)
}

fn verdict_cells(v: &Verdict) -> (&'static str, String) {
    match v {
        Verdict::Embeds { tag } => ("yes", tag.clone()),
        Verdict::Fails { tag } => ("no", tag.clone()),
        Verdict::Open => ("open", String::new()),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyKind {
    /// all train coefficients equal one
    Ones,
    /// only the top coefficient, a_j = delta_{j,l}
    Last,
    /// a_j = 2^{-j * rate}
    Geometric,
}

#[derive(Args)]
struct ScanArgs {
    /// Test family to scan along
    #[arg(long)]
    family: Option<String>,
    /// Scan a random corpus of this size instead of a test family
    #[arg(long, conflicts_with_all = ["family", "lmin", "lmax", "policy", "rate"])]
    corpus: Option<usize>,
    /// Random seed for --corpus
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    space: SpaceArgs,
    /// Dimension
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Smallest scale index
    #[arg(long, default_value_t = 2)]
    lmin: u32,
    /// Largest scale index
    #[arg(long, default_value_t = 6)]
    lmax: u32,
    /// Decomposition of the numerator norm
    #[arg(long, value_enum, default_value = "mixed")]
    dst: ScaleKind,
    /// Decomposition of the denominator norm
    #[arg(long, value_enum, default_value = "iso")]
    src: ScaleKind,
    /// Numerator smoothness override (defaults to --t)
    #[arg(long, allow_negative_numbers = true)]
    dst_t: Option<f64>,
    /// Denominator smoothness override (defaults to --t)
    #[arg(long, allow_negative_numbers = true)]
    src_t: Option<f64>,
    /// Coefficient policy; default: last for the train families ex4/ex5, ones otherwise
    #[arg(long, value_enum)]
    policy: Option<PolicyKind>,
    /// Decay rate for --policy geometric (defaults to --t)
    #[arg(long, allow_negative_numbers = true)]
    rate: Option<f64>,
    /// Samples per axis (pins one shared grid for all scales)
    #[arg(long)]
    n: Option<usize>,
    /// Period per axis for --n; default 16 pi
    #[arg(long)]
    period: Option<f64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Serialize)]
struct ScanEnvelope {
    schema_version: u32,
    timestamp: u64,
    command: &'static str,
    report: ScanReport,
}

#[derive(Serialize)]
struct CorpusEnvelope {
    schema_version: u32,
    timestamp: u64,
    command: &'static str,
    report: CorpusReport,
}

/// Corpus of random band-limited spectra: empirical embedding constant.
fn cmd_scan_corpus(args: &ScanArgs, src: SpaceParams, dst: SpaceParams, count: usize) -> Result<i32> {
    let grid = match (args.n, args.period) {
        (None, None) => {
            let n = if args.d >= 3 { 128 } else { 256 };
            Grid::uniform(args.d, n, 16.0 * std::f64::consts::PI)?
        }
        (n, period) => Grid::uniform(
            args.d,
            n.unwrap_or(256),
            period.unwrap_or(16.0 * std::f64::consts::PI),
        )?,
    };
    let report = random_corpus_check(&grid, &src, &dst, count, args.seed)?;
    println!(
        "corpus of {} members (seed {}): max ratio {}, median {}",
        report.count,
        report.seed,
        sig12(report.max_ratio),
        sig12(report.median_ratio)
    );
    if let Some(v) = mixnorm::classifier_verdict(&src, &dst) {
        println!("classifier: {}", verdict_word(&v));
    }
    let mut csv = String::from("index,ratio\n");
    for (k, r) in report.ratios.iter().enumerate() {
        let _ = writeln!(csv, "{},{}", k, sig12(*r));
    }
    let envelope = CorpusEnvelope {
        schema_version: SCHEMA_VERSION,
        timestamp: timestamp(),
        command: "scan",
        report,
    };
    args.out.write(&envelope, &csv)?;
    Ok(0)
}

fn cmd_scan(args: ScanArgs) -> Result<i32> {
    let space_at = |scale: ScaleKind, t_override: Option<f64>| -> Result<SpaceParams> {
        let mut sp = args.space.params(scale, args.d)?;
        if let Some(t) = t_override {
            sp.t = t;
            sp.validate()?;
        }
        Ok(sp)
    };
    let src = space_at(args.src, args.src_t)?;
    let dst = space_at(args.dst, args.dst_t)?;
    if let Some(count) = args.corpus {
        return cmd_scan_corpus(&args, src, dst, count);
    }
    let family: TestFamily = args
        .family
        .as_deref()
        .ok_or_else(|| Error::InvalidArgument("scan needs --family or --corpus".into()))?
        .parse()?;
    if args.lmax < args.lmin + 2 {
        return Err(Error::DegenerateFit(format!(
            "scale range {}..={} has fewer than 3 points",
            args.lmin, args.lmax
        )));
    }
    let policy = match args.policy {
        Some(PolicyKind::Ones) => CoeffPolicy::Ones,
        Some(PolicyKind::Last) => CoeffPolicy::LastOnly,
        Some(PolicyKind::Geometric) => CoeffPolicy::Geometric {
            rate: args.rate.unwrap_or(args.space.t),
        },
        None => match family {
            TestFamily::Ex4 | TestFamily::Ex5 => CoeffPolicy::LastOnly,
            _ => CoeffPolicy::Ones,
        },
    };
    let pinned = if args.n.is_some() || args.period.is_some() {
        let n = args.n.unwrap_or(256);
        let period = args.period.unwrap_or(16.0 * std::f64::consts::PI);
        Some(Grid::uniform(args.d, n, period)?)
    } else {
        None
    };
    let scales: Vec<u32> = (args.lmin..=args.lmax).collect();
    let report = ratio_scan_on(family, policy, &src, &dst, &scales, pinned.as_ref())?;

    for pt in &report.points {
        println!(
            "l = {:2}  src {}  dst {}  ratio {}",
            pt.scale,
            sig12(pt.src_norm),
            sig12(pt.dst_norm),
            sig12(pt.ratio)
        );
    }
    println!(
        "slope {} +- {} against {} (residual rms {})",
        sig12(report.slope),
        sig12(report.slope_stderr),
        match family {
            TestFamily::Ex1 => "log2 l",
            _ => "l",
        },
        sig12(report.residual_rms)
    );
    if let Some(ps) = report.predicted_slope {
        println!("predicted slope {}", sig12(ps));
    }
    if let Some(v) = &report.verdict {
        let status = match report.consistent {
            Some(true) => "consistent",
            Some(false) => "inconsistent",
            None => "no growth prediction",
        };
        println!("classifier: {} ({status})", verdict_word(v));
    }

    let mut csv = String::from("l,abscissa,src_norm,dst_norm,ratio\n");
    for pt in &report.points {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            pt.scale,
            sig12(pt.abscissa),
            sig12(pt.src_norm),
            sig12(pt.dst_norm),
            sig12(pt.ratio)
        );
    }
    let envelope = ScanEnvelope {
        schema_version: SCHEMA_VERSION,
        timestamp: timestamp(),
        command: "scan",
        report,
    };
    args.out.write(&envelope, &csv)?;
    Ok(0)
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    /// reduced corpora and scale ranges, same tolerances
    Fast,
    /// the tolerances and sample counts of the acceptance criteria
    Full,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which flavor of the suite to run
    #[arg(long, value_enum, default_value = "full")]
    suite: Suite,
    /// Run a single criterion (1..=10) instead of all
    #[arg(long)]
    id: Option<u32>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Serialize)]
struct VerifyReport {
    schema_version: u32,
    timestamp: u64,
    command: &'static str,
    suite: &'static str,
    outcomes: Vec<CriterionOutcome>,
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let fast = args.suite == Suite::Fast;
    let outcomes = match args.id {
        Some(id) => vec![run_criterion(id, fast)?],
        None => run_all_criteria(fast)?,
    };
    let mut failed = 0;
    for out in &outcomes {
        println!("{}", out.summary());
        for line in &out.details {
            println!("    {line}");
        }
        if !out.pass {
            failed += 1;
        }
    }
    println!(
        "{} of {} criteria passed ({})",
        outcomes.len() - failed,
        outcomes.len(),
        if fast { "fast suite" } else { "full suite" }
    );

    let mut csv = String::from("id,title,pass,seconds\n");
    for out in &outcomes {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            out.id,
            csv_cell(&out.title),
            out.pass,
            sig12(out.seconds)
        );
    }
    let report = VerifyReport {
        schema_version: SCHEMA_VERSION,
        timestamp: timestamp(),
        command: "verify",
        suite: if fast { "fast" } else { "full" },
        outcomes,
    };
    args.out.write(&report, &csv)?;
    Ok(if failed == 0 { 0 } else { 1 })
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Norm(a) => cmd_norm(a),
        Cmd::Generate(a) => cmd_generate(a),
        Cmd::Region(a) => cmd_region(a),
        Cmd::Scan(a) => cmd_scan(a),
        Cmd::Verify(a) => cmd_verify(a),
    }
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}
