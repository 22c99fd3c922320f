use std::io::Write as _;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vdc::asym::{component_bracket, BracketConfig, DEFAULT_BUDGET};
use vdc::disc::{SigmaSequence, SwapSchedule};
use vdc::hammersley::{brute_star_2d, points, star_formula_term, HammersleySpec};
use vdc::numeric::parse_rational;
use vdc::perm::{affine, carlitz2, faure_omega, fractional_affine, intricate, Permutation};
use vdc::psi::{Component, PsiTable};
use vdc::report::{self, DiscFormat};
use vdc::search::{search, SearchConfig};
use vdc::verify::{self, Profile};

/// Relative `--output` paths resolve against this directory when set.
const OUTPUT_DIR_ENV: &str = "VDC_OUTPUT_DIR";

#[derive(Parser)]
#[command(
    name = "vdc",
    version,
    about = "Exact discrepancy tools for generalized van der Corput sequences"
)]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Points of a sequence as `n,value_num,value_den`.
    Gen(GenArgs),
    /// Exact discrepancies `N,Dplus,Dminus,D,Dstar`.
    Disc(DiscArgs),
    /// Piecewise-affine ψ as CSV (or SVG).
    Psi(PsiArgs),
    /// Certified bracket for the asymptotic constant α.
    Alpha(AlphaArgs),
    /// Permutations with max ψ below a threshold.
    Search(SearchArgs),
    /// Two-dimensional Hammersley set, formula term and exact star discrepancy.
    Hammersley(HammersleyArgs),
    /// Build a permutation from one of the families.
    Perm(PermArgs),
    /// Run the named reproduction checks.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct PermSource {
    /// Permutation as comma-separated images, e.g. 0,2,1.
    #[arg(long, allow_hyphen_values = true)]
    perm: Option<String>,
    /// File with one permutation per line; several lines give the digit
    /// permutations σ_0, σ_1, … with the identity afterwards.
    #[arg(long)]
    perm_file: Option<PathBuf>,
    /// Expected base; checked against the permutation length.
    #[arg(long)]
    base: Option<usize>,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SeqArgs {
    #[command(flatten)]
    source: PermSource,
    /// Swap schedule: none, faure-a, or periodic:1,0,… (1 keeps σ, 0 uses τ∘σ).
    #[arg(long, default_value = "none")]
    swap: String,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    seq: SeqArgs,
    /// Indices a..b (inclusive) or a count K meaning 0..K-1.
    #[arg(long = "N", value_name = "RANGE")]
    n: String,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct DiscArgs {
    #[command(flatten)]
    seq: SeqArgs,
    /// Point counts a..b (inclusive) or a single N.
    #[arg(long = "N", value_name = "RANGE")]
    n: String,
    /// Append float columns.
    #[arg(long)]
    float: bool,
    /// Divide by N when printing.
    #[arg(long)]
    normalized: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum Comp {
    Plus,
    Minus,
    Total,
}

impl From<Comp> for Component {
    fn from(c: Comp) -> Component {
        match c {
            Comp::Plus => Component::Plus,
            Comp::Minus => Component::Minus,
            Comp::Total => Component::Total,
        }
    }
}

#[derive(Args)]
struct PsiArgs {
    #[command(flatten)]
    source: PermSource,
    #[arg(long, value_enum, default_value = "total")]
    component: Comp,
    /// Piece list as CSV (the default).
    #[arg(long)]
    csv: bool,
    /// SVG plot on an 800×400 viewport instead of CSV.
    #[arg(long, conflicts_with = "csv")]
    svg: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct AlphaArgs {
    #[command(flatten)]
    source: PermSource,
    #[arg(long, value_enum, default_value = "total")]
    component: Comp,
    /// Largest n for the max F_n / n upper bounds.
    #[arg(long, default_value_t = 4)]
    n_max: usize,
    /// Longest digit cycle scanned for the lower bound.
    #[arg(long, default_value_t = 3)]
    cycle_depth: usize,
    /// Node budget per n.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Skip the potential certificate.
    #[arg(long)]
    no_certificate: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_name = "B")]
    base: usize,
    /// Strict upper bound on max ψ, as num/den.
    #[arg(long)]
    threshold: String,
    /// Enumerate every permutation instead of one per symmetry class.
    #[arg(long)]
    no_symmetry: bool,
    /// Score survivors by max F_2 / 2 and sort by it.
    #[arg(long)]
    stage2: bool,
    /// Node budget; an exhausted search prints its partial result and exits 3.
    #[arg(long, default_value_t = 50_000_000)]
    budget: u64,
    #[arg(long, value_enum, default_value = "total")]
    component: Comp,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct HammersleyArgs {
    /// Base of `id` and `tau` entries (inferred from literal permutations).
    #[arg(long)]
    base: Option<usize>,
    /// Expected number of digit permutations.
    #[arg(long)]
    m: Option<usize>,
    /// Digit permutations as a list of `id` and `tau`.
    #[arg(long)]
    vec: Option<String>,
    /// One entry per line: `id`, `tau`, or a permutation.
    #[arg(long, conflicts_with = "vec")]
    vec_file: Option<PathBuf>,
    /// Print only the report line.
    #[arg(long)]
    no_points: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PermFamily {
    /// ω_b.
    #[arg(long, value_name = "B")]
    omega: Option<usize>,
    /// Identity of size b.
    #[arg(long, value_name = "B")]
    identity: Option<usize>,
    /// τ_b(k) = b − 1 − k.
    #[arg(long, value_name = "B")]
    tau: Option<usize>,
    /// x ↦ a0·x + a1 over 𝔽_p.
    #[arg(long, value_name = "P,A0,A1")]
    affine: Option<String>,
    /// x ↦ (a0·x + a1)^{p−2} + a2.
    #[arg(long, value_name = "P,A0,A1,A2")]
    fractional: Option<String>,
    /// x ↦ ((a0·x + a1)^{p−2} + a2)^{p−2} + a3.
    #[arg(long, value_name = "P,A0,A1,A2,A3")]
    carlitz2: Option<String>,
    /// Intrication of two permutations.
    #[arg(long, num_args = 2, value_names = ["SIGMA", "TAU"])]
    intricate: Option<Vec<String>>,
    /// τ∘σ.
    #[arg(long, value_name = "SIGMA")]
    swapped: Option<String>,
    /// σ⁻¹.
    #[arg(long, value_name = "SIGMA")]
    inverse: Option<String>,
}

#[derive(Args)]
struct PermArgs {
    #[command(flatten)]
    family: PermFamily,
}

#[derive(Args)]
struct VerifyArgs {
    /// Fast subset of the checks (the default).
    #[arg(long, conflicts_with = "full")]
    quick: bool,
    /// Every check, including the larger parameter ranges.
    #[arg(long)]
    full: bool,
    #[command(flatten)]
    out: Output,
}

enum Failure {
    Usage(String),
    Lib(vdc::Error),
    Io(String),
    Check(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Lib(vdc::Error::ResourceLimit(_)) | Failure::Io(_) => 3,
            Failure::Lib(vdc::Error::Inconsistent(_)) | Failure::Check(_) => 4,
            Failure::Lib(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Check(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

impl From<vdc::Error> for Failure {
    fn from(e: vdc::Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Gen(a) => cmd_gen(a),
        Command::Disc(a) => cmd_disc(a),
        Command::Psi(a) => cmd_psi(a),
        Command::Alpha(a) => cmd_alpha(a),
        Command::Search(a) => cmd_search(a),
        Command::Hammersley(a) => cmd_hammersley(a),
        Command::Perm(a) => cmd_perm(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn emit(out: &Output, text: &str) -> Outcome {
    match &out.output {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Io(e.to_string()))
        }
        Some(path) => {
            let path = match std::env::var_os(OUTPUT_DIR_ENV) {
                Some(dir) if path.is_relative() => Path::new(&dir).join(path),
                _ => path.clone(),
            };
            std::fs::write(&path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
        }
    }
}

fn read_lines(path: &Path) -> Result<Vec<String>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

fn parse_perm(s: &str) -> Result<Permutation, Failure> {
    Ok(s.parse::<Permutation>()?)
}

fn check_base(perms: &[Permutation], base: Option<usize>) -> Outcome {
    let b = perms.first().map(Permutation::base);
    if let Some(p) = perms.iter().find(|p| Some(p.base()) != b) {
        return Err(vdc::Error::InvalidParameter(format!(
            "mixed bases: {p} is not in base {}",
            b.unwrap_or(0)
        ))
        .into());
    }
    match (base, b) {
        (Some(want), Some(got)) if want != got => Err(vdc::Error::InvalidParameter(format!(
            "--base {want} does not match permutation length {got}"
        ))
        .into()),
        _ => Ok(()),
    }
}

fn load_perms(src: &PermSource) -> Result<Vec<Permutation>, Failure> {
    let perms = match (&src.perm, &src.perm_file) {
        (Some(p), None) => vec![parse_perm(p)?],
        (None, Some(f)) => read_lines(f)?
            .iter()
            .map(|l| parse_perm(l))
            .collect::<Result<Vec<_>, _>>()?,
        (None, None) => {
            return Err(Failure::Usage(
                "one of --perm or --perm-file is required".into(),
            ))
        }
        (Some(_), Some(_)) => {
            return Err(Failure::Usage(
                "--perm and --perm-file are exclusive".into(),
            ))
        }
    };
    if perms.is_empty() {
        return Err(Failure::Usage("permutation file is empty".into()));
    }
    check_base(&perms, src.base)?;
    Ok(perms)
}

fn load_single(src: &PermSource) -> Result<Permutation, Failure> {
    let mut perms = load_perms(src)?;
    if perms.len() != 1 {
        return Err(Failure::Usage(
            "this command takes exactly one permutation".into(),
        ));
    }
    Ok(perms.remove(0))
}

fn parse_schedule(s: &str) -> Result<Option<SwapSchedule>, Failure> {
    match s {
        "none" => Ok(None),
        "faure-a" => Ok(Some(SwapSchedule::FaureA)),
        _ => {
            let bits = s
                .strip_prefix("periodic:")
                .ok_or_else(|| Failure::Usage(format!("unknown swap schedule {s:?}")))?;
            let pattern = bits
                .split(',')
                .map(|t| match t.trim() {
                    "1" => Ok(true),
                    "0" => Ok(false),
                    other => Err(Failure::Usage(format!(
                        "schedule entries are 0 or 1, got {other:?}"
                    ))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Some(SwapSchedule::Periodic(pattern)))
        }
    }
}

fn load_sequence(a: &SeqArgs) -> Result<SigmaSequence, Failure> {
    let perms = load_perms(&a.source)?;
    let schedule = parse_schedule(&a.swap)?;
    match (perms.len(), schedule) {
        (1, None) => Ok(SigmaSequence::constant(perms[0].clone())),
        (1, Some(s)) => Ok(SigmaSequence::swapped(perms[0].clone(), s)?),
        (_, None) => {
            let id = Permutation::identity(perms[0].base())?;
            Ok(SigmaSequence::explicit(perms, id)?)
        }
        (_, Some(_)) => Err(Failure::Usage(
            "a swap schedule needs a single permutation".into(),
        )),
    }
}

/// `a..b` (inclusive) or a single value handled by `single`.
fn parse_range(
    s: &str,
    single: impl Fn(u128) -> RangeInclusive<u128>,
) -> Result<RangeInclusive<u128>, Failure> {
    let num = |t: &str| {
        t.trim()
            .parse::<u128>()
            .map_err(|_| Failure::Usage(format!("bad range {s:?}")))
    };
    let r = match s.split_once("..") {
        Some((a, b)) => num(a)?..=num(b)?,
        None => single(num(s)?),
    };
    if r.is_empty() {
        return Err(Failure::Usage(format!("empty range {s:?}")));
    }
    Ok(r)
}

fn cmd_gen(a: GenArgs) -> Outcome {
    let seq = load_sequence(&a.seq)?;
    let range = parse_range(&a.n, |k| {
        if k == 0 {
            RangeInclusive::new(1, 0)
        } else {
            0..=k - 1
        }
    })?;
    emit(&a.out, &report::gen_csv(&seq, range)?)
}

fn cmd_disc(a: DiscArgs) -> Outcome {
    let seq = load_sequence(&a.seq)?;
    let range = parse_range(&a.n, |n| n..=n)?;
    if *range.start() == 0 {
        return Err(Failure::Usage("N starts at 1".into()));
    }
    let format = DiscFormat {
        float: a.float,
        normalized: a.normalized,
    };
    emit(&a.out, &report::disc_csv(&seq, range, format)?)
}

fn cmd_psi(a: PsiArgs) -> Outcome {
    let sigma = load_single(&a.source)?;
    let f = PsiTable::new(&sigma).function(a.component.into());
    let text = if a.svg { f.to_svg() } else { f.to_csv() };
    emit(&a.out, &text)
}

fn cmd_alpha(a: AlphaArgs) -> Outcome {
    let perms = load_perms(&a.source)?;
    let config = BracketConfig {
        n_max: a.n_max,
        cycle_depth: a.cycle_depth,
        budget: a.budget,
        certificate: !a.no_certificate,
        ..BracketConfig::default()
    };
    let mut text = format!("{}\n", report::ALPHA_HEADER);
    for sigma in &perms {
        let br = component_bracket(&PsiTable::new(sigma), a.component.into(), &config)?;
        text.push_str(&report::alpha_row(&br));
        text.push('\n');
    }
    emit(&a.out, &text)
}

fn cmd_search(a: SearchArgs) -> Outcome {
    let threshold = parse_rational(&a.threshold)?;
    let cfg = SearchConfig {
        symmetry_reduction: !a.no_symmetry,
        node_budget: a.budget,
        stage2: a.stage2,
        prune_on: a.component.into(),
        ..SearchConfig::new(a.base, threshold)
    };
    let result = search(&cfg)?;
    emit(&a.out, &report::search_csv(&result))?;
    if !result.complete {
        return Err(vdc::Error::ResourceLimit(format!(
            "node budget {} exhausted after {} nodes; survivors listed are partial",
            a.budget, result.stats.nodes
        ))
        .into());
    }
    Ok(())
}

fn hammersley_entry(token: &str, base: Option<usize>) -> Result<Permutation, Failure> {
    let need = || Failure::Usage(format!("--base is required for {token:?}"));
    match token {
        "id" => Ok(Permutation::identity(base.ok_or_else(need)?)?),
        "tau" => Ok(Permutation::tau(base.ok_or_else(need)?)?),
        other => parse_perm(other),
    }
}

fn cmd_hammersley(a: HammersleyArgs) -> Outcome {
    let sigmas: Vec<Permutation> = match (&a.vec, &a.vec_file) {
        (Some(v), None) => v
            .split(',')
            .map(|t| hammersley_entry(t.trim(), a.base))
            .collect::<Result<_, _>>()?,
        (None, Some(f)) => read_lines(f)?
            .iter()
            .map(|l| hammersley_entry(l, a.base))
            .collect::<Result<_, _>>()?,
        _ => {
            return Err(Failure::Usage(
                "one of --vec or --vec-file is required".into(),
            ))
        }
    };
    check_base(&sigmas, a.base)?;
    if let Some(m) = a.m {
        if m != sigmas.len() {
            return Err(vdc::Error::InvalidParameter(format!(
                "--m {m} but {} permutations given",
                sigmas.len()
            ))
            .into());
        }
    }
    let spec = HammersleySpec::new(sigmas)?;
    let pts = points(&spec)?;
    let term = star_formula_term(&spec)?;
    let brute = brute_star_2d(&pts)?;
    let mut text = String::new();
    if !a.no_points {
        text.push_str(&report::hammersley_points_csv(&pts));
        text.push('\n');
    }
    text.push_str(report::HAMMERSLEY_HEADER);
    text.push('\n');
    text.push_str(&report::hammersley_report_row(&term, &brute));
    text.push('\n');
    emit(&a.out, &text)
}

fn parse_args<const N: usize>(s: &str) -> Result<[u64; N], Failure> {
    let parts: Vec<u64> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Failure::Usage(format!("bad integer list {s:?}")))
        })
        .collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|_| Failure::Usage(format!("expected {N} integers in {s:?}")))
}

fn cmd_perm(a: PermArgs) -> Outcome {
    let f = a.family;
    let p = if let Some(b) = f.omega {
        faure_omega(b)?
    } else if let Some(b) = f.identity {
        Permutation::identity(b)?
    } else if let Some(b) = f.tau {
        Permutation::tau(b)?
    } else if let Some(s) = &f.affine {
        let [p, a0, a1] = parse_args(s)?;
        affine(p, a0, a1)?
    } else if let Some(s) = &f.fractional {
        let [p, a0, a1, a2] = parse_args(s)?;
        fractional_affine(p, a0, a1, a2)?
    } else if let Some(s) = &f.carlitz2 {
        let [p, a0, a1, a2, a3] = parse_args(s)?;
        carlitz2(p, a0, a1, a2, a3)?
    } else if let Some(pair) = &f.intricate {
        intricate(&parse_perm(&pair[0])?, &parse_perm(&pair[1])?)
    } else if let Some(s) = &f.swapped {
        parse_perm(s)?.swapped()
    } else if let Some(s) = &f.inverse {
        parse_perm(s)?.inverse()
    } else {
        return Err(Failure::Usage("choose a permutation family".into()));
    };
    emit(&Output { output: None }, &format!("{p}\n"))
}

fn cmd_verify(a: VerifyArgs) -> Outcome {
    let profile = if a.full {
        Profile::Full
    } else {
        Profile::Quick
    };
    let report = verify::run(profile);
    emit(&a.out, &report.to_csv())?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "failed checks: {}",
            report.failures().join(", ")
        )))
    }
}
