//! `volpoly`: realize volume triples as lattice polygons, tropical curves and
//! toric divisors, and check them.
//!
//! Exit codes: 0 on success, 1 on invalid input, 2 when an internal check
//! fails.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use volpoly::construct::{self, ConstructError, RealizationResult};
use volpoly::geom2d::{
    mixed_volume_polarization, mixed_volume_support, volume_polynomial, GeomError, LatticePolygon, VolumeTriple,
};
use volpoly::quadform::{reduce, QuadForm, QuadFormError, ReducedForm};
use volpoly::render::{render_curves, render_pair, ClipBox};
use volpoly::sweep::{sweep_realize, ExecMode};
use volpoly::toric::{realize_toric, ToricError};
use volpoly::tropical::{rat_string, realize_tropical, LiftSampler, TropicalError, TropicalPolynomial};

const RETRY_CAP_VAR: &str = "VOLPOLY_RETRY_CAP";

/// `println!` that stays quiet when stdout is closed early (e.g. `| head`).
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

#[derive(Parser, Debug)]
#[command(name = "volpoly", version, about = "Lattice polygon pairs with a prescribed volume polynomial")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct TripleArgs {
    #[arg(allow_negative_numbers = true)]
    a: i128,
    #[arg(allow_negative_numbers = true)]
    b: i128,
    #[arg(allow_negative_numbers = true)]
    c: i128,
}

impl TripleArgs {
    fn triple(&self) -> VolumeTriple {
        VolumeTriple::new(self.a, self.b, self.c)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lattice polygons P, Q with Vol(xP + yQ) = A x² + 2B xy + C y².
    Realize {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long)]
        json: bool,
        /// Write a drawing of the pair here.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Reduce the form A x² + 2B xy + C y² (positive coefficients, B² ≥ AC).
    Reduce {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long)]
        json: bool,
    },
    /// Mixed volume of a polygon pair, by both routines.
    Mixedvol {
        /// A pair file {"P": ..., "Q": ...}, or the file for P when Q is given.
        input: PathBuf,
        /// Polygon file for Q.
        second: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Coefficients (A, B, C) of the volume polynomial of a polygon pair.
    Volpoly {
        input: PathBuf,
        second: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Tropical curves whose intersection numbers are (A; B; C).
    Tropical {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        /// Drawing window `MIN_X,MIN_Y,MAX_X,MAX_Y`; defaults to the curve
        /// vertices plus a margin of 2.
        #[arg(long, value_name = "BOX", value_parser = parse_clip, allow_hyphen_values = true)]
        clip: Option<ClipBox>,
    },
    /// Fan and divisors D, E with intersection matrix [[A, B], [B, C]].
    Toric {
        #[command(flatten)]
        triple: TripleArgs,
        /// Refine the fan until every cone is unimodular.
        #[arg(long)]
        smooth: bool,
        #[arg(long)]
        json: bool,
    },
    /// Realize and verify every admissible triple in [0, N]³.
    Sweep {
        /// N, also accepted as `--bound`.
        #[arg(conflicts_with = "bound")]
        n: Option<u32>,
        #[arg(long)]
        bound: Option<u32>,
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        json: bool,
    },
    /// Draw a polygon pair file {"P": ..., "Q": ...} as SVG.
    Render {
        input: PathBuf,
        /// Output path; standard output when omitted.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
}

fn parse_clip(s: &str) -> Result<ClipBox, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        &[min_x, min_y, max_x, max_y] if min_x < max_x && min_y < max_y => {
            Ok(ClipBox { min_x, min_y, max_x, max_y })
        }
        _ => Err("expected MIN_X,MIN_Y,MAX_X,MAX_Y with MIN < MAX".into()),
    }
}

enum Failure {
    User(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::User(_) => 1,
            Failure::Internal(_) => 2,
        }
    }
}

type CmdResult = Result<(), Failure>;

impl From<GeomError> for Failure {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::MixedVolumeMismatch { .. } | GeomError::OddPolarization(_) => Failure::Internal(e.to_string()),
            _ => Failure::User(e.to_string()),
        }
    }
}

impl From<QuadFormError> for Failure {
    fn from(e: QuadFormError) -> Self {
        match e {
            QuadFormError::Internal(_) => Failure::Internal(e.to_string()),
            _ => Failure::User(e.to_string()),
        }
    }
}

impl From<ConstructError> for Failure {
    fn from(e: ConstructError) -> Self {
        match e {
            ConstructError::Geometry(g) => g.into(),
            ConstructError::Reduction(q) => q.into(),
            e if e.is_user_error() => Failure::User(e.to_string()),
            e => Failure::Internal(e.to_string()),
        }
    }
}

impl From<TropicalError> for Failure {
    fn from(e: TropicalError) -> Self {
        match e {
            TropicalError::Construct(c) => c.into(),
            TropicalError::Overflow => Failure::User(e.to_string()),
            e => Failure::Internal(e.to_string()),
        }
    }
}

impl From<ToricError> for Failure {
    fn from(e: ToricError) -> Self {
        match e {
            ToricError::Construct(c) => c.into(),
            ToricError::Geometry(g) => g.into(),
            e => Failure::Internal(e.to_string()),
        }
    }
}

fn print_json<T: Serialize + ?Sized>(value: &T) -> CmdResult {
    let s = serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    say!("{s}");
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> CmdResult {
    fs::write(path, contents).map_err(|e| Failure::User(format!("cannot write {}: {e}", path.display())))
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut s = String::new();
    let res = if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| s = t)
    };
    res.map_err(|e| Failure::User(format!("cannot read {}: {e}", path.display())))?;
    Ok(s)
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, path: &Path) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::User(format!("malformed JSON in {}: {e}", path.display())))
}

#[derive(Deserialize)]
struct PairFile {
    #[serde(rename = "P")]
    p: LatticePolygon,
    #[serde(rename = "Q")]
    q: LatticePolygon,
}

fn load_pair(input: &Path, second: Option<&Path>) -> Result<(LatticePolygon, LatticePolygon), Failure> {
    match second {
        None => {
            let pair: PairFile = parse_json(&read_input(input)?, input)?;
            Ok((pair.p, pair.q))
        }
        Some(second) => Ok((parse_json(&read_input(input)?, input)?, parse_json(&read_input(second)?, second)?)),
    }
}

#[derive(Serialize)]
struct RealizeOutput<'a> {
    #[serde(flatten)]
    result: &'a RealizationResult,
    verified: bool,
}

fn cmd_realize(triple: VolumeTriple, json: bool, svg: Option<&Path>) -> CmdResult {
    let r = construct::realize(triple)?;
    let report = construct::verify(&r.p, &r.q, triple);
    if !report.passed {
        return Err(Failure::Internal(format!("verification failed for {triple}: {:?}", report.computed)));
    }
    if let Some(path) = svg {
        write_file(path, &render_pair(&r.p, &r.q)?)?;
    }
    if json {
        print_json(&RealizeOutput { result: &r, verified: true })
    } else {
        say!("P = {}", r.p);
        say!("Q = {}", r.q);
        say!("case: {}", r.case_tag);
        say!("verified: Vol(P) = {}, V(P,Q) = {}, Vol(Q) = {}", triple.a, triple.b, triple.c);
        Ok(())
    }
}

fn cmd_reduce(triple: VolumeTriple, json: bool) -> CmdResult {
    let form = QuadForm::new(triple.a, triple.b, triple.c);
    let r = reduce(&form)?;
    if json {
        return print_json(&json!({
            "form": form,
            "reduced": r.reduced,
            "sign_convention": ReducedForm::SIGN_CONVENTION,
            "G": r.transform,
            "swapped": r.trace.swapped,
            "steps": r.trace.steps,
            "last_step_adjusted": r.trace.last_step_adjusted,
        }));
    }
    let ReducedForm { a, b, c } = r.reduced;
    let [[x1, x2], [y1, y2]] = r.transform.entries();
    say!("reduced: {a} x^2 + 2*{b} x y - {c} y^2");
    say!("G = [[{x1}, {x2}], [{y1}, {y2}]]");
    say!("steps: {:?}{}", r.trace.steps, if r.trace.last_step_adjusted { " (last adjusted)" } else { "" });
    Ok(())
}

fn cmd_mixedvol(input: &Path, second: Option<&Path>, json: bool) -> CmdResult {
    let (p, q) = load_pair(input, second)?;
    let pol = mixed_volume_polarization(&p, &q)?;
    let sup = mixed_volume_support(&p, &q)?;
    if pol != sup {
        return Err(Failure::Internal(format!("mixed volume routines disagree: {pol} vs {sup}")));
    }
    if json {
        print_json(&json!({ "mixed_volume": pol, "polarization": pol, "support": sup }))
    } else {
        say!("{pol}");
        Ok(())
    }
}

fn cmd_volpoly(input: &Path, second: Option<&Path>, json: bool) -> CmdResult {
    let (p, q) = load_pair(input, second)?;
    let t = volume_polynomial(&p, &q)?;
    if json {
        print_json(&t)
    } else {
        say!("{} x^2 + 2*{} x y + {} y^2", t.a, t.b, t.c);
        Ok(())
    }
}

fn sampler_from_env() -> Result<LiftSampler, Failure> {
    let sampler = LiftSampler::default();
    match std::env::var(RETRY_CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse::<u32>()
            .ok()
            .filter(|&n| n > 0)
            .map(|n| sampler.with_retry_cap(n))
            .ok_or_else(|| Failure::User(format!("{RETRY_CAP_VAR} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(sampler),
    }
}

fn polynomial_json(f: &TropicalPolynomial) -> Value {
    let terms: Vec<Value> =
        f.terms().iter().map(|t| json!({ "point": t.point, "lift": rat_string(&t.lift) })).collect();
    json!({ "terms": terms })
}

fn cmd_tropical(triple: VolumeTriple, seed: u64, json: bool, svg: Option<&Path>, clip: Option<ClipBox>) -> CmdResult {
    let sampler = sampler_from_env()?;
    let r = realize_tropical(triple, seed, &sampler)?;
    if r.numbers() != triple {
        return Err(Failure::Internal(format!("intersection numbers {} differ from {triple}", r.numbers())));
    }
    if let Some(path) = svg {
        let curves = [&r.curve_f, &r.curve_g];
        let clip = clip.unwrap_or_else(|| ClipBox::around(&curves, 2.0));
        write_file(path, &render_curves(&curves, clip))?;
    }
    if json {
        return print_json(&json!({
            "P": r.polygons.p,
            "Q": r.polygons.q,
            "f": polynomial_json(&r.f),
            "g": polynomial_json(&r.g),
            "curves": { "f": r.curve_f, "g": r.curve_g },
            "intersection_numbers": { "ff": r.self_f, "fg": r.mutual, "gg": r.self_g },
            "seed": r.seed,
            "attempts": r.attempts,
            "sampler": r.sampler,
        }));
    }
    {
        say!("(V_f, V_f) = {}, (V_f, V_g) = {}, (V_g, V_g) = {}", r.self_f, r.mutual, r.self_g);
        for (name, c) in [("V_f", &r.curve_f), ("V_g", &r.curve_g)] {
            say!(
                "{name}: {} vertices, {} bounded edges, {} rays, {} lines",
                c.vertices.len(),
                c.edges.len(),
                c.rays.len(),
                c.lines.len()
            );
        }
    }
    Ok(())
}

fn cmd_toric(triple: VolumeTriple, smooth: bool, json: bool) -> CmdResult {
    let r = realize_toric(triple, smooth)?;
    if r.intersection_matrix != [[triple.a, triple.b], [triple.b, triple.c]] {
        return Err(Failure::Internal(format!("intersection matrix {:?} differs from {triple}", r.intersection_matrix)));
    }
    if json {
        return print_json(&json!({
            "rays": r.fan.rays(),
            "divisors": { "D": r.d, "E": r.e },
            "intersection_matrix": r.intersection_matrix,
            "smooth": r.fan.is_unimodular(),
            "padded": r.padded,
        }));
    }
    let rays: Vec<String> = r.fan.rays().iter().map(|u| u.to_string()).collect();
    say!("rays: {}", rays.join(" "));
    say!("D = {:?}", r.d.coefficients);
    say!("E = {:?}", r.e.coefficients);
    say!("intersection matrix: {:?}", r.intersection_matrix);
    say!("smooth: {}", r.fan.is_unimodular());
    Ok(())
}

fn cmd_sweep(bound: u32, parallel: bool, json: bool) -> CmdResult {
    let mode = if parallel { ExecMode::Parallel } else { ExecMode::Serial };
    let report = sweep_realize(bound, mode);
    if json {
        print_json(&report)?;
    } else {
        say!(
            "bound {}: {} triples checked, {} failures in {:.3}s",
            report.bound,
            report.checked,
            report.failures.len(),
            report.wall_time.as_secs_f64()
        );
    }
    match report.failures.first() {
        None => Ok(()),
        Some(f) => Err(Failure::Internal(format!("realization of {} failed: {}", f.triple, f.message))),
    }
}

fn cmd_render(input: &Path, svg: Option<&Path>) -> CmdResult {
    let (p, q) = load_pair(input, None)?;
    let drawing = render_pair(&p, &q)?;
    match svg {
        Some(path) => write_file(path, &drawing),
        None => {
            use std::io::Write as _;
            let _ = std::io::stdout().lock().write_all(drawing.as_bytes());
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Realize { triple, json, svg } => cmd_realize(triple.triple(), json, svg.as_deref()),
        Command::Reduce { triple, json } => cmd_reduce(triple.triple(), json),
        Command::Mixedvol { input, second, json } => cmd_mixedvol(&input, second.as_deref(), json),
        Command::Volpoly { input, second, json } => cmd_volpoly(&input, second.as_deref(), json),
        Command::Tropical { triple, seed, json, svg, clip } => {
            cmd_tropical(triple.triple(), seed, json, svg.as_deref(), clip)
        }
        Command::Toric { triple, smooth, json } => cmd_toric(triple.triple(), smooth, json),
        Command::Sweep { n, bound, parallel, json } => cmd_sweep(n.or(bound).unwrap_or(20), parallel, json),
        Command::Render { input, svg } => cmd_render(&input, svg.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Failure::User(m) | Failure::Internal(m) => m,
            };
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}
