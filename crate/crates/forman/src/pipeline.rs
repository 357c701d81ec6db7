//! Loading inputs and running gradient, Morse complex and homology stages.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use forman_core::builders::{flag_complex, vietoris_rips, Graph, PointCloud};
use forman_core::gradient::{validate_gradient, GradientReport, GradientStats, Verdict};
use forman_core::morse::{alternating_sum, betti_z2, CompressionStats, MorseOptions};
use forman_core::{BuildStats, FormanGradient, IaStarComplex, MorseComplex};

use crate::error::{AppError, AppResult};
use crate::formats::{gradient_dump, morse_dot, morse_file};
use crate::io::{parse_edges, parse_f0, parse_points, parse_top, read_file};
use crate::parallel::{forman_gradient_parallel, morse_complex_parallel, thread_pool};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum InputKind {
    /// `.top` complex file
    Top,
    /// `.pts` point cloud (needs an epsilon)
    Points,
    /// `.edg` edge list, read as a flag complex
    Graph,
}

impl InputKind {
    pub fn from_extension(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()? {
            "top" => Some(InputKind::Top),
            "pts" => Some(InputKind::Points),
            "edg" => Some(InputKind::Graph),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct InputSpec {
    pub path: PathBuf,
    pub kind: Option<InputKind>,
    pub epsilon: Option<f64>,
    pub f0: Option<PathBuf>,
}

pub fn load_complex(spec: &InputSpec) -> AppResult<(IaStarComplex, BuildStats)> {
    let kind = spec
        .kind
        .or_else(|| InputKind::from_extension(&spec.path))
        .ok_or_else(|| {
            AppError::Usage(format!(
                "cannot infer the input kind of {}; pass --kind",
                spec.path.display()
            ))
        })?;
    if spec.epsilon.is_some() != (kind == InputKind::Points) {
        return Err(AppError::Usage(
            "--epsilon is required for point inputs and only for them".into(),
        ));
    }
    let text = read_file(&spec.path)?;
    let f0 = match &spec.f0 {
        Some(p) => Some(parse_f0(&read_file(p)?)?),
        None => None,
    };
    let (complex, stats) = match kind {
        InputKind::Top => {
            let file = parse_top(&text)?;
            IaStarComplex::build(file.vertex_count, file.tops, f0.or(file.f0))?
        }
        InputKind::Points => {
            let cloud = PointCloud::new(&parse_points(&text)?)?;
            let (k, stats) = vietoris_rips(&cloud, spec.epsilon.expect("checked above"))?;
            with_f0(k, stats, f0)?
        }
        InputKind::Graph => {
            let (n, edges) = parse_edges(&text)?;
            let (k, stats) = flag_complex(&Graph::new(n, &edges)?)?;
            with_f0(k, stats, f0)?
        }
    };
    Ok((complex, stats))
}

fn with_f0(
    k: IaStarComplex,
    stats: BuildStats,
    f0: Option<Vec<f64>>,
) -> AppResult<(IaStarComplex, BuildStats)> {
    match f0 {
        None => Ok((k, stats)),
        Some(f0) => {
            let (k, _) = IaStarComplex::build(k.vertex_count(), k.tops().to_vec(), Some(f0))?;
            Ok((k, stats))
        }
    }
}

/// Everything a pipeline run produces. All strings are independent of the
/// thread count; timings are kept apart.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub gradient: FormanGradient,
    pub morse: MorseComplex,
    pub gradient_dump: String,
    pub morse_file: String,
    pub morse_dot: String,
    pub report: String,
    pub timings: Vec<(&'static str, Duration)>,
}

pub fn run_pipeline(
    complex: &IaStarComplex,
    threads: usize,
    validate: bool,
) -> AppResult<PipelineOutput> {
    let pool = thread_pool(threads)?;
    let mut timings = Vec::new();

    let start = Instant::now();
    let (gradient, stats) = forman_gradient_parallel(complex, &pool)?;
    timings.push(("gradient", start.elapsed()));

    let checks = if validate {
        let start = Instant::now();
        let report = validate_gradient(complex, &gradient);
        timings.push(("validation", start.elapsed()));
        if !report.passed() {
            return Err(AppError::Validation(format_checks(&report)));
        }
        Some(report)
    } else {
        None
    };

    let start = Instant::now();
    let options = MorseOptions {
        validate: false,
        ..MorseOptions::default()
    };
    let morse = morse_complex_parallel(complex, &gradient, options, &pool)?;
    timings.push(("morse complex", start.elapsed()));

    let start = Instant::now();
    let betti = betti_z2(&morse)?;
    timings.push(("homology", start.elapsed()));

    let report = format_report(complex, &stats, &morse, &betti.0, checks.as_ref());
    Ok(PipelineOutput {
        gradient_dump: gradient_dump(complex, &gradient),
        morse_file: morse_file(&morse),
        morse_dot: morse_dot(&morse),
        gradient,
        morse,
        report,
        timings,
    })
}

fn tuple(values: &[u64]) -> String {
    let parts: Vec<String> = values.iter().map(u64::to_string).collect();
    format!("({})", parts.join(", "))
}

fn verdict(v: &Verdict) -> String {
    match v {
        Verdict::Pass => "PASS".into(),
        Verdict::Fail(msg) => format!("FAIL ({msg})"),
    }
}

pub fn format_checks(report: &GradientReport) -> String {
    format!(
        "matching {}, acyclic {}, filtered {}",
        verdict(&report.matching),
        verdict(&report.acyclic),
        verdict(&report.filtered)
    )
}

fn format_report(
    complex: &IaStarComplex,
    stats: &GradientStats,
    morse: &MorseComplex,
    betti: &[u64],
    checks: Option<&GradientReport>,
) -> String {
    let width = complex.dim() + 1;
    let pad = |v: &[u64]| {
        let mut v = v.to_vec();
        v.resize(width.max(v.len()), 0);
        v
    };
    let counts = pad(&stats.simplices_per_dim);
    let critical = pad(&morse.cells_per_dim());
    let betti = pad(betti);
    let chi = alternating_sum(&counts);
    let chi_c = alternating_sum(&critical);
    let inequalities = critical.iter().zip(&betti).all(|(c, b)| c >= b);
    let compression = CompressionStats::new(counts.iter().sum(), critical.iter().sum());

    let mut out = String::new();
    writeln!(out, "vertices: {}", complex.vertex_count()).unwrap();
    writeln!(out, "top simplices: {}", complex.tops().len()).unwrap();
    writeln!(out, "dimension: {}", complex.dim()).unwrap();
    writeln!(out, "simplices per dimension: {}", tuple(&counts)).unwrap();
    writeln!(out, "critical cells c: {}", tuple(&critical)).unwrap();
    writeln!(
        out,
        "gradient pairs per dimension: {}",
        tuple(&pad(&stats.pairs_per_dim))
    )
    .unwrap();
    writeln!(out, "betti numbers (Z/2): {}", tuple(&betti)).unwrap();
    writeln!(
        out,
        "euler characteristic: simplices {chi}, critical cells {chi_c}: {}",
        if chi == chi_c { "PASS" } else { "FAIL" }
    )
    .unwrap();
    writeln!(
        out,
        "morse inequalities c_k >= b_k: {}",
        if inequalities { "PASS" } else { "FAIL" }
    )
    .unwrap();
    match checks {
        Some(r) => writeln!(out, "gradient checks: {}", format_checks(r)).unwrap(),
        None => writeln!(out, "gradient checks: skipped").unwrap(),
    }
    writeln!(out, "morse arcs: {}", morse.arcs().len()).unwrap();
    writeln!(
        out,
        "compression: {} simplices / {} cells = {:.2}x (critical fraction {:.4}%)",
        compression.simplices,
        compression.critical,
        compression.ratio,
        100.0 * compression.critical as f64 / compression.simplices.max(1) as f64
    )
    .unwrap();
    out
}

pub fn format_timings(timings: &[(&'static str, Duration)]) -> String {
    let mut out = String::from("timings:\n");
    for (stage, d) in timings {
        writeln!(out, "  {stage}: {:.3} ms", d.as_secs_f64() * 1e3).unwrap();
    }
    out
}
