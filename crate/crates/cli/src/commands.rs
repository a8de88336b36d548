use std::path::Path;

use ifs_lab::certificate::{certify_with_periods, chain_disk, verify_chain, CertificateReport};
use ifs_lab::ifs::{attractor_sample, instar_disks, Alphabet};
use ifs_lab::landmarks::{all_landmarks, landmark, period_three_chain_exists, sector_inequalities, sector_s_contains, Landmark};
use ifs_lab::numerics::{newton_root, Disk};
use ifs_lab::paramspace::{escape_grid, EscapeGrid};
use ifs_lab::{Complex, ParamSet, RationalTypeSeries};
use serde::{Deserialize, Serialize};

use crate::args::{AttractorArgs, CertifyArgs, LandmarksArgs, Overlay, RenderArgs};
use crate::ppm::{escape_shade, Image};
use crate::report::{GridSummary, Payload, ReportEnvelope};
use crate::{CliError, EXIT_EXPECTATION, EXIT_OK};

const BLACK: [u8; 3] = [0, 0, 0];
const WHITE: [u8; 3] = [255, 255, 255];
const GRAY: [u8; 3] = [160, 160, 160];
const GREEN: [u8; 3] = [0, 160, 60];

fn thread_pool(threads: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {threads} worker threads: {e}")))
}

fn write_report(path: Option<&Path>, envelope: &ReportEnvelope) -> Result<(), CliError> {
    let json = envelope.to_json();
    match path {
        Some(p) => std::fs::write(p, json + "\n")?,
        None => println!("{json}"),
    }
    Ok(())
}

/// Escape-depth grid for `args`, computed on a pool of `args.threads` workers.
pub fn render_grid(args: &RenderArgs) -> Result<EscapeGrid, CliError> {
    let pool = thread_pool(args.threads)?;
    Ok(pool.install(|| escape_grid(args.window, args.px.width, args.px.height, args.set, args.depth)))
}

pub fn grid_image(grid: &EscapeGrid) -> Image {
    let gray: Vec<u8> = grid.values.iter().map(|&v| escape_shade(v, grid.depth)).collect();
    Image::from_gray(grid.width, grid.height, &gray)
}

pub fn render(args: &RenderArgs, argv: Vec<String>) -> Result<i32, CliError> {
    if args.depth == 0 {
        return Err(CliError::Usage("depth must be at least 1".into()));
    }
    let grid = render_grid(args)?;
    grid_image(&grid).write_to(&args.out)?;
    let survived = grid.values.iter().filter(|&&v| v == 0).count();
    let summary = GridSummary {
        window: grid.window,
        width: grid.width,
        height: grid.height,
        depth: grid.depth,
        set: grid.set,
        survived,
        escaped: grid.values.len() - survived,
        output: args.out.display().to_string(),
    };
    eprintln!("{}: {} of {} pixels survive depth {}", summary.output, survived, grid.values.len(), grid.depth);
    if let Some(path) = &args.report {
        write_report(Some(path), &ReportEnvelope::new(argv, Payload::Grid(summary)))?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extent {
    pub min_re: f64,
    pub max_re: f64,
    pub min_im: f64,
    pub max_im: f64,
}

impl Extent {
    pub fn of_points(points: &[Complex]) -> Extent {
        points.iter().fold(
            Extent { min_re: f64::INFINITY, max_re: f64::NEG_INFINITY, min_im: f64::INFINITY, max_im: f64::NEG_INFINITY },
            |e, z| Extent {
                min_re: e.min_re.min(z.re),
                max_re: e.max_re.max(z.re),
                min_im: e.min_im.min(z.im),
                max_im: e.max_im.max(z.im),
            },
        )
    }

    fn include_disk(&mut self, d: &Disk) {
        self.min_re = self.min_re.min(d.center.re - d.radius);
        self.max_re = self.max_re.max(d.center.re + d.radius);
        self.min_im = self.min_im.min(d.center.im - d.radius);
        self.max_im = self.max_im.max(d.center.im + d.radius);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttractorSummary {
    #[serde(with = "ifs_lab::complex_serde")]
    pub lambda: Complex,
    pub depth: usize,
    pub alphabet: Alphabet,
    pub points: usize,
    pub extent: Extent,
    pub overlay_disks: Vec<Disk>,
    pub output: String,
}

/// Maps the plane onto pixels with a uniform scale, padding the extent by 5%.
struct Frame {
    center: Complex,
    scale: f64,
    width: usize,
    height: usize,
}

impl Frame {
    fn fit(e: &Extent, width: usize, height: usize) -> Frame {
        let span_re = (e.max_re - e.min_re).max(1e-9);
        let span_im = (e.max_im - e.min_im).max(1e-9);
        let scale = 1.05 * (span_re / width as f64).max(span_im / height as f64);
        let center = Complex::new(0.5 * (e.min_re + e.max_re), 0.5 * (e.min_im + e.max_im));
        Frame { center, scale, width, height }
    }

    fn pixel(&self, z: Complex) -> (i64, i64) {
        let x = (z.re - self.center.re) / self.scale + 0.5 * self.width as f64;
        let y = 0.5 * self.height as f64 - (z.im - self.center.im) / self.scale;
        (x.floor() as i64, y.floor() as i64)
    }

    fn circle(&self, img: &mut Image, d: &Disk, color: [u8; 3]) {
        let steps = ((std::f64::consts::TAU * d.radius / self.scale).ceil() as usize).clamp(16, 20_000);
        for k in 0..steps {
            let t = std::f64::consts::TAU * k as f64 / steps as f64;
            let (x, y) = self.pixel(d.center + Complex::from_polar(d.radius, t));
            img.put(x, y, color);
        }
    }
}

fn attractor_lambda(args: &AttractorArgs) -> Result<Complex, CliError> {
    if let Some(l) = args.lambda {
        return Ok(l.0);
    }
    match (&args.series, args.seed) {
        (Some(f), Some(seed)) => Ok(newton_root(&f.numerator_polynomial(), seed.0)?),
        _ => Err(CliError::Usage("give --lambda, or --series together with --seed".into())),
    }
}

/// Samples the attractor and draws it with the requested overlay.
pub fn attractor_image(args: &AttractorArgs) -> Result<(Image, AttractorSummary), CliError> {
    let lambda = attractor_lambda(args)?;
    let pool = thread_pool(args.threads)?;
    let sample = pool.install(|| attractor_sample(lambda, args.depth, args.alphabet))?;

    let (overlay_disks, color) = match args.overlay {
        Overlay::None => (Vec::new(), GRAY),
        Overlay::Instar(level) => {
            let disks = pool.install(|| instar_disks(level, lambda, args.alphabet))?;
            (disks.into_iter().map(|d| d.disk).collect(), GRAY)
        }
        Overlay::Chain => {
            let f: &RationalTypeSeries =
                args.series.as_ref().ok_or_else(|| CliError::Usage("the chain overlay needs --series".into()))?;
            let mut disks = Vec::new();
            for n in 0..args.disks {
                let b = chain_disk(f, lambda, n)?;
                if b.exists() {
                    disks.push(b.as_disk());
                }
            }
            (disks, GREEN)
        }
    };

    let mut extent = Extent::of_points(&sample.points);
    for d in &overlay_disks {
        extent.include_disk(d);
    }
    let frame = Frame::fit(&extent, args.px.width, args.px.height);
    let mut img = Image::filled(args.px.width, args.px.height, WHITE);
    for d in &overlay_disks {
        frame.circle(&mut img, d, color);
    }
    for &z in &sample.points {
        let (x, y) = frame.pixel(z);
        img.put(x, y, BLACK);
    }
    let summary = AttractorSummary {
        lambda,
        depth: args.depth,
        alphabet: args.alphabet,
        points: sample.len(),
        extent: Extent::of_points(&sample.points),
        overlay_disks,
        output: args.out.display().to_string(),
    };
    Ok((img, summary))
}

pub fn attractor(args: &AttractorArgs, argv: Vec<String>) -> Result<i32, CliError> {
    let (img, summary) = attractor_image(args)?;
    img.write_to(&args.out)?;
    eprintln!("{}: {} attractor points at λ = {}", summary.output, summary.points, summary.lambda);
    if let Some(path) = &args.report {
        write_report(Some(path), &ReportEnvelope::new(argv, Payload::Attractor(summary)))?;
    }
    Ok(EXIT_OK)
}

pub fn certificate(args: &CertifyArgs) -> Result<CertificateReport, CliError> {
    let lambda = newton_root(&args.series.numerator_polynomial(), args.seed.0)?;
    Ok(certify_with_periods(&args.series, lambda, args.set, args.periods)?)
}

pub fn certify(args: &CertifyArgs, argv: Vec<String>) -> Result<i32, CliError> {
    let report = certificate(args)?;
    let label = report.verdict.label();
    eprintln!("λ = {}: {}{}", report.lambda, label, match &report.verdict {
        ifs_lab::certificate::Verdict::Inconclusive(r) | ifs_lab::certificate::Verdict::Failed(r) => format!(" ({r})"),
        _ => String::new(),
    });
    write_report(args.out.as_deref(), &ReportEnvelope::new(argv, Payload::Certificate(Box::new(report))))?;
    match &args.expect {
        Some(want) if want != label => {
            eprintln!("expected {want}, got {label}");
            Ok(EXIT_EXPECTATION)
        }
        _ => Ok(EXIT_OK),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    /// No expectation to compare against.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandmarkRow {
    pub id: u8,
    pub series: String,
    #[serde(with = "ifs_lab::complex_serde")]
    pub lambda: Complex,
    /// `|f(λ)|` at the computed root.
    pub residual: f64,
    pub in_sector_s: bool,
    pub sector_inequalities: bool,
    pub verdict: String,
    pub corollary: bool,
    pub min_margin: f64,
    pub overlap_size: usize,
    /// Landmark-specific chain checks; `None` where there are none.
    pub chain_checks: Option<bool>,
    pub outcome: Outcome,
    pub failures: Vec<String>,
}

pub fn landmark_row(lm: &Landmark) -> Result<LandmarkRow, CliError> {
    let lambda = lm.root()?;
    let residual = lm.series.rational_eval(lambda)?.norm();
    let report = certify_with_periods(&lm.series, lambda, ParamSet::M, ifs_lab::certificate::DEFAULT_PERIODS)?;
    let in_sector_s = sector_s_contains(lambda);
    let sector_ok = sector_inequalities(lambda).iter().all(|r| r.pass);
    let chain_checks = if lm.id == 5 {
        let exists = period_three_chain_exists(lambda)?.iter().all(|r| r.pass);
        Some(exists && verify_chain(&lm.series, lambda, 2, ParamSet::M)?.all_pass())
    } else {
        None
    };

    let mut failures = Vec::new();
    if residual >= 1e-10 {
        failures.push(format!("|f(λ)| = {residual:e}"));
    }
    if in_sector_s != lm.expected.in_sector_s {
        failures.push(format!("sector S membership is {in_sector_s}"));
    }
    if lm.expected.in_sector_s && !sector_ok {
        failures.push("sector inequalities fail".into());
    }
    if let Some(want) = lm.expected.accessible_m {
        if report.verdict.is_accessible() != want {
            failures.push(format!("verdict {}", report.verdict.label()));
        }
    }
    if report.corollary != lm.expected.corollary_m0 {
        failures.push(format!("corollary flag is {}", report.corollary));
    }
    if chain_checks == Some(false) {
        failures.push("chain checks fail".into());
    }
    let outcome = if !failures.is_empty() {
        Outcome::Fail
    } else if lm.expected.accessible_m.is_none() {
        Outcome::Unknown
    } else {
        Outcome::Pass
    };
    Ok(LandmarkRow {
        id: lm.id,
        series: lm.series.to_string(),
        lambda,
        residual,
        in_sector_s,
        sector_inequalities: sector_ok,
        verdict: report.verdict.label().to_string(),
        corollary: report.corollary,
        min_margin: report.min_margin(),
        overlap_size: lm.series.overlap_set(lambda)?.points.len(),
        chain_checks,
        outcome,
        failures,
    })
}

pub fn landmark_rows(id: Option<u8>) -> Result<Vec<LandmarkRow>, CliError> {
    let fixtures = match id {
        Some(id) => vec![landmark(id)?],
        None => all_landmarks(),
    };
    fixtures.iter().map(landmark_row).collect()
}

pub fn format_table(rows: &[LandmarkRow]) -> String {
    let mut out = format!(
        "{:<3} {:<16} {:<34} {:<5} {:<14} {:<5} {:>11} {:<5} {}\n",
        "id", "series", "lambda", "in S", "verdict", "cor", "min margin", "|O|", "outcome"
    );
    for r in rows {
        let outcome = match r.outcome {
            Outcome::Pass => "pass".to_string(),
            Outcome::Unknown => format!("unknown/{}-certificate", r.verdict),
            Outcome::Fail => format!("FAIL: {}", r.failures.join("; ")),
        };
        out += &format!(
            "{:<3} {:<16} {:<34} {:<5} {:<14} {:<5} {:>11.4e} {:<5} {}\n",
            r.id,
            r.series,
            format!("{:.10}{:+.10}i", r.lambda.re, r.lambda.im),
            r.in_sector_s,
            r.verdict,
            r.corollary,
            r.min_margin,
            r.overlap_size,
            outcome
        );
    }
    out
}

pub fn landmarks(args: &LandmarksArgs, argv: Vec<String>) -> Result<i32, CliError> {
    let rows = landmark_rows(args.id)?;
    print!("{}", format_table(&rows));
    let failed = rows.iter().any(|r| r.outcome == Outcome::Fail);
    if let Some(path) = &args.out {
        write_report(Some(path), &ReportEnvelope::new(argv, Payload::Landmarks(rows)))?;
    }
    Ok(if failed { EXIT_EXPECTATION } else { EXIT_OK })
}
