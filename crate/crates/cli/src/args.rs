use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use ifs_lab::ifs::Alphabet;
use ifs_lab::paramspace::Window;
use ifs_lab::{Complex, ParamSet, RationalTypeSeries};

#[derive(Debug, Parser)]
#[command(name = "ifs-lab", version, about = "Parameter loci, attractors and accessibility certificates for {-1+λz, λz, 1+λz}")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Escape-depth image of M or M0 over a window of parameter space.
    Render(RenderArgs),
    /// Attractor sample at a fixed λ, optionally with instar or chain disks.
    Attractor(AttractorArgs),
    /// Accessibility certificate for the root of a rational-type series.
    Certify(CertifyArgs),
    /// Run the checks for the landmark parameters λ₁…λ₆.
    Landmarks(LandmarksArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RenderArgs {
    /// x0,y0,x1,y1
    #[arg(long, allow_hyphen_values = true)]
    pub window: Window,
    /// W,H
    #[arg(long, default_value = "512,512")]
    pub px: Pixels,
    #[arg(long, default_value_t = 40)]
    pub depth: usize,
    /// m or m0
    #[arg(long, default_value = "m")]
    pub set: ParamSet,
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "IFS_LAB_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// Also write a JSON summary here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct AttractorArgs {
    /// re,im; defaults to the root found from --series and --seed.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<ComplexArg>,
    #[arg(long)]
    pub series: Option<RationalTypeSeries>,
    /// re,im Newton seed for the root of --series.
    #[arg(long, allow_hyphen_values = true)]
    pub seed: Option<ComplexArg>,
    #[arg(long, default_value_t = 12)]
    pub depth: usize,
    /// binary or ternary
    #[arg(long, default_value = "ternary")]
    pub alphabet: Alphabet,
    /// none, instar:LEVEL or chain
    #[arg(long, default_value = "none")]
    pub overlay: Overlay,
    /// Number of chain disks drawn by the chain overlay.
    #[arg(long, default_value_t = 6)]
    pub disks: usize,
    #[arg(long, default_value = "800,800")]
    pub px: Pixels,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, env = "IFS_LAB_THREADS", default_value_t = 0)]
    pub threads: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub series: RationalTypeSeries,
    /// re,im Newton seed.
    #[arg(long, allow_hyphen_values = true)]
    pub seed: ComplexArg,
    #[arg(long, default_value = "m")]
    pub set: ParamSet,
    /// Periods of the chain checked against the instar.
    #[arg(long, default_value_t = ifs_lab::certificate::DEFAULT_PERIODS)]
    pub periods: usize,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exit with status 1 unless the verdict label matches.
    #[arg(long)]
    pub expect: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct LandmarksArgs {
    /// Only this landmark (1..=6).
    #[arg(long)]
    pub id: Option<u8>,
    /// JSON report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn pair<T: FromStr>(s: &str, what: &str) -> Result<(T, T), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts[..] {
        [a, b] => Ok((
            a.parse().map_err(|_| format!("bad {what} component {a:?}"))?,
            b.parse().map_err(|_| format!("bad {what} component {b:?}"))?,
        )),
        _ => Err(format!("{what} must be two comma-separated values, got {s:?}")),
    }
}

/// `W,H` image size, both at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pixels {
    pub width: usize,
    pub height: usize,
}

impl FromStr for Pixels {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (width, height) = pair(s, "pixel size")?;
        if width == 0 || height == 0 {
            return Err("image size must be at least 1x1".into());
        }
        Ok(Pixels { width, height })
    }
}

/// `re,im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexArg(pub Complex);

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (re, im) = pair::<f64>(s, "complex number")?;
        Ok(ComplexArg(Complex::new(re, im)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Overlay {
    None,
    Instar(usize),
    Chain,
}

impl FromStr for Overlay {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(Overlay::None),
            "chain" => Ok(Overlay::Chain),
            _ => s
                .strip_prefix("instar:")
                .and_then(|l| l.parse().ok())
                .map(Overlay::Instar)
                .ok_or_else(|| format!("overlay must be none, chain or instar:LEVEL, got {s:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn value_parsers() {
        assert_eq!("200,100".parse::<Pixels>().unwrap(), Pixels { width: 200, height: 100 });
        assert!("0,5".parse::<Pixels>().is_err());
        assert_eq!("-0.37,0.52".parse::<ComplexArg>().unwrap().0, Complex::new(-0.37, 0.52));
        assert!("1".parse::<ComplexArg>().is_err());
        assert_eq!("instar:4".parse::<Overlay>().unwrap(), Overlay::Instar(4));
        assert!("instar:x".parse::<Overlay>().is_err());
    }

    #[test]
    fn unicode_minus_is_rejected() {
        assert!("\u{2212}0.3,0.5".parse::<ComplexArg>().is_err());
        assert!("1,\u{2212}1;1".parse::<RationalTypeSeries>().is_err());
    }

    #[test]
    fn parses_render_flags() {
        let cli = Cli::try_parse_from([
            "ifs-lab", "render", "--window", "-0.4,-0.05,0.6,0.05", "--px", "20,10", "--depth", "9", "--set", "m0", "--out", "x.ppm",
        ])
        .unwrap();
        let Command::Render(r) = cli.command else { panic!("wrong subcommand") };
        assert_eq!(r.px, Pixels { width: 20, height: 10 });
        assert_eq!(r.set, ParamSet::M0);
        assert_eq!(r.window.x0, -0.4);
    }
}
