mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use jampack_core::Layout;

#[derive(Parser, Debug)]
#[command(name = "jampack", version, about = "Build, verify and simulate stable configurations of equal discs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Relative tolerance for deciding that two discs touch.
    #[arg(long, default_value_t = 1e-9, value_parser = parse_tol)]
    tol: f64,
    /// Output file. Relative paths are resolved against $JAMPACK_OUT_DIR when set.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug, Clone)]
struct CurveArgs {
    /// Decay rate of the exponential base curve.
    #[arg(long, default_value_t = 0.1, value_parser = parse_positive)]
    lambda: f64,
    /// Upper end of the epsilon scan.
    #[arg(long = "eps-hi", default_value_t = 4.0, value_parser = parse_positive)]
    eps_hi: f64,
}

#[derive(Args, Debug, Clone)]
struct ChainArgs {
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    steps: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Proposal radius; defaults to the disc radius.
    #[arg(long = "step-radius", value_parser = parse_positive)]
    step_radius: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tune and build a full symmetric bridge in the plane.
    BuildBridge {
        #[arg(long = "N", default_value_t = 8, value_parser = clap::value_parser!(u64).range(2..=200))]
        n: u64,
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Assemble a stable configuration in the unit square.
    BuildSquare {
        #[arg(long = "N", default_value_t = 8, value_parser = clap::value_parser!(u64).range(2..=200))]
        n: u64,
        #[arg(long, default_value = "wall-bridges", value_parser = parse_layout)]
        layout: Layout,
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        common: Common,
    },
    /// The six-disc corner junction.
    Junction {
        #[command(flatten)]
        common: Common,
    },
    /// Five discs jammed in the unit square.
    FiveDisc {
        #[command(flatten)]
        common: Common,
    },
    /// Discs on the vertices of the 3.12.12 tiling.
    Tiling {
        /// Half-width of the square window in tiling edge lengths.
        #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u64).range(2..=2000))]
        window: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Check that every disc is jammed. Exit code 2 when some disc can move.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run the Metropolis chain from a configuration.
    Simulate {
        file: PathBuf,
        #[command(flatten)]
        chain: ChainArgs,
        /// Shrink the discs by this factor first.
        #[arg(long, default_value_t = 1.0, value_parser = parse_factor)]
        shrink: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Acceptance of the chain after shrinking the discs by each factor.
    Escape {
        file: PathBuf,
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, value_delimiter = ',', default_value = "1,0.999,0.995,0.99,0.98,0.95", value_parser = parse_factor)]
        shrink: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Fraction of a square window covered by discs.
    Density {
        file: PathBuf,
        /// Half-width of the window centered at the origin, in coordinate
        /// units. Defaults to the container.
        #[arg(long, value_parser = parse_positive)]
        window: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Draw a configuration as SVG.
    Render {
        file: PathBuf,
        /// Draw contact segments.
        #[arg(long)]
        contacts: bool,
        /// Colour discs by jamming verdict.
        #[arg(long)]
        jamming: bool,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("expected a positive number, got {s}"))
    }
}

fn parse_factor(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(format!("shrink factor must lie in (0, 1], got {s}"))
    }
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 1e-12 && v < 0.1 {
        Ok(v)
    } else {
        Err(format!("tolerance must lie in (1e-12, 0.1), got {s}"))
    }
}

fn parse_layout(s: &str) -> Result<Layout, String> {
    s.parse().map_err(|e: jampack_core::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
