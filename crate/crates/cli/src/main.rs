//! `kpolar`: command-line front end for the momentum-space polarization
//! toolkit.
//!
//! Every subcommand is deterministic: the same invocation on the same inputs
//! produces byte-identical output, floats are printed with 17 significant
//! digits, and nothing here spawns threads or consults the clock.
//!
//! Exit codes: 0 success, 2 parse or input error, 3 singular gauge,
//! 4 invariant failure. Every failure prints exactly one line to stderr of
//! the form `error[<reason-code>]: <message>`.

mod checks;
mod commands;
mod report;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::Vector3;

#[derive(Parser)]
#[command(
    name = "kpolar",
    version,
    about = "Build, regauge, analyze, and synthesize momentum-space photon fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the transverse frame and frame matrix at one wavevector
    Frame {
        /// Wavevector as comma-separated components: kx,ky,kz
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        k: Vector3<f64>,
        /// Gauge vector fixing the transverse axes: gx,gy,gz
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        gauge: Vector3<f64>,
    },
    /// Build a beam from a TOML spec and write it as a field file
    Beam {
        /// Beam spec (TOML)
        spec: PathBuf,
        /// Output field file
        #[arg(long)]
        out: PathBuf,
        /// Output encoding
        #[arg(long, value_enum, default_value_t = Format::Bin)]
        format: Format,
    },
    /// Re-express a stored field in a new gauge, or rotate it physically
    Regauge {
        /// Input field file (momentum space)
        field: PathBuf,
        /// New gauge vector: gx,gy,gz
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        gauge: Vector3<f64>,
        /// represent keeps the physical field; rotate turns it about each k
        #[arg(long, value_enum)]
        mode: Mode,
        /// Output field file
        #[arg(long)]
        out: PathBuf,
        /// Output encoding
        #[arg(long, value_enum, default_value_t = Format::Bin)]
        format: Format,
    },
    /// Export per-sample Stokes components and lab-frame polarization vectors
    Stokes {
        /// Input field file (momentum space)
        field: PathBuf,
        /// Gauge to read polarization in (default: the gauge stored in the file)
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        gauge: Option<Vector3<f64>>,
        /// Output table (text)
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the Schmidt spectrum of polarization-momentum entanglement
    Schmidt {
        /// Input field file (momentum space)
        field: PathBuf,
        /// Gauge to read polarization in (default: the gauge stored in the file)
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        gauge: Option<Vector3<f64>>,
    },
    /// Synthesize the position-space electric field
    Synth {
        /// Input field file (momentum space)
        field: PathBuf,
        /// Absolute target time; the field is first evolved from its stored time
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
        /// Output field file (position space)
        #[arg(long)]
        out: PathBuf,
        /// Output encoding
        #[arg(long, value_enum, default_value_t = Format::Bin)]
        format: Format,
    },
    /// Run the invariant suite on a stored field and print a run report
    Check {
        /// Input field file (momentum space)
        field: PathBuf,
        /// Also write the report to a file
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Bin,
}

impl From<Format> for kpolar::io::FileFormat {
    fn from(format: Format) -> Self {
        match format {
            Format::Text => kpolar::io::FileFormat::Text,
            Format::Bin => kpolar::io::FileFormat::Binary,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Change the description, keep the physical field
    Represent,
    /// Keep the Jones components fixed, rotate the field about each k
    Rotate,
}

fn parse_vec3(text: &str) -> Result<Vector3<f64>, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(format!(
            "expected three comma-separated components, got {text:?}"
        ));
    }
    let mut out = [0.0_f64; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| format!("cannot parse {:?} as a number", part.trim()))?;
    }
    Ok(Vector3::new(out[0], out[1], out[2]))
}

fn main() -> ExitCode {
    // Rust ignores SIGPIPE, so a downstream `head` closing the pipe would
    // turn every print into a panic; restore the usual silent death instead.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                // help and version are not errors
                err.exit();
            }
            // Keep clap's message block (it names the offending argument) but
            // drop the usage/help trailer and fold it onto one line.
            let text = err.to_string();
            let line = text
                .lines()
                .take_while(|l| !l.trim().is_empty())
                .map(|l| l.trim().trim_start_matches("error: "))
                .collect::<Vec<_>>()
                .join(" | ");
            eprintln!("error[parse]: {line}");
            return ExitCode::from(2);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.render());
            ExitCode::from(err.exit_code())
        }
    }
}
