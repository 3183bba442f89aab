//! One function per subcommand, plus the error-to-exit-code mapping.
//!
//! Commands print a short deterministic summary to stdout; bulk data always
//! goes to files. Summary floats use 17 significant digits so runs can be
//! diffed byte for byte.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use kpolar::frames::{local_frame, GaugeVector, WaveVector};
use kpolar::io::{self, FieldData};
use kpolar::mfield::{
    gauge_transform, jones_field, make_beam, regauge_fixed_field, schmidt, stokes_field,
    MomentumField,
};
use kpolar::synthesis::{divergence_check, evolve, position_field, PhysicalConstants};
use kpolar::Error;
use nalgebra::Vector3;

use crate::report::{fmt_float, fmt_triple, RunReport};
use crate::{checks, spec, Command, Format, Mode};

pub enum CliError {
    Lib(Error),
    ChecksFailed { failed: usize, total: usize },
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError::Lib(err)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::SingularGauge { .. }) => 3,
            CliError::Lib(Error::TransversalityViolation { .. }) => 4,
            CliError::Lib(_) => 2,
            CliError::ChecksFailed { .. } => 4,
        }
    }

    fn code(&self) -> &'static str {
        match self {
            CliError::Lib(err) => match err {
                Error::SingularGauge { .. } => "singular-gauge",
                Error::TransversalityViolation { .. } => "transversality-violation",
                Error::AllZeroField => "all-zero-field",
                Error::ZeroWaveVector => "zero-wavevector",
                Error::NotAUnitVector { .. } => "not-a-unit-vector",
                Error::IndexOutOfRange { .. } => "index-out-of-range",
                Error::InvalidParameter(_) => "invalid-parameter",
                Error::NonCartesianGrid => "non-cartesian-grid",
                Error::LengthMismatch { .. } => "length-mismatch",
                Error::Format(_) => "format",
                Error::Io(_) => "io",
            },
            CliError::ChecksFailed { .. } => "check-failed",
        }
    }

    /// The single stderr line. Embedded newlines (e.g. from TOML parse
    /// errors) are folded so the line stays machine-parsable.
    pub fn render(&self) -> String {
        let message = match self {
            CliError::Lib(err) => err.to_string(),
            CliError::ChecksFailed { failed, total } => {
                format!("{failed} of {total} invariant checks failed")
            }
        };
        let folded: Vec<&str> = message
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect();
        format!("error[{}]: {}", self.code(), folded.join(" | "))
    }
}

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Frame { k, gauge } => frame(k, gauge),
        Command::Beam { spec, out, format } => beam(&spec, &out, format),
        Command::Regauge {
            field,
            gauge,
            mode,
            out,
            format,
        } => regauge(&field, gauge, mode, &out, format),
        Command::Stokes { field, gauge, out } => stokes(&field, gauge, &out),
        Command::Schmidt { field, gauge } => schmidt_cmd(&field, gauge),
        Command::Synth {
            field,
            t,
            out,
            format,
        } => synth(&field, t, &out, format),
        Command::Check { field, out } => check(&field, out.as_deref()),
    }
}

fn frame(k: Vector3<f64>, gauge: Vector3<f64>) -> Result<(), CliError> {
    let k = WaveVector::new(k)?;
    let gauge = GaugeVector::from_vector(gauge)?;
    let frame = local_frame(&k, &gauge)?;
    let varpi = frame.matrix();

    println!("k {}", fmt_triple(&(*k.vector()).into()));
    println!("gauge {}", fmt_triple(&(*gauge.direction()).into()));
    println!("u {}", fmt_triple(&(*frame.u()).into()));
    println!("v {}", fmt_triple(&(*frame.v()).into()));
    println!("w {}", fmt_triple(&(*frame.w()).into()));
    for row in 0..3 {
        let m = varpi.matrix();
        println!(
            "varpi {} {} {} {}",
            fmt_float(m[(row, 0)].re),
            fmt_float(m[(row, 0)].im),
            fmt_float(m[(row, 1)].re),
            fmt_float(m[(row, 1)].im),
        );
    }
    println!("gram_residual {}", fmt_float(varpi.gram_residual()));
    println!("projector_residual {}", fmt_float(varpi.projector_residual()));
    Ok(())
}

fn write_field(
    field: &MomentumField,
    gauge: &GaugeVector,
    out: &Path,
    format: Format,
) -> Result<(), CliError> {
    let data = FieldData::from_momentum(field, gauge)?;
    io::write_file(&data, out, format.into())?;
    Ok(())
}

fn beam(spec_path: &Path, out: &Path, format: Format) -> Result<(), CliError> {
    let params = spec::load(spec_path)?.into_params()?;
    let field = make_beam(&params)?;
    write_field(&field, &params.gauge, out, format)?;
    println!("wrote {}", out.display());
    println!("samples {}", field.grid().len());
    println!("norm_squared {}", fmt_float(field.norm_squared()));
    println!("divergence {}", fmt_float(divergence_check(&field)));
    Ok(())
}

fn regauge(
    field_path: &Path,
    gauge: Vector3<f64>,
    mode: Mode,
    out: &Path,
    format: Format,
) -> Result<(), CliError> {
    let (field, file_gauge) = io::read_file(field_path)?.to_momentum()?;
    let new_gauge = GaugeVector::from_vector(gauge)?;
    let jf = jones_field(&field, &file_gauge)?;
    let out_field = match mode {
        Mode::Represent => gauge_transform(&jf, &new_gauge)?.reconstruct(),
        Mode::Rotate => regauge_fixed_field(&jf, &new_gauge)?,
    };
    write_field(&out_field, &new_gauge, out, format)?;
    println!("wrote {}", out.display());
    println!("norm_squared {}", fmt_float(out_field.norm_squared()));
    println!("divergence {}", fmt_float(divergence_check(&out_field)));
    Ok(())
}

fn resolve_gauge(
    flag: Option<Vector3<f64>>,
    file_gauge: GaugeVector,
) -> Result<GaugeVector, Error> {
    match flag {
        Some(v) => GaugeVector::from_vector(v),
        None => Ok(file_gauge),
    }
}

fn stokes(field_path: &Path, gauge: Option<Vector3<f64>>, out: &Path) -> Result<(), CliError> {
    let (field, file_gauge) = io::read_file(field_path)?.to_momentum()?;
    let gauge = resolve_gauge(gauge, file_gauge)?;
    let jf = jones_field(&field, &gauge)?;
    let sf = stokes_field(&jf);

    let mut writer = BufWriter::new(fs::File::create(out).map_err(Error::from)?);
    let emit = |w: &mut dyn Write| -> std::io::Result<()> {
        writeln!(w, "# kpolar stokes v1")?;
        writeln!(w, "gauge {}", fmt_triple(&(*gauge.direction()).into()))?;
        writeln!(w, "columns kx ky kz amp s1 s2 s3 sx sy sz")?;
        for i in 0..jf.len() {
            let k = jf.grid().samples()[i].vector();
            let amp = jf.amplitudes()[i];
            let s = sf.components()[i];
            let lab = sf.lab_vectors()[i];
            writeln!(
                w,
                "{} {} {} {}",
                fmt_triple(&(*k).into()),
                fmt_float(amp),
                fmt_triple(&s),
                fmt_triple(&lab.into()),
            )?;
        }
        Ok(())
    };
    emit(&mut writer).map_err(Error::from)?;
    writer.flush().map_err(Error::from)?;
    println!("wrote {}", out.display());
    println!("samples {}", jf.len());
    Ok(())
}

fn schmidt_cmd(field_path: &Path, gauge: Option<Vector3<f64>>) -> Result<(), CliError> {
    let (field, file_gauge) = io::read_file(field_path)?.to_momentum()?;
    let gauge = resolve_gauge(gauge, file_gauge)?;
    let report = schmidt(&jones_field(&field, &gauge)?)?;
    let sv = report.singular_values();
    let weights = report.weights();
    println!("gauge {}", fmt_triple(&(*report.gauge().direction()).into()));
    println!(
        "singular_values {} {}",
        fmt_float(sv[0]),
        fmt_float(sv[1])
    );
    println!("weights {} {}", fmt_float(weights[0]), fmt_float(weights[1]));
    println!("entropy {}", fmt_float(report.entropy()));
    Ok(())
}

fn synth(
    field_path: &Path,
    t: Option<f64>,
    out: &Path,
    format: Format,
) -> Result<(), CliError> {
    let (field, file_gauge) = io::read_file(field_path)?.to_momentum()?;
    let constants = PhysicalConstants::natural();
    let field = match t {
        Some(target) => evolve(&field, target - field.time(), &constants),
        None => field,
    };
    let pf = position_field(&field, &constants)?;
    let data = FieldData::from_position(&pf, &file_gauge);
    io::write_file(&data, out, format.into())?;
    println!("wrote {}", out.display());
    println!("samples {}", pf.values().len());
    println!("time {}", fmt_float(pf.time()));
    println!("divergence {}", fmt_float(divergence_check(&field)));
    Ok(())
}

fn check(field_path: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let bytes = fs::read(field_path).map_err(Error::from)?;
    let (field, file_gauge) = io::read_file(field_path)?.to_momentum()?;
    let results = checks::run_all(&field, &file_gauge)?;
    let report = RunReport::new(
        format!("check {}", field_path.display()),
        &bytes,
        results,
    );
    let text = report.render();
    print!("{text}");
    if let Some(path) = out {
        fs::write(path, &text).map_err(Error::from)?;
    }
    match report.failed() {
        0 => Ok(()),
        failed => Err(CliError::ChecksFailed {
            failed,
            total: report.total(),
        }),
    }
}
