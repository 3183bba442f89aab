//! Field files: a text table and an equivalent binary layout.
//!
//! Both carry the same records. A header fixes the grid (shape, spacing,
//! origin), the space the samples live in (momentum or position), the gauge
//! the field was built or last expressed in, and the time stamp; then one
//! record per grid point, z index fastest, holding the sample coordinates
//! and the re/im pairs of the three field components.
//!
//! Text files are plot-ready column tables printed at full round-trip float
//! precision, so write-then-read is exact. The binary layout is
//! little-endian 64-bit throughout and round-trips bit for bit.
//!
//! Only uniform Cartesian grids are representable; fields on generic sample
//! lists have no file form.

use std::fs;
use std::io::{BufRead, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frames::GaugeVector;
use crate::mfield::{CartesianLayout, MomentumField, MomentumGrid};
use crate::synthesis::PositionField;

/// First line of every text field file.
pub const TEXT_HEADER: &str = "# kpolar field v1";

/// Leading bytes of every binary field file.
pub const BINARY_MAGIC: &[u8; 8] = b"KPOLFLD1";

/// Tolerance for the per-record coordinate consistency check on read.
const COORD_TOL: f64 = 1e-9;

/// Which space the stored samples live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Momentum,
    Position,
}

impl Space {
    fn tag(self) -> &'static str {
        match self {
            Space::Momentum => "k",
            Space::Position => "x",
        }
    }

    fn code(self) -> u8 {
        match self {
            Space::Momentum => 0,
            Space::Position => 1,
        }
    }

    fn from_tag(tag: &str) -> Result<Self> {
        match tag {
            "k" => Ok(Space::Momentum),
            "x" => Ok(Space::Position),
            other => Err(Error::Format(format!(
                "unknown space tag {other:?}, expected \"k\" or \"x\""
            ))),
        }
    }

    fn from_code(code: u8) -> Result<Self> {
        match code {
            0 => Ok(Space::Momentum),
            1 => Ok(Space::Position),
            other => Err(Error::Format(format!(
                "unknown space code {other}, expected 0 or 1"
            ))),
        }
    }

    fn column_names(self) -> &'static str {
        match self {
            Space::Momentum => "kx ky kz f1_re f1_im f2_re f2_im f3_re f3_im",
            Space::Position => "x y z E1_re E1_im E2_re E2_im E3_re E3_im",
        }
    }
}

/// On-disk form of a sampled field, common to both file formats.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldData {
    pub space: Space,
    pub layout: CartesianLayout,
    pub gauge: [f64; 3],
    pub time: f64,
    /// Per sample: re and im of the three components, grid order.
    pub values: Vec<[f64; 6]>,
}

impl FieldData {
    pub fn from_momentum(field: &MomentumField, gauge: &GaugeVector) -> Result<FieldData> {
        let layout = *field.grid().layout().ok_or(Error::NonCartesianGrid)?;
        Ok(FieldData {
            space: Space::Momentum,
            layout,
            gauge: gauge_array(gauge),
            time: field.time(),
            values: field.values().iter().map(flatten).collect(),
        })
    }

    pub fn to_momentum(&self) -> Result<(MomentumField, GaugeVector)> {
        if self.space != Space::Momentum {
            return Err(Error::Format(
                "expected a momentum-space file, found position-space samples".into(),
            ));
        }
        let grid = MomentumGrid::cartesian(self.layout)?;
        let field = MomentumField::new(grid, self.values.iter().map(unflatten).collect(), self.time)?;
        Ok((field, self.gauge_vector()?))
    }

    pub fn from_position(field: &PositionField, gauge: &GaugeVector) -> FieldData {
        FieldData {
            space: Space::Position,
            layout: *field.layout(),
            gauge: gauge_array(gauge),
            time: field.time(),
            values: field.values().iter().map(flatten).collect(),
        }
    }

    pub fn to_position(&self) -> Result<(PositionField, GaugeVector)> {
        if self.space != Space::Position {
            return Err(Error::Format(
                "expected a position-space file, found momentum-space samples".into(),
            ));
        }
        let field =
            PositionField::new(self.layout, self.values.iter().map(unflatten).collect(), self.time)?;
        Ok((field, self.gauge_vector()?))
    }

    pub fn gauge_vector(&self) -> Result<GaugeVector> {
        GaugeVector::from_vector(Vector3::new(self.gauge[0], self.gauge[1], self.gauge[2]))
    }

    fn validate(&self) -> Result<()> {
        if self.layout.len() != self.values.len() {
            return Err(Error::LengthMismatch {
                grid: self.layout.len(),
                data: self.values.len(),
            });
        }
        Ok(())
    }
}

fn gauge_array(gauge: &GaugeVector) -> [f64; 3] {
    let d = gauge.direction();
    [d.x, d.y, d.z]
}

fn flatten(v: &Vector3<Complex64>) -> [f64; 6] {
    [v.x.re, v.x.im, v.y.re, v.y.im, v.z.re, v.z.im]
}

fn unflatten(r: &[f64; 6]) -> Vector3<Complex64> {
    Vector3::new(
        Complex64::new(r[0], r[1]),
        Complex64::new(r[2], r[3]),
        Complex64::new(r[4], r[5]),
    )
}

/// Full round-trip float formatting: 17 significant digits.
fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_text(data: &FieldData, writer: &mut impl Write) -> Result<()> {
    data.validate()?;
    let layout = &data.layout;
    writeln!(writer, "{TEXT_HEADER}")?;
    writeln!(writer, "space {}", data.space.tag())?;
    writeln!(
        writer,
        "shape {} {} {}",
        layout.shape[0], layout.shape[1], layout.shape[2]
    )?;
    for (key, triple) in [
        ("spacing", &layout.spacing),
        ("origin", &layout.origin),
        ("gauge", &data.gauge),
    ] {
        writeln!(
            writer,
            "{key} {} {} {}",
            fmt_float(triple[0]),
            fmt_float(triple[1]),
            fmt_float(triple[2])
        )?;
    }
    writeln!(writer, "time {}", fmt_float(data.time))?;
    writeln!(writer, "columns {}", data.space.column_names())?;
    for (i, record) in data.values.iter().enumerate() {
        let p = layout.point(layout.coords(i));
        writeln!(
            writer,
            "{} {} {} {} {} {} {} {} {}",
            fmt_float(p.x),
            fmt_float(p.y),
            fmt_float(p.z),
            fmt_float(record[0]),
            fmt_float(record[1]),
            fmt_float(record[2]),
            fmt_float(record[3]),
            fmt_float(record[4]),
            fmt_float(record[5])
        )?;
    }
    Ok(())
}

fn parse_float(token: &str, what: &str) -> Result<f64> {
    let value: f64 = token
        .parse()
        .map_err(|_| Error::Format(format!("{what}: cannot parse {token:?} as a number")))?;
    if !value.is_finite() {
        return Err(Error::Format(format!("{what}: {token:?} is not finite")));
    }
    Ok(value)
}

fn parse_triple(tokens: &[&str], what: &str) -> Result<[f64; 3]> {
    if tokens.len() != 3 {
        return Err(Error::Format(format!(
            "{what}: expected 3 values, found {}",
            tokens.len()
        )));
    }
    Ok([
        parse_float(tokens[0], what)?,
        parse_float(tokens[1], what)?,
        parse_float(tokens[2], what)?,
    ])
}

fn check_coords(layout: &CartesianLayout, index: usize, stored: [f64; 3]) -> Result<()> {
    let expected = layout.point(layout.coords(index));
    for a in 0..3 {
        if (stored[a] - expected[a]).abs() > COORD_TOL * (1.0 + expected[a].abs()) {
            return Err(Error::Format(format!(
                "record {index}: stored coordinate {} does not match the declared grid ({})",
                stored[a], expected[a]
            )));
        }
    }
    Ok(())
}

pub fn read_text(reader: &mut impl BufRead) -> Result<FieldData> {
    let mut lines = reader.lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::Format("empty file".into()))??;
    if first.trim_end() != TEXT_HEADER {
        return Err(Error::Format(format!(
            "bad first line {first:?}, expected {TEXT_HEADER:?}"
        )));
    }

    let mut space = None;
    let mut shape: Option<[usize; 3]> = None;
    let mut spacing = None;
    let mut origin = None;
    let mut gauge = None;
    let mut time = None;
    for line in lines.by_ref() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let (key, rest) = (tokens[0], &tokens[1..]);
        match key {
            "space" => {
                if rest.len() != 1 {
                    return Err(Error::Format("space: expected one tag".into()));
                }
                space = Some(Space::from_tag(rest[0])?);
            }
            "shape" => {
                if rest.len() != 3 {
                    return Err(Error::Format("shape: expected 3 values".into()));
                }
                let mut parsed = [0usize; 3];
                for (slot, token) in parsed.iter_mut().zip(rest) {
                    *slot = token.parse().map_err(|_| {
                        Error::Format(format!("shape: cannot parse {token:?} as an integer"))
                    })?;
                }
                shape = Some(parsed);
            }
            "spacing" => spacing = Some(parse_triple(rest, "spacing")?),
            "origin" => origin = Some(parse_triple(rest, "origin")?),
            "gauge" => gauge = Some(parse_triple(rest, "gauge")?),
            "time" => {
                if rest.len() != 1 {
                    return Err(Error::Format("time: expected one value".into()));
                }
                time = Some(parse_float(rest[0], "time")?);
            }
            "columns" => break,
            other => {
                return Err(Error::Format(format!("unknown header key {other:?}")));
            }
        }
    }

    let space = space.ok_or_else(|| Error::Format("missing header key \"space\"".into()))?;
    let layout = CartesianLayout {
        shape: shape.ok_or_else(|| Error::Format("missing header key \"shape\"".into()))?,
        spacing: spacing.ok_or_else(|| Error::Format("missing header key \"spacing\"".into()))?,
        origin: origin.ok_or_else(|| Error::Format("missing header key \"origin\"".into()))?,
    };
    let gauge = gauge.ok_or_else(|| Error::Format("missing header key \"gauge\"".into()))?;
    let time = time.ok_or_else(|| Error::Format("missing header key \"time\"".into()))?;

    let count = layout.len();
    let mut values = Vec::with_capacity(count);
    for line in lines {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if values.len() == count {
            return Err(Error::Format("more data rows than grid samples".into()));
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 9 {
            return Err(Error::Format(format!(
                "record {}: expected 9 columns, found {}",
                values.len(),
                tokens.len()
            )));
        }
        let what = format!("record {}", values.len());
        let mut record = [0.0f64; 9];
        for (slot, token) in record.iter_mut().zip(&tokens) {
            *slot = parse_float(token, &what)?;
        }
        check_coords(&layout, values.len(), [record[0], record[1], record[2]])?;
        values.push([
            record[3], record[4], record[5], record[6], record[7], record[8],
        ]);
    }
    if values.len() != count {
        return Err(Error::Format(format!(
            "expected {count} data rows, found {}",
            values.len()
        )));
    }

    Ok(FieldData {
        space,
        layout,
        gauge,
        time,
        values,
    })
}

pub fn write_binary(data: &FieldData, writer: &mut impl Write) -> Result<()> {
    data.validate()?;
    let layout = &data.layout;
    writer.write_all(BINARY_MAGIC)?;
    writer.write_u8(data.space.code())?;
    writer.write_all(&[0u8; 7])?;
    for extent in layout.shape {
        writer.write_u64::<LittleEndian>(extent as u64)?;
    }
    for triple in [&layout.spacing, &layout.origin, &data.gauge] {
        for &v in triple {
            writer.write_f64::<LittleEndian>(v)?;
        }
    }
    writer.write_f64::<LittleEndian>(data.time)?;
    writer.write_u64::<LittleEndian>(data.values.len() as u64)?;
    for (i, record) in data.values.iter().enumerate() {
        let p = layout.point(layout.coords(i));
        for v in [p.x, p.y, p.z] {
            writer.write_f64::<LittleEndian>(v)?;
        }
        for &v in record {
            writer.write_f64::<LittleEndian>(v)?;
        }
    }
    Ok(())
}

pub fn read_binary(reader: &mut impl Read) -> Result<FieldData> {
    let mut magic = [0u8; 8];
    reader.read_exact(&mut magic)?;
    if &magic != BINARY_MAGIC {
        return Err(Error::Format(format!(
            "bad magic {magic:?}, expected {BINARY_MAGIC:?}"
        )));
    }
    let space = Space::from_code(reader.read_u8()?)?;
    let mut pad = [0u8; 7];
    reader.read_exact(&mut pad)?;
    if pad != [0u8; 7] {
        return Err(Error::Format("nonzero header padding".into()));
    }

    let mut shape = [0usize; 3];
    for slot in &mut shape {
        let extent = reader.read_u64::<LittleEndian>()?;
        *slot = usize::try_from(extent)
            .map_err(|_| Error::Format(format!("grid extent {extent} too large")))?;
    }
    let mut triples = [[0.0f64; 3]; 3];
    for triple in &mut triples {
        for slot in triple.iter_mut() {
            *slot = reader.read_f64::<LittleEndian>()?;
        }
    }
    let [spacing, origin, gauge] = triples;
    let time = reader.read_f64::<LittleEndian>()?;
    let layout = CartesianLayout {
        shape,
        spacing,
        origin,
    };
    let expected = shape[0]
        .checked_mul(shape[1])
        .and_then(|n| n.checked_mul(shape[2]))
        .ok_or_else(|| Error::Format("grid too large".into()))?;

    let count = reader.read_u64::<LittleEndian>()?;
    if count != expected as u64 {
        return Err(Error::Format(format!(
            "record count {count} does not match the grid size {expected}"
        )));
    }
    let mut values = Vec::with_capacity(expected);
    for i in 0..expected {
        let mut record = [0.0f64; 9];
        for slot in &mut record {
            *slot = reader.read_f64::<LittleEndian>()?;
        }
        check_coords(&layout, i, [record[0], record[1], record[2]])?;
        values.push([
            record[3], record[4], record[5], record[6], record[7], record[8],
        ]);
    }

    Ok(FieldData {
        space,
        layout,
        gauge,
        time,
        values,
    })
}

/// Serialization format selector for `write_file`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Text,
    Binary,
}

pub fn write_file(data: &FieldData, path: &Path, format: FileFormat) -> Result<()> {
    let mut writer = BufWriter::new(fs::File::create(path)?);
    match format {
        FileFormat::Text => write_text(data, &mut writer)?,
        FileFormat::Binary => write_binary(data, &mut writer)?,
    }
    writer.flush()?;
    Ok(())
}

/// Reads either format, telling them apart by the leading bytes.
pub fn read_file(path: &Path) -> Result<FieldData> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(BINARY_MAGIC) {
        read_binary(&mut bytes.as_slice())
    } else {
        let text = std::str::from_utf8(&bytes).map_err(|_| {
            Error::Format("file is neither the binary format nor UTF-8 text".into())
        })?;
        read_text(&mut text.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mfield::testutil::random_field;
    use crate::mfield::project_transverse;
    use crate::synthesis::{position_field, PhysicalConstants};

    fn sample_field() -> MomentumField {
        let grid = MomentumGrid::centered(
            [4, 2, 4],
            [0.5, 0.45, 0.4],
            Vector3::new(0.3, -0.2, 1.1),
        )
        .unwrap();
        project_transverse(&random_field(grid, 21))
    }

    fn bits(values: &[[f64; 6]]) -> Vec<[u64; 6]> {
        values
            .iter()
            .map(|r| r.map(f64::to_bits))
            .collect()
    }

    #[test]
    fn text_round_trip_is_exact() {
        let field = sample_field();
        let data = FieldData::from_momentum(&field, &GaugeVector::y()).unwrap();
        let mut buffer = Vec::new();
        write_text(&data, &mut buffer).unwrap();
        let back = read_text(&mut buffer.as_slice()).unwrap();
        assert_eq!(back.space, Space::Momentum);
        assert_eq!(back.layout, data.layout);
        assert_eq!(bits(&back.values), bits(&data.values));
        assert_eq!(back.time.to_bits(), data.time.to_bits());
        assert_eq!(back.gauge, data.gauge);

        let (rebuilt, gauge) = back.to_momentum().unwrap();
        assert_eq!(gauge.direction(), GaugeVector::y().direction());
        for (a, b) in rebuilt.values().iter().zip(field.values()) {
            assert_eq!((a - b).norm(), 0.0);
        }
        for (a, b) in rebuilt.grid().samples().iter().zip(field.grid().samples()) {
            assert_eq!((a.vector() - b.vector()).norm(), 0.0);
        }
    }

    #[test]
    fn binary_round_trip_is_bit_identical_and_deterministic() {
        let field = sample_field();
        let data = FieldData::from_momentum(&field, &GaugeVector::x()).unwrap();
        let mut one = Vec::new();
        let mut two = Vec::new();
        write_binary(&data, &mut one).unwrap();
        write_binary(&data, &mut two).unwrap();
        assert_eq!(one, two);

        let back = read_binary(&mut one.as_slice()).unwrap();
        assert_eq!(bits(&back.values), bits(&data.values));
        assert_eq!(back.layout, data.layout);
        let mut again = Vec::new();
        write_binary(&back, &mut again).unwrap();
        assert_eq!(one, again);
    }

    #[test]
    fn position_fields_round_trip_too() {
        let field = sample_field();
        let pf = position_field(&field, &PhysicalConstants::natural()).unwrap();
        let data = FieldData::from_position(&pf, &GaugeVector::z());
        let mut buffer = Vec::new();
        write_binary(&data, &mut buffer).unwrap();
        let back = read_binary(&mut buffer.as_slice()).unwrap();
        assert_eq!(back.space, Space::Position);
        let (rebuilt, _) = back.to_position().unwrap();
        for (a, b) in rebuilt.values().iter().zip(pf.values()) {
            assert_eq!((a - b).norm(), 0.0);
        }
        assert!(matches!(
            back.to_momentum(),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn file_reader_distinguishes_the_formats_by_leading_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let field = sample_field();
        let data = FieldData::from_momentum(&field, &GaugeVector::z()).unwrap();

        let text_path = dir.path().join("field.txt");
        let bin_path = dir.path().join("field.bin");
        write_file(&data, &text_path, FileFormat::Text).unwrap();
        write_file(&data, &bin_path, FileFormat::Binary).unwrap();

        let from_text = read_file(&text_path).unwrap();
        let from_bin = read_file(&bin_path).unwrap();
        assert_eq!(bits(&from_text.values), bits(&data.values));
        assert_eq!(bits(&from_bin.values), bits(&data.values));
    }

    #[test]
    fn malformed_text_is_rejected_with_a_reason() {
        let field = sample_field();
        let data = FieldData::from_momentum(&field, &GaugeVector::z()).unwrap();
        let mut buffer = Vec::new();
        write_text(&data, &mut buffer).unwrap();
        let text = String::from_utf8(buffer).unwrap();

        let cases: Vec<(String, &str)> = vec![
            (text.replace(TEXT_HEADER, "# other file"), "header"),
            (text.replace("space k", "space q"), "space tag"),
            (text.replace("shape 4 2 4", "shape 4 2"), "shape arity"),
            (text.replace("time", "when"), "unknown key"),
            (
                text.lines().take(text.lines().count() - 1).collect::<Vec<_>>().join("\n"),
                "missing row",
            ),
            (format!("{text}0 0 0 1 0 0 0 0 0\n"), "extra row"),
        ];
        for (broken, label) in cases {
            let result = read_text(&mut broken.as_bytes());
            assert!(
                matches!(result, Err(Error::Format(_))),
                "case {label} should fail with a format error, got {result:?}"
            );
        }
    }

    #[test]
    fn coordinate_mismatch_is_rejected() {
        let field = sample_field();
        let data = FieldData::from_momentum(&field, &GaugeVector::z()).unwrap();
        let mut buffer = Vec::new();
        write_text(&data, &mut buffer).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        // shift the declared origin; stored row coordinates no longer match
        let first_origin = text
            .lines()
            .find(|l| l.starts_with("origin"))
            .unwrap()
            .to_owned();
        let broken = text.replace(&first_origin, "origin 0.0e0 0.0e0 9.0e0");
        assert!(matches!(
            read_text(&mut broken.as_bytes()),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn truncated_binary_is_an_io_error() {
        let field = sample_field();
        let data = FieldData::from_momentum(&field, &GaugeVector::z()).unwrap();
        let mut buffer = Vec::new();
        write_binary(&data, &mut buffer).unwrap();
        buffer.truncate(buffer.len() - 11);
        assert!(matches!(
            read_binary(&mut buffer.as_slice()),
            Err(Error::Io(_))
        ));
    }
}
