//! End-to-end tests that drive the compiled `kpolar` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kpolar::frames::{local_frame, GaugeVector, WaveVector};
use kpolar::io::{self, FieldData, FileFormat, Space};
use kpolar::mfield::CartesianLayout;
use nalgebra::Vector3;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kpolar"))
        .args(args)
        .output()
        .expect("the binary should run")
}

fn stdout_text(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_text(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

/// Whitespace-separated floats from the first stdout line starting with `key`.
fn line_values(text: &str, key: &str) -> Vec<f64> {
    let line = text
        .lines()
        .find(|l| l.strip_prefix(key).is_some_and(|r| r.starts_with(' ')))
        .unwrap_or_else(|| panic!("no line starts with {key:?} in:\n{text}"));
    line[key.len()..]
        .split_whitespace()
        .map(|t| t.parse().expect("numeric column"))
        .collect()
}

fn write_spec(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

/// Small radial beam used by several tests; 8^3 keeps runs quick.
fn radial_spec(dir: &Path) -> PathBuf {
    write_spec(
        dir,
        "radial.toml",
        r#"
        kind = "radial"
        axis = [0.0, 0.0, 1.0]
        center_k = 5.0
        width = 1.0
        shape = [8, 8, 8]
        spacing = [0.5, 0.5, 0.5]
        gauge = [0.0, 0.0, 1.0]
        "#,
    )
}

fn build_beam(dir: &Path, spec: &Path, name: &str) -> PathBuf {
    let out = dir.join(name);
    let output = run(&["beam", spec.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(
        output.status.success(),
        "beam failed: {}",
        stderr_text(&output)
    );
    out
}

/// One momentum sample at k = e_x with the field on the first frame axis of
/// the e_z gauge, i.e. F = -e_z.
fn single_mode_file(dir: &Path) -> PathBuf {
    let data = FieldData {
        space: Space::Momentum,
        layout: CartesianLayout {
            shape: [1, 1, 1],
            spacing: [1.0, 1.0, 1.0],
            origin: [1.0, 0.0, 0.0],
        },
        gauge: [0.0, 0.0, 1.0],
        time: 0.0,
        values: vec![[0.0, 0.0, 0.0, 0.0, -1.0, 0.0]],
    };
    let path = dir.join("single.bin");
    io::write_file(&data, &path, FileFormat::Binary).unwrap();
    path
}

#[test]
fn frame_prints_the_axis_aligned_triad() {
    let output = run(&["frame", "--k", "1,0,0", "--gauge", "0,0,1"]);
    assert!(output.status.success());
    let text = stdout_text(&output);
    assert_eq!(line_values(&text, "u"), vec![0.0, 0.0, -1.0]);
    assert_eq!(line_values(&text, "v"), vec![0.0, 1.0, 0.0]);
    assert_eq!(line_values(&text, "w"), vec![1.0, 0.0, 0.0]);
    assert!(line_values(&text, "gram_residual")[0] <= 1e-12);
    assert!(line_values(&text, "projector_residual")[0] <= 1e-12);
}

#[test]
fn frame_with_parallel_gauge_exits_singular() {
    let output = run(&["frame", "--k", "0,0,2", "--gauge", "0,0,1"]);
    assert_eq!(output.status.code(), Some(3));
    let err = stderr_text(&output);
    assert_eq!(err.lines().count(), 1, "one stderr line, got:\n{err}");
    assert!(err.starts_with("error[singular-gauge]:"), "{err}");
}

#[test]
fn usage_errors_exit_two_with_one_line() {
    for args in [
        &["frame", "--k", "1,2", "--gauge", "0,0,1"] as &[&str],
        &["frame", "--k", "1,a,0", "--gauge", "0,0,1"],
        &["no-such-command"],
    ] {
        let output = run(args);
        assert_eq!(output.status.code(), Some(2), "args: {args:?}");
        let err = stderr_text(&output);
        assert_eq!(err.lines().count(), 1, "args: {args:?}, stderr:\n{err}");
        assert!(err.starts_with("error[parse]:"), "{err}");
    }
}

#[test]
fn malformed_beam_spec_is_diagnosed_by_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.bin");

    // unknown key
    let spec = write_spec(
        dir.path(),
        "typo.toml",
        "kind = \"radial\"\nwaist = 2.0\n",
    );
    let output = run(&["beam", spec.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    let err = stderr_text(&output);
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error[format]:"), "{err}");
    assert!(err.contains("waist"), "unknown key not named: {err}");

    // missing field
    let spec = write_spec(dir.path(), "missing.toml", "kind = \"radial\"\n");
    let output = run(&["beam", spec.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_text(&output).contains("axis"));
}

#[test]
fn beam_echoes_norm_and_divergence() {
    let dir = tempfile::tempdir().unwrap();
    let spec = radial_spec(dir.path());
    let out = dir.path().join("radial.bin");
    let output = run(&["beam", spec.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(output.status.success());
    let text = stdout_text(&output);
    assert!((line_values(&text, "norm_squared")[0] - 1.0).abs() <= 1e-12);
    assert!(line_values(&text, "divergence")[0] <= 1e-12);

    let (field, gauge) = io::read_file(&out).unwrap().to_momentum().unwrap();
    assert_eq!(field.grid().len(), 512);
    assert_eq!(*gauge.direction(), Vector3::new(0.0, 0.0, 1.0));
}

#[test]
fn radial_stokes_export_sits_on_the_first_frame_axis() {
    let dir = tempfile::tempdir().unwrap();
    let field = build_beam(dir.path(), &radial_spec(dir.path()), "radial.bin");
    let table = dir.path().join("stokes.txt");
    let output = run(&["stokes", field.to_str().unwrap(), "--out", table.to_str().unwrap()]);
    assert!(output.status.success());

    let gauge = GaugeVector::z();
    let mut checked = 0usize;
    for line in fs::read_to_string(&table).unwrap().lines() {
        if line.starts_with('#') || line.starts_with("gauge") || line.starts_with("columns") {
            continue;
        }
        let cols: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse().unwrap())
            .collect();
        assert_eq!(cols.len(), 10);
        let (k, amp, s, lab) = (&cols[0..3], cols[3], &cols[4..7], &cols[7..10]);
        if amp <= 1e-300 {
            continue;
        }
        // radial polarization: s = (1, 0, 0) in the cylindrical gauge,
        // so the lab vector is the first frame axis
        assert!((s[0] - 1.0).abs() <= 1e-10, "{line}");
        assert!(s[1].abs() <= 1e-10 && s[2].abs() <= 1e-10, "{line}");
        let kvec = WaveVector::new(Vector3::new(k[0], k[1], k[2])).unwrap();
        let u = *local_frame(&kvec, &gauge).unwrap().u();
        for axis in 0..3 {
            assert!((lab[axis] - u[axis]).abs() <= 1e-10, "{line}");
        }
        checked += 1;
    }
    assert!(checked > 400, "expected most of 512 samples, got {checked}");
}

#[test]
fn uniform_beam_is_a_product_state_and_schmidt_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "uniform.toml",
        r#"
        kind = "uniform-gaussian"
        axis = [0.0, 0.0, 1.0]
        center_k = 5.0
        width = 1.0
        shape = [8, 8, 8]
        spacing = [0.5, 0.5, 0.5]
        gauge = [1.0, 0.0, 0.0]
        jones = [[0.7071067811865476, 0.0], [0.0, 0.7071067811865476]]
        "#,
    );
    let field = build_beam(dir.path(), &spec, "uniform.bin");
    let first = run(&["schmidt", field.to_str().unwrap()]);
    assert!(first.status.success());
    let text = stdout_text(&first);
    assert!(line_values(&text, "entropy")[0].abs() <= 1e-10);
    let sv = line_values(&text, "singular_values");
    assert!((sv[0] - 1.0).abs() <= 1e-7 && sv[1] <= 1e-7);

    let second = run(&["schmidt", field.to_str().unwrap()]);
    assert_eq!(first.stdout, second.stdout, "schmidt output must not drift");
}

#[test]
fn regauge_represent_preserves_the_field_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let original = build_beam(dir.path(), &radial_spec(dir.path()), "radial.bin");
    let mid = dir.path().join("mid.bin");
    let back = dir.path().join("back.bin");

    let output = run(&[
        "regauge",
        original.to_str().unwrap(),
        "--gauge",
        "1,0,0",
        "--mode",
        "represent",
        "--out",
        mid.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{}", stderr_text(&output));
    let output = run(&[
        "regauge",
        mid.to_str().unwrap(),
        "--gauge",
        "0,0,1",
        "--mode",
        "represent",
        "--out",
        back.to_str().unwrap(),
    ]);
    assert!(output.status.success());

    let (field, _) = io::read_file(&original).unwrap().to_momentum().unwrap();
    let (mid_field, mid_gauge) = io::read_file(&mid).unwrap().to_momentum().unwrap();
    let (back_field, _) = io::read_file(&back).unwrap().to_momentum().unwrap();
    let scale = field.max_amplitude();
    assert_eq!(*mid_gauge.direction(), Vector3::new(1.0, 0.0, 0.0));
    for i in 0..field.grid().len() {
        // representing in another gauge must not move the physical field
        let drift = (mid_field.values()[i] - field.values()[i]).norm() / scale;
        assert!(drift <= 1e-12, "sample {i}: represent drifted {drift:.3e}");
        let round = (back_field.values()[i] - field.values()[i]).norm() / scale;
        assert!(round <= 1e-12, "sample {i}: round trip drifted {round:.3e}");
    }
}

#[test]
fn regauge_rotate_with_the_same_gauge_changes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let original = build_beam(dir.path(), &radial_spec(dir.path()), "radial.bin");
    let out = dir.path().join("same.bin");
    let output = run(&[
        "regauge",
        original.to_str().unwrap(),
        "--gauge",
        "0,0,1",
        "--mode",
        "rotate",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let (field, _) = io::read_file(&original).unwrap().to_momentum().unwrap();
    let (same, _) = io::read_file(&out).unwrap().to_momentum().unwrap();
    let scale = field.max_amplitude();
    for i in 0..field.grid().len() {
        assert!((same.values()[i] - field.values()[i]).norm() / scale <= 1e-12);
    }
}

#[test]
fn regauge_rotate_turns_the_polarization_by_twice_the_frame_angle() {
    let dir = tempfile::tempdir().unwrap();
    let single = single_mode_file(dir.path());
    let rotated = dir.path().join("rotated.bin");

    // new gauge: e_z turned about k = e_x by pi/4, so the frame angle is pi/4
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let gauge_arg = format!("0,{},{}", -s, s);
    let output = run(&[
        "regauge",
        single.to_str().unwrap(),
        "--gauge",
        &gauge_arg,
        "--mode",
        "rotate",
        "--out",
        rotated.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{}", stderr_text(&output));

    // read the polarization back in the original gauge: turned by pi/2
    let table = dir.path().join("stokes.txt");
    let output = run(&[
        "stokes",
        rotated.to_str().unwrap(),
        "--gauge",
        "0,0,1",
        "--out",
        table.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let text = fs::read_to_string(&table).unwrap();
    let row = text
        .lines()
        .find(|l| !l.starts_with('#') && !l.starts_with("gauge") && !l.starts_with("columns"))
        .unwrap();
    let cols: Vec<f64> = row.split_whitespace().map(|t| t.parse().unwrap()).collect();
    let lab = &cols[7..10];
    assert!(lab[0].abs() <= 1e-10, "{row}");
    assert!((lab[1] - 1.0).abs() <= 1e-10, "{row}");
    assert!(lab[2].abs() <= 1e-10, "{row}");
}

#[test]
fn synth_writes_a_position_field_with_single_mode_magnitudes() {
    let dir = tempfile::tempdir().unwrap();
    // one hot mode on a 2^3 grid that stays clear of k = 0
    let layout = CartesianLayout {
        shape: [2, 2, 2],
        spacing: [0.5, 0.5, 0.5],
        origin: [1.0, -0.25, -0.25],
    };
    let k0 = Vector3::new(1.0, -0.25, -0.25);
    let pol = k0.cross(&Vector3::z()).normalize();
    let mut values = vec![[0.0; 6]; 8];
    values[0] = [pol.x, 0.0, pol.y, 0.0, pol.z, 0.0];
    let data = FieldData {
        space: Space::Momentum,
        layout,
        gauge: [0.0, 0.0, 1.0],
        time: 0.0,
        values,
    };
    let input = dir.path().join("mode.bin");
    io::write_file(&data, &input, FileFormat::Binary).unwrap();

    let run_synth = |t: Option<&str>, name: &str| -> PathBuf {
        let out = dir.path().join(name);
        let mut args = vec!["synth", input.to_str().unwrap()];
        if let Some(t) = t {
            args.extend(["--t", t]);
        }
        args.extend(["--out", out.to_str().unwrap(), "--format", "text"]);
        let output = run(&args);
        assert!(output.status.success(), "{}", stderr_text(&output));
        assert!(line_values(&stdout_text(&output), "divergence")[0] <= 1e-12);
        out
    };

    let magnitudes = |path: &Path| -> Vec<f64> {
        let data = io::read_file(path).unwrap();
        assert_eq!(data.space, Space::Position);
        data.values
            .iter()
            .map(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt())
            .collect()
    };

    let at_zero = run_synth(None, "t0.txt");
    let mags = magnitudes(&at_zero);
    // a single plane wave has the same magnitude at every point
    for m in &mags {
        assert!((m - mags[0]).abs() <= 1e-12 * mags[0]);
    }

    let later = run_synth(Some("2.5"), "t25.txt");
    let (pf, _) = io::read_file(&later).unwrap().to_position().unwrap();
    assert_eq!(pf.time(), 2.5);
    for (a, b) in magnitudes(&later).iter().zip(&mags) {
        assert!((a - b).abs() <= 1e-12 * b, "evolution must not change |E|");
    }
}

#[test]
fn text_and_binary_beam_outputs_carry_identical_values() {
    let dir = tempfile::tempdir().unwrap();
    let spec = radial_spec(dir.path());
    let text_out = dir.path().join("radial.txt");
    let bin_out = dir.path().join("radial.bin");
    for (path, format) in [(&text_out, "text"), (&bin_out, "bin")] {
        let output = run(&[
            "beam",
            spec.to_str().unwrap(),
            "--out",
            path.to_str().unwrap(),
            "--format",
            format,
        ]);
        assert!(output.status.success());
    }
    let a = io::read_file(&text_out).unwrap();
    let b = io::read_file(&bin_out).unwrap();
    assert_eq!(a, b, "the two encodings store the same field");
    assert!(fs::read_to_string(&text_out).unwrap().starts_with("# kpolar field v1"));
}

#[test]
fn check_passes_on_a_beam_and_flags_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let field = build_beam(dir.path(), &radial_spec(dir.path()), "radial.bin");

    let good = run(&["check", field.to_str().unwrap()]);
    assert!(good.status.success(), "{}", stderr_text(&good));
    let text = stdout_text(&good);
    assert!(text.contains("result PASS"));
    assert!(!text.contains("FAIL"));

    // push one sample off the transverse plane and the suite must say so
    let mut data = io::read_file(&field).unwrap();
    let k = Vector3::new(
        data.layout.origin[0],
        data.layout.origin[1],
        data.layout.origin[2],
    )
    .normalize();
    data.values[0][0] += 0.5 * k.x;
    data.values[0][2] += 0.5 * k.y;
    data.values[0][4] += 0.5 * k.z;
    let bad = dir.path().join("corrupt.bin");
    io::write_file(&data, &bad, FileFormat::Binary).unwrap();

    let output = run(&["check", bad.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(4));
    let err = stderr_text(&output);
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error[check-failed]:"), "{err}");
    let text = stdout_text(&output);
    assert!(text.contains("transversality"));
    assert!(text.contains("result FAIL"));
}

#[test]
fn missing_input_exits_two_with_io_code() {
    let output = run(&["check", "/nonexistent/field.bin"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_text(&output).starts_with("error[io]:"));
}

#[test]
fn stokes_with_a_singular_gauge_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let single = single_mode_file(dir.path());
    let table = dir.path().join("stokes.txt");
    // k = e_x, so the e_x gauge is singular on this grid
    let output = run(&[
        "stokes",
        single.to_str().unwrap(),
        "--gauge",
        "1,0,0",
        "--out",
        table.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(3));
    assert!(stderr_text(&output).starts_with("error[singular-gauge]:"));
}
