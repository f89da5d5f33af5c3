#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn casimir(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(args)
        .current_dir(dir)
        .env_remove("RUST_LOG")
        .output()
        .expect("spawn casimir")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub fn read(path: impl AsRef<Path>) -> String {
    let path = path.as_ref();
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn json(path: impl AsRef<Path>) -> serde_json::Value {
    serde_json::from_str(&read(path)).expect("valid json")
}

/// Data rows of a CSV file (header dropped), split on commas.
pub fn csv_rows(path: impl AsRef<Path>) -> Vec<Vec<String>> {
    read(path)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

pub fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: {s}"))
}

/// Drude table with Re ε and Im ε, ωp = 9 eV and γ = 0.035 eV.
pub fn write_drude_table(dir: &Path) -> PathBuf {
    let (wp, g) = (9.0f64, 0.035f64);
    let mut text = String::from("omega_eV,im_eps,re_eps\n");
    let n = 300;
    for i in 0..=n {
        let w = 1e-3 * 1e6f64.powf(i as f64 / n as f64);
        let im = wp * wp * g / (w * (w * w + g * g));
        let re = 1.0 - wp * wp / (w * w + g * g);
        text.push_str(&format!("{w:.12e},{im:.12e},{re:.12e}\n"));
    }
    let path = dir.join("drude_table.csv");
    std::fs::write(&path, text).unwrap();
    path
}

pub const FIXTURE_EXCLUDED: (f64, f64) = (310.0, 390.0);

/// Synthetic experiment built on a theory curve: every point lies inside
/// the 95% interval, and the points in `FIXTURE_EXCLUDED` lie outside the
/// 70% interval (normal distribution, default band and RSS combination).
pub fn write_band_fixture(dir: &Path) -> PathBuf {
    let pressure = casimir(
        dir,
        &[
            "--model",
            "drude",
            "--plasma-frequency",
            "8.9",
            "--relaxation",
            "0.0357",
            "--output",
            "fixture_theory",
            "pressure",
            "--start",
            "160",
            "--stop",
            "750",
            "--count",
            "60",
        ],
    );
    assert!(pressure.status.success(), "{}", stderr(&pressure));
    let mut text = String::from("# synthetic fixture\n# delta_a_nm = 0.6\na_nm,P_mPa,Xi95_mPa\n");
    for (i, row) in csv_rows(dir.join("fixture_theory/pressure.csv")).iter().enumerate() {
        let a = 160.0 + 10.0 * i as f64;
        let p = num(&row[1]);
        let xi_exp = 0.5 + 0.01 * p.abs();
        let xi = xi_exp.hypot(0.005 * p.abs());
        let inside_70 = !(a >= FIXTURE_EXCLUDED.0 && a <= FIXTURE_EXCLUDED.1);
        let d = if inside_70 { 0.3 * xi } else { 0.75 * xi };
        let d = if i % 2 == 0 { d } else { -d };
        text.push_str(&format!("{a},{:.12e},{xi_exp:.12e}\n", p - d));
    }
    let path = dir.join("band_experiment.csv");
    std::fs::write(&path, text).unwrap();
    path
}

pub fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}
