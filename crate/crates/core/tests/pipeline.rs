use std::io::Cursor;

use casimir_core::comparison::{
    difference_analysis, CombinationRule, ConfidenceLevel, ConfidenceSpec, Distribution, ExperimentDataset, Verdict,
};
use casimir_core::lifshitz::{pressure_curve, pressure_t0, QuadratureSettings};
use casimir_core::permittivity::{
    drude_eps_imag, DrudeParams, LowFrequencyExtension, MergedSpectrum, OpticalTable, PermittivityModel, TailPolicy,
};
use casimir_core::roughness::{rough_pressure, RoughnessProfile};
use casimir_core::Error;

fn drude_csv(wp: f64, g: f64) -> String {
    let mut s = String::from("# synthetic Drude metal\nomega_eV,im_eps\n");
    for i in 0..=240 {
        let w = 0.1 * 1e5f64.powf(i as f64 / 240.0);
        s.push_str(&format!("{w:.10e},{:.10e}\n", wp * wp * g / (w * (w * w + g * g))));
    }
    s
}

#[test]
fn tabulated_pressure_tracks_analytic_model() {
    let p = DrudeParams::new(9.0, 0.035).unwrap();
    let table = OpticalTable::from_csv_reader(Cursor::new(drude_csv(9.0, 0.035)), "drude.csv").unwrap();
    let spectrum = MergedSpectrum::new(table, LowFrequencyExtension::Drude(p), TailPolicy::PowerLaw).unwrap();
    let tabulated = PermittivityModel::tabulated(spectrum);
    for xi in [0.2, 2.0, 20.0] {
        let e = tabulated.eps_imag(xi).unwrap();
        assert!((e / drude_eps_imag(xi, &p).unwrap() - 1.0).abs() < 2e-3);
    }
    let s = QuadratureSettings::default();
    let exact = pressure_t0(300.0, &PermittivityModel::drude(p), &s).unwrap();
    let kk = pressure_t0(300.0, &tabulated, &s).unwrap();
    assert!(
        (kk.pressure_mpa / exact.pressure_mpa - 1.0).abs() < 1e-3,
        "{kk:?} vs {exact:?}"
    );
}

#[test]
fn rough_curve_from_profile_files() {
    let model = PermittivityModel::drude(DrudeParams::new(8.9, 0.0357).unwrap());
    let s = QuadratureSettings::default();
    let plate = RoughnessProfile::from_csv_reader(Cursor::new("v,h_nm\n0.25,0\n0.5,4\n0.25,8\n"), "plate.csv").unwrap();
    let sphere = RoughnessProfile::from_csv_reader(Cursor::new("v,h_nm\n1,0\n"), "sphere.csv").unwrap();
    let curve = pressure_curve(&[200.0, 300.0, 400.0], &model, &s, None).unwrap();
    for point in &curve {
        let rough = rough_pressure(point.separation_nm, &plate, &sphere, |d| {
            pressure_t0(d, &model, &s).map(|p| p.pressure_mpa)
        })
        .unwrap();
        let excess = rough / point.pressure_mpa - 1.0;
        assert!(excess > 0.0 && excess < 0.01, "a = {}: {excess}", point.separation_nm);
    }
}

#[test]
fn comparison_from_experiment_file() {
    let model = PermittivityModel::plasma(8.9);
    let s = QuadratureSettings::default();
    let grid = [250.0, 300.0, 350.0, 400.0];
    let theory: Vec<f64> = pressure_curve(&grid, &model, &s, None)
        .unwrap()
        .iter()
        .map(|p| p.pressure_mpa)
        .collect();
    let mut csv = String::from("# temperature_K: 300\na_nm,P_mPa,Xi95_mPa\n");
    for (a, p) in grid.iter().zip(&theory) {
        csv.push_str(&format!("{a},{},{}\n", p * 1.01, 0.004 * p.abs()));
    }
    let data = ExperimentDataset::from_csv_reader(Cursor::new(csv), "exp.csv").unwrap();
    assert_eq!(data.temperature_k, Some(300.0));
    let specs = [
        ConfidenceSpec::new(ConfidenceLevel::P95, Distribution::Normal),
        ConfidenceSpec::new(ConfidenceLevel::P70, Distribution::Normal),
    ];
    let report = difference_analysis("plasma", &theory, &data, &specs, 0.005, CombinationRule::Rss).unwrap();
    // 1% offsets against a combined 95% half-width of about 0.64%
    assert!(report.levels.iter().all(|l| l.verdict == Verdict::Excluded));
    assert_eq!(report.levels[0].exclusion_intervals.len(), 1);

    let wide = difference_analysis("plasma", &theory, &data, &specs, 0.02, CombinationRule::LinearSum).unwrap();
    assert_eq!(wide.levels[0].verdict, Verdict::Consistent);
}

#[test]
fn grid_errors_name_the_failing_point() {
    let model = PermittivityModel::plasma(8.9);
    let err = pressure_curve(&[100.0, 200.0, 150.0], &model, &QuadratureSettings::default(), None).unwrap_err();
    assert!(matches!(err, Error::Validation(_)), "{err:?}");
    let bare = PermittivityModel::tabulated(MergedSpectrum::windowed(
        OpticalTable::from_csv_reader(Cursor::new(drude_csv(9.0, 0.035)), "t").unwrap(),
    ));
    let err = pressure_curve(&[100.0, 200.0], &bare, &QuadratureSettings::default(), Some(300.0)).unwrap_err();
    assert!(matches!(err, Error::AtGridPoint { index: 0, .. }), "{err:?}");
}
