//! Command implementations.

use std::path::{Path, PathBuf};

use casimir_core::comparison::patch_area_check;
use casimir_core::comparison::{
    band_cross_overlap, difference_analysis, normality_probe, scale_half_width, theory_band, ComparisonReport,
    ConfidenceLevel, ConfidenceSpec, Cross, ExperimentDataset, NormalityProbe, DEFAULT_DELTA_A_NM,
    NORMALITY_MIN_SAMPLES,
};
use casimir_core::lifshitz::{pressure_matsubara, pressure_t0, PressurePoint};
use casimir_core::permittivity::{find_window_roots, PermittivityModel};
use casimir_core::roughness::{rough_pressure, RoughnessProfile};
use casimir_core::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Format, GridConfig, ModelConfig, RunConfig, Spacing, WindowConfig};
use crate::format::{csv_table, sig10};
use crate::interp::CubicSpline;
use crate::report::{self, Context};

pub const DEFAULT_XI_GRID: GridConfig = GridConfig {
    start: 0.01,
    stop: 100.0,
    count: 41,
    spacing: Spacing::Log,
};

/// Experimental and grid separations closer than this (relative) match.
const MATCH_RELATIVE: f64 = 1e-9;

#[derive(Debug, Serialize)]
struct ModelInfo {
    tag: String,
    kind: &'static str,
    label: String,
}

impl ModelInfo {
    fn new(cfg: &ModelConfig, model: &PermittivityModel) -> Self {
        ModelInfo {
            tag: cfg.tag(),
            kind: cfg.kind(),
            label: model.label(),
        }
    }
}

#[derive(Debug, Default, Serialize)]
struct Diagnostics {
    #[serde(skip_serializing_if = "Option::is_none")]
    kk_junction_jump: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    window_guard_threshold: Option<f64>,
    warnings: Vec<String>,
}

impl Diagnostics {
    fn for_model(model: &PermittivityModel) -> Self {
        let mut d = Diagnostics::default();
        match model {
            PermittivityModel::Tabulated { spectrum, .. } => d.kk_junction_jump = spectrum.junction_jump(),
            PermittivityModel::Windowed { kk, .. } if kk.window().is_some() => {
                d.window_guard_threshold = Some(kk.guard_threshold())
            }
            _ => {}
        }
        d
    }

    fn warn(&mut self, msg: String) {
        log::warn!("{msg}");
        self.warnings.push(msg);
    }
}

fn fmt_row(values: &[f64]) -> Vec<String> {
    values.iter().map(|&v| sig10(v)).collect()
}

fn header(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

fn level_label(level: ConfidenceLevel) -> &'static str {
    match level {
        ConfidenceLevel::P95 => "95",
        ConfidenceLevel::P70 => "70",
    }
}

#[derive(Debug, Serialize)]
struct EpsRow {
    xi_ev: f64,
    eps: f64,
}

pub fn epsilon(cfg: &RunConfig, ctx: &Context) -> Result<()> {
    let grid = cfg.xi_grid.unwrap_or(DEFAULT_XI_GRID).points()?;
    let range = (grid[0], grid[grid.len() - 1]);
    let model = cfg.model.build(Some(range))?;
    let mut diag = Diagnostics::for_model(&model);
    let mut rows = Vec::with_capacity(grid.len());
    for (index, &xi) in grid.iter().enumerate() {
        match model.eps_imag(xi) {
            Ok(eps) => rows.push(EpsRow { xi_ev: xi, eps }),
            Err(e @ Error::NearRoot { .. }) => diag.warn(format!("xi = {} eV: {e}; row omitted", sig10(xi))),
            Err(e) => {
                return Err(Error::AtGridPoint {
                    index,
                    source: Box::new(e),
                })
            }
        }
    }
    if cfg.format.csv() {
        let body: Vec<_> = rows.iter().map(|r| fmt_row(&[r.xi_ev, r.eps])).collect();
        report::write(
            &cfg.output,
            "epsilon.csv",
            &csv_table(&header(&["xi_eV", "eps"]), &body),
        )?;
    }
    if cfg.format.json() {
        #[derive(Serialize)]
        struct Body<'a> {
            model: ModelInfo,
            rows: &'a [EpsRow],
            diagnostics: &'a Diagnostics,
        }
        let body = Body {
            model: ModelInfo::new(&cfg.model, &model),
            rows: &rows,
            diagnostics: &diag,
        };
        report::write(
            &cfg.output,
            "epsilon.json",
            &report::render_json(ctx, "epsilon", Some(cfg), body),
        )?;
    }
    println!(
        "epsilon: {} rows ({} omitted) -> {}",
        rows.len(),
        grid.len() - rows.len(),
        cfg.output.display()
    );
    Ok(())
}

/// Smooth pressure and, with profiles, the roughness-averaged pressure.
#[derive(Debug, Clone, Copy, Serialize)]
struct Evaluated {
    separation_nm: f64,
    pressure_mpa: f64,
    error_mpa: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    rough_pressure_mpa: Option<f64>,
}

impl Evaluated {
    fn theory(&self) -> f64 {
        self.rough_pressure_mpa.unwrap_or(self.pressure_mpa)
    }
}

type Profiles = (RoughnessProfile, RoughnessProfile);

fn smooth_at(a: f64, model: &PermittivityModel, cfg: &RunConfig) -> Result<PressurePoint> {
    match cfg.temperature() {
        None => pressure_t0(a, model, &cfg.quadrature),
        Some(t) => pressure_matsubara(a, t, model, &cfg.quadrature),
    }
}

/// One result per separation, evaluated in parallel and returned in grid
/// order.
fn evaluate(
    grid: &[f64],
    model: &PermittivityModel,
    cfg: &RunConfig,
    rough: Option<&Profiles>,
) -> Vec<Result<Evaluated>> {
    cfg.quadrature.validate().map_or_else(
        |e| {
            let msg = e.to_string();
            grid.iter().map(|_| Err(Error::config(msg.clone()))).collect()
        },
        |()| {
            grid.par_iter()
                .map(|&a| {
                    let p = smooth_at(a, model, cfg)?;
                    let rough_pressure_mpa = rough
                        .map(|(plate, sphere)| {
                            rough_pressure(a, plate, sphere, |d| smooth_at(d, model, cfg).map(|p| p.pressure_mpa))
                        })
                        .transpose()?;
                    Ok(Evaluated {
                        separation_nm: a,
                        pressure_mpa: p.pressure_mpa,
                        error_mpa: p.error_mpa,
                        rough_pressure_mpa,
                    })
                })
                .collect()
        },
    )
}

fn load_roughness(cfg: &RunConfig) -> Result<Option<Profiles>> {
    let Some(r) = &cfg.roughness else {
        return Ok(None);
    };
    let load = |p: &Option<PathBuf>| match p {
        Some(path) => RoughnessProfile::from_csv_path(path),
        None => Ok(RoughnessProfile::flat()),
    };
    Ok(Some((load(&r.plate)?, load(&r.sphere)?)))
}

pub fn pressure(cfg: &RunConfig, ctx: &Context) -> Result<()> {
    let grid = cfg
        .grid
        .ok_or_else(|| Error::config("pressure needs a separation grid (config `grid` or --start/--stop/--count)"))?
        .points()?;
    let model = cfg.model.build(None)?;
    let rough = load_roughness(cfg)?;
    let diag = Diagnostics::for_model(&model);

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (index, r) in evaluate(&grid, &model, cfg, rough.as_ref()).into_iter().enumerate() {
        match r {
            Ok(e) => rows.push(e),
            Err(e) => {
                log::error!("a = {} nm: {e}", sig10(grid[index]));
                failures.push((index, e));
            }
        }
    }

    if cfg.format.csv() {
        let mut names = vec!["a_nm", "P_mPa", "err_mPa"];
        if rough.is_some() {
            names.push("P_rough_mPa");
        }
        let body: Vec<_> = rows
            .iter()
            .map(|r| {
                let mut v = vec![r.separation_nm, r.pressure_mpa, r.error_mpa];
                v.extend(r.rough_pressure_mpa);
                fmt_row(&v)
            })
            .collect();
        report::write(&cfg.output, "pressure.csv", &csv_table(&header(&names), &body))?;
        if !failures.is_empty() {
            let body: Vec<_> = failures
                .iter()
                .map(|(i, e)| {
                    vec![
                        sig10(grid[*i]),
                        format!("{:?}", e.class()).to_lowercase(),
                        csv_quote(&e.to_string()),
                    ]
                })
                .collect();
            report::write(
                &cfg.output,
                "pressure_errors.csv",
                &csv_table(&header(&["a_nm", "class", "message"]), &body),
            )?;
        }
    }
    if cfg.format.json() {
        #[derive(Serialize)]
        struct Failure {
            separation_nm: f64,
            message: String,
        }
        #[derive(Serialize)]
        struct Body<'a> {
            model: ModelInfo,
            temperature_k: f64,
            points: &'a [Evaluated],
            failures: Vec<Failure>,
            diagnostics: &'a Diagnostics,
        }
        let body = Body {
            model: ModelInfo::new(&cfg.model, &model),
            temperature_k: cfg.temperature_k,
            points: &rows,
            failures: failures
                .iter()
                .map(|(i, e)| Failure {
                    separation_nm: grid[*i],
                    message: e.to_string(),
                })
                .collect(),
            diagnostics: &diag,
        };
        report::write(
            &cfg.output,
            "pressure.json",
            &report::render_json(ctx, "pressure", Some(cfg), body),
        )?;
    }
    println!(
        "pressure: {} of {} points -> {}",
        rows.len(),
        grid.len(),
        cfg.output.display()
    );
    match failures.into_iter().next() {
        None => Ok(()),
        Some((index, source)) => Err(Error::AtGridPoint {
            index,
            source: Box::new(source),
        }),
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= MATCH_RELATIVE * a.abs().max(1.0)
}

/// Theory at the experimental separations: evaluated there directly, or
/// taken from the configured grid (exact matches, or cubic interpolation
/// when enabled).
fn theory_at(
    separations: &[f64],
    model: &PermittivityModel,
    cfg: &RunConfig,
    rough: Option<&Profiles>,
    diag: &mut Diagnostics,
) -> Result<Vec<f64>> {
    let collect = |points: &[f64]| -> Result<Vec<f64>> {
        evaluate(points, model, cfg, rough)
            .into_iter()
            .enumerate()
            .map(|(index, r)| {
                r.map(|e| e.theory()).map_err(|source| Error::AtGridPoint {
                    index,
                    source: Box::new(source),
                })
            })
            .collect()
    };
    let Some(grid_cfg) = cfg.grid else {
        return collect(separations);
    };
    let grid = grid_cfg.points()?;
    let lookup: Vec<Option<usize>> = separations
        .iter()
        .map(|&a| {
            let k = grid.partition_point(|&g| g < a);
            [k.checked_sub(1), Some(k)]
                .into_iter()
                .flatten()
                .find(|&i| i < grid.len() && close(grid[i], a))
        })
        .collect();
    let unmatched: Vec<f64> = separations
        .iter()
        .zip(&lookup)
        .filter(|(_, m)| m.is_none())
        .map(|(a, _)| *a)
        .collect();
    if !unmatched.is_empty() && !cfg.interpolate {
        return Err(Error::Alignment { unmatched });
    }
    let values = collect(&grid)?;
    if unmatched.is_empty() {
        return Ok(lookup.iter().map(|m| values[m.expect("matched")]).collect());
    }
    if grid.len() < 2 {
        return Err(Error::Alignment { unmatched });
    }
    // P ~ a^-4 is nearly linear in log-log, which the spline follows far better
    let log_log = values.iter().all(|&v| v < 0.0);
    let spline = if log_log {
        let x: Vec<f64> = grid.iter().map(|a| a.ln()).collect();
        let y: Vec<f64> = values.iter().map(|p| (-p).ln()).collect();
        CubicSpline::new(&x, &y)?
    } else {
        CubicSpline::new(&grid, &values)?
    };
    let mut outside = Vec::new();
    let out: Vec<f64> = separations
        .iter()
        .zip(&lookup)
        .map(|(&a, m)| match m {
            Some(i) => values[*i],
            None => {
                let v = if log_log {
                    spline.eval(a.ln()).map(|y| -y.exp())
                } else {
                    spline.eval(a)
                };
                v.unwrap_or_else(|| {
                    outside.push(a);
                    f64::NAN
                })
            }
        })
        .collect();
    if !outside.is_empty() {
        return Err(Error::Alignment { unmatched: outside });
    }
    diag.warn(format!(
        "theory interpolated (cubic spline) at {} of {} experimental separations",
        unmatched.len(),
        separations.len()
    ));
    Ok(out)
}

#[derive(Debug, Serialize)]
struct OverlapSummary {
    level: ConfidenceLevel,
    delta_a_nm: f64,
    overlapping_points: usize,
    total_points: usize,
}

pub fn compare(cfg: &RunConfig, ctx: &Context) -> Result<()> {
    let path = cfg
        .experiment
        .as_ref()
        .ok_or_else(|| Error::config("compare needs an experiment file (config `experiment` or --experiment)"))?;
    let data = ExperimentDataset::from_csv_path(path)?;
    let delta_a95 = cfg.delta_a_nm.or(data.delta_a_nm).unwrap_or(DEFAULT_DELTA_A_NM);
    if !(delta_a95 >= 0.0 && delta_a95.is_finite()) {
        return Err(Error::config(format!(
            "separation uncertainty must be >= 0, got {delta_a95}"
        )));
    }
    let specs = cfg.confidence_specs();
    let models: Vec<&ModelConfig> = std::iter::once(&cfg.model).chain(&cfg.additional_models).collect();
    let tags: Vec<String> = models.iter().map(|m| m.tag()).collect();
    for (i, t) in tags.iter().enumerate() {
        if tags[..i].contains(t) {
            return Err(Error::config(format!(
                "model tag `{t}` used twice; set distinct `tag` fields"
            )));
        }
    }
    let rough = load_roughness(cfg)?;
    let separations = data.separations();

    for (m, tag) in models.iter().zip(&tags) {
        let dir = if models.len() > 1 {
            cfg.output.join(tag)
        } else {
            cfg.output.clone()
        };
        let model = m.build(None)?;
        let mut diag = Diagnostics::for_model(&model);
        if let Some(t) = data.temperature_k {
            if (t - cfg.temperature_k).abs() > 1e-9 {
                diag.warn(format!(
                    "experiment file records T = {} K but theory uses T = {} K",
                    sig10(t),
                    sig10(cfg.temperature_k)
                ));
            }
        }
        let theory = theory_at(&separations, &model, cfg, rough.as_ref(), &mut diag)?;
        let report = difference_analysis(tag, &theory, &data, &specs, cfg.theory_band_fraction, cfg.combination)?;

        let pairs: Vec<(f64, f64)> = separations.iter().copied().zip(theory.iter().copied()).collect();
        let mut band_columns = Vec::new();
        let mut overlaps = Vec::new();
        for spec in &specs {
            let band = theory_band(&pairs, cfg.theory_band_fraction, spec)?;
            let delta_a = delta_a95 / spec.ratio();
            let crosses = data
                .points()
                .iter()
                .map(|p| {
                    Ok(Cross {
                        separation_nm: p.separation_nm,
                        pressure_mpa: p.pressure_mpa,
                        half_width_mpa: scale_half_width(p.xi95_mpa, spec)?,
                        delta_a_nm: delta_a,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let flags = band_cross_overlap(&band, &crosses)?;
            overlaps.push(OverlapSummary {
                level: spec.level,
                delta_a_nm: delta_a,
                overlapping_points: flags.iter().filter(|&&f| f).count(),
                total_points: flags.len(),
            });
            band_columns.push((*spec, band, crosses, flags));
        }

        let differences: Vec<f64> = report.points.iter().map(|p| p.difference_mpa).collect();
        let normality = if differences.len() >= NORMALITY_MIN_SAMPLES {
            match normality_probe(&differences, None) {
                Ok(n) => Some(n),
                Err(e) => {
                    diag.warn(format!("normality probe skipped: {e}"));
                    None
                }
            }
        } else {
            None
        };

        write_band_cross(&dir, &pairs, &data, &band_columns)?;
        write_differences(&dir, &report, &specs)?;
        #[derive(Serialize)]
        struct Body<'a> {
            model: ModelInfo,
            experiment: &'a str,
            temperature_k: f64,
            delta_a95_nm: f64,
            comparison: &'a ComparisonReport,
            band_cross: &'a [OverlapSummary],
            #[serde(skip_serializing_if = "Option::is_none")]
            difference_normality: Option<NormalityProbe>,
            diagnostics: &'a Diagnostics,
        }
        let body = Body {
            model: ModelInfo::new(m, &model),
            experiment: &data.provenance,
            temperature_k: cfg.temperature_k,
            delta_a95_nm: delta_a95,
            comparison: &report,
            band_cross: &overlaps,
            difference_normality: normality,
            diagnostics: &diag,
        };
        report::write(
            &dir,
            "report.json",
            &report::render_json(ctx, "compare", Some(cfg), body),
        )?;

        let verdicts: Vec<String> = report
            .levels
            .iter()
            .map(|l| {
                let intervals: Vec<String> = l
                    .exclusion_intervals
                    .iter()
                    .map(|iv| format!("{}-{} nm", sig10(iv.start_nm), sig10(iv.end_nm)))
                    .collect();
                if intervals.is_empty() {
                    format!("{}: {:?}", l.spec.level, l.verdict).to_lowercase()
                } else {
                    format!("{}: excluded on {}", l.spec.level, intervals.join(", "))
                }
            })
            .collect();
        println!("compare [{tag}]: {} -> {}", verdicts.join("; "), dir.display());
    }
    Ok(())
}

type BandColumns = (
    ConfidenceSpec,
    Vec<casimir_core::comparison::BandPoint>,
    Vec<Cross>,
    Vec<bool>,
);

fn write_band_cross(
    dir: &Path,
    theory: &[(f64, f64)],
    data: &ExperimentDataset,
    columns: &[BandColumns],
) -> Result<()> {
    let mut names = header(&["a_nm", "P_theory_mPa", "P_exp_mPa"]);
    for (spec, ..) in columns {
        let l = level_label(spec.level);
        names.extend([
            format!("band_lo_{l}_mPa"),
            format!("band_hi_{l}_mPa"),
            format!("Xi_exp_{l}_mPa"),
            format!("delta_a_{l}_nm"),
            format!("overlap_{l}"),
        ]);
    }
    let rows: Vec<Vec<String>> = theory
        .iter()
        .zip(data.points())
        .enumerate()
        .map(|(i, (&(a, p), e))| {
            let mut row = fmt_row(&[a, p, e.pressure_mpa]);
            for (_, band, crosses, flags) in columns {
                row.extend(fmt_row(&[
                    band[i].lo_mpa,
                    band[i].hi_mpa,
                    crosses[i].half_width_mpa,
                    crosses[i].delta_a_nm,
                ]));
                row.push(flags[i].to_string());
            }
            row
        })
        .collect();
    report::write(dir, "band_cross.csv", &csv_table(&names, &rows))
}

fn write_differences(dir: &Path, report: &ComparisonReport, specs: &[ConfidenceSpec]) -> Result<()> {
    let mut names = header(&["a_nm", "diff_mPa"]);
    names.extend(specs.iter().map(|s| format!("Xi_{}_mPa", level_label(s.level))));
    let rows: Vec<Vec<String>> = report
        .points
        .iter()
        .map(|p| {
            let mut v = vec![p.separation_nm, p.difference_mpa];
            v.extend(&p.half_widths_mpa);
            fmt_row(&v)
        })
        .collect();
    report::write(dir, "differences.csv", &csv_table(&names, &rows))
}

pub fn window_roots(window: &WindowConfig, lo: f64, hi: f64, dir: &Path, format: Format, ctx: &Context) -> Result<()> {
    let params = window.params()?;
    let roots = find_window_roots(&params, lo, hi)?;
    if format.csv() {
        let rows: Vec<_> = roots.iter().map(|&r| fmt_row(&[r])).collect();
        report::write(dir, "window_roots.csv", &csv_table(&header(&["root_eV"]), &rows))?;
    }
    if format.json() {
        #[derive(Serialize)]
        struct Body<'a> {
            window: &'a WindowConfig,
            search_range_ev: (f64, f64),
            roots_ev: &'a [f64],
        }
        let body = Body {
            window,
            search_range_ev: (lo, hi),
            roots_ev: &roots,
        };
        report::write(
            dir,
            "window_roots.json",
            &report::render_json(ctx, "window-roots", None, body),
        )?;
    }
    if roots.is_empty() {
        println!("window-roots: none in [{}, {}] eV", sig10(lo), sig10(hi));
    }
    for r in &roots {
        println!("window-roots: {} eV", sig10(*r));
    }
    Ok(())
}

pub fn patch_check(grain_nm: f64, radius_um: f64, a_nm: f64, dir: &Path, format: Format, ctx: &Context) -> Result<()> {
    let check = patch_area_check(grain_nm, radius_um, a_nm)?;
    if format.csv() {
        let mut row = fmt_row(&[
            grain_nm,
            radius_um,
            a_nm,
            check.patch_area_um2,
            check.effective_area_um2,
        ]);
        row.push(check.small_patch_regime.to_string());
        let names = header(&[
            "grain_nm",
            "radius_um",
            "a_nm",
            "S_p_um2",
            "S_eff_um2",
            "small_patch_regime",
        ]);
        report::write(dir, "patch_check.csv", &csv_table(&names, &[row]))?;
    }
    if format.json() {
        #[derive(Serialize)]
        struct Body {
            grain_nm: f64,
            radius_um: f64,
            separation_nm: f64,
            check: casimir_core::comparison::PatchCheck,
        }
        let body = Body {
            grain_nm,
            radius_um,
            separation_nm: a_nm,
            check,
        };
        report::write(
            dir,
            "patch_check.json",
            &report::render_json(ctx, "patch-check", None, body),
        )?;
    }
    println!(
        "patch-check: S_p = {} um^2, S_eff = {} um^2, small-patch regime: {}",
        sig10(check.patch_area_um2),
        sig10(check.effective_area_um2),
        check.small_patch_regime
    );
    Ok(())
}
