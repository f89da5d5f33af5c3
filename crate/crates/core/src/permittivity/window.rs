//! Window-function generalisation of the Kramers-Kronig relation.
//!
//! With f analytic in the upper half plane and f(−ω*) = f*(ω),
//!
//! ε(iξ) = 1 + 2/(π f(iξ)) ∫₀^∞ ω/(ω²+ξ²) {Im f(ω)[Re ε(ω) − 1] + Re f(ω) Im ε(ω)} dω
//!
//! and the family used here is
//! f(z) = z^{2p+1} [(z − Ω)^{−(2q+1)} + (z + Ω*)^{−(2q+1)}].
//!
//! The relation breaks down near roots of f(iξ); evaluations there are
//! rejected with [`Error::NearRoot`] instead of being returned.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::table::OpticalTable;
use crate::error::{Error, Result};
use crate::quadrature::{try_integrate, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowParams {
    /// Ω in eV; Im Ω < 0.
    pub omega: Complex64,
    pub p: u32,
    pub q: u32,
}

impl WindowParams {
    pub fn new(omega: Complex64, p: u32, q: u32) -> Result<Self> {
        let w = WindowParams { omega, p, q };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega.im < 0.0) || !self.omega.re.is_finite() {
            return Err(Error::validation(format!(
                "window needs Im Omega < 0, got {}",
                self.omega
            )));
        }
        if self.p >= self.q {
            return Err(Error::validation(format!(
                "window needs p < q, got p = {}, q = {}",
                self.p, self.q
            )));
        }
        Ok(())
    }
}

/// f(z) for complex z (eV).
pub fn window_function(z: Complex64, params: &WindowParams) -> Result<Complex64> {
    let omega = params.omega;
    let d1 = z - omega;
    let d2 = z + omega.conj();
    let scale = 1e-14 * (1.0 + omega.norm());
    if d1.norm() <= scale || d2.norm() <= scale {
        return Err(Error::domain(format!("window function has a pole at z = {z}")));
    }
    let n = -(2 * params.q as i32 + 1);
    Ok(z.powi(2 * params.p as i32 + 1) * (d1.powi(n) + d2.powi(n)))
}

/// f(iξ), which is real by the symmetry f(−z*) = f*(z).
pub fn window_on_imaginary_axis(xi: f64, params: &WindowParams) -> Result<f64> {
    Ok(window_function(Complex64::new(0.0, xi), params)?.re)
}

/// Sign changes of f(iξ) on `[lo, hi]`, refined by bisection to 1e−9 eV.
pub fn find_window_roots(params: &WindowParams, lo: f64, hi: f64) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::domain(format!(
            "root search range must satisfy 0 < lo < hi, got [{lo}, {hi}]"
        )));
    }
    const SAMPLES: usize = 4000;
    let ratio = (hi / lo).ln();
    let at = |i: usize| lo * (ratio * i as f64 / SAMPLES as f64).exp();
    let f = |x: f64| window_on_imaginary_axis(x, params);

    let mut roots = Vec::new();
    let mut x0 = lo;
    let mut f0 = f(x0)?;
    for i in 1..=SAMPLES {
        let x1 = if i == SAMPLES { hi } else { at(i) };
        let f1 = f(x1)?;
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0.signum() != f1.signum() && f1 != 0.0 {
            let (mut a, mut b, mut fa) = (x0, x1, f0);
            while b - a > 1e-9 {
                let m = 0.5 * (a + b);
                let fm = f(m)?;
                if fm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if fm.signum() == fa.signum() {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
        if i == SAMPLES && f1 == 0.0 {
            roots.push(x1);
        }
        x0 = x1;
        f0 = f1;
    }
    Ok(roots)
}

/// Near-root guard: ξ is rejected when |f(iξ)| < `relative` · max|f(iξ)| over
/// `range`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootGuard {
    pub relative: f64,
    pub range: (f64, f64),
}

pub const DEFAULT_GUARD_RELATIVE: f64 = 1e-3;

/// ε(iξ) from a table carrying both Re ε and Im ε through the windowed
/// relation, restricted to the tabulated window.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowedKk {
    table: OpticalTable,
    window: Option<WindowParams>,
    guard: RootGuard,
    max_abs_f: f64,
    rel_tol: f64,
}

impl WindowedKk {
    /// `window = None` bypasses the window (f ≡ 1), reducing to the standard
    /// relation on the tabulated window. The guard range defaults to the
    /// table's frequency span.
    pub fn new(table: OpticalTable, window: Option<WindowParams>, guard: Option<RootGuard>) -> Result<Self> {
        if !table.has_re_eps() {
            return Err(Error::validation(
                "windowed Kramers-Kronig needs Re eps in the optical table",
            ));
        }
        if let Some(w) = &window {
            w.validate()?;
        }
        let guard = guard.unwrap_or(RootGuard {
            relative: DEFAULT_GUARD_RELATIVE,
            range: (table.omega_min(), table.omega_max()),
        });
        if !(guard.range.0 > 0.0 && guard.range.1 > guard.range.0) || !(guard.relative >= 0.0) {
            return Err(Error::validation("invalid near-root guard configuration"));
        }
        let max_abs_f = match &window {
            Some(w) => max_abs_on_axis(w, guard.range)?,
            None => 1.0,
        };
        Ok(WindowedKk {
            table,
            window,
            guard,
            max_abs_f,
            rel_tol: 1e-8,
        })
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn table(&self) -> &OpticalTable {
        &self.table
    }

    pub fn window(&self) -> Option<&WindowParams> {
        self.window.as_ref()
    }

    pub fn guard(&self) -> &RootGuard {
        &self.guard
    }

    /// Absolute guard threshold on |f(iξ)|.
    pub fn guard_threshold(&self) -> f64 {
        self.guard.relative * self.max_abs_f
    }

    pub fn eval(&self, xi: f64) -> Result<f64> {
        windowed_kk(self, xi)
    }
}

fn max_abs_on_axis(w: &WindowParams, (lo, hi): (f64, f64)) -> Result<f64> {
    const SAMPLES: usize = 2000;
    let ratio = (hi / lo).ln();
    let mut best = 0.0f64;
    for i in 0..=SAMPLES {
        let xi = lo * (ratio * i as f64 / SAMPLES as f64).exp();
        best = best.max(window_on_imaginary_axis(xi, w)?.abs());
    }
    Ok(best)
}

/// Generalised Kramers-Kronig transform at imaginary frequency ξ.
///
/// The result is not clamped: near a root of f(iξ), or with inconsistent
/// Re ε data, it can fall below 1 or turn negative.
pub fn windowed_kk(model: &WindowedKk, xi: f64) -> Result<f64> {
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::domain(format!("imaginary frequency must be positive, got {xi}")));
    }
    let table = &model.table;
    let f_axis = match &model.window {
        Some(w) => {
            let v = window_on_imaginary_axis(xi, w)?;
            let threshold = model.guard_threshold();
            if v.abs() < threshold {
                return Err(Error::NearRoot {
                    xi_ev: xi,
                    magnitude: v.abs(),
                    threshold,
                });
            }
            v
        }
        None => 1.0,
    };

    let xi2 = xi * xi;
    let nodes: Vec<f64> = table.rows().iter().map(|r| r.omega.ln()).collect();
    let integrand = |u: f64| -> Result<f64> {
        let w = u.exp();
        let seg = table.segment_of(w);
        let im = table.im_eps_in_segment(seg, w);
        let bracket = match &model.window {
            Some(p) => {
                let f = window_function(Complex64::new(w, 0.0), p)?;
                let re = table.re_eps_in_segment(seg, w);
                f.im * (re - 1.0) + f.re * im
            }
            None => im,
        };
        // dω = ω du
        Ok(w * w / (w * w + xi2) * bracket)
    };
    let est = try_integrate(
        integrand,
        &nodes,
        &QuadOptions::relative(model.rel_tol)
            .with_abs_tol(model.rel_tol * f_axis.abs())
            .with_max_intervals(nodes.len() + 4000),
    )?;
    let value = 1.0 + 2.0 / (std::f64::consts::PI * f_axis) * est.value;
    if !est.converged {
        return Err(Error::Accuracy {
            context: format!("windowed Kramers-Kronig integral at xi = {xi} eV"),
            estimate: value,
            error: 2.0 / (std::f64::consts::PI * f_axis.abs()) * est.error,
        });
    }
    Ok(value)
}
