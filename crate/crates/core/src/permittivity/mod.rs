//! Dielectric permittivity models and transforms to the imaginary axis.

mod analytic;
mod model;
mod spectrum;
mod table;
mod window;

pub use analytic::{
    drude_eps_imag, drude_im_eps_real, oscillator_eps_imag, oscillator_eps_real, plasma_like_eps_imag, DrudeParams,
    Oscillator, PlasmaLikeParams,
};
pub use model::{PermittivityModel, ZeroMode};
pub use spectrum::{kk_transform, KkOptions, LowFrequencyExtension, MergedSpectrum, PowerLawTail, TailPolicy};
pub use table::{OpticalRow, OpticalTable};
pub use window::{
    find_window_roots, window_function, window_on_imaginary_axis, windowed_kk, RootGuard, WindowParams, WindowedKk,
    DEFAULT_GUARD_RELATIVE,
};
