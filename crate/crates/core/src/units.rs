//! Physical constants (CODATA 2018) and unit conversions.

/// Reduced Planck constant in eV·s.
pub const HBAR_EV_S: f64 = 6.582_119_569e-16;
/// Reduced Planck constant in J·s.
pub const HBAR_J_S: f64 = 1.054_571_817e-34;
/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Boltzmann constant in eV/K.
pub const BOLTZMANN_EV_K: f64 = 8.617_333_262e-5;
/// ħc in eV·nm.
pub const HBAR_C_EV_NM: f64 = HBAR_EV_S * SPEED_OF_LIGHT * 1e9;
/// ħc in J·m.
pub const HBAR_C_J_M: f64 = HBAR_J_S * SPEED_OF_LIGHT;

/// Photon energy (eV) to angular frequency (rad/s).
pub fn ev_to_rad_per_s(energy_ev: f64) -> f64 {
    energy_ev / HBAR_EV_S
}

/// Angular frequency (rad/s) to photon energy (eV).
pub fn rad_per_s_to_ev(omega: f64) -> f64 {
    omega * HBAR_EV_S
}

/// Pressure between ideal-metal plates, −π²ħc/(240a⁴), in mPa.
pub fn ideal_metal_pressure_mpa(separation_nm: f64) -> f64 {
    let a = separation_nm * 1e-9;
    -std::f64::consts::PI.powi(2) * HBAR_C_J_M / (240.0 * a.powi(4)) * 1e3
}

/// `l`-th Matsubara frequency 2πk_BT·l/ħ expressed in eV.
pub fn matsubara_frequency_ev(temperature_k: f64, l: usize) -> f64 {
    2.0 * std::f64::consts::PI * BOLTZMANN_EV_K * temperature_k * l as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_metal_reference_values() {
        assert!((ideal_metal_pressure_mpa(1000.0) + 1.3001).abs() < 1e-4);
        assert!((ideal_metal_pressure_mpa(160.0) + 1983.8).abs() < 0.1);
    }

    #[test]
    fn first_matsubara_frequency_at_room_temperature() {
        let xi1 = matsubara_frequency_ev(300.0, 1);
        assert!((xi1 - 0.1623).abs() / 0.1623 < 1e-3);
    }

    #[test]
    fn hbar_c_in_ev_nm() {
        assert!((HBAR_C_EV_NM - 197.326_980_4).abs() < 1e-6);
        assert!((ev_to_rad_per_s(rad_per_s_to_ev(1e15)) - 1e15).abs() < 1.0);
    }
}
