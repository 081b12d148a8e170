//! Physical and mathematical constants. All lengths are in Bohr radii.

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Fine-structure constant (CODATA 2018).
pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;

/// Bohr radius in femtometres.
pub const BOHR_RADIUS_FM: f64 = 52_917.721_09;

/// Half-density radius used as the default nuclear size, in Bohr radii.
pub const DEFAULT_XI_AU: f64 = 2.2677e-5;

/// Default 90%-10% surface thickness in femtometres.
pub const DEFAULT_THICKNESS_FM: f64 = 2.3;

/// Fine-structure constant and the speed of light in atomic units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub alpha: f64,
    pub c: f64,
}

impl PhysicalConstants {
    pub fn new(alpha: f64) -> Self {
        PhysicalConstants {
            alpha,
            c: 1.0 / alpha,
        }
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants::new(FINE_STRUCTURE)
    }
}

/// Converts a length in femtometres to Bohr radii.
pub fn fm_to_bohr(fm: f64) -> f64 {
    fm / BOHR_RADIUS_FM
}

/// Diffuseness parameter `a` from the 90%-10% surface thickness `t`.
pub fn diffuseness_from_thickness(t: f64) -> f64 {
    t / (4.0 * 3f64.ln())
}
