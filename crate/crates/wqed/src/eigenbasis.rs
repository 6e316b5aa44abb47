//! Free and interacting two-photon bases.
//!
//! The free symmetric Hilbert space is spanned by either of the `S` / `A`
//! bases; the scattering operator is diagonal in the mixed set `{W, B}`:
//! plane-wave-like `W` states labelled by `k < p` plus one bound state `B_E`
//! per total energy, with relative profile `e^{−Γ|x|/2}`.
//!
//! Everything here is a pure function of the coordinates; delta-normalized
//! states are only ever *tested* through wave-packet smearings.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{ModelParams, PairKinematics};
use crate::single_photon::transmission_t;

/// `√2/(2π)`, the plane-wave normalization shared by `S` and `A`.
pub fn free_norm() -> f64 {
    std::f64::consts::SQRT_2 / (2.0 * std::f64::consts::PI)
}

pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// A point of the two-photon configuration plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisPoint {
    pub x1: f64,
    pub x2: f64,
}

impl BasisPoint {
    pub fn new(x1: f64, x2: f64) -> Self {
        Self { x1, x2 }
    }

    /// Center-of-mass coordinate `x_c = (x₁ + x₂)/2`.
    pub fn xc(&self) -> f64 {
        0.5 * (self.x1 + self.x2)
    }

    /// Relative coordinate `x = x₁ − x₂`.
    pub fn x(&self) -> f64 {
        self.x1 - self.x2
    }
}

/// Label of an interacting eigenstate: a `W` continuum point or a bound state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EigenstateLabel {
    W(PairKinematics),
    B { e_total: f64 },
}

impl EigenstateLabel {
    pub fn eval(&self, params: &ModelParams, pt: BasisPoint) -> Result<C64> {
        match self {
            Self::W(kin) => eval_w(params, kin, pt),
            Self::B { e_total } => Ok(eval_b(params, *e_total, pt)),
        }
    }

    pub fn eigenvalue(&self, params: &ModelParams) -> Result<C64> {
        match self {
            Self::W(kin) => eigenvalue_w(params, kin),
            Self::B { e_total } => Ok(eigenvalue_b(params, *e_total)),
        }
    }
}

/// `⟨x₁,x₂|S⟩ = (√2/2π)·e^{iE x_c}·cos(Δx)`.
pub fn eval_s(kin: &PairKinematics, pt: BasisPoint) -> C64 {
    carrier(kin.e_total(), pt.xc()) * (free_norm() * (kin.delta() * pt.x()).cos())
}

/// `⟨x₁,x₂|A⟩ = (√2 i/2π)·sgn(x)·e^{iE x_c}·sin(Δx)`.
pub fn eval_a(kin: &PairKinematics, pt: BasisPoint) -> C64 {
    let x = pt.x();
    carrier(kin.e_total(), pt.xc())
        * C64::new(0.0, free_norm() * sgn(x) * (kin.delta() * x).sin())
}

/// `⟨x₁,x₂|W⟩ = [(k−p)·S + iΓ·A]/√((k−p)² + Γ²)`, defined for `k < p`.
pub fn eval_w(params: &ModelParams, kin: &PairKinematics, pt: BasisPoint) -> Result<C64> {
    if kin.is_degenerate() {
        return Err(Error::DegenerateLabel(kin.k()));
    }
    Ok(carrier(kin.e_total(), pt.xc()) * w_relative_profile(params, kin.delta(), pt.x()))
}

/// Relative-coordinate factor of the `W` state (the carrier `e^{iEx_c}` is
/// excluded). Real-valued; vanishes identically as `Δ → 0`.
pub fn w_relative_profile(params: &ModelParams, delta: f64, x: f64) -> f64 {
    let gamma = params.gamma();
    let kp = 2.0 * delta; // k − p
    let norm = (kp * kp + gamma * gamma).sqrt();
    free_norm() * (kp * (delta * x).cos() - gamma * sgn(x) * (delta * x).sin()) / norm
}

/// `⟨x₁,x₂|B_E⟩ = √(Γ/4π)·e^{iE x_c − Γ|x|/2}`.
pub fn eval_b(params: &ModelParams, e_total: f64, pt: BasisPoint) -> C64 {
    carrier(e_total, pt.xc()) * b_relative_profile(params, pt.x())
}

/// Relative-coordinate factor of the bound state, `√(Γ/4π)·e^{−Γ|x|/2}`.
pub fn b_relative_profile(params: &ModelParams, x: f64) -> f64 {
    let gamma = params.gamma();
    (gamma / (4.0 * std::f64::consts::PI)).sqrt() * (-0.5 * gamma * x.abs()).exp()
}

fn carrier(e_total: f64, xc: f64) -> C64 {
    C64::from_polar(1.0, e_total * xc)
}

/// Eigenvalue of the `W` channel, `t_k·t_p`; defined for `k < p`.
pub fn eigenvalue_w(params: &ModelParams, kin: &PairKinematics) -> Result<C64> {
    if kin.is_degenerate() {
        return Err(Error::DegenerateLabel(kin.k()));
    }
    Ok(transmission_t(params, kin.k()) * transmission_t(params, kin.p()))
}

/// Eigenvalue of the bound-state channel,
/// `t_E = (E − 2Ω − 2iΓ)/(E − 2Ω + 2iΓ)`.
pub fn eigenvalue_b(params: &ModelParams, e_total: f64) -> C64 {
    let d = e_total - 2.0 * params.omega();
    let two_gamma = 2.0 * params.gamma();
    C64::new(d, -two_gamma) / C64::new(d, two_gamma)
}

/// Coefficient `c(Δ')` of `δ(E − E')` in `⟨S_{E',Δ'}|B_E⟩`:
///
/// `c(Δ') = (√2/2π)·√(Γ/4π)·2π·Γ/(Δ'² + Γ²/4)`
///
/// (the cosine transform of the bound-state relative profile). Independent
/// of the total energies, which only feed the delta factor.
pub fn overlap_s_with_b(params: &ModelParams, delta_prime: f64) -> C64 {
    let gamma = params.gamma();
    let lorentz = gamma / (delta_prime * delta_prime + 0.25 * gamma * gamma);
    C64::new(
        free_norm()
            * (gamma / (4.0 * std::f64::consts::PI)).sqrt()
            * 2.0
            * std::f64::consts::PI
            * lorentz,
        0.0,
    )
}

/// Coefficient of `δ(E − E')` in `⟨A_{E',Δ'}|B_E⟩`:
///
/// `c(Δ') = −i·(√2/2π)·√(Γ/4π)·2π·2Δ'/(Δ'² + Γ²/4)`
///
/// (the sine transform; `sgn(x)·sin(Δ'x)` is even in `x`, so the overlap is
/// nonzero and odd in `Δ'`).
pub fn overlap_a_with_b(params: &ModelParams, delta_prime: f64) -> C64 {
    let gamma = params.gamma();
    let lorentz = 2.0 * delta_prime / (delta_prime * delta_prime + 0.25 * gamma * gamma);
    C64::new(0.0, -1.0)
        * (free_norm()
            * (gamma / (4.0 * std::f64::consts::PI)).sqrt()
            * 2.0
            * std::f64::consts::PI
            * lorentz)
}
