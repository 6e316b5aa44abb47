//! Physical parameters, unit conventions and pair kinematics.
//!
//! Natural units `v_g = ħ = 1` throughout: momentum and energy coincide, and
//! a length is an inverse energy. Figure-style outputs use the "bar" units
//! `Ē = (E − 2Ω)/(Γ/2)`, `Δ̄ = Δ/(Γ/2)`, `x̄ = (Γ/2)x`, `B̄ = (Γ/2)B`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the two-level emitter coupled to the one-mode continuum.
///
/// Only `omega` and `gamma` are stored; the coupling `V = √Γ` is always
/// derived so the two can never disagree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    omega: f64,
    gamma: f64,
}

impl ModelParams {
    /// Atom transition energy and emission rate into the one-mode continuum.
    pub fn new(omega: f64, gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gamma must be positive and finite, got {gamma}"
            )));
        }
        if !omega.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "omega must be finite, got {omega}"
            )));
        }
        Ok(Self { omega, gamma })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// One-mode coupling strength `V = √Γ`.
    pub fn coupling_v(&self) -> f64 {
        self.gamma.sqrt()
    }

    pub fn to_bar(&self, quantity: Quantity, value: f64) -> f64 {
        let half_gamma = self.gamma / 2.0;
        match quantity {
            Quantity::Energy => (value - 2.0 * self.omega) / half_gamma,
            Quantity::Detuning => value / half_gamma,
            Quantity::Length => half_gamma * value,
            Quantity::Amplitude => half_gamma * value,
        }
    }

    pub fn from_bar(&self, quantity: Quantity, value: f64) -> f64 {
        let half_gamma = self.gamma / 2.0;
        match quantity {
            Quantity::Energy => 2.0 * self.omega + half_gamma * value,
            Quantity::Detuning => half_gamma * value,
            Quantity::Length => value / half_gamma,
            Quantity::Amplitude => value / half_gamma,
        }
    }

    /// Bar normalization of a complex amplitude, `B̄ = (Γ/2)B`.
    pub fn bar_amplitude(&self, value: C64) -> C64 {
        value * (self.gamma / 2.0)
    }
}

/// Tag selecting which bar normalization applies to a real quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// Total pair energy, `Ē = (E − 2Ω)/(Γ/2)`.
    Energy,
    /// Relative half-momentum, `Δ̄ = Δ/(Γ/2)`.
    Detuning,
    /// Relative coordinate, `x̄ = (Γ/2)x`.
    Length,
    /// Fluorescence amplitude, `B̄ = (Γ/2)B`.
    Amplitude,
}

/// Construct [`ModelParams`] from `(Ω, Γ)`, deriving `V = √Γ`.
pub fn make_params(omega: f64, gamma: f64) -> Result<ModelParams> {
    ModelParams::new(omega, gamma)
}

/// Coupling of the even mode obtained from the two-mode model, `V = √2·V̄`.
pub fn even_odd_coupling(v_bar: f64) -> Result<f64> {
    if !v_bar.is_finite() || v_bar <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "v_bar must be positive and finite, got {v_bar}"
        )));
    }
    Ok(std::f64::consts::SQRT_2 * v_bar)
}

/// A two-photon plane-wave label.
///
/// Stored with `k ≤ p`, so the relative half-momentum `Δ = (k − p)/2` is
/// never positive; `(E, Δ)` with `E = k + p` is an equivalent label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairKinematics {
    k: f64,
    p: f64,
    e_total: f64,
    delta: f64,
}

impl PairKinematics {
    /// Build from individual momenta, sorting so the stored `k ≤ p`.
    pub fn from_momenta(k: f64, p: f64) -> Self {
        let (k, p) = if k <= p { (k, p) } else { (p, k) };
        Self {
            k,
            p,
            e_total: k + p,
            delta: 0.5 * (k - p),
        }
    }

    /// Build from total energy and relative half-momentum; a positive `delta`
    /// is mapped to its mirror label `-delta`.
    pub fn from_energy_delta(e_total: f64, delta: f64) -> Self {
        let delta = -delta.abs();
        Self {
            k: 0.5 * e_total + delta,
            p: 0.5 * e_total - delta,
            e_total,
            delta,
        }
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn e_total(&self) -> f64 {
        self.e_total
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// True when `k = p` exactly; the `W` continuum is not defined there.
    pub fn is_degenerate(&self) -> bool {
        self.k == self.p
    }
}

/// Construct a [`PairKinematics`] from two momenta.
pub fn kinematics_from_momenta(k: f64, p: f64) -> PairKinematics {
    PairKinematics::from_momenta(k, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn params_derive_coupling() {
        let p = make_params(0.0, 1.0).unwrap();
        assert_eq!(p.coupling_v(), 1.0);
        let p = make_params(5.0, 4.0).unwrap();
        assert_eq!(p.coupling_v(), 2.0);
    }

    #[test]
    fn params_reject_nonpositive_gamma() {
        assert!(make_params(0.0, -1.0).is_err());
        assert!(make_params(0.0, 0.0).is_err());
        assert!(make_params(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn even_odd_coupling_values() {
        assert_relative_eq!(
            even_odd_coupling(1.0).unwrap(),
            std::f64::consts::SQRT_2,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            even_odd_coupling(0.5).unwrap(),
            0.5 * std::f64::consts::SQRT_2,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            even_odd_coupling(std::f64::consts::SQRT_2).unwrap(),
            2.0,
            max_relative = 1e-15
        );
        assert!(even_odd_coupling(0.0).is_err());
    }

    #[test]
    fn kinematics_sorts_and_fills() {
        let kin = kinematics_from_momenta(2.0, 0.0);
        assert_eq!(kin.k(), 0.0);
        assert_eq!(kin.p(), 2.0);
        assert_eq!(kin.e_total(), 2.0);
        assert_eq!(kin.delta(), -1.0);

        let kin = kinematics_from_momenta(1.0, 1.0);
        assert_eq!(kin.e_total(), 2.0);
        assert_eq!(kin.delta(), 0.0);
        assert!(kin.is_degenerate());

        let kin = kinematics_from_momenta(-1.0, 3.0);
        assert_eq!(kin.e_total(), 2.0);
        assert_eq!(kin.delta(), -2.0);
    }

    #[test]
    fn energy_delta_roundtrip() {
        let kin = PairKinematics::from_energy_delta(2.0, -1.0);
        assert_eq!(kin.k(), 0.0);
        assert_eq!(kin.p(), 2.0);
        // mirror label
        let kin2 = PairKinematics::from_energy_delta(2.0, 1.0);
        assert_eq!(kin, kin2);
    }

    #[test]
    fn bar_units_examples() {
        let p = make_params(1.0, 2.0).unwrap();
        assert_relative_eq!(p.to_bar(Quantity::Energy, 4.0), 2.0, max_relative = 1e-15);
        assert_relative_eq!(
            p.to_bar(Quantity::Detuning, -1.0),
            -1.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(p.to_bar(Quantity::Length, 3.0), 3.0, max_relative = 1e-15);
    }

    proptest! {
        #[test]
        fn bar_roundtrip(omega in -10.0f64..10.0, gamma in 0.1f64..10.0, v in -100.0f64..100.0) {
            let p = make_params(omega, gamma).unwrap();
            for q in [Quantity::Energy, Quantity::Detuning, Quantity::Length, Quantity::Amplitude] {
                let rt = p.from_bar(q, p.to_bar(q, v));
                prop_assert!((rt - v).abs() <= 1e-14 * v.abs().max(1.0));
            }
        }

        #[test]
        fn kinematics_swap_invariant(k in -50.0f64..50.0, p in -50.0f64..50.0) {
            let a = kinematics_from_momenta(k, p);
            let b = kinematics_from_momenta(p, k);
            prop_assert_eq!(a, b);
            prop_assert!(a.delta() <= 0.0);
            prop_assert!((a.e_total() - (k + p)).abs() < 1e-12);
            prop_assert!((a.delta() - 0.5 * (a.k() - a.p())).abs() < 1e-12);
        }
    }
}
