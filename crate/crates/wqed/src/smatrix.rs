//! The two-photon scattering matrix and its observables.
//!
//! Matrix elements between free `S` states split into two delta channels
//! (direct and exchange, both carrying `t_{k₁}t_{p₁}`) plus a smooth
//! background amplitude `B` that redistributes the individual momenta at
//! fixed total energy. In real space the background shows up as bunching or
//! anti-bunching of the photon pair, with sign set by the hyperbola
//! `4Δ₁² − (E₁−2Ω)² = Γ²`.
//!
//! The delta channels are kept symbolic (coefficients of named delta
//! factors) and are never mixed into sampled maps.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::eigenbasis::{eigenvalue_b, eigenvalue_w, free_norm};
use crate::error::{Error, Result};
use crate::model::{ModelParams, PairKinematics, Quantity};
use crate::single_photon::transmission_t;

/// The three distributional channels of a two-photon S-matrix element.
#[derive(Debug, Clone, Copy)]
pub struct SMatrixElementResult {
    /// Coefficient of `δ(Δ₁−Δ₂)δ(E₁−E₂)`.
    pub direct_coeff: C64,
    /// Coefficient of `δ(Δ₁+Δ₂)δ(E₁−E₂)`.
    pub exchange_coeff: C64,
    /// Smooth background multiplying `δ(E₁−E₂)`.
    pub background: C64,
}

/// Background fluorescence amplitude
///
/// `B = (16iΓ²/π)·(E−2Ω+iΓ) / ([4Δ₁²−(E−2Ω+iΓ)²]·[4Δ₂²−(E−2Ω+iΓ)²])`.
///
/// Smooth for real inputs; the poles sit at `k = p = Ω − iΓ/2`.
pub fn background_b(params: &ModelParams, e_total: f64, delta1: f64, delta2: f64) -> C64 {
    let gamma = params.gamma();
    let z = C64::new(e_total - 2.0 * params.omega(), gamma);
    let z2 = z * z;
    let denom1 = 4.0 * delta1 * delta1 - z2;
    let denom2 = 4.0 * delta2 * delta2 - z2;
    C64::new(0.0, 16.0 * gamma * gamma / std::f64::consts::PI) * z / (denom1 * denom2)
}

/// Full S-matrix element between `S`-basis labels.
///
/// Energy conservation is structural: every channel multiplies `δ(E₁−E₂)`
/// and the background is evaluated at the in-state energy.
pub fn smatrix_element(
    params: &ModelParams,
    kin_in: &PairKinematics,
    kin_out: &PairKinematics,
) -> SMatrixElementResult {
    let t = transmission_t(params, kin_in.k()) * transmission_t(params, kin_in.p());
    SMatrixElementResult {
        direct_coeff: t,
        exchange_coeff: t,
        background: background_b(params, kin_in.e_total(), kin_in.delta(), kin_out.delta()),
    }
}

/// Relative-coordinate out-state `⟨x|φ⟩` for the in-state labelled
/// `(E₁, Δ₁)`; the center-of-mass carrier `e^{iE₁x_c}` is excluded.
///
/// `⟨x|φ⟩ = (√2/2π)·(t_{k₁}t_{p₁}·cos(Δ₁x) − R·e^{i(E₁−2Ω)|x|/2 − Γ|x|/2})`
/// with `R = 4Γ²/(4Δ₁² − (E₁−2Ω+iΓ)²)`. Even in `x`.
pub fn outstate_relative_wavefunction(params: &ModelParams, e1: f64, delta1: f64, x: f64) -> C64 {
    let kin = PairKinematics::from_energy_delta(e1, delta1);
    let t = transmission_t(params, kin.k()) * transmission_t(params, kin.p());
    free_norm() * (t * (delta1 * x).cos() - interaction_part(params, e1, delta1, x))
}

/// The interaction (bound-state-like) term of the out-state, without the
/// `√2/2π` normalization: `R·e^{i(E₁−2Ω)|x|/2 − Γ|x|/2}`.
pub fn interaction_part(params: &ModelParams, e1: f64, delta1: f64, x: f64) -> C64 {
    let gamma = params.gamma();
    let eps = e1 - 2.0 * params.omega();
    let z = C64::new(eps, gamma);
    let r = 4.0 * gamma * gamma / (4.0 * delta1 * delta1 - z * z);
    let ax = x.abs();
    r * (C64::i() * (0.5 * eps * ax)).exp() * (-0.5 * gamma * ax).exp()
}

/// Normalized deviation of `|⟨x=0|φ⟩|²` from the interaction-free value:
/// `|⟨0|φ⟩|²/(√2/2π)² − 1`. Positive means bunching, negative anti-bunching.
pub fn deviation_at_origin(params: &ModelParams, e1: f64, delta1: f64) -> f64 {
    let phi0 = outstate_relative_wavefunction(params, e1, delta1, 0.0);
    phi0.norm_sqr() / (free_norm() * free_norm()) - 1.0
}

/// `|B̄|²` sampled over a `Δ̄₁ × Δ̄₂` grid at fixed `Ē` (bar units).
#[derive(Debug, Clone, Serialize)]
pub struct FluorescenceMap {
    pub e_bar: f64,
    pub delta1_bar_axis: Vec<f64>,
    pub delta2_bar_axis: Vec<f64>,
    /// Row-major over (delta1 index, delta2 index).
    pub values: Vec<f64>,
}

impl FluorescenceMap {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.delta2_bar_axis.len() + j]
    }
}

/// Sample the background fluorescence map at fixed `Ē`.
pub fn fluorescence_map(
    params: &ModelParams,
    e_bar: f64,
    delta1_bar_axis: &[f64],
    delta2_bar_axis: &[f64],
) -> Result<FluorescenceMap> {
    check_axis(delta1_bar_axis)?;
    check_axis(delta2_bar_axis)?;
    let e_total = params.from_bar(Quantity::Energy, e_bar);
    let n2 = delta2_bar_axis.len();
    let values: Vec<f64> = (0..delta1_bar_axis.len() * n2)
        .into_par_iter()
        .map(|idx| {
            let d1 = params.from_bar(Quantity::Detuning, delta1_bar_axis[idx / n2]);
            let d2 = params.from_bar(Quantity::Detuning, delta2_bar_axis[idx % n2]);
            params
                .bar_amplitude(background_b(params, e_total, d1, d2))
                .norm_sqr()
        })
        .collect();
    Ok(FluorescenceMap {
        e_bar,
        delta1_bar_axis: delta1_bar_axis.to_vec(),
        delta2_bar_axis: delta2_bar_axis.to_vec(),
        values,
    })
}

/// Normalized deviation of the relative out-state at `x = 0`, sampled over
/// `(Ē₁, Δ̄₁)` (bar units).
#[derive(Debug, Clone, Serialize)]
pub struct DeviationMap {
    pub e1_bar_axis: Vec<f64>,
    pub delta1_bar_axis: Vec<f64>,
    /// Row-major over (e1 index, delta1 index).
    pub values: Vec<f64>,
}

impl DeviationMap {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.delta1_bar_axis.len() + j]
    }
}

pub fn deviation_map(
    params: &ModelParams,
    e1_bar_axis: &[f64],
    delta1_bar_axis: &[f64],
) -> Result<DeviationMap> {
    check_axis(e1_bar_axis)?;
    check_axis(delta1_bar_axis)?;
    let nd = delta1_bar_axis.len();
    let values: Vec<f64> = (0..e1_bar_axis.len() * nd)
        .into_par_iter()
        .map(|idx| {
            let e1 = params.from_bar(Quantity::Energy, e1_bar_axis[idx / nd]);
            let d1 = params.from_bar(Quantity::Detuning, delta1_bar_axis[idx % nd]);
            deviation_at_origin(params, e1, d1)
        })
        .collect();
    Ok(DeviationMap {
        e1_bar_axis: e1_bar_axis.to_vec(),
        delta1_bar_axis: delta1_bar_axis.to_vec(),
        values,
    })
}

fn check_axis(axis: &[f64]) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::Config("empty grid axis".into()));
    }
    if axis.iter().any(|v| !v.is_finite()) {
        return Err(Error::Config("non-finite grid axis value".into()));
    }
    if axis.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config(
            "grid axis must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Strict local maxima of a 2-D map over its interior (8-neighborhood).
pub fn local_maxima_2d(values: &[f64], n1: usize, n2: usize) -> Vec<(usize, usize)> {
    let at = |i: usize, j: usize| values[i * n2 + j];
    let mut peaks = Vec::new();
    for i in 1..n1.saturating_sub(1) {
        for j in 1..n2.saturating_sub(1) {
            let v = at(i, j);
            let mut is_peak = true;
            'nb: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    if at((i as i64 + di) as usize, (j as i64 + dj) as usize) >= v {
                        is_peak = false;
                        break 'nb;
                    }
                }
            }
            if is_peak {
                peaks.push((i, j));
            }
        }
    }
    peaks
}

/// Dimensionless curvature of a map slice at the grid point nearest the
/// origin of `axis`: `−f''/f` estimated by the central second difference.
/// Near zero at a flat top, of order one for a regular peak.
pub fn normalized_curvature_at_origin(axis: &[f64], slice: &[f64]) -> f64 {
    let i0 = axis
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .unwrap();
    assert!(i0 > 0 && i0 + 1 < axis.len(), "origin on the axis boundary");
    let h = axis[i0 + 1] - axis[i0];
    let second = (slice[i0 + 1] - 2.0 * slice[i0] + slice[i0 - 1]) / (h * h);
    -second / slice[i0]
}

/// A two-photon wave packet expressed over the interacting spectral basis:
/// coefficients on a discretized `{W: k<p}` set and a `{B: E}` set, with
/// explicit quadrature weights.
#[derive(Debug, Clone)]
pub struct SpectralWavePacket {
    pub w_labels: Vec<PairKinematics>,
    pub w_weights: Vec<f64>,
    pub w_coeffs: Vec<C64>,
    pub b_energies: Vec<f64>,
    pub b_weights: Vec<f64>,
    pub b_coeffs: Vec<C64>,
}

impl SpectralWavePacket {
    pub fn validate(&self) -> Result<()> {
        if self.w_labels.len() != self.w_weights.len() || self.w_labels.len() != self.w_coeffs.len()
        {
            return Err(Error::Config(
                "W-channel grid, weights and coefficients must have equal lengths".into(),
            ));
        }
        if self.b_energies.len() != self.b_weights.len()
            || self.b_energies.len() != self.b_coeffs.len()
        {
            return Err(Error::Config(
                "B-channel grid, weights and coefficients must have equal lengths".into(),
            ));
        }
        if self
            .w_weights
            .iter()
            .chain(&self.b_weights)
            .any(|w| *w < 0.0)
        {
            return Err(Error::Config(
                "quadrature weights must be non-negative".into(),
            ));
        }
        if self.w_labels.iter().any(|kin| kin.is_degenerate()) {
            return Err(Error::Config(
                "degenerate k = p label in the W channel".into(),
            ));
        }
        Ok(())
    }

    /// Quadrature-weighted squared norm.
    pub fn norm_sqr(&self) -> f64 {
        let w: f64 = self
            .w_coeffs
            .iter()
            .zip(&self.w_weights)
            .map(|(c, w)| w * c.norm_sqr())
            .sum();
        let b: f64 = self
            .b_coeffs
            .iter()
            .zip(&self.b_weights)
            .map(|(c, w)| w * c.norm_sqr())
            .sum();
        w + b
    }

    /// Fraction of the squared norm carried by the bound-state channel.
    pub fn b_fraction(&self) -> f64 {
        let total = self.norm_sqr();
        if total == 0.0 {
            return 0.0;
        }
        let b: f64 = self
            .b_coeffs
            .iter()
            .zip(&self.b_weights)
            .map(|(c, w)| w * c.norm_sqr())
            .sum();
        b / total
    }
}

/// Apply the scattering operator spectrally: multiply every `W` coefficient
/// by `t_k t_p` and every `B` coefficient by `t_E`. Exactly norm-preserving
/// up to rounding since all eigenvalues are pure phases.
pub fn apply_smatrix(
    params: &ModelParams,
    packet: &SpectralWavePacket,
) -> Result<SpectralWavePacket> {
    packet.validate()?;
    let mut out = packet.clone();
    let labels = out.w_labels.clone();
    for (c, kin) in out.w_coeffs.iter_mut().zip(&labels) {
        *c *= eigenvalue_w(params, kin)?;
    }
    let energies = out.b_energies.clone();
    for (c, e) in out.b_coeffs.iter_mut().zip(&energies) {
        *c *= eigenvalue_b(params, *e);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{kinematics_from_momenta, make_params};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn background_at_double_resonance() {
        // E = 2Ω, Δ₁ = Δ₂ = 0: B = −16/(πΓ), so B̄ = −8/π.
        for gamma in [0.5, 1.0, 2.0] {
            let params = make_params(0.7, gamma).unwrap();
            let b = background_b(&params, 1.4, 0.0, 0.0);
            assert_relative_eq!(b.re, -16.0 / (PI * gamma), max_relative = 1e-13);
            assert!(b.im.abs() < 1e-13 * b.re.abs());
            let b_bar = params.bar_amplitude(b);
            assert_relative_eq!(b_bar.re, -8.0 / PI, max_relative = 1e-13);
        }
    }

    #[test]
    fn smatrix_element_far_off_resonance() {
        let params = make_params(0.0, 1.0).unwrap();
        // the stated free limit needs several thousand linewidths of detuning
        let kin = kinematics_from_momenta(4000.0, 6000.0);
        let el = smatrix_element(&params, &kin, &kin);
        assert!((el.direct_coeff - C64::new(1.0, 0.0)).norm() < 1e-3);
        assert!(el.background.norm() < 1e-6);
        // at a hundred linewidths the residual phase is percent-level
        let kin = kinematics_from_momenta(120.0, 150.0);
        let el = smatrix_element(&params, &kin, &kin);
        assert!((el.direct_coeff - C64::new(1.0, 0.0)).norm() < 2e-2);
        assert!(el.background.norm() < 1e-6);
    }

    #[test]
    fn smatrix_element_on_resonance() {
        let params = make_params(3.0, 1.0).unwrap();
        let kin = kinematics_from_momenta(3.0, 3.0);
        let el = smatrix_element(&params, &kin, &kin);
        assert!((el.direct_coeff - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(el.direct_coeff, el.exchange_coeff);
        assert_eq!(el.background, background_b(&params, 6.0, 0.0, 0.0));
    }

    #[test]
    fn outstate_examples() {
        let params = make_params(0.0, 1.0).unwrap();
        // double resonance: (√2/2π)(1 − 4) = −3·√2/2π, deviation 8
        let phi0 = outstate_relative_wavefunction(&params, 0.0, 0.0, 0.0);
        assert_relative_eq!(phi0.re, -3.0 * free_norm(), max_relative = 1e-13);
        assert!(phi0.im.abs() < 1e-14);
        assert_relative_eq!(
            deviation_at_origin(&params, 0.0, 0.0),
            8.0,
            max_relative = 1e-12
        );

        // complete depletion at Δ₁ = −√3Γ/2
        let phi0 = outstate_relative_wavefunction(&params, 0.0, -3.0f64.sqrt() / 2.0, 0.0);
        assert!(phi0.norm() < 1e-14);
        assert!((deviation_at_origin(&params, 0.0, -3.0f64.sqrt() / 2.0) + 1.0).abs() < 1e-12);

        // zero deviation on the hyperbola: Δ₁ = −Γ/2 at E₁ = 2Ω
        let phi0 = outstate_relative_wavefunction(&params, 0.0, -0.5, 0.0);
        assert_relative_eq!(phi0.norm(), free_norm(), max_relative = 1e-12);
    }

    #[test]
    fn outstate_reduces_to_free_far_off_resonance() {
        let params = make_params(0.0, 1.0).unwrap();
        let e1 = 1e4;
        let delta1 = -0.7;
        let kin = PairKinematics::from_energy_delta(e1, delta1);
        let t = transmission_t(&params, kin.k()) * transmission_t(&params, kin.p());
        for x in [0.0, 0.4, 2.0, 9.0] {
            let phi = outstate_relative_wavefunction(&params, e1, delta1, x);
            let free = t * free_norm() * (delta1 * x).cos();
            assert!((phi - free).norm() < 1e-6);
        }
    }

    #[test]
    fn interaction_tail_slope_in_bar_units() {
        // log-magnitude of the interaction part falls by 1 per unit x̄
        let params = make_params(0.0, 2.0).unwrap();
        let mut pts = Vec::new();
        let mut x_bar = 2.0;
        while x_bar <= 10.0 {
            let x = params.from_bar(Quantity::Length, x_bar);
            let mag = interaction_part(&params, 2.0 * params.omega(), 0.0, x).norm();
            pts.push((x_bar, mag.ln()));
            x_bar += 0.25;
        }
        let slope = fit_slope(&pts);
        assert!((slope + 1.0).abs() < 0.01, "slope {slope}");
    }

    fn fit_slope(pts: &[(f64, f64)]) -> f64 {
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    }

    fn axis(min: f64, max: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| min + (max - min) * i as f64 / (n - 1) as f64)
            .collect()
    }

    #[test]
    fn fluorescence_peak_structure() {
        let params = make_params(0.0, 1.0).unwrap();
        let ax = axis(-4.0, 4.0, 161);
        // Ē = 0: single global peak at the origin
        let map = fluorescence_map(&params, 0.0, &ax, &ax).unwrap();
        let peaks = local_maxima_2d(&map.values, 161, 161);
        assert_eq!(peaks.len(), 1);
        assert_eq!(peaks[0], (80, 80));
        // Ē = 4: four peaks at ±√3
        let map = fluorescence_map(&params, 4.0, &ax, &ax).unwrap();
        let peaks = local_maxima_2d(&map.values, 161, 161);
        assert_eq!(peaks.len(), 4);
        let s = 3.0f64.sqrt();
        for (i, j) in peaks {
            assert!((ax[i].abs() - s).abs() <= 0.05 + 1e-12);
            assert!((ax[j].abs() - s).abs() <= 0.05 + 1e-12);
        }
        // Ē = 2: flat top at the origin
        let map = fluorescence_map(&params, 2.0, &ax, &ax).unwrap();
        let slice: Vec<f64> = (0..161).map(|i| map.value(i, 80)).collect();
        let curv = normalized_curvature_at_origin(&ax, &slice);
        assert!(curv.abs() < 0.05, "curvature {curv}");
        let map0 = fluorescence_map(&params, 0.0, &ax, &ax).unwrap();
        let slice0: Vec<f64> = (0..161).map(|i| map0.value(i, 80)).collect();
        assert!(normalized_curvature_at_origin(&ax, &slice0) > 0.5);
    }

    #[test]
    fn map_rejects_bad_axes() {
        let params = make_params(0.0, 1.0).unwrap();
        assert!(fluorescence_map(&params, 0.0, &[], &[0.0, 1.0]).is_err());
        assert!(deviation_map(&params, &[0.0, -1.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn deviation_map_structure() {
        let params = make_params(0.0, 1.0).unwrap();
        let e_ax = axis(-4.0, 4.0, 81);
        let d_ax = axis(-4.0, 0.0, 41);
        let map = deviation_map(&params, &e_ax, &d_ax).unwrap();
        // global max 8 at the origin
        let (mut best, mut best_val) = ((0, 0), f64::NEG_INFINITY);
        for i in 0..81 {
            for j in 0..41 {
                if map.value(i, j) > best_val {
                    best_val = map.value(i, j);
                    best = (i, j);
                }
            }
        }
        assert_eq!((e_ax[best.0], d_ax[best.1]), (0.0, 0.0));
        assert_relative_eq!(best_val, 8.0, max_relative = 1e-12);
        // far corner approaches the free limit (decay is only ~1/Δ̄², so the
        // corner of the plotted window still deviates noticeably)
        let far = deviation_at_origin(
            &params,
            params.from_bar(Quantity::Energy, -200.0),
            params.from_bar(Quantity::Detuning, -200.0),
        );
        assert!(far.abs() < 1e-3, "far-corner deviation {far}");
        assert!(map.value(0, 0).abs() < 0.5);
    }

    #[test]
    fn apply_smatrix_eigenchannels() {
        let params = make_params(0.0, 1.0).unwrap();
        let kin = kinematics_from_momenta(-0.4, 1.2);
        let packet = SpectralWavePacket {
            w_labels: vec![kin],
            w_weights: vec![1.0],
            w_coeffs: vec![C64::new(0.8, -0.1)],
            b_energies: vec![0.3],
            b_weights: vec![1.0],
            b_coeffs: vec![C64::new(0.2, 0.5)],
        };
        let out = apply_smatrix(&params, &packet).unwrap();
        let ev_w = eigenvalue_w(&params, &kin).unwrap();
        let ev_b = eigenvalue_b(&params, 0.3);
        assert!((out.w_coeffs[0] - packet.w_coeffs[0] * ev_w).norm() < 1e-15);
        assert!((out.b_coeffs[0] - packet.b_coeffs[0] * ev_b).norm() < 1e-15);
        assert!((out.norm_sqr() - packet.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn apply_smatrix_rejects_mismatched_grids() {
        let params = make_params(0.0, 1.0).unwrap();
        let packet = SpectralWavePacket {
            w_labels: vec![kinematics_from_momenta(0.0, 1.0)],
            w_weights: vec![1.0, 2.0],
            w_coeffs: vec![C64::new(1.0, 0.0)],
            b_energies: vec![],
            b_weights: vec![],
            b_coeffs: vec![],
        };
        assert!(apply_smatrix(&params, &packet).is_err());
    }

    proptest! {
        #[test]
        fn background_parity(
            e in -6.0f64..6.0,
            d1 in -4.0f64..4.0,
            d2 in -4.0f64..4.0,
            gamma in 0.3f64..3.0,
        ) {
            let params = make_params(0.4, gamma).unwrap();
            let e_total = 0.8 + e;
            let b = background_b(&params, e_total, d1, d2);
            prop_assert!((b - background_b(&params, e_total, -d1, d2)).norm() < 1e-12 * b.norm());
            prop_assert!((b - background_b(&params, e_total, d1, -d2)).norm() < 1e-12 * b.norm());
            // |B|² even in E − 2Ω
            let mirrored = background_b(&params, 0.8 - e, d1, d2);
            prop_assert!((b.norm_sqr() - mirrored.norm_sqr()).abs() < 1e-12 * b.norm_sqr());
        }

        #[test]
        fn channel_unitarity(k in -30.0f64..30.0, p in -30.0f64..30.0) {
            let params = make_params(0.0, 1.0).unwrap();
            let kin = kinematics_from_momenta(k, p);
            let el = smatrix_element(&params, &kin, &kin);
            prop_assert!((el.direct_coeff.norm() - 1.0).abs() < 1e-12);
        }
    }
}
