//! Separable two-photon wave packets and their spectral decompositions.
//!
//! Every packet used by the verification suites and the time-domain
//! comparisons factorizes as a sum of terms `C(x_c)·X(x)` with a Gaussian
//! center-of-mass profile. All 2-D projections onto the `S`, `W` and `B`
//! continua then reduce to products of 1-D integrals: the center-of-mass
//! factor has a closed-form Fourier transform, and the relative-coordinate
//! transforms are done with the shared panel quadrature.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::eigenbasis::{b_relative_profile, free_norm, sgn, w_relative_profile};
use crate::error::Result;
use crate::model::{ModelParams, PairKinematics};
use crate::quadrature::PanelRule;
use crate::single_photon::transmission_t;
use crate::smatrix::{apply_smatrix, SpectralWavePacket};

/// Gaussian center-of-mass profile `e^{−(x_c−μ)²/(2w²)}·e^{iE₀x_c}`.
#[derive(Debug, Clone, Copy)]
pub struct XcProfile {
    pub center: f64,
    pub width: f64,
    pub carrier_e: f64,
}

impl XcProfile {
    pub fn eval(&self, xc: f64) -> C64 {
        let u = (xc - self.center) / self.width;
        C64::from_polar((-0.5 * u * u).exp(), self.carrier_e * xc)
    }

    /// `∫ eval(x_c)·e^{−iE x_c} dx_c`, in closed form.
    pub fn fourier(&self, e: f64) -> C64 {
        let w = self.width;
        let de = e - self.carrier_e;
        let mag = w * (2.0 * std::f64::consts::PI).sqrt() * (-0.5 * w * w * de * de).exp();
        C64::from_polar(mag, -de * self.center)
    }

    fn half_support(&self) -> f64 {
        8.0 * self.width
    }

    fn max_freq(&self) -> f64 {
        self.carrier_e.abs() + 4.0 / self.width + 1.0
    }
}

/// Relative-coordinate profile of one separable term. All variants are even
/// in `x`, as Bose symmetry requires.
#[derive(Debug, Clone, Copy)]
pub enum XProfile {
    /// `e^{−x²/(2w²)}·cos(Δ₁x)`
    GaussianCosine { width: f64, delta1: f64 },
    /// `e^{−rate·|x|}`
    ExpAbs { rate: f64 },
    /// `e^{−(x−μ)²/(2w²)}e^{iqx} + e^{−(x+μ)²/(2w²)}e^{−iqx}`
    SymmetrizedGaussian { center: f64, width: f64, momentum: f64 },
    /// A lone travelling Gaussian `e^{−(x−μ)²/(2w²)}e^{iqx}`. Not even in
    /// `x`: violates Bose symmetry and is rejected as a test function.
    HalfGaussian { center: f64, width: f64, momentum: f64 },
}

impl XProfile {
    pub fn eval(&self, x: f64) -> C64 {
        match *self {
            Self::GaussianCosine { width, delta1 } => {
                let u = x / width;
                C64::new((-0.5 * u * u).exp() * (delta1 * x).cos(), 0.0)
            }
            Self::ExpAbs { rate } => C64::new((-rate * x.abs()).exp(), 0.0),
            Self::SymmetrizedGaussian {
                center,
                width,
                momentum,
            } => {
                let up = (x - center) / width;
                let um = (x + center) / width;
                C64::from_polar((-0.5 * up * up).exp(), momentum * x)
                    + C64::from_polar((-0.5 * um * um).exp(), -momentum * x)
            }
            Self::HalfGaussian {
                center,
                width,
                momentum,
            } => {
                let u = (x - center) / width;
                C64::from_polar((-0.5 * u * u).exp(), momentum * x)
            }
        }
    }

    fn half_support(&self) -> f64 {
        match *self {
            Self::GaussianCosine { width, .. } => 8.0 * width,
            Self::ExpAbs { rate } => 36.0 / rate,
            Self::SymmetrizedGaussian { center, width, .. }
            | Self::HalfGaussian { center, width, .. } => center.abs() + 8.0 * width,
        }
    }

    fn max_freq(&self) -> f64 {
        match *self {
            Self::GaussianCosine { width, delta1 } => delta1.abs() + 4.0 / width + 1.0,
            Self::ExpAbs { rate } => 2.0 * rate + 1.0,
            Self::SymmetrizedGaussian {
                width, momentum, ..
            }
            | Self::HalfGaussian {
                width, momentum, ..
            } => momentum.abs() + 4.0 / width + 1.0,
        }
    }

    /// Relative-momentum center, where the profile has one.
    pub fn delta_center(&self) -> Option<f64> {
        match *self {
            Self::GaussianCosine { delta1, .. } => Some(delta1),
            _ => None,
        }
    }

    fn rule(&self, extra_freq: f64) -> PanelRule {
        PanelRule::symmetric_oscillatory(self.half_support(), self.max_freq() + extra_freq)
    }

    /// `∫ X(x)·cos(Δx) dx` on a grid of `Δ` values.
    pub fn cosine_transform(&self, deltas: &[f64]) -> Vec<C64> {
        let max_d = deltas.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        let rule = self.rule(max_d);
        let vals: Vec<(f64, C64)> = rule
            .nodes()
            .iter()
            .zip(rule.weights())
            .map(|(&x, &w)| (x, self.eval(x) * w))
            .collect();
        deltas
            .iter()
            .map(|&d| vals.iter().map(|&(x, fw)| fw * (d * x).cos()).sum())
            .collect()
    }

    /// `∫ X(x)·sgn(x)·sin(Δx) dx` on a grid of `Δ` values.
    pub fn sign_sine_transform(&self, deltas: &[f64]) -> Vec<C64> {
        let max_d = deltas.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        let rule = self.rule(max_d);
        let vals: Vec<(f64, C64)> = rule
            .nodes()
            .iter()
            .zip(rule.weights())
            .map(|(&x, &w)| (x, self.eval(x) * w * sgn(x)))
            .collect();
        deltas
            .iter()
            .map(|&d| vals.iter().map(|&(x, fw)| fw * (d * x).sin()).sum())
            .collect()
    }

    /// `∫ X(x)·e^{−rate·|x|} dx`.
    pub fn exp_abs_overlap(&self, rate: f64) -> C64 {
        let rule = self.rule(0.0);
        rule.integrate_c64(|x| self.eval(x) * (-rate * x.abs()).exp())
    }
}

/// One separable term `coeff · C(x_c) · X(x)`.
#[derive(Debug, Clone, Copy)]
pub struct SeparableTerm {
    pub coeff: C64,
    pub xc: XcProfile,
    pub x: XProfile,
}

/// A finite sum of separable terms; the packets used throughout the crate.
#[derive(Debug, Clone, Default)]
pub struct SeparableState {
    pub terms: Vec<SeparableTerm>,
}

impl SeparableState {
    /// Gaussian-windowed approximation to the plane-wave pair `(E₁, Δ₁)`:
    /// `e^{−(x_c−c)²/2w_c²}·e^{iE₁x_c}·e^{−x²/2w_r²}·cos(Δ₁x)`.
    pub fn windowed_pair(e1: f64, delta1: f64, width_c: f64, width_r: f64, center: f64) -> Self {
        Self {
            terms: vec![SeparableTerm {
                coeff: C64::new(1.0, 0.0),
                xc: XcProfile {
                    center,
                    width: width_c,
                    carrier_e: e1,
                },
                x: XProfile::GaussianCosine {
                    width: width_r,
                    delta1,
                },
            }],
        }
    }

    /// Bound-state-channel packet: Gaussian center-of-mass envelope times the
    /// relative profile `e^{−Γ|x|/2}`.
    pub fn bound_state_packet(params: &ModelParams, e0: f64, width_c: f64, center: f64) -> Self {
        Self {
            terms: vec![SeparableTerm {
                coeff: C64::new(1.0, 0.0),
                xc: XcProfile {
                    center,
                    width: width_c,
                    carrier_e: e0,
                },
                x: XProfile::ExpAbs {
                    rate: 0.5 * params.gamma(),
                },
            }],
        }
    }

    pub fn eval(&self, xc: f64, x: f64) -> C64 {
        self.terms
            .iter()
            .map(|t| t.coeff * t.xc.eval(xc) * t.x.eval(x))
            .sum()
    }

    pub fn eval_point(&self, x1: f64, x2: f64) -> C64 {
        self.eval(0.5 * (x1 + x2), x1 - x2)
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| SeparableTerm {
                    coeff: s * t.coeff,
                    ..*t
                })
                .collect(),
        }
    }

    pub fn xc_window(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for t in &self.terms {
            lo = lo.min(t.xc.center - t.xc.half_support());
            hi = hi.max(t.xc.center + t.xc.half_support());
        }
        (lo, hi)
    }

    pub fn x_half_support(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.x.half_support())
            .fold(0.0, f64::max)
    }

    fn xc_max_freq(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.xc.max_freq())
            .fold(0.0, f64::max)
    }

    fn x_max_freq(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.x.max_freq())
            .fold(0.0, f64::max)
    }

    /// Squared L² norm `∫∫ |ψ|² dx_c dx` by tensor quadrature.
    pub fn norm_sqr(&self) -> f64 {
        if self.terms.is_empty() {
            return 0.0;
        }
        let (lo, hi) = self.xc_window();
        let rule_c = PanelRule::oscillatory(lo, hi, self.xc_max_freq());
        let rule_x = PanelRule::symmetric_oscillatory(self.x_half_support(), self.x_max_freq());
        let mut acc = 0.0;
        for (&xc, &wc) in rule_c.nodes().iter().zip(rule_c.weights()) {
            let mut inner = 0.0;
            for (&x, &wx) in rule_x.nodes().iter().zip(rule_x.weights()) {
                inner += self.eval(xc, x).norm_sqr() * wx;
            }
            acc += inner * wc;
        }
        acc
    }

    /// Largest relative violation of `ψ(x_c, x) = ψ(x_c, −x)` over a sample
    /// of points; nonzero only for ill-constructed custom states.
    pub fn symmetry_violation(&self) -> f64 {
        let (lo, hi) = self.xc_window();
        let lx = self.x_half_support();
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for i in 0..40 {
            let xc = lo + (hi - lo) * (i as f64 + 0.5) / 40.0;
            for j in 0..40 {
                let x = lx * (j as f64 + 0.5) / 40.0;
                let a = self.eval(xc, x);
                let b = self.eval(xc, -x);
                worst = worst.max((a - b).norm());
                scale = scale.max(a.norm());
            }
        }
        if scale == 0.0 {
            0.0
        } else {
            worst / scale
        }
    }
}

/// 1-D quadrature grid with explicit weights.
#[derive(Debug, Clone, Default)]
pub struct Grid1 {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Grid1 {
    /// Uniform grid with trapezoidal weights, endpoints included.
    pub fn uniform(min: f64, max: f64, n: usize) -> Self {
        assert!(n >= 2 && max > min);
        let h = (max - min) / (n - 1) as f64;
        let nodes: Vec<f64> = (0..n).map(|i| min + i as f64 * h).collect();
        let mut weights = vec![h; n];
        weights[0] = 0.5 * h;
        weights[n - 1] = 0.5 * h;
        Self { nodes, weights }
    }

    /// Panel Gauss–Legendre grid.
    pub fn gauss(min: f64, max: f64, panels: usize) -> Self {
        let rule = PanelRule::new(min, max, panels);
        Self {
            nodes: rule.nodes().to_vec(),
            weights: rule.weights().to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Discretization of the spectral label sets: total energy `E` and relative
/// half-momentum `Δ ≤ 0`.
#[derive(Debug, Clone, Default)]
pub struct SpectralGrids {
    pub e: Grid1,
    pub d: Grid1,
}

impl SpectralGrids {
    /// The default momentum box: uniform `E ∈ [2Ω−K, 2Ω+K]`,
    /// `Δ ∈ [−K/2, 0]`, with the given spacing.
    pub fn uniform_box(params: &ModelParams, k_max: f64, spacing: f64) -> Self {
        let e0 = 2.0 * params.omega();
        let ne = (2.0 * k_max / spacing).round() as usize + 1;
        let nd = (0.5 * k_max / spacing).round() as usize + 1;
        Self {
            e: Grid1::uniform(e0 - k_max, e0 + k_max, ne),
            d: Grid1::uniform(-0.5 * k_max, 0.0, nd),
        }
    }

    /// Panel-quadrature grids over explicit bands (used where spectral
    /// accuracy matters more than a simple uniform box).
    pub fn gauss_bands(e_lo: f64, e_hi: f64, e_panels: usize, d_max: f64, d_panels: usize) -> Self {
        Self {
            e: Grid1::gauss(e_lo, e_hi, e_panels),
            d: Grid1::gauss(-d_max, 0.0, d_panels),
        }
    }
}

/// Coefficients of a packet over the interacting `{W, B}` continua.
#[derive(Debug, Clone)]
pub struct WbSpectrum {
    pub grids: SpectralGrids,
    /// `⟨W_{E,Δ}|ψ⟩`, row-major over (E index, Δ index).
    pub w: Vec<C64>,
    /// `⟨B_E|ψ⟩` per E node.
    pub b: Vec<C64>,
}

/// Project a separable state onto the `{W, B}` label grids.
pub fn project_wb(
    params: &ModelParams,
    state: &SeparableState,
    grids: SpectralGrids,
) -> WbSpectrum {
    let gamma = params.gamma();
    let (ne, nd) = (grids.e.len(), grids.d.len());
    let mut w = vec![C64::new(0.0, 0.0); ne * nd];
    let mut b = vec![C64::new(0.0, 0.0); ne];
    for term in &state.terms {
        let fc: Vec<C64> = grids.e.nodes.iter().map(|&e| term.xc.fourier(e)).collect();
        let ct = term.x.cosine_transform(&grids.d.nodes);
        let st = term.x.sign_sine_transform(&grids.d.nodes);
        let bt = term.x.exp_abs_overlap(0.5 * gamma);
        // relative-coordinate overlap with the W profile per Δ node
        let wd: Vec<C64> = grids
            .d
            .nodes
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let kp = 2.0 * d;
                let norm = (kp * kp + gamma * gamma).sqrt();
                (ct[i] * kp - st[i] * gamma) * (free_norm() / norm)
            })
            .collect();
        let bw = bt * (gamma / (4.0 * std::f64::consts::PI)).sqrt();
        for ie in 0..ne {
            let base = term.coeff * fc[ie];
            for id in 0..nd {
                w[ie * nd + id] += base * wd[id];
            }
            b[ie] += base * bw;
        }
    }
    WbSpectrum { grids, w, b }
}

impl WbSpectrum {
    pub fn w_norm_sqr(&self) -> f64 {
        let nd = self.grids.d.len();
        let mut acc = 0.0;
        for (ie, &we) in self.grids.e.weights.iter().enumerate() {
            for (id, &wd) in self.grids.d.weights.iter().enumerate() {
                acc += we * wd * self.w[ie * nd + id].norm_sqr();
            }
        }
        acc
    }

    pub fn b_norm_sqr(&self) -> f64 {
        self.grids
            .e
            .weights
            .iter()
            .zip(&self.b)
            .map(|(&we, c)| we * c.norm_sqr())
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.w_norm_sqr() + self.b_norm_sqr()
    }

    /// Flatten onto the generic spectral-packet representation. Degenerate
    /// `Δ = 0` nodes are dropped; the `W` profile vanishes there identically.
    pub fn to_packet(&self) -> SpectralWavePacket {
        let nd = self.grids.d.len();
        let mut w_labels = Vec::new();
        let mut w_weights = Vec::new();
        let mut w_coeffs = Vec::new();
        for (ie, &e) in self.grids.e.nodes.iter().enumerate() {
            for (id, &d) in self.grids.d.nodes.iter().enumerate() {
                if d == 0.0 {
                    continue;
                }
                w_labels.push(PairKinematics::from_energy_delta(e, d));
                w_weights.push(self.grids.e.weights[ie] * self.grids.d.weights[id]);
                w_coeffs.push(self.w[ie * nd + id]);
            }
        }
        SpectralWavePacket {
            w_labels,
            w_weights,
            w_coeffs,
            b_energies: self.grids.e.nodes.clone(),
            b_weights: self.grids.e.weights.clone(),
            b_coeffs: self.b.clone(),
        }
    }

    /// Apply the scattering operator, preserving the grid structure.
    pub fn scattered(&self, params: &ModelParams) -> Result<Self> {
        let packet = self.to_packet();
        let out = apply_smatrix(params, &packet)?;
        let nd = self.grids.d.len();
        let mut w = self.w.clone();
        let mut it = out.w_coeffs.iter();
        for ie in 0..self.grids.e.len() {
            for id in 0..nd {
                if self.grids.d.nodes[id] == 0.0 {
                    continue;
                }
                w[ie * nd + id] = *it.next().expect("flattened coefficient count");
            }
        }
        Ok(Self {
            grids: self.grids.clone(),
            w,
            b: out.b_coeffs,
        })
    }

    /// Resum the spectrum to real space on a `(x_c, x)` tensor grid.
    pub fn resum(
        &self,
        params: &ModelParams,
        xc_values: &[f64],
        x_values: &[f64],
        include_b: bool,
    ) -> Array2<C64> {
        let (ne, nd) = (self.grids.e.len(), self.grids.d.len());
        let nx = x_values.len();
        // Φ_E(x): Δ-integral plus the bound-state term, per E row.
        let phi: Vec<C64> = (0..ne * nx)
            .into_par_iter()
            .map(|idx| {
                let (ie, ix) = (idx / nx, idx % nx);
                let x = x_values[ix];
                let mut acc = C64::new(0.0, 0.0);
                for id in 0..nd {
                    let d = self.grids.d.nodes[id];
                    acc += self.w[ie * nd + id]
                        * (self.grids.d.weights[id] * w_relative_profile(params, d, x));
                }
                if include_b {
                    acc += self.b[ie] * b_relative_profile(params, x)
                }
                acc
            })
            .collect();
        let kernels =
            Array2::from_shape_vec((ne, nx), phi).expect("kernel shape");
        fold_energy_carrier(&self.grids.e, &kernels, xc_values)
    }
}

/// Coefficients of a packet over the free `S` basis, `ĝ(E, Δ) = ⟨S|ψ⟩`.
#[derive(Debug, Clone)]
pub struct SSpectrum {
    pub grids: SpectralGrids,
    pub coeffs: Vec<C64>,
}

pub fn project_s(state: &SeparableState, grids: SpectralGrids) -> SSpectrum {
    let (ne, nd) = (grids.e.len(), grids.d.len());
    let mut coeffs = vec![C64::new(0.0, 0.0); ne * nd];
    for term in &state.terms {
        let fc: Vec<C64> = grids.e.nodes.iter().map(|&e| term.xc.fourier(e)).collect();
        let ct = term.x.cosine_transform(&grids.d.nodes);
        for ie in 0..ne {
            let base = term.coeff * fc[ie] * free_norm();
            for id in 0..nd {
                coeffs[ie * nd + id] += base * ct[id];
            }
        }
    }
    SSpectrum { grids, coeffs }
}

impl SSpectrum {
    pub fn norm_sqr(&self) -> f64 {
        let nd = self.grids.d.len();
        let mut acc = 0.0;
        for (ie, &we) in self.grids.e.weights.iter().enumerate() {
            for (id, &wd) in self.grids.d.weights.iter().enumerate() {
                acc += we * wd * self.coeffs[ie * nd + id].norm_sqr();
            }
        }
        acc
    }

    /// Per-energy out-state kernels of the closed-form S-matrix:
    ///
    /// `M_E(x) = ∫dΔ ĝ(E,Δ)·(√2/2π)[t_k t_p cos(Δx) − R(E,Δ)e^{i(E−2Ω)|x|/2−Γ|x|/2}]`
    ///
    /// so that `ψ_out(x_c,x) = ∫dE e^{iEx_c}·M_E(x)`. Row-major `(E, x)`.
    pub fn out_state_kernels(&self, params: &ModelParams, x_values: &[f64]) -> Array2<C64> {
        let gamma = params.gamma();
        let (ne, nd) = (self.grids.e.len(), self.grids.d.len());
        let nx = x_values.len();
        let rows: Vec<Vec<C64>> = (0..ne)
            .into_par_iter()
            .map(|ie| {
                let e = self.grids.e.nodes[ie];
                let eps = e - 2.0 * params.omega();
                let z = C64::new(eps, gamma);
                let z2 = z * z;
                let mut row = vec![C64::new(0.0, 0.0); nx];
                let mut bound_weight = C64::new(0.0, 0.0);
                let mut plane: Vec<(f64, C64)> = Vec::with_capacity(nd);
                for id in 0..nd {
                    let d = self.grids.d.nodes[id];
                    let g = self.coeffs[ie * nd + id] * self.grids.d.weights[id];
                    let kin = PairKinematics::from_energy_delta(e, d);
                    let tt = transmission_t(params, kin.k()) * transmission_t(params, kin.p());
                    plane.push((d, g * tt));
                    let r = 4.0 * gamma * gamma / (4.0 * d * d - z2);
                    bound_weight += g * r;
                }
                for (ix, &x) in x_values.iter().enumerate() {
                    let mut acc = C64::new(0.0, 0.0);
                    for &(d, gt) in &plane {
                        acc += gt * (d * x).cos();
                    }
                    let ax = x.abs();
                    let bound =
                        bound_weight * C64::from_polar((-0.5 * gamma * ax).exp(), 0.5 * eps * ax);
                    row[ix] = (acc - bound) * free_norm();
                }
                row
            })
            .collect();
        let flat: Vec<C64> = rows.into_iter().flatten().collect();
        Array2::from_shape_vec((ne, nx), flat).expect("kernel shape")
    }

    /// Out-state of the closed-form S-matrix on a `(x_c, x)` tensor grid.
    pub fn out_state_tensor(
        &self,
        params: &ModelParams,
        xc_values: &[f64],
        x_values: &[f64],
    ) -> Array2<C64> {
        let kernels = self.out_state_kernels(params, x_values);
        fold_energy_carrier(&self.grids.e, &kernels, xc_values)
    }
}

/// Fold per-energy kernels with the center-of-mass carrier:
/// `out(x_c, x) = Σ_E w_E·e^{iE x_c}·K_E(x)`.
pub fn fold_energy_carrier(
    e_grid: &Grid1,
    kernels: &Array2<C64>,
    xc_values: &[f64],
) -> Array2<C64> {
    let (ne, nx) = kernels.dim();
    assert_eq!(ne, e_grid.len());
    let rows: Vec<Vec<C64>> = xc_values
        .par_iter()
        .map(|&xc| {
            let mut row = vec![C64::new(0.0, 0.0); nx];
            for ie in 0..ne {
                let phase = C64::from_polar(e_grid.weights[ie], e_grid.nodes[ie] * xc);
                for ix in 0..nx {
                    row[ix] += phase * kernels[(ie, ix)];
                }
            }
            row
        })
        .collect();
    let flat: Vec<C64> = rows.into_iter().flatten().collect();
    Array2::from_shape_vec((xc_values.len(), nx), flat).expect("tensor shape")
}
