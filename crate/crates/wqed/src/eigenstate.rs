//! Piecewise-analytic two-photon scattering eigenstates.
//!
//! Eigenstates of the one-mode Hamiltonian are built quadrant by quadrant in
//! the `(x₁, x₂)` plane from the boundary conditions on the coordinate axes:
//! starting from the quadrant-III ansatz, the jump/transport conditions fix
//! the mixed-quadrant amplitudes and the excited-atom amplitude `e(x)`, and
//! the continuity of `e` at the origin pins the in-state composition. The
//! checker re-evaluates all conditions independently of the builder.
//!
//! Quadrants follow the usual convention: III is `x₁, x₂ < 0` (both photons
//! incoming), II is mixed sign, I is `x₁, x₂ > 0` (both transmitted).

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{ModelParams, PairKinematics};
use crate::single_photon::{excitation_e, transmission_t};

/// One plane-wave term `coeff · e^{i(q₁x₁ + q₂x₂)}` with complex momenta.
#[derive(Debug, Clone, Copy)]
pub struct PlaneWave2D {
    pub coeff: C64,
    pub q1: C64,
    pub q2: C64,
}

/// A finite sum of 2-D plane waves; one quadrant piece of `g(x₁,x₂)`.
#[derive(Debug, Clone, Default)]
pub struct Wave2DSum(pub Vec<PlaneWave2D>);

impl Wave2DSum {
    pub fn eval(&self, x1: f64, x2: f64) -> C64 {
        self.0
            .iter()
            .map(|t| t.coeff * (C64::i() * (t.q1 * x1 + t.q2 * x2)).exp())
            .sum()
    }

    fn scaled(&self, s: C64) -> Self {
        Self(
            self.0
                .iter()
                .map(|t| PlaneWave2D {
                    coeff: s * t.coeff,
                    ..*t
                })
                .collect(),
        )
    }

    /// The same piece with `x₁ ↔ x₂`.
    fn swapped(&self) -> Self {
        Self(
            self.0
                .iter()
                .map(|t| PlaneWave2D {
                    coeff: t.coeff,
                    q1: t.q2,
                    q2: t.q1,
                })
                .collect(),
        )
    }
}

/// One term `coeff · e^{iqx}` of the excited-atom amplitude.
#[derive(Debug, Clone, Copy)]
pub struct PlaneWave1D {
    pub coeff: C64,
    pub q: C64,
}

#[derive(Debug, Clone, Default)]
pub struct Wave1DSum(pub Vec<PlaneWave1D>);

impl Wave1DSum {
    pub fn eval(&self, x: f64) -> C64 {
        self.0
            .iter()
            .map(|t| t.coeff * (C64::i() * t.q * x).exp())
            .sum()
    }

    /// Analytic derivative, term by term.
    pub fn deriv(&self, x: f64) -> C64 {
        self.0
            .iter()
            .map(|t| t.coeff * C64::i() * t.q * (C64::i() * t.q * x).exp())
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EigenstateKind {
    W(PairKinematics),
    B { e_total: f64 },
}

/// A scattering eigenstate given by closed-form amplitudes per quadrant.
///
/// `lower` pieces are valid for `x₁ < x₂`, `upper` for `x₁ > x₂`; quadrant II
/// has a fixed ordering per half (`q2_lower`: `x₁ < 0 < x₂`). The state is
/// Bose-symmetric by construction.
#[derive(Debug, Clone)]
pub struct PiecewiseEigenstate {
    pub kind: EigenstateKind,
    pub energy: f64,
    pub eigenvalue_claimed: C64,
    pub q3_lower: Wave2DSum,
    pub q3_upper: Wave2DSum,
    pub q2_lower: Wave2DSum,
    pub q2_upper: Wave2DSum,
    pub q1_lower: Wave2DSum,
    pub q1_upper: Wave2DSum,
    pub e_neg: Wave1DSum,
    pub e_pos: Wave1DSum,
}

impl PiecewiseEigenstate {
    /// Evaluate `g(x₁, x₂)` away from the coordinate axes.
    pub fn eval_g(&self, x1: f64, x2: f64) -> C64 {
        let piece = if x1 <= 0.0 && x2 <= 0.0 {
            if x1 <= x2 {
                &self.q3_lower
            } else {
                &self.q3_upper
            }
        } else if x1 <= 0.0 && x2 >= 0.0 {
            &self.q2_lower
        } else if x2 <= 0.0 && x1 >= 0.0 {
            &self.q2_upper
        } else if x1 <= x2 {
            &self.q1_lower
        } else {
            &self.q1_upper
        };
        piece.eval(x1, x2)
    }

    /// `e(x)` with the branch picked by the sign of `x`.
    pub fn eval_e(&self, x: f64) -> C64 {
        if x < 0.0 {
            self.e_neg.eval(x)
        } else {
            self.e_pos.eval(x)
        }
    }

    /// Ratio of quadrant-I to quadrant-III amplitudes; must reproduce the
    /// claimed eigenvalue.
    pub fn amplitude_ratio(&self) -> C64 {
        self.q1_lower.0[0].coeff / self.q3_lower.0[0].coeff
    }
}

/// Ratio `B₃/A₃ = (k − p − iΓ)/(k − p + iΓ)` fixed by continuity of `e(x)`.
pub fn in_state_ratio(params: &ModelParams, kin: &PairKinematics) -> Result<C64> {
    if kin.is_degenerate() {
        return Err(Error::DegenerateLabel(kin.k()));
    }
    let kp = kin.k() - kin.p();
    Ok(C64::new(kp, -params.gamma()) / C64::new(kp, params.gamma()))
}

/// Build the `W`-type scattering eigenstate for `k < p`.
///
/// Quadrant III carries `B₃ e^{ikx₁+ipx₂} + A₃ e^{ipx₁+ikx₂}` (for
/// `x₁ < x₂`) with `B₃/A₃` fixed by `e`-continuity; crossing each axis
/// multiplies the coefficient of the transmitted momentum by its
/// single-photon amplitude, so quadrant I is `t_k t_p` times quadrant III.
pub fn build_w_eigenstate(
    params: &ModelParams,
    kin: &PairKinematics,
) -> Result<PiecewiseEigenstate> {
    if kin.is_degenerate() {
        return Err(Error::DegenerateLabel(kin.k()));
    }
    let kp = kin.k() - kin.p();
    let b3 = C64::new(kp, -params.gamma());
    let a3 = C64::new(kp, params.gamma());
    Ok(build_w_with_amplitudes(params, kin, b3, a3))
}

/// `W`-state construction from explicit in-state amplitudes.
///
/// The axis conditions are enforced for any `(B₃, A₃)`; only the continuity
/// of `e` at the origin singles out the physical ratio. Exposed so tests can
/// probe the sensitivity of that condition.
pub fn build_w_with_amplitudes(
    params: &ModelParams,
    kin: &PairKinematics,
    b3: C64,
    a3: C64,
) -> PiecewiseEigenstate {
    let (k, p) = (kin.k(), kin.p());
    let (tk, tp) = (transmission_t(params, k), transmission_t(params, p));
    let (ek, ep) = (excitation_e(params, k), excitation_e(params, p));
    let (qk, qp) = (C64::new(k, 0.0), C64::new(p, 0.0));

    let b2 = tp * b3;
    let a2 = tk * a3;
    let b1 = tk * b2;
    let a1 = tp * a2;

    let pair = |b: C64, a: C64| {
        Wave2DSum(vec![
            PlaneWave2D {
                coeff: b,
                q1: qk,
                q2: qp,
            },
            PlaneWave2D {
                coeff: a,
                q1: qp,
                q2: qk,
            },
        ])
    };

    let q3_lower = pair(b3, a3);
    let q3_upper = pair(a3, b3);
    let q2_lower = pair(b2, a2);
    let q2_upper = q2_lower.swapped();
    let q1_lower = pair(b1, a1);
    let q1_upper = pair(a1, b1);

    // e(x) from the jump conditions: on each side the coefficient of a given
    // carrier momentum is 2i/V times the jump of the matching g-coefficient,
    // which reduces to single-photon excitation amplitudes.
    let e_neg = Wave1DSum(vec![
        PlaneWave1D {
            coeff: 2.0 * ep * b3,
            q: qk,
        },
        PlaneWave1D {
            coeff: 2.0 * ek * a3,
            q: qp,
        },
    ]);
    let e_pos = Wave1DSum(vec![
        PlaneWave1D {
            coeff: 2.0 * tp * ek * b3,
            q: qp,
        },
        PlaneWave1D {
            coeff: 2.0 * tk * ep * a3,
            q: qk,
        },
    ]);

    PiecewiseEigenstate {
        kind: EigenstateKind::W(*kin),
        energy: kin.e_total(),
        eigenvalue_claimed: tk * tp,
        q3_lower,
        q3_upper,
        q2_lower,
        q2_upper,
        q1_lower,
        q1_upper,
        e_neg,
        e_pos,
    }
}

/// Build the bound-state eigenstate `B_E`.
///
/// `g = e^{iEx_c − Γ|x|/2}` in quadrant III; the same profile is scaled by
/// `μ/(μ + Γ)` with `μ = i(Ω − E/2)` in quadrant II and by
/// `t_E = (E − 2Ω − 2iΓ)/(E − 2Ω + 2iΓ)` in quadrant I.
pub fn build_b_eigenstate(params: &ModelParams, e_total: f64) -> PiecewiseEigenstate {
    let gamma = params.gamma();
    let half = 0.5 * e_total;
    // e^{iEx_c − Γ|x|/2} as plane waves: momenta E/2 ∓ iΓ/2 on the x<0 side.
    let q_minus = C64::new(half, -0.5 * gamma);
    let q_plus = C64::new(half, 0.5 * gamma);
    let lower = Wave2DSum(vec![PlaneWave2D {
        coeff: C64::new(1.0, 0.0),
        q1: q_minus,
        q2: q_plus,
    }]);
    let upper = lower.swapped();

    let mu = C64::i() * (params.omega() - half);
    let c2 = mu / (mu + gamma);
    let t_e = crate::eigenbasis::eigenvalue_b(params, e_total);

    // e(x) = 4√Γ/(E − 2Ω + 2iΓ) · e^{iEx/2 − Γ|x|/2}, continuous at 0.
    let s_e = 4.0 * gamma.sqrt() / C64::new(e_total - 2.0 * params.omega(), 2.0 * gamma);
    let e_neg = Wave1DSum(vec![PlaneWave1D {
        coeff: s_e,
        q: q_minus,
    }]);
    let e_pos = Wave1DSum(vec![PlaneWave1D {
        coeff: s_e,
        q: q_plus,
    }]);

    PiecewiseEigenstate {
        kind: EigenstateKind::B { e_total },
        energy: e_total,
        eigenvalue_claimed: t_e,
        q3_lower: lower.clone(),
        q3_upper: upper.clone(),
        q2_lower: lower.scaled(c2),
        q2_upper: upper.scaled(c2),
        q1_lower: lower.scaled(t_e),
        q1_upper: upper.scaled(t_e),
        e_neg,
        e_pos,
    }
}

/// Residuals of the axis boundary conditions and the `e`-continuity
/// condition, each relative to the largest term entering it.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    /// Jump condition across `x₂ = 0` for `x₁ < 0`.
    pub jump_in_max: f64,
    /// Transport equation for `e` on `x < 0`.
    pub transport_in_max: f64,
    /// Jump condition across `x₁ = 0` for `x₂ > 0`.
    pub jump_out_max: f64,
    /// Transport equation for `e` on `x > 0`.
    pub transport_out_max: f64,
    /// `e(0⁻) − e(0⁺)`, relative.
    pub continuity: f64,
    /// Largest of all residuals.
    pub max_relative: f64,
    /// Recorded (not enforced) corner data: the one-sided limits of `g` at
    /// the origin, ordered (III, II lower, II upper, I).
    pub corner_g: [C64; 4],
}

fn rel(terms: &[C64]) -> f64 {
    let sum: C64 = terms.iter().sum();
    let scale = terms
        .iter()
        .map(|t| t.norm())
        .fold(0.0f64, f64::max)
        .max(1e-300);
    sum.norm() / scale
}

/// Evaluate the boundary-condition residuals of a built state at the given
/// sample offsets (interpreted as `x₁ = −|s|` and `x₂ = +|s|`).
pub fn check_boundary_conditions(
    params: &ModelParams,
    state: &PiecewiseEigenstate,
    sample_points: &[f64],
) -> Result<ResidualReport> {
    if state.q3_lower.0.is_empty() || state.e_neg.0.is_empty() {
        return Err(Error::Config(
            "malformed eigenstate: empty descriptors".into(),
        ));
    }
    let v = params.coupling_v();
    let e_minus_omega = state.energy - params.omega();
    let i = C64::i();

    let mut jump_in_max = 0.0f64;
    let mut transport_in_max = 0.0f64;
    let mut jump_out_max = 0.0f64;
    let mut transport_out_max = 0.0f64;

    for &s in sample_points {
        let s = s.abs().max(1e-12);

        // boundary between III and II: x₁ = −s < 0, crossing x₂ = 0.
        let x1 = -s;
        let gp = state.q2_lower.eval(x1, 0.0);
        let gm = state.q3_lower.eval(x1, 0.0);
        let e = state.e_neg.eval(x1);
        let de = state.e_neg.deriv(x1);
        jump_in_max = jump_in_max.max(rel(&[-i * (gp - gm), 0.5 * v * e]));
        transport_in_max =
            transport_in_max.max(rel(&[-i * de, -e_minus_omega * e, v * (gp + gm)]));

        // boundary between II and I: x₂ = +s > 0, crossing x₁ = 0.
        let x2 = s;
        let gp = state.q1_lower.eval(0.0, x2);
        let gm = state.q2_lower.eval(0.0, x2);
        let e = state.e_pos.eval(x2);
        let de = state.e_pos.deriv(x2);
        jump_out_max = jump_out_max.max(rel(&[-i * (gp - gm), 0.5 * v * e]));
        transport_out_max =
            transport_out_max.max(rel(&[-i * de, -e_minus_omega * e, v * (gp + gm)]));
    }

    let e0m = state.e_neg.eval(0.0);
    let e0p = state.e_pos.eval(0.0);
    let continuity = (e0m - e0p).norm() / e0m.norm().max(e0p.norm()).max(1e-300);

    let max_relative = jump_in_max
        .max(transport_in_max)
        .max(jump_out_max)
        .max(transport_out_max)
        .max(continuity);

    Ok(ResidualReport {
        jump_in_max,
        transport_in_max,
        jump_out_max,
        transport_out_max,
        continuity,
        max_relative,
        corner_g: [
            state.q3_lower.eval(0.0, 0.0),
            state.q2_lower.eval(0.0, 0.0),
            state.q2_upper.eval(0.0, 0.0),
            state.q1_lower.eval(0.0, 0.0),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigenbasis::{eval_a, eval_s, BasisPoint};
    use crate::model::{kinematics_from_momenta, make_params};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample_offsets(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        (0..n).map(|_| rng.gen_range(0.01..25.0)).collect()
    }

    #[test]
    fn in_state_ratio_examples() {
        let params = make_params(0.0, 1.0).unwrap();
        // k − p = −Γ: (−Γ − iΓ)/(−Γ + iΓ) = i
        let kin = kinematics_from_momenta(-0.5, 0.5);
        let r = in_state_ratio(&params, &kin).unwrap();
        assert!((r - C64::i()).norm() < 1e-14);
        // Γ → 0: ratio → 1
        let params_small = make_params(0.0, 1e-9).unwrap();
        let r = in_state_ratio(&params_small, &kin).unwrap();
        assert!((r - C64::new(1.0, 0.0)).norm() < 1e-8);
        // degenerate label rejected
        let kin = kinematics_from_momenta(1.0, 1.0);
        assert!(in_state_ratio(&params, &kin).is_err());
        assert!(build_w_eigenstate(&params, &kin).is_err());
    }

    #[test]
    fn quadrant_one_is_eigenvalue_times_quadrant_three() {
        let params = make_params(0.8, 1.3).unwrap();
        let kin = kinematics_from_momenta(0.2, 1.9);
        let st = build_w_eigenstate(&params, &kin).unwrap();
        let tktp = crate::eigenbasis::eigenvalue_w(&params, &kin).unwrap();
        for idx in 0..2 {
            let ratio = st.q1_lower.0[idx].coeff / st.q3_lower.0[idx].coeff;
            assert!((ratio - tktp).norm() < 1e-13);
        }
        assert!((st.amplitude_ratio() - st.eigenvalue_claimed).norm() < 1e-13);
    }

    #[test]
    fn w_residuals_vanish() {
        let params = make_params(0.5, 0.9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let k = rng.gen_range(-4.0..4.0);
            let p = rng.gen_range(-4.0..4.0);
            let kin = kinematics_from_momenta(k, p);
            if kin.is_degenerate() {
                continue;
            }
            let st = build_w_eigenstate(&params, &kin).unwrap();
            let pts = sample_offsets(&mut rng, 100);
            let rep = check_boundary_conditions(&params, &st, &pts).unwrap();
            assert!(rep.max_relative < 1e-10, "kin={kin:?}: {rep:?}");
        }
    }

    #[test]
    fn b_residuals_vanish() {
        let params = make_params(0.5, 0.9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let e_total = rng.gen_range(-6.0..8.0);
            let st = build_b_eigenstate(&params, e_total);
            let pts = sample_offsets(&mut rng, 100);
            let rep = check_boundary_conditions(&params, &st, &pts).unwrap();
            assert!(rep.max_relative < 1e-10, "E={e_total}: {rep:?}");
            assert!(rep.continuity < 1e-12);
        }
    }

    #[test]
    fn perturbed_ratio_breaks_continuity_only() {
        let params = make_params(0.0, 1.0).unwrap();
        let kin = kinematics_from_momenta(-0.3, 0.8);
        let b3 = C64::new(kin.k() - kin.p(), -params.gamma()) * 1.01;
        let a3 = C64::new(kin.k() - kin.p(), params.gamma());
        let st = build_w_with_amplitudes(&params, &kin, b3, a3);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let pts = sample_offsets(&mut rng, 50);
        let rep = check_boundary_conditions(&params, &st, &pts).unwrap();
        // the axis conditions hold for any amplitudes by construction
        assert!(rep.jump_in_max < 1e-12 && rep.transport_in_max < 1e-12);
        assert!(rep.jump_out_max < 1e-12 && rep.transport_out_max < 1e-12);
        // the continuity condition detects the 1% perturbation
        assert!(rep.continuity > 1e-4, "continuity = {}", rep.continuity);
    }

    #[test]
    fn b_eigenvalue_examples() {
        let params = make_params(1.2, 0.7).unwrap();
        let st = build_b_eigenstate(&params, 2.4);
        assert!((st.amplitude_ratio() + C64::new(1.0, 0.0)).norm() < 1e-14);
        let st = build_b_eigenstate(&params, 3.3);
        let expected = crate::eigenbasis::eigenvalue_b(&params, 3.3);
        assert!((st.amplitude_ratio() - expected).norm() < 1e-14);
    }

    /// In quadrant III the built state is ∝ (k−p)·S + iΓ·A, pointwise.
    #[test]
    fn quadrant_three_matches_w_combination() {
        let params = make_params(0.0, 1.4).unwrap();
        let kin = kinematics_from_momenta(-1.1, 0.6);
        let st = build_w_eigenstate(&params, &kin).unwrap();
        let kp = kin.k() - kin.p();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        // fit the proportionality constant at one point
        let p0 = BasisPoint::new(-3.7, -1.2);
        let reference =
            |pt: BasisPoint| kp * eval_s(&kin, pt) + C64::i() * params.gamma() * eval_a(&kin, pt);
        let c = st.eval_g(p0.x1, p0.x2) / reference(p0);
        for _ in 0..100 {
            let a = rng.gen_range(-20.0..-0.01);
            let b = rng.gen_range(-20.0..-0.01);
            let pt = BasisPoint::new(a, b);
            let lhs = st.eval_g(a, b);
            let rhs = c * reference(pt);
            assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1.0));
        }
    }

    #[test]
    fn g_continuous_across_diagonal() {
        let params = make_params(0.2, 1.0).unwrap();
        let kin = kinematics_from_momenta(-0.9, 1.4);
        let states = [
            build_w_eigenstate(&params, &kin).unwrap(),
            build_b_eigenstate(&params, 2.7),
        ];
        for st in &states {
            for x in [-7.3, -0.4, 0.6, 5.2] {
                let eps = 1e-12;
                let lo = st.eval_g(x, x + eps);
                let hi = st.eval_g(x + eps, x);
                assert!((lo - hi).norm() < 1e-10 * lo.norm().max(1.0));
            }
        }
    }
}
