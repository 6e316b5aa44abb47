//! Single-photon scattering amplitudes of the one-mode Hamiltonian.

use num_complex::Complex64 as C64;

use crate::model::ModelParams;

/// Transmission amplitude `t_k = (k − Ω − iΓ/2)/(k − Ω + iΓ/2)`.
///
/// A pure phase for real `k`; the pole sits at `k = Ω − iΓ/2`.
pub fn transmission_t(params: &ModelParams, k: f64) -> C64 {
    let d = k - params.omega();
    let half_gamma = 0.5 * params.gamma();
    C64::new(d, -half_gamma) / C64::new(d, half_gamma)
}

/// Excitation amplitude `e_k = √Γ/(k − Ω + iΓ/2)`.
pub fn excitation_e(params: &ModelParams, k: f64) -> C64 {
    let d = k - params.omega();
    let half_gamma = 0.5 * params.gamma();
    C64::new(params.gamma().sqrt(), 0.0) / C64::new(d, half_gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::make_params;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{PI, SQRT_2};

    #[test]
    fn resonant_transmission_is_minus_one() {
        let p = make_params(3.0, 2.0).unwrap();
        let t = transmission_t(&p, 3.0);
        assert_eq!(t, C64::new(-1.0, 0.0));
    }

    #[test]
    fn off_resonance_limit() {
        let p = make_params(0.0, 1.0).unwrap();
        for sign in [-1.0, 1.0] {
            let t = transmission_t(&p, sign * 1e6);
            assert!((t - C64::new(1.0, 0.0)).norm() < 1e-5);
        }
    }

    #[test]
    fn half_width_detuning() {
        // t at k = Ω + Γ/2 is (1−i)/(1+i) = −i.
        let p = make_params(1.0, 2.0).unwrap();
        let t = transmission_t(&p, 2.0);
        assert!((t - C64::new(0.0, -1.0)).norm() < 1e-15);
        // and +i on the other side
        let t = transmission_t(&p, 0.0);
        assert!((t - C64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn excitation_on_resonance() {
        let p = make_params(0.0, 2.0).unwrap();
        let e = excitation_e(&p, 0.0);
        assert!((e - C64::new(0.0, -SQRT_2)).norm() < 1e-15);
        // |e_Ω|² = 4/Γ
        assert_relative_eq!(e.norm_sqr(), 4.0 / 2.0, max_relative = 1e-14);
    }

    #[test]
    fn excitation_decays_at_large_detuning() {
        let p = make_params(0.0, 1.0).unwrap();
        assert!(excitation_e(&p, 1e9).norm() < 1e-8);
        assert!(excitation_e(&p, -1e9).norm() < 1e-8);
    }

    /// Phase accumulation across the resonance is one full winding.
    ///
    /// With t_k as defined the unwrapped phase increases monotonically and
    /// accumulates 4·atan(100) ≈ 2π − 0.04 over [Ω − 50Γ, Ω + 50Γ].
    #[test]
    fn phase_winds_once_through_resonance() {
        let p = make_params(2.0, 1.0).unwrap();
        let n = 20_000;
        let (k0, k1) = (2.0 - 50.0, 2.0 + 50.0);
        let mut prev = transmission_t(&p, k0).arg();
        let mut acc = 0.0;
        for i in 1..=n {
            let k = k0 + (k1 - k0) * i as f64 / n as f64;
            let cur = transmission_t(&p, k).arg();
            let mut d = cur - prev;
            if d > PI {
                d -= 2.0 * PI;
            } else if d < -PI {
                d += 2.0 * PI;
            }
            assert!(d >= 0.0, "unwrapped phase must be monotone, step {d} at k={k}");
            acc += d;
            prev = cur;
        }
        let expected = 4.0 * (100.0f64).atan();
        assert!((acc - expected).abs() < 1e-3, "accumulated {acc}, expected {expected}");
        assert!((acc - 2.0 * PI).abs() < 0.05);
    }

    proptest! {
        #[test]
        fn unitarity(k in -50.0f64..50.0, gamma in 0.1f64..4.0) {
            let p = make_params(0.0, gamma).unwrap();
            prop_assert!((transmission_t(&p, k).norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn transmission_excitation_identity(k in -50.0f64..50.0, gamma in 0.1f64..4.0) {
            // t_k = 1 − i√Γ·e_k
            let p = make_params(0.0, gamma).unwrap();
            let t = transmission_t(&p, k);
            let e = excitation_e(&p, k);
            let rhs = C64::new(1.0, 0.0) - C64::i() * gamma.sqrt() * e;
            prop_assert!((t - rhs).norm() < 1e-12);
        }
    }
}
