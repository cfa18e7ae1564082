use crate::error::{CrbError, Result};

use super::poly::{max_root_radius, Polynomial};

/// Residual transient level that defines "steady state".
pub const STEADY_STATE_TOL: f64 = 1e-12;
/// Upper bound on burn-in length.
pub const BURN_IN_CAP: usize = 1_000_000;

/// Smallest K with radius^K < tol.
pub(crate) fn decay_length(radius: f64, tol: f64) -> Result<usize> {
    if radius >= 1.0 || !radius.is_finite() {
        return Err(CrbError::Unstable {
            what: "denominator",
            radius,
        });
    }
    if radius == 0.0 {
        return Ok(0);
    }
    let k = (tol.ln() / radius.ln()).floor() as usize + 1;
    if k > BURN_IN_CAP {
        return Err(CrbError::BurnInCap {
            needed: k,
            cap: BURN_IN_CAP,
        });
    }
    Ok(k)
}

/// Burn-in length for steady-state filtering through `num/den`.
///
/// Smallest K with (1 + K) r^K < 1e-12 for the largest pole radius r, so
/// generators growing linearly in k (the k sin(w k) gradient input) settle to
/// the same tolerance as bounded ones.
pub fn burn_in_length(num: &Polynomial, den: &Polynomial) -> Result<usize> {
    let radius = max_root_radius(den)?;
    let mut k = decay_length(radius, STEADY_STATE_TOL)?;
    if k > 0 {
        while (1.0 + k as f64) * radius.powi(k as i32) >= STEADY_STATE_TOL {
            k += 1;
            if k > BURN_IN_CAP {
                return Err(CrbError::BurnInCap {
                    needed: k,
                    cap: BURN_IN_CAP,
                });
            }
        }
    }
    Ok(k + num.degree())
}

/// Direct-form recursion with zero initial conditions. `den[0]` must be 1.
pub(crate) fn lfilter(num: &[f64], den: &[f64], x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; x.len()];
    for k in 0..x.len() {
        let mut acc = 0.0;
        for (i, &b) in num.iter().enumerate().take(k + 1) {
            acc += b * x[k - i];
        }
        for (i, &a) in den.iter().enumerate().skip(1).take(k) {
            acc -= a * y[k - i];
        }
        y[k] = acc;
    }
    y
}

/// Zero-state IIR filtering: x[k] = y[k] = 0 for k < 0.
pub fn filter_zero_state(num: &Polynomial, den: &Polynomial, x: &[f64]) -> Result<Vec<f64>> {
    if !den.is_monic() {
        return Err(CrbError::NonMonic("denominator"));
    }
    Ok(lfilter(num.coeffs(), den.coeffs(), x))
}

/// Steady-state response of `num/den` to the generator, samples k = 0..n.
///
/// The generator is evaluated from k = -K with zero initial state, K from
/// [`burn_in_length`].
pub fn filter_steady_state<G>(num: &Polynomial, den: &Polynomial, gen: G, n: usize) -> Result<Vec<f64>>
where
    G: Fn(i64) -> f64,
{
    filter_steady_state_from(num, den, gen, 0, n)
}

/// As [`filter_steady_state`] but returns samples k = first..first + n.
pub fn filter_steady_state_from<G>(
    num: &Polynomial,
    den: &Polynomial,
    gen: G,
    first: i64,
    n: usize,
) -> Result<Vec<f64>>
where
    G: Fn(i64) -> f64,
{
    if !den.is_monic() {
        return Err(CrbError::NonMonic("denominator"));
    }
    let burn = burn_in_length(num, den)?;
    let start = first - burn as i64;
    let x: Vec<f64> = (0..burn + n).map(|t| gen(start + t as i64)).collect();
    let mut y = lfilter(num.coeffs(), den.coeffs(), &x);
    Ok(y.split_off(burn))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(c: &[f64]) -> Polynomial {
        Polynomial::new(c.to_vec()).unwrap()
    }

    #[test]
    fn identity_filter() {
        let x = vec![1.0, -2.0, 3.5, 0.25];
        let y = filter_zero_state(&Polynomial::one(), &Polynomial::one(), &x).unwrap();
        assert_eq!(y, x);
    }

    #[test]
    fn geometric_impulse_response() {
        let mut x = vec![0.0; 8];
        x[0] = 1.0;
        let y = filter_zero_state(&Polynomial::one(), &poly(&[1.0, -0.5]), &x).unwrap();
        for (k, v) in y.iter().enumerate() {
            assert!((v - 0.5f64.powi(k as i32)).abs() < 1e-15);
        }
    }

    #[test]
    fn non_monic_denominator_rejected() {
        let r = filter_zero_state(&Polynomial::one(), &poly(&[2.0, 0.1]), &[1.0]);
        assert_eq!(r, Err(CrbError::NonMonic("denominator")));
    }

    #[test]
    fn matches_truncated_impulse_convolution() {
        let num = poly(&[0.4, -0.2, 0.1]);
        let den = poly(&[1.0, -1.2, 0.7, -0.1]);
        let x: Vec<f64> = (0..300).map(|k| ((k * 37 % 11) as f64 - 5.0) * 0.3).collect();
        // impulse response by running the recursion on a unit impulse
        let mut imp = vec![0.0; 300];
        imp[0] = 1.0;
        let h = filter_zero_state(&num, &den, &imp).unwrap();
        let y = filter_zero_state(&num, &den, &x).unwrap();
        for k in 0..300 {
            let conv: f64 = (0..=k).map(|m| h[m] * x[k - m]).sum();
            assert!((conv - y[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn steady_state_identity() {
        let y = filter_steady_state(&Polynomial::one(), &Polynomial::one(), |k| (0.3 * k as f64).cos(), 50)
            .unwrap();
        for (k, v) in y.iter().enumerate() {
            assert!((v - (0.3 * k as f64).cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn steady_state_ar1_amplitude() {
        let w = 0.7;
        let den = poly(&[1.0, -0.5]);
        let y = filter_steady_state(&Polynomial::one(), &den, |k| (w * k as f64).cos(), 400).unwrap();
        let h = 1.0 / den.eval_at_frequency(w);
        for (k, v) in y.iter().enumerate() {
            let expect = h.norm() * (w * k as f64 + h.arg()).cos();
            assert!((v - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn steady_state_ramp_sinusoid_matches_long_burn_in() {
        let num = poly(&[1.0, 0.3]);
        let den = Polynomial::from_roots(&[
            num_complex::Complex64::from_polar(0.95, 0.8),
            num_complex::Complex64::from_polar(0.95, -0.8),
        ]);
        let w = 0.45;
        let gen = |k: i64| k as f64 * (w * k as f64).sin();
        let n = 200;
        let ss = filter_steady_state(&num, &den, gen, n).unwrap();
        let k_burn = burn_in_length(&num, &den).unwrap();
        let ext = 10 * k_burn;
        let x: Vec<f64> = (0..ext + n).map(|t| gen(t as i64 - ext as i64)).collect();
        let long = filter_zero_state(&num, &den, &x).unwrap();
        for k in 0..n {
            assert!((ss[k] - long[ext + k]).abs() < 1e-9, "k={k}");
        }
    }

    #[test]
    fn unstable_denominator_rejected() {
        let r = filter_steady_state(&Polynomial::one(), &poly(&[1.0, -1.0]), |_| 1.0, 4);
        assert!(matches!(r, Err(CrbError::Unstable { .. })));
    }

    proptest! {
        #[test]
        fn zero_state_is_linear(
            x in proptest::collection::vec(-5.0f64..5.0, 64),
            z in proptest::collection::vec(-5.0f64..5.0, 64),
            alpha in -3.0f64..3.0,
            beta in -3.0f64..3.0,
            a1 in -0.9f64..0.9,
        ) {
            let num = poly(&[1.0, 0.5, -0.25]);
            let den = poly(&[1.0, a1]);
            let mix: Vec<f64> = x.iter().zip(&z).map(|(p, q)| alpha * p + beta * q).collect();
            let lhs = filter_zero_state(&num, &den, &mix).unwrap();
            let fx = filter_zero_state(&num, &den, &x).unwrap();
            let fz = filter_zero_state(&num, &den, &z).unwrap();
            for k in 0..64 {
                let rhs = alpha * fx[k] + beta * fz[k];
                let scale = 1.0 + (alpha * fx[k]).abs() + (beta * fz[k]).abs();
                prop_assert!((lhs[k] - rhs).abs() <= 1e-12 * scale);
            }
        }

        #[test]
        fn steady_state_sinusoid_matches_frequency_response(
            r in 0.2f64..0.99,
            theta in 0.1f64..3.0,
            w in 0.05f64..3.0,
            phase in -3.0f64..3.0,
        ) {
            let den = Polynomial::from_roots(&[
                num_complex::Complex64::from_polar(r, theta),
                num_complex::Complex64::from_polar(r, -theta),
            ]);
            let num = poly(&[1.0, -0.4]);
            let y = filter_steady_state(&num, &den, |k| 2.0 * (w * k as f64 + phase).cos(), 64).unwrap();
            let h = num.eval_at_frequency(w) / den.eval_at_frequency(w);
            for (k, v) in y.iter().enumerate() {
                let expect = 2.0 * h.norm() * (w * k as f64 + phase + h.arg()).cos();
                prop_assert!((v - expect).abs() < 1e-9 * (1.0 + h.norm()));
            }
        }
    }
}
