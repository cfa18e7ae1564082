use nalgebra::DMatrix;

use crate::error::{CrbError, Result};
use crate::sigcore::{impulse_response, lfilter, max_root_radius};
use crate::sysmodel::{fo_response, ArmaxSystem};

use super::gradients::{case1_fo_columns, case2_deterministic_inputs};
use super::montecarlo::FisherEstimate;
use super::theta::{Experiment, Param};

/// Largest n_a + n_b + n_c accepted by [`fisher_semi_analytic`].
pub const ORACLE_ORDER_LIMIT: usize = 8;

const IMPULSE_TAIL: f64 = 1e-14;

/// Stochastic part of a gradient column: sum_m h[m] e[k - lag - m].
struct Stochastic<'a> {
    h: &'a [f64],
    lag: usize,
}

/// sum_m f.h[m] g.h[m + f.lag - g.lag], the covariance of two filtered-noise
/// components per unit noise variance.
fn cross(f: &Stochastic, g: &Stochastic) -> f64 {
    let shift = f.lag as i64 - g.lag as i64;
    f.h.iter()
        .enumerate()
        .filter_map(|(m, &hf)| {
            let t = m as i64 + shift;
            (t >= 0).then(|| g.h.get(t as usize).map_or(0.0, |&hg| hf * hg))
        })
        .sum()
}

/// Exact expectation of the summed gradient outer product,
/// (1/N) sum_k E{psi(k) psi(k)^T}, split into deterministic outer products
/// and stationary covariances of the filtered-noise components.
///
/// Stochastic components: -(1/A) e[k-i] inside d/da_i and (1/C) e[k-i] in
/// d/dc_i. Deterministic components are the FO-driven filterings, taken
/// exactly as in the Monte-Carlo gradients. The result has `m = 0`.
pub fn fisher_semi_analytic(exp: &Experiment, sys: &ArmaxSystem, n: usize) -> Result<FisherEstimate> {
    exp.validate()?;
    let layout = exp.layout(sys);
    let order = sys.na() + sys.nc() + if exp.case() == super::Case::Two { sys.nb() } else { 0 };
    if order > ORACLE_ORDER_LIMIT {
        return Err(CrbError::OrderLimit {
            limit: ORACLE_ORDER_LIMIT,
            got: order,
        });
    }
    let d = layout.dim();
    let mut det = DMatrix::<f64>::zeros(n, d);

    match exp {
        Experiment::Ambient => {}
        Experiment::Case1(fo) => {
            let cols = case1_fo_columns(sys, fo, n)?;
            for (p, col) in [Param::FoAmplitude, Param::FoPhase, Param::FoFrequency].into_iter().zip(cols) {
                let j = layout.index_of(p).expect("case-1 layout");
                det.column_mut(j).copy_from_slice(&col);
            }
        }
        Experiment::Case2(fo) => {
            let inputs = case2_deterministic_inputs(sys, fo, n);
            // -(1/C)(B/A) u, zero before the FO start
            let y_fo = lfilter(&[1.0], sys.c().coeffs(), &fo_response(sys, fo, 0, n));
            for (j, p) in layout.params().iter().enumerate() {
                match *p {
                    Param::Ar(i) => {
                        for k in i..n {
                            det[(k, j)] = -y_fo[k - i];
                        }
                    }
                    Param::X(i) => {
                        for k in i..n {
                            det[(k, j)] = inputs.inv_c_u[k - i];
                        }
                    }
                    Param::FoAmplitude => det.column_mut(j).copy_from_slice(&inputs.d_amp),
                    Param::FoPhase => det.column_mut(j).copy_from_slice(&inputs.d_phase),
                    Param::FoFrequency => det.column_mut(j).copy_from_slice(&inputs.d_omega),
                    Param::Ma(_) => {}
                }
            }
        }
    }

    let neg_inv_a: Vec<f64> = impulse_response(&[1.0], sys.a().coeffs(), max_root_radius(sys.a())?, IMPULSE_TAIL)?
        .into_iter()
        .map(|v| -v)
        .collect();
    let inv_c = impulse_response(&[1.0], sys.c().coeffs(), max_root_radius(sys.c())?, IMPULSE_TAIL)?;
    let stoch: Vec<Option<Stochastic>> = layout
        .params()
        .iter()
        .map(|p| match *p {
            Param::Ar(i) => Some(Stochastic { h: &neg_inv_a, lag: i }),
            Param::Ma(i) => Some(Stochastic { h: &inv_c, lag: i }),
            _ => None,
        })
        .collect();

    let mut total = det.tr_mul(&det);
    let scale = n as f64 * sys.sigma_e2();
    for j in 0..d {
        for l in 0..d {
            if let (Some(f), Some(g)) = (&stoch[j], &stoch[l]) {
                total[(j, l)] += scale * cross(f, g);
            }
        }
    }
    Ok(FisherEstimate {
        averaged: total / n as f64,
        layout,
        n,
        m: 0,
        sigma_e2: sys.sigma_e2(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigcore::Polynomial;

    #[test]
    fn ar1_information() {
        let a1 = -0.6;
        let sys = ArmaxSystem::new(
            Polynomial::new(vec![1.0, a1]).unwrap(),
            Polynomial::one(),
            Polynomial::one(),
            2.0,
            3.0,
        )
        .unwrap();
        let est = fisher_semi_analytic(&Experiment::Ambient, &sys, 5000).unwrap();
        let info = est.information()[(0, 0)];
        let expect = 5000.0 / (1.0 - a1 * a1);
        assert!((info / expect - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cross_covariance_of_lagged_geometric() {
        let h: Vec<f64> = (0..200).map(|m| 0.5f64.powi(m)).collect();
        let f = Stochastic { h: &h, lag: 1 };
        let g = Stochastic { h: &h, lag: 3 };
        // E{x[k-1] x[k-3]} for x = 1/(1 - 0.5 q^-1) e: 0.5^2 / (1 - 0.25)
        assert!((cross(&f, &g) - 0.25 / 0.75).abs() < 1e-14);
        assert!((cross(&g, &f) - 0.25 / 0.75).abs() < 1e-14);
    }

    #[test]
    fn cross_covariance_orientation() {
        // x = e (white), z = 1/(1 - 0.5 q^-1) e; E{x[k-2] z[k-1]} = 0.5, E{x[k-1] z[k-2]} = 0
        let white = [1.0];
        let geo: Vec<f64> = (0..200).map(|m| 0.5f64.powi(m)).collect();
        let x2 = Stochastic { h: &white, lag: 2 };
        let z1 = Stochastic { h: &geo, lag: 1 };
        assert!((cross(&x2, &z1) - 0.5).abs() < 1e-15);
        assert!((cross(&z1, &x2) - 0.5).abs() < 1e-15);
        let x1 = Stochastic { h: &white, lag: 1 };
        let z2 = Stochastic { h: &geo, lag: 2 };
        assert_eq!(cross(&x1, &z2), 0.0);
        assert_eq!(cross(&z2, &x1), 0.0);
    }

    #[test]
    fn order_limit_enforced() {
        let sys = crate::sysmodel::default_system();
        assert!(matches!(
            fisher_semi_analytic(&Experiment::Ambient, &sys, 100),
            Err(CrbError::OrderLimit { .. })
        ));
    }
}
