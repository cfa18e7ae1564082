use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{CrbError, Result};
use crate::sysmodel::{derive_seed, synth_ambient, synth_case1, synth_case2, ArmaxSystem, NoiseRealization};

use super::gradients::gradients;
use super::theta::{Case, Experiment, Param, ThetaLayout};

/// Largest accepted condition number of the diagonally scaled Fisher matrix.
pub const MAX_CONDITION: f64 = 1e12;

/// Rows per partial product in the outer-product accumulation.
const ROW_CHUNK: usize = 256;
/// Trials evaluated per parallel batch; batches are merged in trial order.
const TRIAL_BATCH: usize = 64;

/// Neumaier-compensated running sum of matrices.
#[derive(Debug, Clone)]
pub(crate) struct CompensatedSum {
    sum: DMatrix<f64>,
    comp: DMatrix<f64>,
}

impl CompensatedSum {
    pub fn zeros(d: usize) -> Self {
        Self {
            sum: DMatrix::zeros(d, d),
            comp: DMatrix::zeros(d, d),
        }
    }

    pub fn add(&mut self, x: &DMatrix<f64>) {
        for ((s, c), &v) in self.sum.iter_mut().zip(self.comp.iter_mut()).zip(x.iter()) {
            let t = *s + v;
            if s.abs() >= v.abs() {
                *c += (*s - t) + v;
            } else {
                *c += (v - t) + *s;
            }
            *s = t;
        }
    }

    pub fn total(&self) -> DMatrix<f64> {
        &self.sum + &self.comp
    }
}

/// Monte-Carlo average of psi psi^T over samples and trials, before inversion.
#[derive(Debug, Clone, PartialEq)]
pub struct FisherEstimate {
    /// (1/N) sum_k (1/M) sum_i psi_i(k) psi_i(k)^T, full layout.
    pub averaged: DMatrix<f64>,
    pub layout: ThetaLayout,
    pub n: usize,
    pub m: usize,
    pub sigma_e2: f64,
}

impl FisherEstimate {
    /// Fisher information N/sigma_e2 times the averaged outer product.
    pub fn information(&self) -> DMatrix<f64> {
        &self.averaged * (self.n as f64 / self.sigma_e2)
    }
}

/// Metadata carried with a CRB matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CrbMeta {
    pub n: usize,
    pub m: usize,
    pub sigma_e2: f64,
    pub case: Case,
    /// Condition number of the diagonally scaled Fisher matrix.
    pub condition: f64,
    /// Parameters held at their true values during inversion.
    pub pinned: Vec<Param>,
}

/// Parameter CRB over the free parameters of `layout`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrbMatrix {
    pub matrix: DMatrix<f64>,
    /// Fisher information over the same parameters (inverse of `matrix`).
    pub fisher: DMatrix<f64>,
    pub layout: ThetaLayout,
    pub meta: CrbMeta,
}

impl CrbMatrix {
    /// Wraps an externally supplied covariance (no Fisher matrix available).
    pub fn from_covariance(matrix: DMatrix<f64>, layout: ThetaLayout) -> Result<Self> {
        let d = layout.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(CrbError::LengthMismatch(matrix.nrows(), d));
        }
        let case = layout.case();
        Ok(Self {
            fisher: DMatrix::zeros(d, d),
            matrix,
            layout,
            meta: CrbMeta {
                n: 0,
                m: 0,
                sigma_e2: f64::NAN,
                case,
                condition: f64::NAN,
                pinned: Vec::new(),
            },
        })
    }

    pub fn case(&self) -> Case {
        self.layout.case()
    }

    pub fn variance(&self, p: Param) -> Option<f64> {
        self.layout.index_of(p).map(|i| self.matrix[(i, i)])
    }

    /// Upper-left n_a x n_a block (AR coefficients).
    pub fn ar_block(&self) -> DMatrix<f64> {
        let na = self.layout.na();
        self.matrix.view((0, 0), (na, na)).into_owned()
    }
}

/// Inverts a symmetric positive definite matrix through the eigendecomposition
/// of its unit-diagonal scaling D S D, D = diag(S)^{-1/2}. Returns the inverse
/// and the condition number of D S D.
pub fn invert_spd(s: &DMatrix<f64>) -> Result<(DMatrix<f64>, f64)> {
    let d = s.nrows();
    let scale: Vec<f64> = (0..d)
        .map(|i| {
            let v = s[(i, i)];
            if v > 0.0 && v.is_finite() {
                Ok(1.0 / v.sqrt())
            } else {
                Err(CrbError::IllConditioned {
                    condition: f64::INFINITY,
                })
            }
        })
        .collect::<Result<_>>()?;
    let scaled = DMatrix::from_fn(d, d, |i, j| 0.5 * (s[(i, j)] + s[(j, i)]) * scale[i] * scale[j]);
    let eig = SymmetricEigen::new(scaled);
    let lmax = eig.eigenvalues.max();
    let lmin = eig.eigenvalues.min();
    if !(lmin > 0.0) {
        return Err(CrbError::IllConditioned {
            condition: f64::INFINITY,
        });
    }
    let condition = lmax / lmin;
    if condition > MAX_CONDITION {
        return Err(CrbError::IllConditioned { condition });
    }
    let v = &eig.eigenvectors;
    let inv_l = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l));
    let inner = v * inv_l * v.transpose();
    let inv = DMatrix::from_fn(d, d, |i, j| {
        0.5 * (inner[(i, j)] + inner[(j, i)]) * scale[i] * scale[j]
    });
    Ok((inv, condition))
}

/// sum_k psi(k) psi(k)^T for one trial, chunked and compensated.
fn trial_outer_sum(g: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, d) = g.shape();
    let mut acc = CompensatedSum::zeros(d);
    let mut start = 0;
    while start < n {
        let len = ROW_CHUNK.min(n - start);
        let block = g.rows(start, len);
        acc.add(&block.tr_mul(&block));
        start += len;
    }
    acc.total()
}

fn run_trial(exp: &Experiment, sys: &ArmaxSystem, n: usize, seed: u64) -> Result<DMatrix<f64>> {
    let e = NoiseRealization::generate(seed, sys.sigma_e2(), sys.history_len(), n);
    let y = match exp {
        Experiment::Ambient => synth_ambient(sys, &e),
        Experiment::Case1(fo) => synth_case1(sys, fo, &e)?,
        Experiment::Case2(fo) => synth_case2(sys, fo, &e)?,
    };
    let g = gradients(sys, exp, &y, &e.signal)?;
    Ok(trial_outer_sum(&g.data))
}

/// Monte-Carlo estimate of the averaged outer product of predictor gradients.
///
/// Trial i uses noise seed `derive_seed(base_seed, i)`. Trials run on the
/// current rayon pool and partial sums are merged in trial order, so the
/// result is bit-identical for any thread count.
pub fn fisher_information(exp: &Experiment, sys: &ArmaxSystem, n: usize, m: usize, base_seed: u64) -> Result<FisherEstimate> {
    exp.validate()?;
    let layout = exp.layout(sys);
    if m == 0 {
        return Err(CrbError::InvalidArgument("need at least one Monte-Carlo trial".into()));
    }
    if n <= layout.dim() {
        return Err(CrbError::InvalidArgument(format!(
            "record length {n} must exceed the parameter count {}",
            layout.dim()
        )));
    }
    let mut acc = CompensatedSum::zeros(layout.dim());
    let mut start = 0;
    while start < m {
        let end = (start + TRIAL_BATCH).min(m);
        let batch: Vec<DMatrix<f64>> = (start..end)
            .into_par_iter()
            .map(|i| run_trial(exp, sys, n, derive_seed(base_seed, i as u64)))
            .collect::<Result<_>>()?;
        for t in &batch {
            acc.add(t);
        }
        start = end;
    }
    let averaged = acc.total() / (n as f64 * m as f64);
    Ok(FisherEstimate {
        averaged,
        layout,
        n,
        m,
        sigma_e2: sys.sigma_e2(),
    })
}

/// CRB from a Fisher estimate, with `pinned` parameters held fixed.
pub fn crb_from_fisher(est: &FisherEstimate, pinned: &[Param]) -> Result<CrbMatrix> {
    let layout = est.layout.without(pinned);
    let idx: Vec<usize> = layout
        .params()
        .iter()
        .map(|&p| est.layout.index_of(p).expect("subset of full layout"))
        .collect();
    let d = idx.len();
    let sub = DMatrix::from_fn(d, d, |i, j| est.averaged[(idx[i], idx[j])]);
    let (inv, condition) = invert_spd(&sub)?;
    let scale = est.sigma_e2 / est.n as f64;
    Ok(CrbMatrix {
        matrix: inv * scale,
        fisher: sub / scale,
        layout: layout.clone(),
        meta: CrbMeta {
            n: est.n,
            m: est.m,
            sigma_e2: est.sigma_e2,
            case: layout.case(),
            condition,
            pinned: pinned.to_vec(),
        },
    })
}

/// Monte-Carlo asymptotic CRB: (sigma_e2/N) [ (1/N) sum_k (1/M) sum_i psi psi^T ]^{-1}.
pub fn crb_monte_carlo(exp: &Experiment, sys: &ArmaxSystem, n: usize, m: usize, base_seed: u64) -> Result<CrbMatrix> {
    let est = fisher_information(exp, sys, n, m, base_seed)?;
    crb_from_fisher(&est, exp.pinned())
}
