//! Predictor gradients, Monte-Carlo Fisher information and the parameter CRB.

mod gradients;
mod montecarlo;
mod predictor;
mod semi_analytic;
mod theta;

pub use gradients::{gradients, gradients_ambient, gradients_case1, gradients_case2, GradientMatrix};
pub use montecarlo::{
    crb_from_fisher, crb_monte_carlo, fisher_information, invert_spd, CrbMatrix, CrbMeta,
    FisherEstimate, MAX_CONDITION,
};
pub use predictor::{predict_one_step, Prediction};
pub use semi_analytic::{fisher_semi_analytic, ORACLE_ORDER_LIMIT};
pub use theta::{Case, Experiment, Param, Theta, ThetaLayout};
