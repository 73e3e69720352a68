//! Outer learners: ε-EWOO tunes the learning rate, FTL the initialization.

pub mod ewoo;
pub mod ftl;
pub mod params;

pub use ewoo::{eps_ewoo_predict, eps_ewoo_update, eta_from_v, ewoo_mean, v_from_eta, LrMetaState};
pub use ftl::{ftl_predict, ftl_update, InitMetaState};
pub use params::{
    admissible_delta_interval, identification_error, min_feasible_rounds, regularized_lr_loss, AlphaRule, DeltaRule,
    MetaParams, ProblemSize,
};
