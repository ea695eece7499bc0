//! Deterministic bosonic state preparation: the incremental squeezing
//! schedule, two- and four-legged cat states, GKP codewords via repeated
//! cat-splitting circuits, and Fock-state circuits.

pub mod cat;
pub mod fock;
pub mod gkp_prep;
pub mod squeeze;

pub use cat::{prepare_cat, prepare_four_legged_cat, CatParity, CatSpec, Corrector};
pub use fock::{law_eberly_fock, prepare_fock1};
pub use gkp_prep::{optimal_step_count, prepare_gkp, GkpPrepPlan, GkpStepMetrics};
pub use squeeze::{
    run_squeezing, squeezing_gadget, SqueezeDirection, SqueezeReport, SqueezeSchedule,
};
