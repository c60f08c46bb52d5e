//! Analytical dimensioning of computation resources in three networking settings:
//!
//! - [`sdn`]: an SDN controller modelled as an M/M/1 queue, with the outage
//!   probability of missing a normally distributed deadline.
//! - [`cran`]: the compute budget of a C-RAN baseband unit and the data rate it
//!   can sustain.
//! - [`mcc`]: end-to-end latency of a task offloaded to a mobile clone over
//!   C-RAN, the clone capacity that meets a deadline, and a joint planner.
//!
//! [`des`] is an event-driven M/M/1 simulator used to cross-check the SDN model,
//! and [`sweep`] regenerates figure data as CSV.
//!
//! The analytical models are generic over the scalar type. The C-RAN and clone
//! capacity formulas only need field arithmetic, so they also run over exact
//! rationals; everything that needs `sqrt`, `exp` or the Q-function requires
//! [`Real`]. Concrete `f64`/`f32` aliases are exported below.

pub mod cran;
pub mod des;
pub mod error;
pub mod format;
pub mod mcc;
pub mod scalar;
pub mod sdn;
pub mod search;
pub mod stats;
pub mod sweep;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

pub use cran::{BbuAllocation, CranConfig};
pub use des::{merged_arrival_check, simulate, OutageSemantics, SimConfig, SimResult};
pub use mcc::{CloneAllocation, JointPlan, MccTask, PlanOptions, PlanWeights};
pub use sdn::{SdnScenario, Sojourn};
pub use stats::{ln_q_function, q_function, NormalDeadline, RandomStream, RngSeed};
pub use sweep::{emit_csv, run_sweep, Outcome, SweepModel, SweepRow, SweepSpec};

pub type NormalDeadlineF64 = NormalDeadline<f64>;
pub type NormalDeadlineF32 = NormalDeadline<f32>;
pub type SdnScenarioF64 = SdnScenario<f64>;
pub type SdnScenarioF32 = SdnScenario<f32>;
pub type CranConfigF64 = CranConfig<f64>;
pub type CranConfigF32 = CranConfig<f32>;
pub type BbuAllocationF64 = BbuAllocation<f64>;
pub type MccTaskF64 = MccTask<f64>;
pub type MccTaskF32 = MccTask<f32>;
pub type JointPlanF64 = JointPlan<f64>;
