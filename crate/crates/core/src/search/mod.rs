//! Random generation, extremization and soundness campaigns.

pub mod extremize;
pub mod fuzz;
pub mod nelder_mead;
pub mod rng;
pub mod sampling;

pub use extremize::{extremize, Direction, ExtremizeRequest, ExtremizeResult};
pub use fuzz::{fuzz_campaign, replay, CampaignSummary, FuzzCampaign, ObservableSource, StateSource};
pub use nelder_mead::NelderMead;
pub use sampling::{sample_gue_observable, sample_haar_state, SampleConfig};
