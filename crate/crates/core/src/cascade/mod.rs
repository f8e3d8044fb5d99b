//! The cascade gadget: three ranks of humans steered by six stimulus players.

mod build;
mod emotional;
mod params;
mod verify;

pub use build::{
    build_cascade, cascade_state, letters, place_cascade, CascadeAssembly, CascadeLayout, CascadeState, Influence,
    Letter, Rank,
};
pub use emotional::{check_emotional_invariant, emotional_profile, EmotionalMonitor, InvariantViolation};
pub use params::{validate_params, CascadeParams, ParamViolation};
pub use verify::{
    harness, verify_cascade_properties, verify_flip, verify_payoff_gap, verify_rank_chain, CascadeHarness,
    FlipReport, ItemCheck, PayoffGapReport, PlayerGap, Probe, ProbeNet, PropertiesReport, RankChainReport,
};
