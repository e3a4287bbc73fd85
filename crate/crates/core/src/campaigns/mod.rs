//! Parameter sweeps and Monte Carlo ensembles over the gate schemes.

mod runner;
mod schemes;
mod spec;

pub use runner::{aggregate, parallel_map, run_trials, trial_rng, trial_seed, CampaignPoint};
pub use schemes::{blockade_gate, multi_qubit, two_qubit, GateParams, LzsParams, Scheme};
pub use spec::{
    ddf_scenario, perturbed, spec_hash, superatom_scenario, CampaignKind, CampaignResult, CampaignSpec, PairGeometry,
    RelativeParameter, CAMPAIGN_CSV_HEADER, DEFAULT_TRIALS,
};
