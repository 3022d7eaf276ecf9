//! Empirical and adversarial exploration of reversals.

mod monte_carlo;
mod split;

pub use monte_carlo::{
    estimate_paradox_probability, estimate_with_sampler, is_paradox_point, CellMasses, CellSampler,
    EqualMasses, ParadoxEstimate, UniformSimplex, SAMPLES_PER_STREAM,
};
pub use split::{find_reversing_split, SplitWitness, SPLIT_SEARCH_CAP};
