//! Lower and upper bounds on concurrence, plus the separability criteria
//! they are compared against.

mod bipartite;
mod checks;
mod measured;
mod multipartite;
mod report;
mod transposition;

pub use bipartite::{
    breuer_bound, breuer_bound_with_reference, dual_upper, marginal_deviation, mb_lower,
    mb_pair_lower, positive_map_bound, witness_bound, witness_prefactor, MAX_MIXED_TOL,
};
pub use checks::{
    apply_channel, channel_monotonicity_check, ck_upper, entropic_check, fidelity,
    fidelity_bound_check, phi_bound_check, phi_bound_sides, ppt_check, rg_concurrence_bound,
    robustness_pure, schmidt_number_detect, EntropicCheck, FidelityPair, PptCheck, DETECT_TOL,
    PPT_TOL,
};
pub use measured::{BipartiteWitnesses, MultipartiteWitnesses};
pub use multipartite::{multipartite_lower, multipartite_upper};
pub use report::{BoundReport, Side, Target};
pub use transposition::{transposition_bound, UnitaryChoice, DEFAULT_RESTARTS, MARGINAL_TOL};
