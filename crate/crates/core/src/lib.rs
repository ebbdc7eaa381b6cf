//! Exact counting and enumeration of graceful permutations, i.e. graceful
//! labelings of paths, together with the endpoint-constrained counts and the
//! gluing construction behind exponential lower bounds on their number.

pub mod bounds;
pub mod error;
pub mod report;
pub mod search;
pub mod state;

pub use bounds::{certify_bound, gamma, glue, is_bipartite_graceful, verify_inequality, BoundResult, Threshold};
pub use error::{Error, Result};
pub use report::{load_checkpoint, save_checkpoint, Format, LevelStats};
pub use search::{
    brute_force_count, count, count_with, dfs_count, enumerate, expand_level, finalize, is_graceful, ClassMap,
    Constraint, CountResult, GracefulPermutation, MultiplicityPair, SearchOptions,
};
pub use state::{candidate_pairs, CanonicalKey, Orientation, PartialState};
