//! Symmetric-group calculus for 2- and 4-copy twirls: permutations of tensor
//! slots, character tables, permutation-operator and `Q` traces, and the Haar
//! and Clifford Weingarten tables.

pub mod characters;
pub mod commutant;
pub mod perm;
pub mod weingarten;

pub use characters::{character_table, s2_character_table, s4_character_table, CharacterTable};
pub use commutant::{
    bipartite_permutation_operator, clifford_irrep_dimensions, irrep_dimensions, permutation_operator, pi4_traces,
    q_operator, q_trace, q_trace_exact, q_trace_with_permutation, symmetric_projector, trace_permutation,
    trace_permutation_exact, Pi4Traces, Sector,
};
pub use perm::{group, s2, s4, Permutation, SymmetricGroup};
pub use weingarten::{
    gram_matrix, haar_fold_channel, weingarten_clifford, weingarten_haar, CliffordWeingartenTables, WeingartenTable,
};
