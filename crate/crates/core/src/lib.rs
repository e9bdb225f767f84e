//! Cyclotomic cosets, largest coset leaders and BCH code dimensions for the
//! antiprimitive length `n = q^m + 1`.
//!
//! * [`cyclotomic`] is the exact residue oracle.
//! * [`closed_forms`] evaluates the leader classifications, the largest-leader
//!   ladders, `Φ`/`Φ′`, the interval partitions and the sign sequences.
//! * [`dimensions`] computes defining sets, dimensions and Bose distances,
//!   directly and from the closed-form tables.
//! * [`lab`] registers every claim as an executable check and sweeps them
//!   over parameter grids.

mod arith;
pub mod closed_forms;
pub mod cyclotomic;
pub mod dimensions;
pub mod error;
pub mod lab;
pub mod params;

pub use closed_forms::{
    classify_leader_even_m, classify_leader_odd_m, delta_ladder, delta_ladder_even_m,
    delta_ladder_odd_m, ia1_partition, ia2_partition, phi, phi_prime, seq_compare, shift_f,
    shift_h, sign_sequence, DeltaLadder, Interval, LadderCase, LadderEntry, LeaderVerdict,
    SignSequence, Status, Verdict,
};
pub use cyclotomic::{
    coset_leader_of, coset_size, is_coset_leader, largest_leaders, largest_leaders_within,
    leaders_in_range, leaders_with_sizes, next_leader_from, orbit, y_sequence, Coset, YSequence,
};
pub use dimensions::{
    bose_distance, closed_form_candidates, closed_form_dimension, defining_set_size, dimension,
    dimension_record, dimension_table, dimension_table_within, is_lcd, ClosedFormRows,
    DefiningSetSpec, DimensionRecord, LeaderProfile,
};
pub use error::{Error, Result};
pub use params::CodeParams;
