//! Computational tools for finite permutation groups: stabilizer chains,
//! normal subgroup lattices, 2-closures, fixity and elusiveness, plus a
//! harness that checks fixity bounds for elusive groups over a corpus of
//! transitive groups.

pub mod arith;
pub mod chain;
pub mod closure;
pub mod corpus;
pub mod error;
pub mod fixity;
pub mod group;
pub mod harness;
pub mod perm;
pub mod report;
pub mod structure;

use serde::{Deserialize, Serialize};

pub use arith::{factorize, p_valuation, FactoredInteger};
pub use closure::{is_2_closed, orbitals, two_closure, OrbitalPartition, OrderedPartition};
pub use corpus::{builtin_family, load_corpus, parse_group_file, serialize, CorpusEntry, Expectations};

pub use error::{Error, Result};
pub use fixity::{fixity, is_elusive, FixityResult, PrimeFixProfile};
pub use group::PermGroup;
pub use harness::{analyze, check, run_all, GroupAnalysis};

pub use perm::{CycleType, Permutation};
pub use report::{write_report, CheckId, CheckResult, Report, Status};

pub use structure::NormalSubgroupInfo;

/// Resource limits shared by every exhaustive computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest group order that may be enumerated element by element.
    pub enumeration_cap: u64,
    /// Largest number of normal subgroups a lattice may hold.
    pub lattice_cap: usize,
    /// Largest degree accepted by the 2-closure search.
    pub closure_degree_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { enumeration_cap: 1_000_000, lattice_cap: 512, closure_degree_cap: 32 }
    }
}
