//! Derived-category computations for finite-dimensional gentle algebras.
//!
//! The pipeline runs from a textual presentation of a bound quiver through
//! threads and homotopy words to explicit complexes of representations, with
//! an exact linear-algebra engine for morphisms in the homotopy category. On
//! top of that sit the combinatorial chain-map bases, Serre orbits of mouth
//! objects, and the search for exceptional cycles.
//!
//! ```
//! use gentle_core::prelude::*;
//!
//! let alg = load("vertex 1 2\narrow a : 1 -> 2\n").unwrap();
//! let orbits = ag_invariants(&alg).unwrap();
//! assert_eq!((orbits[0].n, orbits[0].m), (3, 1));
//! ```

pub mod alp;
pub mod complexes;
pub mod error;
pub mod exceptional;
pub mod field;
pub mod hom;
pub mod linalg;
pub mod par;
pub mod presentation;
pub mod random;
pub mod threads;
pub mod words;

pub use error::{GentleError, Result};

/// Parses and validates a presentation in one step.
pub fn load(text: &str) -> Result<presentation::GentleAlgebra> {
    presentation::validate_gentle(&presentation::parse_presentation(text)?)
}

pub mod prelude {
    pub use crate::alp::{alp_basis, double_maps, graph_maps, single_maps, CombMap, MapKind};
    pub use crate::complexes::{
        injective, materialize, minimize, nakayama_on_projectives, perfect_replacement, projective, shift, simple,
        unfold_band, unfold_string, ProjComplex, RepComplex, Representation,
    };
    pub use crate::error::{GentleError, Result};
    pub use crate::exceptional::{
        ag_invariants, brute_force_search, check_band_spherical, classify_exceptional_cycles, cycle_equiv,
        mouth_objects, serre_of_mouth, verify_cycle, CycleEntry, ExceptionalCycle, MouthObject, SearchBounds,
        SerreOrbit,
    };
    pub use crate::field::{Field, Fp, Q};
    pub use crate::hom::{
        chain_map_space, graded_profile, hom_k_dim, hom_k_dim_shifted, homotopy_space, iso_indecomposable,
        GradedHomProfile,
    };
    pub use crate::load;
    pub use crate::par::Parallelism;
    pub use crate::presentation::{
        enumerate_sign_assignments, parse_presentation, validate_gentle, GentleAlgebra, Presentation,
        SignAssignment,
    };
    pub use crate::threads::{aag_cycles, detect_critical_cycles, enumerate_threads, Thread, ThreadTables};
    pub use crate::words::{canonical_band, canonical_string, parse_word, HomotopyBand, HomotopyString, Word};
}
