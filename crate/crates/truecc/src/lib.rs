//! A workbench for true-concurrency semantics.
//!
//! The crate implements ST-structures and their STC extension with
//! cancellation, step/path/trace semantics, isomorphism and (hereditary)
//! history-preserving bisimulation, action refinement, and bidirectional
//! translations to configuration structures, inpure event structures, and
//! higher dimensional automata, including bulks, sculptures, and α-chain
//! analysis. Everything is desk-scale and deterministic: values are
//! immutable after validation and all operations are pure functions.

#![forbid(unsafe_code)]

pub mod doc;
pub mod enumerate;
pub mod equiv;
pub mod event;
pub mod fixtures;
pub mod hda;
pub mod refine;
pub mod related;
pub mod st;
pub mod stc;
pub mod translate;

pub use event::{Event, EventId, EventSet, Label};
pub use st::{StConfig, StStructure, ValidationMode};

#[cfg(test)]
mod shared_read_safety {
    //! Validated values are immutable and safe to share across threads.
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn structures_are_send_and_sync() {
        assert_send_sync::<crate::st::StStructure>();
        assert_send_sync::<crate::stc::StcStructure>();
        assert_send_sync::<crate::related::ConfigStructure>();
        assert_send_sync::<crate::related::InpureEventStructure>();
        assert_send_sync::<crate::hda::Hda>();
        assert_send_sync::<crate::translate::Sculpture>();
        assert_send_sync::<crate::stc::ChuSpace>();
    }
}
