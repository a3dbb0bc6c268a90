//! Exact arithmetic for truncated Witt vectors, delta-rings and prisms,
//! plus a harness of mechanical identity checks over small finite rings.

pub mod base_rings;
pub mod delta;
pub mod error;
pub mod hodge_tate;
pub mod lemma_harness;
pub mod prism;
pub mod witt;

pub use error::{Error, Result};
