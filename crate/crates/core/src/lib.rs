//! Partition refinement and abstract-domain refinement for finite Kripke
//! structures.
//!
//! The efficient refiners ([`pt_refine`], [`gv_refine`], [`sim_refine`],
//! [`ef_refine`]) work on [`Partition`]s. The [`domain`] and [`shell`]
//! modules compute the same results explicitly over families of state sets
//! and serve as reference implementations on small structures.

pub mod bisim;
pub mod domain;
pub mod error;
pub mod kripke;
pub mod minimize;
pub mod oracle;
pub mod partition;
pub mod random;
pub mod reach;
pub mod shell;
pub mod simeq;
pub mod stateset;
pub mod stutter;

pub use bisim::{is_pt_stable, pt_refine};
pub use domain::MooreDomain;
pub use error::{DomainError, KripkeError, ParseError, PartitionError};
pub use kripke::{KripkeBuilder, KripkeStructure};
pub use minimize::{minimize, Language};
pub use partition::{BlockId, Partition};
pub use reach::ef_refine;
pub use simeq::{sim_refine, PosetDomain};
pub use stateset::{StateId, StateSet, Subset};
pub use stutter::gv_refine;
