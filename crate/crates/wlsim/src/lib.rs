//! Weisfeiler-Leman color refinement, one-dimensional message-passing
//! networks evaluated under explicit precision control, and their k-order
//! generalizations, together with the experiment harness that measures how
//! faithfully the network reproduces the refinement partition as a function
//! of significand precision.

pub mod cli;
pub mod error;
pub mod generate;
pub mod graph;
pub mod harness;
pub mod io;
pub mod korder;
pub mod mpnn;
pub mod precision;
pub mod report;
pub mod wl;

pub use error::{Error, Result};
pub use graph::{Graph, LabelId, NodeId};
pub use precision::PrecisionContext;
