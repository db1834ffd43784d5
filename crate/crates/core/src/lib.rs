//! Exact resistance invariants of special alternating diagrams.
//!
//! ```
//! use knotres::{bundled, invariants, tait};
//!
//! let d = bundled::diagram("8a2A").unwrap();
//! let g = tait::tait_graph(&d).unwrap();
//! let fp = invariants::fp(&tait::laplacian(&g)).unwrap();
//! assert_eq!(fp.to_string(), "8/3");
//! ```

pub mod bundled;
pub mod diagram;
pub mod flype;
pub mod linalg;
pub mod invariants;
pub mod tait;
