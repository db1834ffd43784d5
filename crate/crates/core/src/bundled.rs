//! Diagrams shipped in the repository's `data/` directory.

use crate::diagram::{parse_pd, Diagram};
use crate::flype::TangleRegion;
use crate::tait::{parse_edge_list, TaitGraph};

pub const TREFOIL: &str = include_str!("../../../data/trefoil.pd");
pub const CURL: &str = include_str!("../../../data/curl.pd");
pub const TORUS3: &str = include_str!("../../../data/torus3.pd");
pub const TORUS5: &str = include_str!("../../../data/torus5.pd");
pub const TORUS7: &str = include_str!("../../../data/torus7.pd");
pub const TORUS9: &str = include_str!("../../../data/torus9.pd");
pub const K8A2A: &str = include_str!("../../../data/8a2A.pd");
pub const K8A2B: &str = include_str!("../../../data/8a2B.pd");
pub const K8A2A_TANGLE: &str = include_str!("../../../data/8a2A.tangle.json");

/// Edge lists of the bundled Tait graphs.
pub const EDGE_LISTS: [(&str, &str); 6] = [
    ("torus3", include_str!("../../../data/torus3.edges.json")),
    ("torus5", include_str!("../../../data/torus5.edges.json")),
    ("torus7", include_str!("../../../data/torus7.edges.json")),
    ("torus9", include_str!("../../../data/torus9.edges.json")),
    ("8a2A", include_str!("../../../data/8a2A.edges.json")),
    ("8a2B", include_str!("../../../data/8a2B.edges.json")),
];

/// Accepted bundled diagrams by name.
pub const DIAGRAMS: [(&str, &str); 7] = [
    ("trefoil", TREFOIL),
    ("torus3", TORUS3),
    ("torus5", TORUS5),
    ("torus7", TORUS7),
    ("torus9", TORUS9),
    ("8a2A", K8A2A),
    ("8a2B", K8A2B),
];

pub fn diagram(name: &str) -> Option<Diagram> {
    let text = DIAGRAMS.iter().find(|(n, _)| *n == name)?.1;
    Some(parse_pd(text).expect("bundled diagram parses"))
}

pub fn all() -> Vec<(&'static str, Diagram)> {
    DIAGRAMS.iter().map(|(n, t)| (*n, parse_pd(t).expect("bundled diagram parses"))).collect()
}

/// The tangle whose flype takes 8a2A to 8a2B.
pub fn flype_tangle() -> TangleRegion {
    serde_json::from_str(K8A2A_TANGLE).expect("bundled tangle parses")
}

pub fn edge_lists() -> Vec<(&'static str, TaitGraph)> {
    EDGE_LISTS
        .iter()
        .map(|(n, t)| (*n, parse_edge_list(t, true).expect("bundled edge list parses")))
        .collect()
}
