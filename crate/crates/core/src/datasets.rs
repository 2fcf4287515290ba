//! Small networks shipped with the crate.

use crate::graph::{parse_edge_list, Graph};

const KARATE: &str = include_str!("../data/karate.txt");
const RING_OF_SIX: &str = include_str!("../data/ring6.txt");
const MECHANISM_B: &str = include_str!("../data/mechanism_b.txt");
const MECHANISM_C: &str = include_str!("../data/mechanism_c.txt");
const DEMO_BLOCKS: &str = include_str!("../data/demo_blocks.txt");

/// Names accepted by [`bundled`].
pub const NAMES: [&str; 5] = [
    "karate",
    "ring6",
    "mechanism-b",
    "mechanism-c",
    "demo-blocks",
];

fn load(text: &str) -> Graph {
    parse_edge_list(text).expect("bundled edge list is valid")
}

/// Zachary's karate club, labels `1..=34`.
pub fn karate() -> Graph {
    load(KARATE)
}

/// Six-node cycle `1-2-3-4-5-6-1`.
pub fn ring_of_six() -> Graph {
    load(RING_OF_SIX)
}

/// Five nodes where `1-3` would close a triangle and `3-5` a 4-clique.
pub fn mechanism_b() -> Graph {
    load(MECHANISM_B)
}

/// Five nodes where `3-5` has two common neighbours and `1-3` one.
pub fn mechanism_c() -> Graph {
    load(MECHANISM_C)
}

/// Three dense groups with bridges and degree-one leaves.
pub fn demo_blocks() -> Graph {
    load(DEMO_BLOCKS)
}

pub fn bundled(name: &str) -> Option<Graph> {
    match name {
        "karate" => Some(karate()),
        "ring6" | "ring" => Some(ring_of_six()),
        "mechanism-b" => Some(mechanism_b()),
        "mechanism-c" => Some(mechanism_c()),
        "demo-blocks" | "demo" => Some(demo_blocks()),
        _ => None,
    }
}

/// Raw edge-list text of a bundled network.
pub fn bundled_text(name: &str) -> Option<&'static str> {
    match name {
        "karate" => Some(KARATE),
        "ring6" | "ring" => Some(RING_OF_SIX),
        "mechanism-b" => Some(MECHANISM_B),
        "mechanism-c" => Some(MECHANISM_C),
        "demo-blocks" | "demo" => Some(DEMO_BLOCKS),
        _ => None,
    }
}
