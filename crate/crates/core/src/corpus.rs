//! Built-in graphs and maps used by tests, benchmarks and the CLI smoke runs.

use crate::error::Result;
use crate::graph::{parse_graph, DirectedGraph};
use crate::homcheck::Homeomorphism;
use crate::transducer::Transducer;

macro_rules! corpus_file {
    ($dir:literal, $name:literal, $ext:literal) => {
        (
            $name,
            include_str!(concat!("../corpus/", $dir, "/", $name, ".", $ext)),
        )
    };
}

/// `(name, graph file)` pairs.
pub const GRAPHS: &[(&str, &str)] = &[
    corpus_file!("graphs", "pt", "graph"),
    corpus_file!("graphs", "loop", "graph"),
    corpus_file!("graphs", "p2", "graph"),
    corpus_file!("graphs", "p2_relabel", "graph"),
    corpus_file!("graphs", "p2x2", "graph"),
    corpus_file!("graphs", "o2", "graph"),
    corpus_file!("graphs", "o2_split", "graph"),
    corpus_file!("graphs", "o3", "graph"),
    corpus_file!("graphs", "tree2", "graph"),
    corpus_file!("graphs", "btree", "graph"),
    corpus_file!("graphs", "chain3", "graph"),
    corpus_file!("graphs", "diamond", "graph"),
    corpus_file!("graphs", "sink_loop", "graph"),
];

const MAPS: &[(&str, &str)] = &[
    corpus_file!("maps", "o2_identity", "map"),
    corpus_file!("maps", "o2_swap", "map"),
    corpus_file!("maps", "o2_first_swap", "map"),
    corpus_file!("maps", "o2_to_split", "map"),
    corpus_file!("maps", "split_to_o2", "map"),
    corpus_file!("maps", "pt_to_loop", "map"),
    corpus_file!("maps", "loop_to_pt", "map"),
    corpus_file!("maps", "loop_identity", "map"),
    corpus_file!("maps", "p2_relabel", "map"),
    corpus_file!("maps", "p2_relabel_inverse", "map"),
    corpus_file!("maps", "p2_point_swap", "map"),
    corpus_file!("maps", "p2x2_swap", "map"),
    corpus_file!("maps", "o3_cycle", "map"),
    corpus_file!("maps", "o3_cycle_inverse", "map"),
    corpus_file!("maps", "tree2_swap", "map"),
    corpus_file!("maps", "btree_mirror", "map"),
    corpus_file!("maps", "chain3_identity", "map"),
    corpus_file!("maps", "diamond_flip", "map"),
    corpus_file!("maps", "sink_loop_identity", "map"),
];

/// Weight files, keyed by the graph they belong to.
pub const WEIGHTS: &[(&str, &str)] = &[
    corpus_file!("weights", "p2", "weights"),
    ("zero", include_str!("../corpus/weights/zero.weights")),
];

pub fn graph_text(name: &str) -> Option<&'static str> {
    GRAPHS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn map_text(name: &str) -> Option<&'static str> {
    MAPS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Parses a corpus graph. Panics on unknown names.
pub fn graph(name: &str) -> DirectedGraph {
    let text = graph_text(name).unwrap_or_else(|| panic!("no corpus graph `{name}`"));
    parse_graph(text).expect("corpus graphs parse")
}

/// A candidate homeomorphism with its known classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Instance {
    pub name: &'static str,
    pub source: &'static str,
    pub target: &'static str,
    pub forward: &'static str,
    pub backward: &'static str,
    pub conjugacy: bool,
}

impl Instance {
    pub fn graphs(&self) -> (DirectedGraph, DirectedGraph) {
        (graph(self.source), graph(self.target))
    }

    pub fn transducers(&self) -> Result<(Transducer, Transducer)> {
        let (e, f) = self.graphs();
        let text = |n: &str| map_text(n).unwrap_or_else(|| panic!("no corpus map `{n}`"));
        Ok((
            Transducer::parse(text(self.forward), &e, &f)?,
            Transducer::parse(text(self.backward), &f, &e)?,
        ))
    }

    pub fn homeomorphism(&self) -> Result<Homeomorphism> {
        let (t, u) = self.transducers()?;
        Homeomorphism::new(t, u)
    }

    pub fn is_acyclic(&self) -> bool {
        let (e, f) = self.graphs();
        e.longest_path().is_some() && f.longest_path().is_some()
    }
}

const fn inst(
    name: &'static str,
    source: &'static str,
    target: &'static str,
    forward: &'static str,
    backward: &'static str,
    conjugacy: bool,
) -> Instance {
    Instance {
        name,
        source,
        target,
        forward,
        backward,
        conjugacy,
    }
}

pub const INSTANCES: &[Instance] = &[
    inst("o2-identity", "o2", "o2", "o2_identity", "o2_identity", true),
    inst("o2-swap", "o2", "o2", "o2_swap", "o2_swap", true),
    inst("o2-first-letter-swap", "o2", "o2", "o2_first_swap", "o2_first_swap", false),
    inst("o2-out-split", "o2", "o2_split", "o2_to_split", "split_to_o2", true),
    inst("out-split-o2", "o2_split", "o2", "split_to_o2", "o2_to_split", true),
    inst("pt-loop", "pt", "loop", "pt_to_loop", "loop_to_pt", false),
    inst("loop-pt", "loop", "pt", "loop_to_pt", "pt_to_loop", false),
    inst("loop-identity", "loop", "loop", "loop_identity", "loop_identity", true),
    inst("p2-relabel", "p2", "p2_relabel", "p2_relabel", "p2_relabel_inverse", true),
    inst("p2-point-swap", "p2", "p2", "p2_point_swap", "p2_point_swap", false),
    inst("p2x2-summand-swap", "p2x2", "p2x2", "p2x2_swap", "p2x2_swap", true),
    inst("o3-cycle", "o3", "o3", "o3_cycle", "o3_cycle_inverse", true),
    inst("tree2-swap", "tree2", "tree2", "tree2_swap", "tree2_swap", true),
    inst("btree-mirror", "btree", "btree", "btree_mirror", "btree_mirror", true),
    inst("chain3-identity", "chain3", "chain3", "chain3_identity", "chain3_identity", true),
    inst("diamond-flip", "diamond", "diamond", "diamond_flip", "diamond_flip", true),
    inst("sink-loop-identity", "sink_loop", "sink_loop", "sink_loop_identity", "sink_loop_identity", true),
];

pub fn instance(name: &str) -> Option<&'static Instance> {
    INSTANCES.iter().find(|i| i.name == name)
}
