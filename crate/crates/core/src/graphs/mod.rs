//! Simple graphs, k-WL refinement and a backtracking isomorphism oracle.

mod graph;
mod io;
mod iso;
pub(crate) mod refine;
mod wl;

pub(crate) use graph::check_permutation;
pub use graph::Graph;
pub use io::{parse_graph, write_graph};
pub use iso::{graph_iso_oracle, IsoOutcome, DEFAULT_ISO_BUDGET};
pub use refine::{Outcome, Verdict};
pub(crate) use wl::graph_wl_on;
pub use wl::{graph_wl, refinement_sequence, GraphColoring, DEFAULT_MAX_TUPLES};

/// The simple complement of `g`.
pub fn complement(g: &Graph) -> Graph {
    g.complement()
}
