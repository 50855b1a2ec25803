//! MC, BMC and HBMC orderings, ordering graphs and the equivalence checker.

mod adjacency;
mod blocking;
mod bmc;
mod coloring;
mod dump;
mod er;
mod hbmc;
mod kind;
mod structure;

pub use adjacency::Adjacency;
pub use blocking::{build_blocks, Blocking};
pub use bmc::{color_blocks, BmcLayout};
pub use coloring::{greedy_color_nodes, NodalColoring};
pub use dump::{write_layout_dump, LayoutRow};
pub use er::{
    build_ordering_graph, check_er_condition, check_er_condition_where, ErReport, OrderingGraph,
};
pub use hbmc::{build_hbmc, pad_colors, HbmcLayout, Level1Block, PaddedBmc};
pub use kind::OrderingKind;
pub use structure::{scan_hbmc_structure, StructureReport};
