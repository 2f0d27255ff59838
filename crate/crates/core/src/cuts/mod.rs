//! Tight sets of the support multigraph and the laminar hierarchy of
//! critical cuts.

mod hierarchy;
mod tight;

pub use hierarchy::{
    build_hierarchy, verify_cycle_cut_instance, CutKind, CycleCutReport, Hierarchy, HierarchyNode,
};
pub use tight::{brute_force_tight_sets, crosses, enumerate_tight_sets, BRUTE_FORCE_MAX_N};
