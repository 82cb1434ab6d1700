//! The tree families: the introductory complete-tree game, the
//! neighborhood counterexample, the regular weak family, and the planned
//! strong family with its symbolic checker and executor.

mod families;
mod plan;
mod planner;
mod runs;

pub use families::{
    complete_tree_game, floor_log2, neighborhood_counterexample, regular_weak, ConstructionParams, Family, Scale,
};
pub use plan::{
    check_plan_symbolic, execute_plan, execute_plan_checked, predicted_sizes, realize_base, BuildPlan,
    KraftSlot, NodeCheck, NodeCount, PlanBuilder, PlanNode, PlanOp, PlanReport, SequenceCheck, DEFAULT_NODE_LIMIT,
};
pub use planner::{
    plan_and_check, plan_strong, sweep, sweep_entry, toy_merge_plan, toy_plan, SweepEntry, SMALLEST_CERTIFIED_N,
    SMALLEST_CERTIFIED_N_SCALED,
};
pub use runs::{Run, RunSequence};
