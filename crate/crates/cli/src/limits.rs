use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use egw_core::constructions::DEFAULT_NODE_LIMIT;
use egw_core::game::{VerifyLimits, DEFAULT_ENUMERATION_PAIRS, DEFAULT_SOLVER_LIMIT};
use egw_core::sat::DpllLimits;

pub const LIMITS_ENV: &str = "EGW_LIMITS_JSON";

/// Effective limits: defaults, then `EGW_LIMITS_JSON`, then flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub solver_vertices: usize,
    pub dpll_vars: usize,
    pub dpll_clauses: usize,
    pub executor_nodes: u64,
    pub enumeration_pairs: usize,
    pub coloring_nodes: u64,
}

impl Default for Limits {
    fn default() -> Self {
        let d = DpllLimits::default();
        Limits {
            solver_vertices: DEFAULT_SOLVER_LIMIT,
            dpll_vars: d.max_vars,
            dpll_clauses: d.max_clauses,
            executor_nodes: DEFAULT_NODE_LIMIT,
            enumeration_pairs: DEFAULT_ENUMERATION_PAIRS,
            coloring_nodes: egw_core::coloring::ColoringLimits::default().max_nodes,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Overrides {
    solver_vertices: Option<usize>,
    dpll_vars: Option<usize>,
    dpll_clauses: Option<usize>,
    executor_nodes: Option<u64>,
    enumeration_pairs: Option<usize>,
    coloring_nodes: Option<u64>,
}

impl Limits {
    pub fn resolve(
        env: Option<&str>,
        limit_vertices: Option<usize>,
        limit_vars: Option<usize>,
        limit_nodes: Option<u64>,
    ) -> Result<Self> {
        let mut l = Limits::default();
        if let Some(text) = env {
            let o: Overrides = serde_json::from_str(text).with_context(|| format!("parsing {LIMITS_ENV}"))?;
            l.solver_vertices = o.solver_vertices.unwrap_or(l.solver_vertices);
            l.dpll_vars = o.dpll_vars.unwrap_or(l.dpll_vars);
            l.dpll_clauses = o.dpll_clauses.unwrap_or(l.dpll_clauses);
            l.executor_nodes = o.executor_nodes.unwrap_or(l.executor_nodes);
            l.enumeration_pairs = o.enumeration_pairs.unwrap_or(l.enumeration_pairs);
            l.coloring_nodes = o.coloring_nodes.unwrap_or(l.coloring_nodes);
        }
        l.solver_vertices = limit_vertices.unwrap_or(l.solver_vertices);
        l.dpll_vars = limit_vars.unwrap_or(l.dpll_vars);
        l.executor_nodes = limit_nodes.unwrap_or(l.executor_nodes);
        if l.solver_vertices == 0
            || l.dpll_vars == 0
            || l.dpll_clauses == 0
            || l.executor_nodes == 0
            || l.enumeration_pairs == 0
            || l.coloring_nodes == 0
        {
            bail!("limits must be positive: {l:?}");
        }
        Ok(l)
    }

    pub fn dpll(&self) -> DpllLimits {
        DpllLimits {
            max_vars: self.dpll_vars,
            max_clauses: self.dpll_clauses,
        }
    }

    pub fn verify(&self) -> VerifyLimits {
        VerifyLimits {
            enumeration_pairs: self.enumeration_pairs,
            dpll: self.dpll(),
        }
    }
}
