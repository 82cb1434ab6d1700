//! Formulas and the bridge between pairing strategies and unsatisfiable
//! CNF: DIMACS I/O, a DPLL oracle, MU(1) recognition and the occurrence
//! and neighborhood statistics of a formula.

mod bounds;
mod bridge;
mod dimacs;
mod dpll;
mod formula;
mod mu1;

pub use bounds::{bound_table, bound_table_with_witness, BoundRow, BoundTable, WitnessReport, MAX_TABLE_K};
pub use bridge::{
    cnf_to_hypergraph, double_for_pure_pairing, hypergraph_to_cnf, pairing_formula, PairingFormula,
};
pub use dimacs::{parse_dimacs, read_dimacs, write_dimacs, write_dimacs_with_comments};
pub use dpll::{dpll_sat, dpll_sat_with, DpllLimits, SatResult};
pub use formula::{
    clause_neighborhood_stats, complete_formula, occurrence_and_balance_stats, ClauseNeighborhoodStats,
    CnfFormula, Literal, OccurrenceStats,
};
pub use mu1::{minimal_unsat, mu1_check, Mu1Report, Mu1Trace, MINIMALITY_CHECK_MAX_CLAUSES};
