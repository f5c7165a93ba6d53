//! Vectorial Boolean functions `F: F_{2^n} → F_{2^n}` and the self-duality
//! of their graphs `{(x, F(x))}` under the trace pairing.

mod field;
mod function;
mod gold;
mod graph;
mod linpoly;

pub use field::{is_irreducible, BinaryField, DEFAULT_POLYS, MAX_DEGREE};
pub use function::{
    ab_fsd_criterion, classify, differential_table, fwht, walsh_divisibility_check, walsh_table, Classification,
    SpectrumTable, VectorialFunction, MAX_ANALYSIS_DEGREE, MAX_TABLE_DEGREE,
};
pub use gold::{gold_scan, gold_zero_predicates, mod_inverse, AbFamily, GoldPredicates, GoldScanRow};
pub use graph::{graph_fsd_check, ORACLE_DEGREE};
pub use linpoly::{inverse_graph, transform_graph, LinearizedPolynomial};
