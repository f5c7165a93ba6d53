use num_bigint::BigInt;
use rayon::prelude::*;

use super::function::VectorialFunction;
use crate::duality::{is_formally_self_dual, CertificateRow, DualityCertificate, FULL_TABLE_LIMIT};
use crate::error::{Error, Result};

/// Largest degree at which the verdict is re-derived through the generic
/// duality check on the graph.
pub const ORACLE_DEGREE: u32 = 5;

struct RowOutcome {
    first_bad: Option<u32>,
    rows: Vec<CertificateRow>,
    trivial_cases_ok: bool,
}

/// Self-duality of the graph `{(x,F(x))}` under the trace pairing, decided by
/// `2^n·δ_F(a,b) = W_F(a,b)²` for all `(a,b)`.
///
/// Row `(a,b)` of the certificate has `nu = δ_F(a,b)`, `expected = 2^n·δ_F(a,b)`
/// and `norm = W_F(a,b)²`.
pub fn graph_fsd_check(f: &VectorialFunction) -> Result<DualityCertificate> {
    let field = f.field().clone();
    let n = field.degree();
    let size = field.size();
    let pairing = field.trace_pairing();
    let group = pairing.group().clone();
    let keep_rows = size * size <= FULL_TABLE_LIMIT;
    let bijective = f.is_bijective();
    let outcomes: Vec<RowOutcome> = (0..size as u32)
        .into_par_iter()
        .map(|a| {
            let w = f.walsh_col(a);
            let d = f.differential_row(a);
            let ok = |b: usize| (d[b] as i64) << n == w[b] * w[b];
            let first_bad = (0..size).find(|&b| !ok(b)).map(|b| b as u32);
            let trivial_cases_ok = !bijective || if a == 0 { (0..size).all(ok) } else { ok(0) };
            let make_row = |b: usize| CertificateRow {
                element: group.element_at(((a as usize) << n) | b).to_string(),
                nu: d[b] as u64,
                expected: (BigInt::from(d[b]) << n).to_string(),
                norm: Some((w[b] * w[b]).to_string()),
            };
            let rows = if keep_rows {
                (0..size).map(make_row).collect()
            } else {
                first_bad.map(|b| make_row(b as usize)).into_iter().collect()
            };
            RowOutcome { first_bad, rows, trivial_cases_ok }
        })
        .collect();
    if !outcomes.iter().all(|o| o.trivial_cases_ok) {
        return Err(Error::Inconsistent("bijective function fails the identity at a=0 or b=0".into()));
    }
    let violation = outcomes
        .iter()
        .find_map(|o| o.first_bad.map(|b| if keep_rows { o.rows[b as usize].clone() } else { o.rows[0].clone() }));
    let verdict = violation.is_none();
    if n <= ORACLE_DEGREE {
        let oracle = is_formally_self_dual(&pairing, &f.graph())?;
        if oracle.verdict != verdict {
            return Err(Error::Inconsistent(format!(
                "Walsh/differential criterion ({verdict}) disagrees with direct duality check ({})",
                oracle.verdict
            )));
        }
    }
    let table = if keep_rows { outcomes.into_iter().flat_map(|o| o.rows).collect() } else { Vec::new() };
    Ok(DualityCertificate {
        group: group.to_string(),
        pairing: pairing.spec().matrix,
        set: f.graph().literals(),
        dual_set: None,
        verdict,
        size_condition: Some(true),
        table,
        violations: violation.into_iter().collect(),
    })
}
