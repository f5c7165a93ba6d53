use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;

use super::field::BinaryField;
use super::function::VectorialFunction;
use super::graph::graph_fsd_check;
use crate::error::{Error, Result};

/// Closed-form zero tests for a Gold function at one point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GoldPredicates {
    /// `W_F(a,b) = 0`, predicted as `Tr(a·b^(−1/(2^i+1))) = 0`.
    pub walsh_zero: bool,
    /// `δ_F(a,b) = 0`, predicted as `Tr(a^(−(2^i+1))·b) = 0`.
    pub delta_zero: bool,
}

fn check_gold(n: u32, i: u32) -> Result<()> {
    if n % 2 == 0 {
        return Err(Error::Domain(format!("Gold analysis needs odd n, got {n}")));
    }
    if i == 0 || i >= n || n.gcd(&i) != 1 {
        return Err(Error::Domain(format!("Gold exponent needs 0<i<n and gcd(i,n)=1, got i={i}, n={n}")));
    }
    Ok(())
}

/// Inverse of `d` modulo `m`, if it exists.
pub fn mod_inverse(d: u64, m: u64) -> Option<u64> {
    let e = (d as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}

/// Zero predicates for `F(x) = x^(2^i+1)` at `a, b ≠ 0`.
pub fn gold_zero_predicates(field: &BinaryField, i: u32, a: u32, b: u32) -> Result<GoldPredicates> {
    let n = field.degree();
    check_gold(n, i)?;
    if a == 0 || b == 0 {
        return Err(Error::Domain("Gold predicates need a, b nonzero".into()));
    }
    let d = (1u64 << i) + 1;
    let order = (field.size() - 1) as u64;
    let d_inv = mod_inverse(d % order, order)
        .ok_or_else(|| Error::Inconsistent(format!("2^{i}+1 is not invertible modulo 2^{n}-1")))?;
    let walsh_arg = field.mul(a, field.pow(b, -(d_inv as i64))?);
    let delta_arg = field.mul(field.pow(a, -(d as i64))?, b);
    Ok(GoldPredicates { walsh_zero: field.trace(walsh_arg) == 0, delta_zero: field.trace(delta_arg) == 0 })
}

/// One row of a Gold scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoldScanRow {
    pub n: u32,
    pub i: u32,
    pub exponent: u64,
    /// Graph self-duality verdict; `None` for invalid parameters.
    pub verdict: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Graph self-duality of `x^(2^i+1)` over `F_{2^n}` for every `(n, i)` pair.
pub fn gold_scan(n_list: &[u32], i_list: &[u32]) -> Result<Vec<GoldScanRow>> {
    let mut rows = Vec::new();
    for &n in n_list {
        let field = Arc::new(BinaryField::new(n)?);
        for &i in i_list {
            let exponent = (1u64 << i.min(62)) + 1;
            let row = match check_gold(n, i) {
                Err(e) => GoldScanRow { n, i, exponent, verdict: None, note: Some(e.to_string()) },
                Ok(()) => {
                    let f = VectorialFunction::monomial(field.clone(), exponent);
                    let verdict = graph_fsd_check(&f)?.verdict;
                    GoldScanRow { n, i, exponent, verdict: Some(verdict), note: None }
                }
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Families of almost bent power maps over `F_{2^n}`, `n = 2t+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AbFamily {
    /// `2^r + 1`, `gcd(r,n) = 1`.
    Gold(u32),
    /// `2^(2r) − 2^r + 1`, `gcd(r,n) = 1`.
    Kasami(u32),
    /// `2^t + 3`.
    Welch,
    /// `2^t + 2^(t/2) − 1` for even `t`, `2^t + 2^((3t+1)/2) − 1` for odd `t`.
    Niho,
}

impl AbFamily {
    /// The exponent reduced into `[1, 2^n − 1)`.
    pub fn exponent(self, n: u32) -> Result<u64> {
        if n % 2 == 0 || n < 3 {
            return Err(Error::Domain(format!("almost bent power maps need odd n >= 3, got {n}")));
        }
        let t = (n - 1) / 2;
        let m = (1i128 << n) - 1;
        let p = |k: u32| 1i128 << k;
        let raw = match self {
            AbFamily::Gold(r) | AbFamily::Kasami(r) if r == 0 || n.gcd(&r) != 1 => {
                return Err(Error::Domain(format!("need gcd(r,n)=1 with r>0, got r={r}, n={n}")));
            }
            AbFamily::Gold(r) => p(r) + 1,
            AbFamily::Kasami(r) => p(2 * r) - p(r) + 1,
            AbFamily::Welch => p(t) + 3,
            AbFamily::Niho if t % 2 == 0 => p(t) + p(t / 2) - 1,
            AbFamily::Niho => p(t) + p((3 * t + 1) / 2) - 1,
        };
        Ok(raw.rem_euclid(m) as u64)
    }

    pub fn label(self) -> String {
        match self {
            AbFamily::Gold(r) => format!("gold(r={r})"),
            AbFamily::Kasami(r) => format!("kasami(r={r})"),
            AbFamily::Welch => "welch".into(),
            AbFamily::Niho => "niho".into(),
        }
    }

    /// Every family member defined for `n`.
    pub fn all(n: u32) -> Vec<AbFamily> {
        let coprime: Vec<u32> = (1..n).filter(|&r| n.gcd(&r) == 1).collect();
        let mut out: Vec<AbFamily> = coprime.iter().map(|&r| AbFamily::Gold(r)).collect();
        out.extend(coprime.iter().map(|&r| AbFamily::Kasami(r)));
        out.push(AbFamily::Welch);
        out.push(AbFamily::Niho);
        out
    }
}
