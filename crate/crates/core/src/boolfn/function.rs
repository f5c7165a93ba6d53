use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::field::BinaryField;
use crate::duality::SetInGroup;
use crate::error::{Error, Result};

/// Largest degree for which full `(a,b)` tables are materialized.
pub const MAX_TABLE_DEGREE: u32 = 12;

/// Largest degree for streamed analyses over all `(a,b)`.
pub const MAX_ANALYSIS_DEGREE: u32 = 16;

/// A map `F: F_{2^n} → F_{2^n}` given by its value table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorialFunction {
    field: Arc<BinaryField>,
    values: Vec<u32>,
}

impl VectorialFunction {
    pub fn from_values(field: Arc<BinaryField>, values: Vec<u32>) -> Result<Self> {
        if values.len() != field.size() {
            return Err(Error::Dimension(format!(
                "value table has {} entries, field has {}",
                values.len(),
                field.size()
            )));
        }
        if let Some(&v) = values.iter().find(|&&v| v as usize >= field.size()) {
            return Err(Error::Domain(format!("value {v} is not a field element")));
        }
        Ok(VectorialFunction { field, values })
    }

    /// `x ↦ x^d`, with `0^0 = 1`.
    pub fn monomial(field: Arc<BinaryField>, d: u64) -> Self {
        let order = (field.size() - 1) as u64;
        let e = if d == 0 { 0 } else { ((d - 1) % order.max(1)) as i64 + 1 };
        let values = (0..field.size() as u32).map(|x| field.pow(x, e).expect("nonnegative exponent")).collect();
        VectorialFunction { field, values }
    }

    /// `x ↦ Σ_k c_k x^k`.
    pub fn from_poly(field: Arc<BinaryField>, coeffs: &[u32]) -> Result<Self> {
        if let Some(&c) = coeffs.iter().find(|&&c| c as usize >= field.size()) {
            return Err(Error::Domain(format!("coefficient {c} is not a field element")));
        }
        let values =
            (0..field.size() as u32).map(|x| coeffs.iter().rev().fold(0u32, |acc, &c| field.mul(acc, x) ^ c)).collect();
        Ok(VectorialFunction { field, values })
    }

    /// Parses `x^d`, `x`, `poly:[c0,c1,…]` (coefficient of `x^k` at
    /// position `k`) or `table:[v0,v1,…]`.
    pub fn parse(field: Arc<BinaryField>, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "x" {
            return Ok(Self::monomial(field, 1));
        }
        if let Some(d) = s.strip_prefix("x^") {
            let d = d.trim().parse::<u64>().map_err(|e| Error::Parse(format!("exponent {d:?}: {e}")))?;
            return Ok(Self::monomial(field, d));
        }
        if let Some(list) = s.strip_prefix("poly:") {
            return Self::from_poly(field, &parse_list(list)?);
        }
        if let Some(list) = s.strip_prefix("table:") {
            return Self::from_values(field, parse_list(list)?);
        }
        Err(Error::Parse(format!("unrecognized function literal {s:?}")))
    }

    pub fn field(&self) -> &Arc<BinaryField> {
        &self.field
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn eval(&self, x: u32) -> u32 {
        self.values[x as usize]
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.values.len()];
        self.values.iter().all(|&v| !std::mem::replace(&mut seen[v as usize], true))
    }

    /// Compositional inverse; a domain error unless `F` is bijective.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_bijective() {
            return Err(Error::Domain("function is not bijective".into()));
        }
        let mut inv = vec![0u32; self.values.len()];
        for (x, &y) in self.values.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Ok(VectorialFunction { field: self.field.clone(), values: inv })
    }

    /// `x ↦ outer(self(x))`.
    pub fn then(&self, outer: impl Fn(u32) -> u32) -> Self {
        VectorialFunction { field: self.field.clone(), values: self.values.iter().map(|&v| outer(v)).collect() }
    }

    /// `x ↦ self(inner(x))`.
    pub fn after(&self, inner: impl Fn(u32) -> u32) -> Self {
        let values = (0..self.values.len() as u32).map(|x| self.values[inner(x) as usize]).collect();
        VectorialFunction { field: self.field.clone(), values }
    }

    /// The graph `{(x, F(x))}` in `Z_2^(2n)`, element `(x,y)` at index `x·2^n + y`.
    pub fn graph(&self) -> SetInGroup {
        let n = self.field.degree();
        let group = crate::abelian::Group::elementary(2, 2 * n as usize).expect("within capacity");
        let idx = self.values.iter().enumerate().map(|(x, &y)| (x << n) | y as usize).collect();
        SetInGroup::from_indices(&group, idx).expect("graph is nonempty")
    }

    fn require_analysis_degree(&self) -> Result<()> {
        let n = self.field.degree();
        if n > MAX_ANALYSIS_DEGREE {
            return Err(Error::Capacity(format!("full (a,b) analysis supports n <= {MAX_ANALYSIS_DEGREE}, got {n}")));
        }
        Ok(())
    }

    /// `(W_F(a,b))_a` for one `b`, in `O(n·2^n)`.
    pub fn walsh_row(&self, b: u32) -> Vec<i64> {
        let f = &self.field;
        let mask = f.trace_mask(b);
        let mut buf: Vec<i64> =
            self.values.iter().map(|&y| if (mask & y).count_ones() & 1 == 0 { 1 } else { -1 }).collect();
        fwht(&mut buf);
        (0..f.size() as u32).map(|a| buf[f.trace_mask(a) as usize]).collect()
    }

    /// `(W_F(a,b))_b` for one `a`, in `O(n·2^n)`.
    pub fn walsh_col(&self, a: u32) -> Vec<i64> {
        let f = &self.field;
        let mask = f.trace_mask(a);
        let mut buf = vec![0i64; f.size()];
        for (x, &y) in self.values.iter().enumerate() {
            buf[y as usize] += if (mask & x as u32).count_ones() & 1 == 0 { 1 } else { -1 };
        }
        fwht(&mut buf);
        (0..f.size() as u32).map(|b| buf[f.trace_mask(b) as usize]).collect()
    }

    /// `(δ_F(a,b))_b` for one `a`.
    pub fn differential_row(&self, a: u32) -> Vec<u32> {
        let mut row = vec![0u32; self.values.len()];
        for (x, &y) in self.values.iter().enumerate() {
            row[(self.values[x ^ a as usize] ^ y) as usize] += 1;
        }
        row
    }

    /// Naive `Σ_x (−1)^Tr(bF(x)+ax)`.
    pub fn walsh_naive(&self, a: u32, b: u32) -> i64 {
        let f = &self.field;
        (0..f.size() as u32)
            .map(|x| if f.trace(f.mul(b, self.values[x as usize]) ^ f.mul(a, x)) == 0 { 1 } else { -1 })
            .sum()
    }

    /// Runs `visit(a, walsh_col(a), differential_row(a))` for every `a` and
    /// returns the first `a` (in order) for which it reports `false`.
    fn first_failing_row(&self, visit: impl Fn(u32, &[i64], &[u32]) -> bool + Sync) -> Result<Option<u32>> {
        self.require_analysis_degree()?;
        Ok((0..self.field.size() as u32)
            .into_par_iter()
            .filter(|&a| !visit(a, &self.walsh_col(a), &self.differential_row(a)))
            .min())
    }
}

fn parse_list(s: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected [..] list, got {s:?}")))?;
    inner
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u32>().map_err(|e| Error::Parse(format!("entry {t:?}: {e}"))))
        .collect()
}

/// In-place Walsh–Hadamard transform `buf[u] ← Σ_x (−1)^(u·x) buf[x]`.
pub fn fwht(buf: &mut [i64]) {
    let len = buf.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for chunk in buf.chunks_mut(2 * h) {
            let (lo, hi) = chunk.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, d) = (*x + *y, *x - *y);
                *x = s;
                *y = d;
            }
        }
        h *= 2;
    }
}

/// A full `(a,b)` table, row-major in `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumTable<T> {
    size: usize,
    data: Vec<T>,
}

impl<T: Copy> SpectrumTable<T> {
    pub fn get(&self, a: u32, b: u32) -> T {
        self.data[a as usize * self.size + b as usize]
    }

    pub fn row(&self, a: u32) -> &[T] {
        &self.data[a as usize * self.size..(a as usize + 1) * self.size]
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn values(&self) -> impl Iterator<Item = T> + '_ {
        self.data.iter().copied()
    }
}

fn require_table_degree(f: &VectorialFunction) -> Result<()> {
    let n = f.field.degree();
    if n > MAX_TABLE_DEGREE {
        return Err(Error::Capacity(format!("full tables support n <= {MAX_TABLE_DEGREE}, got {n}")));
    }
    Ok(())
}

/// `W_F(a,b)` for all `(a,b)`, one fast transform per `b`.
pub fn walsh_table(f: &VectorialFunction) -> Result<SpectrumTable<i64>> {
    require_table_degree(f)?;
    let size = f.field.size();
    let cols: Vec<Vec<i64>> = (0..size as u32).into_par_iter().map(|b| f.walsh_row(b)).collect();
    let mut data = vec![0i64; size * size];
    for (b, col) in cols.iter().enumerate() {
        for (a, &w) in col.iter().enumerate() {
            data[a * size + b] = w;
        }
    }
    Ok(SpectrumTable { size, data })
}

/// `δ_F(a,b)` for all `(a,b)`.
pub fn differential_table(f: &VectorialFunction) -> Result<SpectrumTable<u32>> {
    require_table_degree(f)?;
    let size = f.field.size();
    let rows: Vec<Vec<u32>> = (0..size as u32).into_par_iter().map(|a| f.differential_row(a)).collect();
    Ok(SpectrumTable { size, data: rows.concat() })
}

/// APN / AB classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub bijective: bool,
    pub apn: bool,
    pub ab: bool,
    /// Set when `ab` is false for a reason other than the spectrum.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Classifies `F` as bijective, APN and AB.
pub fn classify(f: &VectorialFunction) -> Result<Classification> {
    f.require_analysis_degree()?;
    let n = f.field.degree();
    let bijective = f.is_bijective();
    let balanced = f.walsh_col(0).iter().skip(1).all(|&w| w == 0);
    if bijective != balanced {
        return Err(Error::Inconsistent("bijectivity disagrees with vanishing of W(0,b)".into()));
    }
    let apn = f.first_failing_row(|a, _, d| a == 0 || d.iter().all(|&v| v <= 2))?.is_none();
    let (ab, note) = if n % 2 == 0 {
        (false, Some(format!("almost bent is undefined for even n={n}")))
    } else {
        let peak = 1i64 << n.div_ceil(2);
        let ok = f.first_failing_row(|_, w, _| w.iter().skip(1).all(|&v| v == 0 || v.abs() == peak))?.is_none();
        (ok, None)
    };
    if ab && !apn {
        return Err(Error::Inconsistent("almost bent function is not APN".into()));
    }
    Ok(Classification { bijective, apn, ab, note })
}

/// Every `W_F(a,b)` is divisible by `2^⌈(n+1)/2⌉`.
pub fn walsh_divisibility_check(f: &VectorialFunction) -> Result<bool> {
    let d = 1i64 << (f.field.degree() + 1).div_ceil(2);
    Ok(f.first_failing_row(|_, w, _| w.iter().all(|&v| v % d == 0))?.is_none())
}

/// For bijective AB `F` with `n` odd: `δ_F(a,b) = 0 ⟺ W_F(a,b) = 0` for all `(a,b)`.
pub fn ab_fsd_criterion(f: &VectorialFunction) -> Result<bool> {
    let c = classify(f)?;
    if !(c.bijective && c.ab) {
        return Err(Error::Domain("criterion requires a bijective almost bent function with n odd".into()));
    }
    Ok(f.first_failing_row(|_, w, d| w.iter().zip(d).all(|(&wv, &dv)| (wv == 0) == (dv == 0)))?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(n: u32) -> Arc<BinaryField> {
        Arc::new(BinaryField::new(n).unwrap())
    }

    #[test]
    fn fwht_matches_naive_exhaustively() {
        for n in 1..=6 {
            let fld = field(n);
            for d in [1u64, 3, 5, 7, (1 << n) - 2] {
                let f = VectorialFunction::monomial(fld.clone(), d);
                let t = walsh_table(&f).unwrap();
                for a in 0..fld.size() as u32 {
                    for b in 0..fld.size() as u32 {
                        assert_eq!(t.get(a, b), f.walsh_naive(a, b), "n={n} d={d} a={a} b={b}");
                        assert_eq!(f.walsh_col(a)[b as usize], t.get(a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn fwht_matches_naive_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for n in [7u32, 8] {
            let fld = field(n);
            let values = (0..fld.size()).map(|_| rng.gen_range(0..fld.size() as u32)).collect();
            let f = VectorialFunction::from_values(fld.clone(), values).unwrap();
            for _ in 0..16 {
                let b = rng.gen_range(0..fld.size() as u32);
                let row = f.walsh_row(b);
                for _ in 0..16 {
                    let a = rng.gen_range(0..fld.size() as u32);
                    assert_eq!(row[a as usize], f.walsh_naive(a, b));
                }
            }
        }
    }

    #[test]
    fn cube_on_f8_spectra() {
        let f = VectorialFunction::monomial(field(3), 3);
        let w = walsh_table(&f).unwrap();
        assert_eq!(w.get(0, 0), 8);
        assert!(w.values().all(|v| [0, 4, -4].contains(&v) || v == 8));
        for b in 1..8 {
            let parseval: i64 = (0..8).map(|a| w.get(a, b).pow(2)).sum();
            assert_eq!(parseval, 64);
        }
        let d = differential_table(&f).unwrap();
        assert_eq!(d.get(0, 0), 8);
        assert!((1..8).all(|b| d.get(0, b) == 0));
        for a in 0..8 {
            assert_eq!(d.row(a).iter().sum::<u32>(), 8);
            assert!(d.row(a).iter().all(|v| v % 2 == 0));
        }
        let fld = f.field().clone();
        for b in 0..8 {
            assert_eq!(d.get(1, b) == 0, fld.trace(b) == 0);
        }
        assert_eq!((1..8).flat_map(|a| d.row(a).to_vec()).max(), Some(2));
    }

    #[test]
    fn classification_examples() {
        let c = classify(&VectorialFunction::monomial(field(3), 3)).unwrap();
        assert_eq!((c.bijective, c.apn, c.ab), (true, true, true));
        let c = classify(&VectorialFunction::monomial(field(4), 3)).unwrap();
        assert!(!c.bijective);
        assert!(!c.ab && c.note.is_some());
        let id = VectorialFunction::monomial(field(3), 1);
        let c = classify(&id).unwrap();
        assert_eq!((c.bijective, c.apn, c.ab), (true, false, false));
        assert_eq!(id.differential_row(1)[1], 8);
    }

    #[test]
    fn divisibility_examples() {
        assert!(walsh_divisibility_check(&VectorialFunction::monomial(field(3), 3)).unwrap());
        assert!(walsh_divisibility_check(&VectorialFunction::monomial(field(3), 1)).unwrap());
        assert!(!walsh_divisibility_check(&VectorialFunction::monomial(field(4), 3)).unwrap());
    }

    #[test]
    fn ab_criterion_preconditions() {
        assert!(ab_fsd_criterion(&VectorialFunction::monomial(field(3), 3)).unwrap());
        assert!(!ab_fsd_criterion(&VectorialFunction::monomial(field(5), 3)).unwrap());
        assert!(matches!(ab_fsd_criterion(&VectorialFunction::monomial(field(3), 1)), Err(Error::Domain(_))));
        assert!(matches!(ab_fsd_criterion(&VectorialFunction::monomial(field(4), 3)), Err(Error::Domain(_))));
    }

    #[test]
    fn parse_and_inverse() {
        let fld = field(3);
        let f = VectorialFunction::parse(fld.clone(), "x^3").unwrap();
        let g = VectorialFunction::parse(fld.clone(), "poly:[0,0,0,1]").unwrap();
        assert_eq!(f, g);
        let inv = f.inverse().unwrap();
        for x in 0..8 {
            assert_eq!(inv.eval(f.eval(x)), x);
        }
        // 3·5 = 15 ≡ 1 mod 7
        assert_eq!(inv, VectorialFunction::monomial(fld.clone(), 5));
        assert!(VectorialFunction::parse(fld.clone(), "table:[0,1]").is_err());
        assert!(VectorialFunction::parse(fld.clone(), "y^2").is_err());
        assert!(VectorialFunction::monomial(field(4), 3).inverse().is_err());
        assert_eq!(VectorialFunction::parse(fld, "x").unwrap().values(), &[0, 1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn table_capacity() {
        let f = VectorialFunction::monomial(field(13), 3);
        assert!(matches!(walsh_table(&f), Err(Error::Capacity(_))));
        assert_eq!(f.walsh_row(1).len(), 1 << 13);
    }
}
