use std::fmt;
use std::sync::Arc;

use super::field::BinaryField;
use super::function::VectorialFunction;
use crate::error::{Error, Result};

/// `L(x) = Σ_{i<n} c_i x^(2^i)`, an `F_2`-linear map of `F_{2^n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearizedPolynomial {
    field: Arc<BinaryField>,
    coeffs: Vec<u32>,
}

impl LinearizedPolynomial {
    /// Coefficients `c_0, c_1, …`; missing trailing ones are zero.
    pub fn new(field: Arc<BinaryField>, coeffs: &[u32]) -> Result<Self> {
        let n = field.degree() as usize;
        if coeffs.len() > n {
            return Err(Error::Dimension(format!("{} coefficients for degree {n}", coeffs.len())));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c as usize >= field.size()) {
            return Err(Error::Domain(format!("coefficient {c} is not a field element")));
        }
        let mut c = coeffs.to_vec();
        c.resize(n, 0);
        Ok(LinearizedPolynomial { field, coeffs: c })
    }

    pub fn identity(field: Arc<BinaryField>) -> Self {
        Self::frobenius(field, 0)
    }

    /// `x ↦ x^(2^k)`.
    pub fn frobenius(field: Arc<BinaryField>, k: u32) -> Self {
        let n = field.degree();
        let mut coeffs = vec![0u32; n as usize];
        coeffs[(k % n) as usize] = 1;
        LinearizedPolynomial { field, coeffs }
    }

    /// `x ↦ c·x`.
    pub fn scalar(field: Arc<BinaryField>, c: u32) -> Result<Self> {
        Self::new(field, &[c])
    }

    /// Parses `[c0,c1,…]`.
    pub fn parse(field: Arc<BinaryField>, s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [c0,c1,..], got {s:?}")))?;
        let coeffs = inner
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>().map_err(|e| Error::Parse(format!("coefficient {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, &coeffs)
    }

    pub fn field(&self) -> &Arc<BinaryField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    fn n(&self) -> u32 {
        self.field.degree()
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = &self.field;
        let mut acc = 0;
        let mut xp = x;
        for &c in &self.coeffs {
            acc ^= f.mul(c, xp);
            xp = f.mul(xp, xp);
        }
        acc
    }

    pub fn to_function(&self) -> VectorialFunction {
        let values = (0..self.field.size() as u32).map(|x| self.eval(x)).collect();
        VectorialFunction::from_values(self.field.clone(), values).expect("values lie in the field")
    }

    /// Checks `L(x+y) = L(x) + L(y)` on a spread of pairs.
    pub fn spot_check_additive(&self) -> bool {
        let size = self.field.size() as u32;
        let step = (size / 16).max(1);
        (0..size)
            .step_by(step as usize)
            .all(|x| (0..size).step_by(step as usize).all(|y| self.eval(x ^ y) == self.eval(x) ^ self.eval(y)))
    }

    /// Adjoint under `(x,y) ↦ Tr(xy)`: the coefficient at `(n−i) mod n` is
    /// `c_i^(2^((n−i) mod n))`.
    pub fn adjoint(&self) -> Self {
        let n = self.n();
        let mut coeffs = vec![0u32; n as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = (n - i as u32) % n;
            coeffs[k as usize] = self.field.frobenius(c, k);
        }
        LinearizedPolynomial { field: self.field.clone(), coeffs }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.n() as usize;
        let f = &self.field;
        let mut coeffs = vec![0u32; n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            for (j, &d) in other.coeffs.iter().enumerate() {
                coeffs[(i + j) % n] ^= f.mul(c, f.frobenius(d, i as u32));
            }
        }
        LinearizedPolynomial { field: self.field.clone(), coeffs }
    }

    /// Column `j` is `L(x^j)` as a bit vector over the polynomial basis.
    pub fn matrix(&self) -> Vec<u32> {
        (0..self.n()).map(|j| self.eval(1 << j)).collect()
    }

    pub fn is_invertible(&self) -> bool {
        rank_f2(&self.matrix()) == self.n() as usize
    }

    /// The linear map sending `x^j` to `images[j]`, as a linearized polynomial.
    ///
    /// Solves `Σ_i c_i (x^j)^(2^i) = images[j]`; the Moore matrix of a basis
    /// is invertible.
    pub fn from_basis_images(field: Arc<BinaryField>, images: &[u32]) -> Result<Self> {
        let n = field.degree() as usize;
        if images.len() != n {
            return Err(Error::Dimension(format!("{} images for degree {n}", images.len())));
        }
        let mut rows: Vec<Vec<u32>> = (0..n)
            .map(|j| {
                let mut row: Vec<u32> = (0..n as u32).map(|i| field.frobenius(1 << j, i)).collect();
                row.push(images[j]);
                row
            })
            .collect();
        for col in 0..n {
            let p = (col..n)
                .find(|&r| rows[r][col] != 0)
                .ok_or_else(|| Error::Inconsistent("Moore matrix of the polynomial basis is singular".into()))?;
            rows.swap(col, p);
            let inv = field.inv(rows[col][col])?;
            for x in rows[col].iter_mut() {
                *x = field.mul(*x, inv);
            }
            let pivot = rows[col].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != col && row[col] != 0 {
                    let factor = row[col];
                    for (x, &y) in row.iter_mut().zip(&pivot) {
                        *x ^= field.mul(factor, y);
                    }
                }
            }
        }
        let coeffs: Vec<u32> = rows.iter().map(|r| r[n]).collect();
        Ok(LinearizedPolynomial { field, coeffs })
    }

    /// Compositional inverse, or `None` when `L` is singular.
    pub fn inverse(&self) -> Option<Self> {
        let inv = invert_f2(&self.matrix())?;
        Some(Self::from_basis_images(self.field.clone(), &inv).expect("basis images have full length"))
    }

    /// The coefficient conditions for `L = (L^(−1))*`:
    /// `Σ_i c_i^(2^(n−i)) = 1` and `Σ_i (c_i c_(i+j))^(2^(n−i)) = 0` for `0 < j < n`.
    pub fn selfdual_condition(&self) -> bool {
        let n = self.n() as usize;
        let f = &self.field;
        let twist = |c: u32, i: usize| f.frobenius(c, ((n - i) % n) as u32);
        let first = self.coeffs.iter().enumerate().fold(0, |acc, (i, &c)| acc ^ twist(c, i));
        first == 1
            && (1..n)
                .all(|j| (0..n).fold(0, |acc, i| acc ^ twist(f.mul(self.coeffs[i], self.coeffs[(i + j) % n]), i)) == 0)
    }

    /// `L*∘L = id`, checked on the polynomial basis.
    pub fn adjoint_inverts(&self) -> bool {
        let adj = self.adjoint();
        (0..self.n()).all(|j| adj.eval(self.eval(1 << j)) == 1 << j)
    }

    fn require_selfdual(&self, name: &str) -> Result<()> {
        if !self.is_invertible() {
            return Err(Error::Domain(format!("{name} is not invertible")));
        }
        if !self.selfdual_condition() {
            return Err(Error::Domain(format!("{name} does not satisfy L = (L^-1)*")));
        }
        Ok(())
    }
}

impl fmt::Display for LinearizedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let mono = if i == 0 { "x".to_string() } else { format!("x^{}", 1u64 << i) };
                if c == 1 {
                    mono
                } else {
                    format!("({}){mono}", self.field.element_literal(c))
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

fn rank_f2(cols: &[u32]) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for &c in cols {
        let reduced = basis.iter().fold(c, |v, &b| v.min(v ^ b));
        if reduced != 0 {
            basis.push(reduced);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Inverse of the `F_2`-linear map with columns `cols` (column `j` is the
/// image of basis vector `j`); the result has the same column layout.
fn invert_f2(cols: &[u32]) -> Option<Vec<u32>> {
    let n = cols.len();
    // Row r of the augmented system: bit j of row = bit r of cols[j]; the
    // identity part is tracked in `aug`.
    let mut rows: Vec<u32> = (0..n).map(|r| (0..n).fold(0, |acc, j| acc | ((cols[j] >> r & 1) << j))).collect();
    let mut aug: Vec<u32> = (0..n).map(|r| 1 << r).collect();
    for col in 0..n {
        let p = (col..n).find(|&r| rows[r] >> col & 1 == 1)?;
        rows.swap(col, p);
        aug.swap(col, p);
        for r in 0..n {
            if r != col && rows[r] >> col & 1 == 1 {
                rows[r] ^= rows[col];
                aug[r] ^= aug[col];
            }
        }
    }
    // Row j of the inverse matrix is aug[j]; column k collects bit k of each row.
    Some((0..n).map(|k| (0..n).fold(0, |acc, j| acc | ((aug[j] >> k & 1) << j))).collect())
}

/// `F' = L_2 ∘ F ∘ L_1`, where both `L_i` are invertible with `L_i = (L_i^(−1))*`.
pub fn transform_graph(
    f: &VectorialFunction,
    l1: &LinearizedPolynomial,
    l2: &LinearizedPolynomial,
) -> Result<VectorialFunction> {
    if l1.field() != f.field() || l2.field() != f.field() {
        return Err(Error::Dimension("maps live over different fields".into()));
    }
    l1.require_selfdual("L1")?;
    l2.require_selfdual("L2")?;
    Ok(f.after(|x| l1.eval(x)).then(|y| l2.eval(y)))
}

/// The graph of `F^(−1)`, which is the graph of `F` with coordinates swapped.
pub fn inverse_graph(f: &VectorialFunction) -> Result<VectorialFunction> {
    f.inverse()
}
