use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::cyclotomic::CyclotomicInt;
use super::group::{Group, GroupElement};
use super::subgroup::Subgroup;
use crate::error::{Error, Result};

/// Bilinear form `⟨a,b⟩ = ζ_N^{aᵀBb}` on a group with exponent `N`.
///
/// The matrix is stored reduced mod `N`. Construction enforces
/// well-definedness (`N | n_j·B_jk` and `N | n_k·B_jk`); nondegeneracy is a
/// separate query because degenerate forms are legitimate inputs to it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pairing {
    group: Group,
    matrix: Vec<Vec<u64>>,
}

/// Serialized form: group literal plus integer matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairingSpec {
    pub group: String,
    pub matrix: Vec<Vec<i64>>,
}

impl Pairing {
    pub fn new(group: &Group, matrix: Vec<Vec<i64>>) -> Result<Self> {
        let m = group.rank();
        if matrix.len() != m || matrix.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension(format!("pairing matrix must be {m}x{m} for {group}")));
        }
        let n = group.exponent();
        let reduced: Vec<Vec<u64>> =
            matrix.iter().map(|row| row.iter().map(|&b| b.rem_euclid(n as i64) as u64).collect()).collect();
        for j in 0..m {
            for k in 0..m {
                let b = reduced[j][k] as u128;
                let (nj, nk) = (group.moduli()[j] as u128, group.moduli()[k] as u128);
                if (nj * b) % n as u128 != 0 || (nk * b) % n as u128 != 0 {
                    return Err(Error::Domain(format!(
                        "pairing entry B[{j}][{k}] = {} is not well defined on {group}",
                        reduced[j][k]
                    )));
                }
            }
        }
        Ok(Self { group: group.clone(), matrix: reduced })
    }

    /// Diagonal form with `B_jj = N/n_j`, i.e. `⟨a,b⟩ = ∏ ζ_{n_j}^{a_j b_j}`.
    pub fn standard(group: &Group) -> Self {
        let n = group.exponent();
        let m = group.rank();
        let mut matrix = vec![vec![0u64; m]; m];
        for (j, &nj) in group.moduli().iter().enumerate() {
            matrix[j][j] = (n / nj as u64) % n;
        }
        Self { group: group.clone(), matrix }
    }

    /// Block-diagonal pairing on `self.group × other.group`.
    pub fn product(&self, other: &Pairing) -> Result<Self> {
        let group = self.group.product(&other.group)?;
        let n = group.exponent();
        let (s, t) = (n / self.group.exponent(), n / other.group.exponent());
        let (m1, m2) = (self.group.rank(), other.group.rank());
        let mut matrix = vec![vec![0i64; m1 + m2]; m1 + m2];
        for j in 0..m1 {
            for k in 0..m1 {
                matrix[j][k] = (self.matrix[j][k] * s) as i64;
            }
        }
        for j in 0..m2 {
            for k in 0..m2 {
                matrix[m1 + j][m1 + k] = (other.matrix[j][k] * t) as i64;
            }
        }
        Self::new(&group, matrix)
    }

    /// `⟨a,b⟩' = ⟨Ma, b⟩` for an endomorphism given by its integer matrix
    /// acting on coordinate columns; the new matrix is `MᵀB`.
    pub fn precompose(&self, m: &[Vec<i64>]) -> Result<Self> {
        let r = self.group.rank();
        if m.len() != r || m.iter().any(|row| row.len() != r) {
            return Err(Error::Dimension(format!("endomorphism matrix must be {r}x{r}")));
        }
        let n = self.group.exponent() as i128;
        let mut out = vec![vec![0i64; r]; r];
        for (j, row) in out.iter_mut().enumerate() {
            for (k, cell) in row.iter_mut().enumerate() {
                let mut acc: i128 = 0;
                for (l, ml) in m.iter().enumerate() {
                    acc += ml[j] as i128 * self.matrix[l][k] as i128;
                }
                *cell = acc.rem_euclid(n) as i64;
            }
        }
        Self::new(&self.group, out)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    /// Matrix entries reduced mod the group exponent.
    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    pub fn spec(&self) -> PairingSpec {
        PairingSpec {
            group: self.group.to_string(),
            matrix: self.matrix.iter().map(|r| r.iter().map(|&b| b as i64).collect()).collect(),
        }
    }

    pub fn is_standard(&self) -> bool {
        *self == Self::standard(&self.group)
    }

    pub fn is_symmetric(&self) -> bool {
        let m = self.group.rank();
        (0..m).all(|j| (0..m).all(|k| self.matrix[j][k] == self.matrix[k][j]))
    }

    /// Row vector `aᵀB mod N`; `exponent(a, b)` is its dot product with `b`.
    pub fn left_row(&self, a: &[u32]) -> Vec<u64> {
        let n = self.group.exponent() as u128;
        let m = self.group.rank();
        (0..m)
            .map(|k| {
                let mut acc: u128 = 0;
                for (j, &aj) in a.iter().enumerate() {
                    acc += aj as u128 * self.matrix[j][k] as u128;
                }
                (acc % n) as u64
            })
            .collect()
    }

    /// Column vector `Bb mod N`.
    pub fn right_col(&self, b: &[u32]) -> Vec<u64> {
        let n = self.group.exponent() as u128;
        self.matrix
            .iter()
            .map(|row| {
                let acc: u128 = row.iter().zip(b).map(|(&x, &y)| x as u128 * y as u128).sum();
                (acc % n) as u64
            })
            .collect()
    }

    /// `dot(row, b) mod N` for a precomputed row.
    pub fn dot(&self, row: &[u64], b: &[u32]) -> u64 {
        let acc: u128 = row.iter().zip(b).map(|(&x, &y)| x as u128 * y as u128).sum();
        (acc % self.group.exponent() as u128) as u64
    }

    /// Exponent `e` with `⟨a,b⟩ = ζ_N^e`; no membership check.
    pub fn exponent_of(&self, a: &GroupElement, b: &GroupElement) -> u64 {
        self.dot(&self.left_row(&a.0), &b.0)
    }

    /// Exponent with membership checks.
    pub fn exponent(&self, a: &GroupElement, b: &GroupElement) -> Result<u64> {
        self.group.check(a)?;
        self.group.check(b)?;
        Ok(self.exponent_of(a, b))
    }

    /// `⟨a,b⟩` as an exact root of unity.
    pub fn eval(&self, a: &GroupElement, b: &GroupElement) -> Result<CyclotomicInt> {
        let e = self.exponent(a, b)?;
        Ok(CyclotomicInt::root_of_unity(self.group.exponent(), e as i64))
    }

    /// True iff only the identity pairs trivially with every element.
    pub fn is_nondegenerate(&self) -> bool {
        let mut coords = vec![0u32; self.group.rank()];
        for idx in 1..self.group.order() {
            self.group.coords_into(idx, &mut coords);
            if self.left_row(&coords).iter().all(|&v| v == 0) {
                return false;
            }
        }
        true
    }

    pub fn require_nondegenerate(&self) -> Result<()> {
        if self.is_nondegenerate() {
            Ok(())
        } else {
            Err(Error::Domain(format!("pairing {self} is degenerate")))
        }
    }

    /// Swapped-argument pairing: transposed matrix.
    pub fn adjoint(&self) -> Self {
        let m = self.group.rank();
        let matrix = (0..m).map(|j| (0..m).map(|k| self.matrix[k][j]).collect()).collect();
        Self { group: self.group.clone(), matrix }
    }

    /// Automorphism `σ` with `⟨σx, y⟩ = ⟨y, x⟩` for all `x, y`.
    ///
    /// Found by matching the left character row of every `z` against the
    /// right character row of `x`.
    pub fn sigma(&self) -> Result<GroupAutomorphism> {
        self.require_nondegenerate()?;
        let g = &self.group;
        let mut coords = vec![0u32; g.rank()];
        let mut by_row: HashMap<Vec<u64>, usize> = HashMap::with_capacity(g.order());
        for z in 0..g.order() {
            g.coords_into(z, &mut coords);
            by_row.insert(self.left_row(&coords), z);
        }
        let mut map = Vec::with_capacity(g.order());
        for x in 0..g.order() {
            g.coords_into(x, &mut coords);
            let col = self.right_col(&coords);
            let z = by_row.get(&col).ok_or_else(|| Error::Inconsistent("no sigma image for a character row".into()))?;
            map.push(*z);
        }
        Ok(GroupAutomorphism { group: g.clone(), map })
    }

    /// `{g : ⟨g,h⟩ = 1 for all h ∈ H}`.
    pub fn annihilator(&self, h: &Subgroup) -> Result<Subgroup> {
        if h.group() != &self.group {
            return Err(Error::Dimension("subgroup lives in a different group".into()));
        }
        let g = &self.group;
        let cols: Vec<Vec<u64>> = h.generators().iter().map(|x| self.right_col(&x.0)).collect();
        let mut coords = vec![0u32; g.rank()];
        let mut members = Vec::new();
        for idx in 0..g.order() {
            g.coords_into(idx, &mut coords);
            if cols.iter().all(|c| self.dot(c, &coords) == 0) {
                members.push(g.element_at(idx));
            }
        }
        Subgroup::from_elements(g, &members)
    }

    /// Every well-defined nondegenerate pairing of `group`.
    pub fn enumerate_nondegenerate(group: &Group) -> Result<Vec<Pairing>> {
        const MAX: usize = 16;
        if group.order() > MAX {
            return Err(Error::Capacity(format!(
                "pairing enumeration limited to order {MAX}, {group} has order {}",
                group.order()
            )));
        }
        let n = group.exponent();
        let m = group.rank();
        // entry (j,k) ranges over multiples of N / gcd(n_j, n_k)
        let choices: Vec<(u64, u64)> = (0..m * m)
            .map(|c| {
                let (nj, nk) = (group.moduli()[c / m] as u64, group.moduli()[c % m] as u64);
                let d = nj.gcd(&nk);
                (n / d, d)
            })
            .collect();
        let mut out = Vec::new();
        let mut digits = vec![0u64; m * m];
        loop {
            let matrix: Vec<Vec<i64>> = (0..m)
                .map(|j| (0..m).map(|k| ((digits[j * m + k] * choices[j * m + k].0) % n) as i64).collect())
                .collect();
            let p = Pairing::new(group, matrix)?;
            if p.is_nondegenerate() {
                out.push(p);
            }
            let mut pos = 0;
            loop {
                if pos == digits.len() {
                    return Ok(out);
                }
                digits[pos] += 1;
                if digits[pos] < choices[pos].1 {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
        }
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .matrix
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Parses a pairing argument: `standard` or a JSON integer matrix.
pub fn parse_pairing(group: &Group, s: &str) -> Result<Pairing> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("standard") {
        return Ok(Pairing::standard(group));
    }
    let matrix: Vec<Vec<i64>> =
        serde_json::from_str(t).map_err(|e| Error::Parse(format!("pairing matrix {t:?}: {e}")))?;
    Pairing::new(group, matrix)
}

pub fn standard_pairing(group: &Group) -> Pairing {
    Pairing::standard(group)
}

/// Permutation of element indices that is a group automorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAutomorphism {
    group: Group,
    map: Vec<usize>,
}

impl GroupAutomorphism {
    pub fn identity(group: &Group) -> Self {
        Self { group: group.clone(), map: (0..group.order()).collect() }
    }

    pub fn apply_idx(&self, idx: usize) -> usize {
        self.map[idx]
    }

    pub fn apply(&self, a: &GroupElement) -> GroupElement {
        self.group.element_at(self.map[self.group.index_of(a)])
    }

    pub fn apply_subgroup(&self, h: &Subgroup) -> Subgroup {
        let gens: Vec<GroupElement> = h.generators().iter().map(|g| self.apply(g)).collect();
        Subgroup::generated_by(&self.group, &gens).expect("automorphism preserves the group")
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn is_homomorphism(&self) -> bool {
        let g = &self.group;
        let n = g.order();
        let mut seen = vec![false; n];
        for &j in &self.map {
            if seen[j] {
                return false;
            }
            seen[j] = true;
        }
        (0..n).all(|a| (0..n).all(|b| self.map[g.add_idx(a, b)] == g.add_idx(self.map[a], self.map[b])))
    }

    /// Order as a permutation: lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.map.len()];
        let mut ord = 1u64;
        for start in 0..self.map.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.map[x];
                len += 1;
            }
            ord = ord.lcm(&len);
        }
        ord
    }
}
