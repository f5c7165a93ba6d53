use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element of `Z_{n_1} × … × Z_{n_m}` as a tuple of reduced residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement(pub Vec<u32>);

impl GroupElement {
    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Finite abelian group `Z_{n_1} × … × Z_{n_m}`, kept exactly as given.
///
/// Elements are addressed either as [`GroupElement`] tuples or by their
/// mixed-radix index in `0..order`, first coordinate most significant, so
/// index order coincides with lexicographic tuple order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Group {
    moduli: Vec<u32>,
    order: usize,
    exponent: u64,
}

impl Group {
    /// Largest order accepted by the constructor.
    pub const MAX_ORDER: usize = 1 << 24;

    pub fn new(moduli: Vec<u32>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::Dimension("a group needs at least one cyclic factor".into()));
        }
        let mut order: usize = 1;
        let mut exponent: u64 = 1;
        for &n in &moduli {
            if n == 0 {
                return Err(Error::Domain("cyclic factor Z0 is not finite".into()));
            }
            order = order
                .checked_mul(n as usize)
                .filter(|&o| o <= Self::MAX_ORDER)
                .ok_or_else(|| Error::Capacity(format!("group order exceeds {}", Self::MAX_ORDER)))?;
            exponent = exponent.lcm(&(n as u64));
        }
        Ok(Self { moduli, order, exponent })
    }

    pub fn cyclic(n: u32) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn trivial() -> Self {
        Self::new(vec![1]).expect("Z1 is valid")
    }

    /// `Z_p^m`.
    pub fn elementary(p: u32, m: usize) -> Result<Self> {
        Self::new(vec![p; m])
    }

    /// Direct product, factors of `self` first.
    pub fn product(&self, other: &Group) -> Result<Group> {
        let mut moduli = self.moduli.clone();
        moduli.extend_from_slice(&other.moduli);
        Group::new(moduli)
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `lcm(n_j)`.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    /// Builds an element from arbitrary integers, reducing each coordinate.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::Dimension(format!(
                "element has {} coordinates, group {} has rank {}",
                coords.len(),
                self,
                self.rank()
            )));
        }
        Ok(GroupElement(coords.iter().zip(&self.moduli).map(|(&c, &n)| c.rem_euclid(n as i64) as u32).collect()))
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        a.0.len() == self.rank() && a.0.iter().zip(&self.moduli).all(|(&c, &n)| c < n)
    }

    pub fn check(&self, a: &GroupElement) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::Dimension(format!("element {a} is not in {self}")))
        }
    }

    pub fn index_of(&self, a: &GroupElement) -> usize {
        debug_assert!(self.contains(a));
        a.0.iter().zip(&self.moduli).fold(0usize, |acc, (&c, &n)| acc * n as usize + c as usize)
    }

    pub fn element_at(&self, mut idx: usize) -> GroupElement {
        debug_assert!(idx < self.order);
        let mut coords = vec![0u32; self.rank()];
        for j in (0..self.rank()).rev() {
            let n = self.moduli[j] as usize;
            coords[j] = (idx % n) as u32;
            idx /= n;
        }
        GroupElement(coords)
    }

    /// Writes the coordinates of `idx` into `out` without allocating.
    pub fn coords_into(&self, mut idx: usize, out: &mut [u32]) {
        for j in (0..self.rank()).rev() {
            let n = self.moduli[j] as usize;
            out[j] = (idx % n) as u32;
            idx /= n;
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(move |i| self.element_at(i))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.moduli)
                .map(|((&x, &y), &n)| ((x as u64 + y as u64) % n as u64) as u32)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement(a.0.iter().zip(&self.moduli).map(|(&x, &n)| if x == 0 { 0 } else { n - x }).collect())
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &GroupElement, k: i64) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.moduli)
                .map(|(&x, &n)| ((x as i64 * k.rem_euclid(n as i64)) % n as i64) as u32)
                .collect(),
        )
    }

    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a, b);
        let mut out = 0usize;
        let mut place = 1usize;
        for &n in self.moduli.iter().rev() {
            let n = n as usize;
            let s = (a % n + b % n) % n;
            out += s * place;
            place *= n;
            a /= n;
            b /= n;
        }
        out
    }

    pub fn neg_idx(&self, a: usize) -> usize {
        let mut a = a;
        let mut out = 0usize;
        let mut place = 1usize;
        for &n in self.moduli.iter().rev() {
            let n = n as usize;
            let c = a % n;
            out += ((n - c) % n) * place;
            place *= n;
            a /= n;
        }
        out
    }

    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.add_idx(a, self.neg_idx(b))
    }

    /// Additive order of an element.
    pub fn element_order(&self, a: &GroupElement) -> u64 {
        a.0.iter().zip(&self.moduli).fold(1u64, |acc, (&c, &n)| {
            let n = n as u64;
            acc.lcm(&(n / (c as u64).gcd(&n)))
        })
    }

    /// Parses an element literal such as `5` (rank one) or `(1,0,0,5)`.
    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        let t = s.trim();
        let inner = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(t);
        let coords = inner
            .split(',')
            .map(|c| {
                c.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad coordinate {c:?} in element {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.element(&coords)
    }

    /// Parses a set literal `{0,1}` or `{(0,1),(1,0)}`; duplicates are kept
    /// for the caller to reject or merge.
    pub fn parse_elements(&self, s: &str) -> Result<Vec<GroupElement>> {
        let t = s.trim();
        let inner = t
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .or_else(|| t.strip_prefix('[').and_then(|r| r.strip_suffix(']')))
            .unwrap_or(t)
            .trim();
        if inner.is_empty() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        if inner.starts_with('(') {
            let mut rest = inner;
            while let Some(open) = rest.find('(') {
                let close =
                    rest[open..].find(')').ok_or_else(|| Error::Parse(format!("unbalanced parentheses in {s:?}")))?
                        + open;
                out.push(self.parse_element(&rest[open..=close])?);
                rest = &rest[close + 1..];
            }
        } else {
            for tok in inner.split(',') {
                if self.rank() != 1 {
                    return Err(Error::Parse(format!(
                        "bare integers are only valid in cyclic groups, got {s:?} for {self}"
                    )));
                }
                out.push(self.parse_element(tok)?);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Group {
    /// Compact literal, e.g. `Z2^3xZ8`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        let mut first = true;
        while i < self.moduli.len() {
            let n = self.moduli[i];
            let mut run = 1;
            while i + run < self.moduli.len() && self.moduli[i + run] == n {
                run += 1;
            }
            if !first {
                write!(f, "x")?;
            }
            first = false;
            if run > 1 {
                write!(f, "Z{n}^{run}")?;
            } else {
                write!(f, "Z{n}")?;
            }
            i += run;
        }
        Ok(())
    }
}

impl FromStr for Group {
    type Err = Error;

    /// Accepts literals like `Z4`, `Z4xZ2^3`, `Z2 x Z4 x Z8`.
    fn from_str(s: &str) -> Result<Self> {
        let mut moduli = Vec::new();
        for factor in s.split(['x', 'X', '×']) {
            let factor = factor.trim();
            let body = factor
                .strip_prefix('Z')
                .or_else(|| factor.strip_prefix('z'))
                .ok_or_else(|| Error::Parse(format!("bad cyclic factor {factor:?} in {s:?}")))?;
            let (n, pow) = match body.split_once('^') {
                Some((n, p)) => (n, p),
                None => (body, "1"),
            };
            let n: u32 = n.trim().parse().map_err(|_| Error::Parse(format!("bad modulus in {factor:?}")))?;
            let pow: usize = pow.trim().parse().map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
            if pow == 0 {
                return Err(Error::Parse(format!("zero power in {factor:?}")));
            }
            moduli.extend(std::iter::repeat_n(n, pow));
        }
        Group::new(moduli)
    }
}
