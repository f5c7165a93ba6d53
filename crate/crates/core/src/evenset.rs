//! Group algebra `Q[G]`, even-set decompositions of `SS^{(-1)}` into
//! subgroup indicators, and the canonical self-dual coefficients.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::abelian::{enumerate_subgroups, Group, Pairing, Subgroup};
use crate::duality::{weight_enumerator, SetInGroup};
use crate::error::{Error, Result};
use crate::linsolve;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rational_literal(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Element `Σ a_g g` of `Q[G]`, stored densely by element index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    group: Group,
    coeffs: Vec<BigRational>,
}

impl GroupAlgebraElement {
    pub fn zero(group: &Group) -> Self {
        Self { group: group.clone(), coeffs: vec![BigRational::zero(); group.order()] }
    }

    /// `1·e`, the multiplicative identity.
    pub fn identity(group: &Group) -> Self {
        let mut z = Self::zero(group);
        z.coeffs[0] = BigRational::one();
        z
    }

    pub fn indicator(set: &SetInGroup) -> Self {
        let mut z = Self::zero(set.group());
        for &i in set.indices() {
            z.coeffs[i] = BigRational::one();
        }
        z
    }

    pub fn subgroup(h: &Subgroup) -> Self {
        let mut z = Self::zero(h.group());
        for &i in h.member_indices() {
            z.coeffs[i] = BigRational::one();
        }
        z
    }

    pub fn from_coeffs(group: &Group, coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::Dimension(format!(
                "{} coefficients for a group of order {}",
                coeffs.len(),
                group.order()
            )));
        }
        Ok(Self { group: group.clone(), coeffs })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    /// Coefficients by element index.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.group != other.group {
            return Err(Error::Dimension(format!("group algebra elements over {} and {}", self.group, other.group)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { group: self.group.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self { group: self.group.clone(), coeffs })
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self { group: self.group.clone(), coeffs: self.coeffs.iter().map(|a| a * k).collect() }
    }

    /// `A^{(-1)} = Σ a_g g^{-1}`.
    pub fn reversed(&self) -> Self {
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[self.group.neg_idx(i)] = c.clone();
        }
        Self { group: self.group.clone(), coeffs }
    }

    /// Convolution `Σ_g (Σ_h a_h b_{g−h}) g`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let g = &self.group;
        let mut out = Self::zero(g);
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                out.coeffs[g.add_idx(i, j)] += a * b;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for GroupAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{}·[{}]", rational_literal(c), self.group.element_at(i)))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

pub fn group_algebra_product(a: &GroupAlgebraElement, b: &GroupAlgebraElement) -> Result<GroupAlgebraElement> {
    a.mul(b)
}

/// `SS^{(-1)}`, whose coefficients are `ν_S`.
pub fn ss_inverse(s: &SetInGroup) -> Result<GroupAlgebraElement> {
    let ind = GroupAlgebraElement::indicator(s);
    let prod = ind.mul(&ind.reversed())?;
    let nu = weight_enumerator(s);
    if prod.coeffs.iter().zip(&nu).any(|(c, &v)| *c != q(v as i64)) {
        return Err(Error::Inconsistent("SS^(-1) disagrees with the weight enumerator".into()));
    }
    Ok(prod)
}

/// `Σ λ_H·H` over distinct subgroups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupCombination {
    pub terms: Vec<(Subgroup, BigRational)>,
}

/// Serialized term of a [`SubgroupCombination`].
#[derive(Debug, Clone, Serialize)]
pub struct CombinationTerm {
    pub generators: Vec<String>,
    pub order: usize,
    pub lambda: String,
}

impl SubgroupCombination {
    pub fn expand(&self, group: &Group) -> Result<GroupAlgebraElement> {
        let mut out = GroupAlgebraElement::zero(group);
        for (h, l) in &self.terms {
            if h.group() != group {
                return Err(Error::Dimension("subgroup from a different group".into()));
            }
            for &i in h.member_indices() {
                out.coeffs[i] += l;
            }
        }
        Ok(out)
    }

    /// Coefficient of `h`, zero when absent.
    pub fn coefficient(&self, h: &Subgroup) -> BigRational {
        self.terms.iter().find(|(k, _)| k == h).map(|(_, l)| l.clone()).unwrap_or_else(BigRational::zero)
    }

    pub fn without_zeros(mut self) -> Self {
        self.terms.retain(|(_, l)| !l.is_zero());
        self
    }

    pub fn serialize_terms(&self) -> Vec<CombinationTerm> {
        self.terms
            .iter()
            .map(|(h, l)| CombinationTerm {
                generators: h.generators().iter().map(|g| g.to_string()).collect(),
                order: h.order(),
                lambda: rational_literal(l),
            })
            .collect()
    }
}

impl fmt::Display for SubgroupCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (h, l)) in self.terms.iter().enumerate() {
            let sign = if l.is_negative() { "-" } else { "+" };
            let body = format!("{}·{}", rational_literal(&l.abs()), h.describe());
            match i {
                0 if l.is_negative() => write!(f, "-{body}")?,
                0 => write!(f, "{body}")?,
                _ => write!(f, " {sign} {body}")?,
            }
        }
        Ok(())
    }
}

/// Some `λ` with `Σ λ_H·H = SS^{(-1)}`, or `None` if `S` is not even.
pub fn even_decomposition(s: &SetInGroup) -> Result<Option<SubgroupCombination>> {
    let subs = enumerate_subgroups(s.group())?;
    even_decomposition_with(s, &subs)
}

/// [`even_decomposition`] against a precomputed subgroup list.
pub fn even_decomposition_with(s: &SetInGroup, subs: &[Subgroup]) -> Result<Option<SubgroupCombination>> {
    let g = s.group();
    let target = ss_inverse(s)?;
    let masks: Vec<Vec<bool>> = subs.iter().map(|h| h.mask()).collect();
    let a: Vec<Vec<BigRational>> = (0..g.order())
        .map(|x| masks.iter().map(|m| if m[x] { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    let Some(sol) = linsolve::solve(&a, target.coeffs())? else { return Ok(None) };
    let comb = SubgroupCombination { terms: subs.iter().cloned().zip(sol).collect() }.without_zeros();
    if comb.expand(g)? != target {
        return Err(Error::Inconsistent("even decomposition does not re-expand to SS^(-1)".into()));
    }
    Ok(Some(comb))
}

/// Averaged coefficients
/// `λ_H = (1/2s)·Σ_{i<s} (μ_{σ^i H} + (|S|/|H|)·μ_{σ^i ann(H)})`
/// with `s` the order of `σ`, over every subgroup.
pub fn canonical_fsd_coefficients(
    p: &Pairing,
    s: &SetInGroup,
    mu: &SubgroupCombination,
) -> Result<SubgroupCombination> {
    let g = s.group();
    if s.len() * s.len() != g.order() {
        return Err(Error::Domain(format!(
            "canonical coefficients need |S|² = |G|, got |S| = {} and |G| = {}",
            s.len(),
            g.order()
        )));
    }
    let subs = enumerate_subgroups(g)?;
    let sigma = p.sigma()?;
    let order = sigma.order();
    let mu_of: HashMap<&[usize], BigRational> = mu.terms.iter().map(|(h, l)| (h.member_indices(), l.clone())).collect();
    let lookup = |h: &Subgroup| mu_of.get(h.member_indices()).cloned().unwrap_or_else(BigRational::zero);
    let size = q(s.len() as i64);
    let mut terms = Vec::with_capacity(subs.len());
    for h in &subs {
        let ann = p.annihilator(h)?;
        let mut acc = BigRational::zero();
        let (mut hi, mut ai) = (h.clone(), ann);
        for _ in 0..order {
            acc += lookup(&hi) + &size / q(hi.order() as i64) * lookup(&ai);
            hi = sigma.apply_subgroup(&hi);
            ai = sigma.apply_subgroup(&ai);
        }
        terms.push((h.clone(), acc / q(2 * order as i64)));
    }
    Ok(SubgroupCombination { terms }.without_zeros())
}

/// True iff `Σ (μ_H − λ_H)·H = 0` for the canonical `λ`.
pub fn zero_sum_check(p: &Pairing, s: &SetInGroup, mu: &SubgroupCombination) -> Result<bool> {
    let lambda = canonical_fsd_coefficients(p, s, mu)?;
    let g = s.group();
    Ok(mu.expand(g)?.sub(&lambda.expand(g)?)?.is_zero())
}

/// Combination with coefficient `λ_H·|G|·|H|/|S|³` on `ann(H)`; for a
/// formally dual pair `(S, T)` it re-expands to `TT^{(-1)}`.
pub fn dual_side_combination(p: &Pairing, s: &SetInGroup, lambda: &SubgroupCombination) -> Result<SubgroupCombination> {
    let g = s.group();
    let factor = q(g.order() as i64) / q((s.len() * s.len() * s.len()) as i64);
    let mut terms = Vec::with_capacity(lambda.terms.len());
    for (h, l) in &lambda.terms {
        terms.push((p.annihilator(h)?, l * q(h.order() as i64) * &factor));
    }
    Ok(SubgroupCombination { terms })
}

/// Symmetry laws of canonical coefficients: `λ_{σH} = λ_H` and
/// `λ_{ann(H)} = (|H|/|S|)·λ_H`, checked on every subgroup.
pub fn canonical_symmetry_holds(p: &Pairing, s: &SetInGroup, lambda: &SubgroupCombination) -> Result<bool> {
    let sigma = p.sigma()?;
    let size = q(s.len() as i64);
    for h in enumerate_subgroups(s.group())? {
        let l = lambda.coefficient(&h);
        if lambda.coefficient(&sigma.apply_subgroup(&h)) != l {
            return Ok(false);
        }
        let expected = q(h.order() as i64) / &size * &l;
        if lambda.coefficient(&p.annihilator(&h)?) != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest absolute coefficient, handy for reports.
pub fn max_abs_coefficient(c: &SubgroupCombination) -> BigRational {
    c.terms.iter().map(|(_, l)| l.abs()).max().unwrap_or_else(BigRational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::{is_formally_dual_pair, is_formally_self_dual};

    fn set(g: &Group, lit: &str) -> SetInGroup {
        SetInGroup::parse(g, lit).unwrap()
    }

    fn coeff_list(c: &SubgroupCombination) -> Vec<(usize, BigRational)> {
        c.terms.iter().map(|(h, l)| (h.order(), l.clone())).collect()
    }

    #[test]
    fn products() {
        let z4 = Group::cyclic(4).unwrap();
        let s = GroupAlgebraElement::indicator(&set(&z4, "{0,1}"));
        let p = group_algebra_product(&s, &s.reversed()).unwrap();
        assert_eq!(p.to_string(), "2·[0] + 1·[1] + 1·[3]");
        assert_eq!(s.mul(&GroupAlgebraElement::identity(&z4)).unwrap(), s);
        let h = Subgroup::generated_by(&z4, &[z4.element(&[2]).unwrap()]).unwrap();
        let hh = GroupAlgebraElement::subgroup(&h);
        assert_eq!(hh.mul(&hh).unwrap(), hh.scale(&q(2)));
        let z2 = Group::cyclic(2).unwrap();
        assert!(s.mul(&GroupAlgebraElement::identity(&z2)).is_err());
    }

    #[test]
    fn ss_inverse_examples() {
        let z4 = Group::cyclic(4).unwrap();
        let e = ss_inverse(&set(&z4, "{0,1}")).unwrap();
        assert_eq!(e.coeffs(), &[q(2), q(1), q(0), q(1)]);
        assert_eq!(ss_inverse(&set(&z4, "{3}")).unwrap(), GroupAlgebraElement::identity(&z4));
        let e = ss_inverse(&set(&z4, "{0,2}")).unwrap();
        assert_eq!(e.coeffs(), &[q(2), q(0), q(2), q(0)]);
    }

    #[test]
    fn decomposition_examples() {
        let z4 = Group::cyclic(4).unwrap();
        let mu = even_decomposition(&set(&z4, "{0,1}")).unwrap().unwrap();
        assert_eq!(coeff_list(&mu), vec![(1, q(2)), (2, q(-1)), (4, q(1))]);
        let mu = even_decomposition(&set(&z4, "{0,2}")).unwrap().unwrap();
        assert_eq!(coeff_list(&mu), vec![(2, q(2))]);
        let z9 = Group::cyclic(9).unwrap();
        assert!(even_decomposition(&set(&z9, "{0,1,2}")).unwrap().is_none());
    }

    #[test]
    fn canonical_tito() {
        let z4 = Group::cyclic(4).unwrap();
        let p = Pairing::standard(&z4);
        let s = set(&z4, "{0,1}");
        let mu = even_decomposition(&s).unwrap().unwrap();
        let lambda = canonical_fsd_coefficients(&p, &s, &mu).unwrap();
        assert_eq!(coeff_list(&lambda), vec![(1, q(2)), (2, q(-1)), (4, q(1))]);
        assert!(zero_sum_check(&p, &s, &mu).unwrap());
        assert!(canonical_symmetry_holds(&p, &s, &lambda).unwrap());
        let mut bumped = mu.clone();
        bumped.terms[0].1 += q(1);
        assert!(!zero_sum_check(&p, &s, &bumped).unwrap());
        let dual = dual_side_combination(&p, &s, &lambda).unwrap();
        assert_eq!(dual.expand(&z4).unwrap(), ss_inverse(&s).unwrap());
        assert!(canonical_fsd_coefficients(&p, &set(&z4, "{0}"), &mu).is_err());
    }

    #[test]
    fn canonical_trivial_group() {
        let one = Group::trivial();
        let s = set(&one, "{0}");
        let mu = even_decomposition(&s).unwrap().unwrap();
        let lambda = canonical_fsd_coefficients(&Pairing::standard(&one), &s, &mu).unwrap();
        assert_eq!(coeff_list(&lambda), vec![(1, q(1))]);
    }

    #[test]
    fn non_self_dual_even_set() {
        // {0,1,3,4} in Z16 vs its direct verdict
        let z16 = Group::cyclic(16).unwrap();
        let p = Pairing::standard(&z16);
        for lit in ["{0,1,3,4}", "{0,4,8,12}", "{0,1,8,9}", "{0,2,4,6}"] {
            let s = set(&z16, lit);
            if let Some(mu) = even_decomposition(&s).unwrap() {
                assert_eq!(
                    zero_sum_check(&p, &s, &mu).unwrap(),
                    is_formally_self_dual(&p, &s).unwrap().verdict,
                    "{lit}"
                );
            }
        }
    }

    #[test]
    fn asymmetric_pairing_symmetry_laws() {
        let g: Group = "Z3^2".parse().unwrap();
        let p = Pairing::new(&g, vec![vec![1, 1], vec![0, 1]]).unwrap();
        for a in 1..9 {
            for b in (a + 1)..9 {
                let s = SetInGroup::from_indices(&g, vec![0, a, b]).unwrap();
                if !is_formally_self_dual(&p, &s).unwrap().verdict {
                    continue;
                }
                let mu = even_decomposition(&s).unwrap().unwrap();
                let lambda = canonical_fsd_coefficients(&p, &s, &mu).unwrap();
                assert!(canonical_symmetry_holds(&p, &s, &lambda).unwrap());
                assert_eq!(lambda.expand(&g).unwrap(), ss_inverse(&s).unwrap());
                assert!(zero_sum_check(&p, &s, &mu).unwrap());
            }
        }
    }

    fn subsets_with_identity(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << (n - 1)) {
            if mask.count_ones() as usize == k - 1 {
                let mut v = vec![0];
                v.extend((1..n).filter(|i| mask >> (i - 1) & 1 == 1));
                out.push(v);
            }
        }
        out
    }

    #[test]
    fn dual_side_on_dual_pairs() {
        let mut checked = 0;
        for lit in ["Z8", "Z2xZ4", "Z2^3", "Z9", "Z3^2"] {
            let g: Group = lit.parse().unwrap();
            let p = Pairing::standard(&g);
            let n = g.order();
            for a in (1..=n).filter(|a| n % a == 0) {
                for si in subsets_with_identity(n, a) {
                    let s = SetInGroup::from_indices(&g, si).unwrap();
                    for ti in subsets_with_identity(n, n / a) {
                        let t = SetInGroup::from_indices(&g, ti).unwrap();
                        if !is_formally_dual_pair(&p, &s, &t).unwrap().verdict {
                            continue;
                        }
                        let mu = even_decomposition(&s).unwrap().expect("dual sets are even");
                        let dual = dual_side_combination(&p, &s, &mu).unwrap();
                        assert_eq!(dual.expand(&g).unwrap(), ss_inverse(&t).unwrap(), "{lit} {s} {t}");
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 20, "{checked}");
    }
}
