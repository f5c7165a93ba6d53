//! Weight enumerators, character sums, formal duality certificates,
//! primitivity and reduction to primitive sets.

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::{
    quotient_group, smallest_containing_coset, CyclotomicInt, Group, GroupElement, Pairing, Subgroup,
};
use crate::error::{Error, Result};

/// Groups up to this order get a full per-element certificate table.
pub const FULL_TABLE_LIMIT: usize = 256;

/// Nonempty, sorted, duplicate-free subset of a group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetInGroup {
    group: Group,
    indices: Vec<usize>,
}

impl SetInGroup {
    pub fn new(group: &Group, elems: &[GroupElement]) -> Result<Self> {
        for e in elems {
            group.check(e)?;
        }
        Self::from_indices(group, elems.iter().map(|e| group.index_of(e)).collect())
    }

    pub fn from_indices(group: &Group, mut indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Domain("the empty set is not a valid input".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= group.order()) {
            return Err(Error::Dimension(format!("element index {bad} outside {group}")));
        }
        indices.sort_unstable();
        indices.dedup();
        Ok(Self { group: group.clone(), indices })
    }

    /// Parses a set literal such as `{0,1}` or `{(0,1),(1,0)}`.
    pub fn parse(group: &Group, s: &str) -> Result<Self> {
        Self::new(group, &group.parse_elements(s)?)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    /// Sorted element indices.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn members(&self) -> Vec<GroupElement> {
        self.indices.iter().map(|&i| self.group.element_at(i)).collect()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains_idx(&self, idx: usize) -> bool {
        self.indices.binary_search(&idx).is_ok()
    }

    pub fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.group.order()];
        for &i in &self.indices {
            m[i] = true;
        }
        m
    }

    /// `S + t`.
    pub fn translate(&self, t: &GroupElement) -> Self {
        let ti = self.group.index_of(t);
        let indices = self.indices.iter().map(|&i| self.group.add_idx(i, ti)).collect();
        Self::from_indices(&self.group, indices).expect("translate keeps a nonempty set")
    }

    /// `S^{(-1)} = {-s}`.
    pub fn negated(&self) -> Self {
        let indices = self.indices.iter().map(|&i| self.group.neg_idx(i)).collect();
        Self::from_indices(&self.group, indices).expect("negation keeps a nonempty set")
    }

    /// Member literals in index order.
    pub fn literals(&self) -> Vec<String> {
        self.members().iter().map(|e| e.to_string()).collect()
    }

    /// True iff `S + K = S`.
    pub fn is_union_of_cosets(&self, k: &Subgroup) -> bool {
        let mask = self.mask();
        self.indices.iter().all(|&s| k.member_indices().iter().all(|&h| mask[self.group.add_idx(s, h)]))
    }
}

impl fmt::Display for SetInGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.literals().join(","))
    }
}

/// `ν_S(g) = #{(x,y) ∈ S×S : x − y = g}`, indexed by element index.
pub fn weight_enumerator(s: &SetInGroup) -> Vec<u64> {
    let g = s.group();
    let mut nu = vec![0u64; g.order()];
    for &x in s.indices() {
        for &y in s.indices() {
            nu[g.sub_idx(x, y)] += 1;
        }
    }
    nu
}

/// Exponent histogram of `⟨g, x⟩` over `x ∈ S` (left argument fixed).
fn left_histogram(p: &Pairing, g: &[u32], s: &SetInGroup, coords: &mut [u32]) -> Vec<i64> {
    let n = p.group().exponent() as usize;
    let row = p.left_row(g);
    let mut counts = vec![0i64; n];
    for &x in s.indices() {
        p.group().coords_into(x, coords);
        counts[p.dot(&row, coords) as usize] += 1;
    }
    counts
}

/// Exponent histogram of `⟨t, g⟩` over `t ∈ T` (right argument fixed).
fn right_histogram(p: &Pairing, g: &[u32], t: &SetInGroup, coords: &mut [u32]) -> Vec<i64> {
    let n = p.group().exponent() as usize;
    let col = p.right_col(g);
    let mut counts = vec![0i64; n];
    for &x in t.indices() {
        p.group().coords_into(x, coords);
        counts[p.dot(&col, coords) as usize] += 1;
    }
    counts
}

/// `|Σ c_e ζ^e|²` from the exponent histogram, via its autocorrelation.
fn histogram_norm(order: u64, counts: &[i64]) -> CyclotomicInt {
    let n = counts.len();
    let nz: Vec<usize> = (0..n).filter(|&e| counts[e] != 0).collect();
    let mut auto = vec![0i64; n];
    for &e in &nz {
        for &f in &nz {
            auto[(e + n - f) % n] += counts[e] * counts[f];
        }
    }
    CyclotomicInt::from_exponent_counts(order, &auto)
}

/// `χ_g(S) = Σ_{x∈S} ⟨g, x⟩`.
pub fn char_sum(p: &Pairing, g: &GroupElement, s: &SetInGroup) -> Result<CyclotomicInt> {
    p.group().check(g)?;
    if s.group() != p.group() {
        return Err(Error::Dimension("set and pairing live on different groups".into()));
    }
    let mut coords = vec![0u32; p.group().rank()];
    let counts = left_histogram(p, &g.0, s, &mut coords);
    Ok(CyclotomicInt::from_exponent_counts(p.group().exponent(), &counts))
}

/// `|χ_g(S)|²` as an exact cyclotomic integer.
pub fn char_sum_norm(p: &Pairing, g: &GroupElement, s: &SetInGroup) -> Result<CyclotomicInt> {
    p.group().check(g)?;
    let mut coords = vec![0u32; p.group().rank()];
    let counts = left_histogram(p, &g.0, s, &mut coords);
    Ok(histogram_norm(p.group().exponent(), &counts))
}

/// One row of a certificate table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateRow {
    pub element: String,
    /// `ν_T(g)`.
    pub nu: u64,
    /// Required value `(|S|²/|T|)·ν_T(g)` of `|χ_g(S)|²`, as `p/q`.
    pub expected: String,
    /// `|χ_g(S)|²` when rational, `None` otherwise.
    pub norm: Option<String>,
}

/// Machine-checkable verdict of a formal duality check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualityCertificate {
    pub group: String,
    pub pairing: Vec<Vec<i64>>,
    pub set: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual_set: Option<Vec<String>>,
    pub verdict: bool,
    /// `|S|² = |G|`, reported for self-duality checks only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size_condition: Option<bool>,
    pub table: Vec<CertificateRow>,
    /// First violating row, if any.
    pub violations: Vec<CertificateRow>,
}

impl DualityCertificate {
    pub fn first_violation(&self) -> Option<&CertificateRow> {
        self.violations.first()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

fn ratio_literal(num: &BigInt, den: u64) -> String {
    let r = num_rational::BigRational::new(num.clone(), BigInt::from(den));
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

struct RowCheck {
    row: CertificateRow,
    ok: bool,
    ok_transposed: bool,
}

/// Checks `|T|·|χ_g(S)|² = |S|²·ν_T(g)` for every `g`, and cross-checks the
/// transposed form `|S|·|Σ_{t∈T}⟨t,g⟩|² = |T|²·ν_S(g)`.
pub fn is_formally_dual_pair(p: &Pairing, s: &SetInGroup, t: &SetInGroup) -> Result<DualityCertificate> {
    check_dual_inputs(p, s, t)?;
    let g = p.group();
    let n = g.exponent();
    let (ss, ts) = (s.len() as u64, t.len() as u64);
    let nu_t = weight_enumerator(t);
    let nu_s = weight_enumerator(s);
    let checks: Vec<RowCheck> = (0..g.order())
        .into_par_iter()
        .map_init(
            || (vec![0u32; g.rank()], vec![0u32; g.rank()]),
            |(gc, xc), idx| {
                g.coords_into(idx, gc);
                let norm = histogram_norm(n, &left_histogram(p, gc, s, xc)).as_integer();
                let required = BigInt::from(ss * ss) * BigInt::from(nu_t[idx]);
                let ok = norm.as_ref().is_some_and(|v| v * BigInt::from(ts) == required);
                let norm_t = histogram_norm(n, &right_histogram(p, gc, t, xc)).as_integer();
                let required_t = BigInt::from(ts * ts) * BigInt::from(nu_s[idx]);
                let ok_transposed = norm_t.is_some_and(|v| v * BigInt::from(ss) == required_t);
                let row = CertificateRow {
                    element: g.element_at(idx).to_string(),
                    nu: nu_t[idx],
                    expected: ratio_literal(&required, ts),
                    norm: norm.map(|v| v.to_string()),
                };
                RowCheck { row, ok, ok_transposed }
            },
        )
        .collect();
    let verdict = checks.iter().all(|c| c.ok);
    let verdict_transposed = checks.iter().all(|c| c.ok_transposed);
    if verdict != verdict_transposed {
        return Err(Error::Inconsistent(format!(
            "the two equivalent forms of formal duality disagree for {s} and {t}"
        )));
    }
    let violations: Vec<CertificateRow> = checks.iter().find(|c| !c.ok).map(|c| c.row.clone()).into_iter().collect();
    let table = if g.order() <= FULL_TABLE_LIMIT { checks.into_iter().map(|c| c.row).collect() } else { Vec::new() };
    Ok(DualityCertificate {
        group: g.to_string(),
        pairing: p.spec().matrix,
        set: s.literals(),
        dual_set: Some(t.literals()),
        verdict,
        size_condition: None,
        table,
        violations,
    })
}

fn check_dual_inputs(p: &Pairing, s: &SetInGroup, t: &SetInGroup) -> Result<()> {
    if s.group() != p.group() || t.group() != p.group() {
        return Err(Error::Dimension("sets and pairing live on different groups".into()));
    }
    p.require_nondegenerate()
}

/// Formal duality of `S` with itself, plus the size condition `|S|² = |G|`.
pub fn is_formally_self_dual(p: &Pairing, s: &SetInGroup) -> Result<DualityCertificate> {
    let mut cert = is_formally_dual_pair(p, s, s)?;
    cert.dual_set = None;
    cert.size_condition = Some(s.len() * s.len() == s.group().order());
    Ok(cert)
}

/// Verdict only, short-circuiting on the first violation.
pub fn quick_self_dual(p: &Pairing, s: &SetInGroup) -> Result<bool> {
    quick_dual_pair(p, s, s)
}

/// Verdict only for a pair, short-circuiting on the first violation.
pub fn quick_dual_pair(p: &Pairing, s: &SetInGroup, t: &SetInGroup) -> Result<bool> {
    check_dual_inputs(p, s, t)?;
    let g = p.group();
    let n = g.exponent();
    let (ss, ts) = (s.len() as u64, t.len() as u64);
    let nu_t = weight_enumerator(t);
    let mut gc = vec![0u32; g.rank()];
    let mut xc = vec![0u32; g.rank()];
    for idx in 0..g.order() {
        g.coords_into(idx, &mut gc);
        let norm = histogram_norm(n, &left_histogram(p, &gc, s, &mut xc));
        let required = BigInt::from(ss * ss) * BigInt::from(nu_t[idx]);
        if norm.as_integer().map(|v| v * BigInt::from(ts)) != Some(required) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Why a set fails to be primitive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Primitivity {
    /// Proper subgroup `H` with `S ⊆ s₀ + H`, if any.
    pub coset: Option<Subgroup>,
    /// Nontrivial stabilizer `K = {k : S + k = S}`, if any.
    pub union: Option<Subgroup>,
}

impl Primitivity {
    pub fn is_primitive(&self) -> bool {
        self.coset.is_none() && self.union.is_none()
    }

    /// `"primitive"`, `"coset"`, `"union"` or `"coset+union"`.
    pub fn reason(&self) -> &'static str {
        match (self.coset.is_some(), self.union.is_some()) {
            (false, false) => "primitive",
            (true, false) => "coset",
            (false, true) => "union",
            (true, true) => "coset+union",
        }
    }
}

/// Stabilizer `{k : S + k = S}`; `S` is a union of `K`-cosets exactly for
/// subgroups `K` of it.
pub fn stabilizer(s: &SetInGroup) -> Subgroup {
    let g = s.group();
    let mask = s.mask();
    let first = s.indices()[0];
    let members: Vec<GroupElement> = s
        .indices()
        .iter()
        .map(|&x| g.sub_idx(x, first))
        .filter(|&k| s.indices().iter().all(|&x| mask[g.add_idx(x, k)]))
        .map(|k| g.element_at(k))
        .collect();
    Subgroup::from_elements(g, &members).expect("stabilizer is a subgroup")
}

pub fn is_primitive(s: &SetInGroup) -> Primitivity {
    let (h, _) = smallest_containing_coset(s.group(), &s.members()).expect("set is nonempty");
    let k = stabilizer(s);
    Primitivity { coset: (!h.is_whole()).then_some(h), union: (!k.is_trivial()).then_some(k) }
}

/// One projection step of [`reduce_to_primitive`].
#[derive(Debug, Clone, Serialize)]
pub struct ReductionStep {
    pub group: String,
    pub pairing: Vec<Vec<i64>>,
    pub set: Vec<String>,
    pub coset_subgroup: Vec<String>,
    pub annihilator: Vec<String>,
    pub quotient: String,
    pub quotient_pairing: Vec<Vec<i64>>,
    pub quotient_set: Vec<String>,
    /// The projected set re-verified formally self dual.
    pub verified: bool,
}

#[derive(Debug, Clone)]
pub struct Reduction {
    pub pairing: Pairing,
    pub set: SetInGroup,
    pub trace: Vec<ReductionStep>,
}

/// Projects `S` to `H/ann(H)` with the induced pairing until it lies in no
/// proper coset, re-verifying self-duality after every step.
pub fn reduce_to_primitive(p: &Pairing, s: &SetInGroup) -> Result<Reduction> {
    if !quick_self_dual(p, s)? {
        return Err(Error::Domain(format!("{s} is not formally self dual under {p}")));
    }
    let mut pairing = p.clone();
    let mut set = s.clone();
    let mut trace = Vec::new();
    loop {
        let g = set.group().clone();
        let (h, rep) = smallest_containing_coset(&g, &set.members())?;
        if h.is_whole() {
            break;
        }
        let shifted = set.translate(&g.neg(&rep));
        let ann = pairing.annihilator(&h)?;
        if !ann.is_subgroup_of(&h) {
            return Err(Error::Invariant(format!(
                "annihilator {} is not inside {}; the set is not self dual under this pairing",
                ann.describe(),
                h.describe()
            )));
        }
        let q = quotient_group(&h, &ann)?;
        let induced = q.induced_pairing(&pairing)?;
        let projected: Vec<GroupElement> = shifted.members().iter().map(|x| q.project(x)).collect::<Result<_>>()?;
        let next = SetInGroup::new(q.target(), &projected)?;
        let verified = quick_self_dual(&induced, &next)?;
        trace.push(ReductionStep {
            group: g.to_string(),
            pairing: pairing.spec().matrix,
            set: set.literals(),
            coset_subgroup: h.elements().iter().map(|e| e.to_string()).collect(),
            annihilator: ann.elements().iter().map(|e| e.to_string()).collect(),
            quotient: q.target().to_string(),
            quotient_pairing: induced.spec().matrix,
            quotient_set: next.literals(),
            verified,
        });
        if !verified {
            return Err(Error::Inconsistent(format!(
                "projection of {set} to {} is not formally self dual",
                q.target()
            )));
        }
        pairing = induced;
        set = next;
    }
    Ok(Reduction { pairing, set, trace })
}
