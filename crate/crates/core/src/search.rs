//! Pruned depth-first search for formally self dual sets and formally dual
//! pairs in small groups.
//!
//! Candidate sets are built in increasing element-index order. With
//! translation canonicalization they contain the identity, which loses
//! nothing because formal duality is translation invariant. A partial set `P`
//! of a final `S` with `|S| = k` and `r = k − |P|` remaining elements must
//! keep `k·ν_S(g) = |χ_g(S)|²` reachable for every `g`:
//!
//! * `k·ν_P(g) ≤ (|χ_g(P)| + r)²`, since `ν` only grows;
//! * `(|χ_g(P)| − r)² ≤ k·min(k, ν_P(g) + 2r)`, since each new element adds
//!   at most two ordered pairs with difference `g ≠ 0`.
//!
//! Character sums are tracked in floating point for pruning only, with a
//! slack far above rounding error; for exponents dividing 4 they are exact
//! Gaussian integers. Every reported hit is re-verified exactly.

use std::f64::consts::TAU;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::{Group, GroupElement, Pairing};
use crate::duality::{is_formally_dual_pair, is_formally_self_dual, is_primitive, SetInGroup};
use crate::error::{Error, Result};

/// Default largest group order accepted by the search.
pub const DEFAULT_MAX_ORDER: usize = 64;

/// Hard ceiling on the group order (exponent tables are `|G|²`).
pub const HARD_MAX_ORDER: usize = 4096;

const SLACK: f64 = 1e-6;

/// Which pairings to search under.
#[derive(Debug, Clone)]
pub enum PairingChoice {
    Fixed(Pairing),
    /// Every nondegenerate pairing of the group (order ≤ 16).
    All,
}

/// How candidate sets are normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Canonicalization {
    /// Only sets containing the identity.
    Translation,
    /// Every `k`-subset.
    None,
}

#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub group: Group,
    pub pairing: PairingChoice,
    /// `|S|`.
    pub size: usize,
    pub canonicalization: Canonicalization,
    /// Reachability pruning; off means plain enumeration.
    pub prune: bool,
    /// Node budget; a budgeted search runs sequentially so that the explored
    /// part is deterministic.
    pub budget_nodes: Option<u64>,
    /// Forced smallest elements of every candidate, by index.
    pub seed_prefix: Vec<usize>,
    pub max_order: usize,
}

impl SearchSpec {
    pub fn new(group: &Group, pairing: PairingChoice, size: usize) -> Self {
        SearchSpec {
            group: group.clone(),
            pairing,
            size,
            canonicalization: Canonicalization::Translation,
            prune: true,
            budget_nodes: None,
            seed_prefix: Vec::new(),
            max_order: DEFAULT_MAX_ORDER,
        }
    }

    /// Sets the seed prefix from elements.
    pub fn with_seed(mut self, seed: &[GroupElement]) -> Self {
        self.seed_prefix = seed.iter().map(|e| self.group.index_of(e)).collect();
        self
    }

    fn validate(&self) -> Result<()> {
        let order = self.group.order();
        if self.max_order == 0 || self.budget_nodes == Some(0) {
            return Err(Error::Domain("bounds and budgets must be positive".into()));
        }
        if order > self.max_order.min(HARD_MAX_ORDER) {
            return Err(Error::Capacity(format!(
                "group order {order} exceeds the search bound {}",
                self.max_order.min(HARD_MAX_ORDER)
            )));
        }
        if self.size == 0 || self.size > order {
            return Err(Error::Domain(format!("set size {} outside 1..={order}", self.size)));
        }
        if let PairingChoice::Fixed(p) = &self.pairing {
            if p.group() != &self.group {
                return Err(Error::Dimension("pairing lives on a different group".into()));
            }
            p.require_nondegenerate()?;
        }
        let mut seed = self.seed_prefix.clone();
        seed.sort_unstable();
        seed.dedup();
        if seed.len() != self.seed_prefix.len() || seed.iter().any(|&i| i >= order) {
            return Err(Error::Domain("seed prefix must list distinct group elements".into()));
        }
        if seed.len() > self.size {
            return Err(Error::Domain("seed prefix is larger than the set size".into()));
        }
        if self.canonicalization == Canonicalization::Translation && !seed.is_empty() && seed[0] != 0 {
            return Err(Error::Domain("with translation canonicalization the seed must contain the identity".into()));
        }
        Ok(())
    }

    fn pairings(&self) -> Result<Vec<Pairing>> {
        match &self.pairing {
            PairingChoice::Fixed(p) => Ok(vec![p.clone()]),
            PairingChoice::All => Pairing::enumerate_nondegenerate(&self.group),
        }
    }
}

/// A verified search result.
#[derive(Debug, Clone)]
pub struct SearchHit {
    pub pairing: Pairing,
    pub set: SetInGroup,
    /// [`crate::duality::Primitivity::reason`] of the set.
    pub primitivity: &'static str,
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub hits: Vec<SearchHit>,
    /// False when the node budget ran out.
    pub complete: bool,
    pub nodes: u64,
}

/// Precomputed data for one pairing.
struct Tables {
    order: usize,
    /// `exp[g·|G| + x] = ⟨g,x⟩` exponent.
    exp: Vec<u32>,
    roots: Vec<(f64, f64)>,
    /// `sub[x·|G| + y] = x − y`.
    sub: Vec<u32>,
}

impl Tables {
    fn new(p: &Pairing) -> Self {
        let g = p.group();
        let order = g.order();
        let n = g.exponent();
        let elems: Vec<GroupElement> = g.elements().collect();
        let mut exp = vec![0u32; order * order];
        for (a, ea) in elems.iter().enumerate() {
            let row = p.left_row(&ea.0);
            for (x, ex) in elems.iter().enumerate() {
                exp[a * order + x] = p.dot(&row, &ex.0) as u32;
            }
        }
        let roots = (0..n)
            .map(|e| {
                // exact values at the quarter turns keep 2- and 4-torsion sums integral
                match (4 * e).checked_rem(n) {
                    Some(0) => match 4 * e / n {
                        0 => (1.0, 0.0),
                        1 => (0.0, 1.0),
                        2 => (-1.0, 0.0),
                        _ => (0.0, -1.0),
                    },
                    _ => {
                        let t = TAU * e as f64 / n as f64;
                        (t.cos(), t.sin())
                    }
                }
            })
            .collect();
        let mut sub = vec![0u32; order * order];
        for x in 0..order {
            for y in 0..order {
                sub[x * order + y] = g.sub_idx(x, y) as u32;
            }
        }
        Tables { order, exp, roots, sub }
    }
}

/// Mutable state along one branch.
struct Branch<'a> {
    t: &'a Tables,
    k: usize,
    prune: bool,
    members: Vec<usize>,
    /// One `(re, im)` vector per depth.
    chi: Vec<Vec<(f64, f64)>>,
    nu: Vec<u32>,
}

impl<'a> Branch<'a> {
    fn new(t: &'a Tables, k: usize, prune: bool) -> Self {
        Branch { t, k, prune, members: Vec::new(), chi: vec![vec![(0.0, 0.0); t.order]], nu: vec![0; t.order] }
    }

    fn push(&mut self, x: usize) {
        let order = self.t.order;
        let prev = self.chi.last().expect("root level exists");
        let next: Vec<(f64, f64)> = (0..order)
            .map(|g| {
                let (re, im) = self.t.roots[self.t.exp[g * order + x] as usize];
                (prev[g].0 + re, prev[g].1 + im)
            })
            .collect();
        self.chi.push(next);
        for &y in &self.members {
            self.nu[self.t.sub[x * order + y] as usize] += 1;
            self.nu[self.t.sub[y * order + x] as usize] += 1;
        }
        self.nu[0] += 1;
        self.members.push(x);
    }

    fn pop(&mut self) {
        let order = self.t.order;
        let x = self.members.pop().expect("pop after push");
        self.chi.pop();
        self.nu[0] -= 1;
        for &y in &self.members {
            self.nu[self.t.sub[x * order + y] as usize] -= 1;
            self.nu[self.t.sub[y * order + x] as usize] -= 1;
        }
    }

    /// Whether the current partial set can still complete to a self-dual set.
    fn feasible(&self) -> bool {
        if !self.prune {
            return true;
        }
        let k = self.k as f64;
        let r = (self.k - self.members.len()) as f64;
        let chi = self.chi.last().expect("root level exists");
        chi.iter().zip(&self.nu).skip(1).all(|(&(re, im), &nu)| {
            let a = (re * re + im * im).sqrt();
            let nu = nu as f64;
            let low_ok = k * nu <= (a + r) * (a + r) + SLACK;
            let high_ok = a <= r || (a - r) * (a - r) <= k * (k.min(nu + 2.0 * r)) + SLACK;
            low_ok && high_ok
        })
    }

    /// Floating-point screen at a leaf; hits are re-verified exactly.
    fn leaf_matches(&self) -> bool {
        let k = self.k as f64;
        let chi = self.chi.last().expect("root level exists");
        chi.iter().zip(&self.nu).all(|(&(re, im), &nu)| (re * re + im * im - k * nu as f64).abs() < SLACK)
    }
}

struct Budget {
    limit: Option<u64>,
    used: AtomicU64,
}

impl Budget {
    /// Counts one node; false once the limit is exceeded.
    fn take(&self) -> bool {
        let used = self.used.fetch_add(1, Ordering::Relaxed) + 1;
        self.limit.is_none_or(|l| used <= l)
    }
}

/// Explores all extensions of the branch by indices `≥ start`, appending
/// leaf sets that pass the screen. Returns false when the budget ran out.
fn dfs(b: &mut Branch, start: usize, budget: &Budget, out: &mut Vec<Vec<usize>>) -> bool {
    if b.members.len() == b.k {
        if b.leaf_matches() {
            out.push(b.members.clone());
        }
        return true;
    }
    let remaining = b.k - b.members.len();
    for x in start..=b.t.order - remaining {
        if !budget.take() {
            return false;
        }
        b.push(x);
        let ok = if b.feasible() { dfs(b, x + 1, budget, out) } else { true };
        b.pop();
        if !ok {
            return false;
        }
    }
    true
}

/// Runs the screened search for one pairing and returns candidate index sets
/// in lexicographic order, plus completeness.
fn screen_sets(spec: &SearchSpec, t: &Tables, budget: &Budget) -> (Vec<Vec<usize>>, bool) {
    let k = spec.size;
    let mut seed = spec.seed_prefix.clone();
    seed.sort_unstable();
    if spec.canonicalization == Canonicalization::Translation && seed.is_empty() {
        seed.push(0);
    }
    let mut root = Branch::new(t, k, spec.prune);
    for &x in &seed {
        root.push(x);
        if !root.feasible() {
            return (Vec::new(), true);
        }
    }
    let start = seed.last().map_or(0, |&m| m + 1);
    if root.members.len() == k || spec.budget_nodes.is_some() {
        let mut out = Vec::new();
        let ok = dfs(&mut root, start, budget, &mut out);
        return (out, ok);
    }
    // Unbudgeted: fan out over the next element, merge in prefix order.
    let last = t.order - (k - root.members.len());
    let parts: Vec<(Vec<Vec<usize>>, bool)> = (start..=last)
        .into_par_iter()
        .map(|x| {
            let mut b = Branch::new(t, k, spec.prune);
            for &s in &seed {
                b.push(s);
            }
            if !budget.take() {
                return (Vec::new(), false);
            }
            b.push(x);
            let mut out = Vec::new();
            let ok = if b.feasible() { dfs(&mut b, x + 1, budget, &mut out) } else { true };
            (out, ok)
        })
        .collect();
    let complete = parts.iter().all(|p| p.1);
    (parts.into_iter().flat_map(|p| p.0).collect(), complete)
}

/// Formally self dual sets of size `k` with `k² = |G|`.
pub fn search_fsd(spec: &SearchSpec) -> Result<SearchReport> {
    spec.validate()?;
    let order = spec.group.order();
    if spec.size * spec.size != order {
        return Err(Error::Domain(format!("self-dual search needs k² = |G|, got k={} and |G|={order}", spec.size)));
    }
    let budget = Budget { limit: spec.budget_nodes, used: AtomicU64::new(0) };
    let mut hits = Vec::new();
    let mut complete = true;
    for p in spec.pairings()? {
        let tables = Tables::new(&p);
        let (sets, done) = screen_sets(spec, &tables, &budget);
        complete &= done;
        for idx in sets {
            let set = SetInGroup::from_indices(&spec.group, idx)?;
            if !is_formally_self_dual(&p, &set)?.verdict {
                continue;
            }
            let primitivity = is_primitive(&set).reason();
            hits.push(SearchHit { pairing: p.clone(), set, primitivity });
        }
        if !done {
            break;
        }
    }
    Ok(SearchReport { hits, complete, nodes: budget.used.load(Ordering::Relaxed) })
}

/// A verified formally dual pair.
#[derive(Debug, Clone)]
pub struct PairHit {
    pub pairing: Pairing,
    pub s: SetInGroup,
    pub t: SetInGroup,
}

#[derive(Debug, Clone)]
pub struct PairReport {
    pub hits: Vec<PairHit>,
    pub complete: bool,
    pub nodes: u64,
}

/// All `k`-subsets (in lexicographic order) respecting the canonicalization,
/// with the seed forced for `S`.
fn enumerate_subsets(order: usize, k: usize, must_hold_identity: bool, seed: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = seed.to_vec();
    if must_hold_identity && cur.is_empty() {
        cur.push(0);
    }
    fn rec(cur: &mut Vec<usize>, start: usize, order: usize, k: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..order {
            cur.push(x);
            rec(cur, x + 1, order, k, out);
            cur.pop();
        }
    }
    let start = cur.last().map_or(0, |&m| m + 1);
    if cur.len() <= k {
        rec(&mut cur, start, order, k, &mut out);
    }
    out
}

/// Sets `T ∋ 0` (under translation canonicalization) of size `m` with `ν_T = target`.
fn sets_with_weight_enumerator(
    g: &Group,
    target: &[u32],
    m: usize,
    must_hold_identity: bool,
    budget: &Budget,
) -> (Vec<Vec<usize>>, bool) {
    let order = g.order();
    let mut out = Vec::new();
    let mut nu = vec![0u32; order];
    let mut cur: Vec<usize> = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        g: &Group,
        target: &[u32],
        m: usize,
        start: usize,
        nu: &mut Vec<u32>,
        cur: &mut Vec<usize>,
        budget: &Budget,
        out: &mut Vec<Vec<usize>>,
    ) -> bool {
        if cur.len() == m {
            if nu.as_slice() == target {
                out.push(cur.clone());
            }
            return true;
        }
        for x in start..=g.order() - (m - cur.len()) {
            if !budget.take() {
                return false;
            }
            let mut ok = true;
            for &y in cur.iter() {
                for d in [g.sub_idx(x, y), g.sub_idx(y, x)] {
                    nu[d] += 1;
                    ok &= nu[d] <= target[d];
                }
            }
            cur.push(x);
            let cont = if ok { rec(g, target, m, x + 1, nu, cur, budget, out) } else { true };
            cur.pop();
            for &y in cur.iter() {
                nu[g.sub_idx(x, y)] -= 1;
                nu[g.sub_idx(y, x)] -= 1;
            }
            if !cont {
                return false;
            }
        }
        true
    }
    nu[0] = m as u32;
    if target[0] != m as u32 {
        return (out, true);
    }
    let start = if must_hold_identity {
        cur.push(0);
        1
    } else {
        0
    };
    let done = rec(g, target, m, start, &mut nu, &mut cur, budget, &mut out);
    (out, done)
}

/// Formally dual pairs `(S, T)` with `|S| = k` and `|T| = |G|/k`.
///
/// Each candidate `S` fixes `ν_T(g) = |T|·|χ_g(S)|²/k²` for every `g`, which
/// drives an exact-match search for `T`.
pub fn search_fd_pairs(spec: &SearchSpec) -> Result<PairReport> {
    spec.validate()?;
    let order = spec.group.order();
    let k = spec.size;
    if order % k != 0 {
        return Err(Error::Domain(format!("|S|·|T| = |G| needs k | {order}, got k={k}")));
    }
    let m = order / k;
    let translation = spec.canonicalization == Canonicalization::Translation;
    let budget = Budget { limit: spec.budget_nodes, used: AtomicU64::new(0) };
    let mut hits = Vec::new();
    let mut complete = true;
    let mut seed = spec.seed_prefix.clone();
    seed.sort_unstable();
    'pairings: for p in spec.pairings()? {
        let t = Tables::new(&p);
        for s_idx in enumerate_subsets(order, k, translation, &seed) {
            if !budget.take() {
                complete = false;
                break 'pairings;
            }
            let mut target = vec![0u32; order];
            let mut integral = true;
            for (g, slot) in target.iter_mut().enumerate() {
                let (re, im) = s_idx.iter().fold((0.0, 0.0), |acc, &x| {
                    let r = t.roots[t.exp[g * order + x] as usize];
                    (acc.0 + r.0, acc.1 + r.1)
                });
                let v = (re * re + im * im) * m as f64 / (k * k) as f64;
                let rounded = v.round();
                if (v - rounded).abs() > SLACK || rounded < 0.0 {
                    integral = false;
                    break;
                }
                *slot = rounded as u32;
            }
            if !integral {
                continue;
            }
            let (ts, done) = sets_with_weight_enumerator(&spec.group, &target, m, translation, &budget);
            let s_set = SetInGroup::from_indices(&spec.group, s_idx)?;
            for t_idx in ts {
                let t_set = SetInGroup::from_indices(&spec.group, t_idx)?;
                if is_formally_dual_pair(&p, &s_set, &t_set)?.verdict {
                    hits.push(PairHit { pairing: p.clone(), s: s_set.clone(), t: t_set });
                }
            }
            if !done {
                complete = false;
                break 'pairings;
            }
        }
    }
    Ok(PairReport { hits, complete, nodes: budget.used.load(Ordering::Relaxed) })
}

/// Every `k`-subset containing the identity that is formally self dual under
/// `p`, by plain enumeration and exact verification.
pub fn brute_force_fsd(p: &Pairing, k: usize) -> Result<Vec<SetInGroup>> {
    let g = p.group();
    let mut out = Vec::new();
    for idx in enumerate_subsets(g.order(), k, true, &[]) {
        let s = SetInGroup::from_indices(g, idx)?;
        if crate::duality::quick_self_dual(p, &s)? {
            out.push(s);
        }
    }
    Ok(out)
}
