use std::collections::{HashSet, VecDeque};
use std::hash::{Hash, Hasher};

use super::group::{Group, GroupElement};
use crate::error::{Error, Result};

/// Subgroup of a [`Group`], carrying a generating set and its explicit,
/// sorted member list (as element indices).
///
/// Equality and hashing look only at the member list.
#[derive(Debug, Clone)]
pub struct Subgroup {
    group: Group,
    generators: Vec<GroupElement>,
    members: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.members.hash(state);
    }
}

/// Default order bound for [`enumerate_subgroups`].
pub const DEFAULT_SUBGROUP_ORDER_BOUND: usize = 4096;
/// Hard cap on the number of subgroups collected by [`enumerate_subgroups`].
pub const MAX_SUBGROUP_COUNT: usize = 250_000;

impl Subgroup {
    pub fn trivial(group: &Group) -> Self {
        Self { group: group.clone(), generators: Vec::new(), members: vec![0] }
    }

    pub fn whole(group: &Group) -> Self {
        let generators = (0..group.rank())
            .map(|j| {
                let mut c = vec![0u32; group.rank()];
                c[j] = 1 % group.moduli()[j];
                GroupElement(c)
            })
            .filter(|g| g.0.iter().any(|&c| c != 0))
            .collect();
        Self { group: group.clone(), generators, members: (0..group.order()).collect() }
    }

    /// Subgroup generated by `gens`; redundant generators are dropped.
    pub fn generated_by(group: &Group, gens: &[GroupElement]) -> Result<Self> {
        let mut h = Self::trivial(group);
        for g in gens {
            group.check(g)?;
            h = h.extend(g);
        }
        Ok(h)
    }

    /// Validates an explicit element list as a subgroup.
    pub fn from_elements(group: &Group, elems: &[GroupElement]) -> Result<Self> {
        for e in elems {
            group.check(e)?;
        }
        let mut members: Vec<usize> = elems.iter().map(|e| group.index_of(e)).collect();
        members.sort_unstable();
        members.dedup();
        let h = Self::generated_by(group, elems)?;
        if h.members != members {
            return Err(Error::Invariant(format!(
                "the given {} elements of {} do not form a subgroup",
                members.len(),
                group
            )));
        }
        Ok(h)
    }

    /// `⟨self, g⟩`, built as the union of the cosets `k·g + self`.
    pub fn extend(&self, g: &GroupElement) -> Self {
        let group = &self.group;
        let gi = group.index_of(g);
        let mut mark = vec![false; group.order()];
        for &m in &self.members {
            mark[m] = true;
        }
        if mark[gi] {
            return self.clone();
        }
        let mut members = self.members.clone();
        let mut shift = gi;
        while !mark[shift] {
            for &m in &self.members {
                let x = group.add_idx(shift, m);
                mark[x] = true;
                members.push(x);
            }
            shift = group.add_idx(shift, gi);
        }
        members.sort_unstable();
        let mut generators = self.generators.clone();
        generators.push(g.clone());
        Self { group: group.clone(), generators, members }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    /// Sorted member indices.
    pub fn member_indices(&self) -> &[usize] {
        &self.members
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        self.members.iter().map(|&i| self.group.element_at(i)).collect()
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.group.order()
    }

    pub fn contains_idx(&self, idx: usize) -> bool {
        self.members.binary_search(&idx).is_ok()
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        self.group.contains(a) && self.contains_idx(self.group.index_of(a))
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.group == other.group && self.members.iter().all(|&m| other.contains_idx(m))
    }

    /// Membership mask over all element indices.
    pub fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.group.order()];
        for &m in &self.members {
            mask[m] = true;
        }
        mask
    }

    /// Short literal: `<gens>` with the order, e.g. `<(0,2)> (order 2)`.
    pub fn describe(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        format!("<{}> (order {})", gens.join(","), self.order())
    }
}

/// Every subgroup of `group`, sorted by order and then by member list.
///
/// Breadth-first closure from the trivial subgroup: each subgroup found is
/// extended by one element from every nontrivial coset, duplicates are
/// discarded by member list.
pub fn enumerate_subgroups(group: &Group) -> Result<Vec<Subgroup>> {
    enumerate_subgroups_bounded(group, DEFAULT_SUBGROUP_ORDER_BOUND)
}

pub fn enumerate_subgroups_bounded(group: &Group, max_order: usize) -> Result<Vec<Subgroup>> {
    if group.order() > max_order {
        return Err(Error::Capacity(format!(
            "subgroup enumeration limited to order {max_order}, {group} has order {}",
            group.order()
        )));
    }
    let trivial = Subgroup::trivial(group);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(trivial.members.clone());
    let mut queue = VecDeque::from([trivial]);
    let mut out = Vec::new();
    while let Some(h) = queue.pop_front() {
        let mut covered = h.mask();
        for g in 0..group.order() {
            if covered[g] {
                continue;
            }
            for &m in &h.members {
                covered[group.add_idx(g, m)] = true;
            }
            let k = h.extend(&group.element_at(g));
            if seen.insert(k.members.clone()) {
                if seen.len() > MAX_SUBGROUP_COUNT {
                    return Err(Error::Capacity(format!("{group} has more than {MAX_SUBGROUP_COUNT} subgroups")));
                }
                queue.push_back(k);
            }
        }
        out.push(h);
    }
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
    Ok(out)
}

/// Smallest coset `s₀ + H` containing `set`, with `s₀` the first element of
/// `set` and `H = ⟨s − s₀ : s ∈ set⟩`.
pub fn smallest_containing_coset(group: &Group, set: &[GroupElement]) -> Result<(Subgroup, GroupElement)> {
    let base = set.first().ok_or_else(|| Error::Domain("smallest containing coset of an empty set".into()))?;
    group.check(base)?;
    let mut h = Subgroup::trivial(group);
    for s in &set[1..] {
        group.check(s)?;
        let d = group.sub(s, base);
        if !h.contains(&d) {
            h = h.extend(&d);
        }
    }
    Ok((h, base.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(lit: &str) -> usize {
        enumerate_subgroups(&lit.parse().unwrap()).unwrap().len()
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(count("Z4"), 3);
        assert_eq!(count("Z2^2"), 5);
        assert_eq!(count("Z7"), 2);
        assert_eq!(count("Z1"), 1);
        // d(n) for cyclic groups
        assert_eq!(count("Z12"), 6);
        assert_eq!(count("Z36"), 9);
        // Gaussian binomials over F_2: 1 + 15 + 35 + 15 + 1
        assert_eq!(count("Z2^4"), 67);
        // 1 + 4 + 1 over F_3 in rank 2
        assert_eq!(count("Z3^2"), 6);
        // Z2 x Z4: known to have 8 subgroups
        assert_eq!(count("Z2xZ4"), 8);
        assert_eq!(count("Z2^6"), 2825);
    }

    #[test]
    fn z4_subgroups_listed() {
        let g = Group::cyclic(4).unwrap();
        let subs = enumerate_subgroups(&g).unwrap();
        let lists: Vec<Vec<usize>> = subs.iter().map(|h| h.member_indices().to_vec()).collect();
        assert_eq!(lists, vec![vec![0], vec![0, 2], vec![0, 1, 2, 3]]);
    }

    #[test]
    fn capacity_bound() {
        let g: Group = "Z2^13".parse().unwrap();
        assert!(matches!(enumerate_subgroups(&g), Err(Error::Capacity(_))));
    }

    #[test]
    fn containing_coset_examples() {
        let z8 = Group::cyclic(8).unwrap();
        let s = z8.parse_elements("{0,2}").unwrap();
        let (h, rep) = smallest_containing_coset(&z8, &s).unwrap();
        assert_eq!(h.member_indices(), &[0, 2, 4, 6]);
        assert_eq!(rep.to_string(), "0");

        let z4 = Group::cyclic(4).unwrap();
        let (h, rep) = smallest_containing_coset(&z4, &z4.parse_elements("{1,3}").unwrap()).unwrap();
        assert_eq!(h.member_indices(), &[0, 2]);
        assert_eq!(rep.to_string(), "1");

        let (h, _) = smallest_containing_coset(&z4, &[z4.identity()]).unwrap();
        assert!(h.is_trivial());
        assert!(smallest_containing_coset(&z4, &[]).is_err());
    }

    #[test]
    fn from_elements_rejects_non_subgroups() {
        let z4 = Group::cyclic(4).unwrap();
        assert!(Subgroup::from_elements(&z4, &z4.parse_elements("{0,1}").unwrap()).is_err());
        let h = Subgroup::from_elements(&z4, &z4.parse_elements("{0,2}").unwrap()).unwrap();
        assert_eq!(h.order(), 2);
    }
}
