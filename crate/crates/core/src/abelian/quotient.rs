use std::collections::{HashMap, VecDeque};

use num_integer::Integer;

use super::group::{Group, GroupElement};
use super::pairing::Pairing;
use super::subgroup::Subgroup;
use crate::error::{Error, Result};

/// Largest subgroup order [`QuotientMap::new`] will tabulate.
pub const MAX_QUOTIENT_SOURCE: usize = 1 << 20;

/// Projection `H → H/K` with the quotient in invariant-factor form.
///
/// The quotient is read off the Smith normal form of the relation lattice
/// of `H` in the coordinates of its generators; the projection is tabulated
/// for every member of `H` and checked exhaustively on construction.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    source: Subgroup,
    kernel: Subgroup,
    target: Group,
    image: HashMap<usize, usize>,
    lifts: Vec<GroupElement>,
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Row-echelon basis of a lattice in `Z^r` that contains `D·Z^r`, entries
/// kept in `[0, D)`.
struct HermiteModD {
    d: i128,
    pivots: Vec<Vec<i128>>,
}

impl HermiteModD {
    fn new(r: usize, d: i128) -> Self {
        let pivots = (0..r)
            .map(|i| {
                let mut v = vec![0; r];
                v[i] = d;
                v
            })
            .collect();
        Self { d, pivots }
    }

    fn insert(&mut self, mut v: Vec<i128>) {
        let d = self.d;
        for x in v.iter_mut() {
            *x = x.rem_euclid(d);
        }
        for c in 0..v.len() {
            if v[c] == 0 {
                continue;
            }
            let p = &self.pivots[c];
            let (a, b) = (p[c], v[c]);
            let (g, s, t) = ext_gcd(a, b);
            let (ag, bg) = (a / g, b / g);
            let mut np = vec![0; v.len()];
            let mut nv = vec![0; v.len()];
            for j in c..v.len() {
                np[j] = (s * p[j] + t * v[j]).rem_euclid(d);
                nv[j] = (ag * v[j] - bg * p[j]).rem_euclid(d);
            }
            // g divides d, so a zero residue means the pivot is d itself
            if np[c] == 0 {
                np[c] = d;
            }
            self.pivots[c] = np;
            v = nv;
        }
    }
}

/// Diagonalizes `a` in place by row operations and tracked column
/// operations, all mod `d`; returns the column transform `V`.
///
/// The row lattice is only meaningful together with `d·Z^r`, so entries may
/// be reduced mod `d` freely. The diagonal ends in divisibility order.
fn smith_mod_d(a: &mut [Vec<i128>], d: i128) -> Vec<Vec<i128>> {
    let r = a.len();
    let mut v: Vec<Vec<i128>> = (0..r).map(|i| (0..r).map(|j| i128::from(i == j)).collect()).collect();
    let sym = |x: i128| {
        let x = x.rem_euclid(d);
        if 2 * x > d {
            x - d
        } else {
            x
        }
    };
    for row in a.iter_mut() {
        for x in row.iter_mut() {
            *x = sym(*x);
        }
    }
    for t in 0..r {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..r {
                    if a[i][j] != 0 && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..r {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    for j in t..r {
                        a[i][j] = sym(a[i][j] - q * a[t][j]);
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..r {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    for i in t..r {
                        a[i][j] = sym(a[i][j] - q * a[i][t]);
                    }
                    for row in v.iter_mut() {
                        row[j] = (row[j] - q * row[t]).rem_euclid(d);
                    }
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // pivot must divide the trailing block; otherwise fold a row in
            let bad = (t + 1..r).find(|&i| (t + 1..r).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..r {
                        a[t][j] = sym(a[t][j] + a[i][j]);
                    }
                }
                None => break,
            }
        }
    }
    v
}

impl QuotientMap {
    pub fn new(h: &Subgroup, k: &Subgroup) -> Result<Self> {
        if h.group() != k.group() {
            return Err(Error::Dimension("subgroups live in different groups".into()));
        }
        if !k.is_subgroup_of(h) {
            return Err(Error::Domain(format!("{} is not contained in {}", k.describe(), h.describe())));
        }
        if h.order() > MAX_QUOTIENT_SOURCE {
            return Err(Error::Capacity(format!(
                "quotient source of order {} exceeds {MAX_QUOTIENT_SOURCE}",
                h.order()
            )));
        }
        let g = h.group();
        let d = g.exponent() as i128;
        let gens: Vec<usize> = h.generators().iter().map(|x| g.index_of(x)).collect();
        let r = gens.len();

        // coefficient vector of every member along a BFS tree
        let mut coeff: HashMap<usize, Vec<i128>> = HashMap::with_capacity(h.order());
        coeff.insert(0, vec![0; r]);
        let mut hermite = HermiteModD::new(r, d);
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            let cu = coeff[&u].clone();
            for (i, &gi) in gens.iter().enumerate() {
                let w = g.add_idx(u, gi);
                let mut step = cu.clone();
                step[i] += 1;
                match coeff.get(&w) {
                    None => {
                        coeff.insert(w, step);
                        queue.push_back(w);
                    }
                    Some(cw) => {
                        let rel: Vec<i128> = step.iter().zip(cw).map(|(x, y)| x - y).collect();
                        hermite.insert(rel);
                    }
                }
            }
        }
        for kg in k.generators() {
            let idx = g.index_of(kg);
            hermite.insert(coeff[&idx].clone());
        }
        let mut a = hermite.pivots;
        let v = smith_mod_d(&mut a, d);

        let mut invariants = Vec::new();
        let mut columns = Vec::new();
        for t in 0..r {
            let di = a[t][t].abs().gcd(&d);
            if di > 1 {
                invariants.push(di as u32);
                columns.push(t);
            }
        }
        let target = if invariants.is_empty() { Group::trivial() } else { Group::new(invariants.clone())? };

        let mut image = HashMap::with_capacity(h.order());
        let mut coords = vec![0u32; target.rank()];
        for (&x, cx) in &coeff {
            if invariants.is_empty() {
                image.insert(x, 0);
                continue;
            }
            for (slot, (&col, &di)) in coords.iter_mut().zip(columns.iter().zip(&invariants)) {
                let s: i128 = cx.iter().zip(&v).map(|(c, row)| c * row[col]).sum();
                *slot = s.rem_euclid(di as i128) as u32;
            }
            image.insert(x, target.index_of(&GroupElement(coords.clone())));
        }

        let mut lifts = Vec::with_capacity(target.rank());
        let mut fibre = vec![0usize; target.order()];
        let mut rep: HashMap<usize, usize> = HashMap::new();
        for &x in h.member_indices() {
            let y = image[&x];
            fibre[y] += 1;
            rep.entry(y).or_insert(x);
        }
        let kernel_ok = h.member_indices().iter().all(|&x| (image[&x] == 0) == k.contains_idx(x));
        if fibre.iter().any(|&f| f != k.order()) || !kernel_ok {
            return Err(Error::Inconsistent(format!(
                "quotient projection of {} by {} failed its fibre check",
                h.describe(),
                k.describe()
            )));
        }
        for &x in h.member_indices() {
            for &gi in &gens {
                let y = target.add_idx(image[&x], image[&gi]);
                if image[&g.add_idx(x, gi)] != y {
                    return Err(Error::Inconsistent("quotient projection is not additive".into()));
                }
            }
        }
        if !target.is_trivial() {
            for j in 0..target.rank() {
                let mut e = vec![0u32; target.rank()];
                e[j] = 1;
                let idx = target.index_of(&GroupElement(e));
                lifts.push(g.element_at(rep[&idx]));
            }
        }
        Ok(Self { source: h.clone(), kernel: k.clone(), target, image, lifts })
    }

    pub fn source(&self) -> &Subgroup {
        &self.source
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn target(&self) -> &Group {
        &self.target
    }

    pub fn project(&self, x: &GroupElement) -> Result<GroupElement> {
        let g = self.source.group();
        g.check(x)?;
        let idx = g.index_of(x);
        let y = self
            .image
            .get(&idx)
            .ok_or_else(|| Error::Domain(format!("{x} is not in the quotient source {}", self.source.describe())))?;
        Ok(self.target.element_at(*y))
    }

    /// Elements of the source mapping to the canonical basis of the target.
    pub fn basis_lifts(&self) -> &[GroupElement] {
        &self.lifts
    }

    /// Pairing on the quotient with `⟨xK, yK⟩' = ⟨x, y⟩`.
    ///
    /// Requires `⟨K, H⟩ = ⟨H, K⟩ = 1`.
    pub fn induced_pairing(&self, p: &Pairing) -> Result<Pairing> {
        if p.group() != self.source.group() {
            return Err(Error::Dimension("pairing lives on a different group".into()));
        }
        for kg in self.kernel.generators() {
            for hg in self.source.generators() {
                if p.exponent_of(kg, hg) != 0 || p.exponent_of(hg, kg) != 0 {
                    return Err(Error::Invariant(format!(
                        "pairing is not trivial between {kg} and {hg}, induced pairing undefined"
                    )));
                }
            }
        }
        if self.target.is_trivial() {
            return Pairing::new(&self.target, vec![vec![0]]);
        }
        let n = p.group().exponent();
        let nq = self.target.exponent();
        let m = self.target.rank();
        let mut matrix = vec![vec![0i64; m]; m];
        for (i, li) in self.lifts.iter().enumerate() {
            for (j, lj) in self.lifts.iter().enumerate() {
                let e = p.exponent_of(li, lj) as u128 * nq as u128;
                if e % n as u128 != 0 {
                    return Err(Error::Invariant("pairing values do not descend to the quotient".into()));
                }
                matrix[i][j] = (e / n as u128) as i64;
            }
        }
        Pairing::new(&self.target, matrix)
    }
}

/// `H/K` with its projection.
pub fn quotient_group(h: &Subgroup, k: &Subgroup) -> Result<QuotientMap> {
    QuotientMap::new(h, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::subgroup::enumerate_subgroups;

    fn sub(g: &Group, lit: &str) -> Subgroup {
        Subgroup::generated_by(g, &g.parse_elements(lit).unwrap()).unwrap()
    }

    #[test]
    fn z4_mod_2() {
        let z4 = Group::cyclic(4).unwrap();
        let q = quotient_group(&Subgroup::whole(&z4), &sub(&z4, "{2}")).unwrap();
        assert_eq!(q.target().moduli(), &[2]);
        let img: Vec<String> = z4.elements().map(|x| q.project(&x).unwrap().to_string()).collect();
        assert_eq!(img, ["0", "1", "0", "1"]);
    }

    #[test]
    fn full_kernel_is_trivial() {
        let g: Group = "Z2xZ4".parse().unwrap();
        let w = Subgroup::whole(&g);
        let q = quotient_group(&w, &w).unwrap();
        assert!(q.target().is_trivial());
    }

    #[test]
    fn z2xz4_mod_02() {
        let g: Group = "Z2xZ4".parse().unwrap();
        let q = quotient_group(&Subgroup::whole(&g), &sub(&g, "{(0,2)}")).unwrap();
        assert_eq!(q.target().moduli(), &[2, 2]);
        let q = quotient_group(&Subgroup::whole(&g), &sub(&g, "{(1,2)}")).unwrap();
        assert_eq!(q.target().moduli(), &[4]);
    }

    #[test]
    fn rejects_non_contained_kernel() {
        let g: Group = "Z8".parse().unwrap();
        assert!(matches!(quotient_group(&sub(&g, "{4}"), &sub(&g, "{2}")), Err(Error::Domain(_))));
    }

    #[test]
    fn invariant_factor_shapes() {
        // Z_2 x Z_3 is cyclic of order 6
        let g: Group = "Z2xZ3".parse().unwrap();
        let q = quotient_group(&Subgroup::whole(&g), &Subgroup::trivial(&g)).unwrap();
        assert_eq!(q.target().moduli(), &[6]);
        let g: Group = "Z4xZ6".parse().unwrap();
        let q = quotient_group(&Subgroup::whole(&g), &Subgroup::trivial(&g)).unwrap();
        assert_eq!(q.target().moduli(), &[2, 12]);
    }

    #[test]
    fn all_pairs_small_groups() {
        for lit in ["Z2xZ4", "Z2^3", "Z3xZ9", "Z4^2", "Z2xZ8"] {
            let g: Group = lit.parse().unwrap();
            let subs = enumerate_subgroups(&g).unwrap();
            for h in &subs {
                for k in subs.iter().filter(|k| k.is_subgroup_of(h)) {
                    let q = quotient_group(h, k).unwrap();
                    assert_eq!(q.target().order() * k.order(), h.order());
                    let m = q.target().moduli();
                    assert!(m.windows(2).all(|w| w[1] % w[0] == 0), "{m:?}");
                }
            }
        }
    }

    #[test]
    fn induced_pairing_on_lattice_quotient() {
        let g = Group::cyclic(16).unwrap();
        let p = Pairing::standard(&g);
        let h = sub(&g, "{2}");
        let k = p.annihilator(&h).unwrap();
        assert_eq!(k.member_indices(), &[0, 8]);
        let q = quotient_group(&h, &k).unwrap();
        assert_eq!(q.target().moduli(), &[4]);
        let ip = q.induced_pairing(&p).unwrap();
        assert!(ip.is_nondegenerate());
        assert_eq!(ip.matrix(), &[vec![1]]);
        let bad = quotient_group(&Subgroup::whole(&g), &sub(&g, "{8}")).unwrap();
        assert!(bad.induced_pairing(&p).is_err());
    }
}
