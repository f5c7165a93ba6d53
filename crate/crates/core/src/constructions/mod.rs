//! Known formally self dual families, relative and skew Hadamard difference
//! sets, and the two order-64 sporadic sets.
//!
//! Every constructor returns plain data; callers certify it with
//! [`crate::duality`]. The Paley pipeline certifies its own intermediate
//! claims (exact `D*`, `T = π(S)`) because those are what it is for.

mod oddfield;

pub use oddfield::{default_irreducible, is_irreducible, OddField, MAX_FIELD_SIZE};

use crate::abelian::{Group, GroupElement, Pairing, Subgroup};
use crate::duality::{char_sum, weight_enumerator, SetInGroup};
use crate::error::{Error, Result};

/// `{0,1} ⊂ Z_4` with the standard pairing.
pub fn tito() -> (Pairing, SetInGroup) {
    let g = Group::cyclic(4).expect("Z4");
    let s = SetInGroup::from_indices(&g, vec![0, 1]).expect("nonempty");
    (Pairing::standard(&g), s)
}

/// Multiples of `n` in `Z_{n²}` with the standard pairing.
pub fn lattice_example(n: u32) -> Result<(Pairing, SetInGroup)> {
    if n == 0 {
        return Err(Error::Domain("lattice example needs n >= 1".into()));
    }
    let g = Group::cyclic(n.checked_mul(n).ok_or_else(|| Error::Capacity("n² overflows".into()))?)?;
    let s = SetInGroup::from_indices(&g, (0..n as usize).map(|k| k * n as usize).collect())?;
    Ok((Pairing::standard(&g), s))
}

/// `{(k, kα) : k ∈ Z_p} ⊂ Z_p²` with the standard pairing; needs `α² ≡ −1`.
pub fn gaussian_example(p: u32, alpha: i64) -> Result<(Pairing, SetInGroup)> {
    if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    let pi = p as i64;
    let a = alpha.rem_euclid(pi);
    if (a * a + 1) % pi != 0 {
        return Err(Error::Domain(format!("{alpha}² is not -1 mod {p}")));
    }
    let g = Group::elementary(p, 2)?;
    let elems: Vec<GroupElement> = (0..pi).map(|k| g.element(&[k, k * a]).expect("rank 2")).collect();
    Ok((Pairing::standard(&g), SetInGroup::new(&g, &elems)?))
}

/// Checks `ν_S = 0` on `N∖{0}` and `ν_S ≡ λ` off `N`; returns `λ` when it
/// is determined (`N ≠ G`).
///
/// Uses the convention `ν_S(0) = |S|`.
pub fn is_relative_difference_set(s: &SetInGroup, n: &Subgroup) -> Result<(bool, Option<u64>)> {
    if s.group() != n.group() {
        return Err(Error::Dimension("set and subgroup live in different groups".into()));
    }
    let nu = weight_enumerator(s);
    if nu[1..].iter().enumerate().any(|(i, &v)| n.contains_idx(i + 1) && v != 0) {
        return Ok((false, None));
    }
    let mut outside = (0..nu.len()).filter(|&i| !n.contains_idx(i)).map(|i| nu[i]);
    let Some(lambda) = outside.next() else { return Ok((true, None)) };
    if outside.all(|v| v == lambda) {
        Ok((true, Some(lambda)))
    } else {
        Ok((false, None))
    }
}

/// Nonzero squares of `F_{p^m}` as a subset of `Z_p^m`; needs `p^m ≡ 3 (mod 4)`.
pub fn paley_set(f: &OddField) -> Result<SetInGroup> {
    if f.size() % 4 != 3 {
        return Err(Error::Domain(format!("{} elements is not 3 mod 4", f.size())));
    }
    let squares: Vec<usize> = (1..f.size()).map(|x| f.mul(x, x)).collect();
    SetInGroup::from_indices(f.additive_group(), squares)
}

/// `DD^{(-1)} = λG + k` and `G = D ⊔ D^{(-1)} ⊔ {0}`.
pub fn is_skew_hadamard(d: &SetInGroup) -> bool {
    let g = d.group();
    let neg = d.negated();
    let partition =
        !d.contains_idx(0) && d.indices().iter().all(|&x| !neg.contains_idx(x)) && 2 * d.len() + 1 == g.order();
    if !partition {
        return false;
    }
    let nu = weight_enumerator(d);
    nu[1..].windows(2).all(|w| w[0] == w[1])
}

/// `D* = {a : 2⟨a,D⟩ = −1 + i√q}` by exact comparison in `Z[ζ_p]`, with
/// `i√q` taken from the quadratic Gauss sum of `field`.
pub fn dual_set_dstar(p: &Pairing, d: &SetInGroup, field: &OddField) -> Result<SetInGroup> {
    if p.group() != field.additive_group() || d.group() != p.group() {
        return Err(Error::Dimension("pairing, set and field disagree on the group".into()));
    }
    p.require_nondegenerate()?;
    let order = field.characteristic() as u64;
    let target = &field.i_sqrt_q()? - &crate::abelian::CyclotomicInt::one(order);
    let g = p.group();
    let mut members = Vec::new();
    for a in 0..g.order() {
        let cs = char_sum(p, &g.element_at(a), d)?;
        if &cs + &cs == target {
            members.push(a);
        }
    }
    if members.is_empty() {
        return Err(Error::Domain("no element pairs with D to (-1 + i√q)/2; D is not skew Hadamard".into()));
    }
    SetInGroup::from_indices(g, members)
}

fn inv_mod(a: i64, p: i64) -> Result<i64> {
    let a = a.rem_euclid(p);
    (1..p).find(|&x| a * x % p == 1).ok_or_else(|| Error::Domain(format!("{a} is not invertible mod {p}")))
}

fn scaled_pairs(f: &OddField, prod: &Group, src: &SetInGroup, left: i64, right: i64) -> Vec<GroupElement> {
    src.indices()
        .iter()
        .map(|&x| {
            let (a, b) = (f.scalar_mul(left, x), f.scalar_mul(right, x));
            let (ea, eb) = (f.additive_group().element_at(a), f.additive_group().element_at(b));
            GroupElement([ea.0, eb.0].concat())
        })
        .inspect(|e| debug_assert!(prod.contains(e)))
        .collect()
}

/// The skew Hadamard pair in `Z_p^m × Z_p^m`:
/// `S = {0} ∪ {(x,αx) : x∈D} ∪ {(x,βx) : x∈D^{(-1)}}` and
/// `T = {0} ∪ {(αx/(α−β), x/(β−α)) : x∈D*} ∪ {(βx/(α−β), x/(β−α)) : x∈D*^{(-1)}}`.
pub fn shds_pair(
    f: &OddField,
    d: &SetInGroup,
    dstar: &SetInGroup,
    alpha: i64,
    beta: i64,
) -> Result<(SetInGroup, SetInGroup)> {
    let p = f.characteristic() as i64;
    let (a, b) = (alpha.rem_euclid(p), beta.rem_euclid(p));
    if a == 0 || b == 0 || a == b {
        return Err(Error::Domain(format!("need distinct nonzero alpha, beta mod {p}, got {alpha}, {beta}")));
    }
    if d.group() != f.additive_group() || dstar.group() != f.additive_group() {
        return Err(Error::Dimension("D and D* must live in the field's additive group".into()));
    }
    let prod = f.additive_group().product(f.additive_group())?;
    let c = inv_mod(a - b, p)?;
    let zero = prod.identity();
    let mut s = vec![zero.clone()];
    s.extend(scaled_pairs(f, &prod, d, 1, a));
    s.extend(scaled_pairs(f, &prod, &d.negated(), 1, b));
    let mut t = vec![zero];
    t.extend(scaled_pairs(f, &prod, dstar, a * c, -c));
    t.extend(scaled_pairs(f, &prod, &dstar.negated(), b * c, -c));
    Ok((SetInGroup::new(&prod, &s)?, SetInGroup::new(&prod, &t)?))
}

/// Output of [`paley_self_dual`].
#[derive(Debug, Clone)]
pub struct PaleyBundle {
    pub field: OddField,
    pub d: SetInGroup,
    pub dstar: SetInGroup,
    /// `D* = D` (otherwise `D* = D^{(-1)}`).
    pub dstar_is_d: bool,
    /// Trace pairing on each factor, block diagonal.
    pub product_pairing: Pairing,
    /// `⟨a,b⟩ = ⟨π(a), b⟩` on the product.
    pub composed_pairing: Pairing,
    pub s: SetInGroup,
    pub t: SetInGroup,
}

/// Paley set, exact `D*`, the pair `(S, T)` and the pairing composed with
/// `π`, under which `S` is self dual. Checks `D* ∈ {D, D^{(-1)}}` and
/// `T = π(S)`; the duality claims themselves are left to the verifier.
pub fn paley_self_dual(f: &OddField, alpha: i64, beta: i64) -> Result<PaleyBundle> {
    let d = paley_set(f)?;
    let trace = f.trace_pairing();
    let dstar = dual_set_dstar(&trace, &d, f)?;
    let dstar_is_d = if dstar == d {
        true
    } else if dstar == d.negated() {
        false
    } else {
        return Err(Error::Inconsistent("D* is neither D nor D^(-1) under the trace pairing".into()));
    };
    let (s, t) = shds_pair(f, &d, &dstar, alpha, beta)?;
    let product_pairing = trace.product(&trace)?;
    let p = f.characteristic() as i64;
    let m = f.degree();
    let (a, b) = (alpha.rem_euclid(p), beta.rem_euclid(p));
    let c = inv_mod(a - b, p)?;
    // π(x,y) = (c·y, −c·x) if D* = D, else ((α+β)c·x − c·y, −c·x)
    let (top_left, top_right, bottom_left) = if dstar_is_d { (0, c, -c) } else { ((a + b) * c, -c, -c) };
    let mut mat = vec![vec![0i64; 2 * m]; 2 * m];
    for j in 0..m {
        mat[j][j] = top_left.rem_euclid(p);
        mat[j][m + j] = top_right.rem_euclid(p);
        mat[m + j][j] = bottom_left.rem_euclid(p);
    }
    let prod = s.group().clone();
    let apply = |e: &GroupElement| -> GroupElement {
        let coords: Vec<i64> = (0..2 * m).map(|r| (0..2 * m).map(|k| mat[r][k] * e.0[k] as i64).sum()).collect();
        prod.element(&coords).expect("rank 2m")
    };
    let image = SetInGroup::new(&prod, &s.members().iter().map(apply).collect::<Vec<_>>())?;
    if image != t {
        return Err(Error::Inconsistent("T differs from π(S)".into()));
    }
    let composed_pairing = product_pairing.precompose(&mat)?;
    Ok(PaleyBundle { field: f.clone(), d, dstar, dstar_is_d, product_pairing, composed_pairing, s, t })
}

/// The two primitive self dual sets of size 8 in groups of order 64, with
/// their standard pairings.
pub fn sporadic_order64() -> Vec<(Pairing, SetInGroup)> {
    let lits = [
        ("Z2xZ4xZ8", "{(0,0,0),(0,0,1),(0,0,2),(0,0,5),(0,1,0),(0,3,0),(1,0,0),(1,2,6)}"),
        ("Z2^3xZ8", "{(0,0,0,0),(0,0,0,1),(0,0,0,2),(0,0,0,5),(0,0,1,0),(0,1,0,0),(1,0,0,0),(1,1,1,6)}"),
    ];
    lits.iter()
        .map(|(g, s)| {
            let g: Group = g.parse().expect("group literal");
            let s = SetInGroup::parse(&g, s).expect("set literal");
            (Pairing::standard(&g), s)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::{is_formally_dual_pair, is_formally_self_dual, is_primitive};

    #[test]
    fn small_families_verify() {
        let (p, s) = tito();
        assert!(is_formally_self_dual(&p, &s).unwrap().verdict);
        assert_eq!(weight_enumerator(&s), vec![2, 1, 0, 1]);
        assert!(is_primitive(&s).is_primitive());
        for n in 1..=4 {
            let (p, s) = lattice_example(n).unwrap();
            assert!(is_formally_self_dual(&p, &s).unwrap().verdict);
            assert_eq!(is_primitive(&s).is_primitive(), n == 1);
        }
        assert_eq!(lattice_example(3).unwrap().1.literals(), ["0", "3", "6"]);
        for (p, a) in [(5, 2), (13, 5)] {
            let (pr, s) = gaussian_example(p, a).unwrap();
            assert!(is_formally_self_dual(&pr, &s).unwrap().verdict);
            assert!(!is_primitive(&s).is_primitive());
        }
        assert!(gaussian_example(5, 1).is_err());
        assert!(gaussian_example(6, 1).is_err());
    }

    #[test]
    fn relative_difference_sets() {
        let g = Group::elementary(3, 2).unwrap();
        let s = SetInGroup::parse(&g, "{(0,0),(1,1),(2,1)}").unwrap();
        let n = Subgroup::generated_by(&g, &[g.element(&[0, 1]).unwrap()]).unwrap();
        assert_eq!(is_relative_difference_set(&s, &n).unwrap(), (true, Some(1)));
        assert!(!is_relative_difference_set(&SetInGroup::new(&g, &n.elements()).unwrap(), &n).unwrap().0);
        let other = SetInGroup::parse(&g, "{(0,0),(1,0),(0,1)}").unwrap();
        assert!(!is_relative_difference_set(&other, &n).unwrap().0);
    }

    #[test]
    fn paley_sets() {
        let lits: Vec<Vec<String>> =
            [3, 7, 11].iter().map(|&p| paley_set(&OddField::new(p, 1).unwrap()).unwrap().literals()).collect();
        assert_eq!(lits[0], ["1"]);
        assert_eq!(lits[1], ["1", "2", "4"]);
        assert_eq!(lits[2], ["1", "3", "4", "5", "9"]);
        assert!(paley_set(&OddField::new(5, 1).unwrap()).is_err());
        for (p, m) in [(3, 1), (7, 1), (11, 1), (3, 3), (19, 1)] {
            assert!(is_skew_hadamard(&paley_set(&OddField::new(p, m).unwrap()).unwrap()));
        }
        let z5 = Group::cyclic(5).unwrap();
        assert!(!is_skew_hadamard(&SetInGroup::parse(&z5, "{1,2}").unwrap()));
        let z7 = Group::cyclic(7).unwrap();
        assert!(!is_skew_hadamard(&SetInGroup::parse(&z7, "{1,6}").unwrap()));
    }

    #[test]
    fn dstar_under_trace() {
        for (p, m) in [(3, 1), (7, 1), (11, 1), (3, 3)] {
            let f = OddField::new(p, m).unwrap();
            let d = paley_set(&f).unwrap();
            let ds = dual_set_dstar(&f.trace_pairing(), &d, &f).unwrap();
            assert!(ds == d || ds == d.negated());
            assert!(!ds.contains_idx(0));
        }
    }

    #[test]
    fn paley_pipeline() {
        for (p, m, a, b) in [(3, 1, 1, 2), (7, 1, 1, 2), (11, 1, 3, 5), (3, 3, 1, 2), (7, 1, 3, 6)] {
            let f = OddField::new(p, m).unwrap();
            let bundle = paley_self_dual(&f, a, b).unwrap();
            assert_eq!(bundle.s.len(), f.size());
            assert!(is_formally_dual_pair(&bundle.product_pairing, &bundle.s, &bundle.t).unwrap().verdict);
            let cert = is_formally_self_dual(&bundle.composed_pairing, &bundle.s).unwrap();
            assert!(cert.verdict, "p={p} m={m}");
        }
        assert!(paley_self_dual(&OddField::new(7, 1).unwrap(), 2, 2).is_err());
        assert!(paley_self_dual(&OddField::new(7, 1).unwrap(), 0, 2).is_err());
    }

    #[test]
    fn sporadic_sets_verify() {
        for (p, s) in sporadic_order64() {
            assert_eq!(s.len(), 8);
            assert_eq!(s.group().order(), 64);
            assert!(is_formally_self_dual(&p, &s).unwrap().verdict);
            assert!(is_primitive(&s).is_primitive());
        }
    }
}
