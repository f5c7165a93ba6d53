use std::fmt;

use crate::abelian::{CyclotomicInt, Group, GroupElement, Pairing};
use crate::error::{Error, Result};

/// Largest field size tabulated by [`OddField`].
pub const MAX_FIELD_SIZE: usize = 2048;

/// `F_{p^m}` for odd `p`, as `F_p[x]/(f)` with tabulated logarithms.
///
/// Elements share the layout of the additive group `Z_p^m`: coordinate `j`
/// is the coefficient of `x^j`, so element indices agree with
/// [`OddField::additive_group`].
#[derive(Debug, Clone)]
pub struct OddField {
    p: u32,
    m: usize,
    /// Monic modulus `c_0 + c_1 x + … + c_{m-1} x^{m-1} + x^m`, low first.
    poly: Vec<u32>,
    group: Group,
    exp: Vec<usize>,
    log: Vec<usize>,
    trace: Vec<u32>,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Remainder of `a` modulo the monic `f` over `F_p`, coefficients low first.
fn poly_rem(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let df = f.len() - 1;
    let p = p as u64;
    for d in (df..r.len()).rev() {
        let t = r[d] % p;
        if t == 0 {
            continue;
        }
        for (k, &fk) in f.iter().enumerate() {
            let idx = d - df + k;
            r[idx] = (r[idx] + (p - t) * fk as u64) % p;
        }
    }
    r.truncate(df);
    r.iter().map(|&c| (c % p) as u32).collect()
}

/// Monic polynomial of degree `d` from a counter, low coefficients first.
///
/// The lowest coefficient varies slowest, so counters enumerate
/// `(c_0, …, c_{d-1})` lexicographically.
fn monic_from_counter(mut k: usize, d: usize, p: u32) -> Vec<u32> {
    let mut coeffs = vec![0u32; d + 1];
    coeffs[d] = 1;
    for j in (0..d).rev() {
        coeffs[j] = (k % p as usize) as u32;
        k /= p as usize;
    }
    coeffs
}

/// True iff the monic `f` has no monic factor of degree `1..=deg/2`.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    for fd in 1..=d / 2 {
        for k in 0..(p as usize).pow(fd as u32) {
            let g = monic_from_counter(k, fd, p);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically first monic irreducible of degree `m` in `(c_0, …, c_{m-1})`.
pub fn default_irreducible(p: u32, m: usize) -> Vec<u32> {
    (0..(p as usize).pow(m as u32))
        .map(|k| monic_from_counter(k, m, p))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

impl OddField {
    /// `F_{p^m}` with the default modulus.
    pub fn new(p: u32, m: usize) -> Result<Self> {
        Self::check_params(p, m)?;
        Self::with_poly(p, m, default_irreducible(p, m))
    }

    fn check_params(p: u32, m: usize) -> Result<()> {
        if !is_prime(p) || p == 2 {
            return Err(Error::Domain(format!("characteristic {p} is not an odd prime")));
        }
        if m == 0 {
            return Err(Error::Domain("field degree must be at least 1".into()));
        }
        let q = (p as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
        if q > MAX_FIELD_SIZE as u128 {
            return Err(Error::Capacity(format!("field of size {p}^{m} exceeds {MAX_FIELD_SIZE}")));
        }
        Ok(())
    }

    /// `F_{p^m}` with the given monic modulus (low coefficients first, the
    /// leading 1 included).
    pub fn with_poly(p: u32, m: usize, poly: Vec<u32>) -> Result<Self> {
        Self::check_params(p, m)?;
        if poly.len() != m + 1 || poly[m] != 1 || poly.iter().any(|&c| c >= p) {
            return Err(Error::Domain(format!("modulus must be monic of degree {m} over F_{p}")));
        }
        if !is_irreducible(&poly, p) {
            return Err(Error::Domain(format!("modulus {poly:?} is reducible over F_{p}")));
        }
        let group = Group::elementary(p, m)?;
        let q = group.order();
        let mut field = Self { p, m, poly, group, exp: Vec::new(), log: vec![0; q], trace: Vec::new() };
        let generator = (1..q)
            .find(|&g| field.slow_order(g) == q - 1)
            .ok_or_else(|| Error::Inconsistent("no primitive element found".into()))?;
        let mut exp = Vec::with_capacity(q - 1);
        let mut x = field.one();
        for k in 0..q - 1 {
            exp.push(x);
            field.log[x] = k;
            x = field.slow_mul(x, generator);
        }
        field.exp = exp;
        field.trace = (0..q).map(|a| field.compute_trace(a)).collect();
        Ok(field)
    }

    fn coeffs(&self, a: usize) -> Vec<u32> {
        self.group.element_at(a).0
    }

    fn from_coeffs(&self, c: &[u32]) -> usize {
        self.group.index_of(&GroupElement(c.to_vec()))
    }

    fn slow_mul(&self, a: usize, b: usize) -> usize {
        let (ca, cb) = (self.coeffs(a), self.coeffs(b));
        let mut prod = vec![0u32; 2 * self.m - 1];
        for (i, &x) in ca.iter().enumerate() {
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % self.p as u64) as u32;
            }
        }
        let mut r = poly_rem(&prod, &self.poly, self.p);
        r.resize(self.m, 0);
        self.from_coeffs(&r)
    }

    fn slow_order(&self, g: usize) -> usize {
        let one = self.one();
        let mut x = g;
        let mut k = 1;
        while x != one {
            x = self.slow_mul(x, g);
            k += 1;
            if k > self.size() {
                return 0;
            }
        }
        k
    }

    fn compute_trace(&self, a: usize) -> u32 {
        let mut acc = 0usize;
        let mut x = a;
        for _ in 0..self.m {
            acc = self.add(acc, x);
            x = self.pow(x, self.p as u64);
        }
        let c = self.coeffs(acc);
        debug_assert!(c[1..].iter().all(|&v| v == 0));
        c[0]
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn size(&self) -> usize {
        self.group.order()
    }

    pub fn modulus(&self) -> &[u32] {
        &self.poly
    }

    /// Additive group `Z_p^m` sharing the element layout.
    pub fn additive_group(&self) -> &Group {
        &self.group
    }

    pub fn zero(&self) -> usize {
        0
    }

    /// Constant `c ∈ F_p` as a field element.
    pub fn constant(&self, c: i64) -> usize {
        let mut v = vec![0u32; self.m];
        v[0] = c.rem_euclid(self.p as i64) as u32;
        self.from_coeffs(&v)
    }

    pub fn one(&self) -> usize {
        self.constant(1)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.group.add_idx(a, b)
    }

    pub fn neg(&self, a: usize) -> usize {
        self.group.neg_idx(a)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.size() - 1;
        self.exp[(self.log[a] + self.log[b]) % n]
    }

    pub fn pow(&self, a: usize, e: u64) -> usize {
        if a == 0 {
            return if e == 0 { self.one() } else { 0 };
        }
        let n = (self.size() - 1) as u64;
        self.exp[((self.log[a] as u64 * (e % n)) % n) as usize]
    }

    pub fn inv(&self, a: usize) -> Result<usize> {
        if a == 0 {
            return Err(Error::Domain("zero has no inverse".into()));
        }
        let n = self.size() - 1;
        Ok(self.exp[(n - self.log[a]) % n])
    }

    /// `c·a` for `c ∈ Z_p`, i.e. the group scalar action.
    pub fn scalar_mul(&self, c: i64, a: usize) -> usize {
        self.mul(self.constant(c), a)
    }

    /// Absolute trace `Tr(a) ∈ F_p`.
    pub fn trace(&self, a: usize) -> u32 {
        self.trace[a]
    }

    /// Quadratic character: `1` on nonzero squares, `-1` on nonsquares, `0` at 0.
    pub fn eta(&self, a: usize) -> i32 {
        if a == 0 {
            0
        } else if self.log[a] % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Pairing `⟨a,b⟩ = ζ_p^{Tr(ab)}` on `Z_p^m`, with `B_jk = Tr(x^{j+k})`.
    pub fn trace_pairing(&self) -> Pairing {
        let basis: Vec<usize> = (0..self.m)
            .map(|j| {
                let mut v = vec![0u32; self.m];
                v[j] = 1;
                self.from_coeffs(&v)
            })
            .collect();
        let matrix =
            basis.iter().map(|&a| basis.iter().map(|&b| self.trace(self.mul(a, b)) as i64).collect()).collect();
        Pairing::new(&self.group, matrix).expect("trace form is well defined on Z_p^m")
    }

    /// `Σ_x ζ_p^{Tr(a·x²)}` exactly.
    pub fn gauss_sum(&self, a: usize) -> CyclotomicInt {
        let mut counts = vec![0i64; self.p as usize];
        for x in 0..self.size() {
            counts[self.trace(self.mul(a, self.mul(x, x))) as usize] += 1;
        }
        CyclotomicInt::from_exponent_counts(self.p as u64, &counts)
    }

    /// The element `i√q` of `Z[ζ_p]` for `q = p^m ≡ 3 (mod 4)`: the root of
    /// `z² = −q` with positive imaginary part, taken from the Gauss sum.
    pub fn i_sqrt_q(&self) -> Result<CyclotomicInt> {
        let q = self.size() as i64;
        if q % 4 != 3 {
            return Err(Error::Domain(format!("q = {q} is not 3 mod 4")));
        }
        let g = self.gauss_sum(self.one());
        if &g * &g != CyclotomicInt::from_int(self.p as u64, -q) {
            return Err(Error::Inconsistent("quadratic Gauss sum does not square to -q".into()));
        }
        Ok(if g.to_complex().1 > 0.0 { g } else { -g })
    }
}

impl fmt::Display for OddField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .poly
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".into(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        write!(f, "F_{}^{} mod {}", self.p, self.m, terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_polynomials() {
        assert_eq!(default_irreducible(3, 3), vec![1, 0, 2, 1]);
        assert_eq!(default_irreducible(7, 1), vec![0, 1]);
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[1, 0, 1], 5));
        assert_eq!(OddField::new(3, 3).unwrap().to_string(), "F_3^3 mod x^3 + 2x^2 + 1");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(OddField::new(2, 3).is_err());
        assert!(OddField::new(9, 1).is_err());
        assert!(matches!(OddField::new(3, 7), Err(Error::Capacity(_))));
        assert!(OddField::with_poly(3, 2, vec![2, 0, 1]).is_err());
    }

    #[test]
    fn field_axioms_spot_check() {
        for (p, m) in [(3, 1), (7, 1), (3, 2), (3, 3), (5, 2), (11, 1)] {
            let f = OddField::new(p, m).unwrap();
            let q = f.size();
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.mul(a, b), f.slow_mul(a, b));
                    let c = (a * 7 + b * 3) % q;
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
            }
            // trace is onto F_p and F_p-linear
            let mut hit = vec![false; p as usize];
            for a in 0..q {
                hit[f.trace(a) as usize] = true;
            }
            assert!(hit.iter().all(|&h| h));
        }
    }

    #[test]
    fn quadratic_residues() {
        let f = OddField::new(7, 1).unwrap();
        let squares: Vec<usize> = (1..7).filter(|&a| f.eta(a) == 1).collect();
        assert_eq!(squares, vec![1, 2, 4]);
    }

    #[test]
    fn gauss_sums() {
        for (p, m) in [(3, 1), (7, 1), (11, 1), (3, 3)] {
            let f = OddField::new(p, m).unwrap();
            let q = f.size() as i64;
            let isq = f.i_sqrt_q().unwrap();
            let sign = if (m - 1) / 2 % 2 == 0 { 1 } else { -1 };
            // the classical evaluation: G = (-1)^{m-1} i^m √q
            assert_eq!(f.gauss_sum(f.one()), isq.scale(&sign.into()));
            for a in 1..f.size() {
                let g = f.gauss_sum(a);
                assert_eq!(g.norm(), CyclotomicInt::from_int(p as u64, q));
                assert_eq!(g, f.gauss_sum(f.one()).scale(&f.eta(a).into()));
            }
        }
    }

    #[test]
    fn trace_pairing_nondegenerate() {
        for (p, m) in [(3, 1), (3, 2), (3, 3), (5, 2)] {
            let f = OddField::new(p, m).unwrap();
            let tp = f.trace_pairing();
            assert!(tp.is_nondegenerate());
            assert!(tp.is_symmetric());
            let g = f.additive_group();
            for a in 0..f.size() {
                for b in 0..f.size() {
                    let e = tp.exponent_of(&g.element_at(a), &g.element_at(b));
                    assert_eq!(e as u32, f.trace(f.mul(a, b)));
                }
            }
        }
    }
}
