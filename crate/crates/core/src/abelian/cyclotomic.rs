use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_poly(n: u64) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Φ_d with d | n, d < n.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = div_exact(&num, &cyclotomic_poly(d));
        }
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(n, p.clone());
    p
}

fn div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    let qlen = num.len() - dd;
    let mut q = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd] / lead;
        q[k] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    let mut n0 = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n0 {
        if n0 % p == 0 {
            while n0 % p == 0 {
                n0 /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n0 > 1 {
        result -= result / n0;
    }
    result
}

/// Exact element of `Z[ζ_N]`, stored as its remainder modulo `Φ_N` in the
/// power basis `1, ζ, …, ζ^{φ(N)-1}`.
///
/// The representation is canonical, so equality is coefficient-wise.
/// Mixed-order arithmetic lifts both operands to the lcm of the orders.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicInt {
    order: u64,
    coeffs: Vec<BigInt>,
}

impl CyclotomicInt {
    pub fn zero(order: u64) -> Self {
        Self { order, coeffs: vec![BigInt::zero(); totient(order) as usize] }
    }

    pub fn from_int(order: u64, k: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = k.into();
        z
    }

    pub fn one(order: u64) -> Self {
        Self::from_int(order, 1)
    }

    /// `ζ_N^e`.
    pub fn root_of_unity(order: u64, e: i64) -> Self {
        let e = e.rem_euclid(order as i64) as usize;
        let mut poly = vec![BigInt::zero(); e + 1];
        poly[e] = BigInt::one();
        Self::from_poly(order, poly)
    }

    /// `Σ_e counts[e]·ζ_N^e`; `counts` may have any length.
    pub fn from_exponent_counts(order: u64, counts: &[i64]) -> Self {
        let n = order as usize;
        let mut folded = vec![0i64; n.max(1)];
        for (e, &c) in counts.iter().enumerate() {
            folded[e % n] += c;
        }
        Self::from_poly(order, folded.into_iter().map(BigInt::from).collect())
    }

    /// Reduces an arbitrary polynomial in `ζ_N` modulo `Φ_N`.
    pub fn from_poly(order: u64, mut poly: Vec<BigInt>) -> Self {
        let phi = cyclotomic_poly(order);
        let deg = phi.len() - 1;
        if poly.len() > deg {
            for k in (deg..poly.len()).rev() {
                if poly[k].is_zero() {
                    continue;
                }
                let c = std::mem::take(&mut poly[k]);
                // Φ_N is monic
                for (j, &pj) in phi[..deg].iter().enumerate() {
                    if pj != 0 {
                        poly[k - deg + j] -= &c * pj;
                    }
                }
            }
        }
        poly.resize(deg, BigInt::zero());
        Self { order, coeffs: poly }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Re-expresses the element in `Z[ζ_M]` for a multiple `M` of the order.
    pub fn lift(&self, order: u64) -> Self {
        assert!(order % self.order == 0, "cannot lift Z[ζ_{}] into Z[ζ_{order}]", self.order);
        if order == self.order {
            return self.clone();
        }
        let step = (order / self.order) as usize;
        let mut poly = vec![BigInt::zero(); step * self.coeffs.len().max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Self::from_poly(order, poly)
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        if a.order == b.order {
            (a.clone(), b.clone())
        } else {
            let m = a.order.lcm(&b.order);
            (a.lift(m), b.lift(m))
        }
    }

    /// Complex conjugation, the Galois action `ζ ↦ ζ^{N-1}`.
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut poly = vec![BigInt::zero(); n.max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[(n - i) % n] += c;
        }
        Self::from_poly(self.order, poly)
    }

    /// `z·conj(z) = |z|²`.
    pub fn norm(&self) -> Self {
        self * &self.conj()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self { order: self.order, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// The integer value when the reduced representative is constant.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Numerical value under `ζ_N = e^{2πi/N}`.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.order as f64;
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, c)| {
            let c = c.to_f64().unwrap_or(f64::NAN);
            let t = std::f64::consts::TAU * k as f64 / n;
            (re + c * t.cos(), im + c * t.sin())
        })
    }
}

/// `z·conj(z)`.
pub fn cyclo_norm(z: &CyclotomicInt) -> CyclotomicInt {
    z.norm()
}

/// Exact rational value of `z` when it lies in `Q`.
pub fn cyclo_as_rational(z: &CyclotomicInt) -> Option<BigRational> {
    z.as_integer().map(BigRational::from_integer)
}

impl Add for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn add(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        let (a, b) = CyclotomicInt::aligned(self, rhs);
        CyclotomicInt { order: a.order, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect() }
    }
}

impl Sub for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn sub(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        self + &(-rhs)
    }
}

impl Neg for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn neg(self) -> CyclotomicInt {
        CyclotomicInt { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn mul(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        let (a, b) = CyclotomicInt::aligned(self, rhs);
        let mut poly = vec![BigInt::zero(); (a.coeffs.len() * 2).saturating_sub(1).max(1)];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    poly[i + j] += x * y;
                }
            }
        }
        CyclotomicInt::from_poly(a.order, poly)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CyclotomicInt {
            type Output = CyclotomicInt;
            fn $m(self, rhs: CyclotomicInt) -> CyclotomicInt {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CyclotomicInt {
    type Output = CyclotomicInt;
    fn neg(self) -> CyclotomicInt {
        -&self
    }
}

impl fmt::Display for CyclotomicInt {
    /// Polynomial in `z = ζ_N`, e.g. `1 + z` or `-1 - 2z^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if k == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        for n in 1..60 {
            assert_eq!(cyclotomic_poly(n).len() as u64 - 1, totient(n));
        }
    }

    #[test]
    fn norm_examples() {
        // 1 + i has norm 2
        let z = &CyclotomicInt::one(4) + &CyclotomicInt::root_of_unity(4, 1);
        assert_eq!(cyclo_norm(&z).as_integer(), Some(BigInt::from(2)));
        assert_eq!(cyclo_norm(&CyclotomicInt::zero(7)).as_integer(), Some(BigInt::zero()));
        let w = CyclotomicInt::root_of_unity(3, 1);
        assert_eq!(cyclo_as_rational(&cyclo_norm(&w)), Some(BigRational::from_integer(1.into())));
        // 1 + ζ_5 has irrational norm
        let v = &CyclotomicInt::one(5) + &CyclotomicInt::root_of_unity(5, 1);
        assert!(cyclo_as_rational(&v.norm()).is_none());
    }

    #[test]
    fn roots_of_unity_multiply() {
        for n in [1u64, 2, 3, 4, 8, 9, 12] {
            for a in 0..n as i64 {
                for b in 0..n as i64 {
                    let lhs = &CyclotomicInt::root_of_unity(n, a) * &CyclotomicInt::root_of_unity(n, b);
                    assert_eq!(lhs, CyclotomicInt::root_of_unity(n, a + b));
                }
            }
            // 1 + ζ + … + ζ^{n-1} = 0 for n > 1
            let s = CyclotomicInt::from_exponent_counts(n, &vec![1; n as usize]);
            assert_eq!(s.is_zero(), n > 1);
        }
    }

    #[test]
    fn lift_is_consistent() {
        let z = CyclotomicInt::root_of_unity(4, 1);
        assert_eq!(z.lift(8), CyclotomicInt::root_of_unity(8, 2));
        let w = CyclotomicInt::root_of_unity(6, 1);
        let s = &z + &w;
        assert_eq!(s.order(), 12);
        let (re, im) = s.to_complex();
        assert!((re - 0.5).abs() < 1e-12 && (im - (1.0 + 3f64.sqrt() / 2.0)).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn ring_axioms(
            n in prop::sample::select(vec![3u64, 4, 5, 8, 9, 12, 15]),
            va in prop::collection::vec(-20i64..20, 15),
            vb in prop::collection::vec(-20i64..20, 15),
            vc in prop::collection::vec(-20i64..20, 15),
        ) {
            let k = n as usize;
            let a = CyclotomicInt::from_exponent_counts(n, &va[..k]);
            let b = CyclotomicInt::from_exponent_counts(n, &vb[..k]);
            let c = CyclotomicInt::from_exponent_counts(n, &vc[..k]);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a - &a, CyclotomicInt::zero(n));
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            // |z|² is fixed by conjugation and agrees numerically
            let nrm = a.norm();
            prop_assert_eq!(nrm.conj(), nrm.clone());
            let (re, im) = a.to_complex();
            let (nre, nim) = nrm.to_complex();
            prop_assert!((nre - (re * re + im * im)).abs() < 1e-6 * (1.0 + nre.abs()));
            prop_assert!(nim.abs() < 1e-6 * (1.0 + nre.abs()));
        }
    }
}
