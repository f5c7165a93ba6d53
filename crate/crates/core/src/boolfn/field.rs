use std::fmt;

use crate::abelian::{Group, Pairing};
use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 20;

/// Default modulus for each degree `1..=20`, bit `k` holding the coefficient
/// of `x^k`. Each is primitive, so `x` generates the multiplicative group.
pub const DEFAULT_POLYS: [u64; 20] = [
    0b11, 0b111, 0b1011, 0x13, 0x25, 0x43, 0x83, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
    0x20009, 0x40081, 0x80027, 0x100009,
];

/// Carry-less product of two polynomials over `F_2`.
fn clmul(a: u64, b: u64) -> u64 {
    let mut r = 0;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    r
}

fn degree(a: u64) -> i32 {
    63 - a.leading_zeros() as i32
}

fn poly_mod(mut a: u64, f: u64) -> u64 {
    let df = degree(f);
    while a != 0 && degree(a) >= df {
        a ^= f << (degree(a) - df);
    }
    a
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_mod(a, b);
        a = b;
        b = r;
    }
    a
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for `f` of degree `n` over `F_2`.
pub fn is_irreducible(f: u64) -> bool {
    let n = degree(f);
    if n < 1 {
        return false;
    }
    let n = n as u32;
    // x^(2^k) mod f
    let frob = |k: u32| {
        let mut y = poly_mod(0b10, f);
        for _ in 0..k {
            y = poly_mod(clmul(y, y), f);
        }
        y
    };
    if frob(n) != poly_mod(0b10, f) {
        return false;
    }
    prime_factors(n as u64).into_iter().all(|q| poly_gcd(f, frob(n / q as u32) ^ 0b10) == 1)
}

/// `F_{2^n}` as `F_2[x]/(f)` with log, antilog and trace tables.
///
/// An element is stored as the integer whose bit `j` is the coefficient of
/// `x^j`. That integer is also its index in the additive group `Z_2^n`,
/// whose first coordinate is the most significant bit.
#[derive(Debug, Clone)]
pub struct BinaryField {
    n: u32,
    poly: u64,
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `trace_mask[a]` has bit `j` equal to `Tr(a·x^j)`, so that
    /// `Tr(a·y) = parity(trace_mask[a] & y)`.
    trace_mask: Vec<u32>,
}

impl BinaryField {
    /// The field with the default modulus for degree `n`.
    pub fn new(n: u32) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&n) {
            return Err(Error::Capacity(format!("degree {n} outside 1..={MAX_DEGREE}")));
        }
        Self::with_poly(n, DEFAULT_POLYS[n as usize - 1])
    }

    /// The field `F_2[x]/(poly)`; `poly` must be irreducible of degree `n`.
    pub fn with_poly(n: u32, poly: u64) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&n) {
            return Err(Error::Capacity(format!("degree {n} outside 1..={MAX_DEGREE}")));
        }
        if degree(poly) != n as i32 {
            return Err(Error::Domain(format!("modulus {poly:#b} does not have degree {n}")));
        }
        if !is_irreducible(poly) {
            return Err(Error::Domain(format!("modulus {poly:#b} is reducible")));
        }
        let size = 1usize << n;
        let mulmod = |a: u64, b: u64| poly_mod(clmul(a, b), poly);
        let order = (size - 1) as u64;
        let factors = prime_factors(order);
        let pow = |mut g: u64, mut e: u64| {
            let mut r = 1u64;
            while e > 0 {
                if e & 1 == 1 {
                    r = mulmod(r, g);
                }
                g = mulmod(g, g);
                e >>= 1;
            }
            r
        };
        let generator = (2..size as u64).find(|&g| factors.iter().all(|&q| pow(g, order / q) != 1)).unwrap_or(1);
        let mut exp = vec![0u32; size];
        let mut log = vec![0u32; size];
        let mut x = 1u64;
        for (k, slot) in exp.iter_mut().enumerate().take(size - 1) {
            *slot = x as u32;
            log[x as usize] = k as u32;
            x = mulmod(x, generator);
        }
        exp[size - 1] = 1;
        let mut field = BinaryField { n, poly, exp, log, trace_mask: Vec::new() };
        let basis_trace: Vec<u32> = (0..n).map(|j| field.trace_slow(1 << j)).collect();
        let mut mask = vec![0u32; size];
        for a in 1..size {
            let low = a & a.wrapping_neg();
            let k = low.trailing_zeros();
            let mut m = 0u32;
            for j in 0..n {
                let prod = field.mul(1 << k, 1 << j);
                if field.trace_from_basis(prod, &basis_trace) == 1 {
                    m |= 1 << j;
                }
            }
            mask[a] = mask[a ^ low] ^ m;
        }
        field.trace_mask = mask;
        Ok(field)
    }

    /// Parses `"n=3"` or `"n=3,poly=0b1011"` (poly also in hex or decimal).
    pub fn parse(spec: &str) -> Result<Self> {
        let mut n = None;
        let mut poly = None;
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value in field spec, got {part:?}")))?;
            match key.trim() {
                "n" => {
                    n = Some(value.trim().parse::<u32>().map_err(|e| Error::Parse(format!("degree {value:?}: {e}")))?)
                }
                "poly" => poly = Some(parse_poly_literal(value.trim())?),
                other => return Err(Error::Parse(format!("unknown field spec key {other:?}"))),
            }
        }
        let n = n.ok_or_else(|| Error::Parse("field spec needs n=".into()))?;
        match poly {
            Some(p) => Self::with_poly(n, p),
            None => Self::new(n),
        }
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> usize {
        1 << self.n
    }

    /// Modulus with bit `k` the coefficient of `x^k`.
    pub fn modulus(&self) -> u64 {
        self.poly
    }

    /// `Z_2^n`, the additive group in matching index layout.
    pub fn additive_group(&self) -> Group {
        Group::elementary(2, self.n as usize).expect("degree is within capacity")
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] as usize + self.log[b as usize] as usize;
        self.exp[s % (self.size() - 1)]
    }

    /// `a^e` for any integer `e`; `0^e` is `0` for `e ≠ 0` and `1` for `e = 0`.
    /// Negative exponents of `0` are an error.
    pub fn pow(&self, a: u32, e: i64) -> Result<u32> {
        if a == 0 {
            return match e {
                0 => Ok(1),
                e if e > 0 => Ok(0),
                _ => Err(Error::Domain("zero has no inverse".into())),
            };
        }
        let order = (self.size() - 1) as i64;
        let l = (self.log[a as usize] as i64 * e.rem_euclid(order)).rem_euclid(order);
        Ok(self.exp[l as usize])
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        self.pow(a, -1)
    }

    /// `a^(2^k)`.
    pub fn frobenius(&self, a: u32, k: u32) -> u32 {
        let mut y = a;
        for _ in 0..(k % self.n) {
            y = self.mul(y, y);
        }
        y
    }

    /// Absolute trace `a + a² + … + a^(2^(n-1))`.
    pub fn trace(&self, a: u32) -> u32 {
        (self.trace_mask[1] & a).count_ones() & 1
    }

    /// Mask `m` with `Tr(a·y) = parity(m & y)` for all `y`.
    pub fn trace_mask(&self, a: u32) -> u32 {
        self.trace_mask[a as usize]
    }

    fn trace_slow(&self, a: u32) -> u32 {
        let mut acc = 0;
        let mut y = a;
        for _ in 0..self.n {
            acc ^= y;
            y = self.mul(y, y);
        }
        debug_assert!(acc <= 1, "trace lies in the prime field");
        acc
    }

    fn trace_from_basis(&self, a: u32, basis_trace: &[u32]) -> u32 {
        (0..self.n).filter(|&j| a >> j & 1 == 1).map(|j| basis_trace[j as usize]).sum::<u32>() & 1
    }

    /// Trace pairing `⟨(x,y),(a,b)⟩ = (−1)^Tr(ax+by)` on `Z_2^(2n)`.
    pub fn trace_pairing(&self) -> Pairing {
        let n = self.n as usize;
        let group = Group::elementary(2, 2 * n).expect("doubled degree is within capacity");
        let mut m = vec![vec![0i64; 2 * n]; 2 * n];
        for p in 0..n {
            for q in 0..n {
                let (j, k) = (n - 1 - p, n - 1 - q);
                let t = self.trace(self.mul(1 << j, 1 << k)) as i64;
                m[p][q] = t;
                m[n + p][n + q] = t;
            }
        }
        Pairing::new(&group, m).expect("trace form is well defined")
    }

    /// Polynomial literal in the field generator `a`, e.g. `a^2 + a + 1`.
    pub fn element_literal(&self, x: u32) -> String {
        if x == 0 {
            return "0".into();
        }
        let terms: Vec<String> = (0..self.n)
            .rev()
            .filter(|&j| x >> j & 1 == 1)
            .map(|j| match j {
                0 => "1".into(),
                1 => "a".into(),
                _ => format!("a^{j}"),
            })
            .collect();
        terms.join(" + ")
    }
}

impl PartialEq for BinaryField {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.poly == other.poly
    }
}

impl Eq for BinaryField {}

impl fmt::Display for BinaryField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={},poly={:#b}", self.n, self.poly)
    }
}

fn parse_poly_literal(s: &str) -> Result<u64> {
    let parsed = if let Some(b) = s.strip_prefix("0b") {
        u64::from_str_radix(b, 2)
    } else if let Some(h) = s.strip_prefix("0x") {
        u64::from_str_radix(h, 16)
    } else {
        s.parse::<u64>()
    };
    parsed.map_err(|e| Error::Parse(format!("polynomial {s:?}: {e}")))
}
