//! Codes as explicit word lists: weight and distance enumerators, the
//! MacWilliams transform, the Gray map and `Z_4`-linear codes.
//!
//! A code over `F_p`, `Z_4` or `F_{2^k}` of length `n` is also a subset of an
//! abelian group (`Z_p^n`, `Z_4^n` or `Z_2^{kn}`), which is how the set-level
//! duality checks see it.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::abelian::{CyclotomicInt, Group};
use crate::boolfn::BinaryField;
use crate::duality::{weight_enumerator, SetInGroup};
use crate::error::{Error, Result};

/// Largest ambient space `q^n` scanned by the exhaustive character sums.
pub const MAX_AMBIENT: usize = 1 << 20;

/// Symbol alphabet of a code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Alphabet {
    /// `F_p`, `p` prime.
    Prime(u32),
    /// The ring `Z_4`.
    Z4,
    /// `F_{2^k}` with its default modulus; symbols are field element indices.
    Binary(Arc<BinaryField>),
}

impl Alphabet {
    pub fn prime(p: u32) -> Result<Self> {
        if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        Ok(Alphabet::Prime(p))
    }

    pub fn binary(k: u32) -> Result<Self> {
        Ok(Alphabet::Binary(Arc::new(BinaryField::new(k)?)))
    }

    /// Parses `F3`, `Z4` or `F2^3`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Z4" {
            return Ok(Alphabet::Z4);
        }
        if let Some(k) = s.strip_prefix("F2^") {
            let k = k.parse::<u32>().map_err(|e| Error::Parse(format!("alphabet {s:?}: {e}")))?;
            return Self::binary(k);
        }
        if let Some(p) = s.strip_prefix('F') {
            let p = p.parse::<u32>().map_err(|e| Error::Parse(format!("alphabet {s:?}: {e}")))?;
            return Self::prime(p);
        }
        Err(Error::Parse(format!("unknown alphabet {s:?}; expected F<p>, Z4 or F2^<k>")))
    }

    /// Number of symbols.
    pub fn q(&self) -> u32 {
        match self {
            Alphabet::Prime(p) => *p,
            Alphabet::Z4 => 4,
            Alphabet::Binary(f) => f.size() as u32,
        }
    }

    fn reduce(&self, s: i64) -> Result<u32> {
        match self {
            Alphabet::Binary(f) if s < 0 || s as usize >= f.size() => {
                Err(Error::Domain(format!("symbol {s} is not an element of F_{}", f.size())))
            }
            _ => Ok(s.rem_euclid(self.q() as i64) as u32),
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::Prime(p) => write!(f, "F{p}"),
            Alphabet::Z4 => write!(f, "Z4"),
            Alphabet::Binary(b) => write!(f, "F2^{}", b.degree()),
        }
    }
}

/// A duplicate-free list of words of one length over one alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSet {
    alphabet: Alphabet,
    length: usize,
    words: Vec<Vec<u32>>,
}

impl CodeSet {
    /// Symbols are reduced into the alphabet; duplicate words are an error.
    pub fn new(alphabet: Alphabet, length: usize, words: Vec<Vec<i64>>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(words.len());
        for w in words {
            if w.len() != length {
                return Err(Error::Dimension(format!("word of length {} in a code of length {length}", w.len())));
            }
            let r = w.iter().map(|&s| alphabet.reduce(s)).collect::<Result<Vec<u32>>>()?;
            if !seen.insert(r.clone()) {
                return Err(Error::Domain(format!("duplicate word {r:?}")));
            }
            out.push(r);
        }
        if out.is_empty() {
            return Err(Error::Domain("a code needs at least one word".into()));
        }
        Ok(CodeSet { alphabet, length, words: out })
    }

    /// `{0…0}` of the given length.
    pub fn zero(alphabet: Alphabet, length: usize) -> Self {
        CodeSet { alphabet, length, words: vec![vec![0; length]] }
    }

    /// Parses one word per line, symbols separated by spaces or commas.
    ///
    /// The alphabet is `alphabet` when given, else an `# alphabet=…` line,
    /// else the smallest prime above every symbol that also leaves room for
    /// negative symbols as symmetric residues.
    pub fn parse(text: &str, alphabet: Option<Alphabet>) -> Result<Self> {
        let mut directive = None;
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(a) = comment.trim().strip_prefix("alphabet=") {
                    directive = Some(Alphabet::parse(a)?);
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<i64>().map_err(|e| Error::Parse(format!("symbol {t:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        let length = rows.first().map(Vec::len).ok_or_else(|| Error::Parse("code file has no words".into()))?;
        let alphabet = match alphabet.or(directive) {
            Some(a) => a,
            None => {
                let max_pos = rows.iter().flatten().copied().max().unwrap_or(0).max(0);
                let max_neg = rows.iter().flatten().map(|&s| (-s).max(0)).max().unwrap_or(0);
                let floor = max_pos.max(2 * max_neg) as u32;
                let p = (floor + 1..).find(|&p| Alphabet::prime(p).is_ok()).expect("primes are unbounded");
                Alphabet::Prime(p)
            }
        };
        CodeSet::new(alphabet, length, rows)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn words(&self) -> &[Vec<u32>] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Image under a map on words; the result must stay duplicate-free.
    pub fn map_words(&self, f: impl Fn(&[u32]) -> Vec<i64>) -> Result<Self> {
        CodeSet::new(self.alphabet.clone(), self.length, self.words.iter().map(|w| f(w)).collect())
    }

    /// The ambient group and the code as a subset of it.
    ///
    /// Coordinates keep their order; an `F_{2^k}` symbol expands to `k` bits,
    /// most significant first.
    pub fn as_set(&self) -> Result<SetInGroup> {
        let group = match &self.alphabet {
            Alphabet::Prime(p) => Group::elementary(*p, self.length)?,
            Alphabet::Z4 => Group::elementary(4, self.length)?,
            Alphabet::Binary(f) => Group::elementary(2, self.length * f.degree() as usize)?,
        };
        let radix = self.alphabet.q() as usize;
        let idx = self.words.iter().map(|w| w.iter().fold(0usize, |acc, &s| acc * radix + s as usize)).collect();
        SetInGroup::from_indices(&group, idx)
    }

    fn ambient_size(&self) -> Result<usize> {
        (self.alphabet.q() as usize).checked_pow(self.length as u32).filter(|&s| s <= MAX_AMBIENT).ok_or_else(|| {
            Error::Capacity(format!("ambient space {}^{} exceeds {MAX_AMBIENT}", self.alphabet.q(), self.length))
        })
    }
}

impl fmt::Display for CodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# alphabet={}", self.alphabet)?;
        for w in &self.words {
            let syms: Vec<String> = w.iter().map(u32::to_string).collect();
            writeln!(f, "{}", syms.join(" "))?;
        }
        Ok(())
    }
}

fn weight(w: &[u32]) -> usize {
    w.iter().filter(|&&s| s != 0).count()
}

fn distance(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// `Σ_w A_w X^(n−w) Y^w` with exact rational `A_w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EnumeratorPoly {
    coeffs: Vec<BigRational>,
}

impl EnumeratorPoly {
    pub fn new(coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Dimension("an enumerator needs A_0".into()));
        }
        Ok(EnumeratorPoly { coeffs })
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        EnumeratorPoly { coeffs: coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect() }
    }

    /// Length `n`, the total degree.
    pub fn length(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// `A_0 A_1 … A_n`, rationals as `p/q`.
    pub fn coefficient_line(&self) -> String {
        self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
    }
}

impl fmt::Display for EnumeratorPoly {
    /// Polynomial form, e.g. `X^4 + (4/3)X^3Y + 4XY^3 + (8/3)Y^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.length();
        let power = |v: &str, e: usize| match e {
            0 => String::new(),
            1 => v.to_string(),
            _ => format!("{v}^{e}"),
        };
        let mut out = String::new();
        for (w, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = format!("{}{}", power("X", n - w), power("Y", w));
            let mag = c.abs();
            let coef = if mag.is_one() && !mono.is_empty() {
                String::new()
            } else if mag.is_integer() {
                mag.to_string()
            } else {
                format!("({mag})")
            };
            let sign = if c.is_negative() { "-" } else { "+" };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            out.push_str(&coef);
            out.push_str(&mono);
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "{out}")
    }
}

/// `W_C`: `A_w` counts the words of weight `w`.
pub fn weight_enumerator_poly(c: &CodeSet) -> EnumeratorPoly {
    let mut counts = vec![0i64; c.length + 1];
    for w in &c.words {
        counts[weight(w)] += 1;
    }
    EnumeratorPoly::from_integers(&counts)
}

/// `D_C = (1/|C|) Σ_{c_1,c_2} X^(n−d) Y^d`.
pub fn distance_enumerator_poly(c: &CodeSet) -> EnumeratorPoly {
    let mut counts = vec![0i64; c.length + 1];
    for a in &c.words {
        for b in &c.words {
            counts[distance(a, b)] += 1;
        }
    }
    let size = BigInt::from(c.len());
    EnumeratorPoly { coeffs: counts.into_iter().map(|k| BigRational::new(BigInt::from(k), size.clone())).collect() }
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `(1/size)·E(X + (q−1)Y, X − Y)`, expanded exactly.
pub fn macwilliams_transform(e: &EnumeratorPoly, q: u32, size: &BigRational) -> Result<EnumeratorPoly> {
    if q < 2 {
        return Err(Error::Domain(format!("alphabet size {q} < 2")));
    }
    if !size.is_positive() {
        return Err(Error::Domain("size must be positive".into()));
    }
    let n = e.length();
    let qm1 = BigInt::from(q - 1);
    let mut out = vec![BigRational::zero(); n + 1];
    for (w, a) in e.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for i in 0..=n - w {
            let left = binomial(n - w, i) * qm1.pow(i as u32);
            for k in 0..=w {
                let right = binomial(w, k) * if k % 2 == 0 { 1 } else { -1 };
                out[i + k] += a * BigRational::from_integer(&left * right);
            }
        }
    }
    Ok(EnumeratorPoly { coeffs: out.into_iter().map(|c| c / size).collect() })
}

/// Whether `C, C'` have dual weight and dual distance enumerators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CodeDuality {
    pub weight_dual: bool,
    pub distance_dual: bool,
}

impl CodeDuality {
    pub fn formal_dual_codes(&self) -> bool {
        self.weight_dual && self.distance_dual
    }
}

pub fn formal_dual_codes_check(c: &CodeSet, c2: &CodeSet) -> Result<CodeDuality> {
    if c.length != c2.length || c.alphabet.q() != c2.alphabet.q() {
        return Err(Error::Dimension("codes differ in length or alphabet size".into()));
    }
    let q = c.alphabet.q();
    let size = BigRational::from_integer(BigInt::from(c.len()));
    let weight_dual = macwilliams_transform(&weight_enumerator_poly(c), q, &size)? == weight_enumerator_poly(c2);
    let distance_dual = macwilliams_transform(&distance_enumerator_poly(c), q, &size)? == distance_enumerator_poly(c2);
    Ok(CodeDuality { weight_dual, distance_dual })
}

/// Gray image of a `Z_4` word: `0→00, 1→01, 2→11, 3→10`, with all first bits
/// followed by all second bits.
pub fn gray_map(w: &[u32]) -> Vec<u32> {
    let pair = |s: u32| match s % 4 {
        0 => (0, 0),
        1 => (0, 1),
        2 => (1, 1),
        _ => (1, 0),
    };
    let (first, second): (Vec<u32>, Vec<u32>) = w.iter().map(|&s| pair(s)).unzip();
    first.into_iter().chain(second).collect()
}

/// `φ(C)` as a binary code of doubled length.
pub fn gray_image(c: &CodeSet) -> Result<CodeSet> {
    if c.alphabet != Alphabet::Z4 {
        return Err(Error::Domain("the Gray map applies to Z4 codes".into()));
    }
    let words = c.words.iter().map(|w| gray_map(w).into_iter().map(i64::from).collect()).collect();
    CodeSet::new(Alphabet::Prime(2), 2 * c.length, words)
}

/// All `Z_4`-linear combinations of `generators`, in breadth-first order
/// from the zero word.
pub fn z4_span(generators: &[Vec<i64>], length: usize) -> Result<CodeSet> {
    let gens = generators
        .iter()
        .map(|g| {
            if g.len() != length {
                return Err(Error::Dimension(format!("generator of length {} for length {length}", g.len())));
            }
            Ok(g.iter().map(|&s| s.rem_euclid(4) as u32).collect::<Vec<u32>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let zero = vec![0u32; length];
    let mut seen: HashSet<Vec<u32>> = HashSet::from([zero.clone()]);
    let mut words = vec![zero];
    let mut head = 0;
    while head < words.len() {
        let w = words[head].clone();
        head += 1;
        for g in &gens {
            let next: Vec<u32> = w.iter().zip(g).map(|(a, b)| (a + b) % 4).collect();
            if seen.insert(next.clone()) {
                words.push(next);
            }
        }
    }
    Ok(CodeSet { alphabet: Alphabet::Z4, length, words })
}

/// `{x ∈ Z_4^n : x·c = 0 for all c ∈ C}`, by exhaustion.
pub fn z4_dual(c: &CodeSet) -> Result<CodeSet> {
    if c.alphabet != Alphabet::Z4 {
        return Err(Error::Domain("z4_dual needs a Z4 code".into()));
    }
    let total = c.ambient_size()?;
    let n = c.length;
    let words = (0..total)
        .map(|mut idx| {
            let mut x = vec![0u32; n];
            for slot in x.iter_mut().rev() {
                *slot = (idx % 4) as u32;
                idx /= 4;
            }
            x
        })
        .filter(|x| c.words.iter().all(|w| x.iter().zip(w).map(|(a, b)| a * b).sum::<u32>() % 4 == 0))
        .collect();
    Ok(CodeSet { alphabet: Alphabet::Z4, length: n, words })
}

/// Iterates over all `x ∈ A^n` together with `|Σ_{c∈C} χ_x(c)|²`, where
/// `χ_x(c) = ζ_p^(x·c)` over `F_p` and `(−1)^Tr(x·c)` over `F_{2^k}`.
fn char_sum_norms(c: &CodeSet) -> Result<Vec<(Vec<u32>, BigInt)>> {
    let total = c.ambient_size()?;
    let q = c.alphabet.q();
    let n = c.length;
    let mut out = Vec::with_capacity(total);
    for mut idx in 0..total {
        let mut x = vec![0u32; n];
        for slot in x.iter_mut().rev() {
            *slot = (idx % q as usize) as u32;
            idx /= q as usize;
        }
        let norm = match &c.alphabet {
            Alphabet::Prime(2) => {
                let s: i64 = c
                    .words
                    .iter()
                    .map(|w| if x.iter().zip(w).map(|(a, b)| a * b).sum::<u32>() % 2 == 0 { 1 } else { -1 })
                    .sum();
                BigInt::from(s * s)
            }
            Alphabet::Prime(p) => {
                let mut counts = vec![0i64; *p as usize];
                for w in &c.words {
                    let dot = x.iter().zip(w).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() % *p as u64;
                    counts[dot as usize] += 1;
                }
                CyclotomicInt::from_exponent_counts(*p as u64, &counts)
                    .norm()
                    .as_integer()
                    .ok_or_else(|| Error::Inconsistent("|character sum|² is not an integer".into()))?
            }
            Alphabet::Binary(f) => {
                let s: i64 = c
                    .words
                    .iter()
                    .map(|w| {
                        let dot = x.iter().zip(w).fold(0u32, |acc, (&a, &b)| acc ^ f.mul(a, b));
                        if f.trace(dot) == 0 {
                            1
                        } else {
                            -1
                        }
                    })
                    .sum();
                BigInt::from(s * s)
            }
            Alphabet::Z4 => return Err(Error::Domain("character-sum identity needs a field alphabet".into())),
        };
        out.push((x, norm));
    }
    Ok(out)
}

/// Checks `D_C(X+(q−1)Y, X−Y) = (1/|C|) Σ_x |Σ_c χ_x(c)|² X^(n−wt x) Y^(wt x)`.
pub fn char_sum_distance_identity_check(c: &CodeSet) -> Result<bool> {
    let lhs = macwilliams_transform(&distance_enumerator_poly(c), c.alphabet.q(), &BigRational::one())?;
    let mut rhs = vec![BigRational::zero(); c.length + 1];
    for (x, norm) in char_sum_norms(c)? {
        rhs[weight(&x)] += BigRational::from_integer(norm);
    }
    let size = BigRational::from_integer(BigInt::from(c.len()));
    let rhs = EnumeratorPoly { coeffs: rhs.into_iter().map(|v| v / &size).collect() };
    Ok(lhs == rhs)
}

/// Counts of `x ∈ F_2^n` with `Σ_{c∈C} (−1)^(x·c) = 0`, and with `ν_{C'}(x) = 0`.
pub fn count_zero_charsums_and_zero_nu(c: &CodeSet, c2: &CodeSet) -> Result<(usize, usize)> {
    if c.alphabet != Alphabet::Prime(2) || c2.alphabet != Alphabet::Prime(2) {
        return Err(Error::Domain("zero counts need binary codes".into()));
    }
    if c.length != c2.length {
        return Err(Error::Dimension("codes differ in length".into()));
    }
    let zero_sums = char_sum_norms(c)?.iter().filter(|(_, v)| v.is_zero()).count();
    let zero_nu = weight_enumerator(&c2.as_set()?).iter().filter(|&&v| v == 0).count();
    Ok((zero_sums, zero_nu))
}
