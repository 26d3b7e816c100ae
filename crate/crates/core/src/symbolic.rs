//! Exact noncommutative polynomials over the rationals.
//!
//! Words are sequences over a two-letter alphabet, either `{A, B}` or
//! `{H, X}`. The coefficient map is kept free of zeros and ordered by
//! (length, lexicographic), so structural equality is polynomial equality.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Longest supported word.
pub const MAX_WORD_LEN: usize = 32;
/// Largest order for the `Q_k` family (2^k words).
pub const MAX_ORDER: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Alphabet {
    /// Letters `A` (0) and `B` (1).
    AB,
    /// Letters `H` (0) and `X` (1).
    HX,
}

impl Alphabet {
    pub fn letters(self) -> [char; 2] {
        match self {
            Alphabet::AB => ['A', 'B'],
            Alphabet::HX => ['H', 'X'],
        }
    }
}

/// A word packed one bit per letter, first letter most significant.
///
/// The derived ordering compares length first, then the packed bits, which
/// for equal lengths is lexicographic order with letter 0 before letter 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    len: u8,
    bits: u32,
}

impl Word {
    pub const EMPTY: Word = Word { len: 0, bits: 0 };

    pub fn letter(l: u8) -> Self {
        Word { len: 1, bits: u32::from(l & 1) }
    }

    pub fn from_letters(letters: &[u8]) -> Self {
        assert!(letters.len() <= MAX_WORD_LEN, "word longer than {MAX_WORD_LEN}");
        let bits = letters.iter().fold(0u32, |acc, &l| (acc << 1) | u32::from(l & 1));
        Word {
            len: letters.len() as u8,
            bits,
        }
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    /// Letter at position `i` (0 = first).
    pub fn at(self, i: usize) -> u8 {
        ((self.bits >> (self.len as usize - 1 - i)) & 1) as u8
    }

    pub fn letters(self) -> impl Iterator<Item = u8> {
        (0..self.len()).map(move |i| self.at(i))
    }

    pub fn concat(self, other: Word) -> Word {
        let len = self.len() + other.len();
        assert!(len <= MAX_WORD_LEN, "word longer than {MAX_WORD_LEN}");
        let bits = if other.len == 0 { self.bits } else { (self.bits << other.len) | other.bits };
        Word { len: len as u8, bits }
    }

    pub fn reversed(self) -> Word {
        let mut bits = 0;
        for i in 0..self.len() {
            bits = (bits << 1) | u32::from(self.at(self.len() - 1 - i));
        }
        Word { len: self.len, bits }
    }

    /// Renders runs with exponents, e.g. `A^2BA`.
    pub fn render(self, alphabet: Alphabet) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        let names = alphabet.letters();
        let mut out = String::new();
        let letters: Vec<u8> = self.letters().collect();
        let mut i = 0;
        while i < letters.len() {
            let mut j = i;
            while j < letters.len() && letters[j] == letters[i] {
                j += 1;
            }
            out.push(names[letters[i] as usize]);
            if j - i > 1 {
                out.push('^');
                out.push_str(&(j - i).to_string());
            }
            i = j;
        }
        out
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct NCPoly {
    alphabet: Alphabet,
    terms: BTreeMap<Word, BigRational>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl NCPoly {
    pub fn zero(alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alphabet: Alphabet) -> Self {
        Self::monomial(alphabet, Word::EMPTY, BigRational::one())
    }

    pub fn monomial(alphabet: Alphabet, word: Word, coeff: BigRational) -> Self {
        let mut p = Self::zero(alphabet);
        p.add_term(word, coeff);
        p
    }

    /// The single-letter polynomial for letter `0` or `1`.
    pub fn var(alphabet: Alphabet, letter: u8) -> Self {
        Self::monomial(alphabet, Word::letter(letter), BigRational::one())
    }

    /// Builds from `(letters, numerator, denominator)` triples.
    pub fn from_terms(alphabet: Alphabet, terms: &[(&[u8], i64, i64)]) -> Self {
        let mut p = Self::zero(alphabet);
        for (letters, n, d) in terms {
            p.add_term(Word::from_letters(letters), rat(*n, *d));
        }
        p
    }

    /// Parses words written in the alphabet's letters, e.g. `"AAB"`.
    pub fn from_word_str(alphabet: Alphabet, word: &str, n: i64, d: i64) -> Self {
        let names = alphabet.letters();
        let letters: Vec<u8> = word
            .chars()
            .map(|c| names.iter().position(|&x| x == c).expect("letter outside alphabet") as u8)
            .collect();
        Self::monomial(alphabet, Word::from_letters(&letters), rat(n, d))
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: Word) -> BigRational {
        self.terms.get(&word).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, word: Word, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(word).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&word);
        }
    }

    fn same_alphabet(&self, other: &Self) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(self.alphabet, other.alphabet));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_alphabet(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        let mut out = Self::zero(self.alphabet);
        if s.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(w, c)| (*w, c * s)).collect();
        out
    }

    pub fn scale_ratio(&self, n: i64, d: i64) -> Self {
        self.scale(&rat(n, d))
    }

    /// Distributive product; words concatenate.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_alphabet(other)?;
        let mut out = Self::zero(self.alphabet);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.add_term(wa.concat(*wb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: usize) -> Result<Self> {
        let mut acc = Self::one(self.alphabet);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Adjoint for Hermitian letters: each word reversed. Coefficients are
    /// rational, so conjugation leaves them unchanged.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.alphabet);
        for (w, c) in &self.terms {
            out.add_term(w.reversed(), c.clone());
        }
        out
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.adjoint() == *self
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.add(&other.mul(self)?)
    }

    /// `ad_self^m(other)`.
    pub fn ad_power(&self, other: &Self, m: usize) -> Result<Self> {
        let mut acc = other.clone();
        for _ in 0..m {
            acc = self.commutator(&acc)?;
        }
        Ok(acc)
    }

    /// Image under `A ↦ (H + X)/2`, `B ↦ (H − X)/2`.
    ///
    /// A word of length `L` maps to `2^{-L} Σ_v (−1)^{#(B in w at X in v)} v`
    /// over all `HX`-words `v` of the same length.
    pub fn substitute_hx(&self) -> Result<Self> {
        if self.alphabet != Alphabet::AB {
            return Err(Error::AlphabetMismatch(self.alphabet, Alphabet::AB));
        }
        let mut out = Self::zero(Alphabet::HX);
        for (w, c) in &self.terms {
            let len = w.len();
            let scaled = c / BigRational::from_integer(BigInt::one() << len);
            for v in 0u32..(1u32 << len) {
                let target = Word { len: w.len, bits: v };
                let coeff = if (w.bits & v).count_ones() % 2 == 0 { scaled.clone() } else { -scaled.clone() };
                out.add_term(target, coeff);
            }
        }
        Ok(out)
    }

    /// Evaluates at numeric matrices: `letters[0]` for letter 0, `letters[1]` for letter 1.
    pub fn evaluate(&self, letters: [&ComplexMatrix; 2]) -> Result<ComplexMatrix> {
        if letters[0].dim() != letters[1].dim() {
            return Err(Error::DimensionMismatch {
                left: letters[0].dim(),
                right: letters[1].dim(),
            });
        }
        let n = letters[0].dim();
        let mut out = ComplexMatrix::zeros(n);
        for (w, c) in &self.terms {
            let c = c.to_f64().expect("rational coefficient in f64 range");
            let mut prod = ComplexMatrix::identity(n);
            for l in w.letters() {
                prod = &prod * letters[l as usize];
            }
            out = out + prod.scale(c);
        }
        Ok(out)
    }
}

fn render_coeff(c: &BigRational) -> String {
    let abs = c.abs();
    if abs.is_one() {
        String::new()
    } else if abs.is_integer() {
        abs.to_integer().to_string()
    } else {
        format!("{}/{} ", abs.numer(), abs.denom())
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, false) => {}
                (0, true) => write!(f, "-")?,
                (_, false) => write!(f, " + ")?,
                (_, true) => write!(f, " - ")?,
            }
            let coeff = render_coeff(c);
            if w.is_empty() && coeff.is_empty() {
                write!(f, "1")?;
            } else {
                write!(f, "{}{}", coeff, if w.is_empty() { String::new() } else { w.render(self.alphabet) })?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NCPoly[{:?}]({})", self.alphabet, self)
    }
}

fn check_order(k: usize) -> Result<()> {
    if k == 0 || k > MAX_ORDER {
        return Err(Error::UnsupportedOrder {
            k,
            reason: "symbolic coefficients support 1 <= k <= 12",
        });
    }
    Ok(())
}

fn binomial(k: usize, p: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..p {
        acc = acc * BigInt::from(k - i) / BigInt::from(i + 1);
    }
    acc
}

/// `Q_k = Σ_p C(k,p) A^p B^{k−p}` over `{A, B}`.
pub fn nc_qk(k: usize) -> Result<NCPoly> {
    check_order(k)?;
    let mut q = NCPoly::zero(Alphabet::AB);
    for p in 0..=k {
        let letters: Vec<u8> = std::iter::repeat_n(0, p).chain(std::iter::repeat_n(1, k - p)).collect();
        q.add_term(Word::from_letters(&letters), BigRational::from_integer(binomial(k, p)));
    }
    Ok(q)
}

/// `(A + B)^k`: every word of length `k` with coefficient 1.
pub fn nc_hk(k: usize) -> Result<NCPoly> {
    check_order(k)?;
    NCPoly::var(Alphabet::AB, 0).add(&NCPoly::var(Alphabet::AB, 1))?.pow(k)
}

/// `R_k = (Q_k + Q_k*) / 2`.
pub fn nc_rk(k: usize) -> Result<NCPoly> {
    let q = nc_qk(k)?;
    Ok(q.add(&q.adjoint())?.scale_ratio(1, 2))
}

/// `D_k = R_k − H^k`.
pub fn nc_dk(k: usize) -> Result<NCPoly> {
    nc_rk(k)?.sub(&nc_hk(k)?)
}

/// Outcome of an exact identity check over `{H, X}`.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub k: usize,
    /// `D_k` after substituting `A = (H+X)/2`, `B = (H−X)/2`.
    pub lhs: NCPoly,
    /// The claimed commutator expression.
    pub rhs: NCPoly,
    /// `lhs − rhs`; zero iff the identity holds.
    pub diff: NCPoly,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.diff.is_zero()
    }
}

fn hx_vars() -> (NCPoly, NCPoly) {
    (NCPoly::var(Alphabet::HX, 0), NCPoly::var(Alphabet::HX, 1))
}

/// `¼[X,[X,H]]`.
pub fn rhs_k3() -> NCPoly {
    let (h, x) = hx_vars();
    x.ad_power(&h, 2).unwrap().scale_ratio(1, 4)
}

/// `½[X,[X,H²]] − ¼[X,H]²`.
pub fn rhs_k4() -> NCPoly {
    let (h, x) = hx_vars();
    let h2 = h.pow(2).unwrap();
    let k = x.commutator(&h).unwrap();
    x.ad_power(&h2, 2)
        .unwrap()
        .scale_ratio(1, 2)
        .sub(&k.mul(&k).unwrap().scale_ratio(1, 4))
        .unwrap()
}

/// `(1/16)ad_X⁴(H) + (7/16)ad_X²(H³) + (9/32){H, ad_X²(H²)} − (1/32){H², ad_X²(H)} + (1/8)H ad_X²(H) H`.
pub fn rhs_k5() -> NCPoly {
    let (h, x) = hx_vars();
    let h2 = h.pow(2).unwrap();
    let h3 = h.pow(3).unwrap();
    let ad2_h = x.ad_power(&h, 2).unwrap();
    let terms = [
        x.ad_power(&h, 4).unwrap().scale_ratio(1, 16),
        x.ad_power(&h3, 2).unwrap().scale_ratio(7, 16),
        h.anticommutator(&x.ad_power(&h2, 2).unwrap()).unwrap().scale_ratio(9, 32),
        h2.anticommutator(&ad2_h).unwrap().scale_ratio(-1, 32),
        h.mul(&ad2_h).unwrap().mul(&h).unwrap().scale_ratio(1, 8),
    ];
    terms.iter().fold(NCPoly::zero(Alphabet::HX), |acc, t| acc.add(t).unwrap())
}

/// Checks `D_k` against the commutator expression for `k ∈ {3, 4, 5}`.
pub fn verify_identity(k: usize) -> Result<IdentityCheck> {
    let rhs = match k {
        3 => rhs_k3(),
        4 => rhs_k4(),
        5 => rhs_k5(),
        _ => {
            return Err(Error::UnsupportedOrder {
                k,
                reason: "closed-form identities exist for k = 3, 4, 5",
            })
        }
    };
    let lhs = nc_dk(k)?.substitute_hx()?;
    let diff = lhs.sub(&rhs)?;
    Ok(IdentityCheck { k, lhs, rhs, diff })
}

pub fn verify_identity_k3() -> IdentityCheck {
    verify_identity(3).expect("k = 3 is supported")
}

pub fn verify_identity_k4() -> IdentityCheck {
    verify_identity(4).expect("k = 4 is supported")
}

pub fn verify_identity_k5() -> IdentityCheck {
    verify_identity(5).expect("k = 5 is supported")
}
