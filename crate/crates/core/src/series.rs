//! Degree-truncated noncommutative power series `f = Σ_I a_I (x-p)^I` and
//! their commutative images.
//!
//! A series over `n` variables carries an explicit truncation degree `D`:
//! it stands for the class of a power series modulo words of length `> D`.
//! Binary operations truncate to the smaller of the two degrees.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::coeff::{Rational, Scalar};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::words::Word;

#[derive(Clone, PartialEq, Eq)]
pub struct NCSeries {
    n: usize,
    degree: usize,
    terms: BTreeMap<Word, Scalar>,
}

pub(crate) fn accumulate<K: Ord>(map: &mut BTreeMap<K, Scalar>, key: K, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c.clone());
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn merge_maps<K: Ord>(mut a: BTreeMap<K, Scalar>, b: BTreeMap<K, Scalar>) -> BTreeMap<K, Scalar> {
    if a.len() < b.len() {
        return merge_maps(b, a);
    }
    for (k, c) in b {
        accumulate(&mut a, k, &c);
    }
    a
}

impl NCSeries {
    pub fn zero(n: usize, degree: usize) -> Self {
        NCSeries { n, degree, terms: BTreeMap::new() }
    }

    pub fn one(n: usize, degree: usize) -> Self {
        Self::constant(n, degree, Scalar::one())
    }

    pub fn constant(n: usize, degree: usize, c: Scalar) -> Self {
        let mut s = Self::zero(n, degree);
        accumulate(&mut s.terms, Word::empty(), &c);
        s
    }

    /// The letter `x_k` (1-based). Vanishes at truncation degree 0.
    pub fn variable(n: usize, degree: usize, k: u32) -> Result<Self> {
        Self::monomial(n, degree, Word::letter(k), Scalar::one())
    }

    pub fn monomial(n: usize, degree: usize, word: Word, c: Scalar) -> Result<Self> {
        Self::from_terms(n, degree, [(word, c)])
    }

    /// Builds a series from (word, coefficient) pairs. Repeated words are
    /// summed, words longer than `degree` are dropped.
    pub fn from_terms<I>(n: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Scalar)>,
    {
        let mut s = Self::zero(n, degree);
        for (w, c) in terms {
            w.check_alphabet(n)?;
            if w.len() <= degree {
                accumulate(&mut s.terms, w, &c);
            }
        }
        Ok(s)
    }

    pub(crate) fn from_map_unchecked(n: usize, degree: usize, terms: BTreeMap<Word, Scalar>) -> Self {
        debug_assert!(terms.iter().all(|(w, c)| w.len() <= degree && !c.is_zero()));
        NCSeries { n, degree, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Stored terms in graded-lex word order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn term_map(&self) -> &BTreeMap<Word, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    #[allow(clippy::len_without_is_empty)] // `is_zero` plays that role
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Word::empty())
    }

    /// Length of the shortest word with nonzero coefficient; `None` for zero.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().next().map(Word::len)
    }

    /// Length of the longest stored word.
    pub fn max_word_len(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Word::len)
    }

    pub fn in_maximal_ideal(&self) -> bool {
        self.order().is_none_or(|o| o >= 1)
    }

    pub fn truncate(&self, degree: usize) -> NCSeries {
        let degree = degree.min(self.degree);
        let terms = self
            .terms
            .iter()
            .filter(|(w, _)| w.len() <= degree)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        NCSeries { n: self.n, degree, terms }
    }

    /// Same coefficients, reinterpreted at another truncation degree. Raising
    /// the degree asserts that the series is a polynomial.
    pub fn with_degree(&self, degree: usize) -> NCSeries {
        let mut s = self.truncate(degree);
        s.degree = degree;
        s
    }

    /// Homogeneous component of word length `k`.
    pub fn component(&self, k: usize) -> NCSeries {
        let terms = self
            .terms
            .iter()
            .filter(|(w, _)| w.len() == k)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        NCSeries { n: self.n, degree: self.degree, terms }
    }

    fn check_same_alphabet(&self, other: &NCSeries) -> Result<()> {
        if self.n != other.n {
            return Err(Error::AlphabetMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &NCSeries) -> Result<NCSeries> {
        self.check_same_alphabet(other)?;
        let degree = self.degree.min(other.degree);
        let mut out = self.truncate(degree);
        for (w, c) in other.terms.iter().take_while(|(w, _)| w.len() <= degree) {
            accumulate(&mut out.terms, w.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &NCSeries) -> Result<NCSeries> {
        self.checked_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> NCSeries {
        let terms = self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect();
        NCSeries { n: self.n, degree: self.degree, terms }
    }

    pub fn scale(&self, c: &Scalar) -> NCSeries {
        if c.is_zero() {
            return NCSeries::zero(self.n, self.degree);
        }
        let terms = self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect();
        NCSeries { n: self.n, degree: self.degree, terms }
    }

    pub fn checked_mul(&self, other: &NCSeries) -> Result<NCSeries> {
        self.mul_with(other, Exec::default())
    }

    /// Product with coefficient of `K` equal to `Σ_{K=(I,Ĩ)} a_I ã_Ĩ`.
    pub fn mul_with(&self, other: &NCSeries, exec: Exec) -> Result<NCSeries> {
        self.check_same_alphabet(other)?;
        let degree = self.degree.min(other.degree);
        let left: Vec<(&Word, &Scalar)> = self.terms.iter().take_while(|(w, _)| w.len() <= degree).collect();
        let right: Vec<(&Word, &Scalar)> = other.terms.iter().take_while(|(w, _)| w.len() <= degree).collect();
        let chunk = (left.len() / 16).max(8);
        let terms = exec.map_reduce(
            &left,
            chunk,
            |part| {
                let mut acc = BTreeMap::new();
                for (wi, a) in part {
                    let room = degree - wi.len();
                    // `right` is graded, so the first too-long word ends the scan
                    for (wj, b) in right.iter().take_while(|(w, _)| w.len() <= room) {
                        accumulate(&mut acc, wi.concat(wj), &(*a * *b));
                    }
                }
                acc
            },
            BTreeMap::new(),
            merge_maps,
        );
        Ok(NCSeries { n: self.n, degree, terms })
    }

    pub fn pow(&self, e: u32) -> NCSeries {
        let mut acc = NCSeries::one(self.n, self.degree);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Sum of a finite family, `Σ_I (Σ_α h_{α,I}) x^I`. At finite truncation
    /// every family is summable.
    pub fn sum_family(n: usize, degree: usize, family: &[NCSeries]) -> Result<NCSeries> {
        let mut acc = NCSeries::zero(n, degree);
        for h in family {
            acc = acc.checked_add(h)?;
        }
        Ok(acc)
    }

    /// Abelianization: collect coefficients by letter multiset.
    pub fn ab(&self) -> CommSeries {
        let mut terms = BTreeMap::new();
        for (w, c) in &self.terms {
            accumulate(&mut terms, Monomial(w.exponents(self.n)), c);
        }
        CommSeries { n: self.n, degree: self.degree, terms }
    }

    /// Supported on ordered words only.
    pub fn is_commlike(&self) -> bool {
        self.terms.keys().all(Word::is_ordered)
    }

    /// The isomorphism `OP: x ↦ x^op`, written back in the original letters:
    /// the coefficient of `J` moves to the reversed word.
    pub fn opposite(&self) -> NCSeries {
        let terms = self.terms.iter().map(|(w, c)| (w.reversed(), c.clone())).collect();
        NCSeries { n: self.n, degree: self.degree, terms }
    }

    /// Embeds into an alphabet of `n + extra` letters, keeping letter numbers.
    pub fn embed_left(&self, extra: usize) -> NCSeries {
        NCSeries { n: self.n + extra, degree: self.degree, terms: self.terms.clone() }
    }

    /// Embeds into an alphabet of `offset + n` letters, shifting letters by `offset`.
    pub fn embed_right(&self, offset: usize) -> NCSeries {
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| (w.shifted(offset as u32), c.clone()))
            .collect();
        NCSeries { n: self.n + offset, degree: self.degree, terms }
    }

    /// Product `f·g` in the free product of the algebras of `f` (letters
    /// `1..=n`) and `g` (letters shifted to `n+1..=n+m`).
    pub fn free_product(f: &NCSeries, g: &NCSeries) -> NCSeries {
        &f.embed_left(g.n) * &g.embed_right(f.n)
    }

    /// Termwise `|re| + |im|` of every coefficient.
    pub fn majorant(&self) -> BTreeMap<Word, Rational> {
        self.terms.iter().map(|(w, c)| (w.clone(), c.majorant())).collect()
    }
}

impl<'a> Add<&'a NCSeries> for &'a NCSeries {
    type Output = NCSeries;
    /// Panics on alphabet mismatch; see [`NCSeries::checked_add`].
    fn add(self, rhs: &NCSeries) -> NCSeries {
        self.checked_add(rhs).expect("series over different alphabets")
    }
}

impl<'a> Sub<&'a NCSeries> for &'a NCSeries {
    type Output = NCSeries;
    fn sub(self, rhs: &NCSeries) -> NCSeries {
        self.checked_sub(rhs).expect("series over different alphabets")
    }
}

impl<'a> Mul<&'a NCSeries> for &'a NCSeries {
    type Output = NCSeries;
    fn mul(self, rhs: &NCSeries) -> NCSeries {
        self.checked_mul(rhs).expect("series over different alphabets")
    }
}

impl Neg for &NCSeries {
    type Output = NCSeries;
    fn neg(self) -> NCSeries {
        self.neg_ref()
    }
}

pub(crate) fn write_terms<'a, K: 'a, I, F>(f: &mut fmt::Formatter<'_>, terms: I, is_one: impl Fn(&K) -> bool, key: F) -> fmt::Result
where
    I: Iterator<Item = (&'a K, &'a Scalar)>,
    F: Fn(&K) -> String,
{
    let mut first = true;
    for (k, c) in terms {
        let (neg, mag) = if c.is_real() && c.re() < &Rational::zero() { (true, -c) } else { (false, c.clone()) };
        let coeff = if mag.is_real() {
            mag.to_string()
        } else {
            format!("({mag})")
        };
        let body = if is_one(k) {
            coeff
        } else if mag == Scalar::one() {
            key(k)
        } else {
            format!("{coeff}*{}", key(k))
        };
        match (first, neg) {
            (true, false) => f.write_str(&body)?,
            (true, true) => write!(f, "-{body}")?,
            (false, false) => write!(f, " + {body}")?,
            (false, true) => write!(f, " - {body}")?,
        }
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// Canonical expression form, terms in graded-lex order:
/// `1/2 - x1 + (1+2*i)*x1*x2`.
impl fmt::Display for NCSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter(), |w: &Word| w.is_empty(), |w| w.to_string())
    }
}

impl fmt::Debug for NCSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NCSeries(n={}, D={}: {})", self.n, self.degree, self)
    }
}

/// Exponent vector of a commutative monomial, ordered by total degree and
/// then reverse-lexicographically on exponents (so `x1` precedes `x2`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn total_degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    /// The ordered word with this letter multiset.
    pub fn ordered_word(&self) -> Word {
        let letters = self
            .0
            .iter()
            .enumerate()
            .flat_map(|(k, &e)| std::iter::repeat_n(k as u32 + 1, e as usize))
            .collect();
        Word::new(letters)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &e) in self.0.iter().enumerate().filter(|(_, e)| **e > 0) {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", k + 1)?;
            } else {
                write!(f, "x{}^{e}", k + 1)?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Truncated commutative power series, the target of `ab`.
#[derive(Clone, PartialEq, Eq)]
pub struct CommSeries {
    n: usize,
    degree: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl CommSeries {
    pub fn zero(n: usize, degree: usize) -> Self {
        CommSeries { n, degree, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(n: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Scalar)>,
    {
        let mut s = Self::zero(n, degree);
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: e.len() });
            }
            let m = Monomial(e);
            if m.total_degree() <= degree {
                accumulate(&mut s.terms, m, &c);
            }
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponents: &[u32]) -> Scalar {
        self.terms.get(&Monomial(exponents.to_vec())).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> Option<usize> {
        self.terms.keys().next().map(Monomial::total_degree)
    }

    pub fn truncate(&self, degree: usize) -> CommSeries {
        let degree = degree.min(self.degree);
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.total_degree() <= degree)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        CommSeries { n: self.n, degree, terms }
    }

    /// Total degree shared by all terms, or an error naming two that differ.
    pub fn homogeneous_degree(&self) -> Result<Option<usize>> {
        let mut degrees = self.terms.keys().map(Monomial::total_degree);
        let Some(first) = degrees.next() else {
            return Ok(None);
        };
        match degrees.find(|&d| d != first) {
            Some(second) => Err(Error::NotHomogeneous { first, second }),
            None => Ok(Some(first)),
        }
    }

    /// The vector-space section of `ab`: each monomial goes to its ordered word.
    pub fn unab(&self) -> NCSeries {
        let terms = self.terms.iter().map(|(m, c)| (m.ordered_word(), c.clone())).collect();
        NCSeries::from_map_unchecked(self.n, self.degree, terms)
    }

    pub fn checked_add(&self, other: &CommSeries) -> Result<CommSeries> {
        if self.n != other.n {
            return Err(Error::AlphabetMismatch { left: self.n, right: other.n });
        }
        let degree = self.degree.min(other.degree);
        let mut out = self.truncate(degree);
        for (m, c) in other.terms.iter().filter(|(m, _)| m.total_degree() <= degree) {
            accumulate(&mut out.terms, m.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> CommSeries {
        let mut out = CommSeries::zero(self.n, self.degree);
        for (m, a) in &self.terms {
            accumulate(&mut out.terms, m.clone(), &(a * c));
        }
        out
    }

    pub fn checked_mul(&self, other: &CommSeries) -> Result<CommSeries> {
        if self.n != other.n {
            return Err(Error::AlphabetMismatch { left: self.n, right: other.n });
        }
        let degree = self.degree.min(other.degree);
        let mut out = CommSeries::zero(self.n, degree);
        for (ma, a) in &self.terms {
            for (mb, b) in other.terms.iter().take_while(|(m, _)| m.total_degree() + ma.total_degree() <= degree) {
                let e = ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect();
                accumulate(&mut out.terms, Monomial(e), &(a * b));
            }
        }
        Ok(out)
    }

    /// Value at `point` (monomials evaluated coordinatewise).
    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: point.len() });
        }
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                t = &t * &x.pow(e);
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Commutative substitution `x_k ↦ images[k]`; images must have no constant term.
    pub fn substitute(&self, images: &[CommSeries]) -> Result<CommSeries> {
        if images.len() != self.n {
            return Err(Error::ImageCount { expected: self.n, found: images.len() });
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        let m = first.n;
        let degree = images.iter().map(|g| g.degree).min().unwrap_or(self.degree).min(self.degree);
        for (index, g) in images.iter().enumerate() {
            if g.n != m {
                return Err(Error::AlphabetMismatch { left: m, right: g.n });
            }
            if g.order() == Some(0) {
                return Err(Error::ImageNotInMaximalIdeal { index });
            }
        }
        let one = CommSeries::from_terms(m, degree, [(vec![0; m], Scalar::one())])?;
        let mut acc = CommSeries::zero(m, degree);
        for (mono, c) in &self.terms {
            let mut t = one.scale(c);
            for (g, &e) in images.iter().zip(&mono.0) {
                for _ in 0..e {
                    t = t.checked_mul(g)?;
                }
            }
            acc = acc.checked_add(&t)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for CommSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter(), |m: &Monomial| m.total_degree() == 0, |m| m.to_string())
    }
}

impl fmt::Debug for CommSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CommSeries(n={}, D={}: {})", self.n, self.degree, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_series;
    use crate::words::words_up_to;
    use proptest::prelude::*;

    fn s(text: &str, n: usize, d: usize) -> NCSeries {
        parse_series(text, n, d).unwrap()
    }

    #[test]
    fn linear_examples() {
        let f = s("1 + 2*x1 - x2*x1", 2, 3);
        assert_eq!(&f + &NCSeries::zero(2, 3), f);
        assert!(f.scale(&Scalar::zero()).is_zero());
        assert_eq!(&s("x1", 2, 3) + &s("x1", 2, 3), s("2*x1", 2, 3));
        assert!(matches!(f.checked_add(&NCSeries::zero(3, 3)), Err(Error::AlphabetMismatch { .. })));
        assert_eq!((&f + &NCSeries::zero(2, 1)).degree(), 1);
    }

    #[test]
    fn product_examples() {
        assert_eq!(&s("1 + x1", 2, 3) * &s("1 + x2", 2, 3), s("1 + x1 + x2 + x1*x2", 2, 3));
        let (x1, x2) = (s("x1", 2, 3), s("x2", 2, 3));
        assert!(!(&(&x1 * &x2) - &(&x2 * &x1)).is_zero());
        let sq = s("x1 + x2", 2, 2).pow(2);
        assert_eq!(sq, s("x1*x1 + x1*x2 + x2*x1 + x2*x2", 2, 2));
        assert_eq!(sq.len(), 4);
        // truncation drops everything past D
        assert_eq!(s("x1", 1, 2).pow(3), NCSeries::zero(1, 2));
    }

    #[test]
    fn ab_examples() {
        assert!(s("x1*x2 - x2*x1", 2, 2).ab().is_zero());
        let c = s("x1*x2 + x2*x1", 2, 2).ab();
        assert_eq!(c.coeff(&[1, 1]), Scalar::from_int(2));
        assert_eq!(c.terms().count(), 1);
        let c = s("x1*x2 - 3*x2*x1", 2, 2).ab();
        assert_eq!(c.coeff(&[1, 1]), Scalar::from_int(-2));
    }

    #[test]
    fn unab_examples() {
        let g = CommSeries::from_terms(2, 2, [(vec![1, 1], Scalar::one())]).unwrap();
        assert_eq!(g.unab(), s("x1*x2", 2, 2));
        let g = CommSeries::from_terms(2, 3, [(vec![0, 2], Scalar::from_int(3)), (vec![1, 1], Scalar::one())]).unwrap();
        assert_eq!(g.unab().ab(), g);
        assert!(g.unab().is_commlike());
        assert_eq!(s("x2*x1", 2, 2).ab().unab(), s("x1*x2", 2, 2));
    }

    #[test]
    fn commlike_and_order() {
        assert!(s("x1*x2", 2, 2).is_commlike());
        assert!(!s("x2*x1", 2, 2).is_commlike());
        assert_eq!(s("1 + x1", 2, 2).order(), Some(0));
        assert_eq!(s("x1*x2", 2, 2).order(), Some(2));
        assert_eq!(NCSeries::zero(2, 2).order(), None);
        assert!(NCSeries::zero(2, 2).in_maximal_ideal());
    }

    #[test]
    fn sum_family_examples() {
        let d = 5;
        let f = s("1 - x1", 1, d);
        let one_minus_f = &NCSeries::one(1, d) - &f;
        let family: Vec<_> = (0..=d as u32).map(|j| one_minus_f.pow(j)).collect();
        let total = NCSeries::sum_family(1, d, &family).unwrap();
        assert_eq!(total, s("1 + x1 + x1^2 + x1^3 + x1^4 + x1^5", 1, d));
        assert!(NCSeries::sum_family(2, 3, &[]).unwrap().is_zero());
        let g = s("x1 - 2*x2*x1", 2, 3);
        assert!(NCSeries::sum_family(2, 3, &[g.clone(), -&g]).unwrap().is_zero());
    }

    #[test]
    fn opposite_examples() {
        assert_eq!(s("x1*x2", 2, 2).opposite(), s("x2*x1", 2, 2));
        let f = s("3 + x1*x2*x2 - x2*x1", 2, 3);
        assert_eq!(f.opposite().opposite(), f);
        assert_eq!(s("1 + x1", 2, 2).opposite(), s("1 + x1", 2, 2));
    }

    #[test]
    fn free_product_examples() {
        let x = s("x1", 1, 3);
        let y = s("x1", 1, 3);
        let xy = NCSeries::free_product(&x, &y);
        assert_eq!(xy, s("x1*x2", 2, 3));
        let (xe, ye) = (x.embed_left(1), y.embed_right(1));
        assert_ne!(&xe * &ye, &ye * &xe);
        assert_eq!(NCSeries::free_product(&NCSeries::constant(1, 3, Scalar::from_int(2)), &NCSeries::one(1, 3)), NCSeries::constant(2, 3, Scalar::from_int(2)));
        let f = s("x1*x1", 1, 3);
        assert_eq!(f.embed_right(1).max_word_len(), Some(2));
        assert_eq!(f.embed_right(1), s("x2*x2", 2, 3));
    }

    #[test]
    fn display_forms() {
        assert_eq!(s("x2*x1 - 1/2 + x1", 2, 2).to_string(), "-1/2 + x1 + x2*x1");
        assert_eq!(s("(1+2*i)*x1 - 3*i", 2, 2).to_string(), "(-3*i) + (1+2*i)*x1");
        assert_eq!(NCSeries::zero(1, 1).to_string(), "0");
        let c = s("x2*x1*x1 + 3", 2, 3).ab();
        assert_eq!(c.to_string(), "3 + x1^2*x2");
    }

    fn arb_series(n: usize, d: usize) -> impl Strategy<Value = NCSeries> {
        let words: Vec<Word> = words_up_to(n, d).collect();
        proptest::collection::vec((0..words.len(), -3i64..4), 0..8).prop_map(move |ts| {
            NCSeries::from_terms(n, d, ts.into_iter().map(|(k, c)| (words[k].clone(), Scalar::from_int(c)))).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn mul_associative_unital(f in arb_series(2, 5), g in arb_series(2, 5), h in arb_series(2, 5)) {
            prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
            prop_assert_eq!(&f * &NCSeries::one(2, 5), f.clone());
            prop_assert_eq!(&NCSeries::one(2, 5) * &f, f);
        }

        #[test]
        fn parallel_mul_matches_sequential(f in arb_series(3, 4), g in arb_series(3, 4)) {
            prop_assert_eq!(f.mul_with(&g, Exec::Parallel).unwrap(), f.mul_with(&g, Exec::Sequential).unwrap());
        }

        #[test]
        fn ab_is_homomorphism_with_section(f in arb_series(2, 4), g in arb_series(2, 4)) {
            prop_assert_eq!((&f * &g).ab(), f.ab().checked_mul(&g.ab()).unwrap());
            prop_assert_eq!(f.ab().unab().ab(), f.ab());
            prop_assert_eq!(f.ab().unab() == f, f.is_commlike());
        }

        #[test]
        fn opposite_reverses_products(f in arb_series(2, 4), g in arb_series(2, 4)) {
            prop_assert_eq!((&f * &g).opposite(), &g.opposite() * &f.opposite());
        }

        #[test]
        fn majorant_of_product_dominated(f in arb_series(2, 4), g in arb_series(2, 4)) {
            let prod = (&f * &g).majorant();
            let (mf, mg) = (f.majorant(), g.majorant());
            for (w, bound_target) in &prod {
                let mut bound = Rational::zero();
                for cut in 0..=w.len() {
                    let (a, b) = w.split_at(cut);
                    if let (Some(x), Some(y)) = (mf.get(&a), mg.get(&b)) {
                        bound += x * y;
                    }
                }
                prop_assert!(bound_target <= &bound);
            }
        }
    }
}
