//! Words over an `n`-letter alphabet: the multi-indices `I = (i_1, ..., i_k)`
//! that index noncommutative monomials `x^I = x_{i_1} ... x_{i_k}`.
//!
//! Letters are 1-based. A word does not know its alphabet size; containers
//! validate letters on insertion.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A multi-index. Ordered graded-lexicographically: shorter words first,
/// equal lengths compared letter by letter.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<u32>) -> Self {
        Word(letters)
    }

    pub fn letter(k: u32) -> Self {
        Word(vec![k])
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Nondecreasing letters.
    pub fn is_ordered(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// The unique ordered word with the same letter multiset.
    pub fn sorted(&self) -> Word {
        let mut letters = self.0.clone();
        letters.sort_unstable();
        Word(letters)
    }

    /// Exponent vector of length `n`: how often each letter occurs.
    pub fn exponents(&self, n: usize) -> Vec<u32> {
        let mut e = vec![0; n];
        for &l in &self.0 {
            e[l as usize - 1] += 1;
        }
        e
    }

    pub fn check_alphabet(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&l| l == 0 || l as usize > n) {
            Some(&letter) => Err(Error::LetterOutOfRange { letter, n }),
            None => Ok(()),
        }
    }

    /// Shifts every letter by `offset` (used to embed into a larger alphabet).
    pub fn shifted(&self, offset: u32) -> Word {
        Word(self.0.iter().map(|l| l + offset).collect())
    }

    /// Splits into `(prefix, suffix)` at position `at`.
    pub fn split_at(&self, at: usize) -> (Word, Word) {
        let (a, b) = self.0.split_at(at);
        (Word(a.to_vec()), Word(b.to_vec()))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for Word {
    fn from(v: Vec<u32>) -> Self {
        Word(v)
    }
}

impl From<&[u32]> for Word {
    fn from(v: &[u32]) -> Self {
        Word(v.to_vec())
    }
}

/// `x1*x2*x1`; the empty word prints as `1`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "x{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// An order-preserving injection of `source` into `target`, given by the
/// (0-based, strictly increasing) positions in `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub source: Word,
    pub target: Word,
    pub positions: Vec<usize>,
}

/// All embeddings of `source` into `target`, positions in lexicographic order.
pub fn embeddings(source: &Word, target: &Word) -> Vec<Embedding> {
    fn walk(
        src: &[u32],
        tgt: &[u32],
        start: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let k = current.len();
        if k == src.len() {
            out.push(current.clone());
            return;
        }
        let remaining = src.len() - k;
        for pos in start..=tgt.len().saturating_sub(remaining) {
            if pos < tgt.len() && tgt[pos] == src[k] {
                current.push(pos);
                walk(src, tgt, pos + 1, current, out);
                current.pop();
            }
        }
    }

    let mut out = Vec::new();
    if source.len() <= target.len() {
        walk(source.letters(), target.letters(), 0, &mut Vec::new(), &mut out);
    }
    out.into_iter()
        .map(|positions| Embedding {
            source: source.clone(),
            target: target.clone(),
            positions,
        })
        .collect()
}

/// The number of embeddings of `source` into `target` (the binomial
/// coefficient of words), by subsequence-counting dynamic programming.
pub fn count_embeddings(source: &Word, target: &Word) -> u64 {
    let s = source.letters();
    // ways[k]: embeddings of the first k letters of `source` into the prefix seen so far
    let mut ways = vec![0u64; s.len() + 1];
    ways[0] = 1;
    for &t in target.letters() {
        for k in (1..=s.len()).rev() {
            if s[k - 1] == t {
                ways[k] += ways[k - 1];
            }
        }
    }
    ways[s.len()]
}

/// `J -_α I`: the word left after deleting the positions hit by `e`.
pub fn delete_along(word: &Word, e: &Embedding) -> Result<Word> {
    if &e.target != word {
        return Err(Error::EmbeddingTarget {
            expected: word.clone(),
            found: e.target.clone(),
        });
    }
    let mut hit = e.positions.iter().peekable();
    let mut rest = Vec::with_capacity(word.len() - e.positions.len());
    for (pos, &l) in word.letters().iter().enumerate() {
        if hit.peek() == Some(&&pos) {
            hit.next();
        } else {
            rest.push(l);
        }
    }
    Ok(Word(rest))
}

/// All words of length `<= max_len` over `1..=n`, in graded-lex order.
pub fn words_up_to(n: usize, max_len: usize) -> impl Iterator<Item = Word> {
    (0..=max_len).flat_map(move |len| words_of_length(n, len))
}

/// All words of exactly `len` letters over `1..=n`, lexicographically.
pub fn words_of_length(n: usize, len: usize) -> impl Iterator<Item = Word> {
    let total = if len == 0 {
        1
    } else {
        n.checked_pow(len as u32).unwrap_or(0)
    };
    (0..total).map(move |mut idx| {
        let mut letters = vec![0u32; len];
        for slot in letters.iter_mut().rev() {
            *slot = (idx % n) as u32 + 1;
            idx /= n;
        }
        Word(letters)
    })
}

/// `sum_{k=0}^{max_len} n^k`.
pub fn count_words_up_to(n: usize, max_len: usize) -> usize {
    (0..=max_len).map(|k| n.pow(k as u32)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[u32]) -> Word {
        Word::from(v)
    }

    fn binomial(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn concat_examples() {
        assert_eq!(w(&[1, 2]).concat(&w(&[1])), w(&[1, 2, 1]));
        assert_eq!(Word::empty().concat(&w(&[2, 1])), w(&[2, 1]));
        assert_eq!(w(&[2]).concat(&w(&[2])), w(&[2, 2]));
    }

    #[test]
    fn embedding_examples() {
        let e = embeddings(&w(&[1, 1]), &w(&[1, 2, 1]));
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].positions, vec![0, 2]);
        assert_eq!(embeddings(&w(&[1]), &w(&[1, 2, 1])).len(), 2);
        for j in words_up_to(2, 3) {
            let e = embeddings(&Word::empty(), &j);
            assert_eq!(e.len(), 1);
            assert!(e[0].positions.is_empty());
        }
        assert_eq!(count_embeddings(&w(&[1, 1]), &w(&[1, 2, 1])), 1);
        assert_eq!(count_embeddings(&w(&[2]), &w(&[1, 2, 1])), 1);
        assert_eq!(count_embeddings(&w(&[3]), &w(&[1, 2, 1])), 0);
    }

    #[test]
    fn delete_examples() {
        let j = w(&[1, 2, 1]);
        let e = embeddings(&w(&[1, 1]), &j).remove(0);
        assert_eq!(delete_along(&j, &e).unwrap(), w(&[2]));

        let j = w(&[1, 2]);
        let e = embeddings(&Word::empty(), &j).remove(0);
        assert_eq!(delete_along(&j, &e).unwrap(), j);

        let j = w(&[1]);
        let e = embeddings(&w(&[1]), &j).remove(0);
        assert_eq!(delete_along(&j, &e).unwrap(), Word::empty());

        assert!(matches!(
            delete_along(&w(&[2, 2]), &e),
            Err(Error::EmbeddingTarget { .. })
        ));
    }

    #[test]
    fn ordered_examples() {
        assert!(w(&[1, 1, 2]).is_ordered());
        assert!(!w(&[2, 1]).is_ordered());
        assert!(Word::empty().is_ordered());
    }

    #[test]
    fn enumeration_examples() {
        let v: Vec<_> = words_up_to(2, 1).collect();
        assert_eq!(v, vec![Word::empty(), w(&[1]), w(&[2])]);
        assert_eq!(words_up_to(2, 4).count(), 31);
        assert_eq!(count_words_up_to(2, 4), 31);
        let v: Vec<_> = words_up_to(0, 3).collect();
        assert_eq!(v, vec![Word::empty()]);
        let v: Vec<_> = words_up_to(3, 3).collect();
        assert!(v.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn display() {
        assert_eq!(w(&[1, 2, 1]).to_string(), "x1*x2*x1");
        assert_eq!(Word::empty().to_string(), "1");
    }

    #[test]
    fn count_matches_enumeration_and_bound() {
        let all: Vec<_> = words_up_to(2, 4).collect();
        for i in &all {
            for j in &all {
                let c = count_embeddings(i, j);
                assert_eq!(c as usize, embeddings(i, j).len());
                assert!(c <= binomial(j.len() as u64, i.len() as u64));
            }
        }
    }

    #[test]
    fn deletion_reassembles() {
        let all: Vec<_> = words_up_to(2, 4).collect();
        for i in &all {
            for j in &all {
                for e in embeddings(i, j) {
                    let rest = delete_along(j, &e).unwrap();
                    assert_eq!(rest.len(), j.len() - i.len());
                    let mut rebuilt = Vec::new();
                    let (mut a, mut b) = (0, 0);
                    for pos in 0..j.len() {
                        if e.positions.get(a) == Some(&pos) {
                            rebuilt.push(i.letters()[a]);
                            a += 1;
                        } else {
                            rebuilt.push(rest.letters()[b]);
                            b += 1;
                        }
                    }
                    assert_eq!(&Word::new(rebuilt), j);
                }
            }
        }
    }

    // For a fixed split K = (I, Ĩ), embeddings of L into K correspond to
    // splits L = (J, J̃) together with embeddings J -> I and J̃ -> Ĩ.
    #[test]
    fn embedding_counts_split_multiplicatively() {
        let all: Vec<_> = words_up_to(2, 4).collect();
        for k in &all {
            for l in all.iter().filter(|l| l.len() <= k.len()) {
                for cut in 0..=k.len() {
                    let (i, i_t) = k.split_at(cut);
                    let by_split: u64 = (0..=l.len())
                        .map(|c| {
                            let (j, j_t) = l.split_at(c);
                            count_embeddings(&j, &i) * count_embeddings(&j_t, &i_t)
                        })
                        .sum();
                    assert_eq!(count_embeddings(l, k), by_split, "L={l:?} K={k:?} cut={cut}");
                }
            }
        }
    }
}
