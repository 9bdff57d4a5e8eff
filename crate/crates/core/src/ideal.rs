//! Completed two-sided ideals at finite truncation degree.
//!
//! An element `Σ c·u ⊗ v^op` of the enveloping algebra acts on a series by
//! `f ↦ Σ c·u·f·v`. Up to degree `D` the completion of the ideal generated by
//! `g_1, ..., g_m` is the linear span of the truncated sandwiches `u·g_i·v`:
//! a summable family only contributes finitely many terms to each word. The
//! span is kept in reduced row-echelon form with graded-lex greatest pivots,
//! so bases and quotient normal forms are canonical.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::coeff::Scalar;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::Echelon;
use crate::series::{accumulate, NCSeries};
use crate::words::{words_up_to, Word};

/// A finite sum of sandwich terms `(u, v, c)`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct EnvElement {
    terms: BTreeMap<(Word, Word), Scalar>,
}

impl EnvElement {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::sandwich(Word::empty(), Word::empty(), Scalar::one())
    }

    pub fn sandwich(left: Word, right: Word, c: Scalar) -> Self {
        let mut e = Self::new();
        e.push(left, right, c);
        e
    }

    pub fn push(&mut self, left: Word, right: Word, c: Scalar) {
        accumulate(&mut self.terms, (left, right), &c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Word, &Scalar)> {
        self.terms.iter().map(|((u, v), c)| (u, v, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ c·u·f·v`, truncated at the degree of `f`.
    pub fn apply(&self, f: &NCSeries) -> Result<NCSeries> {
        let mut acc = BTreeMap::new();
        let d = f.degree();
        for ((u, v), c) in &self.terms {
            for w in u.letters().iter().chain(v.letters()) {
                if *w == 0 || *w as usize > f.n() {
                    return Err(Error::LetterOutOfRange { letter: *w, n: f.n() });
                }
            }
            if u.len() + v.len() > d {
                continue;
            }
            for (w, a) in f.terms().take_while(|(w, _)| w.len() + u.len() + v.len() <= d) {
                accumulate(&mut acc, u.concat(w).concat(v), &(c * a));
            }
        }
        Ok(NCSeries::from_map_unchecked(f.n(), d, acc))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SandwichTerm {
    pub left: Word,
    pub right: Word,
    pub coeff: Scalar,
    pub generator: usize,
}

/// Expresses a series as `Σ coeff·left·g_generator·right`.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Certificate {
    pub terms: Vec<SandwichTerm>,
}

impl Certificate {
    /// One enveloping-algebra element per generator that occurs.
    pub fn by_generator(&self) -> Vec<(usize, EnvElement)> {
        let mut grouped: BTreeMap<usize, EnvElement> = BTreeMap::new();
        for t in &self.terms {
            grouped.entry(t.generator).or_default().push(t.left.clone(), t.right.clone(), t.coeff.clone());
        }
        grouped.into_iter().collect()
    }

    /// `Σ_i e_i(g_i)` at the degree of the generators.
    pub fn evaluate(&self, generators: &[NCSeries], n: usize, degree: usize) -> Result<NCSeries> {
        let mut acc = NCSeries::zero(n, degree);
        for (g, env) in self.by_generator() {
            let gen = generators
                .get(g)
                .ok_or_else(|| Error::Format(format!("certificate names generator {g}")))?;
            acc = acc.checked_add(&env.apply(&gen.truncate(degree))?)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.terms {
            writeln!(f, "({}, {}, {}, g{})", t.left, t.right, t.coeff, t.generator)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub member: bool,
    /// Normal form of the query; zero iff `member`.
    pub remainder: NCSeries,
    /// Present for members.
    pub certificate: Option<Certificate>,
}

/// Degree-`D` part of the completed ideal `(g_1, ..., g_m)`.
#[derive(Clone, Debug)]
pub struct CompletedIdealBasis {
    n: usize,
    degree: usize,
    generators: Vec<NCSeries>,
    sandwiches: Vec<(Word, Word, usize)>,
    echelon: Echelon<Word>,
}

impl CompletedIdealBasis {
    pub fn build(generators: &[NCSeries], n: usize, degree: usize) -> Result<Self> {
        Self::build_with(generators, n, degree, Exec::default())
    }

    pub fn build_with(generators: &[NCSeries], n: usize, degree: usize, exec: Exec) -> Result<Self> {
        for g in generators {
            if g.n() != n {
                return Err(Error::AlphabetMismatch { left: n, right: g.n() });
            }
        }
        let generators: Vec<NCSeries> = generators.iter().map(|g| g.with_degree(degree.min(g.degree()))).collect();
        let mut sandwiches = Vec::new();
        for (i, g) in generators.iter().enumerate() {
            let Some(order) = g.order() else { continue };
            if order > degree {
                continue;
            }
            let room = degree - order;
            for u in words_up_to(n, room) {
                for v in words_up_to(n, room - u.len()) {
                    sandwiches.push((u.clone(), v, i));
                }
            }
        }

        let full = crate::words::count_words_up_to(n, degree);
        let mut echelon = Echelon::new(true);
        // vectors are computed in parallel batches, inserted in order
        for (b, batch) in sandwiches.chunks(256).enumerate() {
            if echelon.rank() == full {
                break;
            }
            let vectors = exec.map(batch, |(u, v, i)| {
                let g = &generators[*i];
                EnvElement::sandwich(u.clone(), v.clone(), Scalar::one())
                    .apply(&g.with_degree(degree))
                    .map(|s| s.term_map().clone())
            });
            for (k, vec) in vectors.into_iter().enumerate() {
                echelon.insert(vec?, b * 256 + k);
            }
        }
        Ok(CompletedIdealBasis { n, degree, generators, sandwiches, echelon })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[NCSeries] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.echelon.rank()
    }

    /// Basis elements in pivot order.
    pub fn basis(&self) -> Vec<NCSeries> {
        self.echelon
            .rows()
            .map(|r| NCSeries::from_map_unchecked(self.n, self.degree, r.vector.clone()))
            .collect()
    }

    pub fn lead_words(&self) -> Vec<Word> {
        self.echelon.rows().map(|r| r.pivot.clone()).collect()
    }

    /// Words that are not pivots: a basis of the quotient up to `degree`.
    pub fn normal_words(&self) -> Vec<Word> {
        words_up_to(self.n, self.degree).filter(|w| !self.echelon.is_pivot(w)).collect()
    }

    fn prepare(&self, f: &NCSeries) -> Result<NCSeries> {
        if f.n() != self.n {
            return Err(Error::AlphabetMismatch { left: self.n, right: f.n() });
        }
        Ok(f.truncate(self.degree))
    }

    /// Membership modulo words longer than the degree of `f` (at most the
    /// degree of the basis), with a certificate for members.
    pub fn member_of(&self, f: &NCSeries) -> Result<Membership> {
        let f = self.prepare(f)?;
        if f.degree() < self.degree {
            return CompletedIdealBasis::build(&self.generators, self.n, f.degree())?.member_of(&f);
        }
        let (rem, combination) = self.echelon.reduce(f.term_map());
        let remainder = NCSeries::from_map_unchecked(self.n, self.degree, rem);
        let member = remainder.is_zero();
        let certificate = member.then(|| {
            let mut grouped = BTreeMap::new();
            for (s, c) in combination {
                let (u, v, g) = &self.sandwiches[s];
                accumulate(&mut grouped, (*g, u.clone(), v.clone()), &c);
            }
            Certificate {
                terms: grouped
                    .into_iter()
                    .map(|((generator, left, right), coeff)| SandwichTerm { left, right, coeff, generator })
                    .collect(),
            }
        });
        Ok(Membership { member, remainder, certificate })
    }

    /// The representative of `f + I` supported on non-pivot words.
    pub fn normal_form(&self, f: &NCSeries) -> Result<NCSeries> {
        let f = self.prepare(f)?;
        if f.degree() < self.degree {
            return CompletedIdealBasis::build(&self.generators, self.n, f.degree())?.normal_form(&f);
        }
        let (rem, _) = self.echelon.reduce(f.term_map());
        Ok(NCSeries::from_map_unchecked(self.n, self.degree, rem))
    }
}

/// `[x_a, x_b]` as a series.
pub fn commutator(n: usize, degree: usize, a: u32, b: u32) -> NCSeries {
    NCSeries::from_terms(
        n,
        degree,
        [(Word::new(vec![a, b]), Scalar::one()), (Word::new(vec![b, a]), -Scalar::one())],
    )
    .expect("letters in range")
}

/// The commutators `[x_i, x_j]`, `i < j`.
pub fn commutator_generators(n: usize, degree: usize) -> Vec<NCSeries> {
    let mut out = Vec::new();
    for i in 1..=n as u32 {
        for j in i + 1..=n as u32 {
            out.push(commutator(n, degree, i, j));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommutatorTerm {
    /// `(a, b)` with `a < b`, standing for `[x_a, x_b]`.
    pub pair: (u32, u32),
    pub env: EnvElement,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommutatorReduction {
    pub commlike: NCSeries,
    pub terms: Vec<CommutatorTerm>,
}

impl CommutatorReduction {
    /// `Σ env([x_a, x_b])`, which equals `f - commlike`.
    pub fn kernel_part(&self) -> Result<NCSeries> {
        let (n, d) = (self.commlike.n(), self.commlike.degree());
        let mut acc = NCSeries::zero(n, d);
        for t in &self.terms {
            acc = acc.checked_add(&t.env.apply(&commutator(n, d, t.pair.0, t.pair.1))?)?;
        }
        Ok(acc)
    }

    pub fn sandwich_count(&self) -> usize {
        self.terms.iter().map(|t| t.env.len()).sum()
    }
}

/// Splits `f` into its commlike part `unab(ab(f))` and an explicit element of
/// the completed commutator ideal. Each word is bubble-sorted; swapping an
/// adjacent descent `u·x_b·x_a·v` (`b > a`) into `u·x_a·x_b·v` emits the
/// sandwich `-c·u·[x_a, x_b]·v`.
pub fn commutator_reduce(f: &NCSeries) -> CommutatorReduction {
    let mut commlike = BTreeMap::new();
    let mut by_pair: BTreeMap<(u32, u32), EnvElement> = BTreeMap::new();
    for (w, c) in f.terms() {
        let mut letters = w.letters().to_vec();
        while let Some(k) = letters.windows(2).position(|p| p[0] > p[1]) {
            let (b, a) = (letters[k], letters[k + 1]);
            let left = Word::from(&letters[..k]);
            let right = Word::from(&letters[k + 2..]);
            by_pair.entry((a, b)).or_default().push(left, right, -c);
            letters.swap(k, k + 1);
        }
        accumulate(&mut commlike, Word::new(letters), c);
    }
    CommutatorReduction {
        commlike: NCSeries::from_map_unchecked(f.n(), f.degree(), commlike),
        terms: by_pair
            .into_iter()
            .filter(|(_, env)| !env.is_empty())
            .map(|(pair, env)| CommutatorTerm { pair, env })
            .collect(),
    }
}
