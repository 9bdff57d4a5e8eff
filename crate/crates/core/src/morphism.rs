//! Substitution morphisms `g ↦ g(f_1, ..., f_n)` between truncated
//! noncommutative power series algebras, their composition, Jacobian
//! criterion and degree-by-degree inversion.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};

use crate::coeff::Scalar;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::Matrix;
use crate::series::{accumulate, CommSeries, NCSeries};
use crate::words::{words_up_to, Word};

/// A local homomorphism from the algebra in `source_vars` letters to the
/// algebra in `target_vars` letters, given by the images of the letters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NCMorphism {
    source_vars: usize,
    target_vars: usize,
    degree: usize,
    images: Vec<NCSeries>,
}

impl NCMorphism {
    /// Images are truncated to `degree`; each must lie in the maximal ideal.
    pub fn new(source_vars: usize, target_vars: usize, degree: usize, images: Vec<NCSeries>) -> Result<Self> {
        if images.len() != source_vars {
            return Err(Error::ImageCount { expected: source_vars, found: images.len() });
        }
        let mut degree = degree;
        for (index, f) in images.iter().enumerate() {
            if f.n() != target_vars {
                return Err(Error::AlphabetMismatch { left: target_vars, right: f.n() });
            }
            if !f.in_maximal_ideal() {
                return Err(Error::ImageNotInMaximalIdeal { index });
            }
            degree = degree.min(f.degree());
        }
        let images = images.iter().map(|f| f.truncate(degree)).collect();
        Ok(NCMorphism { source_vars, target_vars, degree, images })
    }

    pub fn identity(n: usize, degree: usize) -> Self {
        let images = (1..=n as u32)
            .map(|k| NCSeries::variable(n, degree, k).expect("letter in range"))
            .collect();
        NCMorphism { source_vars: n, target_vars: n, degree, images }
    }

    /// `x_ν ↦ Σ_i m[ν][i] y_i`.
    pub fn linear(m: &Matrix, degree: usize) -> Self {
        let images = (0..m.rows())
            .map(|nu| {
                let terms = (0..m.cols()).map(|i| (Word::letter(i as u32 + 1), m.get(nu, i).clone()));
                NCSeries::from_terms(m.cols(), degree, terms).expect("letters in range")
            })
            .collect();
        NCMorphism { source_vars: m.rows(), target_vars: m.cols(), degree, images }
    }

    pub fn source_vars(&self) -> usize {
        self.source_vars
    }

    pub fn target_vars(&self) -> usize {
        self.target_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn images(&self) -> &[NCSeries] {
        &self.images
    }

    pub fn truncate(&self, degree: usize) -> NCMorphism {
        let degree = degree.min(self.degree);
        NCMorphism {
            source_vars: self.source_vars,
            target_vars: self.target_vars,
            degree,
            images: self.images.iter().map(|f| f.truncate(degree)).collect(),
        }
    }

    fn check_source(&self, g: &NCSeries) -> Result<()> {
        if g.n() != self.source_vars {
            return Err(Error::AlphabetMismatch { left: self.source_vars, right: g.n() });
        }
        Ok(())
    }

    pub fn substitute(&self, g: &NCSeries) -> Result<NCSeries> {
        self.substitute_with(g, Exec::default())
    }

    /// `g(f_1, ..., f_n)`: every letter `k` of every word of `g` is replaced
    /// by the image `f_k`, products expanded without reordering.
    pub fn substitute_with(&self, g: &NCSeries, exec: Exec) -> Result<NCSeries> {
        self.check_source(g)?;
        let degree = g.degree().min(self.degree);
        let m = self.target_vars;

        // Products for every prefix of every word of g, level by level.
        let words: Vec<&Word> = g.terms().map(|(w, _)| w).take_while(|w| w.len() <= degree).collect();
        let max_len = words.last().map_or(0, |w| w.len());
        let mut products: HashMap<Word, NCSeries> = HashMap::new();
        products.insert(Word::empty(), NCSeries::one(m, degree));
        for len in 1..=max_len {
            let level: BTreeSet<Word> = words
                .iter()
                .filter(|w| w.len() >= len)
                .map(|w| w.split_at(len).0)
                .collect();
            let level: Vec<Word> = level.into_iter().collect();
            let computed = exec.map(&level, |w| {
                let (prefix, last) = w.split_at(len - 1);
                let image = &self.images[last.letters()[0] as usize - 1];
                products[&prefix].mul_with(image, Exec::Sequential).expect("same alphabet")
            });
            products.extend(level.into_iter().zip(computed));
        }

        let terms: Vec<(&Word, &Scalar)> = g.terms().take_while(|(w, _)| w.len() <= degree).collect();
        let acc = exec.map_reduce(
            &terms,
            16,
            |part| {
                let mut acc = BTreeMap::new();
                for (w, b) in part {
                    for (k, a) in products[*w].terms() {
                        accumulate(&mut acc, k.clone(), &(*b * a));
                    }
                }
                acc
            },
            BTreeMap::new(),
            |mut a, b| {
                for (k, c) in b {
                    accumulate(&mut a, k, &c);
                }
                a
            },
        );
        Ok(NCSeries::from_map_unchecked(m, degree, acc))
    }

    /// Same result as [`substitute`](Self::substitute), computed word by word
    /// from the composition formula: the coefficient of `K` is the sum over
    /// words `I` of `g` and factorizations `K = J_1 + ... + J_{#I}` into
    /// nonempty pieces of `b_I · a_{i_1,J_1} ⋯ a_{i_#I,J_#I}`.
    pub fn substitute_by_factorizations(&self, g: &NCSeries) -> Result<NCSeries> {
        self.check_source(g)?;
        let degree = g.degree().min(self.degree);

        fn ways(images: &[NCSeries], word: &[u32], target: &[u32]) -> Scalar {
            let Some((&first, rest)) = word.split_first() else {
                return if target.is_empty() { Scalar::one() } else { Scalar::zero() };
            };
            let mut acc = Scalar::zero();
            // leave at least one letter of `target` for each remaining letter of `word`
            for cut in 1..=target.len().saturating_sub(rest.len()) {
                let a = images[first as usize - 1].coeff(&Word::from(&target[..cut]));
                if a.is_zero() {
                    continue;
                }
                let tail = ways(images, rest, &target[cut..]);
                if !tail.is_zero() {
                    acc += &(&a * &tail);
                }
            }
            acc
        }

        let terms = words_up_to(self.target_vars, degree).map(|k| {
            let mut c = Scalar::zero();
            for (i, b) in g.terms().take_while(|(w, _)| w.len() <= k.len()) {
                c += &(b * &ways(&self.images, i.letters(), k.letters()));
            }
            (k, c)
        });
        NCSeries::from_terms(self.target_vars, degree, terms)
    }

    /// `self` followed by `inner`: image `ν` of the result is
    /// `inner` applied to `self.images[ν]`.
    pub fn compose(&self, inner: &NCMorphism) -> Result<NCMorphism> {
        self.compose_with(inner, Exec::default())
    }

    pub fn compose_with(&self, inner: &NCMorphism, exec: Exec) -> Result<NCMorphism> {
        if self.target_vars != inner.source_vars {
            return Err(Error::ChainMismatch { left: self.target_vars, right: inner.source_vars });
        }
        let images = self
            .images
            .iter()
            .map(|f| inner.substitute_with(f, exec))
            .collect::<Result<Vec<_>>>()?;
        NCMorphism::new(self.source_vars, inner.target_vars, self.degree.min(inner.degree), images)
    }

    /// Degree-one coefficients `a_{ν,i}`; only defined for endomorphisms.
    pub fn jacobian(&self) -> Result<Matrix> {
        if self.source_vars != self.target_vars {
            return Err(Error::NotEndomorphism { source_vars: self.source_vars, target_vars: self.target_vars });
        }
        Ok(self.linear_part())
    }

    fn linear_part(&self) -> Matrix {
        let mut m = Matrix::zeros(self.source_vars, self.target_vars);
        for (nu, f) in self.images.iter().enumerate() {
            for i in 0..self.target_vars {
                m.set(nu, i, f.coeff(&Word::letter(i as u32 + 1)));
            }
        }
        m
    }

    /// An endomorphism is an automorphism iff its Jacobian is invertible.
    pub fn is_automorphism(&self) -> Result<bool> {
        Ok(!self.jacobian()?.determinant().is_zero())
    }

    pub fn invert(&self, degree: usize) -> Result<NCMorphism> {
        self.invert_with(degree, Exec::default())
    }

    /// Two-sided inverse modulo words longer than `degree`, built degree by
    /// degree: once the coefficients `b_{μ,J}` are known for `#J < k`, the
    /// coefficients for `#J = k` solve `Jf · b_J = -h_J`, where `h` collects
    /// what the nonlinear part of `f` contributes at `J`.
    pub fn invert_with(&self, degree: usize, exec: Exec) -> Result<NCMorphism> {
        let jac = self.jacobian()?;
        let jac_inv = jac.inverse().ok_or_else(|| Error::SingularJacobian { matrix: jac.to_string() })?;
        let n = self.source_vars;
        let degree = degree.min(self.degree);

        let mut coeffs: Vec<BTreeMap<Word, Scalar>> = vec![BTreeMap::new(); n];
        if degree >= 1 {
            for (mu, c) in coeffs.iter_mut().enumerate() {
                for j in 0..n {
                    accumulate(c, Word::letter(j as u32 + 1), jac_inv.get(mu, j));
                }
            }
        }
        let nonlinear: Vec<NCSeries> = self
            .images
            .iter()
            .map(|f| f.checked_sub(&f.component(1)).expect("same alphabet"))
            .collect();

        for k in 2..=degree {
            let partial = NCMorphism {
                source_vars: n,
                target_vars: n,
                degree: k,
                images: coeffs.iter().map(|c| NCSeries::from_map_unchecked(n, k, c.clone())).collect(),
            };
            let known: Vec<NCSeries> = nonlinear
                .iter()
                .map(|h| partial.substitute_with(&h.truncate(k), exec).map(|s| s.component(k)))
                .collect::<Result<_>>()?;
            let words: BTreeSet<&Word> = known.iter().flat_map(|h| h.terms().map(|(w, _)| w)).collect();
            let words: Vec<&Word> = words.into_iter().collect();
            let solved = exec.map(&words, |w| {
                let rhs: Vec<Scalar> = known.iter().map(|h| -h.coeff(w)).collect();
                jac_inv.apply(&rhs)
            });
            for (w, b) in words.into_iter().zip(solved) {
                for (mu, c) in b.iter().enumerate() {
                    accumulate(&mut coeffs[mu], w.clone(), c);
                }
            }
        }

        let images = coeffs.into_iter().map(|c| NCSeries::from_map_unchecked(n, degree, c)).collect();
        Ok(NCMorphism { source_vars: n, target_vars: n, degree, images })
    }

    /// Commutative shadow: the abelianized images.
    pub fn ab(&self) -> Vec<CommSeries> {
        self.images.iter().map(NCSeries::ab).collect()
    }
}

/// Two-sided inverse of a series with nonzero constant term modulo words
/// longer than `degree`: with `f = c·h`, `h(0) = 1`, the inverse is
/// `(Σ_j (1-h)^j) / c`.
pub fn invert_unit(f: &NCSeries, degree: usize) -> Result<NCSeries> {
    let c = f.constant_term();
    if c.is_zero() {
        return Err(Error::NotAUnit);
    }
    let degree = degree.min(f.degree());
    let c_inv = c.inv()?;
    let h = f.truncate(degree).scale(&c_inv);
    let s = NCSeries::one(f.n(), degree).checked_sub(&h)?;
    // (1-h)^j has order >= j, so j <= degree suffices.
    let mut family = Vec::with_capacity(degree + 1);
    let mut power = NCSeries::one(f.n(), degree);
    for _ in 0..=degree {
        let next = &power * &s;
        family.push(power);
        power = next;
    }
    Ok(NCSeries::sum_family(f.n(), degree, &family)?.scale(&c_inv))
}

/// Lifts a commutative morphism through `unab`.
pub fn lift_commutative_morphism(images: &[CommSeries], degree: usize) -> Result<NCMorphism> {
    let target = images.first().map_or(0, CommSeries::n);
    for (index, g) in images.iter().enumerate() {
        if g.order() == Some(0) {
            return Err(Error::ImageNotInMaximalIdeal { index });
        }
    }
    NCMorphism::new(images.len(), target, degree, images.iter().map(CommSeries::unab).collect())
}
