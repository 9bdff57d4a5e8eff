//! Re-expansion of series around a new center, evaluation, and the
//! compatibility condition `f_q = α(p, q)(f_p)` for finite families of germs.
//!
//! Writing `x - p = (x - q) + (q - p)` in every letter of `(x - p)^I` and
//! expanding gives one term per subword `J` of `I`, i.e. per embedding
//! `J → I`, weighted by the commutative monomial `(q - p)^{I - J}`. On
//! truncated data this is exact for polynomials; for a genuine series it is
//! the recentering of the truncation.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::coeff::{Rational, Scalar};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::series::{accumulate, NCSeries};
use crate::words::{delete_along, embeddings, Word};

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<Scalar>);

impl Point {
    pub fn origin(n: usize) -> Self {
        Point(vec![Scalar::zero(); n])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    /// `self - other`, coordinatewise.
    pub fn offset_from(&self, other: &Point) -> Result<Vec<Scalar>> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: other.dim(), found: self.dim() });
        }
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Scalar::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Open polydisk `P(center, radii)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polydisk {
    center: Point,
    radii: Vec<Rational>,
}

impl Polydisk {
    pub fn new(center: Point, radii: Vec<Rational>) -> Result<Self> {
        if radii.len() != center.dim() {
            return Err(Error::DimensionMismatch { expected: center.dim(), found: radii.len() });
        }
        if let Some(index) = radii.iter().position(|r| r <= &Rational::zero()) {
            return Err(Error::NonPositiveRadius { index });
        }
        Ok(Polydisk { center, radii })
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radii(&self) -> &[Rational] {
        &self.radii
    }

    /// Conservative containment: `|re| + |im|` of each offset must be below
    /// the radius. Points accepted here are inside the true polydisk.
    pub fn contains(&self, q: &Point) -> Result<bool> {
        let d = q.offset_from(&self.center)?;
        Ok(d.iter().zip(&self.radii).all(|(x, r)| &x.majorant() < r))
    }
}

/// A series read as an expansion in `x - base`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Germ {
    base: Point,
    series: NCSeries,
}

impl Germ {
    pub fn new(base: Point, series: NCSeries) -> Result<Self> {
        if base.dim() != series.n() {
            return Err(Error::DimensionMismatch { expected: series.n(), found: base.dim() });
        }
        Ok(Germ { base, series })
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn series(&self) -> &NCSeries {
        &self.series
    }
}

/// `a_J(q) = Σ_I Σ_{α: J → I} a_I (q - p)^{I -_α J}`.
pub fn coefficient_at(germ: &Germ, q: &Point, j: &Word) -> Result<Scalar> {
    let shift = q.offset_from(&germ.base)?;
    let mut acc = Scalar::zero();
    for (i, a) in germ.series.terms().skip_while(|(w, _)| w.len() < j.len()) {
        for e in embeddings(j, i) {
            let rest = delete_along(i, &e)?;
            let mut t = a.clone();
            for &l in rest.letters() {
                t = &t * &shift[l as usize - 1];
            }
            acc += &t;
        }
    }
    Ok(acc)
}

pub fn recenter(germ: &Germ, q: &Point, degree: usize) -> Result<Germ> {
    recenter_with(germ, q, degree, Exec::default())
}

/// The germ at `q` with coefficients `a_J(q)` for `#J <= degree`.
pub fn recenter_with(germ: &Germ, q: &Point, degree: usize, exec: Exec) -> Result<Germ> {
    let shift = q.offset_from(&germ.base)?;
    let degree = degree.min(germ.series.degree());
    let terms: Vec<(&Word, &Scalar)> = germ.series.terms().collect();
    let map = exec.map_reduce(
        &terms,
        8,
        |part| {
            let mut acc = BTreeMap::new();
            for (i, a) in part {
                // every subword of I, with the product of the shifts of the deleted letters
                let mut partial: Vec<(Vec<u32>, Scalar)> = vec![(Vec::with_capacity(i.len()), (*a).clone())];
                for &l in i.letters() {
                    let d = &shift[l as usize - 1];
                    let mut next = Vec::with_capacity(partial.len() * 2);
                    for (kept, c) in partial {
                        if !d.is_zero() {
                            next.push((kept.clone(), &c * d));
                        }
                        let mut kept = kept;
                        kept.push(l);
                        next.push((kept, c));
                    }
                    partial = next;
                }
                for (kept, c) in partial {
                    if kept.len() <= degree {
                        accumulate(&mut acc, Word::new(kept), &c);
                    }
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
    let series = NCSeries::from_map_unchecked(germ.series.n(), degree, map);
    Germ::new(q.clone(), series)
}

/// `f(q) = f_ab(q)`, summing the stored (truncated) terms.
pub fn evaluate(germ: &Germ, q: &Point) -> Result<Scalar> {
    let shift = q.offset_from(&germ.base)?;
    let mut acc = Scalar::zero();
    for (w, a) in germ.series.terms() {
        let mut t = a.clone();
        for &l in w.letters() {
            t = &t * &shift[l as usize - 1];
        }
        acc += &t;
    }
    Ok(acc)
}

/// A germ together with the polydisk on which it is claimed to converge.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Section {
    pub germ: Germ,
    pub disk: Polydisk,
}

impl Section {
    pub fn new(germ: Germ, radii: Vec<Rational>) -> Result<Self> {
        let disk = Polydisk::new(germ.base.clone(), radii)?;
        Ok(Section { germ, disk })
    }
}

/// Finitely many germs of one would-be section.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LocalFunctionFamily {
    pub members: Vec<Section>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation {
    /// Index of the germ that was recentered.
    pub from: usize,
    /// Index of the germ it was compared against.
    pub to: usize,
    pub word: Word,
    /// Coefficient of the recentered germ.
    pub expected: Scalar,
    /// Coefficient stored in the germ at the target point.
    pub found: Scalar,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "germ {} recentered at germ {}: word {} expected {} found {}",
            self.from, self.to, self.word, self.expected, self.found
        )
    }
}

impl LocalFunctionFamily {
    pub fn new(members: Vec<Section>) -> Self {
        LocalFunctionFamily { members }
    }

    pub fn check(&self, degree: usize) -> Result<Option<Violation>> {
        self.check_with(degree, Exec::default())
    }

    /// First ordered pair `(p, q)` with `q` inside the polydisk of `f_p`
    /// where recentering `f_p` at `q` disagrees with `f_q` up to `degree`.
    pub fn check_with(&self, degree: usize, exec: Exec) -> Result<Option<Violation>> {
        let mut pairs = Vec::new();
        for (a, sa) in self.members.iter().enumerate() {
            for (b, sb) in self.members.iter().enumerate() {
                if a != b && sa.disk.contains(sb.germ.base())? {
                    pairs.push((a, b));
                }
            }
        }
        let found = exec.find_first(&pairs, |&(a, b)| {
            let from = &self.members[a].germ;
            let to = &self.members[b].germ;
            let moved = match recenter_with(from, to.base(), degree, Exec::Sequential) {
                Ok(g) => g,
                Err(e) => return Some(Err(e)),
            };
            let d = moved.series.degree().min(to.series.degree());
            let expected = moved.series.truncate(d);
            let found = to.series.truncate(d);
            let mut words: Vec<&Word> = expected.terms().chain(found.terms()).map(|(w, _)| w).collect();
            words.sort();
            words.dedup();
            words.into_iter().find(|w| expected.coeff(w) != found.coeff(w)).map(|w| {
                Ok(Violation { from: a, to: b, word: w.clone(), expected: expected.coeff(w), found: found.coeff(w) })
            })
        });
        found.transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_series;
    use crate::words::{count_embeddings, words_up_to};
    use num_traits::One;
    use proptest::prelude::*;

    fn unit_radii(n: usize, r: i64) -> Vec<Rational> {
        vec![Rational::from_integer(r.into()); n]
    }

    fn s(text: &str, n: usize, d: usize) -> NCSeries {
        parse_series(text, n, d).unwrap()
    }

    fn beispiel(t: i64) -> Germ {
        Germ::new(Point::origin(2), s(&format!("x1*x2 - {t}*x2*x1"), 2, 4)).unwrap()
    }

    #[test]
    fn coefficient_examples() {
        let f = beispiel(3);
        let q = Point::from_ints(&[1, 2]);
        assert_eq!(coefficient_at(&f, &q, &Word::empty()).unwrap(), Scalar::from_int(-4));
        assert_eq!(coefficient_at(&f, &q, &Word::new(vec![1])).unwrap(), Scalar::from_int(-4));
        assert_eq!(coefficient_at(&f, &q, &Word::new(vec![2])).unwrap(), Scalar::from_int(-2));
        assert_eq!(coefficient_at(&f, &q, &Word::new(vec![1, 2])).unwrap(), Scalar::one());
        assert_eq!(coefficient_at(&f, &q, &Word::new(vec![2, 1])).unwrap(), Scalar::from_int(-3));
        assert!(coefficient_at(&f, &Point::from_ints(&[1]), &Word::empty()).is_err());
    }

    #[test]
    fn recenter_examples() {
        let f = beispiel(3);
        let q = Point::from_ints(&[1, 2]);
        let g = recenter(&f, &q, 4).unwrap();
        assert_eq!(g.series(), &s("-4 - 4*x1 - 2*x2 + x1*x2 - 3*x2*x1", 2, 4));
        assert_eq!(recenter(&f, f.base(), 4).unwrap(), f);
        let c = Germ::new(Point::origin(2), s("7/3", 2, 4)).unwrap();
        assert_eq!(recenter(&c, &q, 4).unwrap().series(), c.series());
        assert!(recenter(&f, &Point::from_ints(&[1, 2, 3]), 4).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let f = Germ::new(Point::origin(2), s("x1*x2 - x2*x1", 2, 2)).unwrap();
        assert!(evaluate(&f, &Point::from_ints(&[3, -5])).unwrap().is_zero());
        let f = Germ::new(Point::origin(1), s("1 + x1", 1, 1)).unwrap();
        assert_eq!(evaluate(&f, &Point::from_ints(&[5])).unwrap(), Scalar::from_int(6));
    }

    #[test]
    fn geometric_germ_partial_sum_within_tail_bound() {
        // 1/x1 around p1 = 2: Σ (-1)^k u^k / 2^{k+1}
        let d = 8;
        let terms = (0..=d).map(|k| (Word::new(vec![1; k]), Scalar::ratio(if k % 2 == 0 { 1 } else { -1 }, 1 << (k + 1))));
        let f = Germ::new(Point::from_ints(&[2]), NCSeries::from_terms(1, d, terms).unwrap()).unwrap();
        let q = Point(vec![Scalar::ratio(5, 2)]);
        let err = &evaluate(&f, &q).unwrap() - &Scalar::ratio(2, 5);
        assert!(err.majorant() <= Rational::new(1.into(), 1024.into()));
    }

    #[test]
    fn polydisk_containment() {
        let disk = Polydisk::new(Point::origin(2), unit_radii(2, 1)).unwrap();
        assert!(disk.contains(&Point(vec![Scalar::ratio(1, 2), Scalar::ratio(-1, 2)])).unwrap());
        assert!(!disk.contains(&Point::from_ints(&[1, 0])).unwrap());
        assert!(Polydisk::new(Point::origin(1), vec![Rational::zero()]).is_err());
    }

    fn family_from(f: &Germ, points: &[Point], radius: i64) -> LocalFunctionFamily {
        let mut members = vec![Section::new(f.clone(), unit_radii(2, radius)).unwrap()];
        for q in points {
            members.push(Section::new(recenter(f, q, 4).unwrap(), unit_radii(2, radius)).unwrap());
        }
        LocalFunctionFamily::new(members)
    }

    #[test]
    fn family_consistency() {
        let f = Germ::new(Point::origin(2), s("1 + x1 - 2*x2*x1 + x1*x2*x2", 2, 4)).unwrap();
        let pts = [Point::from_ints(&[1, 0]), Point::from_ints(&[-1, 2]), Point(vec![Scalar::ratio(1, 2), Scalar::ratio(3, 2)])];
        let fam = family_from(&f, &pts, 10);
        assert_eq!(fam.check(4).unwrap(), None);
        assert_eq!(fam.check_with(4, Exec::Sequential).unwrap(), None);

        let mut bad = fam.clone();
        let g = &bad.members[2].germ;
        let perturbed = &g.series().clone() + &s("x2", 2, 4);
        bad.members[2] = Section::new(Germ::new(g.base().clone(), perturbed).unwrap(), unit_radii(2, 10)).unwrap();
        let v = bad.check(4).unwrap().unwrap();
        assert_eq!((v.from, v.to), (0, 2));
        assert_eq!(v.word, Word::new(vec![2]));
        assert_eq!(&v.found - &v.expected, Scalar::one());
        assert_eq!(bad.check_with(4, Exec::Sequential).unwrap(), Some(v));

        // disjoint disks: nothing to compare
        let far = LocalFunctionFamily::new(vec![
            Section::new(f.clone(), unit_radii(2, 1)).unwrap(),
            Section::new(Germ::new(Point::from_ints(&[5, 5]), s("x1", 2, 4)).unwrap(), unit_radii(2, 1)).unwrap(),
        ]);
        assert_eq!(far.check(4).unwrap(), None);
    }

    fn arb_series(n: usize, d: usize) -> impl Strategy<Value = NCSeries> {
        let words: Vec<Word> = words_up_to(n, d).collect();
        proptest::collection::vec((0..words.len(), -3i64..4), 0..8).prop_map(move |ts| {
            NCSeries::from_terms(n, d, ts.into_iter().map(|(k, c)| (words[k].clone(), Scalar::from_int(c)))).unwrap()
        })
    }

    fn arb_point() -> impl Strategy<Value = Point> {
        proptest::collection::vec((-3i64..4, 1i64..3), 2).prop_map(|v| Point(v.into_iter().map(|(a, b)| Scalar::ratio(a, b)).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn recentering_is_a_homomorphism(f in arb_series(2, 4), g in arb_series(2, 4), q in arb_point()) {
            // polynomials of degree <= 4, so products are exact at degree 8
            let (f, g) = (f.with_degree(8), g.with_degree(8));
            let p = Point::origin(2);
            let rf = recenter(&Germ::new(p.clone(), f.clone()).unwrap(), &q, 8).unwrap();
            let rg = recenter(&Germ::new(p.clone(), g.clone()).unwrap(), &q, 8).unwrap();
            let rfg = recenter(&Germ::new(p.clone(), &f * &g).unwrap(), &q, 8).unwrap();
            let rsum = recenter(&Germ::new(p, &f + &g).unwrap(), &q, 8).unwrap();
            prop_assert_eq!(rfg.series(), &(rf.series() * rg.series()));
            prop_assert_eq!(rsum.series(), &(rf.series() + rg.series()));
        }

        #[test]
        fn recentering_is_transitive(f in arb_series(2, 4), q in arb_point(), r in arb_point()) {
            let f = Germ::new(Point::origin(2), f).unwrap();
            let via = recenter(&recenter(&f, &q, 4).unwrap(), &r, 4).unwrap();
            prop_assert_eq!(via, recenter(&f, &r, 4).unwrap());
        }

        #[test]
        fn coefficients_match_binomial_form(f in arb_series(2, 4), q in arb_point()) {
            let germ = Germ::new(Point::origin(2), f.clone()).unwrap();
            let moved = recenter(&germ, &q, 4).unwrap();
            for j in words_up_to(2, 4) {
                let by_embeddings = coefficient_at(&germ, &q, &j).unwrap();
                // Σ_I binom(I, J) a_I (q-p)^{I-J}, the deleted multiset taken from letter counts
                let mut collapsed = Scalar::zero();
                for (i, a) in f.terms() {
                    let c = count_embeddings(&j, i);
                    if c == 0 { continue; }
                    let (ei, ej) = (i.exponents(2), j.exponents(2));
                    let mut t = a * &Scalar::from_int(c as i64);
                    for k in 0..2 {
                        t = &t * &q.0[k].pow(ei[k] - ej[k]);
                    }
                    collapsed += &t;
                }
                prop_assert_eq!(&by_embeddings, &collapsed);
                prop_assert_eq!(&moved.series().coeff(&j), &by_embeddings);
            }
        }

        #[test]
        fn parallel_matches_sequential(f in arb_series(2, 4), q in arb_point()) {
            let germ = Germ::new(Point::origin(2), f).unwrap();
            prop_assert_eq!(recenter_with(&germ, &q, 4, Exec::Parallel).unwrap(), recenter_with(&germ, &q, 4, Exec::Sequential).unwrap());
        }
    }
}
