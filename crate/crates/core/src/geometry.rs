//! Geometric examples: local models cut out by split ideals, supermanifold
//! relations, transition germs of noncommutative projective space and
//! homogeneous lifts.
//!
//! Charts of projective `n`-space are indexed by `0..=n`. Chart `i` has the
//! affine coordinates `u_k = z_k / z_i`, `k ≠ i`, numbered `1..=n` in
//! increasing order of `k`. The transition from chart `i` to chart `j` sends
//! `u_k` to `u_j⁻¹·u_k`, always with the inverted coordinate on the left;
//! with this convention the transitions compose exactly.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::coeff::Scalar;
use crate::error::{Error, Result};
use crate::ideal::{commutator, CompletedIdealBasis};
use crate::linalg::Echelon;
use crate::morphism::{invert_unit, NCMorphism};
use crate::recenter::Point;
use crate::series::{CommSeries, Monomial, NCSeries};
use crate::words::{words_up_to, Word};

/// Zero set of the abelianized generators together with the ideal they
/// generate in the noncommutative algebra.
#[derive(Clone, Debug)]
pub struct LocalModel {
    n: usize,
    degree: usize,
    sample_points: Vec<Point>,
    generators: Vec<NCSeries>,
    commutative: Vec<CommSeries>,
}

/// Lifts the commutative generators through `unab` after checking that each
/// vanishes at every sample point.
pub fn split_local_model(
    n: usize,
    generators: &[CommSeries],
    sample_points: &[Point],
    degree: usize,
) -> Result<LocalModel> {
    for p in sample_points {
        if p.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
        }
    }
    for (gi, g) in generators.iter().enumerate() {
        if g.n() != n {
            return Err(Error::AlphabetMismatch { left: n, right: g.n() });
        }
        for (pi, p) in sample_points.iter().enumerate() {
            if !g.evaluate(p.coords())?.is_zero() {
                return Err(Error::NonVanishing { generator: gi, point: pi });
            }
        }
    }
    let commutative: Vec<CommSeries> = generators.iter().map(|g| g.truncate(degree)).collect();
    Ok(LocalModel {
        n,
        degree,
        sample_points: sample_points.to_vec(),
        generators: commutative.iter().map(CommSeries::unab).collect(),
        commutative,
    })
}

impl LocalModel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn sample_points(&self) -> &[Point] {
        &self.sample_points
    }

    pub fn generators(&self) -> &[NCSeries] {
        &self.generators
    }

    pub fn ideal(&self) -> Result<CompletedIdealBasis> {
        CompletedIdealBasis::build(&self.generators, self.n, self.degree)
    }

    /// Whether `ab` maps the noncommutative ideal onto the commutative ideal
    /// of the original generators, degreewise up to the model degree.
    pub fn ab_matches_commutative_ideal(&self) -> Result<bool> {
        let mut from_nc = Echelon::new(false);
        for (k, b) in self.ideal()?.basis().iter().enumerate() {
            from_nc.insert(comm_vector(&b.ab()), k);
        }
        let commutative = commutative_ideal(&self.commutative, self.n, self.degree)?;
        let rows = |e: &Echelon<Monomial>| e.rows().map(|r| r.vector.clone()).collect::<Vec<_>>();
        Ok(rows(&from_nc) == rows(&commutative))
    }
}

fn comm_vector(f: &CommSeries) -> BTreeMap<Monomial, Scalar> {
    f.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

/// Span of all monomial multiples `m·g` truncated at `degree`.
fn commutative_ideal(generators: &[CommSeries], n: usize, degree: usize) -> Result<Echelon<Monomial>> {
    let monomials: Vec<Vec<u32>> = words_up_to(n, degree)
        .filter(Word::is_ordered)
        .map(|w| w.exponents(n))
        .collect();
    let mut echelon = Echelon::new(false);
    let mut k = 0;
    for g in generators {
        for e in &monomials {
            let m = CommSeries::from_terms(n, degree, [(e.clone(), Scalar::one())])?;
            echelon.insert(comm_vector(&m.checked_mul(g)?), k);
            k += 1;
        }
    }
    Ok(echelon)
}

/// Relations of a supermanifold chart on letters `x_1..x_n` (numbered
/// `1..=n`) and odd letters `y_1..y_r` (numbered `n+1..=n+r`):
/// `[x_i, x_j]` for `i < j`, `[x_i, y_j]`, and `y_i y_j + y_j y_i` for
/// `i ≤ j`. Shifting `x` by a base point does not change a commutator.
pub fn super_relations(n: usize, r: usize, degree: usize) -> Vec<NCSeries> {
    let total = n + r;
    let x = |i: usize| i as u32;
    let y = |j: usize| (n + j) as u32;
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            out.push(commutator(total, degree, x(i), x(j)));
        }
    }
    for i in 1..=n {
        for j in 1..=r {
            out.push(commutator(total, degree, x(i), y(j)));
        }
    }
    for i in 1..=r {
        for j in i..=r {
            let terms = [(Word::new(vec![y(i), y(j)]), Scalar::one()), (Word::new(vec![y(j), y(i)]), Scalar::one())];
            out.push(NCSeries::from_terms(total, degree, terms).expect("letters in range"));
        }
    }
    out
}

pub fn super_relation_ideal(n: usize, r: usize, degree: usize) -> Result<CompletedIdealBasis> {
    CompletedIdealBasis::build(&super_relations(n, r, degree), n + r, degree)
}

/// Commutative homogeneous polynomial lifted to its commlike representative.
pub fn homogeneous_lift(f: &CommSeries) -> Result<NCSeries> {
    f.homogeneous_degree()?;
    Ok(f.unab())
}

/// Homogeneous indices of the affine coordinates of `chart`.
pub fn chart_coordinates(n: usize, chart: usize) -> Vec<usize> {
    (0..=n).filter(|&k| k != chart).collect()
}

fn check_chart(n: usize, chart: usize) -> Result<()> {
    if chart > n {
        return Err(Error::BadChart { chart, n });
    }
    Ok(())
}

/// Homogeneous coordinates `(z_0, ..., z_n)` of a point given in `chart`.
fn homogeneous(n: usize, chart: usize, p: &Point) -> Result<Vec<Scalar>> {
    check_chart(n, chart)?;
    if p.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
    }
    let mut z = p.coords().to_vec();
    z.insert(chart, Scalar::one());
    Ok(z)
}

/// Classical coordinates in chart `to` of the point `p` of chart `from`.
pub fn chart_point(n: usize, from: usize, to: usize, p: &Point) -> Result<Point> {
    check_chart(n, to)?;
    let z = homogeneous(n, from, p)?;
    let inv = z[to].inv().map_err(|_| Error::ZeroCoordinate { chart: to })?;
    Ok(Point(chart_coordinates(n, to).into_iter().map(|k| &z[k] * &inv).collect()))
}

/// Germ of the transition from chart `from` at `at` to chart `to` at
/// `image`. `map` sends the local coordinate `y_m - image_m` of chart `to`
/// to a series in the local coordinates `x - at` of chart `from`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionGerm {
    pub from: usize,
    pub to: usize,
    pub at: Point,
    pub image: Point,
    pub map: NCMorphism,
}

pub fn projective_transition(n: usize, from: usize, to: usize, p: &Point, degree: usize) -> Result<TransitionGerm> {
    if from == to {
        return Err(Error::RepeatedChart { chart: from });
    }
    let image = chart_point(n, from, to, p)?;
    let coords = chart_coordinates(n, from);
    // u_k = p_k + t_k, and u_from = 1
    let affine = |k: usize| -> NCSeries {
        match coords.iter().position(|&c| c == k) {
            Some(pos) => {
                let t = NCSeries::variable(n, degree, pos as u32 + 1).expect("letter in range");
                &NCSeries::constant(n, degree, p.coords()[pos].clone()) + &t
            }
            None => NCSeries::one(n, degree),
        }
    };
    let inverse = invert_unit(&affine(to), degree)?;
    let images = chart_coordinates(n, to)
        .into_iter()
        .zip(image.coords())
        .map(|(k, q)| &(&inverse * &affine(k)) - &NCSeries::constant(n, degree, q.clone()))
        .collect();
    let map = NCMorphism::new(n, n, degree, images)?;
    Ok(TransitionGerm { from, to, at: p.clone(), image, map })
}

/// Largest `d ≤ degree` such that the images agree on all words of length at
/// most `d`.
fn agreement_degree(a: &NCMorphism, b: &NCMorphism) -> usize {
    let degree = a.degree().min(b.degree());
    (1..=degree)
        .take_while(|&d| a.images().iter().zip(b.images()).all(|(f, g)| f.component(d) == g.component(d)))
        .last()
        .unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairCheck {
    pub from: usize,
    pub to: usize,
    pub at: Point,
    /// Degree up to which the round trip agrees with the identity.
    pub agrees_to: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CocycleReport {
    pub n: usize,
    pub charts: (usize, usize, usize),
    pub at: Point,
    pub degree: usize,
    pub pairs: Vec<PairCheck>,
    /// Degree up to which the composite through the middle chart agrees
    /// with the direct transition.
    pub agrees_to: usize,
}

impl CocycleReport {
    pub fn holds(&self) -> bool {
        self.agrees_to == self.degree && self.pairs.iter().all(|p| p.agrees_to == self.degree)
    }
}

fn pair_check(n: usize, from: usize, to: usize, p: &Point, degree: usize) -> Result<PairCheck> {
    let forward = projective_transition(n, from, to, p, degree)?;
    let back = projective_transition(n, to, from, &forward.image, degree)?;
    let round = back.map.compose(&forward.map)?;
    Ok(PairCheck { from, to, at: p.clone(), agrees_to: agreement_degree(&round, &NCMorphism::identity(n, degree)) })
}

/// Compares the composite of the transitions `i → j → k` with the direct
/// transition `i → k` at `p` (a point of chart `i`), and checks the three
/// round trips `a → b → a`.
pub fn check_cocycle(n: usize, charts: (usize, usize, usize), p: &Point, degree: usize) -> Result<CocycleReport> {
    let (i, j, k) = charts;
    for c in [i, j, k] {
        check_chart(n, c)?;
    }
    if i == j || i == k {
        return Err(Error::RepeatedChart { chart: i });
    }
    if j == k {
        return Err(Error::RepeatedChart { chart: j });
    }
    let ij = projective_transition(n, i, j, p, degree)?;
    let jk = projective_transition(n, j, k, &ij.image, degree)?;
    let ik = projective_transition(n, i, k, p, degree)?;
    let agrees_to = if jk.image == ik.image { agreement_degree(&jk.map.compose(&ij.map)?, &ik.map) } else { 0 };
    let pairs = vec![
        pair_check(n, i, j, p, degree)?,
        pair_check(n, j, k, &ij.image, degree)?,
        pair_check(n, i, k, p, degree)?,
    ];
    Ok(CocycleReport { n, charts, at: p.clone(), degree, pairs, agrees_to })
}

/// Every ordered triple of distinct charts, with `p` given in chart 0 and
/// moved classically to the first chart of each triple.
pub fn check_atlas(n: usize, p: &Point, degree: usize) -> Result<Vec<CocycleReport>> {
    let mut reports = Vec::new();
    for i in 0..=n {
        let base = if i == 0 { p.clone() } else { chart_point(n, 0, i, p)? };
        for j in (0..=n).filter(|&j| j != i) {
            for k in (0..=n).filter(|&k| k != i && k != j) {
                reports.push(check_cocycle(n, (i, j, k), &base, degree)?);
            }
        }
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_series;
    use crate::series::CommSeries;
    use proptest::prelude::*;

    fn s(text: &str, n: usize, d: usize) -> NCSeries {
        parse_series(text, n, d).unwrap()
    }

    fn c(terms: &[(&[u32], i64)], n: usize, d: usize) -> CommSeries {
        CommSeries::from_terms(n, d, terms.iter().map(|(e, v)| (e.to_vec(), Scalar::from_int(*v)))).unwrap()
    }

    fn w(v: &[u32]) -> Word {
        Word::from(v)
    }

    #[test]
    fn local_model_examples() {
        let m = split_local_model(2, &[c(&[(&[1, 1], 1)], 2, 3)], &[], 3).unwrap();
        assert_eq!(m.generators(), &[s("x1*x2", 2, 3)]);
        let m = split_local_model(2, &[], &[Point::from_ints(&[5, 7])], 3).unwrap();
        assert_eq!(m.ideal().unwrap().dim(), 0);

        let g = c(&[(&[2, 0], 1), (&[0, 1], -1)], 2, 3);
        assert!(split_local_model(2, std::slice::from_ref(&g), &[Point::from_ints(&[1, 1])], 3).is_ok());
        assert_eq!(
            split_local_model(2, &[g], &[Point::from_ints(&[1, 1]), Point::from_ints(&[1, 0])], 3).unwrap_err(),
            Error::NonVanishing { generator: 0, point: 1 }
        );
    }

    #[test]
    fn local_model_abelianizes_to_the_commutative_ideal() {
        let gens = [c(&[(&[2, 0], 1), (&[0, 1], -1)], 2, 4), c(&[(&[1, 1], 2), (&[0, 3], 1)], 2, 4)];
        let m = split_local_model(2, &gens, &[Point::origin(2)], 4).unwrap();
        assert!(m.ab_matches_commutative_ideal().unwrap());
    }

    #[test]
    fn super_examples() {
        let ideal = super_relation_ideal(1, 2, 3).unwrap();
        let expected: Vec<Word> = [
            &[][..], &[1], &[2], &[3], &[1, 1], &[1, 2], &[1, 3], &[2, 3], &[1, 1, 1], &[1, 1, 2], &[1, 1, 3], &[1, 2, 3],
        ]
        .iter()
        .map(|v| w(v))
        .collect();
        assert_eq!(ideal.normal_words(), expected);
        assert!(ideal.normal_form(&s("x2*x2", 3, 3)).unwrap().is_zero());
        assert_eq!(ideal.normal_form(&s("x3*x2", 3, 3)).unwrap(), s("-x2*x3", 3, 3));
        assert_eq!(ideal.normal_form(&s("x2*x1", 3, 3)).unwrap(), s("x1*x2", 3, 3));
        assert_eq!(super_relations(0, 0, 3), vec![]);
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn super_quotient_rank() {
        for n in 0..=2 {
            for r in 0..=3 {
                let d = 3;
                let ideal = super_relation_ideal(n, r, d).unwrap();
                // x-monomials of degree a times subsets of b odd letters
                let expected: usize = (0..=d)
                    .map(|a| {
                        let xs = if n == 0 { usize::from(a == 0) } else { binomial(a + n - 1, n - 1) };
                        (0..=(d - a).min(r)).map(|b| xs * binomial(r, b)).sum::<usize>()
                    })
                    .sum();
                assert_eq!(ideal.normal_words().len(), expected, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn homogeneous_lift_examples() {
        let f = c(&[(&[1, 1, 0], 1), (&[0, 0, 2], -1)], 3, 4);
        let lift = homogeneous_lift(&f).unwrap();
        assert_eq!(lift, s("x1*x2 - x3*x3", 3, 4));
        assert_eq!(lift.ab(), f);
        assert!(lift.is_commlike());
        let bad = c(&[(&[1, 0, 0], 1), (&[0, 0, 2], 1)], 3, 4);
        assert_eq!(homogeneous_lift(&bad).unwrap_err(), Error::NotHomogeneous { first: 1, second: 2 });
    }

    #[test]
    fn transition_examples() {
        let p = Point::from_ints(&[2, 3]);
        let g = projective_transition(2, 0, 1, &p, 2).unwrap();
        assert_eq!(g.image, Point(vec![Scalar::ratio(1, 2), Scalar::ratio(3, 2)]));
        assert_eq!(g.map.images()[0], s("-1/4*x1 + 1/8*x1*x1", 2, 2));
        assert!(g.map.is_automorphism().unwrap());
        let err = projective_transition(2, 0, 1, &Point::from_ints(&[0, 3]), 2).unwrap_err();
        assert_eq!(err, Error::ZeroCoordinate { chart: 1 });
        assert_eq!(projective_transition(2, 0, 3, &p, 2).unwrap_err(), Error::BadChart { chart: 3, n: 2 });
    }

    #[test]
    fn transition_coefficients_alternate() {
        let (p1, p2) = (Scalar::from_int(2), Scalar::from_int(3));
        let g = projective_transition(2, 0, 1, &Point(vec![p1.clone(), p2.clone()]), 5).unwrap();
        let [y1, y2] = g.map.images() else { panic!() };
        for a in 1..=5usize {
            let sign = Scalar::from_int(if a % 2 == 0 { 1 } else { -1 });
            let base = &sign * &p1.pow(a as u32 + 1).inv().unwrap();
            assert_eq!(y1.coeff(&w(&vec![1; a])), base);
            assert_eq!(y2.coeff(&w(&vec![1; a])), &base * &p2);
            let mut left = vec![1; a - 1];
            left.push(2);
            assert_eq!(y2.coeff(&left.into()), &sign * &Scalar::from_int(-1) * &p1.pow(a as u32).inv().unwrap());
        }
        // the inverse factor stays on the left
        assert!(y2.terms().all(|(w, _)| w.letters().iter().skip_while(|&&l| l == 1).all(|&l| l == 2)));
        assert!(y2.terms().all(|(w, _)| w.letters().iter().filter(|&&l| l == 2).count() <= 1));
    }

    #[test]
    fn cocycle_examples() {
        let p = Point::from_ints(&[2, 3]);
        let pair = pair_check(2, 0, 1, &p, 4).unwrap();
        assert_eq!(pair.agrees_to, 4);
        let report = check_cocycle(2, (0, 1, 2), &p, 3).unwrap();
        assert!(report.holds());
        assert_eq!(report.agrees_to, 3);
        assert_eq!(check_cocycle(2, (0, 1, 2), &Point::from_ints(&[0, 3]), 3).unwrap_err(), Error::ZeroCoordinate {
            chart: 1
        });
        assert!(check_cocycle(2, (0, 1, 1), &p, 3).is_err());
    }

    #[test]
    fn a_fixed_convention_is_what_glues() {
        // reversing every word turns u_j⁻¹·u_k into u_k·u_j⁻¹
        let (n, d) = (2, 4);
        let right = |from: usize, to: usize, p: &Point| -> NCMorphism {
            let g = projective_transition(n, from, to, p, d).unwrap();
            NCMorphism::new(n, n, d, g.map.images().iter().map(NCSeries::opposite).collect()).unwrap()
        };
        let left = |from: usize, to: usize, p: &Point| projective_transition(n, from, to, p, d).unwrap().map;
        let p = Point::from_ints(&[2, 3]);
        let q = chart_point(n, 0, 1, &p).unwrap();
        assert_eq!(right(1, 2, &q).compose(&right(0, 1, &p)).unwrap(), right(0, 2, &p));
        let mixed = right(1, 2, &q).compose(&left(0, 1, &p)).unwrap();
        assert!(agreement_degree(&mixed, &left(0, 2, &p)) < d);
        assert!(agreement_degree(&mixed, &right(0, 2, &p)) < d);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn cocycle_holds_at_random_points(a in 1i64..6, b in -5i64..6, c in 1i64..6, sa in any::<bool>()) {
            prop_assume!(b != 0);
            let a = if sa { a } else { -a };
            let p = Point(vec![Scalar::ratio(a, c), Scalar::from_int(b)]);
            let report = check_cocycle(2, (0, 1, 2), &p, 3).unwrap();
            prop_assert!(report.holds());
            let report = check_cocycle(2, (2, 0, 1), &p, 3).unwrap();
            prop_assert!(report.holds());
        }
    }
}
