//! Canonical file formats.
//!
//! Text files start with a header line naming the kind and its sizes,
//! followed by canonical expressions, one per line. Blank lines and lines
//! starting with `#` are ignored.
//!
//! ```text
//! ncseries n=2 D=4          one expression (may span lines)
//! commseries n=2 D=4        one expression, read commutatively
//! ncmorphism n=2 m=2 D=4    one image per line, x1 first, over m letters
//! ncideal n=2 D=5           one generator per line
//! ncfamily n=2 D=4          lines `at 1,2 radii 5,5 : <expr>`
//! ```
//!
//! Every kind also has a JSON form, recognised by a leading `{`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coeff::{parse_rational, Rational, Scalar};
use crate::error::{Error, Result};
use crate::morphism::NCMorphism;
use crate::parse::{parse_point, parse_series};
use crate::recenter::{Germ, LocalFunctionFamily, Point, Section};
use crate::series::{CommSeries, NCSeries};
use crate::words::Word;

fn body_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// Splits off the header and checks its kind and keys.
fn header<'a>(text: &'a str, kind: &str, keys: &[&str]) -> Result<(BTreeMap<String, usize>, Vec<&'a str>)> {
    let mut lines = body_lines(text);
    let head = lines.next().ok_or_else(|| Error::Format(format!("empty input, expected a {kind} header")))?;
    let mut parts = head.split_whitespace();
    if parts.next() != Some(kind) {
        return Err(Error::Format(format!("expected a {kind} header, found {head:?}")));
    }
    let mut values = BTreeMap::new();
    for p in parts {
        let (k, v) = p.split_once('=').ok_or_else(|| Error::Format(format!("bad header field {p:?}")))?;
        let v: usize = v.parse().map_err(|_| Error::Format(format!("bad header value {p:?}")))?;
        values.insert(k.to_string(), v);
    }
    for k in keys {
        if !values.contains_key(*k) {
            return Err(Error::Format(format!("{kind} header lacks {k}=")));
        }
    }
    Ok((values, lines.collect()))
}

fn is_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    word: Word,
    coeff: Scalar,
}

#[derive(Serialize, Deserialize)]
pub struct SeriesJson {
    n: usize,
    degree: usize,
    terms: Vec<TermJson>,
}

impl From<&NCSeries> for SeriesJson {
    fn from(f: &NCSeries) -> Self {
        SeriesJson {
            n: f.n(),
            degree: f.degree(),
            terms: f.terms().map(|(w, c)| TermJson { word: w.clone(), coeff: c.clone() }).collect(),
        }
    }
}

impl TryFrom<SeriesJson> for NCSeries {
    type Error = Error;

    fn try_from(j: SeriesJson) -> Result<Self> {
        NCSeries::from_terms(j.n, j.degree, j.terms.into_iter().map(|t| (t.word, t.coeff)))
    }
}

pub fn series_to_text(f: &NCSeries) -> String {
    format!("ncseries n={} D={}\n{}\n", f.n(), f.degree(), f)
}

pub fn series_from_text(text: &str) -> Result<NCSeries> {
    if is_json(text) {
        return from_json::<SeriesJson>(text)?.try_into();
    }
    let (h, body) = header(text, "ncseries", &["n", "D"])?;
    parse_series(&body.join(" "), h["n"], h["D"])
}

#[derive(Serialize, Deserialize)]
struct CommTermJson {
    exponents: Vec<u32>,
    coeff: Scalar,
}

#[derive(Serialize, Deserialize)]
pub struct CommSeriesJson {
    n: usize,
    degree: usize,
    terms: Vec<CommTermJson>,
}

impl From<&CommSeries> for CommSeriesJson {
    fn from(f: &CommSeries) -> Self {
        CommSeriesJson {
            n: f.n(),
            degree: f.degree(),
            terms: f.terms().map(|(m, c)| CommTermJson { exponents: m.0.clone(), coeff: c.clone() }).collect(),
        }
    }
}

pub fn comm_to_text(f: &CommSeries) -> String {
    format!("commseries n={} D={}\n{}\n", f.n(), f.degree(), f)
}

/// The expression is read noncommutatively and then abelianized.
pub fn comm_from_text(text: &str) -> Result<CommSeries> {
    if is_json(text) {
        let j: CommSeriesJson = from_json(text)?;
        return CommSeries::from_terms(j.n, j.degree, j.terms.into_iter().map(|t| (t.exponents, t.coeff)));
    }
    let (h, body) = header(text, "commseries", &["n", "D"])?;
    Ok(parse_series(&body.join(" "), h["n"], h["D"])?.ab())
}

#[derive(Serialize, Deserialize)]
pub struct MorphismJson {
    source_vars: usize,
    target_vars: usize,
    degree: usize,
    images: Vec<SeriesJson>,
}

impl From<&NCMorphism> for MorphismJson {
    fn from(m: &NCMorphism) -> Self {
        MorphismJson {
            source_vars: m.source_vars(),
            target_vars: m.target_vars(),
            degree: m.degree(),
            images: m.images().iter().map(SeriesJson::from).collect(),
        }
    }
}

pub fn morphism_to_text(m: &NCMorphism) -> String {
    let mut out = format!("ncmorphism n={} m={} D={}\n", m.source_vars(), m.target_vars(), m.degree());
    for f in m.images() {
        out += &format!("{f}\n");
    }
    out
}

pub fn morphism_from_text(text: &str) -> Result<NCMorphism> {
    if is_json(text) {
        let j: MorphismJson = from_json(text)?;
        let images = j.images.into_iter().map(NCSeries::try_from).collect::<Result<Vec<_>>>()?;
        return NCMorphism::new(j.source_vars, j.target_vars, j.degree, images);
    }
    let (h, body) = header(text, "ncmorphism", &["n", "m", "D"])?;
    let images = body.iter().map(|l| parse_series(l, h["m"], h["D"])).collect::<Result<Vec<_>>>()?;
    NCMorphism::new(h["n"], h["m"], h["D"], images)
}

/// Generators of an ideal, as stored in an ideal file.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealSpec {
    pub n: usize,
    pub degree: usize,
    pub generators: Vec<NCSeries>,
}

#[derive(Serialize, Deserialize)]
pub struct IdealJson {
    n: usize,
    degree: usize,
    generators: Vec<SeriesJson>,
}

impl From<&IdealSpec> for IdealJson {
    fn from(i: &IdealSpec) -> Self {
        IdealJson { n: i.n, degree: i.degree, generators: i.generators.iter().map(SeriesJson::from).collect() }
    }
}

pub fn ideal_to_text(spec: &IdealSpec) -> String {
    let mut out = format!("ncideal n={} D={}\n", spec.n, spec.degree);
    for g in &spec.generators {
        out += &format!("{g}\n");
    }
    out
}

pub fn ideal_from_text(text: &str) -> Result<IdealSpec> {
    if is_json(text) {
        let j: IdealJson = from_json(text)?;
        let generators = j.generators.into_iter().map(NCSeries::try_from).collect::<Result<Vec<_>>>()?;
        return Ok(IdealSpec { n: j.n, degree: j.degree, generators });
    }
    let (h, body) = header(text, "ncideal", &["n", "D"])?;
    let generators = body.iter().map(|l| parse_series(l, h["n"], h["D"])).collect::<Result<Vec<_>>>()?;
    Ok(IdealSpec { n: h["n"], degree: h["D"], generators })
}

#[derive(Serialize, Deserialize)]
struct MemberJson {
    at: Point,
    radii: Vec<String>,
    series: SeriesJson,
}

#[derive(Serialize, Deserialize)]
pub struct FamilyJson {
    members: Vec<MemberJson>,
}

impl From<&LocalFunctionFamily> for FamilyJson {
    fn from(f: &LocalFunctionFamily) -> Self {
        FamilyJson {
            members: f
                .members
                .iter()
                .map(|s| MemberJson {
                    at: s.germ.base().clone(),
                    radii: s.disk.radii().iter().map(Rational::to_string).collect(),
                    series: s.germ.series().into(),
                })
                .collect(),
        }
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

pub fn family_to_text(family: &LocalFunctionFamily) -> Result<String> {
    let first = family.members.first().ok_or_else(|| Error::Format("empty family".into()))?;
    let s = first.germ.series();
    let mut out = format!("ncfamily n={} D={}\n", s.n(), s.degree());
    for m in &family.members {
        let at = join(m.germ.base().coords());
        out += &format!("at {} radii {} : {}\n", at, join(m.disk.radii()), m.germ.series());
    }
    Ok(out)
}

fn parse_radii(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(parse_rational).collect()
}

pub fn family_from_text(text: &str) -> Result<LocalFunctionFamily> {
    if is_json(text) {
        let j: FamilyJson = from_json(text)?;
        let members = j
            .members
            .into_iter()
            .map(|m| {
                let radii = m.radii.iter().map(|r| parse_rational(r)).collect::<Result<Vec<_>>>()?;
                Section::new(Germ::new(m.at, m.series.try_into()?)?, radii)
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(LocalFunctionFamily::new(members));
    }
    let (h, body) = header(text, "ncfamily", &["n", "D"])?;
    let mut members = Vec::new();
    for line in body {
        let bad = || Error::Format(format!("expected `at <point> radii <radii> : <expr>`, found {line:?}"));
        let (head, expr) = line.split_once(':').ok_or_else(bad)?;
        let head = head.trim().strip_prefix("at").ok_or_else(bad)?;
        let (at, radii) = head.split_once("radii").ok_or_else(bad)?;
        let at = Point(parse_point(at.trim())?);
        let series = parse_series(expr, h["n"], h["D"])?;
        members.push(Section::new(Germ::new(at, series)?, parse_radii(radii.trim())?)?);
    }
    Ok(LocalFunctionFamily::new(members))
}
