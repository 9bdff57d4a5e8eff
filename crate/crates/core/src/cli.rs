//! Command-line front end.
//!
//! Inputs are either `@path` (a file in one of the formats of [`crate::io`])
//! or an inline expression read with `--n` and `--D`. Inline morphisms and
//! ideals separate their series with `;`.
//!
//! Exit codes: 0 success or true, 1 mathematically false (non-member,
//! inconsistent family, failed cocycle, singular Jacobian, non-unit), 2 usage
//! or parse error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::coeff::Scalar;
use crate::error::Error;
use crate::exec::Exec;
use crate::geometry::{check_atlas, check_cocycle, projective_transition, super_relation_ideal, CocycleReport};
use crate::ideal::{commutator_reduce, CompletedIdealBasis, Membership};
use crate::io::{self, IdealSpec, MorphismJson, SeriesJson};
use crate::morphism::{invert_unit, NCMorphism};
use crate::parse::{parse_expression, parse_point, Alphabet};
use crate::recenter::{evaluate, recenter_with, Germ, Point};
use crate::series::NCSeries;
use crate::words::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "ncseries", version, about = "Exact truncated noncommutative power series")]
struct Cli {
    /// Number of letters for inline input; projective dimension for
    /// `cp-transition` and `check-cocycle`.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Truncation degree for inline input and degree overrides.
    #[arg(long = "D", global = true)]
    degree: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the main result here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<String>,
    /// Disable data parallelism.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Product of two series.
    Mul { left: String, right: String },
    /// Sum of two series.
    Add { left: String, right: String },
    /// Abelianization.
    Ab { series: String },
    /// Commlike lift of a commutative series.
    Unab { series: String },
    /// Composite of two morphisms: letters of OUTER go to the images of
    /// OUTER with the images of INNER substituted.
    Compose { outer: String, inner: String },
    /// Inverse of an endomorphism with invertible Jacobian.
    InvertMorphism { morphism: String },
    /// Two-sided inverse of a series with nonzero constant term.
    InvertUnit { series: String },
    /// Re-expand a germ at FROM around TO.
    Recenter {
        series: String,
        #[arg(long, allow_hyphen_values = true)]
        from: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
    },
    /// Value of a polynomial germ at a point.
    Eval {
        series: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, allow_hyphen_values = true)]
        from: Option<String>,
    },
    /// Reduced echelon basis of the completed ideal.
    IdealBasis { ideal: String },
    /// Membership in the completed ideal, with certificate.
    Member {
        series: String,
        #[arg(long)]
        ideal: String,
        /// Write the certificate to this file.
        #[arg(long)]
        certificate: Option<String>,
    },
    /// Canonical representative modulo the completed ideal.
    NormalForm {
        series: String,
        #[arg(long)]
        ideal: String,
    },
    /// Split into commlike part and commutator-ideal certificate.
    CommutatorReduce { series: String },
    /// Quotient basis of the supermanifold relations on n even and r odd letters.
    SuperBasis {
        #[arg(long)]
        r: usize,
    },
    /// Transition germ of projective space between two charts.
    CpTransition {
        #[arg(long, num_args = 2, value_names = ["FROM", "TO"])]
        charts: Vec<usize>,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Cocycle and round-trip checks of projective transitions at a point
    /// of the first chart (default charts 0 1 2).
    CheckCocycle {
        #[arg(long, num_args = 3, value_names = ["I", "J", "K"])]
        charts: Option<Vec<usize>>,
        /// Every ordered triple of distinct charts, with the point in chart 0.
        #[arg(long, conflicts_with = "charts")]
        all: bool,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Consistency of a finite family of germs under recentering.
    FamilyCheck { family: String },
}

enum Failure {
    /// Exit code 1.
    False(String),
    /// Exit code 2.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SingularJacobian { .. } | Error::NotAUnit => Failure::False(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<Report, Failure>;

/// Rendered result plus whether the answer is "true".
struct Report {
    text: String,
    holds: bool,
}

impl Report {
    fn ok(text: String) -> Outcome {
        Ok(Report { text, holds: true })
    }
}

struct Ctx<'a> {
    n: Option<usize>,
    degree: Option<usize>,
    format: Format,
    exec: Exec,
    err: &'a mut dyn Write,
}

fn read_input(arg: &str) -> std::result::Result<Option<String>, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map(Some)
            .map_err(|e| Failure::Usage(format!("cannot read {path}: {e}"))),
        None => Ok(None),
    }
}

impl Ctx<'_> {
    fn inline_sizes(&self, what: &str) -> std::result::Result<(usize, usize), Failure> {
        match (self.n, self.degree) {
            (Some(n), Some(d)) => Ok((n, d)),
            _ => Err(Failure::Usage(format!("inline {what} needs --n and --D"))),
        }
    }

    fn inline_series(&mut self, text: &str, n: usize, d: usize) -> std::result::Result<NCSeries, Failure> {
        let parsed = parse_expression(text, Alphabet::plain(n), d)?;
        if parsed.truncated {
            let _ = writeln!(self.err, "note: {text:?} expanded past degree {d} and was truncated");
        }
        Ok(parsed.series)
    }

    fn series(&mut self, arg: &str) -> std::result::Result<NCSeries, Failure> {
        match read_input(arg)? {
            Some(text) => Ok(io::series_from_text(&text)?),
            None => {
                let (n, d) = self.inline_sizes("series")?;
                self.inline_series(arg, n, d)
            }
        }
    }

    fn morphism(&mut self, arg: &str) -> std::result::Result<NCMorphism, Failure> {
        match read_input(arg)? {
            Some(text) => Ok(io::morphism_from_text(&text)?),
            None => {
                let (m, d) = self.inline_sizes("morphism")?;
                let images = arg.split(';').map(|t| self.inline_series(t, m, d)).collect::<Result<Vec<_>, _>>()?;
                Ok(NCMorphism::new(images.len(), m, d, images)?)
            }
        }
    }

    fn ideal(&mut self, arg: &str) -> std::result::Result<IdealSpec, Failure> {
        match read_input(arg)? {
            Some(text) => Ok(io::ideal_from_text(&text)?),
            None => {
                let (n, d) = self.inline_sizes("ideal")?;
                let generators =
                    arg.split(';').map(|t| self.inline_series(t, n, d)).collect::<Result<Vec<_>, _>>()?;
                Ok(IdealSpec { n, degree: d, generators })
            }
        }
    }

    fn basis(&mut self, arg: &str) -> std::result::Result<CompletedIdealBasis, Failure> {
        let spec = self.ideal(arg)?;
        let degree = self.degree.unwrap_or(spec.degree);
        Ok(CompletedIdealBasis::build_with(&spec.generators, spec.n, degree, self.exec)?)
    }

    fn render_series(&self, f: &NCSeries) -> String {
        match self.format {
            Format::Text => io::series_to_text(f),
            Format::Json => io::to_json(&SeriesJson::from(f)),
        }
    }

    fn render_morphism(&self, m: &NCMorphism) -> String {
        match self.format {
            Format::Text => io::morphism_to_text(m),
            Format::Json => io::to_json(&MorphismJson::from(m)),
        }
    }
}

fn point(text: &str) -> std::result::Result<Point, Failure> {
    Ok(Point(parse_point(text)?))
}

/// Words over `x1..xn` followed by `y1..yr`.
fn super_word(w: &Word, n: usize) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let names: Vec<String> = w
        .letters()
        .iter()
        .map(|&l| if l as usize <= n { format!("x{l}") } else { format!("y{}", l as usize - n) })
        .collect();
    names.join("*")
}

#[derive(Serialize)]
struct BasisJson {
    n: usize,
    degree: usize,
    dim: usize,
    basis: Vec<SeriesJson>,
    lead_words: Vec<Word>,
    normal_words: Vec<Word>,
}

#[derive(Serialize)]
struct MemberReportJson {
    member: bool,
    remainder: SeriesJson,
    certificate: Option<crate::ideal::Certificate>,
}

#[derive(Serialize)]
struct SandwichJson {
    left: Word,
    right: Word,
    coeff: Scalar,
}

#[derive(Serialize)]
struct CommutatorTermJson {
    pair: (u32, u32),
    sandwiches: Vec<SandwichJson>,
}

#[derive(Serialize)]
struct CommutatorReportJson {
    commlike: SeriesJson,
    terms: Vec<CommutatorTermJson>,
}

fn cocycle_text(r: &CocycleReport) -> String {
    let mut out = String::new();
    for p in &r.pairs {
        out += &format!("pair {}->{}->{} at {}: agrees to degree {}\n", p.from, p.to, p.from, p.at, p.agrees_to);
    }
    let (i, j, k) = r.charts;
    out += &format!("cocycle {i}->{j}->{k} vs {i}->{k} at {}: agrees to degree {}\n", r.at, r.agrees_to);
    out
}

fn execute(cli: &Cli, ctx: &mut Ctx<'_>) -> Outcome {
    match &cli.command {
        Command::Mul { left, right } => {
            let (a, b) = (ctx.series(left)?, ctx.series(right)?);
            Report::ok(ctx.render_series(&a.mul_with(&b, ctx.exec)?))
        }
        Command::Add { left, right } => {
            let (a, b) = (ctx.series(left)?, ctx.series(right)?);
            Report::ok(ctx.render_series(&a.checked_add(&b)?))
        }
        Command::Ab { series } => {
            let c = ctx.series(series)?.ab();
            Report::ok(match ctx.format {
                Format::Text => io::comm_to_text(&c),
                Format::Json => io::to_json(&io::CommSeriesJson::from(&c)),
            })
        }
        Command::Unab { series } => {
            let c = match read_input(series)? {
                Some(text) => io::comm_from_text(&text)?,
                None => {
                    let (n, d) = ctx.inline_sizes("series")?;
                    ctx.inline_series(series, n, d)?.ab()
                }
            };
            Report::ok(ctx.render_series(&c.unab()))
        }
        Command::Compose { outer, inner } => {
            let (f, g) = (ctx.morphism(outer)?, ctx.morphism(inner)?);
            Report::ok(ctx.render_morphism(&f.compose_with(&g, ctx.exec)?))
        }
        Command::InvertMorphism { morphism } => {
            let f = ctx.morphism(morphism)?;
            let d = ctx.degree.unwrap_or(f.degree());
            Report::ok(ctx.render_morphism(&f.invert_with(d, ctx.exec)?))
        }
        Command::InvertUnit { series } => {
            let f = ctx.series(series)?;
            let d = ctx.degree.unwrap_or(f.degree());
            Report::ok(ctx.render_series(&invert_unit(&f, d)?))
        }
        Command::Recenter { series, from, to } => {
            let f = ctx.series(series)?;
            let base = match from {
                Some(p) => point(p)?,
                None => Point::origin(f.n()),
            };
            let d = ctx.degree.unwrap_or(f.degree());
            let moved = recenter_with(&Germ::new(base, f)?, &point(to)?, d, ctx.exec)?;
            Report::ok(ctx.render_series(moved.series()))
        }
        Command::Eval { series, at, from } => {
            let f = ctx.series(series)?;
            let base = match from {
                Some(p) => point(p)?,
                None => Point::origin(f.n()),
            };
            let v = evaluate(&Germ::new(base, f)?, &point(at)?)?;
            Report::ok(match ctx.format {
                Format::Text => format!("{v}\n"),
                Format::Json => io::to_json(&v),
            })
        }
        Command::IdealBasis { ideal } => {
            let b = ctx.basis(ideal)?;
            Report::ok(match ctx.format {
                Format::Text => {
                    let mut out = format!("ncideal n={} D={}\n# dim {}\n", b.n(), b.degree(), b.dim());
                    for f in b.basis() {
                        out += &format!("{f}\n");
                    }
                    out
                }
                Format::Json => io::to_json(&BasisJson {
                    n: b.n(),
                    degree: b.degree(),
                    dim: b.dim(),
                    basis: b.basis().iter().map(SeriesJson::from).collect(),
                    lead_words: b.lead_words(),
                    normal_words: b.normal_words(),
                }),
            })
        }
        Command::Member { series, ideal, certificate } => {
            let b = ctx.basis(ideal)?;
            let f = ctx.series(series)?;
            let Membership { member, remainder, certificate: cert } = b.member_of(&f)?;
            if let (Some(path), Some(c)) = (certificate, &cert) {
                let body = match ctx.format {
                    Format::Text => c.to_string(),
                    Format::Json => io::to_json(c),
                };
                fs::write(path, body).map_err(|e| Failure::Usage(format!("cannot write {path}: {e}")))?;
            }
            let text = match ctx.format {
                Format::Text if member => {
                    let mut out = String::from("member\n");
                    if let Some(c) = &cert {
                        out += &c.to_string();
                    }
                    out
                }
                Format::Text => format!("not a member\nremainder: {remainder}\n"),
                Format::Json => {
                    io::to_json(&MemberReportJson { member, remainder: (&remainder).into(), certificate: cert })
                }
            };
            Ok(Report { text, holds: member })
        }
        Command::NormalForm { series, ideal } => {
            let b = ctx.basis(ideal)?;
            let f = ctx.series(series)?;
            Report::ok(ctx.render_series(&b.normal_form(&f)?))
        }
        Command::CommutatorReduce { series } => {
            let f = ctx.series(series)?;
            let r = commutator_reduce(&f);
            Report::ok(match ctx.format {
                Format::Text => {
                    let mut out = format!("commlike: {}\n", r.commlike);
                    for t in &r.terms {
                        for (u, v, c) in t.env.terms() {
                            out += &format!("[x{},x{}]: ({u}, {v}, {c})\n", t.pair.0, t.pair.1);
                        }
                    }
                    out
                }
                Format::Json => io::to_json(&CommutatorReportJson {
                    commlike: (&r.commlike).into(),
                    terms: r
                        .terms
                        .iter()
                        .map(|t| CommutatorTermJson {
                            pair: t.pair,
                            sandwiches: t
                                .env
                                .terms()
                                .map(|(u, v, c)| SandwichJson { left: u.clone(), right: v.clone(), coeff: c.clone() })
                                .collect(),
                        })
                        .collect(),
                }),
            })
        }
        Command::SuperBasis { r } => {
            let n = ctx.n.unwrap_or(0);
            let d = ctx.degree.ok_or_else(|| Failure::Usage("super-basis needs --D".into()))?;
            let words = super_relation_ideal(n, *r, d)?.normal_words();
            Report::ok(match ctx.format {
                Format::Text => {
                    let mut out = format!("# dim {}\n", words.len());
                    for w in &words {
                        out += &format!("{}\n", super_word(w, n));
                    }
                    out
                }
                Format::Json => io::to_json(&words.iter().map(|w| super_word(w, n)).collect::<Vec<_>>()),
            })
        }
        Command::CpTransition { charts, at } => {
            let n = ctx.n.ok_or_else(|| Failure::Usage("cp-transition needs --n".into()))?;
            let d = ctx.degree.ok_or_else(|| Failure::Usage("cp-transition needs --D".into()))?;
            let g = projective_transition(n, charts[0], charts[1], &point(at)?, d)?;
            Report::ok(match ctx.format {
                Format::Text => {
                    format!("# chart {} at {} -> chart {} at {}\n", g.from, g.at, g.to, g.image)
                        + &io::morphism_to_text(&g.map)
                }
                Format::Json => io::to_json(&serde_json::json!({
                    "from": g.from,
                    "to": g.to,
                    "at": g.at,
                    "image": g.image,
                    "map": MorphismJson::from(&g.map),
                })),
            })
        }
        Command::CheckCocycle { charts, all, at } => {
            let n = ctx.n.ok_or_else(|| Failure::Usage("check-cocycle needs --n".into()))?;
            let d = ctx.degree.ok_or_else(|| Failure::Usage("check-cocycle needs --D".into()))?;
            let p = point(at)?;
            let reports = if *all {
                check_atlas(n, &p, d)?
            } else {
                let c = charts.clone().unwrap_or_else(|| vec![0, 1, 2]);
                vec![check_cocycle(n, (c[0], c[1], c[2]), &p, d)?]
            };
            let holds = reports.iter().all(CocycleReport::holds);
            let text = match ctx.format {
                Format::Text => reports.iter().map(cocycle_text).collect(),
                Format::Json => io::to_json(&reports),
            };
            Ok(Report { text, holds })
        }
        Command::FamilyCheck { family } => {
            let text = read_input(family)?.ok_or_else(|| Failure::Usage("family-check reads @file".into()))?;
            let fam = io::family_from_text(&text)?;
            let d = ctx
                .degree
                .or_else(|| fam.members.iter().map(|m| m.germ.series().degree()).min())
                .unwrap_or(0);
            let violation = fam.check_with(d, ctx.exec)?;
            let text = match (ctx.format, &violation) {
                (Format::Text, None) => format!("consistent to degree {d}\n"),
                (Format::Text, Some(v)) => format!("inconsistent: {v}\n"),
                (Format::Json, v) => io::to_json(&serde_json::json!({
                    "consistent": v.is_none(),
                    "degree": d,
                    "violation": v.as_ref().map(|v| serde_json::json!({
                        "from": v.from,
                        "to": v.to,
                        "word": v.word,
                        "expected": v.expected,
                        "found": v.found,
                    })),
                })),
            };
            Ok(Report { text, holds: violation.is_none() })
        }
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    let mut ctx = Ctx { n: cli.n, degree: cli.degree, format: cli.format, exec, err };
    match execute(&cli, &mut ctx) {
        Ok(report) => {
            let written = match &cli.output {
                Some(path) => fs::write(path, &report.text).map_err(|e| format!("cannot write {path}: {e}")),
                None => out.write_all(report.text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => i32::from(!report.holds),
                Err(e) => {
                    let _ = writeln!(ctx.err, "error: {e}");
                    2
                }
            }
        }
        Err(Failure::False(msg)) => {
            let _ = writeln!(ctx.err, "{msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(ctx.err, "error: {msg}");
            2
        }
    }
}
