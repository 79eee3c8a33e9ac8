//! JSON documents. Every scalar is a string: `"p/q"` in exact mode, a plain
//! decimal in float mode. Both read back through `parse_q`.

use std::path::Path;

use crooked::crooked::{CrookedPlane, HalfSpace, PlaneField, Verdict, PIECE_NAMES};
use crooked::isometry::AffineIso;
use crooked::matrix::Matrix;
use crooked::minkowski::Vec3;
use crooked::scalar::{parse_q, Float, Scalar, Q};
use crooked::threeholed::{DomainTriple, QuadDomain, PROPERNESS_NOTE, QUAD_NAMES, TRIPLE_PAIRS};
use crooked::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: u32 = 1;

/// A scalar field the CLI can run in.
pub trait Mode: PlaneField {
    const NAME: &'static str;
    fn from_q(x: &Q, eps: f64) -> Self;
    fn show(&self) -> String;
}

impl Mode for Q {
    const NAME: &'static str = "exact";

    fn from_q(x: &Q, _: f64) -> Self {
        x.clone()
    }

    fn show(&self) -> String {
        self.to_string()
    }
}

impl Mode for Float {
    const NAME: &'static str = "float";

    fn from_q(x: &Q, eps: f64) -> Self {
        Float::with_eps(x.approx(), eps)
    }

    fn show(&self) -> String {
        self.value().to_string()
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub fn scalar(s: &str) -> Result<Q> {
    parse_q(s).ok_or_else(|| bad(format!("not a rational number: {s:?}")))
}

pub fn list(s: &str) -> Result<Vec<Q>> {
    s.split(',').map(scalar).collect()
}

pub fn triple(s: &str) -> Result<[Q; 3]> {
    list(s)?.try_into().map_err(|_| bad(format!("expected three comma-separated numbers, got {s:?}")))
}

pub fn vec3(s: &str) -> Result<Vec3<Q>> {
    let [x, y, z] = triple(s)?;
    Ok(Vec3::new(x, y, z))
}

/// Rows separated by `;`, entries by `,`.
pub fn matrix(s: &str, n: usize) -> Result<Matrix<Q>> {
    let rows = s.split(';').map(list).collect::<Result<Vec<_>>>()?;
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(bad(format!("expected a {n}x{n} matrix as \"a,b;c,d\", got {s:?}")));
    }
    Ok(Matrix::from_rows(rows))
}

pub fn lift<S: Mode>(x: &Q, eps: f64) -> S {
    S::from_q(x, eps)
}

pub fn lift_vec<S: Mode>(v: &Vec3<Q>, eps: f64) -> Vec3<S> {
    v.map(|c| S::from_q(c, eps))
}

pub fn lift_mat<S: Mode>(m: &Matrix<Q>, eps: f64) -> Matrix<S> {
    m.map(|c| S::from_q(c, eps))
}

pub fn show_vec<S: Mode>(v: &Vec3<S>) -> [String; 3] {
    [v.x.show(), v.y.show(), v.z.show()]
}

pub fn show_mat<S: Mode>(m: &Matrix<S>) -> Vec<Vec<String>> {
    m.rows().iter().map(|r| r.iter().map(Mode::show).collect()).collect()
}

pub fn show3<S: Mode>(x: &[S; 3]) -> [String; 3] {
    [x[0].show(), x[1].show(), x[2].show()]
}

fn parse_vec(v: &[String; 3]) -> Result<Vec3<Q>> {
    Ok(Vec3::new(scalar(&v[0])?, scalar(&v[1])?, scalar(&v[2])?))
}

fn parse_rows(rows: &[Vec<String>], n: usize) -> Result<Matrix<Q>> {
    let rows = rows.iter().map(|r| r.iter().map(|x| scalar(x)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(bad(format!("expected a {n}x{n} matrix")));
    }
    Ok(Matrix::from_rows(rows))
}

/// Accepts JSON strings and numbers.
fn value_q(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => scalar(s),
        Value::Number(n) => scalar(&n.to_string()),
        other => Err(bad(format!("expected a number, got {other}"))),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlaneDoc {
    pub v: [String; 3],
    pub p: [String; 3],
}

impl PlaneDoc {
    pub fn of<S: Mode>(v: &Vec3<S>, p: &Vec3<S>) -> Self {
        PlaneDoc { v: show_vec(v), p: show_vec(p) }
    }

    pub fn plane(&self) -> Result<CrookedPlane<Q>> {
        CrookedPlane::new(parse_vec(&self.v)?, parse_vec(&self.p)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerdictDoc {
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<[String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_approx: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub piece_pair: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub piece_names: Option<[String; 2]>,
}

impl From<&Verdict> for VerdictDoc {
    fn from(v: &Verdict) -> Self {
        match v {
            Verdict::Disjoint => VerdictDoc {
                verdict: "disjoint".into(),
                witness: None,
                witness_approx: None,
                piece_pair: None,
                piece_names: None,
            },
            Verdict::Intersect { pieces: (i, j), witness } => VerdictDoc {
                verdict: "intersect".into(),
                witness: Some(witness.exact.clone()),
                witness_approx: Some(witness.approx),
                piece_pair: Some([*i, *j]),
                piece_names: Some([PIECE_NAMES[*i].into(), PIECE_NAMES[*j].into()]),
            },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairVerdictDoc {
    pub pair: [String; 2],
    #[serde(flatten)]
    pub verdict: VerdictDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AffineDoc {
    pub linear: Vec<Vec<String>>,
    pub trans: [String; 3],
}

impl AffineDoc {
    pub fn of<S: Mode>(g: &AffineIso<S>) -> Self {
        AffineDoc { linear: show_mat(&g.linear), trans: show_vec(&g.trans) }
    }

    pub fn affine(&self) -> Result<AffineIso<Q>> {
        Ok(AffineIso::new(parse_rows(&self.linear, 3)?, parse_vec(&self.trans)?))
    }
}

/// A group element: exactly one of `sl2`, `so21`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ElementDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sl2: Option<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub so21: Option<Vec<Vec<Value>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupDoc {
    pub schema: u32,
    pub generators: Vec<ElementDoc>,
    /// Decoration scales at parabolic ends.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scales: Option<Vec<Value>>,
}

impl GroupDoc {
    pub fn new(g1: &Matrix<Q>, g2: &Matrix<Q>, scales: Option<&[Q; 3]>) -> Self {
        let el = |m: &Matrix<Q>| ElementDoc { sl2: Some(to_values(&show_mat(m))), so21: None };
        GroupDoc {
            schema: SCHEMA,
            generators: vec![el(g1), el(g2)],
            scales: scales.map(|s| s.iter().map(|x| Value::String(x.to_string())).collect()),
        }
    }

    /// The two `SL(2)` generators and optional scales.
    pub fn parts(&self) -> Result<(Matrix<Q>, Matrix<Q>, Option<[Q; 3]>)> {
        check_schema(self.schema)?;
        if self.generators.len() != 2 {
            return Err(bad(format!("expected two generators, got {}", self.generators.len())));
        }
        let mut gens = Vec::with_capacity(2);
        for (i, g) in self.generators.iter().enumerate() {
            match (&g.sl2, &g.so21) {
                (Some(rows), None) => {
                    let rows = rows.iter().map(|r| r.iter().map(value_q).collect()).collect::<Result<Vec<Vec<Q>>>>()?;
                    if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
                        return Err(bad(format!("generator {} is not 2x2", i + 1)));
                    }
                    gens.push(Matrix::from_rows(rows));
                }
                (None, Some(_)) => {
                    return Err(bad(format!(
                        "generator {} is given in SO(2,1); group specs need SL(2) lifts to decorate the ends",
                        i + 1
                    )))
                }
                _ => return Err(bad(format!("generator {} needs exactly one of \"sl2\", \"so21\"", i + 1))),
            }
        }
        let scales = match &self.scales {
            None => None,
            Some(s) => {
                let s = s.iter().map(value_q).collect::<Result<Vec<_>>>()?;
                Some(s.try_into().map_err(|_| bad("expected three scales"))?)
            }
        };
        let g2 = gens.pop().expect("two generators");
        Ok((gens.pop().expect("two generators"), g2, scales))
    }
}

fn to_values(rows: &[Vec<String>]) -> Vec<Vec<Value>> {
    rows.iter().map(|r| r.iter().cloned().map(Value::String).collect()).collect()
}

pub fn check_schema(s: u32) -> Result<()> {
    if s == SCHEMA {
        Ok(())
    } else {
        Err(bad(format!("unsupported schema {s}, expected {SCHEMA}")))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TripleReportDoc {
    pub consistently_oriented: bool,
    pub closed_form: [bool; 3],
    pub verdicts: Vec<PairVerdictDoc>,
    pub mu: [String; 3],
    pub mu_matches: bool,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocycleDoc {
    pub u1: [String; 3],
    pub u2: [String; 3],
    pub u3: [String; 3],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TripleDoc {
    pub planes: Vec<PlaneDoc>,
    pub a: [String; 3],
    pub b: [String; 3],
    pub beta: Vec<[String; 3]>,
    pub cocycle: CocycleDoc,
    pub report: TripleReportDoc,
}

fn plane_label(i: usize) -> String {
    format!("C{}", i + 1)
}

impl TripleDoc {
    pub fn of<S: Mode>(t: &DomainTriple<S>, u3: &Vec3<S>) -> Self {
        let verdicts = TRIPLE_PAIRS
            .iter()
            .zip(&t.report.verdicts)
            .map(|(&(i, j), v)| PairVerdictDoc { pair: [plane_label(i), plane_label(j)], verdict: v.into() })
            .collect();
        TripleDoc {
            planes: (0..3).map(|i| PlaneDoc::of(&t.v[i], &t.p[i])).collect(),
            a: show3(&t.a),
            b: show3(&t.b),
            beta: t.beta.iter().map(show3).collect(),
            cocycle: CocycleDoc { u1: show_vec(&t.cocycle.u1), u2: show_vec(&t.cocycle.u2), u3: show_vec(u3) },
            report: TripleReportDoc {
                consistently_oriented: t.report.consistently_oriented,
                closed_form: t.report.closed_form,
                verdicts,
                mu: show3(&t.report.mu),
                mu_matches: t.report.mu_matches,
                verified: t.report.verified(),
            },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HalfSpaceDoc {
    pub name: String,
    pub v: [String; 3],
    pub p: [String; 3],
}

impl HalfSpaceDoc {
    pub fn halfspace(&self) -> Result<HalfSpace<Q>> {
        HalfSpace::new(parse_vec(&self.v)?, parse_vec(&self.p)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadReportDoc {
    pub verdicts: Vec<PairVerdictDoc>,
    pub consistently_oriented: bool,
    pub halfspaces_disjoint: bool,
    pub pairing_linear: [bool; 2],
    pub witnesses_tested: [usize; 2],
    pub witness_failures: [usize; 2],
    pub verified: bool,
    pub note: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadDoc {
    pub halfspaces: Vec<HalfSpaceDoc>,
    pub gamma1: AffineDoc,
    pub gamma2: AffineDoc,
    pub step: usize,
    pub scale: String,
    pub direction: [String; 3],
    pub report: QuadReportDoc,
}

impl QuadDoc {
    pub fn of<S: Mode>(d: &QuadDomain<S>) -> Self {
        let verdicts = d
            .report
            .verdicts
            .iter()
            .map(|((i, j), v)| PairVerdictDoc { pair: [QUAD_NAMES[*i].into(), QUAD_NAMES[*j].into()], verdict: v.into() })
            .collect();
        QuadDoc {
            halfspaces: d
                .halfspaces
                .iter()
                .zip(QUAD_NAMES)
                .map(|(h, name)| HalfSpaceDoc { name: name.into(), v: show_vec(&h.v), p: show_vec(&h.p) })
                .collect(),
            gamma1: AffineDoc::of(&d.gamma1),
            gamma2: AffineDoc::of(&d.gamma2),
            step: d.step,
            scale: d.scale.show(),
            direction: show_vec(&d.direction),
            report: QuadReportDoc {
                verdicts,
                consistently_oriented: d.report.consistently_oriented,
                halfspaces_disjoint: d.report.halfspaces_disjoint,
                pairing_linear: d.report.pairing_linear,
                witnesses_tested: d.report.witnesses_tested,
                witness_failures: d.report.witness_failures,
                verified: d.report.verified(),
                note: PROPERNESS_NOTE.into(),
            },
        }
    }

    pub fn halfspaces(&self) -> Result<[HalfSpace<Q>; 4]> {
        let hs = self.halfspaces.iter().map(HalfSpaceDoc::halfspace).collect::<Result<Vec<_>>>()?;
        hs.try_into().map_err(|_| bad("expected four half-spaces"))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ErrorDoc {
    pub error: String,
    pub message: String,
}

impl ErrorDoc {
    pub fn of(e: &Error) -> Self {
        ErrorDoc { error: kind(e), message: e.to_string() }
    }
}

/// The variant name of an error, for machine consumers.
pub fn kind(e: &Error) -> String {
    let d = format!("{e:?}");
    d.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DomainDoc {
    pub schema: u32,
    pub mode: String,
    pub group: GroupDoc,
    pub mu: [String; 3],
    pub weights: [String; 3],
    pub triple: TripleDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad: Option<QuadDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad_error: Option<ErrorDoc>,
    pub status: String,
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| bad(format!("malformed JSON in {}: {e}", path.display())))
}

pub fn read_domain(path: &Path) -> Result<DomainDoc> {
    let d: DomainDoc = read_json(path)?;
    check_schema(d.schema)?;
    Ok(d)
}
