use std::path::{Path, PathBuf};

use anyhow::Context;
use crooked::crooked::{
    disjoint_closed_form, in_tower, lift, CrookedPlane, HalfSpace, TowerJob,
};
use crooked::isometry::{
    check_isometry, check_unimodular, classify, classify_sl2, margulis, positive_direction, positive_neutral,
    sl2_adjoint, AffineIso, IsoClass,
};
use crooked::matrix::{Mat2, Mat3};
use crooked::minkowski::{pair_type, Vec3};
use crooked::scalar::{qi, Embed, Float, Scalar, Sign, Q};
use crooked::symplectic::{
    level_two_g1, level_two_g2, theorem_b_generators, theorem_b_generators_corrected, verify_generators,
};
use crooked::threeholed::{
    build_decorated, construct_triple, pants_generators, mu_of, quad_domain, tile_audit, word_name, Cocycle, DecoratedGroup,
    TileHit, QUAD_NAMES,
};
use crooked::Error;
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::doc::{
    self, lift_mat, lift_vec, read_domain, read_json, show3, show_mat, show_vec, DomainDoc, ErrorDoc, GroupDoc, Mode,
    QuadDoc, TripleDoc, VerdictDoc, SCHEMA,
};
use crate::mesh;

pub struct Config {
    pub eps: f64,
    pub seed: u64,
    pub jobs: usize,
    pub out: PathBuf,
}

impl Config {
    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// A report and the exit code it implies.
pub struct Outcome {
    pub report: Value,
    pub code: i32,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, code: 0 }
    }

    fn pass_or_fail(report: Value, pass: bool) -> Self {
        Outcome { report, code: if pass { 0 } else { 3 } }
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn class_name(c: IsoClass) -> &'static str {
    match c {
        IsoClass::Hyperbolic => "hyperbolic",
        IsoClass::Parabolic => "parabolic",
        IsoClass::Elliptic => "elliptic",
        IsoClass::Identity => "identity",
    }
}

/// The linear part from `--sl2` or `--so21`, with the lift when given.
fn linear<S: Mode>(eps: f64, sl2: Option<&str>, so21: Option<&str>) -> crooked::Result<(Mat3<S>, Option<Mat2<S>>)> {
    match (sl2, so21) {
        (Some(s), None) => {
            let a: Mat2<S> = lift_mat(&doc::matrix(s, 2)?, eps);
            check_unimodular(&a)?;
            Ok((sl2_adjoint(&a)?, Some(a)))
        }
        (None, Some(s)) => {
            let m: Mat3<S> = lift_mat(&doc::matrix(s, 3)?, eps);
            check_isometry(&m)?;
            Ok((m, None))
        }
        _ => Err(bad("pass exactly one of --sl2, --so21")),
    }
}

pub fn cmd_classify<S: Mode>(cfg: &Config, sl2: Option<&str>, so21: Option<&str>) -> anyhow::Result<Outcome> {
    let (m, a) = linear::<S>(cfg.eps, sl2, so21)?;
    let class = match &a {
        Some(a) => classify_sl2(a)?,
        None => classify(&m)?,
    };
    let fixed = match class {
        IsoClass::Hyperbolic | IsoClass::Parabolic => Some(show_vec(&positive_direction(&m)?)),
        _ => None,
    };
    Ok(Outcome::ok(json!({
        "schema": SCHEMA,
        "command": "classify",
        "mode": S::NAME,
        "class": class_name(class),
        "so21": show_mat(&m),
        "trace": m.trace().show(),
        "sl2_trace": a.map(|a| a.trace().show()),
        "positive_direction": fixed,
    })))
}

/// `α` of one affine map. The positive neutral vector of a hyperbolic map is
/// a unit vector, so over `Q` this runs in `Q(√n)`.
struct AlphaJob<'a>(&'a AffineIso<Q>);

impl TowerJob for AlphaJob<'_> {
    type Out = (String, Sign, [String; 3], f64);
    fn run<S: Embed>(self, r: &[Q]) -> crooked::Result<Self::Out> {
        let g = AffineIso::new(self.0.linear.map(|c| S::embed_q(c, r)), lift::<S>(&self.0.trans, r));
        let v = positive_neutral(&g.linear)?;
        let a = margulis(&g, &v)?;
        Ok((a.to_string(), a.sign()?, [v.x.to_string(), v.y.to_string(), v.z.to_string()], a.approx()))
    }
}

fn alpha_single<S: Mode>(eps: f64, m: &Mat3<Q>, trans: &Vec3<Q>) -> crooked::Result<(String, Sign, [String; 3], f64)> {
    let g = AffineIso::new(m.clone(), trans.clone());
    if S::EXACT {
        let n = positive_direction(m)?.norm2();
        let norms = if n.is_zero_sign()? { vec![] } else { vec![n] };
        in_tower(&norms, AlphaJob(&g))
    } else {
        let gf: AffineIso<Float> = AffineIso::new(lift_mat(m, eps), lift_vec(trans, eps));
        let v = positive_neutral(&gf.linear)?;
        let a = margulis(&gf, &v)?;
        Ok((a.show(), a.sign()?, show_vec(&v), a.value()))
    }
}

pub struct MargulisArgs<'a> {
    pub group: Option<&'a str>,
    pub u1: Option<&'a str>,
    pub u2: Option<&'a str>,
    pub sl2: Option<&'a str>,
    pub so21: Option<&'a str>,
    pub trans: Option<&'a str>,
}

pub fn cmd_margulis<S: Mode>(cfg: &Config, a: MargulisArgs) -> anyhow::Result<Outcome> {
    if let Some(spec) = a.group {
        let (Some(u1), Some(u2)) = (a.u1, a.u2) else {
            return Err(bad("--group needs --u1 and --u2").into());
        };
        let (g, _) = load_group::<S>(spec, cfg.eps)?;
        let c = Cocycle::new(lift_vec(&doc::vec3(u1)?, cfg.eps), lift_vec(&doc::vec3(u2)?, cfg.eps));
        let mu = mu_of(&g, &c)?;
        let signs = mu.iter().map(|m| m.sign()).collect::<Result<Vec<_>, _>>()?;
        let same = signs.iter().all(|s| *s == Sign::Positive) || signs.iter().all(|s| *s == Sign::Negative);
        return Ok(Outcome::ok(json!({
            "schema": SCHEMA,
            "command": "margulis",
            "mode": S::NAME,
            "mu": show3(&mu),
            "signs": signs.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "same_sign": same,
            "u3": show_vec(&c.u3(&g)),
        })));
    }
    let trans = a.trans.ok_or_else(|| bad("pass --group with --u1/--u2, or a linear part with --trans"))?;
    let (m, lifted) = linear::<Q>(cfg.eps, a.sl2, a.so21)?;
    let class = match &lifted {
        Some(l) => classify_sl2(l)?,
        None => classify(&m)?,
    };
    let (alpha, sign, neutral, approx) = alpha_single::<S>(cfg.eps, &m, &doc::vec3(trans)?)?;
    Ok(Outcome::ok(json!({
        "schema": SCHEMA,
        "command": "margulis",
        "mode": S::NAME,
        "class": class_name(class),
        "alpha": alpha,
        "alpha_approx": approx,
        "sign": sign.to_string(),
        "neutral": neutral,
    })))
}

fn level_two_doc() -> GroupDoc {
    GroupDoc::new(&level_two_g1(), &level_two_g2(), Some(&[qi(1), qi(1), qi(2)]))
}

/// `pants:l1,l2,l3`: eigenvalues of the three ends, `c` for a cusp.
fn pants_doc(list: &str) -> crooked::Result<GroupDoc> {
    let ends = list
        .split(',')
        .map(|x| if x.trim() == "c" { Ok(None) } else { doc::scalar(x).map(Some) })
        .collect::<crooked::Result<Vec<_>>>()?;
    let ends: [Option<Q>; 3] = ends.try_into().map_err(|_| bad(format!("expected three ends, got {list:?}")))?;
    let (g1, g2) = pants_generators(ends)?;
    Ok(GroupDoc::new(&g1, &g2, None))
}

/// `spec` is `level-two`, `pants:l1,l2,l3` or the path of a group JSON file.
pub fn load_group<S: Mode>(spec: &str, eps: f64) -> crooked::Result<(DecoratedGroup<S>, GroupDoc)> {
    let doc = match spec.strip_prefix("pants:") {
        _ if spec == "level-two" => level_two_doc(),
        Some(list) => pants_doc(list)?,
        None => read_json(Path::new(spec))?,
    };
    let (g1, g2, scales) = doc.parts()?;
    let scales = scales.map(|s| s.map(|x| doc::lift::<S>(&x, eps)));
    let g = build_decorated(&lift_mat(&g1, eps), &lift_mat(&g2, eps), scales.as_ref()).map_err(|e| match e {
        Error::NoExactRoot(r) => bad(format!(
            "a unit neutral vector needs the square root of {r}; use --mode float, or ends with rational eigenvalues"
        )),
        e => e,
    })?;
    Ok((g, doc))
}

pub struct DomainArgs<'a> {
    pub group: &'a str,
    pub mu: &'a str,
    pub weights: Option<&'a str>,
    pub quad: bool,
    pub witnesses: usize,
}

pub fn cmd_domain<S: Mode>(cfg: &Config, a: DomainArgs) -> anyhow::Result<Outcome> {
    let (g, group) = load_group::<S>(a.group, cfg.eps)?;
    let mu = doc::triple(a.mu)?.map(|x| doc::lift::<S>(&x, cfg.eps));
    let weights = a.weights.map(doc::triple).transpose()?.map(|w| w.map(|x| doc::lift::<S>(&x, cfg.eps)));
    let t = construct_triple(&g, &mu, weights.as_ref())?;
    let half = S::one().half();
    let shown_weights = weights.unwrap_or_else(|| [half.clone(), half.clone(), half]);
    let mut ok = t.report.verified();
    let (mut quad, mut quad_error) = (None, None);
    if a.quad {
        if !ok {
            quad_error = Some(ErrorDoc::of(&Error::VerificationFailed("triple is not verified".into())));
        } else {
            match quad_domain(&g, &t, a.witnesses, &mut cfg.rng()) {
                Ok(d) => {
                    ok &= d.report.verified();
                    quad = Some(QuadDoc::of(&d));
                }
                Err(e @ (Error::SearchExhausted { .. } | Error::VerificationFailed(_) | Error::Indeterminate(_))) => {
                    ok = false;
                    quad_error = Some(ErrorDoc::of(&e));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    let d = DomainDoc {
        schema: SCHEMA,
        mode: S::NAME.into(),
        group,
        mu: show3(&mu),
        weights: show3(&shown_weights),
        triple: TripleDoc::of(&t, &t.cocycle.u3(&g)),
        quad,
        quad_error,
        status: if ok { "certified" } else { "failed" }.into(),
    };
    Ok(Outcome::pass_or_fail(serde_json::to_value(&d)?, ok))
}

fn parse_int_triple(s: &str) -> crooked::Result<[BigInt; 3]> {
    let v = s
        .split(',')
        .map(|x| x.trim().parse::<BigInt>().map_err(|_| bad(format!("not an integer: {x:?}"))))
        .collect::<crooked::Result<Vec<_>>>()?;
    v.try_into().map_err(|_| bad(format!("expected three comma-separated integers, got {s:?}")))
}

fn latex(name: &str, m: &Mat3<Q>) -> String {
    let rows: Vec<String> = m.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" & ")).collect();
    format!("{name} = \\begin{{pmatrix}}\n{}\n\\end{{pmatrix}}\n", rows.join(" \\\\\n"))
}

pub fn cmd_sp4(cfg: &Config, mu: &str, corrected: bool, with_latex: bool) -> anyhow::Result<Outcome> {
    let mu = parse_int_triple(mu)?;
    let (g1, g2) = if corrected { theorem_b_generators_corrected(&mu)? } else { theorem_b_generators(&mu)? };
    let r = verify_generators(&mu, g1, g2, &mut cfg.rng())?;
    // The corrected generators differ from the printed ones by construction.
    let pass = if corrected {
        r.integral
            && r.symplectic
            && r.unimodular
            && r.normalizes_u
            && r.block_structure
            && r.action_matches_bridge
            && r.margulis_matches
    } else {
        r.all_pass()
    };
    let erratum = (!r.margulis_matches).then(|| {
        format!(
            "these generators have Margulis invariants ({}, {}, {}), not the requested ({}, {}, {}); rerun with --corrected",
            r.margulis[0], r.margulis[1], r.margulis[2], mu[0], mu[1], mu[2]
        )
    });
    let tex = with_latex.then(|| format!("{}{}", latex("\\gamma_1", &r.gamma1), latex("\\gamma_2", &r.gamma2)));
    if let Some(t) = &tex {
        std::fs::create_dir_all(&cfg.out)?;
        let path = cfg.out.join("sp4.tex");
        std::fs::write(&path, t).with_context(|| format!("writing {}", path.display()))?;
    }
    let report = json!({
        "schema": SCHEMA,
        "command": "sp4",
        "mu": mu.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "generators": if corrected { "corrected" } else { "printed" },
        "gamma1": show_mat(&r.gamma1),
        "gamma2": show_mat(&r.gamma2),
        "checks": {
            "matches_printed": r.matches_printed,
            "integral": r.integral,
            "symplectic": r.symplectic,
            "unimodular": r.unimodular,
            "normalizes_u": r.normalizes_u,
            "block_structure": r.block_structure,
            "action_matches_bridge": r.action_matches_bridge,
            "margulis_matches": r.margulis_matches,
        },
        "margulis": r.margulis.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "erratum": erratum,
        "latex": tex,
        "note": r.note(),
        "status": if pass { "pass" } else { "fail" },
    });
    Ok(Outcome::pass_or_fail(report, pass))
}

fn domain_planes(d: &DomainDoc) -> crooked::Result<Vec<(String, CrookedPlane<Q>)>> {
    let mut out = Vec::new();
    for (i, p) in d.triple.planes.iter().enumerate() {
        out.push((format!("plane_{}", i + 1), p.plane()?));
    }
    if let Some(q) = &d.quad {
        for (i, h) in q.halfspaces()?.iter().enumerate() {
            out.push((format!("quad_{}", i + 1), h.boundary()));
        }
    }
    Ok(out)
}

pub fn cmd_mesh(cfg: &Config, domain: &Path, radius: f64) -> anyhow::Result<Outcome> {
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(bad(format!("radius must be a finite nonnegative number, got {radius}")).into());
    }
    let d = read_domain(domain)?;
    let planes = domain_planes(&d)?;
    let mut warnings = Vec::new();
    if radius == 0.0 {
        let w = "radius 0 clips every plane away; meshes are empty".to_string();
        eprintln!("warning: {w}");
        warnings.push(w);
    }
    std::fs::create_dir_all(&cfg.out)?;
    let mut meshes = Vec::new();
    let mut files = Vec::new();
    for (name, c) in &planes {
        let m = mesh::plane_mesh(name, c, radius)?;
        let header = format!("crooked plane {name}: v = {}, p = {}, ball radius {radius}", c.v, c.p);
        let path = cfg.out.join(format!("{name}.obj"));
        std::fs::write(&path, mesh::obj(&m, &header)).with_context(|| format!("writing {}", path.display()))?;
        files.push(json!({
            "name": name,
            "file": path.file_name().map(|f| f.to_string_lossy().into_owned()),
            "vertices": m.vertices(),
            "faces": m.faces(),
        }));
        meshes.push(m);
    }
    let scene = cfg.out.join("scene.obj");
    std::fs::write(&scene, mesh::scene(&meshes, &format!("{} crooked planes, ball radius {radius}", meshes.len())))
        .with_context(|| format!("writing {}", scene.display()))?;
    Ok(Outcome::ok(json!({
        "schema": SCHEMA,
        "command": "mesh",
        "radius": radius,
        "segments": mesh::SEGMENTS,
        "files": files,
        "scene": "scene.obj",
        "warnings": warnings,
    })))
}

fn hit_doc(h: &TileHit) -> Value {
    let side = |(w, i): &(Vec<usize>, usize)| json!({"word": word_name(w), "plane": QUAD_NAMES[*i]});
    json!({"a": side(&h.a), "b": side(&h.b), "verdict": VerdictDoc::from(&h.verdict)})
}

pub fn cmd_tile<S: Mode>(cfg: &Config, domain: &Path, depth: usize, samples: usize) -> anyhow::Result<Outcome> {
    let d = read_domain(domain)?;
    let q = d.quad.as_ref().ok_or_else(|| bad("domain has no quad section; build it with `domain --quad`"))?;
    let hs = q.halfspaces()?.map(|h| HalfSpace { v: lift_vec::<S>(&h.v, cfg.eps), p: lift_vec::<S>(&h.p, cfg.eps) });
    let mut gens = Vec::with_capacity(2);
    for g in [&q.gamma1, &q.gamma2] {
        let g = g.affine()?;
        check_isometry(&g.linear)?;
        gens.push(AffineIso::new(lift_mat::<S>(&g.linear, cfg.eps), lift_vec::<S>(&g.trans, cfg.eps)));
    }
    let gens: [AffineIso<S>; 2] = gens.try_into().map_err(|_| bad("expected two generators"))?;
    let r = tile_audit(&hs, &gens, depth, samples, cfg.jobs, &mut cfg.rng())?;
    if !r.intersections.is_empty() {
        eprintln!("error: {} boundary intersections among domain translates", r.intersections.len());
    }
    let report = json!({
        "schema": SCHEMA,
        "command": "tile",
        "mode": S::NAME,
        "depth": r.depth,
        "words": r.words,
        "planes": r.planes,
        "pairs_checked": r.pairs_checked,
        "intersections": r.intersections.iter().map(hit_doc).collect::<Vec<_>>(),
        "samples": r.samples,
        "max_cover": r.max_cover,
        "clean": r.clean(),
        "note": r.note(),
        "status": if r.clean() { "clean" } else { "intersections found" },
    });
    Ok(Outcome::pass_or_fail(report, r.clean()))
}

pub struct PairArgs<'a> {
    pub v1: &'a str,
    pub p1: &'a str,
    pub v2: &'a str,
    pub p2: &'a str,
}

fn available<T: serde::Serialize>(r: crooked::Result<T>) -> Value {
    match r {
        Ok(x) => json!(x),
        Err(e) => json!({"unavailable": e.to_string()}),
    }
}

pub fn cmd_check_disjoint<S: Mode>(cfg: &Config, a: PairArgs) -> anyhow::Result<Outcome> {
    let plane = |v: &str, p: &str| -> crooked::Result<CrookedPlane<S>> {
        CrookedPlane::new(lift_vec(&doc::vec3(v)?, cfg.eps), lift_vec(&doc::vec3(p)?, cfg.eps))
    };
    let (c1, c2) = (plane(a.v1, a.p1)?, plane(a.v2, a.p2)?);
    let kind = pair_type(&c1.v, &c2.v)?;
    let closed = disjoint_closed_form(&c1, &c2);
    let verdict = S::decide(&c1, &c2)?;
    let agree = closed.as_ref().map_or(true, |b| *b == verdict.is_disjoint());
    let report = json!({
        "schema": SCHEMA,
        "command": "check-disjoint",
        "mode": S::NAME,
        "planes": [doc::PlaneDoc::of(&c1.v, &c1.p), doc::PlaneDoc::of(&c2.v, &c2.p)],
        "pair_type": kind.to_string(),
        "closed_form_disjoint": available(closed),
        "cone_disjoint": available(S::cone(&c1, &c2)),
        "oracle": VerdictDoc::from(&verdict),
        "oracle_exact": S::EXACT,
        "agree": agree,
    });
    Ok(Outcome::pass_or_fail(report, agree))
}
