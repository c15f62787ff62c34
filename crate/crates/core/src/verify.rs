//! The verification report: every computational check, per algebra.
//!
//! Each check draws from its own generator, seeded from the run seed, the
//! algebra and the check id, so checks can run in any order and be replayed
//! one at a time.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::compalg::{AlgebraTag, CdElement};
use crate::context::{sparse_jordan, AlgebraContext};
use crate::error::{Error, Result};
use crate::exactnum::{GaussRat, ScalarSampler};
use crate::freudenthal::{
    eval_quartic, gradient_hessian, gradient_relation_nullspace, phi_hat_unchecked, polar_cubic, psi_hat,
    tangent_space_point, FtsVector, LinOp, Quartic, QuarticCoeffs, MONOMIAL_NAMES,
};
use crate::jet::{certify_zero_form, gradient, line_jet, CertMode, PolyMap};
use crate::jordan::JordanElement;
use crate::linalg::{rank_of_vectors, Matrix, SpanBuilder};
use crate::strata::{
    classify, jacobian_rank_phi, orbit_dim, orbit_tangent, random_rank1, random_rank2, sample_stratum,
    singular_label, StratumLabel,
};
use crate::tancone::{multiplicity, polar_cone_at_x0, secant_cone_rank, ConeProfile, CubicNorm};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Randomized,
    Grid,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum AlgebraSelection {
    One(AlgebraTag),
    All,
}

impl std::str::FromStr for AlgebraSelection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(AlgebraSelection::All);
        }
        let d: usize = s.parse().map_err(|_| Error::Parse(format!("unknown algebra {s:?}")))?;
        AlgebraTag::new(d).map(AlgebraSelection::One)
    }
}

/// Points evaluated per grid certificate before giving up.
pub const GRID_BUDGET: u128 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub algebra: AlgebraSelection,
    pub seed: u64,
    pub trials: usize,
    pub mode: Mode,
    pub include_slow: bool,
    pub output: OutputFormat,
    /// Add one to this calibrated coefficient before checking (fault injection).
    pub perturb_coeff: Option<usize>,
    /// Check ids or id prefixes such as `strata.` to run; empty runs everything.
    pub only: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            algebra: AlgebraSelection::All,
            seed: 0,
            trials: 100,
            mode: Mode::Randomized,
            include_slow: false,
            output: OutputFormat::Json,
            perturb_coeff: None,
            only: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::DegenerateInput("trials must be at least 1"));
        }
        if let Some(i) = self.perturb_coeff {
            if i >= 6 {
                return Err(Error::InvalidDimension(i));
            }
        }
        Ok(())
    }

    /// Algebras to run: `all` means 1, 2, 4, plus 8 with `include_slow`.
    pub fn algebras(&self) -> Vec<AlgebraTag> {
        match self.algebra {
            AlgebraSelection::One(t) => vec![t],
            AlgebraSelection::All => AlgebraTag::ALL
                .into_iter()
                .filter(|t| self.include_slow || *t != AlgebraTag::OCTONION)
                .collect(),
        }
    }

    pub fn selects(&self, id: &str) -> bool {
        self.only.is_empty() || self.only.iter().any(|p| Self::matches(p, id))
    }

    fn matches(pattern: &str, id: &str) -> bool {
        id == pattern || (pattern.ends_with('.') && id.starts_with(pattern))
    }

    fn cert_mode(&self, trials: usize) -> CertMode {
        match self.mode {
            Mode::Randomized => CertMode::Randomized { trials: trials.max(1) },
            Mode::Grid => CertMode::Grid { budget: GRID_BUDGET },
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub status: Status,
    pub expected: String,
    pub observed: String,
    pub samples: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CalibrationRecord {
    pub basis: Vec<String>,
    pub coeffs: Vec<GaussRat>,
    pub flip_sign: i8,
    pub nullspace_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub algebra: usize,
    pub calibration: CalibrationRecord,
    pub checks: Vec<CheckResult>,
}

impl AlgebraReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }
}

pub fn calibration_record(ctx: &AlgebraContext) -> CalibrationRecord {
    let cal = ctx.calibration();
    CalibrationRecord {
        basis: MONOMIAL_NAMES.iter().map(|s| s.to_string()).collect(),
        coeffs: cal.coeffs.0.to_vec(),
        flip_sign: cal.flip_sign,
        nullspace_dim: cal.nullspace_dim,
    }
}

/// FNV-1a, used to derive per-check seeds.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Seed of check `id` for algebra `tag` under run seed `seed`.
pub fn check_seed(seed: u64, tag: AlgebraTag, id: &str) -> u64 {
    fnv1a(format!("{seed}/{}/{id}", tag.dim()).as_bytes())
}

/// What a check body reports back.
enum Outcome {
    Pass(String),
    Fail(String, Value),
    Skip(String),
}

fn pass(observed: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome::Pass(observed.into()))
}

fn fail(observed: impl Into<String>, witness: Value) -> Result<Outcome> {
    Ok(Outcome::Fail(observed.into(), witness))
}

fn point(x: &FtsVector) -> Value {
    serde_json::to_value(x).expect("points serialize")
}

fn flat_point(tag: AlgebraTag, v: &[GaussRat]) -> Value {
    match FtsVector::from_flat(tag, v) {
        Ok(x) => point(&x),
        Err(_) => serde_json::to_value(v).expect("scalars serialize"),
    }
}

type Body = Box<dyn Fn(&Env, &mut ScalarSampler) -> Result<Outcome> + Send + Sync>;

struct Spec {
    id: &'static str,
    expected: String,
    samples: usize,
    body: Body,
}

/// Inputs shared by the check bodies of one algebra.
struct Env<'a> {
    cfg: &'a RunConfig,
    ctx: &'a AlgebraContext,
    tag: AlgebraTag,
    closure_enabled: bool,
}

impl Env<'_> {
    fn q(&self) -> &QuarticCoeffs {
        self.ctx.coeffs()
    }

    fn a(&self) -> usize {
        self.tag.dim()
    }

    fn n(&self) -> usize {
        FtsVector::coord_dim(self.tag)
    }
}

fn spec(id: &'static str, expected: impl Into<String>, samples: usize, body: Body) -> Spec {
    Spec { id, expected: expected.into(), samples: samples.max(1), body }
}

/// Samples of a check scaled from `trials`.
fn scaled(trials: usize, num: usize, den: usize) -> usize {
    (trials * num / den).max(1)
}

fn run_spec(env: &Env, s: &Spec) -> CheckResult {
    let seed = check_seed(env.cfg.seed, env.tag, s.id);
    let mut rng = ScalarSampler::new(seed, 3);
    let (status, observed, counterexample) = match (s.body)(env, &mut rng) {
        Ok(Outcome::Pass(o)) => (Status::Pass, o, None),
        Ok(Outcome::Fail(o, w)) => (Status::Fail, o, Some(w)),
        Ok(Outcome::Skip(o)) => (Status::Skip, o, None),
        Err(e @ Error::InconclusiveZero { .. }) => (Status::Skip, e.to_string(), None),
        Err(e) => (Status::Fail, format!("error: {e}"), Some(json!({ "error": e.to_string() }))),
    };
    CheckResult {
        id: s.id.to_string(),
        status,
        expected: s.expected.clone(),
        observed,
        samples: s.samples,
        seed,
        counterexample,
    }
}

/// Run every check for one algebra.
pub fn run_algebra(cfg: &RunConfig, tag: AlgebraTag) -> Result<AlgebraReport> {
    cfg.validate()?;
    let mut ctx = AlgebraContext::new(tag, cfg.seed)?;
    if let Some(i) = cfg.perturb_coeff {
        ctx = ctx.perturbed(i)?;
    }
    let closure_enabled = tag != AlgebraTag::OCTONION || cfg.include_slow;
    let env = Env { cfg, ctx: &ctx, tag, closure_enabled };
    let all = check_specs(&env);
    if let Some(p) = cfg.only.iter().find(|p| !all.iter().any(|s| RunConfig::matches(p, s.id))) {
        return Err(Error::Parse(format!("no check matches {p:?}")));
    }
    let specs: Vec<Spec> = all.into_iter().filter(|s| cfg.selects(s.id)).collect();
    let mut checks: Vec<CheckResult> = specs.par_iter().map(|s| run_spec(&env, s)).collect();
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(AlgebraReport { algebra: tag.dim(), calibration: calibration_record(&ctx), checks })
}

/// Run the configured algebras in order.
pub fn run_verify(cfg: &RunConfig) -> Result<Vec<AlgebraReport>> {
    cfg.validate()?;
    cfg.algebras().into_iter().map(|t| run_algebra(cfg, t)).collect()
}

pub fn all_passed(reports: &[AlgebraReport]) -> bool {
    reports.iter().all(AlgebraReport::passed)
}

fn check_specs(env: &Env) -> Vec<Spec> {
    let t = env.cfg.trials;
    let a = env.a();
    let n = env.n();
    let mut v = vec![
        spec("compalg.composition", "n(xy) = n(x) n(y)", 10 * t, Box::new(|e, rng| composition(e, rng, 10 * e.cfg.trials))),
        spec("compalg.alternativity", "(xx)y = x(xy) and (yx)x = y(xx)", 10 * t, Box::new(|e, rng| alternativity(e, rng, 10 * e.cfg.trials))),
        spec("compalg.trace_associativity", "t((xy)z) = t(x(yz))", 10 * t, Box::new(|e, rng| trace_assoc(e, rng, 10 * e.cfg.trials))),
        spec("jordan.sharp_pairing", "<A#,A> = 3N(A)", 10 * t, Box::new(|e, rng| jordan_identity(e, rng, 10 * e.cfg.trials, JordanId::SharpPairing))),
        spec("jordan.sharp_sharp", "(A#)# = N(A) A", 10 * t, Box::new(|e, rng| jordan_identity(e, rng, 10 * e.cfg.trials, JordanId::SharpSharp))),
        spec("jordan.norm_of_sharp", "N(A#) = N(A)^2", 10 * t, Box::new(|e, rng| jordan_identity(e, rng, 10 * e.cfg.trials, JordanId::NormOfSharp))),
        spec("freudenthal.calibration", "nullspace dim 1; Hessian at x0 has the single entry 18 in the beta slot", 1, Box::new(calibration_check)),
        spec("freudenthal.gradient_relations", "calibrated vector lies in the solutions of grad Q o phi = 0", 3, Box::new(gradient_relations)),
        spec("freudenthal.phi_vanishing", "Q(phi(alpha,A)) = 0", t, Box::new(|e, rng| phi_vanishing(e, rng, e.cfg.trials))),
        spec("freudenthal.tangent_vanishing", "Q = 0 on embedded tangent spaces", tangent_spaces(env) * tangent_spaces(env), Box::new(tangent_vanishing)),
        spec("freudenthal.homogeneity", "Q(cx) = c^4 Q(x), Q(s_l x) = l^6 Q(x), jet along x is binomial", t, Box::new(|e, rng| homogeneity(e, rng, e.cfg.trials))),
        spec("freudenthal.flip_sign", "Q o sigma = eps Q, eps = +1 or -1", t, Box::new(|e, rng| flip_check(e, rng, e.cfg.trials))),
        spec("symmetry.transvection_basics", "L_0 = I; L_C x0 = (1, C, C#, N(C)); sigma^2 = I", scaled(t, 1, 10), Box::new(|e, rng| transvection_basics(e, rng, scaled(e.cfg.trials, 1, 10)))),
        spec("symmetry.composition", "L_C L_D = L_{C+D}", scaled(t, 1, 10), Box::new(|e, rng| transvection_composition(e, rng, scaled(e.cfg.trials, 1, 10)))),
        spec("symmetry.one_parameter", "L_{tC} L_{sC} = L_{(t+s)C}; entries cubic in t", scaled(t, 1, 20), Box::new(|e, rng| one_parameter(e, rng, scaled(e.cfg.trials, 1, 20)))),
        spec("symmetry.dual_flip_conjugation", "L'_D psi(beta,B) = psi(beta, B + beta D)", scaled(t, 1, 10), Box::new(|e, rng| dual_conjugation(e, rng, scaled(e.cfg.trials, 1, 10)))),
        spec("symmetry.invariance", "Q o L = Q for transvections and dual transvections", 2 * scaled(t, 1, 10), Box::new(|e, rng| invariance(e, rng, scaled(e.cfg.trials, 1, 10)))),
        spec("strata.ambient_dimension", format!("dim V = {}; phi points span V", 6 * a + 8), n, Box::new(ambient_dimension)),
        spec("strata.x0_signature", format!("ClosedOrbitG, profile (2, 1, {})", 6 * a + 7), 1, Box::new(x0_signature)),
        spec("strata.closed_orbit_samples", format!("ClosedOrbitG, profile (2, 1, {})", 6 * a + 7), scaled(t, 1, 2), Box::new(|e, rng| singular_samples(e, rng, StratumLabel::ClosedOrbitG, scaled(e.cfg.trials, 1, 2)))),
        spec("strata.sigma_plus_samples", format!("SigmaPlus, zero gradient, profile (2, {}, {})", a + 3, 5 * a + 5), scaled(t, 1, 2), Box::new(|e, rng| singular_samples(e, rng, StratumLabel::SigmaPlus, scaled(e.cfg.trials, 1, 2)))),
        spec("strata.tau_smooth_samples", "TauSmooth, Q = 0, multiplicity 1", scaled(t, 1, 2), Box::new(|e, rng| smooth_samples(e, rng, StratumLabel::TauSmooth, scaled(e.cfg.trials, 1, 2)))),
        spec("strata.ambient_samples", "Ambient, Q != 0", scaled(t, 1, 2), Box::new(|e, rng| smooth_samples(e, rng, StratumLabel::Ambient, scaled(e.cfg.trials, 1, 2)))),
        spec("strata.equivariance", "classify(g x) = classify(x) for symmetry words g", scaled(t, 1, 2), Box::new(|e, rng| equivariance(e, rng, scaled(e.cfg.trials, 1, 2)))),
        spec("strata.jacobian_rank", format!("rank of the phi Jacobian = {}", 3 * a + 4), scaled(t, 1, 5) + 2, Box::new(|e, rng| jacobian(e, rng, scaled(e.cfg.trials, 1, 5)))),
        spec("strata.lie_closure", format!("closure dimension {}", expected_closure_dim(env.tag)), 1, Box::new(lie_closure_check)),
        spec("strata.orbit_dimensions", format!("orbit dims {} / {} / {}", 3 * a + 4, 5 * a + 5, 6 * a + 7), 3 * scaled(t, 1, 20), Box::new(|e, rng| orbit_dims(e, rng, scaled(e.cfg.trials, 1, 20)))),
        spec("tancone.sigma_plus_kernel", "Hessian kernel at sigma+ equals the orbit tangent", scaled(t, 1, 20), Box::new(|e, rng| sigma_kernel(e, rng, scaled(e.cfg.trials, 1, 20)))),
        spec("tancone.profile_invariance", "profile(L x) = profile(x)", scaled(t, 1, 20), Box::new(|e, rng| profile_invariance(e, rng, scaled(e.cfg.trials, 1, 20)))),
        spec("tancone.secant", "N(X1+X2) = 0 and rank 2 for rank-1 pairs", t, Box::new(|e, rng| secant(e, rng, e.cfg.trials))),
        spec("tancone.secant_cone", format!("profile of N at rank 1 = (2, {}, {}); multiplicity 1 at rank 2", a + 2, 2 * a + 1), scaled(t, 1, 10) + 1, Box::new(|e, rng| secant_cone(e, rng, scaled(e.cfg.trials, 1, 10)))),
        spec("tancone.polar", "Phi1(H_p) = 18 p3 beta_v; Phi2(f) = 0; Phi3(f)|beta=0 = 2 p3 c5 N(B_v), no A_v dependence", polar_count(env), Box::new(polar_check)),
    ];
    v.sort_by(|x, y| x.id.cmp(y.id));
    v
}

fn expected_closure_dim(tag: AlgebraTag) -> usize {
    match tag.dim() {
        1 => 21,
        2 => 35,
        4 => 66,
        _ => 133,
    }
}

fn tangent_spaces(env: &Env) -> usize {
    if env.tag == AlgebraTag::OCTONION {
        env.cfg.trials.min(10)
    } else {
        env.cfg.trials
    }
}

fn polar_count(env: &Env) -> usize {
    match env.cfg.mode {
        Mode::Randomized => scaled(env.cfg.trials, 1, 5),
        Mode::Grid => 1,
    }
}

fn composition(e: &Env, rng: &mut ScalarSampler, k: usize) -> Result<Outcome> {
    for _ in 0..k {
        let x = CdElement::random(e.tag, rng);
        let y = CdElement::random(e.tag, rng);
        if x.mul(&y).norm() != &x.norm() * &y.norm() {
            return fail("norm not multiplicative", json!({ "x": x, "y": y }));
        }
    }
    pass(format!("{k} pairs"))
}

fn alternativity(e: &Env, rng: &mut ScalarSampler, k: usize) -> Result<Outcome> {
    for _ in 0..k {
        let x = CdElement::random(e.tag, rng);
        let y = CdElement::random(e.tag, rng);
        if x.mul(&x).mul(&y) != x.mul(&x.mul(&y)) || y.mul(&x).mul(&x) != y.mul(&x.mul(&x)) {
            return fail("not alternative", json!({ "x": x, "y": y }));
        }
    }
    pass(format!("{k} pairs"))
}

fn trace_assoc(e: &Env, rng: &mut ScalarSampler, k: usize) -> Result<Outcome> {
    for _ in 0..k {
        let x = CdElement::random(e.tag, rng);
        let y = CdElement::random(e.tag, rng);
        let z = CdElement::random(e.tag, rng);
        if x.mul(&y).mul(&z).trace() != x.mul(&y.mul(&z)).trace() {
            return fail("trace not associative", json!({ "x": x, "y": y, "z": z }));
        }
    }
    pass(format!("{k} triples"))
}

#[derive(Copy, Clone)]
enum JordanId {
    SharpPairing,
    SharpSharp,
    NormOfSharp,
}

fn jordan_identity(e: &Env, rng: &mut ScalarSampler, k: usize, which: JordanId) -> Result<Outcome> {
    for _ in 0..k {
        let x = JordanElement::random(e.tag, rng);
        let n = x.det();
        let s = x.sharp();
        let ok = match which {
            JordanId::SharpPairing => s.pair(&x) == &GaussRat::from_int(3) * &n,
            JordanId::SharpSharp => s.sharp() == x.scale(&n),
            JordanId::NormOfSharp => s.det() == &n * &n,
        };
        if !ok {
            return fail("identity fails", json!({ "A": x }));
        }
    }
    pass(format!("{k} elements"))
}

fn calibration_check(e: &Env, _rng: &mut ScalarSampler) -> Result<Outcome> {
    let cal = e.ctx.calibration();
    let (g, h) = gradient_hessian(e.q(), &FtsVector::x0(e.tag));
    let bi = FtsVector::beta_index(e.tag);
    let mut expect = Matrix::zeros(e.n(), e.n());
    expect.set(bi, bi, GaussRat::from_int(18));
    let q0 = eval_quartic(e.q(), &FtsVector::x0(e.tag));
    let observed = format!(
        "nullspace dim {}, beta-beta Hessian entry {}, Hessian rank {}",
        cal.nullspace_dim,
        h.get(bi, bi),
        h.rank()
    );
    if cal.nullspace_dim == 1 && h == expect && g.is_zero() && q0.is_zero() {
        pass(observed)
    } else {
        fail(observed, json!({ "coeffs": e.q() }))
    }
}

fn gradient_relations(e: &Env, rng: &mut ScalarSampler) -> Result<Outcome> {
    let null = gradient_relation_nullspace(e.tag, 3, rng.next_u64());
    let mut rows: Vec<Vec<GaussRat>> = null.iter().map(|c| c.0.to_vec()).collect();
    let r = rank_of_vectors(&rows);
    rows.push(e.q().0.to_vec());
    let observed = format!("solution space dimension {r}");
    if rank_of_vectors(&rows) == r {
        pass(observed)
    } else {
        fail(format!("{observed}; calibrated vector outside"), json!({ "coeffs": e.q() }))
    }
}

fn phi_vanishing(e: &Env, rng: &mut ScalarSampler, k: usize) -> Result<Outcome> {
    for _ in 0..k {
        let x = phi_hat_unchecked(&rng.scalar(), &JordanElement::random(e.tag, rng));
        if !eval_quartic(e.q(), &x).is_zero() {
            return fail("Q(phi) != 0", point(&x));
        }
    }
    pass(format!("{k} points"))
}

fn tangent_vanishing(e: &Env, rng: &mut ScalarSampler) -> Result<Outcome> {
    let k = tangent_spaces(e);
    for _ in 0..k {
        let a = JordanElement::random_int(e.tag, rng);
        for _ in 0..k {
            let x = tangent_space_point(&a, rng);
            if !eval_quartic(e.q(), &x).is_zero() {
                return fail("Q != 0 on a tangent space", point(&x));
            }
        }
    }
    pass(format!("{k} spaces x {k} points"))
}

fn homogeneity(e: &Env, rng: &mut ScalarSampler, k: usize) -> Result<Outcome> {
    let q = Quartic::new(e.tag, e.q().clone());
    for _ in 0..k {
        let x = FtsVector::random_int(e.tag, rng);
        let c = rng.nonzero_gauss_int();
        let qx = eval_quartic(e.q(), &x);
        if eval_quartic(e.q(), &x.scale(&c)) != &c.pow(4) * &qx
            || eval_quartic(e.q(), &x.graded(&c)) != &c.pow(6) * &qx
        {
            return fail("scaling law fails", json!({ "x": x, "c": c }));
        }
        let flat = x.to_flat();
        let jet = line_jet(&q, &flat, &flat, 4)?;
        for (kk, b) in [1, 4, 6, 4, 1].iter().enumerate() {
            if jet.coeff(kk) != &qx * &GaussRat::from_int(*b) {
                return fail("jet along x is not binomial", point(&x));
            }
        }
    }
    pass(format!("{k} points"))
}

fn flip_check(e: &Env, rng: &mut ScalarSampler, k: usize) -> Result<Outcome> {
    match crate::freudenthal::flip_sign(e.tag, e.q(), k, rng) {
        Ok(s) if s == e.ctx.calibration().flip_sign => pass(format!("eps = {s:+}")),
        Ok(s) => fail(format!("eps = {s:+}, calibration recorded {}", e.ctx.calibration().flip_sign), Value::Null),
        Err(_) => {
            for _ in 0..k {
                let x = FtsVector::random_int(e.tag, rng);
                let q = eval_quartic(e.q(), &x);
                let qf = eval_quartic(e.q(), &x.flip());
                if qf != q && qf != -q {
                    return fail("Q o sigma is not +-Q", point(&x));
                }
            }
            fail("inconsistent flip sign", Value::Null)
        }
    }
}

fn transvection_basics(e: &Env, rng: &mut ScalarSampler, k: usize) -> Result<Outcome> {
    let zero = JordanElement::zero(e.tag);
    if !e.ctx.transvection(&zero)?.is_identity() || !e.ctx.dual_transvection(&zero)?.is_identity() {
        return fail("L_0 != I", Value::Null);
    }
    let flip = LinOp::flip(e.tag);
    if !flip.compose(&flip).is_identity() {
        return fail("sigma^2 != I", Value::Null);
    }
    let x0 = FtsVector::x0(e.tag);
    for _ in 0..k {
        let c = JordanElement::random_int(e.tag, rng);
        let want = FtsVector { alpha: GaussRat::one(), a: c.clone(), b: c.sharp(), beta: c.det() };
        if e.ctx.transvection(&c)?.apply(&x0) != want {
            return fail("L_C x0 != (1, C, C#, N(C))", json!({ "C": c }));
        }
    }
    pass(format!("{k} transvections"))
}

fn transvection_composition(e: &Env, rng: &mut ScalarSampler, k: usize) -> Result<Outcome> {
    for _ in 0..k {
        let c = JordanElement::random_int(e.tag, rng);
        let d = JordanElement::random_int(e.tag, rng);
        let lhs = e.ctx.transvection(&c)?.compose(&e.ctx.transvection(&d)?);
        if lhs != e.ctx.transvection(&c.add(&d))? {
            return fail("L_C L_D != L_{C+D}", json!({ "C": c, "D": d }));
        }
        let lhs = e.ctx.dual_transvection(&c)?.compose(&e.ctx.dual_transvection(&d)?);
        if lhs != e.ctx.dual_transvection(&c.add(&d))? {
            return fail("L'_C L'_D != L'_{C+D}", json!({ "C": c, "D": d }));
        }
    }
    pass(format!("{k} pairs, both sides"))
}

fn one_parameter(e: &Env, rng: &mut ScalarSampler, k: usize) -> Result<Outcome> {
    for _ in 0..k {
        let c = JordanElement::random_int(e.tag, rng);
        let l: Vec<Matrix> = (0..5)
            .map(|t| e.ctx.transvection(&c.scale(&GaussRat::from_int(t))).map(|m| m.matrix().clone()))
            .collect::<Result<_>>()?;
        if l[1].mul(&l[2]) != l[3] {
            return fail("L_C L_2C != L_3C", json!({ "C": c }));
        }
        // The fourth finite difference of a cubic vanishes.
        let w = [1, -4, 6, -4, 1];
        let mut diff = Matrix::zeros(e.n(), e.n());
        for (m, wt) in l.iter().zip(w) {
            diff = diff.add(&m.scale(&GaussRat::from_int(wt)));
        }
        if !diff.is_zero() {
            return fail("entries of L_{tC} are not cubic in t", json!({ "C": c }));
        }
    }
    pass(format!("{k} directions"))
}

fn dual_conjugation(e: &Env, rng: &mut ScalarSampler, k: usize) -> Result<Outcome> {
    for _ in 0..k {
        let d = JordanElement::random_int(e.tag, rng);
        let op = e.ctx.dual_transvection(&d)?;
        let beta = rng.nonzero_gauss_int();
        let b = JordanElement::random_int(e.tag, rng);
        if op.apply(&psi_hat(&beta, &b)?) != psi_hat(&beta, &b.add(&d.scale(&beta)))? {
            return fail("flip conjugation fails", json!({ "D": d, "beta": beta, "B": b }));
        }
    }
    pass(format!("{k} dual transvections"))
}

fn invariance(e: &Env, rng: &mut ScalarSampler, k: usize) -> Result<Outcome> {
    let n = e.n();
    let mode = e.cfg.cert_mode(scaled(e.cfg.trials, 1, 5));
    for side in 0..2 {
        for _ in 0..k {
            let c = JordanElement::random_int(e.tag, rng);
            let op = if side == 0 { e.ctx.transvection(&c)? } else { e.ctx.dual_transvection(&c)? };
            let w = certify_zero_form(n, 4, mode, rng, |v| {
                let x = FtsVector::from_flat(e.tag, v).expect("length");
                &eval_quartic(e.q(), &op.apply(&x)) - &eval_quartic(e.q(), &x)
            })?;
            if let Some(v) = w {
                let name = if side == 0 { "L_C" } else { "L'_D" };
                return fail(format!("Q o {name} != Q"), json!({ "C": c, "point": flat_point(e.tag, &v) }));
            }
        }
    }
    pass(format!("{k} transvections and {k} dual transvections"))
}

fn ambient_dimension(e: &Env, rng: &mut ScalarSampler) -> Result<Outcome> {
    let n = e.n();
    let pts: Vec<Vec<GaussRat>> = (0..n)
        .map(|_| phi_hat_unchecked(&rng.nonzero_gauss_int(), &JordanElement::random_int(e.tag, rng)).to_flat())
        .collect();
    let r = rank_of_vectors(&pts);
    let observed = format!("dim V = {n}, rank of {n} phi points = {r}");
    if n == 6 * e.a() + 8 && r == n {
        pass(observed)
    } else {
        fail(observed, Value::Null)
    }
}

fn profile_of(e: &Env, x: &FtsVector) -> Result<(StratumLabel, ConeProfile)> {
    let (g, h) = gradient_hessian(e.q(), x);
    let rank = h.rank();
    let kernel_dim = e.n() - rank;
    if !g.is_zero() {
        return Ok((StratumLabel::TauSmooth, ConeProfile { multiplicity: 1, hessian_rank: rank, kernel_dim }));
    }
    let label = singular_label(e.tag, rank)?;
    Ok((label, ConeProfile { multiplicity: 2, hessian_rank: rank, kernel_dim }))
}

fn expected_profile(e: &Env, label: StratumLabel) -> ConeProfile {
    let a = e.a();
    match label {
        StratumLabel::ClosedOrbitG => ConeProfile { multiplicity: 2, hessian_rank: 1, kernel_dim: 6 * a + 7 },
        _ => ConeProfile { multiplicity: 2, hessian_rank: a + 3, kernel_dim: 5 * a + 5 },
    }
}

fn x0_signature(e: &Env, _rng: &mut ScalarSampler) -> Result<Outcome> {
    let x0 = FtsVector::x0(e.tag);
    let (label, prof) = profile_of(e, &x0)?;
    let observed = format!("{} {:?}", label.name(), prof);
    if label == StratumLabel::ClosedOrbitG && prof == expected_profile(e, label) {
        pass(observed)
    } else {
        fail(observed, point(&x0))
    }
}

fn singular_samples(e: &Env, rng: &mut ScalarSampler, label: StratumLabel, k: usize) -> Result<Outcome> {
    let want = expected_profile(e, label);
    for _ in 0..k {
        let x = sample_stratum(e.ctx, label, rng.next_u64())?;
        let got = profile_of(e, &x);
        match got {
            Ok((l, p)) if l == label && p == want && eval_quartic(e.q(), &x).is_zero() => {}
            Ok((l, p)) => return fail(format!("{} {:?}", l.name(), p), point(&x)),
            Err(err) => return fail(format!("error: {err}"), point(&x)),
        }
    }
    pass(format!("{k} samples, profile {want:?}"))
}

fn smooth_samples(e: &Env, rng: &mut ScalarSampler, label: StratumLabel, k: usize) -> Result<Outcome> {
    let q = Quartic::new(e.tag, e.q().clone());
    let mode = e.cfg.cert_mode(4);
    for _ in 0..k {
        let x = sample_stratum(e.ctx, label, rng.next_u64())?;
        let got = classify(e.q(), &x)?;
        let ok = got == label
            && match label {
                StratumLabel::TauSmooth => multiplicity(&q, &x.to_flat(), mode, rng)? == 1,
                _ => !eval_quartic(e.q(), &x).is_zero(),
            };
        if !ok {
            return fail(format!("classified {}", got.name()), point(&x));
        }
    }
    pass(format!("{k} samples"))
}

/// A random element of the symmetry group used for equivariance: a word in
/// transvections, then a grading scaling and a scalar.
fn random_symmetry(e: &Env, rng: &mut ScalarSampler) -> Result<(LinOp, GaussRat)> {
    let word = e.ctx.random_word(2, rng)?;
    let g = LinOp::grading(e.tag, &rng.nonzero_gauss_int()).compose(&word);
    let g = if rng.index(2) == 0 { LinOp::flip(e.tag).compose(&g) } else { g };
    Ok((g, rng.nonzero_gauss_int()))
}

fn equivariance(e: &Env, rng: &mut ScalarSampler, k: usize) -> Result<Outcome> {
    let labels = [StratumLabel::ClosedOrbitG, StratumLabel::SigmaPlus, StratumLabel::TauSmooth, StratumLabel::Ambient];
    for i in 0..k {
        let label = labels[i % labels.len()];
        let x = sample_stratum(e.ctx, label, rng.next_u64())?;
        let (g, c) = random_symmetry(e, rng)?;
        let y = g.apply(&x).scale(&c);
        let (lx, ly) = (classify(e.q(), &x)?, classify(e.q(), &y)?);
        if lx != ly {
            return fail(format!("{} became {}", lx.name(), ly.name()), json!({ "x": x, "gx": y }));
        }
    }
    pass(format!("{k} words"))
}

fn jacobian(e: &Env, rng: &mut ScalarSampler, k: usize) -> Result<Outcome> {
    let want = 3 * e.a() + 4;
    let one = GaussRat::one();
    let mut inputs = vec![(one.clone(), JordanElement::identity(e.tag)), (one, JordanElement::zero(e.tag))];
    for _ in 0..k {
        inputs.push((rng.nonzero_gauss_int(), JordanElement::random_int(e.tag, rng)));
    }
    for (alpha, a) in &inputs {
        let r = jacobian_rank_phi(alpha, a);
        if r != want {
            return fail(format!("rank {r}"), json!({ "alpha": alpha, "A": a }));
        }
    }
    pass(format!("rank {want} at {} points", inputs.len()))
}

fn closure_skip(e: &Env) -> Option<Result<Outcome>> {
    if e.closure_enabled {
        None
    } else {
        Some(Ok(Outcome::Skip("needs --include-slow".into())))
    }
}

fn lie_closure_check(e: &Env, _rng: &mut ScalarSampler) -> Result<Outcome> {
    if let Some(s) = closure_skip(e) {
        return s;
    }
    let d = e.ctx.closure()?.dim();
    if d == expected_closure_dim(e.tag) {
        pass(format!("dimension {d}"))
    } else {
        fail(format!("dimension {d}"), Value::Null)
    }
}

fn orbit_dims(e: &Env, rng: &mut ScalarSampler, k: usize) -> Result<Outcome> {
    if let Some(s) = closure_skip(e) {
        return s;
    }
    let a = e.a();
    let cl = e.ctx.closure()?;
    let mut notes = Vec::new();
    for (label, want) in
        [(StratumLabel::ClosedOrbitG, 3 * a + 4), (StratumLabel::SigmaPlus, 5 * a + 5), (StratumLabel::TauSmooth, 6 * a + 7)]
    {
        let mut euler = Vec::new();
        for _ in 0..k {
            let x = sample_stratum(e.ctx, label, rng.next_u64())?;
            let od = orbit_dim(cl, &x)?;
            if od.dim != want {
                return fail(format!("{}: orbit dim {}", label.name(), od.dim), point(&x));
            }
            euler.push(od.euler_in_span);
        }
        let all_in = euler.iter().all(|b| *b);
        notes.push(format!("{} {want} (euler direction in span: {all_in})", label.name()));
    }
    pass(notes.join("; "))
}

fn sigma_kernel(e: &Env, rng: &mut ScalarSampler, k: usize) -> Result<Outcome> {
    if let Some(s) = closure_skip(e) {
        return s;
    }
    let cl = e.ctx.closure()?;
    for _ in 0..k {
        let x = sample_stratum(e.ctx, StratumLabel::SigmaPlus, rng.next_u64())?;
        let (_, h) = gradient_hessian(e.q(), &x);
        let tangent = orbit_tangent(cl, &x);
        let mut span = SpanBuilder::new(e.n());
        for v in &tangent {
            span.insert(v);
        }
        let kernel = e.n() - h.rank();
        let inside = tangent.iter().all(|v| h.mul_vec(v).iter().all(GaussRat::is_zero));
        if !inside || span.dim() != kernel {
            return fail(format!("orbit tangent dim {}, kernel dim {kernel}, contained {inside}", span.dim()), point(&x));
        }
    }
    pass(format!("{k} samples, kernel = orbit tangent of dim {}", 5 * e.a() + 5))
}

fn profile_invariance(e: &Env, rng: &mut ScalarSampler, k: usize) -> Result<Outcome> {
    for i in 0..k {
        let label = if i % 2 == 0 { StratumLabel::SigmaPlus } else { StratumLabel::ClosedOrbitG };
        let x = sample_stratum(e.ctx, label, rng.next_u64())?;
        let c = sparse_jordan(e.tag, rng);
        let l = if i % 4 < 2 { e.ctx.transvection(&c)? } else { e.ctx.dual_transvection(&c)? };
        let y = l.apply(&x);
        let (px, py) = (profile_of(e, &x)?.1, profile_of(e, &y)?.1);
        if px != py {
            return fail(format!("{px:?} became {py:?}"), json!({ "x": x, "Lx": y }));
        }
    }
    pass(format!("{k} samples"))
}

fn secant(e: &Env, rng: &mut ScalarSampler, k: usize) -> Result<Outcome> {
    for _ in 0..k {
        let x1 = random_rank1(e.tag, rng)?;
        let x2 = random_rank1(e.tag, rng)?;
        let s = x1.add(&x2);
        if !s.det().is_zero() || s.rank() != 2 {
            return fail(format!("N = {}, rank {}", s.det(), s.rank()), json!({ "X1": x1, "X2": x2 }));
        }
    }
    pass(format!("{k} pairs"))
}

fn secant_cone(e: &Env, rng: &mut ScalarSampler, k: usize) -> Result<Outcome> {
    let a = e.a();
    let want = ConeProfile { multiplicity: 2, hessian_rank: a + 2, kernel_dim: 2 * a + 1 };
    let mut pts = vec![JordanElement::e(e.tag, 0)];
    for _ in 0..k {
        pts.push(random_rank1(e.tag, rng)?);
    }
    for x in &pts {
        let got = secant_cone_rank(x)?;
        if got != want {
            return fail(format!("{got:?}"), json!({ "X": x }));
        }
    }
    let mode = e.cfg.cert_mode(4);
    for _ in 0..k.min(5) {
        let x = random_rank2(e.tag, rng)?;
        let m = multiplicity(&CubicNorm(e.tag), &x.to_flat(), mode, rng)?;
        if m != 1 {
            return fail(format!("multiplicity {m} at rank 2"), json!({ "X": x }));
        }
    }
    pass(format!("{} rank-1 points, profile {want:?}", pts.len()))
}

fn polar_check(e: &Env, rng: &mut ScalarSampler) -> Result<Outcome> {
    let k = polar_count(e);
    let mode = e.cfg.cert_mode(scaled(e.cfg.trials, 1, 10));
    let q = Quartic::new(e.tag, e.q().clone());
    let x0 = FtsVector::x0(e.tag);
    for _ in 0..k {
        let mut p = FtsVector::random_int(e.tag, rng);
        p.beta = rng.nonzero_gauss_int();
        let h = polar_cubic(e.q(), &p)?;
        if !h.at(&x0).is_zero() {
            return fail("H_p(x0) != 0", point(&p));
        }
        let x = FtsVector::random_int(e.tag, rng);
        let g = gradient(&q, &x.to_flat());
        let dot: GaussRat = g.iter().zip(p.to_flat()).map(|(a, b)| a * &b).sum();
        if h.eval(&x.to_flat()) != dot {
            return fail("H_p(x) != <grad Q(x), p>", json!({ "p": p, "x": x }));
        }
        let r = polar_cone_at_x0(e.q(), &p, mode, rng)?;
        if let Some((name, w)) = r.failures().first() {
            return fail(format!("{name} fails"), json!({ "p": p, "v": flat_point(e.tag, w) }));
        }
    }
    pass(format!("{k} directions p"))
}
