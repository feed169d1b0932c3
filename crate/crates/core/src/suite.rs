//! Seeded runs over inputs, assembled into deterministic reports.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{hilbert_dims, AlgebraError, Element, GradedPiece, Theta};
use crate::complex::{CellSet, LatticeComplex, Space};
use crate::corpus::{fixture, Input, InputError};
use crate::ehrhart::{self, EhrhartError};
use crate::geometry::{interior_generation_height, intlin, is_idp, is_reflexive, ConeElement, LatticePoint, Polytope};
use crate::identities::{self as id, EulerMode, IdentityError, IdentityReport};
use crate::lefschetz::{self as lf, Inequality, InequalityInput, LefschetzError, PyramidReport, RankReport, TrialReport};
use crate::scalar::{FieldStream, FiniteField, LinAlgError};
use crate::volume::{generic_volume, CellFlag, VolumeError, VolumeFunctional};

/// Random `(σ, u)` pairs drawn per base point by the general Parseval run.
pub const GENERAL_PER_POINT: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FieldChoice {
    Gf2_32,
    Gf2_64,
    Gf2_128,
    Gf3_32,
    Gf5_32,
}

/// Runs `$body` with `$F` bound to the field type of `$choice`.
#[macro_export]
macro_rules! with_field {
    ($choice:expr, $F:ident => $body:expr) => {
        match $choice {
            $crate::suite::FieldChoice::Gf2_32 => {
                type $F = $crate::scalar::Gf2_32;
                $body
            }
            $crate::suite::FieldChoice::Gf2_64 => {
                type $F = $crate::scalar::Gf2_64;
                $body
            }
            $crate::suite::FieldChoice::Gf2_128 => {
                type $F = $crate::scalar::Gf2_128;
                $body
            }
            $crate::suite::FieldChoice::Gf3_32 => {
                type $F = $crate::scalar::Gf3_32;
                $body
            }
            $crate::suite::FieldChoice::Gf5_32 => {
                type $F = $crate::scalar::Gf5_32;
                $body
            }
        }
    };
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub characteristic: u64,
    pub field_bits: u32,
    pub seed: u64,
    /// Base points per input for identities; random elements per seed for trial properties.
    pub trials: usize,
    /// Independent specializations per input for property checks.
    pub seeds: usize,
    pub expect_fail: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { characteristic: 2, field_bits: 64, seed: 0, trials: 20, seeds: 1, expect_fail: false }
    }
}

impl RunConfig {
    pub fn field(&self) -> Result<FieldChoice, SuiteError> {
        match (self.characteristic, self.field_bits) {
            (2, 32) => Ok(FieldChoice::Gf2_32),
            (2, 64) => Ok(FieldChoice::Gf2_64),
            (2, 128) => Ok(FieldChoice::Gf2_128),
            (3, 32 | 64 | 128) => Ok(FieldChoice::Gf3_32),
            (5, 32 | 64 | 128) => Ok(FieldChoice::Gf5_32),
            (p, k) => Err(SuiteError::Usage(format!("unsupported field: characteristic {p}, {k} bits"))),
        }
    }

    pub fn modulus_id(&self) -> Result<&'static str, SuiteError> {
        Ok(with_field!(self.field()?, F => F::modulus_id()))
    }

    /// Seed of the `t`-th specialization for a named input.
    pub fn instance_seed(&self, input: &str, t: usize) -> u64 {
        let salt = input.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
        FieldStream::new(self.seed).fork(salt).fork(t as u64).seed()
    }
}

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("random specialization exhausted: {0}")]
    Exhausted(String),
    #[error("{0}")]
    Failed(String),
}

impl SuiteError {
    /// Process exit code: 1 computation failure, 2 usage or input, 3 exhaustion.
    pub fn exit_code(&self) -> i32 {
        match self {
            SuiteError::Usage(_) | SuiteError::Input(_) => 2,
            SuiteError::Exhausted(_) => 3,
            SuiteError::Failed(_) => 1,
        }
    }
}

fn volume_failure(e: VolumeError) -> SuiteError {
    match e {
        VolumeError::RankDeficient(_)
        | VolumeError::DegenerateNormalization
        | VolumeError::Linear(LinAlgError::NoInvertiblePivot(_)) => SuiteError::Exhausted(e.to_string()),
        e => SuiteError::Failed(e.to_string()),
    }
}

impl From<VolumeError> for SuiteError {
    fn from(e: VolumeError) -> Self {
        volume_failure(e)
    }
}

impl From<IdentityError> for SuiteError {
    fn from(e: IdentityError) -> Self {
        match e {
            IdentityError::Volume(v) => volume_failure(v),
            IdentityError::Characteristic { .. } => SuiteError::Usage(e.to_string()),
            e => SuiteError::Failed(e.to_string()),
        }
    }
}

impl From<LefschetzError> for SuiteError {
    fn from(e: LefschetzError) -> Self {
        match e {
            LefschetzError::Volume(v) => volume_failure(v),
            e => SuiteError::Failed(e.to_string()),
        }
    }
}

impl From<AlgebraError> for SuiteError {
    fn from(e: AlgebraError) -> Self {
        SuiteError::Failed(e.to_string())
    }
}

impl From<EhrhartError> for SuiteError {
    fn from(e: EhrhartError) -> Self {
        SuiteError::Failed(e.to_string())
    }
}

macro_rules! selector {
    ($name:ident { $($variant:ident => $text:literal),* $(,)? }) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
        #[serde(rename_all = "kebab-case")]
        pub enum $name { $($variant),* }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),*];
            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $text),* }
            }
        }

        impl FromStr for $name {
            type Err = SuiteError;
            fn from_str(s: &str) -> Result<Self, SuiteError> {
                match s {
                    $($text => Ok($name::$variant),)*
                    _ => Err(SuiteError::Usage(format!(
                        "unknown {} {s:?}; expected one of {}",
                        stringify!($name).to_lowercase(),
                        [$($text),*].join("|")
                    ))),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

selector!(Identity {
    Parseval => "parseval",
    ParsevalGeneral => "parseval-general",
    ParsevalP => "parseval-p",
    Differential => "differential",
    Euler => "euler",
    Balancing => "balancing",
    Dichotomy => "dichotomy",
});

selector!(Property {
    Anisotropy => "anisotropy",
    Lefschetz => "lefschetz",
    Level => "level",
    Pyramid => "pyramid",
    Partition => "partition",
    HstarInequalities => "hstar-inequalities",
});

impl Identity {
    pub fn default_inputs(self) -> &'static [&'static str] {
        match self {
            Identity::Parseval => &["segment", "triangle-2", "unit-square", "reeve-2", "pyramid-sphere"],
            Identity::ParsevalGeneral => &["segment", "triangle-2", "reflexive-square"],
            Identity::ParsevalP | Identity::Euler => &["segment"],
            Identity::Differential => &["segment", "triangle-2"],
            Identity::Balancing => &[
                "segment",
                "segment-1-3",
                "simplex-2",
                "unit-square",
                "reflexive-square",
                "triangle-2",
                "reeve-2",
                "unit-cube",
                "pyramid-sphere",
            ],
            Identity::Dichotomy => &["segment", "reeve-2", "reeve-3"],
        }
    }
}

impl Property {
    pub fn default_inputs(self) -> &'static [&'static str] {
        match self {
            Property::Anisotropy => &[
                "segment",
                "simplex-2",
                "unit-square",
                "reflexive-square",
                "triangle-2",
                "unit-cube",
                "reflexive-cube",
                "reeve-2",
            ],
            Property::Lefschetz => &["segment", "reflexive-square", "reflexive-cube", "unit-square", "pyramid-sphere"],
            Property::Level => &["unit-square", "unit-cube", "reflexive-square", "triangle-2"],
            Property::Pyramid => &["segment", "unit-square"],
            Property::Partition => &["unit-square", "reflexive-square", "triangle-2", "unit-cube"],
            Property::HstarInequalities => &[
                "segment",
                "unit-square",
                "unit-cube",
                "reflexive-square",
                "reflexive-cube",
                "triangle-2",
                "reeve-2",
                "reeve-3",
            ],
        }
    }
}

pub fn load_fixtures(names: &[&str]) -> Result<Vec<Input>, SuiteError> {
    names.iter().map(|n| Ok(fixture(n)?)).collect()
}

/// Whether an entry is under test or a side check that must hold either way.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Primary,
    Consistency,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    Identity(IdentityReport),
    Rank(RankReport),
    Trial(TrialReport),
    Pyramid(PyramidReport),
    Inequality(Inequality),
    Skipped { reason: String },
}

impl Outcome {
    /// `None` for skipped entries and trial loops where every trial was skipped.
    pub fn pass(&self) -> Option<bool> {
        match self {
            Outcome::Identity(r) => Some(r.pass),
            Outcome::Rank(r) => Some(r.pass),
            Outcome::Trial(r) if r.skipped == r.trials => None,
            Outcome::Trial(r) => Some(r.pass),
            Outcome::Pyramid(r) => Some(r.pass),
            Outcome::Inequality(r) => Some(r.holds),
            Outcome::Skipped { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub input: String,
    pub seed: u64,
    pub retries: u32,
    pub role: Role,
    #[serde(flatten)]
    pub outcome: Outcome,
}

impl Entry {
    fn new(input: &str, seed: u64, retries: u32, outcome: Outcome) -> Entry {
        Entry { input: input.into(), seed, retries, role: Role::Primary, outcome }
    }

    fn consistency(mut self) -> Entry {
        self.role = Role::Consistency;
        self
    }
}

/// Without `expect_fail`: no entry fails. With it: every primary entry that
/// ran fails (and at least one ran) while every consistency entry passes.
pub fn verdict(entries: &[Entry], expect_fail: bool) -> bool {
    let ran = |role| entries.iter().filter(move |e| e.role == role).filter_map(|e| e.outcome.pass());
    if expect_fail {
        let mut primary = ran(Role::Primary).peekable();
        primary.peek().is_some() && primary.all(|p| !p) && ran(Role::Consistency).all(|p| p)
    } else {
        entries.iter().filter_map(|e| e.outcome.pass()).all(|p| p)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report<T> {
    pub command: String,
    pub config: RunConfig,
    pub modulus: String,
    pub results: T,
    pub pass: bool,
}

impl<T: Serialize> Report<T> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

/// The space an input is read as: `(P, ∂P)` for polytopes, the complex
/// relative to its boundary, or its face ring when it has none.
pub fn space_of(input: &Input) -> Space {
    let cx = input.pair();
    if cx.has_boundary() {
        Space::relative(cx)
    } else {
        Space::ring(cx)
    }
}

fn random_element<F: FiniteField>(piece: &GradedPiece<F>, stream: &mut FieldStream) -> Option<Element<F>> {
    lf::random_class(piece, stream)
}

fn require_char2<F: FiniteField>(what: &str) -> Result<(), SuiteError> {
    if F::CHARACTERISTIC != 2 {
        return Err(SuiteError::Usage(format!("{what} runs in characteristic 2 (use --char 2)")));
    }
    Ok(())
}

pub fn run_verify(identity: Identity, inputs: &[Input], cfg: &RunConfig) -> Result<Report<Vec<Entry>>, SuiteError> {
    let results = with_field!(cfg.field()?, F => verify::<F>(identity, inputs, cfg)?);
    let pass = verdict(&results, cfg.expect_fail);
    Ok(Report {
        command: format!("verify {identity}"),
        config: cfg.clone(),
        modulus: cfg.modulus_id()?.into(),
        results,
        pass,
    })
}

pub fn verify<F: FiniteField>(identity: Identity, inputs: &[Input], cfg: &RunConfig) -> Result<Vec<Entry>, SuiteError> {
    if matches!(identity, Identity::Parseval | Identity::ParsevalGeneral | Identity::Differential | Identity::Dichotomy) {
        require_char2::<F>(identity.as_str())?;
    }
    let mut out = Vec::new();
    for input in inputs {
        let space = space_of(input);
        let name = input.name();
        for t in 0..cfg.trials {
            let seed = cfg.instance_seed(name, t);
            let (theta, vf, retries) = generic_volume::<F>(&space, &FieldStream::new(seed), None)?;
            let mut stream = FieldStream::new(seed).fork(u64::MAX);
            let push = |out: &mut Vec<Entry>, r: IdentityReport| {
                out.push(Entry::new(name, seed, retries, Outcome::Identity(r.with_retries(retries))))
            };
            match identity {
                Identity::Parseval => {
                    for &a in &vf.monomials {
                        push(&mut out, id::check_parseval_char2(&vf, &theta, a)?);
                    }
                }
                Identity::ParsevalP => {
                    for &a in &vf.monomials {
                        push(&mut out, id::check_parseval_char_p(&vf, &theta, a)?);
                    }
                }
                Identity::ParsevalGeneral => {
                    let candidates = general_candidates(&vf, &theta)?;
                    if candidates.is_empty() {
                        out.push(Entry::new(name, seed, retries, Outcome::Skipped { reason: "no admissible (σ, u)".into() }));
                        continue;
                    }
                    for _ in 0..GENERAL_PER_POINT {
                        let (sigma, piece) = &candidates[stream.index(candidates.len())];
                        let u = random_element(piece, &mut stream).unwrap_or_else(|| Element::zero(piece.degree()));
                        push(&mut out, id::check_parseval_general(&vf, &theta, sigma, &u)?);
                    }
                }
                Identity::Differential => {
                    let skipped = differential_at::<F>(&vf, &theta, &mut stream, &mut |r| push(&mut out, r))?;
                    if skipped > 0 {
                        let reason = format!("{skipped} instances with A^k of the pair zero and Σσ not interior");
                        out.push(Entry::new(name, seed, retries, Outcome::Skipped { reason }));
                    }
                }
                Identity::Euler => {
                    for r in id::check_euler(&space, &theta, Some(&vf.flag), EulerMode::Literal)? {
                        push(&mut out, r);
                    }
                    for r in id::check_euler(&space, &theta, Some(&vf.flag), EulerMode::Hasse)? {
                        let r = IdentityReport { identity: "euler-hasse".into(), ..r.with_retries(retries) };
                        out.push(Entry::new(name, seed, retries, Outcome::Identity(r)).consistency());
                    }
                }
                Identity::Balancing => push(&mut out, id::check_balancing(&vf, &theta)?),
                Identity::Dichotomy => {
                    let piece = GradedPiece::new(&space, &theta, vf.degree() / 2)?;
                    let mut us = id::pairing_kernel(&vf, &piece)?;
                    us.extend(random_element(&piece, &mut stream));
                    us.push(Element::zero(piece.degree()));
                    for u in &us {
                        push(&mut out, id::isotropy_dichotomy(&vf, u)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Admissible `σ` for the general Parseval identity with the piece `u` is drawn from.
#[allow(clippy::type_complexity)]
fn general_candidates<F: FiniteField>(
    vf: &VolumeFunctional<F>,
    theta: &Theta<F>,
) -> Result<Vec<(Vec<usize>, GradedPiece<F>)>, SuiteError> {
    let space = &vf.space;
    let cx = &space.complex;
    let top = vf.degree();
    let ring = Space::ring(cx.clone());
    let l1 = cx.layer(1);
    let mut out = Vec::new();
    for s in (top % 2..=top).step_by(2) {
        let k = (top - s) / 2;
        let module_piece = GradedPiece::new(space, theta, k)?;
        let ring_piece = GradedPiece::new(&ring, theta, k)?;
        for sigma in id::tuples(l1.len(), s as usize) {
            if !sigma.windows(2).all(|w| w[0] <= w[1]) {
                continue;
            }
            let cells = sigma.iter().fold(CellSet(u64::MAX), |acc, &p| acc.intersection(l1.cells[p]));
            if cells.0 == 0 {
                continue;
            }
            let sum = sigma.iter().fold(vec![0; cx.ambient_dim()], |a, &p| intlin::add(&a, &l1.points[p]));
            let interior = s > 0 && cx.layer(s).find(&sum).is_some_and(|i| space.contains(s, i));
            if module_piece.dim() > 0 {
                out.push((sigma, module_piece.clone()));
            } else if interior && ring_piece.dim() > 0 {
                out.push((sigma, ring_piece.clone()));
            }
        }
    }
    Ok(out)
}

/// Every differential instance at one base point; returns how many were skipped.
fn differential_at<F: FiniteField>(
    vf: &VolumeFunctional<F>,
    theta: &Theta<F>,
    stream: &mut FieldStream,
    sink: &mut dyn FnMut(IdentityReport),
) -> Result<usize, SuiteError> {
    let space = &vf.space;
    let ring = Space::ring(space.complex.clone());
    let rows = space.complex.krull_dim();
    let mut skipped = 0;
    for j in (rows % 2..=rows).step_by(2) {
        let k = ((rows - j) / 2) as u32;
        let module_piece = GradedPiece::new(space, theta, k)?;
        let ring_piece = GradedPiece::new(&ring, theta, k)?;
        for inst in id::differential_instances(space, j)? {
            let u = random_element(&module_piece, stream)
                .or_else(|| inst.sigma_interior.then(|| random_element(&ring_piece, stream)).flatten());
            match u {
                Some(u) => sink(id::check_differential(vf, theta, &inst, &u)?),
                None => skipped += 1,
            }
        }
    }
    Ok(skipped)
}

/// Ehrhart-side facts about a polytope that the property checks take as given.
#[derive(Clone, Debug, Serialize)]
pub struct Certificates {
    pub hstar: Vec<u64>,
    pub idp: bool,
    /// Least cone point that does not split off a height-1 point.
    pub idp_witness: Option<(LatticePoint, u32)>,
    pub reflexive: bool,
    pub reflexive_center: Option<LatticePoint>,
    /// Largest height among minimal generators of the interior.
    pub j: Option<u32>,
    pub interior_generators: Vec<ConeElement>,
}

pub fn certificates(p: &Polytope) -> Result<Certificates, SuiteError> {
    let hstar = ehrhart::hstar(p)?.coeffs;
    let idp = is_idp(p, None);
    let centre = is_reflexive(p).map_err(|e| SuiteError::Failed(e.to_string()))?;
    let gens = interior_generation_height(p, None).map_err(|e| SuiteError::Failed(e.to_string()))?;
    Ok(Certificates {
        hstar,
        idp: idp.holds(),
        idp_witness: idp.witness.map(|w| (w.point, w.height)),
        reflexive: centre.is_some(),
        reflexive_center: centre,
        j: gens.as_ref().map(|(j, _)| *j),
        interior_generators: gens.map(|(_, g)| g).unwrap_or_default(),
    })
}

pub fn run_check(property: Property, inputs: &[Input], cfg: &RunConfig) -> Result<Report<Vec<Entry>>, SuiteError> {
    let results = with_field!(cfg.field()?, F => check::<F>(property, inputs, cfg)?);
    let pass = verdict(&results, cfg.expect_fail);
    Ok(Report {
        command: format!("check {property}"),
        config: cfg.clone(),
        modulus: cfg.modulus_id()?.into(),
        results,
        pass,
    })
}

fn skipped(name: &str, seed: u64, reason: impl Into<String>) -> Entry {
    Entry::new(name, seed, 0, Outcome::Skipped { reason: reason.into() })
}

pub fn check<F: FiniteField>(property: Property, inputs: &[Input], cfg: &RunConfig) -> Result<Vec<Entry>, SuiteError> {
    if property == Property::Anisotropy {
        require_char2::<F>("anisotropy")?;
    }
    let mut out = Vec::new();
    for input in inputs {
        let name = input.name();
        let certs = input.polytope().map(certificates).transpose()?;
        if property == Property::HstarInequalities {
            let (Some(p), Some(c)) = (input.polytope(), &certs) else {
                out.push(skipped(name, cfg.seed, "h* inequalities need a polytope"));
                continue;
            };
            let seed = cfg.instance_seed(name, 0);
            out.extend(inequalities::<F>(p, c, seed)?.into_iter().map(|i| Entry::new(name, seed, 0, Outcome::Inequality(i))));
            continue;
        }
        for s in 0..cfg.seeds.max(1) {
            let seed = cfg.instance_seed(name, s);
            check_one::<F>(property, input, certs.as_ref(), seed, cfg, &mut out)?;
        }
    }
    Ok(out)
}

fn check_one<F: FiniteField>(
    property: Property,
    input: &Input,
    certs: Option<&Certificates>,
    seed: u64,
    cfg: &RunConfig,
    out: &mut Vec<Entry>,
) -> Result<(), SuiteError> {
    let name = input.name();
    let space = space_of(input);
    let top = space.top_degree();
    let mut stream = FieldStream::new(seed);
    match property {
        Property::Anisotropy => {
            let Some(c) = certs else {
                out.push(skipped(name, seed, "anisotropy runs on polytopes"));
                return Ok(());
            };
            let (theta, vf, retries) = generic_volume::<F>(&space, &FieldStream::new(seed), None)?;
            let mut trials = stream.fork(1);
            for k in 1..=top / 2 {
                let r = lf::check_anisotropy(&space, &theta, k, None, cfg.trials, &mut trials)?;
                out.push(Entry::new(name, seed, retries, Outcome::Trial(r)));
            }
            let l1 = space.complex.layer(1);
            for m in space.basis(1) {
                let m = Element::monomial(1, m);
                for k in 1..=(top - 1) / 2 {
                    let r = lf::check_anisotropy(&space, &theta, k, Some(&m), cfg.trials, &mut trials)?;
                    let r = TrialReport { instance: format!("{} m={:?}", r.instance, l1.points[m.terms[0].0]), ..r };
                    out.push(Entry::new(name, seed, retries, Outcome::Trial(r)));
                }
            }
            if !c.idp && top.is_multiple_of(2) {
                let r = dichotomy_consistency(&vf, &theta, cfg.trials, &mut trials)?;
                out.push(Entry::new(name, seed, retries, Outcome::Trial(r)).consistency());
            }
        }
        Property::Lefschetz => {
            let ell_stream = stream.fork(2);
            let attempt = |reseed: u64| -> Result<Vec<RankReport>, SuiteError> {
                let mut st = if reseed == 0 { FieldStream::new(seed) } else { FieldStream::new(seed).fork(reseed) };
                let theta = Theta::<F>::generic(&space.complex, &mut st);
                let ell: Vec<F> = ell_stream.fork(reseed).sample_vec(space.complex.layer(1).len());
                let mut reports = Vec::new();
                for k in 0..=top / 2 {
                    reports.push(match (certs, space.complex.has_boundary()) {
                        (Some(c), _) => {
                            let expected = c.hstar.get((top - k) as usize).copied().unwrap_or(0) as usize;
                            lf::check_relative_lefschetz(&space, &theta, &ell, k, expected)?
                        }
                        (None, false) => {
                            let expected = GradedPiece::new(&space, &theta, k)?.dim();
                            lf::check_sphere_lefschetz(&space, &theta, &ell, k, expected)?
                        }
                        (None, true) => return Ok(Vec::new()),
                    });
                }
                Ok(reports)
            };
            let mut reports = attempt(0)?;
            let mut retries = 0;
            if reports.iter().any(|r| !r.pass) {
                reports = attempt(1)?;
                retries = 1;
            }
            if reports.is_empty() {
                out.push(skipped(name, seed, "relative Lefschetz needs a polytope or a sphere"));
            }
            out.extend(reports.into_iter().map(|r| Entry::new(name, seed, retries, Outcome::Rank(r))));
        }
        Property::Level => {
            let Some(c) = certs else {
                out.push(skipped(name, seed, "level Lefschetz runs on polytopes"));
                return Ok(());
            };
            let Some(j) = c.j.filter(|_| c.idp) else {
                out.push(skipped(name, seed, "needs IDP and an interior point"));
                return Ok(());
            };
            let ring = Space::ring(space.complex.clone());
            let attempt = |reseed: u64| -> Result<Vec<RankReport>, SuiteError> {
                let mut st = FieldStream::new(seed).fork(reseed);
                let theta = Theta::<F>::generic(&ring.complex, &mut st);
                let ell: Vec<F> = st.sample_vec(ring.complex.layer(1).len());
                (0..=(top - j) / 2)
                    .map(|k| Ok(lf::check_level_lefschetz(&ring, &theta, &ell, j, k, c.hstar[k as usize] as usize)?))
                    .collect()
            };
            let mut reports = attempt(0)?;
            let mut retries = 0;
            if reports.iter().any(|r| !r.pass) {
                reports = attempt(1)?;
                retries = 1;
            }
            out.extend(reports.into_iter().map(|r| Entry::new(name, seed, retries, Outcome::Rank(r))));
        }
        Property::Pyramid => {
            let psis: Vec<Arc<LatticeComplex>> = match input.polytope() {
                Some(p) => vec![Arc::new(LatticeComplex::from_polytope(p, false)), space.complex.clone()],
                None => vec![space.complex.clone()],
            };
            for psi in psis {
                let r = lf::check_pyramid_lemma::<F>(&psi, &mut stream)?;
                out.push(Entry::new(name, seed, 0, Outcome::Pyramid(r)));
            }
        }
        Property::Partition => {
            let Some(c) = certs else {
                out.push(skipped(name, seed, "partition of unity runs on polytopes"));
                return Ok(());
            };
            let Some(j) = c.j.filter(|_| c.idp) else {
                out.push(skipped(name, seed, "needs IDP and an interior point"));
                return Ok(());
            };
            let theta = Theta::<F>::generic(&space.complex, &mut stream);
            for t in 0..=top - j {
                let r = lf::check_partition_of_unity(&space, &theta, j, t, cfg.trials, &mut stream)?;
                out.push(Entry::new(name, seed, 0, Outcome::Trial(r)));
            }
        }
        Property::HstarInequalities => unreachable!("handled per input"),
    }
    Ok(())
}

/// Random `u` and every pairing-kernel element, each classified by the
/// dichotomy; a failure is a `u` whose pairing and square disagree.
fn dichotomy_consistency<F: FiniteField>(
    vf: &VolumeFunctional<F>,
    theta: &Theta<F>,
    trials: usize,
    stream: &mut FieldStream,
) -> Result<TrialReport, SuiteError> {
    let piece = GradedPiece::new(&vf.space, theta, vf.degree() / 2)?;
    let kernel = id::pairing_kernel(vf, &piece)?;
    let mut us = kernel.clone();
    us.extend((0..trials).filter_map(|_| random_element(&piece, stream)));
    let mut failures = 0;
    for u in &us {
        failures += usize::from(!id::isotropy_dichotomy(vf, u)?.pass);
    }
    Ok(TrialReport {
        property: "dichotomy-consistency".into(),
        instance: format!("{} kernel_dim={} dim={}", vf.space.describe(), kernel.len(), piece.dim()),
        trials: us.len(),
        skipped: 0,
        failures,
        pass: failures == 0,
    })
}

fn inequalities<F: FiniteField>(p: &Polytope, c: &Certificates, seed: u64) -> Result<Vec<Inequality>, SuiteError> {
    let d = p.dim();
    let quotient_dims = if c.idp && c.reflexive {
        let ring = Space::ring(Arc::new(LatticeComplex::from_polytope(p, true)));
        let mut st = FieldStream::new(seed);
        let theta = Theta::<F>::generic(&ring.complex, &mut st);
        let ell: Vec<F> = st.sample_vec(ring.complex.layer(1).len());
        Some(lf::quotient_dims(&ring, &theta, &ell, (d / 2) as u32)?)
    } else {
        None
    };
    let input = InequalityInput { hstar: c.hstar.clone(), idp: c.idp, reflexive: c.reflexive, j: c.j, quotient_dims };
    Ok(lf::hstar_inequality_report(&input))
}

#[derive(Clone, Debug, Serialize)]
pub struct HStarReport {
    pub input: String,
    #[serde(rename = "E")]
    pub counts: Vec<u64>,
    /// Coefficients from the constant term up, as exact rationals.
    pub ehrhart_poly: Vec<String>,
    pub hstar: Vec<u64>,
    pub a_poly: Vec<usize>,
    pub seed: u64,
}

pub fn run_hstar(input: &Input, cfg: &RunConfig) -> Result<Report<HStarReport>, SuiteError> {
    let p = input.polytope().ok_or_else(|| SuiteError::Usage("hstar needs a polytope".into()))?;
    let d = p.dim() as u32;
    let seed = cfg.instance_seed(input.name(), 0);
    let mut stream = FieldStream::new(seed);
    let a_poly = with_field!(cfg.field()?, F => ehrhart::a_polynomial::<F>(p, &mut stream)?);
    let results = HStarReport {
        input: input.name().into(),
        counts: ehrhart::counts(p, d + 3)?,
        ehrhart_poly: ehrhart::ehrhart_polynomial(p)?.iter().map(|c| c.to_string()).collect(),
        hstar: ehrhart::hstar(p)?.coeffs,
        a_poly,
        seed,
    };
    Ok(Report { command: "hstar".into(), config: cfg.clone(), modulus: cfg.modulus_id()?.into(), results, pass: true })
}

#[derive(Clone, Debug, Serialize)]
pub struct VolumeReport {
    pub input: String,
    pub space: String,
    pub seed: u64,
    pub retries: u32,
    pub flag_cell: usize,
    /// Vertex indices of the cell for each face of the flag, smallest first.
    pub flag: Vec<Vec<usize>>,
    pub normalization_sum: String,
    pub values: BTreeMap<String, String>,
}

pub fn run_volume(input: &Input, cfg: &RunConfig) -> Result<Report<VolumeReport>, SuiteError> {
    let results = with_field!(cfg.field()?, F => volume_report::<F>(input, cfg)?);
    Ok(Report { command: "volume".into(), config: cfg.clone(), modulus: cfg.modulus_id()?.into(), results, pass: true })
}

fn volume_report<F: FiniteField>(input: &Input, cfg: &RunConfig) -> Result<VolumeReport, SuiteError> {
    let space = space_of(input);
    let seed = cfg.instance_seed(input.name(), 0);
    let (theta, vf, retries) = generic_volume::<F>(&space, &FieldStream::new(seed), None)?;
    let cx = &space.complex;
    let values = vf
        .monomials
        .iter()
        .zip(&vf.values)
        .map(|(&m, v)| (id::point_label(cx, vf.degree(), m), v.to_hex()))
        .collect();
    let CellFlag { cell, flag } = &vf.flag;
    Ok(VolumeReport {
        input: input.name().into(),
        space: space.describe(),
        seed,
        retries,
        flag_cell: *cell,
        flag: flag.faces.iter().map(|f| f.vertices.clone()).collect(),
        normalization_sum: vf.normalization_sum(&theta, &vf.flag)?.to_hex(),
        values,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeReport {
    pub input: String,
    pub dim: usize,
    pub ambient_dim: usize,
    pub vertices: Option<usize>,
    pub lattice_points: usize,
    pub interior_points: Option<usize>,
    pub idp: Option<bool>,
    pub witness: Option<(LatticePoint, u32)>,
    pub reflexive: Option<bool>,
    pub reflexive_center: Option<LatticePoint>,
    pub j: Option<u32>,
    pub hstar: Option<Vec<u64>>,
    /// `dim A^k` of the ring, `k = 0..=d+1`.
    pub ring_dims: Vec<usize>,
    /// `dim A^k` of the pair (or the ring again for a complex without boundary).
    pub pair_dims: Vec<usize>,
    pub cross_validation: Option<bool>,
    pub complex_kind: Option<String>,
    pub inequalities: Vec<Inequality>,
}

pub fn run_analyze(input: &Input, cfg: &RunConfig) -> Result<Report<AnalyzeReport>, SuiteError> {
    let results = with_field!(cfg.field()?, F => analyze::<F>(input, cfg)?);
    let pass = results.cross_validation.unwrap_or(true);
    Ok(Report { command: "analyze".into(), config: cfg.clone(), modulus: cfg.modulus_id()?.into(), results, pass })
}

fn analyze<F: FiniteField>(input: &Input, cfg: &RunConfig) -> Result<AnalyzeReport, SuiteError> {
    let cx = input.pair();
    let top = cx.krull_dim() as u32;
    let seed = cfg.instance_seed(input.name(), 0);
    let mut stream = FieldStream::new(seed);
    let theta = Theta::<F>::generic(&cx, &mut stream);
    let ring_dims = hilbert_dims(&Space::ring(cx.clone()), &theta, top)?;
    let pair_dims = hilbert_dims(&space_of(input), &theta, top)?;
    let mut report = AnalyzeReport {
        input: input.name().into(),
        dim: cx.dim(),
        ambient_dim: cx.ambient_dim(),
        vertices: None,
        lattice_points: cx.layer(1).len(),
        interior_points: None,
        idp: None,
        witness: None,
        reflexive: None,
        reflexive_center: None,
        j: None,
        hstar: None,
        ring_dims,
        pair_dims,
        cross_validation: None,
        complex_kind: None,
        inequalities: Vec::new(),
    };
    match input.polytope() {
        Some(p) => {
            let c = certificates(p)?;
            let d = p.dim();
            let at = |k: usize| c.hstar.get(k).copied().unwrap_or(0) as usize;
            report.cross_validation = Some(
                (0..=d + 1).all(|k| report.ring_dims[k] == at(k) && report.pair_dims[k] == at(d + 1 - k)),
            );
            report.vertices = Some(p.vertices().len());
            report.interior_points = Some(p.relative_interior_points(1).len());
            report.inequalities = inequalities::<F>(p, &c, seed)?;
            report.idp = Some(c.idp);
            report.witness = c.idp_witness;
            report.reflexive = Some(c.reflexive);
            report.reflexive_center = c.reflexive_center;
            report.j = c.j;
            report.hstar = Some(c.hstar);
        }
        None => report.complex_kind = Some(format!("{:?}", cx.validate().kind)),
    }
    Ok(report)
}
