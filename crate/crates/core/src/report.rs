//! Verification suites and their JSON-lines / CSV reports.
//!
//! Every record is one JSON object per line:
//! `{"suite": …, "kind": …, "pass": …, "data": {…}}`. Floats are written
//! with 17 significant digits and rationals as `"p/q"` strings, so two runs
//! with the same configuration produce identical bytes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{check_spec, nonintegrality_witness, SweepRecord};
use crate::corpus::{circulant_corpus, random_noncirculant_graphs};
use crate::cyclotomic::{
    crt_compose, crt_decompose, delta_integrality, is_algebraic_integer, totient, validate_four_regular, BosmaBasis,
    CycloElem,
};
use crate::error::{Error, Result};
use crate::graph::{CirculantSpec, Graph};
use crate::pst::{criteria_agreement, search_min_pst, Instance, PSTVerdict};
use crate::scalar::{fmt_sig17, rational};
use crate::symmetry::{
    circulant_inversion, circulant_rotation, dihedral_automorphisms, max_intertwining_deviation, pst_transport_check,
};
use crate::tolerance::Tolerances;
use crate::walk::walk_chebyshev_deviation;

/// Bound for `‖d U^τ d* - T_τ(P)‖_∞`.
pub const CHEBYSHEV_TOL: f64 = 1e-9;
/// Bound for the intertwining identities under dihedral generators.
pub const INTERTWINING_TOL: f64 = 1e-12;
pub const CHEBYSHEV_TAU_MAX: usize = 20;
pub const EQUIVALENCE_TAU_MAX: usize = 40;

/// Conductors sampled by the random integrality check.
pub const SAMPLE_CONDUCTORS: [u64; 14] = [3, 4, 5, 7, 8, 9, 12, 15, 16, 20, 21, 24, 28, 36];

/// Writes floats as `{:.16e}`, i.e. 17 significant digits.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sig17Formatter;

impl serde_json::ser::Formatter for Sig17Formatter {
    fn write_f64<W: ?Sized + std::io::Write>(&mut self, w: &mut W, value: f64) -> std::io::Result<()> {
        w.write_all(fmt_sig17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + std::io::Write>(&mut self, w: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

/// Compact JSON with 17-significant-digit floats; non-finite floats become
/// `null`.
pub fn to_json_line<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17Formatter);
    value.serialize(&mut ser).map_err(|e| Error::InternalInconsistency(format!("serialization: {e}")))?;
    String::from_utf8(out).map_err(|e| Error::InternalInconsistency(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Theorems,
    Lemmas,
    Cyclotomic,
    All,
}

impl Suite {
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Theorems, Suite::Lemmas, Suite::Cyclotomic],
            s => vec![s],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Theorems => "theorems",
            Suite::Lemmas => "lemmas",
            Suite::Cyclotomic => "cyclotomic",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorems" => Ok(Suite::Theorems),
            "lemmas" => Ok(Suite::Lemmas),
            "cyclotomic" => Ok(Suite::Cyclotomic),
            "all" => Ok(Suite::All),
            other => Err(Error::Refused(format!("unknown suite {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub n_max: usize,
    /// Search horizon is `tau_factor · n`.
    pub tau_factor: usize,
    pub seed: u64,
    /// Random elements for the integrality check.
    pub samples: usize,
    /// Random non-circulant graphs in the lemma suite.
    pub random_graphs: usize,
    pub random_max_vertices: usize,
    pub tol: Tolerances,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            n_max: 16,
            tau_factor: 4,
            seed: 0,
            samples: 250,
            random_graphs: 50,
            random_max_vertices: 10,
            tol: Tolerances::default(),
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        self.tol.validate()?;
        if self.n_max < 3 {
            return Err(Error::Refused(format!("n_max = {} must be at least 3", self.n_max)));
        }
        if self.tau_factor == 0 {
            return Err(Error::Refused("tau factor must be at least 1".into()));
        }
        if self.random_max_vertices < 3 {
            return Err(Error::Refused("random graphs need at least 3 vertices".into()));
        }
        Ok(())
    }
}

/// One serialized record.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportLine {
    pub suite: Suite,
    pub kind: &'static str,
    pub pass: bool,
    /// The checked code reported an internal inconsistency.
    pub inconsistent: bool,
    pub json: String,
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    suite: Suite,
    kind: &'a str,
    pass: bool,
    data: &'a T,
}

fn line<T: Serialize>(
    suite: Suite,
    kind: &'static str,
    pass: bool,
    inconsistent: bool,
    data: &T,
) -> Result<ReportLine> {
    let json = to_json_line(&Envelope { suite, kind, pass, data })?;
    Ok(ReportLine { suite, kind, pass, inconsistent, json })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub suite: Suite,
    pub records: usize,
    pub failed: usize,
    pub inconsistent: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub lines: Vec<ReportLine>,
}

impl VerifyReport {
    pub fn mismatches(&self) -> usize {
        self.lines.iter().filter(|l| !l.pass && !l.inconsistent).count()
    }

    pub fn inconsistencies(&self) -> usize {
        self.lines.iter().filter(|l| l.inconsistent).count()
    }

    /// 0 when everything passed, 3 on any inconsistency, 2 on mismatches.
    pub fn exit_code(&self) -> i32 {
        if self.inconsistencies() > 0 {
            3
        } else if self.mismatches() > 0 {
            2
        } else {
            0
        }
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(&l.json);
            out.push('\n');
        }
        out
    }

    pub fn summaries(&self) -> Vec<SuiteSummary> {
        let mut by: BTreeMap<Suite, SuiteSummary> = BTreeMap::new();
        for l in &self.lines {
            let s =
                by.entry(l.suite).or_insert(SuiteSummary { suite: l.suite, records: 0, failed: 0, inconsistent: 0 });
            s.records += 1;
            s.failed += !l.pass as usize;
            s.inconsistent += l.inconsistent as usize;
        }
        by.into_values().collect()
    }

    /// Columns `suite, records, failed, inconsistent`.
    pub fn summary_csv(&self) -> Result<String> {
        let io = |e: csv::Error| Error::InternalInconsistency(format!("csv: {e}"));
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["suite", "records", "failed", "inconsistent"]).map_err(io)?;
        for s in self.summaries() {
            w.write_record([
                s.suite.to_string(),
                s.records.to_string(),
                s.failed.to_string(),
                s.inconsistent.to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InternalInconsistency(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::InternalInconsistency(e.to_string()))
    }
}

#[derive(Serialize)]
struct ConfigRecord<'a> {
    suites: Vec<Suite>,
    n_max: usize,
    tau_factor: usize,
    seed: u64,
    samples: usize,
    random_graphs: usize,
    random_max_vertices: usize,
    tolerances: BTreeMap<&'a str, f64>,
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    let t = &cfg.tol;
    let config = ConfigRecord {
        suites: cfg.suite.expand(),
        n_max: cfg.n_max,
        tau_factor: cfg.tau_factor,
        seed: cfg.seed,
        samples: cfg.samples,
        random_graphs: cfg.random_graphs,
        random_max_vertices: cfg.random_max_vertices,
        tolerances: [("pst", t.pst), ("state", t.state), ("group", t.group), ("support", t.support), ("sign", t.sign)]
            .into_iter()
            .collect(),
    };
    let mut lines = vec![line(cfg.suite, "config", true, false, &config)?];
    for suite in cfg.suite.expand() {
        lines.extend(match suite {
            Suite::Theorems => theorem_suite(cfg)?,
            Suite::Lemmas => lemma_suite(cfg)?,
            Suite::Cyclotomic => cyclotomic_suite(cfg)?,
            Suite::All => unreachable!("expanded"),
        });
    }
    Ok(VerifyReport { lines })
}

#[derive(Serialize)]
struct Outcome {
    occurs: bool,
    target: Option<usize>,
    tau_min: Option<usize>,
    gamma: Option<i8>,
}

impl From<&PSTVerdict> for Outcome {
    fn from(v: &PSTVerdict) -> Self {
        Self { occurs: v.occurs, target: v.target, tau_min: v.tau_min, gamma: v.gamma }
    }
}

#[derive(Serialize)]
struct ClassificationData {
    graph: String,
    spec: CirculantSpec,
    label: Option<&'static str>,
    predicted: Option<Outcome>,
    observed: Option<Outcome>,
    error: Option<String>,
}

fn classification_line(r: &SweepRecord) -> Result<ReportLine> {
    let data = ClassificationData {
        graph: r.spec.to_string(),
        spec: r.spec.clone(),
        label: r.label.map(|l| l.as_str()),
        predicted: r.predicted.as_ref().map(|p| Outcome::from(&p.verdict(0, cfg_tau(r)))),
        observed: r.observed.as_ref().map(Outcome::from),
        error: r.error.clone(),
    };
    line(Suite::Theorems, "classification", r.agree, r.error.is_some(), &data)
}

fn cfg_tau(r: &SweepRecord) -> usize {
    r.observed.as_ref().map_or(0, |o| o.tau_max)
}

fn theorem_suite(cfg: &VerifyConfig) -> Result<Vec<ReportLine>> {
    let specs = circulant_corpus(cfg.n_max);
    let records: Vec<SweepRecord> = specs.par_iter().map(|s| check_spec(s, cfg.tau_factor, &cfg.tol)).collect();
    records.iter().map(classification_line).collect()
}

#[derive(Serialize)]
struct LemmaData {
    graph: String,
    vertices: usize,
    edges: Vec<(usize, usize)>,
    chebyshev_tau_max: usize,
    chebyshev_deviation: f64,
    intertwining_deviation: Option<f64>,
    pst: Option<Outcome>,
    transport_checked: usize,
    transport_failed: usize,
    equivalence_checked: usize,
    equivalence_positive: usize,
    equivalence_disagreements: usize,
    error: Option<String>,
}

fn lemma_record(label: String, graph: &Graph, spec: Option<&CirculantSpec>, cfg: &VerifyConfig) -> Result<ReportLine> {
    let mut data = LemmaData {
        graph: label,
        vertices: graph.vertex_count(),
        edges: graph.edges().to_vec(),
        chebyshev_tau_max: CHEBYSHEV_TAU_MAX,
        chebyshev_deviation: f64::NAN,
        intertwining_deviation: None,
        pst: None,
        transport_checked: 0,
        transport_failed: 0,
        equivalence_checked: 0,
        equivalence_positive: 0,
        equivalence_disagreements: 0,
        error: None,
    };
    let result = (|| -> Result<bool> {
        let inst = match spec {
            Some(s) => Instance::<f64>::from_circulant(s, &cfg.tol)?,
            None => Instance::<f64>::from_graph(graph.clone(), &cfg.tol)?,
        };
        let w = inst.walk();
        let cheb = walk_chebyshev_deviation(w, CHEBYSHEV_TAU_MAX)?;
        data.chebyshev_deviation = cheb;
        let mut pass = cheb <= CHEBYSHEV_TOL;
        let sources: Vec<usize> = if spec.is_some() { vec![0] } else { (0..graph.vertex_count()).collect() };
        for &x in &sources {
            let eq = criteria_agreement(&inst, x, EQUIVALENCE_TAU_MAX)?;
            data.equivalence_checked += eq.checked;
            data.equivalence_positive += eq.positives;
            data.equivalence_disagreements += eq.disagreements.len();
        }
        pass &= data.equivalence_disagreements == 0;
        if let Some(s) = spec {
            let gens = [circulant_rotation(s, 1), circulant_inversion(s)];
            let dev = max_intertwining_deviation(w, &gens)?;
            data.intertwining_deviation = Some(dev);
            pass &= dev <= INTERTWINING_TOL;
            let v = search_min_pst(&inst, 0, cfg.tau_factor * s.n())?;
            if let (Some(y), Some(tau), Some(g)) = (v.target, v.tau_min, v.gamma) {
                for aut in dihedral_automorphisms(s) {
                    data.transport_checked += 1;
                    data.transport_failed += !pst_transport_check(w, &aut, 0, y, tau, g)? as usize;
                }
            }
            pass &= data.transport_failed == 0;
            data.pst = Some(Outcome::from(&v));
        }
        Ok(pass)
    })();
    match result {
        Ok(pass) => line(Suite::Lemmas, "lemmas", pass, false, &data),
        Err(e) => {
            let inconsistent = matches!(e, Error::InternalInconsistency(_));
            data.error = Some(e.to_string());
            line(Suite::Lemmas, "lemmas", false, inconsistent, &data)
        }
    }
}

fn lemma_suite(cfg: &VerifyConfig) -> Result<Vec<ReportLine>> {
    let specs = circulant_corpus(cfg.n_max);
    let mut lines: Vec<ReportLine> =
        specs.par_iter().map(|s| lemma_record(s.to_string(), &s.build(), Some(s), cfg)).collect::<Result<_>>()?;
    let random = random_noncirculant_graphs(cfg.seed, cfg.random_graphs, cfg.random_max_vertices, &cfg.tol);
    let rand_lines: Vec<ReportLine> = random
        .graphs
        .par_iter()
        .enumerate()
        .map(|(i, g)| lemma_record(format!("random-{i}"), g, None, cfg))
        .collect::<Result<_>>()?;
    lines.extend(rand_lines);
    Ok(lines)
}

/// `e ∈ Z[ζ_n]`, read off the power-basis coordinates.
pub fn power_basis_integral(e: &CycloElem) -> bool {
    e.coeffs().iter().all(|c| c.is_integer())
}

/// A random element of `Q(ζ_n)` as a short sum `Σ (c/d) ζ_n^k`.
pub fn random_element(rng: &mut impl Rng) -> Result<CycloElem> {
    let n = *SAMPLE_CONDUCTORS.choose(rng).expect("nonempty");
    let terms = rng.gen_range(1..=5);
    let integral = rng.gen_bool(0.5);
    let elems = (0..terms).map(|_| {
        let mut c = rng.gen_range(-3i64..=3);
        if c == 0 {
            c = 1;
        }
        let d = if integral { 1 } else { *[1i64, 1, 2, 3, 4].choose(rng).expect("nonempty") };
        (rational(c, d), rng.gen_range(0..n as i64))
    });
    CycloElem::from_terms(n, elems.collect::<Vec<_>>())
}

#[derive(Serialize)]
struct IntegralityData {
    index: usize,
    conductor: u64,
    element: String,
    bosma: bool,
    power_basis: bool,
}

#[derive(Serialize)]
struct BasisData {
    n: u64,
    choices: BTreeMap<u64, Vec<u64>>,
    exponents: Vec<u64>,
    degree: u64,
}

#[derive(Serialize)]
struct CrtData {
    n: u64,
    x: i64,
    tuple: Vec<u64>,
    pi_theta: Vec<(u64, Option<(u64, u64)>)>,
    recomposed: u64,
}

#[derive(Serialize)]
struct DeltaData {
    l: u64,
    a: u64,
    b: u64,
    sum_is_l: bool,
    conductor: u64,
    delta: String,
    value: f64,
    integral: bool,
    non_integer: Vec<(u64, String)>,
}

fn cyclotomic_suite(cfg: &VerifyConfig) -> Result<Vec<ReportLine>> {
    let mut lines = Vec::new();
    let choices: BTreeMap<u64, Vec<u64>> = [(2, vec![0, 1]), (3, vec![0, 2])].into_iter().collect();
    let basis = BosmaBasis::new(36, &choices)?;
    let data = BasisData { n: 36, choices, exponents: basis.exponents().to_vec(), degree: totient(36) };
    lines.push(line(Suite::Cyclotomic, "bosma-basis", basis.len() as u64 == totient(36), false, &data)?);

    let dec = crt_decompose(36, 5)?;
    let recomposed = crt_compose(36, &dec.tuple())?;
    let data = CrtData {
        n: 36,
        x: 5,
        tuple: dec.tuple(),
        pi_theta: dec.components.iter().map(|c| (c.p, c.pi_theta)).collect(),
        recomposed,
    };
    lines.push(line(Suite::Cyclotomic, "crt", recomposed == 5, false, &data)?);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for index in 0..cfg.samples {
        let e = random_element(&mut rng)?;
        let basis = BosmaBasis::new(e.conductor(), &BTreeMap::new())?;
        let bosma = is_algebraic_integer(&e, &basis)?;
        let power_basis = power_basis_integral(&e);
        let data = IntegralityData { index, conductor: e.conductor(), element: e.to_string(), bosma, power_basis };
        lines.push(line(Suite::Cyclotomic, "integrality", bosma == power_basis, false, &data)?);
    }

    for l in 3..=cfg.n_max as u64 {
        for a in 1..l {
            for b in a + 1..l {
                if validate_four_regular(l, a as i64, b as i64).is_err() {
                    continue;
                }
                let r = delta_integrality(l, a as i64, b as i64)?;
                let sum_is_l = a + b == l;
                let non_integer = if sum_is_l {
                    Vec::new()
                } else {
                    match nonintegrality_witness(l, a as i64, b as i64) {
                        Ok(w) => w.non_integer,
                        Err(_) => Vec::new(),
                    }
                };
                let data = DeltaData {
                    l,
                    a,
                    b,
                    sum_is_l,
                    conductor: r.conductor,
                    delta: r.delta.clone(),
                    value: r.value,
                    integral: r.is_integral,
                    non_integer,
                };
                lines.push(line(Suite::Cyclotomic, "delta", r.is_integral == sum_is_l, false, &data)?);
            }
        }
    }
    Ok(lines)
}
