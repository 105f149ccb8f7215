//! Closed-form PST classification of connected circulants of valency 2, 3
//! and 4, and a sweep comparing it with exhaustive search.
//!
//! The verdicts here come from the characterization alone:
//!
//! | valency | condition                     | PST                        |
//! |---------|-------------------------------|----------------------------|
//! | 2       | `n` even                      | to `x + n/2` at `n/2`      |
//! | 2       | `n` odd                       | none                       |
//! | 3       | any                           | none                       |
//! | 4       | `n = 2l`, `a + b = l`, `l` odd | to `x + l` at `2l`         |
//! | 4       | `n = 2l`, `a + b = l`, `l ≡ 2 (mod 4)` | to `x + l` at `l` |
//! | 4       | otherwise                     | none                       |
//!
//! with `a, b` the representatives of `S` in `[1, l-1]`.

use rayon::prelude::*;
use serde::Serialize;

use crate::cyclotomic::{delta_integrality, validate_four_regular, DeltaReport};
use crate::error::{Error, Result};
use crate::graph::CirculantSpec;
use crate::pst::{search_min_pst_exhaustive, Evidence, Instance, PSTVerdict};
use crate::scalar::rational_to_string;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CaseLabel {
    #[serde(rename = "cycle-even")]
    CycleEven,
    #[serde(rename = "cycle-odd")]
    CycleOdd,
    #[serde(rename = "valency3")]
    Valency3,
    #[serde(rename = "v4-sum-l-odd")]
    V4SumLOdd,
    #[serde(rename = "v4-sum-l-2mod4")]
    V4SumL2Mod4,
    #[serde(rename = "v4-sum-l-0mod4")]
    V4SumL0Mod4,
    #[serde(rename = "v4-sum-not-l")]
    V4SumNotL,
    #[serde(rename = "v4-odd-order")]
    V4OddOrder,
}

impl CaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::CycleEven => "cycle-even",
            Self::CycleOdd => "cycle-odd",
            Self::Valency3 => "valency3",
            Self::V4SumLOdd => "v4-sum-l-odd",
            Self::V4SumL2Mod4 => "v4-sum-l-2mod4",
            Self::V4SumL0Mod4 => "v4-sum-l-0mod4",
            Self::V4SumNotL => "v4-sum-not-l",
            Self::V4OddOrder => "v4-odd-order",
        }
    }

    /// The statement that decides this case.
    pub fn rule(self) -> &'static str {
        match self {
            Self::CycleEven => "cycle of even length: PST to the antipode at time n/2",
            Self::CycleOdd => "cycle of odd length: no PST",
            Self::Valency3 => "3-regular circulant: no PST",
            Self::V4SumLOdd => "4-regular, a+b = l, l odd: PST to x+l at time 2l",
            Self::V4SumL2Mod4 => "4-regular, a+b = l, l = 2 mod 4: PST to x+l at time l",
            Self::V4SumL0Mod4 => "4-regular, a+b = l, l = 0 mod 4: no PST",
            Self::V4SumNotL => "4-regular, a+b != l: no PST",
            Self::V4OddOrder => "4-regular of odd order: no PST",
        }
    }
}

/// Case label plus the parameters that select it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CirculantFamilyCase {
    pub valency: usize,
    /// `n / 2` when `n` is even.
    pub l: Option<usize>,
    pub a: Option<usize>,
    pub b: Option<usize>,
    pub label: CaseLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub spec: CirculantSpec,
    pub case: CirculantFamilyCase,
    pub occurs: bool,
    /// `y - x` for the target `y`.
    pub target_offset: Option<usize>,
    pub tau_min: Option<usize>,
    pub gamma: Option<i8>,
}

impl Classification {
    /// The prediction as a verdict for the source vertex `x`.
    pub fn verdict(&self, x: usize, tau_max: usize) -> PSTVerdict {
        let n = self.spec.n();
        PSTVerdict {
            occurs: self.occurs,
            source: x,
            target: self.target_offset.map(|o| (x + o) % n),
            other_targets: Vec::new(),
            tau_min: self.tau_min,
            gamma: self.gamma,
            tau_max,
            evidence: vec![Evidence::new(
                "classification",
                self.occurs,
                format!("{}: {}", self.case.label.as_str(), self.case.label.rule()),
            )],
        }
    }
}

/// Representative of `±s` in `[1, n/2]`.
fn half_rep(n: usize, s: usize) -> usize {
    s.min(n - s)
}

pub fn classify(spec: &CirculantSpec) -> Result<Classification> {
    let n = spec.n();
    let k = spec.valency();
    if !spec.is_connected() {
        return Err(Error::Refused(format!("{spec} is disconnected")));
    }
    if !(2..=4).contains(&k) {
        return Err(Error::Refused(format!("{spec} has valency {k}; only valency 2, 3 and 4 are classified")));
    }
    let l = (n % 2 == 0).then_some(n / 2);
    let reps = spec.half_representatives();
    let case = |label, a, b| CirculantFamilyCase { valency: k, l, a, b, label };
    let none = |case| Classification {
        spec: spec.clone(),
        case,
        occurs: false,
        target_offset: None,
        tau_min: None,
        gamma: None,
    };
    let pst = |case, tau| Classification {
        spec: spec.clone(),
        case,
        occurs: true,
        target_offset: l,
        tau_min: Some(tau),
        gamma: Some(1),
    };
    Ok(match (k, l) {
        (2, Some(l)) => pst(case(CaseLabel::CycleEven, Some(reps[0]), None), l),
        (2, None) => none(case(CaseLabel::CycleOdd, Some(reps[0]), None)),
        (3, _) => {
            let a = reps.iter().copied().find(|&r| 2 * r != n);
            none(case(CaseLabel::Valency3, a, None))
        }
        (_, None) => none(case(CaseLabel::V4OddOrder, Some(reps[0]), Some(reps[1]))),
        (_, Some(l)) => {
            let (a, b) = (half_rep(n, reps[0]), half_rep(n, reps[1]));
            let (a, b) = (a.min(b), a.max(b));
            validate_four_regular(l as u64, a as i64, b as i64)?;
            let c = |label| case(label, Some(a), Some(b));
            if a + b != l {
                none(c(CaseLabel::V4SumNotL))
            } else if l % 2 == 1 {
                pst(c(CaseLabel::V4SumLOdd), 2 * l)
            } else if l % 4 == 2 {
                pst(c(CaseLabel::V4SumL2Mod4), l)
            } else {
                none(c(CaseLabel::V4SumL0Mod4))
            }
        }
    })
}

/// Connected circulants with `n_min ≤ n ≤ n_max` and valency in
/// `valencies`, one per connection set, ordered by `(n, S)`.
pub fn enumerate_circulants(n_min: usize, n_max: usize, valencies: &[usize]) -> Vec<CirculantSpec> {
    let mut out = Vec::new();
    for n in n_min.max(2)..=n_max {
        let half: Vec<usize> = (1..=n / 2).collect();
        for mask in 1u64..(1u64 << half.len()) {
            let chosen: Vec<usize> =
                half.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &s)| s).collect();
            let valency: usize = chosen.iter().map(|&s| if 2 * s == n { 1 } else { 2 }).sum();
            if !valencies.contains(&valency) {
                continue;
            }
            let gens: Vec<i64> = chosen.iter().map(|&s| s as i64).collect();
            let spec = CirculantSpec::symmetric(n, &gens).expect("valid residues");
            if spec.is_connected() {
                out.push(spec);
            }
        }
    }
    out.sort();
    out
}

/// One row of a classification sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub spec: CirculantSpec,
    pub label: Option<CaseLabel>,
    pub predicted: Option<Classification>,
    pub observed: Option<PSTVerdict>,
    pub agree: bool,
    /// Set when the search itself reported an inconsistency.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub n_max: usize,
    pub tau_factor: usize,
    pub records: Vec<SweepRecord>,
}

impl SweepReport {
    pub fn mismatches(&self) -> usize {
        self.records.iter().filter(|r| !r.agree && r.error.is_none()).count()
    }

    pub fn inconsistencies(&self) -> usize {
        self.records.iter().filter(|r| r.error.is_some()).count()
    }
}

/// Compares the prediction with exhaustive search from vertex 0 at
/// `τ_max = factor·n`.
pub fn check_spec(spec: &CirculantSpec, tau_factor: usize, tol: &Tolerances) -> SweepRecord {
    let predicted = classify(spec);
    let observed = Instance::<f64>::from_circulant(spec, tol)
        .and_then(|inst| search_min_pst_exhaustive(&inst, 0, tau_factor * spec.n()));
    let (predicted, observed, error) = match (predicted, observed) {
        (Ok(p), Ok(o)) => (Some(p), Some(o), None),
        (p, Err(e)) => (p.ok(), None, Some(e.to_string())),
        (Err(e), Ok(o)) => (None, Some(o), Some(e.to_string())),
    };
    let agree = match (&predicted, &observed) {
        (Some(p), Some(o)) => {
            let v = p.verdict(0, o.tau_max);
            v.occurs == o.occurs
                && v.target == o.target
                && v.tau_min == o.tau_min
                && v.gamma == o.gamma
                && o.other_targets.is_empty()
        }
        _ => false,
    };
    SweepRecord {
        spec: spec.clone(),
        label: predicted.as_ref().map(|p| p.case.label),
        predicted,
        observed,
        agree,
        error,
    }
}

/// Sweep over every connected circulant of valency 2 to 4 with `n ≤ n_max`.
/// Mismatches are recorded, not raised.
pub fn verify_classification(n_max: usize, tau_factor: usize, tol: &Tolerances) -> SweepReport {
    let specs = enumerate_circulants(3, n_max, &[2, 3, 4]);
    let records = specs.par_iter().map(|s| check_spec(s, tau_factor, tol)).collect();
    SweepReport { n_max, tau_factor, records }
}

/// Certificate that `Δ = 2λ_1` is not an algebraic integer, so a
/// 4-regular circulant with `a + b ≠ l` has no PST.
#[derive(Debug, Clone, Serialize)]
pub struct NonIntegralityWitness {
    pub l: u64,
    pub a: u64,
    pub b: u64,
    /// `(basis exponent, coordinate)` pairs with non-integer coordinate.
    pub non_integer: Vec<(u64, String)>,
    pub report: DeltaReport,
}

pub fn nonintegrality_witness(l: u64, a: i64, b: i64) -> Result<NonIntegralityWitness> {
    let (ca, cb) = validate_four_regular(l, a, b)?;
    if ca + cb == l {
        return Err(Error::NotApplicable(format!("a + b = l for (l, a, b) = ({l}, {a}, {b})")));
    }
    let report = delta_integrality(l, a, b)?;
    let non_integer: Vec<(u64, String)> =
        report.non_integer_coordinates().into_iter().map(|(e, q)| (e, rational_to_string(&q))).collect();
    if report.is_integral || non_integer.is_empty() {
        return Err(Error::InternalInconsistency(format!("Delta is integral for (l, a, b) = ({l}, {a}, {b})")));
    }
    Ok(NonIntegralityWitness { l, a: ca, b: cb, non_integer, report })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, s: &[i64]) -> CirculantSpec {
        CirculantSpec::symmetric(n, s).unwrap()
    }

    #[test]
    fn documented_classifications() {
        let c = classify(&spec(6, &[1])).unwrap();
        assert_eq!(
            (c.occurs, c.target_offset, c.tau_min, c.case.label),
            (true, Some(3), Some(3), CaseLabel::CycleEven)
        );
        assert!(!classify(&spec(10, &[3, 5])).unwrap().occurs);
        assert_eq!(classify(&spec(10, &[3, 5])).unwrap().case.label, CaseLabel::Valency3);
        assert_eq!(classify(&spec(8, &[1, 3])).unwrap().case.label, CaseLabel::V4SumL0Mod4);
        let c = classify(&spec(12, &[1, 5])).unwrap();
        assert_eq!((c.occurs, c.target_offset, c.tau_min), (true, Some(6), Some(6)));
        assert!(!classify(&spec(6, &[1, 3])).unwrap().occurs);
        assert_eq!(classify(&spec(7, &[1])).unwrap().case.label, CaseLabel::CycleOdd);
        assert_eq!(classify(&spec(9, &[1, 2])).unwrap().case.label, CaseLabel::V4OddOrder);
        let c = classify(&spec(14, &[2, 5])).unwrap();
        assert_eq!((c.case.label, c.tau_min), (CaseLabel::V4SumLOdd, Some(14)));
        // representatives are taken in [1, l-1]: {±12, ±5} on Z_14 is {±2, ±5}
        assert_eq!(classify(&spec(14, &[12, 5])).unwrap().case.a, Some(2));
    }

    #[test]
    fn refusals() {
        assert!(classify(&spec(8, &[2])).is_err());
        assert!(classify(&spec(8, &[1, 2, 3])).is_err());
        assert!(classify(&spec(2, &[1])).is_err());
        assert!(classify(&spec(10, &[2, 4])).is_err());
    }

    #[test]
    fn enumeration() {
        let specs = enumerate_circulants(3, 8, &[2, 3, 4]);
        assert!(specs.iter().all(|s| s.is_connected() && (2..=4).contains(&s.valency())));
        let mut dedup = specs.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), specs.len());
        // {±2} is disconnected, {3} has valency 1, {±1, ±2, 3} valency 5
        let z6: Vec<String> = specs.iter().filter(|s| s.n() == 6).map(|s| s.to_string()).collect();
        assert_eq!(z6, ["X(Z_6, {±1, ±2})", "X(Z_6, {±1, 3})", "X(Z_6, {±1})", "X(Z_6, {±2, 3})"]);
    }

    #[test]
    fn sweep_to_ten_agrees() {
        let rep = verify_classification(10, 4, &Tolerances::default());
        assert!(!rep.records.is_empty());
        assert_eq!(rep.inconsistencies(), 0, "{:?}", rep.records.iter().find(|r| r.error.is_some()));
        assert_eq!(rep.mismatches(), 0);
    }

    #[test]
    fn witnesses() {
        let w = nonintegrality_witness(5, 1, 2).unwrap();
        assert!(!w.non_integer.is_empty());
        let w = nonintegrality_witness(6, 1, 3).unwrap();
        assert_eq!(w.report.conductor, 12);
        assert!(matches!(nonintegrality_witness(7, 2, 5), Err(Error::NotApplicable(_))));
        assert!(nonintegrality_witness(6, 3, 1).is_ok());
        assert!(nonintegrality_witness(6, 0, 1).is_err());
    }
}
