//! Brute-force time evolution `Φ ↦ U^τ Φ` and fidelity traces.

use serde::Serialize;

use crate::chebyshev::ChebyshevMatrices;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::{dist_scaled, dot, norm, Matrix};
use crate::operators::WalkMatrices;
use crate::scalar::{fmt_sig17, Real};
use crate::tolerance::Tolerances;

/// A unit vector over the arc space.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcState<F> {
    amplitudes: Vec<F>,
}

impl<F: Real> ArcState<F> {
    pub fn new(amplitudes: Vec<F>) -> Result<Self> {
        let n = norm(&amplitudes).approx();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::Refused(format!("state norm is {n}, not 1")));
        }
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &[F] {
        &self.amplitudes
    }

    pub fn into_inner(self) -> Vec<F> {
        self.amplitudes
    }
}

/// `U^τ Φ` by `τ` matrix-vector products.
pub fn evolve<F: Real>(u: &Matrix<F>, phi: &[F], tau: usize) -> Result<Vec<F>> {
    if u.cols() != phi.len() {
        return Err(Error::DimensionMismatch { expected: u.cols(), got: phi.len() });
    }
    let mut v = phi.to_vec();
    for _ in 0..tau {
        v = u.mul_vec(&v)?;
    }
    Ok(v)
}

/// `|⟨U^τ Φ, Ψ⟩|` at a single time.
pub fn fidelity<F: Real>(u: &Matrix<F>, phi: &[F], psi: &[F], tau: usize) -> Result<f64> {
    let v = evolve(u, phi, tau)?;
    check_len(psi, v.len())?;
    Ok(dot(&v, psi).approx().abs())
}

fn check_len<F>(v: &[F], n: usize) -> Result<()> {
    if v.len() == n {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: n, got: v.len() })
    }
}

/// A time with `fidelity ≥ 1 - pst` and `‖U^τΦ - γΨ‖ ≤ state`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hit {
    pub tau: usize,
    /// `γ = ⟨Ψ, U^τ Φ⟩`, real for the Grover walk.
    pub gamma: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FidelityTrace {
    /// `1..=τ_max`.
    pub times: Vec<usize>,
    /// `⟨Ψ, U^τ Φ⟩` at each time.
    pub overlaps: Vec<f64>,
    pub fidelities: Vec<f64>,
    pub hits: Vec<Hit>,
}

impl FidelityTrace {
    pub fn first_hit(&self) -> Option<&Hit> {
        self.hits.first()
    }

    pub fn max_fidelity(&self) -> f64 {
        self.fidelities.iter().copied().fold(0.0, f64::max)
    }

    /// CSV with columns `tau, fidelity, phase_re, phase_im`; the phase is
    /// `overlap / |overlap|` (0 where the overlap vanishes).
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InternalInconsistency(format!("csv: {e}"));
        w.write_record(["tau", "fidelity", "phase_re", "phase_im"]).map_err(io)?;
        for ((t, o), f) in self.times.iter().zip(&self.overlaps).zip(&self.fidelities) {
            let phase = if *f > 0.0 { o / f } else { 0.0 };
            w.write_record([t.to_string(), fmt_sig17(*f), fmt_sig17(phase), fmt_sig17(0.0)]).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InternalInconsistency(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::InternalInconsistency(e.to_string()))
    }
}

pub fn fidelity_trace<F: Real>(
    u: &Matrix<F>,
    phi: &[F],
    psi: &[F],
    tau_max: usize,
    tol: &Tolerances,
) -> Result<FidelityTrace> {
    if tau_max == 0 {
        return Err(Error::Refused("tau_max must be at least 1".into()));
    }
    check_len(phi, u.cols())?;
    check_len(psi, u.cols())?;
    let mut trace = FidelityTrace { times: Vec::new(), overlaps: Vec::new(), fidelities: Vec::new(), hits: Vec::new() };
    let mut v = phi.to_vec();
    for tau in 1..=tau_max {
        v = u.mul_vec(&v)?;
        let overlap = dot(psi, &v);
        let fid = overlap.abs().approx();
        trace.times.push(tau);
        trace.overlaps.push(overlap.approx());
        trace.fidelities.push(fid);
        if fid >= 1.0 - tol.pst {
            let residual = dist_scaled(&v, overlap, psi).approx();
            if residual <= tol.state {
                trace.hits.push(Hit { tau, gamma: overlap.approx(), residual });
            }
        }
    }
    Ok(trace)
}

/// Largest `|⟨d*e_y, U^τ d*e_x⟩|` over `y ≠ x` and `1 ≤ τ ≤ τ_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeakFidelity {
    pub fidelity: f64,
    pub target: usize,
    pub tau: usize,
}

pub fn peak_vertex_fidelity<F: Real>(w: &WalkMatrices<F>, x: usize, tau_max: usize) -> Result<PeakFidelity> {
    if tau_max == 0 {
        return Err(Error::Refused("tau_max must be at least 1".into()));
    }
    let states: Vec<(usize, Vec<F>)> =
        (0..w.vertex_count()).filter(|&y| y != x).map(|y| Ok((y, w.vertex_state(y)?))).collect::<Result<_>>()?;
    let mut v = w.vertex_state(x)?;
    let mut best = PeakFidelity { fidelity: 0.0, target: x, tau: 0 };
    for tau in 1..=tau_max {
        v = w.u.mul_vec(&v)?;
        for (y, psi) in &states {
            let f = dot(psi, &v).abs().approx();
            if f > best.fidelity {
                best = PeakFidelity { fidelity: f, target: *y, tau };
            }
        }
    }
    Ok(best)
}

/// `max_{τ ≤ τ_max} ‖d U^τ d* - T_τ(P)‖_∞`.
pub fn chebyshev_identity_check<F: Real>(g: &Graph, tau_max: usize) -> Result<f64> {
    let w = WalkMatrices::<F>::new(g)?;
    walk_chebyshev_deviation(&w, tau_max)
}

pub fn walk_chebyshev_deviation<F: Real>(w: &WalkMatrices<F>, tau_max: usize) -> Result<f64> {
    let mut m = w.d.transpose();
    let mut worst = 0.0f64;
    for (tau, t) in ChebyshevMatrices::new(w.p.clone()).take(tau_max + 1).enumerate() {
        if tau > 0 {
            m = w.u.matmul(&m)?;
        }
        let lhs = w.d.matmul(&m)?;
        worst = worst.max(lhs.max_abs_diff(&t).approx());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::CirculantSpec;

    fn walk(n: usize, s: &[i64]) -> (Graph, WalkMatrices<f64>) {
        let g = CirculantSpec::symmetric(n, s).unwrap().build();
        let w = WalkMatrices::new(&g).unwrap();
        (g, w)
    }

    #[test]
    fn zero_steps_is_identity() {
        let (_, w) = walk(5, &[1]);
        let phi = w.vertex_state(2).unwrap();
        assert_eq!(evolve(&w.u, &phi, 0).unwrap(), phi);
        assert!((fidelity(&w.u, &phi, &phi, 0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn c6_transfers_at_three() {
        let (_, w) = walk(6, &[1]);
        let (phi, psi) = (w.vertex_state(0).unwrap(), w.vertex_state(3).unwrap());
        let out = evolve(&w.u, &phi, 3).unwrap();
        let gamma = dot(&psi, &out);
        assert!((gamma.abs() - 1.0).abs() < 1e-12);
        let tr = fidelity_trace(&w.u, &phi, &psi, 20, &Tolerances::default()).unwrap();
        let hits: Vec<usize> = tr.hits.iter().map(|h| h.tau).collect();
        assert_eq!(hits, vec![3, 9, 15]);
        assert!(tr.hits.iter().all(|h| (h.gamma - 1.0).abs() < 1e-9));
    }

    #[test]
    fn documented_traces() {
        let (_, w) = walk(6, &[1, 2]);
        let out = evolve(&w.u, &w.vertex_state(0).unwrap(), 6).unwrap();
        assert!(dist_scaled(&out, 1.0, &w.vertex_state(3).unwrap()) < 1e-10);

        let (_, w) = walk(12, &[1, 5]);
        let tr =
            fidelity_trace(&w.u, &w.vertex_state(0).unwrap(), &w.vertex_state(6).unwrap(), 48, &Tolerances::default())
                .unwrap();
        assert_eq!(tr.first_hit().unwrap().tau, 6);

        let (_, w) = walk(4, &[1, 2]);
        let tr =
            fidelity_trace(&w.u, &w.vertex_state(0).unwrap(), &w.vertex_state(1).unwrap(), 64, &Tolerances::default())
                .unwrap();
        assert!(tr.hits.is_empty());
        assert!(tr.max_fidelity() < 1.0 - 1e-6);
    }

    #[test]
    fn peak_fidelity() {
        let (_, w) = walk(6, &[1]);
        let p = peak_vertex_fidelity(&w, 0, 10).unwrap();
        assert_eq!((p.target, p.tau), (3, 3));
        assert!((p.fidelity - 1.0).abs() < 1e-12);
        let (_, w) = walk(4, &[1, 2]);
        assert!(peak_vertex_fidelity(&w, 0, 64).unwrap().fidelity < 1.0 - 1e-6);
        assert!(peak_vertex_fidelity(&w, 0, 0).is_err());
    }

    #[test]
    fn norm_is_preserved() {
        let (_, w) = walk(10, &[1, 3]);
        let mut v = w.vertex_state(0).unwrap();
        for _ in 0..4 * w.arc_count() {
            v = w.u.mul_vec(&v).unwrap();
            assert!((norm(&v) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn chebyshev_identity_on_small_graphs() {
        for (n, s) in [(4, vec![1]), (6, vec![1, 3]), (9, vec![1, 2]), (10, vec![2, 3])] {
            let (g, _) = walk(n, &s);
            assert!(chebyshev_identity_check::<f64>(&g, 20).unwrap() <= 1e-9);
        }
        let g = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 2)]).unwrap();
        assert!(chebyshev_identity_check::<f64>(&g, 20).unwrap() <= 1e-9);
        let (g, _) = walk(6, &[1]);
        assert!(chebyshev_identity_check::<f64>(&g, 0).unwrap() < 1e-15);
    }

    #[test]
    fn csv_and_state_validation() {
        let (_, w) = walk(4, &[1]);
        let tr =
            fidelity_trace(&w.u, &w.vertex_state(0).unwrap(), &w.vertex_state(2).unwrap(), 2, &Tolerances::default())
                .unwrap();
        let csv = tr.to_csv().unwrap();
        assert_eq!(csv.lines().next().unwrap(), "tau,fidelity,phase_re,phase_im");
        assert_eq!(csv.lines().count(), 3);
        assert!(ArcState::new(vec![1.0, 1.0]).is_err());
        assert!(ArcState::new(vec![0.6, 0.8]).is_ok());
        assert!(fidelity_trace(
            &w.u,
            &w.vertex_state(0).unwrap(),
            &w.vertex_state(2).unwrap(),
            0,
            &Tolerances::default()
        )
        .is_err());
    }
}
