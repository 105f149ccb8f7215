//! Reproducible test graphs.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::graph::{CirculantSpec, Graph};
use crate::pst::Instance;
use crate::tolerance::Tolerances;

pub use crate::classify::enumerate_circulants;

/// Connected circulants of valency 2, 3 or 4 with `3 ≤ n ≤ n_max`.
pub fn circulant_corpus(n_max: usize) -> Vec<CirculantSpec> {
    enumerate_circulants(3, n_max, &[2, 3, 4])
}

/// Random spanning tree on `n` vertices plus each remaining edge with
/// probability `p`.
pub fn random_connected_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !edges.contains(&(u, v)) && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("tree edges are valid")
}

#[derive(Debug, Clone)]
pub struct RandomGraphs {
    pub graphs: Vec<Graph>,
    /// Draws discarded for being regular.
    pub rejected_regular: usize,
    /// Draws discarded because two eigenvalues were too close to group.
    pub rejected_ambiguous: usize,
}

/// `count` connected non-regular graphs on 3 to `max_vertices` vertices.
///
/// Non-regular graphs are never circulant. Draws whose spectrum cannot be
/// grouped at `tol` are replaced.
pub fn random_noncirculant_graphs(seed: u64, count: usize, max_vertices: usize, tol: &Tolerances) -> RandomGraphs {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = RandomGraphs { graphs: Vec::with_capacity(count), rejected_regular: 0, rejected_ambiguous: 0 };
    while out.graphs.len() < count {
        let n = rng.gen_range(3..=max_vertices.max(3));
        let p = rng.gen_range(0.1..0.6);
        let g = random_connected_graph(&mut rng, n, p);
        if g.regular_degree().is_some() {
            out.rejected_regular += 1;
            continue;
        }
        match Instance::<f64>::from_graph(g.clone(), tol).and_then(|i| i.spectral().map(|_| ())) {
            Err(Error::AmbiguousGrouping { .. }) => out.rejected_ambiguous += 1,
            _ => out.graphs.push(g),
        }
    }
    out
}
