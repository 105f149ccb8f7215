//! Simple graphs, their symmetric arcs, and circulant graphs `X(Z_n, S)`.

use std::collections::{BTreeSet, VecDeque};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite simple graph on vertices `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    degree: Vec<usize>,
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// Edges are unordered pairs; loops and repeated edges are rejected.
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidGraph("a graph needs at least one vertex".into()));
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), count: vertex_count });
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!("repeated edge {{{u},{v}}}")));
            }
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut neighbors = vec![Vec::new(); vertex_count];
        for &(u, v) in &edges {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for n in &mut neighbors {
            n.sort_unstable();
        }
        let degree = neighbors.iter().map(Vec::len).collect();
        Ok(Self { vertex_count, edges, degree, neighbors })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, x: usize) -> usize {
        self.degree[x]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degree
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.neighbors[x]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count && self.neighbors[u].binary_search(&v).is_ok()
    }

    /// `Some(k)` when every vertex has degree `k`.
    pub fn regular_degree(&self) -> Option<usize> {
        let k = self.degree[0];
        self.degree.iter().all(|&d| d == k).then_some(k)
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &y in &self.neighbors[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count == self.vertex_count
    }

    pub fn check_vertex(&self, x: usize) -> Result<()> {
        if x < self.vertex_count {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: x, count: self.vertex_count })
        }
    }

    pub fn arc_space(&self) -> ArcSpace {
        ArcSpace::new(self)
    }
}

/// The symmetric arcs of a graph, ordered lexicographically by
/// `(origin, terminus)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcSpace {
    arcs: Vec<(usize, usize)>,
    inverse: Vec<usize>,
}

impl ArcSpace {
    fn new(g: &Graph) -> Self {
        let mut arcs: Vec<(usize, usize)> = g.edges().iter().flat_map(|&(u, v)| [(u, v), (v, u)]).collect();
        arcs.sort_unstable();
        let inverse = arcs.iter().map(|&(o, t)| arcs.binary_search(&(t, o)).expect("arc set is symmetric")).collect();
        Self { arcs, inverse }
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn origin(&self, a: usize) -> usize {
        self.arcs[a].0
    }

    pub fn terminus(&self, a: usize) -> usize {
        self.arcs[a].1
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn index_of(&self, origin: usize, terminus: usize) -> Option<usize> {
        self.arcs.binary_search(&(origin, terminus)).ok()
    }
}

/// Ring size `n` and connection set `S` of `X(Z_n, S)`.
///
/// `S` is kept as sorted canonical residues in `[1, n-1]`, closed under
/// negation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct CirculantSpec {
    n: usize,
    s: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    n: i64,
    s: Vec<i64>,
}

impl TryFrom<RawSpec> for CirculantSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        let n = usize::try_from(raw.n).map_err(|_| Error::InvalidSpec("n must be positive".into()))?;
        CirculantSpec::new(n, &raw.s)
    }
}

impl From<CirculantSpec> for RawSpec {
    fn from(spec: CirculantSpec) -> Self {
        RawSpec { n: spec.n as i64, s: spec.s.iter().map(|&s| s as i64).collect() }
    }
}

impl CirculantSpec {
    /// Strict constructor: `S` must already satisfy `S = -S` and `0 ∉ S`.
    pub fn new(n: usize, s: &[i64]) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpec(format!("n = {n} must be at least 2")));
        }
        let ni = n as i64;
        let set: BTreeSet<usize> = s.iter().map(|&x| x.rem_euclid(ni) as usize).collect();
        if set.contains(&0) {
            return Err(Error::InvalidSpec("0 is not allowed in S".into()));
        }
        if let Some(&bad) = set.iter().find(|&&x| !set.contains(&(n - x))) {
            return Err(Error::InvalidSpec(format!("S is not closed under negation: {bad} has no {}", n - bad)));
        }
        Ok(Self { n, s: set.into_iter().collect() })
    }

    /// Builds `S` as the closure of `generators` under negation.
    pub fn symmetric(n: usize, generators: &[i64]) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpec(format!("n = {n} must be at least 2")));
        }
        let ni = n as i64;
        let closed: Vec<i64> = generators.iter().flat_map(|&g| [g.rem_euclid(ni), (-g).rem_euclid(ni)]).collect();
        Self::new(n, &closed)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn connection_set(&self) -> &[usize] {
        &self.s
    }

    pub fn valency(&self) -> usize {
        self.s.len()
    }

    /// Representatives of `S` in `[1, n/2]`, one per `±` pair.
    pub fn half_representatives(&self) -> Vec<usize> {
        self.s.iter().copied().filter(|&s| 2 * s <= self.n).collect()
    }

    /// Connected iff `gcd(S ∪ {n}) = 1`.
    pub fn is_connected(&self) -> bool {
        self.s.iter().fold(self.n, |g, &s| g.gcd(&s)) == 1
    }

    pub fn contains(&self, residue: usize) -> bool {
        self.s.binary_search(&(residue % self.n)).is_ok()
    }

    pub fn build(&self) -> Graph {
        build_circulant(self)
    }
}

impl std::fmt::Display for CirculantSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let reps: Vec<String> = self
            .half_representatives()
            .iter()
            .map(|&s| if 2 * s == self.n { s.to_string() } else { format!("±{s}") })
            .collect();
        write!(f, "X(Z_{}, {{{}}})", self.n, reps.join(", "))
    }
}

/// `x ~ y` iff `y - x ∈ S (mod n)`.
pub fn build_circulant(spec: &CirculantSpec) -> Graph {
    let n = spec.n;
    let edges = (0..n).flat_map(|x| {
        spec.s.iter().filter_map(move |&s| {
            let y = (x + s) % n;
            (x < y).then_some((x, y))
        })
    });
    Graph::new(n, edges).expect("valid spec yields a simple graph")
}
