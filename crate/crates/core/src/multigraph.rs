//! Undirected multigraph with identified parallel edges, plus the graph
//! primitives the rest of the crate relies on: Eulerian circuits, global
//! minimum cut and unit-capacity maximum flow.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: usize,
    pub u: usize,
    pub v: usize,
    #[serde(with = "rational::serde_str")]
    pub cost: Rational,
}

impl Edge {
    /// The endpoint opposite to `w`. `w` must be an endpoint.
    pub fn other(&self, w: usize) -> usize {
        if self.u == w {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, w: usize) -> bool {
        self.u == w || self.v == w
    }
}

/// Undirected multigraph on vertices `0..vertex_count`. Edge ids are the
/// positions in the edge list, and parallel edges keep distinct ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    incidence: Vec<Vec<usize>>,
}

impl Multigraph {
    pub fn new<I>(vertex_count: usize, edge_list: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut edges = Vec::new();
        let mut incidence = vec![Vec::new(); vertex_count];
        for (id, (u, v, cost)) in edge_list.into_iter().enumerate() {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::EndpointOutOfRange {
                        edge: id,
                        vertex: w,
                        n: vertex_count,
                    });
                }
            }
            if u == v {
                return Err(Error::SelfLoop {
                    edge: id,
                    vertex: u,
                });
            }
            incidence[u].push(id);
            incidence[v].push(id);
            edges.push(Edge { id, u, v, cost });
        }
        Ok(Self {
            vertex_count,
            edges,
            incidence,
        })
    }

    /// Unit-cost multigraph from endpoint pairs.
    pub fn from_pairs(vertex_count: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(
            vertex_count,
            pairs.iter().map(|&(u, v)| (u, v, rational::one())),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    /// Ids of edges incident to `v`, ascending.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    /// Ids of edges with exactly one endpoint in `set`, ascending.
    pub fn boundary(&self, set: &FixedBitSet) -> Vec<usize> {
        self.edges
            .iter()
            .filter(|e| set.contains(e.u) != set.contains(e.v))
            .map(|e| e.id)
            .collect()
    }

    pub fn cut_size(&self, set: &FixedBitSet) -> usize {
        self.edges
            .iter()
            .filter(|e| set.contains(e.u) != set.contains(e.v))
            .count()
    }

    pub fn is_regular(&self, degree: usize) -> bool {
        (0..self.vertex_count).all(|v| self.degree(v) == degree)
    }

    pub fn is_connected(&self) -> bool {
        components(self, |_| true).1 <= 1
    }

    pub fn total_cost(&self) -> Rational {
        self.edges.iter().map(|e| e.cost.clone()).sum()
    }
}

/// Equivalent to [`Multigraph::new`].
pub fn build_multigraph<I>(vertex_count: usize, edge_list: I) -> Result<Multigraph>
where
    I: IntoIterator<Item = (usize, usize, Rational)>,
{
    Multigraph::new(vertex_count, edge_list)
}

/// Multiplicity in `{0, 1, 2}` for every edge id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiplicityMap(Vec<u8>);

impl MultiplicityMap {
    pub fn zeros(edge_count: usize) -> Self {
        Self(vec![0; edge_count])
    }

    pub fn filled(edge_count: usize, value: u8) -> Self {
        Self(vec![value; edge_count])
    }

    pub fn from_vec(values: Vec<u8>) -> Self {
        Self(values)
    }

    pub fn get(&self, edge: usize) -> u8 {
        self.0[edge]
    }

    pub fn set(&mut self, edge: usize, value: u8) {
        debug_assert!(value <= 2);
        self.0[edge] = value;
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self, g: &Multigraph, v: usize) -> usize {
        g.incident(v).iter().map(|&e| self.0[e] as usize).sum()
    }

    pub fn cost(&self, g: &Multigraph) -> Rational {
        g.edges()
            .iter()
            .filter(|e| self.0[e.id] > 0)
            .map(|e| &e.cost * Rational::from_integer(self.0[e.id].into()))
            .sum()
    }

    pub fn all_degrees_even(&self, g: &Multigraph) -> bool {
        (0..g.vertex_count()).all(|v| self.degree(g, v).is_multiple_of(2))
    }
}

/// Labels connected components using only edges accepted by `keep`.
/// Returns per-vertex component labels and the number of components.
fn components<F: Fn(usize) -> bool>(g: &Multigraph, keep: F) -> (Vec<usize>, usize) {
    let n = g.vertex_count();
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = count;
        stack.push(start);
        while let Some(v) = stack.pop() {
            for &e in g.incident(v) {
                if !keep(e) {
                    continue;
                }
                let w = g.edge(e).other(v);
                if label[w] == usize::MAX {
                    label[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    (label, count)
}

/// True iff every vertex is reachable from vertex 0 through edges of
/// positive multiplicity and every vertex has degree at least 2 under `m`.
pub fn is_connected_spanning(g: &Multigraph, m: &MultiplicityMap) -> bool {
    let n = g.vertex_count();
    if n == 0 || m.len() != g.edge_count() {
        return false;
    }
    if (0..n).any(|v| m.degree(g, v) < 2) {
        return false;
    }
    components(g, |e| m.get(e) > 0).1 == 1
}

/// A closed walk given both as the vertex sequence (first == last) and the
/// sequence of traversed edge ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedWalk {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl ClosedWalk {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// How often each edge id is traversed.
    pub fn edge_counts(&self, edge_count: usize) -> Vec<usize> {
        let mut counts = vec![0; edge_count];
        for &e in &self.edges {
            counts[e] += 1;
        }
        counts
    }
}

/// Hierholzer's algorithm on the sub-multigraph where edge `e` appears
/// `m(e)` times. Always extends along the lowest-numbered edge id with
/// copies left, starting from vertex 0.
pub fn euler_circuit(g: &Multigraph, m: &MultiplicityMap) -> Result<ClosedWalk> {
    let n = g.vertex_count();
    for v in 0..n {
        let d = m.degree(g, v);
        if d % 2 == 1 {
            return Err(Error::OddDegree {
                vertex: v,
                degree: d,
            });
        }
    }
    if n == 0 || (0..n).any(|v| m.degree(g, v) == 0) || components(g, |e| m.get(e) > 0).1 != 1 {
        return Err(Error::Disconnected);
    }

    let mut remaining: Vec<u8> = m.as_slice().to_vec();
    let mut cursor = vec![0usize; n];
    // (vertex, edge used to arrive)
    let mut stack: Vec<(usize, Option<usize>)> = vec![(0, None)];
    let mut vertices = Vec::new();
    let mut edges = Vec::new();

    while let Some(&(v, _)) = stack.last() {
        let inc = g.incident(v);
        while cursor[v] < inc.len() && remaining[inc[cursor[v]]] == 0 {
            cursor[v] += 1;
        }
        if cursor[v] < inc.len() {
            let e = inc[cursor[v]];
            remaining[e] -= 1;
            stack.push((g.edge(e).other(v), Some(e)));
        } else {
            let (v, via) = stack.pop().expect("stack is non-empty");
            vertices.push(v);
            if let Some(e) = via {
                edges.push(e);
            }
        }
    }
    vertices.reverse();
    edges.reverse();
    Ok(ClosedWalk { vertices, edges })
}

/// Value of a global minimum cut (Stoer–Wagner), counting parallel edges.
pub fn global_min_cut_value(g: &Multigraph) -> Result<usize> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::DegenerateInstance { n });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut w = vec![vec![0usize; n]; n];
    for e in g.edges() {
        w[e.u][e.v] += 1;
        w[e.v][e.u] += 1;
    }
    let mut active: Vec<usize> = (0..n).collect();
    let mut best = usize::MAX;
    while active.len() > 1 {
        let mut in_a = vec![false; n];
        let mut key = vec![0usize; n];
        let mut prev = active[0];
        let mut last = active[0];
        for step in 0..active.len() {
            let next = *active
                .iter()
                .filter(|&&v| !in_a[v])
                .max_by_key(|&&v| (key[v], std::cmp::Reverse(v)))
                .expect("an unvisited vertex remains");
            in_a[next] = true;
            if step == active.len() - 1 {
                best = best.min(key[next]);
                prev = last;
                last = next;
            } else {
                last = next;
                for &v in &active {
                    if !in_a[v] {
                        key[v] += w[next][v];
                    }
                }
            }
        }
        // merge `last` into `prev`
        for &v in &active {
            w[prev][v] += w[last][v];
            w[v][prev] = w[prev][v];
        }
        w[prev][prev] = 0;
        active.retain(|&v| v != last);
    }
    Ok(best)
}

/// Unit-capacity maximum flow between `s` and `t`, stopping once `limit`
/// units have been routed. `flow[e]` is +1 when edge `e` carries flow from
/// `u` to `v`, -1 for the opposite direction.
#[derive(Debug, Clone)]
pub struct UnitFlow {
    pub value: usize,
    pub flow: Vec<i8>,
}

impl UnitFlow {
    /// Residual capacity of edge `e` when traversed out of vertex `from`.
    pub fn residual(&self, g: &Multigraph, e: usize, from: usize) -> i8 {
        let edge = g.edge(e);
        if from == edge.u {
            1 - self.flow[e]
        } else {
            1 + self.flow[e]
        }
    }
}

pub fn max_flow_capped(g: &Multigraph, s: usize, t: usize, limit: usize) -> UnitFlow {
    let n = g.vertex_count();
    let mut result = UnitFlow {
        value: 0,
        flow: vec![0; g.edge_count()],
    };
    if s == t {
        return result;
    }
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    while result.value < limit {
        seen.iter_mut().for_each(|x| *x = false);
        pred.iter_mut().for_each(|x| *x = None);
        queue.clear();
        seen[s] = true;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            if v == t {
                break;
            }
            for &e in g.incident(v) {
                let w = g.edge(e).other(v);
                if !seen[w] && result.residual(g, e, v) > 0 {
                    seen[w] = true;
                    pred[w] = Some(e);
                    queue.push_back(w);
                }
            }
        }
        if !seen[t] {
            break;
        }
        let mut v = t;
        while v != s {
            let e = pred[v].expect("path edge");
            let edge = g.edge(e);
            let from = edge.other(v);
            if from == edge.u {
                result.flow[e] += 1;
            } else {
                result.flow[e] -= 1;
            }
            v = from;
        }
        result.value += 1;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doubled_cycle(n: usize) -> Multigraph {
        let mut pairs = Vec::new();
        for i in 0..n {
            pairs.push((i, (i + 1) % n));
            pairs.push((i, (i + 1) % n));
        }
        Multigraph::from_pairs(n, &pairs).unwrap()
    }

    fn complete(n: usize) -> Multigraph {
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                pairs.push((u, v));
            }
        }
        Multigraph::from_pairs(n, &pairs).unwrap()
    }

    fn brute_min_cut(g: &Multigraph) -> usize {
        let n = g.vertex_count();
        let mut best = usize::MAX;
        for mask in 1u32..(1 << (n - 1)) {
            let mut set = FixedBitSet::with_capacity(n);
            for v in 0..n - 1 {
                if mask >> v & 1 == 1 {
                    set.insert(v);
                }
            }
            best = best.min(g.cut_size(&set));
        }
        best
    }

    #[test]
    fn doubled_triangle_is_four_regular() {
        let g = doubled_cycle(3);
        assert_eq!(g.edge_count(), 6);
        assert!(g.is_regular(4));
        let ids: Vec<usize> = g.edges().iter().map(|e| e.id).collect();
        assert_eq!(ids, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn rejects_self_loop_and_bad_endpoint() {
        assert!(matches!(
            Multigraph::from_pairs(2, &[(0, 0)]),
            Err(Error::SelfLoop { .. })
        ));
        assert!(matches!(
            Multigraph::from_pairs(2, &[(0, 2)]),
            Err(Error::EndpointOutOfRange { vertex: 2, .. })
        ));
    }

    #[test]
    fn euler_circuit_on_doubled_triangle() {
        let g = doubled_cycle(3);
        let m = MultiplicityMap::filled(6, 1);
        let walk = euler_circuit(&g, &m).unwrap();
        assert_eq!(walk.len(), 6);
        assert_eq!(walk.vertices.first(), walk.vertices.last());
        assert_eq!(walk.edge_counts(6), vec![1; 6]);
        assert_eq!(walk, euler_circuit(&g, &m).unwrap());
    }

    #[test]
    fn euler_circuit_respects_doubling() {
        let g = doubled_cycle(4);
        let m = MultiplicityMap::from_vec(vec![2, 0, 1, 1, 1, 1, 0, 2]);
        let walk = euler_circuit(&g, &m).unwrap();
        assert_eq!(walk.edge_counts(8), vec![2, 0, 1, 1, 1, 1, 0, 2]);
        for (i, &e) in walk.edges.iter().enumerate() {
            let edge = g.edge(e);
            let (a, b) = (walk.vertices[i], walk.vertices[i + 1]);
            assert!(edge.touches(a) && edge.other(a) == b);
        }
    }

    #[test]
    fn euler_circuit_errors() {
        let path = Multigraph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            euler_circuit(&path, &MultiplicityMap::filled(2, 1)),
            Err(Error::OddDegree { vertex: 0, .. })
        ));
        let mut pairs = Vec::new();
        for base in [0, 3] {
            for i in 0..3 {
                pairs.push((base + i, base + (i + 1) % 3));
                pairs.push((base + i, base + (i + 1) % 3));
            }
        }
        let two = Multigraph::from_pairs(6, &pairs).unwrap();
        assert_eq!(
            euler_circuit(&two, &MultiplicityMap::filled(12, 1)),
            Err(Error::Disconnected)
        );
    }

    #[test]
    fn min_cut_values() {
        assert_eq!(global_min_cut_value(&doubled_cycle(4)).unwrap(), 4);
        let k5 = complete(5);
        assert_eq!(brute_min_cut(&k5), 4);
        assert_eq!(global_min_cut_value(&k5).unwrap(), 4);
        let two = Multigraph::from_pairs(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(global_min_cut_value(&two), Err(Error::Disconnected));
    }

    #[test]
    fn connected_spanning() {
        let g = doubled_cycle(3);
        assert!(is_connected_spanning(&g, &MultiplicityMap::filled(6, 1)));
        assert!(!is_connected_spanning(&g, &MultiplicityMap::zeros(6)));
        let c4 = doubled_cycle(4);
        // pair (0,1) -> one copy doubled, partner unused
        let m = MultiplicityMap::from_vec(vec![2, 0, 1, 1, 1, 1, 1, 1]);
        assert!(is_connected_spanning(&c4, &m));
    }

    #[test]
    fn unit_flow_matches_cut() {
        let g = complete(5);
        let f = max_flow_capped(&g, 0, 3, 10);
        assert_eq!(f.value, 4);
        let f = max_flow_capped(&g, 0, 3, 2);
        assert_eq!(f.value, 2);
    }

    proptest::proptest! {
        #[test]
        fn stoer_wagner_matches_brute_force(
            n in 3usize..9,
            raw in proptest::collection::vec((0usize..9, 0usize..9), 4..30),
        ) {
            let mut pairs: Vec<(usize, usize)> = raw
                .into_iter()
                .map(|(a, b)| (a % n, b % n))
                .filter(|(a, b)| a != b)
                .collect();
            // a Hamiltonian cycle keeps it connected
            for i in 0..n {
                pairs.push((i, (i + 1) % n));
            }
            let g = Multigraph::from_pairs(n, &pairs).unwrap();
            proptest::prop_assert_eq!(global_min_cut_value(&g).unwrap(), brute_min_cut(&g));
        }

        #[test]
        fn euler_walk_uses_each_copy(seed in 0u64..500) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(3..8);
            let g = doubled_cycle(n);
            // each parallel pair: (1,1), (2,0) or (0,2)
            let mut mult = Vec::new();
            for _ in 0..n {
                match rng.gen_range(0..3) {
                    0 => mult.extend([1, 1]),
                    1 => mult.extend([2, 0]),
                    _ => mult.extend([0, 2]),
                }
            }
            let m = MultiplicityMap::from_vec(mult.clone());
            let walk = euler_circuit(&g, &m).unwrap();
            proptest::prop_assert_eq!(walk.vertices.first(), walk.vertices.last());
            let counts: Vec<u8> = walk.edge_counts(g.edge_count()).into_iter().map(|c| c as u8).collect();
            proptest::prop_assert_eq!(counts, mult);
        }
    }
}
