use std::collections::BTreeSet;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::tight::{crosses_bits, enumerate_tight_sets, to_bits};
use crate::error::{Error, Result};
use crate::multigraph::{self, Multigraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CutKind {
    Singleton,
    CycleCut,
    DegreeCut,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HierarchyNode {
    pub id: usize,
    /// Sorted member vertices.
    pub members: Vec<usize>,
    pub parent: Option<usize>,
    /// Children sorted by their smallest member.
    pub children: Vec<usize>,
    /// Boundary edge ids, sorted.
    pub boundary: Vec<usize>,
    /// Edges joining two different children, sorted. Empty for singletons.
    pub internal: Vec<usize>,
    pub kind: CutKind,
}

impl HierarchyNode {
    pub fn is_singleton(&self) -> bool {
        self.kind == CutKind::Singleton
    }
}

/// Laminar family of critical cuts, all on the side away from the root.
///
/// Node 0 is `V \ {r}`; nodes are ordered by decreasing size, so a parent
/// always precedes its children.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hierarchy {
    pub root_vertex: usize,
    pub vertex_count: usize,
    pub nodes: Vec<HierarchyNode>,
    /// Singleton node of each vertex (`None` for the root vertex).
    pub vertex_node: Vec<Option<usize>>,
    /// Edges at the root vertex, sorted.
    pub root_edges: Vec<usize>,
}

impl Hierarchy {
    pub fn top(&self) -> usize {
        0
    }

    pub fn node(&self, id: usize) -> &HierarchyNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Child of `node` containing vertex `v`, if `v` lies in `node`.
    pub fn child_containing(&self, node: usize, v: usize) -> Option<usize> {
        let mut cur = self.vertex_node[v]?;
        loop {
            let parent = self.nodes[cur].parent?;
            if parent == node {
                return Some(cur);
            }
            cur = parent;
        }
    }

    pub fn degree_cuts(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .filter(|n| n.kind == CutKind::DegreeCut)
            .map(|n| n.id)
            .collect()
    }

    /// Non-singleton nodes in top-down order.
    pub fn composite_nodes(&self) -> impl Iterator<Item = &HierarchyNode> {
        self.nodes.iter().filter(|n| !n.is_singleton())
    }

    /// Checks laminarity, boundary sizes and the edge partition property.
    pub fn check_invariants(&self, g: &Multigraph) -> std::result::Result<(), String> {
        let n = self.vertex_count;
        let sets: Vec<FixedBitSet> = self.nodes.iter().map(|s| to_bits(&s.members, n)).collect();
        for (i, a) in sets.iter().enumerate() {
            if a.contains(self.root_vertex) {
                return Err(format!("node {i} contains the root"));
            }
            for b in &sets[i + 1..] {
                let inter = a.intersection_count(b);
                if inter != 0 && !a.is_subset(b) && !b.is_subset(a) {
                    return Err(format!("node {i} is not laminar"));
                }
            }
            if g.cut_size(a) != 4 {
                return Err(format!("node {i} has boundary {}", g.cut_size(a)));
            }
        }
        if self.nodes[0].members.len() != n - 1 {
            return Err("top node is not V \\ {r}".into());
        }
        for v in (0..n).filter(|&v| v != self.root_vertex) {
            if self.vertex_node[v]
                .map(|id| self.nodes[id].members != [v])
                .unwrap_or(true)
            {
                return Err(format!("singleton {v} missing"));
            }
        }
        let mut owner = vec![0usize; g.edge_count()];
        for node in self.composite_nodes() {
            for &e in &node.internal {
                owner[e] += 1;
            }
        }
        for &e in &self.root_edges {
            owner[e] += 1;
        }
        if let Some(e) = owner.iter().position(|&c| c != 1) {
            return Err(format!("edge {e} is covered {} times", owner[e]));
        }
        Ok(())
    }

    /// Graphviz rendering, nodes labelled by their vertex sets and coloured
    /// by kind.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph hierarchy {\n  node [shape=box, style=filled];\n");
        for node in &self.nodes {
            let color = match node.kind {
                CutKind::Singleton => "lightgray",
                CutKind::CycleCut => "palegreen",
                CutKind::DegreeCut => "salmon",
            };
            let label: Vec<String> = node.members.iter().map(usize::to_string).collect();
            let _ = writeln!(
                out,
                "  n{} [label=\"{{{}}}\", fillcolor={}];",
                node.id,
                label.join(","),
                color
            );
        }
        for node in &self.nodes {
            for &c in &node.children {
                let _ = writeln!(out, "  n{} -> n{};", node.id, c);
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Builds the hierarchy of critical cuts for root `r`.
pub fn build_hierarchy(g: &Multigraph, r: usize) -> Result<Hierarchy> {
    let n = g.vertex_count();
    if r >= n {
        return Err(Error::EndpointOutOfRange {
            edge: 0,
            vertex: r,
            n,
        });
    }
    if n < 4 {
        return Err(Error::DegenerateInstance { n });
    }
    if let Some(v) = (0..n).find(|&v| g.degree(v) != 4) {
        return Err(Error::NotFourRegular {
            vertex: v,
            degree: g.degree(v),
        });
    }
    let cut =
        multigraph::global_min_cut_value(g).map_err(|_| Error::NotFourConnected { cut: 0 })?;
    if cut != 4 {
        return Err(Error::NotFourConnected { cut });
    }

    // every tight set, flipped to the side avoiding r
    let tight: Vec<FixedBitSet> = enumerate_tight_sets(g)?
        .into_iter()
        .map(|s| {
            let mut bits = to_bits(&s, n);
            if bits.contains(r) {
                bits.toggle_range(..);
            }
            bits
        })
        .collect();

    let mut critical: BTreeSet<Vec<usize>> = BTreeSet::new();
    for (i, a) in tight.iter().enumerate() {
        if tight
            .iter()
            .enumerate()
            .any(|(j, b)| i != j && crosses_bits(a, b, n))
        {
            continue;
        }
        critical.insert(a.ones().collect());
    }
    for v in (0..n).filter(|&v| v != r) {
        critical.insert(vec![v]);
    }

    let mut sets: Vec<Vec<usize>> = critical.into_iter().collect();
    sets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let bits: Vec<FixedBitSet> = sets.iter().map(|s| to_bits(s, n)).collect();

    let mut nodes: Vec<HierarchyNode> = sets
        .iter()
        .enumerate()
        .map(|(id, members)| HierarchyNode {
            id,
            members: members.clone(),
            parent: None,
            children: Vec::new(),
            boundary: g.boundary(&bits[id]),
            internal: Vec::new(),
            kind: CutKind::Singleton,
        })
        .collect();
    // the smallest strict superset is the last one met in size order
    for i in 1..nodes.len() {
        let parent = (0..i)
            .rev()
            .find(|&j| bits[i].is_subset(&bits[j]) && sets[j].len() > sets[i].len());
        nodes[i].parent = parent;
    }
    for i in 1..nodes.len() {
        if let Some(p) = nodes[i].parent {
            nodes[p].children.push(i);
        }
    }
    for node in &mut nodes {
        node.children.sort_by_key(|&c| sets[c][0]);
    }

    let mut vertex_node = vec![None; n];
    for node in &nodes {
        if node.members.len() == 1 {
            vertex_node[node.members[0]] = Some(node.id);
        }
    }

    let mut h = Hierarchy {
        root_vertex: r,
        vertex_count: n,
        nodes,
        vertex_node,
        root_edges: g.incident(r).to_vec(),
    };
    h.root_edges.sort_unstable();

    // E→ membership: the lowest node holding both endpoints
    for e in g.edges() {
        if e.touches(r) {
            continue;
        }
        let mut cur = h.vertex_node[e.u].expect("non-root vertex");
        while !bits[cur].contains(e.v) {
            cur = h.nodes[cur]
                .parent
                .expect("top node holds every non-root vertex");
        }
        h.nodes[cur].internal.push(e.id);
    }

    for id in 0..h.nodes.len() {
        if h.nodes[id].members.len() > 1 {
            h.nodes[id].kind = classify(g, &h, id);
        }
    }
    Ok(h)
}

/// Contracts the children of `id` and its complement and tests for a cycle
/// of length at least 3 whose adjacent nodes share exactly two edges.
fn classify(g: &Multigraph, h: &Hierarchy, id: usize) -> CutKind {
    let node = &h.nodes[id];
    let k = node.children.len();
    let mut label = vec![0usize; g.vertex_count()];
    for (i, &c) in node.children.iter().enumerate() {
        for &v in &h.nodes[c].members {
            label[v] = i + 1;
        }
    }
    let size = k + 1;
    let mut count = vec![vec![0usize; size]; size];
    for e in g.edges() {
        let (a, b) = (label[e.u], label[e.v]);
        if a != b {
            count[a][b] += 1;
            count[b][a] += 1;
        }
    }
    if size < 3 {
        return CutKind::DegreeCut;
    }
    for row in &count {
        let nbrs: Vec<usize> = row.iter().copied().filter(|&c| c > 0).collect();
        if nbrs != [2, 2] {
            return CutKind::DegreeCut;
        }
    }
    // one cycle through all contracted nodes
    let (mut prev, mut cur, mut steps) = (0usize, (0..size).find(|&j| count[0][j] > 0).unwrap(), 1);
    while cur != 0 {
        let next = (0..size).find(|&j| count[cur][j] > 0 && j != prev).unwrap();
        prev = cur;
        cur = next;
        steps += 1;
        if steps > size {
            return CutKind::DegreeCut;
        }
    }
    if steps == size {
        CutKind::CycleCut
    } else {
        CutKind::DegreeCut
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleCutReport {
    pub is_cycle_cut_instance: bool,
    /// Non-singleton nodes that are not cycle cuts.
    pub offenders: Vec<usize>,
}

pub fn verify_cycle_cut_instance(h: &Hierarchy) -> CycleCutReport {
    let offenders = h.degree_cuts();
    CycleCutReport {
        is_cycle_cut_instance: offenders.is_empty(),
        offenders,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doubled_cycle(n: usize) -> Multigraph {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| [(i, (i + 1) % n); 2]).collect();
        Multigraph::from_pairs(n, &pairs).unwrap()
    }

    #[test]
    fn doubled_four_cycle() {
        let g = doubled_cycle(4);
        let h = build_hierarchy(&g, 3).unwrap();
        let sets: Vec<&Vec<usize>> = h.nodes.iter().map(|n| &n.members).collect();
        assert_eq!(sets, vec![&vec![0, 1, 2], &vec![0], &vec![1], &vec![2]]);
        assert_eq!(h.nodes[0].kind, CutKind::CycleCut);
        assert_eq!(h.nodes[0].children, vec![1, 2, 3]);
        assert_eq!(h.nodes[0].internal.len(), 4);
        h.check_invariants(&g).unwrap();
        assert!(verify_cycle_cut_instance(&h).is_cycle_cut_instance);
    }

    #[test]
    fn k5_is_a_degree_cut() {
        let pairs: Vec<(usize, usize)> = (0..5)
            .flat_map(|u| (u + 1..5).map(move |v| (u, v)))
            .collect();
        let g = Multigraph::from_pairs(5, &pairs).unwrap();
        for r in 0..5 {
            let h = build_hierarchy(&g, r).unwrap();
            assert_eq!(h.len(), 5);
            assert_eq!(h.nodes[0].kind, CutKind::DegreeCut);
            let report = verify_cycle_cut_instance(&h);
            assert!(!report.is_cycle_cut_instance);
            assert_eq!(report.offenders, vec![0]);
            h.check_invariants(&g).unwrap();
        }
    }

    #[test]
    fn rejects_non_regular() {
        let g = Multigraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(matches!(
            build_hierarchy(&g, 0),
            Err(Error::NotFourRegular { .. })
        ));
    }

    #[test]
    fn dot_export_mentions_every_node() {
        let g = doubled_cycle(5);
        let h = build_hierarchy(&g, 0).unwrap();
        let dot = h.to_dot();
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches("->").count(), h.len() - 1);
        assert!(dot.contains("palegreen"));
    }
}
