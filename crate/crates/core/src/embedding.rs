//! Caterpillar frames of cycle cuts.
//!
//! A frame lays the children of a cycle cut `S` out left to right as
//! `a_1..a_k`, labels the two edges of every connecting pair top or bottom,
//! and names the four boundary edges `UL`, `DL` (at `a_1`) and `UR`, `DR` (at
//! `a_k`). Top labels follow the ends of composite children: if the top edge
//! of a pair enters a composite child at one end of its own chain, the top
//! edge of the next pair leaves from that same end.

use serde::Serialize;

use crate::cuts::{CutKind, Hierarchy};
use crate::error::{Error, Result};
use crate::instance::generate::canonical_chain;
use crate::multigraph::Multigraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Twist {
    Straight,
    Twisted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(k: usize) -> Self {
        if k.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Children of a cycle cut in cycle order, cut open at the complement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChildChain {
    pub children: Vec<usize>,
    /// `pairs[i]` holds the two edges between `children[i]` and
    /// `children[i + 1]`, sorted.
    pub pairs: Vec<[usize; 2]>,
}

impl ChildChain {
    fn reverse(&mut self) {
        self.children.reverse();
        self.pairs.reverse();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Pair {
    pub top: usize,
    pub bottom: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Frame {
    pub node: usize,
    pub children: Vec<usize>,
    pub pairs: Vec<Pair>,
    pub ul: usize,
    pub dl: usize,
    pub ur: usize,
    pub dr: usize,
    pub delta_l: [usize; 2],
    pub delta_r: [usize; 2],
    pub twist: Twist,
    pub k_parity: Parity,
}

impl Frame {
    pub fn k(&self) -> usize {
        self.children.len()
    }

    /// Boundary edges in role order `UL, DL, UR, DR`.
    pub fn roles(&self) -> [usize; 4] {
        [self.ul, self.dl, self.ur, self.dr]
    }

    /// Top and bottom edge on the left of child `j` (0-based).
    pub fn left_of(&self, j: usize) -> Pair {
        if j == 0 {
            Pair {
                top: self.ul,
                bottom: self.dl,
            }
        } else {
            self.pairs[j - 1]
        }
    }

    /// Top and bottom edge on the right of child `j` (0-based).
    pub fn right_of(&self, j: usize) -> Pair {
        if j + 1 == self.children.len() {
            Pair {
                top: self.ur,
                bottom: self.dr,
            }
        } else {
            self.pairs[j]
        }
    }

    pub fn twist_type(&self) -> Twist {
        self.twist
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FrameOptions {
    /// Take the largest instead of the smallest `δ^L` edge as `UL`, which
    /// runs every chain in the opposite direction.
    pub reflect: bool,
}

/// Frames of every cycle cut of a hierarchy, indexed by node id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Frames {
    frames: Vec<Option<Frame>>,
}

impl Frames {
    pub fn get(&self, node: usize) -> Option<&Frame> {
        self.frames.get(node).and_then(Option::as_ref)
    }

    pub fn twist_type(&self, node: usize) -> Result<Twist> {
        self.get(node)
            .map(Frame::twist_type)
            .ok_or(Error::NotApplicable { node })
    }

    pub fn iter(&self) -> impl Iterator<Item = &Frame> {
        self.frames.iter().flatten()
    }
}

/// Vertex labels for contracting `node`: `0` outside, `i + 1` for the i-th
/// entry of `children`.
fn child_labels(h: &Hierarchy, node: usize) -> Vec<usize> {
    let mut label = vec![0usize; h.vertex_count];
    for (i, &c) in h.node(node).children.iter().enumerate() {
        for &v in &h.node(c).members {
            label[v] = i + 1;
        }
    }
    label
}

/// Cycle order of the children of a cycle cut, starting at the child that
/// carries the smallest boundary edge.
pub fn order_children(h: &Hierarchy, g: &Multigraph, node: usize) -> Result<ChildChain> {
    let cut = h.node(node);
    if cut.kind != CutKind::CycleCut {
        return Err(Error::NotCycleCut { node });
    }
    let label = child_labels(h, node);
    let k = cut.children.len();
    let mut between: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); k + 1]; k + 1];
    for e in g.edges() {
        let (a, b) = (label[e.u], label[e.v]);
        if a != b {
            between[a][b].push(e.id);
            between[b][a].push(e.id);
        }
    }
    let first_edge = g.edge(cut.boundary[0]);
    let inner = if label[first_edge.u] != 0 {
        first_edge.u
    } else {
        first_edge.v
    };
    let mut order = vec![label[inner]];
    let mut prev = 0usize;
    while order.len() < k {
        let cur = *order.last().unwrap();
        let next = (1..=k)
            .find(|&j| j != prev && j != cur && !between[cur][j].is_empty())
            .ok_or(Error::NotCycleCut { node })?;
        prev = cur;
        order.push(next);
    }
    let pairs = order
        .windows(2)
        .map(|w| {
            let edges = &between[w[0]][w[1]];
            if edges.len() != 2 {
                return Err(Error::NotCycleCut { node });
            }
            let mut p = [edges[0], edges[1]];
            p.sort_unstable();
            Ok(p)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChildChain {
        children: order.into_iter().map(|l| cut.children[l - 1]).collect(),
        pairs,
    })
}

struct Builder<'a> {
    h: &'a Hierarchy,
    g: &'a Multigraph,
    chains: Vec<Option<ChildChain>>,
    opts: FrameOptions,
}

impl<'a> Builder<'a> {
    fn new(h: &'a Hierarchy, g: &'a Multigraph, opts: FrameOptions) -> Self {
        let chains = vec![None; h.len()];
        Self { h, g, chains, opts }
    }

    fn chain(&mut self, node: usize) -> Result<&ChildChain> {
        if self.chains[node].is_none() {
            self.chains[node] = Some(order_children(self.h, self.g, node)?);
        }
        Ok(self.chains[node].as_ref().unwrap())
    }

    /// Endpoint of edge `e` inside node `node`.
    fn inner_endpoint(&self, node: usize, e: usize) -> usize {
        let edge = self.g.edge(e);
        if self.h.node(node).members.binary_search(&edge.u).is_ok() {
            edge.u
        } else {
            edge.v
        }
    }

    /// The end child of composite `child` at which edge `e` attaches, or
    /// `None` for a singleton.
    fn end_of(&mut self, child: usize, e: usize) -> Result<Option<usize>> {
        if self.h.node(child).is_singleton() {
            return Ok(None);
        }
        let v = self.inner_endpoint(child, e);
        let grandchild = self
            .h
            .child_containing(child, v)
            .expect("edge enters the child");
        let chain = self.chain(child)?;
        let ends = [chain.children[0], *chain.children.last().unwrap()];
        if ends.contains(&grandchild) {
            Ok(Some(grandchild))
        } else {
            Err(Error::FrameMismatch { node: child })
        }
    }

    /// Of two edges leaving `child`, the one attached at `end`; the smaller
    /// id when `child` is a singleton.
    fn pick_at_end(
        &mut self,
        child: usize,
        end: Option<usize>,
        edges: [usize; 2],
    ) -> Result<(usize, usize)> {
        let Some(end) = end else {
            let (a, b) = (edges[0].min(edges[1]), edges[0].max(edges[1]));
            return Ok((a, b));
        };
        let at: Vec<bool> = edges
            .iter()
            .map(|&e| self.end_of(child, e).map(|x| x == Some(end)))
            .collect::<Result<_>>()?;
        match (at[0], at[1]) {
            (true, false) => Ok((edges[0], edges[1])),
            (false, true) => Ok((edges[1], edges[0])),
            _ => Err(Error::FrameMismatch { node: child }),
        }
    }

    fn frame(&mut self, node: usize, delta_l: Option<[usize; 2]>) -> Result<Frame> {
        let mut chain = self.chain(node)?.clone();
        let boundary = self.h.node(node).boundary.clone();
        let candidates: Vec<usize> = match delta_l {
            Some(d) => d.to_vec(),
            None => boundary.clone(),
        };
        let ul = if self.opts.reflect {
            *candidates.iter().max().unwrap()
        } else {
            *candidates.iter().min().unwrap()
        };
        let at_child = |b: &Self, e: usize| {
            let v = b.inner_endpoint(node, e);
            b.h.child_containing(node, v)
                .expect("boundary edge enters the cut")
        };
        if at_child(self, ul) != chain.children[0] {
            chain.reverse();
        }
        let (first, last) = (chain.children[0], *chain.children.last().unwrap());
        if at_child(self, ul) != first {
            return Err(Error::FrameMismatch { node });
        }
        let first_side: Vec<usize> = boundary
            .iter()
            .copied()
            .filter(|&e| at_child(self, e) == first)
            .collect();
        let last_side: Vec<usize> = boundary
            .iter()
            .copied()
            .filter(|&e| at_child(self, e) == last)
            .collect();
        if first_side.len() != 2 || last_side.len() != 2 {
            return Err(Error::FrameMismatch { node });
        }
        let dl = if first_side[0] == ul {
            first_side[1]
        } else {
            first_side[0]
        };

        let mut pairs = Vec::with_capacity(chain.pairs.len());
        let mut entering = ul;
        for (i, &pair) in chain.pairs.iter().enumerate() {
            let child = chain.children[i];
            let end = self.end_of(child, entering)?;
            let (top, bottom) = self.pick_at_end(child, end, pair)?;
            pairs.push(Pair { top, bottom });
            entering = top;
        }
        let end = self.end_of(last, entering)?;
        let (ur, dr) = self.pick_at_end(last, end, [last_side[0], last_side[1]])?;

        let delta_l = delta_l.unwrap_or([ul.min(ur), ul.max(ur)]);
        let mut delta_r: Vec<usize> = boundary
            .iter()
            .copied()
            .filter(|e| !delta_l.contains(e))
            .collect();
        delta_r.sort_unstable();
        if delta_r.len() != 2
            || delta_l.contains(&ul) == delta_l.contains(&dl)
            || delta_l.contains(&ur) == delta_l.contains(&dr)
        {
            return Err(Error::FrameMismatch { node });
        }
        let twist = if delta_l.contains(&ur) {
            Twist::Straight
        } else {
            Twist::Twisted
        };
        let mut sorted_l = delta_l;
        sorted_l.sort_unstable();
        Ok(Frame {
            node,
            k_parity: Parity::of(chain.children.len()),
            children: chain.children,
            pairs,
            ul,
            dl,
            ur,
            dr,
            delta_l: sorted_l,
            delta_r: [delta_r[0], delta_r[1]],
            twist,
        })
    }

    /// `δ^L` of every composite child of a framed cut.
    fn child_lefts(&self, frame: &Frame) -> Vec<(usize, [usize; 2])> {
        (0..frame.k())
            .filter(|&j| !self.h.node(frame.children[j]).is_singleton())
            .map(|j| {
                let p = frame.left_of(j);
                (
                    frame.children[j],
                    [p.top.min(p.bottom), p.top.max(p.bottom)],
                )
            })
            .collect()
    }
}

/// Frames for every cycle cut, computed top-down in one pass.
pub fn assign_frames(h: &Hierarchy, g: &Multigraph, opts: FrameOptions) -> Result<Frames> {
    let degree = h.degree_cuts();
    if !degree.is_empty() {
        return Err(Error::DegreeCutPresent { nodes: degree });
    }
    let mut b = Builder::new(h, g, opts);
    let mut frames: Vec<Option<Frame>> = vec![None; h.len()];
    let mut lefts: Vec<Option<[usize; 2]>> = vec![None; h.len()];
    for id in 0..h.len() {
        if h.node(id).is_singleton() {
            continue;
        }
        let frame = b.frame(id, lefts[id])?;
        for (child, d) in b.child_lefts(&frame) {
            lefts[child] = Some(d);
        }
        frames[id] = Some(frame);
    }
    Ok(Frames { frames })
}

/// Frame of a single cut (its ancestors are framed along the way).
pub fn assign_frame(
    h: &Hierarchy,
    g: &Multigraph,
    node: usize,
    opts: FrameOptions,
) -> Result<Frame> {
    match h.node(node).kind {
        CutKind::Singleton => return Err(Error::NotApplicable { node }),
        CutKind::DegreeCut => return Err(Error::NotCycleCut { node }),
        CutKind::CycleCut => {}
    }
    let mut path = vec![node];
    while let Some(p) = h.node(*path.last().unwrap()).parent {
        path.push(p);
    }
    path.reverse();
    let mut b = Builder::new(h, g, opts);
    let mut left = None;
    for w in path.windows(2) {
        let frame = b.frame(w[0], left)?;
        left = b
            .child_lefts(&frame)
            .into_iter()
            .find(|&(c, _)| c == w[1])
            .map(|(_, d)| d);
    }
    b.frame(node, left)
}

/// Shape of the hierarchy as a canonical nested-chain string (`L` for a
/// singleton), comparable with a blueprint's canonical form.
pub fn hierarchy_shape(h: &Hierarchy, g: &Multigraph) -> Result<String> {
    fn walk(h: &Hierarchy, g: &Multigraph, node: usize) -> Result<String> {
        if h.node(node).is_singleton() {
            return Ok("L".into());
        }
        let chain = order_children(h, g, node)?;
        let parts = chain
            .children
            .iter()
            .map(|&c| walk(h, g, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(canonical_chain(parts))
    }
    walk(h, g, h.top())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuts::build_hierarchy;

    fn doubled_cycle(n: usize) -> Multigraph {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| [(i, (i + 1) % n); 2]).collect();
        Multigraph::from_pairs(n, &pairs).unwrap()
    }

    #[test]
    fn four_cycle_chain() {
        let g = doubled_cycle(4);
        let h = build_hierarchy(&g, 3).unwrap();
        let chain = order_children(&h, &g, 0).unwrap();
        let members: Vec<usize> = chain
            .children
            .iter()
            .map(|&c| h.node(c).members[0])
            .collect();
        assert!(members == [0, 1, 2] || members == [2, 1, 0]);
        assert_eq!(chain.pairs.len(), 2);
        for p in &chain.pairs {
            let (a, b) = (g.edge(p[0]), g.edge(p[1]));
            assert_eq!((a.u, a.v), (b.u, b.v));
        }
    }

    #[test]
    fn root_frame_is_straight() {
        for n in 4..9 {
            let g = doubled_cycle(n);
            let h = build_hierarchy(&g, 0).unwrap();
            for reflect in [false, true] {
                let frames = assign_frames(&h, &g, FrameOptions { reflect }).unwrap();
                let f = frames.get(0).unwrap();
                assert_eq!(f.twist, Twist::Straight);
                assert_eq!(f.k(), n - 1);
                assert_eq!(f.k_parity, Parity::of(n - 1));
                let mut roles = f.roles().to_vec();
                roles.sort_unstable();
                assert_eq!(roles, h.node(0).boundary);
                assert_eq!(
                    assign_frame(&h, &g, 0, FrameOptions { reflect }).unwrap(),
                    *f
                );
            }
            assert_eq!(
                assign_frames(&h, &g, FrameOptions::default())
                    .unwrap()
                    .twist_type(1),
                Err(Error::NotApplicable { node: 1 })
            );
        }
    }

    #[test]
    fn degree_cut_has_no_frame() {
        let pairs: Vec<(usize, usize)> = (0..5)
            .flat_map(|u| (u + 1..5).map(move |v| (u, v)))
            .collect();
        let g = Multigraph::from_pairs(5, &pairs).unwrap();
        let h = build_hierarchy(&g, 0).unwrap();
        assert_eq!(
            order_children(&h, &g, 0),
            Err(Error::NotCycleCut { node: 0 })
        );
        assert!(matches!(
            assign_frames(&h, &g, FrameOptions::default()),
            Err(Error::DegreeCutPresent { .. })
        ));
    }
}
