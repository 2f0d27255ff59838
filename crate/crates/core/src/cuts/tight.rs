use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::multigraph::{self, Multigraph, UnitFlow};

pub const BRUTE_FORCE_MAX_N: usize = 16;

/// True iff `a \ b`, `b \ a`, `a ∩ b` and `V \ (a ∪ b)` are all non-empty.
pub fn crosses(a: &[usize], b: &[usize], n: usize) -> bool {
    let sa = to_bits(a, n);
    let sb = to_bits(b, n);
    crosses_bits(&sa, &sb, n)
}

pub(crate) fn crosses_bits(a: &FixedBitSet, b: &FixedBitSet, n: usize) -> bool {
    let inter = a.intersection_count(b);
    let (ca, cb) = (a.count_ones(..), b.count_ones(..));
    inter > 0 && inter < ca && inter < cb && ca + cb - inter < n
}

pub(crate) fn to_bits(set: &[usize], n: usize) -> FixedBitSet {
    let mut bits = FixedBitSet::with_capacity(n);
    for &v in set {
        bits.insert(v);
    }
    bits
}

/// All tight sets by exhaustive scan over subsets not containing vertex 0.
pub fn brute_force_tight_sets(g: &Multigraph) -> Result<Vec<Vec<usize>>> {
    let n = g.vertex_count();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge {
            what: "brute-force vertex count",
            size: n,
            limit: BRUTE_FORCE_MAX_N,
        });
    }
    if n < 2 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for mask in 1u32..(1 << (n - 1)) {
        let members: Vec<usize> = (1..n).filter(|v| mask >> (v - 1) & 1 == 1).collect();
        if g.cut_size(&to_bits(&members, n)) == 4 {
            out.push(members);
        }
    }
    out.sort();
    Ok(out)
}

/// All tight sets (boundary of size 4), each reported once as the side that
/// excludes vertex 0, sorted.
///
/// Every such set is a minimum `0-t` cut for any `t` inside it, so one unit
/// flow per `t` suffices; the minimum cuts of a flow are the
/// predecessor-closed sets of the residual graph that contain `t` and avoid
/// everything reachable from 0.
pub fn enumerate_tight_sets(g: &Multigraph) -> Result<Vec<Vec<usize>>> {
    let n = g.vertex_count();
    let cut =
        multigraph::global_min_cut_value(g).map_err(|_| Error::NotFourConnected { cut: 0 })?;
    if cut != 4 {
        return Err(Error::NotFourConnected { cut });
    }
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    for t in 1..n {
        let flow = multigraph::max_flow_capped(g, 0, t, 5);
        if flow.value != 4 {
            continue;
        }
        for set in min_cut_sink_sides(g, &flow, 0, t) {
            found.insert(set);
        }
    }
    Ok(found.into_iter().collect())
}

struct Residual {
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

fn residual_graph(g: &Multigraph, flow: &UnitFlow) -> Residual {
    let n = g.vertex_count();
    let mut succ = vec![Vec::new(); n];
    let mut pred = vec![Vec::new(); n];
    for e in g.edges() {
        if flow.residual(g, e.id, e.u) > 0 {
            succ[e.u].push(e.v);
            pred[e.v].push(e.u);
        }
        if flow.residual(g, e.id, e.v) > 0 {
            succ[e.v].push(e.u);
            pred[e.u].push(e.v);
        }
    }
    Residual { succ, pred }
}

/// Kosaraju; returns the component index of every vertex.
fn strongly_connected(res: &Residual) -> (Vec<usize>, usize) {
    let n = res.succ.len();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![(start, 0usize)];
        while let Some((v, i)) = stack.pop() {
            if i < res.succ[v].len() {
                stack.push((v, i + 1));
                let w = res.succ[v][i];
                if !seen[w] {
                    seen[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for &start in order.iter().rev() {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = count;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &res.pred[v] {
                if comp[w] == usize::MAX {
                    comp[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    (comp, count)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Undecided,
    In,
    Out,
}

fn min_cut_sink_sides(g: &Multigraph, flow: &UnitFlow, s: usize, t: usize) -> Vec<Vec<usize>> {
    let res = residual_graph(g, flow);
    let (comp, count) = strongly_connected(&res);
    let mut dag_succ = vec![BTreeSet::new(); count];
    let mut dag_pred = vec![BTreeSet::new(); count];
    for v in 0..res.succ.len() {
        for &w in &res.succ[v] {
            if comp[v] != comp[w] {
                dag_succ[comp[v]].insert(comp[w]);
                dag_pred[comp[w]].insert(comp[v]);
            }
        }
    }
    let dag_succ: Vec<Vec<usize>> = dag_succ
        .into_iter()
        .map(|s| s.into_iter().collect())
        .collect();
    let dag_pred: Vec<Vec<usize>> = dag_pred
        .into_iter()
        .map(|s| s.into_iter().collect())
        .collect();

    let mut side = vec![Side::Undecided; count];
    spread(&dag_pred, comp[t], Side::In, &mut side);
    spread(&dag_succ, comp[s], Side::Out, &mut side);

    let mut members = vec![Vec::new(); count];
    for (v, &c) in comp.iter().enumerate() {
        members[c].push(v);
    }
    let mut out = Vec::new();
    enumerate_ideals(&dag_succ, &dag_pred, &mut side, &members, &mut out);
    out
}

/// Marks `start` and everything reachable along `adj` with `mark`.
fn spread(adj: &[Vec<usize>], start: usize, mark: Side, side: &mut [Side]) {
    if side[start] == mark {
        return;
    }
    side[start] = mark;
    let mut stack = vec![start];
    while let Some(c) = stack.pop() {
        for &d in &adj[c] {
            if side[d] != mark {
                debug_assert_eq!(side[d], Side::Undecided);
                side[d] = mark;
                stack.push(d);
            }
        }
    }
}

fn enumerate_ideals(
    succ: &[Vec<usize>],
    pred: &[Vec<usize>],
    side: &mut Vec<Side>,
    members: &[Vec<usize>],
    out: &mut Vec<Vec<usize>>,
) {
    match side.iter().position(|&s| s == Side::Undecided) {
        None => {
            let mut set: Vec<usize> = side
                .iter()
                .enumerate()
                .filter(|(_, &s)| s == Side::In)
                .flat_map(|(c, _)| members[c].iter().copied())
                .collect();
            set.sort_unstable();
            out.push(set);
        }
        Some(c) => {
            let saved = side.clone();
            spread(pred, c, Side::In, side);
            enumerate_ideals(succ, pred, side, members, out);
            *side = saved.clone();
            spread(succ, c, Side::Out, side);
            enumerate_ideals(succ, pred, side, members, out);
            *side = saved;
        }
    }
}
