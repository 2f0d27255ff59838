mod common;

use std::collections::BTreeSet;

use cyclecut::cuts::{build_hierarchy, Hierarchy};
use cyclecut::embedding::{
    assign_frame, assign_frames, hierarchy_shape, order_children, Frame, FrameOptions, Frames,
    Parity, Twist,
};
use cyclecut::instance::{
    gen_figure1, gen_random_cyclecut, support_multigraph, Blueprint, CostMode, Figure1Costs,
};
use cyclecut::multigraph::Multigraph;
use cyclecut::Error;

fn touches_set(g: &Multigraph, e: usize, members: &[usize]) -> bool {
    let edge = g.edge(e);
    members.contains(&edge.u) || members.contains(&edge.v)
}

/// Checks one frame against the graph, and each composite child's frame
/// against its place in this chain.
fn check_frame(h: &Hierarchy, g: &Multigraph, frames: &Frames, f: &Frame) -> Result<(), String> {
    let node = h.node(f.node);
    let k = f.k();
    if k != node.children.len() || f.pairs.len() != k - 1 {
        return Err("chain length".into());
    }
    let sorted: BTreeSet<usize> = f.children.iter().copied().collect();
    if sorted != node.children.iter().copied().collect() {
        return Err("chain is not a permutation of the children".into());
    }
    if f.k_parity != Parity::of(k) {
        return Err("parity".into());
    }
    let roles: BTreeSet<usize> = f.roles().into_iter().collect();
    if roles != node.boundary.iter().copied().collect() {
        return Err("roles are not the boundary".into());
    }
    let halves: BTreeSet<usize> = f.delta_l.iter().chain(&f.delta_r).copied().collect();
    if halves != roles || !f.delta_l.contains(&f.ul) {
        return Err("delta split".into());
    }
    let first = &h.node(f.children[0]).members;
    let last = &h.node(f.children[k - 1]).members;
    if !touches_set(g, f.ul, first) || !touches_set(g, f.dl, first) {
        return Err("UL/DL not at a_1".into());
    }
    if !touches_set(g, f.ur, last) || !touches_set(g, f.dr, last) {
        return Err("UR/DR not at a_k".into());
    }
    let expect = if f.delta_l.contains(&f.ur) {
        Twist::Straight
    } else if f.delta_l.contains(&f.dr) {
        Twist::Twisted
    } else {
        return Err("delta_l is neither {UL,UR} nor {UL,DR}".into());
    };
    if f.twist != expect {
        return Err("twist flag".into());
    }
    for (j, p) in f.pairs.iter().enumerate() {
        let (a, b) = (
            &h.node(f.children[j]).members,
            &h.node(f.children[j + 1]).members,
        );
        for e in [p.top, p.bottom] {
            let edge = g.edge(e);
            let joins = (a.contains(&edge.u) && b.contains(&edge.v))
                || (a.contains(&edge.v) && b.contains(&edge.u));
            if !joins {
                return Err(format!(
                    "pair {j} edge {e} does not join a_{} and a_{}",
                    j + 1,
                    j + 2
                ));
            }
        }
        if p.top == p.bottom {
            return Err("pair repeats an edge".into());
        }
    }
    let mut internal: Vec<usize> = f.pairs.iter().flat_map(|p| [p.top, p.bottom]).collect();
    internal.sort();
    if internal != node.internal {
        return Err("pairs do not cover E->".into());
    }
    // an end child meets the parent's boundary once on each side
    for &end in [f.children[0], f.children[k - 1]].iter() {
        let b = &h.node(end).boundary;
        let left = f.delta_l.iter().filter(|e| b.contains(e)).count();
        let right = f.delta_r.iter().filter(|e| b.contains(e)).count();
        if k > 1 && (left != 1 || right != 1) {
            return Err(format!(
                "end child {end} meets delta_l {left} and delta_r {right} times"
            ));
        }
    }
    for j in 0..k {
        let Some(cf) = frames.get(f.children[j]) else {
            continue;
        };
        let (l, r) = (f.left_of(j), f.right_of(j));
        let mut want = [l.top, l.bottom];
        want.sort();
        let mut got = cf.delta_l;
        got.sort();
        if want != got {
            return Err(format!("child {} delta_l is not its left pair", cf.node));
        }
        let left_end = [cf.ul, cf.dl];
        for (x, y) in [(l.top, r.top), (l.bottom, r.bottom)] {
            if left_end.contains(&x) != left_end.contains(&y) {
                return Err(format!(
                    "child {}: labels do not follow the same end",
                    cf.node
                ));
            }
        }
    }
    Ok(())
}

fn check_all(g: &Multigraph, r: usize, opts: FrameOptions) -> (Hierarchy, Frames) {
    let h = build_hierarchy(g, r).unwrap();
    let frames = assign_frames(&h, g, opts).unwrap();
    assert_eq!(frames.iter().count(), h.composite_nodes().count());
    for f in frames.iter() {
        if let Err(msg) = check_frame(&h, g, &frames, f) {
            panic!("node {}: {msg}", f.node);
        }
        assert_eq!(&assign_frame(&h, g, f.node, opts).unwrap(), f);
    }
    assert_eq!(frames.twist_type(h.top()).unwrap(), Twist::Straight);
    (h, frames)
}

#[test]
fn doubled_square_root_chain() {
    let g = common::doubled_cycle(4);
    let h = build_hierarchy(&g, 3).unwrap();
    let chain = order_children(&h, &g, 0).unwrap();
    let firsts: Vec<usize> = chain
        .children
        .iter()
        .map(|&c| h.node(c).members[0])
        .collect();
    assert!(firsts == [0, 1, 2] || firsts == [2, 1, 0]);
    for p in &chain.pairs {
        let (a, b) = (g.edge(p[0]), g.edge(p[1]));
        assert_eq!((a.u.min(a.v), a.u.max(a.v)), (b.u.min(b.v), b.u.max(b.v)));
    }
    check_all(&g, 3, FrameOptions::default());
}

#[test]
fn two_child_cut() {
    let b: Blueprint = "((L,L),L,L)".parse().unwrap();
    for seed in 0..8 {
        let g = support_multigraph(&gen_random_cyclecut(&b, seed, CostMode::Unit).unwrap()).graph;
        let (h, frames) = check_all(&g, 0, FrameOptions::default());
        let inner = h.composite_nodes().find(|n| n.children.len() == 2).unwrap();
        let f = frames.get(inner.id).unwrap();
        assert_eq!(f.pairs.len(), 1);
        assert_eq!(f.k_parity, Parity::Even);
    }
}

#[test]
fn figure1_zero_root_chain() {
    let g = support_multigraph(&gen_figure1(0, Figure1Costs::Unit).unwrap()).graph;
    let h = build_hierarchy(&g, 0).unwrap();
    let chain = order_children(&h, &g, 0).unwrap();
    // with the outside the contracted cycle has three nodes: {u2,u3,w2,w3}, {w1} and u1
    let members: Vec<&[usize]> = chain
        .children
        .iter()
        .map(|&c| h.node(c).members.as_slice())
        .collect();
    assert_eq!(members, vec![&[1, 2, 4, 5][..], &[3]]);
    assert_eq!(chain.pairs.len(), 1);
    let inner = order_children(&h, &g, chain.children[0]).unwrap();
    let members: Vec<&[usize]> = inner
        .children
        .iter()
        .map(|&c| h.node(c).members.as_slice())
        .collect();
    assert_eq!(members, vec![&[1, 4][..], &[2, 5]]);
}

#[test]
fn figure1_frames() {
    for k in 0..=10 {
        let g = support_multigraph(&gen_figure1(k, Figure1Costs::Unit).unwrap()).graph;
        for reflect in [false, true] {
            check_all(&g, 0, FrameOptions { reflect });
        }
    }
}

#[test]
fn random_instance_frames_and_twists() {
    let mut seen = BTreeSet::new();
    for seed in 0..50 {
        let (_, inst) = common::random_instance(seed, 3, 14);
        let g = support_multigraph(&inst).graph;
        for r in [0, g.vertex_count() / 2] {
            for reflect in [false, true] {
                let (_, frames) = check_all(&g, r, FrameOptions { reflect });
                seen.extend(frames.iter().map(|f| format!("{:?}", f.twist)));
            }
        }
    }
    // the corpus exercises both kinds of cut
    assert_eq!(seen.len(), 2);
}

#[test]
fn reflection_reverses_the_root_chain() {
    let g = support_multigraph(&gen_figure1(2, Figure1Costs::Unit).unwrap()).graph;
    let h = build_hierarchy(&g, 0).unwrap();
    let a = assign_frame(&h, &g, 0, FrameOptions { reflect: false }).unwrap();
    let b = assign_frame(&h, &g, 0, FrameOptions { reflect: true }).unwrap();
    let mut rev = a.children.clone();
    rev.reverse();
    assert_eq!(b.children, rev);
}

#[test]
fn singletons_have_no_frame() {
    let g = common::doubled_cycle(5);
    let h = build_hierarchy(&g, 0).unwrap();
    let frames = assign_frames(&h, &g, FrameOptions::default()).unwrap();
    let leaf = h.vertex_node[1].unwrap();
    assert_eq!(
        frames.twist_type(leaf),
        Err(Error::NotApplicable { node: leaf })
    );
    assert_eq!(
        assign_frame(&h, &g, leaf, FrameOptions::default()),
        Err(Error::NotApplicable { node: leaf })
    );
}

#[test]
fn degree_cuts_block_frames() {
    let g = common::complete(5);
    let h = build_hierarchy(&g, 0).unwrap();
    assert_eq!(
        assign_frames(&h, &g, FrameOptions::default()),
        Err(Error::DegreeCutPresent { nodes: vec![0] })
    );
    assert_eq!(
        order_children(&h, &g, 0),
        Err(Error::NotCycleCut { node: 0 })
    );
}

#[test]
fn shape_round_trips() {
    for seed in 0..50 {
        let (b, inst) = common::random_instance(1000 + seed, 3, 16);
        let g = support_multigraph(&inst).graph;
        assert_eq!(
            hierarchy_shape(&build_hierarchy(&g, 0).unwrap(), &g).unwrap(),
            b.canonical()
        );
    }
}
