#![allow(dead_code)]

use cyclecut::instance::{
    gen_random_cyclecut, Blueprint, CostMode, Instance, LpValue, SupportEdge,
};
use cyclecut::multigraph::Multigraph;
use cyclecut::rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn doubled_cycle(n: usize) -> Multigraph {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| [(i, (i + 1) % n); 2]).collect();
    Multigraph::from_pairs(n, &pairs).unwrap()
}

pub fn complete(n: usize) -> Multigraph {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Multigraph::from_pairs(n, &pairs).unwrap()
}

/// K5 with every edge at x = 1/2: a valid LP point whose root cut is a
/// degree cut.
pub fn k5_instance() -> Instance {
    let edges = (0..5)
        .flat_map(|u| (u + 1..5).map(move |v| (u, v)))
        .map(|(u, v)| SupportEdge {
            u,
            v,
            x: LpValue::Half,
            cost: rational::one(),
        })
        .collect();
    Instance::new(5, Some(0), edges).unwrap()
}

/// Seeded random blueprint with `lo..=hi` leaves.
pub fn random_blueprint(seed: u64, lo: usize, hi: usize) -> Blueprint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let leaves = rng.gen_range(lo..=hi);
    Blueprint::random(&mut rng, leaves).unwrap()
}

pub fn random_instance(seed: u64, lo: usize, hi: usize) -> (Blueprint, Instance) {
    let b = random_blueprint(seed, lo, hi);
    let inst = gen_random_cyclecut(&b, seed, CostMode::RandomRational).unwrap();
    (b, inst)
}

/// Boundary size of `mask` (bit i = vertex i), counted edge by edge.
pub fn cut_of_mask(g: &Multigraph, mask: u64) -> usize {
    g.edges()
        .iter()
        .filter(|e| (mask >> e.u & 1) != (mask >> e.v & 1))
        .count()
}

/// Minimum cut by scanning every nonempty proper subset.
pub fn brute_min_cut(g: &Multigraph) -> usize {
    let n = g.vertex_count();
    (1..(1u64 << n) - 1)
        .map(|m| cut_of_mask(g, m))
        .min()
        .unwrap()
}

/// Tight sets by subset scan, as sorted vertex lists on the side without
/// vertex 0.
pub fn brute_tight_sets(g: &Multigraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut out: Vec<Vec<usize>> = (1..(1u64 << n) - 1)
        .filter(|m| m & 1 == 0 && cut_of_mask(g, *m) == 4)
        .map(|m| (0..n).filter(|v| m >> v & 1 == 1).collect())
        .collect();
    out.sort();
    out
}

use cyclecut::chain::{select_params, swap12, State, Variant};
use cyclecut::embedding::Twist;
use cyclecut::multigraph::is_connected_spanning;
use cyclecut::sampler::{cut_states, exact_outcome_distribution, Pipeline};
use cyclecut::Rational;
use num_traits::{One, Zero};

/// Exact checks over every outcome of the sampler: probabilities sum to 1,
/// each outcome is an even connected spanning multigraph, edges inside cuts
/// are used 2/3 of the time and root edges 1/2, every cut's state marginal
/// equals its propagated distribution and both variants of a state are
/// equally likely.
pub fn oracle_checks(p: &Pipeline, cap: usize) -> Result<Rational, String> {
    let g = p.graph();
    let outcomes = exact_outcome_distribution(p, cap).map_err(|e| e.to_string())?;
    let total: Rational = outcomes.iter().map(|o| &o.probability).sum();
    if !total.is_one() {
        return Err(format!("probabilities sum to {total}"));
    }
    let h = &p.hierarchy;
    let mut usage = vec![Rational::zero(); g.edge_count()];
    let mut joint: Vec<[[Rational; 2]; 4]> =
        vec![std::array::from_fn(|_| [Rational::zero(), Rational::zero()]); h.len()];
    let mut cost = Rational::zero();
    for o in &outcomes {
        let m = &o.multiplicities;
        if !m.all_degrees_even(g) || !is_connected_spanning(g, m) {
            return Err(format!("invalid outcome {:?}", m.as_slice()));
        }
        for (u, &x) in usage.iter_mut().zip(m.as_slice()) {
            *u += &o.probability * rational::int(x as i64);
        }
        cost += &o.probability * m.cost(g);
        for (node, st) in cut_states(p, m)
            .map_err(|e| e.to_string())?
            .into_iter()
            .enumerate()
        {
            if let Some((s, v)) = st {
                joint[node][s.index()][(v == Variant::B) as usize] += &o.probability;
            }
        }
    }
    let two_thirds = rational::ratio(2, 3);
    for e in g.edges() {
        let want = if h.root_edges.contains(&e.id) {
            rational::half()
        } else {
            two_thirds.clone()
        };
        if usage[e.id] != want {
            return Err(format!(
                "edge {} used {} (want {})",
                e.id, usage[e.id], want
            ));
        }
    }
    for node in h.composite_nodes() {
        let dist = match node.parent {
            None => p.p_root.clone(),
            Some(parent) => {
                // recompute the parent's chain image independently of the plan
                let q = &p.plan.get(parent).unwrap().distribution;
                let image = select_params(q, h.node(parent).children.len())
                    .unwrap()
                    .params
                    .step(q)
                    .unwrap();
                match p.frames.twist_type(node.id).unwrap() {
                    Twist::Straight => image,
                    Twist::Twisted => swap12(&image),
                }
            }
        };
        if dist != p.plan.get(node.id).unwrap().distribution {
            return Err(format!("node {}: plan disagrees with chain image", node.id));
        }
        for s in State::ALL {
            let [a, b] = &joint[node.id][s.index()];
            if &(a + b) != dist.get(s) {
                return Err(format!(
                    "node {} state {:?}: {} vs {}",
                    node.id,
                    s,
                    a + b,
                    dist.get(s)
                ));
            }
            if a != b {
                return Err(format!(
                    "node {} state {:?}: variants {} vs {}",
                    node.id, s, a, b
                ));
            }
        }
    }
    Ok(cost)
}
