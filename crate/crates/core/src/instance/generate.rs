use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Instance, LpValue, SupportEdge};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Costs for [`gen_figure1`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Figure1Costs {
    Unit,
    /// One cost per support edge in generator order: the `u` triangle
    /// (`u1u2`, `u2u3`, `u1u3`), the `w` triangle, then the three paths.
    Explicit(Vec<Rational>),
}

/// The classical integrality-gap family: two triangles of `x = 1/2` edges
/// joined by three vertex-disjoint paths of `x = 1` edges, each with `k`
/// internal vertices. Vertices `0,1,2` are `u1,u2,u3`, `3,4,5` are
/// `w1,w2,w3`, path `i` uses `6 + i*k .. 6 + (i+1)*k`. The root is `u1`.
pub fn gen_figure1(k: usize, costs: Figure1Costs) -> Result<Instance> {
    let n = 6 + 3 * k;
    let mut pairs: Vec<(usize, usize, LpValue)> = vec![
        (0, 1, LpValue::Half),
        (1, 2, LpValue::Half),
        (0, 2, LpValue::Half),
        (3, 4, LpValue::Half),
        (4, 5, LpValue::Half),
        (3, 5, LpValue::Half),
    ];
    for i in 0..3 {
        let mut prev = i;
        for j in 0..k {
            let v = 6 + i * k + j;
            pairs.push((prev, v, LpValue::One));
            prev = v;
        }
        pairs.push((prev, 3 + i, LpValue::One));
    }
    let cost_list = match costs {
        Figure1Costs::Unit => vec![rational::one(); pairs.len()],
        Figure1Costs::Explicit(list) => {
            if list.len() != pairs.len() {
                return Err(Error::Parse(format!(
                    "figure1({k}) needs {} costs, got {}",
                    pairs.len(),
                    list.len()
                )));
            }
            list
        }
    };
    let edges = pairs
        .into_iter()
        .zip(cost_list)
        .map(|((u, v, x), cost)| SupportEdge { u, v, x, cost })
        .collect();
    Instance::new(n, Some(0), edges)
}

/// Shape of a random cycle-cut instance: leaves are vertices, chains are
/// cycle cuts whose children are linked by pairs of edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Blueprint {
    Leaf,
    Chain(Vec<Blueprint>),
}

impl Blueprint {
    pub fn chain_of_leaves(k: usize) -> Self {
        Blueprint::Chain(vec![Blueprint::Leaf; k])
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Blueprint::Leaf => 1,
            Blueprint::Chain(children) => children.iter().map(Blueprint::leaf_count).sum(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Blueprint::Leaf => Ok(()),
            Blueprint::Chain(children) if children.len() < 2 => Err(Error::BlueprintInvalid(
                format!("chain with {} child(ren)", children.len()),
            )),
            Blueprint::Chain(children) => children.iter().try_for_each(Blueprint::validate),
        }
    }

    /// Canonical string of the tree where each chain's child order is taken
    /// up to reversal. Two blueprints are isomorphic iff these agree.
    pub fn canonical(&self) -> String {
        match self {
            Blueprint::Leaf => "L".to_string(),
            Blueprint::Chain(children) => {
                let parts: Vec<String> = children.iter().map(Blueprint::canonical).collect();
                canonical_chain(parts)
            }
        }
    }

    /// Random blueprint with exactly `leaves` leaves (at least 3). Chains
    /// get between 2 and 5 children.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, leaves: usize) -> Result<Self> {
        if leaves < 3 {
            return Err(Error::BlueprintInvalid(format!(
                "{leaves} leaves (need at least 3)"
            )));
        }
        Ok(random_node(rng, leaves))
    }
}

impl std::str::FromStr for Blueprint {
    type Err = Error;

    /// Parses the canonical form, e.g. `((L,L),L,L)`.
    fn from_str(text: &str) -> Result<Self> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let b = parse_node(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(Error::BlueprintInvalid(format!("trailing input at {pos}")));
        }
        b.validate()?;
        Ok(b)
    }
}

fn parse_node(chars: &[char], pos: &mut usize) -> Result<Blueprint> {
    match chars.get(*pos) {
        Some('L') => {
            *pos += 1;
            Ok(Blueprint::Leaf)
        }
        Some('(') => {
            *pos += 1;
            let mut children = vec![parse_node(chars, pos)?];
            loop {
                match chars.get(*pos) {
                    Some(',') => {
                        *pos += 1;
                        children.push(parse_node(chars, pos)?);
                    }
                    Some(')') => {
                        *pos += 1;
                        return Ok(Blueprint::Chain(children));
                    }
                    _ => {
                        return Err(Error::BlueprintInvalid(format!(
                            "expected ',' or ')' at {pos}"
                        )))
                    }
                }
            }
        }
        _ => Err(Error::BlueprintInvalid(format!(
            "expected 'L' or '(' at {pos}"
        ))),
    }
}

/// Joins already-canonical child strings, choosing the lexicographically
/// smaller of the two chain directions.
pub(crate) fn canonical_chain(parts: Vec<String>) -> String {
    let forward = parts.join(",");
    let mut rev = parts;
    rev.reverse();
    let backward = rev.join(",");
    format!("({})", forward.min(backward))
}

fn random_node<R: Rng + ?Sized>(rng: &mut R, leaves: usize) -> Blueprint {
    if leaves == 1 {
        return Blueprint::Leaf;
    }
    let m = rng.gen_range(2..=leaves.min(5));
    // split `leaves` into m positive parts
    let mut cuts: Vec<usize> = Vec::new();
    while cuts.len() < m - 1 {
        let c = rng.gen_range(1..leaves);
        if !cuts.contains(&c) {
            cuts.push(c);
        }
    }
    cuts.sort_unstable();
    let mut sizes = Vec::with_capacity(m);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(leaves)) {
        sizes.push(c - prev);
        prev = c;
    }
    Blueprint::Chain(sizes.into_iter().map(|s| random_node(rng, s)).collect())
}

/// How [`gen_random_cyclecut`] assigns costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostMode {
    Unit,
    /// `p/q` with `p` in `1..=9`, `q` in `1..=4`, drawn from the seeded stream.
    RandomRational,
}

/// Attachment points of a realized node: index 0 sits at the first end of
/// its chain, index 1 at the last end.
struct Slots {
    left: [usize; 2],
    right: [usize; 2],
}

fn realize<R: Rng>(
    node: &Blueprint,
    next: &mut usize,
    pairs: &mut Vec<(usize, usize)>,
    rng: &mut R,
) -> Slots {
    match node {
        Blueprint::Leaf => {
            let v = *next;
            *next += 1;
            Slots {
                left: [v, v],
                right: [v, v],
            }
        }
        Blueprint::Chain(children) => {
            let slots: Vec<Slots> = children
                .iter()
                .map(|c| realize(c, next, pairs, rng))
                .collect();
            for w in slots.windows(2) {
                let (a, b) = (&w[0], &w[1]);
                if rng.gen_bool(0.5) {
                    pairs.push((a.right[0], b.left[0]));
                    pairs.push((a.right[1], b.left[1]));
                } else {
                    pairs.push((a.right[0], b.left[1]));
                    pairs.push((a.right[1], b.left[0]));
                }
            }
            let first = slots.first().expect("chain has children").left;
            let last = slots.last().expect("chain has children").right;
            let s = usize::from(rng.gen_bool(0.5));
            let t = usize::from(rng.gen_bool(0.5));
            Slots {
                left: [first[s], last[t]],
                right: [first[1 - s], last[1 - t]],
            }
        }
    }
}

/// Realizes `blueprint` as a 4-regular cycle-cut instance. Vertex 0 is a
/// fresh root attached to the four outward slots of the top-level chain;
/// leaves are numbered from 1 in depth-first order.
pub fn gen_random_cyclecut(blueprint: &Blueprint, seed: u64, costs: CostMode) -> Result<Instance> {
    blueprint.validate()?;
    if matches!(blueprint, Blueprint::Leaf) {
        return Err(Error::BlueprintInvalid("top level must be a chain".into()));
    }
    let n = blueprint.leaf_count() + 1;
    if n < 4 {
        return Err(Error::BlueprintInvalid(format!(
            "{n} vertices including the root (need at least 4)"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    let mut next = 1;
    let Blueprint::Chain(children) = blueprint else {
        unreachable!()
    };
    let slots: Vec<Slots> = children
        .iter()
        .map(|c| realize(c, &mut next, &mut pairs, &mut rng))
        .collect();
    for w in slots.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if rng.gen_bool(0.5) {
            pairs.push((a.right[0], b.left[0]));
            pairs.push((a.right[1], b.left[1]));
        } else {
            pairs.push((a.right[0], b.left[1]));
            pairs.push((a.right[1], b.left[0]));
        }
    }
    let first = slots.first().expect("non-empty").left;
    let last = slots.last().expect("non-empty").right;
    for v in first.into_iter().chain(last) {
        pairs.push((0, v));
    }

    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (u, v) in pairs {
        *counts.entry((u.min(v), u.max(v))).or_default() += 1;
    }
    let mut edges = Vec::with_capacity(counts.len());
    for ((u, v), c) in counts {
        let x = match c {
            1 => LpValue::Half,
            2 => LpValue::One,
            _ => {
                return Err(Error::BlueprintInvalid(format!(
                    "{c} parallel edges between {u} and {v}"
                )));
            }
        };
        let cost = match costs {
            CostMode::Unit => rational::one(),
            CostMode::RandomRational => rational::ratio(rng.gen_range(1..=9), rng.gen_range(1..=4)),
        };
        edges.push(SupportEdge { u, v, x, cost });
    }
    Instance::new(n, Some(0), edges)
}
