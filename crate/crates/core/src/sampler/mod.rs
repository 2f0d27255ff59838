//! Top-down sampling of connected Eulerian multigraphs.
//!
//! Every cycle cut receives a state distribution from its parent's chain
//! step. A sample draws the root pattern, then walks the hierarchy top-down:
//! each cut reads its incoming pattern off the multiplicities already fixed
//! on its boundary and fills the pairs between its children according to
//! the rule for that state, which in turn fixes the children's patterns.

mod exact;
mod rules;
mod stats;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chain::{
    self, classify_pattern, select_params, SelectedParams, State, StateDistribution, Variant,
};
use crate::cuts::{build_hierarchy, Hierarchy};
use crate::embedding::{assign_frames, Frame, FrameOptions, Frames, Twist};
use crate::error::{Error, Result};
use crate::instance::{support_multigraph, Instance, Support};
use crate::multigraph::{euler_circuit, ClosedWalk, Multigraph, MultiplicityMap};
use crate::rational::{self, Rational};

pub use exact::{exact_outcome_distribution, Outcome, DEFAULT_OUTCOME_CAP};
pub use rules::PairAction;
pub use stats::{usage_stats, CostSummary, CutFrequencies, EdgeUsage, UsageReport, Violations};

/// Source of the random decisions made while sampling.
///
/// `choose` returns an index into `weights`, which are nonnegative and sum
/// to one. Implementations either draw at random or enumerate every branch.
pub trait Chooser {
    fn choose(&mut self, weights: &[Rational]) -> usize;

    fn bernoulli(&mut self, p: &Rational) -> bool {
        self.choose(&[p.clone(), Rational::one() - p]) == 0
    }

    fn uniform(&mut self, n: usize) -> usize {
        let w = rational::ratio(1, n as i64);
        self.choose(&vec![w; n])
    }
}

/// Draws from a seeded random generator. Rational weights are sampled
/// exactly whenever their common denominator fits in 64 bits.
pub struct RngChooser<R: Rng> {
    pub rng: R,
}

impl<R: Rng> Chooser for RngChooser<R> {
    fn choose(&mut self, weights: &[Rational]) -> usize {
        let denom = weights.iter().fold(BigInt::one(), |acc, w| {
            num_integer::lcm(acc, w.denom().clone())
        });
        if let Some(d) = denom.to_u64() {
            let mut draw = self.rng.gen_range(0..d);
            for (i, w) in weights.iter().enumerate() {
                let share = (w * Rational::from_integer(denom.clone()))
                    .to_integer()
                    .to_u64()
                    .unwrap_or(0);
                if draw < share {
                    return i;
                }
                draw -= share;
            }
        } else {
            let mut u: f64 = self.rng.gen();
            for (i, w) in weights.iter().enumerate() {
                let p = rational::to_f64(w);
                if u < p {
                    return i;
                }
                u -= p;
            }
        }
        weights.iter().rposition(|w| !w.is_zero()).unwrap_or(0)
    }
}

/// Boundary multiplicities of a cut in its own frame roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PatternAssignment {
    /// Edge ids in role order `UL, DL, UR, DR`.
    pub roles: [usize; 4],
    pub multiplicity: [u8; 4],
}

impl PatternAssignment {
    pub fn read(frame: &Frame, m: &MultiplicityMap) -> Self {
        let roles = frame.roles();
        PatternAssignment {
            roles,
            multiplicity: roles.map(|e| m.get(e)),
        }
    }

    pub fn parities(&self) -> [bool; 4] {
        self.multiplicity.map(|x| x == 1)
    }

    pub fn state(&self) -> Result<(State, Variant)> {
        classify_pattern(self.parities())
    }
}

/// Distribution and parameters of one cycle cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutInfo {
    /// Distribution over the cut's states in its own frame (already swapped
    /// for twisted cuts).
    pub distribution: StateDistribution,
    pub selected: SelectedParams,
    pub twist: Twist,
}

/// Per-cut distributions for a whole hierarchy, indexed by node id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutPlan {
    pub cuts: Vec<Option<CutInfo>>,
}

impl CutPlan {
    pub fn get(&self, node: usize) -> Option<&CutInfo> {
        self.cuts.get(node).and_then(Option::as_ref)
    }
}

/// Top-down propagation: the root cut gets `p_root`, every composite child
/// gets its parent's chain image, swapped when the child is twisted.
pub fn propagate_distributions(
    h: &Hierarchy,
    frames: &Frames,
    p_root: &StateDistribution,
) -> Result<CutPlan> {
    let degree = h.degree_cuts();
    if !degree.is_empty() {
        return Err(Error::DegreeCutPresent { nodes: degree });
    }
    let mut incoming: Vec<Option<StateDistribution>> = vec![None; h.len()];
    incoming[h.top()] = Some(p_root.clone());
    let mut cuts = vec![None; h.len()];
    for node in h.composite_nodes() {
        let frame = frames
            .get(node.id)
            .ok_or(Error::NotCycleCut { node: node.id })?;
        let p = incoming[node.id].take().expect("parent handled first");
        if !chain::region_contains(&p) {
            return Err(Error::RegionViolation { node: node.id });
        }
        let selected = select_params(&p, frame.k())?;
        let image = selected.params.step(&p)?;
        for &c in &frame.children {
            if let Some(child) = frames.get(c) {
                incoming[c] = Some(match child.twist {
                    Twist::Straight => image.clone(),
                    Twist::Twisted => chain::swap12(&image),
                });
            }
        }
        cuts[node.id] = Some(CutInfo {
            distribution: p,
            selected,
            twist: frame.twist,
        });
    }
    Ok(CutPlan { cuts })
}

/// Knobs for [`Pipeline::new`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineOptions {
    /// Root vertex; falls back to the instance's root, then vertex 0.
    pub root: Option<usize>,
    pub p_root: StateDistribution,
    pub frames: FrameOptions,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            root: None,
            p_root: StateDistribution::default_root(),
            frames: FrameOptions::default(),
        }
    }
}

/// Everything computed once per instance before sampling.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub instance: Instance,
    pub support: Support,
    pub hierarchy: Hierarchy,
    pub frames: Frames,
    pub plan: CutPlan,
    pub p_root: StateDistribution,
}

impl Pipeline {
    pub fn new(inst: &Instance, opts: &PipelineOptions) -> Result<Self> {
        if !opts.p_root.0[3].is_zero() {
            return Err(Error::RootDistributionUnsupported);
        }
        let root = opts.root.or(inst.root()).unwrap_or(0);
        let support = support_multigraph(inst);
        let hierarchy = build_hierarchy(&support.graph, root)?;
        let frames = assign_frames(&hierarchy, &support.graph, opts.frames)?;
        let plan = propagate_distributions(&hierarchy, &frames, &opts.p_root)?;
        Ok(Self {
            instance: inst.clone(),
            support,
            hierarchy,
            frames,
            plan,
            p_root: opts.p_root.clone(),
        })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.support.graph
    }

    /// Draws one multiplicity map, also reporting the state and variant
    /// seen at every cycle cut.
    pub fn sample_with<C: Chooser>(&self, chooser: &mut C) -> Result<SampleOutcome> {
        let g = self.graph();
        let h = &self.hierarchy;
        let mut m = MultiplicityMap::zeros(g.edge_count());
        let mut states = vec![None; h.len()];

        let top = self
            .frames
            .get(h.top())
            .ok_or(Error::NotCycleCut { node: h.top() })?;
        let s = State::from_index(chooser.choose(&self.p_root.0));
        let v = if chooser.uniform(2) == 0 {
            Variant::A
        } else {
            Variant::B
        };
        for (e, odd) in top.roles().into_iter().zip(chain::pattern_of(s, v)) {
            m.set(e, u8::from(odd));
        }
        for node in h.composite_nodes() {
            let frame = self
                .frames
                .get(node.id)
                .expect("every composite node is framed");
            let info = self
                .plan
                .get(node.id)
                .expect("every composite node is planned");
            let incoming = PatternAssignment::read(frame, &m);
            states[node.id] = Some(fill_cut(
                frame,
                &incoming,
                &info.selected.alpha,
                &mut m,
                chooser,
            )?);
        }
        Ok(SampleOutcome {
            multiplicities: m,
            states,
        })
    }

    /// Exact expected multiplicity of every edge.
    pub fn expected_usage(&self) -> Vec<Rational> {
        let mut usage = vec![Rational::zero(); self.graph().edge_count()];
        for node in self.hierarchy.composite_nodes() {
            let info = self.plan.get(node.id).expect("planned");
            let u = info.distribution.edge_usage();
            for &e in &node.internal {
                usage[e] = u.clone();
            }
        }
        let top = self.frames.get(self.hierarchy.top()).expect("root frame");
        for (role, &e) in top.roles().iter().enumerate() {
            let mut odd = Rational::zero();
            for s in State::ALL {
                for v in [Variant::A, Variant::B] {
                    if chain::pattern_of(s, v)[role] {
                        odd += self.p_root.get(s) * rational::half();
                    }
                }
            }
            usage[e] = odd;
        }
        usage
    }

    pub fn expected_cost(&self) -> Rational {
        self.expected_usage()
            .iter()
            .zip(self.graph().edges())
            .map(|(u, e)| u * &e.cost)
            .sum()
    }
}

/// Result of one draw.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleOutcome {
    pub multiplicities: MultiplicityMap,
    /// Incoming state and variant of every cycle cut, by node id.
    pub states: Vec<Option<(State, Variant)>>,
}

/// Fills the pairs of one cut given its incoming pattern; returns the state
/// and variant that pattern belongs to.
pub fn fill_cut<C: Chooser>(
    frame: &Frame,
    incoming: &PatternAssignment,
    alpha: &[Rational; 4],
    m: &mut MultiplicityMap,
    chooser: &mut C,
) -> Result<(State, Variant)> {
    if incoming.roles != frame.roles() {
        return Err(Error::FrameMismatch { node: frame.node });
    }
    let (state, variant) = incoming
        .state()
        .map_err(|_| Error::FrameMismatch { node: frame.node })?;
    let p = incoming.parities();
    let actions = rules::pair_actions(
        state,
        frame.k(),
        &alpha[state.index()],
        [p[0], p[1]],
        [p[2], p[3]],
        chooser,
    );
    for (pair, action) in frame.pairs.iter().zip(actions) {
        let (top, bottom) = match action {
            PairAction::Top => (1, 0),
            PairAction::Bottom => (0, 1),
            PairAction::Both => (1, 1),
            PairAction::DoubleOne => {
                if chooser.uniform(2) == 0 {
                    (2, 0)
                } else {
                    (0, 2)
                }
            }
        };
        m.set(pair.top, top);
        m.set(pair.bottom, bottom);
    }
    Ok((state, variant))
}

/// Incoming state and variant of every cycle cut under a fixed
/// multiplicity map.
pub fn cut_states(p: &Pipeline, m: &MultiplicityMap) -> Result<Vec<Option<(State, Variant)>>> {
    p.hierarchy
        .nodes
        .iter()
        .map(|n| {
            p.frames
                .get(n.id)
                .map(|f| PatternAssignment::read(f, m).state())
                .transpose()
        })
        .collect()
}

/// A sampled tour: multiplicities, an Eulerian circuit over them and its
/// cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TourSample {
    pub multiplicities: MultiplicityMap,
    pub walk: ClosedWalk,
    pub cost: Rational,
}

impl Pipeline {
    pub fn sample_tour(&self, seed: u64) -> Result<TourSample> {
        let mut chooser = RngChooser {
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        let outcome = self.sample_with(&mut chooser)?;
        let walk = euler_circuit(self.graph(), &outcome.multiplicities)?;
        let cost = outcome.multiplicities.cost(self.graph());
        Ok(TourSample {
            multiplicities: outcome.multiplicities,
            walk,
            cost,
        })
    }
}

/// One sampled Eulerian tour of a cycle-cut instance.
pub fn sample_tour(
    inst: &Instance,
    seed: u64,
    p_root: Option<&StateDistribution>,
) -> Result<TourSample> {
    let mut opts = PipelineOptions::default();
    if let Some(p) = p_root {
        opts.p_root = p.clone();
    }
    Pipeline::new(inst, &opts)?.sample_tour(seed)
}
