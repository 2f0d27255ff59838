//! Half-integral Subtour-LP points: loading, validation, the support
//! multigraph, LP value, benchmark generators and an exact TSP oracle.

pub(crate) mod generate;
mod held_karp;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multigraph::{self, Multigraph};
use crate::rational::{self, Rational};

pub use generate::{gen_figure1, gen_random_cyclecut, Blueprint, CostMode, Figure1Costs};
pub use held_karp::{held_karp_opt, shortest_path_metric, Metric, HELD_KARP_MAX_N};

/// LP value of a support edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LpValue {
    Half,
    One,
}

impl LpValue {
    pub fn as_rational(self) -> Rational {
        match self {
            LpValue::Half => rational::half(),
            LpValue::One => rational::one(),
        }
    }

    /// Number of parallel copies in the support multigraph.
    pub fn copies(self) -> usize {
        match self {
            LpValue::Half => 1,
            LpValue::One => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportEdge {
    pub u: usize,
    pub v: usize,
    pub x: LpValue,
    pub cost: Rational,
}

/// A validated half-integral LP point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    root: Option<usize>,
    edges: Vec<SupportEdge>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceJson {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    root: Option<usize>,
    edges: Vec<EdgeJson>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeJson {
    u: usize,
    v: usize,
    x: String,
    cost: String,
}

impl Instance {
    /// Validates and builds an instance. Checks, in order: LP values, cost
    /// signs, endpoints, duplicates, size, degree constraints and subtour
    /// constraints.
    pub fn new(n: usize, root: Option<usize>, edges: Vec<SupportEdge>) -> Result<Self> {
        let inst = Self { n, root, edges };
        inst.validate()?;
        Ok(inst)
    }

    fn from_raw(
        n: usize,
        root: Option<usize>,
        raw: Vec<(usize, usize, Rational, Rational)>,
    ) -> Result<Self> {
        let mut edges = Vec::with_capacity(raw.len());
        for (i, (u, v, x, cost)) in raw.into_iter().enumerate() {
            let x = if x == rational::half() {
                LpValue::Half
            } else if x == rational::one() {
                LpValue::One
            } else {
                return Err(Error::HalfIntegralityViolation {
                    edge: i,
                    value: rational::format(&x),
                });
            };
            edges.push(SupportEdge { u, v, x, cost });
        }
        Self::new(n, root, edges)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        for (i, e) in self.edges.iter().enumerate() {
            if !rational::is_nonnegative(&e.cost) {
                return Err(Error::NegativeCost { edge: i });
            }
            for w in [e.u, e.v] {
                if w >= n {
                    return Err(Error::EndpointOutOfRange {
                        edge: i,
                        vertex: w,
                        n,
                    });
                }
            }
            if e.u == e.v {
                return Err(Error::SelfLoop {
                    edge: i,
                    vertex: e.u,
                });
            }
        }
        if let Some(r) = self.root {
            if r >= n {
                return Err(Error::EndpointOutOfRange {
                    edge: usize::MAX,
                    vertex: r,
                    n,
                });
            }
        }
        let mut seen = std::collections::HashSet::new();
        for e in &self.edges {
            let key = (e.u.min(e.v), e.u.max(e.v));
            if !seen.insert(key) {
                return Err(Error::DuplicateEdge { u: key.0, v: key.1 });
            }
        }
        if n < 4 {
            return Err(Error::DegenerateInstance { n });
        }
        let mut sums = vec![rational::zero(); n];
        for e in &self.edges {
            let x = e.x.as_rational();
            sums[e.u] += &x;
            sums[e.v] += &x;
        }
        let two = rational::int(2);
        if let Some((v, s)) = sums.iter().enumerate().find(|(_, s)| **s != two) {
            return Err(Error::DegreeViolation {
                vertex: v,
                sum: rational::format(s),
            });
        }
        let g = self.support_graph_unchecked();
        match multigraph::global_min_cut_value(&g) {
            Ok(c) if c >= 4 => Ok(()),
            Ok(c) => Err(Error::SubtourViolation { cut: c }),
            Err(Error::Disconnected) => Err(Error::SubtourViolation { cut: 0 }),
            Err(e) => Err(e),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    /// The root vertex, defaulting to 0.
    pub fn root_or_default(&self) -> usize {
        self.root.unwrap_or(0)
    }

    pub fn with_root(mut self, root: usize) -> Result<Self> {
        if root >= self.n {
            return Err(Error::EndpointOutOfRange {
                edge: usize::MAX,
                vertex: root,
                n: self.n,
            });
        }
        self.root = Some(root);
        Ok(self)
    }

    pub fn edges(&self) -> &[SupportEdge] {
        &self.edges
    }

    fn support_graph_unchecked(&self) -> Multigraph {
        let list = self
            .edges
            .iter()
            .flat_map(|e| std::iter::repeat_n((e.u, e.v, e.cost.clone()), e.x.copies()));
        Multigraph::new(self.n, list).expect("endpoints validated")
    }

    pub fn to_json(&self) -> String {
        let doc = InstanceJson {
            n: self.n,
            root: self.root,
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    u: e.u,
                    v: e.v,
                    x: rational::format(&e.x.as_rational()),
                    cost: rational::format(&e.cost),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("instance serializes")
    }
}

/// Parses and validates the JSON instance format.
pub fn load_instance(text: &str) -> Result<Instance> {
    let doc: InstanceJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut raw = Vec::with_capacity(doc.edges.len());
    for e in doc.edges {
        raw.push((e.u, e.v, rational::parse(&e.x)?, rational::parse(&e.cost)?));
    }
    Instance::from_raw(doc.n, doc.root, raw)
}

/// Support multigraph together with the ids of each support edge's copies.
#[derive(Debug, Clone)]
pub struct Support {
    pub graph: Multigraph,
    /// `copies[i]` lists the multigraph edge ids of support edge `i`.
    pub copies: Vec<Vec<usize>>,
}

/// One multigraph edge per `x = 1/2` support edge and two parallel edges per
/// `x = 1` support edge, ids assigned in support-list order.
pub fn support_multigraph(inst: &Instance) -> Support {
    let graph = inst.support_graph_unchecked();
    let mut copies = Vec::with_capacity(inst.edges.len());
    let mut next = 0;
    for e in &inst.edges {
        copies.push((next..next + e.x.copies()).collect());
        next += e.x.copies();
    }
    Support { graph, copies }
}

/// `sum_e c_e x_e`.
pub fn lp_value(inst: &Instance) -> Rational {
    inst.edges.iter().map(|e| &e.cost * e.x.as_rational()).sum()
}
