use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{Pipeline, RngChooser};
use crate::chain::{State, Variant};
use crate::embedding::Twist;
use crate::error::Result;
use crate::multigraph::{euler_circuit, is_connected_spanning};
use crate::rational::{self, round12};

const CHUNK: usize = 1024;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeUsage {
    pub id: usize,
    pub u: usize,
    pub v: usize,
    pub expected: String,
    pub mean: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostSummary {
    pub mean: f64,
    pub std_error: f64,
    pub expected: String,
    pub lp_value: String,
    /// `4/3` times the LP value.
    pub bound: String,
    /// `(mean - expected) / std_error`.
    pub z_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutFrequencies {
    pub node: usize,
    pub k: usize,
    pub twist: Twist,
    pub expected: [String; 4],
    pub empirical: [f64; 4],
    /// Share of variant A within each state (NaN-free: 0 if never seen).
    pub variant_a_share: [f64; 4],
    pub max_abs_deviation: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Violations {
    pub parity: usize,
    pub connectivity: usize,
    pub euler: usize,
}

impl Violations {
    pub fn total(&self) -> usize {
        self.parity + self.connectivity + self.euler
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UsageReport {
    pub schema_version: String,
    pub samples: usize,
    pub seed: u64,
    pub root: usize,
    pub edges: Vec<EdgeUsage>,
    pub max_edge_deviation: f64,
    pub cost: CostSummary,
    pub cuts: Vec<CutFrequencies>,
    pub violations: Violations,
}

struct Draw {
    multiplicities: Vec<u8>,
    cost: f64,
    states: Vec<Option<(State, Variant)>>,
    parity_ok: bool,
    connected: bool,
    euler_ok: bool,
}

fn draw(p: &Pipeline, seed: u64, index: u64, costs: &[f64]) -> Result<Draw> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let outcome = p.sample_with(&mut RngChooser { rng })?;
    let g = p.graph();
    let m = &outcome.multiplicities;
    Ok(Draw {
        cost: m
            .as_slice()
            .iter()
            .zip(costs)
            .map(|(&x, c)| x as f64 * c)
            .sum(),
        parity_ok: m.all_degrees_even(g),
        connected: is_connected_spanning(g, m),
        euler_ok: euler_circuit(g, m).is_ok(),
        multiplicities: m.as_slice().to_vec(),
        states: outcome.states,
    })
}

/// Monte Carlo summary over `n` samples. Sample `i` uses the ChaCha stream
/// `i` of `seed`, so results do not depend on `jobs`.
pub fn usage_stats(p: &Pipeline, n: usize, seed: u64, jobs: Option<usize>) -> Result<UsageReport> {
    let run = || collect(p, n, seed);
    match jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
        {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        },
        None => run(),
    }
}

fn collect(p: &Pipeline, n: usize, seed: u64) -> Result<UsageReport> {
    let g = p.graph();
    let h = &p.hierarchy;
    let m = g.edge_count();
    let costs: Vec<f64> = g
        .edges()
        .iter()
        .map(|e| rational::to_f64(&e.cost))
        .collect();

    let mut edge_sum = vec![0u64; m];
    let mut state_count = vec![[0u64; 4]; h.len()];
    let mut variant_a = vec![[0u64; 4]; h.len()];
    let (mut cost_sum, mut cost_sq) = (0.0f64, 0.0f64);
    let mut violations = Violations::default();

    let mut start = 0;
    while start < n {
        let end = (start + CHUNK).min(n);
        let draws: Vec<Draw> = (start..end)
            .into_par_iter()
            .map(|i| draw(p, seed, i as u64, &costs))
            .collect::<Result<_>>()?;
        for d in draws {
            for (s, &x) in edge_sum.iter_mut().zip(&d.multiplicities) {
                *s += x as u64;
            }
            cost_sum += d.cost;
            cost_sq += d.cost * d.cost;
            violations.parity += usize::from(!d.parity_ok);
            violations.connectivity += usize::from(!d.connected);
            violations.euler += usize::from(!d.euler_ok);
            for (node, st) in d.states.iter().enumerate() {
                if let Some((s, v)) = st {
                    state_count[node][s.index()] += 1;
                    if *v == Variant::A {
                        variant_a[node][s.index()] += 1;
                    }
                }
            }
        }
        start = end;
    }

    let nf = n as f64;
    let expected = p.expected_usage();
    let edges: Vec<EdgeUsage> = g
        .edges()
        .iter()
        .map(|e| {
            let mean = edge_sum[e.id] as f64 / nf;
            EdgeUsage {
                id: e.id,
                u: e.u,
                v: e.v,
                expected: rational::format(&expected[e.id]),
                mean: round12(mean),
                deviation: round12(mean - rational::to_f64(&expected[e.id])),
            }
        })
        .collect();
    let max_edge_deviation = edges.iter().map(|e| e.deviation.abs()).fold(0.0, f64::max);

    let mean = cost_sum / nf;
    let var = if n > 1 {
        ((cost_sq - nf * mean * mean) / (nf - 1.0)).max(0.0)
    } else {
        0.0
    };
    let std_error = (var / nf).sqrt();
    let exp_cost = p.expected_cost();
    let lp = crate::instance::lp_value(&p.instance);
    let diff = mean - rational::to_f64(&exp_cost);
    let z_score = if std_error > 0.0 {
        diff / std_error
    } else if diff.abs() < 1e-9 {
        0.0
    } else {
        f64::INFINITY
    };
    let cost = CostSummary {
        mean: round12(mean),
        std_error: round12(std_error),
        expected: rational::format(&exp_cost),
        bound: rational::format(&(&lp * rational::ratio(4, 3))),
        lp_value: rational::format(&lp),
        z_score: round12(z_score),
    };

    let cuts = h
        .composite_nodes()
        .map(|node| {
            let info = p.plan.get(node.id).expect("planned");
            let counts = state_count[node.id];
            let empirical: [f64; 4] = counts.map(|c| round12(c as f64 / nf));
            let variant_a_share: [f64; 4] = std::array::from_fn(|s| {
                if counts[s] == 0 {
                    0.0
                } else {
                    round12(variant_a[node.id][s] as f64 / counts[s] as f64)
                }
            });
            let max_abs_deviation = (0..4)
                .map(|s| (empirical[s] - rational::to_f64(&info.distribution.0[s])).abs())
                .fold(0.0, f64::max);
            CutFrequencies {
                node: node.id,
                k: node.children.len(),
                twist: info.twist,
                expected: info.distribution.to_strings(),
                empirical,
                variant_a_share,
                max_abs_deviation: round12(max_abs_deviation),
            }
        })
        .collect();

    Ok(UsageReport {
        schema_version: crate::REPORT_SCHEMA_VERSION.to_string(),
        samples: n,
        seed,
        root: h.root_vertex,
        edges,
        max_edge_deviation,
        cost,
        cuts,
        violations,
    })
}
