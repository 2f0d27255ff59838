use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{Chooser, Pipeline};
use crate::error::{Error, Result};
use crate::multigraph::MultiplicityMap;
use crate::rational::Rational;

pub const DEFAULT_OUTCOME_CAP: usize = 1 << 20;

/// A distinct multiplicity map and its exact probability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub multiplicities: MultiplicityMap,
    pub probability: Rational,
}

/// Replays a fixed prefix of branch indices and extends it with first
/// branches, recording how many live branches each decision had.
struct Replay {
    prefix: Vec<usize>,
    arity: Vec<usize>,
    depth: usize,
    probability: Rational,
}

impl Chooser for Replay {
    fn choose(&mut self, weights: &[Rational]) -> usize {
        let live: Vec<usize> = (0..weights.len())
            .filter(|&i| !weights[i].is_zero())
            .collect();
        if live.len() == 1 {
            return live[0];
        }
        if self.depth == self.prefix.len() {
            self.prefix.push(0);
        }
        if self.depth == self.arity.len() {
            self.arity.push(live.len());
        }
        let pick = live[self.prefix[self.depth]];
        self.depth += 1;
        self.probability *= &weights[pick];
        pick
    }
}

/// Every reachable multiplicity map with its exact probability, found by
/// running the sampler once per combination of random branches. Fails with
/// `TooLarge` past `cap` runs.
pub fn exact_outcome_distribution(p: &Pipeline, cap: usize) -> Result<Vec<Outcome>> {
    let mut merged: BTreeMap<MultiplicityMap, Rational> = BTreeMap::new();
    let mut prefix: Vec<usize> = Vec::new();
    let mut runs = 0usize;
    loop {
        runs += 1;
        if runs > cap {
            return Err(Error::TooLarge {
                what: "outcome enumeration",
                size: runs,
                limit: cap,
            });
        }
        let mut replay = Replay {
            prefix,
            arity: Vec::new(),
            depth: 0,
            probability: Rational::one(),
        };
        let outcome = p.sample_with(&mut replay)?;
        *merged
            .entry(outcome.multiplicities)
            .or_insert_with(Rational::zero) += &replay.probability;

        prefix = replay.prefix;
        let arity = replay.arity;
        prefix.truncate(arity.len());
        // advance the odometer from the deepest decision
        loop {
            match prefix.len() {
                0 => {
                    return Ok(merged
                        .into_iter()
                        .map(|(multiplicities, probability)| Outcome {
                            multiplicities,
                            probability,
                        })
                        .collect())
                }
                d => {
                    if prefix[d - 1] + 1 < arity[d - 1] {
                        prefix[d - 1] += 1;
                        break;
                    }
                    prefix.pop();
                }
            }
        }
    }
}
