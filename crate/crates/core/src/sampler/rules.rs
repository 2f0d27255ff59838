//! The eight rules for connecting the children of a cycle cut.
//!
//! Pairs `P_1..P_{k-1}` sit between consecutive children; the cut's own
//! boundary acts as `P_0 = (UL, DL)` on the left and `P_k = (UR, DR)` on the
//! right. A child's pattern as seen from its parent is the parity of its
//! left pair together with its right pair: one odd edge on each side on
//! opposite rows is state 1, a fully odd side facing an even side is
//! state 2, one odd edge on each side on the same row is state 3, and all or
//! nothing odd is state 4.

use serde::Serialize;

use super::Chooser;
use crate::chain::State;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairAction {
    /// Top edge once, bottom edge unused.
    Top,
    /// Bottom edge once, top edge unused.
    Bottom,
    /// Both edges once.
    Both,
    /// One of the two edges, chosen uniformly, twice.
    DoubleOne,
}

fn single(top: bool) -> PairAction {
    if top {
        PairAction::Top
    } else {
        PairAction::Bottom
    }
}

fn full(odd: bool) -> PairAction {
    if odd {
        PairAction::Both
    } else {
        PairAction::DoubleOne
    }
}

/// Actions for `P_1..P_{k-1}`. `left` and `right` are the odd flags
/// `(top, bottom)` of `P_0` and `P_k`.
pub(crate) fn pair_actions<C: Chooser>(
    state: State,
    k: usize,
    alpha: &Rational,
    left: [bool; 2],
    right: [bool; 2],
    chooser: &mut C,
) -> Vec<PairAction> {
    let pairs = 1..k;
    // for states 1 and 2 exactly one edge per side is odd
    let left_top = left[0];
    let right_top = right[0];
    let left_full = left[0];
    let right_full = right[0];
    let even = k.is_multiple_of(2);
    match (state, even) {
        (State::S1, true) => pairs.map(|_| single(chooser.uniform(2) == 0)).collect(),
        (State::S2, true) => {
            if chooser.bernoulli(alpha) {
                pairs.map(|j| single(left_top ^ (j % 2 == 1))).collect()
            } else {
                pairs.map(|_| single(left_top)).collect()
            }
        }
        (State::S3, true) => {
            let half = rational::half();
            pairs.map(|_| full(chooser.bernoulli(&half))).collect()
        }
        (State::S4, true) => {
            if chooser.bernoulli(alpha) {
                pairs.map(|j| full(left_full ^ (j % 2 == 1))).collect()
            } else {
                pairs.map(|_| full(left_full)).collect()
            }
        }
        (State::S1, false) => {
            if chooser.bernoulli(alpha) {
                pairs.map(|j| single(left_top ^ (j % 2 == 1))).collect()
            } else {
                let i = chooser.uniform(k) + 1;
                pairs
                    .map(|j| single(if j < i { left_top } else { right_top }))
                    .collect()
            }
        }
        (State::S2, false) => {
            if chooser.bernoulli(alpha) {
                let i = chooser.uniform(k) + 1;
                pairs
                    .map(|j| {
                        if j < i {
                            single(left_top ^ (j % 2 == 1))
                        } else {
                            single(right_top ^ ((k - j) % 2 == 1))
                        }
                    })
                    .collect()
            } else {
                pairs.map(|_| single(left_top)).collect()
            }
        }
        (State::S3, false) => {
            if chooser.bernoulli(alpha) {
                pairs.map(|j| full(left_full ^ (j % 2 == 1))).collect()
            } else {
                let i = chooser.uniform(k) + 1;
                pairs.map(|j| full((j < i) == left_full)).collect()
            }
        }
        (State::S4, false) => {
            if chooser.bernoulli(alpha) {
                let i = chooser.uniform(k) + 1;
                pairs
                    .map(|j| {
                        if j < i {
                            full(left_full ^ (j % 2 == 1))
                        } else {
                            full(right_full ^ ((k - j) % 2 == 1))
                        }
                    })
                    .collect()
            } else {
                pairs.map(|_| full(left_full)).collect()
            }
        }
    }
}
