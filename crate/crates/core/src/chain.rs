//! Pattern states and the two Markov chains acting on them.
//!
//! A cut's boundary pattern is the set of its four boundary edges used an
//! odd number of times. In frame roles `UL, DL, UR, DR` the eight patterns
//! fall into four states of two variants each:
//!
//! | state | variant A | variant B |
//! |-------|-----------|-----------|
//! | S1    | UL, DR    | DL, UR    |
//! | S2    | UL, UR    | DL, DR    |
//! | S3    | UL, DL    | UR, DR    |
//! | S4    | all four  | none      |
//!
//! Everything here is exact rational arithmetic.

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum State {
    S1,
    S2,
    S3,
    S4,
}

impl State {
    pub const ALL: [State; 4] = [State::S1, State::S2, State::S3, State::S4];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Variant {
    A,
    B,
}

/// Odd roles of a pattern, in order `UL, DL, UR, DR`.
pub fn pattern_of(state: State, variant: Variant) -> [bool; 4] {
    use {State::*, Variant::*};
    match (state, variant) {
        (S1, A) => [true, false, false, true],
        (S1, B) => [false, true, true, false],
        (S2, A) => [true, false, true, false],
        (S2, B) => [false, true, false, true],
        (S3, A) => [true, true, false, false],
        (S3, B) => [false, false, true, true],
        (S4, A) => [true; 4],
        (S4, B) => [false; 4],
    }
}

/// State and variant of a parity pattern over `UL, DL, UR, DR`.
pub fn classify_pattern(parities: [bool; 4]) -> Result<(State, Variant)> {
    for s in State::ALL {
        for v in [Variant::A, Variant::B] {
            if pattern_of(s, v) == parities {
                return Ok((s, v));
            }
        }
    }
    Err(Error::ParityViolation)
}

/// Probability vector over the four states.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateDistribution(pub [Rational; 4]);

impl StateDistribution {
    /// Validates nonnegativity and the unit sum.
    pub fn new(p: [Rational; 4]) -> Result<Self> {
        let d = StateDistribution(p);
        if d.0.iter().any(|x| x < &Rational::zero()) || d.sum() != Rational::one() {
            return Err(Error::InvalidDistribution(d.to_string()));
        }
        Ok(d)
    }

    pub fn from_ratios(p: [(i64, i64); 4]) -> Result<Self> {
        Self::new(p.map(|(a, b)| rational::ratio(a, b)))
    }

    /// Parses four comma-separated rationals such as `1/3,1/3,1/3,0`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<Rational> = text
            .split(',')
            .map(|s| rational::parse(s.trim()))
            .collect::<Result<_>>()?;
        let arr: [Rational; 4] = parts.try_into().map_err(|v: Vec<Rational>| {
            Error::Parse(format!("expected 4 entries, got {}", v.len()))
        })?;
        Self::new(arr)
    }

    /// Default root distribution `(1/3, 1/3, 1/3, 0)`, a vertex of the region.
    pub fn default_root() -> Self {
        Self::from_ratios([(1, 3), (1, 3), (1, 3), (0, 1)]).unwrap()
    }

    pub fn get(&self, s: State) -> &Rational {
        &self.0[s.index()]
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().sum()
    }

    pub fn to_strings(&self) -> [String; 4] {
        self.0.clone().map(|x| rational::format(&x))
    }

    /// Expected use of each edge joining two children of a cut in this
    /// distribution: `1 - (p1 + p2) / 2`.
    pub fn edge_usage(&self) -> Rational {
        Rational::one() - (&self.0[0] + &self.0[1]) / rational::int(2)
    }
}

impl std::fmt::Display for StateDistribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_strings().join(", "))
    }
}

impl Serialize for StateDistribution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

fn two_thirds() -> Rational {
    rational::ratio(2, 3)
}

fn third() -> Rational {
    rational::ratio(1, 3)
}

/// Membership in the feasible region: `p1 + p2 = 2/3` and `p2 + p4 >= 1/3`.
pub fn region_contains(p: &StateDistribution) -> bool {
    let [p1, p2, _, p4] = &p.0;
    p1 + p2 == two_thirds() && p2 + p4 >= third()
}

/// The four vertices of the feasible region.
pub fn region_vertices() -> [StateDistribution; 4] {
    [
        StateDistribution::from_ratios([(1, 3), (1, 3), (1, 3), (0, 1)]).unwrap(),
        StateDistribution::from_ratios([(0, 1), (2, 3), (1, 3), (0, 1)]).unwrap(),
        StateDistribution::from_ratios([(0, 1), (2, 3), (0, 1), (1, 3)]).unwrap(),
        StateDistribution::from_ratios([(2, 3), (0, 1), (0, 1), (1, 3)]).unwrap(),
    ]
}

/// Random rational point of the region: a convex combination of its
/// vertices with integer weights in `0..=20`.
pub fn random_region_point<R: Rng + ?Sized>(rng: &mut R) -> StateDistribution {
    let verts = region_vertices();
    loop {
        let w: [i64; 4] = std::array::from_fn(|_| rng.gen_range(0..=20));
        let total: i64 = w.iter().sum();
        if total == 0 {
            continue;
        }
        let p: [Rational; 4] = std::array::from_fn(|s| {
            (0..4)
                .map(|i| &verts[i].0[s] * rational::ratio(w[i], total))
                .sum::<Rational>()
        });
        return StateDistribution::new(p).expect("convex combination");
    }
}

fn check_range(name: &'static str, v: &Rational, lo: &Rational, hi: &Rational) -> Result<()> {
    if v < lo || v > hi {
        return Err(Error::ParamOutOfRange {
            name,
            value: rational::format(v),
            lo: rational::format(lo),
            hi: rational::format(hi),
        });
    }
    Ok(())
}

/// One step of the chain for cuts with an even number of children.
pub fn even_step(p: &StateDistribution, z: &Rational, w: &Rational) -> Result<StateDistribution> {
    let (zero, one) = (Rational::zero(), Rational::one());
    check_range("z", z, &zero, &one)?;
    check_range("w", w, &zero, &one)?;
    let [p1, p2, p3, p4] = &p.0;
    let half = rational::half();
    Ok(StateDistribution([
        p1 * &half + z * p2,
        p3 * &half + w * p4,
        p1 * &half + (&one - z) * p2,
        p3 * &half + (&one - w) * p4,
    ]))
}

/// One step of the chain for cuts with an odd number `k >= 3` of children.
pub fn odd_step(
    p: &StateDistribution,
    x: &Rational,
    y: &Rational,
    z: &Rational,
    w: &Rational,
    k: usize,
) -> Result<StateDistribution> {
    if k < 3 || k.is_multiple_of(2) {
        return Err(Error::ParamOutOfRange {
            name: "k",
            value: k.to_string(),
            lo: "3".into(),
            hi: "odd".into(),
        });
    }
    let one = Rational::one();
    let inv_k = rational::ratio(1, k as i64);
    let top = &one - &inv_k;
    check_range("x", x, &inv_k, &one)?;
    check_range("y", y, &inv_k, &one)?;
    check_range("z", z, &Rational::zero(), &top)?;
    check_range("w", w, &Rational::zero(), &top)?;
    let [p1, p2, p3, p4] = &p.0;
    Ok(StateDistribution([
        x * p1 + z * p2,
        y * p3 + w * p4,
        (&one - x) * p1 + (&one - z) * p2,
        (&one - y) * p3 + (&one - w) * p4,
    ]))
}

/// What a twisted child sees: states 1 and 2 trade places.
pub fn swap12(p: &StateDistribution) -> StateDistribution {
    let [p1, p2, p3, p4] = p.0.clone();
    StateDistribution([p2, p1, p3, p4])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainParams {
    Even {
        z: Rational,
        w: Rational,
    },
    Odd {
        x: Rational,
        y: Rational,
        z: Rational,
        w: Rational,
        k: usize,
    },
}

impl ChainParams {
    /// Image of `p` under the chain these parameters belong to.
    pub fn step(&self, p: &StateDistribution) -> Result<StateDistribution> {
        match self {
            ChainParams::Even { z, w } => even_step(p, z, w),
            ChainParams::Odd { x, y, z, w, k } => odd_step(p, x, y, z, w, *k),
        }
    }

    /// Named parameters as `(name, "p/q")` pairs.
    pub fn named(&self) -> Vec<(&'static str, String)> {
        let f = rational::format;
        match self {
            ChainParams::Even { z, w } => vec![("z", f(z)), ("w", f(w))],
            ChainParams::Odd { x, y, z, w, .. } => {
                vec![("x", f(x)), ("y", f(y)), ("z", f(z)), ("w", f(w))]
            }
        }
    }
}

/// Chain parameters for a cut together with the branch probability `α` of
/// the filling rule for each incoming state.
///
/// For odd cuts `α` is the probability of the branch that sends every child
/// (or every child but one) the same way. For even cuts `α_S2 = z` and
/// `α_S4 = w`; the S1 and S3 rules flip a fair coin per pair, recorded as
/// `α = 1/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectedParams {
    pub params: ChainParams,
    pub alpha: [Rational; 4],
}

/// Parameters that keep the image of `p` inside the region.
pub fn select_params(p: &StateDistribution, k: usize) -> Result<SelectedParams> {
    if !region_contains(p) {
        return Err(Error::NotInRegion(p.to_string()));
    }
    if k < 2 {
        return Err(Error::ParamOutOfRange {
            name: "k",
            value: k.to_string(),
            lo: "2".into(),
            hi: "inf".into(),
        });
    }
    let one = Rational::one();
    let selected = if k.is_multiple_of(2) {
        let [p1, p2, p3, p4] = &p.0;
        let z = if p2.is_zero() {
            Rational::zero()
        } else {
            (two_thirds() - p4 - (p1 + p3) / rational::int(2)) / p2
        };
        let alpha = [rational::half(), z.clone(), rational::half(), one.clone()];
        SelectedParams {
            params: ChainParams::Even { z, w: one.clone() },
            alpha,
        }
    } else {
        let t = two_thirds();
        let inv_k = rational::ratio(1, k as i64);
        let scale = rational::ratio(k as i64, k as i64 - 1);
        let loop_alpha = (&t - &inv_k) * &scale;
        let move_alpha = &t * &scale;
        SelectedParams {
            params: ChainParams::Odd {
                x: t.clone(),
                y: t.clone(),
                z: t.clone(),
                w: t,
                k,
            },
            alpha: [
                loop_alpha.clone(),
                move_alpha.clone(),
                loop_alpha,
                move_alpha,
            ],
        }
    };
    for (i, a) in selected.alpha.iter().enumerate() {
        let name = ["alpha_s1", "alpha_s2", "alpha_s3", "alpha_s4"][i];
        check_range(name, a, &Rational::zero(), &one)?;
    }
    Ok(selected)
}

/// Outcome of [`check_necessity`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NecessityCertificate {
    InRegion,
    /// `p1 + p2 > 2/3`: even after the best two even steps the first two
    /// coordinates sum to `max_sum < 2/3`, attained at corner
    /// `(z, w, z', w')`.
    TwoStep {
        max_sum: Rational,
        corner: [Rational; 4],
    },
    /// `p1 + p2 = 2/3` but `p2 + p4 < 1/3`: the best single even step
    /// reaches only `max_sum < 2/3`, at corner `(z, w)`.
    OneStep {
        max_sum: Rational,
        corner: [Rational; 2],
    },
    /// `p1 + p2 < 2/3`: edges inside the cut are used `usage > 2/3` of the
    /// time already.
    ExcessUsage {
        usage: Rational,
    },
}

impl NecessityCertificate {
    pub fn is_infeasible(&self) -> bool {
        !matches!(self, NecessityCertificate::InRegion)
    }
}

fn first_two(p: &StateDistribution) -> Rational {
    &p.0[0] + &p.0[1]
}

/// Certifies why a distribution outside the region cannot sustain the
/// 2/3 edge usage, by exact corner enumeration of the (multilinear) even
/// chain objective.
pub fn check_necessity(p: &StateDistribution) -> Result<NecessityCertificate> {
    let p = StateDistribution::new(p.0.clone())?;
    let s = first_two(&p);
    let t = two_thirds();
    let corners = [Rational::zero(), Rational::one()];
    if s > t {
        let mut best: Option<(Rational, [Rational; 4])> = None;
        for z in &corners {
            for w in &corners {
                let q = even_step(&p, z, w)?;
                for z2 in &corners {
                    for w2 in &corners {
                        let v = first_two(&even_step(&q, z2, w2)?);
                        if best.as_ref().is_none_or(|(b, _)| v > *b) {
                            best = Some((v, [z.clone(), w.clone(), z2.clone(), w2.clone()]));
                        }
                    }
                }
            }
        }
        let (max_sum, corner) = best.unwrap();
        debug_assert!(max_sum < t);
        Ok(NecessityCertificate::TwoStep { max_sum, corner })
    } else if s == t {
        if region_contains(&p) {
            return Ok(NecessityCertificate::InRegion);
        }
        let mut best: Option<(Rational, [Rational; 2])> = None;
        for z in &corners {
            for w in &corners {
                let v = first_two(&even_step(&p, z, w)?);
                if best.as_ref().is_none_or(|(b, _)| v > *b) {
                    best = Some((v, [z.clone(), w.clone()]));
                }
            }
        }
        let (max_sum, corner) = best.unwrap();
        debug_assert!(max_sum < t);
        Ok(NecessityCertificate::OneStep { max_sum, corner })
    } else {
        Ok(NecessityCertificate::ExcessUsage {
            usage: p.edge_usage(),
        })
    }
}
