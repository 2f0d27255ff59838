use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::Instance;
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const HELD_KARP_MAX_N: usize = 18;

/// How the support costs are completed to a full metric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Metric {
    /// Shortest-path closure over the support edges.
    ShortestPath,
    /// A full symmetric `n x n` cost matrix.
    Explicit(Vec<Vec<Rational>>),
}

/// All-pairs shortest paths over the support edges (Floyd–Warshall).
#[allow(clippy::needless_range_loop)]
pub fn shortest_path_metric(inst: &Instance) -> Result<Vec<Vec<Rational>>> {
    let n = inst.n();
    let mut dist: Vec<Vec<Option<Rational>>> = vec![vec![None; n]; n];
    for (v, row) in dist.iter_mut().enumerate() {
        row[v] = Some(Rational::from_integer(0.into()));
    }
    for e in inst.edges() {
        let better = match &dist[e.u][e.v] {
            Some(d) => e.cost < *d,
            None => true,
        };
        if better {
            dist[e.u][e.v] = Some(e.cost.clone());
            dist[e.v][e.u] = Some(e.cost.clone());
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(dik) = dist[i][k].clone() else {
                continue;
            };
            for j in 0..n {
                let Some(dkj) = &dist[k][j] else { continue };
                let via = &dik + dkj;
                if dist[i][j].as_ref().is_none_or(|d| via < *d) {
                    dist[i][j] = Some(via);
                }
            }
        }
    }
    dist.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|d| {
                    d.ok_or_else(|| Error::MetricUndefined("support graph is disconnected".into()))
                })
                .collect()
        })
        .collect()
}

/// Optimal Hamiltonian tour cost by bitmask dynamic programming.
pub fn held_karp_opt(inst: &Instance, metric: &Metric) -> Result<Rational> {
    let n = inst.n();
    if n > HELD_KARP_MAX_N {
        return Err(Error::TooLarge {
            what: "Held-Karp instance",
            size: n,
            limit: HELD_KARP_MAX_N,
        });
    }
    let costs = match metric {
        Metric::ShortestPath => shortest_path_metric(inst)?,
        Metric::Explicit(m) => {
            if m.len() != n || m.iter().any(|row| row.len() != n) {
                return Err(Error::MetricUndefined(format!("matrix is not {n} x {n}")));
            }
            m.clone()
        }
    };

    // scale to integers
    let mut denom = BigInt::one();
    for c in costs.iter().flatten() {
        denom = denom.lcm(c.denom());
    }
    let scale = Rational::from_integer(denom.clone());
    let mut w = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let scaled = (&costs[i][j] * &scale).to_integer();
            w[i][j] = scaled
                .to_u64()
                .filter(|&x| x < u64::MAX / (2 * n as u64 + 2))
                .ok_or_else(|| Error::MetricUndefined("costs too large or negative".into()))?;
        }
    }

    // vertex 0 is the start; masks range over vertices 1..n
    let m = n - 1;
    let full = (1usize << m) - 1;
    let mut dp = vec![u64::MAX; (1 << m) * m];
    for j in 0..m {
        dp[(1 << j) * m + j] = w[0][j + 1];
    }
    for mask in 1..=full {
        for j in 0..m {
            let cur = dp[mask * m + j];
            if cur == u64::MAX || mask >> j & 1 == 0 {
                continue;
            }
            let mut rest = full & !mask;
            while rest != 0 {
                let k = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let next = mask | 1 << k;
                let cand = cur + w[j + 1][k + 1];
                let slot = &mut dp[next * m + k];
                if cand < *slot {
                    *slot = cand;
                }
            }
        }
    }
    let best = (0..m)
        .map(|j| dp[full * m + j].saturating_add(w[j + 1][0]))
        .min()
        .expect("n >= 4");
    Ok(Rational::new(BigInt::from(best), denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{gen_figure1, load_instance, Figure1Costs};
    use crate::rational;

    #[test]
    fn four_cycle_tour() {
        let text = r#"{"n": 4, "edges": [
            {"u": 0, "v": 1, "x": "1", "cost": "1"},
            {"u": 1, "v": 2, "x": "1", "cost": "1"},
            {"u": 2, "v": 3, "x": "1", "cost": "1"},
            {"u": 3, "v": 0, "x": "1", "cost": "1"}]}"#;
        let inst = load_instance(text).unwrap();
        assert_eq!(
            held_karp_opt(&inst, &Metric::ShortestPath).unwrap(),
            rational::int(4)
        );
    }

    #[test]
    fn figure1_zero_tour() {
        // u1,u2,w2,w1,w3,u3 has cost 6 and no tour is shorter than n
        let inst = gen_figure1(0, Figure1Costs::Unit).unwrap();
        assert_eq!(
            held_karp_opt(&inst, &Metric::ShortestPath).unwrap(),
            rational::int(6)
        );
    }

    #[test]
    fn explicit_matrix_and_limits() {
        let inst = gen_figure1(0, Figure1Costs::Unit).unwrap();
        let bad = Metric::Explicit(vec![vec![rational::one(); 3]; 3]);
        assert!(matches!(
            held_karp_opt(&inst, &bad),
            Err(Error::MetricUndefined(_))
        ));
        let mut m = vec![vec![rational::ratio(1, 2); 6]; 6];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = rational::zero();
        }
        assert_eq!(
            held_karp_opt(&inst, &Metric::Explicit(m)).unwrap(),
            rational::int(3)
        );
        let big = gen_figure1(5, Figure1Costs::Unit).unwrap();
        assert!(matches!(
            held_karp_opt(&big, &Metric::ShortestPath),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn brute_force_agrees_on_small_metric() {
        let inst = gen_figure1(1, Figure1Costs::Unit).unwrap();
        let d = shortest_path_metric(&inst).unwrap();
        // permutations of vertices 1..9 with vertex 0 fixed
        let mut perm: Vec<usize> = (1..inst.n()).collect();
        let mut best: Option<Rational> = None;
        permute(&mut perm, 0, &mut |p| {
            let mut c = d[0][p[0]].clone() + &d[*p.last().unwrap()][0];
            for w in p.windows(2) {
                c += &d[w[0]][w[1]];
            }
            if best.as_ref().is_none_or(|b| c < *b) {
                best = Some(c);
            }
        });
        assert_eq!(
            held_karp_opt(&inst, &Metric::ShortestPath).unwrap(),
            best.unwrap()
        );
    }

    fn permute(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute(v, k + 1, f);
            v.swap(k, i);
        }
    }
}
