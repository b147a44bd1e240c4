use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{BurnSeries, IdSet, SpreadParams, SpreadState};
use crate::netgen::Network;
use crate::rng::keyed_uniform;

/// How a run is executed.
///
/// `Iterative` performs one Bernoulli trial per channel per iteration.
/// `FirstPassage` draws, for every channel, the geometric number of
/// iterations until its first successful send and propagates burn times with
/// a bucket queue; since later sends through a channel whose target is
/// already burned change nothing, both produce the same distribution of
/// series.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Iterative,
    #[default]
    FirstPassage,
}

/// One synchronous iteration, returning the next state.
pub fn step<R: Rng + ?Sized>(net: &Network, state: &SpreadState, p_ip: f64, rng: &mut R) -> SpreadState {
    let mut next = state.clone();
    step_in_place(net, &mut next, p_ip, rng);
    next
}

pub fn step_in_place<R: Rng + ?Sized>(net: &Network, state: &mut SpreadState, p_ip: f64, rng: &mut R) {
    let key = rng.next_u64();
    let senders: Vec<usize> = net
        .connected()
        .iter()
        .copied()
        .filter(|&i| state.burned[i])
        .collect();
    let fires = |channel: usize, usg: bool| usg || keyed_uniform(key, channel as u64) < p_ip;
    for s in senders {
        let usg = state.usg[s];
        for (k, &d) in net.p2p_out(s).iter().enumerate() {
            if fires(net.p2p_channel(s, k), usg) {
                state.burn(d);
            }
        }
        for (k, &g) in net.memberships(s).iter().enumerate() {
            if fires(net.membership_channel(s, k), usg) {
                state.burned_groups[g] = true;
                for &m in &net.groups()[g] {
                    state.burn(m);
                }
            }
        }
    }
    state.iteration += 1;
}

/// Run `iterations` steps from `seed` with the default engine.
pub fn run<R: Rng + ?Sized>(
    net: &Network,
    params: &SpreadParams,
    seed: &IdSet,
    usg: &IdSet,
    rng: &mut R,
    iterations: usize,
) -> BurnSeries {
    run_with_engine(net, params, seed, usg, rng, iterations, Engine::default())
}

pub fn run_with_engine<R: Rng + ?Sized>(
    net: &Network,
    params: &SpreadParams,
    seed: &IdSet,
    usg: &IdSet,
    rng: &mut R,
    iterations: usize,
    engine: Engine,
) -> BurnSeries {
    let counts = match engine {
        Engine::Iterative => run_iterative(net, params.p_ip, seed, usg, rng, iterations),
        Engine::FirstPassage => run_first_passage(net, params.p_ip, seed, usg, rng.next_u64(), iterations),
    };
    let np = net.n_connected();
    let f = counts
        .into_iter()
        .map(|c| if np == 0 { 0.0 } else { c as f64 / np as f64 })
        .collect();
    BurnSeries::new(f, Some(np))
}

fn run_iterative<R: Rng + ?Sized>(
    net: &Network,
    p_ip: f64,
    seed: &IdSet,
    usg: &IdSet,
    rng: &mut R,
    iterations: usize,
) -> Vec<usize> {
    let mut state = SpreadState::new(net, seed, usg);
    let mut counts = Vec::with_capacity(iterations + 1);
    counts.push(state.n_burned());
    for _ in 0..iterations {
        step_in_place(net, &mut state, p_ip, rng);
        counts.push(state.n_burned());
    }
    counts
}

/// Iterations until a channel first fires, at least 1; `None` if it never
/// fires within `limit`.
#[inline]
fn first_success(u: f64, p: f64, limit: usize) -> Option<usize> {
    if p <= 0.0 {
        return None;
    }
    if p >= 1.0 {
        return (limit >= 1).then_some(1);
    }
    // P(k > j) = (1 - p)^j with u uniform on (0, 1]
    let k = 1.0 + ((1.0 - u).ln() / (-p).ln_1p()).floor();
    (k <= limit as f64).then_some(k as usize)
}

pub(crate) fn run_first_passage(
    net: &Network,
    p_ip: f64,
    seed: &IdSet,
    usg: &IdSet,
    key: u64,
    iterations: usize,
) -> Vec<usize> {
    const NEVER: usize = usize::MAX;
    let mut burn_time = vec![NEVER; net.n_total()];
    let mut group_time = vec![NEVER; net.groups().len()];
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); iterations + 1];
    for &s in seed {
        burn_time[s] = 0;
        buckets[0].push(s);
    }
    let mut is_usg = vec![false; net.n_total()];
    for &i in usg {
        is_usg[i] = true;
    }

    for t in 0..iterations {
        let bucket = std::mem::take(&mut buckets[t]);
        for s in bucket {
            if burn_time[s] != t {
                continue;
            }
            let remaining = iterations - t;
            let delay = |channel: usize| {
                if is_usg[s] {
                    Some(1)
                } else {
                    first_success(keyed_uniform(key, channel as u64), p_ip, remaining)
                }
            };
            for (k, &d) in net.p2p_out(s).iter().enumerate() {
                if burn_time[d] <= t + 1 {
                    continue;
                }
                if let Some(dt) = delay(net.p2p_channel(s, k)) {
                    let when = t + dt;
                    if when < burn_time[d] {
                        burn_time[d] = when;
                        buckets[when].push(d);
                    }
                }
            }
            for (k, &g) in net.memberships(s).iter().enumerate() {
                if group_time[g] <= t + 1 {
                    continue;
                }
                if let Some(dt) = delay(net.membership_channel(s, k)) {
                    let when = t + dt;
                    if when < group_time[g] {
                        group_time[g] = when;
                        for &m in &net.groups()[g] {
                            if when < burn_time[m] {
                                burn_time[m] = when;
                                buckets[when].push(m);
                            }
                        }
                    }
                }
            }
        }
    }

    let mut newly = vec![0usize; iterations + 1];
    for &t in &burn_time {
        if t != NEVER {
            newly[t] += 1;
        }
    }
    let mut acc = 0;
    newly
        .into_iter()
        .map(|c| {
            acc += c;
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen::{build_network, PopulationConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::VecDeque;

    /// 6 connected individuals plus one outsider:
    /// 0 -> 1, 1 -> 2, 3 -> 0, group {2, 4, 5}
    fn toy() -> Network {
        Network::from_parts(
            7,
            vec![0, 1, 2, 3, 4, 5],
            vec![vec![1], vec![2], vec![], vec![0], vec![], vec![], vec![]],
            vec![vec![2, 4, 5]],
        )
        .unwrap()
    }

    /// Channel-hop distance from the seed set: independent of both engines.
    fn bfs_layers(net: &Network, seed: &IdSet) -> Vec<Option<usize>> {
        let mut dist = vec![None; net.n_total()];
        let mut queue = VecDeque::new();
        for &s in seed {
            dist[s] = Some(0);
            queue.push_back(s);
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            let mut reach: Vec<usize> = net.p2p_out(u).to_vec();
            for &g in net.memberships(u) {
                reach.extend(net.groups()[g].iter().copied());
            }
            for v in reach {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    fn set(ids: &[usize]) -> IdSet {
        ids.iter().copied().collect()
    }

    #[test]
    fn zero_probability_only_advances_counter() {
        let net = toy();
        let state = SpreadState::new(&net, &set(&[0]), &IdSet::new());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let next = step(&net, &state, 0.0, &mut rng);
        assert_eq!(next.burned(), state.burned());
        assert_eq!(next.iteration(), 1);
        assert_eq!(next.n_burned_groups(), 0);
    }

    #[test]
    fn certain_send_is_one_bfs_layer() {
        let net = toy();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let seed = set(&[3]);
        let dist = bfs_layers(&net, &seed);
        let mut state = SpreadState::new(&net, &seed, &IdSet::new());
        for layer in 1..=5 {
            state = step(&net, &state, 1.0, &mut rng);
            let expect: IdSet = (0..7).filter(|&i| dist[i].is_some_and(|d| d <= layer)).collect();
            assert_eq!(state.burned(), expect, "layer {layer}");
        }
        assert!(state.is_group_burned(0));
        assert!(!state.is_burned(6));
    }

    #[test]
    fn usg_member_reaches_whole_group() {
        let net = toy();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let state = SpreadState::new(&net, &set(&[4]), &set(&[4]));
        let next = step(&net, &state, 0.0, &mut rng);
        assert_eq!(next.burned(), set(&[2, 4, 5]));
        assert_eq!(next.burned_groups(), set(&[0]));
    }

    #[test]
    fn first_success_distribution() {
        assert_eq!(first_success(0.3, 0.0, 100), None);
        assert_eq!(first_success(0.999, 1.0, 100), Some(1));
        assert_eq!(first_success(0.999, 1.0, 0), None);
        // u close to 0 means an early success
        assert_eq!(first_success(0.0, 0.5, 10), Some(1));
        let p = 0.2;
        let n = 100_000;
        let mut mean = 0.0;
        for i in 0..n {
            let u = keyed_uniform(42, i);
            mean += first_success(u, p, usize::MAX).unwrap() as f64;
        }
        mean /= n as f64;
        // geometric mean 1/p = 5, sd sqrt(1-p)/p ~ 4.47
        assert!((mean - 5.0).abs() < 3.0 * 4.47 / (n as f64).sqrt(), "{mean}");
    }

    #[test]
    fn engines_agree_on_degenerate_probabilities() {
        let net = build_network(&PopulationConfig {
            n_total: 300,
            rng_seed: 5,
            groups_per_capita: 1.0,
            ..Default::default()
        })
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let seed = super::super::select_seed(&net, 0.05, &mut rng);
        for p in [0.0, 1.0] {
            let params = SpreadParams::new(0.05, p, 0.0).unwrap();
            let a = run_with_engine(&net, &params, &seed, &IdSet::new(), &mut rng, 30, Engine::Iterative);
            let b = run_with_engine(&net, &params, &seed, &IdSet::new(), &mut rng, 30, Engine::FirstPassage);
            assert_eq!(a, b, "p_ip={p}");
        }
    }

    #[test]
    fn unreachable_individuals_stay_unburned() {
        let net = toy();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let params = SpreadParams::new(0.0, 1.0, 0.0).unwrap();
        // 2, 4 and 5 have no way back to 3
        let s = run(&net, &params, &set(&[4]), &IdSet::new(), &mut rng, 10);
        assert_eq!(*s.f.last().unwrap(), 3.0 / 6.0);
    }
}
