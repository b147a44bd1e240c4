//! Population generation.
//!
//! A population of `n_total` individuals is partially connected to the
//! messaging network (the `penetration` fraction). Connected individuals
//! get directed person-to-person links, with out-degrees following a
//! discretized normal law, and memberships in groups of 3 to 30 members whose
//! sizes follow the shifted exponential CDF `E(N) = 1 - exp(-lambda (N - a))`.

use std::collections::HashSet;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::fit::{self, CdfModel, GroupSizeFit};

#[derive(Debug, Error, PartialEq)]
pub enum NetgenError {
    #[error("invalid distribution parameters: {0}")]
    InvalidDistribution(String),
    #[error("invalid population config: {0}")]
    InvalidConfig(String),
    #[error("requested {what} of {requested} but only {available} connected individuals")]
    TooFewConnected {
        what: &'static str,
        requested: usize,
        available: usize,
    },
    #[error("malformed network: {0}")]
    Malformed(String),
    #[error("network has no connected individuals")]
    Empty,
}

/// Survey-calibrated contact statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SurveyDistributions {
    pub mu: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub a_shift: f64,
    pub min_group_size: usize,
    pub max_group_size: usize,
    pub max_p2p: usize,
}

impl Default for SurveyDistributions {
    fn default() -> Self {
        Self {
            mu: 7.35,
            sigma: 4.38,
            lambda: 0.1113,
            a_shift: 1.41,
            min_group_size: 3,
            max_group_size: 30,
            max_p2p: 30,
        }
    }
}

impl SurveyDistributions {
    pub fn validate(&self) -> Result<(), NetgenError> {
        let bad = |m: &str| Err(NetgenError::InvalidDistribution(m.to_string()));
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return bad("sigma must be positive");
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return bad("lambda must be positive");
        }
        if !self.mu.is_finite() || !self.a_shift.is_finite() {
            return bad("mu and a_shift must be finite");
        }
        if self.min_group_size < 3 {
            return bad("groups have at least 3 members");
        }
        if self.max_group_size < self.min_group_size {
            return bad("max_group_size < min_group_size");
        }
        Ok(())
    }

    /// Untruncated exponential CDF `E(N)`.
    pub fn exp_cdf(&self, n: f64) -> f64 {
        1.0 - (-self.lambda * (n - self.a_shift)).exp()
    }

    /// Group-size CDF restricted to `[min, max]` and renormalized.
    pub fn group_size_cdf(&self, n: usize) -> f64 {
        if n < self.min_group_size {
            return 0.0;
        }
        if n >= self.max_group_size {
            return 1.0;
        }
        let lo = self.exp_cdf(self.min_group_size as f64 - 1.0);
        let hi = self.exp_cdf(self.max_group_size as f64);
        (self.exp_cdf(n as f64) - lo) / (hi - lo)
    }

    /// `(size, probability)` for every allowed group size.
    pub fn group_size_pmf(&self) -> Vec<(usize, f64)> {
        let lo = self.exp_cdf(self.min_group_size as f64 - 1.0);
        let hi = self.exp_cdf(self.max_group_size as f64);
        (self.min_group_size..=self.max_group_size)
            .map(|i| {
                let w = self.exp_cdf(i as f64) - self.exp_cdf(i as f64 - 1.0);
                (i, w / (hi - lo))
            })
            .collect()
    }

    pub fn mean_group_size(&self) -> f64 {
        self.group_size_pmf().iter().map(|&(i, p)| i as f64 * p).sum()
    }

    /// Probability of each out-degree `0..=max_p2p`, from half-integer
    /// normal-CDF bins. Mass above `max_p2p` goes to the last bin.
    pub fn p2p_degree_pmf(&self) -> Vec<f64> {
        let normal = Normal::new(self.mu, self.sigma).expect("validated sigma");
        let edge = |m: f64| normal.cdf(m + 0.5);
        let mut pmf = Vec::with_capacity(self.max_p2p + 1);
        let mut prev = 0.0;
        for m in 0..=self.max_p2p {
            let cum = if m == self.max_p2p { 1.0 } else { edge(m as f64) };
            pmf.push(cum - prev);
            prev = cum;
        }
        pmf
    }
}

/// Split `total` into integer parts proportional to `weights` (Hamilton's
/// method). Ties on the remainder go to the lower index.
pub fn largest_remainder(weights: &[f64], total: usize) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    if total == 0 || weights.is_empty() || sum <= 0.0 {
        return vec![0; weights.len()];
    }
    let quotas: Vec<f64> = weights.iter().map(|w| w / sum * total as f64).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&i, &j| {
        let ri = quotas[i] - quotas[i].floor();
        let rj = quotas[j] - quotas[j].floor();
        rj.total_cmp(&ri).then(i.cmp(&j))
    });
    for &i in order.iter().take(total.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

/// Number of connected individuals with each out-degree `m = 0..=max_p2p`.
pub fn p2p_degree_counts(dist: &SurveyDistributions, n_connected: usize) -> Vec<usize> {
    largest_remainder(&dist.p2p_degree_pmf(), n_connected)
}

/// Number of groups of each size `min_group_size..=max_group_size`.
pub fn group_size_counts(dist: &SurveyDistributions, n_groups: usize) -> Vec<(usize, usize)> {
    if n_groups == 0 {
        return Vec::new();
    }
    let pmf = dist.group_size_pmf();
    let weights: Vec<f64> = pmf.iter().map(|&(_, p)| p).collect();
    let counts = largest_remainder(&weights, n_groups);
    pmf.iter().map(|&(i, _)| i).zip(counts).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PopulationConfig {
    pub n_total: usize,
    pub penetration: f64,
    pub groups_per_capita: f64,
    pub rng_seed: u64,
    pub distributions: SurveyDistributions,
}

impl Default for PopulationConfig {
    fn default() -> Self {
        Self {
            n_total: 10_000,
            penetration: 0.70,
            groups_per_capita: DEFAULT_GROUPS_PER_CAPITA,
            rng_seed: 0,
            distributions: SurveyDistributions::default(),
        }
    }
}

/// Mean number of group memberships per connected individual.
///
/// Chosen so that a 2000-person population with `P_II = 2%`, `P_IP = 1%` and
/// no USG spreads with `a` near 31 iterations. Larger values make groups
/// dominate and shrink `a` quickly (about 4 at 5 memberships).
pub const DEFAULT_GROUPS_PER_CAPITA: f64 = 0.2;

impl PopulationConfig {
    pub fn validate(&self) -> Result<(), NetgenError> {
        self.distributions.validate()?;
        if self.n_total < 2 {
            return Err(NetgenError::InvalidConfig("n_total must be at least 2".into()));
        }
        if !(self.penetration > 0.0 && self.penetration <= 1.0) {
            return Err(NetgenError::InvalidConfig("penetration must lie in (0, 1]".into()));
        }
        if !(self.groups_per_capita >= 0.0 && self.groups_per_capita.is_finite()) {
            return Err(NetgenError::InvalidConfig("groups_per_capita must be >= 0".into()));
        }
        Ok(())
    }

    pub fn n_connected(&self) -> usize {
        (self.penetration * self.n_total as f64).round() as usize
    }

    pub fn n_groups(&self) -> usize {
        let n = self.n_connected() as f64;
        (self.groups_per_capita * n / self.distributions.mean_group_size()).round() as usize
    }
}

/// A generated population.
///
/// Person-to-person links are directed. Group delivery reaches every member.
/// Membership lists and channel offsets are derived from the links and groups
/// and are not part of the serialized form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NetworkWire", into = "NetworkWire")]
pub struct Network {
    n_total: usize,
    connected: Vec<usize>,
    is_connected: Vec<bool>,
    p2p_out: Vec<Vec<usize>>,
    groups: Vec<Vec<usize>>,
    memberships: Vec<Vec<usize>>,
    p2p_offset: Vec<usize>,
    membership_offset: Vec<usize>,
}

/// Canonical JSON form.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct NetworkWire {
    n_total: usize,
    connected: Vec<usize>,
    p2p: Vec<[usize; 2]>,
    groups: Vec<Vec<usize>>,
}

impl From<Network> for NetworkWire {
    fn from(net: Network) -> Self {
        let p2p = net.p2p_edges().map(|(s, d)| [s, d]).collect();
        NetworkWire {
            n_total: net.n_total,
            connected: net.connected,
            p2p,
            groups: net.groups,
        }
    }
}

impl TryFrom<NetworkWire> for Network {
    type Error = NetgenError;

    fn try_from(w: NetworkWire) -> Result<Self, Self::Error> {
        let mut out = vec![Vec::new(); w.n_total];
        for [s, d] in w.p2p {
            if s >= w.n_total {
                return Err(NetgenError::Malformed(format!("source {s} out of range")));
            }
            out[s].push(d);
        }
        Network::from_parts(w.n_total, w.connected, out, w.groups)
    }
}

impl Network {
    /// Assemble and check a network.
    ///
    /// `p2p_out[i]` lists the destinations of individual `i`. Self links,
    /// repeated destinations, repeated group members and endpoints outside
    /// `connected` are rejected.
    pub fn from_parts(
        n_total: usize,
        mut connected: Vec<usize>,
        p2p_out: Vec<Vec<usize>>,
        groups: Vec<Vec<usize>>,
    ) -> Result<Self, NetgenError> {
        let bad = |m: String| Err(NetgenError::Malformed(m));
        if p2p_out.len() != n_total {
            return bad(format!("p2p table has {} rows, expected {n_total}", p2p_out.len()));
        }
        connected.sort_unstable();
        connected.dedup();
        let mut is_connected = vec![false; n_total];
        for &i in &connected {
            if i >= n_total {
                return bad(format!("connected id {i} out of range"));
            }
            is_connected[i] = true;
        }
        for (s, dests) in p2p_out.iter().enumerate() {
            if dests.is_empty() {
                continue;
            }
            if !is_connected[s] {
                return bad(format!("p2p source {s} is not connected"));
            }
            let mut seen = HashSet::with_capacity(dests.len());
            for &d in dests {
                if d >= n_total || !is_connected[d] {
                    return bad(format!("p2p destination {d} is not connected"));
                }
                if d == s {
                    return bad(format!("self link at {s}"));
                }
                if !seen.insert(d) {
                    return bad(format!("duplicate link {s}->{d}"));
                }
            }
        }
        let mut memberships = vec![Vec::new(); n_total];
        for (g, members) in groups.iter().enumerate() {
            let mut seen = HashSet::with_capacity(members.len());
            for &m in members {
                if m >= n_total || !is_connected[m] {
                    return bad(format!("group {g} member {m} is not connected"));
                }
                if !seen.insert(m) {
                    return bad(format!("group {g} lists {m} twice"));
                }
                memberships[m].push(g);
            }
        }
        let prefix = |rows: &[Vec<usize>]| {
            let mut off = Vec::with_capacity(rows.len() + 1);
            let mut acc = 0;
            off.push(0);
            for r in rows {
                acc += r.len();
                off.push(acc);
            }
            off
        };
        let p2p_offset = prefix(&p2p_out);
        let membership_offset = prefix(&memberships);
        Ok(Self {
            n_total,
            connected,
            is_connected,
            p2p_out,
            groups,
            memberships,
            p2p_offset,
            membership_offset,
        })
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    /// Sorted ids of connected individuals.
    pub fn connected(&self) -> &[usize] {
        &self.connected
    }

    pub fn n_connected(&self) -> usize {
        self.connected.len()
    }

    pub fn is_connected(&self, id: usize) -> bool {
        self.is_connected.get(id).copied().unwrap_or(false)
    }

    pub fn p2p_out(&self, id: usize) -> &[usize] {
        &self.p2p_out[id]
    }

    pub fn p2p_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.p2p_out
            .iter()
            .enumerate()
            .flat_map(|(s, ds)| ds.iter().map(move |&d| (s, d)))
    }

    pub fn n_p2p(&self) -> usize {
        self.p2p_offset[self.n_total]
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// Indices of the groups `id` belongs to.
    pub fn memberships(&self, id: usize) -> &[usize] {
        &self.memberships[id]
    }

    pub fn n_memberships(&self) -> usize {
        self.membership_offset[self.n_total]
    }

    /// Total number of sending channels (p2p links plus memberships).
    pub fn n_channels(&self) -> usize {
        self.n_p2p() + self.n_memberships()
    }

    /// Global channel id of the `k`-th p2p link of `id`.
    #[inline]
    pub fn p2p_channel(&self, id: usize, k: usize) -> usize {
        self.p2p_offset[id] + k
    }

    /// Global channel id of the `k`-th group membership of `id`.
    #[inline]
    pub fn membership_channel(&self, id: usize, k: usize) -> usize {
        self.n_p2p() + self.membership_offset[id] + k
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("network serializes")
    }
}

/// Build a population from `config`, seeding the generator from `config.rng_seed`.
pub fn build_network(config: &PopulationConfig) -> Result<Network, NetgenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    build_network_with_rng(config, &mut rng)
}

pub fn build_network_with_rng<R: Rng + ?Sized>(
    config: &PopulationConfig,
    rng: &mut R,
) -> Result<Network, NetgenError> {
    config.validate()?;
    let dist = &config.distributions;
    let n_conn = config.n_connected();
    let mut connected: Vec<usize> = index::sample(rng, config.n_total, n_conn).into_vec();
    connected.sort_unstable();

    let degree_counts = p2p_degree_counts(dist, n_conn);
    if let Some(max_deg) = degree_counts.iter().rposition(|&c| c > 0) {
        if max_deg + 1 > n_conn {
            return Err(NetgenError::TooFewConnected {
                what: "out-degree",
                requested: max_deg,
                available: n_conn,
            });
        }
    }
    let n_groups = config.n_groups();
    let size_counts = group_size_counts(dist, n_groups);
    if let Some(&(size, _)) = size_counts.iter().rev().find(|&&(_, c)| c > 0) {
        if size > n_conn {
            return Err(NetgenError::TooFewConnected {
                what: "group size",
                requested: size,
                available: n_conn,
            });
        }
    }

    // positions into `connected`, shuffled, then handed out degree by degree
    let mut order: Vec<usize> = (0..n_conn).collect();
    order.shuffle(rng);
    let mut p2p_out = vec![Vec::new(); config.n_total];
    let mut cursor = 0;
    for (m, &count) in degree_counts.iter().enumerate() {
        for &pos in &order[cursor..cursor + count] {
            if m == 0 {
                continue;
            }
            let mut dests: Vec<usize> = index::sample(rng, n_conn - 1, m)
                .into_iter()
                .map(|k| connected[if k >= pos { k + 1 } else { k }])
                .collect();
            dests.sort_unstable();
            p2p_out[connected[pos]] = dests;
        }
        cursor += count;
    }

    let mut groups = Vec::with_capacity(n_groups);
    for &(size, count) in &size_counts {
        for _ in 0..count {
            let mut members: Vec<usize> = index::sample(rng, n_conn, size)
                .into_iter()
                .map(|k| connected[k])
                .collect();
            members.sort_unstable();
            groups.push(members);
        }
    }
    groups.shuffle(rng);

    Network::from_parts(config.n_total, connected, p2p_out, groups)
}

/// Empirical statistics of a network compared with the target distributions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub n_connected: usize,
    /// Individuals with out-degree `m`, `m = 0..=max_p2p`.
    pub degree_histogram: Vec<usize>,
    pub n_groups: usize,
    /// `(size, empirical CDF)` for every allowed size.
    pub group_size_cdf: Vec<(usize, f64)>,
    pub max_cdf_deviation: Option<f64>,
    pub refit: Option<GroupSizeFit>,
    pub r_squared: Option<f64>,
    pub flags: Vec<String>,
}

pub fn validate_network(
    net: &Network,
    dist: &SurveyDistributions,
) -> Result<ValidationReport, NetgenError> {
    if net.n_connected() == 0 {
        return Err(NetgenError::Empty);
    }
    let mut flags = Vec::new();
    let mut degree_histogram = vec![0usize; dist.max_p2p + 1];
    for &i in net.connected() {
        let d = net.p2p_out(i).len();
        if d > dist.max_p2p {
            flags.push(format!("individual {i} has out-degree {d} above {}", dist.max_p2p));
        }
        degree_histogram[d.min(dist.max_p2p)] += 1;
    }

    let sizes: Vec<usize> = net.groups().iter().map(Vec::len).collect();
    if sizes.is_empty() {
        flags.push("no groups".to_string());
        return Ok(ValidationReport {
            n_connected: net.n_connected(),
            degree_histogram,
            n_groups: 0,
            group_size_cdf: Vec::new(),
            max_cdf_deviation: None,
            refit: None,
            r_squared: None,
            flags,
        });
    }
    if sizes
        .iter()
        .any(|&s| s < dist.min_group_size || s > dist.max_group_size)
    {
        flags.push("group sizes outside the allowed range".to_string());
    }
    let group_size_cdf = empirical_cdf(&sizes, dist.min_group_size, dist.max_group_size);
    let max_cdf_deviation = group_size_cdf
        .iter()
        .map(|&(n, e)| (e - dist.group_size_cdf(n)).abs())
        .fold(0.0, f64::max);
    let refit = match fit::fit_group_size_cdf(&sizes, dist, CdfModel::Truncated) {
        Ok(r) => Some(r),
        Err(e) => {
            flags.push(format!("refit failed: {e}"));
            None
        }
    };
    let r_squared = refit.as_ref().map(|r| r.r_squared);
    Ok(ValidationReport {
        n_connected: net.n_connected(),
        degree_histogram,
        n_groups: sizes.len(),
        group_size_cdf,
        max_cdf_deviation: Some(max_cdf_deviation),
        refit: refit.map(|r| r.coefficients),
        r_squared,
        flags,
    })
}

/// Fraction of `sizes` that are `<= n`, for `n` in `lo..=hi`.
pub fn empirical_cdf(sizes: &[usize], lo: usize, hi: usize) -> Vec<(usize, f64)> {
    let total = sizes.len() as f64;
    let mut hist = vec![0usize; hi + 1];
    for &s in sizes {
        hist[s.min(hi)] += 1;
    }
    let mut cum = hist[..lo].iter().sum::<usize>();
    (lo..=hi)
        .map(|n| {
            cum += hist[n];
            (n, cum as f64 / total)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Normal CDF by Simpson quadrature of the density, independent of statrs.
    fn normal_cdf_quadrature(x: f64, mu: f64, sigma: f64) -> f64 {
        let lo = mu - 12.0 * sigma;
        if x <= lo {
            return 0.0;
        }
        let n = 20_000;
        let h = (x - lo) / n as f64;
        let pdf = |t: f64| {
            (-(t - mu).powi(2) / (2.0 * sigma * sigma)).exp()
                / ((2.0 * std::f64::consts::PI).sqrt() * sigma)
        };
        let mut s = pdf(lo) + pdf(x);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            s += w * pdf(lo + k as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn degree_pmf_matches_quadrature_oracle() {
        let d = SurveyDistributions::default();
        let pmf = d.p2p_degree_pmf();
        assert_eq!(pmf.len(), 31);
        let mut prev = 0.0;
        for (m, &p) in pmf.iter().enumerate().take(30) {
            let cum = normal_cdf_quadrature(m as f64 + 0.5, d.mu, d.sigma);
            assert!((p - (cum - prev)).abs() < 1e-9, "m={m}");
            prev = cum;
        }
        assert!((pmf.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degree_counts_empty_population() {
        let counts = p2p_degree_counts(&SurveyDistributions::default(), 0);
        assert_eq!(counts.len(), 31);
        assert!(counts.iter().all(|&c| c == 0));
    }

    #[test]
    fn degree_counts_mode_and_shape() {
        let d = SurveyDistributions::default();
        let counts = p2p_degree_counts(&d, 7000);
        assert_eq!(counts.iter().sum::<usize>(), 7000);
        let argmax = (0..counts.len()).max_by_key(|&m| counts[m]).unwrap();
        assert_eq!(argmax, 7);
        // unimodal apart from bin 0, which holds the whole left tail
        assert!(counts[1..=7].windows(2).all(|w| w[0] <= w[1]));
        assert!(counts[7..].windows(2).all(|w| w[0] >= w[1]));
        assert!(counts[5..=10].iter().all(|&c| c > 0));
    }

    #[test]
    fn exp_cdf_value() {
        let d = SurveyDistributions::default();
        // 1 - exp(-0.1113 * 8.59)
        assert!((d.exp_cdf(10.0) - 0.615_598).abs() < 1e-5);
    }

    #[test]
    fn group_counts_decreasing_and_exact() {
        let d = SurveyDistributions::default();
        assert!(group_size_counts(&d, 0).is_empty());
        let counts = group_size_counts(&d, 10_000);
        assert_eq!(counts.len(), 28);
        assert_eq!(counts.first().unwrap().0, 3);
        assert_eq!(counts.last().unwrap().0, 30);
        assert_eq!(counts.iter().map(|c| c.1).sum::<usize>(), 10_000);
        assert!(counts.windows(2).all(|w| w[0].1 > w[1].1));
    }

    #[test]
    fn largest_remainder_sums() {
        assert_eq!(largest_remainder(&[1.0, 1.0, 1.0], 10), vec![4, 3, 3]);
        assert_eq!(largest_remainder(&[0.5, 0.5], 3), vec![2, 1]);
        assert_eq!(largest_remainder(&[], 3), Vec::<usize>::new());
    }

    #[test]
    fn default_population_connects_seventy_percent() {
        let cfg = PopulationConfig::default();
        assert_eq!(cfg.n_connected(), 7000);
    }

    #[test]
    fn p2p_only_network() {
        let cfg = PopulationConfig {
            n_total: 100,
            penetration: 1.0,
            groups_per_capita: 0.0,
            rng_seed: 3,
            ..Default::default()
        };
        let net = build_network(&cfg).unwrap();
        assert!(net.groups().is_empty());
        assert_eq!(net.n_connected(), 100);
        assert!(net.n_p2p() > 0);
        let report = validate_network(&net, &cfg.distributions).unwrap();
        assert!(report.flags.iter().any(|f| f == "no groups"));
        assert!(report.max_cdf_deviation.is_none());
    }

    #[test]
    fn too_small_population_rejected() {
        let cfg = PopulationConfig {
            n_total: 10,
            penetration: 1.0,
            groups_per_capita: 0.0,
            ..Default::default()
        };
        assert!(matches!(
            build_network(&cfg),
            Err(NetgenError::TooFewConnected { .. })
        ));
    }

    #[test]
    fn invalid_configs_rejected() {
        let cfg = PopulationConfig { penetration: 0.0, ..Default::default() };
        assert!(build_network(&cfg).is_err());
        let cfg = PopulationConfig { n_total: 1, ..Default::default() };
        assert!(build_network(&cfg).is_err());
        let mut cfg = PopulationConfig::default();
        cfg.distributions.sigma = 0.0;
        assert!(build_network(&cfg).is_err());
    }

    #[test]
    fn from_parts_rejects_bad_links() {
        let out = |v: Vec<Vec<usize>>| v;
        assert!(Network::from_parts(3, vec![0, 1, 2], out(vec![vec![0], vec![], vec![]]), vec![]).is_err());
        assert!(Network::from_parts(3, vec![0, 1], out(vec![vec![2], vec![], vec![]]), vec![]).is_err());
        assert!(Network::from_parts(3, vec![0, 1, 2], out(vec![vec![1, 1], vec![], vec![]]), vec![]).is_err());
        assert!(Network::from_parts(3, vec![0, 1, 2], out(vec![vec![], vec![], vec![]]), vec![vec![0, 0, 1]]).is_err());
        assert!(Network::from_parts(3, vec![0, 1, 2], out(vec![vec![1], vec![], vec![]]), vec![vec![0, 1, 2]]).is_ok());
    }

    #[test]
    fn canonical_json_shape() {
        let net = Network::from_parts(
            4,
            vec![0, 1, 2],
            vec![vec![1], vec![0, 2], vec![], vec![]],
            vec![vec![0, 1, 2]],
        )
        .unwrap();
        let json = net.to_json();
        assert_eq!(
            json,
            r#"{"n_total":4,"connected":[0,1,2],"p2p":[[0,1],[1,0],[1,2]],"groups":[[0,1,2]]}"#
        );
        let back: Network = serde_json::from_str(&json).unwrap();
        assert_eq!(back, net);
        assert_eq!(back.memberships(1), &[0]);
        assert_eq!(back.membership_channel(2, 0), 5);
    }
}
