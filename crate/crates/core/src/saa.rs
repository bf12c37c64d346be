//! Stochastic approximation annealing: density partition, adaptive region
//! weights and the schedules that drive them.
//!
//! The sample space of `k`-subsets is split into `N` bands by density. Each
//! band carries a weight `theta[i]`; moving into a band is penalised by its
//! weight, and after every iteration the weight of the band the chain sits in
//! grows by `eta * (1 - pi[i])` while every other band shrinks by
//! `eta * pi[j]`. Over-visited bands therefore become expensive to stay in,
//! which lets the chain climb out of local optima at low temperature.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Result};
use crate::rng;
use crate::samplers::accept_with_draw;

pub const DEFAULT_REGIONS: usize = 51;
pub const DEFAULT_A_FIRST: f64 = 0.15;
pub const DEFAULT_A_LAST: f64 = 0.99;
pub const DEFAULT_PLATEAU: u64 = 1500;
pub const DEFAULT_BASE_TEMPERATURE: f64 = 0.001;

/// Strictly increasing density thresholds `a_1 < ... < a_{N-1}` splitting
/// `[0, 1]` into `N` regions.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    thresholds: Vec<f64>,
}

impl Partition {
    pub fn new(thresholds: Vec<f64>) -> Result<Self> {
        if thresholds.is_empty() {
            return Err(invalid_arg("partition needs at least one threshold"));
        }
        if thresholds.iter().any(|a| !(0.0..=1.0).contains(a)) {
            return Err(invalid_arg("thresholds must lie in [0, 1]"));
        }
        if thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid_arg("thresholds must be strictly increasing"));
        }
        Ok(Self { thresholds })
    }

    /// `n_regions - 1` evenly spaced thresholds from `a_first` to `a_last`.
    pub fn grid(n_regions: usize, a_first: f64, a_last: f64) -> Result<Self> {
        if n_regions < 3 {
            return Err(invalid_arg(format!(
                "a grid partition needs at least 3 regions, got {n_regions}"
            )));
        }
        if !(0.0..=1.0).contains(&a_first) || !(0.0..=1.0).contains(&a_last) || a_first >= a_last {
            return Err(invalid_arg(format!(
                "grid endpoints ({a_first}, {a_last}) must satisfy 0 <= a_first < a_last <= 1"
            )));
        }
        let steps = (n_regions - 2) as f64;
        let mut thresholds: Vec<f64> = (0..n_regions - 1)
            .map(|i| a_first + (a_last - a_first) * i as f64 / steps)
            .collect();
        thresholds[n_regions - 2] = a_last;
        Self::new(thresholds)
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    /// Number of regions `N`.
    pub fn regions(&self) -> usize {
        self.thresholds.len() + 1
    }
}

/// The default grid: `n_regions - 1` thresholds from 0.15 to 0.99.
///
/// Connected `k`-subgraphs have density at least `2/k`, so for the sizes of
/// interest the first region is empty; the last region holds cliques only.
pub fn default_partition(n_regions: usize) -> Result<Partition> {
    Partition::grid(n_regions, DEFAULT_A_FIRST, DEFAULT_A_LAST)
}

/// 1-based region of density `d`: the number of thresholds strictly below
/// `d`, plus one. A density equal to `a_i` falls in region `i`.
pub fn region_index(p: &Partition, d: f64) -> Result<usize> {
    if !(0.0..=1.0).contains(&d) {
        return Err(invalid_arg(format!("density {d} outside [0, 1]")));
    }
    Ok(p.thresholds.partition_point(|&a| a < d) + 1)
}

/// `pi_i` proportional to `exp(-0.1 (i - 1))`, `i = 1..=n_regions`.
pub fn desired_distribution(n_regions: usize) -> Vec<f64> {
    let weights: Vec<f64> = (0..n_regions).map(|i| (-0.1 * i as f64).exp()).collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

/// `0.001 * sqrt(1500 / max(l, 1500))`.
pub fn sqrt_temperature(l: u64) -> f64 {
    sqrt_temperature_with(l, DEFAULT_BASE_TEMPERATURE, DEFAULT_PLATEAU)
}

pub fn sqrt_temperature_with(l: u64, base: f64, plateau: u64) -> f64 {
    base * (plateau as f64 / l.max(plateau) as f64).sqrt()
}

/// `1500 / max(1500, l)`.
pub fn gain_factor(l: u64) -> f64 {
    gain_factor_with(l, DEFAULT_PLATEAU)
}

pub fn gain_factor_with(l: u64, plateau: u64) -> f64 {
    plateau as f64 / l.max(plateau) as f64
}

/// Adaptive log-weights, one per region. Only differences enter acceptance,
/// so the vector is never renormalised.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaVector {
    pub theta: Vec<f64>,
}

impl ThetaVector {
    pub fn zeros(n_regions: usize) -> Self {
        Self {
            theta: vec![0.0; n_regions],
        }
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    /// Weight of 1-based `region`.
    #[inline]
    pub fn weight(&self, region: usize) -> f64 {
        self.theta[region - 1]
    }

    /// Compensated (Neumaier) sum, so that checks on the sum measure the
    /// update rather than the summation.
    pub fn sum(&self) -> f64 {
        let (mut total, mut carry) = (0.0f64, 0.0f64);
        for &x in &self.theta {
            let t = total + x;
            carry += if total.abs() >= x.abs() {
                (total - t) + x
            } else {
                (x - t) + total
            };
            total = t;
        }
        total + carry
    }

    /// In-place `theta += eta * (e_region - pi)`.
    ///
    /// The rounding residue of every subtraction is folded into the occupied
    /// entry, which keeps the sum drift at one rounding per update however
    /// large the weights grow.
    pub fn update(&mut self, occupied_region: usize, pi: &[f64], eta: f64) -> Result<()> {
        let n = self.theta.len();
        if occupied_region == 0 || occupied_region > n {
            return Err(invalid_arg(format!(
                "region {occupied_region} outside 1..={n}"
            )));
        }
        if pi.len() != n {
            return Err(invalid_arg(format!(
                "pi has {} entries, theta has {n}",
                pi.len()
            )));
        }
        if eta == 0.0 {
            return Ok(());
        }
        let mut residue = 0.0;
        for (t, &p) in self.theta.iter_mut().zip(pi) {
            let (a, b) = (*t, -(eta * p));
            let s = a + b;
            let bb = s - a;
            residue += (a - (s - bb)) + (b - bb);
            *t = s;
        }
        self.theta[occupied_region - 1] += eta + residue;
        Ok(())
    }
}

/// `theta + eta * (e - pi)` where `e` indicates `occupied_region` (1-based).
pub fn theta_update(
    theta: &ThetaVector,
    occupied_region: usize,
    pi: &[f64],
    eta: f64,
) -> Result<ThetaVector> {
    let mut next = theta.clone();
    next.update(occupied_region, pi, eta)?;
    Ok(next)
}

/// Log acceptance ratio `(d_new - d_old) / t + theta[j_old] - theta[j_new]`.
pub fn saa_log_ratio(
    d_new: f64,
    d_old: f64,
    t: f64,
    theta: &ThetaVector,
    j_old: usize,
    j_new: usize,
) -> f64 {
    (d_new - d_old) / t + theta.weight(j_old) - theta.weight(j_new)
}

/// Accepts with probability `min{1, exp((d_new - d_old)/t + theta[j_old] - theta[j_new])}`.
/// Consumes exactly one uniform draw.
pub fn saa_accept<R: Rng + ?Sized>(
    d_new: f64,
    d_old: f64,
    t: f64,
    theta: &ThetaVector,
    j_old: usize,
    j_new: usize,
    rng: &mut R,
) -> Result<bool> {
    if t.is_nan() || t <= 0.0 {
        return Err(invalid_arg(format!(
            "temperature must be positive, got {t}"
        )));
    }
    for j in [j_old, j_new] {
        if j == 0 || j > theta.len() {
            return Err(invalid_arg(format!(
                "region {j} outside 1..={}",
                theta.len()
            )));
        }
    }
    let u = rng::unit(rng);
    Ok(accept_with_draw(
        saa_log_ratio(d_new, d_old, t, theta, j_old, j_new),
        u,
    ))
}

/// Everything an SAA chain needs beyond the shared sampler settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SaaConfig {
    pub partition: Partition,
    pub pi: Vec<f64>,
    /// Iterations for which temperature and gain stay at their base values.
    pub plateau: u64,
    pub base_temperature: f64,
    pub theta_init: ThetaVector,
    /// When false the gain is forced to zero and `theta` never moves.
    pub adapt: bool,
}

impl Default for SaaConfig {
    fn default() -> Self {
        Self::from_partition(default_partition(DEFAULT_REGIONS).expect("default grid is valid"))
    }
}

impl SaaConfig {
    /// Defaults around a given partition: `pi` from [`desired_distribution`],
    /// zero weights, plateau 1500, base temperature 0.001.
    pub fn from_partition(partition: Partition) -> Self {
        let n = partition.regions();
        Self {
            partition,
            pi: desired_distribution(n),
            plateau: DEFAULT_PLATEAU,
            base_temperature: DEFAULT_BASE_TEMPERATURE,
            theta_init: ThetaVector::zeros(n),
            adapt: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.partition.regions();
        if self.pi.len() != n || self.theta_init.len() != n {
            return Err(invalid_arg(format!(
                "pi ({}) and theta ({}) must have one entry per region ({n})",
                self.pi.len(),
                self.theta_init.len()
            )));
        }
        if self.pi.iter().any(|&p| p.is_nan() || p <= 0.0) {
            return Err(invalid_arg("pi entries must be positive"));
        }
        let total: f64 = self.pi.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(invalid_arg(format!("pi sums to {total}, expected 1")));
        }
        if self.plateau == 0 {
            return Err(invalid_arg("plateau must be at least 1"));
        }
        if self.base_temperature.is_nan() || self.base_temperature <= 0.0 {
            return Err(invalid_arg("base temperature must be positive"));
        }
        if self.theta_init.theta.iter().any(|t| !t.is_finite()) {
            return Err(invalid_arg("theta must be finite"));
        }
        Ok(())
    }

    pub fn temperature(&self, l: u64) -> f64 {
        sqrt_temperature_with(l, self.base_temperature, self.plateau)
    }

    pub fn gain(&self, l: u64) -> f64 {
        if self.adapt {
            gain_factor_with(l, self.plateau)
        } else {
            0.0
        }
    }
}

/// The SAA block of a run-config document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SaaSettings {
    pub n_regions: usize,
    pub a_first: f64,
    pub a_last: f64,
    /// Overrides the evenly spaced grid when present.
    pub thresholds: Option<Vec<f64>>,
    pub plateau: u64,
    pub base_temperature: f64,
}

impl Default for SaaSettings {
    fn default() -> Self {
        Self {
            n_regions: DEFAULT_REGIONS,
            a_first: DEFAULT_A_FIRST,
            a_last: DEFAULT_A_LAST,
            thresholds: None,
            plateau: DEFAULT_PLATEAU,
            base_temperature: DEFAULT_BASE_TEMPERATURE,
        }
    }
}

impl SaaSettings {
    pub fn build(&self) -> Result<SaaConfig> {
        let partition = match &self.thresholds {
            Some(t) => Partition::new(t.clone())?,
            None => Partition::grid(self.n_regions, self.a_first, self.a_last)?,
        };
        let cfg = SaaConfig {
            plateau: self.plateau,
            base_temperature: self.base_temperature,
            ..SaaConfig::from_partition(partition)
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
