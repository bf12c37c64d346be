//! Chain moves, acceptance rules, cooling and the chain runner for SM, SA and SAA.
//!
//! Every acceptance decision draws exactly one uniform `u` from the chain's
//! generator and accepts when `u < min{1, exp(log_ratio)}`. Iterations where
//! no proposal can be built are rejections that consume no acceptance draw.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Error, Result};
use crate::graph::{
    clique_edges, density_from_edges, distance_objective, internal_edges, is_connected,
    neighbors_of_set, non_articulation_nodes, Graph, Selection,
};
use crate::rng::{self, ChainRng};
use crate::saa::{self, SaaConfig, ThetaVector};

/// Growth attempts made by [`init_selection`] before giving up.
pub const INIT_ATTEMPTS: usize = 1000;
/// Fresh start nodes tried by [`global_move`] after a stalled first attempt.
pub const GLOBAL_MOVE_RETRIES: usize = 100;
/// Local-move probability used unless configured otherwise.
pub const DEFAULT_ALPHA: f64 = 0.9;
/// SM applies its forced replacement on iterations divisible by this.
pub const SM_PERTURB_EVERY: u64 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Sm,
    Sa,
    Saa,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Sm, Algorithm::Sa, Algorithm::Saa];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Sm => "sm",
            Algorithm::Sa => "sa",
            Algorithm::Saa => "saa",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sm" => Ok(Algorithm::Sm),
            "sa" => Ok(Algorithm::Sa),
            "saa" => Ok(Algorithm::Saa),
            other => Err(invalid_arg(format!(
                "unknown algorithm {other:?} (expected sm, sa or saa)"
            ))),
        }
    }
}

/// Temperature schedule for the density-based chains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cooling {
    /// `0.001^(l / 1000)`.
    Geometric,
    /// `base * sqrt(plateau / max(l, plateau))`.
    SquareRoot {
        base_temperature: f64,
        plateau: u64,
    },
    Constant(f64),
}

impl Cooling {
    pub fn temperature(&self, l: u64) -> f64 {
        match *self {
            Cooling::Geometric => geometric_temperature(l),
            Cooling::SquareRoot {
                base_temperature,
                plateau,
            } => saa::sqrt_temperature_with(l, base_temperature, plateau),
            Cooling::Constant(t) => t,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub algorithm: Algorithm,
    pub k: usize,
    pub max_iterations: u64,
    /// Probability of proposing a local move (SA and SAA).
    pub alpha: f64,
    pub seed: u64,
    /// Density treated as "found" for early stopping.
    pub target_density: Option<f64>,
    /// Stop as soon as the best density reaches `target_density`.
    pub stop_at_target: bool,
    /// Overrides the algorithm's own schedule: geometric for SA, the
    /// `SaaConfig` square-root schedule for SAA. Ignored by SM.
    pub cooling: Option<Cooling>,
    /// Keep a log of every acceptance decision in the trace.
    pub record_decisions: bool,
    /// Check after every iteration that SA/SAA states stay connected.
    pub verify_connectivity: bool,
}

impl SamplerConfig {
    pub fn new(algorithm: Algorithm, k: usize, max_iterations: u64, seed: u64) -> Self {
        Self {
            algorithm,
            k,
            max_iterations,
            alpha: DEFAULT_ALPHA,
            seed,
            target_density: None,
            stop_at_target: false,
            cooling: None,
            record_decisions: false,
            verify_connectivity: false,
        }
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.k < 2 {
            return Err(invalid_arg(format!("k must be at least 2, got {}", self.k)));
        }
        if self.k > g.n() {
            return Err(Error::Infeasible(format!(
                "k = {} exceeds the node count {}",
                self.k,
                g.n()
            )));
        }
        if self.max_iterations == 0 {
            return Err(invalid_arg("max_iterations must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(invalid_arg(format!("alpha {} outside [0, 1]", self.alpha)));
        }
        if let Some(t) = self.target_density {
            if !(0.0..=1.0).contains(&t) {
                return Err(invalid_arg(format!("target density {t} outside [0, 1]")));
            }
        }
        if self.stop_at_target && self.target_density.is_none() {
            return Err(invalid_arg("stop_at_target requires a target density"));
        }
        Ok(())
    }
}

/// Live state of a chain.
#[derive(Debug, Clone)]
pub struct ChainState {
    pub current: Selection,
    pub current_edges: usize,
    pub current_density: f64,
    pub best: Selection,
    pub best_edges: usize,
    pub best_density: f64,
    /// Iteration at which `best` was first held; 0 for the initial selection.
    pub best_iteration: u64,
    pub iteration: u64,
    pub rng: ChainRng,
    /// SAA weights; `None` for SM and SA.
    pub theta: Option<ThetaVector>,
}

impl ChainState {
    fn new(g: &Graph, current: Selection, rng: ChainRng, theta: Option<ThetaVector>) -> Self {
        let edges = internal_edges(g, &current);
        let density = density_from_edges(edges, current.k());
        Self {
            best: current.clone(),
            current,
            current_edges: edges,
            current_density: density,
            best_edges: edges,
            best_density: density,
            best_iteration: 0,
            iteration: 0,
            rng,
            theta,
        }
    }

    fn set_current(&mut self, s: Selection, edges: usize) {
        self.current_density = density_from_edges(edges, s.k());
        self.current = s;
        self.current_edges = edges;
    }

    /// Strict improvement only, so ties keep the earliest selection.
    fn track_best(&mut self) {
        if self.current_edges > self.best_edges {
            self.best = self.current.clone();
            self.best_edges = self.current_edges;
            self.best_density = self.current_density;
            self.best_iteration = self.iteration;
        }
    }

    /// Whether the best selection is a clique, by exact edge count.
    pub fn found_clique(&self) -> bool {
        self.best_edges == clique_edges(self.best.k())
    }

    /// First iteration (counted from 1) at which the final best was held.
    pub fn first_hit(&self) -> u64 {
        self.best_iteration.max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub iteration: u64,
    pub density: f64,
    pub best_density: f64,
    pub temperature: f64,
    pub accepted: bool,
    pub region: Option<usize>,
}

/// One acceptance decision: accepted iff `draw < min{1, exp(log_ratio)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub iteration: u64,
    pub log_ratio: f64,
    pub draw: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub algorithm: Algorithm,
    pub records: Vec<TraceRecord>,
    /// Populated only when `SamplerConfig::record_decisions` is set.
    pub decisions: Vec<Decision>,
}

pub const TRACE_HEADER: &str = "iteration,density,best_density,temperature,accepted,region";

impl Trace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{TRACE_HEADER}")?;
        for r in &self.records {
            let region = r.region.map(|j| j.to_string()).unwrap_or_default();
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.iteration,
                fmt_sig17(r.density),
                fmt_sig17(r.best_density),
                fmt_sig17(r.temperature),
                r.accepted,
                region
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("trace CSV is ASCII")
    }
}

/// Parses trace CSV, reporting the 1-based line of the first malformed row.
pub fn read_trace_csv<R: BufRead>(reader: R) -> Result<Vec<TraceRecord>> {
    let mut lines = reader.lines();
    match lines.next() {
        Some(header) => {
            let header = header?;
            if header.trim_end_matches('\r') != TRACE_HEADER {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("expected header {TRACE_HEADER:?}"),
                });
            }
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "missing header".into(),
            })
        }
    }
    let mut records = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let lineno = idx + 2;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        records.push(parse_record(line).map_err(|message| Error::Parse {
            line: lineno,
            message,
        })?);
    }
    Ok(records)
}

fn parse_record(line: &str) -> std::result::Result<TraceRecord, String> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 6 {
        return Err(format!("expected 6 fields, found {}", fields.len()));
    }
    let num = |i: usize, name: &str| -> std::result::Result<f64, String> {
        fields[i]
            .parse::<f64>()
            .map_err(|_| format!("invalid {name} {:?}", fields[i]))
    };
    let iteration = fields[0]
        .parse::<u64>()
        .map_err(|_| format!("invalid iteration {:?}", fields[0]))?;
    let accepted = match fields[4] {
        "true" => true,
        "false" => false,
        other => return Err(format!("invalid accepted flag {other:?}")),
    };
    let region = match fields[5] {
        "" => None,
        s => Some(
            s.parse::<usize>()
                .map_err(|_| format!("invalid region {s:?}"))?,
        ),
    };
    Ok(TraceRecord {
        iteration,
        density: num(1, "density")?,
        best_density: num(2, "best_density")?,
        temperature: num(3, "temperature")?,
        accepted,
        region,
    })
}

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros removed.
pub fn fmt_sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-4..17).contains(&exp) {
        trim(&format!("{:.*}", (16 - exp) as usize, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim(mantissa), sign, exp.abs())
    }
}

/// `draw < min{1, exp(log_ratio)}`.
#[inline]
pub fn accept_with_draw(log_ratio: f64, draw: f64) -> bool {
    log_ratio >= 0.0 || draw < log_ratio.exp()
}

/// `0.001^(l / 1000)`.
pub fn geometric_temperature(l: u64) -> f64 {
    0.001f64.powf(l as f64 / 1000.0)
}

/// SM rule: always accept if `l_new <= l_old`, otherwise with probability
/// `exp(-(l_new - l_old) / k)`.
pub fn sm_log_ratio(l_new: u64, l_old: u64, k: usize) -> f64 {
    -(l_new as f64 - l_old as f64) / k as f64
}

pub fn sm_accept<R: Rng + ?Sized>(l_new: u64, l_old: u64, k: usize, rng: &mut R) -> bool {
    let u = rng::unit(rng);
    accept_with_draw(sm_log_ratio(l_new, l_old, k), u)
}

/// Metropolis rule on density: accept with probability `min{1, exp((d_new - d_old)/t)}`.
pub fn metropolis_accept_density<R: Rng + ?Sized>(
    d_new: f64,
    d_old: f64,
    t: f64,
    rng: &mut R,
) -> Result<bool> {
    if t.is_nan() || t <= 0.0 {
        return Err(invalid_arg(format!(
            "temperature must be positive, got {t}"
        )));
    }
    let u = rng::unit(rng);
    Ok(accept_with_draw((d_new - d_old) / t, u))
}

/// Random connected growth from `start` to `k` nodes; `None` if the grown set
/// runs out of neighbors first.
fn grow<R: Rng + ?Sized>(g: &Graph, start: usize, k: usize, rng: &mut R) -> Option<Selection> {
    let mut set = Vec::with_capacity(k);
    set.push(start);
    while set.len() < k {
        let frontier = neighbors_of_set(g, &set);
        if frontier.is_empty() {
            return None;
        }
        set.push(*rng::pick(rng, &frontier));
    }
    set.sort_unstable();
    Some(Selection::from_sorted_unchecked(set))
}

/// Connected starting selection: uniform start node, then uniform neighbors
/// of the grown set until it has `k` nodes.
pub fn init_selection<R: Rng + ?Sized>(g: &Graph, k: usize, rng: &mut R) -> Result<Selection> {
    if k == 0 || k > g.n() {
        return Err(Error::Infeasible(format!(
            "cannot select {k} of {} nodes",
            g.n()
        )));
    }
    for _ in 0..INIT_ATTEMPTS {
        let start = rng::pick_index(rng, g.n());
        if let Some(s) = grow(g, start, k, rng) {
            return Ok(s);
        }
    }
    Err(Error::Infeasible(format!(
        "no connected selection of size {k} found in {INIT_ATTEMPTS} growth attempts"
    )))
}

/// Swap in a uniform outside neighbor `u1`, then swap out a uniform member
/// whose removal keeps `s + u1` connected. `None` when `s` has no outside
/// neighbors.
pub fn local_move<R: Rng + ?Sized>(
    g: &Graph,
    s: &Selection,
    rng: &mut R,
) -> Result<Option<Selection>> {
    if !is_connected(g, s.nodes())? {
        return Err(invalid_arg("local move from a disconnected selection"));
    }
    let frontier = neighbors_of_set(g, s.nodes());
    if frontier.is_empty() {
        return Ok(None);
    }
    let incoming = *rng::pick(rng, &frontier);
    let mut grown = s.nodes().to_vec();
    grown.push(incoming);
    let removable: Vec<usize> = non_articulation_nodes(g, &grown)?
        .into_iter()
        .filter(|&v| v != incoming)
        .collect();
    if removable.is_empty() {
        return Ok(None);
    }
    let out = *rng::pick(rng, &removable);
    Ok(Some(s.swap(out, incoming)))
}

/// Fresh connected selection grown from a uniform node outside `s`. Stalled
/// growth is retried with a new start up to [`GLOBAL_MOVE_RETRIES`] times.
pub fn global_move<R: Rng + ?Sized>(
    g: &Graph,
    s: &Selection,
    k: usize,
    rng: &mut R,
) -> Result<Option<Selection>> {
    if k >= g.n() {
        return Err(invalid_arg(format!(
            "global move needs k < n (k = {k}, n = {})",
            g.n()
        )));
    }
    let outside: Vec<usize> = (0..g.n()).filter(|&v| !s.contains(v)).collect();
    if outside.is_empty() {
        return Err(invalid_arg("selection covers every node"));
    }
    for _ in 0..=GLOBAL_MOVE_RETRIES {
        let start = *rng::pick(rng, &outside);
        if let Some(next) = grow(g, start, k, rng) {
            return Ok(Some(next));
        }
    }
    Ok(None)
}

/// SM proposal: drop a uniform member `u0`, add a uniform outside neighbor of
/// the remaining set. Falls back to a uniform outside node when there is none;
/// returns `s` unchanged when `s` covers the graph.
pub fn sm_swap_move<R: Rng + ?Sized>(g: &Graph, s: &Selection, rng: &mut R) -> Selection {
    let out = *rng::pick(rng, s.nodes());
    let rest: Vec<usize> = s.nodes().iter().copied().filter(|&v| v != out).collect();
    let candidates: Vec<usize> = neighbors_of_set(g, &rest)
        .into_iter()
        .filter(|&v| v != out)
        .collect();
    let incoming = if candidates.is_empty() {
        let outside: Vec<usize> = (0..g.n()).filter(|&v| !s.contains(v)).collect();
        if outside.is_empty() {
            return s.clone();
        }
        *rng::pick(rng, &outside)
    } else {
        *rng::pick(rng, &candidates)
    };
    s.swap(out, incoming)
}

/// SM forced perturbation: replace a uniform member with a uniform node that
/// has no edge into `s`. Unchanged when no such node exists.
pub fn sm_ninth_step<R: Rng + ?Sized>(g: &Graph, s: &Selection, rng: &mut R) -> Selection {
    let touching = neighbors_of_set(g, s.nodes());
    let detached: Vec<usize> = (0..g.n())
        .filter(|&v| !s.contains(v) && touching.binary_search(&v).is_err())
        .collect();
    if detached.is_empty() {
        return s.clone();
    }
    let out = *rng::pick(rng, s.nodes());
    let incoming = *rng::pick(rng, &detached);
    s.swap(out, incoming)
}

/// Runs one chain for `cfg.max_iterations` iterations (or until the target is
/// reached when `stop_at_target` is set) and returns its trace and final state.
pub fn run_chain(
    g: &Graph,
    cfg: &SamplerConfig,
    saa_cfg: Option<&SaaConfig>,
) -> Result<(Trace, ChainState)> {
    cfg.validate(g)?;
    let saa_cfg = match (cfg.algorithm, saa_cfg) {
        (Algorithm::Saa, None) => return Err(invalid_arg("SAA requires an SAA configuration")),
        (Algorithm::Saa, Some(c)) => {
            c.validate()?;
            Some(c)
        }
        _ => None,
    };

    let mut rng = rng::seeded(cfg.seed);
    let start = init_selection(g, cfg.k, &mut rng)?;
    let theta = saa_cfg.map(|c| c.theta_init.clone());
    let mut state = ChainState::new(g, start, rng, theta);

    let capacity = usize::try_from(cfg.max_iterations)
        .unwrap_or(usize::MAX)
        .min(1 << 24);
    let mut trace = Trace {
        algorithm: cfg.algorithm,
        records: Vec::with_capacity(capacity),
        decisions: Vec::new(),
    };
    let target_edges = cfg.target_density.map(|t| {
        // Smallest edge count whose density reaches the target.
        let full = clique_edges(cfg.k);
        (0..=full)
            .find(|&e| density_from_edges(e, cfg.k) >= t - 1e-12)
            .unwrap_or(full)
    });

    let mut runner = Runner {
        g,
        cfg,
        saa: saa_cfg,
        sm_objective: match cfg.algorithm {
            Algorithm::Sm => distance_objective(g, &state.current),
            _ => 0,
        },
    };

    for l in 1..=cfg.max_iterations {
        state.iteration = l;
        let record = runner.step(&mut state, &mut trace.decisions)?;
        state.track_best();
        trace.records.push(TraceRecord {
            best_density: state.best_density,
            ..record
        });
        if cfg.verify_connectivity
            && cfg.algorithm != Algorithm::Sm
            && !is_connected(g, state.current.nodes())?
        {
            return Err(Error::InvalidArgument(format!(
                "chain left the connected state space at iteration {l}"
            )));
        }
        if cfg.stop_at_target && target_edges.is_some_and(|t| state.best_edges >= t) {
            break;
        }
    }
    Ok((trace, state))
}

struct Runner<'a> {
    g: &'a Graph,
    cfg: &'a SamplerConfig,
    saa: Option<&'a SaaConfig>,
    /// `L(S)` of the current SM state.
    sm_objective: u64,
}

impl Runner<'_> {
    fn step(&mut self, state: &mut ChainState, log: &mut Vec<Decision>) -> Result<TraceRecord> {
        match self.cfg.algorithm {
            Algorithm::Sm => Ok(self.sm_step(state, log)),
            Algorithm::Sa | Algorithm::Saa => self.density_step(state, log),
        }
    }

    fn sm_step(&mut self, state: &mut ChainState, log: &mut Vec<Decision>) -> TraceRecord {
        let (g, k, l) = (self.g, self.cfg.k, state.iteration);
        let proposal = sm_swap_move(g, &state.current, &mut state.rng);
        let proposed_objective = distance_objective(g, &proposal);
        let log_ratio = sm_log_ratio(proposed_objective, self.sm_objective, k);
        let draw = rng::unit(&mut state.rng);
        let accepted = accept_with_draw(log_ratio, draw);
        if self.cfg.record_decisions {
            log.push(Decision {
                iteration: l,
                log_ratio,
                draw,
                accepted,
            });
        }
        if accepted {
            let edges = internal_edges(g, &proposal);
            state.set_current(proposal, edges);
            self.sm_objective = proposed_objective;
        }
        if l % SM_PERTURB_EVERY == 0 {
            let moved = sm_ninth_step(g, &state.current, &mut state.rng);
            if moved != state.current {
                self.sm_objective = distance_objective(g, &moved);
                let edges = internal_edges(g, &moved);
                state.set_current(moved, edges);
            }
        }
        TraceRecord {
            iteration: l,
            density: state.current_density,
            best_density: state.best_density,
            // SM's Boltzmann factor exp(-dL / k) has temperature k.
            temperature: k as f64,
            accepted,
            region: None,
        }
    }

    fn density_step(
        &mut self,
        state: &mut ChainState,
        log: &mut Vec<Decision>,
    ) -> Result<TraceRecord> {
        let (g, k, l) = (self.g, self.cfg.k, state.iteration);
        let temperature = match (self.cfg.cooling, self.saa) {
            (Some(c), _) => c.temperature(l),
            (None, Some(saa)) => saa.temperature(l),
            (None, None) => geometric_temperature(l),
        };

        let proposal = if rng::unit(&mut state.rng) < self.cfg.alpha {
            local_move(g, &state.current, &mut state.rng)?
        } else if k < g.n() {
            global_move(g, &state.current, k, &mut state.rng)?
        } else {
            None
        };

        let region_of = |saa: &SaaConfig, d: f64| saa::region_index(&saa.partition, d);
        let mut accepted = false;
        if let Some(next) = proposal {
            let edges = internal_edges(g, &next);
            let d_new = density_from_edges(edges, k);
            let mut log_ratio = (d_new - state.current_density) / temperature;
            if let (Some(saa), Some(theta)) = (self.saa, state.theta.as_ref()) {
                let j_old = region_of(saa, state.current_density)?;
                let j_new = region_of(saa, d_new)?;
                log_ratio += theta.weight(j_old) - theta.weight(j_new);
            }
            let draw = rng::unit(&mut state.rng);
            accepted = accept_with_draw(log_ratio, draw);
            if self.cfg.record_decisions {
                log.push(Decision {
                    iteration: l,
                    log_ratio,
                    draw,
                    accepted,
                });
            }
            if accepted {
                state.set_current(next, edges);
            }
        }

        let mut region = None;
        if let (Some(saa), Some(theta)) = (self.saa, state.theta.as_mut()) {
            let j = region_of(saa, state.current_density)?;
            theta.update(j, &saa.pi, saa.gain(l))?;
            region = Some(j);
        }
        Ok(TraceRecord {
            iteration: l,
            density: state.current_density,
            best_density: state.best_density,
            temperature,
            accepted,
            region,
        })
    }
}
