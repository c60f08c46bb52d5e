//! Event-driven M/M/1 simulation of the SDN controller.
//!
//! Southbound jobs come from thinning a rate-`λ` Poisson stream with
//! Bernoulli(`p`); northbound jobs come from an independent rate-`μ` stream. One
//! FIFO server with exponential service at rate `f^S`. Each replication owns a
//! private random substream, so replications are independent and can run in
//! parallel without changing the result.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::sdn::SdnScenario;
use crate::stats::{exponential_from_uniform, sample_normal, RandomStream, RngSeed};

pub const MIN_JOBS: u64 = 10_000;
pub const MIN_WARMUP_JOBS: u64 = 1_000;

/// How a job's outage is decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutageSemantics {
    /// The replication's empirical mean sojourn is compared against one
    /// deadline draw per observed job, mirroring the analytical outage.
    #[default]
    Analytic,
    /// Each job's own sojourn is compared against its own deadline draw.
    PerJob,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub scenario: SdnScenario<f64>,
    /// Observed jobs per replication, after warm-up.
    pub num_jobs: u64,
    pub warmup_jobs: u64,
    pub seed: RngSeed,
    pub replications: u32,
    pub semantics: OutageSemantics,
}

impl SimConfig {
    pub fn new(scenario: SdnScenario<f64>, seed: RngSeed) -> Self {
        Self {
            scenario,
            num_jobs: 100_000,
            warmup_jobs: MIN_WARMUP_JOBS,
            seed,
            replications: 5,
            semantics: OutageSemantics::Analytic,
        }
    }

    pub fn with_jobs(mut self, num_jobs: u64) -> Self {
        self.num_jobs = num_jobs;
        self
    }

    pub fn with_warmup(mut self, warmup_jobs: u64) -> Self {
        self.warmup_jobs = warmup_jobs;
        self
    }

    pub fn with_replications(mut self, replications: u32) -> Self {
        self.replications = replications;
        self
    }

    pub fn with_semantics(mut self, semantics: OutageSemantics) -> Self {
        self.semantics = semantics;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.num_jobs < MIN_JOBS {
            return Err(Error::Config(format!("num_jobs must be >= {MIN_JOBS}, got {}", self.num_jobs)));
        }
        if self.warmup_jobs < MIN_WARMUP_JOBS {
            return Err(Error::Config(format!(
                "warmup_jobs must be >= {MIN_WARMUP_JOBS}, got {}",
                self.warmup_jobs
            )));
        }
        if self.replications == 0 {
            return Err(Error::Config("replications must be >= 1".into()));
        }
        self.scenario.require_stable()?;
        if self.scenario.offered_load() <= 0.0 {
            return Err(Error::Config("scenario has no arrivals (p·lambda + mu = 0)".into()));
        }
        Ok(())
    }
}

/// Statistics from one replication.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicationStats {
    pub mean_sojourn: f64,
    pub outage_fraction: f64,
    /// Time-average number of jobs in the system over the observation window.
    pub mean_in_system: f64,
    /// Arrivals per second over the observation window.
    pub arrival_rate: f64,
    pub jobs_observed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub mean_sojourn: f64,
    pub outage_fraction: f64,
    /// 95% Student-t half-width across replications; infinite with one replication.
    pub ci_halfwidth_sojourn: f64,
    pub ci_halfwidth_outage: f64,
    pub mean_in_system: f64,
    pub arrival_rate: f64,
    pub jobs_observed: u64,
    pub replications: Vec<ReplicationStats>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EventKind {
    SouthboundArrival,
    NorthboundArrival,
    Departure,
}

#[derive(Debug, Clone, Copy)]
struct Event {
    time: f64,
    seq: u64,
    kind: EventKind,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// Reversed so the max-heap pops the earliest event; equal times pop in
// scheduling order.
impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        other.time.total_cmp(&self.time).then_with(|| other.seq.cmp(&self.seq))
    }
}

#[derive(Default)]
struct EventQueue {
    heap: BinaryHeap<Event>,
    next_seq: u64,
}

impl EventQueue {
    fn schedule(&mut self, time: f64, kind: EventKind) {
        self.heap.push(Event { time, seq: self.next_seq, kind });
        self.next_seq += 1;
    }

    fn pop(&mut self) -> Option<Event> {
        self.heap.pop()
    }
}

struct Rates {
    southbound: f64,
    miss_probability: f64,
    northbound: f64,
    service: f64,
}

impl Rates {
    fn of(s: &SdnScenario<f64>) -> Self {
        // A stream that can never deliver a job is not scheduled at all.
        let southbound = if s.miss_probability() > 0.0 { s.switch_arrival_rate() } else { 0.0 };
        Self {
            southbound,
            miss_probability: s.miss_probability(),
            northbound: s.instruction_rate(),
            service: s.controller_capacity(),
        }
    }
}

fn draw(rate: f64, stream: &mut RandomStream) -> f64 {
    exponential_from_uniform(rate, stream.uniform_open_closed())
}

/// Runs replication `index` of `cfg`.
pub fn simulate_replication(cfg: &SimConfig, index: u32) -> Result<ReplicationStats> {
    cfg.validate()?;
    Ok(run_replication(cfg, index))
}

fn run_replication(cfg: &SimConfig, index: u32) -> ReplicationStats {
    let mut stream = RandomStream::substream(cfg.seed, u64::from(index));
    let rates = Rates::of(&cfg.scenario);
    let deadline = *cfg.scenario.deadline();
    let target = cfg.warmup_jobs + cfg.num_jobs;

    let mut events = EventQueue::default();
    if rates.southbound > 0.0 {
        events.schedule(draw(rates.southbound, &mut stream), EventKind::SouthboundArrival);
    }
    if rates.northbound > 0.0 {
        events.schedule(draw(rates.northbound, &mut stream), EventKind::NorthboundArrival);
    }

    let mut in_system: VecDeque<f64> = VecDeque::new();
    let mut departures = 0u64;
    let mut sojourn_sum = 0.0;
    let mut per_job_outages = 0u64;

    let mut last_time = 0.0;
    let mut window_start = 0.0;
    let mut area = 0.0;
    let mut window_arrivals = 0u64;
    let observing = |departures: u64| departures >= cfg.warmup_jobs;

    while departures < target {
        let Some(event) = events.pop() else { break };
        let now = event.time;
        if observing(departures) {
            area += in_system.len() as f64 * (now - last_time);
        }
        last_time = now;

        match event.kind {
            EventKind::SouthboundArrival | EventKind::NorthboundArrival => {
                let accepted = if event.kind == EventKind::SouthboundArrival {
                    events.schedule(now + draw(rates.southbound, &mut stream), EventKind::SouthboundArrival);
                    rates.miss_probability >= 1.0 || stream.uniform() < rates.miss_probability
                } else {
                    events.schedule(now + draw(rates.northbound, &mut stream), EventKind::NorthboundArrival);
                    true
                };
                if accepted {
                    if observing(departures) {
                        window_arrivals += 1;
                    }
                    in_system.push_back(now);
                    if in_system.len() == 1 {
                        events.schedule(now + draw(rates.service, &mut stream), EventKind::Departure);
                    }
                }
            }
            EventKind::Departure => {
                let arrived = in_system.pop_front().expect("departure implies a job in service");
                if observing(departures) {
                    let sojourn = now - arrived;
                    sojourn_sum += sojourn;
                    if cfg.semantics == OutageSemantics::PerJob && sojourn > sample_normal(&deadline, &mut stream) {
                        per_job_outages += 1;
                    }
                }
                departures += 1;
                if departures == cfg.warmup_jobs {
                    window_start = now;
                }
                if !in_system.is_empty() {
                    events.schedule(now + draw(rates.service, &mut stream), EventKind::Departure);
                }
            }
        }
    }

    let observed = departures.saturating_sub(cfg.warmup_jobs);
    let mean_sojourn = sojourn_sum / observed as f64;
    let outages = match cfg.semantics {
        OutageSemantics::PerJob => per_job_outages,
        OutageSemantics::Analytic => {
            (0..observed).filter(|_| sample_normal(&deadline, &mut stream) < mean_sojourn).count() as u64
        }
    };
    let window = last_time - window_start;
    ReplicationStats {
        mean_sojourn,
        outage_fraction: outages as f64 / observed as f64,
        mean_in_system: area / window,
        arrival_rate: window_arrivals as f64 / window,
        jobs_observed: observed,
    }
}

fn mean_and_halfwidth(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let t = StudentsT::new(0.0, 1.0, n - 1.0).expect("degrees of freedom >= 1").inverse_cdf(0.975);
    (mean, t * (var / n).sqrt())
}

/// Simulates all replications and pools them. Unstable scenarios are rejected.
pub fn simulate(cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let replications: Vec<ReplicationStats> =
        (0..cfg.replications).into_par_iter().map(|i| run_replication(cfg, i)).collect();

    let column = |f: fn(&ReplicationStats) -> f64| replications.iter().map(f).collect::<Vec<_>>();
    let (mean_sojourn, ci_halfwidth_sojourn) = mean_and_halfwidth(&column(|r| r.mean_sojourn));
    let (outage_fraction, ci_halfwidth_outage) = mean_and_halfwidth(&column(|r| r.outage_fraction));
    let (mean_in_system, _) = mean_and_halfwidth(&column(|r| r.mean_in_system));
    let (arrival_rate, _) = mean_and_halfwidth(&column(|r| r.arrival_rate));
    Ok(SimResult {
        mean_sojourn,
        outage_fraction,
        ci_halfwidth_sojourn,
        ci_halfwidth_outage,
        mean_in_system,
        arrival_rate,
        jobs_observed: replications.iter().map(|r| r.jobs_observed).sum(),
        replications,
    })
}

/// Empirical rate of the merged controller arrival stream over `cfg.num_jobs`
/// merged arrivals (service is not simulated). Zero when neither stream can
/// produce a job.
pub fn merged_arrival_check(cfg: &SimConfig) -> Result<f64> {
    cfg.scenario.require_stable()?;
    let rates = Rates::of(&cfg.scenario);
    if rates.southbound <= 0.0 && rates.northbound <= 0.0 {
        return Ok(0.0);
    }
    let mut stream = RandomStream::new(cfg.seed);
    let mut events = EventQueue::default();
    if rates.southbound > 0.0 {
        events.schedule(draw(rates.southbound, &mut stream), EventKind::SouthboundArrival);
    }
    if rates.northbound > 0.0 {
        events.schedule(draw(rates.northbound, &mut stream), EventKind::NorthboundArrival);
    }
    let mut arrivals = 0u64;
    let mut now = 0.0;
    while arrivals < cfg.num_jobs {
        let event = events.pop().expect("arrival streams never run dry");
        now = event.time;
        let accepted = match event.kind {
            EventKind::SouthboundArrival => {
                events.schedule(now + draw(rates.southbound, &mut stream), EventKind::SouthboundArrival);
                rates.miss_probability >= 1.0 || stream.uniform() < rates.miss_probability
            }
            _ => {
                events.schedule(now + draw(rates.northbound, &mut stream), EventKind::NorthboundArrival);
                true
            }
        };
        if accepted {
            arrivals += 1;
        }
    }
    Ok(arrivals as f64 / now)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::NormalDeadline;

    fn scenario(fs: f64, lambda: f64, p: f64, mu: f64) -> SdnScenario {
        SdnScenario::new(fs, lambda, p, mu, NormalDeadline::new(7.0, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn event_order_is_time_then_fifo() {
        let mut q = EventQueue::default();
        q.schedule(2.0, EventKind::Departure);
        q.schedule(1.0, EventKind::NorthboundArrival);
        q.schedule(1.0, EventKind::SouthboundArrival);
        let order: Vec<_> = std::iter::from_fn(|| q.pop()).map(|e| (e.time, e.kind)).collect();
        assert_eq!(
            order,
            vec![
                (1.0, EventKind::NorthboundArrival),
                (1.0, EventKind::SouthboundArrival),
                (2.0, EventKind::Departure)
            ]
        );
    }

    #[test]
    fn rejects_unstable_and_small_configs() {
        let unstable = SimConfig::new(scenario(6.0, 8.0, 0.5, 2.0), RngSeed(1));
        assert!(matches!(simulate(&unstable), Err(Error::Unstable { .. })));
        let ok = SimConfig::new(scenario(8.0, 8.0, 0.5, 2.0), RngSeed(1));
        assert!(matches!(simulate(&ok.with_jobs(100)), Err(Error::Config(_))));
        assert!(matches!(simulate(&ok.with_warmup(10)), Err(Error::Config(_))));
        assert!(matches!(simulate(&ok.with_replications(0)), Err(Error::Config(_))));
        let empty = SimConfig::new(scenario(8.0, 0.0, 0.5, 0.0), RngSeed(1));
        assert!(matches!(simulate(&empty), Err(Error::Config(_))));
    }

    #[test]
    fn single_stream_sojourn() {
        let cfg = SimConfig::new(scenario(8.0, 0.0, 0.5, 2.0), RngSeed(11)).with_jobs(200_000);
        let r = simulate(&cfg).unwrap();
        assert!((r.mean_sojourn / (1.0 / 6.0) - 1.0).abs() < 0.02, "{}", r.mean_sojourn);
        assert_eq!(r.jobs_observed, 5 * 200_000);
    }

    #[test]
    fn merged_rate_examples() {
        let base = |p, mu| SimConfig::new(scenario(20.0, 8.0, p, mu), RngSeed(3)).with_jobs(1_000_000);
        let r = merged_arrival_check(&base(0.5, 2.0)).unwrap();
        assert!((r - 6.0).abs() < 0.06, "{r}");
        assert_eq!(merged_arrival_check(&base(0.0, 0.0)).unwrap(), 0.0);
        let r = merged_arrival_check(&base(1.0, 0.0)).unwrap();
        assert!((r - 8.0).abs() < 0.08, "{r}");
    }

    #[test]
    fn per_job_mode_runs() {
        // Per-job outage uses the full sojourn distribution, so it exceeds the
        // mean-based outage when the mean sits below the deadline mean.
        let s = scenario(6.2, 8.0, 0.5, 2.0);
        let cfg = SimConfig::new(s, RngSeed(5)).with_jobs(50_000);
        let analytic = simulate(&cfg).unwrap();
        let per_job = simulate(&cfg.with_semantics(OutageSemantics::PerJob)).unwrap();
        assert!(per_job.outage_fraction > analytic.outage_fraction);
        assert!((0.0..=1.0).contains(&per_job.outage_fraction));
    }

    #[test]
    fn one_replication_has_unbounded_interval() {
        let cfg = SimConfig::new(scenario(8.0, 8.0, 0.5, 2.0), RngSeed(2)).with_replications(1);
        let r = simulate(&cfg).unwrap();
        assert!(r.ci_halfwidth_sojourn.is_infinite());
    }

    #[test]
    fn halfwidth_matches_t_table() {
        // t(0.975, 4) = 2.776445105
        let (m, h) = mean_and_halfwidth(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(m, 3.0);
        assert!((h - 2.776445105 * (2.5f64 / 5.0).sqrt()).abs() < 1e-8);
    }
}
