//! Mobile cloud offloading over C-RAN: a task of `F` giga-operations that moves
//! `D` bits must finish within `τ`, split between clone execution `F/f^C` and
//! radio transmission `D/r`.

use crate::cran::CranConfig;
use crate::error::{Error, Result};
use crate::scalar::{int, lossy, real, Real, Scalar};
use crate::search::golden_section;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MccTask<T = f64> {
    cpu_gops: T,
    data_bits: T,
    deadline_s: T,
}

impl<T: Scalar> MccTask<T> {
    pub fn new(cpu_gops: T, data_bits: T, deadline_s: T) -> Result<Self> {
        if !(cpu_gops > T::zero() && lossy(cpu_gops).is_finite()) {
            return Err(Error::domain("task size F must be finite and > 0"));
        }
        if !(data_bits >= T::zero() && lossy(data_bits).is_finite()) {
            return Err(Error::domain("data volume D must be finite and >= 0"));
        }
        if !(deadline_s > T::zero() && lossy(deadline_s).is_finite()) {
            return Err(Error::domain("deadline tau must be finite and > 0"));
        }
        Ok(Self { cpu_gops, data_bits, deadline_s })
    }

    pub fn cpu_gops(&self) -> T {
        self.cpu_gops
    }

    pub fn data_bits(&self) -> T {
        self.data_bits
    }

    pub fn deadline(&self) -> T {
        self.deadline_s
    }

    /// Transmission time `D/r`; zero for a pure compute task regardless of rate.
    fn transmission_time(&self, rate: T) -> Result<T> {
        if self.data_bits == T::zero() {
            return Ok(T::zero());
        }
        if !(rate > T::zero()) {
            return Err(Error::InfeasibleDeadline {
                deadline: lossy(self.deadline_s),
                transmission: f64::INFINITY,
            });
        }
        Ok(self.data_bits / rate)
    }

    fn check_deadline(&self, rate: T) -> Result<T> {
        let transmission = self.transmission_time(rate)?;
        if self.deadline_s <= transmission {
            return Err(Error::InfeasibleDeadline {
                deadline: lossy(self.deadline_s),
                transmission: lossy(transmission),
            });
        }
        Ok(transmission)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloneAllocation<T = f64> {
    clone_capacity: T,
}

impl<T: Scalar> CloneAllocation<T> {
    pub fn new(clone_capacity: T) -> Result<Self> {
        if !(clone_capacity > T::zero() && lossy(clone_capacity).is_finite()) {
            return Err(Error::domain("clone capacity f^C must be finite and > 0"));
        }
        Ok(Self { clone_capacity })
    }

    pub fn gops(&self) -> T {
        self.clone_capacity
    }
}

/// End-to-end time `F/f^C + D/r`.
pub fn total_latency<T: Scalar>(task: &MccTask<T>, clone_gops: T, rate: T) -> Result<T> {
    if !(clone_gops > T::zero()) {
        return Err(Error::domain("clone capacity f^C must be > 0"));
    }
    if !(rate > T::zero()) {
        return Err(Error::domain("data rate r must be > 0"));
    }
    Ok(task.cpu_gops / clone_gops + task.data_bits / rate)
}

/// Clone capacity that meets the deadline at a given rate, `F/(τ - D/r)`.
pub fn clone_capacity_for_rate<T: Scalar>(task: &MccTask<T>, rate: T) -> Result<T> {
    if !(rate > T::zero()) {
        return Err(Error::domain("data rate r must be > 0"));
    }
    let transmission = task.check_deadline(rate)?;
    Ok(task.cpu_gops / (task.deadline_s - transmission))
}

/// Clone capacity that meets the deadline when the BBU gets `fb` GOPS, in the
/// closed form obtained by substituting the rate-from-compute relation:
///
/// `f^C = 3Fκ^B·X / (3κ^B·τ·X + A·D·κ^A)` with `X = A²B + 3AB - 10 f^B κ^A`.
///
/// `InfeasibleRate` when `fb` is below the overhead floor, `InfeasibleDeadline`
/// when `τ <= D/r`.
pub fn clone_capacity_for_qos<T: Scalar>(task: &MccTask<T>, config: &CranConfig<T>, fb: T) -> Result<T> {
    let rate = config.rate_from_compute(fb)?;
    task.check_deadline(rate)?;
    if task.data_bits == T::zero() {
        return Ok(task.cpu_gops / task.deadline_s);
    }
    let a: T = int(config.antennas());
    let b = config.bandwidth_hz();
    let (ka, kb) = (config.kappa_a(), config.kappa_b());
    let three: T = int(3);
    let x = a * a * b + three * a * b - int::<T>(10) * fb * ka;
    let num = three * task.cpu_gops * kb * x;
    let den = three * kb * task.deadline_s * x + a * task.data_bits * ka;
    Ok(num / den)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanWeights<T = f64> {
    /// Cost per BBU GOPS.
    pub bbu: T,
    /// Cost per clone GOPS.
    pub clone: T,
}

impl<T: Real> Default for PlanWeights<T> {
    fn default() -> Self {
        Self { bbu: T::one(), clone: T::one() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanOptions<T = f64> {
    /// Upper end of the BBU search interval. Defaults to ten times the compute
    /// that makes transmission take a tenth of the deadline.
    pub fb_max: Option<T>,
    pub rel_tol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for PlanOptions<T> {
    fn default() -> Self {
        Self { fb_max: None, rel_tol: real(1e-9), max_iter: 500 }
    }
}

/// Joint BBU / clone allocation minimizing weighted GOPS under the deadline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointPlan<T = f64> {
    pub bbu_gops: T,
    pub clone_gops: T,
    pub achieved_rate: T,
    pub total_latency: T,
    pub objective_value: T,
}

/// Search interval `(fb_floor, fb_max]` for [`plan_joint`]. `fb_floor` is the
/// compute at which the rate exactly equals `D/τ`.
pub fn plan_interval<T: Real>(task: &MccTask<T>, config: &CranConfig<T>, options: &PlanOptions<T>) -> Result<(T, T)> {
    let tau = task.deadline();
    let d = task.data_bits();
    let floor = config.compute_from_rate(d / tau)?;
    let ten: T = real(10.0);
    let fb_max = match options.fb_max {
        Some(v) => v,
        None => ten * config.compute_from_rate(ten * d / tau)?,
    };
    if !(fb_max > floor) {
        return Err(Error::Infeasible(format!(
            "no BBU budget in ({}, {}] GOPS leaves time for the clone",
            lossy(floor),
            lossy(fb_max)
        )));
    }
    Ok((floor, fb_max))
}

/// Weighted cost `w_B·f^B + w_C·f^C(f^B)`, or `+inf` where the deadline cannot be met.
pub fn plan_objective<T: Real>(task: &MccTask<T>, config: &CranConfig<T>, weights: &PlanWeights<T>, fb: T) -> T {
    match clone_capacity_for_qos(task, config, fb) {
        Ok(fc) if fc > T::zero() && fc.is_finite() => weights.bbu * fb + weights.clone * fc,
        _ => T::infinity(),
    }
}

/// Golden-section search over the BBU budget; the clone capacity follows from
/// the deadline at each candidate.
pub fn plan_joint<T: Real>(
    task: &MccTask<T>,
    config: &CranConfig<T>,
    weights: &PlanWeights<T>,
    options: &PlanOptions<T>,
) -> Result<JointPlan<T>> {
    if !(weights.bbu > T::zero() && weights.clone > T::zero()) {
        return Err(Error::domain("plan weights must be > 0"));
    }
    let (floor, fb_max) = plan_interval(task, config, options)?;
    let best = golden_section(
        |fb| plan_objective(task, config, weights, fb),
        floor,
        fb_max,
        options.rel_tol,
        options.max_iter,
    );
    if !best.value.is_finite() {
        return Err(Error::Infeasible("deadline is unreachable across the BBU search interval".into()));
    }
    let fb = best.x;
    let clone_gops = clone_capacity_for_qos(task, config, fb)?;
    let achieved_rate = config.rate_from_compute(fb)?;
    Ok(JointPlan {
        bbu_gops: fb,
        clone_gops,
        achieved_rate,
        total_latency: total_latency(task, clone_gops, achieved_rate)?,
        objective_value: best.value,
    })
}
