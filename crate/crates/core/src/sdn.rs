//! SDN controller as an M/M/1 queue fed by escalated switch traffic and
//! northbound application instructions.

use crate::error::{Error, Result};
use crate::scalar::{lossy, Real};
use crate::stats::{ln_q_unchecked, q_unchecked, NormalDeadline};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdnScenario<T = f64> {
    /// Controller service rate `f^S`, jobs per second.
    controller_capacity: T,
    /// Packet arrival rate at the switches `λ`, packets per second.
    switch_arrival_rate: T,
    /// Flow-table miss probability `p`.
    miss_probability: T,
    /// Northbound instruction rate `μ`, per second.
    instruction_rate: T,
    deadline: NormalDeadline<T>,
}

/// Mean time in the controller, or the marker that the queue never drains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sojourn<T> {
    Stable(T),
    Unstable,
}

impl<T> Sojourn<T> {
    pub fn stable(self) -> Option<T> {
        match self {
            Sojourn::Stable(t) => Some(t),
            Sojourn::Unstable => None,
        }
    }

    pub fn is_unstable(&self) -> bool {
        matches!(self, Sojourn::Unstable)
    }
}

impl<T: Real> SdnScenario<T> {
    pub fn new(
        controller_capacity: T,
        switch_arrival_rate: T,
        miss_probability: T,
        instruction_rate: T,
        deadline: NormalDeadline<T>,
    ) -> Result<Self> {
        let finite_nonneg = |v: T| v.is_finite() && v >= T::zero();
        if !(controller_capacity.is_finite() && controller_capacity > T::zero()) {
            return Err(Error::domain("controller capacity f^S must be finite and > 0"));
        }
        if !finite_nonneg(switch_arrival_rate) {
            return Err(Error::domain("switch arrival rate lambda must be finite and >= 0"));
        }
        if !finite_nonneg(instruction_rate) {
            return Err(Error::domain("instruction rate mu must be finite and >= 0"));
        }
        if !(miss_probability >= T::zero() && miss_probability <= T::one()) {
            return Err(Error::domain("miss probability p must lie in [0, 1]"));
        }
        Ok(Self {
            controller_capacity,
            switch_arrival_rate,
            miss_probability,
            instruction_rate,
            deadline,
        })
    }

    pub fn controller_capacity(&self) -> T {
        self.controller_capacity
    }

    pub fn switch_arrival_rate(&self) -> T {
        self.switch_arrival_rate
    }

    pub fn miss_probability(&self) -> T {
        self.miss_probability
    }

    pub fn instruction_rate(&self) -> T {
        self.instruction_rate
    }

    pub fn deadline(&self) -> &NormalDeadline<T> {
        &self.deadline
    }

    pub fn with_controller_capacity(mut self, capacity: T) -> Result<Self> {
        if !(capacity.is_finite() && capacity > T::zero()) {
            return Err(Error::domain("controller capacity f^S must be finite and > 0"));
        }
        self.controller_capacity = capacity;
        Ok(self)
    }

    /// Arrival rate at the controller: escalated misses `p·λ` plus northbound `μ`.
    pub fn offered_load(&self) -> T {
        self.miss_probability * self.switch_arrival_rate + self.instruction_rate
    }

    pub fn utilization(&self) -> T {
        self.offered_load() / self.controller_capacity
    }

    /// M/M/1 mean sojourn time `1 / (f^S - p·λ - μ)`. Capacity equal to the
    /// offered load is already unstable.
    pub fn mean_sojourn_time(&self) -> Sojourn<T> {
        let slack = self.controller_capacity - self.offered_load();
        if slack > T::zero() {
            Sojourn::Stable(slack.recip())
        } else {
            Sojourn::Unstable
        }
    }

    pub fn require_stable(&self) -> Result<T> {
        self.mean_sojourn_time().stable().ok_or(Error::Unstable {
            offered_load: lossy(self.offered_load()),
            capacity: lossy(self.controller_capacity),
        })
    }

    /// Probability that the mean controller delay exceeds the random deadline,
    /// `1 - Q((T - ρ) / σ)`. Exactly 1 when the queue is unstable.
    pub fn outage_probability(&self) -> T {
        let Sojourn::Stable(delay) = self.mean_sojourn_time() else {
            return T::one();
        };
        let z = (delay - self.deadline.mean()) / self.deadline.std_dev();
        if !z.is_finite() {
            return T::one();
        }
        T::one() - q_unchecked(z)
    }

    /// `ln(1 - outage)`, the log probability that the deadline is met. Resolves
    /// outages that round to exactly 1 in floating point; `-inf` when unstable.
    pub fn ln_outage_complement(&self) -> T {
        let Sojourn::Stable(delay) = self.mean_sojourn_time() else {
            return T::neg_infinity();
        };
        let z = (delay - self.deadline.mean()) / self.deadline.std_dev();
        if !z.is_finite() {
            return T::neg_infinity();
        }
        ln_q_unchecked(z)
    }
}
