//! C-RAN baseband unit compute model.
//!
//! Compute per UE is `f^B = (R/10)(3A + A² + MCA/3)` GOPS for `R` resource blocks,
//! `A` antennas, `M` modulation bits and code rate `C`; the OFDMA rate is
//! `r = κ^B·R·M·C` bit/s and `R = B/κ^A`. Eliminating `M·C` gives the rate a
//! compute budget can carry, `r = 3κ^B(10 f^B/A - 3B/κ^A - A·B/κ^A)`.
//!
//! Only field operations are used, so everything here also runs over exact
//! rationals.

use crate::error::{Error, Result};
use crate::scalar::{int, lossy, Scalar};

/// Hz per resource block.
pub const DEFAULT_KAPPA_A: f64 = 2.0e5;
/// Per-RB rate constant, with 10% overhead for reference and control signalling.
pub const DEFAULT_KAPPA_B: f64 = 1.68e5;

/// Modulation orders accepted by default: QPSK, 16-, 64- and 256-QAM.
pub const MODULATION_PROFILE: [u32; 4] = [2, 4, 6, 8];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CranConfig<T = f64> {
    antennas: u32,
    bandwidth_hz: T,
    modulation_bits: u32,
    code_rate: T,
    kappa_a: T,
    kappa_b: T,
}

impl<T: Scalar> CranConfig<T> {
    /// Config with the default κ constants.
    pub fn new(antennas: u32, bandwidth_hz: T, modulation_bits: u32, code_rate: T) -> Result<Self> {
        Self::with_kappas(antennas, bandwidth_hz, modulation_bits, code_rate, int(200_000), int(168_000))
    }

    pub fn with_kappas(
        antennas: u32,
        bandwidth_hz: T,
        modulation_bits: u32,
        code_rate: T,
        kappa_a: T,
        kappa_b: T,
    ) -> Result<Self> {
        if antennas == 0 {
            return Err(Error::domain("antenna count A must be >= 1"));
        }
        if !(bandwidth_hz > T::zero() && lossy(bandwidth_hz).is_finite()) {
            return Err(Error::domain("bandwidth B must be finite and > 0"));
        }
        if !MODULATION_PROFILE.contains(&modulation_bits) {
            return Err(Error::domain(format!(
                "modulation bits M must be one of {MODULATION_PROFILE:?}, got {modulation_bits}"
            )));
        }
        if !(code_rate > T::zero() && code_rate <= T::one()) {
            return Err(Error::domain("code rate C must lie in (0, 1]"));
        }
        if !(kappa_a > T::zero() && kappa_b > T::zero()) {
            return Err(Error::domain("kappa constants must be > 0"));
        }
        Ok(Self { antennas, bandwidth_hz, modulation_bits, code_rate, kappa_a, kappa_b })
    }

    pub fn antennas(&self) -> u32 {
        self.antennas
    }

    pub fn bandwidth_hz(&self) -> T {
        self.bandwidth_hz
    }

    pub fn modulation_bits(&self) -> u32 {
        self.modulation_bits
    }

    pub fn code_rate(&self) -> T {
        self.code_rate
    }

    pub fn kappa_a(&self) -> T {
        self.kappa_a
    }

    pub fn kappa_b(&self) -> T {
        self.kappa_b
    }

    fn a(&self) -> T {
        int(self.antennas)
    }

    fn mc(&self) -> T {
        int::<T>(self.modulation_bits) * self.code_rate
    }

    /// Resource blocks `B/κ^A`, kept real-valued.
    pub fn blocks_from_bandwidth(&self) -> T {
        self.bandwidth_hz / self.kappa_a
    }

    /// GOPS needed to process `blocks` resource blocks at this MCS and antenna count.
    pub fn required_gops(&self, blocks: T) -> Result<T> {
        non_negative(blocks, "resource blocks R")?;
        let a = self.a();
        let per_block = int::<T>(3) * a + a * a + self.mc() * a / int(3);
        Ok(blocks / int(10) * per_block)
    }

    /// OFDMA rate `κ^B·R·M·C` in bit/s.
    pub fn rate_from_mcs(&self, blocks: T) -> Result<T> {
        non_negative(blocks, "resource blocks R")?;
        Ok(self.kappa_b * blocks * self.mc())
    }

    /// Compute below which no payload can be carried at this `(A, B)`:
    /// `A(3 + A)B / (10κ^A)`.
    pub fn overhead_floor(&self) -> T {
        let a = self.a();
        a * (int::<T>(3) + a) * self.blocks_from_bandwidth() / int(10)
    }

    /// Data rate carried by a compute budget `fb` (GOPS). A budget below the
    /// overhead floor is `InfeasibleRate` carrying the negative raw rate.
    pub fn rate_from_compute(&self, fb: T) -> Result<T> {
        non_negative(fb, "BBU compute f^B")?;
        let a = self.a();
        let blocks = self.blocks_from_bandwidth();
        let raw = int::<T>(3)
            * self.kappa_b
            * (int::<T>(10) * fb / a - int::<T>(3) * blocks - a * blocks);
        if raw < T::zero() {
            return Err(Error::InfeasibleRate { raw: lossy(raw) });
        }
        Ok(raw)
    }

    /// Inverse of [`rate_from_compute`](Self::rate_from_compute):
    /// `(A/10)(r/(3κ^B) + (3 + A)B/κ^A)`.
    pub fn compute_from_rate(&self, rate: T) -> Result<T> {
        non_negative(rate, "data rate r")?;
        let a = self.a();
        let overhead = (int::<T>(3) + a) * self.blocks_from_bandwidth();
        Ok(a / int(10) * (rate / (int::<T>(3) * self.kappa_b) + overhead))
    }
}

fn non_negative<T: Scalar>(v: T, what: &str) -> Result<()> {
    if v >= T::zero() && lossy(v).is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} must be finite and >= 0")))
    }
}

/// Compute budget and resource blocks allocated to one UE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BbuAllocation<T = f64> {
    pub compute_gops: T,
    pub resource_blocks: T,
}

impl<T: Scalar> BbuAllocation<T> {
    /// Allocation implied by the config's bandwidth and MCS.
    pub fn for_config(config: &CranConfig<T>) -> Result<Self> {
        let resource_blocks = config.blocks_from_bandwidth();
        Ok(Self { compute_gops: config.required_gops(resource_blocks)?, resource_blocks })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i128>;

    fn cfg(a: u32, b: f64, m: u32, c: f64) -> CranConfig {
        CranConfig::new(a, b, m, c).unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1.0)
    }

    #[test]
    fn blocks_examples() {
        assert_eq!(cfg(2, 10e6, 6, 1.0).blocks_from_bandwidth(), 50.0);
        assert_eq!(cfg(2, 2e5, 6, 1.0).blocks_from_bandwidth(), 1.0);
        assert_eq!(cfg(2, 20e6, 6, 1.0).blocks_from_bandwidth(), 100.0);
    }

    #[test]
    fn gops_examples() {
        assert!(close(cfg(2, 10e6, 6, 1.0).required_gops(50.0).unwrap(), 70.0, 1e-14));
        assert_eq!(cfg(2, 10e6, 6, 1.0).required_gops(0.0).unwrap(), 0.0);
        let g = cfg(1, 10e6, 2, 0.5).required_gops(50.0).unwrap();
        assert!(close(g, 5.0 * (3.0 + 1.0 + 1.0 / 3.0), 1e-14), "{g}");
        assert!(cfg(2, 10e6, 6, 1.0).required_gops(-1.0).is_err());
    }

    #[test]
    fn mcs_rate_examples() {
        assert!(close(cfg(2, 10e6, 6, 1.0).rate_from_mcs(50.0).unwrap(), 50.4e6, 1e-14));
        assert_eq!(cfg(2, 10e6, 6, 1.0).rate_from_mcs(0.0).unwrap(), 0.0);
        assert!(close(cfg(2, 10e6, 4, 0.5).rate_from_mcs(100.0).unwrap(), 33.6e6, 1e-14));
    }

    #[test]
    fn rate_from_compute_examples() {
        let c = cfg(2, 10e6, 6, 1.0);
        assert!(close(c.rate_from_compute(100.0).unwrap(), 126e6, 1e-14));
        assert_eq!(c.overhead_floor(), 50.0);
        assert_eq!(c.rate_from_compute(50.0).unwrap(), 0.0);
        assert!(close(c.rate_from_compute(70.0).unwrap(), c.rate_from_mcs(50.0).unwrap(), 1e-12));
        match c.rate_from_compute(40.0) {
            Err(Error::InfeasibleRate { raw }) => assert!(close(raw, -3.0 * 1.68e5 * 50.0, 1e-12)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn compute_from_rate_examples() {
        let c = cfg(2, 10e6, 6, 1.0);
        assert!(close(c.compute_from_rate(126e6).unwrap(), 100.0, 1e-14));
        assert_eq!(c.compute_from_rate(0.0).unwrap(), 50.0);
        assert!(close(c.compute_from_rate(50.4e6).unwrap(), 70.0, 1e-14));
        assert!(c.compute_from_rate(-1.0).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(CranConfig::new(0, 10e6, 6, 1.0).is_err());
        assert!(CranConfig::new(2, 0.0, 6, 1.0).is_err());
        assert!(CranConfig::new(2, 10e6, 5, 1.0).is_err());
        assert!(CranConfig::new(2, 10e6, 6, 0.0).is_err());
        assert!(CranConfig::new(2, 10e6, 6, 1.1).is_err());
        assert!(CranConfig::with_kappas(2, 10e6, 6, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn bbu_allocation_from_bandwidth() {
        let alloc = BbuAllocation::for_config(&cfg(2, 10e6, 6, 1.0)).unwrap();
        assert_eq!(alloc.resource_blocks, 50.0);
        assert!(close(alloc.compute_gops, 70.0, 1e-14));
    }

    #[test]
    fn derivation_chain_is_exact_over_rationals() {
        for a in 1..=8u32 {
            for b_khz in [1_400i128, 3_000, 5_000, 10_000, 15_000, 20_000] {
                for m in MODULATION_PROFILE {
                    for c_tenths in 1..=10i128 {
                        let c = CranConfig::<Q>::new(
                            a,
                            Q::from_integer(b_khz * 1000),
                            m,
                            Q::new(c_tenths, 10),
                        )
                        .unwrap();
                        let blocks = c.blocks_from_bandwidth();
                        let gops = c.required_gops(blocks).unwrap();
                        assert_eq!(c.rate_from_compute(gops).unwrap(), c.rate_from_mcs(blocks).unwrap());
                        let r = c.rate_from_compute(gops).unwrap();
                        assert_eq!(c.compute_from_rate(r).unwrap(), gops);
                    }
                }
            }
        }
    }

    #[test]
    fn inverse_is_exact_over_rationals() {
        let c = CranConfig::<Q>::new(3, Q::from_integer(7_000_000), 4, Q::new(3, 4)).unwrap();
        let floor = c.overhead_floor();
        assert_eq!(c.rate_from_compute(floor).unwrap(), Q::from_integer(0));
        for k in 1..50i128 {
            let fb = floor + Q::new(k, 7);
            assert_eq!(c.compute_from_rate(c.rate_from_compute(fb).unwrap()).unwrap(), fb);
        }
    }
}
