//! Gaussian tail function and seeded random variates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::{real, Real};

/// Normally distributed deadline `N(mean, variance)`, in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalDeadline<T = f64> {
    mean: T,
    variance: T,
}

impl<T: Real> NormalDeadline<T> {
    pub fn new(mean: T, variance: T) -> Result<Self> {
        if !mean.is_finite() {
            return Err(Error::domain("deadline mean must be finite"));
        }
        if !(variance.is_finite() && variance > T::zero()) {
            return Err(Error::domain("deadline variance must be finite and > 0"));
        }
        Ok(Self { mean, variance })
    }

    pub fn mean(&self) -> T {
        self.mean
    }

    pub fn variance(&self) -> T {
        self.variance
    }

    pub fn std_dev(&self) -> T {
        self.variance.sqrt()
    }
}

// W. J. Cody's rational Chebyshev approximations for erf/erfc.
const ERF_A: [f64; 5] = [
    3.1611237438705656,
    113.864154151050156,
    377.485237685302021,
    3209.37758913846947,
    0.185777706184603153,
];
const ERF_B: [f64; 4] = [
    23.6012909523441209,
    244.024637934444173,
    1282.61652607737228,
    2844.23683343917062,
];
const ERFC_C: [f64; 9] = [
    0.564188496988670089,
    8.88314979438837594,
    66.1191906371416295,
    298.635138197400131,
    881.95222124176909,
    1712.04761263407058,
    2051.07837782607147,
    1230.33935479799725,
    2.15311535474403846e-8,
];
const ERFC_D: [f64; 8] = [
    15.7449261107098347,
    117.693950891312499,
    537.181101862009858,
    1621.38957456669019,
    3290.79923573345963,
    4362.61909014324716,
    3439.36767414372164,
    1230.33935480374942,
];
const ERFC_P: [f64; 6] = [
    0.305326634961232344,
    0.360344899949804439,
    0.125781726111229246,
    0.0160837851487422766,
    6.58749161529837803e-4,
    0.0163153871373020978,
];
const ERFC_Q: [f64; 5] = [
    2.56852019228982242,
    1.87295284992346047,
    0.527905102951428412,
    0.0605183413124413191,
    0.00233520497626869185,
];

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_286_95;
const ERF_SMALL: f64 = 0.46875;
const ERFC_BIG: f64 = 26.543;

/// `exp(-y^2)` split as `exp(-t^2) * exp(-(y-t)(y+t))` with `t` rounded to 1/16,
/// which avoids the cancellation in `y*y` for large `y`.
fn exp_neg_square<T: Real>(y: T) -> T {
    let sixteen: T = real(16.0);
    let t = (y * sixteen).trunc() / sixteen;
    (-t * t).exp() * (-(y - t) * (y + t)).exp()
}

/// `(((lead + c0) x + c1) x + ...) x + cn`, the nesting Cody's coefficients use.
fn horner<T: Real>(coeffs: &[f64], lead: T, x: T) -> T {
    let first = lead + real(coeffs[0]);
    coeffs[1..].iter().fold(first, |acc, &c| acc * x + real(c))
}

/// Complementary error function, relative accuracy near machine epsilon in `f64`.
pub fn erfc<T: Real>(x: T) -> T {
    let y = x.abs();
    if y <= real(ERF_SMALL) {
        let z = y * y;
        let num = horner(&ERF_A[..4], real::<T>(ERF_A[4]) * z, z);
        let den = horner(&ERF_B, z, z);
        return T::one() - x * num / den;
    }
    let tail = if y >= real(ERFC_BIG) {
        T::zero()
    } else if y <= real(4.0) {
        let num = horner(&ERFC_C[..8], real::<T>(ERFC_C[8]) * y, y);
        let den = horner(&ERFC_D, y, y);
        num / den * exp_neg_square(y)
    } else {
        let z = T::one() / (y * y);
        let num = horner(&ERFC_P[..5], real::<T>(ERFC_P[5]) * z, z);
        let den = horner(&ERFC_Q, z, z);
        (real::<T>(FRAC_1_SQRT_PI) - z * num / den) / y * exp_neg_square(y)
    };
    if x < T::zero() {
        real::<T>(2.0) - tail
    } else {
        tail
    }
}

/// Scaled complementary error function `exp(x²)·erfc(x)`, finite for large
/// positive `x` where `erfc` itself underflows.
pub fn erfcx<T: Real>(x: T) -> T {
    let y = x.abs();
    let scaled_tail = if y <= real(ERF_SMALL) {
        return (x * x).exp() * erfc(x);
    } else if y <= real(4.0) {
        let num = horner(&ERFC_C[..8], real::<T>(ERFC_C[8]) * y, y);
        let den = horner(&ERFC_D, y, y);
        num / den
    } else {
        let z = T::one() / (y * y);
        let num = horner(&ERFC_P[..5], real::<T>(ERFC_P[5]) * z, z);
        let den = horner(&ERFC_Q, z, z);
        (real::<T>(FRAC_1_SQRT_PI) - z * num / den) / y
    };
    if x < T::zero() {
        real::<T>(2.0) * (y * y).exp() - scaled_tail
    } else {
        scaled_tail
    }
}

/// Gaussian tail probability `Q(x) = P(Z > x)` for standard normal `Z`.
///
/// The upper tail is computed directly from `erfc`; negative arguments use
/// `Q(-x) = 1 - Q(x)` so the symmetry holds to rounding.
pub fn q_function<T: Real>(x: T) -> Result<T> {
    if !x.is_finite() {
        return Err(Error::domain("q_function argument must be finite"));
    }
    Ok(q_unchecked(x))
}

pub(crate) fn q_unchecked<T: Real>(x: T) -> T {
    let half: T = real(0.5);
    let upper = half * erfc(x.abs() * real::<T>(std::f64::consts::FRAC_1_SQRT_2));
    if x < T::zero() {
        T::one() - upper
    } else {
        upper
    }
}

/// `ln Q(x)`, accurate where `Q(x)` underflows (large positive `x`) and where
/// `Q(x)` rounds to 1 (large negative `x`).
pub fn ln_q_function<T: Real>(x: T) -> Result<T> {
    if !x.is_finite() {
        return Err(Error::domain("ln_q_function argument must be finite"));
    }
    Ok(ln_q_unchecked(x))
}

pub(crate) fn ln_q_unchecked<T: Real>(x: T) -> T {
    if x >= T::one() {
        let y = x * real::<T>(std::f64::consts::FRAC_1_SQRT_2);
        real::<T>(0.5).ln() - y * y + erfcx(y).ln()
    } else if x >= T::zero() {
        q_unchecked(x).ln()
    } else {
        (-q_unchecked(-x)).ln_1p()
    }
}

/// Standard normal CDF.
pub fn normal_cdf<T: Real>(x: T) -> T {
    q_unchecked(-x)
}

/// Seed for a deterministic random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RngSeed(pub u64);

/// Seeded ChaCha8 stream. Each simulation replication owns one, selected by
/// stream index so replications never share variates.
#[derive(Debug, Clone)]
pub struct RandomStream {
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: RngSeed) -> Self {
        Self::substream(seed, 0)
    }

    pub fn substream(seed: RngSeed, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
        rng.set_stream(index);
        Self { rng }
    }

    /// Uniform variate on `(0, 1]`.
    pub fn uniform_open_closed(&mut self) -> f64 {
        1.0 - self.rng.random::<f64>()
    }

    /// Uniform variate on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }
}

/// Inverse-CDF exponential variate for a uniform `u` in `(0, 1]`.
#[inline]
pub fn exponential_from_uniform(rate: f64, u: f64) -> f64 {
    -u.ln() / rate
}

/// Exponential variate with the given rate (per second).
pub fn sample_exponential(rate: f64, stream: &mut RandomStream) -> Result<f64> {
    if !(rate.is_finite() && rate > 0.0) {
        return Err(Error::domain(format!("exponential rate must be > 0, got {rate}")));
    }
    Ok(exponential_from_uniform(rate, stream.uniform_open_closed()))
}

#[inline]
pub fn normal_from_standard(deadline: &NormalDeadline<f64>, z: f64) -> f64 {
    deadline.mean + deadline.std_dev() * z
}

pub fn sample_normal(deadline: &NormalDeadline<f64>, stream: &mut RandomStream) -> f64 {
    normal_from_standard(deadline, stream.standard_normal())
}
