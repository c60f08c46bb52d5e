//! Golden-section minimization of a unimodal scalar function.

use crate::scalar::{real, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum<T> {
    pub x: T,
    pub value: T,
    pub iterations: usize,
}

/// Minimizes `f` on `[lo, hi]`. Stops once the bracket width falls below
/// `rel_tol * max(|lo|, |hi|, 1)` or after `max_iter` iterations. Returns the
/// best point evaluated, including the final bracket ends.
pub fn golden_section<T, F>(mut f: F, lo: T, hi: T, rel_tol: T, max_iter: usize) -> Minimum<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let inv_phi: T = real(0.618_033_988_749_894_8);
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iterations = 0;

    while iterations < max_iter {
        let scale = a.abs().max(b.abs()).max(T::one());
        if b - a <= rel_tol * scale {
            break;
        }
        iterations += 1;
        // NaN or +inf on the left pushes the bracket right.
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }

    let mut best = if fc <= fd { Minimum { x: c, value: fc, iterations } } else { Minimum { x: d, value: fd, iterations } };
    for x in [a, b] {
        let v = f(x);
        if v < best.value {
            best = Minimum { x, value: v, iterations };
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_vertex() {
        let m = golden_section(|x: f64| (x - 1.3).powi(2) + 2.0, -10.0, 10.0, 1e-12, 500);
        assert!((m.x - 1.3).abs() < 1e-6);
        assert!((m.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn boundary_minimum() {
        let m = golden_section(|x: f64| x, 2.0, 5.0, 1e-12, 500);
        assert!((m.x - 2.0).abs() < 1e-9);
        let m = golden_section(|x: f64| -x, 2.0, 5.0, 1e-12, 500);
        assert_eq!(m.x, 5.0);
    }

    #[test]
    fn infinite_left_region_is_skipped() {
        let f = |x: f64| if x < 1.0 { f64::INFINITY } else { (x - 3.0).abs() };
        let m = golden_section(f, 0.0, 10.0, 1e-12, 500);
        assert!((m.x - 3.0).abs() < 1e-9);
    }

    #[test]
    fn reversed_bounds_and_f32() {
        let m = golden_section(|x: f32| (x + 0.5) * (x + 0.5), 4.0, -4.0, 1e-6, 200);
        assert!((m.x + 0.5).abs() < 1e-3);
    }
}
