use compdim::cran::CranConfig;
use compdim::mcc::{clone_capacity_for_qos, clone_capacity_for_rate, plan_joint, total_latency, MccTask};
use compdim::sweep::{csv_string, run_sweep, Axis, Series, SweepModel, SweepSpec};
use compdim::{q_function, NormalDeadline, PlanOptions, PlanWeights, SdnScenario};
use proptest::prelude::*;

fn sdn(fs: f64, lambda: f64, p: f64, mu: f64) -> SdnScenario {
    SdnScenario::new(fs, lambda, p, mu, NormalDeadline::new(7.0, 1.0).unwrap()).unwrap()
}

fn antennas() -> impl Strategy<Value = u32> {
    1u32..=8
}

fn bandwidth() -> impl Strategy<Value = f64> {
    1.4e6..20e6
}

fn cran(a: u32, b: f64) -> CranConfig {
    CranConfig::new(a, b, 6, 1.0).unwrap()
}

proptest! {
    #[test]
    fn q_mirror_symmetry(x in -30.0..30.0f64) {
        let sum = q_function(x).unwrap() + q_function(-x).unwrap();
        prop_assert!((sum - 1.0).abs() < 1e-15);
    }

    #[test]
    fn q_is_non_increasing(x in -30.0..30.0f64, dx in 0.0..5.0f64) {
        prop_assert!(q_function(x + dx).unwrap() <= q_function(x).unwrap());
    }

    #[test]
    fn q_stays_in_unit_interval(x in -1e3..1e3f64) {
        let q = q_function(x).unwrap();
        prop_assert!((0.0..=1.0).contains(&q));
    }

    #[test]
    fn outage_non_increasing_in_capacity(
        fs in 0.1..20.0f64, dfs in 0.0..5.0f64,
        lambda in 0.0..10.0f64, p in 0.0..=1.0f64, mu in 0.0..5.0f64,
    ) {
        let lo = sdn(fs, lambda, p, mu).outage_probability();
        let hi = sdn(fs + dfs, lambda, p, mu).outage_probability();
        prop_assert!(hi <= lo);
    }

    #[test]
    fn outage_non_decreasing_in_load(
        fs in 0.1..20.0f64, lambda in 0.0..10.0f64,
        p in 0.0..0.9f64, dp in 0.0..0.1f64, mu in 0.0..5.0f64, dmu in 0.0..2.0f64,
    ) {
        let base = sdn(fs, lambda, p, mu).outage_probability();
        prop_assert!(sdn(fs, lambda, p + dp, mu).outage_probability() >= base);
        prop_assert!(sdn(fs, lambda, p, mu + dmu).outage_probability() >= base);
    }

    #[test]
    fn outage_is_probability(fs in 0.01..50.0f64, lambda in 0.0..10.0f64, p in 0.0..=1.0f64, mu in 0.0..5.0f64) {
        let s = sdn(fs, lambda, p, mu);
        let o = s.outage_probability();
        prop_assert!((0.0..=1.0).contains(&o));
        if s.offered_load() >= fs {
            prop_assert_eq!(o, 1.0);
        }
    }

    #[test]
    fn rate_increases_with_compute(a in antennas(), b in bandwidth(), extra in 0.0..500.0f64, step in 1e-3..100.0f64) {
        let c = cran(a, b);
        let fb = c.overhead_floor() + extra;
        prop_assert!(c.rate_from_compute(fb + step).unwrap() > c.rate_from_compute(fb).unwrap());
    }

    #[test]
    fn below_floor_is_infeasible(a in antennas(), b in bandwidth(), frac in 0.0..0.999f64) {
        let c = cran(a, b);
        prop_assert!(c.rate_from_compute(c.overhead_floor() * frac).is_err());
    }

    #[test]
    fn cran_round_trip(a in antennas(), b in bandwidth(), r in 0.0..1e9f64) {
        let c = cran(a, b);
        let back = c.rate_from_compute(c.compute_from_rate(r).unwrap()).unwrap();
        prop_assert!((back - r).abs() <= 1e-9 * r.max(1.0));
    }

    #[test]
    fn clone_capacity_falls_with_deadline_and_rate(
        f in 0.5..100.0f64, d in 1e4..1e7f64, slack in 1.01..20.0f64, grow in 1.001..3.0f64,
    ) {
        let r = 1e8;
        let tau = d / r * slack;
        let task = MccTask::new(f, d, tau).unwrap();
        let base = clone_capacity_for_rate(&task, r).unwrap();
        let later = clone_capacity_for_rate(&MccTask::new(f, d, tau * grow).unwrap(), r).unwrap();
        let faster = clone_capacity_for_rate(&task, r * grow).unwrap();
        prop_assert!(later < base);
        prop_assert!(faster < base);
    }

    #[test]
    fn clone_capacity_grows_with_work_and_data(f in 0.5..100.0f64, d in 1e4..1e6f64, grow in 1.001..3.0f64) {
        let r = 1e8;
        let tau = 0.1;
        let base = clone_capacity_for_rate(&MccTask::new(f, d, tau).unwrap(), r).unwrap();
        prop_assert!(clone_capacity_for_rate(&MccTask::new(f * grow, d, tau).unwrap(), r).unwrap() > base);
        prop_assert!(clone_capacity_for_rate(&MccTask::new(f, d * grow, tau).unwrap(), r).unwrap() > base);
    }

    #[test]
    fn clone_capacity_falls_with_bbu(a in antennas(), b in bandwidth(), extra in 1.0..500.0f64, step in 0.1..50.0f64) {
        let c = cran(a, b);
        let fb = c.overhead_floor() + extra;
        let r = c.rate_from_compute(fb).unwrap();
        let task = MccTask::new(10.0, 1e6, 1e6 / r * 2.0).unwrap();
        let lo = clone_capacity_for_qos(&task, &c, fb).unwrap();
        let hi = clone_capacity_for_qos(&task, &c, fb + step).unwrap();
        prop_assert!(hi < lo);
    }

    #[test]
    fn plans_meet_the_deadline_exactly(
        a in antennas(), b in bandwidth(), f in 1.0..50.0f64, d in 1e5..1e7f64, tau in 0.05..1.0f64,
        wb in 0.1..10.0f64, wc in 0.1..10.0f64,
    ) {
        let c = cran(a, b);
        let task = MccTask::new(f, d, tau).unwrap();
        let plan = plan_joint(&task, &c, &PlanWeights { bbu: wb, clone: wc }, &PlanOptions::default()).unwrap();
        prop_assert!((plan.total_latency - tau).abs() <= 1e-9 * tau);
        let latency = total_latency(&task, plan.clone_gops, plan.achieved_rate).unwrap();
        prop_assert!((latency - plan.total_latency).abs() <= 1e-12 * tau);
        prop_assert!(plan.bbu_gops > c.compute_from_rate(d / tau).unwrap());
    }

    #[test]
    fn sweeps_are_reproducible_and_complete(
        lambda in 0.0..10.0f64, n_axis in 1usize..40, n_series in 1usize..6,
    ) {
        let spec = SweepSpec {
            model: SweepModel::SdnOutage,
            fixed: [("lambda".to_string(), lambda), ("mu".into(), 2.0), ("rho".into(), 7.0), ("sigma2".into(), 1.0)]
                .into_iter()
                .collect(),
            varied: Axis { symbol: "fs".into(), grid: (1..=n_axis).map(|i| i as f64 * 0.5).collect() },
            series: Series { symbol: "p".into(), values: (0..n_series).map(|i| i as f64 / n_series as f64).collect() },
            output: None,
        };
        let rows = run_sweep(&spec).unwrap();
        prop_assert_eq!(rows.len(), n_axis * n_series);
        prop_assert_eq!(csv_string(&rows), csv_string(&run_sweep(&spec).unwrap()));
    }
}
