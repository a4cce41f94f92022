use outer_weight::{
    eval_weight, legendre_point, lower_legendre_phi, ostrowski_phi, DCSequence, LogMagnitude,
    LogWeight, Majorant, QProfile,
};
use proptest::prelude::*;

fn random_sequence() -> impl Strategy<Value = DCSequence> {
    prop::collection::vec(-2.0f64..3.0, 3..40).prop_map(|steps| {
        let mut acc = 0.0;
        let mut log_m = vec![0.0];
        for d in steps {
            acc += d;
            log_m.push(acc);
        }
        DCSequence::new(log_m).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ostrowski_is_monotone_and_convex_in_log_t(
        seq in random_sequence(),
        a in -5.0f64..10.0,
        h1 in 0.01f64..3.0,
        h2 in 0.01f64..3.0,
    ) {
        let f = |tau: f64| ostrowski_phi(&seq, tau.exp()).unwrap().value;
        let (x0, x1, x2) = (a, a + h1, a + h1 + h2);
        let (f0, f1, f2) = (f(x0), f(x1), f(x2));
        let tol = 1e-9 * (f0.abs() + f2.abs() + 1.0);
        prop_assert!(f0 <= f1 + tol && f1 <= f2 + tol);
        // the chord lies above the graph
        prop_assert!(f1 <= (h2 * f0 + h1 * f2) / (h1 + h2) + tol);
    }

    #[test]
    fn lower_legendre_is_concave_and_nondecreasing(
        beta in 0.3f64..3.0,
        lr in -2.0f64..8.0,
        d in 0.05f64..1.0,
    ) {
        let m = Majorant::inv_power(beta).unwrap();
        let r0 = 10f64.powf(lr);
        let (r1, r2) = (r0 * 10f64.powf(d), r0 * 10f64.powf(2.0 * d));
        let f = |r: f64| lower_legendre_phi(&m, r).unwrap().value;
        let (f0, f1, f2) = (f(r0), f(r1), f(r2));
        let tol = 1e-6 * f2.abs().max(1.0);
        prop_assert!(f0 <= f1 + tol && f1 <= f2 + tol);
        let lam = (r1 - r0) / (r2 - r0);
        prop_assert!(f1 >= (1.0 - lam) * f0 + lam * f2 - tol);
    }

    #[test]
    fn weight_derivative_matches_difference_quotient(alpha in 0.05f64..0.95, lt in -2.0f64..6.0) {
        let w = LogWeight::power(alpha).unwrap();
        let t = 10f64.powf(lt);
        let h = 1e-5 * t;
        let fd = (eval_weight(&w, t + h, 0).unwrap() - eval_weight(&w, t - h, 0).unwrap()) / (2.0 * h);
        let d1 = eval_weight(&w, t, 1).unwrap();
        prop_assert!((fd - d1).abs() <= 1e-6 * d1.abs());
        let fd2 = (eval_weight(&w, t + h, 1).unwrap() - eval_weight(&w, t - h, 1).unwrap()) / (2.0 * h);
        let d2 = eval_weight(&w, t, 2).unwrap();
        prop_assert!((fd2 - d2).abs() <= 1e-5 * d2.abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn profile_slope_matches_difference_quotient(alpha in 0.1f64..0.9, ly in 0.0f64..5.0) {
        let p = QProfile::new(LogWeight::power(alpha).unwrap());
        let y = 10f64.powf(ly);
        let h = 1e-4 * y;
        let fd = (p.q(y + h).unwrap() - p.q(y - h).unwrap()) / (2.0 * h);
        let q1 = p.q1(y).unwrap();
        prop_assert!((fd - q1).abs() <= 1e-6 * q1.abs());
    }

    #[test]
    fn profile_slope_decreases(alpha in 0.1f64..0.9, ly in 0.0f64..5.0, d in 0.01f64..1.0) {
        let p = QProfile::new(LogWeight::power(alpha).unwrap());
        let y = 10f64.powf(ly);
        let a = p.q1(y).unwrap();
        let b = p.q1(y * 10f64.powf(d)).unwrap();
        prop_assert!(a > 0.0 && b > 0.0 && b < a);
    }

    #[test]
    fn legendre_value_dominates_every_y(alpha in 0.2f64..0.65, ls in -3.0f64..-1.0, ly in 0.0f64..7.0) {
        let p = QProfile::new(LogWeight::power(alpha).unwrap());
        let s = 10f64.powf(ls);
        let l = legendre_point(&p, s).unwrap();
        let y = 10f64.powf(ly);
        prop_assert!(l.q >= p.q(y).unwrap() - s * y - 1e-8 * l.q.abs());
    }
}

proptest! {
    #[test]
    fn log_magnitude_round_trip(l in -1e8f64..1e8, d in 0.0f64..60.0, neg in any::<bool>()) {
        let a = LogMagnitude::from_log(l);
        let b = LogMagnitude::new(l - d, if neg { std::f64::consts::PI } else { 0.0 });
        let back = a.add(b).sub(b);
        prop_assert!((back.log_abs - l).abs() <= 1e-12 * l.abs().max(1.0));
    }

    #[test]
    fn log_magnitude_matches_f64(x in -1e100f64..1e100, y in -1e100f64..1e100) {
        prop_assume!(x != 0.0 && y != 0.0 && (x + y).abs() > 1e-6 * (x.abs() + y.abs()));
        let s = LogMagnitude::from_f64(x).add(LogMagnitude::from_f64(y)).to_f64();
        let tol = 4.0 * f64::EPSILON * (x.abs().ln().abs() + y.abs().ln().abs() + 1.0) * (x.abs() + y.abs());
        prop_assert!((s - (x + y)).abs() <= tol);
    }
}
