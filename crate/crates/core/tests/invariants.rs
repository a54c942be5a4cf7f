use choquet_core::capacity::{check_monotone, check_submodular};
use choquet_core::{
    choquet_numeric, choquet_simple, parse_function, Approximator, Capacity, Func, Integrand,
    IntervalSet, OperatorFamily, OperatorInstance, OperatorParam, QuadratureConfig, SimpleFunction,
};
use proptest::prelude::*;

fn pow_capacity(alpha: f64) -> Capacity {
    format!("lebesgue:[0,1]:pow:{alpha}").parse().unwrap()
}

fn interval() -> impl Strategy<Value = (f64, f64)> {
    (0.0..1.0f64, 0.0..1.0f64).prop_filter_map("degenerate", |(a, b)| {
        let (l, r) = if a < b { (a, b) } else { (b, a) };
        (r - l > 1e-6).then_some((l, r))
    })
}

/// Sorted break points `0 = b_0 < ... < b_m = 1` with values.
fn steps() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    prop::collection::vec(0.01..0.99f64, 0..6).prop_flat_map(|mut cuts| {
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
        let mut breaks = vec![0.0];
        breaks.extend(cuts);
        breaks.push(1.0);
        let m = breaks.len() - 1;
        (Just(breaks), prop::collection::vec(-5.0..5.0f64, m))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn concave_distortions_are_monotone_and_submodular(
        alpha in 0.05..1.0f64,
        a in interval(),
        b in interval(),
    ) {
        let mu = pow_capacity(alpha);
        let outer = IntervalSet::interval(a.0.min(b.0), a.1.max(b.1)).unwrap();
        let inner = IntervalSet::interval(a.0, a.1).unwrap();
        let whole = IntervalSet::interval(0.0, 1.0).unwrap();
        prop_assert!(check_monotone(&mu, &[inner.clone(), outer, whole]).unwrap().pass);
        let pair = (inner, IntervalSet::interval(b.0, b.1).unwrap());
        let s = check_submodular(&mu, &[pair]).unwrap();
        prop_assert!(s.worst_slack >= -1e-12, "{s:?}");
    }

    #[test]
    fn simple_integral_is_homogeneous_and_translation_invariant(
        (breaks, values) in steps(),
        alpha in 0.1..1.0f64,
        scale in 0.0..10.0f64,
        shift in -3.0..3.0f64,
    ) {
        let mu = pow_capacity(alpha);
        let f = SimpleFunction::steps(&breaks, &values).unwrap();
        let c = |g: &SimpleFunction| choquet_simple(g, &mu).unwrap();
        prop_assert!((c(&f.scale(scale).unwrap()) - scale * c(&f)).abs() <= 1e-11);
        prop_assert!((c(&f.shift(shift).unwrap()) - c(&f) - shift).abs() <= 1e-11);
    }

    #[test]
    fn simple_integral_is_monotone_and_subadditive(
        (breaks, values) in steps(),
        (breaks2, values2) in steps(),
        alpha in 0.1..1.0f64,
    ) {
        let mu = pow_capacity(alpha);
        let f = SimpleFunction::steps(&breaks, &values).unwrap();
        let g = SimpleFunction::steps(&breaks2, &values2).unwrap();
        let c = |h: &SimpleFunction| choquet_simple(h, &mu).unwrap();
        prop_assert!(c(&f) <= c(&f.sup(&g).unwrap()) + 1e-12);
        prop_assert!(c(&f.inf(&g).unwrap()) <= c(&f) + 1e-12);
        prop_assert!(c(&f.add(&g).unwrap()) <= c(&f) + c(&g) + 1e-11);
    }

    #[test]
    fn numeric_integral_is_homogeneous_and_translation_invariant(
        p in -2.0..2.0f64,
        q in -2.0..2.0f64,
        scale in 0.0..5.0f64,
        shift in -2.0..2.0f64,
    ) {
        let mu = pow_capacity(0.5);
        let cfg = QuadratureConfig::default();
        let eval = |g: Func| choquet_numeric(&Integrand::new(g, 0.0, 1.0).unwrap(), &mu, &cfg).unwrap();
        let poly = move |t: f64| p * t + q * t * t;
        let base = eval(Func::unary(poly));
        let scaled = eval(Func::unary(move |t| scale * poly(t)));
        let shifted = eval(Func::unary(move |t| poly(t) + shift));
        prop_assert!((scaled.value - scale * base.value).abs() <= scaled.error + scale * base.error + 1e-9);
        prop_assert!((shifted.value - base.value - shift).abs() <= shifted.error + base.error + 1e-9);
    }

    #[test]
    fn kantorovich_choquet_reproduces_constants(n in 1usize..40, x in 0.0..1.0f64, c in -3.0..3.0f64) {
        let op = OperatorInstance::new(
            OperatorFamily::BernsteinKc,
            OperatorParam::Degree(n),
            Some(Capacity::sqrt_lebesgue(0.0, 1.0).unwrap()),
        ).unwrap();
        let v = op.evaluate(&Func::constant(1, c), &[x]).unwrap();
        prop_assert!((v.value - c).abs() <= 1e-12);
    }

    #[test]
    fn kantorovich_choquet_is_monotone(n in 1usize..16, x in 0.0..1.0f64, a in -1.0..1.0f64, b in 0.0..1.0f64) {
        let op = OperatorInstance::new(
            OperatorFamily::BernsteinKc,
            OperatorParam::Degree(n),
            Some(Capacity::sqrt_lebesgue(0.0, 1.0).unwrap()),
        ).unwrap();
        let f = Func::unary(move |t| a * t * t);
        let g = Func::unary(move |t| a * t * t + b * t);
        let (vf, vg) = (op.evaluate(&f, &[x]).unwrap(), op.evaluate(&g, &[x]).unwrap());
        prop_assert!(vf.value <= vg.value + vf.error + vg.error + 1e-12);
    }

    #[test]
    fn polynomial_expressions_evaluate(a in -5.0..5.0f64, b in -5.0..5.0f64, t in -2.0..2.0f64) {
        let src = format!("({a})*t^2 + ({b})*t - 1");
        let f = parse_function(&src, 1).unwrap();
        prop_assert!((f.at(&[t]) - (a * t * t + b * t - 1.0)).abs() <= 1e-12);
        // The canonical label parses to the same function.
        let again = parse_function(f.label().unwrap(), 1).unwrap();
        prop_assert!((again.at(&[t]) - f.at(&[t])).abs() <= 1e-12);
    }
}
