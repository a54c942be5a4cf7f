//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::time::Instant;

use choquet_core::choquet::choquet_simplex_power;
use choquet_core::korovkin::{
    check_separating_condition, family_builder, run_korovkin_suite, verify_properties, Check,
    PropertyConfig, SeparatingFunction, SuiteConfig,
};
use choquet_core::operators::operator_axioms;
use choquet_core::{
    choquet_numeric, choquet_simple, parse_function, Approximator, Capacity, CompactWindow, Func,
    Integrand, Monotonicity, OperatorFamily, OperatorInstance, OperatorParam, QuadratureConfig,
    SimpleFunction, TestFunction, TestFunctionSet, TestSetVariant,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn moment_oracle() -> Outcome {
    let cap = Capacity::sqrt_lebesgue(0.0, f64::INFINITY).unwrap();
    let cfg = QuadratureConfig {
        abs_tol: 1e-15,
        ..Default::default()
    };
    let mut worst = 0.0f64;
    for n in [1u32, 2, 4, 8, 16, 32, 64, 100] {
        let nf = n as f64;
        for k in 0..=50u32 {
            let kf = k as f64;
            let (l, r) = (kf / nf, (kf + 1.0) / nf);
            let sq = Integrand::new(Func::unary(|t| t * t), l, r).unwrap();
            let v = choquet_numeric(&sq, &cap, &cfg)
                .map_err(|e| e.to_string())?
                .value;
            let exact = (15.0 * kf * kf + 20.0 * kf + 8.0) / (15.0 * nf.powf(2.5));
            worst = worst.max(((v - exact) / exact).abs());

            let neg = Integrand::new(Func::unary(|t| -t), l, r).unwrap();
            let v = choquet_numeric(&neg, &cap, &cfg)
                .map_err(|e| e.to_string())?
                .value;
            let exact = -(3.0 * kf + 1.0) / (3.0 * nf.powf(1.5));
            worst = worst.max(((v - exact) / exact).abs());
        }
    }
    check(
        worst <= 1e-6,
        format!("worst relative error {worst:.3e} (<= 1e-6)"),
    )
}

fn random_steps(rng: &mut ChaCha8Rng) -> (Vec<f64>, usize) {
    let pieces = rng.gen_range(1..=8);
    let mut cuts: Vec<f64> = (0..pieces - 1).map(|_| rng.gen_range(0.01..0.99)).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut breaks = vec![0.0];
    breaks.extend(cuts);
    breaks.push(1.0);
    let m = breaks.len() - 1;
    (breaks, m)
}

fn sorted_values(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..m).map(|_| rng.gen_range(-3.0..3.0)).collect();
    v.sort_by(f64::total_cmp);
    v
}

fn simple_axioms() -> Outcome {
    let cap = Capacity::sqrt_lebesgue(0.0, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let c = |f: &SimpleFunction| choquet_simple(f, &cap).unwrap();
    let (mut comon, mut sub, mut homog, mut trans, mut mono_violations) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0usize);
    for _ in 0..200 {
        // Comonotone pair: the same ranking of the pieces.
        let (breaks, m) = random_steps(&mut rng);
        let mut rank: Vec<usize> = (0..m).collect();
        rank.shuffle(&mut rng);
        let (a, b) = (sorted_values(&mut rng, m), sorted_values(&mut rng, m));
        let fv: Vec<f64> = rank.iter().map(|&r| a[r]).collect();
        let gv: Vec<f64> = rank.iter().map(|&r| b[r]).collect();
        let f = SimpleFunction::steps(&breaks, &fv).unwrap();
        let g = SimpleFunction::steps(&breaks, &gv).unwrap();
        comon = comon.max((c(&f.add(&g).unwrap()) - c(&f) - c(&g)).abs());

        // Arbitrary pair for subadditivity and monotonicity.
        let (breaks2, m2) = random_steps(&mut rng);
        let hv: Vec<f64> = (0..m2).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let h = SimpleFunction::steps(&breaks2, &hv).unwrap();
        sub = sub.min(c(&f) + c(&h) - c(&f.add(&h).unwrap()));
        let top = f.sup(&h).unwrap();
        if !(f.le(&top).unwrap() && c(&f) <= c(&top) && c(&h) <= c(&top)) {
            mono_violations += 1;
        }

        let scale = rng.gen_range(0.0..10.0);
        homog = homog.max((c(&f.scale(scale).unwrap()) - scale * c(&f)).abs());
        let shift = rng.gen_range(-2.0..2.0);
        trans = trans.max((c(&f.shift(shift).unwrap()) - c(&f) - shift).abs());
    }
    check(
        comon <= 1e-12 && sub >= -1e-12 && homog <= 1e-12 && trans <= 1e-12 && mono_violations == 0,
        format!(
            "comonotone {comon:.1e}, subadditive slack {sub:.1e}, homogeneity {homog:.1e}, \
             translation {trans:.1e}, monotonicity violations {mono_violations}"
        ),
    )
}

/// Adaptive Simpson on `[a, b]`.
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rule(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
    }
    fn go(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (l, r) = (rule(f, a, m), rule(f, m, b));
        if depth == 0 || (l + r - whole).abs() <= 15.0 * tol {
            l + r + (l + r - whole) / 15.0
        } else {
            go(f, a, m, l, tol / 2.0, depth - 1) + go(f, m, b, r, tol / 2.0, depth - 1)
        }
    }
    go(f, a, b, rule(f, a, b), tol, 50)
}

fn lebesgue_degeneration() -> Outcome {
    let cap: Capacity = "lebesgue:[0,1]:pow:1".parse().unwrap();
    type Case = (&'static str, fn(f64) -> f64);
    let cases: [Case; 4] = [
        ("t^2", |t| t * t),
        ("-t", |t| -t),
        ("abs(t-1/2)", |t| (t - 0.5).abs()),
        ("exp(t)", f64::exp),
    ];
    let mut worst = 0.0f64;
    for (name, g) in cases {
        let f = Integrand::new(Func::unary(g), 0.0, 1.0).unwrap();
        let v = choquet_numeric(&f, &cap, &QuadratureConfig::default())
            .map_err(|e| format!("{name}: {e}"))?;
        let reference = simpson(&g, 0.0, 1.0, 1e-13);
        worst = worst.max((v.value - reference).abs());
    }
    check(
        worst <= 1e-8,
        format!("worst |choquet - simpson| {worst:.2e} (<= 1e-8)"),
    )
}

fn korovkin_bernstein_kc() -> Outcome {
    let cap = Capacity::sqrt_lebesgue(0.0, 1.0).unwrap();
    let build = family_builder(
        OperatorFamily::BernsteinKc,
        Some(cap),
        QuadratureConfig::default(),
    );
    let extra = ["abs(t-1/2)", "t*(1-t)*(2*t-1)", "t^0.5"]
        .iter()
        .map(|s| TestFunction::new(*s, parse_function(s, 1).unwrap()))
        .collect();
    let cfg = SuiteConfig::new(
        vec![8, 16, 32, 64, 128],
        TestFunctionSet::new(1, TestSetVariant::Reduced),
        CompactWindow::interval(0.0, 1.0).unwrap(),
    )
    .with_extra(extra);
    let r = run_korovkin_suite(&build, &cfg).map_err(|e| e.to_string())?;
    let hyp_ok = r.hypothesis_verdict.passed()
        && r.hypothesis
            .iter()
            .all(|s| s.final_error().is_some_and(|e| e < 0.02));
    let con_ok = r.conclusion_verdict.passed()
        && r.conclusion
            .iter()
            .all(|s| s.strictly_decreasing && s.final_error().is_some_and(|e| e < 0.1));
    let finals: Vec<String> = r
        .hypothesis
        .iter()
        .chain(&r.conclusion)
        .map(|s| format!("{}={:.2e}", s.name, s.final_error().unwrap_or(f64::NAN)))
        .collect();
    check(
        hyp_ok && con_ok,
        format!("final errors at n=128: {}", finals.join(", ")),
    )
}

fn szasz_closed_forms() -> Outcome {
    let cap = Capacity::sqrt_lebesgue(0.0, f64::INFINITY).unwrap();
    let e2 = Func::unary(|t| t * t).with_hint(Monotonicity::Nondecreasing);
    let neg = Func::unary(|t| -t).with_hint(Monotonicity::Nonincreasing);
    let mut worst = 0.0f64;
    for n in [4usize, 16, 64] {
        let op = OperatorInstance::new(
            OperatorFamily::SzaszKc,
            OperatorParam::Degree(n),
            Some(cap.clone()),
        )
        .unwrap();
        let nf = n as f64;
        for x in [0.0, 0.5, 1.0, 2.0] {
            let a = op.evaluate(&e2, &[x]).map_err(|e| e.to_string())?.value;
            worst = worst.max((a - (x * x + 7.0 * x / (3.0 * nf) + 8.0 / (15.0 * nf * nf))).abs());
            let b = op.evaluate(&neg, &[x]).map_err(|e| e.to_string())?.value;
            worst = worst.max((b - (-x - 1.0 / (3.0 * nf))).abs());
        }
    }
    check(
        worst <= 1e-6,
        format!("worst |series - closed form| {worst:.2e} (<= 1e-6)"),
    )
}

fn operator_axiom_reports() -> Outcome {
    let unit = Capacity::sqrt_lebesgue(0.0, 1.0).unwrap();
    let half = Capacity::sqrt_lebesgue(0.0, f64::INFINITY).unwrap();
    let window = CompactWindow::interval(0.0, 1.0)
        .unwrap()
        .with_cells(16)
        .unwrap();
    let cfg = PropertyConfig::new(window);
    let mut lines = Vec::new();
    let mut ok = true;
    for (family, cap) in [
        (OperatorFamily::BernsteinKc, Some(unit)),
        (OperatorFamily::SzaszKc, Some(half.clone())),
        (OperatorFamily::BaskakovKc, Some(half)),
        (OperatorFamily::ClassicalBernstein, None),
    ] {
        let op = OperatorInstance::new(family, OperatorParam::Degree(8), cap).unwrap();
        let r = verify_properties(&op, &operator_axioms(&op), &cfg).map_err(|e| e.to_string())?;
        let pass = |c: Check| r.check(c).is_some_and(|a| a.pass);
        let mut fam_ok = [
            Check::Monotone,
            Check::PositivelyHomogeneous,
            Check::Subadditive,
            Check::ComonotoneAdditive,
        ]
        .into_iter()
        .all(pass)
            && !r.has_failures();
        if family == OperatorFamily::ClassicalBernstein {
            let add = r
                .check(Check::Additive)
                .expect("additivity is always checked");
            fam_ok &= add.pass && add.worst_slack >= -1e-10;
            lines.push(format!("{family} additive slack {:.1e}", add.worst_slack));
        } else {
            lines.push(format!("{family} {}", if fam_ok { "ok" } else { "failed" }));
        }
        ok &= fam_ok;
    }
    check(ok, lines.join(", "))
}

fn separating_criterion() -> Outcome {
    let window = CompactWindow::interval(0.0, 1.0)
        .unwrap()
        .with_cells(64)
        .unwrap();
    let gamma = SeparatingFunction::coordinates(1);
    let ns = [8, 16, 32, 64];
    let classical = family_builder(
        OperatorFamily::ClassicalBernstein,
        None,
        QuadratureConfig::default(),
    );
    let r = check_separating_condition(&classical, &ns, &gamma, &window, 0.02)
        .map_err(|e| e.to_string())?;
    let worst = r
        .rows
        .iter()
        .map(|row| (row.max_value.unwrap_or(f64::INFINITY) - 0.25 / row.n as f64).abs())
        .fold(0.0, f64::max);

    let cap = Capacity::sqrt_lebesgue(0.0, 1.0).unwrap();
    let kc = family_builder(
        OperatorFamily::BernsteinKc,
        Some(cap),
        QuadratureConfig::default(),
    );
    let k =
        check_separating_condition(&kc, &ns, &gamma, &window, 0.02).map_err(|e| e.to_string())?;
    let last = k
        .rows
        .last()
        .and_then(|row| row.max_value)
        .unwrap_or(f64::INFINITY);
    check(
        worst <= 1e-9 && k.strictly_decreasing && last < 0.02,
        format!(
            "classical |max - 1/(4n)| {worst:.1e}; bernstein-kc strictly decreasing {}, {last:.2e} at n=64",
            k.strictly_decreasing
        ),
    )
}

fn durrmeyer_probe() -> Outcome {
    let cap = Capacity::sqrt_lebesgue_simplex(2).unwrap();
    let quad = QuadratureConfig::default();
    let op = OperatorInstance::new(
        OperatorFamily::DurrmeyerChoquetSimplex,
        OperatorParam::Degree(2),
        Some(cap.clone()),
    )
    .unwrap();
    let points = CompactWindow::simplex(2)
        .unwrap()
        .with_cells(16)
        .unwrap()
        .points();
    let one = Func::constant(2, 1.0);
    let zero = op
        .evaluate_many(&one, &points)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|v| v.value.abs())
        .fold(0.0, f64::max);

    let tn = Func::projection(2, 1);
    let num = choquet_simplex_power(&tn, 2, &cap, &quad).map_err(|e| e.to_string())?;
    let den = choquet_simplex_power(&one, 2, &cap, &quad).map_err(|e| e.to_string())?;
    let ratio = num.value / den.value;
    let at_vertex = op.evaluate(&tn, &[0.0, 1.0]).map_err(|e| e.to_string())?;
    let tol = at_vertex.error + num.error / den.value + ratio * den.error / den.value + 1e-12;
    let gap = (at_vertex.value - (ratio - 1.0)).abs();
    check(
        zero <= 1e-12 && gap <= tol,
        format!(
            "max |M(e0)| {zero:.1e} on {} points; M(t_N)(e_N) = {:.6} vs ratio - 1 = {:.6} (gap {gap:.1e}, tol {tol:.1e})",
            points.len(),
            at_vertex.value,
            ratio - 1.0
        ),
    )
}

fn run(argv: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = choquet_cli::run_cli(
        std::iter::once("choquet").chain(argv.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, out)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let converge = [
        "converge",
        "--family",
        "bernstein-kc",
        "--n",
        "8,16,32",
        "--cells",
        "64",
        "--extra",
        "abs(t-1/2),t^0.5",
        "--quiet",
    ];
    let properties = [
        "properties",
        "--family",
        "szasz-kc",
        "--n",
        "8",
        "--samples",
        "5",
        "--cells",
        "8",
        "--seed",
        "7",
        "--quiet",
    ];
    let mut lines = Vec::new();
    for (name, argv) in [("converge", &converge[..]), ("properties", &properties[..])] {
        for format in ["json", "csv"] {
            let mut args = argv.to_vec();
            args.extend(["--format", format]);
            let (c1, a) = run(&args);
            let (c2, b) = run(&args);
            if c1 != 0 || c2 != 0 || a != b || a.is_empty() {
                return Err(format!(
                    "{name} {format}: repeated runs differ (exit {c1}, {c2})"
                ));
            }
        }
        // Replaying the meta block reproduces the report.
        let path = dir.path().join(format!("{name}.json"));
        let path = path.to_str().unwrap();
        let mut args = argv.to_vec();
        args.extend(["--out", path]);
        let (c, _) = run(&args);
        let first = std::fs::read(path).map_err(|e| e.to_string())?;
        let copy = dir.path().join(format!("{name}.config.json"));
        std::fs::copy(path, &copy).map_err(|e| e.to_string())?;
        let (c2, _) = run(&["--config", copy.to_str().unwrap(), "--quiet"]);
        let second = std::fs::read(path).map_err(|e| e.to_string())?;
        if c != 0 || c2 != 0 || first != second {
            return Err(format!("{name}: replay from meta.config differs"));
        }
        lines.push(format!("{name} identical ({} bytes)", first.len()));
    }
    check(true, lines.join(", "))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("moment oracle", moment_oracle),
        ("Choquet axiom suite", simple_axioms),
        ("Lebesgue degeneration", lebesgue_degeneration),
        (
            "Korovkin instantiation (bernstein-kc)",
            korovkin_bernstein_kc,
        ),
        ("szasz-kc closed forms", szasz_closed_forms),
        ("operator axiom reports", operator_axiom_reports),
        ("separating-function criterion", separating_criterion),
        ("as-printed simplex operator probe", durrmeyer_probe),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
