//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use facsum::arith::{rat, real_errors, Poly, Rat, Real};
use facsum::exec::Exec;
use facsum::identities::{check_rstirling_composition, run_suite, SuiteConfig};
use facsum::numerics::{
    check_incomplete_gamma_sum, gauss_laguerre, normalized_moment, verify_factorial_ratio_sum,
    verify_rising_sum,
};
use facsum::reduction::{closed_sum_power, direct_sum, reduce_sum, y_power, SumKind, Weight};
use facsum::sequences::bell;
use facsum::transforms::{
    fft_apply, fft_integer_derivative, generalized_dobinski, rft_apply, rft_inverse_series,
    touchard_dobinski, DEFAULT_SERIES_TOL,
};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn within(limit_secs: u64, elapsed: Duration) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    let deg = rng.gen_range(0..=max_deg);
    let coeffs = (0..=deg)
        .map(|_| {
            Rat::new(
                rng.gen_range(-20i64..=20).into(),
                rng.gen_range(1i64..=9).into(),
            )
        })
        .collect();
    Poly::power(coeffs)
}

fn sample_xs() -> Vec<Rat> {
    [
        (1, 1),
        (2, 1),
        (-1, 1),
        (1, 2),
        (-3, 2),
        (7, 3),
        (-5, 4),
        (9, 7),
        (0, 1),
        (-11, 5),
    ]
    .iter()
    .map(|&(p, q)| Rat::new(p.into(), q.into()))
    .collect()
}

fn reduction_vs_oracle() -> Outcome {
    let start = Instant::now();
    let cases: Vec<(SumKind, u32, u32)> = SumKind::ALL
        .iter()
        .flat_map(|&k| (0..=3u32).flat_map(move |n0| (n0..=25).map(move |n| (k, n, n0))))
        .collect();
    let total = cases.len();
    let bad: Vec<_> = Exec::default()
        .map(cases, |(kind, n, n0)| {
            let rec = kind.recurrence();
            let reduced = reduce_sum(&rec, n, n0).map(|(v, _)| v);
            let direct = direct_sum(&rec, n, n0, &Weight::None);
            (reduced.is_ok() && reduced == direct)
                .then_some(())
                .ok_or((kind, n, n0))
        })
        .into_iter()
        .filter_map(Result::err)
        .collect();
    let t = start.elapsed();
    outcome(
        bad.is_empty() && within(5, t),
        format!(
            "{total} cases, {} mismatches, {t:.2?} (limit 5s)",
            bad.len()
        ),
    )
}

fn closed_forms() -> Outcome {
    let start = Instant::now();
    let xs = sample_xs();
    let cases: Vec<(SumKind, u32, Rat)> = SumKind::ALL
        .iter()
        .flat_map(|&k| {
            (0..=20u32).flat_map(move |n| sample_xs().into_iter().map(move |x| (k, n, x)))
        })
        .collect();
    let total = cases.len();
    let bad = Exec::default()
        .map(cases, |(kind, n, x)| {
            y_power(&kind.recurrence(), n, 0, &x).ok() == Some(closed_sum_power(kind, n, &x))
        })
        .into_iter()
        .filter(|ok| !ok)
        .count();
    let t = start.elapsed();
    outcome(
        bad == 0 && within(5, t) && xs.len() == 10,
        format!("{total} cases, {bad} mismatches, {t:.2?} (limit 5s)"),
    )
}

fn integral_representations() -> Outcome {
    let start = Instant::now();
    let xs = [0.5, 1.0, 1.5, 2.5, 7.25];
    let cases: Vec<(SumKind, u32, Real)> = SumKind::ALL
        .iter()
        .flat_map(|&k| (0..=12u32).flat_map(move |n| xs.into_iter().map(move |x| (k, n, x))))
        .collect();
    let total = cases.len();
    let results = Exec::default().map(cases, |(kind, n, x)| verify_rising_sum(kind, n, x, 1e-10));
    let worst = results
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .map(|r| r.rel_error)
        .fold(0.0, Real::max);
    let bad = results
        .iter()
        .filter(|r| !r.as_ref().is_ok_and(|r| r.passed))
        .count();
    let t = start.elapsed();
    outcome(
        bad == 0 && within(10, t),
        format!("{total} cases, {bad} failed, worst rel error {worst:.2e} (tol 1e-10), {t:.2?} (limit 10s)"),
    )
}

fn incomplete_gamma() -> Outcome {
    let mut worst: Real = 0.0;
    let mut bad = 0;
    for n in 0..=15 {
        match verify_factorial_ratio_sum(n, 1e-10) {
            Ok(r) => {
                worst = worst.max(r.rel_error);
                bad += usize::from(!r.passed);
            }
            Err(_) => bad += 1,
        }
    }
    for n in 0..=10 {
        for x in [0.5, 1.0, 3.0] {
            match check_incomplete_gamma_sum(n, x, 1e-10) {
                Ok(r) => {
                    worst = worst.max(r.rel_error);
                    bad += usize::from(!r.passed);
                }
                Err(_) => bad += 1,
            }
        }
    }
    outcome(
        bad == 0,
        format!("49 cases, {bad} failed, worst rel error {worst:.2e} (tol 1e-10)"),
    )
}

fn dobinski() -> Outcome {
    let mut worst: Real = 0.0;
    let mut bad = 0;
    for n in 0..=15u32 {
        let want = bell(n).to_f64().unwrap();
        match touchard_dobinski(n, 1.0, 300, DEFAULT_SERIES_TOL) {
            Ok(got) => {
                let (_, rel) = real_errors(want, got);
                worst = worst.max(rel);
                bad += usize::from(!(rel <= 1e-9));
            }
            Err(_) => bad += 1,
        }
    }
    outcome(
        bad == 0,
        format!("n <= 15, {bad} failed, worst rel error {worst:.2e} (tol 1e-9, <= 300 terms)"),
    )
}

fn generalized_dobinski_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut polys: Vec<Poly> = (0..=8).map(Poly::monomial).collect();
    polys.extend((0..20).map(|_| random_poly(&mut rng, 8)));
    let mut worst: Real = 0.0;
    let mut bad = 0;
    let mut total = 0;
    for p in &polys {
        for x in [0.0, 1.0, -1.0, 2.0] {
            for y in [0.5, 1.0, 3.0] {
                total += 1;
                match generalized_dobinski(p, x, y, 200) {
                    Ok((lhs, rhs)) => {
                        let scaled = (lhs - rhs).abs() / lhs.abs().max(1.0);
                        worst = worst.max(scaled);
                        bad += usize::from(!(scaled <= 1e-10));
                    }
                    Err(_) => bad += 1,
                }
            }
        }
    }
    outcome(
        bad == 0,
        format!(
            "{total} cases, {bad} failed, worst |lhs-rhs|/max(1,|lhs|) {worst:.2e} (tol 1e-10)"
        ),
    )
}

fn transform_round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let polys: Vec<Poly> = (0..50).map(|_| random_poly(&mut rng, 12)).collect();
    let mut trip_bad = 0;
    for p in &polys {
        for m in -3..=3 {
            let back = rft_apply(&p.clone(), m).and_then(|q| rft_apply(&q, -m));
            trip_bad += usize::from(back.as_ref() != Ok(p));
        }
    }
    let mut worst: Real = 0.0;
    let mut series_bad = 0;
    for p in &polys {
        let exact = rft_apply(p, -1).expect("power basis");
        for x in [-3.0, -1.5, -0.5, 0.5, 1.5, 3.0] {
            // evaluated exactly; f64 Horner cancels badly at degree 12
            let want =
                facsum::arith::rat_to_f64(&exact.eval(&facsum::arith::rat_from_f64(x).unwrap()));
            match rft_inverse_series(p, x, 500, 1e-15) {
                Ok(got) => {
                    let (_, rel) = real_errors(want, got);
                    worst = worst.max(rel);
                    series_bad += usize::from(!(rel <= 1e-9));
                }
                Err(_) => series_bad += 1,
            }
        }
    }
    outcome(
        trip_bad == 0 && series_bad == 0,
        format!(
            "50 polys deg <= 12: {trip_bad} round-trip mismatches over |m| <= 3; series {series_bad} failed, worst rel error {worst:.2e} (tol 1e-9)"
        ),
    )
}

fn fft_derivative() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut polys: Vec<Poly> = (0..=10).map(Poly::monomial).collect();
    polys.extend((0..30).map(|_| random_poly(&mut rng, 10)));
    let mut bad = 0;
    let mut total = 0;
    for p in &polys {
        let f = fft_apply(p).expect("power basis");
        for m in 0..=12u32 {
            total += 1;
            bad +=
                usize::from(fft_integer_derivative(p, m).ok() != Some(f.eval(&rat(i64::from(m)))));
        }
    }
    outcome(bad == 0, format!("{total} cases, {bad} mismatches (exact)"))
}

fn identity_suite() -> Outcome {
    let results = run_suite(&SuiteConfig::default(), Exec::default());
    let failed = results.iter().filter(|r| !r.passed).count();
    let flagged = results.iter().filter(|r| r.has_discrepancy()).count();
    let counterexample = check_rstirling_composition(2, 2)
        .into_iter()
        .find(|r| r.parameters.iter().any(|(k, v)| k == "m" && v == "2"));
    let detected = counterexample.as_ref().is_some_and(|r| {
        r.passed
            && r.lhs == rat(7)
            && r.printed_variant_lhs == Some(rat(3))
            && r.has_discrepancy()
            && !r.note.is_empty()
    });
    let in_suite = results.iter().any(|r| {
        r.identity_id == "rstirling_composition"
            && r.parameters
                == [
                    ("n".into(), "2".into()),
                    ("k".into(), "2".into()),
                    ("m".into(), "2".into()),
                ]
            && r.has_discrepancy()
    });
    outcome(
        failed == 0 && detected && in_suite,
        format!(
            "{} checks, {failed} failed; printed variants flagged {flagged} times; composition (2,2,2): 3 vs 7 {}",
            results.len(),
            if detected && in_suite { "detected" } else { "NOT detected" }
        ),
    )
}

fn quadrature_self_test() -> Outcome {
    let mut worst: Real = 0.0;
    let mut bad = 0;
    for alpha in [0.0, 0.5, 1.5, 4.0] {
        let Ok(rule) = gauss_laguerre(alpha, 12) else {
            bad += 1;
            continue;
        };
        for j in 0..=23 {
            let got = rule.integrate_normalized(|t| t.powi(j));
            let want = normalized_moment(alpha, j as u32);
            let rel = ((got - want) / want).abs();
            worst = worst.max(rel);
            bad += usize::from(!(rel <= 1e-12));
        }
    }
    outcome(
        bad == 0,
        format!("order 12, j <= 23, {bad} failed, worst rel error {worst:.2e} (tol 1e-12)"),
    )
}

fn cli_golden() -> Outcome {
    let golden = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_facsum"))
            .args(args)
            .env_remove("FACSUM_MAX_N")
            .output()
            .expect("spawn")
    };
    let goldens: &[(&str, &[&str])] = &[
        ("table_stirling2_4.txt", &["table", "stirling2", "--n", "4"]),
        (
            "table_rstirling2_3_r2.txt",
            &["table", "rstirling2", "--n", "3", "--r", "2"],
        ),
        (
            "sum_stirling1_power.txt",
            &[
                "sum",
                "stirling1",
                "--n",
                "3",
                "--weight",
                "power",
                "--x",
                "2",
            ],
        ),
        (
            "sum_binomial_trace.txt",
            &["--trace", "sum", "binomial", "--n", "3"],
        ),
        (
            "transform_rft_inverse.txt",
            &["transform", "rft", "--power", "-1", "--coeffs", "0,0,1"],
        ),
        (
            "verify_integrals.json",
            &["--format", "json", "verify", "integrals"],
        ),
        (
            "verify_identities.csv",
            &["--format", "csv", "verify", "identities"],
        ),
    ];
    let mut mismatched = Vec::new();
    for (name, args) in goldens {
        let first = run(args);
        let second = run(args);
        let want = std::fs::read(golden.join(name)).unwrap_or_default();
        if first.stdout != want || second.stdout != want || first.status.code() != Some(0) {
            mismatched.push(*name);
        }
    }
    let codes: &[(&[&str], i32)] = &[
        (&["verify", "identities"], 0),
        (&["verify", "all", "--tol", "1e-30"], 1),
        (&["table", "bogus", "--n", "2"], 2),
        (&["transform", "fft", "--power", "2", "--coeffs", "1"], 2),
    ];
    let bad_codes = codes
        .iter()
        .filter(|(args, code)| run(args).status.code() != Some(*code))
        .count();
    outcome(
        mismatched.is_empty() && bad_codes == 0,
        format!(
            "{} golden files, mismatched {mismatched:?}; {bad_codes} exit-code violations",
            goldens.len()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("reduction matches direct summation", reduction_vs_oracle),
        ("closed forms of weighted row sums", closed_forms),
        (
            "integral representations of rising sums",
            integral_representations,
        ),
        ("incomplete gamma sums", incomplete_gamma),
        ("Dobinski series for Bell numbers", dobinski),
        ("generalized Dobinski", generalized_dobinski_check),
        (
            "transform round trips and inverse series",
            transform_round_trips,
        ),
        ("falling transform as integer derivative", fft_derivative),
        (
            "identity suite and printed-variant detection",
            identity_suite,
        ),
        ("Gauss-Laguerre moments", quadrature_self_test),
        ("CLI golden files and exit codes", cli_golden),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failures += usize::from(!o.passed);
        println!(
            "{} [{:>2}] {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
