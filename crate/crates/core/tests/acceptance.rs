//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{
    all_subsets, brute_hausdorff, chain_map, chain_metric, chain_multi_map, ordered_triples,
    random_metric, random_multi_map, random_subset,
};
use tripoint::fixtures::{self, TABLE1_TRIPLES};
use tripoint::hausdorff::hausdorff_distance;
use tripoint::multi::{
    check_condition_i_multi, enumerate_fixed_points_multi, multi_orbit, multi_triple_lhs,
    verify_nadler, verify_three_point_multi,
};
use tripoint::numeric::parse_number;
use tripoint::phifun::{certify_phi, log_spaced, phi_eval, phi_iterate, DEFAULT_DEPTH};
use tripoint::single::{
    check_no_two_cycles, enumerate_fixed_points_single, fit_min_lambda, picard_orbit,
    sampled_ratio_scan, triple_lhs_rhs, verify_three_point_single, LambdaFit, SampledDomain,
    DEFAULT_ORBIT_TOL,
};
use tripoint::spaces::discrete_table;
use tripoint::{ComparisonFunction, MultiClass, SingleMap, TriMetricSpace, Witness};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Reference `(triple, A, B, R)` values, 1-based, as given.
const REFERENCE: [(&str, &str, &str, &str); 12] = [
    ("(1,2,3)", "9/2", "9", "1/2"),
    ("(1,3,2)", "23/4", "25/4", "23/25"),
    ("(2,3,1)", "17/4", "33/4", "17/33"),
    ("(1,2,4)", "13/4", "9/2", "13/18"),
    ("(1,4,2)", "9/2", "23/4", "18/23"),
    ("(2,4,1)", "13/4", "27/4", "13/27"),
    ("(1,3,4)", "2", "6.46846", "0.3091"),
    ("(1,4,3)", "2", "11.46846", "0.1743"),
    ("(3,4,1)", "2", "7", "2/7"),
    ("(2,3,4)", "17/4", "8.96846", "0.4738"),
    ("(2,4,3)", "9/2", "8.46846", "0.5313"),
    ("(3,4,2)", "23/4", "13/2", "23/26"),
];

/// A and B from the listed pairwise distances, the map `F = (1,2,4,1)` and
/// `d1` discrete, independent of the library's geometry.
fn table1_oracle(t: [usize; 3]) -> (f64, f64) {
    let w3: (f64, f64) = (175.0 / 72.0, -(9.0f64 - (175.0f64 / 72.0).powi(2)).sqrt());
    let w4: (f64, f64) = (-55.0 / 24.0, 5.0 * 23f64.sqrt() / 24.0);
    let d34 = ((w3.0 - w4.0).powi(2) + (w3.1 - w4.1).powi(2)).sqrt();
    let e = |i: usize, j: usize| -> f64 {
        let (a, b) = (i.min(j), i.max(j));
        match (a, b) {
            _ if a == b => 0.0,
            (0, 1) => 2.25,
            (0, 2) => 5.0,
            (0, 3) => 1.0,
            (1, 2) => 3.0,
            (1, 3) => 2.5,
            _ => d34,
        }
    };
    let delta = |i: usize, j: usize| if i == j { 0.0 } else { 1.0 };
    let f = [0, 1, 3, 0];
    let [i, j, k] = t;
    (
        delta(f[i], f[j]) + e(f[j], f[k]) + e(f[k], f[i]),
        delta(i, j) + e(j, k) + e(k, i),
    )
}

fn is_decimal(s: &str) -> bool {
    s.contains('.')
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (tri, f) = fixtures::example_2_11();
    let mut mismatches = Vec::new();
    let mut oracle_off = Vec::new();
    for (t, (label, a, b, r)) in TABLE1_TRIPLES.iter().zip(REFERENCE) {
        let terms = triple_lhs_rhs(&f, &tri, t[0], t[1], t[2]).map_err(|e| e.to_string())?;
        let (oa, ob) = table1_oracle(*t);
        if !close(terms.lhs, oa, 1e-9) || !close(terms.rhs_arg, ob, 1e-9) {
            oracle_off.push(label);
        }
        let tol = |s: &str| if is_decimal(s) { 5e-5 } else { 1e-9 };
        let ratio = terms.ratio();
        let want = |s: &str| parse_number(s).unwrap();
        let ok = close(terms.lhs, want(a), tol(a))
            && close(terms.rhs_arg, want(b), tol(b))
            && close(ratio, want(r), tol(r));
        if !ok {
            mismatches.push(format!(
                "{label}: computed A={:.6} B={:.6} R={:.6}, reference {a} {b} {r}",
                terms.lhs, terms.rhs_arg, ratio
            ));
        }
    }
    let elapsed = start.elapsed();
    let ok = mismatches.is_empty() && oracle_off.is_empty() && elapsed < Duration::from_secs(1);
    let oracle = if oracle_off.is_empty() {
        "independent oracle agrees on all 12 rows".to_string()
    } else {
        format!("oracle disagrees on {oracle_off:?}")
    };
    let rows = if mismatches.is_empty() {
        "all 12 rows match the reference values".to_string()
    } else {
        format!(
            "{} row(s) differ from the reference values: {}",
            mismatches.len(),
            mismatches.join("; ")
        )
    };
    check(ok, format!("{rows}; {oracle}; {elapsed:?}"))
}

fn criterion_2() -> Outcome {
    let (tri, f) = fixtures::example_2_11();
    let fit = fit_min_lambda(&f, &tri).map_err(|e| e.to_string())?;
    let lambda = fit.lambda().ok_or("fit reports not contractive")?;
    let phi = ComparisonFunction::linear(23.0 / 25.0).unwrap();
    let r = verify_three_point_single(&f, &tri, &phi).map_err(|e| e.to_string())?;
    let mut worst_gap: f64 = 0.0;
    for (i, j, k) in ordered_triples(4) {
        let a = triple_lhs_rhs(&f, &tri, i, j, k).unwrap().ratio();
        let b = triple_lhs_rhs(&f, &tri, j, i, k).unwrap().ratio();
        worst_gap = worst_gap.max((a - b).abs());
    }
    check(
        close(lambda, 0.92, 1e-9) && r.holds && r.checked_count == 24 && worst_gap <= 1e-9,
        format!(
            "fit λ = {lambda:.12}, certificate holds = {} over {} triples, max |R(i,j,k) − R(j,i,k)| = {worst_gap:.2e}",
            r.holds, r.checked_count
        ),
    )
}

fn criterion_3() -> Outcome {
    let (_, f) = fixtures::example_2_11();
    let tri = TriMetricSpace::uniform(fixtures::example_2_11_points(), discrete_table(4).unwrap())
        .unwrap();
    let fit = fit_min_lambda(&f, &tri).map_err(|e| e.to_string())?;
    let (ratio, triple) = match fit {
        LambdaFit::NotContractive { ratio, triple } => (ratio, triple),
        LambdaFit::Contractive { lambda, .. } => return Err(format!("fit claims λ = {lambda}")),
    };
    let witness = triple_lhs_rhs(&f, &tri, triple[0], triple[1], triple[2])
        .unwrap()
        .ratio();
    let mut all_fail = true;
    for lambda in [0.0, 0.5, 0.9, 23.0 / 25.0, 0.99, 1.0 - 1e-9] {
        let phi = ComparisonFunction::linear(lambda).unwrap();
        all_fail &= !verify_three_point_single(&f, &tri, &phi).unwrap().holds;
    }
    check(
        close(ratio, 1.0, 1e-12) && close(witness, 1.0, 1e-12) && all_fail,
        format!("max ratio {ratio} at {triple:?}; every tested λ < 1 fails = {all_fail}"),
    )
}

fn criterion_4() -> Outcome {
    let (_, f) = fixtures::example_2_11();
    let single = enumerate_fixed_points_single(&f);
    let (_, _, m) = fixtures::example_3_5();
    let multi = enumerate_fixed_points_multi(&m);
    check(
        single == [0, 1] && multi == [0, 2],
        format!("Fix(F) = {single:?} (w1, w2), Fix(multi) = {multi:?} (v1, v3)"),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let (_, d, f) = fixtures::example_3_5();
    let tilde = verify_three_point_multi(&f, &d, 2.0 / 3.0, MultiClass::Tilde)
        .map_err(|e| e.to_string())?;
    let nadler = verify_nadler(&f, &d, 2.0 / 3.0).map_err(|e| e.to_string())?;
    let tm = tilde.max_ratio.unwrap_or(f64::NAN);
    let nm = nadler.max_ratio.unwrap_or(f64::NAN);
    let elapsed = start.elapsed();
    check(
        close(tm, 2.0 / 3.0, 1e-12)
            && tilde.checked_count == 6
            && close(nm, 1.0, 1e-12)
            && nadler.worst == Some(Witness::Pair([0, 2]))
            && elapsed < Duration::from_secs(1),
        format!(
            "tilde max ratio {tm} over {} triples; Nadler max ratio {nm} at {:?}; {elapsed:?}",
            tilde.checked_count, nadler.worst
        ),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let (map, metrics) = fixtures::interval_example();
    let grid = SampledDomain::uniform(0.0, 1.0, 128).unwrap();
    let full = sampled_ratio_scan(&map, &grid, &metrics).map_err(|e| e.to_string())?;
    let low = sampled_ratio_scan(&map, &grid.restrict(|x| x <= 0.5).unwrap(), &metrics).unwrap();
    let high = sampled_ratio_scan(&map, &grid.restrict(|x| x > 0.5).unwrap(), &metrics).unwrap();
    let elapsed = start.elapsed();
    let exact = |r: &tripoint::single::ScanResult, v: f64| {
        close(r.max_r, v, 1e-12) && close(r.min_r, v, 1e-12)
    };
    check(
        full.max_r <= 0.5 + 1e-12
            && exact(&low, 1.0 / 3.0)
            && exact(&high, 0.5)
            && elapsed < Duration::from_secs(30),
        format!(
            "max R = {} over {} triples; case 1 R ∈ [{}, {}]; case 2 R ∈ [{}, {}]; {elapsed:?}",
            full.max_r, full.triple_count, low.min_r, low.max_r, high.min_r, high.max_r
        ),
    )
}

fn criterion_7() -> Outcome {
    let (tri, f) = fixtures::example_2_11();
    let phi = ComparisonFunction::linear(23.0 / 25.0).unwrap();
    let trace =
        picard_orbit(&f, &tri, 2, &phi, 100, DEFAULT_ORBIT_TOL).map_err(|e| e.to_string())?;
    let tau0 = trace.tau0.ok_or("τ₀ undefined")?;
    let bounded = trace
        .step_d1
        .iter()
        .enumerate()
        .all(|(k, &s)| s <= 0.92f64.powi(k as i32) * 7.0 + 1e-9);
    check(
        close(tau0, 7.0, 1e-9)
            && bounded
            && trace.fixed_point == Some(0)
            && trace.step_d1.len() <= 3,
        format!(
            "τ₀ = {tau0}, orbit {:?}, steps {:?}, all within (23/25)ᵏ·7 = {bounded}",
            trace.points, trace.step_d1
        ),
    )
}

fn suite_a() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA);
    let subsets = all_subsets(5);
    for inst in 0..100 {
        let d = random_metric(&mut rng, 5);
        let h: Vec<Vec<f64>> = subsets
            .iter()
            .map(|a| {
                subsets
                    .iter()
                    .map(|b| hausdorff_distance(a, b, &d))
                    .collect()
            })
            .collect();
        for (i, a) in subsets.iter().enumerate() {
            for (j, b) in subsets.iter().enumerate() {
                let oracle = brute_hausdorff(a.members(), b.members(), &d);
                if !close(h[i][j], oracle, 1e-12) {
                    return Err(format!(
                        "instance {inst}: H({a:?},{b:?}) = {} vs {oracle}",
                        h[i][j]
                    ));
                }
                if (i == j) != (h[i][j] == 0.0) || h[i][j] != h[j][i] {
                    return Err(format!(
                        "instance {inst}: identity/symmetry fails at {a:?}, {b:?}"
                    ));
                }
                for k in 0..subsets.len() {
                    if h[i][k] > h[i][j] + h[j][k] + 1e-9 {
                        return Err(format!("instance {inst}: triangle fails at {i},{j},{k}"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn suite_b() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB);
    for inst in 0..100 {
        let d = random_metric(&mut rng, 5);
        let f = random_multi_map(&mut rng, 5);
        for (x, y, z) in ordered_triples(5) {
            let l = |c| multi_triple_lhs(&f, &d, x, y, z, c).unwrap();
            let (t, p, pp) = (
                l(MultiClass::Tilde),
                l(MultiClass::TildePrime),
                l(MultiClass::TildeDoublePrime),
            );
            if t > p + 1e-12 || p > pp + 1e-12 {
                return Err(format!(
                    "instance {inst} at ({x},{y},{z}): {t} / {p} / {pp}"
                ));
            }
        }
    }
    Ok(())
}

fn suite_c() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC);
    let (mut found, mut tries) = (0, 0);
    let mut sizes = [0usize; 3];
    while found < 100 {
        tries += 1;
        if tries > 2_000_000 {
            return Err(format!("only {found} instances after {tries} draws"));
        }
        let n = rng.gen_range(4..=7);
        let space = tripoint::PointSpace::numbered("p", n);
        // Half the draws are arbitrary metrics and maps, half are chains.
        let (tri, f) = if rng.gen_bool(0.5) {
            let tri = TriMetricSpace::new(
                space,
                random_metric(&mut rng, n),
                random_metric(&mut rng, n),
                random_metric(&mut rng, n),
            )
            .unwrap();
            let pool = random_subset(&mut rng, n);
            let image = (0..n)
                .map(|_| pool.members()[rng.gen_range(0..pool.len())])
                .collect();
            (tri, SingleMap::new(image).unwrap())
        } else {
            let d = chain_metric(&mut rng, n);
            let d1 = if rng.gen_bool(0.5) {
                discrete_table(n).unwrap()
            } else {
                d.clone()
            };
            let fixed = rng.gen_range(1..=2);
            let tri = TriMetricSpace::new(space, d1, d.clone(), d).unwrap();
            (tri, SingleMap::new(chain_map(&mut rng, n, fixed)).unwrap())
        };
        let phi = if rng.gen_bool(0.8) {
            ComparisonFunction::linear(rng.gen_range(0.5..1.0)).unwrap()
        } else {
            ComparisonFunction::log_half()
        };
        if !verify_three_point_single(&f, &tri, &phi).unwrap().holds || !check_no_two_cycles(&f).ok
        {
            continue;
        }
        found += 1;
        let fix = enumerate_fixed_points_single(&f);
        let oracle = (0..n).filter(|&i| f.apply(i) == i).count();
        if fix.len() != oracle || !(1..=2).contains(&fix.len()) {
            return Err(format!("|Fix| = {} for map {:?}", fix.len(), f.image()));
        }
        sizes[fix.len()] += 1;
    }
    Ok(format!(
        "{tries} draws, |Fix|=1: {}, |Fix|=2: {}",
        sizes[1], sizes[2]
    ))
}

/// Draws certified multi-valued instances of `class` and checks every orbit.
fn multi_suite(
    seed: u64,
    class: MultiClass,
    lambdas: std::ops::Range<f64>,
) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut found, mut tries, mut steps) = (0, 0, 0);
    while found < 100 {
        tries += 1;
        if tries > 5_000_000 {
            return Err(format!("only {found} instances after {tries} draws"));
        }
        let n = rng.gen_range(4..=7);
        let (d, f) = if rng.gen_bool(0.5) {
            let pool = random_subset(&mut rng, n);
            let images = (0..n)
                .map(|_| {
                    let sub = random_subset(&mut rng, pool.len());
                    tripoint::IndexSubset::new(sub.iter().map(|i| pool.members()[i]), n).unwrap()
                })
                .collect();
            (
                random_metric(&mut rng, n),
                tripoint::MultiMap::new(images).unwrap(),
            )
        } else {
            (chain_metric(&mut rng, n), chain_multi_map(&mut rng, n))
        };
        let lambda = rng.gen_range(lambdas.clone());
        if !verify_three_point_multi(&f, &d, lambda, class)
            .unwrap()
            .holds
            || !check_condition_i_multi(&f).ok
        {
            continue;
        }
        found += 1;
        if enumerate_fixed_points_multi(&f).is_empty() {
            return Err(format!("empty Fix for {:?}", f.images()));
        }
        for u0 in 0..n {
            let trace = multi_orbit(&f, &d, u0, lambda, class, 200).unwrap();
            if trace.fixed_point.is_none() {
                return Err(format!(
                    "orbit {:?} of {:?} ends without a fixed point",
                    trace.points,
                    f.images()
                ));
            }
            for c in trace.recursion_checks() {
                steps += 1;
                if !c.holds() {
                    return Err(format!(
                        "p_{} = {} > {} on orbit {:?} of {:?} (λ = {lambda})",
                        c.n,
                        c.p_n,
                        c.bound,
                        trace.points,
                        f.images()
                    ));
                }
            }
        }
    }
    Ok(format!("{tries} draws, {steps} recursion steps"))
}

fn criterion_8() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    let mut record = |name: &str, r: Result<String, String>| match r {
        Ok(s) if s.is_empty() => parts.push(format!("({name}) ok")),
        Ok(s) => parts.push(format!("({name}) ok, {s}")),
        Err(s) => {
            ok = false;
            parts.push(format!("({name}) FAILED {s}"))
        }
    };
    record(
        "a",
        suite_a().map(|_| "100 spaces × 31² subset pairs".into()),
    );
    record("b", suite_b().map(|_| "100 maps × 60 triples".into()));
    record("c", suite_c());
    record("d", multi_suite(0xD, MultiClass::Tilde, 0.05..0.999));
    record("e", multi_suite(0xE, MultiClass::Bar, 0.05..0.499));
    let detail = parts.join("; ");
    check(ok, detail)
}

fn criterion_9() -> Outcome {
    let samples = log_spaced(1e-6, 1e3, 50);
    let family = [
        ("linear(0.1)", ComparisonFunction::linear(0.1).unwrap()),
        ("linear(0.5)", ComparisonFunction::linear(0.5).unwrap()),
        (
            "linear(23/25)",
            ComparisonFunction::linear(23.0 / 25.0).unwrap(),
        ),
        ("log_half", ComparisonFunction::log_half()),
        (
            "arctan_piecewise(0.3,0.6)",
            ComparisonFunction::arctan_piecewise(0.3, 0.6).unwrap(),
        ),
    ];
    let mut failed = Vec::new();
    for (name, phi) in &family {
        let r = certify_phi(phi, &samples, DEFAULT_DEPTH).map_err(|e| e.to_string())?;
        if !r.passed() {
            failed.push(format!("{name}: {:?}", r.witnesses));
        }
    }
    let log_half = ComparisonFunction::log_half();
    let arctan = ComparisonFunction::arctan_piecewise(0.3, 0.6).unwrap();
    for &t in &samples {
        for n in 0..=DEFAULT_DEPTH {
            let v = phi_iterate(&log_half, n, t).unwrap();
            if v > 0.5f64.powi(n as i32) * t * (1.0 + 1e-12) {
                failed.push(format!("log_half φ^{n}({t}) = {v}"));
            }
        }
        let v = phi_eval(&arctan, t).unwrap();
        if v > 0.6 * t {
            failed.push(format!("arctan φ({t}) = {v}"));
        }
    }
    check(
        failed.is_empty(),
        if failed.is_empty() {
            format!(
                "{} families certified on 50 samples at depth {DEFAULT_DEPTH}; iterate bounds hold",
                family.len()
            )
        } else {
            failed.join("; ")
        },
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 reference A/B/R table", criterion_1),
        ("2 minimal λ and full certificate", criterion_2),
        ("3 discrete-metric negative control", criterion_3),
        ("4 fixed-point sets", criterion_4),
        ("5 multi-valued separation from Nadler", criterion_5),
        ("6 sampled interval scan", criterion_6),
        ("7 Picard error bounds", criterion_7),
        ("8 randomized property suites", criterion_8),
        ("9 comparison-function certification", criterion_9),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  criterion {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
