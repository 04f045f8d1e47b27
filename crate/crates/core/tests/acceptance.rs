//! Acceptance criteria. Runs as a plain binary so every criterion prints a
//! PASS/FAIL line; exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use cubestat::arithmetic::{self, ApproxSpec};
use cubestat::constructions::{
    bernoulli_set, c_d, c_dk, c_star, distinct_row_subclique, expected_single_fraction, layered_set, parity_set,
    perturb_parity, perturbation_condition, random_admissible_perturbation, syndrome_guarantee, syndrome_set,
    turan_extremal_set, weight_top_bottom_set,
};
use cubestat::gf2::{span_rank, GF2Matrix};
use cubestat::hadamard::recipe_for;
use cubestat::johnson::{hadamard_to_clique, johnson_graph, max_clique, verify_clique, CliqueCertificate, SearchBudget};
use cubestat::rational;
use cubestat::stats::{
    distribution, distribution_fast, exhaustive_lambda, lambda_of_set, layered_distribution, ExhaustiveOptions,
    LayeredSpec,
};
use cubestat::turan::turan_density;
use cubestat::verify::random_set;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_exhaustive() -> Outcome {
    let opts = ExhaustiveOptions::default();
    let r = exhaustive_lambda(4, 2, 1, opts).map_err(|e| e.to_string())?;
    let pi = turan_density(4, 3).unwrap();
    ensure(r.value == rational::ratio(5, 6) && r.value == pi, || format!("lambda(4,2,1) = {}", r.value))?;
    for n in 2..=4 {
        for s in [0, 2, 4] {
            let v = exhaustive_lambda(n, 2, s, opts).map_err(|e| e.to_string())?.value;
            ensure(v == rational::one(), || format!("lambda({n},2,{s}) = {v}"))?;
        }
    }
    Ok("lambda(4,2,1) = 5/6 = pi(4,3); s in {0,2,4} give 1 for n = 2..4".into())
}

fn c2_extremal() -> Outcome {
    let tri = CliqueCertificate { s: 1, members: vec![0b0011, 0b0101, 0b1001] };
    let a = turan_extremal_set(2, 1, &tri).map_err(|e| e.to_string())?;
    let v1 = lambda_of_set(&a, 2, 1).unwrap();
    ensure(v1 == rational::ratio(5, 6), || format!("turan_extremal lambda(4,2,1) = {v1}"))?;

    let v2 = lambda_of_set(&weight_top_bottom_set(6).unwrap(), 6, 1).unwrap();
    ensure(v2 == rational::ratio(3, 4), || format!("weight_top_bottom lambda(8,6,1) = {v2}"))?;

    let h8 = hadamard_to_clique(&recipe_for(8).unwrap().build().unwrap()).unwrap();
    let five = distinct_row_subclique(&h8, 5).ok_or("no distinct-row 5-subclique")?;
    ensure(verify_clique(&five) && five.size() == 5, || "bad sub-clique".into())?;
    let a = turan_extremal_set(3, 2, &five).map_err(|e| e.to_string())?;
    let v3 = lambda_of_set(&a, 3, 2).unwrap();
    ensure(v3 == rational::one(), || format!("turan_extremal lambda(5,3,2) = {v3}"))?;
    Ok(format!("{v1}, {v2}, {v3}"))
}

/// Fraction of all `(2^(d-k) - 1)^d` nonzero column tuples that span.
fn c_star_oracle(d: u32, k: u32) -> (usize, usize) {
    let m = d - k;
    let nonzero: Vec<u64> = (1..1u64 << m).collect();
    let total = nonzero.len().pow(d);
    let good = (0..total)
        .filter(|&idx| {
            let mut rest = idx;
            let cols: Vec<u64> = (0..d)
                .map(|_| {
                    let c = nonzero[rest % nonzero.len()];
                    rest /= nonzero.len();
                    c
                })
                .collect();
            span_rank(&cols) == m as usize
        })
        .count();
    (good, total)
}

fn c3_bound_formulas() -> Outcome {
    let c2 = c_d(2).unwrap();
    ensure(c2 == rational::ratio(2, 3), || format!("c_2 = {c2}"))?;
    let c31 = c_dk(3, 1).unwrap();
    ensure(c31 == rational::ratio(21, 32), || format!("c(3,1) = {c31}"))?;
    let cs = c_star(3, 1).unwrap();
    ensure(cs == rational::ratio(8, 9), || format!("c*(3,1) = {cs}"))?;
    let (good, total) = c_star_oracle(3, 1);
    ensure((good, total) == (24, 27), || format!("enumeration gives {good}/{total}"))?;
    for d in 1..=20 {
        for k in 1..=d {
            let c = c_dk(d, k).unwrap();
            let s = c_star(d, k).unwrap();
            let floor = rational::one() - rational::one() / rational::pow2(k);
            ensure(s >= c && c > floor, || format!("ordering fails at d={d} k={k}"))?;
        }
    }
    Ok("c_2 = 2/3, c(3,1) = 21/32, c*(3,1) = 8/9 (24 of 27), ordering holds for d <= 20".into())
}

fn c4_syndrome() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut tight = 0;
    for i in 0..50 {
        let n = rng.gen_range(2..=9u32);
        let r = rng.gen_range(1..=4usize.min(n as usize));
        let columns: Vec<u64> = (0..n).map(|_| rng.next_u64() & ((1 << r) - 1)).collect();
        let b = GF2Matrix::from_columns(r, &columns).unwrap();
        let d = rng.gen_range(r as u32..=n);
        let mut colors: BTreeSet<u64> = (0..1u64 << r).filter(|_| rng.gen_bool(0.5)).collect();
        if colors.is_empty() {
            colors.insert(0);
        }
        let set = syndrome_set(&b, &colors).unwrap();
        let (s, good) = syndrome_guarantee(&b, &colors, d).unwrap();
        let got = distribution(&set, d).unwrap().count(s);
        ensure(got >= good, || format!("instance {i}: n={n} r={r} d={d}: {got} < {good}"))?;
        tight += (got == good) as usize;
    }
    Ok(format!("50 instances, guarantee met ({tight} with equality)"))
}

fn c5_johnson() -> Outcome {
    let mut parts = Vec::new();
    for s in 1..=3u32 {
        let g = johnson_graph(s).map_err(|e| e.to_string())?;
        let found = max_clique(&g, &SearchBudget::unlimited());
        let h = hadamard_to_clique(&recipe_for(4 * s as u64).unwrap().build().unwrap()).unwrap();
        let size = found.certificate.size();
        ensure(found.optimal && size as u32 == 4 * s - 1 && verify_clique(&found.certificate), || {
            format!("s={s}: search size {size}, optimal {}", found.optimal)
        })?;
        ensure(h.size() == size, || format!("s={s}: certificate size {}", h.size()))?;
        parts.push(format!("omega({s})={size}"));
    }
    for order in [4u64, 8, 12, 16, 20, 24, 32] {
        let cert = hadamard_to_clique(&recipe_for(order).unwrap().build().unwrap()).map_err(|e| e.to_string())?;
        ensure(verify_clique(&cert) && cert.size() as u64 == order - 1, || format!("order {order} certificate"))?;
    }
    Ok(format!("{}; certificates for orders 4..32 verified", parts.join(", ")))
}

fn c6_number_theory() -> Outcome {
    for d in 3..=16 {
        for k in 3..=d {
            ensure(arithmetic::verify_prop31(k, d).unwrap(), || format!("prop31 fails at k={k} d={d}"))?;
        }
    }
    for k in 1..=8 {
        let report = arithmetic::verify_thm32(k, 1..=16).unwrap();
        ensure(report.passed(), || format!("k={k}: {} violations", report.violations))?;
        for case in &report.constant_cases {
            let full = BigUint::from(1u32) << case.d as usize;
            let half = BigUint::from(1u32) << (case.d as usize - 1);
            let v = &case.values[0];
            let trivial = case.residues.is_empty()
                || case.residues.len() as u64 == k
                || (k % 2 == 0 && case.residues.len() as u64 == k / 2 && {
                    let parity = case.residues[0] % 2;
                    case.residues.iter().all(|r| r % 2 == parity)
                });
            ensure(trivial, || format!("k={k} d={}: nontrivial T={:?}", case.d, case.residues))?;
            ensure(v.bits() == 0 || *v == full || *v == half, || format!("k={k} d={}: value {v}", case.d))?;
        }
    }
    Ok("prop31 on 2 < k <= d <= 16; thm32 trivial sets only for k <= 8, d <= 16".into())
}

fn c7_approx() -> Outcome {
    ensure(arithmetic::third_layer_check(30), || "third_layer_check(30) false".into())?;
    let mut borderline = 0;
    let mut cases = 0;
    for q in 2..=12u64 {
        for p in 1..q {
            let spec =
                ApproxSpec { x: p as f64 / q as f64, p, q, residues: (0..p).collect(), d_min: 0, tol: 0.0 };
            for d in 1..=64 {
                let c = arithmetic::check_approx(&spec, d).unwrap();
                ensure(c.bound_ok, || format!("q={q} p={p} d={d}: error {}", c.max_error))?;
                borderline += c.borderline as usize;
                cases += 1;
            }
        }
    }
    Ok(format!("third_layer_check(30); {cases} approx cases within bound ({borderline} borderline)"))
}

fn c8_engine() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..200 {
        let n = rng.gen_range(1..=9u32);
        let d = rng.gen_range(0..=n);
        let set = random_set(&mut rng, n).unwrap();
        let direct = distribution(&set, d).unwrap();
        ensure(distribution_fast(&set, d).unwrap() == direct, || format!("instance {i}: fast != direct"))?;
        let comp = distribution(&set.complement(), d).unwrap();
        let full = 1u64 << d;
        ensure((0..=full).all(|s| direct.count(s) == comp.count(full - s)), || {
            format!("instance {i}: complement reflection fails")
        })?;
    }
    let mut layered = 0;
    for n in 0..=10u32 {
        for k in 1..=5u64 {
            for mask in 1..1u64 << k {
                let spec = LayeredSpec::new(k, (0..k).filter(|r| (mask >> r) & 1 == 1)).unwrap();
                let set = layered_set(n, &spec).unwrap();
                for d in 0..=n {
                    ensure(layered_distribution(n, d, &spec).unwrap() == distribution(&set, d).unwrap(), || {
                        format!("layered n={n} k={k} T={:?} d={d}", spec.residues)
                    })?;
                    layered += 1;
                }
            }
        }
    }
    Ok(format!("200 random instances; {layered} layered cases"))
}

fn c9_perturbed_parity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..20 {
        let n = rng.gen_range(3..=8u32);
        let d = rng.gen_range(2..=4u32.min(n));
        let len = rng.gen_range(1..=4usize);
        let cubes = random_admissible_perturbation(n, d, len, rng.next_u64()).map_err(|e| e.to_string())?;
        ensure(perturbation_condition(n, d, &cubes), || format!("sequence {i}: condition"))?;
        let b = perturb_parity(&parity_set(n).unwrap(), &cubes).unwrap();
        let v = lambda_of_set(&b, d, 1 << (d - 1)).unwrap();
        ensure(v == rational::one(), || format!("sequence {i}: n={n} d={d} lambda = {v}"))?;
    }
    Ok("20 sequences keep lambda(n,d,2^(d-1)) = 1".into())
}

fn c10_monte_carlo() -> Outcome {
    let (n, d) = (10u32, 3u32);
    let samples = 10_000u64;
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|seed| rational::to_f64(&lambda_of_set(&bernoulli_set(n, d, seed).unwrap(), d, 1).unwrap()))
        .collect();
    // Each subcube holds Binomial(2^d, 2^-d) points, so the expected
    // fraction with exactly one is 2^d 2^-d (1 - 2^-d)^(2^d - 1).
    let p = rational::ratio(1, 8);
    let expectation = rational::int(8) * &p * num_traits::pow(rational::one() - &p, 7);
    let formula = expected_single_fraction(d).unwrap();
    ensure(expectation == formula, || "expectation differs from the formula".into())?;
    let mean = values.iter().sum::<f64>() / samples as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
    let se = (var / samples as f64).sqrt();
    let target = rational::to_f64(&expectation);
    let z = (mean - target) / se;
    ensure(z.abs() <= 3.0, || format!("mean {mean:.6} vs {target:.6}, z = {z:.2}"))?;
    Ok(format!("mean {mean:.6}, expectation {target:.6}, se {se:.2e}, z {z:.2}; (7/8)^7 = {formula}"))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("1 exhaustive oracle", Duration::from_secs(30), c1_exhaustive),
        ("2 extremal attainment", Duration::from_secs(10), c2_extremal),
        ("3 bound formulas", Duration::from_secs(5), c3_bound_formulas),
        ("4 syndrome certificate", Duration::from_secs(60), c4_syndrome),
        ("5 johnson/hadamard", Duration::from_secs(300), c5_johnson),
        ("6 number theory", Duration::from_secs(120), c6_number_theory),
        ("7 approximate statistics", Duration::from_secs(60), c7_approx),
        ("8 engine self-consistency", Duration::from_secs(120), c8_engine),
        ("9 perturbed parity", Duration::from_secs(60), c9_perturbed_parity),
        ("10 monte carlo", Duration::from_secs(300), c10_monte_carlo),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > limit => Err(format!("{msg}; took {elapsed:.1?} > {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{elapsed:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{elapsed:.2?}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
