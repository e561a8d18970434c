//! Acceptance run: one line per criterion, non-zero exit if any fails.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use common::{q, random_poly_from_roots, random_rational};
use l1stab::cases::{cournot_polys, cournot_verify, ricker_condition_i, ricker_condition_ii, ricker_verdict};
use l1stab::cases::{CournotParams, RickerParams, RickerVerdict};
use l1stab::jury::{jury_table, jury_verdict, JuryVerdict};
use l1stab::region::{scan_region, GridSpec, Mapping, INVALID, NOT_CERTIFIED};
use l1stab::roots::find_roots;
use l1stab::{
    iterate_stage, mod_reduce, normalize, run_algorithm, AlgoConfig, Backend, GeneralPolynomial, MonicPolynomial,
    Rational, StageTrace, Verdict,
};
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn worked_example() -> MonicPolynomial<Rational> {
    normalize(&[q(1, 1), q(1, 2), q(0, 1), q(0, 1), q(-1, 2), q(-1, 2)]).unwrap()
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn criterion_1() -> Outcome {
    let p = worked_example();
    let start = Instant::now();
    let cert = run_algorithm(&p, &AlgoConfig::default());
    let elapsed = start.elapsed();
    let expected = [
        ("x^5 + 1/2x^4 - 1/2x - 1/2", q(3, 2)),
        ("x^6 - 1/4x^4 - 1/2x^2 - 1/4x + 1/4", q(5, 4)),
        ("x^7 + 1/8x^4 - 1/2x^3 - 1/4x^2 + 1/8x - 1/8", q(9, 8)),
        ("x^8 - 9/16x^4 - 1/4x^3 + 1/8x^2 - 1/16x + 1/16", q(17, 16)),
        ("x^9 + 1/32x^4 + 1/8x^3 - 1/16x^2 - 7/32x - 9/32", q(23, 32)),
    ];
    let rows_match = cert.trace.len() == expected.len()
        && cert
            .trace
            .iter()
            .zip(&expected)
            .all(|(t, (poly, sum))| t.polynomial_string() == *poly && t.tail_sum == *sum);
    let pass = rows_match
        && cert.verdict == Verdict::Certified
        && cert.deciding_stage == Some(4)
        && elapsed < Duration::from_millis(10);
    let sums: Vec<String> = cert.tail_sums().map(|s| s.to_string()).collect();
    outcome(
        pass,
        format!(
            "stage-polynomial trace: sums [{}], stage {:?}, {:.3} ms",
            sums.join(", "),
            cert.deciding_stage,
            ms(elapsed)
        ),
    )
}

fn criterion_2() -> Outcome {
    let p = worked_example();
    let start = Instant::now();
    let table = jury_table(&p);
    let elapsed = start.elapsed();
    let expected: [&[(i64, i64)]; 7] = [
        &[(-1, 2), (-1, 2), (0, 1), (0, 1), (1, 2), (1, 1)],
        &[(1, 1), (1, 2), (0, 1), (0, 1), (-1, 2), (-1, 2)],
        &[(-3, 4), (-3, 4), (0, 1), (0, 1), (3, 4)],
        &[(3, 4), (0, 1), (0, 1), (-3, 4), (-3, 4)],
        &[(35, 16), (3, 16), (0, 1), (1, 16)],
        &[(1, 16), (0, 1), (3, 16), (35, 16)],
        &[(153, 32), (105, 256), (-3, 256)],
    ];
    let mut mismatched = Vec::new();
    for (i, row) in expected.iter().enumerate() {
        let want: Vec<Rational> = row.iter().map(|&(a, b)| q(a, b)).collect();
        if table.rows.get(i) != Some(&want) {
            mismatched.push(i + 1);
        }
    }
    let pass = mismatched.is_empty() && table.verdict == JuryVerdict::Stable && elapsed < Duration::from_millis(10);
    let last: Vec<String> = table.rows.last().unwrap().iter().map(|v| v.to_string()).collect();
    outcome(
        pass,
        format!(
            "Jury table vs expected rows: mismatched rows {:?}, computed last row ({}), verdict {:?}, {:.3} ms",
            mismatched,
            last.join(", "),
            table.verdict,
            ms(elapsed)
        ),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let spec = GridSpec::new(Mapping::QuadraticAlphaBeta, Backend::Exact, 0);
    assert_eq!((spec.width(), spec.height()), (501, 301));
    let alphas = spec.x_axis.nodes();
    let betas = spec.y_axis.nodes();
    let one = q(1, 1);

    let f0 = scan_region(&spec);
    let f1 = scan_region(&GridSpec {
        max_stages: 1,
        ..spec.clone()
    });

    let (mut cells, mut disagreements) = (0usize, 0usize);
    let mut witness = None;
    for (j, b) in betas.iter().enumerate() {
        for (i, a) in alphas.iter().enumerate() {
            cells += 1;
            let p = MonicPolynomial::new(vec![b.clone(), -a.clone()]).unwrap();
            let t0 = StageTrace::initial(&p);
            let t1 = iterate_stage(&t0, &p);
            let t2 = iterate_stage(&t1, &p);
            let s0 = a.abs() + b.abs() < one;
            let s1 = (a * a - b).abs() + (a * b).abs() < one;
            let s2 = (a * (a * a - q(2, 1) * b)).abs() + (b * (a * a - b)).abs() < one;
            let mut ok = (t0.tail_sum < one) == s0 && (t1.tail_sum < one) == s1 && (t2.tail_sum < one) == s2;
            ok &= (f0.stage_at(i, j) == 0) == s0;
            if b.is_positive() {
                let revised = a.abs() < one && *b < (&one + a * a) / (&one + a.abs());
                ok &= (f1.stage_at(i, j) >= 0) == revised;
            }
            if !ok {
                disagreements += 1;
            }
            if s1 && !s2 && witness.is_none() {
                witness = Some((a.clone(), b.clone()));
            }
        }
    }
    let pass = disagreements == 0 && witness.is_some();
    let w = witness.map_or("none".to_string(), |(a, b)| format!("({a}, {b})"));
    outcome(
        pass,
        format!(
            "degree-2 stage regions on {cells} nodes: {disagreements} disagreements, S1\\S2 witness {w}, {:.2} s",
            start.elapsed().as_secs_f64()
        ),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(2024);
    let cfg = AlgoConfig::with_max_stages(16);
    let (mut certified, mut counterexamples) = (0usize, Vec::new());
    let total = 12_000;
    for _ in 0..total {
        let degree = rng.gen_range(2..=8);
        // magnitude scale keeps every coefficient in [-2, 2]
        let scale = q(1, 1 << rng.gen_range(0..4));
        let tail: Vec<Rational> = (0..degree).map(|_| random_rational(&mut rng, 2, 16) * &scale).collect();
        let p = MonicPolynomial::new(tail).unwrap();
        let cert = run_algorithm(&p, &cfg);
        if cert.verdict != Verdict::Certified {
            continue;
        }
        certified += 1;
        let jury = jury_verdict(&p);
        let modulus = find_roots(&p).map(|r| r.max_modulus).unwrap_or(f64::INFINITY);
        if jury != JuryVerdict::Stable || modulus >= 1.0 + 1e-9 {
            counterexamples.push(p.to_string());
        }
    }
    outcome(
        counterexamples.is_empty(),
        format!(
            "soundness sweep: {total} polynomials, {certified} certified, {} counterexamples{}, {:.2} s",
            counterexamples.len(),
            counterexamples
                .first()
                .map_or(String::new(), |c| format!(" (first: {c})")),
            start.elapsed().as_secs_f64()
        ),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let cfg = AlgoConfig::with_max_stages(64);
    let mut failures: Vec<String> = Vec::new();
    for i in 1..=9 {
        let lambda = q(i, 10);
        for k in 1..=10 {
            let n2 = cournot_verify(&CournotParams::new(lambda.clone(), k, 2).unwrap(), &cfg).unwrap();
            if n2.stage0_for_n2 != Some(true) {
                failures.push(format!("λ={lambda} k={k}: p1/p2 not stage 0"));
            }
            let n3 = cournot_verify(&CournotParams::new(lambda.clone(), k, 3).unwrap(), &cfg).unwrap();
            let c = n3.p3.expect("three competitors");
            if !c.stage1_sum_is_one {
                failures.push(format!("λ={lambda} k={k}: stage-1 sum {}", c.stage1_sum));
            }
            if !c.closed_form_matches || !c.closed_form_below_one {
                failures.push(format!(
                    "λ={lambda} k={k}: stage-k sum {} vs {}",
                    c.stage_k_sum, c.closed_form
                ));
            }
            if !c.certified_within_k {
                failures.push(format!("λ={lambda} k={k}: not certified by stage k"));
            }
            let p1 = &cournot_polys(&CournotParams::new(lambda.clone(), k, 3).unwrap()).unwrap()[0];
            if run_algorithm(p1, &cfg).deciding_stage != Some(0) {
                failures.push(format!("λ={lambda} k={k}: p1 not stage 0"));
            }
        }
    }
    let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
    outcome(
        failures.is_empty(),
        format!(
            "Cournot identities over 90 (λ, k): {} failures{}, {:.2} s",
            failures.len(),
            if shown.is_empty() {
                String::new()
            } else {
                format!(" [{} ...]", shown.join("; "))
            },
            start.elapsed().as_secs_f64()
        ),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let (mut cells, mut disagreements, mut oracle_failures, mut certified) = (0usize, 0usize, 0usize, 0usize);
    for r in [q(1, 1), q(2, 1)] {
        for stages in [0usize, 1] {
            let spec = GridSpec::new(Mapping::RickerBa { r: r.clone() }, Backend::Exact, stages);
            let grid = scan_region(&spec);
            let cfg = AlgoConfig::with_max_stages(stages);
            let bs = spec.x_axis.nodes();
            let as_ = spec.y_axis.nodes();
            for (j, a) in as_.iter().enumerate() {
                for (i, b) in bs.iter().enumerate() {
                    cells += 1;
                    let stage = grid.stage_at(i, j);
                    let Some(ci) = ricker_condition_i(&r, a, b) else {
                        disagreements += (stage != INVALID) as usize;
                        continue;
                    };
                    let cii = ricker_condition_ii(&r, a, b).unwrap();
                    let direct = if ci {
                        0
                    } else if stages >= 1 && cii {
                        1
                    } else {
                        NOT_CERTIFIED
                    };
                    if stage != direct {
                        disagreements += 1;
                    }
                    // r = 2 is outside (0, 2), so the linear factor rules
                    // stability out whatever the quadratic does.
                    let verdict =
                        ricker_verdict(&RickerParams::new(r.clone(), a.clone(), b.clone()).unwrap(), &cfg).unwrap();
                    let expected = if r >= q(2, 1) {
                        RickerVerdict::UnstableNecessary
                    } else if direct >= 0 {
                        RickerVerdict::StableSufficient(direct as usize)
                    } else {
                        RickerVerdict::Unknown
                    };
                    if verdict != expected {
                        disagreements += 1;
                    }
                    if stage >= 0 {
                        certified += 1;
                        let quad = spec.mapping.polynomial(b, a).unwrap();
                        let inside = find_roots(&quad).map(|s| s.max_modulus < 1.0).unwrap_or(false);
                        if !inside || jury_verdict(&quad) != JuryVerdict::Stable {
                            oracle_failures += 1;
                        }
                    }
                }
            }
        }
    }
    outcome(
        disagreements == 0 && oracle_failures == 0,
        format!(
            "Ricker (b, a) scans r in {{1, 2}}, stages in {{0, 1}}: {cells} cells, {certified} certified, \
             {disagreements} disagreements, {oracle_failures} oracle failures, {:.2} s",
            start.elapsed().as_secs_f64()
        ),
    )
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(7);
    let mut failures = 0usize;
    let mut q1_checked = 0usize;
    for _ in 0..1_000 {
        let degree = rng.gen_range(1..=8);
        let p = common::random_poly(&mut rng, degree, 2, 8);
        let n = p.degree();
        let mut t = StageTrace::initial(&p);
        for i in 0..=16 {
            let r = mod_reduce(n + i, &p);
            if (0..n).any(|m| t.beta[m] != -r.coeff(m)) {
                failures += 1;
            }
            if i == 1 && !p.coeff(n - 1).is_zero() {
                q1_checked += 1;
                let q1 = GeneralPolynomial::new(vec![-p.coeff(n - 1), q(1, 1)]).mul(&p.to_general());
                let mut expected = t.beta.clone();
                expected.push(q(0, 1));
                expected.push(q(1, 1));
                if q1.coeffs() != expected.as_slice() {
                    failures += 1;
                }
            }
            t = iterate_stage(&t, &p);
        }
    }
    outcome(
        failures == 0,
        format!(
            "remainder identity over 1000 polynomials x 17 stages, {q1_checked} first-stage factorizations: \
             {failures} failures, {:.2} s",
            start.elapsed().as_secs_f64()
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let cfg = AlgoConfig::with_max_stages(64);
    let mut histogram: BTreeMap<String, usize> = BTreeMap::new();
    let total = 2_000;
    for _ in 0..total {
        let degree = rng.gen_range(2..=8);
        let p = random_poly_from_roots(&mut rng, degree, 0.95);
        let cert = run_algorithm(&p, &cfg);
        let key = match (cert.verdict, cert.deciding_stage) {
            (Verdict::Certified, Some(s)) => format!("{s:02}"),
            (v, _) => v.name().to_string(),
        };
        *histogram.entry(key).or_insert(0) += 1;
    }
    let parts: Vec<String> = histogram.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    outcome(
        true,
        format!(
            "termination-stage histogram over {total} stable polynomials (reported only): {}",
            parts.join(" ")
        ),
    )
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let filter: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = Vec::new();
    for (id, run) in criteria {
        if filter.is_some_and(|f| f != id) {
            continue;
        }
        let o = run();
        println!("criterion {id}: {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
