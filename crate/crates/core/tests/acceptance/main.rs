//! Acceptance criteria, one line of output each.
//!
//! All comparisons are exact; the only tolerance is the wall-clock bound
//! listed next to each criterion. Run with
//! `cargo test -p hardybox --test acceptance`.

mod oracles;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hardybox::functional::{is_standard_form, HardyCondition};
use hardybox::prelude::*;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use oracles::*;

const SEED: u64 = 0x4841_5244_5942_4f58;

type Check = fn() -> Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    bound: Duration,
    check: Check,
}

fn parties(n: usize) -> Parties {
    Parties::new(n).unwrap()
}

fn v(s: &str) -> BinaryVector {
    s.parse().unwrap()
}

fn pow3(n: usize) -> usize {
    3usize.pow(n as u32)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn span_dimension_criterion() -> Result<String, String> {
    let mut ranks = Vec::new();
    for n in 1..=4 {
        let p = parties(n);
        let vertices = enumerate_vertices(p);
        let boxes: Vec<BoxTable> = vertices.iter().map(deterministic_box).collect();
        let rank = span_dimension(&boxes).map_err(|e| e.to_string())?;
        let rows: Vec<Vec<i64>> = vertices.iter().map(|d| vertex_row(p, d)).collect();
        let oracle = rank_mod_p(&rows);
        ensure(rank == pow3(n), || format!("n={n}: rank {rank}, expected {}", pow3(n)))?;
        ensure(oracle == rank, || format!("n={n}: modular oracle rank {oracle}"))?;
        ranks.push(rank);
    }
    Ok(format!("ranks {ranks:?}"))
}

fn hardy_tightness_criterion() -> Result<String, String> {
    let mut ranks = Vec::new();
    for n in 1..=4 {
        let p = parties(n);
        let report = is_tight(&hardy_functional(p)).map_err(|e| e.to_string())?;
        let rows: Vec<Vec<i64>> = report.saturating.iter().map(|d| vertex_row(p, d)).collect();
        ensure(report.tight && report.rank == pow3(n) - 1, || {
            format!("n={n}: rank {} (tight={})", report.rank, report.tight)
        })?;
        ensure(rank_mod_p(&rows) == report.rank, || format!("n={n}: modular oracle disagrees"))?;
        ranks.push(report.rank);
    }
    Ok(format!("ranks {ranks:?}"))
}

fn chsh_form_criterion() -> Result<String, String> {
    let p = parties(2);
    let standard = standardize(&hardy_functional(p)).map_err(|e| e.to_string())?;
    let coeffs = correlation_coeffs(&standard);
    for (c, s, x) in coeffs.entries() {
        let expected = match (c.bits(), s.bits()) {
            (0, 0) => ratio(1, 4),
            (3, 0) => ratio(-1, 8),
            (3, _) => ratio(1, 8),
            _ => Rational::zero(),
        };
        ensure(x == &expected, || format!("C^{c}_{s} = {x}, expected {expected}"))?;
    }
    // The CHSH expression, evaluated from direct correlations, agrees with
    // the standardized functional on random non-signaling boxes.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let pr = pr_box();
    for _ in 0..20 {
        let local = random_local_box(&mut rng, p, 4);
        let w = ratio(rng.gen_range(0..=8), 8);
        let q = BoxTable::combination(p, [(&w, &pr), (&(Rational::one() - &w), &local)]).unwrap();
        let a = |s: &str| correlation(&q, v("11"), v(s));
        let chsh = ratio(1, 4) + ratio(1, 8) * (a("01") + a("10") + a("11") - a("00"));
        ensure(pairing(&standard, &q) == chsh, || "CHSH expression disagrees".into())?;
    }
    Ok("nonzero blocks c=00, c=11 only".into())
}

/// Closed form of the Hardy box from its event description.
fn hardy_closed_form(p: Parties) -> BoxTable {
    let n = p.get();
    let ones = BinaryVector::ones(p);
    BoxTable::from_fn(p, |t, b| {
        let mut count = 0i64;
        for j in 1..=n {
            let tj = ones.add(t.wedge(BinaryVector::unit(p, j).unwrap()).unwrap()).unwrap();
            count += i64::from(b == tj);
        }
        count += i64::from(b == t);
        count -= i64::from(b == ones);
        ratio(count, n as i64)
    })
}

fn duality_criterion() -> Result<String, String> {
    for n in 1..=4 {
        let p = parties(n);
        let standard = standardize(&hardy_functional(p)).map_err(|e| e.to_string())?;
        let dual = box_from_functional(&standard).map_err(|e| e.to_string())?;
        ensure(!dual.auto_standardized, || format!("n={n}: input not recognized as standard"))?;
        ensure(dual.table == hardy_closed_form(p), || format!("n={n}: dual box differs"))?;
        ensure(hardy_box(p) == dual.table, || format!("n={n}: library closed form differs"))?;
    }
    Ok("n = 1..4 entrywise".into())
}

fn round_trip_criterion() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let fwd = |b: &BellFunctional| -> Result<BellFunctional, String> {
        let dual = box_from_functional(b).map_err(|e| e.to_string())?;
        functional_from_box(&dual.table).map_err(|e| e.to_string())
    };
    let back = |q: &BoxTable| -> Result<BoxTable, String> {
        let f = functional_from_box(q).map_err(|e| e.to_string())?;
        Ok(box_from_functional(&f).map_err(|e| e.to_string())?.table)
    };
    for n in 1..=3 {
        let s = standardize(&hardy_functional(parties(n))).map_err(|e| e.to_string())?;
        ensure(fwd(&s)? == s, || format!("Hardy functional n={n}"))?;
        let h = hardy_box(parties(n));
        ensure(back(&h)? == h, || format!("Hardy box n={n}"))?;
    }
    for i in 0..100 {
        let p = parties(1 + i % 3);
        let s = standardize(&random_inequality(&mut rng, p)).map_err(|e| e.to_string())?;
        ensure(fwd(&s)? == s, || format!("random separator #{i}"))?;
    }
    for i in 0..100 {
        let p = parties(1 + i % 3);
        let q = random_local_box(&mut rng, p, 1 + i % 6);
        ensure(back(&q)? == q, || format!("random mixture #{i}"))?;
    }
    Ok("100 functionals, 100 boxes".into())
}

fn extremality_criterion() -> Result<String, String> {
    let mut out = Vec::new();
    for n in 2..=4 {
        let r = is_extremal(&hardy_box(parties(n))).map_err(|e| e.to_string())?;
        ensure(r.extremal && r.zero_rank == pow3(n) - 1 && r.defect == 0, || {
            format!("n={n}: {r:?}")
        })?;
        out.push(r.zero_rank);
    }
    Ok(format!("zero ranks {out:?}"))
}

fn marginals_criterion() -> Result<String, String> {
    for n in 2..=4 {
        let p = parties(n);
        let h = hardy_box(p);
        for k in 1..=n {
            for setting in 0..2u8 {
                let zero = marginal(&h, k, setting, 0, true).map_err(|e| e.to_string())?;
                let one = marginal(&h, k, setting, 1, true).map_err(|e| e.to_string())?;
                // Direct sum at setting e_k·setting.
                let s = if setting == 1 { BinaryVector::unit(p, k).unwrap() } else { BinaryVector::zeros(p) };
                let direct: Rational = BinaryVector::all(p)
                    .filter(|a| a.component(k).unwrap() == 0)
                    .map(|a| h.get(s, a).unwrap().clone())
                    .sum();
                ensure(zero == ratio(1, n as i64) && direct == zero, || {
                    format!("n={n} k={k} setting={setting}: outcome 0 marginal {zero}")
                })?;
                ensure(one == ratio(n as i64 - 1, n as i64), || {
                    format!("n={n} k={k} setting={setting}: outcome 1 marginal {one}")
                })?;
            }
        }
    }
    Ok("1/n and (n-1)/n for n = 2..4".into())
}

fn nonlocality_criterion() -> Result<String, String> {
    for n in 2..=3 {
        let p = parties(n);
        let h = hardy_box(p);
        let cert = is_local(&h).map_err(|e| e.to_string())?;
        ensure(cert.verdict() == Locality::Nonlocal && cert.verify(&h), || format!("n={n}: {cert:?}"))?;
        if let Certificate::Nonlocal { separator, value } = &cert {
            for d in enumerate_vertices(p) {
                let x = pairing(separator, &deterministic_box(&d));
                ensure(!x.is_negative(), || format!("n={n}: separator negative on {d}"))?;
            }
            ensure(pairing(separator, &h) == *value && value.is_negative(), || {
                format!("n={n}: separator value {value}")
            })?;
        }
    }
    let value = evaluate(&hardy_functional(parties(2)), &hardy_box(parties(2))).map_err(|e| e.to_string())?;
    ensure(value == ratio(-1, 2), || format!("H2 on Hardy box = {value}"))?;
    ensure(pairing(&hardy_functional(parties(2)), &hardy_box(parties(2))) == value, || {
        "oracle pairing disagrees".into()
    })?;
    Ok("n = 2, 3 separated; H2 value -1/2".into())
}

fn pr_relabel_criterion() -> Result<String, String> {
    let r = Relabeling::outcome_flips(v("00"), v("11")).map_err(|e| e.to_string())?;
    let image = r.apply_to_box(&hardy_box(parties(2))).map_err(|e| e.to_string())?;
    let reference = BoxTable::from_fn(parties(2), |t, b| {
        let parity = b.component(1).unwrap() ^ b.component(2).unwrap();
        let product = t.component(1).unwrap() & t.component(2).unwrap();
        if parity == product {
            ratio(1, 2)
        } else {
            Rational::zero()
        }
    });
    ensure(image == reference, || format!("image {image:?}"))?;
    ensure(pr_box() == reference, || "library PR box differs".into())?;
    Ok("beta = 11".into())
}

/// Non-signaling boxes that satisfy the `n + 1` zero conditions of Hardy's
/// test; the last entries have `P(1|0) > 0`.
fn hardy_zero_pool(n: usize) -> (Vec<BoxTable>, Vec<BoxTable>) {
    let p = parties(n);
    let satisfies_zeros = |q: &BoxTable| {
        hardy_test(q)
            .failed
            .iter()
            .all(|c| *c == HardyCondition::AllOnesAtZeroSetting)
    };
    let local: Vec<BoxTable> = enumerate_vertices(p)
        .iter()
        .map(deterministic_box)
        .filter(satisfies_zeros)
        .collect();
    let nonlocal = match n {
        2 => vec![hardy_box(p)],
        3 => {
            let h2 = hardy_box(parties(2));
            let d = single_deterministic(1, 0);
            [[0, 1, 2], [0, 2, 1], [2, 0, 1]]
                .iter()
                .map(|order| product(&h2, &d, order))
                .collect()
        }
        _ => unreachable!(),
    };
    (local, nonlocal)
}

fn hardy_implication_criterion() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 10);
    let mut tested = 0;
    for n in 2..=3 {
        let p = parties(n);
        let (local, nonlocal) = hardy_zero_pool(n);
        for q in &local {
            ensure(!hardy_test(q).passed(), || "a deterministic box passes Hardy's test".into())?;
        }
        for q in &nonlocal {
            ensure(is_nonsignaling(q).is_nonsignaling() && hardy_test(q).passed(), || {
                format!("n={n}: pool box fails the test")
            })?;
        }
        let functional = hardy_functional(p);
        for _ in 0..50 {
            let mut terms: Vec<(Rational, &BoxTable)> = Vec::new();
            terms.push((integer(rng.gen_range(1..=9)), &nonlocal[rng.gen_range(0..nonlocal.len())]));
            for _ in 0..rng.gen_range(0..4) {
                let pool = if rng.gen_bool(0.5) { &local } else { &nonlocal };
                terms.push((integer(rng.gen_range(0..=9)), &pool[rng.gen_range(0..pool.len())]));
            }
            let total: Rational = terms.iter().map(|(w, _)| w.clone()).sum();
            let weights: Vec<Rational> = terms.iter().map(|(w, _)| w / &total).collect();
            let q = BoxTable::combination(p, weights.iter().zip(terms.iter().map(|(_, b)| *b))).unwrap();
            ensure(is_nonsignaling(&q).is_nonsignaling() && q.validate().is_ok(), || {
                "mixture is not a non-signaling box".into()
            })?;
            ensure(hardy_test(&q).passed(), || "mixture fails the test".into())?;
            let value = evaluate(&functional, &q).map_err(|e| e.to_string())?;
            ensure(value.is_negative(), || format!("n={n}: value {value} on a passing box"))?;
            tested += 1;
        }
    }
    Ok(format!("{tested} passing boxes, all negative"))
}

fn standard_form_criterion() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 11);
    for i in 0..200 {
        let p = parties(1 + i % 3);
        let b = random_inequality(&mut rng, p);
        let s = standardize(&b).map_err(|e| e.to_string())?;
        let (total, independent) = standard_form_conditions(&s);
        ensure(total.is_one() && independent, || format!("input #{i}: sum {total}, independent {independent}"))?;
        ensure(is_standard_form(&s), || format!("input #{i}: library disagrees"))?;
        // Both vanish on the same vertices and agree up to the factor θ.
        let theta: Rational = b.entries().map(|(_, _, x)| x.clone()).sum();
        for d in enumerate_vertices(p) {
            let vb = deterministic_box(&d);
            ensure(pairing(&s, &vb) * &theta == pairing(&b, &vb), || format!("input #{i}: vertex {d}"))?;
        }
    }
    Ok("200 inputs, n <= 3".into())
}

fn criteria() -> Vec<Criterion> {
    let secs = Duration::from_secs;
    vec![
        Criterion { id: 1, name: "span dimension 3^n", bound: secs(10), check: span_dimension_criterion },
        Criterion { id: 2, name: "Hardy functional tight", bound: secs(60), check: hardy_tightness_criterion },
        Criterion { id: 3, name: "CHSH standard form", bound: secs(1), check: chsh_form_criterion },
        Criterion { id: 4, name: "dual of Hardy functional", bound: secs(10), check: duality_criterion },
        Criterion { id: 5, name: "duality round trips", bound: secs(120), check: round_trip_criterion },
        Criterion { id: 6, name: "Hardy box extremal", bound: secs(30), check: extremality_criterion },
        Criterion { id: 7, name: "Hardy box marginals", bound: secs(1), check: marginals_criterion },
        Criterion { id: 8, name: "Hardy box nonlocal", bound: secs(30), check: nonlocality_criterion },
        Criterion { id: 9, name: "PR box by relabeling", bound: secs(1), check: pr_relabel_criterion },
        Criterion { id: 10, name: "Hardy test implies violation", bound: secs(10), check: hardy_implication_criterion },
        Criterion { id: 11, name: "standard form conditions", bound: secs(30), check: standard_form_criterion },
    ]
}

fn main() -> ExitCode {
    std::panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for c in criteria() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.check))
            .unwrap_or_else(|e| {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panic: {msg}"))
            });
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= c.bound {
                Ok(detail)
            } else {
                Err(format!("{detail}; took longer than {:?}", c.bound))
            }
        });
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!(
            "{tag} [{:>2}] {:<30} {:>8.3}s  {detail}",
            c.id,
            c.name,
            elapsed.as_secs_f64()
        );
    }
    if failures == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}
