//! One line per criterion; exits nonzero if any fails.

use std::time::Instant;

use anyhow::{ensure, Result};
use boxcar::cli::main_with;
use boxcar::par;
use boxcar::table::Table;
use boxcar_core::diophantine::{approximation_quality, best_approximation_scan, DEFAULT_SCAN_CAP};
use boxcar_core::equidist::lemma1_bounds;
use boxcar_core::risk::{
    dip, eps_decades, fit_rate, greedy_knapsack, homogeneous_slope, hyper_exponent, rate_constants,
    rl_hyperrectangle, rp_ellipsoid, rp_ellipsoid_bruteforce, rp_hyperrectangle, zone_boundaries, Fit,
};
use boxcar_core::sim::{
    estimator_risk, hyper_bounds, perturbation_study, worst_case_theta, EstimatorSpec, Experiment,
};
use boxcar_core::{
    BlockGrid, BoxcarKernel, ClassKind, DirectData, Homogeneous, IrrationalNumber, SmoothnessClass, Spectrum,
};
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

fn test_numbers() -> Vec<(&'static str, IrrationalNumber)> {
    vec![
        ("golden", IrrationalNumber::golden()),
        ("sqrt2-1", IrrationalNumber::sqrt2_minus_one()),
        ("cf 0;1,2,3,...", "cf:0;1,2,3,...".parse().unwrap()),
    ]
}

fn to_u64(q: &impl std::fmt::Display) -> Option<u64> {
    q.to_string().parse().ok()
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["boxcar"];
    argv.extend_from_slice(args);
    let code = main_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn golden_sweep(class: &SmoothnessClass) -> Result<Fit> {
    let recs = par::sweep(&BoxcarKernel::golden(), class, &eps_decades(6, 24), 1e-6)?;
    Ok(fit_rate(&recs)?)
}

fn c1_best_approximations() -> Result<String> {
    let t = Instant::now();
    let mut notes = Vec::new();
    for (name, x) in test_numbers() {
        let scan = best_approximation_scan(&x, 10_000, DEFAULT_SCAN_CAP)?;
        let conv: Vec<u64> = x
            .convergents_past(&10_000.into())?
            .iter()
            .filter_map(|c| to_u64(&c.q))
            .filter(|&q| q <= 10_000)
            .collect();
        let mut want = conv.clone();
        want.dedup();
        ensure!(scan == want, "{name}: scan {scan:?} vs convergents {want:?}");
        notes.push(format!("{name} {}", want.len()));
    }
    let secs = t.elapsed().as_secs_f64();
    ensure!(secs < 30.0, "took {secs:.1}s");
    Ok(format!("{} in {secs:.2}s", notes.join(", ")))
}

fn c2_sandwiches() -> Result<String> {
    let mut checked = 0;
    for (name, x) in test_numbers() {
        let conv = x.convergents_to(21)?;
        for n in 1..=20 {
            let q: f64 = conv[n].q.to_string().parse()?;
            let q1: f64 = conv[n + 1].q.to_string().parse()?;
            let d = x.distance_big(&conv[n].q.to_biguint().unwrap())?;
            ensure!(1.0 / (2.0 * q1) < d.lo && d.hi < 1.0 / q1, "{name} n={n}: ‖q_n a‖ outside (1/2q_(n+1), 1/q_(n+1))");
            ensure!(approximation_quality(&x, n)?.holds(), "{name} n={n}: D(a, q_n) bracket");
            // below q_n: every k when q_n is small, a spread sample otherwise
            let ks: Vec<u64> = if q <= 1e4 {
                (1..q as u64).collect()
            } else {
                let top = q.min(1e18) as u64;
                (1..=2000u64).map(|i| 1 + (top - 2) / 2000 * i).filter(|&k| (k as f64) < q).collect()
            };
            for k in ks {
                ensure!(x.distance(k)?.lo > 1.0 / (2.0 * q), "{name} n={n} k={k}: ‖ka‖ <= 1/2q_n");
                checked += 1;
            }
        }
    }
    Ok(format!("20 convergents x 3 numbers, {checked} small multiples"))
}

fn c3_envelope() -> Result<String> {
    let g = BoxcarKernel::golden();
    let bad: usize = (1..=100_000u64)
        .into_par_iter()
        .map(|k| usize::from(g.checked_envelope(k).is_err()))
        .sum();
    ensure!(bad == 0, "{bad} violations");
    Ok("k = 1..100000, 0 violations".into())
}

fn c4_lemma1() -> Result<String> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(4);
    let numbers = test_numbers();
    let mut done = 0;
    let mut tries = 0;
    while done < 100 {
        tries += 1;
        ensure!(tries < 10_000, "could not draw 100 admissible cases");
        let (_, x) = &numbers[rng.random_range(0..numbers.len())];
        let n = rng.random_range(2..14usize);
        let conv = x.convergents_to(n + 1)?;
        let (q, q1): (u64, u64) = (conv[n].q.to_string().parse()?, conv[n + 1].q.to_string().parse()?);
        if q1 <= q + 1 || q1 > 2_000_000 {
            continue;
        }
        let big_n = rng.random_range(0..q1 - q);
        let (amp, cap) = (rng.random_range(0.5..3.0), rng.random_range(5.0..100.0));
        let h: Box<dyn Fn(f64) -> f64> = match rng.random_range(0..3) {
            0 => Box::new(move |t: f64| amp / t),
            1 => Box::new(move |t: f64| amp / (t * t)),
            _ => Box::new(move |t: f64| f64::min(cap, amp / (t * t))),
        };
        let tr = lemma1_bounds(x, big_n, n, &*h, None)?;
        ensure!(tr.lower_holds() && tr.upper_holds(), "{tr:?}");
        done += 1;
    }
    let g = IrrationalNumber::golden();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for n in 3..=20 {
        let tr = lemma1_bounds(&g, 0, n, &|t: f64| 1.0 / t, None)?;
        let q = tr.q as f64;
        let ratio = tr.middle / (q * q.ln());
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    ensure!(lo >= 0.2 && hi <= 5.0, "middle/(q log q) in [{lo:.3}, {hi:.3}]");
    Ok(format!("100 random cases; golden middle/(q log q) in [{lo:.3}, {hi:.3}]"))
}

fn c5_ellipsoid() -> Result<String> {
    let t = Instant::now();
    let mut rng = rand::rngs::StdRng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(1..=12usize);
        let caps: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.random_range(-4.0..1.0))).collect();
        let mut costs: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.random_range(-1.0..2.0))).collect();
        costs.sort_by(f64::total_cmp);
        let budget = rng.random_range(0.0..1.5) * caps.iter().zip(&costs).map(|(c, d)| c * d).sum::<f64>();
        let g = greedy_knapsack(&caps, &costs, budget)?.value;
        let b = rp_ellipsoid_bruteforce(&caps, &costs, budget)?;
        worst = worst.max((g - b).abs());
        ensure!((g - b).abs() <= 1e-9, "greedy {g} vs brute {b}");
    }
    // the solver on the real spectrum, where the active set fits the oracle
    let g = BoxcarKernel::golden();
    for (sigma, eps) in [(1.0, 1e-2), (2.0, 3e-2), (0.5, 1e-2)] {
        let class = SmoothnessClass::ellipsoid(sigma, 1.0)?;
        let r = rp_ellipsoid(&g, &class, eps)?;
        let dim = (r.k_trunc as usize + 1).min(12);
        let caps: Vec<f64> = (1..=dim as u64).map(|k| g.noise_level(k, eps).unwrap().powi(2)).collect();
        let costs: Vec<f64> = (1..=dim).map(|k| (k as f64).powf(2.0 * sigma)).collect();
        let b = rp_ellipsoid_bruteforce(&caps, &costs, 1.0)?;
        ensure!(r.k_trunc < 12 && (r.value - b).abs() <= 1e-9, "sigma {sigma}: {} vs {b}", r.value);
    }
    let secs = t.elapsed().as_secs_f64();
    ensure!(secs < 10.0, "took {secs:.1}s");
    Ok(format!("200 random + 3 spectral instances, max gap {worst:.1e}, {secs:.2}s"))
}

fn c6_bracket() -> Result<String> {
    let mut cases = Vec::new();
    for (_, x) in test_numbers() {
        for sigma in [0.5, 1.0, 1.5, 3.0] {
            for j in 0..6 {
                cases.push((x.clone(), sigma, 10f64.powi(-3 - j)));
            }
        }
    }
    let (lo, hi) = cases
        .par_iter()
        .map(|(x, sigma, eps)| -> Result<(f64, f64)> {
            let k = BoxcarKernel::new(x.clone(), 1)?;
            let class = SmoothnessClass::hyper(*sigma, 1.0)?;
            let rp = rp_hyperrectangle(&k, &class, *eps, 1e-6)?;
            let rl = rl_hyperrectangle(&k, &class, *eps, 1e-6)?;
            ensure!(0.5 * rp.lo <= rl.hi && rl.lo <= rp.hi, "a={x} sigma={sigma} eps={eps}");
            Ok((rl.value / rp.value, rl.value / rp.value))
        })
        .try_reduce(|| (f64::INFINITY, 0.0), |a, b| Ok((a.0.min(b.0), a.1.max(b.1))))?;
    Ok(format!("{} configurations, R_L/R_P in [{lo:.3}, {hi:.3}]", cases.len()))
}

fn c7_rates() -> Result<String> {
    let t = Instant::now();
    let mut notes = Vec::new();
    for (sigma, want) in [(1.0, 0.8), (3.0, 14.0 / 11.0)] {
        let f = golden_sweep(&SmoothnessClass::hyper(sigma, 1.0)?)?;
        ensure!((f.slope - want).abs() <= 0.1, "hyper sigma {sigma}: slope {} vs {want}", f.slope);
        notes.push(format!("hyper {sigma}: {:.3}", f.slope));
    }
    // elbow: R_P / (ε log(1/ε)) stays in a band
    let class = SmoothnessClass::hyper(1.5, 1.0)?;
    let recs = par::sweep(&BoxcarKernel::golden(), &class, &eps_decades(6, 24), 1e-6)?;
    let ratios: Vec<f64> = recs.iter().map(|r| r.value / (r.eps * (1.0 / r.eps).ln())).collect();
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |a, &r| (a.0.min(r), a.1.max(r)));
    ensure!(lo > 0.05 && hi < 20.0 && hi / lo < 10.0, "elbow ratio in [{lo}, {hi}]");
    notes.push(format!("sigma 1.5 ratio in [{lo:.3}, {hi:.3}]"));
    for (sigma, want) in [(1.0, 2.0 / 3.0), (3.0, 1.2)] {
        let f = golden_sweep(&SmoothnessClass::ellipsoid(sigma, 1.0)?)?;
        ensure!((f.slope - want).abs() <= 0.1, "ellipsoid sigma {sigma}: slope {} vs {want}", f.slope);
        notes.push(format!("ellipsoid {sigma}: {:.3}", f.slope));
    }
    let mut prev = 0.0;
    let mut elbow = Vec::new();
    for sigma in [0.5, 1.0, 1.5, 2.0, 3.0] {
        let f = golden_sweep(&SmoothnessClass::hyper(sigma, 1.0)?)?;
        let want = hyper_exponent(sigma);
        ensure!((f.slope - want).abs() <= 0.1, "elbow sigma {sigma}: slope {} vs {want}", f.slope);
        ensure!(f.slope > prev, "slopes not increasing at sigma {sigma}");
        prev = f.slope;
        elbow.push(format!("{:.3}", f.slope));
    }
    notes.push(format!("elbow [{}]", elbow.join(" ")));
    let secs = t.elapsed().as_secs_f64();
    ensure!(secs < 300.0, "took {secs:.0}s");
    Ok(format!("{}; {secs:.1}s", notes.join("; ")))
}

fn c8_homogeneous() -> Result<String> {
    let eps = eps_decades(6, 24);
    let sigma = 1.0;
    let class = SmoothnessClass::hyper(sigma, 1.0)?;
    let direct = fit_rate(&par::sweep(&DirectData, &class, &eps, 1e-8)?)?.slope;
    let mut notes = Vec::new();
    for alpha in [1.0, 1.5, 2.0] {
        let f = fit_rate(&par::sweep(&Homogeneous::new(1.0, alpha)?, &class, &eps, 1e-8)?)?;
        let want = homogeneous_slope(sigma, alpha);
        ensure!((f.slope - want).abs() <= 0.02, "alpha {alpha}: {} vs {want}", f.slope);
        // σ(1/s − 1/s_D) with s = slope/2 recovers α
        let dip_hat = sigma * (2.0 / f.slope - 2.0 / direct);
        ensure!((dip_hat - alpha).abs() <= 0.02, "alpha {alpha}: recovered {dip_hat}");
        notes.push(format!("{alpha}: {:.4} (alpha {:.3})", f.slope, dip_hat));
    }
    Ok(notes.join(", "))
}

fn c9_dip() -> Result<String> {
    for s in [0.1, 0.5, 1.0, 1.5, 2.0, 3.5, 10.0] {
        ensure!(dip(ClassKind::Ellipsoid, s)? == 1.5);
    }
    ensure!(dip(ClassKind::Hyperrectangle, 3.5)? == 1.25);
    let jump = (dip(ClassKind::Hyperrectangle, 1.5 + 1e-9)? - dip(ClassKind::Hyperrectangle, 1.5 - 1e-9)?).abs();
    ensure!(jump < 1e-8, "jump {jump}");
    let rc = rate_constants(1.5)?;
    ensure!((rc.r - rc.r_bar).abs() < 1e-15);
    Ok(format!("ellipsoid 1.5, hyper(3.5) 1.25, jump at 3/2 {jump:.1e}"))
}

fn c10_simulation() -> Result<String> {
    let g = BoxcarKernel::golden();
    let mut zmax = 0.0f64;
    let mut n = 0;
    for kind in [ClassKind::Hyperrectangle, ClassKind::Ellipsoid] {
        for sigma in [0.5, 1.0, 3.0, 1.5, 2.0] {
            for eps in [1e-2, 1e-4] {
                let class = SmoothnessClass::new(kind, sigma, 1.0)?;
                let theta = worst_case_theta(&g, &class, eps)?;
                let tau = match kind {
                    ClassKind::Hyperrectangle => hyper_bounds(&class, theta.len() as u64),
                    _ => theta.clone(),
                };
                let spec = EstimatorSpec::threshold(&g, &tau, eps)?;
                let exact = estimator_risk(&spec, &g, &theta, eps)?;
                let mc = par::monte_carlo(&Experiment::new(&g, &spec, &theta, eps)?, 400, 1000 + n);
                let z = (mc.mean - exact).abs() / mc.stderr;
                ensure!(z <= 4.0, "{kind} sigma {sigma} eps {eps}: z = {z:.2}");
                if kind == ClassKind::Hyperrectangle {
                    let rp = rp_hyperrectangle(&g, &class, eps, 1e-6)?.value;
                    ensure!(exact >= 0.1 * rp && exact <= 10.0 * rp, "exact {exact} vs R_P {rp}");
                }
                zmax = zmax.max(z);
                n += 1;
            }
        }
    }
    let args = ["simulate", "--eps", "1e-2,1e-3", "--sigma", "2", "--seed", "17"];
    let (c1, a, _) = run_cli(&args);
    let (c2, b, _) = run_cli(&args);
    ensure!(c1 == 0 && c2 == 0 && a == b, "reruns differ");
    let (_, other, _) = run_cli(&["simulate", "--eps", "1e-2,1e-3", "--sigma", "2", "--seed", "18"]);
    ensure!(other != a, "seed ignored");
    Ok(format!("{n} configurations, max |z| = {zmax:.2}; seeded CSV reruns identical"))
}

fn c11_perturbation() -> Result<String> {
    let g = BoxcarKernel::golden();
    let q6: u64 = g.a().convergents_to(6)?[6].q.to_string().parse()?;
    let mut notes = Vec::new();
    for (sigma, eps) in [(1.0, 1e-3), (2.0, 1e-4), (0.5, 1e-2)] {
        let class = SmoothnessClass::hyper(sigma, 1.0)?;
        let mut prev: Option<f64> = None;
        for m in [8usize, 10, 12] {
            let p = perturbation_study(&g, m, 6, &class, eps)?;
            ensure!(p.set.iter().all(|&k| k <= q6) && !p.set.is_empty());
            ensure!(p.holds(), "m {m}: {p:?}");
            if let Some(d) = prev {
                // two more steps of m must shrink δ̄ by at least 2^-2
                ensure!(p.delta_bar <= d / 4.0, "m {m}: {} after {d}", p.delta_bar);
            }
            prev = Some(p.delta_bar);
            if sigma == 1.0 {
                notes.push(format!("m={m} delta {:.2e} diff/bound {:.3}", p.delta_bar, p.risk_diff / p.bound));
            }
        }
    }
    Ok(notes.join(", "))
}

fn c12_figures() -> Result<String> {
    let (code, text, err) = run_cli(&["figures", "fig1"]);
    ensure!(code == 0, "fig1 failed: {err}");
    let t = Table::parse(&text)?;
    ensure!(Table::parse(&t.render())? == t, "fig1 round trip");
    let (inv, floor, hom1) = (t.f64s("inv_sq")?, t.f64s("floor")?, t.f64s("hom_1")?);
    ensure!(inv.len() == 501);
    let mut ratios = Vec::new();
    for k in 1..=500 {
        ensure!(inv[k] >= floor[k] * (1.0 - 1e-12) && floor[k] >= hom1[k], "k={k}");
        ratios.push(inv[k] / floor[k]);
    }
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(0.0, f64::max);
    ensure!(lo < 1.1 && hi > 100.0, "r_k^-2 / (πka)^2 in [{lo}, {hi}]");

    let (code, text, err) = run_cli(&["figures", "fig2"]);
    ensure!(code == 0, "fig2 failed: {err}");
    let t = Table::parse(&text)?;
    ensure!(Table::parse(&t.render())? == t, "fig2 round trip");
    let k1: u64 = t.get_meta("k1").unwrap_or("0").parse()?;
    let k0: u64 = t.get_meta("k0").unwrap_or("0").parse()?;
    let class = SmoothnessClass::hyper(1.5, 1.0)?;
    let grid = BlockGrid::build(&IrrationalNumber::golden(), 4000)?;
    let z = zone_boundaries(&class, 1e-8, &grid)?;
    ensure!((z.k0, z.k1) == (k0, k1), "borders {k0},{k1} vs {},{}", z.k0, z.k1);
    let (m, c) = (t.f64s("m_k")?, t.f64s("c2k_pow")?);
    let zones = t.strings("zone")?;
    let mut bias = 0;
    for (i, k) in t.f64s("k")?.iter().enumerate() {
        if *k as u64 >= k1 {
            ensure!(m[i] == c[i] && zones[i] == "bias", "k={k}");
            bias += 1;
        }
    }
    Ok(format!(
        "fig1 r_k^-2/(πka)^2 in [{lo:.2}, {hi:.0}]; fig2 k0={k0} k1={k1}, {bias} bias rows on C²k^-4"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Result<String>); 12] = [
        ("best approximations", c1_best_approximations),
        ("convergent sandwiches", c2_sandwiches),
        ("eigenvalue envelope", c3_envelope),
        ("block equidistribution", c4_lemma1),
        ("ellipsoid solver", c5_ellipsoid),
        ("linear bracket", c6_bracket),
        ("rates", c7_rates),
        ("homogeneous control", c8_homogeneous),
        ("ill-posedness degree", c9_dip),
        ("simulation", c10_simulation),
        ("perturbation", c11_perturbation),
        ("figures", c12_figures),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = f();
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(msg) => println!("criterion {:>2} PASS {name} ({secs:.2}s): {msg}", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.2}s): {e:#}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
