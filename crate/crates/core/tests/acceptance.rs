//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so every line is printed even when all
//! criteria pass; the process exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use malkin_cylinder::flow::{
    find_fixed_point, integrate, monodromy, poincare_map, regularization_consistency, PoincareResult,
};
use malkin_cylinder::malkin::reference::WorkedExample;
use malkin_cylinder::malkin::{
    compute_malkin, degree_table, extract_polynomial, find_roots, random_perturbation, MalkinMode,
    MonomialConvention, TableOptions,
};
use malkin_cylinder::model::{CylinderField, FieldMode, HTerm, SystemConfig, TransitionFunction};
use malkin_cylinder::ode::OdeOptions;

const TOL: f64 = 1e-12;

struct Outcome {
    ok: bool,
    summary: String,
    notes: Vec<String>,
}

fn draw(rng: &mut ChaCha8Rng) -> WorkedExample {
    let mut pair = || [rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)];
    WorkedExample {
        a101: pair(),
        a110: pair(),
        b000: pair(),
        c000: pair(),
    }
}

/// A draw whose slope coefficient is bounded away from zero.
fn draw_with_difference(rng: &mut ChaCha8Rng) -> WorkedExample {
    loop {
        let ex = draw(rng);
        if ex.difference().abs() > 0.1 {
            return ex;
        }
    }
}

fn system(ex: &WorkedExample, delta: f64) -> SystemConfig {
    SystemConfig::new(
        CylinderField::x_over_r(),
        ex.perturbation().unwrap(),
        TransitionFunction::new(delta).unwrap(),
        0.0,
    )
    .unwrap()
}

/// `S = 1`, `D = 1`: only `a⁺₁₀₁ = 1`.
fn unit_example() -> WorkedExample {
    WorkedExample {
        a101: [1.0, 0.0],
        ..Default::default()
    }
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let zs = [-2.0, -0.5, 0.0, 0.7, 3.0];
    let (mut err_pub, mut err_neg, mut spread) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..20 {
        let ex = draw(&mut rng);
        let cfg = system(&ex, 0.0);
        let vals: Vec<f64> = zs
            .iter()
            .map(|&z| compute_malkin(&cfg, z, MalkinMode::Smooth, TOL).unwrap().0)
            .collect();
        for &v in &vals {
            err_pub = err_pub.max((v - ex.smooth_value(true)).abs());
            err_neg = err_neg.max((v - ex.smooth_value(false)).abs());
        }
        let (lo, hi) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        spread = spread.max(hi - lo);
    }
    // Independent of the quadrature: the first-order return of the flow for b = 1.
    let b_only = WorkedExample {
        b000: [1.0, 1.0],
        ..Default::default()
    };
    let eps = 1e-4;
    let cfg = system(&b_only, 0.0).with_epsilon(eps).unwrap();
    let rate = (poincare_map(&cfg, 0.3, FieldMode::Nonsmooth).unwrap() - 0.3) / eps;
    Outcome {
        ok: err_pub < 1e-9 && spread < 1e-9,
        summary: format!("smooth closed form: max error {err_pub:.3e}, z-spread {spread:.3e} (limits 1e-9)"),
        notes: vec![
            format!("with the q-term entering as -4b: max error {err_neg:.3e}"),
            format!(
                "flow oracle, b = 1 only, eps = 1e-4: (P(z) - z)/eps = {rate:.6}; printed form gives {:.6}, -4b gives {:.6}",
                b_only.smooth_value(true),
                b_only.smooth_value(false)
            ),
        ],
    }
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut err_pub, mut err_neg) = (0.0f64, 0.0f64);
    for delta in [1.0, 2.0, 5.0] {
        for _ in 0..10 {
            let ex = draw(&mut rng);
            let poly = extract_polynomial(&system(&ex, delta), MalkinMode::NonsmoothRegularized, TOL).unwrap();
            let slope = PI / (8.0 * delta) * ex.difference();
            for (published, err) in [(true, &mut err_pub), (false, &mut err_neg)] {
                let want = [ex.constant(published), slope, 0.0];
                for (c, w) in poly.coeffs.iter().zip(want) {
                    *err = err.max((c - w).abs());
                }
            }
        }
    }
    Outcome {
        ok: err_pub < 1e-9,
        summary: format!("delta >= 1 coefficients: max error {err_pub:.3e} (limit 1e-9)"),
        notes: vec![format!("with -4b in S: max error {err_neg:.3e}")],
    }
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut err_pub, mut err_neg) = (0.0f64, 0.0f64);
    let mut counts_ok = true;
    for delta in [0.2, 0.5, 0.9] {
        for _ in 0..10 {
            let ex = draw_with_difference(&mut rng);
            let poly = extract_polynomial(&system(&ex, delta), MalkinMode::NonsmoothRegularized, TOL).unwrap();
            let roots = find_roots(&poly, None).unwrap();
            if roots.len() != 1 {
                counts_ok = false;
                continue;
            }
            err_pub = err_pub.max((roots[0].z0 - ex.z0(delta, true)).abs());
            err_neg = err_neg.max((roots[0].z0 - ex.z0(delta, false)).abs());
        }
    }
    Outcome {
        ok: counts_ok && err_pub < 1e-8,
        summary: format!("delta < 1 root: max |z0 - closed form| {err_pub:.3e} (limit 1e-8), one root each: {counts_ok}"),
        notes: vec![format!("with -4b in S: max error {err_neg:.3e}")],
    }
}

fn criterion_4() -> Outcome {
    let ex = unit_example();
    let d = ex.difference();
    let slope = extract_polynomial(&system(&ex, 1e-3), MalkinMode::NonsmoothRegularized, TOL).unwrap().coeffs[1];
    let slope_err = (slope - 2.0 / 3.0 * d).abs();
    let poly = extract_polynomial(&system(&ex, 0.0), MalkinMode::NonsmoothRegularized, TOL).unwrap();
    let roots = find_roots(&poly, None).unwrap();
    let want = -3.0 * PI * ex.published_sum() / (16.0 * d);
    let root_err = match roots.as_slice() {
        [r] => (r.z0 - want).abs(),
        _ => f64::INFINITY,
    };
    Outcome {
        ok: slope_err < 1e-5 && root_err < 1e-8,
        summary: format!(
            "delta -> 0: |I1(1e-3) - 2D/3| = {slope_err:.3e} (limit 1e-5), |z0 + 3piS/(16D)| = {root_err:.3e} (limit 1e-8)"
        ),
        notes: vec![],
    }
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut gap = 0.0f64;
    for _ in 0..10 {
        let ex = draw(&mut rng);
        let slope = |delta| {
            extract_polynomial(&system(&ex, delta), MalkinMode::NonsmoothRegularized, TOL).unwrap().coeffs[1]
        };
        gap = gap.max((slope(1.0 - 1e-12) - slope(1.0 + 1e-12)).abs());
    }
    Outcome {
        ok: gap < 1e-9,
        summary: format!("continuity at delta = 1: max |I1(1-) - I1(1+)| = {gap:.3e} (limit 1e-9)"),
        notes: vec![],
    }
}

fn criterion_6() -> Outcome {
    let e4pi = (4.0 * PI).exp();
    let mut worst = 0.0f64;
    for field in [CylinderField::x_over_r(), CylinderField::xy_over_r2()] {
        let ev = monodromy(&field).unwrap().eigenvalues;
        let (lo, hi) = (ev[0].min(ev[1]), ev[0].max(ev[1]));
        worst = worst.max((lo - 1.0).abs()).max((hi / e4pi - 1.0).abs());
    }
    Outcome {
        ok: worst < 1e-8,
        summary: format!("monodromy eigenvalues {{1, e^(4 pi)}}: max relative error {worst:.3e} (limit 1e-8)"),
        notes: vec![],
    }
}

const TABLES: [(&str, u32, &[&[&str]]); 6] = [
    ("x/r", 1, &[&["0", "1"], &["1", "1"]]),
    ("x/r", 2, &[&["0 (1)", "1", "2"], &["1", "1", "2"], &["2", "2", "2"]]),
    (
        "x/r",
        3,
        &[
            &["1 (2)", "1 (2)", "2", "3"],
            &["1 (2)", "1 (2)", "2", "3"],
            &["2", "2", "2", "3"],
            &["3", "3", "3", "3"],
        ],
    ),
    ("xy/r^2", 1, &[&["0", "1"], &["0 (1)", "1"]]),
    ("xy/r^2", 2, &[&["1", "1", "2"], &["1", "1", "2"], &["1 (2)", "1 (2)", "2"]]),
    (
        "xy/r^2",
        3,
        &[
            &["2", "2", "2", "3"],
            &["2", "2", "2", "3"],
            &["2", "2", "2", "3"],
            &["2 (3)", "2 (3)", "2 (3)", "3"],
        ],
    ),
];

fn criterion_7() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let mut matched = 0;
    for (k, (name, m, expected)) in TABLES.iter().enumerate() {
        let field = if *name == "x/r" {
            CylinderField::x_over_r()
        } else {
            CylinderField::xy_over_r2()
        };
        let probe = |convention| {
            degree_table(&field, *m, TableOptions { convention, ..TableOptions::default() }).unwrap()
        };
        let table = probe(MonomialConvention::TotalDegree);
        let mut mismatches = Vec::new();
        for (n, row) in expected.iter().enumerate() {
            for (p, want) in row.iter().enumerate() {
                let got = table.get(n as u32, p as u32).unwrap().label();
                if got != *want {
                    mismatches.push((n, p, want.to_string(), got));
                }
            }
        }
        if mismatches.is_empty() {
            matched += 1;
            continue;
        }
        ok = false;
        let fallback = probe(MonomialConvention::PerIndex);
        for (n, p, want, got) in mismatches {
            let alt = fallback.get(n as u32, p as u32).unwrap().label();
            notes.push(format!(
                "table {} (h = {name}, m = {m}) cell ({n}, {p}): expected {want}, total-degree {got}, per-index {alt}",
                k + 1
            ));
        }
    }
    Outcome {
        ok,
        summary: format!("tables 1-6: {matched}/6 reproduced exactly under the total-degree convention"),
        notes,
    }
}

fn criterion_8() -> Outcome {
    let ex = unit_example();
    let z0 = ex.z0(0.0, true);
    let base = system(&ex, 0.0);
    let mut errors = Vec::new();
    let mut notes = Vec::new();
    let mut ok = true;
    for eps in [1e-2, 5e-3, 2.5e-3] {
        let cfg = base.with_epsilon(eps).unwrap();
        match find_fixed_point(&cfg, z0, FieldMode::Nonsmooth) {
            Ok(PoincareResult { z_star, iterations, ref crossings, .. }) => {
                let sewing = crossings.iter().all(|c| c.class == malkin_cylinder::SigmaClass::Sewing);
                ok &= sewing;
                let e = (z_star - z0).abs();
                notes.push(format!(
                    "eps {eps:.1e}: z* = {z_star:.12}, |z* - z0| = {e:.3e}, {iterations} Newton steps, all sewing {sewing}, |z* - z0|/eps^2 = {:.4}",
                    e / (eps * eps)
                ));
                errors.push(e);
            }
            Err(err) => {
                ok = false;
                notes.push(format!("eps {eps:.1e}: {err}"));
            }
        }
    }
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[1] / w[0]).collect();
    let monotone = errors.len() == 3 && errors.windows(2).all(|w| w[1] < w[0]);
    let in_band = ratios.len() == 2 && ratios.iter().all(|r| (0.3..=0.7).contains(r));
    ok &= monotone && in_band;
    Outcome {
        ok,
        summary: format!(
            "cycle verification: monotone {monotone}, ratios {:?} (band [0.3, 0.7])",
            ratios.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>()
        ),
        notes,
    }
}

fn criterion_9() -> Outcome {
    let ex = unit_example();
    let cfg = system(&ex, 0.0).with_epsilon(1e-2).unwrap();
    let deltas = [0.5, 0.1, 0.02];
    let z0 = ex.z0(0.0, true);
    let at = |z| regularization_consistency(&cfg, z, &deltas).unwrap();
    let main = at(z0);
    let fmt = |d: &[f64]| d.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join(", ");
    let ok = main.strictly_decreasing() && main.differences[2] < 1e-7;
    let companion = at(0.0);
    Outcome {
        ok,
        summary: format!(
            "regularization at z = z0, eps = 1e-2: |P_delta - P| = [{}] (limit 1e-7 at delta = 0.02)",
            fmt(&main.differences)
        ),
        notes: vec![format!("at z = 0: [{}]", fmt(&companion.differences))],
    }
}

fn random_admissible_field(rng: &mut ChaCha8Rng) -> CylinderField {
    let count = rng.gen_range(1..=3);
    let terms = (0..count)
        .map(|_| loop {
            let (i, j) = (rng.gen_range(0..4u32), rng.gen_range(0..4u32));
            if i % 2 == 1 || j % 2 == 1 {
                break HTerm::new(rng.gen_range(-2.0..2.0), i, j);
            }
        })
        .collect();
    CylinderField::new(terms).unwrap()
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let tol = 1e-10;
    let mut notes = Vec::new();
    let mut ok = true;
    let mut check = |name: &str, value: f64, limit: f64| {
        let pass = value <= limit;
        ok &= pass;
        notes.push(format!("{name}: {value:.3e} (limit {limit:.0e}) {}", if pass { "ok" } else { "VIOLATED" }));
    };

    let fields = [CylinderField::x_over_r(), CylinderField::xy_over_r2()];
    let phi = TransitionFunction::new(0.3).unwrap();
    let mut lin = 0.0f64;
    for field in &fields {
        for _ in 0..5 {
            let g1 = random_perturbation(&mut rng, (2, 2, 2), MonomialConvention::TotalDegree);
            let g2 = random_perturbation(&mut rng, (2, 2, 2), MonomialConvention::TotalDegree);
            let lambda = rng.gen_range(-3.0..3.0);
            let z = rng.gen_range(-2.0..2.0);
            let m = |g: &malkin_cylinder::Perturbation| {
                let cfg = SystemConfig::new(field.clone(), g.clone(), phi, 0.0).unwrap();
                compute_malkin(&cfg, z, MalkinMode::NonsmoothRegularized, tol).unwrap().0
            };
            lin = lin.max((m(&g1.add(&g2)) - m(&g1) - m(&g2)).abs());
            lin = lin.max((m(&g1.scale(lambda)) - lambda * m(&g1)).abs());
        }
    }
    check("linearity of M", lin, 10.0 * tol);

    let mut collapse = 0.0f64;
    for field in &fields {
        let g = random_perturbation(&mut rng, (2, 2, 2), MonomialConvention::TotalDegree).symmetrized();
        for delta in [0.1, 1.0, 5.0] {
            let cfg = SystemConfig::new(field.clone(), g.clone(), TransitionFunction::new(delta).unwrap(), 0.0).unwrap();
            for z in [-1.5, 0.0, 0.8] {
                let a = compute_malkin(&cfg, z, MalkinMode::NonsmoothRegularized, tol).unwrap().0;
                let b = compute_malkin(&cfg, z, MalkinMode::Smooth, tol).unwrap().0;
                collapse = collapse.max((a - b).abs());
            }
        }
    }
    check("smooth collapse", collapse, 10.0 * tol);

    let mut odd = 0.0f64;
    for _ in 0..1000 {
        let phi = TransitionFunction::new([0.0, 0.02, 0.5, 3.0][rng.gen_range(0..4)]).unwrap();
        let t = rng.gen_range(-4.0..4.0);
        odd = odd.max((phi.eval(t) + phi.eval(-t)).abs());
    }
    check("oddness of phi_delta", odd, 0.0);

    let ode = OdeOptions::tol(1e-12, 1e-14);
    let mut drift = 0.0f64;
    let mut identity = 0.0f64;
    for _ in 0..10 {
        let field = random_admissible_field(&mut rng);
        let g = random_perturbation(&mut rng, (1, 1, 1), MonomialConvention::TotalDegree);
        let z = rng.gen_range(-3.0..3.0);
        let cfg = SystemConfig::new(field, g, TransitionFunction::new(rng.gen_range(0.0..1.0)).unwrap(), 0.0).unwrap();
        let traj = integrate(&cfg, [1.0, 0.0, z], 2.0 * PI, FieldMode::Nonsmooth, ode).unwrap();
        for (_, s) in &traj.samples {
            drift = drift.max(((s[0] * s[0] + s[1] * s[1]).sqrt() - 1.0).abs());
        }
        for mode in [FieldMode::Nonsmooth, FieldMode::Regularized] {
            identity = identity.max((poincare_map(&cfg, z, mode).unwrap() - z).abs());
        }
    }
    check("cylinder invariance |r - 1|", drift, 1e-9);
    check("identity return at eps = 0", identity, 1e-9);

    Outcome {
        ok,
        summary: format!("invariant suites: {}", if ok { "all hold" } else { "violations" }),
        notes,
    }
}

type Criterion = (usize, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, Duration::from_secs(1), criterion_1),
        (2, Duration::from_secs(2), criterion_2),
        (3, Duration::from_secs(5), criterion_3),
        (4, Duration::from_secs(2), criterion_4),
        (5, Duration::from_secs(1), criterion_5),
        (6, Duration::from_secs(1), criterion_6),
        (7, Duration::from_secs(60), criterion_7),
        (8, Duration::from_secs(30), criterion_8),
        (9, Duration::from_secs(30), criterion_9),
        (10, Duration::from_secs(60), criterion_10),
    ];
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for (id, limit, run) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed < limit;
        let pass = outcome.ok && in_time;
        println!(
            "{} criterion {id:>2}: {} [{:.2}s, limit {}s{}]",
            if pass { "PASS" } else { "FAIL" },
            outcome.summary,
            elapsed.as_secs_f64(),
            limit.as_secs(),
            if in_time { "" } else { ", too slow" }
        );
        for note in outcome.notes {
            println!("       {note}");
        }
        if !pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
