use std::fmt::Write as _;

use rayon::prelude::*;

use super::config::RunConfig;
use super::output::{num, OutputDir};
use crate::error::{Error, Result};
use crate::flow::{cycle_trajectory, find_fixed_point_with, PoincareResult, Trajectory};
use crate::malkin::{
    degree_table, extract_polynomial, find_roots, CycleCandidate, MalkinPolynomial, MonomialConvention,
    TableOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 2;

pub const CURVE_SAMPLES: usize = 401;
pub const TABLE_TRIALS: usize = 20;

/// What a command reports back to the binary.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: String,
    pub exit_code: i32,
    /// Human-readable summary.
    pub report: String,
    pub files: Vec<String>,
}

pub fn cmd_check(cfg: &RunConfig) -> Result<Outcome> {
    let field = cfg.field()?;
    let report = field.check_admissible();
    let mut text = String::new();
    for &k in &report.parity_violations {
        let t = field.terms()[k];
        let _ = writeln!(
            text,
            "parity rule violated: term {k} ({}, {}, {}) has both powers even",
            t.coeff, t.ipow, t.jpow
        );
    }
    if !report.mean_zero {
        let _ = writeln!(text, "mean of h over the unit circle is {:e}, not zero", report.period_integral / std::f64::consts::TAU);
    }
    if !report.a_h_zero {
        let _ = writeln!(text, "A_h does not vanish: max |A_h| = {:e}", report.max_abs_a_h);
    }
    let (status, code) = if report.passed() {
        ("admissible", EXIT_OK)
    } else {
        ("not admissible", EXIT_FAILURE)
    };
    let _ = writeln!(text, "{status}");

    let mut out = OutputDir::create(&cfg.output_dir)?;
    out.json("admissibility.json", &report)?;
    let files = out.finish(cfg, "check", status)?;
    Ok(Outcome {
        status: status.to_string(),
        exit_code: code,
        report: text,
        files,
    })
}

/// `None` roots means `M ≡ 0`.
fn malkin_stage(cfg: &RunConfig) -> Result<(MalkinPolynomial, Option<Vec<CycleCandidate>>)> {
    cfg.field()?.require_admissible()?;
    let sys = cfg.system()?;
    let poly = extract_polynomial(&sys, cfg.mode.malkin_mode(), cfg.quad_tol)?;
    match find_roots(&poly, None) {
        Ok(roots) => Ok((poly, Some(roots))),
        Err(Error::IdenticallyZero) => Ok((poly, None)),
        Err(e) => Err(e),
    }
}

fn write_polynomial(out: &mut OutputDir, poly: &MalkinPolynomial) -> Result<()> {
    let rows: Vec<Vec<String>> = poly
        .coeffs
        .iter()
        .enumerate()
        .map(|(j, &c)| vec![j.to_string(), num(c)])
        .collect();
    out.csv("malkin_coefficients.csv", &["j", "I_j"], &rows)
}

fn polynomial_line(poly: &MalkinPolynomial) -> String {
    let c: Vec<String> = poly.coeffs.iter().map(|c| format!("{c:.12e}")).collect();
    format!("M(z) coefficients [{}]", c.join(", "))
}

pub fn cmd_malkin(cfg: &RunConfig) -> Result<Outcome> {
    let (poly, roots) = malkin_stage(cfg)?;
    let mut out = OutputDir::create(&cfg.output_dir)?;
    write_polynomial(&mut out, &poly)?;
    let mut text = polynomial_line(&poly) + "\n";

    let roots_vec = roots.clone().unwrap_or_default();
    let rows: Vec<Vec<String>> = roots_vec
        .iter()
        .map(|r| vec![num(r.z0), num(r.m_derivative), num(r.delta)])
        .collect();
    out.csv("malkin_roots.csv", &["z0", "m_derivative", "delta"], &rows)?;

    let radius = poly.cauchy_bound().unwrap_or(1.0);
    let curve: Vec<Vec<String>> = (0..CURVE_SAMPLES)
        .map(|k| {
            let z = -radius + 2.0 * radius * k as f64 / (CURVE_SAMPLES - 1) as f64;
            vec![num(z), num(poly.eval(z))]
        })
        .collect();
    out.csv("malkin_curve.csv", &["z", "M"], &curve)?;

    let (status, code) = match &roots {
        None => ("identically zero".to_string(), EXIT_DEGENERATE),
        Some(r) if r.is_empty() => ("no roots".to_string(), EXIT_OK),
        Some(r) => (format!("{} simple root(s)", r.len()), EXIT_OK),
    };
    for r in &roots_vec {
        let _ = writeln!(text, "root z0 = {:.12e}, M'(z0) = {:.6e}", r.z0, r.m_derivative);
    }
    let _ = writeln!(text, "{status}");
    let files = out.finish(cfg, "malkin", &status)?;
    Ok(Outcome {
        status,
        exit_code: code,
        report: text,
        files,
    })
}

struct Verified {
    root: usize,
    eps_index: usize,
    z0: f64,
    result: PoincareResult,
    cycle: Trajectory,
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Outcome> {
    let (poly, roots) = malkin_stage(cfg)?;
    let mut out = OutputDir::create(&cfg.output_dir)?;
    let header = ["epsilon", "delta", "z0_predicted", "z_star", "abs_error", "iterations", "multiplier"];
    let mut text = polynomial_line(&poly) + "\n";

    let roots = match roots {
        None => {
            out.csv("verify.csv", &header, &[])?;
            let status = "identically zero";
            let _ = writeln!(text, "{status}");
            let files = out.finish(cfg, "verify", status)?;
            return Ok(Outcome {
                status: status.to_string(),
                exit_code: EXIT_DEGENERATE,
                report: text,
                files,
            });
        }
        Some(r) => r,
    };

    let sys = cfg.system()?;
    let mode = cfg.mode.field_mode();
    let opts = cfg.poincare_options();
    let jobs: Vec<(usize, CycleCandidate, usize, f64)> = roots
        .iter()
        .enumerate()
        .flat_map(|(k, r)| cfg.epsilon_list.iter().enumerate().map(move |(j, &e)| (k, *r, j, e)))
        .collect();
    let verified: Vec<Verified> = jobs
        .par_iter()
        .map(|&(k, root, j, eps)| {
            let sys = sys.with_epsilon(eps)?;
            let result = find_fixed_point_with(&sys, root.z0, mode, &opts)?;
            let cycle = cycle_trajectory(&sys, &result, mode, &opts)?;
            Ok(Verified {
                root: k,
                eps_index: j,
                z0: root.z0,
                result,
                cycle,
            })
        })
        .collect::<Result<_>>()?;

    let rows: Vec<Vec<String>> = verified
        .iter()
        .map(|v| {
            let r = &v.result;
            vec![
                num(r.epsilon),
                num(r.delta),
                num(v.z0),
                num(r.z_star),
                num((r.z_star - v.z0).abs()),
                r.iterations.to_string(),
                num(r.multiplier_estimate),
            ]
        })
        .collect();
    out.csv("verify.csv", &header, &rows)?;
    for v in &verified {
        let rows: Vec<Vec<String>> = v
            .cycle
            .samples
            .iter()
            .map(|&(t, s)| vec![num(t), num(s[0]), num(s[1]), num(s[2])])
            .collect();
        out.csv(&format!("cycle_root{}_eps{}.csv", v.root, v.eps_index), &["t", "x", "y", "z"], &rows)?;
        let _ = writeln!(
            text,
            "root {} eps {:e}: z* = {:.12e}, |z* - z0| = {:.3e}, {} Newton steps",
            v.root,
            v.result.epsilon,
            v.result.z_star,
            (v.result.z_star - v.z0).abs(),
            v.result.iterations
        );
    }

    let status = if roots.is_empty() {
        "no cycle (M has no zero)".to_string()
    } else {
        format!("{} cycle(s) verified", verified.len())
    };
    let _ = writeln!(text, "{status}");
    let files = out.finish(cfg, "verify", &status)?;
    Ok(Outcome {
        status,
        exit_code: EXIT_OK,
        report: text,
        files,
    })
}

pub fn cmd_tables(cfg: &RunConfig) -> Result<Outcome> {
    let field = cfg.field()?;
    field.require_admissible()?;
    let opts = TableOptions {
        trials: TABLE_TRIALS,
        delta: cfg.delta,
        seed: cfg.seed,
        convention: MonomialConvention::TotalDegree,
    };
    let table = degree_table(&field, cfg.m, opts)?;

    let mut out = OutputDir::create(&cfg.output_dir)?;
    let rows: Vec<Vec<String>> = table
        .cells
        .iter()
        .map(|c| vec![c.m.to_string(), c.n.to_string(), c.p.to_string(), c.smooth.to_string(), c.nonsmooth.to_string()])
        .collect();
    out.csv("tables.csv", &["m", "n", "p", "smooth", "nonsmooth"], &rows)?;

    let mut text = format!("m = {}, rows n, columns p\n", cfg.m);
    for n in 0..=cfg.m {
        let labels: Vec<String> = (0..=cfg.m)
            .map(|p| {
                let cell = table.get(n, p).expect("every cell is probed");
                format!("{:>7}", cell.label())
            })
            .collect();
        let _ = writeln!(text, "n={n} {}", labels.join(" "));
    }
    let status = format!("{} cells", table.cells.len());
    let files = out.finish(cfg, "tables", &status)?;
    Ok(Outcome {
        status,
        exit_code: EXIT_OK,
        report: text,
        files,
    })
}
