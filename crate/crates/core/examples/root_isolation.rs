//! Random perturbations of `h = xy/r²`: extracted Malkin polynomials and
//! their simple roots, i.e. the predicted limit cycles.

use malkin_cylinder::malkin::{extract_polynomial, find_roots, random_perturbation, MalkinMode, MonomialConvention};
use malkin_cylinder::model::{CylinderField, SystemConfig, TransitionFunction};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> malkin_cylinder::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let field = CylinderField::xy_over_r2();
    for trial in 0..5 {
        let g = random_perturbation(&mut rng, (3, 3, 3), MonomialConvention::TotalDegree);
        for (mode, delta) in [(MalkinMode::Smooth, 0.0), (MalkinMode::NonsmoothRegularized, 0.0), (MalkinMode::NonsmoothRegularized, 0.5)] {
            let cfg = SystemConfig::new(field.clone(), g.clone(), TransitionFunction::new(delta)?, 0.0)?;
            let poly = extract_polynomial(&cfg, mode, 1e-10)?;
            let roots = find_roots(&poly, None)?;
            let zs: Vec<String> = roots.iter().map(|r| format!("{:+.6} (M' {:+.2e})", r.z0, r.m_derivative)).collect();
            println!(
                "draw {trial} {:?} delta {delta}: degree {:?}, {} root(s) {}",
                mode,
                poly.degree(1e-9),
                roots.len(),
                zs.join(", ")
            );
        }
    }
    Ok(())
}
