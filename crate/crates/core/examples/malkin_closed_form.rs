//! The Malkin function of the worked family `h = x/r` against its closed
//! forms, across the regularization width δ.

use malkin_cylinder::malkin::reference::{slope_factor, WorkedExample};
use malkin_cylinder::malkin::{compute_malkin, extract_polynomial, MalkinMode};
use malkin_cylinder::model::{CylinderField, SystemConfig, TransitionFunction};

fn main() -> malkin_cylinder::Result<()> {
    let ex = WorkedExample {
        a101: [0.7, -0.4],
        a110: [0.2, 0.5],
        b000: [0.3, -0.1],
        c000: [-0.2, 0.1],
    };
    let field = CylinderField::x_over_r();
    let cfg = |delta| SystemConfig::new(field.clone(), ex.perturbation()?, TransitionFunction::new(delta)?, 0.0);

    let smooth = compute_malkin(&cfg(0.0)?, 0.0, MalkinMode::Smooth, 1e-12)?.0;
    println!("smooth M (constant in z): {smooth:.12}");
    println!("  closed form with -4b:   {:.12}", ex.smooth_value(false));
    println!("  closed form with +4b:   {:.12}", ex.smooth_value(true));

    println!("\n{:>6} {:>16} {:>16} {:>16} {:>16}", "delta", "I0", "I1", "I1 closed", "z0");
    for delta in [0.0, 1e-3, 0.2, 0.5, 0.9, 1.0, 2.0, 5.0] {
        let poly = extract_polynomial(&cfg(delta)?, MalkinMode::NonsmoothRegularized, 1e-12)?;
        println!(
            "{delta:>6} {:>16.12} {:>16.12} {:>16.12} {:>16.12}",
            poly.coeffs[0],
            poly.coeffs[1],
            slope_factor(delta) * ex.difference(),
            -poly.coeffs[0] / poly.coeffs[1]
        );
    }
    println!("\nI0 closed form pi S / 8 = {:.12} (S with -4b)", ex.constant(false));
    Ok(())
}
