//! Newton on the non-smooth Poincaré map near a simple zero of `M`, for a
//! decreasing sequence of ε. The distance to the prediction `z₀` shrinks like ε².

use malkin_cylinder::flow::find_fixed_point;
use malkin_cylinder::malkin::reference::WorkedExample;
use malkin_cylinder::model::{CylinderField, FieldMode, SystemConfig, TransitionFunction};

fn main() -> malkin_cylinder::Result<()> {
    let ex = WorkedExample {
        a101: [1.0, 0.0],
        ..Default::default()
    };
    let z0 = ex.z0(0.0, false);
    println!("predicted z0 = -3 pi S / (16 D) = {z0:.15}");
    let base = SystemConfig::new(CylinderField::x_over_r(), ex.perturbation()?, TransitionFunction::sign(), 0.0)?;
    let mut previous: Option<f64> = None;
    println!("{:>9} {:>18} {:>11} {:>7} {:>6} {:>12} {:>8}", "eps", "z*", "|z*-z0|", "ratio", "steps", "multiplier", "sewing");
    for eps in [2e-2, 1e-2, 5e-3, 2.5e-3] {
        let r = find_fixed_point(&base.with_epsilon(eps)?, z0, FieldMode::Nonsmooth)?;
        let err = (r.z_star - z0).abs();
        let ratio = previous.map_or(String::from("-"), |p| format!("{:.3}", err / p));
        println!(
            "{eps:>9.1e} {:>18.15} {err:>11.3e} {ratio:>7} {:>6} {:>12.8} {:>8}",
            r.z_star,
            r.iterations,
            r.multiplier_estimate,
            r.all_sewing()
        );
        previous = Some(err);
    }
    Ok(())
}
