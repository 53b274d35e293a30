//! Admissibility of `h`: parity of every term, zero mean on the unit circle
//! and `A_h ≡ 0`.

use malkin_cylinder::model::{CylinderField, HTerm};

fn main() -> malkin_cylinder::Result<()> {
    let candidates = [
        ("x/r", CylinderField::x_over_r()),
        ("xy/r^2", CylinderField::xy_over_r2()),
        ("x^3/r^3 - 2 y^3/r^3", CylinderField::new(vec![HTerm::new(1.0, 3, 0), HTerm::new(-2.0, 0, 3)])?),
        ("x^2/r^2", CylinderField::new(vec![HTerm::new(1.0, 2, 0)])?),
        ("raw x (not homogenized)", CylinderField::raw(vec![HTerm::new(1.0, 1, 0)])?),
    ];
    for (name, field) in candidates {
        let r = field.check_admissible();
        println!(
            "{name:>24}: parity {:5}  mean zero {:5} (integral {:+.1e})  A_h = 0 {:5} (max {:.1e})  => {}",
            r.parity_ok,
            r.mean_zero,
            r.period_integral,
            r.a_h_zero,
            r.max_abs_a_h,
            if r.passed() { "admissible" } else { "rejected" }
        );
    }

    // On the cylinder z(t) = z + ∫₀ᵗ h is 2π-periodic.
    let h = CylinderField::x_over_r();
    println!("\nz-primitive of x/r: t = 2π/4 -> {:.12}, t = 2π -> {:.1e}", h.z_primitive(std::f64::consts::FRAC_PI_2)?, h.z_primitive(std::f64::consts::TAU)?);
    Ok(())
}
