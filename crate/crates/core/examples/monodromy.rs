//! Monodromy matrix of the linearization along a cylinder orbit: one
//! multiplier 1 (the band of periodic orbits) and one e^{4π} (repelling in r).

use malkin_cylinder::flow::monodromy;
use malkin_cylinder::model::{CylinderField, HTerm};

fn main() -> malkin_cylinder::Result<()> {
    let fields = [
        ("x/r", CylinderField::x_over_r()),
        ("xy/r^2", CylinderField::xy_over_r2()),
        ("raw x", CylinderField::raw(vec![HTerm::new(1.0, 1, 0)])?),
    ];
    println!("e^(4 pi) = {:.6e}", (4.0 * std::f64::consts::PI).exp());
    for (name, field) in fields {
        let r = monodromy(&field)?;
        let [[a, b], [c, d]] = r.matrix;
        println!("{name:>7}: [[{a:.6e}, {b:+.3e}], [{c:+.3e}, {d:.12}]]  eigenvalues {:.6e}, {:.12}", r.eigenvalues[1], r.eigenvalues[0]);
    }
    Ok(())
}
