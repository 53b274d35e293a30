//! Generic upper bounds on the number of limit cycles for caps `(m, n, p)`,
//! smooth and (non-smooth) when they differ.

use malkin_cylinder::malkin::{degree_table, TableOptions};
use malkin_cylinder::model::CylinderField;

fn main() -> malkin_cylinder::Result<()> {
    for (name, field) in [("x/r", CylinderField::x_over_r()), ("xy/r^2", CylinderField::xy_over_r2())] {
        for m in 1..=3 {
            let table = degree_table(&field, m, TableOptions::default())?;
            println!("h = {name}, m = {m}   (rows n, columns p)");
            for n in 0..=m {
                let row: Vec<String> = (0..=m).map(|p| format!("{:>6}", table.get(n, p).unwrap().label())).collect();
                println!("  n={n} {}", row.join(""));
            }
        }
    }
    Ok(())
}
