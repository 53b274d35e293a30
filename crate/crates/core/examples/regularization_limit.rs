//! The regularized return map converges to the non-smooth one as δ → 0,
//! roughly like δ².

use malkin_cylinder::flow::regularization_consistency;
use malkin_cylinder::malkin::reference::WorkedExample;
use malkin_cylinder::model::{CylinderField, SystemConfig, TransitionFunction};

fn main() -> malkin_cylinder::Result<()> {
    let ex = WorkedExample {
        a101: [1.0, 0.0],
        ..Default::default()
    };
    let cfg = SystemConfig::new(CylinderField::x_over_r(), ex.perturbation()?, TransitionFunction::sign(), 1e-2)?;
    let deltas = [0.5, 0.1, 0.02, 0.004];
    for z in [ex.z0(0.0, false), 0.0, 1.0] {
        let r = regularization_consistency(&cfg, z, &deltas)?;
        println!("z = {z:+.6}: P(z) = {:.12}", r.p_nonsmooth);
        for (d, diff) in r.deltas.iter().zip(&r.differences) {
            println!("    delta {d:<6} |P_delta - P| = {diff:.3e}   / delta^2 = {:.3e}", diff / (d * d));
        }
    }
    Ok(())
}
