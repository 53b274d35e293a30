//! Event-driven integration across the switching plane `y = 0`: crossings,
//! their Filippov classification and what happens when sliding is reached.
//!
//! Forward integration off the cylinder diverges (it repels at rate e^{4π}
//! per turn), so the perturbation here only acts on `z`.

use std::f64::consts::TAU;

use malkin_cylinder::flow::integrate;
use malkin_cylinder::model::{Component, CylinderField, FieldMode, Perturbation, Side, SystemConfig, TransitionFunction};
use malkin_cylinder::ode::OdeOptions;

fn main() -> malkin_cylinder::Result<()> {
    let g = Perturbation::zero(1, 1, 1)
        .with(Component::R, Side::Plus, (0, 0, 1), 1.0)?
        .with(Component::R, Side::Minus, (0, 0, 0), -0.5)?;
    let cfg = SystemConfig::new(CylinderField::x_over_r(), g.clone(), TransitionFunction::sign(), 0.05)?;
    let traj = integrate(&cfg, [1.0, 0.0, 0.2], 2.0 * TAU, FieldMode::Nonsmooth, OdeOptions::default())?;
    println!("{} samples, {} crossings", traj.samples.len(), traj.crossings.len());
    for c in &traj.crossings {
        println!(
            "  t = {:9.6}  (x, z) = ({:+.9}, {:+.9})  {:?} {:?}",
            c.t, c.state[0], c.state[2], c.direction, c.class
        );
    }
    println!("final state {:?}", traj.final_state().unwrap());

    // A y-push against the flow on the upper side makes x > 0 a sliding region.
    let sliding = g.with(Component::Q, Side::Plus, (0, 0, 0), -40.0)?;
    let cfg = SystemConfig::new(CylinderField::x_over_r(), sliding, TransitionFunction::sign(), 0.05)?;
    let start = [(-0.5f64).cos(), (-0.5f64).sin(), 0.2];
    match integrate(&cfg, start, TAU, FieldMode::Nonsmooth, OdeOptions::default()) {
        Ok(t) => println!("unexpectedly stayed sewing: {} crossings", t.crossings.len()),
        Err(e) => println!("stopped: {e}"),
    }
    Ok(())
}
