use nalgebra::Vector3;
use solwave::ansatz::build_family;
use solwave::nonlin::NonlinearityModel;
use solwave::profiles::{solve_soler_radial, FamilySign, SolveOptions};
use solwave::quadrature::{BoxRule, CompositeRule};
use std::sync::Arc;
use std::time::Instant;

fn main() {
    let prof = Arc::new(
        solve_soler_radial(
            0.9,
            1.0,
            NonlinearityModel::soler(1.0),
            FamilySign::Plus,
            0,
            &SolveOptions::default(),
        )
        .unwrap(),
    );
    let f = build_family(prof.clone(), 1).unwrap();
    let radial = CompositeRule::new(0.0, prof.r_max(), 256, 12);
    let qref = 4.0 * std::f64::consts::PI * radial.integrate(|r| f.charge_density_radial(r) * r * r);
    println!("radial Q = {qref:.15}  (r_max = {:.2})", prof.r_max());
    for frac in [0.6, 0.75, 1.0] {
        for n in [64usize, 96, 128, 160, 192] {
            let t0 = Instant::now();
            let rule = BoxRule::cube(frac * prof.r_max(), n);
            let [q] = rule.integrate(|p: Vector3<f64>| [f.evaluate(&p).norm_squared()]);
            println!(
                "frac={frac:.2} n={n:4}  relerr={:+.3e}   ({} ms)",
                (q - qref) / qref,
                t0.elapsed().as_millis()
            );
        }
    }
}
