use solwave::nonlin::NonlinearityModel;
use solwave::profiles::{self, FamilySign, SolveOptions};

fn main() {
    let model = NonlinearityModel::soler(1.0);
    let mut opts = SolveOptions::default();
    opts.residual_target = 1e30; // accept anything; inspect
    let p1 = profiles::solve_gross_neveu_1d(0.5, 1.0, model, &opts).unwrap();
    println!("1d: v0={} residual={:e} decay={}", p1.v[0], p1.residual, p1.decay);
    top_residuals(&p1);
    let prof =
        profiles::solve_soler_radial(0.9, 1.0, model, FamilySign::Plus, 0, &opts).unwrap();
    top_residuals(&prof);
    println!(
        "v0={} nodes={} residual={} decay={}",
        prof.v[0], prof.nodes, prof.residual, prof.decay
    );
}

fn top_residuals(prof: &solwave::profiles::RadialProfile) {
    // where is the residual large?
    let n = prof.grid.len();
    let mut rows = Vec::new();
    for i in 1..n - 1 {
        let r = prof.grid[i];
        let h = prof.grid[1] - prof.grid[0];
        let du = if i >= 3 && i + 3 < n {
            (-prof.u[i - 3] + 9.0 * prof.u[i - 2] - 45.0 * prof.u[i - 1] + 45.0 * prof.u[i + 1]
                - 9.0 * prof.u[i + 2]
                + prof.u[i + 3])
                / (60.0 * h)
        } else {
            f64::NAN
        };
        let (fu, fv) = prof.system_rhs(r, prof.u[i], prof.v[i]);
        let dv = if i >= 3 && i + 3 < n {
            (-prof.v[i - 3] + 9.0 * prof.v[i - 2] - 45.0 * prof.v[i - 1] + 45.0 * prof.v[i + 1]
                - 9.0 * prof.v[i + 2]
                + prof.v[i + 3])
                / (60.0 * h)
        } else {
            f64::NAN
        };
        let scale = (prof.mass + prof.omega) * (prof.u[i].abs() + prof.v[i].abs())
            + fu.abs()
            + fv.abs()
            + 1e-300;
        let res = ((du - fu).abs()).max((dv - fv).abs()) / scale;
        if res.is_finite() {
            rows.push((res, r, i));
        }
    }
    rows.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    for k in 0..12 {
        let (res, r, i) = rows[k];
        println!(
            "res={:.3e} at r={:.4} (i={}) u={:.6e} v={:.6e}",
            res, r, i, prof.u[i], prof.v[i]
        );
    }
}
