//! Cubic spline interpolation with not-a-knot end conditions.
//!
//! Built once over a strictly increasing grid; evaluation returns values,
//! first or second derivatives. Uniform grids get O(1) segment lookup.

#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
    uniform_h: Option<f64>,
}

impl CubicSpline {
    /// Panics if fewer than 4 points or the grid is not strictly increasing.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        let n = x.len();
        assert!(n >= 4, "cubic spline needs at least 4 points");
        assert_eq!(n, y.len());
        for i in 1..n {
            assert!(x[i] > x[i - 1], "grid must be strictly increasing");
        }

        let h: Vec<f64> = (0..n - 1).map(|i| x[i + 1] - x[i]).collect();
        let uniform_h = {
            let h0 = h[0];
            if h.iter().all(|&hi| (hi - h0).abs() < 1e-12 * h0) {
                Some(h0)
            } else {
                None
            }
        };

        // Tridiagonal system for the interior knot second derivatives
        // m[1..n-1]. The not-a-knot conditions (third derivative continuous
        // across the first and last interior knots) express m[0] and m[n-1]
        // through their neighbors:
        //   m0     = (1 + a) m1     - a m2,        a = h0/h1,
        //   m[n-1] = (1 + b) m[n-2] - b m[n-3],    b = h[n-2]/h[n-3],
        // and are substituted into the first and last interior rows.
        let k = n - 2; // number of unknowns
        let mut sub = vec![0.0; k];
        let mut diag = vec![0.0; k];
        let mut sup = vec![0.0; k];
        let mut rhs = vec![0.0; k];
        for j in 0..k {
            let i = j + 1; // global knot index
            sub[j] = h[i - 1];
            diag[j] = 2.0 * (h[i - 1] + h[i]);
            sup[j] = h[i];
            rhs[j] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
        }
        let a = h[0] / h[1];
        diag[0] += h[0] * (1.0 + a);
        sup[0] -= h[0] * a;
        sub[0] = 0.0;
        let b = h[n - 2] / h[n - 3];
        diag[k - 1] += h[n - 2] * (1.0 + b);
        sub[k - 1] -= h[n - 2] * b;
        sup[k - 1] = 0.0;

        // Thomas solve.
        let mut c = vec![0.0; k];
        let mut d = vec![0.0; k];
        c[0] = sup[0] / diag[0];
        d[0] = rhs[0] / diag[0];
        for j in 1..k {
            let denom = diag[j] - sub[j] * c[j - 1];
            c[j] = if j < k - 1 { sup[j] / denom } else { 0.0 };
            d[j] = (rhs[j] - sub[j] * d[j - 1]) / denom;
        }
        let mut m = vec![0.0; n];
        m[k] = d[k - 1];
        for j in (0..k - 1).rev() {
            m[j + 1] = d[j] - c[j] * m[j + 2];
        }
        m[0] = (1.0 + a) * m[1] - a * m[2];
        m[n - 1] = (1.0 + b) * m[n - 2] - b * m[n - 3];

        Self { x, y, m, uniform_h }
    }

    #[inline]
    fn segment(&self, t: f64) -> usize {
        let n = self.x.len();
        if let Some(h) = self.uniform_h {
            let i = ((t - self.x[0]) / h).floor() as isize;
            i.clamp(0, n as isize - 2) as usize
        } else {
            match self.x.partition_point(|&xi| xi <= t) {
                0 => 0,
                p => (p - 1).min(n - 2),
            }
        }
    }

    /// Value at t (extrapolates with the boundary cubic outside the grid).
    pub fn eval(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }

    /// First derivative at t.
    pub fn deriv(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        (self.y[i + 1] - self.y[i]) / h
            + ((3.0 * b * b - 1.0) * self.m[i + 1] - (3.0 * a * a - 1.0) * self.m[i]) * h / 6.0
    }

    /// Second derivative at t.
    pub fn deriv2(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        a * self.m[i] + b * self.m[i + 1]
    }

    pub fn grid(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubics_exactly() {
        // not-a-knot splines are exact on cubic polynomials
        let f = |t: f64| 2.0 - t + 3.0 * t * t - 0.5 * t * t * t;
        let fp = |t: f64| -1.0 + 6.0 * t - 1.5 * t * t;
        let x: Vec<f64> = (0..=20).map(|i| i as f64 * 0.25).collect();
        let y: Vec<f64> = x.iter().map(|&t| f(t)).collect();
        let s = CubicSpline::new(x, y);
        for t in [0.0, 0.13, 1.9, 3.33, 5.0] {
            assert!((s.eval(t) - f(t)).abs() < 1e-11, "value at {t}");
            assert!((s.deriv(t) - fp(t)).abs() < 1e-10, "derivative at {t}");
        }
    }

    #[test]
    fn smooth_function_accuracy() {
        let n = 2000;
        let h = 10.0 / n as f64;
        let x: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
        let y: Vec<f64> = x.iter().map(|&t| (-t).exp() * (2.0 * t).sin()).collect();
        let s = CubicSpline::new(x, y);
        let mut worst_v = 0.0f64;
        let mut worst_d = 0.0f64;
        for i in 0..500 {
            let t = 0.01 + i as f64 * 0.0199;
            let exact = (-t).exp() * (2.0 * t).sin();
            let dexact = (-t).exp() * (2.0 * (2.0 * t).cos() - (2.0 * t).sin());
            worst_v = worst_v.max((s.eval(t) - exact).abs());
            worst_d = worst_d.max((s.deriv(t) - dexact).abs());
        }
        assert!(worst_v < 1e-10, "value error {worst_v}");
        assert!(worst_d < 1e-7, "derivative error {worst_d}");
    }

    #[test]
    fn nonuniform_grid_supported() {
        let x: Vec<f64> = (0..=50).map(|i| (i as f64 / 50.0).powi(2) * 4.0).collect();
        let y: Vec<f64> = x.iter().map(|&t| t.sin()).collect();
        let s = CubicSpline::new(x.clone(), y);
        for t in [0.001, 0.7, 2.3, 3.9] {
            assert!((s.eval(t) - t.sin()).abs() < 1e-5);
        }
    }
}
