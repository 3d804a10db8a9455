//! Quadrature building blocks: Gauss–Legendre rules, composite radial grids,
//! and composite Simpson integration for oscillatory time integrals.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Computed by Newton iteration on the Legendre polynomial, seeded with the
/// Chebyshev-like estimate for the k-th root. Exact (to rounding) for
/// polynomials of degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be at least 1");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for k in 0..n {
        // root estimate; refined below
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_deriv(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[n - 1 - k] = x;
        weights[n - 1 - k] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Legendre polynomial `P_n(x)` and its derivative via the three-term
/// recurrence.
fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A composite Gauss–Legendre rule on `[0, r_max]` over geometrically spaced
/// panels. The first panel starts at zero; subsequent panel edges grow by a
/// constant ratio so that both the power-law behaviour near the origin and
/// the exponential tail are resolved without special-function quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub r_max: f64,
    pub panels: usize,
    pub nodes_per_panel: usize,
}

impl RadialGrid {
    /// Build a grid of `panels` geometric panels with `nodes_per_panel`
    /// Gauss–Legendre nodes each, covering `[0, r_max]`. `first_edge` is the
    /// right edge of the innermost panel.
    pub fn geometric(
        r_max: f64,
        first_edge: f64,
        panels: usize,
        nodes_per_panel: usize,
    ) -> Result<Self> {
        if !(r_max > 0.0) || !(first_edge > 0.0) || first_edge >= r_max {
            return Err(Error::Config(format!(
                "radial grid needs 0 < first_edge < r_max, got first_edge={first_edge}, r_max={r_max}"
            )));
        }
        if panels < 1 || nodes_per_panel < 1 {
            return Err(Error::Config(
                "radial grid needs at least one panel and one node".into(),
            ));
        }
        let mut edges = Vec::with_capacity(panels + 1);
        edges.push(0.0);
        if panels == 1 {
            edges.push(r_max);
        } else {
            let ratio = (r_max / first_edge).powf(1.0 / (panels as f64 - 1.0));
            let mut e = first_edge;
            for _ in 0..panels - 1 {
                edges.push(e);
                e *= ratio;
            }
            edges.push(r_max);
        }
        let (gx, gw) = gauss_legendre(nodes_per_panel);
        let mut nodes = Vec::with_capacity(panels * nodes_per_panel);
        let mut weights = Vec::with_capacity(panels * nodes_per_panel);
        for p in 0..panels {
            let (a, b) = (edges[p], edges[p + 1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (b + a);
            for i in 0..nodes_per_panel {
                nodes.push(mid + half * gx[i]);
                weights.push(half * gw[i]);
            }
        }
        Ok(Self {
            nodes,
            weights,
            r_max,
            panels,
            nodes_per_panel,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrate `f(r)` over `[0, r_max]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&r, &w)| w * f(r))
            .sum()
    }
}

/// Composite Simpson rule for a complex integrand on `[a, b]` with `n`
/// (even, >= 2) subintervals.
pub fn simpson_complex<F: FnMut(f64) -> C64>(mut f: F, a: f64, b: f64, n: usize) -> C64 {
    assert!(n >= 2 && n % 2 == 0, "Simpson needs an even interval count");
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * i as f64);
    }
    acc * (h / 3.0)
}

/// Integrate a piecewise-smooth complex integrand over `[a, b]`, splitting
/// exactly at the supplied breakpoints and applying composite Simpson with a
/// step no larger than `max_step` on each smooth segment.
///
/// Splitting at the breakpoints restores Simpson's fourth-order convergence
/// when the integrand has derivative kinks there.
pub fn segmented_simpson<F: FnMut(f64) -> C64>(
    mut f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    max_step: f64,
) -> C64 {
    assert!(b > a, "empty integration window");
    assert!(max_step > 0.0);
    let mut cuts: Vec<f64> = vec![a];
    for &t in breakpoints {
        if t > a + 1e-14 && t < b - 1e-14 {
            cuts.push(t);
        }
    }
    cuts.push(b);
    cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    cuts.dedup_by(|p, q| (*p - *q).abs() < 1e-14);

    let mut total = C64::new(0.0, 0.0);
    for seg in cuts.windows(2) {
        let (lo, hi) = (seg[0], seg[1]);
        let len = hi - lo;
        let mut n = (len / max_step).ceil() as usize;
        n = n.max(2);
        if n % 2 == 1 {
            n += 1;
        }
        total += simpson_complex(&mut f, lo, hi, n);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gauss_legendre_matches_tabulated_five_point() {
        let (x, w) = gauss_legendre(5);
        // classic 5-point values
        assert_abs_diff_eq!(x[0], -0.906179845938664, epsilon = 1e-14);
        assert_abs_diff_eq!(x[2], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(w[0], 0.236926885056189, epsilon = 1e-14);
        assert_abs_diff_eq!(w[2], 0.568888888888889, epsilon = 1e-14);
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(8);
        // degree 15 monomial: exact value 2/16 for x^14 over [-1,1], 0 for x^15
        let int14: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(14)).sum();
        let int15: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(15)).sum();
        assert_abs_diff_eq!(int14, 2.0 / 15.0, epsilon = 1e-14);
        assert_abs_diff_eq!(int15, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn radial_grid_integrates_exponential_tail() {
        let grid = RadialGrid::geometric(80.0, 0.4, 12, 16).unwrap();
        // \int_0^inf r^2 e^{-r} dr = 2
        let v = grid.integrate(|r| r * r * (-r).exp());
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-13);
    }

    #[test]
    fn radial_grid_rejects_bad_edges() {
        assert!(RadialGrid::geometric(10.0, 20.0, 4, 4).is_err());
        assert!(RadialGrid::geometric(-1.0, 0.1, 4, 4).is_err());
    }

    #[test]
    fn segmented_simpson_handles_kinks() {
        // |t| has a kink at 0; splitting there makes Simpson exact
        let v = segmented_simpson(
            |t| C64::new(t.abs(), 0.0),
            -1.0,
            1.0,
            &[0.0],
            0.25,
        );
        assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn segmented_simpson_oscillatory() {
        // \int_0^{2pi} e^{i t} dt = 0
        let v = segmented_simpson(
            |t| C64::new(0.0, t).exp(),
            0.0,
            2.0 * std::f64::consts::PI,
            &[],
            0.01,
        );
        assert!(v.norm() < 1e-12);
    }
}
