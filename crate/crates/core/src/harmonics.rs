//! Complex spherical harmonics `Y_lm` with the Condon–Shortley phase,
//! evaluated together with their polar derivatives on product quadrature
//! grids over the sphere.
//!
//! Complex harmonics keep `L_z` diagonal over the basis, which is what the
//! magnetic selection-rule analysis relies on.

use num_complex::Complex64 as C64;

use crate::quadrature::gauss_legendre;

/// Normalized associated Legendre function
/// `P̄_l^m(u) = sqrt((2l+1)/(4π) (l-m)!/(l+m)!) P_l^m(u)` for `m >= 0`,
/// by the stable diagonal-then-upward recurrence.
pub fn normalized_assoc_legendre(l: u32, m: u32, u: f64) -> f64 {
    assert!(m <= l, "require m <= l");
    let sin_theta_sq = (1.0 - u * u).max(0.0);
    // seed: P̄_m^m
    let mut pmm = (1.0 / (4.0 * std::f64::consts::PI)).sqrt();
    for k in 1..=m {
        let kf = k as f64;
        // ratio (2k+1)/(2k) under the square root, Condon-Shortley sign
        pmm *= -((2.0 * kf + 1.0) / (2.0 * kf)).sqrt();
    }
    pmm *= sin_theta_sq.powi(m as i32).sqrt();
    if l == m {
        return pmm;
    }
    let mut p_prev = pmm;
    let mut p = (2.0 * m as f64 + 3.0).sqrt() * u * pmm;
    for ll in (m + 2)..=l {
        let lf = ll as f64;
        let mf = m as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0))
            .sqrt();
        let p_next = a * (u * p - b * p_prev);
        p_prev = p;
        p = p_next;
    }
    p
}

/// `d P̄_l^m / dθ` evaluated at `u = cos θ` (interior points only).
pub fn normalized_assoc_legendre_dtheta(l: u32, m: u32, u: f64) -> f64 {
    if l == 0 {
        return 0.0;
    }
    let sin_theta = (1.0 - u * u).max(0.0).sqrt();
    let p_l = normalized_assoc_legendre(l, m, u);
    let p_lm1 = if m <= l - 1 {
        normalized_assoc_legendre(l - 1, m, u)
    } else {
        0.0
    };
    let lf = l as f64;
    let mf = m as f64;
    let d = ((2.0 * lf + 1.0) * (lf - mf) * (lf + mf) / (2.0 * lf - 1.0)).sqrt();
    (lf * u * p_l - d * p_lm1) / sin_theta
}

/// `Y_lm(θ, φ)` for any `|m| <= l`.
pub fn spherical_harmonic(l: u32, m: i32, u: f64, phi: f64) -> C64 {
    let ma = m.unsigned_abs();
    let p = normalized_assoc_legendre(l, ma, u);
    let phase = C64::new(0.0, m as f64 * phi).exp();
    if m >= 0 {
        p * phase
    } else {
        // Y_{l,-m} = (-1)^m conj(Y_{lm})
        let sign = if ma % 2 == 0 { 1.0 } else { -1.0 };
        sign * p * phase
    }
}

/// Product quadrature grid over the unit sphere: Gauss–Legendre in
/// `u = cos θ`, uniform trapezoid in `φ` (exact for trigonometric
/// polynomials below the node count).
#[derive(Debug, Clone)]
pub struct AngularGrid {
    pub u: Vec<f64>,
    pub wu: Vec<f64>,
    pub phi: Vec<f64>,
    pub wphi: f64,
}

impl AngularGrid {
    pub fn new(polar_order: usize, azimuthal_count: usize) -> Self {
        let (u, wu) = gauss_legendre(polar_order);
        let wphi = std::f64::consts::TAU / azimuthal_count as f64;
        let phi = (0..azimuthal_count).map(|k| wphi * k as f64).collect();
        Self { u, wu, phi, wphi }
    }

    pub fn len(&self) -> usize {
        self.u.len() * self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Iterate over `(u_j, φ_k, w_jk)` in row-major (u outer) order.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.u.iter().zip(&self.wu).flat_map(move |(&u, &wu)| {
            self.phi.iter().map(move |&phi| (u, phi, wu * self.wphi))
        })
    }
}

/// Tabulated values of one `Y_lm` and the derived angular functions needed to
/// apply gradient operators, sampled on an [`AngularGrid`] (row-major, u
/// outer).
#[derive(Debug, Clone)]
pub struct AngularTable {
    /// `Y_lm`
    pub y: Vec<C64>,
    /// `∂Y_lm/∂θ`
    pub dy_dtheta: Vec<C64>,
    /// `i m Y_lm / sin θ` (the azimuthal-gradient factor; exactly zero for m = 0)
    pub im_y_over_sin: Vec<C64>,
}

impl AngularTable {
    pub fn build(l: u32, m: i32, grid: &AngularGrid) -> Self {
        let n = grid.len();
        let mut y = Vec::with_capacity(n);
        let mut dy = Vec::with_capacity(n);
        let mut imy = Vec::with_capacity(n);
        let ma = m.unsigned_abs();
        let neg = m < 0;
        let sign = if neg && ma % 2 == 1 { -1.0 } else { 1.0 };
        for &u in &grid.u {
            let p = sign * normalized_assoc_legendre(l, ma, u);
            let dp = sign * normalized_assoc_legendre_dtheta(l, ma, u);
            let sin_theta = (1.0 - u * u).max(0.0).sqrt();
            for &phi in &grid.phi {
                let phase = C64::new(0.0, m as f64 * phi).exp();
                y.push(p * phase);
                dy.push(dp * phase);
                if m == 0 {
                    imy.push(C64::new(0.0, 0.0));
                } else {
                    imy.push(C64::new(0.0, m as f64) * p * phase / sin_theta);
                }
            }
        }
        Self {
            y,
            dy_dtheta: dy,
            im_y_over_sin: imy,
        }
    }
}
