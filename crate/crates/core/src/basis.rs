//! Truncated hydrogen-like bound-state basis in Hartree atomic units
//! (ħ = m = Q = 1, nuclear charge Z): quantum-number bookkeeping, closed-form
//! radial functions evaluated by stable recurrences, and the sampled tables
//! that the matrix-element machinery consumes.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::harmonics::{AngularGrid, AngularTable};
use crate::quadrature::RadialGrid;

/// Bound-state labels `(n, l, m)`: principal, azimuthal and magnetic quantum
/// numbers. Total ordering is by `n`, then `l`, then `m`, so basis
/// enumeration is deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuantumNumbers {
    n: u32,
    l: u32,
    m: i32,
}

impl QuantumNumbers {
    pub fn new(n: u32, l: u32, m: i32) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain("principal quantum number must be >= 1".into()));
        }
        if l >= n {
            return Err(Error::Domain(format!("require l < n, got n={n}, l={l}")));
        }
        if m.unsigned_abs() > l {
            return Err(Error::Domain(format!("require |m| <= l, got l={l}, m={m}")));
        }
        Ok(Self { n, l, m })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> i32 {
        self.m
    }
}

impl std::fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.n, self.l, self.m)
    }
}

/// Bohr energy `-Z^2 / (2 n^2)` in Hartree.
pub fn energy(n: u32, z: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain("principal quantum number must be >= 1".into()));
    }
    if !(z > 0.0) {
        return Err(Error::Domain("nuclear charge must be positive".into()));
    }
    let nf = n as f64;
    Ok(-z * z / (2.0 * nf * nf))
}

/// Hydrogenic radial function `R_{nl}(r)`, normalized so that
/// `∫ R^2 r^2 dr = 1`. Evaluated through the associated-Laguerre three-term
/// recurrence; the normalization avoids raw factorials so the evaluation
/// stays stable well past n = 10.
pub fn radial_value(n: u32, l: u32, z: f64, r: f64) -> Result<f64> {
    let (value, _) = radial_value_and_deriv(n, l, z, r)?;
    Ok(value)
}

/// `R_{nl}(r)` together with `dR_{nl}/dr`.
pub fn radial_value_and_deriv(n: u32, l: u32, z: f64, r: f64) -> Result<(f64, f64)> {
    if n < 1 {
        return Err(Error::Domain("principal quantum number must be >= 1".into()));
    }
    if l >= n {
        return Err(Error::Domain(format!("require l < n, got n={n}, l={l}")));
    }
    if !(z > 0.0) {
        return Err(Error::Domain("nuclear charge must be positive".into()));
    }
    if r < 0.0 {
        return Err(Error::Domain("radius must be non-negative".into()));
    }
    let nf = n as f64;
    let scale = 2.0 * z / nf;
    let rho = scale * r;
    let k = n - l - 1; // Laguerre degree
    let alpha = 2.0 * l as f64 + 1.0;

    // norm^2 = scale^3 (n-l-1)! / (2n (n+l)!) ; the factorial ratio is the
    // reciprocal of prod_{j=n-l}^{n+l} j
    let mut fact_ratio = 1.0;
    for j in (n - l)..=(n + l) {
        fact_ratio /= j as f64;
    }
    let norm = (scale.powi(3) * fact_ratio / (2.0 * nf)).sqrt();

    let (lag, lag_deriv) = laguerre_with_deriv(k, alpha, rho);
    let expo = (-0.5 * rho).exp();
    let rho_l = rho.powi(l as i32);
    let value = norm * rho_l * expo * lag;

    // dR/drho, split so the l = 0 case never touches rho^{-1}
    let mut d_rho = rho_l * expo * (lag_deriv - 0.5 * lag);
    if l > 0 {
        d_rho += l as f64 * rho.powi(l as i32 - 1) * expo * lag;
    }
    Ok((value, norm * d_rho * scale))
}

/// Generalized Laguerre `L_k^alpha(x)` and `d/dx L_k^alpha(x) = -L_{k-1}^{alpha+1}(x)`.
fn laguerre_with_deriv(k: u32, alpha: f64, x: f64) -> (f64, f64) {
    let value = laguerre(k, alpha, x);
    let deriv = if k == 0 {
        0.0
    } else {
        -laguerre(k - 1, alpha + 1.0, x)
    };
    (value, deriv)
}

fn laguerre(k: u32, alpha: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut lm1 = 1.0;
    let mut l = 1.0 + alpha - x;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - x) * l - (jf + alpha) * lm1) / (jf + 1.0);
        lm1 = l;
        l = next;
    }
    l
}

/// Truncation and quadrature parameters for the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSpec {
    pub n_max: u32,
    pub z: f64,
    pub radial_panels: usize,
    pub radial_nodes_per_panel: usize,
    /// Right edge of the radial grid; must cover the slowest-decaying state.
    pub r_max: f64,
    /// Gauss–Legendre order in cos θ.
    pub polar_order: usize,
    /// Uniform node count in φ.
    pub azimuthal_count: usize,
}

impl BasisSpec {
    /// Default grids for a given truncation: 12 geometric panels of 16 nodes
    /// out to `20 n_max^2 / Z`, and angular orders exact for the band-limited
    /// integrands of every supported operator.
    pub fn new(n_max: u32, z: f64) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::Config("n_max must be >= 1".into()));
        }
        if !(z > 0.0) {
            return Err(Error::Config("nuclear charge must be positive".into()));
        }
        let nf = n_max as f64;
        Ok(Self {
            n_max,
            z,
            radial_panels: 12,
            radial_nodes_per_panel: 16,
            r_max: 20.0 * nf * nf / z,
            polar_order: n_max as usize + 4,
            azimuthal_count: 4 * (n_max as usize + 1),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_max < 1 {
            return Err(Error::Config("n_max must be >= 1".into()));
        }
        if !(self.z > 0.0) {
            return Err(Error::Config("nuclear charge must be positive".into()));
        }
        let nf = self.n_max as f64;
        if self.r_max < 20.0 * nf * nf / self.z {
            return Err(Error::Config(format!(
                "radial grid must reach at least 20 n_max^2 / Z = {}",
                20.0 * nf * nf / self.z
            )));
        }
        // exact integration of polynomials of total degree <= 2 n_max + 4
        if 2 * self.polar_order < 2 * self.n_max as usize + 5 {
            return Err(Error::Config(format!(
                "polar order {} too small for n_max {}",
                self.polar_order, self.n_max
            )));
        }
        if self.azimuthal_count < 2 * self.n_max as usize + 2 {
            return Err(Error::Config(format!(
                "azimuthal count {} too small for n_max {}",
                self.azimuthal_count, self.n_max
            )));
        }
        if self.radial_panels < 1 || self.radial_nodes_per_panel < 1 {
            return Err(Error::Config("radial grid must have at least one node".into()));
        }
        Ok(())
    }
}

/// One basis state: labels, Bohr energy, and the radial function sampled on
/// the basis' radial grid.
#[derive(Debug, Clone)]
pub struct EigenState {
    pub qn: QuantumNumbers,
    pub energy: f64,
    pub radial_values: Vec<f64>,
}

/// The truncated basis with all sampled tables needed downstream. Immutable
/// after construction; safe to share across threads by reference.
#[derive(Debug, Clone)]
pub struct Basis {
    spec: BasisSpec,
    states: Vec<EigenState>,
    index: BTreeMap<(u32, u32, i32), usize>,
    radial_grid: RadialGrid,
    angular_grid: AngularGrid,
    /// dR/dr per state, aligned with `EigenState::radial_values`.
    radial_derivs: Vec<Vec<f64>>,
    /// Angular tables keyed by (l, m), shared across n.
    angular: BTreeMap<(u32, i32), AngularTable>,
}

impl Basis {
    pub fn build(spec: &BasisSpec) -> Result<Self> {
        spec.validate()?;
        let radial_grid = RadialGrid::geometric(
            spec.r_max,
            (0.4 / spec.z).min(spec.r_max * 0.5),
            spec.radial_panels,
            spec.radial_nodes_per_panel,
        )?;
        let angular_grid = AngularGrid::new(spec.polar_order, spec.azimuthal_count);

        let mut states = Vec::new();
        let mut radial_derivs = Vec::new();
        let mut index = BTreeMap::new();
        let mut angular = BTreeMap::new();
        for n in 1..=spec.n_max {
            for l in 0..n {
                // radial table shared across m
                let mut values = Vec::with_capacity(radial_grid.len());
                let mut derivs = Vec::with_capacity(radial_grid.len());
                for &r in &radial_grid.nodes {
                    let (v, d) = radial_value_and_deriv(n, l, spec.z, r)?;
                    values.push(v);
                    derivs.push(d);
                }
                for m in -(l as i32)..=(l as i32) {
                    let qn = QuantumNumbers::new(n, l, m)?;
                    index.insert((n, l, m), states.len());
                    states.push(EigenState {
                        qn,
                        energy: energy(n, spec.z)?,
                        radial_values: values.clone(),
                    });
                    radial_derivs.push(derivs.clone());
                    angular
                        .entry((l, m))
                        .or_insert_with(|| AngularTable::build(l, m, &angular_grid));
                }
            }
        }
        Ok(Self {
            spec: spec.clone(),
            states,
            index,
            radial_grid,
            angular_grid,
            radial_derivs,
            angular,
        })
    }

    pub fn spec(&self) -> &BasisSpec {
        &self.spec
    }

    /// States in the deterministic (n, l, m) order.
    pub fn states(&self) -> &[EigenState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, qn: QuantumNumbers) -> Option<usize> {
        self.index.get(&(qn.n(), qn.l(), qn.m())).copied()
    }

    pub fn state(&self, i: usize) -> &EigenState {
        &self.states[i]
    }

    pub fn radial_grid(&self) -> &RadialGrid {
        &self.radial_grid
    }

    pub fn angular_grid(&self) -> &AngularGrid {
        &self.angular_grid
    }

    pub fn radial_deriv(&self, i: usize) -> &[f64] {
        &self.radial_derivs[i]
    }

    pub fn angular_table(&self, l: u32, m: i32) -> &AngularTable {
        &self.angular[&(l, m)]
    }

    /// Quadrature overlap `⟨a|b⟩` (radial integral times angular integral).
    pub fn overlap(&self, a: usize, b: usize) -> C64 {
        let sa = &self.states[a];
        let sb = &self.states[b];
        let mut radial = 0.0;
        for ((&r, &w), (&ra, &rb)) in self
            .radial_grid
            .nodes
            .iter()
            .zip(&self.radial_grid.weights)
            .zip(sa.radial_values.iter().zip(&sb.radial_values))
        {
            radial += w * ra * rb * r * r;
        }
        let ta = self.angular_table(sa.qn.l(), sa.qn.m());
        let tb = self.angular_table(sb.qn.l(), sb.qn.m());
        let mut angular = C64::new(0.0, 0.0);
        let mut idx = 0;
        for &wu in &self.angular_grid.wu {
            for _ in 0..self.angular_grid.phi.len() {
                angular += wu * self.angular_grid.wphi * ta.y[idx].conj() * tb.y[idx];
                idx += 1;
            }
        }
        radial * angular
    }

    /// Maximum deviation `max_{a,b} |⟨a|b⟩ - δ_ab|` over all state pairs.
    /// A scalar quality report; never fails, even on deliberately coarse
    /// grids.
    pub fn orthonormality_report(&self) -> f64 {
        let n = self.states.len();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in a..n {
                let ov = self.overlap(a, b);
                let expect = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((ov - expect).norm());
            }
        }
        worst
    }
}

/// All `(n, l, m)` with `n <= n_max` in deterministic order; the state count
/// is `sum_{n=1}^{n_max} n^2`.
pub fn enumerate_states(spec: &BasisSpec) -> Result<Vec<EigenState>> {
    Ok(Basis::build(spec)?.states.clone())
}
