//! The perturbing-Hamiltonian matrix over the basis, via a primitive-operator
//! algebra.
//!
//! Every supported gauge maps `H₁ = -p∗A + Φ` (optionally `+ A²/2`) onto a
//! finite list of primitive operators with scalar time coefficients. The
//! primitives' matrices are computed once per basis by product quadrature
//! (radial Gauss–Legendre panels times a sphere rule), with momentum
//! components obtained from the analytic derivatives of the radial functions
//! and spherical harmonics. Assembling `H₁(t)` afterwards is a cheap linear
//! combination.

use std::collections::BTreeMap;

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::basis::{Basis, QuantumNumbers};
use crate::error::{Error, Result};
use crate::gauge::{GaugeChoice, Monomial, TimeCoeff};

/// Energy differences at or below this threshold are treated as exact
/// degeneracy (hydrogenic degeneracy is exact in this model; the threshold
/// only guards rounding).
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// The primitive operators spanned by the supported gauge family. The mixed
/// coordinate-momentum primitives along the same axis (`x·p_x` and friends)
/// are defined as the symmetrized products `(q p + p q)/2`, so every
/// primitive is Hermitian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrimitiveOperator {
    X,
    Y,
    Z,
    Px,
    Py,
    Pz,
    /// `x p_y` (commuting pair).
    XPy,
    /// `y p_x` (commuting pair).
    YPx,
    /// `(x p_x + p_x x)/2`.
    XPxSym,
    /// `(y p_y + p_y y)/2`.
    YPySym,
    /// `(z p_z + p_z z)/2`.
    ZPzSym,
    X2,
    Y2,
    Z2,
    XY,
    Identity,
}

pub const ALL_PRIMITIVES: [PrimitiveOperator; 16] = [
    PrimitiveOperator::X,
    PrimitiveOperator::Y,
    PrimitiveOperator::Z,
    PrimitiveOperator::Px,
    PrimitiveOperator::Py,
    PrimitiveOperator::Pz,
    PrimitiveOperator::XPy,
    PrimitiveOperator::YPx,
    PrimitiveOperator::XPxSym,
    PrimitiveOperator::YPySym,
    PrimitiveOperator::ZPzSym,
    PrimitiveOperator::X2,
    PrimitiveOperator::Y2,
    PrimitiveOperator::Z2,
    PrimitiveOperator::XY,
    PrimitiveOperator::Identity,
];

impl PrimitiveOperator {
    pub fn name(&self) -> &'static str {
        match self {
            PrimitiveOperator::X => "x",
            PrimitiveOperator::Y => "y",
            PrimitiveOperator::Z => "z",
            PrimitiveOperator::Px => "px",
            PrimitiveOperator::Py => "py",
            PrimitiveOperator::Pz => "pz",
            PrimitiveOperator::XPy => "xpy",
            PrimitiveOperator::YPx => "ypx",
            PrimitiveOperator::XPxSym => "xpx",
            PrimitiveOperator::YPySym => "ypy",
            PrimitiveOperator::ZPzSym => "zpz",
            PrimitiveOperator::X2 => "x2",
            PrimitiveOperator::Y2 => "y2",
            PrimitiveOperator::Z2 => "z2",
            PrimitiveOperator::XY => "xy",
            PrimitiveOperator::Identity => "identity",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        ALL_PRIMITIVES.iter().copied().find(|p| p.name() == name)
    }
}

impl std::fmt::Display for PrimitiveOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A scalar time coefficient of one expansion term: either a profile from
/// the gauge algebra or a product of two (the `A²` terms).
#[derive(Debug, Clone)]
pub enum CoeffProfile {
    Linear(TimeCoeff),
    Product(TimeCoeff, TimeCoeff),
}

impl CoeffProfile {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            CoeffProfile::Linear(c) => c.eval(t),
            CoeffProfile::Product(a, b) => a.eval(t) * b.eval(t),
        }
    }
}

/// `H₁` decomposed as a sum of time-coefficient × primitive-operator terms.
#[derive(Debug, Clone)]
pub struct OperatorExpansion {
    pub terms: Vec<(CoeffProfile, PrimitiveOperator)>,
}

impl OperatorExpansion {
    /// Combined coefficient of one primitive at time `t`.
    pub fn coefficient(&self, op: PrimitiveOperator, t: f64) -> f64 {
        self.terms
            .iter()
            .filter(|(_, p)| *p == op)
            .map(|(c, _)| c.eval(t))
            .sum()
    }

    /// Assemble the matrix `Σ_k c_k(t) M_k`.
    pub fn matrix_at(&self, t: f64, table: &OperatorTable) -> Array2<C64> {
        let n = table.dim;
        let mut out = Array2::zeros((n, n));
        for (coeff, op) in &self.terms {
            let c = coeff.eval(t);
            if c == 0.0 {
                continue;
            }
            out.scaled_add(C64::new(c, 0.0), table.matrix(*op));
        }
        out
    }
}

fn phi_monomial_primitive(mono: Monomial) -> Option<PrimitiveOperator> {
    match mono {
        Monomial::One => Some(PrimitiveOperator::Identity),
        Monomial::X => Some(PrimitiveOperator::X),
        Monomial::Y => Some(PrimitiveOperator::Y),
        Monomial::Z => Some(PrimitiveOperator::Z),
        Monomial::XX => Some(PrimitiveOperator::X2),
        Monomial::YY => Some(PrimitiveOperator::Y2),
        Monomial::ZZ => Some(PrimitiveOperator::Z2),
        Monomial::XY => Some(PrimitiveOperator::XY),
        Monomial::XZ | Monomial::YZ => None,
    }
}

/// `p_axis ∗ mono`, where the axis-aligned coordinate maps to the
/// symmetrized primitive and an incompatible pairing leaves the algebra.
fn momentum_monomial_primitive(axis: usize, mono: Monomial) -> Option<PrimitiveOperator> {
    use Monomial::*;
    use PrimitiveOperator::*;
    match (axis, mono) {
        (0, One) => Some(Px),
        (0, X) => Some(XPxSym),
        (0, Y) => Some(YPx),
        (1, One) => Some(Py),
        (1, X) => Some(XPy),
        (1, Y) => Some(YPySym),
        (2, One) => Some(Pz),
        (2, Z) => Some(ZPzSym),
        _ => None,
    }
}

fn monomial_product(a: Monomial, b: Monomial) -> Option<Monomial> {
    use Monomial::*;
    let pair = if a <= b { (a, b) } else { (b, a) };
    match pair {
        (One, m) => Some(m),
        (X, X) => Some(XX),
        (Y, Y) => Some(YY),
        (Z, Z) => Some(ZZ),
        (X, Y) => Some(XY),
        (X, Z) => Some(XZ),
        (Y, Z) => Some(YZ),
        _ => None, // degree > 2
    }
}

/// Expand `H₁ = -p∗A + Φ` (plus `A²/2` when requested) into primitive terms.
///
/// The symmetrized product is applied per monomial: for the built-in gauges
/// every momentum component multiplies a commuting coordinate, so `p∗A`
/// coincides with the plain product there; axis-aligned pairings produced by
/// gauge transforms map onto the symmetrized primitives instead.
pub fn h1_expansion(g: &GaugeChoice, include_a2: bool) -> Result<OperatorExpansion> {
    let mut terms: Vec<(CoeffProfile, PrimitiveOperator)> = Vec::new();

    // -p∗A
    for axis in 0..3 {
        for (mono, coeff) in g.vector_potential_poly()[axis].terms() {
            let op = momentum_monomial_primitive(axis, mono).ok_or_else(|| {
                Error::Config(format!(
                    "vector potential component {axis} carries monomial {mono:?} outside \
                     the primitive-operator algebra"
                ))
            })?;
            terms.push((CoeffProfile::Linear(coeff.scaled(-1.0)), op));
        }
    }

    // +Φ
    for (mono, coeff) in g.scalar_potential_poly().terms() {
        let op = phi_monomial_primitive(mono).ok_or_else(|| {
            Error::Config(format!(
                "scalar potential carries monomial {mono:?} outside the \
                 primitive-operator algebra"
            ))
        })?;
        terms.push((CoeffProfile::Linear(coeff.clone()), op));
    }

    // +A²/2
    if include_a2 {
        for axis in 0..3 {
            let comp = g.vector_potential_poly()[axis].clone();
            let monos: Vec<(Monomial, TimeCoeff)> =
                comp.terms().map(|(m, c)| (m, c.clone())).collect();
            for (ma, ca) in &monos {
                for (mb, cb) in &monos {
                    let prod = monomial_product(*ma, *mb).ok_or_else(|| {
                        Error::Config("A² term exceeds spatial degree 2".into())
                    })?;
                    let op = phi_monomial_primitive(prod).ok_or_else(|| {
                        Error::Config(format!(
                            "A² term carries monomial {prod:?} outside the \
                             primitive-operator algebra"
                        ))
                    })?;
                    terms.push((
                        CoeffProfile::Product(ca.scaled(0.5), cb.clone()),
                        op,
                    ));
                }
            }
        }
    }

    Ok(OperatorExpansion { terms })
}

/// One separable term of `op` applied to a basis state: a radial profile on
/// the radial grid times an angular profile on the sphere grid.
struct SepTerm {
    radial: Vec<f64>,
    angular: Vec<C64>,
}

/// Geometry factors of the sphere grid, precomputed once per assembly.
struct SphereFactors {
    sin_theta: Vec<f64>,
    cos_theta: Vec<f64>,
    cos_phi: Vec<f64>,
    sin_phi: Vec<f64>,
    weight: Vec<f64>,
    n_phi: usize,
}

impl SphereFactors {
    fn build(basis: &Basis) -> Self {
        let grid = basis.angular_grid();
        let n_phi = grid.phi.len();
        let mut sin_theta = Vec::new();
        let mut cos_theta = Vec::new();
        let mut cos_phi = Vec::new();
        let mut sin_phi = Vec::new();
        let mut weight = Vec::new();
        for (u, phi, w) in grid.points() {
            sin_theta.push((1.0 - u * u).max(0.0).sqrt());
            cos_theta.push(u);
            cos_phi.push(phi.cos());
            sin_phi.push(phi.sin());
            weight.push(w);
        }
        Self {
            sin_theta,
            cos_theta,
            cos_phi,
            sin_phi,
            weight,
            n_phi,
        }
    }
}

const MINUS_I: C64 = C64::new(0.0, -1.0);

/// Build the separable terms of `op` applied to basis state `b`.
fn apply_primitive(op: PrimitiveOperator, basis: &Basis, b: usize, f: &SphereFactors) -> Vec<SepTerm> {
    let state = basis.state(b);
    let (l, m) = (state.qn.l(), state.qn.m());
    let table = basis.angular_table(l, m);
    let r_nodes = &basis.radial_grid().nodes;
    let rv = &state.radial_values;
    let rd = basis.radial_deriv(b);
    let n_ang = table.y.len();

    let rad_r = || -> Vec<f64> { rv.iter().zip(r_nodes).map(|(v, r)| v * r).collect() };
    let rad_r2 = || -> Vec<f64> {
        rv.iter().zip(r_nodes).map(|(v, r)| v * r * r).collect()
    };
    let rad_over_r = || -> Vec<f64> { rv.iter().zip(r_nodes).map(|(v, r)| v / r).collect() };

    let ang_map = |g: &dyn Fn(usize) -> C64| -> Vec<C64> { (0..n_ang).map(g).collect() };

    // gradient pieces of ψ_b (chain rule in spherical coordinates); each is
    // (radial profile, angular profile)
    let grad_terms = |dir: usize| -> Vec<SepTerm> {
        let mut out = Vec::new();
        match dir {
            0 => {
                out.push(SepTerm {
                    radial: rd.to_vec(),
                    angular: ang_map(&|i| f.sin_theta[i] * f.cos_phi[i] * table.y[i]),
                });
                out.push(SepTerm {
                    radial: rad_over_r(),
                    angular: ang_map(&|i| f.cos_theta[i] * f.cos_phi[i] * table.dy_dtheta[i]),
                });
                out.push(SepTerm {
                    radial: rad_over_r(),
                    angular: ang_map(&|i| -f.sin_phi[i] * table.im_y_over_sin[i]),
                });
            }
            1 => {
                out.push(SepTerm {
                    radial: rd.to_vec(),
                    angular: ang_map(&|i| f.sin_theta[i] * f.sin_phi[i] * table.y[i]),
                });
                out.push(SepTerm {
                    radial: rad_over_r(),
                    angular: ang_map(&|i| f.cos_theta[i] * f.sin_phi[i] * table.dy_dtheta[i]),
                });
                out.push(SepTerm {
                    radial: rad_over_r(),
                    angular: ang_map(&|i| f.cos_phi[i] * table.im_y_over_sin[i]),
                });
            }
            _ => {
                out.push(SepTerm {
                    radial: rd.to_vec(),
                    angular: ang_map(&|i| f.cos_theta[i] * table.y[i]),
                });
                out.push(SepTerm {
                    radial: rad_over_r(),
                    angular: ang_map(&|i| -f.sin_theta[i] * table.dy_dtheta[i]),
                });
            }
        }
        out
    };

    // momentum = -i grad
    let momentum = |dir: usize| -> Vec<SepTerm> {
        grad_terms(dir)
            .into_iter()
            .map(|t| SepTerm {
                radial: t.radial,
                angular: t.angular.into_iter().map(|a| MINUS_I * a).collect(),
            })
            .collect()
    };

    // coordinate × momentum: multiply each separable term by r × (angular factor)
    let coord_times = |terms: Vec<SepTerm>, ang: &dyn Fn(usize) -> f64| -> Vec<SepTerm> {
        terms
            .into_iter()
            .map(|t| SepTerm {
                radial: t.radial.iter().zip(r_nodes).map(|(v, r)| v * r).collect(),
                angular: t
                    .angular
                    .into_iter()
                    .enumerate()
                    .map(|(i, a)| ang(i) * a)
                    .collect(),
            })
            .collect()
    };

    let half_commutator = || SepTerm {
        radial: rv.clone(),
        angular: ang_map(&|i| C64::new(0.0, -0.5) * table.y[i]),
    };

    match op {
        PrimitiveOperator::Identity => vec![SepTerm {
            radial: rv.clone(),
            angular: table.y.clone(),
        }],
        PrimitiveOperator::X => vec![SepTerm {
            radial: rad_r(),
            angular: ang_map(&|i| f.sin_theta[i] * f.cos_phi[i] * table.y[i]),
        }],
        PrimitiveOperator::Y => vec![SepTerm {
            radial: rad_r(),
            angular: ang_map(&|i| f.sin_theta[i] * f.sin_phi[i] * table.y[i]),
        }],
        PrimitiveOperator::Z => vec![SepTerm {
            radial: rad_r(),
            angular: ang_map(&|i| f.cos_theta[i] * table.y[i]),
        }],
        PrimitiveOperator::X2 => vec![SepTerm {
            radial: rad_r2(),
            angular: ang_map(&|i| {
                let s = f.sin_theta[i] * f.cos_phi[i];
                s * s * table.y[i]
            }),
        }],
        PrimitiveOperator::Y2 => vec![SepTerm {
            radial: rad_r2(),
            angular: ang_map(&|i| {
                let s = f.sin_theta[i] * f.sin_phi[i];
                s * s * table.y[i]
            }),
        }],
        PrimitiveOperator::Z2 => vec![SepTerm {
            radial: rad_r2(),
            angular: ang_map(&|i| f.cos_theta[i] * f.cos_theta[i] * table.y[i]),
        }],
        PrimitiveOperator::XY => vec![SepTerm {
            radial: rad_r2(),
            angular: ang_map(&|i| {
                f.sin_theta[i] * f.sin_theta[i] * f.cos_phi[i] * f.sin_phi[i] * table.y[i]
            }),
        }],
        PrimitiveOperator::Px => momentum(0),
        PrimitiveOperator::Py => momentum(1),
        PrimitiveOperator::Pz => momentum(2),
        PrimitiveOperator::XPy => {
            coord_times(momentum(1), &|i| f.sin_theta[i] * f.cos_phi[i])
        }
        PrimitiveOperator::YPx => {
            coord_times(momentum(0), &|i| f.sin_theta[i] * f.sin_phi[i])
        }
        PrimitiveOperator::XPxSym => {
            let mut terms = coord_times(momentum(0), &|i| f.sin_theta[i] * f.cos_phi[i]);
            terms.push(half_commutator());
            terms
        }
        PrimitiveOperator::YPySym => {
            let mut terms = coord_times(momentum(1), &|i| f.sin_theta[i] * f.sin_phi[i]);
            terms.push(half_commutator());
            terms
        }
        PrimitiveOperator::ZPzSym => {
            let mut terms = coord_times(momentum(2), &|i| f.cos_theta[i]);
            terms.push(half_commutator());
            terms
        }
    }
}

fn pair_element(basis: &Basis, f: &SphereFactors, a: usize, terms: &[SepTerm]) -> C64 {
    let sa = basis.state(a);
    let ta = basis.angular_table(sa.qn.l(), sa.qn.m());
    let r_nodes = &basis.radial_grid().nodes;
    let r_weights = &basis.radial_grid().weights;
    let mut total = C64::new(0.0, 0.0);
    for term in terms {
        let mut radial = 0.0;
        for i in 0..r_nodes.len() {
            radial += r_weights[i] * r_nodes[i] * r_nodes[i] * sa.radial_values[i] * term.radial[i];
        }
        let mut angular = C64::new(0.0, 0.0);
        for i in 0..term.angular.len() {
            angular += f.weight[i] * ta.y[i].conj() * term.angular[i];
        }
        total += radial * angular;
    }
    total
}

/// All sixteen primitive matrices over a basis, computed once and then
/// read-only.
#[derive(Debug)]
pub struct OperatorTable {
    dim: usize,
    matrices: BTreeMap<PrimitiveOperator, Array2<C64>>,
}

impl OperatorTable {
    pub fn build(basis: &Basis) -> Self {
        let f = SphereFactors::build(basis);
        let n = basis.len();
        let mut matrices = BTreeMap::new();
        for op in ALL_PRIMITIVES {
            let mut mat = Array2::zeros((n, n));
            for b in 0..n {
                let terms = apply_primitive(op, basis, b, &f);
                for a in 0..n {
                    mat[[a, b]] = pair_element(basis, &f, a, &terms);
                }
            }
            matrices.insert(op, mat);
        }
        Self { dim: n, matrices }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, op: PrimitiveOperator) -> &Array2<C64> {
        &self.matrices[&op]
    }
}

/// Single matrix element `⟨a|op|b⟩` by quadrature.
pub fn matel_primitive(
    op: PrimitiveOperator,
    a: QuantumNumbers,
    b: QuantumNumbers,
    basis: &Basis,
) -> Result<C64> {
    let ia = basis
        .index_of(a)
        .ok_or_else(|| Error::Domain(format!("state {a} not in basis")))?;
    let ib = basis
        .index_of(b)
        .ok_or_else(|| Error::Domain(format!("state {b} not in basis")))?;
    let f = SphereFactors::build(basis);
    let terms = apply_primitive(op, basis, ib, &f);
    Ok(pair_element(basis, &f, ia, &terms))
}

/// Assemble `H₁(t)` for a gauge over the basis.
pub fn h1_matrix(
    g: &GaugeChoice,
    t: f64,
    table: &OperatorTable,
    include_a2: bool,
) -> Result<Array2<C64>> {
    Ok(h1_expansion(g, include_a2)?.matrix_at(t, table))
}

/// `p ∗ ∇Φ` as primitive terms, for the coordinate-polynomial primitives.
fn momentum_gradient_terms(scalar_op: PrimitiveOperator) -> Result<Vec<(f64, PrimitiveOperator)>> {
    use PrimitiveOperator::*;
    match scalar_op {
        Identity => Ok(vec![]),
        X => Ok(vec![(1.0, Px)]),
        Y => Ok(vec![(1.0, Py)]),
        Z => Ok(vec![(1.0, Pz)]),
        X2 => Ok(vec![(2.0, XPxSym)]),
        Y2 => Ok(vec![(2.0, YPySym)]),
        Z2 => Ok(vec![(2.0, ZPzSym)]),
        XY => Ok(vec![(1.0, YPx), (1.0, XPy)]),
        _ => Err(Error::Domain(format!(
            "commutator identity applies to coordinate polynomials, not {scalar_op}"
        ))),
    }
}

/// Residuals of the energy-representation identity
/// `(ε_a - ε_b) ⟨a|Φ|b⟩ = -i ⟨a| p∗∇Φ |b⟩`.
#[derive(Debug, Clone)]
pub struct CommutatorIdentityReport {
    /// Max residual over nondegenerate pairs.
    pub max_residual: f64,
    /// Max `|⟨a| p∗∇Φ |b⟩|` over degenerate pairs `a ≠ b`, reported
    /// separately: the identity divides by `ε_a - ε_b` and is inapplicable
    /// there, but the gradient element itself must vanish for exact
    /// eigenstates.
    pub max_degenerate_gradient_element: f64,
    pub nondegenerate_pairs: usize,
    pub degenerate_pairs: usize,
}

pub fn commutator_identity_residual(
    scalar_op: PrimitiveOperator,
    basis: &Basis,
    table: &OperatorTable,
) -> Result<CommutatorIdentityReport> {
    let grad_terms = momentum_gradient_terms(scalar_op)?;
    let n = basis.len();
    let phi_mat = table.matrix(scalar_op);
    let mut grad_mat: Array2<C64> = Array2::zeros((n, n));
    for (factor, op) in &grad_terms {
        grad_mat.scaled_add(C64::new(*factor, 0.0), table.matrix(*op));
    }

    let mut max_residual: f64 = 0.0;
    let mut max_deg: f64 = 0.0;
    let mut nondeg = 0usize;
    let mut deg = 0usize;
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let de = basis.state(a).energy - basis.state(b).energy;
            if de.abs() <= DEGENERACY_THRESHOLD {
                deg += 1;
                max_deg = max_deg.max(grad_mat[[a, b]].norm());
            } else {
                nondeg += 1;
                let residual = (de * phi_mat[[a, b]] - MINUS_I * grad_mat[[a, b]]).norm();
                max_residual = max_residual.max(residual);
            }
        }
    }
    Ok(CommutatorIdentityReport {
        max_residual,
        max_degenerate_gradient_element: max_deg,
        nondegenerate_pairs: nondeg,
        degenerate_pairs: deg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BasisSpec;
    use crate::envelope::Envelope;
    use crate::gauge::{builtin_gauge, BuiltinGauge, FieldParams};
    use approx::assert_abs_diff_eq;

    fn basis3() -> Basis {
        Basis::build(&BasisSpec::new(3, 1.0).unwrap()).unwrap()
    }

    fn qn(n: u32, l: u32, m: i32) -> QuantumNumbers {
        QuantumNumbers::new(n, l, m).unwrap()
    }

    /// Independent oracle for <100|z|210>: dense Simpson on the closed-form
    /// integrand  (R_10 = 2 e^{-r}, R_21 = r e^{-r/2}/sqrt(24), angular
    /// factor integral_0^pi cos^2 theta sin theta dtheta = 2/3).
    fn brute_z_1s_2p0() -> f64 {
        let n = 400_000;
        let rmax = 100.0;
        let h = rmax / n as f64;
        let f = |r: f64| 2.0 * (-r).exp() * (r * (-0.5 * r).exp() / 24.0f64.sqrt()) * r * r * r;
        let mut acc = f(0.0) + f(rmax);
        for i in 1..n {
            acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(h * i as f64);
        }
        let radial = acc * h / 3.0;
        let angular = (3.0f64).sqrt() / 3.0; // sqrt(3)/(4pi) * 2pi * 2/3
        radial * angular
    }

    #[test]
    fn dipole_element_1s_2p0() {
        let oracle = brute_z_1s_2p0();
        // closed form 128 sqrt(2) / 243
        assert_abs_diff_eq!(oracle, 128.0 * 2.0f64.sqrt() / 243.0, epsilon = 1e-10);
        let basis = basis3();
        let v = matel_primitive(PrimitiveOperator::Z, qn(1, 0, 0), qn(2, 1, 0), &basis).unwrap();
        assert_abs_diff_eq!(v.re, oracle, epsilon = 1e-10);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn dipole_selection_rule_parity() {
        let basis = basis3();
        let v = matel_primitive(PrimitiveOperator::Z, qn(1, 0, 0), qn(2, 0, 0), &basis).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn lz_is_diagonal_with_integer_eigenvalues() {
        let basis = basis3();
        let table = OperatorTable::build(&basis);
        let lz = {
            let mut m = table.matrix(PrimitiveOperator::XPy).clone();
            m.scaled_add(C64::new(-1.0, 0.0), table.matrix(PrimitiveOperator::YPx));
            m
        };
        for a in 0..basis.len() {
            for b in 0..basis.len() {
                let expect = if a == b {
                    basis.state(a).qn.m() as f64
                } else {
                    0.0
                };
                assert_abs_diff_eq!(lz[[a, b]].re, expect, epsilon = 1e-12);
                assert_abs_diff_eq!(lz[[a, b]].im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn momentum_element_matches_commutator_route() {
        let basis = basis3();
        let direct =
            matel_primitive(PrimitiveOperator::Pz, qn(1, 0, 0), qn(2, 1, 0), &basis).unwrap();
        // p = i [H0, q] between eigenstates: <a|p_z|b> = i (e_a - e_b) <a|z|b>
        let z = matel_primitive(PrimitiveOperator::Z, qn(1, 0, 0), qn(2, 1, 0), &basis).unwrap();
        let expect = C64::new(0.0, -0.5 - (-0.125)) * z;
        assert_abs_diff_eq!(direct.re, expect.re, epsilon = 1e-10);
        assert_abs_diff_eq!(direct.im, expect.im, epsilon = 1e-10);
        // frozen value: -0.375 * 128 sqrt(2)/243
        assert_abs_diff_eq!(direct.im, -0.2793508271352793, epsilon = 1e-10);
        assert_abs_diff_eq!(direct.re, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn primitive_matrices_are_hermitian() {
        let basis = basis3();
        let table = OperatorTable::build(&basis);
        for op in ALL_PRIMITIVES {
            let m = table.matrix(op);
            let mut worst: f64 = 0.0;
            for a in 0..basis.len() {
                for b in 0..basis.len() {
                    worst = worst.max((m[[a, b]] - m[[b, a]].conj()).norm());
                }
            }
            assert!(worst <= 1e-12, "{op} deviation {worst}");
        }
    }

    #[test]
    fn momentum_cross_check_all_nondegenerate_pairs() {
        // direct-quadrature p vs the commutator-identity route, n <= 4
        let basis = Basis::build(&BasisSpec::new(4, 1.0).unwrap()).unwrap();
        let table = OperatorTable::build(&basis);
        for (p_op, q_op) in [
            (PrimitiveOperator::Px, PrimitiveOperator::X),
            (PrimitiveOperator::Py, PrimitiveOperator::Y),
            (PrimitiveOperator::Pz, PrimitiveOperator::Z),
        ] {
            let p = table.matrix(p_op);
            let q = table.matrix(q_op);
            let mut worst: f64 = 0.0;
            for a in 0..basis.len() {
                for b in 0..basis.len() {
                    let de = basis.state(a).energy - basis.state(b).energy;
                    if de.abs() <= DEGENERACY_THRESHOLD {
                        continue;
                    }
                    worst = worst.max((p[[a, b]] - C64::new(0.0, de) * q[[a, b]]).norm());
                }
            }
            assert!(worst <= 1e-8, "{p_op} worst {worst}");
        }
    }

    fn fig1_eps(eps: f64) -> Envelope {
        Envelope::trapezoid(0.0, 1.0, 3.0, 4.0).unwrap().with_amplitude(eps)
    }

    #[test]
    fn symmetric_gauge_expansion_is_lz_combination() {
        let g = builtin_gauge(
            BuiltinGauge::MagneticSymmetric,
            &fig1_eps(1.0),
            &FieldParams::Magnetic { strength: 1e-3 },
        )
        .unwrap();
        let exp = h1_expansion(&g, false).unwrap();
        let t = 2.0; // plateau
        assert_abs_diff_eq!(
            exp.coefficient(PrimitiveOperator::XPy, t),
            -0.5e-3,
            epsilon = 1e-18
        );
        assert_abs_diff_eq!(
            exp.coefficient(PrimitiveOperator::YPx, t),
            0.5e-3,
            epsilon = 1e-18
        );
        assert_eq!(exp.terms.len(), 2);
    }

    #[test]
    fn electric_gauges_expansion_terms() {
        let pol = FieldParams::Electric {
            polarization: [0.0, 0.0, 1.0],
        };
        let env = fig1_eps(1e-3);
        let length = builtin_gauge(BuiltinGauge::ElectricLength, &env, &pol).unwrap();
        let exp = h1_expansion(&length, false).unwrap();
        assert_eq!(exp.terms.len(), 1);
        // H1 = -E_z(t) z with E_z = eps T
        assert_abs_diff_eq!(
            exp.coefficient(PrimitiveOperator::Z, 2.0),
            -1e-3,
            epsilon = 1e-18
        );

        let velocity = builtin_gauge(BuiltinGauge::ElectricVelocity, &env, &pol).unwrap();
        let exp = h1_expansion(&velocity, false).unwrap();
        assert_eq!(exp.terms.len(), 1);
        // H1 = -A_z(t) p_z with A_z = -eps ∫T; at t=2 the running integral is 1.5
        assert_abs_diff_eq!(
            exp.coefficient(PrimitiveOperator::Pz, 2.0),
            1.5e-3,
            epsilon = 1e-18
        );
    }

    #[test]
    fn h1_vanishes_outside_pulse() {
        let basis = basis3();
        let table = OperatorTable::build(&basis);
        for kind in [BuiltinGauge::MagneticSymmetric, BuiltinGauge::MagneticLandau] {
            let g = builtin_gauge(
                kind,
                &fig1_eps(1.0),
                &FieldParams::Magnetic { strength: 1e-3 },
            )
            .unwrap();
            for &t in &[-2.0, 5.0] {
                let m = h1_matrix(&g, t, &table, true).unwrap();
                assert!(m.iter().all(|c| c.norm() == 0.0));
            }
        }
    }

    #[test]
    fn symmetric_gauge_matrix_is_diagonal() {
        let basis = basis3();
        let table = OperatorTable::build(&basis);
        let g = builtin_gauge(
            BuiltinGauge::MagneticSymmetric,
            &fig1_eps(1.0),
            &FieldParams::Magnetic { strength: 1e-3 },
        )
        .unwrap();
        let m = h1_matrix(&g, 2.0, &table, false).unwrap();
        for a in 0..basis.len() {
            for b in 0..basis.len() {
                if a != b {
                    assert!(
                        m[[a, b]].norm() <= 1e-15,
                        "off-diagonal [{a},{b}] = {}",
                        m[[a, b]]
                    );
                } else {
                    let expect = -0.5e-3 * basis.state(a).qn.m() as f64;
                    assert_abs_diff_eq!(m[[a, a]].re, expect, epsilon = 1e-15);
                }
            }
        }
    }

    /// Brute-force selection pattern of the Landau-gauge H1 on the plateau.
    ///
    /// x p_y is parity-even and carries azimuthal harmonics e^{0, ±2iφ}, so
    /// its only nonzero elements are the L_z/2 diagonal plus Δm = ±2,
    /// Δl ∈ {0, ±2} elements between states of different energy (the
    /// commutator identity kills the degenerate ones).
    #[test]
    fn landau_gauge_matrix_selection_pattern() {
        let basis = basis3();
        let table = OperatorTable::build(&basis);
        let g = builtin_gauge(
            BuiltinGauge::MagneticLandau,
            &fig1_eps(1.0),
            &FieldParams::Magnetic { strength: 1e-3 },
        )
        .unwrap();
        let m = h1_matrix(&g, 2.0, &table, false).unwrap();
        let mut nonzero_offdiag = 0;
        for a in 0..basis.len() {
            for b in 0..basis.len() {
                let v = m[[a, b]].norm();
                if v <= 1e-12 {
                    continue;
                }
                let (qa, qb) = (basis.state(a).qn, basis.state(b).qn);
                if a == b {
                    assert_abs_diff_eq!(
                        m[[a, a]].re,
                        -0.5e-3 * qa.m() as f64,
                        epsilon = 1e-15
                    );
                    continue;
                }
                nonzero_offdiag += 1;
                let dm = (qa.m() - qb.m()).abs();
                let dl = (qa.l() as i32 - qb.l() as i32).abs();
                assert_eq!(dm, 2, "element {qa} <- {qb}");
                assert!(dl == 0 || dl == 2, "element {qa} <- {qb}");
                assert_ne!(qa.n(), qb.n(), "degenerate element {qa} <- {qb} = {v}");
            }
        }
        // e.g. (1,0,0) <-> (3,2,±2) survive
        assert!(nonzero_offdiag > 0);
        let v = matel_primitive(PrimitiveOperator::XPy, qn(1, 0, 0), qn(3, 2, 2), &basis).unwrap();
        assert!(v.norm() > 1e-3, "expected a clearly nonzero element, got {v}");
    }

    #[test]
    fn h1_linear_in_field_strength_without_a2() {
        let basis = basis3();
        let table = OperatorTable::build(&basis);
        let make = |eps: f64| {
            builtin_gauge(
                BuiltinGauge::MagneticLandau,
                &fig1_eps(1.0),
                &FieldParams::Magnetic { strength: eps },
            )
            .unwrap()
        };
        let t = 0.7;
        let m1 = h1_matrix(&make(1e-3), t, &table, false).unwrap();
        let m2 = h1_matrix(&make(2e-3), t, &table, false).unwrap();
        for (a, b) in m2.iter().zip(m1.iter()) {
            assert_abs_diff_eq!(a.re, 2.0 * b.re, epsilon = 1e-18);
            assert_abs_diff_eq!(a.im, 2.0 * b.im, epsilon = 1e-18);
        }

        // with A² on, the deviation from linearity is exactly the A² part
        let w1 = h1_matrix(&make(1e-3), t, &table, true).unwrap();
        let w2 = h1_matrix(&make(2e-3), t, &table, true).unwrap();
        let a2_part = &w1 - &m1;
        let deviation = &w2 - &(&m2 + &(&a2_part * C64::new(4.0, 0.0)));
        for c in deviation.iter() {
            assert!(c.norm() < 1e-20);
        }
    }

    #[test]
    fn hermiticity_of_h1_for_builtin_gauges_random_times() {
        let basis = basis3();
        let table = OperatorTable::build(&basis);
        let gauges = [
            builtin_gauge(
                BuiltinGauge::MagneticSymmetric,
                &fig1_eps(1.0),
                &FieldParams::Magnetic { strength: 1e-3 },
            )
            .unwrap(),
            builtin_gauge(
                BuiltinGauge::MagneticLandau,
                &fig1_eps(1.0),
                &FieldParams::Magnetic { strength: 1e-3 },
            )
            .unwrap(),
            builtin_gauge(
                BuiltinGauge::ElectricLength,
                &fig1_eps(1e-3),
                &FieldParams::Electric {
                    polarization: [0.3, -0.2, 1.0],
                },
            )
            .unwrap(),
            builtin_gauge(
                BuiltinGauge::ElectricVelocity,
                &fig1_eps(1e-3),
                &FieldParams::Electric {
                    polarization: [0.3, -0.2, 1.0],
                },
            )
            .unwrap(),
        ];
        for g in &gauges {
            for &t in &[0.3, 0.5, 1.7, 2.9, 3.6] {
                let m = h1_matrix(g, t, &table, true).unwrap();
                let mut worst: f64 = 0.0;
                for a in 0..basis.len() {
                    for b in 0..basis.len() {
                        worst = worst.max((m[[a, b]] - m[[b, a]].conj()).norm());
                    }
                }
                assert!(worst <= 1e-12, "{} at t={t}: {worst}", g.label());
            }
        }
    }

    #[test]
    fn commutator_identity_residuals() {
        let basis = basis3();
        let table = OperatorTable::build(&basis);
        for op in [
            PrimitiveOperator::X,
            PrimitiveOperator::Y,
            PrimitiveOperator::Z,
        ] {
            let report = commutator_identity_residual(op, &basis, &table).unwrap();
            assert!(report.max_residual <= 1e-8, "{op}: {}", report.max_residual);
            // exact eigenstates: degenerate gradient elements vanish too
            assert!(
                report.max_degenerate_gradient_element <= 1e-10,
                "{op}: {}",
                report.max_degenerate_gradient_element
            );
            assert!(report.degenerate_pairs > 0);
        }

        let id = commutator_identity_residual(PrimitiveOperator::Identity, &basis, &table)
            .unwrap();
        assert_eq!(id.max_residual, 0.0);

        assert!(commutator_identity_residual(PrimitiveOperator::Px, &basis, &table).is_err());
    }

    #[test]
    fn unsupported_gauge_monomials_are_rejected() {
        use crate::gauge::{GaugeChoice, SpacePoly, TimeCoeff, TimeDep};
        use std::sync::Arc;
        let env = Arc::new(fig1_eps(1.0));
        // A_x ∝ z: p_x ∗ z is outside the primitive algebra
        let ax = SpacePoly::zero().with_term(
            Monomial::Z,
            TimeCoeff::single(1.0, TimeDep::Value, Arc::clone(&env)),
        );
        let g = GaugeChoice::new(
            "bad",
            [ax, SpacePoly::zero(), SpacePoly::zero()],
            SpacePoly::zero(),
            env,
        )
        .unwrap();
        assert!(matches!(h1_expansion(&g, false), Err(Error::Config(_))));
    }
}
