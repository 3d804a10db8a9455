//! Electromagnetic perturbations as explicit gauge pairs `(A(q,t), Φ(q,t))`.
//!
//! Both potentials are held symbolically: spatial polynomials of degree at
//! most two whose coefficients are closed-form functions of time built from a
//! pulse envelope. That makes gradients, curls and time derivatives exact, so
//! the gauge-invariance of the physical fields can be checked to rounding and
//! the perturbing Hamiltonian can be mapped exactly onto a finite operator
//! algebra.

use std::sync::Arc;

use crate::envelope::Envelope;
use crate::error::{Error, Result};

/// Spatial monomials up to total degree two. `XZ` and `YZ` are representable
/// (gauge transforms may produce them) but lie outside the operator algebra
/// of the matrix-element module, which rejects them at expansion time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Monomial {
    One,
    X,
    Y,
    Z,
    XX,
    YY,
    ZZ,
    XY,
    XZ,
    YZ,
}

impl Monomial {
    pub fn eval(&self, q: [f64; 3]) -> f64 {
        let [x, y, z] = q;
        match self {
            Monomial::One => 1.0,
            Monomial::X => x,
            Monomial::Y => y,
            Monomial::Z => z,
            Monomial::XX => x * x,
            Monomial::YY => y * y,
            Monomial::ZZ => z * z,
            Monomial::XY => x * y,
            Monomial::XZ => x * z,
            Monomial::YZ => y * z,
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            Monomial::One => 0,
            Monomial::X | Monomial::Y | Monomial::Z => 1,
            _ => 2,
        }
    }

    /// Partial derivative along `axis` (0 = x, 1 = y, 2 = z) as an optional
    /// `(factor, monomial)` pair.
    pub fn partial(&self, axis: usize) -> Option<(f64, Monomial)> {
        use Monomial::*;
        let table: [[Option<(f64, Monomial)>; 3]; 10] = [
            /* One */ [None, None, None],
            /* X  */ [Some((1.0, One)), None, None],
            /* Y  */ [None, Some((1.0, One)), None],
            /* Z  */ [None, None, Some((1.0, One))],
            /* XX */ [Some((2.0, X)), None, None],
            /* YY */ [None, Some((2.0, Y)), None],
            /* ZZ */ [None, None, Some((2.0, Z))],
            /* XY */ [Some((1.0, Y)), Some((1.0, X)), None],
            /* XZ */ [Some((1.0, Z)), None, Some((1.0, X))],
            /* YZ */ [None, Some((1.0, Z)), Some((1.0, Y))],
        ];
        let row = match self {
            One => 0,
            X => 1,
            Y => 2,
            Z => 3,
            XX => 4,
            YY => 5,
            ZZ => 6,
            XY => 7,
            XZ => 8,
            YZ => 9,
        };
        table[row][axis]
    }
}

pub const ALL_MONOMIALS: [Monomial; 10] = [
    Monomial::One,
    Monomial::X,
    Monomial::Y,
    Monomial::Z,
    Monomial::XX,
    Monomial::YY,
    Monomial::ZZ,
    Monomial::XY,
    Monomial::XZ,
    Monomial::YZ,
];

/// Closed-form time profiles derived from an envelope `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TimeDep {
    /// Constant 1.
    One,
    /// `T(t)`.
    Value,
    /// `dT/dt`.
    Deriv,
    /// `d²T/dt²`.
    Deriv2,
    /// `∫_{-inf}^t T dτ`.
    Integral,
}

#[derive(Debug, Clone)]
struct Term {
    scale: f64,
    dep: TimeDep,
    env: Arc<Envelope>,
}

/// A real-valued function of time: a linear combination of envelope-derived
/// profiles. Closed under addition, scaling and (one level of)
/// differentiation.
#[derive(Debug, Clone, Default)]
pub struct TimeCoeff {
    terms: Vec<Term>,
}

impl TimeCoeff {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(scale: f64, dep: TimeDep, env: Arc<Envelope>) -> Self {
        let mut c = Self::default();
        c.push(scale, dep, env);
        c
    }

    fn push(&mut self, scale: f64, dep: TimeDep, env: Arc<Envelope>) {
        if scale == 0.0 {
            return;
        }
        // combine like terms so gauge round-trips cancel exactly
        let mut combined = false;
        for t in &mut self.terms {
            if t.dep == dep && *t.env == *env {
                t.scale += scale;
                combined = true;
                break;
            }
        }
        if combined {
            self.terms.retain(|u| u.scale != 0.0);
        } else {
            self.terms.push(Term { scale, dep, env });
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for t in &other.terms {
            out.push(t.scale, t.dep, Arc::clone(&t.env));
        }
        out
    }

    pub fn scaled(&self, factor: f64) -> Self {
        if factor == 0.0 {
            return Self::default();
        }
        let mut out = self.clone();
        for t in &mut out.terms {
            t.scale *= factor;
        }
        out
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| {
                term.scale
                    * match term.dep {
                        TimeDep::One => 1.0,
                        TimeDep::Value => term.env.value(t),
                        TimeDep::Deriv => term.env.deriv(t),
                        TimeDep::Deriv2 => term.env.deriv2(t),
                        TimeDep::Integral => term.env.integral(t),
                    }
            })
            .sum()
    }

    /// Time derivative within the profile algebra.
    pub fn deriv(&self) -> Result<Self> {
        let mut out = Self::default();
        for term in &self.terms {
            match term.dep {
                TimeDep::One => {}
                TimeDep::Value => out.push(term.scale, TimeDep::Deriv, Arc::clone(&term.env)),
                TimeDep::Deriv => out.push(term.scale, TimeDep::Deriv2, Arc::clone(&term.env)),
                TimeDep::Deriv2 => {
                    return Err(Error::Config(
                        "time profile d²T/dt² cannot be differentiated again in the \
                         supported algebra"
                            .into(),
                    ))
                }
                TimeDep::Integral => out.push(term.scale, TimeDep::Value, Arc::clone(&term.env)),
            }
        }
        Ok(out)
    }

    /// `∫_{t0}^{t1}` of this profile, analytic term by term. The `Integral`
    /// profile (whose antiderivative leaves the algebra) falls back to a
    /// fine Simpson rule.
    pub fn integrate_window(&self, t0: f64, t1: f64) -> f64 {
        use crate::quadrature::segmented_simpson;
        use num_complex::Complex64 as C64;
        self.terms
            .iter()
            .map(|term| {
                term.scale
                    * match term.dep {
                        TimeDep::One => t1 - t0,
                        TimeDep::Value => term.env.integral(t1) - term.env.integral(t0),
                        TimeDep::Deriv => term.env.value(t1) - term.env.value(t0),
                        TimeDep::Deriv2 => term.env.deriv(t1) - term.env.deriv(t0),
                        TimeDep::Integral => {
                            let env = Arc::clone(&term.env);
                            let bps = env.breakpoints();
                            segmented_simpson(
                                |t| C64::new(env.integral(t), 0.0),
                                t0,
                                t1,
                                &bps,
                                (t1 - t0) / 2000.0,
                            )
                            .re
                        }
                    }
            })
            .sum()
    }

    pub fn envelopes(&self) -> impl Iterator<Item = &Arc<Envelope>> {
        self.terms.iter().map(|t| &t.env)
    }

    fn differentiable(&self) -> bool {
        self.terms.iter().all(|t| t.dep != TimeDep::Deriv2)
    }
}

/// A scalar field `f(q, t)`: spatial polynomial of degree at most two with
/// time-dependent coefficients.
#[derive(Debug, Clone, Default)]
pub struct SpacePoly {
    coeffs: std::collections::BTreeMap<Monomial, TimeCoeff>,
}

impl SpacePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn with_term(mut self, mono: Monomial, coeff: TimeCoeff) -> Self {
        self.add_term(mono, coeff);
        self
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: TimeCoeff) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(mono).or_default();
        *entry = entry.add(&coeff);
        if entry.is_zero() {
            self.coeffs.remove(&mono);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (mono, coeff) in &other.coeffs {
            out.add_term(*mono, coeff.clone());
        }
        out
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = Self::default();
        for (mono, coeff) in &self.coeffs {
            out.add_term(*mono, coeff.scaled(factor));
        }
        out
    }

    pub fn eval(&self, q: [f64; 3], t: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(mono, coeff)| mono.eval(q) * coeff.eval(t))
            .sum()
    }

    /// Spatial partial derivative along `axis`.
    pub fn partial(&self, axis: usize) -> Self {
        let mut out = Self::default();
        for (mono, coeff) in &self.coeffs {
            if let Some((factor, dmono)) = mono.partial(axis) {
                out.add_term(dmono, coeff.scaled(factor));
            }
        }
        out
    }

    pub fn gradient(&self) -> [Self; 3] {
        [self.partial(0), self.partial(1), self.partial(2)]
    }

    pub fn time_derivative(&self) -> Result<Self> {
        let mut out = Self::default();
        for (mono, coeff) in &self.coeffs {
            out.add_term(*mono, coeff.deriv()?);
        }
        Ok(out)
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &TimeCoeff)> {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, mono: Monomial) -> TimeCoeff {
        self.coeffs.get(&mono).cloned().unwrap_or_default()
    }

    fn differentiable(&self) -> bool {
        self.coeffs.values().all(|c| c.differentiable())
    }
}

/// A gauge function `f(q, t)` for the replacement
/// `A -> A + ∇f`, `Φ -> Φ - ∂_t f`.
#[derive(Debug, Clone)]
pub struct GaugeFunction {
    poly: SpacePoly,
}

impl GaugeFunction {
    /// The polynomial must carry time coefficients that can be
    /// differentiated once (the transform needs `∂_t f`).
    pub fn new(poly: SpacePoly) -> Result<Self> {
        if !poly.differentiable() {
            return Err(Error::Config(
                "gauge function time coefficients must be differentiable".into(),
            ));
        }
        Ok(Self { poly })
    }

    pub fn poly(&self) -> &SpacePoly {
        &self.poly
    }
}

/// The built-in gauge kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinGauge {
    /// Electric gauge I (length): `A = 0`, `Φ = -E(t)·q`.
    ElectricLength,
    /// Electric gauge II (velocity): `A = -∫E dτ`, `Φ = 0`.
    ElectricVelocity,
    /// Magnetic gauge I (symmetric): `A = ε T(t) (-y/2, x/2, 0)`.
    MagneticSymmetric,
    /// Magnetic gauge II (Landau): `A = ε T(t) (0, x, 0)`.
    MagneticLandau,
}

/// Field parameters for [`builtin_gauge`]: electric kinds take a uniform
/// polarization vector (its magnitude multiplies the field strength),
/// magnetic kinds a strength. Both are additionally scaled by the envelope's
/// `amplitude`.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldParams {
    Electric { polarization: [f64; 3] },
    Magnetic { strength: f64 },
}

/// A concrete `(A, Φ)` pair built from an envelope. Immutable; shareable
/// across threads.
#[derive(Debug, Clone)]
pub struct GaugeChoice {
    label: String,
    a_field: [SpacePoly; 3],
    phi: SpacePoly,
    envelope: Arc<Envelope>,
}

impl GaugeChoice {
    /// Assemble a gauge pair from raw polynomials. The vector potential is
    /// restricted to degree one per component and the scalar potential to
    /// degree two; the potentials' time coefficients must support one time
    /// derivative (needed by `physical_fields`).
    pub fn new(
        label: impl Into<String>,
        a_field: [SpacePoly; 3],
        phi: SpacePoly,
        envelope: Arc<Envelope>,
    ) -> Result<Self> {
        for (i, comp) in a_field.iter().enumerate() {
            if comp.degree() > 1 {
                return Err(Error::Config(format!(
                    "vector potential component {i} exceeds spatial degree 1"
                )));
            }
            if !comp.differentiable() {
                return Err(Error::Config(
                    "vector potential time coefficients must be differentiable".into(),
                ));
            }
        }
        if phi.degree() > 2 {
            return Err(Error::Config("scalar potential exceeds spatial degree 2".into()));
        }
        Ok(Self {
            label: label.into(),
            a_field,
            phi,
            envelope,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn envelope(&self) -> &Arc<Envelope> {
        &self.envelope
    }

    pub fn vector_potential_poly(&self) -> &[SpacePoly; 3] {
        &self.a_field
    }

    pub fn scalar_potential_poly(&self) -> &SpacePoly {
        &self.phi
    }

    pub fn vector_potential(&self, q: [f64; 3], t: f64) -> [f64; 3] {
        [
            self.a_field[0].eval(q, t),
            self.a_field[1].eval(q, t),
            self.a_field[2].eval(q, t),
        ]
    }

    pub fn scalar_potential(&self, q: [f64; 3], t: f64) -> f64 {
        self.phi.eval(q, t)
    }

    /// `E = -∇Φ - ∂_t A`, `B = ∇×A`, both from the exact polynomial
    /// representation.
    pub fn physical_fields(&self, q: [f64; 3], t: f64) -> ([f64; 3], [f64; 3]) {
        let grad_phi = self.phi.gradient();
        // construction guarantees differentiability
        let dt_a: Vec<SpacePoly> = self
            .a_field
            .iter()
            .map(|c| c.time_derivative().expect("validated at construction"))
            .collect();
        let e = [
            -grad_phi[0].eval(q, t) - dt_a[0].eval(q, t),
            -grad_phi[1].eval(q, t) - dt_a[1].eval(q, t),
            -grad_phi[2].eval(q, t) - dt_a[2].eval(q, t),
        ];
        let b = [
            self.a_field[2].partial(1).eval(q, t) - self.a_field[1].partial(2).eval(q, t),
            self.a_field[0].partial(2).eval(q, t) - self.a_field[2].partial(0).eval(q, t),
            self.a_field[1].partial(0).eval(q, t) - self.a_field[0].partial(1).eval(q, t),
        ];
        (e, b)
    }

    /// Apply the gauge replacement `A' = A + ∇f`, `Φ' = Φ - ∂_t f`.
    pub fn transformed(&self, f: &GaugeFunction, label: impl Into<String>) -> Result<Self> {
        let grad = f.poly.gradient();
        let a_field = [
            self.a_field[0].add(&grad[0]),
            self.a_field[1].add(&grad[1]),
            self.a_field[2].add(&grad[2]),
        ];
        let phi = self.phi.add(&f.poly.time_derivative()?.scaled(-1.0));
        Self::new(label, a_field, phi, Arc::clone(&self.envelope))
    }

    /// Union of the support intervals of every envelope referenced by the
    /// potentials (at minimum, the primary envelope's).
    pub fn support(&self) -> (f64, f64) {
        let (mut lo, mut hi) = self.envelope.support();
        for poly in self.a_field.iter().chain(std::iter::once(&self.phi)) {
            for (_, coeff) in poly.terms() {
                for env in coeff.envelopes() {
                    let (a, b) = env.support();
                    lo = lo.min(a);
                    hi = hi.max(b);
                }
            }
        }
        (lo, hi)
    }

    /// Merged breakpoints of every referenced envelope.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut bps = self.envelope.breakpoints();
        for poly in self.a_field.iter().chain(std::iter::once(&self.phi)) {
            for (_, coeff) in poly.terms() {
                for env in coeff.envelopes() {
                    bps.extend(env.breakpoints());
                }
            }
        }
        bps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        bps.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        bps
    }
}

/// Construct one of the paper-standard gauge pairs.
pub fn builtin_gauge(
    kind: BuiltinGauge,
    envelope: &Envelope,
    params: &FieldParams,
) -> Result<GaugeChoice> {
    let env = Arc::new(envelope.clone());
    let amp = envelope.amplitude;
    match (kind, params) {
        (BuiltinGauge::ElectricLength, FieldParams::Electric { polarization }) => {
            // Φ = -E(t)·q for the spatially uniform field E(t) = ε T(t) pol
            let mut phi = SpacePoly::zero();
            for (axis, mono) in [Monomial::X, Monomial::Y, Monomial::Z].iter().enumerate() {
                phi.add_term(
                    *mono,
                    TimeCoeff::single(-amp * polarization[axis], TimeDep::Value, Arc::clone(&env)),
                );
            }
            GaugeChoice::new(
                "electric-length",
                [SpacePoly::zero(), SpacePoly::zero(), SpacePoly::zero()],
                phi,
                env,
            )
        }
        (BuiltinGauge::ElectricVelocity, FieldParams::Electric { polarization }) => {
            // A = -∫E dτ (closed form), Φ = 0
            let mut a = [SpacePoly::zero(), SpacePoly::zero(), SpacePoly::zero()];
            for (axis, comp) in a.iter_mut().enumerate() {
                comp.add_term(
                    Monomial::One,
                    TimeCoeff::single(
                        -amp * polarization[axis],
                        TimeDep::Integral,
                        Arc::clone(&env),
                    ),
                );
            }
            GaugeChoice::new("electric-velocity", a, SpacePoly::zero(), env)
        }
        (BuiltinGauge::MagneticSymmetric, FieldParams::Magnetic { strength }) => {
            let eps = amp * strength;
            let ax = SpacePoly::zero().with_term(
                Monomial::Y,
                TimeCoeff::single(-0.5 * eps, TimeDep::Value, Arc::clone(&env)),
            );
            let ay = SpacePoly::zero().with_term(
                Monomial::X,
                TimeCoeff::single(0.5 * eps, TimeDep::Value, Arc::clone(&env)),
            );
            GaugeChoice::new(
                "magnetic-symmetric",
                [ax, ay, SpacePoly::zero()],
                SpacePoly::zero(),
                env,
            )
        }
        (BuiltinGauge::MagneticLandau, FieldParams::Magnetic { strength }) => {
            let eps = amp * strength;
            let ay = SpacePoly::zero().with_term(
                Monomial::X,
                TimeCoeff::single(eps, TimeDep::Value, Arc::clone(&env)),
            );
            GaugeChoice::new(
                "magnetic-landau",
                [SpacePoly::zero(), ay, SpacePoly::zero()],
                SpacePoly::zero(),
                env,
            )
        }
        _ => Err(Error::Config(
            "field parameters do not match the gauge kind (electric kinds take a \
             polarization, magnetic kinds a strength)"
                .into(),
        )),
    }
}

/// Result of the preferential-gauge checks.
#[derive(Debug, Clone)]
pub struct PreferentialDiagnostics {
    /// `sup_q |A| <= 1e-12` on the reference box before and after the pulse.
    pub a_vanishes_at_infinity: bool,
    /// Time integral of the spatially uniform part of `E` across the pulse.
    pub electric_time_average: [f64; 3],
    pub sup_a_before: f64,
    pub sup_a_after: f64,
}

const PREFERENTIAL_TOLERANCE: f64 = 1e-12;
const REFERENCE_BOX_HALF_WIDTH: f64 = 10.0;

/// Check the boundary behaviour of `A` and the time average of the uniform
/// electric field component.
pub fn preferential_diagnostics(g: &GaugeChoice) -> PreferentialDiagnostics {
    let (lo, hi) = g.support();
    let margin = 0.05 * (hi - lo).max(1.0);
    let t_before = lo - margin;
    let t_after = hi + margin;

    let w = REFERENCE_BOX_HALF_WIDTH;
    let mut samples = vec![[0.0, 0.0, 0.0]];
    for &sx in &[-w, w] {
        for &sy in &[-w, w] {
            for &sz in &[-w, w] {
                samples.push([sx, sy, sz]);
            }
        }
    }
    let sup_at = |t: f64| -> f64 {
        samples
            .iter()
            .map(|&q| {
                let a = g.vector_potential(q, t);
                (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
            })
            .fold(0.0, f64::max)
    };
    let sup_a_before = sup_at(t_before);
    let sup_a_after = sup_at(t_after);

    // uniform component of E = -∂_t A - ∇Φ, integrated analytically
    let mut average = [0.0; 3];
    for axis in 0..3 {
        let mut coeff = g.a_field[axis]
            .coeff(Monomial::One)
            .deriv()
            .expect("validated at construction")
            .scaled(-1.0);
        coeff = coeff.add(&g.phi.partial(axis).coeff(Monomial::One).scaled(-1.0));
        average[axis] = coeff.integrate_window(t_before, t_after);
    }

    PreferentialDiagnostics {
        a_vanishes_at_infinity: sup_a_before.max(sup_a_after) <= PREFERENTIAL_TOLERANCE,
        electric_time_average: average,
        sup_a_before,
        sup_a_after,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::EnvelopeKind;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn fig1() -> Envelope {
        Envelope::trapezoid(0.0, 1.0, 3.0, 4.0).unwrap()
    }

    fn zero_avg_sine() -> Envelope {
        Envelope::new(
            EnvelopeKind::ZeroAverageSine {
                t1: 0.0,
                t2: 4.0,
                cycles: 1,
            },
            1.0,
        )
        .unwrap()
    }

    fn gaussian() -> Envelope {
        Envelope::new(
            EnvelopeKind::Gaussian {
                center: 2.0,
                sigma: 0.5,
            },
            1.0,
        )
        .unwrap()
    }

    const EPS: f64 = 1e-3;

    fn magnetic(kind: BuiltinGauge) -> GaugeChoice {
        builtin_gauge(kind, &fig1(), &FieldParams::Magnetic { strength: EPS }).unwrap()
    }

    #[test]
    fn symmetric_gauge_on_plateau() {
        let g = magnetic(BuiltinGauge::MagneticSymmetric);
        let q = [1.2, -0.7, 0.4];
        let a = g.vector_potential(q, 2.0);
        assert_abs_diff_eq!(a[0], -EPS * q[1] / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a[1], EPS * q[0] / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a[2], 0.0);
    }

    #[test]
    fn landau_gauge_on_plateau() {
        let g = magnetic(BuiltinGauge::MagneticLandau);
        let q = [1.2, -0.7, 0.4];
        let a = g.vector_potential(q, 2.0);
        assert_abs_diff_eq!(a[0], 0.0);
        assert_abs_diff_eq!(a[1], EPS * q[0], epsilon = 1e-15);
        assert_abs_diff_eq!(a[2], 0.0);
    }

    #[test]
    fn magnetic_field_is_pulse_along_z() {
        for kind in [BuiltinGauge::MagneticSymmetric, BuiltinGauge::MagneticLandau] {
            let g = magnetic(kind);
            for &t in &[-0.5, 0.5, 2.0, 3.5, 4.5] {
                let (_, b) = g.physical_fields([0.9, 1.1, -0.3], t);
                assert_abs_diff_eq!(b[0], 0.0);
                assert_abs_diff_eq!(b[1], 0.0);
                assert_abs_diff_eq!(b[2], EPS * fig1().value(t), epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn induced_electric_fields_during_ramp() {
        let q = [0.8, -1.3, 0.2];
        let t = 0.5; // up-ramp, dT/dt = 1
        let gs = magnetic(BuiltinGauge::MagneticSymmetric);
        let (e, _) = gs.physical_fields(q, t);
        assert_abs_diff_eq!(e[0], EPS * q[1] / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e[1], -EPS * q[0] / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e[2], 0.0);

        let gl = magnetic(BuiltinGauge::MagneticLandau);
        let (el, _) = gl.physical_fields(q, t);
        assert_abs_diff_eq!(el[0], 0.0);
        assert_abs_diff_eq!(el[1], -EPS * q[0], epsilon = 1e-15);

        // the two same-B gauges differ by eps dT/dt (y/2, x/2, 0) on ramps
        assert_abs_diff_eq!(e[0] - el[0], EPS * q[1] / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e[1] - el[1], EPS * q[0] / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn landau_plateau_has_no_electric_field() {
        let g = magnetic(BuiltinGauge::MagneticLandau);
        let (e, _) = g.physical_fields([2.0, 1.0, 1.0], 2.0);
        assert_abs_diff_eq!(e[0], 0.0);
        assert_abs_diff_eq!(e[1], 0.0);
        assert_abs_diff_eq!(e[2], 0.0);
    }

    #[test]
    fn electric_gauges_share_physical_fields() {
        let env = zero_avg_sine().with_amplitude(EPS);
        let pol = FieldParams::Electric {
            polarization: [0.0, 0.0, 1.0],
        };
        let g1 = builtin_gauge(BuiltinGauge::ElectricLength, &env, &pol).unwrap();
        let g2 = builtin_gauge(BuiltinGauge::ElectricVelocity, &env, &pol).unwrap();
        for &t in &[-0.3, 0.7, 1.9, 3.2, 4.4] {
            for &q in &[[0.0, 0.0, 0.0], [1.0, -2.0, 0.5]] {
                let (e1, b1) = g1.physical_fields(q, t);
                let (e2, b2) = g2.physical_fields(q, t);
                for i in 0..3 {
                    assert_abs_diff_eq!(e1[i], e2[i], epsilon = 1e-14);
                    assert_abs_diff_eq!(b1[i], 0.0);
                    assert_abs_diff_eq!(b2[i], 0.0);
                }
            }
        }
    }

    #[test]
    fn length_to_velocity_via_gauge_function() {
        // f = q · A^{II}(t) maps the length gauge onto the velocity gauge
        let env = Arc::new(zero_avg_sine().with_amplitude(EPS));
        let pol = FieldParams::Electric {
            polarization: [0.0, 0.0, 1.0],
        };
        let g1 = builtin_gauge(BuiltinGauge::ElectricLength, &env, &pol).unwrap();
        let g2 = builtin_gauge(BuiltinGauge::ElectricVelocity, &env, &pol).unwrap();
        let f = GaugeFunction::new(SpacePoly::zero().with_term(
            Monomial::Z,
            TimeCoeff::single(-EPS, TimeDep::Integral, Arc::clone(&env)),
        ))
        .unwrap();
        let mapped = g1.transformed(&f, "mapped").unwrap();
        for &t in &[0.4, 1.3, 2.6, 3.9] {
            for &q in &[[0.3, 0.1, -0.9], [0.0, 0.0, 2.0]] {
                let a_m = mapped.vector_potential(q, t);
                let a_2 = g2.vector_potential(q, t);
                for i in 0..3 {
                    assert_abs_diff_eq!(a_m[i], a_2[i], epsilon = 1e-15);
                }
                assert_abs_diff_eq!(
                    mapped.scalar_potential(q, t),
                    g2.scalar_potential(q, t),
                    epsilon = 1e-15
                );
            }
        }
    }

    #[test]
    fn identity_transform_is_identity() {
        let g = magnetic(BuiltinGauge::MagneticSymmetric);
        let f = GaugeFunction::new(SpacePoly::zero()).unwrap();
        let g2 = g.transformed(&f, "same").unwrap();
        for &t in &[0.5, 2.0] {
            let q = [1.0, 2.0, 3.0];
            assert_eq!(g.vector_potential(q, t), g2.vector_potential(q, t));
            assert_eq!(g.scalar_potential(q, t), g2.scalar_potential(q, t));
        }
    }

    #[test]
    fn preferential_diagnostics_builtin_cases() {
        // magnetic trapezoid: A vanishes outside the pulse
        let d = preferential_diagnostics(&magnetic(BuiltinGauge::MagneticSymmetric));
        assert!(d.a_vanishes_at_infinity);

        // velocity gauge with zero-average pulse: A returns to zero and the
        // field average is zero
        let env = zero_avg_sine().with_amplitude(EPS);
        let pol = FieldParams::Electric {
            polarization: [0.0, 0.0, 1.0],
        };
        let g = builtin_gauge(BuiltinGauge::ElectricVelocity, &env, &pol).unwrap();
        let d = preferential_diagnostics(&g);
        assert!(d.a_vanishes_at_infinity);
        assert_abs_diff_eq!(d.electric_time_average[2], 0.0, epsilon = 1e-12);

        // velocity gauge with a single-sign pulse: A(+inf) != 0
        let env = gaussian().with_amplitude(EPS);
        let g = builtin_gauge(BuiltinGauge::ElectricVelocity, &env, &pol).unwrap();
        let d = preferential_diagnostics(&g);
        assert!(!d.a_vanishes_at_infinity);
        assert!(d.electric_time_average[2].abs() > 1e-6);
    }

    #[test]
    fn field_params_mismatch_is_config_error() {
        let err = builtin_gauge(
            BuiltinGauge::MagneticSymmetric,
            &fig1(),
            &FieldParams::Electric {
                polarization: [0.0, 0.0, 1.0],
            },
        );
        assert!(matches!(err, Err(Error::Config(_))));
    }

    prop_compose! {
        fn arb_gauge_function(env: Arc<Envelope>)(
            coeffs in proptest::collection::vec(-2.0f64..2.0, 10),
            deps in proptest::collection::vec(0usize..3, 10),
        ) -> GaugeFunction {
            let mut poly = SpacePoly::zero();
            for ((mono, scale), dep_ix) in ALL_MONOMIALS.iter().zip(coeffs).zip(deps) {
                let dep = [TimeDep::One, TimeDep::Value, TimeDep::Integral][dep_ix];
                poly.add_term(*mono, TimeCoeff::single(scale, dep, Arc::clone(&env)));
            }
            GaugeFunction::new(poly).unwrap()
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn gauge_transform_preserves_physical_fields(
            f in arb_gauge_function(Arc::new(Envelope::trapezoid(0.0, 1.0, 3.0, 4.0).unwrap())),
            qx in -3.0f64..3.0, qy in -3.0f64..3.0, qz in -3.0f64..3.0,
            t in -1.0f64..5.0,
        ) {
            for g in [
                magnetic(BuiltinGauge::MagneticSymmetric),
                magnetic(BuiltinGauge::MagneticLandau),
                builtin_gauge(
                    BuiltinGauge::ElectricVelocity,
                    &zero_avg_sine().with_amplitude(EPS),
                    &FieldParams::Electric { polarization: [0.3, 0.0, 1.0] },
                ).unwrap(),
            ] {
                let transformed = g.transformed(&f, "t").unwrap();
                let q = [qx, qy, qz];
                let (e1, b1) = g.physical_fields(q, t);
                let (e2, b2) = transformed.physical_fields(q, t);
                for i in 0..3 {
                    prop_assert!((e1[i] - e2[i]).abs() <= 1e-12,
                        "E mismatch: {} vs {}", e1[i], e2[i]);
                    prop_assert!((b1[i] - b2[i]).abs() <= 1e-12,
                        "B mismatch: {} vs {}", b1[i], b2[i]);
                }
            }
        }
    }
}
