//! Numerical toolkit for quantum transition probabilities of a hydrogen-like
//! atom under time-dependent electromagnetic perturbations in explicit gauge
//! choices, with an exact truncated-basis propagator and a classical-limit
//! integrator as cross-checks.
//!
//! Everything is expressed in Hartree atomic units (ħ = m = Q = 1, nuclear
//! charge `Z`): energies in Hartree, lengths in Bohr radii, times in atomic
//! time units.
//!
//! The crate is organized around the pipeline
//!
//! * [`basis`] — the truncated hydrogenic bound-state basis;
//! * [`envelope`] / [`gauge`] — pulse shapes and `(A, Φ)` gauge pairs held
//!   symbolically, with gauge transformations and the preferential-gauge
//!   diagnostics;
//! * [`operators`] — the perturbing Hamiltonian mapped onto a cached
//!   primitive-operator algebra over the basis;
//! * [`perturbation`] — first-order transition amplitudes (direct and
//!   integration-by-parts routes) and gauge-equivalence reports;
//! * [`oracle`] — the exact coupled-equation propagator on the truncated
//!   basis, used as ground truth;
//! * [`classical`] — the classical-limit Kepler electron under the same
//!   pulses.

pub mod basis;
pub mod classical;
pub mod envelope;
pub mod error;
pub mod gauge;
pub mod harmonics;
pub mod operators;
pub mod oracle;
pub mod perturbation;
pub mod quadrature;

pub use basis::{Basis, BasisSpec, EigenState, QuantumNumbers};
pub use envelope::{Envelope, EnvelopeKind};
pub use error::{Error, Result};
pub use gauge::{
    builtin_gauge, preferential_diagnostics, BuiltinGauge, FieldParams, GaugeChoice,
    GaugeFunction, Monomial, SpacePoly, TimeCoeff, TimeDep,
};
pub use operators::{
    commutator_identity_residual, h1_expansion, h1_matrix, matel_primitive, OperatorExpansion,
    OperatorTable, PrimitiveOperator, DEGENERACY_THRESHOLD,
};
