//! Pulse envelopes: the trapezoid turn-on/plateau/turn-off profile, a C¹
//! smoothed variant, a single-sign Gaussian, and a zero-average sine burst.
//!
//! Every envelope exposes its value, first and second time derivatives, and
//! the running integral `∫_{-inf}^t T dτ` in closed form. The closed-form
//! integral is what the velocity-type gauges are built from, so no quadrature
//! error enters the gauge-equivalence comparisons.

use crate::error::{Error, Result};

/// Envelope kind plus its shape parameters. Times are in atomic units.
#[derive(Debug, Clone, PartialEq)]
pub enum EnvelopeKind {
    /// Piecewise-linear: zero before `t1`, linear rise to 1 on `[t1, t1p]`,
    /// plateau 1 on `[t1p, t2m]`, linear fall to zero on `[t2m, t2]`.
    Trapezoid { t1: f64, t1p: f64, t2m: f64, t2: f64 },
    /// Same knots as `Trapezoid` but with C¹ smoothstep ramps.
    SmoothTrapezoid { t1: f64, t1p: f64, t2m: f64, t2: f64 },
    /// `exp(-(t-center)^2 / (2 sigma^2))`; single-sign, nonzero time average.
    Gaussian { center: f64, sigma: f64 },
    /// `sin(2π k (t-t1)/(t2-t1))` on `[t1, t2]`, zero outside. An integer
    /// number of cycles makes the time average exactly zero.
    ZeroAverageSine { t1: f64, t2: f64, cycles: u32 },
}

/// A pulse envelope with an overall amplitude scale.
///
/// The shape `value(t)` is normalized (plateau height 1 for the trapezoids,
/// peak 1 for the Gaussian and sine); `amplitude` is carried as the field
/// strength scale that gauge constructors multiply in.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub kind: EnvelopeKind,
    pub amplitude: f64,
}

/// How many standard deviations of the Gaussian are treated as its support
/// for windowing purposes. The neglected tail mass is below 1e-15.
const GAUSSIAN_SUPPORT_SIGMAS: f64 = 8.0;

fn check_trapezoid_times(t1: f64, t1p: f64, t2m: f64, t2: f64) -> Result<()> {
    if !(t1 < t1p && t1p <= t2m && t2m < t2) {
        return Err(Error::Config(format!(
            "trapezoid times must satisfy t1 < t1+ <= t2- < t2, got {t1}, {t1p}, {t2m}, {t2}"
        )));
    }
    Ok(())
}

/// Smoothstep `s(x) = 3x^2 - 2x^3` on `[0, 1]`.
fn smoothstep(x: f64) -> f64 {
    x * x * (3.0 - 2.0 * x)
}

fn smoothstep_deriv(x: f64) -> f64 {
    6.0 * x * (1.0 - x)
}

fn smoothstep_deriv2(x: f64) -> f64 {
    6.0 - 12.0 * x
}

/// `∫_0^x s(u) du = x^3 - x^4/2`.
fn smoothstep_integral(x: f64) -> f64 {
    x * x * x * (1.0 - 0.5 * x)
}

impl Envelope {
    pub fn new(kind: EnvelopeKind, amplitude: f64) -> Result<Self> {
        if !amplitude.is_finite() {
            return Err(Error::Config("envelope amplitude must be finite".into()));
        }
        match &kind {
            EnvelopeKind::Trapezoid { t1, t1p, t2m, t2 }
            | EnvelopeKind::SmoothTrapezoid { t1, t1p, t2m, t2 } => {
                check_trapezoid_times(*t1, *t1p, *t2m, *t2)?;
            }
            EnvelopeKind::Gaussian { sigma, .. } => {
                if !(*sigma > 0.0) {
                    return Err(Error::Config("gaussian sigma must be positive".into()));
                }
            }
            EnvelopeKind::ZeroAverageSine { t1, t2, cycles } => {
                if !(t2 > t1) {
                    return Err(Error::Config("sine burst needs t2 > t1".into()));
                }
                if *cycles == 0 {
                    return Err(Error::Config("sine burst needs at least one cycle".into()));
                }
            }
        }
        Ok(Self { kind, amplitude })
    }

    pub fn trapezoid(t1: f64, t1p: f64, t2m: f64, t2: f64) -> Result<Self> {
        Self::new(EnvelopeKind::Trapezoid { t1, t1p, t2m, t2 }, 1.0)
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    /// Normalized envelope value `T(t)`.
    pub fn value(&self, t: f64) -> f64 {
        match self.kind {
            EnvelopeKind::Trapezoid { t1, t1p, t2m, t2 } => {
                if t <= t1 || t >= t2 {
                    0.0
                } else if t < t1p {
                    (t - t1) / (t1p - t1)
                } else if t <= t2m {
                    1.0
                } else {
                    (t2 - t) / (t2 - t2m)
                }
            }
            EnvelopeKind::SmoothTrapezoid { t1, t1p, t2m, t2 } => {
                if t <= t1 || t >= t2 {
                    0.0
                } else if t < t1p {
                    smoothstep((t - t1) / (t1p - t1))
                } else if t <= t2m {
                    1.0
                } else {
                    smoothstep((t2 - t) / (t2 - t2m))
                }
            }
            EnvelopeKind::Gaussian { center, sigma } => {
                let u = (t - center) / sigma;
                (-0.5 * u * u).exp()
            }
            EnvelopeKind::ZeroAverageSine { t1, t2, cycles } => {
                if t <= t1 || t >= t2 {
                    0.0
                } else {
                    let omega = 2.0 * std::f64::consts::PI * cycles as f64 / (t2 - t1);
                    (omega * (t - t1)).sin()
                }
            }
        }
    }

    /// `dT/dt`. Piecewise constant (with jumps at the breakpoints) for the
    /// linear trapezoid.
    pub fn deriv(&self, t: f64) -> f64 {
        match self.kind {
            EnvelopeKind::Trapezoid { t1, t1p, t2m, t2 } => {
                if t <= t1 || t >= t2 {
                    0.0
                } else if t < t1p {
                    1.0 / (t1p - t1)
                } else if t <= t2m {
                    0.0
                } else {
                    -1.0 / (t2 - t2m)
                }
            }
            EnvelopeKind::SmoothTrapezoid { t1, t1p, t2m, t2 } => {
                if t <= t1 || t >= t2 {
                    0.0
                } else if t < t1p {
                    smoothstep_deriv((t - t1) / (t1p - t1)) / (t1p - t1)
                } else if t <= t2m {
                    0.0
                } else {
                    -smoothstep_deriv((t2 - t) / (t2 - t2m)) / (t2 - t2m)
                }
            }
            EnvelopeKind::Gaussian { center, sigma } => {
                let u = (t - center) / sigma;
                -(u / sigma) * (-0.5 * u * u).exp()
            }
            EnvelopeKind::ZeroAverageSine { t1, t2, cycles } => {
                if t <= t1 || t >= t2 {
                    0.0
                } else {
                    let omega = 2.0 * std::f64::consts::PI * cycles as f64 / (t2 - t1);
                    omega * (omega * (t - t1)).cos()
                }
            }
        }
    }

    /// `d²T/dt²` where it exists (zero almost everywhere for the linear
    /// trapezoid; the isolated kink points carry no weight in integrals).
    pub fn deriv2(&self, t: f64) -> f64 {
        match self.kind {
            EnvelopeKind::Trapezoid { .. } => 0.0,
            EnvelopeKind::SmoothTrapezoid { t1, t1p, t2m, t2 } => {
                if t <= t1 || t >= t2 {
                    0.0
                } else if t < t1p {
                    let d = t1p - t1;
                    smoothstep_deriv2((t - t1) / d) / (d * d)
                } else if t <= t2m {
                    0.0
                } else {
                    let d = t2 - t2m;
                    smoothstep_deriv2((t2 - t) / d) / (d * d)
                }
            }
            EnvelopeKind::Gaussian { center, sigma } => {
                let u = (t - center) / sigma;
                ((u * u - 1.0) / (sigma * sigma)) * (-0.5 * u * u).exp()
            }
            EnvelopeKind::ZeroAverageSine { t1, t2, cycles } => {
                if t <= t1 || t >= t2 {
                    0.0
                } else {
                    let omega = 2.0 * std::f64::consts::PI * cycles as f64 / (t2 - t1);
                    -omega * omega * (omega * (t - t1)).sin()
                }
            }
        }
    }

    /// Running integral `∫_{-inf}^{t} T(τ) dτ` in closed form.
    pub fn integral(&self, t: f64) -> f64 {
        match self.kind {
            EnvelopeKind::Trapezoid { t1, t1p, t2m, t2 } => {
                let d1 = t1p - t1;
                let d2 = t2 - t2m;
                if t <= t1 {
                    0.0
                } else if t < t1p {
                    (t - t1) * (t - t1) / (2.0 * d1)
                } else if t <= t2m {
                    0.5 * d1 + (t - t1p)
                } else if t < t2 {
                    0.5 * d1 + (t2m - t1p) + 0.5 * d2 - (t2 - t) * (t2 - t) / (2.0 * d2)
                } else {
                    0.5 * d1 + (t2m - t1p) + 0.5 * d2
                }
            }
            EnvelopeKind::SmoothTrapezoid { t1, t1p, t2m, t2 } => {
                let d1 = t1p - t1;
                let d2 = t2 - t2m;
                // smoothstep ramps have the same half-area as linear ones
                if t <= t1 {
                    0.0
                } else if t < t1p {
                    d1 * smoothstep_integral((t - t1) / d1)
                } else if t <= t2m {
                    0.5 * d1 + (t - t1p)
                } else if t < t2 {
                    0.5 * d1 + (t2m - t1p) + d2 * (0.5 - smoothstep_integral((t2 - t) / d2))
                } else {
                    0.5 * d1 + (t2m - t1p) + 0.5 * d2
                }
            }
            EnvelopeKind::Gaussian { center, sigma } => {
                let u = (t - center) / (sigma * std::f64::consts::SQRT_2);
                sigma * (0.5 * std::f64::consts::TAU).sqrt() * 0.5 * (1.0 + libm::erf(u))
            }
            EnvelopeKind::ZeroAverageSine { t1, t2, cycles } => {
                if t <= t1 {
                    0.0
                } else {
                    let omega = 2.0 * std::f64::consts::PI * cycles as f64 / (t2 - t1);
                    let tc = t.min(t2);
                    (1.0 - (omega * (tc - t1)).cos()) / omega
                }
            }
        }
    }

    /// `∫ T dτ` over the whole real line.
    pub fn total_integral(&self) -> f64 {
        match self.kind {
            EnvelopeKind::Gaussian { sigma, .. } => sigma * std::f64::consts::TAU.sqrt(),
            _ => {
                let (_, end) = self.support();
                self.integral(end)
            }
        }
    }

    /// Interval outside of which the envelope is zero (for the Gaussian:
    /// negligible below 1e-15).
    pub fn support(&self) -> (f64, f64) {
        match self.kind {
            EnvelopeKind::Trapezoid { t1, t2, .. }
            | EnvelopeKind::SmoothTrapezoid { t1, t2, .. } => (t1, t2),
            EnvelopeKind::Gaussian { center, sigma } => (
                center - GAUSSIAN_SUPPORT_SIGMAS * sigma,
                center + GAUSSIAN_SUPPORT_SIGMAS * sigma,
            ),
            EnvelopeKind::ZeroAverageSine { t1, t2, .. } => (t1, t2),
        }
    }

    /// Times where the envelope (or one of its derivatives) has a kink.
    /// Integrators and time quadratures split their grids here.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.kind {
            EnvelopeKind::Trapezoid { t1, t1p, t2m, t2 }
            | EnvelopeKind::SmoothTrapezoid { t1, t1p, t2m, t2 } => vec![t1, t1p, t2m, t2],
            EnvelopeKind::Gaussian { .. } => vec![],
            EnvelopeKind::ZeroAverageSine { t1, t2, .. } => vec![t1, t2],
        }
    }

    /// Characteristic times where `dT/dt = 0` while the pulse is on
    /// (plateau midpoint, sine extrema, Gaussian peak). At these instants the
    /// vector potentials of same-field gauge pairs are momentarily static.
    pub fn stationary_times(&self) -> Vec<f64> {
        match self.kind {
            EnvelopeKind::Trapezoid { t1p, t2m, .. }
            | EnvelopeKind::SmoothTrapezoid { t1p, t2m, .. } => {
                vec![t1p, 0.5 * (t1p + t2m), t2m]
            }
            EnvelopeKind::Gaussian { center, .. } => vec![center],
            EnvelopeKind::ZeroAverageSine { t1, t2, cycles } => {
                let period = (t2 - t1) / cycles as f64;
                (0..2 * cycles)
                    .map(|k| t1 + period * (0.25 + 0.5 * k as f64))
                    .collect()
            }
        }
    }

    /// The shortest internal time scale of the pulse: ramp durations for the
    /// trapezoids, sigma for the Gaussian, the cycle period for the sine.
    /// Time quadratures resolve this scale in addition to any Bohr frequency.
    pub fn feature_time(&self) -> f64 {
        match self.kind {
            EnvelopeKind::Trapezoid { t1, t1p, t2m, t2 }
            | EnvelopeKind::SmoothTrapezoid { t1, t1p, t2m, t2 } => {
                (t1p - t1).min(t2 - t2m)
            }
            EnvelopeKind::Gaussian { sigma, .. } => sigma,
            EnvelopeKind::ZeroAverageSine { t1, t2, cycles } => (t2 - t1) / cycles as f64,
        }
    }
}
