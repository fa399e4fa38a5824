//! Exact Beta(a, 1-a) generation from two or three uniforms.
//!
//! The proposal is Jöhnk's ratio P = U1^(1/a) / (U1^(1/a) + U2^(1/(1-a)))
//! (Jöhnk 1964). Instead of Jöhnk's rejection step, a single conditional
//! mixture step draws the output uniformly from (0, P) with probability
//! alpha_a(P) and uniformly from (P, 1) otherwise, where
//!
//! ```text
//! alpha_a(p) = p + kappa(a) * (1 - a - p) * max(p, 1 - p),
//! kappa(a)   = sin(pi a) / (pi a (1 - a)).
//! ```
//!
//! This weight is the unique choice for which the marginal of the output
//! matches the Beta(a, 1-a) density, so the draw is exact: no rejection
//! loop, a fixed budget of uniforms per variate.
//!
//! Two interchangeable variants are provided. The three-uniform variant
//! computes the proposal from the ratio above; the two-uniform variant
//! inverts the closed-form proposal CDF instead, spending one uniform on
//! the proposal and one on the mixture step.

use crate::error::{Error, Result};
use crate::real::{check_open_unit, into_open_unit, lit, Real};

/// Default guard margin for the shape parameter: 2^-40.
///
/// The construction is valid on all of (0, 1), but exponents 1/a or
/// 1/(1-a) beyond ~1e12 push the intermediate logarithms outside the range
/// where f64 arithmetic keeps meaningful precision. Callers who accept the
/// precision loss can widen the range via [`ShapeParam::with_margin`].
pub const DEFAULT_SHAPE_MARGIN: f64 = 9.094947017729282e-13;

/// Validated shape parameter a in (0, 1) with cached constants.
///
/// Identifies the Beta(a, 1-a) target. `kappa(a)` is computed once per
/// parameter rather than per draw, since the sine would otherwise dominate
/// the per-variate cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeParam<R: Real> {
    a: R,
    complement: R,
    kappa: R,
}

impl<R: Real> ShapeParam<R> {
    /// Validate `a` against [`DEFAULT_SHAPE_MARGIN`] and cache the constants.
    pub fn new(a: R) -> Result<Self> {
        Self::with_margin(a, lit(DEFAULT_SHAPE_MARGIN))
    }

    /// Validate `margin <= a <= 1 - margin` and cache the constants.
    pub fn with_margin(a: R, margin: R) -> Result<Self> {
        let half = R::one() / (R::one() + R::one());
        if !(margin > R::zero() && margin < half) {
            return Err(Error::InvalidMargin {
                value: margin.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !(a >= margin && a <= R::one() - margin) {
            return Err(Error::ShapeOutOfRange {
                value: a.to_f64().unwrap_or(f64::NAN),
                margin: margin.to_f64().unwrap_or(f64::NAN),
            });
        }
        let complement = R::one() - a;
        // sin(pi a) = sin(pi (1 - a)); evaluating at the smaller argument
        // keeps full relative precision when a is near an endpoint.
        let small = a.min(complement);
        let kappa = (R::PI() * small).sin() / (R::PI() * a * complement);
        Ok(Self {
            a,
            complement,
            kappa,
        })
    }

    pub fn a(&self) -> R {
        self.a
    }

    /// The second Beta parameter, 1 - a.
    pub fn complement(&self) -> R {
        self.complement
    }

    /// kappa(a) = sin(pi a) / (pi a (1 - a)); positive, symmetric in a <-> 1 - a.
    pub fn kappa(&self) -> R {
        self.kappa
    }
}

/// Three uniforms strictly inside (0, 1), the budget of the three-uniform
/// sampler. The open-interval contract rules out log(0) and division
/// hazards downstream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformTriple<R: Real> {
    u1: R,
    u2: R,
    u3: R,
}

impl<R: Real> UniformTriple<R> {
    pub fn new(u1: R, u2: R, u3: R) -> Result<Self> {
        Ok(Self {
            u1: check_open_unit(u1, "u1")?,
            u2: check_open_unit(u2, "u2")?,
            u3: check_open_unit(u3, "u3")?,
        })
    }

    pub fn u1(&self) -> R {
        self.u1
    }

    pub fn u2(&self) -> R {
        self.u2
    }

    pub fn u3(&self) -> R {
        self.u3
    }
}

/// A proposal location together with its mixture weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProposalPoint<R: Real> {
    p: R,
    alpha: R,
}

impl<R: Real> ProposalPoint<R> {
    pub fn new(p: R, alpha: R) -> Result<Self> {
        Ok(Self {
            p: check_open_unit(p, "p")?,
            alpha: check_open_unit(alpha, "alpha")?,
        })
    }

    /// Compute the mixture weight for a proposal at `p`.
    pub fn from_shape(shape: &ShapeParam<R>, p: R) -> Result<Self> {
        let p = check_open_unit(p, "p")?;
        Ok(Self {
            p,
            alpha: alpha_weight_raw(shape, p),
        })
    }

    pub fn p(&self) -> R {
        self.p
    }

    pub fn alpha(&self) -> R {
        self.alpha
    }
}

/// Which uniform budget generates a Beta(a, 1-a) draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Jöhnk ratio proposal from two uniforms, mixture step from a third.
    ThreeUniform,
    /// Inverse-CDF proposal from one uniform, mixture step from a second.
    TwoUniform,
}

impl Variant {
    pub fn uniforms_per_draw(self) -> usize {
        match self {
            Variant::ThreeUniform => 3,
            Variant::TwoUniform => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::ThreeUniform => "three-uniform",
            Variant::TwoUniform => "two-uniform",
        }
    }
}

impl core::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> core::result::Result<Self, String> {
        match s {
            "three-uniform" => Ok(Variant::ThreeUniform),
            "two-uniform" => Ok(Variant::TwoUniform),
            other => Err(format!("unknown variant `{other}`")),
        }
    }
}

impl core::fmt::Display for Variant {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Numerically stable logistic 1 / (1 + e^-x).
#[inline]
fn logistic<R: Real>(x: R) -> R {
    if x >= R::zero() {
        R::one() / (R::one() + (-x).exp())
    } else {
        let e = x.exp();
        e / (R::one() + e)
    }
}

/// Mixture weight alpha_a(p) = p + kappa(a) (1 - a - p) max(p, 1 - p).
///
/// Strictly inside (0, 1) for every a, p in (0, 1), and antisymmetric under
/// reflection: alpha_{1-a}(1-p) = 1 - alpha_a(p).
pub fn alpha_weight<R: Real>(shape: &ShapeParam<R>, p: R) -> Result<R> {
    let p = check_open_unit(p, "p")?;
    Ok(alpha_weight_raw(shape, p))
}

#[inline]
pub(crate) fn alpha_weight_raw<R: Real>(shape: &ShapeParam<R>, p: R) -> R {
    let m = p.max(R::one() - p);
    into_open_unit(p + shape.kappa * (shape.complement - p) * m)
}

/// Jöhnk proposal P = U1^(1/a) / (U1^(1/a) + U2^(1/(1-a))).
///
/// Evaluated as the logistic of `ln(U1)/a - ln(U2)/(1-a)`: the direct
/// powers underflow to an exact 0/0 once 1/a or 1/(1-a) is large, while
/// the logistic form keeps the result finite and inside (0, 1).
pub fn sample_p_johnk<R: Real>(shape: &ShapeParam<R>, u1: R, u2: R) -> Result<R> {
    let u1 = check_open_unit(u1, "u1")?;
    let u2 = check_open_unit(u2, "u2")?;
    let t = u1.ln() / shape.a - u2.ln() / shape.complement;
    Ok(into_open_unit(logistic(t)))
}

/// Inverse-CDF proposal: the quantile of the Jöhnk ratio at `u`.
///
/// The proposal CDF has the closed piecewise form implemented by
/// [`crate::math::proposal_cdf`]; its two branches meet at p = 1/2, where
/// the CDF equals 1 - a. Both inversion branches are evaluated in log
/// space and agree (value 1/2) at the branch point u = 1 - a.
pub fn sample_p_inverse<R: Real>(shape: &ShapeParam<R>, u: R) -> Result<R> {
    let u = check_open_unit(u, "u")?;
    let p = if u <= shape.complement {
        // u = (1-a) (p/(1-p))^a  =>  p/(1-p) = (u/(1-a))^(1/a)
        logistic((u.ln() - shape.complement.ln()) / shape.a)
    } else {
        // u = 1 - a ((1-p)/p)^(1-a)  =>  (1-p)/p = ((1-u)/a)^(1/(1-a))
        logistic(-(((-u).ln_1p() - shape.a.ln()) / shape.complement))
    };
    Ok(into_open_unit(p))
}

/// The conditional mixture step: scale U3 into (0, p] when U3 <= alpha,
/// otherwise map it affinely onto (p, 1).
///
/// For fixed (p, alpha) the map is a piecewise-linear bijection of (0, 1),
/// strictly increasing on each branch and continuous at U3 = alpha, where
/// both branches give p.
pub fn mixture_step<R: Real>(point: &ProposalPoint<R>, u3: R) -> Result<R> {
    let u3 = check_open_unit(u3, "u3")?;
    let p = point.p;
    let alpha = point.alpha;
    let b = if u3 <= alpha {
        // p * (u3 / alpha) rather than (p / alpha) * u3: the quotient is
        // exactly 1 at the branch boundary, so u3 == alpha returns p.
        p * (u3 / alpha)
    } else {
        p + (R::one() - p) / (R::one() - alpha) * (u3 - alpha)
    };
    Ok(into_open_unit(b))
}

/// Beta(a, 1-a) draw from three uniforms: Jöhnk proposal, mixture weight,
/// mixture step.
pub fn sample_beta_three_uniform<R: Real>(
    shape: &ShapeParam<R>,
    u: &UniformTriple<R>,
) -> Result<R> {
    let p = sample_p_johnk(shape, u.u1, u.u2)?;
    let point = ProposalPoint {
        p,
        alpha: alpha_weight_raw(shape, p),
    };
    mixture_step(&point, u.u3)
}

/// Beta(a, 1-a) draw from two uniforms: inverse-CDF proposal, mixture
/// weight, mixture step.
pub fn sample_beta_two_uniform<R: Real>(shape: &ShapeParam<R>, u1: R, u2: R) -> Result<R> {
    let p = sample_p_inverse(shape, u1)?;
    let point = ProposalPoint {
        p,
        alpha: alpha_weight_raw(shape, p),
    };
    mixture_step(&point, u2)
}
