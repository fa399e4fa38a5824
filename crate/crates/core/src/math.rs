//! Closed-form densities, CDFs, and moments of the proposal and target
//! laws, plus the quadrature oracle that cross-checks the mixture
//! construction against the target density.

use crate::error::{Error, Result};
use crate::quad::{adaptive_gk15, integrate_power_endpoint, QuadResult};
use crate::real::{check_open_unit, Real};
use crate::sampler::{alpha_weight_raw, ShapeParam};

/// A density value at a point, carried in both linear and log form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityEval<R: Real> {
    pub x: R,
    pub value: R,
    pub log_value: R,
}

impl<R: Real> DensityEval<R> {
    fn from_log(x: R, log_value: R) -> Self {
        Self {
            x,
            value: log_value.exp(),
            log_value,
        }
    }
}

/// A moment order paired with its closed-form value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSpec<R: Real> {
    pub k: u32,
    pub theoretical: R,
}

impl<R: Real> MomentSpec<R> {
    pub fn new(shape: &ShapeParam<R>, k: u32) -> Result<Self> {
        Ok(Self {
            k,
            theoretical: theoretical_moment(shape, k)?,
        })
    }
}

/// ln of the normalizing constant sin(pi a)/pi, via the cached kappa:
/// sin(pi a)/pi = kappa(a) a (1 - a).
#[inline]
fn ln_norm<R: Real>(shape: &ShapeParam<R>) -> R {
    (shape.kappa() * shape.a() * shape.complement()).ln()
}

/// ln g as a function of ln b, usable where b itself would underflow.
#[inline]
pub(crate) fn ln_target_density_at(shape: &ShapeParam<f64>, ln_b: f64) -> f64 {
    ln_norm(shape) + (shape.a() - 1.0) * ln_b - shape.a() * (-ln_b.exp()).ln_1p()
}

/// Target density g(b) = sin(pi a)/pi * b^(a-1) (1-b)^(-a), in log space.
pub fn target_density<R: Real>(shape: &ShapeParam<R>, b: R) -> Result<DensityEval<R>> {
    let b = check_open_unit(b, "b")?;
    let log_value = ln_norm(shape) + (shape.a() - R::one()) * b.ln() - shape.a() * (-b).ln_1p();
    Ok(DensityEval::from_log(b, log_value))
}

/// Proposal density f_P(p) = a (1-a) p^(a-1) (1-p)^(-a) / max(p, 1-p).
pub fn proposal_density<R: Real>(shape: &ShapeParam<R>, p: R) -> Result<DensityEval<R>> {
    let p = check_open_unit(p, "p")?;
    let ln_p = p.ln();
    let ln_one_minus_p = (-p).ln_1p();
    let half = R::one() / (R::one() + R::one());
    let ln_max = if p >= half { ln_p } else { ln_one_minus_p };
    let log_value = (shape.a() * shape.complement()).ln() + (shape.a() - R::one()) * ln_p
        - shape.a() * ln_one_minus_p
        - ln_max;
    Ok(DensityEval::from_log(p, log_value))
}

/// Proposal CDF, piecewise closed form:
///
/// ```text
/// F_P(p) = (1-a) (p/(1-p))^a          for p <= 1/2,
///          1 - a ((1-p)/p)^(1-a)      for p >= 1/2.
/// ```
///
/// Both branches give 1 - a at p = 1/2; the function is continuous and
/// strictly increasing on (0, 1).
pub fn proposal_cdf<R: Real>(shape: &ShapeParam<R>, p: R) -> Result<R> {
    let p = check_open_unit(p, "p")?;
    let ln_p = p.ln();
    let ln_one_minus_p = (-p).ln_1p();
    let half = R::one() / (R::one() + R::one());
    if p <= half {
        Ok(shape.complement() * (shape.a() * (ln_p - ln_one_minus_p)).exp())
    } else {
        Ok(R::one() - shape.a() * (shape.complement() * (ln_one_minus_p - ln_p)).exp())
    }
}

/// k-th raw moment of the target law: a (a+1) ... (a+k-1) / k!.
pub fn theoretical_moment<R: Real>(shape: &ShapeParam<R>, k: u32) -> Result<R> {
    if k == 0 {
        return Err(Error::ZeroMomentOrder);
    }
    let mut m = R::one();
    for i in 0..k {
        let i = R::from_u32(i).expect("small integer converts");
        m = m * (shape.a() + i) / (i + R::one());
    }
    Ok(m)
}

/// Absolute error bound the marginal oracle must achieve.
pub const ORACLE_ERROR_BOUND: f64 = 1e-6;

/// Marginal density of the mixture output at `b`, by direct quadrature of
///
/// ```text
/// ∫_b^1 alpha(p)/p f_P(p) dp  +  ∫_0^b (1 - alpha(p))/(1 - p) f_P(p) dp.
/// ```
///
/// This integrates the mixture form itself, from the proposal density and
/// the mixture weight only; it never evaluates the closed-form target
/// density, so agreement between the two is a genuine cross-check of the
/// construction. Each integral is split at 1/2 and the singular endpoint
/// piece (p^(a-1) at 0, (1-p)^(-a) at 1) is handled by a power-law
/// transform; near p = 1 the integrand is evaluated in terms of q = 1 - p
/// to avoid cancellation.
///
/// Fails with [`Error::QuadratureAccuracy`] if the accumulated error bound
/// exceeds [`ORACLE_ERROR_BOUND`]. Accuracy degrades for shapes within
/// ~1e-2 of the endpoints, where the transform exponents get extreme.
pub fn mixture_marginal_oracle(shape: &ShapeParam<f64>, b: f64) -> Result<f64> {
    let b = check_open_unit(b, "b")?;
    let tol = ORACLE_ERROR_BOUND / 8.0;
    let a = shape.a();
    let ln_a_bc = (a * shape.complement()).ln();

    // (1 - alpha(p))/(1 - p) * f_P(p), as a function of ln p.
    let ln_left = |ln_p: f64| -> f64 {
        let p = ln_p.exp();
        let alpha = alpha_weight_raw(shape, p);
        let ln_one_minus_p = (-p).ln_1p();
        let ln_max = if p >= 0.5 { ln_p } else { ln_one_minus_p };
        (-alpha).ln_1p() - ln_one_minus_p + ln_a_bc + (a - 1.0) * ln_p - a * ln_one_minus_p - ln_max
    };

    // alpha(p)/p * f_P(p), as a function of ln p (used away from p = 1).
    let ln_right_in_p = |ln_p: f64| -> f64 {
        let p = ln_p.exp();
        let alpha = alpha_weight_raw(shape, p);
        let ln_one_minus_p = (-p).ln_1p();
        let ln_max = if p >= 0.5 { ln_p } else { ln_one_minus_p };
        alpha.ln() - ln_p + ln_a_bc + (a - 1.0) * ln_p - a * ln_one_minus_p - ln_max
    };

    // alpha(p)/p * f_P(p), as a function of ln q with q = 1 - p <= 1/2,
    // where max(p, 1-p) = p and ln p = ln1p(-q) stays accurate as p -> 1.
    let ln_right_in_q = |ln_q: f64| -> f64 {
        let q = ln_q.exp();
        let p = 1.0 - q;
        let alpha = alpha_weight_raw(shape, p);
        let ln_p = (-q).ln_1p();
        alpha.ln() + ln_a_bc + (a - 3.0) * ln_p - a * ln_q
    };

    let mut total = QuadResult {
        value: 0.0,
        error: 0.0,
    };

    // ∫_0^b, singular like p^(a-1) at 0.
    total = total.accumulate(integrate_power_endpoint(&ln_left, b.min(0.5), a - 1.0, tol));
    if b > 0.5 {
        total = total.accumulate(adaptive_gk15(&|p: f64| ln_left(p.ln()).exp(), 0.5, b, tol));
    }

    // ∫_b^1, singular like (1-p)^(-a) at 1.
    total = total.accumulate(integrate_power_endpoint(
        &ln_right_in_q,
        (1.0 - b).min(0.5),
        -a,
        tol,
    ));
    if b < 0.5 {
        total = total.accumulate(adaptive_gk15(
            &|p: f64| ln_right_in_p(p.ln()).exp(),
            b,
            0.5,
            tol,
        ));
    }

    if total.error > ORACLE_ERROR_BOUND {
        return Err(Error::QuadratureAccuracy {
            requested: ORACLE_ERROR_BOUND,
            achieved: total.error,
        });
    }
    Ok(total.value)
}

/// ∫_0^1 g by quadrature (normalization cross-check for the target density).
pub fn target_mass_quadrature(shape: &ShapeParam<f64>, abs_tol: f64) -> QuadResult {
    moment_weighted_target_mass(shape, 0, abs_tol)
}

/// ∫_0^1 b^k g(b) db by quadrature (moment cross-check).
pub fn moment_quadrature(shape: &ShapeParam<f64>, k: u32, abs_tol: f64) -> QuadResult {
    moment_weighted_target_mass(shape, k, abs_tol)
}

fn moment_weighted_target_mass(shape: &ShapeParam<f64>, k: u32, abs_tol: f64) -> QuadResult {
    let a = shape.a();
    let norm = ln_norm(shape);
    let k = k as f64;
    // b^k g(b) as a function of ln b on (0, 1/2], and of ln q on [1/2, 1)
    let ln_f_b = move |ln_b: f64| norm + (k + a - 1.0) * ln_b - a * (-ln_b.exp()).ln_1p();
    let ln_f_q = move |ln_q: f64| norm + (k + a - 1.0) * (-ln_q.exp()).ln_1p() - a * ln_q;
    let left = integrate_power_endpoint(&ln_f_b, 0.5, k + a - 1.0, abs_tol / 2.0);
    let right = integrate_power_endpoint(&ln_f_q, 0.5, -a, abs_tol / 2.0);
    left.accumulate(right)
}

/// ∫_0^1 f_P by quadrature (normalization cross-check for the proposal).
pub fn proposal_mass_quadrature(shape: &ShapeParam<f64>, abs_tol: f64) -> QuadResult {
    let a = shape.a();
    let ln_a_bc = (a * shape.complement()).ln();
    // on (0, 1/2]: max = 1 - p
    let ln_f_p = move |ln_p: f64| {
        let ln_one_minus_p = (-ln_p.exp()).ln_1p();
        ln_a_bc + (a - 1.0) * ln_p - (a + 1.0) * ln_one_minus_p
    };
    // on [1/2, 1) in q = 1 - p: max = p
    let ln_f_q = move |ln_q: f64| {
        let ln_p = (-ln_q.exp()).ln_1p();
        ln_a_bc + (a - 2.0) * ln_p - a * ln_q
    };
    let left = integrate_power_endpoint(&ln_f_p, 0.5, a - 1.0, abs_tol / 2.0);
    let right = integrate_power_endpoint(&ln_f_q, 0.5, -a, abs_tol / 2.0);
    left.accumulate(right)
}
