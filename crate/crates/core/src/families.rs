//! Derived samplers built on the Beta(a, 1-a) core: Gamma(c) with c < 1,
//! Beta(a, b) with min(a, b) < 1, and Dirichlet with every concentration
//! in (0, 1).
//!
//! Each draw consumes a fixed budget of uniforms: 4 for Gamma and Beta
//! (a `UniformTriple` plus one more), 4d for a d-dimensional Dirichlet.
//! The constructions are classical reductions (Devroye, Non-Uniform Random
//! Variate Generation, 1986): Gamma(c) = Exp(1) * Beta(c, 1-c),
//! Beta(a, b) = B V / (1 - (1 - B) V) with B ~ Beta(a, 1-a) and
//! V ~ Beta(1, b), and Dirichlet by normalizing independent Gammas.

use crate::error::{Error, Result};
use crate::real::{check_open_unit, into_open_unit, Real};
use crate::sampler::{sample_beta_three_uniform, ShapeParam, UniformTriple};

/// Gamma shape c in (0, 1) with a scale factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaShape<R: Real> {
    core: ShapeParam<R>,
    scale: R,
}

impl<R: Real> GammaShape<R> {
    pub fn new(c: R, scale: R) -> Result<Self> {
        if scale <= R::zero() || !scale.is_finite() {
            return Err(Error::ScaleOutOfRange {
                value: scale.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self {
            core: ShapeParam::new(c)?,
            scale,
        })
    }

    /// Unit-scale Gamma(c).
    pub fn unit(c: R) -> Result<Self> {
        Self::new(c, R::one())
    }

    pub fn c(&self) -> R {
        self.core.a()
    }

    pub fn scale(&self) -> R {
        self.scale
    }
}

/// General Beta(a, b) parameters with min(a, b) < 1.
///
/// The side below one drives the Beta(s, 1-s) core; when only `b` is below
/// one the draw is produced as 1 - Beta(b, a) via the reflection identity
/// Beta(a, b) = 1 - Beta(b, a) in distribution. When both are below one the
/// `a` side is used, so a given uniform budget always maps to the same
/// output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaShapePair<R: Real> {
    a: R,
    b: R,
    core: ShapeParam<R>,
    reflect: bool,
}

impl<R: Real> BetaShapePair<R> {
    pub fn new(a: R, b: R) -> Result<Self> {
        let bad = || Error::UnsupportedBetaPair {
            a: a.to_f64().unwrap_or(f64::NAN),
            b: b.to_f64().unwrap_or(f64::NAN),
        };
        if a <= R::zero() || b <= R::zero() || !a.is_finite() || !b.is_finite() {
            return Err(bad());
        }
        if a < R::one() {
            Ok(Self {
                a,
                b,
                core: ShapeParam::new(a)?,
                reflect: false,
            })
        } else if b < R::one() {
            Ok(Self {
                a,
                b,
                core: ShapeParam::new(b)?,
                reflect: true,
            })
        } else {
            Err(bad())
        }
    }

    pub fn a(&self) -> R {
        self.a
    }

    pub fn b(&self) -> R {
        self.b
    }

    /// Mean a / (a + b) of the target law.
    pub fn mean(&self) -> R {
        self.a / (self.a + self.b)
    }
}

/// Dirichlet concentrations, all strictly inside (0, 1), d >= 2.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletParams<R: Real> {
    alphas: Vec<R>,
    shapes: Vec<ShapeParam<R>>,
}

impl<R: Real> DirichletParams<R> {
    pub fn new(alphas: &[R]) -> Result<Self> {
        if alphas.len() < 2 {
            return Err(Error::DirichletTooShort { d: alphas.len() });
        }
        let mut shapes = Vec::with_capacity(alphas.len());
        for (index, &alpha) in alphas.iter().enumerate() {
            if alpha <= R::zero() || alpha >= R::one() || alpha.is_nan() {
                return Err(Error::DirichletAlphaOutOfRange {
                    index,
                    value: alpha.to_f64().unwrap_or(f64::NAN),
                });
            }
            shapes.push(ShapeParam::new(alpha)?);
        }
        Ok(Self {
            alphas: alphas.to_vec(),
            shapes,
        })
    }

    pub fn dimension(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[R] {
        &self.alphas
    }

    /// Uniforms consumed per draw: 4 per coordinate.
    pub fn uniforms_per_draw(&self) -> usize {
        4 * self.alphas.len()
    }
}

/// A point on the open simplex: positive components summing to one (up to
/// a few ulps of normalization rounding).
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletVector<R: Real> {
    components: Vec<R>,
}

impl<R: Real> DirichletVector<R> {
    pub fn components(&self) -> &[R] {
        &self.components
    }

    pub fn dimension(&self) -> usize {
        self.components.len()
    }
}

#[inline]
fn gamma_unit<R: Real>(core: &ShapeParam<R>, u: &UniformTriple<R>, u4: R) -> Result<R> {
    let beta = sample_beta_three_uniform(core, u)?;
    let exp = -u4.ln();
    Ok(exp * beta)
}

/// Gamma(c, scale) draw: scale * Exp(1) * Beta(c, 1-c).
///
/// The exponential comes from -ln(u4); the Beta factor from the
/// three-uniform core sampler. A draw whose product rounds to zero is
/// rejected with [`Error::Underflow`] rather than returned.
pub fn sample_gamma<R: Real>(gamma: &GammaShape<R>, u: &UniformTriple<R>, u4: R) -> Result<R> {
    let u4 = check_open_unit(u4, "u4")?;
    let x = gamma.scale * gamma_unit(&gamma.core, u, u4)?;
    if x <= R::zero() || !x.is_finite() {
        return Err(Error::Underflow { what: "gamma draw" });
    }
    Ok(x)
}

/// Beta(a, b) draw with min(a, b) < 1: B V / (1 - (1 - B) V) where
/// B ~ Beta(s, 1-s) for the sub-one parameter s and V = 1 - u4^(1/b).
///
/// V is computed as -expm1(ln(u4) / b) and the denominator as
/// u4^(1/b) + B V, which keeps both positive with no cancellation. The
/// reflected case returns one minus the swapped-parameter draw.
pub fn sample_beta_general<R: Real>(
    pair: &BetaShapePair<R>,
    u: &UniformTriple<R>,
    u4: R,
) -> Result<R> {
    let u4 = check_open_unit(u4, "u4")?;
    let exponent = if pair.reflect { pair.a } else { pair.b };
    let base = sample_beta_three_uniform(&pair.core, u)?;
    let t = u4.ln() / exponent;
    let w = t.exp(); // u4^(1/b) = 1 - V
    let v = -t.exp_m1(); // V, accurate even when u4^(1/b) -> 1
    let numer = base * v;
    let x = numer / (w + numer);
    let x = if pair.reflect { R::one() - x } else { x };
    Ok(into_open_unit(x))
}

/// Dirichlet draw from a block of `4 d` uniforms: normalize d independent
/// unit-scale Gamma(alpha_i) draws, four uniforms each.
///
/// If the Gamma sum or any normalized component rounds to zero (possible
/// in floats though astronomically improbable), the draw is rejected with
/// [`Error::Underflow`] instead of silently leaving the open simplex.
pub fn sample_dirichlet<R: Real>(
    params: &DirichletParams<R>,
    uniforms: &[R],
) -> Result<DirichletVector<R>> {
    let expected = params.uniforms_per_draw();
    if uniforms.len() != expected {
        return Err(Error::UniformBudget {
            expected,
            got: uniforms.len(),
        });
    }
    let mut raw = Vec::with_capacity(params.dimension());
    let mut sum = R::zero();
    for (shape, block) in params.shapes.iter().zip(uniforms.chunks_exact(4)) {
        let triple = UniformTriple::new(block[0], block[1], block[2])?;
        let u4 = check_open_unit(block[3], "u4")?;
        let x = gamma_unit(shape, &triple, u4)?;
        sum = sum + x;
        raw.push(x);
    }
    if sum <= R::zero() || !sum.is_finite() {
        return Err(Error::Underflow {
            what: "dirichlet gamma sum",
        });
    }
    let mut components = raw;
    for x in components.iter_mut() {
        *x = *x / sum;
        if *x <= R::zero() {
            return Err(Error::Underflow {
                what: "dirichlet component",
            });
        }
    }
    Ok(DirichletVector { components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::UniformStream;

    #[test]
    fn parameter_validation() {
        assert!(GammaShape::new(0.5f64, 1.0).is_ok());
        assert!(GammaShape::new(0.0f64, 1.0).is_err());
        assert!(GammaShape::new(1.0f64, 1.0).is_err());
        assert!(GammaShape::new(0.5f64, 0.0).is_err());
        assert!(GammaShape::new(0.5f64, -1.0).is_err());

        assert!(BetaShapePair::new(0.3f64, 2.0).is_ok());
        assert!(BetaShapePair::new(1.5f64, 0.5).is_ok());
        assert!(BetaShapePair::new(0.4f64, 0.7).is_ok());
        assert!(matches!(
            BetaShapePair::new(1.5f64, 2.0),
            Err(Error::UnsupportedBetaPair { .. })
        ));
        assert!(BetaShapePair::new(-0.1f64, 0.5).is_err());

        assert!(DirichletParams::new(&[0.3f64, 0.5, 0.2]).is_ok());
        assert!(matches!(
            DirichletParams::new(&[0.5f64]),
            Err(Error::DirichletTooShort { .. })
        ));
        assert!(matches!(
            DirichletParams::new(&[0.5f64, 1.2]),
            Err(Error::DirichletAlphaOutOfRange { index: 1, .. })
        ));
    }

    #[test]
    fn gamma_scale_is_linear() {
        let unit = GammaShape::unit(0.4f64).unwrap();
        let scaled = GammaShape::new(0.4f64, 2.0).unwrap();
        let mut s = UniformStream::new(11);
        for _ in 0..100 {
            let u = s.next_triple();
            let u4 = s.next_f64();
            let x = sample_gamma(&unit, &u, u4).unwrap();
            let y = sample_gamma(&scaled, &u, u4).unwrap();
            assert_eq!(y, 2.0 * x);
            assert!(x > 0.0);
        }
    }

    #[test]
    fn beta_general_stays_in_the_open_interval() {
        let mut s = UniformStream::new(5);
        for &(a, b) in &[(0.3, 2.0), (1.5, 0.5), (0.5, 0.5), (0.9, 40.0)] {
            let pair = BetaShapePair::new(a, b).unwrap();
            for _ in 0..200 {
                let u = s.next_triple();
                let u4 = s.next_f64();
                let x = sample_beta_general(&pair, &u, u4).unwrap();
                assert!(x > 0.0 && x < 1.0, "Beta({a},{b}) produced {x}");
            }
        }
    }

    #[test]
    fn reflected_pair_mirrors_the_swapped_construction() {
        let fwd = BetaShapePair::new(1.5f64, 0.5).unwrap();
        let swapped = BetaShapePair::new(0.5f64, 1.5).unwrap();
        let mut s = UniformStream::new(9);
        for _ in 0..100 {
            let u = s.next_triple();
            let u4 = s.next_f64();
            let x = sample_beta_general(&fwd, &u, u4).unwrap();
            let y = sample_beta_general(&swapped, &u, u4).unwrap();
            assert_eq!(x, 1.0 - y);
        }
    }

    #[test]
    fn dirichlet_draws_lie_on_the_simplex() {
        let params = DirichletParams::new(&[0.3f64, 0.5, 0.2]).unwrap();
        let mut s = UniformStream::new(21);
        for _ in 0..500 {
            let block: Vec<f64> = (0..params.uniforms_per_draw())
                .map(|_| s.next_f64())
                .collect();
            let v = sample_dirichlet(&params, &block).unwrap();
            assert_eq!(v.dimension(), 3);
            let sum: f64 = v.components().iter().sum();
            assert!((sum - 1.0).abs() <= 4.0 * f64::EPSILON, "sum = {sum}");
            assert!(v.components().iter().all(|&c| c > 0.0 && c < 1.0));
        }
    }

    #[test]
    fn dirichlet_rejects_a_short_uniform_block() {
        let params = DirichletParams::new(&[0.4f64, 0.6]).unwrap();
        let block = vec![0.5f64; 7];
        assert!(matches!(
            sample_dirichlet(&params, &block),
            Err(Error::UniformBudget {
                expected: 8,
                got: 7
            })
        ));
    }
}
