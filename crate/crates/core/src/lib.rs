//! Exact Beta, Gamma, and Dirichlet variate generation from a fixed number
//! of uniforms, plus the statistical machinery to verify it.
//!
//! The core draws Beta(a, 1-a) for a in (0, 1) by applying a single
//! conditional mixture step to Jöhnk's ratio proposal: no rejection loop,
//! two or three uniforms per variate, and the output law is exact rather
//! than approximate. Classical reductions then extend the core to
//! Gamma(c) with c < 1, Beta(a, b) with min(a, b) < 1, and Dirichlet
//! vectors with all concentrations in (0, 1).
//!
//! Everything downstream of the uniforms is a pure function, so draws are
//! reproducible from a seed and the kernels are safe to call from any
//! number of threads. [`stream::UniformStream`] supplies counter-based
//! uniforms on the open interval (0, 1); callers own their streams.
//!
//! The [`math`] module holds the closed-form densities, CDF, and moments of
//! the proposal and target laws together with quadrature oracles, and
//! [`harness`] provides moment diagnostics and Kolmogorov-Smirnov checks
//! driven by those oracles. The kernels are generic over the scalar type
//! ([`Real`], implemented for `f32` and `f64`); the oracles and the harness
//! work in `f64`.
//!
//! ```
//! use betamix::{sample_beta_two_uniform, ShapeParam, UniformStream};
//!
//! let shape = ShapeParam::new(0.3)?;
//! let mut stream = UniformStream::new(42);
//! let u1 = stream.next_f64();
//! let u2 = stream.next_f64();
//! let b = sample_beta_two_uniform(&shape, u1, u2)?;
//! assert!(b > 0.0 && b < 1.0);
//! # Ok::<(), betamix::Error>(())
//! ```

pub mod error;
pub mod families;
pub mod harness;
pub mod math;
pub mod quad;
mod real;
pub mod sampler;
pub mod special;
pub mod stream;

pub use error::{Error, Result};
pub use families::{
    sample_beta_general, sample_dirichlet, sample_gamma, BetaShapePair, DirichletParams,
    DirichletVector, GammaShape,
};
pub use math::{
    mixture_marginal_oracle, proposal_cdf, proposal_density, target_density, theoretical_moment,
    DensityEval, MomentSpec,
};
pub use real::Real;
pub use sampler::{
    alpha_weight, mixture_step, sample_beta_three_uniform, sample_beta_two_uniform,
    sample_p_inverse, sample_p_johnk, ProposalPoint, ShapeParam, UniformTriple, Variant,
    DEFAULT_SHAPE_MARGIN,
};
pub use stream::{derive_seed, UniformStream, DEFAULT_SEED};

/// Concrete `f64` aliases for the parameter types.
pub type ShapeParam64 = ShapeParam<f64>;
pub type UniformTriple64 = UniformTriple<f64>;
pub type GammaShape64 = GammaShape<f64>;
pub type BetaShapePair64 = BetaShapePair<f64>;
pub type DirichletParams64 = DirichletParams<f64>;
pub type DirichletVector64 = DirichletVector<f64>;

/// Concrete `f32` aliases for the parameter types.
pub type ShapeParam32 = ShapeParam<f32>;
pub type UniformTriple32 = UniformTriple<f32>;
