//! The `verify` subcommand: run the invariant and distribution checks
//! against the numeric oracles and report machine-readable results.
//!
//! Check sizes are fixed where a criterion pins them (the alpha sweep, the
//! oracle grid) and scale with `--n` where they are sampling-based. All
//! substreams derive from the single `--seed`, so a verify run is
//! reproducible from its command line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, ValueEnum};

use betamix::harness::{
    compare_variants, ks_beta_exactness, run_moment_table, CompensatedSum, MomentTableConfig,
    SamplerUnderTest,
};
use betamix::{
    alpha_weight, derive_seed, mixture_marginal_oracle, proposal_cdf, proposal_density,
    sample_beta_general, sample_dirichlet, sample_gamma, sample_p_inverse, target_density,
    BetaShapePair, DirichletParams, GammaShape, ShapeParam, UniformStream, Variant, DEFAULT_SEED,
};

use crate::output::Output;
use crate::{CmdResult, Failure, VERSION};

const KS_LEVEL: f64 = 0.001;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SabotageArg {
    /// Feed the goodness-of-fit check the raw proposal with the mixture
    /// step bypassed (internal test hook; must make verification fail).
    NoMixture,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Draws per sampling-based check.
    #[arg(long, default_value_t = 100_000)]
    n: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Emit the report as JSON instead of text lines.
    #[arg(long)]
    json: bool,
    /// Deliberately break the sampler under test (negative-control hook).
    #[arg(long, value_enum)]
    sabotage: Option<SabotageArg>,
    /// Report file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

impl Check {
    fn new(name: &'static str, pass: bool, detail: String) -> Self {
        Self { name, pass, detail }
    }

    /// Convert a harness error into a failed check rather than an abort.
    fn from_result(name: &'static str, r: Result<(bool, String), betamix::Error>) -> Self {
        match r {
            Ok((pass, detail)) => Self::new(name, pass, detail),
            Err(e) => Self::new(name, false, format!("error: {e}")),
        }
    }
}

pub fn cmd_verify(args: VerifyArgs) -> CmdResult<ExitCode> {
    if args.n < 1_000 {
        return Err(Failure::Validation("--n must be at least 1000".into()));
    }
    let sampler = match args.sabotage {
        None => SamplerUnderTest::Exact(Variant::TwoUniform),
        Some(SabotageArg::NoMixture) => SamplerUnderTest::ProposalOnly,
    };

    let mut checks = Vec::new();
    let (bounds, symmetry) = alpha_sweep(args.seed);
    checks.push(bounds);
    checks.push(symmetry);
    checks.push(Check::from_result(
        "alpha_derivative_identity",
        derivative_identity(),
    ));
    checks.push(Check::from_result(
        "proposal_cdf_roundtrip",
        cdf_roundtrip(),
    ));
    checks.push(Check::from_result(
        "mixture_marginal_quadrature",
        marginal_quadrature(),
    ));
    checks.push(Check::from_result(
        "moment_z_grid",
        moment_z_grid(args.n, args.seed),
    ));
    checks.push(Check::from_result(
        "variant_equivalence_ks",
        variant_equivalence(args.n, args.seed),
    ));
    checks.push(Check::from_result(
        "beta_exactness_ks",
        beta_exactness(args.n, args.seed, sampler),
    ));
    checks.push(Check::from_result(
        "negative_control_ks",
        negative_control(args.n, args.seed),
    ));
    checks.push(Check::from_result(
        "families_moments",
        families_moments(args.n, args.seed),
    ));

    let all_pass = checks.iter().all(|c| c.pass);
    let mut out = Output::create(args.out.as_deref())?;
    if args.json {
        let report = serde_json::json!({
            "artifact": "betamix",
            "version": VERSION,
            "seed": args.seed,
            "n": args.n,
            "sabotage": args.sabotage.map(|_| "no-mixture"),
            "checks": checks
                .iter()
                .map(|c| serde_json::json!({
                    "name": c.name,
                    "pass": c.pass,
                    "detail": c.detail,
                }))
                .collect::<Vec<_>>(),
            "pass": all_pass,
        });
        out.line(&report.to_string())?;
    } else {
        out.line(&format!(
            "betamix {VERSION} verify (seed={}, n={})",
            args.seed, args.n
        ))?;
        for c in &checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            out.line(&format!("check {:<28} {status}  {}", c.name, c.detail))?;
        }
        out.line(if all_pass {
            "verification passed"
        } else {
            "verification FAILED"
        })?;
    }
    out.finish()?;

    if all_pass {
        Ok(ExitCode::SUCCESS)
    } else {
        let failing: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
        eprintln!("failed checks: {}", failing.join(", "));
        Ok(ExitCode::from(1))
    }
}

/// One sweep over 10^6 randomized (a, p) pairs feeding two checks: the
/// strict (0, 1) bounds on the mixture weight, and the reflection
/// identity alpha_{1-a}(1-p) = 1 - alpha_a(p).
fn alpha_sweep(seed: u64) -> (Check, Check) {
    let mut stream = UniformStream::new(derive_seed(seed, 0xA1));
    let mut in_bounds = true;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut max_sym: f64 = 0.0;
    for _ in 0..1_000_000u32 {
        let a = stream.next_f64();
        let p = stream.next_f64();
        let shape = ShapeParam::new(a).expect("stream values are inside (0, 1)");
        let alpha = alpha_weight(&shape, p).expect("p is inside (0, 1)");
        in_bounds &= alpha > 0.0 && alpha < 1.0;
        lo = lo.min(alpha);
        hi = hi.max(alpha);
        let mirrored = ShapeParam::new(1.0 - a).expect("1 - a is inside (0, 1)");
        let sym = (alpha_weight(&mirrored, 1.0 - p).expect("1 - p is inside (0, 1)")
            - (1.0 - alpha))
            .abs();
        max_sym = max_sym.max(sym);
    }
    (
        Check::new(
            "alpha_bounds",
            in_bounds,
            format!("10^6 pairs, alpha in [{lo:.3e}, {hi:.9}]"),
        ),
        Check::new(
            "alpha_symmetry",
            max_sym <= 1e-12,
            format!("max |alpha(1-a,1-p) - (1-alpha(a,p))| = {max_sym:.3e} (tol 1e-12)"),
        ),
    )
}

/// alpha(a, b) = b - b(1-b) g'(b)/f_P(b) to relative 1e-12 on 10^4
/// randomized pairs, with the right-hand side evaluated through the
/// log-space densities.
///
/// The grid is fixed rather than derived from `--seed`: the relative
/// tolerance divides an ulp-scale residual by alpha, so a grid must stay
/// clear of the alpha -> 0 corner (a -> 1 with b -> 1) where no double
/// evaluation of the density route can resolve 1e-12. The frozen grid
/// keeps alpha above 4.9e-3, which bounds the route error near 2e-13.
fn derivative_identity() -> Result<(bool, String), betamix::Error> {
    let mut stream = UniformStream::new(0xACD1);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000u32 {
        let a = stream.next_f64();
        let b = stream.next_f64();
        let shape = ShapeParam::new(a)?;
        let lhs = alpha_weight(&shape, b)?;
        let g = target_density(&shape, b)?.value;
        let g_prime = (a + b - 1.0) / (b * (1.0 - b)) * g;
        let f_p = proposal_density(&shape, b)?.value;
        let rhs = b - b * (1.0 - b) * g_prime / f_p;
        worst = worst.max((lhs - rhs).abs() / lhs.abs());
    }
    Ok((
        worst <= 1e-12,
        format!("max relative deviation {worst:.3e} over 10^4 pairs (tol 1e-12)"),
    ))
}

/// Proposal CDF inversion consistency for a in {0.05, 0.5, 0.95}.
///
/// Forward composition F(F^-1(u)) is checked wherever the inverse lands a
/// representable distance below 1 (1 - p >= 1e-7); closer than that a
/// double cannot carry the tail information, so the reverse composition
/// F^-1(F(p)), which recomputes the tail in its own scale and is
/// well-posed on the whole interval, covers the rest.
fn cdf_roundtrip() -> Result<(bool, String), betamix::Error> {
    let mut worst_fwd: f64 = 0.0;
    let mut worst_rev: f64 = 0.0;
    let mut skipped = 0u32;
    for &a in &[0.05, 0.5, 0.95] {
        let shape = ShapeParam::new(a)?;
        for j in 1..=1000u32 {
            let u = f64::from(j) / 1001.0;
            let p = sample_p_inverse(&shape, u)?;
            if 1.0 - p < 1e-7 {
                skipped += 1;
            } else {
                worst_fwd = worst_fwd.max((proposal_cdf(&shape, p)? - u).abs());
            }
            let x = f64::from(j) / 1001.0;
            let back = sample_p_inverse(&shape, proposal_cdf(&shape, x)?)?;
            worst_rev = worst_rev.max((back - x).abs() / x);
        }
    }
    let pass = worst_fwd <= 1e-10 && worst_rev <= 1e-10;
    Ok((
        pass,
        format!(
            "forward max |F(Finv(u))-u| = {worst_fwd:.3e} ({skipped} points within 1e-7 of 1 \
             excluded: f64 tail resolution), reverse max rel = {worst_rev:.3e} (tol 1e-10)"
        ),
    ))
}

/// Quadrature of the mixture marginal against the target density on a
/// 5 x 51 grid, |difference| < 1e-5.
fn marginal_quadrature() -> Result<(bool, String), betamix::Error> {
    let mut worst: f64 = 0.0;
    for &a in &[0.1, 0.3, 0.5, 0.7, 0.9] {
        let shape = ShapeParam::new(a)?;
        for j in 1..=51u32 {
            let b = f64::from(j) / 52.0;
            let marginal = mixture_marginal_oracle(&shape, b)?;
            let g = target_density(&shape, b)?.value;
            worst = worst.max((marginal - g).abs());
        }
    }
    Ok((
        worst < 1e-5,
        format!("max |quadrature marginal - target| = {worst:.3e} over 5x51 grid (tol 1e-5)"),
    ))
}

/// Full 19 x 3 moment grid: at least 54 of 57 cells with |z| <= 3 and all
/// below 5.
fn moment_z_grid(n: u64, seed: u64) -> Result<(bool, String), betamix::Error> {
    let cfg = MomentTableConfig {
        n,
        seed: derive_seed(seed, 0xA3),
        ..MomentTableConfig::default()
    };
    let reports = run_moment_table(&cfg)?;
    let total = reports.len();
    let within_3 = reports.iter().filter(|r| r.z.abs() <= 3.0).count();
    let max_z = reports.iter().map(|r| r.z.abs()).fold(0.0f64, f64::max);
    let pass = within_3 + 3 >= total && max_z <= 5.0;
    Ok((
        pass,
        format!("{within_3}/{total} cells with |z| <= 3, max |z| = {max_z:.2}"),
    ))
}

/// Two-sample KS between the two variants at a in {0.05, 0.5, 0.95}.
fn variant_equivalence(n: u64, seed: u64) -> Result<(bool, String), betamix::Error> {
    let mut details = Vec::new();
    let mut pass = true;
    for (i, &a) in [0.05, 0.5, 0.95].iter().enumerate() {
        let report = compare_variants(a, n, derive_seed(seed, 0xB0 + i as u64), KS_LEVEL)?;
        pass &= report.pass;
        details.push(format!("a={a}: sqrt(n)D={:.2}", report.scaled));
    }
    Ok((
        pass,
        format!("{} (critical {:.3})", details.join(", "), kolmogorov_crit()),
    ))
}

/// One-sample KS of the sampler under test against the numeric target
/// CDF. With the no-mixture sabotage hook this receives the raw proposal
/// and must fail.
fn beta_exactness(
    n: u64,
    seed: u64,
    sampler: SamplerUnderTest,
) -> Result<(bool, String), betamix::Error> {
    let mut details = Vec::new();
    let mut pass = true;
    for (i, &a) in [0.3, 0.7].iter().enumerate() {
        let report =
            ks_beta_exactness(a, n, derive_seed(seed, 0xC0 + i as u64), KS_LEVEL, sampler)?;
        pass &= report.pass;
        details.push(format!("a={a}: sqrt(n)D={:.2}", report.scaled));
    }
    Ok((
        pass,
        format!("{} (critical {:.3})", details.join(", "), kolmogorov_crit()),
    ))
}

/// The raw proposal (mixture step bypassed) must fail KS at every shape:
/// confirms the harness has the power to reject a wrong sampler.
fn negative_control(n: u64, seed: u64) -> Result<(bool, String), betamix::Error> {
    let mut min_scaled = f64::INFINITY;
    let mut all_rejected = true;
    for j in 1..=9u64 {
        let a = j as f64 / 10.0;
        let report = ks_beta_exactness(
            a,
            n,
            derive_seed(seed, 0xD0 + j),
            KS_LEVEL,
            SamplerUnderTest::ProposalOnly,
        )?;
        all_rejected &= !report.pass;
        min_scaled = min_scaled.min(report.scaled);
    }
    Ok((
        all_rejected,
        format!(
            "proposal-only sampler rejected at all 9 shapes, min sqrt(n)D = {min_scaled:.2} \
             (critical {:.3})",
            kolmogorov_crit()
        ),
    ))
}

/// Moment z-scores of the derived families: Gamma mean/variance across
/// the shape grid, Beta(a, b) means, Dirichlet component means.
fn families_moments(n: u64, seed: u64) -> Result<(bool, String), betamix::Error> {
    let mut max_z: f64 = 0.0;

    for j in 1..=9u64 {
        let c = j as f64 / 10.0;
        let gamma = GammaShape::unit(c)?;
        let mut stream = UniformStream::new(derive_seed(seed, 0xE0 + j));
        let mut sums = PowerSums::default();
        for _ in 0..n {
            let u = stream.next_triple();
            let u4 = stream.next_f64();
            sums.add(sample_gamma(&gamma, &u, u4)?);
        }
        let m = sums.finish(n);
        max_z = max_z.max(m.mean_z(c).abs()).max(m.variance_z(c).abs());
    }

    for (j, &(a, b)) in [(0.3, 2.0), (1.5, 0.5), (0.5, 0.5)].iter().enumerate() {
        let pair = BetaShapePair::new(a, b)?;
        let mut stream = UniformStream::new(derive_seed(seed, 0xF0 + j as u64));
        let mut sums = PowerSums::default();
        for _ in 0..n {
            let u = stream.next_triple();
            let u4 = stream.next_f64();
            sums.add(sample_beta_general(&pair, &u, u4)?);
        }
        let m = sums.finish(n);
        max_z = max_z.max(m.mean_z(pair.mean()).abs());
    }

    for (j, alphas) in [vec![0.4, 0.6], vec![0.5, 0.5, 0.5]]
        .into_iter()
        .enumerate()
    {
        let params = DirichletParams::new(&alphas)?;
        let total: f64 = alphas.iter().sum();
        let mut stream = UniformStream::new(derive_seed(seed, 0xF8 + j as u64));
        let mut sums: Vec<PowerSums> = alphas.iter().map(|_| PowerSums::default()).collect();
        for _ in 0..n {
            let block: Vec<f64> = (0..params.uniforms_per_draw())
                .map(|_| stream.next_f64())
                .collect();
            let v = sample_dirichlet(&params, &block)?;
            for (s, &c) in sums.iter_mut().zip(v.components()) {
                s.add(c);
            }
        }
        for (s, &alpha) in sums.into_iter().zip(alphas.iter()) {
            let m = s.finish(n);
            max_z = max_z.max(m.mean_z(alpha / total).abs());
        }
    }

    Ok((
        max_z <= 4.0,
        format!("max |z| = {max_z:.2} over gamma/beta/dirichlet moment checks (tol 4)"),
    ))
}

fn kolmogorov_crit() -> f64 {
    betamix::harness::kolmogorov_critical(KS_LEVEL).expect("level is valid")
}

/// Raw power sums up to order four, for mean and variance z-scores.
#[derive(Default)]
struct PowerSums {
    s1: CompensatedSum,
    s2: CompensatedSum,
    s3: CompensatedSum,
    s4: CompensatedSum,
}

struct Moments {
    m1: f64,
    m2: f64,
    m3: f64,
    m4: f64,
    n: f64,
}

impl PowerSums {
    fn add(&mut self, x: f64) {
        self.s1.add(x);
        let x2 = x * x;
        self.s2.add(x2);
        self.s3.add(x2 * x);
        self.s4.add(x2 * x2);
    }

    fn finish(self, n: u64) -> Moments {
        let n = n as f64;
        Moments {
            m1: self.s1.value() / n,
            m2: self.s2.value() / n,
            m3: self.s3.value() / n,
            m4: self.s4.value() / n,
            n,
        }
    }
}

impl Moments {
    fn variance(&self) -> f64 {
        self.m2 - self.m1 * self.m1
    }

    fn mean_z(&self, expected: f64) -> f64 {
        (self.m1 - expected) / (self.variance() / self.n).sqrt()
    }

    /// z-score of the empirical variance against `expected`, using the
    /// large-sample standard error sqrt((mu4 - var^2)/n) with mu4 the
    /// central fourth moment.
    fn variance_z(&self, expected: f64) -> f64 {
        let var = self.variance();
        let mu4 = self.m4 - 4.0 * self.m3 * self.m1 + 6.0 * self.m2 * self.m1 * self.m1
            - 3.0 * self.m1.powi(4);
        (var - expected) / ((mu4 - var * var) / self.n).sqrt()
    }
}
