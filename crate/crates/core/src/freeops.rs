//! Free operations of the SDI-steering resource theory, the shared-randomness
//! (LOSR) transformations they deliberately exclude, and the monotonicity
//! harness that samples both.
//!
//! A free operation combines private randomness `μ`, classical pre/post
//! processing kernels and one fixed channel on Bob's side:
//! `σ'_{a'|x'} = Σ_{a,x,μ} p(μ) p(a'|a,x',μ) p(x|x',μ) E(σ_{a|x})`.
//! An LOSR operation lets a single shared label `λ'` steer both the kernels
//! and a per-label channel, which is exactly what can create
//! noncommutativity out of nothing.

use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::assemblage::StateAssemblage;
use crate::error::{Error, Result};
use crate::linalg::{self, Complex64, ComplexMatrix};
use crate::measures;
use crate::random;

/// CPTP map as a Kraus sequence on a fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim: usize,
    ops: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = match ops.first() {
            Some(k) => k.dim(),
            None => {
                return Err(Error::ShapeMismatch {
                    context: "empty Kraus sequence",
                })
            }
        };
        if ops.iter().any(|k| k.dim() != dim) {
            return Err(Error::ShapeMismatch {
                context: "Kraus operator dimensions",
            });
        }
        Ok(Self { dim, ops })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            ops: alloc::vec![ComplexMatrix::identity(dim)],
        }
    }

    pub fn unitary(u: ComplexMatrix) -> Self {
        Self {
            dim: u.dim(),
            ops: alloc::vec![u],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    /// `‖Σ_k K_k† K_k - 𝟙‖_max`.
    pub fn completeness_residual(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim);
        for k in &self.ops {
            sum = &sum + &(&k.adjoint() * k);
        }
        (&sum - &ComplexMatrix::identity(self.dim)).max_abs()
    }

    /// `Σ_k K_k m K_k†`.
    pub fn apply(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim);
        for k in &self.ops {
            out = &out + &(&(k * m) * &k.adjoint());
        }
        out
    }
}

/// Classical kernel tables shared by free and LOSR operations.
///
/// `output[((μ·n_x_out + x')·n_a_in + a)·n_a_out + a']` is `p(a'|a,x',μ)` and
/// `input[(μ·n_x_out + x')·n_x_in + x]` is `p(x|x',μ)`.
#[derive(Debug, Clone, PartialEq)]
struct KernelTables {
    n_labels: usize,
    n_x_in: usize,
    n_x_out: usize,
    n_a_in: usize,
    n_a_out: usize,
    output: Vec<f64>,
    input: Vec<f64>,
}

impl KernelTables {
    fn out_prob(&self, label: usize, xp: usize, a: usize, ap: usize) -> f64 {
        self.output[((label * self.n_x_out + xp) * self.n_a_in + a) * self.n_a_out + ap]
    }

    fn in_prob(&self, label: usize, xp: usize, x: usize) -> f64 {
        self.input[(label * self.n_x_out + xp) * self.n_x_in + x]
    }

    fn validate(&self, tol: f64) -> Result<()> {
        if self.output.len() != self.n_labels * self.n_x_out * self.n_a_in * self.n_a_out
            || self.input.len() != self.n_labels * self.n_x_out * self.n_x_in
        {
            return Err(Error::ShapeMismatch {
                context: "kernel table lengths",
            });
        }
        for v in self.output.iter().chain(self.input.iter()) {
            if *v < -tol {
                return Err(Error::InvalidOperation {
                    what: "kernel negativity",
                    magnitude: -*v,
                });
            }
        }
        for label in 0..self.n_labels {
            for xp in 0..self.n_x_out {
                for a in 0..self.n_a_in {
                    let s: f64 = (0..self.n_a_out)
                        .map(|ap| self.out_prob(label, xp, a, ap))
                        .sum();
                    if (s - 1.0).abs() > tol {
                        return Err(Error::InvalidOperation {
                            what: "output kernel stochasticity",
                            magnitude: (s - 1.0).abs(),
                        });
                    }
                }
                let s: f64 = (0..self.n_x_in)
                    .map(|x| self.in_prob(label, xp, x))
                    .sum();
                if (s - 1.0).abs() > tol {
                    return Err(Error::InvalidOperation {
                        what: "input kernel stochasticity",
                        magnitude: (s - 1.0).abs(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Local operation without shared randomness: private weights `p(μ)`,
/// classical kernels per `μ` and one channel applied regardless of `μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeOperation {
    weights: Vec<f64>,
    kernels: KernelTables,
    channel: KrausChannel,
}

impl FreeOperation {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        weights: Vec<f64>,
        n_x_in: usize,
        n_x_out: usize,
        n_a_in: usize,
        n_a_out: usize,
        output: Vec<f64>,
        input: Vec<f64>,
        channel: KrausChannel,
    ) -> Result<Self> {
        let op = Self {
            kernels: KernelTables {
                n_labels: weights.len(),
                n_x_in,
                n_x_out,
                n_a_in,
                n_a_out,
                output,
                input,
            },
            weights,
            channel,
        };
        op.validate(1e-8)?;
        Ok(op)
    }

    /// Identity relabelings and the identity channel.
    pub fn identity(dim: usize, n_x: usize, n_a: usize) -> Self {
        let weights = alloc::vec![1.0];
        let mut output = alloc::vec![0.0; n_x * n_a * n_a];
        for xp in 0..n_x {
            for a in 0..n_a {
                output[(xp * n_a + a) * n_a + a] = 1.0;
            }
        }
        let mut input = alloc::vec![0.0; n_x * n_x];
        for xp in 0..n_x {
            input[xp * n_x + xp] = 1.0;
        }
        Self {
            weights,
            kernels: KernelTables {
                n_labels: 1,
                n_x_in: n_x,
                n_x_out: n_x,
                n_a_in: n_a,
                n_a_out: n_a,
                output,
                input,
            },
            channel: KrausChannel::identity(dim),
        }
    }

    /// Replaces the channel, keeping the classical kernels.
    pub fn with_channel(mut self, channel: KrausChannel) -> Self {
        self.channel = channel;
        self
    }

    pub fn channel(&self) -> &KrausChannel {
        &self.channel
    }

    pub fn n_x_out(&self) -> usize {
        self.kernels.n_x_out
    }

    pub fn n_a_out(&self) -> usize {
        self.kernels.n_a_out
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let w: f64 = self.weights.iter().sum();
        if (w - 1.0).abs() > tol || self.weights.iter().any(|&x| x < -tol) {
            return Err(Error::InvalidOperation {
                what: "label distribution",
                magnitude: (w - 1.0).abs(),
            });
        }
        self.kernels.validate(tol)?;
        let kraus = self.channel.completeness_residual();
        if kraus > tol {
            return Err(Error::InvalidOperation {
                what: "Kraus completeness",
                magnitude: kraus,
            });
        }
        Ok(())
    }
}

/// Applies a free operation to a state assemblage.
pub fn apply_free(f: &FreeOperation, s: &StateAssemblage) -> Result<StateAssemblage> {
    f.validate(1e-8)?;
    if f.channel.dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            context: "free operation channel vs assemblage",
            expected: s.dim(),
            found: f.channel.dim(),
        });
    }
    if f.kernels.n_x_in != s.n_settings() || f.kernels.n_a_in != s.n_outcomes() {
        return Err(Error::ShapeMismatch {
            context: "free operation kernels vs assemblage",
        });
    }
    let mapped: Vec<ComplexMatrix> = s.elements().iter().map(|e| f.channel.apply(e)).collect();
    transform_with(
        &f.weights,
        &f.kernels,
        |_label, idx| &mapped[idx],
        s,
    )
}

/// LOSR operation: one shared label indexes both the kernels and a per-label
/// channel.
#[derive(Debug, Clone, PartialEq)]
pub struct LosrOperation {
    weights: Vec<f64>,
    kernels: KernelTables,
    channels: Vec<KrausChannel>,
}

impl LosrOperation {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        weights: Vec<f64>,
        n_x_in: usize,
        n_x_out: usize,
        n_a_in: usize,
        n_a_out: usize,
        output: Vec<f64>,
        input: Vec<f64>,
        channels: Vec<KrausChannel>,
    ) -> Result<Self> {
        if channels.len() != weights.len() {
            return Err(Error::ShapeMismatch {
                context: "LOSR channel count vs label count",
            });
        }
        let op = Self {
            kernels: KernelTables {
                n_labels: weights.len(),
                n_x_in,
                n_x_out,
                n_a_in,
                n_a_out,
                output,
                input,
            },
            weights,
            channels,
        };
        op.validate(1e-8)?;
        Ok(op)
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let w: f64 = self.weights.iter().sum();
        if (w - 1.0).abs() > tol || self.weights.iter().any(|&x| x < -tol) {
            return Err(Error::InvalidOperation {
                what: "shared label distribution",
                magnitude: (w - 1.0).abs(),
            });
        }
        self.kernels.validate(tol)?;
        for c in &self.channels {
            let kraus = c.completeness_residual();
            if kraus > tol {
                return Err(Error::InvalidOperation {
                    what: "per-label Kraus completeness",
                    magnitude: kraus,
                });
            }
        }
        Ok(())
    }
}

/// Applies an LOSR operation to a state assemblage.
pub fn apply_losr(l: &LosrOperation, s: &StateAssemblage) -> Result<StateAssemblage> {
    l.validate(1e-8)?;
    if l.channels.iter().any(|c| c.dim() != s.dim()) {
        return Err(Error::DimensionMismatch {
            context: "LOSR channels vs assemblage",
            expected: s.dim(),
            found: l.channels[0].dim(),
        });
    }
    if l.kernels.n_x_in != s.n_settings() || l.kernels.n_a_in != s.n_outcomes() {
        return Err(Error::ShapeMismatch {
            context: "LOSR kernels vs assemblage",
        });
    }
    // Per-label channel outputs.
    let mapped: Vec<Vec<ComplexMatrix>> = l
        .channels
        .iter()
        .map(|c| s.elements().iter().map(|e| c.apply(e)).collect())
        .collect();
    transform_with(&l.weights, &l.kernels, |label, idx| &mapped[label][idx], s)
}

/// Shared classical-kernel contraction for free and LOSR operations.
fn transform_with<'a>(
    weights: &[f64],
    kernels: &KernelTables,
    mapped: impl Fn(usize, usize) -> &'a ComplexMatrix,
    s: &StateAssemblage,
) -> Result<StateAssemblage> {
    let dim = s.dim();
    let mut elements = Vec::with_capacity(kernels.n_x_out * kernels.n_a_out);
    for xp in 0..kernels.n_x_out {
        for ap in 0..kernels.n_a_out {
            let mut sigma = ComplexMatrix::zeros(dim);
            for (label, &w) in weights.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                for x in 0..kernels.n_x_in {
                    let px = kernels.in_prob(label, xp, x);
                    if px == 0.0 {
                        continue;
                    }
                    for a in 0..kernels.n_a_in {
                        let pa = kernels.out_prob(label, xp, a, ap);
                        let coeff = w * px * pa;
                        if coeff == 0.0 {
                            continue;
                        }
                        sigma = &sigma + &mapped(label, x * kernels.n_a_in + a).scale(coeff);
                    }
                }
            }
            elements.push(sigma);
        }
    }
    StateAssemblage::new(dim, kernels.n_x_out, kernels.n_a_out, elements)
}

/// Reproducible random free operation with matching input and output shape:
/// flat-Dirichlet kernels and a Haar-derived Kraus channel obtained from a
/// random isometry dilation with environment dimension at most `d²`.
pub fn sample_free(dim: usize, n_x: usize, n_a: usize, seed: u64) -> FreeOperation {
    let mut rng = random::rng_from_seed(seed);
    sample_free_with(dim, n_x, n_a, ChannelClass::Random, &mut rng)
}

/// Which channel a sampled operation carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelClass {
    /// Haar-derived random Kraus channel.
    Random,
    /// Identity channel (classical processing only).
    Identity,
    /// Haar-random unitary conjugation.
    Unitary,
}

/// Sampler behind [`sample_free`], reusable with an explicit generator and
/// channel class.
pub fn sample_free_with(
    dim: usize,
    n_x: usize,
    n_a: usize,
    class: ChannelClass,
    rng: &mut ChaCha8Rng,
) -> FreeOperation {
    let n_mu = rng.gen_range(1..=3usize);
    let weights = random::dirichlet_flat(n_mu, rng);
    let mut output = Vec::with_capacity(n_mu * n_x * n_a * n_a);
    let mut input = Vec::with_capacity(n_mu * n_x * n_x);
    for _mu in 0..n_mu {
        for _xp in 0..n_x {
            for _a in 0..n_a {
                output.extend(random::dirichlet_flat(n_a, rng));
            }
            input.extend(random::dirichlet_flat(n_x, rng));
        }
    }
    let channel = match class {
        ChannelClass::Identity => KrausChannel::identity(dim),
        ChannelClass::Unitary => KrausChannel::unitary(random::haar_unitary(dim, rng)),
        ChannelClass::Random => random_channel(dim, rng),
    };
    FreeOperation::new(weights, n_x, n_x, n_a, n_a, output, input, channel)
        .expect("sampled tables are stochastic by construction")
}

/// Random CPTP channel from a Haar isometry dilation; environment dimension
/// sampled in `1..=d²` (d = 1 gives a random unitary).
pub fn random_channel(dim: usize, rng: &mut ChaCha8Rng) -> KrausChannel {
    let env = rng.gen_range(1..=dim * dim);
    let u = random::haar_unitary(dim * env, rng);
    // Kraus blocks K_e[i][j] = U[(i·env + e)][j]; completeness follows from
    // the isometry formed by the first `dim` columns of U.
    let ops: Vec<ComplexMatrix> = (0..env)
        .map(|e| ComplexMatrix::from_fn(dim, |i, j| u.get(i * env + e, j)))
        .collect();
    KrausChannel::new(ops).expect("blocks share the system dimension")
}

/// Shared-randomness witness: an LOSR operation that maps a commuting-SEO
/// assemblage to one with strictly positive SDI steerability.
#[derive(Debug, Clone)]
pub struct LosrWitness {
    pub input: StateAssemblage,
    pub operation: LosrOperation,
    pub output: StateAssemblage,
    pub input_steerability: f64,
    pub output_steerability: f64,
}

/// Constructs the witness: the input stores one classical bit in the
/// computational basis (commuting SEO); two shared labels either keep it or
/// rotate Bob into the conjugate basis while the relabeling routes the
/// matching setting, leaving mutually unbiased directions in the output SEO.
pub fn losr_noncommutativity_witness() -> Result<LosrWitness> {
    // σ_{a|x} = |a⟩⟨a| / 2 for both settings.
    let half_proj: Vec<ComplexMatrix> = (0..2)
        .map(|a| {
            let e = linalg::basis_ket(2, a);
            linalg::outer(&e, &e).scale(0.5)
        })
        .collect();
    let input = StateAssemblage::new(
        2,
        2,
        2,
        alloc::vec![
            half_proj[0].clone(),
            half_proj[1].clone(),
            half_proj[0].clone(),
            half_proj[1].clone(),
        ],
    )?;

    let hadamard = {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::from_rows(&[
            alloc::vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
            alloc::vec![Complex64::new(s, 0.0), Complex64::new(-s, 0.0)],
        ])?
    };

    // Output kernel: label 0 passes a through for x' = 0 and randomizes for
    // x' = 1; label 1 mirrors this.
    let mut output = alloc::vec![0.0f64; 2 * 2 * 2 * 2];
    let mut set_out = |label: usize, xp: usize, a: usize, ap: usize, v: f64| {
        output[((label * 2 + xp) * 2 + a) * 2 + ap] = v;
    };
    for a in 0..2 {
        for ap in 0..2 {
            set_out(0, 0, a, ap, if a == ap { 1.0 } else { 0.0 });
            set_out(0, 1, a, ap, 0.5);
            set_out(1, 0, a, ap, 0.5);
            set_out(1, 1, a, ap, if a == ap { 1.0 } else { 0.0 });
        }
    }
    // Input kernel: always query the first setting.
    let mut input_kernel = alloc::vec![0.0f64; 2 * 2 * 2];
    for label in 0..2 {
        for xp in 0..2 {
            input_kernel[(label * 2 + xp) * 2] = 1.0;
        }
    }
    let operation = LosrOperation::new(
        alloc::vec![0.5, 0.5],
        2,
        2,
        2,
        2,
        output,
        input_kernel,
        alloc::vec![KrausChannel::identity(2), KrausChannel::unitary(hadamard)],
    )?;

    let output_assemblage = apply_losr(&operation, &input)?;
    let input_steerability = measures::sdi_steerability(&input, 1.0, 1e-9)?;
    let output_steerability = measures::sdi_steerability(&output_assemblage, 1.0, 1e-9)?;
    Ok(LosrWitness {
        input,
        operation,
        output: output_assemblage,
        input_steerability,
        output_steerability,
    })
}

/// Accumulated margins of one sampled class.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MarginStats {
    pub samples: usize,
    pub max_margin: f64,
    pub mean_margin: f64,
}

impl MarginStats {
    fn from_margins(margins: &[f64]) -> Self {
        let samples = margins.len();
        let max_margin = margins.iter().cloned().fold(0.0, f64::max);
        let mean_margin = if samples == 0 {
            0.0
        } else {
            margins.iter().sum::<f64>() / samples as f64
        };
        Self {
            samples,
            max_margin,
            mean_margin,
        }
    }
}

/// A sampled operation that increased the measure beyond the report slack.
#[derive(Debug, Clone)]
pub struct MonotonicityViolation {
    pub class: ChannelClass,
    pub sample_index: usize,
    pub margin: f64,
    pub operation: FreeOperation,
}

/// Margins `max(0, S(F[σ]) - S(σ))` over sampled free operations, split by
/// channel class.
///
/// The identity-channel and unitary-channel-with-identity-kernels classes
/// are provably non-increasing (the reduced state is fixed, respectively
/// unitarily conjugated), so their margins stay at numerical noise; general
/// channels recompute the SEO against a transformed reduced state and are
/// surveyed empirically.
#[derive(Debug, Clone)]
pub struct MonotonicityReport {
    pub input_steerability: f64,
    pub general: MarginStats,
    pub identity_channel: MarginStats,
    pub unitary_channel: MarginStats,
    pub violations: Vec<MonotonicityViolation>,
}

/// Violation slack for the reported (general-channel) class.
pub const MONOTONICITY_REPORT_SLACK: f64 = 1e-7;

/// Samples `n` operations of each class against the given assemblage.
pub fn monotonicity_report(s: &StateAssemblage, n: usize, seed: u64) -> Result<MonotonicityReport> {
    if s.n_settings() != 2 {
        return Err(Error::UnsupportedScenario {
            required: "exactly two measurement settings",
        });
    }
    let s_in = measures::sdi_steerability(s, 1.0, 1e-9)?;
    let mut rng = random::rng_from_seed(seed);
    let mut violations = Vec::new();
    let mut margins = |class: ChannelClass, rng: &mut ChaCha8Rng| -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut op = sample_free_with(s.dim(), 2, s.n_outcomes(), class, rng);
            if class == ChannelClass::Unitary {
                // Provable sub-class keeps the kernels trivial.
                let channel = op.channel().clone();
                op = FreeOperation::identity(s.dim(), 2, s.n_outcomes()).with_channel(channel);
            }
            let out_assemblage = apply_free(&op, s)?;
            let s_out = measures::sdi_steerability(&out_assemblage, 1.0, 1e-9)?;
            let margin = (s_out - s_in).max(0.0);
            if margin > MONOTONICITY_REPORT_SLACK {
                violations.push(MonotonicityViolation {
                    class,
                    sample_index: k,
                    margin,
                    operation: op,
                });
            }
            out.push(margin);
        }
        Ok(out)
    };
    let general = MarginStats::from_margins(&margins(ChannelClass::Random, &mut rng)?);
    let identity_channel = MarginStats::from_margins(&margins(ChannelClass::Identity, &mut rng)?);
    let unitary_channel = MarginStats::from_margins(&margins(ChannelClass::Unitary, &mut rng)?);
    Ok(MonotonicityReport {
        input_steerability: s_in,
        general,
        identity_channel,
        unitary_channel,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assemblage::{assemblage_from_pure, PureEntangledState};
    use crate::scenarios;

    fn mub_assemblage() -> StateAssemblage {
        let psi = PureEntangledState::new(&[0.5f64.sqrt(), 0.5f64.sqrt()]).unwrap();
        assemblage_from_pure(&psi, &scenarios::mub_pair(2)).unwrap()
    }

    #[test]
    fn identity_operation_is_identity() {
        let s = mub_assemblage();
        let op = FreeOperation::identity(2, 2, 2);
        let out = apply_free(&op, &s).unwrap();
        for (a, b) in out.elements().iter().zip(s.elements()) {
            assert!((a - b).max_abs() < 1e-15);
        }
    }

    #[test]
    fn output_relabeling_preserves_measure() {
        let s = mub_assemblage();
        // a' = 1 - a on every setting.
        let mut output = alloc::vec![0.0; 2 * 2 * 2];
        for xp in 0..2 {
            for a in 0..2 {
                output[((xp) * 2 + a) * 2 + (1 - a)] = 1.0;
            }
        }
        let mut input = alloc::vec![0.0; 2 * 2];
        for xp in 0..2 {
            input[xp * 2 + xp] = 1.0;
        }
        let op = FreeOperation::new(
            alloc::vec![1.0],
            2,
            2,
            2,
            2,
            output,
            input,
            KrausChannel::identity(2),
        )
        .unwrap();
        let out = apply_free(&op, &s).unwrap();
        for x in 0..2 {
            for a in 0..2 {
                assert!((out.element(x, a) - s.element(x, 1 - a)).max_abs() < 1e-15);
            }
        }
        let s_in = measures::sdi_steerability(&s, 1.0, 1e-9).unwrap();
        let s_out = measures::sdi_steerability(&out, 1.0, 1e-9).unwrap();
        assert!((s_in - s_out).abs() < 1e-12);
    }

    #[test]
    fn full_coarse_graining_kills_the_resource() {
        let s = mub_assemblage();
        let mut output = alloc::vec![0.0; 2 * 2 * 2];
        for xp in 0..2 {
            for a in 0..2 {
                for ap in 0..2 {
                    output[((xp) * 2 + a) * 2 + ap] = 0.5;
                }
            }
        }
        let mut input = alloc::vec![0.0; 2 * 2];
        for xp in 0..2 {
            input[xp * 2 + xp] = 1.0;
        }
        let op = FreeOperation::new(
            alloc::vec![1.0],
            2,
            2,
            2,
            2,
            output,
            input,
            KrausChannel::identity(2),
        )
        .unwrap();
        let out = apply_free(&op, &s).unwrap();
        let s_out = measures::sdi_steerability(&out, 1.0, 1e-9).unwrap();
        assert!(s_out < 1e-12, "coarse-grained S = {s_out}");
    }

    #[test]
    fn invalid_kernels_are_rejected() {
        let op = FreeOperation::new(
            alloc::vec![1.0],
            2,
            2,
            2,
            2,
            alloc::vec![0.9; 8], // rows sum to 1.8
            alloc::vec![0.5; 4],
            KrausChannel::identity(2),
        );
        assert!(matches!(op, Err(Error::InvalidOperation { .. })));
    }

    #[test]
    fn sampled_operations_validate() {
        for seed in 0..50u64 {
            let op = sample_free(2, 2, 2, seed);
            assert!(op.validate(1e-9).is_ok(), "seed {seed}");
            assert_eq!(op, sample_free(2, 2, 2, seed));
        }
        // Environment dimension 1 is a unitary: single Kraus operator.
        let mut rng = random::rng_from_seed(123);
        loop {
            let c = random_channel(2, &mut rng);
            if c.operators().len() == 1 {
                let u = &c.operators()[0];
                let dev = (&(&u.adjoint() * u) - &ComplexMatrix::identity(2)).max_abs();
                assert!(dev < 1e-12);
                break;
            }
        }
    }

    #[test]
    fn degenerate_losr_matches_free_operation() {
        let s = mub_assemblage();
        let mut rng = random::rng_from_seed(77);
        let free = sample_free_with(2, 2, 2, ChannelClass::Random, &mut rng);
        // Same kernels, same channel on every shared label.
        let losr = LosrOperation::new(
            free.weights.clone(),
            2,
            2,
            2,
            2,
            free.kernels.output.clone(),
            free.kernels.input.clone(),
            alloc::vec![free.channel.clone(); free.weights.len()],
        )
        .unwrap();
        let via_free = apply_free(&free, &s).unwrap();
        let via_losr = apply_losr(&losr, &s).unwrap();
        for (a, b) in via_free.elements().iter().zip(via_losr.elements()) {
            assert!((a - b).max_abs() < 1e-12);
        }
    }

    #[test]
    fn losr_witness_creates_noncommutativity() {
        let w = losr_noncommutativity_witness().unwrap();
        assert!(w.input_steerability < 1e-12);
        assert!(
            w.output_steerability > 1e-3,
            "witness output S = {}",
            w.output_steerability
        );
        // Expected value 1/4 from the mutually unbiased half-sharp directions.
        assert!((w.output_steerability - 0.25).abs() < 1e-10);
    }

    #[test]
    fn monotonicity_subclasses_hold_on_mub_assemblage() {
        let s = mub_assemblage();
        let report = monotonicity_report(&s, 40, 5).unwrap();
        assert!(report.identity_channel.max_margin <= 1e-9);
        assert!(report.unitary_channel.max_margin <= 1e-9);
    }
}
