//! Steering-equivalent observables and the constructive reconstructions
//! tied to them: commutativity verdicts, common-eigenbasis decompositions,
//! dimensionally-restricted local-hidden-state models and the
//! classical-quantum state that reproduces any commuting-SEO assemblage.

use alloc::vec::Vec;

use rand::Rng;

use crate::assemblage::{
    BipartiteState, Constraint, MeasurementAssemblage, StateAssemblage, ValidationReport,
};
use crate::error::{Error, Result};
use crate::linalg::{self, Complex64, ComplexMatrix, Isometry};
use crate::random;

/// Anything that exposes an indexed family of equal-dimension operators.
///
/// Implemented by measurement assemblages and SEOs so the commutativity
/// machinery applies to both: on an SEO the verdict is the SDI-steerability
/// decision, on a measurement assemblage it is the incoherence decision.
pub trait OperatorFamily {
    fn family_dim(&self) -> usize;
    fn family_settings(&self) -> usize;
    fn family_outcomes(&self) -> usize;
    fn family_element(&self, x: usize, a: usize) -> &ComplexMatrix;
}

impl OperatorFamily for MeasurementAssemblage {
    fn family_dim(&self) -> usize {
        self.dim()
    }
    fn family_settings(&self) -> usize {
        self.n_settings()
    }
    fn family_outcomes(&self) -> usize {
        self.n_outcomes()
    }
    fn family_element(&self, x: usize, a: usize) -> &ComplexMatrix {
        self.element(x, a)
    }
}

/// Steering-equivalent POVM elements `B_{a|x} = ρ_B^{-1/2} σ_{a|x} ρ_B^{-1/2}`.
///
/// For a rank-deficient reduced state the elements live on the support
/// subspace: `dim` is then the support dimension and `isometry` maps support
/// coordinates back into Bob's space. Downstream normalizations must use
/// this support dimension, which is why it is recorded here.
#[derive(Debug, Clone)]
pub struct Seo {
    dim: usize,
    n_x: usize,
    n_a: usize,
    elements: Vec<ComplexMatrix>, // x-major
    isometry: Option<Isometry>,
    source_rank_deficient: bool,
    support_eigenvalues: Vec<f64>, // of ρ_B, descending
}

impl Seo {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_settings(&self) -> usize {
        self.n_x
    }

    pub fn n_outcomes(&self) -> usize {
        self.n_a
    }

    pub fn element(&self, x: usize, a: usize) -> &ComplexMatrix {
        &self.elements[x * self.n_a + a]
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// Support isometry; `None` marks a full-rank reduced state (identity).
    pub fn isometry(&self) -> Option<&Isometry> {
        self.isometry.as_ref()
    }

    pub fn source_rank_deficient(&self) -> bool {
        self.source_rank_deficient
    }

    /// Eigenvalues of `ρ_B` on its support, descending.
    pub fn support_eigenvalues(&self) -> &[f64] {
        &self.support_eigenvalues
    }

    /// Smallest gap between neighboring support eigenvalues, relative to the
    /// largest one. Near-zero gaps mean a degenerate reduced state, where the
    /// hidden-state basis of the reconstruction is not unique.
    pub fn min_support_gap(&self) -> f64 {
        let top = self.support_eigenvalues.first().copied().unwrap_or(0.0);
        if top <= 0.0 || self.support_eigenvalues.len() < 2 {
            return f64::INFINITY;
        }
        self.support_eigenvalues
            .windows(2)
            .map(|w| (w[0] - w[1]).abs() / top)
            .fold(f64::INFINITY, f64::min)
    }

    /// POVM-style validation on the support.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        let m = MeasurementAssemblage::new(self.dim, self.n_x, self.n_a, self.elements.clone())
            .expect("SEO shape is consistent by construction");
        m.validate(tol)
    }
}

impl OperatorFamily for Seo {
    fn family_dim(&self) -> usize {
        self.dim
    }
    fn family_settings(&self) -> usize {
        self.n_x
    }
    fn family_outcomes(&self) -> usize {
        self.n_a
    }
    fn family_element(&self, x: usize, a: usize) -> &ComplexMatrix {
        self.element(x, a)
    }
}

/// Extracts the SEO of a state assemblage.
///
/// Full-rank `ρ_B`: elements stay in Bob's basis. Rank-deficient `ρ_B`:
/// every element is compressed onto the support through the isometry of
/// [`linalg::pinv_sqrt`] and `dim` shrinks to the support dimension.
pub fn seo_of(s: &StateAssemblage, tol: f64) -> Result<Seo> {
    let rho_b = s.reduced_state();
    let pinv = linalg::pinv_sqrt(&rho_b, tol)?;
    let full_rank = pinv.support_dim == s.dim();
    let elements: Vec<ComplexMatrix> = if full_rank {
        let p = pinv.embedded();
        s.elements().iter().map(|sigma| &(&p * sigma) * &p).collect()
    } else {
        s.elements()
            .iter()
            .map(|sigma| {
                let compressed = pinv.isometry.compress(sigma);
                &(&pinv.inv_sqrt * &compressed) * &pinv.inv_sqrt
            })
            .collect()
    };
    Ok(Seo {
        dim: pinv.support_dim,
        n_x: s.n_settings(),
        n_a: s.n_outcomes(),
        elements,
        isometry: if full_rank {
            None
        } else {
            Some(pinv.isometry.clone())
        },
        source_rank_deficient: !full_rank,
        support_eigenvalues: pinv.support_eigenvalues,
    })
}

/// Outcome of the pairwise commutativity decision.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutativityVerdict {
    pub commuting: bool,
    /// Largest `‖[E, E']‖_p` over all pairs, including within a setting.
    pub max_commutator_norm: f64,
    /// Indices `((x, a), (x', a'))` of the worst pair, if any pair exists.
    pub worst_pair: Option<((usize, usize), (usize, usize))>,
}

/// Checks `‖[E_{a|x}, E_{a'|x'}]‖_p` over all pairs of family elements.
pub fn pairwise_commutativity<F: OperatorFamily + ?Sized>(
    family: &F,
    p: f64,
    tol: f64,
) -> Result<CommutativityVerdict> {
    let n_x = family.family_settings();
    let n_a = family.family_outcomes();
    let mut max_norm = 0.0f64;
    let mut worst = None;
    let mut indices = Vec::with_capacity(n_x * n_a);
    for x in 0..n_x {
        for a in 0..n_a {
            indices.push((x, a));
        }
    }
    for (i, &(x, a)) in indices.iter().enumerate() {
        for &(xp, ap) in indices.iter().skip(i + 1) {
            let comm = linalg::commutator(
                family.family_element(x, a),
                family.family_element(xp, ap),
            )?;
            let norm = linalg::schatten_norm(&comm, p)?;
            if norm > max_norm {
                max_norm = norm;
                worst = Some(((x, a), (xp, ap)));
            }
        }
    }
    Ok(CommutativityVerdict {
        commuting: max_norm <= tol,
        max_commutator_norm: max_norm,
        worst_pair: worst,
    })
}

/// A common eigenbasis together with the diagonal coefficients of every
/// element in it.
#[derive(Debug, Clone)]
pub struct IncoherentDecomposition {
    /// Columns form the common eigenbasis.
    pub basis: ComplexMatrix,
    /// `α_{i|(a,x)} = ⟨i|E_{a|x}|i⟩`, indexed `(x·n_a + a)·dim + i`.
    pub coefficients: Vec<f64>,
    pub n_x: usize,
    pub n_a: usize,
    /// Largest reconstruction deviation over the family.
    pub residual: f64,
}

impl IncoherentDecomposition {
    pub fn coefficient(&self, x: usize, a: usize, i: usize) -> f64 {
        self.coefficients[(x * self.n_a + a) * self.basis.dim() + i]
    }
}

/// Result of attempting a simultaneous diagonalization.
#[derive(Debug, Clone)]
pub enum DecompositionOutcome {
    Decomposed(IncoherentDecomposition),
    /// The family does not commute; carries the witnessing norm.
    Refused { max_commutator_norm: f64 },
}

const DECOMPOSITION_RETRY_CAP: usize = 16;
const DECOMPOSITION_SEED: u64 = 0x5EED_0B05;

/// Simultaneous diagonalization of a pairwise commuting family.
///
/// The common eigenbasis is found by diagonalizing a random real-coefficient
/// combination of the elements; an accidental degeneracy of the combination
/// triggers a restart with a fresh one, up to a retry cap. Seeding is fixed,
/// so refusals and successes are reproducible.
pub fn incoherent_decomposition<F: OperatorFamily + ?Sized>(
    family: &F,
    tol: f64,
) -> Result<DecompositionOutcome> {
    let verdict = pairwise_commutativity(family, 1.0, tol)?;
    if !verdict.commuting {
        return Ok(DecompositionOutcome::Refused {
            max_commutator_norm: verdict.max_commutator_norm,
        });
    }
    let n_x = family.family_settings();
    let n_a = family.family_outcomes();
    let dim = family.family_dim();
    let count = n_x * n_a;

    for attempt in 0..DECOMPOSITION_RETRY_CAP {
        let mut rng = random::rng_from_seed(DECOMPOSITION_SEED.wrapping_add(attempt as u64));
        let mut combo = ComplexMatrix::zeros(dim);
        for x in 0..n_x {
            for a in 0..n_a {
                let c: f64 = rng.gen_range(0.25..1.25);
                combo = &combo + &family.family_element(x, a).hermitized().scale(c);
            }
        }
        let eig = linalg::eigh(&combo);
        let columns: Vec<Vec<Complex64>> = (0..dim).map(|t| eig.eigenvector(t)).collect();

        let mut coefficients = Vec::with_capacity(count * dim);
        let mut residual = 0.0f64;
        for x in 0..n_x {
            for a in 0..n_a {
                let e = family.family_element(x, a);
                let mut rebuilt = ComplexMatrix::zeros(dim);
                for col in &columns {
                    let alpha = linalg::inner(col, &e.mat_vec(col)).re;
                    coefficients.push(alpha);
                    rebuilt = &rebuilt + &linalg::outer(col, col).scale(alpha);
                }
                residual = residual.max((&rebuilt - e).max_abs());
            }
        }
        if residual <= tol {
            let basis = ComplexMatrix::from_fn(dim, |i, t| columns[t][i]);
            return Ok(DecompositionOutcome::Decomposed(IncoherentDecomposition {
                basis,
                coefficients,
                n_x,
                n_a,
                residual,
            }));
        }
    }
    Err(Error::DegeneracyRetriesExhausted {
        attempts: DECOMPOSITION_RETRY_CAP,
    })
}

/// Explicit decomposition `σ_{a|x} = Σ_λ p(λ) p(a|x,λ) ρ_λ` with hidden
/// variable cardinality bounded by the SEO support dimension.
#[derive(Debug, Clone)]
pub struct LhsModel {
    dim: usize,
    n_x: usize,
    n_a: usize,
    weights: Vec<f64>,
    states: Vec<ComplexMatrix>,
    /// `p(a|x,λ)` indexed `(x·n_a + a)·d_λ + λ`.
    response: Vec<f64>,
}

impl LhsModel {
    pub fn new(
        dim: usize,
        n_x: usize,
        n_a: usize,
        weights: Vec<f64>,
        states: Vec<ComplexMatrix>,
        response: Vec<f64>,
    ) -> Result<Self> {
        let d_lambda = weights.len();
        if d_lambda == 0
            || states.len() != d_lambda
            || response.len() != n_x * n_a * d_lambda
            || states.iter().any(|s| s.dim() != dim)
        {
            return Err(Error::ShapeMismatch {
                context: "LHS model tables",
            });
        }
        Ok(Self {
            dim,
            n_x,
            n_a,
            weights,
            states,
            response,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn d_lambda(&self) -> usize {
        self.weights.len()
    }

    pub fn n_settings(&self) -> usize {
        self.n_x
    }

    pub fn n_outcomes(&self) -> usize {
        self.n_a
    }

    pub fn weight(&self, lambda: usize) -> f64 {
        self.weights[lambda]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn state(&self, lambda: usize) -> &ComplexMatrix {
        &self.states[lambda]
    }

    pub fn response(&self, x: usize, a: usize, lambda: usize) -> f64 {
        self.response[(x * self.n_a + a) * self.d_lambda() + lambda]
    }

    /// Assembles `Σ_λ p(λ) p(a|x,λ) ρ_λ`.
    pub fn assemblage(&self) -> StateAssemblage {
        let mut elements = Vec::with_capacity(self.n_x * self.n_a);
        for x in 0..self.n_x {
            for a in 0..self.n_a {
                let mut sigma = ComplexMatrix::zeros(self.dim);
                for l in 0..self.d_lambda() {
                    let w = self.weights[l] * self.response(x, a, l);
                    if w != 0.0 {
                        sigma = &sigma + &self.states[l].scale(w);
                    }
                }
                elements.push(sigma);
            }
        }
        StateAssemblage::new(self.dim, self.n_x, self.n_a, elements)
            .expect("shape consistent by construction")
    }

    /// Largest entry deviation between the model's assemblage and a target.
    pub fn reconstruction_residual(&self, target: &StateAssemblage) -> f64 {
        let own = self.assemblage();
        own.elements()
            .iter()
            .zip(target.elements())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).max_abs()))
    }

    pub fn validate(&self, tol: f64) -> ValidationReport {
        let mut report = ValidationReport::default();
        let weight_sum: f64 = self.weights.iter().sum();
        if (weight_sum - 1.0).abs() > tol {
            report.violations.push(crate::assemblage::Violation {
                constraint: Constraint::UnitTrace,
                setting: None,
                outcome: None,
                magnitude: (weight_sum - 1.0).abs(),
            });
        }
        for (l, w) in self.weights.iter().enumerate() {
            if *w < -tol {
                report.violations.push(crate::assemblage::Violation {
                    constraint: Constraint::ProbabilityRange,
                    setting: None,
                    outcome: Some(l),
                    magnitude: -*w,
                });
            }
        }
        for (l, state) in self.states.iter().enumerate() {
            let dev = state.hermiticity_deviation();
            if dev > tol {
                report.violations.push(crate::assemblage::Violation {
                    constraint: Constraint::Hermiticity,
                    setting: None,
                    outcome: Some(l),
                    magnitude: dev,
                });
            }
            if !state.is_psd(tol) {
                report.violations.push(crate::assemblage::Violation {
                    constraint: Constraint::Positivity,
                    setting: None,
                    outcome: Some(l),
                    magnitude: f64::NAN,
                });
            }
            let trace_dev = (state.trace().re - 1.0).abs();
            if trace_dev > tol {
                report.violations.push(crate::assemblage::Violation {
                    constraint: Constraint::UnitTrace,
                    setting: None,
                    outcome: Some(l),
                    magnitude: trace_dev,
                });
            }
        }
        for x in 0..self.n_x {
            for l in 0..self.d_lambda() {
                let s: f64 = (0..self.n_a).map(|a| self.response(x, a, l)).sum();
                if (s - 1.0).abs() > tol {
                    report.violations.push(crate::assemblage::Violation {
                        constraint: Constraint::Completeness,
                        setting: Some(x),
                        outcome: Some(l),
                        magnitude: (s - 1.0).abs(),
                    });
                }
            }
        }
        report
    }
}

/// Weight below which a hidden variable is dropped from the model.
const LHS_WEIGHT_FLOOR: f64 = 1e-12;

/// Builds the dimensionally-restricted LHS model of a commuting-SEO
/// assemblage: hidden states `σ_λ = ρ_B^{1/2} |λ⟩⟨λ| ρ_B^{1/2}` over the
/// common SEO eigenbasis, weights `p(λ) = Tr σ_λ` and responses
/// `⟨λ|B_{a|x}|λ⟩`.
///
/// When `ρ_B` is degenerate its eigenbasis is not unique; the common SEO
/// eigenbasis used here always reconstructs the assemblage, and callers can
/// detect the degeneracy through [`Seo::min_support_gap`].
pub fn lhs_from_commuting_seo(s: &StateAssemblage, tol: f64) -> Result<LhsModel> {
    let seo = seo_of(s, tol)?;
    let decomposition = match incoherent_decomposition(&seo, tol)? {
        DecompositionOutcome::Decomposed(d) => d,
        DecompositionOutcome::Refused {
            max_commutator_norm,
        } => {
            return Err(Error::NoncommutingSeo {
                max_commutator_norm,
            })
        }
    };
    let rho_b = s.reduced_state();
    let sqrt_rho = linalg::herm_sqrt(&rho_b, tol)?;

    let k = seo.dim();
    let mut weights = Vec::new();
    let mut states = Vec::new();
    let mut kept = Vec::new();
    for i in 0..k {
        let col: Vec<Complex64> = (0..k).map(|r| decomposition.basis.get(r, i)).collect();
        let full = match seo.isometry() {
            Some(v) => v.apply(&col),
            None => col,
        };
        let w = sqrt_rho.mat_vec(&full);
        let p_lambda: f64 = w.iter().map(|z| z.norm_sqr()).sum();
        if p_lambda <= LHS_WEIGHT_FLOOR {
            continue;
        }
        weights.push(p_lambda);
        states.push(linalg::outer(&w, &w).scale(1.0 / p_lambda));
        kept.push(i);
    }
    if weights.is_empty() {
        return Err(Error::ZeroOperator);
    }

    let d_lambda = weights.len();
    let mut response = Vec::with_capacity(s.n_settings() * s.n_outcomes() * d_lambda);
    for x in 0..s.n_settings() {
        for a in 0..s.n_outcomes() {
            for &i in &kept {
                let beta = decomposition.coefficient(x, a, i).clamp(0.0, 1.0);
                response.push(beta);
            }
        }
    }
    LhsModel::new(
        s.dim(),
        s.n_settings(),
        s.n_outcomes(),
        weights,
        states,
        response,
    )
}

/// Classical-quantum state `ρ_CQ = Σ_i p_i |i⟩⟨i| ⊗ ρ_B^{(i)}` together with
/// the diagonal measurement family that reproduces the source assemblage.
#[derive(Debug, Clone)]
pub struct CqState {
    pub weights: Vec<f64>,
    pub conditional_states: Vec<ComplexMatrix>,
    pub rho_cq: ComplexMatrix,
    /// Diagonal elements `M_{a|x} = Σ_λ p(a|x,λ) |λ⟩⟨λ|` on the classical register.
    pub measurements: MeasurementAssemblage,
}

impl CqState {
    pub fn register_dim(&self) -> usize {
        self.weights.len()
    }

    pub fn to_bipartite(&self) -> BipartiteState {
        let d = self.conditional_states[0].dim();
        BipartiteState::new(self.register_dim(), d, self.rho_cq.clone())
            .expect("block structure keeps dimensions consistent")
    }

    /// Steers `ρ_CQ` with the stored measurements and reports the largest
    /// deviation from `target`.
    pub fn reproduction_residual(&self, target: &StateAssemblage) -> Result<f64> {
        let produced = crate::assemblage::steer(&self.to_bipartite(), &self.measurements)?;
        if produced.n_settings() != target.n_settings()
            || produced.n_outcomes() != target.n_outcomes()
            || produced.dim() != target.dim()
        {
            return Err(Error::ShapeMismatch {
                context: "CQ reproduction target",
            });
        }
        Ok(produced
            .elements()
            .iter()
            .zip(target.elements())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).max_abs())))
    }
}

/// Assembles the classical-quantum state of an LHS model.
pub fn cq_from_lhs(l: &LhsModel) -> CqState {
    let d_lambda = l.d_lambda();
    let d = l.dim();
    let mut rho_cq = ComplexMatrix::zeros(d_lambda * d);
    for lam in 0..d_lambda {
        let block = l.state(lam).scale(l.weight(lam));
        for i in 0..d {
            for j in 0..d {
                rho_cq.set(lam * d + i, lam * d + j, block.get(i, j));
            }
        }
    }
    let mut elements = Vec::with_capacity(l.n_settings() * l.n_outcomes());
    for x in 0..l.n_settings() {
        for a in 0..l.n_outcomes() {
            let mut m = ComplexMatrix::zeros(d_lambda);
            for lam in 0..d_lambda {
                m.set(lam, lam, Complex64::new(l.response(x, a, lam), 0.0));
            }
            elements.push(m);
        }
    }
    let measurements =
        MeasurementAssemblage::new(d_lambda, l.n_settings(), l.n_outcomes(), elements)
            .expect("diagonal family shape is consistent");
    CqState {
        weights: l.weights().to_vec(),
        conditional_states: (0..d_lambda).map(|lam| l.state(lam).clone()).collect(),
        rho_cq,
        measurements,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assemblage::{assemblage_from_pure, steer, PureEntangledState};
    use crate::linalg::{outer, pauli_x, pauli_z, tensor};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn qubit_mubs() -> MeasurementAssemblage {
        let id = ComplexMatrix::identity(2);
        let comp0 = &(&id + &pauli_z()) * &id.scale(0.5);
        let comp1 = &id - &comp0;
        let had0 = &(&id + &pauli_x()) * &id.scale(0.5);
        let had1 = &id - &had0;
        MeasurementAssemblage::from_settings(alloc::vec![
            alloc::vec![comp0, comp1],
            alloc::vec![had0, had1],
        ])
        .unwrap()
    }

    fn uniform_pure_assemblage() -> StateAssemblage {
        let psi = PureEntangledState::new(&[0.5f64.sqrt(), 0.5f64.sqrt()]).unwrap();
        assemblage_from_pure(&psi, &qubit_mubs()).unwrap()
    }

    #[test]
    fn seo_of_uniform_pure_state_is_transposed_measurements() {
        let seo = seo_of(&uniform_pure_assemblage(), 1e-9).unwrap();
        let m = qubit_mubs();
        assert_eq!(seo.dim(), 2);
        assert!(!seo.source_rank_deficient());
        for x in 0..2 {
            for a in 0..2 {
                let dev = (seo.element(x, a) - &m.element(x, a).transpose()).max_abs();
                assert!(dev < 1e-12, "SEO differs from Mᵀ by {dev}");
            }
        }
    }

    #[test]
    fn seo_of_product_assemblage_is_trivial() {
        let rho_a = ComplexMatrix::diagonal(&[0.3, 0.7]);
        let u = [c(0.6, 0.0), c(0.48, 0.64)];
        let rho_b = outer(&u, &u);
        let state = BipartiteState::new(2, 2, tensor(&rho_a, &rho_b)).unwrap();
        let s = steer(&state, &qubit_mubs()).unwrap();
        let seo = seo_of(&s, 1e-9).unwrap();
        // Rank-one ρ_B compresses to a single dimension: B_{a|x} = p(a|x).
        assert_eq!(seo.dim(), 1);
        assert!(seo.source_rank_deficient());
        for x in 0..2 {
            for a in 0..2 {
                let p = s.probability(x, a);
                assert!((seo.element(x, a).get(0, 0) - c(p, 0.0)).norm() < 1e-10);
            }
        }
        let verdict = pairwise_commutativity(&seo, 1.0, 1e-8).unwrap();
        assert!(verdict.commuting);
    }

    #[test]
    fn rank_deficient_schmidt_pair() {
        let psi = PureEntangledState::new(&[1.0, 0.0]).unwrap();
        let s = assemblage_from_pure(&psi, &qubit_mubs()).unwrap();
        let seo = seo_of(&s, 1e-9).unwrap();
        assert_eq!(seo.dim(), 1);
        for x in 0..2 {
            for a in 0..2 {
                let p = s.probability(x, a);
                assert!((seo.element(x, a).get(0, 0).re - p).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn commutativity_verdicts() {
        // Two diagonal POVMs commute with zero norm.
        let diag = MeasurementAssemblage::from_settings(alloc::vec![
            alloc::vec![
                ComplexMatrix::diagonal(&[1.0, 0.0]),
                ComplexMatrix::diagonal(&[0.0, 1.0]),
            ],
            alloc::vec![
                ComplexMatrix::diagonal(&[0.25, 0.5]),
                ComplexMatrix::diagonal(&[0.75, 0.5]),
            ],
        ])
        .unwrap();
        let verdict = pairwise_commutativity(&diag, 1.0, 1e-8).unwrap();
        assert!(verdict.commuting);
        assert_eq!(verdict.max_commutator_norm, 0.0);

        // Qubit MUB SEO: every cross pair has trace norm one.
        let seo = seo_of(&uniform_pure_assemblage(), 1e-9).unwrap();
        let verdict = pairwise_commutativity(&seo, 1.0, 1e-8).unwrap();
        assert!(!verdict.commuting);
        assert!((verdict.max_commutator_norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn incoherent_decomposition_recovers_diagonal_family() {
        let diag = MeasurementAssemblage::from_settings(alloc::vec![alloc::vec![
            ComplexMatrix::diagonal(&[0.2, 0.9]),
            ComplexMatrix::diagonal(&[0.8, 0.1]),
        ]])
        .unwrap();
        match incoherent_decomposition(&diag, 1e-8).unwrap() {
            DecompositionOutcome::Decomposed(d) => {
                assert!(d.residual < 1e-12);
                // Coefficients are the diagonal entries up to basis permutation.
                let mut got = alloc::vec![
                    d.coefficient(0, 0, 0),
                    d.coefficient(0, 0, 1)
                ];
                got.sort_by(|a, b| a.partial_cmp(b).unwrap());
                assert!((got[0] - 0.2).abs() < 1e-12 && (got[1] - 0.9).abs() < 1e-12);
            }
            DecompositionOutcome::Refused { .. } => panic!("diagonal family refused"),
        }
    }

    #[test]
    fn incoherent_decomposition_recovers_conjugated_family() {
        // U diag U† family must be reproduced to 1e-9.
        let mut rng = random::rng_from_seed(17);
        let u = random::haar_unitary(3, &mut rng);
        let spectra = [
            [0.6, 0.1, 0.3],
            [0.4, 0.9, 0.7],
            [0.2, 0.5, 0.0],
            [0.8, 0.5, 1.0],
        ];
        let elements: Vec<ComplexMatrix> = spectra
            .iter()
            .map(|sp| {
                let d = ComplexMatrix::diagonal(&sp[..]);
                &(&u * &d) * &u.adjoint()
            })
            .collect();
        // Not a POVM, but the decomposition works on any commuting family.
        let family = MeasurementAssemblage::new(3, 2, 2, elements.clone()).unwrap();
        match incoherent_decomposition(&family, 1e-8).unwrap() {
            DecompositionOutcome::Decomposed(d) => {
                assert!(d.residual < 1e-9, "residual {}", d.residual);
            }
            DecompositionOutcome::Refused { .. } => panic!("commuting family refused"),
        }
    }

    #[test]
    fn incoherent_decomposition_refuses_mubs() {
        let m = qubit_mubs();
        match incoherent_decomposition(&m, 1e-8).unwrap() {
            DecompositionOutcome::Refused {
                max_commutator_norm,
            } => assert!(max_commutator_norm > 0.5),
            DecompositionOutcome::Decomposed(_) => panic!("MUB pair is not incoherent"),
        }
    }

    #[test]
    fn lhs_reconstructs_product_assemblage() {
        let rho_a = ComplexMatrix::diagonal(&[0.4, 0.6]);
        let rho_b = crate::random::random_density(2, &mut random::rng_from_seed(5));
        let state = BipartiteState::new(2, 2, tensor(&rho_a, &rho_b)).unwrap();
        let s = steer(&state, &qubit_mubs()).unwrap();
        let lhs = lhs_from_commuting_seo(&s, 1e-8).unwrap();
        assert!(lhs.validate(1e-8).is_ok());
        assert!(lhs.reconstruction_residual(&s) < 1e-9);
        assert!(lhs.d_lambda() <= 2);
    }

    #[test]
    fn lhs_of_white_noise_has_uniform_weights() {
        // Fully mixed two-qubit state with MUBs: σ_{a|x} = 𝟙/8... here built
        // directly on Bob: every element 𝟙/4.
        let quarter = ComplexMatrix::identity(2).scale(0.25);
        let s = StateAssemblage::new(
            2,
            2,
            2,
            alloc::vec![quarter.clone(), quarter.clone(), quarter.clone(), quarter],
        )
        .unwrap();
        let lhs = lhs_from_commuting_seo(&s, 1e-8).unwrap();
        assert_eq!(lhs.d_lambda(), 2);
        for l in 0..2 {
            assert!((lhs.weight(l) - 0.5).abs() < 1e-12);
        }
        assert!(lhs.reconstruction_residual(&s) < 1e-12);
    }

    #[test]
    fn lhs_handles_rank_deficient_reduced_state() {
        // Rank-one ρ_B: the SEO lives on a one-dimensional support and the
        // model collapses to a single hidden state.
        let rho_a = ComplexMatrix::diagonal(&[0.5, 0.5]);
        let u = [c(0.6, 0.0), c(0.48, 0.64)];
        let rho_b = outer(&u, &u);
        let state = BipartiteState::new(2, 2, tensor(&rho_a, &rho_b)).unwrap();
        let s = steer(&state, &qubit_mubs()).unwrap();
        let lhs = lhs_from_commuting_seo(&s, 1e-8).unwrap();
        assert_eq!(lhs.d_lambda(), 1);
        assert!(lhs.reconstruction_residual(&s) < 1e-10);
        let cq = cq_from_lhs(&lhs);
        assert!(cq.reproduction_residual(&s).unwrap() < 1e-10);
    }

    #[test]
    fn lhs_refuses_noncommuting_seo() {
        let s = uniform_pure_assemblage();
        assert!(matches!(
            lhs_from_commuting_seo(&s, 1e-8),
            Err(Error::NoncommutingSeo { .. })
        ));
    }

    #[test]
    fn cq_state_reproduces_lhs_assemblage() {
        // Random valid LHS model: the CQ construction must steer back to it.
        let mut rng = random::rng_from_seed(23);
        let d = 2;
        let d_lambda = 2;
        let (n_x, n_a) = (2, 2);
        let weights = random::dirichlet_flat(d_lambda, &mut rng);
        let states: Vec<ComplexMatrix> = (0..d_lambda)
            .map(|_| random::random_density(d, &mut rng))
            .collect();
        let mut response = Vec::new();
        for _x in 0..n_x {
            let mut rows = alloc::vec![Vec::new(); d_lambda];
            for (l, row) in rows.iter_mut().enumerate() {
                *row = random::dirichlet_flat(n_a, &mut rng);
                let _ = l;
            }
            for a in 0..n_a {
                for row in rows.iter() {
                    response.push(row[a]);
                }
            }
        }
        let lhs = LhsModel::new(d, n_x, n_a, weights, states, response).unwrap();
        assert!(lhs.validate(1e-9).is_ok());
        let cq = cq_from_lhs(&lhs);
        let residual = cq.reproduction_residual(&lhs.assemblage()).unwrap();
        assert!(residual < 1e-12, "CQ residual {residual}");
    }
}
