//! Measurement assemblages, bipartite states, state assemblages and the
//! steering map between them.
//!
//! Validation never panics and never rejects silently: every violated
//! invariant is reported with the offending index and its magnitude, so a
//! caller can decide what to tolerate.

use alloc::vec::Vec;
use core::fmt;


use crate::error::{Error, Result};
use crate::linalg::{self, Complex64, ComplexMatrix};

/// Default tolerance for validators; override per call where needed.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    Hermiticity,
    EigenvalueRange,
    Completeness,
    Positivity,
    UnitTrace,
    NoSignaling,
    ProbabilityRange,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Constraint::Hermiticity => "hermiticity",
            Constraint::EigenvalueRange => "eigenvalue range",
            Constraint::Completeness => "completeness",
            Constraint::Positivity => "positivity",
            Constraint::UnitTrace => "unit trace",
            Constraint::NoSignaling => "no-signaling",
            Constraint::ProbabilityRange => "probability range",
        };
        f.write_str(name)
    }
}

/// A single violated invariant with its location and size.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub constraint: Constraint,
    pub setting: Option<usize>,
    pub outcome: Option<usize>,
    pub magnitude: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated by {:.3e}", self.constraint, self.magnitude)?;
        match (self.setting, self.outcome) {
            (Some(x), Some(a)) => write!(f, " at (x={x}, a={a})"),
            (Some(x), None) => write!(f, " at setting x={x}"),
            _ => Ok(()),
        }
    }
}

/// Outcome of a validator run; empty means every invariant holds.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// Max-magnitude offender, for debuggability.
    pub fn worst(&self) -> Option<&Violation> {
        self.violations
            .iter()
            .max_by(|a, b| a.magnitude.partial_cmp(&b.magnitude).expect("finite"))
    }

    fn push(
        &mut self,
        constraint: Constraint,
        setting: Option<usize>,
        outcome: Option<usize>,
        magnitude: f64,
    ) {
        self.violations.push(Violation {
            constraint,
            setting,
            outcome,
            magnitude,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Indexed family `{M_{a|x}}` of POVM elements on dimension `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementAssemblage {
    dim: usize,
    n_x: usize,
    n_a: usize,
    elements: Vec<ComplexMatrix>, // x-major: index = x * n_a + a
}

impl MeasurementAssemblage {
    pub fn new(
        dim: usize,
        n_x: usize,
        n_a: usize,
        elements: Vec<ComplexMatrix>,
    ) -> Result<Self> {
        if elements.len() != n_x * n_a || n_x == 0 || n_a == 0 {
            return Err(Error::ShapeMismatch {
                context: "measurement assemblage element count",
            });
        }
        if elements.iter().any(|m| m.dim() != dim) {
            return Err(Error::ShapeMismatch {
                context: "measurement assemblage element dimension",
            });
        }
        Ok(Self {
            dim,
            n_x,
            n_a,
            elements,
        })
    }

    /// Stacks per-setting POVMs (all with the same outcome count).
    pub fn from_settings(settings: Vec<Vec<ComplexMatrix>>) -> Result<Self> {
        let n_x = settings.len();
        let n_a = settings.first().map(Vec::len).unwrap_or(0);
        if n_x == 0 || n_a == 0 || settings.iter().any(|s| s.len() != n_a) {
            return Err(Error::ShapeMismatch {
                context: "per-setting POVM lists",
            });
        }
        let dim = settings[0][0].dim();
        let elements: Vec<ComplexMatrix> = settings.into_iter().flatten().collect();
        Self::new(dim, n_x, n_a, elements)
    }

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

    /// Checks Hermiticity, `0 ≤ M ≤ 𝟙` and per-setting completeness.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        let mut report = ValidationReport::default();
        for x in 0..self.n_x {
            for a in 0..self.n_a {
                let m = self.element(x, a);
                let dev = m.hermiticity_deviation();
                if dev > tol {
                    report.push(Constraint::Hermiticity, Some(x), Some(a), dev);
                }
                let eig = linalg::eigh(m);
                let low = eig.eigenvalues.first().copied().unwrap_or(0.0);
                let high = eig.eigenvalues.last().copied().unwrap_or(0.0);
                let excess = (-low).max(high - 1.0);
                if excess > tol {
                    report.push(Constraint::EigenvalueRange, Some(x), Some(a), excess);
                }
            }
            let mut sum = ComplexMatrix::zeros(self.dim);
            for a in 0..self.n_a {
                sum = &sum + self.element(x, a);
            }
            let dev = (&sum - &ComplexMatrix::identity(self.dim)).max_abs();
            if dev > tol {
                report.push(Constraint::Completeness, Some(x), None, dev);
            }
        }
        report
    }
}

/// Shared state `ρ_AB` with its local dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    da: usize,
    db: usize,
    rho: ComplexMatrix,
}

impl BipartiteState {
    pub fn new(da: usize, db: usize, rho: ComplexMatrix) -> Result<Self> {
        if rho.dim() != da * db {
            return Err(Error::DimensionMismatch {
                context: "bipartite state",
                expected: da * db,
                found: rho.dim(),
            });
        }
        Ok(Self { da, db, rho })
    }

    pub fn dim_a(&self) -> usize {
        self.da
    }

    pub fn dim_b(&self) -> usize {
        self.db
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn validate(&self, tol: f64) -> ValidationReport {
        let mut report = ValidationReport::default();
        let dev = self.rho.hermiticity_deviation();
        if dev > tol {
            report.push(Constraint::Hermiticity, None, None, dev);
        }
        let eig = linalg::eigh(&self.rho);
        let low = eig.eigenvalues.first().copied().unwrap_or(0.0);
        if low < -tol {
            report.push(Constraint::Positivity, None, None, -low);
        }
        let trace_dev = (self.rho.trace().re - 1.0).abs();
        if trace_dev > tol {
            report.push(Constraint::UnitTrace, None, None, trace_dev);
        }
        report
    }
}

/// Indexed family `{σ_{a|x}}` of unnormalized conditional states.
#[derive(Debug, Clone, PartialEq)]
pub struct StateAssemblage {
    dim: usize,
    n_x: usize,
    n_a: usize,
    elements: Vec<ComplexMatrix>, // x-major
}

impl StateAssemblage {
    pub fn new(dim: usize, n_x: usize, n_a: usize, elements: Vec<ComplexMatrix>) -> Result<Self> {
        if elements.len() != n_x * n_a || n_x == 0 || n_a == 0 {
            return Err(Error::ShapeMismatch {
                context: "state assemblage element count",
            });
        }
        if elements.iter().any(|m| m.dim() != dim) {
            return Err(Error::ShapeMismatch {
                context: "state assemblage element dimension",
            });
        }
        Ok(Self {
            dim,
            n_x,
            n_a,
            elements,
        })
    }

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

    /// Reduced state `ρ_B = Σ_a σ_{a|0}`, taken from the first setting; the
    /// cross-setting residual is a diagnostic, never silently averaged.
    pub fn reduced_state(&self) -> ComplexMatrix {
        let mut rho = ComplexMatrix::zeros(self.dim);
        for a in 0..self.n_a {
            rho = &rho + self.element(0, a);
        }
        rho
    }

    /// Largest deviation of `Σ_a σ_{a|x}` from `ρ_B` over the settings.
    pub fn nosignaling_residual(&self) -> f64 {
        let rho = self.reduced_state();
        let mut worst = 0.0f64;
        for x in 1..self.n_x {
            let mut sum = ComplexMatrix::zeros(self.dim);
            for a in 0..self.n_a {
                sum = &sum + self.element(x, a);
            }
            worst = worst.max((&sum - &rho).max_abs());
        }
        worst
    }

    /// Outcome probability `p(a|x) = Tr σ_{a|x}`.
    pub fn probability(&self, x: usize, a: usize) -> f64 {
        self.element(x, a).trace().re
    }

    pub fn validate(&self, tol: f64) -> ValidationReport {
        let mut report = ValidationReport::default();
        for x in 0..self.n_x {
            for a in 0..self.n_a {
                let m = self.element(x, a);
                let dev = m.hermiticity_deviation();
                if dev > tol {
                    report.push(Constraint::Hermiticity, Some(x), Some(a), dev);
                }
                let eig = linalg::eigh(m);
                let low = eig.eigenvalues.first().copied().unwrap_or(0.0);
                if low < -tol {
                    report.push(Constraint::Positivity, Some(x), Some(a), -low);
                }
                let p = self.probability(x, a);
                let excess = (-p).max(p - 1.0);
                if excess > tol {
                    report.push(Constraint::ProbabilityRange, Some(x), Some(a), excess);
                }
            }
        }
        let ns = self.nosignaling_residual();
        if ns > tol {
            report.push(Constraint::NoSignaling, None, None, ns);
        }
        let trace_dev = (self.reduced_state().trace().re - 1.0).abs();
        if trace_dev > tol {
            report.push(Constraint::UnitTrace, None, None, trace_dev);
        }
        report
    }
}

/// Pure two-qudit state `Σ λ_i |ii⟩` described by its Schmidt coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PureEntangledState {
    schmidt: Vec<f64>,
}

impl PureEntangledState {
    /// Coefficients must be nonnegative with `Σ λ_i² = 1` (within 1e-9).
    pub fn new(schmidt: &[f64]) -> Result<Self> {
        if schmidt.is_empty() {
            return Err(Error::ShapeMismatch {
                context: "schmidt spectrum",
            });
        }
        if let Some(&bad) = schmidt.iter().find(|&&l| l < 0.0) {
            return Err(Error::InvalidParameter {
                what: "schmidt coefficient",
                value: bad,
            });
        }
        let norm: f64 = schmidt.iter().map(|l| l * l).sum();
        let deviation = (norm - 1.0).abs();
        if deviation > 1e-9 {
            return Err(Error::NormalizationViolation { deviation });
        }
        Ok(Self {
            schmidt: schmidt.to_vec(),
        })
    }

    pub fn dim(&self) -> usize {
        self.schmidt.len()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.schmidt
    }

    /// Count of strictly positive coefficients; ≥ 2 means entangled.
    /// Entanglement is reported, never enforced.
    pub fn schmidt_number(&self) -> usize {
        self.schmidt.iter().filter(|&&l| l > 1e-12).count()
    }

    /// Explicit `|φ⟩⟨φ|` density matrix on `d × d`.
    pub fn to_state(&self) -> BipartiteState {
        let d = self.dim();
        let mut ket = alloc::vec![Complex64::new(0.0, 0.0); d * d];
        for (i, &l) in self.schmidt.iter().enumerate() {
            ket[i * d + i] = Complex64::new(l, 0.0);
        }
        let rho = linalg::outer(&ket, &ket);
        BipartiteState::new(d, d, rho).expect("square by construction")
    }
}

/// Steering map `σ_{a|x} = Tr_A((M_{a|x} ⊗ 𝟙) ρ_AB)`.
pub fn steer(state: &BipartiteState, m: &MeasurementAssemblage) -> Result<StateAssemblage> {
    if m.dim() != state.dim_a() {
        return Err(Error::DimensionMismatch {
            context: "steer: measurement vs Alice dimension",
            expected: state.dim_a(),
            found: m.dim(),
        });
    }
    let id_b = ComplexMatrix::identity(state.dim_b());
    let mut elements = Vec::with_capacity(m.n_settings() * m.n_outcomes());
    for x in 0..m.n_settings() {
        for a in 0..m.n_outcomes() {
            let lifted = linalg::tensor(m.element(x, a), &id_b);
            let product = &lifted * state.rho();
            elements.push(linalg::partial_trace_first(
                &product,
                state.dim_a(),
                state.dim_b(),
            )?);
        }
    }
    StateAssemblage::new(state.dim_b(), m.n_settings(), m.n_outcomes(), elements)
}

/// Assemblage of a pure state directly from its Schmidt coefficients:
/// `σ_{a|x} = ρ_B^{1/2} Mᵀ_{a|x} ρ_B^{1/2}` with `ρ_B = diag(λ_i²)`.
///
/// The transpose is taken in the computational basis, the same basis that
/// indexes the Schmidt decomposition.
pub fn assemblage_from_pure(
    psi: &PureEntangledState,
    m: &MeasurementAssemblage,
) -> Result<StateAssemblage> {
    if m.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            context: "assemblage_from_pure: measurement vs Schmidt dimension",
            expected: psi.dim(),
            found: m.dim(),
        });
    }
    let sqrt_rho = ComplexMatrix::diagonal(psi.coefficients());
    let mut elements = Vec::with_capacity(m.n_settings() * m.n_outcomes());
    for x in 0..m.n_settings() {
        for a in 0..m.n_outcomes() {
            let mt = m.element(x, a).transpose();
            elements.push(&(&sqrt_rho * &mt) * &sqrt_rho);
        }
    }
    StateAssemblage::new(psi.dim(), m.n_settings(), m.n_outcomes(), elements)
}

/// Detection inefficiency: click elements scaled by `η`, one extra no-click
/// outcome `(1-η)𝟙` appended as the last outcome of every setting.
pub fn apply_inefficiency(m: &MeasurementAssemblage, eta: f64) -> Result<MeasurementAssemblage> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidParameter {
            what: "detection efficiency",
            value: eta,
        });
    }
    let no_click = ComplexMatrix::identity(m.dim()).scale(1.0 - eta);
    let mut elements = Vec::with_capacity(m.n_settings() * (m.n_outcomes() + 1));
    for x in 0..m.n_settings() {
        for a in 0..m.n_outcomes() {
            elements.push(m.element(x, a).scale(eta));
        }
        elements.push(no_click.clone());
    }
    MeasurementAssemblage::new(m.dim(), m.n_settings(), m.n_outcomes() + 1, elements)
}

/// Element-wise convex mixture `p·σ + (1-p)·σ'`.
pub fn mix(p: f64, s1: &StateAssemblage, s2: &StateAssemblage) -> Result<StateAssemblage> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter {
            what: "mixing weight",
            value: p,
        });
    }
    if s1.dim() != s2.dim() || s1.n_settings() != s2.n_settings() || s1.n_outcomes() != s2.n_outcomes()
    {
        return Err(Error::ShapeMismatch {
            context: "mix: assemblage shapes",
        });
    }
    let elements = s1
        .elements()
        .iter()
        .zip(s2.elements().iter())
        .map(|(a, b)| &a.scale(p) + &b.scale(1.0 - p))
        .collect();
    StateAssemblage::new(s1.dim(), s1.n_settings(), s1.n_outcomes(), elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{outer, pauli_x, pauli_z};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn qubit_mubs() -> MeasurementAssemblage {
        let id = ComplexMatrix::identity(2);
        let comp0 = &(&id + &pauli_z()) * &ComplexMatrix::identity(2).scale(0.5);
        let comp1 = &id - &comp0;
        let had0 = &(&id + &pauli_x()) * &ComplexMatrix::identity(2).scale(0.5);
        let had1 = &id - &had0;
        MeasurementAssemblage::from_settings(alloc::vec![
            alloc::vec![comp0, comp1],
            alloc::vec![had0, had1],
        ])
        .unwrap()
    }

    #[test]
    fn mub_assemblage_validates() {
        assert!(qubit_mubs().validate(1e-10).is_ok());
    }

    #[test]
    fn eigenvalue_excess_flagged() {
        let bad = MeasurementAssemblage::from_settings(alloc::vec![alloc::vec![
            ComplexMatrix::diagonal(&[1.5, 0.0]),
            ComplexMatrix::diagonal(&[-0.5, 1.0]),
        ]])
        .unwrap();
        let report = bad.validate(1e-8);
        assert!(!report.is_ok());
        assert!(report
            .violations
            .iter()
            .any(|v| v.constraint == Constraint::EigenvalueRange));
        let worst = report.worst().unwrap();
        assert!((worst.magnitude - 0.5).abs() < 1e-12);
    }

    #[test]
    fn steer_product_state_factorizes() {
        let rho_a = ComplexMatrix::diagonal(&[0.25, 0.75]);
        let rho_b = {
            let u = [c(0.8, 0.0), c(0.0, 0.6)];
            outer(&u, &u)
        };
        let rho = crate::linalg::tensor(&rho_a, &rho_b);
        let state = BipartiteState::new(2, 2, rho).unwrap();
        let m = qubit_mubs();
        let s = steer(&state, &m).unwrap();
        for x in 0..2 {
            for a in 0..2 {
                let weight = (m.element(x, a) * &rho_a).trace().re;
                let expected = rho_b.scale(weight);
                assert!((&expected - s.element(x, a)).max_abs() < 1e-12);
            }
        }
        assert!(s.validate(1e-10).is_ok());
    }

    #[test]
    fn pure_state_constructor_matches_steer() {
        let psi = PureEntangledState::new(&[0.9f64.sqrt(), 0.1f64.sqrt()]).unwrap();
        let m = qubit_mubs();
        let direct = assemblage_from_pure(&psi, &m).unwrap();
        let via_steer = steer(&psi.to_state(), &m).unwrap();
        for (a, b) in direct.elements().iter().zip(via_steer.elements()) {
            assert!((a - b).max_abs() < 1e-12);
        }
    }

    #[test]
    fn pure_single_coefficient_is_product() {
        let psi = PureEntangledState::new(&[1.0, 0.0]).unwrap();
        assert_eq!(psi.schmidt_number(), 1);
        let m = qubit_mubs();
        let s = assemblage_from_pure(&psi, &m).unwrap();
        for x in 0..2 {
            for a in 0..2 {
                let p = s.probability(x, a);
                let expected = outer(&[c(1.0, 0.0), c(0.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)])
                    .scale(p);
                assert!((&expected - s.element(x, a)).max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn schmidt_normalization_enforced() {
        assert!(matches!(
            PureEntangledState::new(&[1.0, 1.0]),
            Err(Error::NormalizationViolation { .. })
        ));
        assert!(matches!(
            PureEntangledState::new(&[-1.0, 0.0]),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn inefficiency_preserves_completeness() {
        let m = qubit_mubs();
        for eta in [0.0, 0.5, 1.0] {
            let ext = apply_inefficiency(&m, eta).unwrap();
            assert_eq!(ext.n_outcomes(), 3);
            assert!(ext.validate(1e-12).is_ok(), "eta = {eta}");
        }
        let ext = apply_inefficiency(&m, 1.0).unwrap();
        assert!(ext.element(0, 2).max_abs() == 0.0);
        let ext = apply_inefficiency(&m, 0.0).unwrap();
        assert!(ext.element(0, 0).max_abs() == 0.0);
        assert!((ext.element(0, 2) - &ComplexMatrix::identity(2)).max_abs() == 0.0);
        assert!(matches!(
            apply_inefficiency(&m, 1.5),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn mix_endpoints_and_swap() {
        let m = qubit_mubs();
        let psi = PureEntangledState::new(&[0.5f64.sqrt(), 0.5f64.sqrt()]).unwrap();
        let s = assemblage_from_pure(&psi, &m).unwrap();
        // Setting-swapped copy.
        let swapped = StateAssemblage::new(
            s.dim(),
            2,
            2,
            alloc::vec![
                s.element(1, 0).clone(),
                s.element(1, 1).clone(),
                s.element(0, 0).clone(),
                s.element(0, 1).clone(),
            ],
        )
        .unwrap();
        let same = mix(1.0, &s, &swapped).unwrap();
        for (a, b) in same.elements().iter().zip(s.elements()) {
            assert!((a - b).max_abs() == 0.0);
        }
        let other = mix(0.0, &s, &swapped).unwrap();
        for (a, b) in other.elements().iter().zip(swapped.elements()) {
            assert!((a - b).max_abs() == 0.0);
        }
        let half = mix(0.5, &s, &swapped).unwrap();
        for a in 0..2 {
            assert!((half.element(0, a) - half.element(1, a)).max_abs() < 1e-15);
        }
    }
}
