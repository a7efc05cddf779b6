//! Quantification: the noncommutativity measure of a two-setting family,
//! the SDI steerability monotone built on it, the qubit Bloch shortcut, the
//! measurement upper bound and the guessing-probability figures of merit.

use alloc::vec::Vec;

// Load-bearing on targets without std's inherent f64 math methods.
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::assemblage::{BipartiteState, MeasurementAssemblage, StateAssemblage};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::random;
use crate::seo::{self, OperatorFamily, Seo};

/// Bloch vector of a qubit effect in the parametrization `E = (𝟙 + r·σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &Self) -> Self {
        Self {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            x: self.x * s,
            y: self.y * s,
            z: self.z * s,
        }
    }

    /// Angle with another vector, in radians.
    pub fn angle_with(&self, other: &Self) -> f64 {
        let n = self.norm() * other.norm();
        if n == 0.0 {
            return 0.0;
        }
        (self.dot(other) / n).clamp(-1.0, 1.0).acos()
    }

    /// Reads the Bloch vector off a qubit effect: `r_i = Tr(E σ_i)`.
    pub fn from_povm_element(e: &ComplexMatrix) -> Result<Self> {
        if e.dim() != 2 {
            return Err(Error::DimensionMismatch {
                context: "Bloch vector of a non-qubit effect",
                expected: 2,
                found: e.dim(),
            });
        }
        Ok(Self {
            x: (&linalg::pauli_x() * e).trace().re,
            y: (&linalg::pauli_y() * e).trace().re,
            z: (&linalg::pauli_z() * e).trace().re,
        })
    }
}

/// Noncommutativity of a two-setting family:
/// `Υ_p = Σ_{a,a'} ‖[E_{a|0}, E_{a'|1}]‖_p` over cross-setting pairs only.
///
/// The commutativity *verdict* checks all pairs including within a setting;
/// this sum deliberately does not, matching the measure's definition.
pub fn upsilon<F: OperatorFamily + ?Sized>(family: &F, p: f64) -> Result<f64> {
    if family.family_settings() != 2 {
        return Err(Error::UnsupportedScenario {
            required: "exactly two measurement settings",
        });
    }
    let n_a = family.family_outcomes();
    let mut total = 0.0;
    for a in 0..n_a {
        for ap in 0..n_a {
            let comm = linalg::commutator(
                family.family_element(0, a),
                family.family_element(1, ap),
            )?;
            total += linalg::schatten_norm(&comm, p)?;
        }
    }
    Ok(total)
}

/// Upper bound `2^{1/p} d √(d-1)` of `Υ_p` on dimension `d`.
pub fn upsilon_bound(d: usize, p: f64) -> f64 {
    2.0f64.powf(1.0 / p) * d as f64 * ((d - 1) as f64).sqrt()
}

/// SDI steerability of an SEO: `Υ_p` normalized by its dimensional bound.
///
/// `d` is the SEO support dimension; a one-dimensional support admits no
/// noncommutativity, so the measure is zero there.
pub fn seo_steerability(s: &Seo, p: f64) -> Result<f64> {
    if s.n_settings() != 2 {
        return Err(Error::UnsupportedScenario {
            required: "exactly two measurement settings",
        });
    }
    if s.dim() == 1 {
        return Ok(0.0);
    }
    Ok(upsilon(s, p)? / upsilon_bound(s.dim(), p))
}

/// SDI steerability of a state assemblage through its SEO.
pub fn sdi_steerability(s: &StateAssemblage, p: f64, tol: f64) -> Result<f64> {
    let seo = seo::seo_of(s, tol)?;
    seo_steerability(&seo, p)
}

/// Qubit dichotomic shortcut `S = ‖r‖ ‖v‖ sin(r, v) = ‖r × v‖` for the
/// Bloch vectors of `B_{0|0}` and `B_{0|1}`.
pub fn bloch_steerability(r: &BlochVector, v: &BlochVector) -> f64 {
    r.cross(v).norm()
}

/// Measurement-side bound `S ≤ Υ₁(M)/4` for two-setting assemblages.
pub fn measurement_upper_bound(m: &MeasurementAssemblage) -> Result<f64> {
    Ok(0.25 * upsilon(m, 1.0)?)
}

/// Guessing probability bound and the min-entropy it certifies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuessingBound {
    pub p_g: f64,
    pub h_min: f64,
}

/// `p_g ≤ (1 + √(1-S²))/2`, `H_min = -log₂ p_g`; decreasing in `S`.
pub fn guessing_bound(s: f64) -> Result<GuessingBound> {
    const EDGE: f64 = 1e-9;
    if !(-EDGE..=1.0 + EDGE).contains(&s) {
        return Err(Error::InvalidParameter {
            what: "steerability value for the guessing bound",
            value: s,
        });
    }
    let s = s.clamp(0.0, 1.0);
    let p_g = 0.5 * (1.0 + (1.0 - s * s).sqrt());
    let h_min = -p_g.log2();
    Ok(GuessingBound {
        p_g,
        h_min: if h_min == 0.0 { 0.0 } else { h_min },
    })
}

/// Randomness figures of merit for one measurement setting.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomnessReport {
    pub setting: usize,
    pub s_upsilon: f64,
    pub p_g: f64,
    pub h_min: f64,
    pub eta: Option<f64>,
}

impl RandomnessReport {
    pub fn from_steerability(setting: usize, s: f64, eta: Option<f64>) -> Result<Self> {
        let bound = guessing_bound(s)?;
        Ok(Self {
            setting,
            s_upsilon: s,
            p_g: bound.p_g,
            h_min: bound.h_min,
            eta,
        })
    }
}

/// Outcome of the adversarial decomposition search.
#[derive(Debug, Clone, PartialEq)]
pub struct GuessingSearch {
    /// Best `Σ_μ q_μ max_a p(a|x,μ)` over the decompositions found.
    pub best: f64,
    /// Decompositions that passed the POVM validity check.
    pub valid_decompositions: usize,
    pub samples: usize,
}

/// Randomized search over decompositions `M_{a|x} = Σ_μ q_μ M^{(μ)}_{a|x}`
/// of a qubit dichotomic pair into sharper POVMs.
///
/// Components are convex mixtures of projective qubit measurements with
/// flat-Dirichlet weights; the last component is the forced remainder and is
/// kept only when it is a valid POVM on every setting. The trivial
/// decomposition (the measurement itself) is always included, so projective
/// inputs return `max_a p(a|x)`.
pub fn guessing_oracle(
    m: &MeasurementAssemblage,
    state: &BipartiteState,
    x: usize,
    samples: usize,
    seed: u64,
) -> Result<GuessingSearch> {
    if m.dim() != 2 || state.dim_a() != 2 || m.n_outcomes() != 2 {
        return Err(Error::UnsupportedScenario {
            required: "qubit dichotomic measurements",
        });
    }
    if x >= m.n_settings() {
        return Err(Error::InvalidParameter {
            what: "measurement setting index",
            value: x as f64,
        });
    }

    let id_b = ComplexMatrix::identity(state.dim_b());
    let prob = |effect: &ComplexMatrix| -> f64 {
        (&linalg::tensor(effect, &id_b) * state.rho()).trace().re
    };

    let n_x = m.n_settings();
    let mut best = (0..2).map(|a| prob(m.element(x, a))).fold(0.0, f64::max);
    let mut valid = 0usize;
    let mut rng = random::rng_from_seed(seed);

    for _ in 0..samples {
        let n_mu = rng.gen_range(2..=4usize);
        let q = random::dirichlet_flat(n_mu, &mut rng);
        // Free components for μ < n_μ - 1; the effect of outcome 0 per setting.
        let mut free: Vec<Vec<ComplexMatrix>> = Vec::with_capacity(n_mu - 1);
        for _ in 0..(n_mu - 1) {
            let mut per_setting = Vec::with_capacity(n_x);
            for _ in 0..n_x {
                let pieces = rng.gen_range(1..=3usize);
                let w = random::dirichlet_flat(pieces, &mut rng);
                let mut effect = ComplexMatrix::zeros(2);
                for &wk in &w {
                    let dir = random::random_unit_vector(&mut rng);
                    effect = &effect + &projective_effect(&dir).scale(wk);
                }
                per_setting.push(effect);
            }
            free.push(per_setting);
        }
        // Remainder component per setting and outcome; must be a POVM.
        let q_last = q[n_mu - 1];
        if q_last < 1e-6 {
            continue;
        }
        let mut remainder_ok = true;
        let mut remainder: Vec<[ComplexMatrix; 2]> = Vec::with_capacity(n_x);
        for setting in 0..n_x {
            let mut rem0 = m.element(setting, 0).clone();
            let mut rem1 = m.element(setting, 1).clone();
            for (mu, per_setting) in free.iter().enumerate() {
                let e0 = &per_setting[setting];
                rem0 = &rem0 - &e0.scale(q[mu]);
                let e1 = &ComplexMatrix::identity(2) - e0;
                rem1 = &rem1 - &e1.scale(q[mu]);
            }
            rem0 = rem0.scale(1.0 / q_last);
            rem1 = rem1.scale(1.0 / q_last);
            for rem in [&rem0, &rem1] {
                let eig = linalg::eigh(rem);
                let low = eig.eigenvalues.first().copied().unwrap_or(0.0);
                let high = eig.eigenvalues.last().copied().unwrap_or(0.0);
                if low < -1e-10 || high > 1.0 + 1e-10 {
                    remainder_ok = false;
                }
            }
            if !remainder_ok {
                break;
            }
            remainder.push([rem0, rem1]);
        }
        if !remainder_ok {
            continue;
        }
        valid += 1;
        // Eve's score: knowing μ, guess the likelier outcome of setting x.
        let mut score = 0.0;
        for (mu, &q_mu) in q.iter().enumerate().take(n_mu - 1) {
            let e0 = &free[mu][x];
            let p0 = prob(e0);
            let p1 = prob(&(&ComplexMatrix::identity(2) - e0));
            score += q_mu * p0.max(p1);
        }
        let p0 = prob(&remainder[x][0]);
        let p1 = prob(&remainder[x][1]);
        score += q_last * p0.max(p1);
        best = best.max(score);
    }

    Ok(GuessingSearch {
        best,
        valid_decompositions: valid,
        samples,
    })
}

/// Projector `(𝟙 + u·σ)/2` onto the Bloch direction `u`.
fn projective_effect(u: &[f64; 3]) -> ComplexMatrix {
    let mut m = linalg::pauli_x().scale(u[0]);
    m = &m + &linalg::pauli_y().scale(u[1]);
    m = &m + &linalg::pauli_z().scale(u[2]);
    m = &m + &ComplexMatrix::identity(2);
    m.scale(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assemblage::{assemblage_from_pure, PureEntangledState};
    use crate::linalg::{pauli_x, pauli_z};

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

    #[test]
    fn upsilon_of_commuting_family_vanishes() {
        let diag = MeasurementAssemblage::from_settings(alloc::vec![
            alloc::vec![
                ComplexMatrix::diagonal(&[1.0, 0.0]),
                ComplexMatrix::diagonal(&[0.0, 1.0]),
            ],
            alloc::vec![
                ComplexMatrix::diagonal(&[0.3, 0.6]),
                ComplexMatrix::diagonal(&[0.7, 0.4]),
            ],
        ])
        .unwrap();
        assert_eq!(upsilon(&diag, 1.0).unwrap(), 0.0);
        assert_eq!(measurement_upper_bound(&diag).unwrap(), 0.0);
    }

    #[test]
    fn upsilon_of_qubit_mubs_is_four() {
        // Four cross pairs, each with trace norm one.
        let got = upsilon(&qubit_mubs(), 1.0).unwrap();
        assert!((got - 4.0).abs() < 1e-12, "Υ₁ = {got}");
        assert!((measurement_upper_bound(&qubit_mubs()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn upsilon_needs_two_settings() {
        let single = MeasurementAssemblage::from_settings(alloc::vec![alloc::vec![
            ComplexMatrix::diagonal(&[1.0, 0.0]),
            ComplexMatrix::diagonal(&[0.0, 1.0]),
        ]])
        .unwrap();
        assert!(matches!(
            upsilon(&single, 1.0),
            Err(Error::UnsupportedScenario { .. })
        ));
    }

    #[test]
    fn pure_state_with_mubs_saturates() {
        let psi = PureEntangledState::new(&[0.5f64.sqrt(), 0.5f64.sqrt()]).unwrap();
        let s = assemblage_from_pure(&psi, &qubit_mubs()).unwrap();
        for p in [1.0, 2.0, f64::INFINITY] {
            let value = sdi_steerability(&s, p, 1e-9).unwrap();
            assert!((value - 1.0).abs() < 1e-12, "p = {p}: S = {value}");
        }
    }

    #[test]
    fn product_state_measures_zero() {
        let psi = PureEntangledState::new(&[1.0, 0.0]).unwrap();
        let s = assemblage_from_pure(&psi, &qubit_mubs()).unwrap();
        assert_eq!(sdi_steerability(&s, 1.0, 1e-9).unwrap(), 0.0);
    }

    #[test]
    fn bloch_shortcut_basics() {
        let r = BlochVector::new(1.0, 0.0, 0.0);
        let v = BlochVector::new(0.0, 1.0, 0.0);
        assert!((bloch_steerability(&r, &v) - 1.0).abs() < 1e-15);
        let w = BlochVector::new(0.5, 0.0, 0.0);
        assert_eq!(bloch_steerability(&r, &w), 0.0);
        let a = BlochVector::new(0.8, 0.0, 0.0);
        let b = BlochVector::new(0.0, 0.6, 0.0);
        assert!((bloch_steerability(&a, &b) - 0.48).abs() < 1e-15);
    }

    #[test]
    fn bloch_vector_roundtrip() {
        let e = projective_effect(&[0.0, 0.0, 1.0]);
        let r = BlochVector::from_povm_element(&e).unwrap();
        assert!((r.z - 1.0).abs() < 1e-14 && r.x.abs() < 1e-14 && r.y.abs() < 1e-14);
    }

    #[test]
    fn guessing_bound_endpoints_and_midpoint() {
        let b = guessing_bound(1.0).unwrap();
        assert!((b.p_g - 0.5).abs() < 1e-15);
        assert!((b.h_min - 1.0).abs() < 1e-15);
        let b = guessing_bound(0.0).unwrap();
        assert!((b.p_g - 1.0).abs() < 1e-15);
        assert!(b.h_min.abs() < 1e-15);
        let b = guessing_bound(0.6).unwrap();
        assert!((b.p_g - 0.9).abs() < 1e-15);
        assert!((b.h_min - (-0.9f64.log2())).abs() < 1e-15);
    }

    #[test]
    fn guessing_bound_is_decreasing() {
        let mut last = f64::INFINITY;
        for i in 0..=100 {
            let s = i as f64 / 100.0;
            let b = guessing_bound(s).unwrap();
            assert!(b.p_g <= last + 1e-15);
            last = b.p_g;
        }
        assert!(matches!(
            guessing_bound(1.5),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn h_min_is_continuous_at_the_endpoints() {
        // Near S = 0 the bound is flat; near S = 1 it has a square-root
        // branch, so continuity is checked with the matching modulus.
        let near_zero = guessing_bound(1e-12).unwrap();
        assert!(near_zero.h_min.abs() < 1e-12);
        let near_one = guessing_bound(1.0 - 1e-12).unwrap();
        assert!((near_one.h_min - 1.0).abs() < 1e-5);
    }

    #[test]
    fn randomness_report_carries_the_bound() {
        let r = RandomnessReport::from_steerability(0, 0.6, Some(0.9)).unwrap();
        assert_eq!(r.setting, 0);
        assert!((r.p_g - 0.9).abs() < 1e-15);
        assert!((r.h_min + 0.9f64.log2()).abs() < 1e-15);
        assert_eq!(r.eta, Some(0.9));
    }

    #[test]
    fn guessing_oracle_on_projective_input_is_trivial() {
        let psi = PureEntangledState::new(&[0.5f64.sqrt(), 0.5f64.sqrt()]).unwrap();
        let state = psi.to_state();
        let m = qubit_mubs();
        let search = guessing_oracle(&m, &state, 0, 200, 1).unwrap();
        // Projective measurements admit no nontrivial decomposition, so the
        // best guess stays at max_a p(a|x) = 1/2.
        assert!((search.best - 0.5).abs() < 1e-9, "best = {}", search.best);
    }

    #[test]
    fn guessing_oracle_explores_unsharp_inputs() {
        // Unsharp effects sit inside the POVM body, so the remainder trick
        // accepts genuine decompositions; the bound must still hold.
        let half = ComplexMatrix::identity(2).scale(0.5);
        let m = MeasurementAssemblage::from_settings(alloc::vec![
            alloc::vec![
                &half + &pauli_z().scale(0.35),
                &half - &pauli_z().scale(0.35),
            ],
            alloc::vec![
                &half + &pauli_x().scale(0.35),
                &half - &pauli_x().scale(0.35),
            ],
        ])
        .unwrap();
        let psi = PureEntangledState::new(&[0.8f64.sqrt(), 0.2f64.sqrt()]).unwrap();
        let state = psi.to_state();
        let s = crate::assemblage::steer(&state, &m).unwrap();
        let value = sdi_steerability(&s, 1.0, 1e-9).unwrap();
        let bound = guessing_bound(value).unwrap();
        let search = guessing_oracle(&m, &state, 0, 4000, 11).unwrap();
        assert!(
            search.valid_decompositions > 0,
            "sampler found no valid decompositions"
        );
        assert!(
            search.best <= bound.p_g + 1e-6,
            "oracle {} exceeds bound {}",
            search.best,
            bound.p_g
        );
        // Knowing the internal label must help at least as much as ignoring it.
        let base = (0..2).map(|a| s.probability(0, a)).fold(0.0, f64::max);
        assert!(search.best >= base - 1e-12);
    }
}
