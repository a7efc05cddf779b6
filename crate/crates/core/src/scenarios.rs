//! Canonical states and measurement families, plus seeded random instances.

use alloc::vec::Vec;

// Load-bearing on targets without std's inherent f64 math methods.
#[allow(unused_imports)]
use num_traits::Float;
use rand_chacha::ChaCha8Rng;

use crate::assemblage::{BipartiteState, MeasurementAssemblage, PureEntangledState, StateAssemblage};
use crate::error::{Error, Result};
use crate::linalg::{self, Complex64, ComplexMatrix};
use crate::measures::BlochVector;
use crate::random;
use crate::seo::LhsModel;

/// A named scenario with its parameters; `build` resolves it into a state
/// and the MUB measurements the worked examples use, with optional
/// detection inefficiency folded in.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioSpec {
    Isotropic {
        d: usize,
        alpha: f64,
        eta: Option<f64>,
    },
    Pure {
        schmidt: Vec<f64>,
        eta: Option<f64>,
    },
    /// Maximally entangled qubit pair measured along two Bloch directions.
    BlochPair {
        r: BlochVector,
        sharpness_r: f64,
        v: BlochVector,
        sharpness_v: f64,
    },
}

impl ScenarioSpec {
    pub fn build(&self) -> Result<(BipartiteState, MeasurementAssemblage)> {
        match self {
            ScenarioSpec::Isotropic { d, alpha, eta } => {
                let state = isotropic(*d, *alpha)?;
                let m = with_inefficiency(mub_pair(*d), *eta)?;
                Ok((state, m))
            }
            ScenarioSpec::Pure { schmidt, eta } => {
                let state = pure_entangled(schmidt)?;
                let m = with_inefficiency(mub_pair(schmidt.len()), *eta)?;
                Ok((state, m))
            }
            ScenarioSpec::BlochPair {
                r,
                sharpness_r,
                v,
                sharpness_v,
            } => {
                let state = maximally_entangled(2);
                let m = MeasurementAssemblage::from_settings(alloc::vec![
                    qubit_povm_from_bloch(r, *sharpness_r)?,
                    qubit_povm_from_bloch(v, *sharpness_v)?,
                ])?;
                Ok((state, m))
            }
        }
    }
}

fn with_inefficiency(
    m: MeasurementAssemblage,
    eta: Option<f64>,
) -> Result<MeasurementAssemblage> {
    match eta {
        None => Ok(m),
        Some(eta) => crate::assemblage::apply_inefficiency(&m, eta),
    }
}

/// Separability boundary of the isotropic family: states with
/// `α ≤ 1/(d+1)` are separable. Recorded as metadata only; the library does
/// not decide separability.
pub fn isotropic_separability_threshold(d: usize) -> f64 {
    1.0 / (d as f64 + 1.0)
}

/// Maximally entangled state `Σ_i |ii⟩/√d` as a density matrix.
pub fn maximally_entangled(d: usize) -> BipartiteState {
    let coeffs = alloc::vec![1.0 / (d as f64).sqrt(); d];
    PureEntangledState::new(&coeffs)
        .expect("uniform coefficients are normalized")
        .to_state()
}

/// Isotropic state `α|φ₊⟩⟨φ₊| + (1-α) 𝟙/d²` for `α ∈ [-1/(d²-1), 1]`.
pub fn isotropic(d: usize, alpha: f64) -> Result<BipartiteState> {
    let lower = -1.0 / ((d * d - 1) as f64);
    if !(lower..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter {
            what: "isotropic noise parameter alpha",
            value: alpha,
        });
    }
    let pure = maximally_entangled(d);
    let dim = d * d;
    let mixed = ComplexMatrix::identity(dim).scale((1.0 - alpha) / dim as f64);
    let rho = &pure.rho().scale(alpha) + &mixed;
    BipartiteState::new(d, d, rho)
}

/// Discrete Fourier transform `F_{jk} = e^{2πi jk/d}/√d`.
pub fn fourier_matrix(d: usize) -> ComplexMatrix {
    let norm = 1.0 / (d as f64).sqrt();
    ComplexMatrix::from_fn(d, |j, k| {
        let angle = core::f64::consts::TAU * (j * k) as f64 / d as f64;
        Complex64::new(angle.cos() * norm, angle.sin() * norm)
    })
}

/// Two mutually unbiased bases: computational projectors and their
/// Fourier conjugates `F|a⟩⟨a|F†`.
pub fn mub_pair(d: usize) -> MeasurementAssemblage {
    assert!(d >= 2, "MUB pair needs dimension at least two");
    let f = fourier_matrix(d);
    let mut computational = Vec::with_capacity(d);
    let mut fourier = Vec::with_capacity(d);
    for a in 0..d {
        let e = linalg::basis_ket(d, a);
        computational.push(linalg::outer(&e, &e));
        let col: Vec<Complex64> = (0..d).map(|i| f.get(i, a)).collect();
        fourier.push(linalg::outer(&col, &col));
    }
    MeasurementAssemblage::from_settings(alloc::vec![computational, fourier])
        .expect("MUB projectors share dimension and outcome count")
}

/// Pure state `Σ λ_i |ii⟩` from a normalized Schmidt spectrum.
pub fn pure_entangled(schmidt: &[f64]) -> Result<BipartiteState> {
    Ok(PureEntangledState::new(schmidt)?.to_state())
}

/// Dichotomic qubit POVM `(𝟙 ± s·t·σ)/2` with sharpness `s ∈ [0, 1]`.
pub fn qubit_povm_from_bloch(t: &BlochVector, sharpness: f64) -> Result<Vec<ComplexMatrix>> {
    let effective = t.norm() * sharpness;
    if effective > 1.0 + 1e-12 || sharpness < 0.0 {
        return Err(Error::InvalidParameter {
            what: "Bloch vector length times sharpness",
            value: effective,
        });
    }
    let mut vector_part = linalg::pauli_x().scale(t.x * sharpness);
    vector_part = &vector_part + &linalg::pauli_y().scale(t.y * sharpness);
    vector_part = &vector_part + &linalg::pauli_z().scale(t.z * sharpness);
    let id = ComplexMatrix::identity(2);
    let plus = (&id + &vector_part).scale(0.5);
    let minus = (&id - &vector_part).scale(0.5);
    Ok(alloc::vec![plus, minus])
}

/// Two-setting qubit assemblage from two Bloch vectors (unit sharpness).
pub fn dichotomic_pair(r: &BlochVector, v: &BlochVector) -> Result<MeasurementAssemblage> {
    MeasurementAssemblage::from_settings(alloc::vec![
        qubit_povm_from_bloch(r, 1.0)?,
        qubit_povm_from_bloch(v, 1.0)?,
    ])
}

/// What `random_instance` should produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    State,
    Measurements,
    Assemblage,
}

#[derive(Debug, Clone)]
pub enum RandomInstance {
    State(BipartiteState),
    Measurements(MeasurementAssemblage),
    Assemblage(StateAssemblage),
}

/// Reproducible random instance on local dimension `d` (two settings,
/// `d` outcomes). States are Ginibre-induced, POVMs Wishart-normalized,
/// assemblages produced by steering random inputs.
pub fn random_instance(kind: InstanceKind, d: usize, seed: u64) -> RandomInstance {
    let mut rng = random::rng_from_seed(seed);
    match kind {
        InstanceKind::State => RandomInstance::State(random_state(d, d, &mut rng)),
        InstanceKind::Measurements => {
            RandomInstance::Measurements(random_measurements(d, 2, d, &mut rng))
        }
        InstanceKind::Assemblage => RandomInstance::Assemblage(random_assemblage(d, 2, d, &mut rng)),
    }
}

/// Random bipartite state on `dA·dB` (full rank almost surely).
pub fn random_state(da: usize, db: usize, rng: &mut ChaCha8Rng) -> BipartiteState {
    let rho = random::random_density(da * db, rng);
    BipartiteState::new(da, db, rho).expect("dimension fixed by construction")
}

/// Random measurement assemblage: Wishart-style positive operators
/// normalized to a complete POVM per setting.
pub fn random_measurements(
    d: usize,
    n_x: usize,
    n_a: usize,
    rng: &mut ChaCha8Rng,
) -> MeasurementAssemblage {
    let mut settings = Vec::with_capacity(n_x);
    for _ in 0..n_x {
        let parts: Vec<ComplexMatrix> = (0..n_a)
            .map(|_| {
                let g = random::ginibre(d, rng);
                &g * &g.adjoint()
            })
            .collect();
        let mut total = ComplexMatrix::zeros(d);
        for p in &parts {
            total = &total + p;
        }
        let pinv = linalg::pinv_sqrt(&total, 1e-12).expect("Wishart sum is positive definite");
        let p = pinv.embedded();
        settings.push(parts.iter().map(|w| &(&p * w) * &p).collect());
    }
    MeasurementAssemblage::from_settings(settings).expect("settings built with equal shape")
}

/// Random state assemblage produced by steering a random state with random
/// measurements; no-signaling holds by construction.
pub fn random_assemblage(d: usize, n_x: usize, n_a: usize, rng: &mut ChaCha8Rng) -> StateAssemblage {
    let state = random_state(d, d, rng);
    let m = random_measurements(d, n_x, n_a, rng);
    crate::assemblage::steer(&state, &m).expect("dimensions match by construction")
}

/// Random incoherent measurement assemblage: all elements diagonal in one
/// random common basis, with flat-Dirichlet outcome distributions per basis
/// vector and setting.
pub fn random_incoherent_measurements(
    d: usize,
    n_x: usize,
    n_a: usize,
    rng: &mut ChaCha8Rng,
) -> MeasurementAssemblage {
    let u = random::haar_unitary(d, rng);
    let columns: Vec<Vec<Complex64>> = (0..d)
        .map(|t| (0..d).map(|i| u.get(i, t)).collect())
        .collect();
    let mut settings = Vec::with_capacity(n_x);
    for _ in 0..n_x {
        // rows[i] is the outcome distribution of basis vector i.
        let rows: Vec<Vec<f64>> = (0..d).map(|_| random::dirichlet_flat(n_a, rng)).collect();
        let mut povm = Vec::with_capacity(n_a);
        for a in 0..n_a {
            let mut m = ComplexMatrix::zeros(d);
            for (i, col) in columns.iter().enumerate() {
                m = &m + &linalg::outer(col, col).scale(rows[i][a]);
            }
            povm.push(m);
        }
        settings.push(povm);
    }
    MeasurementAssemblage::from_settings(settings).expect("settings built with equal shape")
}

/// Random assemblage with an explicit dimensionally-restricted LHS model of
/// the constructive form: hidden states `σ_λ = ρ_B^{1/2}|λ⟩⟨λ|ρ_B^{1/2}` over
/// a random orthonormal basis, so the SEO is commuting by construction.
pub fn random_restricted_lhs_assemblage(
    d: usize,
    n_x: usize,
    n_a: usize,
    rng: &mut ChaCha8Rng,
) -> (StateAssemblage, LhsModel) {
    let rho_b = random::random_density(d, rng);
    let sqrt_rho = linalg::herm_sqrt(&rho_b, 1e-12).expect("Ginibre density is PSD");
    let basis = random::haar_unitary(d, rng);

    let mut weights = Vec::with_capacity(d);
    let mut states = Vec::with_capacity(d);
    let mut kets = Vec::with_capacity(d);
    for lam in 0..d {
        let col: Vec<Complex64> = (0..d).map(|i| basis.get(i, lam)).collect();
        let w = sqrt_rho.mat_vec(&col);
        let p: f64 = w.iter().map(|z| z.norm_sqr()).sum();
        weights.push(p);
        states.push(linalg::outer(&w, &w).scale(1.0 / p));
        kets.push(w);
    }

    let mut response = alloc::vec![0.0f64; n_x * n_a * d];
    for x in 0..n_x {
        for lam in 0..d {
            let dist = random::dirichlet_flat(n_a, rng);
            for a in 0..n_a {
                response[(x * n_a + a) * d + lam] = dist[a];
            }
        }
    }
    let lhs = LhsModel::new(d, n_x, n_a, weights, states, response)
        .expect("tables built with consistent shapes");
    (lhs.assemblage(), lhs)
}
