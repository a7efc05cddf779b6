//! Batched invariant checks over sampled instances.
//!
//! Each battery returns a plain report; asserting on the numbers is left to
//! the caller (CLI `verify` command and the acceptance suite), so the same
//! code drives interactive reports and hard test gates.

use alloc::vec::Vec;

// Load-bearing on targets without std's inherent f64 math methods.
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::assemblage::{apply_inefficiency, mix, steer, StateAssemblage};
use crate::error::Result;
use crate::freeops::{self, ChannelClass, MarginStats};
use crate::linalg::{self, ComplexMatrix};
use crate::measures::{self, BlochVector};
use crate::random;
use crate::scenarios;
use crate::seo;

/// Constructive LHS round trip over sampled instances.
#[derive(Debug, Clone, Default)]
pub struct RoundTripReport {
    pub forward_samples: usize,
    /// Worst LHS reconstruction residual on the forward direction.
    pub max_residual: f64,
    pub max_d_lambda: usize,
    /// Forward instances where no LHS model could be built at all.
    pub forward_failures: usize,
    pub reverse_samples: usize,
    /// Worst SEO commutator norm over assemblages built from restricted
    /// LHS models.
    pub reverse_max_commutator: f64,
}

/// Forward: incoherent measurements on random two-qubit states must admit
/// the constructive LHS model. Reverse: assemblages assembled from
/// restricted LHS models must have commuting SEO.
pub fn lhs_roundtrip(samples: usize, seed: u64) -> RoundTripReport {
    let mut rng = random::rng_from_seed(seed);
    let mut report = RoundTripReport::default();

    for _ in 0..samples {
        let n_x = rng.gen_range(2..=3usize);
        let n_a = rng.gen_range(2..=3usize);
        let m = scenarios::random_incoherent_measurements(2, n_x, n_a, &mut rng);
        let state = scenarios::random_state(2, 2, &mut rng);
        let s = steer(&state, &m).expect("dimensions match by construction");
        report.forward_samples += 1;
        match seo::lhs_from_commuting_seo(&s, 1e-8) {
            Ok(lhs) => {
                report.max_residual = report.max_residual.max(lhs.reconstruction_residual(&s));
                report.max_d_lambda = report.max_d_lambda.max(lhs.d_lambda());
            }
            Err(_) => report.forward_failures += 1,
        }
    }

    for _ in 0..samples {
        let d = rng.gen_range(2..=3usize);
        let (s, _) = scenarios::random_restricted_lhs_assemblage(d, 2, 2, &mut rng);
        let family = seo::seo_of(&s, 1e-9).expect("reduced state is full rank");
        let verdict =
            seo::pairwise_commutativity(&family, 1.0, 1e-8).expect("norm order is valid");
        report.reverse_samples += 1;
        report.reverse_max_commutator = report
            .reverse_max_commutator
            .max(verdict.max_commutator_norm);
    }
    report
}

/// Worst SEO commutator norm over incoherent measurements steered on
/// sampled states (the closure direction of the incoherence criterion).
#[derive(Debug, Clone, Default)]
pub struct ClosureReport {
    pub samples: usize,
    pub max_commutator_norm: f64,
}

pub fn incoherent_closure(samples: usize, seed: u64) -> ClosureReport {
    let mut rng = random::rng_from_seed(seed);
    let mut report = ClosureReport::default();
    for _ in 0..samples {
        let n_x = rng.gen_range(2..=3usize);
        let n_a = rng.gen_range(2..=3usize);
        let d_b = rng.gen_range(2..=3usize);
        let m = scenarios::random_incoherent_measurements(2, n_x, n_a, &mut rng);
        let state = scenarios::random_state(2, d_b, &mut rng);
        let s = steer(&state, &m).expect("dimensions match by construction");
        let family = seo::seo_of(&s, 1e-9).expect("sampled reduced state has support");
        let verdict =
            seo::pairwise_commutativity(&family, 1.0, 1e-8).expect("norm order is valid");
        report.samples += 1;
        report.max_commutator_norm = report.max_commutator_norm.max(verdict.max_commutator_norm);
    }
    report
}

/// Agreement between the commutativity verdict and the vanishing of the
/// steerability measure.
#[derive(Debug, Clone, Default)]
pub struct DecisionReport {
    pub samples: usize,
    pub mismatches: usize,
}

pub fn decision_consistency(samples: usize, seed: u64) -> DecisionReport {
    let mut rng = random::rng_from_seed(seed);
    let mut report = DecisionReport::default();
    for i in 0..samples {
        let s = match i % 3 {
            0 => scenarios::random_assemblage(2, 2, 2, &mut rng),
            1 => scenarios::random_restricted_lhs_assemblage(2, 2, 2, &mut rng).0,
            _ => {
                let m = scenarios::random_incoherent_measurements(2, 2, 2, &mut rng);
                let state = scenarios::random_state(2, 2, &mut rng);
                steer(&state, &m).expect("dimensions match by construction")
            }
        };
        let family = seo::seo_of(&s, 1e-9).expect("sampled reduced state has support");
        let verdict =
            seo::pairwise_commutativity(&family, 1.0, 1e-8).expect("norm order is valid");
        let value = measures::seo_steerability(&family, 1.0).expect("two settings");
        report.samples += 1;
        if verdict.commuting != (value <= 1e-8) {
            report.mismatches += 1;
        }
    }
    report
}

/// Worst signed excess of a quantity that must stay nonpositive.
#[derive(Debug, Clone, Default)]
pub struct ExcessReport {
    pub samples: usize,
    pub max_excess: f64,
}

/// `S ≤ Υ₁(M)/4` over random qubit dichotomic (state, measurement) pairs.
pub fn measurement_bound_check(samples: usize, seed: u64) -> ExcessReport {
    let mut rng = random::rng_from_seed(seed);
    let mut report = ExcessReport {
        samples,
        max_excess: f64::NEG_INFINITY,
    };
    for _ in 0..samples {
        let state = scenarios::random_state(2, 2, &mut rng);
        let m = scenarios::random_measurements(2, 2, 2, &mut rng);
        let s = steer(&state, &m).expect("dimensions match by construction");
        let value = measures::sdi_steerability(&s, 1.0, 1e-9).expect("two settings");
        let bound = measures::measurement_upper_bound(&m).expect("two settings");
        report.max_excess = report.max_excess.max(value - bound);
    }
    report
}

/// `|pipeline - ‖r×v‖|` for maximally entangled inputs with random Bloch
/// pairs of random sharpness; `r`, `v` are the SEO Bloch vectors.
pub fn bloch_consistency(samples: usize, seed: u64) -> ExcessReport {
    let mut rng = random::rng_from_seed(seed);
    let state = scenarios::maximally_entangled(2);
    let mut report = ExcessReport {
        samples,
        max_excess: 0.0,
    };
    for _ in 0..samples {
        let dir_r = random::random_unit_vector(&mut rng);
        let dir_v = random::random_unit_vector(&mut rng);
        let sharp_r: f64 = rng.gen();
        let sharp_v: f64 = rng.gen();
        let r = BlochVector::new(dir_r[0], dir_r[1], dir_r[2]);
        let v = BlochVector::new(dir_v[0], dir_v[1], dir_v[2]);
        let m = crate::assemblage::MeasurementAssemblage::from_settings(alloc::vec![
            scenarios::qubit_povm_from_bloch(&r, sharp_r).expect("unit direction"),
            scenarios::qubit_povm_from_bloch(&v, sharp_v).expect("unit direction"),
        ])
        .expect("two dichotomic settings");
        let s = steer(&state, &m).expect("dimensions match");
        let family = seo::seo_of(&s, 1e-9).expect("full-rank marginal");
        let pipeline = measures::seo_steerability(&family, 1.0).expect("two settings");
        let r_seo = BlochVector::from_povm_element(family.element(0, 0)).expect("qubit SEO");
        let v_seo = BlochVector::from_povm_element(family.element(1, 0)).expect("qubit SEO");
        let shortcut = measures::bloch_steerability(&r_seo, &v_seo);
        report.max_excess = report.max_excess.max((pipeline - shortcut).abs());
    }
    report
}

/// A mixing configuration where the measure exceeds the convex combination.
#[derive(Debug, Clone)]
pub struct NonconvexityWitness {
    pub p: f64,
    pub s_first: f64,
    pub s_second: f64,
    pub s_mix: f64,
    /// `S(mix) - [p·S + (1-p)·S']`.
    pub margin: f64,
}

/// Assemblage with reduced state `𝟙/2` whose SEO is the Bloch pair `(r, v)`.
fn bloch_seo_assemblage(r: &BlochVector, v: &BlochVector) -> StateAssemblage {
    let effects = |t: &BlochVector| {
        scenarios::qubit_povm_from_bloch(t, 1.0)
            .expect("vectors are kept inside the ball")
            .into_iter()
            .map(|e| e.scale(0.5))
            .collect::<Vec<_>>()
    };
    let mut elements = effects(r);
    elements.extend(effects(v));
    StateAssemblage::new(2, 2, 2, elements).expect("two dichotomic settings")
}

/// Searches matching-marginal pairs and mixing weights for a strict
/// superadditivity witness. The first candidate is the mutually unbiased
/// triple (x̂, ŷ | ẑ); the rest are random directions.
pub fn nonconvexity_search(attempts: usize, seed: u64) -> Option<NonconvexityWitness> {
    let mut rng = random::rng_from_seed(seed);
    let mut best: Option<NonconvexityWitness> = None;
    for attempt in 0..attempts {
        let (r, v, w) = if attempt == 0 {
            (
                BlochVector::new(1.0, 0.0, 0.0),
                BlochVector::new(0.0, 1.0, 0.0),
                BlochVector::new(0.0, 0.0, 1.0),
            )
        } else {
            let a = random::random_unit_vector(&mut rng);
            let b = random::random_unit_vector(&mut rng);
            let c = random::random_unit_vector(&mut rng);
            (
                BlochVector::new(a[0], a[1], a[2]),
                BlochVector::new(b[0], b[1], b[2]),
                BlochVector::new(c[0], c[1], c[2]),
            )
        };
        let first = bloch_seo_assemblage(&r, &v);
        let second = bloch_seo_assemblage(&w, &w); // commuting SEO
        let s_first = measures::sdi_steerability(&first, 1.0, 1e-9).expect("two settings");
        let s_second = measures::sdi_steerability(&second, 1.0, 1e-9).expect("two settings");
        for step in 1..20 {
            let p = step as f64 * 0.05;
            let mixed = mix(p, &first, &second).expect("matching shapes");
            let s_mix = measures::sdi_steerability(&mixed, 1.0, 1e-9).expect("two settings");
            let margin = s_mix - (p * s_first + (1.0 - p) * s_second);
            if best.as_ref().is_none_or(|b| margin > b.margin) {
                best = Some(NonconvexityWitness {
                    p,
                    s_first,
                    s_second,
                    s_mix,
                    margin,
                });
            }
        }
    }
    best
}

/// Scaling of the measure along a one-parameter family, with a power-law
/// fit `S ∝ paramᵏ` over the strictly positive samples.
#[derive(Debug, Clone)]
pub struct ScalingReport {
    /// `(parameter, S)` pairs in grid order.
    pub values: Vec<(f64, f64)>,
    /// Least-squares slope of `ln S` against `ln parameter`.
    pub fitted_exponent: f64,
    pub monotone_nondecreasing: bool,
}

fn fit_power_law(values: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = values
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 1e-13)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

fn scaling_report(values: Vec<(f64, f64)>) -> ScalingReport {
    let fitted_exponent = fit_power_law(&values);
    let monotone_nondecreasing = values.windows(2).all(|w| w[1].1 >= w[0].1 - 1e-12);
    ScalingReport {
        values,
        fitted_exponent,
        monotone_nondecreasing,
    }
}

/// `S` of the isotropic state under detection-inefficient MUBs, swept in η.
pub fn eta_scaling_at(d: usize, alpha: f64, etas: &[f64], p: f64) -> Result<ScalingReport> {
    let state = scenarios::isotropic(d, alpha)?;
    let m = scenarios::mub_pair(d);
    let mut values = Vec::with_capacity(etas.len());
    for &eta in etas {
        let m_eta = apply_inefficiency(&m, eta)?;
        let s = steer(&state, &m_eta)?;
        values.push((eta, measures::sdi_steerability(&s, p, 1e-9)?));
    }
    Ok(scaling_report(values))
}

/// Trace-norm version of [`eta_scaling_at`].
pub fn eta_scaling(d: usize, alpha: f64, etas: &[f64]) -> Result<ScalingReport> {
    eta_scaling_at(d, alpha, etas, 1.0)
}

/// `S` of the isotropic family under ideal MUBs, swept in α.
pub fn alpha_scaling_at(d: usize, alphas: &[f64], p: f64) -> Result<ScalingReport> {
    let m = scenarios::mub_pair(d);
    let mut values = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let state = scenarios::isotropic(d, alpha)?;
        let s = steer(&state, &m)?;
        values.push((alpha, measures::sdi_steerability(&s, p, 1e-9)?));
    }
    Ok(scaling_report(values))
}

/// Trace-norm version of [`alpha_scaling_at`].
pub fn alpha_scaling(d: usize, alphas: &[f64]) -> Result<ScalingReport> {
    alpha_scaling_at(d, alphas, 1.0)
}

/// One saturation case of the measure under MUB measurements.
#[derive(Debug, Clone)]
pub struct SaturationCase {
    pub d: usize,
    pub p: f64,
    pub uniform_spectrum: bool,
    pub value: f64,
}

#[derive(Debug, Clone, Default)]
pub struct SaturationReport {
    pub cases: Vec<SaturationCase>,
    pub max_deviation: f64,
}

/// `S` for pure entangled states with MUB measurements: maximally entangled
/// at `d ∈ 2..=d_max`, plus full-support non-uniform spectra at d = 2, 3;
/// all at p ∈ {1, 2, ∞}. The expected saturation value is 1.
pub fn mub_saturation(d_max: usize) -> Result<SaturationReport> {
    let ps = [1.0, 2.0, f64::INFINITY];
    let mut report = SaturationReport::default();
    for d in 2..=d_max {
        let state = scenarios::maximally_entangled(d);
        let s = steer(&state, &scenarios::mub_pair(d))?;
        for &p in &ps {
            let value = measures::sdi_steerability(&s, p, 1e-9)?;
            report.max_deviation = report.max_deviation.max((value - 1.0).abs());
            report.cases.push(SaturationCase {
                d,
                p,
                uniform_spectrum: true,
                value,
            });
        }
    }
    let skewed: [&[f64]; 2] = [
        &[0.9f64.sqrt(), 0.1f64.sqrt()],
        &[0.7f64.sqrt(), 0.2f64.sqrt(), 0.1f64.sqrt()],
    ];
    for spectrum in skewed {
        let d = spectrum.len();
        let state = scenarios::pure_entangled(spectrum)?;
        let s = steer(&state, &scenarios::mub_pair(d))?;
        for &p in &ps {
            let value = measures::sdi_steerability(&s, p, 1e-9)?;
            report.max_deviation = report.max_deviation.max((value - 1.0).abs());
            report.cases.push(SaturationCase {
                d,
                p,
                uniform_spectrum: false,
                value,
            });
        }
    }
    Ok(report)
}

/// One guessing-probability consistency case.
#[derive(Debug, Clone)]
pub struct GuessingCase {
    pub alpha: f64,
    pub steerability: f64,
    pub bound_p_g: f64,
    pub oracle_best: f64,
    pub valid_decompositions: usize,
}

#[derive(Debug, Clone, Default)]
pub struct GuessingReport {
    pub cases: Vec<GuessingCase>,
    /// Worst `oracle - bound`; negative means the bound holds with slack.
    pub max_excess: f64,
}

/// Adversarial decomposition search against the guessing bound for the
/// isotropic family with MUBs.
pub fn guessing_consistency(alphas: &[f64], samples: usize, seed: u64) -> Result<GuessingReport> {
    let m = scenarios::mub_pair(2);
    let mut report = GuessingReport {
        cases: Vec::new(),
        max_excess: f64::NEG_INFINITY,
    };
    for (i, &alpha) in alphas.iter().enumerate() {
        let state = scenarios::isotropic(2, alpha)?;
        let s = steer(&state, &m)?;
        let steerability = measures::sdi_steerability(&s, 1.0, 1e-9)?;
        let bound = measures::guessing_bound(steerability)?;
        let search = measures::guessing_oracle(&m, &state, 0, samples, seed.wrapping_add(i as u64))?;
        report.max_excess = report.max_excess.max(search.best - bound.p_g);
        report.cases.push(GuessingCase {
            alpha,
            steerability,
            bound_p_g: bound.p_g,
            oracle_best: search.best,
            valid_decompositions: search.valid_decompositions,
        });
    }
    Ok(report)
}

/// Worst SEO commutator norm after free operations on commuting-SEO inputs.
#[derive(Debug, Clone, Default)]
pub struct FreeClosureReport {
    pub operations: usize,
    pub inputs: usize,
    pub max_commutator_norm: f64,
}

/// Applies every sampled free operation to every commuting-SEO input and
/// records the worst output commutator norm (must stay at numerical noise).
pub fn free_closure(n_ops: usize, n_inputs: usize, seed: u64) -> FreeClosureReport {
    let mut rng = random::rng_from_seed(seed);
    let inputs: Vec<StateAssemblage> = (0..n_inputs)
        .map(|i| {
            if i % 2 == 0 {
                scenarios::random_restricted_lhs_assemblage(2, 2, 2, &mut rng).0
            } else {
                let m = scenarios::random_incoherent_measurements(2, 2, 2, &mut rng);
                let state = scenarios::random_state(2, 2, &mut rng);
                steer(&state, &m).expect("dimensions match by construction")
            }
        })
        .collect();
    let mut report = FreeClosureReport {
        operations: n_ops,
        inputs: n_inputs,
        max_commutator_norm: 0.0,
    };
    for _ in 0..n_ops {
        let op = freeops::sample_free_with(2, 2, 2, ChannelClass::Random, &mut rng);
        for input in &inputs {
            let out = freeops::apply_free(&op, input).expect("shapes match by construction");
            let family = seo::seo_of(&out, 1e-9).expect("output keeps support");
            let verdict =
                seo::pairwise_commutativity(&family, 1.0, 1e-8).expect("norm order is valid");
            report.max_commutator_norm =
                report.max_commutator_norm.max(verdict.max_commutator_norm);
        }
    }
    report
}

/// Monotonicity margins pooled over sampled inputs.
#[derive(Debug, Clone, Default)]
pub struct MonotonicityBatteryReport {
    pub inputs: usize,
    pub general: MarginStats,
    pub identity_channel: MarginStats,
    pub unitary_channel: MarginStats,
    pub violations: usize,
}

fn merge_stats(total: &mut MarginStats, part: &MarginStats) {
    let combined = total.samples + part.samples;
    if combined == 0 {
        return;
    }
    total.mean_margin = (total.mean_margin * total.samples as f64
        + part.mean_margin * part.samples as f64)
        / combined as f64;
    total.samples = combined;
    total.max_margin = total.max_margin.max(part.max_margin);
}

/// Runs the per-assemblage monotonicity report over a spread of inputs:
/// random steered assemblages, a noisy isotropic instance and the maximally
/// entangled MUB instance.
pub fn monotonicity_battery(
    inputs: usize,
    ops_per_class: usize,
    seed: u64,
) -> Result<MonotonicityBatteryReport> {
    let mut rng = random::rng_from_seed(seed);
    let mut report = MonotonicityBatteryReport::default();
    for i in 0..inputs {
        let s = match i % 3 {
            0 => scenarios::random_assemblage(2, 2, 2, &mut rng),
            1 => {
                let state = scenarios::isotropic(2, 0.9)?;
                steer(&state, &scenarios::mub_pair(2))?
            }
            _ => {
                let state = scenarios::maximally_entangled(2);
                steer(&state, &scenarios::mub_pair(2))?
            }
        };
        let sub = freeops::monotonicity_report(&s, ops_per_class, seed.wrapping_add(i as u64))?;
        merge_stats(&mut report.general, &sub.general);
        merge_stats(&mut report.identity_channel, &sub.identity_channel);
        merge_stats(&mut report.unitary_channel, &sub.unitary_channel);
        report.violations += sub.violations.len();
        report.inputs += 1;
    }
    Ok(report)
}

/// Largest pipeline-vs-direct deviation between the two assemblage routes
/// for pure states (`steer` on `|φ⟩⟨φ|` against the Schmidt-form product).
pub fn pure_route_consistency(samples: usize, seed: u64) -> ExcessReport {
    let mut rng = random::rng_from_seed(seed);
    let mut report = ExcessReport {
        samples,
        max_excess: 0.0,
    };
    for _ in 0..samples {
        let d = rng.gen_range(2..=3usize);
        let mut spectrum: Vec<f64> = (0..d).map(|_| rng.gen::<f64>() + 0.05).collect();
        let norm: f64 = spectrum.iter().map(|l| l * l).sum::<f64>().sqrt();
        for l in spectrum.iter_mut() {
            *l /= norm;
        }
        let psi = crate::assemblage::PureEntangledState::new(&spectrum)
            .expect("normalized by construction");
        let m = scenarios::random_measurements(d, 2, 2, &mut rng);
        let direct = crate::assemblage::assemblage_from_pure(&psi, &m)
            .expect("dimensions match");
        let steered = steer(&psi.to_state(), &m).expect("dimensions match");
        let dev = direct
            .elements()
            .iter()
            .zip(steered.elements())
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).max_abs()));
        report.max_excess = report.max_excess.max(dev);
    }
    report
}

/// Unitary covariance of the measure: conjugating state and measurements by
/// local unitaries must leave `S` unchanged.
pub fn unitary_invariance(samples: usize, seed: u64) -> ExcessReport {
    let mut rng = random::rng_from_seed(seed);
    let mut report = ExcessReport {
        samples,
        max_excess: 0.0,
    };
    for _ in 0..samples {
        let state = scenarios::random_state(2, 2, &mut rng);
        let m = scenarios::random_measurements(2, 2, 2, &mut rng);
        let s = steer(&state, &m).expect("dimensions match");
        let base = measures::sdi_steerability(&s, 1.0, 1e-9).expect("two settings");

        let ua = random::haar_unitary(2, &mut rng);
        let ub = random::haar_unitary(2, &mut rng);
        let u = linalg::tensor(&ua, &ub);
        let rho = &(&u * state.rho()) * &u.adjoint();
        let rotated_state =
            crate::assemblage::BipartiteState::new(2, 2, rho).expect("square by construction");
        let rotated_elements: Vec<Vec<ComplexMatrix>> = (0..2)
            .map(|x| {
                (0..2)
                    .map(|a| &(&ua * m.element(x, a)) * &ua.adjoint())
                    .collect()
            })
            .collect();
        let rotated_m =
            crate::assemblage::MeasurementAssemblage::from_settings(rotated_elements)
                .expect("two dichotomic settings");
        let s_rot = steer(&rotated_state, &rotated_m).expect("dimensions match");
        let rotated = measures::sdi_steerability(&s_rot, 1.0, 1e-9).expect("two settings");
        report.max_excess = report.max_excess.max((base - rotated).abs());
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_small_sample() {
        let r = lhs_roundtrip(25, 2024);
        assert_eq!(r.forward_failures, 0);
        assert!(r.max_residual < 1e-9, "residual {}", r.max_residual);
        assert!(r.max_d_lambda <= 2);
        assert!(r.reverse_max_commutator < 1e-8);
    }

    #[test]
    fn nonconvexity_witness_exists() {
        let w = nonconvexity_search(1, 0).expect("deterministic candidate");
        assert!(w.margin > 1e-6, "margin {}", w.margin);
    }

    #[test]
    fn alpha_scaling_is_quadratic() {
        let alphas: Vec<f64> = (1..=8).map(|i| i as f64 / 8.0).collect();
        let r = alpha_scaling(2, &alphas).unwrap();
        assert!(
            (r.fitted_exponent - 2.0).abs() < 1e-6,
            "exponent {}",
            r.fitted_exponent
        );
        assert!(r.monotone_nondecreasing);
    }

    #[test]
    fn eta_scaling_is_quadratic() {
        let etas: Vec<f64> = (1..=8).map(|i| i as f64 / 8.0).collect();
        let r = eta_scaling(2, 0.8, &etas).unwrap();
        assert!(
            (r.fitted_exponent - 2.0).abs() < 1e-6,
            "exponent {}",
            r.fitted_exponent
        );
        assert!(r.monotone_nondecreasing);
    }
}
