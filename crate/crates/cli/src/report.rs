//! Analysis report: verdicts, measure, randomness bound and reconstruction
//! residuals for one input file.

use serde::Serialize;
use sha2::{Digest, Sha256};
use steerlab_core::seo::DecompositionOutcome;
use steerlab_core::{measures, seo, StateAssemblage};

use crate::error::CliError;
use crate::schema::ScenarioFile;

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub input_digest: String,
    pub dim_a: usize,
    pub dim_b: usize,
    pub n_x: usize,
    pub n_a: usize,
    pub seo_verdict: String,
    pub max_commutator_norm: f64,
    pub seo_support_dim: usize,
    pub p_norm: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_upsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_g: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs_d_lambda: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cq_residual: Option<f64>,
    pub warnings: Vec<String>,
}

pub fn digest_of(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Resolves the assemblage to analyze: an explicit `assemblage` section is
/// used (cross-checked against `state` + `measurements` when both routes are
/// present), otherwise `state` is steered by `measurements`. Inputs are
/// validated first; any violation is a failure naming the worst offender.
pub fn resolve_assemblage(file: &ScenarioFile, tol: f64) -> Result<StateAssemblage, CliError> {
    let state = file.state_matrix()?;
    let measurements = file.measurement_assemblage()?;
    let assemblage = file.state_assemblage()?;

    if let Some(state) = &state {
        let report = state.validate(tol);
        if !report.is_ok() {
            return Err(CliError::Validation(format!(
                "state: {}",
                report.worst().expect("non-empty report")
            )));
        }
    }
    if let Some(m) = &measurements {
        let report = m.validate(tol);
        if !report.is_ok() {
            return Err(CliError::Validation(format!(
                "measurements: {}",
                report.worst().expect("non-empty report")
            )));
        }
    }
    if let Some(s) = &assemblage {
        let report = s.validate(tol);
        if !report.is_ok() {
            return Err(CliError::Validation(format!(
                "assemblage: {}",
                report.worst().expect("non-empty report")
            )));
        }
    }

    match (assemblage, state, measurements) {
        (Some(s), Some(state), Some(meas)) => {
            // Both routes present: the steered result must agree with the
            // stored assemblage, otherwise the file is inconsistent.
            let steered = steerlab_core::steer(&state, &meas)?;
            let dev = steered
                .elements()
                .iter()
                .zip(s.elements())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).max_abs()));
            if dev > tol {
                return Err(CliError::Validation(format!(
                    "assemblage: stored elements deviate from steer(state, measurements) \
                     by {dev:.3e}"
                )));
            }
            Ok(s)
        }
        (Some(s), _, _) => Ok(s),
        (None, Some(state), Some(meas)) => {
            steerlab_core::steer(&state, &meas).map_err(CliError::from)
        }
        _ => Err(CliError::Parse {
            field: "input".into(),
            message: "need either an 'assemblage' section or both 'state' and 'measurements'"
                .into(),
        }),
    }
}

pub fn analyze(
    file: &ScenarioFile,
    raw_bytes: &[u8],
    p: f64,
    tol: f64,
) -> Result<AnalysisReport, CliError> {
    let mut warnings = Vec::new();
    let s = resolve_assemblage(file, tol)?;

    let ns_residual = s.nosignaling_residual();
    let family = seo::seo_of(&s, tol)?;
    let verdict = seo::pairwise_commutativity(&family, 1.0, tol)?;

    if family.source_rank_deficient() {
        warnings.push(format!(
            "reduced state is rank-deficient: SEO lives on a {}-dimensional support",
            family.dim()
        ));
    }
    if verdict.commuting && family.min_support_gap() < 1e-6 {
        warnings.push(
            "reduced state is (near-)degenerate: the hidden-state basis of the \
             reconstruction is not unique"
                .into(),
        );
    }
    if ns_residual > tol / 10.0 {
        warnings.push(format!(
            "no-signaling residual {ns_residual:.3e} close to tolerance"
        ));
    }
    if verdict.max_commutator_norm > tol / 10.0 && verdict.max_commutator_norm < tol * 10.0 {
        warnings.push(format!(
            "commutator norm {:.3e} within a decade of the tolerance {tol:.1e}; \
             the verdict is not robust",
            verdict.max_commutator_norm
        ));
    }

    let (s_upsilon, p_g, h_min) = if s.n_settings() == 2 {
        let value = measures::seo_steerability(&family, p)?;
        let bound = measures::guessing_bound(value.clamp(0.0, 1.0))?;
        (Some(value), Some(bound.p_g), Some(bound.h_min))
    } else {
        warnings.push(format!(
            "steerability measure is defined for two settings; input has {}",
            s.n_settings()
        ));
        (None, None, None)
    };

    let (mut lhs_d_lambda, mut lhs_residual, mut cq_residual) = (None, None, None);
    if verdict.commuting {
        match seo::incoherent_decomposition(&family, tol)? {
            DecompositionOutcome::Decomposed(_) => {
                let lhs = seo::lhs_from_commuting_seo(&s, tol)?;
                lhs_d_lambda = Some(lhs.d_lambda());
                lhs_residual = Some(lhs.reconstruction_residual(&s));
                let cq = seo::cq_from_lhs(&lhs);
                cq_residual = Some(cq.reproduction_residual(&s)?);
            }
            DecompositionOutcome::Refused { .. } => {
                warnings.push("verdict is commuting but the decomposition refused".into());
            }
        }
    }

    Ok(AnalysisReport {
        input_digest: digest_of(raw_bytes),
        dim_a: file.dims.d_a,
        dim_b: file.dims.d_b,
        n_x: s.n_settings(),
        n_a: s.n_outcomes(),
        seo_verdict: if verdict.commuting {
            "commuting".into()
        } else {
            "noncommuting".into()
        },
        max_commutator_norm: verdict.max_commutator_norm,
        seo_support_dim: family.dim(),
        p_norm: crate::p_label(p),
        s_upsilon,
        p_g,
        h_min,
        lhs_d_lambda,
        lhs_residual,
        cq_residual,
        warnings,
    })
}

pub fn render_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("input digest:   {}\n", r.input_digest));
    out.push_str(&format!(
        "dims:           dA={} dB={}  settings={} outcomes={}\n",
        r.dim_a, r.dim_b, r.n_x, r.n_a
    ));
    out.push_str(&format!(
        "SEO verdict:    {} (max commutator norm {:.6e}, support dim {})\n",
        r.seo_verdict, r.max_commutator_norm, r.seo_support_dim
    ));
    match r.s_upsilon {
        Some(s) => out.push_str(&format!("S (p={}):       {:.12}\n", r.p_norm, s)),
        None => out.push_str("S:              undefined (needs two settings)\n"),
    }
    if let (Some(p_g), Some(h_min)) = (r.p_g, r.h_min) {
        out.push_str(&format!("p_g bound:      {p_g:.12}\n"));
        out.push_str(&format!("H_min:          {h_min:.12} bits\n"));
    }
    if let (Some(d), Some(res)) = (r.lhs_d_lambda, r.lhs_residual) {
        out.push_str(&format!(
            "LHS model:      d_lambda={d}, reconstruction residual {res:.3e}\n"
        ));
    }
    if let Some(res) = r.cq_residual {
        out.push_str(&format!("CQ state:       reproduction residual {res:.3e}\n"));
    }
    if r.warnings.is_empty() {
        out.push_str("warnings:       none\n");
    } else {
        for w in &r.warnings {
            out.push_str(&format!("warning:        {w}\n"));
        }
    }
    out
}
