//! Library side of the `steerlab` command-line tool: file schema, analysis
//! report assembly, sweeps and the verification suites. The binary in
//! `main.rs` is a thin argument-parsing shell over these modules.

pub mod error;
pub mod report;
pub mod schema;
pub mod sweep;
pub mod verify_cmd;

pub use error::CliError;

/// Default tolerance: the `STEERLAB_TOL` environment variable when set,
/// otherwise 1e-8. An explicit `--tol` flag wins over both.
pub fn default_tol() -> f64 {
    std::env::var("STEERLAB_TOL")
        .ok()
        .and_then(|v| v.parse::<f64>().ok())
        .filter(|t| t.is_finite() && *t > 0.0)
        .unwrap_or(1e-8)
}

/// Parses the Schatten order flag: a real number at least one, or `inf`.
pub fn parse_p(raw: &str) -> Result<f64, CliError> {
    let p = match raw.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" => f64::INFINITY,
        other => other.parse::<f64>().map_err(|_| CliError::Parse {
            field: "--p".into(),
            message: format!("expected a real number or 'inf', got '{raw}'"),
        })?,
    };
    if p.is_nan() || p < 1.0 {
        return Err(CliError::Parse {
            field: "--p".into(),
            message: format!("Schatten order must be at least 1, got {p}"),
        });
    }
    Ok(p)
}

/// Label used when printing the norm order back.
pub fn p_label(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        format!("{p}")
    }
}
