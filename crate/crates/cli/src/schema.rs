//! JSON file schema.
//!
//! Top-level object: `"dims" {"dA", "dB"}`, optional `"state"` (row-major
//! complex matrix as rows of `[re, im]` pairs), optional `"measurements"`
//! and `"assemblage"` (`{"n_x", "n_a", "elements": [[matrix, ...], ...]}`,
//! setting-major). Complex entries are pairs rather than strings so parsing
//! stays unambiguous, and writing finite doubles round-trips bit-exactly.

use serde::{Deserialize, Serialize};
use steerlab_core::linalg::{Complex64, ComplexMatrix};
use steerlab_core::{BipartiteState, MeasurementAssemblage, StateAssemblage};

use crate::error::CliError;

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Dims {
    #[serde(rename = "dA")]
    pub d_a: usize,
    #[serde(rename = "dB")]
    pub d_b: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilySection {
    pub n_x: usize,
    pub n_a: usize,
    /// Setting-major: `elements[x][a]` is one matrix.
    pub elements: Vec<Vec<JsonMatrix>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub dims: Dims,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<JsonMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measurements: Option<FamilySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assemblage: Option<FamilySection>,
}

pub fn matrix_to_json(m: &ComplexMatrix) -> JsonMatrix {
    (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| [m.get(i, j).re, m.get(i, j).im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &JsonMatrix, field: &str) -> Result<ComplexMatrix, CliError> {
    let dim = rows.len();
    if dim == 0 {
        return Err(CliError::Parse {
            field: field.into(),
            message: "matrix has no rows".into(),
        });
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(CliError::Parse {
                field: field.into(),
                message: format!(
                    "matrix must be square: {dim} rows but row {i} has {} columns",
                    row.len()
                ),
            });
        }
        for (j, entry) in row.iter().enumerate() {
            if !entry[0].is_finite() || !entry[1].is_finite() {
                return Err(CliError::Parse {
                    field: field.into(),
                    message: format!("non-finite entry at row {i}, column {j}"),
                });
            }
        }
    }
    Ok(ComplexMatrix::from_fn(dim, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

fn family_from_json(
    section: &FamilySection,
    dim: usize,
    field: &str,
) -> Result<Vec<ComplexMatrix>, CliError> {
    if section.elements.len() != section.n_x {
        return Err(CliError::Parse {
            field: format!("{field}.elements"),
            message: format!(
                "expected {} settings, found {}",
                section.n_x,
                section.elements.len()
            ),
        });
    }
    let mut out = Vec::with_capacity(section.n_x * section.n_a);
    for (x, per_setting) in section.elements.iter().enumerate() {
        if per_setting.len() != section.n_a {
            return Err(CliError::Parse {
                field: format!("{field}.elements[{x}]"),
                message: format!(
                    "expected {} outcomes, found {}",
                    section.n_a,
                    per_setting.len()
                ),
            });
        }
        for (a, rows) in per_setting.iter().enumerate() {
            let m = matrix_from_json(rows, &format!("{field}.elements[{x}][{a}]"))?;
            if m.dim() != dim {
                return Err(CliError::Parse {
                    field: format!("{field}.elements[{x}][{a}]"),
                    message: format!("expected dimension {dim}, found {}", m.dim()),
                });
            }
            out.push(m);
        }
    }
    Ok(out)
}

impl ScenarioFile {
    pub fn state_matrix(&self) -> Result<Option<BipartiteState>, CliError> {
        match &self.state {
            None => Ok(None),
            Some(rows) => {
                let m = matrix_from_json(rows, "state")?;
                let state = BipartiteState::new(self.dims.d_a, self.dims.d_b, m).map_err(|e| {
                    CliError::Parse {
                        field: "state".into(),
                        message: e.to_string(),
                    }
                })?;
                Ok(Some(state))
            }
        }
    }

    pub fn measurement_assemblage(&self) -> Result<Option<MeasurementAssemblage>, CliError> {
        match &self.measurements {
            None => Ok(None),
            Some(section) => {
                let elements = family_from_json(section, self.dims.d_a, "measurements")?;
                let m =
                    MeasurementAssemblage::new(self.dims.d_a, section.n_x, section.n_a, elements)
                        .map_err(|e| CliError::Parse {
                            field: "measurements".into(),
                            message: e.to_string(),
                        })?;
                Ok(Some(m))
            }
        }
    }

    pub fn state_assemblage(&self) -> Result<Option<StateAssemblage>, CliError> {
        match &self.assemblage {
            None => Ok(None),
            Some(section) => {
                let elements = family_from_json(section, self.dims.d_b, "assemblage")?;
                let s = StateAssemblage::new(self.dims.d_b, section.n_x, section.n_a, elements)
                    .map_err(|e| CliError::Parse {
                        field: "assemblage".into(),
                        message: e.to_string(),
                    })?;
                Ok(Some(s))
            }
        }
    }
}

pub fn family_to_json(n_x: usize, n_a: usize, elements: &[ComplexMatrix]) -> FamilySection {
    FamilySection {
        n_x,
        n_a,
        elements: (0..n_x)
            .map(|x| {
                (0..n_a)
                    .map(|a| matrix_to_json(&elements[x * n_a + a]))
                    .collect()
            })
            .collect(),
    }
}

pub fn load(path: &str) -> Result<ScenarioFile, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })?;
    serde_json::from_slice(&bytes).map_err(|e| CliError::Parse {
        field: path.into(),
        message: e.to_string(),
    })
}

pub fn save(path: &str, file: &ScenarioFile) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(file).expect("schema types always serialize");
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_roundtrip_is_bit_exact() {
        let m = ComplexMatrix::from_fn(3, |i, j| {
            Complex64::new(1.0 / (i as f64 + 1.5), -(j as f64) / 7.0)
        });
        let json = serde_json::to_string(&matrix_to_json(&m)).unwrap();
        let back: JsonMatrix = serde_json::from_str(&json).unwrap();
        let m2 = matrix_from_json(&back, "test").unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.get(i, j).re.to_bits(), m2.get(i, j).re.to_bits());
                assert_eq!(m.get(i, j).im.to_bits(), m2.get(i, j).im.to_bits());
            }
        }
    }

    #[test]
    fn non_square_matrix_is_a_parse_error() {
        let rows: JsonMatrix = vec![vec![[1.0, 0.0], [0.0, 0.0]], vec![[0.0, 0.0]]];
        let err = matrix_from_json(&rows, "state").unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("row 1"));
    }
}
