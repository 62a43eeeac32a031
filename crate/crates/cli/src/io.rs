//! JSON file formats.
//!
//! Matrices are `{"rows": r, "cols": c, "data": [[re, im], ...]}` in row-major
//! order. Floats are written in shortest round-trip form and parsed with
//! correct rounding, so a written file re-parses to bit-identical values.

use std::fs;
use std::path::Path;

use charmat_core::boundary::{
    derivative_operator, laplacian, BoundaryCondition, GridDiscretization,
};
use charmat_core::family::{OperatorFamily, ParameterGrid};
use charmat_core::ComplexMatrix;
use num_complex::Complex64;
use serde::de::value::MapAccessDeserializer;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMatrixFile {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl RawMatrixFile {
    fn validate(self) -> Result<MatrixFile, String> {
        if self.rows == 0 || self.cols == 0 {
            return Err(format!(
                "dimensions must be positive, got {}x{}",
                self.rows, self.cols
            ));
        }
        let expected = self
            .rows
            .checked_mul(self.cols)
            .ok_or("rows*cols overflows")?;
        if self.data.len() != expected {
            return Err(format!(
                "data has {} entries, expected rows*cols = {}",
                self.data.len(),
                expected
            ));
        }
        Ok(MatrixFile {
            rows: self.rows,
            cols: self.cols,
            data: self.data,
        })
    }
}

/// Validates inside the map visit, so that the parser attaches the line and
/// column of the offending object to the error.
impl<'de> Deserialize<'de> for MatrixFile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct Visit;
        impl<'de> serde::de::Visitor<'de> for Visit {
            type Value = MatrixFile;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a matrix object with rows, cols and data")
            }

            fn visit_map<A: serde::de::MapAccess<'de>>(
                self,
                map: A,
            ) -> Result<MatrixFile, A::Error> {
                RawMatrixFile::deserialize(MapAccessDeserializer::new(map))?
                    .validate()
                    .map_err(serde::de::Error::custom)
            }
        }
        d.deserialize_map(Visit)
    }
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        MatrixFile {
            rows: m.rows(),
            cols: m.cols(),
            data: m.row_major().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_matrix(&self) -> CliResult<ComplexMatrix> {
        let data = self
            .data
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        Ok(ComplexMatrix::from_row_major(self.rows, self.cols, data)?)
    }

    /// Compact JSON with a trailing newline.
    pub fn to_json(&self) -> Vec<u8> {
        let mut bytes = serde_json::to_vec(self).expect("matrix files serialize");
        bytes.push(b'\n');
        bytes
    }
}

/// Named operator generators available in family files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    DirichletDerivative,
    PeriodicDerivative,
    DirichletLaplacian,
    PeriodicLaplacian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub n: usize,
}

impl Generator {
    pub fn build(&self) -> CliResult<ComplexMatrix> {
        let (bc, second_order) = match self.kind {
            GeneratorKind::DirichletDerivative => (BoundaryCondition::Dirichlet, false),
            GeneratorKind::PeriodicDerivative => (BoundaryCondition::Periodic, false),
            GeneratorKind::DirichletLaplacian => (BoundaryCondition::Dirichlet, true),
            GeneratorKind::PeriodicLaplacian => (BoundaryCondition::Periodic, true),
        };
        let g = GridDiscretization::for_condition(bc, self.n)?;
        Ok(if second_order {
            laplacian(&g, bc)?
        } else {
            derivative_operator(&g, bc)?
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum FiberSpec {
    Generator(Generator),
    Matrix(MatrixFile),
}

/// Union of the generator and matrix fields; the variant is chosen by `kind`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFiber {
    kind: Option<GeneratorKind>,
    n: Option<usize>,
    rows: Option<usize>,
    cols: Option<usize>,
    data: Option<Vec<[f64; 2]>>,
}

impl RawFiber {
    fn validate(self) -> Result<FiberSpec, String> {
        match self {
            RawFiber {
                kind: Some(kind),
                n: Some(n),
                rows: None,
                cols: None,
                data: None,
            } => Ok(FiberSpec::Generator(Generator { kind, n })),
            RawFiber {
                kind: None,
                n: None,
                rows: Some(rows),
                cols: Some(cols),
                data: Some(data),
            } => RawMatrixFile { rows, cols, data }
                .validate()
                .map(FiberSpec::Matrix),
            _ => Err("fiber must be {kind, n} or {rows, cols, data}".into()),
        }
    }
}

impl<'de> Deserialize<'de> for FiberSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct Visit;
        impl<'de> serde::de::Visitor<'de> for Visit {
            type Value = FiberSpec;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a generator or matrix object")
            }

            fn visit_map<A: serde::de::MapAccess<'de>>(
                self,
                map: A,
            ) -> Result<FiberSpec, A::Error> {
                RawFiber::deserialize(MapAccessDeserializer::new(map))?
                    .validate()
                    .map_err(serde::de::Error::custom)
            }
        }
        d.deserialize_map(Visit)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub grid: Vec<f64>,
    /// Trapezoidal when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    pub fibers: Vec<FiberSpec>,
}

impl FamilyFile {
    pub fn to_family(&self) -> CliResult<OperatorFamily> {
        let grid = match &self.weights {
            Some(w) => ParameterGrid::new(self.grid.clone(), w.clone())?,
            None => ParameterGrid::trapezoidal(self.grid.clone())?,
        };
        let fibers = self
            .fibers
            .iter()
            .map(|f| match f {
                FiberSpec::Generator(g) => g.build(),
                FiberSpec::Matrix(m) => m.to_matrix(),
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(OperatorFamily::new(grid, fibers)?)
    }
}

/// Reads a file, returning its bytes for digesting alongside the parsed value.
pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<(T, Vec<u8>)> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let value = serde_json::from_slice(&bytes).map_err(|e| CliError::parse(path, e))?;
    Ok((value, bytes))
}

pub fn read_matrix(path: &Path) -> CliResult<(ComplexMatrix, Vec<u8>)> {
    let (file, bytes): (MatrixFile, _) = read_json(path)?;
    Ok((file.to_matrix()?, bytes))
}

/// Lowercase hex SHA-256.
pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
