//! JSON matrix file format: `{ "dim": n, "re": [[...]], "im": [[...]] }`, row-major.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&ComplexMatrix> for MatrixFile {
    fn from(m: &ComplexMatrix) -> Self {
        let rows = m.to_rows();
        Self {
            dim: m.dim(),
            re: rows.iter().map(|r| r.iter().map(|z| z.re).collect()).collect(),
            im: rows.iter().map(|r| r.iter().map(|z| z.im).collect()).collect(),
        }
    }
}

impl TryFrom<&MatrixFile> for ComplexMatrix {
    type Error = Error;
    fn try_from(f: &MatrixFile) -> Result<Self> {
        let n = f.dim;
        if f.re.len() != n || f.im.len() != n {
            return Err(Error::NotSquare {
                expected: n * n,
                got: f.re.len().min(f.im.len()) * n,
            });
        }
        let mut data = Vec::with_capacity(n * n);
        for (re_row, im_row) in f.re.iter().zip(&f.im) {
            if re_row.len() != n || im_row.len() != n {
                return Err(Error::NotSquare {
                    expected: n * n,
                    got: re_row.len().min(im_row.len()) * n,
                });
            }
            data.extend(re_row.iter().zip(im_row).map(|(&r, &i)| Complex64::new(r, i)));
        }
        ComplexMatrix::from_vec(n, data)
    }
}

impl MatrixFile {
    pub fn to_hermitian(&self, tol: &Tolerances) -> Result<HermitianMatrix> {
        HermitianMatrix::new(ComplexMatrix::try_from(self)?, tol)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}
