//! Wire formats shared by every file the CLI reads or writes.
//!
//! Matrices are `{"rows": r, "cols": c, "data": [[re, im], ...]}` in row-major
//! order; tuples add `level`, `entries` and `sa_mask`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{c, ComplexMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixWire {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixWire {
    fn from(m: &ComplexMatrix) -> Self {
        let (rows, cols) = m.shape();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let z = m[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        MatrixWire { rows, cols, data }
    }
}

impl TryFrom<&MatrixWire> for ComplexMatrix {
    type Error = Error;

    fn try_from(w: &MatrixWire) -> Result<Self> {
        if w.data.len() != w.rows * w.cols {
            return Err(Error::Dimension(format!(
                "matrix data has {} entries, expected {} x {} = {}",
                w.data.len(),
                w.rows,
                w.cols,
                w.rows * w.cols
            )));
        }
        if w.data.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
        }
        Ok(ComplexMatrix::from_fn(w.rows, w.cols, |i, j| {
            let [re, im] = w.data[i * w.cols + j];
            c(re, im)
        }))
    }
}

/// Serde adapter for a single `ComplexMatrix` field.
pub mod matrix {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &ComplexMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixWire::from(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<ComplexMatrix, D::Error> {
        let w = MatrixWire::deserialize(d)?;
        ComplexMatrix::try_from(&w).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<ComplexMatrix>`.
pub mod matrices {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(ms: &[ComplexMatrix], s: S) -> std::result::Result<S::Ok, S::Error> {
        let wires: Vec<MatrixWire> = ms.iter().map(MatrixWire::from).collect();
        wires.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<ComplexMatrix>, D::Error> {
        let wires = Vec::<MatrixWire>::deserialize(d)?;
        wires
            .iter()
            .map(ComplexMatrix::try_from)
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)
    }
}
