//! Row-major real matrices and the unit-cube sample matrix.

use std::io::{Read, Write};
use std::ops::Deref;

use crate::{Error, Result};

/// Dense row-major matrix of `f64`; rows are runs, columns are inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Builds a matrix from row vectors; every row must have the same length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::Shape {
                    expected: cols,
                    actual: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Column-binds equal-length columns.
    pub fn from_columns<C: AsRef<[f64]>>(columns: &[C]) -> Result<Self> {
        let rows = columns.first().map_or(0, |c| c.as_ref().len());
        let cols = columns.len();
        let mut data = vec![0.0; rows * cols];
        for (k, column) in columns.iter().enumerate() {
            let column = column.as_ref();
            if column.len() != rows {
                return Err(Error::Shape {
                    expected: rows,
                    actual: column.len(),
                });
            }
            for (i, &v) in column.iter().enumerate() {
                data[i * cols + k] = v;
            }
        }
        Ok(Matrix { rows, cols, data })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.cols + col] = value;
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn row_mut(&mut self, row: usize) -> &mut [f64] {
        &mut self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, col)).collect()
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        // chunks_exact(0) panics, and a zero-column matrix has no meaningful rows
        self.data.chunks_exact(self.cols.max(1)).take(self.rows)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// Fails with a diagnostic naming the first row (1-based) holding a
    /// value outside the closed unit interval or a non-finite value.
    pub fn check_closed_unit(&self) -> Result<()> {
        for (i, row) in self.iter_rows().enumerate() {
            if let Some((k, v)) = row
                .iter()
                .enumerate()
                .find(|(_, v)| !(0.0..=1.0).contains(*v))
            {
                return Err(Error::Domain(format!(
                    "row {} column {} holds {v}, outside [0, 1]",
                    i + 1,
                    k + 1
                )));
            }
        }
        Ok(())
    }

    /// Reads a headerless CSV of decimal floats. A first line that does not
    /// parse as numbers is treated as a header and skipped.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(reader);
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            if record.iter().all(|f| f.is_empty()) {
                continue;
            }
            let parsed: std::result::Result<Vec<f64>, _> =
                record.iter().map(|f| f.parse::<f64>()).collect();
            match parsed {
                Ok(row) => rows.push(row),
                Err(_) if line == 0 => continue,
                Err(e) => {
                    return Err(Error::Domain(format!(
                        "row {}: cannot parse number ({e})",
                        line + 1
                    )))
                }
            }
        }
        Matrix::from_rows(&rows)
    }

    /// Writes the matrix as headerless CSV, one run per line.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(writer);
        for row in self.iter_rows() {
            wtr.write_record(row.iter().map(|v| v.to_string()))?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// A matrix with at least one row and column whose entries all lie in `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix(Matrix);

impl SampleMatrix {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if matrix.rows() == 0 || matrix.cols() == 0 {
            return Err(Error::Domain(format!(
                "sample matrix must be non-empty, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if let Some(pos) = matrix.as_slice().iter().position(|v| !(0.0..1.0).contains(v)) {
            return Err(Error::Domain(format!(
                "row {} column {} is outside [0, 1)",
                pos / matrix.cols() + 1,
                pos % matrix.cols() + 1
            )));
        }
        Ok(SampleMatrix(matrix))
    }

    /// Skips validation; callers guarantee the invariant.
    pub(crate) fn new_unchecked(matrix: Matrix) -> Self {
        debug_assert!(matrix.as_slice().iter().all(|v| (0.0..1.0).contains(v)));
        SampleMatrix(matrix)
    }

    pub fn into_inner(self) -> Matrix {
        self.0
    }
}

impl Deref for SampleMatrix {
    type Target = Matrix;

    fn deref(&self) -> &Matrix {
        &self.0
    }
}

impl AsRef<Matrix> for SampleMatrix {
    fn as_ref(&self) -> &Matrix {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_and_rows_agree() {
        let m = Matrix::from_columns(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(m, Matrix::from_rows(&[[1.0, 3.0], [2.0, 4.0]]).unwrap());
        assert_eq!(m.column(1), vec![3.0, 4.0]);
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = Matrix::from_rows(&[vec![0.1, 0.2], vec![0.3]]).unwrap_err();
        assert!(matches!(err, Error::Shape { .. }));
    }

    #[test]
    fn sample_matrix_rejects_one() {
        let m = Matrix::from_rows(&[[0.2, 0.4], [0.5, 1.0]]).unwrap();
        let err = SampleMatrix::new(m).unwrap_err();
        assert!(err.to_string().contains("row 2 column 2"), "{err}");
    }

    #[test]
    fn closed_unit_check_names_row() {
        let m = Matrix::from_rows(&[[0.2], [1.0], [1.5]]).unwrap();
        let err = m.check_closed_unit().unwrap_err();
        assert!(err.to_string().contains("row 3"), "{err}");
    }

    #[test]
    fn csv_skips_header_and_reads_values() {
        let text = "a,b\n0.25,0.5\n0.75,0.125\n";
        let m = Matrix::read_csv(text.as_bytes()).unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m.get(1, 1), 0.125);
        let mut out = Vec::new();
        m.write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "0.25,0.5\n0.75,0.125\n");
    }
}
