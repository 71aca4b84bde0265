//! One-nearest-neighbor classification over precomputed distance tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::Label;

/// Row-major `queries x references` distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceTable {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DistanceTable {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidParameter(format!(
                "{} values cannot fill a {rows}x{cols} table",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|r| (0..r).all(|c| (self.get(r, c) - self.get(c, r)).abs() <= tol))
    }

    fn check_shape(&self, rows: usize, cols: usize) -> Result<()> {
        if self.rows != rows || self.cols != cols {
            return Err(Error::TableShape {
                rows: self.rows,
                cols: self.cols,
                expected_rows: rows,
                expected_cols: cols,
            });
        }
        Ok(())
    }
}

/// Index of the smallest entry, lowest index on ties. `skip` is masked out.
fn nearest(row: &[f64], skip: Option<usize>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &d) in row.iter().enumerate() {
        if Some(i) == skip {
            continue;
        }
        match best {
            Some((_, bd)) if d >= bd => {}
            _ => best = Some((i, d)),
        }
    }
    best.map(|(i, _)| i)
}

/// Predicted label for every query row.
pub fn predict_1nn(reference_labels: &[Label], table: &DistanceTable) -> Result<Vec<Label>> {
    if reference_labels.is_empty() {
        return Err(Error::EmptyReferences);
    }
    table.check_shape(table.rows, reference_labels.len())?;
    Ok((0..table.rows)
        .map(|r| reference_labels[nearest(table.row(r), None).expect("non-empty row")])
        .collect())
}

/// Count of misclassified queries.
pub fn count_errors_1nn(
    query_labels: &[Label],
    reference_labels: &[Label],
    table: &DistanceTable,
) -> Result<usize> {
    table.check_shape(query_labels.len(), reference_labels.len())?;
    let predicted = predict_1nn(reference_labels, table)?;
    Ok(predicted
        .iter()
        .zip(query_labels)
        .filter(|(p, q)| p != q)
        .count())
}

/// Error ratio of 1NN classification of the queries against the references.
/// Ties go to the lowest reference index.
pub fn classify_1nn(
    query_labels: &[Label],
    reference_labels: &[Label],
    table: &DistanceTable,
) -> Result<f64> {
    let wrong = count_errors_1nn(query_labels, reference_labels, table)?;
    Ok(ratio(wrong, query_labels.len()))
}

/// Leave-one-out misclassification count; the diagonal is masked, never
/// assumed to be zero.
pub fn count_errors_loo(labels: &[Label], table: &DistanceTable) -> Result<usize> {
    table.check_shape(labels.len(), labels.len())?;
    if labels.len() < 2 {
        return Err(Error::InvalidParameter(
            "leave-one-out needs at least 2 items".into(),
        ));
    }
    Ok((0..labels.len())
        .filter(|&r| {
            let nn = nearest(table.row(r), Some(r)).expect("at least one other item");
            labels[nn] != labels[r]
        })
        .count())
}

/// Leave-one-out 1NN error ratio over a square table.
pub fn loo_error(labels: &[Label], table: &DistanceTable) -> Result<f64> {
    Ok(ratio(count_errors_loo(labels, table)?, labels.len()))
}

fn ratio(wrong: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        wrong as f64 / total as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_reference_forces_label() {
        let t = DistanceTable::new(3, 1, vec![0.5, 9.0, 1.0]).unwrap();
        assert!((classify_1nn(&[0, 1, 1], &[1], &t).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn self_match_is_error_free() {
        let t = DistanceTable::from_fn(3, 3, |r, c| (r as f64 - c as f64).abs());
        assert_eq!(classify_1nn(&[0, 1, 0], &[0, 1, 0], &t).unwrap(), 0.0);
    }

    #[test]
    fn hand_built_three_by_two() {
        // q0 -> r1 (0.2), q1 -> r0 (0.1), q2 tie 0.4/0.4 -> r0
        let t = DistanceTable::new(3, 2, vec![0.9, 0.2, 0.1, 0.3, 0.4, 0.4]).unwrap();
        assert_eq!(predict_1nn(&[7, 8], &t).unwrap(), vec![8, 7, 7]);
        assert!((classify_1nn(&[8, 8, 7], &[7, 8], &t).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn empty_references_rejected() {
        let t = DistanceTable::new(2, 0, vec![]).unwrap();
        assert!(matches!(
            classify_1nn(&[0, 1], &[], &t),
            Err(Error::EmptyReferences)
        ));
        let t = DistanceTable::new(2, 2, vec![0.0; 4]).unwrap();
        assert!(matches!(
            classify_1nn(&[0, 1], &[0, 1, 1], &t),
            Err(Error::TableShape { .. })
        ));
    }

    #[test]
    fn loo_two_items_cross_match() {
        let t = DistanceTable::new(2, 2, vec![0.0, 5.0, 5.0, 0.0]).unwrap();
        assert_eq!(loo_error(&[0, 1], &t).unwrap(), 1.0);
    }

    #[test]
    fn loo_twins() {
        let vals = [0.0f64, 3.0, 7.0];
        let labels = [0, 1, 2, 0, 1, 2];
        let t = DistanceTable::from_fn(6, 6, |r, c| (vals[r % 3] - vals[c % 3]).abs());
        assert_eq!(loo_error(&labels, &t).unwrap(), 0.0);
    }

    #[test]
    fn loo_masks_nonzero_diagonal() {
        // diagonal smallest everywhere; must still be skipped
        let t = DistanceTable::new(
            4,
            4,
            vec![
                0.0, 0.5, 0.2, 0.9, //
                0.5, 0.0, 0.6, 0.1, //
                0.2, 0.6, 0.0, 0.3, //
                0.9, 0.1, 0.3, 0.0,
            ],
        )
        .unwrap();
        // nn: 0->2, 1->3, 2->0, 3->1
        assert_eq!(loo_error(&[0, 1, 0, 0], &t).unwrap(), 0.5);
        let shifted = DistanceTable::from_fn(4, 4, |r, c| if r == c { -1.0 } else { t.get(r, c) });
        assert_eq!(loo_error(&[0, 1, 0, 0], &shifted).unwrap(), 0.5);
    }
}
