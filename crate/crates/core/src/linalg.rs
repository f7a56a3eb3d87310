//! Dense Gaussian elimination over `F_q`.

use crate::gf::{Elem, Field};

/// Reduces `rows` in place to reduced row echelon form with leftmost pivots and
/// drops zero rows. Returns the pivot column of each remaining row.
pub fn rref(field: &Field, rows: &mut Vec<Vec<Elem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..ncols {
        let Some(found) = (top..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(top, found);
        let inv = field.recip(rows[top][col]).expect("nonzero pivot");
        for v in rows[top].iter_mut() {
            *v = field.mul(*v, inv);
        }
        let pivot_row = rows[top].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == top || row[col].is_zero() {
                continue;
            }
            let factor = row[col];
            for (v, &p) in row.iter_mut().zip(&pivot_row) {
                *v = field.sub(*v, field.mul(factor, p));
            }
        }
        pivots.push(col);
        top += 1;
        if top == rows.len() {
            break;
        }
    }
    rows.truncate(top);
    pivots
}

pub fn rank(field: &Field, rows: &[Vec<Elem>]) -> usize {
    let mut m = rows.to_vec();
    rref(field, &mut m).len()
}

/// Rank of the matrix whose columns are `cols`.
pub fn column_rank(field: &Field, cols: &[&[Elem]]) -> usize {
    let rows: Vec<Vec<Elem>> = cols.iter().map(|c| c.to_vec()).collect();
    rank(field, &rows)
}
