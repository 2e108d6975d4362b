//! Dense exact linear algebra over `Q`, used by the brute-force oracle.

use num_traits::{One, Zero};

use crate::poly::Rat;

/// Reduce `rows` (each of length `cols`) to reduced row echelon form in
/// place, dropping zero rows. Returns the pivot column of each row.
pub fn rref(rows: &mut Vec<Vec<Rat>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rat::one() / &rows[r][c];
        for v in rows[r].iter_mut().skip(c) {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = rows[r].clone();
        let nz: Vec<usize> = (c..cols).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                let d = &f * &pivot_row[j];
                row[j] -= d;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// A basis of `{z : A z = 0}`.
pub fn nullspace(mut rows: Vec<Vec<Rat>>, cols: usize) -> Vec<Vec<Rat>> {
    let pivots = rref(&mut rows, cols);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut z = vec![Rat::zero(); cols];
        z[free] = Rat::one();
        for (row, &p) in rows.iter().zip(&pivots) {
            if !row[free].is_zero() {
                z[p] = -row[free].clone();
            }
        }
        basis.push(z);
    }
    basis
}

/// Some solution of `A z = b`, if one exists.
pub fn solve(rows: Vec<Vec<Rat>>, b: Vec<Rat>, cols: usize) -> Option<Vec<Rat>> {
    let mut aug: Vec<Vec<Rat>> = rows
        .into_iter()
        .zip(b)
        .map(|(mut r, v)| {
            r.push(v);
            r
        })
        .collect();
    let pivots = rref(&mut aug, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut z = vec![Rat::zero(); cols];
    for (row, &p) in aug.iter().zip(&pivots) {
        z[p] = row[cols].clone();
    }
    Some(z)
}
