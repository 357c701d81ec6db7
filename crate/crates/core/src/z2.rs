//! Sparse matrices over Z/2 stored as columns of sorted row indices.

use alloc::vec;
use alloc::vec::Vec;

/// A column: strictly increasing row indices of its non-zero entries.
pub type Column = Vec<u32>;

/// Rank over Z/2 by column reduction on lowest non-zero rows.
pub fn rank(columns: &[Column], row_count: usize) -> usize {
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; row_count];
    let mut reduced: Vec<Column> = Vec::with_capacity(columns.len());
    let mut rank = 0;
    for col in columns {
        let mut col = col.clone();
        while let Some(&low) = col.last() {
            match pivot_of_row[low as usize] {
                Some(j) => col = symmetric_difference(&col, &reduced[j]),
                None => {
                    pivot_of_row[low as usize] = Some(reduced.len());
                    rank += 1;
                    break;
                }
            }
        }
        reduced.push(col);
    }
    rank
}

/// `a + b` over Z/2 for sorted columns.
pub fn symmetric_difference(a: &[u32], b: &[u32]) -> Column {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Columns of `left * right` over Z/2, where `right`'s rows index `left`'s columns.
pub fn multiply(left: &[Column], right: &[Column]) -> Vec<Column> {
    right
        .iter()
        .map(|rcol| {
            let mut acc: Column = Vec::new();
            for &k in rcol {
                acc = symmetric_difference(&acc, &left[k as usize]);
            }
            acc
        })
        .collect()
}
