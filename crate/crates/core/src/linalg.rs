//! Exact sparse nullspace over the rationals.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::numbers::Rational;

pub type SparseRow = BTreeMap<usize, Rational>;

/// Basis of `{x : A x = 0}` for the `ncols`-column matrix whose nonzero rows
/// are `rows`.
///
/// Forward elimination picks, for each column, the shortest remaining row as
/// pivot to limit fill-in; the basis is then read off by back substitution,
/// one vector per free column. Each vector is scaled so its first nonzero
/// entry is 1.
pub fn nullspace(rows: Vec<SparseRow>, ncols: usize) -> Vec<Vec<Rational>> {
    let mut rows: Vec<SparseRow> = rows
        .into_iter()
        .map(|mut r| {
            r.retain(|_, v| !v.is_zero());
            r
        })
        .filter(|r| !r.is_empty())
        .collect();
    for r in &rows {
        if let Some((&c, _)) = r.iter().next_back() {
            assert!(c < ncols, "row entry in column {c} outside 0..{ncols}");
        }
    }

    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
    for (i, r) in rows.iter().enumerate() {
        for &c in r.keys() {
            col_rows[c].insert(i);
        }
    }

    let mut used = vec![false; rows.len()];
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut free = Vec::new();

    for col in 0..ncols {
        let pivot = col_rows[col]
            .iter()
            .copied()
            .filter(|&i| !used[i])
            .min_by_key(|&i| rows[i].len());
        let Some(p) = pivot else {
            free.push(col);
            continue;
        };
        used[p] = true;
        pivots.push((col, p));

        let pivot_row = rows[p].clone();
        let pivot_val = pivot_row[&col].clone();
        let targets: Vec<usize> = col_rows[col]
            .iter()
            .copied()
            .filter(|&i| !used[i])
            .collect();
        for t in targets {
            let factor = &rows[t][&col] / &pivot_val;
            for (&c, v) in &pivot_row {
                let entry = rows[t].entry(c).or_insert_with(Rational::zero);
                *entry -= &factor * v;
                if entry.is_zero() {
                    rows[t].remove(&c);
                    col_rows[c].remove(&t);
                } else {
                    col_rows[c].insert(t);
                }
            }
        }
    }

    free.iter()
        .map(|&fc| {
            let mut x = vec![Rational::zero(); ncols];
            x[fc] = Rational::one();
            for &(c, p) in pivots.iter().rev() {
                let row = &rows[p];
                let mut acc = Rational::zero();
                for (&k, v) in row {
                    if k != c && !x[k].is_zero() {
                        acc += v * &x[k];
                    }
                }
                x[c] = -acc / &row[&c];
            }
            let lead = x.iter().find(|v| !v.is_zero()).cloned().expect("x[fc] = 1");
            x.iter().map(|v| v / &lead).collect()
        })
        .collect()
}
