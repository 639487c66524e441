//! Exact rank over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Rank of an integer matrix over ℚ by Gaussian elimination in exact
/// arithmetic. Rows may be ragged only if they are all the same length.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let Some(width) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|row| {
            assert_eq!(row.len(), width, "ragged matrix");
            row.iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect()
        })
        .collect();

    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let pivot_row = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot_row[col];
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x -= &factor * p;
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}
