//! Exact Gaussian elimination over the rationals.

use num_traits::Zero;

use crate::boxspace::Rational;

/// Rank of the row set. Rows may have different lengths only if they are
/// all empty; otherwise they must share a length.
///
/// Pivots are chosen column by column, preferring the candidate with the
/// smallest denominator (then the smallest numerator) to slow coefficient
/// growth. The arithmetic is exact, so the choice only affects speed.
pub fn rank(rows: Vec<Vec<Rational>>) -> usize {
    let mut rows: Vec<Vec<Rational>> = rows
        .into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let Some(width) = rows.first().map(Vec::len) else {
        return 0;
    };
    assert!(
        rows.iter().all(|r| r.len() == width),
        "rows must have equal length"
    );

    let mut rank = 0;
    for col in 0..width {
        if rank == rows.len() {
            break;
        }
        let pivot = (rank..rows.len())
            .filter(|&i| !rows[i][col].is_zero())
            .min_by(|&i, &j| {
                let (x, y) = (&rows[i][col], &rows[j][col]);
                x.denom()
                    .cmp(y.denom())
                    .then_with(|| x.numer().magnitude().cmp(y.numer().magnitude()))
            });
        let Some(pivot) = pivot else { continue };
        rows.swap(rank, pivot);

        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let support: Vec<usize> = (col..width).filter(|&j| !pivot_row[j].is_zero()).collect();
        let inv = pivot_row[col].recip();
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] * &inv;
            for &j in &support {
                let delta = &factor * &pivot_row[j];
                row[j] -= delta;
            }
            debug_assert!(row[col].is_zero());
        }
        rank += 1;
    }
    rank
}
