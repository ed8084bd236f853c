//! Exact feasibility for `A x = b, x ≥ 0`.
//!
//! A phase-one simplex over the rationals with Bland's rule. When the system
//! is infeasible the optimal phase-one duals give a Farkas certificate `y`
//! with `yᵀA ≥ 0` and `yᵀb < 0`.

use num_traits::{Signed, Zero};

use crate::boxspace::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    /// A non-negative solution `x` of `A x = b`.
    Feasible(Vec<Rational>),
    /// `y` with `yᵀA ≥ 0` componentwise and `yᵀb < 0`.
    Infeasible(Vec<Rational>),
}

/// Decides `A x = b, x ≥ 0` for an `m × k` matrix given by its columns.
///
/// Every returned vector is checked against the input before it is handed
/// back; a failed check is a bug and panics.
pub fn feasibility(columns: &[Vec<Rational>], rhs: &[Rational]) -> Feasibility {
    let m = rhs.len();
    let k = columns.len();
    assert!(columns.iter().all(|c| c.len() == m), "column height mismatch");

    // Row-sign normalization so that the right-hand side is non-negative.
    let flip: Vec<bool> = rhs.iter().map(|b| b.is_negative()).collect();
    let width = k + m;
    let mut tableau: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row = Vec::with_capacity(width + 1);
            for col in columns {
                row.push(if flip[i] { -&col[i] } else { col[i].clone() });
            }
            for j in 0..m {
                row.push(if i == j { Rational::from_integer(1.into()) } else { Rational::zero() });
            }
            row.push(rhs[i].abs());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (k..k + m).collect();

    // Reduced costs of the phase-one objective (sum of artificials), plus
    // the negated objective value in the last slot.
    let mut cost: Vec<Rational> = vec![Rational::zero(); width + 1];
    for row in &tableau {
        for j in 0..k {
            cost[j] -= &row[j];
        }
        cost[width] -= &row[width];
    }

    while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in tableau.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[width] / &row[enter];
            let better = match &leave {
                None => true,
                Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // The phase-one objective is bounded below by zero.
        let (pivot_row, _) = leave.expect("phase-one problem cannot be unbounded");
        pivot(&mut tableau, &mut cost, pivot_row, enter);
        basis[pivot_row] = enter;
    }

    if cost[width].is_zero() {
        let mut x = vec![Rational::zero(); k];
        for (i, &var) in basis.iter().enumerate() {
            if var < k {
                x[var] = tableau[i][width].clone();
            }
        }
        check_solution(columns, rhs, &x);
        Feasibility::Feasible(x)
    } else {
        // Duals of the normalized system: y_i = 1 - reduced cost of artificial i.
        // Negating gives the Farkas direction; undo the row flips afterwards.
        let one = Rational::from_integer(1.into());
        let y: Vec<Rational> = (0..m)
            .map(|i| {
                let dual = &one - &cost[k + i];
                let farkas = -dual;
                if flip[i] {
                    -farkas
                } else {
                    farkas
                }
            })
            .collect();
        check_farkas(columns, rhs, &y);
        Feasibility::Infeasible(y)
    }
}

fn pivot(tableau: &mut [Vec<Rational>], cost: &mut [Rational], row: usize, col: usize) {
    let inv = tableau[row][col].recip();
    for x in tableau[row].iter_mut() {
        if !x.is_zero() {
            *x *= &inv;
        }
    }
    let pivot_row = tableau[row].clone();
    let support: Vec<usize> = (0..pivot_row.len())
        .filter(|&j| !pivot_row[j].is_zero())
        .collect();
    let eliminate = |target: &mut [Rational]| {
        if target[col].is_zero() {
            return;
        }
        let factor = target[col].clone();
        for &j in &support {
            let delta = &factor * &pivot_row[j];
            target[j] -= delta;
        }
    };
    for (i, other) in tableau.iter_mut().enumerate() {
        if i != row {
            eliminate(other);
        }
    }
    eliminate(cost);
}

fn check_solution(columns: &[Vec<Rational>], rhs: &[Rational], x: &[Rational]) {
    assert!(x.iter().all(|v| !v.is_negative()), "negative primal value");
    for (i, b) in rhs.iter().enumerate() {
        let lhs: Rational = columns
            .iter()
            .zip(x)
            .filter(|(_, v)| !v.is_zero())
            .map(|(col, v)| &col[i] * v)
            .sum();
        assert_eq!(&lhs, b, "primal solution violates row {i}");
    }
}

fn check_farkas(columns: &[Vec<Rational>], rhs: &[Rational], y: &[Rational]) {
    for (j, col) in columns.iter().enumerate() {
        let v: Rational = col.iter().zip(y).map(|(a, b)| a * b).sum();
        assert!(!v.is_negative(), "Farkas certificate negative on column {j}");
    }
    let v: Rational = rhs.iter().zip(y).map(|(a, b)| a * b).sum();
    assert!(v.is_negative(), "Farkas certificate does not separate the right-hand side");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxspace::{integer, ratio};

    fn cols(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        let k = rows[0].len();
        (0..k)
            .map(|j| rows.iter().map(|r| integer(r[j])).collect())
            .collect()
    }

    fn vec_of(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| integer(x)).collect()
    }

    #[test]
    fn simple_feasible_system() {
        // x + y = 1, x - y = 0  ->  x = y = 1/2
        let a = cols(&[&[1, 1], &[1, -1]]);
        match feasibility(&a, &vec_of(&[1, 0])) {
            Feasibility::Feasible(x) => assert_eq!(x, vec![ratio(1, 2), ratio(1, 2)]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_sign_constraint() {
        // x + y = -1 has no non-negative solution.
        let a = cols(&[&[1, 1]]);
        match feasibility(&a, &vec_of(&[-1])) {
            Feasibility::Infeasible(y) => assert!(y[0].is_positive()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn point_outside_a_segment() {
        // Convex hull of (0,0) and (1,1) with weights summing to one; target (1,0).
        let a = cols(&[&[0, 1], &[0, 1], &[1, 1]]);
        assert!(matches!(
            feasibility(&a, &vec_of(&[1, 0, 1])),
            Feasibility::Infeasible(_)
        ));
        assert!(matches!(
            feasibility(&a, &[ratio(1, 3), ratio(1, 3), integer(1)]),
            Feasibility::Feasible(_)
        ));
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        let a = cols(&[&[1, 1, 0], &[1, 1, 0], &[0, 1, 1]]);
        assert!(matches!(
            feasibility(&a, &vec_of(&[2, 2, 1])),
            Feasibility::Feasible(_)
        ));
        assert!(matches!(
            feasibility(&a, &vec_of(&[2, 3, 1])),
            Feasibility::Infeasible(_)
        ));
    }

    #[test]
    fn zero_system_is_feasible() {
        let a = cols(&[&[0, 0]]);
        assert_eq!(
            feasibility(&a, &vec_of(&[0])),
            Feasibility::Feasible(vec_of(&[0, 0]))
        );
    }
}
