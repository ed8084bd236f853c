//! Reference computations written from the definitions, sharing no code
//! with the library beyond the table accessors.

use hardybox::prelude::*;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Rank modulo a 61-bit prime. A lower bound for the rational rank that is
/// equal to it unless the prime divides some minor.
pub fn rank_mod_p(rows: &[Vec<i64>]) -> usize {
    const P: u128 = (1 << 61) - 1;
    let reduce = |x: i64| -> u128 { (x as i128).rem_euclid(P as i128) as u128 };
    let pow = |mut b: u128, mut e: u128| {
        let mut acc = 1u128;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % P;
            }
            b = b * b % P;
            e >>= 1;
        }
        acc
    };
    let mut m: Vec<Vec<u128>> = rows.iter().map(|r| r.iter().map(|&x| reduce(x)).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = pow(m[rank][col], P - 2);
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col] * inv % P;
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x = (*x + P - f * p % P) % P;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Deterministic box as an integer row, straight from the response rule:
/// observer `k` answers `a_k` at setting 0 and `b_k` at setting 1.
pub fn vertex_row(parties: Parties, d: &DeterministicStrategy) -> Vec<i64> {
    let mut row = Vec::new();
    for s in BinaryVector::all(parties) {
        let response: Vec<u8> = (1..=parties.get())
            .map(|k| {
                if s.component(k).unwrap() == 0 {
                    d.a().component(k).unwrap()
                } else {
                    d.b().component(k).unwrap()
                }
            })
            .collect();
        let response = BinaryVector::from_components(&response).unwrap();
        for a in BinaryVector::all(parties) {
            row.push(i64::from(a == response));
        }
    }
    row
}

/// `⟨B|P⟩` by a plain double loop.
pub fn pairing(b: &BellFunctional, p: &BoxTable) -> Rational {
    b.entries()
        .zip(p.entries())
        .map(|((_, _, x), (_, _, y))| x * y)
        .sum()
}

/// Sum of all coefficients, and whether every observer's coefficient
/// marginals agree across its two settings.
pub fn standard_form_conditions(b: &BellFunctional) -> (Rational, bool) {
    let parties = b.parties();
    let n = parties.get();
    let total: Rational = b.entries().map(|(_, _, x)| x.clone()).sum();
    let mut independent = true;
    for k in 1..=n {
        let bit = BinaryVector::unit(parties, k).unwrap();
        for s in BinaryVector::all(parties).filter(|s| s.component(k).unwrap() == 0) {
            for a in BinaryVector::all(parties).filter(|a| a.component(k).unwrap() == 0) {
                let sum_at = |s: BinaryVector| -> Rational {
                    b.get(s, a).unwrap() + b.get(s, a.add(bit).unwrap()).unwrap()
                };
                if sum_at(s) != sum_at(s.add(bit).unwrap()) {
                    independent = false;
                }
            }
        }
    }
    (total, independent)
}

/// `A^c_s` by direct summation.
pub fn correlation(p: &BoxTable, c: BinaryVector, s: BinaryVector) -> Rational {
    BinaryVector::all(p.parties())
        .map(|a| {
            let x = p.get(s, a).unwrap().clone();
            if a.dot_parity(c).unwrap() == 1 {
                -x
            } else {
                x
            }
        })
        .sum()
}

/// Random convex mixture of `count` deterministic boxes with weights `k/Σk`.
pub fn random_local_box(rng: &mut ChaCha8Rng, parties: Parties, count: usize) -> BoxTable {
    let vertices = enumerate_vertices(parties);
    let picks: Vec<(Rational, BoxTable)> = (0..count)
        .map(|_| {
            let d = vertices[rng.gen_range(0..vertices.len())];
            (integer(rng.gen_range(1..=9)), deterministic_box(&d))
        })
        .collect();
    let total: Rational = picks.iter().map(|(w, _)| w.clone()).sum();
    let weights: Vec<Rational> = picks.iter().map(|(w, _)| w / &total).collect();
    BoxTable::combination(parties, weights.iter().zip(picks.iter().map(|(_, b)| b))).unwrap()
}

/// Random integer functional shifted by a constant so that its minimum over
/// the deterministic vertices is exactly zero.
pub fn random_inequality(rng: &mut ChaCha8Rng, parties: Parties) -> BellFunctional {
    loop {
        let density = rng.gen_range(0.2..1.0);
        let raw = BellFunctional::from_fn(parties, |_, _| {
            if rng.gen_bool(density) {
                integer(rng.gen_range(-6..=6))
            } else {
                Rational::zero()
            }
        });
        let min = enumerate_vertices(parties)
            .iter()
            .map(|d| pairing(&raw, &deterministic_box(d)))
            .min()
            .unwrap();
        let shift = -min / integer(parties.words() as i64);
        let shifted = BellFunctional::from_fn(parties, |s, a| raw.get(s, a).unwrap() + &shift);
        let theta: Rational = shifted.entries().map(|(_, _, x)| x.clone()).sum();
        if !theta.is_zero() {
            return shifted;
        }
    }
}

/// Product of a box on `m` observers with a box on the rest. Target
/// observer `k` plays slot `order[k]` of the concatenation.
pub fn product(left: &BoxTable, right: &BoxTable, order: &[usize]) -> BoxTable {
    let (m, r) = (left.n(), right.n());
    let parties = Parties::new(m + r).unwrap();
    let split = |v: BinaryVector| {
        let c: Vec<u8> = v.components().collect();
        let src: Vec<u8> = {
            let mut out = vec![0; m + r];
            for (k, &slot) in order.iter().enumerate() {
                out[slot] = c[k];
            }
            out
        };
        (
            BinaryVector::from_components(&src[..m]).unwrap(),
            BinaryVector::from_components(&src[m..]).unwrap(),
        )
    };
    BoxTable::from_fn(parties, |s, a| {
        let (s1, s2) = split(s);
        let (a1, a2) = split(a);
        left.get(s1, a1).unwrap() * right.get(s2, a2).unwrap()
    })
}

/// One-observer box answering `out0` at setting 0 and `out1` at setting 1.
pub fn single_deterministic(out0: u8, out1: u8) -> BoxTable {
    let p = Parties::new(1).unwrap();
    BoxTable::from_fn(p, |s, a| {
        let want = if s.bits() == 0 { out0 } else { out1 };
        if a.bits() as u8 == want {
            Rational::one()
        } else {
            Rational::zero()
        }
    })
}
