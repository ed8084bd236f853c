//! Non-signaling checks, zero sets and extremality of non-signaling boxes.

use std::fmt;

use num_traits::Zero;

use crate::boxspace::{BinaryVector, BoxTable, Parties, Rational};
use crate::error::{Error, Result};
use crate::linalg;

/// A place where an observer's setting choice is visible to the others.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignalingWitness {
    /// The observer (1-based) whose setting change alters the marginal.
    pub observer: usize,
    /// Settings of everyone, with the signaling observer at 0.
    pub setting: BinaryVector,
    /// Outcomes of the other observers (the signaling observer's slot is 0),
    /// when the witness concerns a specific outcome context.
    pub outcome: Option<BinaryVector>,
    pub detail: String,
}

impl fmt::Display for SignalingWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.detail)
    }
}

/// Scans a dense `(s << n) | a` table for signaling, observer by observer.
fn signaling_scan(parties: Parties, values: &[Rational], stop_at_first: bool) -> Vec<SignalingWitness> {
    let n = parties.get();
    let words = parties.words() as u32;
    let at = |s: u32, a: u32| &values[((s as usize) << n) | a as usize];
    let mut out = Vec::new();
    for k in 1..=n {
        let bit = 1u32 << (k - 1);
        for t in (0..words).filter(|t| t & bit == 0) {
            for b in (0..words).filter(|b| b & bit == 0) {
                let unset = at(t, b) + at(t, b | bit);
                let set = at(t | bit, b) + at(t | bit, b | bit);
                if unset != set {
                    let setting = BinaryVector::from_raw(n, t);
                    let outcome = BinaryVector::from_raw(n, b);
                    out.push(SignalingWitness {
                        observer: k,
                        setting,
                        outcome: Some(outcome),
                        detail: format!(
                            "observer {k} signals: summing out its outcome at settings {setting} \
                             and outcomes {outcome} gives {unset} for setting 0 but {set} for setting 1"
                        ),
                    });
                    if stop_at_first {
                        return out;
                    }
                }
            }
        }
    }
    out
}

pub(crate) fn first_signaling(parties: Parties, values: &[Rational]) -> Option<SignalingWitness> {
    signaling_scan(parties, values, true).pop()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonSignalingReport {
    /// Every violated constraint, ordered by observer then context.
    pub violations: Vec<SignalingWitness>,
}

impl NonSignalingReport {
    pub fn is_nonsignaling(&self) -> bool {
        self.violations.is_empty()
    }

    /// Observers that signal, ascending and without repeats.
    pub fn signaling_observers(&self) -> Vec<usize> {
        let mut ks: Vec<usize> = self.violations.iter().map(|w| w.observer).collect();
        ks.dedup();
        ks
    }
}

/// Checks every `(observer, context)` pair exactly; works on arbitrary tables.
pub fn is_nonsignaling(p: &BoxTable) -> NonSignalingReport {
    NonSignalingReport {
        violations: signaling_scan(p.parties(), p.raw(), false),
    }
}

/// Events `(t, b)` with `P(b|t) = 0` exactly, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroSet(pub Vec<(BinaryVector, BinaryVector)>);

impl ZeroSet {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(BinaryVector, BinaryVector)> {
        self.0.iter()
    }
}

pub fn zeros(p: &BoxTable) -> ZeroSet {
    ZeroSet(
        p.entries()
            .filter(|(_, _, x)| x.is_zero())
            .map(|(t, b, _)| (t, b))
            .collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalityReport {
    pub extremal: bool,
    pub zero_count: usize,
    /// Rank contributed by the zero constraints on top of the
    /// non-signaling and normalization constraints.
    pub zero_rank: usize,
    /// Dimension of the affine space cut out by non-signaling and
    /// normalization alone (`3^n - 1`).
    pub chart_dimension: usize,
    /// Dimension of the solution set once the zeros are imposed; 0 iff extremal.
    pub defect: usize,
}

fn unit_row(len: usize, entries: &[(usize, i64)]) -> Vec<Rational> {
    let mut row = vec![Rational::zero(); len];
    for &(i, x) in entries {
        row[i] += Rational::from_integer(x.into());
    }
    row
}

/// Rows of the homogeneous part of `{Q non-signaling, Q normalized}`.
fn chart_constraints(parties: Parties) -> Vec<Vec<Rational>> {
    let n = parties.get();
    let words = parties.words();
    let len = parties.events();
    let idx = |s: usize, a: usize| (s << n) | a;
    let mut rows = Vec::new();
    for k in 0..n {
        let bit = 1usize << k;
        for t in (0..words).filter(|t| t & bit == 0) {
            for b in (0..words).filter(|b| b & bit == 0) {
                rows.push(unit_row(
                    len,
                    &[
                        (idx(t, b), 1),
                        (idx(t, b | bit), 1),
                        (idx(t | bit, b), -1),
                        (idx(t | bit, b | bit), -1),
                    ],
                ));
            }
        }
    }
    for t in 0..words {
        let entries: Vec<(usize, i64)> = (0..words).map(|b| (idx(t, b), 1)).collect();
        rows.push(unit_row(len, &entries));
    }
    rows
}

/// A non-signaling box is extremal iff its zeros, together with the
/// non-signaling and normalization constraints, admit no other solution.
pub fn is_extremal(p: &BoxTable) -> Result<ExtremalityReport> {
    if let Some(w) = first_signaling(p.parties(), p.raw()) {
        return Err(Error::Signaling(w));
    }
    let parties = p.parties();
    let n = parties.get();
    let len = parties.events();
    let chart = chart_constraints(parties);
    let chart_rank = linalg::rank(chart.clone());

    let zero_set = zeros(p);
    let mut rows = chart;
    for (t, b) in zero_set.iter() {
        rows.push(unit_row(len, &[(((t.bits() as usize) << n) | b.bits() as usize, 1)]));
    }
    let total_rank = linalg::rank(rows);
    let defect = len - total_rank;
    Ok(ExtremalityReport {
        extremal: defect == 0,
        zero_count: zero_set.len(),
        zero_rank: total_rank - chart_rank,
        chart_dimension: len - chart_rank,
        defect,
    })
}

/// Dimension of the non-signaling affine chart, by direct rank computation.
pub fn chart_dimension(parties: Parties) -> usize {
    parties.events() - linalg::rank(chart_constraints(parties))
}

/// `true` when every entry is non-negative, every setting is normalized and
/// no observer signals.
pub fn is_valid_nonsignaling_box(p: &BoxTable) -> bool {
    p.validate().is_ok() && first_signaling(p.parties(), p.raw()).is_none()
}
