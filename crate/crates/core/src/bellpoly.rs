//! Deterministic local vertices, exact span computations, tightness and
//! membership in the Bell polytope.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::boxspace::{inverse_power_of_two, BinaryVector, BoxTable, Parties, Rational};
use crate::error::{Error, Result};
use crate::functional::{self, BellFunctional};
use crate::linalg;
use crate::lp::{self, Feasibility};
use crate::nsbox;

/// A local deterministic strategy: every observer answers `a_k` to setting 0
/// and `b_k` to setting 1. Written `a;b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DeterministicStrategy {
    a: BinaryVector,
    b: BinaryVector,
}

impl DeterministicStrategy {
    pub fn new(a: BinaryVector, b: BinaryVector) -> Result<Self> {
        if a.n() != b.n() {
            return Err(Error::DimensionMismatch {
                left: a.n(),
                right: b.n(),
            });
        }
        Ok(DeterministicStrategy { a, b })
    }

    /// Outcomes under setting 0.
    pub fn a(&self) -> BinaryVector {
        self.a
    }

    /// Outcomes under setting 1.
    pub fn b(&self) -> BinaryVector {
        self.b
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    /// The outcome vector this strategy produces under setting word `s`.
    pub(crate) fn response(&self, s: u32) -> u32 {
        (self.a.bits() & !s) | (self.b.bits() & s)
    }
}

impl fmt::Display for DeterministicStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", self.a, self.b)
    }
}

impl std::str::FromStr for DeterministicStrategy {
    type Err = Error;

    /// Parses `a;b`, both halves written with observer 1 leftmost.
    fn from_str(text: &str) -> Result<Self> {
        let (a, b) = text
            .split_once(';')
            .ok_or_else(|| Error::MalformedBitstring(text.to_string()))?;
        DeterministicStrategy::new(a.parse()?, b.parse()?)
    }
}

/// The 0/1 box of a deterministic strategy.
pub fn deterministic_box(d: &DeterministicStrategy) -> BoxTable {
    let parties = Parties::with_limit(d.n(), crate::boxspace::MAX_PARTIES)
        .expect("binary vectors never exceed the hard party cap");
    BoxTable::from_fn(parties, |s, x| {
        if x.bits() == d.response(s.bits()) {
            Rational::one()
        } else {
            Rational::zero()
        }
    })
}

/// All `4^n` strategies in lexicographic `(a, b)` order.
pub fn enumerate_vertices(parties: Parties) -> Vec<DeterministicStrategy> {
    BinaryVector::all(parties)
        .flat_map(|a| BinaryVector::all(parties).map(move |b| DeterministicStrategy { a, b }))
        .collect()
}

/// Rank over the rationals of the given boxes as vectors in box space.
pub fn span_dimension(boxes: &[BoxTable]) -> Result<usize> {
    let Some(first) = boxes.first() else {
        return Ok(0);
    };
    if let Some(other) = boxes.iter().find(|b| b.n() != first.n()) {
        return Err(Error::DimensionMismatch {
            left: first.n(),
            right: other.n(),
        });
    }
    Ok(linalg::rank(boxes.iter().map(|b| b.raw().to_vec()).collect()))
}

/// `⟨B|a;b⟩ = Σ_s B(response(s), s)`.
pub fn vertex_value(functional: &BellFunctional, d: &DeterministicStrategy) -> Result<Rational> {
    if functional.n() != d.n() {
        return Err(Error::DimensionMismatch {
            left: functional.n(),
            right: d.n(),
        });
    }
    let n = d.n();
    Ok((0..1u32 << n)
        .map(|s| &functional.raw()[((s as usize) << n) | d.response(s) as usize])
        .sum())
}

/// Strategies on which the functional vanishes exactly.
pub fn saturating_vertices(functional: &BellFunctional) -> Vec<DeterministicStrategy> {
    enumerate_vertices(functional.parties())
        .into_iter()
        .filter(|d| vertex_value(functional, d).is_ok_and(|v| v.is_zero()))
        .collect()
}

/// Fails with the first strategy (in lexicographic order) on which the
/// functional is negative.
pub fn check_inequality(functional: &BellFunctional) -> Result<()> {
    for d in enumerate_vertices(functional.parties()) {
        let value = vertex_value(functional, &d)?;
        if value.is_negative() {
            return Err(Error::NotAnInequality { strategy: d, value });
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightnessReport {
    pub tight: bool,
    /// Rank of the saturating vertex boxes.
    pub rank: usize,
    /// `3^n - 1`.
    pub required: usize,
    pub saturating: Vec<DeterministicStrategy>,
}

/// A valid inequality is tight iff its saturating vertices span a space of
/// dimension `3^n - 1`.
pub fn is_tight(functional: &BellFunctional) -> Result<TightnessReport> {
    check_inequality(functional)?;
    let saturating = saturating_vertices(functional);
    let boxes: Vec<BoxTable> = saturating.iter().map(deterministic_box).collect();
    let rank = span_dimension(&boxes)?;
    let required = functional.parties().coordinates() - 1;
    Ok(TightnessReport {
        tight: rank == required,
        rank,
        required,
        saturating,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Locality {
    Local,
    Nonlocal,
}

impl fmt::Display for Locality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Locality::Local => "local",
            Locality::Nonlocal => "nonlocal",
        })
    }
}

/// Constructive answer to "is this box in the Bell polytope?".
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Convex weights (non-zero ones only) whose vertex mixture is the box.
    Local {
        weights: BTreeMap<DeterministicStrategy, Rational>,
    },
    /// A functional that is non-negative on every vertex and evaluates to
    /// `value < 0` on the box.
    Nonlocal {
        separator: BellFunctional,
        value: Rational,
    },
}

impl Certificate {
    pub fn verdict(&self) -> Locality {
        match self {
            Certificate::Local { .. } => Locality::Local,
            Certificate::Nonlocal { .. } => Locality::Nonlocal,
        }
    }

    /// Re-checks the certificate against `p` from scratch.
    pub fn verify(&self, p: &BoxTable) -> bool {
        match self {
            Certificate::Local { weights } => {
                if weights.values().any(|w| w.is_negative())
                    || !weights.values().sum::<Rational>().is_one()
                {
                    return false;
                }
                let boxes: Vec<(Rational, BoxTable)> = weights
                    .iter()
                    .map(|(d, w)| (w.clone(), deterministic_box(d)))
                    .collect();
                BoxTable::combination(p.parties(), boxes.iter().map(|(w, b)| (w, b)))
                    .is_ok_and(|mix| &mix == p)
            }
            Certificate::Nonlocal { separator, value } => {
                check_inequality(separator).is_ok()
                    && value.is_negative()
                    && functional::evaluate(separator, p).is_ok_and(|v| &v == value)
            }
        }
    }
}

/// Exact membership test for the convex hull of the deterministic boxes.
///
/// Solves `Σ_d λ_d |d⟩ = |P⟩, Σ_d λ_d = 1, λ ≥ 0`. On infeasibility the
/// Farkas multipliers become a Bell functional; for a non-signaling box it
/// is returned in standard form. Either certificate is verified before it
/// is returned.
pub fn is_local(p: &BoxTable) -> Result<Certificate> {
    if let Some((s, total)) = p.normalization_defect() {
        return Err(Error::InvalidBox(format!(
            "probabilities for setting {s} sum to {total}"
        )));
    }
    let parties = p.parties();
    let vertices = enumerate_vertices(parties);
    let columns: Vec<Vec<Rational>> = vertices
        .iter()
        .map(|d| {
            let mut col = deterministic_box(d).raw().to_vec();
            col.push(Rational::one());
            col
        })
        .collect();
    let mut rhs = p.raw().to_vec();
    rhs.push(Rational::one());

    let certificate = match lp::feasibility(&columns, &rhs) {
        Feasibility::Feasible(x) => Certificate::Local {
            weights: vertices
                .into_iter()
                .zip(x)
                .filter(|(_, w)| !w.is_zero())
                .collect(),
        },
        Feasibility::Infeasible(mut y) => {
            // Every box has Σ entries = 2^n, so the normalization multiplier
            // spreads evenly over all events.
            let shift = y.pop().expect("normalization row") * inverse_power_of_two(parties.get());
            let raw = BellFunctional::from_raw(parties, y.into_iter().map(|v| v + &shift).collect());
            let separator = if nsbox::is_nonsignaling(p).is_nonsignaling() {
                functional::standardize(&raw)?
            } else {
                raw
            };
            let value = functional::evaluate(&separator, p)?;
            Certificate::Nonlocal { separator, value }
        }
    };
    assert!(certificate.verify(p), "membership certificate failed verification");
    Ok(certificate)
}
