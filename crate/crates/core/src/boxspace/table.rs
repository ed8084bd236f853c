use num_traits::{One, Signed, Zero};

use super::vector::{lex_to_bits, BinaryVector, Parties};
use super::Rational;
use crate::error::{Error, Result};

/// Dense storage over the `4^n` events `(s, a)`, indexed by `(s << n) | a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct EventTable {
    pub(crate) parties: Parties,
    pub(crate) values: Vec<Rational>,
}

impl EventTable {
    pub(crate) fn zero(parties: Parties) -> Self {
        EventTable {
            parties,
            values: vec![Rational::zero(); parties.events()],
        }
    }

    pub(crate) fn from_raw(parties: Parties, values: Vec<Rational>) -> Self {
        assert_eq!(values.len(), parties.events());
        EventTable { parties, values }
    }

    fn index(&self, s: BinaryVector, a: BinaryVector) -> Result<usize> {
        let n = self.parties.get();
        for v in [s, a] {
            if v.n() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: v.n(),
                });
            }
        }
        Ok(((s.bits() as usize) << n) | a.bits() as usize)
    }

    pub(crate) fn get(&self, s: BinaryVector, a: BinaryVector) -> Result<&Rational> {
        self.index(s, a).map(|i| &self.values[i])
    }

    pub(crate) fn set(&mut self, s: BinaryVector, a: BinaryVector, value: Rational) -> Result<()> {
        let i = self.index(s, a)?;
        self.values[i] = value;
        Ok(())
    }

    pub(crate) fn entries(&self) -> impl Iterator<Item = (BinaryVector, BinaryVector, &Rational)> {
        let n = self.parties.get();
        let words = 1u32 << n;
        (0..words).flat_map(move |i| {
            let s = lex_to_bits(n, i);
            (0..words).map(move |j| {
                let a = lex_to_bits(n, j);
                (
                    BinaryVector::from_raw(n, s),
                    BinaryVector::from_raw(n, a),
                    &self.values[((s as usize) << n) | a as usize],
                )
            })
        })
    }
}

/// Shared surface of [`BoxTable`] and [`crate::functional::BellFunctional`]:
/// both are dense vectors in the `4^n`-dimensional box space.
macro_rules! event_vector {
    ($name:ident) => {
        impl $name {
            /// All-zero table.
            pub fn zero(parties: $crate::boxspace::Parties) -> Self {
                $name($crate::boxspace::table::EventTable::zero(parties))
            }

            pub fn from_fn<F>(parties: $crate::boxspace::Parties, mut f: F) -> Self
            where
                F: FnMut(
                    $crate::boxspace::BinaryVector,
                    $crate::boxspace::BinaryVector,
                ) -> $crate::boxspace::Rational,
            {
                let n = parties.get();
                let words = parties.words() as u32;
                let mut values = Vec::with_capacity(parties.events());
                for s in 0..words {
                    for a in 0..words {
                        values.push(f(
                            $crate::boxspace::BinaryVector::from_raw(n, s),
                            $crate::boxspace::BinaryVector::from_raw(n, a),
                        ));
                    }
                }
                $name($crate::boxspace::table::EventTable::from_raw(parties, values))
            }

            /// Builds from internal-order values (`(s << n) | a`).
            pub(crate) fn from_raw(
                parties: $crate::boxspace::Parties,
                values: Vec<$crate::boxspace::Rational>,
            ) -> Self {
                $name($crate::boxspace::table::EventTable::from_raw(parties, values))
            }

            pub fn parties(&self) -> $crate::boxspace::Parties {
                self.0.parties
            }

            pub fn n(&self) -> usize {
                self.0.parties.get()
            }

            pub fn get(
                &self,
                s: $crate::boxspace::BinaryVector,
                a: $crate::boxspace::BinaryVector,
            ) -> $crate::error::Result<&$crate::boxspace::Rational> {
                self.0.get(s, a)
            }

            pub fn set(
                &mut self,
                s: $crate::boxspace::BinaryVector,
                a: $crate::boxspace::BinaryVector,
                value: $crate::boxspace::Rational,
            ) -> $crate::error::Result<()> {
                self.0.set(s, a, value)
            }

            /// Entries in lexicographic `(s, a)` order.
            pub fn entries(
                &self,
            ) -> impl Iterator<
                Item = (
                    $crate::boxspace::BinaryVector,
                    $crate::boxspace::BinaryVector,
                    &$crate::boxspace::Rational,
                ),
            > {
                self.0.entries()
            }

            /// Values in internal order, `(s << n) | a`.
            pub(crate) fn raw(&self) -> &[$crate::boxspace::Rational] {
                &self.0.values
            }

            pub fn scaled(&self, factor: &$crate::boxspace::Rational) -> Self {
                let values = self.0.values.iter().map(|v| v * factor).collect();
                Self::from_raw(self.parties(), values)
            }

            /// `Σ_i w_i · T_i`. All terms must share a party count.
            pub fn combination<'a, I>(
                parties: $crate::boxspace::Parties,
                terms: I,
            ) -> $crate::error::Result<Self>
            where
                I: IntoIterator<Item = (&'a $crate::boxspace::Rational, &'a Self)>,
            {
                let mut values = vec![
                    <$crate::boxspace::Rational as num_traits::Zero>::zero();
                    parties.events()
                ];
                for (w, t) in terms {
                    if t.parties() != parties {
                        return Err($crate::error::Error::DimensionMismatch {
                            left: parties.get(),
                            right: t.n(),
                        });
                    }
                    if num_traits::Zero::is_zero(w) {
                        continue;
                    }
                    for (acc, v) in values.iter_mut().zip(t.raw()) {
                        if !num_traits::Zero::is_zero(v) {
                            *acc += w * v;
                        }
                    }
                }
                Ok(Self::from_raw(parties, values))
            }
        }
    };
}

pub(crate) use event_vector;

/// A table of conditional probabilities `P(a|s)` over all `4^n` events.
///
/// Entries are only required to be non-negative and normalized when a box
/// is *validated*; intermediate tables (for instance the inverse image of an
/// arbitrary correlation table) may carry negative entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoxTable(pub(crate) EventTable);

event_vector!(BoxTable);

impl BoxTable {
    /// `P(a|s) = 1/2^n` everywhere.
    pub fn uniform(parties: Parties) -> Self {
        let p = Rational::new(1.into(), (parties.words() as u64).into());
        BoxTable::from_fn(parties, |_, _| p.clone())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.raw().iter().all(|v| !v.is_negative())
    }

    /// First setting whose outcome distribution does not sum to one.
    pub fn normalization_defect(&self) -> Option<(BinaryVector, Rational)> {
        let words = self.parties().words();
        BinaryVector::all(self.parties()).find_map(|s| {
            let start = (s.bits() as usize) * words;
            let total: Rational = self.raw()[start..start + words].iter().sum();
            (!total.is_one()).then_some((s, total))
        })
    }

    pub fn is_normalized(&self) -> bool {
        self.normalization_defect().is_none()
    }

    /// Checks that every entry is non-negative and every setting is normalized.
    pub fn validate(&self) -> Result<()> {
        if let Some((s, a, v)) = self.entries().find(|(_, _, v)| v.is_negative()) {
            return Err(Error::InvalidBox(format!("P({a}|{s}) = {v} is negative")));
        }
        if let Some((s, total)) = self.normalization_defect() {
            return Err(Error::InvalidBox(format!(
                "probabilities for setting {s} sum to {total}"
            )));
        }
        Ok(())
    }
}

/// Dense storage over the `3^n` pairs `(c, s)` with `s ⊆ c`, indexed by
/// `(c << n) | s`. Slots with `s ⊄ c` are unused and kept at zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct SubsetTable {
    pub(crate) parties: Parties,
    pub(crate) values: Vec<Rational>,
}

impl SubsetTable {
    pub(crate) fn from_fn<F>(parties: Parties, mut f: F) -> Self
    where
        F: FnMut(u32, u32) -> Rational,
    {
        let n = parties.get();
        let words = parties.words() as u32;
        let mut values = vec![Rational::zero(); parties.events()];
        for c in 0..words {
            for s in 0..words {
                if s & !c == 0 {
                    values[((c as usize) << n) | s as usize] = f(c, s);
                }
            }
        }
        SubsetTable { parties, values }
    }

    /// Value at `(c, s ∧ c)`.
    pub(crate) fn at(&self, c: u32, s: u32) -> &Rational {
        &self.values[((c as usize) << self.parties.get()) | (s & c) as usize]
    }

    pub(crate) fn check(&self, c: BinaryVector, s: BinaryVector) -> Result<()> {
        let n = self.parties.get();
        for v in [c, s] {
            if v.n() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: v.n(),
                });
            }
        }
        Ok(())
    }

    pub(crate) fn from_entries<I>(parties: Parties, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BinaryVector, BinaryVector, Rational)>,
    {
        let n = parties.get();
        let mut slots: Vec<Option<Rational>> = vec![None; parties.events()];
        for (c, s, value) in entries {
            for v in [c, s] {
                if v.n() != n {
                    return Err(Error::DimensionMismatch {
                        left: n,
                        right: v.n(),
                    });
                }
            }
            if !s.is_subset_of(c)? {
                return Err(Error::NotSubset { c, s });
            }
            slots[((c.bits() as usize) << n) | s.bits() as usize] = Some(value);
        }
        let table = SubsetTable::from_fn(parties, |c, s| {
            slots[((c as usize) << n) | s as usize]
                .clone()
                .unwrap_or_else(Rational::zero)
        });
        for c in BinaryVector::all(parties) {
            for s in c.subsets() {
                if slots[((c.bits() as usize) << n) | s.bits() as usize].is_none() {
                    return Err(Error::IncompleteTable { c, s });
                }
            }
        }
        Ok(table)
    }

    pub(crate) fn entries(&self) -> impl Iterator<Item = (BinaryVector, BinaryVector, &Rational)> {
        BinaryVector::all(self.parties).flat_map(move |c| {
            c.subsets()
                .map(move |s| (c, s, self.at(c.bits(), s.bits())))
        })
    }
}

macro_rules! subset_vector {
    ($name:ident) => {
        impl $name {
            pub(crate) fn from_subset_fn<F>(parties: $crate::boxspace::Parties, f: F) -> Self
            where
                F: FnMut(u32, u32) -> $crate::boxspace::Rational,
            {
                $name($crate::boxspace::table::SubsetTable::from_fn(parties, f))
            }

            /// Builds a table from `(c, s, value)` triples. Every `s ⊆ c`
            /// must be present exactly once; later duplicates win.
            pub fn from_entries<I>(
                parties: $crate::boxspace::Parties,
                entries: I,
            ) -> $crate::error::Result<Self>
            where
                I: IntoIterator<
                    Item = (
                        $crate::boxspace::BinaryVector,
                        $crate::boxspace::BinaryVector,
                        $crate::boxspace::Rational,
                    ),
                >,
            {
                $crate::boxspace::table::SubsetTable::from_entries(parties, entries).map($name)
            }

            pub fn parties(&self) -> $crate::boxspace::Parties {
                self.0.parties
            }

            pub fn n(&self) -> usize {
                self.0.parties.get()
            }

            /// Entry at `(c, s ∧ c)`; any `s` is accepted.
            pub fn get(
                &self,
                c: $crate::boxspace::BinaryVector,
                s: $crate::boxspace::BinaryVector,
            ) -> $crate::error::Result<&$crate::boxspace::Rational> {
                self.0.check(c, s)?;
                Ok(self.0.at(c.bits(), s.bits()))
            }

            pub(crate) fn at(&self, c: u32, s: u32) -> &$crate::boxspace::Rational {
                self.0.at(c, s)
            }

            /// The `3^n` entries in lexicographic `(c, s)` order, `s ⊆ c`.
            pub fn entries(
                &self,
            ) -> impl Iterator<
                Item = (
                    $crate::boxspace::BinaryVector,
                    $crate::boxspace::BinaryVector,
                    &$crate::boxspace::Rational,
                ),
            > {
                self.0.entries()
            }
        }
    };
}

pub(crate) use subset_vector;

/// Correlation coordinates `A^c_s`, `s ⊆ c`, of a box.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CorrelationTable(pub(crate) SubsetTable);

subset_vector!(CorrelationTable);

impl CorrelationTable {
    /// `A^0_0 = 1`.
    pub fn is_normalized(&self) -> bool {
        self.at(0, 0).is_one()
    }
}
