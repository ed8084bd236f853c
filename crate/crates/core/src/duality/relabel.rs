//! Local relabelings: party permutations, setting swaps and outcome flips
//! that may depend on the local setting.

use crate::boxspace::{BinaryVector, BoxTable, Parties};
use crate::error::{Error, Result};
use crate::functional::BellFunctional;

/// The map `(s, a) ↦ (s + swap, a + flip + flip_on_setting·s)` on one
/// observer's `(setting, outcome)` pair.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct LocalRelabeling {
    pub swap_setting: bool,
    /// Constant outcome flip `α`.
    pub flip: bool,
    /// Outcome flip `β` applied only when the local setting is 1.
    pub flip_on_setting: bool,
}

impl LocalRelabeling {
    fn map(self, s: bool, a: bool) -> (bool, bool) {
        (
            s ^ self.swap_setting,
            a ^ self.flip ^ (self.flip_on_setting & s),
        )
    }

    /// `self ∘ first`: apply `first`, then `self`.
    fn after(self, first: LocalRelabeling) -> LocalRelabeling {
        LocalRelabeling {
            swap_setting: first.swap_setting ^ self.swap_setting,
            flip: first.flip ^ self.flip ^ (self.flip_on_setting & first.swap_setting),
            flip_on_setting: first.flip_on_setting ^ self.flip_on_setting,
        }
    }

    fn inverse(self) -> LocalRelabeling {
        LocalRelabeling {
            swap_setting: self.swap_setting,
            flip: self.flip ^ (self.flip_on_setting & self.swap_setting),
            flip_on_setting: self.flip_on_setting,
        }
    }
}

/// Observer `k` of the source is moved to position `target[k]` and its
/// `(setting, outcome)` labels are rewritten by `local[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relabeling {
    target: Vec<usize>,
    local: Vec<LocalRelabeling>,
}

impl Relabeling {
    pub fn identity(parties: Parties) -> Self {
        let n = parties.get();
        Relabeling {
            target: (0..n).collect(),
            local: vec![LocalRelabeling::default(); n],
        }
    }

    /// `target[k]` is the 0-based destination of source observer `k`.
    pub fn new(target: Vec<usize>, local: Vec<LocalRelabeling>) -> Result<Self> {
        let n = target.len();
        if local.len() != n {
            return Err(Error::InvalidRelabeling(format!(
                "{} local maps for {n} observers",
                local.len()
            )));
        }
        let mut seen = vec![false; n];
        for &t in &target {
            if t >= n || std::mem::replace(&mut seen[t], true) {
                return Err(Error::InvalidRelabeling(format!(
                    "{target:?} is not a permutation of 0..{n}"
                )));
            }
        }
        Ok(Relabeling { target, local })
    }

    /// Only outcome flips, no permutation or setting swap.
    pub fn outcome_flips(alpha: BinaryVector, beta: BinaryVector) -> Result<Self> {
        if alpha.n() != beta.n() {
            return Err(Error::DimensionMismatch {
                left: alpha.n(),
                right: beta.n(),
            });
        }
        let local = alpha
            .components()
            .zip(beta.components())
            .map(|(a, b)| LocalRelabeling {
                swap_setting: false,
                flip: a == 1,
                flip_on_setting: b == 1,
            })
            .collect();
        Relabeling::new((0..alpha.n()).collect(), local)
    }

    pub fn n(&self) -> usize {
        self.target.len()
    }

    /// Applies `first`, then `self`.
    pub fn after(&self, first: &Relabeling) -> Result<Relabeling> {
        if self.n() != first.n() {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: first.n(),
            });
        }
        let target = first.target.iter().map(|&mid| self.target[mid]).collect();
        let local = (0..self.n())
            .map(|k| self.local[first.target[k]].after(first.local[k]))
            .collect();
        Ok(Relabeling { target, local })
    }

    pub fn inverse(&self) -> Relabeling {
        let n = self.n();
        let mut target = vec![0; n];
        let mut local = vec![LocalRelabeling::default(); n];
        for k in 0..n {
            target[self.target[k]] = k;
            local[self.target[k]] = self.local[k].inverse();
        }
        Relabeling { target, local }
    }

    /// Image of the event `(s, a)` (internal words).
    fn map_event(&self, s: u32, a: u32) -> (u32, u32) {
        let mut out = (0u32, 0u32);
        for k in 0..self.n() {
            let (sk, ak) = self.local[k].map(s >> k & 1 == 1, a >> k & 1 == 1);
            out.0 |= u32::from(sk) << self.target[k];
            out.1 |= u32::from(ak) << self.target[k];
        }
        out
    }

    fn permute(&self, parties: Parties, values: &[crate::boxspace::Rational]) -> Result<Vec<crate::boxspace::Rational>> {
        if parties.get() != self.n() {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: parties.get(),
            });
        }
        let n = parties.get();
        let words = parties.words() as u32;
        let mut out = vec![Default::default(); parties.events()];
        for s in 0..words {
            for a in 0..words {
                let (s2, a2) = self.map_event(s, a);
                out[((s2 as usize) << n) | a2 as usize] = values[((s as usize) << n) | a as usize].clone();
            }
        }
        Ok(out)
    }

    /// `Q(R(s, a)) = P(s, a)`.
    pub fn apply_to_box(&self, p: &BoxTable) -> Result<BoxTable> {
        Ok(BoxTable::from_raw(p.parties(), self.permute(p.parties(), p.raw())?))
    }

    /// Transforms coefficients the same way, so `⟨R B | R P⟩ = ⟨B|P⟩`.
    pub fn apply_to_functional(&self, f: &BellFunctional) -> Result<BellFunctional> {
        Ok(BellFunctional::from_raw(f.parties(), self.permute(f.parties(), f.raw())?))
    }
}

/// Free-function form of [`Relabeling::apply_to_box`].
pub fn apply_relabeling(r: &Relabeling, p: &BoxTable) -> Result<BoxTable> {
    r.apply_to_box(p)
}
