//! Brute-force character calculus for Sp(1)×Sp(n).
//!
//! Everything here works on explicit weight multisets: a weight of the product
//! group is an integer vector whose first entry is the sp(1) weight and whose
//! remaining `n` entries are ε-coordinates for sp(n). Decomposition into
//! irreducibles is done by highest-weight peeling: take the lexicographically
//! largest weight still present, subtract the full weight multiset of that
//! irreducible, repeat. Lexicographic order refines dominance because every
//! positive root has a positive first nonzero coordinate.
//!
//! No fusion rule or branching rule is used anywhere in this module, so it
//! serves as the independent check for the closed forms elsewhere in the crate.

mod freudenthal;
mod powers;
mod spinor;

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{QkError, Result};
use crate::labels::{
    label_to_weight, weight_to_label, IrrepLabel, QuatDim, SpnWeight, TwistLabel,
};

pub use powers::{exterior_algebra, exterior_power, symmetric_power};
pub use spinor::{
    half_spinor_characters, half_spinor_weights_from_so, spinor_character, spinor_part,
    tangent_weights,
};

pub(crate) use freudenthal::{dominant_of, is_dominant, weyl_orbit};

/// Finite multiset of weights of Sp(1)×Sp(n); entries with multiplicity zero are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMultiset {
    rank: usize,
    weights: BTreeMap<Vec<i32>, i64>,
}

impl WeightMultiset {
    pub fn new(rank: usize) -> Self {
        WeightMultiset {
            rank,
            weights: BTreeMap::new(),
        }
    }

    /// The trivial one-dimensional character.
    pub fn unit(rank: usize) -> Self {
        let mut w = WeightMultiset::new(rank);
        w.add(vec![0; rank + 1], 1);
        w
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Add `mult` copies of `weight` (length `rank + 1`).
    pub fn add(&mut self, weight: Vec<i32>, mult: i64) {
        assert_eq!(weight.len(), self.rank + 1, "weight length must be rank + 1");
        if mult == 0 {
            return;
        }
        let entry = self.weights.entry(weight);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += mult;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(mult);
            }
        }
    }

    pub fn get(&self, weight: &[i32]) -> i64 {
        self.weights.get(weight).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i32>, i64)> {
        self.weights.iter().map(|(w, &m)| (w, m))
    }

    /// Number of distinct weights.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Total multiplicity (the dimension, for a genuine representation).
    pub fn mass(&self) -> i64 {
        self.weights.values().sum()
    }

    pub fn add_scaled(&mut self, other: &WeightMultiset, scale: i64) -> Result<()> {
        check_rank(self.rank, other.rank)?;
        for (w, m) in other.iter() {
            self.add(w.clone(), scale * m);
        }
        Ok(())
    }

    /// Character of the tensor product.
    pub fn tensor(&self, other: &WeightMultiset) -> Result<WeightMultiset> {
        check_rank(self.rank, other.rank)?;
        let mut out = WeightMultiset::new(self.rank);
        for (x, mx) in self.iter() {
            for (y, my) in other.iter() {
                let s: Vec<i32> = x.iter().zip(y).map(|(a, b)| a + b).collect();
                out.add(s, mx * my);
            }
        }
        Ok(out)
    }

    /// Sample-free check: every weight's multiplicity equals that of its dominant
    /// representative under sign flips and permutations of the sp(n) part and the
    /// sign flip of the sp(1) part.
    pub fn is_weyl_invariant(&self) -> bool {
        let mut seen: BTreeMap<Vec<i32>, usize> = BTreeMap::new();
        for (w, m) in self.iter() {
            let mut dom = vec![w[0].abs()];
            dom.extend(dominant_of(&w[1..]));
            if self.get(&dom) != m {
                return false;
            }
            *seen.entry(dom).or_insert(0) += 1;
        }
        seen.iter().all(|(dom, &count)| {
            let sp1_orbit = if dom[0] == 0 { 1 } else { 2 };
            count == sp1_orbit * weyl_orbit(&dom[1..]).len()
        })
    }
}

fn check_rank(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(QkError::RankMismatch { expected, got });
    }
    Ok(())
}

/// Highest weight of an irreducible Sp(1)×Sp(n)-representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HighestWeight {
    pub k: u32,
    pub weight: SpnWeight,
}

impl HighestWeight {
    pub fn new(k: u32, weight: SpnWeight) -> Self {
        HighestWeight { k, weight }
    }

    pub fn from_label(r: &IrrepLabel) -> Self {
        let (k, weight) = label_to_weight(r);
        HighestWeight { k, weight }
    }

    /// The `(k, a, b)` label, when the sp(n) part is a two-column weight.
    pub fn to_label(&self, n: QuatDim) -> Option<IrrepLabel> {
        weight_to_label(n, self.k, &self.weight)
    }

    fn as_vector(&self, rank: usize) -> Vec<i32> {
        let mut v = vec![self.k as i32];
        v.extend(self.weight.padded(rank));
        v
    }
}

impl fmt::Display for HighestWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{};{}]", self.k, self.weight)
    }
}

/// Integer combination of irreducible characters, keyed by highest weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualCharacter {
    rank: usize,
    terms: BTreeMap<HighestWeight, i64>,
}

impl VirtualCharacter {
    pub fn new(rank: usize) -> Self {
        VirtualCharacter {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn irreducible(rank: usize, hw: HighestWeight) -> Self {
        let mut v = VirtualCharacter::new(rank);
        v.add(hw, 1);
        v
    }

    pub fn from_label(n: QuatDim, r: &IrrepLabel) -> Self {
        VirtualCharacter::irreducible(n.rank(), HighestWeight::from_label(r))
    }

    /// `Symˡ H ⊗ Λᵈ∘E`.
    pub fn twist(n: QuatDim, tw: &TwistLabel) -> Self {
        VirtualCharacter::irreducible(
            n.rank(),
            HighestWeight::new(tw.l, SpnWeight::fundamental(tw.d)),
        )
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn add(&mut self, hw: HighestWeight, mult: i64) {
        if mult == 0 {
            return;
        }
        let m = self.terms.entry(hw.clone()).or_insert(0);
        *m += mult;
        if *m == 0 {
            self.terms.remove(&hw);
        }
    }

    pub fn multiplicity(&self, hw: &HighestWeight) -> i64 {
        self.terms.get(hw).copied().unwrap_or(0)
    }

    pub fn multiplicity_of(&self, r: &IrrepLabel) -> i64 {
        self.multiplicity(&HighestWeight::from_label(r))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&HighestWeight, i64)> {
        self.terms.iter().map(|(h, &m)| (h, m))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Signed dimension `Σ mult · dim`.
    pub fn dimension(&self) -> i64 {
        self.iter()
            .map(|(hw, m)| {
                let dim = crate::labels::cn_dimension(self.rank, &hw.weight)
                    .expect("stored highest weights fit the rank");
                m * (hw.k as i64 + 1) * dim as i64
            })
            .sum()
    }

    pub fn add_scaled(&mut self, other: &VirtualCharacter, scale: i64) -> Result<()> {
        check_rank(self.rank, other.rank)?;
        for (hw, m) in other.iter() {
            self.add(hw.clone(), scale * m);
        }
        Ok(())
    }

    /// Sum of the weight multisets of the terms.
    pub fn weights(&self) -> WeightMultiset {
        let mut out = WeightMultiset::new(self.rank);
        for (hw, m) in self.iter() {
            let w = irrep_weights(self.rank, hw);
            out.add_scaled(&w, m).expect("same rank");
        }
        out
    }
}

impl Serialize for VirtualCharacter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            k: u32,
            weight: &'a SpnWeight,
            mult: i64,
        }
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (hw, m) in self.iter() {
            seq.serialize_element(&Term {
                k: hw.k,
                weight: &hw.weight,
                mult: m,
            })?;
        }
        seq.end()
    }
}

fn irrep_weights(rank: usize, hw: &HighestWeight) -> WeightMultiset {
    let spn = freudenthal::spn_weights(rank, &hw.weight);
    let mut out = WeightMultiset::new(rank);
    let k = hw.k as i32;
    for h in (-k..=k).step_by(2) {
        for (w, m) in spn.iter() {
            let mut v = Vec::with_capacity(rank + 1);
            v.push(h);
            v.extend_from_slice(w);
            out.add(v, *m);
        }
    }
    out
}

/// Full weight multiset of the irreducible representation with highest weight `hw`.
pub fn weights_of_irrep(n: QuatDim, hw: &HighestWeight) -> Result<WeightMultiset> {
    hw.weight.check_rank(n.rank())?;
    Ok(irrep_weights(n.rank(), hw))
}

/// Decompose a Weyl-invariant weight multiset into irreducibles by highest-weight peeling.
pub fn decompose(ch: &WeightMultiset) -> Result<VirtualCharacter> {
    let rank = ch.rank;
    let mut rem = ch.clone();
    let mut out = VirtualCharacter::new(rank);
    while let Some((top, &m)) = rem.weights.iter().next_back() {
        let top = top.clone();
        if top[0] < 0 || !is_dominant(&top[1..]) {
            return Err(QkError::NotWeylInvariant(top));
        }
        let hw = HighestWeight::new(
            top[0] as u32,
            SpnWeight::from_dominant(&top[1..]).expect("dominant weights are partitions"),
        );
        let w = irrep_weights(rank, &hw);
        rem.add_scaled(&w, -m)?;
        debug_assert_eq!(rem.get(&hw.as_vector(rank)), 0);
        out.add(hw, m);
    }
    Ok(out)
}

/// Tensor product of two virtual characters, decomposed.
pub fn tensor(a: &VirtualCharacter, b: &VirtualCharacter) -> Result<VirtualCharacter> {
    check_rank(a.rank, b.rank)?;
    decompose(&a.weights().tensor(&b.weights())?)
}
