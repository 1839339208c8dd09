//! Labels for the representations of Sp(1)×Sp(n) that the calculus works with.
//!
//! An irreducible representation `Symᵏ H ⊗ Λ_top^{a,b} E` is labelled by the
//! triple `(k, a, b)`, a twist `Symˡ H ⊗ Λᵈ∘E` by the pair `(l, d)`. Dominant
//! weights of sp(n) are partitions in ε-coordinates, so `Λ_top^{a,b} E` has the
//! two-column highest weight `(2ᵇ, 1^{a-b})`.

use std::fmt;

use num_integer::binomial;
use serde::{Deserialize, Serialize};

use crate::error::{QkError, Result};

/// Quaternionic dimension `n >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct QuatDim(u32);

impl QuatDim {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(QkError::QuatDimTooSmall(n));
        }
        Ok(QuatDim(n))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn rank(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for QuatDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `Symᵏ H ⊗ Λ_top^{a,b} E`, valid when `n >= a >= b >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IrrepLabel {
    k: u32,
    a: u32,
    b: u32,
}

impl IrrepLabel {
    pub fn new(n: QuatDim, k: u32, a: u32, b: u32) -> Result<Self> {
        if a > n.get() || b > a {
            return Err(QkError::InvalidIrrep { n: n.get(), k, a, b });
        }
        Ok(IrrepLabel { k, a, b })
    }

    /// The trivial representation.
    pub const TRIVIAL: IrrepLabel = IrrepLabel { k: 0, a: 0, b: 0 };

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }
    #[inline]
    pub fn a(&self) -> u32 {
        self.a
    }
    #[inline]
    pub fn b(&self) -> u32 {
        self.b
    }

    /// Re-check the label against a (possibly different) rank.
    pub fn validate(&self, n: QuatDim) -> Result<()> {
        IrrepLabel::new(n, self.k, self.a, self.b).map(|_| ())
    }

    /// Every valid label with `k <= k_max`, ordered by `(k, a, b)`.
    pub fn all(n: QuatDim, k_max: u32) -> Vec<IrrepLabel> {
        let mut out = Vec::new();
        for k in 0..=k_max {
            for a in 0..=n.get() {
                for b in 0..=a {
                    out.push(IrrepLabel { k, a, b });
                }
            }
        }
        out
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.k, self.a, self.b)
    }
}

#[derive(Deserialize)]
struct RawIrrep {
    k: u32,
    a: u32,
    b: u32,
}

impl<'de> Deserialize<'de> for IrrepLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawIrrep::deserialize(d)?;
        if raw.b > raw.a {
            return Err(serde::de::Error::custom(format!(
                "invalid irreducible label: b={} > a={}",
                raw.b, raw.a
            )));
        }
        Ok(IrrepLabel {
            k: raw.k,
            a: raw.a,
            b: raw.b,
        })
    }
}

/// The twist `R^{l,d} = Symˡ H ⊗ Λᵈ∘E`, valid when `0 <= d <= n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwistLabel {
    pub l: u32,
    pub d: u32,
}

impl TwistLabel {
    pub fn new(n: QuatDim, l: u32, d: u32) -> Result<Self> {
        if d > n.get() {
            return Err(QkError::InvalidTwist { n: n.get(), l, d });
        }
        Ok(TwistLabel { l, d })
    }

    pub fn validate(&self, n: QuatDim) -> Result<()> {
        TwistLabel::new(n, self.l, self.d).map(|_| ())
    }

    /// All twists with `l <= l_max`, ordered by `(l, d)`.
    pub fn all(n: QuatDim, l_max: u32) -> Vec<TwistLabel> {
        (0..=l_max)
            .flat_map(|l| (0..=n.get()).map(move |d| TwistLabel { l, d }))
            .collect()
    }
}

impl fmt::Display for TwistLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.l, self.d)
    }
}

/// Dominant sp(n) weight in ε-coordinates, stored without trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct SpnWeight(Vec<u32>);

impl SpnWeight {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(QkError::InvalidWeight {
                parts: parts.iter().map(|&p| p as i64).collect(),
            });
        }
        let mut parts = parts;
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(SpnWeight(parts))
    }

    /// Build from a signed dominant vector (as produced by the oracle).
    pub fn from_dominant(v: &[i32]) -> Result<Self> {
        if v.iter().any(|&x| x < 0) {
            return Err(QkError::InvalidWeight {
                parts: v.iter().map(|&p| p as i64).collect(),
            });
        }
        SpnWeight::new(v.iter().map(|&x| x as u32).collect())
    }

    pub fn trivial() -> Self {
        SpnWeight(Vec::new())
    }

    /// `(1ᵈ)`, the highest weight of `Λᵈ∘E`.
    pub fn fundamental(d: u32) -> Self {
        SpnWeight(vec![1; d as usize])
    }

    /// `(2ᵇ, 1^{a-b})`, the highest weight of `Λ_top^{a,b} E`.
    pub fn two_column(a: u32, b: u32) -> Self {
        assert!(b <= a, "two-column weight needs b <= a");
        let mut v = vec![2; b as usize];
        v.extend(std::iter::repeat_n(1, (a - b) as usize));
        SpnWeight(v)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Zero-padded signed coordinates of length `rank`.
    pub fn padded(&self, rank: usize) -> Vec<i32> {
        let mut v: Vec<i32> = self.0.iter().map(|&x| x as i32).collect();
        v.resize(rank, 0);
        v
    }

    /// Inverse of [`SpnWeight::two_column`]: `Some((a, b))` when all parts are 1 or 2.
    pub fn as_two_column(&self) -> Option<(u32, u32)> {
        if self.0.iter().any(|&p| p > 2) {
            return None;
        }
        let b = self.0.iter().filter(|&&p| p == 2).count() as u32;
        Some((self.0.len() as u32, b))
    }

    pub fn check_rank(&self, n: usize) -> Result<()> {
        if self.0.len() > n {
            return Err(QkError::WeightTooLong {
                parts: self.0.clone(),
                len: self.0.len(),
                n: n as u32,
            });
        }
        Ok(())
    }
}

impl fmt::Display for SpnWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl<'de> Deserialize<'de> for SpnWeight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<u32>::deserialize(d)?;
        SpnWeight::new(parts).map_err(serde::de::Error::custom)
    }
}

/// Weyl dimension formula for type C at arbitrary rank (including rank 1, i.e. sp(1)).
pub(crate) fn cn_dimension(rank: usize, w: &SpnWeight) -> Result<u64> {
    w.check_rank(rank)?;
    let lam = w.padded(rank);
    // ρ = (rank, rank-1, ..., 1)
    let shifted: Vec<i128> = (0..rank)
        .map(|i| lam[i] as i128 + (rank - i) as i128)
        .collect();
    let rho: Vec<i128> = (0..rank).map(|i| (rank - i) as i128).collect();
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..rank {
        // long roots 2ε_i
        num *= shifted[i];
        den *= rho[i];
        for j in (i + 1)..rank {
            num *= (shifted[i] - shifted[j]) * (shifted[i] + shifted[j]);
            den *= (rho[i] - rho[j]) * (rho[i] + rho[j]);
        }
        let g = num_integer::gcd(num, den);
        num /= g;
        den /= g;
    }
    debug_assert_eq!(den, 1);
    Ok(num as u64)
}

/// Dimension of the irreducible sp(n)-representation with highest weight `w`.
pub fn irrep_dimension(n: QuatDim, w: &SpnWeight) -> Result<u64> {
    cn_dimension(n.rank(), w)
}

/// `dim Λᵈ∘E = C(2n, d) - C(2n, d-2)`.
pub fn primitive_exterior_dimension(n: QuatDim, d: u32) -> u64 {
    let two_n = 2 * n.get() as u64;
    let d = d as u64;
    let top = binomial(two_n, d);
    let low = if d >= 2 { binomial(two_n, d - 2) } else { 0 };
    top - low
}

/// `(k, (2ᵇ, 1^{a-b}))`.
pub fn label_to_weight(r: &IrrepLabel) -> (u32, SpnWeight) {
    (r.k, SpnWeight::two_column(r.a, r.b))
}

/// Inverse of [`label_to_weight`] for two-column weights of rank at most `n`.
pub fn weight_to_label(n: QuatDim, k: u32, w: &SpnWeight) -> Option<IrrepLabel> {
    let (a, b) = w.as_two_column()?;
    IrrepLabel::new(n, k, a, b).ok()
}

/// Dimension of `Symᵏ H ⊗ Λ_top^{a,b} E`.
pub fn label_dimension(n: QuatDim, r: &IrrepLabel) -> u64 {
    let (k, w) = label_to_weight(r);
    (k as u64 + 1) * irrep_dimension(n, &w).expect("valid label has rank <= n")
}
