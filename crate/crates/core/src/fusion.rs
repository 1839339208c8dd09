//! Closed-form fusion rules: `Λᶜ∘E ⊗ Λᵈ∘E` and Sp(1) Clebsch–Gordan.

use crate::error::{QkError, Result};
use crate::labels::QuatDim;

/// The `(a, b)` labels of `Λ_top^{a,b}E` in `Λᶜ∘E ⊗ Λᵈ∘E`, each occurring once.
///
/// Constraints: `a + b ≡ c + d (mod 2)`, `a + b <= c + d`, `|c - d| <= a - b <= 2n - c - d`.
/// Output is sorted by `(a, b)` descending.
pub fn fuse_exterior(n: QuatDim, c: u32, d: u32) -> Result<Vec<(u32, u32)>> {
    let nn = n.get();
    for x in [c, d] {
        if x > nn {
            return Err(QkError::OutOfRange {
                what: "exterior degree",
                detail: format!("{x} > n = {nn}"),
            });
        }
    }
    let (c, d, nn) = (c as i64, d as i64, nn as i64);
    let mut out = Vec::new();
    for a in (0..=nn).rev() {
        for b in (0..=a).rev() {
            if (a + b - c - d).rem_euclid(2) == 0
                && a + b <= c + d
                && (c - d).abs() <= a - b
                && a - b <= 2 * nn - c - d
            {
                out.push((a as u32, b as u32));
            }
        }
    }
    assert!(!out.is_empty(), "fusion of valid exterior powers is never empty");
    Ok(out)
}

/// `Symᵏ H ⊗ Symˡ H = ⊕ Sym^j H`, `j = k+l, k+l-2, …, |k-l|`.
pub fn fuse_sp1(k: u32, l: u32) -> Vec<u32> {
    let lo = k.abs_diff(l);
    (lo..=k + l).rev().step_by(2).collect()
}
