//! Spinor characters.
//!
//! Two independent descriptions: the graded sum `⊕_r Symʳ H ⊗ Λ^{n-r}∘E`, and the
//! weights `½ Σ (±x_i ± y_i)` of the spin representation of so(4n) restricted
//! along `x_i = h + ε_i`, `y_i = h - ε_i` (the weights of `H ⊗ E`).

use crate::labels::{QuatDim, SpnWeight};

use super::{HighestWeight, VirtualCharacter, WeightMultiset};

/// Weights of `H ⊗ E`: `±h ± ε_i`.
pub fn tangent_weights(n: QuatDim) -> WeightMultiset {
    let rank = n.rank();
    let mut out = WeightMultiset::new(rank);
    for h in [-1, 1] {
        for i in 0..rank {
            for s in [-1, 1] {
                let mut v = vec![0; rank + 1];
                v[0] = h;
                v[i + 1] = s;
                out.add(v, 1);
            }
        }
    }
    out
}

/// `S_r = Symʳ H ⊗ Λ^{n-r}∘E`.
pub fn spinor_part(n: QuatDim, r: u32) -> HighestWeight {
    assert!(r <= n.get(), "spinor summand index r must be <= n");
    HighestWeight::new(r, SpnWeight::fundamental(n.get() - r))
}

/// `S = ⊕_{r=0}^{n} S_r`.
pub fn spinor_character(n: QuatDim) -> VirtualCharacter {
    let mut s = VirtualCharacter::new(n.rank());
    for r in 0..=n.get() {
        s.add(spinor_part(n, r), 1);
    }
    s
}

/// `(S⁺, S⁻)` with `S⁺ = ⊕_{r ≡ n mod 2} S_r`.
pub fn half_spinor_characters(n: QuatDim) -> (VirtualCharacter, VirtualCharacter) {
    let mut plus = VirtualCharacter::new(n.rank());
    let mut minus = VirtualCharacter::new(n.rank());
    for r in 0..=n.get() {
        if (r + n.get()).is_multiple_of(2) {
            plus.add(spinor_part(n, r), 1);
        } else {
            minus.add(spinor_part(n, r), 1);
        }
    }
    (plus, minus)
}

/// Half-spin weight multisets of so(4n) restricted to Sp(1)×Sp(n), split by the
/// parity of the number of minus signs: `(even, odd)`.
pub fn half_spinor_weights_from_so(n: QuatDim) -> (WeightMultiset, WeightMultiset) {
    let rank = n.rank();
    let mut even = WeightMultiset::new(rank);
    let mut odd = WeightMultiset::new(rank);
    // 2n signs: s_i on x_i, t_i on y_i
    for mask in 0u32..(1 << (2 * rank)) {
        let mut h2 = 0i32;
        let mut v = vec![0i32; rank + 1];
        for i in 0..rank {
            let s = if mask & (1 << (2 * i)) != 0 { -1 } else { 1 };
            let t = if mask & (1 << (2 * i + 1)) != 0 { -1 } else { 1 };
            h2 += s + t;
            v[i + 1] = (s - t) / 2;
        }
        v[0] = h2 / 2;
        if mask.count_ones() % 2 == 0 {
            even.add(v, 1);
        } else {
            odd.add(v, 1);
        }
    }
    (even, odd)
}
