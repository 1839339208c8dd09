//! Exterior and symmetric powers of a weight multiset.
//!
//! The multiset is expanded into one weight per basis vector. `Λ(V ⊕ L) =
//! Λ(V) ⊗ Λ(L)` for a line `L` of weight `w` adds `w` to every weight of
//! degree `k - 1`, which builds all degrees at once and is the same count as
//! enumerating k-subsets of basis vectors.

use crate::error::{QkError, Result};

use super::WeightMultiset;

fn basis_weights(ch: &WeightMultiset) -> Result<Vec<Vec<i32>>> {
    let mut out = Vec::new();
    for (w, m) in ch.iter() {
        if m < 0 {
            return Err(QkError::OutOfRange {
                what: "power of a virtual character",
                detail: format!("weight {w:?} has negative multiplicity {m}"),
            });
        }
        for _ in 0..m {
            out.push(w.clone());
        }
    }
    Ok(out)
}

/// Weight multisets of `Λ⁰ … Λ^{dim}` of a genuine representation.
pub fn exterior_algebra(ch: &WeightMultiset) -> Result<Vec<WeightMultiset>> {
    let rank = ch.rank();
    let basis = basis_weights(ch)?;
    let mut degrees = vec![WeightMultiset::unit(rank)];
    for v in &basis {
        let mut next: Vec<WeightMultiset> = degrees.clone();
        next.push(WeightMultiset::new(rank));
        for (k, lower) in degrees.iter().enumerate() {
            for (w, m) in lower.iter() {
                let s: Vec<i32> = w.iter().zip(v).map(|(a, b)| a + b).collect();
                next[k + 1].add(s, m);
            }
        }
        degrees = next;
    }
    Ok(degrees)
}

/// Weight multiset of `Λᵏ`.
pub fn exterior_power(ch: &WeightMultiset, k: usize) -> Result<WeightMultiset> {
    let dim = ch.mass().max(0) as usize;
    if k > dim {
        return Err(QkError::PowerTooLarge { k, dim });
    }
    Ok(exterior_algebra(ch)?.swap_remove(k))
}

/// Weight multiset of `Symᵏ`.
pub fn symmetric_power(ch: &WeightMultiset, k: usize) -> Result<WeightMultiset> {
    let rank = ch.rank();
    let basis = basis_weights(ch)?;
    // degrees[j] = Sym^j of the span of the basis vectors processed so far
    let mut degrees: Vec<WeightMultiset> = (0..=k)
        .map(|j| {
            if j == 0 {
                WeightMultiset::unit(rank)
            } else {
                WeightMultiset::new(rank)
            }
        })
        .collect();
    for v in &basis {
        let mut next = degrees.clone();
        for j in 1..=k {
            // multiply by v: Sym^j gains v · Sym^{j-1} of the new space
            let prev = next[j - 1].clone();
            for (w, m) in prev.iter() {
                let s: Vec<i32> = w.iter().zip(v).map(|(a, b)| a + b).collect();
                next[j].add(s, m);
            }
        }
        degrees = next;
    }
    Ok(degrees.swap_remove(k))
}
