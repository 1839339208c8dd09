//! Weight multiplicities of irreducible sp(n)-representations.
//!
//! Multiplicities of dominant weights come from Freudenthal's recursion in the
//! standard ε-inner product; the full multiset is the union of Weyl orbits
//! (signed permutations). Results are memoised per `(rank, highest weight)`
//! behind a read-write lock so that parallel sweeps share them.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use crate::labels::SpnWeight;

/// Positive roots of Cₙ in ε-coordinates: `ε_i ± ε_j` (i < j) and `2ε_i`.
fn positive_roots(rank: usize) -> Vec<Vec<i32>> {
    let mut roots = Vec::new();
    for i in 0..rank {
        for j in (i + 1)..rank {
            let mut minus = vec![0; rank];
            minus[i] = 1;
            minus[j] = -1;
            roots.push(minus);
            let mut plus = vec![0; rank];
            plus[i] = 1;
            plus[j] = 1;
            roots.push(plus);
        }
        let mut long = vec![0; rank];
        long[i] = 2;
        roots.push(long);
    }
    roots
}

fn dot(x: &[i32], y: &[i32]) -> i64 {
    x.iter().zip(y).map(|(&a, &b)| a as i64 * b as i64).sum()
}

/// Dominant representative of the Weyl orbit: sorted absolute values.
pub(crate) fn dominant_of(v: &[i32]) -> Vec<i32> {
    let mut d: Vec<i32> = v.iter().map(|x| x.abs()).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    d
}

pub(crate) fn is_dominant(v: &[i32]) -> bool {
    v.iter().all(|&x| x >= 0) && v.windows(2).all(|w| w[0] >= w[1])
}

/// `mu <= lam` in the dominance order: `lam - mu` is a nonnegative integer
/// combination of the simple roots `ε_i - ε_{i+1}`, `2ε_n`.
pub(crate) fn dominated_by(mu: &[i32], lam: &[i32]) -> bool {
    let mut prefix: i64 = 0;
    for (m, l) in mu.iter().zip(lam) {
        prefix += (*l - *m) as i64;
        if prefix < 0 {
            return false;
        }
    }
    prefix % 2 == 0
}

/// Height of `lam - mu` in the simple-root basis.
fn level(mu: &[i32], lam: &[i32]) -> i64 {
    let n = mu.len();
    let mut prefix = 0i64;
    let mut total = 0i64;
    for i in 0..n {
        prefix += (lam[i] - mu[i]) as i64;
        if i + 1 < n {
            total += prefix;
        }
    }
    total + prefix / 2
}

fn dominant_candidates(rank: usize, lam: &[i32]) -> Vec<Vec<i32>> {
    fn rec(
        rank: usize,
        lam: &[i32],
        max_part: i32,
        cur: &mut Vec<i32>,
        out: &mut Vec<Vec<i32>>,
    ) {
        if cur.len() == rank {
            if dominated_by(cur, lam) {
                out.push(cur.clone());
            }
            return;
        }
        for p in (0..=max_part).rev() {
            cur.push(p);
            // prune on the prefix condition
            let i = cur.len();
            let prefix: i64 = (0..i).map(|j| (lam[j] - cur[j]) as i64).sum();
            if prefix >= 0 {
                rec(rank, lam, p, cur, out);
            }
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let max_part = lam.first().copied().unwrap_or(0);
    rec(rank, lam, max_part, &mut Vec::with_capacity(rank), &mut out);
    out
}

/// Freudenthal multiplicities of all dominant weights of the irrep with highest weight `lam`.
pub(crate) fn dominant_multiplicities(rank: usize, lam: &[i32]) -> Vec<(Vec<i32>, i64)> {
    if rank == 0 {
        return vec![(Vec::new(), 1)];
    }
    let roots = positive_roots(rank);
    let rho: Vec<i32> = (0..rank).map(|i| (rank - i) as i32).collect();
    let lam_rho: Vec<i32> = lam.iter().zip(&rho).map(|(a, b)| a + b).collect();
    let norm_lam_rho = dot(&lam_rho, &lam_rho);

    let mut cands = dominant_candidates(rank, lam);
    cands.sort_by_key(|mu| (level(mu, lam), std::cmp::Reverse(mu.clone())));

    let mut mult: HashMap<Vec<i32>, i64> = HashMap::new();
    let mut out = Vec::new();
    for mu in cands {
        let m = if mu.as_slice() == lam {
            1
        } else {
            let mut num = 0i64;
            for alpha in &roots {
                let mut j = 1;
                loop {
                    let nu: Vec<i32> = mu.iter().zip(alpha).map(|(&x, &a)| x + j * a).collect();
                    let dnu = dominant_of(&nu);
                    if !dominated_by(&dnu, lam) {
                        break;
                    }
                    if let Some(&m_nu) = mult.get(&dnu) {
                        num += m_nu * dot(&nu, alpha);
                    }
                    j += 1;
                }
            }
            num *= 2;
            let mu_rho: Vec<i32> = mu.iter().zip(&rho).map(|(a, b)| a + b).collect();
            let den = norm_lam_rho - dot(&mu_rho, &mu_rho);
            assert!(den > 0, "Freudenthal denominator must be positive below the highest weight");
            assert_eq!(num % den, 0, "Freudenthal recursion must be integral");
            num / den
        };
        if m != 0 {
            mult.insert(mu.clone(), m);
            out.push((mu, m));
        }
    }
    out
}

/// All distinct signed permutations of a dominant weight.
pub(crate) fn weyl_orbit(mu: &[i32]) -> Vec<Vec<i32>> {
    let mut perms: BTreeSet<Vec<i32>> = BTreeSet::new();
    fn permute(rest: &mut Vec<i32>, cur: &mut Vec<i32>, out: &mut BTreeSet<Vec<i32>>) {
        if rest.is_empty() {
            out.insert(cur.clone());
            return;
        }
        let mut used = BTreeSet::new();
        for i in 0..rest.len() {
            if !used.insert(rest[i]) {
                continue;
            }
            let x = rest.remove(i);
            cur.push(x);
            permute(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    permute(&mut mu.to_vec(), &mut Vec::new(), &mut perms);
    let mut out = Vec::new();
    for p in perms {
        let nonzero: Vec<usize> = (0..p.len()).filter(|&i| p[i] != 0).collect();
        for mask in 0u32..(1 << nonzero.len()) {
            let mut v = p.clone();
            for (bit, &i) in nonzero.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    v[i] = -v[i];
                }
            }
            out.push(v);
        }
    }
    out
}

type WeightList = Arc<Vec<(Vec<i32>, i64)>>;
type Cache = RwLock<HashMap<(usize, Vec<u32>), WeightList>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Full weight list (with multiplicities) of the sp(n) irrep of highest weight `w`.
pub(crate) fn spn_weights(rank: usize, w: &SpnWeight) -> WeightList {
    let key = (rank, w.parts().to_vec());
    if let Some(hit) = cache().read().expect("weight cache poisoned").get(&key) {
        return Arc::clone(hit);
    }
    let lam = w.padded(rank);
    let mut all = Vec::new();
    for (mu, m) in dominant_multiplicities(rank, &lam) {
        for v in weyl_orbit(&mu) {
            all.push((v, m));
        }
    }
    all.sort();
    let arc = Arc::new(all);
    cache()
        .write()
        .expect("weight cache poisoned")
        .entry(key)
        .or_insert_with(|| Arc::clone(&arc));
    arc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labels::cn_dimension;

    #[test]
    fn orbit_sizes() {
        assert_eq!(weyl_orbit(&[1, 0]).len(), 4);
        assert_eq!(weyl_orbit(&[1, 1]).len(), 4);
        assert_eq!(weyl_orbit(&[2, 1, 0]).len(), 24);
        assert_eq!(weyl_orbit(&[0, 0]).len(), 1);
    }

    #[test]
    fn c2_adjoint_zero_weight() {
        // Sym²E for C₂: long and short roots plus a 2-dimensional zero weight space
        let m = dominant_multiplicities(2, &[2, 0]);
        let zero = m.iter().find(|(mu, _)| mu == &vec![0, 0]).unwrap().1;
        assert_eq!(zero, 2);
    }

    #[test]
    fn mass_matches_weyl_dimension() {
        for rank in 1..=4 {
            let mut parts_list = vec![vec![]];
            // all partitions of size <= 6 with <= rank parts
            for size in 1..=6u32 {
                for p in partitions(size, size) {
                    if p.len() <= rank {
                        parts_list.push(p);
                    }
                }
            }
            for p in parts_list {
                let w = SpnWeight::new(p.clone()).unwrap();
                let mass: i64 = spn_weights(rank, &w).iter().map(|(_, m)| *m).sum();
                assert_eq!(mass as u64, cn_dimension(rank, &w).unwrap(), "rank={rank} w={p:?}");
            }
        }
    }

    fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in (1..=max.min(n)).rev() {
            for mut rest in partitions(n - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
}
