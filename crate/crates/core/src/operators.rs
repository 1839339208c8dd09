//! Matrix models of the `sp(2n,ℂ) ≅ Sym²E` action on `ΛᵈE` and `SymˡE`.
//!
//! Basis of `E`: `e_i` has index `i`, `f_i` has index `n + i`, with
//! `σ(e_i, f_j) = δ_ij` and `σ(e_i, e_j) = σ(f_i, f_j) = 0`. An element
//! `uv ∈ Sym²E` acts on `E` by `(uv)•w = σ(u,w)v + σ(v,w)u` and on tensor
//! powers as a derivation.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::error::{QkError, Result};
use crate::linalg::{nullspace, q, Matrix, SparseVec, Q};

pub type OperatorMatrix = Matrix;

/// Homogeneous polynomial on `E`: sorted index multiset to coefficient.
pub type Poly = BTreeMap<Vec<usize>, Q>;

/// Symplectic basis `e_1..e_n, f_1..f_n` of `E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymplecticFrame {
    n: usize,
}

impl SymplecticFrame {
    /// Rank 1 is allowed so the same code models `H`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "symplectic frame needs n >= 1");
        SymplecticFrame { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn e(&self, i: usize) -> usize {
        assert!(i < self.n);
        i
    }

    pub fn f(&self, i: usize) -> usize {
        assert!(i < self.n);
        self.n + i
    }

    pub fn label(&self, p: usize) -> String {
        if p < self.n {
            format!("e{}", p + 1)
        } else {
            format!("f{}", p - self.n + 1)
        }
    }

    pub fn sigma(&self, p: usize, r: usize) -> i64 {
        let n = self.n;
        if p < n && r == p + n {
            1
        } else if p >= n && r + n == p {
            -1
        } else {
            0
        }
    }

    /// `#: E → E*`, `b_p ↦ σ(b_p, ·) = sign · ε_idx`.
    pub fn sharp(&self, p: usize) -> (i64, usize) {
        if p < self.n {
            (1, p + self.n)
        } else {
            (-1, p - self.n)
        }
    }

    /// `♭: E* → E`, inverse of `#`: `ε_{e_i} ↦ -f_i`, `ε_{f_i} ↦ e_i`.
    pub fn flat(&self, p: usize) -> (i64, usize) {
        if p < self.n {
            (-1, p + self.n)
        } else {
            (1, p - self.n)
        }
    }

    /// `σ(u, v)` for coordinate vectors.
    pub fn sigma_vec(&self, u: &[Q], v: &[Q]) -> Q {
        let mut s = Q::zero();
        for (p, &up) in u.iter().enumerate().take(self.dim()) {
            for (r, &vr) in v.iter().enumerate().take(self.dim()) {
                let x = self.sigma(p, r);
                if x != 0 {
                    s += up * vr * q(x);
                }
            }
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    Exterior,
    Symmetric,
}

/// `ΛᵈE` or `SymˡE` with lexicographically ordered monomial basis.
#[derive(Clone, Debug)]
pub struct Space {
    frame: SymplecticFrame,
    kind: SpaceKind,
    degree: usize,
    basis: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

fn monomials(dim: usize, degree: usize, strict: bool) -> Vec<Vec<usize>> {
    fn rec(dim: usize, left: usize, start: usize, strict: bool, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(dim, left - 1, if strict { i + 1 } else { i }, strict, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, degree, 0, strict, &mut Vec::new(), &mut out);
    out
}

impl Space {
    fn build(frame: SymplecticFrame, kind: SpaceKind, degree: usize) -> Self {
        let basis = monomials(frame.dim(), degree, kind == SpaceKind::Exterior);
        let index = basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Space {
            frame,
            kind,
            degree,
            basis,
            index,
        }
    }

    pub fn exterior(frame: SymplecticFrame, d: usize) -> Result<Self> {
        if d > frame.dim() {
            return Err(QkError::PowerTooLarge { k: d, dim: frame.dim() });
        }
        Ok(Self::build(frame, SpaceKind::Exterior, d))
    }

    pub fn symmetric(frame: SymplecticFrame, l: usize) -> Self {
        Self::build(frame, SpaceKind::Symmetric, l)
    }

    pub fn frame(&self) -> SymplecticFrame {
        self.frame
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<usize>] {
        &self.basis
    }

    pub fn index_of(&self, m: &[usize]) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Normalise a product of basis vectors: sorted index and sign (0 if it vanishes).
    fn normalise(&self, mut m: Vec<usize>) -> (i64, usize) {
        let mut sign = 1;
        // insertion sort, counting transpositions
        for i in 1..m.len() {
            let mut j = i;
            while j > 0 && m[j - 1] > m[j] {
                m.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if self.kind == SpaceKind::Exterior {
            if m.windows(2).any(|w| w[0] == w[1]) {
                return (0, 0);
            }
        } else {
            sign = 1;
        }
        (sign, self.index[&m])
    }

    /// Extend an endomorphism of `E` (given on basis vectors) as a derivation.
    pub fn derivation(&self, on_e: impl Fn(usize) -> Vec<(usize, Q)>) -> OperatorMatrix {
        let images: Vec<Vec<(usize, Q)>> = (0..self.frame.dim()).map(on_e).collect();
        let mut out = Matrix::zeros(self.dim(), self.dim());
        for (col, m) in self.basis.iter().enumerate() {
            for k in 0..m.len() {
                for &(r, c) in &images[m[k]] {
                    let mut w = m.clone();
                    w[k] = r;
                    let (s, row) = self.normalise(w);
                    if s != 0 {
                        out.add_entry(row, col, c * q(s));
                    }
                }
            }
        }
        out
    }
}

/// `(b_p b_q)•` on `E`, as images of basis vectors.
fn sym2_on_e(frame: SymplecticFrame, p: usize, r: usize) -> impl Fn(usize) -> Vec<(usize, Q)> {
    move |w| {
        let mut out = Vec::new();
        let a = frame.sigma(p, w);
        if a != 0 {
            out.push((r, q(a)));
        }
        let b = frame.sigma(r, w);
        if b != 0 {
            out.push((p, q(b)));
        }
        out
    }
}

/// Matrix of the generator `(b_p b_q)•` on the space.
pub fn act_sym2e(space: &Space, p: usize, r: usize) -> OperatorMatrix {
    space.derivation(sym2_on_e(space.frame, p, r))
}

/// Matrix of a general element `Σ c_pq b_p b_q` of `Sym²E`.
pub fn act_quadratic(space: &Space, x: &Poly) -> OperatorMatrix {
    let mut out = Matrix::zeros(space.dim(), space.dim());
    for (m, &c) in x {
        assert_eq!(m.len(), 2, "expected a quadratic monomial");
        out.add_scaled(&act_sym2e(space, m[0], m[1]), c);
    }
    out
}

/// All generator matrices, keyed by `(p, q)` with `p <= q`.
pub fn generators(space: &Space) -> BTreeMap<(usize, usize), OperatorMatrix> {
    let d = space.frame.dim();
    let mut out = BTreeMap::new();
    for p in 0..d {
        for r in p..d {
            out.insert((p, r), act_sym2e(space, p, r));
        }
    }
    out
}

fn gen_key(p: usize, r: usize) -> (usize, usize) {
    (p.min(r), p.max(r))
}

/// `x•y` for quadratic `x, y`: the Lie bracket of `Sym²E`.
pub fn bracket(frame: SymplecticFrame, x: &Poly, y: &Poly) -> Poly {
    let space = Space::symmetric(frame, 2);
    let mx = act_quadratic(&space, x);
    let mut v = SparseVec::new();
    for (m, &c) in y {
        v.insert(space.index_of(m).expect("quadratic monomial"), c);
    }
    mx.apply(&v)
        .into_iter()
        .map(|(i, c)| (space.basis()[i].clone(), c))
        .collect()
}

pub fn monomial(idx: &[usize]) -> Poly {
    let mut m = idx.to_vec();
    m.sort_unstable();
    Poly::from([(m, Q::one())])
}

fn casimir_unchecked(space: &Space) -> OperatorMatrix {
    let frame = space.frame;
    let gens = generators(space);
    let mut out = Matrix::zeros(space.dim(), space.dim());
    let quarter = Q::new(1, 4);
    for p in 0..frame.dim() {
        for r in 0..frame.dim() {
            let (sp, fp) = frame.flat(p);
            let (sr, fr) = frame.flat(r);
            let left = &gens[&gen_key(fp, fr)];
            let right = &gens[&gen_key(p, r)];
            out.add_scaled(&left.mul(right), quarter * q(sp * sr));
        }
    }
    out
}

/// `q(R^E) = ¼ Σ_{p,q} (♭ε_p ♭ε_q)•(b_p b_q)•`.
///
/// Capped at `n <= 4` on `ΛᵈE` and `n <= 3, l <= 6` on `SymˡE`.
pub fn casimir_qre(space: &Space) -> Result<OperatorMatrix> {
    let n = space.frame.n;
    let ok = match space.kind {
        SpaceKind::Exterior => n <= 4,
        SpaceKind::Symmetric => n <= 3 && space.degree <= 6,
    };
    if !ok {
        return Err(QkError::OutOfRange {
            what: "Casimir model size",
            detail: format!("{:?} degree {} with n = {n}", space.kind, space.degree),
        });
    }
    Ok(casimir_unchecked(space))
}

/// Eigenvalue of `q(R^H)` on `SymᵏH`, computed in the rank-one model.
pub fn casimir_qrh(k: u32) -> Q {
    let space = Space::symmetric(SymplecticFrame::new(1), k as usize);
    casimir_unchecked(&space)
        .as_scalar()
        .expect("Casimir is scalar on an irreducible")
}

/// `-l(n + l/2)`.
pub fn casimir_sym_expected(n: u32, l: u32) -> Q {
    let (n, l) = (n as i64, l as i64);
    -Q::new(l * (2 * n + l), 2)
}

/// `-d(n - d/2 + 1)`.
pub fn casimir_primitive_expected(n: u32, d: u32) -> Q {
    let (n, d) = (n as i64, d as i64);
    -Q::new(d * (2 * n - d + 2), 2)
}

/// Interior product with `ε_r` on `ΛᵈE → Λ^{d-1}E`.
fn interior(space: &Space, target: &Space, r: usize) -> Matrix {
    let mut out = Matrix::zeros(target.dim(), space.dim());
    for (col, m) in space.basis.iter().enumerate() {
        if let Some(k) = m.iter().position(|&x| x == r) {
            let mut w = m.clone();
            w.remove(k);
            let sign = if k % 2 == 0 { 1 } else { -1 };
            out.add_entry(target.index_of(&w).expect("lower degree monomial"), col, q(sign));
        }
    }
    out
}

/// `Σ_i ι(ε_{e_i}) ι(ε_{f_i}) : ΛᵈE → Λ^{d-2}E`; zero rows when `d < 2`.
pub fn sigma_contraction(space: &Space) -> OperatorMatrix {
    assert_eq!(space.kind, SpaceKind::Exterior, "contraction is defined on ΛE");
    let d = space.degree;
    if d < 2 {
        return Matrix::zeros(0, space.dim());
    }
    let frame = space.frame;
    let mid = Space::exterior(frame, d - 1).expect("lower degree");
    let low = Space::exterior(frame, d - 2).expect("lower degree");
    let mut out = Matrix::zeros(low.dim(), space.dim());
    for i in 0..frame.n {
        let step = interior(&mid, &low, frame.e(i)).mul(&interior(space, &mid, frame.f(i)));
        out.add_scaled(&step, Q::one());
    }
    out
}

/// Exact basis of `Λᵈ∘E`, the kernel of the σ-contraction.
pub fn primitive_subspace(frame: SymplecticFrame, d: usize) -> Result<Vec<SparseVec>> {
    let space = Space::exterior(frame, d)?;
    Ok(nullspace(&sigma_contraction(&space)))
}

/// `Some(c)` if `m v = c v` for every `v` in the list.
pub fn scalar_on(m: &Matrix, vs: &[SparseVec]) -> Option<Q> {
    let mut scalar: Option<Q> = None;
    for v in vs {
        let (&i, &x) = v.iter().next()?;
        let image = m.apply(v);
        let c = image.get(&i).copied().unwrap_or_else(Q::zero) / x;
        let want: SparseVec = v.iter().map(|(&j, &y)| (j, y * c)).filter(|(_, y)| !y.is_zero()).collect();
        if image != want || scalar.is_some_and(|s| s != c) {
            return None;
        }
        scalar = Some(c);
    }
    scalar
}

/// `∂/∂b_r` on a polynomial.
fn partial(poly: &Poly, r: usize) -> Poly {
    let mut out = Poly::new();
    for (m, &c) in poly {
        let mult = m.iter().filter(|&&x| x == r).count() as i64;
        if mult == 0 {
            continue;
        }
        let mut w = m.clone();
        let k = w.iter().position(|&x| x == r).unwrap();
        w.remove(k);
        let e = out.entry(w.clone()).or_insert_with(Q::zero);
        *e += c * q(mult);
        if e.is_zero() {
            out.remove(&w);
        }
    }
    out
}

/// `v⁴/24` expanded in monomials, for a coordinate vector `v`.
pub fn fourth_power(v: &[Q]) -> Poly {
    let mut out = Poly::new();
    for m in monomials(v.len(), 4, false) {
        let coeff = m.iter().fold(Q::one(), |acc, &i| acc * v[i]);
        if coeff.is_zero() {
            continue;
        }
        // multinomial count of orderings of m
        let mut counts: BTreeMap<usize, i64> = BTreeMap::new();
        for &i in &m {
            *counts.entry(i).or_default() += 1;
        }
        let denom: i64 = counts.values().map(|&k| (1..=k).product::<i64>()).product();
        out.insert(m, coeff * Q::new(24 / denom, 24));
    }
    out
}

/// `q(𝔕) = ¼ Σ_{p,q} (♭ε_p ♭ε_q)• (ι_{b_p#} ι_{b_q#} 𝔕)•` for a quartic `𝔕`,
/// contractions acting as derivations.
pub fn hyper_term_quartic(space: &Space, quartic: &Poly) -> OperatorMatrix {
    hyper_term_quartic_with(space, &generators(space), quartic)
}

/// [`hyper_term_quartic`] with the generator matrices of `space` supplied.
pub fn hyper_term_quartic_with(
    space: &Space,
    gens: &BTreeMap<(usize, usize), OperatorMatrix>,
    quartic: &Poly,
) -> OperatorMatrix {
    let frame = space.frame;
    let mut out = Matrix::zeros(space.dim(), space.dim());
    let quarter = Q::new(1, 4);
    for p in 0..frame.dim() {
        let (shp, ip) = frame.sharp(p);
        let dp = partial(quartic, ip);
        if dp.is_empty() {
            continue;
        }
        for r in 0..frame.dim() {
            let (shr, ir) = frame.sharp(r);
            let quad = partial(&dp, ir);
            if quad.is_empty() {
                continue;
            }
            let mut right = Matrix::zeros(space.dim(), space.dim());
            for (m, &c) in &quad {
                right.add_scaled(&gens[&gen_key(m[0], m[1])], c);
            }
            let (sp, fp) = frame.flat(p);
            let (sr, fr) = frame.flat(r);
            let left = &gens[&gen_key(fp, fr)];
            out.add_scaled(&left.mul(&right), quarter * q(sp * sr * shp * shr));
        }
    }
    out
}

/// `q(e⁴/24)` on the space.
pub fn hyper_term(space: &Space, e: &[Q]) -> OperatorMatrix {
    hyper_term_quartic(space, &fourth_power(e))
}

/// `(½e²)•`.
pub fn half_square(space: &Space, e: &[Q]) -> OperatorMatrix {
    let mut sq = Poly::new();
    for i in 0..e.len() {
        for j in i..e.len() {
            let c = e[i] * e[j] * if i == j { Q::new(1, 2) } else { Q::one() };
            if !c.is_zero() {
                sq.insert(vec![i, j], c);
            }
        }
    }
    act_quadratic(space, &sq)
}

/// `(½e²)•(½e²)•`, the product that the hyper term reduces to up to a factor ½.
pub fn hyper_intermediate(space: &Space, e: &[Q]) -> OperatorMatrix {
    let h = half_square(space, e);
    h.mul(&h)
}

/// Basis vectors and their pairwise sums.
///
/// Their fourth powers miss monomials with four distinct indices, so full
/// coverage of `Sym⁴E` comes from [`quartic_monomials`] instead.
pub fn polarization_family(frame: SymplecticFrame) -> Vec<Vec<Q>> {
    let d = frame.dim();
    let unit = |i: usize| -> Vec<Q> { (0..d).map(|j| if i == j { Q::one() } else { Q::zero() }).collect() };
    let mut out: Vec<Vec<Q>> = (0..d).map(unit).collect();
    for i in 0..d {
        for j in i + 1..d {
            let mut v = unit(i);
            v[j] = Q::one();
            out.push(v);
        }
    }
    out
}

/// All degree-4 monomials on `E`.
pub fn quartic_monomials(frame: SymplecticFrame) -> Vec<Poly> {
    monomials(frame.dim(), 4, false).into_iter().map(|m| monomial(&m)).collect()
}
