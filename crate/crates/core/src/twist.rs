//! Admissible twists, index multiplicities, and extremal twists.
//!
//! For an irreducible `π = Symᵏ H ⊗ Λ_top^{a,b}E` and a twist `R^{l,d}`, the
//! multiplicity of `π` in `S ⊗ R^{l,d}` is the number of `c` with
//! `c ≡ a + b + d (mod 2)` and
//!
//! ```text
//! max{b + |a-d|, n-k-l} <= c <= n - max{|k-l|, |n-a+b-d|}
//! ```
//!
//! provided `k + a + b ≡ n + l + d (mod 2)`; otherwise it is zero. Each such
//! `c` comes from the summand `S_{n-c}` of the spinor module, which lies in `S⁺`
//! exactly when `c` is even.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{QkError, Result};
use crate::labels::{IrrepLabel, QuatDim, TwistLabel};

/// Sign of the scalar curvature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Positive,
    Negative,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Positive => "positive",
            Regime::Negative => "negative",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Regime {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "pos" | "positive" | "+" => Ok(Regime::Positive),
            "neg" | "negative" | "-" => Ok(Regime::Negative),
            other => Err(format!("unknown regime '{other}', expected pos|neg")),
        }
    }
}

/// Which extremum of `φ` is sought.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremeMode {
    Max,
    Min,
}

impl ExtremeMode {
    /// Maximal twists govern positive curvature, minimal twists negative curvature.
    pub fn regime(self) -> Regime {
        match self {
            ExtremeMode::Max => Regime::Positive,
            ExtremeMode::Min => Regime::Negative,
        }
    }
}

impl From<Regime> for ExtremeMode {
    fn from(r: Regime) -> Self {
        match r {
            Regime::Positive => ExtremeMode::Max,
            Regime::Negative => ExtremeMode::Min,
        }
    }
}

impl std::str::FromStr for ExtremeMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "max" => Ok(ExtremeMode::Max),
            "min" => Ok(ExtremeMode::Min),
            other => Err(format!("unknown mode '{other}', expected max|min")),
        }
    }
}

/// `{c : lo <= c <= hi, c ≡ parity (mod 2)}`; empty iff `lo > hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityInterval {
    pub lo: i64,
    pub hi: i64,
    pub parity: u8,
}

impl MultiplicityInterval {
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, c: i64) -> bool {
        self.lo <= c && c <= self.hi && c.rem_euclid(2) == self.parity as i64
    }

    pub fn cardinality(&self) -> u32 {
        if self.is_empty() {
            return 0;
        }
        (self.lo..=self.hi).filter(|&c| self.contains(c)).count() as u32
    }

    pub fn elements(&self) -> Vec<i64> {
        if self.is_empty() {
            return Vec::new();
        }
        (self.lo..=self.hi).filter(|&c| self.contains(c)).collect()
    }
}

fn ints(n: QuatDim, rep: &IrrepLabel, tw: &TwistLabel) -> (i64, i64, i64, i64, i64, i64) {
    (
        n.get() as i64,
        rep.k() as i64,
        rep.a() as i64,
        rep.b() as i64,
        tw.l as i64,
        tw.d as i64,
    )
}

/// `k + a + b ≡ n + l + d (mod 2)`.
pub fn congruence_ok(n: QuatDim, rep: &IrrepLabel, tw: &TwistLabel) -> bool {
    let (n, k, a, b, l, d) = ints(n, rep, tw);
    (k + a + b - n - l - d).rem_euclid(2) == 0
}

/// `Hom(π, S ⊗ R^{l,d}) ≠ 0`, via the three inequalities and the congruence.
pub fn is_admissible(n: QuatDim, rep: &IrrepLabel, tw: &TwistLabel) -> bool {
    if !congruence_ok(n, rep, tw) {
        return false;
    }
    let (n, k, a, b, l, d) = ints(n, rep, tw);
    b <= d && (k - l).abs() + (a - d).abs() <= n - b && (n - a + b - d).abs() <= k + l
}

/// The set of spinor degrees `c` contributing `π` to `S ⊗ R^{l,d}`.
pub fn multiplicity_set(n: QuatDim, rep: &IrrepLabel, tw: &TwistLabel) -> MultiplicityInterval {
    let congruent = congruence_ok(n, rep, tw);
    let (n, k, a, b, l, d) = ints(n, rep, tw);
    let lo = (b + (a - d).abs()).max(n - k - l);
    let hi = n - (k - l).abs().max((n - a + b - d).abs());
    let parity = (a + b + d).rem_euclid(2) as u8;
    if !congruent {
        return MultiplicityInterval {
            lo: hi + 1,
            hi,
            parity,
        };
    }
    debug_assert!(lo > hi || (lo.rem_euclid(2) == parity as i64 && hi.rem_euclid(2) == parity as i64));
    MultiplicityInterval { lo, hi, parity }
}

/// Multiplicity in `S⁺ ⊗ R` minus multiplicity in `S⁻ ⊗ R`; zero when `R` is not admissible.
pub fn index(n: QuatDim, rep: &IrrepLabel, tw: &TwistLabel) -> i64 {
    let m = multiplicity_set(n, rep, tw);
    let card = m.cardinality() as i64;
    // every contributing c has parity a+b+d, and S_{n-c} ⊂ S⁺ iff c is even
    if m.parity == 0 {
        card
    } else {
        -card
    }
}

/// `(-1)^{a+b+d}/2 · (n + 2 - max{|k-l|, |n-a+b-d|} - max{b+|a-d|, n-k-l})`.
///
/// Agrees with [`index`] on admissible twists; it is not meaningful elsewhere.
pub fn index_closed_form(n: QuatDim, rep: &IrrepLabel, tw: &TwistLabel) -> Ratio<i64> {
    let (n, k, a, b, l, d) = ints(n, rep, tw);
    let sign = if (a + b + d).rem_euclid(2) == 0 { 1 } else { -1 };
    let inner = n + 2 - (k - l).abs().max((n - a + b - d).abs()) - (b + (a - d).abs()).max(n - k - l);
    Ratio::new(sign * inner, 2)
}

/// `φ(l, d) = (l + d - n)(l - d + n + 2)`.
pub fn phi(n: QuatDim, tw: &TwistLabel) -> i64 {
    let (n, l, d) = (n.get() as i64, tw.l as i64, tw.d as i64);
    (l + d - n) * (l - d + n + 2)
}

/// Case of the extremal-twist classification a representation falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtremalClass {
    MaxGeneric,
    MaxSpecial,
    MinClass1,
    MinClass2,
    MinClass3,
    MinClass4,
}

/// One extremal twist together with its `φ` value and index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalTwist {
    pub l: u32,
    pub d: u32,
    pub phi: i64,
    pub index: i64,
}

impl ExtremalTwist {
    pub fn twist(&self) -> TwistLabel {
        TwistLabel { l: self.l, d: self.d }
    }
}

/// Maximal or minimal twists of a representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalReport {
    pub rep: IrrepLabel,
    pub regime: Regime,
    #[serde(rename = "class")]
    pub class_tag: ExtremalClass,
    pub twists: Vec<ExtremalTwist>,
}

impl ExtremalReport {
    fn build(n: QuatDim, rep: IrrepLabel, regime: Regime, class_tag: ExtremalClass, mut tws: Vec<TwistLabel>) -> Self {
        tws.sort_by_key(|t| (t.d, t.l));
        let twists = tws
            .into_iter()
            .map(|t| ExtremalTwist {
                l: t.l,
                d: t.d,
                phi: phi(n, &t),
                index: index(n, &rep, &t),
            })
            .collect();
        ExtremalReport {
            rep,
            regime,
            class_tag,
            twists,
        }
    }

    pub fn twist_labels(&self) -> Vec<TwistLabel> {
        self.twists.iter().map(ExtremalTwist::twist).collect()
    }

    pub fn indices(&self) -> Vec<i64> {
        self.twists.iter().map(|t| t.index).collect()
    }

    /// Common `φ` of all extremal twists.
    pub fn phi_value(&self) -> i64 {
        self.twists[0].phi
    }
}

/// Index of an extremal twist as predicted by its class: `(-1)^b` for the
/// generic maximal and first minimal class, `(-1)^{k+d}` for the second,
/// `(-1)^d` for the special maximal and third class, `(-1)^a` for the fourth.
pub fn stated_index_sign(class: ExtremalClass, rep: &IrrepLabel, tw: &TwistLabel) -> i64 {
    let e = match class {
        ExtremalClass::MaxGeneric | ExtremalClass::MinClass1 => rep.b(),
        ExtremalClass::MinClass2 => rep.k() + tw.d,
        ExtremalClass::MaxSpecial | ExtremalClass::MinClass3 => tw.d,
        ExtremalClass::MinClass4 => rep.a(),
    };
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Maximal twists: `R^{k+n-b, a}` when `k > 0` or `a > b`, otherwise `R^{n-d, d}` for `d = a..=n`.
pub fn maximal_twists(n: QuatDim, rep: &IrrepLabel) -> ExtremalReport {
    let (nn, k, a, b) = (n.get(), rep.k(), rep.a(), rep.b());
    if k > 0 || a > b {
        ExtremalReport::build(
            n,
            *rep,
            Regime::Positive,
            ExtremalClass::MaxGeneric,
            vec![TwistLabel { l: k + nn - b, d: a }],
        )
    } else {
        ExtremalReport::build(
            n,
            *rep,
            Regime::Positive,
            ExtremalClass::MaxSpecial,
            antidiagonal(nn, a, nn),
        )
    }
}

fn antidiagonal(n: u32, d_lo: u32, d_hi: u32) -> Vec<TwistLabel> {
    (d_lo..=d_hi).map(|d| TwistLabel { l: n - d, d }).collect()
}

/// Minimal twists, dispatched over the four classes in order.
pub fn minimal_twists(n: QuatDim, rep: &IrrepLabel) -> ExtremalReport {
    let (nn, k, a, b) = (n.get(), rep.k(), rep.a(), rep.b());
    let threshold = (nn - a) + (nn - b);
    let (class, tws) = if k > threshold {
        (ExtremalClass::MinClass1, vec![TwistLabel { l: k + b - nn, d: a }])
    } else if k == threshold && !(k == 0 && a == b) {
        (ExtremalClass::MinClass2, antidiagonal(nn, b, a))
    } else if k == 0 && a == b {
        let special = antidiagonal(nn, a, nn);
        if a == nn {
            // k = 0, a = b = n is also in the second class; both give {(0, n)}
            assert_eq!(special, antidiagonal(nn, b, a));
        }
        (ExtremalClass::MinClass3, special)
    } else {
        let l = (nn as i64 - a as i64 - k as i64).unsigned_abs() as u32;
        (ExtremalClass::MinClass4, vec![TwistLabel { l, d: b }])
    };
    ExtremalReport::build(n, *rep, Regime::Negative, class, tws)
}

/// Extremal twists for the regime: maximal for positive, minimal for negative curvature.
pub fn extremal_twists(n: QuatDim, rep: &IrrepLabel, regime: Regime) -> ExtremalReport {
    match regime {
        Regime::Positive => maximal_twists(n, rep),
        Regime::Negative => minimal_twists(n, rep),
    }
}

/// Default search bound `k + n + 2`: admissibility forces `|k - l| <= n - b`, so `l <= k + n`.
pub fn default_l_max(n: QuatDim, rep: &IrrepLabel) -> u32 {
    rep.k() + n.get() + 2
}

/// Arg-extremum of `φ` over all admissible twists with `l <= l_max`, sorted by `d`.
pub fn extremal_bruteforce(
    n: QuatDim,
    rep: &IrrepLabel,
    mode: ExtremeMode,
    l_max: u32,
) -> Result<Vec<TwistLabel>> {
    if l_max < rep.k() + n.get() {
        return Err(QkError::OutOfRange {
            what: "brute-force bound",
            detail: format!("l_max = {l_max} < k + n = {}", rep.k() + n.get()),
        });
    }
    let admissible: Vec<(TwistLabel, i64)> = TwistLabel::all(n, l_max)
        .into_iter()
        .filter(|t| is_admissible(n, rep, t))
        .map(|t| (t, phi(n, &t)))
        .collect();
    assert!(!admissible.is_empty(), "every irreducible has an admissible twist");
    let best = match mode {
        ExtremeMode::Max => admissible.iter().map(|(_, p)| *p).max(),
        ExtremeMode::Min => admissible.iter().map(|(_, p)| *p).min(),
    }
    .expect("nonempty");
    let mut out: Vec<TwistLabel> = admissible
        .into_iter()
        .filter(|(_, p)| *p == best)
        .map(|(t, _)| t)
        .collect();
    out.sort_by_key(|t| (t.d, t.l));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qd(n: u32) -> QuatDim {
        QuatDim::new(n).unwrap()
    }
    fn rep(n: u32, k: u32, a: u32, b: u32) -> IrrepLabel {
        IrrepLabel::new(qd(n), k, a, b).unwrap()
    }
    fn tw(l: u32, d: u32) -> TwistLabel {
        TwistLabel { l, d }
    }

    /// Direct enumeration of the raw constraint system over c = 0..=n.
    fn raw_count(n: QuatDim, r: &IrrepLabel, t: &TwistLabel) -> u32 {
        let (n, k, a, b, l, d) = ints(n, r, t);
        (0..=n)
            .filter(|&c| {
                (k - n - c - l).rem_euclid(2) == 0
                    && k <= n - c + l
                    && k >= (n - c - l).abs()
                    && (a + b - c - d).rem_euclid(2) == 0
                    && a + b <= c + d
                    && a - b >= (c - d).abs()
                    && a - b <= 2 * n - c - d
            })
            .count() as u32
    }

    #[test]
    fn congruence_examples() {
        assert!(congruence_ok(qd(2), &rep(2, 0, 0, 0), &tw(2, 0)));
        assert!(!congruence_ok(qd(2), &rep(2, 0, 0, 0), &tw(1, 0)));
        assert!(congruence_ok(qd(3), &rep(3, 1, 2, 1), &tw(3, 2)));
    }

    #[test]
    fn admissibility_examples() {
        assert!(!is_admissible(qd(2), &rep(2, 0, 1, 1), &tw(0, 0)));
        for n in 2..=5 {
            for r in IrrepLabel::all(qd(n), 2 * n + 2) {
                let (k, a, b) = (r.k(), r.a(), r.b());
                assert!(is_admissible(qd(n), &r, &tw(k + n - b, a)));
                let l = (n as i64 - a as i64 - k as i64).unsigned_abs() as u32;
                assert!(is_admissible(qd(n), &r, &tw(l, b)));
            }
        }
    }

    #[test]
    fn interval_matches_raw_constraints() {
        for n in 2..=5 {
            let n = qd(n);
            for r in IrrepLabel::all(n, 2 * n.get() + 3) {
                for t in TwistLabel::all(n, 2 * n.get() + 3) {
                    let m = multiplicity_set(n, &r, &t);
                    assert_eq!(m.cardinality(), raw_count(n, &r, &t), "{r} {t}");
                    assert_eq!(!m.is_empty(), is_admissible(n, &r, &t), "{r} {t}");
                    if is_admissible(n, &r, &t) {
                        assert_eq!(Ratio::from_integer(index(n, &r, &t)), index_closed_form(n, &r, &t));
                        assert_eq!(m.lo.rem_euclid(2), m.parity as i64);
                        assert_eq!(m.hi.rem_euclid(2), m.parity as i64);
                    } else {
                        assert_eq!(index(n, &r, &t), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn multiplicity_examples() {
        let m = multiplicity_set(qd(2), &rep(2, 0, 0, 0), &tw(2, 0));
        assert_eq!((m.lo, m.hi, m.cardinality()), (0, 0, 1));
        assert!(multiplicity_set(qd(2), &rep(2, 0, 0, 0), &tw(1, 0)).is_empty());
    }

    #[test]
    fn phi_examples() {
        for n in 2..=6 {
            for d in 0..=n {
                assert_eq!(phi(qd(n), &tw(n - d, d)), 0);
            }
            assert_eq!(phi(qd(n), &tw(0, 0)), -((n * (n + 2)) as i64));
        }
        assert_eq!(phi(qd(2), &tw(4, 1)), 21);
    }

    #[test]
    fn maximal_examples() {
        let r = maximal_twists(qd(2), &rep(2, 1, 1, 0));
        assert_eq!(r.class_tag, ExtremalClass::MaxGeneric);
        assert_eq!(r.twist_labels(), vec![tw(3, 1)]);
        assert_eq!(r.indices(), vec![1]);

        let r = maximal_twists(qd(3), &rep(3, 0, 1, 1));
        assert_eq!(r.class_tag, ExtremalClass::MaxSpecial);
        assert_eq!(r.twist_labels(), vec![tw(2, 1), tw(1, 2), tw(0, 3)]);
        assert_eq!(r.indices(), vec![-1, 1, -1]);

        let r = maximal_twists(qd(2), &IrrepLabel::TRIVIAL);
        assert_eq!(r.twist_labels(), vec![tw(2, 0), tw(1, 1), tw(0, 2)]);
        assert_eq!(r.phi_value(), 0);
    }

    #[test]
    fn minimal_examples() {
        let r = minimal_twists(qd(2), &rep(2, 5, 2, 1));
        assert_eq!(r.class_tag, ExtremalClass::MinClass1);
        assert_eq!(r.twist_labels(), vec![tw(4, 2)]);
        assert_eq!(r.indices(), vec![-1]);

        let r = minimal_twists(qd(2), &rep(2, 1, 2, 1));
        assert_eq!(r.class_tag, ExtremalClass::MinClass2);
        assert_eq!(r.twist_labels(), vec![tw(1, 1), tw(0, 2)]);
        assert_eq!(r.indices(), vec![1, -1]);

        let r = minimal_twists(qd(3), &rep(3, 1, 1, 0));
        assert_eq!(r.class_tag, ExtremalClass::MinClass4);
        assert_eq!(r.twist_labels(), vec![tw(1, 0)]);
        assert_eq!(r.indices(), vec![-1]);

        let r = minimal_twists(qd(3), &rep(3, 0, 3, 3));
        assert_eq!(r.class_tag, ExtremalClass::MinClass3);
        assert_eq!(r.twist_labels(), vec![tw(0, 3)]);
    }

    #[test]
    fn closed_forms_match_bruteforce() {
        for n in 2..=5 {
            let n = qd(n);
            for r in IrrepLabel::all(n, 2 * n.get() + 2) {
                let lm = default_l_max(n, &r);
                let mx = maximal_twists(n, &r);
                assert_eq!(mx.twist_labels(), extremal_bruteforce(n, &r, ExtremeMode::Max, lm).unwrap(), "max {r}");
                let mn = minimal_twists(n, &r);
                assert_eq!(mn.twist_labels(), extremal_bruteforce(n, &r, ExtremeMode::Min, lm).unwrap(), "min {r}");
                for rep in [&mx, &mn] {
                    assert!(rep.twists.iter().all(|t| t.phi == rep.phi_value()));
                    assert!(rep.twists.iter().all(|t| t.index.abs() == 1));
                }
            }
        }
    }

    #[test]
    fn bruteforce_bound_is_checked() {
        let r = rep(2, 3, 0, 0);
        assert!(extremal_bruteforce(qd(2), &r, ExtremeMode::Max, 4).is_err());
    }

    #[test]
    fn report_json_shape() {
        let r = maximal_twists(qd(2), &rep(2, 1, 1, 0));
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"rep":{"k":1,"a":1,"b":0},"regime":"positive","class":"MaxGeneric","twists":[{"l":3,"d":1,"phi":12,"index":1}]}"#
        );
    }
}
