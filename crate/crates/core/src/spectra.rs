//! Curvature terms and eigenvalue bounds as exact multiples of the scalar curvature `κ`.
//!
//! On the `π`-isotypic part, `Δ_π = D²_{R^{l,d}}|_π + κ φ(l,d) / (8n(n+2))` for any
//! admissible twist, so the best bound comes from the twist extremising `φ`.

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::Zero;
use serde::Serialize;
use serde_json::json;

use crate::cohomology::total_multiplicity_in_forms;
use crate::error::{QkError, Result};
use crate::labels::{IrrepLabel, QuatDim, TwistLabel};
use crate::twist::{extremal_twists, index, phi, ExtremalReport, Regime};

pub type Rational = Ratio<i64>;

/// A bound `λ ≥ c·κ` (positive regime) or `λ ≥ c·|κ|` (negative regime).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KappaCoefficient {
    pub value: Rational,
    pub regime: Regime,
}

impl KappaCoefficient {
    pub fn to_json(&self) -> serde_json::Value {
        json!({"num": *self.value.numer(), "den": *self.value.denom()})
    }
}

impl Serialize for KappaCoefficient {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

fn normaliser(n: QuatDim) -> i64 {
    let n = n.get() as i64;
    8 * n * (n + 2)
}

/// `φ(l,d) / (8n(n+2))`, the coefficient of `κ`.
pub fn curvature_term(n: QuatDim, tw: &TwistLabel) -> Rational {
    Rational::new(phi(n, tw), normaliser(n))
}

/// Laplace bound on a representation together with the twists realising it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaplaceBound {
    pub rep: IrrepLabel,
    pub coeff: KappaCoefficient,
    pub extremal: ExtremalReport,
}

impl LaplaceBound {
    pub fn to_json(&self) -> serde_json::Value {
        let tws: Vec<serde_json::Value> = self
            .extremal
            .twists
            .iter()
            .map(|t| json!({"l": t.l, "d": t.d}))
            .collect();
        json!({
            "rep": self.rep,
            "regime": self.coeff.regime,
            "bound_coeff": self.coeff.to_json(),
            "extremal_twist": tws,
        })
    }
}

/// Coefficient `c` with `λ(Δ_π) ≥ c·κ` for `κ > 0` or `c·|κ|` for `κ < 0`.
pub fn laplace_bound(n: QuatDim, rep: &IrrepLabel, regime: Regime) -> Result<LaplaceBound> {
    rep.validate(n)?;
    if total_multiplicity_in_forms(n, rep) == 0 {
        return Err(QkError::NotInForms(rep.to_string()));
    }
    let extremal = extremal_twists(n, rep, regime);
    let term = Rational::new(extremal.phi_value(), normaliser(n));
    let value = match regime {
        Regime::Positive => term,
        Regime::Negative => -term,
    };
    Ok(LaplaceBound {
        rep: *rep,
        coeff: KappaCoefficient { value, regime },
        extremal,
    })
}

/// Bound on `D²` restricted to `S_r`: `(n + 2 + r) / (4(n + 2))`.
///
/// Computed as `[φ(n+r, n-r) - φ(0,0)] / (8n(n+2))`: on `S_r` the untwisted
/// square differs from the one twisted by `R^{n+r,n-r}` by that curvature term.
pub fn dirac_bound_untwisted(n: QuatDim, r: u32) -> Result<KappaCoefficient> {
    if r > n.get() {
        return Err(QkError::OutOfRange {
            what: "spinor summand",
            detail: format!("r = {r} > n = {}", n.get()),
        });
    }
    let nn = n.get();
    let shifted = phi(n, &TwistLabel { l: nn + r, d: nn - r }) - phi(n, &TwistLabel { l: 0, d: 0 });
    Ok(KappaCoefficient {
        value: Rational::new(shifted, normaliser(n)),
        regime: Regime::Positive,
    })
}

/// A representation contributing to the kernel of a twisted Dirac square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelContributor {
    pub rep: IrrepLabel,
    pub min_eigenvalue: KappaCoefficient,
    pub index: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelDescription {
    pub twist: TwistLabel,
    pub regime: Regime,
    pub contributors: Vec<KernelContributor>,
    pub extrapolated: bool,
}

impl KernelDescription {
    /// `Σ index(π) · dim ker Δ_π` over the contributors; missing reps count as 0.
    pub fn symbolic_index(&self, kernel_dims: &BTreeMap<IrrepLabel, u64>) -> i64 {
        self.contributors
            .iter()
            .map(|c| c.index * kernel_dims.get(&c.rep).copied().unwrap_or(0) as i64)
            .sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("kernel description serializes");
        if self.extrapolated {
            v["note"] = json!("negative regime: extrapolated by the same extremal-twist argument with minimal twists");
        }
        v
    }
}

/// Representations whose extremal-twist set for the regime contains `tw`.
///
/// Admissibility forces `|k - l| <= n - b`, so `k <= l + n` bounds the search.
/// The negative regime is an extrapolation and must be requested explicitly.
pub fn dirac_kernel(n: QuatDim, tw: &TwistLabel, regime: Regime, allow_extrapolation: bool) -> Result<KernelDescription> {
    tw.validate(n)?;
    if regime == Regime::Negative && !allow_extrapolation {
        return Err(QkError::ExtrapolationNotEnabled);
    }
    let mut contributors = Vec::new();
    for rep in IrrepLabel::all(n, tw.l + n.get()) {
        let ext = extremal_twists(n, &rep, regime);
        if !ext.twists.iter().any(|t| t.twist() == *tw) {
            continue;
        }
        let term = curvature_term(n, tw);
        let value = match regime {
            Regime::Positive => term,
            Regime::Negative => -term,
        };
        contributors.push(KernelContributor {
            rep,
            min_eigenvalue: KappaCoefficient { value, regime },
            index: index(n, &rep, tw),
        });
    }
    Ok(KernelDescription {
        twist: *tw,
        regime,
        contributors,
        extrapolated: regime == Regime::Negative,
    })
}

/// Difference of curvature terms between two twists: `(φ(t̃) - φ(t)) / (8n(n+2))`.
pub fn twist_shift(n: QuatDim, from: &TwistLabel, to: &TwistLabel) -> Rational {
    curvature_term(n, to) - curvature_term(n, from)
}

/// True if every coefficient is nonnegative, as required of a bound.
pub fn is_nonnegative(c: &KappaCoefficient) -> bool {
    c.value >= Rational::zero()
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

    #[test]
    fn curvature_term_examples() {
        for n in 2..=6 {
            for d in 0..=n {
                assert!(curvature_term(qd(n), &TwistLabel { l: n - d, d }).is_zero());
            }
            assert_eq!(curvature_term(qd(n), &TwistLabel { l: 0, d: 0 }), Rational::new(-1, 8));
        }
        assert_eq!(curvature_term(qd(2), &TwistLabel { l: 4, d: 1 }), Rational::new(21, 64));
    }

    #[test]
    fn bound_examples() {
        for n in 2..=6 {
            let nn = n as i64;
            for r in 1..=n {
                let b = laplace_bound(qd(n), &rep(n, r, r, 0), Regime::Positive).unwrap();
                assert_eq!(b.coeff.value, Rational::new(r as i64 * (nn + 1), 2 * nn * (nn + 2)));
            }
            let b = laplace_bound(qd(n), &rep(n, 1, 1, 0), Regime::Negative).unwrap();
            assert_eq!(b.coeff.value, Rational::new(1, 2 * (nn + 2)));
            let b = laplace_bound(qd(n), &rep(n, 2, 0, 0), Regime::Positive).unwrap();
            assert_eq!(b.coeff.value, Rational::new(1, 2 * nn));
            let b = laplace_bound(qd(n), &rep(n, 2, 2, 0), Regime::Positive).unwrap();
            assert_eq!(b.coeff.value, Rational::new(nn + 1, nn * (nn + 2)));
        }
        assert!(matches!(
            laplace_bound(qd(2), &rep(2, 9, 0, 0), Regime::Positive),
            Err(QkError::NotInForms(_))
        ));
    }

    #[test]
    fn dirac_bound_values() {
        for n in 2..=6 {
            let nn = n as i64;
            assert_eq!(dirac_bound_untwisted(qd(n), 1).unwrap().value, Rational::new(nn + 3, 4 * (nn + 2)));
            assert_eq!(dirac_bound_untwisted(qd(n), 0).unwrap().value, Rational::new(1, 4));
            assert_eq!(dirac_bound_untwisted(qd(n), n).unwrap().value, Rational::new(2 * nn + 2, 4 * (nn + 2)));
            for r in 1..=n {
                assert!(dirac_bound_untwisted(qd(n), r).unwrap().value > dirac_bound_untwisted(qd(n), r - 1).unwrap().value);
            }
        }
        assert!(dirac_bound_untwisted(qd(2), 3).is_err());
    }

    #[test]
    fn kernel_examples() {
        let n = qd(3);
        let k = dirac_kernel(n, &TwistLabel { l: 1, d: 1 }, Regime::Positive, false).unwrap();
        assert!(k.contributors.is_empty());
        let k = dirac_kernel(n, &TwistLabel { l: 5, d: 0 }, Regime::Positive, false).unwrap();
        assert_eq!(k.contributors.len(), 1);
        assert_eq!(k.contributors[0].rep, rep(3, 2, 0, 0));
        assert_eq!(k.contributors[0].min_eigenvalue.value, Rational::new(1, 6));
        let k = dirac_kernel(n, &TwistLabel { l: 1, d: 2 }, Regime::Positive, false).unwrap();
        let reps: Vec<IrrepLabel> = k.contributors.iter().map(|c| c.rep).collect();
        assert_eq!(reps, vec![rep(3, 0, 0, 0), rep(3, 0, 1, 1), rep(3, 0, 2, 2)]);
        assert!(k.contributors.iter().all(|c| c.index == 1));
        assert!(matches!(
            dirac_kernel(n, &TwistLabel { l: 1, d: 2 }, Regime::Negative, false),
            Err(QkError::ExtrapolationNotEnabled)
        ));
        assert!(dirac_kernel(n, &TwistLabel { l: 1, d: 2 }, Regime::Negative, true).unwrap().extrapolated);
    }

    #[test]
    fn bound_json_shape() {
        let b = laplace_bound(qd(2), &rep(2, 2, 0, 0), Regime::Positive).unwrap();
        assert_eq!(
            b.to_json().to_string(),
            r#"{"bound_coeff":{"den":4,"num":1},"extremal_twist":[{"d":0,"l":4}],"regime":"positive","rep":{"a":0,"b":0,"k":2}}"#
        );
    }
}
