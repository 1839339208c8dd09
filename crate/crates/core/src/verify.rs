//! Closed forms checked against the weight oracle and exact operator models.
//!
//! Each suite sweeps a grid in parallel and returns its failures sorted by a
//! numeric key, so the first entry is the lexicographically smallest counterexample.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::cohomology::{
    betti_constraints, betti_from_kernel_dims, forms_decomposition_all, harmonic_candidates,
    total_multiplicity_in_forms,
};
use crate::error::{QkError, Result};
use crate::fusion::fuse_exterior;
use crate::labels::{IrrepLabel, QuatDim, SpnWeight, TwistLabel};
use crate::linalg::Q;
use crate::operators::{
    casimir_primitive_expected, casimir_qre, casimir_qrh, casimir_sym_expected, generators,
    half_square, hyper_intermediate, hyper_term_quartic_with, fourth_power, polarization_family,
    primitive_subspace, quartic_monomials, scalar_on, Space, SymplecticFrame,
};
use crate::oracle::{half_spinor_characters, tensor, HighestWeight, VirtualCharacter};
use crate::spectra::dirac_kernel;
use crate::twist::{
    default_l_max, extremal_bruteforce, index, is_admissible, maximal_twists, minimal_twists,
    multiplicity_set, stated_index_sign, ExtremeMode, Regime,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Fusion,
    Twists,
    Index,
    Extremal,
    Casimir,
    Hyper,
    Forms,
    Betti,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Fusion,
        Suite::Twists,
        Suite::Index,
        Suite::Extremal,
        Suite::Casimir,
        Suite::Hyper,
        Suite::Forms,
        Suite::Betti,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fusion => "fusion",
            Suite::Twists => "twists",
            Suite::Index => "index",
            Suite::Extremal => "extremal",
            Suite::Casimir => "casimir",
            Suite::Hyper => "hyper",
            Suite::Forms => "forms",
            Suite::Betti => "betti",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

/// Grid bounds. `k_max` and `l_max` default to `2n + 2` per `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub n_max: u32,
    pub k_max: Option<u32>,
    pub l_max: Option<u32>,
    pub betti_trials: usize,
    pub seed: u64,
}

/// Largest `n` any suite accepts.
pub const VERIFY_N_MAX: u32 = 4;

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n_max: 3,
            k_max: None,
            l_max: None,
            betti_trials: 1000,
            seed: 0x5eed,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if !(2..=VERIFY_N_MAX).contains(&self.n_max) {
            return Err(QkError::OutOfRange {
                what: "n_max",
                detail: format!("{} not in 2..={VERIFY_N_MAX}", self.n_max),
            });
        }
        Ok(())
    }

    fn ns(&self, cap: u32) -> Vec<QuatDim> {
        (2..=self.n_max.min(cap)).map(|n| QuatDim::new(n).expect("n >= 2")).collect()
    }

    fn k_max(&self, n: QuatDim) -> u32 {
        self.k_max.unwrap_or(2 * n.get() + 2)
    }

    fn l_max(&self, n: QuatDim) -> u32 {
        self.l_max.unwrap_or(2 * n.get() + 2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Failure {
    pub key: Vec<i64>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: u64,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&Failure> {
        self.failures.first()
    }
}

/// Accumulates checks and failures for one grid cell.
#[derive(Default)]
struct Tally {
    checks: u64,
    failures: Vec<Failure>,
}

impl Tally {
    fn check(&mut self, ok: bool, key: &[i64], detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(Failure {
                key: key.to_vec(),
                detail: detail(),
            });
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checks += other.checks;
        self.failures.extend(other.failures);
        self
    }
}

fn finish(suite: Suite, tallies: impl IntoIterator<Item = Tally>) -> SuiteReport {
    let t = tallies.into_iter().fold(Tally::default(), Tally::merge);
    let mut failures = t.failures;
    failures.sort();
    SuiteReport {
        suite,
        checks: t.checks,
        failures,
    }
}

fn key3(n: QuatDim, r: &IrrepLabel) -> Vec<i64> {
    vec![n.get() as i64, r.k() as i64, r.a() as i64, r.b() as i64]
}

fn key5(n: QuatDim, r: &IrrepLabel, t: &TwistLabel) -> Vec<i64> {
    let mut k = key3(n, r);
    k.extend([t.l as i64, t.d as i64]);
    k
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    Ok(match suite {
        Suite::Fusion => fusion_suite(cfg)?,
        Suite::Twists => twist_suite(cfg, false)?,
        Suite::Index => twist_suite(cfg, true)?,
        Suite::Extremal => extremal_suite(cfg)?,
        Suite::Casimir => casimir_suite(cfg)?,
        Suite::Hyper => hyper_suite(cfg)?,
        Suite::Forms => forms_suite(cfg)?,
        Suite::Betti => betti_suite(cfg)?,
    })
}

pub fn run_suites(suites: &[Suite], cfg: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    suites.iter().map(|&s| run_suite(s, cfg)).collect()
}

fn fusion_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let cells: Vec<(QuatDim, u32, u32)> = cfg
        .ns(VERIFY_N_MAX)
        .into_iter()
        .flat_map(|n| (0..=n.get()).flat_map(move |c| (0..=n.get()).map(move |d| (n, c, d))))
        .collect();
    let tallies: Vec<Tally> = cells
        .par_iter()
        .map(|&(n, c, d)| -> Result<Tally> {
            let mut t = Tally::default();
            let lc = VirtualCharacter::irreducible(n.rank(), HighestWeight::new(0, SpnWeight::fundamental(c)));
            let ld = VirtualCharacter::irreducible(n.rank(), HighestWeight::new(0, SpnWeight::fundamental(d)));
            let oracle = tensor(&lc, &ld)?;
            let mut want = VirtualCharacter::new(n.rank());
            for (a, b) in fuse_exterior(n, c, d)? {
                want.add(HighestWeight::new(0, SpnWeight::two_column(a, b)), 1);
            }
            let key = vec![n.get() as i64, c as i64, d as i64];
            t.check(oracle == want, &key, || format!("oracle {oracle:?} closed form {want:?}"));
            t.check(oracle.iter().all(|(_, m)| m == 1), &key, || "multiplicity above one".into());
            Ok(t)
        })
        .collect::<Result<_>>()?;
    Ok(finish(Suite::Fusion, tallies))
}

type SpinorTable = BTreeMap<TwistLabel, (VirtualCharacter, VirtualCharacter)>;

/// Oracle decompositions of `S⁺ ⊗ R` and `S⁻ ⊗ R` for all twists with `l <= l_max`.
pub fn spinor_twist_table(n: QuatDim, l_max: u32) -> Result<SpinorTable> {
    let (plus, minus) = half_spinor_characters(n);
    TwistLabel::all(n, l_max)
        .into_par_iter()
        .map(|tw| {
            let r = VirtualCharacter::twist(n, &tw);
            Ok((tw, (tensor(&plus, &r)?, tensor(&minus, &r)?)))
        })
        .collect()
}

fn twist_suite(cfg: &VerifyConfig, index_only: bool) -> Result<SuiteReport> {
    let mut tallies = Vec::new();
    for n in cfg.ns(VERIFY_N_MAX) {
        let table = spinor_twist_table(n, cfg.l_max(n))?;
        let reps = IrrepLabel::all(n, cfg.k_max(n));
        let t: Vec<Tally> = table
            .par_iter()
            .map(|(tw, (plus, minus))| {
                let mut t = Tally::default();
                for r in &reps {
                    let (p, m) = (plus.multiplicity_of(r), minus.multiplicity_of(r));
                    let key = key5(n, r, tw);
                    if index_only {
                        let got = index(n, r, tw);
                        t.check(got == p - m, &key, || format!("index {got}, oracle {p} - {m}"));
                    } else {
                        let adm = is_admissible(n, r, tw);
                        let card = multiplicity_set(n, r, tw).cardinality() as i64;
                        t.check(adm == (p + m > 0), &key, || format!("admissible {adm}, oracle multiplicity {}", p + m));
                        t.check(card == p + m, &key, || format!("interval size {card}, oracle {}", p + m));
                    }
                }
                t
            })
            .collect();
        tallies.extend(t);
    }
    Ok(finish(if index_only { Suite::Index } else { Suite::Twists }, tallies))
}

fn extremal_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut tallies = Vec::new();
    for n in cfg.ns(VERIFY_N_MAX) {
        let k_max = cfg.k_max(n);
        // extremal twists have l <= k + n
        let table = spinor_twist_table(n, k_max + n.get())?;
        let reps = IrrepLabel::all(n, k_max);
        let t: Vec<Tally> = reps
            .par_iter()
            .map(|r| -> Result<Tally> {
                let mut t = Tally::default();
                let lm = default_l_max(n, r);
                for (mode, rep) in [(ExtremeMode::Max, maximal_twists(n, r)), (ExtremeMode::Min, minimal_twists(n, r))] {
                    let brute = extremal_bruteforce(n, r, mode, lm)?;
                    let mut key = key3(n, r);
                    key.push(if mode == ExtremeMode::Max { 0 } else { 1 });
                    t.check(rep.twist_labels() == brute, &key, || {
                        format!("{mode:?}: closed form {:?}, brute force {brute:?}", rep.twist_labels())
                    });
                    for et in &rep.twists {
                        let tw = et.twist();
                        let key = key5(n, r, &tw);
                        let want = stated_index_sign(rep.class_tag, r, &tw);
                        t.check(et.index == want, &key, || format!("{:?} index {} expected {want}", rep.class_tag, et.index));
                        let (p, m) = table
                            .get(&tw)
                            .map(|(p, m)| (p.multiplicity_of(r), m.multiplicity_of(r)))
                            .expect("table covers l <= k + n");
                        t.check(p + m == 1, &key, || format!("multiplicity {} in S ⊗ R", p + m));
                        t.check(p - m == et.index, &key, || format!("oracle index {} vs {}", p - m, et.index));
                    }
                }
                Ok(t)
            })
            .collect::<Result<_>>()?;
        tallies.extend(t);
    }
    Ok(finish(Suite::Extremal, tallies))
}

fn commutator_tally(t: &mut Tally, space: &Space, cas: &crate::linalg::Matrix, key: &[i64]) {
    for ((p, r), g) in generators(space) {
        t.check(cas.commutator(&g).is_zero(), key, || format!("Casimir does not commute with generator ({p},{r})"));
    }
}

fn casimir_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    // (kind, n, degree): kind 0 = Sym, 1 = primitive Λ
    let mut cells: Vec<(u32, u32, u32)> = Vec::new();
    for n in cfg.ns(3) {
        cells.extend((0..=5).map(|l| (0, n.get(), l)));
    }
    for n in cfg.ns(4) {
        cells.extend((0..=n.get()).map(|d| (1, n.get(), d)));
    }
    let mut tallies: Vec<Tally> = cells
        .par_iter()
        .map(|&(kind, n, deg)| -> Result<Tally> {
            let mut t = Tally::default();
            let frame = SymplecticFrame::new(n as usize);
            let key = vec![kind as i64, n as i64, deg as i64];
            if kind == 0 {
                let space = Space::symmetric(frame, deg as usize);
                let cas = casimir_qre(&space)?;
                let want = casimir_sym_expected(n, deg);
                t.check(cas.as_scalar() == Some(want), &key, || format!("Sym: got {:?}, expected {want}", cas.as_scalar()));
                commutator_tally(&mut t, &space, &cas, &key);
            } else {
                let space = Space::exterior(frame, deg as usize)?;
                let cas = casimir_qre(&space)?;
                let prim = primitive_subspace(frame, deg as usize)?;
                let want = casimir_primitive_expected(n, deg);
                let got = scalar_on(&cas, &prim);
                t.check(got == Some(want), &key, || format!("primitive: got {got:?}, expected {want}"));
                commutator_tally(&mut t, &space, &cas, &key);
            }
            Ok(t)
        })
        .collect::<Result<_>>()?;
    let mut h = Tally::default();
    for k in 0..=6u32 {
        let want = -Q::new(k as i64 * (k as i64 + 2), 2);
        h.check(casimir_qrh(k) == want, &[2, 1, k as i64], || format!("q(R^H) on Sym^{k}H: {}", casimir_qrh(k)));
    }
    tallies.push(h);
    Ok(finish(Suite::Casimir, tallies))
}

fn hyper_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let cells: Vec<(u32, u32)> = cfg
        .ns(3)
        .into_iter()
        .flat_map(|n| (0..=2 * n.get()).map(move |d| (n.get(), d)))
        .collect();
    let mut tallies: Vec<Tally> = cells
        .par_iter()
        .map(|&(n, d)| -> Result<Tally> {
            let mut t = Tally::default();
            let frame = SymplecticFrame::new(n as usize);
            let space = Space::exterior(frame, d as usize)?;
            let gens = generators(&space);
            for (i, e) in polarization_family(frame).iter().enumerate() {
                let m = hyper_term_quartic_with(&space, &gens, &fourth_power(e));
                t.check(m.is_zero(), &[n as i64, d as i64, 0, i as i64], || "q(e^4/24) nonzero on forms".into());
            }
            for (i, quartic) in quartic_monomials(frame).iter().enumerate() {
                let m = hyper_term_quartic_with(&space, &gens, quartic);
                t.check(m.is_zero(), &[n as i64, d as i64, 1, i as i64], || format!("q({quartic:?}) nonzero on forms"));
            }
            Ok(t)
        })
        .collect::<Result<_>>()?;
    // the same product is nonzero off ΛE, and its factor is nonzero on Λ²E
    let mut t = Tally::default();
    for n in cfg.ns(3) {
        let frame = SymplecticFrame::new(n.get() as usize);
        let e = &polarization_family(frame)[0];
        let sym2 = Space::symmetric(frame, 2);
        t.check(!hyper_intermediate(&sym2, e).is_zero(), &[n.get() as i64, -1, 2], || {
            "(½e²)•(½e²)• vanishes on Sym²E".into()
        });
        let l2 = Space::exterior(frame, 2)?;
        t.check(!half_square(&l2, e).is_zero(), &[n.get() as i64, -1, 3], || "(½e²)• vanishes on Λ²E".into());
    }
    tallies.push(t);
    Ok(finish(Suite::Hyper, tallies))
}

fn forms_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut tallies = Vec::new();
    for n in cfg.ns(3) {
        let all = forms_decomposition_all(n)?;
        let mut t = Tally::default();
        let mut oracle: BTreeMap<IrrepLabel, i64> = BTreeMap::new();
        for ch in &all {
            for (hw, m) in ch.iter() {
                let r = hw.to_label(n).expect("forms decompose into labelled reps");
                *oracle.entry(r).or_default() += m;
            }
        }
        let grid: BTreeSet<IrrepLabel> = IrrepLabel::all(n, 2 * n.get()).into_iter().chain(oracle.keys().copied()).collect();
        for r in &grid {
            let want = oracle.get(r).copied().unwrap_or(0);
            let got = total_multiplicity_in_forms(n, r) as i64;
            t.check(got == want, &key3(n, r), || format!("count {got}, oracle {want}"));
        }
        for c in harmonic_candidates(n, Regime::Negative) {
            for (deg, ch) in all.iter().enumerate() {
                let m = ch.multiplicity_of(&c.rep);
                let want = i64::from(c.degrees.contains(&(deg as u32)));
                let mut key = key3(n, &c.rep);
                key.push(deg as i64);
                t.check(m == want, &key, || format!("multiplicity {m} in degree {deg}, expected {want}"));
            }
        }
        tallies.push(t);
    }
    Ok(finish(Suite::Forms, tallies))
}

/// Random kernel dimensions in `0..=max` for every candidate of the regime.
pub fn random_kernel_dims(n: QuatDim, regime: Regime, rng: &mut impl Rng, max: u64) -> BTreeMap<IrrepLabel, u64> {
    harmonic_candidates(n, regime)
        .into_iter()
        .map(|c| (c.rep, rng.gen_range(0..=max)))
        .collect()
}

fn betti_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut t = Tally::default();
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    for n in cfg.ns(VERIFY_N_MAX) {
        for regime in [Regime::Positive, Regime::Negative] {
            for trial in 0..cfg.betti_trials {
                let dims = random_kernel_dims(n, regime, &mut rng, 5);
                let table = betti_from_kernel_dims(n, regime, &dims)?;
                let rep = betti_constraints(regime, &table);
                let key = [n.get() as i64, (regime == Regime::Negative) as i64, trial as i64];
                t.check(rep.is_consistent(), &key, || format!("{:?} from {dims:?}", rep.violations));
            }
        }
        for trial in 0..cfg.betti_trials.min(100) {
            let dims = random_kernel_dims(n, Regime::Positive, &mut rng, 5);
            let table = betti_from_kernel_dims(n, Regime::Positive, &dims)?;
            for d in 0..=n.get() {
                let tw = TwistLabel { l: n.get() - d, d };
                let kd = dirac_kernel(n, &tw, Regime::Positive, false)?;
                let reps: Vec<IrrepLabel> = kd.contributors.iter().map(|c| c.rep).collect();
                let want: Vec<IrrepLabel> = (0..=d).map(|a| IrrepLabel::new(n, 0, a, a).expect("valid")).collect();
                let key = [n.get() as i64, 2, trial as i64, d as i64];
                t.check(reps == want, &key, || format!("contributors {reps:?}"));
                let sign = if d % 2 == 0 { 1 } else { -1 };
                let b = table.total(2 * d as i64) + table.total(2 * d as i64 - 2);
                let got = kd.symbolic_index(&dims);
                t.check(got == sign * b as i64, &key, || format!("index {got}, Betti side {}", sign * b as i64));
            }
        }
    }
    Ok(finish(Suite::Betti, [t]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn cheap_suites_pass_at_n2() {
        let cfg = VerifyConfig {
            n_max: 2,
            betti_trials: 50,
            ..VerifyConfig::default()
        };
        for s in [Suite::Fusion, Suite::Twists, Suite::Index, Suite::Extremal, Suite::Betti] {
            let r = run_suite(s, &cfg).unwrap();
            assert!(r.passed(), "{s}: {:?}", r.first_failure());
            assert!(r.checks > 0);
        }
    }

    #[test]
    fn config_bounds() {
        let cfg = VerifyConfig {
            n_max: 5,
            ..VerifyConfig::default()
        };
        assert!(run_suite(Suite::Fusion, &cfg).is_err());
    }

    #[test]
    fn failures_sorted_by_key() {
        let r = finish(
            Suite::Fusion,
            [Tally {
                checks: 2,
                failures: vec![
                    Failure { key: vec![3, 0], detail: String::new() },
                    Failure { key: vec![2, 5], detail: String::new() },
                ],
            }],
        );
        assert_eq!(r.first_failure().unwrap().key, vec![2, 5]);
    }
}
