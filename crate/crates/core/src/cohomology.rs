//! Form-space bookkeeping: decomposition of `Λᵏ(H⊗E)`, harmonic candidates,
//! and the Betti-number constraints they imply.

use std::collections::BTreeMap;
use std::io::Read;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QkError, Result};
use crate::labels::{IrrepLabel, QuatDim, TwistLabel};
use crate::oracle::{decompose, exterior_algebra, exterior_power, tangent_weights, VirtualCharacter};
use crate::twist::{multiplicity_set, Regime};

/// Largest `n` for which the forms are decomposed through the weight oracle.
pub const FORMS_N_MAX: u32 = 4;

fn check_oracle_range(n: QuatDim) -> Result<()> {
    if n.get() > FORMS_N_MAX {
        return Err(QkError::OutOfRange {
            what: "forms decomposition",
            detail: format!("n = {} exceeds {FORMS_N_MAX}", n.get()),
        });
    }
    Ok(())
}

/// Irreducible decomposition of `Λᵏ(H⊗E)`.
pub fn forms_decomposition(n: QuatDim, k: u32) -> Result<VirtualCharacter> {
    check_oracle_range(n)?;
    decompose(&exterior_power(&tangent_weights(n), k as usize)?)
}

/// Decompositions of all `Λᵏ(H⊗E)`, `k = 0..=4n`.
pub fn forms_decomposition_all(n: QuatDim) -> Result<Vec<VirtualCharacter>> {
    check_oracle_range(n)?;
    exterior_algebra(&tangent_weights(n))?
        .par_iter()
        .map(decompose)
        .collect()
}

/// Multiplicity of `rep` in `Λ•(H⊗E)`, as `Σ_r #𝔐(rep, R^{r,n-r})`.
pub fn total_multiplicity_in_forms(n: QuatDim, rep: &IrrepLabel) -> u32 {
    (0..=n.get())
        .map(|r| multiplicity_set(n, rep, &TwistLabel { l: r, d: n.get() - r }).cardinality())
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CandidateFamily {
    /// `Λ_top^{a,a}E`
    Sp1Invariant,
    /// `Sym^{2n-a-b}H ⊗ Λ_top^{a,b}E`
    Exceptional,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HarmonicCandidate {
    pub rep: IrrepLabel,
    pub family: CandidateFamily,
    pub degrees: Vec<u32>,
    pub total_multiplicity: u32,
}

fn candidate(n: QuatDim, rep: IrrepLabel, family: CandidateFamily) -> HarmonicCandidate {
    let nn = n.get();
    let (a, b) = (rep.a(), rep.b());
    let degrees: Vec<u32> = match family {
        CandidateFamily::Sp1Invariant => (2 * a..=4 * nn - 2 * a).step_by(4).collect(),
        CandidateFamily::Exceptional => (2 * nn - a + b..=2 * nn + a - b).step_by(2).collect(),
    };
    let total_multiplicity = degrees.len() as u32;
    HarmonicCandidate {
        rep,
        family,
        degrees,
        total_multiplicity,
    }
}

/// Reps that can carry harmonic forms in the given regime, sorted by label.
///
/// `(0, n, n)` lies in both families and is listed once, as sp(1)-invariant.
pub fn harmonic_candidates(n: QuatDim, regime: Regime) -> Vec<HarmonicCandidate> {
    let nn = n.get();
    let mut out: BTreeMap<IrrepLabel, HarmonicCandidate> = BTreeMap::new();
    for a in 0..=nn {
        let rep = IrrepLabel::new(n, 0, a, a).expect("valid label");
        out.insert(rep, candidate(n, rep, CandidateFamily::Sp1Invariant));
    }
    if regime == Regime::Negative {
        for a in 0..=nn {
            for b in 0..=a {
                let rep = IrrepLabel::new(n, 2 * nn - a - b, a, b).expect("valid label");
                out.entry(rep)
                    .or_insert_with(|| candidate(n, rep, CandidateFamily::Exceptional));
            }
        }
    }
    out.into_values().collect()
}

/// Betti numbers in degrees `0..=4n`, split into sp(1)-invariant and exceptional parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    n: QuatDim,
    sp1: Vec<u64>,
    expt: Vec<u64>,
}

impl BettiTable {
    pub fn zeros(n: QuatDim) -> Self {
        let len = 4 * n.get() as usize + 1;
        BettiTable {
            n,
            sp1: vec![0; len],
            expt: vec![0; len],
        }
    }

    pub fn n(&self) -> QuatDim {
        self.n
    }

    pub fn top_degree(&self) -> u32 {
        4 * self.n.get()
    }

    pub fn set(&mut self, degree: u32, sp1: u64, expt: u64) {
        self.sp1[degree as usize] = sp1;
        self.expt[degree as usize] = expt;
    }

    /// `b_{sp(1),k}`; zero outside `0..=4n`.
    pub fn sp1(&self, k: i64) -> u64 {
        usize::try_from(k).ok().and_then(|k| self.sp1.get(k)).copied().unwrap_or(0)
    }

    /// `b_{expt,k}`; zero outside `0..=4n`.
    pub fn expt(&self, k: i64) -> u64 {
        usize::try_from(k).ok().and_then(|k| self.expt.get(k)).copied().unwrap_or(0)
    }

    /// `b_k`.
    pub fn total(&self, k: i64) -> u64 {
        self.sp1(k) + self.expt(k)
    }

    /// Parse rows `degree,b_sp1,b_expt`, one per degree `0..=4n`; a header row is allowed.
    pub fn from_csv<R: Read>(n: QuatDim, reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let mut table = BettiTable::zeros(n);
        let mut seen = vec![false; table.sp1.len()];
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| QkError::MalformedTable(e.to_string()))?;
            if rec.len() != 3 {
                return Err(QkError::MalformedTable(format!(
                    "row {} has {} fields, expected degree,b_sp1,b_expt",
                    i + 1,
                    rec.len()
                )));
            }
            if i == 0 && rec[0].parse::<i64>().is_err() {
                continue;
            }
            let parse = |s: &str| {
                s.parse::<u64>()
                    .map_err(|_| QkError::MalformedTable(format!("row {}: '{s}' is not a nonnegative integer", i + 1)))
            };
            let deg = parse(&rec[0])? as usize;
            if deg >= seen.len() {
                return Err(QkError::MalformedTable(format!("degree {deg} outside 0..={}", seen.len() - 1)));
            }
            if seen[deg] {
                return Err(QkError::MalformedTable(format!("degree {deg} listed twice")));
            }
            seen[deg] = true;
            table.sp1[deg] = parse(&rec[1])?;
            table.expt[deg] = parse(&rec[2])?;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(QkError::MalformedTable(format!("degree {missing} missing")));
        }
        Ok(table)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["degree", "b_sp1", "b_expt"]).expect("in-memory write");
        for k in 0..self.sp1.len() {
            w.write_record([k.to_string(), self.sp1[k].to_string(), self.expt[k].to_string()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }
}

/// A failed constraint: identifier, the degree it concerns, and the offending values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub constraint: &'static str,
    pub degree: u32,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConstraintReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Violation>,
}

impl ConstraintReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

pub const ODD_VANISHING: &str = "b_{2k+1}=0";
pub const EVEN_MONOTONE: &str = "b_{2k}-b_{2k-4}>=0";
pub const EXPT_VANISHING_POSITIVE: &str = "b_expt=0";
pub const SP1_ODD_VANISHING: &str = "b_sp1_{2k+1}=0";
pub const SP1_STEP4: &str = "b_sp1_k<=b_sp1_{k+4} (k<=2n-2)";
pub const EXPT_STEP2: &str = "b_expt_k<=b_expt_{k+2} (k<=2n-1)";
pub const EXPT_LOW_VANISHING: &str = "b_expt_k=0 (k<=n-1)";
pub const LOW_ODD_VANISHING: &str = "b_{2k+1}=0 (2k+1<=n-1)";
pub const ODD_STEP2: &str = "b_k<=b_{k+2} (k odd, k<=2n-1)";
pub const STEP4: &str = "b_k<=b_{k+4} (k<=2n-2)";
pub const POINCARE: &str = "b_k=b_{4n-k}";

/// Check a Betti table against the relations implied by the harmonic candidates.
///
/// Poincaré duality is reported as a warning only.
pub fn betti_constraints(regime: Regime, table: &BettiTable) -> ConstraintReport {
    let n = table.n.get() as i64;
    let top = 4 * n;
    let mut rep = ConstraintReport::default();
    let mut fail = |id: &'static str, k: i64, detail: String| {
        rep.violations.push(Violation {
            constraint: id,
            degree: k as u32,
            detail,
        })
    };
    match regime {
        Regime::Positive => {
            for k in (1..=top).step_by(2) {
                if table.total(k) != 0 {
                    fail(ODD_VANISHING, k, format!("b_{k} = {}", table.total(k)));
                }
            }
            for j in 2..=n {
                let (hi, lo) = (table.total(2 * j), table.total(2 * j - 4));
                if hi < lo {
                    fail(EVEN_MONOTONE, 2 * j, format!("b_{} = {hi} < b_{} = {lo}", 2 * j, 2 * j - 4));
                }
            }
            for k in 0..=top {
                if table.expt(k) != 0 {
                    fail(EXPT_VANISHING_POSITIVE, k, format!("b_expt_{k} = {}", table.expt(k)));
                }
            }
        }
        Regime::Negative => {
            for k in (1..=top).step_by(2) {
                if table.sp1(k) != 0 {
                    fail(SP1_ODD_VANISHING, k, format!("b_sp1_{k} = {}", table.sp1(k)));
                }
            }
            for k in 0..=2 * n - 2 {
                if table.sp1(k) > table.sp1(k + 4) {
                    fail(SP1_STEP4, k, format!("b_sp1_{k} = {} > b_sp1_{} = {}", table.sp1(k), k + 4, table.sp1(k + 4)));
                }
            }
            for k in 0..=2 * n - 1 {
                if table.expt(k) > table.expt(k + 2) {
                    fail(EXPT_STEP2, k, format!("b_expt_{k} = {} > b_expt_{} = {}", table.expt(k), k + 2, table.expt(k + 2)));
                }
            }
            for k in 0..=n - 1 {
                if table.expt(k) != 0 {
                    fail(EXPT_LOW_VANISHING, k, format!("b_expt_{k} = {}", table.expt(k)));
                }
            }
            for k in (1..=n - 1).step_by(2) {
                if table.total(k) != 0 {
                    fail(LOW_ODD_VANISHING, k, format!("b_{k} = {}", table.total(k)));
                }
            }
            for k in (1..=2 * n - 1).step_by(2) {
                if table.total(k) > table.total(k + 2) {
                    fail(ODD_STEP2, k, format!("b_{k} = {} > b_{} = {}", table.total(k), k + 2, table.total(k + 2)));
                }
            }
            for k in 0..=2 * n - 2 {
                if table.total(k) > table.total(k + 4) {
                    fail(STEP4, k, format!("b_{k} = {} > b_{} = {}", table.total(k), k + 4, table.total(k + 4)));
                }
            }
        }
    }
    for k in 0..=2 * n {
        if table.total(k) != table.total(top - k) {
            rep.warnings.push(Violation {
                constraint: POINCARE,
                degree: k as u32,
                detail: format!("b_{k} = {} but b_{} = {}", table.total(k), top - k, table.total(top - k)),
            });
        }
    }
    rep
}

/// Assemble Betti numbers from kernel dimensions of the harmonic candidates.
pub fn betti_from_kernel_dims(
    n: QuatDim,
    regime: Regime,
    dims: &BTreeMap<IrrepLabel, u64>,
) -> Result<BettiTable> {
    let cands: BTreeMap<IrrepLabel, HarmonicCandidate> = harmonic_candidates(n, regime)
        .into_iter()
        .map(|c| (c.rep, c))
        .collect();
    let mut table = BettiTable::zeros(n);
    for (rep, &m) in dims {
        let c = cands
            .get(rep)
            .ok_or_else(|| QkError::NotACandidate(format!("{rep} in the {regime} regime")))?;
        for &deg in &c.degrees {
            let slot = match c.family {
                CandidateFamily::Sp1Invariant => &mut table.sp1[deg as usize],
                CandidateFamily::Exceptional => &mut table.expt[deg as usize],
            };
            *slot += m;
        }
    }
    Ok(table)
}
