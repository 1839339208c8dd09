//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! lines always reach the output; exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_rational::Ratio;
use proptest::collection::vec as pvec;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use qk_core::cohomology::{
    betti_constraints, betti_from_kernel_dims, forms_decomposition_all, harmonic_candidates,
    total_multiplicity_in_forms, CandidateFamily,
};
use qk_core::fusion::fuse_exterior;
use qk_core::labels::{irrep_dimension, IrrepLabel, QuatDim, SpnWeight, TwistLabel};
use qk_core::operators::{
    casimir_qre, fourth_power, generators, half_square, hyper_intermediate, hyper_term_quartic_with,
    polarization_family, primitive_subspace, quartic_monomials, scalar_on, Space, SymplecticFrame,
};
use qk_core::oracle::{half_spinor_characters, tensor, HighestWeight, VirtualCharacter};
use qk_core::spectra::{dirac_bound_untwisted, dirac_kernel, laplace_bound};
use qk_core::twist::{
    extremal_bruteforce, index, is_admissible, maximal_twists, minimal_twists, multiplicity_set,
    ExtremalClass, ExtremeMode, Regime,
};

type Q = Ratio<i64>;
type Outcome = Result<u64, String>;

fn qd(n: u32) -> QuatDim {
    QuatDim::new(n).unwrap()
}

fn ensure(ok: bool, checks: &mut u64, msg: impl FnOnce() -> String) -> Result<(), String> {
    *checks += 1;
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn irreducible(n: QuatDim, k: u32, w: SpnWeight) -> VirtualCharacter {
    VirtualCharacter::irreducible(n.rank(), HighestWeight::new(k, w))
}

/// Oracle `(S⁺ ⊗ R, S⁻ ⊗ R)` for every twist with `l <= l_max`.
fn oracle_table(n: QuatDim, l_max: u32) -> BTreeMap<TwistLabel, (VirtualCharacter, VirtualCharacter)> {
    let (plus, minus) = half_spinor_characters(n);
    TwistLabel::all(n, l_max)
        .into_iter()
        .map(|tw| {
            let r = irreducible(n, tw.l, SpnWeight::fundamental(tw.d));
            (tw, (tensor(&plus, &r).unwrap(), tensor(&minus, &r).unwrap()))
        })
        .collect()
}

fn c1_fusion() -> Outcome {
    let mut checks = 0;
    for n in 2..=4 {
        let n = qd(n);
        for c in 0..=n.get() {
            for d in 0..=n.get() {
                let oracle = tensor(
                    &irreducible(n, 0, SpnWeight::fundamental(c)),
                    &irreducible(n, 0, SpnWeight::fundamental(d)),
                )
                .map_err(|e| e.to_string())?;
                let mut got = VirtualCharacter::new(n.rank());
                for (a, b) in fuse_exterior(n, c, d).map_err(|e| e.to_string())? {
                    got.add(HighestWeight::new(0, SpnWeight::two_column(a, b)), 1);
                }
                ensure(got == oracle, &mut checks, || format!("n={} c={c} d={d}", n.get()))?;
                ensure(oracle.iter().all(|(_, m)| m == 1), &mut checks, || format!("multiplicity > 1 at c={c} d={d}"))?;
            }
        }
    }
    Ok(checks)
}

fn c2_spinor_dimension() -> Outcome {
    let mut checks = 0;
    for n in 2..=4u32 {
        let total: u64 = (0..=n)
            .map(|r| (r as u64 + 1) * irrep_dimension(qd(n), &SpnWeight::fundamental(n - r)).unwrap())
            .sum();
        ensure(total == 1 << (2 * n), &mut checks, || format!("n={n}: {total}"))?;
        let (p, m) = half_spinor_characters(qd(n));
        ensure(p.dimension() == m.dimension(), &mut checks, || format!("n={n}: half spins differ in dimension"))?;
    }
    Ok(checks)
}

fn twist_grid(index_check: bool) -> Outcome {
    let mut checks = 0;
    for n in 2..=3 {
        let n = qd(n);
        let bound = 2 * n.get() + 2;
        let table = oracle_table(n, bound);
        for r in IrrepLabel::all(n, bound) {
            for (tw, (plus, minus)) in &table {
                let (p, m) = (plus.multiplicity_of(&r), minus.multiplicity_of(&r));
                let ctx = || format!("n={} rep={r} twist={tw}", n.get());
                if index_check {
                    let got = index(n, &r, tw);
                    ensure(got == p - m, &mut checks, || format!("{}: index {got} vs oracle {}", ctx(), p - m))?;
                } else {
                    ensure(is_admissible(n, &r, tw) == (p + m > 0), &mut checks, ctx)?;
                    let card = multiplicity_set(n, &r, tw).cardinality() as i64;
                    ensure(card == p + m, &mut checks, || format!("{}: {card} vs {}", ctx(), p + m))?;
                }
            }
        }
    }
    Ok(checks)
}

fn c3_admissibility() -> Outcome {
    twist_grid(false)
}

fn c4_index() -> Outcome {
    twist_grid(true)
}

fn parity(e: u32) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn c5_extremal() -> Outcome {
    let mut checks = 0;
    for n in 2..=3 {
        let n = qd(n);
        let bound = 2 * n.get() + 2;
        let table = oracle_table(n, bound + n.get());
        for r in IrrepLabel::all(n, bound) {
            let (k, a, b) = (r.k(), r.a(), r.b());
            let lm = k + n.get() + 2;
            for (mode, rep) in [(ExtremeMode::Max, maximal_twists(n, &r)), (ExtremeMode::Min, minimal_twists(n, &r))] {
                let brute = extremal_bruteforce(n, &r, mode, lm).map_err(|e| e.to_string())?;
                ensure(rep.twist_labels() == brute, &mut checks, || format!("n={} {r} {mode:?}", n.get()))?;
                for t in &rep.twists {
                    let want = match rep.class_tag {
                        ExtremalClass::MaxGeneric | ExtremalClass::MinClass1 => parity(b),
                        ExtremalClass::MinClass2 => parity(k + t.d),
                        ExtremalClass::MaxSpecial | ExtremalClass::MinClass3 => parity(t.d),
                        ExtremalClass::MinClass4 => parity(a),
                    };
                    let (p, m) = table
                        .get(&t.twist())
                        .map(|(p, m)| (p.multiplicity_of(&r), m.multiplicity_of(&r)))
                        .ok_or("oracle table too small")?;
                    ensure(p - m == want && t.index == want, &mut checks, || {
                        format!("n={} {r} twist ({},{}): oracle {} stated {want}", n.get(), t.l, t.d, p - m)
                    })?;
                    ensure(p + m == 1, &mut checks, || format!("{r}: multiplicity {} at ({},{})", p + m, t.l, t.d))?;
                }
            }
        }
    }
    Ok(checks)
}

fn c6_casimir() -> Outcome {
    let mut checks = 0;
    let commutes = |space: &Space, cas: &qk_core::linalg::Matrix, checks: &mut u64| -> Result<(), String> {
        for ((p, r), g) in generators(space) {
            ensure(cas.commutator(&g).is_zero(), checks, || format!("[q, ({p}{r})•] != 0"))?;
        }
        Ok(())
    };
    for n in 1..=3i64 {
        let frame = SymplecticFrame::new(n as usize);
        for l in 0..=5i64 {
            let space = Space::symmetric(frame, l as usize);
            let cas = casimir_qre(&space).map_err(|e| e.to_string())?;
            let want = Q::new(-l * (2 * n + l), 2);
            ensure(cas.as_scalar() == Some(want), &mut checks, || format!("Sym^{l} n={n}: {:?}", cas.as_scalar()))?;
            commutes(&space, &cas, &mut checks)?;
        }
    }
    for n in 1..=4i64 {
        let frame = SymplecticFrame::new(n as usize);
        for d in 0..=n {
            let space = Space::exterior(frame, d as usize).map_err(|e| e.to_string())?;
            let cas = casimir_qre(&space).map_err(|e| e.to_string())?;
            let prim = primitive_subspace(frame, d as usize).map_err(|e| e.to_string())?;
            let want = Q::new(-d * (2 * n - d + 2), 2);
            let got = scalar_on(&cas, &prim);
            ensure(got == Some(want), &mut checks, || format!("Λ^{d}∘E n={n}: {got:?}"))?;
            commutes(&space, &cas, &mut checks)?;
        }
    }
    Ok(checks)
}

fn c7_hyper() -> Outcome {
    let mut checks = 0;
    let mut intermediate_nonzero = false;
    for n in 1..=3usize {
        let frame = SymplecticFrame::new(n);
        for d in 0..=2 * n {
            let space = Space::exterior(frame, d).map_err(|e| e.to_string())?;
            let gens = generators(&space);
            for e in polarization_family(frame) {
                let m = hyper_term_quartic_with(&space, &gens, &fourth_power(&e));
                ensure(m.is_zero(), &mut checks, || format!("n={n} d={d} e={e:?}"))?;
            }
            for quartic in quartic_monomials(frame) {
                let m = hyper_term_quartic_with(&space, &gens, &quartic);
                ensure(m.is_zero(), &mut checks, || format!("n={n} d={d} {quartic:?}"))?;
            }
        }
        let sym2 = Space::symmetric(frame, 2);
        let l2 = Space::exterior(frame, 2).map_err(|e| e.to_string())?;
        let sym2_gens = generators(&sym2);
        for e in polarization_family(frame) {
            intermediate_nonzero |= !hyper_intermediate(&sym2, &e).is_zero()
                && !hyper_term_quartic_with(&sym2, &sym2_gens, &fourth_power(&e)).is_zero()
                && !half_square(&l2, &e).is_zero();
        }
    }
    ensure(intermediate_nonzero, &mut checks, || "un-cancelled operator vanished on every test space".into())?;
    Ok(checks)
}

fn c8_bounds() -> Outcome {
    let mut checks = 0;
    for n in 2..=6u32 {
        let ni = n as i64;
        let nq = qd(n);
        let coeff = |k, a, b, regime| -> Result<Q, String> {
            let r = IrrepLabel::new(nq, k, a, b).map_err(|e| e.to_string())?;
            Ok(laplace_bound(nq, &r, regime).map_err(|e| e.to_string())?.coeff.value)
        };
        for r in 1..=n {
            let got = coeff(r, r, 0, Regime::Positive)?;
            let want = Q::new(r as i64 * (ni + 1), 2 * ni * (ni + 2));
            ensure(got == want, &mut checks, || format!("n={n} r={r}: {got}"))?;
        }
        let checks_list = [
            (coeff(1, 1, 0, Regime::Negative)?, Q::new(1, 2 * (ni + 2)), "H⊗E negative"),
            (coeff(2, 0, 0, Regime::Positive)?, Q::new(1, 2 * ni), "Sym²H"),
            (coeff(2, 2, 0, Regime::Positive)?, Q::new(ni + 1, ni * (ni + 2)), "Sym²H⊗Λ²∘E"),
            (
                dirac_bound_untwisted(nq, 1).map_err(|e| e.to_string())?.value,
                Q::new(ni + 3, 4 * (ni + 2)),
                "Dirac r=1",
            ),
        ];
        for (got, want, what) in checks_list {
            ensure(got == want, &mut checks, || format!("n={n} {what}: {got} vs {want}"))?;
        }
    }
    Ok(checks)
}

fn c9_forms() -> Outcome {
    let mut checks = 0;
    for n in 2..=3u32 {
        let nq = qd(n);
        let all = forms_decomposition_all(nq).map_err(|e| e.to_string())?;
        let mut oracle: BTreeMap<IrrepLabel, i64> = BTreeMap::new();
        for ch in &all {
            for (hw, m) in ch.iter() {
                *oracle.entry(hw.to_label(nq).ok_or("unlabelled summand")?).or_default() += m;
            }
        }
        for (r, &m) in &oracle {
            let got = total_multiplicity_in_forms(nq, r) as i64;
            ensure(got == m, &mut checks, || format!("n={n} {r}: {got} vs oracle {m}"))?;
        }
        for c in harmonic_candidates(nq, Regime::Negative) {
            let (a, b) = (c.rep.a(), c.rep.b());
            let degrees: Vec<u32> = match c.family {
                CandidateFamily::Sp1Invariant => (2 * a..=4 * n - 2 * a).step_by(4).collect(),
                CandidateFamily::Exceptional => (2 * n - a + b..=2 * n + a - b).step_by(2).collect(),
            };
            ensure(c.degrees == degrees, &mut checks, || format!("{}: degrees {:?}", c.rep, c.degrees))?;
            for (deg, ch) in all.iter().enumerate() {
                let m = ch.multiplicity_of(&c.rep);
                let want = i64::from(degrees.contains(&(deg as u32)));
                ensure(m == want, &mut checks, || format!("n={n} {} degree {deg}: {m}", c.rep))?;
            }
        }
    }
    Ok(checks)
}

fn dims_strategy(n: QuatDim, regime: Regime) -> impl Strategy<Value = BTreeMap<IrrepLabel, u64>> {
    let reps: Vec<IrrepLabel> = harmonic_candidates(n, regime).into_iter().map(|c| c.rep).collect();
    pvec(0u64..6, reps.len()).prop_map(move |v| reps.iter().copied().zip(v).collect())
}

fn c10_dictionary() -> Outcome {
    let mut checks = 0;
    for n in 2..=3u32 {
        let nq = qd(n);
        let kernels: Vec<_> = (0..=n)
            .map(|d| dirac_kernel(nq, &TwistLabel { l: n - d, d }, Regime::Positive, false).unwrap())
            .collect();
        for (d, kd) in kernels.iter().enumerate() {
            let reps: Vec<IrrepLabel> = kd.contributors.iter().map(|c| c.rep).collect();
            let want: Vec<IrrepLabel> = (0..=d as u32).map(|a| IrrepLabel::new(nq, 0, a, a).unwrap()).collect();
            ensure(reps == want, &mut checks, || format!("n={n} d={d}: {reps:?}"))?;
        }
        let mut runner = TestRunner::new(Config { cases: 200, failure_persistence: None, ..Config::default() });
        runner
            .run(&dims_strategy(nq, Regime::Positive), |dims| {
                let t = betti_from_kernel_dims(nq, Regime::Positive, &dims).unwrap();
                for (d, kd) in kernels.iter().enumerate() {
                    let d = d as i64;
                    let sign = if d % 2 == 0 { 1 } else { -1 };
                    let b = (t.total(2 * d) + t.total(2 * d - 2)) as i64;
                    prop_assert_eq!(kd.symbolic_index(&dims), sign * b);
                }
                Ok(())
            })
            .map_err(|e| e.to_string())?;
        checks += 200;
    }
    Ok(checks)
}

fn c11_soundness() -> Outcome {
    let mut checks = 0;
    for regime in [Regime::Positive, Regime::Negative] {
        let strategy = (2u32..=4).prop_flat_map(move |n| dims_strategy(qd(n), regime).prop_map(move |d| (n, d)));
        let mut runner = TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() });
        runner
            .run(&strategy, |(n, dims)| {
                let t = betti_from_kernel_dims(qd(n), regime, &dims).unwrap();
                let rep = betti_constraints(regime, &t);
                prop_assert!(rep.is_consistent(), "{:?}", rep.violations);
                Ok(())
            })
            .map_err(|e| e.to_string())?;
        checks += 1000;
    }
    Ok(checks)
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("fusion oracle equivalence", c1_fusion),
        ("spinor dimension", c2_spinor_dimension),
        ("admissibility and multiplicity", c3_admissibility),
        ("index formula", c4_index),
        ("extremal classifications", c5_extremal),
        ("Casimir scalars", c6_casimir),
        ("hyper-term vanishing", c7_hyper),
        ("bound constants", c8_bounds),
        ("forms bookkeeping", c9_forms),
        ("Dirac/Betti dictionary", c10_dictionary),
        ("constraint checker soundness", c11_soundness),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(msg)
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(checks) => println!("criterion {:>2} {name}: PASS ({checks} checks, {secs:.2}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({e})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
