//! Acceptance criteria 1 to 10, run in order with one PASS/FAIL line each.

mod common;
mod oracle;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use leflab::cohomology::{
    build_filtered_complex, lefschetz_decomp_check_with, resolution_check_with, strong_lefschetz,
    DdLambdaCohomology,
};
use leflab::duality::{
    d_block_decomposition_with, dd_pairing_swapped_with, dd_pairing_with, diagram_check_all, phi_duality_check,
    product_support_exhaustive, product_support_test, stokes_check,
};
use leflab::exactlinalg::{int, rational};
use leflab::exterior::Form;
use leflab::fuzz::{run_laws, OPERATOR_LAWS};
use leflab::model::{builtin, catalog_names, SymplecticModel};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SEED: u64 = 20_240_601;

fn models() -> Vec<SymplecticModel> {
    catalog_names().into_iter().map(|name| builtin(name).expect("catalog model")).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn operator_laws() -> Outcome {
    let mut laws = 0;
    for m in models() {
        for outcome in run_laws(&m, SEED, 200, Some(OPERATOR_LAWS)) {
            laws += 1;
            if let Some(w) = outcome.witness {
                return Err(format!("{}: {} failed: {w}", m.name(), outcome.name));
            }
        }
    }
    Ok(format!("{laws} (model, law) pairs, 200 random forms each"))
}

fn complex_suite() -> Outcome {
    let mut complexes = 0;
    for m in models() {
        for p in 0..=m.n() {
            let fc = build_filtered_complex(&m, p).map_err(|e| format!("{} p = {p}: {e}", m.name()))?;
            let top = fc.top_degree();
            for k in 0..top - 1 {
                let composite = fc.differential(k + 1).mul(fc.differential(k)).map_err(|e| e.to_string())?;
                ensure(composite.is_zero(), || format!("{} p = {p}: d_{} d_{k} != 0", m.name(), k + 1))?;
            }
            let dims = fc.space_dims();
            ensure((0..=top).all(|k| dims[k] == dims[top - k]), || {
                format!("{} p = {p}: space dims {dims:?} not symmetric", m.name())
            })?;
            complexes += 1;
        }
    }
    Ok(format!("{complexes} complexes"))
}

fn filtered_duality() -> Outcome {
    let mut pairings = 0;
    for m in models() {
        for p in 0..=m.n() {
            let fc = build_filtered_complex(&m, p).map_err(|e| e.to_string())?;
            let v = phi_duality_check(&fc, SEED, 5).map_err(|e| e.to_string())?;
            ensure(v.dims_symmetric, || format!("{} p = {p}: F^pH dims {:?} not symmetric", m.name(), v.dims))?;
            for pr in &v.pairings {
                pairings += 1;
                ensure(pr.matrix.is_square() && pr.nondegenerate, || {
                    format!("{} p = {p}: g_p in degree {} has rank {} of {}x{}", m.name(), pr.left.degree, pr.rank, pr.matrix.rows(), pr.matrix.cols())
                })?;
            }
        }
    }
    let t4 = builtin("t4").unwrap();
    let fc = build_filtered_complex(&t4, 0).map_err(|e| e.to_string())?;
    let dims: Vec<usize> = fc.cohomology().iter().map(|h| h.dim()).collect();
    ensure(dims == [1, 4, 5, 5, 4, 1], || format!("t4 p = 0 dims {dims:?}"))?;
    // The reflection k -> 2n+2p-k does not preserve the t4 fixture; k -> 2n+2p+1-k does.
    let (n, p) = (2, 0);
    ensure((0..=2 * n + 2 * p).any(|k| dims[k] != dims[2 * n + 2 * p - k]), || {
        "t4 fixture is symmetric under k -> 2n+2p-k".into()
    })?;
    Ok(format!("{pairings} pairing matrices full rank; t4 p = 0 gives {dims:?} (symmetric under k -> 2n+2p+1-k)"))
}

fn stokes_suite() -> Outcome {
    let mut cases = 0;
    for m in models() {
        for p in 0..=m.n() {
            let fc = build_filtered_complex(&m, p).map_err(|e| e.to_string())?;
            let v = stokes_check(&fc, SEED + p as u64, 100).map_err(|e| e.to_string())?;
            if let Some(w) = v.witness {
                return Err(format!("{} p = {p}: {w}", m.name()));
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} (model, p) cases, 100 random x each"))
}

fn resolution_suite() -> Outcome {
    let mut sequences = 0;
    for m in models() {
        for p in 0..=m.n() {
            let fc = build_filtered_complex(&m, p).map_err(|e| e.to_string())?;
            for v in resolution_check_with(&fc).map_err(|e| e.to_string())? {
                sequences += 1;
                ensure(v.passed(), || format!("{} p = {p}: {v:?}", m.name()))?;
            }
        }
    }
    Ok(format!("{sequences} sequences exact with matching dimensions"))
}

fn support_suite() -> Outcome {
    let mut forced = 0;
    for m in models() {
        let v = product_support_test(&m, SEED, 500).map_err(|e| e.to_string())?;
        ensure(v.counterexamples == 0, || format!("{}: {:?}", m.name(), v.witness))?;
        forced += v.forced_zero;
    }
    let t4 = product_support_exhaustive(&builtin("t4").unwrap()).map_err(|e| e.to_string())?;
    ensure(t4.passed(), || format!("t4 exhaustive: {:?}", t4.witness))?;
    Ok(format!(
        "500 trials per model ({forced} forced zeros), t4 exhaustive over {} products",
        t4.trials
    ))
}

fn ddlambda_suite() -> Outcome {
    let mut checks = 0;
    for m in models() {
        let all = DdLambdaCohomology::compute(&m).map_err(|e| e.to_string())?;
        for v in lefschetz_decomp_check_with(&m, &all).map_err(|e| e.to_string())? {
            checks += 1;
            ensure(v.passed(), || format!("{}: {v:?}", m.name()))?;
        }
        for k in 0..=2 * m.n() {
            let d = dd_pairing_with(&m, &all, k).map_err(|e| e.to_string())?;
            let swapped = dd_pairing_swapped_with(&m, &all, k).map_err(|e| e.to_string())?;
            ensure(d.passed() && swapped.passed(), || format!("{} degree {k}: D or its swap degenerate", m.name()))?;
            let blocks = d_block_decomposition_with(&m, &all, k).map_err(|e| e.to_string())?;
            ensure(blocks.passed(), || format!("{} degree {k}: {:?}", m.name(), blocks.witness))?;
            checks += 3;
        }
        for v in diagram_check_all(&m).map_err(|e| e.to_string())? {
            checks += 1;
            ensure(v.passed(), || format!("{}: {v:?}", m.name()))?;
        }
    }
    Ok(format!("{checks} decomposition, pairing, block and diagram checks"))
}

fn de_rham_anchors() -> Outcome {
    let t4 = builtin("t4").unwrap();
    ensure(t4.derham().betti == [1, 4, 6, 4, 1], || format!("t4 betti {:?}", t4.derham().betti))?;
    let kt = builtin("kodaira_thurston").unwrap();
    let betti = kt.derham().betti;
    ensure(betti == [1, 3, 4, 3, 1], || format!("KT betti {betti:?}"))?;
    let oracle_betti = common::oracle("kodaira_thurston").betti();
    ensure(oracle_betti == betti, || format!("oracle KT betti {oracle_betti:?}"))?;
    for torus in ["t2", "t4", "t6"] {
        let sl = strong_lefschetz(&builtin(torus).unwrap()).map_err(|e| e.to_string())?;
        ensure(sl.holds, || format!("strong Lefschetz fails on {torus}: {:?}", sl.failure))?;
    }
    let sl = strong_lefschetz(&kt).map_err(|e| e.to_string())?;
    let Some((k, kernel)) = sl.failure else {
        return Err("strong Lefschetz holds on KT".into());
    };
    ensure(k == 1 && kernel.len() == 1, || format!("KT failure in degree {k} with kernel {kernel:?}"))?;
    let h1 = kt.derham();
    let h1 = h1.space(1);
    let e1 = Form::monomial(2, &[1]).unwrap();
    let witness = h1.class_of(&kernel[0]).map_err(|e| e.to_string())?;
    let target = h1.class_of(&e1).map_err(|e| e.to_string())?;
    let ratio = witness.iter().zip(&target).find(|(_, t)| **t != int(0)).map(|(w, t)| w / t);
    ensure(
        ratio.as_ref().is_some_and(|r| *r != int(0) && witness.iter().zip(&target).all(|(w, t)| *w == t * r)),
        || format!("kernel class {} is not a multiple of [e^1]", kernel[0]),
    )?;
    Ok(format!("t4 (1,4,6,4,1), KT {betti:?}, KT kernel of L in degree 1 spanned by [{}]", kernel[0]))
}

fn fixture_regression() -> Outcome {
    for name in common::FIXTURE_MODELS {
        let frozen = common::frozen_fixture(name);
        let computed = common::library_tables(&builtin(name).unwrap()).to_fixture_text();
        ensure(computed == frozen, || format!("{name}: library tables differ from the frozen fixture"))?;
        let from_oracle = common::oracle_tables(name).to_fixture_text();
        ensure(from_oracle == frozen, || format!("{name}: oracle tables differ from the frozen fixture"))?;
    }
    Ok(format!("{} fixtures byte-identical", common::FIXTURE_MODELS.len()))
}

fn mutation_sanity() -> Outcome {
    let mut caught = Vec::new();
    for (label, factor) in [("sign flip", int(-1)), ("no 1/2", int(2)), ("x1/2", rational(1, 2))] {
        for m in models() {
            let broken = m.with_lambda_scaled(&factor);
            let failed: Vec<&str> = run_laws(&broken, SEED, 200, Some(OPERATOR_LAWS))
                .into_iter()
                .filter(|o| !o.passed())
                .map(|o| o.name)
                .collect();
            ensure(!failed.is_empty(), || format!("{label} on {} passes the operator suite", m.name()))?;
            if m.name() == "t4" {
                caught.push(format!("{label}: {}", failed.join(", ")));
            }
        }
    }
    Ok(format!("every mutant fails on every model (t4: {})", caught.join("; ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("operator-law suite", operator_laws),
        ("complex suite", complex_suite),
        ("filtered duality", filtered_duality),
        ("Stokes suite", stokes_suite),
        ("resolution suite", resolution_suite),
        ("product-support suite", support_suite),
        ("d^Lambda suite", ddlambda_suite),
        ("de Rham anchors", de_rham_anchors),
        ("oracle-fixture regression", fixture_regression),
        ("mutation sanity", mutation_sanity),
    ];
    let mut failures = 0;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(criterion)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
