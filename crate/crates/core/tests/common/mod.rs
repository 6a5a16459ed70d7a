#![allow(dead_code)]

use neq_core::cost;
use neq_core::entropy::{self, DivergenceSpec};
use neq_core::qmat::{self, BipartiteDims, CMatrix, Subsystem};
use neq_core::quantum::{self, GibbsContext};
use neq_core::random;
use neq_core::tasks;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};
use rand::Rng;

pub const CASES: u32 = 200;

pub fn config(seed: u64) -> Config {
    Config { cases: CASES, failure_persistence: None, rng_seed: RngSeed::Fixed(seed), ..Config::default() }
}

pub fn runner(seed: u64) -> TestRunner {
    TestRunner::new(config(seed))
}

fn fail(e: impl std::fmt::Display) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

fn ctx_from(seed: u64, d_a: usize, d_b: usize) -> Result<GibbsContext, TestCaseError> {
    let mut rng = random::rng(seed);
    let beta = rng.gen_range(0.2..2.0);
    let h_a = random::hamiltonian(d_a, &mut rng).map_err(fail)?;
    let h_b = random::hamiltonian(d_b, &mut rng).map_err(fail)?;
    GibbsContext::new(beta, &h_a, &h_b).map_err(fail)
}

pub fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=3, 1usize..=3)
}

/// Reversing twice with the swapped context returns the operator.
pub fn time_reversal_involution(seed: u64, (da, db): (usize, usize)) -> Result<(), TestCaseError> {
    let ctx = ctx_from(seed, da, db)?;
    let omega = random::density(da * db, da * db, &mut random::rng(seed ^ 1));
    let once = quantum::time_reverse_perf_op(&omega, &ctx).map_err(fail)?;
    let twice = quantum::time_reverse_perf_op(&once, &ctx.swapped()).map_err(fail)?;
    let err = qmat::max_abs(&(twice - &omega));
    prop_assert!(err <= 1e-9, "involution error {err:e}");
    Ok(())
}

/// A channel and its output-transposed version cost the same.
pub fn dmax_transpose_invariance(seed: u64, (da, db): (usize, usize)) -> Result<(), TestCaseError> {
    let ctx = ctx_from(seed, da, db)?;
    let mut rng = random::rng(seed ^ 2);
    let k = rng.gen_range(1..=3);
    let ch = random::channel(da, db, k, &mut rng).map_err(fail)?;
    let pi = random::diagonal_projector(da, &mut rng);
    let c = cost::channel_cost(&ch, &pi, &ctx).map_err(fail)?.value_bits;
    let ct = cost::channel_cost(&ch.output_transposed().map_err(fail)?, &pi, &ctx).map_err(fail)?.value_bits;
    prop_assert!((c - ct).abs() <= 1e-10, "{c} vs {ct}");
    Ok(())
}

/// For `min Tr Λ s.t. I ⊗ Λ ⪰ Ω` every dual point `X ⪰ 0` with
/// `Tr_A X = I_B` satisfies `Tr[Ω X] <= Tr Λ*`, and the returned Λ is feasible.
pub fn sdp_weak_duality(seed: u64, (da, db): (usize, usize)) -> Result<(), TestCaseError> {
    let mut rng = random::rng(seed);
    let n = da * db;
    let dims = BipartiteDims::new(da, db);
    let omega = random::density(n, rng.gen_range(1..=n), &mut rng);
    let sol = entropy::h_min_sdp(&omega, dims).map_err(fail)?;
    let lifted = qmat::kron(&qmat::identity(da), &sol.lambda_b) - &omega;
    let defect = -qmat::min_eigenvalue(&lifted).map_err(fail)?;
    prop_assert!(defect <= 1e-7, "primal infeasible by {defect:e}");
    let y = random::density(n, n, &mut rng);
    let sigma = qmat::partial_trace(&y, dims, Subsystem::A).map_err(fail)?;
    let s = qmat::kron(&qmat::identity(da), &qmat::inv_sqrt_psd(&sigma).map_err(fail)?);
    let x = &s * y * &s;
    let lower = qmat::trace_product_re(&omega, &x);
    let upper = sol.lambda_b.trace().re;
    prop_assert!(lower <= upper + 1e-7, "dual value {lower} above primal {upper}");
    prop_assert!(sol.optimum <= upper + 1e-7 && sol.optimum >= lower - 1e-7);
    Ok(())
}

/// Identical problems give bit-identical answers.
pub fn sdp_determinism(seed: u64, (da, db): (usize, usize)) -> Result<(), TestCaseError> {
    let omega = random::density(da * db, da * db, &mut random::rng(seed));
    let dims = BipartiteDims::new(da, db);
    let a = entropy::h_min_sdp(&omega, dims).map_err(fail)?;
    let b = entropy::h_min_sdp(&omega, dims).map_err(fail)?;
    prop_assert!(a.optimum.to_bits() == b.optimum.to_bits());
    prop_assert!(a.lambda_b == b.lambda_b);
    Ok(())
}

/// `D_min <= D <= D_max`, `D~_1/2 <= D <= D~_2 <= D_max` and `D~_2 <= D_2`.
pub fn divergence_hierarchy(seed: u64, d: usize) -> Result<(), TestCaseError> {
    let mut rng = random::rng(seed);
    let rho = random::density(d, rng.gen_range(1..=d), &mut rng);
    let sigma = random::density(d, d, &mut rng);
    let div = |s: DivergenceSpec| entropy::divergence(&rho, &sigma, s).map_err(fail);
    let d_min = quantum::d_min(&rho, &sigma).map_err(fail)?;
    let d_max = quantum::d_max(&rho, &sigma).map_err(fail)?;
    let rel = entropy::relative_entropy(&rho, &sigma).map_err(fail)?;
    let half = div(DivergenceSpec::sandwiched(0.5))?;
    let two = div(DivergenceSpec::sandwiched(2.0))?;
    let petz_two = div(DivergenceSpec::renyi(2.0))?;
    for (what, lo, hi) in [
        ("D_min <= D", d_min, rel),
        ("D~_1/2 <= D", half, rel),
        ("D <= D~_2", rel, two),
        ("D~_2 <= D_max", two, d_max),
        ("D~_2 <= D_2", two, petz_two),
    ] {
        prop_assert!(lo <= hi + 1e-8 * (1.0 + hi.abs()), "{what}: {lo} > {hi}");
    }
    Ok(())
}

/// Cost is nondecreasing in F, accuracy nondecreasing in the budget, and both
/// respect `c >= κ + log2 F`.
pub fn monotone_curves(seed: u64, table: Vec<usize>, u: f64, v: f64) -> Result<(), TestCaseError> {
    let d = table.len();
    let ctx = ctx_from(seed, d, d)?;
    let t = tasks::classical_task(&table, &ctx).map_err(fail)?;
    let ex = cost::f_extremes(&t).map_err(fail)?;
    let (lo, hi) = (u.min(v), u.max(v));
    let f1 = ex.f_min + (ex.f_max - ex.f_min) * lo;
    let f2 = ex.f_min + (ex.f_max - ex.f_min) * hi;
    let c1 = cost::cost_of_accuracy(&t, f1).map_err(fail)?.value_bits;
    let c2 = cost::cost_of_accuracy(&t, f2).map_err(fail)?.value_bits;
    prop_assert!(c1 <= c2 + 1e-7, "cost decreased: {c1} at {f1}, {c2} at {f2}");
    prop_assert!(c2 >= ex.kappa + f2.log2() - 1e-6, "bound violated at {f2}");
    let a1 = cost::accuracy_of_cost(&t, Some(c1)).map_err(fail)?.fidelity;
    let a2 = cost::accuracy_of_cost(&t, Some(c2)).map_err(fail)?.fidelity;
    prop_assert!(a1 <= a2 + 1e-7, "accuracy decreased: {a1} at {c1}, {a2} at {c2}");
    Ok(())
}

pub fn table() -> impl Strategy<Value = Vec<usize>> {
    (2usize..=3).prop_flat_map(|d| proptest::collection::vec(0..d, d))
}

/// Runs one property through a fixed-seed runner, reporting the failure text.
pub fn run_property<S, F>(seed: u64, strategy: S, test: F) -> Result<(), String>
where
    S: Strategy,
    F: Fn(S::Value) -> Result<(), TestCaseError>,
{
    runner(seed).run(&strategy, test).map_err(|e| e.to_string())
}

/// The randomized property suites: name and outcome.
pub fn all_properties() -> Vec<(&'static str, Result<(), String>)> {
    vec![
        ("time-reversal involution", run_property(101, (any::<u64>(), dims()), |(s, d)| time_reversal_involution(s, d))),
        ("D_max transpose invariance", run_property(102, (any::<u64>(), dims()), |(s, d)| dmax_transpose_invariance(s, d))),
        ("SDP weak duality", run_property(103, (any::<u64>(), dims()), |(s, d)| sdp_weak_duality(s, d))),
        ("SDP determinism", run_property(104, (any::<u64>(), dims()), |(s, d)| sdp_determinism(s, d))),
        ("divergence hierarchy", run_property(105, (any::<u64>(), 1usize..=4), |(s, d)| divergence_hierarchy(s, d))),
        (
            "monotone curves",
            run_property(106, (any::<u64>(), table(), 0.0..1.0f64, 0.0..1.0f64), |(s, t, u, v)| monotone_curves(s, t, u, v)),
        ),
    ]
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

pub fn basis(d: usize, i: usize) -> CMatrix {
    qmat::basis_ket(d, i)
}
