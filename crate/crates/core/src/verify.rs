//! Cross-checks of closed forms against the optimization engine.

use crate::cost::{self, Variant};
use crate::entropy::{self, DivergenceSpec};
use crate::error::{Error, Result};
use crate::qmat::{self, BipartiteDims, CMatrix, Subsystem};
use crate::quantum::{self, ChoiChannel, GibbsContext, Hamiltonian};
use crate::random;
use crate::tasks::{self, CloningSpec, DerivedKind, Task};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

/// Check names in suite order.
pub const SUITES: [&str; 10] =
    ["transpose-kappa", "erasure", "werner", "cloning", "eb", "benchmark", "achievability", "cmin", "counterexample", "properties"];

/// Cases per randomized property.
pub const PROPERTY_CASES: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    /// Largest deviation seen among the comparisons of this check.
    pub max_error: f64,
    pub comparisons: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub tolerance: f64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

#[derive(Default)]
struct Acc {
    max_error: f64,
    comparisons: usize,
    failures: Vec<String>,
}

impl Acc {
    fn close(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        let err = if got == want { 0.0 } else { (got - want).abs() };
        self.comparisons += 1;
        if err.is_nan() || err > tol {
            self.failures.push(format!("{what}: got {got:.10}, expected {want:.10} (tol {tol:.1e})"));
        }
        if err.is_finite() {
            self.max_error = self.max_error.max(err);
        } else {
            self.max_error = f64::INFINITY;
        }
    }

    /// Records `lhs <= rhs + tol`.
    fn at_most(&mut self, what: &str, lhs: f64, rhs: f64, tol: f64) {
        self.comparisons += 1;
        let excess = lhs - rhs;
        if excess.is_nan() || excess > tol {
            self.failures.push(format!("{what}: {lhs:.10} exceeds {rhs:.10} (tol {tol:.1e})"));
        }
        if excess > 0.0 {
            self.max_error = self.max_error.max(excess);
        }
    }

    fn holds(&mut self, what: &str, ok: bool) {
        self.comparisons += 1;
        if !ok {
            self.failures.push(what.to_string());
        }
    }
}

/// Runs the named checks (`all` selects every one). `tol` is the tolerance
/// used wherever a check compares at the default `1e-6` level.
pub fn run(names: &[String], tol: f64) -> Result<VerifyReport> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let mut ids = Vec::new();
    for n in names {
        let n = n.trim();
        if n == "all" {
            ids.extend(1..=SUITES.len());
        } else if let Some(i) = SUITES.iter().position(|s| *s == n) {
            ids.push(i + 1);
        } else if let Some(i) = n.parse::<usize>().ok().filter(|i| (1..=SUITES.len()).contains(i)) {
            ids.push(i);
        } else {
            return Err(Error::InvalidInput(format!("unknown suite '{n}' (expected all or one of {})", SUITES.join(", "))));
        }
    }
    ids.sort_unstable();
    ids.dedup();
    let checks: Vec<Check> = ids.into_iter().map(|id| run_one(id, tol)).collect();
    Ok(VerifyReport { tolerance: tol, passed: checks.iter().all(|c| c.passed), checks })
}

fn run_one(id: usize, tol: f64) -> Check {
    let mut acc = Acc::default();
    let outcome = match id {
        1 => transpose_kappa(&mut acc, tol),
        2 => erasure(&mut acc, tol),
        3 => werner(&mut acc),
        4 => cloning(&mut acc, tol),
        5 => eb(&mut acc, tol),
        6 => benchmark(&mut acc, tol),
        7 => achievability(&mut acc, tol),
        8 => cmin(&mut acc, tol),
        9 => counterexample(&mut acc, tol),
        _ => properties(&mut acc),
    };
    if let Err(e) = outcome {
        acc.failures.push(format!("aborted: {e}"));
    }
    Check {
        id,
        name: SUITES[id - 1].to_string(),
        passed: acc.failures.is_empty(),
        max_error: acc.max_error,
        comparisons: acc.comparisons,
        failures: acc.failures,
    }
}

fn qubit_ctx(r: f64) -> Result<GibbsContext> {
    GibbsContext::symmetric(1.0, &Hamiltonian::ladder(2, r.ln()))
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn transpose_kappa(acc: &mut Acc, tol: f64) -> Result<()> {
    for d in 2..=4 {
        let t = tasks::transposition_task(d, &GibbsContext::degenerate(d, d), 8)?;
        let k = cost::reverse_entropy(&t)?.value_bits;
        acc.close(&format!("kappa transpose d={d}"), k, ((d as f64 + 1.0) / 2.0).log2(), tol);
    }
    Ok(())
}

fn erasure(acc: &mut Acc, tol: f64) -> Result<()> {
    for ctx in [GibbsContext::degenerate(2, 2), GibbsContext::symmetric(LN_2, &Hamiltonian::ladder(2, 1.0))?] {
        let t = tasks::erasure_task(2, &ctx)?;
        let f_min = cost::erasure_oracle(&ctx, 1.0)?.f_min;
        for f in grid(f_min, 1.0, 11) {
            let oracle = cost::erasure_oracle(&ctx, f)?;
            let r = cost::cost_of_accuracy(&t, f)?;
            acc.close(&format!("erasure cost at F={f:.4}"), r.value_bits, oracle.cost_bits, tol);
            acc.close(&format!("erasure work at F={f:.4}"), r.work_kt(), oracle.work_kt, tol);
        }
    }
    Ok(())
}

fn werner(acc: &mut Acc) -> Result<()> {
    for (n, m, d) in [(1, 2, 2), (1, 3, 2), (2, 3, 2), (1, 2, 3)] {
        let spec = CloningSpec::new(n, m, d)?;
        for (h, beta) in [(Hamiltonian::degenerate(d), 1.0), (Hamiltonian::ladder(d, 1.0), LN_2)] {
            let ch = cost::werner_cloner(&spec)?;
            let ctx = spec.context(&h, beta)?;
            let c = cost::channel_cost(&ch, &qmat::identity(spec.d_n()), &ctx)?.value_bits;
            let want = cost::kappa_cloning(&spec, &h, beta) + spec.f_max().log2();
            acc.close(&format!("werner cost ({n},{m},{d}) beta={beta:.4}"), c, want, 1e-9);
        }
    }
    Ok(())
}

fn cloning(acc: &mut Acc, tol: f64) -> Result<()> {
    let h = Hamiltonian::degenerate(2);
    for m in 2..=4 {
        let spec = CloningSpec::new(1, m, 2)?;
        let t = tasks::cloning_task(&spec, &h, 1.0, true)?;
        let curves = cost::scan_curve(&t, 9, &[Variant::Quantum, Variant::Classical], 1)?;
        let delta = spec.delta() as f64;
        for curve in &curves {
            for p in &curve.points {
                acc.close(
                    &format!("1->{m} {} cost at F={:.4}", curve.variant.as_str(), p.fidelity),
                    p.cost_bits,
                    delta + p.fidelity.log2(),
                    tol.max(1e-5),
                );
            }
        }
        acc.close(&format!("1->{m} quantum F_max"), curves[0].f_max, spec.f_max(), tol);
        acc.close(&format!("1->{m} classical F_max"), curves[1].f_max, 1.0, tol);
        let top = curves[1].points.last().map_or(f64::NAN, |p| p.cost_bits);
        acc.close(&format!("1->{m} classical cost at F=1"), top, delta, tol.max(1e-5));
    }
    Ok(())
}

fn eb(acc: &mut Acc, tol: f64) -> Result<()> {
    let spec = CloningSpec::new(1, 2, 2)?;
    let t = tasks::cloning_task(&spec, &Hamiltonian::degenerate(2), 1.0, true)?;
    let star = tasks::derived_task(&t, DerivedKind::Transposed)?;
    let k_star = cost::reverse_entropy(&star)?.value_bits;
    acc.close("kappa*", k_star, 1.0 + (4.0f64 / 3.0).log2(), tol);
    let eb_f_max = cost::accuracy_of_cost(&star, None)?.fidelity;
    acc.close("EB F_max", eb_f_max, spec.d_n() as f64 / spec.d_total() as f64, tol);
    let kappa = cost::reverse_entropy(&t)?.value_bits;
    for f in grid(0.4, 0.5, 5) {
        let b = cost::eb_bound(&t, f)?;
        acc.holds(&format!("EB bound exact at F={f:.3}"), b.exact);
        acc.close(&format!("EB gap at F={f:.3}"), b.value_bits - (kappa + f.log2()), (4.0f64 / 3.0).log2(), tol);
    }
    let common = cost::eb_bound(&t, 0.5)?.value_bits - cost::cost_of_accuracy(&t, 0.5)?.value_bits;
    acc.close("EB gap against the quantum curve at F=1/2", common, (4.0f64 / 3.0).log2(), tol);
    Ok(())
}

/// Worst-case fidelity over `|0>, |1>` and eight equatorial states.
pub fn qubit_test_fidelity(ch: &ChoiChannel, transpose: bool) -> Result<f64> {
    let mut states = vec![qmat::basis_ket(2, 0), qmat::basis_ket(2, 1)];
    for k in 0..8 {
        let th = 2.0 * std::f64::consts::PI * k as f64 / 8.0;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        states.push(qmat::ket(&[qmat::real(s), qmat::c(s * th.cos(), s * th.sin())]));
    }
    let mut worst = f64::INFINITY;
    for psi in states {
        let rho = qmat::projector(&psi);
        let target = if transpose { rho.transpose() } else { rho.clone() };
        worst = worst.min(qmat::trace_product_re(&target, &ch.apply(&rho)?));
    }
    Ok(worst)
}

fn benchmark(acc: &mut Acc, tol: f64) -> Result<()> {
    for r in [1.0f64, 2.0, 4.0] {
        let ctx = qubit_ctx(r)?;
        let f_min = cost::qubit_benchmark(2.0 / 3.0, &ctx)?.f_min;
        for f in grid(f_min, 2.0 / 3.0, 9) {
            let bm = cost::qubit_benchmark(f, &ctx)?;
            let ch = bm.channel.choi()?;
            let formula = (f + r * (2.0 * f - 1.0).powi(2) / (1.0 - f)).log2();
            let c = cost::channel_cost(&ch, &qmat::identity(2), &ctx)?.value_bits;
            acc.close(&format!("r={r} cost at F={f:.4}"), c, formula, tol);
            acc.close(&format!("r={r} fidelity at F={f:.4}"), qubit_test_fidelity(&ch, true)?, f, 1e-8);
            let pt = qmat::partial_transpose(&ch.choi, ch.dims, Subsystem::B)?;
            acc.at_most(&format!("r={r} PPT defect at F={f:.4}"), -qmat::min_eigenvalue(&pt)?, 0.0, 1e-9);
        }
    }
    Ok(())
}

fn check_mf(acc: &mut Acc, t: &Task, tol: f64) -> Result<()> {
    let ex = cost::f_extremes(t)?;
    let top = cost::accuracy_of_cost(t, None)?;
    let m0 = top.witness.ok_or_else(|| Error::ConstructionFailed("no optimal channel returned".into()))?;
    let f0 = t.accuracy(&m0.choi);
    for i in 1..=5 {
        let f = ex.f_min + (ex.f_max - ex.f_min) * i as f64 / 6.0;
        let mf = cost::build_mf_channel(t, &m0, f0, f, ex.kappa)?;
        acc.close(&format!("{} accuracy at F={f:.4}", t.label), t.accuracy(&mf.choi), f, tol);
        let c = cost::channel_cost(&mf, &t.input_projector, &t.ctx)?.value_bits;
        acc.close(&format!("{} cost at F={f:.4}", t.label), c, ex.kappa + f.log2(), tol);
    }
    Ok(())
}

fn achievability(acc: &mut Acc, tol: f64) -> Result<()> {
    for ctx in [GibbsContext::degenerate(2, 2), qubit_ctx(2.0)?] {
        check_mf(acc, &tasks::erasure_task(2, &ctx)?, tol)?;
    }
    for (n, m, beta) in [(1, 2, None), (1, 3, None), (1, 2, Some(LN_2))] {
        let spec = CloningSpec::new(n, m, 2)?;
        let h = if beta.is_some() { Hamiltonian::ladder(2, 1.0) } else { Hamiltonian::degenerate(2) };
        check_mf(acc, &tasks::cloning_task(&spec, &h, beta.unwrap_or(1.0), false)?, tol)?;
    }
    let spec = CloningSpec::new(1, 2, 2)?;
    check_mf(acc, &tasks::cloning_task(&spec, &Hamiltonian::degenerate(2), 1.0, true)?, tol)
}

/// A classical task restricted to the support of a diagonal projector.
pub fn restricted_classical_task(table: &[usize], ctx: &GibbsContext, pi: &CMatrix) -> Result<Task> {
    let mut t = tasks::classical_task(table, ctx)?;
    let keep: Vec<bool> = (0..table.len()).map(|x| pi[(x, x)].re > 0.5).collect();
    t.perf_ops = t.perf_ops.into_iter().zip(&keep).filter(|(_, k)| **k).map(|(op, _)| op).collect();
    t.input_projector = pi.clone();
    t.label = format!("{}|restricted", t.label);
    t.validate()?;
    Ok(t)
}

fn cmin(acc: &mut Acc, tol: f64) -> Result<()> {
    let mut rng = random::rng(8);
    for case in 0..10 {
        let d = rng.gen_range(2..=6);
        let h = random::hamiltonian(d, &mut rng)?;
        let ctx = GibbsContext::symmetric(rng.gen_range(0.2..2.0), &h)?;
        let pi = random::diagonal_projector(d, &mut rng);
        let c_min = cost::c_min_of(&pi, &ctx)?;
        let mut best = f64::INFINITY;
        for _ in 0..100 {
            let ch = random::gibbs_mapping_channel(&ctx, &pi, &mut rng)?;
            let c = cost::channel_cost(&ch, &pi, &ctx)?.value_bits;
            acc.at_most(&format!("case {case}: c_min below a channel cost"), c_min, c, tol);
            best = best.min(c);
        }
        acc.close(&format!("case {case}: c_min against the best channel"), best, c_min, tol);
        let table: Vec<usize> = (0..d).map(|_| rng.gen_range(0..d)).collect();
        let t = restricted_classical_task(&table, &ctx, &pi)?;
        let kappa = cost::reverse_entropy(&t)?.value_bits;
        let f_min = (c_min - kappa).exp2();
        let back = cost::accuracy_of_cost(&t, Some(c_min))?.fidelity;
        acc.close(&format!("case {case}: F_min round trip"), back, f_min, tol.max(1e-5));
    }
    Ok(())
}

fn counterexample(acc: &mut Acc, tol: f64) -> Result<()> {
    let ch = ChoiChannel::from_action(2, 2, |x| (qmat::identity(2) * qmat::trace(x) + x.transpose()).unscale(3.0));
    let gamma = qmat::diag(&[2.0 / 3.0, 1.0 / 3.0]);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut states = vec![qmat::basis_ket(2, 0), qmat::basis_ket(2, 1)];
    for k in 0..8 {
        let th = 2.0 * std::f64::consts::PI * k as f64 / 8.0;
        states.push(qmat::ket(&[qmat::real(s), qmat::c(s * th.cos(), s * th.sin())]));
    }
    let e = qmat::projector(&states[2]);
    let d_out = entropy::relative_entropy(&ch.apply(&e)?, &gamma)?;
    acc.close("D(M(e)||Gamma)", d_out, 1.0 / 6.0, 2e-3);
    acc.close("1/6 + log2(2/3)", d_out + (2.0f64 / 3.0).log2(), -0.418, 2e-3);
    for alpha in [0.3, 0.5, 0.8, 2.0] {
        for spec in [DivergenceSpec::renyi(alpha), DivergenceSpec::sandwiched(alpha)] {
            for psi in &states {
                let rho = qmat::projector(psi);
                let diff = entropy::divergence(&ch.apply(&rho)?, &gamma, spec)? - entropy::divergence(&rho, &gamma, spec)?;
                acc.at_most(&format!("{:?} alpha={alpha} difference", spec.family), diff, 0.0, 1e-9);
            }
        }
    }
    let t = tasks::transposition_task(2, &qubit_ctx(2.0)?, 8)?;
    let c = cost::cost_of_accuracy(&t, 2.0 / 3.0)?.value_bits;
    acc.at_most("transposition cost at F=2/3", (4.0f64 / 3.0).log2() - tol, c, 0.0);
    acc.holds("transposition cost is positive", c > 0.0);
    Ok(())
}

fn random_ctx<R: Rng>(d_a: usize, d_b: usize, rng: &mut R) -> Result<GibbsContext> {
    let beta = rng.gen_range(0.2..2.0);
    GibbsContext::new(beta, &random::hamiltonian(d_a, rng)?, &random::hamiltonian(d_b, rng)?)
}

fn properties(acc: &mut Acc) -> Result<()> {
    let mut rng = random::rng(10);
    for case in 0..PROPERTY_CASES {
        let (da, db) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let ctx = random_ctx(da, db, &mut rng)?;
        let omega = random::density(da * db, da * db, &mut rng);
        let back = quantum::time_reverse_perf_op(&quantum::time_reverse_perf_op(&omega, &ctx)?, &ctx.swapped())?;
        acc.close(&format!("case {case}: time reversal involution"), qmat::max_abs(&(back - &omega)), 0.0, 1e-9);

        let ch = random::channel(da, db, rng.gen_range(1..=3), &mut rng)?;
        let pi = random::diagonal_projector(da, &mut rng);
        let c = cost::channel_cost(&ch, &pi, &ctx)?.value_bits;
        let ct = cost::channel_cost(&ch.output_transposed()?, &pi, &ctx)?.value_bits;
        acc.close(&format!("case {case}: D_max transpose invariance"), ct, c, 1e-10);

        let dims = BipartiteDims::new(da, db);
        let a = entropy::h_min_sdp(&omega, dims)?;
        let b = entropy::h_min_sdp(&omega, dims)?;
        acc.holds(&format!("case {case}: SDP determinism"), a.optimum == b.optimum && a.lambda_b == b.lambda_b);
        let lifted = qmat::kron(&qmat::identity(da), &a.lambda_b) - &omega;
        acc.at_most(&format!("case {case}: SDP primal feasibility"), -qmat::min_eigenvalue(&lifted)?, 0.0, 1e-7);
        // X = I/d_A ⊗ I_B is dual feasible, so Tr[Ω X] bounds Tr[λ_B] from below.
        acc.at_most(&format!("case {case}: SDP weak duality"), 1.0 / da as f64, a.lambda_b.trace().re, 1e-7);
        acc.at_most(&format!("case {case}: SDP gap"), a.gap, 1e-6, 0.0);

        let d = rng.gen_range(2..=4);
        let rho = random::density(d, rng.gen_range(1..=d), &mut rng);
        let sigma = random::density(d, d, &mut rng);
        let div = |s: DivergenceSpec| entropy::divergence(&rho, &sigma, s);
        let d_min = quantum::d_min(&rho, &sigma)?;
        let d_max = quantum::d_max(&rho, &sigma)?;
        let rel = entropy::relative_entropy(&rho, &sigma)?;
        let s_half = div(DivergenceSpec::sandwiched(0.5))?;
        let s_two = div(DivergenceSpec::sandwiched(2.0))?;
        let p_two = div(DivergenceSpec::renyi(2.0))?;
        let chain = [
            ("D_min <= D", d_min, rel),
            ("D~_1/2 <= D", s_half, rel),
            ("D <= D~_2", rel, s_two),
            ("D~_2 <= D_max", s_two, d_max),
            ("D~_2 <= D_2", s_two, p_two),
        ];
        for (what, lo, hi) in chain {
            acc.at_most(&format!("case {case}: {what}"), lo, hi, 1e-8 * (1.0 + hi.abs()));
        }

        let table: Vec<usize> = (0..2).map(|_| rng.gen_range(0..2)).collect();
        let t = tasks::classical_task(&table, &random_ctx(2, 2, &mut rng)?)?;
        let ex = cost::f_extremes(&t)?;
        let (u, v): (f64, f64) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        let (f1, f2) = (ex.f_min + (ex.f_max - ex.f_min) * u.min(v), ex.f_min + (ex.f_max - ex.f_min) * u.max(v));
        let c1 = cost::cost_of_accuracy(&t, f1)?.value_bits;
        let c2 = cost::cost_of_accuracy(&t, f2)?.value_bits;
        acc.at_most(&format!("case {case}: monotone cost"), c1, c2, 1e-7);
        acc.at_most(&format!("case {case}: universal bound"), ex.kappa + f2.log2(), c2, 1e-6);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(run(&["nope".into()], 1e-6), Err(Error::InvalidInput(_))));
        assert!(run(&["werner".into()], 0.0).is_err());
    }

    #[test]
    fn werner_suite_passes() {
        let r = run(&["3".into()], 1e-6).unwrap();
        assert!(r.passed, "{:?}", r.checks[0].failures);
        assert_eq!(r.checks[0].name, "werner");
    }
}
