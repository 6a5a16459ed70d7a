//! Nonequilibrium cost of channels and tasks.
//!
//! Costs are in bits (clean qubits); multiply by `kT ln 2` for work. The
//! tradeoff between cost `c` and worst-case accuracy `F` of a task obeys
//! `c >= κ + log2 F`, with `κ` the reverse entropy of the task.

use crate::entropy;
use crate::error::{require_optimal, Error, Result};
use crate::qmat::{self, BipartiteDims, CMatrix, Subsystem};
use crate::quantum::{self, ChoiChannel, GibbsContext, Hamiltonian};
use crate::sdp::{self, LinMap, Relation, SdpProblem, Sense, SolveOptions, Term};
use crate::tasks::{self, CloningSpec, DerivedKind, Task, TaskKind};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::LOG2_E;

/// Relative shift applied to a fidelity target (or cost budget) when the
/// solver stalls at the edge of the feasible set.
const EDGE_SHIFT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Sdp,
    BoundOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    #[serde(with = "extended_real")]
    pub value_bits: f64,
    pub method: Method,
    pub solver_gap: Option<f64>,
    /// Set when the value is known to be attained rather than only bounded.
    pub exact: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<ChoiChannel>,
}

impl CostReport {
    fn closed_form(value_bits: f64) -> Self {
        Self { value_bits, method: Method::ClosedForm, solver_gap: None, exact: true, notes: vec![], witness: None }
    }

    fn sdp(value_bits: f64, gap: f64, witness: Option<ChoiChannel>) -> Self {
        Self { value_bits, method: Method::Sdp, solver_gap: Some(gap), exact: true, notes: vec![], witness }
    }

    /// Work in units of `kT` (the cost times `ln 2`).
    pub fn work_kt(&self) -> f64 {
        quantum::bits_to_kt(self.value_bits)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyReport {
    pub fidelity: f64,
    pub method: Method,
    pub solver_gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<ChoiChannel>,
}

/// Serializes infinities as the strings `"inf"` and `"-inf"`.
pub mod extended_real {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            v.serialize(s)
        } else if v.is_nan() {
            "nan".serialize(s)
        } else if *v > 0.0 {
            "inf".serialize(s)
        } else {
            "-inf".serialize(s)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("not a number: {other}"))),
            },
        }
    }
}

fn solve(problem: &SdpProblem, what: &str) -> Result<sdp::SdpSolution> {
    require_optimal(sdp::solve(problem, &SolveOptions::from_env())?, what)
}

fn scalar(x: f64) -> CMatrix {
    CMatrix::from_element(1, 1, qmat::real(x))
}

fn check_projector(pi: &CMatrix, ctx: &GibbsContext) -> Result<()> {
    let d = ctx.energies_a.len();
    if pi.nrows() != d || pi.ncols() != d {
        return Err(Error::InvalidProjector(format!("projector side {} differs from d_A = {d}", pi.nrows())));
    }
    if qmat::max_abs(&(pi * pi - pi)) > 1e-9 || !qmat::is_hermitian(pi, 1e-12) {
        return Err(Error::InvalidProjector("not an orthogonal projector".into()));
    }
    let h = qmat::diag(&ctx.energies_a);
    if qmat::max_abs(&(pi * &h - &h * pi)) > 1e-12 * (1.0 + qmat::max_abs(&h)) {
        return Err(Error::InvalidProjector("projector does not commute with H_A".into()));
    }
    Ok(())
}

fn weighted_input(pi: &CMatrix, ctx: &GibbsContext) -> CMatrix {
    qmat::hermitian_part(&(pi * ctx.gamma_a() * pi))
}

/// `c(𝓜, Π) = D_max(𝓜(Π Γ_A Π) ‖ Γ_B)`.
pub fn channel_cost(ch: &ChoiChannel, pi_a: &CMatrix, ctx: &GibbsContext) -> Result<CostReport> {
    if ch.dims != ctx.dims() {
        return Err(Error::InvalidInput("channel and context dimensions differ".into()));
    }
    check_projector(pi_a, ctx)?;
    let defect = ch.trace_preservation_defect()?;
    if defect > 1e-6 {
        return Err(Error::InvalidChannel(format!("channel is not trace preserving (defect {defect:.2e})")));
    }
    let out = ch.apply(&weighted_input(pi_a, ctx))?;
    let value = quantum::d_max(&qmat::hermitian_part(&out), &ctx.gamma_b())?;
    let mut report = CostReport::closed_form(value);
    if value == f64::INFINITY {
        report.notes.push("output leaves the support of the Gibbs state".into());
    }
    Ok(report)
}

/// `c_min = log2 Tr[Π Γ_A]`.
pub fn c_min_of(pi_a: &CMatrix, ctx: &GibbsContext) -> Result<f64> {
    check_projector(pi_a, ctx)?;
    Ok(qmat::trace_product_re(pi_a, &ctx.gamma_a()).log2())
}

/// Reverse entropy `κ = -log2 F_max` of the time-reversed task.
///
/// With an averaged operator this is `H_min(A|B)` of
/// `(Γ_A^{-1/2} ⊗ Γ_B^{1/2}) Ω (Γ_A^{-1/2} ⊗ Γ_B^{1/2})`. Otherwise a single
/// SDP maximizes the worst-case score of a reverse channel B → A, which is
/// returned as witness.
pub fn reverse_entropy(t: &Task) -> Result<CostReport> {
    if let Some(avg) = &t.covariant_average {
        let rev = quantum::time_reverse_perf_op(avg, &t.ctx)?;
        let omega = qmat::swap_systems(&rev, t.dims.swapped())?;
        let sol = entropy::h_min_sdp(&omega, t.dims)?;
        let value = if sol.optimum > 0.0 { -sol.optimum.log2() } else { f64::INFINITY };
        let mut report = CostReport::sdp(value, sol.gap, None);
        report.notes.push("averaged operator".into());
        return Ok(report);
    }
    let rdims = t.dims.swapped();
    let mut p = SdpProblem::new(Sense::Max);
    let m = p.hermitian("M_rev", rdims.total());
    let s = p.nonneg("t");
    p.objective_scalar(s, 1.0);
    p.constrain(vec![Term::new(m, LinMap::partial_trace(rdims, Subsystem::B))], Relation::Eq, qmat::identity(rdims.d_a));
    for om in &t.perf_ops {
        let rev = quantum::time_reverse_perf_op(om, &t.ctx)?;
        p.constrain(vec![Term::new(m, LinMap::Trace(rev)), Term::new(s, LinMap::Scale(scalar(-1.0)))], Relation::Ge, scalar(0.0));
    }
    let sol = solve(&p, "reverse entropy")?;
    let f = sol.objective;
    let value = if f > 0.0 { -f.log2() } else { f64::INFINITY };
    let witness = ChoiChannel::unchecked(sol.matrix(m).clone(), rdims)?;
    Ok(CostReport::sdp(value, sol.gap, Some(witness)))
}

fn cost_problem(t: &Task, f: f64) -> Result<(SdpProblem, sdp::VarId)> {
    let mut p = SdpProblem::new(Sense::Min);
    let m = p.hermitian("M", t.dims.total());
    let lam = p.nonneg("lambda");
    p.objective_scalar(lam, 1.0);
    p.constrain(vec![Term::new(m, LinMap::partial_trace(t.dims, Subsystem::B))], Relation::Eq, qmat::identity(t.dims.d_a));
    let w = LinMap::weighted_trace_a(t.dims, &weighted_input(&t.input_projector, &t.ctx))?;
    p.constrain(
        vec![Term::new(m, w), Term::new(lam, LinMap::Scale(-t.ctx.gamma_b()))],
        Relation::Le,
        CMatrix::zeros(t.dims.d_b, t.dims.d_b),
    );
    for om in t.constraint_ops() {
        p.constrain(vec![Term::new(m, LinMap::Trace(om))], Relation::Ge, scalar(f));
    }
    Ok((p, m))
}

fn accuracy_problem(t: &Task, budget: Option<f64>) -> Result<(SdpProblem, sdp::VarId)> {
    let mut p = SdpProblem::new(Sense::Max);
    let m = p.hermitian("M", t.dims.total());
    let s = p.nonneg("t");
    p.objective_scalar(s, 1.0);
    p.constrain(vec![Term::new(m, LinMap::partial_trace(t.dims, Subsystem::B))], Relation::Eq, qmat::identity(t.dims.d_a));
    if let Some(c) = budget {
        let w = LinMap::weighted_trace_a(t.dims, &weighted_input(&t.input_projector, &t.ctx))?;
        p.constrain(vec![Term::new(m, w)], Relation::Le, t.ctx.gamma_b().scale(c.exp2()));
    }
    for om in t.constraint_ops() {
        p.constrain(vec![Term::new(m, LinMap::Trace(om)), Term::new(s, LinMap::Scale(scalar(-1.0)))], Relation::Ge, scalar(0.0));
    }
    Ok((p, m))
}

/// Minimum cost of reaching worst-case accuracy `f`.
///
/// Below `F_min` the answer is `c_min` and a note says so. Above `F_max`
/// the problem is infeasible.
pub fn cost_of_accuracy(t: &Task, f: f64) -> Result<CostReport> {
    if !(f > 0.0 && f <= 1.0) {
        return Err(Error::OutOfRange(format!("accuracy {f} outside (0, 1]")));
    }
    let c_min = c_min_of(&t.input_projector, &t.ctx)?;
    let mut notes = vec![];
    let (problem, m) = cost_problem(t, f)?;
    let sol = match solve(&problem, "cost of accuracy") {
        Ok(sol) => sol,
        Err(Error::Infeasible(_) | Error::NumericalFailure(_)) => {
            let shifted = f * (1.0 - EDGE_SHIFT);
            notes.push(format!("solved at the boundary-shifted accuracy {shifted:.12}"));
            solve(&cost_problem(t, shifted)?.0, "cost of accuracy").map_err(|e| match e {
                Error::Infeasible(_) => Error::Infeasible(format!("accuracy {f} exceeds the maximum attainable accuracy")),
                other => other,
            })?
        }
        Err(e) => return Err(e),
    };
    let lam = sol.objective;
    let mut value = if lam > 0.0 { lam.log2() } else { f64::NEG_INFINITY };
    if value <= c_min + 1e-7 {
        value = c_min;
        notes.push("clamped: at or below F_min the cost stays at c_min".into());
    }
    let witness = ChoiChannel::unchecked(sol.matrix(m).clone(), t.dims)?;
    let mut report = CostReport::sdp(value, sol.gap, Some(witness));
    report.notes = notes;
    Ok(report)
}

/// Maximum worst-case accuracy with cost at most `c` bits (`None` for no limit).
pub fn accuracy_of_cost(t: &Task, c: Option<f64>) -> Result<AccuracyReport> {
    let c_min = c_min_of(&t.input_projector, &t.ctx)?;
    if let Some(c) = c {
        if c.is_nan() || c < c_min - 1e-12 {
            return Err(Error::Infeasible(format!("cost {c} is below c_min = {c_min}")));
        }
    }
    let budget = c.filter(|c| c.is_finite()).map(|c| c.max(c_min));
    let mut notes = vec![];
    let (p, m) = accuracy_problem(t, budget)?;
    let sol = match solve(&p, "accuracy of cost") {
        Ok(sol) => sol,
        Err(Error::NumericalFailure(_)) if budget.is_some() => {
            let shifted = budget.unwrap() + EDGE_SHIFT;
            notes.push(format!("solved at the boundary-shifted cost {shifted:.12}"));
            solve(&accuracy_problem(t, Some(shifted))?.0, "accuracy of cost")?
        }
        Err(e) => return Err(e),
    };
    Ok(AccuracyReport {
        fidelity: sol.objective.min(1.0),
        method: Method::Sdp,
        solver_gap: Some(sol.gap),
        notes,
        witness: Some(ChoiChannel::unchecked(sol.matrix(m).clone(), t.dims)?),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremes {
    pub f_max: f64,
    pub f_min: f64,
    pub kappa: f64,
    pub c_min: f64,
}

/// `F_max` from the unconstrained accuracy SDP and `F_min = 2^{c_min - κ}`.
pub fn f_extremes(t: &Task) -> Result<Extremes> {
    let kappa = reverse_entropy(t)?.value_bits;
    let c_min = c_min_of(&t.input_projector, &t.ctx)?;
    let f_max = accuracy_of_cost(t, None)?.fidelity;
    Ok(Extremes { f_max, f_min: (c_min - kappa).exp2().min(f_max), kappa, c_min })
}

/// Mixes a channel `m0` that saturates the bound at `f0` with a fixed state
/// preparation, giving a channel with accuracy `f` and cost `κ + log2 f`.
pub fn build_mf_channel(t: &Task, m0: &ChoiChannel, f0: f64, f: f64, kappa: f64) -> Result<ChoiChannel> {
    let c_min = c_min_of(&t.input_projector, &t.ctx)?;
    let f_star = (c_min - kappa).exp2();
    if f < f_star * (1.0 - 1e-9) || f > f0 * (1.0 + 1e-9) {
        return Err(Error::OutOfRange(format!("accuracy {f} outside [{f_star}, {f0}]")));
    }
    if f0 <= f_star * (1.0 + 1e-12) || f >= f0 {
        return Ok(m0.clone());
    }
    let p_star = f_star / f0;
    let w = weighted_input(&t.input_projector, &t.ctx);
    let gamma_tilde = w.unscale(w.trace().re);
    let chi = (t.ctx.gamma_b() - m0.apply(&gamma_tilde)?.scale(p_star)).unscale(1.0 - p_star);
    let chi = qmat::hermitian_part(&chi);
    let lo = qmat::min_eigenvalue(&chi)?;
    if lo < -1e-7 || (chi.trace().re - 1.0).abs() > 1e-7 {
        return Err(Error::ConstructionFailed(format!(
            "mixing state is not a density operator (min eigenvalue {lo:.3e}, trace {:.9})",
            chi.trace().re
        )));
    }
    let prep = ChoiChannel::constant(t.dims.d_a, &chi);
    let mf = m0.mix(f / f0, &prep)?;
    let acc = t.accuracy(&mf.choi);
    let cost = channel_cost(&mf, &t.input_projector, &t.ctx)?.value_bits;
    let target = kappa + f.log2();
    if acc < f - 1e-6 || cost > target + 1e-6 {
        return Err(Error::ConstructionFailed(format!(
            "constructed channel has accuracy {acc:.9} and cost {cost:.9}, expected {f:.9} and {target:.9}"
        )));
    }
    Ok(mf)
}

/// Optimal universal cloner `(d_N/d_N') P_N' (ρ ⊗ I^{⊗ΔN}) P_N'` in
/// occupation coordinates.
pub fn werner_cloner(spec: &CloningSpec) -> Result<ChoiChannel> {
    spec.check_size()?;
    let (on, om) = (tasks::occupations(spec.n, spec.d), tasks::occupations(spec.m, spec.d));
    // Outputs stay inside Sym_N', so the complement level is never used.
    let dims = spec.dims();
    let scale = spec.f_max();
    let diff = |k: &[usize], n: &[usize]| -> Option<Vec<usize>> { k.iter().zip(n).map(|(&a, &b)| a.checked_sub(b)).collect() };
    let mut choi = CMatrix::zeros(dims.total(), dims.total());
    for (i, n) in on.iter().enumerate() {
        for (j, mm) in on.iter().enumerate() {
            for (k, ko) in om.iter().enumerate() {
                let Some(r) = diff(ko, n) else { continue };
                for (l, lo) in om.iter().enumerate() {
                    if diff(lo, mm).as_deref() != Some(&r[..]) {
                        continue;
                    }
                    let v = scale * tasks::sym_overlap(n, &r) * tasks::sym_overlap(mm, &r);
                    choi[(i * dims.d_b + k, j * dims.d_b + l)] = qmat::real(v);
                }
            }
        }
    }
    ChoiChannel::new(choi, dims)
}

/// Measure-and-prepare cloner `d_N ∫ Tr[ψ^{⊗N} ρ] ψ^{⊗N'} dψ`, with Choi
/// operator `(d_N / d_{N+N'}) P_{N+N'}^{T_A}`.
pub fn state_estimation_cloner(spec: &CloningSpec) -> Result<ChoiChannel> {
    spec.check_size()?;
    let p = spec.joint_projector().scale(spec.d_n() as f64 / spec.d_total() as f64);
    let choi = spec.embed_output(&qmat::partial_transpose(&p, spec.sym_dims(), Subsystem::A)?);
    ChoiChannel::new(choi, spec.dims())
}

/// Lower bound `max{κ, κ*} + log2 F` for entanglement-binding channels,
/// where `κ*` belongs to the task with transposed outputs.
pub fn eb_bound(t: &Task, f: f64) -> Result<CostReport> {
    if !(f > 0.0 && f <= 1.0) {
        return Err(Error::OutOfRange(format!("accuracy {f} outside (0, 1]")));
    }
    let k = reverse_entropy(t)?;
    let ks = reverse_entropy(&tasks::derived_task(t, DerivedKind::Transposed)?)?;
    let kappa = k.value_bits.max(ks.value_bits);
    let exact = eb_exact(t);
    let gap = k.solver_gap.unwrap_or(0.0).max(ks.solver_gap.unwrap_or(0.0));
    Ok(CostReport {
        value_bits: kappa + f.log2(),
        method: if exact { Method::Sdp } else { Method::BoundOnly },
        solver_gap: Some(gap),
        exact,
        notes: vec![format!("kappa = {}, kappa* = {}", k.value_bits, ks.value_bits)],
        witness: None,
    })
}

/// Cases where the entanglement-binding bound is known to be attained.
pub fn eb_exact(t: &Task) -> bool {
    match &t.kind {
        TaskKind::Cloning { quantum: true, .. } => t.ctx.energies_a.iter().all(|e| *e == t.ctx.energies_a[0]),
        TaskKind::Storage { d: 2, .. } | TaskKind::Transposition { d: 2, .. } => true,
        TaskKind::Classical { .. } => true,
        _ => false,
    }
}

/// Classical cloning reverse entropy `ΔN (log2 Z + β E_max log2 e)`.
pub fn kappa_cloning(spec: &CloningSpec, h: &Hamiltonian, beta: f64) -> f64 {
    spec.delta() as f64 * (h.partition_function(beta).log2() + beta * h.e_max() * LOG2_E)
}

/// Bound `κ_clon + log2(d_{N+N'} e^{-β N' ΔE} / d_N')` on the reverse
/// entropy of transpose cloning, with a flag set when it is an equality.
pub fn transpose_cloning_kappa_bound(spec: &CloningSpec, h: &Hamiltonian, beta: f64) -> (f64, bool) {
    let de = h.e_max() - h.e_min();
    let extra = (spec.d_total() as f64 / spec.d_m() as f64).log2() - beta * spec.m as f64 * de * LOG2_E;
    (kappa_cloning(spec, h, beta) + extra, de * beta == 0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseCovariantChannel {
    /// `p[m][n]`: probability of output level `m` given input level `n`.
    pub p: Vec<Vec<f64>>,
    /// `c[m][n]` for `m > n`; other entries are ignored.
    pub c: Vec<Vec<Complex64>>,
}

impl PhaseCovariantChannel {
    pub fn dim(&self) -> usize {
        self.p.len()
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        if d == 0 || self.p.iter().any(|r| r.len() != d) || self.c.len() != d || self.c.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidChannel("p and c must be square with equal sides".into()));
        }
        for n in 0..d {
            let col: f64 = (0..d).map(|m| self.p[m][n]).sum();
            if (col - 1.0).abs() > 1e-9 || (0..d).any(|m| self.p[m][n] < -1e-12 || !self.p[m][n].is_finite()) {
                return Err(Error::InvalidChannel(format!("column {n} of p is not a probability vector")));
            }
        }
        for m in 0..d {
            for n in 0..m {
                if self.c[m][n].norm_sqr() > self.p[m][n] * self.p[n][m] + 1e-12 {
                    return Err(Error::InvalidChannel(format!("|c_{m}{n}|^2 exceeds p_{m}{n} p_{n}{m}")));
                }
            }
        }
        Ok(())
    }

    pub fn choi(&self) -> Result<ChoiChannel> {
        self.validate()?;
        let d = self.dim();
        let dims = BipartiteDims::new(d, d);
        let mut choi = CMatrix::zeros(d * d, d * d);
        for m in 0..d {
            for n in 0..d {
                choi[(n * d + m, n * d + m)] = qmat::real(self.p[m][n]);
            }
        }
        for m in 0..d {
            for n in 0..m {
                // c_mn |m><n| ⊗ |n><m| and its adjoint.
                choi[(m * d + n, n * d + m)] = self.c[m][n];
                choi[(n * d + m, m * d + n)] = self.c[m][n].conj();
            }
        }
        ChoiChannel::new(choi, dims)
    }

    /// `max_m log2 Σ_n p_mn g_n / g_m`.
    pub fn cost_bits(&self, g: &[f64]) -> f64 {
        let d = self.dim();
        (0..d).map(|m| ((0..d).map(|n| self.p[m][n] * g[n]).sum::<f64>() / g[m]).log2()).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Transposition fidelity `Tr[ψ^T 𝓜(ψ)]` on a normalized amplitude vector.
    pub fn fidelity(&self, psi: &[Complex64]) -> f64 {
        let d = self.dim();
        let w: Vec<f64> = psi.iter().map(|a| a.norm_sqr()).collect();
        let mut f: f64 = (0..d).map(|m| self.p[m][m] * w[m] * w[m]).sum();
        for m in 0..d {
            for n in 0..m {
                f += w[m] * w[n] * (self.p[m][n] + self.p[n][m] + 2.0 * self.c[m][n].re);
            }
        }
        f
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseCovariantReport {
    pub channel: ChoiChannel,
    pub cost_bits: f64,
}

/// Choi operator and cost of a phase-covariant channel on a `d`-level system.
pub fn phase_covariant(pc: &PhaseCovariantChannel, ctx: &GibbsContext) -> Result<PhaseCovariantReport> {
    let channel = pc.choi()?;
    if ctx.dims() != channel.dims || ctx.energies_a != ctx.energies_b {
        return Err(Error::InvalidInput("phase-covariant channels need equal input and output Hamiltonians".into()));
    }
    Ok(PhaseCovariantReport { channel, cost_bits: pc.cost_bits(&ctx.g_a()) })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitBenchmark {
    pub cost_bits: f64,
    pub f_min: f64,
    pub f_max: f64,
    pub channel: PhaseCovariantChannel,
}

/// Minimum cost of qubit transposition, equivalently of entanglement-binding
/// storage, at fidelity `f`: `log2[F + r (2F-1)^2 / (1-F)]` with
/// `r = e^{βΔE}`, attained by a phase-covariant channel.
pub fn qubit_benchmark(f: f64, ctx: &GibbsContext) -> Result<QubitBenchmark> {
    if ctx.dims() != BipartiteDims::new(2, 2) || ctx.energies_a != ctx.energies_b {
        return Err(Error::InvalidInput("qubit benchmark needs one qubit Hamiltonian on both sides".into()));
    }
    let (e0, e1) = (ctx.energies_a[0], ctx.energies_a[1]);
    if e1 < e0 {
        return Err(Error::InvalidInput("list the ground level first".into()));
    }
    let r = (ctx.beta * (e1 - e0)).exp();
    let sr = r.sqrt();
    let f_min = (sr + 1.0) / (2.0 * sr + 1.0);
    let f_max = 2.0 / 3.0;
    let tol = 1e-12;
    if !(f >= f_min - tol && f <= f_max + tol) {
        return Err(Error::OutOfRange(format!("fidelity {f} outside [{f_min}, {f_max}]; clamped value {}", f.clamp(f_min, f_max))));
    }
    let q = (2.0 * f - 1.0).powi(2) / (1.0 - f);
    let p00 = (3.0 * f - 4.0 * f * f) / (1.0 - f);
    let channel = PhaseCovariantChannel {
        p: vec![vec![p00, 1.0 - f], vec![q, f]],
        c: vec![vec![qmat::real(0.0); 2], vec![qmat::real(((1.0 - f) * q).sqrt()), qmat::real(0.0)]],
    };
    Ok(QubitBenchmark { cost_bits: (f + r * q).log2(), f_min, f_max, channel })
}

/// Lower bound `log2[(d^2 F - d)^2 / (4γ(1-F)) + F]` on the cost of qudit
/// transposition, `γ = (Σ_{m>=1} e^{-β(E_m - E_{m-1})/2})^2` over sorted levels.
pub fn qudit_transpose_bound(f: f64, h: &Hamiltonian, beta: f64) -> Result<f64> {
    if !(f > 0.0 && f < 1.0) {
        return Err(Error::OutOfRange(format!("fidelity {f} outside (0, 1)")));
    }
    let mut e = h.energies.clone();
    e.sort_by(f64::total_cmp);
    let d = e.len() as f64;
    let gamma = e.windows(2).map(|w| (-beta * (w[1] - w[0]) / 2.0).exp()).sum::<f64>().powi(2);
    Ok(((d * d * f - d).powi(2) / (4.0 * gamma * (1.0 - f)) + f).log2())
}

/// `κ_f = max_y log2(p_f(y) / g_B(y))`.
pub fn kappa_classical(table: &[usize], ctx: &GibbsContext) -> Result<f64> {
    if table.len() != ctx.energies_a.len() || table.iter().any(|&y| y >= ctx.energies_b.len()) {
        return Err(Error::InvalidFunction("table does not map inputs to outputs".into()));
    }
    let pf = tasks::preimage_weights(table, ctx);
    Ok(pf
        .iter()
        .zip(ctx.g_b())
        .filter(|(p, _)| **p > 0.0)
        .map(|(p, g)| if g > 0.0 { (p / g).log2() } else { f64::INFINITY })
        .fold(f64::NEG_INFINITY, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErasureOracle {
    pub cost_bits: f64,
    /// Work in units of `kT ln 2`; numerically equal to the cost.
    pub work_kt_ln2: f64,
    /// Work in units of `kT`.
    pub work_kt: f64,
    pub f_min: f64,
}

/// Cost `ΔA/(kT ln 2) + log2 F` of erasing to `|0>` with worst-case fidelity `f`.
pub fn erasure_oracle(ctx: &GibbsContext, f: f64) -> Result<ErasureOracle> {
    let d = ctx.energies_a.len();
    let kappa = kappa_classical(&vec![0; d], ctx)?;
    let f_min = (-kappa).exp2();
    if !(f >= f_min * (1.0 - 1e-12) && f <= 1.0) {
        return Err(Error::OutOfRange(format!("fidelity {f} outside [{f_min}, 1]")));
    }
    let cost = kappa + f.log2();
    Ok(ErasureOracle { cost_bits: cost, work_kt_ln2: cost, work_kt: quantum::bits_to_kt(cost), f_min })
}

/// Minimum cost of `N -> N'` cloning at fidelity `f`, equal for the
/// classical and quantum tasks on their common range.
pub fn cloning_oracle(spec: &CloningSpec, h: &Hamiltonian, beta: f64, f: f64, quantum: bool) -> Result<f64> {
    let kappa = kappa_cloning(spec, h, beta);
    let ctx = spec.context(h, beta)?;
    let c_min = ctx.g_a().iter().sum::<f64>().log2();
    let f_min = (c_min - kappa).exp2();
    let f_max = if quantum { spec.f_max() } else { 1.0 };
    if !(f >= f_min * (1.0 - 1e-12) && f <= f_max * (1.0 + 1e-12)) {
        return Err(Error::OutOfRange(format!("fidelity {f} outside [{f_min}, {f_max}]")));
    }
    Ok(kappa + f.log2())
}

/// Work extractable from `rho`: `D_min` of its energy-pinched version
/// against the Gibbs state, in bits.
pub fn extractable_work(rho: &CMatrix, h: &Hamiltonian, beta: f64) -> Result<f64> {
    let d = h.dim();
    if rho.nrows() != d || rho.ncols() != d {
        return Err(Error::InvalidInput("state and Hamiltonian dimensions differ".into()));
    }
    let mut pinched = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            if (h.energies[i] - h.energies[j]).abs() <= 1e-12 * (1.0 + h.energies[i].abs()) {
                pinched[(i, j)] = rho[(i, j)];
            }
        }
    }
    let (gamma, _) = quantum::gibbs_state(h, beta)?;
    quantum::d_min(&pinched, gamma.matrix())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MemoryErasure {
    /// `D_max(η_S ⊗ γ_Q ‖ Γ_SQ) - D_max(Γ̃_SQ ‖ Γ_SQ)`.
    pub general: f64,
    /// `H_0(S|Q) = log2 ‖Tr_S Π‖`, the bound for degenerate Hamiltonians.
    pub degenerate_h0: f64,
}

/// Work bound for erasing `S` to `|0>` with a quantum memory `Q`, for
/// states supported in `Π_SQ`.
pub fn memory_erasure_bound(pi_sq: &CMatrix, h_s: &Hamiltonian, h_q: &Hamiltonian, beta: f64) -> Result<MemoryErasure> {
    let dims = BipartiteDims::new(h_s.dim(), h_q.dim());
    let energies: Vec<f64> = h_s.energies.iter().flat_map(|es| h_q.energies.iter().map(move |eq| es + eq)).collect();
    let ctx = GibbsContext::new(beta, &Hamiltonian::new(energies)?, &Hamiltonian::degenerate(1))?;
    check_projector(pi_sq, &ctx)?;
    let gamma = ctx.gamma_a();
    let w = weighted_input(pi_sq, &ctx);
    let tilde = w.unscale(w.trace().re);
    let gamma_q = qmat::partial_trace(&tilde, dims, Subsystem::A)?;
    let eta = qmat::projector(&qmat::basis_ket(dims.d_a, 0));
    let general = quantum::d_max(&qmat::kron(&eta, &gamma_q), &gamma)? - quantum::d_max(&tilde, &gamma)?;
    Ok(MemoryErasure { general, degenerate_h0: entropy::h0_conditional(pi_sq, dims)? })
}

// ---------------------------------------------------------------------------
// Curves

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Quantum,
    Classical,
    Eb,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Quantum => "quantum",
            Variant::Classical => "classical",
            Variant::Eb => "eb",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "quantum" => Ok(Variant::Quantum),
            "classical" => Ok(Variant::Classical),
            "eb" => Ok(Variant::Eb),
            other => Err(Error::InvalidInput(format!("unknown curve variant '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointStatus {
    Ok,
    Clamped,
    Bound,
    Exact,
    Infeasible,
    NumericalFailure,
    Error,
}

impl PointStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            PointStatus::Ok => "ok",
            PointStatus::Clamped => "clamped",
            PointStatus::Bound => "bound",
            PointStatus::Exact => "exact",
            PointStatus::Infeasible => "infeasible",
            PointStatus::NumericalFailure => "numerical_failure",
            PointStatus::Error => "error",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub fidelity: f64,
    #[serde(with = "extended_real")]
    pub cost_bits: f64,
    pub lower_bound_bits: f64,
    pub status: PointStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeoffCurve {
    pub task_label: String,
    pub variant: Variant,
    pub kappa: f64,
    pub f_min: f64,
    pub f_max: f64,
    pub c_min: f64,
    pub points: Vec<CurvePoint>,
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
}

fn sdp_curve(t: &Task, variant: Variant, n: usize, pool: &rayon::ThreadPool) -> Result<TradeoffCurve> {
    let ex = f_extremes(t)?;
    let points = pool.install(|| {
        grid(ex.f_min, ex.f_max, n)
            .par_iter()
            .map(|&f| {
                let lower = ex.kappa + f.log2();
                match cost_of_accuracy(t, f) {
                    Ok(r) => CurvePoint {
                        fidelity: f,
                        cost_bits: r.value_bits,
                        lower_bound_bits: lower,
                        status: if r.notes.iter().any(|n| n.starts_with("clamped")) { PointStatus::Clamped } else { PointStatus::Ok },
                    },
                    Err(e) => CurvePoint {
                        fidelity: f,
                        cost_bits: f64::NAN,
                        lower_bound_bits: lower,
                        status: match e {
                            Error::Infeasible(_) => PointStatus::Infeasible,
                            Error::NumericalFailure(_) => PointStatus::NumericalFailure,
                            _ => PointStatus::Error,
                        },
                    },
                }
            })
            .collect()
    });
    Ok(TradeoffCurve { task_label: t.label.clone(), variant, kappa: ex.kappa, f_min: ex.f_min, f_max: ex.f_max, c_min: ex.c_min, points })
}

fn eb_curve(t: &Task, n: usize) -> Result<TradeoffCurve> {
    let star = tasks::derived_task(t, DerivedKind::Transposed)?;
    let kappa = reverse_entropy(t)?.value_bits.max(reverse_entropy(&star)?.value_bits);
    let c_min = c_min_of(&t.input_projector, &t.ctx)?;
    let f_max = accuracy_of_cost(&star, None)?.fidelity;
    let f_min = (c_min - kappa).exp2().min(f_max);
    let status = if eb_exact(t) { PointStatus::Exact } else { PointStatus::Bound };
    let points = grid(f_min, f_max, n)
        .into_iter()
        .map(|f| CurvePoint { fidelity: f, cost_bits: kappa + f.log2(), lower_bound_bits: kappa + f.log2(), status })
        .collect();
    Ok(TradeoffCurve { task_label: t.label.clone(), variant: Variant::Eb, kappa, f_min, f_max, c_min, points })
}

/// Samples the tradeoff on `[F_min, F_max]` for each requested variant.
///
/// The quantum variant solves one cost SDP per point; the classical variant
/// does the same on the measure-and-prepare counterpart of the task; the
/// entanglement-binding variant evaluates `max{κ, κ*} + log2 F` up to the
/// maximum accuracy of the transposed task. Points run on `jobs` threads and
/// come back in grid order.
pub fn scan_curve(t: &Task, n_points: usize, variants: &[Variant], jobs: usize) -> Result<Vec<TradeoffCurve>> {
    if n_points < 2 {
        return Err(Error::InvalidInput("a curve needs at least 2 points".into()));
    }
    let pool =
        rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let mut out = Vec::with_capacity(variants.len());
    for &v in variants {
        out.push(match v {
            Variant::Quantum => sdp_curve(t, v, n_points, &pool)?,
            Variant::Classical => {
                let companion =
                    t.classical_companion()?.ok_or_else(|| Error::InvalidInput(format!("task {} has no classical variant", t.label)))?;
                let mut curve = sdp_curve(&companion, v, n_points, &pool)?;
                curve.task_label = t.label.clone();
                curve
            }
            Variant::Eb => eb_curve(t, n_points)?,
        });
    }
    Ok(out)
}
