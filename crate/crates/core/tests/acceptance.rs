//! Acceptance criteria. Runs without the libtest harness and prints one
//! PASS/FAIL line per criterion; exits nonzero if any fails.

mod common;

use neq_core::cost::{self, Variant};
use neq_core::entropy::{self, DivergenceSpec};
use neq_core::qmat::{self, Subsystem};
use neq_core::quantum::{ChoiChannel, GibbsContext, Hamiltonian};
use neq_core::random;
use neq_core::tasks::{self, CloningSpec, DerivedKind, Task};
use rand::Rng;
use std::f64::consts::{LN_2, LOG2_E};
use std::time::Instant;

#[derive(Default)]
struct Tally {
    checks: usize,
    max_err: f64,
    fails: Vec<String>,
}

impl Tally {
    fn eq(&mut self, what: impl AsRef<str>, got: f64, want: f64, tol: f64) {
        self.checks += 1;
        let err = (got - want).abs();
        if err.is_nan() || err > tol {
            self.fails.push(format!("{}: got {got:.10}, want {want:.10}", what.as_ref()));
        }
        if err.is_finite() {
            self.max_err = self.max_err.max(err);
        }
    }

    fn le(&mut self, what: impl AsRef<str>, lhs: f64, rhs: f64) {
        self.checks += 1;
        if lhs.is_nan() || rhs.is_nan() || lhs > rhs {
            self.fails.push(format!("{}: {lhs:.10} > {rhs:.10}", what.as_ref()));
        }
    }

    fn ok(&mut self, what: impl AsRef<str>, cond: bool) {
        self.checks += 1;
        if !cond {
            self.fails.push(what.as_ref().to_string());
        }
    }

    fn finish(self) -> Result<String, String> {
        if self.fails.is_empty() {
            Ok(format!("{} checks, max error {:.1e}", self.checks, self.max_err))
        } else {
            let n = self.fails.len();
            Err(format!("{n} of {} checks failed; first: {}", self.checks, self.fails.into_iter().take(3).collect::<Vec<_>>().join(" | ")))
        }
    }
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn sym(n: usize, d: usize) -> f64 {
    binom(n + d - 1, d - 1)
}

/// Qubit context with `e^{βΔE} = r` at `β = 1`.
fn qubit(r: f64) -> GibbsContext {
    GibbsContext::symmetric(1.0, &Hamiltonian::ladder(2, r.ln())).unwrap()
}

fn transpose_kappa() -> Outcome {
    let mut t = Tally::default();
    for d in 2..=4 {
        let task = tasks::transposition_task(d, &GibbsContext::degenerate(d, d), 8).unwrap();
        let k = cost::reverse_entropy(&task).unwrap().value_bits;
        t.eq(format!("d={d}"), k, ((d + 1) as f64 / 2.0).log2(), 1e-6);
    }
    t.finish()
}

fn erasure_line() -> Outcome {
    let mut t = Tally::default();
    for (beta, e1) in [(1.0, 0.0), (LN_2, 1.0)] {
        let ctx = GibbsContext::symmetric(beta, &Hamiltonian::new(vec![0.0, e1]).unwrap()).unwrap();
        let task = tasks::erasure_task(2, &ctx).unwrap();
        // ΔA/(kT ln 2) between |0> (free energy E_0 = 0) and the Gibbs state (-kT ln Z).
        let z = 1.0 + (-beta * e1).exp();
        let delta_a = z.ln() / LN_2;
        for f in grid(2f64.powf(-delta_a), 1.0, 11) {
            let r = cost::cost_of_accuracy(&task, f).unwrap();
            let want = delta_a + f.log2();
            t.eq(format!("beta={beta:.3} F={f:.3} cost"), r.value_bits, want, 1e-6);
            t.eq(format!("beta={beta:.3} F={f:.3} work"), r.work_kt(), LN_2 * r.value_bits, 1e-12);
            t.eq(format!("beta={beta:.3} F={f:.3} work oracle"), r.work_kt(), LN_2 * want, 1e-6);
        }
    }
    t.finish()
}

fn werner_cost() -> Outcome {
    let mut t = Tally::default();
    for (n, m, d) in [(1, 2, 2), (1, 3, 2), (2, 3, 2), (1, 2, 3)] {
        let spec = CloningSpec::new(n, m, d).unwrap();
        for beta in [None, Some(LN_2)] {
            let (h, b) = match beta {
                None => (Hamiltonian::degenerate(d), 1.0),
                Some(b) => (Hamiltonian::ladder(d, 1.0), b),
            };
            let z: f64 = h.energies.iter().map(|e| (-b * e).exp()).sum();
            let e_max = h.energies.iter().cloned().fold(f64::MIN, f64::max);
            let want = (m - n) as f64 * (z.log2() + b * e_max * LOG2_E) + (sym(n, d) / sym(m, d)).log2();
            let ch = cost::werner_cloner(&spec).unwrap();
            let ctx = spec.context(&h, b).unwrap();
            let got = cost::channel_cost(&ch, &qmat::identity(spec.d_n()), &ctx).unwrap().value_bits;
            t.eq(format!("({n},{m},{d}) beta={b:.3}"), got, want, 1e-9);
        }
    }
    t.finish()
}

fn cloning_tradeoff() -> Outcome {
    let mut t = Tally::default();
    for m in 2..=4 {
        let spec = CloningSpec::new(1, m, 2).unwrap();
        let task = tasks::cloning_task(&spec, &Hamiltonian::degenerate(2), 1.0, true).unwrap();
        let delta = (m - 1) as f64;
        let f_max = 2.0 / (m + 1) as f64;
        let sdp_f_max = cost::accuracy_of_cost(&task, None).unwrap().fidelity;
        t.eq(format!("1->{m} F_max"), sdp_f_max, f_max, 1e-6);
        let curves = cost::scan_curve(&task, 9, &[Variant::Quantum, Variant::Classical], 2).unwrap();
        for c in &curves {
            for p in &c.points {
                t.eq(format!("1->{m} {} F={:.4}", c.variant.as_str(), p.fidelity), p.cost_bits, delta + p.fidelity.log2(), 1e-5);
            }
        }
        t.eq(format!("1->{m} quantum endpoint"), curves[0].points.last().unwrap().fidelity, f_max, 1e-6);
        let top = curves[1].points.last().unwrap();
        t.eq(format!("1->{m} classical reaches F=1"), top.fidelity, 1.0, 1e-9);
        t.eq(format!("1->{m} classical cost at F=1"), top.cost_bits, delta, 1e-5);
        t.eq(format!("1->{m} F_min"), curves[0].points[0].fidelity, (-delta).exp2(), 1e-6);
    }
    t.finish()
}

fn eb_figure() -> Outcome {
    let mut t = Tally::default();
    let spec = CloningSpec::new(1, 2, 2).unwrap();
    let task = tasks::cloning_task(&spec, &Hamiltonian::degenerate(2), 1.0, true).unwrap();
    let star = tasks::derived_task(&task, DerivedKind::Transposed).unwrap();
    let k_star = 1.0 + (4.0f64 / 3.0).log2();
    t.eq("kappa*", cost::reverse_entropy(&star).unwrap().value_bits, k_star, 1e-6);
    let curves = cost::scan_curve(&task, 11, &[Variant::Quantum, Variant::Eb], 1).unwrap();
    let (q, eb) = (&curves[0], &curves[1]);
    t.eq("EB F_max", eb.f_max, 0.5, 1e-6);
    t.eq("EB kappa", eb.kappa, k_star, 1e-6);
    for p in &eb.points {
        t.eq(format!("EB cost F={:.4}", p.fidelity), p.cost_bits, k_star + p.fidelity.log2(), 1e-6);
        t.eq(format!("gap F={:.4}", p.fidelity), p.cost_bits - (1.0 + p.fidelity.log2()), (4.0f64 / 3.0).log2(), 1e-6);
        t.ok(format!("EB point exact F={:.4}", p.fidelity), p.status == cost::PointStatus::Exact);
    }
    let common = q.points.iter().find(|p| (p.fidelity - 0.5).abs() < 1e-6).expect("quantum curve starts at F = 1/2");
    let eb_half = eb.points.last().unwrap();
    t.eq("gap at the common F = 1/2", eb_half.cost_bits - common.cost_bits, (4.0f64 / 3.0).log2(), 1e-6);
    t.finish()
}

fn test_states() -> Vec<qmat::CMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = vec![common::basis(2, 0), common::basis(2, 1)];
    for k in 0..8 {
        let th = std::f64::consts::TAU * k as f64 / 8.0;
        v.push(qmat::ket(&[qmat::real(s), qmat::c(s * th.cos(), s * th.sin())]));
    }
    v
}

fn qubit_benchmark() -> Outcome {
    let mut t = Tally::default();
    for r in [1.0f64, 2.0, 4.0] {
        let ctx = qubit(r);
        let f_min = (r.sqrt() + 1.0) / (2.0 * r.sqrt() + 1.0);
        for f in grid(f_min, 2.0 / 3.0, 9) {
            let bm = cost::qubit_benchmark(f, &ctx).unwrap();
            let ch = bm.channel.choi().unwrap();
            let want = (f + r * (2.0 * f - 1.0).powi(2) / (1.0 - f)).log2();
            let got = cost::channel_cost(&ch, &qmat::identity(2), &ctx).unwrap().value_bits;
            t.eq(format!("r={r} F={f:.4} cost"), got, want, 1e-6);
            let worst = test_states()
                .iter()
                .map(|psi| {
                    let rho = qmat::projector(psi);
                    qmat::trace_product_re(&rho.transpose(), &ch.apply(&rho).unwrap())
                })
                .fold(f64::INFINITY, f64::min);
            t.eq(format!("r={r} F={f:.4} fidelity"), worst, f, 1e-8);
            let pt = qmat::partial_transpose(&ch.choi, ch.dims, Subsystem::B).unwrap();
            t.le(format!("r={r} F={f:.4} PPT"), -1e-9, qmat::min_eigenvalue(&pt).unwrap());
        }
    }
    t.finish()
}

fn achievability_case(t: &mut Tally, task: &Task, kappa: f64) {
    let ex = cost::f_extremes(task).unwrap();
    t.eq(format!("{} kappa", task.label), ex.kappa, kappa, 1e-6);
    let m0 = cost::accuracy_of_cost(task, None).unwrap().witness.expect("optimal channel");
    let f0 = task.accuracy(&m0.choi);
    for i in 1..=5 {
        let f = ex.f_min + (ex.f_max - ex.f_min) * i as f64 / 6.0;
        let mf = cost::build_mf_channel(task, &m0, f0, f, kappa).unwrap();
        let mf = ChoiChannel::new(mf.choi, mf.dims).unwrap();
        t.eq(format!("{} F={f:.4} accuracy", task.label), task.accuracy(&mf.choi), f, 1e-6);
        let c = cost::channel_cost(&mf, &task.input_projector, &task.ctx).unwrap().value_bits;
        t.eq(format!("{} F={f:.4} cost", task.label), c, kappa + f.log2(), 1e-6);
    }
}

fn achievability() -> Outcome {
    let mut t = Tally::default();
    for r in [1.0f64, 2.0] {
        let ctx = qubit(r);
        achievability_case(&mut t, &tasks::erasure_task(2, &ctx).unwrap(), (1.0 + 1.0 / r).log2());
    }
    let deg = Hamiltonian::degenerate(2);
    for m in [2, 3] {
        let spec = CloningSpec::new(1, m, 2).unwrap();
        for quantum in [true, false] {
            achievability_case(&mut t, &tasks::cloning_task(&spec, &deg, 1.0, quantum).unwrap(), (m - 1) as f64);
        }
    }
    // 1 -> 2 classical cloning with levels (0, 1) at β = ln 2: κ = log2(3/2) + 1.
    let spec = CloningSpec::new(1, 2, 2).unwrap();
    let task = tasks::cloning_task(&spec, &Hamiltonian::ladder(2, 1.0), LN_2, false).unwrap();
    achievability_case(&mut t, &task, 3f64.log2());
    t.finish()
}

fn c_min_and_f_min() -> Outcome {
    let mut t = Tally::default();
    let mut rng = random::rng(2024);
    for case in 0..10 {
        let d = rng.gen_range(2..=6);
        let h = random::hamiltonian(d, &mut rng).unwrap();
        let beta = rng.gen_range(0.2..2.0);
        let ctx = GibbsContext::symmetric(beta, &h).unwrap();
        let pi = random::diagonal_projector(d, &mut rng);
        let weights: Vec<f64> = h.energies.iter().map(|e| (-beta * e).exp()).collect();
        let z: f64 = weights.iter().sum();
        let inside: Vec<usize> = (0..d).filter(|&i| pi[(i, i)].re > 0.5).collect();
        let c_min = (inside.iter().map(|&i| weights[i]).sum::<f64>() / z).log2();
        t.eq(format!("case {case} c_min"), cost::c_min_of(&pi, &ctx).unwrap(), c_min, 1e-12);
        let mut best = f64::INFINITY;
        for _ in 0..100 {
            let ch = random::gibbs_mapping_channel(&ctx, &pi, &mut rng).unwrap();
            let c = cost::channel_cost(&ch, &pi, &ctx).unwrap().value_bits;
            t.le(format!("case {case} channel below c_min"), c_min - 1e-6, c);
            best = best.min(c);
        }
        t.eq(format!("case {case} best channel"), best, c_min, 1e-6);

        let table: Vec<usize> = (0..d).map(|_| rng.gen_range(0..d)).collect();
        let mut task = tasks::classical_task(&table, &ctx).unwrap();
        task.perf_ops = task.perf_ops.into_iter().enumerate().filter(|(x, _)| inside.contains(x)).map(|(_, op)| op).collect();
        task.input_projector = pi.clone();
        task.validate().unwrap();
        let kappa = cost::reverse_entropy(&task).unwrap().value_bits;
        let f_min = (c_min - kappa).exp2();
        let back = cost::accuracy_of_cost(&task, Some(c_min)).unwrap().fidelity;
        t.eq(format!("case {case} F_min round trip"), back, f_min, 1e-5);
    }
    t.finish()
}

fn counterexample() -> Outcome {
    let mut t = Tally::default();
    let ch = ChoiChannel::from_action(2, 2, |x| (qmat::identity(2) * qmat::trace(x) + x.transpose()).unscale(3.0));
    let gamma = qmat::diag(&[2.0 / 3.0, 1.0 / 3.0]);
    let states = test_states();
    for psi in &states[2..] {
        let out = ch.apply(&qmat::projector(psi)).unwrap();
        let d = entropy::relative_entropy(&out, &gamma).unwrap();
        t.eq("D(M(e)||Gamma)", d, 1.0 / 6.0, 2e-3);
        t.eq("1/6 + log2(2/3)", d + (2.0f64 / 3.0).log2(), -0.418, 2e-3);
    }
    for alpha in [0.3, 0.5, 0.8, 2.0] {
        for spec in [DivergenceSpec::renyi(alpha), DivergenceSpec::sandwiched(alpha)] {
            for psi in &states {
                let rho = qmat::projector(psi);
                let out = ch.apply(&rho).unwrap();
                let diff = entropy::divergence(&out, &gamma, spec).unwrap() - entropy::divergence(&rho, &gamma, spec).unwrap();
                t.le(format!("{:?} alpha={alpha}", spec.family), diff, 1e-9);
            }
        }
    }
    let task = tasks::transposition_task(2, &qubit(2.0), 8).unwrap();
    let c = cost::cost_of_accuracy(&task, 2.0 / 3.0).unwrap().value_bits;
    t.le("transposition cost at F = 2/3", (4.0f64 / 3.0).log2() - 1e-6, c);
    t.ok("transposition cost positive", c > 0.0);
    t.finish()
}

fn properties() -> Outcome {
    let mut t = Tally::default();
    for (name, outcome) in common::all_properties() {
        if let Err(e) = outcome {
            t.fails.push(format!("{name}: {e}"));
        }
        t.checks += common::CASES as usize;
    }
    t.finish()
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("reverse entropy of transposition", transpose_kappa),
        ("erasure line and work report", erasure_line),
        ("Werner cloner cost", werner_cost),
        ("cloning tradeoff curves", cloning_tradeoff),
        ("entanglement-binding curve and gap", eb_figure),
        ("qubit benchmark family", qubit_benchmark),
        ("achieving-channel construction", achievability),
        ("c_min and F_min", c_min_and_f_min),
        ("relative-entropy counterexample", counterexample),
        ("randomized property suites", properties),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail}; {secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({detail}; {secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
