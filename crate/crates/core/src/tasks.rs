//! Information-processing tasks as families of performance operators.
//!
//! A channel with Choi operator `M` scores `min_x Tr[M Ω_x]` on a task. Tasks
//! on several copies of a system are written in the occupation-number basis
//! of the symmetric subspace, so a task on `N` inputs and `N'` outputs of
//! dimension `d` has sides `d_N` and `d_N'` rather than `d^N` and `d^N'`.

use crate::error::{Error, Result};
use crate::qmat::{self, BipartiteDims, CMatrix, Subsystem};
use crate::quantum::{self, GibbsContext, Hamiltonian};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Largest Choi side handled by the SDP paths for multi-copy tasks.
pub const MAX_CHOI_SIDE: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TaskKind {
    Raw,
    Classical { table: Vec<usize> },
    Erasure { d: usize },
    Storage { d: usize, samples: usize },
    Transposition { d: usize, samples: usize },
    Cloning { n: usize, m: usize, d: usize, quantum: bool },
    TimeReversed { inner: Box<TaskKind> },
    Transposed { inner: Box<TaskKind> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Task {
    pub label: String,
    pub dims: BipartiteDims,
    pub ctx: GibbsContext,
    #[serde(with = "matrix_list")]
    pub perf_ops: Vec<CMatrix>,
    #[serde(with = "qmat::serde_cmatrix")]
    pub input_projector: CMatrix,
    /// Single averaged operator whose score equals the worst-case score of
    /// the optimal channels, by symmetry. Present only when that holds.
    #[serde(with = "optional_matrix", default)]
    pub covariant_average: Option<CMatrix>,
    #[serde(default = "raw_kind")]
    pub kind: TaskKind,
}

fn raw_kind() -> TaskKind {
    TaskKind::Raw
}

mod matrix_list {
    use crate::qmat::{CMatrix, MatrixJson};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[CMatrix], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(MatrixJson::from).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<CMatrix>, D::Error> {
        Vec::<MatrixJson>::deserialize(d)?.iter().map(|j| CMatrix::try_from(j).map_err(serde::de::Error::custom)).collect()
    }
}

mod optional_matrix {
    use crate::qmat::{CMatrix, MatrixJson};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<CMatrix>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(MatrixJson::from).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<CMatrix>, D::Error> {
        match Option::<MatrixJson>::deserialize(d)? {
            Some(j) => CMatrix::try_from(&j).map(Some).map_err(serde::de::Error::custom),
            None => Ok(None),
        }
    }
}

impl Task {
    /// Checks shapes, positivity, `[Π_A, H_A] = 0`, and that every operator's
    /// input marginal lies inside `Π_A`.
    pub fn validate(&self) -> Result<()> {
        self.ctx.validate()?;
        if self.ctx.dims() != self.dims {
            return Err(Error::InvalidInput("context dimensions do not match the task".into()));
        }
        let (da, n) = (self.dims.d_a, self.dims.total());
        let pi = &self.input_projector;
        if pi.nrows() != da || pi.ncols() != da {
            return Err(Error::InvalidInput("input projector has the wrong side".into()));
        }
        if qmat::max_abs(&(pi * pi - pi)) > 1e-9 || !qmat::is_hermitian(pi, 1e-12) {
            return Err(Error::InvalidProjector("input projector is not an orthogonal projector".into()));
        }
        let h = qmat::diag(&self.ctx.energies_a);
        if qmat::max_abs(&(pi * &h - &h * pi)) > 1e-12 * (1.0 + qmat::max_abs(&h)) {
            return Err(Error::InvalidProjector("input projector does not commute with H_A".into()));
        }
        if self.perf_ops.is_empty() && self.covariant_average.is_none() {
            return Err(Error::InvalidInput("task has no performance operators".into()));
        }
        let outside = qmat::identity(da) - pi;
        for om in self.perf_ops.iter().chain(self.covariant_average.iter()) {
            if om.nrows() != n || om.ncols() != n {
                return Err(Error::InvalidInput(format!("performance operator side {} != {n}", om.nrows())));
            }
            let lo = qmat::min_eigenvalue(om)?;
            if lo < -1e-9 * qmat::max_abs(om).max(1.0) {
                return Err(qmat::QmatError::NotPsd(lo).into());
            }
            let marginal = qmat::partial_trace(om, self.dims, Subsystem::B)?;
            if qmat::trace_product_re(&outside, &marginal) > 1e-9 * marginal.trace().re.abs().max(1e-300) {
                return Err(Error::Support("performance operator reaches outside the input projector".into()));
            }
        }
        Ok(())
    }

    /// Worst-case score `min_x Tr[M Ω_x]` over the finite family.
    pub fn worst_case_accuracy(&self, choi: &CMatrix) -> f64 {
        self.perf_ops.iter().map(|om| qmat::trace_product_re(om, choi)).fold(f64::INFINITY, f64::min)
    }

    /// Score used by the optimization: the averaged operator when present,
    /// otherwise the finite family.
    pub fn accuracy(&self, choi: &CMatrix) -> f64 {
        match &self.covariant_average {
            Some(avg) => qmat::trace_product_re(avg, choi),
            None => self.worst_case_accuracy(choi),
        }
    }

    /// Operators imposed as fidelity constraints.
    pub fn constraint_ops(&self) -> Vec<CMatrix> {
        match &self.covariant_average {
            Some(avg) => vec![avg.clone()],
            None => self.perf_ops.clone(),
        }
    }

    pub fn is_classical(&self) -> bool {
        matches!(self.kind, TaskKind::Classical { .. })
    }

    /// Measure-and-prepare counterpart used for the classical tradeoff curve.
    pub fn classical_companion(&self) -> Result<Option<Task>> {
        Ok(match &self.kind {
            TaskKind::Cloning { n, m, d, quantum: true } => {
                Some(cloning_task(&CloningSpec::new(*n, *m, *d)?, &self.base_hamiltonian()?, self.ctx.beta, false)?)
            }
            TaskKind::Classical { .. } => Some(self.clone()),
            TaskKind::Erasure { d } => Some(classical_task(&vec![0; *d], &self.ctx)?),
            _ => None,
        })
    }

    /// The single-copy Hamiltonian of a multi-copy task.
    fn base_hamiltonian(&self) -> Result<Hamiltonian> {
        match &self.kind {
            TaskKind::Cloning { n, d, .. } => {
                // Occupation (n, 0, ..., 0) - ... single-mode energies are E_j = energy(|n e_j>) / n.
                let occ = occupations(*n, *d);
                let energies = (0..*d)
                    .map(|j| {
                        let idx = occ.iter().position(|o| o[j] == *n).expect("pure occupation exists");
                        self.ctx.energies_a[idx] / *n as f64
                    })
                    .collect();
                Hamiltonian::new(energies)
            }
            _ => Err(Error::InvalidInput("task has no single-copy Hamiltonian".into())),
        }
    }
}

// ---------------------------------------------------------------------------
// Symmetric subspace

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Dimension of the symmetric subspace of `k` copies of `C^d`.
pub fn sym_dim(k: usize, d: usize) -> usize {
    binomial(k + d - 1, d - 1).round() as usize
}

/// Occupation vectors of `k` particles in `d` modes, ordered so that the
/// first vector has every particle in mode 0.
pub fn occupations(k: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, modes: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if modes == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=left).rev() {
            prefix.push(first);
            rec(left - first, modes - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if d == 0 {
        return out;
    }
    rec(k, d, &mut Vec::with_capacity(d), &mut out);
    out
}

/// `<K, n + r | (|N, n> ⊗ |N', r>)` for normalized symmetric states.
pub fn sym_overlap(n: &[usize], r: &[usize]) -> f64 {
    let big_n: usize = n.iter().sum();
    let big_r: usize = r.iter().sum();
    let num: f64 = n.iter().zip(r).map(|(&a, &b)| binomial(a + b, a)).product();
    (num / binomial(big_n + big_r, big_n)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CloningSpec {
    pub n: usize,
    /// Number of output copies `N'`.
    pub m: usize,
    pub d: usize,
}

impl CloningSpec {
    pub fn new(n: usize, m: usize, d: usize) -> Result<Self> {
        if n == 0 || m < n || d < 2 {
            return Err(Error::InvalidInput(format!("cloning needs 1 <= N <= N' and d >= 2, got N={n} N'={m} d={d}")));
        }
        Ok(Self { n, m, d })
    }

    pub fn delta(&self) -> usize {
        self.m - self.n
    }

    pub fn d_n(&self) -> usize {
        sym_dim(self.n, self.d)
    }

    pub fn d_m(&self) -> usize {
        sym_dim(self.m, self.d)
    }

    pub fn d_total(&self) -> usize {
        sym_dim(self.n + self.m, self.d)
    }

    /// Whether `Sym_N'` is a proper subspace of the `N'`-copy space.
    pub fn has_complement(&self) -> bool {
        self.m >= 2
    }

    /// Output side: `Sym_N'` plus one level standing for its complement.
    ///
    /// Any channel can be compressed so that everything it sends outside
    /// `Sym_N'` lands on that single level, whose Gibbs weight is
    /// `Tr[(I - P_N') Γ^{⊗N'}]`. Scores are unchanged and, since `Γ^{⊗N'}`
    /// commutes with `P_N'`, so is the cost.
    pub fn output_side(&self) -> usize {
        self.d_m() + usize::from(self.has_complement())
    }

    pub fn dims(&self) -> BipartiteDims {
        BipartiteDims::new(self.d_n(), self.output_side())
    }

    /// `Sym_N ⊗ Sym_N'` without the complement level.
    pub fn sym_dims(&self) -> BipartiteDims {
        BipartiteDims::new(self.d_n(), self.d_m())
    }

    /// Embeds an operator on `Sym_N ⊗ Sym_N'` into the task's space.
    pub fn embed_output(&self, op: &CMatrix) -> CMatrix {
        let (dn, dm, db) = (self.d_n(), self.d_m(), self.output_side());
        let idx = |r: usize| (r / dm) * db + r % dm;
        let mut out = CMatrix::zeros(dn * db, dn * db);
        for r in 0..dn * dm {
            for c in 0..dn * dm {
                out[(idx(r), idx(c))] = op[(r, c)];
            }
        }
        out
    }

    /// Optimal universal cloning fidelity `d_N / d_N'`.
    pub fn f_max(&self) -> f64 {
        self.d_n() as f64 / self.d_m() as f64
    }

    pub fn check_size(&self) -> Result<()> {
        if self.d_n() * self.d_m() > MAX_CHOI_SIDE {
            return Err(Error::TooLarge(format!("Choi side d_N d_N' = {} exceeds {MAX_CHOI_SIDE}", self.d_n() * self.d_m())));
        }
        Ok(())
    }

    /// Columns are the vectors `|N+N', k>` written in `Sym_N ⊗ Sym_N'` coordinates.
    pub fn joint_isometry(&self) -> CMatrix {
        let (on, om, ok) = (occupations(self.n, self.d), occupations(self.m, self.d), occupations(self.n + self.m, self.d));
        let index: HashMap<Vec<usize>, usize> = ok.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect();
        let dm = om.len();
        let mut v = CMatrix::zeros(on.len() * dm, ok.len());
        for (i, a) in on.iter().enumerate() {
            for (j, b) in om.iter().enumerate() {
                let k: Vec<usize> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                v[(i * dm + j, index[&k])] = qmat::real(sym_overlap(a, b));
            }
        }
        v
    }

    /// `P_{N+N'}` in `Sym_N ⊗ Sym_N'` coordinates.
    pub fn joint_projector(&self) -> CMatrix {
        let v = self.joint_isometry();
        &v * v.adjoint()
    }

    /// Gibbs context in occupation coordinates. The weights are the matrix
    /// elements of `Γ^{⊗N}` and `Γ^{⊗N'}`, not renormalized to the subspace;
    /// the output complement level carries the remaining weight.
    pub fn context(&self, h: &Hamiltonian, beta: f64) -> Result<GibbsContext> {
        if h.dim() != self.d {
            return Err(Error::InvalidInput("Hamiltonian dimension differs from d".into()));
        }
        let z = h.partition_function(beta);
        let energies = |k: usize| -> Vec<f64> {
            occupations(k, self.d).iter().map(|o| o.iter().zip(&h.energies).map(|(&c, e)| c as f64 * e).sum()).collect()
        };
        let zm = z.powi(self.m as i32);
        let mut energies_b = energies(self.m);
        if self.has_complement() {
            let inside: f64 = energies_b.iter().map(|e| (-beta * e).exp() / zm).sum();
            let w = (1.0 - inside).max(f64::MIN_POSITIVE);
            energies_b.push(-(w * zm).ln() / beta);
        }
        let ctx = GibbsContext {
            beta,
            energies_a: energies(self.n),
            energies_b,
            partition_a: Some(z.powi(self.n as i32)),
            partition_b: Some(zm),
        };
        ctx.validate()?;
        Ok(ctx)
    }

    /// Index of the occupation vector with all `k` particles in mode `x`.
    pub fn pure_index(k: usize, d: usize, x: usize) -> usize {
        occupations(k, d).iter().position(|o| o[x] == k).expect("mode exists")
    }
}

// ---------------------------------------------------------------------------
// Constructors

fn basis_projector(d: usize, i: usize) -> CMatrix {
    qmat::projector(&qmat::basis_ket(d, i))
}

/// `Ω_x = |x><x| ⊗ |f(x)><f(x)|`.
pub fn classical_task(table: &[usize], ctx: &GibbsContext) -> Result<Task> {
    let (da, db) = (ctx.energies_a.len(), ctx.energies_b.len());
    if table.len() != da {
        return Err(Error::InvalidFunction(format!("table has {} entries for {da} inputs", table.len())));
    }
    if let Some(bad) = table.iter().find(|&&y| y >= db) {
        return Err(Error::InvalidFunction(format!("output {bad} outside 0..{db}")));
    }
    let perf_ops = table.iter().enumerate().map(|(x, &y)| qmat::kron(&basis_projector(da, x), &basis_projector(db, y))).collect();
    let task = Task {
        label: format!("classical[{}]", table.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")),
        dims: BipartiteDims::new(da, db),
        ctx: ctx.clone(),
        perf_ops,
        input_projector: qmat::identity(da),
        covariant_average: None,
        kind: TaskKind::Classical { table: table.to_vec() },
    };
    task.validate()?;
    Ok(task)
}

/// Preimage weights `p_f(y) = sum_{x: f(x) = y} g_A(x)`.
pub fn preimage_weights(table: &[usize], ctx: &GibbsContext) -> Vec<f64> {
    let mut p = vec![0.0; ctx.energies_b.len()];
    for (x, g) in ctx.g_a().iter().enumerate() {
        p[table[x]] += g;
    }
    p
}

/// Erasure `rho -> |0><0|`: the basis family, plus the averaged operator
/// `(I/d) ⊗ |0><0|` when the Hamiltonian is fully degenerate.
pub fn erasure_task(d: usize, ctx: &GibbsContext) -> Result<Task> {
    if d < 2 || ctx.dims() != BipartiteDims::new(d, d) {
        return Err(Error::InvalidInput("erasure needs d >= 2 and a d x d context".into()));
    }
    let ground = basis_projector(d, 0);
    let perf_ops = (0..d).map(|x| qmat::kron(&basis_projector(d, x), &ground)).collect();
    let covariant_average = ctx.is_degenerate().then(|| qmat::kron(&qmat::identity(d).unscale(d as f64), &ground));
    let task = Task {
        label: format!("erasure[d={d}]"),
        dims: BipartiteDims::new(d, d),
        ctx: ctx.clone(),
        perf_ops,
        input_projector: qmat::identity(d),
        covariant_average,
        kind: TaskKind::Erasure { d },
    };
    task.validate()?;
    Ok(task)
}

/// Basis states plus equatorial states `(|i> + e^{iθ}|j>)/√2` for each pair
/// `i < j` at `samples` equally spaced phases.
pub fn sample_states(d: usize, samples: usize) -> Vec<CMatrix> {
    let mut out: Vec<CMatrix> = (0..d).map(|i| basis_projector(d, i)).collect();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..d {
        for j in i + 1..d {
            for k in 0..samples {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
                let mut v = CMatrix::zeros(d, 1);
                v[(i, 0)] = qmat::real(s);
                v[(j, 0)] = qmat::c(s * theta.cos(), s * theta.sin());
                out.push(qmat::projector(&v));
            }
        }
    }
    out
}

/// Swap operator on two copies of `C^d`.
pub fn swap_operator(d: usize) -> CMatrix {
    let mut s = CMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            s[(a * d + b, b * d + a)] = qmat::real(1.0);
        }
    }
    s
}

/// `P_+ / d_+`, the Haar average of `ψ ⊗ ψ`.
pub fn symmetric_average(d: usize) -> CMatrix {
    let dplus = (d * (d + 1) / 2) as f64;
    ((qmat::identity(d * d) + swap_operator(d)).unscale(2.0)).unscale(dplus)
}

fn sampled_task(d: usize, ctx: &GibbsContext, samples: usize, transpose_output: bool) -> Result<Task> {
    if d < 2 || ctx.dims() != BipartiteDims::new(d, d) {
        return Err(Error::InvalidInput("task needs d >= 2 and a d x d context".into()));
    }
    if samples < 3 {
        return Err(Error::InvalidInput("at least 3 equatorial samples are needed".into()));
    }
    let perf_ops = sample_states(d, samples)
        .iter()
        .map(|rho| {
            let out = if transpose_output { rho.transpose() } else { rho.clone() };
            qmat::kron(&rho.transpose(), &out)
        })
        .collect();
    let dims = BipartiteDims::new(d, d);
    let avg = symmetric_average(d);
    let covariant_average = if ctx.is_degenerate() {
        Some(if transpose_output { avg } else { qmat::partial_transpose(&avg, dims, Subsystem::A)? })
    } else {
        None
    };
    let (label, kind) = if transpose_output {
        (format!("transpose[d={d};samples={samples}]"), TaskKind::Transposition { d, samples })
    } else {
        (format!("storage[d={d};samples={samples}]"), TaskKind::Storage { d, samples })
    };
    let task = Task { label, dims, ctx: ctx.clone(), perf_ops, input_projector: qmat::identity(d), covariant_average, kind };
    task.validate()?;
    Ok(task)
}

/// Storage `rho -> rho` on basis and equatorial samples.
pub fn storage_task(d: usize, ctx: &GibbsContext, samples: usize) -> Result<Task> {
    sampled_task(d, ctx, samples, false)
}

/// Transposition `rho -> rho^T` on basis and equatorial samples.
pub fn transposition_task(d: usize, ctx: &GibbsContext, samples: usize) -> Result<Task> {
    sampled_task(d, ctx, samples, true)
}

/// `N -> N'` cloning of a single-copy system with Hamiltonian `h`.
///
/// The classical variant scores basis states `|x>^{⊗N} -> |x>^{⊗N'}`. The
/// quantum variant adds the Haar average `(P_{N+N'}/d_{N+N'})^{T_A}`; in the
/// degenerate case that operator alone decides the optimum.
pub fn cloning_task(spec: &CloningSpec, h: &Hamiltonian, beta: f64, quantum: bool) -> Result<Task> {
    spec.check_size()?;
    let ctx = spec.context(h, beta)?;
    let dims = spec.dims();
    let perf_ops: Vec<CMatrix> = (0..spec.d)
        .map(|x| {
            let a = CloningSpec::pure_index(spec.n, spec.d, x);
            let b = CloningSpec::pure_index(spec.m, spec.d, x);
            qmat::kron(&basis_projector(dims.d_a, a), &basis_projector(dims.d_b, b))
        })
        .collect();
    let avg = if quantum {
        let p = spec.joint_projector().unscale(spec.d_total() as f64);
        Some(spec.embed_output(&qmat::partial_transpose(&p, spec.sym_dims(), Subsystem::A)?))
    } else {
        None
    };
    let flat = h.energies.iter().all(|e| *e == h.energies[0]);
    let (perf_ops, covariant_average) = match (quantum, flat) {
        (false, _) => (perf_ops, None),
        (true, true) => (perf_ops, avg),
        // Without full degeneracy the average is kept as one more test
        // operator; the family then bounds the continuous task from below.
        (true, false) => {
            let mut ops = perf_ops;
            ops.push(avg.expect("quantum average"));
            (ops, None)
        }
    };
    let label = format!("{}cloning[n={};m={};d={}]", if quantum { "" } else { "classical-" }, spec.n, spec.m, spec.d);
    let task = Task {
        label,
        dims,
        ctx,
        perf_ops,
        input_projector: qmat::identity(dims.d_a),
        covariant_average,
        kind: TaskKind::Cloning { n: spec.n, m: spec.m, d: spec.d, quantum },
    };
    task.validate()?;
    Ok(task)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DerivedKind {
    TimeReversed,
    Transposed,
}

pub fn derived_task(t: &Task, kind: DerivedKind) -> Result<Task> {
    match kind {
        DerivedKind::Transposed => {
            let map = |om: &CMatrix| quantum::transpose_perf_op(om, t.dims);
            let inner = match &t.kind {
                TaskKind::Transposed { inner } => Some((**inner).clone()),
                _ => None,
            };
            Ok(Task {
                label: format!("{}*", t.label),
                dims: t.dims,
                ctx: t.ctx.clone(),
                perf_ops: t.perf_ops.iter().map(map).collect::<Result<_>>()?,
                input_projector: t.input_projector.clone(),
                covariant_average: t.covariant_average.as_ref().map(map).transpose()?,
                kind: inner.unwrap_or_else(|| TaskKind::Transposed { inner: Box::new(t.kind.clone()) }),
            })
        }
        DerivedKind::TimeReversed => {
            let map = |om: &CMatrix| quantum::time_reverse_perf_op(om, &t.ctx);
            let inner = match &t.kind {
                TaskKind::TimeReversed { inner } => Some((**inner).clone()),
                _ => None,
            };
            Ok(Task {
                label: format!("{}~rev", t.label),
                dims: t.dims.swapped(),
                ctx: t.ctx.swapped(),
                perf_ops: t.perf_ops.iter().map(map).collect::<Result<_>>()?,
                input_projector: qmat::identity(t.dims.d_b),
                covariant_average: t.covariant_average.as_ref().map(map).transpose()?,
                kind: inner.unwrap_or_else(|| TaskKind::TimeReversed { inner: Box::new(t.kind.clone()) }),
            })
        }
    }
}

/// Parse `builtin:<name>;key=value;...` into a task. `beta` and `h` set the
/// single-system thermal data; a missing Hamiltonian means degenerate levels.
pub fn builtin_task(uri: &str, beta: f64, energies: Option<&[f64]>) -> Result<Task> {
    let body = uri.strip_prefix("builtin:").ok_or_else(|| Error::InvalidInput(format!("not a builtin task URI: {uri}")))?;
    let mut parts = body.split(';');
    let name = parts.next().unwrap_or_default().trim();
    let mut params: HashMap<String, String> = HashMap::new();
    for kv in parts.filter(|p| !p.trim().is_empty()) {
        let (k, v) = kv.split_once('=').ok_or_else(|| Error::InvalidInput(format!("expected key=value, got '{kv}'")))?;
        params.insert(k.trim().to_string(), v.trim().to_string());
    }
    let get = |k: &str, default: Option<usize>| -> Result<usize> {
        match params.get(k) {
            Some(v) => v.parse().map_err(|_| Error::InvalidInput(format!("parameter {k}='{v}' is not an integer"))),
            None => default.ok_or_else(|| Error::InvalidInput(format!("missing parameter {k}"))),
        }
    };
    let hamiltonian = |d: usize| -> Result<Hamiltonian> {
        match energies {
            Some(e) if e.len() == d => Hamiltonian::new(e.to_vec()),
            Some(e) => Err(Error::InvalidInput(format!("{} energies given for dimension {d}", e.len()))),
            None => Ok(Hamiltonian::degenerate(d)),
        }
    };
    match name {
        "cloning" => {
            let spec = CloningSpec::new(get("n", Some(1))?, get("m", Some(2))?, get("d", Some(2))?)?;
            cloning_task(&spec, &hamiltonian(spec.d)?, beta, true)
        }
        "classical-cloning" => {
            let spec = CloningSpec::new(get("n", Some(1))?, get("m", Some(2))?, get("d", Some(2))?)?;
            cloning_task(&spec, &hamiltonian(spec.d)?, beta, false)
        }
        "erasure" => {
            let d = get("d", Some(2))?;
            erasure_task(d, &GibbsContext::symmetric(beta, &hamiltonian(d)?)?)
        }
        "transpose" | "storage" => {
            let d = get("d", Some(2))?;
            let samples = get("samples", Some(8))?;
            let ctx = GibbsContext::symmetric(beta, &hamiltonian(d)?)?;
            if name == "transpose" {
                transposition_task(d, &ctx, samples)
            } else {
                storage_task(d, &ctx, samples)
            }
        }
        "classical" => {
            let table: Vec<usize> = params
                .get("table")
                .ok_or_else(|| Error::InvalidInput("missing parameter table".into()))?
                .split(',')
                .map(|v| v.trim().parse().map_err(|_| Error::InvalidFunction(format!("bad table entry '{v}'"))))
                .collect::<Result<_>>()?;
            let d_in = table.len();
            let d_out = get("out", Some(table.iter().max().map_or(1, |m| m + 1).max(d_in)))?;
            let ctx = match energies {
                Some(_) => {
                    let h = hamiltonian(d_in)?;
                    let h_out = if d_out == d_in { h.clone() } else { Hamiltonian::degenerate(d_out) };
                    GibbsContext::new(beta, &h, &h_out)?
                }
                None => GibbsContext::new(beta, &Hamiltonian::degenerate(d_in), &Hamiltonian::degenerate(d_out))?,
            };
            classical_task(&table, &ctx)
        }
        other => Err(Error::InvalidInput(format!("unknown builtin task '{other}'"))),
    }
}
