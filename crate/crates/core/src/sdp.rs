//! Dense semidefinite programming over complex Hermitian cones.
//!
//! Problems are stated with Hermitian matrix variables and scalar variables
//! tied together by linear maps. They are compiled to a real standard form
//!
//! ```text
//! min <C, X>  s.t.  <A_i, X> = b_i,  X = diag(X_1, ..., X_k) ⪰ 0
//! ```
//!
//! where a complex `n x n` block becomes the real `2n x 2n` block
//! `[[Re, -Im], [Im, Re]]`. The real problem is solved by a primal-dual
//! interior-point method on the homogeneous self-dual embedding with
//! Nesterov-Todd scaling and Mehrotra's predictor-corrector, so infeasible
//! and unbounded problems end with a certificate instead of diverging.

use crate::qmat::{self, BipartiteDims, CMatrix, Subsystem};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

type RMat = DMatrix<f64>;
type RVec = DVector<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cone {
    /// Complex Hermitian positive semidefinite matrix of the given side.
    Hermitian(usize),
    /// Real scalar constrained to be nonnegative.
    Nonneg,
    /// Unconstrained real scalar.
    Free,
}

/// A linear map from a variable to a Hermitian matrix.
#[derive(Debug, Clone)]
pub enum LinMap {
    /// `X -> sum_k K_k X L_k^†`. The sum must be Hermiticity preserving.
    Sandwich(Vec<(CMatrix, CMatrix)>),
    /// `t -> t C` for a scalar variable.
    Scale(CMatrix),
    /// `X -> Tr[Ω X]`, a `1 x 1` output.
    Trace(CMatrix),
}

impl LinMap {
    pub fn identity() -> Self {
        LinMap::Sandwich(vec![])
    }

    /// `X -> Tr_which X` on a bipartite variable.
    pub fn partial_trace(dims: BipartiteDims, which: Subsystem) -> Self {
        let (da, db) = (dims.d_a, dims.d_b);
        let terms = match which {
            Subsystem::B => (0..db)
                .map(|b| {
                    let k = qmat::kron(&qmat::identity(da), &qmat::basis_ket(db, b).adjoint());
                    (k.clone(), k)
                })
                .collect(),
            Subsystem::A => (0..da)
                .map(|a| {
                    let k = qmat::kron(&qmat::basis_ket(da, a).adjoint(), &qmat::identity(db));
                    (k.clone(), k)
                })
                .collect(),
        };
        LinMap::Sandwich(terms)
    }

    /// `X -> Tr_A[(P ⊗ I_B) X]` for a PSD operator `P` on A.
    pub fn weighted_trace_a(dims: BipartiteDims, p: &CMatrix) -> Result<Self, qmat::QmatError> {
        let root = qmat::sqrt_psd(p)?;
        let terms = (0..dims.d_a)
            .map(|a| {
                let row = qmat::basis_ket(dims.d_a, a).adjoint() * &root;
                let k = qmat::kron(&row, &qmat::identity(dims.d_b));
                (k.clone(), k)
            })
            .collect();
        Ok(LinMap::Sandwich(terms))
    }

    /// `X -> I_d ⊗ X`.
    pub fn identity_tensor(d: usize, n: usize) -> Self {
        LinMap::Sandwich(
            (0..d)
                .map(|a| {
                    let k = qmat::kron(&qmat::basis_ket(d, a), &qmat::identity(n));
                    (k.clone(), k)
                })
                .collect(),
        )
    }

    /// `X -> K X K^†`.
    pub fn congruence(k: CMatrix) -> Self {
        LinMap::Sandwich(vec![(k.clone(), k)])
    }
}

#[derive(Debug, Clone)]
pub struct Term {
    pub var: VarId,
    pub map: LinMap,
}

impl Term {
    pub fn new(var: VarId, map: LinMap) -> Self {
        Self { var, map }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Eq,
    /// Left-hand side ⪯ right-hand side.
    Le,
    /// Left-hand side ⪰ right-hand side.
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub terms: Vec<Term>,
    pub relation: Relation,
    pub rhs: CMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Clone)]
pub struct SdpProblem {
    vars: Vec<(String, Cone)>,
    objective: Vec<(VarId, CMatrix)>,
    constraints: Vec<Constraint>,
    sense: Sense,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("malformed problem: {0}")]
pub struct ProblemError(pub String);

impl Default for SdpProblem {
    fn default() -> Self {
        Self::new(Sense::Min)
    }
}

impl SdpProblem {
    pub fn new(sense: Sense) -> Self {
        Self { vars: vec![], objective: vec![], constraints: vec![], sense }
    }

    pub fn add_var(&mut self, name: &str, cone: Cone) -> VarId {
        self.vars.push((name.to_string(), cone));
        VarId(self.vars.len() - 1)
    }

    pub fn hermitian(&mut self, name: &str, side: usize) -> VarId {
        self.add_var(name, Cone::Hermitian(side))
    }

    pub fn nonneg(&mut self, name: &str) -> VarId {
        self.add_var(name, Cone::Nonneg)
    }

    pub fn free(&mut self, name: &str) -> VarId {
        self.add_var(name, Cone::Free)
    }

    /// Adds `Tr[C X]` (matrix variable) or `C_00 t` (scalar) to the objective.
    pub fn objective(&mut self, var: VarId, coeff: CMatrix) {
        self.objective.push((var, coeff));
    }

    pub fn objective_scalar(&mut self, var: VarId, coeff: f64) {
        self.objective.push((var, CMatrix::from_element(1, 1, qmat::real(coeff))));
    }

    pub fn constrain(&mut self, terms: Vec<Term>, relation: Relation, rhs: CMatrix) {
        self.constraints.push(Constraint { terms, relation, rhs });
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn cone(&self, v: VarId) -> Cone {
        self.vars[v.0].1
    }

    pub fn var_name(&self, v: VarId) -> &str {
        &self.vars[v.0].0
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub gap_tol: f64,
    pub feas_tol: f64,
    pub max_iter: usize,
    /// Print one JSON line per iteration on stderr.
    pub verbose: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { gap_tol: 1e-8, feas_tol: 1e-8, max_iter: 200, verbose: false }
    }
}

impl SolveOptions {
    /// Defaults with the gap tolerance taken from `NEQ_SOLVER_GAP` when set.
    pub fn from_env() -> Self {
        let mut opts = Self::default();
        if let Some(g) = std::env::var("NEQ_SOLVER_GAP").ok().and_then(|s| s.parse::<f64>().ok()) {
            if g > 0.0 && g.is_finite() {
                opts.gap_tol = g;
            }
        }
        opts
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    NumericalFailure,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Matrix(CMatrix),
    Scalar(f64),
}

impl Value {
    pub fn matrix(&self) -> Option<&CMatrix> {
        match self {
            Value::Matrix(m) => Some(m),
            Value::Scalar(_) => None,
        }
    }

    pub fn scalar(&self) -> Option<f64> {
        match self {
            Value::Scalar(s) => Some(*s),
            Value::Matrix(_) => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: Status,
    /// Primal objective in the problem's own sense.
    pub objective: f64,
    /// Dual objective in the problem's own sense.
    pub dual_objective: f64,
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub values: Vec<Value>,
    pub certificate: Option<String>,
}

impl SdpSolution {
    pub fn value(&self, v: VarId) -> &Value {
        &self.values[v.0]
    }

    pub fn matrix(&self, v: VarId) -> &CMatrix {
        self.values[v.0].matrix().expect("variable is not a matrix")
    }

    pub fn scalar(&self, v: VarId) -> f64 {
        self.values[v.0].scalar().expect("variable is not a scalar")
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

// ---------------------------------------------------------------------------
// Real standard form

#[derive(Debug, Clone, Copy)]
struct Entry {
    block: usize,
    r: usize,
    c: usize,
    v: f64,
}

/// Symmetric block-diagonal matrix stored as its nonzero entries (both
/// triangles).
#[derive(Debug, Clone, Default)]
struct SymOp {
    entries: Vec<Entry>,
}

impl SymOp {
    fn inner(&self, xs: &[RMat]) -> f64 {
        self.entries.iter().map(|e| e.v * xs[e.block][(e.r, e.c)]).sum()
    }

    fn add_to(&self, alpha: f64, out: &mut [RMat]) {
        for e in &self.entries {
            out[e.block][(e.r, e.c)] += alpha * e.v;
        }
    }

    fn compress(&mut self) {
        self.entries.sort_by_key(|e| (e.block, e.r, e.c));
        let mut merged: Vec<Entry> = Vec::with_capacity(self.entries.len());
        for e in self.entries.drain(..) {
            match merged.last_mut() {
                Some(last) if last.block == e.block && last.r == e.r && last.c == e.c => last.v += e.v,
                _ => merged.push(e),
            }
        }
        merged.retain(|e| e.v.abs() > 1e-300);
        self.entries = merged;
    }

    fn blocks(&self) -> Vec<usize> {
        let mut b: Vec<usize> = self.entries.iter().map(|e| e.block).collect();
        b.dedup();
        b
    }
}

struct StdForm {
    sizes: Vec<usize>,
    a: Vec<SymOp>,
    b: RVec,
    c: SymOp,
}

/// Where each user variable lives in the real block list.
#[derive(Debug, Clone, Copy)]
enum Slot {
    Matrix { block: usize, n: usize },
    Nonneg { block: usize },
    Free { plus: usize, minus: usize },
}

struct Compiled {
    form: StdForm,
    slots: Vec<Slot>,
    sign: f64,
}

/// Hermitian basis of `k x k` matrices, orthonormal under `Tr[A B]`.
fn hermitian_basis(k: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(k * k);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for p in 0..k {
        let mut e = CMatrix::zeros(k, k);
        e[(p, p)] = qmat::real(1.0);
        out.push(e);
        for q in p + 1..k {
            let mut re = CMatrix::zeros(k, k);
            re[(p, q)] = qmat::real(s);
            re[(q, p)] = qmat::real(s);
            out.push(re);
            let mut im = CMatrix::zeros(k, k);
            im[(p, q)] = qmat::c(0.0, s);
            im[(q, p)] = qmat::c(0.0, -s);
            out.push(im);
        }
    }
    out
}

/// Push the real functional equal to `Tr[G Y]` (matrix slot) or `g t` (scalar slot).
fn push_functional(op: &mut SymOp, slot: Slot, g: &CMatrix) {
    match slot {
        Slot::Matrix { block, n } => {
            let h = qmat::hermitian_part(g);
            for i in 0..n {
                for j in 0..n {
                    let z = h[(i, j)];
                    // Tr[G Y] = Re sum_ij G_ij Y_ji, and Y_ji = (X11+X22)_ji/2 + i (X21-X12)_ji/2.
                    if z.re != 0.0 {
                        let v = 0.5 * z.re;
                        op.entries.push(Entry { block, r: i, c: j, v });
                        op.entries.push(Entry { block, r: n + i, c: n + j, v });
                    }
                    if z.im != 0.0 {
                        let v = 0.5 * z.im;
                        op.entries.push(Entry { block, r: n + i, c: j, v });
                        op.entries.push(Entry { block, r: i, c: n + j, v: -v });
                    }
                }
            }
        }
        Slot::Nonneg { block } => {
            let v = g[(0, 0)].re;
            op.entries.push(Entry { block, r: 0, c: 0, v });
        }
        Slot::Free { plus, minus } => {
            let v = g[(0, 0)].re;
            op.entries.push(Entry { block: plus, r: 0, c: 0, v });
            op.entries.push(Entry { block: minus, r: 0, c: 0, v: -v });
        }
    }
}

fn output_side(map: &LinMap, cone: Cone) -> Result<usize, ProblemError> {
    match (map, cone) {
        (LinMap::Sandwich(terms), Cone::Hermitian(n)) => {
            if terms.is_empty() {
                return Ok(n);
            }
            let k = terms[0].0.nrows();
            for (kk, ll) in terms {
                if kk.nrows() != k || ll.nrows() != k || kk.ncols() != n || ll.ncols() != n {
                    return Err(ProblemError("sandwich factors have inconsistent shapes".into()));
                }
            }
            Ok(k)
        }
        (LinMap::Trace(om), Cone::Hermitian(n)) => {
            if om.nrows() != n || om.ncols() != n {
                return Err(ProblemError("trace functional has the wrong side".into()));
            }
            Ok(1)
        }
        (LinMap::Scale(cm), Cone::Nonneg | Cone::Free) => {
            if !cm.is_square() {
                return Err(ProblemError("scale coefficient must be square".into()));
            }
            Ok(cm.nrows())
        }
        _ => Err(ProblemError("map does not fit the variable's cone".into())),
    }
}

/// Functional coefficient `G` with `Tr[B map(X)] = Tr[G X]` for a row `B`.
fn row_coefficient(map: &LinMap, b: &CMatrix, n: usize) -> CMatrix {
    match map {
        LinMap::Sandwich(terms) if terms.is_empty() => b.clone(),
        LinMap::Sandwich(terms) => {
            let mut g = CMatrix::zeros(n, n);
            for (k, l) in terms {
                g += l.adjoint() * b * k;
            }
            g
        }
        LinMap::Trace(om) => om.scale(b[(0, 0)].re),
        LinMap::Scale(cm) => CMatrix::from_element(1, 1, qmat::real(qmat::trace_product_re(b, cm))),
    }
}

fn compile(p: &SdpProblem) -> Result<Compiled, ProblemError> {
    let mut sizes = Vec::new();
    let mut slots = Vec::with_capacity(p.vars.len());
    for (_, cone) in &p.vars {
        let slot = match *cone {
            Cone::Hermitian(n) => {
                if n == 0 {
                    return Err(ProblemError("zero-sided matrix variable".into()));
                }
                sizes.push(2 * n);
                Slot::Matrix { block: sizes.len() - 1, n }
            }
            Cone::Nonneg => {
                sizes.push(1);
                Slot::Nonneg { block: sizes.len() - 1 }
            }
            Cone::Free => {
                sizes.push(1);
                sizes.push(1);
                Slot::Free { plus: sizes.len() - 2, minus: sizes.len() - 1 }
            }
        };
        slots.push(slot);
    }

    let sign = match p.sense {
        Sense::Min => 1.0,
        Sense::Max => -1.0,
    };
    let mut c = SymOp::default();
    for (v, coeff) in &p.objective {
        let cone = p.vars.get(v.0).ok_or_else(|| ProblemError("unknown variable".into()))?.1;
        let expect = match cone {
            Cone::Hermitian(n) => n,
            _ => 1,
        };
        if coeff.nrows() != expect || coeff.ncols() != expect {
            return Err(ProblemError("objective coefficient has the wrong shape".into()));
        }
        push_functional(&mut c, slots[v.0], &coeff.scale(sign));
    }
    c.compress();

    let mut a = Vec::new();
    let mut b = Vec::new();
    for con in &p.constraints {
        let k = con.rhs.nrows();
        if !con.rhs.is_square() || !qmat::is_hermitian(&con.rhs, 1e-10) && qmat::max_abs(&con.rhs) > 0.0 {
            return Err(ProblemError("constraint right-hand side must be Hermitian".into()));
        }
        let mut terms: Vec<(Slot, LinMap, usize)> = Vec::new();
        for t in &con.terms {
            let cone = p.vars.get(t.var.0).ok_or_else(|| ProblemError("unknown variable".into()))?.1;
            let side = output_side(&t.map, cone)?;
            if side != k {
                return Err(ProblemError(format!("term output side {side} does not match rhs side {k}")));
            }
            let n = match cone {
                Cone::Hermitian(n) => n,
                _ => 1,
            };
            terms.push((slots[t.var.0], t.map.clone(), n));
        }
        if con.relation != Relation::Eq {
            let slot = if k == 1 {
                sizes.push(1);
                Slot::Nonneg { block: sizes.len() - 1 }
            } else {
                sizes.push(2 * k);
                Slot::Matrix { block: sizes.len() - 1, n: k }
            };
            let s = if con.relation == Relation::Le { 1.0 } else { -1.0 };
            let map = if k == 1 {
                LinMap::Scale(CMatrix::from_element(1, 1, qmat::real(s)))
            } else {
                LinMap::Sandwich(vec![(qmat::identity(k).scale(s), qmat::identity(k))])
            };
            terms.push((slot, map, k));
        }
        for basis in hermitian_basis(k) {
            let mut row = SymOp::default();
            for (slot, map, n) in &terms {
                let g = row_coefficient(map, &basis, *n);
                push_functional(&mut row, *slot, &g);
            }
            row.compress();
            a.push(row);
            b.push(qmat::trace_product_re(&basis, &con.rhs));
        }
    }
    Ok(Compiled { form: StdForm { sizes, a, b: RVec::from_vec(b), c }, slots, sign })
}

// ---------------------------------------------------------------------------
// Interior-point method

fn zeros_like(sizes: &[usize]) -> Vec<RMat> {
    sizes.iter().map(|&n| RMat::zeros(n, n)).collect()
}

fn identity_like(sizes: &[usize]) -> Vec<RMat> {
    sizes.iter().map(|&n| RMat::identity(n, n)).collect()
}

fn dot(x: &[RMat], y: &[RMat]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a.dot(b)).sum()
}

fn fro(x: &[RMat]) -> f64 {
    dot(x, x).sqrt()
}

fn axpy(alpha: f64, x: &[RMat], y: &mut [RMat]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += xi * alpha;
    }
}

fn symmetrize(m: &mut RMat) {
    let t = (&*m + m.transpose()) * 0.5;
    *m = t;
}

impl StdForm {
    fn apply_a(&self, x: &[RMat]) -> RVec {
        RVec::from_iterator(self.a.len(), self.a.iter().map(|ai| ai.inner(x)))
    }

    fn apply_at(&self, y: &RVec) -> Vec<RMat> {
        let mut out = zeros_like(&self.sizes);
        for (ai, yi) in self.a.iter().zip(y.iter()) {
            if *yi != 0.0 {
                ai.add_to(*yi, &mut out);
            }
        }
        out
    }

    fn c_dense(&self) -> Vec<RMat> {
        let mut out = zeros_like(&self.sizes);
        self.c.add_to(1.0, &mut out);
        out
    }
}

/// Nesterov-Todd scaling data for one block.
struct Scaling {
    r: RMat,
    rinv: RMat,
    w: RMat,
    lambda: Vec<f64>,
}

fn nt_scaling(x: &RMat, s: &RMat) -> Option<Scaling> {
    let lx = x.clone().cholesky()?.l();
    let ls = s.clone().cholesky()?.l();
    let prod = ls.transpose() * &lx;
    let svd = prod.svd(true, true);
    let u = svd.u?;
    let vt = svd.v_t?;
    let lambda: Vec<f64> = svd.singular_values.iter().copied().collect();
    if lambda.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return None;
    }
    let n = lambda.len();
    let inv_sqrt = RVec::from_iterator(n, lambda.iter().map(|l| 1.0 / l.sqrt()));
    let mut r = lx * vt.transpose();
    for j in 0..n {
        let f = inv_sqrt[j];
        r.column_mut(j).scale_mut(f);
    }
    let mut rinv = u.transpose() * ls.transpose();
    for i in 0..n {
        let f = inv_sqrt[i];
        rinv.row_mut(i).scale_mut(f);
    }
    let mut w = &r * r.transpose();
    symmetrize(&mut w);
    Some(Scaling { r, rinv, w, lambda })
}

/// Largest step `alpha` keeping `Λ + alpha D` positive semidefinite.
fn max_step_scaled(lambda: &[f64], d: &RMat) -> f64 {
    let n = lambda.len();
    let mut m = RMat::from_fn(n, n, |i, j| d[(i, j)] / (lambda[i] * lambda[j]).sqrt());
    symmetrize(&mut m);
    let ev = m.symmetric_eigenvalues();
    let lo = ev.iter().copied().fold(f64::INFINITY, f64::min);
    if lo < 0.0 {
        -1.0 / lo
    } else {
        f64::INFINITY
    }
}

struct Direction {
    dx: Vec<RMat>,
    dy: RVec,
    ds: Vec<RMat>,
    dtau: f64,
    dkappa: f64,
}

enum SchurFactor {
    Chol(nalgebra::Cholesky<f64, nalgebra::Dyn>),
    Lu(nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>),
}

impl SchurFactor {
    fn new(m: RMat) -> Option<Self> {
        if let Some(ch) = m.clone().cholesky() {
            return Some(SchurFactor::Chol(ch));
        }
        let scale = m.diagonal().iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
        for k in [1e-14, 1e-12, 1e-10] {
            let mut reg = m.clone();
            for i in 0..reg.nrows() {
                reg[(i, i)] += k * scale;
            }
            if let Some(ch) = reg.cholesky() {
                return Some(SchurFactor::Chol(ch));
            }
        }
        let lu = m.lu();
        if lu.is_invertible() {
            Some(SchurFactor::Lu(lu))
        } else {
            None
        }
    }

    fn solve(&self, rhs: &RVec) -> Option<RVec> {
        let out = match self {
            SchurFactor::Chol(c) => c.solve(rhs),
            SchurFactor::Lu(l) => l.solve(rhs)?,
        };
        out.iter().all(|v| v.is_finite()).then_some(out)
    }
}

struct Iterate {
    x: Vec<RMat>,
    y: RVec,
    s: Vec<RMat>,
    tau: f64,
    kappa: f64,
}

struct Residuals {
    rp: RVec,
    rd: Vec<RMat>,
    rg: f64,
    pobj: f64,
    dobj: f64,
    pres: f64,
    dres: f64,
    gap: f64,
}

fn residuals(f: &StdForm, it: &Iterate, bnorm: f64, cnorm: f64) -> Residuals {
    let ax = f.apply_a(&it.x);
    let rp = &f.b * it.tau - &ax;
    let aty = f.apply_at(&it.y);
    let mut rd = f.c_dense();
    for (i, r) in rd.iter_mut().enumerate() {
        *r *= it.tau;
        *r -= &aty[i];
        *r -= &it.s[i];
    }
    let cx = f.c.inner(&it.x);
    let by = f.b.dot(&it.y);
    let rg = by - cx - it.kappa;
    let pobj = cx / it.tau;
    let dobj = by / it.tau;
    Residuals {
        pres: rp.norm() / it.tau / (1.0 + bnorm),
        dres: fro(&rd) / it.tau / (1.0 + cnorm),
        gap: (pobj - dobj).abs(),
        rp,
        rd,
        rg,
        pobj,
        dobj,
    }
}

fn solve_std(f: &StdForm, opts: &SolveOptions) -> (Status, Iterate, Residuals, usize, Option<String>) {
    let m = f.a.len();
    let nu: f64 = f.sizes.iter().sum::<usize>() as f64;
    let bnorm = f.b.norm();
    let cdense = f.c_dense();
    let cnorm = fro(&cdense);
    let mut it = Iterate { x: identity_like(&f.sizes), y: RVec::zeros(m), s: identity_like(&f.sizes), tau: 1.0, kappa: 1.0 };
    let row_blocks: Vec<Vec<usize>> = f.a.iter().map(|a| a.blocks()).collect();

    let mut iter = 0;
    loop {
        let res = residuals(f, &it, bnorm, cnorm);
        let mu = (dot(&it.x, &it.s) + it.tau * it.kappa) / (nu + 1.0);
        if opts.verbose {
            eprintln!(
                "{}",
                serde_json::json!({
                    "iter": iter, "pobj": res.pobj, "dobj": res.dobj, "pres": res.pres,
                    "dres": res.dres, "gap": res.gap, "tau": it.tau, "kappa": it.kappa, "mu": mu
                })
            );
        }
        if res.pres <= opts.feas_tol && res.dres <= opts.feas_tol && res.gap <= opts.gap_tol * (1.0 + res.pobj.abs()) {
            return (Status::Optimal, it, res, iter, None);
        }
        let by = f.b.dot(&it.y);
        if by > 0.0 {
            let aty = f.apply_at(&it.y);
            let mut cert = aty;
            axpy(1.0, &it.s, &mut cert);
            let pinf = fro(&cert) / by;
            if pinf <= opts.feas_tol {
                let msg = format!("dual ray with b^T y = {by:.3e}, residual {pinf:.3e}");
                return (Status::Infeasible, it, res, iter, Some(msg));
            }
        }
        let cx = f.c.inner(&it.x);
        if cx < 0.0 {
            let dinf = f.apply_a(&it.x).norm() / (-cx);
            if dinf <= opts.feas_tol {
                let msg = format!("primal ray with c^T x = {cx:.3e}, residual {dinf:.3e}");
                return (Status::Unbounded, it, res, iter, Some(msg));
            }
        }
        if iter >= opts.max_iter {
            return (Status::NumericalFailure, it, res, iter, Some("iteration limit reached".into()));
        }
        iter += 1;

        // Scaling and Schur complement.
        let mut scal = Vec::with_capacity(f.sizes.len());
        for (x, s) in it.x.iter().zip(&it.s) {
            match nt_scaling(x, s) {
                Some(sc) => scal.push(sc),
                None => {
                    return (Status::NumericalFailure, it, res, iter, Some("iterate lost positive definiteness".into()));
                }
            }
        }
        let w_op = |op: &[RMat]| -> Vec<RMat> { op.iter().zip(&scal).map(|(x, sc)| &sc.w * x * &sc.w).collect() };

        let mut schur = RMat::zeros(m, m);
        for j in 0..m {
            let mut g = zeros_like(&f.sizes);
            for e in &f.a[j].entries {
                let w = &scal[e.block].w;
                let gb = &mut g[e.block];
                let wr = w.column(e.r);
                let wc = w.column(e.c);
                gb.ger(e.v, &wr, &wc, 1.0);
            }
            for i in j..m {
                if row_blocks[i].iter().any(|b| row_blocks[j].contains(b)) {
                    let v = f.a[i].inner(&g);
                    schur[(i, j)] = v;
                    schur[(j, i)] = v;
                }
            }
        }
        let factor = match SchurFactor::new(schur) {
            Some(fct) => fct,
            None => return (Status::NumericalFailure, it, res, iter, Some("singular Schur complement".into())),
        };

        let wcw = w_op(&cdense);
        let rhs_v = f.apply_a(&wcw) + &f.b;
        let v = match factor.solve(&rhs_v) {
            Some(v) => v,
            None => return (Status::NumericalFailure, it, res, iter, Some("Schur solve failed".into())),
        };
        let mut atv_c = f.apply_at(&v);
        axpy(-1.0, &cdense, &mut atv_c);
        let x2 = w_op(&atv_c);
        let den = f.b.dot(&v) - dot(&cdense, &x2) + it.kappa / it.tau;

        let direction = |eta: f64, rmat: &[RMat], rtau: f64| -> Option<Direction> {
            let mut xbase = Vec::with_capacity(f.sizes.len());
            for (k, sc) in scal.iter().enumerate() {
                let n = sc.lambda.len();
                let z = RMat::from_fn(n, n, |i, j| 2.0 * rmat[k][(i, j)] / (sc.lambda[i] + sc.lambda[j]));
                let mut xb = &sc.r * z * sc.r.transpose() - &sc.w * &res.rd[k] * &sc.w * eta;
                symmetrize(&mut xb);
                xbase.push(xb);
            }
            let rhs_u = &res.rp * eta - f.apply_a(&xbase);
            let u = factor.solve(&rhs_u)?;
            let mut x1 = w_op(&f.apply_at(&u));
            axpy(1.0, &xbase, &mut x1);
            let dtau = (-eta * res.rg - f.b.dot(&u) + dot(&cdense, &x1) + rtau / it.tau) / den;
            if !dtau.is_finite() {
                return None;
            }
            let dy = &u + &v * dtau;
            let mut dx = x1;
            axpy(dtau, &x2, &mut dx);
            let aty = f.apply_at(&dy);
            let mut ds = Vec::with_capacity(f.sizes.len());
            for k in 0..f.sizes.len() {
                let mut d = &res.rd[k] * eta - &aty[k] + &cdense[k] * dtau;
                symmetrize(&mut d);
                ds.push(d);
            }
            for d in dx.iter_mut() {
                symmetrize(d);
            }
            let dkappa = (rtau - it.kappa * dtau) / it.tau;
            Some(Direction { dx, dy, ds, dtau, dkappa })
        };

        let scaled = |d: &Direction| -> (Vec<RMat>, Vec<RMat>) {
            let dxs = d.dx.iter().zip(&scal).map(|(dx, sc)| &sc.rinv * dx * sc.rinv.transpose()).collect();
            let dss = d.ds.iter().zip(&scal).map(|(ds, sc)| sc.r.transpose() * ds * &sc.r).collect();
            (dxs, dss)
        };
        let step_to_boundary = |d: &Direction, dxs: &[RMat], dss: &[RMat]| -> f64 {
            let mut alpha = f64::INFINITY;
            for (k, sc) in scal.iter().enumerate() {
                alpha = alpha.min(max_step_scaled(&sc.lambda, &dxs[k]));
                alpha = alpha.min(max_step_scaled(&sc.lambda, &dss[k]));
            }
            if d.dtau < 0.0 {
                alpha = alpha.min(-it.tau / d.dtau);
            }
            if d.dkappa < 0.0 {
                alpha = alpha.min(-it.kappa / d.dkappa);
            }
            alpha
        };

        // Predictor.
        let r_aff: Vec<RMat> =
            scal.iter().map(|sc| RMat::from_diagonal(&RVec::from_iterator(sc.lambda.len(), sc.lambda.iter().map(|l| -l * l)))).collect();
        let Some(aff) = direction(1.0, &r_aff, -it.tau * it.kappa) else {
            return (Status::NumericalFailure, it, res, iter, Some("predictor direction failed".into()));
        };
        let (dxa, dsa) = scaled(&aff);
        let alpha_aff = step_to_boundary(&aff, &dxa, &dsa).min(1.0);
        let mut mu_aff = (it.tau + alpha_aff * aff.dtau) * (it.kappa + alpha_aff * aff.dkappa);
        for k in 0..f.sizes.len() {
            let xk = &it.x[k] + &aff.dx[k] * alpha_aff;
            let sk = &it.s[k] + &aff.ds[k] * alpha_aff;
            mu_aff += xk.dot(&sk);
        }
        mu_aff /= nu + 1.0;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // Corrector.
        let r_cor: Vec<RMat> = scal
            .iter()
            .enumerate()
            .map(|(k, sc)| {
                let n = sc.lambda.len();
                let mut prod = &dxa[k] * &dsa[k];
                prod = (&prod + prod.transpose()) * 0.5;
                RMat::from_fn(n, n, |i, j| {
                    let base = if i == j { sigma * mu - sc.lambda[i] * sc.lambda[i] } else { 0.0 };
                    base - prod[(i, j)]
                })
            })
            .collect();
        let rtau = sigma * mu - it.tau * it.kappa - aff.dtau * aff.dkappa;
        let Some(dir) = direction(1.0 - sigma, &r_cor, rtau) else {
            return (Status::NumericalFailure, it, res, iter, Some("corrector direction failed".into()));
        };
        let (dxs, dss) = scaled(&dir);
        let alpha = (0.99 * step_to_boundary(&dir, &dxs, &dss)).min(1.0);
        if alpha.is_nan() || alpha <= 1e-12 {
            return (Status::NumericalFailure, it, res, iter, Some("step length collapsed".into()));
        }

        axpy(alpha, &dir.dx, &mut it.x);
        axpy(alpha, &dir.ds, &mut it.s);
        it.y += &dir.dy * alpha;
        it.tau += alpha * dir.dtau;
        it.kappa += alpha * dir.dkappa;
        for k in 0..f.sizes.len() {
            symmetrize(&mut it.x[k]);
            symmetrize(&mut it.s[k]);
        }
    }
}

/// Solve a problem. Never panics on numerical trouble; the status says what happened.
pub fn solve(problem: &SdpProblem, opts: &SolveOptions) -> Result<SdpSolution, ProblemError> {
    let compiled = compile(problem)?;
    let (status, it, res, iterations, certificate) = solve_std(&compiled.form, opts);
    let tau = it.tau.max(f64::MIN_POSITIVE);
    let values = compiled
        .slots
        .iter()
        .map(|slot| match *slot {
            Slot::Matrix { block, n } => {
                let x = &it.x[block];
                let y = CMatrix::from_fn(n, n, |i, j| {
                    Complex64::new(0.5 * (x[(i, j)] + x[(n + i, n + j)]) / tau, 0.5 * (x[(n + i, j)] - x[(i, n + j)]) / tau)
                });
                Value::Matrix(qmat::hermitian_part(&y))
            }
            Slot::Nonneg { block } => Value::Scalar(it.x[block][(0, 0)] / tau),
            Slot::Free { plus, minus } => Value::Scalar((it.x[plus][(0, 0)] - it.x[minus][(0, 0)]) / tau),
        })
        .collect();
    Ok(SdpSolution {
        status,
        objective: compiled.sign * res.pobj,
        dual_objective: compiled.sign * res.dobj,
        gap: res.gap,
        primal_residual: res.pres,
        dual_residual: res.dres,
        iterations,
        values,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{diag, real};

    fn opts() -> SolveOptions {
        SolveOptions::default()
    }

    #[test]
    fn hermitian_basis_is_orthonormal() {
        let b = hermitian_basis(3);
        assert_eq!(b.len(), 9);
        for (i, x) in b.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let ip = qmat::trace_product_re(x, y);
                assert!((ip - if i == j { 1.0 } else { 0.0 }).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn trace_above_diagonal_matrix() {
        let mut p = SdpProblem::new(Sense::Min);
        let l = p.hermitian("lambda", 2);
        p.objective(l, qmat::identity(2));
        p.constrain(vec![Term::new(l, LinMap::identity())], Relation::Ge, diag(&[0.7, 0.2]));
        let sol = solve(&p, &opts()).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.objective - 0.9).abs() < 1e-7);
        assert!(qmat::max_abs(&(sol.matrix(l) - diag(&[0.7, 0.2]))) < 1e-6);
    }

    #[test]
    fn product_min_entropy_instance() {
        let mut sigma = diag(&[0.6, 0.4]);
        sigma[(0, 1)] = qmat::c(0.1, 0.2);
        sigma[(1, 0)] = qmat::c(0.1, -0.2);
        let omega = qmat::kron(&diag(&[0.5, 0.5]), &sigma);
        let mut p = SdpProblem::new(Sense::Min);
        let l = p.hermitian("lambda", 2);
        p.objective(l, qmat::identity(2));
        p.constrain(vec![Term::new(l, LinMap::identity_tensor(2, 2))], Relation::Ge, omega);
        let sol = solve(&p, &opts()).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.objective - 0.5).abs() < 1e-7);
    }

    #[test]
    fn free_scalar_min_eigenvalue() {
        let mut p = SdpProblem::new(Sense::Max);
        let t = p.free("t");
        p.objective_scalar(t, 1.0);
        p.constrain(vec![Term::new(t, LinMap::Scale(qmat::identity(2)))], Relation::Le, diag(&[1.0, 3.0]));
        let sol = solve(&p, &opts()).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.objective - 1.0).abs() < 1e-7);
        assert!((sol.scalar(t) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn negative_free_scalar() {
        let mut p = SdpProblem::new(Sense::Max);
        let t = p.free("t");
        p.objective_scalar(t, 1.0);
        p.constrain(vec![Term::new(t, LinMap::Scale(qmat::identity(2)))], Relation::Le, diag(&[-2.0, 3.0]));
        let sol = solve(&p, &opts()).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.objective + 2.0).abs() < 1e-7);
    }

    #[test]
    fn complex_off_diagonal_is_respected() {
        // max Re Tr[C X] with Tr X = 1; optimum is the top eigenvalue of C.
        let mut cm = diag(&[0.0, 0.0]);
        cm[(0, 1)] = qmat::c(0.0, 1.0);
        cm[(1, 0)] = qmat::c(0.0, -1.0);
        let mut p = SdpProblem::new(Sense::Max);
        let x = p.hermitian("x", 2);
        p.objective(x, cm.clone());
        p.constrain(vec![Term::new(x, LinMap::Trace(qmat::identity(2)))], Relation::Eq, CMatrix::from_element(1, 1, real(1.0)));
        let sol = solve(&p, &opts()).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.objective - 1.0).abs() < 1e-7);
        let xv = sol.matrix(x);
        assert!((qmat::trace_product_re(&cm, xv) - 1.0).abs() < 1e-6);
        assert!(xv[(0, 1)].im.abs() > 0.4);
    }

    #[test]
    fn infeasible_problem_is_detected() {
        // X ⪰ 0 with Tr X = -1.
        let mut p = SdpProblem::new(Sense::Min);
        let x = p.hermitian("x", 2);
        p.objective(x, qmat::identity(2));
        p.constrain(vec![Term::new(x, LinMap::Trace(qmat::identity(2)))], Relation::Eq, CMatrix::from_element(1, 1, real(-1.0)));
        let sol = solve(&p, &opts()).unwrap();
        assert_eq!(sol.status, Status::Infeasible);
        assert!(sol.certificate.is_some());
    }

    #[test]
    fn unbounded_problem_is_detected() {
        // max t subject to t I = X with X ⪰ 0.
        let mut p = SdpProblem::new(Sense::Max);
        let t = p.nonneg("t");
        let x = p.hermitian("x", 2);
        p.objective_scalar(t, 1.0);
        p.constrain(
            vec![
                Term::new(t, LinMap::Scale(qmat::identity(2))),
                Term::new(x, LinMap::Sandwich(vec![(qmat::identity(2).scale(-1.0), qmat::identity(2))])),
            ],
            Relation::Eq,
            CMatrix::zeros(2, 2),
        );
        let sol = solve(&p, &opts()).unwrap();
        assert_eq!(sol.status, Status::Unbounded);
    }

    #[test]
    fn shape_errors_are_reported() {
        let mut p = SdpProblem::new(Sense::Min);
        let x = p.hermitian("x", 2);
        p.constrain(vec![Term::new(x, LinMap::identity())], Relation::Eq, qmat::identity(3));
        assert!(solve(&p, &opts()).is_err());
    }

    #[test]
    fn repeated_solves_agree_exactly() {
        let mut p = SdpProblem::new(Sense::Min);
        let l = p.hermitian("lambda", 2);
        p.objective(l, qmat::identity(2));
        let mut rhs = diag(&[0.7, 0.2]);
        rhs[(0, 1)] = qmat::c(0.1, 0.05);
        rhs[(1, 0)] = qmat::c(0.1, -0.05);
        p.constrain(vec![Term::new(l, LinMap::identity())], Relation::Ge, rhs);
        let a = solve(&p, &opts()).unwrap();
        let b = solve(&p, &opts()).unwrap();
        assert_eq!(a.objective.to_bits(), b.objective.to_bits());
    }
}
