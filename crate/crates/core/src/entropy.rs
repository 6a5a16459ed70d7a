//! One-shot and Rényi entropic quantities.

use crate::error::{require_optimal, Error, Result};
use crate::qmat::{self, BipartiteDims, CMatrix, HermitianEigen, Subsystem, SUPPORT_TOL};
use crate::quantum::{self, GibbsContext};
use crate::sdp::{self, LinMap, Relation, Sense, SolveOptions, Term};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// Petz: `log Tr[rho^a sigma^(1-a)] / (a-1)`.
    Renyi,
    /// `log Tr[(sigma^((1-a)/2a) rho sigma^((1-a)/2a))^a] / (a-1)`.
    Sandwiched,
    VonNeumann,
    DMax,
    DMin,
}

/// How to treat a reference whose support misses part of `rho` when `alpha < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PureReference {
    /// Limit of a full-rank reference approaching the singular one. For
    /// `alpha < 1` this is the value computed on the support.
    Limit,
    /// `+inf` whenever the supports are not nested.
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergenceSpec {
    pub family: Family,
    pub alpha: f64,
    pub pure_reference: PureReference,
}

impl DivergenceSpec {
    pub fn renyi(alpha: f64) -> Self {
        Self { family: Family::Renyi, alpha, pure_reference: PureReference::Limit }
    }

    pub fn sandwiched(alpha: f64) -> Self {
        Self { family: Family::Sandwiched, alpha, pure_reference: PureReference::Limit }
    }

    pub fn von_neumann() -> Self {
        Self { family: Family::VonNeumann, alpha: 1.0, pure_reference: PureReference::Infinity }
    }
}

fn solve(problem: &sdp::SdpProblem, what: &str) -> Result<sdp::SdpSolution> {
    require_optimal(sdp::solve(problem, &SolveOptions::from_env())?, what)
}

/// Optimum of `min Tr[Λ_B]` subject to `I_A ⊗ Λ_B ⪰ omega`.
#[derive(Debug, Clone)]
pub struct HMinSolution {
    pub optimum: f64,
    pub lambda_b: CMatrix,
    pub gap: f64,
}

pub fn h_min_sdp(omega: &CMatrix, dims: BipartiteDims) -> Result<HMinSolution> {
    if omega.nrows() != dims.total() || !omega.is_square() {
        return Err(qmat::QmatError::InvalidDimensions(format!(
            "operator side {} does not match d_A d_B = {}",
            omega.nrows(),
            dims.total()
        ))
        .into());
    }
    qmat::ensure_hermitian(omega)?;
    let mut p = sdp::SdpProblem::new(Sense::Min);
    let lam = p.hermitian("Lambda_B", dims.d_b);
    p.objective(lam, qmat::identity(dims.d_b));
    p.constrain(vec![Term::new(lam, LinMap::identity_tensor(dims.d_a, dims.d_b))], Relation::Ge, qmat::hermitian_part(omega));
    let sol = solve(&p, "conditional min-entropy")?;
    Ok(HMinSolution { optimum: 0.5 * (sol.objective + sol.dual_objective), lambda_b: sol.matrix(lam).clone(), gap: sol.gap })
}

/// `H_min(A|B)_omega = -log2 min{Tr[Λ_B] : I_A ⊗ Λ_B ⪰ omega}`.
pub fn h_min_conditional(omega: &CMatrix, dims: BipartiteDims) -> Result<f64> {
    let opt = h_min_sdp(omega, dims)?.optimum;
    if opt <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(-opt.log2())
}

/// Does the support of `rho` lie inside the support of `sigma`?
fn support_contained(rho: &CMatrix, sigma: &HermitianEigen) -> bool {
    let cut = SUPPORT_TOL * sigma.max().max(0.0);
    let outside = sigma.map(|x| if x > cut { 0.0 } else { 1.0 });
    qmat::trace_product_re(&outside, rho) <= 1e-9 * rho.trace().re.abs().max(f64::MIN_POSITIVE)
}

fn power_on_support(eig: &HermitianEigen, p: f64) -> CMatrix {
    let cut = SUPPORT_TOL * eig.max().max(0.0);
    eig.map(|x| if x > cut { x.powf(p) } else { 0.0 })
}

fn check_psd(m: &CMatrix) -> Result<HermitianEigen> {
    let eig = HermitianEigen::new(m)?;
    let scale = eig.max().abs().max(eig.min().abs());
    if eig.min() < -SUPPORT_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(qmat::QmatError::NotPsd(eig.min()).into());
    }
    Ok(eig)
}

/// Relative entropy `Tr[rho (log2 rho - log2 sigma)]`, with `0 log 0 = 0`.
pub fn relative_entropy(rho: &CMatrix, sigma: &CMatrix) -> Result<f64> {
    let er = check_psd(rho)?;
    let es = check_psd(sigma)?;
    if !support_contained(rho, &es) {
        return Ok(f64::INFINITY);
    }
    let cut_r = SUPPORT_TOL * er.max().max(0.0);
    let cut_s = SUPPORT_TOL * es.max().max(0.0);
    let log_r = er.map(|x| if x > cut_r { x.log2() } else { 0.0 });
    let log_s = es.map(|x| if x > cut_s { x.log2() } else { 0.0 });
    Ok(qmat::trace_product_re(rho, &(log_r - log_s)))
}

/// Von Neumann entropy in bits.
pub fn entropy(rho: &CMatrix) -> Result<f64> {
    let e = check_psd(rho)?;
    Ok(-e.values.iter().filter(|&&x| x > 0.0).map(|x| x * x.log2()).sum::<f64>())
}

pub fn divergence(rho: &CMatrix, sigma: &CMatrix, spec: DivergenceSpec) -> Result<f64> {
    if !rho.is_square() || rho.shape() != sigma.shape() {
        return Err(qmat::QmatError::InvalidDimensions("divergence arguments differ in shape".into()).into());
    }
    let a = spec.alpha;
    match spec.family {
        Family::DMax => return quantum::d_max(rho, sigma),
        Family::DMin => return quantum::d_min(rho, sigma),
        Family::VonNeumann => return relative_entropy(rho, sigma),
        _ if (a - 1.0).abs() < 1e-12 => return relative_entropy(rho, sigma),
        _ => {}
    }
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::InvalidInput(format!("order alpha must be finite and nonnegative, got {a}")));
    }
    let er = check_psd(rho)?;
    let es = check_psd(sigma)?;
    let nested = support_contained(rho, &es);
    if !nested && (a > 1.0 || spec.pure_reference == PureReference::Infinity) {
        return Ok(f64::INFINITY);
    }
    let q = match spec.family {
        Family::Renyi => {
            let ra = power_on_support(&er, a);
            let sb = power_on_support(&es, 1.0 - a);
            qmat::trace_product_re(&ra, &sb)
        }
        Family::Sandwiched => {
            let s = power_on_support(&es, (1.0 - a) / (2.0 * a));
            let inner = qmat::hermitian_part(&(&s * rho * &s));
            let ev = HermitianEigen::new(&inner)?;
            let cut = SUPPORT_TOL * ev.max().max(0.0);
            ev.values.iter().filter(|&&x| x > cut).map(|x| x.powf(a)).sum()
        }
        _ => unreachable!(),
    };
    if q <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(q.log2() / (a - 1.0))
}

/// `H_0(S|Q) = log2 ‖Tr_S Π‖` with `Π` the support projector of the input.
pub fn h0_conditional(rho_or_proj: &CMatrix, dims: BipartiteDims) -> Result<f64> {
    let proj = qmat::support_projector(rho_or_proj, SUPPORT_TOL)?;
    let red = qmat::partial_trace(&proj, dims, Subsystem::A)?;
    Ok(qmat::spectral_norm(&red)?.log2())
}

/// `H_1/2(S|Q) = max_σ log2 F(rho, I_S ⊗ σ)` with `F` the squared fidelity.
///
/// Writing `rho = V D V^†` on its support, the root fidelity with `τ` is
/// `max Re Tr[X V]` over `[[D, X], [X^†, τ]] ⪰ 0`; here `τ = I ⊗ σ` with
/// `Tr σ = 1`. Working on the support keeps the problem strictly feasible.
pub fn h_half_conditional(rho: &CMatrix, dims: BipartiteDims) -> Result<f64> {
    let eig = check_psd(rho)?;
    let n = dims.total();
    if rho.nrows() != n {
        return Err(qmat::QmatError::InvalidDimensions("state does not match dims".into()).into());
    }
    let cut = SUPPORT_TOL * eig.max().max(0.0);
    let keep: Vec<usize> = (0..n).filter(|&i| eig.values[i] > cut).collect();
    let r = keep.len();
    if r == 0 {
        return Ok(f64::NEG_INFINITY);
    }
    let v = CMatrix::from_fn(n, r, |i, j| eig.vectors[(i, keep[j])]);
    let d = qmat::diag(&keep.iter().map(|&i| eig.values[i]).collect::<Vec<_>>());

    let side = r + n;
    let top = CMatrix::from_fn(r, side, |i, j| qmat::real(if i == j { 1.0 } else { 0.0 }));
    let bottom = CMatrix::from_fn(n, side, |i, j| qmat::real(if j == r + i { 1.0 } else { 0.0 }));
    let mut obj = CMatrix::zeros(side, side);
    for i in 0..r {
        for j in 0..n {
            obj[(i, r + j)] = v[(j, i)].conj() * 0.5;
            obj[(r + j, i)] = v[(j, i)] * 0.5;
        }
    }
    let mut p = sdp::SdpProblem::new(Sense::Max);
    let z = p.hermitian("Z", side);
    let sigma = p.hermitian("sigma", dims.d_b);
    p.objective(z, obj);
    p.constrain(vec![Term::new(z, LinMap::congruence(top))], Relation::Eq, d);
    let minus_id = (0..dims.d_a)
        .map(|a| {
            let k = qmat::kron(&qmat::basis_ket(dims.d_a, a), &qmat::identity(dims.d_b));
            (k.scale(-1.0), k)
        })
        .collect();
    p.constrain(
        vec![Term::new(z, LinMap::congruence(bottom)), Term::new(sigma, LinMap::Sandwich(minus_id))],
        Relation::Eq,
        CMatrix::zeros(n, n),
    );
    p.constrain(
        vec![Term::new(sigma, LinMap::Trace(qmat::identity(dims.d_b)))],
        Relation::Eq,
        CMatrix::from_element(1, 1, qmat::real(1.0)),
    );
    let sol = solve(&p, "conditional entropy of order 1/2")?;
    if sol.objective <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(2.0 * sol.objective.log2())
}

/// Conditional Rényi entropy of order 0 or 1/2.
pub fn conditional_renyi(rho_or_proj: &CMatrix, dims: BipartiteDims, alpha: f64) -> Result<f64> {
    if alpha == 0.0 {
        h0_conditional(rho_or_proj, dims)
    } else if alpha == 0.5 {
        h_half_conditional(rho_or_proj, dims)
    } else {
        Err(Error::InvalidInput(format!("conditional entropy of order {alpha} is not provided")))
    }
}

/// `max_x S(ρ'_x ‖ Γ_B) - S(ρ_x ‖ Γ_A)` over input/output pairs.
pub fn thermo_capacity_lower(pairs: &[(CMatrix, CMatrix)], ctx: &GibbsContext) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::InvalidInput("no task states given".into()));
    }
    let (ga, gb) = (ctx.gamma_a(), ctx.gamma_b());
    let mut best = f64::NEG_INFINITY;
    for (rho, rho_out) in pairs {
        let out = relative_entropy(rho_out, &gb)?;
        let inp = relative_entropy(rho, &ga)?;
        let v = if out.is_infinite() && inp.is_infinite() {
            return Err(Error::Support("both relative entropies are infinite".into()));
        } else {
            out - inp
        };
        best = best.max(v);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{basis_ket, c, diag, kron, projector, real};

    fn phi_plus() -> CMatrix {
        let s = 0.5f64.sqrt();
        projector(&qmat::ket(&[real(s), real(0.0), real(0.0), real(s)]))
    }

    fn sym_projector_qubits() -> CMatrix {
        let mut p = qmat::identity(4);
        for a in 0..2 {
            for b in 0..2 {
                p[(a * 2 + b, b * 2 + a)] += real(1.0);
            }
        }
        p.unscale(2.0)
    }

    fn equator(theta: f64) -> CMatrix {
        let s = 0.5f64.sqrt();
        projector(&qmat::ket(&[real(s), c(s * theta.cos(), s * theta.sin())]))
    }

    #[test]
    fn h_min_examples() {
        let dims = BipartiteDims::new(2, 2);
        let mut sigma = diag(&[0.3, 0.7]);
        sigma[(0, 1)] = c(0.1, 0.1);
        sigma[(1, 0)] = c(0.1, -0.1);
        let h = h_min_conditional(&kron(&diag(&[0.5, 0.5]), &sigma), dims).unwrap();
        assert!((h - 1.0).abs() < 1e-7);
        let h = h_min_conditional(&phi_plus(), dims).unwrap();
        assert!((h + 1.0).abs() < 1e-7);
        let h = h_min_conditional(&sym_projector_qubits().unscale(3.0), dims).unwrap();
        assert!((h - 1.5f64.log2()).abs() < 1e-7);
    }

    #[test]
    fn h_min_scaling() {
        let dims = BipartiteDims::new(2, 2);
        let h1 = h_min_conditional(&phi_plus(), dims).unwrap();
        let h2 = h_min_conditional(&phi_plus().scale(4.0), dims).unwrap();
        assert!((h2 - (h1 - 2.0)).abs() < 1e-7);
    }

    #[test]
    fn divergence_of_equal_states_vanishes() {
        let mut rho = diag(&[0.6, 0.4]);
        rho[(0, 1)] = c(0.1, -0.2);
        rho[(1, 0)] = c(0.1, 0.2);
        for spec in [
            DivergenceSpec::renyi(0.5),
            DivergenceSpec::renyi(2.0),
            DivergenceSpec::sandwiched(0.3),
            DivergenceSpec::sandwiched(2.0),
            DivergenceSpec::von_neumann(),
            DivergenceSpec { family: Family::DMax, alpha: 0.0, pure_reference: PureReference::Limit },
            DivergenceSpec { family: Family::DMin, alpha: 0.0, pure_reference: PureReference::Limit },
        ] {
            assert!(divergence(&rho, &rho, spec).unwrap().abs() < 1e-9, "{spec:?}");
        }
    }

    #[test]
    fn sandwiched_against_pure_reference() {
        let rho = diag(&[0.5, 0.5]);
        for a in [0.3, 0.5, 0.8] {
            let v = divergence(&rho, &equator(0.7), DivergenceSpec::sandwiched(a)).unwrap();
            assert!((v - -(a / (a - 1.0))).abs() < 1e-9, "{a} {v}");
            let spec = DivergenceSpec { pure_reference: PureReference::Infinity, ..DivergenceSpec::sandwiched(a) };
            assert_eq!(divergence(&rho, &equator(0.7), spec).unwrap(), f64::INFINITY);
        }
        assert_eq!(divergence(&rho, &equator(0.7), DivergenceSpec::sandwiched(2.0)).unwrap(), f64::INFINITY);
        // Petz limit: log <psi| rho^a |psi> / (a-1).
        let mut rho = diag(&[0.9, 0.1]);
        rho[(0, 1)] = real(0.2);
        rho[(1, 0)] = real(0.2);
        let a = 0.5;
        let psi = basis_ket(2, 0);
        let ra = qmat::func_on_support(&rho, |x| x.powf(a), SUPPORT_TOL).unwrap();
        let expect = (psi.adjoint() * ra * &psi)[(0, 0)].re.log2() / (a - 1.0);
        let v = divergence(&rho, &projector(&psi), DivergenceSpec::renyi(a)).unwrap();
        assert!((v - expect).abs() < 1e-12);
    }

    #[test]
    fn transposition_channel_relative_entropy() {
        let gamma = diag(&[2.0 / 3.0, 1.0 / 3.0]);
        let e = equator(1.1);
        let out = (qmat::identity(2) + e.transpose()).unscale(3.0);
        let s = relative_entropy(&out, &gamma).unwrap();
        assert!((s - 1.0 / 6.0).abs() < 1e-12);
        assert!((s + (2.0f64 / 3.0).log2() + 0.418).abs() < 2e-3);
    }

    #[test]
    fn h0_examples() {
        let dims = BipartiteDims::new(2, 2);
        assert!((h0_conditional(&qmat::identity(4), dims).unwrap() - 1.0).abs() < 1e-12);
        assert!((h0_conditional(&phi_plus(), dims).unwrap() + 1.0).abs() < 1e-12);
        let dims = BipartiteDims::new(3, 2);
        let p = kron(&diag(&[1.0, 1.0, 0.0]), &qmat::identity(2));
        assert!((h0_conditional(&p, dims).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn h_half_examples() {
        let dims = BipartiteDims::new(2, 2);
        let prod = kron(&diag(&[0.5, 0.5]), &diag(&[0.8, 0.2]));
        assert!((h_half_conditional(&prod, dims).unwrap() - 1.0).abs() < 1e-6);
        let v = h_half_conditional(&phi_plus(), dims);
        assert!((v.clone().unwrap() + 1.0).abs() < 1e-6, "{v:?}");
        // Classical-quantum: rho_S = diag(p) ⊗ sigma gives H_1/2(S) = 2 log2 sum sqrt(p).
        let p = [0.9, 0.1];
        let prod = kron(&diag(&p), &diag(&[0.3, 0.7]));
        let expect = 2.0 * (p[0].sqrt() + p[1].sqrt()).log2();
        assert!((h_half_conditional(&prod, dims).unwrap() - expect).abs() < 1e-6);
    }

    #[test]
    fn conditional_entropy_chain() {
        let dims = BipartiteDims::new(2, 2);
        let mut rho = kron(&diag(&[0.7, 0.3]), &diag(&[0.6, 0.4]));
        rho = rho.scale(0.8) + phi_plus().scale(0.2);
        let h0 = conditional_renyi(&rho, dims, 0.0).unwrap();
        let h12 = conditional_renyi(&rho, dims, 0.5).unwrap();
        let hmin = h_min_conditional(&rho, dims).unwrap();
        assert!(hmin <= h12 + 1e-6 && h12 <= h0 + 1e-6, "{hmin} {h12} {h0}");
        assert!(conditional_renyi(&rho, dims, 2.0).is_err());
    }

    #[test]
    fn thermo_capacity_examples() {
        let ctx = GibbsContext::degenerate(2, 2);
        let e = equator(0.3);
        let z0 = projector(&basis_ket(2, 0));
        assert!(thermo_capacity_lower(&[(e.clone(), e.clone())], &ctx).unwrap().abs() < 1e-9);
        let v = thermo_capacity_lower(&[(e.clone(), z0.clone()), (z0.clone(), z0.clone())], &ctx).unwrap();
        assert!(v.abs() < 1e-9);
        let ctx = GibbsContext::degenerate(2, 4);
        let v = thermo_capacity_lower(&[(z0.clone(), kron(&z0, &z0))], &ctx).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
    }
}
