//! Gibbs states, channels in Choi form, divergences and the maps acting on
//! performance operators.
//!
//! Energies are in units of kT with k = 1, so `beta * E` is dimensionless and
//! all logarithms are base 2.

use crate::error::{Error, Result};
use crate::qmat::{self, BipartiteDims, CMatrix, HermitianEigen, Subsystem, SUPPORT_TOL};
use serde::{Deserialize, Serialize};
use std::f64::consts::LOG2_E;

/// Diagonal Hamiltonian in the computational basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hamiltonian {
    pub energies: Vec<f64>,
}

impl Hamiltonian {
    pub fn new(energies: Vec<f64>) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::InvalidInput("empty energy spectrum".into()));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidInput("energies must be finite".into()));
        }
        Ok(Self { energies })
    }

    pub fn degenerate(d: usize) -> Self {
        Self { energies: vec![0.0; d] }
    }

    /// Equally spaced ladder `0, gap, 2 gap, ...`.
    pub fn ladder(d: usize, gap: f64) -> Self {
        Self { energies: (0..d).map(|i| i as f64 * gap).collect() }
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn e_max(&self) -> f64 {
        self.energies.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn e_min(&self) -> f64 {
        self.energies.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn matrix(&self) -> CMatrix {
        qmat::diag(&self.energies)
    }

    /// `sum_i exp(-beta E_i)`.
    pub fn partition_function(&self, beta: f64) -> f64 {
        self.energies.iter().map(|e| (-beta * e).exp()).sum()
    }
}

/// Thermal data for a channel from system A to system B.
///
/// `partition_a` / `partition_b` override the normalization of the Gibbs
/// weights. They are set when a system is a subspace of a larger one (the
/// symmetric subspace of several copies) so that the weights keep the matrix
/// elements of the ambient Gibbs state instead of being renormalized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GibbsContext {
    pub beta: f64,
    #[serde(rename = "energies_A")]
    pub energies_a: Vec<f64>,
    #[serde(rename = "energies_B")]
    pub energies_b: Vec<f64>,
    #[serde(rename = "partition_A", default, skip_serializing_if = "Option::is_none")]
    pub partition_a: Option<f64>,
    #[serde(rename = "partition_B", default, skip_serializing_if = "Option::is_none")]
    pub partition_b: Option<f64>,
}

impl GibbsContext {
    pub fn new(beta: f64, h_a: &Hamiltonian, h_b: &Hamiltonian) -> Result<Self> {
        let ctx = Self { beta, energies_a: h_a.energies.clone(), energies_b: h_b.energies.clone(), partition_a: None, partition_b: None };
        ctx.validate()?;
        Ok(ctx)
    }

    /// Same Hamiltonian on input and output.
    pub fn symmetric(beta: f64, h: &Hamiltonian) -> Result<Self> {
        Self::new(beta, h, h)
    }

    /// All energies zero at `beta = 1`.
    pub fn degenerate(d_a: usize, d_b: usize) -> Self {
        Self { beta: 1.0, energies_a: vec![0.0; d_a], energies_b: vec![0.0; d_b], partition_a: None, partition_b: None }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::InvalidInput(format!("beta must be positive and finite, got {}", self.beta)));
        }
        for (name, e) in [("A", &self.energies_a), ("B", &self.energies_b)] {
            if e.is_empty() || e.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput(format!("energies of {name} must be finite and non-empty")));
            }
        }
        for z in [self.partition_a, self.partition_b].into_iter().flatten() {
            if !(z.is_finite() && z > 0.0) {
                return Err(Error::InvalidInput("partition override must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn dims(&self) -> BipartiteDims {
        BipartiteDims::new(self.energies_a.len(), self.energies_b.len())
    }

    pub fn hamiltonian_a(&self) -> Hamiltonian {
        Hamiltonian { energies: self.energies_a.clone() }
    }

    pub fn hamiltonian_b(&self) -> Hamiltonian {
        Hamiltonian { energies: self.energies_b.clone() }
    }

    pub fn z_a(&self) -> f64 {
        self.partition_a.unwrap_or_else(|| self.hamiltonian_a().partition_function(self.beta))
    }

    pub fn z_b(&self) -> f64 {
        self.partition_b.unwrap_or_else(|| self.hamiltonian_b().partition_function(self.beta))
    }

    /// Diagonal of the input Gibbs state.
    pub fn g_a(&self) -> Vec<f64> {
        let z = self.z_a();
        self.energies_a.iter().map(|e| (-self.beta * e).exp() / z).collect()
    }

    pub fn g_b(&self) -> Vec<f64> {
        let z = self.z_b();
        self.energies_b.iter().map(|e| (-self.beta * e).exp() / z).collect()
    }

    pub fn gamma_a(&self) -> CMatrix {
        qmat::diag(&self.g_a())
    }

    pub fn gamma_b(&self) -> CMatrix {
        qmat::diag(&self.g_b())
    }

    /// Context of the reversed process: B becomes the input.
    pub fn swapped(&self) -> Self {
        Self {
            beta: self.beta,
            energies_a: self.energies_b.clone(),
            energies_b: self.energies_a.clone(),
            partition_a: self.partition_b,
            partition_b: self.partition_a,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        let flat = |e: &[f64]| e.iter().all(|x| (x - e[0]).abs() == 0.0);
        flat(&self.energies_a) && flat(&self.energies_b)
    }
}

/// Thermodynamic summary of a Gibbs state, in units where k = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GibbsSummary {
    pub z: f64,
    /// Mean energy.
    pub energy: f64,
    /// Von Neumann entropy in nats.
    pub entropy_nats: f64,
    /// Free energy `-kT ln Z`.
    pub free_energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        qmat::ensure_hermitian(&matrix)?;
        let lo = qmat::min_eigenvalue(&matrix)?;
        if lo < -1e-9 {
            return Err(qmat::QmatError::NotPsd(lo).into());
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("state trace is {}, expected 1", tr.re)));
        }
        Ok(Self { matrix })
    }

    pub fn pure(ket: &CMatrix) -> Result<Self> {
        let norm = ket.norm();
        if norm == 0.0 {
            return Err(Error::InvalidInput("zero vector".into()));
        }
        Self::new(qmat::projector(&ket.unscale(norm)))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self { matrix: qmat::identity(d).unscale(d as f64) }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

pub fn gibbs_state(h: &Hamiltonian, beta: f64) -> Result<(DensityOperator, GibbsSummary)> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::InvalidInput(format!("beta must be positive and finite, got {beta}")));
    }
    // Shift by the ground energy so large energies do not underflow.
    let e0 = h.e_min();
    let w: Vec<f64> = h.energies.iter().map(|e| (-beta * (e - e0)).exp()).collect();
    let zs: f64 = w.iter().sum();
    let p: Vec<f64> = w.iter().map(|x| x / zs).collect();
    let energy = p.iter().zip(&h.energies).map(|(p, e)| p * e).sum();
    let entropy_nats = -p.iter().filter(|&&x| x > 0.0).map(|x| x * x.ln()).sum::<f64>();
    let ln_z = zs.ln() - beta * e0;
    let summary = GibbsSummary { z: ln_z.exp(), energy, entropy_nats, free_energy: -ln_z / beta };
    Ok((DensityOperator { matrix: qmat::diag(&p) }, summary))
}

/// A channel represented by its Choi operator `M = (I ⊗ 𝓜)(|I><I|)` on A⊗B.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChoiChannel {
    #[serde(with = "qmat::serde_cmatrix")]
    pub choi: CMatrix,
    pub dims: BipartiteDims,
}

impl ChoiChannel {
    /// Validates positivity and trace preservation.
    pub fn new(choi: CMatrix, dims: BipartiteDims) -> Result<Self> {
        let ch = Self::unchecked(choi, dims)?;
        let lo = qmat::min_eigenvalue(&ch.choi)?;
        if lo < -1e-9 {
            return Err(Error::InvalidChannel(format!("Choi operator has eigenvalue {lo:.3e}")));
        }
        let defect = ch.trace_preservation_defect()?;
        if defect > 1e-8 {
            return Err(Error::InvalidChannel(format!("Tr_B M deviates from identity by {defect:.3e}")));
        }
        Ok(ch)
    }

    /// Only checks shape and Hermiticity.
    pub fn unchecked(choi: CMatrix, dims: BipartiteDims) -> Result<Self> {
        if choi.nrows() != dims.total() || choi.ncols() != dims.total() {
            return Err(qmat::QmatError::InvalidDimensions(format!(
                "Choi operator is {}x{}, expected side {}",
                choi.nrows(),
                choi.ncols(),
                dims.total()
            ))
            .into());
        }
        qmat::ensure_hermitian(&choi)?;
        Ok(Self { choi: qmat::hermitian_part(&choi), dims })
    }

    pub fn identity(d: usize) -> Self {
        let mut v = CMatrix::zeros(d * d, 1);
        for i in 0..d {
            v[(i * d + i, 0)] = qmat::real(1.0);
        }
        Self { choi: qmat::projector(&v), dims: BipartiteDims::new(d, d) }
    }

    /// The replacement channel `X -> Tr[X] sigma`.
    pub fn constant(d_a: usize, sigma: &CMatrix) -> Self {
        Self { choi: qmat::kron(&qmat::identity(d_a), sigma), dims: BipartiteDims::new(d_a, sigma.nrows()) }
    }

    /// Build the Choi operator from the images of the matrix units `|i><j|`.
    pub fn from_action<F: Fn(&CMatrix) -> CMatrix>(d_a: usize, d_b: usize, f: F) -> Self {
        let mut choi = CMatrix::zeros(d_a * d_b, d_a * d_b);
        for i in 0..d_a {
            for j in 0..d_a {
                let mut e = CMatrix::zeros(d_a, d_a);
                e[(i, j)] = qmat::real(1.0);
                let out = f(&e);
                for k in 0..d_b {
                    for l in 0..d_b {
                        choi[(i * d_b + k, j * d_b + l)] = out[(k, l)];
                    }
                }
            }
        }
        Self { choi, dims: BipartiteDims::new(d_a, d_b) }
    }

    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        apply_channel(self, x)
    }

    pub fn trace_preservation_defect(&self) -> Result<f64> {
        let r = qmat::partial_trace(&self.choi, self.dims, Subsystem::B)?;
        Ok(qmat::max_abs(&(r - qmat::identity(self.dims.d_a))))
    }

    /// Channel whose Choi operator is `M^{T_B}`; it equals `T ∘ 𝓜`.
    pub fn output_transposed(&self) -> Result<Self> {
        Ok(Self { choi: qmat::partial_transpose(&self.choi, self.dims, Subsystem::B)?, dims: self.dims })
    }

    /// Convex mixture `p self + (1-p) other`.
    pub fn mix(&self, p: f64, other: &Self) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::InvalidInput("cannot mix channels with different dimensions".into()));
        }
        Ok(Self { choi: self.choi.scale(p) + other.choi.scale(1.0 - p), dims: self.dims })
    }
}

/// `𝓜(X) = Tr_A[(X^T ⊗ I_B) M]`.
pub fn apply_channel(ch: &ChoiChannel, x: &CMatrix) -> Result<CMatrix> {
    let (da, db) = (ch.dims.d_a, ch.dims.d_b);
    if x.nrows() != da || x.ncols() != da {
        return Err(qmat::QmatError::InvalidDimensions(format!("channel input must be {da}x{da}, got {}x{}", x.nrows(), x.ncols())).into());
    }
    // Tr_A[(X^T ⊗ I) M]_{kl} = sum_{ij} X_{ij} M_{(i,k),(j,l)}
    let mut out = CMatrix::zeros(db, db);
    for i in 0..da {
        for j in 0..da {
            let w = x[(i, j)];
            if w.norm() == 0.0 {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    out[(k, l)] += w * ch.choi[(i * db + k, j * db + l)];
                }
            }
        }
    }
    Ok(out)
}

/// `D_max(rho || sigma)` in bits; `f64::INFINITY` when the support of `rho`
/// is not contained in that of `sigma`.
pub fn d_max(rho: &CMatrix, sigma: &CMatrix) -> Result<f64> {
    check_same_square(rho, sigma)?;
    let rho_eig = HermitianEigen::new(rho)?;
    let scale = rho_eig.max().abs().max(rho_eig.min().abs());
    if rho_eig.min() < -SUPPORT_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(qmat::QmatError::NotPsd(rho_eig.min()).into());
    }
    if scale == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let sig_eig = HermitianEigen::new(sigma)?;
    let cut = SUPPORT_TOL * sig_eig.max().max(0.0);
    if sig_eig.min() < -cut {
        return Err(qmat::QmatError::NotPsd(sig_eig.min()).into());
    }
    let outside = sig_eig.map(|x| if x > cut && x > 0.0 { 0.0 } else { 1.0 });
    let leak = qmat::trace_product_re(&outside, rho);
    if leak > 1e-9 * rho.trace().re.abs().max(scale) {
        return Ok(f64::INFINITY);
    }
    let inv_sqrt = sig_eig.map(|x| if x > cut && x > 0.0 { 1.0 / x.sqrt() } else { 0.0 });
    let sandwiched = &inv_sqrt * rho * &inv_sqrt;
    Ok(qmat::spectral_norm(&qmat::hermitian_part(&sandwiched))?.log2())
}

/// `D_min(rho || sigma) = -log2 Tr[Π_rho sigma]`.
pub fn d_min(rho: &CMatrix, sigma: &CMatrix) -> Result<f64> {
    check_same_square(rho, sigma)?;
    let proj = qmat::support_projector(rho, SUPPORT_TOL)?;
    let overlap = qmat::trace_product_re(&proj, sigma);
    if overlap <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(-overlap.log2())
}

fn check_same_square(a: &CMatrix, b: &CMatrix) -> Result<()> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(qmat::QmatError::InvalidDimensions(format!(
            "operators must be square with equal shape, got {:?} and {:?}",
            a.shape(),
            b.shape()
        ))
        .into());
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Distances {
    pub fidelity: f64,
    pub trace_distance: f64,
    pub purified_distance: f64,
}

/// Root fidelity `Tr|√rho √sigma|` for PSD operators, which need not be normalized.
pub fn root_fidelity(rho: &CMatrix, sigma: &CMatrix) -> Result<f64> {
    check_same_square(rho, sigma)?;
    let a = qmat::sqrt_psd(rho)?;
    let b = qmat::sqrt_psd(sigma)?;
    Ok(qmat::trace_norm(&(a * b))?)
}

/// Generalized fidelity for subnormalized states:
/// `(Tr|√rho √sigma| + sqrt((1 - Tr rho)(1 - Tr sigma)))^2`.
pub fn generalized_fidelity(rho: &CMatrix, sigma: &CMatrix) -> Result<f64> {
    let f = root_fidelity(rho, sigma)?;
    let (tr, ts) = (rho.trace().re, sigma.trace().re);
    if tr > 1.0 + 1e-9 || ts > 1.0 + 1e-9 {
        return Err(Error::InvalidInput("generalized fidelity needs trace at most one".into()));
    }
    let extra = ((1.0 - tr).max(0.0) * (1.0 - ts).max(0.0)).sqrt();
    Ok(((f + extra) * (f + extra)).min(1.0))
}

pub fn distances(rho: &DensityOperator, sigma: &DensityOperator) -> Result<Distances> {
    let f = root_fidelity(rho.matrix(), sigma.matrix())?;
    let fidelity = (f * f).clamp(0.0, 1.0);
    let trace_distance = (0.5 * qmat::trace_norm_hermitian(&(rho.matrix() - sigma.matrix()))?).clamp(0.0, 1.0);
    Ok(Distances { fidelity, trace_distance, purified_distance: (1.0 - fidelity).max(0.0).sqrt() })
}

/// Time reversal of a performance operator on A⊗B; the result lives on B⊗A:
/// `(Γ_B^{1/2} ⊗ Γ_A^{-1/2}) E Ω^T E (Γ_B^{1/2} ⊗ Γ_A^{-1/2})` with `E` the swap.
pub fn time_reverse_perf_op(omega: &CMatrix, ctx: &GibbsContext) -> Result<CMatrix> {
    let dims = ctx.dims();
    let ga = ctx.g_a();
    let gb = ctx.g_b();
    if let Some((i, _)) = ga.iter().enumerate().find(|(_, g)| **g <= 0.0 || !g.is_finite()) {
        let marginal = qmat::partial_trace(omega, dims, Subsystem::B)?;
        if marginal[(i, i)].norm() > 1e-12 {
            return Err(Error::Support(format!("input level {i} has zero Gibbs weight but carries test weight")));
        }
    }
    let swapped = qmat::swap_systems(&omega.transpose(), dims)?;
    let (db, da) = (dims.d_b, dims.d_a);
    let w: Vec<f64> = (0..db * da)
        .map(|idx| {
            let (b, a) = (idx / da, idx % da);
            let inv = if ga[a] > 0.0 { 1.0 / ga[a].sqrt() } else { 0.0 };
            gb[b].sqrt() * inv
        })
        .collect();
    Ok(CMatrix::from_fn(db * da, db * da, |r, c| swapped[(r, c)] * (w[r] * w[c])))
}

/// `Ω^{T_B}`.
pub fn transpose_perf_op(omega: &CMatrix, dims: BipartiteDims) -> Result<CMatrix> {
    Ok(qmat::partial_transpose(omega, dims, Subsystem::B)?)
}

/// Work in units of kT ln 2 equals the cost in bits; this converts to units of kT.
pub fn bits_to_kt(bits: f64) -> f64 {
    bits * std::f64::consts::LN_2
}

/// `beta * E` expressed in bits.
pub fn nats_to_bits(nats: f64) -> f64 {
    nats * LOG2_E
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{basis_ket, c, diag, real};

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        a.shape() == b.shape() && qmat::max_abs(&(a - b)) <= tol
    }

    fn ln2_qubit() -> GibbsContext {
        GibbsContext::symmetric(std::f64::consts::LN_2, &Hamiltonian::ladder(2, 1.0)).unwrap()
    }

    #[test]
    fn gibbs_examples() {
        let (g, s) = gibbs_state(&Hamiltonian::degenerate(2), 3.0).unwrap();
        assert!(close(g.matrix(), &diag(&[0.5, 0.5]), 1e-15));
        assert!((s.z - 2.0).abs() < 1e-12);
        let (g, _) = gibbs_state(&Hamiltonian::new(vec![0.0, 1.3, 7.0]).unwrap(), 1e-12).unwrap();
        assert!(close(g.matrix(), &diag(&[1.0 / 3.0; 3]), 1e-9));
        let (g, s) = gibbs_state(&Hamiltonian::ladder(2, 1.0), std::f64::consts::LN_2).unwrap();
        assert!(close(g.matrix(), &diag(&[2.0 / 3.0, 1.0 / 3.0]), 1e-15));
        assert!((s.z - 1.5).abs() < 1e-12);
        assert!((s.free_energy + 1.5f64.ln() / std::f64::consts::LN_2).abs() < 1e-12);
        assert!(gibbs_state(&Hamiltonian::degenerate(2), 0.0).is_err());
        assert_eq!(ln2_qubit().g_b(), vec![2.0 / 3.0, 1.0 / 3.0]);
    }

    #[test]
    fn channel_action_examples() {
        let mut rho = diag(&[0.3, 0.7]);
        rho[(0, 1)] = c(0.1, 0.2);
        rho[(1, 0)] = c(0.1, -0.2);
        let id = ChoiChannel::identity(2);
        assert!(close(&apply_channel(&id, &rho).unwrap(), &rho, 1e-15));
        let gamma = diag(&[2.0 / 3.0, 1.0 / 3.0]);
        let therm = ChoiChannel::new(qmat::kron(&qmat::identity(2), &gamma), BipartiteDims::new(2, 2)).unwrap();
        assert!(close(&apply_channel(&therm, &rho).unwrap(), &gamma, 1e-15));
        let erase = ChoiChannel::constant(2, &qmat::projector(&basis_ket(2, 0)));
        assert!(close(&apply_channel(&erase, &gamma).unwrap(), &diag(&[1.0, 0.0]), 1e-15));
        assert!(apply_channel(&id, &qmat::identity(3)).is_err());
    }

    #[test]
    fn from_action_reproduces_identity() {
        let ch = ChoiChannel::from_action(3, 3, |x| x.clone());
        assert!(close(&ch.choi, &ChoiChannel::identity(3).choi, 0.0));
    }

    #[test]
    fn choi_validation() {
        let bad = qmat::kron(&qmat::identity(2), &diag(&[1.0, 1.0]));
        assert!(matches!(ChoiChannel::new(bad, BipartiteDims::new(2, 2)), Err(Error::InvalidChannel(_))));
    }

    #[test]
    fn d_max_examples() {
        let ket0 = qmat::projector(&basis_ket(2, 0));
        assert!((d_max(&ket0, &diag(&[0.5, 0.5])).unwrap() - 1.0).abs() < 1e-12);
        assert!((d_max(&ket0, &diag(&[2.0 / 3.0, 1.0 / 3.0])).unwrap() - 1.5f64.log2()).abs() < 1e-12);
        let mut rho = diag(&[0.6, 0.4]);
        rho[(0, 1)] = c(0.1, -0.05);
        rho[(1, 0)] = c(0.1, 0.05);
        assert!(d_max(&rho, &rho).unwrap().abs() < 1e-10);
        assert_eq!(d_max(&diag(&[0.5, 0.5]), &ket0).unwrap(), f64::INFINITY);
        assert!(d_max(&ket0, &ket0).unwrap().abs() < 1e-12);
        assert!(matches!(d_max(&diag(&[1.0, -0.5]), &diag(&[0.5, 0.5])), Err(Error::Matrix(_))));
    }

    #[test]
    fn d_min_examples() {
        let g = diag(&[2.0 / 3.0, 1.0 / 3.0]);
        assert!(d_min(&diag(&[0.3, 0.7]), &g).unwrap().abs() < 1e-12);
        let ket1 = qmat::projector(&basis_ket(2, 1));
        assert!((d_min(&ket1, &g).unwrap() - 3f64.log2()).abs() < 1e-12);
        let ket0 = qmat::projector(&basis_ket(2, 0));
        assert!((d_min(&ket0, &diag(&[0.5, 0.5])).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(d_min(&ket0, &ket1).unwrap(), f64::INFINITY);
    }

    #[test]
    fn distance_examples() {
        let z0 = DensityOperator::pure(&basis_ket(2, 0)).unwrap();
        let z1 = DensityOperator::pure(&basis_ket(2, 1)).unwrap();
        let mix = DensityOperator::maximally_mixed(2);
        let d = distances(&z0, &z0).unwrap();
        assert!((d.fidelity - 1.0).abs() < 1e-12 && d.trace_distance < 1e-12 && d.purified_distance < 1e-6);
        let d = distances(&z0, &z1).unwrap();
        assert!(d.fidelity < 1e-12 && (d.trace_distance - 1.0).abs() < 1e-12 && (d.purified_distance - 1.0).abs() < 1e-12);
        let d = distances(&z0, &mix).unwrap();
        assert!((d.fidelity - 0.5).abs() < 1e-12);
        assert!((d.trace_distance - 0.5).abs() < 1e-12);
        assert!((d.purified_distance - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn generalized_fidelity_reduces_to_fidelity_on_states() {
        let rho = diag(&[0.5, 0.5]);
        let ket0 = qmat::projector(&basis_ket(2, 0));
        assert!((generalized_fidelity(&ket0, &rho).unwrap() - 0.5).abs() < 1e-12);
        // Two orthogonal halves of a state, each with trace 1/2.
        let a = diag(&[0.5, 0.0]);
        let b = diag(&[0.0, 0.5]);
        assert!((generalized_fidelity(&a, &b).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn time_reversal_examples() {
        let ctx = GibbsContext::degenerate(2, 2);
        let omega = qmat::kron(&diag(&[0.5, 0.5]), &qmat::identity(2));
        let rev = time_reverse_perf_op(&omega, &ctx).unwrap();
        // (Γ_B^{1/2} I Γ_B^{1/2}) ⊗ (Γ_A^{-1/2} (I/2) Γ_A^{-1/2}) = (I/2) ⊗ I
        assert!(close(&rev, &qmat::kron(&diag(&[0.5, 0.5]), &qmat::identity(2)), 1e-14));

        // A Gibbs input becomes the trivial identity factor on A.
        let ctx = ln2_qubit();
        let o = diag(&[0.2, 0.9]);
        let omega = qmat::kron(&ctx.gamma_a().transpose(), &o);
        let rev = time_reverse_perf_op(&omega, &ctx).unwrap();
        let sb = qmat::sqrt_psd(&ctx.gamma_b()).unwrap();
        let expect = qmat::kron(&(&sb * o.transpose() * &sb), &qmat::identity(2));
        assert!(close(&rev, &expect, 1e-14));
    }

    #[test]
    fn time_reversal_product_formula() {
        let ctx = GibbsContext::new(0.7, &Hamiltonian::ladder(2, 1.0), &Hamiltonian::new(vec![0.0, 0.4, 2.0]).unwrap()).unwrap();
        let mut rho = diag(&[0.3, 0.7]);
        rho[(0, 1)] = c(0.1, 0.2);
        rho[(1, 0)] = c(0.1, -0.2);
        let mut o = diag(&[0.5, 0.1, 0.4]);
        o[(0, 2)] = c(0.05, 0.1);
        o[(2, 0)] = c(0.05, -0.1);
        let omega = qmat::kron(&rho.transpose(), &o);
        let rev = time_reverse_perf_op(&omega, &ctx).unwrap();
        let sb = qmat::sqrt_psd(&ctx.gamma_b()).unwrap();
        let ia = qmat::inv_sqrt_psd(&ctx.gamma_a()).unwrap();
        let expect = qmat::kron(&(&sb * o.transpose() * &sb), &(&ia * &rho * &ia));
        assert!(close(&rev, &expect, 1e-13));
        let back = time_reverse_perf_op(&rev, &ctx.swapped()).unwrap();
        assert!(close(&back, &omega, 1e-13));
    }

    #[test]
    fn transpose_perf_op_examples() {
        let dims = BipartiteDims::new(2, 2);
        let mut o = diag(&[0.4, 0.6]);
        o[(0, 1)] = c(0.0, 0.3);
        o[(1, 0)] = c(0.0, -0.3);
        let rho = diag(&[0.2, 0.8]);
        let t = transpose_perf_op(&qmat::kron(&rho, &o), dims).unwrap();
        assert!(close(&t, &qmat::kron(&rho, &o.transpose()), 0.0));
        assert!(close(&transpose_perf_op(&t, dims).unwrap(), &qmat::kron(&rho, &o), 0.0));

        let s = 0.5f64.sqrt();
        let psi = qmat::ket(&[real(s), c(0.0, s)]);
        let p = qmat::projector(&psi);
        // A product stays positive, and so does the symmetric average (I + SWAP)/6,
        // which maps to (I + 2Φ)/6 with Φ the normalized maximally entangled state.
        let t = transpose_perf_op(&qmat::kron(&p, &p), dims).unwrap();
        assert!(close(&t, &qmat::kron(&p, &p.transpose()), 0.0));
        assert!(qmat::min_eigenvalue(&t).unwrap() > -1e-12);
        let mut sym = qmat::identity(4);
        for a in 0..2 {
            for b in 0..2 {
                sym[(a * 2 + b, b * 2 + a)] += real(1.0);
            }
        }
        let t = transpose_perf_op(&sym.unscale(6.0), dims).unwrap();
        let ev = qmat::eigenvalues(&t).unwrap();
        assert!((ev[0] - 1.0 / 6.0).abs() < 1e-12 && (ev[3] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn context_json_shape() {
        let ctx = ln2_qubit();
        let text = serde_json::to_string(&ctx).unwrap();
        assert!(text.contains("\"energies_A\"") && !text.contains("partition"));
        let back: GibbsContext = serde_json::from_str(&text).unwrap();
        assert_eq!(back, ctx);
    }
}
