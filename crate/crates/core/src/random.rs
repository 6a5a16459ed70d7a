//! Seeded random instances: states, channels, Hamiltonians and projectors.

use crate::error::Result;
use crate::qmat::{self, CMatrix};
use crate::quantum::{self, ChoiChannel, GibbsContext, Hamiltonian};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

pub fn hermitian<R: Rng>(d: usize, rng: &mut R) -> CMatrix {
    qmat::hermitian_part(&ginibre(d, d, rng))
}

/// Density matrix of rank `rank` (full rank when `rank >= d`).
pub fn density<R: Rng>(d: usize, rank: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(d, rank.clamp(1, d), rng);
    let rho = &g * g.adjoint();
    let tr = qmat::trace(&rho).re;
    qmat::hermitian_part(&rho.unscale(tr))
}

pub fn pure_state<R: Rng>(d: usize, rng: &mut R) -> CMatrix {
    density(d, 1, rng)
}

/// Random channel from a Haar-like Stinespring isometry with `kraus` outcomes.
pub fn channel<R: Rng>(d_a: usize, d_b: usize, kraus: usize, rng: &mut R) -> Result<ChoiChannel> {
    let k = kraus.max(d_a.div_ceil(d_b.max(1))).max(1);
    let g = ginibre(d_b * k, d_a, rng);
    let v = &g * qmat::inv_sqrt_psd(&qmat::hermitian_part(&(g.adjoint() * &g)))?;
    let ch = ChoiChannel::from_action(d_a, d_b, |x| {
        let big = &v * x * v.adjoint();
        CMatrix::from_fn(d_b, d_b, |i, j| (0..k).map(|e| big[(i * k + e, j * k + e)]).sum())
    });
    ChoiChannel::new(ch.choi, ch.dims)
}

/// Energies drawn uniformly from `[0, 2)`.
pub fn hamiltonian<R: Rng>(d: usize, rng: &mut R) -> Result<Hamiltonian> {
    Hamiltonian::new((0..d).map(|_| rng.gen_range(0.0..2.0)).collect())
}

/// Nonzero diagonal projector.
pub fn diagonal_projector<R: Rng>(d: usize, rng: &mut R) -> CMatrix {
    loop {
        let bits: Vec<f64> = (0..d).map(|_| if rng.gen_bool(0.5) { 1.0 } else { 0.0 }).collect();
        if bits.iter().any(|&b| b > 0.0) {
            return qmat::diag(&bits);
        }
    }
}

/// Channel sending the normalized restricted Gibbs state `ΠΓ_AΠ / Tr[ΠΓ_A]`
/// to `Γ_B`: a random channel mixed with a replacement channel just enough
/// to correct its image of the Gibbs state.
pub fn gibbs_mapping_channel<R: Rng>(ctx: &GibbsContext, pi_a: &CMatrix, rng: &mut R) -> Result<ChoiChannel> {
    let (d_a, d_b) = (ctx.energies_a.len(), ctx.energies_b.len());
    let r = channel(d_a, d_b, rng.gen_range(1..=3), rng)?;
    let restricted = pi_a * ctx.gamma_a() * pi_a;
    let tilde = restricted.unscale(qmat::trace(&restricted).re);
    let gamma_b = ctx.gamma_b();
    let image = r.apply(&tilde)?;
    let keep = rng.gen_range(0.05..1.0) * (-quantum::d_max(&image, &gamma_b)?).exp2();
    let chi = qmat::hermitian_part(&(&gamma_b - image.scale(keep)).unscale(1.0 - keep));
    r.mix(keep, &ChoiChannel::constant(d_a, &chi))
}
