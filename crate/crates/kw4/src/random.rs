//! Seeded random model generation for the property sweeps.
//!
//! Raw entries are drawn uniformly from [-1,1] (real) or the unit square
//! (complex), projected onto the J-compatible subspace and retried when
//! the nondegeneracy gate fails. Every trial owns its own generator
//! stream so sweeps are deterministic regardless of worker count.

use crate::error::{KwError, Result};
use crate::jet::DIM;
use crate::linalg::{self, Mat};
use crate::scalar::Scalar;
use crate::structures::{
    gl4_action, project_compatible, standard_models, Model, Signature, Structure, StructureKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MAX_RETRIES: u32 = 100;

/// Name of the generator recorded in report provenance.
pub const GENERATOR_NAME: &str = "chacha8";

/// Per-trial stream: base seed XOR trial index.
pub fn trial_rng(base_seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(base_seed ^ trial)
}

fn random_sym<S: Scalar, R: Rng>(rng: &mut R, amplitude: f64) -> Mat<S> {
    let amp = S::from_re(amplitude);
    let mut m = linalg::mat_zero();
    for i in 0..DIM {
        for j in i..DIM {
            let v = amp * S::sample_uniform(rng);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

fn real_signature_counts<S: Scalar>(g0: &Mat<S>) -> Option<(usize, usize)> {
    let mut rows = vec![vec![0.0f64; DIM]; DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            let (re, im) = g0[i][j].parts();
            if im != 0.0 {
                return None;
            }
            rows[i][j] = re;
        }
    }
    let eig = linalg::symmetric_eigenvalues(&rows);
    let pos = eig.iter().filter(|&&l| l > 0.0).count();
    let neg = eig.iter().filter(|&&l| l < 0.0).count();
    Some((pos, neg))
}

/// Random compatible model near the standard one of the requested kind and
/// signature. For real scalars the signature of g0 is checked (a para
/// metric is automatically neutral; complex-kind perturbations can drift);
/// genuinely complex metrics carry no signature and skip the check.
pub fn random_model<S: Scalar, R: Rng>(
    kind: StructureKind,
    signature: Signature,
    rng: &mut R,
) -> Result<Model<S>> {
    let base = standard_models::<S>(kind, signature)?;
    for _ in 0..MAX_RETRIES {
        let pert = random_sym::<S, R>(rng, 0.25);
        let g0raw = linalg::mat_add(&base.metric.g0, &pert);
        let g1raw = [
            random_sym::<S, R>(rng, 1.0),
            random_sym::<S, R>(rng, 1.0),
            random_sym::<S, R>(rng, 1.0),
            random_sym::<S, R>(rng, 1.0),
        ];
        let metric = match project_compatible(&g0raw, &g1raw, &base.structure) {
            Ok(m) => m,
            Err(KwError::DegenerateProjection { .. }) => continue,
            Err(e) => return Err(e),
        };
        if kind == StructureKind::Complex {
            if let Some((pos, _)) = real_signature_counts(&metric.g0) {
                if pos != signature.positive_count() {
                    continue;
                }
            }
        }
        match Model::new(base.structure, metric) {
            Ok(m) => return Ok(m),
            Err(_) => continue,
        }
    }
    Err(KwError::RetriesExhausted(MAX_RETRIES))
}

/// Random invertible matrix with bounded spectral condition number.
pub fn random_gl4<S: Scalar, R: Rng>(rng: &mut R, max_condition: f64) -> Mat<S> {
    loop {
        let mut a = linalg::mat_identity::<S>();
        for i in 0..DIM {
            for j in 0..DIM {
                a[i][j] = a[i][j] + S::from_re(0.5) * S::sample_uniform(rng);
            }
        }
        if linalg::is_singular(&a) {
            continue;
        }
        if linalg::condition_number(&a) < max_condition {
            return a;
        }
    }
}

/// Random model pushed off the standard frame by a bounded GL4 conjugation.
pub fn random_conjugated_model<S: Scalar, R: Rng>(
    kind: StructureKind,
    signature: Signature,
    rng: &mut R,
    max_condition: f64,
) -> Result<Model<S>> {
    for _ in 0..MAX_RETRIES {
        let m = random_model::<S, R>(kind, signature, rng)?;
        let a = random_gl4::<S, R>(rng, max_condition);
        match gl4_action(&a, &m) {
            Ok(out) => return Ok(out),
            Err(_) => continue,
        }
    }
    Err(KwError::RetriesExhausted(MAX_RETRIES))
}

/// Random structure on the complex-scalar side: a conjugate A J+ A^-1 of
/// the standard real para structure, together with projected complex data.
pub fn random_complex_conjugated_structure<R: Rng>(
    rng: &mut R,
    max_condition: f64,
) -> Result<Structure<crate::scalar::C64>> {
    use crate::scalar::C64;
    let std = standard_models::<C64>(StructureKind::Para, Signature::Neutral)?;
    for _ in 0..MAX_RETRIES {
        let a = random_gl4::<C64, R>(rng, max_condition);
        let b = linalg::mat_inv(&a).map_err(|d| KwError::SingularTransform {
            det_magnitude: d,
        })?;
        let j = linalg::mat_mul(&linalg::mat_mul(&a, &std.structure.j), &b);
        if let Ok(s) = Structure::new(StructureKind::Para, j) {
            return Ok(s);
        }
    }
    Err(KwError::RetriesExhausted(MAX_RETRIES))
}
