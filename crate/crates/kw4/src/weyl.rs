//! Levi-Civita and Weyl connections at the origin, the Lee form, nabla J,
//! the uniqueness linear map, the perturbation linearization, and the
//! analytic-continuation batteries.

use crate::error::{KwError, Result};
use crate::forms::VolumeElement;
use crate::jet::DIM;
use crate::linalg::{self, Mat};
use crate::random::{
    random_complex_conjugated_structure, random_model, trial_rng,
};
use crate::scalar::{Scalar, C64};
use crate::structures::{
    j_pullback, kahler_form, project_compatible, standard_models, Model, Signature, Structure,
    StructureKind,
};
use rand::Rng;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Christoffel values at the origin, gamma[i][j][k] = Gamma^k_{ij}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Connection<S: Scalar> {
    pub gamma: [[[S; DIM]; DIM]; DIM],
}

impl<S: Scalar> Connection<S> {
    pub fn zero() -> Self {
        Self {
            gamma: [[[S::zero(); DIM]; DIM]; DIM],
        }
    }

    /// Largest torsion entry |Gamma^k_{ij} - Gamma^k_{ji}|.
    pub fn torsion_magnitude(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    m = m.max((self.gamma[i][j][k] - self.gamma[j][i][k]).magnitude());
                }
            }
        }
        m
    }
}

/// The 1-form of the Weyl structure and its metric dual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeeForm<S: Scalar> {
    pub phi: [S; DIM],
    pub phi_sharp: [S; DIM],
}

/// ((nabla_{d_i} J) d_j)^k at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NablaJ<S: Scalar> {
    pub value: [[[S; DIM]; DIM]; DIM],
}

impl<S: Scalar> NablaJ<S> {
    pub fn max_magnitude(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    m = m.max(self.value[i][j][k].magnitude());
                }
            }
        }
        m
    }
}

/// Levi-Civita Christoffel symbols at the origin from the metric 1-jet.
pub fn levi_civita<S: Scalar>(m: &Model<S>) -> Result<Connection<S>> {
    let ginv = m.metric.inverse_jets()?.value();
    let g1 = &m.metric.g1;
    let half = S::from_re(0.5);
    let mut gamma = [[[S::zero(); DIM]; DIM]; DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                let mut acc = S::zero();
                for l in 0..DIM {
                    acc = acc + ginv[k][l] * (g1[i][j][l] + g1[j][i][l] - g1[l][i][j]);
                }
                gamma[i][j][k] = half * acc;
            }
        }
    }
    Ok(Connection { gamma })
}

/// Lee form phi = (1/2) J+ delta Omega+ (para) or -(1/2) J- delta Omega-
/// (complex), with the convention (J alpha)(X) = alpha(J X).
pub fn lee_form<S: Scalar>(m: &Model<S>) -> Result<LeeForm<S>> {
    let omega = kahler_form(m);
    let mu = VolumeElement::from_kahler(&omega)?;
    let delta = crate::forms::codifferential_2form(&omega, &m.metric, &mu)?;
    let sign = match m.structure.kind {
        StructureKind::Para => S::from_re(0.5),
        StructureKind::Complex => S::from_re(-0.5),
    };
    let j = &m.structure.j;
    let mut phi = [S::zero(); DIM];
    for i in 0..DIM {
        let mut acc = S::zero();
        for k in 0..DIM {
            acc = acc + delta.coeffs[k].value * j[k][i];
        }
        phi[i] = sign * acc;
    }
    let phi_sharp = linalg::solve(&m.metric.g0, &phi).map_err(|det_magnitude| {
        KwError::SingularMetric { det_magnitude }
    })?;
    Ok(LeeForm { phi, phi_sharp })
}

/// Weyl connection: Gamma^phi = Gamma^g + phi_i d^k_j + phi_j d^k_i
/// - g0_{ij} phi#^k.
pub fn weyl_connection<S: Scalar>(m: &Model<S>, phi: &LeeForm<S>) -> Result<Connection<S>> {
    let lc = levi_civita(m)?;
    let g0 = &m.metric.g0;
    let mut gamma = lc.gamma;
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                let mut add = S::zero();
                if j == k {
                    add = add + phi.phi[i];
                }
                if i == k {
                    add = add + phi.phi[j];
                }
                add = add - g0[i][j] * phi.phi_sharp[k];
                gamma[i][j][k] = gamma[i][j][k] + add;
            }
        }
    }
    Ok(Connection { gamma })
}

/// (nabla_{d_i} J) d_j for a constant J: dJ = 0, only the connection acts.
pub fn nabla_j<S: Scalar>(c: &Connection<S>, s: &Structure<S>) -> NablaJ<S> {
    let j = &s.j;
    let mut value = [[[S::zero(); DIM]; DIM]; DIM];
    for i in 0..DIM {
        for jj in 0..DIM {
            for k in 0..DIM {
                let mut acc = S::zero();
                for m in 0..DIM {
                    acc = acc + c.gamma[i][m][k] * j[m][jj] - c.gamma[i][jj][m] * j[k][m];
                }
                value[i][jj][k] = acc;
            }
        }
    }
    NablaJ { value }
}

#[derive(Debug, Clone, Copy)]
pub struct KwReport<S: Scalar> {
    pub residual: f64,
    pub phi: LeeForm<S>,
    pub pass: bool,
}

/// Existence check: build the candidate Kahler-Weyl connection and report
/// the max-magnitude entry of nabla^phi J at the origin.
pub fn verify_kw<S: Scalar>(m: &Model<S>) -> Result<KwReport<S>> {
    verify_kw_with(m, DEFAULT_TOLERANCE)
}

pub fn verify_kw_with<S: Scalar>(m: &Model<S>, tolerance: f64) -> Result<KwReport<S>> {
    let phi = lee_form(m)?;
    let conn = weyl_connection(m, &phi)?;
    let nj = nabla_j(&conn, &m.structure);
    let residual = nj.max_magnitude();
    Ok(KwReport {
        residual,
        phi,
        pass: residual <= tolerance,
    })
}

/// The full nabla^phi J tensor for the candidate structure.
pub fn kw_nabla_j<S: Scalar>(m: &Model<S>) -> Result<NablaJ<S>> {
    let phi = lee_form(m)?;
    let conn = weyl_connection(m, &phi)?;
    Ok(nabla_j(&conn, &m.structure))
}

/// Numerical rank of phi -> {[Theta_X, J]}_X, the linear map whose
/// injectivity is the uniqueness statement. Full rank 4 forces phi1 = phi2.
pub fn uniqueness_rank<S: Scalar>(m: &Model<S>) -> Result<usize> {
    let g0 = &m.metric.g0;
    let g0inv = linalg::mat_inv(g0).map_err(|det_magnitude| KwError::SingularMetric {
        det_magnitude,
    })?;
    let j = &m.structure.j;
    // 64 rows (i,j,k entries of the commutators), 4 columns (phi basis).
    let mut rows = vec![vec![S::zero(); DIM]; DIM * DIM * DIM];
    for a in 0..DIM {
        // phi = e_a, phi# = g0^{. a}
        let mut phi = [S::zero(); DIM];
        phi[a] = S::one();
        let mut phi_sharp = [S::zero(); DIM];
        for k in 0..DIM {
            phi_sharp[k] = g0inv[k][a];
        }
        for i in 0..DIM {
            // Theta_i as an endomorphism: (Theta_i)^k_j
            let mut theta = [[S::zero(); DIM]; DIM];
            for jj in 0..DIM {
                for k in 0..DIM {
                    let mut v = S::zero();
                    if jj == k {
                        v = v + phi[i];
                    }
                    if i == k {
                        v = v + phi[jj];
                    }
                    v = v - g0[i][jj] * phi_sharp[k];
                    theta[k][jj] = v;
                }
            }
            let comm = commutator(&theta, j);
            for k in 0..DIM {
                for jj in 0..DIM {
                    rows[i * DIM * DIM + k * DIM + jj][a] = comm[k][jj];
                }
            }
        }
    }
    Ok(linalg::numerical_rank(&rows, 1e-8))
}

fn commutator<S: Scalar>(a: &Mat<S>, b: &Mat<S>) -> Mat<S> {
    let ab = linalg::mat_mul(a, b);
    let ba = linalg::mat_mul(b, a);
    let mut out = linalg::mat_zero();
    for i in 0..DIM {
        for j in 0..DIM {
            out[i][j] = ab[i][j] - ba[i][j];
        }
    }
    out
}

/// The four symmetric anti-invariant spanning tensors for the standard
/// para structure: dx1.dx3, dx1.dx4, dx2.dx3, dx2.dx4.
pub fn sminus_basis<S: Scalar>() -> [Mat<S>; 4] {
    let pairs = [(0, 2), (0, 3), (1, 2), (1, 3)];
    pairs.map(|(a, b)| {
        let mut m = linalg::mat_zero();
        m[a][b] = S::one();
        m[b][a] = S::one();
        m
    })
}

/// Evaluation table of the linearization eps -> nabla^phi J(0) over the
/// flat standard neutral background, one entry per (eps, coordinate direction).
pub struct LinearizationTable<S: Scalar> {
    /// entries[e][i]: perturbation basis[e] in direction x^i.
    pub entries: Vec<[NablaJ<S>; DIM]>,
}

pub fn linearization_map<S: Scalar>(
    s: &Structure<S>,
    basis: &[Mat<S>],
) -> Result<LinearizationTable<S>> {
    let sign = S::from_re(s.kind.pullback_sign());
    let base = standard_models::<S>(StructureKind::Para, Signature::Neutral)?;
    let mut entries = Vec::with_capacity(basis.len());
    for eps in basis {
        // pre: eps is anti-invariant, J* eps = -eps
        let pb = j_pullback(eps, &s.j);
        let mut dev: f64 = 0.0;
        for i in 0..DIM {
            for k in 0..DIM {
                dev = dev.max((pb[i][k] - sign * eps[i][k]).magnitude());
            }
        }
        if dev > 1e-10 {
            return Err(KwError::IncompatibleMetric { deviation: dev });
        }
        let mut row = [NablaJ {
            value: [[[S::zero(); DIM]; DIM]; DIM],
        }; DIM];
        for dir in 0..DIM {
            let mut g1 = [linalg::mat_zero(); DIM];
            g1[dir] = *eps;
            let model = Model::new(
                base.structure,
                crate::structures::MetricJet {
                    g0: base.metric.g0,
                    g1,
                },
            )?;
            row[dir] = kw_nabla_j(&model)?;
        }
        entries.push(row);
    }
    Ok(LinearizationTable { entries })
}

/// One trial of an analytic-continuation battery.
#[derive(Debug, Clone, Copy)]
pub struct TrialRecord {
    pub trial: u64,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct BatteryReport {
    pub name: &'static str,
    pub tolerance: f64,
    pub records: Vec<TrialRecord>,
}

impl BatteryReport {
    pub fn max_residual(&self) -> f64 {
        self.records.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    pub fn pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }
}

/// The three complex-scalar batteries of the analytic-continuation argument:
/// (a) real J, real data embedded in C; (b) real J, complex data;
/// (c) conjugated complex J with complex data.
pub fn continuation_trials(seed: u64, count: u64) -> Result<Vec<BatteryReport>> {
    let mut battery_a = BatteryReport {
        name: "real-structure-real-data",
        tolerance: 1e-8,
        records: Vec::new(),
    };
    let mut battery_b = BatteryReport {
        name: "real-structure-complex-data",
        tolerance: 1e-8,
        records: Vec::new(),
    };
    let mut battery_c = BatteryReport {
        name: "conjugated-structure-complex-data",
        tolerance: 1e-7,
        records: Vec::new(),
    };

    for trial in 0..count {
        // (a) the real sweep embedded in C: residuals must agree exactly
        let mut rng = trial_rng(seed, trial);
        let real = random_model::<f64, _>(StructureKind::Para, Signature::Neutral, &mut rng)?;
        let embedded = real.map_scalars(C64::from_re);
        let report_real = verify_kw(&real)?;
        let report = verify_kw_with(&embedded, battery_a.tolerance)?;
        if report.residual != report_real.residual {
            return Err(KwError::IncompatibleMetric {
                deviation: (report.residual - report_real.residual).abs(),
            });
        }
        battery_a.records.push(TrialRecord {
            trial,
            residual: report.residual,
            pass: report.pass,
        });

        // (b) real J+, complex (g0, g1)
        let mut rng = trial_rng(seed ^ 0x5eed_b000, trial);
        let m = random_model::<C64, _>(StructureKind::Para, Signature::Neutral, &mut rng)?;
        let report = verify_kw_with(&m, battery_b.tolerance)?;
        battery_b.records.push(TrialRecord {
            trial,
            residual: report.residual,
            pass: report.pass,
        });

        // (c) complex J+ on the GL4(C) orbit of the standard one
        let mut rng = trial_rng(seed ^ 0x5eed_c000, trial);
        let m = random_complex_battery_model(&mut rng)?;
        let report = verify_kw_with(&m, battery_c.tolerance)?;
        battery_c.records.push(TrialRecord {
            trial,
            residual: report.residual,
            pass: report.pass,
        });
    }
    Ok(vec![battery_a, battery_b, battery_c])
}

fn random_complex_battery_model<R: Rng>(rng: &mut R) -> Result<Model<C64>> {
    for _ in 0..100 {
        let s = random_complex_conjugated_structure(rng, 100.0)?;
        let raw0 = random_raw_sym::<C64, _>(rng);
        let raw1 = [
            random_raw_sym::<C64, _>(rng),
            random_raw_sym::<C64, _>(rng),
            random_raw_sym::<C64, _>(rng),
            random_raw_sym::<C64, _>(rng),
        ];
        let metric = match project_compatible(&raw0, &raw1, &s) {
            Ok(m) => m,
            Err(KwError::DegenerateProjection { .. }) => continue,
            Err(e) => return Err(e),
        };
        match Model::new(s, metric) {
            Ok(m) => return Ok(m),
            Err(_) => continue,
        }
    }
    Err(KwError::RetriesExhausted(100))
}

fn random_raw_sym<S: Scalar, R: Rng>(rng: &mut R) -> Mat<S> {
    let mut m = linalg::mat_zero();
    for i in 0..DIM {
        for j in i..DIM {
            let v = S::sample_uniform(rng);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

/// Max deviation across the Hermitian-reduction identities.
#[derive(Debug, Clone, Copy)]
pub struct HermitianReductionReport {
    pub max_deviation: f64,
}

/// Embed a complex-kind model over C, set J+ = i J-, and check the whole
/// reduction chain: J+^2 = Id, Tr J+ = 0, J+*g = -g, Omega- = -i Omega+,
/// and phi_{J-} = phi_{J+}.
pub fn hermitian_reduction_check<S: Scalar>(m: &Model<S>) -> Result<HermitianReductionReport> {
    assert_eq!(m.structure.kind, StructureKind::Complex);
    let mc = m.map_scalars(|s| {
        let (re, im) = s.parts();
        C64::new(re, im)
    });
    let i = C64::I;
    let j_minus = mc.structure.j;
    let mut j_plus = linalg::mat_zero::<C64>();
    for a in 0..DIM {
        for b in 0..DIM {
            j_plus[a][b] = i * j_minus[a][b];
        }
    }
    let mut dev: f64 = 0.0;

    // J+^2 = Id and Tr J+ = 0
    let sq = linalg::mat_mul(&j_plus, &j_plus);
    for a in 0..DIM {
        for b in 0..DIM {
            let expect = if a == b { C64::one() } else { C64::zero() };
            dev = dev.max((sq[a][b] - expect).magnitude());
        }
    }
    let tr = (0..DIM).fold(C64::zero(), |acc, a| acc + j_plus[a][a]);
    dev = dev.max(tr.magnitude());

    // J+*g = -g on g0 and every g1 slice
    let check_pb = |g: &Mat<C64>, dev: &mut f64| {
        let pb = j_pullback(g, &j_plus);
        for a in 0..DIM {
            for b in 0..DIM {
                *dev = (*dev).max((pb[a][b] + g[a][b]).magnitude());
            }
        }
    };
    check_pb(&mc.metric.g0, &mut dev);
    for slice in &mc.metric.g1 {
        check_pb(slice, &mut dev);
    }

    // Omega- = -i Omega+
    let para_structure = Structure::new(StructureKind::Para, j_plus)?;
    let para_model = Model::new(para_structure, mc.metric)?;
    let omega_minus = kahler_form(&mc);
    let omega_plus = kahler_form(&para_model);
    for (cm, cp) in omega_minus.coeffs.iter().zip(&omega_plus.coeffs) {
        let diff = *cm + cp.scale(i);
        dev = dev.max(diff.max_magnitude());
    }

    // phi_{J-} = phi_{J+}
    let phi_minus = lee_form(&mc)?;
    let phi_plus = lee_form(&para_model)?;
    for a in 0..DIM {
        dev = dev.max((phi_minus.phi[a] - phi_plus.phi[a]).magnitude());
    }
    Ok(HermitianReductionReport { max_deviation: dev })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::example_3_2_model;

    const F: [f64; 4] = [0.3, -0.1, 0.7, 0.2];

    #[test]
    fn flat_model_has_zero_connection() {
        let m = standard_models::<f64>(StructureKind::Para, Signature::Neutral).unwrap();
        let lc = levi_civita(&m).unwrap();
        assert_eq!(lc, Connection::zero());
        let phi = lee_form(&m).unwrap();
        assert_eq!(phi.phi, [0.0; 4]);
        let report = verify_kw(&m).unwrap();
        assert!(report.residual < 1e-14);
    }

    #[test]
    fn example_3_2_christoffels() {
        let m = example_3_2_model(F);
        let lc = levi_civita(&m).unwrap();
        let g = |i: usize, j: usize| lc.gamma[i][j];
        // nabla_{d2} d4 = -f1 d3 - f3 d1
        assert!((g(1, 3)[2] + F[0]).abs() < 1e-14);
        assert!((g(1, 3)[0] + F[2]).abs() < 1e-14);
        // nabla_{d4} d4 = 2 f4 d4
        assert!((g(3, 3)[3] - 2.0 * F[3]).abs() < 1e-14);
        // nabla_{d1} d2 = f1 d2
        assert!((g(0, 1)[1] - F[0]).abs() < 1e-14);
        // nabla_{d2} d2 = 2 f2 d2
        assert!((g(1, 1)[1] - 2.0 * F[1]).abs() < 1e-14);
        // nabla_{d3} d4 = f3 d4
        assert!((g(2, 3)[3] - F[2]).abs() < 1e-14);
        assert!(lc.torsion_magnitude() < 1e-15);
    }

    #[test]
    fn example_3_2_lee_form() {
        let m = example_3_2_model(F);
        let phi = lee_form(&m).unwrap();
        assert!((phi.phi[0] + F[0]).abs() < 1e-14);
        assert!(phi.phi[1].abs() < 1e-14);
        assert!((phi.phi[2] + F[2]).abs() < 1e-14);
        assert!(phi.phi[3].abs() < 1e-14);
        // phi# = -f1 d3 - f3 d1
        assert!((phi.phi_sharp[2] + F[0]).abs() < 1e-14);
        assert!((phi.phi_sharp[0] + F[2]).abs() < 1e-14);
    }

    #[test]
    fn example_3_2_nabla_j_of_levi_civita() {
        let m = example_3_2_model(F);
        let lc = levi_civita(&m).unwrap();
        let nj = nabla_j(&lc, &m.structure);
        // (nabla_{d2} J+) d3 = -2 f3 d2
        assert!((nj.value[1][2][1] + 2.0 * F[2]).abs() < 1e-14);
        // (nabla_{d2} J+) d4 = 2 f3 d1
        assert!((nj.value[1][3][0] - 2.0 * F[2]).abs() < 1e-14);
        // (nabla_{d4} J+) d1 = 2 f1 d4
        assert!((nj.value[3][0][3] - 2.0 * F[0]).abs() < 1e-14);
        // (nabla_{d4} J+) d2 = -2 f1 d3
        assert!((nj.value[3][1][2] + 2.0 * F[0]).abs() < 1e-14);
        // rows d1, d3 vanish
        for j in 0..4 {
            for k in 0..4 {
                assert!(nj.value[0][j][k].abs() < 1e-14);
                assert!(nj.value[2][j][k].abs() < 1e-14);
            }
        }
    }

    #[test]
    fn example_3_2_theta_and_weyl_vanishing() {
        let m = example_3_2_model(F);
        let phi = lee_form(&m).unwrap();
        let lc = levi_civita(&m).unwrap();
        let wc = weyl_connection(&m, &phi).unwrap();
        // Theta_24 = (nabla^phi - nabla^g)_{d2} d4 = f1 d3 + f3 d1
        let theta24: Vec<f64> = (0..4)
            .map(|k| wc.gamma[1][3][k] - lc.gamma[1][3][k])
            .collect();
        assert!((theta24[2] - F[0]).abs() < 1e-14);
        assert!((theta24[0] - F[2]).abs() < 1e-14);
        // nabla^phi J+ = 0
        let report = verify_kw(&m).unwrap();
        assert!(report.residual < 1e-12, "residual {}", report.residual);
        assert!(wc.torsion_magnitude() < 1e-15);
    }

    #[test]
    fn weyl_connection_with_zero_phi_is_levi_civita() {
        let mut rng = trial_rng(5, 0);
        let m = random_model::<f64, _>(StructureKind::Para, Signature::Neutral, &mut rng).unwrap();
        let zero_phi = LeeForm {
            phi: [0.0; 4],
            phi_sharp: [0.0; 4],
        };
        assert_eq!(
            weyl_connection(&m, &zero_phi).unwrap(),
            levi_civita(&m).unwrap()
        );
    }

    #[test]
    fn uniqueness_rank_on_canonical_models() {
        let para = standard_models::<f64>(StructureKind::Para, Signature::Neutral).unwrap();
        assert_eq!(uniqueness_rank(&para).unwrap(), 4);
        let herm = standard_models::<f64>(StructureKind::Complex, Signature::NegativeDefinite)
            .unwrap();
        assert_eq!(uniqueness_rank(&herm).unwrap(), 4);
        let pseudo = standard_models::<f64>(StructureKind::Complex, Signature::Neutral).unwrap();
        assert_eq!(uniqueness_rank(&pseudo).unwrap(), 4);
    }

    #[test]
    fn linearization_vanishes_on_spanning_basis() {
        let base = standard_models::<f64>(StructureKind::Para, Signature::Neutral).unwrap();
        let basis = sminus_basis::<f64>();
        let table = linearization_map(&base.structure, &basis).unwrap();
        for row in &table.entries {
            for nj in row {
                assert!(nj.max_magnitude() < 1e-12);
            }
        }
    }

    #[test]
    fn linearization_rejects_invariant_tensor() {
        let base = standard_models::<f64>(StructureKind::Para, Signature::Neutral).unwrap();
        let mut eps = linalg::mat_zero::<f64>();
        eps[0][1] = 1.0;
        eps[1][0] = 1.0; // dx1.dx2 is J-invariant, not anti-invariant
        assert!(linearization_map(&base.structure, &[eps]).is_err());
    }

    #[test]
    fn continuation_smoke() {
        let reports = continuation_trials(7, 5).unwrap();
        assert_eq!(reports.len(), 3);
        for b in &reports {
            assert!(b.pass(), "{} max residual {}", b.name, b.max_residual());
        }
    }

    #[test]
    fn hermitian_reduction_on_standard_models() {
        for sig in [Signature::NegativeDefinite, Signature::Neutral] {
            let m = standard_models::<f64>(StructureKind::Complex, sig).unwrap();
            let r = hermitian_reduction_check(&m).unwrap();
            assert!(r.max_deviation < 1e-12, "{sig:?}: {}", r.max_deviation);
        }
    }

    #[test]
    fn hermitian_reduction_on_random_model() {
        let mut rng = trial_rng(9, 3);
        let m =
            random_model::<f64, _>(StructureKind::Complex, Signature::NegativeDefinite, &mut rng)
                .unwrap();
        let r = hermitian_reduction_check(&m).unwrap();
        assert!(r.max_deviation < 1e-9, "{}", r.max_deviation);
    }
}
