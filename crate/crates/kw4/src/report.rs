//! Scenario ingestion, sweep execution and report emission.
//!
//! Scenario and report files are JSON; complex numbers are encoded as
//! two-element arrays [re, im] and tensors as nested row-major arrays.
//! Reports are byte-reproducible for a fixed seed apart from the wall
//! time field.

use crate::error::Result;
use crate::linalg::{self, Mat};
use crate::oracle::fd_oracle;
use crate::random::{
    random_conjugated_model, random_model, trial_rng, GENERATOR_NAME,
};
use crate::scalar::{Scalar, C64};
use crate::structures::{
    conformal_rescale, kahler_form, project_compatible, standard_models, Model, Signature,
    Structure, StructureKind,
};
use crate::weyl::{
    continuation_trials, kw_nabla_j, lee_form, levi_civita, linearization_map, sminus_basis,
    uniqueness_rank, verify_kw_with, weyl_connection,
};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::time::Instant;

pub const DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Verify,
    Uniqueness,
    Linearization,
    Continuation,
    StarTable,
    #[serde(rename = "example-3-2")]
    Example32,
    OracleCompare,
    Gauge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindRepr {
    Para,
    Complex,
}

impl KindRepr {
    pub fn to_kind(self) -> StructureKind {
        match self {
            KindRepr::Para => StructureKind::Para,
            KindRepr::Complex => StructureKind::Complex,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarsRepr {
    Real,
    Complex,
}

/// A scalar entry in a scenario file: plain number or [re, im].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumRepr {
    Real(f64),
    Complex([f64; 2]),
}

impl NumRepr {
    fn to_scalar<S: Scalar>(self) -> std::result::Result<S, String> {
        let (re, im) = match self {
            NumRepr::Real(x) => (x, 0.0),
            NumRepr::Complex([re, im]) => (re, im),
        };
        S::from_parts(re, im)
            .ok_or_else(|| format!("complex entry [{re}, {im}] in a real-scalar scenario"))
    }
}

fn default_trials() -> u64 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub mode: Mode,
    #[serde(default = "default_kind")]
    pub kind: KindRepr,
    /// "2,2", "0,4" or "4,0".
    #[serde(default = "default_signature")]
    pub signature: String,
    #[serde(default = "default_scalars")]
    pub scalars: ScalarsRepr,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: u64,
    /// Per-mode default when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g0: Option<Vec<Vec<NumRepr>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g1: Option<Vec<Vec<Vec<NumRepr>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "J")]
    pub j: Option<Vec<Vec<NumRepr>>>,
    /// Derivatives (f1..f4) for the example-3-2 mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<[f64; 4]>,
    #[serde(default)]
    pub flip_orientation: bool,
}

fn default_kind() -> KindRepr {
    KindRepr::Para
}

fn default_signature() -> String {
    "2,2".to_string()
}

fn default_scalars() -> ScalarsRepr {
    ScalarsRepr::Real
}

impl Scenario {
    pub fn parse_signature(&self) -> std::result::Result<Signature, String> {
        match self.signature.as_str() {
            "2,2" => Ok(Signature::Neutral),
            "0,4" => Ok(Signature::NegativeDefinite),
            "4,0" => Ok(Signature::PositiveDefinite),
            s => Err(format!("unknown signature {s:?} (expected \"2,2\", \"0,4\" or \"4,0\")")),
        }
    }

    pub fn effective_tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(match self.mode {
            Mode::Verify | Mode::Uniqueness | Mode::Gauge => 1e-9,
            Mode::Linearization => 1e-10,
            Mode::Example32 => 1e-12,
            Mode::OracleCompare => 1e-6,
            Mode::StarTable => 0.0,
            // batteries carry their own tolerances
            Mode::Continuation => 1e-7,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Provenance {
    pub seed: u64,
    pub tolerance: f64,
    pub engine_version: String,
    pub generator: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TrialOutcome {
    pub trial: u64,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<u32>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Summary {
    pub max_residual: f64,
    pub pass_count: u64,
    pub trials: u64,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub provenance: Provenance,
    pub records: Vec<TrialOutcome>,
    pub summary: Summary,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }
}

fn parse_mat<S: Scalar>(data: &[Vec<NumRepr>]) -> std::result::Result<Mat<S>, String> {
    if data.len() != DIM || data.iter().any(|r| r.len() != DIM) {
        return Err("tensor must be 4x4".to_string());
    }
    let mut out = linalg::mat_zero();
    for i in 0..DIM {
        for j in 0..DIM {
            out[i][j] = data[i][j].to_scalar()?;
        }
    }
    Ok(out)
}

/// Explicit model from scenario tensors, projected and validated.
fn explicit_model<S: Scalar>(
    sc: &Scenario,
    kind: StructureKind,
    signature: Signature,
) -> std::result::Result<Option<Model<S>>, String> {
    if sc.g0.is_none() && sc.g1.is_none() && sc.j.is_none() {
        return Ok(None);
    }
    let standard = standard_models::<S>(kind, signature).map_err(|e| e.to_string())?;
    let j = match &sc.j {
        Some(j) => parse_mat(j)?,
        None => standard.structure.j,
    };
    let structure = Structure::new(kind, j).map_err(|e| e.to_string())?;
    let g0 = match &sc.g0 {
        Some(g0) => parse_mat(g0)?,
        None => standard.metric.g0,
    };
    let g1 = match &sc.g1 {
        Some(g1) => {
            if g1.len() != DIM {
                return Err("g1 must have 4 slices".to_string());
            }
            [
                parse_mat(&g1[0])?,
                parse_mat(&g1[1])?,
                parse_mat(&g1[2])?,
                parse_mat(&g1[3])?,
            ]
        }
        None => [linalg::mat_zero(); DIM],
    };
    let metric = project_compatible(&g0, &g1, &structure).map_err(|e| e.to_string())?;
    let model = Model::new(structure, metric).map_err(|e| e.to_string())?;
    Ok(Some(model))
}

/// Run a scenario on up to `jobs` workers. Record order is independent of
/// the worker count.
pub fn run_scenario(sc: &Scenario, jobs: usize) -> std::result::Result<Report, String> {
    let start = Instant::now();
    let tolerance = sc.effective_tolerance();
    let records = match sc.scalars {
        ScalarsRepr::Real => run_records::<f64>(sc, jobs, tolerance)?,
        ScalarsRepr::Complex => run_records::<C64>(sc, jobs, tolerance)?,
    };
    let max_residual = records.iter().map(|r| r.residual).fold(0.0, f64::max);
    let pass_count = records.iter().filter(|r| r.pass).count() as u64;
    let trials = records.len() as u64;
    Ok(Report {
        provenance: Provenance {
            seed: sc.seed,
            tolerance,
            engine_version: crate::ENGINE_VERSION.to_string(),
            generator: GENERATOR_NAME.to_string(),
        },
        records,
        summary: Summary {
            max_residual,
            pass_count,
            trials,
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    })
}

fn run_records<S: Scalar>(
    sc: &Scenario,
    jobs: usize,
    tolerance: f64,
) -> std::result::Result<Vec<TrialOutcome>, String> {
    match sc.mode {
        Mode::StarTable => return star_table_records::<S>(sc),
        Mode::Continuation => {
            let batteries =
                continuation_trials(sc.seed, sc.trials).map_err(|e| e.to_string())?;
            let mut out = Vec::new();
            for (b, battery) in batteries.iter().enumerate() {
                for r in &battery.records {
                    out.push(TrialOutcome {
                        trial: b as u64 * sc.trials + r.trial,
                        residual: r.residual,
                        rank: None,
                        pass: r.pass,
                    });
                }
            }
            return Ok(out);
        }
        _ => {}
    }

    let kind = sc.kind.to_kind();
    let signature = sc.parse_signature()?;
    let explicit = explicit_model::<S>(sc, kind, signature)?;
    let run_one = |trial: u64| -> Result<TrialOutcome> {
        run_trial::<S>(sc, kind, signature, &explicit, tolerance, trial)
    };

    let results: Vec<Result<TrialOutcome>> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| e.to_string())?;
        use rayon::prelude::*;
        pool.install(|| (0..sc.trials).into_par_iter().map(run_one).collect())
    } else {
        (0..sc.trials).map(run_one).collect()
    };
    let mut records = results
        .into_iter()
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;
    records.sort_by_key(|r| r.trial);
    Ok(records)
}

fn run_trial<S: Scalar>(
    sc: &Scenario,
    kind: StructureKind,
    signature: Signature,
    explicit: &Option<Model<S>>,
    tolerance: f64,
    trial: u64,
) -> Result<TrialOutcome> {
    let mut rng = trial_rng(sc.seed, trial);
    match sc.mode {
        Mode::Verify => {
            let model = match explicit {
                Some(m) => *m,
                None => random_model::<S, _>(kind, signature, &mut rng)?,
            };
            let report = verify_kw_with(&model, tolerance)?;
            Ok(TrialOutcome {
                trial,
                residual: report.residual,
                rank: None,
                pass: report.pass,
            })
        }
        Mode::Uniqueness => {
            let model = match explicit {
                Some(m) => *m,
                None => random_conjugated_model::<S, _>(kind, signature, &mut rng, 10.0)?,
            };
            let rank = uniqueness_rank(&model)?;
            Ok(TrialOutcome {
                trial,
                residual: (4.0 - rank as f64).abs(),
                rank: Some(rank as u32),
                pass: rank == 4,
            })
        }
        Mode::Linearization => {
            let basis = sminus_basis::<S>();
            let eps = if (trial as usize) < basis.len() {
                basis[trial as usize]
            } else {
                // random anti-invariant combination
                let mut eps = linalg::mat_zero();
                for b in &basis {
                    let c = S::sample_uniform(&mut rng);
                    for i in 0..DIM {
                        for j in 0..DIM {
                            eps[i][j] = eps[i][j] + c * b[i][j];
                        }
                    }
                }
                eps
            };
            let base = standard_models::<S>(StructureKind::Para, Signature::Neutral)?;
            let table = linearization_map(&base.structure, &[eps])?;
            let residual = table.entries[0]
                .iter()
                .map(|nj| nj.max_magnitude())
                .fold(0.0, f64::max);
            Ok(TrialOutcome {
                trial,
                residual,
                rank: None,
                pass: residual <= tolerance,
            })
        }
        Mode::Example32 => {
            let f: [f64; 4] = match sc.f {
                Some(f) => f,
                None => [
                    rng.gen_range(-1.0..=1.0),
                    rng.gen_range(-1.0..=1.0),
                    rng.gen_range(-1.0..=1.0),
                    rng.gen_range(-1.0..=1.0),
                ],
            };
            let residual = example_3_2_residual::<S>(f)?;
            Ok(TrialOutcome {
                trial,
                residual,
                rank: None,
                pass: residual <= tolerance,
            })
        }
        Mode::OracleCompare => {
            let model = match explicit {
                Some(m) => *m,
                None => random_model::<S, _>(kind, signature, &mut rng)?,
            };
            let residual = oracle_deviation(&model)?;
            Ok(TrialOutcome {
                trial,
                residual,
                rank: None,
                pass: residual <= tolerance,
            })
        }
        Mode::Gauge => {
            let model = match explicit {
                Some(m) => *m,
                None => random_model::<S, _>(kind, signature, &mut rng)?,
            };
            let f0 = S::sample_uniform(&mut rng) * S::from_re(0.5);
            let df = [
                S::sample_uniform(&mut rng),
                S::sample_uniform(&mut rng),
                S::sample_uniform(&mut rng),
                S::sample_uniform(&mut rng),
            ];
            let residual = gauge_deviation(&model, f0, df)?;
            Ok(TrialOutcome {
                trial,
                residual,
                rank: None,
                pass: residual <= tolerance,
            })
        }
        Mode::StarTable | Mode::Continuation => unreachable!("handled by caller"),
    }
}

/// Deviation of the computed star table from the reference signs.
pub fn star_table_entries<S: Scalar>(
    flip: bool,
) -> Result<Vec<(String, String, f64, f64)>> {
    use crate::forms::{hodge_star, JetOrder, PForm, VolumeElement};
    let m = standard_models::<S>(StructureKind::Para, Signature::Neutral)?;
    let omega = kahler_form(&m);
    let mut mu = VolumeElement::from_kahler(&omega)?;
    if flip {
        mu = mu.flipped();
    }
    let sign_flip = if flip { -1.0 } else { 1.0 };
    let cases: [(&[usize], &[usize], f64); 6] = [
        (&[0, 2], &[1, 3], -1.0),
        (&[1, 3], &[0, 2], -1.0),
        (&[0, 1, 2], &[1], -1.0),
        (&[0, 1, 3], &[0], 1.0),
        (&[0, 2, 3], &[3], -1.0),
        (&[1, 2, 3], &[2], 1.0),
    ];
    let mut out = Vec::new();
    for (src, dst, sign) in cases {
        let a = PForm::<S>::basis_form(src.len(), src, JetOrder::One);
        let starred = hodge_star(&a, &m.metric, &mu)?;
        let expected = sign * sign_flip;
        let mut expect_form = PForm::<S>::zero(4 - src.len(), JetOrder::One);
        expect_form.set_coeff(dst, crate::jet::Jet1::constant(S::from_re(expected)));
        let mut dev: f64 = 0.0;
        for (c, e) in starred.coeffs.iter().zip(&expect_form.coeffs) {
            dev = dev.max((*c - *e).max_magnitude());
        }
        out.push((
            format_indices(src),
            format!("{}{}", if expected < 0.0 { "-" } else { "" }, format_indices(dst)),
            expected,
            dev,
        ));
    }
    Ok(out)
}

fn format_indices(idx: &[usize]) -> String {
    idx.iter()
        .map(|i| format!("e{}", i + 1))
        .collect::<Vec<_>>()
        .join("^")
}

fn star_table_records<S: Scalar>(sc: &Scenario) -> std::result::Result<Vec<TrialOutcome>, String> {
    let entries = star_table_entries::<S>(sc.flip_orientation).map_err(|e| e.to_string())?;
    Ok(entries
        .iter()
        .enumerate()
        .map(|(i, (_, _, _, dev))| TrialOutcome {
            trial: i as u64,
            residual: *dev,
            rank: None,
            pass: *dev == 0.0,
        })
        .collect())
}

/// Max deviation of the closed-form example model from every reference value:
/// Christoffels, delta Omega, phi, phi#, and the nabla^phi J residual.
pub fn example_3_2_residual<S: Scalar>(f: [f64; 4]) -> Result<f64> {
    use crate::forms::{codifferential_2form, VolumeElement};
    let fs = f.map(S::from_re);
    let m = crate::structures::example_3_2_model::<S>(fs);
    let mut dev: f64 = 0.0;

    // Christoffel reference table of the example model.
    let lc = levi_civita(&m)?;
    let mut expect = [[[0.0f64; 4]; 4]; 4];
    expect[0][1][1] = f[0];
    expect[1][0][1] = f[0];
    expect[0][3][3] = f[0];
    expect[3][0][3] = f[0];
    expect[2][1][1] = f[2];
    expect[1][2][1] = f[2];
    expect[2][3][3] = f[2];
    expect[3][2][3] = f[2];
    expect[3][3][3] = 2.0 * f[3];
    expect[1][1][1] = 2.0 * f[1];
    expect[1][3][0] = -f[2];
    expect[3][1][0] = -f[2];
    expect[1][3][2] = -f[0];
    expect[3][1][2] = -f[0];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                dev = dev.max((lc.gamma[i][j][k] - S::from_re(expect[i][j][k])).magnitude());
            }
        }
    }

    // delta Omega(0) = -2 f1 dx1 + 2 f3 dx3
    let omega = kahler_form(&m);
    let mu = VolumeElement::from_kahler(&omega)?;
    let delta = codifferential_2form(&omega, &m.metric, &mu)?;
    let expect_delta = [-2.0 * f[0], 0.0, 2.0 * f[2], 0.0];
    for i in 0..4 {
        dev = dev.max((delta.coeffs[i].value - S::from_re(expect_delta[i])).magnitude());
    }

    // phi(0) = -f1 dx1 - f3 dx3 and phi# = -f3 d1 - f1 d3
    let phi = lee_form(&m)?;
    let expect_phi = [-f[0], 0.0, -f[2], 0.0];
    let expect_sharp = [-f[2], 0.0, -f[0], 0.0];
    for i in 0..4 {
        dev = dev.max((phi.phi[i] - S::from_re(expect_phi[i])).magnitude());
        dev = dev.max((phi.phi_sharp[i] - S::from_re(expect_sharp[i])).magnitude());
    }

    // nabla^phi J = 0
    let nj = kw_nabla_j(&m)?;
    dev = dev.max(nj.max_magnitude());
    Ok(dev)
}

/// Max disagreement between the jet engine and the finite-difference
/// oracle on phi, the Christoffels and nabla^phi J.
pub fn oracle_deviation<S: Scalar>(m: &Model<S>) -> Result<f64> {
    let out = fd_oracle(m, 1e-4)?;
    let phi = lee_form(m)?;
    let lc = levi_civita(m)?;
    let nj = kw_nabla_j(m)?;
    let mut dev: f64 = 0.0;
    for i in 0..DIM {
        dev = dev.max((out.phi[i] - phi.phi[i]).magnitude());
        for j in 0..DIM {
            for k in 0..DIM {
                dev = dev.max((out.gamma[i][j][k] - lc.gamma[i][j][k]).magnitude());
                dev = dev.max((out.nabla_j[i][j][k] - nj.value[i][j][k]).magnitude());
            }
        }
    }
    Ok(dev)
}

/// Gauge covariance deviation: phi~ = phi - df and invariance of the Weyl
/// Christoffels under a conformal rescale.
pub fn gauge_deviation<S: Scalar>(m: &Model<S>, f0: S, df: [S; DIM]) -> Result<f64> {
    let rescaled = conformal_rescale(m, f0, df);
    let phi = lee_form(m)?;
    let phi_tilde = lee_form(&rescaled)?;
    let mut dev: f64 = 0.0;
    for i in 0..DIM {
        dev = dev.max((phi_tilde.phi[i] - (phi.phi[i] - df[i])).magnitude());
    }
    let wc = weyl_connection(m, &phi)?;
    let wc_tilde = weyl_connection(&rescaled, &phi_tilde)?;
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                dev = dev.max((wc_tilde.gamma[i][j][k] - wc.gamma[i][j][k]).magnitude());
            }
        }
    }
    Ok(dev)
}

/// Serialize a report with the wall-time field zeroed; this is the byte
/// layout compared for determinism.
pub fn canonical_json(report: &Report) -> String {
    let mut clone = report.clone();
    clone.summary.wall_time_ms = 0.0;
    serde_json::to_string_pretty(&clone).expect("report serialization")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(mode: Mode) -> Scenario {
        Scenario {
            mode,
            kind: KindRepr::Para,
            signature: "2,2".to_string(),
            scalars: ScalarsRepr::Real,
            seed: 42,
            trials: 5,
            tolerance: None,
            g0: None,
            g1: None,
            j: None,
            f: None,
            flip_orientation: false,
        }
    }

    #[test]
    fn verify_scenario_passes_and_is_deterministic() {
        let sc = scenario(Mode::Verify);
        let r1 = run_scenario(&sc, 1).unwrap();
        let r2 = run_scenario(&sc, 2).unwrap();
        assert!(r1.all_pass());
        assert_eq!(canonical_json(&r1), canonical_json(&r2));
        assert_eq!(r1.summary.pass_count, 5);
    }

    #[test]
    fn star_table_scenario_is_exact() {
        let mut sc = scenario(Mode::StarTable);
        sc.trials = 1;
        let r = run_scenario(&sc, 1).unwrap();
        assert_eq!(r.records.len(), 6);
        assert!(r.all_pass());
        assert_eq!(r.summary.max_residual, 0.0);
    }

    #[test]
    fn flipped_star_table_negates_entries() {
        let entries = star_table_entries::<f64>(true).unwrap();
        // star(e1^e3) = +e2^e4 under the flipped orientation
        assert_eq!(entries[0].2, 1.0);
        assert_eq!(entries[0].3, 0.0);
    }

    #[test]
    fn example_3_2_scenario_with_fixed_f() {
        let mut sc = scenario(Mode::Example32);
        sc.trials = 1;
        sc.f = Some([0.3, -0.1, 0.7, 0.2]);
        let r = run_scenario(&sc, 1).unwrap();
        assert!(r.all_pass());
        assert!(r.summary.max_residual < 1e-12);
    }

    #[test]
    fn explicit_model_round_trips_through_json() {
        let text = r#"{
            "mode": "verify",
            "kind": "para",
            "seed": 1,
            "trials": 1,
            "g0": [[0,0,1,0],[0,0,0,1],[1,0,0,0],[0,1,0,0]],
            "g1": [
                [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]],
                [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]],
                [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]],
                [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]
            ]
        }"#;
        let sc: Scenario = serde_json::from_str(text).unwrap();
        let r = run_scenario(&sc, 1).unwrap();
        assert!(r.all_pass());
        assert!(r.summary.max_residual < 1e-14);
    }

    #[test]
    fn complex_entry_in_real_scenario_is_rejected() {
        let text = r#"{
            "mode": "verify",
            "scalars": "real",
            "g0": [[0,0,[1,2],0],[0,0,0,1],[[1,2],0,0,0],[0,1,0,0]]
        }"#;
        let sc: Scenario = serde_json::from_str(text).unwrap();
        assert!(run_scenario(&sc, 1).is_err());
    }

    #[test]
    fn gauge_and_oracle_modes_pass() {
        for mode in [Mode::Gauge, Mode::OracleCompare, Mode::Uniqueness] {
            let mut sc = scenario(mode);
            sc.trials = 3;
            let r = run_scenario(&sc, 1).unwrap();
            assert!(r.all_pass(), "{mode:?}: {r:?}");
        }
    }
}
