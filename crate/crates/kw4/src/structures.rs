//! Model data for (para-)Hermitian 4-manifolds at a point: metric jets,
//! constant structures J, compatibility projection, group actions, the
//! Nijenhuis tensor and the Kahler form.

use crate::error::{KwError, Result};
use crate::forms::{JetOrder, PForm};
use crate::jet::{jet_exp_scale, Jet1, JetMatrix, DIM};
use crate::linalg::{self, Mat};
use crate::scalar::Scalar;

const STRUCTURE_TOL: f64 = 1e-12;
const COMPAT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureKind {
    /// J^2 = +Id, J*g = -g (almost para-complex, anti-isometric).
    Para,
    /// J^2 = -Id, J*g = +g (almost complex, isometric).
    Complex,
}

impl StructureKind {
    pub fn square_sign(self) -> f64 {
        match self {
            StructureKind::Para => 1.0,
            StructureKind::Complex => -1.0,
        }
    }

    /// Sign s in J*g = s g.
    pub fn pullback_sign(self) -> f64 {
        match self {
            StructureKind::Para => -1.0,
            StructureKind::Complex => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StructureKind::Para => "para",
            StructureKind::Complex => "complex",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signature {
    /// (2,2)
    Neutral,
    /// (0,4)
    NegativeDefinite,
    /// (4,0); sign-convention variant of (0,4), exposed behind a flag.
    PositiveDefinite,
}

impl Signature {
    pub fn name(self) -> &'static str {
        match self {
            Signature::Neutral => "2,2",
            Signature::NegativeDefinite => "0,4",
            Signature::PositiveDefinite => "4,0",
        }
    }

    /// Number of positive eigenvalues of g0.
    pub fn positive_count(self) -> usize {
        match self {
            Signature::Neutral => 2,
            Signature::NegativeDefinite => 0,
            Signature::PositiveDefinite => 4,
        }
    }
}

/// A constant (para-)complex structure: J^2 = +/-Id, trace 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Structure<S: Scalar> {
    pub kind: StructureKind,
    pub j: Mat<S>,
}

impl<S: Scalar> Structure<S> {
    pub fn new(kind: StructureKind, j: Mat<S>) -> Result<Self> {
        let sq = linalg::mat_mul(&j, &j);
        let sign = S::from_re(kind.square_sign());
        let mut dev: f64 = 0.0;
        for i in 0..DIM {
            for k in 0..DIM {
                let expect = if i == k { sign } else { S::zero() };
                dev = dev.max((sq[i][k] - expect).magnitude());
            }
        }
        if dev > STRUCTURE_TOL {
            return Err(KwError::InvalidStructure {
                kind: kind.name(),
                reason: format!("J^2 deviates from {}Id by {dev:.3e}", kind.square_sign()),
            });
        }
        let tr = (0..DIM).fold(S::zero(), |acc, i| acc + j[i][i]);
        if tr.magnitude() > STRUCTURE_TOL {
            return Err(KwError::InvalidStructure {
                kind: kind.name(),
                reason: format!("trace magnitude {:.3e}", tr.magnitude()),
            });
        }
        Ok(Self { kind, j })
    }
}

/// The 1-jet of a metric at the origin: g(x) = g0 + sum_i x^i g1[i].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricJet<S: Scalar> {
    pub g0: Mat<S>,
    /// g1[i][j][k] = d_i g_{jk}(0); symmetric in (j,k).
    pub g1: [Mat<S>; DIM],
}

impl<S: Scalar> MetricJet<S> {
    pub fn new(g0: Mat<S>, g1: [Mat<S>; DIM]) -> Result<Self> {
        let mut dev: f64 = 0.0;
        for j in 0..DIM {
            for k in 0..DIM {
                dev = dev.max((g0[j][k] - g0[k][j]).magnitude());
                for i in 0..DIM {
                    dev = dev.max((g1[i][j][k] - g1[i][k][j]).magnitude());
                }
            }
        }
        if dev > STRUCTURE_TOL {
            return Err(KwError::IncompatibleMetric { deviation: dev });
        }
        if linalg::is_singular(&g0) {
            return Err(KwError::SingularMetric {
                det_magnitude: linalg::det(&g0).magnitude(),
            });
        }
        Ok(Self { g0, g1 })
    }

    /// The affine metric as a 4x4 jet matrix.
    pub fn jet_matrix(&self) -> JetMatrix<S> {
        let mut entries = [[Jet1::zero(); DIM]; DIM];
        for j in 0..DIM {
            for k in 0..DIM {
                let mut partials = [S::zero(); DIM];
                for i in 0..DIM {
                    partials[i] = self.g1[i][j][k];
                }
                entries[j][k] = Jet1::new(self.g0[j][k], partials);
            }
        }
        JetMatrix { entries }
    }

    /// g^{jk}(x) to first order.
    pub fn inverse_jets(&self) -> Result<JetMatrix<S>> {
        crate::jet::jet_matrix_inverse(&self.jet_matrix())
    }
}

/// A validated point model: structure + metric jet, compatible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Model<S: Scalar> {
    pub structure: Structure<S>,
    pub metric: MetricJet<S>,
}

/// Pullback J*g as a bilinear form: (J*g)_{ij} = g(J e_i, J e_j).
pub fn j_pullback<S: Scalar>(g: &Mat<S>, j: &Mat<S>) -> Mat<S> {
    let jt = linalg::mat_transpose(j);
    linalg::mat_mul(&linalg::mat_mul(&jt, g), j)
}

impl<S: Scalar> Model<S> {
    pub fn new(structure: Structure<S>, metric: MetricJet<S>) -> Result<Self> {
        let sign = S::from_re(structure.kind.pullback_sign());
        let mut dev: f64 = 0.0;
        let check = |g: &Mat<S>, dev: &mut f64| {
            let pb = j_pullback(g, &structure.j);
            for i in 0..DIM {
                for k in 0..DIM {
                    *dev = (*dev).max((pb[i][k] - sign * g[i][k]).magnitude());
                }
            }
        };
        check(&metric.g0, &mut dev);
        for slice in &metric.g1 {
            check(slice, &mut dev);
        }
        let scale = linalg::mat_max_magnitude(&metric.g0).max(1.0);
        if dev > COMPAT_TOL * scale {
            return Err(KwError::IncompatibleMetric { deviation: dev });
        }
        Ok(Self { structure, metric })
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(S) -> T + Copy) -> Model<T> {
        let map_mat = |m: &Mat<S>| -> Mat<T> { m.map(|row| row.map(f)) };
        Model {
            structure: Structure {
                kind: self.structure.kind,
                j: map_mat(&self.structure.j),
            },
            metric: MetricJet {
                g0: map_mat(&self.metric.g0),
                g1: [
                    map_mat(&self.metric.g1[0]),
                    map_mat(&self.metric.g1[1]),
                    map_mat(&self.metric.g1[2]),
                    map_mat(&self.metric.g1[3]),
                ],
            },
        }
    }
}

/// Project a raw symmetric pair onto the J-compatible subspace:
/// para kind keeps the anti-invariant part (1/2)(raw - J*raw), complex kind
/// the invariant part (1/2)(raw + J*raw).
pub fn project_compatible<S: Scalar>(
    g0raw: &Mat<S>,
    g1raw: &[Mat<S>; DIM],
    s: &Structure<S>,
) -> Result<MetricJet<S>> {
    let sign = S::from_re(s.kind.pullback_sign());
    let half = S::from_re(0.5);
    let project = |g: &Mat<S>| -> Mat<S> {
        let pb = j_pullback(g, &s.j);
        let mut out = linalg::mat_zero();
        for i in 0..DIM {
            for k in 0..DIM {
                out[i][k] = half * (g[i][k] + sign * pb[i][k]);
            }
        }
        out
    };
    let g0 = project(g0raw);
    let g1 = [
        project(&g1raw[0]),
        project(&g1raw[1]),
        project(&g1raw[2]),
        project(&g1raw[3]),
    ];
    // The projection can collapse a nonsingular raw metric; gate on the
    // determinant of the projected pointwise part.
    if linalg::is_singular(&g0) {
        return Err(KwError::DegenerateProjection {
            det_magnitude: linalg::det(&g0).magnitude(),
        });
    }
    MetricJet::new(g0, g1).map_err(|_| KwError::DegenerateProjection {
        det_magnitude: linalg::det(&g0).magnitude(),
    })
}

/// Kahler form Omega(x,y) = g(x, Jy) in jet arithmetic.
pub fn kahler_form<S: Scalar>(m: &Model<S>) -> PForm<S> {
    let gj = m.metric.jet_matrix();
    let j = &m.structure.j;
    let mut omega_full = [[Jet1::zero(); DIM]; DIM];
    for a in 0..DIM {
        for b in 0..DIM {
            let mut acc = Jet1::zero();
            for k in 0..DIM {
                acc = acc + gj.entries[a][k].scale(j[k][b]);
            }
            omega_full[a][b] = acc;
        }
    }
    // Antisymmetry is a consequence of compatibility; checked, not assumed.
    let scale = linalg::mat_max_magnitude(&m.metric.g0).max(1.0);
    let mut out = PForm::zero(2, JetOrder::One);
    for a in 0..DIM {
        for b in a + 1..DIM {
            let sym = (omega_full[a][b] + omega_full[b][a]).max_magnitude();
            debug_assert!(
                sym < 1e-9 * scale,
                "Kahler form not antisymmetric ({sym:.3e})"
            );
            out.set_coeff(&[a, b], omega_full[a][b]);
        }
    }
    out
}

/// Coordinate Nijenhuis tensor of a 1-jet J field; returns N[i][j][k] with
/// N(d_i, d_j) = N^k_{ij} d_k at the origin.
pub fn nijenhuis<S: Scalar>(
    jjet: &[[Jet1<S>; DIM]; DIM],
    kind: StructureKind,
) -> [[[S; DIM]; DIM]; DIM] {
    let mut n = [[[S::zero(); DIM]; DIM]; DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                let mut acc = S::zero();
                for m in 0..DIM {
                    // para: dJ^m_i/dx^j J^k_m - dJ^m_j/dx^i J^k_m
                    //        + J^m_i dJ^k_j/dx^m - J^m_j dJ^k_i/dx^m
                    acc = acc + jjet[m][i].partials[j] * jjet[k][m].value
                        - jjet[m][j].partials[i] * jjet[k][m].value
                        + jjet[m][i].value * jjet[k][j].partials[m]
                        - jjet[m][j].value * jjet[k][i].partials[m];
                }
                n[i][j][k] = if kind == StructureKind::Para {
                    acc
                } else {
                    -acc
                };
            }
        }
    }
    n
}

/// Change of basis by an invertible A: J -> A J A^-1, the metric pulls
/// back through A^-1 so that compatibility is preserved.
pub fn gl4_action<S: Scalar>(a: &Mat<S>, m: &Model<S>) -> Result<Model<S>> {
    let b = linalg::mat_inv(a).map_err(|det_magnitude| KwError::SingularTransform {
        det_magnitude,
    })?;
    let j_new = linalg::mat_mul(&linalg::mat_mul(a, &m.structure.j), &b);
    let g0 = pullback_sym(&m.metric.g0, &b);
    let mut g1 = [linalg::mat_zero(); DIM];
    for i in 0..DIM {
        // extra slot contraction for the direction index
        let slice = [
            pullback_sym(&m.metric.g1[0], &b),
            pullback_sym(&m.metric.g1[1], &b),
            pullback_sym(&m.metric.g1[2], &b),
            pullback_sym(&m.metric.g1[3], &b),
        ];
        for jj in 0..DIM {
            for kk in 0..DIM {
                let mut acc = S::zero();
                for mm in 0..DIM {
                    acc = acc + b[mm][i] * slice[mm][jj][kk];
                }
                g1[i][jj][kk] = acc;
            }
        }
    }
    let structure = Structure::new(m.structure.kind, j_new)?;
    let metric = MetricJet::new(g0, g1)?;
    Model::new(structure, metric)
}

fn pullback_sym<S: Scalar>(g: &Mat<S>, b: &Mat<S>) -> Mat<S> {
    let bt = linalg::mat_transpose(b);
    linalg::mat_mul(&linalg::mat_mul(&bt, g), b)
}

/// Covector components under the same change of basis as `gl4_action`.
pub fn transform_covector<S: Scalar>(a: &Mat<S>, phi: &[S; DIM]) -> Result<[S; DIM]> {
    let b = linalg::mat_inv(a).map_err(|det_magnitude| KwError::SingularTransform {
        det_magnitude,
    })?;
    let mut out = [S::zero(); DIM];
    for i in 0..DIM {
        for k in 0..DIM {
            out[i] = out[i] + b[k][i] * phi[k];
        }
    }
    Ok(out)
}

/// Conformal change g -> e^{2f} g truncated to jet order 1; J unchanged.
pub fn conformal_rescale<S: Scalar>(m: &Model<S>, f0: S, df: [S; DIM]) -> Model<S> {
    let factor = jet_exp_scale(f0, df, S::from_re(2.0));
    let gj = m.metric.jet_matrix();
    let mut g0 = linalg::mat_zero();
    let mut g1 = [linalg::mat_zero(); DIM];
    for j in 0..DIM {
        for k in 0..DIM {
            let scaled = factor * gj.entries[j][k];
            g0[j][k] = scaled.value;
            for i in 0..DIM {
                g1[i][j][k] = scaled.partials[i];
            }
        }
    }
    Model {
        structure: m.structure,
        metric: MetricJet { g0, g1 },
    }
}

/// The canonical flat models.
pub fn standard_models<S: Scalar>(kind: StructureKind, signature: Signature) -> Result<Model<S>> {
    let one = S::one();
    let mut g0 = linalg::mat_zero();
    let mut j = linalg::mat_zero();
    match kind {
        StructureKind::Para => {
            if signature != Signature::Neutral {
                // para-Hermitian forces neutral signature
                return Err(KwError::UnsupportedSignature);
            }
            // standard neutral model: J+ = diag(1,1,-1,-1), g(e1,e3) = g(e2,e4) = 1.
            j[0][0] = one;
            j[1][1] = one;
            j[2][2] = -one;
            j[3][3] = -one;
            g0[0][2] = one;
            g0[2][0] = one;
            g0[1][3] = one;
            g0[3][1] = one;
        }
        StructureKind::Complex => {
            // J- e1 = e2, J- e2 = -e1, J- e3 = e4, J- e4 = -e3.
            j[1][0] = one;
            j[0][1] = -one;
            j[3][2] = one;
            j[2][3] = -one;
            match signature {
                Signature::Neutral => {
                    g0[0][0] = one;
                    g0[1][1] = one;
                    g0[2][2] = -one;
                    g0[3][3] = -one;
                }
                Signature::NegativeDefinite => {
                    for i in 0..DIM {
                        g0[i][i] = -one;
                    }
                }
                Signature::PositiveDefinite => {
                    for i in 0..DIM {
                        g0[i][i] = one;
                    }
                }
            }
        }
    }
    let structure = Structure::new(kind, j)?;
    let metric = MetricJet::new(g0, [linalg::mat_zero(); DIM])?;
    Model::new(structure, metric)
}

/// The closed-form example family: g(d1,d3) = 1, g(d2,d4) = e^{2f}, f(0) = 0.
pub fn example_3_2_model<S: Scalar>(f: [S; DIM]) -> Model<S> {
    let base = standard_models::<S>(StructureKind::Para, Signature::Neutral).unwrap();
    let mut g1 = [linalg::mat_zero(); DIM];
    let two = S::from_re(2.0);
    for i in 0..DIM {
        g1[i][1][3] = two * f[i];
        g1[i][3][1] = two * f[i];
    }
    Model {
        structure: base.structure,
        metric: MetricJet {
            g0: base.metric.g0,
            g1,
        },
    }
}
