//! Finite-difference oracle: recomputes the Lee form, Christoffels and
//! nabla J by evaluating the affine metric at stencil points and taking
//! central differences, with one Richardson level. No jet arithmetic is
//! used anywhere on this path; the pointwise exterior algebra is
//! duplicated here on purpose so the two routes stay independent.

use crate::error::{KwError, Result};
use crate::jet::DIM;
use crate::linalg::{self, Mat};
use crate::scalar::Scalar;
use crate::structures::{Model, StructureKind};

// Increasing multi-indices and the signs of (I, I^c) as permutations of
// (0,1,2,3).
const B2: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];
const B2_COMP: [usize; 6] = [5, 4, 3, 2, 1, 0];
const B2_SIGN: [f64; 6] = [1.0, -1.0, 1.0, 1.0, -1.0, 1.0];
const B3: [[usize; 3]; 4] = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
const B3_COMP: [usize; 4] = [3, 2, 1, 0];
const B3_SIGN: [f64; 4] = [1.0, -1.0, 1.0, -1.0];

#[derive(Debug, Clone, Copy)]
pub struct OracleOutput<S: Scalar> {
    pub phi: [S; DIM],
    pub gamma: [[[S; DIM]; DIM]; DIM],
    pub nabla_j: [[[S; DIM]; DIM]; DIM],
}

fn metric_at<S: Scalar>(m: &Model<S>, x: [f64; DIM]) -> Mat<S> {
    let mut g = m.metric.g0;
    for i in 0..DIM {
        let xi = S::from_re(x[i]);
        for j in 0..DIM {
            for k in 0..DIM {
                g[j][k] = g[j][k] + xi * m.metric.g1[i][j][k];
            }
        }
    }
    g
}

fn invert<S: Scalar>(g: &Mat<S>) -> Result<Mat<S>> {
    linalg::mat_inv(g).map_err(|det_magnitude| KwError::SingularMetric { det_magnitude })
}

/// Omega(x,y) = g(x, Jy), packed over the increasing pairs.
fn omega_coeffs<S: Scalar>(g: &Mat<S>, j: &Mat<S>) -> [S; 6] {
    let mut out = [S::zero(); 6];
    for (pos, [a, b]) in B2.iter().enumerate() {
        let mut acc = S::zero();
        for k in 0..DIM {
            acc = acc + g[*a][k] * j[k][*b];
        }
        out[pos] = acc;
    }
    out
}

/// Top coefficient of (1/2) Omega ^ Omega.
fn mu_coeff<S: Scalar>(omega: &[S; 6]) -> S {
    omega[0] * omega[5] - omega[1] * omega[4] + omega[2] * omega[3]
}

fn minor2<S: Scalar>(ginv: &Mat<S>, rows: [usize; 2], cols: [usize; 2]) -> S {
    ginv[rows[0]][cols[0]] * ginv[rows[1]][cols[1]]
        - ginv[rows[0]][cols[1]] * ginv[rows[1]][cols[0]]
}

fn minor3<S: Scalar>(ginv: &Mat<S>, rows: [usize; 3], cols: [usize; 3]) -> S {
    let mut acc = S::zero();
    // permutation expansion of a 3x3 determinant
    let perms: [([usize; 3], f64); 6] = [
        ([0, 1, 2], 1.0),
        ([1, 2, 0], 1.0),
        ([2, 0, 1], 1.0),
        ([0, 2, 1], -1.0),
        ([2, 1, 0], -1.0),
        ([1, 0, 2], -1.0),
    ];
    for (p, sign) in perms {
        let term = ginv[rows[0]][cols[p[0]]]
            * ginv[rows[1]][cols[p[1]]]
            * ginv[rows[2]][cols[p[2]]];
        acc = acc + S::from_re(sign) * term;
    }
    acc
}

fn star2<S: Scalar>(a: &[S; 6], ginv: &Mat<S>, mu: S) -> [S; 6] {
    let mut out = [S::zero(); 6];
    for (pos, idx) in B2.iter().enumerate() {
        let mut raised = S::zero();
        for (k, idx_k) in B2.iter().enumerate() {
            raised = raised + minor2(ginv, *idx, *idx_k) * a[k];
        }
        out[B2_COMP[pos]] = out[B2_COMP[pos]] + S::from_re(B2_SIGN[pos]) * mu * raised;
    }
    out
}

fn star3<S: Scalar>(a: &[S; 4], ginv: &Mat<S>, mu: S) -> [S; DIM] {
    let mut out = [S::zero(); DIM];
    for (pos, idx) in B3.iter().enumerate() {
        let mut raised = S::zero();
        for (k, idx_k) in B3.iter().enumerate() {
            raised = raised + minor3(ginv, *idx, *idx_k) * a[k];
        }
        out[B3_COMP[pos]] = out[B3_COMP[pos]] + S::from_re(B3_SIGN[pos]) * mu * raised;
    }
    out
}

/// Pointwise star Omega at x.
fn star_omega_at<S: Scalar>(m: &Model<S>, x: [f64; DIM]) -> Result<[S; 6]> {
    let g = metric_at(m, x);
    let ginv = invert(&g)?;
    let omega = omega_coeffs(&g, &m.structure.j);
    let mu = mu_coeff(&omega);
    Ok(star2(&omega, &ginv, mu))
}

fn pos2(a: usize, b: usize) -> (usize, f64) {
    if a < b {
        (B2.iter().position(|p| *p == [a, b]).unwrap(), 1.0)
    } else {
        (B2.iter().position(|p| *p == [b, a]).unwrap(), -1.0)
    }
}

fn step(dir: usize, h: f64) -> [f64; DIM] {
    let mut x = [0.0; DIM];
    x[dir] = h;
    x
}

fn compute_at_step<S: Scalar>(m: &Model<S>, h: f64) -> Result<OracleOutput<S>> {
    let inv_2h = S::from_re(1.0 / (2.0 * h));

    // d(star Omega) at the origin by central differences.
    let mut d_star = [S::zero(); 4];
    let mut star_plus = [[S::zero(); 6]; DIM];
    let mut star_minus = [[S::zero(); 6]; DIM];
    for dir in 0..DIM {
        star_plus[dir] = star_omega_at(m, step(dir, h))?;
        star_minus[dir] = star_omega_at(m, step(dir, -h))?;
    }
    for (mp, idx) in B3.iter().enumerate() {
        let mut acc = S::zero();
        for (k, &d) in idx.iter().enumerate() {
            let rest: Vec<usize> = idx.iter().copied().filter(|&x| x != d).collect();
            let (pos, sgn) = pos2(rest[0], rest[1]);
            let partial = (star_plus[d][pos] - star_minus[d][pos]) * inv_2h;
            let signed = S::from_re(sgn * if k % 2 == 0 { 1.0 } else { -1.0 }) * partial;
            acc = acc + signed;
        }
        d_star[mp] = acc;
    }

    // delta Omega(0) = -star d star Omega(0), outer star at the origin.
    let g0 = metric_at(m, [0.0; DIM]);
    let ginv0 = invert(&g0)?;
    let omega0 = omega_coeffs(&g0, &m.structure.j);
    let mu0 = mu_coeff(&omega0);
    let starred = star3(&d_star, &ginv0, mu0);
    let delta: [S; DIM] = starred.map(|v| -v);

    // phi = +-(1/2) J delta Omega with (J alpha)(X) = alpha(JX).
    let sign = match m.structure.kind {
        StructureKind::Para => S::from_re(0.5),
        StructureKind::Complex => S::from_re(-0.5),
    };
    let j = &m.structure.j;
    let mut phi = [S::zero(); DIM];
    for i in 0..DIM {
        let mut acc = S::zero();
        for k in 0..DIM {
            acc = acc + delta[k] * j[k][i];
        }
        phi[i] = sign * acc;
    }

    // Christoffels from central differences of the metric itself.
    let mut dg = [[[S::zero(); DIM]; DIM]; DIM];
    for i in 0..DIM {
        let gp = metric_at(m, step(i, h));
        let gm = metric_at(m, step(i, -h));
        for a in 0..DIM {
            for b in 0..DIM {
                dg[i][a][b] = (gp[a][b] - gm[a][b]) * inv_2h;
            }
        }
    }
    let half = S::from_re(0.5);
    let mut gamma = [[[S::zero(); DIM]; DIM]; DIM];
    for i in 0..DIM {
        for jj in 0..DIM {
            for k in 0..DIM {
                let mut acc = S::zero();
                for l in 0..DIM {
                    acc = acc + ginv0[k][l] * (dg[i][jj][l] + dg[jj][i][l] - dg[l][i][jj]);
                }
                gamma[i][jj][k] = half * acc;
            }
        }
    }

    // Weyl connection and nabla J.
    let phi_sharp =
        linalg::solve(&g0, &phi).map_err(|det_magnitude| KwError::SingularMetric {
            det_magnitude,
        })?;
    let mut wgamma = gamma;
    for i in 0..DIM {
        for jj in 0..DIM {
            for k in 0..DIM {
                let mut add = S::zero();
                if jj == k {
                    add = add + phi[i];
                }
                if i == k {
                    add = add + phi[jj];
                }
                add = add - g0[i][jj] * phi_sharp[k];
                wgamma[i][jj][k] = wgamma[i][jj][k] + add;
            }
        }
    }
    let mut nabla_j = [[[S::zero(); DIM]; DIM]; DIM];
    for i in 0..DIM {
        for jj in 0..DIM {
            for k in 0..DIM {
                let mut acc = S::zero();
                for mm in 0..DIM {
                    acc = acc + wgamma[i][mm][k] * j[mm][jj] - wgamma[i][jj][mm] * j[k][mm];
                }
                nabla_j[i][jj][k] = acc;
            }
        }
    }
    Ok(OracleOutput {
        phi,
        gamma,
        nabla_j,
    })
}

/// Full oracle run: central differences at h and h/2 with one Richardson
/// extrapolation level.
pub fn fd_oracle<S: Scalar>(m: &Model<S>, h: f64) -> Result<OracleOutput<S>> {
    assert!((1e-6..=1e-2).contains(&h), "step size {h} out of range");
    let coarse = compute_at_step(m, h)?;
    let fine = compute_at_step(m, h / 2.0)?;
    let third = S::from_re(1.0 / 3.0);
    let four = S::from_re(4.0);
    let rich = |c: S, f: S| third * (four * f - c);
    let mut out = OracleOutput {
        phi: [S::zero(); DIM],
        gamma: [[[S::zero(); DIM]; DIM]; DIM],
        nabla_j: [[[S::zero(); DIM]; DIM]; DIM],
    };
    for i in 0..DIM {
        out.phi[i] = rich(coarse.phi[i], fine.phi[i]);
        for j in 0..DIM {
            for k in 0..DIM {
                out.gamma[i][j][k] = rich(coarse.gamma[i][j][k], fine.gamma[i][j][k]);
                out.nabla_j[i][j][k] = rich(coarse.nabla_j[i][j][k], fine.nabla_j[i][j][k]);
            }
        }
    }
    Ok(out)
}
