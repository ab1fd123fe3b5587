//! Small fixed-size linear algebra over the generic scalar ring, plus the
//! real machinery (Jacobi eigenvalues, singular values) used for rank and
//! conditioning estimates.

use crate::scalar::Scalar;

pub const DIM: usize = 4;

pub type Mat<S> = [[S; DIM]; DIM];
pub type Vec4<S> = [S; DIM];

pub fn mat_zero<S: Scalar>() -> Mat<S> {
    [[S::zero(); DIM]; DIM]
}

pub fn mat_identity<S: Scalar>() -> Mat<S> {
    let mut m = mat_zero();
    for i in 0..DIM {
        m[i][i] = S::one();
    }
    m
}

pub fn mat_mul<S: Scalar>(a: &Mat<S>, b: &Mat<S>) -> Mat<S> {
    let mut out = mat_zero();
    for i in 0..DIM {
        for j in 0..DIM {
            let mut acc = S::zero();
            for k in 0..DIM {
                acc = acc + a[i][k] * b[k][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn mat_vec<S: Scalar>(a: &Mat<S>, v: &Vec4<S>) -> Vec4<S> {
    let mut out = [S::zero(); DIM];
    for i in 0..DIM {
        for k in 0..DIM {
            out[i] = out[i] + a[i][k] * v[k];
        }
    }
    out
}

pub fn mat_add<S: Scalar>(a: &Mat<S>, b: &Mat<S>) -> Mat<S> {
    let mut out = mat_zero();
    for i in 0..DIM {
        for j in 0..DIM {
            out[i][j] = a[i][j] + b[i][j];
        }
    }
    out
}

pub fn mat_scale<S: Scalar>(a: &Mat<S>, s: S) -> Mat<S> {
    let mut out = mat_zero();
    for i in 0..DIM {
        for j in 0..DIM {
            out[i][j] = s * a[i][j];
        }
    }
    out
}

pub fn mat_transpose<S: Scalar>(a: &Mat<S>) -> Mat<S> {
    let mut out = mat_zero();
    for i in 0..DIM {
        for j in 0..DIM {
            out[i][j] = a[j][i];
        }
    }
    out
}

pub fn mat_max_magnitude<S: Scalar>(a: &Mat<S>) -> f64 {
    let mut m: f64 = 0.0;
    for row in a {
        for e in row {
            m = m.max(e.magnitude());
        }
    }
    m
}

/// Determinant by elimination with partial (magnitude) pivoting.
pub fn det<S: Scalar>(a: &Mat<S>) -> S {
    let mut m = *a;
    let mut d = S::one();
    for col in 0..DIM {
        let mut pivot = col;
        for r in col + 1..DIM {
            if m[r][col].magnitude() > m[pivot][col].magnitude() {
                pivot = r;
            }
        }
        if m[pivot][col].magnitude() == 0.0 {
            return S::zero();
        }
        if pivot != col {
            m.swap(pivot, col);
            d = -d;
        }
        d = d * m[col][col];
        for r in col + 1..DIM {
            let factor = m[r][col] / m[col][col];
            for c in col..DIM {
                m[r][c] = m[r][c] - factor * m[col][c];
            }
        }
    }
    d
}

/// Scale-invariant singularity gate: |det| < 1e-12 * (max entry magnitude)^4.
pub fn is_singular<S: Scalar>(a: &Mat<S>) -> bool {
    let max = mat_max_magnitude(a);
    if max == 0.0 {
        return true;
    }
    det(a).magnitude() < 1e-12 * max.powi(4)
}

/// Gauss-Jordan inverse with partial pivoting. On failure returns the
/// magnitude of the (vanishing) determinant.
pub fn mat_inv<S: Scalar>(a: &Mat<S>) -> Result<Mat<S>, f64> {
    if is_singular(a) {
        return Err(det(a).magnitude());
    }
    let mut m = *a;
    let mut inv = mat_identity::<S>();
    for col in 0..DIM {
        let mut pivot = col;
        for r in col + 1..DIM {
            if m[r][col].magnitude() > m[pivot][col].magnitude() {
                pivot = r;
            }
        }
        if m[pivot][col].magnitude() == 0.0 {
            return Err(0.0);
        }
        m.swap(pivot, col);
        inv.swap(pivot, col);
        let p = m[col][col];
        for c in 0..DIM {
            m[col][c] = m[col][c] / p;
            inv[col][c] = inv[col][c] / p;
        }
        for r in 0..DIM {
            if r == col {
                continue;
            }
            let factor = m[r][col];
            for c in 0..DIM {
                m[r][c] = m[r][c] - factor * m[col][c];
                inv[r][c] = inv[r][c] - factor * inv[col][c];
            }
        }
    }
    Ok(inv)
}

/// Solve a x = b for a 4-vector b.
pub fn solve<S: Scalar>(a: &Mat<S>, b: &Vec4<S>) -> Result<Vec4<S>, f64> {
    Ok(mat_vec(&mat_inv(a)?, b))
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                off += m[i][j] * m[i][j];
            }
        }
        if off.sqrt() < 1e-14 * (1.0 + frobenius(&m)) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    eig.sort_by(|x, y| y.partial_cmp(x).unwrap());
    eig
}

fn frobenius(m: &[Vec<f64>]) -> f64 {
    m.iter()
        .flat_map(|r| r.iter())
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
}

/// Singular values of an arbitrary rows x cols matrix over the scalar ring,
/// via the real 2x embedding [[Re,-Im],[Im,Re]]. Values come in pairs; the
/// returned list has 2*cols entries sorted descending.
pub fn singular_values_embedded<S: Scalar>(m: &[Vec<S>]) -> Vec<f64> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let (er, ec) = (2 * rows, 2 * cols);
    let mut e = vec![vec![0.0f64; ec]; er];
    for i in 0..rows {
        for j in 0..cols {
            let (re, im) = m[i][j].parts();
            e[i][j] = re;
            e[i][j + cols] = -im;
            e[i + rows][j] = im;
            e[i + rows][j + cols] = re;
        }
    }
    // Gram matrix of the embedding; eigenvalues are squared singular values.
    let mut gram = vec![vec![0.0f64; ec]; ec];
    for i in 0..ec {
        for j in 0..ec {
            gram[i][j] = (0..er).map(|k| e[k][i] * e[k][j]).sum();
        }
    }
    symmetric_eigenvalues(&gram)
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect()
}

/// Numerical rank with a relative singular-value threshold.
pub fn numerical_rank<S: Scalar>(m: &[Vec<S>], rel_tol: f64) -> usize {
    let sv = singular_values_embedded(m);
    let max = sv.first().copied().unwrap_or(0.0);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count() / 2
}

/// Spectral condition number estimate of a 4x4 matrix.
pub fn condition_number<S: Scalar>(a: &Mat<S>) -> f64 {
    let rows: Vec<Vec<S>> = a.iter().map(|r| r.to_vec()).collect();
    let sv = singular_values_embedded(&rows);
    let max = sv.first().copied().unwrap_or(0.0);
    let min = sv.last().copied().unwrap_or(0.0);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C64;

    #[test]
    fn det_and_inverse_agree() {
        let a: Mat<f64> = [
            [2.0, 1.0, 0.0, 0.5],
            [1.0, 3.0, -1.0, 0.0],
            [0.0, -1.0, 2.5, 1.0],
            [0.5, 0.0, 1.0, 1.8],
        ];
        let inv = mat_inv(&a).unwrap();
        let prod = mat_mul(&a, &inv);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((prod[i][j] - expect).abs() < 1e-12);
            }
        }
        // Permutation determinant: the (13)(24) swap has sign +1.
        let mut p = mat_zero::<f64>();
        p[0][2] = 1.0;
        p[2][0] = 1.0;
        p[1][3] = 1.0;
        p[3][1] = 1.0;
        assert!((det(&p) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singular_matrix_rejected() {
        let mut a = mat_identity::<f64>();
        a[3] = a[2];
        assert!(mat_inv(&a).is_err());
        assert!(is_singular(&a));
        assert!(is_singular(&mat_zero::<f64>()));
    }

    #[test]
    fn jacobi_eigenvalues_diagonal_plus_rank_one() {
        let a = vec![
            vec![2.0, 1.0, 0.0],
            vec![1.0, 2.0, 0.0],
            vec![0.0, 0.0, 5.0],
        ];
        let eig = symmetric_eigenvalues(&a);
        let expect = [5.0, 3.0, 1.0];
        for (e, x) in eig.iter().zip(expect) {
            assert!((e - x).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_of_real_and_complex_matrices() {
        let m: Vec<Vec<f64>> = vec![
            vec![1.0, 0.0, 2.0],
            vec![0.0, 1.0, 1.0],
            vec![1.0, 1.0, 3.0],
        ];
        assert_eq!(numerical_rank(&m, 1e-8), 2);

        let i = C64::I;
        let one = C64::one();
        // Columns (1, i) and (i, -1) are complex-proportional: rank 1.
        let mc: Vec<Vec<C64>> = vec![vec![one, i], vec![i, -one]];
        assert_eq!(numerical_rank(&mc, 1e-8), 1);
    }

    #[test]
    fn condition_number_of_scaled_identity() {
        let mut a = mat_identity::<f64>();
        a[0][0] = 10.0;
        assert!((condition_number(&a) - 10.0).abs() < 1e-9);
    }
}
