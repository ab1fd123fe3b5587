//! First-order Taylor jets in 4 variables and jet-aware 4x4 linear algebra.
//!
//! A `Jet1` is a value at the base point together with its 4 first partial
//! derivatives. Everything downstream (metrics, forms, connections) is
//! decided by first-order data, so this is the only arithmetic carrier.

use crate::error::{KwError, Result};
use crate::linalg;
use crate::scalar::Scalar;
use std::ops::{Add, Mul, Neg, Sub};

pub const DIM: usize = 4;

/// Threshold below which a jet value is treated as non-invertible.
const JET_SINGULAR_EPS: f64 = 1e-100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet1<S: Scalar> {
    pub value: S,
    pub partials: [S; DIM],
}

impl<S: Scalar> Jet1<S> {
    pub fn new(value: S, partials: [S; DIM]) -> Self {
        Self { value, partials }
    }

    /// A jet with no dependence on the coordinates.
    pub fn constant(value: S) -> Self {
        Self::new(value, [S::zero(); DIM])
    }

    pub fn zero() -> Self {
        Self::constant(S::zero())
    }

    pub fn unit() -> Self {
        Self::constant(S::one())
    }

    /// The jet of the coordinate function x^i at the origin.
    pub fn coordinate(i: usize) -> Self {
        let mut partials = [S::zero(); DIM];
        partials[i] = S::one();
        Self::new(S::zero(), partials)
    }

    pub fn scale(self, s: S) -> Self {
        Self::new(
            s * self.value,
            [
                s * self.partials[0],
                s * self.partials[1],
                s * self.partials[2],
                s * self.partials[3],
            ],
        )
    }

    /// Multiplicative inverse, by the quotient rule.
    pub fn inv(self) -> Result<Self> {
        let mag = self.value.magnitude();
        if mag < JET_SINGULAR_EPS {
            return Err(KwError::SingularValue { magnitude: mag });
        }
        let v = S::one() / self.value;
        let neg_v2 = -(v * v);
        Ok(Self::new(v, self.partials.map(|p| p * neg_v2)))
    }

    /// Largest magnitude across value and partials.
    pub fn max_magnitude(&self) -> f64 {
        let mut m = self.value.magnitude();
        for p in &self.partials {
            m = m.max(p.magnitude());
        }
        m
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(S) -> T) -> Jet1<T> {
        Jet1::new(f(self.value), self.partials.map(&f))
    }
}

impl<S: Scalar> Add for Jet1<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut partials = [S::zero(); DIM];
        for i in 0..DIM {
            partials[i] = self.partials[i] + rhs.partials[i];
        }
        Self::new(self.value + rhs.value, partials)
    }
}

impl<S: Scalar> Sub for Jet1<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut partials = [S::zero(); DIM];
        for i in 0..DIM {
            partials[i] = self.partials[i] - rhs.partials[i];
        }
        Self::new(self.value - rhs.value, partials)
    }
}

impl<S: Scalar> Neg for Jet1<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, self.partials.map(|p| -p))
    }
}

/// Leibniz product: (ab)' = a'b + ab'.
impl<S: Scalar> Mul for Jet1<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut partials = [S::zero(); DIM];
        for i in 0..DIM {
            partials[i] = self.partials[i] * rhs.value + self.value * rhs.partials[i];
        }
        Self::new(self.value * rhs.value, partials)
    }
}

/// Jet of e^{s f} from the 1-jet of f.
pub fn jet_exp_scale<S: Scalar>(f0: S, df: [S; DIM], s: S) -> Jet1<S> {
    let v = (s * f0).exp();
    Jet1::new(v, df.map(|d| s * d * v))
}

/// 4x4 matrix of jets; carrier for g_{ij}(x) and g^{ij}(x) to first order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JetMatrix<S: Scalar> {
    pub entries: [[Jet1<S>; DIM]; DIM],
}

impl<S: Scalar> JetMatrix<S> {
    pub fn identity() -> Self {
        let mut entries = [[Jet1::zero(); DIM]; DIM];
        for i in 0..DIM {
            entries[i][i] = Jet1::unit();
        }
        Self { entries }
    }

    pub fn value(&self) -> [[S; DIM]; DIM] {
        let mut v = [[S::zero(); DIM]; DIM];
        for i in 0..DIM {
            for j in 0..DIM {
                v[i][j] = self.entries[i][j].value;
            }
        }
        v
    }

    /// Matrix of the d-th partial derivatives of the entries.
    pub fn partial(&self, d: usize) -> [[S; DIM]; DIM] {
        let mut v = [[S::zero(); DIM]; DIM];
        for i in 0..DIM {
            for j in 0..DIM {
                v[i][j] = self.entries[i][j].partials[d];
            }
        }
        v
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut entries = [[Jet1::zero(); DIM]; DIM];
        for i in 0..DIM {
            for j in 0..DIM {
                let mut acc = Jet1::zero();
                for k in 0..DIM {
                    acc = acc + self.entries[i][k] * rhs.entries[k][j];
                }
                entries[i][j] = acc;
            }
        }
        Self { entries }
    }
}

/// Inverse of a jet matrix: partial-pivot elimination at the value level,
/// then d(A^-1) = -A^-1 (dA) A^-1 for the derivative parts.
pub fn jet_matrix_inverse<S: Scalar>(a: &JetMatrix<S>) -> Result<JetMatrix<S>> {
    let v = a.value();
    let vinv = linalg::mat_inv(&v).map_err(|det_magnitude| KwError::SingularMetric {
        det_magnitude,
    })?;
    let mut entries = [[Jet1::zero(); DIM]; DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            entries[i][j].value = vinv[i][j];
        }
    }
    for d in 0..DIM {
        let da = a.partial(d);
        let p = linalg::mat_mul(&linalg::mat_mul(&vinv, &da), &vinv);
        for i in 0..DIM {
            for j in 0..DIM {
                entries[i][j].partials[d] = -p[i][j];
            }
        }
    }
    Ok(JetMatrix { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C64;

    fn jet(v: f64, p: [f64; 4]) -> Jet1<f64> {
        Jet1::new(v, p)
    }

    #[test]
    fn unit_is_multiplicative_identity() {
        let j = jet(2.5, [0.1, -0.2, 0.3, 0.4]);
        assert_eq!(Jet1::unit() * j, j);
    }

    #[test]
    fn coordinate_square_truncates() {
        let x1 = Jet1::<f64>::coordinate(0);
        let sq = x1 * x1;
        assert_eq!(sq, Jet1::zero());
    }

    #[test]
    fn product_matches_finite_differences() {
        // a, b are affine functions; the jet product must match central
        // differences of their pointwise product.
        let a = jet(0.8, [0.3, -0.5, 0.2, 0.9]);
        let b = jet(-1.4, [0.7, 0.1, -0.6, 0.25]);
        let eval = |j: &Jet1<f64>, x: [f64; 4]| {
            j.value + (0..4).map(|i| j.partials[i] * x[i]).sum::<f64>()
        };
        let prod = a * b;
        let h = 1e-4;
        for i in 0..4 {
            let mut xp = [0.0; 4];
            xp[i] = h;
            let mut xm = [0.0; 4];
            xm[i] = -h;
            let fd = (eval(&a, xp) * eval(&b, xp) - eval(&a, xm) * eval(&b, xm)) / (2.0 * h);
            assert!((fd - prod.partials[i]).abs() < 1e-8, "dir {i}");
        }
        assert!((prod.value - a.value * b.value).abs() < 1e-15);
    }

    #[test]
    fn inverse_quotient_rule() {
        let a = jet(2.0, [1.0, 0.0, 0.0, 0.0]);
        let inv = a.inv().unwrap();
        assert_eq!(inv.value, 0.5);
        assert_eq!(inv.partials, [-0.25, 0.0, 0.0, 0.0]);
        assert_eq!(Jet1::<f64>::unit().inv().unwrap(), Jet1::unit());
    }

    #[test]
    fn inverse_round_trip() {
        let a = jet(-0.73, [0.4, 1.2, -0.8, 0.05]);
        let prod = a * a.inv().unwrap();
        assert!((prod - Jet1::unit()).max_magnitude() < 1e-12);
    }

    #[test]
    fn inverse_of_zero_value_errors() {
        let a = jet(0.0, [1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(a.inv(), Err(KwError::SingularValue { .. })));
    }

    #[test]
    fn exp_scale_flat_base_point() {
        let j = jet_exp_scale(0.0, [0.3, -0.1, 0.7, 0.2], 2.0);
        assert_eq!(j.value, 1.0);
        assert_eq!(j.partials, [0.6, -0.2, 1.4, 0.4]);
        assert_eq!(jet_exp_scale(0.0, [0.0; 4], 2.0), Jet1::unit());
    }

    #[test]
    fn exp_scale_matches_finite_differences() {
        let f0 = 0.3;
        let df = [0.21, -0.4, 0.9, -0.13];
        let j = jet_exp_scale(f0, df, -1.0);
        let h = 1e-4;
        for i in 0..4 {
            let f = |t: f64| (-(f0 + df[i] * t)).exp();
            let fd = (f(h) - f(-h)) / (2.0 * h);
            assert!((fd - j.partials[i]).abs() < 1e-8);
        }
    }

    #[test]
    fn jet_matrix_inverse_identity_and_antidiagonal() {
        let id = JetMatrix::<f64>::identity();
        assert_eq!(jet_matrix_inverse(&id).unwrap(), id);

        // Anti-diagonal pairing g13 = g31 = g24 = g42 = 1 is involutive.
        let mut m = JetMatrix::<f64> {
            entries: [[Jet1::zero(); 4]; 4],
        };
        for (i, j) in [(0, 2), (2, 0), (1, 3), (3, 1)] {
            m.entries[i][j] = Jet1::unit();
        }
        assert_eq!(jet_matrix_inverse(&m).unwrap(), m);
    }

    #[test]
    fn jet_matrix_inverse_round_trip() {
        let mut m = JetMatrix::<f64>::identity();
        let vals = [
            [2.0, 0.3, -0.1, 0.4],
            [0.3, 1.5, 0.2, -0.2],
            [-0.1, 0.2, 3.1, 0.6],
            [0.4, -0.2, 0.6, 2.2],
        ];
        for i in 0..4 {
            for j in 0..4 {
                m.entries[i][j] = Jet1::new(
                    vals[i][j],
                    [0.1 * (i as f64), -0.2, 0.05 * (j as f64), 0.3],
                );
            }
        }
        let inv = jet_matrix_inverse(&m).unwrap();
        let prod = m.mul(&inv);
        let mut dev: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { Jet1::unit() } else { Jet1::zero() };
                dev = dev.max((prod.entries[i][j] - expect).max_magnitude());
            }
        }
        assert!(dev < 1e-10, "deviation {dev}");
    }

    #[test]
    fn complex_run_embeds_real_run_bit_for_bit() {
        let a = jet(0.8, [0.3, -0.5, 0.2, 0.9]);
        let b = jet(-1.4, [0.7, 0.1, -0.6, 0.25]);
        let ac = a.map_scalars(C64::from_re);
        let bc = b.map_scalars(C64::from_re);
        let real = a * b + a.inv().unwrap() - b.scale(2.0);
        let cplx = ac * bc + ac.inv().unwrap() - bc.scale(C64::from_re(2.0));
        assert_eq!(cplx.value.parts(), (real.value, 0.0));
        for i in 0..4 {
            assert_eq!(cplx.partials[i].parts(), (real.partials[i], 0.0));
        }
    }
}
