//! Differential forms on the 4-dimensional model with jet coefficients:
//! wedge, induced inner products, Hodge star, exterior derivative,
//! codifferential.
//!
//! Coefficients are stored over strictly increasing multi-indices with the
//! convention w(d_{i1},..,d_{ip}) = c_I for increasing I. Basis 1-forms are
//! always the coordinate differentials dx^i.

use crate::error::{KwError, Result};
use crate::jet::{Jet1, JetMatrix, DIM};
use crate::scalar::Scalar;
use crate::structures::MetricJet;

static B0: [&[usize]; 1] = [&[]];
static B1: [&[usize]; 4] = [&[0], &[1], &[2], &[3]];
static B2: [&[usize]; 6] = [&[0, 1], &[0, 2], &[0, 3], &[1, 2], &[1, 3], &[2, 3]];
static B3: [&[usize]; 4] = [&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]];
static B4: [&[usize]; 1] = [&[0, 1, 2, 3]];

/// Strictly increasing multi-indices spanning the degree-p forms.
pub fn basis_indices(degree: usize) -> &'static [&'static [usize]] {
    match degree {
        0 => &B0,
        1 => &B1,
        2 => &B2,
        3 => &B3,
        4 => &B4,
        _ => panic!("degree {degree} out of range"),
    }
}

pub fn basis_len(degree: usize) -> usize {
    basis_indices(degree).len()
}

fn position(degree: usize, sorted: &[usize]) -> usize {
    basis_indices(degree)
        .iter()
        .position(|b| *b == sorted)
        .expect("multi-index not in basis")
}

/// Sort a multi-index, returning (sorted, permutation sign); None on repeats.
fn normalize(indices: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut v = indices.to_vec();
    let mut sign = 1i32;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((v, sign))
}

/// Complement of an increasing multi-index in {0,1,2,3}.
fn complement(indices: &[usize]) -> Vec<usize> {
    (0..DIM).filter(|i| !indices.contains(i)).collect()
}

/// Sign of the permutation (indices..., complement...) of (0,1,2,3).
fn split_sign(indices: &[usize], comp: &[usize]) -> i32 {
    let mut seq: Vec<usize> = indices.to_vec();
    seq.extend_from_slice(comp);
    normalize(&seq).expect("split indices overlap").1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetOrder {
    Zero,
    One,
}

impl JetOrder {
    fn min(self, other: JetOrder) -> JetOrder {
        if self == JetOrder::Zero || other == JetOrder::Zero {
            JetOrder::Zero
        } else {
            JetOrder::One
        }
    }
}

/// A degree-p form with jet (order 1) or plain scalar (order 0) coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PForm<S: Scalar> {
    pub degree: usize,
    pub order: JetOrder,
    pub coeffs: Vec<Jet1<S>>,
}

impl<S: Scalar> PForm<S> {
    pub fn zero(degree: usize, order: JetOrder) -> Self {
        Self {
            degree,
            order,
            coeffs: vec![Jet1::zero(); basis_len(degree)],
        }
    }

    /// The basis form dx^{i1} ^ .. ^ dx^{ip} for an increasing multi-index.
    pub fn basis_form(degree: usize, indices: &[usize], order: JetOrder) -> Self {
        let mut f = Self::zero(degree, order);
        f.coeffs[position(degree, indices)] = Jet1::unit();
        f
    }

    pub fn from_coeffs(degree: usize, order: JetOrder, coeffs: Vec<Jet1<S>>) -> Self {
        assert_eq!(coeffs.len(), basis_len(degree));
        let mut f = Self {
            degree,
            order,
            coeffs,
        };
        if order == JetOrder::Zero {
            f.drop_partials();
        }
        f
    }

    /// Coefficient for an arbitrary (possibly unsorted) multi-index.
    pub fn coeff(&self, indices: &[usize]) -> Jet1<S> {
        assert_eq!(indices.len(), self.degree);
        match normalize(indices) {
            None => Jet1::zero(),
            Some((sorted, sign)) => {
                let c = self.coeffs[position(self.degree, &sorted)];
                if sign < 0 {
                    -c
                } else {
                    c
                }
            }
        }
    }

    pub fn set_coeff(&mut self, indices: &[usize], jet: Jet1<S>) {
        let (sorted, sign) = normalize(indices).expect("repeated index");
        let signed = if sign < 0 { -jet } else { jet };
        self.coeffs[position(self.degree, &sorted)] = signed;
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.degree, rhs.degree);
        Self {
            degree: self.degree,
            order: self.order.min(rhs.order),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| *a + *b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            degree: self.degree,
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -*c).collect(),
        }
    }

    pub fn scale(&self, s: S) -> Self {
        Self {
            degree: self.degree,
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect(),
        }
    }

    pub fn max_magnitude(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| match self.order {
                JetOrder::One => c.max_magnitude(),
                JetOrder::Zero => c.value.magnitude(),
            })
            .fold(0.0, f64::max)
    }

    fn drop_partials(&mut self) {
        for c in &mut self.coeffs {
            c.partials = [S::zero(); DIM];
        }
    }
}

/// Graded-antisymmetric product; the result order is the minimum of the
/// input orders (derivative data of the finer input is discarded).
pub fn wedge<S: Scalar>(a: &PForm<S>, b: &PForm<S>) -> Result<PForm<S>> {
    let degree = a.degree + b.degree;
    if degree > DIM {
        return Err(KwError::DegreeOverflow {
            left: a.degree,
            right: b.degree,
        });
    }
    let mut out = PForm::zero(degree, a.order.min(b.order));
    for (ia, idx_a) in basis_indices(a.degree).iter().enumerate() {
        for (ib, idx_b) in basis_indices(b.degree).iter().enumerate() {
            let mut merged: Vec<usize> = idx_a.to_vec();
            merged.extend_from_slice(idx_b);
            if let Some((sorted, sign)) = normalize(&merged) {
                let mut term = a.coeffs[ia] * b.coeffs[ib];
                if sign < 0 {
                    term = -term;
                }
                let pos = position(degree, &sorted);
                out.coeffs[pos] = out.coeffs[pos] + term;
            }
        }
    }
    if out.order == JetOrder::Zero {
        out.drop_partials();
    }
    Ok(out)
}

/// Determinant of the minor of a jet matrix picked out by `rows`/`cols`,
/// by Laplace expansion (p <= 4, so this stays tiny).
fn minor_det<S: Scalar>(g: &JetMatrix<S>, rows: &[usize], cols: &[usize]) -> Jet1<S> {
    match rows.len() {
        0 => Jet1::unit(),
        1 => g.entries[rows[0]][cols[0]],
        _ => {
            let mut acc = Jet1::zero();
            for (k, &c) in cols.iter().enumerate() {
                let sub_cols: Vec<usize> =
                    cols.iter().copied().filter(|&x| x != c).collect();
                let mut term = g.entries[rows[0]][c] * minor_det(g, &rows[1..], &sub_cols);
                if k % 2 == 1 {
                    term = -term;
                }
                acc = acc + term;
            }
            acc
        }
    }
}

/// Gram-determinant inner product of equal-degree forms, in jet arithmetic.
pub fn form_inner<S: Scalar>(a: &PForm<S>, b: &PForm<S>, g: &MetricJet<S>) -> Result<Jet1<S>> {
    if a.degree != b.degree {
        return Err(KwError::DegreeMismatch {
            left: a.degree,
            right: b.degree,
        });
    }
    let ginv = g.inverse_jets()?;
    let mut acc = Jet1::zero();
    for (ia, idx_a) in basis_indices(a.degree).iter().enumerate() {
        for (ib, idx_b) in basis_indices(b.degree).iter().enumerate() {
            acc = acc + a.coeffs[ia] * b.coeffs[ib] * minor_det(&ginv, idx_a, idx_b);
        }
    }
    if a.order.min(b.order) == JetOrder::Zero {
        acc.partials = [S::zero(); DIM];
    }
    Ok(acc)
}

/// The 4-form mu as a single jet coefficient relative to dx^1^dx^2^dx^3^dx^4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeElement<S: Scalar> {
    pub coeff: Jet1<S>,
    /// +1 for the orientation fixed by mu = (1/2) Omega ^ Omega, -1 when
    /// flipped for exploration.
    pub orientation: i8,
}

impl<S: Scalar> VolumeElement<S> {
    /// mu = (1/2) Omega ^ Omega for a Kahler 2-form Omega.
    pub fn from_kahler(omega: &PForm<S>) -> Result<Self> {
        assert_eq!(omega.degree, 2);
        let sq = wedge(omega, omega)?;
        let coeff = sq.coeffs[0].scale(S::from_re(0.5));
        let scale = omega.max_magnitude();
        if coeff.value.magnitude() < 1e-12 * (scale * scale).max(f64::MIN_POSITIVE) {
            return Err(KwError::SingularMetric {
                det_magnitude: coeff.value.magnitude(),
            });
        }
        Ok(Self {
            coeff,
            orientation: 1,
        })
    }

    pub fn flipped(self) -> Self {
        Self {
            coeff: -self.coeff,
            orientation: -self.orientation,
        }
    }
}

/// Hodge star via musical index raising and contraction with mu.
///
/// For an increasing p-index I with complement I^c,
/// (*a)_{I^c} = sign(I, I^c) * mu * a^I where a^I raises all indices of a
/// with g^{..}. An order-0 input produces an order-0 output computed from
/// g0 alone.
pub fn hodge_star<S: Scalar>(
    a: &PForm<S>,
    g: &MetricJet<S>,
    mu: &VolumeElement<S>,
) -> Result<PForm<S>> {
    let ginv = g.inverse_jets()?;
    let p = a.degree;
    let mut out = PForm::zero(DIM - p, a.order);
    for (ia, idx) in basis_indices(p).iter().enumerate() {
        let _ = ia;
        // raised coefficient a^I
        let mut raised = Jet1::zero();
        for (ik, idx_k) in basis_indices(p).iter().enumerate() {
            raised = raised + minor_det(&ginv, idx, idx_k) * a.coeffs[ik];
        }
        let comp = complement(idx);
        let sign = split_sign(idx, &comp);
        let mut term = mu.coeff * raised;
        if sign < 0 {
            term = -term;
        }
        let pos = position(DIM - p, &comp);
        out.coeffs[pos] = out.coeffs[pos] + term;
    }
    if out.order == JetOrder::Zero {
        out.drop_partials();
    }
    Ok(out)
}

/// Exterior derivative; consumes the stored first derivatives, so the
/// result carries jet order 0.
pub fn exterior_derivative<S: Scalar>(a: &PForm<S>) -> Result<PForm<S>> {
    if a.order == JetOrder::Zero {
        return Err(KwError::OrderExhausted);
    }
    if a.degree == DIM {
        return Ok(PForm::zero(DIM, JetOrder::Zero));
    }
    let degree = a.degree + 1;
    let mut out = PForm::zero(degree, JetOrder::Zero);
    for (im, idx_m) in basis_indices(degree).iter().enumerate() {
        let mut acc = S::zero();
        for (k, &d) in idx_m.iter().enumerate() {
            let rest: Vec<usize> = idx_m
                .iter()
                .copied()
                .filter(|&x| x != d)
                .collect();
            let partial = a.coeff(&rest).partials[d];
            if k % 2 == 0 {
                acc = acc + partial;
            } else {
                acc = acc - partial;
            }
        }
        out.coeffs[im].value = acc;
    }
    Ok(out)
}

/// Codifferential of a 2-form: delta a = -* d * a. The inner star runs at
/// jet order 1, d drops to order 0, the outer star only sees g0.
pub fn codifferential_2form<S: Scalar>(
    a: &PForm<S>,
    g: &MetricJet<S>,
    mu: &VolumeElement<S>,
) -> Result<PForm<S>> {
    assert_eq!(a.degree, 2);
    if a.order == JetOrder::Zero {
        return Err(KwError::OrderExhausted);
    }
    let inner = hodge_star(a, g, mu)?;
    let d = exterior_derivative(&inner)?;
    let outer = hodge_star(&d, g, mu)?;
    Ok(outer.neg())
}
