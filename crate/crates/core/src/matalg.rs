//! Small dense matrix kernels: singular values, the singular value function,
//! exterior powers, eigen reports and top singular vectors.
//!
//! SVD and Schur eigenvalues come from `nalgebra`; everything built on top of
//! them lives here.

use nalgebra::{Complex, DMatrix, DVector};
use serde::Serialize;

use crate::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Relative threshold under which the top two singular values count as equal.
pub const DEGENERATE_TOL: f64 = 1e-9;
/// Eigenvalues with `|im| > COMPLEX_TOL * |lambda|` are treated as complex.
pub const COMPLEX_TOL: f64 = 1e-10;
/// Default relative eigenvalue gap tolerance.
pub const DEFAULT_GAP_TOL: f64 = 1e-8;

fn check_finite(a: &Matrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::InvalidMatrix(format!(
            "expected a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidMatrix("non-finite entry".into()));
    }
    Ok(())
}

/// Singular values `alpha_1 >= ... >= alpha_d >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularValueProfile {
    pub values: Vec<f64>,
}

impl SingularValueProfile {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn norm(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn condition_number(&self) -> f64 {
        match (self.values.first(), self.values.last()) {
            (Some(&top), Some(&bottom)) if bottom > 0.0 => top / bottom,
            _ => f64::INFINITY,
        }
    }

    /// `log phi^s` of the underlying matrix. Requires all values positive.
    pub fn log_phi(&self, s: f64) -> f64 {
        let d = self.values.len();
        if s <= 0.0 {
            return 0.0;
        }
        if s > d as f64 {
            let log_det: f64 = self.values.iter().map(|v| v.ln()).sum();
            return (s / d as f64) * log_det;
        }
        let whole = s.floor() as usize;
        let frac = s - whole as f64;
        let mut acc = 0.0;
        for v in &self.values[..whole] {
            acc += v.ln();
        }
        if frac > 0.0 {
            acc += frac * self.values[whole].ln();
        }
        acc
    }

    pub fn phi(&self, s: f64) -> f64 {
        self.log_phi(s).exp()
    }
}

/// Singular values in non-increasing order.
pub fn singular_values(a: &Matrix) -> Result<SingularValueProfile> {
    check_finite(a)?;
    Ok(singular_values_unchecked(a))
}

pub(crate) fn singular_values_unchecked(a: &Matrix) -> SingularValueProfile {
    let mut values: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    values.sort_by(|x, y| y.total_cmp(x));
    SingularValueProfile { values }
}

/// Operator 2-norm.
pub fn norm(a: &Matrix) -> f64 {
    singular_values_unchecked(a).norm()
}

/// Smallest singular value (the co-norm `m(A)`).
pub fn conorm(a: &Matrix) -> f64 {
    singular_values_unchecked(a).values.last().copied().unwrap_or(0.0)
}

fn check_s(s: f64) -> Result<()> {
    if s.is_finite() && s >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("s = {s} must be finite and >= 0")))
    }
}

/// `log phi^s(A)` for invertible `A`.
pub fn log_phi_s(a: &Matrix, s: f64) -> Result<f64> {
    check_s(s)?;
    let sv = singular_values(a)?;
    if sv.values.iter().any(|&v| v <= 0.0) {
        return Err(Error::Singular { cond: f64::INFINITY });
    }
    Ok(sv.log_phi(s))
}

/// The singular value function
/// `phi^s(A) = alpha_1 ... alpha_floor(s) * alpha_ceil(s)^(s - floor(s))` for
/// `s <= d`, and `|det A|^(s/d)` beyond.
pub fn phi_s(a: &Matrix, s: f64) -> Result<f64> {
    log_phi_s(a, s).map(f64::exp)
}

/// Index tuples `i_1 < ... < i_t` of `0..d`, lexicographic.
pub fn combinations(d: usize, t: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, d: usize, t: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            if d - i < t - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, d, t, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, d, t, &mut Vec::with_capacity(t), &mut out);
    out
}

/// Matrix of `A^{wedge t}` in the lexicographic basis `e_I`, entries are the
/// `t x t` minors `det A[I, J]`.
pub fn exterior_power(a: &Matrix, t: usize) -> Result<Matrix> {
    check_finite(a)?;
    let d = a.nrows();
    if t == 0 || t > d {
        return Err(Error::InvalidArgument(format!(
            "exterior power index t = {t} outside 1..={d}"
        )));
    }
    if t == 1 {
        return Ok(a.clone());
    }
    let idx = combinations(d, t);
    let m = idx.len();
    let mut out = Matrix::zeros(m, m);
    let mut minor = Matrix::zeros(t, t);
    for (r, rows) in idx.iter().enumerate() {
        for (c, cols) in idx.iter().enumerate() {
            for (i, &ri) in rows.iter().enumerate() {
                for (j, &cj) in cols.iter().enumerate() {
                    minor[(i, j)] = a[(ri, cj)];
                }
            }
            out[(r, c)] = minor.determinant();
        }
    }
    Ok(out)
}

/// The adjoint with respect to the standard inner product.
pub fn adjoint(a: &Matrix) -> Matrix {
    a.transpose()
}

/// Spectral data of a square matrix, as needed by the pinching test.
#[derive(Debug, Clone, Serialize)]
pub struct EigenReport {
    /// `(re, im)` pairs sorted by non-increasing modulus.
    pub eigenvalues: Vec<(f64, f64)>,
    /// Unit right eigenvectors, present only for simple real spectra.
    pub right_eigenvectors: Option<Vec<Vec<f64>>>,
    /// Unit left eigenvectors, paired so that `<v_i, w_i> > 0`.
    pub left_eigenvectors: Option<Vec<Vec<f64>>>,
    pub simple_real_distinct_moduli: bool,
    /// Smallest relative gap `(|l_i| - |l_{i+1}|) / |l_i|`; 1 for `d = 1`.
    pub modulus_gap: f64,
}

impl EigenReport {
    pub fn moduli(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|&(re, im)| re.hypot(im)).collect()
    }

    /// Right eigenvectors as matrix columns.
    pub fn right_matrix(&self) -> Option<Matrix> {
        self.right_eigenvectors.as_ref().map(|vs| columns_to_matrix(vs))
    }

    /// Left eigenvectors as matrix columns.
    pub fn left_matrix(&self) -> Option<Matrix> {
        self.left_eigenvectors.as_ref().map(|vs| columns_to_matrix(vs))
    }
}

fn columns_to_matrix(cols: &[Vec<f64>]) -> Matrix {
    let d = cols.first().map_or(0, Vec::len);
    Matrix::from_fn(d, cols.len(), |i, j| cols[j][i])
}

/// Eigenvalues sorted by non-increasing modulus (ties by real part, then
/// imaginary part, descending).
pub fn eigenvalues(p: &Matrix) -> Result<Vec<Complex<f64>>> {
    check_finite(p)?;
    let mut ev: Vec<Complex<f64>> = p.clone().complex_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| {
        b.norm()
            .total_cmp(&a.norm())
            .then(b.re.total_cmp(&a.re))
            .then(b.im.total_cmp(&a.im))
    });
    Ok(ev)
}

/// Spectral radius.
pub fn spectral_radius(p: &Matrix) -> Result<f64> {
    Ok(eigenvalues(p)?.first().map_or(0.0, |z| z.norm()))
}

/// Unit vector spanning the (numerical) kernel of `m`, sign fixed so that the
/// largest-magnitude component is positive.
fn kernel_vector(m: &Matrix) -> Vector {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let (k, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty spectrum");
    let v: Vector = v_t.row(k).transpose();
    orient(v)
}

fn orient(v: Vector) -> Vector {
    let pivot = v.iter().copied().max_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap_or(1.0);
    let v = v.normalize();
    if pivot < 0.0 {
        -v
    } else {
        v
    }
}

/// Eigen-decomposition report. `simple_real_distinct_moduli` is true iff the
/// eigenvalues are real, pairwise distinct and consecutive moduli differ by
/// more than `gap_tol` relatively.
pub fn eigen_report(p: &Matrix, gap_tol: f64) -> Result<EigenReport> {
    let ev = eigenvalues(p)?;
    let d = ev.len();
    let all_real = ev.iter().all(|z| z.im.abs() <= COMPLEX_TOL * z.norm());
    let moduli: Vec<f64> = ev.iter().map(|z| z.norm()).collect();
    let modulus_gap = if d == 1 {
        1.0
    } else {
        moduli
            .windows(2)
            .map(|w| if w[0] > 0.0 { (w[0] - w[1]) / w[0] } else { 0.0 })
            .fold(f64::INFINITY, f64::min)
    };
    let simple = all_real && modulus_gap > gap_tol;
    let (right, left) = if simple {
        let id = Matrix::identity(d, d);
        let pt = p.transpose();
        let mut right = Vec::with_capacity(d);
        let mut left = Vec::with_capacity(d);
        for z in &ev {
            let v = kernel_vector(&(p - &id * z.re));
            let mut w = kernel_vector(&(&pt - &id * z.re));
            if v.dot(&w) < 0.0 {
                w = -w;
            }
            right.push(v.iter().copied().collect());
            left.push(w.iter().copied().collect());
        }
        (Some(right), Some(left))
    } else {
        (None, None)
    };
    Ok(EigenReport {
        eigenvalues: ev.iter().map(|z| (z.re, if all_real { 0.0 } else { z.im })).collect(),
        right_eigenvectors: right,
        left_eigenvectors: left,
        simple_real_distinct_moduli: simple,
        modulus_gap,
    })
}

/// Top singular pair with `||A|| u = A v`.
#[derive(Debug, Clone)]
pub struct TopSingularPair {
    pub u: Vector,
    pub v: Vector,
    pub norm: f64,
    /// `alpha_1 = alpha_2` within [`DEGENERATE_TOL`]; the pair is then one
    /// arbitrary valid choice.
    pub degenerate: bool,
}

pub fn top_singular_vectors(a: &Matrix) -> Result<TopSingularPair> {
    check_finite(a)?;
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let (k, &top) = sv
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .ok_or_else(|| Error::InvalidMatrix("empty matrix".into()))?;
    if top <= 0.0 {
        return Err(Error::Singular { cond: f64::INFINITY });
    }
    let second = sv
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != k)
        .map(|(_, &x)| x)
        .fold(0.0, f64::max);
    let v = orient(svd.v_t.expect("requested V^T").row(k).transpose());
    let u = (a * &v) / top;
    Ok(TopSingularPair {
        u,
        v,
        norm: top,
        degenerate: (top - second) / top <= DEGENERATE_TOL,
    })
}

/// Builds a matrix from row slices.
pub fn from_rows(rows: &[Vec<f64>]) -> Result<Matrix> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidMatrix("expected a nonempty square array of rows".into()));
    }
    Ok(Matrix::from_fn(n, n, |i, j| rows[i][j]))
}

pub fn rotation(angle: f64) -> Matrix {
    let (s, c) = angle.sin_cos();
    Matrix::from_row_slice(2, 2, &[c, -s, s, c])
}

pub fn diag(values: &[f64]) -> Matrix {
    Matrix::from_diagonal(&Vector::from_column_slice(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
        Matrix::from_fn(d, d, |_, _| rng.gen_range(-2.0..2.0))
    }

    #[test]
    fn singular_value_examples() {
        assert_eq!(singular_values(&diag(&[3.0, 2.0])).unwrap().values, vec![3.0, 2.0]);
        let id = singular_values(&Matrix::identity(4, 4)).unwrap();
        assert!(id.values.iter().all(|&v| (v - 1.0).abs() < 1e-15));
        let p = Matrix::from_row_slice(2, 2, &[0.0, 2.0, 1.0, 0.0]);
        let sv = singular_values(&p).unwrap().values;
        assert_relative_eq!(sv[0], 2.0, epsilon = 1e-14);
        assert_relative_eq!(sv[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn singular_values_reject_non_finite() {
        let a = Matrix::from_row_slice(2, 2, &[1.0, f64::NAN, 0.0, 1.0]);
        assert!(singular_values(&a).is_err());
    }

    #[test]
    fn phi_examples() {
        let a = diag(&[3.0, 2.0]);
        assert_relative_eq!(phi_s(&a, 1.5).unwrap(), 4.242640687119285, max_relative = 1e-14);
        assert_relative_eq!(phi_s(&a, 4.0).unwrap(), 36.0, max_relative = 1e-14);
        assert_eq!(phi_s(&a, 0.0).unwrap(), 1.0);
        assert!(phi_s(&diag(&[1.0, 0.0]), 1.0).is_err());
        assert!(phi_s(&a, -0.5).is_err());
    }

    #[test]
    fn phi_is_continuous_across_d() {
        let a = Matrix::from_row_slice(2, 2, &[2.0, 1.0, 0.5, 3.0]);
        let below = phi_s(&a, 2.0 - 1e-12).unwrap();
        let above = phi_s(&a, 2.0 + 1e-12).unwrap();
        assert_relative_eq!(below, above, max_relative = 1e-10);
    }

    #[test]
    fn exterior_power_examples() {
        let e = exterior_power(&diag(&[3.0, 2.0, 1.0]), 2).unwrap();
        assert_eq!(e, diag(&[6.0, 3.0, 2.0]));
        let a = Matrix::from_row_slice(3, 3, &[1.0, 2.0, 0.0, 0.5, 1.0, 3.0, 2.0, 0.0, 1.0]);
        let top = exterior_power(&a, 3).unwrap();
        assert_eq!(top.shape(), (1, 1));
        assert_relative_eq!(top[(0, 0)], a.determinant(), max_relative = 1e-14);
        assert_eq!(exterior_power(&a, 1).unwrap(), a);
        assert!(exterior_power(&a, 0).is_err());
        assert!(exterior_power(&a, 4).is_err());
    }

    #[test]
    fn exterior_power_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 2..=4 {
            for t in 1..=d {
                let a = random_matrix(&mut rng, d);
                let b = random_matrix(&mut rng, d);
                let lhs = exterior_power(&(&a * &b), t).unwrap();
                let rhs = exterior_power(&a, t).unwrap() * exterior_power(&b, t).unwrap();
                assert!((lhs - &rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
            }
        }
    }

    #[test]
    fn adjoint_commutes_with_exterior_power() {
        assert_eq!(
            adjoint(&Matrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0])),
            Matrix::from_row_slice(2, 2, &[1.0, 3.0, 2.0, 4.0])
        );
        let sym = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 5.0]);
        assert_eq!(adjoint(&sym), sym);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 4);
            for t in 1..=4 {
                let lhs = exterior_power(&adjoint(&a), t).unwrap();
                let rhs = adjoint(&exterior_power(&a, t).unwrap());
                assert!((lhs - rhs).amax() < 1e-12);
            }
        }
    }

    #[test]
    fn eigen_report_examples() {
        let r = eigen_report(&diag(&[2.0, 1.0]), 1e-8).unwrap();
        assert!(r.simple_real_distinct_moduli);
        assert_relative_eq!(r.modulus_gap, 0.5, epsilon = 1e-14);
        assert!(!eigen_report(&rotation(1.0), 1e-8).unwrap().simple_real_distinct_moduli);
        let eq = eigen_report(&diag(&[2.0, -2.0]), 1e-8).unwrap();
        assert!(!eq.simple_real_distinct_moduli);
        assert!(eq.right_eigenvectors.is_none());
    }

    #[test]
    fn eigenvectors_are_biorthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        while checked < 30 {
            let a = random_matrix(&mut rng, 3);
            let r = eigen_report(&a, 1e-3).unwrap();
            if !r.simple_real_distinct_moduli {
                continue;
            }
            checked += 1;
            let v = r.right_matrix().unwrap();
            let w = r.left_matrix().unwrap();
            for (i, &(lam, _)) in r.eigenvalues.iter().enumerate() {
                let vi = v.column(i);
                assert!((&a * vi - vi * lam).norm() < 1e-8);
                for j in 0..3 {
                    let pairing = vi.dot(&w.column(j));
                    if i == j {
                        assert!(pairing > 0.0);
                    } else {
                        assert!(pairing.abs() < 1e-8, "pairing {pairing}");
                    }
                }
            }
        }
    }

    #[test]
    fn top_singular_vector_examples() {
        let p = top_singular_vectors(&diag(&[3.0, 2.0])).unwrap();
        assert_relative_eq!(p.u[0].abs(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(p.v[0].abs(), 1.0, epsilon = 1e-14);
        assert!(!p.degenerate);
        let a = Matrix::from_row_slice(2, 2, &[0.0, 2.0, 1.0, 0.0]);
        let p = top_singular_vectors(&a).unwrap();
        assert_relative_eq!(p.v[1].abs(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(p.u[0].abs(), 1.0, epsilon = 1e-14);
        assert!(top_singular_vectors(&Matrix::identity(3, 3)).unwrap().degenerate);
    }

    #[test]
    fn top_singular_vectors_satisfy_linear_relation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = random_matrix(&mut rng, 3);
            let p = top_singular_vectors(&a).unwrap();
            assert!((&p.u * p.norm - &a * &p.v).norm() < 1e-9);
            assert_relative_eq!(p.u.norm(), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(4, 4).len(), 1);
        assert_eq!(combinations(5, 2).len(), 10);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_invertible(d: usize) -> impl Strategy<Value = Matrix> {
            proptest::collection::vec(-3.0f64..3.0, d * d)
                .prop_map(move |v| Matrix::from_row_slice(d, d, &v))
                .prop_filter("invertible", |m| singular_values_unchecked(m).condition_number() < 1e8)
        }

        proptest! {
            #[test]
            fn phi_is_submultiplicative(
                (a, b) in (2usize..=3).prop_flat_map(|d| (arb_invertible(d), arb_invertible(d))),
                step in 0usize..=20,
            ) {
                let d = a.nrows() as f64;
                let s = step as f64 * (d + 2.0) / 20.0;
                let prod = &a * &b;
                let ab = phi_s(&prod, s).unwrap();
                let bound = phi_s(&a, s).unwrap() * phi_s(&b, s).unwrap();
                // rounding of the small singular values scales with the condition number
                let slack = 1e-12 + 1e-15 * singular_values_unchecked(&prod).condition_number();
                prop_assert!(ab <= bound * (1.0 + slack));
            }

            #[test]
            fn exterior_norm_is_phi(a in (2usize..=4).prop_flat_map(arb_invertible)) {
                for t in 1..=a.nrows() {
                    let lhs = norm(&exterior_power(&a, t).unwrap());
                    let rhs = phi_s(&a, t as f64).unwrap();
                    prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs);
                }
            }

            #[test]
            fn phi_interpolates_between_integers(
                a in (2usize..=4).prop_flat_map(arb_invertible),
                gamma in 0.01f64..0.99,
                n_raw in 0usize..4,
            ) {
                let n = n_raw % a.nrows();
                let t = n as f64 * gamma + (n + 1) as f64 * (1.0 - gamma);
                let lhs = log_phi_s(&a, t).unwrap();
                let rhs = gamma * log_phi_s(&a, n as f64).unwrap()
                    + (1.0 - gamma) * log_phi_s(&a, (n + 1) as f64).unwrap();
                prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
            }
        }
    }
}
