//! Symplectic eigenvalues of a complex 2-form relative to a Hermitian metric,
//! and Pfaffians.
//!
//! Every antisymmetric form `Θ` on a Hermitian space can be written as
//! `Σ λᵢ z_{2i-1} ∧ z_{2i}` in some orthonormal coframe, with `λᵢ ≥ 0`. In an
//! orthonormal basis the singular values of `Θ` are exactly the `λᵢ`, each
//! repeated twice.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("singular values do not pair: {0}")]
    ToleranceViolation(String),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Relative tolerance for antisymmetry of `Θ` and Hermitian symmetry of `h`.
    pub input: f64,
    /// Relative tolerance for singular-value pairing.
    pub spectral: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            input: 1e-12,
            spectral: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormSpectrumInput {
    pub theta: DMatrix<Complex64>,
    pub metric: DMatrix<Complex64>,
}

impl FormSpectrumInput {
    /// `Θ` against the identity metric.
    pub fn with_identity_metric(theta: DMatrix<Complex64>) -> Self {
        let n = theta.nrows();
        FormSpectrumInput {
            theta,
            metric: DMatrix::identity(n, n),
        }
    }

    fn validate(&self, tol: f64) -> Result<(), SpectrumError> {
        let n = self.theta.nrows();
        if self.theta.ncols() != n || self.metric.nrows() != n || self.metric.ncols() != n {
            return Err(SpectrumError::BadInput(format!(
                "theta is {}x{}, metric is {}x{}",
                self.theta.nrows(),
                self.theta.ncols(),
                self.metric.nrows(),
                self.metric.ncols()
            )));
        }
        if n == 0 || !n.is_multiple_of(2) {
            return Err(SpectrumError::BadInput(format!(
                "dimension {n} is not positive and even"
            )));
        }
        let scale = self.theta.norm().max(1.0);
        if (&self.theta + self.theta.transpose()).norm() > tol * scale {
            return Err(SpectrumError::BadInput("theta is not antisymmetric".into()));
        }
        let scale = self.metric.norm().max(1.0);
        if (&self.metric - self.metric.adjoint()).norm() > tol * scale {
            return Err(SpectrumError::BadInput("metric is not Hermitian".into()));
        }
        Ok(())
    }
}

/// The `λᵢ`, sorted ascending, one per pair of singular values.
pub fn symplectic_eigenvalues(
    input: &FormSpectrumInput,
    tol: Tolerances,
) -> Result<Vec<f64>, SpectrumError> {
    input.validate(tol.input)?;
    let spectrum = input.metric.clone().symmetric_eigenvalues();
    let largest = spectrum.iter().copied().fold(0.0f64, f64::max);
    if spectrum.iter().any(|&e| e <= tol.input * largest) {
        return Err(SpectrumError::BadInput(
            "metric is not positive definite".into(),
        ));
    }
    let chol = input
        .metric
        .clone()
        .cholesky()
        .ok_or_else(|| SpectrumError::BadInput("metric is not positive definite".into()))?;
    // Columns of (L*)⁻¹ form an h-orthonormal frame.
    let frame = chol
        .l()
        .adjoint()
        .try_inverse()
        .ok_or_else(|| SpectrumError::BadInput("metric is numerically singular".into()))?;
    let normal = frame.transpose() * &input.theta * &frame;

    let mut sv: Vec<f64> = normal.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let top = sv.first().copied().unwrap_or(0.0);
    let mut lambdas = Vec::with_capacity(sv.len() / 2);
    for pair in sv.chunks_exact(2) {
        let gap = (pair[0] - pair[1]).abs();
        if gap > tol.spectral * top.max(f64::MIN_POSITIVE) {
            return Err(SpectrumError::ToleranceViolation(format!(
                "{} vs {} (gap {gap:e})",
                pair[0], pair[1]
            )));
        }
        lambdas.push(0.5 * (pair[0] + pair[1]));
    }
    lambdas.reverse();
    Ok(lambdas)
}

/// Pfaffian of an antisymmetric matrix: expansion along the first row up to
/// dimension 8, Parlett–Reid skew-tridiagonalization beyond.
pub fn pfaffian(a: &DMatrix<Complex64>) -> Complex64 {
    if a.nrows() <= 8 {
        pfaffian_expansion(a)
    } else {
        pfaffian_parlett_reid(a)
    }
}

pub fn pfaffian_expansion(a: &DMatrix<Complex64>) -> Complex64 {
    let idx: Vec<usize> = (0..a.nrows()).collect();
    expand(a, &idx)
}

fn expand(a: &DMatrix<Complex64>, idx: &[usize]) -> Complex64 {
    match idx.len() {
        0 => Complex64::new(1.0, 0.0),
        n if n % 2 == 1 => Complex64::new(0.0, 0.0),
        _ => {
            let first = idx[0];
            let mut total = Complex64::new(0.0, 0.0);
            for (pos, &j) in idx.iter().enumerate().skip(1) {
                let entry = a[(first, j)];
                if entry == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let rest: Vec<usize> = idx
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != 0 && p != pos)
                    .map(|(_, &k)| k)
                    .collect();
                let sign = if pos % 2 == 1 { 1.0 } else { -1.0 };
                total += entry * sign * expand(a, &rest);
            }
            total
        }
    }
}

pub fn pfaffian_parlett_reid(a: &DMatrix<Complex64>) -> Complex64 {
    let n = a.nrows();
    if n % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    let mut m = a.clone();
    let mut pf = Complex64::new(1.0, 0.0);
    for k in (0..n.saturating_sub(1)).step_by(2) {
        let kp = (k + 1..n)
            .max_by(|&x, &y| m[(x, k)].norm().total_cmp(&m[(y, k)].norm()))
            .expect("nonempty range");
        if kp != k + 1 {
            m.swap_rows(k + 1, kp);
            m.swap_columns(k + 1, kp);
            pf = -pf;
        }
        let pivot = m[(k, k + 1)];
        if pivot == Complex64::new(0.0, 0.0) {
            return Complex64::new(0.0, 0.0);
        }
        pf *= pivot;
        if k + 2 < n {
            let tau: Vec<Complex64> = (k + 2..n).map(|j| m[(k, j)] / pivot).collect();
            let col: Vec<Complex64> = (k + 2..n).map(|i| m[(i, k + 1)]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    m[(i, j)] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
    }
    pf
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn standard(n: usize, scale: Complex64) -> DMatrix<Complex64> {
        DMatrix::from_fn(n, n, |i, j| {
            if i % 2 == 0 && j == i + 1 {
                scale
            } else if i % 2 == 1 && j + 1 == i {
                -scale
            } else {
                c(0.0, 0.0)
            }
        })
    }

    #[test]
    fn standard_form_has_unit_eigenvalue() {
        let input = FormSpectrumInput::with_identity_metric(standard(2, c(1.0, 0.0)));
        let l = symplectic_eigenvalues(&input, Tolerances::default()).unwrap();
        assert_eq!(l.len(), 1);
        assert!((l[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scaling_by_complex_number() {
        let s = c(3.0, -4.0);
        let input = FormSpectrumInput::with_identity_metric(standard(2, s));
        let l = symplectic_eigenvalues(&input, Tolerances::default()).unwrap();
        assert!((l[0] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn metric_rescales_eigenvalues() {
        // h = diag(4, 1): orthonormal frame (e1/2, e2), so Θ(e1/2, e2) = 1/2.
        let metric =
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(4.0, 0.0), c(1.0, 0.0)]));
        let input = FormSpectrumInput {
            theta: standard(2, c(1.0, 0.0)),
            metric,
        };
        let l = symplectic_eigenvalues(&input, Tolerances::default()).unwrap();
        assert!((l[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bad_inputs() {
        let odd = FormSpectrumInput::with_identity_metric(DMatrix::zeros(3, 3));
        assert!(matches!(
            symplectic_eigenvalues(&odd, Tolerances::default()),
            Err(SpectrumError::BadInput(_))
        ));
        let sym = FormSpectrumInput::with_identity_metric(DMatrix::from_element(2, 2, c(1.0, 0.0)));
        assert!(matches!(
            symplectic_eigenvalues(&sym, Tolerances::default()),
            Err(SpectrumError::BadInput(_))
        ));
        let indefinite = FormSpectrumInput {
            theta: standard(2, c(1.0, 0.0)),
            metric: DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
                c(1.0, 0.0),
                c(-1.0, 0.0),
            ])),
        };
        assert!(matches!(
            symplectic_eigenvalues(&indefinite, Tolerances::default()),
            Err(SpectrumError::BadInput(_))
        ));
    }

    #[test]
    fn pfaffian_small_cases() {
        assert_eq!(pfaffian(&DMatrix::zeros(0, 0)), c(1.0, 0.0));
        assert_eq!(pfaffian(&standard(2, c(2.0, 1.0))), c(2.0, 1.0));
        // Pf of 4x4 = a12 a34 - a13 a24 + a14 a23
        let v = [
            (0, 1, 1.0),
            (0, 2, 2.0),
            (0, 3, 3.0),
            (1, 2, 4.0),
            (1, 3, 5.0),
            (2, 3, 6.0),
        ];
        let mut a = DMatrix::zeros(4, 4);
        for &(i, j, x) in &v {
            a[(i, j)] = c(x, 0.0);
            a[(j, i)] = c(-x, 0.0);
        }
        let expected = 1.0 * 6.0 - 2.0 * 5.0 + 3.0 * 4.0;
        assert!((pfaffian_expansion(&a) - c(expected, 0.0)).norm() < 1e-12);
        assert!((pfaffian_parlett_reid(&a) - c(expected, 0.0)).norm() < 1e-12);
    }
}
