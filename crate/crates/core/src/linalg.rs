//! Exact matrices and subspaces over `Q(ζ_m)`.

use std::fmt;

use thiserror::Error;

use crate::field::{CyclotomicNumber, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("bad symplectic form: {0}")]
    BadForm(String),
}

/// A dense row-major matrix whose entries share one conductor.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    conductor: u32,
    entries: Vec<CyclotomicNumber>,
}

impl ExactMatrix {
    pub fn new(
        rows: usize,
        cols: usize,
        conductor: u32,
        entries: Vec<CyclotomicNumber>,
    ) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|e| e.conductor() != conductor) {
            return Err(FieldError::ConductorMismatch {
                left: conductor,
                right: bad.conductor(),
            }
            .into());
        }
        Ok(ExactMatrix {
            rows,
            cols,
            conductor,
            entries,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        conductor: u32,
        mut f: impl FnMut(usize, usize) -> CyclotomicNumber,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                assert_eq!(e.conductor(), conductor, "conductor mismatch");
                entries.push(e);
            }
        }
        ExactMatrix {
            rows,
            cols,
            conductor,
            entries,
        }
    }

    /// Integer matrix given row-major.
    pub fn from_integers(rows: usize, cols: usize, conductor: u32, values: &[i64]) -> Self {
        assert_eq!(values.len(), rows * cols);
        Self::from_fn(rows, cols, conductor, |i, j| {
            CyclotomicNumber::from_integer(values[i * cols + j], conductor)
        })
    }

    pub fn zeros(rows: usize, cols: usize, conductor: u32) -> Self {
        Self::from_fn(rows, cols, conductor, |_, _| {
            CyclotomicNumber::zero(conductor)
        })
    }

    pub fn identity(n: usize, conductor: u32) -> Self {
        Self::from_fn(n, n, conductor, |i, j| {
            CyclotomicNumber::from_integer((i == j) as i64, conductor)
        })
    }

    pub fn diagonal(diag: &[CyclotomicNumber]) -> Self {
        let n = diag.len();
        let m = diag[0].conductor();
        Self::from_fn(n, n, m, |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                CyclotomicNumber::zero(m)
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CyclotomicNumber {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[CyclotomicNumber] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[CyclotomicNumber] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<CyclotomicNumber>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.conductor, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn neg(&self) -> Self {
        ExactMatrix {
            entries: self.entries.iter().map(|e| -e).collect(),
            ..self.clone()
        }
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.conductor != other.conductor {
            return Err(FieldError::ConductorMismatch {
                left: self.conductor,
                right: other.conductor,
            }
            .into());
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other)?;
        Ok(ExactMatrix {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other)?;
        Ok(ExactMatrix {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
            ..self.clone()
        })
    }

    /// Matrix product `self · other`.
    pub fn matmul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.conductor != other.conductor {
            return Err(FieldError::ConductorMismatch {
                left: self.conductor,
                right: other.conductor,
            }
            .into());
        }
        let m = self.conductor;
        let mut entries = vec![CyclotomicNumber::zero(m); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let a_is_one = a.is_one();
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let slot = &mut entries[i * other.cols + j];
                    *slot = if a_is_one {
                        &*slot + b
                    } else {
                        &*slot + &(a * b)
                    };
                }
            }
        }
        Ok(ExactMatrix {
            rows: self.rows,
            cols: other.cols,
            conductor: m,
            entries,
        })
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[CyclotomicNumber]) -> Vec<CyclotomicNumber> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| dot(self.row(i), v, self.conductor))
            .collect()
    }

    pub fn rank(&self) -> usize {
        row_reduce(self.row_vectors(), self.cols).1.len()
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot invert {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let m = self.conductor;
        let augmented: Vec<Vec<CyclotomicNumber>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| CyclotomicNumber::from_integer((i == j) as i64, m)));
                r
            })
            .collect();
        let (reduced, pivots) = row_reduce(augmented, n);
        if pivots.len() < n {
            return Err(LinalgError::SingularMatrix);
        }
        Ok(Self::from_fn(n, n, m, |i, j| reduced[i][n + j].clone()))
    }

    /// Null space `{v : self·v = 0}`.
    pub fn kernel(&self) -> Subspace {
        let m = self.conductor;
        let (reduced, pivots) = row_reduce(self.row_vectors(), self.cols);
        let mut basis = Vec::new();
        let mut pivot_iter = pivots.iter().peekable();
        for free in 0..self.cols {
            if pivot_iter.peek() == Some(&&free) {
                pivot_iter.next();
                continue;
            }
            let mut v = vec![CyclotomicNumber::zero(m); self.cols];
            v[free] = CyclotomicNumber::one(m);
            for (row, &p) in reduced.iter().zip(&pivots) {
                v[p] = -&row[free];
            }
            basis.push(v);
        }
        Subspace::canonical(self.cols, m, basis)
    }

    /// Subspace of vectors fixed by `self`.
    pub fn fixed_space(&self) -> Subspace {
        assert!(self.is_square(), "fixed space needs a square matrix");
        self.sub(&Self::identity(self.rows, self.conductor))
            .expect("same shape")
            .kernel()
    }

    pub fn promote(&self, target: u32) -> Result<Self, LinalgError> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.promote(target))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            conductor: target,
            entries,
        })
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.conductor != other.conductor {
            return Err(FieldError::ConductorMismatch {
                left: self.conductor,
                right: other.conductor,
            }
            .into());
        }
        let m = self.conductor;
        Ok(Self::from_fn(
            self.rows + other.rows,
            self.cols + other.cols,
            m,
            |i, j| match (i < self.rows, j < self.cols) {
                (true, true) => self.get(i, j).clone(),
                (false, false) => other.get(i - self.rows, j - self.cols).clone(),
                _ => CyclotomicNumber::zero(m),
            },
        ))
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "[{}x{} over Q(z{})]",
            self.rows, self.cols, self.conductor
        )?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn dot(a: &[CyclotomicNumber], b: &[CyclotomicNumber], m: u32) -> CyclotomicNumber {
    let mut acc = CyclotomicNumber::zero(m);
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = &acc + &(x * y);
        }
    }
    acc
}

/// Gauss-Jordan elimination on the first `ncols` columns with first-nonzero
/// pivoting. Returns the nonzero rows of the reduced form and the pivot columns.
fn row_reduce(
    mut rows: Vec<Vec<CyclotomicNumber>>,
    ncols: usize,
) -> (Vec<Vec<CyclotomicNumber>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inv().expect("pivot is nonzero");
        if !inv.is_one() {
            for e in rows[r].iter_mut() {
                if !e.is_zero() {
                    *e = &*e * &inv;
                }
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (e, pe) in row.iter_mut().zip(&pivot_row) {
                if !pe.is_zero() {
                    *e = &*e - &(&f * pe);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// A linear subspace of `Q(ζ_m)^n`, stored by the reduced echelon form of its
/// basis, so equal subspaces have identical representations.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    conductor: u32,
    basis: Vec<Vec<CyclotomicNumber>>,
}

impl Subspace {
    fn canonical(ambient_dim: usize, conductor: u32, vectors: Vec<Vec<CyclotomicNumber>>) -> Self {
        let (basis, _) = row_reduce(vectors, ambient_dim);
        Subspace {
            ambient_dim,
            conductor,
            basis,
        }
    }

    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span(
        ambient_dim: usize,
        conductor: u32,
        vectors: Vec<Vec<CyclotomicNumber>>,
    ) -> Result<Self, LinalgError> {
        for v in &vectors {
            if v.len() != ambient_dim {
                return Err(LinalgError::DimensionMismatch(format!(
                    "vector of length {} in ambient dimension {ambient_dim}",
                    v.len()
                )));
            }
            if let Some(bad) = v.iter().find(|e| e.conductor() != conductor) {
                return Err(FieldError::ConductorMismatch {
                    left: conductor,
                    right: bad.conductor(),
                }
                .into());
            }
        }
        Ok(Self::canonical(ambient_dim, conductor, vectors))
    }

    pub fn full(ambient_dim: usize, conductor: u32) -> Self {
        Subspace {
            ambient_dim,
            conductor,
            basis: ExactMatrix::identity(ambient_dim, conductor).row_vectors(),
        }
    }

    pub fn zero(ambient_dim: usize, conductor: u32) -> Self {
        Subspace {
            ambient_dim,
            conductor,
            basis: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim - self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<CyclotomicNumber>] {
        &self.basis
    }

    /// Basis vectors as the rows of a `dim × ambient` matrix.
    pub fn basis_matrix(&self) -> ExactMatrix {
        ExactMatrix::from_fn(self.dim(), self.ambient_dim, self.conductor, |i, j| {
            self.basis[i][j].clone()
        })
    }

    pub fn contains(&self, v: &[CyclotomicNumber]) -> bool {
        assert_eq!(v.len(), self.ambient_dim);
        let mut rest = v.to_vec();
        for row in &self.basis {
            let p = row.iter().position(|e| !e.is_zero()).expect("nonzero row");
            if rest[p].is_zero() {
                continue;
            }
            let f = rest[p].clone();
            for (e, re) in rest.iter_mut().zip(row) {
                if !re.is_zero() {
                    *e = &*e - &(&f * re);
                }
            }
        }
        rest.iter().all(CyclotomicNumber::is_zero)
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.dim() <= other.dim()
            && self.basis.iter().all(|v| other.contains(v))
    }

    /// Vectors `y` with `Σ_k b_k y_k = 0` for every basis vector `b`.
    pub fn annihilator(&self) -> Self {
        if self.basis.is_empty() {
            return Self::full(self.ambient_dim, self.conductor);
        }
        self.basis_matrix().kernel()
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::DimensionMismatch(format!(
                "ambient dimensions {} and {}",
                self.ambient_dim, other.ambient_dim
            )));
        }
        if self.conductor != other.conductor {
            return Err(FieldError::ConductorMismatch {
                left: self.conductor,
                right: other.conductor,
            }
            .into());
        }
        let mut equations = self.annihilator().basis;
        equations.extend(other.annihilator().basis);
        if equations.is_empty() {
            return Ok(Self::full(self.ambient_dim, self.conductor));
        }
        let n = equations.len();
        let eqs = ExactMatrix::from_fn(n, self.ambient_dim, self.conductor, |i, j| {
            equations[i][j].clone()
        });
        Ok(eqs.kernel())
    }

    /// Image `g · self`.
    pub fn image_under(&self, g: &ExactMatrix) -> Self {
        let vectors = self.basis.iter().map(|v| g.apply(v)).collect();
        Self::canonical(self.ambient_dim, self.conductor, vectors)
    }
}

/// The block form with `Ω(e_{2k-1}, e_{2k}) = 1`.
pub fn standard_symplectic_form(dim: usize, conductor: u32) -> Result<ExactMatrix, LinalgError> {
    if dim == 0 || !dim.is_multiple_of(2) {
        return Err(LinalgError::BadForm(format!(
            "standard form needs a positive even dimension, got {dim}"
        )));
    }
    Ok(ExactMatrix::from_fn(dim, dim, conductor, |i, j| {
        let v = if i % 2 == 0 && j == i + 1 {
            1
        } else if i % 2 == 1 && j + 1 == i {
            -1
        } else {
            0
        };
        CyclotomicNumber::from_integer(v, conductor)
    }))
}

/// Checks that `omega` is square, antisymmetric and nonsingular.
pub fn check_form(omega: &ExactMatrix) -> Result<(), LinalgError> {
    if !omega.is_square() {
        return Err(LinalgError::BadForm("form is not square".into()));
    }
    if omega.transpose() != omega.neg() {
        return Err(LinalgError::BadForm("form is not antisymmetric".into()));
    }
    if omega.rank() != omega.rows() {
        return Err(LinalgError::BadForm("form is degenerate".into()));
    }
    Ok(())
}

/// Whether `gᵀ Ω g = Ω`.
pub fn is_symplectic(g: &ExactMatrix, omega: &ExactMatrix) -> Result<bool, LinalgError> {
    check_form(omega)?;
    if !g.is_square() || g.rows() != omega.rows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "{}x{} matrix against {}-dimensional form",
            g.rows(),
            g.cols(),
            omega.rows()
        )));
    }
    Ok(g.transpose().matmul(omega)?.matmul(g)? == *omega)
}

/// Whether the form restricted to `s` is nondegenerate. The zero subspace counts
/// as nondegenerate.
pub fn form_restriction_nondegenerate(omega: &ExactMatrix, s: &Subspace) -> bool {
    if s.dim() == 0 {
        return true;
    }
    let b = s.basis_matrix();
    let restricted = b
        .matmul(omega)
        .and_then(|bo| bo.matmul(&b.transpose()))
        .expect("subspace lives in the form's ambient space");
    restricted.rank() == s.dim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int(n: i64, m: u32) -> CyclotomicNumber {
        CyclotomicNumber::from_integer(n, m)
    }

    fn unit(n: usize, k: usize) -> Vec<CyclotomicNumber> {
        (0..n).map(|i| int((i == k) as i64, 1)).collect()
    }

    #[test]
    fn multiplication_examples() {
        let a = ExactMatrix::from_integers(2, 2, 1, &[1, 2, 3, 4]);
        assert_eq!(ExactMatrix::identity(2, 1).matmul(&a).unwrap(), a);
        let i = CyclotomicNumber::zeta(4);
        let d = ExactMatrix::diagonal(&[i.clone(), -&i]);
        assert_eq!(d.matmul(&d).unwrap(), ExactMatrix::identity(2, 4).neg());
        let swap = ExactMatrix::from_integers(2, 2, 1, &[0, 1, 1, 0]);
        assert!(swap.matmul(&swap).unwrap().is_identity());
        assert!(matches!(
            a.matmul(&ExactMatrix::identity(3, 1)),
            Err(LinalgError::DimensionMismatch(_))
        ));
        assert!(matches!(
            a.matmul(&ExactMatrix::identity(2, 3)),
            Err(LinalgError::Field(FieldError::ConductorMismatch { .. }))
        ));
    }

    #[test]
    fn inverse_examples() {
        assert!(ExactMatrix::identity(3, 1).inverse().unwrap().is_identity());
        let d = ExactMatrix::diagonal(&[
            CyclotomicNumber::from_integer(2, 1),
            CyclotomicNumber::from_ratio(1, 3, 1),
        ]);
        let expected = ExactMatrix::diagonal(&[
            CyclotomicNumber::from_ratio(1, 2, 1),
            CyclotomicNumber::from_integer(3, 1),
        ]);
        assert_eq!(d.inverse().unwrap(), expected);
        let w = CyclotomicNumber::zeta(3);
        let a = ExactMatrix::from_fn(3, 3, 3, |i, j| {
            &CyclotomicNumber::zeta_pow(3, (i * j) as i64) + &int((i + 2 * j) as i64, 3)
        });
        let inv = a.inverse().unwrap();
        assert!(a.matmul(&inv).unwrap().is_identity());
        assert!(inv.matmul(&a).unwrap().is_identity());
        // second row is w times the first
        let singular = ExactMatrix::from_fn(2, 2, 3, |i, j| {
            let e = if j == 0 { w.clone() } else { &w * &w };
            if i == 0 {
                e
            } else {
                &e * &w
            }
        });
        assert_eq!(singular.inverse(), Err(LinalgError::SingularMatrix));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(ExactMatrix::zeros(4, 4, 1).kernel().dim(), 4);
        let g = ExactMatrix::diagonal(&[int(-1, 1), int(-1, 1), int(1, 1), int(1, 1)]);
        let fixed = g.fixed_space();
        assert_eq!(
            fixed,
            Subspace::span(4, 1, vec![unit(4, 2), unit(4, 3)]).unwrap()
        );
        assert_eq!(ExactMatrix::identity(4, 1).neg().fixed_space().dim(), 0);
        assert_eq!(
            ExactMatrix::identity(4, 1).fixed_space(),
            Subspace::full(4, 1)
        );
    }

    #[test]
    fn swap_fixed_space_is_diagonal() {
        // (z1, z2, z3, z4) -> (z3, z4, z1, z2): solving g v = v gives v1 = v3, v2 = v4.
        let g =
            ExactMatrix::from_integers(4, 4, 1, &[0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0]);
        let fixed = g.fixed_space();
        assert_eq!(fixed.codim(), 2);
        let diag = Subspace::span(
            4,
            1,
            vec![
                vec![int(1, 1), int(0, 1), int(1, 1), int(0, 1)],
                vec![int(0, 1), int(1, 1), int(0, 1), int(1, 1)],
            ],
        )
        .unwrap();
        assert_eq!(fixed, diag);
    }

    #[test]
    fn symplectic_examples() {
        let omega = standard_symplectic_form(4, 1).unwrap();
        assert!(is_symplectic(&ExactMatrix::identity(4, 1), &omega).unwrap());
        let omega2 = standard_symplectic_form(2, 1).unwrap();
        let g = ExactMatrix::diagonal(&[int(2, 1), CyclotomicNumber::from_ratio(1, 2, 1)]);
        assert!(is_symplectic(&g, &omega2).unwrap());
        let h = ExactMatrix::diagonal(&[int(2, 1), int(2, 1)]);
        assert!(!is_symplectic(&h, &omega2).unwrap());
        let sym = ExactMatrix::from_integers(2, 2, 1, &[0, 1, 1, 0]);
        assert!(matches!(
            is_symplectic(&h, &sym),
            Err(LinalgError::BadForm(_))
        ));
        let degenerate = ExactMatrix::zeros(2, 2, 1);
        assert!(matches!(
            is_symplectic(&h, &degenerate),
            Err(LinalgError::BadForm(_))
        ));
        assert!(standard_symplectic_form(3, 1).is_err());
    }

    #[test]
    fn intersection_examples() {
        let a = Subspace::span(3, 1, vec![unit(3, 0), unit(3, 1)]).unwrap();
        let b = Subspace::span(3, 1, vec![unit(3, 1), unit(3, 2)]).unwrap();
        assert_eq!(a.intersect(&Subspace::full(3, 1)).unwrap(), a);
        assert_eq!(
            a.intersect(&b).unwrap(),
            Subspace::span(3, 1, vec![unit(3, 1)]).unwrap()
        );
        assert!(a.intersect(&Subspace::full(4, 1)).is_err());
    }

    #[test]
    fn form_restriction_examples() {
        let omega = standard_symplectic_form(4, 1).unwrap();
        assert!(form_restriction_nondegenerate(
            &omega,
            &Subspace::full(4, 1)
        ));
        let omega2 = standard_symplectic_form(2, 1).unwrap();
        let line = Subspace::span(2, 1, vec![unit(2, 0)]).unwrap();
        assert!(!form_restriction_nondegenerate(&omega2, &line));
        assert!(form_restriction_nondegenerate(
            &omega,
            &Subspace::zero(4, 1)
        ));
    }

    /// Joint-kernel route: x = A u with A u - B w = 0.
    fn intersection_by_joint_kernel(a: &Subspace, b: &Subspace) -> Subspace {
        let n = a.ambient_dim();
        let m = a.conductor();
        let (da, db) = (a.dim(), b.dim());
        if da + db == 0 {
            return Subspace::zero(n, m);
        }
        let joint = ExactMatrix::from_fn(n, da + db, m, |i, j| {
            if j < da {
                a.basis()[j][i].clone()
            } else {
                -&b.basis()[j - da][i]
            }
        });
        let coeffs = joint.kernel();
        let vectors = coeffs
            .basis()
            .iter()
            .map(|c| {
                (0..n)
                    .map(|i| {
                        (0..da).fold(CyclotomicNumber::zero(m), |acc, j| {
                            &acc + &(&c[j] * &a.basis()[j][i])
                        })
                    })
                    .collect()
            })
            .collect();
        Subspace::span(n, m, vectors).unwrap()
    }

    fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = ExactMatrix> {
        prop::collection::vec((-2i64..3, -1i64..2), rows * cols).prop_map(move |v| {
            ExactMatrix::from_fn(rows, cols, 3, |i, j| {
                let (a, b) = v[i * cols + j];
                &int(a, 3) + &(&int(b, 3) * &CyclotomicNumber::zeta(3))
            })
        })
    }

    fn arb_subspace(dim: usize) -> impl Strategy<Value = Subspace> {
        arb_matrix(dim, 4).prop_map(|m| Subspace::span(4, 3, m.row_vectors()).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn rank_nullity(a in arb_matrix(3, 5)) {
            prop_assert_eq!(a.rank() + a.kernel().dim(), 5);
            for v in a.kernel().basis() {
                prop_assert!(a.apply(v).iter().all(CyclotomicNumber::is_zero));
            }
        }

        #[test]
        fn intersection_agrees_with_joint_kernel(a in arb_subspace(3), b in arb_subspace(3)) {
            let meet = a.intersect(&b).unwrap();
            prop_assert_eq!(&meet, &intersection_by_joint_kernel(&a, &b));
            prop_assert!(meet.dim() + 4 >= a.dim() + b.dim());
            prop_assert!(meet.is_subspace_of(&a) && meet.is_subspace_of(&b));
        }

        #[test]
        fn intersection_lattice_laws(a in arb_subspace(3), b in arb_subspace(2), c in arb_subspace(3)) {
            prop_assert_eq!(a.intersect(&b).unwrap(), b.intersect(&a).unwrap());
            prop_assert_eq!(a.intersect(&a).unwrap(), a.clone());
            prop_assert_eq!(
                a.intersect(&b).unwrap().intersect(&c).unwrap(),
                a.intersect(&b.intersect(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn symplectic_closed_under_products(s in -3i64..4, t in -3i64..4, u in -3i64..4) {
            // shears and their transposes generate Sp(2) = SL(2); direct sum with a swap lives in Sp(4)
            let omega = standard_symplectic_form(4, 1).unwrap();
            let shear = ExactMatrix::from_integers(2, 2, 1, &[1, s, 0, 1]);
            let lower = ExactMatrix::from_integers(2, 2, 1, &[1, 0, t, 1]);
            let g = shear.direct_sum(&lower).unwrap();
            let h = lower.direct_sum(&ExactMatrix::from_integers(2, 2, 1, &[1, u, 0, 1])).unwrap();
            prop_assert!(is_symplectic(&g, &omega).unwrap());
            prop_assert!(is_symplectic(&h, &omega).unwrap());
            prop_assert!(is_symplectic(&g.matmul(&h).unwrap(), &omega).unwrap());
        }
    }
}
