//! Exact arithmetic in cyclotomic fields `Q(ζ_m)`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ(m)-1}` and kept
//! reduced modulo the `m`-th cyclotomic polynomial, so two values of the same
//! conductor are equal exactly when their coefficient vectors are equal.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("Q(zeta_{from}) is not a subfield of Q(zeta_{to})")]
    NotASubfield { from: u32, to: u32 },
    #[error("conductor {conductor} needs {expected} coefficients, got {found}")]
    CoefficientLength {
        conductor: u32,
        expected: usize,
        found: usize,
    },
    #[error("conductor must be positive")]
    ZeroConductor,
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
}

/// Euler's totient.
pub fn totient(m: u32) -> usize {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

fn poly_divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[k + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

fn compute_cyclotomic_poly(m: u32, cache: &mut HashMap<u32, Rc<FieldData>>) -> Vec<i64> {
    let mut poly = vec![0i64; m as usize + 1];
    poly[0] = -1;
    poly[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            let sub = field_data_in(d, cache);
            poly = poly_divide_exact(&poly, &sub.modulus);
        }
    }
    poly
}

/// Per-conductor tables: the cyclotomic polynomial and reduced powers of ζ.
#[derive(Debug)]
struct FieldData {
    phi: usize,
    /// Coefficients of Φ_m, constant term first, monic.
    modulus: Vec<i64>,
    /// `powers[j]` is ζ^j in the power basis, for `0 <= j < m`.
    powers: Vec<Vec<BigRational>>,
}

thread_local! {
    static FIELD_CACHE: RefCell<HashMap<u32, Rc<FieldData>>> = RefCell::new(HashMap::new());
}

fn field_data_in(m: u32, cache: &mut HashMap<u32, Rc<FieldData>>) -> Rc<FieldData> {
    if let Some(d) = cache.get(&m) {
        return d.clone();
    }
    let modulus = compute_cyclotomic_poly(m, cache);
    let phi = modulus.len() - 1;
    debug_assert_eq!(phi, totient(m));
    let mut powers = Vec::with_capacity(m as usize);
    let mut cur = vec![BigRational::zero(); phi];
    cur[0] = BigRational::one();
    for _ in 0..m {
        powers.push(cur.clone());
        let mut next = vec![BigRational::zero(); phi + 1];
        for (k, c) in cur.iter().enumerate() {
            next[k + 1] = c.clone();
        }
        reduce_with(&mut next, &modulus);
        cur = next;
    }
    let data = Rc::new(FieldData {
        phi,
        modulus,
        powers,
    });
    cache.insert(m, data.clone());
    data
}

fn field_data(m: u32) -> Rc<FieldData> {
    FIELD_CACHE.with(|c| field_data_in(m, &mut c.borrow_mut()))
}

/// Reduces `poly` (constant term first) modulo the monic `modulus`, truncating
/// it to `deg(modulus)` coefficients.
fn reduce_with(poly: &mut Vec<BigRational>, modulus: &[i64]) {
    let phi = modulus.len() - 1;
    for k in (phi..poly.len()).rev() {
        let c = std::mem::take(&mut poly[k]);
        if c.is_zero() {
            continue;
        }
        for (j, &d) in modulus[..phi].iter().enumerate() {
            match d {
                0 => {}
                1 => poly[k - phi + j] -= &c,
                -1 => poly[k - phi + j] += &c,
                _ => poly[k - phi + j] -= &c * BigRational::from_integer(BigInt::from(d)),
            }
        }
    }
    poly.truncate(phi);
    poly.resize(phi, BigRational::zero());
}

/// Coefficients of the `m`-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    field_data(m).modulus.clone()
}

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational, FieldError> {
    let bad = || FieldError::BadRational(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// An element of `Q(ζ_m)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclotomicNumber {
    conductor: u32,
    coeffs: Vec<BigRational>,
}

impl CyclotomicNumber {
    pub fn zero(conductor: u32) -> Self {
        assert!(conductor > 0, "conductor must be positive");
        CyclotomicNumber {
            conductor,
            coeffs: vec![BigRational::zero(); totient(conductor)],
        }
    }

    pub fn one(conductor: u32) -> Self {
        Self::from_rational(BigRational::one(), conductor)
    }

    pub fn from_rational(r: BigRational, conductor: u32) -> Self {
        let mut z = Self::zero(conductor);
        z.coeffs[0] = r;
        z
    }

    pub fn from_integer(n: i64, conductor: u32) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)), conductor)
    }

    /// `p/q` as a field element.
    pub fn from_ratio(p: i64, q: i64, conductor: u32) -> Self {
        Self::from_rational(
            BigRational::new(BigInt::from(p), BigInt::from(q)),
            conductor,
        )
    }

    /// The primitive root `ζ_m = exp(2πi/m)`.
    pub fn zeta(conductor: u32) -> Self {
        Self::zeta_pow(conductor, 1)
    }

    /// `ζ_m^k` for any integer `k`.
    pub fn zeta_pow(conductor: u32, k: i64) -> Self {
        assert!(conductor > 0, "conductor must be positive");
        let data = field_data(conductor);
        let j = k.rem_euclid(conductor as i64) as usize;
        CyclotomicNumber {
            conductor,
            coeffs: data.powers[j].clone(),
        }
    }

    /// Builds `Σ coeffs[k] ζ^k`; the vector must have exactly `φ(m)` entries.
    pub fn from_coeffs(conductor: u32, coeffs: Vec<BigRational>) -> Result<Self, FieldError> {
        if conductor == 0 {
            return Err(FieldError::ZeroConductor);
        }
        let expected = totient(conductor);
        if coeffs.len() != expected {
            return Err(FieldError::CoefficientLength {
                conductor,
                expected,
                found: coeffs.len(),
            });
        }
        Ok(CyclotomicNumber { conductor, coeffs })
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check_conductor(&self, other: &Self) -> Result<(), FieldError> {
        if self.conductor != other.conductor {
            Err(FieldError::ConductorMismatch {
                left: self.conductor,
                right: other.conductor,
            })
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_conductor(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_conductor(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_conductor(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_conductor(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs,
        }
    }

    fn sub_unchecked(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs,
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let phi = self.coeffs.len();
        if phi == 1 {
            return CyclotomicNumber {
                conductor: self.conductor,
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            };
        }
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.conductor);
        }
        let mut prod = vec![BigRational::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let data = field_data(self.conductor);
        reduce_with(&mut prod, &data.modulus);
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs: prod,
        }
    }

    /// Multiplicative inverse, found by solving `(a·ζ^j)_j x = 1` over `Q`.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let phi = self.coeffs.len();
        if phi == 1 {
            return Ok(CyclotomicNumber {
                conductor: self.conductor,
                coeffs: vec![self.coeffs[0].recip()],
            });
        }
        // Column j of the multiplication matrix is a·ζ^j.
        let mut cols = Vec::with_capacity(phi);
        for j in 0..phi {
            cols.push(
                self.mul_unchecked(&Self::zeta_pow(self.conductor, j as i64))
                    .coeffs,
            );
        }
        // Augmented system rows: [M | e_0].
        let mut rows: Vec<Vec<BigRational>> = (0..phi)
            .map(|i| {
                let mut r: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
                r.push(if i == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
                r
            })
            .collect();
        for col in 0..phi {
            let pivot = (col..phi)
                .find(|&r| !rows[r][col].is_zero())
                .expect("multiplication by a nonzero field element is invertible");
            rows.swap(col, pivot);
            let p = rows[col][col].recip();
            for v in rows[col].iter_mut() {
                *v *= &p;
            }
            let pivot_row = rows[col].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == col || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *v -= &f * pv;
                    }
                }
            }
        }
        Ok(CyclotomicNumber {
            conductor: self.conductor,
            coeffs: rows.into_iter().map(|mut r| r.pop().unwrap()).collect(),
        })
    }

    /// Complex conjugation, the automorphism `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let m = self.conductor as usize;
        if self.coeffs.len() == 1 {
            return self.clone();
        }
        let data = field_data(self.conductor);
        let mut out = vec![BigRational::zero(); data.phi];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&data.powers[(m - k) % m]) {
                if !p.is_zero() {
                    *o += c * p;
                }
            }
        }
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs: out,
        }
    }

    /// The same element viewed in `Q(ζ_{target})`; `conductor` must divide `target`.
    pub fn promote(&self, target: u32) -> Result<Self, FieldError> {
        if target == 0 || !target.is_multiple_of(self.conductor) {
            return Err(FieldError::NotASubfield {
                from: self.conductor,
                to: target,
            });
        }
        if target == self.conductor {
            return Ok(self.clone());
        }
        let step = (target / self.conductor) as usize;
        let data = field_data(target);
        let mut out = vec![BigRational::zero(); data.phi];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out
                .iter_mut()
                .zip(&data.powers[(k * step) % target as usize])
            {
                if !p.is_zero() {
                    *o += c * p;
                }
            }
        }
        Ok(CyclotomicNumber {
            conductor: target,
            coeffs: out,
        })
    }

    /// Value under the embedding `ζ_m ↦ exp(2πi/m)`.
    pub fn to_complex(&self) -> Complex64 {
        let m = self.conductor as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let angle = 2.0 * std::f64::consts::PI * k as f64 / m;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle)
            })
            .sum()
    }
}

/// Least common conductor of two values.
pub fn common_conductor(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&CyclotomicNumber> for &CyclotomicNumber {
            type Output = CyclotomicNumber;

            /// # Panics
            /// On conductor mismatch; use the `checked_*` methods for fallible arithmetic.
            fn $method(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
                assert_eq!(self.conductor, rhs.conductor, "conductor mismatch");
                self.$inner(rhs)
            }
        }

        impl $tr for CyclotomicNumber {
            type Output = CyclotomicNumber;

            fn $method(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_op!(Add, add, add_unchecked);
forward_op!(Sub, sub, sub_unchecked);
forward_op!(Mul, mul, mul_unchecked);

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;

    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;

    fn neg(self) -> CyclotomicNumber {
        -&self
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match k {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    write!(f, "z{}", self.conductor)?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [Q(z{})]", self.conductor)
    }
}
