//! Exact arithmetic in the group ring of the cyclic group Z/NZ, and in
//! polynomials over it truncated at a fixed degree.
//!
//! An element is a formal sum `a_0 + a_1 s + ... + a_{N-1} s^{N-1}` with the
//! multiplication rule `s^l * s^l' = s^{(l+l') mod N}`. Coefficients are kept
//! as exact integers; rational values arising in the counting formulas are
//! stored pre-multiplied by a scale (canonically N^n) that the caller tracks
//! and divides out at the very end.

use crate::error::{Error, Result};
use num_integer::Integer;
use num_traits::FromPrimitive;
use std::ops::{AddAssign, SubAssign};

/// Exact integer scalar usable as a coefficient type (e.g. `i64`, `BigInt`).
pub trait Scalar: Integer + Clone + FromPrimitive + AddAssign + SubAssign {}
impl<T: Integer + Clone + FromPrimitive + AddAssign + SubAssign> Scalar for T {}

/// Element of the group ring of Z/NZ with coefficients in `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElem<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> GroupRingElem<T> {
    pub fn zero(modulus: usize) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        Self {
            coeffs: std::iter::repeat_with(T::zero).take(modulus).collect(),
        }
    }

    /// The multiplicative identity s^0.
    pub fn one(modulus: usize) -> Self {
        Self::monomial(modulus, 0)
    }

    /// c * s^exp.
    pub fn monomial_scaled(modulus: usize, exp: usize, c: T) -> Self {
        let mut e = Self::zero(modulus);
        e.coeffs[exp % modulus] = c;
        e
    }

    /// s^exp.
    pub fn monomial(modulus: usize, exp: usize) -> Self {
        Self::monomial_scaled(modulus, exp, T::one())
    }

    pub fn from_coeffs(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument(
                "group ring element needs at least one coefficient".into(),
            ));
        }
        Ok(Self { coeffs })
    }

    pub fn modulus(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &T {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add_monomial_assign(&mut self, exp: usize, c: &T) {
        let n = self.modulus();
        self.coeffs[exp % n] += c.clone();
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_assign_elem(other)?;
        Ok(out)
    }

    pub fn add_assign_elem(&mut self, other: &Self) -> Result<()> {
        if self.modulus() != other.modulus() {
            return Err(Error::ModulusMismatch(self.modulus(), other.modulus()));
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b.clone();
        }
        Ok(())
    }

    /// Cyclic convolution: the group ring product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.modulus();
        if n != other.modulus() {
            return Err(Error::ModulusMismatch(n, other.modulus()));
        }
        let mut out = Self::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[(i + j) % n] += a.clone() * b.clone();
            }
        }
        Ok(out)
    }

    /// Multiplication by the monomial s^exp (a cyclic rotation).
    pub fn shift(&self, exp: usize) -> Self {
        let n = self.modulus();
        let exp = exp % n;
        let mut out = Self::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            out.coeffs[(i + exp) % n] = a.clone();
        }
        out
    }

    /// The aliasing sum `Σ_{j=0}^{N-1} s^{(kj) mod N}`, which equals
    /// `g·(1 + s^g + s^{2g} + ... + s^{N-g})` for `g = gcd(k mod N, N)`.
    pub fn power_sum(k: i64, modulus: usize) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        let n = modulus as i64;
        let k = k.rem_euclid(n) as usize;
        let g = if k == 0 { modulus } else { k.gcd(&modulus) };
        let mut out = Self::zero(modulus);
        let gc = T::from_usize(g).expect("gcd fits in coefficient type");
        let mut e = 0;
        loop {
            out.coeffs[e] = gc.clone();
            e += g;
            if e >= modulus {
                break;
            }
        }
        out
    }
}

/// Outcome of the divisor-pattern reduction: the recovered count together
/// with the `(index, subtracted value)` trace, one entry per loop iteration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction<T> {
    pub count: T,
    pub steps: Vec<(usize, T)>,
}

/// Strips multiples of the patterns `1 + s^i + s^{2i} + ... + s^{N-i}`
/// (each chosen `i` must divide N) from a scaled f̄ and returns the constant
/// term divided exactly by `scale`.
///
/// The subtraction index set includes 0, since the pattern contains the
/// constant term. Inputs that do not decompose this way are rejected with a
/// structural-violation error rather than silently mis-reduced.
pub fn reduce_to_count<T: Scalar>(f: &GroupRingElem<T>, scale: &T) -> Result<Reduction<T>> {
    if scale.is_zero() || *scale < T::zero() {
        return Err(Error::InvalidArgument("scale must be positive".into()));
    }
    let n = f.modulus();
    let mut coeffs = f.coeffs().to_vec();
    let mut steps = Vec::new();
    while let Some(i) = (1..n).find(|&i| !coeffs[i].is_zero()) {
        if !n.is_multiple_of(i) {
            return Err(Error::StructuralViolation(format!(
                "reduction picked index {i}, which does not divide the modulus {n}"
            )));
        }
        let v = coeffs[i].clone();
        let mut j = 0;
        while j < n {
            coeffs[j] -= v.clone();
            j += i;
        }
        steps.push((i, v));
        // The chosen index strictly increases, so at most N iterations run.
        debug_assert!(steps.len() <= n);
    }
    let (q, r) = coeffs[0].div_rem(scale);
    if !r.is_zero() || q < T::zero() {
        return Err(Error::StructuralViolation("reduced constant term is not a nonnegative multiple of the scale".to_string()));
    }
    Ok(Reduction { count: q, steps })
}

/// Polynomial in `t` of degree at most `degree_bound`, with group ring
/// coefficients; products are always truncated at the bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncPoly<T> {
    modulus: usize,
    coeffs: Vec<GroupRingElem<T>>,
}

impl<T: Scalar> TruncPoly<T> {
    pub fn zero(modulus: usize, degree_bound: u64) -> Self {
        let len = degree_bound as usize + 1;
        Self {
            modulus,
            coeffs: (0..len).map(|_| GroupRingElem::zero(modulus)).collect(),
        }
    }

    pub fn one(modulus: usize, degree_bound: u64) -> Self {
        let mut p = Self::zero(modulus, degree_bound);
        p.coeffs[0] = GroupRingElem::one(modulus);
        p
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn degree_bound(&self) -> u64 {
        self.coeffs.len() as u64 - 1
    }

    pub fn coeff(&self, k: u64) -> &GroupRingElem<T> {
        &self.coeffs[k as usize]
    }

    pub fn set_coeff(&mut self, k: u64, c: GroupRingElem<T>) {
        assert_eq!(c.modulus(), self.modulus);
        self.coeffs[k as usize] = c;
    }

    pub fn add_assign_poly(&mut self, other: &Self) -> Result<()> {
        self.check_compat(other)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            a.add_assign_elem(b)?;
        }
        Ok(())
    }

    /// Product truncated to the shared degree bound.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        let d = self.coeffs.len() - 1;
        let mut out = Self::zero(self.modulus, d as u64);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(d + 1 - i).enumerate() {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j].add_assign_elem(&a.mul(b)?)?;
            }
        }
        Ok(out)
    }

    /// Multiplies every coefficient by s^exp.
    pub fn mul_monomial(&self, exp: usize) -> Self {
        Self {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|c| c.shift(exp)).collect(),
        }
    }

    fn check_compat(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.coeffs.len() != other.coeffs.len() {
            return Err(Error::DegreeMismatch(
                self.degree_bound(),
                other.degree_bound(),
            ));
        }
        Ok(())
    }
}
