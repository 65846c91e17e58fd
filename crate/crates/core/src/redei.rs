//! 2-primary invariants of `Q(√Δ)`, `Δ = -p₁⋯p_t`, with `p_i ≡ 1 (mod 4)` for
//! `i < t` and `p_t ≡ 3 (mod 4)`.
//!
//! The ambiguous classes `𝔭₁, …, 𝔭_{t-1}` form a basis of `𝒞[2]`, identified
//! with the divisors of `p₁⋯p_{t-1}` under multiplication modulo squares
//! ([`Divisor`], addition is XOR of prime masks). The Rédei matrix
//! `M₄ = (ξ (p_i, Δ)_{p_j})` gives `r₄ = t - 1 - rank M₄`, and its kernel is
//! `V₀ = 𝒞[2] ∩ 2𝒞`.
//!
//! For the 8-rank every basis divisor `D` of `V₀` gets a square root through a
//! primitive solution of `x² = Δy² + 4Dz²`; the class of the square root has
//! norm `z`, and pairing it against `D'` with the genus character gives
//! `𝔅(D, D') = ξ ∏_{p | D'} (z, Δ)_p`. Then `r₈ = r₄ - rank 𝔅`, while the
//! diagonal `Q_𝔅(D) = 𝔅(D, D)` is also computable from quartic symbols as
//! `ξ (Δ/D | D)₄`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::gf2::{BitMatrix, BitVector, Gf2Error};
use crate::quadform::{predicted_nullities, Classification, QuadForm, QuadFormError};
use crate::symbols::{gcd, hilbert_odd, is_prime, quartic_symbol, xi, Sign, SymbolError};

/// Default cap on `|Δ|`; keeps every intermediate product well inside 128 bits.
pub const DEFAULT_MAX_ABS_DELTA: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("empty prime list")]
    Empty,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} appears more than once")]
    Duplicate(u64),
    #[error("prime {prime} at position {position} must be 1 mod 4")]
    NotOneModFour { prime: u64, position: usize },
    #[error("last prime {0} must be 3 mod 4")]
    LastNotThreeModFour(u64),
    #[error("|Δ| exceeds the bound {bound}")]
    DeltaTooLarge { bound: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RedeiError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    QuadForm(#[from] QuadFormError),
    #[error("divisor {0} is not in V0")]
    NotInV0(u64),
    #[error("no primitive solution of x^2 = {delta} y^2 + 4*{a} z^2 with z <= {bound}")]
    NoSolution { delta: i64, a: u64, bound: u64 },
    #[error("{a} does not divide {delta}")]
    NotADivisor { delta: i64, a: u64 },
    #[error("divisor mask {mask:#b} does not fit a field with {t} primes")]
    BadMask { mask: u64, t: usize },
}

/// A validated prime list `(p₁, …, p_t)` and `Δ = -p₁⋯p_t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    primes: Vec<u64>,
    delta: i64,
}

impl FieldSpec {
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn t(&self) -> usize {
        self.primes.len()
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn abs_delta(&self) -> u64 {
        self.delta.unsigned_abs()
    }

    /// `p₁, …, p_{t-1}`, the primes `≡ 1 (mod 4)`.
    pub fn split_primes(&self) -> &[u64] {
        &self.primes[..self.primes.len() - 1]
    }
}

pub fn validate_field(primes: &[u64]) -> Result<FieldSpec, FieldError> {
    validate_field_with_bound(primes, DEFAULT_MAX_ABS_DELTA)
}

pub fn validate_field_with_bound(primes: &[u64], max_abs_delta: u64) -> Result<FieldSpec, FieldError> {
    let (&last, rest) = primes.split_last().ok_or(FieldError::Empty)?;
    for (i, &p) in primes.iter().enumerate() {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if primes[..i].contains(&p) {
            return Err(FieldError::Duplicate(p));
        }
    }
    for (i, &p) in rest.iter().enumerate() {
        if p % 4 != 1 {
            return Err(FieldError::NotOneModFour { prime: p, position: i + 1 });
        }
    }
    if last % 4 != 3 {
        return Err(FieldError::LastNotThreeModFour(last));
    }
    let bound = max_abs_delta.min(i64::MAX as u64);
    let abs = primes
        .iter()
        .try_fold(1u64, |acc, &p| acc.checked_mul(p).filter(|&v| v <= bound))
        .ok_or(FieldError::DeltaTooLarge { bound })?;
    Ok(FieldSpec { primes: primes.to_vec(), delta: -(abs as i64) })
}

/// Factors `n` by trial division; `None` if `n < 2`.
fn factor(mut n: u64) -> Option<Vec<(u64, u32)>> {
    if n < 2 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Some(out)
}

/// The field with `|Δ| = abs_delta`, if `abs_delta` is squarefree with exactly
/// one prime factor `≡ 3 (mod 4)` and all others `≡ 1 (mod 4)`. The primes
/// `≡ 1 (mod 4)` come first, in increasing order.
pub fn field_for_abs_delta(abs_delta: u64) -> Option<FieldSpec> {
    if abs_delta % 4 != 3 {
        return None;
    }
    let factors = factor(abs_delta)?;
    if factors.iter().any(|&(_, e)| e > 1) {
        return None;
    }
    let mut ones: Vec<u64> = factors.iter().map(|f| f.0).filter(|p| p % 4 == 1).collect();
    let threes: Vec<u64> = factors.iter().map(|f| f.0).filter(|p| p % 4 == 3).collect();
    if threes.len() != 1 || ones.len() + 1 != factors.len() {
        return None;
    }
    ones.push(threes[0]);
    validate_field_with_bound(&ones, u64::MAX).ok()
}

/// Every valid field with `|Δ| ≤ max_abs_delta`, ascending in `|Δ|`,
/// optionally restricted to `t` primes.
pub fn fields_up_to(max_abs_delta: u64, t: Option<usize>) -> Vec<FieldSpec> {
    (3..=max_abs_delta).step_by(4).filter_map(field_for_abs_delta).filter(|f| t.is_none_or(|t| f.t() == t)).collect()
}

/// An element of `V`: a set of indices into `p₁, …, p_{t-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor {
    mask: u64,
    value: u64,
}

impl Divisor {
    pub fn one() -> Self {
        Divisor { mask: 0, value: 1 }
    }

    /// Bit `i` of `mask` selects `p_{i+1}`.
    pub fn from_mask(field: &FieldSpec, mask: u64) -> Result<Self, RedeiError> {
        let r = field.t() - 1;
        if r < 64 && mask >> r != 0 {
            return Err(RedeiError::BadMask { mask, t: field.t() });
        }
        let value =
            field.split_primes().iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).product();
        Ok(Divisor { mask, value })
    }

    /// The divisor with the given value, if it divides `p₁⋯p_{t-1}`.
    pub fn from_value(field: &FieldSpec, value: u64) -> Result<Self, RedeiError> {
        let mut rest = value;
        let mut mask = 0u64;
        for (i, &p) in field.split_primes().iter().enumerate() {
            if rest.is_multiple_of(p) {
                rest /= p;
                mask |= 1 << i;
            }
        }
        if rest != 1 || value == 0 {
            return Err(RedeiError::NotADivisor { delta: field.delta(), a: value });
        }
        Ok(Divisor { mask, value })
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn is_one(&self) -> bool {
        self.mask == 0
    }

    /// `q₁ · q₂ = q₁q₂ / gcd(q₁, q₂)²`.
    pub fn add(&self, other: &Divisor) -> Divisor {
        let g = gcd(self.value, other.value);
        Divisor { mask: self.mask ^ other.mask, value: (self.value / g) * (other.value / g) }
    }

    pub fn factors(&self, field: &FieldSpec) -> Vec<u64> {
        field.split_primes().iter().enumerate().filter(|(i, _)| self.mask >> i & 1 == 1).map(|(_, &p)| p).collect()
    }

    pub fn as_vector(&self, field: &FieldSpec) -> BitVector {
        BitVector::from_bits(field.t() - 1, self.mask).expect("t - 1 <= 64")
    }
}

fn hilbert_xi(a: i64, b: i64, p: u64) -> u8 {
    xi(hilbert_odd(a, b, p).expect("field primes are odd and Δ is nonzero"))
}

/// `M₄ = (ξ (p_i, Δ)_{p_j})` for `1 ≤ i, j ≤ t-1`.
pub fn redei_matrix(field: &FieldSpec) -> BitMatrix {
    redei_block(field, field.split_primes())
}

/// The full `t × t` matrix `(ξ (p_i, Δ)_{p_j})`, including the prime `p_t`.
pub fn extended_redei_matrix(field: &FieldSpec) -> BitMatrix {
    redei_block(field, field.primes())
}

fn redei_block(field: &FieldSpec, primes: &[u64]) -> BitMatrix {
    let n = primes.len();
    let mut m = BitMatrix::zeros(n, n).expect("t <= 64");
    for (i, &pi) in primes.iter().enumerate() {
        for (j, &pj) in primes.iter().enumerate() {
            m.set(i, j, hilbert_xi(pi as i64, field.delta(), pj) == 1).expect("in range");
        }
    }
    m
}

/// The 4-rank data of a field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedeiData {
    pub m4: BitMatrix,
    pub r2: usize,
    pub r4: usize,
    /// Basis of `V₀ = ker M₄`, canonical in the sense of [`BitMatrix::kernel_basis`].
    pub v0_basis: Vec<Divisor>,
}

pub fn four_rank(field: &FieldSpec) -> RedeiData {
    let m4 = redei_matrix(field);
    let r2 = field.t() - 1;
    let v0_basis: Vec<Divisor> = m4
        .kernel_basis()
        .iter()
        .map(|v| Divisor::from_mask(field, v.bits()).expect("kernel vector has t - 1 coordinates"))
        .collect();
    RedeiData { r4: r2 - m4.rank(), r2, m4, v0_basis }
}

/// `D ∈ V₀` iff `ξ (D, Δ)_{p_j} = 0` for every `j < t`.
pub fn in_v0(field: &FieldSpec, d: &Divisor) -> bool {
    field.split_primes().iter().all(|&p| hilbert_xi(d.value() as i64, field.delta(), p) == 0)
}

/// `Q_𝔅(D) = ξ (Δ/D | D)₄` for `D ∈ V₀`.
pub fn qb_quartic(field: &FieldSpec, d: &Divisor) -> Result<u8, RedeiError> {
    if d.is_one() {
        return Ok(0);
    }
    if !in_v0(field, d) {
        return Err(RedeiError::NotInV0(d.value()));
    }
    let cofactor = field.delta() / d.value() as i64;
    Ok(xi(quartic_symbol(cofactor, d.value(), &d.factors(field))?))
}

/// A solution of `x² = Δy² + 4az²` with `x, z > 0`, `y ≥ 0`, `gcd(x, y, z) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimitiveSolution {
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Search bound on `z`: one more than the largest norm of a reduced ideal.
pub fn solution_search_bound(delta: i64) -> u64 {
    isqrt(delta.unsigned_abs() as u128 / 3) as u64 + 1
}

/// Primitive solutions in search order (`z` ascending, then `y` ascending),
/// at most `limit` of them, with `z` up to [`solution_search_bound`].
pub fn primitive_solutions(delta: i64, a: u64, limit: usize) -> Result<Vec<PrimitiveSolution>, RedeiError> {
    let abs = delta.unsigned_abs();
    if delta >= 0 || a == 0 || !abs.is_multiple_of(a) {
        return Err(RedeiError::NotADivisor { delta, a });
    }
    let abs = abs as u128;
    let bound = solution_search_bound(delta);
    let mut out = Vec::new();
    for z in 1..=bound {
        let target = 4 * a as u128 * (z as u128) * (z as u128);
        let mut y: u128 = 0;
        while abs * y * y < target {
            let rest = target - abs * y * y;
            let x = isqrt(rest);
            if x * x == rest && gcd(gcd(x as u64, y as u64), z) == 1 {
                out.push(PrimitiveSolution { x: x as u64, y: y as u64, z });
                if out.len() >= limit {
                    return Ok(out);
                }
            }
            y += 1;
        }
    }
    Ok(out)
}

/// The first primitive solution of `x² = Δy² + 4az²` in search order.
///
/// Existence is guaranteed when the class of norm `a` lies in `2𝒞`; a miss
/// within the bound is reported as [`RedeiError::NoSolution`].
pub fn find_primitive_solution(delta: i64, a: u64) -> Result<PrimitiveSolution, RedeiError> {
    primitive_solutions(delta, a, 1)?.pop().ok_or(RedeiError::NoSolution {
        delta,
        a,
        bound: solution_search_bound(delta),
    })
}

/// `ξ ∏_{p | D} (z, Δ)_p`: the genus character of `D` on a square root of
/// norm `z`.
pub fn pairing_value(field: &FieldSpec, z: u64, d: &Divisor) -> u8 {
    let s: Sign = d
        .factors(field)
        .iter()
        .map(|&p| hilbert_odd(z as i64, field.delta(), p).expect("odd prime, nonzero args"))
        .product();
    xi(s)
}

/// `𝔅(D_row, D_col)`, taking the square root of `D_row` from
/// [`find_primitive_solution`].
pub fn b_entry(field: &FieldSpec, row: &Divisor, col: &Divisor) -> Result<u8, RedeiError> {
    for d in [row, col] {
        if !in_v0(field, d) {
            return Err(RedeiError::NotInV0(d.value()));
        }
    }
    let sol = find_primitive_solution(field.delta(), row.value())?;
    Ok(pairing_value(field, sol.z, col))
}

/// `𝔅` on the given basis of `V₀`; entry `(i, j)` is `𝔅(basis_i, basis_j)`.
pub fn b_matrix(field: &FieldSpec, basis: &[Divisor]) -> Result<BitMatrix, RedeiError> {
    let r = basis.len();
    let mut m = BitMatrix::zeros(r, r)?;
    for (i, row) in basis.iter().enumerate() {
        if !in_v0(field, row) {
            return Err(RedeiError::NotInV0(row.value()));
        }
        let z = find_primitive_solution(field.delta(), row.value())?.z;
        for (j, col) in basis.iter().enumerate() {
            m.set(i, j, pairing_value(field, z, col) == 1)?;
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EightRankReport {
    pub redei: RedeiData,
    /// `Q_𝔅` on `GF(2)^{r₄}`, coordinates indexed by `redei.v0_basis`.
    pub qb: QuadForm,
    pub b_matrix: BitMatrix,
    pub classification: Classification,
    pub r8: usize,
    pub predicted: BTreeSet<usize>,
    pub rho: usize,
    /// `⌊log₂ #Q_𝔅⁻¹(0)⌋`.
    pub log2_zero_bound: usize,
}

impl EightRankReport {
    pub fn r2(&self) -> usize {
        self.redei.r2
    }

    pub fn r4(&self) -> usize {
        self.redei.r4
    }

    /// `Q_𝔅` on the basis divisors.
    pub fn qb_diagonal(&self) -> Vec<u8> {
        self.qb.diagonal()
    }
}

pub fn eight_rank_report(field: &FieldSpec) -> Result<EightRankReport, RedeiError> {
    let redei = four_rank(field);
    let b = b_matrix(field, &redei.v0_basis)?;
    let qb = QuadForm::from_bilinear(&b)?;
    let classification = qb.classify();
    let r8 = redei.r4 - b.rank();
    Ok(EightRankReport {
        predicted: predicted_nullities(&qb),
        rho: classification.rho,
        log2_zero_bound: classification.log2_zero_count(),
        r8,
        redei,
        qb,
        b_matrix: b,
        classification,
    })
}

/// Every element of `V₀`, as `(coordinates in v0_basis, divisor)`.
pub fn v0_elements(field: &FieldSpec, basis: &[Divisor]) -> Vec<(BitVector, Divisor)> {
    let r = basis.len();
    (0..1u64 << r)
        .map(|code| {
            let d = basis
                .iter()
                .enumerate()
                .filter(|(i, _)| code >> i & 1 == 1)
                .fold(Divisor::one(), |acc, (_, b)| acc.add(b));
            debug_assert!(in_v0(field, &d));
            (BitVector::from_bits(r, code).expect("r <= 64"), d)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: &[u64]) -> FieldSpec {
        validate_field(p).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(field(&[5, 3]).delta(), -15);
        let f = field(&[3]);
        assert_eq!((f.delta(), f.t()), (-3, 1));
        assert_eq!(validate_field(&[5, 7, 3]), Err(FieldError::NotOneModFour { prime: 7, position: 2 }));
        assert_eq!(validate_field(&[5, 13]), Err(FieldError::LastNotThreeModFour(13)));
        assert_eq!(validate_field(&[5, 9, 3]), Err(FieldError::NotPrime(9)));
        assert_eq!(validate_field(&[5, 5, 3]), Err(FieldError::Duplicate(5)));
        assert_eq!(validate_field(&[]), Err(FieldError::Empty));
        assert_eq!(validate_field(&[2, 3]), Err(FieldError::NotOneModFour { prime: 2, position: 1 }));
        assert_eq!(validate_field_with_bound(&[5, 89, 11], 4894), Err(FieldError::DeltaTooLarge { bound: 4894 }));
        assert!(validate_field_with_bound(&[5, 89, 11], 4895).is_ok());
        assert!(f.delta().rem_euclid(4) == 1);
    }

    #[test]
    fn field_enumeration() {
        let deltas: Vec<i64> = fields_up_to(100, Some(2)).iter().map(|f| f.delta()).collect();
        assert_eq!(deltas, vec![-15, -35, -39, -51, -55, -87, -91, -95]);
        let all: Vec<i64> = fields_up_to(3, None).iter().map(|f| f.delta()).collect();
        assert_eq!(all, vec![-3]);
        assert_eq!(field_for_abs_delta(4895).unwrap().primes(), &[5, 89, 11]);
        assert!(field_for_abs_delta(27).is_none());
        assert!(field_for_abs_delta(3 * 7 * 11).is_none());
    }

    #[test]
    fn redei_matrix_examples() {
        assert_eq!(redei_matrix(&field(&[5, 3])), BitMatrix::from_rows(&[[1u8]]).unwrap());
        assert_eq!(redei_matrix(&field(&[13, 3])), BitMatrix::from_rows(&[[0u8]]).unwrap());
        assert_eq!(redei_matrix(&field(&[3])), BitMatrix::zeros(0, 0).unwrap());
    }

    #[test]
    fn four_rank_examples() {
        let d = four_rank(&field(&[5, 3]));
        assert_eq!((d.r2, d.r4, d.v0_basis.len()), (1, 0, 0));
        let d = four_rank(&field(&[13, 3]));
        assert_eq!((d.r2, d.r4), (1, 1));
        assert_eq!(d.v0_basis.iter().map(Divisor::value).collect::<Vec<_>>(), vec![13]);
        let d = four_rank(&field(&[3]));
        assert_eq!((d.r2, d.r4), (0, 0));
    }

    #[test]
    fn divisor_arithmetic() {
        let f = field(&[5, 13, 17, 3]);
        let a = Divisor::from_value(&f, 65).unwrap();
        let b = Divisor::from_value(&f, 85).unwrap();
        assert_eq!(a.add(&b).value(), 13 * 17);
        assert_eq!(a.add(&b).mask(), 0b110);
        assert_eq!(a.add(&a), Divisor::one());
        assert!(Divisor::from_value(&f, 3).is_err());
        assert!(Divisor::from_mask(&f, 0b1000).is_err());
    }

    #[test]
    fn quartic_diagonal_examples() {
        assert_eq!(qb_quartic(&field(&[13, 3]), &Divisor::one()), Ok(0));
        let f = field(&[13, 3]);
        assert_eq!(qb_quartic(&f, &Divisor::from_value(&f, 13).unwrap()), Ok(1));
        let f = field(&[5, 3]);
        assert_eq!(qb_quartic(&f, &Divisor::from_value(&f, 5).unwrap()), Err(RedeiError::NotInV0(5)));
    }

    #[test]
    fn quartic_diagonal_for_4895() {
        let f = field(&[5, 89, 11]);
        let d = Divisor::from_value(&f, 5 * 89).unwrap();
        // ξ((-11|5)₄ (-11|89)₄): -11 ≡ 4 (mod 5), 4¹ ≡ -1; (-11)^22 mod 89 by hand-checked pow_mod.
        let s5 = crate::symbols::pow_mod(4, 1, 5);
        let s89 = crate::symbols::pow_mod(78, 22, 89);
        let expected = u8::from(s5 == 4) ^ u8::from(s89 == 88);
        assert_eq!(qb_quartic(&f, &d), Ok(expected));
    }

    #[test]
    fn primitive_solution_examples() {
        assert_eq!(find_primitive_solution(-39, 1), Ok(PrimitiveSolution { x: 2, y: 0, z: 1 }));
        assert_eq!(find_primitive_solution(-39, 13), Ok(PrimitiveSolution { x: 13, y: 1, z: 2 }));
        assert_eq!(find_primitive_solution(-15, 1), Ok(PrimitiveSolution { x: 2, y: 0, z: 1 }));
        assert_eq!(find_primitive_solution(-15, 7), Err(RedeiError::NotADivisor { delta: -15, a: 7 }));
        // 5 is not a square class for Δ = -15.
        assert!(matches!(find_primitive_solution(-15, 5), Err(RedeiError::NoSolution { .. })));
    }

    #[test]
    fn b_entry_examples() {
        let f = field(&[13, 3]);
        let d13 = Divisor::from_value(&f, 13).unwrap();
        assert_eq!(b_entry(&f, &d13, &d13), Ok(1));
        assert_eq!(b_entry(&f, &d13, &Divisor::one()), Ok(0));
    }

    #[test]
    fn eight_rank_examples() {
        let r = eight_rank_report(&field(&[5, 3])).unwrap();
        assert_eq!((r.r4(), r.r8, r.predicted.clone()), (0, 0, BTreeSet::from([0])));
        let r = eight_rank_report(&field(&[13, 3])).unwrap();
        assert_eq!((r.r4(), r.r8), (1, 0));
        assert_eq!(r.qb, QuadForm::i());
        assert_eq!(r.predicted, BTreeSet::from([0]));
        let r = eight_rank_report(&field(&[3])).unwrap();
        assert_eq!((r.r2(), r.r4(), r.r8, r.rho), (0, 0, 0, 0));
    }

    #[test]
    fn eight_rank_for_4895() {
        let r = eight_rank_report(&field(&[5, 89, 11])).unwrap();
        assert_eq!((r.r2(), r.r4(), r.r8), (2, 2, 1));
        assert_eq!(r.qb.classify().form_type, crate::quadform::FormType::Type1);
        assert_eq!(r.predicted, BTreeSet::from([0, 1]));
    }
}
