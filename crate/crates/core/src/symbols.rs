//! Residue symbols: Jacobi, rational quartic, odd-prime Hilbert.
//!
//! All symbols take values in [`Sign`]; [`xi`] maps them to GF(2) with
//! `+1 ↦ 0` and `-1 ↦ 1`.

use std::ops::Mul;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("{a} and {n} are not coprime")]
    NotCoprime { a: i64, n: u64 },
    #[error("modulus {0} must be odd and positive")]
    BadModulus(u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("argument of the Hilbert symbol must be nonzero")]
    ZeroArgument,
    #[error("quartic symbol factor {0} is not a prime congruent to 1 mod 4")]
    BadQuarticFactor(u64),
    #[error("factors {factors:?} are not distinct primes with product {d}")]
    FactorMismatch { d: u64, factors: Vec<u64> },
    #[error("{a} is not a quadratic residue mod {p}")]
    NonResidue { a: i64, p: u64 },
}

/// An element of `{+1, -1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// `(-1)^e` for `e ∈ {0, 1}` (higher bits ignored).
    pub fn from_parity(e: u64) -> Sign {
        if e & 1 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn xi(self) -> u8 {
        xi(self)
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl std::iter::Product for Sign {
    fn product<I: Iterator<Item = Sign>>(iter: I) -> Sign {
        iter.fold(Sign::Plus, Mul::mul)
    }
}

/// The isomorphism `{±1} → F₂`: `ξ(1) = 0`, `ξ(-1) = 1`.
pub fn xi(s: Sign) -> u8 {
    match s {
        Sign::Plus => 0,
        Sign::Minus => 1,
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// `a mod m` in `[0, m)` for signed `a`.
#[inline]
pub fn reduce_signed(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Deterministic Miller–Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    // The first twelve primes are a deterministic witness set below 3.3e24.
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Jacobi symbol `(a | n)` for odd positive `n`; `a` may be negative.
pub fn jacobi(a: i64, n: u64) -> Result<Sign, SymbolError> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(SymbolError::BadModulus(n));
    }
    let mut a_red = reduce_signed(a, n);
    let mut n_red = n;
    let mut sign = Sign::Plus;
    while a_red != 0 {
        let twos = a_red.trailing_zeros();
        a_red >>= twos;
        if twos & 1 == 1 && matches!(n_red % 8, 3 | 5) {
            sign = sign * Sign::Minus;
        }
        if a_red % 4 == 3 && n_red % 4 == 3 {
            sign = sign * Sign::Minus;
        }
        (a_red, n_red) = (n_red % a_red, a_red);
    }
    if n_red == 1 {
        Ok(sign)
    } else {
        Err(SymbolError::NotCoprime { a, n })
    }
}

/// Rational quartic residue symbol `(a | D)₄ = ∏ (a | p)₄`, where
/// `(a | p)₄ ≡ a^{(p-1)/4} (mod p)`.
///
/// `factors` must be the distinct primes of `D`, each `≡ 1 (mod 4)`, and `a`
/// must be a nonzero quadratic residue modulo each of them. `D = 1` takes an
/// empty factor list and gives `+1`.
pub fn quartic_symbol(a: i64, d: u64, factors: &[u64]) -> Result<Sign, SymbolError> {
    let mut product: u128 = 1;
    for (i, &p) in factors.iter().enumerate() {
        if p % 4 != 1 || !is_prime(p) {
            return Err(SymbolError::BadQuarticFactor(p));
        }
        if factors[..i].contains(&p) {
            return Err(SymbolError::FactorMismatch { d, factors: factors.to_vec() });
        }
        product = product.saturating_mul(p as u128);
    }
    if product != d as u128 {
        return Err(SymbolError::FactorMismatch { d, factors: factors.to_vec() });
    }
    factors.iter().try_fold(Sign::Plus, |acc, &p| {
        let a_red = reduce_signed(a, p);
        if a_red == 0 {
            return Err(SymbolError::NotCoprime { a, n: p });
        }
        match pow_mod(a_red, (p - 1) / 4, p) {
            1 => Ok(acc),
            v if v == p - 1 => Ok(acc * Sign::Minus),
            _ => Err(SymbolError::NonResidue { a, p }),
        }
    })
}

/// Splits `a = p^v · a'` with `p ∤ a'`.
fn split_valuation(mut a: i64, p: u64) -> (u32, i64) {
    let p = p as i64;
    let mut v = 0;
    while a % p == 0 {
        a /= p;
        v += 1;
    }
    (v, a)
}

/// Hilbert symbol `(a, b)_p` at an odd prime `p`:
/// `(-1)^{αβ(p-1)/2} (a'|p)^β (b'|p)^α` with `a = p^α a'`, `b = p^β b'`.
pub fn hilbert_odd(a: i64, b: i64, p: u64) -> Result<Sign, SymbolError> {
    if p == 2 || !is_prime(p) || p > i64::MAX as u64 {
        return Err(SymbolError::NotOddPrime(p));
    }
    if a == 0 || b == 0 {
        return Err(SymbolError::ZeroArgument);
    }
    let (alpha, a_unit) = split_valuation(a, p);
    let (beta, b_unit) = split_valuation(b, p);
    let mut s = Sign::from_parity(((p - 1) / 2) * (alpha as u64) * (beta as u64));
    if beta & 1 == 1 {
        s = s * jacobi(a_unit, p)?;
    }
    if alpha & 1 == 1 {
        s = s * jacobi(b_unit, p)?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_division_is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    fn euler(a: i64, p: u64) -> Sign {
        match pow_mod(reduce_signed(a, p), (p - 1) / 2, p) {
            1 => Sign::Plus,
            v => {
                assert_eq!(v, p - 1);
                Sign::Minus
            }
        }
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(2));
        assert!(!is_prime(1));
        assert!(!is_prime(4895));
        assert!(is_prime(18446744073709551557)); // largest 64-bit prime
        assert!(!is_prime(3215031751)); // strong pseudoprime to bases 2,3,5,7
        assert!(!is_prime(u64::MAX));
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n), trial_division_is_prime(n), "n = {n}");
        }
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(1, 15), Ok(Sign::Plus));
        assert_eq!(jacobi(2, 15), Ok(Sign::Plus));
        assert_eq!(jacobi(-3, 5), Ok(Sign::Minus));
        assert_eq!(jacobi(3, 15), Err(SymbolError::NotCoprime { a: 3, n: 15 }));
        assert_eq!(jacobi(3, 8), Err(SymbolError::BadModulus(8)));
        assert_eq!(jacobi(0, 1), Ok(Sign::Plus));
    }

    #[test]
    fn jacobi_euler_criterion() {
        for p in (3..200).filter(|&p| trial_division_is_prime(p)) {
            for a in 1..p as i64 {
                assert_eq!(jacobi(a, p).unwrap(), euler(a, p), "({a}|{p})");
                assert_eq!(jacobi(a - p as i64, p).unwrap(), euler(a, p));
            }
        }
    }

    #[test]
    fn reciprocity_for_one_mod_four() {
        let primes: Vec<u64> = (5..400).filter(|&p| p % 4 == 1 && is_prime(p)).collect();
        for &p in &primes {
            for &q in &primes {
                if p != q {
                    assert_eq!(jacobi(p as i64, q), jacobi(q as i64, p));
                }
            }
        }
    }

    #[test]
    fn quartic_examples() {
        assert_eq!(quartic_symbol(1, 65, &[5, 13]), Ok(Sign::Plus));
        assert_eq!(quartic_symbol(4, 5, &[5]), Ok(Sign::Minus));
        assert_eq!(quartic_symbol(-3, 13, &[13]), Ok(Sign::Minus));
        assert_eq!(quartic_symbol(7, 1, &[]), Ok(Sign::Plus));
    }

    #[test]
    fn quartic_errors() {
        assert_eq!(quartic_symbol(2, 5, &[5]), Err(SymbolError::NonResidue { a: 2, p: 5 }));
        assert_eq!(quartic_symbol(2, 7, &[7]), Err(SymbolError::BadQuarticFactor(7)));
        assert!(matches!(quartic_symbol(1, 65, &[5]), Err(SymbolError::FactorMismatch { .. })));
        assert!(matches!(quartic_symbol(1, 25, &[5, 5]), Err(SymbolError::FactorMismatch { .. })));
        assert_eq!(quartic_symbol(10, 5, &[5]), Err(SymbolError::NotCoprime { a: 10, n: 5 }));
    }

    #[test]
    fn quartic_of_square_is_legendre() {
        for p in (5..300u64).filter(|&p| p % 4 == 1 && is_prime(p)) {
            for a in 1..p as i64 {
                let sq = (a * a) % p as i64;
                assert_eq!(quartic_symbol(sq, p, &[p]).unwrap(), jacobi(a, p).unwrap());
            }
        }
    }

    #[test]
    fn fourth_powers_have_trivial_quartic_symbol() {
        let (d, factors) = (5 * 13 * 17, [5u64, 13, 17]);
        for x in 1..d as i64 {
            if gcd(x as u64, d) == 1 {
                let a = (x * x % d as i64) * (x * x % d as i64) % d as i64;
                assert_eq!(quartic_symbol(a, d, &factors), Ok(Sign::Plus));
            }
        }
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert_odd(5, 3, 7), Ok(Sign::Plus));
        assert_eq!(hilbert_odd(7, 7, 7), Ok(Sign::Minus));
        assert_eq!(hilbert_odd(5, -15, 5), Ok(Sign::Minus));
        assert_eq!(hilbert_odd(0, 3, 5), Err(SymbolError::ZeroArgument));
        assert_eq!(hilbert_odd(3, 3, 2), Err(SymbolError::NotOddPrime(2)));
        assert_eq!(hilbert_odd(3, 3, 9), Err(SymbolError::NotOddPrime(9)));
    }

    #[test]
    fn xi_is_a_homomorphism() {
        for s in [Sign::Plus, Sign::Minus] {
            for t in [Sign::Plus, Sign::Minus] {
                assert_eq!(xi(s * t), (xi(s) + xi(t)) % 2);
            }
        }
        assert_eq!(xi(Sign::Plus), 0);
        assert_eq!(xi(Sign::Minus), 1);
    }

    proptest! {
        #[test]
        fn jacobi_multiplicative(a in -5000i64..5000, b in -5000i64..5000, n in (1u64..2000).prop_map(|k| 2 * k + 1)) {
            let (ja, jb, jab) = (jacobi(a, n), jacobi(b, n), jacobi(a * b, n));
            match (ja, jb) {
                (Ok(x), Ok(y)) => prop_assert_eq!(jab, Ok(x * y)),
                _ => prop_assert!(jab.is_err()),
            }
        }

        #[test]
        fn jacobi_multiplicative_in_modulus(a in -5000i64..5000, m in (0u64..300).prop_map(|k| 2 * k + 1), n in (0u64..300).prop_map(|k| 2 * k + 1)) {
            if let (Ok(x), Ok(y)) = (jacobi(a, m), jacobi(a, n)) {
                prop_assert_eq!(jacobi(a, m * n), Ok(x * y));
            }
        }

        #[test]
        fn quartic_multiplicative(x in 1i64..10_000, y in 1i64..10_000) {
            let (d, factors) = (5 * 13 * 29, [5u64, 13, 29]);
            // Squares are residues mod every factor, so both sides are defined when coprime.
            let (a, b) = (x * x, y * y);
            if let (Ok(s), Ok(t)) = (quartic_symbol(a, d, &factors), quartic_symbol(b, d, &factors)) {
                prop_assert_eq!(quartic_symbol((a * b) % d as i64, d, &factors), Ok(s * t));
            }
        }

        #[test]
        fn hilbert_symmetric_and_bimultiplicative(a in -60i64..60, b in -60i64..60, c in -60i64..60, pi in 0usize..8) {
            let p = [3u64, 5, 7, 11, 13, 17, 19, 23][pi];
            prop_assume!(a != 0 && b != 0 && c != 0);
            prop_assert_eq!(hilbert_odd(a, b, p), hilbert_odd(b, a, p));
            let ab = hilbert_odd(a, b, p).unwrap();
            let ac = hilbert_odd(a, c, p).unwrap();
            prop_assert_eq!(hilbert_odd(a, b * c, p).unwrap(), ab * ac);
        }
    }
}
