//! Positive definite binary quadratic forms and the form class group.
//!
//! This is the brute-force ground truth: enumerate reduced forms of
//! discriminant `Δ < 0`, compose them, and read the 2-power ranks of the
//! class group from the sizes of the iterated squaring images.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::redei::Divisor;
use crate::symbols::{jacobi, Sign, SymbolError};

/// Initial half-width of the window searched for a coprime represented value.
pub const GENUS_SEARCH_START: i64 = 20;
/// Hard cap for that window after doubling.
pub const GENUS_SEARCH_CAP: i64 = 320;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BqfError {
    #[error("discriminant {0} must be negative and 1 mod 4")]
    BadDiscriminant(i64),
    #[error("form {0} does not have discriminant {1}")]
    WrongDiscriminant(BQForm, i64),
    #[error("form {0} is not in the class group table")]
    UnknownForm(BQForm),
    #[error("no value coprime to {delta} represented by {form} within |x|, |y| <= {cap}")]
    NoCoprimeValue { form: BQForm, delta: i64, cap: i64 },
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}

/// The form `ax² + bxy + cy²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BQForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for BQForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

fn gcd_i(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `(g, u, v)` with `ua + vb = g = gcd(a, b) ≥ 0`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

impl BQForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        BQForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// The principal form `(1, 1, (1 - Δ)/4)`.
    pub fn identity(delta: i64) -> Self {
        BQForm { a: 1, b: 1, c: (1 - delta) / 4 }
    }

    pub fn is_primitive(&self) -> bool {
        gcd_i(gcd_i(self.a as i128, self.b as i128), self.c as i128) == 1
    }

    pub fn is_reduced(&self) -> bool {
        self.a > 0
            && self.b.abs() <= self.a
            && self.a <= self.c
            && (self.b >= 0 || (self.b.abs() != self.a && self.a != self.c))
    }

    pub fn evaluate(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    /// The reduced form equivalent to `self` (positive definite input).
    pub fn reduce(&self) -> BQForm {
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        loop {
            // Normalize b into (-a, a].
            if b > a || b <= -a {
                let two_a = 2 * a;
                let mut r = b.rem_euclid(two_a);
                if r > a {
                    r -= two_a;
                }
                let shift = (r - b) / two_a;
                c += shift * (b + a * shift);
                b = r;
            }
            if a > c {
                (a, b, c) = (c, -b, a);
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            break;
        }
        BQForm { a: a as i64, b: b as i64, c: c as i64 }
    }

    /// `(a, -b, c)`, reduced.
    pub fn inverse(&self) -> BQForm {
        BQForm { a: self.a, b: -self.b, c: self.c }.reduce()
    }
}

/// All reduced primitive forms of discriminant `Δ`, sorted by `(a, b)`.
pub fn reduced_forms(delta: i64) -> Result<Vec<BQForm>, BqfError> {
    if delta >= 0 || delta.rem_euclid(4) != 1 {
        return Err(BqfError::BadDiscriminant(delta));
    }
    let abs = delta.unsigned_abs() as i64;
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= abs {
        let mut b = -a + 1;
        while b <= a {
            let num = b * b - delta;
            if b.rem_euclid(2) == 1 && num % (4 * a) == 0 {
                let f = BQForm { a, b, c: num / (4 * a) };
                if f.is_reduced() && f.is_primitive() {
                    out.push(f);
                }
            }
            b += 1;
        }
        a += 1;
    }
    Ok(out)
}

/// Gauss composition followed by reduction.
///
/// With `e = (b₁ + b₂)/2`, `g = gcd(a₁, a₂, e) = u a₁ + v a₂ + w e`, the
/// composite is `(a₁a₂/g², B, ·)` with
/// `B = (u a₁ b₂ + v a₂ b₁ + w (b₁b₂ + Δ)/2) / g  (mod 2a₁a₂/g²)`.
pub fn compose(f: &BQForm, g: &BQForm, delta: i64) -> BQForm {
    let (a1, b1) = (f.a as i128, f.b as i128);
    let (a2, b2) = (g.a as i128, g.b as i128);
    let d = delta as i128;
    let e = (b1 + b2) / 2;
    let (g1, u1, v1) = ext_gcd(a1, a2);
    let (gg, s, w) = ext_gcd(g1, e);
    let (u, v) = (s * u1, s * v1);
    let a3 = a1 * a2 / (gg * gg);
    let num = u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + d) / 2;
    let b3 = (num / gg).rem_euclid(2 * a3);
    let c3 = (b3 * b3 - d) / (4 * a3);
    debug_assert_eq!(b3 * b3 - 4 * a3 * c3, d);
    BQForm { a: a3 as i64, b: b3 as i64, c: c3 as i64 }.reduce()
}

/// The form class group of one discriminant, with a full composition table.
#[derive(Debug, Clone)]
pub struct ClassGroupTable {
    delta: i64,
    forms: Vec<BQForm>,
    index: HashMap<BQForm, usize>,
    table: Vec<u32>,
    identity: usize,
}

impl ClassGroupTable {
    pub fn build(delta: i64) -> Result<Self, BqfError> {
        let forms = reduced_forms(delta)?;
        let index: HashMap<BQForm, usize> = forms.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let h = forms.len();
        let mut table = vec![0u32; h * h];
        for i in 0..h {
            for j in i..h {
                let k = index[&compose(&forms[i], &forms[j], delta)] as u32;
                table[i * h + j] = k;
                table[j * h + i] = k;
            }
        }
        let identity = index[&BQForm::identity(delta)];
        Ok(ClassGroupTable { delta, forms, index, table, identity })
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    /// Class number.
    pub fn h(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[BQForm] {
        &self.forms
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn index_of(&self, f: &BQForm) -> Result<usize, BqfError> {
        if f.discriminant() != self.delta {
            return Err(BqfError::WrongDiscriminant(*f, self.delta));
        }
        self.index.get(&f.reduce()).copied().ok_or(BqfError::UnknownForm(*f))
    }

    pub fn compose_idx(&self, i: usize, j: usize) -> usize {
        self.table[i * self.h() + j] as usize
    }

    pub fn square_idx(&self, i: usize) -> usize {
        self.compose_idx(i, i)
    }

    pub fn inverse_idx(&self, i: usize) -> usize {
        self.index[&self.forms[i].inverse()]
    }

    pub fn pow_idx(&self, i: usize, mut e: u64) -> usize {
        let (mut acc, mut base) = (self.identity, i);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.compose_idx(acc, base);
            }
            base = self.compose_idx(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn order_idx(&self, i: usize) -> usize {
        let mut k = 1;
        let mut x = i;
        while x != self.identity {
            x = self.compose_idx(x, i);
            k += 1;
        }
        k
    }
}

/// `r_{2^k}` for `k = 1, 2, …` until the first zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoPowerRanks {
    ranks: Vec<usize>,
}

impl TwoPowerRanks {
    /// `r_{2^k}`; zero past the stored sequence.
    pub fn rank(&self, k: usize) -> usize {
        assert!(k >= 1);
        self.ranks.get(k - 1).copied().unwrap_or(0)
    }

    pub fn r2(&self) -> usize {
        self.rank(1)
    }

    pub fn r4(&self) -> usize {
        self.rank(2)
    }

    pub fn r8(&self) -> usize {
        self.rank(3)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.ranks
    }

    /// Orders of the cyclic factors of the 2-Sylow subgroup, ascending.
    pub fn elementary_divisors_2part(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for k in 1..=self.ranks.len() {
            let count = self.rank(k) - self.rank(k + 1);
            out.extend(std::iter::repeat_n(1u64 << k, count));
        }
        out
    }
}

/// `r_{2^k} = log₂(|S_{k-1}| / |S_k|)` with `S_j = {x^{2^j}}`.
pub fn two_power_ranks(table: &ClassGroupTable) -> TwoPowerRanks {
    let h = table.h();
    let mut current: Vec<bool> = vec![true; h];
    let mut size = h;
    let mut ranks = Vec::new();
    loop {
        let mut next = vec![false; h];
        for (i, _) in current.iter().enumerate().filter(|(_, &m)| m) {
            next[table.square_idx(i)] = true;
        }
        let next_size = next.iter().filter(|&&m| m).count();
        let ratio = size / next_size;
        debug_assert!(ratio.is_power_of_two() && ratio * next_size == size);
        let r = ratio.trailing_zeros() as usize;
        if r == 0 {
            break;
        }
        ranks.push(r);
        current = next;
        size = next_size;
    }
    TwoPowerRanks { ranks }
}

/// Smallest positive value coprime to `Δ` represented by `f` with
/// `|x|, |y| ≤ window`, doubling the window up to [`GENUS_SEARCH_CAP`].
pub fn coprime_represented_value(f: &BQForm, delta: i64) -> Result<i64, BqfError> {
    let mut window = GENUS_SEARCH_START;
    loop {
        let best = (-window..=window)
            .flat_map(|x| (-window..=window).map(move |y| (x, y)))
            .map(|(x, y)| f.evaluate(x, y))
            .filter(|&m| m > 0 && gcd_i(m as i128, delta as i128) == 1)
            .min();
        if let Some(m) = best {
            return Ok(m);
        }
        if window >= GENUS_SEARCH_CAP {
            return Err(BqfError::NoCoprimeValue { form: *f, delta, cap: window });
        }
        window *= 2;
    }
}

/// The genus character `χ_D(f) = (m | D)` for `m` a value of `f` coprime to `Δ`.
pub fn genus_character(f: &BQForm, d: &Divisor, delta: i64) -> Result<Sign, BqfError> {
    let m = coprime_represented_value(f, delta)?;
    Ok(jacobi(m, d.value())?)
}
