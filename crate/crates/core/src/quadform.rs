//! Quadratic forms on GF(2)^n.
//!
//! A form is stored as an upper-triangular coefficient matrix `U` with
//! `Q(x) = Σ_{i≤j} U_ij x_i x_j`. A bilinear form `B` induces `Q_B(x) = B(x, x)`,
//! whose coefficients are `U_ii = B_ii` and `U_ij = B_ij + B_ji` for `i < j`.
//! Consequently `Q_B = Q` exactly when `diag(B)` equals the diagonal of `U`
//! and `B + Bᵀ` equals the polar form of `Q`.
//!
//! Classification follows the usual picture: the polar form
//! `∇(x, y) = Q(x + y) + Q(x) + Q(y)` is alternating with radical `W⊥`, `Q` is
//! linear on `W⊥` with image of dimension `d ∈ {0, 1}` (the defect), and the
//! rank is `2k + d` where `2k = n - dim W⊥`. The type (and with it the Arf
//! invariant) is decided by which value `Q` takes more often.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::gf2::{BitMatrix, BitVector, Gf2Error};

/// Largest dimension accepted by [`isotropy_index_bruteforce`].
pub const MAX_BRUTEFORCE_DIM: usize = 8;
/// Largest dimension accepted by [`enumerate_bilinear_nullities`].
pub const MAX_ENUMERATION_DIM: usize = 4;
/// Largest dimension accepted by [`enumerate_bilinear_nullities_up_to`].
pub const MAX_EXTENDED_ENUMERATION_DIM: usize = 5;
/// Forms up to this dimension are classified by counting zeros directly.
pub const MAX_CLASSIFY_DIM: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadFormError {
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error("coefficient matrix must be square and upper triangular")]
    NotUpperTriangular,
    #[error("dimension {dim} exceeds the limit {limit} for this operation")]
    DimensionTooLarge { dim: usize, limit: usize },
    #[error("isotropy index {rho} exceeds dimension {r}")]
    RhoExceedsDimension { rho: usize, r: usize },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadForm {
    coeffs: BitMatrix,
}

impl QuadForm {
    /// Builds a form from an upper-triangular coefficient matrix.
    pub fn new(coeffs: BitMatrix) -> Result<Self, QuadFormError> {
        if !coeffs.is_square() {
            return Err(QuadFormError::NotUpperTriangular);
        }
        for (i, &w) in coeffs.row_words().iter().enumerate() {
            if w & ((1u64 << i) - 1) != 0 {
                return Err(QuadFormError::NotUpperTriangular);
            }
        }
        Ok(QuadForm { coeffs })
    }

    pub fn from_upper_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self, QuadFormError> {
        Self::new(BitMatrix::from_rows(rows)?)
    }

    /// Builds a form from its diagonal and its polar form (alternating).
    pub fn from_diagonal_and_polar(diag: &[u8], polar: &BitMatrix) -> Result<Self, QuadFormError> {
        let n = diag.len();
        if polar.rows() != n || !polar.is_alternating() {
            return Err(QuadFormError::NotUpperTriangular);
        }
        let mut u = BitMatrix::zeros(n, n)?;
        for (i, &d) in diag.iter().enumerate() {
            u.set(i, i, d == 1)?;
            for j in i + 1..n {
                u.set(i, j, polar.bit(i, j) == 1)?;
            }
        }
        Ok(QuadForm { coeffs: u })
    }

    /// The form `Q_B(x) = B(x, x)` induced by a square matrix `B`.
    pub fn from_bilinear(b: &BitMatrix) -> Result<Self, QuadFormError> {
        if !b.is_square() {
            return Err(QuadFormError::Gf2(Gf2Error::DimensionMismatch { expected: b.rows(), found: b.cols() }));
        }
        let n = b.rows();
        let mut u = BitMatrix::zeros(n, n)?;
        for i in 0..n {
            u.set(i, i, b.bit(i, i) == 1)?;
            for j in i + 1..n {
                u.set(i, j, b.bit(i, j) ^ b.bit(j, i) == 1)?;
            }
        }
        Ok(QuadForm { coeffs: u })
    }

    /// `O_n`, the zero form.
    pub fn zero(n: usize) -> Self {
        QuadForm { coeffs: BitMatrix::zeros(n, n).expect("dimension within limit") }
    }

    /// `I(x) = x₁²` on GF(2)^1.
    pub fn i() -> Self {
        Self::from_upper_rows(&[[1u8]]).expect("valid")
    }

    /// `X(x) = x₁x₂`.
    pub fn x() -> Self {
        Self::from_upper_rows(&[[0u8, 1], [0, 0]]).expect("valid")
    }

    /// `Y(x) = x₁² + x₁x₂ + x₂²`.
    pub fn y() -> Self {
        Self::from_upper_rows(&[[1u8, 1], [0, 1]]).expect("valid")
    }

    pub fn dim(&self) -> usize {
        self.coeffs.rows()
    }

    pub fn coeffs(&self) -> &BitMatrix {
        &self.coeffs
    }

    pub fn diagonal(&self) -> Vec<u8> {
        self.coeffs.diagonal()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// Evaluates `Q` at the packed vector `x` (bit `i` = coordinate `i`).
    #[inline]
    pub fn eval_bits(&self, x: u64) -> u8 {
        let mut acc = 0u32;
        for (i, &w) in self.coeffs.row_words().iter().enumerate() {
            if x >> i & 1 == 1 {
                acc ^= (w & x).count_ones();
            }
        }
        (acc & 1) as u8
    }

    pub fn evaluate(&self, x: &BitVector) -> Result<u8, QuadFormError> {
        if x.len() != self.dim() {
            return Err(Gf2Error::DimensionMismatch { expected: self.dim(), found: x.len() }.into());
        }
        Ok(self.eval_bits(x.bits()))
    }

    /// The alternating matrix `U + Uᵀ` of `∇(x, y) = Q(x+y) + Q(x) + Q(y)`.
    pub fn polar_form(&self) -> BitMatrix {
        let mut p = self.coeffs.add(&self.coeffs.transpose()).expect("square");
        for i in 0..self.dim() {
            p.set(i, i, false).expect("in range");
        }
        p
    }

    /// Basis of the radical `W⊥ = {x : ∇(x, y) = 0 for all y}`.
    pub fn radical(&self) -> Vec<BitVector> {
        self.polar_form().kernel_basis()
    }

    /// Number of zeros of `Q`, counted over all `2^n` vectors.
    pub fn zero_count(&self) -> u64 {
        let n = self.dim();
        assert!(n <= MAX_CLASSIFY_DIM, "zero count of a {n}-dimensional form");
        (0..1u64 << n).filter(|&x| self.eval_bits(x) == 0).count() as u64
    }

    pub fn classify(&self) -> Classification {
        let n = self.dim();
        let radical = self.radical();
        let defect = u8::from(radical.iter().any(|v| self.eval_bits(v.bits()) == 1)) as usize;
        let rank = (n - radical.len()) + defect;
        let k = (rank - defect) / 2;
        let zero_count = self.zero_count();
        let half = 1u64 << n >> 1;
        let form_type = if n == 0 {
            FormType::Type21
        } else {
            match zero_count.cmp(&half) {
                std::cmp::Ordering::Equal => FormType::Type1,
                std::cmp::Ordering::Greater => FormType::Type21,
                std::cmp::Ordering::Less => FormType::Type22,
            }
        };
        let (arf, rho) = match form_type {
            FormType::Type1 => (None, k + (n - rank)),
            FormType::Type21 => (Some(0), k + (n - rank)),
            FormType::Type22 => (Some(1), k - 1 + (n - rank)),
        };
        Classification { n, rank, defect, k, form_type, arf, rho, zero_count }
    }

    /// Block-diagonal sum `Q₁ ⊕ Q₂` on `GF(2)^{n₁+n₂}`.
    pub fn direct_sum(&self, other: &QuadForm) -> Result<QuadForm, QuadFormError> {
        let (n1, n2) = (self.dim(), other.dim());
        let mut words: Vec<u64> = self.coeffs.row_words().to_vec();
        words.extend(other.coeffs.row_words().iter().map(|w| w << n1));
        Ok(QuadForm { coeffs: BitMatrix::from_row_words(n1 + n2, n1 + n2, &words)? })
    }

    /// True when `Q_B = Q`, compared through diagonal and polar form.
    pub fn is_induced_by(&self, b: &BitMatrix) -> bool {
        b.is_square() && b.rows() == self.dim() && QuadForm::from_bilinear(b).is_ok_and(|qb| qb == *self)
    }

    /// The form `x ↦ Q(Mx)`.
    pub fn compose_linear(&self, m: &BitMatrix) -> Result<QuadForm, QuadFormError> {
        if m.rows() != self.dim() {
            return Err(Gf2Error::DimensionMismatch { expected: self.dim(), found: m.rows() }.into());
        }
        // Q(Mx) = B(Mx, Mx) = x (Mᵀ U M) x.
        let pulled = m.transpose().mul(&self.coeffs)?.mul(m)?;
        QuadForm::from_bilinear(&pulled)
    }
}

impl fmt::Debug for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        let mut terms = Vec::new();
        for i in 0..n {
            for j in i..n {
                if self.coeffs.bit(i, j) == 1 {
                    terms.push(if i == j { format!("x{}^2", i + 1) } else { format!("x{}x{}", i + 1, j + 1) });
                }
            }
        }
        if terms.is_empty() {
            write!(f, "QuadForm[n={n}](0)")
        } else {
            write!(f, "QuadForm[n={n}]({})", terms.join(" + "))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormType {
    /// Odd rank: `X^k ⊕ I ⊕ O`.
    Type1,
    /// Even rank, zeros in the majority: `X^k ⊕ O`.
    Type21,
    /// Even rank, ones in the majority: `X^{k-1} ⊕ Y ⊕ O`.
    Type22,
}

impl fmt::Display for FormType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormType::Type1 => "Type 1",
            FormType::Type21 => "Type 2.1",
            FormType::Type22 => "Type 2.2",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub n: usize,
    pub rank: usize,
    pub defect: usize,
    pub k: usize,
    pub form_type: FormType,
    /// `None` for odd rank, where the Arf invariant is not defined.
    pub arf: Option<u8>,
    /// Isotropy index.
    pub rho: usize,
    pub zero_count: u64,
}

impl Classification {
    /// `⌊log₂ #Q⁻¹(0)⌋`.
    pub fn log2_zero_count(&self) -> usize {
        (63 - self.zero_count.leading_zeros()) as usize
    }

    /// Whether the form is isometric to `X`.
    pub fn is_x(&self) -> bool {
        self.n == 2 && self.rank == 2 && self.form_type == FormType::Type21
    }
}

/// Maximal dimension of a subspace on which `Q` vanishes, found by growing
/// totally isotropic subspaces one vector at a time.
///
/// Subspaces are kept as membership bitmaps over all `2^n` vectors, and a
/// candidate extension is accepted only after evaluating `Q` on every new
/// element of the span.
pub fn isotropy_index_bruteforce(q: &QuadForm) -> Result<usize, QuadFormError> {
    let n = q.dim();
    if n > MAX_BRUTEFORCE_DIM {
        return Err(QuadFormError::DimensionTooLarge { dim: n, limit: MAX_BRUTEFORCE_DIM });
    }
    type Members = [u64; 4];
    let size = 1usize << n;
    let zeros: Vec<bool> = (0..size as u64).map(|x| q.eval_bits(x) == 0).collect();
    let contains = |m: &Members, v: usize| m[v >> 6] >> (v & 63) & 1 == 1;

    let mut level: HashSet<Members> = HashSet::new();
    let mut origin = [0u64; 4];
    origin[0] = 1;
    level.insert(origin);
    let mut dim = 0;
    loop {
        let mut next: HashSet<Members> = HashSet::new();
        for members in &level {
            let elems: Vec<usize> = (0..size).filter(|&v| contains(members, v)).collect();
            for v in 1..size {
                if contains(members, v) || !zeros[v] {
                    continue;
                }
                if elems.iter().all(|&s| zeros[s ^ v]) {
                    let mut grown = *members;
                    for &s in &elems {
                        let w = s ^ v;
                        grown[w >> 6] |= 1 << (w & 63);
                    }
                    next.insert(grown);
                }
            }
        }
        if next.is_empty() {
            return Ok(dim);
        }
        level = next;
        dim += 1;
    }
}

/// `S(ρ, r)`: the integers `0 ≤ a ≤ ρ`, restricted to `a ≡ r (mod 2)` when
/// `ρ = r`, and equal to `{1}` for the form `X`.
pub fn nullity_set(rho: usize, r: usize, is_x: bool) -> Result<BTreeSet<usize>, QuadFormError> {
    if rho > r {
        return Err(QuadFormError::RhoExceedsDimension { rho, r });
    }
    if is_x {
        return Ok(BTreeSet::from([1]));
    }
    Ok((0..=rho).filter(|a| rho != r || a % 2 == r % 2).collect())
}

/// Nullities predicted for bilinear forms inducing `Q`, from its classification.
pub fn predicted_nullities(q: &QuadForm) -> BTreeSet<usize> {
    let c = q.classify();
    nullity_set(c.rho, c.n, c.is_x()).expect("isotropy index never exceeds dimension")
}

/// `{n - rank(B) : Q_B = Q}` by exhaustive enumeration of all `2^{n²}`
/// matrices `B`, for `n ≤ 4`.
pub fn enumerate_bilinear_nullities(q: &QuadForm) -> Result<BTreeSet<usize>, QuadFormError> {
    enumerate_with_limit(q, MAX_ENUMERATION_DIM)
}

/// As [`enumerate_bilinear_nullities`], also accepting `n = 5` (`2^25`
/// candidates) when `allow_five` is set.
pub fn enumerate_bilinear_nullities_up_to(q: &QuadForm, allow_five: bool) -> Result<BTreeSet<usize>, QuadFormError> {
    let limit = if allow_five { MAX_EXTENDED_ENUMERATION_DIM } else { MAX_ENUMERATION_DIM };
    enumerate_with_limit(q, limit)
}

fn enumerate_with_limit(q: &QuadForm, limit: usize) -> Result<BTreeSet<usize>, QuadFormError> {
    let n = q.dim();
    if n > limit {
        return Err(QuadFormError::DimensionTooLarge { dim: n, limit });
    }
    let diag = q.diagonal();
    let polar = q.polar_form();
    let row_mask = (1u64 << n) - 1;
    let mut found = BTreeSet::new();
    let mut words = vec![0u64; n];
    for code in 0..1u64 << (n * n) {
        for (i, w) in words.iter_mut().enumerate() {
            *w = code >> (i * n) & row_mask;
        }
        let b = BitMatrix::from_row_words(n, n, &words)?;
        if b.diagonal() != diag || b.add(&b.transpose())? != polar {
            continue;
        }
        found.insert(n - b.rank());
    }
    Ok(found)
}

/// A change of basis bringing a form to its canonical polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalBasis {
    /// Invertible matrix whose columns are the new basis vectors.
    pub change_of_basis: BitMatrix,
    /// `x ↦ Q(change_of_basis · x)`; equal to [`canonical_form`] of the class.
    pub canonical: QuadForm,
}

/// The canonical polynomial for a class:
/// `Σ_{i≤k} x_i x_{k+i} + x_{2k+1}²` (Type 1),
/// `Σ_{i≤k} x_i x_{k+i}` (Type 2.1),
/// `Σ_{i<k} x_i x_{k+i} + x_k² + x_k x_{2k} + x_{2k}²` (Type 2.2).
pub fn canonical_form(n: usize, form_type: FormType, k: usize) -> Result<QuadForm, QuadFormError> {
    let used = 2 * k + usize::from(form_type == FormType::Type1);
    if used > n || (form_type == FormType::Type22 && k == 0) {
        return Err(QuadFormError::DimensionTooLarge { dim: used, limit: n });
    }
    let mut u = BitMatrix::zeros(n, n)?;
    for i in 0..k {
        u.set(i, k + i, true)?;
    }
    match form_type {
        FormType::Type1 => u.set(2 * k, 2 * k, true)?,
        FormType::Type21 => {}
        FormType::Type22 => {
            u.set(k - 1, k - 1, true)?;
            u.set(2 * k - 1, 2 * k - 1, true)?;
        }
    }
    QuadForm::new(u)
}

/// Constructs a basis in which `Q` is its canonical polynomial.
///
/// Symplectic Gram–Schmidt on the polar form splits off hyperbolic pairs and
/// the radical. Pairs are then normalized: a pair with a zero value becomes an
/// `X`, a pair with `Q = 1` on both ends is an `Y`, an `Y` absorbs a radical
/// vector with `Q = 1` when one exists, and two `Y`s recombine into `X ⊕ X`.
pub fn canonical_basis(q: &QuadForm) -> CanonicalBasis {
    let n = q.dim();
    let polar = q.polar_form();
    let pair = |x: u64, y: u64| -> u64 {
        let px = BitVector::from_bits(n, x).expect("dim");
        let py = BitVector::from_bits(n, y).expect("dim");
        polar.bilinear(&px, &py).expect("dim") as u64
    };
    let val = |x: u64| q.eval_bits(x);

    let mut work: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
    let mut pairs: Vec<(u64, u64)> = Vec::new();
    let mut radical: Vec<u64> = Vec::new();
    while let Some(e) = work.pop() {
        let Some(pos) = work.iter().position(|&f| pair(e, f) == 1) else {
            radical.push(e);
            continue;
        };
        let f = work.swap_remove(pos);
        for w in work.iter_mut() {
            let (we, wf) = (pair(*w, e), pair(*w, f));
            if wf == 1 {
                *w ^= e;
            }
            if we == 1 {
                *w ^= f;
            }
        }
        pairs.push((e, f));
    }

    // Radical: Q is linear there; keep at most one vector with Q = 1.
    let anisotropic = radical.iter().position(|&r| val(r) == 1).map(|i| radical.remove(i));
    if let Some(r0) = anisotropic {
        for r in radical.iter_mut() {
            if val(*r) == 1 {
                *r ^= r0;
            }
        }
    }

    let mut hyperbolic = Vec::new();
    let mut anisotropic_pairs = Vec::new();
    for (mut e, mut f) in pairs {
        if val(e) == 1 && val(f) == 1 {
            match anisotropic {
                Some(r0) => e ^= r0,
                None => {
                    anisotropic_pairs.push((e, f));
                    continue;
                }
            }
        }
        if val(e) == 1 {
            e ^= f;
        } else if val(f) == 1 {
            f ^= e;
        }
        hyperbolic.push((e, f));
    }
    while anisotropic_pairs.len() >= 2 {
        let (e2, f2) = anisotropic_pairs.pop().expect("len >= 2");
        let (e1, f1) = anisotropic_pairs.pop().expect("len >= 2");
        let a = e1 ^ e2;
        let b = f1 ^ e1 ^ e2;
        hyperbolic.push((a, b));
        // Projection of (e2, f2) onto the complement of span(a, b).
        let (e, f) = (e2, f2 ^ f1);
        hyperbolic.push((e ^ f, f));
    }

    let k_x = hyperbolic.len();
    let mut columns: Vec<u64> = Vec::with_capacity(n);
    let (form_type, k);
    if let Some((e, f)) = anisotropic_pairs.pop() {
        form_type = FormType::Type22;
        k = k_x + 1;
        columns.extend(hyperbolic.iter().map(|p| p.0));
        columns.push(e);
        columns.extend(hyperbolic.iter().map(|p| p.1));
        columns.push(f);
    } else {
        k = k_x;
        columns.extend(hyperbolic.iter().map(|p| p.0));
        columns.extend(hyperbolic.iter().map(|p| p.1));
        if let Some(r0) = anisotropic {
            form_type = FormType::Type1;
            columns.push(r0);
        } else {
            form_type = FormType::Type21;
        }
    }
    columns.extend(radical);
    let cols: Vec<BitVector> = columns.iter().map(|&c| BitVector::from_bits(n, c).expect("dim")).collect();
    let change_of_basis = BitMatrix::from_columns(n, &cols).expect("dim");
    let canonical = canonical_form(n, form_type, k).expect("consistent class");
    CanonicalBasis { change_of_basis, canonical }
}
