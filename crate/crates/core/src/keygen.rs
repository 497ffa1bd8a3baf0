//! Key generation.
//!
//! The secret key is `{S(D), G, T(D, D^-1)}` and the public key is
//! `G'(D) = S(D) G P(D, D^-1)` with `P = T^-1`. The mask is built as
//! `T = Gamma * Delta` where `Delta = [[A, beta A], [A, A]]`, `Gamma` is a
//! permutation and `A` is an upper-triangular Laurent matrix whose column
//! `c` carries the single power `D^(j_c)`.
//!
//! # Sampling order
//!
//! All randomness comes from one `ChaCha20Rng` seeded with [`KeyParams::seed`],
//! consumed in this order:
//!
//! 1. `alpha`: the nonzero field elements are shuffled and the first `n` kept.
//! 2. `x`: `n` uniform nonzero multipliers.
//! 3. `A`: the diagonal exponent multiset is shuffled, then `n/2` nonzero
//!    diagonal scalars, then the off-diagonal slots row by row (exponents in
//!    increasing order). Each slot with `c` eligible columns is uniform over
//!    `c(q-1) + 1` outcomes, one of which is "absent".
//! 4. `beta`: uniform in `F \ {0, 1}`.
//! 5. `Gamma`: a uniform shuffle of `0..n`.
//! 6. `S`: for each diagonal block the `D^mu` coefficient by rejection until
//!    invertible, then the blocks of `D^(mu+1) .. D^nu` uniformly.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::field::{Field, FieldError};
use crate::grs::{GrsCode, GrsError};
use crate::laurent::{AlgebraError, LaurentMatrix};
use crate::matrix::{Matrix, SparseRows};

/// Row-weight bound of the mask. Every nonzero row of every `T_j` has exactly
/// this many nonzero entries.
pub const RHO: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KeygenError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Grs(#[from] GrsError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("the mask needs at least 3 field elements")]
    FieldTooSmall,
    #[error("n = {0} must be even")]
    OddLength(usize),
    #[error("need nu >= mu (got mu = {mu}, nu = {nu})")]
    BadExponents { mu: usize, nu: usize },
    #[error("expected {expected} column counts, got {got}")]
    CountLength { expected: usize, got: usize },
    #[error("column counts sum to {sum}, expected n = {n}")]
    CountSum { sum: usize, n: usize },
    #[error("column count d_{0} is odd")]
    OddCount(i32),
    #[error("degree balance fails: negative side {neg}, positive side {pos}")]
    DegreeBalance { neg: usize, pos: usize },
    #[error("block count r = {r} does not divide k = {k}")]
    BlockCount { r: usize, k: usize },
    #[error("beta must lie outside {{0, 1}}")]
    BadBeta,
    #[error("not a permutation of 0..{0}")]
    NotPermutation(usize),
    #[error("diagonal arrangement does not match the column counts")]
    BadArrangement,
    #[error("matrix is not an admissible mask: {0}")]
    BadMask(&'static str),
    #[error("S_mu is singular")]
    SingularS,
}

/// Parameters of a key. `d[j + mu]` is the number of columns of `T` that carry
/// the power `D^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyParams {
    pub p: u32,
    pub m: u32,
    pub n: usize,
    pub k: usize,
    pub mu: usize,
    pub nu: usize,
    pub d: Vec<usize>,
    /// Number of diagonal blocks of `S(D)`; 1 means a dense `S(D)`.
    pub s_blocks: usize,
    pub seed: u64,
}

impl KeyParams {
    pub fn new(p: u32, m: u32, n: usize, k: usize, mu: usize, nu: usize, d: Vec<usize>) -> KeyParams {
        KeyParams { p, m, n, k, mu, nu, d, s_blocks: 1, seed: 0 }
    }

    pub fn with_s_blocks(mut self, r: usize) -> KeyParams {
        self.s_blocks = r;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> KeyParams {
        self.seed = seed;
        self
    }

    pub fn field(&self) -> Result<Field, KeygenError> {
        Ok(Field::new(self.p, self.m)?)
    }

    pub fn q(&self) -> u64 {
        u64::from(self.p).pow(self.m)
    }

    /// GRS correction radius `floor((n - k) / 2)`.
    pub fn t(&self) -> usize {
        self.n.saturating_sub(self.k) / 2
    }

    /// Window error budget `floor(t / rho)`.
    pub fn err_budget(&self) -> usize {
        self.t() / RHO
    }

    pub fn n_half(&self) -> usize {
        self.n / 2
    }

    /// `d_j / 2` for `j = -mu ..= mu`.
    pub fn d_half(&self) -> Vec<usize> {
        self.d.iter().map(|&v| v / 2).collect()
    }

    /// `d_j` for a signed exponent; zero outside `[-mu, mu]`.
    pub fn d_at(&self, j: i32) -> usize {
        let idx = j + self.mu as i32;
        if idx < 0 {
            return 0;
        }
        self.d.get(idx as usize).copied().unwrap_or(0)
    }

    /// Block size `k / r` of `S(D)`.
    pub fn block_size(&self) -> usize {
        self.k / self.s_blocks.max(1)
    }

    /// Checks everything except the field (use [`KeyParams::field`] for that).
    pub fn validate(&self) -> Result<(), KeygenError> {
        let field = self.field()?;
        if field.order() < 3 {
            return Err(KeygenError::FieldTooSmall);
        }
        if self.n % 2 != 0 {
            return Err(KeygenError::OddLength(self.n));
        }
        if self.k == 0 || self.k >= self.n {
            return Err(GrsError::BadDimension { n: self.n, k: self.k }.into());
        }
        if self.n as u64 > self.q() - 1 {
            return Err(GrsError::TooLong { n: self.n, max: self.q() as usize - 1 }.into());
        }
        if self.nu < self.mu {
            return Err(KeygenError::BadExponents { mu: self.mu, nu: self.nu });
        }
        validate_counts(&self.d, self.mu, self.n)?;
        if self.s_blocks == 0 || self.k % self.s_blocks != 0 {
            return Err(KeygenError::BlockCount { r: self.s_blocks, k: self.k });
        }
        Ok(())
    }
}

/// Checks length, sum, parity and the degree balance
/// `sum_{j<0} |j| d_j = sum_{j>0} j d_j`.
pub fn validate_counts(d: &[usize], mu: usize, n: usize) -> Result<(), KeygenError> {
    if d.len() != 2 * mu + 1 {
        return Err(KeygenError::CountLength { expected: 2 * mu + 1, got: d.len() });
    }
    let sum: usize = d.iter().sum();
    if sum != n {
        return Err(KeygenError::CountSum { sum, n });
    }
    if let Some(i) = d.iter().position(|v| v % 2 != 0) {
        return Err(KeygenError::OddCount(i as i32 - mu as i32));
    }
    let (mut neg, mut pos) = (0, 0);
    for (i, &v) in d.iter().enumerate() {
        let j = i as i32 - mu as i32;
        if j < 0 {
            neg += j.unsigned_abs() as usize * v;
        } else {
            pos += j as usize * v;
        }
    }
    if neg != pos {
        return Err(KeygenError::DegreeBalance { neg, pos });
    }
    Ok(())
}

/// Symmetric counts with `d_j = d_-j`, spreading `n` as evenly as parity allows.
pub fn symmetric_counts(n: usize, mu: usize) -> Vec<usize> {
    let len = 2 * mu + 1;
    let pairs = n / 2;
    // each exponent pair (j, -j) must take the same count, so share in units of 2
    let mut half = vec![0usize; len];
    let mut left = pairs;
    let base = pairs / len;
    for h in half.iter_mut() {
        *h = base;
    }
    left -= base * len;
    if left % 2 == 1 {
        half[mu] += 1;
        left -= 1;
    }
    let mut j = 1;
    while left > 0 {
        half[mu - j] += 1;
        half[mu + j] += 1;
        left -= 2;
        j = j % mu.max(1) + 1;
    }
    half.into_iter().map(|h| 2 * h).collect()
}

/// The matrix `A = A_c * diag(D^(j_1), ..., D^(j_n))` with `A_c` a constant
/// upper-triangular matrix with nonzero diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskBlock {
    field: Field,
    coeffs: Matrix,
    exps: Vec<i32>,
}

impl MaskBlock {
    pub fn new(field: &Field, coeffs: Matrix, exps: Vec<i32>) -> Result<MaskBlock, KeygenError> {
        let n = exps.len();
        if coeffs.rows() != n || coeffs.cols() != n {
            return Err(KeygenError::BadMask("dimension"));
        }
        for i in 0..n {
            if coeffs.get(i, i) == 0 {
                return Err(KeygenError::BadMask("zero diagonal entry"));
            }
            if (0..i).any(|c| coeffs.get(i, c) != 0) {
                return Err(KeygenError::BadMask("not upper triangular"));
            }
        }
        Ok(MaskBlock { field: field.clone(), coeffs, exps })
    }

    /// Recovers the constant part and column exponents from a Laurent matrix.
    pub fn from_laurent(a: &LaurentMatrix) -> Result<MaskBlock, KeygenError> {
        let n = a.rows();
        if a.cols() != n {
            return Err(KeygenError::BadMask("not square"));
        }
        let mut coeffs = Matrix::zeros(n, n);
        let mut exps = vec![0i32; n];
        for c in 0..n {
            let mut exp = None;
            for (idx, m) in a.coeff_matrices().iter().enumerate() {
                let j = a.min_exp() + idx as i32;
                for r in 0..n {
                    let v = m.get(r, c);
                    if v == 0 {
                        continue;
                    }
                    if exp.is_some_and(|e| e != j) {
                        return Err(KeygenError::BadMask("column mixes powers of D"));
                    }
                    exp = Some(j);
                    coeffs.set(r, c, v);
                }
            }
            exps[c] = exp.ok_or(KeygenError::BadMask("zero column"))?;
        }
        MaskBlock::new(a.field(), coeffs, exps)
    }

    pub fn size(&self) -> usize {
        self.exps.len()
    }

    pub fn coeffs(&self) -> &Matrix {
        &self.coeffs
    }

    /// Diagonal exponents `j_i`.
    pub fn exponents(&self) -> &[i32] {
        &self.exps
    }

    /// `det A = prod beta_i`.
    pub fn det(&self) -> u16 {
        (0..self.size()).fold(1, |acc, i| self.field.mul(acc, self.coeffs.get(i, i)))
    }

    /// True when no row holds two off-diagonal entries with the same power,
    /// nor one with the power of its own diagonal entry.
    pub fn is_admissible(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| {
            let mut used = Vec::new();
            for c in i + 1..n {
                if self.coeffs.get(i, c) == 0 {
                    continue;
                }
                let j = self.exps[c];
                if j == self.exps[i] || used.contains(&j) {
                    return false;
                }
                used.push(j);
            }
            true
        })
    }

    pub fn to_laurent(&self) -> LaurentMatrix {
        let n = self.size();
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(crate::laurent::LaurentPoly::monomial(self.coeffs.get(r, c), self.exps[c]));
            }
        }
        LaurentMatrix::from_entries(&self.field, n, n, &entries)
    }

    /// `A^-1 = diag(D^(-j_i)) * A_c^-1`, with `A_c^-1` by back-substitution.
    pub fn inverse(&self) -> LaurentMatrix {
        let f = &self.field;
        let n = self.size();
        let mut inv = Matrix::zeros(n, n);
        // column by column: solve A_c x = e_c from the bottom up
        for c in 0..n {
            for i in (0..=c).rev() {
                let mut acc = if i == c { 1 } else { 0 };
                for l in i + 1..=c {
                    let a = self.coeffs.get(i, l);
                    if a != 0 {
                        acc = f.sub(acc, f.mul(a, inv.get(l, c)));
                    }
                }
                inv.set(i, c, f.mul(acc, f.inv_nonzero(self.coeffs.get(i, i))));
            }
        }
        let lo = self.exps.iter().map(|&j| -j).min().unwrap_or(0);
        let hi = self.exps.iter().map(|&j| -j).max().unwrap_or(-1);
        let coeffs = (lo..=hi)
            .map(|e| {
                let mut m = Matrix::zeros(n, n);
                for i in (0..n).filter(|&i| -self.exps[i] == e) {
                    m.row_mut(i).copy_from_slice(inv.row(i));
                }
                m
            })
            .collect();
        LaurentMatrix::from_coeffs(f, n, n, lo, coeffs)
    }
}

/// Samples `A` for the given half-counts `d_half[j + mu]`.
pub fn sample_a(field: &Field, d_half: &[usize], mu: usize, rng: &mut ChaCha20Rng) -> MaskBlock {
    let q = field.order() as u16;
    let mut exps: Vec<i32> = Vec::new();
    for (idx, &cnt) in d_half.iter().enumerate() {
        exps.extend(std::iter::repeat_n(idx as i32 - mu as i32, cnt));
    }
    exps.shuffle(rng);
    let n = exps.len();
    let mut coeffs = Matrix::zeros(n, n);
    for i in 0..n {
        coeffs.set(i, i, rng.random_range(1..q));
    }
    for i in 0..n {
        for j in -(mu as i32)..=mu as i32 {
            if j == exps[i] {
                continue;
            }
            let eligible: Vec<usize> = (i + 1..n).filter(|&c| exps[c] == j).collect();
            if eligible.is_empty() {
                continue;
            }
            let outcomes = eligible.len() as u32 * (u32::from(q) - 1) + 1;
            let v = rng.random_range(0..outcomes);
            if v == 0 {
                continue;
            }
            let v = v - 1;
            let col = eligible[(v / (u32::from(q) - 1)) as usize];
            coeffs.set(i, col, (v % (u32::from(q) - 1)) as u16 + 1);
        }
    }
    MaskBlock { field: field.clone(), coeffs, exps }
}

fn check_permutation(gamma: &[usize]) -> Result<(), KeygenError> {
    let n = gamma.len();
    let mut seen = vec![false; n];
    for &g in gamma {
        if g >= n || seen[g] {
            return Err(KeygenError::NotPermutation(n));
        }
        seen[g] = true;
    }
    Ok(())
}

pub fn invert_permutation(gamma: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; gamma.len()];
    for (i, &g) in gamma.iter().enumerate() {
        inv[g] = i;
    }
    inv
}

/// `Delta = [[A, beta A], [A, A]]`.
pub fn build_delta(a: &LaurentMatrix, beta: u16) -> Result<LaurentMatrix, KeygenError> {
    if beta == 0 || beta == 1 {
        return Err(KeygenError::BadBeta);
    }
    Ok(LaurentMatrix::block2x2(a, &a.scale(beta), a, a)?)
}

/// `T = Gamma * Delta`: row `i` of `T` is row `gamma[i]` of `Delta`.
pub fn build_t(a: &MaskBlock, beta: u16, gamma: &[usize]) -> Result<LaurentMatrix, KeygenError> {
    check_permutation(gamma)?;
    if gamma.len() != 2 * a.size() {
        return Err(KeygenError::NotPermutation(2 * a.size()));
    }
    Ok(build_delta(&a.to_laurent(), beta)?.permute_rows(gamma))
}

/// `P = Delta^-1 * Gamma^T`, using the closed-form block inverse of `Delta`.
pub fn invert_t(a: &MaskBlock, beta: u16, gamma: &[usize]) -> Result<LaurentMatrix, KeygenError> {
    check_permutation(gamma)?;
    if beta == 0 || beta == 1 {
        return Err(KeygenError::BadBeta);
    }
    let f = &a.field;
    let ainv = a.inverse();
    let c1 = f.inv_nonzero(f.sub(1, beta));
    let c3 = f.inv_nonzero(f.sub(beta, 1));
    let c2 = f.mul(beta, c3);
    let dinv = LaurentMatrix::block2x2(&ainv.scale(c1), &ainv.scale(c2), &ainv.scale(c3), &ainv.scale(c1))?;
    Ok(dinv.permute_cols(gamma))
}

/// Samples `S(D) = sum_{i=mu}^{nu} S_i D^i`, block diagonal with `s_blocks` blocks.
pub fn sample_s(field: &Field, k: usize, mu: usize, nu: usize, s_blocks: usize, rng: &mut ChaCha20Rng) -> LaurentMatrix {
    let q = field.order() as u16;
    let eps = k / s_blocks;
    let mut coeffs = vec![Matrix::zeros(k, k); nu - mu + 1];
    let random_block = |rng: &mut ChaCha20Rng| {
        let data = (0..eps * eps).map(|_| rng.random_range(0..q)).collect();
        Matrix::from_vec(eps, eps, data)
    };
    for b in 0..s_blocks {
        let blk = loop {
            let cand = random_block(rng);
            if cand.rank(field) == eps {
                break cand;
            }
        };
        coeffs[0].set_block(b * eps, b * eps, &blk);
    }
    for coeff in coeffs.iter_mut().skip(1) {
        for b in 0..s_blocks {
            coeff.set_block(b * eps, b * eps, &random_block(rng));
        }
    }
    LaurentMatrix::from_coeffs(field, k, k, mu as i32, coeffs)
}

/// The public key `{G'(D), floor(t / rho), mu}` plus the optional truncation
/// parameter of the alternative encryption mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    g_prime: LaurentMatrix,
    err_budget: usize,
    mu: usize,
    nu: usize,
    sigma: Option<usize>,
}

impl PublicKey {
    /// Checks that `G'` has no negative powers and degree at most `mu + nu`.
    pub fn new(g_prime: LaurentMatrix, err_budget: usize, mu: usize, nu: usize, sigma: Option<usize>) -> Result<PublicKey, KeygenError> {
        if !g_prime.is_polynomial() || g_prime.max_exp() > (mu + nu) as i32 {
            return Err(KeygenError::BadMask("public generator degree out of range"));
        }
        Ok(PublicKey { g_prime, err_budget, mu, nu, sigma })
    }

    pub fn g_prime(&self) -> &LaurentMatrix {
        &self.g_prime
    }

    pub fn field(&self) -> &Field {
        self.g_prime.field()
    }

    pub fn k(&self) -> usize {
        self.g_prime.rows()
    }

    pub fn n(&self) -> usize {
        self.g_prime.cols()
    }

    /// Maximum error weight in any window of `2 mu + 1` consecutive blocks.
    pub fn err_budget(&self) -> usize {
        self.err_budget
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    /// Memory of the encoder: `G'` has powers `0 ..= mu + nu`.
    pub fn memory(&self) -> usize {
        self.mu + self.nu
    }

    pub fn sigma(&self) -> Option<usize> {
        self.sigma
    }

    pub fn with_sigma(mut self, sigma: Option<usize>) -> PublicKey {
        self.sigma = sigma;
        self
    }

    /// Public key size in bits: `ceil(log2 q) * n * k * (mu + nu + 1)`, which
    /// is `m n k (mu + nu + 1)` for `q = 2^m`.
    pub fn size_bits(&self) -> u64 {
        let sym = u64::from((self.field().order() - 1).ilog2() + 1);
        sym * (self.n() * self.k() * (self.memory() + 1)) as u64
    }
}

/// The secret key `{S(D), G, T(D, D^-1)}` and cached data for decryption.
#[derive(Debug, Clone)]
pub struct SecretKey {
    s: LaurentMatrix,
    s_mu_inv: Matrix,
    code: GrsCode,
    t: LaurentMatrix,
    p: LaurentMatrix,
    gamma: Vec<usize>,
    mask: Option<(MaskBlock, u16)>,
    mu: usize,
    nu: usize,
    err_budget: usize,
    t_sparse: Vec<SparseRows>,
}

impl SecretKey {
    /// Reassembles a key from stored parts. `T` must either be a permutation
    /// (`T = Gamma`) or of the form `Gamma * [[A, beta A], [A, A]]`.
    pub fn from_parts(
        s: LaurentMatrix,
        code: GrsCode,
        gamma: Vec<usize>,
        t: LaurentMatrix,
        mu: usize,
        nu: usize,
        err_budget: usize,
    ) -> Result<SecretKey, KeygenError> {
        check_permutation(&gamma)?;
        let n = code.n();
        let k = code.k();
        if gamma.len() != n || t.rows() != n || t.cols() != n || s.rows() != k || s.cols() != k {
            return Err(KeygenError::BadMask("dimension"));
        }
        let field = code.field().clone();
        let s_mu_inv = s.coeff(mu as i32).inverse(&field).ok_or(KeygenError::SingularS)?;
        let delta = t.permute_rows(&invert_permutation(&gamma));
        let (p, mask) = if delta == LaurentMatrix::identity(&field, n) {
            let p = LaurentMatrix::constant(&field, Matrix::permutation(&gamma).transpose());
            (p, None)
        } else {
            if n % 2 != 0 {
                return Err(KeygenError::OddLength(n));
            }
            let h = n / 2;
            let a = delta.block(0, 0, h, h);
            let mask = MaskBlock::from_laurent(&a)?;
            // beta from the leading diagonal entry of the top-right block
            let c0 = mask.coeffs.get(0, 0);
            let top_right = delta.block(0, h, h, h);
            let b0 = top_right.entry(0, 0).coeff(mask.exps[0]);
            let beta = field.div(b0, c0)?;
            if build_delta(&a, beta)? != delta {
                return Err(KeygenError::BadMask("T is not Gamma * [[A, beta A], [A, A]]"));
            }
            (invert_t(&mask, beta, &gamma)?, Some((mask, beta)))
        };
        let t_sparse = (-(mu as i32)..=mu as i32).map(|j| SparseRows::from_dense(&t.coeff(j))).collect();
        Ok(SecretKey { s, s_mu_inv, code, t, p, gamma, mask, mu, nu, err_budget, t_sparse })
    }

    pub fn field(&self) -> &Field {
        self.code.field()
    }

    pub fn s(&self) -> &LaurentMatrix {
        &self.s
    }

    pub fn s_mu_inv(&self) -> &Matrix {
        &self.s_mu_inv
    }

    pub fn code(&self) -> &GrsCode {
        &self.code
    }

    pub fn t(&self) -> &LaurentMatrix {
        &self.t
    }

    /// `P = T^-1`.
    pub fn p(&self) -> &LaurentMatrix {
        &self.p
    }

    pub fn gamma(&self) -> &[usize] {
        &self.gamma
    }

    /// `A` and `beta`, absent for permutation-only keys.
    pub fn mask(&self) -> Option<(&MaskBlock, u16)> {
        self.mask.as_ref().map(|(a, b)| (a, *b))
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn err_budget(&self) -> usize {
        self.err_budget
    }

    /// Row-sparse `T_j`; zero outside `[-mu, mu]`.
    pub fn t_sparse(&self, j: i32) -> Option<&SparseRows> {
        let idx = j + self.mu as i32;
        if idx < 0 {
            return None;
        }
        self.t_sparse.get(idx as usize)
    }

    /// `G'(D) = S(D) G P(D, D^-1)`.
    pub fn public_key(&self) -> Result<PublicKey, KeygenError> {
        let g = LaurentMatrix::constant(self.field(), self.code.generator().clone());
        let g_prime = self.s.mul(&g)?.mul(&self.p)?;
        PublicKey::new(g_prime, self.err_budget, self.mu, self.nu, None)
    }
}

fn sample_code(field: &Field, n: usize, k: usize, rng: &mut ChaCha20Rng) -> Result<GrsCode, KeygenError> {
    let q = field.order() as u16;
    let mut alpha: Vec<u16> = (1..q).collect();
    alpha.shuffle(rng);
    alpha.truncate(n);
    let x = (0..n).map(|_| rng.random_range(1..q)).collect();
    Ok(GrsCode::new(field, k, alpha, x)?)
}

pub fn keygen(params: &KeyParams) -> Result<(SecretKey, PublicKey), KeygenError> {
    params.validate()?;
    let field = params.field()?;
    let mut rng = ChaCha20Rng::seed_from_u64(params.seed);
    let code = sample_code(&field, params.n, params.k, &mut rng)?;
    let a = sample_a(&field, &params.d_half(), params.mu, &mut rng);
    let beta = rng.random_range(2..field.order() as u16);
    let mut gamma: Vec<usize> = (0..params.n).collect();
    gamma.shuffle(&mut rng);
    let s = sample_s(&field, params.k, params.mu, params.nu, params.s_blocks, &mut rng);

    let t = build_t(&a, beta, &gamma)?;
    let p = invert_t(&a, beta, &gamma)?;
    let s_mu_inv = s.coeff(params.mu as i32).inverse(&field).ok_or(KeygenError::SingularS)?;
    let mu = params.mu as i32;
    let t_sparse = (-mu..=mu).map(|j| SparseRows::from_dense(&t.coeff(j))).collect();
    let sk = SecretKey {
        s,
        s_mu_inv,
        code,
        t,
        p,
        gamma,
        mask: Some((a, beta)),
        mu: params.mu,
        nu: params.nu,
        err_budget: params.err_budget(),
        t_sparse,
    };
    let pk = sk.public_key()?;
    Ok((sk, pk))
}

/// Memoryless key: `mu = nu = 0`, `S` a random invertible constant and `T` a
/// bare permutation. The window budget is the full radius `t`, which makes
/// this an ordinary McEliece key over a GRS code.
pub fn keygen_classical(p: u32, m: u32, n: usize, k: usize, seed: u64) -> Result<(SecretKey, PublicKey), KeygenError> {
    let field = Field::new(p, m)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let code = sample_code(&field, n, k, &mut rng)?;
    let mut gamma: Vec<usize> = (0..n).collect();
    gamma.shuffle(&mut rng);
    let s = sample_s(&field, k, 0, 0, 1, &mut rng);
    let t = LaurentMatrix::constant(&field, Matrix::permutation(&gamma));
    let budget = code.t();
    let sk = SecretKey::from_parts(s, code, gamma, t, 0, 0, budget)?;
    let pk = sk.public_key()?;
    Ok((sk, pk))
}

/// Outcome of checking the four structural conditions on `T` and `P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaskProperties {
    /// `det T` is a nonzero constant.
    pub unimodular: bool,
    /// Every nonzero row of every `T_j` has exactly two nonzero entries.
    pub row_weight_two: bool,
    /// Each column of `T` is nonzero in exactly one `T_j`.
    pub column_partition: bool,
    /// Every nonzero column of every `P_j` has an even number (at least 2) of nonzeros.
    pub inverse_columns_even: bool,
}

impl MaskProperties {
    pub fn all(&self) -> bool {
        self.unimodular && self.row_weight_two && self.column_partition && self.inverse_columns_even
    }
}

pub fn mask_properties(t: &LaurentMatrix, p: &LaurentMatrix) -> Result<MaskProperties, KeygenError> {
    let det = t.det()?;
    let unimodular = matches!(det.as_constant(), Some(c) if c != 0);
    let row_weight_two = t
        .coeff_matrices()
        .iter()
        .all(|m| (0..m.rows()).all(|r| matches!(m.row_weight(r), 0 | RHO)));
    let column_partition = (0..t.cols()).all(|c| t.coeff_matrices().iter().filter(|m| m.col_weight(c) > 0).count() == 1);
    let inverse_columns_even = p.coeff_matrices().iter().all(|m| {
        (0..m.cols()).all(|c| {
            let w = m.col_weight(c);
            w == 0 || (w >= 2 && w % 2 == 0)
        })
    });
    Ok(MaskProperties { unimodular, row_weight_two, column_partition, inverse_columns_even })
}

/// A key-space size with its base-2 logarithm.
#[derive(Debug, Clone, PartialEq)]
pub struct Count {
    pub value: BigUint,
    pub log2: f64,
}

impl Count {
    fn new(value: BigUint) -> Count {
        let log2 = log2_big(&value);
        Count { value, log2 }
    }
}

pub fn log2_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 64 {
        return v.to_u64().map_or(f64::NEG_INFINITY, |x| (x as f64).log2());
    }
    let shift = bits - 64;
    let top = (v >> shift).to_u64().expect("64-bit prefix");
    (top as f64).log2() + shift as f64
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, i| acc * i)
}

/// Lower bound on the number of masks `T`:
/// `(q-2) (q-1)^(n/2) n! (n/2)! / prod_j (d_j/2)!`.
pub fn count_t_bound(params: &KeyParams) -> Count {
    let q = BigUint::from(params.q());
    let h = params.n_half();
    let mut v = (&q - 2u32) * (&q - 1u32).pow(h as u32) * factorial(params.n) * factorial(h);
    let den = params.d_half().iter().fold(BigUint::one(), |acc, &d| acc * factorial(d));
    v /= den;
    Count::new(v)
}

fn check_arrangement(params: &KeyParams, diagonal: &[i32]) -> Result<(), KeygenError> {
    let dh = params.d_half();
    let mu = params.mu as i32;
    if diagonal.len() != params.n_half() || diagonal.iter().any(|&j| j.abs() > mu) {
        return Err(KeygenError::BadArrangement);
    }
    for (idx, &want) in dh.iter().enumerate() {
        let j = idx as i32 - mu;
        if diagonal.iter().filter(|&&x| x == j).count() != want {
            return Err(KeygenError::BadArrangement);
        }
    }
    Ok(())
}

/// Remaining same-power columns to the right of each diagonal entry:
/// `(d_j/2 - dhat_{i,j})` for every row `i` and power `j != j_i`.
fn slot_counts(params: &KeyParams, diagonal: &[i32]) -> Vec<usize> {
    let dh = params.d_half();
    let mu = params.mu as i32;
    let mut seen = vec![0usize; dh.len()];
    let mut out = Vec::new();
    for &ji in diagonal {
        seen[(ji + mu) as usize] += 1;
        for j in -mu..=mu {
            if j != ji {
                let idx = (j + mu) as usize;
                out.push(dh[idx] - seen[idx]);
            }
        }
    }
    out
}

/// Number of ways to place the above-diagonal entries for a fixed diagonal
/// arrangement, counting positions only (empty slots contribute 1).
pub fn count_positions(params: &KeyParams, diagonal: &[i32]) -> Result<BigUint, KeygenError> {
    check_arrangement(params, diagonal)?;
    Ok(slot_counts(params, diagonal)
        .into_iter()
        .filter(|&c| c > 0)
        .fold(BigUint::one(), |acc, c| acc * c))
}

/// The bound times `prod ((d_j/2 - dhat_{i,j})(q-1) + 1)` over all rows and
/// powers, for the given diagonal arrangement.
pub fn count_t_exact(params: &KeyParams, diagonal: &[i32]) -> Result<Count, KeygenError> {
    check_arrangement(params, diagonal)?;
    let q1 = params.q() - 1;
    let above = slot_counts(params, diagonal)
        .into_iter()
        .fold(BigUint::one(), |acc, c| acc * (c as u64 * q1 + 1));
    Ok(Count::new(count_t_bound(params).value * above))
}

/// Number of `S(D)` with invertible `S_mu`; block-diagonal when `s_blocks > 1`.
pub fn count_s(params: &KeyParams) -> Count {
    let q = BigUint::from(params.q());
    let eps = params.block_size();
    let free = q.pow((eps * params.k * (params.nu - params.mu)) as u32);
    let qe = q.pow(eps as u32);
    let gl = (0..eps).fold(BigUint::one(), |acc, j| acc * (&qe - q.pow(j as u32)));
    Count::new(free * gl.pow(params.s_blocks as u32))
}

/// Storage of `S(D)` in bits: `m (nu - mu + 1) r eps^2`.
pub fn s_storage_bits(params: &KeyParams) -> u64 {
    let eps = params.block_size() as u64;
    u64::from(params.m) * (params.nu - params.mu + 1) as u64 * params.s_blocks as u64 * eps * eps
}
