//! Encryption `y(D) = u(D) G'(D) + e(D)` and sequential decryption.
//!
//! Decryption multiplies by `T`: `y(D) T = u(D) S(D) G + e(D) T`. Block `i` of
//! `e(D) T` has weight at most `t` when the error obeys the window rule, so each
//! block of `y(D) T` is GRS-decodable to `(u S)_i`, and `u` follows by
//! back-substitution through `S_mu^-1`.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::grs::DecodeFailure;
use crate::keygen::{PublicKey, SecretKey};
use crate::laurent::{seq_block_at, weight, BlockSequence};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CryptoError {
    #[error("error pattern exceeds the window budget")]
    InadmissibleError,
    #[error("expected blocks of length {expected}, got {got}")]
    BlockLength { expected: usize, got: usize },
    #[error("expected {expected} blocks, got {got}")]
    BlockCount { expected: usize, got: usize },
    #[error("ciphertext has {got} blocks, need at least {needed}")]
    TooShort { needed: usize, got: usize },
    #[error("public key has no truncation parameter")]
    MissingSigma,
    #[error("decoding failed at block {block}: {cause}")]
    DecryptFailure { block: usize, cause: DecodeFailure },
}

/// How error weight is spread over time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Schedule {
    /// `floor(budget / (2 mu + 1))` errors in every block.
    #[default]
    Even,
    /// Each block takes whatever its trailing window leaves, front-loading weight.
    GreedyMax,
    /// Random weights `w_0 .. w_2mu` summing to the budget, repeated, so every
    /// full window carries exactly the budget.
    Periodic,
}

impl std::str::FromStr for Schedule {
    type Err = String;

    fn from_str(s: &str) -> Result<Schedule, String> {
        match s {
            "even" => Ok(Schedule::Even),
            "greedy" | "greedy-max" => Ok(Schedule::GreedyMax),
            "periodic" => Ok(Schedule::Periodic),
            other => Err(format!("unknown schedule {other:?}")),
        }
    }
}

/// An error sequence `e_0 .. e_L` over length-`n` blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorPattern {
    blocks: BlockSequence,
}

impl ErrorPattern {
    pub fn new(blocks: BlockSequence) -> ErrorPattern {
        ErrorPattern { blocks }
    }

    pub fn zero(n: usize, len: usize) -> ErrorPattern {
        ErrorPattern::new(BlockSequence::zeros(n, len))
    }

    pub fn blocks(&self) -> &BlockSequence {
        &self.blocks
    }

    pub fn weights(&self) -> Vec<usize> {
        self.blocks.blocks().iter().map(|b| weight(b)).collect()
    }

    pub fn total_weight(&self) -> usize {
        self.blocks.weight()
    }

    /// True iff every run of `2 mu + 1` consecutive blocks has weight at most `budget`.
    pub fn is_admissible(&self, budget: usize, mu: usize) -> bool {
        validate_error(&self.blocks, budget, mu)
    }
}

pub fn validate_error(e: &BlockSequence, budget: usize, mu: usize) -> bool {
    let w: Vec<usize> = e.blocks().iter().map(|b| weight(b)).collect();
    let span = 2 * mu + 1;
    let mut window: usize = w.iter().take(span).sum();
    if window > budget {
        return false;
    }
    for i in span..w.len() {
        window = window + w[i] - w[i - span];
        if window > budget {
            return false;
        }
    }
    true
}

/// Largest total error weight the window rule allows over `s + 1 + mu + nu`
/// blocks at radius `t`: `floor(t (s + 1 + mu + nu) / (2 (2 mu + 1)))`.
pub fn max_total_weight(t: usize, s: usize, mu: usize, nu: usize) -> usize {
    t * (s + 1 + mu + nu) / (2 * (2 * mu + 1))
}

/// Per-block weights for `len` blocks under `schedule`.
pub fn schedule_weights<R: Rng + ?Sized>(
    schedule: Schedule,
    budget: usize,
    mu: usize,
    n: usize,
    len: usize,
    rng: &mut R,
) -> Vec<usize> {
    let span = 2 * mu + 1;
    match schedule {
        Schedule::Even => vec![(budget / span).min(n); len],
        Schedule::GreedyMax => {
            let mut w = vec![0usize; len];
            for i in 0..len {
                let used: usize = w[i.saturating_sub(span - 1)..i].iter().sum();
                w[i] = (budget - used).min(n);
            }
            w
        }
        Schedule::Periodic => {
            // random composition of the budget into `span` parts, each <= n
            let budget = budget.min(span * n);
            let mut period = vec![0usize; span];
            for _ in 0..budget {
                loop {
                    let slot = rng.random_range(0..span);
                    if period[slot] < n {
                        period[slot] += 1;
                        break;
                    }
                }
            }
            (0..len).map(|i| period[i % span]).collect()
        }
    }
}

/// Samples an admissible error pattern of `len` blocks for the given key.
pub fn sample_error<R: Rng + ?Sized>(pk: &PublicKey, len: usize, schedule: Schedule, rng: &mut R) -> ErrorPattern {
    let n = pk.n();
    let q = pk.field().order() as u16;
    let weights = schedule_weights(schedule, pk.err_budget(), pk.mu(), n, len, rng);
    let mut positions: Vec<usize> = (0..n).collect();
    let blocks = weights
        .iter()
        .map(|&w| {
            let mut block = vec![0u16; n];
            let (chosen, _) = positions.partial_shuffle(rng, w);
            for &p in chosen.iter() {
                block[p] = rng.random_range(1..q);
            }
            block
        })
        .collect();
    ErrorPattern::new(BlockSequence::new(n, blocks))
}

/// A ciphertext. `sigma` is set for the truncated (alternative) mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    blocks: BlockSequence,
    sigma: Option<usize>,
}

impl Ciphertext {
    pub fn new(blocks: BlockSequence, sigma: Option<usize>) -> Ciphertext {
        Ciphertext { blocks, sigma }
    }

    pub fn blocks(&self) -> &BlockSequence {
        &self.blocks
    }

    pub fn sigma(&self) -> Option<usize> {
        self.sigma
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

fn check_blocks(seq: &BlockSequence, expected: usize) -> Result<(), CryptoError> {
    if seq.block_len() != expected {
        return Err(CryptoError::BlockLength { expected, got: seq.block_len() });
    }
    Ok(())
}

/// `y = u G' + e` over `s + mu + nu + 1` blocks, where `u` has `s + 1` blocks.
/// A shorter `e` is zero-padded.
pub fn encrypt(pk: &PublicKey, u: &BlockSequence, e: &ErrorPattern) -> Result<Ciphertext, CryptoError> {
    check_blocks(u, pk.k())?;
    check_blocks(e.blocks(), pk.n())?;
    if u.is_empty() {
        return Err(CryptoError::BlockCount { expected: 1, got: 0 });
    }
    let len = u.len() + pk.memory();
    if e.blocks().len() > len {
        return Err(CryptoError::BlockCount { expected: len, got: e.blocks().len() });
    }
    if !e.is_admissible(pk.err_budget(), pk.mu()) {
        return Err(CryptoError::InadmissibleError);
    }
    let f = pk.field();
    let blocks = (0..len as i32)
        .map(|t| {
            let mut y = seq_block_at(f, u, pk.g_prime(), t);
            if let Some(err) = e.blocks().at(t) {
                for (a, &b) in y.iter_mut().zip(err) {
                    *a = f.add(*a, b);
                }
            }
            y
        })
        .collect();
    Ok(Ciphertext::new(BlockSequence::new(pk.n(), blocks), None))
}

/// Truncated encryption: `u` (`sigma + 1` blocks) is extended by `tail`
/// (`2 mu` blocks), encrypted in full, and only `y_0 .. y_(2 mu + sigma)` kept.
pub fn encrypt_alternative_with(
    pk: &PublicKey,
    u: &BlockSequence,
    tail: &BlockSequence,
    e: &ErrorPattern,
) -> Result<Ciphertext, CryptoError> {
    let sigma = pk.sigma().ok_or(CryptoError::MissingSigma)?;
    check_blocks(u, pk.k())?;
    check_blocks(tail, pk.k())?;
    if u.len() != sigma + 1 {
        return Err(CryptoError::BlockCount { expected: sigma + 1, got: u.len() });
    }
    if tail.len() != 2 * pk.mu() {
        return Err(CryptoError::BlockCount { expected: 2 * pk.mu(), got: tail.len() });
    }
    let mut full = u.clone();
    for b in tail.blocks() {
        full.push(b.clone());
    }
    let y = encrypt(pk, &full, e)?;
    let keep = 2 * pk.mu() + sigma + 1;
    let blocks = y.blocks.into_blocks().into_iter().take(keep).collect();
    Ok(Ciphertext::new(BlockSequence::new(pk.n(), blocks), Some(sigma)))
}

pub fn encrypt_alternative<R: Rng + ?Sized>(
    pk: &PublicKey,
    u: &BlockSequence,
    schedule: Schedule,
    rng: &mut R,
) -> Result<Ciphertext, CryptoError> {
    let sigma = pk.sigma().ok_or(CryptoError::MissingSigma)?;
    let q = pk.field().order() as u16;
    let tail = (0..2 * pk.mu())
        .map(|_| (0..pk.k()).map(|_| rng.random_range(0..q)).collect())
        .collect();
    let tail = BlockSequence::new(pk.k(), tail);
    let e = sample_error(pk, 3 * pk.mu() + pk.nu() + sigma + 1, schedule, rng);
    encrypt_alternative_with(pk, u, &tail, &e)
}

/// Plaintext plus the weight of the error found in each unmasked block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decryption {
    pub message: BlockSequence,
    pub block_error_weights: Vec<usize>,
}

/// `yhat_i = sum_{j=-mu}^{min(i, mu)} y_(i-j) T_j`.
fn unmask_block(sk: &SecretKey, y: &BlockSequence, i: usize) -> Vec<u16> {
    let f = sk.field();
    let mu = sk.mu() as i32;
    let i = i as i32;
    let mut out = vec![0u16; sk.code().n()];
    for j in -mu..=mu.min(i) {
        if let (Some(block), Some(tj)) = (y.at(i - j), sk.t_sparse(j)) {
            tj.vec_mul_acc(f, block, &mut out);
        }
    }
    out
}

/// `u_i = (uhat_(mu+i) - sum_j u_j S_(mu+i-j)) S_mu^-1`, summing over
/// `mu + i - j` in `[mu + 1, nu]`.
fn back_substitute(sk: &SecretKey, decoded: &[u16], prior: &[Vec<u16>]) -> Vec<u16> {
    let f = sk.field();
    let (mu, nu) = (sk.mu(), sk.nu());
    let i = prior.len();
    let mut acc = decoded.to_vec();
    let first = (mu + i).saturating_sub(nu);
    for (j, uj) in prior.iter().enumerate().skip(first) {
        let idx = (mu + i - j) as i32;
        if let Some(sm) = sk.s().coeff_ref(idx) {
            let mut prod = vec![0u16; acc.len()];
            sm.vec_mul_acc(f, uj, &mut prod);
            for (a, &b) in acc.iter_mut().zip(&prod) {
                *a = f.sub(*a, b);
            }
        }
    }
    sk.s_mu_inv().vec_mul(f, &acc)
}

fn decode_prefix(sk: &SecretKey, y: &BlockSequence, count: usize) -> Result<Decryption, CryptoError> {
    let mut message: Vec<Vec<u16>> = Vec::with_capacity(count);
    let mut weights = Vec::with_capacity(count);
    for i in 0..count {
        let yhat = unmask_block(sk, y, sk.mu() + i);
        let d = sk
            .code()
            .decode(&yhat)
            .map_err(|cause| CryptoError::DecryptFailure { block: i, cause })?;
        weights.push(d.error_weight());
        let u = back_substitute(sk, &d.message, &message);
        message.push(u);
    }
    Ok(Decryption {
        message: BlockSequence::new(sk.code().k(), message),
        block_error_weights: weights,
    })
}

/// Decrypts either mode, reporting the per-block error weights.
pub fn decrypt_traced(sk: &SecretKey, ct: &Ciphertext) -> Result<Decryption, CryptoError> {
    check_blocks(ct.blocks(), sk.code().n())?;
    let (mu, nu) = (sk.mu(), sk.nu());
    let count = match ct.sigma() {
        Some(sigma) => {
            let expected = 2 * mu + sigma + 1;
            if ct.len() != expected {
                return Err(CryptoError::BlockCount { expected, got: ct.len() });
            }
            sigma + 1
        }
        None => {
            let needed = mu + nu + 1;
            if ct.len() < needed {
                return Err(CryptoError::TooShort { needed, got: ct.len() });
            }
            ct.len() - mu - nu
        }
    };
    decode_prefix(sk, ct.blocks(), count)
}

pub fn decrypt(sk: &SecretKey, ct: &Ciphertext) -> Result<BlockSequence, CryptoError> {
    decrypt_traced(sk, ct).map(|d| d.message)
}

/// Decrypts a truncated ciphertext of `2 mu + sigma + 1` blocks.
pub fn decrypt_alternative(sk: &SecretKey, y: &BlockSequence, sigma: usize) -> Result<BlockSequence, CryptoError> {
    decrypt(sk, &Ciphertext::new(y.clone(), Some(sigma)))
}

/// Block-at-a-time decryption of a full-mode ciphertext. Message block `i`
/// becomes available once `y_(i + 2 mu)` has arrived.
pub struct StreamDecryptor<'a> {
    sk: &'a SecretKey,
    received: BlockSequence,
    message: Vec<Vec<u16>>,
}

impl<'a> StreamDecryptor<'a> {
    pub fn new(sk: &'a SecretKey) -> StreamDecryptor<'a> {
        StreamDecryptor {
            sk,
            received: BlockSequence::new(sk.code().n(), Vec::new()),
            message: Vec::new(),
        }
    }

    /// Feeds `y_r`; returns message block `r - 2 mu` when it is ready.
    pub fn push(&mut self, block: Vec<u16>) -> Result<Option<Vec<u16>>, CryptoError> {
        let n = self.sk.code().n();
        if block.len() != n {
            return Err(CryptoError::BlockLength { expected: n, got: block.len() });
        }
        self.received.push(block);
        let r = self.received.len() - 1;
        let mu = self.sk.mu();
        if r < 2 * mu {
            return Ok(None);
        }
        let i = r - 2 * mu;
        let yhat = unmask_block(self.sk, &self.received, mu + i);
        let d = self
            .sk
            .code()
            .decode(&yhat)
            .map_err(|cause| CryptoError::DecryptFailure { block: i, cause })?;
        let u = back_substitute(self.sk, &d.message, &self.message);
        self.message.push(u.clone());
        Ok(Some(u))
    }

    /// Drops the `nu - mu` trailing blocks that carry no message and returns the plaintext.
    pub fn finish(self) -> Result<BlockSequence, CryptoError> {
        let (mu, nu) = (self.sk.mu(), self.sk.nu());
        let got = self.received.len();
        if got < mu + nu + 1 {
            return Err(CryptoError::TooShort { needed: mu + nu + 1, got });
        }
        let mut blocks = self.message;
        blocks.truncate(got - mu - nu);
        Ok(BlockSequence::new(self.sk.code().k(), blocks))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::keygen::{keygen, keygen_classical, KeyParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn random_message(k: usize, blocks: usize, q: u16, rng: &mut ChaCha20Rng) -> BlockSequence {
        let b = (0..blocks).map(|_| (0..k).map(|_| rng.random_range(0..q)).collect()).collect();
        BlockSequence::new(k, b)
    }

    fn small_key(seed: u64) -> (SecretKey, PublicKey) {
        keygen(&KeyParams::new(2, 5, 30, 10, 1, 2, vec![6, 18, 6]).with_seed(seed)).unwrap()
    }

    #[test]
    fn window_validation() {
        let mut e = BlockSequence::zeros(10, 6);
        assert!(validate_error(&e, 3, 1));
        let mut blocks = e.clone().into_blocks();
        blocks[2] = vec![1, 1, 1, 1, 0, 0, 0, 0, 0, 0];
        e = BlockSequence::new(10, blocks);
        assert!(!validate_error(&e, 3, 1));
        assert!(validate_error(&e, 4, 1));
        let spread = BlockSequence::new(10, (0..6).map(|i| {
            let mut b = vec![0; 10];
            b[i] = 1;
            b
        }).collect());
        assert!(validate_error(&spread, 3, 1));
        assert!(!validate_error(&spread, 2, 1));
    }

    #[test]
    fn schedule_weights_match_budget() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let even = schedule_weights(Schedule::Even, 21, 1, 180, 34, &mut rng);
        assert!(even.iter().all(|&w| w == 7));
        assert_eq!(even.iter().sum::<usize>(), 238);
        assert_eq!(max_total_weight(42, 30, 1, 2), 238);
        let greedy = schedule_weights(Schedule::GreedyMax, 21, 1, 180, 34, &mut rng);
        assert_eq!(&greedy[..4], &[21, 0, 0, 21]);
        let periodic = schedule_weights(Schedule::Periodic, 21, 1, 180, 34, &mut rng);
        for w in periodic.windows(3) {
            assert_eq!(w.iter().sum::<usize>(), 21);
        }
        assert!(schedule_weights(Schedule::Even, 0, 1, 10, 5, &mut rng).iter().all(|&w| w == 0));
        assert_eq!("greedy-max".parse::<Schedule>(), Ok(Schedule::GreedyMax));
    }

    #[test]
    fn sampled_errors_are_admissible() {
        let (_, pk) = small_key(1);
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for schedule in [Schedule::Even, Schedule::GreedyMax, Schedule::Periodic] {
            for _ in 0..20 {
                let e = sample_error(&pk, 12, schedule, &mut rng);
                assert!(e.is_admissible(pk.err_budget(), pk.mu()));
                assert_eq!(e.weights(), e.blocks().blocks().iter().map(|b| weight(b)).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn noiseless_round_trip() {
        let (sk, pk) = small_key(3);
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let u = random_message(10, 5, 32, &mut rng);
        let ct = encrypt(&pk, &u, &ErrorPattern::zero(30, 0)).unwrap();
        assert_eq!(ct.len(), 5 + 3);
        assert_eq!(decrypt(&sk, &ct).unwrap(), u);
        let zero = encrypt(&pk, &BlockSequence::zeros(10, 3), &ErrorPattern::zero(30, 6)).unwrap();
        assert_eq!(zero.blocks().weight(), 0);
    }

    #[test]
    fn noisy_round_trips() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for seed in 0..5 {
            let (sk, pk) = small_key(seed);
            for schedule in [Schedule::Even, Schedule::GreedyMax, Schedule::Periodic] {
                let u = random_message(10, 6, 32, &mut rng);
                let e = sample_error(&pk, 9, schedule, &mut rng);
                let ct = encrypt(&pk, &u, &e).unwrap();
                let d = decrypt_traced(&sk, &ct).unwrap();
                assert_eq!(d.message, u);
                assert!(d.block_error_weights.iter().all(|&w| w <= sk.code().t()));
            }
        }
    }

    #[test]
    fn inadmissible_error_rejected() {
        let (_, pk) = small_key(6);
        let mut block = vec![0u16; 30];
        for v in block.iter_mut().take(pk.err_budget() + 1) {
            *v = 1;
        }
        let e = ErrorPattern::new(BlockSequence::new(30, vec![block]));
        let u = BlockSequence::zeros(10, 1);
        assert_eq!(encrypt(&pk, &u, &e), Err(CryptoError::InadmissibleError));
        assert!(matches!(
            encrypt(&pk, &BlockSequence::zeros(9, 1), &ErrorPattern::zero(30, 1)),
            Err(CryptoError::BlockLength { .. })
        ));
    }

    #[test]
    fn classical_round_trip() {
        let (sk, pk) = keygen_classical(2, 5, 30, 10, 8).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        for _ in 0..20 {
            let u = random_message(10, 1, 32, &mut rng);
            let e = sample_error(&pk, 1, Schedule::Even, &mut rng);
            assert_eq!(e.total_weight(), sk.code().t());
            let ct = encrypt(&pk, &u, &e).unwrap();
            assert_eq!(ct.len(), 1);
            assert_eq!(decrypt(&sk, &ct).unwrap(), u);
        }
    }

    #[test]
    fn alternative_mode() {
        let (sk, pk) = small_key(10);
        let pk = pk.with_sigma(Some(3));
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for _ in 0..10 {
            let u = random_message(10, 4, 32, &mut rng);
            let tail = random_message(10, 2, 32, &mut rng);
            let e = sample_error(&pk, 3 + 2 + 3 + 1, Schedule::Periodic, &mut rng);
            let ct = encrypt_alternative_with(&pk, &u, &tail, &e).unwrap();
            assert_eq!(ct.len(), 2 + 3 + 1);
            assert_eq!(decrypt(&sk, &ct).unwrap(), u);
            // agrees with full decryption of the untruncated ciphertext
            let mut full_u = u.clone();
            for b in tail.blocks() {
                full_u.push(b.clone());
            }
            let full = encrypt(&pk.clone().with_sigma(None), &full_u, &e).unwrap();
            let all = decrypt(&sk, &full).unwrap();
            assert_eq!(&all.blocks()[..4], u.blocks());
        }
        let u = random_message(10, 4, 32, &mut rng);
        let ct = encrypt_alternative(&pk, &u, Schedule::Even, &mut rng).unwrap();
        assert_eq!(decrypt_alternative(&sk, ct.blocks(), 3).unwrap(), u);
        let mut short = ct.blocks().clone().into_blocks();
        short.pop();
        assert!(matches!(
            decrypt_alternative(&sk, &BlockSequence::new(30, short), 3),
            Err(CryptoError::BlockCount { .. })
        ));
        let no_sigma = pk.with_sigma(None);
        assert_eq!(encrypt_alternative(&no_sigma, &u, Schedule::Even, &mut rng), Err(CryptoError::MissingSigma));
    }

    #[test]
    fn classical_alternative_mode() {
        let (sk, pk) = keygen_classical(2, 5, 30, 10, 12).unwrap();
        let pk = pk.with_sigma(Some(0));
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        let u = random_message(10, 1, 32, &mut rng);
        let ct = encrypt_alternative(&pk, &u, Schedule::Even, &mut rng).unwrap();
        assert_eq!(ct.len(), 1);
        assert_eq!(decrypt(&sk, &ct).unwrap(), u);
    }

    #[test]
    fn streaming_matches_batch() {
        let (sk, pk) = small_key(14);
        let mut rng = ChaCha20Rng::seed_from_u64(15);
        let u = random_message(10, 7, 32, &mut rng);
        let e = sample_error(&pk, 10, Schedule::GreedyMax, &mut rng);
        let ct = encrypt(&pk, &u, &e).unwrap();
        let mut stream = StreamDecryptor::new(&sk);
        let mut emitted = Vec::new();
        for b in ct.blocks().blocks() {
            if let Some(m) = stream.push(b.clone()).unwrap() {
                emitted.push(m);
            }
        }
        assert_eq!(emitted.len(), ct.len() - 2 * sk.mu());
        assert_eq!(&emitted[..7], u.blocks());
        assert_eq!(stream.finish().unwrap(), decrypt(&sk, &ct).unwrap());
    }

    #[test]
    fn wrong_key_fails_or_differs() {
        let (_, pk) = small_key(16);
        let (other, _) = small_key(17);
        let mut rng = ChaCha20Rng::seed_from_u64(18);
        let u = random_message(10, 3, 32, &mut rng);
        let e = sample_error(&pk, 6, Schedule::Even, &mut rng);
        let ct = encrypt(&pk, &u, &e).unwrap();
        match decrypt(&other, &ct) {
            Ok(v) => assert_ne!(v, u),
            Err(CryptoError::DecryptFailure { block, .. }) => assert_eq!(block, 0),
            Err(e) => panic!("{e}"),
        }
    }
}
