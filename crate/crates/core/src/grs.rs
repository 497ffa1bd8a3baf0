//! Generalized Reed–Solomon codes with a Berlekamp–Massey decoder.
//!
//! The generator has entries `G[r][c] = x_c * alpha_c^r`. Decoding uses the
//! dual code, whose parity-check rows are `H[r][c] = y_c * alpha_c^r` for
//! `r < n - k` with `y_c = 1 / (x_c * prod_{j != c} (alpha_c - alpha_j))`.

use thiserror::Error;

use crate::field::Field;
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrsError {
    #[error("evaluation point {0} is zero")]
    ZeroAlpha(usize),
    #[error("evaluation points {0} and {1} coincide")]
    RepeatedAlpha(usize, usize),
    #[error("column multiplier {0} is zero")]
    ZeroMultiplier(usize),
    #[error("code length {n} exceeds q - 1 = {max}")]
    TooLong { n: usize, max: usize },
    #[error("invalid dimensions n = {n}, k = {k}")]
    BadDimension { n: usize, k: usize },
    #[error("expected {expected} symbols, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("symbol {0} is not a field element")]
    OutOfRange(u16),
}

/// Why a received word could not be decoded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DecodeFailure {
    #[error("received word has wrong length")]
    LengthMismatch,
    #[error("error locator degree {0} exceeds the correction radius")]
    TooManyErrors(usize),
    #[error("error locator does not split over the evaluation points")]
    LocatorMismatch,
    #[error("corrected word is not a codeword")]
    Inconsistent,
}

/// Output of a successful decode: `y = u G + e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub message: Vec<u16>,
    pub error: Vec<u16>,
}

impl Decoded {
    pub fn error_weight(&self) -> usize {
        self.error.iter().filter(|&&v| v != 0).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrsCode {
    field: Field,
    n: usize,
    k: usize,
    t: usize,
    alpha: Vec<u16>,
    x: Vec<u16>,
    g: Matrix,
    dual: Vec<u16>,
    alpha_inv: Vec<u16>,
}

impl GrsCode {
    pub fn new(field: &Field, k: usize, alpha: Vec<u16>, x: Vec<u16>) -> Result<GrsCode, GrsError> {
        let n = alpha.len();
        if x.len() != n {
            return Err(GrsError::LengthMismatch { expected: n, got: x.len() });
        }
        if k == 0 || k >= n {
            return Err(GrsError::BadDimension { n, k });
        }
        let max = field.order() as usize - 1;
        if n > max {
            return Err(GrsError::TooLong { n, max });
        }
        let q = field.order();
        for &v in alpha.iter().chain(&x) {
            if u32::from(v) >= q {
                return Err(GrsError::OutOfRange(v));
            }
        }
        let mut seen = vec![usize::MAX; q as usize];
        for (i, &a) in alpha.iter().enumerate() {
            if a == 0 {
                return Err(GrsError::ZeroAlpha(i));
            }
            if seen[a as usize] != usize::MAX {
                return Err(GrsError::RepeatedAlpha(seen[a as usize], i));
            }
            seen[a as usize] = i;
        }
        if let Some(i) = x.iter().position(|&v| v == 0) {
            return Err(GrsError::ZeroMultiplier(i));
        }

        let mut g = Matrix::zeros(k, n);
        for c in 0..n {
            let mut v = x[c];
            for r in 0..k {
                g.set(r, c, v);
                v = field.mul(v, alpha[c]);
            }
        }
        let dual = (0..n)
            .map(|c| {
                let prod = (0..n)
                    .filter(|&j| j != c)
                    .fold(x[c], |acc, j| field.mul(acc, field.sub(alpha[c], alpha[j])));
                field.inv_nonzero(prod)
            })
            .collect();
        let alpha_inv = alpha.iter().map(|&a| field.inv_nonzero(a)).collect();
        Ok(GrsCode {
            field: field.clone(),
            n,
            k,
            t: (n - k) / 2,
            alpha,
            x,
            g,
            dual,
            alpha_inv,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Correction radius `floor((n - k) / 2)`.
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn alpha(&self) -> &[u16] {
        &self.alpha
    }

    pub fn multipliers(&self) -> &[u16] {
        &self.x
    }

    pub fn generator(&self) -> &Matrix {
        &self.g
    }

    pub fn parity_check(&self) -> Matrix {
        let f = &self.field;
        let mut h = Matrix::zeros(self.n - self.k, self.n);
        for c in 0..self.n {
            let mut v = self.dual[c];
            for r in 0..self.n - self.k {
                h.set(r, c, v);
                v = f.mul(v, self.alpha[c]);
            }
        }
        h
    }

    pub fn encode(&self, u: &[u16]) -> Result<Vec<u16>, GrsError> {
        if u.len() != self.k {
            return Err(GrsError::LengthMismatch { expected: self.k, got: u.len() });
        }
        Ok(self.g.vec_mul(&self.field, u))
    }

    fn syndromes(&self, y: &[u16]) -> Vec<u16> {
        let f = &self.field;
        let r = self.n - self.k;
        let mut s = vec![0u16; r];
        for c in 0..self.n {
            if y[c] == 0 {
                continue;
            }
            let mut v = f.mul(y[c], self.dual[c]);
            for sr in s.iter_mut() {
                *sr = f.add(*sr, v);
                v = f.mul(v, self.alpha[c]);
            }
        }
        s
    }

    /// Bounded-distance decoding up to `t` errors.
    pub fn decode(&self, y: &[u16]) -> Result<Decoded, DecodeFailure> {
        if y.len() != self.n {
            return Err(DecodeFailure::LengthMismatch);
        }
        let f = &self.field;
        let synd = self.syndromes(y);
        let mut error = vec![0u16; self.n];
        if synd.iter().any(|&v| v != 0) {
            let lambda = berlekamp_massey(f, &synd);
            let deg = lambda.len() - 1;
            if deg > self.t {
                return Err(DecodeFailure::TooManyErrors(deg));
            }
            let roots: Vec<usize> = (0..self.n)
                .filter(|&c| poly_eval(f, &lambda, self.alpha_inv[c]) == 0)
                .collect();
            if roots.len() != deg {
                return Err(DecodeFailure::LocatorMismatch);
            }
            // omega = S * lambda mod z^(n-k)
            let r = synd.len();
            let mut omega = vec![0u16; r];
            for (i, &l) in lambda.iter().enumerate() {
                if l != 0 {
                    f.axpy(&mut omega[i..], l, &synd[..r - i]);
                }
            }
            let dlambda: Vec<u16> = lambda
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, f.from_int(i as u64)))
                .collect();
            for &c in &roots {
                let xinv = self.alpha_inv[c];
                let den = poly_eval(f, &dlambda, xinv);
                if den == 0 {
                    return Err(DecodeFailure::LocatorMismatch);
                }
                let num = f.mul(self.alpha[c], poly_eval(f, &omega, xinv));
                let val = f.neg(f.mul(num, f.inv_nonzero(den)));
                if val == 0 {
                    return Err(DecodeFailure::LocatorMismatch);
                }
                error[c] = f.mul(val, f.inv_nonzero(self.dual[c]));
            }
            if self.syndromes(&error) != synd {
                return Err(DecodeFailure::Inconsistent);
            }
        }
        let codeword: Vec<u16> = y.iter().zip(&error).map(|(&a, &b)| f.sub(a, b)).collect();
        let positions: Vec<usize> = (0..self.n).filter(|&c| error[c] == 0).take(self.k).collect();
        let message = self.interpolate(&codeword, &positions);
        Ok(Decoded { message, error })
    }

    /// Recovers `u` from codeword symbols at `k` positions: `u` is the
    /// coefficient vector of the polynomial `f` with `f(alpha_c) = c_c / x_c`.
    fn interpolate(&self, codeword: &[u16], positions: &[usize]) -> Vec<u16> {
        let f = &self.field;
        let k = positions.len();
        let xs: Vec<u16> = positions.iter().map(|&c| self.alpha[c]).collect();
        // Newton divided differences
        let mut dd: Vec<u16> = positions
            .iter()
            .map(|&c| f.mul(codeword[c], f.inv_nonzero(self.x[c])))
            .collect();
        for level in 1..k {
            for i in (level..k).rev() {
                let num = f.sub(dd[i], dd[i - 1]);
                let den = f.sub(xs[i], xs[i - level]);
                dd[i] = f.mul(num, f.inv_nonzero(den));
            }
        }
        // expand the Newton form into monomial coefficients
        let mut coeffs = vec![0u16; k];
        for i in (0..k).rev() {
            // coeffs = coeffs * (z - xs[i]) + dd[i]
            let neg = f.neg(xs[i]);
            for j in (1..k).rev() {
                coeffs[j] = f.add(coeffs[j - 1], f.mul(coeffs[j], neg));
            }
            coeffs[0] = f.add(f.mul(coeffs[0], neg), dd[i]);
        }
        coeffs
    }
}

/// Evaluates `sum_i p[i] z^i` by Horner's rule.
fn poly_eval(f: &Field, p: &[u16], z: u16) -> u16 {
    p.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, z), c))
}

/// Shortest LFSR generating `s`; returns the connection polynomial with
/// constant term 1, trimmed to its degree.
fn berlekamp_massey(f: &Field, s: &[u16]) -> Vec<u16> {
    let mut c = vec![1u16];
    let mut b = vec![1u16];
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut last_d = 1u16;
    for i in 0..s.len() {
        let d = (0..=l.min(c.len() - 1)).fold(0u16, |acc, j| f.add(acc, f.mul(c[j], s[i - j])));
        if d == 0 {
            shift += 1;
            continue;
        }
        let coef = f.neg(f.mul(d, f.inv_nonzero(last_d)));
        let prev = c.clone();
        if c.len() < b.len() + shift {
            c.resize(b.len() + shift, 0);
        }
        f.axpy(&mut c[shift..shift + b.len()], coef, &b);
        if 2 * l <= i {
            l = i + 1 - l;
            b = prev;
            last_d = d;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    c.resize(l + 1, 0);
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn toy() -> GrsCode {
        let f = Field::new(5, 1).unwrap();
        GrsCode::new(&f, 2, vec![1, 2, 3, 4], vec![1, 1, 1, 1]).unwrap()
    }

    fn random_code(q: u32, n: usize, k: usize, seed: u64) -> GrsCode {
        let f = Field::with_order(q).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut pts: Vec<u16> = (1..q as u16).collect();
        pts.shuffle(&mut rng);
        pts.truncate(n);
        let x = (0..n).map(|_| rng.random_range(1..q as u16)).collect();
        GrsCode::new(&f, k, pts, x).unwrap()
    }

    #[test]
    fn toy_generator() {
        let c = toy();
        assert_eq!(c.generator(), &Matrix::from_rows(&[vec![1, 1, 1, 1], vec![1, 2, 3, 4]]));
        assert_eq!(c.t(), 1);
        assert_eq!(c.encode(&[1, 0]).unwrap(), vec![1, 1, 1, 1]);
        assert_eq!(c.encode(&[0, 1]).unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(c.encode(&[0, 0]).unwrap(), vec![0; 4]);
    }

    #[test]
    fn parity_check_annihilates_generator() {
        for code in [toy(), random_code(64, 62, 30, 3)] {
            let h = code.parity_check();
            let prod = code.generator().mul(code.field(), &h.transpose());
            assert!(prod.is_zero());
        }
    }

    #[test]
    fn toy_single_error() {
        let d = toy().decode(&[1, 3, 1, 1]).unwrap();
        assert_eq!(d.message, vec![1, 0]);
        assert_eq!(d.error, vec![0, 2, 0, 0]);
    }

    #[test]
    fn reference_radii() {
        assert_eq!(random_code(256, 180, 96, 1).t(), 42);
        assert_eq!(random_code(64, 62, 30, 1).t(), 16);
    }

    #[test]
    fn construction_errors() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(
            GrsCode::new(&f, 2, vec![1, 2, 2, 4], vec![1; 4]),
            Err(GrsError::RepeatedAlpha(1, 2))
        );
        assert_eq!(GrsCode::new(&f, 2, vec![0, 1, 2, 3], vec![1; 4]), Err(GrsError::ZeroAlpha(0)));
        assert_eq!(
            GrsCode::new(&f, 2, vec![1, 2, 3, 4], vec![1, 0, 1, 1]),
            Err(GrsError::ZeroMultiplier(1))
        );
        assert_eq!(
            GrsCode::new(&f, 2, vec![1, 2, 3, 4, 0], vec![1; 5]),
            Err(GrsError::TooLong { n: 5, max: 4 })
        );
        assert_eq!(
            GrsCode::new(&f, 4, vec![1, 2, 3, 4], vec![1; 4]),
            Err(GrsError::BadDimension { n: 4, k: 4 })
        );
        assert!(toy().encode(&[1]).is_err());
        assert_eq!(toy().decode(&[1, 2, 3]), Err(DecodeFailure::LengthMismatch));
    }

    #[test]
    fn toy_exhaustive_against_brute_force() {
        let code = toy();
        let f = code.field();
        let codewords: Vec<(Vec<u16>, Vec<u16>)> = (0..25u16)
            .map(|i| {
                let u = vec![i % 5, i / 5];
                let c = code.encode(&u).unwrap();
                (u, c)
            })
            .collect();
        for idx in 0..625u16 {
            let y: Vec<u16> = (0..4).map(|j| (idx / 5u16.pow(j)) % 5).collect();
            let near: Vec<_> = codewords
                .iter()
                .filter(|(_, c)| c.iter().zip(&y).filter(|(a, b)| a != b).count() <= 1)
                .collect();
            match code.decode(&y) {
                Ok(d) => {
                    assert!(d.error_weight() <= 1);
                    let c = code.encode(&d.message).unwrap();
                    let sum: Vec<u16> = c.iter().zip(&d.error).map(|(&a, &b)| f.add(a, b)).collect();
                    assert_eq!(sum, y);
                    assert_eq!(near.len(), 1);
                    assert_eq!(near[0].0, d.message);
                }
                Err(_) => assert!(near.is_empty(), "missed {y:?}"),
            }
        }
    }

    #[test]
    fn any_k_columns_independent() {
        let code = random_code(64, 62, 30, 9);
        let mut rng = ChaCha20Rng::seed_from_u64(10);
        let mut cols: Vec<usize> = (0..62).collect();
        for _ in 0..100 {
            cols.shuffle(&mut rng);
            let sub = code.generator().select_columns(&cols[..30]);
            assert_eq!(sub.rank(code.field()), 30);
        }
    }

    fn round_trips(q: u32, n: usize, k: usize, trials: usize) {
        let code = random_code(q, n, k, 42);
        let f = code.field().clone();
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let mut pos: Vec<usize> = (0..n).collect();
        for trial in 0..trials {
            let u: Vec<u16> = (0..k).map(|_| rng.random_range(0..q as u16)).collect();
            let mut y = code.encode(&u).unwrap();
            let w = if trial == 0 { code.t() } else { rng.random_range(0..=code.t()) };
            pos.shuffle(&mut rng);
            let mut e = vec![0u16; n];
            for &p in &pos[..w] {
                e[p] = rng.random_range(1..q as u16);
                y[p] = f.add(y[p], e[p]);
            }
            let d = code.decode(&y).unwrap();
            assert_eq!(d.message, u);
            assert_eq!(d.error, e);
        }
    }

    #[test]
    fn round_trip_62_30() {
        round_trips(64, 62, 30, 1000);
    }

    #[test]
    fn round_trip_180_96() {
        round_trips(256, 180, 96, 1000);
    }

    #[test]
    fn round_trip_odd_characteristic() {
        round_trips(17, 16, 7, 500);
    }

    #[test]
    fn too_many_errors_never_violate_contract() {
        let code = random_code(64, 40, 20, 5);
        let f = code.field().clone();
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for _ in 0..300 {
            let y: Vec<u16> = (0..40).map(|_| rng.random_range(0..64)).collect();
            if let Ok(d) = code.decode(&y) {
                assert!(d.error_weight() <= code.t());
                let c = code.encode(&d.message).unwrap();
                let sum: Vec<u16> = c.iter().zip(&d.error).map(|(&a, &b)| f.add(a, b)).collect();
                assert_eq!(sum, y);
            }
        }
    }
}
