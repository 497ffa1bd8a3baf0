//! Work-factor and size calculators.
//!
//! The Stern estimate is evaluated in log2 space from log-gamma binomials and
//! minimized over an exhaustive integer grid of `(p, l)`.

use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::crypto::max_total_weight;
use crate::keygen::{count_s, count_t_bound, symmetric_counts, KeyParams, KeygenError, PublicKey};
use crate::matrix::Matrix;

/// Largest truncated sliding matrix, in entries, that [`rank_truncated`] builds.
pub const RANK_ENTRY_LIMIT: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("invalid decoding instance: {0}")]
    BadInstance(&'static str),
    #[error("truncated sliding matrix has {0} entries, above the limit")]
    TooLarge(usize),
    #[error(transparent)]
    Keygen(#[from] KeygenError),
}

/// A generic decoding problem: `r` errors in a random `[N, K]` code over GF(q).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsdInstance {
    pub q: u64,
    pub m: u32,
    pub n: usize,
    pub k: usize,
    pub r: usize,
}

impl IsdInstance {
    /// Instance for the full-rank sliding matrix over `s + 1` message blocks,
    /// with the maximal admissible error weight.
    pub fn full_rank(m: u32, n: usize, k: usize, mu: usize, nu: usize, s: usize) -> IsdInstance {
        let t = (n - k) / 2;
        IsdInstance {
            q: 1u64 << m,
            m,
            n: n * (s + 1 + mu + nu),
            k: k * (s + 1),
            r: max_total_weight(t, s, mu, nu),
        }
    }

    fn validate(&self) -> Result<(), AnalysisError> {
        if self.k == 0 || self.k >= self.n {
            return Err(AnalysisError::BadInstance("need 0 < K < N"));
        }
        if self.r > self.n - self.k {
            return Err(AnalysisError::BadInstance("more errors than redundancy"));
        }
        if self.q < 2 {
            return Err(AnalysisError::BadInstance("q < 2"));
        }
        Ok(())
    }
}

/// Which numerator the estimate uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WfVariant {
    /// `m S C(N, r) C(N-K-l, r-2p)^-1 C(K/2, p)^-2`: the expected number of
    /// iterations times the cost of one iteration.
    #[default]
    Peters,
    /// `m S C(N, r)^2 C(N-K-l, r-2p) C(K/2, p)^-2`.
    SquaredNumerator,
}

/// Minimum of the estimate and its arguments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkFactor {
    pub log2: f64,
    pub p: usize,
    pub l: usize,
}

fn log2_binom(n: f64, k: f64) -> Option<f64> {
    if k < 0.0 || k > n {
        return None;
    }
    Some((ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)) / std::f64::consts::LN_2)
}

/// `log2(sum 2^x_i)` over the present terms.
fn log2_sum(terms: &[Option<f64>]) -> f64 {
    let max = terms.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().flatten().map(|&x| (x - max).exp2()).sum::<f64>().log2()
}

/// log2 of the estimate at a single grid point, or `None` where a binomial vanishes.
pub fn wf_stern_at(inst: &IsdInstance, p: usize, l: usize, variant: WfVariant) -> Option<f64> {
    let (n, k, r) = (inst.n as f64, inst.k as f64, inst.r as f64);
    let (pf, lf) = (p as f64, l as f64);
    let q = inst.q as f64;
    let half = k / 2.0;
    let bk = log2_binom(half, pf)?;
    let rest = log2_binom(n - k - lf, r - 2.0 * pf)?;
    let lq1 = (q - 1.0).log2();

    let t1 = ((n - k) * (n - k) * (n + k)).log2();
    let t2 = (l > 0).then(|| {
        let inner = log2_sum(&[(half - pf + 1.0 > 0.0).then(|| (half - pf + 1.0).log2()), Some(bk + pf * lq1)]);
        lf.log2() + inner
    });
    let free = r - 2.0 * pf + 1.0;
    let t3 = (free > 0.0).then(|| {
        (2.0 * q * r * free * (2.0 * q - 3.0)).log2() + (2.0 * pf - 2.0) * lq1 - lf * q.log2() + 2.0 * bk
    });
    let s = log2_sum(&[Some(t1), t2, t3]);
    let nr = log2_binom(n, r)?;
    let m = f64::from(inst.m).log2();
    Some(match variant {
        WfVariant::Peters => m + s + nr - rest - 2.0 * bk,
        WfVariant::SquaredNumerator => m + s + 2.0 * nr + rest - 2.0 * bk,
    })
}

/// Minimizes the estimate over `p in [0, min(r/2, K/2)]`, `l in [0, N-K]`.
/// Ties go to the smaller `p`, then the smaller `l`.
pub fn wf_stern(inst: &IsdInstance, variant: WfVariant) -> Result<WorkFactor, AnalysisError> {
    inst.validate()?;
    let mut best: Option<WorkFactor> = None;
    for p in 0..=(inst.r / 2).min(inst.k / 2) {
        for l in 0..=inst.n - inst.k {
            let Some(v) = wf_stern_at(inst, p, l, variant) else {
                if inst.n - inst.k - l < inst.r.saturating_sub(2 * p) {
                    break;
                }
                continue;
            };
            if best.is_none_or(|b| v < b.log2) {
                best = Some(WorkFactor { log2: v, p, l });
            }
        }
    }
    best.ok_or(AnalysisError::BadInstance("empty parameter grid"))
}

/// Security from the rank deficiency of the first block: `m (k - d_mu)` bits.
pub fn wf_rank_deficiency(k: usize, d_mu: usize, m: u32) -> f64 {
    f64::from(m) * k.saturating_sub(d_mu) as f64
}

/// log2 of the extra factor `q^(k(s+1) - k_s)` an attacker pays when the
/// truncated sliding matrix has rank `k_s` over `s + 1` blocks.
pub fn truncation_penalty(k: usize, s: usize, k_s: usize, m: u32) -> f64 {
    f64::from(m) * (k * (s + 1)).saturating_sub(k_s) as f64
}

/// The block upper-triangular Toeplitz matrix with `G'_(j-i)` in block `(i, j)`
/// for `0 <= i, j <= sigma`.
pub fn truncated_sliding_matrix(pk: &PublicKey, sigma: usize) -> Result<Matrix, AnalysisError> {
    let (k, n) = (pk.k(), pk.n());
    let entries = (sigma + 1) * k * (sigma + 1) * n;
    if entries > RANK_ENTRY_LIMIT {
        return Err(AnalysisError::TooLarge(entries));
    }
    let mut m = Matrix::zeros((sigma + 1) * k, (sigma + 1) * n);
    for i in 0..=sigma {
        for j in i..=sigma {
            if let Some(g) = pk.g_prime().coeff_ref((j - i) as i32) {
                m.set_block(i * k, j * n, g);
            }
        }
    }
    Ok(m)
}

pub fn rank_truncated(pk: &PublicKey, sigma: usize) -> Result<usize, AnalysisError> {
    Ok(truncated_sliding_matrix(pk, sigma)?.rank(pk.field()))
}

fn bits_of(x: usize) -> u64 {
    if x == 0 {
        0
    } else {
        u64::from(x.ilog2()) + 1
    }
}

fn ceil_log2(x: usize) -> u64 {
    if x <= 1 {
        0
    } else {
        u64::from((x - 1).ilog2()) + 1
    }
}

/// Sizes in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct KeySizes {
    pub pub_key: u64,
    /// `S(D)`, `G` and every `T_j` stored as dense matrices.
    pub priv_dense: u64,
    /// `G` as `(alpha, x)`, `T` as `Gamma` and the structure of `A`, and `S(D)`
    /// as its diagonal blocks.
    pub priv_compact: u64,
    /// `Delta` part of [`KeySizes::priv_compact`].
    pub delta: u64,
    /// Full ciphertext for `s + 1` message blocks.
    pub msg: u64,
    /// Truncated ciphertext for `sigma + 1` message blocks.
    pub alt_msg: u64,
    /// Plaintext carried by the truncated ciphertext.
    pub alt_plain: u64,
    /// `k (sigma + 1) / (n (sigma + 2 mu + 1))`.
    pub alt_rate: f64,
}

/// Bits per field element: `ceil(log2 q)`, i.e. `m` for `q = 2^m`.
pub fn symbol_bits(params: &KeyParams) -> u64 {
    ceil_log2(params.q() as usize)
}

pub fn key_sizes(params: &KeyParams, s: usize, sigma: usize) -> KeySizes {
    let m = symbol_bits(params);
    let (n, k, mu, nu) = (params.n as u64, params.k as u64, params.mu as u64, params.nu as u64);
    let h = params.n_half();
    let eps = params.block_size() as u64;
    let r = params.s_blocks as u64;

    let pub_key = m * n * k * (mu + nu + 1);
    let priv_dense = m * (nu - mu + 1) * k * k + m * n * k + m * (2 * mu + 1) * n * n;

    let s_bits = m * (nu - mu + 1) * r * eps * eps;
    let g_bits = 2 * m * n;
    let gamma_bits = n * bits_of(params.n);
    let dmax = params.d.iter().copied().max().unwrap_or(0);
    // diagonal: permutation of the n/2 entries, the partition, the scalars;
    // above it: up to 2 mu entries per row, each a position pair plus a value
    // and a power tag
    let bh = bits_of(h);
    let delta = h as u64 * bh
        + (2 * mu + 1) * bits_of(dmax)
        + m * h as u64
        + 2 * mu * bh * bh * (m + ceil_log2(2 * params.mu + 1));
    let priv_compact = s_bits + g_bits + gamma_bits + delta;

    KeySizes {
        pub_key,
        priv_dense,
        priv_compact,
        delta,
        msg: m * n * (s as u64 + 1 + mu + nu),
        alt_msg: m * n * (sigma as u64 + 2 * mu + 1),
        alt_plain: m * k * (sigma as u64 + 1),
        alt_rate: (k * (sigma as u64 + 1)) as f64 / (n * (sigma as u64 + 2 * mu + 1)) as f64,
    }
}

/// How the message is sent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Full ciphertext for `s + 1` message blocks.
    Full { s: usize },
    /// Truncated ciphertext for `sigma + 1` message blocks.
    Alternative { sigma: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecurityReport {
    pub mode: Mode,
    /// Stern estimate on the full-rank sliding matrix (full mode only).
    pub wf_full: Option<WorkFactor>,
    pub wf_truncated: f64,
    pub sizes: KeySizes,
    pub count_t_log2: f64,
    pub count_s_log2: f64,
}

pub fn security_report(params: &KeyParams, mode: Mode) -> Result<SecurityReport, AnalysisError> {
    params.validate()?;
    let m = symbol_bits(params) as u32;
    let d_mu = params.d_at(params.mu as i32);
    let (s, sigma) = match mode {
        Mode::Full { s } => (s, 0),
        Mode::Alternative { sigma } => (0, sigma),
    };
    let wf_full = match mode {
        Mode::Full { s } => {
            let mut inst = IsdInstance::full_rank(m, params.n, params.k, params.mu, params.nu, s);
            inst.q = params.q();
            Some(wf_stern(&inst, WfVariant::Peters)?)
        }
        Mode::Alternative { .. } => None,
    };
    Ok(SecurityReport {
        mode,
        wf_full,
        wf_truncated: wf_rank_deficiency(params.k, d_mu, m),
        sizes: key_sizes(params, s, sigma),
        count_t_log2: count_t_bound(params).log2,
        count_s_log2: count_s(params).log2,
    })
}

/// One line of the parameter table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub n: usize,
    pub k: usize,
    pub s: Option<usize>,
    pub wf_truncated: Option<f64>,
    pub wf_full: Option<f64>,
    pub pub_bits: u64,
}

/// Smallest `m` with `n <= 2^m - 1`.
pub fn field_degree_for(n: usize) -> u32 {
    (n + 1).next_power_of_two().trailing_zeros()
}

/// Row for a key with `mu = 1`, `nu = 2`, GF(2^m) of the smallest size that fits `n`.
pub fn table_row(n: usize, k: usize, d: Vec<usize>, s: Option<usize>) -> Result<TableRow, AnalysisError> {
    let m = field_degree_for(n);
    let params = KeyParams::new(2, m, n, k, 1, 2, d);
    let mode = s.map_or(Mode::Alternative { sigma: 0 }, |s| Mode::Full { s });
    let report = security_report(&params, mode)?;
    Ok(TableRow {
        n,
        k,
        s,
        wf_truncated: Some(report.wf_truncated),
        wf_full: report.wf_full.map(|w| w.log2),
        pub_bits: report.sizes.pub_key,
    })
}

/// Reference rows: memory-2 keys in full and truncated mode, followed by two
/// Goppa-code McEliece sizes counted as `k (n - k)` bits.
pub fn parameter_table() -> Result<Vec<TableRow>, AnalysisError> {
    let full: [(usize, usize, usize); 7] = [
        (62, 30, 46),
        (126, 66, 20),
        (174, 78, 15),
        (264, 108, 10),
        (180, 96, 30),
        (228, 108, 25),
        (254, 122, 22),
    ];
    let alt: [(usize, usize); 6] = [(66, 42), (78, 54), (78, 66), (138, 78), (156, 84), (132, 108)];
    let mut rows = Vec::new();
    for (i, &(n, k, s)) in full.iter().enumerate() {
        let d = if i == 0 { vec![8, 46, 8] } else { symmetric_counts(n, 1) };
        rows.push(table_row(n, k, d, Some(s))?);
    }
    for &(n, k) in &alt {
        rows.push(table_row(n, k, symmetric_counts(n, 1), None)?);
    }
    for (n, k) in [(2960usize, 2288usize), (8192, 6528)] {
        rows.push(TableRow {
            n,
            k,
            s: None,
            wf_truncated: None,
            wf_full: None,
            pub_bits: (k * (n - k)) as u64,
        });
    }
    Ok(rows)
}

fn cell(v: Option<f64>, digits: usize) -> String {
    v.map_or(String::new(), |x| format!("{x:.digits$}"))
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("n,k,s_or_sigma,wf_trunc_log2,wf_full_log2,pub_bits\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n,
            r.k,
            r.s.map_or(String::new(), |s| s.to_string()),
            cell(r.wf_truncated, 0),
            cell(r.wf_full, 3),
            r.pub_bits
        ));
    }
    out
}

pub fn table_text(rows: &[TableRow]) -> String {
    let mut out = format!("{:>6} {:>6} {:>4} {:>10} {:>10} {:>10}\n", "n", "k", "s", "WF trunc", "WF full", "pub bits");
    for r in rows {
        let exp = |v: Option<f64>, d: usize| v.map_or(String::new(), |x| format!("2^{x:.d$}"));
        out.push_str(&format!(
            "{:>6} {:>6} {:>4} {:>10} {:>10} {:>10}\n",
            r.n,
            r.k,
            r.s.map_or(String::new(), |s| s.to_string()),
            exp(r.wf_truncated, 0),
            exp(r.wf_full, 1),
            r.pub_bits
        ));
    }
    out
}
