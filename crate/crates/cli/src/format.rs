//! Binary files for keys and ciphertexts.
//!
//! Layout: a 5-byte magic, a fixed little-endian header, then field elements
//! as little-endian `u16` in row-major coefficient order.
//!
//! | field       | type | note                          |
//! |-------------|------|-------------------------------|
//! | p           | u16  | characteristic                |
//! | m           | u8   | extension degree              |
//! | n           | u16  |                               |
//! | k           | u16  |                               |
//! | mu          | u8   |                               |
//! | nu          | u8   |                               |
//! | err_budget  | u16  | window error budget           |
//! | sigma       | u16  | `0xFFFF` when unset           |
//! | block_count | u32  | number of coefficient blocks  |
//!
//! Payloads:
//! * public key: `G'_0 .. G'_(mu+nu)`, each `k x n`;
//! * secret key: `S_mu .. S_nu` (`k x k`), `alpha`, `x`, `Gamma` as indices,
//!   then `T_-mu .. T_mu` (`n x n`);
//! * ciphertext: `y_0 .. y_L`, each of length `n`. With `sigma` set the blocks
//!   are consecutive frames of `2 mu + sigma + 1` blocks each.

use convmc::crypto::Ciphertext;
use convmc::field::{Field, FieldError};
use convmc::grs::{GrsCode, GrsError};
use convmc::keygen::{KeygenError, PublicKey, SecretKey};
use convmc::laurent::{BlockSequence, LaurentMatrix};
use convmc::matrix::Matrix;
use thiserror::Error;

pub const PUBLIC_MAGIC: &[u8; 5] = b"CMPK1";
pub const SECRET_MAGIC: &[u8; 5] = b"CMSK1";
pub const CIPHER_MAGIC: &[u8; 5] = b"CMCT1";

const SIGMA_UNSET: u16 = 0xFFFF;
const HEADER_LEN: usize = 2 + 1 + 2 + 2 + 1 + 1 + 2 + 2 + 4;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("bad magic: expected {expected:?}")]
    BadMagic { expected: &'static str },
    #[error("file truncated")]
    Truncated,
    #[error("{0} unexpected trailing bytes")]
    TrailingBytes(usize),
    #[error("header field {field} out of range: {value}")]
    BadHeader { field: &'static str, value: u64 },
    #[error("symbol {0} is not a field element")]
    BadSymbol(u16),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Grs(#[from] GrsError),
    #[error(transparent)]
    Keygen(#[from] KeygenError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub p: u16,
    pub m: u8,
    pub n: u16,
    pub k: u16,
    pub mu: u8,
    pub nu: u8,
    pub err_budget: u16,
    pub sigma: Option<u16>,
    pub block_count: u32,
}

impl Header {
    fn encode(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.p.to_le_bytes());
        out.push(self.m);
        out.extend_from_slice(&self.n.to_le_bytes());
        out.extend_from_slice(&self.k.to_le_bytes());
        out.push(self.mu);
        out.push(self.nu);
        out.extend_from_slice(&self.err_budget.to_le_bytes());
        out.extend_from_slice(&self.sigma.unwrap_or(SIGMA_UNSET).to_le_bytes());
        out.extend_from_slice(&self.block_count.to_le_bytes());
    }

    fn decode(r: &mut Reader<'_>) -> Result<Header, FormatError> {
        let p = r.u16()?;
        let m = r.u8()?;
        let n = r.u16()?;
        let k = r.u16()?;
        let mu = r.u8()?;
        let nu = r.u8()?;
        let err_budget = r.u16()?;
        let sigma = r.u16()?;
        let block_count = r.u32()?;
        Ok(Header {
            p,
            m,
            n,
            k,
            mu,
            nu,
            err_budget,
            sigma: (sigma != SIGMA_UNSET).then_some(sigma),
            block_count,
        })
    }

    pub fn field(&self) -> Result<Field, FormatError> {
        Ok(Field::new(u32::from(self.p), u32::from(self.m))?)
    }

    fn expect_blocks(&self, want: usize) -> Result<(), FormatError> {
        if self.block_count as usize != want {
            return Err(FormatError::BadHeader { field: "block_count", value: u64::from(self.block_count) });
        }
        Ok(())
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(bytes: &'a [u8], magic: &'static [u8; 5]) -> Result<Reader<'a>, FormatError> {
        if bytes.len() < magic.len() + HEADER_LEN {
            return Err(if bytes.starts_with(magic) || bytes.len() < magic.len() {
                FormatError::Truncated
            } else {
                FormatError::BadMagic { expected: std::str::from_utf8(magic).unwrap_or("?") }
            });
        }
        if &bytes[..5] != magic {
            return Err(FormatError::BadMagic { expected: std::str::from_utf8(magic).unwrap_or("?") });
        }
        Ok(Reader { bytes, pos: 5 })
    }

    fn take(&mut self, len: usize) -> Result<&'a [u8], FormatError> {
        let end = self.pos.checked_add(len).ok_or(FormatError::Truncated)?;
        let s = self.bytes.get(self.pos..end).ok_or(FormatError::Truncated)?;
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8, FormatError> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, FormatError> {
        let b = self.take(2)?;
        Ok(u16::from_le_bytes([b[0], b[1]]))
    }

    fn u32(&mut self) -> Result<u32, FormatError> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn symbols(&mut self, count: usize, q: u32) -> Result<Vec<u16>, FormatError> {
        let raw = self.take(count.checked_mul(2).ok_or(FormatError::Truncated)?)?;
        raw.chunks_exact(2)
            .map(|c| {
                let v = u16::from_le_bytes([c[0], c[1]]);
                if u32::from(v) < q {
                    Ok(v)
                } else {
                    Err(FormatError::BadSymbol(v))
                }
            })
            .collect()
    }

    fn matrix(&mut self, rows: usize, cols: usize, q: u32) -> Result<Matrix, FormatError> {
        Ok(Matrix::from_vec(rows, cols, self.symbols(rows * cols, q)?))
    }

    fn finish(self) -> Result<(), FormatError> {
        match self.bytes.len() - self.pos {
            0 => Ok(()),
            extra => Err(FormatError::TrailingBytes(extra)),
        }
    }
}

fn put_symbols(out: &mut Vec<u8>, symbols: &[u16]) {
    for s in symbols {
        out.extend_from_slice(&s.to_le_bytes());
    }
}

fn narrow<T: TryFrom<usize>>(field: &'static str, v: usize) -> Result<T, FormatError> {
    T::try_from(v).map_err(|_| FormatError::BadHeader { field, value: v as u64 })
}

fn base_header(field: &Field, n: usize, k: usize, mu: usize, nu: usize, budget: usize) -> Result<Header, FormatError> {
    Ok(Header {
        p: narrow("p", field.characteristic() as usize)?,
        m: narrow("m", field.degree() as usize)?,
        n: narrow("n", n)?,
        k: narrow("k", k)?,
        mu: narrow("mu", mu)?,
        nu: narrow("nu", nu)?,
        err_budget: narrow("err_budget", budget)?,
        sigma: None,
        block_count: 0,
    })
}

fn sigma_field(sigma: Option<usize>) -> Result<Option<u16>, FormatError> {
    match sigma {
        Some(s) if s >= SIGMA_UNSET as usize => Err(FormatError::BadHeader { field: "sigma", value: s as u64 }),
        Some(s) => Ok(Some(s as u16)),
        None => Ok(None),
    }
}

pub fn write_public(pk: &PublicKey) -> Result<Vec<u8>, FormatError> {
    let mut h = base_header(pk.field(), pk.n(), pk.k(), pk.mu(), pk.nu(), pk.err_budget())?;
    h.sigma = sigma_field(pk.sigma())?;
    h.block_count = narrow("block_count", pk.memory() + 1)?;
    let mut out = PUBLIC_MAGIC.to_vec();
    h.encode(&mut out);
    for j in 0..=pk.memory() as i32 {
        put_symbols(&mut out, pk.g_prime().coeff(j).data());
    }
    Ok(out)
}

pub fn read_public(bytes: &[u8]) -> Result<PublicKey, FormatError> {
    let mut r = Reader::new(bytes, PUBLIC_MAGIC)?;
    let h = Header::decode(&mut r)?;
    let field = h.field()?;
    let (n, k, mu, nu) = (h.n as usize, h.k as usize, h.mu as usize, h.nu as usize);
    h.expect_blocks(mu + nu + 1)?;
    let q = field.order();
    let coeffs = (0..=mu + nu).map(|_| r.matrix(k, n, q)).collect::<Result<Vec<_>, _>>()?;
    r.finish()?;
    let g = LaurentMatrix::from_coeffs(&field, k, n, 0, coeffs);
    Ok(PublicKey::new(g, h.err_budget as usize, mu, nu, h.sigma.map(usize::from))?)
}

pub fn write_secret(sk: &SecretKey) -> Result<Vec<u8>, FormatError> {
    let code = sk.code();
    let (mu, nu) = (sk.mu(), sk.nu());
    let mut h = base_header(sk.field(), code.n(), code.k(), mu, nu, sk.err_budget())?;
    h.block_count = narrow("block_count", nu - mu + 1)?;
    let mut out = SECRET_MAGIC.to_vec();
    h.encode(&mut out);
    for j in mu..=nu {
        put_symbols(&mut out, sk.s().coeff(j as i32).data());
    }
    put_symbols(&mut out, code.alpha());
    put_symbols(&mut out, code.multipliers());
    let gamma = sk.gamma().iter().map(|&g| narrow("gamma", g)).collect::<Result<Vec<u16>, _>>()?;
    put_symbols(&mut out, &gamma);
    let mu = mu as i32;
    for j in -mu..=mu {
        put_symbols(&mut out, sk.t().coeff(j).data());
    }
    Ok(out)
}

pub fn read_secret(bytes: &[u8]) -> Result<SecretKey, FormatError> {
    let mut r = Reader::new(bytes, SECRET_MAGIC)?;
    let h = Header::decode(&mut r)?;
    let field = h.field()?;
    let q = field.order();
    let (n, k, mu, nu) = (h.n as usize, h.k as usize, h.mu as usize, h.nu as usize);
    if nu < mu {
        return Err(FormatError::BadHeader { field: "nu", value: nu as u64 });
    }
    h.expect_blocks(nu - mu + 1)?;
    let s_coeffs = (mu..=nu).map(|_| r.matrix(k, k, q)).collect::<Result<Vec<_>, _>>()?;
    let alpha = r.symbols(n, q)?;
    let x = r.symbols(n, q)?;
    let gamma: Vec<usize> = r.symbols(n, u32::MAX)?.into_iter().map(usize::from).collect();
    let t_coeffs = (0..2 * mu + 1).map(|_| r.matrix(n, n, q)).collect::<Result<Vec<_>, _>>()?;
    r.finish()?;
    let s = LaurentMatrix::from_coeffs(&field, k, k, mu as i32, s_coeffs);
    let t = LaurentMatrix::from_coeffs(&field, n, n, -(mu as i32), t_coeffs);
    let code = GrsCode::new(&field, k, alpha, x)?;
    Ok(SecretKey::from_parts(s, code, gamma, t, mu, nu, h.err_budget as usize)?)
}

/// Writes `ct` with the parameters of the key it was made under.
pub fn write_ciphertext(pk: &PublicKey, ct: &Ciphertext) -> Result<Vec<u8>, FormatError> {
    let mut h = base_header(pk.field(), pk.n(), pk.k(), pk.mu(), pk.nu(), pk.err_budget())?;
    h.sigma = sigma_field(ct.sigma())?;
    h.block_count = narrow("block_count", ct.len())?;
    let mut out = CIPHER_MAGIC.to_vec();
    h.encode(&mut out);
    for b in ct.blocks().blocks() {
        put_symbols(&mut out, b);
    }
    Ok(out)
}

pub fn read_ciphertext(bytes: &[u8]) -> Result<(Header, Ciphertext), FormatError> {
    let mut r = Reader::new(bytes, CIPHER_MAGIC)?;
    let h = Header::decode(&mut r)?;
    let q = h.field()?.order();
    let n = h.n as usize;
    let blocks = (0..h.block_count).map(|_| r.symbols(n, q)).collect::<Result<Vec<_>, _>>()?;
    r.finish()?;
    let ct = Ciphertext::new(BlockSequence::new(n, blocks), h.sigma.map(usize::from));
    Ok((h, ct))
}

#[cfg(test)]
mod tests {
    use super::*;
    use convmc::keygen::{keygen, keygen_classical, KeyParams};

    #[test]
    fn public_round_trip() {
        let (_, pk) = keygen(&KeyParams::new(2, 5, 20, 8, 1, 2, vec![4, 12, 4]).with_seed(1)).unwrap();
        let pk = pk.with_sigma(Some(5));
        let bytes = write_public(&pk).unwrap();
        assert_eq!(bytes.len(), 5 + HEADER_LEN + 2 * 8 * 20 * 4);
        assert_eq!(read_public(&bytes).unwrap(), pk);
    }

    #[test]
    fn secret_round_trip() {
        let (sk, _) = keygen(&KeyParams::new(3, 1, 2, 1, 0, 0, vec![2]).with_seed(1)).unwrap();
        let bytes = write_secret(&sk).unwrap();
        assert_eq!(write_secret(&read_secret(&bytes).unwrap()).unwrap(), bytes);
        let (sk, _) = keygen_classical(2, 4, 10, 4, 2).unwrap();
        let bytes = write_secret(&sk).unwrap();
        let back = read_secret(&bytes).unwrap();
        assert!(back.mask().is_none());
        assert_eq!(write_secret(&back).unwrap(), bytes);
    }

    #[test]
    fn rejects_damage() {
        let (_, pk) = keygen(&KeyParams::new(2, 5, 20, 8, 1, 2, vec![4, 12, 4]).with_seed(1)).unwrap();
        let bytes = write_public(&pk).unwrap();
        assert!(matches!(read_public(&bytes[..bytes.len() - 1]), Err(FormatError::Truncated)));
        let mut extra = bytes.clone();
        extra.push(0);
        assert!(matches!(read_public(&extra), Err(FormatError::TrailingBytes(1))));
        assert!(matches!(read_secret(&bytes), Err(FormatError::BadMagic { .. })));
        let mut bad = bytes.clone();
        let last = bad.len() - 2;
        bad[last] = 0xFF;
        assert!(matches!(read_public(&bad), Err(FormatError::BadSymbol(_))));
        assert!(matches!(read_public(b"CM"), Err(FormatError::Truncated)));
    }
}
