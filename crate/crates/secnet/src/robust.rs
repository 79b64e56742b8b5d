//! The randomized robust code: invertible pre-coder, Vandermonde side
//! information, and a Gaussian-elimination decoder.
//!
//! For channel parameters with `m0 > m1` the code ships an
//! `(m0 - m1) x n` message `M` through `n` uses of the network. The sender
//! draws an invertible `m3 x m3` pre-coder `U0` and `m = m0 + 1` uniform
//! evaluation points `V_1..V_m`, inputs `U0 [M; 0]`, and sends
//! `(V_1..V_m, U2 = M U1)` out of band, where `U1` is the `n x m` Vandermonde
//! matrix `U1[i][j] = V_j^i` (`i = 1..n`). The receiver picks a maximal
//! independent row set of its observation, solves `U3 (Ybar U1) = U2` by
//! elimination, and reads off `Mhat = U3 Ybar`.
//!
//! Decoding is exact whenever the diagnostic conditions F1/F2 hold; their
//! probability over the key randomness is governed by the collision bound
//! `Pr{x U1 = x' U1} <= (n/q')^m`, which [`collision_oracle`] checks by
//! exhaustive enumeration on small instances.

use num_rational::Ratio;
use rand::Rng;
use thiserror::Error;

use crate::field::{FieldError, FieldSpec};
use crate::linalg::{image_intersection_dim, solve_left, FqMatrix, LinalgError};
use crate::net::TransferMatrices;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RobustError {
    #[error("invalid code parameters: {0}")]
    Params(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("decoding failed: the side-information system has no solution")]
    DecodeFailure,
    #[error("bad side-information bytes: {0}")]
    BadSideInfo(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Code parameters over the (possibly lifted) field `F_{q'}`.
#[derive(Debug, Clone)]
pub struct RobustCodeParams {
    spec: FieldSpec,
    n: usize,
    m0: usize,
    m1: usize,
    m3: usize,
    m4: usize,
}

impl RobustCodeParams {
    pub fn new(
        spec: &FieldSpec,
        n: usize,
        m0: usize,
        m1: usize,
        m3: usize,
        m4: usize,
    ) -> Result<RobustCodeParams, RobustError> {
        if m0 <= m1 {
            return Err(RobustError::Params(format!(
                "need m0 > m1, got m0={m0} m1={m1}"
            )));
        }
        if n == 0 {
            return Err(RobustError::Params("block length n must be >= 1".into()));
        }
        if m3 < m0 - m1 {
            return Err(RobustError::Params(format!(
                "m3={m3} cannot carry an (m0-m1)={} row message",
                m0 - m1
            )));
        }
        Ok(RobustCodeParams {
            spec: spec.clone(),
            n,
            m0,
            m1,
            m3,
            m4,
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m0(&self) -> usize {
        self.m0
    }

    pub fn m1(&self) -> usize {
        self.m1
    }

    pub fn m3(&self) -> usize {
        self.m3
    }

    pub fn m4(&self) -> usize {
        self.m4
    }

    /// Number of evaluation points, m = m0 + 1.
    pub fn m(&self) -> usize {
        self.m0 + 1
    }

    /// Message rows m0 - m1.
    pub fn message_rows(&self) -> usize {
        self.m0 - self.m1
    }

    /// The embedding [I; 0] from the message rows into the channel input.
    pub fn embedding(&self) -> FqMatrix {
        let k = self.message_rows();
        FqMatrix::from_fn(&self.spec, self.m3, k, |i, j| u64::from(i == j))
    }

    /// Side-information size in field elements: m + (m0 - m1) * m.
    pub fn side_info_elements(&self) -> usize {
        self.m() + self.message_rows() * self.m()
    }

    /// Upper bound on the probability that condition F2 fails over fresh key
    /// randomness: `n^(m0+1) / q'`.
    pub fn f2_failure_bound(&self) -> f64 {
        let num = (self.n as f64).powi(self.m0 as i32 + 1);
        num / self.spec.order() as f64
    }
}

/// Keygen output: the pre-coder, the evaluation points, and the Vandermonde
/// matrix they define.
#[derive(Debug, Clone)]
pub struct RobustCodeInstance {
    pub u0: FqMatrix,
    pub v: Vec<u64>,
    pub u1: FqMatrix,
}

/// The out-of-band secret data the decoder needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideInfo {
    pub v: Vec<u64>,
    pub u2: FqMatrix,
}

/// The `n x m` matrix `U1[i][j] = V_j^i` with exponents `i = 1..n`.
pub fn vandermonde(spec: &FieldSpec, v: &[u64], n: usize) -> FqMatrix {
    FqMatrix::from_fn(spec, n, v.len(), |i, j| spec.pow(v[j], (i + 1) as u64))
}

/// Draws `U0` uniformly from GL(m3, q') and the evaluation points i.i.d.
/// uniform.
pub fn keygen<R: Rng + ?Sized>(params: &RobustCodeParams, rng: &mut R) -> RobustCodeInstance {
    let spec = params.spec();
    let u0 = FqMatrix::random_invertible(spec, params.m3, rng);
    let v: Vec<u64> = (0..params.m()).map(|_| spec.random_code(rng)).collect();
    let u1 = vandermonde(spec, &v, params.n);
    RobustCodeInstance { u0, v, u1 }
}

/// Encodes a message: channel input `U0 [M; 0]` plus the side information
/// `(V, U2 = M U1)`.
pub fn encode(
    message: &FqMatrix,
    inst: &RobustCodeInstance,
    params: &RobustCodeParams,
) -> Result<(FqMatrix, SideInfo), RobustError> {
    if message.rows() != params.message_rows() || message.cols() != params.n {
        return Err(RobustError::Dimension(format!(
            "message must be {}x{}, got {}x{}",
            params.message_rows(),
            params.n,
            message.rows(),
            message.cols()
        )));
    }
    let padded = params.embedding().mul(message)?;
    let x = inst.u0.mul(&padded)?;
    let u2 = message.mul(&inst.u1)?;
    Ok((
        x,
        SideInfo {
            v: inst.v.clone(),
            u2,
        },
    ))
}

/// Decodes from the observed `m4 x n` matrix and the side information:
/// selects a maximal independent row set `Ybar`, solves
/// `U3 (Ybar U1) = U2`, and returns `Mhat = U3 Ybar`.
pub fn decode(
    y_b: &FqMatrix,
    side: &SideInfo,
    params: &RobustCodeParams,
) -> Result<FqMatrix, RobustError> {
    if y_b.cols() != params.n {
        return Err(RobustError::Dimension(format!(
            "observation must have {} columns, got {}",
            params.n,
            y_b.cols()
        )));
    }
    if side.u2.rows() != params.message_rows() || side.u2.cols() != params.m() {
        return Err(RobustError::Dimension("side info shape".into()));
    }
    let (_, ybar) = y_b.independent_rows();
    let u1 = vandermonde(params.spec(), &side.v, params.n);
    let a = ybar.mul(&u1)?;
    let u3 = match solve_left(&a, &side.u2) {
        Ok(x) => x,
        Err(LinalgError::NoSolution) => return Err(RobustError::DecodeFailure),
        Err(e) => return Err(e.into()),
    };
    Ok(u3.mul(&ybar)?)
}

/// Rank factorization of the injected-noise path: `Hhat_B` is a column basis
/// of `Im H_B` and `Zhat` the coordinates, so `Hhat_B Zhat = H_B Z` exactly.
pub fn reduce_hz(h_b: &FqMatrix, z: &FqMatrix) -> Result<(FqMatrix, FqMatrix), RobustError> {
    let basis = h_b.image_basis();
    if basis.cols() == 0 {
        let zhat = FqMatrix::zeros(h_b.spec(), 0, z.cols());
        return Ok((basis, zhat));
    }
    // coordinates C with basis * C = h_b, then Zhat = C Z
    let c_t = solve_left(&basis.transpose(), &h_b.transpose())?;
    let c = c_t.transpose();
    let zhat = c.mul(z)?;
    debug_assert_eq!(basis.mul(&zhat).unwrap(), h_b.mul(z).unwrap());
    Ok((basis, zhat))
}

/// Diagnostic conditions of the decoder. F1 uses the barred (row-selected)
/// matrices; F1'/F1'' are the unbarred forms that imply it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Conditions {
    pub f1: bool,
    pub f1_prime: bool,
    pub f1_double_prime: bool,
    pub f2: bool,
}

impl Conditions {
    pub fn all(&self) -> bool {
        self.f1 && self.f1_prime && self.f1_double_prime && self.f2
    }
}

/// Evaluates F1/F1'/F1''/F2 for a key instance against the channel and a
/// particular message and (already rank-reduced) injection.
pub fn check_conditions(
    inst: &RobustCodeInstance,
    tm: &TransferMatrices,
    message: &FqMatrix,
    zhat: &FqMatrix,
    params: &RobustCodeParams,
) -> Result<Conditions, RobustError> {
    let p = params.embedding();
    let a1 = tm.k_b.mul(&inst.u0)?.mul(&p)?; // m4 x (m0-m1)
    let hb_hat = tm.h_b.image_basis();
    if zhat.rows() != hb_hat.cols() {
        return Err(RobustError::Dimension(
            "zhat does not match the rank factorization of H_B".into(),
        ));
    }

    let f1_prime = image_intersection_dim(&a1, &hb_hat)? == 0;
    let f1_double_prime = a1.mul(message)?.rank() == message.rank();

    // barred versions: rows of Y_B = A1 M + Hhat_B Zhat selected greedily
    let y_b = a1.mul(message)?.add(&hb_hat.mul(zhat)?)?;
    let (rows, _) = y_b.independent_rows();
    let a1_bar = tm.k_b.select_rows(&rows).mul(&inst.u0)?.mul(&p)?;
    let hb_bar = hb_hat.select_rows(&rows);
    let f1 = image_intersection_dim(&a1_bar, &hb_bar)? == 0
        && a1_bar.mul(message)?.rank() == message.rank();

    let stacked = message.vstack(zhat)?;
    let f2 = stacked.mul(&inst.u1)?.rank() == stacked.rank();

    Ok(Conditions {
        f1,
        f1_prime,
        f1_double_prime,
        f2,
    })
}

/// Field-extension lifting schedule: the smallest degree `t_n` with
/// `q^(t_n) >= n^(m0+1)` (that is, `ceil((m0+1) log n / log q)`), the lifted
/// block length `l_n = t_n * n`, and the extension field itself.
#[derive(Debug, Clone)]
pub struct LiftBlock {
    pub t_n: usize,
    pub l_n: usize,
    pub spec: FieldSpec,
}

pub fn lift_block(base: &FieldSpec, n: usize, m0: usize) -> Result<LiftBlock, RobustError> {
    if n < 2 {
        return Err(RobustError::Params("lift_block needs n >= 2".into()));
    }
    let q = base.order() as u128;
    let target = (n as u128)
        .checked_pow(m0 as u32 + 1)
        .ok_or_else(|| RobustError::Params("n^(m0+1) overflows".into()))?;
    let mut t = 1usize;
    let mut acc = q;
    while acc < target {
        acc = acc
            .checked_mul(q)
            .ok_or_else(|| RobustError::Params("q^t overflows".into()))?;
        t += 1;
    }
    let spec = FieldSpec::extension(base, t, None)?;
    Ok(LiftBlock {
        t_n: t,
        l_n: t * n,
        spec,
    })
}

/// Exhaustively computes `Pr{x U1 = x' U1}` over all (V_1..V_m) tuples. The
/// pre-conditions mirror the analytic bound: `x != x'` and `q^m` enumerable.
pub fn collision_oracle(
    spec: &FieldSpec,
    x: &[u64],
    x_prime: &[u64],
    m: usize,
    cap: u64,
) -> Result<Ratio<u128>, RobustError> {
    if x == x_prime {
        return Err(RobustError::Params("collision oracle needs x != x'".into()));
    }
    if x.len() != x_prime.len() {
        return Err(RobustError::Dimension("x and x' lengths differ".into()));
    }
    let n = x.len();
    let q = spec.order();
    let total = (q as u128).checked_pow(m as u32).filter(|&t| t <= cap as u128);
    let Some(total) = total else {
        return Err(RobustError::Params(format!(
            "q^m = {}^{} exceeds the enumeration cap",
            q, m
        )));
    };
    let mut hits = 0u128;
    let mut v = vec![0u64; m];
    for idx in 0..total {
        let mut k = idx;
        for vj in v.iter_mut() {
            *vj = (k % q as u128) as u64;
            k /= q as u128;
        }
        let collide = v.iter().all(|&vj| {
            // per-column check: sum_i (x_i - x'_i) vj^(i+1) == 0
            let mut acc = 0u64;
            let mut pw = vj;
            for i in 0..n {
                let d = spec.sub(x[i], x_prime[i]);
                acc = spec.add(acc, spec.mul(d, pw));
                pw = spec.mul(pw, vj);
            }
            acc == 0
        });
        if collide {
            hits += 1;
        }
    }
    let prob = Ratio::new(hits, total);
    if n as u64 <= q {
        let bound = Ratio::new((n as u128).pow(m as u32), (q as u128).pow(m as u32));
        assert!(prob <= bound, "collision bound violated: {prob} > {bound}");
    }
    Ok(prob)
}

const SIDE_INFO_MAGIC: &[u8; 4] = b"RSI1";

impl SideInfo {
    /// Versioned wire form: magic, field order, then length-prefixed element
    /// arrays (V's, then U2 row-major), every element as 8 little-endian
    /// bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(24 + 8 * (self.v.len() + self.u2.codes().len()));
        out.extend_from_slice(SIDE_INFO_MAGIC);
        out.extend_from_slice(&self.u2.spec().order().to_le_bytes());
        out.extend_from_slice(&(self.v.len() as u32).to_le_bytes());
        out.extend_from_slice(&(self.u2.rows() as u32).to_le_bytes());
        out.extend_from_slice(&(self.u2.cols() as u32).to_le_bytes());
        for &c in &self.v {
            out.extend_from_slice(&c.to_le_bytes());
        }
        for &c in self.u2.codes() {
            out.extend_from_slice(&c.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(spec: &FieldSpec, bytes: &[u8]) -> Result<SideInfo, RobustError> {
        let bad = |msg: &str| RobustError::BadSideInfo(msg.to_string());
        if bytes.len() < 24 || &bytes[..4] != SIDE_INFO_MAGIC {
            return Err(bad("missing RSI1 header"));
        }
        let order = u64::from_le_bytes(bytes[4..12].try_into().unwrap());
        if order != spec.order() {
            return Err(bad("field order mismatch"));
        }
        let m = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
        let rows = u32::from_le_bytes(bytes[16..20].try_into().unwrap()) as usize;
        let cols = u32::from_le_bytes(bytes[20..24].try_into().unwrap()) as usize;
        let need = 24 + 8 * (m + rows * cols);
        if bytes.len() != need {
            return Err(bad("length mismatch"));
        }
        let read = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
        let mut v = Vec::with_capacity(m);
        for i in 0..m {
            let c = read(24 + 8 * i);
            if c >= spec.order() {
                return Err(bad("element out of range"));
            }
            v.push(c);
        }
        let mut codes = Vec::with_capacity(rows * cols);
        for i in 0..rows * cols {
            codes.push(read(24 + 8 * (m + i)));
        }
        let u2 = FqMatrix::from_codes(spec, rows, cols, codes)?;
        Ok(SideInfo { v, u2 })
    }
}
