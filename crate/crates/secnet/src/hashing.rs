//! Universal hashing by modified Toeplitz matrices and its composition with
//! an inner code.
//!
//! The hash family maps `F_q^{k_n} -> F_q^{kbar_n}` as `(I, T(S))`: the
//! identity on the first `kbar_n` coordinates plus a Toeplitz matrix `T(S)`
//! of shape `kbar_n x d` (`d = k_n - kbar_n`) applied to the tail. The seed
//! `S` has exactly `k_n - 1` symbols and fills the diagonals as
//! `T[a][b] = S[a - b + d - 1]`. Every member is linear and surjective, and
//! the family is universal2: `Pr_S{f_S(x) = f_S(x')} <= q^{-kbar_n}` for
//! `x != x'`, which [`universal2_check`] verifies exhaustively on small
//! instances.
//!
//! Composing with an inner code `(phi, psi)` gives the non-local secure code:
//! encode `(m, l)` as `phi((m - T(S) l, l))`, decode as the hash of the inner
//! decode. The block identity `(I, T) [[I, -T], [0, I]] = (I, 0)` makes the
//! composition project onto the message for every seed.
//!
//! Verification tags for the public-channel setting hash a bit message into
//! `b` bits with an independent seed; tampering escapes detection with
//! probability at most `2^-b` (significance level `1 - 2^-b`).

use rand::Rng;
use thiserror::Error;

use num_rational::Ratio;

use crate::field::{FieldError, FieldSpec};
use crate::linalg::{solve_left, FqMatrix, LinalgError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HashError {
    #[error("invalid hash parameters: {0}")]
    Params(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error("enumeration would exceed the cap: {0}")]
    CapExceeded(String),
    #[error("inner code failure: {0}")]
    Inner(String),
    #[error("inner decoding failed")]
    InnerDecode,
    #[error("the inner encoder is not linear, leakage composition unavailable")]
    NonLinearInner,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Smallest r with r^2 >= l.
pub fn ceil_sqrt(l: usize) -> usize {
    let mut r = 0usize;
    while r * r < l {
        r += 1;
    }
    r
}

/// Input/output lengths of one hash family member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashSpec {
    spec: FieldSpec,
    k_n: usize,
    kbar_n: usize,
}

impl HashSpec {
    pub fn new(spec: &FieldSpec, k_n: usize, kbar_n: usize) -> Result<HashSpec, HashError> {
        if kbar_n == 0 || kbar_n > k_n {
            return Err(HashError::Params(format!(
                "need 0 < kbar_n <= k_n, got kbar_n={kbar_n} k_n={k_n}"
            )));
        }
        Ok(HashSpec {
            spec: spec.clone(),
            k_n,
            kbar_n,
        })
    }

    /// The asymptotic-construction redundancy: output length
    /// `k_n - m2 l_n - ceil(sqrt(l_n))`.
    pub fn with_redundancy(
        spec: &FieldSpec,
        k_n: usize,
        m2: usize,
        l_n: usize,
    ) -> Result<HashSpec, HashError> {
        let cut = m2 * l_n + ceil_sqrt(l_n);
        if cut >= k_n {
            return Err(HashError::Params(format!(
                "k_n={k_n} too small: m2*l_n + ceil(sqrt(l_n)) = {cut}"
            )));
        }
        HashSpec::new(spec, k_n, k_n - cut)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn input_len(&self) -> usize {
        self.k_n
    }

    pub fn output_len(&self) -> usize {
        self.kbar_n
    }

    /// Redundancy d = k_n - kbar_n (the scramble length).
    pub fn redundancy(&self) -> usize {
        self.k_n - self.kbar_n
    }

    /// Seed length k_n - 1.
    pub fn seed_len(&self) -> usize {
        self.k_n - 1
    }
}

/// The random seed S defining T(S); exactly `k_n - 1` symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToeplitzSeed {
    s: Vec<u64>,
}

impl ToeplitzSeed {
    pub fn from_codes(hspec: &HashSpec, s: Vec<u64>) -> Result<ToeplitzSeed, HashError> {
        if s.len() != hspec.seed_len() {
            return Err(HashError::Length {
                expected: hspec.seed_len(),
                got: s.len(),
            });
        }
        for &c in &s {
            if c >= hspec.spec.order() {
                return Err(FieldError::CodeOutOfRange {
                    code: c,
                    order: hspec.spec.order(),
                }
                .into());
            }
        }
        Ok(ToeplitzSeed { s })
    }

    pub fn random<R: Rng + ?Sized>(hspec: &HashSpec, rng: &mut R) -> ToeplitzSeed {
        let s = (0..hspec.seed_len())
            .map(|_| hspec.spec.random_code(rng))
            .collect();
        ToeplitzSeed { s }
    }

    pub fn zero(hspec: &HashSpec) -> ToeplitzSeed {
        ToeplitzSeed {
            s: vec![0; hspec.seed_len()],
        }
    }

    pub fn codes(&self) -> &[u64] {
        &self.s
    }
}

/// The Toeplitz block T(S) of shape `kbar_n x d` with
/// `T[a][b] = S[a - b + d - 1]`.
pub fn toeplitz_matrix(seed: &ToeplitzSeed, hspec: &HashSpec) -> FqMatrix {
    let d = hspec.redundancy();
    FqMatrix::from_fn(&hspec.spec, hspec.kbar_n, d, |a, b| seed.s[a + d - 1 - b])
}

/// The full hash matrix `(I, T(S))` of shape `kbar_n x k_n`.
pub fn hash_matrix(seed: &ToeplitzSeed, hspec: &HashSpec) -> FqMatrix {
    let id = FqMatrix::identity(&hspec.spec, hspec.kbar_n);
    id.hstack(&toeplitz_matrix(seed, hspec)).expect("same rows")
}

/// Applies `f_S(x) = head(x) + T(S) tail(x)` without materializing matrices.
pub fn hash_apply(
    seed: &ToeplitzSeed,
    hspec: &HashSpec,
    x: &[u64],
) -> Result<Vec<u64>, HashError> {
    if x.len() != hspec.k_n {
        return Err(HashError::Length {
            expected: hspec.k_n,
            got: x.len(),
        });
    }
    if seed.s.len() != hspec.seed_len() {
        return Err(HashError::Length {
            expected: hspec.seed_len(),
            got: seed.s.len(),
        });
    }
    let spec = &hspec.spec;
    let d = hspec.redundancy();
    let mut out = Vec::with_capacity(hspec.kbar_n);
    for a in 0..hspec.kbar_n {
        let mut acc = x[a];
        for b in 0..d {
            acc = spec.add(acc, spec.mul(seed.s[a + d - 1 - b], x[hspec.kbar_n + b]));
        }
        out.push(acc);
    }
    Ok(out)
}

/// Report of the exhaustive pairwise-collision check
/// `Pr_S{f_S(z) = 0} <= q^{-kbar_n}` over every nonzero z (by linearity this
/// covers all pairs `x != x'`).
#[derive(Debug, Clone)]
pub struct Universal2Report {
    pub max_collision: Ratio<u128>,
    pub bound: Ratio<u128>,
    pub worst_input: Vec<u64>,
    pub inputs_checked: u64,
    pub seeds_checked: u64,
}

impl Universal2Report {
    pub fn pass(&self) -> bool {
        self.max_collision <= self.bound
    }
}

pub fn universal2_check(hspec: &HashSpec, cap: u64) -> Result<Universal2Report, HashError> {
    let q = hspec.spec.order() as u128;
    let inputs = q
        .checked_pow(hspec.k_n as u32)
        .filter(|&v| v <= cap as u128)
        .ok_or_else(|| HashError::CapExceeded(format!("q^k_n = {q}^{}", hspec.k_n)))?;
    let seeds = q
        .checked_pow(hspec.seed_len() as u32)
        .filter(|&v| v <= cap as u128)
        .ok_or_else(|| HashError::CapExceeded(format!("q^(k_n-1) = {q}^{}", hspec.seed_len())))?;
    let mut max_collision = Ratio::new(0u128, 1u128);
    let mut worst = vec![0u64; hspec.k_n];
    let mut z = vec![0u64; hspec.k_n];
    for zi in 1..inputs {
        let mut k = zi;
        for cell in z.iter_mut() {
            *cell = (k % q) as u64;
            k /= q;
        }
        let mut hits = 0u128;
        let mut s_codes = vec![0u64; hspec.seed_len()];
        for si in 0..seeds {
            let mut k = si;
            for cell in s_codes.iter_mut() {
                *cell = (k % q) as u64;
                k /= q;
            }
            let seed = ToeplitzSeed { s: s_codes.clone() };
            if hash_apply(&seed, hspec, &z)?.iter().all(|&c| c == 0) {
                hits += 1;
            }
        }
        let p = Ratio::new(hits, seeds);
        if p > max_collision {
            max_collision = p;
            worst = z.clone();
        }
    }
    Ok(Universal2Report {
        max_collision,
        bound: Ratio::new(1, q.pow(hspec.kbar_n as u32)),
        worst_input: worst,
        inputs_checked: (inputs - 1) as u64,
        seeds_checked: seeds as u64,
    })
}

/// An inner code carrying `k_n` field symbols through `n` channel uses as an
/// `m3 x n` input matrix. `encode` may emit per-message out-of-band side
/// bytes which `decode` gets back verbatim. Channel input matrices are
/// flattened column-major (transmission-major) wherever a vector form is
/// needed.
pub trait InnerCode {
    fn spec(&self) -> &FieldSpec;
    /// k_n: symbols accepted per block.
    fn input_len(&self) -> usize;
    /// m3: channel rows.
    fn channel_rows(&self) -> usize;
    /// n: channel uses per block.
    fn block_len(&self) -> usize;
    fn encode(&self, w: &[u64]) -> Result<(FqMatrix, Vec<u8>), HashError>;
    fn decode(&self, y: &FqMatrix, side: &[u8]) -> Result<Vec<u64>, HashError>;
    /// The `(m3 n) x k_n` matrix of the encoder when it is linear.
    fn encoder_matrix(&self) -> Option<FqMatrix>;
}

/// Flattens an `r x c` matrix column-major into r*c symbols.
pub fn flatten_column_major(m: &FqMatrix) -> Vec<u64> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for u in 0..m.cols() {
        for r in 0..m.rows() {
            out.push(m.get(r, u));
        }
    }
    out
}

/// Inverse of [`flatten_column_major`].
pub fn unflatten_column_major(
    spec: &FieldSpec,
    rows: usize,
    cols: usize,
    w: &[u64],
) -> Result<FqMatrix, HashError> {
    if w.len() != rows * cols {
        return Err(HashError::Length {
            expected: rows * cols,
            got: w.len(),
        });
    }
    Ok(FqMatrix::from_fn(spec, rows, cols, |r, u| w[u * rows + r]))
}

/// The trivial inner code: symbols are written straight into the channel
/// input, `k_n = m3 n`.
#[derive(Debug, Clone)]
pub struct SystematicInner {
    spec: FieldSpec,
    m3: usize,
    n: usize,
}

impl SystematicInner {
    pub fn new(spec: &FieldSpec, m3: usize, n: usize) -> SystematicInner {
        SystematicInner {
            spec: spec.clone(),
            m3,
            n,
        }
    }
}

impl InnerCode for SystematicInner {
    fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    fn input_len(&self) -> usize {
        self.m3 * self.n
    }

    fn channel_rows(&self) -> usize {
        self.m3
    }

    fn block_len(&self) -> usize {
        self.n
    }

    fn encode(&self, w: &[u64]) -> Result<(FqMatrix, Vec<u8>), HashError> {
        Ok((
            unflatten_column_major(&self.spec, self.m3, self.n, w)?,
            Vec::new(),
        ))
    }

    fn decode(&self, y: &FqMatrix, _side: &[u8]) -> Result<Vec<u64>, HashError> {
        if y.rows() != self.m3 || y.cols() != self.n {
            return Err(HashError::Length {
                expected: self.m3 * self.n,
                got: y.rows() * y.cols(),
            });
        }
        Ok(flatten_column_major(y))
    }

    fn encoder_matrix(&self) -> Option<FqMatrix> {
        Some(FqMatrix::identity(&self.spec, self.m3 * self.n))
    }
}

/// Inner code adapted to a known full-use channel `K_B`: routes `m0 n`
/// symbols through a column selection `C` with `K_B C` of full column rank,
/// and decodes by solving `(K_B C) W = Y`. Correct under passive attacks.
#[derive(Debug, Clone)]
pub struct ChannelAdaptedInner {
    spec: FieldSpec,
    c: FqMatrix,
    kbc: FqMatrix,
    n: usize,
}

impl ChannelAdaptedInner {
    pub fn new(k_b: &FqMatrix, n: usize) -> Result<ChannelAdaptedInner, HashError> {
        let (_, pivots) = k_b.rref();
        let c = {
            let mut m = FqMatrix::zeros(k_b.spec(), k_b.cols(), pivots.len());
            for (j, &p) in pivots.iter().enumerate() {
                m.set(p, j, 1);
            }
            m
        };
        let kbc = k_b.mul(&c)?;
        debug_assert_eq!(kbc.rank(), pivots.len());
        Ok(ChannelAdaptedInner {
            spec: k_b.spec().clone(),
            c,
            kbc,
            n,
        })
    }

    /// Rank of the adapted channel (symbols per use).
    pub fn rate_rows(&self) -> usize {
        self.kbc.cols()
    }
}

impl InnerCode for ChannelAdaptedInner {
    fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    fn input_len(&self) -> usize {
        self.kbc.cols() * self.n
    }

    fn channel_rows(&self) -> usize {
        self.c.rows()
    }

    fn block_len(&self) -> usize {
        self.n
    }

    fn encode(&self, w: &[u64]) -> Result<(FqMatrix, Vec<u8>), HashError> {
        let wm = unflatten_column_major(&self.spec, self.kbc.cols(), self.n, w)?;
        Ok((self.c.mul(&wm)?, Vec::new()))
    }

    fn decode(&self, y: &FqMatrix, _side: &[u8]) -> Result<Vec<u64>, HashError> {
        // solve (K_B C) W = Y column-wise
        let wt = solve_left(&self.kbc.transpose(), &y.transpose())
            .map_err(|_| HashError::InnerDecode)?;
        Ok(flatten_column_major(&wt.transpose()))
    }

    fn encoder_matrix(&self) -> Option<FqMatrix> {
        // block-diagonal copies of C, one per transmission
        let (m3, k) = (self.c.rows(), self.c.cols());
        Some(FqMatrix::from_fn(
            &self.spec,
            m3 * self.n,
            k * self.n,
            |i, j| {
                let (u_i, r) = (i / m3, i % m3);
                let (u_j, c) = (j / k, j % k);
                if u_i == u_j {
                    self.c.get(r, c)
                } else {
                    0
                }
            },
        ))
    }
}

/// The composed non-local secure code: inner code plus modified-Toeplitz
/// privacy amplification.
pub struct SecureCode {
    inner: Box<dyn InnerCode + Send + Sync>,
    hash: HashSpec,
    seed: ToeplitzSeed,
}

impl SecureCode {
    pub fn new(
        inner: Box<dyn InnerCode + Send + Sync>,
        hash: HashSpec,
        seed: ToeplitzSeed,
    ) -> Result<SecureCode, HashError> {
        if inner.input_len() != hash.input_len() {
            return Err(HashError::Params(format!(
                "inner code carries {} symbols but the hash covers {}",
                inner.input_len(),
                hash.input_len()
            )));
        }
        if inner.spec() != hash.spec() {
            return Err(HashError::Params("field mismatch".into()));
        }
        if seed.codes().len() != hash.seed_len() {
            return Err(HashError::Length {
                expected: hash.seed_len(),
                got: seed.codes().len(),
            });
        }
        Ok(SecureCode { inner, hash, seed })
    }

    pub fn hash_spec(&self) -> &HashSpec {
        &self.hash
    }

    pub fn seed(&self) -> &ToeplitzSeed {
        &self.seed
    }

    pub fn inner(&self) -> &(dyn InnerCode + Send + Sync) {
        self.inner.as_ref()
    }

    /// Replaces the seed (used by the zero-leakage seed search).
    pub fn with_seed(&mut self, seed: ToeplitzSeed) -> Result<(), HashError> {
        if seed.codes().len() != self.hash.seed_len() {
            return Err(HashError::Length {
                expected: self.hash.seed_len(),
                got: seed.codes().len(),
            });
        }
        self.seed = seed;
        Ok(())
    }

    /// The inverse-block map `fbar(m, l) = (m - T(S) l, l)` followed by the
    /// inner encoder. The scramble `l` must be drawn uniformly by the caller.
    pub fn encode(&self, msg: &[u64], scramble: &[u64]) -> Result<(FqMatrix, Vec<u8>), HashError> {
        if msg.len() != self.hash.output_len() {
            return Err(HashError::Length {
                expected: self.hash.output_len(),
                got: msg.len(),
            });
        }
        if scramble.len() != self.hash.redundancy() {
            return Err(HashError::Length {
                expected: self.hash.redundancy(),
                got: scramble.len(),
            });
        }
        let spec = self.hash.spec();
        let d = self.hash.redundancy();
        let mut w = Vec::with_capacity(self.hash.input_len());
        for a in 0..self.hash.output_len() {
            let mut acc = msg[a];
            for b in 0..d {
                let t = self.seed.codes()[a + d - 1 - b];
                acc = spec.sub(acc, spec.mul(t, scramble[b]));
            }
            w.push(acc);
        }
        w.extend_from_slice(scramble);
        self.inner.encode(&w)
    }

    /// Hash of the inner decode; inner failures propagate.
    pub fn decode(&self, y: &FqMatrix, side: &[u8]) -> Result<Vec<u64>, HashError> {
        let w = self.inner.decode(y, side)?;
        hash_apply(&self.seed, &self.hash, &w)
    }

    /// The composed linear maps from message and scramble to the flattened
    /// channel input; `None` when the inner encoder is not linear.
    pub fn linear_maps(&self) -> Option<(FqMatrix, FqMatrix)> {
        let e = self.inner.encoder_matrix()?;
        let kbar = self.hash.output_len();
        let d = self.hash.redundancy();
        let t = toeplitz_matrix(&self.seed, &self.hash);
        let spec = self.hash.spec();
        // w = [[I], [0]] m + [[-T], [I]] l
        let msg_block = FqMatrix::from_fn(spec, kbar + d, kbar, |i, j| u64::from(i == j));
        let neg_t = t.neg();
        let scr_block = FqMatrix::from_fn(spec, kbar + d, d, |i, j| {
            if i < kbar {
                neg_t.get(i, j)
            } else {
                u64::from(i - kbar == j)
            }
        });
        let a = e.mul(&msg_block).ok()?;
        let b = e.mul(&scr_block).ok()?;
        Some((a, b))
    }
}

/// Achievable-rate arithmetic. The robust+secure rate `m0 - m1 - m2` needs
/// `m1 + m2 < m0`; the secrecy-only rate `m0 - m2` needs `m2 < m0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rates {
    pub robust_secure: usize,
    pub robust_achievable: bool,
    pub secrecy_only: usize,
    pub secrecy_achievable: bool,
}

pub fn rates(m0: usize, m1: usize, m2: usize) -> Rates {
    let robust_achievable = m1 + m2 < m0;
    let secrecy_achievable = m2 < m0;
    Rates {
        robust_secure: if robust_achievable { m0 - m1 - m2 } else { 0 },
        robust_achievable,
        secrecy_only: if secrecy_achievable { m0 - m2 } else { 0 },
        secrecy_achievable,
    }
}

/// Evaluated leakage bounds (values of the displayed expressions; the
/// underlying inequality bounds the mutual information measured in nats).
#[derive(Debug, Clone, Copy)]
pub struct LeakageBound {
    /// `q^(s (kbar_n - k_n + l_n m2)) / s`.
    pub renyi_form: f64,
    /// `q^(-s ceil(sqrt(l_n))) / s`.
    pub sqrt_form: f64,
    /// The smaller of the two.
    pub bound: f64,
    /// High-probability per-seed form `q^(-ceil(sqrt(l_n)) + m6 m3 + 1)`,
    /// holding with probability at least 1 - 1/q over the seed.
    pub high_prob_form: Option<f64>,
}

pub fn leakage_bound(
    s: f64,
    kbar_n: usize,
    k_n: usize,
    l_n: usize,
    m2: usize,
    q: u64,
    eve_dims: Option<(usize, usize)>,
) -> Result<LeakageBound, HashError> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(HashError::Params(format!("s must be in (0, 1], got {s}")));
    }
    let qf = q as f64;
    let exp1 = s * (kbar_n as f64 - k_n as f64 + (l_n * m2) as f64);
    let renyi_form = qf.powf(exp1) / s;
    let exp2 = -s * ceil_sqrt(l_n) as f64;
    let sqrt_form = qf.powf(exp2) / s;
    let high_prob_form = eve_dims.map(|(m6, m3)| {
        qf.powf(-(ceil_sqrt(l_n) as f64) + (m6 * m3) as f64 + 1.0)
    });
    Ok(LeakageBound {
        renyi_form,
        sqrt_form,
        bound: renyi_form.min(sqrt_form),
        high_prob_form,
    })
}

// ---- verification tags over GF(2) ---------------------------------------

/// A `b`-bit universal-hash verification tag with its seed, exchanged over
/// the authenticated public channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tag {
    pub b: usize,
    pub seed_bits: Vec<u64>,
    pub tag_bits: Vec<u64>,
}

fn tag_hash_spec(message_len: usize, b: usize) -> Result<HashSpec, HashError> {
    if b == 0 {
        return Err(HashError::Params("tag needs b >= 1".into()));
    }
    if message_len < b {
        return Err(HashError::Params(format!(
            "message of {message_len} bits cannot carry a {b}-bit tag"
        )));
    }
    let f2 = FieldSpec::prime(2).expect("GF(2)");
    HashSpec::new(&f2, message_len, b)
}

/// Tags a bit message (entries 0/1) with a fresh random seed.
pub fn make_tag<R: Rng + ?Sized>(
    message_bits: &[u64],
    b: usize,
    rng: &mut R,
) -> Result<Tag, HashError> {
    let hspec = tag_hash_spec(message_bits.len(), b)?;
    let seed = ToeplitzSeed::random(&hspec, rng);
    let tag_bits = hash_apply(&seed, &hspec, message_bits)?;
    Ok(Tag {
        b,
        seed_bits: seed.codes().to_vec(),
        tag_bits,
    })
}

/// Recomputes the tag under the transmitted seed and compares.
pub fn check_tag(message_bits: &[u64], tag: &Tag) -> Result<bool, HashError> {
    let hspec = tag_hash_spec(message_bits.len(), tag.b)?;
    let seed = ToeplitzSeed::from_codes(&hspec, tag.seed_bits.clone())?;
    Ok(hash_apply(&seed, &hspec, message_bits)? == tag.tag_bits)
}

/// Probability that a tampered message passes: at most `2^-b`; the
/// complement is the significance level.
pub fn significance_level(b: usize) -> f64 {
    1.0 - 2f64.powi(-(b as i32))
}

fn pack_bits_msb(bits: &[u64]) -> Vec<u8> {
    let mut out = vec![0u8; bits.len().div_ceil(8)];
    for (i, &bit) in bits.iter().enumerate() {
        if bit != 0 {
            out[i / 8] |= 1 << (7 - i % 8);
        }
    }
    out
}

fn unpack_bits_msb(bytes: &[u8], n: usize) -> Vec<u64> {
    (0..n)
        .map(|i| u64::from(bytes[i / 8] >> (7 - i % 8) & 1))
        .collect()
}

impl Tag {
    /// Wire format: `b` (1 byte), seed bit-length (4 bytes big-endian), seed
    /// bits, then tag bits, both packed most-significant-bit first.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![self.b as u8];
        out.extend_from_slice(&(self.seed_bits.len() as u32).to_be_bytes());
        out.extend_from_slice(&pack_bits_msb(&self.seed_bits));
        out.extend_from_slice(&pack_bits_msb(&self.tag_bits));
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Tag, HashError> {
        let bad = |m: &str| HashError::Params(m.to_string());
        if bytes.len() < 5 {
            return Err(bad("tag too short"));
        }
        let b = bytes[0] as usize;
        let seed_len = u32::from_be_bytes(bytes[1..5].try_into().unwrap()) as usize;
        let seed_bytes = seed_len.div_ceil(8);
        let tag_bytes = b.div_ceil(8);
        if bytes.len() != 5 + seed_bytes + tag_bytes {
            return Err(bad("tag length mismatch"));
        }
        Ok(Tag {
            b,
            seed_bits: unpack_bits_msb(&bytes[5..5 + seed_bytes], seed_len),
            tag_bits: unpack_bits_msb(&bytes[5 + seed_bytes..], b),
        })
    }
}

/// Bits of a byte string, most significant first (for tagging byte messages).
pub fn bits_of_bytes(bytes: &[u8]) -> Vec<u64> {
    unpack_bits_msb(bytes, bytes.len() * 8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn gf2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    #[test]
    fn hash_identity_block() {
        let f2 = gf2();
        let h = HashSpec::new(&f2, 5, 2).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let seed = ToeplitzSeed::random(&h, &mut rng);
        // zero tail: output = head
        let x = [1, 0, 0, 0, 0];
        assert_eq!(hash_apply(&seed, &h, &x).unwrap(), vec![1, 0]);
        // zero seed: output = head always
        let zs = ToeplitzSeed::zero(&h);
        let x = [1, 0, 1, 1, 1];
        assert_eq!(hash_apply(&zs, &h, &x).unwrap(), vec![1, 0]);
    }

    #[test]
    fn hash_agrees_with_matrix_oracle() {
        // every convention detail pinned by direct matrix multiplication
        let f3 = FieldSpec::prime(3).unwrap();
        let h = HashSpec::new(&f3, 3, 1).unwrap();
        let seed = ToeplitzSeed::from_codes(&h, vec![1, 2]).unwrap();
        let hm = hash_matrix(&seed, &h);
        for code in 0..27u64 {
            let x = [code % 3, code / 3 % 3, code / 9];
            let xm = FqMatrix::from_codes(&f3, 3, 1, x.to_vec()).unwrap();
            let want = hm.mul(&xm).unwrap();
            let got = hash_apply(&seed, &h, &x).unwrap();
            assert_eq!(got[0], want.get(0, 0));
        }
        // T for (kbar=1, d=2): T[0][0] = s[1], T[0][1] = s[0]
        let t = toeplitz_matrix(&seed, &h);
        assert_eq!((t.get(0, 0), t.get(0, 1)), (2, 1));
    }

    #[test]
    fn hash_is_linear() {
        let f2 = gf2();
        let h = HashSpec::new(&f2, 6, 2).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let seed = ToeplitzSeed::random(&h, &mut rng);
        for _ in 0..50 {
            let x: Vec<u64> = (0..6).map(|_| rng.gen_range(0..2)).collect();
            let y: Vec<u64> = (0..6).map(|_| rng.gen_range(0..2)).collect();
            let sum: Vec<u64> = x.iter().zip(&y).map(|(&a, &b)| a ^ b).collect();
            let hx = hash_apply(&seed, &h, &x).unwrap();
            let hy = hash_apply(&seed, &h, &y).unwrap();
            let hsum = hash_apply(&seed, &h, &sum).unwrap();
            let want: Vec<u64> = hx.iter().zip(&hy).map(|(&a, &b)| a ^ b).collect();
            assert_eq!(hsum, want);
        }
    }

    #[test]
    fn universal2_small_cases() {
        let f2 = gf2();
        // k_n=2, kbar=1: max collision probability is exactly 1/2
        let h = HashSpec::new(&f2, 2, 1).unwrap();
        let r = universal2_check(&h, 1 << 20).unwrap();
        assert_eq!(r.max_collision, Ratio::new(1, 2));
        assert!(r.pass());
        // k_n=3, kbar=1: bound 1/2 over all 7 nonzero inputs, 4 seeds
        let h = HashSpec::new(&f2, 3, 1).unwrap();
        let r = universal2_check(&h, 1 << 20).unwrap();
        assert_eq!(r.inputs_checked, 7);
        assert_eq!(r.seeds_checked, 4);
        assert!(r.pass());
        // nonzero head with zero tail never collides
        let seedless = HashSpec::new(&f2, 4, 2).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..20 {
            let seed = ToeplitzSeed::random(&seedless, &mut rng);
            let out = hash_apply(&seed, &seedless, &[1, 0, 0, 0]).unwrap();
            assert!(out.iter().any(|&c| c != 0));
        }
    }

    #[test]
    fn composition_projects_onto_message() {
        // exhaustive over seeds and (message, scramble) pairs at k_n = 4 bits
        let f2 = gf2();
        let h = HashSpec::new(&f2, 4, 2).unwrap();
        for sbits in 0..8u64 {
            let seed =
                ToeplitzSeed::from_codes(&h, vec![sbits & 1, sbits >> 1 & 1, sbits >> 2]).unwrap();
            let code = SecureCode::new(
                Box::new(SystematicInner::new(&f2, 2, 2)),
                h.clone(),
                seed,
            )
            .unwrap();
            for mbits in 0..4u64 {
                for lbits in 0..4u64 {
                    let m = [mbits & 1, mbits >> 1];
                    let l = [lbits & 1, lbits >> 1];
                    let (x, side) = code.encode(&m, &l).unwrap();
                    let got = code.decode(&x, &side).unwrap();
                    assert_eq!(got, m.to_vec());
                }
            }
        }
    }

    #[test]
    fn secure_encode_special_seeds() {
        let f2 = gf2();
        let h = HashSpec::new(&f2, 4, 2).unwrap();
        let code = SecureCode::new(
            Box::new(SystematicInner::new(&f2, 2, 2)),
            h.clone(),
            ToeplitzSeed::zero(&h),
        )
        .unwrap();
        // S = 0: inner input is (M, L) directly
        let (x, _) = code.encode(&[1, 0], &[1, 1]).unwrap();
        assert_eq!(flatten_column_major(&x), vec![1, 0, 1, 1]);
        // L = 0: inner input is (M, 0) for any seed
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        let mut code = code;
        code.with_seed(ToeplitzSeed::random(&h, &mut rng)).unwrap();
        let (x, _) = code.encode(&[1, 1], &[0, 0]).unwrap();
        assert_eq!(flatten_column_major(&x), vec![1, 1, 0, 0]);
    }

    #[test]
    fn channel_adapted_inner_roundtrip() {
        let f2 = gf2();
        // K_B with rank 2 and a redundant output row
        let k_b = FqMatrix::parse(&f2, "1 0 1; 0 1 1; 1 1 0").unwrap();
        let inner = ChannelAdaptedInner::new(&k_b, 2).unwrap();
        assert_eq!(inner.rate_rows(), 2);
        for wbits in 0..16u64 {
            let w: Vec<u64> = (0..4).map(|i| wbits >> i & 1).collect();
            let (x, side) = inner.encode(&w).unwrap();
            let y = k_b.mul(&x).unwrap();
            assert_eq!(inner.decode(&y, &side).unwrap(), w);
        }
        // encoder matrix matches the closure
        let e = inner.encoder_matrix().unwrap();
        let w = vec![1, 0, 1, 1];
        let (x, _) = inner.encode(&w).unwrap();
        let wv = FqMatrix::from_codes(&f2, 4, 1, w).unwrap();
        assert_eq!(flatten_column_major(&x), flatten_column_major(&e.mul(&wv).unwrap()));
    }

    #[test]
    fn rates_examples() {
        let r = rates(4, 1, 1);
        assert_eq!((r.robust_secure, r.secrecy_only), (2, 3));
        assert!(r.robust_achievable && r.secrecy_achievable);
        let r = rates(4, 2, 2);
        assert!(!r.robust_achievable);
        assert_eq!(r.robust_secure, 0);
        assert_eq!(r.secrecy_only, 2);
        let r = rates(5, 0, 0);
        assert_eq!((r.robust_secure, r.secrecy_only), (5, 5));
    }

    #[test]
    fn leakage_bound_values() {
        // at s=1 with the theorem-3 redundancy the bound is q^(-ceil(sqrt(l_n)))
        let l_n = 16;
        let k_n = 24;
        let kbar = k_n - 1 * l_n - ceil_sqrt(l_n); // = 4
        assert_eq!(kbar, 4);
        let b = leakage_bound(1.0, kbar, k_n, l_n, 1, 2, None).unwrap();
        assert!((b.bound - 2f64.powi(-4)).abs() < 1e-12);
        assert!((b.renyi_form - b.sqrt_form).abs() < 1e-12);
        // small s diverges
        let b_small = leakage_bound(1e-6, kbar, k_n, l_n, 1, 2, None).unwrap();
        assert!(b_small.bound > b.bound);
        // high-probability form
        let b = leakage_bound(1.0, kbar, k_n, l_n, 1, 2, Some((2, 3))).unwrap();
        assert!((b.high_prob_form.unwrap() - 2f64.powi(-4 + 6 + 1)).abs() < 1e-9);
        assert!(leakage_bound(0.0, kbar, k_n, l_n, 1, 2, None).is_err());
        assert!(leakage_bound(1.5, kbar, k_n, l_n, 1, 2, None).is_err());
    }

    #[test]
    fn tags_detect_tampering() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let msg = bits_of_bytes(b"ab");
        let tag = make_tag(&msg, 4, &mut rng).unwrap();
        assert!(check_tag(&msg, &tag).unwrap());
        // exhaustive single-block tamper sweep at b=4: the false-accept
        // fraction over all seeds is at most 2^-4 for every nonzero delta
        let k = 12usize;
        let msg: Vec<u64> = (0..k).map(|i| u64::from(i % 3 == 0)).collect();
        let hspec = tag_hash_spec(k, 4).unwrap();
        let seeds = 1u64 << (k - 1);
        for delta in 1..16u64 {
            let mut tampered = msg.clone();
            for bit in 0..4 {
                tampered[bit] ^= delta >> bit & 1;
            }
            let mut accept = 0u64;
            for sbits in 0..seeds {
                let s: Vec<u64> = (0..k - 1).map(|i| sbits >> i & 1).collect();
                let seed = ToeplitzSeed::from_codes(&hspec, s).unwrap();
                if hash_apply(&seed, &hspec, &msg).unwrap()
                    == hash_apply(&seed, &hspec, &tampered).unwrap()
                {
                    accept += 1;
                }
            }
            assert!(
                Ratio::new(accept as u128, seeds as u128) <= Ratio::new(1, 16),
                "delta={delta} accept={accept}"
            );
        }
        // b = m2 = 4 reproduces the significance level 1 - 2^-4
        assert!((significance_level(4) - (1.0 - 0.0625)).abs() < 1e-12);
    }

    #[test]
    fn tag_wire_roundtrip() {
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        let msg = bits_of_bytes(b"hello");
        let tag = make_tag(&msg, 7, &mut rng).unwrap();
        let bytes = tag.to_bytes();
        let back = Tag::from_bytes(&bytes).unwrap();
        assert_eq!(tag, back);
        assert!(Tag::from_bytes(&bytes[..3]).is_err());
    }

    #[test]
    fn with_redundancy_construction() {
        let f2 = gf2();
        let h = HashSpec::with_redundancy(&f2, 24, 1, 16).unwrap();
        assert_eq!(h.output_len(), 4);
        assert_eq!(h.redundancy(), 20);
        assert!(HashSpec::with_redundancy(&f2, 10, 1, 16).is_err());
    }
}
