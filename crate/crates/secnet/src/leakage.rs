//! Exact information-leakage oracles.
//!
//! Mutual information of an exhaustively enumerated joint distribution with
//! rational probabilities is a rational combination of logarithms of
//! integers, so it can be carried exactly as a prime-exponent vector:
//! `I = sum_p e_p log2(p)` with rational `e_p`. Unique factorization makes
//! two such values equal exactly when their exponent vectors agree, which is
//! what the audit of active-versus-passive leakage demands (tolerance zero).
//! Floating point appears only in the final [`ExactBits::bits`] conversion.
//!
//! Two oracles are kept deliberately independent and cross-checked:
//!
//! - [`linear_leakage`]: the closed form `(rank [A|B] - rank B) log2 q` for
//!   `Y = A M + B L` with `M`, `L` independent uniform;
//! - [`empirical_mi`]: textbook mutual information of an explicit joint pmf
//!   built by enumeration.
//!
//! [`theorem1_audit`] enumerates every deterministic causal strategy of a
//! small instance, builds Eve's exact view `(Y_E^n, Z^n)` for each, and
//! asserts the leakage equals the passive attack's, strategy by strategy.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rayon::prelude::*;
use thiserror::Error;

use crate::attack::{enumerate_strategies, simulate, AttackError, Strategy};
use crate::field::FieldSpec;
use crate::hashing::{unflatten_column_major, HashError, SecureCode};
use crate::linalg::{FqMatrix, LinalgError};
use crate::net::{AdversaryPlacement, TransferMatrices};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LeakageError {
    #[error("enumeration would exceed the cap: {0}")]
    CapExceeded(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Attack(#[from] AttackError),
    #[error(transparent)]
    Hash(#[from] HashError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// An exact information quantity `sum_p e_p log2 p` over primes `p` with
/// rational exponents. Values compare exactly; conversion to floating-point
/// bits happens only on demand.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExactBits {
    exps: BTreeMap<u64, Ratio<i128>>,
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut k = 0;
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl ExactBits {
    pub fn zero() -> ExactBits {
        ExactBits::default()
    }

    /// `k * log2(q)` for integer `k`.
    pub fn integer_log(q: u64, k: i128) -> ExactBits {
        let mut v = ExactBits::zero();
        v.add_log_term(Ratio::from_integer(k), q);
        v
    }

    /// Adds `coeff * log2(n)`.
    pub fn add_log_term(&mut self, coeff: Ratio<i128>, n: u64) {
        debug_assert!(n > 0);
        for (p, k) in factorize(n) {
            let e = self.exps.entry(p).or_insert_with(|| Ratio::from_integer(0));
            *e += coeff * Ratio::from_integer(k as i128);
            if *self.exps.get(&p).unwrap() == Ratio::from_integer(0) {
                self.exps.remove(&p);
            }
        }
    }

    pub fn add(&self, other: &ExactBits) -> ExactBits {
        let mut out = self.clone();
        for (&p, &e) in &other.exps {
            let cur = out.exps.entry(p).or_insert_with(|| Ratio::from_integer(0));
            *cur += e;
            if *out.exps.get(&p).unwrap() == Ratio::from_integer(0) {
                out.exps.remove(&p);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.exps.is_empty()
    }

    /// Floating-point value in bits.
    pub fn bits(&self) -> f64 {
        let v: f64 = self
            .exps
            .iter()
            .map(|(&p, e)| {
                let ef = *e.numer() as f64 / *e.denom() as f64;
                ef * (p as f64).log2()
            })
            .sum();
        // normalize the empty sum's negative zero
        v + 0.0
    }

    /// When the value is `r * log2(q)` for a single rational `r`, returns
    /// `r`. Linear codes always leak an integer multiple of `log q`.
    pub fn log_q_units(&self, q: u64) -> Option<Ratio<i128>> {
        let fq = factorize(q);
        let (p0, k0) = *fq.first()?;
        let r = self
            .exps
            .get(&p0)
            .copied()
            .unwrap_or_else(|| Ratio::from_integer(0))
            / Ratio::from_integer(k0 as i128);
        // every prime of q must carry r * v_p(q), and no others may appear
        for (p, k) in &fq {
            let want = r * Ratio::from_integer(*k as i128);
            let got = self
                .exps
                .get(p)
                .copied()
                .unwrap_or_else(|| Ratio::from_integer(0));
            if got != want {
                return None;
            }
        }
        for p in self.exps.keys() {
            if !fq.iter().any(|(pp, _)| pp == p) {
                return None;
            }
        }
        Some(r)
    }
}

/// Exact joint distribution of (message, observation) built from enumeration
/// counts; every probability is `count / total`.
#[derive(Debug, Clone, Default)]
pub struct JointPmf {
    counts: BTreeMap<(Vec<u64>, Vec<u64>), u64>,
    total: u64,
}

impl JointPmf {
    pub fn new() -> JointPmf {
        JointPmf::default()
    }

    pub fn record(&mut self, message: Vec<u64>, observation: Vec<u64>) {
        *self.counts.entry((message, observation)).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn outcomes(&self) -> impl Iterator<Item = (&(Vec<u64>, Vec<u64>), &u64)> {
        self.counts.iter()
    }
}

/// Exact mutual information `I(M; Y)` of the pmf.
pub fn empirical_mi(pmf: &JointPmf) -> ExactBits {
    let n = pmf.total;
    assert!(n > 0, "empty pmf");
    let mut m_marg: BTreeMap<&[u64], u64> = BTreeMap::new();
    let mut y_marg: BTreeMap<&[u64], u64> = BTreeMap::new();
    for ((m, y), &c) in &pmf.counts {
        *m_marg.entry(m).or_insert(0) += c;
        *y_marg.entry(y).or_insert(0) += c;
    }
    let mut out = ExactBits::zero();
    for ((m, y), &c) in &pmf.counts {
        let coeff = Ratio::new(c as i128, n as i128);
        // log( c * n / (c_m * c_y) )
        out.add_log_term(coeff, c);
        out.add_log_term(coeff, n);
        out.add_log_term(-coeff, m_marg[m.as_slice()]);
        out.add_log_term(-coeff, y_marg[y.as_slice()]);
    }
    out
}

/// Closed-form leakage of `Y = A M + B L` with `M`, `L` independent uniform:
/// `(rank [A|B] - rank B) log2 q`.
pub fn linear_leakage(a: &FqMatrix, b: &FqMatrix) -> Result<ExactBits, LeakageError> {
    let joint = a.hstack(b)?;
    let r = joint.rank() as i128 - b.rank() as i128;
    Ok(ExactBits::integer_log(a.spec().order(), r))
}

/// A linear non-local encoder `(M, L) -> X^n`: message and scramble maps into
/// the flattened (column-major) channel input.
#[derive(Debug, Clone)]
pub struct LinearCodeMaps {
    pub msg_map: FqMatrix,
    pub scr_map: FqMatrix,
    m3: usize,
    n: usize,
}

impl LinearCodeMaps {
    pub fn new(
        msg_map: FqMatrix,
        scr_map: FqMatrix,
        m3: usize,
        n: usize,
    ) -> Result<LinearCodeMaps, LeakageError> {
        if msg_map.rows() != m3 * n || scr_map.rows() != m3 * n {
            return Err(LeakageError::Dimension(format!(
                "encoder maps must have {} rows",
                m3 * n
            )));
        }
        if msg_map.spec() != scr_map.spec() {
            return Err(LeakageError::Dimension("map field mismatch".into()));
        }
        Ok(LinearCodeMaps {
            msg_map,
            scr_map,
            m3,
            n,
        })
    }

    /// Extracts the composed maps of a secure code (inner encoder must be
    /// linear).
    pub fn from_secure_code(code: &SecureCode) -> Result<LinearCodeMaps, LeakageError> {
        let (a, b) = code.linear_maps().ok_or(HashError::NonLinearInner)?;
        LinearCodeMaps::new(
            a,
            b,
            code.inner().channel_rows(),
            code.inner().block_len(),
        )
    }

    pub fn message_len(&self) -> usize {
        self.msg_map.cols()
    }

    pub fn scramble_len(&self) -> usize {
        self.scr_map.cols()
    }

    pub fn spec(&self) -> &FieldSpec {
        self.msg_map.spec()
    }

    /// Channel input for one (message, scramble) pair.
    pub fn encode(&self, m: &[u64], l: &[u64]) -> Result<FqMatrix, LeakageError> {
        let spec = self.spec();
        let mv = FqMatrix::from_codes(spec, m.len(), 1, m.to_vec())?;
        let lv = FqMatrix::from_codes(spec, l.len(), 1, l.to_vec())?;
        let flat = self.msg_map.mul(&mv)?.add(&self.scr_map.mul(&lv)?)?;
        let codes: Vec<u64> = flat.codes().to_vec();
        Ok(unflatten_column_major(spec, self.m3, self.n, &codes)?)
    }
}

/// Applies a per-use map `K` (acting on channel rows) to a flattened encoder
/// map, yielding the flattened composition `blockdiag(K) * E`.
pub fn compose_per_use(k: &FqMatrix, map: &FqMatrix, m3: usize, n: usize) -> FqMatrix {
    let spec = map.spec();
    let rows_out = k.rows() * n;
    FqMatrix::from_fn(spec, rows_out, map.cols(), |i, j| {
        let (u, r) = (i / k.rows(), i % k.rows());
        let mut acc = 0u64;
        for c in 0..k.cols() {
            let kv = k.get(r, c);
            if kv != 0 {
                acc = spec.add(acc, spec.mul(kv, map.get(u * m3 + c, j)));
            }
        }
        acc
    })
}

/// Per-strategy audit record. The exact leakage accompanies its `log q`
/// multiple when the value is one (always, for linear codes).
#[derive(Debug, Clone)]
pub struct StrategyRecord {
    pub id: u64,
    pub leakage: ExactBits,
    pub bits: f64,
    pub log_q_units: Option<(i128, i128)>,
    pub matches_passive: bool,
}

#[derive(Debug, Clone)]
pub struct AuditReport {
    pub passive: ExactBits,
    pub strategy_count: u64,
    pub records: Vec<StrategyRecord>,
    pub all_match: bool,
}

fn eve_view_pmf(
    maps: &LinearCodeMaps,
    tm: &TransferMatrices,
    adv: &AdversaryPlacement,
    mut strategy_for: impl FnMut() -> Box<dyn Strategy>,
) -> Result<JointPmf, LeakageError> {
    let spec = maps.spec();
    let q = spec.order();
    let a = maps.message_len();
    let b = maps.scramble_len();
    let m_total = (q as u128).pow(a as u32);
    let l_total = (q as u128).pow(b as u32);
    let mut pmf = JointPmf::new();
    for mi in 0..m_total {
        let mut k = mi;
        let m: Vec<u64> = (0..a)
            .map(|_| {
                let c = (k % q as u128) as u64;
                k /= q as u128;
                c
            })
            .collect();
        for li in 0..l_total {
            let mut k = li;
            let l: Vec<u64> = (0..b)
                .map(|_| {
                    let c = (k % q as u128) as u64;
                    k /= q as u128;
                    c
                })
                .collect();
            let x = maps.encode(&m, &l)?;
            let mut strat = strategy_for();
            let out = simulate(tm, adv, &x, strat.as_mut())?;
            let mut view: Vec<u64> = out.y_e.codes().to_vec();
            view.extend_from_slice(out.z.codes());
            pmf.record(m.clone(), view);
        }
    }
    Ok(pmf)
}

/// Enumerates every deterministic causal strategy (uncounted slots included)
/// and checks `I(M; Y_E^n, Z^n)[alpha] = I(M; Y_E^n)[passive]` with exact
/// equality, reporting per-strategy leakage.
pub fn theorem1_audit(
    maps: &LinearCodeMaps,
    tm: &TransferMatrices,
    adv: &AdversaryPlacement,
    cap: u64,
) -> Result<AuditReport, LeakageError> {
    let spec = maps.spec();
    let q = spec.order();
    let enumeration_size = (q as u128)
        .checked_pow((maps.message_len() + maps.scramble_len()) as u32)
        .filter(|&v| v <= cap as u128);
    if enumeration_size.is_none() {
        return Err(LeakageError::CapExceeded(format!(
            "q^(message+scramble) = {q}^{}",
            maps.message_len() + maps.scramble_len()
        )));
    }
    let passive_pmf = eve_view_pmf(maps, tm, adv, || Box::new(crate::attack::Passive))?;
    let passive = empirical_mi(&passive_pmf);
    let enumeration = enumerate_strategies(adv, q, maps.n, true, cap)?;
    let strategies: Vec<_> = enumeration.iter().collect();
    let records: Vec<StrategyRecord> = strategies
        .into_par_iter()
        .enumerate()
        .map(|(id, strat)| {
            let pmf = eve_view_pmf(maps, tm, adv, || Box::new(strat.clone()))
                .expect("dims already validated");
            let leakage = empirical_mi(&pmf);
            let matches_passive = leakage == passive;
            StrategyRecord {
                id: id as u64,
                bits: leakage.bits(),
                log_q_units: leakage
                    .log_q_units(q)
                    .map(|r| (*r.numer(), *r.denom())),
                leakage,
                matches_passive,
            }
        })
        .collect();
    let all_match = records.iter().all(|r| r.matches_passive);
    Ok(AuditReport {
        passive,
        strategy_count: records.len() as u64,
        records,
        all_match,
    })
}

/// Exact leakage of a composed secure code against a wiretap map `K_E`,
/// using the closed-form oracle on `A = K_E o (message path)`,
/// `B = K_E o (scramble path)`. No strategy enumeration is needed: active
/// strategies leak exactly as much as the passive attack.
pub fn leakage_of_secure_code(
    code: &SecureCode,
    k_e: &FqMatrix,
) -> Result<ExactBits, LeakageError> {
    let maps = LinearCodeMaps::from_secure_code(code)?;
    if k_e.cols() != code.inner().channel_rows() {
        return Err(LeakageError::Dimension(format!(
            "K_E has {} columns, channel rows are {}",
            k_e.cols(),
            code.inner().channel_rows()
        )));
    }
    let a = compose_per_use(k_e, &maps.msg_map, maps.m3, maps.n);
    let b = compose_per_use(k_e, &maps.scr_map, maps.m3, maps.n);
    linear_leakage(&a, &b)
}
