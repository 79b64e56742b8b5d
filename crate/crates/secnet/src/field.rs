//! Exact arithmetic in prime fields GF(p) and their algebraic extensions GF(q^t).
//!
//! Every scalar in the simulator lives in a [`FieldSpec`]: either a prime
//! field or a single extension level built over another spec (so towers like
//! GF((2^4)^2) are possible, but nothing deeper). Elements are stored as
//! canonical packed codes: the coefficient vector over the base field written
//! in base `base_order`, so the codes of GF(q) are exactly `0..q` and two
//! equal elements always have the same code.
//!
//! Multiplication in extensions reduces schoolbook polynomial products by the
//! (monic, irreducible) modulus. Fields of order at most 2^16 additionally
//! carry log/antilog tables; the tables must agree with the schoolbook path,
//! which the test suite checks exhaustively on small fields.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest field order we build tables for. Above this, multiplication stays
/// on the schoolbook polynomial path.
pub const TABLE_LIMIT: u64 = 1 << 16;

/// Largest order a spec may have at all (codes are packed into `u64`, and
/// rejection sampling over `0..order` must stay cheap).
pub const ORDER_LIMIT: u64 = 1 << 32;

/// Errors raised while constructing field specs or doing element arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be >= 1")]
    BadDegree,
    #[error("modulus must be monic of degree {expected}, got degree {got}")]
    BadModulus { expected: usize, got: usize },
    #[error("modulus is reducible: divisible by {witness}")]
    ReducibleModulus { witness: String },
    #[error("field order {0} exceeds the supported range")]
    OrderTooLarge(u128),
    #[error("element code {code} out of range for field of order {order}")]
    CodeOutOfRange { code: u64, order: u64 },
    #[error("operands belong to different field specs")]
    SpecMismatch,
    #[error("division or inversion of zero")]
    DivisionByZero,
    #[error("target field does not extend the source field")]
    NotAnExtension,
    #[error("cannot parse field literal `{0}`")]
    BadLiteral(String),
}

struct Tables {
    /// `exp[i]` is g^i for a fixed generator g, i in 0..q-1.
    exp: Vec<u64>,
    /// `log[c]` is the discrete log of code c; entry 0 is unused.
    log: Vec<u32>,
}

struct Inner {
    characteristic: u64,
    order: u64,
    /// None for prime fields.
    base: Option<FieldSpec>,
    /// Extension degree over the base (1 for prime fields).
    degree: usize,
    /// Monic modulus of length degree+1, coefficients as base-field codes.
    /// Empty for prime fields.
    modulus: Vec<u64>,
    tables: Option<Tables>,
}

/// Handle to an immutable field description. Cloning is cheap and specs are
/// freely shareable across threads.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        self.0.characteristic == other.0.characteristic
            && self.0.order == other.0.order
            && self.0.degree == other.0.degree
            && self.0.modulus == other.0.modulus
            && match (&self.0.base, &other.0.base) {
                (None, None) => true,
                (Some(a), Some(b)) => a == b,
                _ => false,
            }
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.literal())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.literal())
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    if n % 3 == 0 {
        return n == 3;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FieldSpec {
    /// The prime field GF(p).
    pub fn prime(p: u64) -> Result<FieldSpec, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p >= ORDER_LIMIT {
            return Err(FieldError::OrderTooLarge(p as u128));
        }
        let mut inner = Inner {
            characteristic: p,
            order: p,
            base: None,
            degree: 1,
            modulus: Vec::new(),
            tables: None,
        };
        if p <= TABLE_LIMIT && p > 2 {
            inner.tables = build_tables(&inner);
        }
        Ok(FieldSpec(Arc::new(inner)))
    }

    /// The degree-`t` extension of `base`. When `modulus` is `None`, the
    /// lexicographically smallest monic irreducible of degree `t` is chosen
    /// (smallest packed code with the constant coefficient least
    /// significant), so builds are reproducible.
    pub fn extension(
        base: &FieldSpec,
        t: usize,
        modulus: Option<&[u64]>,
    ) -> Result<FieldSpec, FieldError> {
        if t < 1 {
            return Err(FieldError::BadDegree);
        }
        if t == 1 && modulus.is_none() {
            return Ok(base.clone());
        }
        let b = base.order();
        let order128 = (b as u128).checked_pow(t as u32).ok_or(FieldError::OrderTooLarge(u128::MAX))?;
        if order128 > ORDER_LIMIT as u128 {
            return Err(FieldError::OrderTooLarge(order128));
        }
        let order = order128 as u64;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != t + 1 || m[t] != 1 {
                    return Err(FieldError::BadModulus {
                        expected: t,
                        got: m.len().saturating_sub(1),
                    });
                }
                for &c in m {
                    if c >= b {
                        return Err(FieldError::CodeOutOfRange { code: c, order: b });
                    }
                }
                if let Some(factor) = reducible_witness(base, m) {
                    return Err(FieldError::ReducibleModulus {
                        witness: poly_string(&factor),
                    });
                }
                m.to_vec()
            }
            None => smallest_irreducible(base, t),
        };
        let mut inner = Inner {
            characteristic: base.characteristic(),
            order,
            base: Some(base.clone()),
            degree: t,
            modulus,
            tables: None,
        };
        if order <= TABLE_LIMIT {
            inner.tables = build_tables(&inner);
        }
        Ok(FieldSpec(Arc::new(inner)))
    }

    /// Parses the config literal syntax: `GF(p)`, `GF(p^t)`, or
    /// `GF(p^t; modulus=[c0,c1,...,1])`.
    pub fn parse(text: &str) -> Result<FieldSpec, FieldError> {
        let s = text.trim();
        let bad = || FieldError::BadLiteral(text.to_string());
        let body = s
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (head, modulus) = match body.split_once(';') {
            Some((h, m)) => {
                let m = m.trim();
                let list = m
                    .strip_prefix("modulus=[")
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(bad)?;
                let coeffs: Result<Vec<u64>, _> =
                    list.split(',').map(|c| c.trim().parse::<u64>()).collect();
                (h.trim(), Some(coeffs.map_err(|_| bad())?))
            }
            None => (body.trim(), None),
        };
        let (p, t) = match head.split_once('^') {
            Some((p, t)) => (
                p.trim().parse::<u64>().map_err(|_| bad())?,
                t.trim().parse::<usize>().map_err(|_| bad())?,
            ),
            None => (head.parse::<u64>().map_err(|_| bad())?, 1),
        };
        let base = FieldSpec::prime(p)?;
        if t == 1 && modulus.is_none() {
            return Ok(base);
        }
        FieldSpec::extension(&base, t, modulus.as_deref())
    }

    /// Canonical literal for this spec.
    pub fn literal(&self) -> String {
        match &self.0.base {
            None => format!("GF({})", self.0.characteristic),
            Some(base) => {
                if base.0.base.is_none() {
                    let coeffs: Vec<String> =
                        self.0.modulus.iter().map(|c| c.to_string()).collect();
                    format!(
                        "GF({}^{}; modulus=[{}])",
                        base.order(),
                        self.0.degree,
                        coeffs.join(",")
                    )
                } else {
                    format!("GF({}^{})", base.order(), self.0.degree)
                }
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.0.characteristic
    }

    /// Number of elements q.
    pub fn order(&self) -> u64 {
        self.0.order
    }

    /// Extension degree over the base field (1 for prime fields).
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn base(&self) -> Option<&FieldSpec> {
        self.0.base.as_ref()
    }

    /// Modulus polynomial coefficients over the base (constant term first),
    /// empty for prime fields.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.base.is_none()
    }

    /// Iterator over all element codes, 0..q.
    pub fn element_codes(&self) -> impl Iterator<Item = u64> {
        0..self.0.order
    }

    pub fn element(&self, code: u64) -> Result<FieldElement, FieldError> {
        if code >= self.0.order {
            return Err(FieldError::CodeOutOfRange {
                code,
                order: self.0.order,
            });
        }
        Ok(FieldElement {
            spec: self.clone(),
            code,
        })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            spec: self.clone(),
            code: 0,
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            spec: self.clone(),
            code: 1 % self.0.order,
        }
    }

    /// Unpacks a code into base-field digit codes, constant coefficient first.
    pub fn unpack(&self, code: u64) -> Vec<u64> {
        match &self.0.base {
            None => vec![code],
            Some(base) => {
                let b = base.order();
                let mut digits = Vec::with_capacity(self.0.degree);
                let mut c = code;
                for _ in 0..self.0.degree {
                    digits.push(c % b);
                    c /= b;
                }
                digits
            }
        }
    }

    /// Packs base-field digit codes (constant first) into an element code.
    pub fn pack(&self, digits: &[u64]) -> u64 {
        match &self.0.base {
            None => digits.first().copied().unwrap_or(0),
            Some(base) => {
                let b = base.order();
                let mut code = 0u64;
                for &d in digits.iter().rev() {
                    code = code * b + d;
                }
                code
            }
        }
    }

    // ---- exact arithmetic on codes ------------------------------------

    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.0.order && b < self.0.order);
        if self.0.characteristic == 2 {
            // digits occupy disjoint bit ranges because every suborder is a
            // power of two
            return a ^ b;
        }
        match &self.0.base {
            None => (a + b) % self.0.order,
            Some(base) => {
                let da = self.unpack(a);
                let db = self.unpack(b);
                let sum: Vec<u64> = da
                    .iter()
                    .zip(db.iter())
                    .map(|(&x, &y)| base.add(x, y))
                    .collect();
                self.pack(&sum)
            }
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.0.order);
        if self.0.characteristic == 2 {
            return a;
        }
        match &self.0.base {
            None => {
                if a == 0 {
                    0
                } else {
                    self.0.order - a
                }
            }
            Some(base) => {
                let digits: Vec<u64> = self.unpack(a).iter().map(|&x| base.neg(x)).collect();
                self.pack(&digits)
            }
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.0.order && b < self.0.order);
        if a == 0 || b == 0 {
            return 0;
        }
        if let Some(t) = &self.0.tables {
            let q1 = self.0.order - 1;
            let idx = (t.log[a as usize] as u64 + t.log[b as usize] as u64) % q1;
            return t.exp[idx as usize];
        }
        self.mul_schoolbook(a, b)
    }

    /// Reference multiplication: schoolbook polynomial product reduced by the
    /// modulus. Public so tests can pin the table path against it.
    pub fn mul_schoolbook(&self, a: u64, b: u64) -> u64 {
        match &self.0.base {
            None => {
                (((a as u128) * (b as u128)) % self.0.order as u128) as u64
            }
            Some(base) => {
                let t = self.0.degree;
                let da = self.unpack(a);
                let db = self.unpack(b);
                // convolution
                let mut prod = vec![0u64; 2 * t - 1];
                for (i, &x) in da.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in db.iter().enumerate() {
                        if y == 0 {
                            continue;
                        }
                        prod[i + j] = base.add(prod[i + j], base.mul(x, y));
                    }
                }
                // reduce: x^t = -(m_0 + ... + m_{t-1} x^{t-1})
                for i in (t..prod.len()).rev() {
                    let c = prod[i];
                    if c == 0 {
                        continue;
                    }
                    prod[i] = 0;
                    for j in 0..t {
                        let m = self.0.modulus[j];
                        if m == 0 {
                            continue;
                        }
                        let delta = base.neg(base.mul(c, m));
                        prod[i - t + j] = base.add(prod[i - t + j], delta);
                    }
                }
                prod.truncate(t);
                self.pack(&prod)
            }
        }
    }

    /// a^e by repeated squaring. `pow(0, 0)` is 1 by convention.
    pub fn pow(&self, a: u64, e: u64) -> u64 {
        if let Some(t) = &self.0.tables {
            if a == 0 {
                return if e == 0 { 1 % self.0.order } else { 0 };
            }
            let q1 = (self.0.order - 1) as u128;
            let idx = ((t.log[a as usize] as u128) * (e as u128 % q1)) % q1;
            return t.exp[idx as usize];
        }
        let mut result = 1 % self.0.order;
        let mut square = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, square);
            }
            square = self.mul(square, square);
            e >>= 1;
        }
        result
    }

    pub fn inv(&self, a: u64) -> Result<u64, FieldError> {
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(t) = &self.0.tables {
            let q1 = self.0.order - 1;
            let idx = (q1 - t.log[a as usize] as u64) % q1;
            return Ok(t.exp[idx as usize]);
        }
        Ok(self.pow(a, self.0.order - 2))
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Draws a uniform element code.
    pub fn random_code<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.0.order)
    }
}

/// Embeds `x` into `target`, which must be an extension built directly over
/// `x`'s spec. The embedding sends x to the constant polynomial x, so codes
/// are unchanged and the map is a field homomorphism.
pub fn lift_element(x: &FieldElement, target: &FieldSpec) -> Result<FieldElement, FieldError> {
    match target.base() {
        Some(base) if *base == x.spec => Ok(FieldElement {
            spec: target.clone(),
            code: x.code,
        }),
        _ => Err(FieldError::NotAnExtension),
    }
}

/// Convenience constructors matching the operation names used elsewhere.
pub fn make_prime_field(p: u64) -> Result<FieldSpec, FieldError> {
    FieldSpec::prime(p)
}

pub fn make_extension_field(
    base: &FieldSpec,
    t: usize,
    modulus: Option<&[u64]>,
) -> Result<FieldSpec, FieldError> {
    FieldSpec::extension(base, t, modulus)
}

// ---- polynomial helpers over a base spec (coefficient = code) ----------

fn poly_string(coeffs: &[u64]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match i {
            0 => format!("{c}"),
            1 if c == 1 => "x".to_string(),
            1 => format!("{c}*x"),
            _ if c == 1 => format!("x^{i}"),
            _ => format!("{c}*x^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

fn poly_deg(p: &[u64]) -> Option<usize> {
    p.iter().rposition(|&c| c != 0)
}

/// Remainder of `a` divided by monic-leading `b` over `base`.
fn poly_rem(base: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    let db = poly_deg(b).expect("divisor must be nonzero");
    let lead_inv = base.inv(b[db]).expect("leading coefficient nonzero");
    let mut r = a.to_vec();
    while let Some(dr) = poly_deg(&r) {
        if dr < db {
            break;
        }
        let factor = base.mul(r[dr], lead_inv);
        let shift = dr - db;
        for j in 0..=db {
            let delta = base.neg(base.mul(factor, b[j]));
            r[shift + j] = base.add(r[shift + j], delta);
        }
    }
    r.truncate(db.max(1));
    while r.len() > 1 && *r.last().unwrap() == 0 {
        r.pop();
    }
    r
}

fn poly_is_zero(p: &[u64]) -> bool {
    p.iter().all(|&c| c == 0)
}

/// Finds a monic factor of degree in 1..=deg/2 if one exists (trial division
/// in code order, so the witness is deterministic).
fn reducible_witness(base: &FieldSpec, modulus: &[u64]) -> Option<Vec<u64>> {
    let t = modulus.len() - 1;
    let b = base.order();
    for d in 1..=t / 2 {
        let count = (b as u128).pow(d as u32);
        for packed in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut c = packed;
            for _ in 0..d {
                cand.push((c % b as u128) as u64);
                c /= b as u128;
            }
            cand.push(1); // monic
            if poly_is_zero(&poly_rem(base, modulus, &cand)) {
                return Some(cand);
            }
        }
    }
    None
}

fn smallest_irreducible(base: &FieldSpec, t: usize) -> Vec<u64> {
    let b = base.order() as u128;
    let count = b.pow(t as u32);
    for packed in 0..count {
        let mut cand = Vec::with_capacity(t + 1);
        let mut c = packed;
        for _ in 0..t {
            cand.push((c % b) as u64);
            c /= b;
        }
        cand.push(1);
        // constant term zero means x divides
        if cand[0] == 0 {
            continue;
        }
        if reducible_witness(base, &cand).is_none() {
            return cand;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

fn build_tables(inner: &Inner) -> Option<Tables> {
    let q = inner.order;
    let q1 = q - 1;
    let factors = prime_factors(q1);
    // schoolbook helpers against the not-yet-tabled inner
    let spec = FieldSpec(Arc::new(Inner {
        characteristic: inner.characteristic,
        order: inner.order,
        base: inner.base.clone(),
        degree: inner.degree,
        modulus: inner.modulus.clone(),
        tables: None,
    }));
    let pow = |a: u64, mut e: u64| -> u64 {
        let mut result = 1u64;
        let mut square = a;
        while e > 0 {
            if e & 1 == 1 {
                result = spec.mul_schoolbook(result, square);
            }
            square = spec.mul_schoolbook(square, square);
            e >>= 1;
        }
        result
    };
    let mut generator = None;
    for g in 2..q {
        if factors.iter().all(|&f| pow(g, q1 / f) != 1) {
            generator = Some(g);
            break;
        }
    }
    let g = generator?;
    let mut exp = Vec::with_capacity(q1 as usize);
    let mut log = vec![0u32; q as usize];
    let mut acc = 1u64;
    for i in 0..q1 {
        exp.push(acc);
        log[acc as usize] = i as u32;
        acc = spec.mul_schoolbook(acc, g);
    }
    debug_assert_eq!(acc, 1);
    Some(Tables { exp, log })
}

/// One element of a [`FieldSpec`]. A value type: cloning copies the packed
/// code and a cheap spec handle.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    spec: FieldSpec,
    code: u64,
}

/// Arithmetic selector for [`FieldElement::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElement {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// Canonical packed code (the field literal of this element).
    pub fn code(&self) -> u64 {
        self.code
    }

    /// Coefficient vector over the base field, constant term first.
    pub fn coeffs(&self) -> Vec<u64> {
        self.spec.unpack(self.code)
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    fn check(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(FieldError::SpecMismatch)
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(FieldElement {
            spec: self.spec.clone(),
            code: self.spec.add(self.code, other.code),
        })
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(FieldElement {
            spec: self.spec.clone(),
            code: self.spec.sub(self.code, other.code),
        })
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(FieldElement {
            spec: self.spec.clone(),
            code: self.spec.mul(self.code, other.code),
        })
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(FieldElement {
            spec: self.spec.clone(),
            code: self.spec.div(self.code, other.code)?,
        })
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        Ok(FieldElement {
            spec: self.spec.clone(),
            code: self.spec.inv(self.code)?,
        })
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement {
            spec: self.spec.clone(),
            code: self.spec.neg(self.code),
        }
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        FieldElement {
            spec: self.spec.clone(),
            code: self.spec.pow(self.code, e),
        }
    }

    /// Binary operation dispatcher covering the spec'd op set.
    pub fn arith(&self, op: ArithOp, other: &FieldElement) -> Result<FieldElement, FieldError> {
        match op {
            ArithOp::Add => self.add(other),
            ArithOp::Sub => self.sub(other),
            ArithOp::Mul => self.mul(other),
            ArithOp::Div => self.div(other),
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.code, self.spec)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn prime_field_basics() {
        let f2 = gf(2);
        assert_eq!(f2.add(1, 1), 0);
        let f5 = gf(5);
        assert_eq!(f5.mul(3, 4), 2);
        assert!(matches!(FieldSpec::prime(4), Err(FieldError::NotPrime(4))));
        assert!(matches!(FieldSpec::prime(1), Err(FieldError::NotPrime(1))));
    }

    #[test]
    fn gf4_multiplication_table() {
        // codes: 0, 1, 2 = x, 3 = x+1 under x^2 + x + 1
        let f4 = FieldSpec::extension(&gf(2), 2, Some(&[1, 1, 1])).unwrap();
        assert_eq!(f4.mul(2, 2), 3); // x*x = x+1
        assert_eq!(f4.mul(2, 3), 1); // x*(x+1) = 1
        assert_eq!(f4.mul(3, 3), 2); // (x+1)^2 = x
    }

    #[test]
    fn canonical_modulus_is_smallest() {
        let f4 = FieldSpec::extension(&gf(2), 2, None).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]); // x^2+x+1
        let f8 = FieldSpec::extension(&gf(2), 3, None).unwrap();
        assert_eq!(f8.modulus(), &[1, 1, 0, 1]); // x^3+x+1
        let f256 = FieldSpec::extension(&gf(2), 8, None).unwrap();
        assert_eq!(f256.modulus(), &[1, 1, 0, 1, 1, 0, 0, 0, 1]); // AES polynomial
    }

    #[test]
    fn reducible_modulus_rejected_with_witness() {
        // x^2 + 1 = (x+1)^2 over GF(2)
        let err = FieldSpec::extension(&gf(2), 2, Some(&[1, 0, 1])).unwrap_err();
        match err {
            FieldError::ReducibleModulus { witness } => assert_eq!(witness, "1+x"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn degree_one_extension_is_base() {
        let f2 = gf(2);
        let same = FieldSpec::extension(&f2, 1, None).unwrap();
        assert_eq!(same, f2);
    }

    fn axiom_suite(spec: &FieldSpec) {
        let q = spec.order();
        for a in 0..q {
            assert_eq!(spec.add(a, 0), a);
            assert_eq!(spec.mul(a, 1 % q), a);
            assert_eq!(spec.add(a, spec.neg(a)), 0);
            if a != 0 {
                assert_eq!(spec.mul(a, spec.inv(a).unwrap()), 1 % q);
            }
            for b in 0..q {
                assert_eq!(spec.add(a, b), spec.add(b, a));
                assert_eq!(spec.mul(a, b), spec.mul(b, a));
                for c in 0..q {
                    assert_eq!(spec.add(spec.add(a, b), c), spec.add(a, spec.add(b, c)));
                    assert_eq!(spec.mul(spec.mul(a, b), c), spec.mul(a, spec.mul(b, c)));
                    assert_eq!(
                        spec.mul(a, spec.add(b, c)),
                        spec.add(spec.mul(a, b), spec.mul(a, c))
                    );
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small_orders() {
        for spec in [
            gf(2),
            gf(3),
            gf(5),
            gf(7),
            gf(11),
            gf(13),
            FieldSpec::extension(&gf(2), 2, None).unwrap(),
            FieldSpec::extension(&gf(2), 3, None).unwrap(),
            FieldSpec::extension(&gf(2), 4, None).unwrap(),
            FieldSpec::extension(&gf(3), 2, None).unwrap(),
            FieldSpec::extension(&FieldSpec::extension(&gf(2), 2, None).unwrap(), 2, None)
                .unwrap(),
        ] {
            assert!(spec.order() <= 16);
            axiom_suite(&spec);
        }
    }

    #[test]
    fn lift_preserves_structure() {
        // GF(2) -> GF(4)
        let f2 = gf(2);
        let f4 = FieldSpec::extension(&f2, 2, None).unwrap();
        let one = f2.one();
        assert_eq!(lift_element(&one, &f4).unwrap().code(), 1);
        // GF(3) -> GF(9): exhaustive homomorphism check
        let f3 = gf(3);
        let f9 = FieldSpec::extension(&f3, 2, None).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let ea = f3.element(a).unwrap();
                let eb = f3.element(b).unwrap();
                let la = lift_element(&ea, &f9).unwrap();
                let lb = lift_element(&eb, &f9).unwrap();
                assert_eq!(
                    lift_element(&ea.add(&eb).unwrap(), &f9).unwrap(),
                    la.add(&lb).unwrap()
                );
                assert_eq!(
                    lift_element(&ea.mul(&eb).unwrap(), &f9).unwrap(),
                    la.mul(&lb).unwrap()
                );
            }
        }
        // injectivity is code-preservation
        let codes: Vec<u64> = (0..3)
            .map(|c| lift_element(&f3.element(c).unwrap(), &f9).unwrap().code())
            .collect();
        assert_eq!(codes, vec![0, 1, 2]);
        // not-an-extension rejected
        let f5 = gf(5);
        assert!(matches!(
            lift_element(&f5.one(), &f9),
            Err(FieldError::NotAnExtension)
        ));
    }

    #[test]
    fn pow_matches_naive() {
        for spec in [gf(5), gf(13), FieldSpec::extension(&gf(2), 4, None).unwrap()] {
            for v in 0..spec.order() {
                let mut acc = 1 % spec.order();
                for e in 0..=32u64 {
                    assert_eq!(spec.pow(v, e), acc, "v={v} e={e} in {spec}");
                    acc = spec.mul(acc, v);
                }
            }
        }
    }

    #[test]
    fn fermat_and_inverse() {
        let f5 = gf(5);
        assert_eq!(f5.pow(2, 4), 1);
        for spec in [gf(7), FieldSpec::extension(&gf(2), 3, None).unwrap()] {
            for a in 1..spec.order() {
                assert_eq!(spec.mul(a, spec.inv(a).unwrap()), 1);
            }
        }
        assert!(matches!(gf(7).inv(0), Err(FieldError::DivisionByZero)));
    }

    #[test]
    fn tables_agree_with_schoolbook() {
        // exhaustive for GF(2^8) and GF(3^4); the table path must be a pure
        // speedup of the reference path
        for spec in [
            FieldSpec::extension(&gf(2), 8, None).unwrap(),
            FieldSpec::extension(&gf(3), 4, None).unwrap(),
        ] {
            for a in 0..spec.order() {
                for b in 0..spec.order() {
                    assert_eq!(spec.mul(a, b), spec.mul_schoolbook(a, b));
                }
            }
        }
    }

    #[test]
    fn large_field_no_tables_still_exact() {
        let f = FieldSpec::extension(&gf(2), 20, None).unwrap();
        assert_eq!(f.order(), 1 << 20);
        let a = 0xABCDE % f.order();
        assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        assert_eq!(f.mul(a, 1), a);
    }

    #[test]
    fn literal_roundtrip() {
        for text in ["GF(2)", "GF(5)", "GF(2^4)", "GF(3^2)", "GF(2^3; modulus=[1,1,0,1])"] {
            let spec = FieldSpec::parse(text).unwrap();
            let again = FieldSpec::parse(&spec.literal()).unwrap();
            assert_eq!(spec, again);
        }
        assert!(FieldSpec::parse("GF(6)").is_err());
        assert!(FieldSpec::parse("gibberish").is_err());
    }

    #[test]
    fn element_spec_mismatch() {
        let a = gf(2).one();
        let b = gf(3).one();
        assert!(matches!(a.add(&b), Err(FieldError::SpecMismatch)));
    }

    #[test]
    fn arith_dispatch() {
        let f5 = gf(5);
        let a = f5.element(3).unwrap();
        let b = f5.element(4).unwrap();
        assert_eq!(a.arith(ArithOp::Mul, &b).unwrap().code(), 2);
        assert_eq!(a.arith(ArithOp::Sub, &b).unwrap().code(), 4);
        assert!(b.arith(ArithOp::Div, &f5.zero()).is_err());
    }
}
