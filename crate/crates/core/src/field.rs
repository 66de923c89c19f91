//! Exact arithmetic in GF(p^m).
//!
//! Elements are stored by their canonical integer encoding
//! `e = sum coords[i] * p^i`, where `coords` are the coefficients of the
//! element in the polynomial basis `1, t, ..., t^(m-1)` of `Z_p[t]/(modulus)`.
//! Zero encodes the additive identity and one the multiplicative identity.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, mul_mod, prime_factors};
use crate::error::{Error, Result};

/// Largest supported extension degree (binary fields up to 2^62).
pub const MAX_DEGREE: usize = 62;

/// Largest field for which [`FieldCtx::with_log_table`] builds tables.
pub const LOG_TABLE_LIMIT: u64 = 1 << 20;

/// Below this characteristic, products are reduced once at the end.
const LAZY_REDUCTION_PRIME: u64 = 1 << 24;

/// A field element, identified by its canonical encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u64);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Text form of a field: `"p^m"` (or a bare prime) plus an optional modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u64,
    pub m: usize,
    pub modulus: Option<Vec<u64>>,
}

impl FieldSpec {
    pub fn new(p: u64, m: usize) -> Self {
        FieldSpec { p, m, modulus: None }
    }

    /// Parses a comma separated, low-to-high coefficient list (`"1,0,1"` is `1 + t^2`).
    pub fn with_modulus_text(mut self, text: &str) -> Result<Self> {
        let coeffs = text
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad modulus coefficient {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.modulus = Some(coeffs);
        Ok(self)
    }

    pub fn build(&self) -> Result<FieldCtx> {
        FieldCtx::new(self.p, self.m, self.modulus.clone())
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (p, m) = match s.split_once('^') {
            Some((p, m)) => (p.trim(), m.trim()),
            None => (s, "1"),
        };
        let p = p
            .parse::<u64>()
            .map_err(|_| Error::Parse(format!("bad field characteristic in {s:?}")))?;
        let m = m
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad extension degree in {s:?}")))?;
        Ok(FieldSpec::new(p, m))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.m)
    }
}

#[derive(Clone, Debug)]
struct LogTables {
    /// `exp[k] = beta^k` for `k` in `0..2(q-1)`.
    exp: Vec<u32>,
    /// `log[e] = k` with `beta^k = e`; `log[0]` is unused.
    log: Vec<u32>,
}

/// Immutable description of GF(p^m).
#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u64,
    m: usize,
    q: u64,
    /// Monic, low-to-high, length `m + 1`.
    modulus: Vec<u64>,
    /// Modulus without the leading term, as a bit mask (binary fields only).
    modulus_bits: u64,
    beta: Elem,
    logs: Option<LogTables>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// Builds GF(p^m). Without a modulus the lexicographically smallest monic
    /// irreducible of degree `m` is used (coefficients compared from the
    /// constant term upward).
    pub fn new(p: u64, m: usize, modulus: Option<Vec<u64>>) -> Result<Self> {
        if !is_prime(p) || p >= 1 << 32 {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = checked_order(p, m).ok_or(Error::FieldTooLarge { p, m })?;
        let modulus = match modulus {
            Some(c) => {
                if c.len() != m + 1 {
                    return Err(Error::InvalidModulus(format!(
                        "expected {} coefficients (degree {m}, low to high), got {}",
                        m + 1,
                        c.len()
                    )));
                }
                if c[m] != 1 {
                    return Err(Error::InvalidModulus("modulus must be monic".into()));
                }
                if let Some(bad) = c.iter().find(|&&x| x >= p) {
                    return Err(Error::InvalidModulus(format!("coefficient {bad} not reduced mod {p}")));
                }
                if !zp::is_irreducible(&c, p) {
                    return Err(Error::InvalidModulus("modulus is reducible".into()));
                }
                c
            }
            None => default_modulus(p, m),
        };
        let modulus_bits = if p == 2 {
            modulus[..m].iter().enumerate().fold(0u64, |acc, (i, &c)| acc | (c << i))
        } else {
            0
        };
        let mut ctx = FieldCtx { p, m, q, modulus, modulus_bits, beta: Elem::ONE, logs: None };
        ctx.beta = ctx.find_primitive();
        Ok(ctx)
    }

    /// Adds discrete log / antilog tables (only for `q <= 2^20`; larger
    /// fields are returned unchanged).
    pub fn with_log_table(mut self) -> Self {
        if self.q > LOG_TABLE_LIMIT || self.logs.is_some() {
            return self;
        }
        let n = (self.q - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; self.q as usize];
        let mut x = Elem::ONE;
        for k in 0..n {
            exp[k] = x.0 as u32;
            log[x.0 as usize] = k as u32;
            x = self.mul(x, self.beta);
        }
        for k in n..2 * n {
            exp[k] = exp[k - n];
        }
        self.logs = Some(LogTables { exp, log });
        self
    }

    pub fn has_log_table(&self) -> bool {
        self.logs.is_some()
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Order of the multiplicative group, `q - 1`.
    pub fn group_order(&self) -> u64 {
        self.q - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn modulus_text(&self) -> String {
        self.modulus.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.p, m: self.m, modulus: Some(self.modulus.clone()) }
    }

    /// The canonical primitive element.
    pub fn beta(&self) -> Elem {
        self.beta
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(Elem)
    }

    pub fn elem(&self, e: u64) -> Result<Elem> {
        if e < self.q {
            Ok(Elem(e))
        } else {
            Err(Error::ElementOutOfRange(e, self.q))
        }
    }

    /// Image of an integer under `Z -> Z_p -> GF(q)`.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p as i64) as u64)
    }

    pub fn encode(&self, coords: &[u64]) -> Result<Elem> {
        if coords.len() > self.m {
            return Err(Error::Parse(format!("{} coordinates for degree {}", coords.len(), self.m)));
        }
        let mut e = 0u64;
        for &c in coords.iter().rev() {
            if c >= self.p {
                return Err(Error::Parse(format!("coordinate {c} not reduced mod {}", self.p)));
            }
            e = e * self.p + c;
        }
        Ok(Elem(e))
    }

    pub fn decode(&self, x: Elem) -> Vec<u64> {
        let mut out = vec![0u64; self.m];
        self.decode_into(x.0, &mut out);
        out
    }

    fn decode_into(&self, mut e: u64, out: &mut [u64]) {
        if self.p == 2 {
            for (i, c) in out.iter_mut().enumerate().take(self.m) {
                *c = (e >> i) & 1;
            }
            return;
        }
        for c in out.iter_mut().take(self.m) {
            *c = e % self.p;
            e /= self.p;
        }
    }

    fn encode_from(&self, coords: &[u64]) -> u64 {
        if self.p == 2 {
            return coords[..self.m].iter().enumerate().fold(0, |acc, (i, &c)| acc | (c << i));
        }
        coords[..self.m].iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if self.m == 1 {
            return Elem((a.0 + b.0) % self.p);
        }
        let mut x = [0u64; MAX_DEGREE];
        let mut y = [0u64; MAX_DEGREE];
        self.decode_into(a.0, &mut x);
        self.decode_into(b.0, &mut y);
        for i in 0..self.m {
            x[i] = (x[i] + y[i]) % self.p;
        }
        Elem(self.encode_from(&x))
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        if self.m == 1 {
            return Elem((self.p - a.0) % self.p);
        }
        let mut x = [0u64; MAX_DEGREE];
        self.decode_into(a.0, &mut x);
        for c in x.iter_mut().take(self.m) {
            *c = (self.p - *c) % self.p;
        }
        Elem(self.encode_from(&x))
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        if let Some(t) = &self.logs {
            let k = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
            return Elem(t.exp[k] as u64);
        }
        if self.m == 1 {
            return Elem(mul_mod(a.0, b.0, self.p));
        }
        if self.p == 2 {
            return Elem(self.mul_binary(a.0, b.0));
        }
        let m = self.m;
        let p = self.p;
        let mut x = [0u64; MAX_DEGREE];
        let mut y = [0u64; MAX_DEGREE];
        self.decode_into(a.0, &mut x);
        self.decode_into(b.0, &mut y);
        if p < LAZY_REDUCTION_PRIME {
            return Elem(self.mul_lazy(&x, &y));
        }
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..m {
            if x[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + x[i] * y[j] % p) % p;
            }
        }
        for k in (m..2 * m - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            let neg = p - c;
            for i in 0..m {
                prod[k - m + i] = (prod[k - m + i] + neg * self.modulus[i] % p) % p;
            }
            prod[k] = 0;
        }
        Elem(self.encode_from(&prod))
    }

    /// Schoolbook product without per-step reduction; every intermediate stays
    /// below `2 m p^2 < 2^64` for `p < LAZY_REDUCTION_PRIME`.
    fn mul_lazy(&self, x: &[u64; MAX_DEGREE], y: &[u64; MAX_DEGREE]) -> u64 {
        let (m, p) = (self.m, self.p);
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..m {
            if x[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] += x[i] * y[j];
            }
        }
        for k in (m..2 * m - 1).rev() {
            let c = prod[k] % p;
            if c == 0 {
                continue;
            }
            let neg = p - c;
            for i in 0..m {
                prod[k - m + i] += neg * self.modulus[i];
            }
        }
        for c in prod.iter_mut().take(m) {
            *c %= p;
        }
        self.encode_from(&prod)
    }

    fn mul_binary(&self, a: u64, b: u64) -> u64 {
        let m = self.m;
        let mut acc: u128 = 0;
        let mut bb = b;
        let mut shift = 0;
        while bb != 0 {
            if bb & 1 == 1 {
                acc ^= (a as u128) << shift;
            }
            bb >>= 1;
            shift += 1;
        }
        let red = self.modulus_bits as u128;
        for k in (m..2 * m - 1).rev() {
            if (acc >> k) & 1 == 1 {
                acc ^= 1u128 << k;
                acc ^= red << (k - m);
            }
        }
        acc as u64
    }

    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    /// `x^k` for a non-negative exponent. For nonzero `x` the exponent is
    /// taken mod `q - 1`; `0^0 = 1` and `0^k = 0` otherwise.
    pub fn pow(&self, x: Elem, k: u64) -> Elem {
        if x.0 == 0 {
            return if k == 0 { Elem::ONE } else { Elem::ZERO };
        }
        let k = k % (self.q - 1);
        if let Some(t) = &self.logs {
            let e = mul_mod(t.log[x.0 as usize] as u64, k, self.q - 1);
            return Elem(t.exp[e as usize] as u64);
        }
        let mut base = x;
        let mut acc = Elem::ONE;
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `x^k` for any integer exponent; negative exponents need `x != 0`.
    pub fn pow_signed(&self, x: Elem, k: i128) -> Result<Elem> {
        if x.0 == 0 {
            return match k {
                0 => Ok(Elem::ONE),
                k if k > 0 => Ok(Elem::ZERO),
                _ => Err(Error::NegativePowerOfZero),
            };
        }
        let e = k.rem_euclid(self.q as i128 - 1) as u64;
        Ok(self.pow(x, e))
    }

    pub fn inv(&self, x: Elem) -> Result<Elem> {
        if x.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(x, self.q - 2))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `beta^k`, exponent taken mod `q - 1`.
    pub fn beta_pow(&self, k: i128) -> Elem {
        let e = k.rem_euclid(self.q as i128 - 1) as u64;
        if let Some(t) = &self.logs {
            return Elem(t.exp[e as usize] as u64);
        }
        self.pow(self.beta, e)
    }

    /// Discrete log base beta (needs the log table).
    pub fn log(&self, x: Elem) -> Option<u64> {
        if x.0 == 0 {
            return None;
        }
        self.logs.as_ref().map(|t| t.log[x.0 as usize] as u64)
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, x: Elem) -> Option<u64> {
        if x.0 == 0 {
            return None;
        }
        let mut ord = self.q - 1;
        for t in prime_factors(self.q - 1) {
            while ord % t == 0 && self.pow(x, ord / t) == Elem::ONE {
                ord /= t;
            }
        }
        Some(ord)
    }

    pub fn is_primitive(&self, x: Elem) -> bool {
        if x.0 == 0 {
            return false;
        }
        let n = self.q - 1;
        self.pow(x, n) == Elem::ONE && prime_factors(n).into_iter().all(|t| self.pow(x, n / t) != Elem::ONE)
    }

    /// Smallest-encoding generator of the multiplicative group.
    pub fn find_primitive(&self) -> Elem {
        let n = self.q - 1;
        let factors = prime_factors(n);
        (1..self.q)
            .map(Elem)
            .find(|&x| factors.iter().all(|&t| self.pow(x, n / t) != Elem::ONE))
            .expect("the multiplicative group of a finite field is cyclic")
    }

    /// The subgroup of `ell`-th roots of unity, listed as `omega^0, ..., omega^(ell-1)`
    /// with `omega = beta^((q-1)/ell)`.
    pub fn unity_subgroup(&self, ell: u64) -> Result<Subgroup> {
        Subgroup::new(self, ell)
    }

    /// Frobenius `x -> x^p`.
    pub fn frobenius(&self, x: Elem) -> Elem {
        self.pow(x, self.p)
    }
}

fn checked_order(p: u64, m: usize) -> Option<u64> {
    if m > MAX_DEGREE {
        return None;
    }
    let mut q = 1u64;
    for _ in 0..m {
        q = q.checked_mul(p)?;
    }
    if q >= 1 << 63 {
        return None;
    }
    Some(q)
}

/// Lexicographically smallest monic irreducible of degree `m` over `Z_p`,
/// comparing the constant coefficient first.
pub fn default_modulus(p: u64, m: usize) -> Vec<u64> {
    let mut digits = vec![0u64; m];
    // for m > 1 a zero constant term means t divides the polynomial
    if m > 1 {
        digits[0] = 1;
    }
    loop {
        let mut poly = digits.clone();
        poly.push(1);
        if zp::is_irreducible(&poly, p) {
            return poly;
        }
        // increment with digits[m-1] least significant
        let mut i = m;
        loop {
            i -= 1;
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            assert!(i > 0, "an irreducible polynomial of every degree exists");
        }
    }
}

/// The cyclic subgroup `mu_ell` of GF(q)*, with a reverse index.
#[derive(Clone, Debug)]
pub struct Subgroup {
    ell: u64,
    s: u64,
    omega: Elem,
    elems: Vec<Elem>,
    index: HashMap<Elem, u32>,
}

impl Subgroup {
    pub fn new(ctx: &FieldCtx, ell: u64) -> Result<Self> {
        let order = ctx.group_order();
        if ell == 0 || order % ell != 0 {
            return Err(Error::NotDivisor { ell, order });
        }
        if ell > u32::MAX as u64 {
            return Err(Error::TableTooLarge(ell));
        }
        let s = order / ell;
        let omega = ctx.beta_pow(s as i128);
        let mut elems = Vec::with_capacity(ell as usize);
        let mut index = HashMap::with_capacity(ell as usize);
        let mut x = Elem::ONE;
        for i in 0..ell {
            elems.push(x);
            index.insert(x, i as u32);
            x = ctx.mul(x, omega);
        }
        Ok(Subgroup { ell, s, omega, elems, index })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// `s = (q - 1) / ell`.
    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn omega(&self) -> Elem {
        self.omega
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elems
    }

    /// `omega^i`, index taken mod `ell`.
    pub fn elem(&self, i: u64) -> Elem {
        self.elems[(i % self.ell) as usize]
    }

    /// `i` with `omega^i = x`, if `x` lies in the subgroup.
    pub fn index_of(&self, x: Elem) -> Option<u64> {
        self.index.get(&x).map(|&i| i as u64)
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.index.contains_key(&x)
    }
}

/// Field embedding GF(p^k) -> GF(p^(k*d)).
#[derive(Clone, Debug)]
pub struct Embedding {
    /// Powers `root^i`, `i < k`, of a root of the base modulus.
    root_powers: Vec<Elem>,
    base_p: u64,
    base_m: usize,
}

impl Embedding {
    pub fn new(base: &FieldCtx, ext: &FieldCtx) -> Result<Self> {
        if base.p != ext.p || ext.m % base.m != 0 {
            return Err(Error::FieldMismatch(format!(
                "GF({}^{}) is not a subfield of GF({}^{})",
                base.p, base.m, ext.p, ext.m
            )));
        }
        let root = if base.m == 1 {
            Elem::ONE
        } else {
            // roots of the base modulus live in the order-q subfield
            let cofactor = (ext.q - 1) / (base.q - 1);
            let gamma = ext.pow(ext.beta, cofactor);
            let mut x = gamma;
            let mut found = None;
            for _ in 0..base.q - 1 {
                let val = base
                    .modulus
                    .iter()
                    .rev()
                    .fold(Elem::ZERO, |acc, &c| ext.add(ext.mul(acc, x), Elem(c)));
                if val.is_zero() {
                    found = Some(x);
                    break;
                }
                x = ext.mul(x, gamma);
            }
            found.ok_or_else(|| Error::FieldMismatch("no root of the base modulus found".into()))?
        };
        let mut root_powers = Vec::with_capacity(base.m);
        let mut acc = Elem::ONE;
        for _ in 0..base.m {
            root_powers.push(acc);
            acc = ext.mul(acc, root);
        }
        Ok(Embedding { root_powers, base_p: base.p, base_m: base.m })
    }

    pub fn apply(&self, ext: &FieldCtx, x: Elem) -> Elem {
        let mut e = x.0;
        let mut out = Elem::ZERO;
        for i in 0..self.base_m {
            let c = e % self.base_p;
            e /= self.base_p;
            if c != 0 {
                out = ext.add(out, ext.mul(Elem(c), self.root_powers[i]));
            }
        }
        out
    }
}

/// Polynomials over `Z_p` as low-to-high coefficient vectors (irreducibility only).
pub(crate) mod zp {
    use crate::arith::{mul_mod, pow_mod, prime_factors};

    fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let df = f.len() - 1;
        let lead_inv = pow_mod(f[df], p - 2, p);
        while r.len() > df {
            let k = r.len() - 1;
            let c = mul_mod(r[k], lead_inv, p);
            if c != 0 {
                for i in 0..=df {
                    let sub = mul_mod(c, f[i], p);
                    let idx = k - df + i;
                    r[idx] = (r[idx] + p - sub) % p;
                }
            }
            trim(&mut r);
        }
        r
    }

    fn mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        rem(&prod, f, p)
    }

    fn powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, f, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &b, f, p);
            }
            b = mulmod(&b, &b, f, p);
            e >>= 1;
        }
        rem(&acc, f, p)
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// Rabin's test for a monic `f` of degree >= 1.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let m = f.len() - 1;
        if m == 1 {
            return true;
        }
        if f[0] == 0 {
            return false;
        }
        let x = vec![0u64, 1];
        // frob[i] = x^(p^i) mod f
        let mut frob = vec![rem(&x, f, p)];
        for i in 1..=m {
            let next = powmod(&frob[i - 1], p, f, p);
            frob.push(next);
        }
        if frob[m] != rem(&x, f, p) {
            return false;
        }
        for t in prime_factors(m as u64) {
            let k = m / t as usize;
            let mut d = frob[k].clone();
            d.resize(d.len().max(2), 0);
            d[1] = (d[1] + p - 1) % p;
            trim(&mut d);
            let g = gcd(f, &d, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}
