//! Constructions of n-cycle permutations: the cyclotomic (Vandermonde)
//! construction from a prescribed n-cycle map on `mu_ell`, and lifts from
//! subfields.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, pow_mod};
use crate::criteria::{self, Prepared};
use crate::error::{Error, Result};
use crate::field::{Elem, Embedding, FieldCtx};
use crate::interp::interpolate_on_subgroup;
use crate::perm::to_table;
use crate::poly::{IndexForm, SparsePoly};

/// A target map on `mu_ell` (`omega^i -> omega^sigma(i)`) plus the exponent
/// offsets `m_i`.
///
/// The orbit notation `a_(i,j)` is `sigma^j(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GSpec {
    sigma: Vec<usize>,
    mvec: Vec<u64>,
}

impl GSpec {
    pub fn new(sigma: Vec<usize>, mvec: Vec<u64>) -> Result<Self> {
        let ell = sigma.len();
        let mut seen = vec![false; ell];
        for &x in &sigma {
            if x >= ell || std::mem::replace(&mut seen[x], true) {
                return Err(Error::BadSigma(ell));
            }
        }
        if mvec.len() != ell {
            return Err(Error::SizeMismatch(ell, mvec.len()));
        }
        Ok(GSpec { sigma, mvec })
    }

    pub fn identity(mvec: Vec<u64>) -> Self {
        GSpec { sigma: (0..mvec.len()).collect(), mvec }
    }

    /// Parses `"1,2,0"` and `"0,1,0"`.
    pub fn parse(sigma: &str, mvec: &str) -> Result<Self> {
        GSpec::new(parse_list(sigma)?, parse_list(mvec)?)
    }

    pub fn ell(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn mvec(&self) -> &[u64] {
        &self.mvec
    }

    /// `a_(i,j) = sigma^j(i)`.
    pub fn orbit_entry(&self, i: usize, j: u64) -> usize {
        (0..j).fold(i, |x, _| self.sigma[x])
    }

    pub fn sigma_order_divides(&self, n: u64) -> bool {
        (0..self.ell()).all(|i| self.orbit_entry(i, n) == i)
    }

    pub fn sigma_text(&self) -> String {
        join(&self.sigma)
    }

    pub fn mvec_text(&self) -> String {
        join(&self.mvec)
    }
}

impl fmt::Display for GSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sigma={} m={}", self.sigma_text(), self.mvec_text())
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_list<T: FromStr>(text: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| Error::Parse(format!("bad list entry {t:?} in {text:?}"))))
        .collect()
}

/// `r^n = 1 mod s` and `sum_{k<n} r^(n-k-1) m_(sigma^k(i)) = 0 mod s` for every `i`.
pub fn check_solution_congruences(spec: &GSpec, r: u64, n: u32, s: u64) -> Result<bool> {
    if !spec.sigma_order_divides(n as u64) {
        return Err(Error::SigmaOrder { n });
    }
    if s == 0 {
        return Err(Error::Precondition("s must be positive".into()));
    }
    if pow_mod(r, n as u64, s) != 1 % s {
        return Ok(false);
    }
    Ok((0..spec.ell()).all(|i| {
        let mut acc = 0u64;
        let mut x = i;
        for k in 0..n {
            let w = pow_mod(r, (n - k - 1) as u64, s);
            acc = (acc + w * (spec.mvec[x] % s) % s) % s;
            x = spec.sigma[x];
        }
        acc == 0
    }))
}

/// An emitted form together with whether its preconditions held.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Construction {
    pub form: IndexForm,
    pub valid: bool,
    pub issues: Vec<String>,
}

/// Builds `h` with `h(omega^i) = beta^(ell m_i + sigma(i) - i r)` by
/// interpolation on `mu_ell`, so that `g(omega^i) = omega^sigma(i)`.
///
/// Always emits the form; `valid` records whether the solution congruences
/// hold (equivalently, whether the result is an n-cycle permutation).
pub fn cyclotomic_construct(spec: &GSpec, r: u64, n: u32, ctx: &FieldCtx) -> Result<Construction> {
    let ell = spec.ell() as u64;
    let order = ctx.group_order();
    if ell == 0 || order % ell != 0 {
        return Err(Error::NotDivisor { ell, order });
    }
    let s = order / ell;
    let mut issues = Vec::new();
    if gcd(r, s) != 1 {
        issues.push(format!("gcd(r, s) = gcd({r}, {s}) != 1"));
    }
    let ok = check_solution_congruences(spec, r, n, s)?;
    if !ok {
        issues.push("solution congruences fail".to_string());
    }
    let sub = ctx.unity_subgroup(ell)?;
    let values: Vec<Elem> = (0..spec.ell())
        .map(|i| {
            let m = (spec.mvec[i] % s) as i128;
            let e = ell as i128 * m + spec.sigma[i] as i128 - i as i128 * r as i128;
            ctx.beta_pow(e)
        })
        .collect();
    let h = interpolate_on_subgroup(&values, &sub, ctx)?;
    let form = IndexForm::new(r, s, h, ctx)?;
    Ok(Construction { form, valid: issues.is_empty(), issues })
}

/// The construction with `g = id` on `mu_ell`; `ell = mvec.len()`.
pub fn cyclotomic_identity(mvec: &[u64], r: u64, n: u32, ctx: &FieldCtx) -> Result<Construction> {
    cyclotomic_construct(&GSpec::identity(mvec.to_vec()), r, n, ctx)
}

/// Result of lifting `x^r h(x)` data from GF(q) to GF(q^m).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lift {
    /// `f(x) = x^r h(x^((q^m-1)/(q-1)))` over the extension.
    pub form: IndexForm,
    /// Whether `x^r h(x)^m` is an n-cycle permutation of the base field.
    pub base_n_cycle: bool,
    pub valid: bool,
    pub issues: Vec<String>,
}

/// Lifts `h` over GF(q) to `f(x) = x^r h(x^((q^m-1)/(q-1)))` over GF(q^m).
///
/// `f` is an n-cycle permutation iff `x^r h(x)^m` is one on GF(q), given
/// `gcd(q-1, m) = 1` and `r^n = 1 mod (q^m-1)/(q-1)`. The base-field side is
/// checked by brute force before emitting.
pub fn lift_subfield(h: &SparsePoly, r: u64, m: u32, n: u32, base: &FieldCtx, ext: &FieldCtx) -> Result<Lift> {
    if base.characteristic() != ext.characteristic() || base.degree() * m as usize != ext.degree() {
        return Err(Error::FieldMismatch(format!(
            "GF({}) is not a degree-{m} extension of GF({})",
            ext.order(),
            base.order()
        )));
    }
    let q = base.order();
    let big_s = ext.group_order() / (q - 1);
    let mut issues = Vec::new();
    if gcd(q - 1, m as u64) != 1 {
        issues.push(format!("gcd(q - 1, m) = gcd({}, {m}) != 1", q - 1));
    }
    if pow_mod(r, n as u64, big_s) != 1 % big_s {
        issues.push(format!("r^n = {r}^{n} != 1 mod {big_s}"));
    }
    let base_table = to_table(&BaseG { h, r, m }, base)?;
    let base_n_cycle = base_table.is_bijective() && base_table.is_n_cycle(n as u64)?;
    if !base_n_cycle {
        issues.push(format!("x^r h(x)^{m} is not an {n}-cycle permutation of GF({q})"));
    }
    let emb = Embedding::new(base, ext)?;
    let ell = q - 1;
    let mut coeffs = vec![Elem::ZERO; ell as usize];
    for &(e, c) in h.terms() {
        let j = (e % ell) as usize;
        coeffs[j] = ext.add(coeffs[j], emb.apply(ext, c));
    }
    let form = IndexForm::new(r, big_s, coeffs, ext)?;
    Ok(Lift { form, base_n_cycle, valid: issues.is_empty(), issues })
}

/// `x -> x^r h(x)^m` on the base field.
struct BaseG<'a> {
    h: &'a SparsePoly,
    r: u64,
    m: u32,
}

impl crate::poly::FieldFunction for BaseG<'_> {
    fn eval_at(&self, x: Elem, ctx: &FieldCtx) -> Elem {
        ctx.mul(ctx.pow(x, self.r), ctx.pow(self.h.eval(x, ctx), self.m as u64))
    }
}

/// Outcome of the subgroup-preserving lift test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftVerdict {
    pub passed: bool,
    /// Set when a hypothesis fails; `passed` is then false.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precondition_failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Elem>,
}

/// For `gcd(r, s) = 1`, `r^n = 1 mod s`, `gcd(s, ell) = 1` and `h(mu_ell) ⊆ mu_ell`:
/// `f` is n-cycle iff `g = x^r h(x)^s` is n-cycle on `mu_ell`.
pub fn subgroup_lift_check(form: &IndexForm, n: u32, ctx: &FieldCtx) -> Result<LiftVerdict> {
    let prep = Prepared::new(form, ctx)?;
    let (r, s, ell) = (prep.r, prep.s, prep.ell());
    let fail = |msg: String, witness| Ok(LiftVerdict { passed: false, precondition_failure: Some(msg), witness });
    if gcd(r, s) != 1 {
        return fail(format!("gcd(r, s) = gcd({r}, {s}) != 1"), None);
    }
    if pow_mod(r, n as u64, s) != 1 % s {
        return fail(format!("r^n != 1 mod {s}"), None);
    }
    if gcd(s, ell) != 1 {
        return fail(format!("gcd(s, ell) = gcd({s}, {ell}) != 1"), None);
    }
    if let Some(i) = prep.values.iter().position(|&v| !prep.sub.contains(v)) {
        return fail("h(mu_ell) is not contained in mu_ell".into(), Some(prep.sub.elem(i as u64)));
    }
    let map = criteria::induced_map(r, &prep.values, &prep.sub, ctx)?;
    Ok(LiftVerdict { passed: criteria::map_is_n_cycle(&map, n as u64), precondition_failure: None, witness: None })
}

/// For `h` over GF(q^n) with `h(y)^(q-1) = y^(1-q)` on `mu_ell`,
/// `ell = (q^n-1)/(q-1)`: `f = x^q h(x^(q-1))` is an n-cycle permutation iff
/// `h(mu_ell) ⊆ mu_ell`. `base_q` is `q`; `ctx` is GF(q^n).
pub fn frobenius_lift_check(h: &SparsePoly, base_q: u64, n: u32, ctx: &FieldCtx) -> Result<LiftVerdict> {
    let big = (base_q as u128).checked_pow(n).ok_or(Error::Precondition("q^n overflows".into()))?;
    if big != ctx.order() as u128 || base_q < 2 {
        return Err(Error::FieldMismatch(format!("GF({}) is not GF({base_q}^{n})", ctx.order())));
    }
    let ell = ctx.group_order() / (base_q - 1);
    let sub = ctx.unity_subgroup(ell)?;
    for (i, &y) in sub.elements().iter().enumerate() {
        let hy = h.eval(y, ctx);
        let lhs = ctx.pow(hy, base_q - 1);
        let rhs = ctx.pow_signed(y, 1 - base_q as i128)?;
        if hy.is_zero() || lhs != rhs {
            return Ok(LiftVerdict {
                passed: false,
                precondition_failure: Some("h(y)^(q-1) != y^(1-q)".into()),
                witness: Some(sub.elem(i as u64)),
            });
        }
    }
    match sub.elements().iter().find(|&&y| !sub.contains(h.eval(y, ctx))) {
        Some(&y) => Ok(LiftVerdict { passed: false, precondition_failure: None, witness: Some(y) }),
        None => Ok(LiftVerdict { passed: true, precondition_failure: None, witness: None }),
    }
}

/// `f = x^q h(x^(q-1))` as an index form over GF(q^n).
pub fn frobenius_lift_form(h: &SparsePoly, base_q: u64, ctx: &FieldCtx) -> Result<IndexForm> {
    IndexForm::from_h_poly(base_q, base_q - 1, h, ctx)
}
