//! Explicit families: high-index trinomials and quadrinomials built from
//! `phi(x) + phi(x)^q ...` over GF(q^2), and low-index binomials and trinomials.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, geometric_sum_mod, pow_mod, quotient_exponent};
use crate::constructor::{lift_subfield, Lift};
use crate::criteria::{self, CriterionVerdict};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx, Subgroup};
use crate::poly::{IndexForm, SparsePoly};

/// Pass/fail with an optional explanation and witness on `mu_ell`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyVerdict {
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Elem>,
}

impl FamilyVerdict {
    fn pass() -> Self {
        FamilyVerdict { passed: true, reason: None, witness: None }
    }

    fn fail(reason: impl Into<String>, witness: Option<Elem>) -> Self {
        FamilyVerdict { passed: false, reason: Some(reason.into()), witness }
    }
}

fn modulo(e: i128, m: u64) -> u64 {
    e.rem_euclid(m as i128) as u64
}

/// `sqrt(|ctx|)` for a field of even degree.
fn half_field(ctx: &FieldCtx) -> Result<u64> {
    if ctx.degree() % 2 != 0 {
        return Err(Error::FieldMismatch(format!("GF({}) is not of the form GF(Q^2)", ctx.order())));
    }
    Ok(ctx.characteristic().pow(ctx.degree() as u32 / 2))
}

fn power_of(q: u64, p: u64) -> bool {
    let mut x = q;
    while x > 1 && x % p == 0 {
        x /= p;
    }
    q > 1 && x == 1
}

/// First `y` in `mu_ell` where `h(y) h(y^v) h(y^(v^2)) != 1`.
fn product_witness(values: &[Elem], v: u64, sub: &Subgroup, ctx: &FieldCtx) -> Option<Elem> {
    let ell = sub.ell();
    let v = v % ell;
    (0..ell).find_map(|i| {
        let j = (i as u128 * v as u128 % ell as u128) as u64;
        let k = (j as u128 * v as u128 % ell as u128) as u64;
        let prod = ctx.mul(values[i as usize], ctx.mul(values[j as usize], values[k as usize]));
        (prod != Elem::ONE).then(|| sub.elem(i))
    })
}

fn emit(form: IndexForm, product: Option<Elem>, ctx: &FieldCtx) -> Result<IndexForm> {
    if let Some(w) = product {
        return Err(Error::Precondition(format!("product condition fails at y = {w}")));
    }
    let v = criteria::check_ncycle(&form, 3, ctx)?;
    if !v.passed {
        return Err(Error::Precondition(format!("criterion rejects the emitted form ({:?})", v.failure_kind)));
    }
    Ok(form)
}

/// Triple-cycle test for `f = x^r h(x^s)` when `g(y) = a y^v` on `mu_ell`
/// (`values[i] = h(omega^i)`).
pub fn single_check(values: &[Elem], a: Elem, v: u64, r: u64, sub: &Subgroup, ctx: &FieldCtx) -> Result<FamilyVerdict> {
    let (s, ell) = (sub.s(), sub.ell());
    if values.len() as u64 != ell {
        return Err(Error::SizeMismatch(ell as usize, values.len()));
    }
    if pow_mod(v, 3, ell) != 1 % ell {
        return Err(Error::Precondition(format!("v^3 = {v}^3 != 1 mod {ell}")));
    }
    let ai = sub.index_of(a).ok_or(Error::NotInSubgroup(a))?;
    if ctx.pow(a, v * v + v + 1) != Elem::ONE {
        return Err(Error::Precondition("a^(v^2 + v + 1) != 1".into()));
    }
    if gcd(r, s) != 1 || pow_mod(r, 3, s) != 1 % s {
        return Err(Error::CongruenceViolated { r, n: 3, s });
    }
    for i in 0..ell {
        let y = sub.elem(i);
        let want = ctx.mul(a, sub.elem(modulo(i as i128 * (v as i128 - r as i128), ell)));
        if ctx.pow(values[i as usize], s) != want {
            return Ok(FamilyVerdict::fail("h(y)^s != a y^(v - r)", Some(y)));
        }
    }
    let t = quotient_exponent(r, 3, s, ell).expect("r^3 = 1 mod s");
    let at = |i: u64| values[(i % ell) as usize];
    for i in 0..ell {
        // a y^v and a^(v+1) y^(v^2) as omega-powers
        let j = (ai + i * v) % ell;
        let k = ((v + 1) * ai + i * (v * v % ell)) % ell;
        let prod = [
            sub.elem(i * t % ell),
            ctx.pow(at(i), r * r),
            ctx.pow(at(j), r),
            at(k),
        ]
        .into_iter()
        .fold(Elem::ONE, |acc, x| ctx.mul(acc, x));
        if prod != Elem::ONE {
            return Ok(FamilyVerdict::fail("product condition fails", Some(sub.elem(i))));
        }
    }
    Ok(FamilyVerdict::pass())
}

/// `h = 1 + x^(1+q) + x^(1-q^2) + x^(-q^2-q)` on `mu_(q^3+1)` and
/// `f = x h(x^(q^3-1))` over GF(q^6), q a power of 3.
pub fn family_char3(q: u64, ctx: &FieldCtx) -> Result<IndexForm> {
    if !power_of(q, 3) || (q as u128).pow(6) != ctx.order() as u128 {
        return Err(Error::FieldMismatch(format!("need q a power of 3 and GF(q^6), got q = {q} over GF({})", ctx.order())));
    }
    let ell = q * q * q + 1;
    let (qi, li) = (q as i128, ell as i128);
    if (1 + 3 * qi + 2 * qi * qi) % li != 0 {
        return Err(Error::Precondition(format!("1 + 3q + 2q^2 != 0 mod q^3 + 1 for q = {q}")));
    }
    let exps = [0, 1 + qi, 1 - qi * qi, -qi * qi - qi];
    let h = SparsePoly::from_terms(exps.iter().map(|&e| (modulo(e, ell), Elem::ONE)), Some(ctx));
    let form = IndexForm::from_h_poly(1, ell - 2, &h, ctx)?;
    let sub = ctx.unity_subgroup(ell)?;
    let values = form.h_values(&sub, ctx);
    let bad = product_witness(&values, q * q, &sub, ctx);
    emit(form, bad, ctx)
}

/// `h = x^a + x^(aq) + 1` and `f = x h(x^(q-1))` over GF(q^2), q even,
/// `5a = 0 mod q+1`.
pub fn family_even_q(q: u64, a: u64, ctx: &FieldCtx) -> Result<IndexForm> {
    check_even_frame(q, ctx)?;
    let ell = q + 1;
    if (5 * a as u128) % ell as u128 != 0 {
        return Err(Error::Precondition(format!("5a = {} != 0 mod {ell}", 5 * a as u128)));
    }
    let h = even_q_h(q, a, ctx);
    let form = IndexForm::from_h_poly(1, q - 1, &h, ctx)?;
    let sub = ctx.unity_subgroup(ell)?;
    let bad = form.h_values(&sub, ctx).iter().position(|&y| ctx.pow(y, 3) != Elem::ONE).map(|i| sub.elem(i as u64));
    emit(form, bad, ctx)
}

fn even_q_h(q: u64, a: u64, ctx: &FieldCtx) -> SparsePoly {
    let ell = q + 1;
    let terms = [(a % ell, Elem::ONE), ((a as u128 * q as u128 % ell as u128) as u64, Elem::ONE), (0, Elem::ONE)];
    SparsePoly::from_terms(terms, Some(ctx))
}

fn check_even_frame(q: u64, ctx: &FieldCtx) -> Result<()> {
    if !power_of(q, 2) || (q as u128).pow(2) != ctx.order() as u128 {
        return Err(Error::FieldMismatch(format!("need q even and GF(q^2), got q = {q} over GF({})", ctx.order())));
    }
    Ok(())
}

/// Hypotheses of the `x^a + 1 + x^(1-v)` family: `v^3 = 1` and
/// `a(q - 1) = v - 1` mod `q + 1` (so `phi = x^a` has `phi^(q-1) = x^(v-1)` on
/// `mu_(q+1)`). Returns the failing ones by name.
pub fn v_trinomial_hypothesis_failures(q: u64, a: u64, v: u64) -> Vec<String> {
    let m = q as i128 + 1;
    let (a, v) = (a as i128, v as i128);
    named_failures(m, &[("v^3 = 1", v * v % m * v - 1), ("a(q - 1) = v - 1", a * (m - 2) - (v - 1))])
}

/// The three congruences that together imply the product condition. They are
/// sufficient only: the product condition is checked directly regardless.
pub fn v_trinomial_congruence_failures(q: u64, a: u64, v: u64) -> Vec<String> {
    let m = q as i128 + 1;
    let (a, v) = (a as i128, v as i128);
    named_failures(
        m,
        &[
            ("a(1 + v + v^2) = 0", a * (1 + v + v * v)),
            ("a + v - v^2 + av^2 - av = 0", a + v - v * v + a * v * v - a * v),
            ("av + v^2 + v - 2 = 0", a * v + v * v + v - 2),
        ],
    )
}

fn named_failures(m: i128, checks: &[(&str, i128)]) -> Vec<String> {
    checks.iter().filter(|(_, x)| x % m != 0).map(|(name, _)| format!("{name} (mod {m})")).collect()
}

/// `h = x^a + 1 + x^(1-v)` and `f = x h(x^(q-1))` over GF(q^2), q even.
///
/// Emits iff `h(y) h(y^v) h(y^(v^2)) = 1` on `mu_(q+1)`, which is exact under the
/// hypotheses; a rejection also names any of the three congruences that fail.
pub fn family_v_trinomial(q: u64, a: u64, v: u64, ctx: &FieldCtx) -> Result<IndexForm> {
    check_even_frame(q, ctx)?;
    let bad = v_trinomial_hypothesis_failures(q, a, v);
    if !bad.is_empty() {
        return Err(Error::Precondition(format!("hypotheses fail: {}", bad.join("; "))));
    }
    let ell = q + 1;
    let terms = [(a % ell, Elem::ONE), (0, Elem::ONE), (modulo(1 - v as i128, ell), Elem::ONE)];
    let h = SparsePoly::from_terms(terms, Some(ctx));
    let form = IndexForm::from_h_poly(1, q - 1, &h, ctx)?;
    let sub = ctx.unity_subgroup(ell)?;
    let values = form.h_values(&sub, ctx);
    if let Some(w) = product_witness(&values, v, &sub, ctx) {
        let mut msg = format!("product condition fails at y = {w}");
        let cong = v_trinomial_congruence_failures(q, a, v);
        if !cong.is_empty() {
            msg.push_str(&format!("; congruences fail: {}", cong.join("; ")));
        }
        return Err(Error::Precondition(msg));
    }
    emit(form, None, ctx)
}

/// Ways of building `h` from `phi` over GF(Q^2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhiVariant {
    /// `phi + phi^Q x^(1-v)`
    Twisted,
    /// `phi + phi^Q + 1`
    Trace,
    /// `phi + 1 + x^(1-v)`, needs `phi^(Q-1) = x^(v-1)` on `mu_(Q+1)`
    Shifted,
}

impl FromStr for PhiVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "twisted" => Ok(PhiVariant::Twisted),
            "B" | "trace" => Ok(PhiVariant::Trace),
            "C" | "shifted" => Ok(PhiVariant::Shifted),
            _ => Err(Error::Parse(format!("unknown variant {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiOutcome {
    pub verdict: FamilyVerdict,
    /// `f = x h(x^(Q-1))`, present when `h` was built.
    pub form: IndexForm,
}

/// Triple-cycle verdict for `f = x h(x^(Q-1))` over GF(Q^2) with `h` built from
/// `phi` per `variant`, decided on `mu_(Q+1)`.
pub fn generic_phi_family(phi: &SparsePoly, v: u64, variant: PhiVariant, ctx: &FieldCtx) -> Result<PhiOutcome> {
    let big_q = half_field(ctx)?;
    let ell = big_q + 1;
    let v = if variant == PhiVariant::Trace { 1 } else { v % ell };
    if pow_mod(v, 3, ell) != 1 % ell {
        return Err(Error::Precondition(format!("v^3 = {v}^3 != 1 mod {ell}")));
    }
    let sub = ctx.unity_subgroup(ell)?;
    let twist = modulo(1 - v as i128, ell);
    let mut values = Vec::with_capacity(ell as usize);
    let mut pre = None;
    for (i, &y) in sub.elements().iter().enumerate() {
        let p = phi.eval(y, ctx);
        let yt = sub.elem(i as u64 * twist % ell);
        let h = match variant {
            PhiVariant::Twisted => ctx.add(p, ctx.mul(ctx.pow(p, big_q), yt)),
            PhiVariant::Trace => ctx.add(ctx.add(p, ctx.pow(p, big_q)), Elem::ONE),
            PhiVariant::Shifted => {
                if pre.is_none() && ctx.pow(p, big_q - 1) != sub.elem(i as u64 * (v + ell - 1) % ell) {
                    pre = Some(y);
                }
                ctx.add(ctx.add(p, Elem::ONE), yt)
            }
        };
        values.push(h);
    }
    let form = IndexForm::from_values(1, big_q - 1, &values, ctx)?;
    let verdict = if let Some(w) = pre {
        FamilyVerdict::fail("phi(y)^(Q-1) != y^(v-1)", Some(w))
    } else if let Some(w) = criteria::first_zero(&values, &sub) {
        FamilyVerdict::fail("h vanishes on mu_(Q+1)", Some(w))
    } else {
        match product_witness(&values, v, &sub, ctx) {
            Some(w) if variant == PhiVariant::Trace => FamilyVerdict::fail("h(y)^3 != 1", Some(w)),
            Some(w) => FamilyVerdict::fail("h(y) h(y^v) h(y^(v^2)) != 1", Some(w)),
            None => FamilyVerdict::pass(),
        }
    };
    Ok(PhiOutcome { verdict, form })
}

/// Shape of the map `g(y) = y^r h(y)^s` on `mu_2` or `mu_3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GShape {
    Identity,
    /// `1 <-> -1` on `mu_2`
    Swap,
    /// `1 -> omega -> omega^2 -> 1`
    ForwardCycle,
    /// `1 -> omega^2 -> omega -> 1`
    BackwardCycle,
    /// Fixes one point of `mu_3` and swaps the other two.
    Transposition,
    NotPermutation,
}

fn g_shape(r: u64, values: &[Elem], sub: &Subgroup, ctx: &FieldCtx) -> GShape {
    let ell = sub.ell();
    let mut image = Vec::with_capacity(ell as usize);
    for (i, &h) in values.iter().enumerate() {
        let g = ctx.mul(ctx.pow(sub.elem(i as u64), r), ctx.pow(h, sub.s()));
        match sub.index_of(g) {
            Some(j) if !h.is_zero() => image.push(j),
            _ => return GShape::NotPermutation,
        }
    }
    let mut seen = image.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != image.len() {
        return GShape::NotPermutation;
    }
    match (ell, image.as_slice()) {
        (_, im) if im.iter().enumerate().all(|(i, &j)| i as u64 == j) => GShape::Identity,
        (2, _) => GShape::Swap,
        (3, [1, 2, 0]) => GShape::ForwardCycle,
        (3, [2, 0, 1]) => GShape::BackwardCycle,
        _ => GShape::Transposition,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinomialParams {
    pub a: Elem,
    pub b: Elem,
    pub r: u64,
    pub n: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrinomialParams {
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
    pub r: u64,
    pub n: u32,
}

/// Verdict for a low-index family member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowIndexOutcome {
    pub passed: bool,
    /// Exact for index 2 and for index 3 with `n = 3`; otherwise a sufficient
    /// condition only.
    pub exact: bool,
    pub shape: GShape,
    /// Each disjunct of condition (2) evaluated regardless of `shape`.
    pub disjuncts: Vec<bool>,
    pub form: IndexForm,
}

fn prod_pows(ctx: &FieldCtx, factors: &[(Elem, u64)]) -> Elem {
    factors.iter().fold(Elem::ONE, |acc, &(x, e)| ctx.mul(acc, ctx.pow(x, e)))
}

/// `f = ((a-b)/2) x^((q-1)/2 + r) + ((a+b)/2) x^r` over GF(q), q odd, where
/// `a = h(1)`, `b = h(-1)`.
///
/// The two alternatives of the closed-form condition belong to `g = id` and
/// `g = swap` on `mu_2`; the branch is chosen by the actual `g`.
pub fn index2_binomial(p: &BinomialParams, ctx: &FieldCtx) -> Result<LowIndexOutcome> {
    let q = ctx.order();
    if q % 2 == 0 {
        return Err(Error::Precondition("index-2 binomials need odd q".into()));
    }
    let s = (q - 1) / 2;
    let (a, b, r, n) = (p.a, p.b, p.r, p.n);
    if n == 0 || gcd(r, s) != 1 {
        return Err(Error::Precondition(format!("need n > 0 and gcd(r, s) = gcd({r}, {s}) = 1")));
    }
    let form = IndexForm::from_values(r, s, &[a, b], ctx)?;
    let sub = ctx.unity_subgroup(2)?;
    let shape = g_shape(r, &[a, b], &sub, ctx);
    let order = q - 1;
    let sign = |t: u64| if t % 2 == 0 { Elem::ONE } else { ctx.neg(Elem::ONE) };
    let quot = quotient_exponent(r, n as u64, s, 2);
    let disjuncts = match quot {
        None => vec![false, false],
        Some(t) => {
            let e = geometric_sum_mod(r, n as u64, order);
            let first = ctx.pow(a, e) == Elem::ONE && ctx.mul(sign(t), ctx.pow(b, e)) == Elem::ONE;
            let second = n % 2 == 0 && {
                let r2 = pow_mod(r, 2, order);
                let v = geometric_sum_mod(r2, n as u64 / 2, order);
                let o = v * r % order;
                prod_pows(ctx, &[(a, o), (b, v)]) == Elem::ONE
                    && ctx.mul(sign(t), prod_pows(ctx, &[(a, v), (b, o)])) == Elem::ONE
            };
            vec![first, second]
        }
    };
    let passed = match shape {
        GShape::Identity => disjuncts[0],
        GShape::Swap => disjuncts[1],
        _ => false,
    };
    Ok(LowIndexOutcome { passed, exact: true, shape, disjuncts, form })
}

/// `[c0, c1, c2]` from the closed-form interpolation in a cube root of unity `w`.
///
/// The resulting `h = c2 x^2 + c1 x + c0` has `h(1) = a`, `h(w^2) = b` and
/// `h(w) = c`.
pub fn index3_h(a: Elem, b: Elem, c: Elem, omega: Elem, ctx: &FieldCtx) -> Result<[Elem; 3]> {
    let one = Elem::ONE;
    let w2 = ctx.square(omega);
    let w3 = ctx.mul(w2, omega);
    let one_w = ctx.add(one, omega);
    let dm = ctx.square(ctx.sub(omega, one));
    let d2 = ctx.mul(dm, omega);
    let d1 = ctx.mul(d2, one_w);
    let d0 = ctx.mul(dm, one_w);
    if d1.is_zero() {
        return Err(Error::Precondition("interpolation denominator vanishes".into()));
    }
    let n2 = ctx.sub(ctx.add(ctx.sub(b, c), ctx.mul(b, w2)), ctx.mul(a, w2));
    let n1 = ctx.sub(ctx.add(c, ctx.mul(a, omega)), ctx.mul(b, one_w));
    let n0 = ctx.sub(ctx.add(c, ctx.mul(a, w3)), ctx.mul(b, ctx.mul(omega, one_w)));
    Ok([ctx.div(n0, d0)?, ctx.div(n1, d1)?, ctx.div(n2, d2)?])
}

/// `f = x^r h(x^((q-1)/3))` with `h(1) = a`, `h(omega) = b`, `h(omega^2) = c`.
///
/// For `n = 3` the verdict is exact, with the branch picked by the actual `g`
/// on `mu_3` (both orientations of the 3-cycle are handled). For other `n` it
/// is the sufficient condition for `g = id`.
pub fn index3_trinomial(p: &TrinomialParams, ctx: &FieldCtx) -> Result<LowIndexOutcome> {
    let q = ctx.order();
    if q % 3 != 1 {
        return Err(Error::Precondition(format!("index-3 trinomials need q = 1 mod 3, got {q}")));
    }
    let s = (q - 1) / 3;
    let (a, b, c, r, n) = (p.a, p.b, p.c, p.r, p.n);
    if n == 0 || gcd(r, s) != 1 {
        return Err(Error::Precondition(format!("need n > 0 and gcd(r, s) = gcd({r}, {s}) = 1")));
    }
    let sub = ctx.unity_subgroup(3)?;
    // with w = omega^2 the formula puts b at omega and c at omega^2
    let h = index3_h(a, b, c, sub.elem(2), ctx)?;
    let form = IndexForm::new(r, s, h.to_vec(), ctx)?;
    let shape = g_shape(r, &[a, b, c], &sub, ctx);
    let order = q - 1;
    let Some(t) = quotient_exponent(r, n as u64, s, 3) else {
        let disjuncts = vec![false; if n == 3 { 3 } else { 1 }];
        return Ok(LowIndexOutcome { passed: false, exact: n == 3, shape, disjuncts, form });
    };
    let w = |k: u64| sub.elem(k * t % 3);
    let e = geometric_sum_mod(r, n as u64, order);
    let fixed = [(a, 0), (b, 1), (c, 2)].iter().all(|&(x, k)| ctx.mul(w(k), ctx.pow(x, e)) == Elem::ONE);
    if n != 3 {
        let passed = shape == GShape::Identity && fixed;
        return Ok(LowIndexOutcome { passed, exact: false, shape, disjuncts: vec![fixed], form });
    }
    let (r1, r2) = (r % order, pow_mod(r, 2, order));
    let cyc = |x: Elem, y: Elem, z: Elem, k: u64| ctx.mul(w(k), prod_pows(ctx, &[(x, r2), (y, r1), (z, 1)])) == Elem::ONE;
    let forward = cyc(a, b, c, 0) && cyc(b, c, a, 1) && cyc(c, a, b, 2);
    let backward = cyc(a, c, b, 0) && cyc(b, a, c, 1) && cyc(c, b, a, 2);
    let passed = match shape {
        GShape::Identity => fixed,
        GShape::ForwardCycle => forward,
        GShape::BackwardCycle => backward,
        _ => false,
    };
    Ok(LowIndexOutcome { passed, exact: true, shape, disjuncts: vec![forward, fixed, backward], form })
}

/// Lifted families, each a degree-`m` extension of a family field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LiftedFamily {
    /// From the char-3 family on GF(q^6) to GF(q^18).
    Char3 { q: u64 },
    /// From the even-q family on GF(q^2) to GF(q^4).
    EvenQ { q: u64, a: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftedOutcome {
    pub lift: Lift,
    pub criterion: CriterionVerdict,
}

/// Builds the lifted triple-cycle over `ext` from the family on `base`.
pub fn lifted_family(which: LiftedFamily, base: &FieldCtx, ext: &FieldCtx) -> Result<LiftedOutcome> {
    let (h, m) = match which {
        LiftedFamily::Char3 { q } => {
            let f = family_char3(q, base)?;
            // choose H with H(x)^3 = h(x^(q^3-1)), so that x H(x)^3 is the base family
            let order = base.group_order();
            let inv3 = (1..order).find(|k| 3 * k % order == 1).ok_or(Error::Precondition("3 is not invertible".into()))?;
            let terms: Vec<_> = f
                .h_poly()
                .terms()
                .iter()
                .map(|&(e, c)| ((e as u128 * f.s() as u128 % order as u128 * inv3 as u128 % order as u128) as u64, c))
                .collect();
            (SparsePoly::from_terms(terms, Some(base)), 3)
        }
        LiftedFamily::EvenQ { q, a } => {
            family_even_q(q, a, base)?;
            let h = even_q_h(q, a, base);
            let terms = h.terms().iter().map(|&(e, c)| (e * (q - 1), c));
            (SparsePoly::from_terms(terms.collect::<Vec<_>>(), Some(base)), 2)
        }
    };
    let lift = lift_subfield(&h, 1, m, 3, base, ext)?;
    if !lift.valid {
        return Err(Error::Precondition(lift.issues.join("; ")));
    }
    let criterion = criteria::check_ncycle(&lift.form, 3, ext)?;
    Ok(LiftedOutcome { lift, criterion })
}

/// Named family and its parameters, as used on the command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilyName {
    Char3Quad { q: u64 },
    EvenQTri { q: u64, a: u64 },
    VTri { q: u64, a: u64, v: u64 },
    Idx2Binomial,
    Idx3Trinomial,
    LiftChar3 { q: u64 },
    LiftEvenQ { q: u64, a: u64 },
}

impl FamilyName {
    pub const NAMES: [&'static str; 7] =
        ["char3-quad", "even-q-tri", "v-tri", "idx2-binomial", "idx3-trinomial", "lift-char3", "lift-even-q"];

    /// The field the family lives in: GF(q^6), GF(q^2), or the lift target.
    pub fn field(&self) -> Option<(u64, usize)> {
        let pm = |q: u64, k: usize| {
            let p = crate::arith::prime_factors(q)[0];
            let mut m = 0;
            let mut x = q;
            while x > 1 {
                x /= p;
                m += 1;
            }
            (p, m * k)
        };
        match *self {
            FamilyName::Char3Quad { q } => Some(pm(q, 6)),
            FamilyName::EvenQTri { q, .. } | FamilyName::VTri { q, .. } => Some(pm(q, 2)),
            FamilyName::LiftChar3 { q } => Some(pm(q, 18)),
            FamilyName::LiftEvenQ { q, .. } => Some(pm(q, 4)),
            FamilyName::Idx2Binomial | FamilyName::Idx3Trinomial => None,
        }
    }
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = match self {
            FamilyName::Char3Quad { .. } => 0,
            FamilyName::EvenQTri { .. } => 1,
            FamilyName::VTri { .. } => 2,
            FamilyName::Idx2Binomial => 3,
            FamilyName::Idx3Trinomial => 4,
            FamilyName::LiftChar3 { .. } => 5,
            FamilyName::LiftEvenQ { .. } => 6,
        };
        f.write_str(Self::NAMES[i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::to_table;

    fn gf(p: u64, m: usize) -> FieldCtx {
        FieldCtx::new(p, m, None).unwrap()
    }

    fn oracle(form: &IndexForm, n: u64, ctx: &FieldCtx) -> bool {
        let t = to_table(form, ctx).unwrap();
        t.is_bijective() && t.is_n_cycle(n).unwrap()
    }

    #[test]
    fn single_check_examples() {
        let ctx = gf(7, 1);
        let sub = ctx.unity_subgroup(2).unwrap();
        assert!(single_check(&[Elem(2), Elem(4)], Elem::ONE, 1, 1, &sub, &ctx).unwrap().passed);
        let v = single_check(&[Elem(3), Elem(4)], Elem::ONE, 1, 1, &sub, &ctx).unwrap();
        assert!(!v.passed);
        assert_eq!(v.witness, Some(Elem::ONE));
        let trivial = ctx.unity_subgroup(6).unwrap();
        assert!(single_check(&[Elem::ONE; 6], Elem::ONE, 1, 1, &trivial, &ctx).unwrap().passed);
    }

    #[test]
    fn single_check_agrees_with_oracle_gf13() {
        // ell = 3, s = 4, r = v = 1: h(y)^4 = 1 forces a = 1
        let ctx = gf(13, 1);
        let sub = ctx.unity_subgroup(3).unwrap();
        let fourth_roots: Vec<Elem> = ctx.elements().filter(|&x| ctx.pow(x, 4) == Elem::ONE).collect();
        for &a in sub.elements() {
            for combo in 0..64 {
                let values: Vec<Elem> = (0..3).map(|i| fourth_roots[(combo >> (2 * i)) & 3]).collect();
                let got = single_check(&values, a, 1, 1, &sub, &ctx).unwrap();
                if a != Elem::ONE {
                    assert!(!got.passed);
                    continue;
                }
                let form = IndexForm::from_values(1, 4, &values, &ctx).unwrap();
                assert_eq!(got.passed, oracle(&form, 3, &ctx), "{values:?}");
            }
        }
    }

    #[test]
    fn char3_family_q3() {
        let ctx = gf(3, 6);
        let form = family_char3(3, &ctx).unwrap();
        assert_eq!(form.h_poly().to_string(), "x^20 + x^16 + x^4 + 1");
        let f = form.to_sparse(&ctx);
        assert_eq!(f.to_string(), "x^521 + x^417 + x^105 + x");
        assert!(oracle(&form, 3, &ctx));
        assert!(family_char3(9, &gf(3, 12)).is_err());
    }

    #[test]
    fn even_q_family_examples() {
        let ctx = gf(2, 12);
        let f1 = family_even_q(64, 26, &ctx).unwrap();
        assert_eq!(f1.h_poly().to_string(), "x^39 + x^26 + 1");
        assert_eq!(f1.to_sparse(&ctx).to_string(), "x^2458 + x^1639 + x");
        let f2 = family_even_q(64, 13, &ctx).unwrap();
        assert_eq!(f2.h_poly().to_string(), "x^52 + x^13 + 1");
        assert_eq!(f2.to_sparse(&ctx).to_string(), "x^3277 + x^820 + x");
        let small = gf(2, 4);
        let f = family_even_q(4, 1, &small).unwrap();
        assert_eq!(f.h_poly().to_string(), "x^4 + x + 1");
        assert!(oracle(&f, 3, &small));
        assert!(family_even_q(64, 1, &ctx).is_err());
        assert!(family_even_q(8, 0, &ctx).is_err());
    }

    #[test]
    fn v_trinomial_examples() {
        let ctx = gf(2, 12);
        let f1 = family_v_trinomial(64, 35, 61, &ctx).unwrap();
        assert_eq!(f1.h_poly().to_string(), "x^35 + x^5 + 1");
        assert_eq!(f1.to_sparse(&ctx).to_string(), "x^2206 + x^316 + x");
        let f2 = family_v_trinomial(64, 25, 16, &ctx).unwrap();
        assert_eq!(f2.h_poly().to_string(), "x^50 + x^25 + 1");
        assert_eq!(f2.to_sparse(&ctx).to_string(), "x^3151 + x^1576 + x");
        let err = family_v_trinomial(64, 35, 60, &ctx).unwrap_err().to_string();
        assert!(err.contains("v^3 = 1"), "{err}");
        // the second example misses one of the sufficient congruences
        assert_eq!(v_trinomial_congruence_failures(64, 25, 16), vec!["av + v^2 + v - 2 = 0 (mod 65)".to_string()]);
        assert!(v_trinomial_congruence_failures(64, 35, 61).is_empty());
    }

    #[test]
    fn v_trinomial_congruences_match_oracle_gf64() {
        let ctx = gf(2, 6);
        for v in 0..9 {
            for a in 0..9 {
                if !v_trinomial_hypothesis_failures(8, a, v).is_empty() {
                    assert!(family_v_trinomial(8, a, v, &ctx).is_err());
                    continue;
                }
                let h = SparsePoly::from_terms([(a, Elem::ONE), (0, Elem::ONE), ((10 - v) % 9, Elem::ONE)], Some(&ctx));
                let form = IndexForm::from_h_poly(1, 7, &h, &ctx).unwrap();
                let expect = oracle(&form, 3, &ctx);
                assert_eq!(family_v_trinomial(8, a, v, &ctx).is_ok(), expect, "a={a} v={v}");
                if v_trinomial_congruence_failures(8, a, v).is_empty() {
                    assert!(expect);
                }
            }
        }
    }

    #[test]
    fn phi_variants() {
        let ctx = gf(2, 6);
        let zero = SparsePoly::zero();
        let out = generic_phi_family(&zero, 1, PhiVariant::Trace, &ctx).unwrap();
        assert!(out.verdict.passed);
        assert_eq!(out.form.to_sparse(&ctx), SparsePoly::identity());

        // 5a != 0 mod 9
        let x = SparsePoly::identity();
        let out = generic_phi_family(&x, 1, PhiVariant::Trace, &ctx).unwrap();
        assert!(!out.verdict.passed && out.verdict.witness.is_some());
        assert!(!oracle(&out.form, 3, &ctx));

        // frame GF(3^6), Q = 27, phi = 1 + x^4, v = 9 reproduces the char-3 family
        let ctx = gf(3, 6);
        let phi = SparsePoly::parse("1 + x^4", &ctx).unwrap();
        let out = generic_phi_family(&phi, 9, PhiVariant::Twisted, &ctx).unwrap();
        assert!(out.verdict.passed);
        assert_eq!(out.form, family_char3(3, &ctx).unwrap());
    }

    #[test]
    fn phi_variants_are_exact_small_fields() {
        for (p, m) in [(2, 4), (3, 2), (2, 6), (5, 2)] {
            let ctx = gf(p, m);
            let big_q = half_field(&ctx).unwrap();
            let ell = big_q + 1;
            for a in 0..ell {
                for c in [Elem::ONE, ctx.beta()] {
                    let phi = SparsePoly::monomial(a, c);
                    let trace = generic_phi_family(&phi, 1, PhiVariant::Trace, &ctx).unwrap();
                    assert_eq!(trace.verdict.passed, oracle(&trace.form, 3, &ctx), "B a={a} GF({p}^{m})");
                    for v in (1..ell).filter(|v| pow_mod(*v, 3, ell) == 1) {
                        let tw = generic_phi_family(&phi, v, PhiVariant::Twisted, &ctx).unwrap();
                        assert_eq!(tw.verdict.passed, oracle(&tw.form, 3, &ctx), "A a={a} v={v} GF({p}^{m})");
                        let sh = generic_phi_family(&phi, v, PhiVariant::Shifted, &ctx).unwrap();
                        if sh.verdict.reason.as_deref() != Some("phi(y)^(Q-1) != y^(v-1)") {
                            assert_eq!(sh.verdict.passed, oracle(&sh.form, 3, &ctx), "C a={a} v={v}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn index2_examples() {
        let ctx = gf(7, 1);
        let p = BinomialParams { a: Elem(2), b: Elem(4), r: 1, n: 3 };
        let out = index2_binomial(&p, &ctx).unwrap();
        assert!(out.passed);
        assert_eq!(out.form.to_sparse(&ctx).to_string(), "6*x^4 + 3*x");
        let cycles = to_table(&out.form, &ctx).unwrap().cycle_structure().unwrap();
        assert_eq!(cycles.to_string(), "{1:1, 3:2}");
        let out = index2_binomial(&BinomialParams { n: 2, ..p }, &ctx).unwrap();
        assert_eq!(out.shape, GShape::Identity);
        assert!(!out.passed);
        assert_eq!(out.disjuncts, vec![false, true]);
        for n in 1..6 {
            let id = index2_binomial(&BinomialParams { a: Elem::ONE, b: Elem::ONE, r: 1, n }, &ctx).unwrap();
            assert!(id.passed);
        }
    }

    #[test]
    fn index3_formula_matches_lagrange() {
        for q in [7u64, 13, 19] {
            let ctx = gf(q, 1);
            let sub = ctx.unity_subgroup(3).unwrap();
            for (a, b, c) in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (2, 5, 3)] {
                let vals = [Elem(a), Elem(b), Elem(c)];
                let h = index3_h(vals[0], vals[1], vals[2], sub.omega(), &ctx).unwrap();
                let swapped = [vals[0], vals[2], vals[1]];
                let lag = crate::interp::interpolate_on_subgroup(&swapped, &sub, &ctx).unwrap();
                assert_eq!(h.to_vec(), lag);
                let p = TrinomialParams { a: vals[0], b: vals[1], c: vals[2], r: 1, n: 3 };
                let form = index3_trinomial(&p, &ctx).unwrap().form;
                assert_eq!(form.h_values(&sub, &ctx), vals.to_vec());
            }
        }
        let ctx = gf(2, 2);
        let sub = ctx.unity_subgroup(3).unwrap();
        let h = index3_h(Elem(1), Elem(2), Elem(3), sub.elem(2), &ctx).unwrap();
        assert_eq!(h.to_vec(), crate::interp::interpolate_on_subgroup(&[Elem(1), Elem(2), Elem(3)], &sub, &ctx).unwrap());
    }

    #[test]
    fn index3_examples() {
        let ctx = gf(7, 1);
        for n in 1..6 {
            let p = TrinomialParams { a: Elem::ONE, b: Elem::ONE, c: Elem::ONE, r: 1, n };
            let out = index3_trinomial(&p, &ctx).unwrap();
            assert!(out.passed);
            assert_eq!(out.form.to_sparse(&ctx), SparsePoly::identity());
        }
        let p = TrinomialParams { a: Elem(2), b: Elem(2), c: Elem(2), r: 1, n: 3 };
        let out = index3_trinomial(&p, &ctx).unwrap();
        assert!(out.passed);
        assert!(oracle(&out.form, 3, &ctx));
        // abc = 1 but g collapses mu_3: f = x^3
        let p = TrinomialParams { a: Elem(1), b: Elem(2), c: Elem(4), r: 1, n: 3 };
        let out = index3_trinomial(&p, &ctx).unwrap();
        assert_eq!(out.shape, GShape::NotPermutation);
        assert!(!out.passed && out.disjuncts[0]);
        assert_eq!(out.form.to_sparse(&ctx).to_string(), "x^3");
    }

    #[test]
    fn lifted_even_q() {
        let base = gf(2, 4);
        let ext = gf(2, 8);
        let out = lifted_family(LiftedFamily::EvenQ { q: 4, a: 1 }, &base, &ext).unwrap();
        assert!(out.criterion.passed);
        assert_eq!(out.lift.form.s(), 17);
        assert!(oracle(&out.lift.form, 3, &ext));
        let base = gf(2, 2);
        let ext = gf(2, 4);
        let out = lifted_family(LiftedFamily::EvenQ { q: 2, a: 3 }, &base, &ext).unwrap();
        assert_eq!(out.lift.form.to_sparse(&ext), SparsePoly::identity());
    }

    #[test]
    fn family_names() {
        assert_eq!(FamilyName::EvenQTri { q: 64, a: 26 }.to_string(), "even-q-tri");
        assert_eq!(FamilyName::LiftChar3 { q: 3 }.field(), Some((3, 18)));
        assert_eq!(FamilyName::VTri { q: 64, a: 1, v: 1 }.field(), Some((2, 12)));
    }
}
