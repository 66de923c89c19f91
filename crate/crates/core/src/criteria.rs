//! Analytic n-cycle tests for `f(x) = x^r h(x^s)`.
//!
//! Everything here works on the value table `h(omega^i)` over `mu_ell` and
//! on the induced map `g(y) = y^r h(y)^s`, stored as an index map
//! `i -> j` meaning `g(omega^i) = omega^j`.

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, pow_mod, quotient_exponent};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx, Subgroup};
use crate::poly::IndexForm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    NotPermutation,
    Congruence,
    PhiWitness,
    HVanishes,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_kind: Option<FailureKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Elem>,
}

impl CriterionVerdict {
    pub fn pass() -> Self {
        CriterionVerdict { passed: true, failure_kind: None, witness: None }
    }

    pub fn fail(kind: FailureKind, witness: Option<Elem>) -> Self {
        CriterionVerdict { passed: false, failure_kind: Some(kind), witness }
    }
}

/// Precomputed data for one form on its subgroup.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub r: u64,
    pub s: u64,
    pub sub: Subgroup,
    pub values: Vec<Elem>,
}

impl Prepared {
    pub fn new(form: &IndexForm, ctx: &FieldCtx) -> Result<Self> {
        let sub = ctx.unity_subgroup(form.ell())?;
        let values = form.h_values(&sub, ctx);
        Ok(Prepared { r: form.r(), s: form.s(), sub, values })
    }

    pub fn ell(&self) -> u64 {
        self.sub.ell()
    }
}

/// First subgroup element where `h` vanishes.
pub fn first_zero(values: &[Elem], sub: &Subgroup) -> Option<Elem> {
    values.iter().position(|v| v.is_zero()).map(|i| sub.elem(i as u64))
}

/// `g(omega^i) = omega^(i r) h(omega^i)^s` as an index map.
pub fn induced_map(r: u64, values: &[Elem], sub: &Subgroup, ctx: &FieldCtx) -> Result<Vec<u32>> {
    let ell = sub.ell();
    let s = sub.s();
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            if v.is_zero() {
                return Err(Error::HVanishes(sub.elem(i as u64)));
            }
            let hs = ctx.pow(v, s);
            let j = sub.index_of(hs).ok_or(Error::NotInSubgroup(hs))?;
            Ok(((i as u64 % ell * (r % ell) + j) % ell) as u32)
        })
        .collect()
}

/// The induced map on `mu_ell` as element images `g(omega^0), ..., g(omega^(ell-1))`.
pub fn induced_g(form: &IndexForm, ctx: &FieldCtx) -> Result<Vec<Elem>> {
    let prep = Prepared::new(form, ctx)?;
    let map = induced_map(prep.r, &prep.values, &prep.sub, ctx)?;
    Ok(map.into_iter().map(|j| prep.sub.elem(j as u64)).collect())
}

fn is_bijective_map(map: &[u32]) -> bool {
    let mut seen = vec![false; map.len()];
    map.iter().all(|&j| !std::mem::replace(&mut seen[j as usize], true))
}

fn map_power_is_identity(map: &[u32], n: u64) -> bool {
    (0..map.len()).all(|i| {
        let mut x = i;
        for _ in 0..n {
            x = map[x] as usize;
        }
        x == i
    })
}

/// Permutation test: `gcd(r, s) = 1` and `g` permutes `mu_ell`.
pub fn check_permutation(form: &IndexForm, ctx: &FieldCtx) -> Result<CriterionVerdict> {
    let prep = Prepared::new(form, ctx)?;
    Ok(check_permutation_values(prep.r, &prep.values, &prep.sub, ctx))
}

pub fn check_permutation_values(r: u64, values: &[Elem], sub: &Subgroup, ctx: &FieldCtx) -> CriterionVerdict {
    if gcd(r, sub.s()) != 1 {
        return CriterionVerdict::fail(FailureKind::NotPermutation, None);
    }
    match induced_map(r, values, sub, ctx) {
        Ok(map) if is_bijective_map(&map) => CriterionVerdict::pass(),
        Ok(_) => CriterionVerdict::fail(FailureKind::NotPermutation, None),
        Err(Error::HVanishes(w)) => CriterionVerdict::fail(FailureKind::HVanishes, Some(w)),
        Err(e) => panic!("induced map left the subgroup: {e}"),
    }
}

/// Exponent tables `h(omega^j)^(r^(n-t-1))` for `t = 0..n`, plus the leading
/// exponent `(r^n - 1)/s mod ell`.
struct PhiTables {
    lead: u64,
    powered: Vec<Vec<Elem>>,
}

fn phi_tables(r: u64, n: u32, values: &[Elem], sub: &Subgroup, ctx: &FieldCtx) -> Option<PhiTables> {
    let lead = quotient_exponent(r, n as u64, sub.s(), sub.ell())?;
    let order = ctx.group_order();
    let powered = (0..n)
        .map(|t| {
            let e = pow_mod(r, (n - t - 1) as u64, order);
            values.iter().map(|&v| ctx.pow(v, e)).collect()
        })
        .collect();
    Some(PhiTables { lead, powered })
}

fn phi_at(i: usize, map: &[u32], tables: &PhiTables, sub: &Subgroup, ctx: &FieldCtx) -> Elem {
    let mut acc = sub.elem((i as u64 % sub.ell()) * tables.lead % sub.ell());
    let mut y = i;
    for level in &tables.powered {
        acc = ctx.mul(acc, level[y]);
        y = map[y] as usize;
    }
    acc
}

/// `phi(y) = y^((r^n-1)/s) prod_{i<n} h(g^(i)(y))^(r^(n-i-1))` for `y` in `mu_ell`.
pub fn phi(y: Elem, form: &IndexForm, n: u32, ctx: &FieldCtx) -> Result<Elem> {
    let prep = Prepared::new(form, ctx)?;
    let i = prep.sub.index_of(y).ok_or(Error::NotInSubgroup(y))?;
    let map = induced_map(prep.r, &prep.values, &prep.sub, ctx)?;
    let tables = phi_tables(prep.r, n, &prep.values, &prep.sub, ctx)
        .ok_or(Error::CongruenceViolated { r: prep.r, n, s: prep.s })?;
    Ok(phi_at(i as usize, &map, &tables, &prep.sub, ctx))
}

/// The n-cycle criterion: `gcd(r, s) = 1`, `r^n = 1 mod s`, `h` nonvanishing on
/// `mu_ell` and `phi = 1` on `mu_ell`. Reports the first failing witness in
/// `omega`-power order.
pub fn check_ncycle(form: &IndexForm, n: u32, ctx: &FieldCtx) -> Result<CriterionVerdict> {
    let prep = Prepared::new(form, ctx)?;
    Ok(check_ncycle_values(prep.r, &prep.values, n, &prep.sub, ctx))
}

pub fn check_ncycle_values(r: u64, values: &[Elem], n: u32, sub: &Subgroup, ctx: &FieldCtx) -> CriterionVerdict {
    assert!(n >= 1, "cycle order must be positive");
    let s = sub.s();
    if gcd(r, s) != 1 {
        return CriterionVerdict::fail(FailureKind::NotPermutation, None);
    }
    if pow_mod(r, n as u64, s) != 1 % s {
        return CriterionVerdict::fail(FailureKind::Congruence, None);
    }
    if let Some(w) = first_zero(values, sub) {
        return CriterionVerdict::fail(FailureKind::HVanishes, Some(w));
    }
    let map = match induced_map(r, values, sub, ctx) {
        Ok(map) => map,
        Err(e) => panic!("induced map left the subgroup: {e}"),
    };
    let tables = phi_tables(r, n, values, sub, ctx).expect("congruence checked above");
    for i in 0..values.len() {
        if phi_at(i, &map, &tables, sub, ctx) != Elem::ONE {
            return CriterionVerdict::fail(FailureKind::PhiWitness, Some(sub.elem(i as u64)));
        }
    }
    CriterionVerdict::pass()
}

/// Necessary condition: `g^(n)` is the identity on `mu_ell`.
pub fn necessary_g_ncycle(form: &IndexForm, n: u32, ctx: &FieldCtx) -> Result<bool> {
    let prep = Prepared::new(form, ctx)?;
    let map = induced_map(prep.r, &prep.values, &prep.sub, ctx)?;
    Ok(map_power_is_identity(&map, n as u64))
}

/// `g^(n) = id` for an already computed index map.
pub fn map_is_n_cycle(map: &[u32], n: u64) -> bool {
    map_power_is_identity(map, n)
}
