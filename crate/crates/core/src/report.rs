//! Verification reports: criterion plus oracle, in a serializable record.

use serde::{Deserialize, Serialize};

use crate::criteria::{self, CriterionVerdict};
use crate::error::Result;
use crate::field::{Elem, FieldCtx, LOG_TABLE_LIMIT};
use crate::perm::{to_table, CycleStructure};
use crate::poly::{FieldFunction, IndexForm, SparsePoly};

/// Fields up to this order get a full permutation table.
pub const FULL_ORACLE_LIMIT: u64 = LOG_TABLE_LIMIT;

/// Number of extra points iterated in subgroup mode.
const SAMPLE_POINTS: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMode {
    /// Every field element iterated.
    Full,
    /// `mu_ell` and a fixed sample of `beta`-powers iterated; the verdict rests
    /// on the criterion.
    Subgroup,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub mode: OracleMode,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexFormRecord {
    pub r: u64,
    pub s: u64,
    pub h: Vec<Elem>,
}

impl From<&IndexForm> for IndexFormRecord {
    fn from(f: &IndexForm) -> Self {
        IndexFormRecord { r: f.r(), s: f.s(), h: f.h().to_vec() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub field: String,
    pub modulus: String,
    pub beta: Elem,
    pub poly: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index_form: Option<IndexFormRecord>,
    pub n: u32,
    pub permutation: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<CriterionVerdict>,
    pub oracle: OracleRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycles: Option<CycleStructure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_order: Option<u128>,
}

impl Report {
    /// Whether `f` was confirmed to be an n-cycle permutation.
    pub fn passed(&self) -> bool {
        match self.oracle.mode {
            OracleMode::Full => self.oracle.passed,
            OracleMode::Subgroup => self.oracle.passed && self.criterion.as_ref().is_some_and(|c| c.passed),
        }
    }
}

/// Verifies a polynomial given in sparse form.
pub fn verify_poly(f: &SparsePoly, n: u32, ctx: &FieldCtx) -> Result<Report> {
    let f = f.normalized(ctx);
    match IndexForm::from_sparse(&f, ctx) {
        Some(form) => build(&form, Some(&form), f.to_string(), n, ctx),
        None => build(&f, None, f.to_string(), n, ctx),
    }
}

/// Verifies `x^r h(x^s)`.
pub fn verify_form(form: &IndexForm, n: u32, ctx: &FieldCtx) -> Result<Report> {
    build(form, Some(form), form.to_sparse(ctx).to_string(), n, ctx)
}

fn build<F: FieldFunction>(f: &F, form: Option<&IndexForm>, poly: String, n: u32, ctx: &FieldCtx) -> Result<Report> {
    let criterion = form.map(|fm| criteria::check_ncycle(fm, n, ctx)).transpose()?;
    let (permutation, oracle, cycles, min_order) = if ctx.order() <= FULL_ORACLE_LIMIT {
        let table = to_table(f, ctx)?;
        if table.is_bijective() {
            let cycles = table.cycle_structure()?;
            let min_order = cycles.lcm()?;
            let passed = min_order <= n as u128 && n as u128 % min_order == 0;
            (true, OracleRecord { mode: OracleMode::Full, passed }, Some(cycles), Some(min_order))
        } else {
            (false, OracleRecord { mode: OracleMode::Full, passed: false }, None, None)
        }
    } else {
        let permutation = match form {
            Some(fm) => criteria::check_permutation(fm, ctx)?.passed,
            None => false,
        };
        let passed = sampled_returns(f, n, form, ctx);
        (permutation, OracleRecord { mode: OracleMode::Subgroup, passed }, None, None)
    };
    Ok(Report {
        field: ctx.spec().to_string(),
        modulus: ctx.modulus_text(),
        beta: ctx.beta(),
        poly,
        index_form: form.map(IndexFormRecord::from),
        n,
        permutation,
        criterion,
        oracle,
        cycles,
        min_order,
    })
}

/// `f^(n)(x) = x` on `mu_ell` and on `SAMPLE_POINTS` spread powers of `beta`.
fn sampled_returns<F: FieldFunction>(f: &F, n: u32, form: Option<&IndexForm>, ctx: &FieldCtx) -> bool {
    let order = ctx.group_order();
    let mut points: Vec<Elem> = match form {
        Some(fm) => match ctx.unity_subgroup(fm.ell()) {
            Ok(sub) => sub.elements().to_vec(),
            Err(_) => Vec::new(),
        },
        None => Vec::new(),
    };
    let stride = (order / SAMPLE_POINTS).max(1) | 1;
    points.extend((0..SAMPLE_POINTS.min(order)).map(|k| ctx.beta_pow((k * stride % order) as i128)));
    points.push(Elem::ZERO);
    points.iter().all(|&x| {
        let y = (0..n).fold(x, |acc, _| f.eval_at(acc, ctx));
        y == x
    })
}
