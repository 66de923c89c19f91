//! Exhaustive sweeps over `(r, h-values on mu_ell)` with oracle re-verification.

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::criteria::check_ncycle_values;
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx, Subgroup};
use crate::poly::IndexForm;
use crate::report::{verify_form, Report};

/// Default cap on candidate evaluations.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

const CHUNK: u64 = 4096;
const CHUNKS_PER_ROUND: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub ell: u64,
    pub n: u32,
    /// Inclusive range of `r`; only `gcd(r, s) = 1` is swept.
    pub r_min: u64,
    pub r_max: u64,
    pub budget: u64,
}

impl SearchSpec {
    pub fn new(ell: u64, n: u32, ctx: &FieldCtx) -> Self {
        SearchSpec { ell, n, r_min: 1, r_max: ctx.group_order(), budget: DEFAULT_BUDGET }
    }

    /// Admissible `r` values for this field.
    pub fn r_values(&self, ctx: &FieldCtx) -> Result<Vec<u64>> {
        let order = ctx.group_order();
        if self.ell == 0 || order % self.ell != 0 {
            return Err(Error::NotDivisor { ell: self.ell, order });
        }
        let s = order / self.ell;
        Ok((self.r_min.max(1)..=self.r_max).filter(|&r| gcd(r, s) == 1).collect())
    }

    /// Number of candidates, or `None` beyond `u128`.
    pub fn space(&self, ctx: &FieldCtx) -> Result<Option<u128>> {
        let rs = self.r_values(ctx)?.len() as u128;
        let per_r = (ctx.group_order() as u128).checked_pow(self.ell.try_into().unwrap_or(u32::MAX));
        Ok(per_r.and_then(|x| x.checked_mul(rs)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub evaluated: u64,
    pub hits: u64,
    pub complete: bool,
}

/// Runs the sweep, passing each hit (already re-verified, in lexicographic
/// `(r, h-values)` order) to `sink`. Stops early once `budget` candidates have
/// been evaluated; the summary then has `complete = false`.
pub fn search(spec: &SearchSpec, ctx: &FieldCtx, mut sink: impl FnMut(Report)) -> Result<SearchSummary> {
    let sub = ctx.unity_subgroup(spec.ell)?;
    let rs = spec.r_values(ctx)?;
    let digits = ctx.group_order();
    let ell = spec.ell as u32;
    let per_r = digits.checked_pow(ell);
    let mut summary = SearchSummary { evaluated: 0, hits: 0, complete: true };
    for r in rs {
        let total = per_r.unwrap_or(u64::MAX);
        let mut start = 0u64;
        while start < total {
            let left = spec.budget - summary.evaluated;
            if left == 0 {
                summary.complete = false;
                return Ok(summary);
            }
            let end = total.min(start.saturating_add(CHUNK * CHUNKS_PER_ROUND)).min(start.saturating_add(left));
            let chunks: Vec<(u64, u64)> =
                (start..end).step_by(CHUNK as usize).map(|a| (a, end.min(a.saturating_add(CHUNK)))).collect();
            let found = map_chunks(&chunks, |&(a, b)| scan(r, a, b, spec.n, &sub, ctx));
            for reports in found {
                for rep in reports? {
                    summary.hits += 1;
                    sink(rep);
                }
            }
            summary.evaluated += end - start;
            start = end;
        }
        if per_r.is_none() {
            summary.complete = false;
            return Ok(summary);
        }
    }
    Ok(summary)
}

#[cfg(feature = "parallel")]
fn map_chunks<T: Send>(chunks: &[(u64, u64)], f: impl Fn(&(u64, u64)) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    chunks.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_chunks<T>(chunks: &[(u64, u64)], f: impl Fn(&(u64, u64)) -> T) -> Vec<T> {
    chunks.iter().map(f).collect()
}

/// Candidate `code` in base `q - 1`, most significant digit first, digit `d`
/// meaning the element encoded `d + 1`.
fn decode(code: u64, base: u64, out: &mut [Elem]) {
    let mut c = code;
    for slot in out.iter_mut().rev() {
        *slot = Elem(c % base + 1);
        c /= base;
    }
}

fn scan(r: u64, a: u64, b: u64, n: u32, sub: &Subgroup, ctx: &FieldCtx) -> Result<Vec<Report>> {
    let mut values = vec![Elem::ZERO; sub.ell() as usize];
    let mut out = Vec::new();
    for code in a..b {
        decode(code, ctx.group_order(), &mut values);
        if check_ncycle_values(r, &values, n, sub, ctx).passed {
            let form = IndexForm::from_values(r, sub.s(), &values, ctx)?;
            out.push(verify_form(&form, n, ctx)?);
        }
    }
    Ok(out)
}
