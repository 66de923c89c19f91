//! Lagrange interpolation over GF(q).

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx, Subgroup};

/// Coefficients (low to high, length `nodes.len()`) of the unique polynomial of
/// degree `< nodes.len()` through `(nodes[i], values[i])`.
pub fn lagrange(nodes: &[Elem], values: &[Elem], ctx: &FieldCtx) -> Result<Vec<Elem>> {
    let n = nodes.len();
    if values.len() != n {
        return Err(Error::SizeMismatch(nodes.len(), values.len()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    // master polynomial M(x) = prod (x - x_i)
    let mut master = vec![Elem::ONE];
    for &xi in nodes {
        let mut next = vec![Elem::ZERO; master.len() + 1];
        for (k, &c) in master.iter().enumerate() {
            next[k + 1] = ctx.add(next[k + 1], c);
            next[k] = ctx.sub(next[k], ctx.mul(c, xi));
        }
        master = next;
    }
    let mut out = vec![Elem::ZERO; n];
    let mut quotient = vec![Elem::ZERO; n];
    for (i, &xi) in nodes.iter().enumerate() {
        if values[i].is_zero() {
            continue;
        }
        // M(x) / (x - x_i) by synthetic division
        let mut carry = Elem::ZERO;
        for k in (0..n).rev() {
            carry = ctx.add(master[k + 1], ctx.mul(carry, xi));
            quotient[k] = carry;
        }
        let denom = quotient.iter().rev().fold(Elem::ZERO, |acc, &c| ctx.add(ctx.mul(acc, xi), c));
        if denom.is_zero() {
            return Err(Error::Precondition("interpolation nodes are not distinct".into()));
        }
        let w = ctx.div(values[i], denom)?;
        for k in 0..n {
            out[k] = ctx.add(out[k], ctx.mul(w, quotient[k]));
        }
    }
    Ok(out)
}

/// Solves the Vandermonde system on the nodes `omega^0, ..., omega^(ell-1)`.
pub fn interpolate_on_subgroup(values: &[Elem], sub: &Subgroup, ctx: &FieldCtx) -> Result<Vec<Elem>> {
    lagrange(sub.elements(), values, ctx)
}
