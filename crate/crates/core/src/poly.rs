//! Polynomial representations: expanded sparse polynomials, the index form
//! `x^r h(x^s)` and its piecewise (cyclotomic) form.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx, Subgroup};

/// A polynomial as `(exponent, coefficient)` terms, exponents strictly
/// increasing and coefficients nonzero. The empty list is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsePoly {
    terms: Vec<(u64, Elem)>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        SparsePoly { terms: Vec::new() }
    }

    pub fn monomial(exp: u64, coeff: Elem) -> Self {
        SparsePoly::from_terms([(exp, coeff)], None)
    }

    pub fn identity() -> Self {
        SparsePoly::monomial(1, Elem::ONE)
    }

    /// Builds a polynomial from raw terms, merging repeated exponents.
    /// Coefficients are added with `ctx` when given; without a context
    /// repeated exponents keep the last coefficient.
    pub fn from_terms(terms: impl IntoIterator<Item = (u64, Elem)>, ctx: Option<&FieldCtx>) -> Self {
        let mut raw: Vec<(u64, Elem)> = terms.into_iter().collect();
        raw.sort_by_key(|t| t.0);
        let mut out: Vec<(u64, Elem)> = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            match out.last_mut() {
                Some(last) if last.0 == e => {
                    last.1 = match ctx {
                        Some(ctx) => ctx.add(last.1, c),
                        None => c,
                    }
                }
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        SparsePoly { terms: out }
    }

    pub fn terms(&self) -> &[(u64, Elem)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.last().map(|t| t.0)
    }

    /// Parses `"C*x^E + x^E + x + C"`; `C` is an element encoding.
    pub fn parse(text: &str, ctx: &FieldCtx) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        for raw in compact.split('+') {
            terms.push(parse_term(raw, ctx)?);
        }
        Ok(SparsePoly::from_terms(terms, Some(ctx)))
    }

    pub fn eval(&self, x: Elem, ctx: &FieldCtx) -> Elem {
        self.terms
            .iter()
            .fold(Elem::ZERO, |acc, &(e, c)| ctx.add(acc, ctx.mul(c, ctx.pow(x, e))))
    }

    /// Reduces every nonconstant exponent into `[1, q-1]`; the induced
    /// function on GF(q) is unchanged.
    pub fn normalized(&self, ctx: &FieldCtx) -> SparsePoly {
        let n = ctx.group_order();
        SparsePoly::from_terms(
            self.terms.iter().map(|&(e, c)| (if e == 0 { 0 } else { (e - 1) % n + 1 }, c)),
            Some(ctx),
        )
    }

    /// Maps coefficients through `f` (e.g. a subfield embedding).
    pub fn map_coeffs(&self, f: impl Fn(Elem) -> Elem) -> SparsePoly {
        SparsePoly::from_terms(self.terms.iter().map(|&(e, c)| (e, f(c))), None)
    }
}

fn parse_term(raw: &str, ctx: &FieldCtx) -> Result<(u64, Elem)> {
    let bad = || Error::Parse(format!("bad term {raw:?}"));
    if raw.is_empty() {
        return Err(bad());
    }
    let (coeff, mono) = match raw.split_once('*') {
        Some((c, rest)) => (Some(c), Some(rest)),
        None if raw.starts_with('x') => (None, Some(raw)),
        None => (Some(raw), None),
    };
    let c = match coeff {
        Some(c) => {
            let v = c.parse::<u64>().map_err(|_| bad())?;
            ctx.elem(v).map_err(|_| Error::Parse(format!("coefficient {v} is not an element of GF({})", ctx.order())))?
        }
        None => Elem::ONE,
    };
    let e = match mono {
        None => 0,
        Some("x") => 1,
        Some(m) => {
            let e = m.strip_prefix("x^").ok_or_else(bad)?;
            e.parse::<u64>().map_err(|_| bad())?
        }
    };
    Ok((e, c))
}

impl fmt::Display for SparsePoly {
    /// Highest degree first: `x^521 + 2*x^4 + x + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, &(e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (e, c == Elem::ONE) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{c}*x")?,
                (_, true) => write!(f, "x^{e}")?,
                (_, false) => write!(f, "{c}*x^{e}")?,
            }
        }
        Ok(())
    }
}

/// `f(x) = x^r h(x^s)` with `s * ell = q - 1` and `h` reduced mod `x^ell - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexForm {
    r: u64,
    s: u64,
    /// Coefficients `h_0, ..., h_(ell-1)`.
    h: Vec<Elem>,
}

impl IndexForm {
    pub fn new(r: u64, s: u64, h: Vec<Elem>, ctx: &FieldCtx) -> Result<Self> {
        let order = ctx.group_order();
        if r == 0 {
            return Err(Error::Precondition("r must be positive".into()));
        }
        if s == 0 || order % s != 0 {
            return Err(Error::NotDivisor { ell: s, order });
        }
        let ell = order / s;
        if h.len() as u64 != ell {
            return Err(Error::Precondition(format!("h has {} coefficients, index is {ell}", h.len())));
        }
        if let Some(bad) = h.iter().find(|c| c.0 >= ctx.order()) {
            return Err(Error::ElementOutOfRange(bad.0, ctx.order()));
        }
        Ok(IndexForm { r, s, h })
    }

    /// Builds the form from an arbitrary `h`, reducing it mod `x^ell - 1`.
    pub fn from_h_poly(r: u64, s: u64, h: &SparsePoly, ctx: &FieldCtx) -> Result<Self> {
        let order = ctx.group_order();
        if s == 0 || order % s != 0 {
            return Err(Error::NotDivisor { ell: s, order });
        }
        let ell = order / s;
        let mut coeffs = vec![Elem::ZERO; ell as usize];
        for &(e, c) in h.terms() {
            let j = (e % ell) as usize;
            coeffs[j] = ctx.add(coeffs[j], c);
        }
        IndexForm::new(r, s, coeffs, ctx)
    }

    /// Interpolates `h` from its values on `mu_ell` (`values[i] = h(omega^i)`).
    pub fn from_values(r: u64, s: u64, values: &[Elem], ctx: &FieldCtx) -> Result<Self> {
        let order = ctx.group_order();
        if s == 0 || order % s != 0 {
            return Err(Error::NotDivisor { ell: s, order });
        }
        let sub = ctx.unity_subgroup(order / s)?;
        if values.len() != sub.elements().len() {
            return Err(Error::Precondition(format!("{} values for index {}", values.len(), sub.ell())));
        }
        let h = crate::interp::interpolate_on_subgroup(values, &sub, ctx)?;
        IndexForm::new(r, s, h, ctx)
    }

    /// Minimal-index decomposition of a polynomial without constant term.
    /// Returns `None` when `f(0) != 0` or `f` is zero.
    pub fn from_sparse(f: &SparsePoly, ctx: &FieldCtx) -> Option<Self> {
        let f = f.normalized(ctx);
        let terms = f.terms();
        if terms.is_empty() || terms[0].0 == 0 {
            return None;
        }
        let order = ctx.group_order();
        let r = terms[0].0;
        let s = terms.iter().fold(order, |g, &(e, _)| gcd(g, e - r));
        let ell = order / s;
        let mut h = vec![Elem::ZERO; ell as usize];
        for &(e, c) in terms {
            h[((e - r) / s) as usize] = c;
        }
        IndexForm::new(r, s, h, ctx).ok()
    }

    pub fn identity(ctx: &FieldCtx) -> Self {
        IndexForm { r: 1, s: ctx.group_order(), h: vec![Elem::ONE] }
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn ell(&self) -> u64 {
        self.h.len() as u64
    }

    pub fn h(&self) -> &[Elem] {
        &self.h
    }

    pub fn h_poly(&self) -> SparsePoly {
        SparsePoly::from_terms(self.h.iter().enumerate().map(|(j, &c)| (j as u64, c)), None)
    }

    /// Expanded polynomial, exponents reduced into `[1, q-1]`.
    pub fn to_sparse(&self, ctx: &FieldCtx) -> SparsePoly {
        let n = ctx.group_order();
        SparsePoly::from_terms(
            self.h
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, &c)| ((self.r + self.s * j as u64 - 1) % n + 1, c)),
            Some(ctx),
        )
    }

    pub fn eval_h(&self, y: Elem, ctx: &FieldCtx) -> Elem {
        let nonzero = self.h.iter().filter(|c| !c.is_zero()).count();
        let bits = 64 - self.ell().leading_zeros() as usize;
        if nonzero * 2 * bits < self.h.len() {
            // sparse h: one power per term
            return self
                .h
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .fold(Elem::ZERO, |acc, (j, &c)| ctx.add(acc, ctx.mul(c, ctx.pow(y, j as u64))));
        }
        // Horner
        self.h.iter().rev().fold(Elem::ZERO, |acc, &c| ctx.add(ctx.mul(acc, y), c))
    }

    pub fn eval(&self, x: Elem, ctx: &FieldCtx) -> Elem {
        if x.is_zero() {
            return Elem::ZERO;
        }
        ctx.mul(ctx.pow(x, self.r), self.eval_h(ctx.pow(x, self.s), ctx))
    }

    /// `h(omega^i)` for every `i`, using only subgroup lookups.
    pub fn h_values(&self, sub: &Subgroup, ctx: &FieldCtx) -> Vec<Elem> {
        let ell = sub.ell();
        debug_assert_eq!(ell, self.ell());
        let nz: Vec<(u64, Elem)> = self
            .h
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, &c)| (j as u64, c))
            .collect();
        (0..ell)
            .map(|i| {
                nz.iter()
                    .fold(Elem::ZERO, |acc, &(j, c)| ctx.add(acc, ctx.mul(c, sub.elem(i * j % ell))))
            })
            .collect()
    }

    pub fn to_piecewise(&self, ctx: &FieldCtx) -> Result<PiecewiseForm> {
        let sub = ctx.unity_subgroup(self.ell())?;
        let values = self.h_values(&sub, ctx);
        Ok(PiecewiseForm {
            r: self.r,
            s: self.s,
            branches: sub.elements().iter().copied().zip(values).collect(),
        })
    }
}

/// `x -> h(alpha_i) x^r` on each coset `{x : x^s = alpha_i}`, `0 -> 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiecewiseForm {
    r: u64,
    s: u64,
    /// `(alpha_i, h(alpha_i))`, `alpha_i = omega^i`.
    branches: Vec<(Elem, Elem)>,
}

impl PiecewiseForm {
    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn branches(&self) -> &[(Elem, Elem)] {
        &self.branches
    }

    pub fn multipliers(&self) -> Vec<Elem> {
        self.branches.iter().map(|b| b.1).collect()
    }

    pub fn eval(&self, x: Elem, ctx: &FieldCtx) -> Elem {
        if x.is_zero() {
            return Elem::ZERO;
        }
        let alpha = ctx.pow(x, self.s);
        let mult = self
            .branches
            .iter()
            .find(|b| b.0 == alpha)
            .map(|b| b.1)
            .expect("x^s lies in the subgroup of roots of unity");
        ctx.mul(mult, ctx.pow(x, self.r))
    }
}

/// Anything that can be evaluated pointwise on GF(q).
pub trait FieldFunction: Sync {
    fn eval_at(&self, x: Elem, ctx: &FieldCtx) -> Elem;

    /// Fills `out[k] = f(beta^(start + k))`; implementors may override with
    /// an incremental scheme.
    fn eval_powers(&self, start: u64, out: &mut [u32], ctx: &FieldCtx) {
        let beta = ctx.beta();
        let mut x = ctx.beta_pow(start as i128);
        for slot in out.iter_mut() {
            *slot = self.eval_at(x, ctx).0 as u32;
            x = ctx.mul(x, beta);
        }
    }
}

impl FieldFunction for SparsePoly {
    fn eval_at(&self, x: Elem, ctx: &FieldCtx) -> Elem {
        self.eval(x, ctx)
    }

    fn eval_powers(&self, start: u64, out: &mut [u32], ctx: &FieldCtx) {
        // one running power beta^(k e) per term
        let steps: Vec<Elem> = self.terms.iter().map(|&(e, _)| ctx.pow(ctx.beta(), e)).collect();
        let mut cur: Vec<Elem> = self
            .terms
            .iter()
            .map(|&(e, _)| ctx.pow(ctx.beta_pow(start as i128), e))
            .collect();
        for slot in out.iter_mut() {
            let mut acc = Elem::ZERO;
            for (t, &(_, c)) in self.terms.iter().enumerate() {
                acc = ctx.add(acc, ctx.mul(c, cur[t]));
                cur[t] = ctx.mul(cur[t], steps[t]);
            }
            *slot = acc.0 as u32;
        }
    }
}

impl FieldFunction for IndexForm {
    fn eval_at(&self, x: Elem, ctx: &FieldCtx) -> Elem {
        self.eval(x, ctx)
    }

    fn eval_powers(&self, start: u64, out: &mut [u32], ctx: &FieldCtx) {
        // f(beta^k) = beta^(k r) h(omega^(k mod ell))
        let ell = self.ell();
        let sub = match ctx.unity_subgroup(ell) {
            Ok(sub) => sub,
            Err(_) => unreachable!("IndexForm invariants guarantee ell | q - 1"),
        };
        let hv = self.h_values(&sub, ctx);
        let step = ctx.pow(ctx.beta(), self.r);
        let mut xr = ctx.pow(ctx.beta_pow(start as i128), self.r);
        for (k, slot) in out.iter_mut().enumerate() {
            let coset = (start + k as u64) % ell;
            *slot = ctx.mul(xr, hv[coset as usize]).0 as u32;
            xr = ctx.mul(xr, step);
        }
    }
}

impl FieldFunction for PiecewiseForm {
    fn eval_at(&self, x: Elem, ctx: &FieldCtx) -> Elem {
        self.eval(x, ctx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf7() -> FieldCtx {
        FieldCtx::new(7, 1, None).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let ctx = FieldCtx::new(3, 6, None).unwrap();
        let f = SparsePoly::parse("x^521 + x^313 + x^105 + x", &ctx).unwrap();
        assert_eq!(f.to_string(), "x^521 + x^313 + x^105 + x");
        let g = SparsePoly::parse(" 2*x^3+x+ 5 + x", &ctx).unwrap();
        assert_eq!(g.terms(), &[(0, Elem(5)), (1, Elem(2)), (3, Elem(2))]);
        assert_eq!(g.to_string(), "2*x^3 + 2*x + 5");
        assert!(SparsePoly::parse("x^", &ctx).is_err());
        assert!(SparsePoly::parse("y", &ctx).is_err());
        assert!(SparsePoly::parse("1000*x", &ctx).is_err());
        assert!(SparsePoly::parse("", &ctx).is_err());
        // terms cancelling in characteristic 3
        let z = SparsePoly::parse("x + x + x", &ctx).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn evaluate_examples() {
        let ctx = gf7();
        assert_eq!(SparsePoly::identity().eval(Elem(5), &ctx), Elem(5));
        // 6 + 3 = 9 = 2 in Z_7
        let f = SparsePoly::parse("6*x^4 + 3*x", &ctx).unwrap();
        assert_eq!(f.eval(Elem(1), &ctx), Elem((6 + 3) % 7));
        let big = FieldCtx::new(2, 12, None).unwrap();
        let f1 = SparsePoly::parse("x^2458 + x^1639 + x", &big).unwrap();
        assert_eq!(f1.eval(Elem::ZERO, &big), Elem::ZERO);
    }

    #[test]
    fn index_form_round_trip() {
        let ctx = gf7();
        let f = SparsePoly::parse("6*x^4 + 3*x", &ctx).unwrap();
        let form = IndexForm::from_sparse(&f, &ctx).unwrap();
        assert_eq!((form.r(), form.s(), form.ell()), (1, 3, 2));
        assert_eq!(form.h(), &[Elem(3), Elem(6)]);
        assert_eq!(form.to_sparse(&ctx), f);
        assert!(IndexForm::from_sparse(&SparsePoly::parse("x + 1", &ctx).unwrap(), &ctx).is_none());
    }

    #[test]
    fn minimal_index_of_even_q_trinomial() {
        let ctx = FieldCtx::new(2, 12, None).unwrap();
        let f = SparsePoly::parse("x^2458 + x^1639 + x", &ctx).unwrap();
        let form = IndexForm::from_sparse(&f, &ctx).unwrap();
        // gcd(4095, 2457, 1638) = 819
        assert_eq!((form.r(), form.s(), form.ell()), (1, 819, 5));
        for x in ctx.elements() {
            assert_eq!(form.eval(x, &ctx), f.eval(x, &ctx));
        }
    }

    #[test]
    fn piecewise_multipliers_gf7() {
        let ctx = gf7();
        let form = IndexForm::new(1, 3, vec![Elem(3), Elem(6)], &ctx).unwrap();
        let pw = form.to_piecewise(&ctx).unwrap();
        // h(1) = 6 + 3, h(6) = 36 + 3, mod 7
        assert_eq!(pw.multipliers(), vec![Elem(9 % 7), Elem(39 % 7)]);
        for x in ctx.elements() {
            assert_eq!(pw.eval(x, &ctx), form.eval(x, &ctx));
        }
    }

    #[test]
    fn piecewise_constant_h() {
        let ctx = FieldCtx::new(13, 1, None).unwrap();
        let form = IndexForm::new(5, 4, vec![Elem(1), Elem(0), Elem(0)], &ctx).unwrap();
        assert!(form.to_piecewise(&ctx).unwrap().multipliers().iter().all(|&m| m == Elem::ONE));
    }

    #[test]
    fn piecewise_gf4096_agrees_pointwise() {
        let ctx = FieldCtx::new(2, 12, None).unwrap();
        let h = SparsePoly::parse("x^39 + x^26 + 1", &ctx).unwrap();
        let form = IndexForm::from_h_poly(1, 63, &h, &ctx).unwrap();
        let pw = form.to_piecewise(&ctx).unwrap();
        assert_eq!(pw.branches().len(), 65);
        for x in ctx.elements() {
            assert_eq!(pw.eval(x, &ctx), form.eval(x, &ctx));
        }
    }

    #[test]
    fn incremental_evaluation_matches_pointwise() {
        let ctx = FieldCtx::new(3, 4, None).unwrap();
        let f = SparsePoly::parse("2*x^17 + x^5 + 7*x^2", &ctx).unwrap();
        let mut buf = vec![0u32; 20];
        f.eval_powers(11, &mut buf, &ctx);
        for (k, &v) in buf.iter().enumerate() {
            assert_eq!(v as u64, f.eval(ctx.beta_pow(11 + k as i128), &ctx).0);
        }
        let form = IndexForm::new(3, 16, vec![Elem(1), Elem(2), Elem(0), Elem(9), Elem(4)], &ctx).unwrap();
        form.eval_powers(3, &mut buf, &ctx);
        for (k, &v) in buf.iter().enumerate() {
            assert_eq!(v as u64, form.eval(ctx.beta_pow(3 + k as i128), &ctx).0);
        }
    }
}
