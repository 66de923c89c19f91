//! Dense permutation tables: the brute-force oracle.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::lcm_u128;
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::poly::FieldFunction;

/// Largest field the oracle will tabulate.
pub const MAX_TABLE_ORDER: u64 = 1 << 26;

const CHUNK: usize = 1 << 14;

/// `images[x] = f(x)` over encoded elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermTable {
    images: Vec<u32>,
    bijective: bool,
}

impl PermTable {
    pub fn from_images(images: Vec<u32>) -> Self {
        let bijective = is_bijection(&images);
        PermTable { images, bijective }
    }

    pub fn identity(q: usize) -> Self {
        PermTable { images: (0..q as u32).collect(), bijective: true }
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn is_bijective(&self) -> bool {
        self.bijective
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    pub fn apply(&self, x: Elem) -> Elem {
        Elem(self.images[x.0 as usize] as u64)
    }

    fn require_bijective(&self) -> Result<()> {
        if self.bijective {
            Ok(())
        } else {
            Err(Error::NotBijective)
        }
    }

    /// `self ∘ other`: `x -> self(other(x))`.
    pub fn compose(&self, other: &PermTable) -> Result<PermTable> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch(self.len(), other.len()));
        }
        let images = other.images.iter().map(|&x| self.images[x as usize]).collect();
        Ok(PermTable { images, bijective: self.bijective && other.bijective })
    }

    pub fn inverse(&self) -> Result<PermTable> {
        self.require_bijective()?;
        let mut inv = vec![0u32; self.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Ok(PermTable { images: inv, bijective: true })
    }

    /// Cycles in order of their smallest element.
    pub fn cycles(&self) -> Result<Vec<Vec<u32>>> {
        self.require_bijective()?;
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x as u32);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        Ok(out)
    }

    pub fn cycle_structure(&self) -> Result<CycleStructure> {
        self.require_bijective()?;
        let mut counts = BTreeMap::new();
        let mut seen = vec![false; self.len()];
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.images[x] as usize;
            }
            *counts.entry(len).or_insert(0) += 1;
        }
        Ok(CycleStructure { counts })
    }

    /// Least `n >= 1` with `f^(n) = id`: the lcm of the cycle lengths.
    pub fn min_order(&self) -> Result<u128> {
        self.cycle_structure()?.lcm()
    }

    /// `f^(k)`; negative powers are powers of the inverse.
    pub fn functional_power(&self, k: i64) -> Result<PermTable> {
        if !self.bijective {
            if k <= 0 {
                return Err(Error::NotBijective);
            }
            let mut acc = PermTable::identity(self.len());
            acc.bijective = true;
            let mut base = self.clone();
            let mut e = k as u64;
            while e > 0 {
                if e & 1 == 1 {
                    acc = base.compose(&acc)?;
                }
                base = base.compose(&base)?;
                e >>= 1;
            }
            acc.bijective = is_bijection(&acc.images);
            return Ok(acc);
        }
        let mut out = vec![0u32; self.len()];
        for cycle in self.cycles()? {
            let len = cycle.len() as i64;
            let shift = k.rem_euclid(len) as usize;
            for (i, &x) in cycle.iter().enumerate() {
                out[x as usize] = cycle[(i + shift) % cycle.len()];
            }
        }
        Ok(PermTable { images: out, bijective: true })
    }

    /// True iff every cycle length divides `n`, i.e. `f^(n) = id`.
    pub fn is_n_cycle(&self, n: u64) -> Result<bool> {
        self.require_bijective()?;
        if n == 0 {
            return Err(Error::Precondition("n must be positive".into()));
        }
        let mut seen = vec![false; self.len()];
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.images[x] as usize;
            }
            if n % len != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn derive(&self, transform: Transform<'_>) -> Result<PermTable> {
        match transform {
            Transform::Power(k) => self.functional_power(k),
            Transform::Conjugate(g) => {
                // g ∘ f ∘ g^{-1}
                g.require_bijective()?;
                if g.len() != self.len() {
                    return Err(Error::SizeMismatch(self.len(), g.len()));
                }
                let mut out = vec![0u32; self.len()];
                for (x, &fx) in self.images.iter().enumerate() {
                    out[g.images[x] as usize] = g.images[fx as usize];
                }
                Ok(PermTable { images: out, bijective: self.bijective })
            }
            Transform::ComposeWith(g) => {
                g.require_bijective()?;
                let fg = self.compose(g)?;
                let gf = g.compose(self)?;
                if let Some(x) = (0..fg.len()).find(|&x| fg.images[x] != gf.images[x]) {
                    return Err(Error::NotCommuting(x as u32));
                }
                Ok(fg)
            }
        }
    }
}

/// Transformations that carry n-cycle permutations to n-cycle permutations.
#[derive(Clone, Copy, Debug)]
pub enum Transform<'a> {
    Power(i64),
    Conjugate(&'a PermTable),
    /// Only defined for a commuting pair.
    ComposeWith(&'a PermTable),
}

fn is_bijection(images: &[u32]) -> bool {
    let mut seen = vec![false; images.len()];
    for &y in images {
        let y = y as usize;
        if y >= seen.len() || seen[y] {
            return false;
        }
        seen[y] = true;
    }
    true
}

/// Multiset of cycle lengths: `length -> multiplicity`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleStructure {
    pub counts: BTreeMap<u64, u64>,
}

impl CycleStructure {
    pub fn from_pairs(pairs: &[(u64, u64)]) -> Self {
        CycleStructure { counts: pairs.iter().copied().collect() }
    }

    /// Number of points covered, `sum length * multiplicity`.
    pub fn total(&self) -> u64 {
        self.counts.iter().map(|(l, c)| l * c).sum()
    }

    pub fn lcm(&self) -> Result<u128> {
        self.counts
            .keys()
            .try_fold(1u128, |acc, &l| lcm_u128(acc, l as u128))
            .ok_or(Error::OrderOverflow)
    }

    pub fn lengths(&self) -> impl Iterator<Item = u64> + '_ {
        self.counts.keys().copied()
    }
}

impl std::fmt::Display for CycleStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(|(l, c)| format!("{l}:{c}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Evaluates `f` on all of GF(q).
pub fn to_table<F: FieldFunction + ?Sized>(f: &F, ctx: &FieldCtx) -> Result<PermTable> {
    let q = ctx.order();
    if q > MAX_TABLE_ORDER {
        return Err(Error::TableTooLarge(q));
    }
    let n = (q - 1) as usize;
    let mut images = vec![0u32; q as usize];
    images[0] = f.eval_at(Elem::ZERO, ctx).0 as u32;
    let starts: Vec<usize> = (0..n).step_by(CHUNK).collect();
    let work = |start: usize| {
        let len = CHUNK.min(n - start);
        let mut ys = vec![0u32; len];
        f.eval_powers(start as u64, &mut ys, ctx);
        let mut xs = vec![0u32; len];
        let beta = ctx.beta();
        let mut x = ctx.beta_pow(start as i128);
        for slot in xs.iter_mut() {
            *slot = x.0 as u32;
            x = ctx.mul(x, beta);
        }
        (xs, ys)
    };
    #[cfg(feature = "parallel")]
    let parts: Vec<(Vec<u32>, Vec<u32>)> = if starts.len() > 1 {
        use rayon::prelude::*;
        starts.par_iter().map(|&s| work(s)).collect()
    } else {
        starts.iter().map(|&s| work(s)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<(Vec<u32>, Vec<u32>)> = starts.iter().map(|&s| work(s)).collect();
    for (xs, ys) in parts {
        for (x, y) in xs.into_iter().zip(ys) {
            images[x as usize] = y;
        }
    }
    Ok(PermTable::from_images(images))
}

/// Evaluates `f` pointwise without the incremental scheme (test oracle path).
pub fn to_table_pointwise<F: FieldFunction + ?Sized>(f: &F, ctx: &FieldCtx) -> Result<PermTable> {
    let q = ctx.order();
    if q > MAX_TABLE_ORDER {
        return Err(Error::TableTooLarge(q));
    }
    Ok(PermTable::from_images(ctx.elements().map(|x| f.eval_at(x, ctx).0 as u32).collect()))
}
