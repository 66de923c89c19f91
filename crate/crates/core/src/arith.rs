//! Integer helpers shared by the field and criterion code.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm_u128(a: u128, b: u128) -> Option<u128> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    let mut x = a;
    let mut y = b;
    while y != 0 {
        let t = x % y;
        x = y;
        y = t;
    }
    (a / x).checked_mul(b)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m`; returns 0 when `m == 1`.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut b = base % m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    acc
}

/// `sum_{i=0}^{count-1} r^i mod m`.
pub fn geometric_sum_mod(r: u64, count: u64, m: u64) -> u64 {
    let mut acc = 0u64;
    let mut term = 1 % m;
    for _ in 0..count {
        acc = (acc + term) % m;
        term = mul_mod(term, r, m);
    }
    acc
}

/// `((r^n - 1) / s) mod l` for `s * l = order`, exact whenever `s | r^n - 1`.
///
/// Works from `r^n mod (s*l)`, so no big integers are needed: if
/// `r^n - 1 = s*k` then `(r^n - 1) mod (s*l) = s * (k mod l)`.
pub fn quotient_exponent(r: u64, n: u64, s: u64, l: u64) -> Option<u64> {
    let order = s.checked_mul(l)?;
    let top = (pow_mod(r, n, order) + order - 1) % order;
    if top % s != 0 {
        return None;
    }
    Some(top / s)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}
