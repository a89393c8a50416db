//! Exact modular and multiplicative arithmetic: Kronecker symbols, modular
//! square roots and inverses, primality screening, trial factorization, and
//! twisted divisor sums.
//!
//! Everything here works on checked 64-bit integers with 128-bit
//! intermediates; overflow aborts instead of wrapping.

use crate::error::{Error, Result};

/// Greatest common divisor, always nonnegative.
pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    gcd(gcd(a, b), c)
}

/// Extended Euclid: returns `(g, x, y)` with `x*a + y*b = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

// (a/2) indexed by a mod 8.
const TAB2: [i64; 8] = [0, 1, 0, -1, 0, -1, 0, 1];

/// Kronecker symbol `(a/n)`, the full extension of the Jacobi symbol to all
/// nonzero denominators: `(a/2)` is 0 for even a, +1 for a = ±1 mod 8,
/// -1 for a = ±3 mod 8, and `(a/-1)` is the sign of a.
///
/// Completely multiplicative in both arguments, and zero exactly when
/// `gcd(a, n) != 1`.
pub fn kronecker(a: i64, n: i64) -> Result<i64> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let mut a = a;
    let mut n = n;
    let mut k = 1i64;
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -1;
        }
    }
    if a % 2 == 0 && n % 2 == 0 {
        return Ok(0);
    }
    let mut v = 0u32;
    while n % 2 == 0 {
        v += 1;
        n /= 2;
    }
    if v % 2 == 1 {
        k *= TAB2[(a & 7) as usize];
        if k == 0 {
            return Ok(0);
        }
    }
    a = a.rem_euclid(n);
    while a != 0 {
        v = 0;
        while a % 2 == 0 {
            v += 1;
            a /= 2;
        }
        if v % 2 == 1 {
            k *= TAB2[(n & 7) as usize];
        }
        // quadratic reciprocity for odd positive a, n
        if a & n & 2 != 0 {
            k = -k;
        }
        (a, n) = (n % a, a);
    }
    Ok(if n == 1 { k } else { 0 })
}

/// Deterministic Miller-Rabin, exact for all u64 inputs.
pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// `a^e mod p` on canonical residues.
pub fn pow_mod(a: i64, e: u64, p: i64) -> i64 {
    pow_mod_u64(a.rem_euclid(p) as u64, e, p as u64) as i64
}

/// Inverse of `a` modulo a prime `p`, in `[1, p)`.
pub fn inv_mod(a: i64, p: i64) -> Result<i64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let r = a.rem_euclid(p);
    if r == 0 {
        return Err(Error::NotInvertible {
            value: a,
            modulus: p,
        });
    }
    let (g, x, _) = ext_gcd(r, p);
    debug_assert_eq!(g, 1);
    Ok(x.rem_euclid(p))
}

/// Square root of `a` modulo an odd prime, by Tonelli-Shanks with the least
/// quadratic nonresidue as auxiliary. Returns the smaller of the two roots,
/// `None` when `a` is a nonresidue, and `0` for `a = 0 mod p`.
pub fn sqrt_mod(a: i64, p: i64) -> Result<Option<i64>> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let a = a.rem_euclid(p);
    if a == 0 {
        return Ok(Some(0));
    }
    if kronecker(a, p)? == -1 {
        return Ok(None);
    }
    let s = if p % 4 == 3 {
        pow_mod(a, ((p + 1) / 4) as u64, p)
    } else {
        tonelli_shanks(a, p)
    };
    Ok(Some(s.min(p - s)))
}

fn tonelli_shanks(a: i64, p: i64) -> i64 {
    let mut q = p - 1;
    let mut e = 0u32;
    while q % 2 == 0 {
        q /= 2;
        e += 1;
    }
    let mut z = 2;
    while kronecker(z, p).expect("p != 0") != -1 {
        z += 1;
    }
    let mut m = e;
    let mut c = pow_mod(z, q as u64, p);
    let mut t = pow_mod(a, q as u64, p);
    let mut r = pow_mod(a, ((q + 1) / 2) as u64, p);
    while t != 1 {
        let mut i = 0u32;
        let mut u = t;
        while u != 1 {
            u = mul_mod_u64(u as u64, u as u64, p as u64) as i64;
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod_u64(b as u64, b as u64, p as u64) as i64;
        t = mul_mod_u64(t as u64, c as u64, p as u64) as i64;
        r = mul_mod_u64(r as u64, b as u64, p as u64) as i64;
    }
    r
}

/// Prime factorization by trial division, exponents with their primes in
/// ascending order.
pub fn factorize(n: i64) -> Vec<(i64, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = 2i64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0u32;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Twisted divisor sum `sum_{d|n} (chi/d) * ((n/d)/psi)`.
///
/// With `psi = 1` the second factor is identically 1 and this is the plain
/// character divisor sum `sum_{d|n} (chi/d)`.
pub fn divisor_sum_twisted(n: i64, chi: i64, psi: i64) -> Result<i64> {
    if n < 1 {
        return Err(Error::NotPositive {
            what: "divisor-sum argument",
            value: n,
        });
    }
    let mut total = 0i64;
    let mut d = 1i64;
    while d * d <= n {
        if n % d == 0 {
            total += kronecker(chi, d)? * kronecker(n / d, psi)?;
            let e = n / d;
            if e != d {
                total += kronecker(chi, e)? * kronecker(d, psi)?;
            }
        }
        d += 1;
    }
    Ok(total)
}
