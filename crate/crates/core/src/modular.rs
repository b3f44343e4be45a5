//! Word-sized modular helpers shared by every module.
//!
//! Moduli are at most `2^63`; products go through `u128`.

#[inline]
pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 + b as u128) % n as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, n: u64) -> u64 {
    add_mod(a % n, n - b % n, n)
}

/// Reduces a signed integer into `[0, n)`.
#[inline]
pub fn reduce(v: i128, n: u64) -> u64 {
    v.rem_euclid(n as i128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1 % n;
    let mut b = base % n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, n);
        }
        b = mul_mod(b, b, n);
        exp >>= 1;
    }
    acc
}

/// `1 + s + ... + s^(u-1) mod n`, by halving on `u`.
pub fn geom_sum_mod(s: u64, u: u64, n: u64) -> u64 {
    if n == 1 || u == 0 {
        return 0;
    }
    let s = s % n;
    // (sum, s^len) for the prefix handled so far
    fn go(s: u64, u: u64, n: u64) -> (u64, u64) {
        if u == 0 {
            return (0, 1 % n);
        }
        let (half, pw) = go(s, u / 2, n);
        // [2k] = [k](1 + s^k)
        let mut sum = mul_mod(half, add_mod(1, pw, n), n);
        let mut pw2 = mul_mod(pw, pw, n);
        if u % 2 == 1 {
            // [2k+1] = 1 + s[2k]
            sum = add_mod(1, mul_mod(s, sum, n), n);
            pw2 = mul_mod(pw2, s, n);
        }
        (sum, pw2)
    }
    go(s, u, n).0
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Exponent `k` with `2^k == v`, if `v` is a power of two.
pub fn log2_exact(v: u64) -> Option<u32> {
    v.is_power_of_two().then(|| v.trailing_zeros())
}
