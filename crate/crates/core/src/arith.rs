//! Elementary number theory on small naturals.

use num_integer::Integer;

/// Prime factorization as `(prime, exponent)` pairs, primes increasing.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

pub fn is_square_free(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Count of units modulo `n`; `euler_phi(1) == 1`.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi is defined for n >= 1");
    factorize(n)
        .into_iter()
        .map(|(p, e)| p.pow(e - 1) * (p - 1))
        .product()
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % modulus;
        }
        b = b * b % modulus;
        exp >>= 1;
    }
    result
}

/// Multiplicative order of a unit `u` modulo `m` (1 when `m == 1`).
pub fn mult_order(u: u64, m: u64) -> u64 {
    assert_eq!(gcd(u, m), 1, "{u} is not a unit modulo {m}");
    if m == 1 {
        return 1;
    }
    let mut x = u % m;
    let mut k = 1;
    while x != 1 {
        x = x * u % m;
        k += 1;
    }
    k
}

/// Units of `Z/m`, increasing.
pub fn units(m: u64) -> Vec<u64> {
    if m == 1 {
        return vec![0];
    }
    (1..m).filter(|&u| gcd(u, m) == 1).collect()
}

/// Solve `x ≡ r_i (mod m_i)` for pairwise coprime moduli.
pub fn crt(residues: &[(u64, u64)]) -> (u64, u64) {
    residues.iter().fold((0, 1), |(x, m), &(r, mi)| {
        // lift x mod m to x' mod m*mi with x' ≡ r mod mi
        let mut y = x;
        while y % mi != r % mi {
            y += m;
        }
        (y, m * mi)
    })
}

/// `⌈a / b⌉` for naturals, `b > 0`.
pub fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// Exponent `e` with `p^e == n`, if `n` is a power of `p`.
pub fn log_exact(n: u64, p: u64) -> Option<u32> {
    let mut e = 0;
    let mut x = n;
    while x > 1 {
        if !x.is_multiple_of(p) {
            return None;
        }
        x /= p;
        e += 1;
    }
    (x == 1).then_some(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_small_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(3), 2);
        assert_eq!(euler_phi(9), 6);
        assert_eq!(euler_phi(21), 12);
    }

    #[test]
    fn phi_matches_gcd_count() {
        for n in 1..=64u64 {
            let brute = (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64;
            assert_eq!(euler_phi(n), brute, "n = {n}");
        }
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(63), vec![(3, 2), (7, 1)]);
        assert_eq!(factorize(105), vec![(3, 1), (5, 1), (7, 1)]);
        assert!(is_square_free(105));
        assert!(!is_square_free(63));
    }

    #[test]
    fn orders_and_crt() {
        assert_eq!(mult_order(2, 7), 3);
        assert_eq!(mult_order(3, 8), 2);
        assert_eq!(crt(&[(2, 3), (3, 5)]), (8, 15));
        assert_eq!(crt(&[]), (0, 1));
        assert_eq!(pow_mod(2, 3, 7), 1);
        assert_eq!(log_exact(27, 3), Some(3));
        assert_eq!(log_exact(12, 3), None);
        assert_eq!(ceil_div(3, 2), 2);
    }
}
