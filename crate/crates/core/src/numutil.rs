//! Small integer number theory: primality, factorization, Kronecker symbol.

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let pow = |mut b: u128, mut e: u64, m: u128| -> u128 {
        let mut acc: u128 = 1;
        b %= m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a as u128, d, n as u128);
        if x == 1 || x == (n - 1) as u128 {
            continue;
        }
        for _ in 1..s {
            x = x * x % n as u128;
            if x == (n - 1) as u128 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization (p, multiplicity), ascending. Trial division;
/// inputs in this crate are small.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
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

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factor(n) {
        let cur = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(cur.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

pub fn is_squarefree(n: u64) -> bool {
    factor(n).iter().all(|&(_, e)| e == 1)
}

pub fn euler_phi(n: u64) -> u64 {
    let mut r = n;
    for (p, _) in factor(n) {
        r = r / p * (p - 1);
    }
    r
}

/// Number of divisors.
pub fn sigma0(n: u64) -> u64 {
    factor(n).iter().map(|&(_, e)| (e + 1) as u64).product()
}

/// Kronecker symbol (a/n) extending the Jacobi symbol; n >= 0.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a;
    let mut n = n;
    let mut sign = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -sign;
        }
    }
    // (a/2) factor for evenness of n.
    let mut e2 = 0u32;
    while n % 2 == 0 {
        n /= 2;
        e2 += 1;
    }
    if e2 > 0 {
        if a % 2 == 0 {
            return 0;
        }
        let am8 = a.rem_euclid(8);
        let s2 = if am8 == 1 || am8 == 7 { 1 } else { -1 };
        if e2 % 2 == 1 && s2 == -1 {
            sign = -sign;
        }
    }
    // Jacobi (a/n), n odd positive.
    a = a.rem_euclid(n);
    let mut num = a;
    let mut den = n;
    let mut t = 1i32;
    while num != 0 {
        while num % 2 == 0 {
            num /= 2;
            let dm8 = den % 8;
            if dm8 == 3 || dm8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut num, &mut den);
        if num % 4 == 3 && den % 4 == 3 {
            t = -t;
        }
        num %= den;
    }
    if den != 1 {
        return 0;
    }
    sign * t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_spot_checks() {
        assert!(is_prime(2));
        assert!(is_prime(53));
        assert!(is_prime(211));
        assert!(is_prime(1511));
        assert!(!is_prime(1));
        assert!(!is_prime(26));
        assert!(!is_prime(211 * 1511));
    }

    #[test]
    fn factor_and_divisors() {
        assert_eq!(factor(26), vec![(2, 1), (13, 1)]);
        assert_eq!(divisors(26), vec![1, 2, 13, 26]);
        assert_eq!(sigma0(12), 6);
        assert_eq!(euler_phi(12), 4);
    }

    #[test]
    fn kronecker_matches_legendre_on_odd_primes() {
        use crate::padic::legendre;
        for p in [3u64, 5, 7, 13, 53, 211] {
            for a in 1..p.min(40) {
                assert_eq!(kronecker(a as i64, p as i64), legendre(a, p), "({a}/{p})");
            }
        }
    }

    #[test]
    fn kronecker_at_two() {
        // (a/2): 0 for even, 1 for a = +-1 mod 8, -1 for a = +-3 mod 8.
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(7, 2), 1);
        assert_eq!(kronecker(17, 2), 1);
    }
}
