//! Polynomials over GF(2) packed into u64 bit masks (bit i = coefficient of
//! x^i), just enough to test irreducibility of candidate field moduli.

pub fn degree(v: u64) -> Option<u32> {
    if v == 0 {
        None
    } else {
        Some(63 - v.leading_zeros())
    }
}

fn clmul(a: u64, b: u64) -> u64 {
    let mut r = 0u64;
    let mut b = b;
    while b != 0 {
        let i = b.trailing_zeros();
        r ^= a << i;
        b &= b - 1;
    }
    r
}

fn pmod(mut v: u64, f: u64) -> u64 {
    let df = degree(f).expect("nonzero modulus");
    while let Some(dv) = degree(v) {
        if dv < df {
            break;
        }
        v ^= f << (dv - df);
    }
    v
}

fn pgcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = pmod(a, b);
        a = b;
        b = r;
    }
    a
}

fn prime_divisors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin test: f of degree k is irreducible iff x^(2^k) == x (mod f) and
/// gcd(x^(2^(k/p)) - x, f) = 1 for every prime p | k.
pub fn is_irreducible(f: u64) -> bool {
    let k = match degree(f) {
        Some(k) if k >= 1 => k,
        _ => return false,
    };
    if k == 1 {
        return true;
    }
    let checkpoints: Vec<u32> = prime_divisors(k).iter().map(|p| k / p).collect();
    let mut h = 2u64; // x
    for i in 1..=k {
        h = pmod(clmul(h, h), f);
        if checkpoints.contains(&i) && pgcd(h ^ 2, f) != 1 {
            return false;
        }
    }
    h == 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_irreducibles() {
        for f in [0x7u64, 0xb, 0x13, 0x11b, 0x1009] {
            assert!(is_irreducible(f), "{f:#x}");
        }
    }

    #[test]
    fn known_reducibles() {
        // x^2+1 = (x+1)^2, x^4+x^2 = x^2(x^2+1), x^4+1 = (x+1)^4
        for f in [0x5u64, 0x14, 0x11] {
            assert!(!is_irreducible(f), "{f:#x}");
        }
    }
}
