//! The distinct-degree pattern against a brute-force factorization oracle:
//! find roots by evaluation, divide them out with synthetic division, then
//! trial-divide by every irreducible quadratic. Whatever remains is a
//! single irreducible factor of its degree.

use std::sync::Arc;

use hbf_core::field::{FieldCtx, FieldElement};
use hbf_core::poly::{quintic_pattern, FactorPattern};

/// Dense coefficient vectors (index = degree) with context arithmetic,
/// independent of the crate's Poly type.
fn eval(f: &FieldCtx, p: &[u32], x: u32) -> u32 {
    let mut acc = 0u32;
    for &c in p.iter().rev() {
        acc = f.mul(f.element(acc).unwrap(), f.element(x).unwrap()).bits() ^ c;
    }
    acc
}

/// Divide p by the monic (x - r) = (x + r); returns the quotient, panics if
/// the division is inexact.
fn divide_linear(f: &FieldCtx, p: &[u32], r: u32) -> Vec<u32> {
    let mut q = vec![0u32; p.len() - 1];
    let mut carry = 0u32;
    for i in (0..p.len()).rev() {
        let cur = p[i] ^ carry;
        if i == 0 {
            assert_eq!(cur, 0, "root division must be exact");
        } else {
            q[i - 1] = cur;
            carry = f
                .mul(f.element(cur).unwrap(), f.element(r).unwrap())
                .bits();
        }
    }
    q
}

/// Long division by a monic divisor; returns (quotient, remainder-is-zero).
fn divides(f: &FieldCtx, p: &[u32], d: &[u32]) -> Option<Vec<u32>> {
    assert_eq!(*d.last().unwrap(), 1);
    let mut rem = p.to_vec();
    let dd = d.len() - 1;
    if rem.len() <= dd {
        return None;
    }
    let mut quo = vec![0u32; rem.len() - dd];
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        if lead != 0 {
            let sh = rem.len() - 1 - dd;
            quo[sh] = lead;
            for (i, &c) in d.iter().enumerate() {
                if c != 0 {
                    rem[sh + i] ^=
                        f.mul(f.element(lead).unwrap(), f.element(c).unwrap()).bits();
                }
            }
        }
        rem.pop();
    }
    if rem.iter().all(|&c| c == 0) {
        Some(quo)
    } else {
        None
    }
}

/// All monic irreducible quadratics over the field (no roots), as
/// coefficient vectors [c, b, 1] for x^2 + b x + c.
fn irreducible_quadratics(f: &FieldCtx) -> Vec<Vec<u32>> {
    let n = (f.order() + 1) as u32;
    let mut out = Vec::new();
    for b in 0..n {
        for c in 0..n {
            let q = vec![c, b, 1];
            let mut has_root = false;
            for x in 0..n {
                if eval(f, &q, x) == 0 {
                    has_root = true;
                    break;
                }
            }
            if !has_root {
                out.push(q);
            }
        }
    }
    out
}

fn oracle_pattern(f: &Arc<FieldCtx>, a: FieldElement) -> FactorPattern {
    let inv = f.inv(a).unwrap().bits();
    let mut p = vec![inv, 1, 0, 0, 0, 1];
    let n = (f.order() + 1) as u32;
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    // strip distinct roots (squarefree, so each root once)
    let mut linear = 0;
    let mut x = 0;
    while x < n && p.len() > 1 {
        if eval(f, &p, x) == 0 {
            p = divide_linear(f, &p, x);
            linear += 1;
        }
        x += 1;
    }
    if linear > 0 {
        pairs.push((1, linear));
    }
    // strip irreducible quadratics
    if p.len() > 2 {
        let mut quads = 0;
        for q in irreducible_quadratics(f) {
            if let Some(quo) = divides(f, &p, &q) {
                p = quo;
                quads += 1;
                if p.len() - 1 < 2 {
                    break;
                }
            }
        }
        if quads > 0 {
            pairs.push((2, quads));
        }
    }
    // the leftover is one irreducible factor
    if p.len() > 1 {
        pairs.push(((p.len() - 1) as u32, 1));
    }
    FactorPattern::from_pairs(&pairs)
}

#[test]
fn pattern_matches_brute_force_oracle_up_to_m7() {
    for m in 2..=7u32 {
        let f = FieldCtx::new(m, None).unwrap();
        for bits in 1..(1u32 << m) {
            let a = f.element(bits).unwrap();
            let fast = quintic_pattern(&f, m, a).unwrap();
            let slow = oracle_pattern(&f, a);
            assert_eq!(fast, slow, "m={m} a={bits:#x}");
        }
    }
}

#[test]
fn patterns_cover_exactly_the_tabled_rows() {
    // even m: all four rows occur; odd m: all three rows occur
    let f6 = FieldCtx::new(6, None).unwrap();
    let mut seen = std::collections::HashSet::new();
    for bits in 1..64u32 {
        seen.insert(quintic_pattern(&f6, 6, f6.element(bits).unwrap()).unwrap());
    }
    let rows: std::collections::HashSet<_> = FactorPattern::even_m_rows().into_iter().collect();
    assert_eq!(seen, rows);

    let f7 = FieldCtx::new(7, None).unwrap();
    let mut seen = std::collections::HashSet::new();
    for bits in 1..128u32 {
        seen.insert(quintic_pattern(&f7, 7, f7.element(bits).unwrap()).unwrap());
    }
    let rows: std::collections::HashSet<_> = FactorPattern::odd_m_rows().into_iter().collect();
    assert_eq!(seen, rows);
}

#[test]
fn quintic_is_squarefree_for_every_nonzero_a() {
    use hbf_core::poly::Poly;
    let f = FieldCtx::new(7, None).unwrap();
    for bits in 1..128u32 {
        let c = f.inv(f.element(bits).unwrap()).unwrap();
        let p = Poly::new(
            &f,
            vec![c, f.one(), f.zero(), f.zero(), f.zero(), f.one()],
        )
        .unwrap();
        let g = p.monic_gcd(&p.derivative()).unwrap();
        assert_eq!(g.degree(), Some(0), "gcd(P, P') = 1");
    }
}
