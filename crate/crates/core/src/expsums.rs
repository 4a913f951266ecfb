//! Kloosterman sums K_m(a), degree-5 Weil sums Q_m(a), point counts of the
//! Artin-Schreier curve y^2 + y = a(x^5 + x^3 + x), and the (r, s) Weil-pair
//! bookkeeping that links Q_m to the quintic factor pattern.
//!
//! Sums run over subfields represented inside a host context. Each sum
//! reduces the per-element work to a popcount: for fixed a the map
//! y -> Tr(a y) is GF(2)-linear, so one precomputed mask replaces the
//! multiplication. The convention 1/0 := 0 makes K_m(0) = 0.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::poly::FactorPattern;

/// Coefficients (r, s) of the genus-2 Weil polynomial
/// x^4 + r x^3 + s x^2 + 2^m r x + 2^(2m).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WeilPair {
    pub r: i64,
    pub s: i64,
}

/// Curve point counts over GF(2^m) and GF(2^(2m)), infinity included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CurveCounts {
    pub n1: i64,
    pub n2: i64,
}

fn check_subfield_member(ctx: &FieldCtx, m: u32, a: FieldElement) -> Result<u32> {
    if a.ctx_id() != ctx.id() {
        return Err(Error::ContextMismatch);
    }
    if !ctx.in_subfield(m, a)? {
        return Err(Error::NotInSubfield(m));
    }
    Ok(a.bits())
}

/// Walks x = gamma^t through the nonzero degree-m subfield together with
/// x^-1 = gamma^(L-t), L = 2^m - 1, so character sums never invert.
struct TorusWalk<'a> {
    ctx: &'a FieldCtx,
    gamma: u32,
    gamma_inv: u32,
    x: u32,
    xinv: u32,
    remaining: u64,
}

impl<'a> TorusWalk<'a> {
    fn new(ctx: &'a FieldCtx, m: u32) -> Result<Self> {
        if m == 0 || ctx.degree() % m != 0 {
            return Err(Error::InvalidSubfieldDegree(m));
        }
        let sub_order = (1u64 << m) - 1;
        let gamma = ctx.pow_raw(ctx.generator().bits(), ctx.order() / sub_order);
        Ok(TorusWalk {
            ctx,
            gamma,
            gamma_inv: ctx.pow_raw(gamma, sub_order - 1),
            x: 1,
            xinv: 1,
            remaining: sub_order,
        })
    }
}

impl<'a> Iterator for TorusWalk<'a> {
    type Item = (u32, u32);

    fn next(&mut self) -> Option<(u32, u32)> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let out = (self.x, self.xinv);
        self.x = self.ctx.mul_raw(self.x, self.gamma);
        self.xinv = self.ctx.mul_raw(self.xinv, self.gamma_inv);
        Some(out)
    }
}

/// K_m(a) = sum over x in GF(2^m) of (-1)^Tr(ax + 1/x), with the x = 0 term
/// contributing +1.
pub fn kloosterman(ctx: &Arc<FieldCtx>, m: u32, a: FieldElement) -> Result<i64> {
    let a_bits = check_subfield_member(ctx, m, a)?;
    let t_mask = ctx.subfield_mask(m)?;
    let a_mask = ctx.linear_functional_mask(a_bits, t_mask);
    let mut sum = 1i64; // x = 0
    for (x, xinv) in TorusWalk::new(ctx, m)? {
        let bit = FieldCtx::mask_parity(x, a_mask) ^ FieldCtx::mask_parity(xinv, t_mask);
        sum += 1 - 2 * i64::from(bit);
    }
    Ok(sum)
}

/// K_m(a) for every a in the degree-m subfield, in subfield enumeration
/// order (0 first). One inverse-trace table serves all a.
pub fn kloosterman_all(ctx: &Arc<FieldCtx>, m: u32) -> Result<Vec<(FieldElement, i64)>> {
    let t_mask = ctx.subfield_mask(m)?;
    let xs: Vec<(u32, u8)> = TorusWalk::new(ctx, m)?
        .map(|(x, xinv)| (x, FieldCtx::mask_parity(xinv, t_mask)))
        .collect();
    let elems: Vec<FieldElement> = ctx.subfield_elements(m)?.collect();
    let out: Vec<(FieldElement, i64)> = elems
        .par_iter()
        .map(|&a| {
            let a_mask = ctx.linear_functional_mask(a.bits(), t_mask);
            let mut sum = 1i64;
            for &(x, tr_inv) in &xs {
                let bit = FieldCtx::mask_parity(x, a_mask) ^ tr_inv;
                sum += 1 - 2 * i64::from(bit);
            }
            (a, sum)
        })
        .collect();
    Ok(out)
}

/// Q_m(a) = sum over x in GF(2^m) of (-1)^Tr(a(x^5 + x^3 + x)), a != 0.
pub fn weil_q(ctx: &Arc<FieldCtx>, m: u32, a: FieldElement) -> Result<i64> {
    if a.is_zero() {
        return Err(Error::NonInvertibleZero);
    }
    let a_bits = check_subfield_member(ctx, m, a)?;
    let t_mask = ctx.subfield_mask(m)?;
    let a_mask = ctx.linear_functional_mask(a_bits, t_mask);
    weil_sum_masked(ctx, m, a_mask)
}

/// Q_m(a) for every nonzero a in the degree-m subfield, in subfield
/// enumeration order. One pass materializes the x^5 + x^3 + x values.
pub fn weil_q_all(ctx: &Arc<FieldCtx>, m: u32) -> Result<Vec<(FieldElement, i64)>> {
    let t_mask = ctx.subfield_mask(m)?;
    let walk = ArtinSchreierWalk::new(ctx, m, 0)?;
    let ws: Vec<u32> = walk.collect();
    let elems: Vec<FieldElement> = ctx.subfield_elements(m)?.skip(1).collect();
    let out: Vec<(FieldElement, i64)> = elems
        .par_iter()
        .map(|&a| {
            let a_mask = ctx.linear_functional_mask(a.bits(), t_mask);
            let mut sum = 1i64; // x = 0
            for &w in &ws {
                sum += 1 - 2 * i64::from(FieldCtx::mask_parity(w, a_mask));
            }
            (a, sum)
        })
        .collect();
    Ok(out)
}

fn weil_sum_masked(ctx: &Arc<FieldCtx>, m: u32, a_mask: u32) -> Result<i64> {
    let sub_order = (1u64 << m) - 1;
    let threshold = 1u64 << 18;
    if sub_order < threshold {
        let mut sum = 1i64; // x = 0
        for w in ArtinSchreierWalk::new(ctx, m, 0)? {
            sum += 1 - 2 * i64::from(FieldCtx::mask_parity(w, a_mask));
        }
        return Ok(sum);
    }
    // stream large domains in parallel chunks
    let chunk = 1u64 << 20;
    let n_chunks = sub_order.div_ceil(chunk);
    let partial: i64 = (0..n_chunks)
        .into_par_iter()
        .map(|ci| {
            let start = ci * chunk;
            let len = chunk.min(sub_order - start);
            let mut s = 0i64;
            let walk = ArtinSchreierWalk::new(ctx, m, start).expect("checked degree");
            for w in walk.take(len as usize) {
                s += 1 - 2 * i64::from(FieldCtx::mask_parity(w, a_mask));
            }
            s
        })
        .sum();
    Ok(1 + partial)
}

/// Walks w = x^5 + x^3 + x for x = gamma^(start+t) over the nonzero
/// degree-m subfield, three geometric sequences per step.
struct ArtinSchreierWalk<'a> {
    ctx: &'a FieldCtx,
    s1: u32,
    s3: u32,
    s5: u32,
    p1: u32,
    p3: u32,
    p5: u32,
    remaining: u64,
}

impl<'a> ArtinSchreierWalk<'a> {
    fn new(ctx: &'a FieldCtx, m: u32, start: u64) -> Result<Self> {
        if m == 0 || ctx.degree() % m != 0 {
            return Err(Error::InvalidSubfieldDegree(m));
        }
        let sub_order = (1u64 << m) - 1;
        let gamma = ctx.pow_raw(ctx.generator().bits(), ctx.order() / sub_order);
        let g3 = ctx.pow_raw(gamma, 3);
        let g5 = ctx.pow_raw(gamma, 5);
        Ok(ArtinSchreierWalk {
            ctx,
            s1: gamma,
            s3: g3,
            s5: g5,
            p1: ctx.pow_raw(gamma, start),
            p3: ctx.pow_raw(g3, start),
            p5: ctx.pow_raw(g5, start),
            remaining: sub_order - start,
        })
    }
}

impl<'a> Iterator for ArtinSchreierWalk<'a> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let w = self.p5 ^ self.p3 ^ self.p1;
        self.p1 = self.ctx.mul_raw(self.p1, self.s1);
        self.p3 = self.ctx.mul_raw(self.p3, self.s3);
        self.p5 = self.ctx.mul_raw(self.p5, self.s5);
        Some(w)
    }
}

/// Number of points (with infinity) of y^2 + y = a(x^5+x^3+x) over the
/// degree-deg subfield: 1 + 2 #{x : Tr(a(x^5+x^3+x)) = 0} = 2^deg + 1 + Q.
pub fn curve_points(ctx: &Arc<FieldCtx>, deg: u32, a: FieldElement) -> Result<i64> {
    if a.is_zero() {
        return Err(Error::NonInvertibleZero);
    }
    let a_bits = check_subfield_member(ctx, deg, a)?;
    let t_mask = ctx.subfield_mask(deg)?;
    let a_mask = ctx.linear_functional_mask(a_bits, t_mask);
    let q = weil_sum_masked(ctx, deg, a_mask)?;
    Ok((1i64 << deg) + 1 + q)
}

/// The unique (r, s) row for a factor pattern of x^5 + x + a^{-1}, with the
/// sign of r resolved by the observed Weil sum. For even m the (5) row has
/// s = 2^m: the Weil polynomial there is 2^(2m) Phi_10(x / 2^(m/2)) up to
/// scaling, so its middle coefficient is the full 2^m.
pub fn weil_pair_resolve(pattern: &FactorPattern, m: u32, q_value: i64) -> Result<WeilPair> {
    let mismatch = Err(Error::PatternMismatch { m, q: q_value });
    let two_m = 1i64 << m;
    if m % 2 == 0 {
        let h = 1i64 << (m / 2);
        let rows = FactorPattern::even_m_rows();
        let (allowed, s) = if *pattern == rows[0] {
            (h, two_m)
        } else if *pattern == rows[1] {
            (2 * h, 3 * two_m)
        } else if *pattern == rows[2] {
            (0, 2 * two_m)
        } else if *pattern == rows[3] {
            (4 * h, 6 * two_m)
        } else {
            return mismatch;
        };
        if q_value.abs() != allowed {
            return mismatch;
        }
        Ok(WeilPair { r: q_value, s })
    } else {
        let rows = FactorPattern::odd_m_rows();
        let s = if *pattern == rows[0] {
            0
        } else if *pattern == rows[1] {
            two_m
        } else if *pattern == rows[2] {
            -2 * two_m
        } else {
            return mismatch;
        };
        if q_value != 0 {
            return mismatch;
        }
        Ok(WeilPair { r: 0, s })
    }
}

/// Both curve counts, cross-checked against (r, s).
pub fn curve_counts(
    ctx: &Arc<FieldCtx>,
    m: u32,
    a: FieldElement,
    pair: WeilPair,
) -> Result<CurveCounts> {
    let n1 = curve_points(ctx, m, a)?;
    let n2 = curve_points(ctx, 2 * m, a)?;
    let expect1 = (1i64 << m) + 1 + pair.r;
    let expect2 = (1i64 << (2 * m)) + 1 + 2 * pair.s - pair.r * pair.r;
    if n1 != expect1 || n2 != expect2 {
        return Err(Error::CrossCheckFailure(format!(
            "curve counts ({n1}, {n2}) disagree with Weil pair ({}, {})",
            pair.r, pair.s
        )));
    }
    Ok(CurveCounts { n1, n2 })
}

/// Checks 1 - K_2m1(a) = (1 - K_m1(a))^2 - 2 * 2^m1 for a in the degree-m1
/// subfield, both sides summed independently.
pub fn kloosterman_subfield_descent(
    ctx: &Arc<FieldCtx>,
    m1: u32,
    a: FieldElement,
) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::NonInvertibleZero);
    }
    check_subfield_member(ctx, m1, a)?;
    let k_small = kloosterman(ctx, m1, a)?;
    let k_big = kloosterman(ctx, 2 * m1, a)?;
    Ok(1 - k_big == (1 - k_small) * (1 - k_small) - (1i64 << (m1 + 1)))
}

/// Prop-style bound: K_m(a) lies in [1 - 2^((m+2)/2), 1 + 2^((m+2)/2)]
/// (real bound, checked with the exact square root when m is even and the
/// floor otherwise) and is divisible by 4.
pub fn kloosterman_in_range(m: u32, k: i64) -> bool {
    // 2^((m+2)/2) = 2^((m+2)/2) exactly for even m; for odd m compare squares
    let dev = k - 1;
    let bound_sq = 1i128 << (m + 2);
    i128::from(dev) * i128::from(dev) <= bound_sq && k % 4 == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use crate::poly::quintic_pattern;

    #[test]
    fn kloosterman_at_zero_is_zero() {
        for m in [4u32, 6, 8] {
            let f = FieldCtx::new(m, None).unwrap();
            assert_eq!(kloosterman(&f, m, f.zero()).unwrap(), 0);
        }
    }

    #[test]
    fn kloosterman_all_matches_singletons() {
        let f = FieldCtx::new(8, None).unwrap();
        for (a, k) in kloosterman_all(&f, 8).unwrap() {
            assert_eq!(kloosterman(&f, 8, a).unwrap(), k);
        }
    }

    #[test]
    fn kloosterman_bound_and_divisibility() {
        for m in 4..=10u32 {
            let f = FieldCtx::new(m, None).unwrap();
            for (a, k) in kloosterman_all(&f, m).unwrap() {
                if a.is_zero() {
                    continue;
                }
                assert!(kloosterman_in_range(m, k), "m={m} a={:x} K={k}", a);
            }
        }
    }

    #[test]
    fn kloosterman_subfield_agrees_with_direct_field() {
        // multiset of K_6 over GF(2^6) directly vs inside GF(2^12)
        let f6 = FieldCtx::new(6, None).unwrap();
        let f12 = FieldCtx::new(12, None).unwrap();
        let mut direct: Vec<i64> = kloosterman_all(&f6, 6)
            .unwrap()
            .into_iter()
            .filter(|(a, _)| !a.is_zero())
            .map(|(_, k)| k)
            .collect();
        let mut inside: Vec<i64> = kloosterman_all(&f12, 6)
            .unwrap()
            .into_iter()
            .filter(|(a, _)| !a.is_zero())
            .map(|(_, k)| k)
            .collect();
        direct.sort_unstable();
        inside.sort_unstable();
        assert_eq!(direct, inside);
    }

    #[test]
    fn weil_q_even_value_set() {
        let f = FieldCtx::new(6, None).unwrap();
        let allowed = [0i64, 8, -8, 16, -16, 32, -32];
        for bits in 1..64u32 {
            let a = f.element(bits).unwrap();
            let q = weil_q(&f, 6, a).unwrap();
            assert!(allowed.contains(&q), "a={bits:#x} Q={q}");
        }
    }

    #[test]
    fn weil_q_odd_degree_vanishes() {
        for m in [5u32, 7] {
            let f = FieldCtx::new(m, None).unwrap();
            for bits in 1..(1u32 << m) {
                let a = f.element(bits).unwrap();
                assert_eq!(weil_q(&f, m, a).unwrap(), 0, "m={m} a={bits:#x}");
            }
        }
    }

    #[test]
    fn weil_q_zero_rejected() {
        let f = FieldCtx::new(6, None).unwrap();
        assert!(matches!(weil_q(&f, 6, f.zero()), Err(Error::NonInvertibleZero)));
    }

    #[test]
    fn weil_q_matches_pattern_classification() {
        let f = FieldCtx::new(6, None).unwrap();
        for bits in 1..64u32 {
            let a = f.element(bits).unwrap();
            let q = weil_q(&f, 6, a).unwrap();
            let pat = quintic_pattern(&f, 6, a).unwrap();
            let rows = FactorPattern::even_m_rows();
            assert_eq!(q == 0, pat == rows[2], "Q=0 iff (1)(2)^2");
            assert_eq!(q.abs() == 8, pat == rows[0], "|Q|=2^(m/2) iff irreducible");
        }
    }

    #[test]
    fn curve_points_consistency_m6() {
        let f = FieldCtx::new(6, None).unwrap();
        for bits in 1..64u32 {
            let a = f.element(bits).unwrap();
            let n1 = curve_points(&f, 6, a).unwrap();
            let q = weil_q(&f, 6, a).unwrap();
            assert_eq!(n1, 65 + q);
        }
    }

    #[test]
    fn weil_pair_rows() {
        // even m
        let p5 = FactorPattern::from_pairs(&[(5, 1)]);
        assert_eq!(weil_pair_resolve(&p5, 6, 8).unwrap(), WeilPair { r: 8, s: 64 });
        assert_eq!(weil_pair_resolve(&p5, 6, -8).unwrap(), WeilPair { r: -8, s: 64 });
        assert!(weil_pair_resolve(&p5, 6, 16).is_err());
        let p122 = FactorPattern::from_pairs(&[(1, 1), (2, 2)]);
        assert_eq!(
            weil_pair_resolve(&p122, 6, 0).unwrap(),
            WeilPair { r: 0, s: 128 }
        );
        // odd m
        let p14 = FactorPattern::from_pairs(&[(1, 1), (4, 1)]);
        assert_eq!(weil_pair_resolve(&p14, 7, 0).unwrap(), WeilPair { r: 0, s: 0 });
        let p132 = FactorPattern::from_pairs(&[(1, 3), (2, 1)]);
        assert_eq!(
            weil_pair_resolve(&p132, 7, 0).unwrap(),
            WeilPair { r: 0, s: -256 }
        );
        let p23 = FactorPattern::from_pairs(&[(2, 1), (3, 1)]);
        assert_eq!(
            weil_pair_resolve(&p23, 7, 0).unwrap(),
            WeilPair { r: 0, s: 128 }
        );
    }

    #[test]
    fn descent_identity_small() {
        let f = FieldCtx::new(6, None).unwrap();
        for a in f.subfield_elements(3).unwrap() {
            if a.is_zero() {
                continue;
            }
            assert!(kloosterman_subfield_descent(&f, 3, a).unwrap());
            assert_ne!(kloosterman(&f, 6, a).unwrap(), -4);
        }
    }
}
