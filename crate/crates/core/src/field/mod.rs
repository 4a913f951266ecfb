//! Binary field contexts GF(2^k) for 2 <= k <= 32.
//!
//! Elements are coefficient bit-vectors in the polynomial basis (bit i =
//! coefficient of x^i) packed into a `u32`. A context owns the modulus, a
//! canonical primitive element found by ascending scan, the factored group
//! order, and precomputed trace masks for every subfield degree. Subfields
//! are represented inside the big field: membership is Frobenius fixedness
//! and enumeration walks the cyclic subgroup, so no cross-context embedding
//! maps exist anywhere.

mod gf2x;
mod moduli;

pub use moduli::{default_modulus, parse_moduli_table, MODULI_TABLE_TEXT};

use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 32;

static NEXT_CTX_ID: AtomicU32 = AtomicU32::new(1);

/// Opaque identity of a [`FieldCtx`]; two contexts never share an id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CtxId(u32);

/// Degree plus modulus, validated for irreducibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    degree: u32,
    modulus: u64,
}

impl FieldSpec {
    pub fn new(degree: u32, modulus: u64) -> Result<Self> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&degree) {
            return Err(Error::DegreeUnsupported(degree));
        }
        if gf2x::degree(modulus) != Some(degree) {
            return Err(Error::InvalidFieldSpec(format!(
                "modulus {modulus:#x} does not have degree {degree}"
            )));
        }
        if !gf2x::is_irreducible(modulus) {
            return Err(Error::InvalidFieldSpec(format!(
                "modulus {modulus:#x} is reducible over GF(2)"
            )));
        }
        Ok(FieldSpec { degree, modulus })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

/// An element of a specific GF(2^k) context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    bits: u32,
    ctx: CtxId,
}

impl FieldElement {
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn ctx_id(&self) -> CtxId {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// Bare lowercase hex of the coefficient vector, LSB = constant term.
    pub fn to_hex(&self) -> String {
        format!("{:x}", self.bits)
    }
}

impl fmt::LowerHex for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.bits, f)
    }
}

/// A GF(2^k) context: modulus, canonical generator, factored group order,
/// and trace masks. Immutable after construction and freely shareable.
pub struct FieldCtx {
    id: CtxId,
    spec: FieldSpec,
    order: u64,
    elem_mask: u32,
    low_mask: u64,
    tail: u64,
    generator_bits: u32,
    group_order_factors: Vec<(u64, u32)>,
    /// absolute-trace mask: Tr(x) = parity(x & mask)
    trace_mask: u32,
    /// per-divisor masks for the subfield absolute trace, (d, mask)
    subfield_masks: Vec<(u32, u32)>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("degree", &self.spec.degree)
            .field("modulus", &format_args!("{:#x}", self.spec.modulus))
            .field("generator", &format_args!("{:#x}", self.generator_bits))
            .finish()
    }
}

impl FieldCtx {
    /// Build a context. With `modulus = None` the repo's fixed table supplies
    /// the default modulus for the degree. The modulus is re-verified, the
    /// group order factored by trial division, and the primitive element
    /// discovered by ascending scan.
    pub fn new(degree: u32, modulus: Option<u64>) -> Result<Arc<FieldCtx>> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&degree) {
            return Err(Error::DegreeUnsupported(degree));
        }
        let modulus = match modulus {
            Some(m) => m,
            None => default_modulus(degree)?,
        };
        let spec = FieldSpec::new(degree, modulus)?;
        let order = (1u64 << degree) - 1;
        let elem_mask = order as u32;
        let factors = factor_by_trial_division(order);

        let mut ctx = FieldCtx {
            id: CtxId(NEXT_CTX_ID.fetch_add(1, Ordering::Relaxed)),
            spec,
            order,
            elem_mask,
            low_mask: order,
            tail: modulus & order,
            generator_bits: 0,
            group_order_factors: factors,
            trace_mask: 0,
            subfield_masks: Vec::new(),
        };

        ctx.generator_bits = ctx.find_generator()?;
        ctx.trace_mask = ctx.build_trace_mask();
        if ctx.trace_mask == 0 {
            return Err(Error::InvalidFieldSpec(
                "degenerate trace form (modulus is not irreducible)".into(),
            ));
        }
        ctx.subfield_masks = ctx.build_subfield_masks()?;
        Ok(Arc::new(ctx))
    }

    pub fn id(&self) -> CtxId {
        self.id
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn degree(&self) -> u32 {
        self.spec.degree
    }

    pub fn modulus(&self) -> u64 {
        self.spec.modulus
    }

    /// 2^k - 1.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn group_order_factors(&self) -> &[(u64, u32)] {
        &self.group_order_factors
    }

    pub fn generator(&self) -> FieldElement {
        self.make(self.generator_bits)
    }

    pub fn zero(&self) -> FieldElement {
        self.make(0)
    }

    pub fn one(&self) -> FieldElement {
        self.make(1)
    }

    pub fn element(&self, bits: u32) -> Result<FieldElement> {
        if u64::from(bits) > self.order {
            return Err(Error::InvalidElement {
                bits: bits.into(),
                degree: self.spec.degree,
            });
        }
        Ok(self.make(bits))
    }

    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let t = s.trim().trim_start_matches("0x");
        let bits = u64::from_str_radix(t, 16)
            .map_err(|_| Error::InvalidInput(format!("not a hex element: {s:?}")))?;
        if bits > self.order {
            return Err(Error::InvalidElement {
                bits,
                degree: self.spec.degree,
            });
        }
        Ok(self.make(bits as u32))
    }

    #[inline]
    pub(crate) fn make(&self, bits: u32) -> FieldElement {
        debug_assert!(u64::from(bits) <= self.order);
        FieldElement {
            bits,
            ctx: self.id,
        }
    }

    #[inline]
    fn owned(&self, x: FieldElement) -> u32 {
        assert_eq!(x.ctx, self.id, "element used with a foreign field context");
        x.bits
    }

    // ---- raw kernels on bit patterns -------------------------------------

    #[inline]
    pub(crate) fn mul_raw(&self, a: u32, b: u32) -> u32 {
        let aw = a as u64;
        let mut bw = b;
        let mut acc = 0u64;
        while bw != 0 {
            let i = bw.trailing_zeros();
            acc ^= aw << i;
            bw &= bw - 1;
        }
        self.reduce_raw(acc)
    }

    /// Reduce a product of degree <= 62 modulo the field polynomial.
    #[inline]
    pub(crate) fn reduce_raw(&self, mut v: u64) -> u32 {
        let k = self.spec.degree;
        loop {
            let hi = v >> k;
            if hi == 0 {
                return v as u32;
            }
            v &= self.low_mask;
            let mut t = self.tail;
            while t != 0 {
                let i = t.trailing_zeros();
                v ^= hi << i;
                t &= t - 1;
            }
        }
    }

    #[inline]
    pub(crate) fn square_raw(&self, a: u32) -> u32 {
        self.mul_raw(a, a)
    }

    pub(crate) fn pow_raw(&self, x: u32, mut e: u64) -> u32 {
        let mut base = x;
        let mut acc = 1u32;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.square_raw(base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub(crate) fn inv_raw(&self, x: u32) -> u32 {
        debug_assert_ne!(x, 0);
        self.pow_raw(x, self.order - 1)
    }

    /// parity(x & mask), the workhorse of every character sum.
    #[inline]
    pub(crate) fn mask_parity(x: u32, mask: u32) -> u8 {
        ((x & mask).count_ones() & 1) as u8
    }

    #[inline]
    pub(crate) fn trace_raw(&self, x: u32) -> u8 {
        Self::mask_parity(x, self.trace_mask)
    }

    pub(crate) fn subfield_mask(&self, d: u32) -> Result<u32> {
        self.subfield_masks
            .iter()
            .find(|(dd, _)| *dd == d)
            .map(|(_, m)| *m)
            .ok_or(Error::InvalidSubfieldDegree(d))
    }

    /// Mask m_a with parity(y & m_a) = T(a*y) for all y, where T(z) =
    /// parity(z & t_mask). Turns per-element multiplications in character
    /// sums into single popcounts.
    pub(crate) fn linear_functional_mask(&self, a: u32, t_mask: u32) -> u32 {
        let mut m = 0u32;
        for j in 0..self.spec.degree {
            if Self::mask_parity(self.mul_raw(a, 1 << j), t_mask) == 1 {
                m |= 1 << j;
            }
        }
        m
    }

    // ---- public element arithmetic ---------------------------------------

    #[inline]
    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let (a, b) = (self.owned(x), self.owned(y));
        self.make(a ^ b)
    }

    #[inline]
    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let (a, b) = (self.owned(x), self.owned(y));
        self.make(self.mul_raw(a, b))
    }

    pub fn square(&self, x: FieldElement) -> FieldElement {
        let a = self.owned(x);
        self.make(self.square_raw(a))
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        let a = self.owned(x);
        if a == 0 {
            return Err(Error::NonInvertibleZero);
        }
        Ok(self.make(self.inv_raw(a)))
    }

    /// x^e with a full 64-bit exponent; the element order reduces it
    /// implicitly.
    pub fn pow(&self, x: FieldElement, e: u64) -> FieldElement {
        let a = self.owned(x);
        self.make(self.pow_raw(a, e))
    }

    /// x^(2^i), the i-fold Frobenius.
    pub fn frobenius(&self, x: FieldElement, i: u32) -> FieldElement {
        let mut a = self.owned(x);
        for _ in 0..(i % self.spec.degree) {
            a = self.square_raw(a);
        }
        self.make(a)
    }

    /// Absolute trace onto GF(2), as a bit.
    pub fn abs_trace(&self, x: FieldElement) -> u8 {
        let a = self.owned(x);
        self.trace_raw(a)
    }

    /// Trace onto the degree-d subfield: sum of x^(2^(d*i)) for i < k/d.
    pub fn rel_trace(&self, d: u32, x: FieldElement) -> Result<FieldElement> {
        let a = self.owned(x);
        if d == 0 || self.spec.degree % d != 0 {
            return Err(Error::InvalidSubfieldDegree(d));
        }
        Ok(self.make(self.rel_trace_raw(d, a)))
    }

    fn rel_trace_raw(&self, d: u32, x: u32) -> u32 {
        let mut acc = 0u32;
        let mut y = x;
        for _ in 0..self.spec.degree / d {
            acc ^= y;
            for _ in 0..d {
                y = self.square_raw(y);
            }
        }
        acc
    }

    /// Absolute trace of x viewed as an element of the degree-d subfield.
    /// Requires x to lie in that subfield.
    pub fn subfield_trace(&self, d: u32, x: FieldElement) -> Result<u8> {
        let a = self.owned(x);
        let mask = self.subfield_mask(d)?;
        if !self.in_subfield_raw(d, a) {
            return Err(Error::NotInSubfield(d));
        }
        Ok(Self::mask_parity(a, mask))
    }

    pub fn in_subfield(&self, d: u32, x: FieldElement) -> Result<bool> {
        let a = self.owned(x);
        if d == 0 || self.spec.degree % d != 0 {
            return Err(Error::InvalidSubfieldDegree(d));
        }
        Ok(self.in_subfield_raw(d, a))
    }

    pub(crate) fn in_subfield_raw(&self, d: u32, x: u32) -> bool {
        let mut y = x;
        for _ in 0..d {
            y = self.square_raw(y);
        }
        y == x
    }

    /// The 2^d elements of the degree-d subfield: 0 followed by the powers
    /// of gamma = g^((2^k-1)/(2^d-1)).
    pub fn subfield_elements(&self, d: u32) -> Result<SubfieldElements<'_>> {
        if d == 0 || self.spec.degree % d != 0 {
            return Err(Error::InvalidSubfieldDegree(d));
        }
        let sub_order = (1u64 << d) - 1;
        let gamma = self.pow_raw(self.generator_bits, self.order / sub_order);
        Ok(SubfieldElements {
            ctx: self,
            gamma,
            cur: 1,
            remaining: sub_order + 1,
            yielded_zero: false,
        })
    }

    /// The r-th roots of unity g^((2^k-1)/r * t), t = 0..r-1. Requires
    /// r | 2^k - 1.
    pub fn unity_roots(&self, r: u64) -> Result<UnityRoots<'_>> {
        if r == 0 || self.order % r != 0 {
            return Err(Error::OrderNotDividing(r));
        }
        let step = self.pow_raw(self.generator_bits, self.order / r);
        Ok(UnityRoots {
            ctx: self,
            step,
            cur: 1,
            remaining: r,
        })
    }

    // ---- construction helpers --------------------------------------------

    fn find_generator(&self) -> Result<u32> {
        'cand: for c in 2..=u64::from(self.elem_mask) {
            let c = c as u32;
            for (p, _) in &self.group_order_factors {
                if self.pow_raw(c, self.order / p) == 1 {
                    continue 'cand;
                }
            }
            return Ok(c);
        }
        Err(Error::InvalidFieldSpec(
            "no primitive element found (modulus is not irreducible)".into(),
        ))
    }

    /// Trace of a bit pattern by the Frobenius-sum definition; used only to
    /// seed the masks.
    fn trace_by_frobenius(&self, x: u32) -> u8 {
        let mut acc = 0u32;
        let mut y = x;
        for _ in 0..self.spec.degree {
            acc ^= y;
            y = self.square_raw(y);
        }
        debug_assert!(acc <= 1);
        (acc & 1) as u8
    }

    fn build_trace_mask(&self) -> u32 {
        let mut m = 0u32;
        for j in 0..self.spec.degree {
            if self.trace_by_frobenius(1 << j) == 1 {
                m |= 1 << j;
            }
        }
        m
    }

    /// For each divisor d of k, a mask md with parity(y & md) equal to the
    /// absolute trace of y within the degree-d subfield, valid for every y
    /// of that subfield. Built from a theta with Tr_d^k(theta) = 1, since
    /// Tr_1^d(y) = Tr_1^k(theta * y) on the subfield. Some basis vector has
    /// nonzero relative trace (they span the field), and Tr_d^k is
    /// GF(2^d)-linear, so normalizing that vector by its trace gives theta.
    fn build_subfield_masks(&self) -> Result<Vec<(u32, u32)>> {
        let k = self.spec.degree;
        let mut out = Vec::new();
        for d in 1..=k {
            if k % d != 0 {
                continue;
            }
            let mut theta = None;
            for j in 0..k {
                let s = self.rel_trace_raw(d, 1 << j);
                if s != 0 {
                    theta = Some(self.mul_raw(1 << j, self.inv_raw(s)));
                    break;
                }
            }
            let theta = theta.ok_or_else(|| {
                Error::InvalidFieldSpec("relative trace is degenerate".into())
            })?;
            debug_assert_eq!(self.rel_trace_raw(d, theta), 1);
            let mut m = 0u32;
            for j in 0..k {
                if self.trace_raw(self.mul_raw(theta, 1 << j)) == 1 {
                    m |= 1 << j;
                }
            }
            out.push((d, m));
        }
        Ok(out)
    }
}

/// Streaming enumeration of a subfield: 0, then gamma^0 .. gamma^(2^d-2).
pub struct SubfieldElements<'a> {
    ctx: &'a FieldCtx,
    gamma: u32,
    cur: u32,
    remaining: u64,
    yielded_zero: bool,
}

impl<'a> Iterator for SubfieldElements<'a> {
    type Item = FieldElement;

    fn next(&mut self) -> Option<FieldElement> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        if !self.yielded_zero {
            self.yielded_zero = true;
            return Some(self.ctx.make(0));
        }
        let out = self.ctx.make(self.cur);
        self.cur = self.ctx.mul_raw(self.cur, self.gamma);
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining as usize, Some(self.remaining as usize))
    }
}

impl<'a> ExactSizeIterator for SubfieldElements<'a> {}

/// The r-th roots of unity as consecutive powers of a fixed step.
pub struct UnityRoots<'a> {
    ctx: &'a FieldCtx,
    step: u32,
    cur: u32,
    remaining: u64,
}

impl<'a> Iterator for UnityRoots<'a> {
    type Item = FieldElement;

    fn next(&mut self) -> Option<FieldElement> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let out = self.ctx.make(self.cur);
        self.cur = self.ctx.mul_raw(self.cur, self.step);
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining as usize, Some(self.remaining as usize))
    }
}

impl<'a> ExactSizeIterator for UnityRoots<'a> {}

fn factor_by_trial_division(mut n: u64) -> Vec<(u64, u32)> {
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
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_gf16_generator_has_order_15() {
        let f = FieldCtx::new(4, None).unwrap();
        assert_eq!(f.modulus(), 0x13);
        let g = f.generator();
        assert_eq!(f.pow(g, 15).bits(), 1);
        for d in [3u64, 5] {
            assert_ne!(f.pow(g, d).bits(), 1);
        }
    }

    #[test]
    fn gf12_group_order_factors() {
        let f = FieldCtx::new(12, None).unwrap();
        assert_eq!(f.group_order_factors(), &[(3, 2), (5, 1), (7, 1), (13, 1)]);
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^4 + x^2 = x^2 (x^2 + 1)
        assert!(matches!(
            FieldCtx::new(4, Some(0x14)),
            Err(Error::InvalidFieldSpec(_))
        ));
    }

    #[test]
    fn out_of_range_degrees_rejected() {
        assert!(matches!(FieldCtx::new(1, None), Err(Error::DegreeUnsupported(1))));
        assert!(matches!(FieldCtx::new(33, None), Err(Error::DegreeUnsupported(33))));
    }

    #[test]
    fn char_two_addition_and_frobenius_fixpoints() {
        let f = FieldCtx::new(6, None).unwrap();
        for bits in 0..64u32 {
            let x = f.element(bits).unwrap();
            assert!(f.add(x, x).is_zero());
            assert_eq!(f.pow(x, 64), x, "x^(2^k) == x");
        }
    }

    #[test]
    fn generator_power_order() {
        for k in [2u32, 5, 8, 12] {
            let f = FieldCtx::new(k, None).unwrap();
            let g = f.generator();
            assert_eq!(f.pow(g, f.order()).bits(), 1);
        }
    }

    #[test]
    fn inverse_of_zero_fails() {
        let f = FieldCtx::new(5, None).unwrap();
        assert_eq!(f.inv(f.zero()), Err(Error::NonInvertibleZero));
    }

    #[test]
    fn trace_of_fifth_root_in_gf16() {
        let f = FieldCtx::new(4, None).unwrap();
        let beta = f.unity_roots(5).unwrap().nth(1).unwrap();
        assert_ne!(beta.bits(), 1);
        assert_eq!(f.pow(beta, 5).bits(), 1);
        assert_eq!(f.abs_trace(beta), 1);
    }

    #[test]
    fn trace_frobenius_invariance() {
        let f = FieldCtx::new(9, None).unwrap();
        for bits in 0..512u32 {
            let x = f.element(bits).unwrap();
            assert_eq!(f.abs_trace(x), f.abs_trace(f.square(x)));
        }
    }

    #[test]
    fn trace_vanishes_on_half_degree_subfield() {
        let f = FieldCtx::new(12, None).unwrap();
        for x in f.subfield_elements(6).unwrap() {
            assert_eq!(f.abs_trace(x), 0);
        }
    }

    #[test]
    fn rel_trace_identity_and_transitivity() {
        let f = FieldCtx::new(12, None).unwrap();
        for bits in (0..4096u32).step_by(17) {
            let x = f.element(bits).unwrap();
            assert_eq!(f.rel_trace(12, x).unwrap(), x);
            // abs o rel == abs
            let r = f.rel_trace(4, x).unwrap();
            assert_eq!(f.subfield_trace(4, r).unwrap(), f.abs_trace(x));
            let r6 = f.rel_trace(6, x).unwrap();
            assert_eq!(f.subfield_trace(6, r6).unwrap(), f.abs_trace(x));
        }
    }

    #[test]
    fn rel_trace_lands_in_subfield() {
        let f = FieldCtx::new(12, None).unwrap();
        for bits in 0..4096u32 {
            let x = f.element(bits).unwrap();
            let r = f.rel_trace(6, x).unwrap();
            assert!(f.in_subfield(6, r).unwrap());
        }
    }

    #[test]
    fn rel_trace_rejects_non_divisor() {
        let f = FieldCtx::new(12, None).unwrap();
        assert!(matches!(
            f.rel_trace(5, f.one()),
            Err(Error::InvalidSubfieldDegree(5))
        ));
    }

    #[test]
    fn subfield_enumeration_shapes() {
        let f = FieldCtx::new(12, None).unwrap();
        assert_eq!(f.subfield_elements(12).unwrap().count(), 4096);
        let bits: Vec<u32> = f.subfield_elements(1).unwrap().map(|e| e.bits()).collect();
        assert_eq!(bits, vec![0, 1]);
        let sub: Vec<FieldElement> = f.subfield_elements(6).unwrap().collect();
        assert_eq!(sub.len(), 64);
        for &x in &sub {
            assert_eq!(f.pow(x, 64), x, "Frobenius^6 fixed");
        }
    }

    #[test]
    fn unity_roots_shapes() {
        let f = FieldCtx::new(12, None).unwrap();
        let ones: Vec<u32> = f.unity_roots(1).unwrap().map(|e| e.bits()).collect();
        assert_eq!(ones, vec![1]);
        let u: Vec<FieldElement> = f.unity_roots(65).unwrap().collect();
        assert_eq!(u.len(), 65);
        for &x in &u {
            assert_eq!(f.pow(x, 65).bits(), 1);
        }
        // mu_5 lies in the GF(16) subfield
        for x in f.unity_roots(5).unwrap() {
            assert!(f.in_subfield(4, x).unwrap());
        }
        assert!(matches!(f.unity_roots(64), Err(Error::OrderNotDividing(64))));
    }

    #[test]
    fn hex_roundtrip() {
        let f = FieldCtx::new(12, None).unwrap();
        let x = f.element(0xabc).unwrap();
        assert_eq!(x.to_hex(), "abc");
        assert_eq!(f.parse_element("abc").unwrap(), x);
        assert_eq!(f.parse_element("0xabc").unwrap(), x);
        assert!(f.parse_element("1000").is_err());
    }

    #[test]
    fn degree_32_field_works() {
        let f = FieldCtx::new(32, None).unwrap();
        let g = f.generator();
        assert_eq!(f.pow(g, f.order()).bits(), 1);
        let x = f.element(0xdead_beef).unwrap();
        let xi = f.inv(x).unwrap();
        assert_eq!(f.mul(x, xi).bits(), 1);
        assert!(f.abs_trace(x) <= 1);
    }

    #[test]
    #[should_panic(expected = "foreign field context")]
    fn cross_context_arithmetic_panics() {
        let f1 = FieldCtx::new(4, None).unwrap();
        let f2 = FieldCtx::new(4, None).unwrap();
        let _ = f1.add(f1.one(), f2.one());
    }
}
