//! Univariate polynomials over GF(2^k) and the distinct-degree machinery for
//! the quintic x^5 + x + a^{-1}.
//!
//! Factorization is pattern-only: the quintic is squarefree whenever a != 0
//! (it has no root at 1 since P(1) = a^{-1} != 0 while P' = (x+1)^4), so a
//! gcd with x^(q^d) - x for d = 1, 2 plus the remaining degree pins the
//! multiset of factor degrees without ever splitting factors.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};

/// A polynomial with coefficients in one field context; index = degree,
/// no trailing zero coefficients.
#[derive(Clone)]
pub struct Poly {
    ctx: Arc<FieldCtx>,
    coeffs: Vec<u32>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.id() == other.ctx.id() && self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl fmt::Display for Poly {
    /// "c_d x^d + ... + c_0" with hex coefficients, zero terms omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "{c:x}")?,
                1 => write!(f, "{c:x} x")?,
                _ => write!(f, "{c:x} x^{d}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn new(ctx: &Arc<FieldCtx>, coeffs: Vec<FieldElement>) -> Result<Poly> {
        let mut bits = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            if c.ctx_id() != ctx.id() {
                return Err(Error::ContextMismatch);
            }
            bits.push(c.bits());
        }
        let mut p = Poly {
            ctx: Arc::clone(ctx),
            coeffs: bits,
        };
        p.normalize();
        Ok(p)
    }

    pub(crate) fn from_bits(ctx: &Arc<FieldCtx>, coeffs: Vec<u32>) -> Poly {
        let mut p = Poly {
            ctx: Arc::clone(ctx),
            coeffs,
        };
        p.normalize();
        p
    }

    pub fn zero(ctx: &Arc<FieldCtx>) -> Poly {
        Poly {
            ctx: Arc::clone(ctx),
            coeffs: Vec::new(),
        }
    }

    /// The monomial x^d.
    pub fn x_power(ctx: &Arc<FieldCtx>, d: usize) -> Poly {
        let mut coeffs = vec![0u32; d + 1];
        coeffs[d] = 1;
        Poly {
            ctx: Arc::clone(ctx),
            coeffs,
        }
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, d: usize) -> FieldElement {
        self.ctx
            .element(self.coeffs.get(d).copied().unwrap_or(0))
            .expect("stored coefficient is valid")
    }

    pub fn eval(&self, x: FieldElement) -> Result<FieldElement> {
        if x.ctx_id() != self.ctx.id() {
            return Err(Error::ContextMismatch);
        }
        let mut acc = 0u32;
        for &c in self.coeffs.iter().rev() {
            acc = self.ctx.mul_raw(acc, x.bits()) ^ c;
        }
        Ok(self.ctx.element(acc).expect("reduced"))
    }

    fn check_ctx(&self, other: &Poly) -> Result<()> {
        if self.ctx.id() != other.ctx.id() {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_ctx(other)?;
        let mut coeffs = vec![0u32; self.coeffs.len().max(other.coeffs.len())];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i] ^= c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            coeffs[i] ^= c;
        }
        Ok(Poly::from_bits(&self.ctx, coeffs))
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_ctx(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.ctx));
        }
        let mut coeffs = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b != 0 {
                    coeffs[i + j] ^= self.ctx.mul_raw(a, b);
                }
            }
        }
        Ok(Poly::from_bits(&self.ctx, coeffs))
    }

    /// Quotient and remainder; errors on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check_ctx(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() < divisor.coeffs.len() {
            return Ok((Poly::zero(&self.ctx), self.clone()));
        }
        let lead_inv = self.ctx.inv_raw(*divisor.coeffs.last().expect("nonzero"));
        let mut rem = self.coeffs.clone();
        let mut quo = vec![0u32; rem.len() - dd];
        while rem.len() > dd {
            let lead = *rem.last().expect("nonempty");
            if lead != 0 {
                let sh = rem.len() - 1 - dd;
                let c = self.ctx.mul_raw(lead, lead_inv);
                quo[sh] = c;
                for (i, &b) in divisor.coeffs.iter().enumerate() {
                    if b != 0 {
                        rem[sh + i] ^= self.ctx.mul_raw(c, b);
                    }
                }
            }
            rem.pop();
        }
        Ok((
            Poly::from_bits(&self.ctx, quo),
            Poly::from_bits(&self.ctx, rem),
        ))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Scale so the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.coeffs.last() {
            None | Some(1) => self.clone(),
            Some(&lead) => {
                let li = self.ctx.inv_raw(lead);
                let coeffs = self.coeffs.iter().map(|&c| self.ctx.mul_raw(c, li)).collect();
                Poly::from_bits(&self.ctx, coeffs)
            }
        }
    }

    /// Monic gcd; gcd(p, 0) is the monic multiple of p.
    pub fn monic_gcd(&self, other: &Poly) -> Result<Poly> {
        self.check_ctx(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Formal derivative; in characteristic 2 only odd-degree terms survive.
    pub fn derivative(&self) -> Poly {
        let coeffs: Vec<u32> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(d, &c)| if d % 2 == 1 { c } else { 0 })
            .collect();
        Poly::from_bits(&self.ctx, coeffs)
    }
}

/// Multiset of irreducible-factor degrees of a squarefree polynomial,
/// degree -> number of distinct factors of that degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactorPattern {
    counts: BTreeMap<u32, u32>,
}

impl FactorPattern {
    pub fn from_pairs(pairs: &[(u32, u32)]) -> FactorPattern {
        let mut counts = BTreeMap::new();
        for &(d, c) in pairs {
            if c > 0 {
                *counts.entry(d).or_insert(0) += c;
            }
        }
        FactorPattern { counts }
    }

    pub fn counts(&self) -> &BTreeMap<u32, u32> {
        &self.counts
    }

    pub fn total_degree(&self) -> u32 {
        self.counts.iter().map(|(d, c)| d * c).sum()
    }

    /// The four rows possible for x^5 + x + a^{-1} over GF(2^m), m even.
    pub fn even_m_rows() -> [FactorPattern; 4] {
        [
            FactorPattern::from_pairs(&[(5, 1)]),
            FactorPattern::from_pairs(&[(1, 2), (3, 1)]),
            FactorPattern::from_pairs(&[(1, 1), (2, 2)]),
            FactorPattern::from_pairs(&[(1, 5)]),
        ]
    }

    /// The three rows possible for odd m.
    pub fn odd_m_rows() -> [FactorPattern; 3] {
        [
            FactorPattern::from_pairs(&[(1, 1), (4, 1)]),
            FactorPattern::from_pairs(&[(2, 1), (3, 1)]),
            FactorPattern::from_pairs(&[(1, 3), (2, 1)]),
        ]
    }
}

impl fmt::Display for FactorPattern {
    /// "(1)(2)^2" style, ascending degree, exponent = count of distinct
    /// factors.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.counts.is_empty() {
            return write!(f, "()");
        }
        for (&d, &c) in &self.counts {
            write!(f, "({d})")?;
            if c > 1 {
                write!(f, "^{c}")?;
            }
        }
        Ok(())
    }
}

/// x^((2^m)^d) mod p, by m*d repeated squarings of the residue. The subfield
/// size 2^m may be smaller than the coefficient field when p lives over a
/// subfield.
pub fn frobenius_power_x(m: u32, d: u32, p: &Poly) -> Result<Poly> {
    if p.degree().unwrap_or(0) == 0 {
        return Err(Error::InvalidInput(
            "frobenius power needs a nonconstant modulus".into(),
        ));
    }
    let mut h = Poly::x_power(p.ctx(), 1).rem(p)?;
    for _ in 0..m * d {
        h = h.mul(&h)?.rem(p)?;
    }
    Ok(h)
}

/// Factor-degree pattern of x^5 + x + a^{-1} over the degree-m subfield of
/// a's context. All coefficients stay inside the subfield, so the whole
/// computation runs in the ambient context.
pub fn quintic_pattern(ctx: &Arc<FieldCtx>, m: u32, a: FieldElement) -> Result<FactorPattern> {
    if a.ctx_id() != ctx.id() {
        return Err(Error::ContextMismatch);
    }
    if a.is_zero() {
        return Err(Error::NonInvertibleZero);
    }
    if !ctx.in_subfield(m, a)? {
        return Err(Error::NotInSubfield(m));
    }
    let c = ctx.inv(a)?;
    let p = Poly::new(
        ctx,
        vec![c, ctx.one(), ctx.zero(), ctx.zero(), ctx.zero(), ctx.one()],
    )?;
    let x = Poly::x_power(ctx, 1);

    // distinct linear factors
    let h1 = frobenius_power_x(m, 1, &p)?;
    let g1 = p.monic_gcd(&h1.add(&x)?)?;
    let c1 = g1.degree().unwrap_or(0) as u32;
    let p1 = exact_quotient(&p, &g1)?;

    let mut pairs = vec![(1u32, c1)];
    let d1 = p1.degree().unwrap_or(0) as u32;
    if d1 >= 2 {
        // distinct quadratic factors of the linear-free part
        let h2 = frobenius_power_x(m, 2, &p1)?;
        let g2 = p1.monic_gcd(&h2.add(&x)?)?;
        let deg2 = g2.degree().unwrap_or(0) as u32;
        debug_assert_eq!(deg2 % 2, 0, "no linear factors remain");
        pairs.push((2, deg2 / 2));
        let p2 = exact_quotient(&p1, &g2)?;
        if let Some(rd) = p2.degree().filter(|&d| d > 0) {
            // a single factor: two factors of degree >= 3 cannot fit in 5
            pairs.push((rd as u32, 1));
        }
    }
    let pat = FactorPattern::from_pairs(&pairs);
    debug_assert_eq!(pat.total_degree(), 5);
    Ok(pat)
}

fn exact_quotient(p: &Poly, d: &Poly) -> Result<Poly> {
    let (q, r) = p.div_rem(d)?;
    debug_assert!(r.is_zero(), "quotient by a known factor is exact");
    Ok(q)
}

/// Whether x^2 + x0 x + 1 splits over the degree-m subfield, by the trace
/// criterion: reducible iff Tr_1^m(1/x0) = 0.
pub fn quadratic_reducible(ctx: &Arc<FieldCtx>, m: u32, x0: FieldElement) -> Result<bool> {
    if x0.ctx_id() != ctx.id() {
        return Err(Error::ContextMismatch);
    }
    if x0.is_zero() {
        return Err(Error::NonInvertibleZero);
    }
    if !ctx.in_subfield(m, x0)? {
        return Err(Error::NotInSubfield(m));
    }
    Ok(ctx.subfield_trace(m, ctx.inv(x0)?)? == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;

    fn gf64() -> Arc<FieldCtx> {
        FieldCtx::new(6, None).unwrap()
    }

    #[test]
    fn display_and_basic_arith() {
        let f = gf64();
        let p = Poly::new(&f, vec![f.element(0x2a).unwrap(), f.one(), f.zero(), f.one()]).unwrap();
        assert_eq!(p.to_string(), "1 x^3 + 1 x + 2a");
        assert_eq!(Poly::zero(&f).to_string(), "0");

        // (x+1)(x+1) = x^2+1
        let x1 = Poly::new(&f, vec![f.one(), f.one()]).unwrap();
        let sq = x1.mul(&x1).unwrap();
        assert_eq!(sq, Poly::new(&f, vec![f.one(), f.zero(), f.one()]).unwrap());
    }

    #[test]
    fn derivative_of_quintic_is_fourth_power() {
        let f = gf64();
        let c = f.element(0x17).unwrap();
        let p = Poly::new(&f, vec![c, f.one(), f.zero(), f.zero(), f.zero(), f.one()]).unwrap();
        let d = p.derivative();
        // x^4 + 1
        assert_eq!(
            d,
            Poly::new(&f, vec![f.one(), f.zero(), f.zero(), f.zero(), f.one()]).unwrap()
        );
        // and gcd(p, p') = 1: p is squarefree for every nonzero constant term
        assert_eq!(p.monic_gcd(&d).unwrap().degree(), Some(0));
    }

    #[test]
    fn gcd_with_zero_is_monic_input() {
        let f = gf64();
        let two = f.element(2).unwrap();
        let p = Poly::new(&f, vec![f.one(), two]).unwrap();
        let g = p.monic_gcd(&Poly::zero(&f)).unwrap();
        assert_eq!(g.coeff(1).bits(), 1);
        assert_eq!(g.degree(), Some(1));
        assert!(g.eval(f.inv(two).unwrap()).unwrap().is_zero() == (p.eval(f.inv(two).unwrap()).unwrap().is_zero()));
    }

    #[test]
    fn rem_by_zero_fails() {
        let f = gf64();
        let p = Poly::x_power(&f, 2);
        assert!(matches!(p.rem(&Poly::zero(&f)), Err(Error::DivisionByZeroPoly)));
    }

    #[test]
    fn frobenius_power_examples() {
        // over GF(2): d=1, p = x -> 0; p = x^2+x+1: x^2 mod p = x+1
        let f2 = FieldCtx::new(2, None).unwrap();
        let x = Poly::x_power(&f2, 1);
        assert!(frobenius_power_x(1, 1, &x).unwrap().is_zero());
        let p = Poly::new(&f2, vec![f2.one(), f2.one(), f2.one()]).unwrap();
        let h = frobenius_power_x(1, 1, &p).unwrap();
        assert_eq!(h, Poly::new(&f2, vec![f2.one(), f2.one()]).unwrap());
        // reduction contract
        let f = gf64();
        let p5 = Poly::new(
            &f,
            vec![f.element(9).unwrap(), f.one(), f.zero(), f.zero(), f.zero(), f.one()],
        )
        .unwrap();
        let h = frobenius_power_x(6, 2, &p5).unwrap();
        assert!(h.degree().unwrap() < 5);
    }

    #[test]
    fn quintic_pattern_rejects_zero() {
        let f = gf64();
        assert!(matches!(
            quintic_pattern(&f, 6, f.zero()),
            Err(Error::NonInvertibleZero)
        ));
    }

    #[test]
    fn quintic_patterns_land_in_even_rows() {
        let f = gf64();
        let rows = FactorPattern::even_m_rows();
        for bits in 1..64u32 {
            let a = f.element(bits).unwrap();
            let pat = quintic_pattern(&f, 6, a).unwrap();
            assert_eq!(pat.total_degree(), 5);
            assert!(rows.contains(&pat), "a={bits:#x} gave {pat}");
        }
    }

    #[test]
    fn quintic_patterns_land_in_odd_rows() {
        let f = FieldCtx::new(7, None).unwrap();
        let rows = FactorPattern::odd_m_rows();
        for bits in 1..128u32 {
            let a = f.element(bits).unwrap();
            let pat = quintic_pattern(&f, 7, a).unwrap();
            assert!(rows.contains(&pat), "a={bits:#x} gave {pat}");
        }
    }

    #[test]
    fn pattern_display_matches_notation() {
        assert_eq!(FactorPattern::from_pairs(&[(1, 1), (2, 2)]).to_string(), "(1)(2)^2");
        assert_eq!(FactorPattern::from_pairs(&[(5, 1)]).to_string(), "(5)");
        assert_eq!(FactorPattern::from_pairs(&[(1, 3), (2, 1)]).to_string(), "(1)^3(2)");
    }

    #[test]
    fn quadratic_reducible_trace_one() {
        // m even: Tr(1) = 0 so x^2+x+1 splits; over GF(2^7) it does not
        let f6 = gf64();
        assert!(quadratic_reducible(&f6, 6, f6.one()).unwrap());
        let f7 = FieldCtx::new(7, None).unwrap();
        assert!(!quadratic_reducible(&f7, 7, f7.one()).unwrap());
    }

    #[test]
    fn quadratic_reducible_matches_root_search() {
        let f = gf64();
        for bits in 1..64u32 {
            let x0 = f.element(bits).unwrap();
            let red = quadratic_reducible(&f, 6, x0).unwrap();
            let mut has_root = false;
            for cand in 0..64u32 {
                let x = f.element(cand).unwrap();
                // x^2 + x0 x + 1
                let v = f.add(f.add(f.square(x), f.mul(x0, x)), f.one());
                if v.is_zero() {
                    has_root = true;
                    break;
                }
            }
            assert_eq!(red, has_root, "x0={bits:#x}");
        }
    }
}
