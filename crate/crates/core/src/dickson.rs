//! Dickson polynomials over GF(2): coefficients by the three-term
//! recurrence, evaluation, the preimage-count law, and the coset-sum
//! identity that rewrites sums over the unit circle U as Dickson sums over
//! the half-degree subfield.

use std::sync::{Arc, OnceLock};

use num_integer::gcd;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::poly::quadratic_reducible;

/// Largest supported index; only small indices ever appear.
pub const MAX_INDEX: u32 = 64;

/// D_r over GF(2) as a coefficient bit-vector (bit j = coefficient of x^j).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DicksonPoly {
    r: u32,
    coeffs: u128,
}

impl DicksonPoly {
    pub fn index(&self) -> u32 {
        self.r
    }

    pub fn coeff_bits(&self) -> u128 {
        self.coeffs
    }

    pub fn degree(&self) -> u32 {
        127 - self.coeffs.leading_zeros()
    }
}

fn coeff_table() -> &'static Vec<u128> {
    static TABLE: OnceLock<Vec<u128>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // D_0 = 0, D_1 = x, D_{i+2} = x D_{i+1} + D_i
        let mut t = Vec::with_capacity(MAX_INDEX as usize + 1);
        t.push(0u128);
        t.push(2u128);
        for i in 2..=MAX_INDEX as usize {
            let next = (t[i - 1] << 1) ^ t[i - 2];
            t.push(next);
        }
        t
    })
}

/// The r-th Dickson polynomial, r <= 64.
pub fn dickson(r: u32) -> DicksonPoly {
    assert!(r <= MAX_INDEX, "Dickson index {r} exceeds the supported bound");
    DicksonPoly {
        r,
        coeffs: coeff_table()[r as usize],
    }
}

/// D_r(x) over x's field, evaluated from the cached coefficients.
pub fn dickson_eval(r: u32, ctx: &FieldCtx, x: FieldElement) -> FieldElement {
    assert_eq!(x.ctx_id(), ctx.id(), "element used with a foreign field context");
    let mut bits = dickson(r).coeffs;
    let mut acc = 0u32;
    let mut power = 1u32; // x^j as j counts up
    while bits != 0 {
        if bits & 1 == 1 {
            acc ^= power;
        }
        bits >>= 1;
        if bits != 0 {
            power = ctx.mul_raw(power, x.bits());
        }
    }
    ctx.element(acc).expect("reduced")
}

/// Preimage-count law for D_k on GF(2^m) (m = ctx degree): the number of x
/// with D_k(x) = D_k(x0) is d1 = gcd(k, 2^m-1) when x^2 + x0 x + 1 is
/// reducible and y0 != 0, d2 = gcd(k, 2^m+1) when it is irreducible and
/// y0 != 0, and (d1+d2)/2 when y0 = 0. Counted by brute force against the
/// formula. (Reducible x0 puts the torus parameter in the split torus
/// GF(2^m)*, where the k-power map is d1-to-1.)
pub fn preimage_count_matches(ctx: &Arc<FieldCtx>, k: u32, x0: FieldElement) -> Result<bool> {
    if x0.ctx_id() != ctx.id() {
        return Err(Error::ContextMismatch);
    }
    let m = ctx.degree();
    let y0 = dickson_eval(k, ctx, x0);
    let mut count = 0u64;
    for bits in 0..=ctx.order() {
        let x = ctx.element(bits as u32).expect("in range");
        if dickson_eval(k, ctx, x) == y0 {
            count += 1;
        }
    }
    let d1 = gcd(u64::from(k), (1u64 << m) - 1);
    let d2 = gcd(u64::from(k), (1u64 << m) + 1);
    let expected = if y0.is_zero() {
        (d1 + d2) / 2
    } else {
        // y0 != 0 forces x0 != 0, so the quadratic criterion applies
        if quadratic_reducible(ctx, m, x0)? {
            d1
        } else {
            d2
        }
    };
    Ok(count == expected)
}

/// Both sides of the coset-sum identity on the ambient field GF(2^n),
/// n = 2m: sum over the unit circle U of (-1)^Tr(a u^(p(2^m-1))) versus
/// 1 + 2 sum over {x in GF(2^m)*: Tr_m(1/x) = 1} of (-1)^Tr_m(a D_p(x)).
pub fn coset_sum_sides(ctx: &Arc<FieldCtx>, p: u32, a: FieldElement) -> Result<(i64, i64)> {
    let n = ctx.degree();
    if n % 2 != 0 {
        return Err(Error::InvalidInput("coset sum needs an even-degree field".into()));
    }
    let m = n / 2;
    if a.ctx_id() != ctx.id() {
        return Err(Error::ContextMismatch);
    }
    if a.is_zero() {
        return Err(Error::NonInvertibleZero);
    }
    if !ctx.in_subfield(m, a)? {
        return Err(Error::NotInSubfield(m));
    }
    let u_order = (1u64 << m) + 1;
    let n_mask = ctx.linear_functional_mask(a.bits(), ctx.subfield_mask(n)?);

    // left side: u = rho^t walks U; u^(p(2^m-1)) = tau^t
    let rho = ctx.pow_raw(ctx.generator().bits(), ctx.order() / u_order);
    let tau = ctx.pow_raw(rho, u64::from(p) * ((1u64 << m) - 1));
    let mut lhs = 0i64;
    let mut cur = 1u32;
    for _ in 0..u_order {
        lhs += 1 - 2 * i64::from(FieldCtx::mask_parity(cur, n_mask));
        cur = ctx.mul_raw(cur, tau);
    }

    // right side over the subfield
    let m_mask = ctx.subfield_mask(m)?;
    let a_mask = ctx.linear_functional_mask(a.bits(), m_mask);
    let sub_order = (1u64 << m) - 1;
    let gamma = ctx.pow_raw(ctx.generator().bits(), ctx.order() / sub_order);
    let gamma_inv = ctx.pow_raw(gamma, sub_order - 1);
    let mut rhs = 1i64;
    let (mut x, mut xinv) = (1u32, 1u32);
    for _ in 0..sub_order {
        if FieldCtx::mask_parity(xinv, m_mask) == 1 {
            let xe = ctx.element(x).expect("reduced");
            let d = dickson_eval(p, ctx, xe);
            rhs += 2 * (1 - 2 * i64::from(FieldCtx::mask_parity(d.bits(), a_mask)));
        }
        x = ctx.mul_raw(x, gamma);
        xinv = ctx.mul_raw(xinv, gamma_inv);
    }
    Ok((lhs, rhs))
}

pub fn coset_sum_identity_holds(ctx: &Arc<FieldCtx>, p: u32, a: FieldElement) -> Result<bool> {
    let (lhs, rhs) = coset_sum_sides(ctx, p, a)?;
    Ok(lhs == rhs)
}

/// Named identity checks driven by one field, for the CLI verify command.
pub fn identity_report(ctx: &Arc<FieldCtx>) -> Result<Vec<(String, bool)>> {
    let m = ctx.degree();
    let mut out = Vec::new();

    // deg D_r = r
    out.push((
        "degree equals index (r <= 64)".into(),
        (1..=MAX_INDEX).all(|r| dickson(r).degree() == r),
    ));

    // D_r(y + 1/y) = y^r + y^(-r)
    let mut ok = true;
    'outer: for r in 1..=11u32 {
        for bits in 1..=(ctx.order().min(255)) {
            let y = ctx.element(bits as u32).expect("in range");
            let yi = ctx.inv(y).expect("nonzero");
            let lhs = dickson_eval(r, ctx, ctx.add(y, yi));
            let rhs = ctx.add(ctx.pow(y, u64::from(r)), ctx.pow(yi, u64::from(r)));
            if lhs != rhs {
                ok = false;
                break 'outer;
            }
        }
    }
    out.push(("functional identity D_r(y + 1/y) = y^r + y^-r".into(), ok));

    // D_rp = D_r o D_p
    let mut ok = true;
    for (r, p) in [(3u32, 5u32), (5, 7)] {
        for bits in 0..=ctx.order().min(4095) {
            let x = ctx.element(bits as u32).expect("in range");
            if dickson_eval(r * p, ctx, x) != dickson_eval(r, ctx, dickson_eval(p, ctx, x)) {
                ok = false;
            }
        }
    }
    out.push(("composition D_rp = D_r(D_p)".into(), ok));

    // preimage law, k = 5 exhaustive over x0 (plus k = 1 sanity)
    let mut ok = true;
    for k in [1u32, 5] {
        for bits in 0..=ctx.order() {
            let x0 = ctx.element(bits as u32).expect("in range");
            if !preimage_count_matches(ctx, k, x0)? {
                ok = false;
            }
        }
    }
    out.push(("preimage-count law (k in {1, 5})".into(), ok));

    // trace preservation under D_5 and permutation of the trace-0 set
    let mut preserved = true;
    let mut image = Vec::new();
    let mut domain = Vec::new();
    for bits in 1..=ctx.order() {
        let x = ctx.element(bits as u32).expect("in range");
        let d5 = dickson_eval(5, ctx, x);
        if !d5.is_zero() {
            let tx = ctx.abs_trace(ctx.inv(x).expect("nonzero"));
            let td = ctx.abs_trace(ctx.inv(d5).expect("nonzero"));
            if tx != td {
                preserved = false;
            }
        }
        if ctx.abs_trace(ctx.inv(x).expect("nonzero")) == 0 {
            domain.push(x.bits());
            image.push(dickson_eval(5, ctx, x).bits());
        }
    }
    out.push((format!("Tr(1/D_5(x)) = Tr(1/x) on GF(2^{m})*"), preserved));
    domain.sort_unstable();
    image.sort_unstable();
    out.push((
        "D_5 permutes the inverse-trace-0 set".into(),
        domain == image,
    ));

    Ok(out)
}
