//! The binomial trace family on GF(2^n), n = 2m, m ≡ 2 (mod 4):
//!
//!   f_{a,b}(x) = Tr_1^n(a x^(2^m-1)) + Tr_1^4(b x^((2^n-1)/5)),
//!
//! a in GF(2^m), b in GF(16). Members are constant on cosets of the group
//! generated by alpha^(2^m+1), so hyper-bentness reduces to the character
//! sum Lambda(a,b) over the unit circle U of (2^m+1)-th roots of unity:
//! f_{a,b} is hyper-bent iff Lambda(a,b) = 1.
//!
//! Lambda is computed by three independent routes that the search
//! cross-checks against each other:
//!   - direct: summation of chi(f(u)) over U;
//!   - s-sums: the linear combination of the partial sums S_0..S_4 over
//!     the index-5 subgroup V;
//!   - closed: expressions in the Kloosterman sum K_m(a) and Weil sum
//!     Q_m(a), available for b in {0, 1}, for b with b^4 + b + 1 = 0, and
//!     for every b when a lies in the half-degree subfield GF(2^(m/2)).

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::boolfn::{u_weight_hyperbent_test, BooleanFunction, TraceTerm};
use crate::error::{Error, Result};
use crate::expsums::{kloosterman, kloosterman_in_range, weil_q};
use crate::field::{FieldCtx, FieldElement};
use crate::poly::{quintic_pattern, FactorPattern};

/// Method selector for the hyper-bentness verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaMethod {
    Direct,
    SSums,
    Closed,
    Definitional,
}

impl LambdaMethod {
    pub fn parse(s: &str) -> Result<LambdaMethod> {
        match s {
            "direct" => Ok(LambdaMethod::Direct),
            "s-sums" | "ssums" | "sums" => Ok(LambdaMethod::SSums),
            "closed" => Ok(LambdaMethod::Closed),
            "definitional" => Ok(LambdaMethod::Definitional),
            _ => Err(Error::InvalidInput(format!("unknown method {s:?}"))),
        }
    }
}

/// The five partial sums S_0..S_4 over V and their total Lambda(a, 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CharacterSums {
    pub s: [i64; 5],
    pub lambda0: i64,
}

/// One (a, b) verdict with every cross-check value attached.
#[derive(Debug, Clone, Serialize)]
pub struct SearchRecord {
    pub schema: u32,
    pub n: u32,
    pub a_hex: String,
    pub b_coords: String,
    pub b_name: String,
    #[serde(rename = "K")]
    pub k: i64,
    #[serde(rename = "Q")]
    pub q: Option<i64>,
    pub pattern: Option<String>,
    pub lambda_direct: i64,
    pub lambda_s_sums: i64,
    pub lambda_closed: Option<i64>,
    pub hyperbent: bool,
    pub ps_ap: bool,
}

/// Family parameters plus the precomputed walks all sums share.
pub struct FamilyParams {
    n: u32,
    m: u32,
    m1: u32,
    ctx: Arc<FieldCtx>,
    alpha: FieldElement,
    xi: FieldElement,
    beta: FieldElement,
    u_order: u64,
    v_order: u64,
    /// (xi^i)^(2^m-1) for i = 0..=2^m
    u_dillon: Vec<u32>,
    /// beta^j for j = 0..4
    beta_pows: [FieldElement; 5],
    /// coordinate c (bits c0..c3 over basis {1, beta, beta^2, beta^3}) -> b
    b_elems: [FieldElement; 16],
    /// b bit pattern -> coordinate
    b_index: HashMap<u32, u8>,
    /// Tr_1^4(b(c) beta^j)
    tr4b: [[u8; 5]; 16],
    /// coordinates whose element satisfies b^4 + b + 1 = 0
    prim_tr0: Vec<u8>,
}

impl FamilyParams {
    pub fn new(n: u32) -> Result<Arc<FamilyParams>> {
        if ![12, 20, 28].contains(&n) {
            return Err(Error::UnsupportedN(n));
        }
        Self::with_ctx(FieldCtx::new(n, None)?)
    }

    /// Build over a caller-supplied context (e.g. a nondefault modulus).
    pub fn with_ctx(ctx: Arc<FieldCtx>) -> Result<Arc<FamilyParams>> {
        let n = ctx.degree();
        if ![12, 20, 28].contains(&n) {
            return Err(Error::UnsupportedN(n));
        }
        let m = n / 2;
        let m1 = m / 2;
        debug_assert_eq!(m % 4, 2);
        let u_order = (1u64 << m) + 1;
        debug_assert_eq!(u_order % 5, 0);
        let v_order = u_order / 5;

        let alpha = ctx.generator();
        let xi = ctx.pow(alpha, (1u64 << m) - 1);
        let beta = ctx.pow(alpha, ctx.order() / 5);

        // order checks: xi generates U, beta generates mu_5, and beta is
        // xi^(u_order/5)
        if ctx.pow(xi, u_order).bits() != 1 {
            return Err(Error::CrossCheckFailure("xi order does not divide 2^m+1".into()));
        }
        for p in prime_divisors(u_order) {
            if ctx.pow(xi, u_order / p).bits() == 1 {
                return Err(Error::CrossCheckFailure("xi order is a proper divisor of 2^m+1".into()));
            }
        }
        if ctx.pow(beta, 5).bits() != 1 || beta.bits() == 1 {
            return Err(Error::CrossCheckFailure("beta is not a primitive fifth root".into()));
        }
        if ctx.pow(xi, v_order) != beta {
            return Err(Error::CrossCheckFailure("beta != xi^((2^m+1)/5)".into()));
        }

        // (xi^i)^(2^m-1) walk
        let delta = ctx.pow(xi, (1u64 << m) - 1);
        let mut u_dillon = Vec::with_capacity(u_order as usize);
        let mut cur = 1u32;
        for _ in 0..u_order {
            u_dillon.push(cur);
            cur = ctx.mul_raw(cur, delta.bits());
        }

        let beta_pows = [
            ctx.one(),
            beta,
            ctx.pow(beta, 2),
            ctx.pow(beta, 3),
            ctx.pow(beta, 4),
        ];

        let mut b_elems = [ctx.zero(); 16];
        let mut b_index = HashMap::new();
        for c in 0..16u8 {
            let mut v = ctx.zero();
            for i in 0..4 {
                if (c >> i) & 1 == 1 {
                    v = ctx.add(v, beta_pows[i as usize]);
                }
            }
            b_elems[c as usize] = v;
            if b_index.insert(v.bits(), c).is_some() {
                return Err(Error::CrossCheckFailure(
                    "{1, beta, beta^2, beta^3} is not a basis of GF(16)".into(),
                ));
            }
            if !ctx.in_subfield(4, v)? {
                return Err(Error::CrossCheckFailure("basis span leaves GF(16)".into()));
            }
        }

        let mut tr4b = [[0u8; 5]; 16];
        for c in 0..16usize {
            for j in 0..5usize {
                tr4b[c][j] = ctx.subfield_trace(4, ctx.mul(b_elems[c], beta_pows[j]))?;
            }
        }

        // the primitive trace-0 coefficients are exactly the roots of
        // b^4 + b + 1
        let mut prim_tr0 = Vec::new();
        for c in 0..16u8 {
            let b = b_elems[c as usize];
            if b.is_zero() {
                continue;
            }
            let v = ctx.add(ctx.add(ctx.pow(b, 4), b), ctx.one());
            if v.is_zero() {
                prim_tr0.push(c);
            }
        }
        if prim_tr0.len() != 4 {
            return Err(Error::CrossCheckFailure(
                "b^4 + b + 1 does not have four roots in GF(16)".into(),
            ));
        }

        Ok(Arc::new(FamilyParams {
            n,
            m,
            m1,
            ctx,
            alpha,
            xi,
            beta,
            u_order,
            v_order,
            u_dillon,
            beta_pows,
            b_elems,
            b_index,
            tr4b,
            prim_tr0,
        }))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn m1(&self) -> u32 {
        self.m1
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn alpha(&self) -> FieldElement {
        self.alpha
    }

    /// Generator of U, order 2^m + 1.
    pub fn xi(&self) -> FieldElement {
        self.xi
    }

    /// The canonical primitive fifth root of unity.
    pub fn beta(&self) -> FieldElement {
        self.beta
    }

    pub fn u_order(&self) -> u64 {
        self.u_order
    }

    pub fn v_order(&self) -> u64 {
        self.v_order
    }

    /// Coordinates whose b satisfies b^4 + b + 1 = 0 (the primitive
    /// trace-0 coefficients).
    pub fn primitive_trace0_coords(&self) -> &[u8] {
        &self.prim_tr0
    }

    pub fn b_element(&self, coords: u8) -> FieldElement {
        self.b_elems[(coords & 0xf) as usize]
    }

    pub fn b_coords(&self, b: FieldElement) -> Result<u8> {
        self.b_index
            .get(&b.bits())
            .copied()
            .ok_or(Error::NotInSubfield(4))
    }

    pub fn all_b(&self) -> [FieldElement; 16] {
        self.b_elems
    }

    /// Accepts "0", "1", "beta", "beta^K", sums of those joined by '+',
    /// or a 4-bit coordinate string "c0c1c2c3".
    pub fn parse_b(&self, s: &str) -> Result<FieldElement> {
        let t = s.trim();
        if t.len() == 4 && t.chars().all(|c| c == '0' || c == '1') {
            let mut coords = 0u8;
            for (i, ch) in t.chars().enumerate() {
                if ch == '1' {
                    coords |= 1 << i;
                }
            }
            return Ok(self.b_element(coords));
        }
        let mut acc = self.ctx.zero();
        for part in t.split('+') {
            let p = part.trim();
            let v = if p == "0" {
                self.ctx.zero()
            } else if p == "1" {
                self.beta_pows[0]
            } else if p == "beta" {
                self.beta_pows[1]
            } else if let Some(k) = p.strip_prefix("beta^") {
                let k: usize = k
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad beta power {p:?}")))?;
                if k == 0 || k > 4 {
                    return Err(Error::InvalidInput(format!("beta power out of range: {p:?}")));
                }
                self.beta_pows[k]
            } else {
                return Err(Error::InvalidInput(format!("cannot parse b component {p:?}")));
            };
            acc = self.ctx.add(acc, v);
        }
        Ok(acc)
    }

    /// Coordinate string "c0c1c2c3".
    pub fn format_b_coords(&self, b: FieldElement) -> Result<String> {
        let c = self.b_coords(b)?;
        Ok((0..4).map(|i| if (c >> i) & 1 == 1 { '1' } else { '0' }).collect())
    }

    /// Short name: a pure power of beta when it is one, otherwise the
    /// basis-coordinate sum.
    pub fn format_b_name(&self, b: FieldElement) -> Result<String> {
        let c = self.b_coords(b)?;
        if c == 0 {
            return Ok("0".into());
        }
        for (j, p) in self.beta_pows.iter().enumerate().skip(1) {
            if *p == b {
                return Ok(if j == 1 { "beta".into() } else { format!("beta^{j}") });
            }
        }
        let mut parts = Vec::new();
        for i in 0..4 {
            if (c >> i) & 1 == 1 {
                parts.push(match i {
                    0 => "1".to_string(),
                    1 => "beta".to_string(),
                    j => format!("beta^{j}"),
                });
            }
        }
        Ok(parts.join("+"))
    }

    fn check_a(&self, a: FieldElement) -> Result<u32> {
        if a.ctx_id() != self.ctx.id() {
            return Err(Error::ContextMismatch);
        }
        if !self.ctx.in_subfield(self.m, a)? {
            return Err(Error::NotInSubfield(self.m));
        }
        Ok(a.bits())
    }

    fn check_b(&self, b: FieldElement) -> Result<u8> {
        if b.ctx_id() != self.ctx.id() {
            return Err(Error::ContextMismatch);
        }
        self.b_coords(b)
    }

    /// The family member as a general Boolean function.
    pub fn member(&self, a: FieldElement, b: FieldElement) -> Result<BooleanFunction> {
        self.check_a(a)?;
        self.check_b(b)?;
        let mut terms = Vec::new();
        if !a.is_zero() {
            terms.push(TraceTerm::new(&self.ctx, (1u64 << self.m) - 1, a)?);
        }
        if !b.is_zero() {
            terms.push(TraceTerm::new(&self.ctx, self.ctx.order() / 5, b)?);
        }
        BooleanFunction::new(&self.ctx, terms, 0)
    }

    /// S_i = sum over v in V of chi(Tr(a (xi^i v)^(2^m-1))), all five in
    /// one pass over U.
    pub fn s_sums(&self, a: FieldElement) -> Result<CharacterSums> {
        let a_bits = self.check_a(a)?;
        let t_mask = self.ctx.subfield_mask(self.n)?;
        let a_mask = self.ctx.linear_functional_mask(a_bits, t_mask);
        let mut s = [0i64; 5];
        for (i, &u) in self.u_dillon.iter().enumerate() {
            s[i % 5] += 1 - 2 * i64::from(FieldCtx::mask_parity(u, a_mask));
        }
        let sums = CharacterSums {
            s,
            lambda0: s.iter().sum(),
        };
        debug_assert_eq!(sums.s[1], sums.s[4]);
        debug_assert_eq!(sums.s[2], sums.s[3]);
        Ok(sums)
    }

    /// Lambda(a, b) by direct summation of chi(f_{a,b}(u)) over U.
    pub fn lambda_direct(&self, a: FieldElement, b: FieldElement) -> Result<i64> {
        let a_bits = self.check_a(a)?;
        let c = self.check_b(b)? as usize;
        let t_mask = self.ctx.subfield_mask(self.n)?;
        let a_mask = self.ctx.linear_functional_mask(a_bits, t_mask);
        let tr4 = &self.tr4b[c];
        let mut sum = 0i64;
        for (i, &u) in self.u_dillon.iter().enumerate() {
            let bit = FieldCtx::mask_parity(u, a_mask) ^ tr4[(3 * i) % 5];
            sum += 1 - 2 * i64::from(bit);
        }
        Ok(sum)
    }

    /// Lambda(a, b) as the linear combination
    /// chi(T(b)) S0 + (chi(T(b beta^2)) + chi(T(b beta^3))) S1
    ///            + (chi(T(b beta))   + chi(T(b beta^4))) S2,
    /// T = Tr_1^4.
    pub fn lambda_from_s_sums(&self, a: FieldElement, b: FieldElement) -> Result<i64> {
        let sums = self.s_sums(a)?;
        self.lambda_from_sums_with(&sums, b)
    }

    pub fn lambda_from_sums_with(&self, sums: &CharacterSums, b: FieldElement) -> Result<i64> {
        let c = self.check_b(b)? as usize;
        let chi = |j: usize| 1 - 2 * i64::from(self.tr4b[c][j]);
        Ok(chi(0) * sums.s[0] + (chi(2) + chi(3)) * sums.s[1] + (chi(1) + chi(4)) * sums.s[2])
    }

    /// The per-coefficient case table for nonzero b: each of the fifteen b
    /// is one of eight linear combinations of S0, S1, S2.
    pub fn lambda_case_table(&self, sums: &CharacterSums, b: FieldElement) -> Result<i64> {
        let c = self.check_b(b)?;
        let [s0, s1, s2, _, _] = sums.s;
        let bp = &self.beta_pows;
        let eq = |j: usize| b == bp[j];
        let eq1p = |j: usize| b == self.ctx.add(self.ctx.one(), bp[j]);
        Ok(if c == 0 {
            sums.lambda0
        } else if c == 1 {
            s0 - 2 * (s1 + s2)
        } else if self.prim_tr0.contains(&c) {
            s0
        } else if eq(1) || eq(4) {
            -s0 - 2 * s1
        } else if eq(2) || eq(3) {
            -s0 - 2 * s2
        } else if eq1p(1) || eq1p(4) {
            -s0 + 2 * s1
        } else if eq1p(2) || eq1p(3) {
            -s0 + 2 * s2
        } else if b == self.ctx.add(bp[1], bp[4]) {
            s0 + 2 * s1 - 2 * s2
        } else if b == self.ctx.add(bp[2], bp[3]) {
            s0 - 2 * s1 + 2 * s2
        } else {
            return Err(Error::CrossCheckFailure(format!(
                "b coordinates {c:#x} escaped the case table"
            )));
        })
    }

    /// Whether the Kloosterman/Weil closed form covers this (a, b).
    pub fn closed_form_applies(&self, a: FieldElement, b: FieldElement) -> bool {
        if a.is_zero() {
            return false;
        }
        let Ok(c) = self.check_b(b) else {
            return false;
        };
        if c == 0 || c == 1 || self.prim_tr0.contains(&c) {
            return true;
        }
        self.ctx.in_subfield(self.m1, a).unwrap_or(false)
    }

    /// Lambda(a, b) from K_m(a) and Q_m(a) alone. Divisions by 5 must be
    /// exact; a non-integral result signals a bug upstream.
    pub fn lambda_from_kq(&self, a: FieldElement, b: FieldElement) -> Result<i64> {
        self.check_a(a)?;
        if a.is_zero() {
            return Err(Error::NonInvertibleZero);
        }
        let c = self.check_b(b)?;
        let k = kloosterman(&self.ctx, self.m, a)?;
        if c == 0 {
            return Ok(1 - k);
        }
        let q = weil_q(&self.ctx, self.m, a)?;
        let exact_fifth = |v: i64| -> Result<i64> {
            if v % 5 != 0 {
                return Err(Error::NonIntegralLambda(v));
            }
            Ok(v / 5)
        };
        if c == 1 {
            // -(1/5) [3(1-K) - 4Q]
            return exact_fifth(-(3 * (1 - k) - 4 * q));
        }
        if self.prim_tr0.contains(&c) {
            // (1/5) [1 - K + 2Q]
            return exact_fifth(1 - k + 2 * q);
        }
        if !self.ctx.in_subfield(self.m1, a)? {
            return Err(Error::ClosedFormUnavailable);
        }
        let bp = &self.beta_pows;
        if bp[1..].contains(&b) {
            // b = beta^i: -(1/5) [3(1-K) + Q]
            return exact_fifth(-(3 * (1 - k) + q));
        }
        let one = self.ctx.one();
        if bp[1..].iter().any(|&p| self.ctx.add(one, p) == b) {
            // b = 1 + beta^i: (1/5) [(1-K) - 3Q]
            return exact_fifth((1 - k) - 3 * q);
        }
        // the remaining coefficients share the S0 form (b = beta+beta^4,
        // beta^2+beta^3 join the four primitive trace-0 ones)
        exact_fifth(1 - k + 2 * q)
    }

    /// Hyper-bentness verdict: Lambda(a, b) = 1 under the chosen method,
    /// or the all-exponents oracle.
    pub fn is_hyperbent(&self, a: FieldElement, b: FieldElement, method: LambdaMethod) -> Result<bool> {
        match method {
            LambdaMethod::Direct => Ok(self.lambda_direct(a, b)? == 1),
            LambdaMethod::SSums => Ok(self.lambda_from_s_sums(a, b)? == 1),
            LambdaMethod::Closed => Ok(self.lambda_from_kq(a, b)? == 1),
            LambdaMethod::Definitional => self.member(a, b)?.is_hyper_bent_definitional(),
        }
    }

    /// Unit-circle weight certification of the member (invariance checked
    /// on all of U plus seeded random points for n > 16).
    pub fn u_weight_test(&self, a: FieldElement, b: FieldElement, seed: u64, samples: u32) -> Result<bool> {
        let f = self.member(a, b)?;
        u_weight_hyperbent_test(&f, seed, samples)
    }

    /// Classification for b = 1: hyper-bent iff the quintic is irreducible,
    /// the Weil sum is +2^(m/2), and K_m(a) = (4/3)(2 - 2^(m/2)).
    pub fn hyperbent_criterion_b_one(&self, a: FieldElement) -> Result<bool> {
        self.check_a(a)?;
        if a.is_zero() {
            return Err(Error::NonInvertibleZero);
        }
        let pat = quintic_pattern(&self.ctx, self.m, a)?;
        if pat != FactorPattern::from_pairs(&[(5, 1)]) {
            return Ok(false);
        }
        let q = weil_q(&self.ctx, self.m, a)?;
        if q != 1i64 << self.m1 {
            return Ok(false);
        }
        let k = kloosterman(&self.ctx, self.m, a)?;
        Ok(3 * k == 4 * (2 - (1i64 << self.m1)))
    }

    /// Classification for primitive b with Tr_1^4(b) = 0: hyper-bent iff
    /// the quintic pattern is (1)(2)^2 with K = -4, or the quintic is
    /// irreducible with Q = +2^(m/2) and K = 2 2^(m/2) - 4.
    pub fn hyperbent_criterion_b_primitive(&self, a: FieldElement, b: FieldElement) -> Result<bool> {
        self.check_a(a)?;
        if a.is_zero() {
            return Err(Error::NonInvertibleZero);
        }
        let c = self.check_b(b)?;
        if !self.prim_tr0.contains(&c) {
            return Err(Error::InvalidInput(
                "b must satisfy b^4 + b + 1 = 0 (primitive with trace 0)".into(),
            ));
        }
        let pat = quintic_pattern(&self.ctx, self.m, a)?;
        let k = kloosterman(&self.ctx, self.m, a)?;
        if pat == FactorPattern::from_pairs(&[(1, 1), (2, 2)]) {
            return Ok(k == -4);
        }
        if pat == FactorPattern::from_pairs(&[(5, 1)]) {
            let q = weil_q(&self.ctx, self.m, a)?;
            return Ok(q == 1i64 << self.m1 && k == 2 * (1i64 << self.m1) - 4);
        }
        Ok(false)
    }

    /// One record per (a, b) with all routes cross-checked; any
    /// disagreement aborts the search instead of emitting a record.
    pub fn search(&self, a_domain: &[FieldElement], b_domain: &[FieldElement]) -> Result<Vec<SearchRecord>> {
        let per_a: Result<Vec<Vec<SearchRecord>>> = a_domain
            .par_iter()
            .map(|&a| self.search_one_a(a, b_domain))
            .collect();
        Ok(per_a?.into_iter().flatten().collect())
    }

    fn search_one_a(&self, a: FieldElement, b_domain: &[FieldElement]) -> Result<Vec<SearchRecord>> {
        self.check_a(a)?;
        let k = kloosterman(&self.ctx, self.m, a)?;
        if !kloosterman_in_range(self.m, k) {
            return Err(Error::CrossCheckFailure(format!(
                "K out of range or not 0 mod 4: a={:x} K={k}",
                a
            )));
        }
        let (q, pattern) = if a.is_zero() {
            (None, None)
        } else {
            let q = weil_q(&self.ctx, self.m, a)?;
            let pat = quintic_pattern(&self.ctx, self.m, a)?;
            if !FactorPattern::even_m_rows().contains(&pat) {
                return Err(Error::CrossCheckFailure(format!(
                    "pattern {pat} is not an even-degree row"
                )));
            }
            (Some(q), Some(pat))
        };
        let sums = self.s_sums(a)?;
        if sums.s[1] != sums.s[4] || sums.s[2] != sums.s[3] {
            return Err(Error::CrossCheckFailure("S-sum symmetry broken".into()));
        }
        let mut out = Vec::with_capacity(b_domain.len());
        for &b in b_domain {
            let direct = self.lambda_direct(a, b)?;
            let from_sums = self.lambda_from_sums_with(&sums, b)?;
            let table = self.lambda_case_table(&sums, b)?;
            if direct != from_sums || direct != table {
                return Err(Error::CrossCheckFailure(format!(
                    "lambda mismatch at a={:x} b={:x}: direct {direct}, sums {from_sums}, table {table}",
                    a, b
                )));
            }
            let closed = if self.closed_form_applies(a, b) {
                let v = self.lambda_from_kq(a, b)?;
                if v != direct {
                    return Err(Error::CrossCheckFailure(format!(
                        "closed-form lambda {v} != direct {direct} at a={:x} b={:x}",
                        a, b
                    )));
                }
                Some(v)
            } else {
                None
            };
            if direct % 2 == 0 || direct.unsigned_abs() > self.u_order {
                return Err(Error::CrossCheckFailure(format!(
                    "lambda {direct} violates parity or bound"
                )));
            }
            out.push(SearchRecord {
                schema: 1,
                n: self.n,
                a_hex: a.to_hex(),
                b_coords: self.format_b_coords(b)?,
                b_name: self.format_b_name(b)?,
                k,
                q,
                pattern: pattern.as_ref().map(|p| p.to_string()),
                lambda_direct: direct,
                lambda_s_sums: from_sums,
                lambda_closed: closed,
                hyperbent: direct == 1,
                ps_ap: self.tr4b[self.b_coords(b)? as usize][0] == 0,
            });
        }
        Ok(out)
    }

    /// Exhaustive search over the half-degree subfield for a and all of
    /// GF(16) for b, returning the hyper-bent records.
    pub fn enumerate_subfield_hyperbents(&self) -> Result<Vec<SearchRecord>> {
        let a_domain: Vec<FieldElement> = self.ctx.subfield_elements(self.m1)?.collect();
        let b_domain: Vec<FieldElement> = self.all_b().to_vec();
        Ok(self
            .search(&a_domain, &b_domain)?
            .into_iter()
            .filter(|r| r.hyperbent)
            .collect())
    }

    /// Named identity checks for this family degree (CLI surface).
    /// Exhaustive over the full a-domain at n = 12 and over the subfield
    /// domain above that, with a fixed slice of full-domain spot checks.
    pub fn verify_identities(&self) -> Result<Vec<(String, bool)>> {
        let mut out = Vec::new();
        let full: Vec<FieldElement> = self.ctx.subfield_elements(self.m)?.collect();
        let a_dom: Vec<FieldElement> = if self.n == 12 {
            full.clone()
        } else {
            let mut v: Vec<FieldElement> = self.ctx.subfield_elements(self.m1)?.collect();
            v.extend(full.iter().copied().step_by(97).take(32));
            v
        };

        let mut sym = true;
        let mut total = true;
        let mut table_ok = true;
        let mut b4_ok = true;
        let mut odd_bound = true;
        for &a in &a_dom {
            let sums = self.s_sums(a)?;
            sym &= sums.s[1] == sums.s[4] && sums.s[2] == sums.s[3];
            total &= sums.s[0] + 2 * (sums.s[1] + sums.s[2]) == sums.lambda0;
            for &b in &self.all_b() {
                let d = self.lambda_direct(a, b)?;
                table_ok &= self.lambda_case_table(&sums, b)? == d
                    && self.lambda_from_sums_with(&sums, b)? == d;
                b4_ok &= self.lambda_direct(a, self.ctx.pow(b, 4))? == d;
                odd_bound &= d % 2 != 0 && d.unsigned_abs() <= self.u_order;
            }
        }
        out.push(("S-sum symmetry S1 = S4, S2 = S3".into(), sym));
        out.push(("S0 + 2(S1 + S2) = Lambda(a, 0)".into(), total));
        out.push(("case table and linear combination match direct Lambda".into(), table_ok));
        out.push(("Lambda(a, b^4) = Lambda(a, b)".into(), b4_ok));
        out.push(("Lambda odd and bounded by 2^m + 1".into(), odd_bound));

        // primitive trace-0 b: Lambda(a, b^2) = Lambda(a, b) = S0
        let mut prim_ok = true;
        for &a in &a_dom {
            let sums = self.s_sums(a)?;
            for &c in &self.prim_tr0 {
                let b = self.b_element(c);
                let d = self.lambda_direct(a, b)?;
                prim_ok &= d == sums.s[0] && self.lambda_direct(a, self.ctx.square(b))? == d;
            }
        }
        out.push(("primitive trace-0 b: Lambda(a, b^2) = Lambda(a, b) = S0".into(), prim_ok));

        // subfield a: S1 = S2, Lambda(a, b^2) = Lambda(a, b)
        let mut sub_ok = true;
        for a in self.ctx.subfield_elements(self.m1)? {
            let sums = self.s_sums(a)?;
            sub_ok &= sums.s[1] == sums.s[2];
            for &b in &self.all_b() {
                sub_ok &=
                    self.lambda_direct(a, self.ctx.square(b))? == self.lambda_direct(a, b)?;
            }
        }
        out.push(("half-degree a: S1 = S2 and Lambda(a, b^2) = Lambda(a, b)".into(), sub_ok));

        // closed forms against direct, where applicable
        let mut closed_ok = true;
        let mut integral_ok = true;
        for &a in &a_dom {
            if a.is_zero() {
                continue;
            }
            let k = kloosterman(&self.ctx, self.m, a)?;
            let q = weil_q(&self.ctx, self.m, a)?;
            integral_ok &= (1 - k + 2 * q) % 5 == 0;
            for &b in &self.all_b() {
                if self.closed_form_applies(a, b) {
                    closed_ok &= self.lambda_from_kq(a, b)? == self.lambda_direct(a, b)?;
                }
            }
        }
        out.push(("Kloosterman/Weil closed forms match direct Lambda".into(), closed_ok));
        out.push(("5 divides 1 - K + 2Q".into(), integral_ok));

        // member invariance under multiplication by alpha^(2^m+1)
        let mut inv_ok = true;
        let spot_a = full[full.len() / 3];
        let spot_b = self.b_element(0b0110);
        let f = self.member(spot_a, spot_b)?;
        let c = self.ctx.pow(self.alpha, self.u_order);
        if self.n == 12 {
            for bits in 0..=self.ctx.order() {
                let x = self.ctx.element(bits as u32).expect("in range");
                inv_ok &= f.evaluate(x)? == f.evaluate(self.ctx.mul(c, x))?;
            }
        } else {
            let mut cur = self.ctx.one();
            for _ in 0..self.u_order.min(1 << 12) {
                inv_ok &= f.evaluate(cur)? == f.evaluate(self.ctx.mul(c, cur))?;
                cur = self.ctx.mul(cur, self.xi);
            }
        }
        out.push(("member invariant under the coset action of alpha^(2^m+1)".into(), inv_ok));

        Ok(out)
    }
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
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

#[cfg(test)]
mod tests {
    use super::*;

    fn fam12() -> Arc<FamilyParams> {
        FamilyParams::new(12).unwrap()
    }

    #[test]
    fn construction_and_orders() {
        let fam = fam12();
        assert_eq!(fam.u_order(), 65);
        assert_eq!(fam.v_order(), 13);
        assert!(fam.ctx().in_subfield(4, fam.beta()).unwrap());
        assert!(matches!(FamilyParams::new(10), Err(Error::UnsupportedN(10))));
        assert!(matches!(FamilyParams::new(16), Err(Error::UnsupportedN(16))));
    }

    #[test]
    fn n20_orders() {
        let fam = FamilyParams::new(20).unwrap();
        assert_eq!(fam.u_order(), 1025);
        assert_eq!(fam.v_order(), 205);
    }

    #[test]
    fn member_values_at_zero_and_one() {
        let fam = fam12();
        let ctx = fam.ctx().clone();
        for c in 0..16u8 {
            let b = fam.b_element(c);
            let a = ctx.subfield_elements(6).unwrap().nth(5).unwrap();
            let f = fam.member(a, b).unwrap();
            assert_eq!(f.evaluate(ctx.zero()).unwrap(), 0, "f(0) = 0");
            let tr_b = ctx.subfield_trace(4, b).unwrap();
            assert_eq!(f.evaluate(ctx.one()).unwrap(), tr_b, "f(1) = Tr_1^4(b)");
        }
    }

    #[test]
    fn zero_member_is_zero_function() {
        let fam = fam12();
        let ctx = fam.ctx().clone();
        let f = fam.member(ctx.zero(), ctx.zero()).unwrap();
        for bits in (0..4096).step_by(7) {
            assert_eq!(f.evaluate(ctx.element(bits).unwrap()).unwrap(), 0);
        }
        assert_eq!(fam.lambda_direct(ctx.zero(), ctx.zero()).unwrap(), 65);
    }

    #[test]
    fn lambda_direct_matches_member_evaluation() {
        let fam = fam12();
        let ctx = fam.ctx().clone();
        let a = ctx.subfield_elements(6).unwrap().nth(9).unwrap();
        for c in [0u8, 1, 2, 6, 9, 15] {
            let b = fam.b_element(c);
            let f = fam.member(a, b).unwrap();
            let mut expect = 0i64;
            let mut u = ctx.one();
            for _ in 0..fam.u_order() {
                expect += 1 - 2 * i64::from(f.evaluate(u).unwrap());
                u = ctx.mul(u, fam.xi());
            }
            assert_eq!(fam.lambda_direct(a, b).unwrap(), expect, "c={c}");
        }
    }

    #[test]
    fn lambda_zero_zero() {
        let fam = fam12();
        let z = fam.ctx().zero();
        assert_eq!(fam.lambda_direct(z, z).unwrap(), 65);
        assert_eq!(fam.lambda_from_s_sums(z, z).unwrap(), 65);
        assert!(matches!(fam.lambda_from_kq(z, z), Err(Error::NonInvertibleZero)));
    }

    #[test]
    fn lambda_a0_equals_one_minus_kloosterman() {
        let fam = fam12();
        let z = fam.ctx().zero();
        for a in fam.ctx().subfield_elements(6).unwrap() {
            if a.is_zero() {
                continue;
            }
            let k = kloosterman(fam.ctx(), 6, a).unwrap();
            assert_eq!(fam.lambda_direct(a, z).unwrap(), 1 - k);
            assert_eq!(fam.lambda_from_kq(a, z).unwrap(), 1 - k);
        }
    }

    #[test]
    fn b_parsing_and_formatting() {
        let fam = fam12();
        assert_eq!(fam.parse_b("0").unwrap(), fam.ctx().zero());
        assert_eq!(fam.parse_b("1").unwrap(), fam.ctx().one());
        assert_eq!(fam.parse_b("beta").unwrap(), fam.beta());
        assert_eq!(fam.parse_b("beta^2").unwrap(), fam.ctx().square(fam.beta()));
        let b = fam.parse_b("1+beta^3").unwrap();
        assert_eq!(fam.format_b_coords(b).unwrap(), "1001");
        assert_eq!(fam.format_b_name(b).unwrap(), "1+beta^3");
        // beta^4 = 1 + beta + beta^2 + beta^3 but keeps its power name
        let b4 = fam.parse_b("beta^4").unwrap();
        assert_eq!(fam.format_b_coords(b4).unwrap(), "1111");
        assert_eq!(fam.format_b_name(b4).unwrap(), "beta^4");
        assert_eq!(fam.parse_b("0110").unwrap(), fam.ctx().add(fam.beta(), fam.ctx().square(fam.beta())));
        assert!(fam.parse_b("gamma").is_err());
    }

    #[test]
    fn search_shape_and_cross_checks() {
        let fam = fam12();
        let a_dom: Vec<FieldElement> = fam.ctx().subfield_elements(3).unwrap().collect();
        let b_dom = fam.all_b().to_vec();
        let recs = fam.search(&a_dom, &b_dom).unwrap();
        assert_eq!(recs.len(), 8 * 16);
        for r in &recs {
            assert_eq!(r.hyperbent, r.lambda_direct == 1);
            assert_eq!(r.lambda_direct, r.lambda_s_sums);
            if let Some(c) = r.lambda_closed {
                assert_eq!(c, r.lambda_direct);
            }
        }
    }

    #[test]
    fn ps_ap_flag_via_trace() {
        let fam = fam12();
        // Tr_1^4(0) = Tr_1^4(1) = 0, Tr_1^4(beta) = 1
        let recs = fam
            .search(
                &[fam.ctx().zero()],
                &[fam.ctx().zero(), fam.ctx().one(), fam.beta()],
            )
            .unwrap();
        assert!(recs[0].ps_ap);
        assert!(recs[1].ps_ap);
        assert!(!recs[2].ps_ap);
    }
}
