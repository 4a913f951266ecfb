//! Boolean functions on GF(2^n) in trace-expansion form, truth tables,
//! Walsh-Hadamard spectra, algebraic degree, and the two hyper-bentness
//! oracles (the definitional one over all coprime power compositions, and
//! the unit-circle weight criterion).
//!
//! Truth tables index by the element's coefficient bit pattern. The fast
//! transform works over the vector pairing <v, x>; the field spectrum is
//! recovered through the trace pairing via the bijection t(w)_j = Tr(w a_j)
//! over the polynomial basis a_j, which is invertible because the trace
//! form is nondegenerate.

use std::sync::{Arc, OnceLock};

use num_integer::gcd;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};

/// Full-spectrum operations are gated to keep tables in memory.
pub const MAX_SPECTRUM_DEGREE: u32 = 24;
/// The all-exponents hyper-bentness oracle is gated tighter.
pub const MAX_DEFINITIONAL_DEGREE: u32 = 16;

/// Coset leader (smallest element) and size of the cyclotomic class of j
/// under doubling mod 2^n - 1.
pub fn coset_leader_and_size(j: u64, n: u32) -> (u64, u32) {
    let order = (1u64 << n) - 1;
    let j = j % order;
    let mut min = j;
    let mut cur = j;
    let mut size = 0u32;
    loop {
        cur = (cur << 1) % order;
        size += 1;
        if cur < min {
            min = cur;
        }
        if cur == j {
            break;
        }
    }
    (min, size)
}

/// One representative (the leader) of every cyclotomic class of exponents
/// coprime to 2^n - 1.
pub fn coprime_class_representatives(n: u32) -> Vec<u64> {
    let order = (1u64 << n) - 1;
    let mut reps = Vec::new();
    for i in 1..order {
        if gcd(i, order) != 1 {
            continue;
        }
        let (leader, _) = coset_leader_and_size(i, n);
        if leader == i {
            reps.push(i);
        }
    }
    reps
}

/// One term Tr_1^(o_j)(a_j x^j) of a trace expansion; the exponent is
/// normalized to its coset leader (conjugating the coefficient along).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceTerm {
    exponent: u64,
    coefficient: FieldElement,
    o_j: u32,
}

impl TraceTerm {
    pub fn new(ctx: &FieldCtx, exponent: u64, coefficient: FieldElement) -> Result<TraceTerm> {
        if coefficient.ctx_id() != ctx.id() {
            return Err(Error::ContextMismatch);
        }
        let n = ctx.degree();
        let order = ctx.order();
        if exponent >= order {
            return Err(Error::InvalidInput(format!(
                "term exponent {exponent} must lie below 2^{n} - 1"
            )));
        }
        let (leader, o_j) = coset_leader_and_size(exponent, n);
        let mut coefficient = coefficient;
        if leader != exponent {
            // Tr(a x^j) = Tr(a^(2^s) x^(j 2^s)); shift until the leader
            let mut cur = exponent;
            let mut s = 0;
            while cur != leader {
                cur = (cur << 1) % order;
                s += 1;
            }
            coefficient = ctx.frobenius(coefficient, s);
        }
        if !ctx.in_subfield(o_j, coefficient)? {
            return Err(Error::NotInSubfield(o_j));
        }
        Ok(TraceTerm {
            exponent: leader,
            coefficient,
            o_j,
        })
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn coefficient(&self) -> FieldElement {
        self.coefficient
    }

    pub fn coset_size(&self) -> u32 {
        self.o_j
    }
}

/// Bit-packed truth table of length 2^n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitTable {
    n: u32,
    words: Vec<u64>,
}

impl BitTable {
    fn new(n: u32) -> BitTable {
        BitTable {
            n,
            words: vec![0u64; 1usize << n.saturating_sub(6)],
        }
    }

    pub fn len(&self) -> usize {
        1usize << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, idx: usize) -> u8 {
        ((self.words[idx >> 6] >> (idx & 63)) & 1) as u8
    }

    #[inline]
    fn set(&mut self, idx: usize, bit: u8) {
        if bit & 1 == 1 {
            self.words[idx >> 6] |= 1u64 << (idx & 63);
        }
    }

    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }
}

/// Walsh-Hadamard spectrum over the field pairing, indexed by w's bit
/// pattern.
#[derive(Debug, Clone)]
pub struct WalshSpectrum {
    pub values: Vec<i32>,
    pub max_abs: u32,
}

/// A Boolean function given by trace terms plus the constant-term bit
/// epsilon multiplying 1 + x^(2^n - 1). The table is a lazily built cache
/// that always agrees with term evaluation.
pub struct BooleanFunction {
    ctx: Arc<FieldCtx>,
    terms: Vec<TraceTerm>,
    epsilon: u8,
    table: OnceLock<BitTable>,
}

impl BooleanFunction {
    pub fn new(ctx: &Arc<FieldCtx>, terms: Vec<TraceTerm>, epsilon: u8) -> Result<BooleanFunction> {
        // merge duplicate leaders: Tr(a x^j) + Tr(b x^j) = Tr((a+b) x^j)
        let mut merged: Vec<TraceTerm> = Vec::new();
        for t in terms {
            if t.coefficient.ctx_id() != ctx.id() {
                return Err(Error::ContextMismatch);
            }
            match merged.iter_mut().find(|m| m.exponent == t.exponent) {
                Some(m) => m.coefficient = ctx.add(m.coefficient, t.coefficient),
                None => merged.push(t),
            }
        }
        merged.retain(|t| !t.coefficient.is_zero());
        merged.sort_by_key(|t| t.exponent);
        Ok(BooleanFunction {
            ctx: Arc::clone(ctx),
            terms: merged,
            epsilon: epsilon & 1,
            table: OnceLock::new(),
        })
    }

    pub fn zero(ctx: &Arc<FieldCtx>) -> BooleanFunction {
        BooleanFunction {
            ctx: Arc::clone(ctx),
            terms: Vec::new(),
            epsilon: 0,
            table: OnceLock::new(),
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn terms(&self) -> &[TraceTerm] {
        &self.terms
    }

    pub fn epsilon(&self) -> u8 {
        self.epsilon
    }

    pub fn degree_n(&self) -> u32 {
        self.ctx.degree()
    }

    /// Term-by-term evaluation: sum of Tr_1^(o_j)(a_j x^j) plus
    /// epsilon (1 + x^(2^n-1)).
    pub fn evaluate(&self, x: FieldElement) -> Result<u8> {
        if x.ctx_id() != self.ctx.id() {
            return Err(Error::ContextMismatch);
        }
        let mut acc = if x.is_zero() { self.epsilon } else { 0 };
        for t in &self.terms {
            let p = self.ctx.pow(x, t.exponent);
            let v = self.ctx.mul(t.coefficient, p);
            acc ^= self
                .ctx
                .subfield_trace(t.o_j, v)
                .expect("term value lies in its coset subfield");
        }
        Ok(acc)
    }

    /// The truth table, built on first use by walking x through the powers
    /// of the generator so each term advances by one multiplication.
    pub fn truth_table(&self) -> &BitTable {
        self.table.get_or_init(|| {
            let n = self.ctx.degree();
            let mut tb = BitTable::new(n);
            let zero_val = self.evaluate(self.ctx.zero()).expect("same ctx");
            tb.set(0, zero_val);
            let order = self.ctx.order();
            let g = self.ctx.generator().bits();
            // per-term trace masks and geometric steps
            let masks: Vec<u32> = self
                .terms
                .iter()
                .map(|t| {
                    let sub = self.ctx.subfield_mask(t.o_j).expect("divisor");
                    self.ctx.linear_functional_mask(t.coefficient.bits(), sub)
                })
                .collect();
            let steps: Vec<u32> = self
                .terms
                .iter()
                .map(|t| self.ctx.pow_raw(g, t.exponent))
                .collect();
            let mut powers: Vec<u32> = vec![1; self.terms.len()];
            let mut x = 1u32;
            for _ in 0..order {
                let mut bit = 0u8;
                for (p, m) in powers.iter().zip(&masks) {
                    bit ^= FieldCtx::mask_parity(*p, *m);
                }
                tb.set(x as usize, bit);
                for (p, s) in powers.iter_mut().zip(&steps) {
                    *p = self.ctx.mul_raw(*p, *s);
                }
                x = self.ctx.mul_raw(x, g);
            }
            tb
        })
    }

    pub fn weight(&self) -> u64 {
        self.truth_table().weight()
    }

    /// Exact spectrum via the fast transform plus the trace-pairing
    /// re-index.
    pub fn walsh_spectrum(&self) -> Result<WalshSpectrum> {
        let n = self.ctx.degree();
        if n > MAX_SPECTRUM_DEGREE {
            return Err(Error::DegreeUnsupported(n));
        }
        let tb = self.truth_table();
        let mut h: Vec<i32> = (0..tb.len())
            .map(|i| 1 - 2 * i32::from(tb.get(i)))
            .collect();
        wht_inplace(&mut h);
        // gram masks: bit i of gram[j] = Tr(a_i a_j)
        let gram: Vec<u32> = (0..n)
            .map(|j| {
                let sub = self.ctx.subfield_mask(n).expect("full degree");
                self.ctx.linear_functional_mask(1 << j, sub)
            })
            .collect();
        let mut values = vec![0i32; tb.len()];
        for (w, slot) in values.iter_mut().enumerate() {
            let mut t = 0usize;
            for (j, g) in gram.iter().enumerate() {
                t |= usize::from(FieldCtx::mask_parity(w as u32, *g)) << j;
            }
            *slot = h[t];
        }
        let max_abs = values.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
        Ok(WalshSpectrum { values, max_abs })
    }

    /// Every spectrum value equals +-2^(n/2).
    pub fn is_bent(&self) -> Result<bool> {
        let n = self.ctx.degree();
        if n % 2 != 0 || n > MAX_SPECTRUM_DEGREE {
            return Err(Error::DegreeUnsupported(n));
        }
        let tb = self.truth_table();
        let mut h: Vec<i32> = (0..tb.len())
            .map(|i| 1 - 2 * i32::from(tb.get(i)))
            .collect();
        wht_inplace(&mut h);
        // bentness is invariant under the (bijective) re-index
        let target = 1i32 << (n / 2);
        Ok(h.iter().all(|&v| v == target || v == -target))
    }

    /// Algebraic degree via the binary Moebius transform of the truth
    /// table.
    pub fn anf_degree(&self) -> Result<u32> {
        let n = self.ctx.degree();
        if n > MAX_SPECTRUM_DEGREE {
            return Err(Error::DegreeUnsupported(n));
        }
        let tb = self.truth_table();
        let mut v: Vec<u8> = (0..tb.len()).map(|i| tb.get(i)).collect();
        for b in 0..n {
            let step = 1usize << b;
            for i in 0..v.len() {
                if i & step != 0 {
                    v[i] ^= v[i ^ step];
                }
            }
        }
        Ok(v.iter()
            .enumerate()
            .filter(|(_, &c)| c == 1)
            .map(|(i, _)| i.count_ones())
            .max()
            .unwrap_or(0))
    }

    /// Definitional hyper-bentness: f(x^i) stays bent for one representative
    /// i of every cyclotomic class of exponents coprime to 2^n - 1
    /// (composition with x^i permutes the nonzero field, so the composed
    /// table is a permutation of f's through the discrete-log grid).
    pub fn is_hyper_bent_definitional(&self) -> Result<bool> {
        let n = self.ctx.degree();
        if n % 2 != 0 || n > MAX_DEFINITIONAL_DEGREE {
            return Err(Error::DegreeUnsupported(n));
        }
        let order = self.ctx.order();
        let tb = self.truth_table();
        let f_bits: Vec<u8> = (0..tb.len()).map(|i| tb.get(i)).collect();
        // exp_idx[t] = bit pattern of g^t
        let g = self.ctx.generator().bits();
        let mut exp_idx = Vec::with_capacity(order as usize);
        let mut cur = 1u32;
        for _ in 0..order {
            exp_idx.push(cur);
            cur = self.ctx.mul_raw(cur, g);
        }
        let reps = coprime_class_representatives(n);
        let target = 1i32 << (n / 2);
        let all_bent = reps.par_iter().all(|&i| {
            let mut signs = vec![0i32; f_bits.len()];
            signs[0] = 1 - 2 * i32::from(f_bits[0]);
            for t in 0..order {
                let src = exp_idx[((t as u128 * i as u128) % order as u128) as usize];
                signs[exp_idx[t as usize] as usize] = 1 - 2 * i32::from(f_bits[src as usize]);
            }
            wht_inplace(&mut signs);
            signs.iter().all(|&v| v == target || v == -target)
        });
        Ok(all_bent)
    }

    /// Evaluate f along the geometric walk x = start * base^t, t = 0..count.
    /// Each trace term advances by one multiplication per step and lands in
    /// a precomputed linear-functional mask.
    pub fn evaluate_on_walk(
        &self,
        start: FieldElement,
        base: FieldElement,
        count: u64,
    ) -> Result<Vec<u8>> {
        if start.ctx_id() != self.ctx.id() || base.ctx_id() != self.ctx.id() {
            return Err(Error::ContextMismatch);
        }
        if start.is_zero() || base.is_zero() {
            return Err(Error::NonInvertibleZero);
        }
        Ok(self.eval_on_walk(start.bits(), base.bits(), count))
    }

    /// Raw-walk evaluation; the walk must avoid x = 0, which powers of
    /// nonzero elements do.
    pub(crate) fn eval_on_walk(&self, start: u32, base: u32, count: u64) -> Vec<u8> {
        debug_assert_ne!(start, 0);
        debug_assert_ne!(base, 0);
        let masks: Vec<u32> = self
            .terms
            .iter()
            .map(|t| {
                let sub = self.ctx.subfield_mask(t.o_j).expect("divisor");
                self.ctx.linear_functional_mask(t.coefficient.bits(), sub)
            })
            .collect();
        let steps: Vec<u32> = self
            .terms
            .iter()
            .map(|t| self.ctx.pow_raw(base, t.exponent))
            .collect();
        let mut powers: Vec<u32> = self
            .terms
            .iter()
            .map(|t| self.ctx.pow_raw(start, t.exponent))
            .collect();
        let mut out = Vec::with_capacity(count as usize);
        for _ in 0..count {
            let mut bit = 0u8;
            for (p, m) in powers.iter().zip(&masks) {
                bit ^= FieldCtx::mask_parity(*p, *m);
            }
            out.push(bit);
            for (p, s) in powers.iter_mut().zip(&steps) {
                *p = self.ctx.mul_raw(*p, *s);
            }
        }
        out
    }
}

fn wht_inplace(v: &mut [i32]) {
    let n = v.len();
    let mut h = 1usize;
    while h < n {
        let step = h << 1;
        let mut base = 0;
        while base < n {
            for i in base..base + h {
                let a = v[i];
                let b = v[i + h];
                v[i] = a + b;
                v[i + h] = a - b;
            }
            base += step;
        }
        h = step;
    }
}

/// Unit-circle weight criterion for hyper-bentness. Requires (and checks)
/// the invariance f(c x) = f(x) for c = g^(2^m + 1): exhaustively for
/// n <= 16, otherwise on all of U plus `samples` seeded random points.
/// Under that invariance, f with f(0) = 0 is hyper-bent iff
/// #{ i in [0, 2^m] : f(xi^i) = 1 } = 2^(m-1).
pub fn u_weight_hyperbent_test(f: &BooleanFunction, seed: u64, samples: u32) -> Result<bool> {
    let ctx = f.ctx();
    let n = ctx.degree();
    if n % 2 != 0 {
        return Err(Error::DegreeUnsupported(n));
    }
    let m = n / 2;
    let u_order = (1u64 << m) + 1;
    let g = ctx.generator();
    let c = ctx.pow(g, u_order);

    if f.evaluate(ctx.zero())? != 0 {
        return Err(Error::InvarianceViolated);
    }

    if n <= MAX_DEFINITIONAL_DEGREE {
        let tb = f.truth_table();
        for bits in 1..=ctx.order() {
            let x = ctx.element(bits as u32).expect("in range");
            let cx = ctx.mul(c, x);
            if tb.get(x.bits() as usize) != tb.get(cx.bits() as usize) {
                return Err(Error::InvarianceViolated);
            }
        }
    } else {
        // all of U
        let xi = ctx.pow(g, ctx.order() / u_order);
        let on_u = f.eval_on_walk(1, xi.bits(), u_order);
        let shifted = f.eval_on_walk(ctx.mul(c, ctx.one()).bits(), xi.bits(), u_order);
        if on_u != shifted {
            return Err(Error::InvarianceViolated);
        }
        // seeded random field points
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let bits = (rng.gen::<u64>() % (ctx.order() + 1)) as u32;
            let x = ctx.element(bits).expect("in range");
            if f.evaluate(x)? != f.evaluate(ctx.mul(c, x))? {
                return Err(Error::InvarianceViolated);
            }
        }
    }

    let xi = ctx.pow(g, ctx.order() / u_order);
    let on_u = f.eval_on_walk(1, xi.bits(), u_order);
    let weight: u64 = on_u.iter().map(|&b| u64::from(b)).sum();
    Ok(weight == 1u64 << (m - 1))
}

/// Membership flag for the partial-spread class: Tr_1^4(b) = 0 for the
/// GF(16) coefficient b.
pub fn ps_ap_flag(ctx: &Arc<FieldCtx>, b: FieldElement) -> Result<bool> {
    Ok(ctx.subfield_trace(4, b)? == 0)
}
