//! Bounded solver for generalized Ramanujan-Nagell equations
//! D1 x^2 + D2 = eta^2 p^k, and the bridge from their solution sets to
//! admissible Kloosterman values on half-degree subfields.
//!
//! eta is stored squared (eta in {1, sqrt 2, 2}) so everything stays in
//! exact integers. Completeness beyond k_max is cited, not re-proven; all
//! outputs are labeled complete up to k_max.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RnEquation {
    pub d1: u64,
    pub d2: u64,
    pub eta_sq: u64,
    pub p: u64,
    pub k_max: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RnSolution {
    pub x: u128,
    pub k: u32,
}

impl RnEquation {
    pub fn new(d1: u64, d2: u64, eta_sq: u64, p: u64, k_max: u32) -> Result<RnEquation> {
        if d1 == 0 || d2 == 0 {
            return Err(Error::InvalidInput("D1 and D2 must be positive".into()));
        }
        if ![1, 2, 4].contains(&eta_sq) {
            return Err(Error::InvalidInput("eta^2 must be 1, 2 or 4".into()));
        }
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if k_max > 128 {
            return Err(Error::InvalidInput("k_max must be <= 128".into()));
        }
        Ok(RnEquation {
            d1,
            d2,
            eta_sq,
            p,
            k_max,
        })
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// All solutions with k <= k_max, by iterating k and exact integer square
/// root testing; sorted by k.
pub fn solve(eq: &RnEquation) -> Vec<RnSolution> {
    let mut out = Vec::new();
    let d1 = BigUint::from(eq.d1);
    let d2 = BigUint::from(eq.d2);
    let mut pk = BigUint::one();
    let p = BigUint::from(eq.p);
    for k in 0..=eq.k_max {
        let rhs = BigUint::from(eq.eta_sq) * &pk;
        pk *= &p;
        if rhs < d2 {
            continue;
        }
        let t = &rhs - &d2;
        if (&t % &d1) != BigUint::zero() {
            continue;
        }
        let v = &t / &d1;
        let r = v.sqrt();
        if &r * &r == v {
            out.push(RnSolution {
                x: r.to_u128().expect("x^2 <= 4 p^128 / d1 fits 128 bits"),
                k,
            });
        }
    }
    out
}

/// One Weil-sum branch of the half-degree analysis: the equation it reduces
/// to, its bounded solution set, and the Kloosterman values admissible at
/// the requested half-degree m1 after the 4-divisibility filter.
#[derive(Debug, Clone, Serialize)]
pub struct BranchReport {
    /// Q_(2m1)(a) value this branch corresponds to, as a multiple of 2^m1.
    pub q_per_2m1: i64,
    pub equation: Option<RnEquation>,
    pub solutions: Vec<RnSolution>,
    /// K candidates at this m1 before the divisibility filter.
    pub candidates: Vec<i64>,
    /// rejected (K, reason)
    pub rejected: Vec<(i64, String)>,
    /// admissible K at this m1
    pub admissible: Vec<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KloostermanLinkReport {
    pub m1: u32,
    pub k_max: u32,
    pub branches: Vec<BranchReport>,
    /// all admissible K values at this m1
    pub admissible: Vec<i64>,
}

/// For odd m1 >= 3 and a in GF(2^m1)*, a member with b a primitive fifth
/// root of unity is hyper-bent iff 3(1 - K_2m1(a)) + Q_2m1(a) = -5. With
/// the descent identity this pins K_m1(a) to the solutions of
///   3 x^2 + 5 = 4 * 2^m1      (Q = 2 * 2^m1, x = 1 - K),
///   15 y^2 + 1 = 2 * 2^m1     (Q = -4 * 2^m1, y = (1 - K)/5),
/// and Q = 0 dies on integrality. 4 | K filters the candidates.
pub fn kloosterman_admissible(m1: u32, k_max: u32) -> Result<KloostermanLinkReport> {
    if m1 % 2 == 0 || m1 < 3 {
        return Err(Error::InvalidInput(
            "half-degree analysis needs odd m1 >= 3".into(),
        ));
    }
    let mut branches = Vec::new();

    // Q = 0: 3(1 - K) = -5 has no integer solution
    branches.push(BranchReport {
        q_per_2m1: 0,
        equation: None,
        solutions: Vec::new(),
        candidates: Vec::new(),
        rejected: vec![(0, "3(1 - K) = -5 has no integer solution".into())],
        admissible: Vec::new(),
    });

    // Q = 2 * 2^m1: 3 x^2 + 5 = 4 * 2^k with k = m1, x = +-(1 - K)
    let eq9 = RnEquation::new(3, 5, 4, 2, k_max)?;
    let sols9 = solve(&eq9);
    let mut b9 = BranchReport {
        q_per_2m1: 2,
        equation: Some(eq9),
        solutions: sols9.clone(),
        candidates: Vec::new(),
        rejected: Vec::new(),
        admissible: Vec::new(),
    };
    for s in &sols9 {
        if s.k != m1 {
            continue;
        }
        let x = s.x as i64;
        for k_val in [1 - x, 1 + x] {
            b9.candidates.push(k_val);
            if k_val % 4 == 0 {
                b9.admissible.push(k_val);
            } else {
                b9.rejected.push((k_val, "not divisible by 4".into()));
            }
        }
    }
    branches.push(b9);

    // Q = -4 * 2^m1: 15 y^2 + 1 = 2 * 2^k with k = m1, y = +-(1 - K)/5
    let eq11 = RnEquation::new(15, 1, 2, 2, k_max)?;
    let sols11 = solve(&eq11);
    let mut b11 = BranchReport {
        q_per_2m1: -4,
        equation: Some(eq11),
        solutions: sols11.clone(),
        candidates: Vec::new(),
        rejected: Vec::new(),
        admissible: Vec::new(),
    };
    for s in &sols11 {
        if s.k != m1 {
            continue;
        }
        let y = s.x as i64;
        for k_val in [1 - 5 * y, 1 + 5 * y] {
            b11.candidates.push(k_val);
            if k_val % 4 == 0 {
                b11.admissible.push(k_val);
            } else {
                b11.rejected.push((k_val, "not divisible by 4".into()));
            }
        }
    }
    branches.push(b11);

    let mut admissible: Vec<i64> = branches.iter().flat_map(|b| b.admissible.clone()).collect();
    admissible.sort_unstable();
    Ok(KloostermanLinkReport {
        m1,
        k_max,
        branches,
        admissible,
    })
}
