//! Family-level agreement suites: the three Lambda routes against the two
//! hyper-bentness oracles, the coefficient case table, and the subfield
//! classifications.

use hbf_core::expsums::{kloosterman, weil_q};
use hbf_core::family::{FamilyParams, LambdaMethod};
use hbf_core::field::FieldElement;

#[test]
fn all_lambda_routes_and_oracles_agree_n12_exhaustive() {
    // 64 a x 16 b: lambda (three routes via search) vs the unit-circle
    // weight criterion vs the all-exponents definitional oracle
    let fam = FamilyParams::new(12).unwrap();
    let a_dom: Vec<FieldElement> = fam.ctx().subfield_elements(6).unwrap().collect();
    let b_dom = fam.all_b().to_vec();
    let recs = fam.search(&a_dom, &b_dom).unwrap();
    assert_eq!(recs.len(), 1024);

    let mut hyper_count = 0u32;
    for (ai, &a) in a_dom.iter().enumerate() {
        for (bi, &b) in b_dom.iter().enumerate() {
            let r = &recs[ai * 16 + bi];
            assert_eq!(r.a_hex, a.to_hex());
            let by_def = fam.is_hyperbent(a, b, LambdaMethod::Definitional).unwrap();
            let by_weight = fam.u_weight_test(a, b, 1, 0).unwrap();
            assert_eq!(r.hyperbent, by_def, "a={:x} b={:x}", a, b);
            assert_eq!(r.hyperbent, by_weight, "a={:x} b={:x}", a, b);
            if r.hyperbent {
                hyper_count += 1;
            }
        }
    }
    // frozen from two independent implementations of the search
    assert_eq!(hyper_count, 238);
}

#[test]
fn b_zero_members_are_hyperbent_exactly_at_kloosterman_zeros() {
    let fam = FamilyParams::new(12).unwrap();
    let zero_b = fam.ctx().zero();
    let mut zeros = 0;
    for a in fam.ctx().subfield_elements(6).unwrap() {
        let hb = fam.is_hyperbent(a, zero_b, LambdaMethod::Direct).unwrap();
        let k = kloosterman(fam.ctx(), 6, a).unwrap();
        assert_eq!(hb, !a.is_zero() && k == 0, "a={:x}", a);
        if hb {
            zeros += 1;
        }
    }
    assert_eq!(zeros, 12, "Kloosterman zeros in GF(64)*");
}

#[test]
fn classification_matches_direct_verdict_for_b_one() {
    let fam = FamilyParams::new(12).unwrap();
    let one = fam.ctx().one();
    for a in fam.ctx().subfield_elements(6).unwrap() {
        if a.is_zero() {
            continue;
        }
        let verdict = fam.is_hyperbent(a, one, LambdaMethod::Direct).unwrap();
        assert_eq!(
            fam.hyperbent_criterion_b_one(a).unwrap(),
            verdict,
            "a={:x}",
            a
        );
    }
}

#[test]
fn classification_matches_direct_verdict_for_primitive_b() {
    let fam = FamilyParams::new(12).unwrap();
    for &c in fam.primitive_trace0_coords() {
        let b = fam.b_element(c);
        for a in fam.ctx().subfield_elements(6).unwrap() {
            if a.is_zero() {
                continue;
            }
            let verdict = fam.is_hyperbent(a, b, LambdaMethod::Direct).unwrap();
            assert_eq!(
                fam.hyperbent_criterion_b_primitive(a, b).unwrap(),
                verdict,
                "a={:x} b={:x}",
                a,
                b
            );
        }
    }
}

#[test]
fn primitive_b_rejects_wrong_coefficient() {
    let fam = FamilyParams::new(12).unwrap();
    let a = fam.ctx().subfield_elements(6).unwrap().nth(3).unwrap();
    assert!(fam.hyperbent_criterion_b_primitive(a, fam.beta()).is_err());
}

#[test]
fn subfield_enumeration_n12_matches_polynomial_roots() {
    let fam = FamilyParams::new(12).unwrap();
    let ctx = fam.ctx().clone();
    let hits = fam.enumerate_subfield_hyperbents().unwrap();
    assert_eq!(hits.len(), 16);

    // expected root set: (a + 1)(a^3 + a^2 + 1) = 0 over the GF(8) subfield
    let mut roots = Vec::new();
    for a in ctx.subfield_elements(3).unwrap() {
        let cubic = ctx.add(ctx.add(ctx.pow(a, 3), ctx.square(a)), ctx.one());
        let v = ctx.mul(ctx.add(a, ctx.one()), cubic);
        if v.is_zero() {
            roots.push(a.to_hex());
        }
    }
    assert_eq!(roots.len(), 4);
    let beta_coords: Vec<String> = (1..=4u64)
        .map(|i| fam.format_b_coords(fam.ctx().pow(fam.beta(), i)).unwrap())
        .collect();
    for r in &hits {
        assert!(roots.contains(&r.a_hex), "{}", r.a_hex);
        assert!(beta_coords.contains(&r.b_coords), "{}", r.b_coords);
        assert!(!r.ps_ap, "beta powers have trace 1");
    }
}

#[test]
fn subfield_enumeration_n20_is_empty() {
    let fam = FamilyParams::new(20).unwrap();
    assert!(fam.enumerate_subfield_hyperbents().unwrap().is_empty());
}

#[test]
fn verify_identities_all_pass_n12_n20() {
    for n in [12u32, 20] {
        let fam = FamilyParams::new(n).unwrap();
        for (name, pass) in fam.verify_identities().unwrap() {
            assert!(pass, "n={n}: {name}");
        }
    }
}

#[test]
fn closed_forms_cover_documented_domain_n12() {
    let fam = FamilyParams::new(12).unwrap();
    let ctx = fam.ctx().clone();
    // subfield a: every b has a closed form; general a: only 0, 1, and the
    // quartic roots
    let a_sub = ctx.subfield_elements(3).unwrap().nth(2).unwrap();
    let a_gen = ctx
        .subfield_elements(6)
        .unwrap()
        .find(|x| !ctx.in_subfield(3, *x).unwrap())
        .unwrap();
    for c in 0..16u8 {
        let b = fam.b_element(c);
        assert!(fam.closed_form_applies(a_sub, b));
        let expected = c == 0 || c == 1 || fam.primitive_trace0_coords().contains(&c);
        assert_eq!(fam.closed_form_applies(a_gen, b), expected, "c={c}");
        if fam.closed_form_applies(a_gen, b) {
            assert_eq!(
                fam.lambda_from_kq(a_gen, b).unwrap(),
                fam.lambda_direct(a_gen, b).unwrap()
            );
        } else {
            assert!(fam.lambda_from_kq(a_gen, b).is_err());
        }
    }
}

#[test]
fn five_divides_s0_numerator_m6_m10() {
    for n in [12u32, 20] {
        let fam = FamilyParams::new(n).unwrap();
        let m = fam.m();
        for a in fam.ctx().subfield_elements(m).unwrap() {
            if a.is_zero() {
                continue;
            }
            let k = kloosterman(fam.ctx(), m, a).unwrap();
            let q = weil_q(fam.ctx(), m, a).unwrap();
            assert_eq!((1 - k + 2 * q) % 5, 0, "n={n} a={:x}", a);
            assert_eq!(fam.s_sums(a).unwrap().s[0], (1 - k + 2 * q) / 5);
        }
    }
}

#[test]
fn found_hyperbents_have_half_degree_anf_and_bent_weight() {
    let fam = FamilyParams::new(12).unwrap();
    for rec in fam.enumerate_subfield_hyperbents().unwrap() {
        let a = fam.ctx().parse_element(&rec.a_hex).unwrap();
        let b = fam.parse_b(&rec.b_coords).unwrap();
        let f = fam.member(a, b).unwrap();
        assert_eq!(f.anf_degree().unwrap(), 6);
        let w = f.weight() as i64;
        assert!(w == 2048 - 32 || w == 2048 + 32, "bent weight law, got {w}");
        assert!(f.is_bent().unwrap());
    }
}
