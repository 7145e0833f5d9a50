use regugen_core::report::Status;
use regugen_core::witness::{verify, witness_by_id};

#[test]
fn probe_su4_even_4() {
    let w = witness_by_id("su4-even(4)").unwrap();
    for r in verify(&w) {
        println!("{:?} {} expected={} actual={}", r.status, r.check, r.expected, r.actual);
    }
}

#[test]
fn probe_su4_3() {
    let w = witness_by_id("su4-3").unwrap();
    for r in verify(&w) {
        println!("{:?} {} expected={} actual={}", r.status, r.check, r.expected, r.actual);
    }
}

#[test]
fn probe_sl2_9() {
    let w = witness_by_id("sl2-9").unwrap();
    for r in verify(&w) {
        println!("{:?} {} expected={} actual={}", r.status, r.check, r.expected, r.actual);
    }
}

#[test]
fn probe_su5_3() {
    let w = witness_by_id("su5-3").unwrap();
    let t0 = std::time::Instant::now();
    for r in verify(&w) {
        println!("{:?} {} expected={} actual={}", r.status, r.check, r.expected, r.actual);
        assert_ne!(r.status, Status::Fail);
    }
    println!("su5-3 took {:?}", t0.elapsed());
}

#[test]
fn probe_sp6_9() {
    let w = witness_by_id("sp6-9").unwrap();
    let t0 = std::time::Instant::now();
    for r in verify(&w) {
        println!("{:?} {} expected={} actual={}", r.status, r.check, r.expected, r.actual);
        assert_ne!(r.status, Status::Fail);
    }
    println!("sp6-9 took {:?}", t0.elapsed());
}

use regugen_core::classes::{delta_brute, delta_star, enumerate_classes, DEFAULT_ENUM_BUDGET};
use regugen_core::element::GroupSpec;

#[test]
fn probe_su42_delta() {
    let t0 = std::time::Instant::now();
    let spec = GroupSpec::su(4, 2).unwrap();
    let ct = enumerate_classes(&spec, DEFAULT_ENUM_BUDGET).unwrap();
    println!("SU(4,2): order {} classes {} in {:?}", ct.order, ct.class_count(), t0.elapsed());
    for c in &ct.classes {
        println!("  {} size {} order {}", c.label, c.size, c.element_order);
    }
    let regs = ct.regular_unipotent_classes(&spec).unwrap();
    println!("regular classes: {:?}", regs.iter().map(|&i| &ct.classes[i].label).collect::<Vec<_>>());
    for &r in &regs {
        for c3 in ct.classes_of_order(9) {
            let d = delta_brute(&ct, r, r, c3).unwrap();
            println!("delta({}, {}, {}) = {}", ct.classes[r].label, ct.classes[r].label, ct.classes[c3].label, d);
        }
    }
    println!("total {:?}", t0.elapsed());
}

#[test]
fn probe_sp43_delta() {
    let t0 = std::time::Instant::now();
    let spec = GroupSpec::sp(4, 3).unwrap();
    let ct = enumerate_classes(&spec, DEFAULT_ENUM_BUDGET).unwrap();
    println!("Sp(4,3): order {} classes {} in {:?}", ct.order, ct.class_count(), t0.elapsed());
    let regs = ct.regular_unipotent_classes(&spec).unwrap();
    println!("regular: {:?}", regs.iter().map(|&i| &ct.classes[i].label).collect::<Vec<_>>());
    for &r in &regs {
        for c3 in ct.classes_of_order(10) {
            let d = delta_brute(&ct, r, r, c3).unwrap();
            println!("delta({}, same, {}) = {}", ct.classes[r].label, ct.classes[c3].label, d);
        }
    }
    println!("total {:?}", t0.elapsed());
}

#[test]
fn probe_genpairs_small() {
    // SL_3(2): delta*(reg, reg, 7a) >= 7
    for (name, spec, o3, bound) in [
        ("SL(3,2)", GroupSpec::sl(3, 2).unwrap(), 7u64, 7u64),
        ("SL(3,3)", GroupSpec::sl(3, 3).unwrap(), 13, 39),
        ("SU(3,3)", GroupSpec::su(3, 3).unwrap(), 7, 56),
    ] {
        let t0 = std::time::Instant::now();
        let ct = enumerate_classes(&spec, DEFAULT_ENUM_BUDGET).unwrap();
        let full = u128::from(ct.order);
        let regs = ct.regular_unipotent_classes(&spec).unwrap();
        for &r in &regs {
            let mut best = 0;
            for c3 in ct.classes_of_order(o3) {
                let ds = delta_star(&ct, r, r, c3, full).unwrap();
                let d = delta_brute(&ct, r, r, c3).unwrap();
                assert!(ds <= d);
                best = best.max(ds);
            }
            println!("{name} class {}: best delta* = {best} (bound {bound}) {:?}", ct.classes[r].label, t0.elapsed());
            assert!(best >= bound);
        }
    }
}

#[test]
fn probe_genpairs_big() {
    for (spec, o3, bound) in [
        (GroupSpec::sl(3, 4).unwrap(), 7u64, 56u64),
        (GroupSpec::su(4, 2).unwrap(), 9, 405),
    ] {
        let t0 = std::time::Instant::now();
        let name = spec.name.clone();
        let ct = enumerate_classes(&spec, DEFAULT_ENUM_BUDGET).unwrap();
        let full = u128::from(ct.order);
        let regs = ct.regular_unipotent_classes(&spec).unwrap();
        println!("{name}: {} regular classes", regs.len());
        for &r in &regs {
            let mut best = 0;
            for c3 in ct.classes_of_order(o3) {
                let d = delta_brute(&ct, r, r, c3).unwrap();
                let ds = delta_star(&ct, r, r, c3, full).unwrap();
                println!("  {}: delta={d} delta*={ds}", ct.classes[c3].label);
                assert!(ds <= d);
                best = best.max(ds);
            }
            println!("{name} class {}: best delta* = {best} (bound {bound}) {:?}", ct.classes[r].label, t0.elapsed());
            assert!(best >= bound);
        }
    }
}

#[test]
fn probe_su42_sigma_h() {
    use regugen_core::chain::{build_chain, ChainOptions};
    use regugen_core::chartab::{h_from_formula, sigma_brute, theta, ThetaInput};
    use regugen_core::classes::{count_subgroup_conjugates_containing, subgroup_elements};
    use regugen_core::element::Element;
    use num_bigint::{BigInt, BigUint};
    use rand::{Rng, SeedableRng};

    let t0 = std::time::Instant::now();
    let spec = GroupSpec::su(4, 2).unwrap();
    let ct = enumerate_classes(&spec, DEFAULT_ENUM_BUDGET).unwrap();
    let reg = ct.regular_unipotent_classes(&spec).unwrap()[0];
    let c9s = ct.classes_of_order(9);
    let c3 = *c9s.iter().find(|&&c| delta_brute(&ct, reg, reg, c).unwrap() == 486).unwrap();
    let g3 = ct.classes[reg].rep.clone(); // placeholder
    let g3 = ct.classes[c3].rep.clone();

    // search: close g3 with random conjugates of the regular rep until a
    // proper subgroup of order 648 appears
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let reg_rep = ct.classes[reg].rep.clone();
    let mut h_gens: Option<Vec<Element>> = None;
    for trial in 0..500 {
        // random word over the group generators as conjugator
        let mut w = spec.gens[rng.gen_range(0..spec.gens.len())].clone();
        for _ in 0..6 {
            w = w.mul(&spec.gens[rng.gen_range(0..spec.gens.len())]);
        }
        let cand = w.inverse().mul(&reg_rep).mul(&w);
        let chain = build_chain(&[g3.clone(), cand.clone()], &ChainOptions::with_target(25920)).unwrap();
        if chain.order() == 648 {
            println!("found order-648 subgroup on trial {trial}");
            h_gens = Some(vec![g3.clone(), cand]);
            break;
        }
    }
    let h_gens = h_gens.expect("order-648 subgroup found");
    let h_elems = subgroup_elements(&ct, &h_gens).unwrap();
    assert_eq!(h_elems.len(), 648);
    // sigma via the subgroup's own class table
    let h_spec = GroupSpec::explicit("H648", h_gens.clone(), Some(BigUint::from(648u32)));
    let h_ct = enumerate_classes(&h_spec, DEFAULT_ENUM_BUDGET).unwrap();
    let sigma = sigma_brute(&ct, &h_ct, reg, reg, &g3).unwrap();
    println!("sigma = {sigma}");
    assert_eq!(sigma, 81);
    // h(g3, H) two ways
    let h_count = count_subgroup_conjugates_containing(&spec.gens, &ct, &h_gens, &g3, 10_000).unwrap();
    println!("h(g3, H) by orbit = {h_count}");
    assert_eq!(h_count, 1);
    // formula route: N_G(H) = H (self-normalizing maximal), fused classes
    // of order 9 inside H within the ambient class c3
    let cg_x = BigUint::from(ct.order / ct.classes[c3].size);
    let mut cents: Vec<BigUint> = Vec::new();
    for (i, hc) in h_ct.classes.iter().enumerate() {
        let _ = i;
        if ct.class_of(&hc.rep).unwrap() == c3 {
            cents.push(BigUint::from(h_ct.order / hc.size));
        }
    }
    println!("|C_G(g3)| = {cg_x}, fused centralizers = {cents:?}");
    let h_formula = h_from_formula(&cg_x, &cents, 9, 1).unwrap();
    println!("h by formula = {h_formula}");
    assert_eq!(h_formula, BigUint::from(1u32));
    let th = theta(&ThetaInput { delta: BigInt::from(486), corrections: vec![(h_formula, BigUint::from(sigma))] });
    assert_eq!(th.value, BigInt::from(405));
    println!("theta = {} in {:?}", th.value, t0.elapsed());
}

#[test]
fn probe_dixon_cross() {
    use regugen_core::dixon::dixon_build;
    use num_bigint::BigUint;
    for spec in [
        GroupSpec::sym(3),
        GroupSpec::sym(4),
        GroupSpec::sl(2, 3).unwrap(),
        GroupSpec::dihedral(5),
        GroupSpec::sl(2, 5).unwrap(),
        GroupSpec::su(3, 2).unwrap(),
    ] {
        let t0 = std::time::Instant::now();
        let name = spec.name.clone();
        let ct = enumerate_classes(&spec, DEFAULT_ENUM_BUDGET).unwrap();
        let t = dixon_build(&ct).unwrap();
        let r = ct.class_count();
        let mut checked = 0u64;
        for c1 in 0..r {
            for c2 in 0..r {
                for c3 in 0..r {
                    let brute = delta_brute(&ct, c1, c2, c3).unwrap();
                    let tab = t.delta_from_table(c1, c2, c3).unwrap();
                    assert_eq!(BigUint::from(brute), tab, "{name} ({c1},{c2},{c3})");
                    checked += 1;
                }
            }
        }
        println!("{name}: r={r}, {checked} triples agree, {:?}", t0.elapsed());
    }
}

#[test]
fn probe_su52_extended() {
    let t0 = std::time::Instant::now();
    let spec = GroupSpec::su(5, 2).unwrap();
    let ct = enumerate_classes(&spec, DEFAULT_ENUM_BUDGET).unwrap();
    println!("SU(5,2): order {} classes {} in {:?}", ct.order, ct.class_count(), t0.elapsed());
    let regs = ct.regular_unipotent_classes(&spec).unwrap();
    println!("regular: {:?}", regs.iter().map(|&i| &ct.classes[i].label).collect::<Vec<_>>());
    for &r in &regs {
        for c3 in ct.classes_of_order(11) {
            let d = delta_brute(&ct, r, r, c3).unwrap();
            println!("delta({}, same, {}) = {}", ct.classes[r].label, ct.classes[c3].label, d);
        }
    }
    println!("total {:?}", t0.elapsed());
}
