//! The acceptance suites: every check the toolkit is expected to reproduce,
//! each as a PASS/FAIL/INCONCLUSIVE report line. `suite_desk` runs the full
//! desk-scale set; `suite_extended` adds the long SU_5(2) enumeration.

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{build_chain, ChainOptions};
use crate::chartab::{h_from_formula, sigma_brute, theta, ThetaInput};
use crate::classes::{
    count_subgroup_conjugates_containing, delta_brute, delta_star, enumerate_classes,
    subgroup_elements, ClassTable, DEFAULT_ENUM_BUDGET,
};
use crate::dixon::dixon_build;
use crate::element::{Element, GroupSpec};
use crate::formulas::{
    formula_eval, gt1_bound_check, scan_domain, torus_coprimality, verify_union_bound,
    OrderFamily, Params, CATALOG,
};
use crate::matrix::{Family, SquareMatrix};
use crate::report::{
    sort_reports, Report, Status, PROV_CATALOG, PROV_DEFINITION, PROV_FORMULA, PROV_ORACLE,
};
use crate::witness::{catalog, mutated_sl2_9, verify};

fn mk(check: String, t0: Instant, ok: bool, expected: String, actual: String, prov: &str) -> Report {
    Report::new(
        check,
        if ok { Status::Pass } else { Status::Fail },
        expected,
        actual,
        prov,
        t0.elapsed().as_millis(),
    )
}

fn class_table(spec: &GroupSpec) -> ClassTable {
    enumerate_classes(spec, DEFAULT_ENUM_BUDGET).expect("enumeration within budget")
}

/// Criterion 1 (and the witness parts of criterion 8): replay the whole
/// built-in catalog.
pub fn witness_suite() -> Vec<Report> {
    let mut out = Vec::new();
    for w in catalog() {
        let tag = if w.id.starts_with("t2r") || w.id.starts_with("md8") {
            "crit8"
        } else {
            "crit1"
        };
        for mut r in verify(&w) {
            r.check = format!("{tag}/{}", r.check);
            out.push(r);
        }
    }
    out
}

/// Criterion 2: brute structure constants of SU_3(2) and SU_4(2), with the
/// regular classes identified by Jordan type and the order-9 class tried in
/// both Galois-twin versions; plus the order-648 subgroup correction layer.
pub fn brute_delta_suite() -> Vec<Report> {
    let mut out = Vec::new();

    // SU_3(2): three regular classes; ordered distinct triples give 10
    let t0 = Instant::now();
    let spec32 = GroupSpec::su(3, 2).unwrap();
    let ct = class_table(&spec32);
    let regs = ct.regular_unipotent_classes(&spec32).unwrap();
    let mut values = Vec::new();
    if regs.len() == 3 {
        for i in 0..3usize {
            let (a, b, c) = (regs[i], regs[(i + 1) % 3], regs[(i + 2) % 3]);
            values.push(delta_brute(&ct, a, b, c).unwrap());
            values.push(delta_brute(&ct, b, a, c).unwrap());
        }
    }
    out.push(mk(
        "crit2/su3-2/delta(4a,4b,4c)".into(),
        t0,
        values.contains(&10),
        "10".into(),
        format!("{values:?}"),
        PROV_CATALOG,
    ));

    // SU_4(2): unique regular class, delta 486 against an order-9 class
    let t0 = Instant::now();
    let spec42 = GroupSpec::su(4, 2).unwrap();
    let ct = class_table(&spec42);
    let regs = ct.regular_unipotent_classes(&spec42).unwrap();
    let mut found = Vec::new();
    for &r in &regs {
        for c3 in ct.classes_of_order(9) {
            found.push(delta_brute(&ct, r, r, c3).unwrap());
        }
    }
    out.push(mk(
        "crit2/su4-2/delta(reg,reg,9)".into(),
        t0,
        found.contains(&486),
        "486".into(),
        format!("{found:?}"),
        PROV_CATALOG,
    ));

    // correction layer: locate the order-648 overgroup of an order-9 element
    // by closing it against seeded random conjugates of the regular class
    let t0 = Instant::now();
    match su42_correction_layer(&spec42, &ct) {
        Ok((sigma, h_orbit, h_formula, theta_value)) => {
            out.push(mk(
                "crit2/su4-2/sigma-648".into(),
                t0,
                sigma == 81,
                "81".into(),
                sigma.to_string(),
                PROV_CATALOG,
            ));
            out.push(mk(
                "crit2/su4-2/h(g3,H)".into(),
                t0,
                h_orbit == 1 && h_formula == BigUint::from(1u32),
                "1 (orbit) / 1 (formula)".into(),
                format!("{h_orbit} (orbit) / {h_formula} (formula)"),
                PROV_ORACLE,
            ));
            out.push(mk(
                "crit2/su4-2/theta".into(),
                t0,
                theta_value == BigInt::from(405),
                "405".into(),
                theta_value.to_string(),
                PROV_CATALOG,
            ));
        }
        Err(e) => out.push(Report::new(
            "crit2/su4-2/sigma-648",
            Status::Inconclusive,
            "order-648 subgroup analysis",
            e,
            PROV_ORACLE,
            t0.elapsed().as_millis(),
        )),
    }
    out
}

fn su42_correction_layer(
    spec: &GroupSpec,
    ct: &ClassTable,
) -> Result<(u64, u64, BigUint, BigInt), String> {
    let reg = ct.regular_unipotent_classes(spec).map_err(|e| e.to_string())?[0];
    let c3 = ct
        .classes_of_order(9)
        .into_iter()
        .find(|&c| delta_brute(ct, reg, reg, c).unwrap_or(0) == 486)
        .ok_or("no order-9 class with delta 486")?;
    let g3 = ct.classes[c3].rep.clone();
    let reg_rep = ct.classes[reg].rep.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut h_gens: Option<Vec<Element>> = None;
    for _ in 0..2000 {
        let mut w = spec.gens[rng.gen_range(0..spec.gens.len())].clone();
        for _ in 0..6 {
            w = w.mul(&spec.gens[rng.gen_range(0..spec.gens.len())]);
        }
        let cand = w.inverse().mul(&reg_rep).mul(&w);
        let chain = build_chain(
            &[g3.clone(), cand.clone()],
            &ChainOptions::with_target(u128::from(ct.order)),
        )
        .map_err(|e| e.to_string())?;
        if chain.order() == 648 {
            h_gens = Some(vec![g3.clone(), cand]);
            break;
        }
    }
    let h_gens = h_gens.ok_or("no order-648 subgroup found in the seeded search")?;
    let h_elems = subgroup_elements(ct, &h_gens).map_err(|e| e.to_string())?;
    if h_elems.len() != 648 {
        return Err(format!("subgroup has {} elements", h_elems.len()));
    }
    let h_spec = GroupSpec::explicit("H648", h_gens.clone(), Some(BigUint::from(648u32)));
    let h_ct = enumerate_classes(&h_spec, DEFAULT_ENUM_BUDGET).map_err(|e| e.to_string())?;
    let sigma = sigma_brute(ct, &h_ct, reg, reg, &g3).map_err(|e| e.to_string())?;
    let h_orbit = count_subgroup_conjugates_containing(&spec.gens, ct, &h_gens, &g3, 10_000)
        .map_err(|e| e.to_string())?;
    // formula route, with N_G(H) = H for this self-normalizing subgroup
    let cg_x = BigUint::from(ct.order / ct.classes[c3].size);
    let mut cents = Vec::new();
    for hc in &h_ct.classes {
        if ct.class_of(&hc.rep).map_err(|e| e.to_string())? == c3 {
            cents.push(BigUint::from(h_ct.order / hc.size));
        }
    }
    let h_formula = h_from_formula(&cg_x, &cents, 9, 1).map_err(|e| e.to_string())?;
    let th = theta(&ThetaInput {
        delta: BigInt::from(486),
        corrections: vec![(h_formula.clone(), BigUint::from(sigma))],
    });
    Ok((sigma, h_orbit, h_formula, th.value))
}

/// Criterion 3: generating-pair counts dominate the stored theta bounds and
/// never exceed the plain structure constants.
pub fn genpairs_suite() -> Vec<Report> {
    let cases: [(GroupSpec, u64, u64); 6] = [
        (GroupSpec::sl(3, 2).unwrap(), 7, 7),
        (GroupSpec::sl(3, 3).unwrap(), 13, 39),
        (GroupSpec::su(3, 3).unwrap(), 7, 56),
        (GroupSpec::sl(3, 4).unwrap(), 7, 56),
        (GroupSpec::su(3, 2).unwrap(), 4, 8),
        (GroupSpec::su(4, 2).unwrap(), 9, 405),
    ];
    let mut out = Vec::new();
    for (spec, target_order, bound) in cases {
        let t0 = Instant::now();
        let name = spec.name.clone();
        let ct = class_table(&spec);
        let full = u128::from(ct.order);
        let regs = ct.regular_unipotent_classes(&spec).unwrap();
        let mut ok = !regs.is_empty();
        let mut monotone = true;
        let mut detail = Vec::new();
        for &r in &regs {
            let mut best = 0u64;
            if name == "SU(3,2)" {
                // the three regular classes in distinct roles (c1, c2, c3)
                for &c3 in &regs {
                    for &c2 in &regs {
                        if c2 == r || c3 == r || c2 == c3 {
                            continue;
                        }
                        let d = delta_brute(&ct, r, c2, c3).unwrap();
                        let ds = delta_star(&ct, r, c2, c3, full).unwrap();
                        monotone &= ds <= d;
                        best = best.max(ds);
                    }
                }
            } else {
                for c3 in ct.classes_of_order(target_order) {
                    let d = delta_brute(&ct, r, r, c3).unwrap();
                    let ds = delta_star(&ct, r, r, c3, full).unwrap();
                    monotone &= ds <= d;
                    best = best.max(ds);
                }
            }
            detail.push(format!("{}:{}", ct.classes[r].label, best));
            ok &= best >= bound;
        }
        out.push(mk(
            format!("crit3/{name}/genpairs"),
            t0,
            ok && monotone,
            format!(">= {bound} for every regular class, and delta* <= delta"),
            detail.join(" "),
            PROV_CATALOG,
        ));
    }
    out
}

/// Criterion 4: the closed-form Sp_4 value at q = 3 equals brute counting on
/// the enumerated group for each regular class against an order-10 class.
pub fn formula_vs_brute_suite() -> Vec<Report> {
    let t0 = Instant::now();
    let expected = formula_eval("sp4-odd", &Params::q(3)).unwrap();
    let spec = GroupSpec::sp(4, 3).unwrap();
    let ct = class_table(&spec);
    let regs = ct.regular_unipotent_classes(&spec).unwrap();
    let mut ok = regs.len() == 2;
    let mut detail = Vec::new();
    for &r in &regs {
        let hit: Vec<u64> = ct
            .classes_of_order(10)
            .into_iter()
            .map(|c3| delta_brute(&ct, r, r, c3).unwrap())
            .collect();
        ok &= hit.iter().any(|&v| BigInt::from(v) == expected);
        detail.push(format!("{}:{:?}", ct.classes[r].label, hit));
    }
    vec![mk(
        "crit4/sp4-3/formula-vs-brute".into(),
        t0,
        ok,
        format!("{expected} for each regular class"),
        detail.join(" "),
        PROV_ORACLE,
    )]
}

fn eq1_cross_specs() -> Vec<GroupSpec> {
    vec![
        GroupSpec::sym(3),
        GroupSpec::sym(4),
        GroupSpec::sl(2, 3).unwrap(),
        GroupSpec::dihedral(5),
        GroupSpec::sl(2, 5).unwrap(),
        GroupSpec::su(3, 2).unwrap(),
    ]
}

/// Criterion 5: the character-sum evaluator agrees with brute counting on
/// every class triple of the six tiny groups.
pub fn eq1_cross_suite() -> Vec<Report> {
    let mut out = Vec::new();
    for spec in eq1_cross_specs() {
        let t0 = Instant::now();
        let name = spec.name.clone();
        let ct = class_table(&spec);
        let table = match dixon_build(&ct) {
            Ok(t) => t,
            Err(e) => {
                out.push(Report::new(
                    format!("crit5/{name}/all-triples"),
                    Status::Fail,
                    "table builds".to_string(),
                    e.to_string(),
                    PROV_ORACLE,
                    t0.elapsed().as_millis(),
                ));
                continue;
            }
        };
        let r = ct.class_count();
        let mut mismatches = 0u64;
        for c1 in 0..r {
            for c2 in 0..r {
                for c3 in 0..r {
                    let brute = delta_brute(&ct, c1, c2, c3).unwrap();
                    match table.delta_from_table(c1, c2, c3) {
                        Ok(v) if v == BigUint::from(brute) => {}
                        _ => mismatches += 1,
                    }
                }
            }
        }
        out.push(mk(
            format!("crit5/{name}/all-triples"),
            t0,
            mismatches == 0,
            format!("{} triples agree", r * r * r),
            format!("{mismatches} mismatches"),
            PROV_ORACLE,
        ));
    }
    out
}

/// Criterion 6: every catalog formula is a nonnegative integer across its
/// domain scan, and the export round-trips with all stored constants intact.
pub fn catalog_integrity_suite() -> Vec<Report> {
    let mut out = Vec::new();
    for entry in CATALOG {
        let t0 = Instant::now();
        let params = scan_domain(entry.id);
        if params.is_empty() {
            // stored constant: evaluate once
            let v = formula_eval(entry.id, &Params::default());
            out.push(mk(
                format!("crit6/catalog/{}", entry.id),
                t0,
                v.is_ok(),
                "stored constant".into(),
                v.map(|x| x.to_string()).unwrap_or_else(|e| e.to_string()),
                PROV_CATALOG,
            ));
            continue;
        }
        let mut bad = Vec::new();
        for p in &params {
            if formula_eval(entry.id, p).is_err() {
                bad.push(format!("{p:?}"));
            }
        }
        out.push(mk(
            format!("crit6/catalog/{}", entry.id),
            t0,
            bad.is_empty(),
            format!("nonnegative integer at {} domain points", params.len()),
            if bad.is_empty() {
                "all integral and nonnegative".into()
            } else {
                bad.join("; ")
            },
            PROV_FORMULA,
        ));
    }
    // export round trip with the stored constants verbatim
    let t0 = Instant::now();
    let v = crate::formulas::export_catalog_json();
    let s = serde_json::to_string_pretty(&v).unwrap();
    let reparsed: serde_json::Value = serde_json::from_str(&s).unwrap();
    let round = serde_json::to_string_pretty(&reparsed).unwrap();
    let constants_ok = [
        "53416",
        "486",
        "405",
        "81",
        "10",
        "8",
        "7293",
        "7410",
        "245440",
        "241540",
        "9373625",
        "808763850752",
        "808582807552",
        "519168",
        "808582288384",
        "64896",
    ]
    .iter()
    .all(|want| {
        v.as_array()
            .unwrap()
            .iter()
            .any(|e| e["body"]["value"].as_str() == Some(*want))
    });
    out.push(mk(
        "crit6/catalog/export-round-trip".into(),
        t0,
        s == round && constants_ok,
        "byte-identical export with all stored constants".into(),
        if s == round && constants_ok {
            "identical".into()
        } else {
            "mismatch".into()
        },
        PROV_CATALOG,
    ));
    out
}

/// Criterion 7: the subfield union bounds, power-of-two sandwiches, torus
/// coprimality, and the cyclic-subgroup order bound, all in exact integers.
pub fn inequality_suite() -> Vec<Report> {
    let mut out = Vec::new();
    for family in [OrderFamily::F4, OrderFamily::TwistedE6] {
        let t0 = Instant::now();
        let name = if family == OrderFamily::F4 { "f4" } else { "2e6" };
        let mut union_bad = Vec::new();
        let mut sandwich_bad = Vec::new();
        for m in 1..=60u64 {
            let r = verify_union_bound(family, m).unwrap();
            if !r.union_holds {
                union_bad.push(m);
            }
            if !r.sandwich_lower_holds || !r.sandwich_upper_holds {
                sandwich_bad.push(m);
            }
        }
        out.push(mk(
            format!("crit7/{name}/union-bound"),
            t0,
            union_bad.is_empty(),
            "strict inequality for 1 <= m <= 60".into(),
            if union_bad.is_empty() {
                "holds".into()
            } else {
                format!("fails at m = {union_bad:?}")
            },
            PROV_FORMULA,
        ));
        out.push(mk(
            format!("crit7/{name}/sandwich"),
            t0,
            sandwich_bad.is_empty(),
            "power-of-two sandwich for 1 <= m <= 60".into(),
            if sandwich_bad.is_empty() {
                "holds".into()
            } else {
                format!("fails at m = {sandwich_bad:?}")
            },
            PROV_CATALOG,
        ));
    }
    let t0 = Instant::now();
    let torus_ok = (1..=5u64).all(|m| torus_coprimality(m).unwrap_or(false));
    out.push(mk(
        "crit7/2f4/torus-coprimality".into(),
        t0,
        torus_ok,
        "gcd(|T|, |G:T|) = 1 for m <= 5".into(),
        if torus_ok { "coprime".into() } else { "not coprime".into() },
        PROV_CATALOG,
    ));
    let t0 = Instant::now();
    let mut gt1_bad = Vec::new();
    for n in (4..=20u64).step_by(2) {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            if !gt1_bound_check(n, q) {
                gt1_bad.push((n, q));
            }
        }
    }
    out.push(mk(
        "crit7/sl/cyclic-order-bound".into(),
        t0,
        gt1_bad.is_empty(),
        "q^((n+2)/2) < q^n - 1 for even 4 <= n <= 20, q <= 9".into(),
        if gt1_bad.is_empty() {
            "holds".into()
        } else {
            format!("fails at {gt1_bad:?}")
        },
        PROV_CATALOG,
    ));
    out
}

/// Criterion 8 (block-matrix part): the regular-unipotent classification is
/// consistent on constructed block matrices.
pub fn classification_suite() -> Vec<Report> {
    let t0 = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    let block = |q: u64, parts: &[usize]| {
        let f = crate::field::gf(q).unwrap();
        let blocks: Vec<SquareMatrix> = parts
            .iter()
            .map(|&s| SquareMatrix::jordan_block(&f, s))
            .collect();
        let refs: Vec<&SquareMatrix> = blocks.iter().collect();
        SquareMatrix::block_diag(&refs)
    };
    let spec = |family: Family, n: usize, q: u64| GroupSpec {
        family,
        n,
        q,
        form: None,
        gens: vec![],
        expected_order: None,
        name: format!("{family}({n},{q})"),
    };
    let regular =
        |m: &SquareMatrix, s: &GroupSpec| crate::element::is_regular_unipotent(m, s).unwrap();
    let mut check = |label: &str, got: bool, want: bool| {
        if got != want {
            ok = false;
        }
        detail.push(format!(
            "{label}:{}",
            if got == want { "ok" } else { "BAD" }
        ));
    };

    // split orthogonal in dimension six, both parities
    check(
        "o+6-even",
        regular(&block(2, &[2, 4]), &spec(Family::OmegaPlus, 6, 2)),
        true,
    );
    check(
        "o+6-odd",
        regular(&block(3, &[5, 1]), &spec(Family::OmegaPlus, 6, 3)),
        true,
    );
    check(
        "o+6-odd-wrong",
        regular(&block(3, &[4, 2]), &spec(Family::OmegaPlus, 6, 3)),
        false,
    );
    // odd-dimensional orthogonal
    check(
        "o7-odd",
        regular(&block(3, &[7]), &spec(Family::OmegaOdd, 7, 3)),
        true,
    );
    // minus-type orthogonal, both parities
    check(
        "o-8-odd",
        regular(&block(3, &[7, 1]), &spec(Family::OmegaMinus, 8, 3)),
        true,
    );
    check(
        "o-8-even",
        regular(&block(2, &[6, 2]), &spec(Family::OmegaMinus, 8, 2)),
        true,
    );
    // symplectic 2-elements: the doubled block is not regular
    check(
        "sp4-j4",
        regular(&block(2, &[4]), &spec(Family::Sp, 4, 2)),
        true,
    );
    check(
        "sp4-j2j2",
        regular(&block(2, &[2, 2]), &spec(Family::Sp, 4, 2)),
        false,
    );
    // the triality-group shape diag(J_2, J_6) has type [6,2]
    check(
        "3d4-shape",
        block(2, &[2, 6]).jordan_type().unwrap() == vec![6, 2],
        true,
    );
    // unlisted combinations refuse rather than guess
    check(
        "o+8-unsupported",
        crate::element::is_regular_unipotent(&block(2, &[4, 4]), &spec(Family::OmegaPlus, 8, 2))
            .is_err(),
        true,
    );

    vec![mk(
        "crit8/classification-table".into(),
        t0,
        ok,
        "all block-matrix classifications consistent".into(),
        detail.join(" "),
        PROV_CATALOG,
    )]
}

/// Criterion 10: property checks with fixed seeds, covering the module
/// invariants that are not already a by-product of earlier criteria.
pub fn property_suite() -> Vec<Report> {
    let mut out = Vec::new();

    // class equation and inverse-map closure over the test set
    let t0 = Instant::now();
    let mut bad = Vec::new();
    for spec in [
        GroupSpec::sym(3),
        GroupSpec::sym(4),
        GroupSpec::dihedral(5),
        GroupSpec::sl(2, 3).unwrap(),
        GroupSpec::sl(2, 5).unwrap(),
        GroupSpec::sl(3, 2).unwrap(),
        GroupSpec::su(3, 2).unwrap(),
        GroupSpec::sp(4, 3).unwrap(),
        GroupSpec::su(4, 2).unwrap(),
    ] {
        let name = spec.name.clone();
        let ct = class_table(&spec);
        let sum: u64 = ct.classes.iter().map(|c| c.size).sum();
        if sum != ct.order {
            bad.push(format!("{name}: class equation"));
        }
        if ct.classes.iter().any(|c| ct.order % c.size != 0) {
            bad.push(format!("{name}: size divisibility"));
        }
        let mut inv_targets: Vec<usize> = ct.classes.iter().map(|c| c.inverse_class).collect();
        inv_targets.sort_unstable();
        inv_targets.dedup();
        if inv_targets.len() != ct.class_count() {
            bad.push(format!("{name}: inverse map not a permutation"));
        }
        for (i, c) in ct.classes.iter().enumerate() {
            if ct.classes[c.inverse_class].inverse_class != i {
                bad.push(format!("{name}: inverse map not an involution"));
                break;
            }
        }
    }
    out.push(mk(
        "crit10/class-equation".into(),
        t0,
        bad.is_empty(),
        "class equation, divisibility, inverse closure".into(),
        if bad.is_empty() { "hold".into() } else { bad.join("; ") },
        PROV_DEFINITION,
    ));

    // rotation symmetry of the triple counts, exhaustive on orders <= 2000
    let t0 = Instant::now();
    let mut bad = Vec::new();
    for spec in [
        GroupSpec::sym(3),
        GroupSpec::sym(4),
        GroupSpec::dihedral(5),
        GroupSpec::sl(2, 3).unwrap(),
        GroupSpec::sl(2, 5).unwrap(),
        GroupSpec::sl(3, 2).unwrap(),
        GroupSpec::su(3, 2).unwrap(),
        GroupSpec::sl(2, 9).unwrap(),
    ] {
        let name = spec.name.clone();
        let ct = class_table(&spec);
        let r = ct.class_count();
        'outer: for c1 in 0..r {
            for c2 in 0..r {
                for c3 in 0..r {
                    let lhs = ct.classes[c3].size * delta_brute(&ct, c1, c2, c3).unwrap();
                    let rhs = ct.classes[c1].size
                        * delta_brute(
                            &ct,
                            c2,
                            ct.classes[c3].inverse_class,
                            ct.classes[c1].inverse_class,
                        )
                        .unwrap();
                    if lhs != rhs {
                        bad.push(format!("{name} ({c1},{c2},{c3})"));
                        break 'outer;
                    }
                }
            }
        }
    }
    out.push(mk(
        "crit10/delta-rotation-symmetry".into(),
        t0,
        bad.is_empty(),
        "|c3| delta(c1,c2,c3) invariant under rotation with inversion".into(),
        if bad.is_empty() { "holds".into() } else { bad.join("; ") },
        PROV_ORACLE,
    ));

    // swap symmetry of the character-sum evaluator, seeded triples
    let t0 = Instant::now();
    let spec = GroupSpec::su(3, 2).unwrap();
    let ct = class_table(&spec);
    let table = dixon_build(&ct).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let r = ct.class_count();
    let mut ok = true;
    for _ in 0..64 {
        let (c1, c2, c3) = (
            rng.gen_range(0..r),
            rng.gen_range(0..r),
            rng.gen_range(0..r),
        );
        ok &= table.delta_from_table(c1, c2, c3).unwrap()
            == table.delta_from_table(c2, c1, c3).unwrap();
    }
    out.push(mk(
        "crit10/delta-swap-symmetry".into(),
        t0,
        ok,
        "delta(c1,c2,c3) = delta(c2,c1,c3) on 64 seeded triples".into(),
        if ok { "holds".into() } else { "violated".into() },
        PROV_ORACLE,
    ));

    // table validation (orthogonality) and file round trip
    let t0 = Instant::now();
    let validated = table.validate().is_ok();
    let s = table.to_json_string();
    let back = crate::chartab::CharacterTable::from_json_str(&s).unwrap();
    let round = back.to_json_string();
    out.push(mk(
        "crit10/table-orthogonality-roundtrip".into(),
        t0,
        validated && s == round && back == table,
        "orthogonality holds and serialize . parse = identity".into(),
        format!("validated={validated} roundtrip={}", s == round),
        PROV_DEFINITION,
    ));

    // chain determinism: rebuild with permuted and conjugated generators
    let t0 = Instant::now();
    let spec = GroupSpec::sl(2, 9).unwrap();
    let c1 = build_chain(&spec.gens, &ChainOptions::default()).unwrap();
    let c2 = build_chain(&spec.gens, &ChainOptions::default()).unwrap();
    let mut rev = spec.gens.clone();
    rev.reverse();
    let c3 = build_chain(&rev, &ChainOptions::default()).unwrap();
    let t = spec.gens[0].clone();
    let conj: Vec<Element> = spec
        .gens
        .iter()
        .map(|g| t.inverse().mul(g).mul(&t))
        .collect();
    let c4 = build_chain(&conj, &ChainOptions::default()).unwrap();
    let deterministic = c1.base() == c2.base() && c1.orbit_lengths() == c2.orbit_lengths();
    let invariant = c1.order() == c3.order() && c1.order() == c4.order();
    out.push(mk(
        "crit10/chain-determinism".into(),
        t0,
        deterministic && invariant && c1.order() == 720,
        "identical rebuild; order invariant under permutation and conjugation".into(),
        format!(
            "rebuild={deterministic} order={} permuted={} conjugated={}",
            c1.order(),
            c3.order(),
            c4.order()
        ),
        PROV_DEFINITION,
    ));

    // mutation sanity: a corrupted witness must fail
    let t0 = Instant::now();
    let reports = verify(&mutated_sl2_9());
    let failed = reports.iter().any(|r| r.status == Status::Fail);
    out.push(mk(
        "crit10/mutation-sanity".into(),
        t0,
        failed,
        "corrupted witness produces a FAIL".into(),
        if failed { "failed as expected".into() } else { "all passed".into() },
        PROV_DEFINITION,
    ));

    // deleting a generator from a generation witness must lose the group
    let t0 = Instant::now();
    let w = crate::witness::witness_by_id("sp6-9").unwrap();
    let mut env: Vec<(String, Element)> = Vec::new();
    for (name, def) in &w.defs {
        let v = match def {
            crate::witness::ElementDef::Explicit(e) => e.clone(),
            crate::witness::ElementDef::Word(word) => crate::witness::eval_word(word, &|n| {
                env.iter().find(|(k, _)| k == n).map(|(_, v)| v.clone())
            })
            .unwrap(),
        };
        env.push((name.clone(), v));
    }
    let u = env.iter().find(|(k, _)| k == "u").unwrap().1.clone();
    let alone = build_chain(&[u], &ChainOptions::default()).unwrap();
    let full = crate::formulas::order_of(OrderFamily::Sp, 6, 9).unwrap();
    let lost = BigUint::from(alone.order()) < full;
    out.push(mk(
        "crit10/generator-deletion".into(),
        t0,
        lost,
        "a single generator spans only a cyclic group".into(),
        format!("order {}", alone.order()),
        PROV_DEFINITION,
    ));

    // verification determinism: two catalog runs agree modulo runtime
    let t0 = Instant::now();
    let w = crate::witness::witness_by_id("su4-3").unwrap();
    let snapshot = |reports: Vec<Report>| -> Vec<(String, Status, String, String)> {
        reports
            .into_iter()
            .map(|r| (r.check, r.status, r.expected, r.actual))
            .collect()
    };
    let a = snapshot(verify(&w));
    let b = snapshot(verify(&w));
    out.push(mk(
        "crit10/verify-idempotence".into(),
        t0,
        a == b,
        "two verification runs agree apart from timing".into(),
        if a == b { "identical".into() } else { "diverged".into() },
        PROV_DEFINITION,
    ));

    out
}

/// Criterion 9 (extended tier): the SU_5(2) structure constant by full
/// enumeration, with wall-clock and size budgets mapped to INCONCLUSIVE.
pub fn extended_suite() -> Vec<Report> {
    let t0 = Instant::now();
    let budget = std::time::Duration::from_secs(60 * 60);
    let spec = GroupSpec::su(5, 2).unwrap();
    let ct = match enumerate_classes(&spec, DEFAULT_ENUM_BUDGET) {
        Ok(ct) => ct,
        Err(e) => {
            return vec![Report::new(
                "crit9/su5-2/delta(reg,reg,11)",
                Status::Inconclusive,
                "53416",
                e.to_string(),
                PROV_CATALOG,
                t0.elapsed().as_millis(),
            )]
        }
    };
    if t0.elapsed() > budget {
        return vec![Report::new(
            "crit9/su5-2/delta(reg,reg,11)",
            Status::Inconclusive,
            "53416",
            format!("enumeration exceeded the budget: {:?}", t0.elapsed()),
            PROV_CATALOG,
            t0.elapsed().as_millis(),
        )];
    }
    let regs = ct.regular_unipotent_classes(&spec).unwrap();
    let mut values = Vec::new();
    for &r in &regs {
        for c3 in ct.classes_of_order(11) {
            values.push(delta_brute(&ct, r, r, c3).unwrap());
        }
    }
    vec![mk(
        "crit9/su5-2/delta(reg,reg,11)".into(),
        t0,
        !values.is_empty() && values.contains(&53416),
        "53416".into(),
        format!("{values:?}"),
        PROV_CATALOG,
    )]
}

/// All desk-scale acceptance checks, sorted by check id.
pub fn suite_desk() -> Vec<Report> {
    let mut out = Vec::new();
    out.extend(witness_suite());
    out.extend(brute_delta_suite());
    out.extend(genpairs_suite());
    out.extend(formula_vs_brute_suite());
    out.extend(eq1_cross_suite());
    out.extend(catalog_integrity_suite());
    out.extend(inequality_suite());
    out.extend(classification_suite());
    out.extend(property_suite());
    sort_reports(&mut out);
    out
}

/// Desk suite plus the long-running SU_5(2) check.
pub fn suite_extended() -> Vec<Report> {
    let mut out = suite_desk();
    out.extend(extended_suite());
    sort_reports(&mut out);
    out
}

pub use crate::report::exit_code as suite_exit_code;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::exit_code;

    #[test]
    fn classification_and_catalog_pass_quickly() {
        for r in classification_suite() {
            assert_eq!(r.status, Status::Pass, "{}: {}", r.check, r.actual);
        }
        for r in catalog_integrity_suite() {
            assert_eq!(r.status, Status::Pass, "{}: {}", r.check, r.actual);
        }
    }

    #[test]
    fn exit_code_rule() {
        let ok = vec![Report::new("a", Status::Pass, "", "", PROV_CATALOG, 0)];
        assert_eq!(exit_code(&ok), 0);
        let mixed = vec![
            Report::new("a", Status::Pass, "", "", PROV_CATALOG, 0),
            Report::new("b", Status::Inconclusive, "", "", PROV_CATALOG, 0),
        ];
        assert_eq!(exit_code(&mixed), 0);
        let bad = vec![Report::new("c", Status::Fail, "", "", PROV_CATALOG, 0)];
        assert_eq!(exit_code(&bad), 1);
    }
}
