//! Full element enumeration for groups up to a few times 10^7 elements,
//! conjugacy class tables with canonical labels, brute-force class-algebra
//! structure constants, generating-pair counts, and subgroup-conjugate
//! counts.
//!
//! Elements are packed into u128 keys for the hash index; class labels are
//! `<elementOrder><letter>` with letters assigned by decreasing class size
//! and ties broken by the canonical byte encoding of the lexicographically
//! least class member, so tables are reproducible regardless of worker
//! count or generator order.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{build_chain, ChainError, ChainOptions};
use crate::element::{Element, ElementError, GroupSpec, Packer};
use crate::util::{det_map, DetHashMap};

pub const DEFAULT_ENUM_BUDGET: u64 = 30_000_000;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("enumeration budget exceeded: group has more than {0} elements")]
    Budget(u64),
    #[error("group closure has order {actual}, but the family formula gives {expected}")]
    OrderMismatch { actual: u128, expected: BigUint },
    #[error("no generators supplied")]
    NoGenerators,
    #[error("class index {0} out of range")]
    BadClassId(usize),
    #[error("label `{0}` does not resolve to a class")]
    UnknownLabel(String),
    #[error("label `{label}` is ambiguous between classes {candidates:?}; pass an explicit class index")]
    AmbiguousLabel { label: String, candidates: Vec<usize> },
    #[error("element is not in the enumerated group")]
    NotInGroup,
    #[error("subgroup-conjugate orbit budget exceeded ({0} subgroups)")]
    OrbitBudget(usize),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Element(#[from] ElementError),
}

#[derive(Clone, Debug)]
pub struct ClassInfo {
    pub label: String,
    pub size: u64,
    pub element_order: u64,
    /// The lexicographically least member (by canonical byte encoding).
    pub rep: Element,
    pub rep_key: u128,
    /// Index of the class containing the inverses.
    pub inverse_class: usize,
}

/// A fully enumerated group with its conjugacy classes and a constant-time
/// element-to-class index.
pub struct ClassTable {
    pub group_name: String,
    pub order: u64,
    pub classes: Vec<ClassInfo>,
    packer: Packer,
    template: Element,
    elements: Vec<u128>,
    index: DetHashMap<u128, u32>,
    class_ids: Vec<u32>,
}

impl ClassTable {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn elements(&self) -> &[u128] {
        &self.elements
    }

    pub fn unpack(&self, key: u128) -> Element {
        self.packer.unpack(key, &self.template)
    }

    pub fn pack(&self, e: &Element) -> u128 {
        self.packer.pack(e)
    }

    /// Class id of an element of the group.
    pub fn class_of(&self, e: &Element) -> Result<usize, EngineError> {
        self.class_of_key(self.packer.pack(e))
            .ok_or(EngineError::NotInGroup)
    }

    pub fn class_of_key(&self, key: u128) -> Option<usize> {
        self.index
            .get(&key)
            .map(|&i| self.class_ids[i as usize] as usize)
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.index.contains_key(&self.packer.pack(e))
    }

    /// Least exponent of the group: lcm of the class element orders.
    pub fn exponent(&self) -> u64 {
        self.classes
            .iter()
            .fold(1u64, |acc, c| crate::util::lcm_u64(acc, c.element_order))
    }

    pub fn classes_of_order(&self, order: u64) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&i| self.classes[i].element_order == order)
            .collect()
    }

    /// Classes whose members are regular unipotent for the given group spec.
    pub fn regular_unipotent_classes(&self, spec: &GroupSpec) -> Result<Vec<usize>, EngineError> {
        let mut out = Vec::new();
        for (i, c) in self.classes.iter().enumerate() {
            if let Element::Mat(m) = &c.rep {
                if m.is_unipotent() && crate::element::is_regular_unipotent(m, spec)? {
                    out.push(i);
                }
            }
        }
        Ok(out)
    }

    /// Resolves a label like `9a`. When other classes share the same element
    /// order and size (so the letter assignment is a tie-break), resolution
    /// is refused and the candidate ids are reported.
    pub fn resolve_label(&self, label: &str) -> Result<usize, EngineError> {
        let idx = self
            .classes
            .iter()
            .position(|c| c.label == label)
            .ok_or_else(|| EngineError::UnknownLabel(label.to_string()))?;
        let me = &self.classes[idx];
        let twins: Vec<usize> = (0..self.classes.len())
            .filter(|&i| {
                self.classes[i].element_order == me.element_order
                    && self.classes[i].size == me.size
            })
            .collect();
        if twins.len() > 1 {
            return Err(EngineError::AmbiguousLabel {
                label: label.to_string(),
                candidates: twins,
            });
        }
        Ok(idx)
    }

    /// Label lookup without the ambiguity guard, for report rendering.
    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }
}

/// Picks a small deterministic sub-list of the generators that still reaches
/// the expected order (checked with a cheap stabilizer chain), so that the
/// quadratic-cost enumeration passes below run over two or three generators
/// instead of a full root-element family.
pub fn reduce_generators(spec: &GroupSpec) -> Result<Vec<Element>, EngineError> {
    let gens: Vec<Element> = spec
        .gens
        .iter()
        .filter(|g| !g.is_identity())
        .cloned()
        .collect();
    let Some(expected) = spec.expected_order.as_ref() else {
        return Ok(gens);
    };
    let Ok(target) = u128::try_from(expected.clone()) else {
        return Ok(gens);
    };
    if gens.len() <= 3 {
        return Ok(gens);
    }
    let opts = ChainOptions::with_target(target);
    let mut chosen: Vec<Element> = vec![gens[0].clone()];
    let mut best = build_chain(&chosen, &opts)?.order();
    for g in gens.iter().skip(1) {
        if best == target {
            break;
        }
        let mut cand = chosen.clone();
        cand.push(g.clone());
        let order = build_chain(&cand, &opts)?.order();
        if order > best {
            chosen = cand;
            best = order;
        }
    }
    if best == target {
        Ok(chosen)
    } else {
        // greedy growth stalled; fall back to the full list
        Ok(gens)
    }
}

/// Enumerates the full group and its conjugacy classes.
pub fn enumerate_classes(spec: &GroupSpec, budget: u64) -> Result<ClassTable, EngineError> {
    if spec.gens.is_empty() {
        return Err(EngineError::NoGenerators);
    }
    let gens = reduce_generators(spec)?;
    let template = spec.gens[0].identity_like();
    let packer = Packer::for_element(&template)?;

    // breadth-first closure from the identity
    let mut elements: Vec<u128> = Vec::new();
    let mut index: DetHashMap<u128, u32> = det_map();
    let id_key = packer.pack(&template);
    elements.push(id_key);
    index.insert(id_key, 0);
    let mut frontier: Vec<Element> = vec![template.clone()];
    while let Some(cur) = frontier.pop() {
        for g in &gens {
            let next = cur.mul(g);
            let key = packer.pack(&next);
            if !index.contains_key(&key) {
                if elements.len() as u64 >= budget {
                    return Err(EngineError::Budget(budget));
                }
                index.insert(key, elements.len() as u32);
                elements.push(key);
                frontier.push(next);
            }
        }
    }
    if let Some(expected) = &spec.expected_order {
        if BigUint::from(elements.len() as u64) != *expected {
            return Err(EngineError::OrderMismatch {
                actual: elements.len() as u128,
                expected: expected.clone(),
            });
        }
    }

    // conjugacy classes: orbit of each unvisited element under conjugation
    let gen_invs: Vec<Element> = gens.iter().map(Element::inverse).collect();
    let mut class_of_idx: Vec<u32> = vec![u32::MAX; elements.len()];
    let mut raw_classes: Vec<(u128, u64, u64)> = Vec::new(); // (lexmin key, size, order)
    let mut min_bytes_cache: Vec<u8> = Vec::new();
    for start in 0..elements.len() {
        if class_of_idx[start] != u32::MAX {
            continue;
        }
        let class_id = raw_classes.len() as u32;
        let start_el = packer.unpack(elements[start], &template);
        let mut queue: Vec<Element> = vec![start_el.clone()];
        class_of_idx[start] = class_id;
        let mut size = 1u64;
        let mut min_key = elements[start];
        min_bytes_cache.clear();
        min_bytes_cache.extend_from_slice(&start_el.pack_bytes());
        while let Some(cur) = queue.pop() {
            for (g, gi) in gens.iter().zip(gen_invs.iter()) {
                let conj = gi.mul(&cur).mul(g);
                let key = packer.pack(&conj);
                let idx = index[&key] as usize;
                if class_of_idx[idx] == u32::MAX {
                    class_of_idx[idx] = class_id;
                    size += 1;
                    let bytes = conj.pack_bytes();
                    if bytes.as_slice() < min_bytes_cache.as_slice() {
                        min_bytes_cache.clear();
                        min_bytes_cache.extend_from_slice(&bytes);
                        min_key = key;
                    }
                    queue.push(conj);
                }
            }
        }
        let rep = packer.unpack(min_key, &template);
        let order = rep.order();
        raw_classes.push((min_key, size, order));
    }

    // canonical class ordering: element order asc, size desc, lex-min member
    let mut order_idx: Vec<usize> = (0..raw_classes.len()).collect();
    let lex_bytes: Vec<Vec<u8>> = raw_classes
        .iter()
        .map(|&(k, _, _)| packer.unpack(k, &template).pack_bytes())
        .collect();
    order_idx.sort_by(|&a, &b| {
        let (_, sa, oa) = raw_classes[a];
        let (_, sb, ob) = raw_classes[b];
        oa.cmp(&ob)
            .then(sb.cmp(&sa))
            .then(lex_bytes[a].cmp(&lex_bytes[b]))
    });
    let mut remap = vec![0u32; raw_classes.len()];
    for (new_id, &old_id) in order_idx.iter().enumerate() {
        remap[old_id] = new_id as u32;
    }

    let mut classes: Vec<ClassInfo> = Vec::with_capacity(raw_classes.len());
    let mut letter_counter: DetHashMap<u64, u32> = det_map();
    for &old_id in &order_idx {
        let (key, size, order) = raw_classes[old_id];
        let rep = packer.unpack(key, &template);
        let seq = letter_counter.entry(order).or_insert(0);
        let label = format!("{}{}", order, letter(*seq));
        *seq += 1;
        classes.push(ClassInfo {
            label,
            size,
            element_order: order,
            rep,
            rep_key: key,
            inverse_class: usize::MAX,
        });
    }

    let class_ids: Vec<u32> = class_of_idx
        .iter()
        .map(|&c| remap[c as usize])
        .collect();

    let mut table = ClassTable {
        group_name: spec.name.clone(),
        order: elements.len() as u64,
        classes,
        packer,
        template,
        elements,
        index,
        class_ids,
    };
    for i in 0..table.classes.len() {
        let inv = table.classes[i].rep.inverse();
        let inv_class = table.class_of(&inv)?;
        table.classes[i].inverse_class = inv_class;
    }
    Ok(table)
}

fn letter(mut n: u32) -> String {
    // a, b, ..., z, aa, ab, ...
    let mut s = Vec::new();
    loop {
        s.push(b'a' + (n % 26) as u8);
        n /= 26;
        if n == 0 {
            break;
        }
        n -= 1;
    }
    s.reverse();
    String::from_utf8(s).unwrap()
}

/// Number of pairs (g1, g2) in c1 x c2 with g1 g2 = rep(c3), counted as
/// |{g1 in c1 : g1^-1 rep(c3) in c2}| through the member index.
pub fn delta_brute(ct: &ClassTable, c1: usize, c2: usize, c3: usize) -> Result<u64, EngineError> {
    let g3 = ct
        .classes
        .get(c3)
        .ok_or(EngineError::BadClassId(c3))?
        .rep
        .clone();
    delta_brute_fixed(ct, c1, c2, &g3)
}

/// Same count with an explicit fixed right-hand element (not necessarily the
/// stored representative).
pub fn delta_brute_fixed(
    ct: &ClassTable,
    c1: usize,
    c2: usize,
    g3: &Element,
) -> Result<u64, EngineError> {
    if c1 >= ct.classes.len() || c2 >= ct.classes.len() {
        return Err(EngineError::BadClassId(c1.max(c2)));
    }
    if !ct.contains(g3) {
        return Err(EngineError::NotInGroup);
    }
    let count = ct
        .elements
        .par_chunks(1 << 14)
        .map(|chunk| {
            let mut local = 0u64;
            for &key in chunk {
                if ct.class_of_key(key) != Some(c1) {
                    continue;
                }
                let g1 = ct.unpack(key);
                let g2 = g1.inverse().mul(g3);
                if ct.class_of_key(ct.pack(&g2)) == Some(c2) {
                    local += 1;
                }
            }
            local
        })
        .sum();
    Ok(count)
}

/// Pairs counted by `delta_brute` that additионally generate a subgroup of
/// the stated full order. Candidate pairs are collected deterministically
/// and their chain orders checked in parallel.
pub fn delta_star(
    ct: &ClassTable,
    c1: usize,
    c2: usize,
    c3: usize,
    full_order: u128,
) -> Result<u64, EngineError> {
    let g3 = ct
        .classes
        .get(c3)
        .ok_or(EngineError::BadClassId(c3))?
        .rep
        .clone();
    let mut pairs: Vec<(Element, Element)> = Vec::new();
    for &key in &ct.elements {
        if ct.class_of_key(key) != Some(c1) {
            continue;
        }
        let g1 = ct.unpack(key);
        let g2 = g1.inverse().mul(&g3);
        if ct.class_of_key(ct.pack(&g2)) == Some(c2) {
            pairs.push((g1, g2));
        }
    }
    let opts = ChainOptions::with_target(full_order);
    let count = pairs
        .par_iter()
        .map(|(g1, g2)| {
            let chain = build_chain(&[g1.clone(), g2.clone()], &opts)
                .expect("pair chain within budget");
            u64::from(chain.order() == full_order)
        })
        .sum();
    Ok(count)
}

/// Enumerates the elements of the subgroup generated by `gens` (must be far
/// below the ambient order), as sorted packed keys of the ambient table.
pub fn subgroup_elements(ct: &ClassTable, gens: &[Element]) -> Result<Vec<u128>, EngineError> {
    let template = gens
        .first()
        .map(|g| g.identity_like())
        .ok_or(EngineError::NoGenerators)?;
    let mut seen: DetHashMap<u128, ()> = det_map();
    let id_key = ct.pack(&template);
    seen.insert(id_key, ());
    let mut frontier = vec![template];
    while let Some(cur) = frontier.pop() {
        for g in gens {
            let next = cur.mul(g);
            let key = ct.pack(&next);
            if !ct.index.contains_key(&key) {
                return Err(EngineError::NotInGroup);
            }
            if seen.insert(key, ()).is_none() {
                frontier.push(next);
            }
        }
    }
    let mut keys: Vec<u128> = seen.into_keys().collect();
    keys.sort_unstable();
    Ok(keys)
}

/// h(x, H) by direct orbit count: the number of distinct conjugates of H
/// (as element sets) containing x. The conjugation orbit is closed under
/// the ambient generators.
pub fn count_subgroup_conjugates_containing(
    ambient_gens: &[Element],
    ct: &ClassTable,
    h_gens: &[Element],
    x: &Element,
    orbit_budget: usize,
) -> Result<u64, EngineError> {
    let base = subgroup_elements(ct, h_gens)?;
    let x_key = ct.pack(x);
    if !ct.index.contains_key(&x_key) {
        return Err(EngineError::NotInGroup);
    }
    let mut seen: DetHashMap<Vec<u128>, ()> = det_map();
    let mut queue: Vec<Vec<u128>> = vec![base.clone()];
    seen.insert(base, ());
    let mut containing = 0u64;
    let gen_invs: Vec<Element> = ambient_gens.iter().map(Element::inverse).collect();
    let mut head = 0usize;
    let mut orbit: Vec<Vec<u128>> = Vec::new();
    while head < queue.len() {
        let cur = queue[head].clone();
        head += 1;
        if cur.binary_search(&x_key).is_ok() {
            containing += 1;
        }
        orbit.push(cur.clone());
        if orbit.len() > orbit_budget {
            return Err(EngineError::OrbitBudget(orbit.len()));
        }
        for (g, gi) in ambient_gens.iter().zip(gen_invs.iter()) {
            let mut img: Vec<u128> = cur
                .iter()
                .map(|&k| {
                    let e = ct.unpack(k);
                    ct.pack(&gi.mul(&e).mul(g))
                })
                .collect();
            img.sort_unstable();
            if !seen.contains_key(&img) {
                seen.insert(img.clone(), ());
                queue.push(img);
            }
        }
    }
    Ok(containing)
}

/// The class-table dump row format.
#[derive(Serialize, Deserialize)]
pub struct ClassDumpRow {
    pub label: String,
    pub size: u64,
    #[serde(rename = "elementOrder")]
    pub element_order: u64,
    pub representative: String,
}

pub fn dump_classes(ct: &ClassTable) -> Vec<ClassDumpRow> {
    ct.classes
        .iter()
        .map(|c| ClassDumpRow {
            label: c.label.clone(),
            size: c.size,
            element_order: c.element_order,
            representative: crate::element::format_element(&c.rep),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::GroupSpec;

    #[test]
    fn sym3_classes() {
        let spec = GroupSpec::sym(3);
        let ct = enumerate_classes(&spec, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(ct.order, 6);
        assert_eq!(ct.class_count(), 3);
        let mut sizes: Vec<u64> = ct.classes.iter().map(|c| c.size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(ct.classes[0].label, "1a");
        // class equation
        assert_eq!(ct.classes.iter().map(|c| c.size).sum::<u64>(), 6);
    }

    #[test]
    fn sym3_delta_2a_2a_3a() {
        let spec = GroupSpec::sym(3);
        let ct = enumerate_classes(&spec, DEFAULT_ENUM_BUDGET).unwrap();
        let c2a = ct.resolve_label("2a").unwrap();
        let c3a = ct.resolve_label("3a").unwrap();
        assert_eq!(delta_brute(&ct, c2a, c2a, c3a).unwrap(), 3);
        // two distinct transpositions always generate Sym(3)
        assert_eq!(delta_star(&ct, c2a, c2a, c3a, 6).unwrap(), 3);
        // (c, c^-1, identity) -> |c|
        let id = ct.resolve_label("1a").unwrap();
        assert_eq!(
            delta_brute(&ct, c2a, ct.classes[c2a].inverse_class, id).unwrap(),
            ct.classes[c2a].size
        );
    }

    #[test]
    fn sl2_3_has_7_classes() {
        let spec = GroupSpec::sl(2, 3).unwrap();
        let ct = enumerate_classes(&spec, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(ct.order, 24);
        assert_eq!(ct.class_count(), 7);
    }

    #[test]
    fn su3_2_classes_and_delta() {
        let spec = GroupSpec::su(3, 2).unwrap();
        let ct = enumerate_classes(&spec, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(ct.order, 216);
        // three classes of regular unipotent elements, all of order 4
        let regs = ct.regular_unipotent_classes(&spec).unwrap();
        assert_eq!(regs.len(), 3);
        for &r in &regs {
            assert_eq!(ct.classes[r].element_order, 4);
        }
        // delta(4a, 4b, 4c) = 10 for distinct regular classes
        let found = (0..3).any(|i| {
            let (a, b, c) = (regs[i % 3], regs[(i + 1) % 3], regs[(i + 2) % 3]);
            delta_brute(&ct, a, b, c).unwrap() == 10
        });
        assert!(found);
    }

    #[test]
    fn burnside_rotation_symmetry_small() {
        for spec in [GroupSpec::sym(3), GroupSpec::sym(4), GroupSpec::dihedral(5)] {
            let ct = enumerate_classes(&spec, DEFAULT_ENUM_BUDGET).unwrap();
            let r = ct.class_count();
            for c1 in 0..r {
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
                        assert_eq!(lhs, rhs, "{} ({c1},{c2},{c3})", spec.name);
                    }
                }
            }
        }
    }

    #[test]
    fn subgroup_conjugate_counts() {
        let spec = GroupSpec::sym(4);
        let ct = enumerate_classes(&spec, DEFAULT_ENUM_BUDGET).unwrap();
        // H = whole group: exactly one conjugate, containing everything
        let h = count_subgroup_conjugates_containing(
            &spec.gens,
            &ct,
            &spec.gens,
            &ct.classes[1].rep,
            10_000,
        )
        .unwrap();
        assert_eq!(h, 1);
        // H = trivial subgroup never contains a nonidentity element
        let id = ct.classes[0].rep.clone();
        let h = count_subgroup_conjugates_containing(
            &spec.gens,
            &ct,
            &[id],
            &ct.classes[1].rep,
            10_000,
        )
        .unwrap();
        assert_eq!(h, 0);
    }
}
