//! Deterministic Schreier-Sims stabilizer chains over two point universes:
//! nonzero vectors of GF(q)^n for matrix groups (so centers act nontrivially
//! and full orders come out) and 0-based points for permutations.
//!
//! Base points are chosen in a fixed order (first moved standard basis
//! vector at each level), Schreier generators are processed in generation
//! order, and a fixed batch of seed words is sifted first so deep levels
//! fill early. When the caller knows the target order, construction stops as
//! soon as the transversal product reaches it: the product of orbit sizes
//! never exceeds the order of the generated group, so hitting the target
//! certifies it.

use thiserror::Error;

use crate::element::{apply_point, base_candidates, Element};
use crate::util::{det_map, DetHashMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("orbit budget exceeded: {points} points > {budget}")]
    Budget { points: usize, budget: usize },
    #[error("cannot mix matrix and permutation generators")]
    MixedUniverse,
    #[error("membership test requires a fully verified chain")]
    Unverified,
}

#[derive(Clone, Debug)]
pub struct ChainOptions {
    /// Stop as soon as the chain order reaches this value.
    pub known_order: Option<u128>,
    /// Cap on the total number of transversal points across all levels.
    pub point_budget: usize,
    /// Deterministic pseudorandom words sifted before Schreier closure.
    pub seed_words: usize,
}

impl Default for ChainOptions {
    fn default() -> Self {
        ChainOptions {
            known_order: None,
            point_budget: 10_000_000,
            seed_words: 32,
        }
    }
}

impl ChainOptions {
    pub fn with_target(order: u128) -> ChainOptions {
        ChainOptions {
            known_order: Some(order),
            ..ChainOptions::default()
        }
    }
}

struct Level {
    base: u64,
    gens: Vec<Element>,
    orbit: DetHashMap<u64, u32>,
    pts: Vec<u64>,
    fwd: Vec<Element>,
    inv: Vec<Element>,
    /// orbit-expansion progress: gens applied so far, per point
    swept: Vec<u32>,
    /// Schreier progress: pairs (pt, gen) with gen < done[pt] are processed
    done: Vec<u32>,
    /// lowest point index that may have unprocessed Schreier pairs
    dirty_from: usize,
}

impl Level {
    fn new(base: u64, identity: &Element) -> Level {
        let mut orbit = det_map();
        orbit.insert(base, 0u32);
        Level {
            base,
            gens: Vec::new(),
            orbit,
            pts: vec![base],
            fwd: vec![identity.clone()],
            inv: vec![identity.clone()],
            swept: vec![0],
            done: vec![0],
            dirty_from: 0,
        }
    }
}

pub struct StabilizerChain {
    levels: Vec<Level>,
    identity: Element,
    verified: bool,
    order: u128,
}

impl StabilizerChain {
    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn base(&self) -> Vec<u64> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.pts.len()).collect()
    }

    /// True when the chain was closed by full Schreier verification rather
    /// than by hitting a known target order.
    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Membership by sifting; only valid on a verified chain.
    pub fn contains(&self, g: &Element) -> Result<bool, ChainError> {
        if !self.verified {
            return Err(ChainError::Unverified);
        }
        let mut cur = g.clone();
        for lvl in &self.levels {
            let beta = apply_point(&cur, lvl.base);
            match lvl.orbit.get(&beta) {
                None => return Ok(false),
                Some(&i) => {
                    if i != 0 {
                        cur = lvl.inv[i as usize].mul(&cur);
                    }
                }
            }
        }
        Ok(cur.is_identity())
    }
}

/// Builds a stabilizer chain for the generated group.
pub fn build_chain(gens: &[Element], opts: &ChainOptions) -> Result<StabilizerChain, ChainError> {
    let nontrivial: Vec<&Element> = gens.iter().filter(|g| !g.is_identity()).collect();
    let Some(first) = nontrivial.first() else {
        let identity = gens
            .first()
            .map(|g| g.identity_like())
            .unwrap_or_else(|| Element::Perm(crate::perm::Perm::identity(1)));
        return Ok(StabilizerChain {
            levels: Vec::new(),
            identity,
            verified: true,
            order: 1,
        });
    };
    let mixed = nontrivial
        .iter()
        .any(|g| std::mem::discriminant(*g) != std::mem::discriminant(*first));
    if mixed {
        return Err(ChainError::MixedUniverse);
    }

    let mut b = Builder {
        chain: StabilizerChain {
            levels: Vec::new(),
            identity: first.identity_like(),
            verified: false,
            order: 1,
        },
        candidates: base_candidates(first),
        budget: opts.point_budget,
        target: opts.known_order,
        total_points: 0,
    };

    for g in &nontrivial {
        b.insert(0, (*g).clone())?;
        if b.target_reached() {
            return Ok(b.finish(false));
        }
    }
    // seed words: deterministic pseudorandom products of the generators
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) as usize
    };
    for _ in 0..opts.seed_words {
        let len = 4 + next() % 12;
        let mut w = nontrivial[next() % nontrivial.len()].clone();
        for _ in 1..len {
            w = w.mul(nontrivial[next() % nontrivial.len()]);
        }
        b.insert(0, w)?;
        if b.target_reached() {
            return Ok(b.finish(false));
        }
    }
    // Schreier closure, scanning levels top-down in generation order
    loop {
        if b.target_reached() {
            return Ok(b.finish(false));
        }
        let Some((lvl, pt_i, gen_i)) = b.next_schreier_task() else {
            return Ok(b.finish(true));
        };
        let level = &b.chain.levels[lvl];
        let g = level.gens[gen_i].clone();
        let pt = level.pts[pt_i];
        let image = apply_point(&g, pt);
        let img_idx = level.orbit[&image] as usize;
        let s = level.inv[img_idx].mul(&g).mul(&level.fwd[pt_i]);
        if let Some((at, residue)) = b.sift_from(lvl + 1, s) {
            b.insert(at, residue)?;
        }
    }
}

struct Builder {
    chain: StabilizerChain,
    candidates: Vec<u64>,
    budget: usize,
    target: Option<u128>,
    total_points: usize,
}

impl Builder {
    fn current_order(&self) -> u128 {
        self.chain
            .levels
            .iter()
            .map(|l| l.pts.len() as u128)
            .product()
    }

    fn target_reached(&self) -> bool {
        match self.target {
            Some(t) => self.current_order() == t,
            None => false,
        }
    }

    fn finish(mut self, verified: bool) -> StabilizerChain {
        self.chain.verified = verified;
        self.chain.order = self.current_order();
        self.chain
    }

    /// Sifts g through levels starting at `from`; returns the level at which
    /// a nonidentity residue must be inserted, if any.
    fn sift_from(&self, from: usize, g: Element) -> Option<(usize, Element)> {
        let mut cur = g;
        for lvl in from..self.chain.levels.len() {
            let level = &self.chain.levels[lvl];
            let beta = apply_point(&cur, level.base);
            match level.orbit.get(&beta) {
                None => return Some((lvl, cur)),
                Some(&i) => {
                    if i != 0 {
                        cur = level.inv[i as usize].mul(&cur);
                    }
                }
            }
        }
        if cur.is_identity() {
            None
        } else {
            Some((self.chain.levels.len(), cur))
        }
    }

    /// Adds an element known to stabilize all bases above `lvl` as a new
    /// generator at `lvl` (creating the level if needed), then re-expands the
    /// orbit there.
    fn insert(&mut self, lvl: usize, g: Element) -> Result<(), ChainError> {
        let Some((at, residue)) = self.sift_from(lvl, g) else {
            return Ok(());
        };
        if at == self.chain.levels.len() {
            let base = self
                .candidates
                .iter()
                .copied()
                .find(|&c| apply_point(&residue, c) != c)
                .expect("nonidentity element moves some candidate point");
            self.chain.levels.push(Level::new(base, &self.chain.identity));
            self.total_points += 1;
        }
        let level = &mut self.chain.levels[at];
        level.gens.push(residue);
        level.dirty_from = 0;
        self.expand_orbit(at)?;
        Ok(())
    }

    /// Orbit closure at one level under its current generators.
    fn expand_orbit(&mut self, lvl: usize) -> Result<(), ChainError> {
        let level = &mut self.chain.levels[lvl];
        let mut i = 0usize;
        while i < level.pts.len() {
            let from = level.swept[i] as usize;
            if from == level.gens.len() {
                i += 1;
                continue;
            }
            for gi in from..level.gens.len() {
                let g = &level.gens[gi];
                let image = apply_point(g, level.pts[i]);
                if !level.orbit.contains_key(&image) {
                    let rep = g.mul(&level.fwd[i]);
                    let rep_inv = rep.inverse();
                    level.orbit.insert(image, level.pts.len() as u32);
                    level.pts.push(image);
                    level.fwd.push(rep);
                    level.inv.push(rep_inv);
                    level.swept.push(0);
                    level.done.push(0);
                    self.total_points += 1;
                    if self.total_points > self.budget {
                        return Err(ChainError::Budget {
                            points: self.total_points,
                            budget: self.budget,
                        });
                    }
                }
            }
            level.swept[i] = level.gens.len() as u32;
            // a new point may have been appended before i; restart sweep of
            // everything unswept is handled by the outer loop continuing
            i += 1;
        }
        // points appended during the sweep still need all gens applied
        let unswept = level.swept.iter().any(|&s| (s as usize) < level.gens.len());
        if unswept {
            return self.expand_orbit(lvl);
        }
        Ok(())
    }

    /// Deterministic scan for the next unprocessed Schreier pair.
    fn next_schreier_task(&mut self) -> Option<(usize, usize, usize)> {
        for lvl in 0..self.chain.levels.len() {
            let level = &mut self.chain.levels[lvl];
            let gens_len = level.gens.len() as u32;
            while level.dirty_from < level.pts.len() {
                let i = level.dirty_from;
                if level.done[i] < gens_len {
                    let gi = level.done[i] as usize;
                    level.done[i] += 1;
                    return Some((lvl, i, gi));
                }
                level.dirty_from += 1;
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::GroupSpec;
    use crate::perm::Perm;

    fn perm_gens(specs: &[&str], deg: usize) -> Vec<Element> {
        specs
            .iter()
            .map(|s| Element::Perm(Perm::parse(s, deg).unwrap()))
            .collect()
    }

    #[test]
    fn sym3_has_order_6() {
        let gens = perm_gens(&["(1,2)", "(1,2,3)"], 3);
        let c = build_chain(&gens, &ChainOptions::default()).unwrap();
        assert_eq!(c.order(), 6);
        assert!(c.is_verified());
        for g in &gens {
            assert!(c.contains(g).unwrap());
        }
    }

    #[test]
    fn alt8_pair_orders() {
        let g = Element::Perm(Perm::parse("(1,2,3,4)(5,6)", 8).unwrap());
        let t = Element::Perm(Perm::parse("(2,5,8,4,6,3,7)", 8).unwrap());
        let h = t.inverse().mul(&g).mul(&t);
        let c = build_chain(&[g, h], &ChainOptions::default()).unwrap();
        assert_eq!(c.order(), 20160);
    }

    #[test]
    fn sl2_9_standard_generators() {
        let spec = GroupSpec::sl(2, 9).unwrap();
        let c = build_chain(&spec.gens, &ChainOptions::default()).unwrap();
        assert_eq!(c.order(), 720);
        // invariant under generator permutation and conjugation
        let mut rev: Vec<Element> = spec.gens.clone();
        rev.reverse();
        let c2 = build_chain(&rev, &ChainOptions::default()).unwrap();
        assert_eq!(c2.order(), 720);
        let t = &spec.gens[0];
        let conj: Vec<Element> = spec
            .gens
            .iter()
            .map(|g| t.inverse().mul(g).mul(t))
            .collect();
        let c3 = build_chain(&conj, &ChainOptions::default()).unwrap();
        assert_eq!(c3.order(), 720);
    }

    #[test]
    fn early_exit_with_known_order() {
        let spec = GroupSpec::sl(3, 3).unwrap();
        let target: u128 = 5616;
        let c = build_chain(&spec.gens, &ChainOptions::with_target(target)).unwrap();
        assert_eq!(c.order(), target);
    }

    #[test]
    fn trivial_and_cyclic() {
        let id = Element::Perm(Perm::identity(4));
        let c = build_chain(&[id], &ChainOptions::default()).unwrap();
        assert_eq!(c.order(), 1);
        let r = Element::Perm(Perm::parse("(1,2,3,4,5)", 5).unwrap());
        let c = build_chain(&[r], &ChainOptions::default()).unwrap();
        assert_eq!(c.order(), 5);
    }

    #[test]
    fn budget_is_enforced() {
        let spec = GroupSpec::sl(2, 9).unwrap();
        let opts = ChainOptions {
            point_budget: 10,
            seed_words: 0,
            known_order: None,
        };
        assert!(matches!(
            build_chain(&spec.gens, &opts),
            Err(ChainError::Budget { .. })
        ));
    }
}
