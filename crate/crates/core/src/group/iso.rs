use itertools::Itertools;

use super::{quotient, FiniteGroup, GroupRef, Homomorphism, Subgroup};
use crate::error::{Error, Result};

pub const DEFAULT_SEARCH_BUDGET: usize = 2_000_000;

/// Extend generator images to a map on the subgroup generated by `gens`.
/// Returns `None` if the assignment is inconsistent. Entries outside the
/// subgroup are `usize::MAX`.
fn extend(g: &FiniteGroup, gens: &[usize], images: &[usize], h: &FiniteGroup) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; g.order()];
    map[0] = 0;
    let mut stack = vec![0];
    while let Some(x) = stack.pop() {
        let fx = map[x];
        for (&t, &ft) in gens.iter().zip(images) {
            let y = g.mul(x, t);
            let fy = h.mul(fx, ft);
            if map[y] == usize::MAX {
                map[y] = fy;
                stack.push(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    Some(map)
}

struct Search<'a> {
    g: &'a FiniteGroup,
    h: &'a FiniteGroup,
    gens: &'a [usize],
    candidates: Vec<Vec<usize>>,
    bijective: bool,
    first_only: bool,
    budget: usize,
    nodes: usize,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self, images: &mut Vec<usize>) -> Result<()> {
        let k = images.len();
        if k == self.gens.len() {
            if let Some(map) = extend(self.g, self.gens, images, self.h) {
                if !self.bijective || is_injective(&map, self.h.order()) {
                    self.found.push(map);
                }
            }
            return Ok(());
        }
        for i in 0..self.candidates[k].len() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::SearchBudgetExceeded(self.budget));
            }
            images.push(self.candidates[k][i]);
            if extend(self.g, &self.gens[..=k], images, self.h).is_some() {
                self.run(images)?;
            }
            images.pop();
            if self.first_only && !self.found.is_empty() {
                return Ok(());
            }
        }
        Ok(())
    }
}

fn is_injective(map: &[usize], cod_order: usize) -> bool {
    let mut seen = vec![false; cod_order];
    map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
}

/// Every homomorphism G → H, found by assigning images to a greedy minimal
/// generating set (images must have order dividing the generator's order).
pub fn enumerate_homomorphisms(g: &GroupRef, h: &GroupRef, budget: Option<usize>) -> Result<Vec<Homomorphism>> {
    let gens = g.generators();
    let candidates = gens
        .iter()
        .map(|&t| h.elements().filter(|&y| g.element_order(t).is_multiple_of(h.element_order(y))).collect())
        .collect();
    let mut s = Search {
        g,
        h,
        gens,
        candidates,
        bijective: false,
        first_only: false,
        budget: budget.unwrap_or(DEFAULT_SEARCH_BUDGET),
        nodes: 0,
        found: Vec::new(),
    };
    s.run(&mut Vec::new())?;
    Ok(s.found.into_iter().map(|m| Homomorphism::new_unchecked(g.clone(), h.clone(), m)).collect())
}

fn order_profile(g: &FiniteGroup) -> Vec<usize> {
    let mut v = g.element_orders().to_vec();
    v.sort_unstable();
    v
}

pub fn find_isomorphism(g: &GroupRef, h: &GroupRef, budget: Option<usize>) -> Result<Option<Homomorphism>> {
    find_isomorphism_with(g, h, budget, |_, _| true)
}

/// Isomorphism search where the image of each generator `t` must satisfy
/// `allowed(t, image)` besides having the same element order.
pub fn find_isomorphism_with(
    g: &GroupRef,
    h: &GroupRef,
    budget: Option<usize>,
    allowed: impl Fn(usize, usize) -> bool,
) -> Result<Option<Homomorphism>> {
    if g.order() != h.order() || order_profile(g) != order_profile(h) {
        return Ok(None);
    }
    let gens = g.generators();
    let candidates = gens
        .iter()
        .map(|&t| h.elements().filter(|&y| g.element_order(t) == h.element_order(y) && allowed(t, y)).collect())
        .collect();
    let mut s = Search {
        g,
        h,
        gens,
        candidates,
        bijective: true,
        first_only: true,
        budget: budget.unwrap_or(DEFAULT_SEARCH_BUDGET),
        nodes: 0,
        found: Vec::new(),
    };
    s.run(&mut Vec::new())?;
    Ok(s.found.pop().map(|m| Homomorphism::new_unchecked(g.clone(), h.clone(), m)))
}

/// Isomorphism invariants of a group.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupSignature {
    pub order: usize,
    pub element_orders: Vec<usize>,
    pub class_sizes: Vec<usize>,
    pub abelianization: Vec<usize>,
}

pub fn signature(g: &GroupRef) -> GroupSignature {
    let mut class_sizes: Vec<usize> = g.conjugacy_classes().iter().map(|c| c.len()).collect();
    class_sizes.sort_unstable();
    let comm = Subgroup::from_sorted_unchecked(g.clone(), g.commutator_subgroup());
    let (ab, _) = quotient(g, &comm).expect("commutator subgroup is normal");
    GroupSignature { order: g.order(), element_orders: order_profile(g), class_sizes, abelianization: order_profile(&ab) }
}

/// Isomorphism-class key: exact minimal table up to order 8, otherwise the
/// invariant signature (which must be refined by `find_isomorphism`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupKey {
    Table(Vec<usize>),
    Signature(GroupSignature),
}

impl GroupKey {
    pub fn is_exact(&self) -> bool {
        matches!(self, GroupKey::Table(_))
    }
}

pub const EXACT_KEY_MAX_ORDER: usize = 8;

/// Lexicographically least flattened table over relabelings fixing 0.
fn min_table(g: &FiniteGroup) -> Vec<usize> {
    let n = g.order();
    let mut best: Option<Vec<usize>> = None;
    let mut cand = vec![0; n * n];
    for perm in (1..n).permutations(n - 1) {
        // perm lists old labels in new order: new label i+1 is old perm[i]
        let mut old_of = Vec::with_capacity(n);
        old_of.push(0);
        old_of.extend_from_slice(&perm);
        let mut new_of = vec![0; n];
        for (new, &old) in old_of.iter().enumerate() {
            new_of[old] = new;
        }
        let mut better = best.is_none();
        let mut decided = best.is_none();
        for i in 0..n {
            for j in 0..n {
                let v = new_of[g.mul(old_of[i], old_of[j])];
                cand[i * n + j] = v;
                if !decided {
                    let b = best.as_ref().expect("best set")[i * n + j];
                    if v != b {
                        decided = true;
                        better = v < b;
                        if !better {
                            break;
                        }
                    }
                }
            }
            if decided && !better {
                break;
            }
        }
        if better {
            best = Some(cand.clone());
        }
    }
    best.unwrap_or_else(|| vec![0])
}

pub fn canonical_key(g: &GroupRef) -> GroupKey {
    if g.order() <= EXACT_KEY_MAX_ORDER {
        GroupKey::Table(min_table(g))
    } else {
        GroupKey::Signature(signature(g))
    }
}

pub fn groups_isomorphic(g: &GroupRef, h: &GroupRef) -> Result<bool> {
    let (kg, kh) = (canonical_key(g), canonical_key(h));
    if kg != kh {
        return Ok(false);
    }
    if kg.is_exact() {
        return Ok(true);
    }
    Ok(find_isomorphism(g, h, None)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{catalog, cyclic, dihedral, direct_product, klein, symmetric};

    /// Oracle: count all maps C2 → C2 that respect multiplication.
    #[test]
    fn homs_c2_c2() {
        let c2 = cyclic(2).unwrap();
        let homs = enumerate_homomorphisms(&c2, &c2, None).unwrap();
        assert_eq!(homs.len(), 2);
        let mut brute = 0;
        for a in 0..2 {
            for b in 0..2 {
                let img = [a, b];
                if (0..2).all(|x| (0..2).all(|y| img[c2.mul(x, y)] == c2.mul(img[x], img[y]))) {
                    brute += 1;
                }
            }
        }
        assert_eq!(brute, 2);
    }

    #[test]
    fn hom_counts_match_brute_force() {
        // Oracle: all maps between small groups, filtered by the hom law.
        let groups = [cyclic(2).unwrap(), cyclic(3).unwrap(), klein(), cyclic(4).unwrap(), symmetric(3).unwrap()];
        for g in &groups {
            for h in &groups {
                let fast = enumerate_homomorphisms(g, h, None).unwrap().len();
                let mut count = 0;
                for img in (0..g.order()).map(|_| h.elements()).multi_cartesian_product() {
                    if img[0] == 0
                        && g.elements().all(|x| g.elements().all(|y| img[g.mul(x, y)] == h.mul(img[x], img[y])))
                    {
                        count += 1;
                    }
                }
                assert_eq!(fast, count, "{} -> {}", g.label(), h.label());
            }
        }
    }

    #[test]
    fn iso_basics() {
        let c4 = cyclic(4).unwrap();
        assert!(find_isomorphism(&c4, &c4, None).unwrap().is_some());
        assert!(find_isomorphism(&c4, &klein(), None).unwrap().is_none());
        let d6 = dihedral(3).unwrap();
        let s3 = symmetric(3).unwrap();
        let f = find_isomorphism(&d6, &s3, None).unwrap().unwrap();
        assert!(f.is_isomorphism());
    }

    #[test]
    fn iso_is_symmetric_on_catalog() {
        let cat = catalog(12);
        let mut extra = vec![direct_product(&cyclic(2).unwrap(), &symmetric(3).unwrap()), dihedral(6).unwrap()];
        extra.extend(cat.iter().cloned());
        for a in &extra {
            for b in &extra {
                let ab = find_isomorphism(a, b, None).unwrap().is_some();
                let ba = find_isomorphism(b, a, None).unwrap().is_some();
                assert_eq!(ab, ba);
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = symmetric(4).unwrap();
        assert!(matches!(enumerate_homomorphisms(&g, &g, Some(3)), Err(Error::SearchBudgetExceeded(3))));
    }

    #[test]
    fn canonical_key_identifies_isomorphic_tables() {
        let a = direct_product(&cyclic(2).unwrap(), &cyclic(4).unwrap());
        let b = direct_product(&cyclic(4).unwrap(), &cyclic(2).unwrap());
        assert_eq!(canonical_key(&a), canonical_key(&b));
        assert_ne!(canonical_key(&a), canonical_key(&cyclic(8).unwrap()));
        let d8 = dihedral(4).unwrap();
        assert_ne!(canonical_key(&a), canonical_key(&d8));
        assert!(groups_isomorphic(&dihedral(6).unwrap(), &direct_product(&cyclic(2).unwrap(), &symmetric(3).unwrap())).unwrap());
        assert!(!groups_isomorphic(&dihedral(6).unwrap(), &crate::group::alternating4()).unwrap());
    }
}
