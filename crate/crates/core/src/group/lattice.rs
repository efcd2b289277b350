use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use super::{FiniteGroup, GroupRef, Subgroup};
use crate::error::{Error, Result};

/// Subgroup enumeration works on 64-bit element masks.
pub const MAX_LATTICE_ORDER: usize = 64;

/// All subgroups of a group together with their conjugacy classes.
#[derive(Debug)]
pub struct Lattice {
    subgroups: Vec<u64>,
    classes: Vec<u64>,
    class_index: HashMap<u64, usize>,
}

impl Lattice {
    pub fn num_subgroups(&self) -> usize {
        self.subgroups.len()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_masks(&self) -> &[u64] {
        &self.classes
    }
}

fn mask_of(els: &[usize]) -> u64 {
    els.iter().fold(0u64, |m, &x| m | (1 << x))
}

fn elements_of(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

/// Order by size, then lexicographically on sorted element lists.
fn cmp_masks(a: u64, b: u64) -> Ordering {
    match a.count_ones().cmp(&b.count_ones()) {
        Ordering::Equal if a == b => Ordering::Equal,
        Ordering::Equal => {
            let d = a ^ b;
            let low = d & d.wrapping_neg();
            if a & low != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        o => o,
    }
}

fn conj_mask(g: &FiniteGroup, x: usize, mask: u64) -> u64 {
    let mut out = 0;
    let mut m = mask;
    while m != 0 {
        let y = m.trailing_zeros() as usize;
        out |= 1 << g.conj(x, y);
        m &= m - 1;
    }
    out
}

fn min_conj_mask(g: &FiniteGroup, mask: u64) -> u64 {
    g.elements().map(|x| conj_mask(g, x, mask)).min_by(|a, b| cmp_masks(*a, *b)).expect("nonempty group")
}

fn closure_mask(g: &FiniteGroup, gens: &[usize]) -> u64 {
    let mut mask = 1u64;
    let mut stack = vec![0usize];
    while let Some(x) = stack.pop() {
        for &t in gens {
            let y = g.mul(x, t);
            if mask & (1 << y) == 0 {
                mask |= 1 << y;
                stack.push(y);
            }
        }
    }
    mask
}

fn compute(g: &FiniteGroup) -> Lattice {
    let mut gens_of: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut cyclic: Vec<(u64, usize)> = Vec::new();
    for x in g.elements() {
        let m = closure_mask(g, &[x]);
        if let std::collections::hash_map::Entry::Vacant(e) = gens_of.entry(m) {
            e.insert(if x == 0 { vec![] } else { vec![x] });
            cyclic.push((m, x));
        }
    }
    let mut queue: Vec<u64> = gens_of.keys().copied().collect();
    queue.sort_unstable();
    while let Some(a) = queue.pop() {
        let ga = gens_of[&a].clone();
        for &(c, x) in &cyclic {
            if c & !a == 0 {
                continue;
            }
            let mut gens = ga.clone();
            gens.push(x);
            let j = closure_mask(g, &gens);
            if let std::collections::hash_map::Entry::Vacant(e) = gens_of.entry(j) {
                e.insert(gens);
                queue.push(j);
            }
        }
    }
    let mut subgroups: Vec<u64> = gens_of.into_keys().collect();
    subgroups.sort_by(|a, b| cmp_masks(*a, *b));
    let mut reps: HashSet<u64> = HashSet::new();
    for &s in &subgroups {
        reps.insert(min_conj_mask(g, s));
    }
    let mut classes: Vec<u64> = reps.into_iter().collect();
    classes.sort_by(|a, b| cmp_masks(*a, *b));
    let class_index = classes.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    Lattice { subgroups, classes, class_index }
}

fn memo() -> &'static Mutex<HashMap<Vec<usize>, Arc<Lattice>>> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<usize>, Arc<Lattice>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The subgroup lattice, memoized by multiplication table.
pub fn lattice(g: &FiniteGroup) -> Result<Arc<Lattice>> {
    if g.order() > MAX_LATTICE_ORDER {
        return Err(Error::BudgetExceeded(format!(
            "subgroup enumeration limited to order {MAX_LATTICE_ORDER}, got {}",
            g.order()
        )));
    }
    if let Some(l) = memo().lock().expect("lattice cache").get(g.flat_table()) {
        return Ok(l.clone());
    }
    let l = Arc::new(compute(g));
    memo().lock().expect("lattice cache").insert(g.flat_table().to_vec(), l.clone());
    Ok(l)
}

/// Every subgroup, ordered by (order, sorted element list).
pub fn all_subgroups(g: &GroupRef) -> Result<Vec<Subgroup>> {
    let l = lattice(g)?;
    Ok(l.subgroups.iter().map(|&m| Subgroup::from_sorted_unchecked(g.clone(), elements_of(m))).collect())
}

/// One representative per conjugacy class: ordered by (order, sorted element
/// list), each the least member of its class.
pub fn subgroup_conjugacy_classes(g: &GroupRef) -> Result<Vec<Subgroup>> {
    let l = lattice(g)?;
    Ok(l.classes.iter().map(|&m| Subgroup::from_sorted_unchecked(g.clone(), elements_of(m))).collect())
}

/// Position of the conjugacy class of `h` in `subgroup_conjugacy_classes`.
pub fn subgroup_class_index(h: &Subgroup) -> Result<usize> {
    let g = h.parent();
    let l = lattice(g)?;
    let m = min_conj_mask(g, mask_of(h.elements()));
    l.class_index.get(&m).copied().ok_or_else(|| Error::NotSubgroup("not found in lattice".into()))
}

pub fn normal_subgroups(g: &GroupRef) -> Result<Vec<Subgroup>> {
    Ok(all_subgroups(g)?.into_iter().filter(|s| s.is_normal()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{catalog, cyclic, symmetric};

    /// Oracle: test every subset containing the identity for closure.
    fn brute_subgroups(g: &FiniteGroup) -> Vec<u64> {
        let n = g.order();
        let mut out = Vec::new();
        for bits in 0u64..(1 << (n - 1)) {
            let mask = (bits << 1) | 1;
            let els = elements_of(mask);
            if els.iter().all(|&a| els.iter().all(|&b| mask & (1 << g.mul(a, b)) != 0)) {
                out.push(mask);
            }
        }
        out.sort_by(|a, b| cmp_masks(*a, *b));
        out
    }

    #[test]
    fn matches_brute_force_on_small_groups() {
        for g in catalog(12) {
            let l = lattice(&g).unwrap();
            assert_eq!(l.subgroups, brute_subgroups(&g), "{}", g.label());
        }
    }

    #[test]
    fn class_counts() {
        assert_eq!(subgroup_conjugacy_classes(&cyclic(1).unwrap()).unwrap().len(), 1);
        assert_eq!(subgroup_conjugacy_classes(&cyclic(2).unwrap()).unwrap().len(), 2);
        let s3 = subgroup_conjugacy_classes(&symmetric(3).unwrap()).unwrap();
        assert_eq!(s3.iter().map(|h| h.order()).collect::<Vec<_>>(), vec![1, 2, 3, 6]);
        // S4 has 11 conjugacy classes of subgroups and 30 subgroups.
        let s4 = symmetric(4).unwrap();
        assert_eq!(subgroup_conjugacy_classes(&s4).unwrap().len(), 11);
        assert_eq!(all_subgroups(&s4).unwrap().len(), 30);
    }

    #[test]
    fn representatives_are_least_in_class() {
        let s4 = symmetric(4).unwrap();
        for (i, h) in subgroup_conjugacy_classes(&s4).unwrap().iter().enumerate() {
            for x in s4.elements() {
                let c = h.conjugate(x);
                assert!(h.elements() <= c.elements());
                assert_eq!(subgroup_class_index(&c).unwrap(), i);
            }
        }
    }

    #[test]
    fn too_large_is_a_budget_error() {
        assert!(matches!(lattice(&cyclic(65).unwrap()), Err(Error::BudgetExceeded(_))));
    }
}
