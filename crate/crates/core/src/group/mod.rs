//! Finite groups given by explicit multiplication tables.

mod goursat;
mod iso;
mod lattice;
mod standard;

use std::collections::VecDeque;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

pub use goursat::{goursat, Goursat};
pub use iso::{
    canonical_key, enumerate_homomorphisms, find_isomorphism, find_isomorphism_with, groups_isomorphic,
    signature, GroupKey, GroupSignature, DEFAULT_SEARCH_BUDGET,
};
pub use lattice::{all_subgroups, normal_subgroups, subgroup_class_index, subgroup_conjugacy_classes, Lattice, MAX_LATTICE_ORDER};
pub use standard::{
    alternating4, catalog, cyclic, dicyclic, dihedral, direct_product, generated_subgroup_as_group, klein, named_group, standard_group,
    symmetric, trivial, StandardKind,
};

pub type GroupRef = Arc<FiniteGroup>;

/// A finite group on the elements `0..order`, with identity `0`.
pub struct FiniteGroup {
    order: usize,
    mult: Vec<usize>,
    inv: Vec<usize>,
    element_orders: Vec<usize>,
    name: Option<String>,
    gens: OnceLock<Vec<usize>>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mult == other.mult
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) => write!(f, "FiniteGroup({n}, order {})", self.order),
            None => write!(f, "FiniteGroup(order {})", self.order),
        }
    }
}

impl Clone for FiniteGroup {
    fn clone(&self) -> Self {
        FiniteGroup {
            order: self.order,
            mult: self.mult.clone(),
            inv: self.inv.clone(),
            element_orders: self.element_orders.clone(),
            name: self.name.clone(),
            gens: OnceLock::new(),
        }
    }
}

/// True when both references denote the same table.
pub fn same_group(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    std::ptr::eq(a, b) || a == b
}

impl FiniteGroup {
    /// Validate a multiplication table. If the identity is not at index 0 the
    /// elements are relabelled by swapping it with 0.
    pub fn from_table(table: &[Vec<usize>]) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 {
            return Err(Error::ParamOutOfRange("empty table".into()));
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare { row, len: r.len(), expected: n });
            }
            for (b, &v) in r.iter().enumerate() {
                if v >= n {
                    return Err(Error::NotClosed { a: row, b, value: v });
                }
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(Error::NoIdentity)?;
        let relabel = |x: usize| {
            if x == e {
                0
            } else if x == 0 {
                e
            } else {
                x
            }
        };
        let mut mult = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                mult[relabel(a) * n + relabel(b)] = relabel(table[a][b]);
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mult[a * n + b];
                for c in 0..n {
                    if mult[ab * n + c] != mult[a * n + mult[b * n + c]] {
                        return Err(Error::NotAssociative { a: relabel(a), b: relabel(b), c: relabel(c) });
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| mult[a * n + b] == 0 && mult[b * n + a] == 0) {
                Some(b) => inv[a] = b,
                None => return Err(Error::NoInverse(relabel(a))),
            }
        }
        Ok(Self::assemble(n, mult, inv))
    }

    /// Build from a table already known to be a group with identity 0.
    pub(crate) fn from_valid_flat(order: usize, mult: Vec<usize>) -> FiniteGroup {
        debug_assert_eq!(mult.len(), order * order);
        let mut inv = vec![0; order];
        for a in 0..order {
            let row = &mult[a * order..(a + 1) * order];
            inv[a] = row.iter().position(|&v| v == 0).expect("valid group table");
        }
        Self::assemble(order, mult, inv)
    }

    fn assemble(order: usize, mult: Vec<usize>, inv: Vec<usize>) -> FiniteGroup {
        let mut element_orders = vec![1; order];
        for (x, slot) in element_orders.iter_mut().enumerate() {
            let mut k = 1;
            let mut p = x;
            while p != 0 {
                p = mult[p * order + x];
                k += 1;
            }
            *slot = k;
        }
        FiniteGroup { order, mult, inv, element_orders, name: None, gens: OnceLock::new() }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("group of order {}", self.order))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// g x g⁻¹
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv[g])
    }

    pub fn pow(&self, x: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, x))
    }

    pub fn element_order(&self, x: usize) -> usize {
        self.element_orders[x]
    }

    pub fn element_orders(&self) -> &[usize] {
        &self.element_orders
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inv
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mult.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn flat_table(&self) -> &[usize] {
        &self.mult
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Elements of the subgroup generated by `gens`, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut out = vec![0];
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// A generating set found greedily: repeatedly add the least element that
    /// enlarges the generated subgroup the most.
    pub fn generators(&self) -> &[usize] {
        self.gens.get_or_init(|| {
            let mut gens: Vec<usize> = Vec::new();
            let mut current = vec![0];
            while current.len() < self.order {
                let mut best = (0, usize::MAX);
                for x in 0..self.order {
                    if current.binary_search(&x).is_ok() {
                        continue;
                    }
                    let mut trial = gens.clone();
                    trial.push(x);
                    let size = self.closure(&trial).len();
                    if size > best.0 {
                        best = (size, x);
                    }
                }
                gens.push(best.1);
                current = self.closure(&gens);
            }
            gens
        })
    }

    pub(crate) fn set_generators(self, gens: Vec<usize>) -> Self {
        debug_assert_eq!(self.closure(&gens).len(), self.order);
        let _ = self.gens.set(gens);
        self
    }

    /// Conjugacy classes of elements, each sorted, ordered by least element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for x in 0..self.order {
            if seen[x] {
                continue;
            }
            let mut cls: Vec<usize> = (0..self.order).map(|g| self.conj(g, x)).collect();
            cls.sort_unstable();
            cls.dedup();
            for &y in &cls {
                seen[y] = true;
            }
            classes.push(cls);
        }
        classes
    }

    pub fn commutator_subgroup(&self) -> Vec<usize> {
        let mut comms = Vec::new();
        for a in 0..self.order {
            for b in 0..self.order {
                let c = self.mul(self.mul(a, b), self.mul(self.inv[a], self.inv[b]));
                comms.push(c);
            }
        }
        comms.sort_unstable();
        comms.dedup();
        self.closure(&comms)
    }
}

/// A homomorphism given by its full image table.
#[derive(Clone, Debug)]
pub struct Homomorphism {
    dom: GroupRef,
    cod: GroupRef,
    image: Vec<usize>,
}

impl PartialEq for Homomorphism {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.dom, &other.dom) && same_group(&self.cod, &other.cod) && self.image == other.image
    }
}

impl Homomorphism {
    pub fn new(dom: GroupRef, cod: GroupRef, image: Vec<usize>) -> Result<Homomorphism> {
        if image.len() != dom.order() {
            return Err(Error::ParamOutOfRange(format!(
                "image table has length {}, domain order {}",
                image.len(),
                dom.order()
            )));
        }
        if let Some(&v) = image.iter().find(|&&v| v >= cod.order()) {
            return Err(Error::IndexOutOfRange { index: v, size: cod.order() });
        }
        for a in dom.elements() {
            for b in dom.elements() {
                if image[dom.mul(a, b)] != cod.mul(image[a], image[b]) {
                    return Err(Error::NotHomomorphism { a, b });
                }
            }
        }
        Ok(Homomorphism { dom, cod, image })
    }

    pub(crate) fn new_unchecked(dom: GroupRef, cod: GroupRef, image: Vec<usize>) -> Homomorphism {
        debug_assert!(dom.order() > 256 || Homomorphism::new(dom.clone(), cod.clone(), image.clone()).is_ok());
        Homomorphism { dom, cod, image }
    }

    pub fn identity(g: &GroupRef) -> Homomorphism {
        Homomorphism { dom: g.clone(), cod: g.clone(), image: g.elements().collect() }
    }

    pub fn trivial(dom: &GroupRef, cod: &GroupRef) -> Homomorphism {
        Homomorphism { dom: dom.clone(), cod: cod.clone(), image: vec![0; dom.order()] }
    }

    /// Conjugation x ↦ g x g⁻¹ on `grp`.
    pub fn conjugation(grp: &GroupRef, g: usize) -> Homomorphism {
        Homomorphism { dom: grp.clone(), cod: grp.clone(), image: grp.elements().map(|x| grp.conj(g, x)).collect() }
    }

    pub fn dom(&self) -> &GroupRef {
        &self.dom
    }

    pub fn cod(&self) -> &GroupRef {
        &self.cod
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    /// `self ∘ first`
    pub fn after(&self, first: &Homomorphism) -> Result<Homomorphism> {
        if !same_group(first.cod(), &self.dom) {
            return Err(Error::GroupMismatch("composition of homomorphisms".into()));
        }
        Ok(Homomorphism {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            image: first.image.iter().map(|&x| self.image[x]).collect(),
        })
    }

    pub fn kernel(&self) -> Subgroup {
        let els = self.dom.elements().filter(|&x| self.image[x] == 0).collect();
        Subgroup { parent: self.dom.clone(), elements: els }
    }

    pub fn image_subgroup(&self) -> Subgroup {
        let mut els = self.image.clone();
        els.sort_unstable();
        els.dedup();
        Subgroup { parent: self.cod.clone(), elements: els }
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().order() == 1
    }

    pub fn is_surjective(&self) -> bool {
        self.image_subgroup().order() == self.cod.order()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.dom.order() == self.cod.order() && self.is_injective()
    }

    /// Inverse of a bijective homomorphism.
    pub fn inverse(&self) -> Result<Homomorphism> {
        if !self.is_isomorphism() {
            return Err(Error::NotIso);
        }
        let mut inv = vec![0; self.cod.order()];
        for x in self.dom.elements() {
            inv[self.image[x]] = x;
        }
        Ok(Homomorphism { dom: self.cod.clone(), cod: self.dom.clone(), image: inv })
    }
}

/// A subgroup stored as the sorted list of its elements.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: GroupRef,
    elements: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.parent, &other.parent) && self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    /// Validate that `elements` form a subgroup of `parent`.
    pub fn new(parent: GroupRef, mut elements: Vec<usize>) -> Result<Subgroup> {
        elements.sort_unstable();
        elements.dedup();
        if let Some(&x) = elements.iter().find(|&&x| x >= parent.order()) {
            return Err(Error::IndexOutOfRange { index: x, size: parent.order() });
        }
        if elements.first() != Some(&0) {
            return Err(Error::NotSubgroup("identity missing".into()));
        }
        for &a in &elements {
            if elements.binary_search(&parent.inv(a)).is_err() {
                return Err(Error::NotSubgroup(format!("inverse of {a} missing")));
            }
            for &b in &elements {
                if elements.binary_search(&parent.mul(a, b)).is_err() {
                    return Err(Error::NotSubgroup(format!("product of {a} and {b} missing")));
                }
            }
        }
        Ok(Subgroup { parent, elements })
    }

    pub(crate) fn from_sorted_unchecked(parent: GroupRef, elements: Vec<usize>) -> Subgroup {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Subgroup { parent, elements }
    }

    pub fn generated(parent: &GroupRef, gens: &[usize]) -> Subgroup {
        let els = parent.closure(gens);
        Subgroup { parent: parent.clone(), elements: els }
    }

    pub fn trivial(parent: &GroupRef) -> Subgroup {
        Subgroup { parent: parent.clone(), elements: vec![0] }
    }

    pub fn whole(parent: &GroupRef) -> Subgroup {
        Subgroup { parent: parent.clone(), elements: parent.elements().collect() }
    }

    pub fn parent(&self) -> &GroupRef {
        &self.parent
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    /// g H g⁻¹, as a sorted element list.
    pub fn conjugate(&self, g: usize) -> Subgroup {
        let mut els: Vec<usize> = self.elements.iter().map(|&x| self.parent.conj(g, x)).collect();
        els.sort_unstable();
        Subgroup { parent: self.parent.clone(), elements: els }
    }

    /// First (g, n) with g n g⁻¹ outside the subgroup.
    pub fn normality_witness(&self) -> Option<(usize, usize)> {
        for g in self.parent.elements() {
            for &n in &self.elements {
                if !self.contains(self.parent.conj(g, n)) {
                    return Some((g, n));
                }
            }
        }
        None
    }

    pub fn is_normal(&self) -> bool {
        self.normality_witness().is_none()
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let els = self.elements.iter().copied().filter(|&x| other.contains(x)).collect();
        Subgroup { parent: self.parent.clone(), elements: els }
    }

    pub fn join(&self, other: &Subgroup) -> Subgroup {
        let mut gens = self.elements.clone();
        gens.extend_from_slice(&other.elements);
        Subgroup::generated(&self.parent, &gens)
    }

    pub fn normalizer(&self) -> Subgroup {
        let els = self.parent.elements().filter(|&g| self.conjugate(g).elements == self.elements).collect();
        Subgroup { parent: self.parent.clone(), elements: els }
    }

    /// Least element of the left coset x·H.
    pub fn left_coset_rep(&self, x: usize) -> usize {
        self.elements.iter().map(|&h| self.parent.mul(x, h)).min().expect("nonempty subgroup")
    }

    /// Canonical left coset representatives (least element per coset), sorted.
    pub fn left_coset_reps(&self) -> Vec<usize> {
        let mut reps: Vec<usize> = self.parent.elements().map(|x| self.left_coset_rep(x)).collect();
        reps.sort_unstable();
        reps.dedup();
        reps
    }

    /// The subgroup as a group in its own right, elements renumbered in
    /// increasing order, with the inclusion homomorphism.
    pub fn to_group(&self) -> (GroupRef, Homomorphism) {
        let n = self.elements.len();
        let pos = |x: usize| self.elements.binary_search(&x).expect("closed subgroup");
        let mut mult = vec![0; n * n];
        for (i, &a) in self.elements.iter().enumerate() {
            for (j, &b) in self.elements.iter().enumerate() {
                mult[i * n + j] = pos(self.parent.mul(a, b));
            }
        }
        let grp = Arc::new(FiniteGroup::from_valid_flat(n, mult));
        let incl = Homomorphism { dom: grp.clone(), cod: self.parent.clone(), image: self.elements.clone() };
        (grp, incl)
    }

    /// Smallest conjugate under conjugation by the elements of `by`
    /// (lexicographic on sorted element lists).
    pub fn min_conjugate_under(&self, by: &[usize]) -> Subgroup {
        let mut best = self.elements.clone();
        let mut buf = Vec::with_capacity(best.len());
        for &g in by {
            buf.clear();
            buf.extend(self.elements.iter().map(|&x| self.parent.conj(g, x)));
            buf.sort_unstable();
            if buf < best {
                best.clone_from(&buf);
            }
        }
        Subgroup { parent: self.parent.clone(), elements: best }
    }

    pub fn min_conjugate(&self) -> Subgroup {
        let all: Vec<usize> = self.parent.elements().collect();
        self.min_conjugate_under(&all)
    }
}

/// The quotient G/N on canonical coset representatives with its projection.
pub fn quotient(g: &GroupRef, n: &Subgroup) -> Result<(GroupRef, Homomorphism)> {
    if !same_group(n.parent(), g) {
        return Err(Error::GroupMismatch("normal subgroup of another group".into()));
    }
    if let Some((x, y)) = n.normality_witness() {
        return Err(Error::NotNormal { g: x, n: y });
    }
    let reps = n.left_coset_reps();
    let m = reps.len();
    let mut index_of = vec![0; g.order()];
    for x in g.elements() {
        index_of[x] = reps.binary_search(&n.left_coset_rep(x)).expect("coset rep");
    }
    let mut mult = vec![0; m * m];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            mult[i * m + j] = index_of[g.mul(a, b)];
        }
    }
    let q = Arc::new(FiniteGroup::from_valid_flat(m, mult));
    let p = Homomorphism { dom: g.clone(), cod: q.clone(), image: index_of };
    Ok((q, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4_table() -> Vec<Vec<usize>> {
        (0..4).map(|a| (0..4).map(|b| (a + b) % 4).collect()).collect()
    }

    fn klein_table() -> Vec<Vec<usize>> {
        (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect()
    }

    #[test]
    fn build_trivial_and_c2() {
        let t = FiniteGroup::from_table(&[vec![0]]).unwrap();
        assert_eq!(t.order(), 1);
        let c2 = FiniteGroup::from_table(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(c2.element_orders(), &[1, 2]);
        assert_eq!(c2.inv(1), 1);
    }

    #[test]
    fn element_order_profiles() {
        // Oracle: repeated multiplication until returning to the identity.
        fn brute_orders(t: &[Vec<usize>]) -> Vec<usize> {
            let mut out: Vec<usize> = (0..t.len())
                .map(|x| {
                    let mut p = x;
                    let mut k = 1;
                    while p != 0 {
                        p = t[p][x];
                        k += 1;
                    }
                    k
                })
                .collect();
            out.sort();
            out
        }
        let c4 = FiniteGroup::from_table(&c4_table()).unwrap();
        let v4 = FiniteGroup::from_table(&klein_table()).unwrap();
        let mut a = c4.element_orders().to_vec();
        a.sort();
        let mut b = v4.element_orders().to_vec();
        b.sort();
        assert_eq!(a, vec![1, 2, 4, 4]);
        assert_eq!(b, vec![1, 2, 2, 2]);
        assert_eq!(a, brute_orders(&c4_table()));
        assert_eq!(b, brute_orders(&klein_table()));
    }

    #[test]
    fn identity_is_renumbered_to_zero() {
        // C2 with identity stored at index 1.
        let g = FiniteGroup::from_table(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(g.mul(0, 0), 0);
        assert_eq!(g.mul(1, 1), 0);
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            FiniteGroup::from_table(&[vec![0, 2], vec![1, 0]]),
            Err(Error::NotClosed { a: 0, b: 1, value: 2 })
        ));
        assert!(matches!(FiniteGroup::from_table(&[vec![1, 1], vec![1, 1]]), Err(Error::NoIdentity)));
        // identity 0, but 1*1 = 1 and 1*2=... a monoid-like table without inverses
        let t = vec![vec![0, 1, 2], vec![1, 1, 1], vec![2, 1, 2]];
        assert!(matches!(FiniteGroup::from_table(&t), Err(Error::NoInverse(_)) | Err(Error::NotAssociative { .. })));
        // Latin square that is not associative (loop of order 5)
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_table(&t), Err(Error::NotAssociative { .. })));
    }

    #[test]
    fn quotient_trivial_and_full() {
        let g = Arc::new(FiniteGroup::from_table(&c4_table()).unwrap());
        let (q, p) = quotient(&g, &Subgroup::trivial(&g)).unwrap();
        assert_eq!(q.order(), 4);
        assert!(p.is_isomorphism());
        let (q, _) = quotient(&g, &Subgroup::whole(&g)).unwrap();
        assert_eq!(q.order(), 1);
        let (q, p) = quotient(&g, &Subgroup::generated(&g, &[2])).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(p.kernel().elements(), &[0, 2]);
    }

    #[test]
    fn subgroup_as_group_keeps_identity_first() {
        let g = Arc::new(FiniteGroup::from_table(&c4_table()).unwrap());
        let h = Subgroup::generated(&g, &[2]);
        let (hg, incl) = h.to_group();
        assert_eq!(hg.order(), 2);
        assert_eq!(incl.image(), &[0, 2]);
        assert!(incl.is_injective());
    }
}
