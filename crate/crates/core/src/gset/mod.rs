//! Finite G-sets, equivariant maps, and the Burnside rings built from them.

mod burnside;
mod over;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{same_group, GroupRef, Homomorphism, Subgroup};

pub use burnside::{burnside_mul, decompose, table_of_marks, BurnsideElement};
pub use over::{omega_over_mul, OverClass, OverElement};

pub type GSetRef = Arc<GSet>;

/// A left action of `group` on the points `0..size`.
#[derive(Clone, Debug)]
pub struct GSet {
    group: GroupRef,
    size: usize,
    /// action[x * |G| + g] = g·x
    action: Vec<usize>,
}

impl PartialEq for GSet {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && same_group(&self.group, &other.group) && self.action == other.action
    }
}

impl Eq for GSet {}

/// Structural equality of shared G-sets, cheap when the pointers agree.
pub fn same_gset(a: &GSet, b: &GSet) -> bool {
    std::ptr::eq(a, b) || a == b
}

impl GSet {
    /// Validate an action table with rows indexed by points.
    pub fn new(group: GroupRef, rows: &[Vec<usize>]) -> Result<GSet> {
        let n = group.order();
        let size = rows.len();
        let mut action = Vec::with_capacity(size * n);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidAction(format!("row {x} has {} entries, expected {n}", row.len())));
            }
            if let Some(&y) = row.iter().find(|&&y| y >= size) {
                return Err(Error::InvalidAction(format!("row {x} sends a point to {y}, outside 0..{size}")));
            }
            action.extend_from_slice(row);
        }
        Self::from_flat(group, size, action)
    }

    pub fn from_flat(group: GroupRef, size: usize, action: Vec<usize>) -> Result<GSet> {
        let s = GSet { group, size, action };
        s.validate()?;
        Ok(s)
    }

    pub(crate) fn from_flat_unchecked(group: GroupRef, size: usize, action: Vec<usize>) -> GSet {
        let s = GSet { group, size, action };
        debug_assert!(s.size * s.group.order() * s.group.order() > 1 << 16 || s.validate().is_ok());
        s
    }

    fn validate(&self) -> Result<()> {
        let n = self.group.order();
        if self.action.len() != self.size * n {
            return Err(Error::InvalidAction("table has the wrong shape".into()));
        }
        for x in 0..self.size {
            if self.act(0, x) != x {
                return Err(Error::InvalidAction(format!("identity moves point {x}")));
            }
            for g in 0..n {
                let gx = self.act(g, x);
                if gx >= self.size {
                    return Err(Error::InvalidAction(format!("{g}·{x} = {gx} is out of range")));
                }
                for h in 0..n {
                    if self.act(h, gx) != self.act(self.group.mul(h, g), x) {
                        return Err(Error::InvalidAction(format!(
                            "not an action at (g, g', x) = ({h}, {g}, {x}): g·(g'·x) != (gg')·x"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn empty(group: &GroupRef) -> GSet {
        GSet { group: group.clone(), size: 0, action: Vec::new() }
    }

    /// n points, each fixed by everything.
    pub fn trivial(group: &GroupRef, n: usize) -> GSet {
        let order = group.order();
        let action = (0..n).flat_map(|x| std::iter::repeat_n(x, order)).collect();
        GSet { group: group.clone(), size: n, action }
    }

    pub fn point(group: &GroupRef) -> GSet {
        Self::trivial(group, 1)
    }

    /// G acting on itself by left multiplication.
    pub fn regular(group: &GroupRef) -> GSet {
        coset_gset(group, &Subgroup::trivial(group))
    }

    /// The action pulled back along f: K → G.
    pub fn restrict(&self, f: &Homomorphism) -> Result<GSet> {
        if !same_group(f.cod(), &self.group) {
            return Err(Error::GroupMismatch("restriction along a homomorphism into another group".into()));
        }
        let k = f.dom().order();
        let mut action = Vec::with_capacity(self.size * k);
        for x in 0..self.size {
            for t in 0..k {
                action.push(self.act(f.apply(t), x));
            }
        }
        Ok(GSet { group: f.dom().clone(), size: self.size, action })
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[x * self.group.order() + g]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        let n = self.group.order();
        if n == 0 {
            return vec![];
        }
        self.action.chunks(n).map(|r| r.to_vec()).collect()
    }

    /// Orbits as sorted index lists, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for x in 0..self.size {
            if seen[x] {
                continue;
            }
            let mut orb = vec![x];
            seen[x] = true;
            let mut i = 0;
            while i < orb.len() {
                let y = orb[i];
                for &t in self.group.generators() {
                    let z = self.act(t, y);
                    if !seen[z] {
                        seen[z] = true;
                        orb.push(z);
                    }
                }
                i += 1;
            }
            orb.sort_unstable();
            out.push(orb);
        }
        out
    }

    /// orbit_index[x] = position of x's orbit in `orbits()`.
    pub fn orbit_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.size];
        for (i, orb) in self.orbits().iter().enumerate() {
            for &x in orb {
                idx[x] = i;
            }
        }
        idx
    }

    /// Least point of each orbit.
    pub fn orbit_reps(&self) -> Vec<usize> {
        self.orbits().iter().map(|o| o[0]).collect()
    }

    pub fn is_transitive(&self) -> bool {
        self.size > 0 && self.orbits().len() == 1
    }

    pub fn stabilizer(&self, x: usize) -> Result<Subgroup> {
        if x >= self.size {
            return Err(Error::IndexOutOfRange { index: x, size: self.size });
        }
        let els = self.group.elements().filter(|&g| self.act(g, x) == x).collect();
        Ok(Subgroup::from_sorted_unchecked(self.group.clone(), els))
    }

    /// Least g with g·from = to, if any.
    pub fn transporter(&self, from: usize, to: usize) -> Option<usize> {
        self.group.elements().find(|&g| self.act(g, from) == to)
    }

    /// Points fixed by every element of `h`.
    pub fn fixed_points(&self, h: &[usize]) -> usize {
        (0..self.size).filter(|&x| h.iter().all(|&g| self.act(g, x) == x)).count()
    }

    /// Multiset of orbit types: least conjugates of orbit stabilizers, sorted.
    pub fn orbit_types(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .orbit_reps()
            .into_iter()
            .map(|x| self.stabilizer(x).expect("point in range").min_conjugate().elements().to_vec())
            .collect();
        out.sort();
        out
    }
}

/// G/H on canonical coset representatives (least element per coset), in
/// increasing order, with g·(xH) = (gx)H.
pub fn coset_gset(g: &GroupRef, h: &Subgroup) -> GSet {
    let reps = h.left_coset_reps();
    let n = g.order();
    let mut index_of = vec![usize::MAX; n];
    for x in g.elements() {
        index_of[x] = reps.binary_search(&h.left_coset_rep(x)).expect("coset rep");
    }
    let mut action = Vec::with_capacity(reps.len() * n);
    for &r in &reps {
        for t in 0..n {
            action.push(index_of[g.mul(t, r)]);
        }
    }
    GSet { group: g.clone(), size: reps.len(), action }
}

fn check_same_group(x: &GSet, y: &GSet) -> Result<()> {
    if same_group(&x.group, &y.group) {
        Ok(())
    } else {
        Err(Error::GroupMismatch(format!("{} vs {}", x.group.label(), y.group.label())))
    }
}

/// X ⊔ Y, with the points of Y shifted by |X|.
pub fn gset_coproduct(x: &GSet, y: &GSet) -> Result<GSet> {
    check_same_group(x, y)?;
    let n = x.group.order();
    let mut action = x.action.clone();
    action.extend(y.action.iter().map(|&p| p + x.size));
    debug_assert_eq!(action.len(), (x.size + y.size) * n);
    Ok(GSet { group: x.group.clone(), size: x.size + y.size, action })
}

/// X × Y with the diagonal action; (x, y) sits at x·|Y| + y.
pub fn gset_product(x: &GSet, y: &GSet) -> Result<GSet> {
    check_same_group(x, y)?;
    let n = x.group.order();
    let mut action = Vec::with_capacity(x.size * y.size * n);
    for a in 0..x.size {
        for b in 0..y.size {
            for g in 0..n {
                action.push(x.act(g, a) * y.size + y.act(g, b));
            }
        }
    }
    Ok(GSet { group: x.group.clone(), size: x.size * y.size, action })
}

/// A G-equivariant map between G-sets.
#[derive(Clone, Debug)]
pub struct EquivariantMap {
    src: GSetRef,
    dst: GSetRef,
    map: Vec<usize>,
}

impl EquivariantMap {
    pub fn new(src: GSetRef, dst: GSetRef, map: Vec<usize>) -> Result<EquivariantMap> {
        check_same_group(&src, &dst)?;
        if map.len() != src.size {
            return Err(Error::InvalidAction(format!("map has length {}, source size {}", map.len(), src.size)));
        }
        if let Some(&y) = map.iter().find(|&&y| y >= dst.size) {
            return Err(Error::IndexOutOfRange { index: y, size: dst.size });
        }
        for x in 0..src.size {
            for g in src.group.elements() {
                if map[src.act(g, x)] != dst.act(g, map[x]) {
                    return Err(Error::NotEquivariant { x, g });
                }
            }
        }
        Ok(EquivariantMap { src, dst, map })
    }

    pub(crate) fn new_unchecked(src: GSetRef, dst: GSetRef, map: Vec<usize>) -> EquivariantMap {
        EquivariantMap { src, dst, map }
    }

    pub fn identity(x: &GSetRef) -> EquivariantMap {
        EquivariantMap { src: x.clone(), dst: x.clone(), map: (0..x.size).collect() }
    }

    pub fn src(&self) -> &GSetRef {
        &self.src
    }

    pub fn dst(&self) -> &GSetRef {
        &self.dst
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }
}

/// Result of a fibered product X ×_Z Y.
#[derive(Clone, Debug)]
pub struct FiberedProduct {
    pub apex: GSetRef,
    /// (x, y) pairs in lexicographic order.
    pub pairs: Vec<(usize, usize)>,
    pub to_x: EquivariantMap,
    pub to_y: EquivariantMap,
}

/// {(x, y) : α(x) = β(y)} with the diagonal action.
pub fn gset_fibered_product(alpha: &EquivariantMap, beta: &EquivariantMap) -> Result<FiberedProduct> {
    if !same_gset(&alpha.dst, &beta.dst) {
        return Err(Error::GroupMismatch("fibered product over different targets".into()));
    }
    let (x, y) = (&alpha.src, &beta.src);
    let mut pairs = Vec::new();
    let mut index = vec![usize::MAX; x.size * y.size];
    for a in 0..x.size {
        for b in 0..y.size {
            if alpha.map[a] == beta.map[b] {
                index[a * y.size + b] = pairs.len();
                pairs.push((a, b));
            }
        }
    }
    let n = x.group.order();
    let mut action = Vec::with_capacity(pairs.len() * n);
    for &(a, b) in &pairs {
        for g in 0..n {
            action.push(index[x.act(g, a) * y.size + y.act(g, b)]);
        }
    }
    let apex = Arc::new(GSet { group: x.group.clone(), size: pairs.len(), action });
    let to_x = EquivariantMap { src: apex.clone(), dst: x.clone(), map: pairs.iter().map(|p| p.0).collect() };
    let to_y = EquivariantMap { src: apex.clone(), dst: y.clone(), map: pairs.iter().map(|p| p.1).collect() };
    Ok(FiberedProduct { apex, pairs, to_x, to_y })
}

/// Isomorphism of G-sets: equal multisets of orbit stabilizer classes.
pub fn gsets_isomorphic(x: &GSet, y: &GSet) -> Result<bool> {
    check_same_group(x, y)?;
    Ok(x.size == y.size && x.orbit_types() == y.orbit_types())
}
