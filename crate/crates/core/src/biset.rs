//! H-G-bisets stored as (H×G)-sets, their composition over the middle group,
//! elementary bisets and the butterfly decomposition.

use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::group::{direct_product, goursat, quotient, same_group, Goursat, GroupRef, Homomorphism, Subgroup};
use crate::gset::{gsets_isomorphic, GSet, GSetRef};

/// An H-G-biset: a set with commuting left H and right G actions, kept as
/// the (H×G)-set with (h, g)·u = h·u·g⁻¹.
#[derive(Clone, Debug)]
pub struct Biset {
    left: GroupRef,
    right: GroupRef,
    carrier: GSetRef,
}

impl Biset {
    pub fn new(left: GroupRef, right: GroupRef, carrier: GSetRef) -> Result<Biset> {
        if !same_group(carrier.group(), &direct_product(&left, &right)) {
            return Err(Error::GroupMismatch("carrier is not over left × right".into()));
        }
        Ok(Biset { left, right, carrier })
    }

    pub(crate) fn new_unchecked(left: GroupRef, right: GroupRef, carrier: GSetRef) -> Biset {
        Biset { left, right, carrier }
    }

    /// Build from a two-sided action act(h, g, u) = h·u·g.
    pub fn from_two_sided(
        left: &GroupRef,
        right: &GroupRef,
        size: usize,
        act: impl Fn(usize, usize, usize) -> usize,
    ) -> Biset {
        let p = direct_product(left, right);
        let ng = right.order();
        let mut action = Vec::with_capacity(size * p.order());
        for u in 0..size {
            for q in 0..p.order() {
                action.push(act(q / ng, right.inv(q % ng), u));
            }
        }
        let carrier = Arc::new(GSet::from_flat_unchecked(p, size, action));
        Biset { left: left.clone(), right: right.clone(), carrier }
    }

    /// G with (g, h)·x = g x h⁻¹.
    pub fn identity(g: &GroupRef) -> Biset {
        Self::from_two_sided(g, g, g.order(), |a, b, x| g.mul(g.mul(a, x), b))
    }

    pub fn left_group(&self) -> &GroupRef {
        &self.left
    }

    pub fn right_group(&self) -> &GroupRef {
        &self.right
    }

    pub fn carrier(&self) -> &GSetRef {
        &self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    /// h·u·g
    pub fn act(&self, h: usize, g: usize, u: usize) -> usize {
        self.carrier.act(h * self.right.order() + self.right.inv(g), u)
    }

    pub fn is_transitive(&self) -> bool {
        self.carrier.is_transitive()
    }

    /// For a biset with trivial right group: the underlying left set.
    pub fn as_left_set(&self) -> Result<GSet> {
        if self.right.order() != 1 {
            return Err(Error::GroupMismatch("right group is not trivial".into()));
        }
        let emb = Homomorphism::new_unchecked(self.left.clone(), self.carrier.group().clone(), self.left.elements().collect());
        self.carrier.restrict(&emb)
    }

    /// A G-set regarded as a G-e-biset.
    pub fn from_left_set(x: &GSet) -> Biset {
        let e = crate::group::trivial();
        Self::from_two_sided(x.group(), &e, x.size(), |g, _, u| x.act(g, u))
    }
}

/// V ×_H U = (V × U)/∼ with (v·h, u) ∼ (v, h·u).
pub fn biset_compose(v: &Biset, u: &Biset) -> Result<Biset> {
    if !same_group(&v.right, &u.left) {
        return Err(Error::MiddleGroupMismatch);
    }
    let h = &u.left;
    let (nv, nu) = (v.size(), u.size());
    let mut uf = UnionFind::<usize>::new(nv * nu);
    for &t in h.generators() {
        for a in 0..nv {
            let at = v.act(0, t, a);
            for b in 0..nu {
                uf.union(a * nu + u.act(t, 0, b), at * nu + b);
            }
        }
    }
    let mut class = vec![usize::MAX; nv * nu];
    let mut root_class = vec![usize::MAX; nv * nu];
    let mut reps = Vec::new();
    for node in 0..nv * nu {
        let r = uf.find(node);
        if root_class[r] == usize::MAX {
            root_class[r] = reps.len();
            reps.push(node);
        }
        class[node] = root_class[r];
    }
    let (k, g) = (&v.left, &u.right);
    Ok(Biset::from_two_sided(k, g, reps.len(), |kk, gg, c| {
        let node = reps[c];
        class[v.act(kk, 0, node / nu) * nu + u.act(0, gg, node % nu)]
    }))
}

/// Ind along an injective K → G: the G-K-biset G.
pub fn ind(incl: &Homomorphism) -> Result<Biset> {
    if !incl.is_injective() {
        return Err(Error::NotInjective);
    }
    let g = incl.cod();
    Ok(Biset::from_two_sided(g, incl.dom(), g.order(), |a, k, x| g.mul(g.mul(a, x), incl.apply(k))))
}

/// Res along an injective K → G: the K-G-biset G.
pub fn res(incl: &Homomorphism) -> Result<Biset> {
    if !incl.is_injective() {
        return Err(Error::NotInjective);
    }
    let g = incl.cod();
    Ok(Biset::from_two_sided(incl.dom(), g, g.order(), |k, b, x| g.mul(g.mul(incl.apply(k), x), b)))
}

/// Inf along a surjection p: G → Q: the G-Q-biset Q.
pub fn inf(p: &Homomorphism) -> Result<Biset> {
    if !p.is_surjective() {
        return Err(Error::ParamOutOfRange("inflation needs a surjection".into()));
    }
    let q = p.cod();
    Ok(Biset::from_two_sided(p.dom(), q, q.order(), |a, b, x| q.mul(q.mul(p.apply(a), x), b)))
}

/// Def along a surjection p: G → Q: the Q-G-biset Q.
pub fn def(p: &Homomorphism) -> Result<Biset> {
    if !p.is_surjective() {
        return Err(Error::ParamOutOfRange("deflation needs a surjection".into()));
    }
    let q = p.cod();
    Ok(Biset::from_two_sided(q, p.dom(), q.order(), |a, b, x| q.mul(q.mul(a, x), p.apply(b))))
}

/// Iso along an isomorphism f: G → H: the H-G-biset H with h·x·g = h x f(g).
pub fn iso(f: &Homomorphism) -> Result<Biset> {
    if !f.is_isomorphism() {
        return Err(Error::NotIso);
    }
    let h = f.cod();
    Ok(Biset::from_two_sided(h, f.dom(), h.order(), |a, b, x| h.mul(h.mul(a, x), f.apply(b))))
}

/// The elementary bisets named by subgroup data of a fixed group.
#[derive(Clone, Copy, Debug)]
pub enum Elementary<'a> {
    /// Ind^G_H for H ≤ G
    Ind(&'a Subgroup),
    /// Res^G_H for H ≤ G
    Res(&'a Subgroup),
    /// Inf^G_{G/N} for N ⊴ G
    Inf(&'a Subgroup),
    /// Def^G_{G/N} for N ⊴ G
    Def(&'a Subgroup),
    Iso(&'a Homomorphism),
}

pub fn elementary(kind: Elementary<'_>) -> Result<Biset> {
    match kind {
        Elementary::Ind(h) => ind(&h.to_group().1),
        Elementary::Res(h) => res(&h.to_group().1),
        Elementary::Inf(n) => inf(&quotient(n.parent(), n)?.1),
        Elementary::Def(n) => def(&quotient(n.parent(), n)?.1),
        Elementary::Iso(f) => iso(f),
    }
}

/// Equal orbit types over H × G.
pub fn bisets_isomorphic(u: &Biset, v: &Biset) -> Result<bool> {
    if !same_group(&u.left, &v.left) || !same_group(&u.right, &v.right) {
        return Err(Error::GroupMismatch("bisets between different groups".into()));
    }
    gsets_isomorphic(&u.carrier, &v.carrier)
}

/// Goursat data of the stabilizer of point 0 and the composite
/// Ind^H_C ×_C Inf^C_{C/D0} ×_{C/D0} Iso(f) ×_{B/A} Def^B_{B/A} ×_B Res^G_B.
#[derive(Clone, Debug)]
pub struct Butterfly {
    pub data: Goursat,
    pub reassembled: Biset,
}

pub fn butterfly(u: &Biset) -> Result<Butterfly> {
    if !u.is_transitive() {
        return Err(Error::NotTransitive);
    }
    let (h, g) = (&u.left, &u.right);
    let d = u.carrier.stabilizer(0)?;
    let data = goursat(h, g, &d)?;
    let (cg, c_incl) = data.c.to_group();
    let (bg, b_incl) = data.b.to_group();
    let pos = |s: &Subgroup, x: usize| s.elements().binary_search(&x).expect("element of subgroup");
    let d0_in_c: Vec<usize> = data.d0.elements().iter().map(|&x| pos(&data.c, x)).collect();
    let a_in_b: Vec<usize> = data.a.elements().iter().map(|&x| pos(&data.b, x)).collect();
    let (cq, pc) = quotient(&cg, &Subgroup::new(cg.clone(), d0_in_c)?)?;
    let (bq, pb) = quotient(&bg, &Subgroup::new(bg.clone(), a_in_b)?)?;
    // f: B/A → C/D0 on quotient indices
    let mut f_img = vec![usize::MAX; bq.order()];
    for bi in 0..bg.order() {
        let img = data.apply(data.b.elements()[bi]).expect("element of B");
        f_img[pb.apply(bi)] = pc.apply(pos(&data.c, img));
    }
    let f = Homomorphism::new(bq.clone(), cq.clone(), f_img)?;
    let chain = [ind(&c_incl)?, inf(&pc)?, iso(&f)?, def(&pb)?, res(&b_incl)?];
    let mut acc = chain[4].clone();
    for b in chain[..4].iter().rev() {
        acc = biset_compose(b, &acc)?;
    }
    Ok(Butterfly { data, reassembled: acc })
}

/// Orbits of a biset as transitive bisets.
pub fn biset_orbits(u: &Biset) -> Vec<Biset> {
    u.carrier
        .orbits()
        .into_iter()
        .map(|orbit| {
            let mut index = vec![usize::MAX; u.size()];
            for (i, &p) in orbit.iter().enumerate() {
                index[p] = i;
            }
            let n = u.carrier.group().order();
            let action = orbit.iter().flat_map(|&p| (0..n).map(|q| index[u.carrier.act(q, p)]).collect::<Vec<_>>()).collect();
            let carrier = Arc::new(GSet::from_flat_unchecked(u.carrier.group().clone(), orbit.len(), action));
            Biset::new_unchecked(u.left.clone(), u.right.clone(), carrier)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, klein, normal_subgroups, symmetric, trivial, all_subgroups};
    use crate::gset::coset_gset;

    fn biso(u: &Biset, v: &Biset) -> bool {
        bisets_isomorphic(u, v).unwrap()
    }

    #[test]
    fn identity_is_a_unit() {
        let s3 = symmetric(3).unwrap();
        let c2 = Subgroup::generated(&s3, &[1]);
        let u = elementary(Elementary::Ind(&c2)).unwrap();
        let l = biset_compose(&Biset::identity(&s3), &u).unwrap();
        assert!(biso(&l, &u));
        let r = biset_compose(&u, &Biset::identity(u.right_group())).unwrap();
        assert!(biso(&r, &u));
        assert!(biso(&iso(&Homomorphism::identity(&s3)).unwrap(), &Biset::identity(&s3)));
    }

    #[test]
    fn identity_is_product_mod_diagonal() {
        let s3 = symmetric(3).unwrap();
        let p = direct_product(&s3, &s3);
        let diag = Subgroup::new(p.clone(), s3.elements().map(|x| x * 6 + x).collect()).unwrap();
        let u = Biset::new(s3.clone(), s3.clone(), Arc::new(coset_gset(&p, &diag))).unwrap();
        assert!(biso(&u, &Biset::identity(&s3)));
    }

    #[test]
    fn def_after_inf_is_identity() {
        for g in crate::group::catalog(12) {
            for n in normal_subgroups(&g).unwrap() {
                let (q, p) = quotient(&g, &n).unwrap();
                let c = biset_compose(&def(&p).unwrap(), &inf(&p).unwrap()).unwrap();
                assert!(biso(&c, &Biset::identity(&q)), "{}", g.label());
            }
        }
    }

    #[test]
    fn double_cosets() {
        let s3 = symmetric(3).unwrap();
        let c2 = Subgroup::generated(&s3, &[1]);
        let c = biset_compose(&elementary(Elementary::Res(&c2)).unwrap(), &elementary(Elementary::Ind(&c2)).unwrap())
            .unwrap();
        let mut sizes: Vec<usize> = c.carrier().orbits().iter().map(|o| o.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 4]);
    }

    #[test]
    fn elementary_sizes() {
        let s3 = symmetric(3).unwrap();
        let a3 = Subgroup::generated(&s3, &[3]);
        assert_eq!(a3.order(), 3);
        assert_eq!(elementary(Elementary::Ind(&a3)).unwrap().size(), 6);
        assert_eq!(elementary(Elementary::Inf(&a3)).unwrap().size(), 2);
        let c2 = Subgroup::generated(&s3, &[1]);
        assert!(matches!(elementary(Elementary::Inf(&c2)), Err(Error::NotNormal { .. })));
        let c2g = cyclic(2).unwrap();
        assert!(matches!(iso(&Homomorphism::trivial(&c2g, &c2g)), Err(Error::NotIso)));
        // free C2-C2 biset Ind^{C2}_e ×_e Res^{C2}_e
        let e = Subgroup::trivial(&c2g);
        let c = biset_compose(&elementary(Elementary::Ind(&e)).unwrap(), &elementary(Elementary::Res(&e)).unwrap())
            .unwrap();
        assert_eq!(c.size(), 4);
        assert_eq!(c.carrier().orbits().len(), 1);
        let _ = trivial();
    }

    #[test]
    fn butterfly_of_identity_inf_res() {
        let s3 = symmetric(3).unwrap();
        let bf = butterfly(&Biset::identity(&s3)).unwrap();
        assert_eq!((bf.data.c.order(), bf.data.b.order(), bf.data.d0.order(), bf.data.a.order()), (6, 6, 1, 1));
        assert!(bf.data.iso.iter().all(|&(x, y)| x == y));
        let a3 = Subgroup::generated(&s3, &[3]);
        let (_, p) = quotient(&s3, &a3).unwrap();
        let bf = butterfly(&inf(&p).unwrap()).unwrap();
        assert_eq!((bf.data.c.order(), bf.data.d0.order(), bf.data.b.order(), bf.data.a.order()), (6, 3, 2, 1));
        let c2 = Subgroup::generated(&s3, &[1]);
        let u = elementary(Elementary::Res(&c2)).unwrap();
        let bf = butterfly(&u).unwrap();
        assert_eq!((bf.data.c.order(), bf.data.d0.order(), bf.data.b.order(), bf.data.a.order()), (2, 1, 2, 1));
        assert!(biso(&bf.reassembled, &u));
    }

    #[test]
    fn butterfly_reassembles_all_transitive_bisets() {
        let groups = [cyclic(2).unwrap(), cyclic(3).unwrap(), cyclic(4).unwrap(), klein(), symmetric(3).unwrap()];
        for h in &groups {
            for g in &groups {
                let p = direct_product(h, g);
                for d in all_subgroups(&p).unwrap() {
                    let u = Biset::new(h.clone(), g.clone(), Arc::new(coset_gset(&p, &d))).unwrap();
                    let bf = butterfly(&u).unwrap();
                    assert!(biso(&bf.reassembled, &u));
                }
            }
        }
    }
}
