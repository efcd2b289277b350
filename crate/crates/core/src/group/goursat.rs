use super::{direct_product, same_group, GroupRef, Subgroup};
use crate::error::{Error, Result};

/// Goursat data of D ≤ H × G: C = proj_H(D), D0 = {h : (h,e) ∈ D},
/// B = proj_G(D), A = {g : (e,g) ∈ D} and the isomorphism f: B/A → C/D0.
#[derive(Clone, Debug)]
pub struct Goursat {
    pub h: GroupRef,
    pub g: GroupRef,
    pub c: Subgroup,
    pub d0: Subgroup,
    pub b: Subgroup,
    pub a: Subgroup,
    /// Pairs (least element of gA, least element of hD0) with f(gA) = hD0,
    /// sorted by the first entry.
    pub iso: Vec<(usize, usize)>,
}

impl Goursat {
    /// f applied to the coset of g ∈ B, as the least element of the image coset.
    pub fn apply(&self, g: usize) -> Option<usize> {
        let r = self.a.left_coset_rep(g);
        self.iso.binary_search_by_key(&r, |p| p.0).ok().map(|i| self.iso[i].1)
    }

    /// {(h, g) ∈ C × B : f(gA) = hD0} as a subgroup of `product` = H × G.
    pub fn reassemble(&self, product: &GroupRef) -> Subgroup {
        let ng = self.g.order();
        let mut els = Vec::new();
        for &h in self.c.elements() {
            let hr = self.d0.left_coset_rep(h);
            for &g in self.b.elements() {
                if self.apply(g) == Some(hr) {
                    els.push(h * ng + g);
                }
            }
        }
        els.sort_unstable();
        Subgroup::from_sorted_unchecked(product.clone(), els)
    }
}

pub fn goursat(h: &GroupRef, g: &GroupRef, d: &Subgroup) -> Result<Goursat> {
    let ng = g.order();
    if d.parent().order() != h.order() * ng || !same_group(d.parent(), &direct_product(h, g)) {
        return Err(Error::NotSubgroupOfProduct);
    }
    let mut c: Vec<usize> = d.elements().iter().map(|&x| x / ng).collect();
    let mut b: Vec<usize> = d.elements().iter().map(|&x| x % ng).collect();
    c.sort_unstable();
    c.dedup();
    b.sort_unstable();
    b.dedup();
    let d0: Vec<usize> = d.elements().iter().filter(|&&x| x % ng == 0).map(|&x| x / ng).collect();
    let a: Vec<usize> = d.elements().iter().filter(|&&x| x < ng).copied().collect();
    let c = Subgroup::from_sorted_unchecked(h.clone(), c);
    let b = Subgroup::from_sorted_unchecked(g.clone(), b);
    let d0 = Subgroup::from_sorted_unchecked(h.clone(), d0);
    let a = Subgroup::from_sorted_unchecked(g.clone(), a);
    let mut iso: Vec<(usize, usize)> =
        d.elements().iter().map(|&x| (a.left_coset_rep(x % ng), d0.left_coset_rep(x / ng))).collect();
    iso.sort_unstable();
    iso.dedup();
    Ok(Goursat { h: h.clone(), g: g.clone(), c, d0, b, a, iso })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, symmetric};

    #[test]
    fn diagonal() {
        let s3 = symmetric(3).unwrap();
        let p = direct_product(&s3, &s3);
        let diag: Vec<usize> = s3.elements().map(|x| x * 6 + x).collect();
        let d = Subgroup::new(p.clone(), diag).unwrap();
        let gd = goursat(&s3, &s3, &d).unwrap();
        assert_eq!(gd.c.order(), 6);
        assert_eq!(gd.b.order(), 6);
        assert_eq!(gd.d0.order(), 1);
        assert_eq!(gd.a.order(), 1);
        assert!(gd.iso.iter().all(|&(x, y)| x == y));
        assert_eq!(gd.reassemble(&p), d);
    }

    #[test]
    fn full_and_trivial() {
        let h = cyclic(2).unwrap();
        let g = cyclic(3).unwrap();
        let p = direct_product(&h, &g);
        let full = Subgroup::whole(&p);
        let gd = goursat(&h, &g, &full).unwrap();
        assert_eq!((gd.c.order(), gd.d0.order(), gd.b.order(), gd.a.order()), (2, 2, 3, 3));
        assert_eq!(gd.iso.len(), 1);
        assert_eq!(gd.reassemble(&p), full);
        let t = Subgroup::trivial(&p);
        let gd = goursat(&h, &g, &t).unwrap();
        assert_eq!((gd.c.order(), gd.d0.order(), gd.b.order(), gd.a.order()), (1, 1, 1, 1));
        assert_eq!(gd.reassemble(&p), t);
    }

    #[test]
    fn wrong_parent_rejected() {
        let h = cyclic(2).unwrap();
        let g = cyclic(3).unwrap();
        let other = cyclic(6).unwrap();
        assert!(matches!(goursat(&h, &g, &Subgroup::trivial(&other)), Err(Error::NotSubgroupOfProduct)));
    }
}
