use std::sync::Arc;

use super::{OneCell, TwoCell};
use crate::error::{Error, Result};
use crate::group::{direct_product, GroupRef, Homomorphism};
use crate::gset::{gset_coproduct, GSet, GSetRef};

/// Ind_ι X with its adjoint equivalence data.
#[derive(Clone, Debug)]
pub struct Induced {
    pub set: GSetRef,
    /// υ: X//H → Ind_ι X//G, x ↦ [e, x], acting part ι.
    pub upsilon: OneCell,
    /// quasi-inverse Ind_ι X//G → X//H, [r_c, x] ↦ x.
    pub quasi: OneCell,
    /// ρ: id_X ⇒ quasi ∘ υ (the composite is the identity on the nose).
    pub rho: TwoCell,
    /// λ: υ ∘ quasi ⇒ id.
    pub lambda: TwoCell,
    /// Coset representatives r_c, least per coset; r_0 = e.
    pub reps: Vec<usize>,
}

/// Ind_ι X = (G × X)/∼ on pairs (c, x) ≙ [r_c, x], stored at c·|X| + x.
pub fn induce(iota: &Homomorphism, x: &GSetRef) -> Result<Induced> {
    if !iota.is_injective() {
        return Err(Error::NotInjective);
    }
    if !crate::group::same_group(iota.dom(), x.group()) {
        return Err(Error::GroupMismatch("induction from a different group".into()));
    }
    let (h, g) = (iota.dom(), iota.cod());
    let image = iota.image_subgroup();
    let reps = image.left_coset_reps();
    let mut pre = vec![usize::MAX; g.order()];
    for b in h.elements() {
        pre[iota.apply(b)] = b;
    }
    let mut coset_of = vec![0; g.order()];
    for t in g.elements() {
        coset_of[t] = reps.binary_search(&image.left_coset_rep(t)).expect("coset rep");
    }
    let (m, n, nx) = (reps.len(), g.order(), x.size());
    // g·r_c = r_{c'}·ι(b)
    let mut split = vec![(0usize, 0usize); m * n];
    for (c, &r) in reps.iter().enumerate() {
        for t in 0..n {
            let gr = g.mul(t, r);
            let c2 = coset_of[gr];
            split[c * n + t] = (c2, pre[g.mul(g.inv(reps[c2]), gr)]);
        }
    }
    let mut action = Vec::with_capacity(m * nx * n);
    for c in 0..m {
        for p in 0..nx {
            for t in 0..n {
                let (c2, b) = split[c * n + t];
                action.push(c2 * nx + x.act(b, p));
            }
        }
    }
    let set = Arc::new(GSet::from_flat_unchecked(g.clone(), m * nx, action));
    let upsilon = OneCell::new_unchecked(
        x.clone(),
        set.clone(),
        (0..nx).collect(),
        (0..nx).flat_map(|_| iota.image().iter().copied()).collect(),
    );
    let mut qtheta = Vec::with_capacity(m * nx * n);
    for c in 0..m {
        for _ in 0..nx {
            qtheta.extend((0..n).map(|t| split[c * n + t].1));
        }
    }
    let quasi = OneCell::new_unchecked(set.clone(), x.clone(), (0..m * nx).map(|i| i % nx).collect(), qtheta);
    let qu = super::compose_onecells(&quasi, &upsilon)?;
    let rho = TwoCell::new_unchecked(OneCell::identity(x), qu, vec![0; nx]);
    let uq = super::compose_onecells(&upsilon, &quasi)?;
    let lambda =
        TwoCell::new_unchecked(uq, OneCell::identity(&set), (0..m * nx).map(|i| reps[i / nx]).collect());
    Ok(Induced { set, upsilon, quasi, rho, lambda, reps })
}

/// The 2-coproduct of X//G and Y//H over G×H.
#[derive(Clone, Debug)]
pub struct TwoCoproduct {
    pub group: GroupRef,
    pub set: GSetRef,
    pub left: Induced,
    pub right: Induced,
    /// X//G → coproduct
    pub inj_x: OneCell,
    /// Y//H → coproduct
    pub inj_y: OneCell,
}

/// Ind_{ι_G} X ⊔ Ind_{ι_H} Y over G×H, with ι_G(g) = (g, e), ι_H(h) = (e, h).
pub fn two_coproduct(x: &GSetRef, y: &GSetRef) -> Result<TwoCoproduct> {
    let (g, h) = (x.group(), y.group());
    let p = direct_product(g, h);
    let nh = h.order();
    let iota_g = Homomorphism::new_unchecked(g.clone(), p.clone(), g.elements().map(|a| a * nh).collect());
    let iota_h = Homomorphism::new_unchecked(h.clone(), p.clone(), h.elements().collect());
    let left = induce(&iota_g, x)?;
    let right = induce(&iota_h, y)?;
    let set = Arc::new(gset_coproduct(&left.set, &right.set)?);
    let shift = left.set.size();
    let inj_x = OneCell::new_unchecked(
        x.clone(),
        set.clone(),
        left.upsilon.alpha().to_vec(),
        left.upsilon.theta_flat().to_vec(),
    );
    let inj_y = OneCell::new_unchecked(
        y.clone(),
        set.clone(),
        right.upsilon.alpha().iter().map(|&v| v + shift).collect(),
        right.upsilon.theta_flat().to_vec(),
    );
    Ok(TwoCoproduct { group: p, set, left, right, inj_x, inj_y })
}

#[cfg(test)]
mod tests {
    use super::super::{
        compose_onecells, find_twocell, hcompose_left, hcompose_right, is_equivalence, validate_onecell,
        validate_twocell, vcompose,
    };
    use super::*;
    use crate::group::{cyclic, symmetric, trivial, Subgroup};
    use crate::gset::{coset_gset, decompose};

    fn check(ind: &Induced) {
        for c in [&ind.upsilon, &ind.quasi] {
            assert_eq!(validate_onecell(c), Ok(()));
        }
        for e in [&ind.rho, &ind.lambda] {
            assert_eq!(validate_twocell(e), Ok(()));
        }
        // triangle identities
        let a = hcompose_left(&ind.upsilon, &ind.rho).unwrap();
        let b = hcompose_right(&ind.lambda, &ind.upsilon).unwrap();
        assert_eq!(vcompose(&b, &a).unwrap(), TwoCell::identity(&ind.upsilon));
        let a = hcompose_right(&ind.rho, &ind.quasi).unwrap();
        let b = hcompose_left(&ind.quasi, &ind.lambda).unwrap();
        assert_eq!(vcompose(&b, &a).unwrap(), TwoCell::identity(&ind.quasi));
        assert!(is_equivalence(&ind.upsilon));
        assert!(is_equivalence(&ind.quasi));
    }

    #[test]
    fn identity_induction() {
        let s3 = symmetric(3).unwrap();
        let x = Arc::new(coset_gset(&s3, &Subgroup::generated(&s3, &[1])));
        let ind = induce(&Homomorphism::identity(&s3), &x).unwrap();
        assert_eq!(*ind.set, *x);
        check(&ind);
    }

    #[test]
    fn index_many_points() {
        let c2 = cyclic(2).unwrap();
        let e = trivial();
        let iota = Homomorphism::trivial(&e, &c2);
        let ind = induce(&iota, &Arc::new(GSet::point(&e))).unwrap();
        assert_eq!(ind.set.size(), 2);
        check(&ind);
        let not_inj = Homomorphism::trivial(&c2, &c2);
        assert!(matches!(induce(&not_inj, &Arc::new(GSet::point(&c2))), Err(Error::NotInjective)));
    }

    #[test]
    fn reduction_of_fraction() {
        // Ind along K ↪ G of a point is G/K.
        let s3 = symmetric(3).unwrap();
        for k in crate::group::all_subgroups(&s3).unwrap() {
            let (kg, incl) = k.to_group();
            let ind = induce(&incl, &Arc::new(GSet::point(&kg))).unwrap();
            assert_eq!(decompose(&ind.set).unwrap(), decompose(&coset_gset(&s3, &k)).unwrap());
            check(&ind);
        }
    }

    #[test]
    fn coproduct_of_points() {
        let (g, h) = (cyclic(3).unwrap(), cyclic(2).unwrap());
        let cp = two_coproduct(&Arc::new(GSet::point(&g)), &Arc::new(GSet::point(&h))).unwrap();
        assert_eq!(cp.set.size(), 2 + 3);
        assert_eq!(validate_onecell(&cp.inj_x), Ok(()));
        assert_eq!(validate_onecell(&cp.inj_y), Ok(()));
        let q = compose_onecells(&cp.left.quasi, &cp.left.upsilon).unwrap();
        assert!(find_twocell(&q, &OneCell::identity(q.src())).unwrap().is_some());
    }

    #[test]
    fn coproduct_with_empty_is_equivalent() {
        let g = cyclic(3).unwrap();
        let x = Arc::new(coset_gset(&g, &Subgroup::trivial(&g)));
        let e = trivial();
        let cp = two_coproduct(&x, &Arc::new(GSet::empty(&e))).unwrap();
        assert_eq!(cp.set.size(), 3);
        assert!(is_equivalence(&cp.inj_x));
    }
}
