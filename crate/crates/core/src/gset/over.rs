use std::collections::BTreeMap;
use std::sync::Arc;

use super::{coset_gset, gset_fibered_product, same_gset, EquivariantMap, GSet, GSetRef};
use crate::error::{Error, Result};
use crate::group::{subgroup_conjugacy_classes, Subgroup};

/// Class of a transitive object A → X of G-set/X: the orbit of X it lands
/// in, and the stabilizer of a preimage of the orbit representative x_i,
/// least under conjugation by G_{x_i}.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OverClass {
    pub orbit: usize,
    pub subgroup: Vec<usize>,
}

/// An element of Ω_G(X), the Grothendieck ring of G-sets over X.
#[derive(Clone, Debug)]
pub struct OverElement {
    base: GSetRef,
    terms: BTreeMap<OverClass, i64>,
}

impl PartialEq for OverElement {
    fn eq(&self, other: &Self) -> bool {
        same_gset(&self.base, &other.base) && self.terms == other.terms
    }
}

impl Eq for OverElement {}

impl OverElement {
    pub fn zero(base: &GSetRef) -> OverElement {
        OverElement { base: base.clone(), terms: BTreeMap::new() }
    }

    pub fn base(&self) -> &GSetRef {
        &self.base
    }

    pub fn terms(&self) -> &BTreeMap<OverClass, i64> {
        &self.terms
    }

    /// Class of A → X, orbit by orbit.
    pub fn from_map(f: &EquivariantMap) -> Result<OverElement> {
        let base = f.dst();
        let a = f.src();
        let orbit_of = base.orbit_index();
        let reps = base.orbit_reps();
        let mut out = OverElement::zero(base);
        for r in a.orbit_reps() {
            let x = f.apply(r);
            let i = orbit_of[x];
            let xi = reps[i];
            let c = base.transporter(x, xi).expect("same orbit");
            let gxi = base.stabilizer(xi)?;
            let stab = a.stabilizer(a.act(c, r))?;
            let subgroup = stab.min_conjugate_under(gxi.elements()).elements().to_vec();
            *out.terms.entry(OverClass { orbit: i, subgroup }).or_insert(0) += 1;
        }
        Ok(out)
    }

    pub fn basis(base: &GSetRef, class: OverClass) -> OverElement {
        OverElement { base: base.clone(), terms: BTreeMap::from([(class, 1)]) }
    }

    /// All classes: subgroups of each G_{x_i} up to G_{x_i}-conjugacy.
    pub fn basis_classes(base: &GSet) -> Result<Vec<OverClass>> {
        let mut out = Vec::new();
        for (i, xi) in base.orbit_reps().into_iter().enumerate() {
            let gxi = base.stabilizer(xi)?;
            let (k, incl) = gxi.to_group();
            for h in subgroup_conjugacy_classes(&k)? {
                let image: Vec<usize> = h.elements().iter().map(|&e| incl.apply(e)).collect();
                let s = Subgroup::from_sorted_unchecked(base.group().clone(), image);
                out.push(OverClass { orbit: i, subgroup: s.min_conjugate_under(gxi.elements()).elements().to_vec() });
            }
        }
        Ok(out)
    }

    /// G/K → X, gK ↦ g·x_i.
    pub fn representative(base: &GSetRef, class: &OverClass) -> Result<EquivariantMap> {
        let reps = base.orbit_reps();
        let xi = *reps.get(class.orbit).ok_or(Error::IndexOutOfRange { index: class.orbit, size: reps.len() })?;
        let g = base.group();
        let k = Subgroup::new(g.clone(), class.subgroup.clone())?;
        if !k.elements().iter().all(|&h| base.act(h, xi) == xi) {
            return Err(Error::NotSubgroup("class subgroup does not fix the orbit representative".into()));
        }
        let a = Arc::new(coset_gset(g, &k));
        let map = k.left_coset_reps().into_iter().map(|r| base.act(r, xi)).collect();
        Ok(EquivariantMap::new_unchecked(a, base.clone(), map))
    }

    pub fn add(&self, other: &OverElement) -> Result<OverElement> {
        self.check(other)?;
        let mut out = self.clone();
        for (c, &v) in &other.terms {
            *out.terms.entry(c.clone()).or_insert(0) += v;
        }
        out.terms.retain(|_, v| *v != 0);
        Ok(out)
    }

    pub fn scale(&self, c: i64) -> OverElement {
        let mut out = self.clone();
        out.terms.values_mut().for_each(|v| *v *= c);
        out.terms.retain(|_, v| *v != 0);
        out
    }

    fn check(&self, other: &OverElement) -> Result<()> {
        if same_gset(&self.base, &other.base) {
            Ok(())
        } else {
            Err(Error::BaseMismatch)
        }
    }
}

/// Fibered product over X of representatives, extended bilinearly.
pub fn omega_over_mul(u: &OverElement, v: &OverElement) -> Result<OverElement> {
    u.check(v)?;
    let mut out = OverElement::zero(&u.base);
    for (a, &ca) in &u.terms {
        let fa = OverElement::representative(&u.base, a)?;
        for (b, &cb) in &v.terms {
            let fb = OverElement::representative(&u.base, b)?;
            let fp = gset_fibered_product(&fa, &fb)?;
            let map = fp.to_x.map().iter().map(|&p| fa.apply(p)).collect();
            let down = EquivariantMap::new_unchecked(fp.apex.clone(), u.base.clone(), map);
            out = out.add(&OverElement::from_map(&down)?.scale(ca * cb))?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, symmetric};

    fn natural_s3() -> GSetRef {
        let s3 = symmetric(3).unwrap();
        let h = Subgroup::generated(&s3, &[1]);
        Arc::new(coset_gset(&s3, &h))
    }

    #[test]
    fn basis_classes_count_subgroups_of_stabilizers() {
        let x = natural_s3();
        // G_{x_0} ≅ C2 has two subgroups.
        assert_eq!(OverElement::basis_classes(&x).unwrap().len(), 2);
        let c3 = cyclic(3).unwrap();
        let two = Arc::new(GSet::trivial(&c3, 2));
        assert_eq!(OverElement::basis_classes(&two).unwrap().len(), 4);
    }

    #[test]
    fn representative_round_trips() {
        for x in [natural_s3(), Arc::new(GSet::trivial(&cyclic(4).unwrap(), 3))] {
            for c in OverElement::basis_classes(&x).unwrap() {
                let f = OverElement::representative(&x, &c).unwrap();
                EquivariantMap::new(f.src().clone(), f.dst().clone(), f.map().to_vec()).unwrap();
                assert_eq!(OverElement::from_map(&f).unwrap(), OverElement::basis(&x, c));
            }
        }
    }

    #[test]
    fn identity_is_unit() {
        let x = natural_s3();
        let one = OverElement::from_map(&EquivariantMap::identity(&x)).unwrap();
        for c in OverElement::basis_classes(&x).unwrap() {
            let b = OverElement::basis(&x, c);
            assert_eq!(omega_over_mul(&one, &b).unwrap(), b);
        }
    }

    #[test]
    fn over_a_point_matches_burnside_ring() {
        let s3 = symmetric(3).unwrap();
        let pt = Arc::new(GSet::point(&s3));
        let classes = OverElement::basis_classes(&pt).unwrap();
        assert_eq!(classes.len(), 4);
        let c3 = classes.iter().find(|c| c.subgroup.len() == 3).unwrap().clone();
        let b = OverElement::basis(&pt, c3.clone());
        assert_eq!(omega_over_mul(&b, &b).unwrap(), OverElement::basis(&pt, c3).scale(2));
    }

    #[test]
    fn commutative_on_basis() {
        let x = natural_s3();
        let classes = OverElement::basis_classes(&x).unwrap();
        for a in &classes {
            for b in &classes {
                let (ea, eb) = (OverElement::basis(&x, a.clone()), OverElement::basis(&x, b.clone()));
                assert_eq!(omega_over_mul(&ea, &eb).unwrap(), omega_over_mul(&eb, &ea).unwrap());
            }
        }
    }
}
