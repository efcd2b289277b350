use std::sync::Arc;

use super::{coset_gset, gset_coproduct, gset_product, GSet};
use crate::error::{Error, Result};
use crate::group::{same_group, subgroup_class_index, subgroup_conjugacy_classes, GroupRef};

/// An element of the Burnside ring Ω(G) on the basis of transitive G-sets
/// G/H_i, indexed like `subgroup_conjugacy_classes(G)`.
#[derive(Clone, Debug)]
pub struct BurnsideElement {
    group: GroupRef,
    coeffs: Vec<i64>,
}

impl PartialEq for BurnsideElement {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.coeffs == other.coeffs
    }
}

impl Eq for BurnsideElement {}

impl BurnsideElement {
    pub fn new(group: &GroupRef, coeffs: Vec<i64>) -> Result<BurnsideElement> {
        let n = subgroup_conjugacy_classes(group)?.len();
        if coeffs.len() != n {
            return Err(Error::DimensionMismatch(format!("{} coefficients for {n} subgroup classes", coeffs.len())));
        }
        Ok(BurnsideElement { group: group.clone(), coeffs })
    }

    pub fn zero(group: &GroupRef) -> Result<BurnsideElement> {
        let n = subgroup_conjugacy_classes(group)?.len();
        Ok(BurnsideElement { group: group.clone(), coeffs: vec![0; n] })
    }

    pub fn basis(group: &GroupRef, i: usize) -> Result<BurnsideElement> {
        let mut z = Self::zero(group)?;
        if i >= z.coeffs.len() {
            return Err(Error::IndexOutOfRange { index: i, size: z.coeffs.len() });
        }
        z.coeffs[i] = 1;
        Ok(z)
    }

    /// [G/G], the unit.
    pub fn one(group: &GroupRef) -> Result<BurnsideElement> {
        let n = subgroup_conjugacy_classes(group)?.len();
        Self::basis(group, n - 1)
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn add(&self, other: &BurnsideElement) -> Result<BurnsideElement> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(BurnsideElement { group: self.group.clone(), coeffs })
    }

    pub fn scale(&self, c: i64) -> BurnsideElement {
        BurnsideElement { group: self.group.clone(), coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    fn check(&self, other: &BurnsideElement) -> Result<()> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch("Burnside elements over different groups".into()))
        }
    }

    /// A G-set representing a nonnegative element.
    pub fn to_gset(&self) -> Result<GSet> {
        let classes = subgroup_conjugacy_classes(&self.group)?;
        let mut out = GSet::empty(&self.group);
        for (h, &c) in classes.iter().zip(&self.coeffs) {
            if c < 0 {
                return Err(Error::ParamOutOfRange("negative coefficient has no G-set".into()));
            }
            let orbit = coset_gset(&self.group, h);
            for _ in 0..c {
                out = gset_coproduct(&out, &orbit)?;
            }
        }
        Ok(out)
    }
}

/// Orbit counts per stabilizer conjugacy class.
pub fn decompose(x: &GSet) -> Result<BurnsideElement> {
    let mut z = BurnsideElement::zero(x.group())?;
    for r in x.orbit_reps() {
        z.coeffs[subgroup_class_index(&x.stabilizer(r)?)?] += 1;
    }
    Ok(z)
}

/// m[i][j] = number of points of G/H_i fixed by H_j.
pub fn table_of_marks(g: &GroupRef) -> Result<Vec<Vec<i64>>> {
    let classes = subgroup_conjugacy_classes(g)?;
    Ok(classes
        .iter()
        .map(|hi| {
            let x = coset_gset(g, hi);
            classes.iter().map(|hj| x.fixed_points(hj.elements()) as i64).collect()
        })
        .collect())
}

/// Product of representative G-sets followed by `decompose`, extended
/// bilinearly.
pub fn burnside_mul(a: &BurnsideElement, b: &BurnsideElement) -> Result<BurnsideElement> {
    a.check(b)?;
    let g = &a.group;
    let classes = subgroup_conjugacy_classes(g)?;
    let orbits: Vec<Arc<GSet>> = classes.iter().map(|h| Arc::new(coset_gset(g, h))).collect();
    let mut out = BurnsideElement::zero(g)?;
    for (i, &ca) in a.coeffs.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (j, &cb) in b.coeffs.iter().enumerate() {
            if cb == 0 {
                continue;
            }
            let d = decompose(&gset_product(&orbits[i], &orbits[j])?)?;
            out = out.add(&d.scale(ca * cb))?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{catalog, cyclic, symmetric, trivial, Subgroup};
    use proptest::prelude::*;

    #[test]
    fn decompose_basics() {
        let s3 = symmetric(3).unwrap();
        assert_eq!(decompose(&GSet::empty(&s3)).unwrap().coeffs(), &[0, 0, 0, 0]);
        assert_eq!(decompose(&GSet::regular(&s3)).unwrap().coeffs(), &[1, 0, 0, 0]);
        let x = coset_gset(&s3, &Subgroup::generated(&s3, &[1]));
        assert_eq!(decompose(&x).unwrap().coeffs(), &[0, 1, 0, 0]);
    }

    #[test]
    fn marks() {
        assert_eq!(table_of_marks(&trivial()).unwrap(), vec![vec![1]]);
        assert_eq!(table_of_marks(&cyclic(2).unwrap()).unwrap(), vec![vec![2, 0], vec![1, 1]]);
        let s3 = symmetric(3).unwrap();
        let m = table_of_marks(&s3).unwrap();
        assert_eq!(m.iter().map(|r| r[0]).collect::<Vec<_>>(), vec![6, 3, 2, 1]);
        // Oracle: |G/H| = |G| / |H| and lower triangularity.
        for g in catalog(12) {
            let m = table_of_marks(&g).unwrap();
            let classes = subgroup_conjugacy_classes(&g).unwrap();
            for i in 0..m.len() {
                assert_eq!(m[i][0] as usize, g.order() / classes[i].order());
                assert!(m[i][i] > 0);
                for j in i + 1..m.len() {
                    assert_eq!(m[i][j], 0);
                }
            }
        }
    }

    #[test]
    fn products_in_small_rings() {
        let c2 = cyclic(2).unwrap();
        let free = BurnsideElement::basis(&c2, 0).unwrap();
        assert_eq!(burnside_mul(&free, &free).unwrap().coeffs(), &[2, 0]);
        let s3 = symmetric(3).unwrap();
        let c3 = BurnsideElement::basis(&s3, 2).unwrap();
        assert_eq!(burnside_mul(&c3, &c3).unwrap().coeffs(), &[0, 0, 2, 0]);
        let one = BurnsideElement::one(&s3).unwrap();
        assert_eq!(burnside_mul(&one, &c3).unwrap(), c3);
    }

    #[test]
    fn decompose_is_additive_and_counts_points() {
        let g = symmetric(3).unwrap();
        let classes = subgroup_conjugacy_classes(&g).unwrap();
        let a = coset_gset(&g, &classes[1]);
        let b = coset_gset(&g, &classes[2]);
        let sum = gset_coproduct(&a, &b).unwrap();
        let d = decompose(&sum).unwrap();
        assert_eq!(d, decompose(&a).unwrap().add(&decompose(&b).unwrap()).unwrap());
        let size: usize = d.coeffs().iter().zip(&classes).map(|(&c, h)| c as usize * h.index()).sum();
        assert_eq!(size, sum.size());
    }

    fn random_element(g: &GroupRef, seed: &[i8]) -> BurnsideElement {
        let n = subgroup_conjugacy_classes(g).unwrap().len();
        let coeffs = (0..n).map(|i| seed[i % seed.len()] as i64).collect();
        BurnsideElement::new(g, coeffs).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn mul_commutative_associative(gi in 0usize..22, a in prop::collection::vec(-3i8..4, 1..8),
                                       b in prop::collection::vec(-3i8..4, 1..8),
                                       c in prop::collection::vec(-3i8..4, 1..8)) {
            let cat = catalog(12);
            let g = &cat[gi % cat.len()];
            let (a, b, c) = (random_element(g, &a), random_element(g, &b), random_element(g, &c));
            prop_assert_eq!(burnside_mul(&a, &b).unwrap(), burnside_mul(&b, &a).unwrap());
            let left = burnside_mul(&burnside_mul(&a, &b).unwrap(), &c).unwrap();
            let right = burnside_mul(&a, &burnside_mul(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }

    #[test]
    fn marks_are_multiplicative() {
        // Oracle: marks of a product G-set are products of marks.
        let g = crate::group::alternating4();
        let m = table_of_marks(&g).unwrap();
        let n = m.len();
        for i in 0..n {
            for j in 0..n {
                let p = burnside_mul(&BurnsideElement::basis(&g, i).unwrap(), &BurnsideElement::basis(&g, j).unwrap()).unwrap();
                for k in 0..n {
                    let mark: i64 = (0..n).map(|l| p.coeffs()[l] * m[l][k]).sum();
                    assert_eq!(mark, m[i][k] * m[j][k]);
                }
            }
        }
    }
}
