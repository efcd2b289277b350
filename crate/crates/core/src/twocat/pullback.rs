use std::sync::Arc;

use super::{compose_onecells, OneCell, TwoCell};
use crate::error::{Error, Result};
use crate::group::{direct_product, GroupRef};
use crate::gset::{same_gset, GSet, GSetRef};

/// The 2-fibered product F of a: X//G → Z//K and b: Y//H → Z//K.
#[derive(Clone, Debug)]
pub struct PullbackResult {
    pub group: GroupRef,
    pub apex: GSetRef,
    /// (x, y, k) triples in lexicographic order.
    pub points: Vec<(usize, usize, usize)>,
    /// ℘_X: F//(G×H) → X//G
    pub wp_x: OneCell,
    /// ℘_Y: F//(G×H) → Y//H
    pub wp_y: OneCell,
    /// κ: a∘℘_X ⇒ b∘℘_Y, κ_{(x,y,k)} = k
    pub kappa: TwoCell,
}

/// F = {(x, y, k) : b(y) = k·a(x)} with
/// (g, h)(x, y, k) = (gx, hy, θ_{b,y}(h)·k·θ_{a,x}(g)⁻¹).
pub fn two_pullback(a: &OneCell, b: &OneCell) -> Result<PullbackResult> {
    if !same_gset(a.dst(), b.dst()) {
        return Err(Error::CellMismatch("pullback of cells with different targets".into()));
    }
    let (x, y, z) = (a.src(), b.src(), a.dst());
    let (g, h, k) = (x.group(), y.group(), z.group());
    let (ng, nh, nk) = (g.order(), h.order(), k.order());
    let p = direct_product(g, h);
    let mut points = Vec::new();
    let mut index = vec![usize::MAX; x.size() * y.size() * nk];
    for xi in 0..x.size() {
        for yi in 0..y.size() {
            for kk in 0..nk {
                if b.alpha()[yi] == z.act(kk, a.alpha()[xi]) {
                    index[(xi * y.size() + yi) * nk + kk] = points.len();
                    points.push((xi, yi, kk));
                }
            }
        }
    }
    let np = ng * nh;
    let mut action = Vec::with_capacity(points.len() * np);
    for &(xi, yi, kk) in &points {
        for gg in 0..ng {
            let tinv = k.inv(a.theta(xi, gg));
            let gx = x.act(gg, xi);
            for hh in 0..nh {
                let k2 = k.mul(k.mul(b.theta(yi, hh), kk), tinv);
                action.push(index[(gx * y.size() + y.act(hh, yi)) * nk + k2]);
            }
        }
    }
    let apex = Arc::new(GSet::from_flat_unchecked(p.clone(), points.len(), action));
    let (mut ax, mut tx, mut ay, mut ty) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for &(xi, yi, _) in &points {
        ax.push(xi);
        ay.push(yi);
        tx.extend((0..np).map(|q| q / nh));
        ty.extend((0..np).map(|q| q % nh));
    }
    let wp_x = OneCell::new_unchecked(apex.clone(), x.clone(), ax, tx);
    let wp_y = OneCell::new_unchecked(apex.clone(), y.clone(), ay, ty);
    let kappa = TwoCell::new_unchecked(
        compose_onecells(a, &wp_x)?,
        compose_onecells(b, &wp_y)?,
        points.iter().map(|t| t.2).collect(),
    );
    Ok(PullbackResult { group: p, apex, points, wp_x, wp_y, kappa })
}

#[cfg(test)]
mod tests {
    use super::super::{is_equivalence, validate_onecell, validate_twocell};
    use super::*;
    use crate::group::{cyclic, symmetric, Homomorphism, Subgroup};
    use crate::gset::{coset_gset, decompose, gset_fibered_product, EquivariantMap};

    #[test]
    fn identity_on_a_point() {
        let s3 = symmetric(3).unwrap();
        let id = OneCell::point(&Homomorphism::identity(&s3));
        let pb = two_pullback(&id, &id).unwrap();
        assert_eq!(pb.apex.size(), 6);
        assert!(pb.apex.is_transitive());
        let diag: Vec<usize> = s3.elements().map(|x| x * 6 + x).collect();
        let st = pb.apex.stabilizer(0).unwrap();
        assert_eq!(st.min_conjugate(), Subgroup::new(pb.group.clone(), diag).unwrap().min_conjugate());
        assert_eq!(validate_onecell(&pb.wp_x), Ok(()));
        assert_eq!(validate_twocell(&pb.kappa), Ok(()));
    }

    #[test]
    fn disjoint_images_give_empty_apex() {
        let c2 = cyclic(2).unwrap();
        let z = Arc::new(GSet::trivial(&c2, 2));
        let pt = Arc::new(GSet::point(&c2));
        let a = OneCell::equivariant(&EquivariantMap::new(pt.clone(), z.clone(), vec![0]).unwrap());
        let b = OneCell::equivariant(&EquivariantMap::new(pt, z, vec![1]).unwrap());
        assert_eq!(two_pullback(&a, &b).unwrap().apex.size(), 0);
    }

    #[test]
    fn equivariant_legs_match_ordinary_pullback() {
        // Oracle: Ind along the diagonal of the ordinary fibered product.
        let s3 = symmetric(3).unwrap();
        let x = Arc::new(coset_gset(&s3, &Subgroup::generated(&s3, &[1])));
        let y = Arc::new(coset_gset(&s3, &Subgroup::trivial(&s3)));
        let pt = Arc::new(GSet::point(&s3));
        let fx = EquivariantMap::new(x.clone(), pt.clone(), vec![0; 3]).unwrap();
        let fy = EquivariantMap::new(y.clone(), pt.clone(), vec![0; 6]).unwrap();
        let pb = two_pullback(&OneCell::equivariant(&fx), &OneCell::equivariant(&fy)).unwrap();
        let ord = gset_fibered_product(&fx, &fy).unwrap();
        let diag: Vec<usize> = s3.elements().map(|g| g * 6 + g).collect();
        let iota = Homomorphism::new(s3.clone(), pb.group.clone(), diag).unwrap();
        let ind = super::super::induce(&iota, &ord.apex).unwrap();
        assert_eq!(decompose(&ind.set).unwrap(), decompose(&pb.apex).unwrap());
        assert!(is_equivalence(&ind.upsilon));
        let alpha = ord.pairs.iter().map(|&(a, b)| pb.points.iter().position(|&t| t == (a, b, 0)).unwrap()).collect();
        let c = OneCell::with_hom(ord.apex.clone(), pb.apex.clone(), alpha, &iota).unwrap();
        assert!(is_equivalence(&c));
    }
}
