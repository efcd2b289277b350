use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use super::OneCell;
use crate::error::Result;
use crate::gset::{GSet, GSetRef};

/// a = tilde ∘ upsilon through SIm a = (H × X)/∼.
#[derive(Clone, Debug)]
pub struct SimFactorization {
    pub sim: GSetRef,
    /// X//G → SIm//H, x ↦ [e, x], acting part θ_a.
    pub upsilon: OneCell,
    /// SIm//H → Y//H, [η, x] ↦ η·a(x), equivariant.
    pub tilde: OneCell,
    /// A representative (η, x) of each class.
    pub reps: Vec<(usize, usize)>,
    /// class[x·|H| + η] = class of (η, x)
    pub class: Vec<usize>,
}

/// Classes of H × X under (η, x) ∼ (η·θ_x(g)⁻¹, gx), numbered by least
/// node x·|H| + η.
pub fn sim_factorize(a: &OneCell) -> SimFactorization {
    let (x, y) = (a.src(), a.dst());
    let (g, h) = (x.group(), y.group());
    let nh = h.order();
    let nodes = x.size() * nh;
    let mut uf = UnionFind::<usize>::new(nodes);
    for &gg in g.generators() {
        for p in 0..x.size() {
            let t = h.inv(a.theta(p, gg));
            let gp = x.act(gg, p);
            for eta in 0..nh {
                uf.union(p * nh + eta, gp * nh + h.mul(eta, t));
            }
        }
    }
    let mut root_class = vec![usize::MAX; nodes];
    let mut class = vec![0; nodes];
    let mut reps = Vec::new();
    for v in 0..nodes {
        let r = uf.find(v);
        if root_class[r] == usize::MAX {
            root_class[r] = reps.len();
            reps.push((v % nh, v / nh));
        }
        class[v] = root_class[r];
    }
    let mut action = Vec::with_capacity(reps.len() * nh);
    for &(eta, p) in &reps {
        action.extend((0..nh).map(|hh| class[p * nh + h.mul(hh, eta)]));
    }
    let sim = Arc::new(GSet::from_flat_unchecked(h.clone(), reps.len(), action));
    let upsilon = OneCell::new_unchecked(
        x.clone(),
        sim.clone(),
        (0..x.size()).map(|p| class[p * nh]).collect(),
        a.theta_flat().to_vec(),
    );
    let tilde = OneCell::new_unchecked(
        sim.clone(),
        y.clone(),
        reps.iter().map(|&(eta, p)| y.act(eta, a.alpha()[p])).collect(),
        (0..reps.len()).flat_map(|_| 0..nh).collect(),
    );
    SimFactorization { sim, upsilon, tilde, reps, class }
}

/// Outcome of the stab-surjectivity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StabSurjectivity {
    Yes,
    /// y is not of the form h·a(x).
    MissesPoint { y: usize },
    /// h·a(x) = h′·a(x′) with no g such that x′ = gx and h = h′θ_x(g).
    Unrelated { h: usize, x: usize, h2: usize, x2: usize },
}

impl StabSurjectivity {
    pub fn holds(&self) -> bool {
        *self == StabSurjectivity::Yes
    }
}

/// Stab-surjective exactly when the comparison map SIm a → Y is bijective.
pub fn is_stab_surjective(a: &OneCell) -> StabSurjectivity {
    let f = sim_factorize(a);
    let y = a.dst();
    let mut seen = vec![usize::MAX; y.size()];
    for (c, &t) in f.tilde.alpha().iter().enumerate() {
        if seen[t] != usize::MAX {
            let (h, x) = f.reps[seen[t]];
            let (h2, x2) = f.reps[c];
            return StabSurjectivity::Unrelated { h, x, h2, x2 };
        }
        seen[t] = c;
    }
    match seen.iter().position(|&c| c == usize::MAX) {
        Some(y) => StabSurjectivity::MissesPoint { y },
        None => StabSurjectivity::Yes,
    }
}

/// Direct check of both conditions over all pairs.
pub fn is_stab_surjective_brute(a: &OneCell) -> bool {
    let (x, y) = (a.src(), a.dst());
    let (g, h) = (x.group(), y.group());
    let hit = |t: usize| (0..x.size()).any(|p| h.elements().any(|hh| y.act(hh, a.alpha()[p]) == t));
    if !(0..y.size()).all(hit) {
        return false;
    }
    for p in 0..x.size() {
        for p2 in 0..x.size() {
            for hh in h.elements() {
                for hh2 in h.elements() {
                    if y.act(hh, a.alpha()[p]) != y.act(hh2, a.alpha()[p2]) {
                        continue;
                    }
                    let ok = g.elements().any(|gg| x.act(gg, p) == p2 && hh == h.mul(hh2, a.theta(p, gg)));
                    if !ok {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Stab-surjective, and θ_x injective on G_x at each orbit representative.
pub fn is_equivalence(a: &OneCell) -> bool {
    if !is_stab_surjective(a).holds() {
        return false;
    }
    let x = a.src();
    x.orbit_reps().into_iter().all(|r| {
        let st = x.stabilizer(r).expect("point in range");
        st.elements().iter().all(|&gg| gg == 0 || a.theta(r, gg) != 0)
    })
}

/// An explicit quasi-inverse of an equivalence: each Y-orbit goes to the
/// orbit representative x_i of the X-orbit mapping onto it, with acting
/// part θ_y(h) = ψ(h_{hy}⁻¹ h h_y), ψ the inverse of θ_{x_i} on G_{x_i}.
pub fn quasi_inverse(a: &OneCell) -> Result<Option<OneCell>> {
    if !is_equivalence(a) {
        return Ok(None);
    }
    let (x, y) = (a.src(), a.dst());
    let (g, h) = (x.group(), y.group());
    let (ng, nh) = (g.order(), h.order());
    let y_orbit = y.orbit_index();
    let mut beta = vec![usize::MAX; y.size()];
    let mut theta = vec![0; y.size() * nh];
    for xi in x.orbit_reps() {
        let y0 = a.alpha()[xi];
        let mut psi = vec![usize::MAX; nh];
        for gg in 0..ng {
            if x.act(gg, xi) == xi {
                psi[a.theta(xi, gg)] = gg;
            }
        }
        let orbit: Vec<usize> = (0..y.size()).filter(|&t| y_orbit[t] == y_orbit[y0]).collect();
        let mut hy = vec![0; y.size()];
        for &t in &orbit {
            hy[t] = y.transporter(y0, t).expect("same orbit");
            beta[t] = xi;
        }
        for &t in &orbit {
            for hh in 0..nh {
                let s = h.mul(h.mul(h.inv(hy[y.act(hh, t)]), hh), hy[t]);
                theta[t * nh + hh] = psi[s];
            }
        }
    }
    debug_assert!(beta.iter().all(|&b| b != usize::MAX));
    Ok(Some(OneCell::from_flat(y.clone(), x.clone(), beta, theta)?))
}

#[cfg(test)]
mod tests {
    use super::super::{compose_onecells, find_twocell, validate_onecell, TwoCell};
    use super::*;
    use crate::group::{cyclic, quotient, symmetric, trivial, Homomorphism, Subgroup};
    use crate::gset::{coset_gset, decompose, gsets_isomorphic, EquivariantMap};

    fn factor_check(a: &OneCell) -> SimFactorization {
        let f = sim_factorize(a);
        assert_eq!(validate_onecell(&f.upsilon), Ok(()));
        assert_eq!(validate_onecell(&f.tilde), Ok(()));
        assert!(f.tilde.is_equivariant());
        assert_eq!(compose_onecells(&f.tilde, &f.upsilon).unwrap(), *a);
        assert!(is_stab_surjective(&f.upsilon).holds());
        assert!(is_stab_surjective_brute(&f.upsilon));
        f
    }

    #[test]
    fn equivariant_input_has_sim_isomorphic_to_source() {
        let s3 = symmetric(3).unwrap();
        let x = Arc::new(coset_gset(&s3, &Subgroup::trivial(&s3)));
        let y = Arc::new(coset_gset(&s3, &Subgroup::generated(&s3, &[1])));
        let map = (0..6).map(|p| coset_gset(&s3, &Subgroup::generated(&s3, &[1])).act(p, 0)).collect();
        let a = OneCell::equivariant(&EquivariantMap::new(x.clone(), y, map).unwrap());
        let f = factor_check(&a);
        assert!(gsets_isomorphic(&f.sim, &x).unwrap());
    }

    #[test]
    fn surjective_point_cell_has_one_point() {
        let c4 = cyclic(4).unwrap();
        let (_, p) = quotient(&c4, &Subgroup::generated(&c4, &[2])).unwrap();
        let a = OneCell::point(&p);
        assert_eq!(factor_check(&a).sim.size(), 1);
        assert!(is_stab_surjective(&a).holds());
        assert!(!is_equivalence(&a));
    }

    #[test]
    fn trivial_group_into_c2() {
        let c2 = cyclic(2).unwrap();
        let a = OneCell::point(&Homomorphism::trivial(&trivial(), &c2));
        let f = factor_check(&a);
        assert_eq!(decompose(&f.sim).unwrap().coeffs(), &[1, 0]);
        assert!(matches!(is_stab_surjective(&a), StabSurjectivity::Unrelated { .. }));
        assert!(!is_stab_surjective_brute(&a));
    }

    #[test]
    fn quasi_inverses_of_equivalences() {
        let s3 = symmetric(3).unwrap();
        for k in crate::group::all_subgroups(&s3).unwrap() {
            let (kg, incl) = k.to_group();
            let ind = super::super::induce(&incl, &Arc::new(GSet::point(&kg))).unwrap();
            let b = quasi_inverse(&ind.upsilon).unwrap().unwrap();
            let ba = compose_onecells(&b, &ind.upsilon).unwrap();
            let ab = compose_onecells(&ind.upsilon, &b).unwrap();
            assert!(find_twocell(&ba, &OneCell::identity(ba.src())).unwrap().is_some());
            assert!(find_twocell(&ab, &OneCell::identity(ab.src())).unwrap().is_some());
        }
    }

    #[test]
    fn twisting_preserves_stab_surjectivity() {
        let s3 = symmetric(3).unwrap();
        let x = Arc::new(coset_gset(&s3, &Subgroup::generated(&s3, &[1])));
        let a = OneCell::identity(&x);
        let e = TwoCell::twist(&a, vec![2, 4, 1]).unwrap();
        assert_eq!(is_stab_surjective(&a).holds(), is_stab_surjective(e.to()).holds());
        assert!(is_equivalence(e.to()));
    }
}
