//! Structural invariants over seeded random inputs. Each property draws a
//! seed and builds its inputs from a ChaCha stream, so failures shrink to
//! a small seed and replay exactly.

use std::sync::Arc;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use bisetkit::biset::{biset_compose, bisets_isomorphic, butterfly, elementary, Biset, Elementary};
use bisetkit::group::{
    all_subgroups, canonical_key, catalog, direct_product, enumerate_homomorphisms, find_isomorphism, goursat,
    normal_subgroups, FiniteGroup, GroupRef,
};
use bisetkit::gset::{decompose, gsets_isomorphic, GSet, GSetRef};
use bisetkit::mackey::{BisetFunctor, BurnsideFunctor, Phi, Psi, SpanFunctor};
use bisetkit::random::{
    random_biset, random_group, random_gset, random_onecell, random_span, random_transitive_biset, random_twocell,
    random_zerocell, trial_rng,
};
use bisetkit::span::{range, span_compose, spans_equivalent};
use bisetkit::twocat::{
    compose_onecells, is_stab_surjective, is_stab_surjective_brute, sim_factorize, two_pullback, validate_onecell,
    validate_twocell, OneCell,
};
use bisetkit::ZMatrix;

fn rng(seed: u64) -> ChaCha8Rng {
    trial_rng(seed, 0)
}

fn zerocell(r: &mut ChaCha8Rng) -> GSetRef {
    random_zerocell(r, 8, 3).unwrap()
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn relabelled_tables_are_isomorphic(seed in any::<u64>()) {
        let r = &mut rng(seed);
        let g = random_group(r, 12);
        let mut perm: Vec<usize> = g.elements().collect();
        perm.shuffle(r);
        let mut table = vec![vec![0; g.order()]; g.order()];
        for a in g.elements() {
            for b in g.elements() {
                table[perm[a]][perm[b]] = perm[g.mul(a, b)];
            }
        }
        let h: GroupRef = Arc::new(FiniteGroup::from_table(&table).unwrap());
        prop_assert!(find_isomorphism(&g, &h, None).unwrap().is_some());
        if g.order() <= 8 {
            prop_assert_eq!(canonical_key(&g), canonical_key(&h));
        }
    }

    #[test]
    fn goursat_reassembles_every_subgroup(seed in any::<u64>()) {
        let r = &mut rng(seed);
        let (h, g) = (random_group(r, 6), random_group(r, 6));
        let p = direct_product(&h, &g);
        let subs = all_subgroups(&p).unwrap();
        let d = subs.choose(r).unwrap();
        let data = goursat(&h, &g, d).unwrap();
        let back = data.reassemble(&p);
        prop_assert_eq!(back.elements(), d.elements());
        for &c in data.c.elements() {
            prop_assert!(data.d0.elements().iter().all(|&x| data.d0.contains(h.conj(c, x))));
        }
        prop_assert_eq!(data.c.order() / data.d0.order(), data.b.order() / data.a.order());
    }

    #[test]
    fn orbit_stabilizer_and_decomposition(seed in any::<u64>()) {
        let r = &mut rng(seed);
        let g = random_group(r, 12);
        let x = random_gset(r, &g, 8).unwrap();
        for orbit in x.orbits() {
            prop_assert_eq!(orbit.len() * x.stabilizer(orbit[0]).unwrap().order(), g.order());
        }
        let back = decompose(&x).unwrap().to_gset().unwrap();
        prop_assert!(gsets_isomorphic(&back, &x).unwrap());
    }

    #[test]
    fn onecell_composition_is_associative(seed in any::<u64>()) {
        let r = &mut rng(seed);
        let z: Vec<GSetRef> = (0..4).map(|_| zerocell(r)).collect();
        let a = random_onecell(r, &z[0], &z[1]).unwrap();
        let b = random_onecell(r, &z[1], &z[2]).unwrap();
        let c = random_onecell(r, &z[2], &z[3]).unwrap();
        let l = compose_onecells(&c, &compose_onecells(&b, &a).unwrap()).unwrap();
        prop_assert_eq!(&l, &compose_onecells(&compose_onecells(&c, &b).unwrap(), &a).unwrap());
        prop_assert!(validate_onecell(&l).is_ok());
        prop_assert_eq!(&compose_onecells(&OneCell::identity(a.dst()), &a).unwrap(), &a);
    }

    #[test]
    fn pullback_has_the_expected_apex(seed in any::<u64>()) {
        let r = &mut rng(seed);
        let (x, y, z) = (zerocell(r), zerocell(r), zerocell(r));
        let a = random_onecell(r, &x, &z).unwrap();
        let b = random_onecell(r, &y, &z).unwrap();
        let pb = two_pullback(&a, &b).unwrap();
        let k = z.group();
        let mut expect = 0;
        for p in 0..x.size() {
            for q in 0..y.size() {
                expect += k.elements().filter(|&g| z.act(g, a.alpha()[p]) == b.alpha()[q]).count();
            }
        }
        prop_assert_eq!(pb.apex.size(), expect);
        prop_assert_eq!(pb.group.order(), x.group().order() * y.group().order());
        prop_assert!(validate_twocell(&pb.kappa).is_ok());
        prop_assert_eq!(pb.kappa.from(), &compose_onecells(&a, &pb.wp_x).unwrap());
        prop_assert_eq!(pb.kappa.to(), &compose_onecells(&b, &pb.wp_y).unwrap());
    }

    #[test]
    fn sim_factors_and_stab_surjectivity(seed in any::<u64>()) {
        let r = &mut rng(seed);
        let (x, y) = (random_zerocell(r, 8, 6).unwrap(), random_zerocell(r, 8, 6).unwrap());
        let a = random_onecell(r, &x, &y).unwrap();
        let f = sim_factorize(&a);
        prop_assert_eq!(&compose_onecells(&f.tilde, &f.upsilon).unwrap(), &a);
        prop_assert!(f.tilde.is_equivariant());
        prop_assert!(is_stab_surjective_brute(&f.upsilon));
        let s = is_stab_surjective(&a).holds();
        prop_assert_eq!(s, is_stab_surjective_brute(&a));
        let e = random_twocell(r, &a).unwrap();
        prop_assert_eq!(is_stab_surjective(e.to()).holds(), s);
    }

    #[test]
    fn span_composition_is_associative_up_to_equivalence(seed in any::<u64>()) {
        let r = &mut rng(seed);
        let z: Vec<GSetRef> = (0..4).map(|_| random_zerocell(r, 4, 2).unwrap()).collect();
        let s = random_span(r, &z[1], &z[0], 4, 2).unwrap();
        let t = random_span(r, &z[2], &z[1], 4, 2).unwrap();
        let u = random_span(r, &z[3], &z[2], 4, 2).unwrap();
        let l = span_compose(&u, &span_compose(&t, &s).unwrap()).unwrap();
        let rr = span_compose(&span_compose(&u, &t).unwrap(), &s).unwrap();
        prop_assert!(spans_equivalent(&l, &rr).unwrap());
    }

    #[test]
    fn range_respects_composition_through_a_point(seed in any::<u64>()) {
        let r = &mut rng(seed);
        let (x, y) = (zerocell(r), zerocell(r));
        let p: GSetRef = Arc::new(GSet::point(&random_group(r, 8)));
        let s = random_span(r, &p, &x, 8, 4).unwrap();
        let t = random_span(r, &y, &p, 8, 4).unwrap();
        let lhs = range(&span_compose(&t, &s).unwrap());
        prop_assert!(bisets_isomorphic(&lhs, &biset_compose(&range(&t), &range(&s)).unwrap()).unwrap());
    }

    #[test]
    fn biset_composition_laws(seed in any::<u64>()) {
        let r = &mut rng(seed);
        let g: Vec<GroupRef> = (0..4).map(|_| random_group(r, 6)).collect();
        let u = random_biset(r, &g[1], &g[0], 4).unwrap();
        let v = random_biset(r, &g[2], &g[1], 4).unwrap();
        let w = random_biset(r, &g[3], &g[2], 4).unwrap();
        let l = biset_compose(&w, &biset_compose(&v, &u).unwrap()).unwrap();
        let rr = biset_compose(&biset_compose(&w, &v).unwrap(), &u).unwrap();
        prop_assert!(bisets_isomorphic(&l, &rr).unwrap());
        prop_assert!(bisets_isomorphic(&biset_compose(&Biset::identity(&g[1]), &u).unwrap(), &u).unwrap());
        let t = random_transitive_biset(r, &g[1], &g[0]).unwrap();
        prop_assert!(bisets_isomorphic(&butterfly(&t).unwrap().reassembled, &t).unwrap());
    }

    #[test]
    fn burnside_functor_is_multiplicative(seed in any::<u64>()) {
        let r = &mut rng(seed);
        let g: Vec<GroupRef> = (0..3).map(|_| random_group(r, 6)).collect();
        let u = random_biset(r, &g[1], &g[0], 4).unwrap();
        let v = random_biset(r, &g[2], &g[1], 4).unwrap();
        let b = |x: &Biset| -> ZMatrix { BurnsideFunctor.matrix(x).unwrap() };
        prop_assert_eq!(b(&biset_compose(&v, &u).unwrap()), b(&v).mul(&b(&u)).unwrap());
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn psi_is_a_functor(seed in any::<u64>()) {
        let r = &mut rng(seed);
        let z: Vec<GSetRef> = (0..3).map(|_| random_zerocell(r, 6, 2).unwrap()).collect();
        let s = random_span(r, &z[1], &z[0], 6, 2).unwrap();
        let t = random_span(r, &z[2], &z[1], 6, 2).unwrap();
        let f = Psi::new(BurnsideFunctor);
        let whole: ZMatrix = f.eval_span(&span_compose(&t, &s).unwrap()).unwrap();
        prop_assert_eq!(whole, f.eval_span(&t).unwrap().mul(&f.eval_span(&s).unwrap()).unwrap());
    }

    #[test]
    fn phi_of_psi_is_the_identity_on_bisets(seed in any::<u64>()) {
        let r = &mut rng(seed);
        let (h, g) = (random_group(r, 8), random_group(r, 8));
        let u = random_transitive_biset(r, &h, &g).unwrap();
        let b: ZMatrix = BurnsideFunctor.matrix(&u).unwrap();
        prop_assert_eq!(Phi::new(Psi::new(BurnsideFunctor)).matrix(&u).unwrap(), b);
    }
}

fn elementary_bisets(g: &GroupRef) -> Vec<Biset> {
    let mut out = Vec::new();
    for h in all_subgroups(g).unwrap() {
        out.push(elementary(Elementary::Ind(&h)).unwrap());
        out.push(elementary(Elementary::Res(&h)).unwrap());
    }
    for n in normal_subgroups(g).unwrap() {
        out.push(elementary(Elementary::Inf(&n)).unwrap());
        out.push(elementary(Elementary::Def(&n)).unwrap());
    }
    for f in enumerate_homomorphisms(g, g, None).unwrap() {
        if f.is_isomorphism() {
            out.push(elementary(Elementary::Iso(&f)).unwrap());
        }
    }
    out
}

/// B(V ×_H U) = B(V)·B(U) for every composable pair of elementary bisets
/// on groups of order at most 6, then on random transitive pairs.
#[test]
fn burnside_functor_law_on_elementary_pairs() {
    let all: Vec<Biset> = catalog(6).iter().flat_map(elementary_bisets).collect();
    let mut pairs = 0;
    for u in &all {
        for v in &all {
            if u.left_group().flat_table() != v.right_group().flat_table() {
                continue;
            }
            let b = |x: &Biset| -> ZMatrix { BurnsideFunctor.matrix(x).unwrap() };
            assert_eq!(b(&biset_compose(v, u).unwrap()), b(v).mul(&b(u)).unwrap());
            pairs += 1;
        }
    }
    assert!(pairs > 1000, "{pairs}");
    let small = catalog(6);
    for i in 0..100 {
        let r = &mut rng(i);
        let g: Vec<GroupRef> = (0..3).map(|_| small.choose(r).unwrap().clone()).collect();
        let u = random_transitive_biset(r, &g[1], &g[0]).unwrap();
        let v = random_transitive_biset(r, &g[2], &g[1]).unwrap();
        let b = |x: &Biset| -> ZMatrix { BurnsideFunctor.matrix(x).unwrap() };
        assert_eq!(b(&biset_compose(&v, &u).unwrap()), b(&v).mul(&b(&u)).unwrap(), "pair {i}");
    }
}
