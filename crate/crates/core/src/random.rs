//! Seeded generators for groups, G-sets, 1-cells and 2-cells, shared by the
//! property suites and the CLI verifier.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::biset::Biset;
use crate::error::Result;
use crate::group::{all_subgroups, catalog, direct_product, enumerate_homomorphisms, GroupRef};
use crate::gset::{coset_gset, gset_coproduct, GSet, GSetRef};
use crate::span::Span;
use crate::twocat::{OneCell, TwoCell};

/// The generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial))
}

pub fn random_group<R: Rng>(rng: &mut R, max_order: usize) -> GroupRef {
    catalog(max_order).choose(rng).expect("catalog contains the trivial group").clone()
}

/// A G-set of size between 1 and `max_size` built from random orbits, with
/// points shuffled.
pub fn random_gset<R: Rng>(rng: &mut R, g: &GroupRef, max_size: usize) -> Result<GSet> {
    let subs = all_subgroups(g)?;
    let target = rng.gen_range(1..=max_size.max(1));
    let mut out = GSet::empty(g);
    loop {
        let room = target - out.size();
        let fits: Vec<_> = subs.iter().filter(|h| h.index() <= room).collect();
        let Some(h) = fits.choose(rng) else { break };
        out = gset_coproduct(&out, &coset_gset(g, h))?;
        if out.size() == target || rng.gen_bool(0.3) {
            break;
        }
    }
    let mut perm: Vec<usize> = (0..out.size()).collect();
    perm.shuffle(rng);
    Ok(permute_points(&out, &perm))
}

/// Relabel point x as perm[x].
pub fn permute_points(x: &GSet, perm: &[usize]) -> GSet {
    let n = x.group().order();
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    let mut action = Vec::with_capacity(x.size() * n);
    for &old in &inv {
        action.extend((0..n).map(|g| perm[x.act(g, old)]));
    }
    GSet::from_flat_unchecked(x.group().clone(), x.size(), action)
}

/// A random 1-cell src → dst (dst nonempty unless src is empty). On each
/// orbit with representative x0, pick a target y and a homomorphism
/// φ: G_{x0} → H_y, set α ≡ y and θ_x(g) = φ(ξ_{gx}⁻¹ g ξ_x) with ξ_x the
/// least element moving x0 to x, then twist by a random family ε.
pub fn random_onecell<R: Rng>(rng: &mut R, src: &GSetRef, dst: &GSetRef) -> Result<OneCell> {
    let (g, h) = (src.group(), dst.group());
    let (ng, nh) = (g.order(), h.order());
    let mut alpha = vec![0; src.size()];
    let mut theta = vec![0; src.size() * ng];
    for orbit in src.orbits() {
        let x0 = orbit[0];
        let y = rng.gen_range(0..dst.size());
        let gs = src.stabilizer(x0)?;
        let hs = dst.stabilizer(y)?;
        let (gk, _) = gs.to_group();
        let (hk, _) = hs.to_group();
        let homs = enumerate_homomorphisms(&gk, &hk, None)?;
        let phi = homs.choose(rng).expect("trivial homomorphism exists");
        let mut xi = vec![0; src.size()];
        for &p in &orbit {
            xi[p] = src.transporter(x0, p).expect("same orbit");
        }
        for &p in &orbit {
            alpha[p] = y;
            for gg in 0..ng {
                let s = g.mul(g.mul(g.inv(xi[src.act(gg, p)]), gg), xi[p]);
                let pos = gs.elements().binary_search(&s).expect("lands in the stabilizer");
                theta[p * ng + gg] = hs.elements()[phi.apply(pos)];
            }
        }
    }
    let base = OneCell::new_unchecked(src.clone(), dst.clone(), alpha, theta);
    let eps = (0..src.size()).map(|_| rng.gen_range(0..nh)).collect();
    Ok(TwoCell::twist(&base, eps)?.to().clone())
}

/// A 2-cell out of `a` with random components.
pub fn random_twocell<R: Rng>(rng: &mut R, a: &OneCell) -> Result<TwoCell> {
    let nh = a.dst_group().order();
    let eps = (0..a.src().size()).map(|_| rng.gen_range(0..nh)).collect();
    TwoCell::twist(a, eps)
}

/// A random X//G with |G| ≤ max_order and 1 ≤ |X| ≤ max_size.
pub fn random_zerocell<R: Rng>(rng: &mut R, max_order: usize, max_size: usize) -> Result<GSetRef> {
    let g = random_group(rng, max_order);
    Ok(Arc::new(random_gset(rng, &g, max_size)?))
}

/// A span to x from y with a random apex W//L, |L| ≤ max_order, |W| ≤ max_size.
pub fn random_span<R: Rng>(rng: &mut R, x: &GSetRef, y: &GSetRef, max_order: usize, max_size: usize) -> Result<Span> {
    let w = random_zerocell(rng, max_order, max_size)?;
    Span::new(random_onecell(rng, &w, x)?, random_onecell(rng, &w, y)?)
}

/// A transitive H-G-biset (H × G)/D with D drawn uniformly from all subgroups.
pub fn random_transitive_biset<R: Rng>(rng: &mut R, h: &GroupRef, g: &GroupRef) -> Result<Biset> {
    let p = direct_product(h, g);
    let d = all_subgroups(&p)?.choose(rng).expect("the trivial subgroup exists").clone();
    Biset::new(h.clone(), g.clone(), Arc::new(coset_gset(&p, &d)))
}

/// An H-G-biset with 1 to `max_size` points.
pub fn random_biset<R: Rng>(rng: &mut R, h: &GroupRef, g: &GroupRef, max_size: usize) -> Result<Biset> {
    let carrier = random_gset(rng, &direct_product(h, g), max_size)?;
    Biset::new(h.clone(), g.clone(), Arc::new(carrier))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twocat::validate_onecell;

    #[test]
    fn generated_cells_validate() {
        for t in 0..200 {
            let mut rng = trial_rng(7, t);
            let x = random_zerocell(&mut rng, 8, 8).unwrap();
            let y = random_zerocell(&mut rng, 8, 8).unwrap();
            assert!(x.size() >= 1 && x.size() <= 8);
            let a = random_onecell(&mut rng, &x, &y).unwrap();
            assert_eq!(validate_onecell(&a), Ok(()));
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let run = |s| {
            let mut rng = trial_rng(s, 3);
            let x = random_zerocell(&mut rng, 8, 6).unwrap();
            x.rows()
        };
        assert_eq!(run(11), run(11));
    }
}
