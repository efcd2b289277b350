use std::sync::Arc;

use super::Span;
use crate::error::{Error, Result};
use crate::group::{find_isomorphism_with, quotient, signature, GroupRef, GroupSignature, Subgroup};
use crate::gset::{same_gset, GSet, GSetRef};
use crate::twocat::OneCell;

/// Invariants of a point span class; equal classes have equal keys.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassKey {
    pub left_orbit: usize,
    pub right_orbit: usize,
    pub signature: GroupSignature,
    /// |ker(λ, μ)|
    pub kernel: usize,
    /// λ(K), least under conjugation by G_{x_i}
    pub left_image: Vec<usize>,
    /// μ(K), least under conjugation by H_{y_j}
    pub right_image: Vec<usize>,
    /// (λ, μ)(K) ≤ G×H as pairs g·|H| + h, least under G_{x_i} × H_{y_j}
    pub joint_image: Vec<usize>,
}

/// The class of a span X//G ⇐ pt//K ⇒ Y//H hitting the orbit
/// representatives x_i and y_j, with acting parts λ: K → G_{x_i} and
/// μ: K → H_{y_j}.
#[derive(Clone, Debug)]
pub struct PointSpanClass {
    group: GroupRef,
    lambda: Vec<usize>,
    mu: Vec<usize>,
    key: ClassKey,
}

fn least_conjugate(els: &[usize], by: &[usize], conj: impl Fn(usize, usize) -> usize) -> Vec<usize> {
    let mut best: Vec<usize> = els.to_vec();
    best.sort_unstable();
    let mut buf = Vec::with_capacity(els.len());
    for &g in by {
        buf.clear();
        buf.extend(els.iter().map(|&x| conj(g, x)));
        buf.sort_unstable();
        if buf < best {
            best.clone_from(&buf);
        }
    }
    best
}

fn image_set(values: &[usize]) -> Vec<usize> {
    let mut v = values.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

impl PointSpanClass {
    /// Build from data already translated to orbit representatives.
    pub fn new(
        target: &GSet,
        source: &GSet,
        group: GroupRef,
        left_orbit: usize,
        right_orbit: usize,
        lambda: Vec<usize>,
        mu: Vec<usize>,
    ) -> Result<PointSpanClass> {
        let (xr, yr) = (target.orbit_reps(), source.orbit_reps());
        let xi = *xr.get(left_orbit).ok_or(Error::IndexOutOfRange { index: left_orbit, size: xr.len() })?;
        let yj = *yr.get(right_orbit).ok_or(Error::IndexOutOfRange { index: right_orbit, size: yr.len() })?;
        if lambda.len() != group.order() || mu.len() != group.order() {
            return Err(Error::DimensionMismatch("acting parts must be defined on the whole apex group".into()));
        }
        let pt = Arc::new(GSet::point(&group));
        OneCell::new(pt.clone(), Arc::new(target.clone()), vec![xi], std::slice::from_ref(&lambda))?;
        OneCell::new(pt, Arc::new(source.clone()), vec![yj], std::slice::from_ref(&mu))?;
        Ok(Self::build(target, source, group, left_orbit, right_orbit, lambda, mu))
    }

    pub(crate) fn build(
        target: &GSet,
        source: &GSet,
        group: GroupRef,
        left_orbit: usize,
        right_orbit: usize,
        lambda: Vec<usize>,
        mu: Vec<usize>,
    ) -> PointSpanClass {
        let (g, h) = (target.group(), source.group());
        let xi = target.orbit_reps()[left_orbit];
        let yj = source.orbit_reps()[right_orbit];
        let gs = target.stabilizer(xi).expect("orbit representative");
        let hs = source.stabilizer(yj).expect("orbit representative");
        let nh = h.order();
        let joint: Vec<usize> = lambda.iter().zip(&mu).map(|(&a, &b)| a * nh + b).collect();
        let joint_set = image_set(&joint);
        let pairs: Vec<usize> =
            gs.elements().iter().flat_map(|&a| hs.elements().iter().map(move |&b| a * nh + b)).collect();
        let key = ClassKey {
            left_orbit,
            right_orbit,
            signature: signature(&group),
            kernel: group.order() / joint_set.len(),
            left_image: least_conjugate(&image_set(&lambda), gs.elements(), |c, x| g.conj(c, x)),
            right_image: least_conjugate(&image_set(&mu), hs.elements(), |c, x| h.conj(c, x)),
            joint_image: least_conjugate(&joint_set, &pairs, |c, x| {
                g.conj(c / nh, x / nh) * nh + h.conj(c % nh, x % nh)
            }),
        };
        PointSpanClass { group, lambda, mu, key }
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn left_orbit(&self) -> usize {
        self.key.left_orbit
    }

    pub fn right_orbit(&self) -> usize {
        self.key.right_orbit
    }

    pub fn lambda(&self) -> &[usize] {
        &self.lambda
    }

    pub fn mu(&self) -> &[usize] {
        &self.mu
    }

    pub fn key(&self) -> &ClassKey {
        &self.key
    }

    /// The same legs on K/N, N = ker(λ, μ). Not equivalent to `self` when
    /// N ≠ e (they differ by a deflation span), but every range-based
    /// invariant agrees.
    pub fn faithful(&self, target: &GSet, source: &GSet) -> Result<PointSpanClass> {
        if self.key.kernel == 1 {
            return Ok(self.clone());
        }
        let n: Vec<usize> = (0..self.group.order()).filter(|&l| self.lambda[l] == 0 && self.mu[l] == 0).collect();
        let (q, p) = quotient(&self.group, &Subgroup::new(self.group.clone(), n)?)?;
        let (mut lambda, mut mu) = (vec![0; q.order()], vec![0; q.order()]);
        for l in 0..self.group.order() {
            lambda[p.apply(l)] = self.lambda[l];
            mu[p.apply(l)] = self.mu[l];
        }
        Ok(Self::build(target, source, q, self.key.left_orbit, self.key.right_orbit, lambda, mu))
    }

    /// The span X//G ⇐ pt//K ⇒ Y//H.
    pub fn realize(&self, target: &GSetRef, source: &GSetRef) -> Span {
        let pt = Arc::new(GSet::point(&self.group));
        let xi = target.orbit_reps()[self.key.left_orbit];
        let yj = source.orbit_reps()[self.key.right_orbit];
        let left = OneCell::new_unchecked(pt.clone(), target.clone(), vec![xi], self.lambda.clone());
        let right = OneCell::new_unchecked(pt, source.clone(), vec![yj], self.mu.clone());
        Span::new_unchecked(left, right)
    }

    /// Adjoint equivalence of point spans over the same boundary: an
    /// isomorphism φ: K → K′ and g ∈ G_{x_i}, h ∈ H_{y_j} with
    /// λ′∘φ = c_g∘λ and μ′∘φ = c_h∘μ.
    pub fn equivalent(&self, other: &PointSpanClass, target: &GSet, source: &GSet) -> Result<bool> {
        if self.key != other.key {
            return Ok(false);
        }
        if self.key.kernel == 1 {
            return Ok(true);
        }
        let (g, h) = (target.group(), source.group());
        let gs = target.stabilizer(target.orbit_reps()[self.key.left_orbit])?;
        let hs = source.stabilizer(source.orbit_reps()[self.key.right_orbit])?;
        let nh = h.order();
        let target_joint = image_set(&other.lambda.iter().zip(&other.mu).map(|(&a, &b)| a * nh + b).collect::<Vec<_>>());
        for &a in gs.elements() {
            for &b in hs.elements() {
                let moved = image_set(
                    &self.lambda.iter().zip(&self.mu).map(|(&l, &m)| g.conj(a, l) * nh + h.conj(b, m)).collect::<Vec<_>>(),
                );
                if moved != target_joint {
                    continue;
                }
                let found = find_isomorphism_with(&self.group, &other.group, None, |t, y| {
                    other.lambda[y] == g.conj(a, self.lambda[t]) && other.mu[y] == h.conj(b, self.mu[t])
                })?;
                if found.is_some() {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

/// Orbit-wise reduction of a span to point span classes: each apex orbit
/// Lw is replaced by pt//L_w, and the legs are moved onto the orbit
/// representatives by the least transporting elements.
pub fn canonicalize(s: &Span) -> Vec<PointSpanClass> {
    let (a, b) = (s.left(), s.right());
    let (x, y, w) = (a.dst(), b.dst(), s.apex());
    let (g, h) = (x.group(), y.group());
    let (xo, yo) = (x.orbit_index(), y.orbit_index());
    let (xr, yr) = (x.orbit_reps(), y.orbit_reps());
    w.orbit_reps()
        .into_iter()
        .map(|r| {
            let (k, incl) = w.stabilizer(r).expect("apex point").to_group();
            let (px, py) = (a.alpha()[r], b.alpha()[r]);
            let (i, j) = (xo[px], yo[py]);
            let c = x.transporter(px, xr[i]).expect("same orbit");
            let d = y.transporter(py, yr[j]).expect("same orbit");
            let lambda = incl.image().iter().map(|&l| g.conj(c, a.theta(r, l))).collect();
            let mu = incl.image().iter().map(|&l| h.conj(d, b.theta(r, l))).collect();
            PointSpanClass::build(x, y, k, i, j, lambda, mu)
        })
        .collect()
}

/// A formal ℤ-combination of pairwise inequivalent point span classes: a
/// morphism source → target of the span category's group completion.
#[derive(Clone, Debug)]
pub struct VirtualSpan {
    target: GSetRef,
    source: GSetRef,
    terms: Vec<(PointSpanClass, i64)>,
}

impl VirtualSpan {
    pub fn zero(target: &GSetRef, source: &GSetRef) -> VirtualSpan {
        VirtualSpan { target: target.clone(), source: source.clone(), terms: Vec::new() }
    }

    pub fn of_span(s: &Span) -> Result<VirtualSpan> {
        let mut v = Self::zero(s.target(), s.source());
        for c in canonicalize(s) {
            v.add_term(c, 1)?;
        }
        Ok(v)
    }

    pub fn of_class(target: &GSetRef, source: &GSetRef, c: PointSpanClass) -> VirtualSpan {
        VirtualSpan { target: target.clone(), source: source.clone(), terms: vec![(c, 1)] }
    }

    pub fn identity(x: &GSetRef) -> Result<VirtualSpan> {
        let id = OneCell::identity(x);
        Self::of_span(&Span::new(id.clone(), id)?)
    }

    pub fn target(&self) -> &GSetRef {
        &self.target
    }

    pub fn source(&self) -> &GSetRef {
        &self.source
    }

    pub fn terms(&self) -> &[(PointSpanClass, i64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Add c·[class], merging with an equivalent class if present.
    pub fn add_term(&mut self, class: PointSpanClass, c: i64) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        let start = self.terms.partition_point(|(t, _)| t.key < class.key);
        let mut idx = start;
        while idx < self.terms.len() && self.terms[idx].0.key == class.key {
            if self.terms[idx].0.equivalent(&class, &self.target, &self.source)? {
                self.terms[idx].1 += c;
                if self.terms[idx].1 == 0 {
                    self.terms.remove(idx);
                }
                return Ok(());
            }
            idx += 1;
        }
        self.terms.insert(idx, (class, c));
        Ok(())
    }

    fn check_boundary(&self, other: &VirtualSpan) -> Result<()> {
        if same_gset(&self.target, &other.target) && same_gset(&self.source, &other.source) {
            Ok(())
        } else {
            Err(Error::BoundaryMismatch("virtual spans with different boundaries".into()))
        }
    }

    pub fn add(&self, other: &VirtualSpan) -> Result<VirtualSpan> {
        self.check_boundary(other)?;
        let mut out = self.clone();
        for (c, v) in &other.terms {
            out.add_term(c.clone(), *v)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: i64) -> VirtualSpan {
        let mut out = self.clone();
        if c == 0 {
            out.terms.clear();
        }
        out.terms.iter_mut().for_each(|t| t.1 *= c);
        out
    }

    pub fn sub(&self, other: &VirtualSpan) -> Result<VirtualSpan> {
        self.add(&other.scale(-1))
    }

    /// Class-level equality.
    pub fn equals(&self, other: &VirtualSpan) -> Result<bool> {
        self.check_boundary(other)?;
        Ok(self.sub(other)?.is_zero())
    }

    /// self ∘ other, bilinear over point span compositions.
    pub fn compose(&self, other: &VirtualSpan) -> Result<VirtualSpan> {
        if !same_gset(&other.target, &self.source) {
            return Err(Error::BoundaryMismatch("composition of non-adjacent virtual spans".into()));
        }
        let mut out = VirtualSpan::zero(&self.target, &other.source);
        for (t, ct) in &self.terms {
            let ts = t.realize(&self.target, &self.source);
            for (s, cs) in &other.terms {
                let ss = s.realize(&other.target, &other.source);
                for c in canonicalize(&super::span_compose(&ts, &ss)?) {
                    out.add_term(c, ct * cs)?;
                }
            }
        }
        Ok(out)
    }

    /// Largest apex group order among the terms.
    pub fn max_group_order(&self) -> usize {
        self.terms.iter().map(|(c, _)| c.group.order()).max().unwrap_or(0)
    }
}

impl PartialEq for PointSpanClass {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key && self.lambda == other.lambda && self.mu == other.mu && self.group == other.group
    }
}
