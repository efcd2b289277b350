//! Spans X//G ⇐ W//L ⇒ Y//H, read as morphisms Y → X, with their sums,
//! compositions, classes and ranges.

mod class;
mod obig;

use std::sync::Arc;

pub use class::{canonicalize, ClassKey, PointSpanClass, VirtualSpan};
pub use obig::{Obig, DEFAULT_OBIG_CAP};

use crate::biset::Biset;
use crate::error::{Error, Result};
use crate::group::{direct_product, trivial, Homomorphism};
use crate::gset::{same_gset, GSet, GSetRef};
use crate::twocat::{compose_onecells, sim_factorize, two_coproduct, two_pullback, OneCell};

/// A span to `left.dst()` from `right.dst()` with apex `left.src()`.
#[derive(Clone, Debug, PartialEq)]
pub struct Span {
    left: OneCell,
    right: OneCell,
}

impl Span {
    pub fn new(left: OneCell, right: OneCell) -> Result<Span> {
        if !same_gset(left.src(), right.src()) {
            return Err(Error::CellMismatch("span legs start at different apexes".into()));
        }
        Ok(Span { left, right })
    }

    pub(crate) fn new_unchecked(left: OneCell, right: OneCell) -> Span {
        Span { left, right }
    }

    /// The empty span, the zero morphism Y → X.
    pub fn zero(target: &GSetRef, source: &GSetRef) -> Span {
        let apex = Arc::new(GSet::empty(&trivial()));
        Span {
            left: OneCell::new_unchecked(apex.clone(), target.clone(), Vec::new(), Vec::new()),
            right: OneCell::new_unchecked(apex, source.clone(), Vec::new(), Vec::new()),
        }
    }

    pub fn identity(x: &GSetRef) -> Span {
        let id = OneCell::identity(x);
        Span { left: id.clone(), right: id }
    }

    /// R_a = [X ⇐ X ⇒ Y] for a: X → Y.
    pub fn r_span(a: &OneCell) -> Span {
        Span { left: OneCell::identity(a.src()), right: a.clone() }
    }

    /// T_a = [Y ⇐ X ⇒ X] for a: X → Y.
    pub fn t_span(a: &OneCell) -> Span {
        Span { left: a.clone(), right: OneCell::identity(a.src()) }
    }

    pub fn apex(&self) -> &GSetRef {
        self.left.src()
    }

    pub fn left(&self) -> &OneCell {
        &self.left
    }

    pub fn right(&self) -> &OneCell {
        &self.right
    }

    pub fn target(&self) -> &GSetRef {
        self.left.dst()
    }

    pub fn source(&self) -> &GSetRef {
        self.right.dst()
    }
}

pub fn r_of(a: &OneCell) -> Result<VirtualSpan> {
    VirtualSpan::of_span(&Span::r_span(a))
}

pub fn t_of(a: &OneCell) -> Result<VirtualSpan> {
    VirtualSpan::of_span(&Span::t_span(a))
}

/// T ∘ S: pull back T's right leg against S's left leg; the apex is over
/// L_T × L_S.
pub fn span_compose(t: &Span, s: &Span) -> Result<Span> {
    if !same_gset(t.source(), s.target()) {
        return Err(Error::BoundaryMismatch("source of the outer span differs from target of the inner".into()));
    }
    let pb = two_pullback(&t.right, &s.left)?;
    Ok(Span { left: compose_onecells(&t.left, &pb.wp_x)?, right: compose_onecells(&s.right, &pb.wp_y)? })
}

/// S + T on the 2-coproduct of the apexes.
pub fn span_sum(s: &Span, t: &Span) -> Result<Span> {
    if !same_gset(s.target(), t.target()) || !same_gset(s.source(), t.source()) {
        return Err(Error::BoundaryMismatch("summands have different boundaries".into()));
    }
    let cp = two_coproduct(s.apex(), t.apex())?;
    let leg = |a: &OneCell, b: &OneCell| -> Result<OneCell> {
        let l = OneCell::copair(&compose_onecells(a, &cp.left.quasi)?, &compose_onecells(b, &cp.right.quasi)?)?;
        Ok(OneCell::new_unchecked(cp.set.clone(), l.dst().clone(), l.alpha().to_vec(), l.theta_flat().to_vec()))
    };
    Ok(Span { left: leg(&s.left, &t.left)?, right: leg(&s.right, &t.right)? })
}

/// True iff both spans have the same multiset of classes.
pub fn spans_equivalent(s: &Span, t: &Span) -> Result<bool> {
    if !same_gset(s.target(), t.target()) || !same_gset(s.source(), t.source()) {
        return Err(Error::BoundaryMismatch("spans with different boundaries".into()));
    }
    VirtualSpan::of_span(s)?.equals(&VirtualSpan::of_span(t)?)
}

/// The G-H-biset (G×H×W)/∼ of a span to X//G from Y//H, computed as the
/// SIm of W//L → pt//(G×H), ℓ ↦ (θ_α(ℓ), θ_β(ℓ)).
pub fn range(s: &Span) -> Biset {
    let (g, h) = (s.target().group(), s.source().group());
    let p = direct_product(g, h);
    let w = s.apex();
    let (nl, nh) = (w.group().order(), h.order());
    let mut theta = Vec::with_capacity(w.size() * nl);
    for x in 0..w.size() {
        theta.extend((0..nl).map(|l| s.left.theta(x, l) * nh + s.right.theta(x, l)));
    }
    let pt = Arc::new(GSet::point(&p));
    let gamma = OneCell::new_unchecked(w.clone(), pt, vec![0; w.size()], theta);
    Biset::new_unchecked(g.clone(), h.clone(), sim_factorize(&gamma).sim)
}

/// S_U = (pt//G ⇐ U//(G×H) ⇒ pt//H).
pub fn span_of_biset(u: &Biset) -> Span {
    let (g, h) = (u.left_group(), u.right_group());
    let p = u.carrier().group();
    let nh = h.order();
    let pr_g = Homomorphism::new_unchecked(p.clone(), g.clone(), p.elements().map(|q| q / nh).collect());
    let pr_h = Homomorphism::new_unchecked(p.clone(), h.clone(), p.elements().map(|q| q % nh).collect());
    let n = u.size();
    let leg = |f: &Homomorphism, to: &crate::group::GroupRef| {
        let theta = (0..n).flat_map(|_| f.image().iter().copied()).collect();
        OneCell::new_unchecked(u.carrier().clone(), Arc::new(GSet::point(to)), vec![0; n], theta)
    };
    Span { left: leg(&pr_g, g), right: leg(&pr_h, h) }
}
