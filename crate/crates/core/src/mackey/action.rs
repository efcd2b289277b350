use std::fmt::Debug;
use std::sync::Arc;

use super::SpanFunctor;
use crate::error::Result;
use crate::group::{catalog, enumerate_homomorphisms, normal_subgroups, quotient, trivial};
use crate::gset::{GSet, GSetRef};
use crate::span::{Obig, PointSpanClass, Span, VirtualSpan, DEFAULT_OBIG_CAP};
use crate::twocat::{two_pullback, OneCell};

/// A functor on spans known through its action on chosen vectors; used
/// where values are not finite-dimensional (the bigger Burnside functor).
pub trait SpanAction {
    type Vector: Clone + Debug;
    fn act(&self, s: &VirtualSpan, v: &Self::Vector) -> Result<Self::Vector>;
    fn act_span(&self, s: &Span, v: &Self::Vector) -> Result<Self::Vector> {
        self.act(&VirtualSpan::of_span(s)?, v)
    }
    fn act_span_all(&self, s: &Span, vs: &[Self::Vector]) -> Result<Vec<Self::Vector>> {
        vs.iter().map(|v| self.act_span(s, v)).collect()
    }
    /// Vectors spanning the part of F(X) that is checked.
    fn probes(&self, x: &GSetRef) -> Result<Vec<Self::Vector>>;
    fn same(&self, a: &Self::Vector, b: &Self::Vector) -> Result<bool>;
}

/// A matrix-valued functor acting on coordinate vectors; probes are the
/// unit vectors.
#[derive(Clone, Debug)]
pub struct MatrixAction<F>(pub F);

impl<F: SpanFunctor<i64>> SpanAction for MatrixAction<F> {
    type Vector = Vec<i64>;

    fn act(&self, s: &VirtualSpan, v: &Vec<i64>) -> Result<Vec<i64>> {
        self.0.eval(s)?.mul_vec(v)
    }

    fn act_span(&self, s: &Span, v: &Vec<i64>) -> Result<Vec<i64>> {
        self.0.eval_span(s)?.mul_vec(v)
    }

    fn act_span_all(&self, s: &Span, vs: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
        let m = self.0.eval_span(s)?;
        vs.iter().map(|v| m.mul_vec(v)).collect()
    }

    fn probes(&self, x: &GSetRef) -> Result<Vec<Vec<i64>>> {
        let n = self.0.dim(x)?;
        Ok((0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect())
    }

    fn same(&self, a: &Vec<i64>, b: &Vec<i64>) -> Result<bool> {
        Ok(a == b)
    }
}

pub const DEFAULT_PROBE_ORDER: usize = 4;

/// The bigger Burnside functor 𝓣(pt//e, −): X//G ↦ obig(X//G), spans act
/// by composition.
#[derive(Clone, Copy, Debug)]
pub struct ObigFunctor {
    pub cap: usize,
    /// Probe classes pt//K → X//G use K of order at most this.
    pub probe_order: usize,
}

impl Default for ObigFunctor {
    fn default() -> Self {
        ObigFunctor { cap: DEFAULT_OBIG_CAP, probe_order: DEFAULT_PROBE_ORDER }
    }
}

impl SpanAction for ObigFunctor {
    type Vector = Obig;

    fn act(&self, s: &VirtualSpan, v: &Obig) -> Result<Obig> {
        Obig::from_virtual(s.compose(v.value())?, self.cap)
    }

    /// Every class λ: K → G_{x_i} with K in the catalog up to `probe_order`.
    fn probes(&self, x: &GSetRef) -> Result<Vec<Obig>> {
        let e = Arc::new(GSet::point(&trivial()));
        let mut found: Vec<PointSpanClass> = Vec::new();
        for (i, r) in x.orbit_reps().into_iter().enumerate() {
            let (st, incl) = x.stabilizer(r)?.to_group();
            for k in catalog(self.probe_order) {
                for f in enumerate_homomorphisms(&k, &st, None)? {
                    let lambda = f.image().iter().map(|&y| incl.apply(y)).collect();
                    let c = PointSpanClass::new(x, &e, k.clone(), i, 0, lambda, vec![0; k.order()])?;
                    let mut fresh = true;
                    for d in &found {
                        if d.equivalent(&c, x, &e)? {
                            fresh = false;
                            break;
                        }
                    }
                    if fresh {
                        found.push(c);
                    }
                }
            }
        }
        found
            .into_iter()
            .map(|c| Obig::from_virtual(VirtualSpan::of_class(x, &e, c), self.cap))
            .collect()
    }

    fn same(&self, a: &Obig, b: &Obig) -> Result<bool> {
        a.equals(b)
    }
}

/// Outcome of the deflativity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Deflativity {
    Yes,
    /// The deflation span of G ↠ G/N moves probe number `probe`.
    Witness { group: String, normal: Vec<usize>, probe: usize },
}

impl Deflativity {
    pub fn holds(&self) -> bool {
        *self == Deflativity::Yes
    }
}

/// Checks [pt//(G/N) ⇐ pt//G ⇒ pt//(G/N)] acts as the identity for every
/// catalog group G with |G| ≤ order_bound and every N ⊴ G, N ≠ e.
pub fn is_deflative<A: SpanAction>(f: &A, order_bound: usize) -> Result<Deflativity> {
    for g in catalog(order_bound) {
        for n in normal_subgroups(&g)? {
            if n.order() == 1 {
                continue;
            }
            let (q, p) = quotient(&g, &n)?;
            let a = OneCell::point(&p);
            let sp = Span::new(a.clone(), a)?;
            let target: GSetRef = Arc::new(GSet::point(&q));
            let probes = f.probes(&target)?;
            for (idx, (v, w)) in probes.iter().zip(f.act_span_all(&sp, &probes)?).enumerate() {
                if !f.same(&w, v)? {
                    return Ok(Deflativity::Witness { group: g.label(), normal: n.elements().to_vec(), probe: idx });
                }
            }
        }
    }
    Ok(Deflativity::Yes)
}

/// The Mackey condition on the 2-fibered product of a: X → Z and b: Y → Z:
/// F(R_b)·F(T_a) = F(T_{℘_Y})·F(R_{℘_X}), compared on the probes of X.
pub fn mackey_check<A: SpanAction>(f: &A, a: &OneCell, b: &OneCell) -> Result<bool> {
    let pb = two_pullback(a, b)?;
    let (ta, rb) = (Span::t_span(a), Span::r_span(b));
    let (rx, ty) = (Span::r_span(&pb.wp_x), Span::t_span(&pb.wp_y));
    let probes = f.probes(a.src())?;
    let lhs = f.act_span_all(&rb, &f.act_span_all(&ta, &probes)?)?;
    let rhs = f.act_span_all(&ty, &f.act_span_all(&rx, &probes)?)?;
    for (l, r) in lhs.iter().zip(&rhs) {
        if !f.same(l, r)? {
            return Ok(false);
        }
    }
    Ok(true)
}

