use std::sync::Arc;

use super::{canonicalize, PointSpanClass, Span, VirtualSpan};
use crate::error::{Error, Result};
use crate::group::{trivial, Subgroup};
use crate::gset::{same_gset, EquivariantMap, GSet, GSetRef, OverElement};
use crate::twocat::{compose_onecells, sim_factorize, two_pullback, OneCell};

pub const DEFAULT_OBIG_CAP: usize = 16;

/// An element of the bigger Burnside ring of X//G: a ℤ-combination of
/// classes of 1-cells pt//K → X//G, stored as virtual spans to X from pt//e.
#[derive(Clone, Debug)]
pub struct Obig {
    value: VirtualSpan,
    cap: usize,
}

fn point_e() -> GSetRef {
    Arc::new(GSet::point(&trivial()))
}

/// The apex-to-pt//e leg.
fn bang(apex: &GSetRef, e: &GSetRef) -> OneCell {
    let n = apex.size() * apex.group().order();
    OneCell::new_unchecked(apex.clone(), e.clone(), vec![0; apex.size()], vec![0; n])
}

impl Obig {
    pub fn zero(base: &GSetRef) -> Obig {
        Obig { value: VirtualSpan::zero(base, &point_e()), cap: DEFAULT_OBIG_CAP }
    }

    pub fn with_cap(mut self, cap: usize) -> Obig {
        self.cap = cap;
        self
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn base(&self) -> &GSetRef {
        self.value.target()
    }

    pub fn value(&self) -> &VirtualSpan {
        &self.value
    }

    /// Wrap a virtual span to X from pt//e.
    pub fn from_virtual(value: VirtualSpan, cap: usize) -> Result<Obig> {
        let e = value.source();
        if e.size() != 1 || e.group().order() != 1 {
            return Err(Error::BoundaryMismatch("bigger Burnside elements start at pt//e".into()));
        }
        Obig { value, cap }.checked()
    }

    /// The class of a 1-cell A//K → X//G.
    pub fn of_cell(a: &OneCell) -> Result<Obig> {
        let e = point_e();
        let value = VirtualSpan::of_span(&Span::new_unchecked(a.clone(), bang(a.src(), &e)))?;
        Obig { value, cap: DEFAULT_OBIG_CAP }.checked()
    }

    /// [X//G = X//G]
    pub fn unit(base: &GSetRef) -> Result<Obig> {
        Self::of_cell(&OneCell::identity(base))
    }

    fn checked(self) -> Result<Obig> {
        let m = self.value.max_group_order();
        if m > self.cap {
            return Err(Error::BudgetExceeded(format!("bigger Burnside class over a group of order {m} (cap {})", self.cap)));
        }
        Ok(self)
    }

    fn check(&self, other: &Obig) -> Result<()> {
        if same_gset(self.base(), other.base()) {
            Ok(())
        } else {
            Err(Error::BaseMismatch)
        }
    }

    pub fn add(&self, other: &Obig) -> Result<Obig> {
        self.check(other)?;
        Ok(Obig { value: self.value.add(&other.value)?, cap: self.cap.max(other.cap) })
    }

    pub fn scale(&self, c: i64) -> Obig {
        Obig { value: self.value.scale(c), cap: self.cap }
    }

    pub fn equals(&self, other: &Obig) -> Result<bool> {
        self.check(other)?;
        self.value.equals(&other.value)
    }

    /// Product by 2-fibered products over X//G.
    pub fn mul(&self, other: &Obig) -> Result<Obig> {
        self.check(other)?;
        let base = self.base();
        let e = self.value.source().clone();
        let mut out = VirtualSpan::zero(base, &e);
        for (a, ca) in self.value.terms() {
            let la = a.realize(base, &e).left().clone();
            for (b, cb) in other.value.terms() {
                let lb = b.realize(base, &e).left().clone();
                let pb = two_pullback(&la, &lb)?;
                let leg = compose_onecells(&la, &pb.wp_x)?;
                let s = Span::new_unchecked(leg, bang(&pb.apex, &e));
                for c in canonicalize(&s) {
                    out.add_term(c, ca * cb)?;
                }
            }
        }
        Obig { value: out, cap: self.cap.max(other.cap) }.checked()
    }

    /// The equivariant class [A → X] of each orbit.
    pub fn from_omega(w: &OverElement) -> Result<Obig> {
        let base = w.base();
        let e = point_e();
        let reps = base.orbit_reps();
        let mut out = VirtualSpan::zero(base, &e);
        for (cls, &c) in w.terms() {
            let xi = *reps.get(cls.orbit).ok_or(Error::IndexOutOfRange { index: cls.orbit, size: reps.len() })?;
            let k = Subgroup::new(base.group().clone(), cls.subgroup.clone())?;
            if !k.elements().iter().all(|&h| base.act(h, xi) == xi) {
                return Err(Error::NotSubgroup("class subgroup does not fix the orbit representative".into()));
            }
            let (kg, incl) = k.to_group();
            let n = kg.order();
            let pc = PointSpanClass::build(base, &e, kg, cls.orbit, 0, incl.image().to_vec(), vec![0; n]);
            out.add_term(pc, c)?;
        }
        Obig { value: out, cap: DEFAULT_OBIG_CAP }.checked()
    }

    /// Each class a ↦ [SIm a → X].
    pub fn to_omega(&self) -> Result<OverElement> {
        let base = self.base();
        let e = self.value.source();
        let mut out = OverElement::zero(base);
        for (a, c) in self.value.terms() {
            let f = sim_factorize(a.realize(base, e).left());
            let map = EquivariantMap::new(f.sim.clone(), base.clone(), f.tilde.alpha().to_vec())?;
            out = out.add(&OverElement::from_map(&map)?.scale(*c))?;
        }
        Ok(out)
    }
}
