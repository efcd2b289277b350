//! The 2-category of finite sets with variable finite group actions:
//! 1-cells (α, θ), 2-cells ε, their compositions and the standard
//! constructions on them.

mod induce;
mod pullback;
mod sim;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{same_group, GroupRef, Homomorphism};
use crate::gset::{same_gset, EquivariantMap, GSet, GSetRef};

pub use induce::{induce, two_coproduct, Induced, TwoCoproduct};
pub use pullback::{two_pullback, PullbackResult};
pub use sim::{
    is_equivalence, is_stab_surjective, is_stab_surjective_brute, quasi_inverse, sim_factorize, SimFactorization,
    StabSurjectivity,
};

/// A 1-cell X//G → Y//H: a map α: X → Y with acting part θ_x: G → H,
/// subject to α(gx) = θ_x(g)α(x) and θ_x(gg′) = θ_{g′x}(g)θ_x(g′).
#[derive(Clone, Debug)]
pub struct OneCell {
    src: GSetRef,
    dst: GSetRef,
    alpha: Vec<usize>,
    /// theta[x * |G| + g] = θ_x(g)
    theta: Vec<usize>,
}

impl PartialEq for OneCell {
    fn eq(&self, other: &Self) -> bool {
        same_gset(&self.src, &other.src)
            && same_gset(&self.dst, &other.dst)
            && self.alpha == other.alpha
            && self.theta == other.theta
    }
}

impl Eq for OneCell {}

/// First failing condition of a 1-cell or 2-cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CellViolation {
    Shape(String),
    /// α(gx) ≠ θ_x(g)α(x)
    Equivariance { x: usize, g: usize },
    /// θ_x(gg′) ≠ θ_{g′x}(g)θ_x(g′)
    Cocycle { x: usize, g: usize, g2: usize },
    /// α′(x) ≠ ε_x α(x)
    TwoCellPoint { x: usize },
    /// ε_{gx} θ_x(g) ε_x⁻¹ ≠ θ′_x(g)
    TwoCellConjugation { x: usize, g: usize },
}

impl fmt::Display for CellViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellViolation::Shape(s) => write!(f, "malformed cell: {s}"),
            CellViolation::Equivariance { x, g } => write!(f, "condition (i) fails at x={x}, g={g}"),
            CellViolation::Cocycle { x, g, g2 } => write!(f, "condition (ii) fails at x={x}, g={g}, g'={g2}"),
            CellViolation::TwoCellPoint { x } => write!(f, "2-cell condition (i) fails at x={x}"),
            CellViolation::TwoCellConjugation { x, g } => write!(f, "2-cell condition (ii) fails at x={x}, g={g}"),
        }
    }
}

pub fn validate_onecell(c: &OneCell) -> std::result::Result<(), CellViolation> {
    let (g, h) = (c.src.group(), c.dst.group());
    let n = g.order();
    if c.alpha.len() != c.src.size() || c.theta.len() != c.src.size() * n {
        return Err(CellViolation::Shape("table sizes do not match the source".into()));
    }
    if c.alpha.iter().any(|&y| y >= c.dst.size()) || c.theta.iter().any(|&v| v >= h.order()) {
        return Err(CellViolation::Shape("entry out of range".into()));
    }
    for x in 0..c.src.size() {
        for g2 in 0..n {
            let y = c.src.act(g2, x);
            let t = c.theta(x, g2);
            for g1 in 0..n {
                if c.theta(x, g.mul(g1, g2)) != h.mul(c.theta(y, g1), t) {
                    return Err(CellViolation::Cocycle { x, g: g1, g2 });
                }
            }
        }
    }
    for x in 0..c.src.size() {
        for gg in 0..n {
            if c.alpha[c.src.act(gg, x)] != c.dst.act(c.theta(x, gg), c.alpha[x]) {
                return Err(CellViolation::Equivariance { x, g: gg });
            }
        }
    }
    Ok(())
}

fn invalid(v: CellViolation) -> Error {
    Error::InvalidCell(v.to_string())
}

impl OneCell {
    /// Validate a 1-cell given θ as rows indexed by points.
    pub fn new(src: GSetRef, dst: GSetRef, alpha: Vec<usize>, theta: &[Vec<usize>]) -> Result<OneCell> {
        let n = src.group().order();
        if theta.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidCell(format!("theta rows must have length {n}")));
        }
        Self::from_flat(src, dst, alpha, theta.concat())
    }

    pub fn from_flat(src: GSetRef, dst: GSetRef, alpha: Vec<usize>, theta: Vec<usize>) -> Result<OneCell> {
        let c = OneCell { src, dst, alpha, theta };
        validate_onecell(&c).map_err(invalid)?;
        Ok(c)
    }

    pub(crate) fn new_unchecked(src: GSetRef, dst: GSetRef, alpha: Vec<usize>, theta: Vec<usize>) -> OneCell {
        let c = OneCell { src, dst, alpha, theta };
        debug_assert!(c.theta.len() * c.src.group().order() > 1 << 16 || validate_onecell(&c).is_ok());
        c
    }

    pub fn identity(x: &GSetRef) -> OneCell {
        let n = x.group().order();
        let theta = (0..x.size()).flat_map(|_| 0..n).collect();
        OneCell { src: x.clone(), dst: x.clone(), alpha: (0..x.size()).collect(), theta }
    }

    /// pt//G → pt//H with θ ≡ f.
    pub fn point(f: &Homomorphism) -> OneCell {
        let src = Arc::new(GSet::point(f.dom()));
        let dst = Arc::new(GSet::point(f.cod()));
        OneCell { src, dst, alpha: vec![0], theta: f.image().to_vec() }
    }

    /// A G-map regarded as a 1-cell with θ_x = id_G.
    pub fn equivariant(f: &EquivariantMap) -> OneCell {
        let n = f.src().group().order();
        let theta = (0..f.src().size()).flat_map(|_| 0..n).collect();
        OneCell { src: f.src().clone(), dst: f.dst().clone(), alpha: f.map().to_vec(), theta }
    }

    /// A 1-cell whose acting part is the same homomorphism at every point.
    pub fn with_hom(src: GSetRef, dst: GSetRef, alpha: Vec<usize>, f: &Homomorphism) -> Result<OneCell> {
        if !same_group(f.dom(), src.group()) || !same_group(f.cod(), dst.group()) {
            return Err(Error::CellMismatch("homomorphism does not match the 0-cells".into()));
        }
        let theta = (0..src.size()).flat_map(|_| f.image().iter().copied()).collect();
        Self::from_flat(src, dst, alpha, theta)
    }

    pub fn src(&self) -> &GSetRef {
        &self.src
    }

    pub fn dst(&self) -> &GSetRef {
        &self.dst
    }

    pub fn src_group(&self) -> &GroupRef {
        self.src.group()
    }

    pub fn dst_group(&self) -> &GroupRef {
        self.dst.group()
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    #[inline]
    pub fn theta(&self, x: usize, g: usize) -> usize {
        self.theta[x * self.src.group().order() + g]
    }

    pub fn theta_row(&self, x: usize) -> &[usize] {
        let n = self.src.group().order();
        &self.theta[x * n..(x + 1) * n]
    }

    pub fn theta_rows(&self) -> Vec<Vec<usize>> {
        (0..self.src.size()).map(|x| self.theta_row(x).to_vec()).collect()
    }

    pub fn theta_flat(&self) -> &[usize] {
        &self.theta
    }

    /// θ_x as a homomorphism when x is fixed by all of G (for instance on pt//G).
    pub fn theta_hom(&self, x: usize) -> Result<Homomorphism> {
        Homomorphism::new(self.src_group().clone(), self.dst_group().clone(), self.theta_row(x).to_vec())
    }

    /// Same group on both sides and θ_x(g) = g throughout.
    pub fn is_equivariant(&self) -> bool {
        let n = self.src_group().order();
        same_group(self.src_group(), self.dst_group()) && self.theta.iter().enumerate().all(|(i, &v)| v == i % n)
    }

    /// The union of two 1-cells on the coproduct of their sources.
    pub fn copair(a: &OneCell, b: &OneCell) -> Result<OneCell> {
        if !same_gset(&a.dst, &b.dst) {
            return Err(Error::CellMismatch("copair of cells with different targets".into()));
        }
        let src = Arc::new(crate::gset::gset_coproduct(&a.src, &b.src)?);
        let mut alpha = a.alpha.clone();
        alpha.extend_from_slice(&b.alpha);
        let mut theta = a.theta.clone();
        theta.extend_from_slice(&b.theta);
        Ok(OneCell::new_unchecked(src, a.dst.clone(), alpha, theta))
    }
}

/// b ∘ a, with (τ∘θ)_x = τ_{α(x)} ∘ θ_x.
pub fn compose_onecells(b: &OneCell, a: &OneCell) -> Result<OneCell> {
    if !same_gset(&a.dst, &b.src) {
        return Err(Error::CellMismatch("target of the first cell is not the source of the second".into()));
    }
    let n = a.src.group().order();
    let alpha = a.alpha.iter().map(|&y| b.alpha[y]).collect();
    let mut theta = Vec::with_capacity(a.theta.len());
    for x in 0..a.src.size() {
        let y = a.alpha[x];
        theta.extend((0..n).map(|g| b.theta(y, a.theta(x, g))));
    }
    Ok(OneCell::new_unchecked(a.src.clone(), b.dst.clone(), alpha, theta))
}

/// A 2-cell ε: from ⇒ to between parallel 1-cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCell {
    from: OneCell,
    to: OneCell,
    eps: Vec<usize>,
}

pub fn validate_twocell(e: &TwoCell) -> std::result::Result<(), CellViolation> {
    let (a, b) = (&e.from, &e.to);
    if !same_gset(&a.src, &b.src) || !same_gset(&a.dst, &b.dst) {
        return Err(CellViolation::Shape("1-cells are not parallel".into()));
    }
    let h = a.dst.group();
    if e.eps.len() != a.src.size() || e.eps.iter().any(|&v| v >= h.order()) {
        return Err(CellViolation::Shape("eps has the wrong shape".into()));
    }
    for x in 0..a.src.size() {
        if b.alpha[x] != a.dst.act(e.eps[x], a.alpha[x]) {
            return Err(CellViolation::TwoCellPoint { x });
        }
    }
    let inv_eps: Vec<usize> = e.eps.iter().map(|&v| h.inv(v)).collect();
    for x in 0..a.src.size() {
        for g in a.src.group().elements() {
            let lhs = h.mul(h.mul(e.eps[a.src.act(g, x)], a.theta(x, g)), inv_eps[x]);
            if lhs != b.theta(x, g) {
                return Err(CellViolation::TwoCellConjugation { x, g });
            }
        }
    }
    Ok(())
}

impl TwoCell {
    pub fn new(from: OneCell, to: OneCell, eps: Vec<usize>) -> Result<TwoCell> {
        let e = TwoCell { from, to, eps };
        validate_twocell(&e).map_err(invalid)?;
        Ok(e)
    }

    pub(crate) fn new_unchecked(from: OneCell, to: OneCell, eps: Vec<usize>) -> TwoCell {
        let e = TwoCell { from, to, eps };
        debug_assert!(e.eps.len() * e.from.src.group().order() > 1 << 16 || validate_twocell(&e).is_ok());
        e
    }

    pub fn identity(a: &OneCell) -> TwoCell {
        TwoCell { from: a.clone(), to: a.clone(), eps: vec![0; a.src.size()] }
    }

    /// The 1-cell ε·a together with ε, for an arbitrary family ε: X → H.
    pub fn twist(a: &OneCell, eps: Vec<usize>) -> Result<TwoCell> {
        let h = a.dst.group();
        if eps.len() != a.src.size() || eps.iter().any(|&v| v >= h.order()) {
            return Err(Error::InvalidCell("eps has the wrong shape".into()));
        }
        let n = a.src.group().order();
        let alpha = (0..a.src.size()).map(|x| a.dst.act(eps[x], a.alpha[x])).collect();
        let mut theta = Vec::with_capacity(a.theta.len());
        for x in 0..a.src.size() {
            let ei = h.inv(eps[x]);
            theta.extend((0..n).map(|g| h.mul(h.mul(eps[a.src.act(g, x)], a.theta(x, g)), ei)));
        }
        let to = OneCell::new_unchecked(a.src.clone(), a.dst.clone(), alpha, theta);
        Ok(TwoCell::new_unchecked(a.clone(), to, eps))
    }

    pub fn from(&self) -> &OneCell {
        &self.from
    }

    pub fn to(&self) -> &OneCell {
        &self.to
    }

    pub fn eps(&self) -> &[usize] {
        &self.eps
    }

    pub fn inverse(&self) -> TwoCell {
        let h = self.from.dst.group();
        let eps = self.eps.iter().map(|&v| h.inv(v)).collect();
        TwoCell::new_unchecked(self.to.clone(), self.from.clone(), eps)
    }
}

/// (ε′·ε)_x = ε′_x ε_x.
pub fn vcompose(e2: &TwoCell, e1: &TwoCell) -> Result<TwoCell> {
    if e1.to != e2.from {
        return Err(Error::CellMismatch("vertical composition of non-adjacent 2-cells".into()));
    }
    let h = e1.from.dst.group();
    let eps = e2.eps.iter().zip(&e1.eps).map(|(&a, &b)| h.mul(a, b)).collect();
    Ok(TwoCell::new_unchecked(e1.from.clone(), e2.to.clone(), eps))
}

/// b∘ε: b∘a ⇒ b∘a′ with (b∘ε)_x = τ_{α(x)}(ε_x).
pub fn hcompose_left(b: &OneCell, e: &TwoCell) -> Result<TwoCell> {
    let from = compose_onecells(b, &e.from)?;
    let to = compose_onecells(b, &e.to)?;
    let eps = (0..e.eps.len()).map(|x| b.theta(e.from.alpha[x], e.eps[x])).collect();
    Ok(TwoCell::new_unchecked(from, to, eps))
}

/// δ∘a: b∘a ⇒ b′∘a with (δ∘a)_x = δ_{α(x)}.
pub fn hcompose_right(d: &TwoCell, a: &OneCell) -> Result<TwoCell> {
    let from = compose_onecells(&d.from, a)?;
    let to = compose_onecells(&d.to, a)?;
    let eps = a.alpha.iter().map(|&y| d.eps[y]).collect();
    Ok(TwoCell::new_unchecked(from, to, eps))
}

/// δ∘ε: b∘a ⇒ b′∘a′ with (δ∘ε)_x = δ_{α′(x)} τ_{α(x)}(ε_x).
pub fn hcompose(d: &TwoCell, e: &TwoCell) -> Result<TwoCell> {
    let from = compose_onecells(&d.from, &e.from)?;
    let to = compose_onecells(&d.to, &e.to)?;
    let k = d.from.dst.group();
    let eps = (0..e.eps.len())
        .map(|x| k.mul(d.eps[e.to.alpha[x]], d.from.theta(e.from.alpha[x], e.eps[x])))
        .collect();
    Ok(TwoCell::new_unchecked(from, to, eps))
}

/// A 2-cell a ⇒ b if one exists. Orbit by orbit: choose ε at the
/// representative, propagate along the orbit, keep the first that validates.
pub fn find_twocell(a: &OneCell, b: &OneCell) -> Result<Option<TwoCell>> {
    if !same_gset(&a.src, &b.src) || !same_gset(&a.dst, &b.dst) {
        return Err(Error::CellMismatch("1-cells are not parallel".into()));
    }
    let (x, y) = (&a.src, &a.dst);
    let (g, h) = (x.group(), y.group());
    let mut eps = vec![0; x.size()];
    for orbit in x.orbits() {
        let r = orbit[0];
        let transport: Vec<(usize, usize)> =
            orbit.iter().map(|&p| (p, x.transporter(r, p).expect("same orbit"))).collect();
        let found = h.elements().find(|&e| {
            if y.act(e, a.alpha[r]) != b.alpha[r] {
                return false;
            }
            for &(p, t) in &transport {
                eps[p] = h.mul(h.mul(b.theta(r, t), e), h.inv(a.theta(r, t)));
            }
            orbit.iter().all(|&p| {
                y.act(eps[p], a.alpha[p]) == b.alpha[p]
                    && g.elements().all(|gg| {
                        h.mul(h.mul(eps[x.act(gg, p)], a.theta(p, gg)), h.inv(eps[p])) == b.theta(p, gg)
                    })
            })
        });
        if found.is_none() {
            return Ok(None);
        }
    }
    Ok(Some(TwoCell::new_unchecked(a.clone(), b.clone(), eps)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, enumerate_homomorphisms, quotient, symmetric, Subgroup};
    use crate::gset::coset_gset;

    #[test]
    fn identity_and_point_cells_validate() {
        let s3 = symmetric(3).unwrap();
        let x = Arc::new(coset_gset(&s3, &Subgroup::generated(&s3, &[1])));
        assert_eq!(validate_onecell(&OneCell::identity(&x)), Ok(()));
        let c2 = cyclic(2).unwrap();
        for f in enumerate_homomorphisms(&s3, &c2, None).unwrap() {
            assert_eq!(validate_onecell(&OneCell::point(&f)), Ok(()));
        }
    }

    #[test]
    fn theta_at_identity_must_be_identity() {
        let c2 = cyclic(2).unwrap();
        let pt = Arc::new(GSet::point(&c2));
        let bad = OneCell { src: pt.clone(), dst: pt, alpha: vec![0], theta: vec![1, 1] };
        assert!(matches!(validate_onecell(&bad), Err(CellViolation::Cocycle { .. })));
    }

    #[test]
    fn composition_of_point_cells_is_functorial() {
        let c4 = cyclic(4).unwrap();
        let (c2, p1) = quotient(&c4, &Subgroup::generated(&c4, &[2])).unwrap();
        let (c1, p2) = quotient(&c2, &Subgroup::whole(&c2)).unwrap();
        let lhs = compose_onecells(&OneCell::point(&p2), &OneCell::point(&p1)).unwrap();
        assert_eq!(validate_onecell(&lhs), Ok(()));
        assert_eq!(lhs.theta_row(0), p2.after(&p1).unwrap().image());
        assert_eq!(c1.order(), 1);
        let id = OneCell::identity(lhs.src());
        assert_eq!(compose_onecells(&lhs, &id).unwrap(), lhs);
    }

    #[test]
    fn twocells_invert_and_find() {
        let s3 = symmetric(3).unwrap();
        let x = Arc::new(coset_gset(&s3, &Subgroup::generated(&s3, &[1])));
        let a = OneCell::identity(&x);
        let e = TwoCell::twist(&a, vec![3, 0, 5]).unwrap();
        assert_eq!(validate_twocell(&e), Ok(()));
        let back = vcompose(&e.inverse(), &e).unwrap();
        assert_eq!(back, TwoCell::identity(&a));
        let found = find_twocell(&a, e.to()).unwrap().unwrap();
        assert_eq!(validate_twocell(&found), Ok(()));
        // no 2-cell between point cells with non-conjugate acting parts
        let c2 = cyclic(2).unwrap();
        let homs = enumerate_homomorphisms(&c2, &c2, None).unwrap();
        assert!(find_twocell(&OneCell::point(&homs[0]), &OneCell::point(&homs[1])).unwrap().is_none());
    }
}
