//! Biset functors, Mackey functors on the span category, and the
//! translations between them: Ψ(B) = F_B by Γ-blocks, Φ(F) = B_F by spans
//! of bisets.

mod action;

use std::sync::Arc;

pub use action::{
    is_deflative, mackey_check, Deflativity, MatrixAction, ObigFunctor, SpanAction, DEFAULT_PROBE_ORDER,
};

use crate::biset::{biset_compose, Biset};
use crate::error::{Error, Result};
use crate::group::{direct_product, subgroup_conjugacy_classes, GroupRef, Subgroup};
use crate::gset::{coset_gset, decompose, gset_coproduct, GSet, GSetRef};
use crate::scalar::{Matrix, Scalar};
use crate::span::{canonicalize, span_compose, span_of_biset, Span, VirtualSpan};
use crate::twocat::OneCell;

/// An additive functor on bisets, given extensionally.
pub trait BisetFunctor<T: Scalar = i64> {
    fn dim(&self, g: &GroupRef) -> Result<usize>;
    /// B(U): B(G) → B(H) for an H-G-biset U, as a dim(H) × dim(G) matrix.
    fn matrix(&self, u: &Biset) -> Result<Matrix<T>>;
    fn basis_labels(&self, g: &GroupRef) -> Result<Vec<String>> {
        Ok((0..self.dim(g)?).map(|i| format!("e{i}")).collect())
    }
}

/// The Burnside functor: B(G) = Ω(G) on transitive G-sets [G/K], K up to
/// conjugacy, and B(U)[G/K] = [U ×_G G/K].
#[derive(Clone, Copy, Debug, Default)]
pub struct BurnsideFunctor;

impl<T: Scalar> BisetFunctor<T> for BurnsideFunctor {
    fn dim(&self, g: &GroupRef) -> Result<usize> {
        Ok(subgroup_conjugacy_classes(g)?.len())
    }

    fn matrix(&self, u: &Biset) -> Result<Matrix<T>> {
        let (h, g) = (u.left_group(), u.right_group());
        let cols = subgroup_conjugacy_classes(g)?;
        let rows = BisetFunctor::<T>::dim(self, h)?;
        let mut m = Matrix::zeros(rows, cols.len());
        for (k, sub) in cols.iter().enumerate() {
            let x = Biset::from_left_set(&coset_gset(g, sub));
            let image = decompose(&biset_compose(u, &x)?.as_left_set()?)?;
            for (r, &c) in image.coeffs().iter().enumerate() {
                m.set(r, k, T::from_int(c));
            }
        }
        Ok(m)
    }

    fn basis_labels(&self, g: &GroupRef) -> Result<Vec<String>> {
        Ok(subgroup_conjugacy_classes(g)?.iter().map(|k| format!("[G/K] |K|={} K={:?}", k.order(), k.elements())).collect())
    }
}

/// The functor with all values 0.
#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroFunctor;

impl<T: Scalar> BisetFunctor<T> for ZeroFunctor {
    fn dim(&self, _: &GroupRef) -> Result<usize> {
        Ok(0)
    }

    fn matrix(&self, _: &Biset) -> Result<Matrix<T>> {
        Ok(Matrix::zeros(0, 0))
    }
}

/// Which point of each orbit serves as its representative x_i.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RepChoice {
    #[default]
    Least,
    Greatest,
}

/// Orbit representatives, orbits ordered by least element.
pub fn orbit_reps(x: &GSet, choice: RepChoice) -> Vec<usize> {
    x.orbits()
        .into_iter()
        .map(|o| match choice {
            RepChoice::Least => o[0],
            RepChoice::Greatest => *o.last().expect("orbits are nonempty"),
        })
        .collect()
}

/// η_i: pt//G_{x_i} → X//G, the point x_i with the inclusion of its
/// stabilizer (renumbered as a group) as acting part.
pub fn eta_cells(x: &GSetRef, choice: RepChoice) -> Result<Vec<OneCell>> {
    orbit_reps(x, choice)
        .into_iter()
        .map(|r| {
            let (k, incl) = x.stabilizer(r)?.to_group();
            OneCell::from_flat(Arc::new(GSet::point(&k)), x.clone(), vec![r], incl.image().to_vec())
        })
        .collect()
}

/// Stabilizer groups G_{x_i} in orbit order.
pub fn stabilizer_groups(x: &GSet, choice: RepChoice) -> Result<Vec<GroupRef>> {
    orbit_reps(x, choice).into_iter().map(|r| Ok(x.stabilizer(r)?.to_group().0)).collect()
}

/// Γ_{ji} = R_{η_j} ∘ S ∘ T_{η_i}, a span to pt//H_{y_j} from pt//G_{x_i},
/// for S to Y//H from X//G.
pub fn gamma_span(s: &Span, i: usize, j: usize, choice: RepChoice) -> Result<Span> {
    let ex = eta_cells(s.source(), choice)?;
    let ey = eta_cells(s.target(), choice)?;
    let ei = ex.get(i).ok_or(Error::IndexOutOfRange { index: i, size: ex.len() })?;
    let ej = ey.get(j).ok_or(Error::IndexOutOfRange { index: j, size: ey.len() })?;
    span_compose(&Span::r_span(ej), &span_compose(s, &Span::t_span(ei))?)
}

/// Γ_{ji} at class level.
pub fn gamma(s: &Span, i: usize, j: usize, choice: RepChoice) -> Result<VirtualSpan> {
    VirtualSpan::of_span(&gamma_span(s, i, j, choice)?)
}

/// A functor on the linearized span category, evaluated as matrices.
pub trait SpanFunctor<T: Scalar = i64> {
    fn dim(&self, x: &GSetRef) -> Result<usize>;
    /// F([S]) for S a morphism source → target.
    fn eval_span(&self, s: &Span) -> Result<Matrix<T>>;
    fn eval(&self, v: &VirtualSpan) -> Result<Matrix<T>> {
        let mut out = Matrix::zeros(self.dim(v.target())?, self.dim(v.source())?);
        for (c, k) in v.terms() {
            let m = self.eval_span(&c.realize(v.target(), v.source()))?;
            out = out.add(&m.scale(&T::from_int(*k)))?;
        }
        Ok(out)
    }
}

/// Ψ(B) = F_B: F_B(X//G) = ⊕_i B(G_{x_i}) and F_B([S]) has blocks
/// m_{ji} = B(Rg(Γ_{ji})).
#[derive(Clone, Debug)]
pub struct Psi<B> {
    pub functor: B,
    pub reps: RepChoice,
}

impl<B> Psi<B> {
    pub fn new(functor: B) -> Psi<B> {
        Psi { functor, reps: RepChoice::Least }
    }

    pub fn with_reps(functor: B, reps: RepChoice) -> Psi<B> {
        Psi { functor, reps }
    }

    /// Block sizes dim B(G_{x_i}).
    pub fn blocks<T: Scalar>(&self, x: &GSet) -> Result<Vec<usize>>
    where
        B: BisetFunctor<T>,
    {
        stabilizer_groups(x, self.reps)?.iter().map(|g| self.functor.dim(g)).collect()
    }
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut out = vec![0];
    for s in sizes {
        out.push(out.last().expect("nonempty") + s);
    }
    out
}

impl<T: Scalar, B: BisetFunctor<T>> SpanFunctor<T> for Psi<B> {
    fn dim(&self, x: &GSetRef) -> Result<usize> {
        Ok(self.blocks(x)?.iter().sum())
    }

    /// Γ_{ji} is composed class by class, each class first made faithful:
    /// the range only sees the images of the acting parts, and this keeps
    /// apex groups inside |H_{y_j}|·|G_{x_i}|.
    fn eval_span(&self, s: &Span) -> Result<Matrix<T>> {
        let (x, y) = (s.source(), s.target());
        let (bx, by) = (self.blocks(x)?, self.blocks(y)?);
        let (ox, oy) = (offsets(&bx), offsets(&by));
        let ex = eta_cells(x, self.reps)?;
        let ey = eta_cells(y, self.reps)?;
        let faithful = |s: &Span| -> Result<Vec<Span>> {
            let (t, u) = (s.target(), s.source());
            canonicalize(s).iter().map(|c| Ok(c.faithful(t, u)?.realize(t, u))).collect()
        };
        let classes = faithful(s)?;
        let mut out = Matrix::zeros(oy[by.len()], ox[bx.len()]);
        for (i, ei) in ex.iter().enumerate() {
            let t = Span::t_span(ei);
            let mut right = Vec::new();
            for c in &classes {
                right.extend(faithful(&span_compose(c, &t)?)?);
            }
            for (j, ej) in ey.iter().enumerate() {
                let p2 = direct_product(ej.src_group(), ei.src_group());
                let mut m = Matrix::zeros(by[j], bx[i]);
                for c in &right {
                    m = m.add(&self.functor.matrix(&restricted_range(ej, c, &p2)?)?)?;
                }
                out.put_block(oy[j], ox[i], &m);
            }
        }
        Ok(out)
    }
}

/// Rg(R_η ∘ C) for η: pt//K → Y//M and a point span C = (Y ⇐λ pt//L ⇒μ
/// pt//G′), without forming K × L: the orbits of K × L on
/// {m ∈ M : m·λ(pt) = η(pt)} under (a, l)·m = θ_η(a)·m·θ_λ(l)⁻¹, each giving
/// (K × G′)/{(a, μ(l)) : (a, l) fixes m}. `p2` is K × G′.
fn restricted_range(eta: &OneCell, c: &Span, p2: &GroupRef) -> Result<Biset> {
    let y = eta.dst();
    let mg = y.group();
    let (xj, x) = (eta.alpha()[0], c.left().alpha()[0]);
    let (k, l, gp) = (eta.src_group(), c.apex().group(), c.source().group());
    let th_eta: Vec<usize> = k.elements().map(|a| eta.theta(0, a)).collect();
    let th_inv: Vec<usize> = l.elements().map(|b| mg.inv(c.left().theta(0, b))).collect();
    let mu: Vec<usize> = l.elements().map(|b| c.right().theta(0, b)).collect();
    let ng = gp.order();
    let mut seen = vec![false; mg.order()];
    let mut carrier = GSet::empty(p2);
    for m0 in mg.elements() {
        if seen[m0] || y.act(m0, x) != xj {
            continue;
        }
        let mut stab = Vec::new();
        for (a, &ta) in th_eta.iter().enumerate() {
            let am = mg.mul(ta, m0);
            for (&tb, &mb) in th_inv.iter().zip(&mu) {
                let m1 = mg.mul(am, tb);
                seen[m1] = true;
                if m1 == m0 {
                    stab.push(a * ng + mb);
                }
            }
        }
        stab.sort_unstable();
        stab.dedup();
        carrier = gset_coproduct(&carrier, &coset_gset(p2, &Subgroup::new(p2.clone(), stab)?))?;
    }
    Biset::new(k.clone(), gp.clone(), Arc::new(carrier))
}

/// Φ(F) = B_F: B_F(G) = F(pt//G) and B_F(U) = F([S_U]).
#[derive(Clone, Debug)]
pub struct Phi<F> {
    pub functor: F,
}

impl<F> Phi<F> {
    pub fn new(functor: F) -> Phi<F> {
        Phi { functor }
    }
}

impl<T: Scalar, F: SpanFunctor<T>> BisetFunctor<T> for Phi<F> {
    fn dim(&self, g: &GroupRef) -> Result<usize> {
        self.functor.dim(&Arc::new(GSet::point(g)))
    }

    fn matrix(&self, u: &Biset) -> Result<Matrix<T>> {
        self.functor.eval_span(&span_of_biset(u))
    }
}

/// τ_X = (F(R_{η_1}); …; F(R_{η_s})): F(X//G) → ⊕_i F(pt//G_{x_i}).
pub fn tau<T: Scalar, F: SpanFunctor<T>>(f: &F, x: &GSetRef, choice: RepChoice) -> Result<Matrix<T>> {
    let parts: Vec<Matrix<T>> =
        eta_cells(x, choice)?.iter().map(|e| f.eval_span(&Span::r_span(e))).collect::<Result<_>>()?;
    Matrix::vstack(&parts, f.dim(x)?)
}

/// (F_φ)_X = ⊕_i φ_{G_{x_i}} for a family φ_G: B(G) → B′(G).
pub fn psi_natural<T: Scalar>(
    x: &GSet,
    choice: RepChoice,
    phi: impl FnMut(&GroupRef) -> Result<Matrix<T>>,
) -> Result<Matrix<T>> {
    let parts: Vec<Matrix<T>> = stabilizer_groups(x, choice)?.iter().map(phi).collect::<Result<_>>()?;
    let (r, c) = parts.iter().fold((0, 0), |(r, c), m| (r + m.rows(), c + m.cols()));
    let mut out = Matrix::zeros(r, c);
    let (mut r0, mut c0) = (0, 0);
    for m in &parts {
        out.put_block(r0, c0, m);
        r0 += m.rows();
        c0 += m.cols();
    }
    Ok(out)
}
