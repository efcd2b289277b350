use std::collections::HashMap;
use std::sync::Arc;

use itertools::Itertools;

use super::{FiniteGroup, GroupRef, Subgroup};
use crate::error::{Error, Result};

pub enum StandardKind<'a> {
    Cyclic(usize),
    /// Dihedral group of order 2n.
    Dihedral(usize),
    /// Symmetric group on n ≤ 6 letters.
    Symmetric(usize),
    /// Dicyclic group of order 4n.
    Dicyclic(usize),
    DirectProduct(&'a GroupRef, &'a GroupRef),
    GeneratedSubgroupAsGroup(&'a GroupRef, &'a [usize]),
}

pub fn standard_group(kind: StandardKind<'_>) -> Result<GroupRef> {
    match kind {
        StandardKind::Cyclic(n) => cyclic(n),
        StandardKind::Dihedral(n) => dihedral(n),
        StandardKind::Symmetric(n) => symmetric(n),
        StandardKind::Dicyclic(n) => dicyclic(n),
        StandardKind::DirectProduct(h, g) => Ok(direct_product(h, g)),
        StandardKind::GeneratedSubgroupAsGroup(g, gens) => generated_subgroup_as_group(g, gens),
    }
}

pub fn trivial() -> GroupRef {
    Arc::new(FiniteGroup::from_valid_flat(1, vec![0]).with_name("C1"))
}

/// Element i is the i-th power of the generator 1.
pub fn cyclic(n: usize) -> Result<GroupRef> {
    if n == 0 {
        return Err(Error::ParamOutOfRange("cyclic group needs n >= 1".into()));
    }
    let mult = (0..n * n).map(|k| (k / n + k % n) % n).collect();
    let gens = if n == 1 { vec![] } else { vec![1] };
    Ok(Arc::new(FiniteGroup::from_valid_flat(n, mult).with_name(format!("C{n}")).set_generators(gens)))
}

/// Order 2n. Element c + n·t is r^c s^t with s r s = r⁻¹.
pub fn dihedral(n: usize) -> Result<GroupRef> {
    if n == 0 {
        return Err(Error::ParamOutOfRange("dihedral group needs n >= 1".into()));
    }
    let m = 2 * n;
    let mut mult = vec![0; m * m];
    for x in 0..m {
        let (a, i) = (x % n, x / n);
        for y in 0..m {
            let (b, j) = (y % n, y / n);
            let c = if i == 0 { (a + b) % n } else { (a + n - b) % n };
            mult[x * m + y] = c + n * ((i + j) % 2);
        }
    }
    Ok(Arc::new(FiniteGroup::from_valid_flat(m, mult).with_name(format!("D{m}"))))
}

/// Order 4n. Element k + 2n·j is a^k x^j with x² = a^n, x a x⁻¹ = a⁻¹.
pub fn dicyclic(n: usize) -> Result<GroupRef> {
    if n < 2 {
        return Err(Error::ParamOutOfRange("dicyclic group needs n >= 2".into()));
    }
    let (c, m) = (2 * n, 4 * n);
    let mut mult = vec![0; m * m];
    for x in 0..m {
        let (k, i) = (x % c, x / c);
        for y in 0..m {
            let (l, j) = (y % c, y / c);
            mult[x * m + y] = match (i, j) {
                (0, _) => (k + l) % c + c * j,
                (_, 0) => (k + c - l) % c + c,
                _ => (k + c - l + n) % c,
            };
        }
    }
    let name = if n == 2 { "Q8".to_owned() } else { format!("Dic{m}") };
    Ok(Arc::new(FiniteGroup::from_valid_flat(m, mult).with_name(name)))
}

/// Permutations of {0..n-1} in lexicographic one-line order; (στ)(i) = σ(τ(i)).
pub fn symmetric(n: usize) -> Result<GroupRef> {
    if n == 0 || n > 6 {
        return Err(Error::ParamOutOfRange(format!("symmetric group needs 1 <= n <= 6, got {n}")));
    }
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let index: HashMap<&[usize], usize> = perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let m = perms.len();
    let mut mult = vec![0; m * m];
    let mut buf = vec![0; n];
    for (a, s) in perms.iter().enumerate() {
        for (b, t) in perms.iter().enumerate() {
            for i in 0..n {
                buf[i] = s[t[i]];
            }
            mult[a * m + b] = index[buf.as_slice()];
        }
    }
    Ok(Arc::new(FiniteGroup::from_valid_flat(m, mult).with_name(format!("S{n}"))))
}

/// H × G with (h, g) stored at index h·|G| + g.
pub fn direct_product(h: &GroupRef, g: &GroupRef) -> GroupRef {
    let (nh, ng) = (h.order(), g.order());
    let n = nh * ng;
    let mut mult = vec![0; n * n];
    for a in 0..n {
        let (ha, ga) = (a / ng, a % ng);
        for b in 0..n {
            let (hb, gb) = (b / ng, b % ng);
            mult[a * n + b] = h.mul(ha, hb) * ng + g.mul(ga, gb);
        }
    }
    let mut gens: Vec<usize> = h.generators().iter().map(|&x| x * ng).collect();
    gens.extend(g.generators().iter().copied());
    let mut grp = FiniteGroup::from_valid_flat(n, mult).set_generators(gens);
    if let (Some(a), Some(b)) = (h.name(), g.name()) {
        grp = grp.with_name(format!("{a}x{b}"));
    }
    Arc::new(grp)
}

pub fn generated_subgroup_as_group(g: &GroupRef, gens: &[usize]) -> Result<GroupRef> {
    if let Some(&x) = gens.iter().find(|&&x| x >= g.order()) {
        return Err(Error::ParamOutOfRange(format!("generator {x} outside group of order {}", g.order())));
    }
    Ok(Subgroup::generated(g, gens).to_group().0)
}

pub fn klein() -> GroupRef {
    let c2 = cyclic(2).expect("n >= 1");
    let v = direct_product(&c2, &c2);
    Arc::new((*v).clone().with_name("Klein"))
}

/// The alternating group of degree 4, as a subgroup of S4.
pub fn alternating4() -> GroupRef {
    let s4 = symmetric(4).expect("n <= 6");
    let perms: Vec<Vec<usize>> = (0..4).permutations(4).collect();
    let find = |p: &[usize]| perms.iter().position(|q| q == p).expect("permutation");
    let gens = [find(&[1, 2, 0, 3]), find(&[1, 0, 3, 2])];
    let a4 = generated_subgroup_as_group(&s4, &gens).expect("valid generators");
    Arc::new((*a4).clone().with_name("A4"))
}

fn renamed(g: GroupRef, name: &str) -> GroupRef {
    Arc::new((*g).clone().with_name(name))
}

/// Build a group from a short name: `Cn`, `Dn` (order n), `Sn`, `Klein`,
/// `A4`, or products joined by `x` such as `C2xC4`.
pub fn named_group(name: &str) -> Result<GroupRef> {
    let factors: Vec<&str> = name.split('x').collect();
    let mut groups = Vec::new();
    for f in &factors {
        let grp = if *f == "Klein" {
            klein()
        } else if *f == "A4" {
            alternating4()
        } else if let Some(rest) = f.strip_prefix('C') {
            cyclic(parse_param(rest, name)?)?
        } else if *f == "Q8" {
            dicyclic(2)?
        } else if let Some(rest) = f.strip_prefix("Dic") {
            let m = parse_param(rest, name)?;
            if m % 4 != 0 {
                return Err(Error::ParamOutOfRange(format!("dicyclic order must be a multiple of 4 in {name:?}")));
            }
            dicyclic(m / 4)?
        } else if let Some(rest) = f.strip_prefix('D') {
            let n = parse_param(rest, name)?;
            if n % 2 != 0 {
                return Err(Error::ParamOutOfRange(format!("dihedral order must be even in {name:?}")));
            }
            dihedral(n / 2)?
        } else if let Some(rest) = f.strip_prefix('S') {
            symmetric(parse_param(rest, name)?)?
        } else {
            return Err(Error::ParamOutOfRange(format!("unknown group name {name:?}")));
        };
        groups.push(grp);
    }
    let mut acc = groups[0].clone();
    for g in &groups[1..] {
        acc = direct_product(&acc, g);
    }
    Ok(renamed(acc, name))
}

fn parse_param(s: &str, name: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::ParamOutOfRange(format!("bad group name {name:?}")))
}

const CATALOG: &[&str] = &[
    "C1", "C2", "C3", "C4", "Klein", "C5", "C6", "S3", "C7", "C8", "C2xC4", "C2xC2xC2", "D8", "Q8", "C9", "C3xC3",
    "C10", "D10", "C11", "C12", "C2xC6", "D12", "A4", "Dic12",
];

/// One group per isomorphism class up to the given order (complete through
/// order 12).
pub fn catalog(max_order: usize) -> Vec<GroupRef> {
    CATALOG
        .iter()
        .map(|n| named_group(n).expect("catalog names parse"))
        .filter(|g| g.order() <= max_order)
        .collect()
}
