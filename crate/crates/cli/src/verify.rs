//! Seeded verification suites. Trial i of a run with seed s draws its inputs
//! from the generator seeded with s + i, so any failure replays alone with
//! `--seed s+i --trials 1`.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use bisetkit::biset::{biset_compose, bisets_isomorphic, butterfly, Biset};
use bisetkit::group::GroupRef;
use bisetkit::gset::{GSet, GSetRef, OverElement};
use bisetkit::mackey::{
    is_deflative, mackey_check, tau, BisetFunctor, BurnsideFunctor, Deflativity, MatrixAction, ObigFunctor, Phi, Psi,
    RepChoice, SpanFunctor,
};
use bisetkit::random::{
    random_biset, random_group, random_onecell, random_span, random_transitive_biset, random_twocell, random_zerocell,
    trial_rng,
};
use bisetkit::span::{range, span_compose, Obig, Span};
use bisetkit::twocat::{
    compose_onecells, hcompose, is_stab_surjective, is_stab_surjective_brute, sim_factorize, two_pullback,
    validate_onecell, validate_twocell, vcompose, OneCell,
};

use crate::error::CliError;
use crate::format::to_canonical;
use crate::manifest::{Entity, Manifest, Payload};

/// Point count bound for generated G-sets and apexes.
const SIZE: usize = 3;
/// Point count bound for generated bisets.
const BISET_SIZE: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Cells,
    Pullback,
    Sim,
    SpanRange,
    Biset,
    Burntobig,
    Mackey,
    Deflative,
    ThmRoundtrip,
}

pub const ALL: [Suite; 9] = [
    Suite::Cells,
    Suite::Pullback,
    Suite::Sim,
    Suite::SpanRange,
    Suite::Biset,
    Suite::Burntobig,
    Suite::Mackey,
    Suite::Deflative,
    Suite::ThmRoundtrip,
];

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Cells => "cells",
            Suite::Pullback => "pullback",
            Suite::Sim => "sim",
            Suite::SpanRange => "span-range",
            Suite::Biset => "biset",
            Suite::Burntobig => "burntobig",
            Suite::Mackey => "mackey",
            Suite::Deflative => "deflative",
            Suite::ThmRoundtrip => "thm-roundtrip",
        }
    }

    /// A suite name, or "all" for every suite.
    pub fn parse(s: &str) -> Result<Vec<Suite>, CliError> {
        if s == "all" {
            return Ok(ALL.to_vec());
        }
        ALL.iter().find(|x| x.name() == s).map(|&x| vec![x]).ok_or_else(|| CliError::UnknownSuite(s.to_owned()))
    }
}

/// Which functor the deflativity suite examines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FunctorChoice {
    Burnside,
    Obig,
    #[default]
    Both,
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub max_order: usize,
    pub trials: u64,
    pub seed: u64,
    pub functor: FunctorChoice,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { max_order: 8, trials: 100, seed: 0, functor: FunctorChoice::Both }
    }
}

/// Standalone record of a failed trial: the command that replays it and
/// the generated inputs as enveloped manifests.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Reproducer {
    pub suite: String,
    pub seed: u64,
    pub max_order: usize,
    pub reason: String,
    pub command: String,
    pub inputs: Vec<Value>,
}

impl Reproducer {
    pub fn parse(text: &str) -> Result<Reproducer, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse {
            path: "reproducer".into(),
            line: e.line(),
            column: e.column(),
            reason: e.to_string(),
        })
    }

    pub fn manifests(&self) -> Result<Vec<Manifest>, CliError> {
        self.inputs.iter().map(|v| Manifest::parse_str(&to_canonical(v), "reproducer input", None)).collect()
    }

    pub fn file_name(&self) -> String {
        format!("{}-seed{}.json", self.suite, self.seed)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub trial: u64,
    pub seed: u64,
    pub reason: String,
    #[serde(skip)]
    pub reproducer: Reproducer,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub trials: u64,
    pub seed: u64,
    pub max_order: usize,
    pub passed: u64,
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Kept out of the serialized report so output stays deterministic.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A trial: Ok(None) passes, Ok(Some(reason)) fails, errors fail with the
/// error text. Inputs pushed to the vector go into the reproducer.
pub type Check = fn(&mut ChaCha8Rng, usize, &mut Vec<Entity>) -> bisetkit::Result<Option<String>>;

macro_rules! ensure {
    ($c:expr, $($t:tt)*) => {
        if !$c {
            return Ok(Some(format!($($t)*)));
        }
    };
}

fn zerocell(rng: &mut ChaCha8Rng, m: usize, seen: &mut Vec<Entity>) -> bisetkit::Result<GSetRef> {
    let x = random_zerocell(rng, m, SIZE)?;
    seen.push(Entity::Gset(x.clone()));
    Ok(x)
}

fn group(rng: &mut ChaCha8Rng, m: usize, seen: &mut Vec<Entity>) -> GroupRef {
    let g = random_group(rng, m);
    seen.push(Entity::Group(g.clone()));
    g
}

fn cell(rng: &mut ChaCha8Rng, x: &GSetRef, y: &GSetRef, seen: &mut Vec<Entity>) -> bisetkit::Result<OneCell> {
    let a = random_onecell(rng, x, y)?;
    seen.push(Entity::Onecell(a.clone()));
    Ok(a)
}

fn span(rng: &mut ChaCha8Rng, x: &GSetRef, y: &GSetRef, m: usize, seen: &mut Vec<Entity>) -> bisetkit::Result<Span> {
    let s = random_span(rng, x, y, m, SIZE)?;
    seen.push(Entity::Span(s.clone()));
    Ok(s)
}

fn point(g: &GroupRef) -> GSetRef {
    std::sync::Arc::new(GSet::point(g))
}

fn cells(rng: &mut ChaCha8Rng, m: usize, seen: &mut Vec<Entity>) -> bisetkit::Result<Option<String>> {
    let zs = (0..4).map(|_| zerocell(rng, m, seen)).collect::<bisetkit::Result<Vec<_>>>()?;
    let a = cell(rng, &zs[0], &zs[1], seen)?;
    let b = cell(rng, &zs[1], &zs[2], seen)?;
    let c = cell(rng, &zs[2], &zs[3], seen)?;
    for x in [&a, &b, &c] {
        if let Err(v) = validate_onecell(x) {
            return Ok(Some(format!("generated cell is invalid: {v}")));
        }
    }
    let l = compose_onecells(&c, &compose_onecells(&b, &a)?)?;
    let r = compose_onecells(&compose_onecells(&c, &b)?, &a)?;
    ensure!(l == r, "composition of 1-cells is not associative");
    ensure!(validate_onecell(&l).is_ok(), "a composite fails validation");
    ensure!(compose_onecells(&OneCell::identity(a.dst()), &a)? == a, "left identity law fails");
    ensure!(compose_onecells(&a, &OneCell::identity(a.src()))? == a, "right identity law fails");
    let e1 = random_twocell(rng, &a)?;
    let e2 = random_twocell(rng, e1.to())?;
    let d1 = random_twocell(rng, &b)?;
    let d2 = random_twocell(rng, d1.to())?;
    let lhs = hcompose(&vcompose(&d2, &d1)?, &vcompose(&e2, &e1)?)?;
    let rhs = vcompose(&hcompose(&d2, &e2)?, &hcompose(&d1, &e1)?)?;
    ensure!(lhs == rhs, "interchange law fails");
    ensure!(validate_twocell(&lhs).is_ok(), "a composite 2-cell fails validation");
    Ok(None)
}

fn pullback(rng: &mut ChaCha8Rng, m: usize, seen: &mut Vec<Entity>) -> bisetkit::Result<Option<String>> {
    let (x, y, z) = (zerocell(rng, m, seen)?, zerocell(rng, m, seen)?, zerocell(rng, m, seen)?);
    let a = cell(rng, &x, &z, seen)?;
    let b = cell(rng, &y, &z, seen)?;
    let pb = two_pullback(&a, &b)?;
    ensure!(validate_onecell(&pb.wp_x).is_ok() && validate_onecell(&pb.wp_y).is_ok(), "projection fails validation");
    ensure!(validate_twocell(&pb.kappa).is_ok(), "comparison 2-cell fails validation");
    ensure!(*pb.kappa.from() == compose_onecells(&a, &pb.wp_x)?, "comparison 2-cell does not start at a∘℘X");
    ensure!(*pb.kappa.to() == compose_onecells(&b, &pb.wp_y)?, "comparison 2-cell does not end at b∘℘Y");
    let k = z.group();
    let count: usize = (0..x.size())
        .flat_map(|p| (0..y.size()).map(move |q| (p, q)))
        .map(|(p, q)| k.elements().filter(|&kk| z.act(kk, a.alpha()[p]) == b.alpha()[q]).count())
        .sum();
    ensure!(count == pb.apex.size(), "apex has {} points, expected {count}", pb.apex.size());
    Ok(None)
}

fn sim(rng: &mut ChaCha8Rng, m: usize, seen: &mut Vec<Entity>) -> bisetkit::Result<Option<String>> {
    let (x, y) = (zerocell(rng, m, seen)?, zerocell(rng, m, seen)?);
    let a = cell(rng, &x, &y, seen)?;
    let f = sim_factorize(&a);
    ensure!(validate_onecell(&f.upsilon).is_ok() && validate_onecell(&f.tilde).is_ok(), "factor fails validation");
    ensure!(f.tilde.is_equivariant(), "second factor is not equivariant");
    ensure!(compose_onecells(&f.tilde, &f.upsilon)? == a, "factors do not compose back to the cell");
    ensure!(is_stab_surjective(&f.upsilon).holds(), "first factor is not stab-surjective");
    ensure!(is_stab_surjective_brute(&f.upsilon), "first factor fails the brute-force stab-surjectivity test");
    let s = is_stab_surjective(&a).holds();
    ensure!(s == is_stab_surjective_brute(&a), "stab-surjectivity test disagrees with brute force");
    let e = random_twocell(rng, &a)?;
    ensure!(is_stab_surjective(e.to()).holds() == s, "stab-surjectivity changes under a 2-cell");
    Ok(None)
}

fn span_range(rng: &mut ChaCha8Rng, m: usize, seen: &mut Vec<Entity>) -> bisetkit::Result<Option<String>> {
    let (x, y) = (zerocell(rng, m, seen)?, zerocell(rng, m, seen)?);
    let p = point(&group(rng, m, seen));
    let s = span(rng, &p, &x, m, seen)?;
    let t = span(rng, &y, &p, m, seen)?;
    let lhs = range(&span_compose(&t, &s)?);
    let rhs = biset_compose(&range(&t), &range(&s))?;
    ensure!(bisets_isomorphic(&lhs, &rhs)?, "range of the composite differs from the composite of ranges");
    Ok(None)
}

fn biset(rng: &mut ChaCha8Rng, m: usize, seen: &mut Vec<Entity>) -> bisetkit::Result<Option<String>> {
    let gs: Vec<GroupRef> = (0..4).map(|_| random_group(rng, m)).collect();
    let mut draw = |rng: &mut ChaCha8Rng, h: &GroupRef, g: &GroupRef| -> bisetkit::Result<Biset> {
        let u = random_biset(rng, h, g, BISET_SIZE)?;
        seen.push(Entity::Biset(u.clone()));
        Ok(u)
    };
    let u = draw(rng, &gs[1], &gs[0])?;
    let v = draw(rng, &gs[2], &gs[1])?;
    let w = draw(rng, &gs[3], &gs[2])?;
    let t = random_transitive_biset(rng, &gs[1], &gs[0])?;
    seen.push(Entity::Biset(t.clone()));
    let l = biset_compose(&w, &biset_compose(&v, &u)?)?;
    let r = biset_compose(&biset_compose(&w, &v)?, &u)?;
    ensure!(bisets_isomorphic(&l, &r)?, "biset composition is not associative");
    ensure!(bisets_isomorphic(&biset_compose(&Biset::identity(&gs[1]), &u)?, &u)?, "left identity law fails");
    ensure!(bisets_isomorphic(&biset_compose(&u, &Biset::identity(&gs[0]))?, &u)?, "right identity law fails");
    ensure!(bisets_isomorphic(&butterfly(&t)?.reassembled, &t)?, "butterfly does not reassemble the biset");
    Ok(None)
}

fn burntobig(rng: &mut ChaCha8Rng, m: usize, seen: &mut Vec<Entity>) -> bisetkit::Result<Option<String>> {
    let x = zerocell(rng, m, seen)?;
    let classes = OverElement::basis_classes(&x)?;
    let mut w = OverElement::zero(&x);
    for _ in 0..rng.gen_range(1..=3) {
        let c = classes.choose(rng).expect("every orbit has a class").clone();
        let k = *[-2, -1, 1, 2].choose(rng).expect("nonempty");
        w = w.add(&OverElement::basis(&x, c).scale(k))?;
    }
    let back = Obig::from_omega(&w)?.to_omega()?;
    ensure!(back == w, "round trip through the bigger Burnside ring changes {:?}", w.terms());
    Ok(None)
}

fn mackey(rng: &mut ChaCha8Rng, m: usize, seen: &mut Vec<Entity>) -> bisetkit::Result<Option<String>> {
    let (x, y, z) = (zerocell(rng, m, seen)?, zerocell(rng, m, seen)?, zerocell(rng, m, seen)?);
    let a = cell(rng, &x, &z, seen)?;
    let b = cell(rng, &y, &z, seen)?;
    let f = Psi::new(BurnsideFunctor);
    ensure!(mackey_check(&MatrixAction(f.clone()), &a, &b)?, "Mackey condition fails for the Burnside functor");
    let s = span(rng, &y, &x, m, seen)?;
    let t = span(rng, &z, &y, m, seen)?;
    let whole: bisetkit::ZMatrix = f.eval_span(&span_compose(&t, &s)?)?;
    ensure!(whole == f.eval_span(&t)?.mul(&f.eval_span(&s)?)?, "functor does not respect composition");
    Ok(None)
}

fn thm_roundtrip(rng: &mut ChaCha8Rng, m: usize, seen: &mut Vec<Entity>) -> bisetkit::Result<Option<String>> {
    let (h, g) = (random_group(rng, m), random_group(rng, m));
    let u = random_transitive_biset(rng, &h, &g)?;
    seen.push(Entity::Biset(u.clone()));
    let b: bisetkit::ZMatrix = BurnsideFunctor.matrix(&u)?;
    ensure!(Phi::new(Psi::new(BurnsideFunctor)).matrix(&u)? == b, "Φ∘Ψ changes the Burnside functor on a biset");
    let (x, y) = (zerocell(rng, m, seen)?, zerocell(rng, m, seen)?);
    let s = span(rng, &y, &x, m, seen)?;
    let f = Psi::new(BurnsideFunctor);
    let ff = Psi::new(Phi::new(f.clone()));
    let lhs = tau(&f, &y, RepChoice::Least)?.mul(&f.eval_span(&s)?)?;
    let rhs = SpanFunctor::<i64>::eval_span(&ff, &s)?.mul(&tau(&f, &x, RepChoice::Least)?)?;
    ensure!(lhs == rhs, "τ is not natural on a span");
    Ok(None)
}

fn check_of(suite: Suite) -> Option<Check> {
    Some(match suite {
        Suite::Cells => cells,
        Suite::Pullback => pullback,
        Suite::Sim => sim,
        Suite::SpanRange => span_range,
        Suite::Biset => biset,
        Suite::Burntobig => burntobig,
        Suite::Mackey => mackey,
        Suite::ThmRoundtrip => thm_roundtrip,
        Suite::Deflative => return None,
    })
}

/// Run `check` on trials 0..opts.trials in parallel; failures come back in
/// trial order.
pub fn run_trials(name: &str, opts: &VerifyOptions, check: Check) -> VerifyReport {
    let start = Instant::now();
    let failures: Vec<Failure> = (0..opts.trials)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = trial_rng(opts.seed, i);
            let mut seen = Vec::new();
            let reason = match check(&mut rng, opts.max_order, &mut seen) {
                Ok(None) => return None,
                Ok(Some(r)) => r,
                Err(e) => format!("error: {e}"),
            };
            let seed = opts.seed.wrapping_add(i);
            let reproducer = Reproducer {
                suite: name.to_owned(),
                seed,
                max_order: opts.max_order,
                reason: reason.clone(),
                command: format!("bisetkit verify {name} --seed {seed} --trials 1 --max-order {}", opts.max_order),
                inputs: seen.iter().map(|e| Manifest::enveloped(Payload::from(e)).to_value()).collect(),
            };
            Some(Failure { trial: i, seed, reason, reproducer })
        })
        .collect();
    VerifyReport {
        suite: name.to_owned(),
        trials: opts.trials,
        seed: opts.seed,
        max_order: opts.max_order,
        passed: opts.trials - failures.len() as u64,
        failures,
        notes: Vec::new(),
        wall_time: start.elapsed(),
    }
}

fn describe(d: &Deflativity) -> String {
    match d {
        Deflativity::Yes => "deflative".into(),
        Deflativity::Witness { group, normal, probe } => {
            format!("not deflative: G = {group}, N = {normal:?} moves probe {probe}")
        }
    }
}

/// The Burnside functor must be deflative and the bigger Burnside functor
/// must not be; both outcomes count as passes.
fn deflative(opts: &VerifyOptions) -> Result<VerifyReport, CliError> {
    let start = Instant::now();
    let mut report = VerifyReport {
        suite: Suite::Deflative.name().into(),
        trials: 0,
        seed: opts.seed,
        max_order: opts.max_order,
        passed: 0,
        failures: Vec::new(),
        notes: Vec::new(),
        wall_time: Duration::ZERO,
    };
    let mut record = |label: &str, d: Deflativity, expect: bool| {
        report.trials += 1;
        let msg = format!("{label}: {}", describe(&d));
        if d.holds() == expect {
            report.passed += 1;
            report.notes.push(msg);
        } else {
            let reproducer = Reproducer {
                suite: Suite::Deflative.name().into(),
                seed: opts.seed,
                max_order: opts.max_order,
                reason: msg.clone(),
                command: format!("bisetkit verify deflative --max-order {}", opts.max_order),
                inputs: Vec::new(),
            };
            report.failures.push(Failure { trial: report.trials - 1, seed: opts.seed, reason: msg, reproducer });
        }
    };
    if opts.functor != FunctorChoice::Obig {
        record("burnside", is_deflative(&MatrixAction(Psi::new(BurnsideFunctor)), opts.max_order)?, true);
    }
    if opts.functor != FunctorChoice::Burnside {
        record("obig", is_deflative(&ObigFunctor::default(), opts.max_order)?, false);
    }
    report.wall_time = start.elapsed();
    Ok(report)
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<VerifyReport, CliError> {
    match check_of(suite) {
        Some(check) => Ok(run_trials(suite.name(), opts, check)),
        None => deflative(opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifest::Resolver;

    fn flaky(rng: &mut ChaCha8Rng, m: usize, seen: &mut Vec<Entity>) -> bisetkit::Result<Option<String>> {
        let x = zerocell(rng, m, seen)?;
        ensure!(x.size() != 2, "drew a two-point set");
        Ok(None)
    }

    fn opts(seed: u64, trials: u64) -> VerifyOptions {
        VerifyOptions { max_order: 6, trials, seed, functor: FunctorChoice::Both }
    }

    #[test]
    fn suite_names() {
        assert_eq!(Suite::parse("all").unwrap().len(), 9);
        assert_eq!(Suite::parse("span-range").unwrap(), vec![Suite::SpanRange]);
        assert!(matches!(Suite::parse("nope"), Err(CliError::UnknownSuite(_))));
    }

    #[test]
    fn reproducers_replay_their_failure() {
        let report = run_trials("flaky", &opts(5, 40), flaky);
        assert!(!report.failures.is_empty());
        assert_eq!(report.passed + report.failures.len() as u64, 40);
        for f in &report.failures {
            let text = to_canonical(&serde_json::to_value(&f.reproducer).unwrap());
            let back = Reproducer::parse(&text).unwrap();
            assert_eq!(back, f.reproducer);
            let ms = back.manifests().unwrap();
            assert_eq!(ms.len(), 1);
            let Entity::Gset(x) = Resolver::new(".", "r").entity(&ms[0].payload).unwrap() else { panic!() };
            assert_eq!(x.size(), 2);
            let again = run_trials("flaky", &opts(back.seed, 1), flaky);
            assert_eq!(again.failures.len(), 1);
            assert_eq!(again.failures[0].reproducer.inputs, back.inputs);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = serde_json::to_string(&run_trials("flaky", &opts(9, 30), flaky)).unwrap();
        let b = serde_json::to_string(&run_trials("flaky", &opts(9, 30), flaky)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn every_trial_suite_passes_briefly() {
        for s in ALL {
            let r = run_suite(s, &opts(1, 4)).unwrap();
            assert!(r.ok(), "{}: {:?}", s.name(), r.failures);
        }
    }

    #[test]
    fn obig_witness_counts_as_a_pass() {
        let mut o = opts(0, 1);
        o.functor = FunctorChoice::Obig;
        let r = run_suite(Suite::Deflative, &o).unwrap();
        assert!(r.ok());
        assert!(r.notes[0].starts_with("obig: not deflative"), "{:?}", r.notes);
    }
}
