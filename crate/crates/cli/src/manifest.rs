//! JSON file formats for groups, G-sets, 1-cells, spans and bisets, either
//! bare or wrapped in a versioned envelope, and their conversion to and from
//! the library types.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::{self, DeserializeOwned, MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::value::RawValue;
use serde_json::Value;

use bisetkit::biset::Biset;
use bisetkit::group::{named_group, FiniteGroup, GroupRef};
use bisetkit::gset::{GSet, GSetRef};
use bisetkit::span::Span;
use bisetkit::twocat::OneCell;

use crate::error::CliError;
use crate::format::to_canonical;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Group,
    Gset,
    Onecell,
    Span,
    Biset,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::Group => "group",
            Kind::Gset => "gset",
            Kind::Onecell => "onecell",
            Kind::Span => "span",
            Kind::Biset => "biset",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub order: usize,
    pub mult: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

/// A group given inline, by a standard name such as "S3", or by a path
/// (ending in .json) relative to the referring file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Ref(String),
    Inline(GroupFile),
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = GroupSpec;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a group name, a path to a group file, or an inline group")
            }

            fn visit_str<E: de::Error>(self, s: &str) -> Result<GroupSpec, E> {
                Ok(GroupSpec::Ref(s.to_owned()))
            }

            fn visit_map<A: MapAccess<'de>>(self, m: A) -> Result<GroupSpec, A::Error> {
                GroupFile::deserialize(de::value::MapAccessDeserializer::new(m)).map(GroupSpec::Inline)
            }
        }
        d.deserialize_any(V)
    }
}

/// Rows indexed by points: action[x][g] = g·x.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GSetFile {
    pub group: GroupSpec,
    pub size: usize,
    pub action: Vec<Vec<usize>>,
}

/// theta[x][g] = θ_x(g).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneCellFile {
    pub src: GSetFile,
    pub dst: GSetFile,
    pub alpha: Vec<usize>,
    pub theta: Vec<Vec<usize>>,
}

/// A span to left.dst from right.dst.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanFile {
    pub apex: GSetFile,
    pub left: OneCellFile,
    pub right: OneCellFile,
}

/// The carrier is a left (left × right)-set, with (h, g)·u = h·u·g⁻¹.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BisetFile {
    pub left: GroupSpec,
    pub right: GroupSpec,
    pub carrier: GSetFile,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Group(GroupFile),
    Gset(GSetFile),
    Onecell(OneCellFile),
    Span(SpanFile),
    Biset(BisetFile),
}

impl Payload {
    pub fn kind(&self) -> Kind {
        match self {
            Payload::Group(_) => Kind::Group,
            Payload::Gset(_) => Kind::Gset,
            Payload::Onecell(_) => Kind::Onecell,
            Payload::Span(_) => Kind::Span,
            Payload::Biset(_) => Kind::Biset,
        }
    }

    fn to_value(&self) -> Value {
        let v = match self {
            Payload::Group(p) => serde_json::to_value(p),
            Payload::Gset(p) => serde_json::to_value(p),
            Payload::Onecell(p) => serde_json::to_value(p),
            Payload::Span(p) => serde_json::to_value(p),
            Payload::Biset(p) => serde_json::to_value(p),
        };
        v.expect("plain data serializes")
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope<'a> {
    format_version: u32,
    kind: Kind,
    #[serde(borrow)]
    payload: &'a RawValue,
}

/// A parsed file. Bare files have no envelope and serialize back bare.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manifest {
    pub enveloped: bool,
    pub payload: Payload,
}

/// Shift a (line, column) inside `part` to a position inside `full`, where
/// `part` is a subslice of `full`.
fn shift(full: &str, part: &str, line: usize, column: usize) -> (usize, usize) {
    let offset = part.as_ptr() as usize - full.as_ptr() as usize;
    let before = &full[..offset];
    let base_line = before.matches('\n').count() + 1;
    let base_col = offset - before.rfind('\n').map_or(0, |i| i + 1);
    if line <= 1 {
        (base_line, base_col + column)
    } else {
        (base_line + line - 1, column)
    }
}

fn parse_error(origin: &str, full: &str, part: &str, e: &serde_json::Error) -> CliError {
    let (line, column) = shift(full, part, e.line(), e.column());
    let reason = e.to_string();
    let reason = match reason.rfind(" at line ") {
        Some(i) => reason[..i].to_owned(),
        None => reason,
    };
    CliError::Parse { path: origin.to_owned(), line, column, reason }
}

fn typed<T: DeserializeOwned>(origin: &str, full: &str, part: &str) -> Result<T, CliError> {
    serde_json::from_str(part).map_err(|e| parse_error(origin, full, part, &e))
}

fn payload_of(kind: Kind, origin: &str, full: &str, part: &str) -> Result<Payload, CliError> {
    Ok(match kind {
        Kind::Group => Payload::Group(typed(origin, full, part)?),
        Kind::Gset => Payload::Gset(typed(origin, full, part)?),
        Kind::Onecell => Payload::Onecell(typed(origin, full, part)?),
        Kind::Span => Payload::Span(typed(origin, full, part)?),
        Kind::Biset => Payload::Biset(typed(origin, full, part)?),
    })
}

/// The kind of a bare file, from its distinguishing key.
fn infer_kind(m: &serde_json::Map<String, Value>) -> Option<Kind> {
    [("mult", Kind::Group), ("carrier", Kind::Biset), ("apex", Kind::Span), ("alpha", Kind::Onecell), ("action", Kind::Gset)]
        .into_iter()
        .find(|(k, _)| m.contains_key(*k))
        .map(|(_, kind)| kind)
}

impl Manifest {
    pub fn bare(payload: Payload) -> Manifest {
        Manifest { enveloped: false, payload }
    }

    pub fn enveloped(payload: Payload) -> Manifest {
        Manifest { enveloped: true, payload }
    }

    pub fn kind(&self) -> Kind {
        self.payload.kind()
    }

    /// Parse text; `origin` names the source in errors. With `expect` set, a
    /// file of another kind is a usage error.
    pub fn parse_str(text: &str, origin: &str, expect: Option<Kind>) -> Result<Manifest, CliError> {
        let value: Value = typed(origin, text, text)?;
        let Value::Object(map) = &value else {
            return Err(CliError::Parse { path: origin.into(), line: 1, column: 1, reason: "expected a JSON object".into() });
        };
        let out = if map.contains_key("format_version") {
            let env: Envelope = typed_borrowed(origin, text)?;
            if env.format_version != FORMAT_VERSION {
                return Err(CliError::Usage(format!(
                    "{origin}: unsupported format_version {} (expected {FORMAT_VERSION})",
                    env.format_version
                )));
            }
            Manifest::enveloped(payload_of(env.kind, origin, text, env.payload.get())?)
        } else {
            let kind = infer_kind(map).or(expect).ok_or_else(|| CliError::Parse {
                path: origin.into(),
                line: 1,
                column: 1,
                reason: "cannot tell the entity kind of this file".into(),
            })?;
            Manifest::bare(payload_of(kind, origin, text, text)?)
        };
        if let Some(k) = expect {
            if out.kind() != k {
                return Err(CliError::Usage(format!("{origin}: expected a {k} file, found a {}", out.kind())));
            }
        }
        Ok(out)
    }

    pub fn parse_file(path: &Path, expect: Option<Kind>) -> Result<Manifest, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse_str(&text, &path.display().to_string(), expect)
    }

    pub fn to_value(&self) -> Value {
        let payload = self.payload.to_value();
        if self.enveloped {
            let mut m = serde_json::Map::new();
            m.insert("format_version".into(), FORMAT_VERSION.into());
            m.insert("kind".into(), Value::String(self.kind().to_string()));
            m.insert("payload".into(), payload);
            Value::Object(m)
        } else {
            payload
        }
    }

    pub fn serialize(&self) -> String {
        to_canonical(&self.to_value())
    }
}

fn typed_borrowed<'a>(origin: &str, text: &'a str) -> Result<Envelope<'a>, CliError> {
    serde_json::from_str(text).map_err(|e| parse_error(origin, text, text, &e))
}

/// A validated entity.
#[derive(Clone, Debug)]
pub enum Entity {
    Group(GroupRef),
    Gset(GSetRef),
    Onecell(OneCell),
    Span(Span),
    Biset(Biset),
}

/// Builds library values from file payloads, resolving group references
/// relative to `base` and sharing equal groups.
pub struct Resolver {
    base: PathBuf,
    origin: String,
    by_table: RefCell<HashMap<Vec<Vec<usize>>, GroupRef>>,
    by_ref: RefCell<HashMap<String, GroupRef>>,
}

impl Resolver {
    pub fn new(base: impl Into<PathBuf>, origin: impl Into<String>) -> Resolver {
        Resolver { base: base.into(), origin: origin.into(), by_table: RefCell::default(), by_ref: RefCell::default() }
    }

    /// For a file path: references resolve next to it.
    pub fn for_file(path: &Path) -> Resolver {
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Resolver::new(base, path.display().to_string())
    }

    fn invalid(&self, source: bisetkit::Error) -> CliError {
        CliError::Validation { path: self.origin.clone(), source }
    }

    fn check<T>(&self, r: bisetkit::Result<T>) -> Result<T, CliError> {
        r.map_err(|e| self.invalid(e))
    }

    fn shape(&self, msg: String) -> CliError {
        self.invalid(bisetkit::Error::InvalidAction(msg))
    }

    /// A group file as a group. Unless `relabel` is set the identity must be
    /// element 0, since other tables in the file index elements directly.
    pub fn group_file(&self, f: &GroupFile, relabel: bool) -> Result<GroupRef, CliError> {
        if f.order != f.mult.len() {
            return Err(self.invalid(bisetkit::Error::NotSquare { row: 0, len: f.mult.len(), expected: f.order }));
        }
        if let Some(g) = self.by_table.borrow().get(&f.mult) {
            if g.name() == f.name.as_deref() {
                return Ok(g.clone());
            }
        }
        let mut g = self.check(FiniteGroup::from_table(&f.mult))?;
        if let Some(n) = &f.name {
            g = g.with_name(n.clone());
        }
        if !relabel && g.table() != f.mult {
            return Err(self.invalid(bisetkit::Error::ParamOutOfRange("the identity must be element 0".into())));
        }
        let g = Arc::new(g);
        self.by_table.borrow_mut().insert(f.mult.clone(), g.clone());
        Ok(g)
    }

    pub fn group(&self, spec: &GroupSpec) -> Result<GroupRef, CliError> {
        match spec {
            GroupSpec::Inline(f) => self.group_file(f, false),
            GroupSpec::Ref(r) => {
                if let Some(g) = self.by_ref.borrow().get(r) {
                    return Ok(g.clone());
                }
                let g = if r.ends_with(".json") {
                    let path = self.base.join(r);
                    let m = Manifest::parse_file(&path, Some(Kind::Group))?;
                    let Payload::Group(f) = &m.payload else { unreachable!("kind checked") };
                    Resolver::for_file(&path).group_file(f, false)?
                } else {
                    self.check(named_group(r))?
                };
                self.by_ref.borrow_mut().insert(r.clone(), g.clone());
                Ok(g)
            }
        }
    }

    pub fn gset(&self, f: &GSetFile) -> Result<GSetRef, CliError> {
        let g = self.group(&f.group)?;
        if f.size != f.action.len() {
            return Err(self.shape(format!("size is {} but the action has {} rows", f.size, f.action.len())));
        }
        Ok(Arc::new(self.check(GSet::new(g, &f.action))?))
    }

    pub fn onecell(&self, f: &OneCellFile) -> Result<OneCell, CliError> {
        let (src, dst) = (self.gset(&f.src)?, self.gset(&f.dst)?);
        self.check(OneCell::new(src, dst, f.alpha.clone(), &f.theta))
    }

    pub fn span(&self, f: &SpanFile) -> Result<Span, CliError> {
        let apex = self.gset(&f.apex)?;
        let (left, right) = (self.onecell(&f.left)?, self.onecell(&f.right)?);
        for (leg, name) in [(&left, "left"), (&right, "right")] {
            if **leg.src() != *apex {
                return Err(self.invalid(bisetkit::Error::BoundaryMismatch(format!("{name} leg does not start at the apex"))));
            }
        }
        self.check(Span::new(left, right))
    }

    pub fn biset(&self, f: &BisetFile) -> Result<Biset, CliError> {
        let (h, g) = (self.group(&f.left)?, self.group(&f.right)?);
        let carrier = self.gset(&f.carrier)?;
        self.check(Biset::new(h, g, carrier))
    }

    pub fn entity(&self, p: &Payload) -> Result<Entity, CliError> {
        Ok(match p {
            Payload::Group(f) => Entity::Group(self.group_file(f, true)?),
            Payload::Gset(f) => Entity::Gset(self.gset(f)?),
            Payload::Onecell(f) => Entity::Onecell(self.onecell(f)?),
            Payload::Span(f) => Entity::Span(self.span(f)?),
            Payload::Biset(f) => Entity::Biset(self.biset(f)?),
        })
    }
}

pub fn group_to_file(g: &GroupRef) -> GroupFile {
    GroupFile { order: g.order(), mult: g.table(), name: g.name().map(str::to_owned) }
}

pub fn gset_to_file(x: &GSet) -> GSetFile {
    GSetFile { group: GroupSpec::Inline(group_to_file(x.group())), size: x.size(), action: x.rows() }
}

pub fn onecell_to_file(a: &OneCell) -> OneCellFile {
    OneCellFile { src: gset_to_file(a.src()), dst: gset_to_file(a.dst()), alpha: a.alpha().to_vec(), theta: a.theta_rows() }
}

pub fn span_to_file(s: &Span) -> SpanFile {
    SpanFile { apex: gset_to_file(s.apex()), left: onecell_to_file(s.left()), right: onecell_to_file(s.right()) }
}

pub fn biset_to_file(u: &Biset) -> BisetFile {
    BisetFile {
        left: GroupSpec::Inline(group_to_file(u.left_group())),
        right: GroupSpec::Inline(group_to_file(u.right_group())),
        carrier: gset_to_file(u.carrier()),
    }
}

impl From<&Entity> for Payload {
    fn from(e: &Entity) -> Payload {
        match e {
            Entity::Group(g) => Payload::Group(group_to_file(g)),
            Entity::Gset(x) => Payload::Gset(gset_to_file(x)),
            Entity::Onecell(a) => Payload::Onecell(onecell_to_file(a)),
            Entity::Span(s) => Payload::Span(span_to_file(s)),
            Entity::Biset(u) => Payload::Biset(biset_to_file(u)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use bisetkit::group::{cyclic, symmetric};

    fn c2_text() -> String {
        Manifest::bare(Payload::Group(group_to_file(&cyclic(2).unwrap()))).serialize()
    }

    #[test]
    fn bare_and_enveloped_round_trip() {
        let text = c2_text();
        let m = Manifest::parse_str(&text, "c2", None).unwrap();
        assert_eq!(m.kind(), Kind::Group);
        assert_eq!(m.serialize(), text);
        let env = Manifest::enveloped(m.payload.clone()).serialize();
        assert!(env.starts_with("{\n  \"format_version\": 1,\n  \"kind\": \"group\",\n  \"payload\": {"));
        assert_eq!(Manifest::parse_str(&env, "env", Some(Kind::Group)).unwrap().serialize(), env);
    }

    #[test]
    fn unknown_fields_are_rejected_with_a_position() {
        let text = "{\n  \"order\": 1,\n  \"mult\": [[0]],\n  \"colour\": 3\n}\n";
        match Manifest::parse_str(text, "f", None) {
            Err(CliError::Parse { line, reason, .. }) => {
                assert_eq!(line, 4);
                assert!(reason.contains("colour"), "{reason}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn errors_inside_an_envelope_point_into_the_file() {
        let text = "{\n  \"format_version\": 1,\n  \"kind\": \"group\",\n  \"payload\": {\n    \"order\": \"two\"\n  }\n}\n";
        match Manifest::parse_str(text, "f", None) {
            Err(CliError::Parse { line, column, .. }) => assert_eq!((line, column), (5, 18)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wrong_kind_is_a_usage_error() {
        assert!(matches!(Manifest::parse_str(&c2_text(), "f", Some(Kind::Span)), Err(CliError::Usage(_))));
    }

    #[test]
    fn s3_fixture_parses_to_order_6() {
        let text = Manifest::bare(Payload::Group(group_to_file(&symmetric(3).unwrap()))).serialize();
        let m = Manifest::parse_str(&text, "s3", None).unwrap();
        match Resolver::new(".", "s3").entity(&m.payload).unwrap() {
            Entity::Group(g) => assert_eq!(g.order(), 6),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn non_action_names_the_failing_triple() {
        // C2 acting on two points by the identity except 1·0 = 1, 1·1 = 1
        let text = r#"{"group": "C2", "size": 2, "action": [[0, 1], [1, 1]]}"#;
        let m = Manifest::parse_str(text, "x", None).unwrap();
        let err = Resolver::new(".", "x").entity(&m.payload).unwrap_err();
        assert!(matches!(err, CliError::Validation { .. }));
        assert!(err.to_string().contains("(g, g', x) = ("), "{err}");
    }

    #[test]
    fn library_values_survive_the_file_form() {
        let s3 = symmetric(3).unwrap();
        let x: GSetRef = Arc::new(GSet::regular(&s3));
        let f = gset_to_file(&x);
        let text = Manifest::bare(Payload::Gset(f.clone())).serialize();
        let back = Manifest::parse_str(&text, "x", Some(Kind::Gset)).unwrap();
        assert_eq!(back.payload, Payload::Gset(f));
        match Resolver::new(".", "x").entity(&back.payload).unwrap() {
            Entity::Gset(y) => assert_eq!(*y, *x),
            e => panic!("{e:?}"),
        }
    }
}
