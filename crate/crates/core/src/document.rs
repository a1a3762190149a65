//! JSON documents: one per structure kind, with `format_version` "1".
//!
//! ID lists are arrays (their order is kept), maps are objects from ID to ID,
//! and tables on tuples are keyed by the IDs joined with `|`. Emission is
//! canonical: sorted keys, two-space indentation, trailing newline.

use crate::equivalence::StrictTwoGroupoidMap;
use crate::groupoid::{Bibundle, FiniteGroupoid};
use crate::simplicial::{SimplicialMap, TruncatedSimplicialSet};
use crate::stacky::{Associator, FiberPower, StackyGroupoidData, Unitor};
use crate::two_groupoid::{HornTable, TwoGroupoidData};
use serde_json::{json, Map, Value};
use std::collections::HashMap;
use std::sync::Arc;

pub const FORMAT_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Simplicial(TruncatedSimplicialSet),
    TwoGroupoid(TwoGroupoidData),
    Groupoid(FiniteGroupoid),
    Bibundle(Bibundle),
    Stacky(Box<StackyGroupoidData>),
    Map(MapDocument),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapDocument {
    Simplicial(SimplicialMap),
    TwoGroupoid(StrictTwoGroupoidMap),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Simplicial(_) => "simplicial",
            Document::TwoGroupoid(_) => "two_groupoid",
            Document::Groupoid(_) => "groupoid",
            Document::Bibundle(_) => "bibundle",
            Document::Stacky(_) => "stacky",
            Document::Map(_) => "map",
        }
    }
}

/// A schema error at a JSON path such as `$.levels[1].faces[0]`.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct DocumentError {
    pub path: String,
    pub message: String,
}

pub fn parse(text: &str) -> Result<Document, DocumentError> {
    let value: Value = serde_json::from_str(text).map_err(|e| DocumentError { path: "$".into(), message: format!("malformed JSON: {e}") })?;
    let root = Node { v: &value, path: "$".into() };
    let version = root.field("format_version")?;
    if version.str()? != FORMAT_VERSION {
        return Err(version.err(format!("unsupported format_version, expected \"{FORMAT_VERSION}\"")));
    }
    let kind = root.field("kind")?;
    Ok(match kind.str()? {
        "simplicial" => Document::Simplicial(simplicial(&root)?),
        "two_groupoid" => Document::TwoGroupoid(two_groupoid(&root)?),
        "groupoid" => Document::Groupoid(groupoid(&root)?),
        "bibundle" => Document::Bibundle(bibundle(&root)?),
        "stacky" => Document::Stacky(Box::new(stacky(&root)?)),
        "map" => Document::Map(map(&root)?),
        other => return Err(kind.err(format!("unknown kind \"{other}\""))),
    })
}

pub fn emit(doc: &Document) -> String {
    let mut payload = match doc {
        Document::Simplicial(x) => simplicial_value(x),
        Document::TwoGroupoid(x) => two_groupoid_value(x),
        Document::Groupoid(g) => groupoid_value(g),
        Document::Bibundle(e) => {
            let mut v = bibundle_value(e);
            v.insert("left".into(), Value::Object(groupoid_value(&e.left)));
            v.insert("right".into(), Value::Object(groupoid_value(&e.right)));
            v
        }
        Document::Stacky(d) => stacky_value(d),
        Document::Map(m) => map_value(m),
    };
    payload.insert("kind".into(), json!(doc.kind()));
    payload.insert("format_version".into(), json!(FORMAT_VERSION));
    let mut out = serde_json::to_string_pretty(&Value::Object(payload)).expect("JSON values serialize");
    out.push('\n');
    out
}

// ---- emission ----

fn ids(names: &[String]) -> Value {
    Value::Array(names.iter().map(|s| json!(s)).collect())
}

fn id_map(domain: &[String], codomain: &[String], f: impl Fn(usize) -> usize) -> Value {
    Value::Object((0..domain.len()).map(|x| (domain[x].clone(), json!(codomain[f(x)]))).collect())
}

fn key(parts: &[&str]) -> String {
    parts.join("|")
}

fn levels_value(x: &TruncatedSimplicialSet) -> Value {
    let levels = (0..=x.top())
        .map(|n| {
            let mut level = Map::new();
            level.insert("cells".into(), ids(x.cells(n)));
            if n > 0 {
                let faces = (0..=n).map(|i| id_map(x.cells(n), x.cells(n - 1), |c| x.face(n, i, c))).collect();
                level.insert("faces".into(), Value::Array(faces));
            }
            if n < x.top() {
                let degens = (0..=n).map(|i| id_map(x.cells(n), x.cells(n + 1), |c| x.degen(n, i, c))).collect();
                level.insert("degeneracies".into(), Value::Array(degens));
            }
            Value::Object(level)
        })
        .collect();
    Value::Array(levels)
}

fn simplicial_value(x: &TruncatedSimplicialSet) -> Map<String, Value> {
    Map::from_iter([("levels".to_string(), levels_value(x))])
}

fn two_groupoid_value(x: &TwoGroupoidData) -> Map<String, Value> {
    let cells = x.x(2);
    let tables = x
        .m
        .iter()
        .map(|t| Value::Object(t.iter().map(|(k, &v)| (key(&k.map(|c| cells[c].as_str())), json!(cells[v]))).collect()))
        .collect();
    Map::from_iter([("levels".to_string(), levels_value(&x.layers)), ("m".to_string(), Value::Array(tables))])
}

fn groupoid_value(g: &FiniteGroupoid) -> Map<String, Value> {
    let compose = (0..g.n_arrows())
        .flat_map(|a| (0..g.n_arrows()).map(move |b| (a, b)))
        .filter_map(|(a, b)| g.comp(a, b).map(|c| (key(&[&g.arrows[a], &g.arrows[b]]), json!(g.arrows[c]))))
        .collect();
    Map::from_iter([
        ("objects".to_string(), ids(&g.objects)),
        ("arrows".to_string(), ids(&g.arrows)),
        ("source".to_string(), id_map(&g.arrows, &g.objects, |a| g.source[a])),
        ("target".to_string(), id_map(&g.arrows, &g.objects, |a| g.target[a])),
        ("identity".to_string(), id_map(&g.objects, &g.arrows, |o| g.identity[o])),
        ("inverse".to_string(), id_map(&g.arrows, &g.arrows, |a| g.inverse[a])),
        ("compose".to_string(), Value::Object(compose)),
    ])
}

/// The carrier, moments and actions; the two groupoids are given by context.
fn bibundle_value(e: &Bibundle) -> Map<String, Value> {
    let (h, g, c) = (&e.left.arrows, &e.right.arrows, &e.carrier);
    let mut left = Map::new();
    let mut right = Map::new();
    for x in 0..e.len() {
        for a in 0..h.len() {
            if let Some(y) = e.left_act[a * e.len() + x] {
                left.insert(key(&[&h[a], &c[x]]), json!(c[y]));
            }
        }
        for a in 0..g.len() {
            if let Some(y) = e.right_act[x * g.len() + a] {
                right.insert(key(&[&c[x], &g[a]]), json!(c[y]));
            }
        }
    }
    Map::from_iter([
        ("carrier".to_string(), ids(c)),
        ("left_moment".to_string(), id_map(c, &e.left.objects, |x| e.j_l[x])),
        ("right_moment".to_string(), id_map(c, &e.right.objects, |x| e.j_r[x])),
        ("left_action".to_string(), Value::Object(left)),
        ("right_action".to_string(), Value::Object(right)),
    ])
}

fn unitor_value(u: &Unitor, carrier: &[String], arrows: &[String]) -> Value {
    Value::Object(u.iter().map(|(&x, &a)| (carrier[x].clone(), json!(arrows[a]))).collect())
}

fn stacky_value(d: &StackyGroupoidData) -> Map<String, Value> {
    let g = &d.groupoid;
    let c = &d.multiplication.carrier;
    let associator = d
        .associator
        .iter()
        .map(|(k, v)| (key(&[&c[k[0]], &c[k[1]]]), json!(key(&[&c[v[0]], &c[v[1]]]))))
        .collect();
    let mut out = Map::from_iter([
        ("groupoid".to_string(), Value::Object(groupoid_value(g))),
        ("base".to_string(), ids(&d.base)),
        ("s".to_string(), id_map(&g.objects, &d.base, |o| d.s[o])),
        ("t".to_string(), id_map(&g.objects, &d.base, |o| d.t[o])),
        ("unit".to_string(), id_map(&d.base, &g.objects, |m| d.unit[m])),
        ("multiplication".to_string(), Value::Object(bibundle_value(&d.multiplication))),
        ("associator".to_string(), Value::Object(associator)),
        ("left_unitor".to_string(), unitor_value(&d.left_unitor, c, &g.arrows)),
        ("right_unitor".to_string(), unitor_value(&d.right_unitor, c, &g.arrows)),
    ]);
    if let Some(inv) = &d.inverse {
        out.insert("inverse".into(), Value::Object(bibundle_value(inv)));
    }
    out
}

fn map_value(m: &MapDocument) -> Map<String, Value> {
    let (of, source, target, levels): (_, Map<String, Value>, Map<String, Value>, Vec<Value>) = match m {
        MapDocument::Simplicial(f) => (
            "simplicial",
            simplicial_value(&f.source),
            simplicial_value(&f.target),
            f.level_map
                .iter()
                .enumerate()
                .map(|(n, lv)| id_map(f.source.cells(n), f.target.cells(n), |x| lv[x]))
                .collect(),
        ),
        MapDocument::TwoGroupoid(f) => (
            "two_groupoid",
            two_groupoid_value(&f.source),
            two_groupoid_value(&f.target),
            f.levels()
                .iter()
                .enumerate()
                .map(|(n, lv)| id_map(f.source.x(n), f.target.x(n), |x| lv[x]))
                .collect(),
        ),
    };
    Map::from_iter([
        ("of".to_string(), json!(of)),
        ("source".to_string(), Value::Object(source)),
        ("target".to_string(), Value::Object(target)),
        ("levels".to_string(), Value::Array(levels)),
    ])
}

// ---- parsing ----

struct Node<'a> {
    v: &'a Value,
    path: String,
}

type Index<'a> = HashMap<&'a str, usize>;

fn index(names: &[String]) -> Index<'_> {
    names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect()
}

impl<'a> Node<'a> {
    fn err(&self, message: impl Into<String>) -> DocumentError {
        DocumentError { path: self.path.clone(), message: message.into() }
    }

    fn opt_field(&self, k: &str) -> Option<Node<'a>> {
        self.v.get(k).map(|v| Node { v, path: format!("{}.{k}", self.path) })
    }

    fn field(&self, k: &str) -> Result<Node<'a>, DocumentError> {
        if !self.v.is_object() {
            return Err(self.err("expected an object"));
        }
        self.opt_field(k).ok_or_else(|| self.err(format!("missing field \"{k}\"")))
    }

    fn str(&self) -> Result<&'a str, DocumentError> {
        self.v.as_str().ok_or_else(|| self.err("expected a string"))
    }

    fn array(&self) -> Result<Vec<Node<'a>>, DocumentError> {
        let items = self.v.as_array().ok_or_else(|| self.err("expected an array"))?;
        Ok(items.iter().enumerate().map(|(i, v)| Node { v, path: format!("{}[{i}]", self.path) }).collect())
    }

    fn entries(&self) -> Result<Vec<(&'a str, Node<'a>)>, DocumentError> {
        let items = self.v.as_object().ok_or_else(|| self.err("expected an object"))?;
        Ok(items.iter().map(|(k, v)| (k.as_str(), Node { v, path: format!("{}.{k}", self.path) })).collect())
    }

    /// A list of distinct IDs free of the key separator.
    fn ids(&self) -> Result<Vec<String>, DocumentError> {
        let mut seen = std::collections::HashSet::new();
        self.array()?
            .iter()
            .map(|n| {
                let s = n.str()?;
                if s.contains('|') {
                    return Err(n.err("IDs may not contain '|'"));
                }
                if !seen.insert(s) {
                    return Err(n.err(format!("duplicate ID \"{s}\"")));
                }
                Ok(s.to_string())
            })
            .collect()
    }

    fn resolve(&self, ix: &Index) -> Result<usize, DocumentError> {
        let s = self.str()?;
        ix.get(s).copied().ok_or_else(|| self.err(format!("unknown ID \"{s}\"")))
    }

    /// An object from every ID of `domain` to an ID of the codomain.
    fn total_map(&self, domain: &[String], codomain: &Index) -> Result<Vec<usize>, DocumentError> {
        let dom = index(domain);
        let mut out = vec![usize::MAX; domain.len()];
        for (k, n) in self.entries()? {
            let x = *dom.get(k).ok_or_else(|| n.err(format!("\"{k}\" is not in the domain")))?;
            out[x] = n.resolve(codomain)?;
        }
        if let Some(x) = out.iter().position(|&y| y == usize::MAX) {
            return Err(self.err(format!("map is not total: \"{}\" has no value", domain[x])));
        }
        Ok(out)
    }

    /// An object keyed by `k` IDs joined with `|`.
    fn tuple_table<const K: usize>(&self, keys: [&Index; K], values: &Index) -> Result<Vec<([usize; K], usize)>, DocumentError> {
        self.entries()?
            .into_iter()
            .map(|(k, n)| {
                let parts: Vec<&str> = k.split('|').collect();
                if parts.len() != K {
                    return Err(n.err(format!("key \"{k}\" should join {K} IDs with '|'")));
                }
                let mut tuple = [0; K];
                for (slot, (part, ix)) in parts.iter().zip(keys).enumerate() {
                    tuple[slot] = *ix.get(part).ok_or_else(|| n.err(format!("unknown ID \"{part}\" in key")))?;
                }
                Ok((tuple, n.resolve(values)?))
            })
            .collect()
    }
}

fn levels(node: &Node) -> Result<TruncatedSimplicialSet, DocumentError> {
    let lv = node.field("levels")?;
    let levels = lv.array()?;
    if levels.is_empty() {
        return Err(lv.err("needs at least level 0"));
    }
    let cells: Vec<Vec<String>> = levels.iter().map(|l| l.field("cells")?.ids()).collect::<Result<_, _>>()?;
    let top = cells.len() - 1;
    let mut face = Vec::new();
    let mut degen = Vec::new();
    for (n, l) in levels.iter().enumerate() {
        let tables = |name: &str, present: bool, other: usize| -> Result<Vec<Vec<usize>>, DocumentError> {
            if !present {
                return match l.opt_field(name) {
                    Some(f) if !f.array()?.is_empty() => Err(f.err(format!("level {n} has no {name}"))),
                    _ => Ok(Vec::new()),
                };
            }
            let f = l.field(name)?;
            let list = f.array()?;
            if list.len() != n + 1 {
                return Err(f.err(format!("expected {} tables", n + 1)));
            }
            list.iter().map(|t| t.total_map(&cells[n], &index(&cells[other]))).collect()
        };
        face.push(tables("faces", n > 0, n.saturating_sub(1))?);
        degen.push(tables("degeneracies", n < top, (n + 1).min(top))?);
    }
    TruncatedSimplicialSet::new(cells, face, degen).map_err(|e| lv.err(e.to_string()))
}

fn simplicial(node: &Node) -> Result<TruncatedSimplicialSet, DocumentError> {
    levels(node)
}

fn two_groupoid(node: &Node) -> Result<TwoGroupoidData, DocumentError> {
    let layers = levels(node)?;
    if layers.top() != 2 {
        return Err(node.field("levels")?.err("2-groupoid data has exactly levels 0, 1, 2"));
    }
    let mn = node.field("m")?;
    let tables = mn.array()?;
    if tables.len() != 4 {
        return Err(mn.err("expected four tables m0..m3"));
    }
    let ix = index(layers.cells(2));
    let mut m: [HornTable; 4] = Default::default();
    for (i, t) in tables.iter().enumerate() {
        m[i] = t.tuple_table([&ix, &ix, &ix], &ix)?.into_iter().collect();
    }
    Ok(TwoGroupoidData { layers, m })
}

fn groupoid(node: &Node) -> Result<FiniteGroupoid, DocumentError> {
    let objects = node.field("objects")?.ids()?;
    let arrows = node.field("arrows")?.ids()?;
    let (oi, ai) = (index(&objects), index(&arrows));
    let source = node.field("source")?.total_map(&arrows, &oi)?;
    let target = node.field("target")?.total_map(&arrows, &oi)?;
    let identity = node.field("identity")?.total_map(&objects, &ai)?;
    let inverse = node.field("inverse")?.total_map(&arrows, &ai)?;
    let cn = node.field("compose")?;
    let n = arrows.len();
    let mut compose = vec![None; n * n];
    for ([a, b], c) in cn.tuple_table([&ai, &ai], &ai)? {
        if source[a] != target[b] {
            return Err(cn.err(format!("\"{}|{}\" is not a composable pair", arrows[a], arrows[b])));
        }
        compose[a * n + b] = Some(c);
    }
    for a in 0..n {
        for b in 0..n {
            if source[a] == target[b] && compose[a * n + b].is_none() {
                return Err(cn.err(format!("map is not total: \"{}|{}\" has no value", arrows[a], arrows[b])));
            }
        }
    }
    Ok(FiniteGroupoid { objects, arrows, source, target, identity, inverse, compose })
}

fn bibundle_in(node: &Node, left: Arc<FiniteGroupoid>, right: Arc<FiniteGroupoid>) -> Result<Bibundle, DocumentError> {
    let carrier = node.field("carrier")?.ids()?;
    let ci = index(&carrier);
    let j_l = node.field("left_moment")?.total_map(&carrier, &index(&left.objects))?;
    let j_r = node.field("right_moment")?.total_map(&carrier, &index(&right.objects))?;
    let ne = carrier.len();
    let ln = node.field("left_action")?;
    let mut left_act = vec![None; left.n_arrows() * ne];
    for ([h, x], y) in ln.tuple_table([&index(&left.arrows), &ci], &ci)? {
        if left.source[h] != j_l[x] {
            return Err(ln.err(format!("\"{}|{}\" is outside the action domain", left.arrows[h], carrier[x])));
        }
        left_act[h * ne + x] = Some(y);
    }
    let rn = node.field("right_action")?;
    let ng = right.n_arrows();
    let mut right_act = vec![None; ne * ng];
    for ([x, g], y) in rn.tuple_table([&ci, &index(&right.arrows)], &ci)? {
        if right.target[g] != j_r[x] {
            return Err(rn.err(format!("\"{}|{}\" is outside the action domain", carrier[x], right.arrows[g])));
        }
        right_act[x * ng + g] = Some(y);
    }
    for x in 0..ne {
        if let Some(h) = (0..left.n_arrows()).find(|&h| left.source[h] == j_l[x] && left_act[h * ne + x].is_none()) {
            return Err(ln.err(format!("map is not total: \"{}|{}\" has no value", left.arrows[h], carrier[x])));
        }
        if let Some(g) = (0..ng).find(|&g| right.target[g] == j_r[x] && right_act[x * ng + g].is_none()) {
            return Err(rn.err(format!("map is not total: \"{}|{}\" has no value", carrier[x], right.arrows[g])));
        }
    }
    Ok(Bibundle { left, right, carrier, j_l, j_r, left_act, right_act })
}

fn bibundle(node: &Node) -> Result<Bibundle, DocumentError> {
    let left = Arc::new(groupoid(&node.field("left")?)?);
    let right = Arc::new(groupoid(&node.field("right")?)?);
    bibundle_in(node, left, right)
}

fn unitor(node: &Node, carrier: &Index, arrows: &Index) -> Result<Unitor, DocumentError> {
    node.entries()?
        .into_iter()
        .map(|(k, n)| {
            let x = *carrier.get(k).ok_or_else(|| n.err(format!("unknown ID \"{k}\"")))?;
            Ok((x, n.resolve(arrows)?))
        })
        .collect()
}

fn stacky(node: &Node) -> Result<StackyGroupoidData, DocumentError> {
    let g = Arc::new(groupoid(&node.field("groupoid")?)?);
    let base = node.field("base")?.ids()?;
    let (bi, oi, ai) = (index(&base), index(&g.objects), index(&g.arrows));
    let s = node.field("s")?.total_map(&g.objects, &bi)?;
    let t = node.field("t")?.total_map(&g.objects, &bi)?;
    let unit = node.field("unit")?.total_map(&base, &oi)?;
    let p2 = FiberPower::new(&g, &s, &t, 2);
    let multiplication = bibundle_in(&node.field("multiplication")?, p2.groupoid.clone(), g.clone())?;
    let ci = index(&multiplication.carrier);
    let an = node.field("associator")?;
    let mut associator = Associator::new();
    for (k, n) in an.entries()? {
        let pair = |text: &str| -> Result<[usize; 2], DocumentError> {
            let parts: Vec<&str> = text.split('|').collect();
            match parts[..] {
                [a, b] => match (ci.get(a), ci.get(b)) {
                    (Some(&a), Some(&b)) => Ok([a, b]),
                    _ => Err(n.err(format!("unknown ID in \"{text}\""))),
                },
                _ => Err(n.err(format!("\"{text}\" should join two IDs with '|'"))),
            }
        };
        associator.insert(pair(k)?, pair(n.str()?)?);
    }
    let left_unitor = unitor(&node.field("left_unitor")?, &ci, &ai)?;
    let right_unitor = unitor(&node.field("right_unitor")?, &ci, &ai)?;
    let inverse = node.opt_field("inverse").map(|n| bibundle_in(&n, g.clone(), g.clone())).transpose()?;
    Ok(StackyGroupoidData { groupoid: g, base, s, t, unit, multiplication, associator, left_unitor, right_unitor, inverse })
}

fn map(node: &Node) -> Result<MapDocument, DocumentError> {
    let of = node.field("of")?;
    let ln = node.field("levels")?;
    let lv = ln.array()?;
    let level_maps = |source: &TruncatedSimplicialSet, target: &TruncatedSimplicialSet| -> Result<Vec<Vec<usize>>, DocumentError> {
        if lv.len() != source.top() + 1 || target.top() < source.top() {
            return Err(ln.err(format!("expected {} level maps into a target with as many levels", source.top() + 1)));
        }
        lv.iter().enumerate().map(|(n, l)| l.total_map(source.cells(n), &index(target.cells(n)))).collect()
    };
    match of.str()? {
        "simplicial" => {
            let source = simplicial(&node.field("source")?)?;
            let target = simplicial(&node.field("target")?)?;
            let level_map = level_maps(&source, &target)?;
            Ok(MapDocument::Simplicial(SimplicialMap { source, target, level_map }))
        }
        "two_groupoid" => {
            let source = two_groupoid(&node.field("source")?)?;
            let target = two_groupoid(&node.field("target")?)?;
            let [f0, f1, f2]: [Vec<usize>; 3] = level_maps(&source.layers, &target.layers)?.try_into().expect("three levels");
            Ok(MapDocument::TwoGroupoid(StrictTwoGroupoidMap { source, target, f0, f1, f2 }))
        }
        other => Err(of.err(format!("unknown map kind \"{other}\", expected simplicial or two_groupoid"))),
    }
}
