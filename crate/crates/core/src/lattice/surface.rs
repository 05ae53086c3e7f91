//! Combinatorial maps of closed oriented surfaces.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// One traversal of an edge: `(edge id, +1 | -1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeUse(pub String, pub i8);

impl EdgeUse {
    pub fn new(edge: impl Into<String>, sign: i8) -> Self {
        Self(edge.into(), sign)
    }

    pub fn edge(&self) -> &str {
        &self.0
    }

    pub fn sign(&self) -> i8 {
        self.1
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.clone(), -self.1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Face {
    pub word: Vec<EdgeUse>,
    #[serde(serialize_with = "ser_area", deserialize_with = "de_area")]
    pub area: Rational64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedLoop {
    pub name: String,
    pub word: Vec<EdgeUse>,
}

fn ser_area<S: Serializer>(a: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if a.is_integer() {
        s.serialize_i64(*a.numer())
    } else {
        s.serialize_str(&format!("{}/{}", a.numer(), a.denom()))
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AreaWire {
    Int(i64),
    Float(f64),
    Text(String),
}

fn de_area<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational64, D::Error> {
    match AreaWire::deserialize(d)? {
        AreaWire::Int(n) => Ok(Rational64::from_integer(n)),
        AreaWire::Float(x) => Rational64::approximate_float(x)
            .ok_or_else(|| D::Error::custom(format!("area {x} is not representable as a ratio"))),
        AreaWire::Text(t) => parse_rational(&t).map_err(D::Error::custom),
    }
}

/// Parses `"p/q"`, `"p"` or a decimal literal.
pub(crate) fn parse_rational(text: &str) -> std::result::Result<Rational64, String> {
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| format!("bad numerator in `{t}`"))?;
        let q: i64 = q.trim().parse().map_err(|_| format!("bad denominator in `{t}`"))?;
        if q == 0 {
            return Err(format!("zero denominator in `{t}`"));
        }
        return Ok(Rational64::new(p, q));
    }
    if let Ok(n) = t.parse::<i64>() {
        return Ok(Rational64::from_integer(n));
    }
    let x: f64 = t.parse().map_err(|_| format!("`{t}` is not a number"))?;
    Rational64::approximate_float(x).ok_or_else(|| format!("`{t}` is not representable as a ratio"))
}

/// A closed oriented surface glued from faces along edges, with areas kept as
/// exact rationals of a base unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceMap {
    pub genus: u32,
    pub edges: Vec<String>,
    pub faces: Vec<Face>,
    #[serde(default)]
    pub loops: Vec<NamedLoop>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Vertex structure of a validated map: for every edge, the vertex classes of
/// its tail and head.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertices {
    pub count: usize,
    /// `(tail, head)` per edge, indexed like `SurfaceMap::edges`.
    pub ends: Vec<(usize, usize)>,
}

impl SurfaceMap {
    pub fn from_json(text: &str) -> Result<Self> {
        let map: SurfaceMap =
            serde_json::from_str(text).map_err(|e| Error::InvalidSurfaceMap(e.to_string()))?;
        map.validate()?;
        Ok(map)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("surface maps serialize")
    }

    /// A sphere cut by one simple loop `gamma` (a single edge at a single
    /// vertex) into faces of areas `r1` (inside) and `r2` (outside).
    pub fn sphere_simple_loop(r1: Rational64, r2: Rational64) -> Result<Self> {
        let map = Self {
            genus: 0,
            edges: vec!["e".into()],
            faces: vec![
                Face {
                    word: vec![EdgeUse::new("e", 1)],
                    area: r1,
                },
                Face {
                    word: vec![EdgeUse::new("e", -1)],
                    area: r2,
                },
            ],
            loops: vec![NamedLoop {
                name: "gamma".into(),
                word: vec![EdgeUse::new("e", 1)],
            }],
        };
        map.validate()?;
        Ok(map)
    }

    /// The standard `2h`-gon `a1 b1 a1^-1 b1^-1 ... ah bh ah^-1 bh^-1` with one face.
    pub fn genus_polygon(genus: u32, area: Rational64) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidSurfaceMap(
                "the polygon model needs genus >= 1; use sphere_simple_loop for the sphere".into(),
            ));
        }
        let mut edges = Vec::new();
        let mut word = Vec::new();
        for i in 1..=genus {
            let (a, b) = (format!("a{i}"), format!("b{i}"));
            word.extend([
                EdgeUse::new(a.clone(), 1),
                EdgeUse::new(b.clone(), 1),
                EdgeUse::new(a.clone(), -1),
                EdgeUse::new(b.clone(), -1),
            ]);
            edges.push(a);
            edges.push(b);
        }
        let map = Self {
            genus,
            edges,
            faces: vec![Face { word, area }],
            loops: Vec::new(),
        };
        map.validate()?;
        Ok(map)
    }

    pub fn total_area(&self) -> Rational64 {
        self.faces.iter().map(|f| f.area).sum()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e == id)
    }

    pub fn loop_word(&self, name: &str) -> Option<&[EdgeUse]> {
        self.loops.iter().find(|l| l.name == name).map(|l| l.word.as_slice())
    }

    pub fn euler_characteristic(&self) -> Result<i64> {
        let v = self.vertices()?.count as i64;
        Ok(v - self.edges.len() as i64 + self.faces.len() as i64)
    }

    /// Checks that the map is a closed oriented surface of the stated genus
    /// and that every named loop is a closed edge path.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSurfaceMap(m));
        let ids: BTreeSet<&str> = self.edges.iter().map(String::as_str).collect();
        if ids.len() != self.edges.len() {
            return bad("edge ids must be unique".into());
        }
        if self.faces.is_empty() {
            return bad("a surface needs at least one face".into());
        }
        let mut seen: BTreeMap<&str, Vec<i8>> = BTreeMap::new();
        for (i, face) in self.faces.iter().enumerate() {
            if face.area <= Rational64::zero() {
                return bad(format!("face {i} has non-positive area {}", face.area));
            }
            if face.word.is_empty() {
                return bad(format!("face {i} has an empty boundary word"));
            }
            for u in &face.word {
                if !ids.contains(u.edge()) {
                    return bad(format!("face {i} uses unknown edge `{}`", u.edge()));
                }
                if u.sign() != 1 && u.sign() != -1 {
                    return bad(format!("orientation of `{}` must be +1 or -1", u.edge()));
                }
                seen.entry(u.edge()).or_default().push(u.sign());
            }
        }
        for e in &self.edges {
            match seen.get(e.as_str()).map(Vec::as_slice) {
                Some([a, b]) if a + b == 0 => {}
                Some([_, _]) => {
                    return bad(format!(
                        "edge `{e}` is traversed twice in the same direction; the surface is not oriented"
                    ))
                }
                Some(uses) => return bad(format!("edge `{e}` appears {} times, expected 2", uses.len())),
                None => return bad(format!("edge `{e}` appears 0 times, expected 2")),
            }
        }
        let chi = self.euler_characteristic()?;
        let expected = 2 - 2 * self.genus as i64;
        if chi != expected {
            return bad(format!(
                "Euler characteristic V - E + F = {chi} does not match genus {} (expected {expected})",
                self.genus
            ));
        }
        let verts = self.vertices()?;
        for l in &self.loops {
            self.check_closed_path(&l.word, &verts)
                .map_err(|m| Error::InvalidSurfaceMap(format!("loop `{}`: {m}", l.name)))?;
        }
        Ok(())
    }

    /// Vertex classes from the face boundary cycles: in every word the head of
    /// one traversal is the tail of the next.
    pub fn vertices(&self) -> Result<Vertices> {
        let n = self.edges.len();
        // slot 2i = tail of edge i, 2i+1 = head
        let mut uf = UnionFind::new(2 * n);
        let index: BTreeMap<&str, usize> =
            self.edges.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
        let slots = |u: &EdgeUse| -> Result<(usize, usize)> {
            let i = *index
                .get(u.edge())
                .ok_or_else(|| Error::InvalidSurfaceMap(format!("unknown edge `{}`", u.edge())))?;
            Ok(if u.sign() > 0 { (2 * i, 2 * i + 1) } else { (2 * i + 1, 2 * i) })
        };
        for face in &self.faces {
            let len = face.word.len();
            for k in 0..len {
                let (_, end) = slots(&face.word[k])?;
                let (start, _) = slots(&face.word[(k + 1) % len])?;
                uf.union(end, start);
            }
        }
        let mut labels = BTreeMap::new();
        let mut ends = Vec::with_capacity(n);
        for i in 0..n {
            let mut label = |slot| {
                let root = uf.find(slot);
                let next = labels.len();
                *labels.entry(root).or_insert(next)
            };
            let tail = label(2 * i);
            let head = label(2 * i + 1);
            ends.push((tail, head));
        }
        Ok(Vertices {
            count: labels.len(),
            ends,
        })
    }

    fn check_closed_path(&self, word: &[EdgeUse], verts: &Vertices) -> std::result::Result<(), String> {
        if word.is_empty() {
            return Err("empty edge word".into());
        }
        let ends = |u: &EdgeUse| -> std::result::Result<(usize, usize), String> {
            let i = self.edge_index(u.edge()).ok_or(format!("unknown edge `{}`", u.edge()))?;
            let (t, h) = verts.ends[i];
            Ok(if u.sign() > 0 { (t, h) } else { (h, t) })
        };
        for k in 0..word.len() {
            let (_, end) = ends(&word[k])?;
            let (start, _) = ends(&word[(k + 1) % word.len()])?;
            if end != start {
                return Err(format!("traversal {k} ends where traversal {} does not start", k + 1));
            }
        }
        Ok(())
    }

    /// Splits face `face` by one new edge into two faces with areas
    /// `split.0 * area` and `split.1 * area`.
    ///
    /// The new edge runs between the corner before the first traversal and the
    /// corner before traversal `len / 2` (the same corner for one-edge faces).
    pub fn subdivide(&self, face: usize, split: (Rational64, Rational64)) -> Result<Self> {
        let (p, q) = split;
        if p <= Rational64::zero() || q <= Rational64::zero() || p + q != Rational64::from_integer(1) {
            return Err(Error::InvalidInput(format!(
                "split fractions must be positive and sum to 1, got ({p}, {q})"
            )));
        }
        let old = self
            .faces
            .get(face)
            .ok_or_else(|| Error::InvalidInput(format!("face {face} does not exist ({} faces)", self.faces.len())))?;
        let mut n = self.edges.len();
        let id = loop {
            let candidate = format!("s{n}");
            if self.edge_index(&candidate).is_none() {
                break candidate;
            }
            n += 1;
        };
        let k = old.word.len() / 2;
        let mut first: Vec<EdgeUse> = old.word[..k].to_vec();
        first.push(EdgeUse::new(id.clone(), 1));
        let mut second: Vec<EdgeUse> = old.word[k..].to_vec();
        second.push(EdgeUse::new(id.clone(), -1));
        let mut out = self.clone();
        out.edges.push(id);
        out.faces[face] = Face {
            word: first,
            area: old.area * p,
        };
        out.faces.insert(
            face + 1,
            Face {
                word: second,
                area: old.area * q,
            },
        );
        out.validate()?;
        Ok(out)
    }

    /// Face areas as floating point numbers.
    pub fn face_areas(&self) -> Vec<f64> {
        self.faces
            .iter()
            .map(|f| f.area.to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}
