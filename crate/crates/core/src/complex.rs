//! Finite abstract simplicial complexes over non-negative integer vertex ids.
//!
//! A [`Complex`] stores every simplex explicitly (not only the maximal ones) in
//! the canonical order "dimension first, then lexicographic vertex list". The
//! complexes handled here are small, so the explicit face set keeps the
//! deleted-product enumeration trivial.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::digest::sha256_hex;
use crate::error::{Error, Result};

pub type Vertex = u32;

/// A non-empty, strictly increasing list of vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vertex>", into = "Vec<Vertex>")]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    /// Builds a simplex from a strictly increasing vertex list.
    pub fn new(vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::MalformedSimplex {
                vertices,
                reason: "no vertices",
            });
        }
        for w in vertices.windows(2) {
            match w[0].cmp(&w[1]) {
                Ordering::Less => {}
                Ordering::Equal => {
                    return Err(Error::MalformedSimplex {
                        vertices,
                        reason: "duplicate vertex",
                    })
                }
                Ordering::Greater => {
                    return Err(Error::MalformedSimplex {
                        vertices,
                        reason: "vertices not sorted",
                    })
                }
            }
        }
        Ok(Simplex(vertices))
    }

    pub fn vertex(v: Vertex) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains_vertex(*v))
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return false,
            }
        }
        true
    }

    /// Vertex-set union. For disjoint simplices this is their join.
    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut vs: Vec<Vertex> = self.0.iter().chain(other.0.iter()).copied().collect();
        vs.sort_unstable();
        vs.dedup();
        Simplex(vs)
    }

    pub fn with_vertex(&self, v: Vertex) -> Simplex {
        self.union(&Simplex::vertex(v))
    }

    /// Codimension-one faces in canonical order. A vertex has none.
    pub fn facets(&self) -> Vec<Simplex> {
        if self.0.len() < 2 {
            return Vec::new();
        }
        let mut out: Vec<Simplex> = (0..self.0.len())
            .map(|skip| {
                Simplex(
                    self.0
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != skip)
                        .map(|(_, v)| *v)
                        .collect(),
                )
            })
            .collect();
        out.sort();
        out
    }

    /// All non-empty faces, the simplex itself included.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        assert!(n < 32, "simplex dimension too large to enumerate faces");
        (1u32..(1u32 << n))
            .map(|mask| {
                Simplex(
                    (0..n)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| self.0[i])
                        .collect(),
                )
            })
            .collect()
    }

    pub(crate) fn shifted(&self, offset: Vertex) -> Simplex {
        Simplex(self.0.iter().map(|v| v + offset).collect())
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<Vec<Vertex>> for Simplex {
    type Error = Error;
    fn try_from(v: Vec<Vertex>) -> Result<Self> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<Vertex> {
    fn from(s: Simplex) -> Self {
        s.0
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// A finite, downward-closed set of simplices with optional vertex labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Complex {
    simplices: BTreeSet<Simplex>,
    labels: BTreeMap<Vertex, String>,
}

/// On-disk form: `{"vertices": [...], "maximal": [[...]...], "labels": {"id": "text"}}`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ComplexFile {
    #[serde(default)]
    pub vertices: Vec<Vertex>,
    #[serde(default)]
    pub maximal: Vec<Vec<Vertex>>,
    #[serde(default)]
    pub labels: BTreeMap<Vertex, String>,
}

impl Complex {
    /// Downward closure of the given simplices.
    pub fn from_maximal<'a>(maximal: impl IntoIterator<Item = &'a Simplex>) -> Complex {
        let mut simplices = BTreeSet::new();
        for s in maximal {
            if simplices.contains(s) {
                continue;
            }
            simplices.extend(s.faces());
        }
        Complex {
            simplices,
            labels: BTreeMap::new(),
        }
    }

    /// Like [`Complex::from_maximal`], validating raw vertex lists first.
    pub fn from_lists(maximal: &[Vec<Vertex>]) -> Result<Complex> {
        let simplices = maximal
            .iter()
            .map(|v| Simplex::new(v.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Complex::from_maximal(&simplices))
    }

    /// `n` isolated vertices `0..n`.
    pub fn points(n: u32) -> Complex {
        let pts: Vec<Simplex> = (0..n).map(Simplex::vertex).collect();
        Complex::from_maximal(&pts)
    }

    /// The `k`-skeleton of the full simplex on vertices `0..n`.
    pub fn simplex_skeleton(n: u32, k: usize) -> Complex {
        let mut simplices = BTreeSet::new();
        let mut current: Vec<Vertex> = Vec::new();
        fn rec(
            start: Vertex,
            n: Vertex,
            k: usize,
            current: &mut Vec<Vertex>,
            out: &mut BTreeSet<Simplex>,
        ) {
            if !current.is_empty() {
                out.insert(Simplex(current.clone()));
            }
            if current.len() == k + 1 {
                return;
            }
            for v in start..n {
                current.push(v);
                rec(v + 1, n, k, current, out);
                current.pop();
            }
        }
        rec(0, n, k, &mut current, &mut simplices);
        Complex {
            simplices,
            labels: BTreeMap::new(),
        }
    }

    pub fn with_labels(mut self, labels: BTreeMap<Vertex, String>) -> Result<Complex> {
        for v in labels.keys() {
            if !self.contains(&Simplex::vertex(*v)) {
                return Err(Error::UnknownSimplex(vec![*v]));
            }
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn labels(&self) -> &BTreeMap<Vertex, String> {
        &self.labels
    }

    pub fn label(&self, v: Vertex) -> Option<&str> {
        self.labels.get(&v).map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Number of simplices of every dimension.
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn dimension(&self) -> Result<usize> {
        self.simplices
            .iter()
            .next_back()
            .map(Simplex::dimension)
            .ok_or(Error::EmptyComplex)
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices.contains(s)
    }

    /// Simplices in canonical order.
    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    pub fn simplices_of_dim(&self, d: usize) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter().filter(move |s| s.dimension() == d)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.simplices_of_dim(0).map(|s| s.0[0])
    }

    pub fn vertex_count(&self) -> usize {
        self.simplices_of_dim(0).count()
    }

    /// Per-dimension simplex counts `f_0, f_1, ...`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = Vec::new();
        for s in &self.simplices {
            let d = s.dimension();
            if f.len() <= d {
                f.resize(d + 1, 0);
            }
            f[d] += 1;
        }
        f
    }

    pub fn max_vertex(&self) -> Option<Vertex> {
        self.vertices().max()
    }

    /// Simplices that are not a proper face of another simplex.
    pub fn maximal(&self) -> Vec<Simplex> {
        let mut out: Vec<Simplex> = Vec::new();
        // Walking from the top dimension down, a simplex is maximal iff no
        // already-kept simplex contains it.
        for s in self.simplices.iter().rev() {
            if !out
                .iter()
                .any(|m| m.dimension() > s.dimension() && s.is_face_of(m))
            {
                out.push(s.clone());
            }
        }
        out.sort();
        out
    }

    /// The join `self * other`. Vertices of `other` are shifted past the
    /// largest vertex id of `self`; shifted vertices keep their label, or are
    /// labelled `r<old id>` when they had none.
    pub fn join(&self, other: &Complex) -> Result<Complex> {
        let offset = self.max_vertex().ok_or(Error::EmptyComplex)? + 1;
        if other.is_empty() {
            return Err(Error::EmptyComplex);
        }
        let shifted: Vec<Simplex> = other.simplices.iter().map(|s| s.shifted(offset)).collect();
        let mut simplices = self.simplices.clone();
        simplices.extend(shifted.iter().cloned());
        for a in &self.simplices {
            for b in &shifted {
                simplices.insert(a.union(b));
            }
        }
        let mut labels = self.labels.clone();
        for v in other.vertices() {
            let text = match other.labels.get(&v) {
                Some(l) => l.clone(),
                None => format!("r{v}"),
            };
            labels.insert(v + offset, text);
        }
        Ok(Complex { simplices, labels })
    }

    /// Join with one fresh vertex, the cone point, labelled `c`.
    pub fn cone(&self) -> Result<Complex> {
        let apex = self.max_vertex().ok_or(Error::EmptyComplex)? + 1;
        let mut out = self.join(&Complex::points(1))?;
        out.labels.insert(apex, "c".to_string());
        Ok(out)
    }

    /// Subcomplex of simplices of dimension at most `k`.
    pub fn skeleton(&self, k: usize) -> Complex {
        Complex {
            simplices: self
                .simplices
                .iter()
                .filter(|s| s.dimension() <= k)
                .cloned()
                .collect(),
            labels: self.labels.clone(),
        }
    }

    /// Image under an injective vertex map.
    pub fn relabel(&self, map: impl Fn(Vertex) -> Vertex) -> Result<Complex> {
        let mut simplices = BTreeSet::new();
        for s in &self.simplices {
            let mut vs: Vec<Vertex> = s.0.iter().map(|v| map(*v)).collect();
            vs.sort_unstable();
            simplices.insert(Simplex::new(vs)?);
        }
        let labels = self
            .labels
            .iter()
            .map(|(v, l)| (map(*v), l.clone()))
            .collect();
        Ok(Complex { simplices, labels })
    }

    /// Content hash of the simplex set (labels excluded).
    pub fn digest(&self) -> String {
        let lists: Vec<&[Vertex]> = self.simplices.iter().map(|s| s.vertices()).collect();
        sha256_hex(&serde_json::to_vec(&lists).expect("vertex lists serialize"))
    }

    pub fn to_file(&self) -> ComplexFile {
        ComplexFile {
            vertices: self.vertices().collect(),
            maximal: self.maximal().into_iter().map(Vec::from).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn from_file(file: &ComplexFile) -> Result<Complex> {
        let mut lists = file.maximal.clone();
        lists.extend(file.vertices.iter().map(|v| vec![*v]));
        Complex::from_lists(&lists)?.with_labels(file.labels.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("complex serializes")
    }

    pub fn from_json(text: &str) -> Result<Complex> {
        let file: ComplexFile = serde_json::from_str(text)?;
        Complex::from_file(&file)
    }
}
