//! Catalog obstructor complexes and the cone/join constructions, each with
//! its explicit pair system Σ.

use serde::{Deserialize, Serialize};

use crate::certifier::{certify, Certificate, PairSystem};
use crate::complex::{Complex, ComplexFile, Simplex, Vertex};
use crate::deleted_product::UnorderedCell;
use crate::error::{Error, Result};
use crate::geometry::GeneralPositionMap;

/// A complex, a pair system on it, and the expression that produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructorSpec {
    pub complex: Complex,
    pub sigma: PairSystem,
    pub provenance: String,
}

/// `{"complex": {...}, "m": 2, "sigma": [[[0,3],[1,4]], ...], "provenance": "vk(2)"}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpecFile {
    pub complex: ComplexFile,
    pub m: usize,
    pub sigma: Vec<(Vec<Vertex>, Vec<Vertex>)>,
    #[serde(default)]
    pub provenance: String,
}

impl ObstructorSpec {
    pub fn new(complex: Complex, sigma: PairSystem, provenance: impl Into<String>) -> Result<Self> {
        sigma.validate(&complex)?;
        Ok(ObstructorSpec {
            complex,
            sigma,
            provenance: provenance.into(),
        })
    }

    pub fn m(&self) -> usize {
        self.sigma.m()
    }

    pub fn certify(&self, map: Option<&GeneralPositionMap>) -> Result<Certificate> {
        certify(&self.complex, &self.sigma, map)
    }

    pub fn to_file(&self) -> SpecFile {
        SpecFile {
            complex: self.complex.to_file(),
            m: self.m(),
            sigma: self.sigma.to_lists(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn from_file(file: &SpecFile) -> Result<Self> {
        let complex = Complex::from_file(&file.complex)?;
        let sigma = PairSystem::from_lists(file.m, &file.sigma)?;
        Self::new(complex, sigma, file.provenance.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("spec serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(text)?)
    }
}

/// Three points with all three vertex pairs, m = 0.
pub fn points3() -> ObstructorSpec {
    let complex = Complex::points(3);
    let sigma = PairSystem::from_lists(0, &[(vec![0], vec![1]), (vec![0], vec![2]), (vec![1], vec![2])])
        .expect("vertex pairs are disjoint");
    ObstructorSpec {
        complex,
        sigma,
        provenance: "points3".into(),
    }
}

/// Cone over S: `{cσ, τ}` and `{σ, cτ}` for each `{σ, τ} ∈ Σ`, m + 1.
pub fn cone_spec(spec: &ObstructorSpec) -> Result<ObstructorSpec> {
    let apex = spec.complex.max_vertex().ok_or(Error::EmptyComplex)? + 1;
    let complex = spec.complex.cone()?;
    let mut pairs = Vec::with_capacity(2 * spec.sigma.len());
    for cell in spec.sigma.cells() {
        let (a, b) = (cell.first(), cell.second());
        pairs.push(UnorderedCell::new(a.with_vertex(apex), b.clone())?);
        pairs.push(UnorderedCell::new(a.clone(), b.with_vertex(apex))?);
    }
    let sigma = PairSystem::new(spec.m() + 1, pairs)?;
    ObstructorSpec::new(complex, sigma, format!("cone({})", spec.provenance))
}

/// Join of S1 and S2: for `{σ¹, τ¹} ∈ Σ¹` and `{σ², τ²} ∈ Σ²` the pairs
/// `{σ¹*σ², τ¹*τ²}` and `{σ¹*τ², τ¹*σ²}`, m₁ + m₂ + 2.
pub fn join_spec(left: &ObstructorSpec, right: &ObstructorSpec) -> Result<ObstructorSpec> {
    let offset = left.complex.max_vertex().ok_or(Error::EmptyComplex)? + 1;
    let complex = left.complex.join(&right.complex)?;
    let shift = |s: &Simplex| {
        Simplex::new(s.vertices().iter().map(|v| v + offset).collect()).expect("shift keeps order")
    };
    let mut pairs = Vec::with_capacity(2 * left.sigma.len() * right.sigma.len());
    for p in left.sigma.cells() {
        for q in right.sigma.cells() {
            let (a, b) = (p.first(), p.second());
            let (c, d) = (shift(q.first()), shift(q.second()));
            pairs.push(UnorderedCell::new(a.union(&c), b.union(&d))?);
            pairs.push(UnorderedCell::new(a.union(&d), b.union(&c))?);
        }
    }
    let sigma = PairSystem::new(left.m() + right.m() + 2, pairs)?;
    ObstructorSpec::new(
        complex,
        sigma,
        format!("join({}, {})", left.provenance, right.provenance),
    )
}

/// The j-fold join of three-point sets, m = 2j − 2.
pub fn vk(j: u32) -> Result<ObstructorSpec> {
    if j < 1 {
        return Err(Error::OutOfRange {
            what: "join count",
            value: i64::from(j),
            range: ">= 1".into(),
        });
    }
    let base = points3();
    let mut spec = base.clone();
    for _ in 1..j {
        spec = join_spec(&spec, &base)?;
    }
    spec.provenance = format!("vk({j})");
    Ok(spec)
}

/// The n-skeleton of the simplex on 2n + 3 vertices with Σ = all pairs of
/// disjoint n-simplices, m = 2n.
pub fn flores(n: u32) -> Result<ObstructorSpec> {
    if n < 1 {
        return Err(Error::OutOfRange {
            what: "skeleton dimension",
            value: i64::from(n),
            range: ">= 1".into(),
        });
    }
    let complex = Complex::simplex_skeleton(2 * n + 3, n as usize);
    let top: Vec<&Simplex> = complex.simplices_of_dim(n as usize).collect();
    let mut pairs = Vec::new();
    for (i, a) in top.iter().enumerate() {
        for b in &top[i + 1..] {
            if a.is_disjoint(b) {
                pairs.push(UnorderedCell::new((*a).clone(), (*b).clone())?);
            }
        }
    }
    let sigma = PairSystem::new(2 * n as usize, pairs)?;
    ObstructorSpec::new(complex, sigma, format!("flores({n})"))
}

/// Parses and evaluates `points3 | vk(j) | flores(n) | cone(E) | join(E, E)`.
pub fn build(expr: &str) -> Result<ObstructorSpec> {
    build_with_limit(expr, None)
}

/// As [`build`], rejecting `flores(n)` for `n > max_flores`.
pub fn build_with_limit(expr: &str, max_flores: Option<u32>) -> Result<ObstructorSpec> {
    let mut p = ExprParser {
        src: expr,
        pos: 0,
        max_flores,
    };
    let spec = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(Error::parse(p.pos + 1, "unexpected trailing input"));
    }
    Ok(spec)
}

struct ExprParser<'a> {
    src: &'a str,
    pos: usize,
    max_flores: Option<u32>,
}

impl ExprParser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(Error::parse(self.pos + 1, format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Result<(usize, &str)> {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(Error::parse(start + 1, "expected a construction name"));
        }
        self.pos += len;
        Ok((start, &self.src[start..start + len]))
    }

    fn integer(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.rest().len());
        self.pos += len;
        self.src[start..start + len]
            .parse()
            .map_err(|_| Error::parse(start + 1, "expected a non-negative integer"))
    }

    fn expr(&mut self) -> Result<ObstructorSpec> {
        let (start, name) = self.ident()?;
        match name {
            "points3" => Ok(points3()),
            "vk" | "flores" => {
                let name = name.to_string();
                self.expect('(')?;
                let col = self.pos;
                let n = self.integer()?;
                self.expect(')')?;
                if name == "flores" && self.max_flores.is_some_and(|cap| n > cap) {
                    return Err(Error::parse(
                        col + 1,
                        format!("flores({n}) exceeds the size cap of {}", self.max_flores.unwrap_or(0)),
                    ));
                }
                if name == "vk" {
                    vk(n)
                } else {
                    flores(n)
                }
            }
            "cone" => {
                self.expect('(')?;
                let inner = self.expr()?;
                self.expect(')')?;
                cone_spec(&inner)
            }
            "join" => {
                self.expect('(')?;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(')')?;
                join_spec(&a, &b)
            }
            other => Err(Error::parse(
                start + 1,
                format!("unknown construction `{other}` (expected points3, vk, flores, cone, join)"),
            )),
        }
    }
}
