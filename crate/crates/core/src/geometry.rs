//! General-position maps of vertex sets into ℚ^m and exact intersection
//! counting for pairs of disjoint simplices whose dimensions sum to `m`.
//!
//! Everything here is exact rational arithmetic.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{Complex, Simplex, Vertex};
use crate::deleted_product::UnorderedCell;
use crate::digest::sha256_hex;
use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidMap(format!("not a rational: {text:?}"));
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Always `"p/q"` in lowest terms with a positive denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A vertex placement in ℚ^m, either on the moment curve
/// `t ↦ (t, t², …, t^m)` or given explicitly.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralPositionMap {
    m: usize,
    params: Option<BTreeMap<Vertex, Rational>>,
    points: BTreeMap<Vertex, Vec<Rational>>,
}

/// Serialized form: `{"m": 2, "params": {"0": "0/1", ...}}` for moment-curve
/// maps, `{"m": 2, "points": {"0": ["1/1", "3/2"], ...}}` for explicit ones.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapFile {
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<BTreeMap<Vertex, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<BTreeMap<Vertex, Vec<String>>>,
}

fn moment_point(t: &Rational, m: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(m);
    let mut power = t.clone();
    for _ in 0..m {
        out.push(power.clone());
        power = &power * t;
    }
    out
}

impl GeneralPositionMap {
    /// Moment-curve map with explicit per-vertex parameters.
    pub fn moment_with(m: usize, params: BTreeMap<Vertex, Rational>) -> Result<Self> {
        let distinct: BTreeSet<&Rational> = params.values().collect();
        if distinct.len() != params.len() {
            return Err(Error::InvalidMap("duplicate moment-curve parameter".into()));
        }
        let points = params
            .iter()
            .map(|(v, t)| (*v, moment_point(t, m)))
            .collect();
        Ok(GeneralPositionMap {
            m,
            params: Some(params),
            points,
        })
    }

    /// Moment-curve map on the vertices of `k`. Without `params`, the i-th
    /// vertex in increasing id order gets parameter `i`; with them, one
    /// parameter per vertex in that same order.
    pub fn moment(k: &Complex, m: usize, params: Option<&[Rational]>) -> Result<Self> {
        let vertices: Vec<Vertex> = k.vertices().collect();
        let values: Vec<Rational> = match params {
            None => (0..vertices.len() as i64).map(int).collect(),
            Some(p) if p.len() == vertices.len() => p.to_vec(),
            Some(p) => {
                return Err(Error::DimensionMismatch {
                    expected: vertices.len(),
                    found: p.len(),
                })
            }
        };
        Self::moment_with(m, vertices.into_iter().zip(values).collect())
    }

    /// Moment-curve map with random distinct parameters `p/q`,
    /// `|p| ≤ 10⁴`, `1 ≤ q ≤ 100`.
    pub fn random_moment<R: Rng + ?Sized>(k: &Complex, m: usize, rng: &mut R) -> Self {
        let mut used = BTreeSet::new();
        let mut params = BTreeMap::new();
        for v in k.vertices() {
            loop {
                let t = Rational::new(
                    BigInt::from(rng.gen_range(-10_000i64..=10_000)),
                    BigInt::from(rng.gen_range(1i64..=100)),
                );
                if used.insert(t.clone()) {
                    params.insert(v, t);
                    break;
                }
            }
        }
        Self::moment_with(m, params).expect("parameters are distinct")
    }

    /// Explicit vertex images. For `m ≥ 1` the images must be distinct.
    pub fn explicit(m: usize, points: BTreeMap<Vertex, Vec<Rational>>) -> Result<Self> {
        for (v, p) in &points {
            if p.len() != m {
                return Err(Error::InvalidMap(format!(
                    "vertex {v} has {} coordinates, expected {m}",
                    p.len()
                )));
            }
        }
        if m > 0 {
            let distinct: BTreeSet<&Vec<Rational>> = points.values().collect();
            if distinct.len() != points.len() {
                return Err(Error::InvalidMap("two vertices share an image".into()));
            }
        }
        Ok(GeneralPositionMap {
            m,
            params: None,
            points,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_moment_curve(&self) -> bool {
        self.params.is_some()
    }

    pub fn parameter(&self, v: Vertex) -> Option<&Rational> {
        self.params.as_ref()?.get(&v)
    }

    pub fn point(&self, v: Vertex) -> Option<&[Rational]> {
        self.points.get(&v).map(Vec::as_slice)
    }

    /// Checks that every vertex of `k` has an image.
    pub fn covers(&self, k: &Complex) -> Result<()> {
        match k.vertices().find(|v| !self.points.contains_key(v)) {
            Some(v) => Err(Error::InvalidMap(format!("vertex {v} has no image"))),
            None => Ok(()),
        }
    }

    pub fn to_file(&self) -> MapFile {
        match &self.params {
            Some(params) => MapFile {
                m: self.m,
                params: Some(
                    params
                        .iter()
                        .map(|(v, t)| (*v, format_rational(t)))
                        .collect(),
                ),
                points: None,
            },
            None => MapFile {
                m: self.m,
                params: None,
                points: Some(
                    self.points
                        .iter()
                        .map(|(v, p)| (*v, p.iter().map(format_rational).collect()))
                        .collect(),
                ),
            },
        }
    }

    pub fn from_file(file: &MapFile) -> Result<Self> {
        match (&file.params, &file.points) {
            (Some(params), None) => {
                let parsed = params
                    .iter()
                    .map(|(v, t)| Ok((*v, parse_rational(t)?)))
                    .collect::<Result<_>>()?;
                Self::moment_with(file.m, parsed)
            }
            (None, Some(points)) => {
                let parsed = points
                    .iter()
                    .map(|(v, p)| {
                        Ok((*v, p.iter().map(|x| parse_rational(x)).collect::<Result<_>>()?))
                    })
                    .collect::<Result<_>>()?;
                Self::explicit(file.m, parsed)
            }
            _ => Err(Error::InvalidMap(
                "exactly one of \"params\" or \"points\" is required".into(),
            )),
        }
    }

    pub fn digest(&self) -> String {
        sha256_hex(&serde_json::to_vec(&self.to_file()).expect("map serializes"))
    }

    fn image(&self, v: Vertex) -> Result<&[Rational]> {
        self.point(v)
            .ok_or_else(|| Error::InvalidMap(format!("vertex {v} has no image")))
    }
}

fn check_pair(sigma: &Simplex, tau: &Simplex, m: usize) -> Result<()> {
    if !sigma.is_disjoint(tau) {
        return Err(Error::InvalidPairSystem(format!(
            "simplices {sigma} and {tau} share a vertex"
        )));
    }
    if sigma.dimension() + tau.dimension() != m {
        return Err(Error::InvalidPairSystem(format!(
            "dim {sigma} + dim {tau} = {} but the target dimension is {m}",
            sigma.dimension() + tau.dimension()
        )));
    }
    Ok(())
}

enum Solution {
    Unique(Vec<Rational>),
    Inconsistent,
    Underdetermined,
}

/// Solves the square system `a · x = b` by Gauss–Jordan elimination.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Solution {
    let n = b.len();
    let mut row = 0;
    for col in 0..n {
        let Some(pivot) = (row..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, pivot);
        b.swap(row, pivot);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x = &*x * &inv;
        }
        b[row] = &b[row] * &inv;
        let pivot_row = a[row].clone();
        for r in 0..n {
            if r == row || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for (x, p) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                *x -= &factor * p;
            }
            let delta = &factor * &b[row];
            b[r] -= delta;
        }
        row += 1;
    }
    if b[row..].iter().any(|x| !x.is_zero()) {
        Solution::Inconsistent
    } else if row < n {
        Solution::Underdetermined
    } else {
        Solution::Unique(b)
    }
}

/// The default general-position map: vertices on the moment curve
/// `t ↦ (t, t², …, tᵐ)`, see [`GeneralPositionMap::moment`].
pub fn moment_map(k: &Complex, m: usize, params: Option<&[Rational]>) -> Result<GeneralPositionMap> {
    GeneralPositionMap::moment(k, m, params)
}

/// Number of points in the intersection of the open images `f(σ)` and `f(τ)`.
///
/// Solves `Σ λᵢ uᵢ = Σ μⱼ vⱼ`, `Σ λᵢ = Σ μⱼ = 1` exactly. The system is
/// square because `dim σ + dim τ = m`. An inconsistent system means the
/// affine hulls are disjoint. Hulls meeting in more than a point, or a
/// solution with a zero coefficient, mean the map is not in general
/// position for this pair. In ℝ⁰ every pair meets once.
pub fn pair_intersections(sigma: &Simplex, tau: &Simplex, f: &GeneralPositionMap) -> Result<u64> {
    let m = f.m;
    check_pair(sigma, tau, m)?;
    let us = sigma
        .vertices()
        .iter()
        .map(|v| f.image(*v))
        .collect::<Result<Vec<_>>>()?;
    let vs = tau
        .vertices()
        .iter()
        .map(|v| f.image(*v))
        .collect::<Result<Vec<_>>>()?;
    if m == 0 {
        return Ok(1);
    }
    let n = m + 2;
    let mut a = vec![vec![Rational::zero(); n]; n];
    for (j, u) in us.iter().enumerate() {
        for (i, x) in u.iter().enumerate() {
            a[i][j] = x.clone();
        }
        a[m][j] = Rational::one();
    }
    for (j, v) in vs.iter().enumerate() {
        let col = us.len() + j;
        for (i, x) in v.iter().enumerate() {
            a[i][col] = -x.clone();
        }
        a[m + 1][col] = Rational::one();
    }
    let mut b = vec![Rational::zero(); n];
    b[m] = Rational::one();
    b[m + 1] = Rational::one();

    let degenerate = |reason| Error::DegeneratePosition {
        sigma: sigma.vertices().to_vec(),
        tau: tau.vertices().to_vec(),
        reason,
    };
    let coeffs = match solve_square(a, b) {
        Solution::Unique(x) => x,
        Solution::Inconsistent => return Ok(0),
        Solution::Underdetermined => return Err(degenerate("affine hulls are not transverse")),
    };
    if coeffs.iter().any(Zero::is_zero) {
        return Err(degenerate("images meet on a proper face"));
    }
    Ok(u64::from(coeffs.iter().all(Signed::is_positive)))
}

/// On the moment curve the images of σ and τ (with `dim σ + dim τ = m`)
/// cross iff their parameters alternate when sorted.
pub fn alternation_predicate(sigma: &Simplex, tau: &Simplex, f: &GeneralPositionMap) -> Result<bool> {
    check_pair(sigma, tau, f.m)?;
    if f.params.is_none() {
        return Err(Error::InvalidMap(
            "alternation test needs a moment-curve map".into(),
        ));
    }
    let param = |v: Vertex| {
        f.parameter(v)
            .ok_or_else(|| Error::InvalidMap(format!("vertex {v} has no parameter")))
    };
    let mut tagged: Vec<(&Rational, bool)> = Vec::with_capacity(f.m + 2);
    for v in sigma.vertices() {
        tagged.push((param(*v)?, true));
    }
    for v in tau.vertices() {
        tagged.push((param(*v)?, false));
    }
    tagged.sort();
    Ok(tagged.windows(2).all(|w| w[0].1 != w[1].1))
}

/// Total `Σ |f(σᵢ) ∩ f(τᵢ)|` over the given pairs.
pub fn total_intersections<'a>(
    pairs: impl IntoIterator<Item = &'a UnorderedCell>,
    f: &GeneralPositionMap,
) -> Result<u64> {
    pairs
        .into_iter()
        .map(|c| pair_intersections(c.first(), c.second(), f))
        .sum()
}

/// Parity of [`total_intersections`]; `true` is the odd class.
pub fn total_parity<'a>(
    pairs: impl IntoIterator<Item = &'a UnorderedCell>,
    f: &GeneralPositionMap,
) -> Result<bool> {
    Ok(total_intersections(pairs, f)? % 2 == 1)
}
