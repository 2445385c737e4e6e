//! Decides whether a pair system Σ makes a complex K an m-obstructor complex:
//!
//! 1. Σ is a mod-2 cycle in the unordered deleted product;
//! 2. for a general-position map `f: K → ℝ^m`, `Σ |f(σᵢ) ∩ f(τᵢ)|` is odd;
//! 3. every m-simplex σ is paired in Σ with an even number of vertices.
//!
//! Malformed Σ (pairs that intersect, wrong dimension sums, simplices outside
//! K, `dim K > m`) is rejected up front as an input error, separately from the
//! three mathematical conditions.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::complex::{Complex, Simplex, Vertex};
use crate::deleted_product::{DeletedProduct, UnorderedCell};
use crate::digest::sha256_hex;
use crate::error::{Error, Result};
use crate::geometry::{pair_intersections, GeneralPositionMap, MapFile};

/// A set of unordered pairs of disjoint simplices with dimension sum `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSystem {
    m: usize,
    pairs: BTreeSet<UnorderedCell>,
}

impl PairSystem {
    /// Rejects pairs of the wrong dimension and repeated pairs.
    pub fn new(m: usize, pairs: impl IntoIterator<Item = UnorderedCell>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for cell in pairs {
            if cell.dimension() != m {
                return Err(Error::InvalidPairSystem(format!(
                    "pair {cell} has dimension sum {}, expected {m}",
                    cell.dimension()
                )));
            }
            if let Some(dup) = set.replace(cell) {
                return Err(Error::InvalidPairSystem(format!("pair {dup} listed twice")));
            }
        }
        Ok(PairSystem { m, pairs: set })
    }

    pub fn from_lists(m: usize, pairs: &[(Vec<Vertex>, Vec<Vertex>)]) -> Result<Self> {
        let cells = pairs
            .iter()
            .map(|(a, b)| UnorderedCell::new(Simplex::new(a.clone())?, Simplex::new(b.clone())?))
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, cells)
    }

    /// Every m-cell of the deleted product of `k`.
    pub fn all_pairs(k: &Complex, m: usize) -> PairSystem {
        let d = DeletedProduct::build(k);
        PairSystem {
            m,
            pairs: d.cells(m).iter().cloned().collect(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, cell: &UnorderedCell) -> bool {
        self.pairs.contains(cell)
    }

    pub fn cells(&self) -> impl Iterator<Item = &UnorderedCell> {
        self.pairs.iter()
    }

    pub fn without(&self, cell: &UnorderedCell) -> PairSystem {
        let mut out = self.clone();
        out.pairs.remove(cell);
        out
    }

    /// Checks the structural preconditions against `k`.
    pub fn validate(&self, k: &Complex) -> Result<()> {
        let dim = k.dimension()?;
        if dim > self.m {
            return Err(Error::InvalidPairSystem(format!(
                "complex has dimension {dim} > m = {}",
                self.m
            )));
        }
        for cell in &self.pairs {
            for s in [cell.first(), cell.second()] {
                if !k.contains(s) {
                    return Err(Error::InvalidPairSystem(format!(
                        "simplex {s} of pair {cell} is not in the complex"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_lists(&self) -> Vec<(Vec<Vertex>, Vec<Vertex>)> {
        self.pairs
            .iter()
            .map(|c| (c.first().vertices().to_vec(), c.second().vertices().to_vec()))
            .collect()
    }

    pub fn digest(&self) -> String {
        let body = (self.m, self.to_lists());
        sha256_hex(&serde_json::to_vec(&body).expect("pair lists serialize"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CycleCheck {
    Pass,
    /// An (m−1)-cell that is a face of an odd number of cells of Σ.
    Fail { witness: UnorderedCell, incidence: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct ParityCheck {
    pub pass: bool,
    pub count: u64,
    pub map: MapFile,
    pub map_digest: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum EvennessCheck {
    Pass,
    /// An m-simplex paired with an odd number of vertices.
    Fail { witness: Simplex, count: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Obstructor,
    NotObstructor,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub complex_digest: String,
    pub sigma_digest: String,
    pub m: usize,
    pub pair_count: usize,
    pub condition1: CycleCheck,
    pub condition2: ParityCheck,
    pub condition3: EvennessCheck,
    pub verdict: Verdict,
    pub statement: String,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Obstructor
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// Condition 1: the mod-2 boundary of Σ vanishes.
pub fn check_cycle(k: &Complex, sigma: &PairSystem) -> Result<CycleCheck> {
    sigma.validate(k)?;
    let mut incidence: BTreeMap<UnorderedCell, usize> = BTreeMap::new();
    for cell in sigma.cells() {
        for face in cell.facets() {
            *incidence.entry(face).or_default() += 1;
        }
    }
    Ok(match incidence.into_iter().find(|(_, n)| n % 2 == 1) {
        Some((witness, incidence)) => CycleCheck::Fail { witness, incidence },
        None => CycleCheck::Pass,
    })
}

/// Condition 2 on `f`, or on the default moment-curve map when `f` is `None`.
pub fn check_parity(
    k: &Complex,
    sigma: &PairSystem,
    f: Option<&GeneralPositionMap>,
) -> Result<ParityCheck> {
    sigma.validate(k)?;
    let default;
    let f = match f {
        Some(f) => f,
        None => {
            default = GeneralPositionMap::moment(k, sigma.m, None)?;
            &default
        }
    };
    if f.m() != sigma.m {
        return Err(Error::InvalidMap(format!(
            "map targets dimension {} but Σ has m = {}",
            f.m(),
            sigma.m
        )));
    }
    f.covers(k)?;
    let mut count = 0;
    for cell in sigma.cells() {
        count += pair_intersections(cell.first(), cell.second(), f)?;
    }
    Ok(ParityCheck {
        pass: count % 2 == 1,
        count,
        map: f.to_file(),
        map_digest: f.digest(),
    })
}

/// Condition 3. Passes vacuously when K has no m-simplices.
pub fn check_evenness(k: &Complex, sigma: &PairSystem) -> Result<EvennessCheck> {
    sigma.validate(k)?;
    let m = sigma.m;
    let mut paired: BTreeMap<&Simplex, usize> = BTreeMap::new();
    for cell in sigma.cells() {
        let (a, b) = (cell.first(), cell.second());
        if a.dimension() == 0 && b.dimension() == m {
            *paired.entry(b).or_default() += 1;
        }
        if b.dimension() == 0 && a.dimension() == m {
            *paired.entry(a).or_default() += 1;
        }
    }
    for s in k.simplices_of_dim(m) {
        let count = paired.get(s).copied().unwrap_or(0);
        if count % 2 == 1 {
            return Ok(EvennessCheck::Fail {
                witness: s.clone(),
                count,
            });
        }
    }
    Ok(EvennessCheck::Pass)
}

/// Runs all three conditions. `map` overrides the default moment-curve map
/// used for condition 2.
pub fn certify(
    k: &Complex,
    sigma: &PairSystem,
    map: Option<&GeneralPositionMap>,
) -> Result<Certificate> {
    let condition1 = check_cycle(k, sigma)?;
    let condition2 = check_parity(k, sigma, map)?;
    let condition3 = check_evenness(k, sigma)?;
    let m = sigma.m;
    let pass = condition1 == CycleCheck::Pass && condition2.pass && condition3 == EvennessCheck::Pass;
    let statement = if pass {
        format!(
            "K is a {m}-obstructor complex: every map K -> R^{m} sends two disjoint simplices \
             to intersecting sets, so K embeds neither in R^{m} nor in any contractible \
             {m}-manifold"
        )
    } else {
        let mut failed = Vec::new();
        if condition1 != CycleCheck::Pass {
            failed.push("1 (cycle)");
        }
        if !condition2.pass {
            failed.push("2 (odd intersection count)");
        }
        if condition3 != EvennessCheck::Pass {
            failed.push("3 (vertex evenness)");
        }
        format!(
            "Σ does not certify K as a {m}-obstructor complex; failed condition(s): {}. \
             Nothing is claimed about embeddability",
            failed.join(", ")
        )
    };
    Ok(Certificate {
        complex_digest: k.digest(),
        sigma_digest: sigma.digest(),
        m,
        pair_count: sigma.len(),
        condition1,
        condition2,
        condition3,
        verdict: if pass {
            Verdict::Obstructor
        } else {
            Verdict::NotObstructor
        },
        statement,
    })
}
