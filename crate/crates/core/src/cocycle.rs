//! The mod-2 van Kampen obstruction: the intersection cochain of a
//! general-position map on the m-cells of the deleted product, and the test
//! for whether it is a coboundary.

use serde::Serialize;

use crate::certifier::PairSystem;
use crate::complex::Complex;
use crate::deleted_product::{DeletedProduct, UnorderedCell};
use crate::error::{Error, Result};
use crate::geometry::{pair_intersections, GeneralPositionMap, MapFile};
use crate::gf2::BitVector;

/// `c_f({σ, τ}) = |f(σ) ∩ f(τ)| mod 2` on every m-cell of the deleted product.
#[derive(Clone, Debug)]
pub struct IntersectionCochain {
    m: usize,
    complex_digest: String,
    map: MapFile,
    map_digest: String,
    cells: Vec<UnorderedCell>,
    values: BitVector,
}

impl IntersectionCochain {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn complex_digest(&self) -> &str {
        &self.complex_digest
    }

    pub fn map(&self) -> &MapFile {
        &self.map
    }

    pub fn map_digest(&self) -> &str {
        &self.map_digest
    }

    /// The m-cells in canonical order; `values()` is indexed the same way.
    pub fn cells(&self) -> &[UnorderedCell] {
        &self.cells
    }

    pub fn values(&self) -> &BitVector {
        &self.values
    }

    pub fn value(&self, cell: &UnorderedCell) -> Option<bool> {
        self.cells
            .binary_search(cell)
            .ok()
            .map(|i| self.values.get(i))
    }

    pub fn support(&self) -> Vec<&UnorderedCell> {
        self.values.ones().map(|i| &self.cells[i]).collect()
    }

    pub fn weight(&self) -> usize {
        self.values.count_ones()
    }
}

fn resolve_map(k: &Complex, m: usize, f: Option<&GeneralPositionMap>) -> Result<GeneralPositionMap> {
    let f = match f {
        Some(f) => f.clone(),
        None => GeneralPositionMap::moment(k, m, None)?,
    };
    if f.m() != m {
        return Err(Error::InvalidMap(format!(
            "map targets dimension {} but m = {m}",
            f.m()
        )));
    }
    f.covers(k)?;
    Ok(f)
}

/// Builds `c_f` on `dp`, which must be the deleted product of `k`.
pub fn intersection_cochain_on(
    dp: &DeletedProduct,
    k: &Complex,
    m: usize,
    f: Option<&GeneralPositionMap>,
) -> Result<IntersectionCochain> {
    let complex_digest = k.digest();
    if dp.source_digest() != complex_digest {
        return Err(Error::DigestMismatch(
            "deleted product was built from a different complex".into(),
        ));
    }
    let f = resolve_map(k, m, f)?;
    let cells = dp.cells(m).to_vec();
    let mut values = BitVector::zeros(cells.len());
    for (i, cell) in cells.iter().enumerate() {
        if pair_intersections(cell.first(), cell.second(), &f)? % 2 == 1 {
            values.set(i, true);
        }
    }
    Ok(IntersectionCochain {
        m,
        complex_digest,
        map: f.to_file(),
        map_digest: f.digest(),
        cells,
        values,
    })
}

/// Builds `c_f` for `f`, or for the default moment-curve map when `f` is `None`.
pub fn intersection_cochain(
    k: &Complex,
    m: usize,
    f: Option<&GeneralPositionMap>,
) -> Result<IntersectionCochain> {
    intersection_cochain_on(&DeletedProduct::build(k), k, m, f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum ObstructionClass {
    /// `c_f` is not a coboundary: K does not embed in R^m.
    NonzeroObstruction,
    /// `c_f = δx`; `witness` is the support of x on the (m−1)-cells.
    VanishesMod2 { witness: Vec<UnorderedCell> },
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub complex_digest: String,
    pub m: usize,
    pub map: MapFile,
    pub map_digest: String,
    pub cell_count: usize,
    pub cochain_weight: usize,
    /// The m-cells on which the cochain is 1.
    pub cochain_support: Vec<UnorderedCell>,
    pub result: ObstructionClass,
}

impl ObstructionReport {
    pub fn is_nonzero(&self) -> bool {
        self.result == ObstructionClass::NonzeroObstruction
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Decides whether the mod-2 class of `c_f` in `H^m` of the unordered
/// deleted product vanishes.
pub fn obstruction_vanishes(k: &Complex, m: usize, f: Option<&GeneralPositionMap>) -> Result<ObstructionReport> {
    if k.is_empty() {
        return Err(Error::EmptyComplex);
    }
    let dp = DeletedProduct::build(k);
    let c = intersection_cochain_on(&dp, k, m, f)?;
    let result = if c.values.is_zero() {
        ObstructionClass::VanishesMod2 { witness: vec![] }
    } else if m == 0 {
        ObstructionClass::NonzeroObstruction
    } else {
        let delta = dp.coboundary_matrix(m)?;
        match delta.solve_in_image(&c.values)? {
            None => ObstructionClass::NonzeroObstruction,
            Some(x) => {
                if delta.apply(&x)? != c.values {
                    unreachable!("coboundary solution does not reproduce the cochain");
                }
                let lower = dp.cells(m - 1);
                ObstructionClass::VanishesMod2 {
                    witness: x.ones().map(|i| lower[i].clone()).collect(),
                }
            }
        }
    };
    Ok(ObstructionReport {
        complex_digest: c.complex_digest.clone(),
        m,
        map: c.map.clone(),
        map_digest: c.map_digest.clone(),
        cell_count: c.cells.len(),
        cochain_weight: c.weight(),
        cochain_support: c.support().into_iter().cloned().collect(),
        result,
    })
}

/// The Kronecker pairing `⟨c_f, Σ⟩ ∈ Z/2`; `true` is 1.
pub fn pair_with_cycle(c: &IntersectionCochain, k: &Complex, sigma: &PairSystem) -> Result<bool> {
    if k.digest() != c.complex_digest {
        return Err(Error::DigestMismatch(
            "cochain and pair system live on different complexes".into(),
        ));
    }
    if sigma.m() != c.m {
        return Err(Error::DimensionMismatch {
            expected: c.m,
            found: sigma.m(),
        });
    }
    sigma.validate(k)?;
    let mut total = false;
    for cell in sigma.cells() {
        total ^= c
            .value(cell)
            .ok_or_else(|| Error::InvalidPairSystem(format!("{cell} is not an m-cell")))?;
    }
    Ok(total)
}
