//! The unordered deleted product of a complex: cells `{σ, τ}` with `σ ∩ τ = ∅`,
//! i.e. the quotient of `⋃{σ×τ : σ∩τ=∅}` by the swap `(x, y) ↦ (y, x)`.
//!
//! Only the quotient is materialized. Over GF(2) no orientation data is
//! needed, and the ordered cells are recovered on demand by
//! [`DeletedProduct::ordered_lift`].

use std::collections::HashMap;

use serde::Serialize;

use crate::complex::{Complex, Simplex};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// An unordered pair of vertex-disjoint simplices, stored with the smaller
/// simplex (dimension, then vertex list) first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct UnorderedCell {
    first: Simplex,
    second: Simplex,
}

impl UnorderedCell {
    pub fn new(a: Simplex, b: Simplex) -> Result<Self> {
        if !a.is_disjoint(&b) {
            return Err(Error::InvalidPairSystem(format!(
                "simplices {a} and {b} share a vertex"
            )));
        }
        Ok(Self::canonical(a, b))
    }

    fn canonical(a: Simplex, b: Simplex) -> Self {
        if a <= b {
            UnorderedCell { first: a, second: b }
        } else {
            UnorderedCell { first: b, second: a }
        }
    }

    pub fn first(&self) -> &Simplex {
        &self.first
    }

    pub fn second(&self) -> &Simplex {
        &self.second
    }

    pub fn dimension(&self) -> usize {
        self.first.dimension() + self.second.dimension()
    }

    /// `{σ', τ}` for facets σ' of σ and `{σ, τ'}` for facets τ' of τ.
    /// The two families never coincide since σ and τ are disjoint, so no
    /// term cancels.
    pub fn facets(&self) -> Vec<UnorderedCell> {
        let mut out: Vec<UnorderedCell> = self
            .first
            .facets()
            .into_iter()
            .map(|f| UnorderedCell::canonical(f, self.second.clone()))
            .chain(
                self.second
                    .facets()
                    .into_iter()
                    .map(|f| UnorderedCell::canonical(self.first.clone(), f)),
            )
            .collect();
        out.sort();
        out
    }

    /// The simplex paired with `s` in this cell, if `s` is one of the two.
    pub fn partner(&self, s: &Simplex) -> Option<&Simplex> {
        if &self.first == s {
            Some(&self.second)
        } else if &self.second == s {
            Some(&self.first)
        } else {
            None
        }
    }
}

impl std::fmt::Display for UnorderedCell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}, {}}}", self.first, self.second)
    }
}

/// A cell `σ × τ` of the ordered deleted product.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderedCell(pub Simplex, pub Simplex);

impl OrderedCell {
    /// The free involution `(σ, τ) ↦ (τ, σ)`.
    pub fn swap(&self) -> OrderedCell {
        OrderedCell(self.1.clone(), self.0.clone())
    }
}

#[derive(Clone, Debug)]
pub struct DeletedProduct {
    source_digest: String,
    cells: Vec<Vec<UnorderedCell>>,
    index: Vec<HashMap<UnorderedCell, usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeletedProductDump {
    pub source_digest: String,
    pub dimension: Option<usize>,
    pub cells: Vec<DimensionDump>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionDump {
    pub dimension: usize,
    pub count: usize,
    pub cells: Vec<(Simplex, Simplex)>,
}

impl DeletedProduct {
    pub fn build(k: &Complex) -> DeletedProduct {
        let simplices: Vec<&Simplex> = k.simplices().collect();
        let mut cells: Vec<Vec<UnorderedCell>> = Vec::new();
        for (i, a) in simplices.iter().enumerate() {
            for b in &simplices[i + 1..] {
                if a.is_disjoint(b) {
                    let cell = UnorderedCell::canonical((*a).clone(), (*b).clone());
                    let d = cell.dimension();
                    if cells.len() <= d {
                        cells.resize_with(d + 1, Vec::new);
                    }
                    cells[d].push(cell);
                }
            }
        }
        for layer in &mut cells {
            layer.sort();
        }
        let index = cells
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (c.clone(), i))
                    .collect()
            })
            .collect();
        DeletedProduct {
            source_digest: k.digest(),
            cells,
            index,
        }
    }

    pub fn source_digest(&self) -> &str {
        &self.source_digest
    }

    /// Top cell dimension; `None` when there are no cells at all.
    pub fn dimension(&self) -> Option<usize> {
        self.cells.len().checked_sub(1)
    }

    pub fn cells(&self, d: usize) -> &[UnorderedCell] {
        self.cells.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn cell_count(&self, d: usize) -> usize {
        self.cells(d).len()
    }

    pub fn index_of(&self, cell: &UnorderedCell) -> Option<usize> {
        self.index.get(cell.dimension())?.get(cell).copied()
    }

    pub fn contains(&self, cell: &UnorderedCell) -> bool {
        self.index_of(cell).is_some()
    }

    /// `∂_d`: rows are (d−1)-cells, columns are d-cells, entry 1 iff incidence.
    pub fn boundary_matrix(&self, d: usize) -> Result<BitMatrix> {
        let top = self.dimension();
        if d < 1 || top.is_none_or(|t| d > t) {
            return Err(Error::OutOfRange {
                what: "boundary degree",
                value: d as i64,
                range: match top {
                    Some(t) => format!("1..={t}"),
                    None => "(no cells)".to_string(),
                },
            });
        }
        let mut m = BitMatrix::zeros(self.cell_count(d - 1), self.cell_count(d));
        for (c, cell) in self.cells(d).iter().enumerate() {
            for face in cell.facets() {
                let r = self.index_of(&face).expect("deleted product is closed under faces");
                m.set(r, c, true);
            }
        }
        Ok(m)
    }

    /// `δ^{d−1}`: the transpose of `∂_d`, taking (d−1)-cochains to d-cochains.
    pub fn coboundary_matrix(&self, d: usize) -> Result<BitMatrix> {
        Ok(self.boundary_matrix(d)?.transpose())
    }

    /// Indicator vector of a set of d-cells.
    pub fn chain<'a>(
        &self,
        d: usize,
        cells: impl IntoIterator<Item = &'a UnorderedCell>,
    ) -> Result<BitVector> {
        let mut v = BitVector::zeros(self.cell_count(d));
        for cell in cells {
            if cell.dimension() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: cell.dimension(),
                });
            }
            let i = self
                .index_of(cell)
                .ok_or_else(|| Error::InvalidPairSystem(format!("{cell} is not a cell")))?;
            v.flip(i);
        }
        Ok(v)
    }

    /// Both ordered cells over `cell`; the swap exchanges them.
    pub fn ordered_lift(&self, cell: &UnorderedCell) -> Result<[OrderedCell; 2]> {
        if !self.contains(cell) {
            return Err(Error::InvalidPairSystem(format!(
                "{cell} is not a cell of this deleted product"
            )));
        }
        Ok([
            OrderedCell(cell.first.clone(), cell.second.clone()),
            OrderedCell(cell.second.clone(), cell.first.clone()),
        ])
    }

    pub fn dump(&self) -> DeletedProductDump {
        DeletedProductDump {
            source_digest: self.source_digest.clone(),
            dimension: self.dimension(),
            cells: self
                .cells
                .iter()
                .enumerate()
                .map(|(d, layer)| DimensionDump {
                    dimension: d,
                    count: layer.len(),
                    cells: layer
                        .iter()
                        .map(|c| (c.first.clone(), c.second.clone()))
                        .collect(),
                })
                .collect(),
        }
    }
}
