//! Periodic lattices, qubit regions and the nested partition sequences used by
//! the Markov entropy decomposition.
//!
//! Every qubit is owned by exactly one cell of a `D`-dimensional torus. For
//! edge placement a vertex cell owns the `D` edges leaving it in the positive
//! axis directions, so the cell structure of the 2D toric code is the vertex
//! lattice with two qubits per cell. Distances are measured between owning
//! cells with the periodic L∞ (king-move) graph metric, which makes balls
//! axis-aligned boxes of side `2r + 1`.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::f2::BitVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Placement {
    /// `per_cell` qubits sit on every site.
    Sites { per_cell: usize },
    /// One qubit per edge, repeated for each of `layers` stacked copies. Slot
    /// `layer * D + axis` of a cell is the edge leaving it along `axis`.
    Edges { layers: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusLattice {
    sizes: Vec<usize>,
    placement: Placement,
}

impl TorusLattice {
    pub fn new(sizes: Vec<usize>, placement: Placement) -> Result<Self> {
        if !(1..=3).contains(&sizes.len()) {
            return Err(Error::Precondition(format!(
                "lattice dimension must be 1, 2 or 3, got {}",
                sizes.len()
            )));
        }
        if let Some(&l) = sizes.iter().find(|&&l| l < 2) {
            return Err(Error::Precondition(format!("linear size {l} < 2")));
        }
        match placement {
            Placement::Sites { per_cell: 0 } | Placement::Edges { layers: 0 } => {
                return Err(Error::Precondition("zero qubits per cell".into()))
            }
            _ => {}
        }
        Ok(Self { sizes, placement })
    }

    /// `L × L` torus with one qubit per edge.
    pub fn square_edges(l: usize) -> Result<Self> {
        Self::new(vec![l, l], Placement::Edges { layers: 1 })
    }

    pub fn cubic_sites(l: usize, per_cell: usize) -> Result<Self> {
        Self::new(vec![l, l, l], Placement::Sites { per_cell })
    }

    /// A ring of `n` sites, one qubit each.
    pub fn ring(n: usize) -> Result<Self> {
        Self::new(vec![n], Placement::Sites { per_cell: 1 })
    }

    pub fn dim(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn placement(&self) -> Placement {
        self.placement
    }

    pub fn num_cells(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn per_cell(&self) -> usize {
        match self.placement {
            Placement::Sites { per_cell } => per_cell,
            Placement::Edges { layers } => layers * self.dim(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_cells() * self.per_cell()
    }

    pub fn qubit(&self, cell: usize, slot: usize) -> usize {
        debug_assert!(cell < self.num_cells() && slot < self.per_cell());
        cell * self.per_cell() + slot
    }

    pub fn cell_of(&self, qubit: usize) -> usize {
        qubit / self.per_cell()
    }

    pub fn coords(&self, cell: usize) -> Vec<usize> {
        let mut rest = cell;
        self.sizes
            .iter()
            .map(|&l| {
                let c = rest % l;
                rest /= l;
                c
            })
            .collect()
    }

    /// Cell index of (possibly out-of-range, possibly negative) coordinates,
    /// wrapped onto the torus.
    pub fn cell_at(&self, coords: &[i64]) -> usize {
        assert_eq!(coords.len(), self.dim(), "coordinate arity");
        let mut idx = 0;
        for (a, &c) in coords.iter().enumerate().rev() {
            let l = self.sizes[a] as i64;
            idx = idx * self.sizes[a] + c.rem_euclid(l) as usize;
        }
        idx
    }

    /// Cell reached from `cell` by the displacement `delta`.
    pub fn shift(&self, cell: usize, delta: &[i64]) -> usize {
        let c: Vec<i64> = self
            .coords(cell)
            .iter()
            .zip(delta)
            .map(|(&x, &d)| x as i64 + d)
            .collect();
        self.cell_at(&c)
    }

    /// Periodic L∞ distance between cells.
    pub fn cell_distance(&self, a: usize, b: usize) -> usize {
        let (ca, cb) = (self.coords(a), self.coords(b));
        ca.iter()
            .zip(&cb)
            .zip(&self.sizes)
            .map(|((&x, &y), &l)| {
                let d = x.abs_diff(y);
                d.min(l - d)
            })
            .max()
            .unwrap_or(0)
    }

    pub fn diameter(&self) -> usize {
        self.sizes.iter().map(|l| l / 2).max().unwrap_or(0)
    }

    /// Cells sharing a face (differing by ±1 along exactly one axis).
    pub fn face_neighbors(&self, cell: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(2 * self.dim());
        for a in 0..self.dim() {
            for d in [-1i64, 1] {
                let mut delta = vec![0; self.dim()];
                delta[a] = d;
                out.push(self.shift(cell, &delta));
            }
        }
        out.sort_unstable();
        out.dedup();
        out.retain(|&c| c != cell);
        out
    }

    /// Cells at L∞ distance exactly one.
    pub fn king_neighbors(&self, cell: usize) -> Vec<usize> {
        let d = self.dim();
        let mut out = Vec::with_capacity(3usize.pow(d as u32));
        for code in 0..3usize.pow(d as u32) {
            let mut rest = code;
            let delta: Vec<i64> = (0..d)
                .map(|_| {
                    let v = (rest % 3) as i64 - 1;
                    rest /= 3;
                    v
                })
                .collect();
            if delta.iter().all(|&v| v == 0) {
                continue;
            }
            out.push(self.shift(cell, &delta));
        }
        out.sort_unstable();
        out.dedup();
        out.retain(|&c| c != cell);
        out
    }
}

impl fmt::Display for TorusLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.sizes.iter().map(ToString::to_string).collect();
        match self.placement {
            Placement::Sites { per_cell } => write!(f, "{} torus, {per_cell}/site", dims.join("x")),
            Placement::Edges { layers } => write!(f, "{} torus, edges x{layers}", dims.join("x")),
        }
    }
}

/// A set of qubits on a particular lattice.
#[derive(Clone, PartialEq, Eq)]
pub struct Region {
    lattice: Arc<TorusLattice>,
    members: BitVector,
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Region")
            .field("lattice", &self.lattice.to_string())
            .field("qubits", &self.indices())
            .finish()
    }
}

impl Region {
    pub fn empty(lattice: &Arc<TorusLattice>) -> Self {
        Self {
            lattice: Arc::clone(lattice),
            members: BitVector::zeros(lattice.num_qubits()),
        }
    }

    pub fn full(lattice: &Arc<TorusLattice>) -> Self {
        Self::empty(lattice).complement()
    }

    pub fn from_qubits(
        lattice: &Arc<TorusLattice>,
        qubits: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let mut r = Self::empty(lattice);
        let n = lattice.num_qubits();
        for q in qubits {
            if q >= n {
                return Err(Error::InvalidRegion(format!(
                    "qubit {q} out of range 0..{n}"
                )));
            }
            r.members.set(q, true);
        }
        Ok(r)
    }

    /// All qubits owned by the given cells.
    pub fn from_cells(lattice: &Arc<TorusLattice>, cells: impl IntoIterator<Item = usize>) -> Self {
        let mut r = Self::empty(lattice);
        for c in cells {
            for s in 0..lattice.per_cell() {
                r.members.set(lattice.qubit(c, s), true);
            }
        }
        r
    }

    fn from_cell_mask(lattice: &Arc<TorusLattice>, mask: &[bool]) -> Self {
        Self::from_cells(lattice, cells_of_mask(mask))
    }

    /// Qubits owned by cells within distance `r` of `center`.
    pub fn ball(lattice: &Arc<TorusLattice>, center: usize, r: usize) -> Self {
        Self::from_cells(
            lattice,
            (0..lattice.num_cells()).filter(|&c| lattice.cell_distance(c, center) <= r),
        )
    }

    /// Cells whose distance from `center` lies in `(r_in, r_out]`.
    pub fn annulus(lattice: &Arc<TorusLattice>, center: usize, r_in: usize, r_out: usize) -> Self {
        Self::from_cells(
            lattice,
            (0..lattice.num_cells()).filter(|&c| {
                let d = lattice.cell_distance(c, center);
                d > r_in && d <= r_out
            }),
        )
    }

    /// Inclusive box of cells from `lo` to `hi`; a coordinate with `hi < lo`
    /// wraps around the torus.
    pub fn rect(lattice: &Arc<TorusLattice>, lo: &[usize], hi: &[usize]) -> Result<Self> {
        if lo.len() != lattice.dim() || hi.len() != lattice.dim() {
            return Err(Error::InvalidRegion(format!(
                "box corners need {} coordinates",
                lattice.dim()
            )));
        }
        let sizes = lattice.sizes();
        let extent: Vec<usize> = (0..lattice.dim())
            .map(|a| (hi[a] + sizes[a] - lo[a] % sizes[a]) % sizes[a])
            .collect();
        Ok(Self::from_cells(
            lattice,
            (0..lattice.num_cells()).filter(|&c| {
                lattice
                    .coords(c)
                    .iter()
                    .enumerate()
                    .all(|(a, &x)| (x + sizes[a] - lo[a] % sizes[a]) % sizes[a] <= extent[a])
            }),
        ))
    }

    /// Parses the region mini-language:
    ///
    /// ```text
    /// rect x0 y0 x1 y1          (one coordinate per axis for each corner)
    /// annulus cx cy r_in r_out
    /// ball cx cy r
    /// explicit [i, j, k]
    /// ```
    /// Every edge touching a vertex of the box (edge placements only): the
    /// box's own edges plus those arriving from its lower neighbors.
    pub fn star_rect(lattice: &Arc<TorusLattice>, lo: &[usize], hi: &[usize]) -> Result<Self> {
        let Placement::Edges { layers } = lattice.placement() else {
            return Err(Error::InvalidRegion("star regions need edge qubits".into()));
        };
        let d = lattice.dim();
        let cells = Self::rect(lattice, lo, hi)?.touched_cells();
        let mut qubits = Vec::new();
        for c in cells {
            for layer in 0..layers {
                for axis in 0..d {
                    let mut back = vec![0i64; d];
                    back[axis] = -1;
                    qubits.push(lattice.qubit(c, layer * d + axis));
                    qubits.push(lattice.qubit(lattice.shift(c, &back), layer * d + axis));
                }
            }
        }
        Self::from_qubits(lattice, qubits)
    }

    pub fn parse(lattice: &Arc<TorusLattice>, spec: &str) -> Result<Self> {
        RegionParser::new(lattice, spec).parse()
    }

    pub fn lattice(&self) -> &Arc<TorusLattice> {
        &self.lattice
    }

    pub fn members(&self) -> &BitVector {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_zero()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.members.get(q)
    }

    pub fn indices(&self) -> Vec<usize> {
        self.members.ones().collect()
    }

    pub fn complement_indices(&self) -> Vec<usize> {
        self.members.not().ones().collect()
    }

    fn check_same(&self, other: &Region) -> Result<()> {
        if Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice == other.lattice {
            Ok(())
        } else {
            Err(Error::LatticeMismatch)
        }
    }

    pub fn union(&self, other: &Region) -> Result<Region> {
        self.check_same(other)?;
        let mut m = self.members.clone();
        m.or_assign(&other.members);
        Ok(self.with_members(m))
    }

    pub fn intersection(&self, other: &Region) -> Result<Region> {
        self.check_same(other)?;
        let mut m = self.members.clone();
        m.and_assign(&other.members);
        Ok(self.with_members(m))
    }

    pub fn difference(&self, other: &Region) -> Result<Region> {
        self.check_same(other)?;
        let mut m = self.members.clone();
        m.and_assign(&other.members.not());
        Ok(self.with_members(m))
    }

    pub fn complement(&self) -> Region {
        self.with_members(self.members.not())
    }

    pub fn is_subset(&self, other: &Region) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    pub fn is_disjoint(&self, other: &Region) -> Result<bool> {
        Ok(self.intersection(other)?.is_empty())
    }

    fn with_members(&self, members: BitVector) -> Region {
        Region {
            lattice: Arc::clone(&self.lattice),
            members,
        }
    }

    /// Cells owning at least one member qubit.
    pub fn touched_cells(&self) -> Vec<usize> {
        let mut cells: Vec<usize> = self
            .members
            .ones()
            .map(|q| self.lattice.cell_of(q))
            .collect();
        cells.dedup();
        cells
    }

    /// The cell mask if the region is a union of whole cells.
    pub fn cell_mask(&self) -> Option<Vec<bool>> {
        let lat = &self.lattice;
        let mut mask = vec![false; lat.num_cells()];
        for c in self.touched_cells() {
            if (0..lat.per_cell()).any(|s| !self.members.get(lat.qubit(c, s))) {
                return None;
            }
            mask[c] = true;
        }
        Some(mask)
    }

    /// Smallest `r` such that some ball of radius `r` contains the region,
    /// together with a center achieving it. `None` for the empty region.
    pub fn enclosing_ball(&self) -> Option<(usize, usize)> {
        let cells = self.touched_cells();
        if cells.is_empty() {
            return None;
        }
        let lat = &self.lattice;
        (0..lat.num_cells())
            .map(|center| {
                let r = cells
                    .iter()
                    .map(|&c| lat.cell_distance(c, center))
                    .max()
                    .unwrap_or(0);
                (r, center)
            })
            .min()
    }

    pub fn fits_in_ball(&self, r: usize) -> bool {
        self.enclosing_ball().is_none_or(|(need, _)| need <= r)
    }

    /// Number of connected components of the region's boundary.
    ///
    /// Counted on the footprint: the cells holding at least one qubit of the
    /// region. Footprints covering every coordinate along some axis are
    /// rejected (they may wrap around the torus), except the full lattice,
    /// which has no boundary.
    pub fn boundary_components(&self) -> Result<usize> {
        let lat = &self.lattice;
        let mut mask = vec![false; lat.num_cells()];
        for c in self.touched_cells() {
            mask[c] = true;
        }
        if mask.iter().all(|&m| m) {
            return Ok(0);
        }
        for a in 0..lat.dim() {
            let mut seen = vec![false; lat.sizes()[a]];
            for c in cells_of_mask(&mask) {
                seen[lat.coords(c)[a]] = true;
            }
            if seen.iter().all(|&s| s) {
                return Err(Error::Precondition(format!(
                    "region wraps around the torus along axis {a}"
                )));
            }
        }
        // Region pieces are face-connected and gaps king-connected (the dual
        // pairing on a square grid); each adjacent (piece, gap) pair is one
        // boundary loop.
        let inside = label_components(&mask, |c| lat.face_neighbors(c));
        let outside_mask: Vec<bool> = mask.iter().map(|&m| !m).collect();
        let outside = label_components(&outside_mask, |c| lat.king_neighbors(c));
        let mut pairs = std::collections::BTreeSet::new();
        for c in cells_of_mask(&mask) {
            for n in lat.face_neighbors(c) {
                if !mask[n] {
                    pairs.insert((inside[c], outside[n]));
                }
            }
        }
        Ok(pairs.len())
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices().iter().map(ToString::to_string).collect();
        write!(f, "explicit [{}]", idx.join(", "))
    }
}

/// Component label per cell of `mask` (unused for cells outside it).
fn label_components(mask: &[bool], neighbors: impl Fn(usize) -> Vec<usize>) -> Vec<usize> {
    let mut label = vec![usize::MAX; mask.len()];
    let mut next = 0;
    for start in cells_of_mask(mask) {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = next;
        let mut stack = vec![start];
        while let Some(c) = stack.pop() {
            for n in neighbors(c) {
                if mask[n] && label[n] == usize::MAX {
                    label[n] = next;
                    stack.push(n);
                }
            }
        }
        next += 1;
    }
    label
}

fn cells_of_mask(mask: &[bool]) -> impl Iterator<Item = usize> + '_ {
    mask.iter().enumerate().filter(|(_, &m)| m).map(|(c, _)| c)
}

struct RegionParser<'a> {
    lattice: &'a Arc<TorusLattice>,
    src: &'a str,
    pos: usize,
}

impl<'a> RegionParser<'a> {
    fn new(lattice: &'a Arc<TorusLattice>, src: &'a str) -> Self {
        Self {
            lattice,
            src,
            pos: 0,
        }
    }

    fn err(&self, position: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            position,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn word(&mut self) -> (usize, &'a str) {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let end = rest
            .find(|c: char| c.is_whitespace() || c == '[' || c == ']' || c == ',')
            .unwrap_or(rest.len());
        self.pos += end;
        (start, &rest[..end])
    }

    fn number(&mut self) -> Result<usize> {
        let (at, w) = self.word();
        if w.is_empty() {
            return Err(self.err(at, "expected a non-negative integer"));
        }
        w.parse::<usize>()
            .map_err(|_| self.err(at, format!("expected a non-negative integer, found {w:?}")))
    }

    fn numbers(&mut self, count: usize) -> Result<Vec<usize>> {
        (0..count).map(|_| self.number()).collect()
    }

    fn expect_char(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        match self.src[self.pos..].chars().next() {
            Some(c) if c == want => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(c) => Err(self.err(self.pos, format!("expected {want:?}, found {c:?}"))),
            None => Err(self.err(self.pos, format!("expected {want:?}, found end of input"))),
        }
    }

    fn center(&self, at: usize, coords: &[usize]) -> Result<usize> {
        for (a, (&c, &l)) in coords.iter().zip(self.lattice.sizes()).enumerate() {
            if c >= l {
                return Err(self.err(at, format!("coordinate {c} on axis {a} exceeds size {l}")));
            }
        }
        let c: Vec<i64> = coords.iter().map(|&x| x as i64).collect();
        Ok(self.lattice.cell_at(&c))
    }

    fn parse(mut self) -> Result<Region> {
        let d = self.lattice.dim();
        let (at, kind) = self.word();
        let region = match kind {
            "rect" => {
                self.skip_ws();
                let args_at = self.pos;
                let v = self.numbers(2 * d)?;
                self.center(args_at, &v[..d])?;
                self.center(args_at, &v[d..])?;
                Region::rect(self.lattice, &v[..d], &v[d..])?
            }
            "star" => {
                self.skip_ws();
                let args_at = self.pos;
                let v = self.numbers(2 * d)?;
                self.center(args_at, &v[..d])?;
                self.center(args_at, &v[d..])?;
                Region::star_rect(self.lattice, &v[..d], &v[d..])
                    .map_err(|e| self.err(at, e.to_string()))?
            }
            "annulus" => {
                self.skip_ws();
                let args_at = self.pos;
                let v = self.numbers(d + 2)?;
                let c = self.center(args_at, &v[..d])?;
                if v[d] >= v[d + 1] {
                    return Err(self.err(args_at, "annulus needs r_in < r_out"));
                }
                Region::annulus(self.lattice, c, v[d], v[d + 1])
            }
            "ball" => {
                self.skip_ws();
                let args_at = self.pos;
                let v = self.numbers(d + 1)?;
                let c = self.center(args_at, &v[..d])?;
                Region::ball(self.lattice, c, v[d])
            }
            "explicit" => {
                self.expect_char('[')?;
                let mut idx = Vec::new();
                loop {
                    self.skip_ws();
                    if self.src[self.pos..].starts_with(']') {
                        self.pos += 1;
                        break;
                    }
                    if !idx.is_empty() && self.src[self.pos..].starts_with(',') {
                        self.pos += 1;
                    }
                    let q_at = {
                        self.skip_ws();
                        self.pos
                    };
                    if self.pos >= self.src.len() {
                        return Err(self.err(q_at, "unterminated index list"));
                    }
                    let q = self.number()?;
                    if q >= self.lattice.num_qubits() {
                        return Err(self.err(
                            q_at,
                            format!("qubit {q} out of range 0..{}", self.lattice.num_qubits()),
                        ));
                    }
                    idx.push(q);
                }
                Region::from_qubits(self.lattice, idx)?
            }
            "" => return Err(self.err(at, "empty region specification")),
            other => return Err(self.err(at, format!("unknown region kind {other:?}"))),
        };
        self.skip_ws();
        if self.pos != self.src.len() {
            return Err(self.err(self.pos, "unexpected trailing input"));
        }
        Ok(region)
    }
}

/// Pairwise disjoint regions `(A, B, C)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tripartition {
    pub a: Region,
    pub b: Region,
    pub c: Region,
}

impl Tripartition {
    pub fn new(a: Region, b: Region, c: Region) -> Result<Self> {
        for (x, y, name) in [(&a, &b, "A,B"), (&b, &c, "B,C"), (&a, &c, "A,C")] {
            if !x.is_disjoint(y)? {
                return Err(Error::InvalidRegion(format!("{name} overlap")));
            }
        }
        Ok(Self { a, b, c })
    }

    pub fn ab(&self) -> Region {
        self.a.union(&self.b).expect("validated")
    }

    pub fn bc(&self) -> Region {
        self.b.union(&self.c).expect("validated")
    }

    pub fn ac(&self) -> Region {
        self.a.union(&self.c).expect("validated")
    }

    pub fn abc(&self) -> Region {
        self.ab().union(&self.c).expect("validated")
    }

    /// Three sectors of a `2w × 2w` square disk anchored at `origin`: `A` is
    /// the upper-left quadrant, `B` the upper-right, `C` the lower half. All
    /// three meet at the center of the disk and each pair shares an edge.
    pub fn kitaev_preskill_disk(
        lattice: &Arc<TorusLattice>,
        origin: &[usize],
        width: usize,
    ) -> Result<Self> {
        if lattice.dim() != 2 {
            return Err(Error::Infeasible("sector disk needs a 2D lattice".into()));
        }
        if width == 0 {
            return Err(Error::Infeasible("sector width must be positive".into()));
        }
        if let Some(&l) = lattice.sizes().iter().find(|&&l| 2 * width >= l) {
            return Err(Error::Infeasible(format!(
                "disk side {} must be smaller than the lattice size {l}",
                2 * width
            )));
        }
        let (x, y, w) = (origin[0], origin[1], width);
        let rect = |x0, y0, x1, y1| Region::rect(lattice, &[x0, y0], &[x1, y1]);
        Self::new(
            rect(x, y + w, x + w - 1, y + 2 * w - 1)?,
            rect(x + w, y + w, x + 2 * w - 1, y + 2 * w - 1)?,
            rect(x, y, x + 2 * w - 1, y + w - 1)?,
        )
    }
}

impl Tripartition {
    /// Each qubit independently lands in `A`, `B`, `C` or none of them.
    pub fn random<R: Rng + ?Sized>(lattice: &Arc<TorusLattice>, rng: &mut R) -> Result<Self> {
        let labels: Vec<u8> = (0..lattice.num_qubits())
            .map(|_| rng.random_range(0..4))
            .collect();
        let part = |l: u8| {
            Region::from_qubits(
                lattice,
                labels
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x == l)
                    .map(|(q, _)| q),
            )
        };
        Self::new(part(0)?, part(1)?, part(2)?)
    }
}

/// Stages `(Aᵢ, Bᵢ, Cᵢ)` with `AᵢBᵢCᵢ = Aᵢ₊₁Bᵢ₊₁` and a final stage covering
/// the whole lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionSequence {
    stages: Vec<Tripartition>,
}

impl PartitionSequence {
    pub fn new(stages: Vec<Tripartition>) -> Result<Self> {
        let Some(last) = stages.last() else {
            return Err(Error::InvalidRegion("empty partition sequence".into()));
        };
        for (i, w) in stages.windows(2).enumerate() {
            w[0].a.check_same(&w[1].a)?;
            if w[0].abc() != w[1].ab() {
                return Err(Error::InvalidRegion(format!(
                    "stage {} union differs from stage {} A∪B",
                    i + 1,
                    i + 2
                )));
            }
        }
        if last.abc().len() != last.a.lattice().num_qubits() {
            return Err(Error::InvalidRegion(
                "final stage does not cover the lattice".into(),
            ));
        }
        Ok(Self { stages })
    }

    pub fn stages(&self) -> &[Tripartition] {
        &self.stages
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// Regions whose locality the bound relies on: `A₁B₁` and every `BᵢCᵢ`.
    pub fn local_regions(&self) -> Vec<Region> {
        std::iter::once(self.stages[0].ab())
            .chain(self.stages.iter().map(Tripartition::bc))
            .collect()
    }

    /// Smallest ball radius containing every local region.
    pub fn locality_radius(&self) -> usize {
        self.local_regions()
            .iter()
            .filter_map(|r| r.enclosing_ball().map(|(r, _)| r))
            .max()
            .unwrap_or(0)
    }

    /// A random valid sequence over arbitrary qubits: a random initial set,
    /// random additions per stage, and a random buffer inside each covered set.
    pub fn random<R: Rng + ?Sized>(
        lattice: &Arc<TorusLattice>,
        stages: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if stages == 0 {
            return Err(Error::Infeasible("need at least one stage".into()));
        }
        let n = lattice.num_qubits();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        // stage label 0 = initial A₁B₁, label i = Cᵢ
        let labels: Vec<usize> = order.iter().map(|_| rng.random_range(0..=stages)).collect();
        let mut covered = Region::from_qubits(
            lattice,
            order
                .iter()
                .zip(&labels)
                .filter(|(_, &l)| l == 0)
                .map(|(&q, _)| q),
        )?;
        let mut out = Vec::with_capacity(stages);
        for i in 1..=stages {
            let c = if i == stages {
                covered.complement()
            } else {
                Region::from_qubits(
                    lattice,
                    order
                        .iter()
                        .zip(&labels)
                        .filter(|(_, &l)| l == i)
                        .map(|(&q, _)| q),
                )?
            };
            let b = Region::from_qubits(
                lattice,
                covered
                    .indices()
                    .into_iter()
                    .filter(|_| rng.random_bool(0.5)),
            )?;
            let a = covered.difference(&b)?;
            let next = covered.union(&c)?;
            out.push(Tripartition::new(a, b, c)?);
            covered = next;
        }
        Self::new(out)
    }
}

/// Parameters of the nested band / strip / hole construction, in cells.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct MedWidths {
    /// Height of the horizontal band grown in the first stages.
    pub band_height: usize,
    /// Width of the initial piece `A₁B₁` of the band.
    pub first_width: usize,
    /// Width of the vertical strip that closes the band around the second axis.
    pub strip_width: usize,
    /// Thickness of every buffer region `Bᵢ`.
    pub buffer: usize,
    /// If set, every local region must fit in a ball of this radius.
    pub locality_radius: Option<usize>,
}

impl MedWidths {
    pub fn default_for(lattice: &TorusLattice) -> Self {
        let (lx, ly) = (lattice.sizes()[0], *lattice.sizes().get(1).unwrap_or(&2));
        Self {
            band_height: ly.div_ceil(2),
            first_width: lx.div_ceil(2),
            strip_width: lx.div_ceil(2),
            buffer: 1,
            locality_radius: None,
        }
    }
}

/// Builds the nested sequence on a 2D torus.
///
/// The first `stages − 2` stages grow a horizontal band of rows
/// `[0, band_height)` column block by column block until it closes around the
/// first axis. The next stage adds a vertical strip of columns
/// `[0, strip_width)` through the remaining rows, closing the covered set
/// around the second axis. The last stage fills the remaining rectangular
/// hole. Each buffer `Bᵢ` is the part of the covered set within `buffer` cells
/// of the newly added `Cᵢ`.
pub fn build_med_sequence(
    lattice: &Arc<TorusLattice>,
    stages: usize,
    widths: &MedWidths,
) -> Result<PartitionSequence> {
    if lattice.dim() != 2 {
        return Err(Error::Infeasible("the sequence needs a 2D lattice".into()));
    }
    let (lx, ly) = (lattice.sizes()[0], lattice.sizes()[1]);
    let MedWidths {
        band_height: h,
        first_width: wa,
        strip_width: w2,
        buffer: b,
        locality_radius,
    } = widths.clone();
    if stages < 3 {
        return Err(Error::Infeasible(format!("stages = {stages} < 3")));
    }
    if h == 0 || h >= ly {
        return Err(Error::Infeasible(format!("band_height {h} not in 1..{ly}")));
    }
    if wa == 0 || wa >= lx {
        return Err(Error::Infeasible(format!(
            "first_width {wa} not in 1..{lx}"
        )));
    }
    if w2 == 0 || w2 >= lx {
        return Err(Error::Infeasible(format!(
            "strip_width {w2} not in 1..{lx}"
        )));
    }
    if b == 0 {
        return Err(Error::Infeasible("buffer must be at least 1".into()));
    }
    let band_stages = stages - 2;
    if band_stages > lx - wa {
        return Err(Error::Infeasible(format!(
            "{band_stages} band stages need at least that many columns after first_width {wa}"
        )));
    }

    let cells = lattice.num_cells();
    let xy = |c: usize| {
        let v = lattice.coords(c);
        (v[0], v[1])
    };
    let mask = |f: &dyn Fn(usize, usize) -> bool| -> Vec<bool> {
        (0..cells)
            .map(|c| {
                let (x, y) = xy(c);
                f(x, y)
            })
            .collect()
    };

    let mut covered = mask(&|x, y| y < h && x < wa);
    let mut additions: Vec<Vec<bool>> = Vec::with_capacity(stages);
    // split columns [wa, lx) into band_stages nearly equal blocks
    let rest = lx - wa;
    let mut start = wa;
    for i in 0..band_stages {
        let end = wa + rest * (i + 1) / band_stages;
        let (s, e) = (start, end);
        additions.push(mask(&|x, y| y < h && x >= s && x < e));
        start = end;
    }
    additions.push(mask(&|x, y| y >= h && x < w2));
    additions.push(mask(&|x, y| y >= h && x >= w2));

    let mut out = Vec::with_capacity(stages);
    for c_mask in additions {
        let buffer: Vec<bool> = (0..cells)
            .map(|cell| {
                covered[cell]
                    && (0..cells).any(|o| c_mask[o] && lattice.cell_distance(cell, o) <= b)
            })
            .collect();
        let a_mask: Vec<bool> = (0..cells).map(|c| covered[c] && !buffer[c]).collect();
        out.push(Tripartition::new(
            Region::from_cell_mask(lattice, &a_mask),
            Region::from_cell_mask(lattice, &buffer),
            Region::from_cell_mask(lattice, &c_mask),
        )?);
        for c in 0..cells {
            covered[c] |= c_mask[c];
        }
    }
    let seq = PartitionSequence::new(out)?;
    if let Some(r) = locality_radius {
        for (i, region) in seq.local_regions().iter().enumerate() {
            if !region.fits_in_ball(r) {
                let what = if i == 0 {
                    "A1B1".to_string()
                } else {
                    format!("B{i}C{i}")
                };
                return Err(Error::Infeasible(format!(
                    "{what} does not fit in a ball of radius {r}"
                )));
            }
        }
    }
    Ok(seq)
}

/// Every qubit set `{0..n}` of a lattice, used by exhaustive checks.
pub fn all_regions(lattice: &Arc<TorusLattice>) -> impl Iterator<Item = Region> + '_ {
    let n = lattice.num_qubits();
    assert!(n < 24, "exhaustive enumeration over {n} qubits");
    (0u64..1 << n).map(move |bits| {
        Region::from_qubits(lattice, (0..n).filter(|&q| bits >> q & 1 == 1)).expect("in range")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn torus(l: usize) -> Arc<TorusLattice> {
        Arc::new(TorusLattice::square_edges(l).unwrap())
    }

    #[test]
    fn lattice_bookkeeping() {
        let lat = TorusLattice::square_edges(5).unwrap();
        assert_eq!(lat.num_qubits(), 50);
        assert_eq!(lat.coords(lat.cell_at(&[-1, 7])), vec![4, 2]);
        assert_eq!(
            lat.cell_distance(lat.cell_at(&[0, 0]), lat.cell_at(&[4, 3])),
            2
        );
        assert!(TorusLattice::new(vec![1, 3], Placement::Edges { layers: 1 }).is_err());
        assert!(TorusLattice::new(vec![2; 4], Placement::Sites { per_cell: 1 }).is_err());
    }

    #[test]
    fn ball_examples() {
        let lat = torus(5);
        let c = lat.cell_at(&[2, 2]);
        assert_eq!(Region::ball(&lat, c, 0).indices(), vec![2 * c, 2 * c + 1]);
        assert_eq!(Region::ball(&lat, c, lat.diameter()).len(), 50);
        // direct enumeration: a 3x3 block of vertex cells owns 18 edges
        let r1 = Region::ball(&lat, c, 1);
        let mut expect = Vec::new();
        for dy in -1..=1i64 {
            for dx in -1..=1i64 {
                let cell = lat.cell_at(&[2 + dx, 2 + dy]);
                expect.extend([2 * cell, 2 * cell + 1]);
            }
        }
        expect.sort_unstable();
        assert_eq!(r1.indices(), expect);
    }

    #[test]
    fn star_regions() {
        let lat = torus(5);
        let star = Region::parse(&lat, "star 2 2 2 2").unwrap();
        let (c, left, down) = (
            lat.cell_at(&[2, 2]),
            lat.cell_at(&[1, 2]),
            lat.cell_at(&[2, 1]),
        );
        assert_eq!(star.indices(), {
            let mut v = vec![2 * c, 2 * c + 1, 2 * left, 2 * down + 1];
            v.sort_unstable();
            v
        });
        // (l+1)² − 1 cells' worth of edges minus the two dangling corners
        assert_eq!(Region::parse(&lat, "star 0 0 2 2").unwrap().len(), 24);
        let sites = Arc::new(TorusLattice::ring(4).unwrap());
        assert!(matches!(
            Region::parse(&sites, "star 0 1"),
            Err(Error::Parse { position: 0, .. })
        ));
    }

    #[test]
    fn ball_monotone() {
        let lat = torus(6);
        for r in 0..4 {
            let small = Region::ball(&lat, 7, r);
            let big = Region::ball(&lat, 7, r + 1);
            assert!(small.is_subset(&big).unwrap());
        }
    }

    #[test]
    fn region_algebra() {
        let lat = torus(4);
        let r = Region::parse(&lat, "rect 0 0 1 2").unwrap();
        let e = Region::empty(&lat);
        assert_eq!(r.union(&e).unwrap(), r);
        assert_eq!(r.complement().complement(), r);
        let t = Tripartition::new(
            Region::parse(&lat, "rect 0 0 0 0").unwrap(),
            Region::parse(&lat, "rect 1 0 1 0").unwrap(),
            Region::parse(&lat, "rect 2 0 3 1").unwrap(),
        )
        .unwrap();
        assert_eq!(t.abc().len(), t.a.len() + t.b.len() + t.c.len());
        let other = torus(4);
        let foreign = Region::full(&Arc::new(TorusLattice::square_edges(3).unwrap()));
        assert_eq!(r.union(&foreign).unwrap_err(), Error::LatticeMismatch);
        // structurally equal lattices are interchangeable
        assert!(r.union(&Region::full(&other)).is_ok());
    }

    #[test]
    fn parse_errors_carry_positions() {
        let lat = torus(4);
        let e = Region::parse(&lat, "rect 0 0 x 1").unwrap_err();
        assert!(matches!(e, Error::Parse { position: 9, .. }), "{e:?}");
        let e = Region::parse(&lat, "blob 1 2").unwrap_err();
        assert!(matches!(e, Error::Parse { position: 0, .. }));
        let e = Region::parse(&lat, "  ball 1 1 1 9").unwrap_err();
        assert!(matches!(e, Error::Parse { position: 13, .. }), "{e:?}");
        let e = Region::parse(&lat, "explicit [1, 99]").unwrap_err();
        assert!(matches!(e, Error::Parse { position: 13, .. }), "{e:?}");
        let e = Region::parse(&lat, "ball 9 0 1").unwrap_err();
        assert!(matches!(e, Error::Parse { position: 5, .. }), "{e:?}");
        assert_eq!(
            Region::parse(&lat, "explicit [3, 1 2]").unwrap().indices(),
            vec![1, 2, 3]
        );
        assert_eq!(Region::parse(&lat, "explicit []").unwrap().len(), 0);
    }

    #[test]
    fn rect_wraps() {
        let lat = torus(5);
        let r = Region::parse(&lat, "rect 4 0 0 0").unwrap();
        let cells: Vec<_> = r.touched_cells();
        assert_eq!(cells, vec![lat.cell_at(&[0, 0]), lat.cell_at(&[4, 0])]);
    }

    #[test]
    fn boundary_component_examples() {
        let lat =
            Arc::new(TorusLattice::new(vec![9, 9], Placement::Sites { per_cell: 1 }).unwrap());
        assert_eq!(
            Region::parse(&lat, "rect 1 1 3 4")
                .unwrap()
                .boundary_components(),
            Ok(1)
        );
        assert_eq!(
            Region::parse(&lat, "annulus 4 4 1 3")
                .unwrap()
                .boundary_components(),
            Ok(2)
        );
        assert_eq!(
            Region::parse(&lat, "annulus 4 4 0 1")
                .unwrap()
                .boundary_components(),
            Ok(2)
        );
        let two = Region::parse(&lat, "rect 0 0 1 1")
            .unwrap()
            .union(&Region::parse(&lat, "rect 4 4 5 6").unwrap())
            .unwrap();
        assert_eq!(two.boundary_components(), Ok(2));
        assert_eq!(Region::full(&lat).boundary_components(), Ok(0));
        assert!(Region::parse(&lat, "rect 0 0 8 1")
            .unwrap()
            .boundary_components()
            .is_err());
        let partial = Region::from_qubits(&torus(4), [0]).unwrap();
        assert_eq!(partial.boundary_components(), Ok(1));
    }

    #[test]
    fn med_sequence_default_l6() {
        let lat = torus(6);
        let seq = build_med_sequence(&lat, 3, &MedWidths::default_for(&lat)).unwrap();
        assert_eq!(seq.len(), 3);
        assert_eq!(seq.stages()[2].abc().len(), 72);
        assert!(seq.locality_radius() < 3);
        let mut w = MedWidths::default_for(&lat);
        w.locality_radius = Some(2);
        assert!(build_med_sequence(&lat, 3, &w).is_ok());
        w.locality_radius = Some(1);
        let e = build_med_sequence(&lat, 3, &w).unwrap_err();
        assert!(e.to_string().contains("B1C1"), "{e}");
    }

    #[test]
    fn med_sequence_rejects_infeasible_widths() {
        let lat = torus(4);
        let mut w = MedWidths::default_for(&lat);
        w.band_height = 4;
        assert!(build_med_sequence(&lat, 3, &w)
            .unwrap_err()
            .to_string()
            .contains("band_height"));
        let w = MedWidths::default_for(&lat);
        assert!(build_med_sequence(&lat, 2, &w).is_err());
        assert!(build_med_sequence(&lat, 5, &w).is_err());
        assert!(build_med_sequence(&lat, 4, &w).is_ok());
    }

    #[test]
    fn random_sequences_are_valid() {
        let lat = Arc::new(TorusLattice::ring(9).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for stages in 1..5 {
            let s = PartitionSequence::random(&lat, stages, &mut rng).unwrap();
            assert_eq!(s.len(), stages);
        }
    }
}
