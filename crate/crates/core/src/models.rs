//! Concrete stabilizer models.
//!
//! Toric code: one qubit per edge of an `L × L` torus. Slot 0 of cell `(x, y)`
//! is the edge to `(x+1, y)`, slot 1 the edge to `(x, y+1)`. The star at
//! vertex `v` is `X` on the four edges meeting at `v`; the plaquette with
//! lower-left corner `v` is `Z` on its four sides. The last star and the last
//! plaquette are dropped, since each family multiplies to the identity.
//!
//! Cubic code: two qubits per site of an `L × L × L` torus. For each cube with
//! origin corner `c`, writing offsets as `xyz`:
//!
//! ```text
//! X-type  qubit 0: X on c + {000, 100, 010, 001}
//!         qubit 1: X on c + {000, 110, 011, 101}
//! Z-type  qubit 0: Z on c + {111, 001, 100, 010}
//!         qubit 1: Z on c + {111, 011, 101, 110}
//! ```
//!
//! Each cube thus carries one generator of each type, touching all eight
//! corners. The generators are dependent; a maximal independent subset is
//! kept in lattice order.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVector};
use crate::geometry::{Placement, TorusLattice};
use crate::pauli::StabilizerGroup;

fn symplectic_rows(n: usize, rows: Vec<(Vec<usize>, Vec<usize>)>) -> BitMatrix {
    let mut m = BitMatrix::zeros(rows.len(), 2 * n);
    for (r, (xs, zs)) in rows.iter().enumerate() {
        for &q in xs {
            m.set(r, q, !m.get(r, q));
        }
        for &q in zs {
            m.set(r, n + q, !m.get(r, n + q));
        }
    }
    m
}

/// `layers` independent toric codes sharing an `L × L` torus.
pub fn stacked_toric_code(l: usize, layers: usize) -> Result<(StabilizerGroup, Arc<TorusLattice>)> {
    let lat = TorusLattice::new(vec![l, l], Placement::Edges { layers })?;
    let n = lat.num_qubits();
    let cells = lat.num_cells();
    let mut rows = Vec::new();
    for layer in 0..layers {
        let e = |cell: usize, axis: usize| lat.qubit(cell, layer * 2 + axis);
        for v in 0..cells - 1 {
            let star = vec![
                e(v, 0),
                e(v, 1),
                e(lat.shift(v, &[-1, 0]), 0),
                e(lat.shift(v, &[0, -1]), 1),
            ];
            rows.push((star, vec![]));
        }
        for v in 0..cells - 1 {
            let plaq = vec![
                e(v, 0),
                e(v, 1),
                e(lat.shift(v, &[0, 1]), 0),
                e(lat.shift(v, &[1, 0]), 1),
            ];
            rows.push((vec![], plaq));
        }
    }
    let group = StabilizerGroup::new(n, symplectic_rows(n, rows))?;
    Ok((group, Arc::new(lat)))
}

pub fn toric_code(l: usize) -> Result<(StabilizerGroup, Arc<TorusLattice>)> {
    stacked_toric_code(l, 1)
}

/// `ZᵢZᵢ₊₁` on a ring of `n` qubits; the last check is dropped as dependent.
pub fn repetition_code(n: usize) -> Result<StabilizerGroup> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "repetition code needs n >= 2, got {n}"
        )));
    }
    let rows = (0..n - 1).map(|i| (vec![], vec![i, i + 1])).collect();
    StabilizerGroup::new(n, symplectic_rows(n, rows))
}

const CUBIC_X: [&[[i64; 3]]; 2] = [
    &[[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]],
    &[[0, 0, 0], [1, 1, 0], [0, 1, 1], [1, 0, 1]],
];
const CUBIC_Z: [&[[i64; 3]]; 2] = [
    &[[1, 1, 1], [0, 0, 1], [1, 0, 0], [0, 1, 0]],
    &[[1, 1, 1], [0, 1, 1], [1, 0, 1], [1, 1, 0]],
];

/// Both generator families of the cubic code, before removing dependencies.
pub fn cubic_code_generators(l: usize) -> Result<(BitMatrix, Arc<TorusLattice>)> {
    let lat = TorusLattice::cubic_sites(l, 2)?;
    let n = lat.num_qubits();
    let mut rows = Vec::with_capacity(2 * lat.num_cells());
    for (table, is_x) in [(&CUBIC_X, true), (&CUBIC_Z, false)] {
        for c in 0..lat.num_cells() {
            let mut qs = Vec::with_capacity(8);
            for (slot, offsets) in table.iter().enumerate() {
                for o in offsets.iter() {
                    qs.push(lat.qubit(lat.shift(c, o), slot));
                }
            }
            rows.push(if is_x { (qs, vec![]) } else { (vec![], qs) });
        }
    }
    Ok((symplectic_rows(n, rows), Arc::new(lat)))
}

pub fn haah_cubic_code(l: usize) -> Result<(StabilizerGroup, Arc<TorusLattice>)> {
    let (gens, lat) = cubic_code_generators(l)?;
    let group = StabilizerGroup::from_spanning(lat.num_qubits(), gens)?;
    Ok((group, lat))
}

/// `s` independent commuting generators on `n` qubits, each drawn uniformly
/// from the normalizer of those before it.
pub fn random_stabilizer_code(n: usize, s: usize, seed: u64) -> Result<StabilizerGroup> {
    if s > n {
        return Err(Error::Precondition(format!("{s} generators on {n} qubits")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut group = StabilizerGroup::trivial(n);
    while group.num_generators() < s {
        let normalizer = group.normalizer_basis();
        let mut v = BitVector::zeros(2 * n);
        for row in normalizer.row_vectors() {
            if rng.random::<bool>() {
                v.xor_assign(&row);
            }
        }
        if group.contains_symplectic(&v) {
            continue;
        }
        let mut gens = group.check_matrix().clone();
        gens.push_row(&v)?;
        group = StabilizerGroup::new(n, gens)?;
    }
    Ok(group)
}

pub fn ghz_code(n: usize) -> Result<StabilizerGroup> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "GHZ state needs n >= 2, got {n}"
        )));
    }
    let mut rows = vec![((0..n).collect(), vec![])];
    rows.extend((0..n - 1).map(|i| (vec![], vec![i, i + 1])));
    StabilizerGroup::new(n, symplectic_rows(n, rows))
}

/// Open-chain cluster state: `Zᵢ₋₁ Xᵢ Zᵢ₊₁`.
pub fn cluster_chain(n: usize) -> Result<StabilizerGroup> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "cluster chain needs n >= 2, got {n}"
        )));
    }
    let rows = (0..n)
        .map(|i| {
            let mut zs = Vec::new();
            if i > 0 {
                zs.push(i - 1);
            }
            if i + 1 < n {
                zs.push(i + 1);
            }
            (vec![i], zs)
        })
        .collect();
    StabilizerGroup::new(n, symplectic_rows(n, rows))
}

/// `|0…0⟩`, stabilized by every `Zᵢ`.
pub fn product_state(n: usize) -> StabilizerGroup {
    let rows = (0..n).map(|i| (vec![], vec![i])).collect();
    StabilizerGroup::new(n, symplectic_rows(n, rows)).expect("single-qubit Z checks")
}

/// The `[[5,1,3]]` code generated by cyclic shifts of `XZZXI`.
pub fn five_qubit_code() -> StabilizerGroup {
    StabilizerGroup::from_strings(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]).expect("valid code")
}

pub fn steane_code() -> StabilizerGroup {
    StabilizerGroup::from_strings(&[
        "IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ",
    ])
    .expect("valid code")
}

#[derive(Clone, Debug)]
pub struct NamedCode {
    pub name: &'static str,
    pub description: &'static str,
    pub group: StabilizerGroup,
}

/// Small codes with known properties, used as oracle anchors.
pub fn named_small_codes() -> Vec<NamedCode> {
    let named = |name, description, group| NamedCode {
        name,
        description,
        group,
    };
    vec![
        named("bell", "XX, ZZ", ghz_code(2).unwrap()),
        named("ghz-3", "XXX, ZZI, IZZ", ghz_code(3).unwrap()),
        named("ghz-4", "XXXX, ZZII, IZZI, IIZZ", ghz_code(4).unwrap()),
        named("repetition-3", "ZZI, IZZ", repetition_code(3).unwrap()),
        named("five-qubit", "cyclic shifts of XZZXI", five_qubit_code()),
        named("steane", "Hamming [7,4] checks in X and Z", steane_code()),
        named(
            "cluster-4",
            "Z(i-1) X(i) Z(i+1), open chain",
            cluster_chain(4).unwrap(),
        ),
        named(
            "cluster-6",
            "Z(i-1) X(i) Z(i+1), open chain",
            cluster_chain(6).unwrap(),
        ),
        named("product-3", "ZII, IZI, IIZ", product_state(3)),
    ]
}

/// A model together with the lattice its regions live on.
#[derive(Clone, Debug)]
pub struct Model {
    pub spec: ModelSpec,
    pub group: StabilizerGroup,
    pub lattice: Arc<TorusLattice>,
}

/// Name plus `key=value` parameters, written `toric:L=4` or
/// `random:n=8,s=6,seed=7`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSpec {
    pub name: String,
    pub params: Vec<(String, u64)>,
}

impl ModelSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (name, rest) = text.split_once(':').unwrap_or((text, ""));
        if name.is_empty() {
            return Err(Error::UnknownModel(format!("empty model name in '{text}'")));
        }
        let mut params = Vec::new();
        for item in rest.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| {
                Error::UnknownModel(format!("parameter '{item}' is not key=value"))
            })?;
            let v: u64 = v.trim().parse().map_err(|_| {
                Error::UnknownModel(format!("parameter '{item}' is not an integer"))
            })?;
            params.push((k.trim().to_string(), v));
        }
        Ok(Self {
            name: name.to_string(),
            params,
        })
    }

    pub fn get(&self, key: &str) -> Option<u64> {
        self.params
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(key))
            .map(|p| p.1)
    }

    pub fn with_param(&self, key: &str, value: u64) -> Self {
        let mut out = self.clone();
        match out
            .params
            .iter_mut()
            .find(|(k, _)| k.eq_ignore_ascii_case(key))
        {
            Some(p) => p.1 = value,
            None => out.params.push((key.to_string(), value)),
        }
        out
    }

    fn require(&self, key: &str) -> Result<usize> {
        self.get(key)
            .map(|v| v as usize)
            .ok_or_else(|| Error::UnknownModel(format!("{}: missing parameter {key}", self.name)))
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        match self
            .params
            .iter()
            .find(|(k, _)| !allowed.iter().any(|a| a.eq_ignore_ascii_case(k)))
        {
            Some((k, _)) => Err(Error::UnknownModel(format!(
                "{}: unexpected parameter {k}",
                self.name
            ))),
            None => Ok(()),
        }
    }

    pub fn build(&self) -> Result<Model> {
        let on_ring = |group: StabilizerGroup| -> Result<(StabilizerGroup, Arc<TorusLattice>)> {
            let lat = TorusLattice::ring(group.num_qubits())?;
            Ok((group, Arc::new(lat)))
        };
        let (group, lattice) = match self.name.as_str() {
            "toric" => {
                self.check_keys(&["L", "layers"])?;
                stacked_toric_code(self.require("L")?, self.get("layers").unwrap_or(1) as usize)?
            }
            "cubic" => {
                self.check_keys(&["L"])?;
                haah_cubic_code(self.require("L")?)?
            }
            "repetition" => {
                self.check_keys(&["n"])?;
                on_ring(repetition_code(self.require("n")?)?)?
            }
            "random" => {
                self.check_keys(&["n", "s", "seed"])?;
                let seed = self.get("seed").unwrap_or(0);
                on_ring(random_stabilizer_code(
                    self.require("n")?,
                    self.require("s")?,
                    seed,
                )?)?
            }
            "ghz" => {
                self.check_keys(&["n"])?;
                on_ring(ghz_code(self.require("n")?)?)?
            }
            "cluster" => {
                self.check_keys(&["n"])?;
                on_ring(cluster_chain(self.require("n")?)?)?
            }
            "product" => {
                self.check_keys(&["n"])?;
                on_ring(product_state(self.require("n")?))?
            }
            "five-qubit" => {
                self.check_keys(&[])?;
                on_ring(five_qubit_code())?
            }
            "steane" => {
                self.check_keys(&[])?;
                on_ring(steane_code())?
            }
            other => return Err(Error::UnknownModel(format!("no model named '{other}'"))),
        };
        Ok(Model {
            spec: self.clone(),
            group,
            lattice,
        })
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        for (i, (k, v)) in self.params.iter().enumerate() {
            write!(f, "{}{k}={v}", if i == 0 { ':' } else { ',' })?;
        }
        Ok(())
    }
}

pub fn build_model(text: &str) -> Result<Model> {
    ModelSpec::parse(text)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toric_parameters() {
        for l in 2..7 {
            let (g, lat) = toric_code(l).unwrap();
            let p = g.code_parameters();
            assert_eq!((p.n, p.k), (2 * l * l, 2));
            assert_eq!(lat.num_qubits(), p.n);
            // every generator has weight 4
            assert!(g.generator_paulis().all(|p| p.weight() == 4));
        }
        let (g, _) = stacked_toric_code(4, 2).unwrap();
        assert_eq!(g.code_parameters().k, 4);
    }

    #[test]
    fn toric_dropped_generators_are_products() {
        // Independent recount: full rank of all L² stars and L² plaquettes.
        let l = 4;
        let lat = TorusLattice::square_edges(l).unwrap();
        let n = lat.num_qubits();
        let mut stars = BitMatrix::zeros(0, n);
        for v in 0..lat.num_cells() {
            let mut row = BitVector::zeros(n);
            for q in [
                lat.qubit(v, 0),
                lat.qubit(v, 1),
                lat.qubit(lat.shift(v, &[-1, 0]), 0),
                lat.qubit(lat.shift(v, &[0, -1]), 1),
            ] {
                row.set(q, true);
            }
            stars.push_row(&row).unwrap();
        }
        assert_eq!(stars.rank(), l * l - 1);
    }

    #[test]
    fn repetition_parameters() {
        let g = repetition_code(5).unwrap();
        assert_eq!(g.code_parameters().k, 1);
        assert!(repetition_code(1).is_err());
    }

    #[test]
    fn cubic_generators_commute() {
        for l in 2..=4 {
            let (gens, lat) = cubic_code_generators(l).unwrap();
            let n = lat.num_qubits();
            let swapped = {
                let mut cols: Vec<usize> = (n..2 * n).collect();
                cols.extend(0..n);
                gens.select_columns(&cols)
            };
            for r in 0..gens.rows() {
                assert!(swapped.mul_vec(&gens.row(r)).is_zero(), "L={l} row {r}");
                assert_eq!(gens.row(r).count_ones(), 8);
            }
        }
    }

    #[test]
    fn cubic_degeneracy_pinned() {
        // Pinned from the rank computation; matches 4L − 2 for L a power of two.
        let ks: Vec<usize> = [2, 4]
            .iter()
            .map(|&l| haah_cubic_code(l).unwrap().0.code_parameters().k)
            .collect();
        assert_eq!(ks, vec![6, 14]);
        assert_eq!(haah_cubic_code(3).unwrap().0.code_parameters().k, 2);
    }

    #[test]
    fn random_codes() {
        let a = random_stabilizer_code(8, 6, 7).unwrap();
        let b = random_stabilizer_code(8, 6, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.code_parameters().k, 2);
        assert_eq!(a.num_generators(), 6);
        assert_ne!(a, random_stabilizer_code(8, 6, 8).unwrap());
        assert_eq!(
            random_stabilizer_code(5, 5, 1).unwrap().code_parameters().k,
            0
        );
        assert!(random_stabilizer_code(3, 4, 1).is_err());
    }

    #[test]
    fn catalog() {
        let codes = named_small_codes();
        let ghz = codes.iter().find(|c| c.name == "ghz-3").unwrap();
        assert_eq!(ghz.group.generator_strings(), vec!["XXX", "ZZI", "IZZ"]);
        let five = codes.iter().find(|c| c.name == "five-qubit").unwrap();
        assert_eq!(five.group.brute_force_distance(5), Some(3));
        assert_eq!(steane_code().code_parameters().k, 1);
        assert_eq!(steane_code().brute_force_distance(7), Some(3));
    }

    #[test]
    fn model_specs() {
        let m = build_model("toric:L=4").unwrap();
        assert_eq!(m.group.num_qubits(), 32);
        let m = build_model("random:n=8,s=6,seed=7").unwrap();
        assert_eq!(m.group.code_parameters().k, 2);
        assert_eq!(m.lattice.num_qubits(), 8);
        assert_eq!(build_model("cubic:L=2").unwrap().group.num_qubits(), 16);
        assert_eq!(build_model("five-qubit").unwrap().group.num_qubits(), 5);
        assert!(matches!(
            build_model("chamon:L=2"),
            Err(Error::UnknownModel(_))
        ));
        assert!(matches!(
            build_model("toric:L=x"),
            Err(Error::UnknownModel(_))
        ));
        assert!(matches!(build_model("toric"), Err(Error::UnknownModel(_))));
        assert!(matches!(
            build_model("toric:L=4,q=1"),
            Err(Error::UnknownModel(_))
        ));
        let spec = ModelSpec::parse("random:n=8,s=6,seed=7").unwrap();
        assert_eq!(spec.to_string(), "random:n=8,s=6,seed=7");
        assert_eq!(
            spec.with_param("seed", 9).to_string(),
            "random:n=8,s=6,seed=9"
        );
    }
}
