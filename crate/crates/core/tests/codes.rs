use std::collections::BTreeSet;
use std::sync::Arc;

use topobound_core::models::{five_qubit_code, haah_cubic_code, repetition_code, toric_code};
use topobound_core::pauli::{symplectic_product, Combinations};
use topobound_core::{Region, StabilizerGroup, TorusLattice};

fn ring(n: usize) -> Arc<TorusLattice> {
    Arc::new(TorusLattice::ring(n).unwrap())
}

fn logicals_are_canonical(g: &StabilizerGroup) {
    let set = g.logical_operators();
    assert_eq!(set.len(), g.code_parameters().k);
    let ops: Vec<_> = set.operators().cloned().collect();
    for p in &ops {
        assert!(g.commutes_with_all(p));
        assert!(!g.contains(p));
    }
    for (i, (x1, z1)) in set.pairs.iter().enumerate() {
        assert!(symplectic_product(x1, z1).unwrap());
        for (j, (x2, z2)) in set.pairs.iter().enumerate() {
            if i != j {
                for (a, b) in [(x1, x2), (x1, z2), (z1, x2), (z1, z2)] {
                    assert!(!symplectic_product(a, b).unwrap());
                }
            }
        }
    }
}

#[test]
fn logical_pairs() {
    logicals_are_canonical(&toric_code(4).unwrap().0);
    logicals_are_canonical(&five_qubit_code());
    logicals_are_canonical(&repetition_code(4).unwrap());
    logicals_are_canonical(&haah_cubic_code(2).unwrap().0);
}

#[test]
fn small_regions_are_correctable() {
    let five = five_qubit_code();
    let lat = ring(5);
    for w in 0..3 {
        for subset in Combinations::new(5, w) {
            let r = Region::from_qubits(&lat, subset).unwrap();
            assert!(five.is_correctable_region(&r).correctable);
        }
    }
    let (toric, tl) = toric_code(3).unwrap();
    for subset in Combinations::new(18, 2) {
        let r = Region::from_qubits(&tl, subset).unwrap();
        assert!(toric.is_correctable_region(&r).correctable);
    }
}

#[test]
fn correctability_is_monotone() {
    let (g, lat) = toric_code(3).unwrap();
    // a non-contractible row of horizontal edges carries a logical
    let row: Vec<usize> = (0..3).map(|x| lat.qubit(lat.cell_at(&[x, 0]), 0)).collect();
    let r = Region::from_qubits(&lat, row.clone()).unwrap();
    let verdict = g.is_correctable_region(&r);
    assert!(!verdict.correctable);
    let w = verdict.witness.unwrap();
    assert!(w.support().iter().all(|q| row.contains(q)));
    assert!(g.commutes_with_all(&w) && !g.contains(&w));
    for extra in 0..18 {
        let bigger = Region::from_qubits(&lat, row.iter().copied().chain([extra])).unwrap();
        assert!(!g.is_correctable_region(&bigger).correctable);
    }
    for drop in &row {
        let smaller = Region::from_qubits(&lat, row.iter().copied().filter(|q| q != drop)).unwrap();
        assert!(g.is_correctable_region(&smaller).correctable);
    }
}

/// All edge sets of the given size that are connected through shared vertices.
fn connected_edge_sets(lat: &TorusLattice, size: usize) -> BTreeSet<Vec<usize>> {
    let n = lat.num_qubits();
    let ends = |q: usize| {
        let cell = lat.cell_of(q);
        let axis = q % 2;
        let mut d = [0i64; 2];
        d[axis] = 1;
        [cell, lat.shift(cell, &d)]
    };
    let touches = |a: usize, b: usize| ends(a).iter().any(|v| ends(b).contains(v));
    let mut frontier: BTreeSet<Vec<usize>> = (0..n).map(|q| vec![q]).collect();
    for _ in 1..size {
        let mut next = BTreeSet::new();
        for set in &frontier {
            for q in 0..n {
                if !set.contains(&q) && set.iter().any(|&e| touches(e, q)) {
                    let mut grown = set.clone();
                    grown.push(q);
                    grown.sort_unstable();
                    next.insert(grown);
                }
            }
        }
        frontier = next;
    }
    frontier
}

#[test]
fn toric_distance_lower_bounds() {
    for l in [4usize, 5] {
        let (g, lat) = toric_code(l).unwrap();
        let sets = connected_edge_sets(&lat, l - 1);
        assert!(!sets.is_empty());
        for set in sets {
            let r = Region::from_qubits(&lat, set.clone()).unwrap();
            assert!(g.is_correctable_region(&r).correctable, "L={l} {set:?}");
        }
    }
}

#[test]
fn cubic_degeneracy_growth() {
    // Independent cross-check for L a power of two: k = 4L − 2.
    for l in [2usize, 4, 8] {
        let (g, lat) = haah_cubic_code(l).unwrap();
        assert_eq!(lat.num_qubits(), 2 * l * l * l);
        assert_eq!(g.code_parameters().k, 4 * l - 2, "L={l}");
    }
}
