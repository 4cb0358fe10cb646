use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use topobound_core::entropy::{
    cmi, entropy_of, med_bound, mutual_information, telescoping_residual,
};
use topobound_core::geometry::{build_med_sequence, MedWidths};
use topobound_core::models::{random_stabilizer_code, toric_code};
use topobound_core::{PartitionSequence, Region, TorusLattice, Tripartition};

fn ring(n: usize) -> Arc<TorusLattice> {
    Arc::new(TorusLattice::ring(n).unwrap())
}

fn region_from_bits(lat: &Arc<TorusLattice>, bits: u32) -> Region {
    let n = lat.num_qubits();
    Region::from_qubits(lat, (0..n).filter(|&q| bits >> q & 1 == 1)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn strong_subadditivity(n in 3usize..=10, s_frac in 0.0f64..=1.0, seed: u64, labels in proptest::collection::vec(0u8..4, 10)) {
        let s = (s_frac * n as f64) as usize;
        let g = random_stabilizer_code(n, s, seed).unwrap();
        let lat = ring(n);
        let part = |l: u8| Region::from_qubits(&lat, (0..n).filter(|&q| labels[q] == l)).unwrap();
        let t = Tripartition::new(part(0), part(1), part(2)).unwrap();
        prop_assert!(cmi(&g, &t) >= 0);
    }

    #[test]
    fn pure_states_have_symmetric_entropy(n in 2usize..=10, seed: u64, bits: u32) {
        let g = random_stabilizer_code(n, n, seed).unwrap();
        let lat = ring(n);
        let r = region_from_bits(&lat, bits);
        prop_assert_eq!(entropy_of(&g, &r), entropy_of(&g, &r.complement()));
    }

    #[test]
    fn entropy_bounds_and_subadditivity(n in 2usize..=10, s in 0usize..=10, seed: u64, a: u32, b: u32) {
        let s = s.min(n);
        let g = random_stabilizer_code(n, s, seed).unwrap();
        let lat = ring(n);
        let ra = region_from_bits(&lat, a);
        let rb = region_from_bits(&lat, b).difference(&ra).unwrap();
        let sa = entropy_of(&g, &ra);
        prop_assert!(sa <= ra.len());
        prop_assert!(mutual_information(&g, &ra, &rb).unwrap() >= 0);
        // Araki-Lieb: |S(A) − S(B)| ≤ S(AB)
        let sb = entropy_of(&g, &rb) as i64;
        let sab = entropy_of(&g, &ra.union(&rb).unwrap()) as i64;
        prop_assert!((sa as i64 - sb).abs() <= sab);
        // the whole system carries exactly the k logical bits
        prop_assert_eq!(entropy_of(&g, &Region::full(&lat)), n - s);
    }

    #[test]
    fn telescoping_is_exact(n in 2usize..=10, s in 0usize..=10, seed: u64, stages in 1usize..=5) {
        let s = s.min(n);
        let g = random_stabilizer_code(n, s, seed).unwrap();
        let lat = ring(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let seq = PartitionSequence::random(&lat, stages, &mut rng).unwrap();
        prop_assert_eq!(telescoping_residual(&g, &seq), 0);
        prop_assert!(med_bound(&g, &seq).holds);
    }
}

#[test]
fn toric_entropy_is_translation_invariant() {
    let (g, lat) = toric_code(5).unwrap();
    let base = Region::parse(&lat, "rect 0 0 1 2").unwrap();
    let s0 = entropy_of(&g, &base);
    for dx in 0..5 {
        for dy in 0..5 {
            let shifted = Region::parse(
                &lat,
                &format!("rect {dx} {dy} {} {}", (dx + 1) % 5, (dy + 2) % 5),
            )
            .unwrap();
            assert_eq!(entropy_of(&g, &shifted), s0, "shift ({dx}, {dy})");
        }
    }
}

#[test]
fn toric_med_constant_across_sizes() {
    for l in 3..=6 {
        let (g, lat) = toric_code(l).unwrap();
        let seq = build_med_sequence(&lat, 3, &MedWidths::default_for(&lat)).unwrap();
        let v = med_bound(&g, &seq);
        assert_eq!((v.lhs, v.rhs, v.slack), (2.0, 2.0, 0.0), "L={l}");
    }
}

/// Plain row reduction over `u8` rows, independent of the packed engine.
fn naive_rank(mut rows: Vec<Vec<u8>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] == 1) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] == 1 {
                row.iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn toric_star_blocks_follow_area_law() {
    let l_sys = 8i64;
    let (g, lat) = toric_code(l_sys as usize).unwrap();
    let n = (2 * l_sys * l_sys) as usize;
    let edge = |x: i64, y: i64, axis: usize| {
        (2 * (y.rem_euclid(l_sys) * l_sys + x.rem_euclid(l_sys)) as usize) + axis
    };
    // all L² stars and L² plaquettes, written out from coordinates
    let mut gens = Vec::new();
    for x in 0..l_sys {
        for y in 0..l_sys {
            let mut star = vec![0u8; 2 * n];
            for e in [
                edge(x, y, 0),
                edge(x, y, 1),
                edge(x - 1, y, 0),
                edge(x, y - 1, 1),
            ] {
                star[e] = 1;
            }
            let mut plaq = vec![0u8; 2 * n];
            for e in [
                edge(x, y, 0),
                edge(x, y, 1),
                edge(x, y + 1, 0),
                edge(x + 1, y, 1),
            ] {
                plaq[n + e] = 1;
            }
            gens.push(star);
            gens.push(plaq);
        }
    }
    let s = naive_rank(gens.clone());
    assert_eq!(s, n - 2);
    for l in 2..=6i64 {
        let mut inside = vec![false; n];
        for x in 0..l {
            for y in 0..l {
                for e in [
                    edge(x, y, 0),
                    edge(x, y, 1),
                    edge(x - 1, y, 0),
                    edge(x, y - 1, 1),
                ] {
                    inside[e] = true;
                }
            }
        }
        let restricted: Vec<Vec<u8>> = gens
            .iter()
            .map(|row| {
                (0..n)
                    .filter(|&q| !inside[q])
                    .flat_map(|q| [row[q], row[n + q]])
                    .collect()
            })
            .collect();
        let size = inside.iter().filter(|&&b| b).count();
        let expected = size - (s - naive_rank(restricted));
        let region = Region::parse(&lat, &format!("star 0 0 {} {}", l - 1, l - 1)).unwrap();
        assert_eq!(region.len(), size);
        assert_eq!(entropy_of(&g, &region), expected, "l={l}");
        assert_eq!(region.boundary_components(), Ok(1));
    }
}
