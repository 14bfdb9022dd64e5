//! Symmetry and duality properties of the searches.

use fuglede_core::verifier::{direction_coverage, verify_conjecture, Symmetry, VerifyOptions};
use fuglede_core::{
    find_complement, find_spectrum, is_spectral, is_tile, verify_spectral_pair, verify_tiling,
    Element, Group, SubsetMask,
};
use proptest::prelude::*;

fn group(p: u64, q: u64) -> Group {
    Group::from_primes(p, q).unwrap()
}

fn pairs() -> impl Strategy<Value = (u64, u64)> {
    prop::sample::select(vec![(2, 3), (3, 2), (2, 5), (5, 2), (3, 5)])
}

/// A group with a random subset of it.
fn group_and_set() -> impl Strategy<Value = (Group, SubsetMask)> {
    pairs().prop_flat_map(|(p, q)| {
        let n = (p * p * q) as usize;
        prop::collection::vec(any::<bool>(), n).prop_map(move |bits| {
            let g = group(p, q);
            let s = SubsetMask::from_indices(n, (0..n).filter(|&i| bits[i]));
            (g, s)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn translation_invariance((g, s) in group_and_set(), shift in any::<prop::sample::Index>()) {
        let t = g.translate(&s, shift.index(g.order()));
        prop_assert_eq!(is_spectral(&g, &s), is_spectral(&g, &t));
        prop_assert_eq!(is_tile(&g, &s), is_tile(&g, &t));
    }

    #[test]
    fn affine_invariance((g, s) in group_and_set(), pick in any::<prop::sample::Index>()) {
        let maps: Vec<_> = g.enumerate_affine_maps(u64::MAX).unwrap().collect();
        let m = &maps[pick.index(maps.len())];
        let image = g.apply_map(m, &s);
        prop_assert_eq!(image.len(), s.len());
        prop_assert_eq!(is_spectral(&g, &s), is_spectral(&g, &image));
        prop_assert_eq!(is_tile(&g, &s), is_tile(&g, &image));
    }

    #[test]
    fn spectral_pairs_are_symmetric((g, s) in group_and_set()) {
        if let Some(c) = find_spectrum(&g, &s).witness() {
            prop_assert!(c.spectrum.contains(0));
            prop_assert!(verify_spectral_pair(&g, &s, &c.spectrum));
            prop_assert!(verify_spectral_pair(&g, &c.spectrum, &s));
        }
    }

    #[test]
    fn tilings_are_symmetric((g, s) in group_and_set()) {
        if let Some(c) = find_complement(&g, &s).witness() {
            prop_assert!(c.complement.contains(0));
            prop_assert!(verify_tiling(&g, &s, &c.complement));
            prop_assert!(verify_tiling(&g, &c.complement, &s));
            prop_assert!(is_tile(&g, &c.complement));
        }
    }

    #[test]
    fn orbit_soundness(bits in 0u64..(1 << 18), pick in any::<prop::sample::Index>()) {
        let g = group(3, 2);
        let sym = Symmetry::new(&g, u64::MAX).unwrap();
        let maps: Vec<_> = g.enumerate_affine_maps(u64::MAX).unwrap().collect();
        let s = SubsetMask::from_bits(18, bits);
        let rep = sym.canonical_form(&g, &s);
        prop_assert!(rep.is_empty() || rep.contains(0));
        prop_assert!(sym.is_canonical(&g, &rep));
        let image = g.apply_map(&maps[pick.index(maps.len())], &rep);
        prop_assert_eq!(sym.canonical_form(&g, &image), rep);
    }

    #[test]
    fn p_plus_one_points_cover_every_direction(
        (p, q) in prop::sample::select(vec![(3, 2), (5, 2), (7, 2), (5, 3)]),
        seed in any::<u64>(),
        level in any::<prop::sample::Index>(),
    ) {
        let g = group(p, q);
        let (p, q) = (p as u32, q as u32);
        let v = level.index(q as usize) as u32;
        // p + 1 distinct points of the coset Z_p^2 x {v}
        let mut points = SubsetMask::empty(g.order());
        let mut x = seed;
        while points.len() < p as usize + 1 {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let k = (x >> 33) as u32 % (p * p);
            points.insert(g.index(Element::new(k / p, k % p, v)));
        }
        prop_assert!(direction_coverage(&g, &points));
    }
}

#[test]
fn orbit_sizes_sum_to_all_subsets() {
    let g = group(2, 3);
    let sym = Symmetry::new(&g, u64::MAX).unwrap();
    let total: u64 = (0u64..4096)
        .map(|b| SubsetMask::from_bits(12, b))
        .filter(|s| sym.is_canonical(&g, s))
        .map(|s| sym.orbit_size(&g, &s))
        .sum();
    assert_eq!(total, 4096);
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let g = group(5, 2);
    let one = verify_conjecture(&g, &VerifyOptions::sampled(3, 700).with_threads(Some(1))).unwrap();
    let four =
        verify_conjecture(&g, &VerifyOptions::sampled(3, 700).with_threads(Some(4))).unwrap();
    assert_eq!(one, four);
    assert_eq!(one.render(), four.render());
    let g = group(3, 2);
    let direct = verify_conjecture(&g, &VerifyOptions::exhaustive().with_threads(Some(1))).unwrap();
    let pooled = verify_conjecture(&g, &VerifyOptions::exhaustive().with_threads(Some(3))).unwrap();
    assert_eq!(direct.render(), pooled.render());
}

#[test]
fn subgroups_are_spectral_tiles() {
    for (p, q) in [(2, 3), (3, 2), (5, 3)] {
        let g = group(p, q);
        for h in g.subgroups() {
            assert!(is_spectral(&g, &h), "{h:?}");
            assert!(is_tile(&g, &h), "{h:?}");
        }
    }
}
