//! Orbit reduction under the affine group `x -> (A u, r v) + t`.
//!
//! Both spectrality and tiling are invariant under these maps, so one
//! representative per orbit suffices. The representative is the least image
//! in the [`SubsetMask`] order. Any set containing 0 precedes every set that
//! does not, so the least image of a nonempty set contains 0 and is of the
//! form `L(S) - x` with `L` linear and `x` in `L(S)`. Only those
//! `|L| * |S|` images are examined.

use crate::error::{Error, Result};
use crate::group::{Group, SubsetMask};

/// Default cap on `|GL(2,p)| * (q - 1) * |G|`.
pub const DEFAULT_SYMMETRY_CAP: u64 = 50_000_000;

/// The linear part of the affine group as index permutations.
#[derive(Debug, Clone)]
pub struct Symmetry {
    linear: Vec<Vec<u16>>,
    affine_size: u64,
}

impl Symmetry {
    pub fn new(group: &Group, cap: u64) -> Result<Self> {
        let affine_size = group.affine_group_size();
        if affine_size > cap {
            return Err(Error::SymmetryGroupTooLarge {
                size: affine_size,
                cap,
            });
        }
        let mut linear = Vec::new();
        for matrix in group.gl2() {
            for unit in 1..group.q() as u32 {
                let m = crate::AffineMap {
                    matrix,
                    unit,
                    shift: crate::Element::ZERO,
                };
                linear.push(
                    (0..group.order())
                        .map(|i| group.index(group.apply_map_element(&m, group.element(i))) as u16)
                        .collect(),
                );
            }
        }
        Ok(Symmetry {
            linear,
            affine_size,
        })
    }

    /// Size of the full affine group.
    pub fn affine_size(&self) -> u64 {
        self.affine_size
    }

    fn image(perm: &[u16], s: &SubsetMask) -> SubsetMask {
        let mut out = SubsetMask::empty(s.universe());
        for i in s.iter() {
            out.insert(perm[i] as usize);
        }
        out
    }

    /// Images `L(S) - x` for every linear `L` and `x` in `L(S)`, stopping
    /// early when `visit` returns `false`.
    fn for_each_pointed_image(
        &self,
        group: &Group,
        s: &SubsetMask,
        mut visit: impl FnMut(SubsetMask) -> bool,
    ) {
        for perm in &self.linear {
            let img = Self::image(perm, s);
            for x in img.iter() {
                if !visit(group.translate(&img, group.neg_idx(x))) {
                    return;
                }
            }
        }
    }

    /// Least element of the orbit of `S`.
    pub fn canonical_form(&self, group: &Group, s: &SubsetMask) -> SubsetMask {
        if s.is_empty() {
            return *s;
        }
        let mut best = None::<SubsetMask>;
        self.for_each_pointed_image(group, s, |img| {
            if best.is_none_or(|b| img < b) {
                best = Some(img);
            }
            true
        });
        best.expect("nonempty orbit")
    }

    /// Whether `S` is its own canonical form.
    pub fn is_canonical(&self, group: &Group, s: &SubsetMask) -> bool {
        if s.is_empty() {
            return true;
        }
        if !s.contains(0) {
            return false;
        }
        let mut canonical = true;
        self.for_each_pointed_image(group, s, |img| {
            canonical = img >= *s;
            canonical
        });
        canonical
    }

    /// Number of affine maps fixing `S`.
    pub fn stabilizer_size(&self, group: &Group, s: &SubsetMask) -> u64 {
        if s.is_empty() {
            return self.affine_size;
        }
        let anchor = s.first().expect("nonempty");
        let mut count = 0u64;
        for perm in &self.linear {
            let img = Self::image(perm, s);
            let base = perm[anchor] as usize;
            // the translation must send L(anchor) into S
            for target in s.iter() {
                let shift = group.sub_idx(target, base);
                if group.translate(&img, shift) == *s {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn orbit_size(&self, group: &Group, s: &SubsetMask) -> u64 {
        self.affine_size / self.stabilizer_size(group, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn setup(p: u64, q: u64) -> (Group, Symmetry) {
        let g = Group::from_primes(p, q).unwrap();
        let sym = Symmetry::new(&g, u64::MAX).unwrap();
        (g, sym)
    }

    #[test]
    fn canonical_form_matches_brute_force() {
        let (g, sym) = setup(2, 3);
        let maps: Vec<_> = g.enumerate_affine_maps(u64::MAX).unwrap().collect();
        for bits in (0u64..4096).step_by(7) {
            let s = SubsetMask::from_bits(12, bits);
            let brute = maps.iter().map(|m| g.apply_map(m, &s)).min().unwrap();
            assert_eq!(sym.canonical_form(&g, &s), brute);
            assert_eq!(sym.is_canonical(&g, &s), brute == s);
            let orbit: HashSet<_> = maps.iter().map(|m| g.apply_map(m, &s)).collect();
            assert_eq!(sym.orbit_size(&g, &s), orbit.len() as u64);
        }
    }

    #[test]
    fn canonical_examples() {
        let (g, sym) = setup(2, 3);
        for i in 0..12 {
            let s = SubsetMask::singleton(12, i);
            assert_eq!(sym.canonical_form(&g, &s), SubsetMask::singleton(12, 0));
        }
        let empty = SubsetMask::empty(12);
        assert_eq!(sym.canonical_form(&g, &empty), empty);
        let s = SubsetMask::from_indices(12, [1, 6, 11]);
        for t in 0..12 {
            assert_eq!(
                sym.canonical_form(&g, &g.translate(&s, t)),
                sym.canonical_form(&g, &s)
            );
        }
    }

    #[test]
    fn symmetry_cap() {
        let g = Group::from_primes(3, 2).unwrap();
        assert!(matches!(
            Symmetry::new(&g, 863),
            Err(Error::SymmetryGroupTooLarge { size: 864, .. })
        ));
        assert_eq!(Symmetry::new(&g, 864).unwrap().affine_size(), 864);
    }
}
