//! Spectral pairs and the search for spectra.
//!
//! `Lambda` is a spectrum of `S` when `|Lambda| = |S|` and every nonzero
//! difference of `Lambda` lies in the zero set `Z(S)`. Spectra containing 0
//! are therefore exactly the `|S|`-cliques through 0 in the Cayley graph on
//! `G` with connection set `Z(S)`.

use crate::error::{Error, Result};
use crate::group::{Group, SubsetMask};
use crate::sums::zero_set;
use crate::tiling::verify_tiling;
use crate::Outcome;

/// A spectral pair `(set, spectrum)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpectralCertificate {
    pub set: SubsetMask,
    pub spectrum: SubsetMask,
    /// `0` is in `spectrum`.
    pub normalized: bool,
}

impl SpectralCertificate {
    pub fn new(set: SubsetMask, spectrum: SubsetMask) -> Self {
        SpectralCertificate {
            set,
            spectrum,
            normalized: spectrum.contains(0),
        }
    }

    pub fn verify(&self, group: &Group) -> bool {
        verify_spectral_pair(group, &self.set, &self.spectrum)
    }
}

/// `(S, Lambda)` is a spectral pair.
pub fn verify_spectral_pair(group: &Group, s: &SubsetMask, lambda: &SubsetMask) -> bool {
    if s.is_empty() || s.len() != lambda.len() {
        return false;
    }
    let z = zero_set(group, s);
    lambda.iter().all(|l| {
        lambda
            .iter()
            .all(|m| l == m || z.contains(group.sub_idx(l, m)))
    })
}

struct CliqueSearch<'a> {
    group: &'a Group,
    zeros: SubsetMask,
    target: usize,
    explored: u64,
}

impl CliqueSearch<'_> {
    /// `chosen` is a clique; `cand` holds the vertices above the last pick
    /// adjacent to all of it.
    fn extend(&mut self, chosen: &mut SubsetMask, cand: SubsetMask) -> bool {
        self.explored += 1;
        if chosen.len() == self.target {
            return true;
        }
        let need = self.target - chosen.len();
        if cand.len() < need {
            return false;
        }
        for v in cand.iter() {
            if cand.count_above(v) + 1 < need {
                return false;
            }
            let next = cand
                .intersection(&self.group.translate(&self.zeros, v))
                .above(v);
            if next.len() + 1 < need {
                continue;
            }
            chosen.insert(v);
            if self.extend(chosen, next) {
                return true;
            }
            chosen.remove(v);
        }
        false
    }
}

/// Searches for a spectrum of `S` containing 0.
///
/// Candidates are tried in increasing index order, so the first spectrum
/// found is deterministic. A negative answer reports how many search nodes
/// were visited before the space was exhausted.
pub fn find_spectrum(group: &Group, s: &SubsetMask) -> Outcome<SpectralCertificate> {
    let n = group.order();
    if s.is_empty() {
        return Outcome::Exhausted { explored: 0 };
    }
    let zeros = zero_set(group, s);
    let mut search = CliqueSearch {
        group,
        zeros,
        target: s.len(),
        explored: 0,
    };
    let mut chosen = SubsetMask::singleton(n, 0);
    // Z(S) never contains 0, so every candidate lies above it
    if search.extend(&mut chosen, zeros) {
        Outcome::Found {
            witness: SpectralCertificate::new(*s, chosen),
            explored: search.explored,
        }
    } else {
        Outcome::Exhausted {
            explored: search.explored,
        }
    }
}

pub fn is_spectral(group: &Group, s: &SubsetMask) -> bool {
    find_spectrum(group, s).is_found()
}

/// Spectrum of a set tiling `G` with a subgroup.
///
/// If `A + B = G` with `B` a subgroup, the characters trivial on `B` form a
/// spectrum of `A`: any nontrivial one sums over `A` to its sum over a
/// transversal of `B`, which is zero. This annihilator is the dual copy of a
/// complement `P` of `B` and has `|G| / |B| = |A|` elements.
pub fn subgroup_complement_spectrum(
    group: &Group,
    a: &SubsetMask,
    b: &SubsetMask,
) -> Result<SpectralCertificate> {
    if !group.is_subgroup(b) {
        return Err(Error::NotASubgroup);
    }
    if !verify_tiling(group, a, b) {
        return Err(Error::NotATiling);
    }
    let cert = SpectralCertificate::new(*a, group.annihilator(b));
    debug_assert!(cert.verify(group));
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Element;
    use crate::tiling::subgroup_complement;

    fn grp(p: u64, q: u64) -> Group {
        Group::from_primes(p, q).unwrap()
    }

    fn set(g: &Group, els: &[(u32, u32, u32)]) -> SubsetMask {
        SubsetMask::from_indices(
            g.order(),
            els.iter().map(|&(a, b, c)| g.index(Element::new(a, b, c))),
        )
    }

    #[test]
    fn verify_examples() {
        let g = grp(2, 3);
        let plane = g.p_plane();
        assert!(verify_spectral_pair(&g, &plane, &plane));
        let zero = set(&g, &[(0, 0, 0)]);
        assert!(verify_spectral_pair(&g, &zero, &zero));
        let s = set(&g, &[(0, 0, 0), (1, 0, 0)]);
        let l = set(&g, &[(0, 0, 0), (0, 0, 1)]);
        assert!(!verify_spectral_pair(&g, &s, &l));
        assert!(!verify_spectral_pair(&g, &s, &zero));
        let empty = SubsetMask::empty(12);
        assert!(!verify_spectral_pair(&g, &empty, &empty));
    }

    #[test]
    fn find_examples() {
        let g = grp(2, 3);
        let s = set(&g, &[(0, 0, 0), (1, 0, 0)]);
        let found = find_spectrum(&g, &s);
        let l = found.witness().unwrap().spectrum;
        assert!(l.contains(0));
        assert!(verify_spectral_pair(&g, &s, &l));

        let s = set(&g, &[(0, 0, 0), (0, 0, 1)]);
        let out = find_spectrum(&g, &s);
        assert!(!out.is_found());
        assert!(out.explored() >= 1);

        let full = SubsetMask::full(12);
        assert_eq!(find_spectrum(&g, &full).witness().unwrap().spectrum, full);
        assert!(!find_spectrum(&g, &SubsetMask::empty(12)).is_found());
    }

    #[test]
    fn spectrum_search_is_deterministic() {
        let g = grp(3, 2);
        let s = g.p_plane();
        let a = find_spectrum(&g, &s);
        let b = find_spectrum(&g, &s);
        assert_eq!(a, b);
        assert!(a.witness().unwrap().verify(&g));
    }

    #[test]
    fn subgroup_complement_spectra() {
        let g = grp(2, 3);
        let zq = g.q_line();
        // one point above each u in Z_p^2
        let a = set(&g, &[(0, 0, 0), (1, 0, 2), (0, 1, 1), (1, 1, 0)]);
        assert_eq!(
            subgroup_complement_spectrum(&g, &a, &zq).unwrap().spectrum,
            g.p_plane()
        );

        let zero = set(&g, &[(0, 0, 0)]);
        let full = SubsetMask::full(12);
        assert_eq!(
            subgroup_complement_spectrum(&g, &zero, &full)
                .unwrap()
                .spectrum,
            zero
        );

        let b = g.cyclic_subgroup(Element::new(1, 0, 0));
        let a = set(
            &g,
            &[
                (0, 0, 0),
                (1, 1, 0),
                (0, 0, 1),
                (0, 1, 1),
                (1, 0, 2),
                (1, 1, 2),
            ],
        );
        let l = subgroup_complement_spectrum(&g, &a, &b).unwrap().spectrum;
        assert_eq!(l, g.span(&[Element::new(0, 1, 0), Element::new(0, 0, 1)]));
        assert!(verify_spectral_pair(&g, &a, &l));

        assert_eq!(
            subgroup_complement_spectrum(&g, &a, &a),
            Err(Error::NotASubgroup)
        );
        assert_eq!(
            subgroup_complement_spectrum(&g, &zero, &b),
            Err(Error::NotATiling)
        );
    }

    #[test]
    fn isotropic_subgroup_spectrum_is_annihilator() {
        // B = <(1,2,0)> in p = 5 lies inside its own annihilator
        let g = grp(5, 2);
        let b = g.cyclic_subgroup(Element::new(1, 2, 0));
        let l = subgroup_complement(&g, &b).unwrap();
        let cert = subgroup_complement_spectrum(&g, &l, &b).unwrap();
        assert!(cert.verify(&g));
        assert!(b.is_subset(&cert.spectrum));
    }

    #[test]
    fn every_subgroup_is_spectral() {
        for (p, q) in [(2, 3), (3, 2), (2, 5)] {
            let g = grp(p, q);
            for h in g.subgroups() {
                assert!(is_spectral(&g, &h), "{h:?}");
            }
        }
    }
}
