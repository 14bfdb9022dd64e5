//! Tilings `S + T = G` and the search for complements.

use crate::error::{Error, Result};
use crate::group::{Element, Group, SubsetMask};
use crate::sums::zero_set;
use crate::Outcome;

/// A tiling `set + complement = G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TilingCertificate {
    pub set: SubsetMask,
    pub complement: SubsetMask,
    /// `0` is in `complement`.
    pub normalized: bool,
}

impl TilingCertificate {
    pub fn new(set: SubsetMask, complement: SubsetMask) -> Self {
        TilingCertificate {
            set,
            complement,
            normalized: complement.contains(0),
        }
    }

    pub fn verify(&self, group: &Group) -> bool {
        verify_tiling(group, &self.set, &self.complement)
    }
}

/// `|S| |T| = |G|` and the sums `s + t` are pairwise distinct.
pub fn verify_tiling(group: &Group, s: &SubsetMask, t: &SubsetMask) -> bool {
    let n = group.order();
    if s.len() * t.len() != n {
        return false;
    }
    let mut covered = SubsetMask::empty(n);
    for a in s.iter() {
        for b in t.iter() {
            if !covered.insert(group.add_idx(a, b)) {
                return false;
            }
        }
    }
    true
}

struct CoverSearch<'a> {
    group: &'a Group,
    set: SubsetMask,
    diffs: SubsetMask,
    target: usize,
    explored: u64,
}

impl CoverSearch<'_> {
    /// `forbidden` is `T + (S - S)`: a translate `t` is compatible with the
    /// placed pieces iff `t` avoids it.
    fn extend(
        &mut self,
        covered: SubsetMask,
        forbidden: SubsetMask,
        tiles: &mut SubsetMask,
    ) -> bool {
        self.explored += 1;
        if tiles.len() == self.target {
            return true;
        }
        let cell = covered
            .first_absent()
            .expect("uncovered cell while pieces remain");
        let mut cands: Vec<usize> = self
            .set
            .iter()
            .map(|s| self.group.sub_idx(cell, s))
            .filter(|&t| !forbidden.contains(t))
            .collect();
        cands.sort_unstable();
        for t in cands {
            let piece = self.group.translate(&self.set, t);
            debug_assert!(piece.is_disjoint(&covered));
            tiles.insert(t);
            let next_forbidden = forbidden.union(&self.group.translate(&self.diffs, t));
            if self.extend(covered.union(&piece), next_forbidden, tiles) {
                return true;
            }
            tiles.remove(t);
        }
        false
    }
}

/// Searches for a complement `T` of `S` containing 0.
///
/// Always extends at the least uncovered element; the candidates there are
/// tried in increasing index order.
pub fn find_complement(group: &Group, s: &SubsetMask) -> Outcome<TilingCertificate> {
    let n = group.order();
    if s.is_empty() || n % s.len() != 0 {
        return Outcome::Exhausted { explored: 0 };
    }
    let diffs = group.difference_set(s);
    let mut search = CoverSearch {
        group,
        set: *s,
        diffs,
        target: n / s.len(),
        explored: 0,
    };
    let mut tiles = SubsetMask::singleton(n, 0);
    if search.extend(*s, diffs, &mut tiles) {
        Outcome::Found {
            witness: TilingCertificate::new(*s, tiles),
            explored: search.explored,
        }
    } else {
        Outcome::Exhausted {
            explored: search.explored,
        }
    }
}

pub fn is_tile(group: &Group, s: &SubsetMask) -> bool {
    find_complement(group, s).is_found()
}

/// A subgroup `L` with `B + L = G`.
///
/// Every subgroup splits as `B_p + B_q` with `B_p` in `Z_p^2` and `B_q` in
/// `Z_q`, so a complement is assembled part by part.
pub fn subgroup_complement(group: &Group, b: &SubsetMask) -> Result<SubsetMask> {
    if !group.is_subgroup(b) {
        return Err(Error::NotASubgroup);
    }
    let plane = group.p_plane();
    let b_p = b.intersection(&plane);
    let b_q = b.intersection(&group.q_line());
    let mut gens = Vec::new();
    match b_p.len() {
        1 => gens.extend([Element::new(1, 0, 0), Element::new(0, 1, 0)]),
        x if x == group.p() => {
            let w = plane
                .difference(&b_p)
                .first()
                .expect("a line is a proper subgroup of the plane");
            gens.push(group.element(w));
        }
        _ => {}
    }
    if b_q.len() == 1 {
        gens.push(Element::new(0, 0, 1));
    }
    let l = group.span(&gens);
    debug_assert!(verify_tiling(group, b, &l));
    Ok(l)
}

/// For a tiling `S + T = G`, `1_S^ * 1_T^ = |G| delta`: every nontrivial
/// character vanishes on `S` or on `T`.
pub fn fourier_product_holds(group: &Group, s: &SubsetMask, t: &SubsetMask) -> bool {
    zero_set(group, s)
        .union(&zero_set(group, t))
        .union(&SubsetMask::singleton(group.order(), 0))
        .len()
        == group.order()
}
