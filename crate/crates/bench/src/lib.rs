//! Fixtures shared by the benchmarks.

use fuglede_core::{Group, SubsetMask};

/// Subjects of every interesting shape in `group`: the plane, the line, a
/// subgroup of order `pq`, and a non-tile of size `p`.
pub fn fixtures(group: &Group) -> Vec<(&'static str, SubsetMask)> {
    let n = group.order();
    let plane = group.p_plane();
    let line = group.q_line();
    let pq = group.span(&[
        fuglede_core::Element::new(1, 0, 0),
        fuglede_core::Element::new(0, 0, 1),
    ]);
    let scattered = SubsetMask::from_indices(n, (0..group.p()).map(|i| i * (group.q() + 1) % n));
    vec![
        ("plane", plane),
        ("line", line),
        ("pq-subgroup", pq),
        ("scattered", scattered),
    ]
}
