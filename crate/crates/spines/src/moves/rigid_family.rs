//! Construction of the necklace-shaped rigid family: 2k vertex gadgets in a
//! cycle, each carrying a loop on slots (0, 1) and sending slot 2 to the
//! next gadget's slot 3.
//!
//! The family was pinned down by exhaustive search: for each k the shape
//! admits exactly one branching (up to isomorphism and global flip) immune
//! to every sliding positive MP move, and its boundary is one trivial
//! sphere together with k white and k black ones. The member with k = 1 is
//! the unique two-vertex spine with that property.

use crate::branching::{BranchedSpine, Branching};
use crate::perm::Perm4;
use crate::region::trace_regions;
use crate::spine::{EdgeRec, Germ, Spine};

pub(crate) fn build(k: usize) -> BranchedSpine {
    assert!(k >= 1, "the rigid family starts at k = 1");
    let n = 2 * k;
    let loop_perm = Perm4::new([1, 0, 2, 3]).expect("transposition");
    let conn_perm = Perm4::new([0, 1, 3, 2]).expect("transposition");
    let mut edges = Vec::with_capacity(2 * n);
    for v in 0..n {
        edges.push(EdgeRec::new(Germ::new(v, 0), Germ::new(v, 1), loop_perm));
    }
    for v in 0..n {
        edges.push(EdgeRec::new(
            Germ::new(v, 2),
            Germ::new((v + 1) % n, 3),
            conn_perm,
        ));
    }
    let spine = Spine::new(n, edges);
    debug_assert!(spine.validate().is_valid());

    // Three region shapes: the wing of each loop (one passage), the
    // connector wrapping each joining gluing (four passages), and one big
    // region through every (3, 2) wing. Signs alternate with the vertex
    // index, except that the connector closing the cycle keeps the sign of
    // its even-indexed neighbors.
    let regions = trace_regions(&spine).expect("necklace regions are disks");
    let signs: Vec<i8> = regions
        .iter()
        .map(|r| {
            if r.orbit.len() == 1 {
                // loop wing at vertex v
                if r.orbit[0].vertex % 2 == 0 {
                    1
                } else {
                    -1
                }
            } else if r
                .orbit
                .iter()
                .all(|s| s.in_slot >= 2 && s.out_slot >= 2)
            {
                // the big region through every (3, 2) wing
                1
            } else {
                // connector region of the gluing leaving vertex v; when the
                // cycle is so short that the identifying wing is absent
                // (k = 1) both connectors take the wrap-around sign
                match r
                    .orbit
                    .iter()
                    .find(|s| s.in_slot == 2 && s.out_slot == 0)
                {
                    Some(p) if p.vertex != n - 1 && p.vertex % 2 == 1 => 1,
                    _ => -1,
                }
            }
        })
        .collect();
    BranchedSpine::new(
        spine,
        Branching {
            region_orientations: signs,
        },
    )
    .expect("necklace branching satisfies the per-edge condition")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{boundary_pattern, ComponentTag};
    use crate::moves::is_rigid;

    #[test]
    fn family_members_validate_with_expected_boundary() {
        for k in 1..=5 {
            let bs = build(k);
            assert_eq!(bs.spine.vertex_count, 2 * k);
            assert!(bs.spine.validate().is_valid());
            let bp = boundary_pattern(&bs);
            assert_eq!(bp.count_tag(ComponentTag::S2Triv), 1);
            assert_eq!(bp.count_tag(ComponentTag::S2White), k);
            assert_eq!(bp.count_tag(ComponentTag::S2Black), k);
        }
    }

    #[test]
    fn family_members_are_rigid() {
        for k in 1..=4 {
            assert!(is_rigid(&build(k)), "member {k} admits a sliding move");
        }
    }
}
