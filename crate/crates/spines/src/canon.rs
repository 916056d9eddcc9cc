//! Canonical forms: labeling-independent certificates for branched spines.
//!
//! The certificate is the minimum, over an isomorphism-equivariant family of
//! relabelings, of a fixed byte serialization. A candidate relabeling is
//! determined by a start vertex and an even slot permutation at it: the
//! remaining labels are forced by a breadth-first sweep that assigns, on
//! first arrival through a relabeled germ, the unique slot permutation
//! turning that gluing into a fixed odd permutation. Two branched spines get
//! equal certificates iff they are isomorphic (orientation-preservingly,
//! mirrors stay distinct).

use crate::branching::BranchedSpine;
use crate::perm::Perm4;
use crate::spine::{Germ, SpineError};
use crate::transform::{normalize_signs, relabel_branched, Relabeling};

/// Default cap: beyond this many vertices the API refuses rather than risk
/// an unsound certificate (and to keep certificate cost bounded).
pub const DEFAULT_CANON_CAP: usize = 8;

/// Fixed odd permutation used to normalize a first-arrival gluing whose
/// relabeled source slot is `s`; maps `s` to 0.
fn discovery_perm(s: u8) -> Perm4 {
    match s {
        0 => Perm4([0, 1, 3, 2]),
        1 => Perm4([1, 0, 2, 3]),
        2 => Perm4([1, 3, 0, 2]),
        3 => Perm4([1, 2, 3, 0]),
        _ => unreachable!(),
    }
}

fn forced_relabeling(spine: &crate::spine::Spine, start: usize, pi: Perm4) -> Relabeling {
    let n = spine.vertex_count;
    let map = spine.germ_map().expect("valid spine");
    let mut vertex_label: Vec<Option<usize>> = vec![None; n];
    let mut slot_perm: Vec<Option<Perm4>> = vec![None; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    vertex_label[start] = Some(0);
    slot_perm[start] = Some(pi);
    order.push(start);
    let mut next_label = 1;
    let mut idx = 0;
    while idx < order.len() {
        let u = order[idx];
        let pu = slot_perm[u].unwrap();
        let pu_inv = pu.inverse();
        for s_new in 0..4u8 {
            let s_old = pu_inv.apply(s_new);
            let germ = Germ::new(u, s_old);
            let (_, rec) = spine.gluing_at(&map, germ);
            let w = rec.other_end(germ).vertex;
            if vertex_label[w].is_none() {
                vertex_label[w] = Some(next_label);
                next_label += 1;
                let p = rec.perm_from(germ);
                // choose pw so that pw o p o pu^-1 == discovery_perm(s_new)
                let pw = discovery_perm(s_new).compose(&pu).compose(&p.inverse());
                debug_assert!(!pw.is_odd());
                slot_perm[w] = Some(pw);
                order.push(w);
            }
        }
        idx += 1;
    }
    debug_assert_eq!(order.len(), n, "valid spines are connected");
    Relabeling {
        vertex_map: vertex_label.into_iter().map(|l| l.unwrap()).collect(),
        slot_perms: slot_perm.into_iter().map(|p| p.unwrap()).collect(),
    }
}

/// Deterministic byte serialization of a (sign-normalized, sorted) branched
/// spine under its current labels.
fn serialize_bytes(bs: &BranchedSpine) -> Vec<u8> {
    let mut out = Vec::new();
    out.push(bs.spine.vertex_count as u8);
    for e in &bs.spine.edges {
        out.push(e.a.vertex as u8);
        out.push(e.a.slot);
        out.push(e.b.vertex as u8);
        out.push(e.b.slot);
        out.extend_from_slice(&e.perm.0);
    }
    for &s in &bs.branching.region_orientations {
        out.push(if s > 0 { b'+' } else { b'-' });
    }
    out
}

/// The canonical certificate, and the relabeled representative achieving it.
pub fn canonical_pair(
    bs: &BranchedSpine,
    cap: usize,
) -> Result<(Vec<u8>, BranchedSpine), SpineError> {
    let n = bs.spine.vertex_count;
    if n > cap {
        return Err(SpineError::SizeLimit(n, cap));
    }
    let normalized = normalize_signs(bs);
    let mut best: Option<(Vec<u8>, BranchedSpine)> = None;
    for start in 0..n {
        for pi in Perm4::all_even() {
            let r = forced_relabeling(&normalized.spine, start, pi);
            let cand = relabel_branched(&normalized, &r);
            let bytes = serialize_bytes(&cand);
            if best.as_ref().map_or(true, |(b, _)| bytes < *b) {
                best = Some((bytes, cand));
            }
        }
    }
    Ok(best.expect("at least one candidate"))
}

/// Labeling-independent certificate of a bare (unbranched) spine: the same
/// candidate family as for branched spines, with branching bytes dropped.
pub fn canonical_spine_form(
    spine: &crate::spine::Spine,
    cap: usize,
) -> Result<Vec<u8>, SpineError> {
    let n = spine.vertex_count;
    if n > cap {
        return Err(SpineError::SizeLimit(n, cap));
    }
    // sign-normalize by an odd slot relabeling at every negative vertex
    let tau = Perm4([1, 0, 2, 3]);
    let mut pre = Relabeling::identity(n);
    for v in 0..n {
        if spine.vertex_orientations[v] < 0 {
            pre.slot_perms[v] = tau;
        }
    }
    let normalized = crate::transform::relabel_spine(spine, &pre);
    let mut best: Option<Vec<u8>> = None;
    for start in 0..n {
        for pi in Perm4::all_even() {
            let r = forced_relabeling(&normalized, start, pi);
            let cand = crate::transform::relabel_spine(&normalized, &r);
            let mut bytes = Vec::new();
            bytes.push(cand.vertex_count as u8);
            for e in &cand.edges {
                bytes.push(e.a.vertex as u8);
                bytes.push(e.a.slot);
                bytes.push(e.b.vertex as u8);
                bytes.push(e.b.slot);
                bytes.extend_from_slice(&e.perm.0);
            }
            if best.as_ref().map_or(true, |b| bytes < *b) {
                best = Some(bytes);
            }
        }
    }
    Ok(best.expect("at least one candidate"))
}

/// The canonical certificate of a branched spine (default size cap).
pub fn canonical_form(bs: &BranchedSpine) -> Result<Vec<u8>, SpineError> {
    canonical_form_capped(bs, DEFAULT_CANON_CAP)
}

pub fn canonical_form_capped(bs: &BranchedSpine, cap: usize) -> Result<Vec<u8>, SpineError> {
    Ok(canonical_pair(bs, cap)?.0)
}

/// Hex digest of the certificate, used in census files and CLI reports.
pub fn canonical_hex(bs: &BranchedSpine) -> Result<String, SpineError> {
    use sha2::{Digest, Sha256};
    let bytes = canonical_form(bs)?;
    let mut h = Sha256::new();
    h.update(&bytes);
    let digest = h.finalize();
    Ok(hex::encode(&digest[..8]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branching::{enumerate_branchings, BranchedSpine};
    use crate::enumerate::enumerate_spines;
    use crate::transform::relabel_spine;

    #[test]
    fn discovery_perms_are_odd_and_send_s_to_zero() {
        for s in 0..4u8 {
            let p = discovery_perm(s);
            assert!(p.is_odd());
            assert_eq!(p.apply(s), 0);
        }
    }

    #[test]
    fn relabeled_spine_has_equal_certificate() {
        let spine = enumerate_spines(1).remove(0);
        let b = enumerate_branchings(&spine).unwrap().remove(0);
        let bs = BranchedSpine::new(spine, b).unwrap();
        let cert = canonical_form(&bs).unwrap();
        for pi in Perm4::all_even() {
            let r = Relabeling {
                vertex_map: vec![0],
                slot_perms: vec![pi],
            };
            let relabeled = crate::transform::relabel_branched(&bs, &r);
            // sanity: the relabeled spine is still valid
            assert!(relabel_spine(&bs.spine, &r).validate().is_valid());
            assert_eq!(canonical_form(&relabeled).unwrap(), cert);
        }
    }
}
