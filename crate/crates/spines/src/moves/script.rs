//! Move script lines: a textual form for a single move application,
//! `<kind>/<variant> @ <anchor> choice=<c>`, and a uniform applier used by
//! search paths and script replay.

use crate::branching::BranchedSpine;

use super::sliding_vertex::apply_sliding_vertex_variant;
use super::{
    apply_mp_negative, apply_mp_positive, apply_snake, MoveError, SnakeMirror, SpineMoveKind,
    SpineMoveSite,
};

/// Render a site as a script line.
pub fn format_site(site: &SpineMoveSite) -> String {
    format!(
        "{}/{} @ {} choice={}",
        site.kind, site.variant, site.anchor, site.orientation_choice
    )
}

/// Parse a script line back into a site.
pub fn parse_site(line: &str) -> Result<SpineMoveSite, MoveError> {
    let bad = || MoveError::InvalidSite(format!("bad script line `{line}`"));
    let (head, tail) = line.trim().split_once('@').ok_or_else(bad)?;
    let (kind_str, variant_str) = head.trim().split_once('/').ok_or_else(bad)?;
    let kind = match kind_str.trim() {
        "MP_POS" => SpineMoveKind::MpPos,
        "MP_NEG" => SpineMoveKind::MpNeg,
        "SNAKE_POS" => SpineMoveKind::SnakePos,
        "SNAKE_NEG" => SpineMoveKind::SnakeNeg,
        "SLIDING_VERTEX" => SpineMoveKind::SlidingVertex,
        _ => return Err(bad()),
    };
    let variant: usize = variant_str.trim().parse().map_err(|_| bad())?;
    let (anchor_str, choice_str) = tail.trim().split_once("choice=").ok_or_else(bad)?;
    let anchor: usize = anchor_str.trim().parse().map_err(|_| bad())?;
    let orientation_choice: usize = choice_str.trim().parse().map_err(|_| bad())?;
    Ok(SpineMoveSite {
        kind,
        anchor,
        variant,
        orientation_choice,
    })
}

/// Apply a site to a spine, honoring the orientation choice.
pub fn apply_site(bs: &BranchedSpine, site: &SpineMoveSite) -> Result<BranchedSpine, MoveError> {
    match site.kind {
        SpineMoveKind::MpPos => {
            let results = apply_mp_positive(bs, site.anchor)?;
            results
                .into_iter()
                .nth(site.orientation_choice)
                .map(|(b, _)| b)
                .ok_or_else(|| {
                    MoveError::InvalidSite(format!(
                        "orientation choice {} out of range",
                        site.orientation_choice
                    ))
                })
        }
        SpineMoveKind::MpNeg => apply_mp_negative(bs, site.anchor),
        SpineMoveKind::SnakePos => {
            let mirror = if site.variant == 1 {
                SnakeMirror::Right
            } else {
                SnakeMirror::Left
            };
            apply_snake(bs, site.anchor, true, mirror)
        }
        SpineMoveKind::SnakeNeg => apply_snake(bs, site.anchor, false, SnakeMirror::Left),
        SpineMoveKind::SlidingVertex => {
            apply_sliding_vertex_variant(bs, site.anchor, site.variant)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn script_lines_round_trip() {
        for site in [
            SpineMoveSite {
                kind: SpineMoveKind::MpPos,
                anchor: 3,
                variant: 0,
                orientation_choice: 1,
            },
            SpineMoveSite {
                kind: SpineMoveKind::SnakePos,
                anchor: 0,
                variant: 1,
                orientation_choice: 0,
            },
            SpineMoveSite {
                kind: SpineMoveKind::SlidingVertex,
                anchor: 7,
                variant: 1,
                orientation_choice: 0,
            },
        ] {
            let line = format_site(&site);
            assert_eq!(parse_site(&line).unwrap(), site);
        }
        assert!(parse_site("NOT_A_MOVE/0 @ 1 choice=0").is_err());
    }
}
