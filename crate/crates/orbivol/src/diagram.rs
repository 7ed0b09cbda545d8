//! Knot diagrams: PD-code ingestion, J(2n,−2m) generation and the Type I/II
//! classification of sides.
//!
//! Each crossing stores its four segments as `[a, b, c, d]` in clockwise
//! order, with `a`/`c` on the under-strand (incoming/outgoing) and `b`/`d` on
//! the over-strand. The potential of a crossing is
//! Li₂(b/a) − Li₂(b/c) + Li₂(d/c) − Li₂(d/a).

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

pub const SLOT_A: usize = 0;
pub const SLOT_B: usize = 1;
pub const SLOT_C: usize = 2;
pub const SLOT_D: usize = 3;

/// PD `X[i,j,k,l]` (counterclockwise from the incoming under-strand) lands in
/// slots `[a,b,c,d] = [i,l,k,j]`; `PD_TO_SLOTS[s]` is the PD position feeding
/// slot `s`.
const PD_TO_SLOTS: [usize; 4] = [0, 3, 2, 1];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Handedness {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SideType {
    /// exp(z ∂V/∂z) = exp(+2πi/r)
    TypeI,
    /// exp(z ∂V/∂z) = exp(−2πi/r)
    TypeII,
}

impl SideType {
    pub fn sign(self) -> f64 {
        match self {
            SideType::TypeI => 1.0,
            SideType::TypeII => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    pub slots: [usize; 4],
    pub handedness: Handedness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotDiagram {
    crossings: Vec<Crossing>,
    num_segments: usize,
    side_types: Vec<SideType>,
}

impl KnotDiagram {
    /// Validates incidence, alternation and orientation, then classifies
    /// sides and derives handedness.
    pub fn from_slots(slots: Vec<[usize; 4]>, num_segments: usize) -> Result<Self> {
        if slots.is_empty() {
            return Err(Error::Structural("diagram has no crossings".into()));
        }
        if num_segments != 2 * slots.len() {
            return Err(Error::Structural(format!(
                "{} segments for {} crossings; expected {}",
                num_segments,
                slots.len(),
                2 * slots.len()
            )));
        }
        let mut count = vec![0usize; num_segments];
        for s in slots.iter().flatten() {
            if *s >= num_segments {
                return Err(Error::Structural(format!("segment id {s} out of range")));
            }
            count[*s] += 1;
        }
        if let Some(bad) = count.iter().position(|&c| c != 2) {
            return Err(Error::Structural(format!(
                "segment {} appears {} times, expected 2",
                bad + 1,
                count[bad]
            )));
        }
        let mut d = KnotDiagram {
            crossings: slots
                .into_iter()
                .map(|slots| Crossing {
                    slots,
                    handedness: Handedness::Positive,
                })
                .collect(),
            num_segments,
            side_types: Vec::new(),
        };
        d.side_types = classify_sides(&d)?;
        for c in d.crossings.iter_mut() {
            // the over-strand enters at b for a positive crossing
            c.handedness = match d.side_types[c.slots[SLOT_B]] {
                SideType::TypeII => Handedness::Positive,
                SideType::TypeI => Handedness::Negative,
            };
        }
        Ok(d)
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn num_segments(&self) -> usize {
        self.num_segments
    }

    pub fn side_types(&self) -> &[SideType] {
        &self.side_types
    }

    /// Serializes back to PD text with 1-based labels.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        for c in &self.crossings {
            let mut pd = [0usize; 4];
            for (slot, &pos) in PD_TO_SLOTS.iter().enumerate() {
                pd[pos] = c.slots[slot] + 1;
            }
            let _ = writeln!(out, "X {} {} {} {}", pd[0], pd[1], pd[2], pd[3]);
        }
        out
    }
}

/// Parses lines `X i j k l`; blank lines and `#` comments are skipped, and
/// `X[i,j,k,l]` notation is accepted too.
pub fn parse_pd(text: &str) -> Result<KnotDiagram> {
    let mut raw: Vec<[usize; 4]> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| Error::Parse {
            line: lineno + 1,
            msg: msg.to_string(),
        };
        let cleaned: String = line
            .chars()
            .map(|c| if matches!(c, '[' | ']' | ',') { ' ' } else { c })
            .collect();
        let mut toks = cleaned.split_whitespace();
        if toks.next() != Some("X") {
            return Err(err("expected a line starting with X"));
        }
        let labels: Vec<&str> = toks.collect();
        if labels.len() != 4 {
            return Err(err(&format!("expected 4 labels, found {}", labels.len())));
        }
        let mut pd = [0usize; 4];
        for (slot, tok) in labels.iter().enumerate() {
            let v: usize = tok
                .parse()
                .map_err(|_| err(&format!("invalid label '{tok}'")))?;
            if v == 0 {
                return Err(err("labels are 1-based"));
            }
            pd[slot] = v - 1;
        }
        raw.push(pd);
    }
    if raw.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "no crossings".into(),
        });
    }
    let num_segments = raw.iter().flatten().max().map_or(0, |m| m + 1);
    let slots = raw
        .iter()
        .map(|pd| PD_TO_SLOTS.map(|pos| pd[pos]))
        .collect();
    KnotDiagram::from_slots(slots, num_segments)
}

/// Classifies each side by where it runs under: a side entering a crossing
/// as the incoming under-strand (slot `a`) left its previous crossing over the
/// top, which is Type I; a side leaving as the outgoing under-strand (slot
/// `c`) is Type II.
pub fn classify_sides(diagram: &KnotDiagram) -> Result<Vec<SideType>> {
    let n = diagram.num_segments;
    let mut under: Vec<Option<usize>> = vec![None; n];
    let mut over = vec![0usize; n];
    for c in &diagram.crossings {
        for (slot, &s) in c.slots.iter().enumerate() {
            if slot == SLOT_A || slot == SLOT_C {
                if under[s].is_some() {
                    return Err(Error::NonAlternating(format!(
                        "segment {} runs under at both ends",
                        s + 1
                    )));
                }
                under[s] = Some(slot);
            } else {
                over[s] += 1;
            }
        }
    }
    let types = (0..n)
        .map(|s| match (under[s], over[s]) {
            (Some(SLOT_A), 1) => Ok(SideType::TypeI),
            (Some(SLOT_C), 1) => Ok(SideType::TypeII),
            _ => Err(Error::NonAlternating(format!(
                "segment {} runs over at both ends",
                s + 1
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    for (i, c) in diagram.crossings.iter().enumerate() {
        let tb = types[c.slots[SLOT_B]];
        let td = types[c.slots[SLOT_D]];
        if tb == td {
            return Err(Error::Structural(format!(
                "crossing {}: over-strand sides have the same type; orientation is inconsistent",
                i + 1
            )));
        }
    }
    Ok(types)
}

/// The J(2n,−2m) diagram: 2n vertical crossings followed by 2m horizontal
/// ones.
///
/// Vertical sides are z₁…z_{4n+2} (ids 0…4n+1); the horizontal sides
/// z′₃…z′_{4m} follow. The doubly-labeled sides are z′₁ = z_{4n+1},
/// z′₂ = z₁, z′_{4m+1} = z_{4n+2} and z′_{4m+2} = z₂.
pub fn generate_j_diagram(n: usize, m: usize) -> Result<KnotDiagram> {
    if n == 0 || m == 0 {
        return Err(Error::Domain("twist counts must be positive".into()));
    }
    let (nv, nh) = (2 * n, 2 * m);
    let v = |j: usize| j - 1;
    let h = |j: usize| -> usize {
        if j == 1 {
            v(2 * nv + 1)
        } else if j == 2 {
            v(1)
        } else if j == 2 * nh + 1 {
            v(2 * nv + 2)
        } else if j == 2 * nh + 2 {
            v(2)
        } else {
            2 * nv + 2 + (j - 3)
        }
    };
    let mut slots = Vec::with_capacity(nv + nh);
    for k in 1..=nv {
        slots.push([v(2 * k + 1), v(2 * k + 2), v(2 * k), v(2 * k - 1)]);
    }
    for k in 1..=nh {
        slots.push([h(2 * k + 1), h(2 * k - 1), h(2 * k), h(2 * k + 2)]);
    }
    orient_from_first(&mut slots, 2 * (nv + nh))?;
    KnotDiagram::from_slots(slots, 2 * (nv + nh))
}

/// Walks the strand entering the first crossing at slot `a` and turns every
/// crossing whose under-strand is entered at `c` by a half turn, so that `a`
/// is always the incoming under-strand.
fn orient_from_first(slots: &mut [[usize; 4]], num_segments: usize) -> Result<()> {
    let mut seen: Vec<Vec<(usize, usize)>> = vec![Vec::new(); num_segments];
    for (ci, c) in slots.iter().enumerate() {
        for (k, &s) in c.iter().enumerate() {
            seen[s].push((ci, k));
        }
    }
    if seen.iter().any(|v| v.len() != 2) {
        return Err(Error::Structural(
            "segment does not join two crossing slots".into(),
        ));
    }
    let mut entry: Vec<Option<usize>> = vec![None; slots.len()];
    let (mut ci, mut k) = (0usize, SLOT_A);
    for _ in 0..num_segments {
        if k == SLOT_A || k == SLOT_C {
            entry[ci] = Some(k);
        }
        let out = (k + 2) % 4;
        let s = slots[ci][out];
        let &(cj, kj) = seen[s]
            .iter()
            .find(|&&p| p != (ci, out))
            .unwrap_or(&seen[s][0]);
        ci = cj;
        k = kj;
    }
    if (ci, k) != (0, SLOT_A) || entry.iter().any(|e| e.is_none()) {
        return Err(Error::Structural(
            "diagram is not a single closed strand".into(),
        ));
    }
    for (c, e) in slots.iter_mut().zip(entry) {
        if e == Some(SLOT_C) {
            c.rotate_left(2);
        }
    }
    Ok(())
}

/// Segment id of z_j (1-based) on the vertical part of a J diagram.
pub fn j_vertical_id(j: usize) -> usize {
    j - 1
}

/// Whether two diagrams agree up to relabeling segments and crossings, and
/// rotating crossings by a half turn (which swaps a↔c and b↔d and leaves the
/// potential unchanged).
pub fn isomorphic(x: &KnotDiagram, y: &KnotDiagram) -> bool {
    if x.crossings.len() != y.crossings.len() || x.num_segments != y.num_segments {
        return false;
    }
    let n = x.num_segments;
    let mut fwd = vec![usize::MAX; n];
    let mut bwd = vec![usize::MAX; n];
    let mut used = vec![false; y.crossings.len()];
    iso_search(x, y, 0, &mut fwd, &mut bwd, &mut used)
}

fn iso_search(
    x: &KnotDiagram,
    y: &KnotDiagram,
    i: usize,
    fwd: &mut Vec<usize>,
    bwd: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if i == x.crossings.len() {
        return true;
    }
    let cx = x.crossings[i].slots;
    for j in 0..y.crossings.len() {
        if used[j] {
            continue;
        }
        for rot in [0usize, 2] {
            let cy = y.crossings[j].slots;
            let mut assigned = Vec::new();
            let mut ok = true;
            for s in 0..4 {
                let (p, q) = (cx[s], cy[(s + rot) % 4]);
                if fwd[p] == usize::MAX && bwd[q] == usize::MAX {
                    fwd[p] = q;
                    bwd[q] = p;
                    assigned.push(p);
                } else if fwd[p] != q || bwd[q] != p {
                    ok = false;
                    break;
                }
            }
            if ok {
                used[j] = true;
                if iso_search(x, y, i + 1, fwd, bwd, used) {
                    return true;
                }
                used[j] = false;
            }
            for p in assigned {
                bwd[fwd[p]] = usize::MAX;
                fwd[p] = usize::MAX;
            }
        }
    }
    false
}

/// Planar diagram of the figure-eight knot.
pub const FIGURE_EIGHT_PD: &str = "X 4 2 5 1\nX 8 6 1 5\nX 6 3 7 4\nX 2 7 3 8\n";
