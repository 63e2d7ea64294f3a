//! Stacking a Hamiltonian cycle into an extra cycle dimension.
//!
//! Two constructions, both preserving measured run length on every instance
//! we exercise:
//!
//! - [`extend_even`]: stack `m` copies of the cycle, every other one
//!   reflected about the mid-line of an even-sized dimension. The reflection
//!   fixes the positions of the two "cut columns", so crossing edges sit
//!   directly above their images; seams swap a crossing edge in two adjacent
//!   layers for a pair of vertical edges. Seam placement is a small search:
//!   candidate assignments are tried in a deterministic order and each one
//!   is verified; the first verified single cycle that does not regress the
//!   run length wins.
//! - [`extend_multiple`]: when the new size is a multiple of an existing
//!   dimension's size, stack translated copies and splice them along the
//!   images of a single seam edge. No search is needed; closure follows from
//!   the translation returning to the identity.

use crate::error::{Error, Result};
use crate::torus::{Step, TorusSpec, Vertex, Walk};

/// A crossing edge chosen as a seam: the layer it joins upward from, its two
/// endpoints within the layer, and the dimension it crosses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeamEdge {
    pub layer_index: usize,
    pub endpoints: (Vertex, Vertex),
    pub crossing_dim: usize,
}

/// Result of an extension: the verified walk, its measured run length, and
/// — when the output's run length fell below the input's — the input run
/// length it regressed from. The walk is still returned in that case; the
/// caller decides whether a regression is acceptable.
#[derive(Debug, Clone)]
pub struct Extended {
    pub walk: Walk,
    pub measured_rl: usize,
    pub regressed_from: Option<usize>,
    pub seams: Vec<SeamEdge>,
}

fn require_hamiltonian(walk: &Walk) -> Result<usize> {
    let report = walk.verify();
    if !report.is_hamiltonian {
        return Err(Error::NotHamiltonian(format!(
            "extension input fails verification (missing {} vertices)",
            report.missing_count
        )));
    }
    Ok(report.run_length)
}

// ---------------------------------------------------------------------------
// Reflection stacking
// ---------------------------------------------------------------------------

/// A crossing edge of the base cycle: a step in the even dimension that
/// spans one of the two cut columns fixed by the reflection.
#[derive(Debug, Clone, Copy)]
struct Crossing {
    step_index: usize,
}

fn crossing_edges(h: &Walk, even_dim: usize) -> Vec<Crossing> {
    let size = h.torus().size(even_dim);
    let half = size / 2;
    let trace = h.trace();
    let mut out = Vec::new();
    for (t, step) in h.steps().iter().enumerate() {
        if step.dim != even_dim {
            continue;
        }
        let x = trace[t].coords()[even_dim];
        let crosses_middle = (x == half - 1 && step.sign > 0) || (x == half && step.sign < 0);
        let crosses_wrap = (x == size - 1 && step.sign > 0) || (x == 0 && step.sign < 0);
        if crosses_middle || crosses_wrap {
            out.push(Crossing { step_index: t });
        }
    }
    out
}

/// Seam slots for one candidate: slot `i` joins layer `i` to layer `i + 1`
/// (mod `m`); `None` leaves that pair joined only through the rest of the
/// stack. At most one slot may be `None`, and consecutive assigned slots
/// must use distinct crossing edges (they remove edges from a shared layer).
type Assignment = Vec<Option<usize>>;

fn assignment_is_valid(slots: &Assignment) -> bool {
    let m = slots.len();
    if slots.iter().filter(|s| s.is_none()).count() > 1 {
        return false;
    }
    if m > 1 {
        for i in 0..m {
            if let (Some(a), Some(b)) = (slots[i], slots[(i + 1) % m]) {
                if a == b {
                    return false;
                }
            }
        }
    }
    true
}

/// Deterministic candidate order: alternating pairs of crossing edges first
/// (most separated along the cycle first, matching the intent of picking
/// seams "in the middle"), then pair-plus-third patterns for odd stack
/// heights, then pairs with one slot left empty, then a bounded general
/// enumeration.
fn candidate_assignments(m: usize, crossings: &[Crossing], n: usize, cap: usize) -> Vec<Assignment> {
    let e = crossings.len();
    let mut pairs: Vec<(usize, usize)> = (0..e)
        .flat_map(|p| (0..e).filter(move |&q| q != p).map(move |q| (p, q)))
        .collect();
    let sep = |p: usize, q: usize| {
        let d = crossings[p].step_index.abs_diff(crossings[q].step_index);
        d.min(n - d)
    };
    pairs.sort_by_key(|&(p, q)| (usize::MAX - sep(p, q), p, q));

    let mut out: Vec<Assignment> = Vec::new();
    let push = |a: Assignment, out: &mut Vec<Assignment>| {
        if assignment_is_valid(&a) && !out.contains(&a) && out.len() < cap {
            out.push(a);
        }
    };

    for &(p, q) in &pairs {
        if m % 2 == 0 {
            let full: Assignment = (0..m).map(|i| Some(if i % 2 == 0 { p } else { q })).collect();
            push(full, &mut out);
        } else {
            for z in 0..e {
                if z == p || z == q {
                    continue;
                }
                let mut a: Assignment =
                    (0..m - 1).map(|i| Some(if i % 2 == 0 { p } else { q })).collect();
                a.push(Some(z));
                push(a, &mut out);
            }
        }
    }
    for &(p, q) in &pairs {
        let mut a: Assignment =
            (0..m - 1).map(|i| Some(if i % 2 == 0 { p } else { q })).collect();
        a.push(None);
        push(a, &mut out);
    }

    // General bounded enumeration as a backstop.
    let mut stack: Vec<Assignment> = vec![Vec::new()];
    while let Some(partial) = stack.pop() {
        if out.len() >= cap {
            break;
        }
        if partial.len() == m {
            push(partial, &mut out);
            continue;
        }
        let mut options: Vec<Option<usize>> = (0..e).map(Some).collect();
        options.push(None);
        // Depth-first in reverse so lexicographically smaller choices pop first.
        for opt in options.into_iter().rev() {
            let mut next = partial.clone();
            next.push(opt);
            let nones = next.iter().filter(|s| s.is_none()).count();
            if nones > 1 {
                continue;
            }
            let l = next.len();
            if l >= 2 {
                if let (Some(a), Some(b)) = (next[l - 2], next[l - 1]) {
                    if a == b {
                        continue;
                    }
                }
            }
            if l == m {
                if let (Some(a), Some(b)) = (next[m - 1], next[0]) {
                    if a == b {
                        continue;
                    }
                }
            }
            stack.push(next);
        }
    }
    out
}

/// Splices `m` stacked copies of `h` (every other one reflected about the
/// mid-line of `even_dim`) into one cycle on `G x C_m` according to a seam
/// assignment, then walks the resulting 2-regular multigraph. Returns the
/// vertex index sequence when it forms a single cycle through all vertices.
fn splice_layers(
    layer_traces: &[Vec<usize>],
    slots: &Assignment,
    n: usize,
) -> Option<Vec<usize>> {
    let m = layer_traces.len();
    let total = m * n;
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(total + m);
    let removed = |layer: usize, t: usize| {
        let above = slots[layer].map(|c| c == t).unwrap_or(false);
        let below = slots[(layer + m - 1) % m].map(|c| c == t).unwrap_or(false);
        above || below
    };
    for (layer, trace) in layer_traces.iter().enumerate() {
        for t in 0..n {
            if removed(layer, t) {
                continue;
            }
            edges.push((layer * n + trace[t], layer * n + trace[(t + 1) % n]));
        }
    }
    for (layer, slot) in slots.iter().enumerate() {
        if let Some(t) = *slot {
            let up = (layer + 1) % m;
            let a = layer_traces[layer][t];
            let b = layer_traces[layer][(t + 1) % n];
            edges.push((layer * n + a, up * n + a));
            edges.push((layer * n + b, up * n + b));
        }
    }

    // Each vertex must have exactly two incident half-edges.
    let mut incident: Vec<[usize; 2]> = vec![[usize::MAX; 2]; total];
    for (eid, &(a, b)) in edges.iter().enumerate() {
        for v in [a, b] {
            if incident[v][0] == usize::MAX {
                incident[v][0] = eid;
            } else if incident[v][1] == usize::MAX {
                incident[v][1] = eid;
            } else {
                return None;
            }
        }
    }
    if incident.iter().any(|inc| inc[1] == usize::MAX) {
        return None;
    }

    let start = 0usize;
    let mut seq = Vec::with_capacity(total);
    let mut cur = start;
    let mut via = incident[start][0];
    loop {
        seq.push(cur);
        let (a, b) = edges[via];
        let next = if a == cur { b } else { a };
        if next == start {
            break;
        }
        let inc = incident[next];
        via = if inc[0] == via { inc[1] } else { inc[0] };
        cur = next;
    }
    if seq.len() == total {
        Some(seq)
    } else {
        None
    }
}

fn vertex_sequence_to_walk(spec: &TorusSpec, seq: &[usize], base: &TorusSpec, m: usize) -> Result<Walk> {
    let n = base.vertex_count();
    let k = base.dim_count();
    let decode = |idx: usize| -> Vec<usize> {
        let (layer, g) = (idx / n, idx % n);
        let mut coords = vec![0usize; k + 1];
        let mut rest = g;
        for d in (0..k).rev() {
            coords[d] = rest % base.size(d);
            rest /= base.size(d);
        }
        coords[k] = layer;
        coords
    };
    let mut steps = Vec::with_capacity(seq.len());
    for i in 0..seq.len() {
        let a = decode(seq[i]);
        let b = decode(seq[(i + 1) % seq.len()]);
        let mut step = None;
        for d in 0..=k {
            if a[d] == b[d] {
                continue;
            }
            if step.is_some() {
                return Err(Error::CompositionDefect(
                    "spliced walk changes two coordinates in one step".into(),
                ));
            }
            let size = if d == k { m } else { base.size(d) };
            let sign = if (a[d] + 1) % size == b[d] { 1 } else { -1 };
            step = Some(Step { dim: d, sign });
        }
        steps.push(step.ok_or_else(|| {
            Error::CompositionDefect("spliced walk repeats a vertex consecutively".into())
        })?);
    }
    Walk::new(spec.clone(), Vertex::new(decode(seq[0])), steps, true)
        .map_err(|e| Error::CompositionDefect(format!("spliced walk malformed: {e}")))
}

const SEAM_CANDIDATE_CAP: usize = 20_000;

/// Extends `h` to a Hamiltonian cycle on `G x C_m` by reflection stacking
/// over the even-sized dimension `even_dim`.
///
/// `m == 1` is the identity. Seam candidates are tried in a deterministic
/// order; each is spliced and verified. A verified output whose run length
/// is at least the input's is returned immediately; failing that, the first
/// verified output is returned with `regressed_from` set.
pub fn extend_even(h: &Walk, even_dim: usize, m: usize) -> Result<Extended> {
    let rl_in = require_hamiltonian(h)?;
    let base = h.torus();
    let k = base.dim_count();
    if even_dim >= k {
        return Err(Error::DimensionOutOfRange { dim: even_dim, dims: k });
    }
    if base.size(even_dim) % 2 != 0 {
        return Err(Error::NoEvenDimension { dim: even_dim, size: base.size(even_dim) });
    }
    if base.is_directed(even_dim) {
        return Err(Error::DirectedViolation { dim: even_dim });
    }
    if m == 0 {
        return Err(Error::InvalidTorus("new dimension size must be at least 1".into()));
    }
    if m == 1 {
        return Ok(Extended {
            walk: h.clone(),
            measured_rl: rl_in,
            regressed_from: None,
            seams: Vec::new(),
        });
    }

    let n = h.step_count();
    let crossings = crossing_edges(h, even_dim);
    if crossings.len() < 2 {
        return Err(Error::SeamExhausted { tried: 0 });
    }

    // Layer traces as base-vertex indices; odd layers are reflected.
    let reflected = h.reflect(even_dim)?;
    let base_trace: Vec<usize> =
        h.trace()[..n].iter().map(|v| base.index_of(v.coords())).collect();
    let mirror_trace: Vec<usize> =
        reflected.trace()[..n].iter().map(|v| base.index_of(v.coords())).collect();
    let layer_traces: Vec<Vec<usize>> = (0..m)
        .map(|l| if l % 2 == 0 { base_trace.clone() } else { mirror_trace.clone() })
        .collect();

    let spec = base.with_extra_dim(m, false)?;
    let mut fallback: Option<Extended> = None;
    let mut tried = 0usize;
    for slots in candidate_assignments(m, &crossings, n, SEAM_CANDIDATE_CAP) {
        tried += 1;
        let mapped: Assignment =
            slots.iter().map(|s| s.map(|c| crossings[c].step_index)).collect();
        let Some(seq) = splice_layers(&layer_traces, &mapped, n) else {
            continue;
        };
        let walk = match vertex_sequence_to_walk(&spec, &seq, base, m) {
            Ok(w) => w,
            Err(_) => continue,
        };
        let report = walk.verify();
        if !report.is_hamiltonian {
            continue;
        }
        let seams = seam_edges(&layer_traces, &mapped, h, even_dim, n);
        let extended = Extended {
            walk,
            measured_rl: report.run_length,
            regressed_from: (report.run_length < rl_in).then_some(rl_in),
            seams,
        };
        if report.run_length >= rl_in {
            return Ok(extended);
        }
        fallback.get_or_insert(extended);
    }
    fallback.ok_or(Error::SeamExhausted { tried })
}

fn seam_edges(
    layer_traces: &[Vec<usize>],
    slots: &Assignment,
    h: &Walk,
    even_dim: usize,
    n: usize,
) -> Vec<SeamEdge> {
    let base = h.torus();
    let k = base.dim_count();
    let decode = |g: usize| -> Vertex {
        let mut coords = vec![0usize; k];
        let mut rest = g;
        for d in (0..k).rev() {
            coords[d] = rest % base.size(d);
            rest /= base.size(d);
        }
        Vertex::new(coords)
    };
    slots
        .iter()
        .enumerate()
        .filter_map(|(layer, slot)| {
            slot.map(|t| SeamEdge {
                layer_index: layer,
                endpoints: (
                    decode(layer_traces[layer][t]),
                    decode(layer_traces[layer][(t + 1) % n]),
                ),
                crossing_dim: even_dim,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Translation stacking
// ---------------------------------------------------------------------------

/// Extends `h` to a Hamiltonian cycle on `G x C_m` by translation stacking
/// along dimension `j`, which requires `size(j)` to divide `m`.
///
/// Layer `l` is `h` translated `l` times along `j`; the first step of `h` in
/// dimension `j` is the seam, its image is removed in every layer, and the
/// layers are chained by vertical edges. The trace returns to its start
/// because translating `m` times is the identity. Deterministic, no search.
pub fn extend_multiple(h: &Walk, j: usize, m: usize) -> Result<Extended> {
    let rl_in = require_hamiltonian(h)?;
    let base = h.torus();
    let k = base.dim_count();
    if j >= k {
        return Err(Error::DimensionOutOfRange { dim: j, dims: k });
    }
    if m < 2 {
        return Err(Error::InvalidTorus("new dimension size must be at least 2".into()));
    }
    if m % base.size(j) != 0 {
        return Err(Error::NotMultiple { size: base.size(j), m });
    }

    let n = h.step_count();
    let seam = h
        .steps()
        .iter()
        .position(|s| s.dim == j)
        .ok_or(Error::NoSeamEdge { dim: j })?;
    let sign = h.steps()[seam].sign;

    // Each layer contributes the cyclic step word starting just after the
    // seam, with the seam step itself replaced by a vertical step.
    let mut steps = Vec::with_capacity(m * n);
    for _ in 0..m {
        for i in 1..n {
            steps.push(h.steps()[(seam + i) % n]);
        }
        steps.push(Step { dim: k, sign: -1 });
    }

    let trace = h.trace();
    let mut start = trace[seam + 1].coords().to_vec();
    start.push(0);
    let spec = base.with_extra_dim(m, false)?;
    let walk = Walk::new(spec, Vertex::new(start), steps, true)
        .map_err(|e| Error::CompositionDefect(format!("stacked walk malformed: {e}")))?;
    let report = walk.verify();
    if !report.is_hamiltonian {
        return Err(Error::CompositionDefect(format!(
            "stacked walk is not Hamiltonian (missing {})",
            report.missing_count
        )));
    }

    let seams = (0..m)
        .map(|layer| {
            let offset = (layer as i64) * i64::from(sign);
            let v0 = translate_vertex(&trace[seam], j, offset, base);
            let v1 = translate_vertex(&trace[seam + 1], j, offset, base);
            SeamEdge { layer_index: layer, endpoints: (v0, v1), crossing_dim: j }
        })
        .collect();

    Ok(Extended {
        walk,
        measured_rl: report.run_length,
        regressed_from: (report.run_length < rl_in).then_some(rl_in),
        seams,
    })
}

fn translate_vertex(v: &Vertex, dim: usize, amount: i64, spec: &TorusSpec) -> Vertex {
    let size = spec.size(dim) as i64;
    let mut coords = v.coords().to_vec();
    coords[dim] = ((coords[dim] as i64 + amount).rem_euclid(size)) as usize;
    Vertex::new(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compose::{compose, SplitParams};
    use crate::torus::TorusSpec;

    fn square_cycle() -> Walk {
        let spec = TorusSpec::undirected(vec![2, 2]).unwrap();
        Walk::new(
            spec.clone(),
            Vertex::origin(&spec),
            vec![Step::forward(0), Step::forward(1), Step::forward(0), Step::forward(1)],
            true,
        )
        .unwrap()
    }

    fn cycle_3x3() -> Walk {
        let c3 = |_| {
            let spec = TorusSpec::undirected(vec![3]).unwrap();
            Walk::new(spec.clone(), Vertex::origin(&spec), vec![Step::forward(0); 3], true)
                .unwrap()
        };
        compose(&c3(0), &c3(1), &SplitParams::new(1, 2), false).unwrap()
    }

    #[test]
    fn extend_even_square_by_two() {
        let h = square_cycle();
        let ext = extend_even(&h, 0, 2).unwrap();
        assert_eq!(ext.walk.torus().sizes(), &[2, 2, 2]);
        let report = ext.walk.verify();
        assert!(report.is_hamiltonian);
        assert!(ext.measured_rl >= 2);
        assert_eq!(ext.regressed_from, None);
        // Seam endpoints differ only in the crossing dimension.
        for seam in &ext.seams {
            let (a, b) = (&seam.endpoints.0, &seam.endpoints.1);
            let diffs: Vec<usize> = (0..2).filter(|&d| a.coords()[d] != b.coords()[d]).collect();
            assert_eq!(diffs, vec![seam.crossing_dim]);
        }
    }

    #[test]
    fn extend_even_square_by_three() {
        let h = square_cycle();
        let ext = extend_even(&h, 0, 3).unwrap();
        assert_eq!(ext.walk.torus().sizes(), &[2, 2, 3]);
        assert!(ext.walk.verify().is_hamiltonian);
        assert!(ext.measured_rl >= 2, "measured {}", ext.measured_rl);
        assert_eq!(ext.regressed_from, None);
    }

    #[test]
    fn extend_even_rejects_odd_dimension() {
        let h = cycle_3x3();
        let err = extend_even(&h, 0, 2).unwrap_err();
        assert!(matches!(err, Error::NoEvenDimension { dim: 0, size: 3 }));
    }

    #[test]
    fn extend_even_identity_at_one() {
        let h = square_cycle();
        let ext = extend_even(&h, 0, 1).unwrap();
        assert_eq!(ext.walk, h);
    }

    #[test]
    fn extend_multiple_3x3_by_three() {
        let h = cycle_3x3();
        let rl = h.run_length();
        let ext = extend_multiple(&h, 1, 3).unwrap();
        assert_eq!(ext.walk.torus().sizes(), &[3, 3, 3]);
        assert!(ext.walk.verify().is_hamiltonian);
        assert!(ext.measured_rl >= rl);
        assert_eq!(ext.regressed_from, None);
        assert_eq!(ext.seams.len(), 3);
    }

    #[test]
    fn extend_multiple_3x3_by_six() {
        let h = cycle_3x3();
        let ext = extend_multiple(&h, 1, 6).unwrap();
        assert_eq!(ext.walk.torus().sizes(), &[3, 3, 6]);
        assert!(ext.walk.verify().is_hamiltonian);
    }

    #[test]
    fn extend_multiple_rejects_non_multiple() {
        let h = cycle_3x3();
        let err = extend_multiple(&h, 1, 4).unwrap_err();
        assert!(matches!(err, Error::NotMultiple { size: 3, m: 4 }));
    }

    #[test]
    fn extend_multiple_vertical_steps_once_per_layer() {
        let h = cycle_3x3();
        let ext = extend_multiple(&h, 1, 3).unwrap();
        let new_dim = 2;
        let verticals =
            ext.walk.steps().iter().filter(|s| s.dim == new_dim).count();
        assert_eq!(verticals, 3);
        // Erasing vertical steps leaves each layer as a contiguous arc of
        // h's step sequence with one dimension-j step removed.
        let n = h.step_count();
        let chunks: Vec<Vec<Step>> = ext
            .walk
            .steps()
            .split(|s| s.dim == new_dim)
            .filter(|c| !c.is_empty())
            .map(|c| c.to_vec())
            .collect();
        // The seam is the first dim-1 step; every layer repeats the same word.
        let seam = h.steps().iter().position(|s| s.dim == 1).unwrap();
        let expected: Vec<Step> = (1..n).map(|i| h.steps()[(seam + i) % n]).collect();
        for chunk in chunks {
            assert_eq!(chunk, expected);
        }
    }
}
