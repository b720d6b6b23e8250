//! The space of Delzant polygons under the symmetric-difference
//! metric, and probes for how the optimal packing density behaves
//! under small deformations.
//!
//! Two deformation families are built in. Chopping every corner at a
//! common scale `s` moves a polygon by exactly `N s^2 / 2` in the
//! metric while collapsing its density bound: the discontinuity probe
//! measures that collapse. Sliding one support line keeps the
//! combinatorics and moves the density gently: the continuity probe
//! checks the deviation against a square-root modulus.
//!
//! The classifier asks, corner by corner, whether forbidding a simplex
//! at that corner costs density in the limit: it compares each
//! avoid-one-corner optimum with the global one and, where they agree,
//! emits an explicit chop sequence whose densities climb back toward
//! the optimum.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};

use crate::delzant::{DelzantError, DelzantPolygon};
use crate::exactgeom::{rat, rat_int, Rational};
use crate::packing::{is_admissible_packing, omega, omega_i, packing_density, DensityBounds};

/// Symmetric-difference area between two Delzant polygons. This is a
/// metric on polygons up to equality as point sets.
pub fn distance(p: &DelzantPolygon, q: &DelzantPolygon) -> Rational {
    p.base().symmetric_difference_area(q.base())
}

/// A short deterministic identifier for a polygon: vertex count and
/// the vertex list.
pub fn polygon_id(d: &DelzantPolygon) -> String {
    let mut s = format!("P{}[", d.vertex_count());
    for (k, v) in d.vertices().iter().enumerate() {
        if k > 0 {
            s.push(';');
        }
        let _ = write!(s, "{},{}", v.x, v.y);
    }
    s.push(']');
    s
}

/// Chops every corner at the common scale `s`, doubling the vertex
/// count. Requires `0 < s < min edge length / 2` so adjacent chops
/// leave a positive remnant of every original edge; the area drops by
/// exactly `n s^2 / 2` for `n` original corners.
pub fn chop_all(d: &DelzantPolygon, s: &Rational) -> Result<DelzantPolygon, DelzantError> {
    let max = &d.min_edge_length() / &rat_int(2);
    if !s.is_positive() || s >= &max {
        return Err(DelzantError::ChopScaleOutOfRange { scale: s.clone(), max });
    }
    // Chop original corners in descending index order: a chop at index
    // i only shifts the indices above i, so lower original indices
    // stay valid throughout.
    let mut cur = d.clone();
    for i in (0..d.vertex_count()).rev() {
        cur = cur.chop(i, s)?;
    }
    Ok(cur)
}

/// One deformation step of a probe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeStep {
    pub descriptor: String,
    pub distance: Rational,
    pub bounds: DensityBounds,
    /// Analytic cap on the step's density, present for chop probes:
    /// with all caps at most `s`, the covered area cannot exceed
    /// `n s^2` for `n` original corners.
    pub ceiling: Option<Rational>,
}

/// Outcome of a probe run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeVerdict {
    DiscontinuityWitnessed { gap_achieved: Rational, required_gap: Rational },
    DiscontinuityNotWitnessed { gap_achieved: Rational, required_gap: Rational },
    ContinuityConsistent { modulus: Rational },
    ContinuityInconsistent { modulus: Rational, failing_step: usize },
}

impl ProbeVerdict {
    pub fn kind(&self) -> &'static str {
        match self {
            ProbeVerdict::DiscontinuityWitnessed { .. } => "discontinuity witnessed",
            ProbeVerdict::DiscontinuityNotWitnessed { .. } => "discontinuity not witnessed",
            ProbeVerdict::ContinuityConsistent { .. } => "continuity consistent",
            ProbeVerdict::ContinuityInconsistent { .. } => "continuity inconsistent",
        }
    }
}

/// A probe run: the base polygon's bounds plus one record per
/// deformation step and a final verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    pub polygon_id: String,
    pub base: DensityBounds,
    pub steps: Vec<ProbeStep>,
    pub verdict: ProbeVerdict,
}

/// Chops all corners at each given scale and compares the resulting
/// density upper bounds against the base optimum. The verdict is
/// "witnessed" when every step, including the largest upper bound
/// among them, stays at least `required_gap` below the base density.
pub fn discontinuity_probe(
    d: &DelzantPolygon,
    scales: &[Rational],
    required_gap: &Rational,
) -> Result<ProbeReport, DelzantError> {
    let base = omega(d);
    let n = rat_int(d.vertex_count() as i64);
    let mut steps = Vec::with_capacity(scales.len());
    let mut sup_upper: Option<Rational> = None;
    for s in scales {
        let chopped = chop_all(d, s)?;
        let bounds = omega(&chopped);
        let ceiling = &(&n * &(s * s)) / &chopped.area();
        sup_upper = Some(match sup_upper.take() {
            Some(cur) => cur.max(bounds.upper.clone()),
            None => bounds.upper.clone(),
        });
        steps.push(ProbeStep {
            descriptor: format!("chop_all s={}", s),
            distance: distance(d, &chopped),
            bounds,
            ceiling: Some(ceiling),
        });
    }
    let verdict = match sup_upper {
        Some(sup) => {
            let gap_achieved = &base.lower - &sup;
            if gap_achieved >= *required_gap {
                ProbeVerdict::DiscontinuityWitnessed { gap_achieved, required_gap: required_gap.clone() }
            } else {
                ProbeVerdict::DiscontinuityNotWitnessed { gap_achieved, required_gap: required_gap.clone() }
            }
        }
        None => ProbeVerdict::DiscontinuityNotWitnessed {
            gap_achieved: Rational::zero(),
            required_gap: required_gap.clone(),
        },
    };
    Ok(ProbeReport { polygon_id: polygon_id(d), base, steps, verdict })
}

/// Slides the support line of edge `side` by each given delta and
/// checks that the density deviation is controlled by a square-root
/// modulus: `deviation^2 <= modulus^2 * distance`, exactly. A step at
/// distance zero must not move the bounds at all.
pub fn continuity_probe(
    d: &DelzantPolygon,
    side: usize,
    deltas: &[Rational],
    modulus: &Rational,
) -> Result<ProbeReport, DelzantError> {
    assert!(side < d.vertex_count(), "edge index {} out of range", side);
    let base = omega(d);
    let mut steps = Vec::with_capacity(deltas.len());
    let mut failing: Option<usize> = None;
    for (k, delta) in deltas.iter().enumerate() {
        let moved = d.perturb_support(side, delta)?;
        let dist = distance(d, &moved);
        let bounds = omega(&moved);
        let dev_lower = (&bounds.lower - &base.lower).abs();
        let dev_upper = (&bounds.upper - &base.upper).abs();
        let dev = dev_lower.max(dev_upper);
        let ok = if dist.is_zero() {
            dev.is_zero()
        } else {
            &dev * &dev <= &(modulus * modulus) * &dist
        };
        if !ok && failing.is_none() {
            failing = Some(k);
        }
        steps.push(ProbeStep {
            descriptor: format!("perturb side={} delta={}", side, delta),
            distance: dist,
            bounds,
            ceiling: None,
        });
    }
    let verdict = match failing {
        None => ProbeVerdict::ContinuityConsistent { modulus: modulus.clone() },
        Some(k) => ProbeVerdict::ContinuityInconsistent { modulus: modulus.clone(), failing_step: k },
    };
    Ok(ProbeReport { polygon_id: polygon_id(d), base, steps, verdict })
}

/// One step of a classifier witness sequence: a chop of the probed
/// corner together with an explicit admissible packing of the chopped
/// polygon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessStep {
    pub scale: Rational,
    pub distance: Rational,
    pub radii: Vec<Rational>,
    pub density: Rational,
}

/// A witness that chopping the given corner loses no density in the
/// limit: successive chops at shrinking scales whose packings have
/// strictly increasing densities below the optimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChopWitness {
    pub vertex_index: usize,
    pub steps: Vec<WitnessStep>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Some bound was not certified, so equality of optima cannot be
    /// decided exactly.
    Inconclusive,
    /// Every corner carries density: no avoid-one-corner packing
    /// reaches the optimum, so the optimum drops across any corner
    /// chop.
    ConfinedToStratum,
    /// At these corners the avoided optimum equals the global one, and
    /// chop sequences through them approach the optimal density.
    ExtendsAtVertices(Vec<usize>),
}

/// Classifier output: global bounds, per-corner avoided bounds, the
/// corners where they agree, and a chop witness per agreeing corner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifierReport {
    pub polygon_id: String,
    pub bounds: DensityBounds,
    pub per_vertex: Vec<DensityBounds>,
    pub equal_set: Vec<usize>,
    pub classification: Classification,
    pub witnesses: Vec<ChopWitness>,
}

/// Compares the global density optimum with each avoid-one-corner
/// optimum, exactly. Corners where the two agree admit chop sequences
/// that recover the optimum in the limit; the report carries one such
/// sequence per corner. Equality is only asserted between certified
/// values; any uncertified bound makes the classification
/// inconclusive.
pub fn neighborhood_classifier(d: &DelzantPolygon) -> ClassifierReport {
    let bounds = omega(d);
    let n = d.vertex_count();
    let per_vertex: Vec<DensityBounds> = (0..n).map(|i| omega_i(d, i)).collect();
    let all_certified = bounds.certified && per_vertex.iter().all(|b| b.certified);
    let equal_set: Vec<usize> = if all_certified {
        (0..n).filter(|&i| per_vertex[i].lower == bounds.lower).collect()
    } else {
        Vec::new()
    };
    let classification = if !all_certified {
        Classification::Inconclusive
    } else if equal_set.is_empty() {
        Classification::ConfinedToStratum
    } else {
        Classification::ExtendsAtVertices(equal_set.clone())
    };
    let witnesses = equal_set
        .iter()
        .map(|&i| ChopWitness {
            vertex_index: i,
            steps: witness_steps(d, i, &bounds.lower, &per_vertex[i].witness.radii),
        })
        .collect();
    ClassifierReport {
        polygon_id: polygon_id(d),
        bounds,
        per_vertex,
        equal_set,
        classification,
        witnesses,
    }
}

/// Number of halving scales in a witness sequence.
const WITNESS_STEPS: usize = 4;

fn witness_steps(d: &DelzantPolygon, i: usize, om: &Rational, w: &[Rational]) -> Vec<WitnessStep> {
    let s0 = &d.vertex_radius(i) / &rat_int(4);
    let mut scales = Vec::with_capacity(WITNESS_STEPS);
    let mut s = s0;
    for _ in 0..WITNESS_STEPS {
        scales.push(s.clone());
        s = &s / &rat_int(2);
    }
    if let Some(steps) = min_clip_steps(d, i, om, w, &scales) {
        return steps;
    }
    shrink_chop_steps(d, i, om, w)
}

/// Primary witness construction: chop the corner and keep every other
/// radius of the avoided packing, clipped to the new vertex caps. The
/// sequence is used only if it validates: densities strictly
/// increasing and never above the optimum.
fn min_clip_steps(
    d: &DelzantPolygon,
    i: usize,
    om: &Rational,
    w: &[Rational],
    scales: &[Rational],
) -> Option<Vec<WitnessStep>> {
    let n = d.vertex_count();
    let mut steps = Vec::with_capacity(scales.len());
    let mut last: Option<Rational> = None;
    for s in scales {
        let chopped = d.chop(i, s).ok()?;
        let mut radii = vec![Rational::zero(); n + 1];
        for (j, wj) in w.iter().enumerate() {
            if j == i {
                continue;
            }
            let nj = if j < i { j } else { j + 1 };
            radii[nj] = wj.min(&chopped.vertex_radius(nj)).clone();
        }
        if !is_admissible_packing(&chopped, &radii) {
            return None;
        }
        let density = packing_density(&chopped, &radii).expect("admissibility just checked");
        if density > *om {
            return None;
        }
        if let Some(prev) = &last {
            if density <= *prev {
                return None;
            }
        }
        last = Some(density.clone());
        steps.push(WitnessStep { scale: s.clone(), distance: distance(d, &chopped), radii, density });
    }
    Some(steps)
}

/// Fallback witness construction with provable monotonicity: scale all
/// radii by `1 - eps_k` with `eps_k = 1/2^(k+2)`, then chop at a scale
/// small enough that no shrunk leg is clipped and the relative area
/// loss stays inside the band between consecutive shrink factors.
fn shrink_chop_steps(d: &DelzantPolygon, i: usize, om: &Rational, w: &[Rational]) -> Vec<WitnessStep> {
    let n = d.vertex_count();
    let area = d.area();
    let two = rat_int(2);
    let mut steps = Vec::with_capacity(WITNESS_STEPS);
    let mut sigma = &d.vertex_radius(i) / &two;
    for k in 0..WITNESS_STEPS {
        let eps_k = rat(1, 1i64 << (k + 2));
        let eps_next = rat(1, 1i64 << (k + 3));
        let shrink = &rat_int(1) - &eps_k;
        let shrink_next = &rat_int(1) - &eps_next;
        let band = &(&shrink_next / &shrink) * &(&shrink_next / &shrink);
        loop {
            // Neighbor legs must still fit after the incident edge
            // loses `sigma`.
            let prev = (i + n - 1) % n;
            let next = (i + 1) % n;
            let fits = |j: usize, len_to_i: &Rational| -> bool {
                &(&shrink * &w[j]) <= &(len_to_i - &sigma)
            };
            let prev_ok = w[prev].is_zero() || fits(prev, &d.edge_rational_length(prev));
            let next_ok = w[next].is_zero() || fits(next, &d.edge_rational_length(i));
            // Relative area loss below the density gain between
            // consecutive shrink factors.
            let chopped_area = &area - &(&(&sigma * &sigma) / &two);
            let band_ok = chopped_area.is_positive() && &area / &chopped_area < band;
            if prev_ok && next_ok && band_ok {
                break;
            }
            sigma = &sigma / &two;
        }
        let chopped = d.chop(i, &sigma).expect("sigma stays below the corner's incident lengths");
        let mut radii = vec![Rational::zero(); n + 1];
        for (j, wj) in w.iter().enumerate() {
            if j == i {
                continue;
            }
            let nj = if j < i { j } else { j + 1 };
            radii[nj] = &shrink * wj;
        }
        assert!(
            is_admissible_packing(&chopped, &radii),
            "shrunk radii with an unclipped chop stay admissible"
        );
        let density = packing_density(&chopped, &radii).expect("asserted admissible");
        debug_assert!(&density < om);
        steps.push(WitnessStep {
            scale: sigma.clone(),
            distance: distance(d, &chopped),
            radii,
            density,
        });
    }
    steps
}
