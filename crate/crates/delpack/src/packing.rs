//! Corner simplex packings of Delzant polygons and their densities.
//!
//! A packing places at most one simplex at each corner: the triangle
//! spanned by the corner's two primitive directions at a common radius
//! `r`. Simplices may touch along boundaries but must not share
//! interior area. The density of a packing is the ratio of covered
//! area to polygon area; with per-corner area `r^2/2` this is
//! `sum(r_i^2) / (2 area)`.
//!
//! [`optimal_density`] brackets the best achievable density between a
//! certified feasible packing and a relaxation bound:
//!
//! * Upper bound: maximize `sum(r_i^2)` subject to the per-corner caps
//!   `0 <= r_i <= vertex_radius(i)` and the adjacency constraints
//!   `r_i + r_{i+1} <= edge length`, which every admissible packing
//!   satisfies. The maximum of this convex objective over the
//!   constraint polytope is attained at a polytope vertex, and the
//!   vertices can be enumerated exactly.
//! * Certification: each maximizer is tested for full admissibility by
//!   exact clipping, in lexicographic order. The first admissible one
//!   closes the gap and the bounds collapse to the exact optimum.
//! * Lower bound: when no maximizer is admissible, a deterministic
//!   coordinate descent over rational grids (denominators doubling up
//!   to a cap) produces a feasible packing.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::delzant::DelzantPolygon;
use crate::exactgeom::{rat_int, ConvexPolygon, Rational};

/// The corner simplex at a vertex: the triangle spanned by the two
/// corner directions at radius `r`, counterclockwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleSimplex {
    pub vertex_index: usize,
    pub radius: Rational,
    pub triangle: ConvexPolygon,
}

/// A choice of radius per vertex; zero means no simplex there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Packing {
    pub radii: Vec<Rational>,
}

/// Exact bounds on the optimal packing density.
///
/// Invariants: `0 <= lower <= upper <= 1`, the witness is admissible
/// with density exactly `lower`, and `certified` holds exactly when
/// `lower == upper`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityBounds {
    pub lower: Rational,
    pub upper: Rational,
    pub certified: bool,
    pub witness: Packing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PackingError {
    /// Requested radius outside `(0, vertex_radius]`.
    RadiusOutOfRange { radius: Rational, max: Rational },
    /// The radii vector is not an admissible packing.
    Inadmissible,
}

impl fmt::Display for PackingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PackingError::RadiusOutOfRange { radius, max } => {
                write!(f, "radius {} outside the admissible interval (0, {}]", radius, max)
            }
            PackingError::Inadmissible => write!(f, "radii do not form an admissible packing"),
        }
    }
}

impl std::error::Error for PackingError {}

/// Builds the corner simplex at vertex `i` with radius `r`. The radius
/// must satisfy `0 < r <= vertex_radius(i)`; the triangle then lies
/// inside the polygon and has area exactly `r^2/2`.
pub fn simplex_at(d: &DelzantPolygon, i: usize, r: &Rational) -> Result<AdmissibleSimplex, PackingError> {
    let n = d.vertex_count();
    assert!(i < n, "vertex index {} out of range for {} vertices", i, n);
    let max = d.vertex_radius(i);
    if !r.is_positive() || *r > max {
        return Err(PackingError::RadiusOutOfRange { radius: r.clone(), max });
    }
    let v = d.vertex(i);
    let c = d.corner(i);
    let leg_next = v + &(r * &c.toward_next.as_ratvec());
    let leg_prev = v + &(r * &c.toward_prev.as_ratvec());
    let triangle = ConvexPolygon::new(vec![v.clone(), leg_next, leg_prev])
        .expect("corner directions of a Delzant corner span a nondegenerate triangle");
    Ok(AdmissibleSimplex { vertex_index: i, radius: r.clone(), triangle })
}

fn simplex_triangles(d: &DelzantPolygon, radii: &[Rational]) -> Option<Vec<Option<ConvexPolygon>>> {
    let n = d.vertex_count();
    assert_eq!(radii.len(), n, "one radius per vertex");
    let mut out = Vec::with_capacity(n);
    for (i, r) in radii.iter().enumerate() {
        if r.is_negative() {
            return None;
        }
        if r.is_zero() {
            out.push(None);
        } else {
            match simplex_at(d, i, r) {
                Ok(s) => out.push(Some(s.triangle)),
                Err(_) => return None,
            }
        }
    }
    Some(out)
}

/// Whether the radii give pairwise interior-disjoint corner simplices
/// within their caps. Touching along edges or at points is allowed;
/// the all-zero vector is admissible.
pub fn is_admissible_packing(d: &DelzantPolygon, radii: &[Rational]) -> bool {
    let triangles = match simplex_triangles(d, radii) {
        Some(t) => t,
        None => return false,
    };
    let placed: Vec<&ConvexPolygon> = triangles.iter().flatten().collect();
    for a in 0..placed.len() {
        for b in a + 1..placed.len() {
            if placed[a].intersect_convex(placed[b]).is_some() {
                return false;
            }
        }
    }
    true
}

/// Density of an admissible packing: covered area over polygon area.
pub fn packing_density(d: &DelzantPolygon, radii: &[Rational]) -> Result<Rational, PackingError> {
    if !is_admissible_packing(d, radii) {
        return Err(PackingError::Inadmissible);
    }
    Ok(&sum_of_squares(radii) / &(&d.area() * &rat_int(2)))
}

fn sum_of_squares(radii: &[Rational]) -> Rational {
    radii.iter().fold(Rational::zero(), |acc, r| &acc + &(r * r))
}

/// Vertex enumeration of the relaxation polytope is exponential in the
/// vertex count; beyond this many corners the bound degrades to the
/// cap-only estimate and certification via maximizers is skipped.
const MAX_ENUM_VERTICES: usize = 13;

/// Exact maximum of `sum(r_i^2)` over the relaxation polytope, with
/// every maximizing vertex. For polygons with more than
/// [`MAX_ENUM_VERTICES`] corners the maximizer set comes back empty
/// and the value is the sum of squared caps, still an upper bound.
fn relaxation_optimum(caps: &[Rational], lens: &[Rational]) -> (Rational, BTreeSet<Vec<Rational>>) {
    let n = caps.len();
    if n > MAX_ENUM_VERTICES {
        return (sum_of_squares(caps), BTreeSet::new());
    }

    let mut best = Rational::zero();
    let mut args: BTreeSet<Vec<Rational>> = BTreeSet::new();
    args.insert(vec![Rational::zero(); n]);

    let feasible = |r: &[Rational]| -> bool {
        (0..n).all(|i| {
            !r[i].is_negative() && r[i] <= caps[i] && &(&r[i] + &r[(i + 1) % n]) <= &lens[i]
        })
    };
    let mut consider = |r: Vec<Rational>| {
        let s = sum_of_squares(&r);
        if s < best || !feasible(&r) {
            return;
        }
        if s > best {
            best = s;
            args.clear();
        }
        args.insert(r);
    };

    let full: u32 = (1u32 << n) - 1;
    for mask in 0..=full {
        if mask == full {
            enumerate_full_cycle(caps, lens, &mut consider);
            continue;
        }
        enumerate_chains(mask, caps, lens, &mut consider);
    }
    (best, args)
}

/// Candidates for a mask of tight adjacency constraints that does not
/// cover the whole cycle: the tight edges split the vertices into
/// chains, values propagate along each chain from one anchored bound.
fn enumerate_chains(mask: u32, caps: &[Rational], lens: &[Rational], consider: &mut impl FnMut(Vec<Rational>)) {
    let n = caps.len();
    let edge_tight = |j: usize| mask & (1u32 << j) != 0;
    let mut chains: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if edge_tight((start + n - 1) % n) {
            continue;
        }
        let mut chain = vec![start];
        let mut cur = start;
        while edge_tight(cur) {
            cur = (cur + 1) % n;
            chain.push(cur);
        }
        chains.push(chain);
    }

    // Per chain, every achievable anchored assignment that stays in
    // bounds. Anchoring each position at 0 or at its cap covers every
    // polytope vertex compatible with this mask.
    let mut options: Vec<Vec<Vec<Rational>>> = Vec::with_capacity(chains.len());
    for chain in &chains {
        let m = chain.len();
        let mut set: BTreeSet<Vec<Rational>> = BTreeSet::new();
        for anchor in 0..m {
            for bound in [Rational::zero(), caps[chain[anchor]].clone()] {
                let mut vals = vec![Rational::zero(); m];
                vals[anchor] = bound;
                let mut ok = true;
                for t in anchor + 1..m {
                    vals[t] = &lens[chain[t - 1]] - &vals[t - 1];
                    if vals[t].is_negative() || vals[t] > caps[chain[t]] {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    for t in (0..anchor).rev() {
                        vals[t] = &lens[chain[t]] - &vals[t + 1];
                        if vals[t].is_negative() || vals[t] > caps[chain[t]] {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    set.insert(vals);
                }
            }
        }
        if set.is_empty() {
            return;
        }
        options.push(set.into_iter().collect());
    }

    // Cartesian product over chains.
    let mut choice = vec![0usize; options.len()];
    loop {
        let mut r = vec![Rational::zero(); n];
        for (c, chain) in chains.iter().enumerate() {
            for (t, &v) in chain.iter().enumerate() {
                r[v] = options[c][choice[c]][t].clone();
            }
        }
        consider(r);
        let mut k = 0;
        loop {
            if k == options.len() {
                return;
            }
            choice[k] += 1;
            if choice[k] < options[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Candidates when every adjacency constraint is tight. The solutions
/// form the affine line `r_i = alpha_i + (-1)^i t`; for odd cycles the
/// wrap-around equation pins `t`, for even cycles it either rules the
/// mask out or leaves a segment whose endpoints are the candidates.
fn enumerate_full_cycle(caps: &[Rational], lens: &[Rational], consider: &mut impl FnMut(Vec<Rational>)) {
    let n = caps.len();
    let mut alpha = vec![Rational::zero(); n + 1];
    for i in 0..n {
        alpha[i + 1] = &lens[i] - &alpha[i];
    }
    let sign = |i: usize| -> i8 { if i % 2 == 0 { 1 } else { -1 } };
    let build = |t: &Rational| -> Vec<Rational> {
        (0..n)
            .map(|i| if sign(i) == 1 { &alpha[i] + t } else { &alpha[i] - t })
            .collect()
    };
    if n % 2 == 1 {
        // Wrap-around: alpha_n - t = t.
        let t = &alpha[n] / &rat_int(2);
        consider(build(&t));
        return;
    }
    if !alpha[n].is_zero() {
        return;
    }
    // 0 <= alpha_i + s_i t <= caps_i for all i.
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    let mut tighten = |l: Rational, h: Rational| {
        lo = Some(match lo.take() {
            Some(cur) => cur.max(l),
            None => l,
        });
        hi = Some(match hi.take() {
            Some(cur) => cur.min(h),
            None => h,
        });
    };
    for i in 0..n {
        let span = &caps[i] - &alpha[i];
        if sign(i) == 1 {
            tighten(-&alpha[i], span);
        } else {
            tighten(-span, alpha[i].clone());
        }
    }
    let (lo, hi) = (lo.expect("n >= 3"), hi.expect("n >= 3"));
    if lo > hi {
        return;
    }
    consider(build(&lo));
    if hi != lo {
        consider(build(&hi));
    }
}

fn effective_caps(d: &DelzantPolygon, avoid: &BTreeSet<usize>) -> Vec<Rational> {
    let n = d.vertex_count();
    (0..n)
        .map(|i| if avoid.contains(&i) { Rational::zero() } else { d.vertex_radius(i) })
        .collect()
}

fn edge_lengths(d: &DelzantPolygon) -> Vec<Rational> {
    (0..d.vertex_count()).map(|j| d.edge_rational_length(j)).collect()
}

/// Upper bound on the packing density from the adjacency relaxation,
/// together with the lexicographically smallest maximizer. Corners in
/// `avoid` are forced to radius zero.
pub fn relaxed_upper_bound(d: &DelzantPolygon, avoid: &BTreeSet<usize>) -> (Rational, Packing) {
    check_avoid(d, avoid);
    let (best, args) = relaxation_optimum(&effective_caps(d, avoid), &edge_lengths(d));
    let radii = args
        .first()
        .cloned()
        .unwrap_or_else(|| vec![Rational::zero(); d.vertex_count()]);
    (&best / &(&d.area() * &rat_int(2)), Packing { radii })
}

fn check_avoid(d: &DelzantPolygon, avoid: &BTreeSet<usize>) {
    let n = d.vertex_count();
    for &i in avoid {
        assert!(i < n, "avoided vertex index {} out of range for {} vertices", i, n);
    }
}

/// Default denominator cap for the refinement grid.
pub const DEFAULT_REFINE_CAP: u64 = 64;

/// Greedy coordinate descent for a feasible packing: on grids with
/// denominators doubling from 4 up to the cap, repeatedly raise each
/// radius in vertex order to the largest admissible grid value. The
/// scan order and grid make the result deterministic. Per-coordinate
/// feasibility is downward closed (shrinking one radius keeps the rest
/// admissible), so each accepted raise preserves admissibility.
fn refine_packing(d: &DelzantPolygon, avoid: &BTreeSet<usize>, cap: u64) -> Vec<Rational> {
    let n = d.vertex_count();
    let caps = effective_caps(d, avoid);
    let lens = edge_lengths(d);
    let mut radii = vec![Rational::zero(); n];
    let mut triangles: Vec<Option<ConvexPolygon>> = vec![None; n];
    let mut denom: u64 = 4.min(cap.max(1));
    loop {
        loop {
            let mut improved = false;
            for i in 0..n {
                if caps[i].is_zero() {
                    continue;
                }
                let den = Rational::from_integer(BigInt::from(denom));
                let kmax = match (&caps[i] * &den).floor().to_integer().to_i64() {
                    Some(k) => k,
                    None => continue,
                };
                let kcur = (&radii[i] * &den)
                    .to_integer()
                    .to_i64()
                    .expect("current radius fits the grid");
                for k in ((kcur + 1)..=kmax).rev() {
                    let val = Rational::new(BigInt::from(k), BigInt::from(denom));
                    let prev = (i + n - 1) % n;
                    if &(&val + &radii[prev]) > &lens[prev] || &(&val + &radii[(i + 1) % n]) > &lens[i] {
                        continue;
                    }
                    let tri = match simplex_at(d, i, &val) {
                        Ok(s) => s.triangle,
                        Err(_) => continue,
                    };
                    let clash = triangles
                        .iter()
                        .enumerate()
                        .any(|(j, t)| j != i && matches!(t, Some(o) if tri.intersect_convex(o).is_some()));
                    if !clash {
                        radii[i] = val;
                        triangles[i] = Some(tri);
                        improved = true;
                        break;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        if denom >= cap {
            break;
        }
        denom = (denom * 2).min(cap);
    }
    radii
}

/// Certified or bracketed optimal packing density with a custom
/// refinement cap. Corners in `avoid` are forced to radius zero.
pub fn optimal_density_with_cap(d: &DelzantPolygon, avoid: &BTreeSet<usize>, refine_cap: u64) -> DensityBounds {
    check_avoid(d, avoid);
    let caps = effective_caps(d, avoid);
    let lens = edge_lengths(d);
    let (best_sum, maximizers) = relaxation_optimum(&caps, &lens);
    let twice_area = &d.area() * &rat_int(2);
    let raw_upper = &best_sum / &twice_area;
    for cand in &maximizers {
        if is_admissible_packing(d, cand) {
            return DensityBounds {
                lower: raw_upper.clone(),
                upper: raw_upper,
                certified: true,
                witness: Packing { radii: cand.clone() },
            };
        }
    }
    let upper = raw_upper.min(rat_int(1));
    let radii = refine_packing(d, avoid, refine_cap);
    let lower = &sum_of_squares(&radii) / &twice_area;
    let certified = lower == upper;
    DensityBounds { lower, upper, certified, witness: Packing { radii } }
}

/// Certified or bracketed optimal packing density over packings whose
/// `avoid` corners carry no simplex.
pub fn optimal_density(d: &DelzantPolygon, avoid: &BTreeSet<usize>) -> DensityBounds {
    optimal_density_with_cap(d, avoid, DEFAULT_REFINE_CAP)
}

/// Bounds for the unconstrained optimal density.
pub fn omega(d: &DelzantPolygon) -> DensityBounds {
    optimal_density(d, &BTreeSet::new())
}

/// Bounds for the optimal density among packings avoiding vertex `i`.
pub fn omega_i(d: &DelzantPolygon, i: usize) -> DensityBounds {
    assert!(i < d.vertex_count(), "vertex index {} out of range", i);
    let mut avoid = BTreeSet::new();
    avoid.insert(i);
    optimal_density(d, &avoid)
}
