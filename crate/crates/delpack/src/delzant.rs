//! Delzant polygons: strictly convex rational polygons whose corners
//! are unimodular, i.e. at every vertex the primitive directions of
//! the two incident edges form a lattice basis.
//!
//! The validated type caches each edge's primitive direction and
//! rational length, and each corner's pair of outgoing directions.
//! Construction goes through [`DelzantPolygon::validate`]; every other
//! operation (generators, lattice-affine images, corner chops, support
//! perturbations) returns polygons that are validated again before
//! they are handed back.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exactgeom::{
    dot, primitive_decompose, rat_int, ConvexPolygon, GeomError, IntVec, Point, RatVec, Rational,
};

/// An edge of a Delzant polygon: primitive integer direction plus the
/// rational length such that `direction * length` is the displacement
/// from the edge's start vertex to its end vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub direction: IntVec,
    pub length: Rational,
}

/// A corner of a Delzant polygon: the primitive directions pointing
/// from the vertex along its two incident edges. `toward_prev` runs
/// backwards along the incoming edge, `toward_next` forwards along the
/// outgoing edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corner {
    pub toward_prev: IntVec,
    pub toward_next: IntVec,
}

/// One failed corner in a [`ViolationReport`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub vertex_index: usize,
    pub vertex: Point,
    pub det_magnitude: BigInt,
}

/// All corners at which the unimodularity condition fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
}

impl fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(
                f,
                "vertex {} at {}: incident primitive directions have determinant magnitude {}",
                v.vertex_index, v.vertex, v.det_magnitude
            )?;
        }
        Ok(())
    }
}

/// Errors for operations on Delzant polygons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DelzantError {
    /// A generator was given a nonpositive size parameter.
    NonPositiveParameter(&'static str),
    /// A linear map with determinant other than +1 or -1.
    NonUnimodularMap(BigInt),
    /// A chop scale outside the open interval (0, max).
    ChopScaleOutOfRange { scale: Rational, max: Rational },
    /// A support form that does not determine a polygon: fewer than
    /// three rows or consecutive parallel normals.
    SupportDegenerate,
    /// A support perturbation that changed which edges appear, so the
    /// result is not a deformation of the same combinatorial type.
    CombinatoricsChanged,
    /// The vertex list is not a strictly convex counterclockwise ring.
    InvalidPolygon(GeomError),
    /// The polygon is convex but some corner is not unimodular.
    NotDelzant(ViolationReport),
}

impl fmt::Display for DelzantError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DelzantError::NonPositiveParameter(name) => write!(f, "parameter {} must be positive", name),
            DelzantError::NonUnimodularMap(d) => {
                write!(f, "linear part has determinant {}, expected +1 or -1", d)
            }
            DelzantError::ChopScaleOutOfRange { scale, max } => {
                write!(f, "chop scale {} outside the open interval (0, {})", scale, max)
            }
            DelzantError::SupportDegenerate => write!(f, "support form does not determine a polygon"),
            DelzantError::CombinatoricsChanged => {
                write!(f, "perturbation changed the polygon's combinatorial type")
            }
            DelzantError::InvalidPolygon(e) => write!(f, "invalid polygon: {}", e),
            DelzantError::NotDelzant(r) => write!(f, "not Delzant: {}", r),
        }
    }
}

impl std::error::Error for DelzantError {}

/// A validated Delzant polygon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelzantPolygon {
    base: ConvexPolygon,
    edges: Vec<Edge>,
    corners: Vec<Corner>,
}

impl DelzantPolygon {
    /// Checks the unimodularity condition at every corner of a convex
    /// polygon. On failure the report lists every bad corner with the
    /// determinant magnitude of its incident primitive directions.
    pub fn validate(base: ConvexPolygon) -> Result<DelzantPolygon, ViolationReport> {
        let n = base.vertex_count();
        let mut edges = Vec::with_capacity(n);
        for i in 0..n {
            let (direction, length) =
                primitive_decompose(&base.edge_vector(i)).expect("convex polygon edges are nonzero");
            edges.push(Edge { direction, length });
        }
        let mut corners = Vec::with_capacity(n);
        let mut violations = Vec::new();
        for i in 0..n {
            let prev = &edges[(i + n - 1) % n];
            let corner = Corner {
                toward_prev: -&prev.direction,
                toward_next: edges[i].direction.clone(),
            };
            let det = corner.toward_prev.det(&corner.toward_next).abs();
            if !det.is_one() {
                violations.push(Violation {
                    vertex_index: i,
                    vertex: base.vertex(i).clone(),
                    det_magnitude: det,
                });
            }
            corners.push(corner);
        }
        if violations.is_empty() {
            Ok(DelzantPolygon { base, edges, corners })
        } else {
            Err(ViolationReport { violations })
        }
    }

    pub fn base(&self) -> &ConvexPolygon {
        &self.base
    }

    pub fn vertex_count(&self) -> usize {
        self.base.vertex_count()
    }

    pub fn vertex(&self, i: usize) -> &Point {
        self.base.vertex(i)
    }

    pub fn vertices(&self) -> &[Point] {
        self.base.vertices()
    }

    /// Edge from vertex `j` to vertex `j + 1`.
    pub fn edge(&self, j: usize) -> &Edge {
        &self.edges[j]
    }

    pub fn corner(&self, i: usize) -> &Corner {
        &self.corners[i]
    }

    pub fn area(&self) -> Rational {
        self.base.area()
    }

    /// Rational length of edge `j` in units of its primitive direction.
    pub fn edge_rational_length(&self, j: usize) -> Rational {
        self.edges[j].length.clone()
    }

    pub fn min_edge_length(&self) -> Rational {
        self.edges
            .iter()
            .map(|e| e.length.clone())
            .min()
            .expect("a polygon has edges")
    }

    /// Largest admissible corner radius at vertex `i`: the smaller of
    /// the two incident edge lengths.
    pub fn vertex_radius(&self, i: usize) -> Rational {
        let n = self.vertex_count();
        let prev = &self.edges[(i + n - 1) % n].length;
        let next = &self.edges[i].length;
        prev.min(next).clone()
    }

    /// Image under a lattice-affine map, reoriented counterclockwise
    /// when the linear part reverses orientation.
    pub fn apply_agl(&self, map: &AglMap) -> DelzantPolygon {
        let mut pts: Vec<Point> = self.base.vertices().iter().map(|p| map.apply(p)).collect();
        if map.det() < BigInt::zero() {
            pts.reverse();
        }
        let poly = ConvexPolygon::new(pts).expect("unimodular affine images of convex polygons are convex");
        DelzantPolygon::validate(poly).expect("unimodular maps preserve corner determinants")
    }

    /// Scales the polygon by a positive rational factor about the
    /// origin. Edge directions are unchanged, lengths scale by `t`.
    pub fn dilate(&self, t: &Rational) -> Result<DelzantPolygon, DelzantError> {
        if !t.is_positive() {
            return Err(DelzantError::NonPositiveParameter("dilation factor"));
        }
        let pts = self
            .base
            .vertices()
            .iter()
            .map(|p| Point::new(t * &p.x, t * &p.y))
            .collect();
        let poly = ConvexPolygon::new(pts).expect("dilation preserves strict convexity");
        Ok(DelzantPolygon::validate(poly).expect("dilation preserves corner directions"))
    }

    /// Cuts the corner at vertex `i` at scale `s`, replacing the vertex
    /// with the two points at distance `s` along its corner directions.
    /// Requires `0 < s < min` of the two incident edge lengths; the new
    /// edge is then unimodular against both old ones, so the result is
    /// again Delzant, with one more vertex and area smaller by `s^2/2`.
    pub fn chop(&self, i: usize, s: &Rational) -> Result<DelzantPolygon, DelzantError> {
        let n = self.vertex_count();
        assert!(i < n, "vertex index {} out of range for {} vertices", i, n);
        let prev_len = &self.edges[(i + n - 1) % n].length;
        let next_len = &self.edges[i].length;
        let max = prev_len.min(next_len).clone();
        if !s.is_positive() || *s >= max {
            return Err(DelzantError::ChopScaleOutOfRange { scale: s.clone(), max });
        }
        let v = self.base.vertex(i);
        let corner = &self.corners[i];
        let a = v + &(s * &corner.toward_prev.as_ratvec());
        let b = v + &(s * &corner.toward_next.as_ratvec());
        let mut pts = Vec::with_capacity(n + 1);
        for (k, p) in self.base.vertices().iter().enumerate() {
            if k == i {
                pts.push(a.clone());
                pts.push(b.clone());
            } else {
                pts.push(p.clone());
            }
        }
        let poly = ConvexPolygon::new(pts).expect("chopping strictly inside a corner keeps strict convexity");
        Ok(DelzantPolygon::validate(poly).expect("a corner chop of a Delzant polygon is Delzant"))
    }

    /// The polygon as an intersection of half-planes, one row per
    /// edge: outward primitive normal and support offset.
    pub fn support_form(&self) -> SupportForm {
        let rows = self
            .edges
            .iter()
            .enumerate()
            .map(|(j, e)| {
                // Outward normal of a counterclockwise edge is the
                // direction rotated clockwise by a quarter turn.
                let normal = IntVec { a: e.direction.b.clone(), b: -&e.direction.a };
                let v = self.base.vertex(j);
                let offset = dot(&normal.as_ratvec(), &RatVec::new(v.x.clone(), v.y.clone()));
                SupportRow { normal, offset }
            })
            .collect();
        SupportForm { rows }
    }

    /// Rebuilds a polygon from a support form by intersecting
    /// consecutive support lines. Fails unless the result is a Delzant
    /// polygon whose support form reproduces the input exactly, i.e.
    /// unless every row still contributes its edge.
    pub fn from_support(form: &SupportForm) -> Result<DelzantPolygon, DelzantError> {
        let m = form.rows.len();
        if m < 3 {
            return Err(DelzantError::SupportDegenerate);
        }
        let mut pts = Vec::with_capacity(m);
        for j in 0..m {
            let a = &form.rows[(j + m - 1) % m];
            let b = &form.rows[j];
            let det = a.normal.det(&b.normal);
            if det.is_zero() {
                return Err(DelzantError::SupportDegenerate);
            }
            // Solve <n_a, v> = c_a, <n_b, v> = c_b by Cramer's rule.
            let det = Rational::from_integer(det);
            let x = &(&(&a.offset * &Rational::from_integer(b.normal.b.clone()))
                - &(&b.offset * &Rational::from_integer(a.normal.b.clone())))
                / &det;
            let y = &(&(&b.offset * &Rational::from_integer(a.normal.a.clone()))
                - &(&a.offset * &Rational::from_integer(b.normal.a.clone())))
                / &det;
            pts.push(Point::new(x, y));
        }
        let poly = ConvexPolygon::new(pts).map_err(DelzantError::InvalidPolygon)?;
        let dz = DelzantPolygon::validate(poly).map_err(DelzantError::NotDelzant)?;
        if dz.support_form() != *form {
            return Err(DelzantError::CombinatoricsChanged);
        }
        Ok(dz)
    }

    /// Moves the support line of edge `j` outward by `delta` (inward
    /// for negative `delta`), keeping all normals fixed. Fails if the
    /// moved arrangement no longer realizes the same edge set.
    pub fn perturb_support(&self, j: usize, delta: &Rational) -> Result<DelzantPolygon, DelzantError> {
        let n = self.vertex_count();
        assert!(j < n, "edge index {} out of range for {} edges", j, n);
        let mut form = self.support_form();
        form.rows[j].offset = &form.rows[j].offset + delta;
        DelzantPolygon::from_support(&form).map_err(|e| match e {
            DelzantError::InvalidPolygon(_) | DelzantError::NotDelzant(_) | DelzantError::SupportDegenerate => {
                DelzantError::CombinatoricsChanged
            }
            other => other,
        })
    }
}

/// One half-plane of a support form: `<normal, v> <= offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportRow {
    pub normal: IntVec,
    pub offset: Rational,
}

/// A polygon described by its supporting half-planes, rows in edge
/// order (normals ordered by angle).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportForm {
    pub rows: Vec<SupportRow>,
}

/// A lattice-affine map `v -> A v + c` with `A` a 2x2 integer matrix
/// of determinant +1 or -1 and `c` a rational translation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AglMap {
    a11: BigInt,
    a12: BigInt,
    a21: BigInt,
    a22: BigInt,
    tx: Rational,
    ty: Rational,
}

impl AglMap {
    pub fn new(linear: [[i64; 2]; 2], translation: (Rational, Rational)) -> Result<AglMap, DelzantError> {
        let m = AglMap {
            a11: BigInt::from(linear[0][0]),
            a12: BigInt::from(linear[0][1]),
            a21: BigInt::from(linear[1][0]),
            a22: BigInt::from(linear[1][1]),
            tx: translation.0,
            ty: translation.1,
        };
        if !m.det().abs().is_one() {
            return Err(DelzantError::NonUnimodularMap(m.det()));
        }
        Ok(m)
    }

    pub fn identity() -> AglMap {
        AglMap::new([[1, 0], [0, 1]], (rat_int(0), rat_int(0))).expect("identity is unimodular")
    }

    pub fn det(&self) -> BigInt {
        &(&self.a11 * &self.a22) - &(&self.a12 * &self.a21)
    }

    pub fn apply(&self, p: &Point) -> Point {
        let x = &(&Rational::from_integer(self.a11.clone()) * &p.x)
            + &(&Rational::from_integer(self.a12.clone()) * &p.y);
        let y = &(&Rational::from_integer(self.a21.clone()) * &p.x)
            + &(&Rational::from_integer(self.a22.clone()) * &p.y);
        Point::new(&x + &self.tx, &y + &self.ty)
    }
}

/// The triangle with vertices `(0,0)`, `(lambda,0)`, `(0,lambda)`.
pub fn standard_simplex(lambda: &Rational) -> Result<DelzantPolygon, DelzantError> {
    if !lambda.is_positive() {
        return Err(DelzantError::NonPositiveParameter("lambda"));
    }
    let z = Rational::zero();
    let pts = vec![
        Point::new(z.clone(), z.clone()),
        Point::new(lambda.clone(), z.clone()),
        Point::new(z, lambda.clone()),
    ];
    let poly = ConvexPolygon::new(pts).expect("positive lambda gives a nondegenerate triangle");
    Ok(DelzantPolygon::validate(poly).expect("the standard simplex is Delzant"))
}

/// The axis-aligned rectangle `[0,a] x [0,b]`.
pub fn rectangle(a: &Rational, b: &Rational) -> Result<DelzantPolygon, DelzantError> {
    if !a.is_positive() {
        return Err(DelzantError::NonPositiveParameter("a"));
    }
    if !b.is_positive() {
        return Err(DelzantError::NonPositiveParameter("b"));
    }
    let z = Rational::zero();
    let pts = vec![
        Point::new(z.clone(), z.clone()),
        Point::new(a.clone(), z.clone()),
        Point::new(a.clone(), b.clone()),
        Point::new(z, b.clone()),
    ];
    let poly = ConvexPolygon::new(pts).expect("positive sides give a nondegenerate rectangle");
    Ok(DelzantPolygon::validate(poly).expect("rectangles are Delzant"))
}

/// The Hirzebruch trapezoid with vertices `(0,0)`, `(a + k b, 0)`,
/// `(a, b)`, `(0, b)` for integer `k >= 0` and positive `a`, `b`.
pub fn hirzebruch(k: u64, a: &Rational, b: &Rational) -> Result<DelzantPolygon, DelzantError> {
    if !a.is_positive() {
        return Err(DelzantError::NonPositiveParameter("a"));
    }
    if !b.is_positive() {
        return Err(DelzantError::NonPositiveParameter("b"));
    }
    let z = Rational::zero();
    let kb = &Rational::from_integer(BigInt::from(k)) * b;
    let pts = vec![
        Point::new(z.clone(), z.clone()),
        Point::new(a + &kb, z.clone()),
        Point::new(a.clone(), b.clone()),
        Point::new(z, b.clone()),
    ];
    let poly = ConvexPolygon::new(pts).expect("positive sides give a nondegenerate trapezoid");
    Ok(DelzantPolygon::validate(poly).expect("the Hirzebruch trapezoid is Delzant"))
}

/// The unit square, the most common test subject.
pub fn unit_square() -> DelzantPolygon {
    rectangle(&rat_int(1), &rat_int(1)).expect("unit sides are positive")
}
