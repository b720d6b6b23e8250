//! Exact rational planar geometry.
//!
//! Everything here is computed over arbitrary-precision rationals, so
//! area comparisons, orientation tests, and polygon clipping are exact.
//! A [`ConvexPolygon`] is strictly convex with vertices in
//! counterclockwise order; the constructor rejects anything else.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar, kept in lowest terms with positive
/// denominator by the underlying representation.
pub type Rational = BigRational;

/// Shorthand for a rational from an integer pair. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an integer rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A point of the rational plane.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A displacement of the rational plane.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatVec {
    pub x: Rational,
    pub y: Rational,
}

impl RatVec {
    pub fn new(x: Rational, y: Rational) -> Self {
        RatVec { x, y }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl fmt::Display for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Sub for &Point {
    type Output = RatVec;
    fn sub(self, rhs: &Point) -> RatVec {
        RatVec::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl Add<&RatVec> for &Point {
    type Output = Point;
    fn add(self, rhs: &RatVec) -> Point {
        Point::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl Add for &RatVec {
    type Output = RatVec;
    fn add(self, rhs: &RatVec) -> RatVec {
        RatVec::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl Sub for &RatVec {
    type Output = RatVec;
    fn sub(self, rhs: &RatVec) -> RatVec {
        RatVec::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl Neg for &RatVec {
    type Output = RatVec;
    fn neg(self) -> RatVec {
        RatVec::new(-&self.x, -&self.y)
    }
}

impl Mul<&RatVec> for &Rational {
    type Output = RatVec;
    fn mul(self, rhs: &RatVec) -> RatVec {
        RatVec::new(self * &rhs.x, self * &rhs.y)
    }
}

/// Cross product (signed parallelogram area) of two displacements.
pub fn cross(a: &RatVec, b: &RatVec) -> Rational {
    &(&a.x * &b.y) - &(&a.y * &b.x)
}

/// Dot product of two displacements.
pub fn dot(a: &RatVec, b: &RatVec) -> Rational {
    &(&a.x * &b.x) + &(&a.y * &b.y)
}

/// An integer lattice vector. `(0, 0)` is not primitive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntVec {
    pub a: BigInt,
    pub b: BigInt,
}

impl IntVec {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        IntVec { a: a.into(), b: b.into() }
    }

    /// Determinant of the 2x2 matrix with `self` and `other` as columns.
    pub fn det(&self, other: &IntVec) -> BigInt {
        &(&self.a * &other.b) - &(&self.b * &other.a)
    }

    pub fn is_primitive(&self) -> bool {
        !(self.a.is_zero() && self.b.is_zero()) && self.a.gcd(&self.b).is_one()
    }

    pub fn as_ratvec(&self) -> RatVec {
        RatVec::new(Rational::from_integer(self.a.clone()), Rational::from_integer(self.b.clone()))
    }
}

impl Neg for &IntVec {
    type Output = IntVec;
    fn neg(self) -> IntVec {
        IntVec { a: -&self.a, b: -&self.b }
    }
}

impl fmt::Display for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// Why a vertex list was rejected by [`ConvexPolygon::new`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeomError {
    /// Fewer than three vertices.
    TooFewVertices(usize),
    /// Repeated consecutive vertex at this index.
    RepeatedVertex(usize),
    /// The turn at this vertex is not strictly left: the list is
    /// clockwise, non-convex, or has collinear consecutive vertices.
    NonLeftTurn(usize),
    /// Every turn is left but the boundary winds around more than
    /// once, so the list does not bound a convex region.
    MultipleWindings,
    /// Decomposition of the zero vector was requested.
    ZeroVector,
}

impl fmt::Display for GeomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeomError::TooFewVertices(n) => write!(f, "a polygon needs at least 3 vertices, got {}", n),
            GeomError::RepeatedVertex(i) => write!(f, "repeated vertex at index {}", i),
            GeomError::NonLeftTurn(i) => {
                write!(f, "vertex {} is not a strict left turn (clockwise, reflex, or collinear)", i)
            }
            GeomError::MultipleWindings => write!(f, "vertex list winds around more than once"),
            GeomError::ZeroVector => write!(f, "the zero vector has no primitive decomposition"),
        }
    }
}

impl std::error::Error for GeomError {}

/// A strictly convex polygon with vertices in counterclockwise order.
///
/// Invariants enforced at construction: at least three vertices, no
/// repeated or collinear consecutive vertices, a strict left turn at
/// every vertex, and a boundary that winds around exactly once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

/// Angular half-plane class of a nonzero direction: 0 for the upper
/// half (including the positive x axis), 1 for the lower half
/// (including the negative x axis).
fn angle_half(v: &RatVec) -> u8 {
    if v.y.is_positive() || (v.y.is_zero() && v.x.is_positive()) {
        0
    } else {
        1
    }
}

/// Strict angular precedence of nonzero directions over one full turn
/// starting at the positive x axis.
fn angle_lt(a: &RatVec, b: &RatVec) -> bool {
    let (ha, hb) = (angle_half(a), angle_half(b));
    if ha != hb {
        return ha < hb;
    }
    cross(a, b).is_positive()
}

impl ConvexPolygon {
    /// Validates and wraps a counterclockwise vertex list.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeomError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeomError::TooFewVertices(n));
        }
        let mut edges = Vec::with_capacity(n);
        for i in 0..n {
            let e = &vertices[(i + 1) % n] - &vertices[i];
            if e.is_zero() {
                return Err(GeomError::RepeatedVertex(i));
            }
            edges.push(e);
        }
        for i in 0..n {
            let prev = &edges[(i + n - 1) % n];
            if !cross(prev, &edges[i]).is_positive() {
                return Err(GeomError::NonLeftTurn(i));
            }
        }
        // Left turns alone admit star-shaped traversals that wind more
        // than once; the edge directions must pass the angular origin
        // exactly once.
        let wraps = (0..n).filter(|&i| !angle_lt(&edges[i], &edges[(i + 1) % n])).count();
        if wraps != 1 {
            return Err(GeomError::MultipleWindings);
        }
        Ok(ConvexPolygon { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i]
    }

    /// Edge displacement from vertex `i` to vertex `i + 1`.
    pub fn edge_vector(&self, i: usize) -> RatVec {
        let n = self.vertices.len();
        &self.vertices[(i + 1) % n] - &self.vertices[i]
    }

    /// Exact enclosed area by the shoelace formula.
    pub fn area(&self) -> Rational {
        let n = self.vertices.len();
        let mut twice = Rational::zero();
        for i in 0..n {
            let p = &self.vertices[i];
            let q = &self.vertices[(i + 1) % n];
            twice = &twice + &(&(&p.x * &q.y) - &(&p.y * &q.x));
        }
        twice / rat_int(2)
    }

    /// Whether `p` lies in the closed region bounded by the polygon.
    pub fn contains(&self, p: &Point) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            let e = self.edge_vector(i);
            !cross(&e, &(p - &self.vertices[i])).is_negative()
        })
    }

    /// Exact intersection with another convex polygon. Returns `None`
    /// when the intersection has zero area (empty, a point, or a
    /// segment), so touching polygons intersect trivially.
    pub fn intersect_convex(&self, other: &ConvexPolygon) -> Option<ConvexPolygon> {
        let mut cur: Vec<Point> = self.vertices.clone();
        let m = other.vertices.len();
        for j in 0..m {
            if cur.is_empty() {
                return None;
            }
            let a = &other.vertices[j];
            let e = other.edge_vector(j);
            let mut out: Vec<Point> = Vec::with_capacity(cur.len() + 1);
            let sides: Vec<Rational> = cur.iter().map(|p| cross(&e, &(p - a))).collect();
            for k in 0..cur.len() {
                let k1 = (k + 1) % cur.len();
                let (sp, sq) = (&sides[k], &sides[k1]);
                if !sp.is_negative() {
                    out.push(cur[k].clone());
                }
                if (sp.is_positive() && sq.is_negative()) || (sp.is_negative() && sq.is_positive()) {
                    let t = sp / &(sp - sq);
                    let d = &cur[k1] - &cur[k];
                    out.push(&cur[k] + &(&t * &d));
                }
            }
            cur = out;
        }
        normalize_ring(cur)
    }

    /// Exact area of the symmetric difference with another polygon.
    pub fn symmetric_difference_area(&self, other: &ConvexPolygon) -> Rational {
        let inter = match self.intersect_convex(other) {
            Some(p) => p.area(),
            None => Rational::zero(),
        };
        &(&self.area() + &other.area()) - &(&inter * &rat_int(2))
    }

    /// Vertices rotated so the list starts at the lexicographically
    /// smallest point. Same polygon, canonical starting corner.
    pub fn rotated_to_min(&self) -> Vec<Point> {
        let k = self
            .vertices
            .iter()
            .enumerate()
            .min_by(|(_, p), (_, q)| p.cmp(q))
            .map(|(i, _)| i)
            .expect("constructor guarantees vertices");
        let mut out = Vec::with_capacity(self.vertices.len());
        out.extend_from_slice(&self.vertices[k..]);
        out.extend_from_slice(&self.vertices[..k]);
        out
    }
}

/// Cleans a clipper output ring: drops duplicate and collinear
/// vertices, then rejects anything without positive area.
fn normalize_ring(mut pts: Vec<Point>) -> Option<ConvexPolygon> {
    loop {
        let mut removed = false;
        // Consecutive duplicates, cyclically.
        let mut i = 0;
        while pts.len() >= 2 && i < pts.len() {
            let j = (i + 1) % pts.len();
            if pts[i] == pts[j] {
                pts.remove(j);
                removed = true;
            } else {
                i += 1;
            }
        }
        // Collinear or spike middle vertices, cyclically. A spike
        // leaves a duplicate pair behind, which the next pass clears.
        let mut i = 0;
        while pts.len() >= 3 && i < pts.len() {
            let n = pts.len();
            let e1 = &pts[i] - &pts[(i + n - 1) % n];
            let e2 = &pts[(i + 1) % n] - &pts[i];
            if cross(&e1, &e2).is_zero() {
                pts.remove(i);
                removed = true;
            } else {
                i += 1;
            }
        }
        if !removed {
            break;
        }
    }
    if pts.len() < 3 {
        return None;
    }
    let poly = ConvexPolygon::new(pts).ok()?;
    if poly.area().is_positive() {
        Some(poly)
    } else {
        None
    }
}

/// Writes a nonzero rational vector as `length * primitive` with
/// `length > 0` and `primitive` an integer vector with coprime entries.
/// The decomposition is unique.
pub fn primitive_decompose(w: &RatVec) -> Result<(IntVec, Rational), GeomError> {
    if w.is_zero() {
        return Err(GeomError::ZeroVector);
    }
    let (nx, dx) = (w.x.numer(), w.x.denom());
    let (ny, dy) = (w.y.numer(), w.y.denom());
    // Scale by the lcm of the denominators to land on the lattice,
    // then divide out the gcd of the entries.
    let l = dx.lcm(dy);
    let ax = nx * (&l / dx);
    let ay = ny * (&l / dy);
    let g = ax.gcd(&ay);
    debug_assert!(g.is_positive());
    let u = IntVec { a: &ax / &g, b: &ay / &g };
    let len = Rational::new(g, l);
    Ok((u, len))
}

/// Whether two integer vectors form a lattice basis, i.e. the matrix
/// with these columns has determinant of absolute value one.
pub fn is_unimodular_pair(u: &IntVec, v: &IntVec) -> bool {
    u.det(v).abs().is_one()
}
