//! Shared fixtures and independent oracles for the integration tests.
//!
//! The oracles deliberately avoid the library's computational paths.
//! Area is estimated by counting grid cell centers with a membership
//! test written here; overlap of convex polygons is decided by a
//! separating-axis test instead of clipping; and the best packing on a
//! rational grid is found by exhaustive depth-first search with
//! branch-and-bound instead of polytope vertex enumeration. Agreement
//! between these and the library is evidence, not circularity.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use delpack::delzant::{self, AglMap, DelzantPolygon};
use delpack::exactgeom::{rat, rat_int, ConvexPolygon, Point, Rational};

pub fn r(s: &str) -> Rational {
    s.parse().unwrap_or_else(|_| panic!("bad rational literal {:?}", s))
}

pub fn pt(x: i64, y: i64) -> Point {
    Point::new(rat_int(x), rat_int(y))
}

/// The six reference polygons used across the metric and invariance
/// tests.
pub fn catalog() -> Vec<(&'static str, DelzantPolygon)> {
    let square = delzant::unit_square();
    let shear = AglMap::new([[1, 1], [0, 1]], (rat_int(0), rat_int(0))).unwrap();
    vec![
        ("square", square.clone()),
        ("rectangle_2x1", delzant::rectangle(&rat_int(2), &rat_int(1)).unwrap()),
        ("simplex_1", delzant::standard_simplex(&rat_int(1)).unwrap()),
        ("hirzebruch_1_1_1", delzant::hirzebruch(1, &rat_int(1), &rat_int(1)).unwrap()),
        ("chopped_square_quarter", square.chop(0, &rat(1, 4)).unwrap()),
        ("sheared_square", square.apply_agl(&shear)),
    ]
}

pub fn translate(p: &ConvexPolygon, dx: &Rational, dy: &Rational) -> ConvexPolygon {
    let pts = p
        .vertices()
        .iter()
        .map(|v| Point::new(&v.x + dx, &v.y + dy))
        .collect();
    ConvexPolygon::new(pts).expect("translation preserves convexity")
}

/// Closed membership test, written independently of the library's.
pub fn oracle_inside(vs: &[Point], x: &Rational, y: &Rational) -> bool {
    let n = vs.len();
    for i in 0..n {
        let a = &vs[i];
        let b = &vs[(i + 1) % n];
        let ex = &b.x - &a.x;
        let ey = &b.y - &a.y;
        let s = &(&ex * &(y - &a.y)) - &(&ey * &(x - &a.x));
        if s.is_negative() {
            return false;
        }
    }
    true
}

/// Independent shoelace area.
pub fn oracle_area(vs: &[Point]) -> Rational {
    let n = vs.len();
    let mut twice = Rational::zero();
    for i in 0..n {
        let a = &vs[i];
        let b = &vs[(i + 1) % n];
        twice = &twice + &(&(&a.x * &b.y) - &(&a.y * &b.x));
    }
    &twice / &rat_int(2)
}

/// Sum of L1 edge lengths, used in the grid estimate's error bound.
pub fn l1_perimeter(p: &ConvexPolygon) -> Rational {
    let vs = p.vertices();
    let n = vs.len();
    let mut total = Rational::zero();
    for i in 0..n {
        let a = &vs[i];
        let b = &vs[(i + 1) % n];
        total = &total + &(&(&b.x - &a.x).abs() + &(&b.y - &a.y).abs());
    }
    total
}

/// Estimates the intersection area of two convex polygons by counting
/// centers of a square grid with spacing `1/k` that lie in both. Only
/// cells whose interior meets a boundary can be miscounted, so
/// `|estimate - exact| <= h (L1(P) + L1(Q)) + 4 h^2 (n_P + n_Q)`.
pub fn grid_intersection_estimate(p: &ConvexPolygon, q: &ConvexPolygon, k: i64) -> Rational {
    let h = rat(1, k);
    let bounds = |poly: &ConvexPolygon, pick_x: bool| -> (Rational, Rational) {
        let coord = |v: &Point| if pick_x { v.x.clone() } else { v.y.clone() };
        let mut lo = coord(&poly.vertices()[0]);
        let mut hi = lo.clone();
        for v in poly.vertices() {
            lo = lo.min(coord(v));
            hi = hi.max(coord(v));
        }
        (lo, hi)
    };
    let (pxl, pxh) = bounds(p, true);
    let (qxl, qxh) = bounds(q, true);
    let (pyl, pyh) = bounds(p, false);
    let (qyl, qyh) = bounds(q, false);
    let xl = pxl.max(qxl);
    let xh = pxh.min(qxh);
    let yl = pyl.max(qyl);
    let yh = pyh.min(qyh);
    if xl >= xh || yl >= yh {
        return Rational::zero();
    }
    let cell_index = |v: &Rational| -> i64 {
        (v * &rat_int(k)).floor().to_integer().to_i64().expect("small test coordinates")
    };
    let (ix0, ix1) = (cell_index(&xl), cell_index(&xh));
    let (iy0, iy1) = (cell_index(&yl), cell_index(&yh));
    let mut count: i64 = 0;
    for ix in ix0..=ix1 {
        let cx = rat(2 * ix + 1, 2 * k);
        for iy in iy0..=iy1 {
            let cy = rat(2 * iy + 1, 2 * k);
            if oracle_inside(p.vertices(), &cx, &cy) && oracle_inside(q.vertices(), &cx, &cy) {
                count += 1;
            }
        }
    }
    &rat_int(count) * &(&h * &h)
}

/// Rigorous bound for [`grid_intersection_estimate`]'s deviation.
pub fn grid_estimate_bound(p: &ConvexPolygon, q: &ConvexPolygon, k: i64) -> Rational {
    let h = rat(1, k);
    let edges = rat_int((p.vertex_count() + q.vertex_count()) as i64);
    &(&h * &(&l1_perimeter(p) + &l1_perimeter(q))) + &(&(&rat_int(4) * &(&h * &h)) * &edges)
}

fn separated_along_some_edge(p: &[Point], q: &[Point]) -> bool {
    let n = p.len();
    'edges: for i in 0..n {
        let a = &p[i];
        let b = &p[(i + 1) % n];
        let ex = &b.x - &a.x;
        let ey = &b.y - &a.y;
        for v in q {
            let s = &(&ex * &(&v.y - &a.y)) - &(&ey * &(&v.x - &a.x));
            if s.is_positive() {
                continue 'edges;
            }
        }
        return true;
    }
    false
}

/// Separating-axis test: two convex polygons share zero area exactly
/// when some edge line of one has the other entirely on its closed
/// outer side.
pub fn sat_zero_area(p: &[Point], q: &[Point]) -> bool {
    separated_along_some_edge(p, q) || separated_along_some_edge(q, p)
}

/// Corner data recomputed from the vertex list alone.
pub struct OracleCorner {
    pub vertex: Point,
    pub to_prev: (Rational, Rational),
    pub to_next: (Rational, Rational),
    pub cap: Rational,
}

fn own_primitive(dx: &Rational, dy: &Rational) -> ((BigInt, BigInt), Rational) {
    let l = dx.denom().lcm(dy.denom());
    let ax = dx.numer() * (&l / dx.denom());
    let ay = dy.numer() * (&l / dy.denom());
    let g = ax.gcd(&ay);
    ((&ax / &g, &ay / &g), Rational::new(g, l))
}

pub fn oracle_corners(vs: &[Point]) -> Vec<OracleCorner> {
    let n = vs.len();
    let mut dirs: Vec<(BigInt, BigInt)> = Vec::with_capacity(n);
    let mut lens: Vec<Rational> = Vec::with_capacity(n);
    for i in 0..n {
        let a = &vs[i];
        let b = &vs[(i + 1) % n];
        let (u, l) = own_primitive(&(&b.x - &a.x), &(&b.y - &a.y));
        dirs.push(u);
        lens.push(l);
    }
    (0..n)
        .map(|i| {
            let prev = (i + n - 1) % n;
            let to_prev = (
                Rational::from_integer(-&dirs[prev].0),
                Rational::from_integer(-&dirs[prev].1),
            );
            let to_next = (
                Rational::from_integer(dirs[i].0.clone()),
                Rational::from_integer(dirs[i].1.clone()),
            );
            OracleCorner {
                vertex: vs[i].clone(),
                to_prev,
                to_next,
                cap: lens[prev].clone().min(lens[i].clone()),
            }
        })
        .collect()
}

pub fn oracle_triangle(c: &OracleCorner, radius: &Rational) -> Vec<Point> {
    let v = &c.vertex;
    vec![
        v.clone(),
        Point::new(&v.x + &(radius * &c.to_next.0), &v.y + &(radius * &c.to_next.1)),
        Point::new(&v.x + &(radius * &c.to_prev.0), &v.y + &(radius * &c.to_prev.1)),
    ]
}

struct GridSearch<'a> {
    corners: &'a [OracleCorner],
    denom: i64,
    caps_k: Vec<i64>,
    suffix: Vec<Rational>,
    radii_k: Vec<i64>,
    triangles: Vec<Option<Vec<Point>>>,
    sum_sq: Rational,
    best: Rational,
    disjoint: HashMap<(usize, i64, usize, i64), bool>,
}

impl GridSearch<'_> {
    fn pair_disjoint(&mut self, i: usize, ki: i64, j: usize, kj: i64) -> bool {
        let key = if i < j { (i, ki, j, kj) } else { (j, kj, i, ki) };
        if let Some(&v) = self.disjoint.get(&key) {
            return v;
        }
        let ti = oracle_triangle(&self.corners[key.0], &rat(key.1, self.denom));
        let tj = oracle_triangle(&self.corners[key.2], &rat(key.3, self.denom));
        let v = sat_zero_area(&ti, &tj);
        self.disjoint.insert(key, v);
        v
    }

    fn dfs(&mut self, i: usize) {
        let n = self.corners.len();
        if i == n {
            if self.sum_sq > self.best {
                self.best = self.sum_sq.clone();
            }
            return;
        }
        let ceiling = &self.sum_sq + &self.suffix[i];
        if ceiling <= self.best {
            return;
        }
        for k in (0..=self.caps_k[i]).rev() {
            if k > 0 {
                let mut ok = true;
                for j in 0..i {
                    let kj = self.radii_k[j];
                    if kj > 0 && !self.pair_disjoint(i, k, j, kj) {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    continue;
                }
            }
            let rk = rat(k, self.denom);
            let add = &rk * &rk;
            self.radii_k[i] = k;
            self.triangles[i] = if k > 0 { Some(oracle_triangle(&self.corners[i], &rk)) } else { None };
            self.sum_sq = &self.sum_sq + &add;
            self.dfs(i + 1);
            self.sum_sq = &self.sum_sq - &add;
            self.radii_k[i] = 0;
            self.triangles[i] = None;
        }
    }
}

/// Exhaustive best packing density over radii on the grid `k/denom`,
/// found by depth-first search with a sum-of-squares bound for
/// pruning. Feasibility is the separating-axis test, nothing from the
/// library's optimizer.
pub fn oracle_best_density(d: &DelzantPolygon, denom: i64, avoid: &BTreeSet<usize>) -> Rational {
    let vs = d.vertices();
    let corners = oracle_corners(vs);
    let n = corners.len();
    let caps_k: Vec<i64> = (0..n)
        .map(|i| {
            if avoid.contains(&i) {
                0
            } else {
                (&corners[i].cap * &rat_int(denom))
                    .floor()
                    .to_integer()
                    .to_i64()
                    .expect("test polygons have small caps")
            }
        })
        .collect();
    let mut suffix = vec![Rational::zero(); n + 1];
    for i in (0..n).rev() {
        let c = rat(caps_k[i], denom);
        suffix[i] = &suffix[i + 1] + &(&c * &c);
    }
    let mut search = GridSearch {
        corners: &corners,
        denom,
        caps_k,
        suffix,
        radii_k: vec![0; n],
        triangles: vec![None; n],
        sum_sq: Rational::zero(),
        best: Rational::zero(),
        disjoint: HashMap::new(),
    };
    search.dfs(0);
    &search.best / &(&oracle_area(vs) * &rat_int(2))
}

/// Seeded random Delzant polygon with at most five vertices, produced
/// by chops and support perturbations of a catalog entry. All scales
/// and deltas are eighths, so vertex coordinates stay on the `(1/8)Z`
/// grid and certified optima land on the denominator-16 grid the
/// oracle searches.
pub fn random_small_delzant(rng: &mut ChaCha8Rng) -> DelzantPolygon {
    let cat = catalog();
    let mut d = cat[rng.gen_range(0..cat.len())].1.clone();
    let ops = rng.gen_range(0..=3);
    for _ in 0..ops {
        if rng.gen_bool(0.5) {
            let j = rng.gen_range(0..d.vertex_count());
            let deltas = [rat(1, 8), rat(-1, 8), rat(1, 4), rat(-1, 4), rat(1, 2), rat(-1, 2)];
            let delta = &deltas[rng.gen_range(0..deltas.len())];
            if let Ok(p) = d.perturb_support(j, delta) {
                d = p;
            }
        } else if d.vertex_count() < 5 {
            let i = rng.gen_range(0..d.vertex_count());
            let scales = [rat(1, 8), rat(1, 4), rat(3, 8)];
            let s = &scales[rng.gen_range(0..scales.len())];
            if *s < d.vertex_radius(i) {
                if let Ok(c) = d.chop(i, s) {
                    d = c;
                }
            }
        }
    }
    d
}

/// Seeded random unimodular affine map with entries bounded by 5.
pub fn random_agl(rng: &mut ChaCha8Rng) -> AglMap {
    loop {
        let a = rng.gen_range(-5i64..=5);
        let b = rng.gen_range(-5i64..=5);
        let c = rng.gen_range(-5i64..=5);
        let d = rng.gen_range(-5i64..=5);
        if (a * d - b * c).abs() == 1 {
            let tx = rat_int(rng.gen_range(-5..=5));
            let ty = rat_int(rng.gen_range(-5..=5));
            return AglMap::new([[a, b], [c, d]], (tx, ty)).expect("determinant checked");
        }
    }
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
