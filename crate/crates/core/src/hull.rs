//! Convex hulls of exposed-point clouds, used only for mesh export.
//!
//! The 3-D hull is built incrementally with exact orientation predicates, so the
//! result is a closed, consistently oriented triangle mesh even when many input
//! points are coplanar (exposed points of a spectral scale lie on the planes
//! `x = k/n`).

use std::collections::HashMap;

use robust::{orient2d, orient3d, Coord, Coord3D};

/// Snapping grid for deduplicating nearly identical points (2^-40 ≈ 9.1e-13).
const SNAP: f64 = 1099511627776.0;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
}

impl Mesh {
    /// Number of undirected edges referenced by the triangles.
    pub fn edge_count(&self) -> usize {
        let mut edges: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])])
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges.len()
    }

    /// `V − E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edge_count() as i64 + self.triangles.len() as i64
    }

    /// Every directed edge appears exactly once and its reverse exactly once.
    pub fn is_closed(&self) -> bool {
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                *directed.entry((a, b)).or_default() += 1;
            }
        }
        directed
            .iter()
            .all(|(&(a, b), &count)| count == 1 && directed.get(&(b, a)) == Some(&1))
    }
}

fn snap(x: f64) -> f64 {
    (x * SNAP).round() / SNAP
}

/// Snaps coordinates to a 2^-40 grid, sorts and removes duplicates.
pub fn snap_and_dedup(points: &[[f64; 3]]) -> Vec<[f64; 3]> {
    let mut pts: Vec<[f64; 3]> = points.iter().map(|p| [snap(p[0]), snap(p[1]), snap(p[2])]).collect();
    pts.sort_by(|a, b| {
        a[0].total_cmp(&b[0])
            .then(a[1].total_cmp(&b[1]))
            .then(a[2].total_cmp(&b[2]))
    });
    pts.dedup();
    pts
}

fn c3(p: &[f64; 3]) -> Coord3D<f64> {
    Coord3D { x: p[0], y: p[1], z: p[2] }
}

fn sub(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm2(a: &[f64; 3]) -> f64 {
    a[0] * a[0] + a[1] * a[1] + a[2] * a[2]
}

fn argmax_by<F: Fn(&[f64; 3]) -> f64>(points: &[[f64; 3]], f: F) -> (usize, f64) {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| (i, f(p)))
        .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
}

/// Closed triangle mesh of the convex hull of `points`, outward oriented
/// (counter-clockwise seen from outside). Returns `None` when the snapped
/// points are coplanar.
pub fn convex_hull_3d(points: &[[f64; 3]]) -> Option<Mesh> {
    let pts = snap_and_dedup(points);
    if pts.len() < 4 {
        return None;
    }
    let p0 = pts[0];
    let (i1, d1) = argmax_by(&pts, |p| norm2(&sub(p, &p0)));
    if d1 == 0.0 {
        return None;
    }
    let p1 = pts[i1];
    let (i2, d2) = argmax_by(&pts, |p| norm2(&cross(&sub(&p1, &p0), &sub(p, &p0))));
    if d2 == 0.0 {
        return None;
    }
    let p2 = pts[i2];
    let (i3, d3) = argmax_by(&pts, |p| orient3d(c3(&p0), c3(&p1), c3(&p2), c3(p)).abs());
    if d3 == 0.0 {
        return None;
    }
    let seed = [0, i1, i2, i3];
    let interior = {
        let mut c = [0.0; 3];
        for &i in &seed {
            for k in 0..3 {
                c[k] += pts[i][k] / 4.0;
            }
        }
        c
    };

    let mut hull = IncrementalHull {
        pts: &pts,
        faces: Vec::new(),
        alive: Vec::new(),
        edges: HashMap::new(),
    };
    for [a, b, c] in [[0, 1, 2], [0, 3, 1], [1, 3, 2], [0, 2, 3]] {
        let (mut a, mut b, c) = (seed[a], seed[b], seed[c]);
        // orient3d(a, b, c, interior) > 0 means a, b, c run counter-clockwise seen from outside
        if orient3d(c3(&pts[a]), c3(&pts[b]), c3(&pts[c]), c3(&interior)) < 0.0 {
            std::mem::swap(&mut a, &mut b);
        }
        hull.add_face([a, b, c]);
    }
    for (i, _) in pts.iter().enumerate() {
        if !seed.contains(&i) {
            hull.insert(i);
        }
    }
    Some(hull.into_mesh())
}

struct IncrementalHull<'a> {
    pts: &'a [[f64; 3]],
    faces: Vec<[usize; 3]>,
    alive: Vec<bool>,
    edges: HashMap<(usize, usize), usize>,
}

impl IncrementalHull<'_> {
    fn add_face(&mut self, f: [usize; 3]) {
        let id = self.faces.len();
        self.faces.push(f);
        self.alive.push(true);
        for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
            self.edges.insert((a, b), id);
        }
    }

    fn remove_face(&mut self, id: usize) {
        self.alive[id] = false;
        let f = self.faces[id];
        for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
            if self.edges.get(&(a, b)) == Some(&id) {
                self.edges.remove(&(a, b));
            }
        }
    }

    fn visible(&self, id: usize, p: usize) -> bool {
        let [a, b, c] = self.faces[id];
        let pts = self.pts;
        orient3d(c3(&pts[a]), c3(&pts[b]), c3(&pts[c]), c3(&pts[p])) < 0.0
    }

    fn insert(&mut self, p: usize) {
        let visible: Vec<usize> = (0..self.faces.len())
            .filter(|&id| self.alive[id] && self.visible(id, p))
            .collect();
        if visible.is_empty() {
            return;
        }
        let mut is_visible = vec![false; self.faces.len()];
        for &id in &visible {
            is_visible[id] = true;
        }
        let mut horizon = Vec::new();
        for &id in &visible {
            let f = self.faces[id];
            for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                let twin = self.edges[&(b, a)];
                if !is_visible[twin] {
                    horizon.push((a, b));
                }
            }
        }
        for &id in &visible {
            self.remove_face(id);
        }
        for (a, b) in horizon {
            self.add_face([a, b, p]);
        }
    }

    fn into_mesh(self) -> Mesh {
        let mut remap = vec![usize::MAX; self.pts.len()];
        let mut vertices = Vec::new();
        let mut triangles = Vec::new();
        for (id, f) in self.faces.iter().enumerate() {
            if !self.alive[id] {
                continue;
            }
            let mut t = [0; 3];
            for k in 0..3 {
                if remap[f[k]] == usize::MAX {
                    remap[f[k]] = vertices.len();
                    vertices.push(self.pts[f[k]]);
                }
                t[k] = remap[f[k]];
            }
            triangles.push(t);
        }
        Mesh { vertices, triangles }
    }
}

/// Indices of the convex hull vertices of planar points in counter-clockwise
/// order, collinear boundary points removed (Andrew's monotone chain).
pub fn convex_hull_2d(points: &[[f64; 2]]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| {
        points[i][0]
            .total_cmp(&points[j][0])
            .then(points[i][1].total_cmp(&points[j][1]))
    });
    order.dedup_by(|a, b| points[*a] == points[*b]);
    if order.len() < 3 {
        return order;
    }
    let turn = |o: usize, a: usize, b: usize| {
        orient2d(
            Coord { x: points[o][0], y: points[o][1] },
            Coord { x: points[a][0], y: points[a][1] },
            Coord { x: points[b][0], y: points[b][1] },
        )
    };
    let mut chain: Vec<usize> = Vec::with_capacity(2 * order.len());
    for pass in 0..2 {
        let start = chain.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(order.iter())
        } else {
            Box::new(order.iter().rev())
        };
        for &i in iter {
            while chain.len() >= start + 2 && turn(chain[chain.len() - 2], chain[chain.len() - 1], i) <= 0.0 {
                chain.pop();
            }
            chain.push(i);
        }
        chain.pop();
    }
    chain
}
