//! Triangulations of the L-shaped domain, uniform red refinement, the induced
//! boundary polygon and the boundary strip.
//!
//! The coarse mesh covers
//! `Ω = (−0.2, 0.2) × (0, 0.4) \ [−0.2, 0] × [0, 0.2]`
//! by three 0.2 × 0.2 squares, each split into four triangles through its
//! center. Vertex order of the coarse mesh:
//!
//! ```text
//!  0 (0, 0)      1 (0.2, 0)    2 (0.2, 0.2)   3 (0.2, 0.4)
//!  4 (0, 0.4)    5 (−0.2, 0.4) 6 (−0.2, 0.2)  7 (0, 0.2)
//!  8 (0.1, 0.1)  9 (0.1, 0.3) 10 (−0.1, 0.3)
//! ```
//!
//! Vertices 0–7 trace the boundary counterclockwise; 8–10 are the square
//! centers. Refinement appends one vertex per parent edge (in order of first
//! appearance while sweeping triangles) and replaces triangle `i` by children
//! `4i .. 4i + 3`.

use std::collections::HashMap;
use std::io::Write;

use crate::error::{Error, Result};
use crate::geometry::{self, Point, Segment};

/// Conforming affine triangulation with counterclockwise triangles.
#[derive(Clone, Debug)]
pub struct TriMesh {
    pub vertices: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    pub level: usize,
    /// Nominal mesh size of the family, `0.2 · 2^(−level)` for the L-shape.
    pub h: f64,
    edges: Vec<[usize; 2]>,
    triangle_edges: Vec<[usize; 3]>,
}

/// Local edge `e` of a triangle joins local vertices `e` and `(e + 1) % 3`.
pub const LOCAL_EDGES: [[usize; 2]; 3] = [[0, 1], [1, 2], [2, 0]];

impl TriMesh {
    pub fn new(vertices: Vec<Point>, triangles: Vec<[usize; 3]>, level: usize, h: f64) -> Self {
        let mut edge_ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut triangle_edges = Vec::with_capacity(triangles.len());
        for t in &triangles {
            let mut te = [0; 3];
            for (e, le) in LOCAL_EDGES.iter().enumerate() {
                let (a, b) = (t[le[0]], t[le[1]]);
                let key = (a.min(b), a.max(b));
                te[e] = *edge_ids.entry(key).or_insert_with(|| {
                    edges.push([key.0, key.1]);
                    edges.len() - 1
                });
            }
            triangle_edges.push(te);
        }
        TriMesh { vertices, triangles, level, h, edges, triangle_edges }
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges as sorted vertex pairs, numbered by first appearance.
    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    /// Global edge ids of each triangle's local edges.
    pub fn triangle_edges(&self) -> &[[usize; 3]] {
        &self.triangle_edges
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn signed_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_points(t);
        0.5 * geometry::cross(geometry::sub(b, a), geometry::sub(c, a))
    }

    pub fn diameter_of(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_points(t);
        geometry::dist(a, b).max(geometry::dist(b, c)).max(geometry::dist(c, a))
    }

    pub fn total_area(&self) -> f64 {
        (0..self.n_triangles()).map(|t| self.signed_area(t)).sum()
    }

    /// Largest distance between two vertices.
    pub fn domain_diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(geometry::dist(*a, *b));
            }
        }
        d
    }

    /// Number of triangles sharing each edge.
    fn edge_multiplicity(&self) -> Vec<u8> {
        let mut count = vec![0u8; self.edges.len()];
        for te in &self.triangle_edges {
            for &e in te {
                count[e] += 1;
            }
        }
        count
    }

    /// Vertex flags: true where the vertex lies on the boundary.
    pub fn boundary_vertex_flags(&self) -> Vec<bool> {
        let mult = self.edge_multiplicity();
        let mut flags = vec![false; self.n_vertices()];
        for (e, &m) in mult.iter().enumerate() {
            if m == 1 {
                flags[self.edges[e][0]] = true;
                flags[self.edges[e][1]] = true;
            }
        }
        flags
    }

    /// Writes the mesh as `v x y` / `t i j k` lines (0-based indices).
    pub fn write_text(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "# level {} h {:.17e}", self.level, self.h)?;
        for v in &self.vertices {
            writeln!(w, "v {:.17e} {:.17e}", v[0], v[1])?;
        }
        for t in &self.triangles {
            writeln!(w, "t {} {} {}", t[0], t[1], t[2])?;
        }
        Ok(())
    }
}

/// The coarse 12-triangle L-shape mesh refined `level` times.
pub fn build_lshape(level: usize) -> TriMesh {
    let vertices = vec![
        [0.0, 0.0],
        [0.2, 0.0],
        [0.2, 0.2],
        [0.2, 0.4],
        [0.0, 0.4],
        [-0.2, 0.4],
        [-0.2, 0.2],
        [0.0, 0.2],
        [0.1, 0.1],
        [0.1, 0.3],
        [-0.1, 0.3],
    ];
    let triangles = vec![
        // bottom right square [0,0.2]x[0,0.2], center 8
        [0, 1, 8],
        [1, 2, 8],
        [2, 7, 8],
        [7, 0, 8],
        // top right square [0,0.2]x[0.2,0.4], center 9
        [7, 2, 9],
        [2, 3, 9],
        [3, 4, 9],
        [4, 7, 9],
        // top left square [-0.2,0]x[0.2,0.4], center 10
        [6, 7, 10],
        [7, 4, 10],
        [4, 5, 10],
        [5, 6, 10],
    ];
    let mut mesh = TriMesh::new(vertices, triangles, 0, 0.2);
    for _ in 0..level {
        mesh = red_refine(&mesh);
    }
    mesh
}

/// Splits every triangle into four congruent children through its edge midpoints.
pub fn red_refine(mesh: &TriMesh) -> TriMesh {
    let nv = mesh.n_vertices();
    let mut vertices = mesh.vertices.clone();
    vertices.extend(mesh.edges.iter().map(|e| geometry::midpoint(mesh.vertices[e[0]], mesh.vertices[e[1]])));
    let mut triangles = Vec::with_capacity(4 * mesh.n_triangles());
    for (t, te) in mesh.triangles.iter().zip(&mesh.triangle_edges) {
        let [a, b, c] = *t;
        let (mab, mbc, mca) = (nv + te[0], nv + te[1], nv + te[2]);
        triangles.push([a, mab, mca]);
        triangles.push([mab, b, mbc]);
        triangles.push([mca, mbc, c]);
        triangles.push([mab, mbc, mca]);
    }
    TriMesh::new(vertices, triangles, mesh.level + 1, 0.5 * mesh.h)
}

/// The boundary Γ as a closed counterclockwise polygon of mesh edges.
#[derive(Clone, Debug)]
pub struct BoundaryMesh {
    /// Vertex index pairs (start, end) in loop order.
    pub segments: Vec<[usize; 2]>,
    /// Segment geometry matching `segments`.
    pub geometry: Vec<Segment>,
    /// Unit normals pointing out of Ω.
    pub outward_normals: Vec<Point>,
    /// Owning (triangle, local edge) of each segment.
    pub parent_edge: Vec<(usize, usize)>,
    /// Per loop position: true if the start vertex of that segment is a polygon corner.
    pub corner_flags: Vec<bool>,
    pub level: usize,
    pub h: f64,
    mesh_vertices: usize,
    mesh_triangles: usize,
}

impl BoundaryMesh {
    pub fn n_segments(&self) -> usize {
        self.segments.len()
    }

    pub fn total_length(&self) -> f64 {
        self.geometry.iter().map(Segment::length).sum()
    }

    pub fn segment(&self, i: usize) -> &Segment {
        &self.geometry[i]
    }

    /// Whether this boundary was extracted from `mesh`.
    pub fn belongs_to(&self, mesh: &TriMesh) -> bool {
        self.mesh_vertices == mesh.n_vertices()
            && self.mesh_triangles == mesh.n_triangles()
            && self.parent_edge.iter().zip(&self.segments).all(|(&(t, le), s)| {
                t < mesh.n_triangles() && {
                    let tri = mesh.triangles[t];
                    [tri[LOCAL_EDGES[le][0]], tri[LOCAL_EDGES[le][1]]] == *s
                }
            })
    }

    /// Diameter of the boundary polygon (equals the domain diameter).
    pub fn diameter(&self) -> f64 {
        let pts: Vec<Point> = self.geometry.iter().map(|s| s.start).collect();
        let mut d: f64 = 0.0;
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                d = d.max(geometry::dist(*a, *b));
            }
        }
        d
    }
}

/// Collects the edges owned by exactly one triangle and chains them into a
/// single counterclockwise loop starting at the boundary vertex of smallest index.
pub fn extract_boundary(mesh: &TriMesh) -> Result<BoundaryMesh> {
    let mult = mesh.edge_multiplicity();
    let mut next: HashMap<usize, (usize, usize, usize)> = HashMap::new();
    for (t, (tri, te)) in mesh.triangles.iter().zip(mesh.triangle_edges()).enumerate() {
        for (le, &e) in te.iter().enumerate() {
            match mult[e] {
                1 => {
                    let a = tri[LOCAL_EDGES[le][0]];
                    let b = tri[LOCAL_EDGES[le][1]];
                    if next.insert(a, (b, t, le)).is_some() {
                        return Err(Error::MalformedBoundary(format!("vertex {a} starts two boundary edges")));
                    }
                }
                2 => {}
                m => return Err(Error::MalformedBoundary(format!("edge {e} shared by {m} triangles"))),
            }
        }
    }
    let &start = next.keys().min().ok_or_else(|| Error::MalformedBoundary("no boundary edges".into()))?;
    let total = next.len();
    let mut segments = Vec::with_capacity(total);
    let mut parent_edge = Vec::with_capacity(total);
    let mut v = start;
    loop {
        let &(w, t, le) =
            next.get(&v).ok_or_else(|| Error::MalformedBoundary(format!("boundary chain breaks at vertex {v}")))?;
        segments.push([v, w]);
        parent_edge.push((t, le));
        v = w;
        if v == start {
            break;
        }
        if segments.len() > total {
            return Err(Error::MalformedBoundary("boundary chain does not close".into()));
        }
    }
    if segments.len() != total {
        return Err(Error::MalformedBoundary(format!(
            "boundary has more than one loop ({} of {} edges reached)",
            segments.len(),
            total
        )));
    }
    let geometry: Vec<Segment> =
        segments.iter().map(|s| Segment::new(mesh.vertices[s[0]], mesh.vertices[s[1]])).collect();
    let outward_normals = geometry.iter().map(Segment::normal).collect();
    let n = geometry.len();
    let corner_flags = (0..n)
        .map(|i| {
            let prev = geometry[(i + n - 1) % n].tangent();
            let cur = geometry[i].tangent();
            geometry::cross(prev, cur).abs() > 1e-12
        })
        .collect();
    Ok(BoundaryMesh {
        segments,
        geometry,
        outward_normals,
        parent_edge,
        corner_flags,
        level: mesh.level,
        h: mesh.h,
        mesh_vertices: mesh.n_vertices(),
        mesh_triangles: mesh.n_triangles(),
    })
}

/// A labelled subset of the triangles of a mesh.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementSet {
    pub elements: Vec<usize>,
    pub role: String,
}

impl ElementSet {
    pub fn all(mesh: &TriMesh) -> Self {
        ElementSet { elements: (0..mesh.n_triangles()).collect(), role: "all elements".into() }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Triangles whose closure touches Γ.
pub fn boundary_strip(mesh: &TriMesh) -> ElementSet {
    let on_boundary = mesh.boundary_vertex_flags();
    let elements =
        mesh.triangles.iter().enumerate().filter(|(_, t)| t.iter().any(|&v| on_boundary[v])).map(|(i, _)| i).collect();
    ElementSet { elements, role: "boundary strip S_h".into() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coarse_mesh_counts() {
        let m = build_lshape(0);
        assert_eq!(m.n_triangles(), 12);
        assert_eq!(m.n_vertices(), 11);
        assert_eq!(m.n_edges(), 22);
        assert_eq!(m.h, 0.2);
        let b = extract_boundary(&m).unwrap();
        assert_eq!(b.n_segments(), 8);
        assert!((b.total_length() - 1.6).abs() < 1e-15);
        assert_eq!(b.segments[0], [0, 1]);
        let n = b.outward_normals[0];
        assert_eq!(n, [0.0, -1.0]);
        assert!(b.belongs_to(&m));
        // corners: every coarse boundary vertex except the midpoints (0.2,0.2) and (0,0.4)
        assert_eq!(b.corner_flags, vec![true, true, false, true, false, true, true, true]);
    }

    #[test]
    fn refinement_counts_and_geometry() {
        for level in 0..=4 {
            let m = build_lshape(level);
            assert_eq!(m.n_triangles(), 12 * 4usize.pow(level as u32));
            assert!((m.h - 0.2 * 0.5f64.powi(level as i32)).abs() < 1e-16);
            assert!((m.total_area() - 0.12).abs() < 1e-12 * 0.12);
            assert!((0..m.n_triangles()).all(|t| m.signed_area(t) > 0.0));
            let b = extract_boundary(&m).unwrap();
            assert_eq!(b.n_segments(), 8 << level);
            assert!((b.total_length() - 1.6).abs() < 1e-12 * 1.6);
            // Euler characteristic of a disc
            assert_eq!(m.n_vertices() as i64 - m.n_edges() as i64 + m.n_triangles() as i64, 1);
        }
        assert_eq!(build_lshape(1).n_triangles(), 48);
        assert_eq!(build_lshape(3).n_triangles(), 768);
        assert!((build_lshape(3).h - 0.025).abs() < 1e-16);
    }

    #[test]
    fn normals_point_outward() {
        let m = build_lshape(2);
        let b = extract_boundary(&m).unwrap();
        for (i, &(t, _)) in b.parent_edge.iter().enumerate() {
            let [p, q, r] = m.triangle_points(t);
            let c = [(p[0] + q[0] + r[0]) / 3.0, (p[1] + q[1] + r[1]) / 3.0];
            let to_edge = geometry::sub(b.geometry[i].midpoint(), c);
            assert!(geometry::dot(to_edge, b.outward_normals[i]) > 0.0);
            assert!((geometry::norm(b.outward_normals[i]) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn refinement_keeps_parent_vertices() {
        let m0 = build_lshape(1);
        let m1 = red_refine(&m0);
        assert_eq!(&m1.vertices[..m0.n_vertices()], &m0.vertices[..]);
        assert_eq!(m1.level, 2);
    }

    #[test]
    fn quasi_uniform_family() {
        let ratio = |m: &TriMesh| {
            let d: Vec<f64> = (0..m.n_triangles()).map(|t| m.diameter_of(t)).collect();
            d.iter().cloned().fold(0.0, f64::max) / d.iter().cloned().fold(f64::INFINITY, f64::min)
        };
        let r0 = ratio(&build_lshape(0));
        for l in 1..=3 {
            assert!((ratio(&build_lshape(l)) - r0).abs() < 1e-12);
        }
        // the nominal h is the largest triangle diameter
        for l in 0..=3 {
            let m = build_lshape(l);
            let hmax = (0..m.n_triangles()).map(|t| m.diameter_of(t)).fold(0.0, f64::max);
            assert!((hmax - m.h).abs() < 1e-14);
        }
    }

    #[test]
    fn strip_structure() {
        assert_eq!(boundary_strip(&build_lshape(0)).len(), 12);
        let mut prev = None;
        for level in 0..=4 {
            let m = build_lshape(level);
            let s = boundary_strip(&m);
            if let Some((pm, ps)) = prev {
                let ps: &ElementSet = &ps;
                let _: &TriMesh = &pm;
                for &t in &s.elements {
                    assert!(ps.elements.contains(&(t / 4)), "child {t} of a non-strip parent");
                }
                // one-layer strip: count roughly doubles
                let ratio = s.len() as f64 / ps.len() as f64;
                if level >= 2 {
                    assert!((1.8..=2.2).contains(&ratio), "ratio {ratio}");
                }
            }
            prev = Some((m, s));
        }
    }

    #[test]
    fn malformed_boundary_is_rejected() {
        // two disjoint triangles: two boundary loops
        let m = TriMesh::new(
            vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [5.0, 0.0], [6.0, 0.0], [5.0, 1.0]],
            vec![[0, 1, 2], [3, 4, 5]],
            0,
            1.0,
        );
        assert!(matches!(extract_boundary(&m), Err(Error::MalformedBoundary(_))));
    }

    #[test]
    fn mesh_dump_format() {
        let mut buf = Vec::new();
        build_lshape(0).write_text(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s.lines().filter(|l| l.starts_with("v ")).count(), 11);
        assert_eq!(s.lines().filter(|l| l.starts_with("t ")).count(), 12);
        assert!(s.contains("\nt 0 1 8\n"));
    }
}
