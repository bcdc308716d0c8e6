//! Plane geometry helpers shared by the mesh, FEM and BEM code.

pub type Point = [f64; 2];

#[inline]
pub fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn scale(a: Point, s: f64) -> Point {
    [a[0] * s, a[1] * s]
}

#[inline]
pub fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// z-component of the 3D cross product.
#[inline]
pub fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}

#[inline]
pub fn dist(a: Point, b: Point) -> f64 {
    norm(sub(a, b))
}

#[inline]
pub fn midpoint(a: Point, b: Point) -> Point {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

/// A straight boundary panel, parametrised as `start + σ (end − start)` for σ ∈ [0, 1].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub start: Point,
    pub end: Point,
}

impl Segment {
    pub fn new(start: Point, end: Point) -> Self {
        Segment { start, end }
    }

    pub fn direction(&self) -> Point {
        sub(self.end, self.start)
    }

    pub fn length(&self) -> f64 {
        norm(self.direction())
    }

    pub fn tangent(&self) -> Point {
        scale(self.direction(), 1.0 / self.length())
    }

    /// Unit normal to the right of the direction of travel. For a
    /// counterclockwise loop this points out of the enclosed region.
    pub fn normal(&self) -> Point {
        let t = self.tangent();
        [t[1], -t[0]]
    }

    pub fn point_at(&self, sigma: f64) -> Point {
        add(self.start, scale(self.direction(), sigma))
    }

    pub fn midpoint(&self) -> Point {
        midpoint(self.start, self.end)
    }

    pub fn reversed(&self) -> Self {
        Segment::new(self.end, self.start)
    }

    pub fn distance_to_point(&self, p: Point) -> f64 {
        let d = self.direction();
        let t = (dot(sub(p, self.start), d) / dot(d, d)).clamp(0.0, 1.0);
        dist(p, self.point_at(t))
    }

    /// Distance between two segments, assumed not to intersect.
    pub fn distance_to_segment(&self, other: &Segment) -> f64 {
        if self.crosses(other) {
            return 0.0;
        }
        self.distance_to_point(other.start)
            .min(self.distance_to_point(other.end))
            .min(other.distance_to_point(self.start))
            .min(other.distance_to_point(self.end))
    }

    /// Proper crossing of the two open segments.
    pub fn crosses(&self, other: &Segment) -> bool {
        let side = |s: &Segment, p: Point| cross(sub(s.end, s.start), sub(p, s.start));
        let (a, b) = (side(self, other.start), side(self, other.end));
        let (c, d) = (side(other, self.start), side(other, self.end));
        a * b < 0.0 && c * d < 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_segments_have_zero_distance() {
        let a = Segment::new([0.0, 0.0], [1.0, 1.0]);
        let b = Segment::new([0.0, 1.0], [1.0, 0.0]);
        assert!(a.crosses(&b));
        assert_eq!(a.distance_to_segment(&b), 0.0);
        let c = Segment::new([2.0, 0.0], [3.0, 1.0]);
        assert!(!a.crosses(&c));
        assert!((a.distance_to_segment(&c) - 2.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn normal_of_bottom_edge_points_down() {
        let s = Segment::new([0.0, 0.0], [0.2, 0.0]);
        let n = s.normal();
        assert!((n[0]).abs() < 1e-15 && (n[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn segment_distances() {
        let a = Segment::new([0.0, 0.0], [1.0, 0.0]);
        let b = Segment::new([2.0, 1.0], [3.0, 1.0]);
        assert!((a.distance_to_segment(&b) - 2f64.sqrt()).abs() < 1e-15);
        assert!((a.distance_to_point([0.5, 2.0]) - 2.0).abs() < 1e-15);
    }
}
