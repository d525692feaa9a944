use super::{best_vertex, Frontier, RatePoint, Support};

/// Upper-right convex hull of a point cloud: the boundary of the smallest
/// convex, coordinate-wise down-closed set containing every point.
#[derive(Clone, Debug, PartialEq)]
pub struct Envelope {
    /// Corner points from the top-left `(0, max r2)` to the bottom-right `(max r1, 0)`.
    pub vertices: Vec<RatePoint>,
}

fn cross(o: RatePoint, a: RatePoint, b: RatePoint) -> f64 {
    (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1)
}

/// Time-sharing closure of a set of achievable points.
pub fn convexify(points: &[RatePoint]) -> Envelope {
    let pts: Vec<RatePoint> = points
        .iter()
        .filter(|p| p.r1.is_finite() && p.r2.is_finite())
        .map(|p| RatePoint::new(p.r1.max(0.0), p.r2.max(0.0)))
        .collect();
    if pts.is_empty() {
        return Envelope {
            vertices: vec![RatePoint::ORIGIN],
        };
    }
    let max1 = pts.iter().map(|p| p.r1).fold(0.0, f64::max);
    let max2 = pts.iter().map(|p| p.r2).fold(0.0, f64::max);
    let mut all = pts;
    all.push(RatePoint::new(0.0, max2));
    all.push(RatePoint::new(max1, 0.0));
    // Ascending r1, and within equal r1 descending r2 so the first point of
    // each column is its top.
    all.sort_by(|a, b| a.r1.total_cmp(&b.r1).then(b.r2.total_cmp(&a.r2)));
    all.dedup();

    let mut hull: Vec<RatePoint> = Vec::new();
    for p in all {
        if let Some(last) = hull.last() {
            if p.r1 == last.r1 {
                continue;
            }
        }
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) >= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    // The rightmost column contributes its top; close the chain on the axis.
    if let Some(last) = hull.last().copied() {
        if last.r2 > 0.0 {
            hull.push(RatePoint::new(last.r1, 0.0));
        }
    }
    Envelope { vertices: hull }
}

impl Envelope {
    pub fn to_frontier(&self, n: usize, source: impl Into<String>) -> Frontier {
        Frontier::from_support(self, n, source)
    }
}

impl Support for Envelope {
    fn support(&self, mu: [f64; 2]) -> (f64, RatePoint) {
        best_vertex(&self.vertices, mu)
    }
}
