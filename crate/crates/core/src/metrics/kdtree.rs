//! Static 3D KD-tree for exact nearest-neighbor distance queries.
//!
//! The tree is stored implicitly: each subrange `[lo, hi)` of `points` keeps
//! its splitting point at `(lo + hi) / 2`, with the split axis recorded at the
//! same index. Squared distances are computed exactly as a linear scan would
//! compute them, so the reported minimum is bit-identical to brute force.

const LEAF_SIZE: usize = 8;

pub struct KdTree {
    points: Vec<[f64; 3]>,
    axes: Vec<u8>,
}

#[inline]
pub fn squared_distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    dx * dx + dy * dy + dz * dz
}

impl KdTree {
    pub fn build(points: &[[f64; 3]]) -> Self {
        let mut pts = points.to_vec();
        let mut axes = vec![0u8; pts.len()];
        build_range(&mut pts, &mut axes);
        Self { points: pts, axes }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Squared distance from `q` to its nearest stored point, `+inf` if empty.
    pub fn nearest_squared(&self, q: &[f64; 3]) -> f64 {
        let mut best = f64::INFINITY;
        self.search(q, 0, self.points.len(), &mut best);
        best
    }

    fn search(&self, q: &[f64; 3], lo: usize, hi: usize, best: &mut f64) {
        if hi - lo <= LEAF_SIZE {
            for p in &self.points[lo..hi] {
                let d = squared_distance(q, p);
                if d < *best {
                    *best = d;
                }
            }
            return;
        }
        let mid = (lo + hi) / 2;
        let axis = self.axes[mid] as usize;
        let d = squared_distance(q, &self.points[mid]);
        if d < *best {
            *best = d;
        }
        let diff = q[axis] - self.points[mid][axis];
        let (near, far) = if diff < 0.0 {
            ((lo, mid), (mid + 1, hi))
        } else {
            ((mid + 1, hi), (lo, mid))
        };
        self.search(q, near.0, near.1, best);
        // Every point across the plane is at least |diff| away along `axis`.
        if diff * diff < *best {
            self.search(q, far.0, far.1, best);
        }
    }
}

fn build_range(pts: &mut [[f64; 3]], axes: &mut [u8]) {
    let n = pts.len();
    if n <= LEAF_SIZE {
        return;
    }
    let axis = widest_axis(pts);
    let mid = n / 2;
    pts.select_nth_unstable_by(mid, |a, b| a[axis].total_cmp(&b[axis]));
    axes[mid] = axis as u8;
    let (left, rest) = pts.split_at_mut(mid);
    let (left_axes, rest_axes) = axes.split_at_mut(mid);
    build_range(left, left_axes);
    build_range(&mut rest[1..], &mut rest_axes[1..]);
}

fn widest_axis(pts: &[[f64; 3]]) -> usize {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in pts {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (0..3)
        .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
        .unwrap_or(0)
}
