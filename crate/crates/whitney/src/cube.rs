use serde::Serialize;

/// Closed square [i, i+1]·2^{−level} × [j, j+1]·2^{−level}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DyadicCube {
    pub level: i32,
    pub i: i64,
    pub j: i64,
}

/// How two closed squares meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Contact {
    Apart,
    Corner,
    Edge,
    /// Interiors intersect.
    Overlap,
}

impl DyadicCube {
    pub fn new(level: i32, i: i64, j: i64) -> Self {
        Self { level, i, j }
    }

    pub fn side(&self) -> f64 {
        2f64.powi(-self.level)
    }

    pub fn lo(&self) -> [f64; 2] {
        let s = self.side();
        [self.i as f64 * s, self.j as f64 * s]
    }

    pub fn hi(&self) -> [f64; 2] {
        let s = self.side();
        [(self.i + 1) as f64 * s, (self.j + 1) as f64 * s]
    }

    pub fn center(&self) -> [f64; 2] {
        let s = self.side();
        [(self.i as f64 + 0.5) * s, (self.j as f64 + 0.5) * s]
    }

    pub fn children(&self) -> [DyadicCube; 4] {
        let (l, i, j) = (self.level + 1, 2 * self.i, 2 * self.j);
        [Self::new(l, i, j), Self::new(l, i + 1, j), Self::new(l, i, j + 1), Self::new(l, i + 1, j + 1)]
    }

    pub fn parent(&self) -> DyadicCube {
        Self::new(self.level - 1, self.i >> 1, self.j >> 1)
    }

    /// The cube at `level` ≤ self.level containing this one.
    pub fn ancestor(&self, level: i32) -> DyadicCube {
        let d = self.level - level;
        assert!(d >= 0);
        Self::new(level, self.i >> d, self.j >> d)
    }

    /// Integer corner coordinates at a finer common level.
    fn bounds_at(&self, level: i32) -> [i64; 4] {
        let d = level - self.level;
        assert!(d >= 0);
        [self.i << d, (self.i + 1) << d, self.j << d, (self.j + 1) << d]
    }

    pub fn contact(&self, other: &DyadicCube) -> Contact {
        let l = self.level.max(other.level);
        let a = self.bounds_at(l);
        let b = other.bounds_at(l);
        let ox = a[1].min(b[1]) - a[0].max(b[0]);
        let oy = a[3].min(b[3]) - a[2].max(b[2]);
        match (ox.signum(), oy.signum()) {
            (1, 1) => Contact::Overlap,
            (-1, _) | (_, -1) => Contact::Apart,
            (0, 0) => Contact::Corner,
            _ => Contact::Edge,
        }
    }

    pub fn touches(&self, other: &DyadicCube) -> bool {
        !matches!(self.contact(other), Contact::Apart)
    }

    /// Euclidean distance between the closed squares.
    pub fn distance(&self, other: &DyadicCube) -> f64 {
        let (a0, a1, b0, b1) = (self.lo(), self.hi(), other.lo(), other.hi());
        let dx = (b0[0] - a1[0]).max(a0[0] - b1[0]).max(0.0);
        let dy = (b0[1] - a1[1]).max(a0[1] - b1[1]).max(0.0);
        dx.hypot(dy)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        let (lo, hi) = (self.lo(), self.hi());
        (0..2).all(|a| lo[a] <= x[a] && x[a] <= hi[a])
    }

    /// x lies in the homothety λQ about the center.
    pub fn dilate_contains(&self, lambda: f64, x: &[f64]) -> bool {
        let c = self.center();
        let r = 0.5 * lambda * self.side();
        (x[0] - c[0]).abs() <= r && (x[1] - c[1]).abs() <= r
    }

    /// Smallest and largest |x| over the square.
    pub fn norm_range(&self) -> (f64, f64) {
        let (lo, hi) = (self.lo(), self.hi());
        let near = |a: usize| if lo[a] > 0.0 { lo[a] } else if hi[a] < 0.0 { hi[a] } else { 0.0 };
        let far = |a: usize| lo[a].abs().max(hi[a].abs());
        (near(0).hypot(near(1)), far(0).hypot(far(1)))
    }
}
