use std::f64::consts::PI;

/// Nodes and weights in ℝⁿ.
#[derive(Clone, Debug)]
pub struct Quadrature {
    dim: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl Quadrature {
    pub fn new(dim: usize, points: Vec<f64>, weights: Vec<f64>) -> Self {
        assert_eq!(points.len(), dim * weights.len());
        Self { dim, points, weights }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.points.chunks(self.dim).zip(self.weights.iter().copied())
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }

    pub fn with_weights(&self, weights: Vec<f64>) -> Self {
        Self::new(self.dim, self.points.clone(), weights)
    }

    /// Polar midpoint rule: radii (i+½)Δr, angles (j+½)Δθ, weights r Δr Δθ.
    pub fn disc_polar(center: [f64; 2], radius: f64, nr: usize, nt: usize) -> Self {
        let dr = radius / nr as f64;
        let dt = 2.0 * PI / nt as f64;
        let mut pts = Vec::with_capacity(2 * nr * nt);
        let mut w = Vec::with_capacity(nr * nt);
        for i in 0..nr {
            let r = (i as f64 + 0.5) * dr;
            for j in 0..nt {
                let t = (j as f64 + 0.5) * dt;
                pts.push(center[0] + r * t.cos());
                pts.push(center[1] + r * t.sin());
                w.push(r * dr * dt);
            }
        }
        Self::new(2, pts, w)
    }

    /// Tensor midpoint rule on the box ∏[lo_i, hi_i] with m cells per axis.
    pub fn box_midpoint(lo: &[f64], hi: &[f64], m: usize) -> Self {
        let dim = lo.len();
        let h: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| (b - a) / m as f64).collect();
        let cell: f64 = h.iter().product();
        let total = m.pow(dim as u32);
        let mut pts = Vec::with_capacity(dim * total);
        for idx in 0..total {
            let mut r = idx;
            for a in 0..dim {
                pts.push(lo[a] + (r % m) as f64 * h[a] + 0.5 * h[a]);
                r /= m;
            }
        }
        Self::new(dim, pts, vec![cell; total])
    }

    /// Midpoint cells of a cube grid whose centers lie in the ball.
    pub fn ball_midpoint(center: &[f64], radius: f64, m: usize) -> Self {
        let lo: Vec<f64> = center.iter().map(|c| c - radius).collect();
        let hi: Vec<f64> = center.iter().map(|c| c + radius).collect();
        let cube = Self::box_midpoint(&lo, &hi, m);
        let dim = center.len();
        let mut pts = Vec::new();
        let mut w = Vec::new();
        for (x, wt) in cube.iter() {
            let d2: f64 = x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum();
            if d2 < radius * radius {
                pts.extend_from_slice(x);
                w.push(wt);
            }
        }
        Self::new(dim, pts, w)
    }

    /// Rule on the ball: polar for n = 2, tensor midpoint otherwise.
    pub fn ball(center: &[f64], radius: f64, resolution: usize) -> Self {
        if center.len() == 2 {
            Self::disc_polar([center[0], center[1]], radius, resolution, resolution)
        } else {
            Self::ball_midpoint(center, radius, resolution)
        }
    }
}
