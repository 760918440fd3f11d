use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

/// Symmetric 2x2 matrix `[[a, b], [b, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Sym2 {
    pub a: f64,
    pub b: f64,
    pub d: f64,
}

impl Sym2 {
    pub const ZERO: Self = Self { a: 0.0, b: 0.0, d: 0.0 };

    pub fn new(a: f64, b: f64, d: f64) -> Self {
        Self { a, b, d }
    }

    pub fn diag(x: f64, y: f64) -> Self {
        Self::new(x, 0.0, y)
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.b
    }

    /// Eigenvalues `(l1, l2)` with `l1 >= l2`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let m = 0.5 * (self.a + self.d);
        let r = (0.25 * (self.a - self.d).powi(2) + self.b * self.b).sqrt();
        (m + r, m - r)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(s * self.a, s * self.b, s * self.d)
    }

    pub fn matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.a, self.b, self.b, self.d)
    }

    /// Quadratic form `x^T S x`.
    pub fn quad(&self, x: [f64; 2]) -> f64 {
        self.a * x[0] * x[0] + 2.0 * self.b * x[0] * x[1] + self.d * x[1] * x[1]
    }

    /// `R S R^T` where `R` has first column `frame`.
    pub fn rotated(&self, frame: [f64; 2]) -> Self {
        let [c, s] = frame;
        let (a, b, d) = (self.a, self.b, self.d);
        Self {
            a: c * c * a - 2.0 * c * s * b + s * s * d,
            b: c * s * (a - d) + (c * c - s * s) * b,
            d: s * s * a + 2.0 * c * s * b + c * c * d,
        }
    }
}

/// Per-face shape operator, stored in a face-local orthonormal frame.
///
/// `frames[f]` is the first frame vector expressed in the canonical layout of
/// face `f` (corner 0 at the origin, corner 1 on the positive x axis); the
/// second frame vector is its counter-clockwise rotation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeField {
    pub entries: Vec<Sym2>,
    pub frames: Vec<[f64; 2]>,
}

impl ShapeField {
    pub fn zeros(n_faces: usize) -> Self {
        Self {
            entries: vec![Sym2::ZERO; n_faces],
            frames: vec![[1.0, 0.0]; n_faces],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Shape operator of face `f` in its canonical layout coordinates.
    pub fn layout(&self, f: usize) -> Sym2 {
        self.entries[f].rotated(self.frames[f])
    }

    pub fn trace(&self, f: usize) -> f64 {
        self.entries[f].trace()
    }

    pub fn det(&self, f: usize) -> f64 {
        self.entries[f].det()
    }

    pub fn negated(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|s| s.scaled(-1.0)).collect(),
            frames: self.frames.clone(),
        }
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, s| {
            let (l1, l2) = s.eigenvalues();
            m.max(l1.abs()).max(l2.abs())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rotation_matches_matrix_product() {
        let s = Sym2::new(0.3, -0.2, -0.1);
        let th: f64 = 0.7;
        let r = Matrix2::new(th.cos(), -th.sin(), th.sin(), th.cos());
        let expect = r * s.matrix() * r.transpose();
        let got = s.rotated([th.cos(), th.sin()]).matrix();
        assert!((expect - got).norm() < 1e-15);
    }

    #[test]
    fn eigenvalues_of_trace_free() {
        let (l1, l2) = Sym2::diag(0.5, -0.5).rotated([0.6, 0.8]).eigenvalues();
        assert_relative_eq!(l1, 0.5, epsilon = 1e-15);
        assert_relative_eq!(l2, -0.5, epsilon = 1e-15);
        assert_eq!(Sym2::ZERO.eigenvalues(), (0.0, 0.0));
    }

    #[test]
    fn quad_form_invariant_under_rotation() {
        let s = Sym2::new(0.2, 0.1, -0.4);
        let th: f64 = -1.1;
        let (c, sn) = (th.cos(), th.sin());
        let x = [0.3, -0.9];
        // rotated operator applied to rotated vector equals original on x
        let rx = [c * x[0] - sn * x[1], sn * x[0] + c * x[1]];
        assert_relative_eq!(s.rotated([c, sn]).quad(rx), s.quad(x), epsilon = 1e-15);
    }
}
