//! Subdivision of `[a, b]` into ordered elements.

use crate::error::{Error, Result};

/// Ordered vertices `z_0 < z_1 < ... < z_N` of a 1D mesh.
///
/// Vertices are stored once, so the right end of element `i` and the left
/// end of element `i + 1` are the same `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    vertices: Vec<f64>,
}

impl Mesh1D {
    /// `n` equal elements on `[a, b]`. The last vertex is set to `b` exactly.
    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidMesh("domain bounds must be finite".into()));
        }
        if a >= b {
            return Err(Error::InvalidMesh(format!("need a < b, got a = {a}, b = {b}")));
        }
        if n == 0 {
            return Err(Error::InvalidMesh("need at least one element".into()));
        }
        let h = (b - a) / n as f64;
        let mut vertices: Vec<f64> = (0..n).map(|i| a + i as f64 * h).collect();
        vertices.push(b);
        Self::from_vertices(vertices)
    }

    /// Mesh from an explicit, strictly increasing vertex list.
    pub fn from_vertices(vertices: Vec<f64>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidMesh("need at least two vertices".into()));
        }
        if let Some(bad) = vertices.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidMesh(format!("non-finite vertex {bad}")));
        }
        if let Some(i) = vertices.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::InvalidMesh(format!(
                "vertices must be strictly increasing (z[{i}] = {} >= z[{}] = {})",
                vertices[i],
                i + 1,
                vertices[i + 1]
            )));
        }
        Ok(Self { vertices })
    }

    pub fn a(&self) -> f64 {
        self.vertices[0]
    }

    pub fn b(&self) -> f64 {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn num_elements(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[f64] {
        &self.vertices
    }

    /// `(z_i, z_{i+1})` for the zero-based element index `i`.
    pub fn element_interval(&self, i: usize) -> Result<(f64, f64)> {
        if i >= self.num_elements() {
            return Err(Error::ElementIndex {
                index: i,
                n_elements: self.num_elements(),
            });
        }
        Ok((self.vertices[i], self.vertices[i + 1]))
    }

    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn element_width(&self, i: usize) -> Result<f64> {
        self.element_interval(i).map(|(l, r)| r - l)
    }

    /// Index of the element containing `z` (the left element at a shared vertex).
    pub fn locate(&self, z: f64) -> Option<usize> {
        if z < self.a() || z > self.b() {
            return None;
        }
        let idx = self.vertices.partition_point(|&v| v < z);
        Some(idx.saturating_sub(1).min(self.num_elements() - 1))
    }
}
