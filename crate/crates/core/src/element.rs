//! Per-element port-Hamiltonian model.
//!
//! With trial and test functions `φ` (for `x1`, `e1`) and `ψ` (for `x2`,
//! `e2`), each element satisfies
//!
//! ```text
//! [M1  0] [ẋ1]   ([ 0   P] - [R1  0]) [e1]   [ 0  B1]
//! [ 0 M2] [ẋ2] = ([-Pᵀ  0]   [ 0 R2]) [e2] + [B2  0] U
//! ```
//!
//! where `U` collects the neighbor traces entering through the numerical
//! flux. The first equation is integrated by parts once, the second twice.

use nalgebra::{DMatrix, DVector};

use crate::basis::{gauss_rule, ReferenceBasis};
use crate::error::{Error, Result};
use crate::flux::FluxParams;

/// Flux parameters used at the left and right end of one element.
///
/// Interior ends use the global flux; ends on the domain boundary use the
/// ghost parameters of the boundary condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndFluxes {
    pub left: FluxParams,
    pub right: FluxParams,
}

impl EndFluxes {
    pub fn uniform(params: FluxParams) -> Self {
        Self { left: params, right: params }
    }
}

/// Matrices of one element.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementModel {
    pub interval: (f64, f64),
    pub m1: DMatrix<f64>,
    pub m2: DMatrix<f64>,
    pub p: DMatrix<f64>,
    pub r1: DMatrix<f64>,
    pub r2: DMatrix<f64>,
    /// Columns `φ(z_i)`, `φ(z_{i+1})`.
    pub b1: DMatrix<f64>,
    /// Columns `ψ(z_i)`, `ψ(z_{i+1})`.
    pub b2: DMatrix<f64>,
    pub c1: f64,
    pub c2: f64,
    pub ends: EndFluxes,
}

/// `∫_0^1 ∂ζφ ψᵀ dζ`, which equals the physical `∫ ∂zφ ψᵀ dz` for any width.
pub fn derivative_coupling(phi: &ReferenceBasis, psi: &ReferenceBasis) -> DMatrix<f64> {
    let rule = gauss_rule(phi.degree().max(psi.degree()) + 1).expect("n >= 1");
    let mut out = DMatrix::zeros(phi.len(), psi.len());
    for (&z, &w) in rule.points.iter().zip(&rule.weights) {
        let dphi = phi.eval_deriv(z).expect("quadrature point in [0, 1]");
        let vpsi = psi.eval(z).expect("quadrature point in [0, 1]");
        for i in 0..phi.len() {
            for j in 0..psi.len() {
                out[(i, j)] += w * dphi[i] * vpsi[j];
            }
        }
    }
    out
}

/// Mass matrix `∫ ℓ ℓᵀ dz` on an element of width `h`.
pub fn mass_matrix(basis: &ReferenceBasis, h: f64) -> DMatrix<f64> {
    let rule = gauss_rule(basis.degree() + 1).expect("n >= 1");
    let n = basis.len();
    let mut out = DMatrix::zeros(n, n);
    for (&z, &w) in rule.points.iter().zip(&rule.weights) {
        let v = basis.eval(z).expect("quadrature point in [0, 1]");
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += h * w * v[i] * v[j];
            }
        }
    }
    // Symmetric by construction up to summation order; make it exact.
    let sym = (&out + out.transpose()) * 0.5;
    sym
}

fn outer(a: &[f64], b: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(a.len(), b.len(), |i, j| a[i] * b[j])
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite and > 0, got {v}")))
    }
}

/// Element model with the same flux at both ends.
pub fn element_matrices(
    interval: (f64, f64),
    phi: &ReferenceBasis,
    psi: &ReferenceBasis,
    params: &FluxParams,
    c1: f64,
    c2: f64,
) -> Result<ElementModel> {
    element_matrices_with_ends(interval, phi, psi, &EndFluxes::uniform(*params), c1, c2)
}

/// Element model with separate flux parameters at each end.
pub fn element_matrices_with_ends(
    interval: (f64, f64),
    phi: &ReferenceBasis,
    psi: &ReferenceBasis,
    ends: &EndFluxes,
    c1: f64,
    c2: f64,
) -> Result<ElementModel> {
    let h = interval.1 - interval.0;
    check_positive("element width", h)?;
    check_positive("c1", c1)?;
    check_positive("c2", c2)?;

    let (phi_l, phi_r) = (phi.left_trace(), phi.right_trace());
    let (psi_l, psi_r) = (psi.left_trace(), psi.right_trace());

    let m1 = mass_matrix(phi, h);
    let m2 = mass_matrix(psi, h);
    let p = derivative_coupling(phi, psi) + outer(&phi_l, &psi_l) * (1.0 - ends.left.beta())
        - outer(&phi_r, &psi_r) * ends.right.beta();
    let r1 = outer(&phi_l, &phi_l) * ends.left.tau() + outer(&phi_r, &phi_r) * ends.right.tau();
    let r2 = outer(&psi_l, &psi_l) * ends.left.xi() + outer(&psi_r, &psi_r) * ends.right.xi();
    let b1 = DMatrix::from_fn(phi.len(), 2, |i, j| if j == 0 { phi_l[i] } else { phi_r[i] });
    let b2 = DMatrix::from_fn(psi.len(), 2, |i, j| if j == 0 { psi_l[i] } else { psi_r[i] });

    Ok(ElementModel { interval, m1, m2, p, r1, r2, b1, b2, c1, c2, ends: *ends })
}

/// Effort traces of the neighbors at the shared vertices of an element.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NeighborTraces {
    /// `e1^{(i-1)}(z_i)`
    pub left_e1: f64,
    /// `e2^{(i-1)}(z_i)`
    pub left_e2: f64,
    /// `e1^{(i+1)}(z_{i+1})`
    pub right_e1: f64,
    /// `e2^{(i+1)}(z_{i+1})`
    pub right_e2: f64,
}

/// The neighbor input `U` of one element.
///
/// Rows: `x2` equation at the left end, `x2` equation at the right end,
/// `x1` equation at the left end, `x1` equation at the right end.
pub fn element_input_vector(n: &NeighborTraces, ends: &EndFluxes) -> [f64; 4] {
    let (l, r) = (&ends.left, &ends.right);
    [
        (1.0 - l.beta()) * n.left_e1 + l.xi() * n.left_e2,
        -r.beta() * n.right_e1 + r.xi() * n.right_e2,
        l.beta() * n.left_e2 + l.tau() * n.left_e1,
        (r.beta() - 1.0) * n.right_e2 + r.tau() * n.right_e1,
    ]
}

impl ElementModel {
    pub fn n1(&self) -> usize {
        self.m1.nrows()
    }

    pub fn n2(&self) -> usize {
        self.m2.nrows()
    }

    pub fn width(&self) -> f64 {
        self.interval.1 - self.interval.0
    }

    /// Block mass matrix `diag(M1, M2)`.
    pub fn mass(&self) -> DMatrix<f64> {
        let (n1, n2) = (self.n1(), self.n2());
        let mut m = DMatrix::zeros(n1 + n2, n1 + n2);
        m.view_mut((0, 0), (n1, n1)).copy_from(&self.m1);
        m.view_mut((n1, n1), (n2, n2)).copy_from(&self.m2);
        m
    }

    /// `[[0, P], [-Pᵀ, 0]]`.
    pub fn structure(&self) -> DMatrix<f64> {
        let (n1, n2) = (self.n1(), self.n2());
        let mut j = DMatrix::zeros(n1 + n2, n1 + n2);
        j.view_mut((0, n1), (n1, n2)).copy_from(&self.p);
        j.view_mut((n1, 0), (n2, n1)).copy_from(&(-self.p.transpose()));
        j
    }

    /// `diag(R1, R2)`.
    pub fn dissipation(&self) -> DMatrix<f64> {
        let (n1, n2) = (self.n1(), self.n2());
        let mut r = DMatrix::zeros(n1 + n2, n1 + n2);
        r.view_mut((0, 0), (n1, n1)).copy_from(&self.r1);
        r.view_mut((n1, n1), (n2, n2)).copy_from(&self.r2);
        r
    }

    /// `[[0, B1], [B2, 0]]`, mapping the 4-vector input to both equations.
    pub fn input_map(&self) -> DMatrix<f64> {
        let (n1, n2) = (self.n1(), self.n2());
        let mut b = DMatrix::zeros(n1 + n2, 4);
        b.view_mut((0, 2), (n1, 2)).copy_from(&self.b1);
        b.view_mut((n1, 0), (n2, 2)).copy_from(&self.b2);
        b
    }

    /// Diagonal of `Q = diag(c1 I, c2 I)`.
    pub fn constitutive_diag(&self) -> Vec<f64> {
        let mut q = vec![self.c1; self.n1()];
        q.extend(std::iter::repeat_n(self.c2, self.n2()));
        q
    }

    /// `½ (c1 x1ᵀ M1 x1 + c2 x2ᵀ M2 x2)`.
    pub fn hamiltonian(&self, x1: &[f64], x2: &[f64]) -> Result<f64> {
        if x1.len() != self.n1() {
            return Err(Error::DimensionMismatch { expected: self.n1(), actual: x1.len() });
        }
        if x2.len() != self.n2() {
            return Err(Error::DimensionMismatch { expected: self.n2(), actual: x2.len() });
        }
        let x1 = DVector::from_column_slice(x1);
        let x2 = DVector::from_column_slice(x2);
        Ok(0.5 * (self.c1 * x1.dot(&(&self.m1 * &x1)) + self.c2 * x2.dot(&(&self.m2 * &x2))))
    }

    /// `M Ẋ = (J - R) E + B U` for the element.
    pub fn rhs(&self, efforts: &DVector<f64>, input: &[f64; 4]) -> DVector<f64> {
        (self.structure() - self.dissipation()) * efforts
            + self.input_map() * DVector::from_column_slice(input)
    }
}
