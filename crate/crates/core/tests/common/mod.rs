//! Independent transcription of the global weak form, term by term, for the
//! boundary setting `e1(a) = u1`, `e2(b) = u2`. Basis polynomials come from a
//! Vandermonde inverse and integrals are evaluated exactly on monomials.

#![allow(dead_code)]

use nalgebra::DMatrix;
use phdg_core::{
    assemble_global, BoundaryConditions, DofMap, Field, FluxParams, Mesh1D, ReferenceBasis,
};

/// Monomial coefficients: column `j` holds the coefficients of `ℓ_j(ζ)`.
pub fn lagrange_coefficients(nodes: &[f64]) -> DMatrix<f64> {
    let n = nodes.len();
    let v = DMatrix::from_fn(n, n, |i, m| nodes[i].powi(m as i32));
    v.try_inverse().expect("distinct nodes")
}

fn poly_at(c: &DMatrix<f64>, j: usize, zeta: f64) -> f64 {
    (0..c.nrows()).map(|m| c[(m, j)] * zeta.powi(m as i32)).sum()
}

/// `∫₀¹ ℓ'_a(ζ) m_b(ζ) dζ`, independent of the element width.
fn deriv_product(ca: &DMatrix<f64>, a: usize, cb: &DMatrix<f64>, b: usize) -> f64 {
    let mut s = 0.0;
    for m in 1..ca.nrows() {
        for n in 0..cb.nrows() {
            s += m as f64 * ca[(m, a)] * cb[(n, b)] / (m + n) as f64;
        }
    }
    s
}

pub struct Oracle {
    pub j: DMatrix<f64>,
    pub r: DMatrix<f64>,
    pub g: DMatrix<f64>,
}

/// `w`-rows against `e`-columns, literal coefficient per displayed term.
pub fn oracle(n_el: usize, nodes1: &[f64], nodes2: &[f64], beta: f64, tau: f64, xi: f64) -> Oracle {
    let c1 = lagrange_coefficients(nodes1);
    let c2 = lagrange_coefficients(nodes2);
    let (n1, n2) = (nodes1.len(), nodes2.len());
    let dofs = DofMap { n_elements: n_el, n1, n2 };
    let n = dofs.n_dof();
    let mut a = DMatrix::zeros(n, n);
    let mut d = DMatrix::zeros(n, n);
    let mut g = DMatrix::zeros(n, 2);
    let x1 = |e: usize, j: usize| dofs.index(e, Field::X1, j);
    let x2 = |e: usize, j: usize| dofs.index(e, Field::X2, j);
    // Trace of basis function j of field f at the left (0) or right (1) end.
    let phi = |j: usize, end: f64| poly_at(&c1, j, end);
    let psi = |j: usize, end: f64| poly_at(&c2, j, end);

    // Volume terms: (∂z w1, e2) and -(w2, ∂z e1).
    for e in 0..n_el {
        for i in 0..n1 {
            for k in 0..n2 {
                let v = deriv_product(&c1, i, &c2, k);
                a[(x1(e, i), x2(e, k))] += v;
                a[(x2(e, k), x1(e, i))] -= v;
            }
        }
    }

    // Interfaces: element e on the left of node z, element e + 1 on the right.
    for e in 0..n_el.saturating_sub(1) {
        let r = e + 1;
        // x1 equation, right end of e.
        for i in 0..n1 {
            for k in 0..n2 {
                a[(x1(e, i), x2(r, k))] += (beta - 1.0) * phi(i, 1.0) * psi(k, 0.0);
                a[(x1(e, i), x2(e, k))] += -beta * phi(i, 1.0) * psi(k, 1.0);
            }
            for k in 0..n1 {
                d[(x1(e, i), x1(r, k))] += tau * phi(i, 1.0) * phi(k, 0.0);
                d[(x1(e, i), x1(e, k))] += -tau * phi(i, 1.0) * phi(k, 1.0);
            }
        }
        // x1 equation, left end of e + 1.
        for i in 0..n1 {
            for k in 0..n2 {
                a[(x1(r, i), x2(e, k))] += beta * phi(i, 0.0) * psi(k, 1.0);
                a[(x1(r, i), x2(r, k))] += (1.0 - beta) * phi(i, 0.0) * psi(k, 0.0);
            }
            for k in 0..n1 {
                d[(x1(r, i), x1(e, k))] += tau * phi(i, 0.0) * phi(k, 1.0);
                d[(x1(r, i), x1(r, k))] += -tau * phi(i, 0.0) * phi(k, 0.0);
            }
        }
        // x2 equation, right end of e.
        for i in 0..n2 {
            for k in 0..n1 {
                a[(x2(e, i), x1(r, k))] += -beta * psi(i, 1.0) * phi(k, 0.0);
                a[(x2(e, i), x1(e, k))] += beta * psi(i, 1.0) * phi(k, 1.0);
            }
            for k in 0..n2 {
                d[(x2(e, i), x2(r, k))] += xi * psi(i, 1.0) * psi(k, 0.0);
                d[(x2(e, i), x2(e, k))] += -xi * psi(i, 1.0) * psi(k, 1.0);
            }
        }
        // x2 equation, left end of e + 1.
        for i in 0..n2 {
            for k in 0..n1 {
                a[(x2(r, i), x1(e, k))] += (1.0 - beta) * psi(i, 0.0) * phi(k, 1.0);
                a[(x2(r, i), x1(r, k))] += (beta - 1.0) * psi(i, 0.0) * phi(k, 0.0);
            }
            for k in 0..n2 {
                d[(x2(r, i), x2(e, k))] += xi * psi(i, 0.0) * psi(k, 1.0);
                d[(x2(r, i), x2(r, k))] += -xi * psi(i, 0.0) * psi(k, 0.0);
            }
        }
    }

    // Domain boundary terms.
    let last = n_el - 1;
    for i in 0..n1 {
        for k in 0..n2 {
            a[(x1(0, i), x2(0, k))] += phi(i, 0.0) * psi(k, 0.0);
        }
        g[(x1(last, i), 1)] += -phi(i, 1.0);
    }
    for i in 0..n2 {
        for k in 0..n1 {
            a[(x2(0, i), x1(0, k))] += -psi(i, 0.0) * phi(k, 0.0);
        }
        g[(x2(0, i), 0)] += psi(i, 0.0);
    }

    // The τ and ξ terms all belong to -R; the rest is J.
    Oracle { j: a, r: -d, g }
}

/// Largest deviation of assembled `(J, R, G)` from the oracle over the grid
/// `N ≤ 3`, `k1, k2 ≤ 2`, uniform and graded meshes, and a set of fluxes.
/// Returns `(worst, configurations checked)`.
pub fn max_oracle_deviation() -> (f64, usize) {
    let meshes = |n: usize| {
        vec![
            Mesh1D::uniform(0.0, 1.0, n).unwrap(),
            Mesh1D::from_vertices((0..=n).map(|i| (i as f64 / n as f64).powf(1.3) * 2.0 - 0.5).collect()).unwrap(),
        ]
    };
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for n_el in 1..=3 {
        for mesh in meshes(n_el) {
            for k1 in 1..=2 {
                for k2 in 1..=2 {
                    let phi = ReferenceBasis::new(k1).unwrap();
                    let psi = ReferenceBasis::new(k2).unwrap();
                    for beta in [0.0, 0.3, 0.5, 1.0] {
                        for (tau, xi) in [(0.0, 0.0), (0.4, 0.0), (0.0, 0.7), (0.5, 0.5), (0.4, 0.7)] {
                            let params = FluxParams::new(beta, tau, xi).unwrap();
                            let model = assemble_global(&mesh, &phi, &psi, &params, &BoundaryConditions::default(), 1.3, 0.8)
                                .unwrap();
                            let o = oracle(n_el, phi.nodes(), psi.nodes(), beta, tau, xi);
                            worst = worst
                                .max((model.j.to_dense() - &o.j).amax())
                                .max((model.r.to_dense() - &o.r).amax())
                                .max((model.g.to_dense() - &o.g).amax());
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    (worst, checked)
}
