//! Nodal Lagrange reference bases on `[0, 1]` and Gauss-Legendre quadrature.
//!
//! Nodes are Gauss-Lobatto-Legendre points, so both interval ends are nodes
//! and element traces are single nodal coefficients. Values are evaluated
//! with the barycentric formula; derivatives with the product rule over the
//! node set, which stays accurate arbitrarily close to a node.

use crate::error::{Error, Result};

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// Legendre polynomial `P_n(x)` and `P_{n-1}(x)` by the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    if n == 0 {
        return (p_prev, 0.0);
    }
    let mut p = x;
    for m in 2..=n {
        let m = m as f64;
        let next = ((2.0 * m - 1.0) * x * p - (m - 1.0) * p_prev) / m;
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

/// Gauss-Legendre rule on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `∫_0^1 f(ζ) dζ` approximated by the rule.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| w * f(p))
            .sum()
    }
}

/// `n`-point Gauss-Legendre rule mapped to `[0, 1]`; exact up to degree `2n - 1`.
pub fn gauss_rule(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "quadrature needs at least one point".into(),
        ));
    }
    let mut points = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    // Roots are symmetric; compute the upper half and mirror.
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, p_prev) = legendre_pair(n, x);
            dp = nf * (x * p - p_prev) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                break;
            }
        }
        let (p, p_prev) = legendre_pair(n, x);
        dp = if dp == 0.0 { 1.0 } else { nf * (x * p - p_prev) / (x * x - 1.0) };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Odd n: the middle root is zero.
        if 2 * i + 1 == n {
            x = 0.0;
        }
        points[i] = 0.5 * (1.0 - x);
        points[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    Ok(QuadratureRule { points, weights })
}

/// Gauss-Lobatto-Legendre nodes of degree `k >= 1` on `[0, 1]`, ascending.
fn gll_nodes(k: usize) -> Vec<f64> {
    let kf = k as f64;
    let mut x: Vec<f64> = (0..=k)
        .map(|j| -(std::f64::consts::PI * j as f64 / kf).cos())
        .collect();
    for xj in x.iter_mut().take(k).skip(1) {
        for _ in 0..NEWTON_MAX_ITER {
            let (p, p_prev) = legendre_pair(k, *xj);
            let dx = (*xj * p - p_prev) / ((kf + 1.0) * p);
            *xj -= dx;
            if dx.abs() <= NEWTON_TOL {
                break;
            }
        }
    }
    let mut nodes: Vec<f64> = x.iter().map(|&xi| 0.5 * (1.0 + xi)).collect();
    nodes[0] = 0.0;
    nodes[k] = 1.0;
    for j in 1..=k / 2 {
        let sym = 0.5 * (nodes[j] + 1.0 - nodes[k - j]);
        nodes[j] = sym;
        nodes[k - j] = 1.0 - sym;
    }
    if k % 2 == 0 {
        nodes[k / 2] = 0.5;
    }
    nodes
}

/// Nodal Lagrange basis `ℓ_0 .. ℓ_k` of degree `k` on the reference interval.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceBasis {
    degree: usize,
    nodes: Vec<f64>,
    bary_weights: Vec<f64>,
}

impl ReferenceBasis {
    /// Basis of degree `k >= 1` on Gauss-Lobatto-Legendre nodes.
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidBasis(
                "degree 0 has no endpoint nodes; need k >= 1".into(),
            ));
        }
        Ok(Self::from_nodes(gll_nodes(k)))
    }

    fn from_nodes(nodes: Vec<f64>) -> Self {
        let bary_weights = (0..nodes.len())
            .map(|j| {
                let prod: f64 = nodes
                    .iter()
                    .enumerate()
                    .filter(|&(m, _)| m != j)
                    .map(|(_, &xm)| nodes[j] - xm)
                    .product();
                1.0 / prod
            })
            .collect();
        Self {
            degree: nodes.len() - 1,
            nodes,
            bary_weights,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of basis functions, `k + 1`.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    fn check(zeta: f64) -> Result<()> {
        if (0.0..=1.0).contains(&zeta) {
            Ok(())
        } else {
            Err(Error::OutsideReference(zeta))
        }
    }

    /// `[ℓ_0(ζ), .., ℓ_k(ζ)]`.
    pub fn eval(&self, zeta: f64) -> Result<Vec<f64>> {
        Self::check(zeta)?;
        let mut out = vec![0.0; self.len()];
        if let Some(j) = self.nodes.iter().position(|&x| x == zeta) {
            out[j] = 1.0;
            return Ok(out);
        }
        let mut denom = 0.0;
        for (o, (&x, &w)) in out.iter_mut().zip(self.nodes.iter().zip(&self.bary_weights)) {
            *o = w / (zeta - x);
            denom += *o;
        }
        out.iter_mut().for_each(|o| *o /= denom);
        Ok(out)
    }

    /// `[ℓ'_0(ζ), .., ℓ'_k(ζ)]` with respect to the reference coordinate.
    pub fn eval_deriv(&self, zeta: f64) -> Result<Vec<f64>> {
        Self::check(zeta)?;
        let n = self.len();
        let out = (0..n)
            .map(|j| {
                let xj = self.nodes[j];
                (0..n)
                    .filter(|&m| m != j)
                    .map(|m| {
                        let mut term = 1.0 / (xj - self.nodes[m]);
                        for l in (0..n).filter(|&l| l != j && l != m) {
                            term *= (zeta - self.nodes[l]) / (xj - self.nodes[l]);
                        }
                        term
                    })
                    .sum()
            })
            .collect();
        Ok(out)
    }

    /// Values at the left (`ζ = 0`) end.
    pub fn left_trace(&self) -> Vec<f64> {
        self.eval(0.0).expect("0 is in the reference interval")
    }

    /// Values at the right (`ζ = 1`) end.
    pub fn right_trace(&self) -> Vec<f64> {
        self.eval(1.0).expect("1 is in the reference interval")
    }

    /// `Σ_j c_j ℓ_j(ζ)`.
    pub fn interpolate(&self, coeffs: &[f64], zeta: f64) -> Result<f64> {
        if coeffs.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: coeffs.len(),
            });
        }
        Ok(self.eval(zeta)?.iter().zip(coeffs).map(|(l, c)| l * c).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn linear_basis() {
        let b = ReferenceBasis::new(1).unwrap();
        assert_eq!(b.nodes(), &[0.0, 1.0]);
        assert!(close(&b.eval(0.25).unwrap(), &[0.75, 0.25], 1e-15));
        assert_eq!(b.eval(0.0).unwrap(), vec![1.0, 0.0]);
        for z in [0.0, 0.3, 0.5, 1.0] {
            assert!(close(&b.eval_deriv(z).unwrap(), &[-1.0, 1.0], 1e-15));
        }
    }

    #[test]
    fn quadratic_basis() {
        let b = ReferenceBasis::new(2).unwrap();
        assert_eq!(b.nodes(), &[0.0, 0.5, 1.0]);
        assert_eq!(b.eval(0.5).unwrap(), vec![0.0, 1.0, 0.0]);
        assert!(close(&b.eval_deriv(0.0).unwrap(), &[-3.0, 4.0, -1.0], 1e-14));
    }

    #[test]
    fn gll_nodes_known_values() {
        // Degree 3: interior nodes at (1 ± 1/√5)/2.
        let b = ReferenceBasis::new(3).unwrap();
        let s = 1.0 / 5f64.sqrt();
        assert!(close(
            b.nodes(),
            &[0.0, 0.5 * (1.0 - s), 0.5 * (1.0 + s), 1.0],
            1e-15
        ));
        // Degree 4: interior nodes 0, ±√(3/7).
        let b = ReferenceBasis::new(4).unwrap();
        let s = (3.0f64 / 7.0).sqrt();
        assert!(close(
            b.nodes(),
            &[0.0, 0.5 * (1.0 - s), 0.5, 0.5 * (1.0 + s), 1.0],
            1e-15
        ));
    }

    #[test]
    fn rejects_degree_zero_and_out_of_range() {
        assert!(ReferenceBasis::new(0).is_err());
        let b = ReferenceBasis::new(2).unwrap();
        assert_eq!(b.eval(1.5), Err(Error::OutsideReference(1.5)));
        assert!(b.eval_deriv(-0.1).is_err());
    }

    #[test]
    fn gauss_rules() {
        let r = gauss_rule(1).unwrap();
        assert_eq!(r.points, vec![0.5]);
        assert_eq!(r.weights, vec![1.0]);

        let r = gauss_rule(2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!(close(&r.points, &[0.5 * (1.0 - s), 0.5 * (1.0 + s)], 1e-15));
        assert!(close(&r.weights, &[0.5, 0.5], 1e-15));

        let r = gauss_rule(3).unwrap();
        assert!((r.integrate(|z| z.powi(5)) - 1.0 / 6.0).abs() <= 1e-15);
        assert!(gauss_rule(0).is_err());
    }

    #[test]
    fn gauss_exactness() {
        for n in 1..=12 {
            let r = gauss_rule(n).unwrap();
            assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            for p in 0..2 * n {
                let exact = 1.0 / (p as f64 + 1.0);
                let got = r.integrate(|z| z.powi(p as i32));
                assert!((got - exact).abs() < 1e-13, "n={n} p={p}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn quadrature_mass_matches_analytic() {
        // Analytic mass matrices on [0, 1] for equidistant (= GLL for k <= 2) nodes.
        let m1 = [[1.0 / 3.0, 1.0 / 6.0], [1.0 / 6.0, 1.0 / 3.0]];
        let m2 = [
            [2.0 / 15.0, 1.0 / 15.0, -1.0 / 30.0],
            [1.0 / 15.0, 8.0 / 15.0, 1.0 / 15.0],
            [-1.0 / 30.0, 1.0 / 15.0, 2.0 / 15.0],
        ];
        let check = |k: usize, exact: &[&[f64]]| {
            let b = ReferenceBasis::new(k).unwrap();
            let q = gauss_rule(k + 1).unwrap();
            for i in 0..=k {
                for j in 0..=k {
                    let got = q.integrate(|z| {
                        let v = b.eval(z).unwrap();
                        v[i] * v[j]
                    });
                    assert!((got - exact[i][j]).abs() < 1e-15, "k={k} ({i},{j})");
                }
            }
        };
        check(1, &[&m1[0], &m1[1]]);
        check(2, &[&m2[0], &m2[1], &m2[2]]);
    }

    #[test]
    fn cubic_mass_matches_monomial_expansion() {
        // Independent route: expand each ℓ_j in monomials via the node polynomial
        // and integrate exactly.
        let b = ReferenceBasis::new(3).unwrap();
        let nodes = b.nodes().to_vec();
        let coeffs: Vec<Vec<f64>> = (0..4)
            .map(|j| {
                let mut poly = vec![1.0];
                let mut scale = 1.0;
                for (m, &xm) in nodes.iter().enumerate() {
                    if m == j {
                        continue;
                    }
                    scale *= nodes[j] - xm;
                    let mut next = vec![0.0; poly.len() + 1];
                    for (d, &c) in poly.iter().enumerate() {
                        next[d + 1] += c;
                        next[d] -= xm * c;
                    }
                    poly = next;
                }
                poly.iter().map(|c| c / scale).collect()
            })
            .collect();
        let q = gauss_rule(4).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let mut exact = 0.0;
                for (p, a) in coeffs[i].iter().enumerate() {
                    for (r, c) in coeffs[j].iter().enumerate() {
                        exact += a * c / (p + r + 1) as f64;
                    }
                }
                let got = q.integrate(|z| {
                    let v = b.eval(z).unwrap();
                    v[i] * v[j]
                });
                assert!((got - exact).abs() < 1e-13);
            }
        }
    }

    proptest! {
        #[test]
        fn basis_identities(k in 1usize..=8, zeta in 0.0f64..=1.0) {
            let b = ReferenceBasis::new(k).unwrap();
            let v = b.eval(zeta).unwrap();
            prop_assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let d = b.eval_deriv(zeta).unwrap();
            let scale: f64 = d.iter().map(|x| x.abs()).sum();
            prop_assert!(d.iter().sum::<f64>().abs() < 1e-12 * scale.max(1.0));
            for (m, &x) in b.nodes().iter().enumerate() {
                let at = b.eval(x).unwrap();
                for (j, &val) in at.iter().enumerate() {
                    let expect = if j == m { 1.0 } else { 0.0 };
                    prop_assert!((val - expect).abs() < 1e-13);
                }
            }
        }

        #[test]
        fn derivative_matches_finite_difference(k in 1usize..=6, zeta in 0.05f64..0.95) {
            let b = ReferenceBasis::new(k).unwrap();
            let h = 1e-6;
            let plus = b.eval(zeta + h).unwrap();
            let minus = b.eval(zeta - h).unwrap();
            let d = b.eval_deriv(zeta).unwrap();
            for j in 0..=k {
                let fd = (plus[j] - minus[j]) / (2.0 * h);
                prop_assert!((fd - d[j]).abs() < 1e-5 * (1.0 + d[j].abs()));
            }
        }
    }
}
