//! Global port-Hamiltonian model `M Ẋ = (J - R) E + G U`, `E = Q X`.
//!
//! `J` is the block diagonal of the element structure matrices plus the
//! interface coupling; `R` the block diagonal of the element penalties minus
//! the cross-element penalty coupling; `G` maps the two boundary inputs.
//!
//! Boundaries are handled with a ghost neighbor whose flux has `τ = ξ = 0`
//! and whose `β` selects the prescribed trace: the ghost supplies `e1 = u`
//! on a Dirichlet-type side and `e2 = n u` on a Neumann-type side, with the
//! outer normal `n = -1` at `a` and `n = +1` at `b`.

use std::fmt;

use nalgebra::DMatrix;

use crate::basis::ReferenceBasis;
use crate::element::{
    element_input_vector, element_matrices_with_ends, ElementModel, EndFluxes, NeighborTraces,
};
use crate::error::{Error, Result};
use crate::flux::{interface_flux, FluxParams, InterfaceTraces};
use crate::linalg::{BlockDiagonal, SparseMatrix, TripletBuilder};
use crate::mesh::Mesh1D;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    /// `e1` prescribed.
    Dirichlet,
    /// `n e2` prescribed.
    Neumann,
}

impl std::str::FromStr for BoundaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dirichlet" | "d" => Ok(BoundaryKind::Dirichlet),
            "neumann" | "n" => Ok(BoundaryKind::Neumann),
            other => Err(Error::InvalidParameter(format!(
                "unknown boundary kind `{other}` (expected dirichlet or neumann)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    /// Outer unit normal.
    pub fn normal(self) -> f64 {
        match self {
            Side::Left => -1.0,
            Side::Right => 1.0,
        }
    }
}

/// Boundary kind at each end. Defaults to `e1` prescribed at `a` and `e2`
/// prescribed at `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundaryConditions {
    pub left: BoundaryKind,
    pub right: BoundaryKind,
}

impl Default for BoundaryConditions {
    fn default() -> Self {
        Self { left: BoundaryKind::Dirichlet, right: BoundaryKind::Neumann }
    }
}

impl BoundaryConditions {
    pub fn new(left: BoundaryKind, right: BoundaryKind) -> Self {
        Self { left, right }
    }

    pub fn kind(&self, side: Side) -> BoundaryKind {
        match side {
            Side::Left => self.left,
            Side::Right => self.right,
        }
    }
}

/// Ghost-neighbor flux at both domain ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryFluxRule {
    pub bc: BoundaryConditions,
    pub left_ghost: FluxParams,
    pub right_ghost: FluxParams,
}

pub fn boundary_flux_rule(bc: &BoundaryConditions) -> BoundaryFluxRule {
    // The ghost sits left of `a` and right of `b`. β = 0 takes e1 from the
    // left side and e2 from the right side; β = 1 the opposite.
    let left_beta = match bc.left {
        BoundaryKind::Dirichlet => 0.0,
        BoundaryKind::Neumann => 1.0,
    };
    let right_beta = match bc.right {
        BoundaryKind::Dirichlet => 1.0,
        BoundaryKind::Neumann => 0.0,
    };
    BoundaryFluxRule {
        bc: *bc,
        left_ghost: FluxParams::new(left_beta, 0.0, 0.0).expect("valid ghost flux"),
        right_ghost: FluxParams::new(right_beta, 0.0, 0.0).expect("valid ghost flux"),
    }
}

impl BoundaryFluxRule {
    pub fn ghost(&self, side: Side) -> &FluxParams {
        match side {
            Side::Left => &self.left_ghost,
            Side::Right => &self.right_ghost,
        }
    }

    /// Ghost effort traces `(e1, e2)` realizing input `u`.
    pub fn ghost_traces(&self, side: Side, u: f64) -> (f64, f64) {
        match self.bc.kind(side) {
            BoundaryKind::Dirichlet => (u, 0.0),
            BoundaryKind::Neumann => (0.0, u / side.normal()),
        }
    }

    /// `(e1*, e2*)` at the boundary given the interior traces and the input.
    pub fn flux(&self, side: Side, interior_e1: f64, interior_e2: f64, u: f64) -> (f64, f64) {
        let (g1, g2) = self.ghost_traces(side, u);
        let traces = match side {
            Side::Left => InterfaceTraces {
                e1_left: g1,
                e2_left: g2,
                e1_right: interior_e1,
                e2_right: interior_e2,
            },
            Side::Right => InterfaceTraces {
                e1_left: interior_e1,
                e2_left: interior_e2,
                e1_right: g1,
                e2_right: g2,
            },
        };
        interface_flux(self.ghost(side), &traces)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    X1,
    X2,
}

/// Element-major, field-major global numbering:
/// `[x1(elem 0), x2(elem 0), x1(elem 1), ...]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DofMap {
    pub n_elements: usize,
    pub n1: usize,
    pub n2: usize,
}

impl DofMap {
    pub fn per_element(&self) -> usize {
        self.n1 + self.n2
    }

    pub fn n_dof(&self) -> usize {
        self.n_elements * self.per_element()
    }

    pub fn index(&self, element: usize, field: Field, node: usize) -> usize {
        debug_assert!(element < self.n_elements);
        let base = element * self.per_element();
        match field {
            Field::X1 => {
                debug_assert!(node < self.n1);
                base + node
            }
            Field::X2 => {
                debug_assert!(node < self.n2);
                base + self.n1 + node
            }
        }
    }

    /// Global range of one field block of one element.
    pub fn block(&self, element: usize, field: Field) -> std::ops::Range<usize> {
        let start = self.index(element, field, 0);
        let len = match field {
            Field::X1 => self.n1,
            Field::X2 => self.n2,
        };
        start..start + len
    }
}

/// Assembled global model.
#[derive(Debug, Clone)]
pub struct GlobalPHModel {
    pub mesh: Mesh1D,
    pub phi: ReferenceBasis,
    pub psi: ReferenceBasis,
    pub params: FluxParams,
    pub bc: BoundaryConditions,
    pub c1: f64,
    pub c2: f64,
    pub dofs: DofMap,
    pub elements: Vec<ElementModel>,
    /// Block diagonal, one block per element and field.
    pub mass: BlockDiagonal,
    pub j: SparseMatrix,
    pub r: SparseMatrix,
    /// `n_dof × 2`; column 0 is the input at `a`, column 1 the input at `b`.
    pub g: SparseMatrix,
    /// Diagonal of `Q`.
    pub q: Vec<f64>,
}

fn for_outer(a: &[f64], b: &[f64], mut f: impl FnMut(usize, usize, f64)) {
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0.0 {
                f(i, j, ai * bj);
            }
        }
    }
}

/// Builds `(M, J, R, G, Q)` for the given mesh, bases, flux and boundary kinds.
pub fn assemble_global(
    mesh: &Mesh1D,
    phi: &ReferenceBasis,
    psi: &ReferenceBasis,
    params: &FluxParams,
    bc: &BoundaryConditions,
    c1: f64,
    c2: f64,
) -> Result<GlobalPHModel> {
    let n_el = mesh.num_elements();
    let dofs = DofMap { n_elements: n_el, n1: phi.len(), n2: psi.len() };
    let n = dofs.n_dof();
    let rule = boundary_flux_rule(bc);

    let elements = mesh
        .intervals()
        .enumerate()
        .map(|(e, interval)| {
            let ends = EndFluxes {
                left: if e == 0 { rule.left_ghost } else { *params },
                right: if e + 1 == n_el { rule.right_ghost } else { *params },
            };
            element_matrices_with_ends(interval, phi, psi, &ends, c1, c2)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut j = TripletBuilder::new(n, n);
    let mut r = TripletBuilder::new(n, n);
    let mut g = TripletBuilder::new(n, 2);
    let mut mass_blocks = Vec::with_capacity(2 * n_el);
    let mut q = Vec::with_capacity(n);

    for (e, el) in elements.iter().enumerate() {
        mass_blocks.push(el.m1.clone());
        mass_blocks.push(el.m2.clone());
        q.extend(el.constitutive_diag());
        for a in 0..dofs.n1 {
            for b in 0..dofs.n2 {
                j.add_skew_pair(dofs.index(e, Field::X1, a), dofs.index(e, Field::X2, b), el.p[(a, b)]);
            }
        }
        for a in 0..dofs.n1 {
            for b in 0..dofs.n1 {
                r.add(dofs.index(e, Field::X1, a), dofs.index(e, Field::X1, b), el.r1[(a, b)]);
            }
        }
        for a in 0..dofs.n2 {
            for b in 0..dofs.n2 {
                r.add(dofs.index(e, Field::X2, a), dofs.index(e, Field::X2, b), el.r2[(a, b)]);
            }
        }
    }

    // Interior interfaces: element e on the left, e + 1 on the right.
    let (phi_l, phi_r) = (phi.left_trace(), phi.right_trace());
    let (psi_l, psi_r) = (psi.left_trace(), psi.right_trace());
    let (beta, tau, xi) = (params.beta(), params.tau(), params.xi());
    for e in 0..n_el.saturating_sub(1) {
        let idx = |el, f, node| dofs.index(el, f, node);
        // x1 rows of the left element against e2 of the right element, and the
        // mirrored x2 rows of the right element against e1 of the left one.
        for_outer(&phi_r, &psi_l, |a, b, v| {
            j.add_skew_pair(idx(e, Field::X1, a), idx(e + 1, Field::X2, b), (beta - 1.0) * v)
        });
        for_outer(&phi_l, &psi_r, |a, b, v| {
            j.add_skew_pair(idx(e + 1, Field::X1, a), idx(e, Field::X2, b), beta * v)
        });
        if tau != 0.0 {
            for_outer(&phi_r, &phi_l, |a, b, v| {
                r.add_symmetric_pair(idx(e, Field::X1, a), idx(e + 1, Field::X1, b), -tau * v)
            });
        }
        if xi != 0.0 {
            for_outer(&psi_r, &psi_l, |a, b, v| {
                r.add_symmetric_pair(idx(e, Field::X2, a), idx(e + 1, Field::X2, b), -xi * v)
            });
        }
    }

    // Boundary inputs: unit input through the ghost neighbor.
    for (col, side, e) in [(0, Side::Left, 0), (1, Side::Right, n_el - 1)] {
        let el = &elements[e];
        let (g1, g2) = rule.ghost_traces(side, 1.0);
        let neighbors = match side {
            Side::Left => NeighborTraces { left_e1: g1, left_e2: g2, ..Default::default() },
            Side::Right => NeighborTraces { right_e1: g1, right_e2: g2, ..Default::default() },
        };
        let u = element_input_vector(&neighbors, &el.ends);
        let col_vals = el.input_map() * nalgebra::DVector::from_column_slice(&u);
        for (local, &v) in col_vals.iter().enumerate() {
            let global = e * dofs.per_element() + local;
            g.add(global, col, v);
        }
    }

    Ok(GlobalPHModel {
        mesh: mesh.clone(),
        phi: phi.clone(),
        psi: psi.clone(),
        params: *params,
        bc: *bc,
        c1,
        c2,
        dofs,
        elements,
        mass: BlockDiagonal::new(mass_blocks)?,
        j: j.build(),
        r: r.build(),
        g: g.build(),
        q,
    })
}

impl GlobalPHModel {
    pub fn n_dof(&self) -> usize {
        self.dofs.n_dof()
    }

    pub fn n_elements(&self) -> usize {
        self.dofs.n_elements
    }

    pub fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() == self.n_dof() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.n_dof(), actual: x.len() })
        }
    }

    /// `E = Q X`.
    pub fn efforts(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.q).map(|(x, q)| x * q).collect()
    }

    /// `Y = Gᵀ E`.
    pub fn output(&self, efforts: &[f64]) -> [f64; 2] {
        let y = self.g.transpose_mul_vec(efforts);
        [y[0], y[1]]
    }

    /// `Eᵀ R E`.
    pub fn dissipated_power(&self, efforts: &[f64]) -> f64 {
        let re = self.r.mul_vec(efforts);
        efforts.iter().zip(&re).map(|(a, b)| a * b).sum()
    }

    /// `(J - R) Q X + G U`, the right-hand side of `M Ẋ`.
    pub fn rhs(&self, x: &[f64], u: [f64; 2]) -> Vec<f64> {
        let e = self.efforts(x);
        let je = self.j.mul_vec(&e);
        let re = self.r.mul_vec(&e);
        let gu = self.g.mul_vec(&u);
        (0..x.len()).map(|i| je[i] - re[i] + gu[i]).collect()
    }

    /// `Ẋ = M⁻¹ ((J - R) Q X + G U)`.
    pub fn state_derivative(&self, x: &[f64], u: [f64; 2]) -> Vec<f64> {
        self.mass.solve(&self.rhs(x, u))
    }

    /// `J - R` as one sparse matrix.
    pub fn structure_minus_dissipation(&self) -> SparseMatrix {
        self.j.add_scaled(-1.0, &self.r)
    }

    /// `½ Xᵀ Q M X`.
    pub fn hamiltonian(&self, x: &[f64]) -> f64 {
        let mx = self.mass.mul_vec(x);
        0.5 * x.iter().zip(&mx).zip(&self.q).map(|((a, b), q)| q * a * b).sum::<f64>()
    }

    /// Coefficients of `(x1, x2)` on element `e`.
    pub fn element_coefficients<'a>(&self, x: &'a [f64], e: usize) -> (&'a [f64], &'a [f64]) {
        (&x[self.dofs.block(e, Field::X1)], &x[self.dofs.block(e, Field::X2)])
    }

    pub fn is_conservative(&self) -> bool {
        self.params.is_conservative()
    }

    /// State fields `(x1, x2)` on element `e` at reference coordinate `ζ`.
    pub fn evaluate(&self, x: &[f64], e: usize, zeta: f64) -> Result<(f64, f64)> {
        let (c1, c2) = self.element_coefficients(x, e);
        Ok((self.phi.interpolate(c1, zeta)?, self.psi.interpolate(c2, zeta)?))
    }
}

/// Measured structural properties of an assembled model.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureReport {
    pub n_dof: usize,
    /// `max |J + Jᵀ|`.
    pub skew_defect: f64,
    /// `max |R - Rᵀ|`.
    pub r_symmetry_defect: f64,
    /// Spectral norm of `R`.
    pub r_norm: f64,
    pub r_min_eigenvalue: f64,
    pub r_rank: usize,
    pub r_is_zero: bool,
    pub m_min_eigenvalue: f64,
}

impl StructureReport {
    pub fn skew_ok(&self) -> bool {
        self.skew_defect == 0.0
    }

    pub fn r_symmetric_ok(&self) -> bool {
        self.r_symmetry_defect <= 1e-13 * self.r_norm
    }

    pub fn r_psd_ok(&self) -> bool {
        self.r_min_eigenvalue >= -1e-13 * self.r_norm
    }

    pub fn m_spd_ok(&self) -> bool {
        self.m_min_eigenvalue > 0.0
    }

    pub fn passed(&self) -> bool {
        self.skew_ok() && self.r_symmetric_ok() && self.r_psd_ok() && self.m_spd_ok()
    }
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "pass" } else { "FAIL" };
        writeln!(f, "n_dof: {}", self.n_dof)?;
        writeln!(f, "[{}] max|J + J^T| = {:e} (required: 0)", mark(self.skew_ok()), self.skew_defect)?;
        writeln!(
            f,
            "[{}] max|R - R^T| = {:e} (required: <= 1e-13 * |R| = {:e})",
            mark(self.r_symmetric_ok()),
            self.r_symmetry_defect,
            1e-13 * self.r_norm
        )?;
        if self.r_is_zero {
            writeln!(f, "[{}] R ≡ 0 (conservative)", mark(true))?;
        } else {
            writeln!(
                f,
                "[{}] min eig(R) = {:e} (required: >= -1e-13 * |R| = {:e}), rank(R) = {}",
                mark(self.r_psd_ok()),
                self.r_min_eigenvalue,
                -1e-13 * self.r_norm,
                self.r_rank
            )?;
        }
        write!(
            f,
            "[{}] min eig(M) = {:e} (required: > 0)",
            mark(self.m_spd_ok()),
            self.m_min_eigenvalue
        )
    }
}

/// Groups indices that are connected through nonzeros of a symmetric pattern.
fn connected_components(a: &SparseMatrix) -> Vec<Vec<usize>> {
    let n = a.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let mut touched = vec![false; n];
    for (r, c, _) in a.triplets() {
        touched[r] = true;
        touched[c] = true;
        let (ra, rb) = (find(&mut parent, r), find(&mut parent, c));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in (0..n).filter(|&i| touched[i]) {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Eigenvalues of a symmetric sparse matrix, computed per connected block.
/// Rows without entries contribute zero eigenvalues that are not listed.
pub(crate) fn sparse_symmetric_eigenvalues(a: &SparseMatrix) -> Vec<f64> {
    let mut out = Vec::new();
    for comp in connected_components(a) {
        let dense = DMatrix::from_fn(comp.len(), comp.len(), |i, j| a.get(comp[i], comp[j]));
        let sym = (&dense + dense.transpose()) * 0.5;
        out.extend(sym.symmetric_eigenvalues().iter().copied());
    }
    out
}

pub fn structure_report(model: &GlobalPHModel) -> StructureReport {
    let r_eigs = sparse_symmetric_eigenvalues(&model.r);
    let r_norm = r_eigs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let r_min = r_eigs.iter().copied().fold(0.0f64, f64::min);
    let rank_tol = 1e-12 * r_norm.max(f64::MIN_POSITIVE);
    StructureReport {
        n_dof: model.n_dof(),
        skew_defect: model.j.skew_defect(),
        r_symmetry_defect: model.r.symmetry_defect(),
        r_norm,
        r_min_eigenvalue: r_min,
        r_rank: r_eigs.iter().filter(|v| v.abs() > rank_tol).count(),
        r_is_zero: model.r.nnz() == 0,
        m_min_eigenvalue: model.mass.min_eigenvalue(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;
    use proptest::prelude::*;

    fn build(n: usize, k: usize, params: FluxParams, bc: BoundaryConditions) -> GlobalPHModel {
        let mesh = Mesh1D::uniform(0.0, 1.0, n).unwrap();
        let basis = ReferenceBasis::new(k).unwrap();
        assemble_global(&mesh, &basis, &basis, &params, &bc, 1.0, 1.0).unwrap()
    }

    #[test]
    fn benchmark_dimensions() {
        let m = build(50, 1, FluxParams::central(), BoundaryConditions::default());
        assert_eq!(m.n_dof(), 200);
        let x1_count = (0..50).map(|e| m.dofs.block(e, Field::X1).len()).sum::<usize>();
        assert_eq!(x1_count, 100);
        assert_eq!(m.r.nnz(), 0);
        assert_eq!(m.j.skew_defect(), 0.0);
    }

    #[test]
    fn boundary_flux_examples() {
        let bc = BoundaryConditions::default();
        let rule = boundary_flux_rule(&bc);
        assert_eq!(rule.flux(Side::Left, 0.3, -0.7, 2.0), (2.0, -0.7));
        assert_eq!(rule.flux(Side::Right, 0.3, -0.7, 2.0), (0.3, 2.0));
        assert_eq!(rule.flux(Side::Left, 0.0, 0.0, 0.0), (0.0, 0.0));

        let flipped = boundary_flux_rule(&BoundaryConditions::new(BoundaryKind::Neumann, BoundaryKind::Dirichlet));
        // n e2 = u with n = -1 at the left end.
        assert_eq!(flipped.flux(Side::Left, 0.3, -0.7, 2.0), (0.3, -2.0));
        assert_eq!(flipped.flux(Side::Right, 0.3, -0.7, 2.0), (2.0, -0.7));
    }

    #[test]
    fn input_map_selects_boundary_nodes() {
        let cases = [
            (BoundaryKind::Dirichlet, BoundaryKind::Neumann),
            (BoundaryKind::Neumann, BoundaryKind::Dirichlet),
            (BoundaryKind::Dirichlet, BoundaryKind::Dirichlet),
            (BoundaryKind::Neumann, BoundaryKind::Neumann),
        ];
        for (l, r) in cases {
            let m = build(4, 2, FluxParams::central(), BoundaryConditions::new(l, r));
            let d = m.dofs;
            let g = m.g.to_dense();
            assert_eq!(m.g.nnz(), 2);
            let (row0, v0) = match l {
                BoundaryKind::Dirichlet => (d.index(0, Field::X2, 0), 1.0),
                BoundaryKind::Neumann => (d.index(0, Field::X1, 0), -1.0),
            };
            let (row1, v1) = match r {
                BoundaryKind::Dirichlet => (d.index(3, Field::X2, 2), -1.0),
                BoundaryKind::Neumann => (d.index(3, Field::X1, 2), -1.0),
            };
            assert_eq!(g[(row0, 0)], v0);
            assert_eq!(g[(row1, 1)], v1);
        }
    }

    #[test]
    fn single_element_equals_element_model() {
        let bc = BoundaryConditions::default();
        let rule = boundary_flux_rule(&bc);
        let m = build(1, 2, FluxParams::new(0.3, 0.4, 0.2).unwrap(), bc);
        let basis = ReferenceBasis::new(2).unwrap();
        let el = element_matrices_with_ends(
            (0.0, 1.0),
            &basis,
            &basis,
            &EndFluxes { left: rule.left_ghost, right: rule.right_ghost },
            1.0,
            1.0,
        )
        .unwrap();
        assert_eq!(m.j.to_dense(), el.structure());
        assert_eq!(m.r.to_dense(), el.dissipation());
        assert_eq!(m.mass.to_sparse().to_dense(), el.mass());
        // With τ = ξ = 0 at both ghost ends the flux parameters play no role.
        assert_eq!(m.r.nnz(), 0);
    }

    #[test]
    fn conservative_r_is_zero_for_any_beta() {
        for beta in [0.0, 0.25, 0.5, 1.0] {
            let m = build(7, 2, FluxParams::new(beta, 0.0, 0.0).unwrap(), BoundaryConditions::default());
            assert_eq!(m.r.nnz(), 0);
            let rep = structure_report(&m);
            assert!(rep.r_is_zero && rep.passed());
        }
    }

    #[test]
    fn damped_rank_counts_interface_dyads() {
        let n = 50;
        let m = build(n, 1, FluxParams::new(0.5, 0.5, 0.5).unwrap(), BoundaryConditions::default());
        let rep = structure_report(&m);
        assert!(rep.passed(), "{rep}");
        // One τ and one ξ dyad per interior interface.
        assert_eq!(rep.r_rank, 2 * (n - 1));
        let only_tau = build(n, 1, FluxParams::new(0.5, 0.5, 0.0).unwrap(), BoundaryConditions::default());
        assert_eq!(structure_report(&only_tau).r_rank, n - 1);
    }

    #[test]
    fn mass_min_eigenvalue_linear() {
        // Each linear block (h/6)[[2,1],[1,2]] has eigenvalues h/6 and h/2.
        let m = build(50, 1, FluxParams::central(), BoundaryConditions::default());
        let h = 0.02;
        assert!((m.mass.min_eigenvalue() - h / 6.0).abs() < 1e-15);
    }

    #[test]
    fn hamiltonian_is_sum_of_element_energies() {
        let m = build(5, 2, FluxParams::central(), BoundaryConditions::default());
        let x: Vec<f64> = (0..m.n_dof()).map(|i| ((i * 7 % 11) as f64 - 5.0) / 3.0).collect();
        let total: f64 = (0..5)
            .map(|e| {
                let (x1, x2) = m.element_coefficients(&x, e);
                m.elements[e].hamiltonian(x1, x2).unwrap()
            })
            .sum();
        assert!((total - m.hamiltonian(&x)).abs() <= 1e-13 * total.abs());
    }

    proptest! {
        #[test]
        fn global_power_balance(
            n in 1usize..8, k1 in 1usize..4, k2 in 1usize..4,
            beta in 0.0f64..=1.0, tau in 0.0f64..1.0, xi in 0.0f64..1.0,
            c1 in 0.2f64..3.0, c2 in 0.2f64..3.0,
            left_d in any::<bool>(), right_d in any::<bool>(),
            vals in proptest::collection::vec(-1.0f64..1.0, 64),
        ) {
            let kind = |d| if d { BoundaryKind::Dirichlet } else { BoundaryKind::Neumann };
            let mesh = Mesh1D::uniform(0.0, 2.0, n).unwrap();
            let phi = ReferenceBasis::new(k1).unwrap();
            let psi = ReferenceBasis::new(k2).unwrap();
            let params = FluxParams::new(beta, tau, xi).unwrap();
            let bc = BoundaryConditions::new(kind(left_d), kind(right_d));
            let m = assemble_global(&mesh, &phi, &psi, &params, &bc, c1, c2).unwrap();
            prop_assert_eq!(m.j.skew_defect(), 0.0);
            prop_assert_eq!(m.r.symmetry_defect(), 0.0);
            let x: Vec<f64> = vals.iter().cycle().take(m.n_dof()).copied().collect();
            let u = [vals[0], vals[1]];
            let xdot = m.state_derivative(&x, u);
            let e = m.efforts(&x);
            let mxdot = m.mass.mul_vec(&xdot);
            let hdot: f64 = e.iter().zip(&mxdot).map(|(a, b)| a * b).sum();
            let y = m.output(&e);
            let expect = y[0] * u[0] + y[1] * u[1] - m.dissipated_power(&e);
            let scale = e.iter().map(|v| v.abs()).sum::<f64>().powi(2).max(1.0)
                * (1.0 + tau + xi + m.j.max_abs());
            prop_assert!((hdot - expect).abs() <= 1e-12 * scale, "{} vs {}", hdot, expect);
        }

        #[test]
        fn lossless_interconnection(n in 1usize..10, k in 1usize..4, beta in 0.0f64..=1.0,
                                    vals in proptest::collection::vec(-1.0f64..1.0, 40)) {
            let m = build(n, k, FluxParams::new(beta, 0.0, 0.0).unwrap(), BoundaryConditions::default());
            let e = DVector::from_iterator(m.n_dof(), vals.iter().cycle().take(m.n_dof()).copied());
            let je = m.j.mul_vec(e.as_slice());
            let p: f64 = e.iter().zip(&je).map(|(a, b)| a * b).sum();
            prop_assert!(p.abs() < 1e-12 * (1.0 + e.norm_squared() * m.j.max_abs()));
        }
    }
}
