//! Structure-preserving discontinuous Galerkin (DG) discretization of linear
//! one-dimensional port-Hamiltonian systems of two conservation laws.
//!
//! The continuous system on `[a, b]` reads
//!
//! ```text
//! ∂t x1 = -∂z e2,   ∂t x2 = -∂z e1,   e1 = c1 x1,   e2 = c2 x2
//! ```
//!
//! with boundary inputs on `e1` (Dirichlet-type) or `n e2` (Neumann-type).
//! Each element carries a nodal Lagrange basis; elements are interconnected
//! by a numerical flux family parameterized by `(β, τ, ξ)`. The result is an
//! explicit finite-dimensional model
//!
//! ```text
//! M Ẋ = (J - R) E + G U,   E = Q X,   Y = Gᵀ E
//! ```
//!
//! with `M = Mᵀ > 0` block diagonal, `J = -Jᵀ`, `R = Rᵀ ≥ 0`.
//!
//! Modules, bottom-up:
//! - [`mesh`]: element vertices.
//! - [`basis`]: Gauss-Lobatto-Legendre Lagrange bases and Gauss quadrature.
//! - [`flux`]: the interface flux family and its presets.
//! - [`element`]: per-element PH model.
//! - [`assembly`]: the global PH model and its structural checks.
//! - [`simulate`]: implicit midpoint integration and energy diagnostics.
//! - [`spectrum`]: dense eigenvalue analysis of the semi-discrete operator.
//! - [`scenario`]: the wave-equation benchmark and its analytic oracles.

pub mod assembly;
pub mod basis;
pub mod element;
mod error;
pub mod flux;
pub mod linalg;
pub mod mesh;
pub mod scenario;
pub mod simulate;
pub mod spectrum;

pub use assembly::{
    assemble_global, boundary_flux_rule, structure_report, BoundaryConditions, BoundaryKind,
    DofMap, Field, GlobalPHModel, StructureReport,
};
pub use basis::{gauss_rule, QuadratureRule, ReferenceBasis};
pub use element::{element_matrices, ElementModel, NeighborTraces};
pub use error::{Error, Result};
pub use flux::{interface_flux, FluxParams, FluxPreset, InterfaceTraces};
pub use mesh::Mesh1D;

pub use scenario::{exact_eigenfrequencies, exact_pulse_solution, l2_error, WaveBenchmark};
pub use simulate::{
    coenergy_transform, hamiltonian, simulate, BoundarySignals, CoenergyModel, InputSignal,
    MidpointStepper, Signal, SimulationOptions, Trajectory,
};
pub use spectrum::{
    eigenvalues, spectrum_summary, system_operator, OperatorKind, SpectrumClass, SpectrumResult,
    SpectrumSummary,
};
