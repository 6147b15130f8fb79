//! Eigenvalue analysis of the semi-discrete operator `M⁻¹ (J - R) Q`.
//!
//! The dense eigensolver balances the matrix, reduces it to upper Hessenberg
//! form with Householder reflections, and runs the Francis double-shift QR
//! iteration with deflation.

use std::cmp::Ordering;
use std::fmt;

use nalgebra::{Complex, DMatrix};

use crate::assembly::GlobalPHModel;
use crate::error::{Error, Result};

/// Largest operator handled by the dense path.
pub const MAX_DENSE_DIM: usize = 4096;

/// Iteration cap per eigenvalue in the QR iteration.
const MAX_ITERATIONS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum OperatorKind {
    /// `M⁻¹ (J - R) Q`.
    #[default]
    Full,
    /// `M⁻¹ J`.
    StructureOnly,
}

impl std::str::FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(OperatorKind::Full),
            "structure-only" | "structure_only" => Ok(OperatorKind::StructureOnly),
            _ => Err(Error::InvalidParameter(format!(
                "unknown operator `{s}` (expected full or structure-only)"
            ))),
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OperatorKind::Full => "full",
            OperatorKind::StructureOnly => "structure-only",
        })
    }
}

/// Dense `M⁻¹ J`, `M⁻¹ (J - R)` or `M⁻¹ (J - R) Q`.
pub fn system_operator(model: &GlobalPHModel, include_damping: bool, include_constitutive: bool) -> Result<DMatrix<f64>> {
    let n = model.n_dof();
    if n > MAX_DENSE_DIM {
        return Err(Error::TooLarge { n, limit: MAX_DENSE_DIM });
    }
    let mut a = if include_damping { model.structure_minus_dissipation() } else { model.j.clone() };
    if include_constitutive {
        a = a.scale_columns(&model.q);
    }
    Ok(model.mass.solve_dense(&a.to_dense()))
}

pub fn operator_of_kind(model: &GlobalPHModel, kind: OperatorKind) -> Result<DMatrix<f64>> {
    match kind {
        OperatorKind::Full => system_operator(model, true, true),
        OperatorKind::StructureOnly => system_operator(model, false, false),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<Complex<f64>>,
    pub operator_kind: Option<OperatorKind>,
    pub max_real_part: f64,
    pub min_real_part: f64,
    pub spectral_radius: f64,
}

impl SpectrumResult {
    fn from_values(mut eigenvalues: Vec<Complex<f64>>) -> Self {
        sort_eigenvalues(&mut eigenvalues);
        let max_real_part = eigenvalues.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        let min_real_part = eigenvalues.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        let spectral_radius = eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Self { eigenvalues, operator_kind: None, max_real_part, min_real_part, spectral_radius }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_abs_real_part(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.re.abs()).fold(0.0, f64::max)
    }

    /// Largest distance from an eigenvalue's conjugate to the nearest eigenvalue.
    pub fn conjugate_defect(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|z| {
                let c = z.conj();
                self.eigenvalues.iter().map(|w| (w - c).norm()).fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }

    /// Eigenvalues with `|Im λ| ≤ tol`.
    pub fn real_count(&self, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|z| z.im.abs() <= tol).count()
    }

    /// Smallest `|Im λ|` among eigenvalues with `|Im λ| > tol`.
    pub fn smallest_frequency(&self, tol: f64) -> Option<f64> {
        self.eigenvalues
            .iter()
            .map(|z| z.im.abs())
            .filter(|&w| w > tol)
            .min_by(f64::total_cmp)
    }
}

fn sort_eigenvalues(v: &mut [Complex<f64>]) {
    v.sort_by(|a, b| match a.re.total_cmp(&b.re) {
        Ordering::Equal => a.im.total_cmp(&b.im),
        o => o,
    });
}

/// All eigenvalues of a real square matrix.
pub fn eigenvalues(a: &DMatrix<f64>) -> Result<SpectrumResult> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), actual: a.ncols() });
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
    }
    let mut h = a.clone();
    balance(&mut h);
    hessenberg(&mut h);
    let values = hqr(&mut h)?;
    Ok(SpectrumResult::from_values(values))
}

/// Diagonal similarity with powers of two that equalizes row and column norms.
fn balance(a: &mut DMatrix<f64>) {
    const RADIX: f64 = 2.0;
    let n = a.nrows();
    let sqrdx = RADIX * RADIX;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let s = c + r;
                let mut f = 1.0;
                let mut g = r / RADIX;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 0..n {
                        a[(i, j)] *= g;
                    }
                    for j in 0..n {
                        a[(j, i)] *= f;
                    }
                }
            }
        }
        if done {
            break;
        }
    }
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    if n < 3 {
        return;
    }
    let mut v = vec![0.0; n];
    for k in 0..n - 2 {
        let norm = (k + 1..n).map(|i| a[(i, k)] * a[(i, k)]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        for i in k + 1..n {
            v[i] = a[(i, k)];
        }
        v[k + 1] -= alpha;
        let vnorm2: f64 = (k + 1..n).map(|i| v[i] * v[i]).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // A ← (I - β v vᵀ) A
        for j in k..n {
            let s: f64 = (k + 1..n).map(|i| v[i] * a[(i, j)]).sum::<f64>() * beta;
            for i in k + 1..n {
                a[(i, j)] -= s * v[i];
            }
        }
        // A ← A (I - β v vᵀ)
        for i in 0..n {
            let s: f64 = (k + 1..n).map(|j| a[(i, j)] * v[j]).sum::<f64>() * beta;
            for j in k + 1..n {
                a[(i, j)] -= s * v[j];
            }
        }
        a[(k + 1, k)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = 0.0;
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix (destroyed).
fn hqr(a: &mut DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    let n = a.nrows();
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[(i, j)].abs();
        }
    }
    let idx = |i: isize| i as usize;
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    let (mut p, mut q, mut r) = (0.0, 0.0, 0.0);
    while nn >= 0 {
        let mut its = 0;
        loop {
            let mut l = nn;
            while l >= 1 {
                let mut s = a[(idx(l - 1), idx(l - 1))].abs() + a[(idx(l), idx(l))].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[(idx(l), idx(l - 1))].abs() + s == s {
                    a[(idx(l), idx(l - 1))] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[(idx(nn), idx(nn))];
            if l == nn {
                wr[idx(nn)] = x + t;
                wi[idx(nn)] = 0.0;
                nn -= 1;
            } else {
                let mut y = a[(idx(nn - 1), idx(nn - 1))];
                let mut w = a[(idx(nn), idx(nn - 1))] * a[(idx(nn - 1), idx(nn))];
                if l == nn - 1 {
                    p = 0.5 * (y - x);
                    q = p * p + w;
                    let mut z = q.abs().sqrt();
                    x += t;
                    let (i1, i0) = (idx(nn), idx(nn - 1));
                    if q >= 0.0 {
                        z = p + sign(z, p);
                        wr[i0] = x + z;
                        wr[i1] = x + z;
                        if z != 0.0 {
                            wr[i1] = x - w / z;
                        }
                        wi[i0] = 0.0;
                        wi[i1] = 0.0;
                    } else {
                        wr[i0] = x + p;
                        wr[i1] = x + p;
                        wi[i0] = -z;
                        wi[i1] = z;
                    }
                    nn -= 2;
                } else {
                    if its == MAX_ITERATIONS {
                        let partial = (idx(nn + 1)..n).map(|i| (wr[i], wi[i])).collect::<Vec<_>>();
                        return Err(Error::NoConvergence { n, found: partial.len(), partial });
                    }
                    if its > 0 && its % 10 == 0 {
                        // Exceptional shift.
                        t += x;
                        for i in 0..=idx(nn) {
                            a[(i, i)] -= x;
                        }
                        let s = a[(idx(nn), idx(nn - 1))].abs() + a[(idx(nn - 1), idx(nn - 2))].abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;
                    let mut m = nn - 2;
                    while m >= l {
                        let mu = idx(m);
                        let z = a[(mu, mu)];
                        let rr = x - z;
                        let ss = y - z;
                        p = (rr * ss - w) / a[(mu + 1, mu)] + a[(mu, mu + 1)];
                        q = a[(mu + 1, mu + 1)] - z - rr - ss;
                        r = a[(mu + 2, mu + 1)];
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = a[(mu, mu - 1)].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (a[(mu - 1, mu - 1)].abs() + z.abs() + a[(mu + 1, mu + 1)].abs());
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in idx(m + 2)..=idx(nn) {
                        a[(i, i - 2)] = 0.0;
                        if i != idx(m + 2) {
                            a[(i, i - 3)] = 0.0;
                        }
                    }
                    let mut k = m;
                    while k <= nn - 1 {
                        let ku = idx(k);
                        if k != m {
                            p = a[(ku, ku - 1)];
                            q = a[(ku + 1, ku - 1)];
                            r = 0.0;
                            if k + 1 != nn {
                                r = a[(ku + 2, ku - 1)];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != 0.0 {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != 0.0 {
                            if k == m {
                                if l != m {
                                    a[(ku, ku - 1)] = -a[(ku, ku - 1)];
                                }
                            } else {
                                a[(ku, ku - 1)] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            let z = r / s;
                            q /= p;
                            r /= p;
                            for j in ku..=idx(nn) {
                                p = a[(ku, j)] + q * a[(ku + 1, j)];
                                if k + 1 != nn {
                                    p += r * a[(ku + 2, j)];
                                    a[(ku + 2, j)] -= p * z;
                                }
                                a[(ku + 1, j)] -= p * y;
                                a[(ku, j)] -= p * x;
                            }
                            let mmin = if nn < k + 3 { nn } else { k + 3 };
                            for i in idx(l)..=idx(mmin) {
                                p = x * a[(i, ku)] + y * a[(i, ku + 1)];
                                if k + 1 != nn {
                                    p += z * a[(i, ku + 2)];
                                    a[(i, ku + 2)] -= p * r;
                                }
                                a[(i, ku + 1)] -= p * q;
                                a[(i, ku)] -= p;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if l + 1 >= nn {
                break;
            }
        }
    }
    Ok(wr.into_iter().zip(wi).map(|(re, im)| Complex::new(re, im)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectrumClass {
    /// `max |Re λ| ≤ tol · ρ`.
    Conservative,
    /// `max Re λ ≤ tol · ρ` and some `Re λ < 0`.
    Dissipative,
    Unstable,
}

impl fmt::Display for SpectrumClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpectrumClass::Conservative => "conservative",
            SpectrumClass::Dissipative => "dissipative",
            SpectrumClass::Unstable => "unstable",
        })
    }
}

pub const DEFAULT_CLASSIFICATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSummary {
    pub class: SpectrumClass,
    pub tol: f64,
    pub result: SpectrumResult,
}

pub fn classify(result: &SpectrumResult, tol: f64) -> SpectrumClass {
    let scale = tol * result.spectral_radius;
    if result.max_abs_real_part() <= scale {
        SpectrumClass::Conservative
    } else if result.max_real_part <= scale && result.min_real_part < 0.0 {
        SpectrumClass::Dissipative
    } else {
        SpectrumClass::Unstable
    }
}

/// Spectrum of the chosen operator and its classification.
pub fn spectrum_summary(model: &GlobalPHModel, kind: OperatorKind) -> Result<SpectrumSummary> {
    let mut result = eigenvalues(&operator_of_kind(model, kind)?)?;
    result.operator_kind = Some(kind);
    let tol = DEFAULT_CLASSIFICATION_TOL;
    Ok(SpectrumSummary { class: classify(&result, tol), tol, result })
}

impl fmt::Display for SpectrumSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.result;
        let rho = r.spectral_radius;
        writeln!(f, "classification: {}", self.class)?;
        if let Some(kind) = r.operator_kind {
            writeln!(f, "operator: {kind}")?;
        }
        writeln!(f, "eigenvalues: {}", r.len())?;
        writeln!(f, "tolerance: {:e} * spectral_radius", self.tol)?;
        writeln!(f, "spectral_radius: {rho:.16e}")?;
        writeln!(f, "max_real_part: {:.16e}", r.max_real_part)?;
        writeln!(f, "min_real_part: {:.16e}", r.min_real_part)?;
        writeln!(f, "max_abs_real_part: {:.16e}", r.max_abs_real_part())?;
        writeln!(f, "real_eigenvalues: {}", r.real_count(self.tol * rho))?;
        write!(f, "conjugate_pair_defect: {:.16e}", r.conjugate_defect())
    }
}
