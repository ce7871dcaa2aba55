//! Small linear rational-expectations systems
//!
//! A system is written as
//!
//! ```text
//! (X_{t+1}, E_t P_{t+1})' = A (X_t, P_t)' + B u_t + Γ ε_{t+1}
//! ```
//!
//! where `X` holds the `n` predetermined variables and `P` the `m`
//! non-predetermined (jump) variables. Determinacy is decided by counting the
//! eigenvalues of `A` outside the unit circle against `m`.
//!
//! Blanchard and Kahn's counting rule is applied as: unique bounded solution
//! when the number of unstable roots equals `m`, no bounded solution when it
//! exceeds `m`, and a continuum of solutions when it falls short of `m`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalues whose modulus is within this distance of 1 are treated as unit roots.
pub const DEFAULT_UNIT_TOL: f64 = 1e-9;

/// Singular values below `RANK_RTOL * σ_max` count as zero.
pub(crate) const RANK_RTOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearRESystem {
    transition: DMatrix<f64>,
    impact: DMatrix<f64>,
    shock_loading: DMatrix<f64>,
    n_predetermined: usize,
    m_nonpredetermined: usize,
}

impl LinearRESystem {
    /// Builds a system, checking shapes, the variable partition and finiteness.
    pub fn new(
        transition: DMatrix<f64>,
        impact: DMatrix<f64>,
        shock_loading: DMatrix<f64>,
        n_predetermined: usize,
        m_nonpredetermined: usize,
    ) -> Result<Self> {
        let dim = transition.nrows();
        if !transition.is_square() {
            return Err(Error::InvalidSystem(format!(
                "transition must be square, got {}x{}",
                transition.nrows(),
                transition.ncols()
            )));
        }
        if dim == 0 {
            return Err(Error::InvalidSystem(
                "transition must be at least 1x1".into(),
            ));
        }
        if n_predetermined + m_nonpredetermined != dim {
            return Err(Error::InvalidSystem(format!(
                "partition {n_predetermined}+{m_nonpredetermined} does not match dimension {dim}"
            )));
        }
        if impact.nrows() != dim {
            return Err(Error::InvalidSystem(format!(
                "impact has {} rows, transition has {dim}",
                impact.nrows()
            )));
        }
        if shock_loading.nrows() != dim {
            return Err(Error::InvalidSystem(format!(
                "shock loading has {} rows, transition has {dim}",
                shock_loading.nrows()
            )));
        }
        let all_finite = transition
            .iter()
            .chain(impact.iter())
            .chain(shock_loading.iter())
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidSystem("non-finite matrix entry".into()));
        }
        Ok(Self {
            transition,
            impact,
            shock_loading,
            n_predetermined,
            m_nonpredetermined,
        })
    }

    /// Convenience constructor from row-major slices.
    pub fn from_rows(
        transition: &[&[f64]],
        impact: &[&[f64]],
        shock_loading: &[&[f64]],
        n_predetermined: usize,
        m_nonpredetermined: usize,
    ) -> Result<Self> {
        Self::new(
            dmatrix_from_rows(transition)?,
            dmatrix_from_rows(impact)?,
            dmatrix_from_rows(shock_loading)?,
            n_predetermined,
            m_nonpredetermined,
        )
    }

    pub fn transition(&self) -> &DMatrix<f64> {
        &self.transition
    }

    pub fn impact(&self) -> &DMatrix<f64> {
        &self.impact
    }

    pub fn shock_loading(&self) -> &DMatrix<f64> {
        &self.shock_loading
    }

    pub fn n_predetermined(&self) -> usize {
        self.n_predetermined
    }

    pub fn m_nonpredetermined(&self) -> usize {
        self.m_nonpredetermined
    }

    pub fn dim(&self) -> usize {
        self.transition.nrows()
    }

    /// Same matrices, different predetermined / jump split.
    pub fn with_partition(
        &self,
        n_predetermined: usize,
        m_nonpredetermined: usize,
    ) -> Result<Self> {
        Self::new(
            self.transition.clone(),
            self.impact.clone(),
            self.shock_loading.clone(),
            n_predetermined,
            m_nonpredetermined,
        )
    }
}

fn dmatrix_from_rows(rows: &[&[f64]]) -> Result<DMatrix<f64>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::InvalidSystem("ragged matrix rows".into()));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenReport {
    pub eigenvalues: Vec<Complex64>,
    pub n_stable: usize,
    pub n_unstable: usize,
    pub n_unit: usize,
}

impl EigenReport {
    fn from_eigenvalues(eigenvalues: Vec<Complex64>, unit_tol: f64) -> Self {
        let (mut n_stable, mut n_unstable, mut n_unit) = (0, 0, 0);
        for ev in &eigenvalues {
            let modulus = ev.norm();
            if (modulus - 1.0).abs() <= unit_tol {
                n_unit += 1;
            } else if modulus < 1.0 {
                n_stable += 1;
            } else {
                n_unstable += 1;
            }
        }
        Self {
            eigenvalues,
            n_stable,
            n_unstable,
            n_unit,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|e| e.norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeterminacyClass {
    Determinate,
    Indeterminate,
    NoBoundedSolution,
    /// At least one root sits on the unit circle; no verdict is given.
    BoundaryCase,
}

impl DeterminacyClass {
    pub fn as_str(self) -> &'static str {
        match self {
            DeterminacyClass::Determinate => "determinate",
            DeterminacyClass::Indeterminate => "indeterminate",
            DeterminacyClass::NoBoundedSolution => "no_bounded_solution",
            DeterminacyClass::BoundaryCase => "boundary",
        }
    }
}

impl std::fmt::Display for DeterminacyClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Eigenvalues of the transition matrix with stable / unstable / unit counts.
///
/// The matrix is first split into its block upper-triangular structure; 1x1
/// blocks contribute their diagonal entry exactly, 2x2 blocks use the closed
/// form, larger blocks go through a real Schur decomposition.
pub fn eigenvalues(system: &LinearRESystem, unit_tol: f64) -> Result<EigenReport> {
    if !(unit_tol > 0.0 && unit_tol.is_finite()) {
        return Err(Error::InvalidSystem(format!(
            "unit_tol must be positive, got {unit_tol}"
        )));
    }
    let spectrum = matrix_eigenvalues(system.transition())?;
    Ok(EigenReport::from_eigenvalues(spectrum, unit_tol))
}

pub(crate) fn matrix_eigenvalues(a: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    if !a.is_square() || a.nrows() == 0 {
        return Err(Error::InvalidSystem(
            "eigenvalues need a non-empty square matrix".into(),
        ));
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidSystem("non-finite matrix entry".into()));
    }
    let mut out = Vec::with_capacity(a.nrows());
    for (start, end) in diagonal_blocks(a) {
        let block = a
            .view((start, start), (end - start, end - start))
            .into_owned();
        match block.nrows() {
            1 => out.push(Complex64::new(block[(0, 0)], 0.0)),
            2 => {
                let (l1, l2) = eig2(block[(0, 0)], block[(0, 1)], block[(1, 0)], block[(1, 1)]);
                out.push(l1);
                out.push(l2);
            }
            _ => {
                let evs = block.complex_eigenvalues();
                out.extend(evs.iter().copied());
            }
        }
    }
    Ok(out)
}

/// Splits `[0, n)` into the diagonal blocks of a block upper-triangular matrix.
fn diagonal_blocks(a: &DMatrix<f64>) -> Vec<(usize, usize)> {
    let n = a.nrows();
    let mut blocks = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n {
            let lower_left_zero = (end..n).all(|i| (start..end).all(|j| a[(i, j)] == 0.0));
            if lower_left_zero {
                break;
            }
            end += 1;
        }
        blocks.push((start, end));
        start = end;
    }
    blocks
}

fn eig2(a: f64, b: f64, c: f64, d: f64) -> (Complex64, Complex64) {
    let half_trace = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let disc = half_diff * half_diff + b * c;
    if disc >= 0.0 {
        let root = disc.sqrt();
        // Avoid cancellation: pick the larger-magnitude root first.
        let big = if half_trace >= 0.0 {
            half_trace + root
        } else {
            half_trace - root
        };
        let det = a * d - b * c;
        let small = if big != 0.0 {
            det / big
        } else {
            half_trace - root
        };
        (Complex64::new(big, 0.0), Complex64::new(small, 0.0))
    } else {
        let im = (-disc).sqrt();
        (
            Complex64::new(half_trace, im),
            Complex64::new(half_trace, -im),
        )
    }
}

/// Rank of the Kalman controllability matrix `[B, AB, ..., A^{N-1}B]`.
pub fn controllability_rank(transition: &DMatrix<f64>, impact: &DMatrix<f64>) -> Result<usize> {
    if !transition.is_square() || transition.nrows() == 0 {
        return Err(Error::InvalidSystem(
            "transition must be a non-empty square matrix".into(),
        ));
    }
    if impact.nrows() != transition.nrows() {
        return Err(Error::InvalidSystem(format!(
            "impact has {} rows, transition has {}",
            impact.nrows(),
            transition.nrows()
        )));
    }
    let n = transition.nrows();
    let k = impact.ncols();
    if k == 0 {
        return Ok(0);
    }
    let mut ctrb = DMatrix::<f64>::zeros(n, n * k);
    let mut block = impact.clone();
    for p in 0..n {
        ctrb.view_mut((0, p * k), (n, k)).copy_from(&block);
        block = transition * &block;
    }
    Ok(numerical_rank(&ctrb))
}

pub(crate) fn numerical_rank<T>(m: &DMatrix<T>) -> usize
where
    T: nalgebra::ComplexField<RealField = f64>,
{
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_RTOL * smax).count()
}

/// True iff every eigenvalue with modulus ≥ 1 is controllable (PBH test).
pub fn is_stabilizable(system: &LinearRESystem) -> Result<bool> {
    let a = system.transition();
    let b = system.impact();
    let n = system.dim();
    let spectrum = matrix_eigenvalues(a)?;
    for lambda in spectrum {
        if lambda.norm() < 1.0 - DEFAULT_UNIT_TOL {
            continue;
        }
        let pbh = DMatrix::<Complex64>::from_fn(n, n + b.ncols(), |i, j| {
            if j < n {
                let diag = if i == j {
                    lambda
                } else {
                    Complex64::new(0.0, 0.0)
                };
                Complex64::new(a[(i, j)], 0.0) - diag
            } else {
                Complex64::new(b[(i, j - n)], 0.0)
            }
        });
        if numerical_rank(&pbh) < n {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Blanchard-Kahn verdict from the number of unstable roots and jump variables.
pub fn classify_bk(report: &EigenReport, m_nonpredetermined: usize) -> Result<DeterminacyClass> {
    let dim = report.dim();
    if m_nonpredetermined > dim {
        return Err(Error::InvalidSystem(format!(
            "{m_nonpredetermined} jump variables exceed system dimension {dim}"
        )));
    }
    if report.n_stable + report.n_unstable + report.n_unit != dim {
        return Err(Error::InvalidSystem(
            "eigen report counts do not add up".into(),
        ));
    }
    use std::cmp::Ordering::*;
    Ok(if report.n_unit > 0 {
        DeterminacyClass::BoundaryCase
    } else {
        match report.n_unstable.cmp(&m_nonpredetermined) {
            Equal => DeterminacyClass::Determinate,
            Greater => DeterminacyClass::NoBoundedSolution,
            Less => DeterminacyClass::Indeterminate,
        }
    })
}

/// Classifies a system using its own partition.
pub fn classify_system(system: &LinearRESystem, unit_tol: f64) -> Result<DeterminacyClass> {
    let report = eigenvalues(system, unit_tol)?;
    classify_bk(&report, system.m_nonpredetermined())
}
