//! SLH triples (S, L, H) for linear quantum optical networks.
//!
//! The coupling vector is L = C- a + C+ a# and the Hamiltonian is the
//! quadratic form with a particle-conserving block Ω- (Hermitian) and a
//! squeezing block Ω+ (symmetric). `canonical_hamiltonian` reduces an
//! arbitrary quadratic coefficient matrix over (a; a#) to that normal form,
//! discarding the scalar trace term produced by reordering.

use ndarray::{concatenate, Axis};

use crate::doubled::DoubledMatrix;
use crate::error::{Error, Result};
use crate::linalg::{
    adjoint, hermiticity_defect, hermitize, max_abs, scale, scale_re, split_blocks, symmetrize,
    symmetry_defect, transpose, unitarity_defect, zeros, C64, CMat,
};

/// Structural inputs (hermiticity, symmetry, unitarity) are canonicalized when
/// they hold within this absolute tolerance and rejected beyond it.
pub const STRUCTURE_TOL: f64 = 1e-10;

/// Quadratic Hamiltonian in normal form: Ω- Hermitian, Ω+ symmetric, both n x n.
#[derive(Debug, Clone)]
pub struct HamiltonianSpec {
    omega_minus: CMat,
    omega_plus: CMat,
}

impl HamiltonianSpec {
    pub fn new(omega_minus: CMat, omega_plus: CMat) -> Result<Self> {
        let n = omega_minus.nrows();
        if omega_minus.ncols() != n || omega_plus.dim() != (n, n) {
            return Err(Error::Dimension(format!(
                "hamiltonian blocks must be square and equally sized, got {}x{} and {}x{}",
                omega_minus.nrows(),
                omega_minus.ncols(),
                omega_plus.nrows(),
                omega_plus.ncols()
            )));
        }
        if n == 0 {
            return Err(Error::Dimension("hamiltonian needs at least one mode".into()));
        }
        let hd = hermiticity_defect(&omega_minus);
        if hd > STRUCTURE_TOL {
            return Err(Error::Validation(format!(
                "omega_minus is not Hermitian (defect {hd:.3e})"
            )));
        }
        let sd = symmetry_defect(&omega_plus);
        if sd > STRUCTURE_TOL {
            return Err(Error::Validation(format!(
                "omega_plus is not symmetric (defect {sd:.3e})"
            )));
        }
        Ok(HamiltonianSpec {
            omega_minus: hermitize(&omega_minus),
            omega_plus: symmetrize(&omega_plus),
        })
    }

    pub fn zero(n: usize) -> Self {
        HamiltonianSpec { omega_minus: zeros(n, n), omega_plus: zeros(n, n) }
    }

    pub fn n_modes(&self) -> usize {
        self.omega_minus.nrows()
    }

    pub fn omega_minus(&self) -> &CMat {
        &self.omega_minus
    }

    pub fn omega_plus(&self) -> &CMat {
        &self.omega_plus
    }

    pub fn add(&self, rhs: &HamiltonianSpec) -> Result<Self> {
        if self.n_modes() != rhs.n_modes() {
            return Err(Error::Dimension("hamiltonian sum mode mismatch".into()));
        }
        HamiltonianSpec::new(
            &self.omega_minus + &rhs.omega_minus,
            &self.omega_plus + &rhs.omega_plus,
        )
    }

    pub fn sub(&self, rhs: &HamiltonianSpec) -> Result<Self> {
        if self.n_modes() != rhs.n_modes() {
            return Err(Error::Dimension("hamiltonian difference mode mismatch".into()));
        }
        HamiltonianSpec::new(
            &self.omega_minus - &rhs.omega_minus,
            &self.omega_plus - &rhs.omega_plus,
        )
    }

    /// Real scaling preserves both structure blocks.
    pub fn scale_re(&self, k: f64) -> Self {
        HamiltonianSpec {
            omega_minus: scale_re(&self.omega_minus, k),
            omega_plus: scale_re(&self.omega_plus, k),
        }
    }

    /// Drift contribution in doubled form: Δ(-iΩ-, -iΩ+).
    pub fn doubled_drift(&self) -> CMat {
        let mi = C64::new(0.0, -1.0);
        DoubledMatrix::new(scale(&self.omega_minus, mi), scale(&self.omega_plus, mi))
            .expect("blocks are equally sized by construction")
            .to_full()
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.omega_minus).max(max_abs(&self.omega_plus))
    }
}

/// Reduce a quadratic coefficient matrix N over (a; a#) to normal form:
/// Ω- = herm(N11 + N22ᵀ), Ω+ = N12 + N12ᵀ. N must be Hermitian within
/// tolerance; the reordering constant tr(N22) is dropped.
pub fn canonical_hamiltonian(n_coef: &CMat) -> Result<HamiltonianSpec> {
    if n_coef.nrows() != n_coef.ncols() {
        return Err(Error::Dimension("quadratic coefficient matrix must be square".into()));
    }
    let hd = hermiticity_defect(n_coef);
    if hd > STRUCTURE_TOL {
        return Err(Error::Validation(format!(
            "quadratic coefficient matrix is not Hermitian (defect {hd:.3e})"
        )));
    }
    let n = hermitize(n_coef);
    let (n11, n12, _n21, n22) = split_blocks(&n)?;
    let omega_minus = hermitize(&(&n11 + &transpose(&n22)));
    let omega_plus = &n12 + &transpose(&n12);
    HamiltonianSpec::new(omega_minus, omega_plus)
}

/// Hamiltonian of the operator Im(X† M X) over X = (a; a#):
/// canonical form of (M - M†)/(2i).
pub fn imag_quadratic(m_coef: &CMat) -> Result<HamiltonianSpec> {
    if m_coef.nrows() != m_coef.ncols() {
        return Err(Error::Dimension("quadratic coefficient matrix must be square".into()));
    }
    let g = scale(&(m_coef - &adjoint(m_coef)), C64::new(0.0, -0.5));
    canonical_hamiltonian(&g)
}

/// An open quantum system in SLH form with m channels and n modes.
#[derive(Debug, Clone)]
pub struct SlhTriple {
    s: CMat,
    c_minus: CMat,
    c_plus: CMat,
    hamiltonian: HamiltonianSpec,
}

impl SlhTriple {
    pub fn new(s: CMat, c_minus: CMat, c_plus: CMat, hamiltonian: HamiltonianSpec) -> Result<Self> {
        let m = s.nrows();
        if s.ncols() != m || m == 0 {
            return Err(Error::Dimension(format!(
                "scattering matrix must be square and nonempty, got {}x{}",
                s.nrows(),
                s.ncols()
            )));
        }
        let ud = unitarity_defect(&s);
        if ud > STRUCTURE_TOL {
            return Err(Error::Validation(format!(
                "scattering matrix is not unitary (defect {ud:.3e})"
            )));
        }
        let n = hamiltonian.n_modes();
        if c_minus.dim() != (m, n) || c_plus.dim() != (m, n) {
            return Err(Error::Dimension(format!(
                "coupling blocks must be {m}x{n}, got {}x{} and {}x{}",
                c_minus.nrows(),
                c_minus.ncols(),
                c_plus.nrows(),
                c_plus.ncols()
            )));
        }
        Ok(SlhTriple { s, c_minus, c_plus, hamiltonian })
    }

    /// Passive system with identity scattering, zero coupling, zero Hamiltonian.
    pub fn identity(n_modes: usize, n_channels: usize) -> Self {
        SlhTriple {
            s: crate::linalg::identity(n_channels),
            c_minus: zeros(n_channels, n_modes),
            c_plus: zeros(n_channels, n_modes),
            hamiltonian: HamiltonianSpec::zero(n_modes),
        }
    }

    pub fn s(&self) -> &CMat {
        &self.s
    }

    pub fn c_minus(&self) -> &CMat {
        &self.c_minus
    }

    pub fn c_plus(&self) -> &CMat {
        &self.c_plus
    }

    pub fn hamiltonian(&self) -> &HamiltonianSpec {
        &self.hamiltonian
    }

    pub fn n_channels(&self) -> usize {
        self.s.nrows()
    }

    pub fn n_modes(&self) -> usize {
        self.hamiltonian.n_modes()
    }

    /// Coupling in doubled form Δ(C-, C+), 2m x 2n.
    pub fn coupling(&self) -> DoubledMatrix {
        DoubledMatrix::new(self.c_minus.clone(), self.c_plus.clone())
            .expect("coupling blocks validated at construction")
    }

    /// Single-height coefficient [C- C+] of L over (a; a#), m x 2n.
    pub fn coupling_single(&self) -> CMat {
        concatenate![Axis(1), self.c_minus.view(), self.c_plus.view()]
    }
}

/// Series connection feeding g1's output into g2's input (both on the same
/// mode space): S = S2 S1, L = L2 + S2 L1, H = H1 + H2 + Im(L2† S2 L1).
pub fn series_product(g2: &SlhTriple, g1: &SlhTriple) -> Result<SlhTriple> {
    if g2.n_channels() != g1.n_channels() {
        return Err(Error::Dimension(format!(
            "series product channel mismatch: {} vs {}",
            g2.n_channels(),
            g1.n_channels()
        )));
    }
    if g2.n_modes() != g1.n_modes() {
        return Err(Error::Dimension(format!(
            "series product mode mismatch: {} vs {}",
            g2.n_modes(),
            g1.n_modes()
        )));
    }
    let s = g2.s.dot(&g1.s);
    let c_minus = &g2.c_minus + &g2.s.dot(&g1.c_minus);
    let c_plus = &g2.c_plus + &g2.s.dot(&g1.c_plus);
    // Interconnection Hamiltonian from Im(L2† S2 L1), as a quadratic form
    // over (a; a#) with single-height coupling coefficients.
    let m_coef = adjoint(&g2.coupling_single()).dot(&g2.s).dot(&g1.coupling_single());
    let h = g1.hamiltonian.add(&g2.hamiltonian)?.add(&imag_quadratic(&m_coef)?)?;
    SlhTriple::new(s, c_minus, c_plus, h)
}
