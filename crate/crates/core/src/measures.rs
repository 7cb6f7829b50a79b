//! Concurrence-family entanglement measures.
//!
//! * pure-state concurrence across an arbitrary cut,
//! * two-qubit concurrence `max(0, l1 - l2 - l3 - l4)` and concurrence of
//!   assistance `l1 + l2 + l3 + l4`, where `l_i` is the spin-flip spectrum
//!   (square roots of the eigenvalues of `rho rho~`, descending),
//! * the three-qubit tangle,
//! * a seeded random-decomposition search over pure-state ensembles, used as
//!   an independent oracle for the closed forms.

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, psd_eig, tensor, ComplexMatrix, DensityMatrix};
use crate::real::Real;
use crate::rng::{complex_gaussian, seeded};
use crate::states::StateVector;

/// Tiny negative results from rounding that report as zero.
pub const CLAMP_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasureKind {
    Concurrence,
    ConcurrenceOfAssistance,
}

impl MeasureKind {
    /// Exponent at which the measure is monogamous (concurrence) or
    /// polygamous (concurrence of assistance). Both are 2 for qubits.
    pub fn default_power(self) -> f64 {
        2.0
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Concurrence => "concurrence",
            Self::ConcurrenceOfAssistance => "assistance",
        }
    }
}

/// One-to-rest value and the pairwise values `E(rho_{A|B_i})` in label order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureVector<T> {
    pub one_to_rest: T,
    pub pairwise: Vec<T>,
}

impl<T: Real> MeasureVector<T> {
    pub fn new(one_to_rest: T, pairwise: Vec<T>) -> Result<Self> {
        if std::iter::once(&one_to_rest)
            .chain(&pairwise)
            .any(|v| !v.is_finite() || *v < T::zero())
        {
            return Err(Error::Domain(
                "measure values must be finite and >= 0".into(),
            ));
        }
        Ok(Self {
            one_to_rest,
            pairwise,
        })
    }

    /// Number of parties `N` (party A plus the pairwise partners).
    pub fn parties(&self) -> usize {
        self.pairwise.len() + 1
    }

    pub fn is_all_zero(&self) -> bool {
        self.one_to_rest == T::zero() && self.pairwise.iter().all(|v| *v == T::zero())
    }
}

fn clamp_small<T: Real>(v: T) -> T {
    if v < T::zero() && v >= -T::tol(CLAMP_TOL) {
        T::zero()
    } else {
        v
    }
}

fn check_cut(n: usize, side_a: &[usize]) -> Result<()> {
    let mut s = side_a.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != side_a.len() {
        return Err(Error::Subsystems(format!("duplicate qubit in {side_a:?}")));
    }
    if s.is_empty() || s.len() >= n {
        return Err(Error::Subsystems(format!(
            "side A must be a proper nonempty subset of {n} qubits, got {side_a:?}"
        )));
    }
    if let Some(&q) = s.iter().find(|&&q| q >= n) {
        return Err(Error::Subsystems(format!("qubit {q} out of range")));
    }
    Ok(())
}

/// `sqrt(2 (1 - tr rho_A^2))` for the cut `side_a | rest` of a pure state.
///
/// Evaluated through the Cauchy-Binet identity
/// `1 - tr rho_A^2 = 2 sum |2x2 minors of Psi|^2`, where `Psi` is the
/// coefficient matrix of the cut. Product states give exactly 0 instead of the
/// square root of a rounding residue.
pub fn pure_bipartite_concurrence<T: Real>(psi: &StateVector<T>, side_a: &[usize]) -> Result<T> {
    check_cut(psi.n_qubits(), side_a)?;
    let m = psi.bipartite_coefficients(side_a);
    let (rows, cols) = (m.len(), m[0].len());
    let mut minors = T::zero();
    for i in 0..rows {
        for k in i + 1..rows {
            for j in 0..cols {
                for l in j + 1..cols {
                    minors += (m[i][j] * m[k][l] - m[i][l] * m[k][j]).norm_sqr();
                }
            }
        }
    }
    Ok((T::lit(4.0) * minors).sqrt())
}

/// The same quantity computed literally from the reduced state's purity.
pub fn purity_concurrence<T: Real>(psi: &StateVector<T>, side_a: &[usize]) -> Result<T> {
    check_cut(psi.n_qubits(), side_a)?;
    let purity = psi.reduced(side_a)?.purity();
    Ok((T::lit(2.0) * (T::one() - purity)).max(T::zero()).sqrt())
}

fn check_two_qubit<T: Real>(rho: &DensityMatrix<T>) -> Result<()> {
    if rho.dims() != [2, 2] {
        return Err(Error::Dimension(format!(
            "expected a two-qubit state, got dims {:?}",
            rho.dims()
        )));
    }
    Ok(())
}

fn sigma_y_y<T: Real>() -> ComplexMatrix<T> {
    let z = Complex::new(T::zero(), T::zero());
    let i = Complex::new(T::zero(), T::one());
    let y = ComplexMatrix::from_vec(2, 2, vec![z, -i, i, z]).expect("2x2");
    tensor(&y, &y)
}

/// `rho~ = (sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y)`.
pub fn spin_flip<T: Real>(rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    check_two_qubit(rho)?;
    let yy = sigma_y_y();
    let flipped = &(&yy * &rho.matrix().conj()) * &yy;
    DensityMatrix::from_parts(vec![2, 2], flipped)
}

/// Spin-flip spectrum `l1 >= l2 >= l3 >= l4 >= 0`.
///
/// The `l_i` are the singular values of `M = sqrt(rho) Y sqrt(rho)*`
/// (`Y = sigma_y (x) sigma_y`), since `M M^dagger = sqrt(rho) rho~ sqrt(rho)`.
/// They are read off the Hermitian dilation `[[0, M], [M^dagger, 0]]`, whose
/// spectrum is `{+l_i, -l_i}`; this keeps the computation inside the Jacobi
/// solver without square-rooting near-zero eigenvalues.
pub fn spin_flip_spectrum<T: Real>(rho: &DensityMatrix<T>) -> Result<[T; 4]> {
    check_two_qubit(rho)?;
    let sqrt_rho = psd_eig(rho.matrix())?.reconstruct_with(|l| l.sqrt());
    let m = &(&sqrt_rho * &sigma_y_y()) * &sqrt_rho.conj();
    let mut dilation = ComplexMatrix::zeros(8, 8);
    for i in 0..4 {
        for j in 0..4 {
            dilation[(i, 4 + j)] = m[(i, j)];
            dilation[(4 + j, i)] = m[(i, j)].conj();
        }
    }
    let eig = hermitian_eig(&dilation)?;
    let mut out = [T::zero(); 4];
    for (o, v) in out.iter_mut().zip(&eig.values) {
        *o = v.max(T::zero());
    }
    Ok(out)
}

/// Two-qubit concurrence `max(0, l1 - l2 - l3 - l4)`.
pub fn wootters_concurrence<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let [l1, l2, l3, l4] = spin_flip_spectrum(rho)?;
    Ok((l1 - l2 - l3 - l4).max(T::zero()).min(T::one()))
}

/// Two-qubit concurrence of assistance `l1 + l2 + l3 + l4`.
pub fn concurrence_of_assistance<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let l = spin_flip_spectrum(rho)?;
    Ok(l.iter().copied().sum())
}

/// One-to-rest and pairwise measures of a pure state with party A = qubit 0.
///
/// The one-to-rest entry is the pure-state concurrence for both kinds (the
/// assisted value of a pure bipartite cut coincides with it).
pub fn measure_vector<T: Real>(
    psi: &StateVector<T>,
    kind: MeasureKind,
) -> Result<MeasureVector<T>> {
    let n = psi.n_qubits();
    if n < 3 {
        return Err(Error::Domain(format!("need at least 3 qubits, got {n}")));
    }
    let one_to_rest = pure_bipartite_concurrence(psi, &[0])?;
    let rho = psi.density_matrix();
    let pairwise = (1..n)
        .map(|b| {
            let rho_ab = crate::linalg::partial_trace(&rho, &[0, b])?;
            match kind {
                MeasureKind::Concurrence => wootters_concurrence(&rho_ab),
                MeasureKind::ConcurrenceOfAssistance => concurrence_of_assistance(&rho_ab),
            }
            .map(clamp_small)
        })
        .collect::<Result<Vec<_>>>()?;
    MeasureVector::new(clamp_small(one_to_rest), pairwise)
}

/// `max(0, C^2(A|BC) - C^2_AB - C^2_AC)` for a three-qubit pure state.
pub fn tangle_three_qubit<T: Real>(psi: &StateVector<T>) -> Result<T> {
    if psi.n_qubits() != 3 {
        return Err(Error::Domain(format!(
            "tangle needs 3 qubits, got {}",
            psi.n_qubits()
        )));
    }
    let mv = measure_vector(psi, MeasureKind::Concurrence)?;
    let sq = |v: T| v * v;
    Ok((sq(mv.one_to_rest) - sq(mv.pairwise[0]) - sq(mv.pairwise[1])).max(T::zero()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoofMode {
    /// Smallest average concurrence found (approaches the concurrence).
    Min,
    /// Largest average concurrence found (approaches the assistance).
    Max,
}

/// Fraction of trials spent on independent Haar-random decompositions before
/// switching to local refinement around the incumbent.
const GLOBAL_FRACTION: f64 = 0.4;

/// Orthonormalizes the columns of a row-major `rows x cols` matrix in place
/// (modified Gram-Schmidt). Returns false on numerical rank loss.
fn orthonormalize_columns<T: Real>(u: &mut [Complex<T>], rows: usize, cols: usize) -> bool {
    for c in 0..cols {
        for prev in 0..c {
            let dot: Complex<T> = (0..rows)
                .map(|r| u[r * cols + prev].conj() * u[r * cols + c])
                .sum();
            for r in 0..rows {
                let p = u[r * cols + prev];
                u[r * cols + c] -= p * dot;
            }
        }
        let norm = (0..rows)
            .map(|r| u[r * cols + c].norm_sqr())
            .sum::<T>()
            .sqrt();
        if norm < T::tol(1e-12) {
            return false;
        }
        for r in 0..rows {
            u[r * cols + c] /= norm;
        }
    }
    true
}

fn random_isometry<T: Real, R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Vec<Complex<T>> {
    loop {
        let mut u: Vec<Complex<T>> = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
        if orthonormalize_columns(&mut u, rows, cols) {
            return u;
        }
    }
}

/// `sum_j p_j C(phi_j)` for the ensemble `phi~_j = sum_i U_ji psi~_i`.
/// Uses `p C(phi) = 2 |a d - b c|` for an unnormalized two-qubit vector.
fn ensemble_average<T: Real>(u: &[Complex<T>], members: usize, basis: &[[Complex<T>; 4]]) -> T {
    let r = basis.len();
    (0..members)
        .map(|j| {
            let mut phi = [Complex::new(T::zero(), T::zero()); 4];
            for (i, psi) in basis.iter().enumerate() {
                let w = u[j * r + i];
                for (p, q) in phi.iter_mut().zip(psi) {
                    *p += w * q;
                }
            }
            T::lit(2.0) * (phi[0] * phi[3] - phi[1] * phi[2]).norm()
        })
        .sum()
}

/// Seeded search over pure-state decompositions `{p_j, phi_j}` of `rho`.
///
/// Decompositions are generated by mixing the eigen-ensemble
/// `sqrt(lambda_i)|e_i>` (rank `r`) with random `M x r` isometries,
/// `r <= M <= 2r`: first independent Haar draws, then random-walk refinement
/// of the incumbent with a shrinking step. Every candidate is a valid
/// decomposition, so the `Min` result never undercuts the concurrence and the
/// `Max` result never exceeds the assistance. Deterministic in
/// `(rho, mode, trials, seed)`.
pub fn convex_roof_oracle<T: Real>(
    rho: &DensityMatrix<T>,
    mode: RoofMode,
    trials: usize,
    seed: u64,
) -> Result<T> {
    check_two_qubit(rho)?;
    if trials == 0 {
        return Err(Error::Domain("trials must be >= 1".into()));
    }
    let eig = psd_eig(rho.matrix())?;
    let basis: Vec<[Complex<T>; 4]> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > T::zero())
        .map(|(k, &l)| {
            let s = l.sqrt();
            let mut v = [Complex::new(T::zero(), T::zero()); 4];
            for (i, slot) in v.iter_mut().enumerate() {
                *slot = eig.vectors[(i, k)] * s;
            }
            v
        })
        .collect();
    let r = basis.len();
    if r == 0 {
        return Err(Error::Domain("zero density matrix".into()));
    }

    let better = |cand: T, best: T| match mode {
        RoofMode::Min => cand < best,
        RoofMode::Max => cand > best,
    };
    let mut rng = seeded(seed);
    let global = ((trials as f64 * GLOBAL_FRACTION).ceil() as usize).clamp(1, trials);

    let mut best_u = Vec::new();
    let mut best_m = r;
    let mut best = match mode {
        RoofMode::Min => T::infinity(),
        RoofMode::Max => T::neg_infinity(),
    };
    for _ in 0..global {
        let m = rng.gen_range(r..=2 * r);
        let u = random_isometry(&mut rng, m, r);
        let v = ensemble_average(&u, m, &basis);
        if better(v, best) {
            best = v;
            best_u = u;
            best_m = m;
        }
    }

    let refine = trials - global;
    let (start, stop) = (0.5f64, 1e-4f64);
    for step in 0..refine {
        let frac = step as f64 / refine.max(1) as f64;
        let eps = T::lit(start * (stop / start).powf(frac));
        let mut u: Vec<Complex<T>> = best_u
            .iter()
            .map(|z| *z + complex_gaussian::<T, _>(&mut rng) * eps)
            .collect();
        if !orthonormalize_columns(&mut u, best_m, r) {
            continue;
        }
        let v = ensemble_average(&u, best_m, &basis);
        if better(v, best) {
            best = v;
            best_u = u;
        }
    }
    Ok(best)
}
