//! Pure multiqubit states: catalog constructors, Haar sampling and the JSON
//! state-file format.
//!
//! State file layout (UTF-8 JSON):
//!
//! ```json
//! { "n_qubits": 2, "amplitudes": [[0.7071067811865476, 0.0], [0.0, 0.0],
//!                                  [0.0, 0.0], [0.7071067811865476, 0.0]] }
//! ```
//!
//! `amplitudes[i]` is `[re, im]` of basis state `i`, read as a big-endian bit
//! string with qubit 0 (party A) as the most significant bit.

use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{partial_trace, DensityMatrix};
use crate::real::Real;
use crate::rng::{complex_gaussian, seeded};

/// Normalization tolerance on `sum |a_i|^2`.
pub const NORM_TOL: f64 = 1e-9;
/// Largest register [`haar_random_state`] samples.
pub const MAX_QUBITS: usize = 5;

pub const CATALOG_NAMES: &[&str] = &[
    "w2", "w3", "w4", "w5", "ghz2", "ghz3", "ghz4", "ghz5", "example1", "example2",
];

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    n_qubits: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if n_qubits == 0 || n_qubits >= usize::BITS as usize {
            return Err(Error::Domain(format!("unsupported qubit count {n_qubits}")));
        }
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::Dimension(format!(
                "{n_qubits} qubits need {} amplitudes, got {}",
                1usize << n_qubits,
                amplitudes.len()
            )));
        }
        let norm_sq: T = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if !norm_sq.is_finite() || (norm_sq - T::one()).abs() > T::tol(NORM_TOL) {
            return Err(Error::Normalization {
                norm_sq: norm_sq.as_f64(),
            });
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Rescales an arbitrary nonzero vector to unit norm.
    pub fn normalized(n_qubits: usize, mut amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm == T::zero() || !norm.is_finite() {
            return Err(Error::Normalization {
                norm_sq: (norm * norm).as_f64(),
            });
        }
        for z in amplitudes.iter_mut() {
            *z /= norm;
        }
        Self::new(n_qubits, amplitudes)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn density_matrix(&self) -> DensityMatrix<T> {
        DensityMatrix::from_pure(vec![2; self.n_qubits], &self.amplitudes)
            .expect("validated state vector")
    }

    /// Reduced density matrix on the qubits in `keep`.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix<T>> {
        partial_trace(&self.density_matrix(), keep)
    }

    /// Amplitudes as a `d_A x d_B` matrix for the cut `side_a | rest`.
    /// Row index enumerates `side_a` (ascending qubit order), column index the rest.
    pub(crate) fn bipartite_coefficients(&self, side_a: &[usize]) -> Vec<Vec<Complex<T>>> {
        let n = self.n_qubits;
        let mut a_qubits = side_a.to_vec();
        a_qubits.sort_unstable();
        let b_qubits: Vec<usize> = (0..n).filter(|q| !a_qubits.contains(q)).collect();
        let zero = Complex::new(T::zero(), T::zero());
        let mut out = vec![vec![zero; 1 << b_qubits.len()]; 1 << a_qubits.len()];
        for (idx, &amp) in self.amplitudes.iter().enumerate() {
            let bit = |q: usize| (idx >> (n - 1 - q)) & 1;
            let row = a_qubits.iter().fold(0, |acc, &q| (acc << 1) | bit(q));
            let col = b_qubits.iter().fold(0, |acc, &q| (acc << 1) | bit(q));
            out[row][col] = amp;
        }
        out
    }
}

impl StateVector<f64> {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(s)?;
        file.into_state()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&StateFile::from_state(self)).expect("plain data serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string() + "\n")?;
        Ok(())
    }
}

/// On-disk representation of a [`StateVector`].
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub n_qubits: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(psi: &StateVector<f64>) -> Self {
        Self {
            n_qubits: psi.n_qubits,
            amplitudes: psi.amplitudes.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn into_state(self) -> Result<StateVector<f64>> {
        if self.amplitudes.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::StateFile("non-finite amplitude".into()));
        }
        let amps = self
            .amplitudes
            .into_iter()
            .map(|[re, im]| Complex::new(re, im))
            .collect();
        StateVector::new(self.n_qubits, amps)
    }
}

/// Five-amplitude canonical form of a three-qubit pure state:
/// `l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneralizedSchmidt<T> {
    pub lambdas: [T; 5],
    pub phi: T,
}

impl<T: Real> GeneralizedSchmidt<T> {
    pub fn new(lambdas: [T; 5], phi: T) -> Result<Self> {
        if lambdas.iter().any(|&l| !l.is_finite() || l < T::zero()) {
            return Err(Error::Domain(format!(
                "lambdas must be finite and >= 0: {lambdas:?}"
            )));
        }
        if !(phi >= T::zero() && phi <= T::PI()) {
            return Err(Error::Domain(format!("phi = {phi} outside [0, pi]")));
        }
        let norm_sq: T = lambdas.iter().map(|&l| l * l).sum();
        if (norm_sq - T::one()).abs() > T::tol(NORM_TOL) {
            return Err(Error::Normalization {
                norm_sq: norm_sq.as_f64(),
            });
        }
        Ok(Self { lambdas, phi })
    }

    /// `l0 = 1/2, l1 = l4 = sqrt2/12, l2 = sqrt2/2, l3 = sqrt2/3, phi = 0`.
    pub fn example2() -> Self {
        let s2 = T::SQRT_2();
        let lambdas = [
            T::lit(0.5),
            s2 / T::lit(12.0),
            s2 / T::lit(2.0),
            s2 / T::lit(3.0),
            s2 / T::lit(12.0),
        ];
        Self {
            lambdas,
            phi: T::zero(),
        }
    }
}

pub fn w_state<T: Real>(n: usize) -> Result<StateVector<T>> {
    if n < 2 {
        return Err(Error::Domain(format!("W state needs n >= 2, got {n}")));
    }
    let amp = Complex::new(T::one() / T::from_usize(n).sqrt(), T::zero());
    let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << n];
    for q in 0..n {
        amps[1 << q] = amp;
    }
    StateVector::new(n, amps)
}

pub fn ghz_state<T: Real>(n: usize) -> Result<StateVector<T>> {
    if n < 2 {
        return Err(Error::Domain(format!("GHZ state needs n >= 2, got {n}")));
    }
    let amp = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
    let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << n];
    amps[0] = amp;
    amps[(1 << n) - 1] = amp;
    StateVector::new(n, amps)
}

pub fn generalized_schmidt_state<T: Real>(p: &GeneralizedSchmidt<T>) -> Result<StateVector<T>> {
    let p = GeneralizedSchmidt::new(p.lambdas, p.phi)?;
    let [l0, l1, l2, l3, l4] = p.lambdas;
    let zero = Complex::new(T::zero(), T::zero());
    let real = |v: T| Complex::new(v, T::zero());
    let mut amps = vec![zero; 8];
    amps[0b000] = real(l0);
    amps[0b100] = Complex::from_polar(l1, p.phi);
    amps[0b101] = real(l2);
    amps[0b110] = real(l3);
    amps[0b111] = real(l4);
    StateVector::new(3, amps)
}

/// Haar-random pure state: a normalized vector of i.i.d. standard complex
/// Gaussians drawn from the seeded generator.
pub fn haar_random_state<T: Real>(n: usize, seed: u64) -> Result<StateVector<T>> {
    if !(2..=MAX_QUBITS).contains(&n) {
        return Err(Error::Domain(format!(
            "Haar sampling supports 2..={MAX_QUBITS} qubits, got {n}"
        )));
    }
    let mut rng = seeded(seed);
    let amps = (0..1usize << n)
        .map(|_| complex_gaussian(&mut rng))
        .collect();
    StateVector::normalized(n, amps)
}

/// Looks up a named catalog state (see [`CATALOG_NAMES`]).
pub fn catalog<T: Real>(name: &str) -> Result<StateVector<T>> {
    let lower = name.to_ascii_lowercase();
    match lower.as_str() {
        "example1" => w_state(4),
        "example2" => generalized_schmidt_state(&GeneralizedSchmidt::example2()),
        _ => {
            let parse = |prefix: &str| {
                lower
                    .strip_prefix(prefix)
                    .and_then(|rest| rest.parse::<usize>().ok())
                    .filter(|n| (2..=5).contains(n))
            };
            if let Some(n) = parse("ghz") {
                ghz_state(n)
            } else if let Some(n) = parse("w") {
                w_state(n)
            } else {
                Err(Error::UnknownCatalog(name.to_string()))
            }
        }
    }
}
