use num_complex::Complex64;
use signal_core::CodeShape;
use thiserror::Error;

type C = Complex64;

pub const MAX_QUBITS: u32 = 14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("capacity exceeded: {0} qubits > {MAX_QUBITS}")]
    Capacity(u32),
    #[error("expected {expected} unitaries, got {got}")]
    Dimension { expected: u32, got: usize },
    #[error("matrix for qubit {0} is not unitary")]
    NonUnitary(usize),
    #[error("domain error: {0}")]
    Domain(String),
}

/// Dense 2^N-amplitude state; squared norm stays within 1e-10 of one after
/// every operation.
#[derive(Debug, Clone)]
pub struct DenseState {
    pub amplitudes: Vec<C>,
    pub qubit_count: u32,
}

/// One subset S of flipped qubits with its post-measurement amplitude.
#[derive(Debug, Clone, Copy)]
pub struct SubsetAmplitude {
    /// Bitmask of S: bit k set means qubit k flipped.
    pub subset: u32,
    pub amplitude: C,
    pub probability: f64,
}

/// One stabilizer-syndrome outcome of the repetition code.
#[derive(Debug, Clone)]
pub struct SyndromeOutcome {
    /// Minimum-weight error pattern consistent with the syndrome (bitmask).
    pub pattern: u32,
    /// Decoded weight j = |pattern| <= L.
    pub decoded_weight: u32,
    pub probability: f64,
    /// Renormalized logical amplitudes after applying the X correction:
    /// components on |0_L> and |1_L>.
    pub logical: [C; 2],
}

impl DenseState {
    pub fn zero(n: u32) -> Result<Self, OracleError> {
        if n == 0 || n > MAX_QUBITS {
            return Err(OracleError::Capacity(n));
        }
        let mut amplitudes = vec![C::new(0.0, 0.0); 1 << n];
        amplitudes[0] = C::new(1.0, 0.0);
        Ok(Self { amplitudes, qubit_count: n })
    }

    pub fn ghz(n: u32) -> Result<Self, OracleError> {
        let mut s = Self::zero(n)?;
        let inv = C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let last = s.amplitudes.len() - 1;
        s.amplitudes[0] = inv;
        s.amplitudes[last] = inv;
        Ok(s)
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_norm(&self) {
        debug_assert!((self.norm_sq() - 1.0).abs() < 1e-10, "norm drift: {}", self.norm_sq());
    }

    /// Apply one 2x2 unitary per qubit (tensor product evolution).
    pub fn evolve_product(&self, unitaries: &[[[C; 2]; 2]]) -> Result<Self, OracleError> {
        if unitaries.len() != self.qubit_count as usize {
            return Err(OracleError::Dimension {
                expected: self.qubit_count,
                got: unitaries.len(),
            });
        }
        for (k, u) in unitaries.iter().enumerate() {
            if !is_unitary(u) {
                return Err(OracleError::NonUnitary(k));
            }
        }
        let mut out = self.clone();
        for (k, u) in unitaries.iter().enumerate() {
            let stride = 1usize << k;
            for base in 0..out.amplitudes.len() {
                if base & stride == 0 {
                    let a0 = out.amplitudes[base];
                    let a1 = out.amplitudes[base | stride];
                    out.amplitudes[base] = u[0][0] * a0 + u[0][1] * a1;
                    out.amplitudes[base | stride] = u[1][0] * a0 + u[1][1] * a1;
                }
            }
        }
        out.check_norm();
        Ok(out)
    }

    /// Projection probability onto the +1 eigenspace of prod_k X_k.
    pub fn parity_prob_exact(&self) -> f64 {
        let mask = self.amplitudes.len() - 1;
        let expect: f64 = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| (a.conj() * self.amplitudes[mask ^ i]).re)
            .sum();
        0.5 * (1.0 + expect)
    }

    /// All 2^N subset amplitudes of a product state prepared by applying
    /// e^{-i omega_k X_k} to |0...0>.
    pub fn subset_decomposition(omega_list: &[f64]) -> Result<Vec<SubsetAmplitude>, OracleError> {
        let n = omega_list.len() as u32;
        let state = DenseState::zero(n)?
            .evolve_product(&omega_list.iter().map(|&w| crate::rotation_xy(w, 0.0)).collect::<Vec<_>>())?;
        Ok(state
            .amplitudes
            .iter()
            .enumerate()
            .map(|(mask, &a)| SubsetAmplitude {
                subset: mask as u32,
                amplitude: a,
                probability: a.norm_sqr(),
            })
            .collect())
    }

    /// Enumerate all repetition-code syndrome outcomes with their decoded
    /// weights and post-correction logical states.
    ///
    /// Each syndrome of the [N, 1, N] code selects the two basis patterns
    /// {e, complement(e)}; the minimum-weight one (weight <= L, ties
    /// impossible for odd N) is the decoded error, and the X correction maps
    /// the pair onto the logical basis.
    pub fn syndrome_project(&self, code: CodeShape) -> Result<Vec<SyndromeOutcome>, OracleError> {
        let n = code.n;
        if n != self.qubit_count {
            return Err(OracleError::Dimension { expected: n, got: self.qubit_count as usize });
        }
        let full: u32 = (1u32 << n) - 1;
        let mut out = Vec::new();
        for e in 0..=full {
            let w = e.count_ones();
            if w > code.l {
                continue; // complement pattern covers this coset
            }
            // Odd N: weight L patterns never tie with their complements.
            let a0 = self.amplitudes[e as usize];
            let a1 = self.amplitudes[(e ^ full) as usize];
            let prob = a0.norm_sqr() + a1.norm_sqr();
            let scale = if prob > 0.0 { 1.0 / prob.sqrt() } else { 0.0 };
            out.push(SyndromeOutcome {
                pattern: e,
                decoded_weight: w,
                probability: prob,
                logical: [a0 * scale, a1 * scale],
            });
        }
        Ok(out)
    }
}

pub(crate) fn is_unitary(u: &[[C; 2]; 2]) -> bool {
    let dot = |a: C, b: C, c: C, d: C| a.conj() * b + c.conj() * d;
    let e00 = dot(u[0][0], u[0][0], u[1][0], u[1][0]) - 1.0;
    let e11 = dot(u[0][1], u[0][1], u[1][1], u[1][1]) - 1.0;
    let e01 = dot(u[0][0], u[0][1], u[1][0], u[1][1]);
    e00.norm() < 1e-12 && e11.norm() < 1e-12 && e01.norm() < 1e-12
}
