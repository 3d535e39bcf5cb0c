//! Versioned JSON input format.
//!
//! ```text
//! {
//!   "schema_version": "rank2sep.state/1",
//!   "kind": "density_matrix" | "eigen_pair" | "pure_state",
//!   "n": <local dimension N>,
//!   ... payload ...
//! }
//! ```
//!
//! A complex number is a two-element array `[re, im]` and a matrix is an
//! array of rows. Payloads:
//!
//! * `density_matrix`: `"rho"`, an N²×N² matrix.
//! * `eigen_pair`: `"p"`, `"e1"`, `"e2"`; E₁ and E₂ are N×N coefficient
//!   matrices (row i, column j holds the amplitude of eᵢ⊗eⱼ).
//! * `pure_state`: `"coefficients"`, one N×N coefficient matrix.

use rank2sep::linalg::herm_eig;
use rank2sep::{ComplexMatrix, PureState, Rank2State, C64};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const STATE_SCHEMA: &str = "rank2sep.state/1";

pub type Complex = [f64; 2];
pub type Matrix = Vec<Vec<Complex>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub schema_version: String,
    pub n: usize,
    #[serde(flatten)]
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    DensityMatrix { rho: Matrix },
    EigenPair { p: f64, e1: Matrix, e2: Matrix },
    PureState { coefficients: Matrix },
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::DensityMatrix { .. } => "density_matrix",
            Payload::EigenPair { .. } => "eigen_pair",
            Payload::PureState { .. } => "pure_state",
        }
    }
}

/// A validated input, converted to library types.
#[derive(Debug, Clone)]
pub enum LoadedState {
    Density { rho: ComplexMatrix, n: usize },
    Pair(Rank2State),
    Pure(PureState),
}

impl LoadedState {
    pub fn dim(&self) -> usize {
        match self {
            LoadedState::Density { n, .. } => *n,
            LoadedState::Pair(s) => s.dim(),
            LoadedState::Pure(p) => p.dim(),
        }
    }

    pub fn density_matrix(&self) -> ComplexMatrix {
        match self {
            LoadedState::Density { rho, .. } => rho.clone(),
            LoadedState::Pair(s) => s.density_matrix(),
            LoadedState::Pure(p) => p.projector(),
        }
    }
}

pub fn to_matrix(m: &ComplexMatrix) -> Matrix {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn to_vector(v: &[C64]) -> Vec<Complex> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn from_matrix(name: &str, m: &Matrix, rows: usize, cols: usize) -> Result<ComplexMatrix, CliError> {
    if m.len() != rows {
        return Err(CliError::Validation(format!(
            "{name}: expected {rows} rows, found {}",
            m.len()
        )));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (i, row) in m.iter().enumerate() {
        if row.len() != cols {
            return Err(CliError::Validation(format!(
                "{name}: row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        data.extend(row.iter().map(|&[re, im]| C64::new(re, im)));
    }
    ComplexMatrix::from_vec(rows, cols, data).map_err(|e| CliError::Validation(format!("{name}: {e}")))
}

impl StateFile {
    pub fn density_matrix(rho: &ComplexMatrix, n: usize) -> Self {
        Self {
            schema_version: STATE_SCHEMA.into(),
            n,
            payload: Payload::DensityMatrix { rho: to_matrix(rho) },
        }
    }

    pub fn eigen_pair(state: &Rank2State) -> Self {
        Self {
            schema_version: STATE_SCHEMA.into(),
            n: state.dim(),
            payload: Payload::EigenPair {
                p: state.p(),
                e1: to_matrix(state.e1().coefficients()),
                e2: to_matrix(state.e2().coefficients()),
            },
        }
    }

    pub fn pure_state(psi: &PureState) -> Self {
        Self {
            schema_version: STATE_SCHEMA.into(),
            n: psi.dim(),
            payload: Payload::PureState {
                coefficients: to_matrix(psi.coefficients()),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state files always serialize")
    }

    /// Checks every matrix invariant and converts to library types.
    pub fn validate(&self, tol: f64) -> Result<LoadedState, CliError> {
        if self.schema_version != STATE_SCHEMA {
            return Err(CliError::Validation(format!(
                "unsupported schema_version {:?} (expected {STATE_SCHEMA:?})",
                self.schema_version
            )));
        }
        let n = self.n;
        if n < 2 {
            return Err(CliError::Validation(format!("n must be at least 2, found {n}")));
        }
        match &self.payload {
            Payload::DensityMatrix { rho } => {
                let rho = from_matrix("rho", rho, n * n, n * n)?;
                validate_density(&rho, tol)?;
                Ok(LoadedState::Density { rho, n })
            }
            Payload::EigenPair { p, e1, e2 } => {
                if !(*p > 0.0 && *p < 1.0) {
                    return Err(CliError::Validation(format!("p = {p} is outside (0, 1)")));
                }
                let a1 = normalized("e1", from_matrix("e1", e1, n, n)?, tol)?;
                let a2 = normalized("e2", from_matrix("e2", e2, n, n)?, tol)?;
                let overlap = a1.overlap(&a2).norm();
                if overlap > tol {
                    return Err(CliError::Validation(format!(
                        "e1 and e2 are not orthogonal: |<E1|E2>| = {overlap:.6} exceeds tolerance {tol:e}"
                    )));
                }
                let state = Rank2State::new(*p, a1, a2).map_err(|e| CliError::Validation(e.to_string()))?;
                Ok(LoadedState::Pair(state))
            }
            Payload::PureState { coefficients } => {
                let a = from_matrix("coefficients", coefficients, n, n)?;
                Ok(LoadedState::Pure(normalized("coefficients", a, tol)?))
            }
        }
    }
}

fn normalized(name: &str, a: ComplexMatrix, tol: f64) -> Result<PureState, CliError> {
    let norm = a.frobenius_norm();
    if (norm - 1.0).abs() > tol {
        return Err(CliError::Validation(format!(
            "{name} is not normalized: norm {norm:.12} differs from 1 by {:.3e}",
            (norm - 1.0).abs()
        )));
    }
    PureState::new(a).map_err(|e| CliError::Validation(format!("{name}: {e}")))
}

fn validate_density(rho: &ComplexMatrix, tol: f64) -> Result<(), CliError> {
    let dev = rho.hermitian_deviation();
    if dev > tol {
        return Err(CliError::Validation(format!(
            "rho is not Hermitian: relative deviation ‖ρ − ρ†‖/‖ρ‖ = {dev:.3e}"
        )));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
        return Err(CliError::Validation(format!(
            "rho trace is {} instead of 1 (trace deficit {})",
            fmt_num(tr.re),
            fmt_num(1.0 - tr.re)
        )));
    }
    let es = herm_eig(&rho.hermitian_part()).map_err(|e| CliError::Validation(e.to_string()))?;
    let min = es.eigenvalues.last().copied().unwrap_or(0.0);
    if min < -tol {
        return Err(CliError::Validation(format!(
            "rho is not positive semidefinite: smallest eigenvalue {min:.3e}"
        )));
    }
    Ok(())
}

/// Up to ten significant digits, without trailing zeros.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = (9 - x.abs().log10().floor() as i32).clamp(0, 15) as usize;
    let s = format!("{x:.digits$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        &s
    };
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

/// Parses and validates a state file.
pub fn parse_state_file(text: &[u8], tol: f64) -> Result<(StateFile, LoadedState), CliError> {
    let text = std::str::from_utf8(text).map_err(|e| CliError::Parse {
        line: 0,
        column: 0,
        message: format!("input is not UTF-8: {e}"),
    })?;
    let file: StateFile = serde_json::from_str(text).map_err(|e| {
        // serde_json appends its own " at line L column C"
        let mut message = e.to_string();
        if let Some(i) = message.rfind(" at line ") {
            message.truncate(i);
        }
        CliError::Parse {
            line: e.line(),
            column: e.column(),
            message,
        }
    })?;
    let loaded = file.validate(tol)?;
    Ok((file, loaded))
}

#[cfg(test)]
mod tests {
    use super::*;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn bell_density() -> String {
        r#"{
  "schema_version": "rank2sep.state/1",
  "kind": "density_matrix",
  "n": 2,
  "rho": [
    [[0.5, 0], [0, 0], [0, 0], [0.5, 0]],
    [[0, 0], [0, 0], [0, 0], [0, 0]],
    [[0, 0], [0, 0], [0, 0], [0, 0]],
    [[0.5, 0], [0, 0], [0, 0], [0.5, 0]]
  ]
}"#
        .to_string()
    }

    #[test]
    fn parses_bell_density() {
        let (file, loaded) = parse_state_file(bell_density().as_bytes(), 1e-9).unwrap();
        assert_eq!(file.n, 2);
        assert_eq!(file.payload.kind(), "density_matrix");
        assert!(matches!(loaded, LoadedState::Density { n: 2, .. }));
    }

    #[test]
    fn round_trip_is_exact() {
        let (file, _) = parse_state_file(bell_density().as_bytes(), 1e-9).unwrap();
        let again: StateFile = serde_json::from_str(&file.to_json()).unwrap();
        assert_eq!(file, again);

        let a = ComplexMatrix::from_vec(
            2,
            2,
            vec![
                C64::new(0.1, 0.3),
                C64::new(H, 0.0),
                C64::new(0.0, -0.2),
                C64::new(0.5, 0.1),
            ],
        )
        .unwrap();
        let psi = PureState::normalized(a).unwrap();
        let file = StateFile::pure_state(&psi);
        let again: StateFile = serde_json::from_str(&file.to_json()).unwrap();
        assert_eq!(file, again);
    }

    #[test]
    fn trace_deficit_is_named() {
        // ρ₀₀ = 0.4: still Hermitian, trace 0.9
        let text = bell_density().replacen(
            "[[0.5, 0], [0, 0], [0, 0], [0.5, 0]],",
            "[[0.4, 0], [0, 0], [0, 0], [0.5, 0]],",
            1,
        );
        let err = parse_state_file(text.as_bytes(), 1e-9).unwrap_err();
        assert!(err.to_string().contains("trace deficit 0.1"), "{err}");
    }

    #[test]
    fn overlap_is_named() {
        // E1 = |00>, E2 = 0.2|00> + √0.96|11>
        let s = (0.96f64).sqrt();
        let text = format!(
            r#"{{"schema_version":"rank2sep.state/1","kind":"eigen_pair","n":2,"p":0.5,
            "e1":[[[1,0],[0,0]],[[0,0],[0,0]]],
            "e2":[[[0.2,0],[0,0]],[[0,0],[{s},0]]]}}"#
        );
        let err = parse_state_file(text.as_bytes(), 1e-9).unwrap_err();
        assert!(err.to_string().contains("|<E1|E2>| = 0.200000"), "{err}");
    }

    #[test]
    fn syntax_errors_carry_position() {
        let text = "{\n  \"schema_version\": \"rank2sep.state/1\",\n  \"n\": 2,\n  oops\n}";
        match parse_state_file(text.as_bytes(), 1e-9) {
            Err(CliError::Parse { line, column, .. }) => assert_eq!((line, column), (4, 3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn number_formatting() {
        assert_eq!(fmt_num(0.25000000000000006), "0.25");
        assert_eq!(fmt_num(0.09999999999999998), "0.1");
        assert_eq!(fmt_num(-0.5), "-0.5");
        assert_eq!(fmt_num(1.0), "1");
    }
}
