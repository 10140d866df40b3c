//! The orbit file format and fixed-precision JSON output.

use std::io;
use std::path::Path;

use rtbp::dynamics::{self, MassParameter, RotatingState};
use rtbp::periodicity::ClosedOrbit;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, Serializer};

use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "1";
/// Allowed spread between the stored Jacobi constant and the value recomputed
/// at each sample.
pub const JACOBI_CONSISTENCY: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitDocument {
    pub schema_version: String,
    pub mu: f64,
    pub jacobi: f64,
    pub period: f64,
    pub closure_residual: f64,
    /// `[t, y1, y2, v1, v2]` rows.
    pub samples: Vec<[f64; 5]>,
    pub provenance: String,
}

impl OrbitDocument {
    pub fn from_orbit(o: &ClosedOrbit, provenance: impl Into<String>) -> Self {
        let mut samples: Vec<[f64; 5]> =
            o.trajectory.samples().iter().map(|s| [s.t, s.y1, s.y2, s.v1, s.v2]).collect();
        // Keep the exact initial state so re-verification starts from it.
        let s0 = o.initial_state();
        samples[0] = [s0.t, s0.y1, s0.y2, s0.v1, s0.v2];
        Self {
            schema_version: SCHEMA_VERSION.into(),
            mu: o.mu.value(),
            jacobi: o.c,
            period: o.period,
            closure_residual: o.closure_residual,
            samples,
            provenance: provenance.into(),
        }
    }

    pub fn mass(&self) -> Result<MassParameter, CliError> {
        MassParameter::new(self.mu).map_err(|e| CliError::Schema(format!("mu: {e}")))
    }

    pub fn initial_state(&self) -> RotatingState {
        let [t, y1, y2, v1, v2] = self.samples[0];
        RotatingState::new(y1, y2, v1, v2, t)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Schema(m));
        if self.schema_version != SCHEMA_VERSION {
            return bad(format!("unsupported schema_version {:?}", self.schema_version));
        }
        let mu = self.mass()?;
        if !(self.period.is_finite() && self.period > 0.0) {
            return bad(format!("period must be positive, got {}", self.period));
        }
        if self.samples.len() < 2 {
            return bad("at least two samples are required".into());
        }
        for (i, w) in self.samples.windows(2).enumerate() {
            if !(w[1][0] > w[0][0]) {
                return bad(format!("samples are not time-ordered at index {}", i + 1));
            }
        }
        for (i, row) in self.samples.iter().enumerate() {
            let [t, y1, y2, v1, v2] = *row;
            let c = dynamics::jacobi_constant(&RotatingState::new(y1, y2, v1, v2, t), mu)
                .map_err(|e| CliError::Schema(format!("sample {i}: {e}")))?;
            if !((c - self.jacobi).abs() <= JACOBI_CONSISTENCY) {
                return bad(format!("sample {i} has Jacobi constant {c}, document says {}", self.jacobi));
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Schema(format!("cannot read {}: {e}", path.display())))?;
        let doc: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
        doc.validate()?;
        Ok(doc)
    }
}

/// Writes every float with 17 significant digits so output is byte-stable
/// and round-trips exactly.
#[derive(Debug, Clone, Copy, Default)]
pub struct FixedPrecision;

impl Formatter for FixedPrecision {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, FixedPrecision);
    value.serialize(&mut ser).map_err(|e| CliError::Other(e.into()))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("JSON is UTF-8"))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    std::fs::write(path, to_json(value)?).map_err(|e| CliError::io(path, e))
}

pub fn trajectory_csv(states: &[RotatingState]) -> String {
    let mut out = String::from("t,y1,y2,v1,v2\n");
    for s in states {
        out.push_str(&format!("{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n", s.t, s.y1, s.y2, s.v1, s.v2));
    }
    out
}
