//! State files.
//!
//! ```text
//! {
//!   "format_version": 1,
//!   "n": 2,
//!   "amplitudes": [
//!     [7.0710678118654757e-1, 0.0000000000000000e0],
//!     ...
//!   ]
//! }
//! ```
//!
//! Numbers carry 17 significant digits so that a file round-trips exactly.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::state::PureState;

pub const STATE_FORMAT_VERSION: u32 = 1;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    format_version: u32,
    n: usize,
    amplitudes: Vec<[f64; 2]>,
}

pub fn write_state(state: &PureState) -> String {
    let mut out = String::new();
    writeln!(out, "{{").unwrap();
    writeln!(out, "  \"format_version\": {STATE_FORMAT_VERSION},").unwrap();
    writeln!(out, "  \"n\": {},", state.n_qubits()).unwrap();
    writeln!(out, "  \"amplitudes\": [").unwrap();
    let amps = state.amplitudes();
    for (i, a) in amps.iter().enumerate() {
        let sep = if i + 1 == amps.len() { "" } else { "," };
        writeln!(out, "    [{:.16e}, {:.16e}]{sep}", a.re, a.im).unwrap();
    }
    writeln!(out, "  ]").unwrap();
    writeln!(out, "}}").unwrap();
    out
}

pub fn parse_state(text: &str) -> Result<PureState> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.format_version != STATE_FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported format_version {}",
            file.format_version
        )));
    }
    if file.n == 0 || file.n > 24 {
        return Err(Error::Parse(format!("unsupported qubit count {}", file.n)));
    }
    let amplitudes = file
        .amplitudes
        .into_iter()
        .map(|[re, im]| Complex64::new(re, im))
        .collect();
    PureState::new(file.n, amplitudes)
}

pub fn read_state_file(path: &Path) -> Result<PureState> {
    parse_state(&std::fs::read_to_string(path)?)
}

pub fn write_state_file(path: &Path, state: &PureState) -> Result<()> {
    std::fs::write(path, write_state(state))?;
    Ok(())
}
