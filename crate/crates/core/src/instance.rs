//! JSON instance files.
//!
//! ```json
//! {"M": [[1, -1], [-1.5, 2]], "q": [-1, -1], "block_size": 1,
//!  "X": [[...]], "Y": [[...]], "orientation": "lower"}
//! ```
//!
//! Only `M` and `q` are required. The canonical form written back has
//! sorted keys and every float in `{:.16e}` (17 significant digits), so
//! `write(parse(write(x)))` is byte-identical to `write(x)`.

use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, Serializer};

use crate::error::{Error, Result};
use crate::lcp::LcpInstance;
use crate::linalg::{BlockPartition, Matrix, Orientation};

/// Field order is the sorted key order of the canonical form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(rename = "M")]
    pub m: Vec<Vec<f64>>,
    #[serde(rename = "X", default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<Vec<f64>>>,
    #[serde(rename = "Y", default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Orientation>,
    pub q: Vec<f64>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn read(path: &Path) -> std::result::Result<Self, ReadError> {
        let text = std::fs::read_to_string(path).map_err(ReadError::Io)?;
        Self::parse(&text).map_err(ReadError::Format)
    }

    pub fn to_canonical_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        let mut text = self.to_canonical_json();
        text.push('\n');
        std::fs::write(path, text)
    }

    /// Checks shapes and builds the instance. A missing orientation is
    /// detected from `M`'s zero pattern (lower first).
    pub fn to_instance(&self) -> Result<LcpInstance> {
        let m = matrix("M", &self.m)?;
        let mut inst = LcpInstance::new(m, self.q.clone())?;
        if let Some(bs) = self.block_size {
            let n = inst.dim();
            let orientation = match self.orientation {
                Some(o) => o,
                None => detect_orientation(&inst.m, bs)?,
            };
            inst = inst.with_partition(BlockPartition::for_dim(n, bs, orientation)?)?;
        }
        match (&self.x, &self.y) {
            (Some(x), Some(y)) => inst = inst.with_witnesses(matrix("X", x)?, matrix("Y", y)?)?,
            (None, None) => {}
            _ => return Err(Error::Dimension("X and Y must be given together".into())),
        }
        Ok(inst)
    }

    pub fn from_instance(inst: &LcpInstance) -> Self {
        Self {
            m: inst.m.to_rows(),
            x: inst.witnesses.as_ref().map(|w| w.x.to_rows()),
            y: inst.witnesses.as_ref().map(|w| w.y.to_rows()),
            block_size: inst.partition.map(|p| p.block_size),
            orientation: inst.partition.map(|p| p.orientation),
            q: inst.q.clone(),
        }
    }
}

fn detect_orientation(m: &Matrix, block_size: usize) -> Result<Orientation> {
    let n = m.rows();
    for o in [Orientation::Lower, Orientation::Upper] {
        let part = BlockPartition::for_dim(n, block_size, o)?;
        if crate::linalg::has_zero_pattern(m, &part, o)? {
            return Ok(o);
        }
    }
    Ok(Orientation::Lower)
}

fn matrix(name: &str, rows: &[Vec<f64>]) -> Result<Matrix> {
    Matrix::from_rows(rows).map_err(|e| match e {
        Error::Dimension(msg) => Error::Dimension(format!("{name}: {msg}")),
        other => other,
    })
}

#[derive(Debug)]
pub enum ReadError {
    Io(io::Error),
    Format(Error),
}

impl std::fmt::Display for ReadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReadError::Io(e) => write!(f, "{e}"),
            ReadError::Format(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ReadError {}

/// Compact JSON with floats as `{:.16e}`. Key order follows the
/// serializer: struct field order, or sorted for `BTreeMap`s.
#[derive(Default)]
pub struct CanonicalFormatter;

impl Formatter for CanonicalFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        write!(writer, "{:.16e}", value as f64)
    }
}

pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, CanonicalFormatter);
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_canonical_round_trip() {
        let text = r#"{"q": [-1, 0.1], "M": [[1, -1], [-1.5, 2]], "block_size": 1}"#;
        let f = InstanceFile::parse(text).unwrap();
        let once = f.to_canonical_json();
        assert!(once.starts_with(r#"{"M":[[1.0000000000000000e0,"#));
        let twice = InstanceFile::parse(&once).unwrap().to_canonical_json();
        assert_eq!(once, twice);
        assert_eq!(InstanceFile::parse(&once).unwrap(), f);
        let inst = f.to_instance().unwrap();
        assert_eq!(inst.partition.unwrap().orientation, Orientation::Lower);
    }

    #[test]
    fn errors_are_classified() {
        assert!(matches!(InstanceFile::parse("{"), Err(Error::Parse(_))));
        assert!(matches!(InstanceFile::parse(r#"{"M": [[1]], "q": [1], "extra": 1}"#), Err(Error::Parse(_))));
        let f = InstanceFile::parse(r#"{"M": [[1, 0]], "q": [1]}"#).unwrap();
        assert!(matches!(f.to_instance(), Err(Error::Dimension(_))));
        let f = InstanceFile::parse(r#"{"M": [[1, 0], [0, 1]], "q": [1, 1], "block_size": 3}"#).unwrap();
        assert!(matches!(f.to_instance(), Err(Error::Dimension(_))));
        let f = InstanceFile::parse(r#"{"M": [[1]], "q": [1], "X": [[1]]}"#).unwrap();
        assert!(matches!(f.to_instance(), Err(Error::Dimension(_))));
    }

    #[test]
    fn awkward_floats_survive() {
        let f = InstanceFile {
            m: vec![vec![0.1 + 0.2, -1e-300], vec![f64::MAX, 5e-324]],
            x: None,
            y: None,
            block_size: None,
            orientation: None,
            q: vec![1.0 / 3.0, -0.0],
        };
        let back = InstanceFile::parse(&f.to_canonical_json()).unwrap();
        for (a, b) in f.m.iter().flatten().zip(back.m.iter().flatten()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert_eq!(back.q[1].to_bits(), (-0.0_f64).to_bits());
    }
}
