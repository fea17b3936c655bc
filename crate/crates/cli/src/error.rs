//! Error classification: validation failures exit with 2, the rest with 1.

use serde_json::{json, Map, Value};

use tropehrhart::chains::ChainError;
use tropehrhart::hrr::HrrError;
use tropehrhart::lattice::LatticeError;
use tropehrhart::matroid::MatroidError;
use tropehrhart::taut::TautError;
use tropehrhart::tropvb::BundleError;

#[derive(Debug)]
pub struct CliError {
    pub validation: bool,
    pub kind: &'static str,
    pub message: String,
    pub details: Map<String, Value>,
}

impl CliError {
    pub fn validation(kind: &'static str, message: String) -> Self {
        CliError { validation: true, kind, message, details: Map::new() }
    }

    pub fn internal(kind: &'static str, message: String) -> Self {
        CliError { validation: false, kind, message, details: Map::new() }
    }

    pub fn with(mut self, key: &str, value: Value) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }

    pub fn exit_code(&self) -> i32 {
        if self.validation {
            2
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Value {
        let mut e = self.details.clone();
        e.insert("kind".into(), json!(self.kind));
        e.insert("message".into(), json!(self.message));
        e.insert("exit_code".into(), json!(self.exit_code()));
        json!({ "error": e })
    }
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::Overflow => CliError::internal("lattice", e.to_string()),
            _ => CliError::validation("fan", e.to_string()),
        }
    }
}

impl From<MatroidError> for CliError {
    fn from(e: MatroidError) -> Self {
        CliError::validation("matroid", e.to_string())
    }
}

impl From<ChainError> for CliError {
    fn from(e: ChainError) -> Self {
        match &e {
            ChainError::BoxTooSmall { point, value } => {
                CliError::validation("box", e.to_string()).with("point", json!(point)).with("value", json!(value))
            }
            ChainError::UnboundedPiece | ChainError::DimensionMismatch { .. } | ChainError::FanNotComplete => {
                CliError::validation("chain", e.to_string())
            }
            ChainError::Lattice(l) => l.clone().into(),
            _ => CliError::internal("chain", e.to_string()),
        }
    }
}

impl From<BundleError> for CliError {
    fn from(e: BundleError) -> Self {
        let msg = e.to_string();
        match e {
            BundleError::RowNotInBergman { ray, row, level_set } => CliError::validation("bundle", msg)
                .with("ray", json!(ray + 1))
                .with("row", json!(row))
                .with("level_set", json!(one_based(&level_set.elements()))),
            BundleError::RaggedDiagram { row, expected, found } => CliError::validation("bundle", msg)
                .with("row", json!(row + 1))
                .with("expected", json!(expected))
                .with("found", json!(found)),
            BundleError::NoCommonApartment { cone } | BundleError::NotSmooth { cone } | BundleError::NotMaximal { cone } => {
                CliError::validation("bundle", msg).with("cone", json!(one_based(&cone)))
            }
            BundleError::InvalidBound { ray, f, needed } => CliError::validation("bound", msg)
                .with("ray", json!(ray + 1))
                .with("f", json!(f))
                .with("needed", json!(needed)),
            BundleError::FanNotComplete
            | BundleError::ShapeMismatch { .. }
            | BundleError::NotPointed(_)
            | BundleError::BoundLength { .. }
            | BundleError::NotARefinement => CliError::validation("bundle", msg),
            BundleError::Lattice(l) => l.into(),
            BundleError::Chain(c) => c.into(),
            BundleError::Matroid(m) => m.into(),
            BundleError::NonIntegralPullback { .. }
            | BundleError::NonIntegralCharacter { .. }
            | BundleError::MainTheoremViolation { .. } => CliError::internal("bundle", msg),
        }
    }
}

impl From<HrrError> for CliError {
    fn from(e: HrrError) -> Self {
        match e {
            HrrError::UnsupportedDimension { .. } => CliError::validation("hrr", e.to_string()),
            HrrError::Bundle(b) => b.into(),
            HrrError::Chain(c) => c.into(),
            HrrError::Lattice(l) => l.into(),
            _ => CliError::internal("hrr", e.to_string()),
        }
    }
}

impl From<TautError> for CliError {
    fn from(e: TautError) -> Self {
        match e {
            TautError::Bundle(b) => b.into(),
            TautError::Matroid(m) => m.into(),
            _ => CliError::validation("taut", e.to_string()),
        }
    }
}
