//! Lightweight lexical analysis of Java sources.

mod changes;
pub mod lexer;
mod strip;
mod units;

use thiserror::Error;

pub use changes::{
    affected_units, is_java, method_change_list, render_change_list, AffectedUnit, MethodChange, MethodChangeKind,
    UnitKey, UnitKind, UnitRecord, UnitStatus,
};
pub use strip::{strip_documentation, StripWarning, Stripped};
pub use units::{extract_units, ClassRecord, MethodRecord, TypeKind, Units};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum JavaError {
    #[error("no source provided for {0}")]
    MissingSource(String),
}
