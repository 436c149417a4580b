//! Library surface of the `casimir` CLI: curve containers, emission, and the
//! compact value-syntax parsers. The binary in `main.rs` is a thin dispatcher
//! over these plus `casimir-core`.

pub mod output;
pub mod parse;
