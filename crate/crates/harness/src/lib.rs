//! Command line and corpus-level measurements for `stego-core`.

pub mod audit;
pub mod backend;
pub mod capacity;
pub mod cli;
pub mod corpus;
pub mod sweep;
pub mod synthetic;

pub use audit::{audit_distortion, DistortionReport};
pub use backend::{load_backend, BackendSpec, LoadedBackend};
pub use capacity::{document_message, measure_capacity, CapacityReport, DEFAULT_MESSAGE_BITS};
pub use corpus::Corpus;
pub use sweep::{sweep, write_csv, SweepRow, CSV_HEADER};
pub use synthetic::{slot_table, synthetic_corpus};
