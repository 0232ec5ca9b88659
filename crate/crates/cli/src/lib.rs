//! Verification suites and report assembly behind the `lhv` binary.
pub mod suites;
