//! Holds the `acceptance` test target. Kept in its own package so that it
//! runs after the parityq suites under `cargo test --workspace`.
