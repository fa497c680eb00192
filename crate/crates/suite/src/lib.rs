//! Acceptance criteria live in `tests/acceptance.rs`; this package exists so
//! the suite runs after every other workspace test target.
