//! Host crate for the `acceptance` test target (`tests/acceptance.rs`). It
//! lives apart from the core crate so it runs after every other test binary.
