//! Command implementations behind the `feynred` binary.
