//! Command line front end for the Reedy category toolkit.
//!
//! Every subcommand reads presentation files, runs one verification or
//! computation from the core crate, and emits a [`report::Report`]: a
//! versioned envelope with a pass/fail/error verdict that doubles as the
//! process exit code. The table rendering is a pure function of the JSON
//! payload, so the human view and the machine view cannot drift apart.

pub mod commands;
pub mod report;
pub mod textio;
