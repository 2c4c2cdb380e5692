//! Structured reports for the CLI: human-readable sections plus a flat
//! machine-readable key/value block.

