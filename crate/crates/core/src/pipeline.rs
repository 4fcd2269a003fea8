//! Placeholder; high-level pipelines arrive with the CLI.
