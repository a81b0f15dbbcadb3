//! Property and integration suites, compiled into the acceptance binary so
//! one failing criterion does not stop them from running.

mod lattice_props;
mod numerics_props;
mod pipeline_tests;
mod reduction_props;
mod sieve_search_props;
