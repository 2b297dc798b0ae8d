pub mod checks;
pub mod error;
pub mod extended;
pub mod jones_fig8;
pub mod limits;
pub mod mahler;
pub mod satellite;
pub mod signed_log;
pub mod special_functions;
