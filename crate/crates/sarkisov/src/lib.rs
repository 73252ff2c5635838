//! Family files, reports, diagrams and the bundled catalogue.

pub mod catalog;
pub mod diagram;
pub mod report;
pub mod schema;
