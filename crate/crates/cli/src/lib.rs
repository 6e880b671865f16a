pub mod report;
pub mod run;
pub mod suites;
pub mod workspace;
