//! Runs the full validation suite and prints the JSON report.

use mcp_distance::validate::ValidationSuite;
use mcp_distance::McpParams;

fn main() -> Result<(), mcp_distance::Error> {
    let mut suite = ValidationSuite::new(McpParams::new(20e-6, 30.0, 40.0)?, 42);
    suite.simulation.workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let report = suite.run()?;
    println!("{}", report.to_json());
    eprintln!("passed: {}", report.passed);
    Ok(())
}
