//! The typical point's own cluster is size-biased: its size is one plus a
//! Poisson(m) count.

use std::collections::BTreeMap;

use mcp_distance::analytic::cluster_size_pmf;
use mcp_distance::simulate::{palm_draws, PalmMode};
use mcp_distance::validate::chi_square_gof;
use mcp_distance::{McpParams, SimulationConfig};

fn main() -> Result<(), mcp_distance::Error> {
    let m_bar = 5.0;
    let params = McpParams::new(20e-6, m_bar, 40.0)?;
    let config = SimulationConfig::new(100_000, 160.0, 1);
    let draws = palm_draws(&params, &config, PalmMode::OwnClusterOnly)?;

    let mut counts = BTreeMap::new();
    for d in &draws {
        *counts.entry(d.own_cluster_size).or_insert(0u64) += 1;
    }
    println!("size   observed   expected");
    for (&size, &count) in counts.iter().take(12) {
        let expected = cluster_size_pmf(m_bar, size) * draws.len() as f64;
        println!("{size:4}   {count:8}   {expected:10.1}");
    }
    let counts: Vec<_> = counts.into_iter().collect();
    let chi = chi_square_gof(&counts, |l| cluster_size_pmf(m_bar, l))?;
    println!(
        "chi-square = {:.2} on {} dof, p = {:.3}",
        chi.statistic, chi.degrees_of_freedom, chi.p_value
    );
    let mean = draws.iter().map(|d| d.own_cluster_size as f64).sum::<f64>() / draws.len() as f64;
    println!("mean size = {mean:.4} (m + 1 = {})", m_bar + 1.0);
    Ok(())
}
