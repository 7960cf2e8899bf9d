//! Seeded simulation against the analytic CDFs.
//!
//! `cargo run --release --example monte_carlo_oracle -- [samples] [seed]`

use mcp_distance::simulate::{
    default_window_radius, sample_contact_distance, sample_nn_distance_palm,
    sample_nn_distance_window,
};
use mcp_distance::validate::{
    kolmogorov_critical, ks_statistic, ks_two_sample, ks_two_sample_p_value,
};
use mcp_distance::{MaternCdf, McpParams, SimulationConfig};

fn main() -> Result<(), mcp_distance::Error> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(10_000, |s| s.parse().expect("samples"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));

    let params = McpParams::new(20e-6, 30.0, 40.0)?;
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let config = SimulationConfig::new(n, 160.0, seed).with_workers(workers);
    let eval = MaternCdf::new(params);
    let band = kolmogorov_critical(0.05) / (n as f64).sqrt();

    let contact = sample_contact_distance(&params, &config)?;
    let d = ks_statistic(&contact, |r| eval.contact_cdf(r).unwrap());
    println!(
        "contact: KS = {d:.4}  (95% band {band:.4}, {} censored)",
        contact.n_censored()
    );

    let palm = sample_nn_distance_palm(&params, &config)?;
    let d = ks_statistic(&palm, |r| eval.nn_cdf(r).unwrap());
    println!("nearest neighbor, palm sampler: KS = {d:.4}");

    let window = sample_nn_distance_window(
        &params,
        &config,
        default_window_radius(&params, config.r_max),
    )?;
    let d = ks_statistic(&window, |r| eval.nn_cdf(r).unwrap());
    let d2 = ks_two_sample(&palm, &window);
    println!("nearest neighbor, window sampler: KS = {d:.4}");
    println!(
        "palm vs window: D = {d2:.4}, p = {:.3}",
        ks_two_sample_p_value(d2, palm.n_total(), window.n_total())
    );

    println!("\n    r   empirical   analytic");
    for r in [10.0, 20.0, 40.0, 80.0, 160.0] {
        println!(
            "{r:5.0}   {:.4}      {:.4}",
            contact.eval(r)?,
            eval.contact_cdf(r)?
        );
    }
    Ok(())
}
