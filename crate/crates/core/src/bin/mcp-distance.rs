fn main() {
    std::process::exit(mcp_distance::cli::run(std::env::args_os()));
}
