fn main() {
    if let Some(n) = std::env::var("CLIFFSOLVE_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|n| *n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    std::process::exit(cliffsolve::cli::main_with_args(std::env::args_os()));
}
