use clap::Parser;
use orbivol::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("ORBIVOL_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // a pool may already exist only if this runs twice; ignore that case
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let code = run(
        &cli,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
