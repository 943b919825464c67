//! Command-line driver for the driven-PXP Floquet simulator.
//!
//! Exit codes: 0 success, 2 usage error, 3 integration failure, 4 spectral
//! analysis or fit failure, 5 i/o failure.

use pxp_floquet::cli::run_command;
use pxp_floquet::config::parse_args;

const USAGE: &str = "\
pxp-floquet <command> [flags]

commands:
  spectrum        Floquet quasi-energies and overlaps over a drive grid
  fidelity-sweep  stroboscopic fidelities F(nT) over a drive grid
  nrev-fit        revival-index profile n_rev(h) and Bessel-model fits
  thermalize      per-site Bloch vectors and ergodic distances over time
  peaks           crest positions/widths of fidelity slices
  basis-dump      blockaded basis listing (debug)

common flags:
  --L <sites>                 chain length (required)
  --state <spec>              polarized | neel | theta:<radians>  [neel]
  --omega-d <v|a:b:s>         drive frequency or range             [5]
  --h <v|a:b:s>               drive amplitude or range
  --n <lo:hi|list>            stroboscopic steps for sweeps
  --n-max <n>                 horizon for thermalize
  --steps-per-period <n>      Strang substeps per period           [512]
  --eta <f>                   dominant-overlap threshold           [0.3]
  --fit-window <lo:hi>        fit window in h                      [1 : 2.2048*omega_d]
  --min-height <f>            peak detection floor                 [0.1]
  --min-separation <n>        peak separation in grid points       [2]
  --output <dir>              output directory                     [.]
  --workers <n>               thread count                         [all cores]
  --config <file>             flat key = value config file (flags override)
  --plot-script               also emit a gnuplot script
";

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() || args[0] == "--help" || args[0] == "-h" {
        eprint!("{USAGE}");
        std::process::exit(if args.is_empty() { 2 } else { 0 });
    }
    let config = match parse_args(args) {
        Ok(config) => config,
        Err(err) => {
            eprintln!("pxp-floquet: {err}");
            eprint!("{USAGE}");
            std::process::exit(err.exit_code());
        }
    };
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build_global();
    if let Err(err) = run_command(&config) {
        eprintln!("pxp-floquet: {err}");
        std::process::exit(err.exit_code());
    }
}
