//! Run configuration: CLI flags, the flat key = value config file, and the
//! render/parse round trip.
//!
//! Grammar: one `key = value` per line, `#` starts a comment, keys are
//! snake_case. Every flag `--some-key` maps to the key `some_key`. Flags
//! override file values. Ranges use the inclusive syntax
//! `start:stop:step` (stop included within half a step).

use crate::error::{Error, Result};
use crate::sweep::StateSpec;
use std::collections::BTreeMap;
use std::path::PathBuf;

/// CLI subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Spectrum,
    FidelitySweep,
    NrevFit,
    Thermalize,
    Peaks,
    BasisDump,
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::Spectrum => "spectrum",
            CommandKind::FidelitySweep => "fidelity-sweep",
            CommandKind::NrevFit => "nrev-fit",
            CommandKind::Thermalize => "thermalize",
            CommandKind::Peaks => "peaks",
            CommandKind::BasisDump => "basis-dump",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "spectrum" => Ok(CommandKind::Spectrum),
            "fidelity-sweep" => Ok(CommandKind::FidelitySweep),
            "nrev-fit" => Ok(CommandKind::NrevFit),
            "thermalize" => Ok(CommandKind::Thermalize),
            "peaks" => Ok(CommandKind::Peaks),
            "basis-dump" => Ok(CommandKind::BasisDump),
            other => Err(Error::Usage(format!(
                "unknown command '{other}' (spectrum | fidelity-sweep | nrev-fit | thermalize | peaks | basis-dump)"
            ))),
        }
    }
}

/// Scalar or inclusive range `start:stop:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisSpec {
    Scalar(f64),
    Range { start: f64, stop: f64, step: f64 },
}

impl AxisSpec {
    /// Expand to concrete grid values (stop included within half a step).
    pub fn values(&self) -> Vec<f64> {
        match *self {
            AxisSpec::Scalar(v) => vec![v],
            AxisSpec::Range { start, stop, step } => {
                let mut out = Vec::new();
                let mut k = 0usize;
                loop {
                    let v = start + k as f64 * step;
                    if v > stop + 0.5 * step {
                        break;
                    }
                    out.push(v);
                    k += 1;
                }
                out
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let bad = |what: &str| Error::Usage(format!("malformed range '{text}': {what}"));
        match parts.len() {
            1 => parts[0]
                .parse::<f64>()
                .map(AxisSpec::Scalar)
                .map_err(|_| bad("not a number")),
            3 => {
                let start = parts[0].parse::<f64>().map_err(|_| bad("bad start"))?;
                let stop = parts[1].parse::<f64>().map_err(|_| bad("bad stop"))?;
                let step = parts[2].parse::<f64>().map_err(|_| bad("bad step"))?;
                if !(step > 0.0) {
                    return Err(bad("step must be positive"));
                }
                if stop < start {
                    return Err(bad("stop before start"));
                }
                Ok(AxisSpec::Range { start, stop, step })
            }
            _ => Err(bad("expected <v> or <start>:<stop>:<step>")),
        }
    }

    pub fn render(&self) -> String {
        match *self {
            AxisSpec::Scalar(v) => format!("{v:?}"),
            AxisSpec::Range { start, stop, step } => format!("{start:?}:{stop:?}:{step:?}"),
        }
    }
}

/// Stroboscopic-step selection: `lo:hi` (inclusive), a comma list, or a
/// single value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NList(pub Vec<usize>);

impl NList {
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |what: &str| Error::Usage(format!("malformed n list '{text}': {what}"));
        let values: Vec<usize> = if let Some((lo, hi)) = text.split_once(':') {
            let lo: usize = lo.parse().map_err(|_| bad("bad lower bound"))?;
            let hi: usize = hi.parse().map_err(|_| bad("bad upper bound"))?;
            if hi < lo {
                return Err(bad("upper bound below lower"));
            }
            (lo..=hi).collect()
        } else {
            text.split(',')
                .map(|part| part.trim().parse::<usize>().map_err(|_| bad("bad entry")))
                .collect::<Result<_>>()?
        };
        if values.is_empty() {
            return Err(bad("empty"));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("entries must be strictly ascending"));
        }
        Ok(NList(values))
    }

    pub fn render(&self) -> String {
        // contiguous runs render back to lo:hi
        let v = &self.0;
        let contiguous = v.windows(2).all(|w| w[1] == w[0] + 1);
        if contiguous && v.len() > 1 {
            format!("{}:{}", v[0], v[v.len() - 1])
        } else {
            v.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")
        }
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub l: usize,
    pub state: StateSpec,
    pub omega_d: AxisSpec,
    /// Amplitude axis; None only for commands with a computed default
    /// (nrev-fit derives its grid from the fit window) or no h axis at all
    /// (basis-dump).
    pub h: Option<AxisSpec>,
    /// Stroboscopic steps for sweep-style commands.
    pub n: Option<NList>,
    /// Horizon for thermalize.
    pub n_max: Option<usize>,
    pub steps_per_period: usize,
    pub eta: f64,
    pub fit_window: Option<(f64, f64)>,
    pub min_height: f64,
    pub min_separation: usize,
    pub output: PathBuf,
    pub workers: usize,
    pub plot_script: bool,
}

impl RunConfig {
    /// Render as config-file text; `parse` of this text reproduces the
    /// config exactly.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command = {}\n", self.command.name()));
        out.push_str(&format!("l = {}\n", self.l));
        out.push_str(&format!("state = {}\n", self.state.label()));
        out.push_str(&format!("omega_d = {}\n", self.omega_d.render()));
        if let Some(h) = &self.h {
            out.push_str(&format!("h = {}\n", h.render()));
        }
        if let Some(n) = &self.n {
            out.push_str(&format!("n = {}\n", n.render()));
        }
        if let Some(n_max) = self.n_max {
            out.push_str(&format!("n_max = {n_max}\n"));
        }
        out.push_str(&format!("steps_per_period = {}\n", self.steps_per_period));
        out.push_str(&format!("eta = {:?}\n", self.eta));
        if let Some((lo, hi)) = self.fit_window {
            out.push_str(&format!("fit_window = {lo:?}:{hi:?}\n"));
        }
        out.push_str(&format!("min_height = {:?}\n", self.min_height));
        out.push_str(&format!("min_separation = {}\n", self.min_separation));
        out.push_str(&format!("output = {}\n", self.output.display()));
        out.push_str(&format!("workers = {}\n", self.workers));
        out.push_str(&format!("plot_script = {}\n", self.plot_script));
        out
    }

    /// Parse rendered config text (used for the round trip and `--config`).
    pub fn parse(text: &str) -> Result<Self> {
        let kv = parse_key_values(text)?;
        let command = CommandKind::parse(
            kv.get("command")
                .ok_or_else(|| Error::Usage("config missing 'command'".into()))?,
        )?;
        build_config(command, &kv)
    }
}

/// Parse `key = value` lines with `#` comments into a map, rejecting
/// unknown keys.
fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    const KNOWN: &[&str] = &[
        "command",
        "l",
        "state",
        "omega_d",
        "h",
        "n",
        "n_max",
        "steps_per_period",
        "eta",
        "fit_window",
        "min_height",
        "min_separation",
        "output",
        "workers",
        "plot_script",
    ];
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Usage(format!("config line {} has no '=': '{raw}'", lineno + 1))
        })?;
        let key = key.trim().to_string();
        if !KNOWN.contains(&key.as_str()) {
            return Err(Error::Usage(format!("unknown config key '{key}'")));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn build_config(command: CommandKind, kv: &BTreeMap<String, String>) -> Result<RunConfig> {
    let get = |key: &str| kv.get(key).map(|s| s.as_str());
    let l: usize = get("l")
        .ok_or_else(|| Error::Usage("missing required parameter 'l' (--L)".into()))?
        .parse()
        .map_err(|_| Error::Usage("bad chain length".into()))?;
    let state = match get("state") {
        Some(text) => StateSpec::parse(text)?,
        None => StateSpec::Neel,
    };
    let omega_d = match get("omega_d") {
        Some(text) => AxisSpec::parse(text)?,
        None => AxisSpec::Scalar(5.0),
    };
    let h = get("h").map(AxisSpec::parse).transpose()?;
    let n = get("n").map(NList::parse).transpose()?;
    let n_max = get("n_max")
        .map(|s| s.parse::<usize>().map_err(|_| Error::Usage("bad n_max".into())))
        .transpose()?;
    if n.is_some() && n_max.is_some() {
        return Err(Error::Usage("contradictory parameters: give 'n' or 'n_max', not both".into()));
    }
    let steps_per_period = get("steps_per_period")
        .map(|s| s.parse::<usize>().map_err(|_| Error::Usage("bad steps_per_period".into())))
        .transpose()?
        .unwrap_or(crate::propagation::DEFAULT_STEPS_PER_PERIOD);
    let eta = get("eta")
        .map(|s| s.parse::<f64>().map_err(|_| Error::Usage("bad eta".into())))
        .transpose()?
        .unwrap_or(crate::floquet::DEFAULT_ETA);
    let fit_window = get("fit_window")
        .map(|s| -> Result<(f64, f64)> {
            let (lo, hi) = s
                .split_once(':')
                .ok_or_else(|| Error::Usage("fit_window must be lo:hi".into()))?;
            let lo: f64 = lo.parse().map_err(|_| Error::Usage("bad fit window low edge".into()))?;
            let hi: f64 = hi.parse().map_err(|_| Error::Usage("bad fit window high edge".into()))?;
            if hi <= lo {
                return Err(Error::Usage("fit window high edge must exceed low edge".into()));
            }
            Ok((lo, hi))
        })
        .transpose()?;
    let min_height = get("min_height")
        .map(|s| s.parse::<f64>().map_err(|_| Error::Usage("bad min_height".into())))
        .transpose()?
        .unwrap_or(0.1);
    let min_separation = get("min_separation")
        .map(|s| s.parse::<usize>().map_err(|_| Error::Usage("bad min_separation".into())))
        .transpose()?
        .unwrap_or(2);
    let output = PathBuf::from(get("output").unwrap_or("."));
    let workers = get("workers")
        .map(|s| s.parse::<usize>().map_err(|_| Error::Usage("bad workers".into())))
        .transpose()?
        .unwrap_or_else(|| {
            std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
        });
    if workers < 1 {
        return Err(Error::Usage("workers must be >= 1".into()));
    }
    let plot_script = get("plot_script")
        .map(|s| match s {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(Error::Usage("plot_script must be true or false".into())),
        })
        .transpose()?
        .unwrap_or(false);

    // per-command requirements
    match command {
        CommandKind::Spectrum | CommandKind::FidelitySweep | CommandKind::Peaks => {
            if h.is_none() {
                return Err(Error::Usage(format!(
                    "command '{}' needs an amplitude axis (--h)",
                    command.name()
                )));
            }
        }
        CommandKind::Thermalize => {
            if h.is_none() {
                return Err(Error::Usage("thermalize needs --h".into()));
            }
            if n_max.is_none() {
                return Err(Error::Usage("thermalize needs --n-max".into()));
            }
        }
        CommandKind::NrevFit | CommandKind::BasisDump => {}
    }
    if matches!(command, CommandKind::FidelitySweep | CommandKind::Peaks) && n.is_none() {
        return Err(Error::Usage(format!("command '{}' needs --n", command.name())));
    }

    Ok(RunConfig {
        command,
        l,
        state,
        omega_d,
        h,
        n,
        n_max,
        steps_per_period,
        eta,
        fit_window,
        min_height,
        min_separation,
        output,
        workers,
        plot_script,
    })
}

/// Parse the CLI: `pxp-floquet <command> [--flag value]...`, with
/// `--config <file>` merged first so explicit flags override it.
pub fn parse_args<I: IntoIterator<Item = String>>(args: I) -> Result<RunConfig> {
    let mut it = args.into_iter();
    let command = CommandKind::parse(
        &it.next().ok_or_else(|| Error::Usage("missing command".into()))?,
    )?;
    let mut kv: BTreeMap<String, String> = BTreeMap::new();
    let mut overrides: BTreeMap<String, String> = BTreeMap::new();
    let mut config_path: Option<PathBuf> = None;
    while let Some(flag) = it.next() {
        let Some(name) = flag.strip_prefix("--") else {
            return Err(Error::Usage(format!("unexpected argument '{flag}'")));
        };
        if name == "plot-script" {
            overrides.insert("plot_script".into(), "true".into());
            continue;
        }
        let value = it
            .next()
            .ok_or_else(|| Error::Usage(format!("flag --{name} needs a value")))?;
        if name == "config" {
            config_path = Some(PathBuf::from(value));
            continue;
        }
        let key = match name {
            "L" => "l".to_string(),
            other => other.replace('-', "_"),
        };
        overrides.insert(key, value);
    }
    if let Some(path) = config_path {
        let text = std::fs::read_to_string(&path)?;
        let from_file = parse_key_values(&text)?;
        for (k, v) in from_file {
            if k != "command" {
                kv.insert(k, v);
            }
        }
    }
    kv.extend(overrides);
    // reuse the config-file validation path
    let mut text = format!("command = {}\n", command.name());
    for (k, v) in &kv {
        text.push_str(&format!("{k} = {v}\n"));
    }
    RunConfig::parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn sweep_example_grid_size() {
        let cfg = parse_args(args(&[
            "fidelity-sweep",
            "--L",
            "12",
            "--omega-d",
            "5",
            "--h",
            "0:16:0.1",
            "--state",
            "neel",
            "--n",
            "1:15",
        ]))
        .unwrap();
        assert_eq!(cfg.l, 12);
        assert_eq!(cfg.h.unwrap().values().len(), 161);
        assert_eq!(cfg.n.unwrap().0, (1..=15).collect::<Vec<_>>());
    }

    #[test]
    fn theta_state_flag() {
        let cfg = parse_args(args(&[
            "spectrum",
            "--L",
            "8",
            "--h",
            "5",
            "--state",
            "theta:0.7853981634",
        ]))
        .unwrap();
        match cfg.state {
            StateSpec::Theta(t) => assert!((t - std::f64::consts::FRAC_PI_4).abs() < 1e-9),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_l_is_usage_error() {
        let err = parse_args(args(&["spectrum", "--h", "1"])).unwrap_err();
        assert!(matches!(err, Error::Usage(_)));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_flag_and_command() {
        assert!(matches!(
            parse_args(args(&["spectrum", "--L", "4", "--h", "1", "--bogus", "3"])),
            Err(Error::Usage(_))
        ));
        assert!(matches!(parse_args(args(&["dance"])), Err(Error::Usage(_))));
    }

    #[test]
    fn contradictory_n_flags() {
        assert!(matches!(
            parse_args(args(&[
                "fidelity-sweep",
                "--L",
                "6",
                "--h",
                "1",
                "--n",
                "1:4",
                "--n-max",
                "9",
            ])),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn malformed_ranges() {
        assert!(AxisSpec::parse("1:2").is_err());
        assert!(AxisSpec::parse("1:2:0").is_err());
        assert!(AxisSpec::parse("2:1:0.5").is_err());
        assert!(AxisSpec::parse("a").is_err());
        assert!(NList::parse("5:2").is_err());
        assert!(NList::parse("3,3").is_err());
        assert!(NList::parse("").is_err());
    }

    #[test]
    fn range_inclusivity_within_half_step() {
        let v = AxisSpec::Range { start: 0.0, stop: 1.0, step: 0.3 }.values();
        assert_eq!(v.len(), 4); // 0.0 0.3 0.6 0.9
        let v = AxisSpec::Range { start: 0.0, stop: 16.0, step: 0.1 }.values();
        assert_eq!(v.len(), 161);
        assert!((v[160] - 16.0).abs() < 1e-12);
    }

    #[test]
    fn render_parse_round_trip() {
        let configs = [
            parse_args(args(&[
                "fidelity-sweep",
                "--L",
                "12",
                "--omega-d",
                "5",
                "--h",
                "0:16:0.1",
                "--n",
                "1:15",
                "--workers",
                "2",
            ]))
            .unwrap(),
            parse_args(args(&[
                "thermalize",
                "--L",
                "12",
                "--omega-d",
                "5",
                "--h",
                "2.4",
                "--state",
                "neel",
                "--n-max",
                "800",
                "--workers",
                "4",
            ]))
            .unwrap(),
            parse_args(args(&[
                "nrev-fit",
                "--L",
                "10",
                "--omega-d",
                "5:7:1",
                "--eta",
                "0.25",
                "--fit-window",
                "1:11.024",
                "--workers",
                "1",
                "--plot-script",
            ]))
            .unwrap(),
            parse_args(args(&[
                "peaks",
                "--L",
                "8",
                "--h",
                "0:12:0.25",
                "--n",
                "9,11,14",
                "--min-height",
                "0.2",
                "--min-separation",
                "3",
                "--workers",
                "2",
                "--state",
                "theta:0.5",
            ]))
            .unwrap(),
        ];
        for cfg in configs {
            let rendered = cfg.render();
            let reparsed = RunConfig::parse(&rendered).unwrap();
            assert_eq!(cfg, reparsed, "round trip failed for\n{rendered}");
        }
    }

    #[test]
    fn config_file_with_flag_override() {
        let dir = std::env::temp_dir().join("pxp_cfg_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        std::fs::write(
            &path,
            "# sweep settings\nl = 6\nomega_d = 5\nh = 0:2:1\nn = 1:3\nstate = neel\n",
        )
        .unwrap();
        let cfg = parse_args(args(&[
            "fidelity-sweep",
            "--config",
            path.to_str().unwrap(),
            "--L",
            "8",
        ]))
        .unwrap();
        assert_eq!(cfg.l, 8); // flag wins
        assert_eq!(cfg.h.unwrap().values(), vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn comments_and_unknown_keys() {
        assert!(RunConfig::parse("command = spectrum\nl = 4\nh = 1\n# note\n").is_ok());
        assert!(matches!(
            RunConfig::parse("command = spectrum\nl = 4\nh = 1\nwibble = 3\n"),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn n_list_render_forms() {
        assert_eq!(NList::parse("1:15").unwrap().render(), "1:15");
        assert_eq!(NList::parse("1,4,9").unwrap().render(), "1,4,9");
        assert_eq!(NList::parse("7").unwrap().render(), "7");
    }
}
