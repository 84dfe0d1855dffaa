use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qderiv::applications::{AnsatzKind, StepMethod, VqeSetup};
use qderiv::operators::Encoding;
use qderiv::report::Format;
use qderiv::simulator::Engine;

use crate::args::{CommandKind, Flags};
use crate::error::CliError;

/// Inclusive, evenly spaced `start:stop:points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points).map(|i| self.start + step * i as f64).collect()
    }
}

impl FromStr for Grid {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(format!("grid `{s}` is not start:stop:points"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad number `{t}` in grid `{s}`"));
        let (start, stop) = (num(a)?, num(b)?);
        let points: usize = n.trim().parse().map_err(|_| format!("bad point count `{n}` in grid `{s}`"))?;
        if start.partial_cmp(&stop) != Some(std::cmp::Ordering::Less) || points < 2 {
            return Err(format!("grid `{s}` needs start < stop and at least 2 points"));
        }
        Ok(Grid { start, stop, points })
    }
}

/// Fully resolved settings of one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub molecule: PathBuf,
    pub mapping: Encoding,
    pub taper: bool,
    pub ansatz: AnsatzKind,
    pub depth: usize,
    pub engine: Engine,
    pub seed: u64,
    pub grid: Option<Grid>,
    pub theta_grid: Option<Grid>,
    pub method: StepMethod,
    pub gamma: f64,
    pub ctol: f64,
    pub field_step: f64,
    pub field_axis: Option<usize>,
    pub reactants: Option<Vec<f64>>,
    pub products: Option<Vec<f64>>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub surface_out: Option<PathBuf>,
    pub record: Option<PathBuf>,
    /// Effective settings as rendered strings, for report metadata.
    pub echo: BTreeMap<String, String>,
}

const KEYS: [&str; 21] = [
    "molecule", "grid", "mapping", "taper", "ansatz", "depth", "engine", "shots", "seed", "method",
    "gamma", "ctol", "field-step", "field-axis", "theta-grid", "reactants", "products",
    "surface-out", "record", "format", "out",
];
const PATH_KEYS: [&str; 4] = ["molecule", "out", "surface-out", "record"];

/// Reads `key = value` lines; `#` starts a comment. Relative paths are
/// taken relative to the file's directory.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new(""));
    let mut map = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!("{}:{}: expected key = value", path.display(), k + 1)));
        };
        let (key, value) = (key.trim().replace('_', "-"), value.trim().to_string());
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("{}:{}: unknown key `{key}`", path.display(), k + 1)));
        }
        let value = if PATH_KEYS.contains(&key.as_str()) && Path::new(&value).is_relative() {
            base.join(&value).to_string_lossy().into_owned()
        } else {
            value
        };
        map.insert(key, value);
    }
    Ok(map)
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::Usage(format!("--{key} {value}: {e}")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>, CliError> {
    value.split(',').map(|v| parse(key, v.trim())).collect()
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::Usage(format!("--{key} {value}: expected true or false"))),
    }
}

fn parse_axis(value: &str) -> Result<usize, CliError> {
    match value.to_ascii_lowercase().as_str() {
        "x" => Ok(0),
        "y" => Ok(1),
        "z" => Ok(2),
        _ => Err(CliError::Usage(format!("--field-axis {value}: expected x, y or z"))),
    }
}

impl RunConfig {
    pub fn resolve(command: CommandKind, flags: &Flags) -> Result<Self, CliError> {
        let mut map = match &flags.config {
            Some(p) => read_config_file(Path::new(p))?,
            None => BTreeMap::new(),
        };
        for (key, value) in flags.pairs() {
            if let Some(v) = value {
                map.insert(key.to_string(), v);
            }
        }
        let get = |k: &str| map.get(k).map(String::as_str);

        let molecule = PathBuf::from(
            get("molecule").ok_or_else(|| CliError::Usage("--molecule is required".into()))?,
        );
        let mapping = get("mapping").map_or(Ok(Encoding::BravyiKitaev), |v| parse("mapping", v))?;
        let taper = get("taper").map_or(Ok(false), |v| parse_bool("taper", v))?;
        let default_ansatz = match command {
            CommandKind::Scan | CommandKind::Optimize | CommandKind::Derivative => AnsatzKind::Hea,
            CommandKind::Response | CommandKind::Ts | CommandKind::Excited => AnsatzKind::Excitation,
        };
        let ansatz = get("ansatz").map_or(Ok(default_ansatz), |v| parse("ansatz", v))?;
        let depth = match get("depth") {
            Some(v) => parse::<usize>("depth", v)?,
            None if ansatz == AnsatzKind::Hea => VqeSetup::default().depth,
            None => 1,
        };
        if depth == 0 {
            return Err(CliError::Usage("--depth must be at least 1".into()));
        }
        let seed = get("seed").map_or(Ok(0), |v| parse::<u64>("seed", v))?;
        let engine = match (get("engine").unwrap_or("exact"), get("shots")) {
            ("exact", None) => Engine::Exact,
            ("exact", Some(_)) => return Err(CliError::Usage("--shots applies to the sampled engine only".into())),
            ("sampled", Some(k)) => {
                let shots = parse::<u64>("shots", k)?;
                if shots == 0 {
                    return Err(CliError::Usage("--shots must be positive".into()));
                }
                Engine::Sampled { shots, seed }
            }
            ("sampled", None) => return Err(CliError::Usage("--engine sampled needs --shots".into())),
            (other, _) => return Err(CliError::Usage(format!("--engine {other}: expected exact or sampled"))),
        };
        let default_grid = match command {
            CommandKind::Scan => Some("0.2:1.5:27"),
            CommandKind::Response => Some("0.3:1.6:14"),
            CommandKind::Excited => Some("0.24:1.54:14"),
            _ => None,
        };
        let grid = get("grid").or(default_grid).map(|v| parse::<Grid>("grid", v)).transpose()?;
        let theta_grid = get("theta-grid").map(|v| parse::<Grid>("theta-grid", v)).transpose()?;
        let method = get("method").map_or(Ok(StepMethod::Gradient), |v| parse("method", v))?;
        let default_gamma = if command == CommandKind::Ts { 1.0 } else { method.default_gamma() };
        let gamma = get("gamma").map_or(Ok(default_gamma), |v| parse::<f64>("gamma", v))?;
        let ctol = get("ctol").map_or(Ok(1e-3), |v| parse::<f64>("ctol", v))?;
        let field_step = get("field-step").map_or(Ok(1e-3), |v| parse::<f64>("field-step", v))?;
        for (key, value) in [("gamma", gamma), ("ctol", ctol), ("field-step", field_step)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(CliError::Usage(format!("--{key} must be positive")));
            }
        }
        let field_axis = get("field-axis").map(parse_axis).transpose()?;
        let reactants = get("reactants").map(|v| parse_list("reactants", v)).transpose()?;
        let products = get("products").map(|v| parse_list("products", v)).transpose()?;
        let format = get("format").map_or(Ok(Format::Csv), |v| parse("format", v))?;
        let path = |k: &str| get(k).map(PathBuf::from);

        let mut echo: BTreeMap<String, String> = map.clone();
        echo.insert("mapping".into(), mapping.to_string());
        echo.insert("taper".into(), taper.to_string());
        echo.insert("ansatz".into(), format!("{ansatz:?}").to_lowercase());
        echo.insert("depth".into(), depth.to_string());
        echo.insert("engine".into(), if engine.is_exact() { "exact" } else { "sampled" }.into());
        echo.insert("seed".into(), seed.to_string());
        echo.insert("format".into(), format.to_string());
        if let Some(g) = grid {
            echo.insert("grid".into(), format!("{}:{}:{}", g.start, g.stop, g.points));
        }
        if matches!(command, CommandKind::Optimize | CommandKind::Ts) {
            echo.insert("method".into(), method.to_string());
            echo.insert("gamma".into(), gamma.to_string());
            echo.insert("ctol".into(), ctol.to_string());
        }
        if command == CommandKind::Response {
            echo.insert("field-step".into(), field_step.to_string());
        }

        Ok(RunConfig {
            command,
            molecule,
            mapping,
            taper,
            ansatz,
            depth,
            engine,
            seed,
            grid,
            theta_grid,
            method,
            gamma,
            ctol,
            field_step,
            field_axis,
            reactants,
            products,
            format,
            out: path("out"),
            surface_out: path("surface-out"),
            record: path("record"),
            echo,
        })
    }

    /// Ground-state preparation implied by the ansatz, depth, engine and seed.
    pub fn vqe_setup(&self) -> VqeSetup {
        let mut setup = match self.ansatz {
            AnsatzKind::Hea => VqeSetup::default(),
            AnsatzKind::Excitation => VqeSetup::excitation(),
            AnsatzKind::Tapered => VqeSetup::tapered(),
        };
        setup.depth = self.depth;
        setup.engine = self.engine;
        setup.optimizer.seed = self.seed;
        setup
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g: Grid = "0.2:1.5:27".parse().unwrap();
        let v = g.values();
        assert_eq!(v.len(), 27);
        assert!((v[26] - 1.5).abs() < 1e-15 && (v[1] - 0.25).abs() < 1e-15);
        assert!("1.5:0.2:3".parse::<Grid>().is_err());
        assert!("0.2:1.5".parse::<Grid>().is_err());
        assert!("0.2:1.5:1".parse::<Grid>().is_err());
        assert!("-3.14:3.14:5".parse::<Grid>().is_ok());
    }

    #[test]
    fn flags_override_config() {
        let dir = std::env::temp_dir().join(format!("qderiv-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let cfg = dir.join("run.cfg");
        std::fs::write(&cfg, "# pinned\nmolecule = h2.xyz\nmapping = jw\nseed = 4\nfield_step = 0.002\n").unwrap();
        let flags = Flags {
            config: Some(cfg.to_string_lossy().into()),
            seed: Some("9".into()),
            ..Flags::default()
        };
        let rc = RunConfig::resolve(CommandKind::Scan, &flags).unwrap();
        assert_eq!(rc.molecule, dir.join("h2.xyz"));
        assert_eq!(rc.mapping, Encoding::JordanWigner);
        assert_eq!(rc.seed, 9);
        assert_eq!(rc.field_step, 0.002);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn shots_only_with_sampling() {
        let base = Flags {
            molecule: Some("h2.xyz".into()),
            ..Flags::default()
        };
        let with = |engine: Option<&str>, shots: Option<&str>| {
            let f = Flags {
                engine: engine.map(str::to_string),
                shots: shots.map(str::to_string),
                ..base.clone()
            };
            RunConfig::resolve(CommandKind::Scan, &f)
        };
        assert!(with(None, Some("100")).is_err());
        assert!(with(Some("sampled"), None).is_err());
        assert!(matches!(
            with(Some("sampled"), Some("100")).unwrap().engine,
            Engine::Sampled { shots: 100, seed: 0 }
        ));
    }
}
