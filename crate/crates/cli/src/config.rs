//! Run configuration: INI-style file merged with command-line overrides.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;

use stagger_core::{ModelParams, C64};

use crate::CliError;

pub const KEYS: [&str; 14] = [
    "gamma", "t", "sizes", "twist", "sector", "legs", "levels", "integers", "symmetric", "function", "tau_grid", "r_grid",
    "out", "format",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Bethe,
    Partition,
    Tba,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Spectrum => "spectrum",
            Command::Bethe => "bethe",
            Command::Partition => "partition",
            Command::Tba => "tba",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionFn {
    Untwisted,
    Twisted,
    Potts,
}

/// Everything a command needs, fully resolved.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub params: ModelParams,
    pub sizes: Vec<usize>,
    pub twist: f64,
    pub sector: Vec<i32>,
    pub legs: Vec<u32>,
    pub levels: usize,
    pub integers: Option<(Vec<f64>, Vec<f64>)>,
    pub symmetric: bool,
    pub function: PartitionFn,
    pub tau_grid: Vec<C64>,
    pub r_grid: Vec<f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    /// Merged key/value pairs, echoed in the provenance header.
    pub raw: BTreeMap<String, String>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses `key = value` lines; `#` and `;` start comments, `[section]` lines are ignored.
pub fn parse_ini(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split(['#', ';']).next().unwrap_or("").trim();
        if line.is_empty() || (line.starts_with('[') && line.ends_with(']')) {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected `key = value`", i + 1)))?;
        let key = k.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(usage(format!("config line {}: unknown key `{}`", i + 1, k.trim())));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn relevant(cmd: Command) -> &'static [&'static str] {
    match cmd {
        Command::Spectrum => &["gamma", "t", "sizes", "twist", "sector", "legs", "levels", "format"],
        Command::Bethe => &["gamma", "t", "sizes", "twist", "sector", "integers", "symmetric", "format"],
        Command::Partition => &["gamma", "t", "twist", "function", "tau_grid", "format"],
        Command::Tba => &["gamma", "t", "r_grid", "format"],
    }
}

fn defaults(cmd: Command) -> BTreeMap<String, String> {
    let mut d = BTreeMap::new();
    let mut set = |k: &str, v: &str| {
        d.insert(k.to_string(), v.to_string());
    };
    set("twist", "0");
    set("levels", "10");
    set("function", "z");
    set("tau_grid", "0,1");
    set("r_grid", "1e-4:10:11");
    set("format", "csv");
    set("symmetric", "false");
    match cmd {
        Command::Spectrum => {
            set("sizes", "4,6,8");
            set("sector", "0");
        }
        Command::Bethe => set("sizes", "4"),
        Command::Partition | Command::Tba => {}
    }
    d
}

fn number(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    let lower = s.to_ascii_lowercase();
    // a/b and pi/b forms, for angles
    if let Some((a, b)) = lower.split_once('/') {
        let a = if a.trim() == "pi" { PI } else { number(a)? };
        return Ok(a / number(b)?);
    }
    if lower == "pi" {
        return Ok(PI);
    }
    s.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| usage(format!("`{s}` is not a number")))
}

fn list<T>(s: &str, what: &str, f: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, CliError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| f(x.trim()).ok_or_else(|| usage(format!("invalid {what} `{}`", x.trim()))))
        .collect()
}

/// `a:b:n` (inclusive, n points) or a single number.
fn range(s: &str, log: bool) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [x] => Ok(vec![number(x)?]),
        [a, b, n] => {
            let (a, b) = (number(a)?, number(b)?);
            let n: usize = n.trim().parse().map_err(|_| usage(format!("invalid point count in `{s}`")))?;
            if n == 0 {
                return Err(usage(format!("empty range `{s}`")));
            }
            if log && (a <= 0.0 || b <= 0.0) {
                return Err(usage(format!("log range `{s}` needs positive ends")));
            }
            Ok((0..n)
                .map(|i| {
                    let f = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
                    if i == 0 {
                        a
                    } else if i == n - 1 {
                        b
                    } else if log {
                        (a.ln() + f * (b.ln() - a.ln())).exp()
                    } else {
                        a + f * (b - a)
                    }
                })
                .collect())
        }
        _ => Err(usage(format!("expected `a:b:n` or a number, got `{s}`"))),
    }
}

/// `RE,IM` where each part is a number or an `a:b:n` range.
fn tau_grid(s: &str) -> Result<Vec<C64>, CliError> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| usage(format!("tau grid `{s}` must be `RE,IM` (each a number or a:b:n)")))?;
    let (re, im) = (range(re, false)?, range(im, false)?);
    let mut out = Vec::with_capacity(re.len() * im.len());
    for &y in &im {
        if y <= 0.0 {
            return Err(usage(format!("Im τ must be positive, got {y}")));
        }
        for &x in &re {
            out.push(C64::new(x, y));
        }
    }
    Ok(out)
}

/// `r` or `r0,r1` root counts; `I0;I1` for explicit integers.
fn integers(s: &str) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let (a, b) = s
        .split_once(';')
        .ok_or_else(|| usage("integers must be `I0 list;I1 list`, e.g. `-0.5,0.5;-0.5,0.5`"))?;
    let parse = |x: &str| list(x, "Bethe integer", |v| number(v).ok());
    Ok((parse(a)?, parse(b)?))
}

fn boolean(s: &str) -> Result<bool, CliError> {
    match s.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(usage(format!("`{s}` is not a boolean"))),
    }
}

impl RunConfig {
    /// Defaults, then config file, then flags.
    pub fn resolve(
        command: Command,
        file: BTreeMap<String, String>,
        flags: BTreeMap<String, String>,
    ) -> Result<Self, CliError> {
        let mut raw = defaults(command);
        let given: Vec<String> = file.keys().chain(flags.keys()).cloned().collect();
        // gamma and t are alternatives: a later source replaces both
        for src in [file, flags] {
            if src.contains_key("gamma") || src.contains_key("t") {
                raw.remove("gamma");
                raw.remove("t");
            }
            raw.extend(src);
        }
        let get = |k: &str| raw.get(k).map(String::as_str).unwrap_or("");

        let params = match (raw.get("gamma"), raw.get("t")) {
            (Some(_), Some(_)) => return Err(usage("give either gamma or t, not both")),
            (Some(g), None) => ModelParams::new(number(g)?),
            (None, Some(t)) => ModelParams::from_t(number(t)?),
            (None, None) => return Err(usage("one of --gamma or --t is required")),
        }
        .map_err(|e| usage(e.to_string()))?;

        let twist = match get("twist").trim() {
            "gamma" => params.gamma,
            s => number(s)?,
        };
        let format = match get("format") {
            "csv" => Format::Csv,
            "json" => Format::Json,
            f => return Err(usage(format!("format must be csv or json, got `{f}`"))),
        };
        let function = match get("function") {
            "z" => PartitionFn::Untwisted,
            "twisted" | "zhat" => PartitionFn::Twisted,
            "potts" => PartitionFn::Potts,
            f => return Err(usage(format!("function must be z, twisted or potts, got `{f}`"))),
        };
        let levels: usize = get("levels")
            .parse()
            .ok()
            .filter(|&l| l > 0)
            .ok_or_else(|| usage("levels must be a positive integer"))?;
        let sizes = list(get("sizes"), "size", |x| x.parse::<usize>().ok().filter(|&n| n > 0))?;
        if matches!(command, Command::Spectrum | Command::Bethe) && sizes.is_empty() {
            return Err(usage("the size list is empty"));
        }
        let r_grid = match get("r_grid") {
            s if s.contains(':') => range(s, true)?,
            s => list(s, "scale", |x| number(x).ok())?,
        };
        if command == Command::Tba && (r_grid.is_empty() || r_grid.iter().any(|&r| r <= 0.0)) {
            return Err(usage("r grid must be non-empty and positive"));
        }
        let integers = match raw.get("integers") {
            Some(s) if !s.trim().is_empty() => Some(integers(s)?),
            _ => None,
        };
        Ok(Self {
            command,
            params,
            sizes,
            twist,
            sector: list(get("sector"), "sector charge", |x| x.parse::<i32>().ok())?,
            legs: list(get("legs"), "leg number", |x| x.parse::<u32>().ok())?,
            levels,
            integers,
            symmetric: boolean(get("symmetric"))?,
            function,
            tau_grid: tau_grid(get("tau_grid"))?,
            r_grid,
            out: raw.get("out").filter(|s| !s.is_empty()).map(PathBuf::from),
            format,
            raw: raw
                .into_iter()
                .filter(|(k, _)| given.contains(k) || relevant(command).contains(&k.as_str()))
                .collect(),
        })
    }
}
