//! Flat `key = value` configuration and the small value grammars shared by
//! flags and config files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qudit_magic::scalar::{parse_rational, ratio_to_f64};
use qudit_magic::thermal::{a12_mix, diag012, hamiltonian_from_reals, phase_point_hamiltonian};
use qudit_magic::{BigRational, Complex64, ComplexMatrix};

use crate::error::CliError;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "QUDIT_MAGIC_OUT_DIR";

pub const KNOWN_KEYS: &[&str] = &[
    "alpha", "alpha_grid", "beta", "beta_grid", "beta_prime", "d", "eps", "eps_grid", "eps_prime", "figure", "format",
    "hamiltonian", "hamiltonian_prime", "log_base", "method", "n", "orders", "out_dir", "output", "p_grid", "q_grid",
    "reference", "state",
];

/// Parsed config file. Keys are normalized to `snake_case`, so `eps-prime`
/// and `eps_prime` are the same key.
#[derive(Clone, Debug, Default)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

pub fn normalize_key(k: &str) -> String {
    k.trim().replace('-', "_").to_ascii_lowercase()
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// One `key = value` per line; `#` starts a comment; blank lines are
    /// ignored; a repeated key is an error.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CliError::Parse(format!("config line {}: expected `key = value`, got {raw:?}", lineno + 1)));
            };
            let key = normalize_key(k);
            if key.is_empty() {
                return Err(CliError::Parse(format!("config line {}: empty key", lineno + 1)));
            }
            if entries.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(CliError::Parse(format!("config line {}: duplicate key `{key}`", lineno + 1)));
            }
        }
        Ok(ConfigFile { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Rejects keys that no command reads, so typos do not pass silently.
    pub fn check_keys(&self) -> Result<(), CliError> {
        match self.entries.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            Some(k) => Err(CliError::Parse(format!("unknown config key `{k}`"))),
            None => Ok(()),
        }
    }
}

/// Merges a flag value over the config file.
pub struct Resolver<'a> {
    file: &'a ConfigFile,
}

impl<'a> Resolver<'a> {
    pub fn new(file: &'a ConfigFile) -> Self {
        Resolver { file }
    }

    /// The flag if given, else the config entry, as a raw string.
    pub fn raw(&self, flag: Option<&str>, key: &str) -> Option<String> {
        flag.map(str::to_string).or_else(|| self.file.get(key).map(str::to_string))
    }

    pub fn parsed<T: FromStr>(&self, flag: Option<&str>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(flag, key)
            .map(|s| s.parse::<T>().map_err(|e| CliError::Parse(format!("{key}: cannot parse {s:?}: {e}"))))
            .transpose()
    }

    pub fn require(&self, flag: Option<&str>, key: &str) -> Result<String, CliError> {
        self.raw(flag, key).ok_or_else(|| CliError::Parse(format!("missing required parameter `{key}`")))
    }
}

/// Resolution order for output directories: flag, config, environment, `.`.
pub fn out_dir(resolver: &Resolver, flag: Option<&str>) -> PathBuf {
    resolver
        .raw(flag, "out_dir")
        .or_else(|| std::env::var(OUT_DIR_ENV).ok().filter(|s| !s.is_empty()))
        .map_or_else(|| PathBuf::from("."), PathBuf::from)
}

/// A number given exactly, with the text it came from (used in file names).
#[derive(Clone, Debug, PartialEq)]
pub struct ExactValue {
    pub text: String,
    pub value: BigRational,
}

impl ExactValue {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let value = parse_rational(s.trim()).map_err(|e| CliError::Parse(e.to_string()))?;
        Ok(ExactValue { text: s.trim().to_string(), value })
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.value)
    }
}

/// A grid: `start:stop:step` (inclusive of `stop` when it lands on the
/// lattice), or a comma-separated list. All arithmetic is exact.
pub fn parse_grid(s: &str) -> Result<Vec<ExactValue>, CliError> {
    let s = s.trim();
    let out = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Parse(format!("grid {s:?}: expected start:stop:step")));
        }
        let [start, stop, step] = [parts[0], parts[1], parts[2]].map(ExactValue::parse);
        let (start, stop, step) = (start?.value, stop?.value, step?.value);
        if step <= BigRational::from_integer(0.into()) {
            return Err(CliError::Parse(format!("grid {s:?}: step must be positive")));
        }
        let mut out = Vec::new();
        let mut x = start;
        while x <= stop {
            out.push(ExactValue { text: x.to_string(), value: x.clone() });
            x += &step;
            if out.len() > 1_000_000 {
                return Err(CliError::Parse(format!("grid {s:?}: more than 10^6 points")));
            }
        }
        out
    } else {
        s.split(',').map(ExactValue::parse).collect::<Result<Vec<_>, _>>()?
    };
    if out.is_empty() {
        return Err(CliError::Parse(format!("grid {s:?} is empty")));
    }
    Ok(out)
}

/// A comma-separated list of positive integers.
pub fn parse_usize_list(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| CliError::Parse(format!("{t:?}: {e}"))))
        .collect()
}

/// Hamiltonian presets: `diag012`, `A0`, `A12-mix(p,q)`, or 18 reals
/// (row-major, real and imaginary parts interleaved), comma or whitespace
/// separated.
pub fn parse_hamiltonian(s: &str) -> Result<ComplexMatrix, CliError> {
    let t = s.trim();
    match t {
        "diag012" => return Ok(diag012()),
        "A0" => return Ok(phase_point_hamiltonian(0, 0)),
        _ => {}
    }
    if let Some(args) = t.strip_prefix("A12-mix(").and_then(|r| r.strip_suffix(')')) {
        let xs = parse_reals(args)?;
        if xs.len() != 2 {
            return Err(CliError::Parse(format!("{t:?}: A12-mix takes two numbers (p,q)")));
        }
        return Ok(a12_mix(xs[0], xs[1]));
    }
    let xs = parse_reals(t).map_err(|_| CliError::Parse(format!("unknown Hamiltonian {t:?}")))?;
    Ok(hamiltonian_from_reals(&xs)?)
}

fn parse_reals(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|e| CliError::Parse(format!("{t:?}: {e}"))))
        .collect()
}

/// Density-matrix file: one row per line, entries separated by whitespace,
/// each a complex number such as `0.5`, `-1i` or `0.25-0.5i`. Lines starting
/// with `#` are skipped.
pub fn parse_density_matrix(text: &str) -> Result<ComplexMatrix, CliError> {
    let rows: Vec<Vec<Complex64>> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split_whitespace()
                .map(|t| Complex64::from_str(t).map_err(|e| CliError::Parse(format!("matrix entry {t:?}: {e}"))))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Parse("density matrix must be square and non-empty".into()));
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_grammar() {
        let c = ConfigFile::parse("# sweep\neps-prime = 0 # trailing\n\nN=10\n").unwrap();
        assert_eq!(c.get("eps_prime"), Some("0"));
        assert_eq!(c.get("n"), Some("10"));
        assert!(ConfigFile::parse("eps 0.1").is_err());
        assert!(ConfigFile::parse("eps=1\neps=2").is_err());
        assert!(ConfigFile::parse("epss = 1").unwrap().check_keys().is_err());
    }

    #[test]
    fn flags_override_file() {
        let c = ConfigFile::parse("eps = 0.2").unwrap();
        let r = Resolver::new(&c);
        assert_eq!(r.raw(Some("0.1"), "eps").as_deref(), Some("0.1"));
        assert_eq!(r.raw(None, "eps").as_deref(), Some("0.2"));
        assert_eq!(r.raw(None, "beta"), None);
    }

    #[test]
    fn grids_are_exact() {
        let g = parse_grid("0:0.3:0.1").unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g[3].value, BigRational::new(3.into(), 10.into()));
        assert_eq!(parse_grid("0.1, 1/3").unwrap()[1].text, "1/3");
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("1:0:1").is_err());
    }

    #[test]
    fn hamiltonians() {
        assert_eq!(parse_hamiltonian("diag012").unwrap(), diag012());
        let m = parse_hamiltonian("A12-mix(0.25, 0.5)").unwrap();
        assert!((m - a12_mix(0.25, 0.5)).norm() < 1e-15);
        let reals = "1 0 0 0 0 0  0 0 2 0 0 0  0 0 0 0 3 0";
        assert_eq!(parse_hamiltonian(reals).unwrap()[(2, 2)], Complex64::new(3.0, 0.0));
        assert!(parse_hamiltonian("A7").is_err());
    }

    #[test]
    fn density_matrices() {
        let m = parse_density_matrix("0.5 0.5i\n-0.5i 0.5\n").unwrap();
        assert_eq!(m[(0, 1)], Complex64::new(0.0, 0.5));
        assert!(parse_density_matrix("1 0\n0").is_err());
    }
}
