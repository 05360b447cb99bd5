//! Run configuration: a flat `key = value` text file with `#` comments.
//! Unknown keys are rejected. Lists are comma separated; grids are written
//! `atoms:mass`.
//!
//! ```text
//! betas = 0, 1, 2, 3, 5
//! grids = 1:1, 3:0.5
//! phi.bump = 0.2, 1.0, 0.2   # used on every 3-atom grid
//! kmax = 8
//! out = reports
//! format = both
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::crosscheck::{ChainTolerance, GridSpec, Truncation, DEFAULT_BETAS, DEFAULT_GRIDS, MOMENT_ORDER_CAP};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Both,
}

impl Format {
    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "both" => Ok(Format::Both),
            _ => Err(Error::Config(format!("format must be json, csv or both, got `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub commutator: f64,
    pub adjoint: f64,
    pub moments: f64,
    pub marginal: f64,
    pub chain: ChainTolerance,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { commutator: 1e-10, adjoint: 1e-10, moments: 1e-8, marginal: 1e-6, chain: ChainTolerance::default() }
    }
}

impl Tolerances {
    /// Every tolerance set to `tol`.
    pub fn uniform(tol: f64) -> Self {
        Tolerances {
            commutator: tol,
            adjoint: tol,
            moments: tol,
            marginal: tol,
            chain: ChainTolerance { exact: tol, numeric: tol, single_atom: tol },
        }
    }

    fn all(&self) -> [f64; 7] {
        let c = self.chain;
        [self.commutator, self.adjoint, self.moments, self.marginal, c.exact, c.numeric, c.single_atom]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CorpusSource {
    Builtin,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dim: usize,
    pub betas: Vec<f64>,
    /// Grids of the moment check.
    pub grids: Vec<GridSpec>,
    /// Named test functions; each is used on the grids of matching size.
    pub phis: BTreeMap<String, Vec<f64>>,
    pub k_max: usize,
    pub n_max: usize,
    /// Single-atom masses of the spectral chain.
    pub areas: Vec<f64>,
    /// `|Δ|` values of the marginal-law checks and tables.
    pub marginal_areas: Vec<f64>,
    pub seeds: Vec<u64>,
    pub commutator_grids: Vec<GridSpec>,
    pub adjoint_grid: GridSpec,
    pub truncation: Truncation,
    pub tolerances: Tolerances,
    pub table_points: usize,
    pub corpus: CorpusSource,
    pub out: PathBuf,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dim: 1,
            betas: DEFAULT_BETAS.to_vec(),
            grids: DEFAULT_GRIDS.to_vec(),
            phis: BTreeMap::new(),
            k_max: MOMENT_ORDER_CAP,
            n_max: 6,
            areas: vec![0.5, 1.0, 2.0],
            marginal_areas: vec![0.5, 1.0, 2.0],
            seeds: (0..10).collect(),
            commutator_grids: vec![GridSpec::new(1, 0.5), GridSpec::new(2, 0.5), GridSpec::new(3, 0.5)],
            adjoint_grid: GridSpec::new(3, 0.5),
            truncation: Truncation::default(),
            tolerances: Tolerances::default(),
            table_points: 201,
            corpus: CorpusSource::Builtin,
            out: PathBuf::from("reports"),
            format: Format::Json,
        }
    }
}

fn cfg_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("line {line}: {msg}"))
}

fn parse_list<T: std::str::FromStr>(value: &str) -> std::result::Result<Vec<T>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|_| format!("cannot parse `{s}`")))
        .collect()
}

fn parse_one<T: std::str::FromStr>(value: &str) -> std::result::Result<T, String> {
    value.trim().parse().map_err(|_| format!("cannot parse `{}`", value.trim()))
}

/// `atoms:mass` pairs, comma separated.
pub fn parse_grids(value: &str) -> std::result::Result<Vec<GridSpec>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|g| {
            let (a, v) = g.split_once(':').ok_or_else(|| format!("grid `{g}` is not `atoms:mass`"))?;
            Ok(GridSpec::new(parse_one(a)?, parse_one(v)?))
        })
        .collect()
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut seen = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| cfg_err(line_no, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            if let Some(first) = seen.insert(key.to_string(), line_no) {
                return Err(cfg_err(line_no, format!("`{key}` already set on line {first}")));
            }
            cfg.set(key, value).map_err(|msg| cfg_err(line_no, format!("{key}: {msg}")))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        if let Some(name) = key.strip_prefix("phi.") {
            if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(format!("bad function name `{name}`"));
            }
            self.phis.insert(name.to_string(), parse_list(value)?);
            return Ok(());
        }
        match key {
            "dim" => self.dim = parse_one(value)?,
            "betas" => self.betas = parse_list(value)?,
            "grids" => self.grids = parse_grids(value)?,
            "kmax" => self.k_max = parse_one(value)?,
            "nmax" => self.n_max = parse_one(value)?,
            "areas" => self.areas = parse_list(value)?,
            "marginal_areas" => self.marginal_areas = parse_list(value)?,
            "seeds" => self.seeds = parse_list(value)?,
            "commutator_grids" => self.commutator_grids = parse_grids(value)?,
            "adjoint_grid" => {
                let g = parse_grids(value)?;
                match g.as_slice() {
                    [one] => self.adjoint_grid = *one,
                    _ => return Err("expects exactly one grid".into()),
                }
            }
            "swn_level" => self.truncation.swn_level = parse_one(value)?,
            "swn_ladder" => self.truncation.swn_ladder = parse_one(value)?,
            "ext_level" => self.truncation.ext_level = parse_one(value)?,
            "tol" => self.tolerances = Tolerances::uniform(parse_one(value)?),
            "tol_commutator" => self.tolerances.commutator = parse_one(value)?,
            "tol_adjoint" => self.tolerances.adjoint = parse_one(value)?,
            "tol_moments" => self.tolerances.moments = parse_one(value)?,
            "tol_marginal" => self.tolerances.marginal = parse_one(value)?,
            "tol_exact" => self.tolerances.chain.exact = parse_one(value)?,
            "tol_numeric" => self.tolerances.chain.numeric = parse_one(value)?,
            "tol_single_atom" => self.tolerances.chain.single_atom = parse_one(value)?,
            "table_points" => self.table_points = parse_one(value)?,
            "corpus" => {
                self.corpus = match value {
                    "builtin" => CorpusSource::Builtin,
                    path => CorpusSource::File(PathBuf::from(path)),
                }
            }
            "out" => self.out = PathBuf::from(value),
            "format" => self.format = value.parse().map_err(|e: Error| e.to_string())?,
            _ => return Err("unknown key".into()),
        }
        Ok(())
    }

    /// Checks the invariants: tolerances positive, truncations at least 1,
    /// `β >= 0`, positive masses, nonempty lists.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.dim == 0 {
            return bad("dim must be at least 1".into());
        }
        if self.betas.is_empty() || self.betas.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
            return bad(format!("betas must be a nonempty list of finite values >= 0, got {:?}", self.betas));
        }
        for g in self.grids.iter().chain(&self.commutator_grids).chain([&self.adjoint_grid]) {
            if g.atoms == 0 || !(g.cell_mass > 0.0 && g.cell_mass.is_finite()) {
                return bad(format!("grid {}:{} needs atoms >= 1 and a positive mass", g.atoms, g.cell_mass));
            }
        }
        if self.grids.is_empty() || self.commutator_grids.is_empty() {
            return bad("grid lists must be nonempty".into());
        }
        for (name, values) in &self.phis {
            if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
                return bad(format!("phi.{name} must be a nonempty list of finite values"));
            }
        }
        if self.k_max > MOMENT_ORDER_CAP {
            return bad(format!("kmax is capped at {MOMENT_ORDER_CAP}, got {}", self.k_max));
        }
        if self.n_max == 0 || self.n_max > 8 {
            return bad(format!("nmax must be in 1..=8, got {}", self.n_max));
        }
        for a in self.areas.iter().chain(&self.marginal_areas) {
            if !(*a > 0.0 && a.is_finite()) {
                return bad(format!("areas must be positive, got {a}"));
            }
        }
        if self.seeds.is_empty() {
            return bad("seeds must be nonempty".into());
        }
        let t = self.truncation;
        if t.swn_level < 1 || t.swn_ladder < 1 || t.ext_level < 1 {
            return bad("truncations must be at least 1".into());
        }
        if self.tolerances.all().iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return bad("tolerances must be positive".into());
        }
        if self.table_points < 2 {
            return bad("table_points must be at least 2".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        RunConfig::default().validate().unwrap();
        assert_eq!(RunConfig::parse("# nothing\n\n").unwrap(), RunConfig::default());
    }

    #[test]
    fn parses_keys() {
        let cfg = RunConfig::parse(
            "betas = 1, 2.5\ngrids = 2:0.25 # two atoms\nphi.f = 1, -1\nkmax = 4\nformat = both\ntol_moments = 1e-9\n",
        )
        .unwrap();
        assert_eq!(cfg.betas, vec![1.0, 2.5]);
        assert_eq!(cfg.grids, vec![GridSpec::new(2, 0.25)]);
        assert_eq!(cfg.phis["f"], vec![1.0, -1.0]);
        assert_eq!(cfg.k_max, 4);
        assert_eq!(cfg.format, Format::Both);
        assert_eq!(cfg.tolerances.moments, 1e-9);
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "colour = red",
            "betas = -1",
            "tol = 0",
            "swn_level = 0",
            "kmax = 9",
            "grids = 3",
            "betas = 1\nbetas = 2",
            "just words",
            "format = xml",
            "phi.f =",
        ] {
            match RunConfig::parse(text) {
                Err(Error::Config(_)) => {}
                other => panic!("{text}: {other:?}"),
            }
        }
        let err = RunConfig::parse("\n\ncolour = red").unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
    }
}
