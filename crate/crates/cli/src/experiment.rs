//! Experiment grids: a config of `key = value` lines, optionally split into
//! `[row]` sections. Lines before the first section are defaults for every
//! section. A comma-separated value lists alternatives, and each section
//! expands to the cartesian product of its lists. Every resulting cell
//! runs once per seed; row `i` uses the seed derived from
//! `(master_seed, i)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use itertools::Itertools;
use ugdecomp_core::exact::brute_force_assignment;
use ugdecomp_core::gen::{generate, CostModel, Family, GenSpec};
use ugdecomp_core::lp::DEFAULT_TOL;
use ugdecomp_core::{seed, Error, InstanceKind, Scheme};

use crate::error::{usage, CliError};
use crate::format::{kind_name, parse_kind, Report};
use crate::pipeline::{self, Algo, RoundSettings};

/// Objectives at or below this count as zero when forming ratios.
const LP_ZERO: f64 = 1e-9;
/// Slack for the per-row sanity checks against the LP and the optimum.
const CHECK_TOL: f64 = 1e-6;

const KEYS: &[&str] = &[
    "family", "rows", "cols", "n", "k", "kind", "noise", "cost", "seeds", "algo", "scheme", "delta", "r",
    "repeats", "tol", "max_rounds", "oracle",
];

type Section = BTreeMap<String, Vec<String>>;

/// Parses the config into sections, each already merged with the defaults.
pub fn parse_config(text: &str) -> Result<(u64, Vec<Section>), String> {
    let mut master_seed = 0;
    let mut defaults = Section::new();
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line == "[row]" {
            sections.push(Section::new());
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value` or `[row]`", i + 1))?;
        let key = key.trim();
        let values: Vec<String> = value.split(',').map(|v| v.trim().to_string()).collect();
        if values.iter().any(String::is_empty) {
            return Err(format!("line {}: empty value for `{key}`", i + 1));
        }
        if key == "master_seed" {
            if !sections.is_empty() || values.len() != 1 {
                return Err(format!("line {}: master_seed must be a single default", i + 1));
            }
            master_seed = values[0]
                .parse()
                .map_err(|_| format!("line {}: bad master_seed", i + 1))?;
            continue;
        }
        if !KEYS.contains(&key) {
            return Err(format!("line {}: unknown key `{key}`", i + 1));
        }
        sections.last_mut().unwrap_or(&mut defaults).insert(key.to_string(), values);
    }
    if sections.is_empty() {
        sections.push(Section::new());
    }
    for s in &mut sections {
        for (k, v) in &defaults {
            s.entry(k.clone()).or_insert_with(|| v.clone());
        }
    }
    Ok((master_seed, sections))
}

/// Settings for one cell of the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub family_name: String,
    pub family: Family,
    pub k: usize,
    pub kind: InstanceKind,
    pub noise: f64,
    pub cost: CostModel,
    pub seeds: usize,
    pub algo: Algo,
    pub scheme: Scheme,
    pub delta: Option<f64>,
    pub r: usize,
    pub repeats: usize,
    pub tol: f64,
    pub max_rounds: Option<usize>,
    pub oracle: bool,
}

fn field<T: std::str::FromStr>(map: &BTreeMap<&str, &str>, key: &str) -> Result<Option<T>, String> {
    map.get(key)
        .map(|v| v.parse().map_err(|_| format!("cannot parse {key} = {v}")))
        .transpose()
}

impl Cell {
    fn from_values(map: &BTreeMap<&str, &str>) -> Result<Self, String> {
        let family_name = map.get("family").copied().unwrap_or("grid").to_string();
        let family = pipeline::family(&family_name, field(map, "rows")?, field(map, "cols")?, field(map, "n")?)?;
        let kind_str = map.get("kind").copied().unwrap_or("2lin");
        let kind = parse_kind(kind_str).ok_or_else(|| format!("unknown kind `{kind_str}`"))?;
        let cost = match map.get("cost").copied().unwrap_or("unit") {
            "unit" => CostModel::Unit,
            "uniform" => CostModel::Uniform,
            other => return Err(format!("unknown cost model `{other}`")),
        };
        let algo = match map.get("algo").copied().unwrap_or("auto") {
            "auto" if kind == InstanceKind::TwoLin => Algo::TwoLin,
            "auto" | "ug" => Algo::Ug,
            "2lin" if kind == InstanceKind::TwoLin => Algo::TwoLin,
            "2lin" => return Err("algo 2lin needs kind 2lin".into()),
            other => return Err(format!("unknown algo `{other}`")),
        };
        let r = field(map, "r")?.unwrap_or(5);
        let scheme = match map.get("scheme").copied().unwrap_or("ball") {
            "ball" => Scheme::BallCarve,
            "kpr" => Scheme::Kpr { r },
            other => return Err(format!("unknown scheme `{other}`")),
        };
        let oracle = match map.get("oracle").copied().unwrap_or("auto") {
            "auto" => true,
            "off" => false,
            other => return Err(format!("oracle must be auto or off, not `{other}`")),
        };
        Ok(Cell {
            family_name,
            family,
            k: field(map, "k")?.ok_or("missing k")?,
            kind,
            noise: field(map, "noise")?.unwrap_or(0.0),
            cost,
            seeds: field(map, "seeds")?.unwrap_or(1),
            algo,
            scheme,
            delta: field(map, "delta")?,
            r,
            repeats: field(map, "repeats")?.unwrap_or(20),
            tol: field(map, "tol")?.unwrap_or(DEFAULT_TOL),
            max_rounds: field(map, "max_rounds")?,
            oracle,
        })
    }
}

/// Every cell of every section, in section order. Within a section the
/// keys are taken alphabetically with the last key varying fastest.
pub fn expand(sections: &[Section]) -> Result<Vec<Cell>, String> {
    let mut cells = Vec::new();
    for s in sections {
        let keys: Vec<&str> = s.keys().map(String::as_str).collect();
        let combos: Vec<Vec<&String>> = if s.is_empty() {
            vec![Vec::new()]
        } else {
            s.values().map(|v| v.iter()).multi_cartesian_product().collect()
        };
        for combo in combos {
            let map: BTreeMap<&str, &str> = keys.iter().copied().zip(combo.iter().map(|v| v.as_str())).collect();
            cells.push(Cell::from_values(&map)?);
        }
    }
    Ok(cells)
}

#[derive(Clone, Debug)]
pub struct Row {
    pub index: usize,
    pub cell: Cell,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub lp: Option<f64>,
    pub unsat: Option<f64>,
    pub opt: Option<f64>,
    pub delta: Option<f64>,
    pub resplits: usize,
    pub wall_time: f64,
    pub status: Result<(), String>,
}

impl Row {
    pub fn ratio(&self) -> Option<f64> {
        match (self.lp, self.unsat) {
            (Some(lp), Some(u)) if lp > LP_ZERO => Some(u / lp),
            _ => None,
        }
    }
}

fn run_row(index: usize, cell: &Cell, master_seed: u64) -> Row {
    let row_seed = seed::derive(master_seed, index as u64);
    let start = Instant::now();
    let mut row = Row {
        index,
        cell: cell.clone(),
        seed: row_seed,
        n: cell.family.vertex_count(),
        m: 0,
        lp: None,
        unsat: None,
        opt: None,
        delta: None,
        resplits: 0,
        wall_time: 0.0,
        status: Ok(()),
    };
    row.status = fill_row(&mut row, cell, row_seed).map_err(|e| e.to_string());
    row.wall_time = start.elapsed().as_secs_f64();
    row
}

fn fill_row(row: &mut Row, cell: &Cell, row_seed: u64) -> Result<(), String> {
    let g = generate(&GenSpec {
        family: cell.family,
        k: cell.k,
        kind: cell.kind,
        noise: cell.noise,
        cost: cell.cost,
        seed: seed::derive(row_seed, 0),
    })
    .map_err(|e| e.to_string())?;
    let inst = g.instance;
    row.m = inst.num_edges();
    let lp = pipeline::solve(&inst, cell.algo.mode(), cell.tol, cell.max_rounds).map_err(|e| e.to_string())?;
    row.lp = Some(lp.objective());
    let settings = RoundSettings {
        scheme: cell.scheme,
        delta: cell.delta,
        r: cell.r,
        seed: seed::derive(row_seed, 1),
        repeats: cell.repeats,
    };
    let out = pipeline::round(&inst, &lp, &settings).map_err(|e| e.to_string())?;
    row.unsat = Some(out.unsat_cost);
    row.delta = Some(out.delta);
    row.resplits = out.resplits;
    if cell.oracle {
        match brute_force_assignment(&inst) {
            Ok(res) => row.opt = Some(res.opt_unsat_cost),
            Err(Error::SizeCapExceeded { .. }) => {}
            Err(e) => return Err(e.to_string()),
        }
    }
    if out.unsat_cost < lp.objective() - CHECK_TOL {
        return Err(format!("rounded cost {} below LP {}", out.unsat_cost, lp.objective()));
    }
    if let Some(opt) = row.opt {
        if out.unsat_cost < opt - CHECK_TOL {
            return Err(format!("rounded cost {} below optimum {opt}", out.unsat_cost));
        }
    }
    Ok(())
}

pub fn run_rows(master_seed: u64, cells: &[Cell]) -> Vec<Row> {
    let jobs: Vec<&Cell> = cells.iter().flat_map(|c| std::iter::repeat_n(c, c.seeds)).collect();
    jobs.iter().enumerate().map(|(i, c)| run_row(i, c, master_seed)).collect()
}

const COLUMNS: &[&str] = &[
    "row", "family", "n", "m", "k", "kind", "noise", "seed", "algo", "scheme", "delta", "r", "repeats", "lp",
    "rounded_unsat", "opt", "ratio", "resplits", "wall_time", "status",
];

fn opt_str(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn report(row: &Row) -> Report {
    let c = &row.cell;
    let mut r = Report::default();
    r.push("row", row.index)
        .push("family", &c.family_name)
        .push("n", row.n)
        .push("m", row.m)
        .push("k", c.k)
        .push("kind", kind_name(c.kind))
        .push("noise", c.noise)
        .push("seed", row.seed)
        .push("algo", c.algo.name())
        .push("scheme", c.scheme.name())
        .push("delta", opt_str(row.delta))
        .push("r", c.r)
        .push("repeats", c.repeats)
        .push("lp", opt_str(row.lp))
        .push("rounded_unsat", opt_str(row.unsat))
        .push("opt", opt_str(row.opt))
        .push("ratio", opt_str(row.ratio()))
        .push("resplits", row.resplits)
        .push("wall_time", format!("{:.3}", row.wall_time))
        .push(
            "status",
            match &row.status {
                Ok(()) => "ok".to_string(),
                Err(e) => format!("failed: {}", e.replace(['\t', '\n'], " ")),
            },
        );
    r
}

pub fn render_table(rows: &[Row]) -> String {
    let mut out = COLUMNS.join("\t");
    out.push('\n');
    for row in rows {
        let r = report(row);
        out.push_str(&r.0.iter().map(|(_, v)| v.as_str()).join("\t"));
        out.push('\n');
    }
    out
}

pub fn render_blocks(rows: &[Row]) -> String {
    let mut out = String::new();
    for row in rows {
        writeln!(out, "[row]").unwrap();
        out.push_str(&report(row).render());
        out.push('\n');
    }
    out
}

pub fn run(config: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let text = std::fs::read_to_string(config)
        .map_err(|e| CliError::Other(anyhow::anyhow!("reading {}: {e}", config.display())))?;
    let (master_seed, sections) = parse_config(&text).map_err(usage)?;
    let cells = expand(&sections).map_err(usage)?;
    let rows = run_rows(master_seed, &cells);
    let (table, blocks) = (render_table(&rows), render_blocks(&rows));
    match out {
        Some(path) => {
            let mut kv = path.as_os_str().to_owned();
            kv.push(".kv");
            std::fs::write(path, table).map_err(|e| CliError::Other(e.into()))?;
            std::fs::write(kv, blocks).map_err(|e| CliError::Other(e.into()))?;
        }
        None => print!("{table}\n{blocks}"),
    }
    let failed = rows.iter().filter(|r| r.status.is_err()).count();
    for row in rows.iter().filter(|r| r.status.is_err()) {
        eprintln!("row {}: {}", row.index, row.status.as_ref().unwrap_err());
    }
    if failed > 0 {
        Err(CliError::RowsFailed(failed))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_merge_and_lists_expand() {
        let text = "master_seed = 3\nfamily = grid\nrows = 3\ncols = 3\nk = 2\n[row]\nnoise = 0, 0.1\nkind = 2lin, general\n[row]\nfamily = torus\n";
        let (seed, sections) = parse_config(text).unwrap();
        assert_eq!(seed, 3);
        let cells = expand(&sections).unwrap();
        assert_eq!(cells.len(), 5);
        assert_eq!(cells[4].family, Family::Torus { rows: 3, cols: 3 });
        assert_eq!(cells[1].algo, Algo::TwoLin);
        assert_eq!(cells[2].algo, Algo::Ug);
    }

    #[test]
    fn no_sections_is_one_cell() {
        let (_, sections) = parse_config("family = cycle\nn = 5\nk = 3\nseeds = 4\n").unwrap();
        let cells = expand(&sections).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].seeds, 4);
    }

    #[test]
    fn config_errors() {
        assert!(parse_config("colour = red\n").is_err());
        assert!(parse_config("k =\n").is_err());
        assert!(parse_config("just words\n").is_err());
        assert!(parse_config("[row]\nmaster_seed = 1\n").is_err());
        let (_, s) = parse_config("k = 2\nkind = general\nalgo = 2lin\n").unwrap();
        assert!(expand(&s).is_err());
        let (_, s) = parse_config("family = grid\nk = 2\n").unwrap();
        assert!(expand(&s).is_err());
    }

    #[test]
    fn satisfiable_row_has_no_ratio() {
        let (seed, s) = parse_config("family = grid\nrows = 3\ncols = 3\nk = 3\nnoise = 0\n").unwrap();
        let rows = run_rows(seed, &expand(&s).unwrap());
        assert_eq!(rows.len(), 1);
        assert!(rows[0].status.is_ok());
        assert_eq!(rows[0].lp, Some(0.0));
        assert_eq!(rows[0].unsat, Some(0.0));
        assert_eq!(rows[0].ratio(), None);
        assert_eq!(rows[0].opt, Some(0.0));
    }
}
