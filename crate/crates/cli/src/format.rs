//! Line-oriented text formats for instances, assignments, partitions, LP
//! solutions, flip logs and key=value reports. Blank lines and anything
//! after `#` are ignored when reading.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;
use ugdecomp_core::lp::DEFAULT_TOL;
use ugdecomp_core::{
    Assignment, Constraint, Edge, EdgeId, EdgeLpSolution, InstanceKind, Partition, UgInstance,
    UgLpSolution,
};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("file is empty")]
    Empty,
    #[error("expected {expected} records, found {found}")]
    Count { expected: usize, found: usize },
    #[error(transparent)]
    Core(#[from] ugdecomp_core::Error),
}

type Result<T> = std::result::Result<T, ParseError>;

/// Writes a float with 17 significant digits, enough to read it back exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

struct Line<'a> {
    number: usize,
    fields: Vec<&'a str>,
}

impl<'a> Line<'a> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.number,
            msg: msg.into(),
        }
    }

    fn expect_len(&self, n: usize) -> Result<()> {
        if self.fields.len() == n {
            Ok(())
        } else {
            Err(self.err(format!("expected {n} fields, found {}", self.fields.len())))
        }
    }

    fn keyword(&self, word: &str) -> Result<()> {
        if self.fields[0] == word {
            Ok(())
        } else {
            Err(self.err(format!("expected `{word}`, found `{}`", self.fields[0])))
        }
    }

    fn get<T: FromStr>(&self, i: usize) -> Result<T> {
        let raw = self.fields.get(i).ok_or_else(|| self.err(format!("missing field {}", i + 1)))?;
        raw.parse().map_err(|_| self.err(format!("cannot parse `{raw}`")))
    }
}

fn lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let fields: Vec<&str> = body.split_whitespace().collect();
            (!fields.is_empty()).then_some(Line { number: i + 1, fields })
        })
        .collect()
}

fn split_header(text: &str) -> Result<(Line<'_>, Vec<Line<'_>>)> {
    let mut all = lines(text);
    if all.is_empty() {
        return Err(ParseError::Empty);
    }
    let header = all.remove(0);
    Ok((header, all))
}

fn check_count(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(ParseError::Count { expected, found })
    }
}

pub fn kind_name(kind: InstanceKind) -> &'static str {
    match kind {
        InstanceKind::TwoLin => "2lin",
        InstanceKind::General => "general",
    }
}

pub fn parse_kind(s: &str) -> Option<InstanceKind> {
    match s {
        "2lin" => Some(InstanceKind::TwoLin),
        "general" => Some(InstanceKind::General),
        _ => None,
    }
}

/// `ug <n> <m> <k> <2lin|general>`, then per edge
/// `e <u> <v> <cost> s <c>` or `e <u> <v> <cost> p <p0> .. <p(k-1)>`.
pub fn write_instance(inst: &UgInstance) -> String {
    let mut out = format!(
        "ug {} {} {} {}\n",
        inst.n(),
        inst.num_edges(),
        inst.k(),
        kind_name(inst.kind())
    );
    for e in inst.edges() {
        // shortest round-trip form keeps integer costs integral
        write!(out, "e {} {} {}", e.u, e.v, e.cost).unwrap();
        match &e.constraint {
            Constraint::Shift(c) => write!(out, " s {c}").unwrap(),
            Constraint::Perm(p) => {
                out.push_str(" p");
                for img in p {
                    write!(out, " {img}").unwrap();
                }
            }
        }
        out.push('\n');
    }
    out
}

pub fn parse_instance(text: &str) -> Result<UgInstance> {
    let (header, body) = split_header(text)?;
    header.expect_len(5)?;
    header.keyword("ug")?;
    let n: usize = header.get(1)?;
    let m: usize = header.get(2)?;
    let k: usize = header.get(3)?;
    let kind = parse_kind(header.fields[4]).ok_or_else(|| header.err("kind must be 2lin or general"))?;
    check_count(m, body.len())?;
    let mut edges = Vec::with_capacity(m);
    for line in &body {
        line.keyword("e")?;
        let (u, v, cost): (usize, usize, f64) = (line.get(1)?, line.get(2)?, line.get(3)?);
        let tag = line.fields.get(4).copied().unwrap_or("");
        let constraint = match (kind, tag) {
            (InstanceKind::TwoLin, "s") => {
                line.expect_len(6)?;
                Constraint::Shift(line.get(5)?)
            }
            (InstanceKind::General, "p") => {
                line.expect_len(5 + k)?;
                Constraint::Perm((5..5 + k).map(|i| line.get(i)).collect::<Result<_>>()?)
            }
            _ => return Err(line.err("constraint tag does not match the instance kind")),
        };
        edges.push(Edge::new(u, v, cost, constraint));
    }
    Ok(UgInstance::new(n, k, kind, edges)?)
}

/// `assign <n> <k>` then `<vertex> <label>` per vertex.
pub fn write_assignment(a: &Assignment, k: usize) -> String {
    let mut out = format!("assign {} {}\n", a.len(), k);
    for (v, l) in a.labels().iter().enumerate() {
        writeln!(out, "{v} {l}").unwrap();
    }
    out
}

pub fn parse_assignment(text: &str) -> Result<(Assignment, usize)> {
    let (header, body) = split_header(text)?;
    header.expect_len(3)?;
    header.keyword("assign")?;
    let n: usize = header.get(1)?;
    let k: usize = header.get(2)?;
    check_count(n, body.len())?;
    let mut labels = vec![None; n];
    for line in &body {
        line.expect_len(2)?;
        let v: usize = line.get(0)?;
        let l: usize = line.get(1)?;
        if v >= n || labels[v].is_some() {
            return Err(line.err("vertex out of range or repeated"));
        }
        if l >= k {
            return Err(line.err("label outside the alphabet"));
        }
        labels[v] = Some(l);
    }
    Ok((Assignment::new(labels.into_iter().map(Option::unwrap).collect()), k))
}

/// `partition <n> <clusters> <delta>` then `<vertex> <cluster>` per vertex.
pub fn write_partition(p: &Partition) -> String {
    let ids = p.cluster_ids();
    let mut out = format!("partition {} {} {}\n", ids.len(), p.len(), fmt_f64(p.delta()));
    for (v, c) in ids.iter().enumerate() {
        writeln!(out, "{v} {c}").unwrap();
    }
    out
}

pub fn parse_partition(text: &str) -> Result<Partition> {
    let (header, body) = split_header(text)?;
    header.expect_len(4)?;
    header.keyword("partition")?;
    let n: usize = header.get(1)?;
    let clusters: usize = header.get(2)?;
    let delta: f64 = header.get(3)?;
    check_count(n, body.len())?;
    let mut cluster_of = vec![usize::MAX; n];
    for line in &body {
        line.expect_len(2)?;
        let v: usize = line.get(0)?;
        if v >= n {
            return Err(line.err("vertex out of range"));
        }
        cluster_of[v] = line.get(1)?;
    }
    let p = Partition::from_assignment(&cluster_of, delta, None)?;
    check_count(clusters, p.len())?;
    Ok(p)
}

/// `xsol <m>` then `<edge> <x_e>` per edge.
pub fn write_edge_solution(x: &[f64]) -> String {
    let mut out = format!("xsol {}\n", x.len());
    for (e, v) in x.iter().enumerate() {
        writeln!(out, "{e} {}", fmt_f64(*v)).unwrap();
    }
    out
}

fn parse_indexed(body: &[Line<'_>], len: usize) -> Result<Vec<f64>> {
    check_count(len, body.len())?;
    let mut values = vec![None; len];
    for line in body {
        line.expect_len(2)?;
        let i: usize = line.get(0)?;
        if i >= len || values[i].is_some() {
            return Err(line.err("index out of range or repeated"));
        }
        values[i] = Some(line.get(1)?);
    }
    Ok(values.into_iter().map(Option::unwrap).collect())
}

/// `ugsol <n> <m> <k>`, then `x <v> <x(v,0)> .. <x(v,k-1)>` per vertex and
/// `d <e> <d(e,0)> .. <d(e,k-1)>` per edge.
pub fn write_ug_solution(sol: &UgLpSolution) -> String {
    let mut out = format!("ugsol {} {} {}\n", sol.n(), sol.num_edges(), sol.k());
    for v in 0..sol.n() {
        write!(out, "x {v}").unwrap();
        for &val in sol.x_row(v) {
            write!(out, " {}", fmt_f64(val)).unwrap();
        }
        out.push('\n');
    }
    for e in 0..sol.num_edges() {
        write!(out, "d {e}").unwrap();
        for &val in sol.d_row(e) {
            write!(out, " {}", fmt_f64(val)).unwrap();
        }
        out.push('\n');
    }
    out
}

/// A parsed LP solution file of either shape.
#[derive(Clone, Debug)]
pub enum LpFile {
    Edge(Vec<f64>),
    Ug { n: usize, m: usize, k: usize, x: Vec<f64>, d: Vec<f64> },
}

pub fn parse_lp_solution(text: &str) -> Result<LpFile> {
    let (header, body) = split_header(text)?;
    match header.fields[0] {
        "xsol" => {
            header.expect_len(2)?;
            Ok(LpFile::Edge(parse_indexed(&body, header.get(1)?)?))
        }
        "ugsol" => {
            header.expect_len(4)?;
            let (n, m, k): (usize, usize, usize) = (header.get(1)?, header.get(2)?, header.get(3)?);
            check_count(n + m, body.len())?;
            let mut x = vec![f64::NAN; n * k];
            let mut d = vec![f64::NAN; m * k];
            let mut seen = vec![false; n + m];
            for line in &body {
                line.expect_len(2 + k)?;
                let i: usize = line.get(1)?;
                let (block, slot) = match line.fields[0] {
                    "x" if i < n => (&mut x, i),
                    "d" if i < m => (&mut d, n + i),
                    _ => return Err(line.err("expected an `x` or `d` row with an index in range")),
                };
                if std::mem::replace(&mut seen[slot], true) {
                    return Err(line.err("row repeated"));
                }
                for l in 0..k {
                    block[i * k + l] = line.get(2 + l)?;
                }
            }
            Ok(LpFile::Ug { n, m, k, x, d })
        }
        other => Err(header.err(format!("unknown solution header `{other}`"))),
    }
}

impl LpFile {
    pub fn into_edge(self, inst: &UgInstance) -> Result<EdgeLpSolution> {
        match self {
            LpFile::Edge(x) => Ok(EdgeLpSolution::from_values(inst, x, DEFAULT_TOL)?),
            LpFile::Ug { .. } => Err(ParseError::Syntax {
                line: 1,
                msg: "expected an `xsol` file".into(),
            }),
        }
    }

    pub fn into_ug(self, inst: &UgInstance) -> Result<UgLpSolution> {
        match self {
            LpFile::Ug { n, m, k, x, d } => {
                check_count(inst.n() * inst.k() + inst.num_edges() * inst.k(), (n + m) * k)?;
                Ok(UgLpSolution::from_values(inst, x, d, DEFAULT_TOL)?)
            }
            LpFile::Edge(_) => Err(ParseError::Syntax {
                line: 1,
                msg: "expected a `ugsol` file".into(),
            }),
        }
    }
}

/// One edge index per line; empty when nothing was flipped.
pub fn write_edge_list(edges: &[EdgeId]) -> String {
    edges.iter().map(|e| format!("{e}\n")).collect()
}

pub fn parse_edge_list(text: &str) -> Result<Vec<EdgeId>> {
    lines(text)
        .iter()
        .map(|line| {
            line.expect_len(1)?;
            line.get(0)
        })
        .collect()
}

/// Ordered `key=value` lines.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report(pub Vec<(String, String)>);

impl Report {
    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.0.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn parse(text: &str) -> Self {
        Report(
            text.lines()
                .filter_map(|l| l.split_once('='))
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ugdecomp_core::gen::{generate, CostModel, Family, GenSpec};

    fn generated(kind: InstanceKind, k: usize) -> UgInstance {
        generate(&GenSpec {
            family: Family::Torus { rows: 3, cols: 3 },
            k,
            kind,
            noise: 0.3,
            cost: CostModel::Uniform,
            seed: 4,
        })
        .unwrap()
        .instance
    }

    #[test]
    fn instance_round_trip() {
        for (kind, k) in [(InstanceKind::TwoLin, 3), (InstanceKind::General, 5)] {
            let inst = generated(kind, k);
            assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst);
        }
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "# triangle\nug 3 3 2 2lin\n\ne 0 1 1 s 1\ne 1 2 1 s 1 # odd\ne 2 0 2.5 s 1\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.num_edges(), 3);
        assert_eq!(inst.edge(2).cost, 2.5);
    }

    #[test]
    fn bad_instances_are_rejected() {
        assert!(parse_instance("").is_err());
        assert!(parse_instance("ug 2 1 2 2lin\n").is_err());
        assert!(parse_instance("ug 2 1 2 2lin\ne 0 1 1 p 1 0\n").is_err());
        assert!(parse_instance("ug 2 1 2 general\ne 0 1 1 p 0 0\n").is_err());
        assert!(parse_instance("ug 2 1 2 2lin\ne 0 5 1 s 1\n").is_err());
    }

    #[test]
    fn floats_survive_the_text_form() {
        for v in [0.1, 1.0 / 3.0, 0.76, 1e-12, 0.0] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn assignment_and_partition_round_trip() {
        let a = Assignment::new(vec![2, 0, 1, 1]);
        assert_eq!(parse_assignment(&write_assignment(&a, 3)).unwrap(), (a, 3));
        let p = Partition::from_assignment(&[0, 1, 0, 2], 0.25, None).unwrap();
        let back = parse_partition(&write_partition(&p)).unwrap();
        assert_eq!(back.clusters(), p.clusters());
        assert_eq!(back.delta(), 0.25);
    }

    #[test]
    fn lp_files_round_trip() {
        let x = vec![0.3, 0.0, 1.0 / 7.0];
        match parse_lp_solution(&write_edge_solution(&x)).unwrap() {
            LpFile::Edge(back) => assert_eq!(back, x),
            other => panic!("unexpected {other:?}"),
        }
        let inst = generated(InstanceKind::General, 3);
        let a = Assignment::new((0..9).map(|v| v % 3).collect());
        let sol = UgLpSolution::from_assignment(&inst, &a).unwrap();
        let back = parse_lp_solution(&write_ug_solution(&sol)).unwrap().into_ug(&inst).unwrap();
        assert_eq!(back.x_values(), sol.x_values());
        assert_eq!(back.d_values(), sol.d_values());
    }

    #[test]
    fn edge_list_and_report_round_trip() {
        assert_eq!(parse_edge_list(&write_edge_list(&[3, 7])).unwrap(), vec![3, 7]);
        assert!(write_edge_list(&[]).is_empty());
        let mut r = Report::default();
        r.push("unsat_cost", 2).push("scheme", "ball");
        assert_eq!(Report::parse(&r.render()), r);
        assert_eq!(r.get("scheme"), Some("ball"));
    }
}
