//! The `sumsetlab` command line: instance files in, JSON or CSV reports out.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage,
//! input or budget errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bounded_solve::{
    bounded_kernel_basis, minimal_positive_solutions, positive_solution, small_kernel_vector, IntegerMatrix,
};
use crate::error::Error;
use crate::khovanskii::{fit_instance, khovanskii_poly_general, khovanskii_poly_simplex, khovanskii_thresholds};
use crate::lattice::{FiniteAbelianGroup, LatticePoint};
use crate::minimal::{b_minimal_elements, davenport_constant, k_constant, minimal_useless_auto};
use crate::polytope::{convex_hull, normalized_volume};
use crate::structure::{empirical_structure_onset, structure_report};
use crate::sumset::{growth_table, sumset, with_size_budget, PointSet, DEFAULT_SIZE_BUDGET};

/// Version of the report layout described in `docs/schemas.md`.
pub const SCHEMA_VERSION: u32 = 1;

pub const BUDGET_ENV: &str = "SUMSETLAB_BUDGET";

const DEFAULT_N_MAX: usize = 10;
/// Onsets in the bundled corpus reach 12, and a fit needs d + 1 more values.
const CORPUS_N_MAX: usize = 16;

#[derive(Parser, Debug)]
#[command(name = "sumsetlab", version, about = "Exact experiments with iterated sumsets in Z^d")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Point-set size budget (overrides SUMSETLAB_BUDGET).
    #[arg(long, global = true)]
    pub budget: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(clap::Args, Debug, Clone)]
pub struct InstanceArgs {
    #[arg(long)]
    pub instance: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Points of NA.
    Sumset {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// |NA| for N = 1..n-max.
    Growth {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long, default_value_t = DEFAULT_N_MAX)]
        n_max: usize,
    },
    /// Interpolated polynomial and empirical onset.
    Fit {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long, default_value_t = DEFAULT_N_MAX)]
        n_max: usize,
    },
    /// Polynomial from minimally useless vectors.
    PolyGeneral {
        #[command(flatten)]
        input: InstanceArgs,
        /// Largest coordinate cap tried for useless vectors.
        #[arg(long, default_value_t = 16)]
        cap: u64,
    },
    /// Coset formula for simplex hulls.
    PolySimplex {
        #[command(flatten)]
        input: InstanceArgs,
        /// Checks the formula against enumeration up to this N.
        #[arg(long, default_value_t = DEFAULT_N_MAX)]
        n_max: usize,
    },
    /// Extremal-union identity for N = 1..n-max.
    Structure {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
    },
    /// Closed-form thresholds.
    Thresholds {
        #[command(flatten)]
        input: InstanceArgs,
    },
    /// D(G) and optionally k(G,H).
    Davenport {
        /// Cyclic factors, e.g. "2,2".
        #[arg(long)]
        group: String,
        /// Elements of H separated by ';', coordinates by ','.
        #[arg(long)]
        subset: Option<String>,
    },
    /// B-minimal elements and K(A,B).
    Minimal {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long, default_value_t = 0)]
        cap: usize,
    },
    /// Bounded integer solvers.
    Solve {
        #[arg(long, value_enum)]
        op: SolveOp,
        /// Rows separated by ';', entries by ','.
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        rhs: Option<String>,
        #[arg(long)]
        witness: Option<String>,
        #[arg(long, default_value_t = 1)]
        n1: usize,
        #[arg(long, default_value_t = 1000)]
        box_cap: u64,
    },
    /// Empirical N_Str, N_Kh and d! vol side by side.
    Speculate {
        #[arg(long, conflicts_with = "corpus", required_unless_present = "corpus")]
        instance: Option<PathBuf>,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = CORPUS_N_MAX)]
        n_max: usize,
    },
    /// Regression run over a directory of instance files.
    Corpus {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = CORPUS_N_MAX)]
        n_max: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolveOp {
    Kernel,
    Positive,
    Minimal,
    Basis,
}

/// Values an instance file may pin for regression runs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_kh: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_str: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub name: String,
    pub points: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simplex_basis: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        let inst: InstanceFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        inst.validate()?;
        Ok(inst)
    }

    fn validate(&self) -> Result<(), String> {
        let dim = self.points.first().map(Vec::len).ok_or("points: list is empty")?;
        if dim == 0 {
            return Err("points[0]: zero-dimensional point".into());
        }
        for (i, p) in self.points.iter().enumerate() {
            if p.len() != dim {
                return Err(format!("points[{i}]: dimension {} differs from {dim}", p.len()));
            }
            if let Some(j) = self.points[..i].iter().position(|q| q == p) {
                return Err(format!("points[{i}]: duplicate of points[{j}]"));
            }
        }
        if let Some(b) = &self.simplex_basis {
            for (i, p) in b.iter().enumerate() {
                if !self.points.contains(p) {
                    return Err(format!("simplex_basis[{i}]: not one of the points"));
                }
            }
        }
        Ok(())
    }

    pub fn point_set(&self) -> PointSet {
        let dim = self.points[0].len();
        PointSet::from_vecs(dim, self.points.clone()).expect("validated instance")
    }

    /// Same instance with points sorted; parse and serialize round-trip to this.
    pub fn canonical(&self) -> InstanceFile {
        let mut c = self.clone();
        c.points.sort();
        if let Some(b) = &mut c.simplex_basis {
            b.sort();
        }
        c
    }

    /// SHA-256 of the canonical point list.
    pub fn digest(&self) -> String {
        let c = self.canonical();
        let bytes = serde_json::to_vec(&c.points).expect("integers serialize");
        hex::encode(Sha256::digest(&bytes))
    }
}

/// How a reported value was obtained.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Enumerated,
    Formula,
    Bound,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub arguments: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<Value>,
    pub results: Value,
    pub provenance: Vec<(String, Source)>,
    pub caveats: Vec<String>,
}

/// Flat table for CSV output.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

struct Outcome {
    report: Report,
    table: Table,
    verified: bool,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Out<T> = std::result::Result<T, Failure>;

fn load_instance(path: &Path) -> Out<InstanceFile> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    InstanceFile::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_corpus(dir: &Path) -> Out<Vec<InstanceFile>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Failure::Usage(format!("{}: no .json instance files", dir.display())));
    }
    paths.iter().map(|p| load_instance(p)).collect()
}

fn parse_vector(s: &str) -> Out<Vec<i64>> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| Failure::Usage(format!("bad integer {t:?}: {e}"))))
        .collect()
}

fn parse_rows(s: &str) -> Out<Vec<Vec<i64>>> {
    s.split(';').filter(|r| !r.trim().is_empty()).map(parse_vector).collect()
}

fn instance_header(inst: &InstanceFile) -> Value {
    json!({ "name": inst.name, "digest": inst.digest(), "points": inst.canonical().points })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

fn report(command: &str, arguments: Value, inst: Option<&InstanceFile>, results: Value) -> Report {
    Report {
        schema_version: SCHEMA_VERSION,
        command: command.into(),
        arguments,
        instance: inst.map(instance_header),
        results,
        provenance: Vec::new(),
        caveats: Vec::new(),
    }
}

fn tag(r: &mut Report, entries: &[(&str, Source)]) {
    r.provenance.extend(entries.iter().map(|(k, s)| (k.to_string(), *s)));
}

fn cmd_sumset(inst: &InstanceFile, n: usize) -> Out<Outcome> {
    let s = sumset(&inst.point_set(), n)?;
    let mut table = Table::new(&["point"]);
    for p in &s {
        table.push(vec![p.to_string()]);
    }
    let mut r = report("sumset", json!({ "n": n }), Some(inst), json!({ "size": s.len(), "points": s }));
    tag(&mut r, &[("points", Source::Enumerated)]);
    Ok(Outcome { report: r, table, verified: true })
}

fn cmd_growth(inst: &InstanceFile, n_max: usize) -> Out<Outcome> {
    let t = growth_table(&inst.point_set(), n_max)?;
    let mut table = Table::new(&["n", "size"]);
    for (i, s) in t.sizes.iter().enumerate() {
        table.push(vec![(i + 1).to_string(), s.to_string()]);
    }
    let mut r = report("growth", json!({ "n_max": n_max }), Some(inst), json!({ "sizes": t.sizes }));
    tag(&mut r, &[("sizes", Source::Enumerated)]);
    Ok(Outcome { report: r, table, verified: true })
}

fn cmd_fit(inst: &InstanceFile, n_max: usize) -> Out<Outcome> {
    let a = inst.point_set();
    let fit = fit_instance(&a, n_max)?;
    let sizes = growth_table(&a, n_max)?.sizes;
    let mut table = Table::new(&["n", "size", "polynomial", "agrees"]);
    for (i, s) in sizes.iter().enumerate() {
        let p = fit.polynomial.eval_int(i as i64 + 1);
        table.push(vec![(i + 1).to_string(), s.to_string(), p.to_string(), (i + 1 >= fit.onset).to_string()]);
    }
    let mut r = report("fit", json!({ "n_max": n_max }), Some(inst), to_value(&fit));
    tag(&mut r, &[("polynomial", Source::Enumerated), ("onset", Source::Enumerated)]);
    r.caveats.push(format!("onset is empirical and certified only up to N = {}", fit.horizon));
    Ok(Outcome { report: r, table, verified: true })
}

fn cmd_poly_general(inst: &InstanceFile, cap: u64) -> Out<Outcome> {
    let fam = minimal_useless_auto(&inst.point_set(), 2, cap)?;
    let poly = khovanskii_poly_general(&fam)?;
    let mut table = Table::new(&["coefficient", "shift", "degree"]);
    for t in &poly.binomial.terms {
        table.push(vec![t.coeff.to_string(), t.shift.to_string(), t.degree.to_string()]);
    }
    let mut r = report(
        "poly-general",
        json!({ "cap": cap }),
        Some(inst),
        json!({ "minimal_useless": fam.minimal_useless, "cap_used": fam.cap_used, "polynomial": poly }),
    );
    tag(&mut r, &[("minimal_useless", Source::Enumerated), ("polynomial", Source::Formula), ("onset", Source::Formula)]);
    if !fam.certified {
        r.caveats.push(format!("family failed validation at coordinate cap {}", fam.cap_used));
    }
    Ok(Outcome { report: r, table, verified: fam.certified })
}

fn cmd_poly_simplex(inst: &InstanceFile, n_max: usize) -> Out<Outcome> {
    let a = inst.point_set();
    let sp = khovanskii_poly_simplex(&a)?;
    let sizes = growth_table(&a, n_max)?.sizes;
    let agrees = sizes.iter().enumerate().all(|(i, s)| i + 1 < sp.onset || sp.total.eval_u64(i as u64 + 1) == BigInt::from(*s));
    let mut table = Table::new(&["coset", "elements", "n_full", "refined_onset"]);
    for (c, rf) in sp.cosets.iter().zip(&sp.refinements) {
        let coset: Vec<String> = c.coset.iter().map(u64::to_string).collect();
        table.push(vec![coset.join(" "), c.elements.len().to_string(), rf.n_full.to_string(), rf.refined_onset.to_string()]);
    }
    let mut r = report(
        "poly-simplex",
        json!({ "n_max": n_max }),
        Some(inst),
        json!({ "simplex": sp, "agrees_with_enumeration": agrees }),
    );
    tag(
        &mut r,
        &[("polynomial", Source::Formula), ("onset", Source::Bound), ("k_value", Source::Enumerated), ("agrees_with_enumeration", Source::Enumerated)],
    );
    r.caveats.push(format!("formula compared with enumeration for N <= {n_max}"));
    Ok(Outcome { report: r, table, verified: agrees })
}

fn cmd_structure(inst: &InstanceFile, n_max: usize) -> Out<Outcome> {
    let rep = structure_report(&inst.point_set(), n_max)?;
    let mut table = Table::new(&["n", "sumset_size", "rhs_size", "equal", "inclusion", "witness"]);
    for v in &rep.verdicts {
        table.push(vec![
            v.n.to_string(),
            v.sumset_size.to_string(),
            v.rhs_size.to_string(),
            v.equal.to_string(),
            v.inclusion.to_string(),
            v.witness.as_ref().map(|w| w.to_string()).unwrap_or_default(),
        ]);
    }
    let verified = rep.verdicts.iter().all(|v| v.inclusion) && rep.empirical_onset.onset.is_some();
    let mut r = report("structure", json!({ "n_max": n_max }), Some(inst), to_value(&rep));
    tag(&mut r, &[("verdicts", Source::Enumerated), ("empirical_onset", Source::Enumerated), ("thresholds", Source::Bound)]);
    r.caveats.push(format!("identity verified only for N <= {n_max}"));
    Ok(Outcome { report: r, table, verified })
}

fn threshold_table(entries: &[crate::khovanskii::Threshold]) -> Table {
    let mut table = Table::new(&["name", "target", "kind", "applicable", "value", "formula"]);
    for t in entries {
        table.push(vec![
            t.name.into(),
            t.target.into(),
            format!("{:?}", t.kind).to_lowercase(),
            t.applicable.to_string(),
            t.value.as_ref().map(|v| v.to_string()).unwrap_or_default(),
            t.formula.into(),
        ]);
    }
    table
}

fn cmd_thresholds(inst: &InstanceFile) -> Out<Outcome> {
    let rep = khovanskii_thresholds(&inst.point_set())?;
    let table = threshold_table(&rep.entries);
    let mut r = report("thresholds", json!({}), Some(inst), to_value(&rep));
    tag(&mut r, &[("entries", Source::Bound), ("normalized_volume", Source::Formula)]);
    Ok(Outcome { report: r, table, verified: true })
}

fn cmd_davenport(group: &str, subset: Option<&str>) -> Out<Outcome> {
    let moduli: Vec<u64> = parse_vector(group)?
        .into_iter()
        .map(|m| u64::try_from(m).map_err(|_| Failure::Usage(format!("negative modulus {m}"))))
        .collect::<Out<_>>()?;
    let g = FiniteAbelianGroup::product_of_cyclic(&moduli)?;
    let d = davenport_constant(&g)?;
    let mut results = json!({ "invariant_factors": g.invariant_factors(), "order": g.order(), "davenport": d });
    let mut table = Table::new(&["quantity", "value"]);
    table.push(vec!["davenport".into(), d.to_string()]);
    if let Some(s) = subset {
        let h: Vec<Vec<u64>> = parse_rows(s)?
            .into_iter()
            .map(|row| {
                if row.len() != moduli.len() {
                    return Err(Failure::Usage(format!("subset element {row:?} has wrong length")));
                }
                Ok(row.iter().zip(&moduli).map(|(x, m)| x.rem_euclid(*m as i64) as u64).collect())
            })
            .collect::<Out<_>>()?;
        let h = canonical_elements(&g, h);
        let k = k_constant(&g, &h)?;
        results["subset"] = to_value(&h);
        results["k"] = json!(k);
        table.push(vec!["k".into(), k.to_string()]);
    }
    let mut r = report("davenport", json!({ "group": group, "subset": subset }), None, results);
    tag(&mut r, &[("davenport", Source::Enumerated), ("k", Source::Enumerated)]);
    Ok(Outcome { report: r, table, verified: true })
}

// Re-expresses elements given on the cyclic factors in the group's
// invariant-factor coordinates.
fn canonical_elements(g: &FiniteAbelianGroup, h: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    h.into_iter()
        .map(|e| {
            let p = LatticePoint::new(e.iter().map(|&x| x as i64).collect());
            g.project(&p).unwrap_or(e)
        })
        .collect()
}

fn cmd_minimal(inst: &InstanceFile, cap: usize) -> Out<Outcome> {
    let a = inst.point_set();
    let d = a.dim();
    let vertices = match &inst.simplex_basis {
        Some(b) => PointSet::from_vecs(d, b.clone())?,
        None => convex_hull(&a)?.vertices,
    };
    let a0 = vertices.points()[0].clone();
    let shift = a0.checked_neg()?;
    let shifted = a.translate(&shift)?;
    let b = vertices.translate(&shift)?.filter(|p| !p.is_zero());
    let fam = b_minimal_elements(&shifted, &b, cap)?;
    let mut table = Table::new(&["u", "rep_length"]);
    for (u, l) in &fam.elements {
        table.push(vec![u.to_string(), l.to_string()]);
    }
    let k = fam.k_value().ok();
    let mut r = report(
        "minimal",
        json!({ "cap": cap }),
        Some(inst),
        json!({ "translation": a0, "family": fam, "k": k }),
    );
    tag(&mut r, &[("family", Source::Enumerated), ("k", Source::Enumerated)]);
    if k.is_none() {
        r.caveats.push(format!("family incomplete after {} layers", fam.layers_searched));
    }
    Ok(Outcome { report: r, table, verified: true })
}

fn vector_table(vs: &[LatticePoint]) -> Table {
    let mut table = Table::new(&["vector", "sup_norm"]);
    for v in vs {
        table.push(vec![v.to_string(), v.sup_norm().to_string()]);
    }
    table
}

fn cmd_solve(op: SolveOp, matrix: &str, rhs: Option<&str>, witness: Option<&str>, n1: usize, box_cap: u64) -> Out<Outcome> {
    let mat = IntegerMatrix::new(parse_rows(matrix)?)?;
    let need = |x: Option<&str>, name: &str| -> Out<LatticePoint> {
        x.map(|s| parse_vector(s).map(LatticePoint::new))
            .unwrap_or_else(|| Err(Failure::Usage(format!("--{name} is required for this operation"))))
    };
    let args = json!({ "op": format!("{op:?}").to_lowercase(), "matrix": mat.rows(), "rhs": rhs, "witness": witness });
    let (results, table, verified, tags): (Value, Table, bool, Vec<(&str, Source)>) = match op {
        SolveOp::Kernel => {
            let v = small_kernel_vector(&mat)?;
            let bound = crate::bounded_solve::kernel_vector_bound(mat.k(), mat.n(), mat.m());
            (
                json!({ "vector": v, "bound": bound.to_string() }),
                vector_table(std::slice::from_ref(&v)),
                true,
                vec![("vector", Source::Enumerated), ("bound", Source::Formula)],
            )
        }
        SolveOp::Positive => {
            let s = positive_solution(&mat, &need(rhs, "rhs")?, &need(witness, "witness")?)?;
            let t = vector_table(std::slice::from_ref(&s.solution));
            let ok = s.within_bound;
            (to_value(&s), t, ok, vec![("solution", Source::Enumerated), ("bound", Source::Formula)])
        }
        SolveOp::Minimal => {
            let f = minimal_positive_solutions(&mat, &need(rhs, "rhs")?, n1, box_cap)?;
            let t = vector_table(&f.members());
            let ok = f.within_bound();
            (to_value(&f), t, ok, vec![("solutions", Source::Enumerated), ("member_bound", Source::Formula)])
        }
        SolveOp::Basis => {
            let k = bounded_kernel_basis(&mat)?;
            let t = vector_table(&k.basis);
            let ok = k.within_bound;
            (to_value(&k), t, ok, vec![("basis", Source::Enumerated), ("bound_squared", Source::Formula)])
        }
    };
    let mut r = report("solve", args, None, results);
    tag(&mut r, &tags);
    Ok(Outcome { report: r, table, verified })
}

fn speculate_one(inst: &InstanceFile, n_max: usize) -> Out<Value> {
    let a = inst.point_set();
    let n_str = empirical_structure_onset(&a, n_max)?.onset;
    let n_kh = fit_instance(&a, n_max)?.onset;
    let vol = normalized_volume(&a)?;
    let full = convex_hull(&a)?.affine_dim == a.dim();
    Ok(json!({
        "name": inst.name,
        "digest": inst.digest(),
        "n_str": n_str,
        "n_kh": n_kh,
        "normalized_volume": vol.to_string(),
        "str_le_kh": n_str.map(|s| s <= n_kh),
        "kh_le_volume": full.then(|| BigInt::from(n_kh) <= vol),
        "horizon": n_max,
    }))
}

fn cmd_speculate(insts: &[InstanceFile], n_max: usize) -> Out<Outcome> {
    let rows: Vec<Value> = insts.iter().map(|i| speculate_one(i, n_max)).collect::<Out<_>>()?;
    let mut table = Table::new(&["name", "n_str", "n_kh", "normalized_volume", "str_le_kh", "kh_le_volume"]);
    let cell = |v: &Value| match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    for row in &rows {
        table.push(
            ["name", "n_str", "n_kh", "normalized_volume", "str_le_kh", "kh_le_volume"].iter().map(|k| cell(&row[*k])).collect(),
        );
    }
    let inst = (insts.len() == 1).then(|| &insts[0]);
    let mut r = report("speculate", json!({ "n_max": n_max }), inst, json!({ "instances": rows }));
    tag(&mut r, &[("n_str", Source::Enumerated), ("n_kh", Source::Enumerated), ("normalized_volume", Source::Formula)]);
    r.caveats.push("comparisons are recorded, not asserted; the inequalities are open".into());
    r.caveats.push(format!("onsets are empirical up to N = {n_max}"));
    Ok(Outcome { report: r, table, verified: true })
}

fn corpus_one(inst: &InstanceFile, n_max: usize) -> Out<(Value, Vec<String>)> {
    let a = inst.point_set();
    let sizes = growth_table(&a, n_max)?.sizes;
    let fit = fit_instance(&a, n_max)?;
    let n_str = empirical_structure_onset(&a, n_max.min(8))?.onset;
    let mut mismatches = Vec::new();
    if let Some(e) = &inst.expected {
        if let Some(s) = &e.sizes {
            let k = s.len().min(sizes.len());
            if s[..k] != sizes[..k] {
                mismatches.push(format!("sizes: expected {:?}, got {:?}", &s[..k], &sizes[..k]));
            }
        }
        if let Some(p) = &e.polynomial {
            if *p != fit.polynomial.to_string() {
                mismatches.push(format!("polynomial: expected {p}, got {}", fit.polynomial));
            }
        }
        if let Some(n) = e.n_kh {
            if n != fit.onset {
                mismatches.push(format!("n_kh: expected {n}, got {}", fit.onset));
            }
        }
        if let Some(n) = e.n_str {
            if Some(n) != n_str {
                mismatches.push(format!("n_str: expected {n}, got {n_str:?}"));
            }
        }
        if let Some(k) = e.k {
            let got = khovanskii_poly_simplex(&a)?.k_value;
            if k != got {
                mismatches.push(format!("k: expected {k}, got {got}"));
            }
        }
    }
    let v = json!({
        "name": inst.name,
        "digest": inst.digest(),
        "sizes": sizes,
        "polynomial": fit.polynomial,
        "n_kh": fit.onset,
        "n_str": n_str,
        "mismatches": mismatches,
    });
    Ok((v, mismatches))
}

fn cmd_corpus(insts: &[InstanceFile], n_max: usize) -> Out<Outcome> {
    let mut rows = Vec::new();
    let mut table = Table::new(&["name", "polynomial", "n_kh", "n_str", "status"]);
    let mut verified = true;
    for inst in insts {
        let (v, mismatches) = corpus_one(inst, n_max)?;
        verified &= mismatches.is_empty();
        table.push(vec![
            inst.name.clone(),
            v["polynomial"]["display"].as_str().unwrap_or_default().to_string(),
            v["n_kh"].to_string(),
            v["n_str"].to_string(),
            if mismatches.is_empty() { "ok".into() } else { mismatches.join("; ") },
        ]);
        rows.push(v);
    }
    let mut r = report("corpus", json!({ "n_max": n_max }), None, json!({ "instances": rows }));
    tag(&mut r, &[("sizes", Source::Enumerated), ("polynomial", Source::Enumerated), ("n_str", Source::Enumerated)]);
    r.caveats.push(format!("structure onsets are empirical up to N = {}", n_max.min(8)));
    Ok(Outcome { report: r, table, verified })
}

fn dispatch(cmd: &Command) -> Out<Outcome> {
    match cmd {
        Command::Sumset { input, n } => cmd_sumset(&load_instance(&input.instance)?, *n),
        Command::Growth { input, n_max } => cmd_growth(&load_instance(&input.instance)?, *n_max),
        Command::Fit { input, n_max } => cmd_fit(&load_instance(&input.instance)?, *n_max),
        Command::PolyGeneral { input, cap } => cmd_poly_general(&load_instance(&input.instance)?, *cap),
        Command::PolySimplex { input, n_max } => cmd_poly_simplex(&load_instance(&input.instance)?, *n_max),
        Command::Structure { input, n_max } => cmd_structure(&load_instance(&input.instance)?, *n_max),
        Command::Thresholds { input } => cmd_thresholds(&load_instance(&input.instance)?),
        Command::Davenport { group, subset } => cmd_davenport(group, subset.as_deref()),
        Command::Minimal { input, cap } => cmd_minimal(&load_instance(&input.instance)?, *cap),
        Command::Solve { op, matrix, rhs, witness, n1, box_cap } => {
            cmd_solve(*op, matrix, rhs.as_deref(), witness.as_deref(), *n1, *box_cap)
        }
        Command::Speculate { instance, corpus, n_max } => {
            let insts = match (instance, corpus) {
                (Some(p), _) => vec![load_instance(p)?],
                (None, Some(d)) => load_corpus(d)?,
                (None, None) => return Err(Failure::Usage("--instance or --corpus is required".into())),
            };
            cmd_speculate(&insts, *n_max)
        }
        Command::Corpus { corpus, n_max } => cmd_corpus(&load_corpus(corpus)?, *n_max),
    }
}

fn render(outcome: &Outcome, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(&outcome.report).expect("report serializes");
            v.push(b'\n');
            v
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&outcome.table.headers).expect("in-memory write");
            for row in &outcome.table.rows {
                w.write_record(row).expect("in-memory write");
            }
            w.into_inner().expect("in-memory flush")
        }
    }
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "report".into());
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

fn budget_from_env() -> Result<Option<usize>, String> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map(Some).map_err(|e| format!("{BUDGET_ENV}={v:?}: {e}")),
        Err(_) => Ok(None),
    }
}

/// Runs a command line and returns the exit code. The report goes to
/// `--out` if given, else to `stdout`; diagnostics go to `stderr`.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    let budget = match cli.budget.map(|b| Ok(Some(b))).unwrap_or_else(budget_from_env) {
        Ok(b) => b.unwrap_or(DEFAULT_SIZE_BUDGET),
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return 2;
        }
    };
    let outcome = match with_size_budget(budget, || dispatch(&cli.command)) {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return 2;
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    let bytes = render(&outcome, cli.format);
    let written = match &cli.out {
        Some(p) => write_atomic(p, &bytes),
        None => stdout.write_all(&bytes),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write report: {e}");
        return 2;
    }
    if outcome.verified {
        0
    } else {
        let _ = writeln!(stderr, "verification failed");
        1
    }
}

/// Entry point for the binary.
pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("sumsetlab").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn instance_validation_reports_positions() {
        assert!(InstanceFile::parse(r#"{"name":"a","points":[[0],[1]]}"#).is_ok());
        let e = InstanceFile::parse(r#"{"name":"a","points":[[0],[1,2]]}"#).unwrap_err();
        assert!(e.contains("points[1]"), "{e}");
        let e = InstanceFile::parse(r#"{"name":"a","points":[[0],[0]]}"#).unwrap_err();
        assert!(e.contains("duplicate"), "{e}");
        let e = InstanceFile::parse("{\"name\":\"a\",\n\"points\":[[0],]}").unwrap_err();
        assert!(e.contains("line 2"), "{e}");
    }

    #[test]
    fn canonical_round_trip() {
        let inst = InstanceFile::parse(r#"{"name":"t","points":[[5],[0],[2]]}"#).unwrap();
        let text = serde_json::to_string(&inst.canonical()).unwrap();
        let back = InstanceFile::parse(&text).unwrap();
        assert_eq!(back.canonical(), inst.canonical());
        assert_eq!(back.digest(), inst.digest());
    }

    #[test]
    fn solve_and_davenport_need_no_files() {
        let (code, out, _) = run_capture(&["solve", "--op", "kernel", "--matrix", "2,3"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"vector\""));
        let (code, out, _) = run_capture(&["davenport", "--group", "2,2", "--format", "csv"]);
        assert_eq!(code, 0);
        assert!(out.contains("davenport,3"));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_capture(&["bogus"]).0, 2);
        assert_eq!(run_capture(&["growth", "--instance", "/nonexistent.json"]).0, 2);
        assert_eq!(run_capture(&["solve", "--op", "positive", "--matrix", "1,1"]).0, 2);
    }
}
