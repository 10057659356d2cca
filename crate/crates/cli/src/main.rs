use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use gridperm::assembly::{f_assembly, TileFamily, TileFamilyJson};
use gridperm::classification::{bicycle_witness, sample_grid_class, ClassificationReport};
use gridperm::gridding::{apply_orientation_matrix, consistent_orientation, GriddedPermutation};
use gridperm::instances::{
    format_graph, parse_graph, AnchoredPpmInstance, CliqueInstance, ColoredPpmInstance, InstanceJson, PsiInstance,
};
use gridperm::perm::incidence_graph;
use gridperm::reductions::{anchored_to_colored, anchored_to_ppm, dtp_reduce, lpp_reduce, prune_tree_matrix, Reduction};
use gridperm::solvers::ppm::{find_anchored_embedding, find_colored_embedding, find_embedding, Limits};
use gridperm::solvers::treewidth::treewidth;
use gridperm::solvers::{brute_clique, brute_psi, count_ppm_td, solve_colored_via_counting, DecompositionCounter};
use gridperm::witnesses::{bicycle_to_tree, lpp_grid_witness, staircase_path, MAX_TREE_DEPTH};
use gridperm::{Graph, GriddingMatrix, Orientation, Permutation};
use num_bigint::BigUint;
use serde_json::{json, Value};

/// Grid classes of permutations, their witnesses, and hardness gadgets.
#[derive(Parser)]
#[command(name = "gridperm", version)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Opts {
    /// Print JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the output to this file (always as JSON) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Refuse patterns longer than this.
    #[arg(long, global = true, default_value_t = Limits::default().max_pattern)]
    max_pattern: usize,
    /// Refuse texts longer than this.
    #[arg(long, global = true, default_value_t = Limits::default().max_text)]
    max_text: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide which gadget family applies to the principal class Av(SIGMA).
    Classify { sigma: Permutation },
    /// Find row and column flips turning every cell of a monotone matrix increasing.
    Orient { matrix: PathBuf },
    /// Assemble a tile family (JSON) into a gridded permutation.
    Assemble {
        tiles: PathBuf,
        /// Column signs, e.g. "1 -1 1"; all positive when omitted.
        #[arg(long, allow_hyphen_values = true)]
        col_signs: Option<String>,
        /// Row signs, bottom row first.
        #[arg(long, allow_hyphen_values = true)]
        row_signs: Option<String>,
    },
    /// Draw random members of a grid class.
    Sample {
        matrix: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        /// Largest number of entries placed in one cell.
        #[arg(long, default_value_t = 4)]
        max_cell_len: usize,
    },
    #[command(subcommand)]
    Witness(WitnessCmd),
    #[command(subcommand)]
    Reduce(ReduceCmd),
    #[command(subcommand)]
    Inflate(InflateCmd),
    #[command(subcommand)]
    Solve(SolveCmd),
    /// Tree-width of a graph file or of the incidence graph of a permutation.
    Treewidth { input: String },
    /// Decide an instance with independent oracles and report whether they agree.
    Verify { instance: PathBuf },
}

#[derive(Subcommand)]
enum WitnessCmd {
    /// Grid subgraph of side SIDE in a class whose cell graph is a long path.
    Grid {
        matrix: PathBuf,
        #[arg(long)]
        side: usize,
    },
    /// Subdivided binary tree of depth DEPTH in a class with two cycles in one component.
    Tree {
        matrix: PathBuf,
        #[arg(long)]
        depth: usize,
    },
    /// Bicycle matrix whose class avoids SIGMA.
    Bicycle { sigma: Permutation },
}

#[derive(Subcommand)]
enum ReduceCmd {
    /// Partitioned clique (coloured graph file) to anchored pattern matching.
    Clique {
        graph: PathBuf,
        /// Path matrix; a staircase of the right length when omitted.
        #[arg(long)]
        path: Option<PathBuf>,
    },
    /// Partitioned subgraph isomorphism to anchored pattern matching.
    Psi {
        pattern: PathBuf,
        /// Host graph file; must carry a colouring by pattern vertices.
        host: PathBuf,
        /// Tree matrix; pruned from a built-in two-cycle class when omitted.
        #[arg(long)]
        tree: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum InflateCmd {
    /// Anchored instance to a plain pattern matching instance.
    Ppm { instance: PathBuf },
    /// Anchored instance to a surjectively coloured instance.
    Colored { instance: PathBuf },
}

#[derive(Args)]
struct PairInput {
    /// Instance JSON holding pattern and text.
    instance: Option<PathBuf>,
    #[arg(long)]
    pattern: Option<Permutation>,
    #[arg(long)]
    text: Option<Permutation>,
}

#[derive(Subcommand)]
enum SolveCmd {
    /// Does the pattern occur in the text?
    Ppm(PairInput),
    /// Number of occurrences, by a tree decomposition of the pattern.
    Count(PairInput),
    /// Occurrence sending anchors to anchors.
    Anchored { instance: PathBuf },
    /// Occurrence meeting every colour.
    Colored {
        instance: PathBuf,
        /// Decide by inclusion-exclusion over occurrence counts.
        #[arg(long)]
        counting: bool,
    },
}

/// Result of a run: a positive or a negative answer.
enum Answer {
    Yes,
    No,
}

impl From<bool> for Answer {
    fn from(b: bool) -> Self {
        if b {
            Answer::Yes
        } else {
            Answer::No
        }
    }
}

fn read(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        return std::io::read_to_string(std::io::stdin()).context("reading stdin");
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_matrix(path: &Path) -> Result<GriddingMatrix> {
    GriddingMatrix::parse_any(&read(path)?).with_context(|| format!("matrix {}", path.display()))
}

fn read_graph(path: &Path) -> Result<(Graph, Option<Vec<usize>>)> {
    parse_graph(&read(path)?).with_context(|| format!("graph {}", path.display()))
}

fn read_instance(path: &Path) -> Result<InstanceJson> {
    serde_json::from_str(&read(path)?).with_context(|| format!("instance {}", path.display()))
}

fn parse_signs(s: Option<&str>, len: usize) -> Result<Vec<i8>> {
    let Some(s) = s else { return Ok(vec![1; len]) };
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i8>().map_err(|_| anyhow!("bad sign {:?}", t)))
        .collect()
}

fn sign_text(v: &[i8]) -> String {
    v.iter().map(|&s| if s > 0 { "+" } else { "-" }).collect::<Vec<_>>().join(" ")
}

fn one_based(v: &[usize]) -> String {
    v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(" ")
}

struct Ctx {
    opts: Opts,
}

impl Ctx {
    fn limits(&self) -> Limits {
        Limits { max_pattern: self.opts.max_pattern, max_text: self.opts.max_text }
    }

    /// Writes JSON to `--out`, or JSON or the human form to stdout.
    fn emit(&self, value: Value, human: impl FnOnce() -> String) -> Result<()> {
        let mut text = if self.opts.json || self.opts.out.is_some() { serde_json::to_string_pretty(&value)? } else { human() };
        if !text.ends_with('\n') {
            text.push('\n');
        }
        match &self.opts.out {
            Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => {
                print!("{}", text);
                Ok(())
            }
        }
    }

    fn run(&self, cmd: Cmd) -> Result<Answer> {
        match cmd {
            Cmd::Classify { sigma } => {
                let r = ClassificationReport::new(&sigma);
                let human = || {
                    let mut s = format!("sigma: {}\nrepresentative: {}\nverdict: {:?}\n", r.sigma, r.representative, r.verdict);
                    if let Some(w) = &r.witness {
                        if let Ok(m) = GriddingMatrix::from_json(w) {
                            let _ = write!(s, "witness:\n{}", m.to_text().unwrap_or_else(|| m.to_string()));
                        }
                    }
                    s
                };
                self.emit(serde_json::to_value(&r)?, human)?;
                Ok(Answer::Yes)
            }
            Cmd::Orient { matrix } => {
                let m = read_matrix(&matrix)?;
                let f = consistent_orientation(&m)?;
                let oriented = f.as_ref().map(|f| apply_orientation_matrix(&m, f)).transpose()?;
                let value = json!({
                    "orientation": f,
                    "matrix": oriented.as_ref().map(|o| o.to_json()),
                });
                self.emit(value, || match (&f, &oriented) {
                    (Some(f), Some(o)) => format!(
                        "columns: {}\nrows: {}\n{}",
                        sign_text(&f.cols),
                        sign_text(&f.rows),
                        o.to_text().unwrap_or_default()
                    ),
                    _ => "no consistent orientation\n".into(),
                })?;
                Ok(f.is_some().into())
            }
            Cmd::Assemble { tiles, col_signs, row_signs } => {
                let j: TileFamilyJson =
                    serde_json::from_str(&read(&tiles)?).with_context(|| format!("tiles {}", tiles.display()))?;
                let fam = TileFamily::from_json(&j)?;
                let f = Orientation::new(parse_signs(col_signs.as_deref(), j.cols)?, parse_signs(row_signs.as_deref(), j.rows)?)?;
                let a = f_assembly(&fam, &f)?;
                let g: &GriddedPermutation = &a.gridded;
                self.emit(serde_json::to_value(g)?, || {
                    format!(
                        "permutation: {}\ncolumn cuts: {:?}\nrow cuts: {:?}\n",
                        g.perm, g.gridding.col_cuts, g.gridding.row_cuts
                    )
                })?;
                Ok(Answer::Yes)
            }
            Cmd::Sample { matrix, seed, samples, max_cell_len } => {
                let m = read_matrix(&matrix)?;
                let out = sample_grid_class(&m, samples, max_cell_len, seed)?;
                let value = json!({ "seed": seed, "samples": out });
                self.emit(value, || out.iter().map(|p| format!("{}\n", p)).collect())?;
                Ok(Answer::Yes)
            }
            Cmd::Witness(w) => self.witness(w),
            Cmd::Reduce(r) => self.reduce(r),
            Cmd::Inflate(i) => self.inflate(i),
            Cmd::Solve(s) => self.solve(s),
            Cmd::Treewidth { input } => {
                let g = if Path::new(&input).is_file() {
                    read_graph(Path::new(&input))?.0
                } else {
                    let p: Permutation =
                        input.parse().with_context(|| format!("{:?} is neither a graph file nor a permutation", input))?;
                    incidence_graph(&p)
                };
                let t = treewidth(&g);
                let bags: Vec<Vec<usize>> = t.decomposition.bags.iter().map(|b| b.iter().map(|v| v + 1).collect()).collect();
                let parent: Vec<Option<usize>> = t.decomposition.parent.iter().map(|p| p.map(|x| x + 1)).collect();
                let value = json!({ "width": t.width, "exact": t.exact, "bags": bags, "parent": parent });
                self.emit(value, || {
                    let mut s = format!("width: {}{}\n", t.width, if t.exact { "" } else { " (upper bound)" });
                    for (i, b) in t.decomposition.bags.iter().enumerate() {
                        let up = t.decomposition.parent[i].map_or("-".to_string(), |p| (p + 1).to_string());
                        let _ = writeln!(s, "bag {} (parent {}): {}", i + 1, up, one_based(b));
                    }
                    s
                })?;
                Ok(Answer::Yes)
            }
            Cmd::Verify { instance } => self.verify(&read_instance(&instance)?),
        }
    }

    fn witness(&self, cmd: WitnessCmd) -> Result<Answer> {
        match cmd {
            WitnessCmd::Grid { matrix, side } => {
                let w = lpp_grid_witness(&read_matrix(&matrix)?, side)?;
                let ok = w.verify();
                self.emit(serde_json::to_value(w.to_json())?, || {
                    let mut s = format!("permutation: {}\n", w.perm());
                    for y in (0..side).rev() {
                        let row: Vec<String> = (0..side).map(|x| format!("{:>4}", w.map[x][y] + 1)).collect();
                        let _ = writeln!(s, "{}", row.join(""));
                    }
                    s
                })?;
                Ok(ok.into())
            }
            WitnessCmd::Tree { matrix, depth } => {
                let w = bicycle_to_tree(&read_matrix(&matrix)?, depth)?;
                let cell = |c: &(usize, usize)| [c.0 + 1, c.1 + 1];
                let edges: Vec<Value> = w
                    .edges
                    .iter()
                    .map(|(p, c, cells)| json!({ "parent": p + 1, "child": c + 1, "cells": cells.iter().map(cell).collect::<Vec<_>>() }))
                    .collect();
                let value = json!({
                    "matrix": w.matrix.to_json(),
                    "depth": w.depth,
                    "branch": w.branch.iter().map(cell).collect::<Vec<_>>(),
                    "edges": edges,
                });
                self.emit(value, || {
                    let mut s = format!("{}x{} matrix, depth {}\n", w.matrix.cols(), w.matrix.rows(), w.depth);
                    s += &w.matrix.to_text().unwrap_or_default();
                    for (i, c) in w.branch.iter().enumerate() {
                        let _ = writeln!(s, "vertex {}: cell ({}, {})", i + 1, c.0 + 1, c.1 + 1);
                    }
                    s
                })?;
                Ok(w.verify().into())
            }
            WitnessCmd::Bicycle { sigma } => {
                let w = bicycle_witness(&sigma)?;
                let value = json!({ "anchor": w.anchor, "symmetry": w.symmetry, "matrix": w.matrix.to_json() });
                self.emit(value, || {
                    format!("anchor: {}\nsymmetry: {}\n{}", w.anchor, w.symmetry, w.matrix.to_text().unwrap_or_default())
                })?;
                Ok(Answer::Yes)
            }
        }
    }

    fn emit_reduction(&self, mut red: Reduction, source: Value) -> Result<Answer> {
        if let Value::Object(map) = &mut red.instance.provenance {
            map.insert("source".into(), source);
        }
        let j = InstanceJson::from_anchored(&red.instance);
        self.emit(serde_json::to_value(&j)?, || {
            format!(
                "pattern length: {}\ntext length: {}\npattern anchors: {} {}\ntext anchors: {} {}\n",
                j.pattern.len(),
                j.text.len(),
                red.instance.pattern_anchor.0 + 1,
                red.instance.pattern_anchor.1 + 1,
                red.instance.text_anchor.0 + 1,
                red.instance.text_anchor.1 + 1
            )
        })?;
        Ok(Answer::Yes)
    }

    fn reduce(&self, cmd: ReduceCmd) -> Result<Answer> {
        match cmd {
            ReduceCmd::Clique { graph, path } => {
                let (h, chi) = read_graph(&graph)?;
                let chi = chi.ok_or_else(|| anyhow!("graph {} has no colouring line", graph.display()))?;
                let k = chi.iter().max().map_or(0, |c| c + 1);
                let inst = CliqueInstance::new(h, chi, k)?;
                let path = match path {
                    Some(p) => read_matrix(&p)?,
                    None => staircase_path((4 * k).saturating_sub(2).max(1)),
                };
                let source = json!({ "host": format_graph(&inst.h, Some(&inst.chi)), "k": k });
                self.emit_reduction(lpp_reduce(&inst, &path)?, source)
            }
            ReduceCmd::Psi { pattern, host, tree } => {
                let (g, _) = read_graph(&pattern)?;
                let (h, chi) = read_graph(&host)?;
                let chi = chi.ok_or_else(|| anyhow!("host graph {} has no colouring line", host.display()))?;
                let inst = PsiInstance::new(g, h, chi)?;
                let tree = match tree {
                    Some(t) => read_matrix(&t)?,
                    None => default_tree(inst.g.num_edges())?,
                };
                let source = json!({
                    "pattern": format_graph(&inst.g, None),
                    "host": format_graph(&inst.h, Some(&inst.chi)),
                });
                self.emit_reduction(dtp_reduce(&inst, &tree)?, source)
            }
        }
    }

    fn inflate(&self, cmd: InflateCmd) -> Result<Answer> {
        let (path, colored) = match &cmd {
            InflateCmd::Ppm { instance } => (instance, false),
            InflateCmd::Colored { instance } => (instance, true),
        };
        let inst = read_instance(path)?.to_anchored()?;
        let j = if colored {
            InstanceJson::from_colored(&anchored_to_colored(&inst)?)
        } else {
            let (pattern, text) = anchored_to_ppm(&inst)?;
            InstanceJson { pattern, text, anchors: None, colors: None, inflation: None, provenance: json!({ "reduction": "ppm", "source": inst.provenance }) }
        };
        self.emit(serde_json::to_value(&j)?, || {
            let mut s = format!("pattern: {}\ntext: {}\n", j.pattern, j.text);
            if let Some(c) = &j.colors {
                let _ = writeln!(s, "colors: {}", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
            }
            s
        })?;
        Ok(Answer::Yes)
    }

    fn pair(&self, input: PairInput) -> Result<(Permutation, Permutation)> {
        match (input.instance, input.pattern, input.text) {
            (Some(path), None, None) => {
                let j = read_instance(&path)?;
                Ok((j.pattern, j.text))
            }
            (None, Some(p), Some(t)) => Ok((p, t)),
            _ => bail!("give either an instance file or both --pattern and --text"),
        }
    }

    fn emit_embedding(&self, emb: Option<Vec<usize>>) -> Result<Answer> {
        let value = json!({ "found": emb.is_some(), "embedding": emb.as_ref().map(|e| e.iter().map(|x| x + 1).collect::<Vec<_>>()) });
        self.emit(value, || match &emb {
            Some(e) => format!("yes\nembedding: {}\n", one_based(e)),
            None => "no\n".into(),
        })?;
        Ok(emb.is_some().into())
    }

    fn solve(&self, cmd: SolveCmd) -> Result<Answer> {
        let limits = self.limits();
        match cmd {
            SolveCmd::Ppm(input) => {
                let (p, t) = self.pair(input)?;
                self.emit_embedding(find_embedding(&p, &t, &limits)?)
            }
            SolveCmd::Count(input) => {
                let (p, t) = self.pair(input)?;
                limits.check(p.len(), t.len())?;
                let (n, width) = guarded_count(&p, &t)?;
                let value = json!({ "count": n.to_string(), "width": width });
                self.emit(value, || format!("{}\n", n))?;
                Ok(Answer::Yes)
            }
            SolveCmd::Anchored { instance } => {
                let inst = read_instance(&instance)?.to_anchored()?;
                self.emit_embedding(find_anchored_embedding(&inst, &limits)?)
            }
            SolveCmd::Colored { instance, counting } => {
                let inst = read_instance(&instance)?.to_colored()?;
                if counting {
                    limits.check(inst.pattern.len(), inst.text.len())?;
                    let yes = guarded_colored_count(&inst)?;
                    self.emit(json!({ "found": yes }), || if yes { "yes\n".into() } else { "no\n".into() })?;
                    Ok(yes.into())
                } else {
                    self.emit_embedding(find_colored_embedding(&inst, &limits)?)
                }
            }
        }
    }

    fn verify(&self, j: &InstanceJson) -> Result<Answer> {
        let limits = self.limits();
        let mut oracles: Vec<(&str, bool)> = Vec::new();
        if j.anchors.is_some() {
            let inst = j.to_anchored()?;
            oracles.push(("anchored search", find_anchored_embedding(&inst, &limits)?.is_some()));
            match source_answer(&inst.provenance)? {
                Some(ans) => oracles.push(("source problem", ans)),
                None => oracles.push(("anchored enumeration", anchored_enumeration(&inst, &limits)?)),
            }
        } else if j.colors.is_some() {
            let inst = j.to_colored()?;
            limits.check(inst.pattern.len(), inst.text.len())?;
            oracles.push(("coloured search", find_colored_embedding(&inst, &limits)?.is_some()));
            oracles.push(("inclusion-exclusion", guarded_colored_count(&inst)?));
        } else {
            oracles.push(("search", find_embedding(&j.pattern, &j.text, &limits)?.is_some()));
            limits.check(j.pattern.len(), j.text.len())?;
            oracles.push(("decomposition count", guarded_count(&j.pattern, &j.text)?.0 > 0u32.into()));
        }
        let agree = oracles.windows(2).all(|w| w[0].1 == w[1].1);
        let value = json!({
            "agree": agree,
            "answer": if agree { Some(oracles[0].1) } else { None },
            "oracles": oracles.iter().map(|(n, a)| json!({ "oracle": n, "answer": a })).collect::<Vec<_>>(),
        });
        self.emit(value, || {
            let mut s = String::new();
            for (n, a) in &oracles {
                let _ = writeln!(s, "{:<22}{}", n, if *a { "yes" } else { "no" });
            }
            s + if agree { "oracles agree\n" } else { "ORACLES DISAGREE\n" }
        })?;
        Ok(agree.into())
    }
}

/// Largest estimated table work, `|text|^(width + 1)` per count, for the
/// decomposition counter.
const COUNT_WORK_LIMIT: f64 = 1e9;

/// Most colours for inclusion-exclusion over colour subsets.
const COUNTING_COLOR_LIMIT: usize = 20;

fn scale_guard(what: &str, limit: f64, actual: f64) -> Result<()> {
    if actual > limit {
        let (limit, actual) = (limit as usize, actual.min(usize::MAX as f64) as usize);
        return Err(gridperm::Error::ScaleGuard { what: what.into(), limit, actual }.into());
    }
    Ok(())
}

/// Refuses `calls` decomposition counts at `width` in texts no longer than
/// `text_len` when the total table work would be too large.
fn check_count_work(width: usize, text_len: usize, calls: f64) -> Result<()> {
    let work = calls * (text_len.max(1) as f64).powi(width as i32 + 1);
    scale_guard("estimated counting work", COUNT_WORK_LIMIT, work)
}

fn guarded_count(p: &Permutation, t: &Permutation) -> Result<(BigUint, usize)> {
    let td = treewidth(&incidence_graph(p));
    check_count_work(td.width, t.len(), 1.0)?;
    Ok((count_ppm_td(p, t, &td.decomposition)?, td.width))
}

fn guarded_colored_count(inst: &ColoredPpmInstance) -> Result<bool> {
    scale_guard("colours for inclusion-exclusion", COUNTING_COLOR_LIMIT as f64, inst.t as f64)?;
    let width = treewidth(&incidence_graph(&inst.pattern)).width;
    check_count_work(width, inst.text.len(), (1u64 << inst.t) as f64)?;
    Ok(solve_colored_via_counting(inst, &DecompositionCounter)?)
}

/// Answer of the graph problem recorded by `reduce`, if present.
fn source_answer(provenance: &Value) -> Result<Option<bool>> {
    let Some(src) = provenance.get("source") else { return Ok(None) };
    let host = src.get("host").and_then(Value::as_str).ok_or_else(|| anyhow!("provenance source lacks a host graph"))?;
    let (h, chi) = parse_graph(host).context("provenance host graph")?;
    let chi = chi.ok_or_else(|| anyhow!("provenance host graph has no colouring"))?;
    let ans = match src.get("pattern").and_then(Value::as_str) {
        Some(g) => brute_psi(&PsiInstance::new(parse_graph(g).context("provenance pattern graph")?.0, h, chi)?)?,
        None => {
            let k = src.get("k").and_then(Value::as_u64).ok_or_else(|| anyhow!("provenance source lacks k"))?;
            brute_clique(&CliqueInstance::new(h, chi, k as usize)?)?
        }
    };
    Ok(Some(ans))
}

/// Largest number of position subsets the plain enumeration will try.
const ENUMERATION_LIMIT: u128 = 50_000_000;

/// Anchored matching by trying every subset of inner text positions.
fn anchored_enumeration(inst: &AnchoredPpmInstance, limits: &Limits) -> Result<bool> {
    limits.check(inst.pattern.len(), inst.text.len())?;
    let (pa, pb) = inst.pattern_anchor;
    let (ta, tb) = inst.text_anchor;
    let (before, inner, after) = (pa, pb - pa - 1, inst.pattern.len() - pb - 1);
    let slots = [(0, ta, before), (ta + 1, tb, inner), (tb + 1, inst.text.len(), after)];
    let mut total: u128 = 1;
    for &(lo, hi, k) in &slots {
        total = total.saturating_mul(binomial(hi.saturating_sub(lo), k));
    }
    if total > ENUMERATION_LIMIT {
        scale_guard("subsets for anchored enumeration", ENUMERATION_LIMIT as f64, total as f64)?;
    }
    let mut choice = Vec::with_capacity(inst.pattern.len());
    Ok(enumerate(inst, &slots, 0, lo_of(&slots, 0), &mut choice))
}

fn lo_of(slots: &[(usize, usize, usize)], i: usize) -> usize {
    slots.get(i).map_or(0, |s| s.0)
}

fn enumerate(
    inst: &AnchoredPpmInstance,
    slots: &[(usize, usize, usize); 3],
    slot: usize,
    from: usize,
    choice: &mut Vec<usize>,
) -> bool {
    let filled: usize = slots[..slot].iter().map(|s| s.2).sum();
    if slot == 3 {
        let mut pos = choice.clone();
        pos.push(inst.text_anchor.0);
        pos.push(inst.text_anchor.1);
        pos.sort_unstable();
        return inst.text.subpattern(&pos) == inst.pattern;
    }
    if choice.len() == filled + slots[slot].2 {
        return enumerate(inst, slots, slot + 1, lo_of(slots, slot + 1), choice);
    }
    for p in from..slots[slot].1 {
        choice.push(p);
        if enumerate(inst, slots, slot, p + 1, choice) {
            return true;
        }
        choice.pop();
    }
    false
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// A tree matrix with `leaves` leaves, pruned from the deep-tree witness of
/// two increasing 4-cycles joined by a corridor.
fn default_tree(leaves: usize) -> Result<GriddingMatrix> {
    let dumbbell: GriddingMatrix = "..//\n.///\n//..\n//..\n".parse()?;
    let mut last = None;
    for depth in 1..=MAX_TREE_DEPTH {
        if (1usize << depth) < leaves {
            continue;
        }
        match prune_tree_matrix(&bicycle_to_tree(&dumbbell, depth)?, leaves) {
            Ok(m) => return Ok(m),
            Err(e) => last = Some(e),
        }
    }
    Err(last.map_or_else(|| anyhow!("no built-in tree has {} leaves", leaves), Into::into))
}

fn exit_code(e: &anyhow::Error) -> u8 {
    let scale = e.chain().any(|c| matches!(c.downcast_ref::<gridperm::Error>(), Some(gridperm::Error::ScaleGuard { .. })));
    if scale {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx { opts: cli.opts };
    match ctx.run(cli.cmd) {
        Ok(Answer::Yes) => ExitCode::SUCCESS,
        Ok(Answer::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(exit_code(&e))
        }
    }
}
