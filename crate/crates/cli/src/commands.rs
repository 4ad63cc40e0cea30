use std::io::{Read, Write};
use std::path::Path;

use lll_core::cycle::cycle_boundary_lambda_bigraph;
use lll_core::discrete::{exterior_membership_search, mup_bruteforce_report};
use lll_core::gap::{classify_gap_with, ClassifyConfig, GapVerdict, NumericGap};
use lll_core::graph::{
    make_canonical_bigraph, make_combinatorial_bigraph, make_cycle_bigraph, make_hstar, make_upper_combinatorial,
    random_tree_bigraph,
};
use lll_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::output::{fmt_f64, to_json};
use crate::{BoundaryMethod, Cli, Command, Instance, OracleKind, WitnessMethod};

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| invalid(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    }
    serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn load_instance(inst: &Instance) -> Result<Bigraph> {
    match (&inst.bigraph, inst.n) {
        (Some(p), _) => read_json(p),
        (None, Some(n)) => make_cycle_bigraph(n),
        (None, None) => Err(invalid("an instance is required: --bigraph FILE or --n N")),
    }
}

fn parse_vec(s: &str, n: usize) -> Result<ProbVec> {
    let v = ProbVec::parse(s)?;
    v.expect_len(n)?;
    Ok(v)
}

struct Sink {
    out: Box<dyn Write>,
}

impl Sink {
    fn new(cli: &Cli) -> Result<Self> {
        let out: Box<dyn Write> = match &cli.global.out {
            Some(p) => Box::new(
                std::fs::File::create(p).map_err(|e| invalid(format!("cannot write {}: {e}", p.display())))?,
            ),
            None => Box::new(std::io::stdout().lock()),
        };
        Ok(Sink { out })
    }

    fn json<T: Serialize>(&mut self, x: &T) -> Result<()> {
        let text = to_json(x) + "\n";
        self.raw(text.as_bytes())
    }

    fn raw(&mut self, bytes: &[u8]) -> Result<()> {
        match self.out.write_all(bytes).and_then(|_| self.out.flush()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(invalid(format!("write: {e}"))),
            _ => Ok(()),
        }
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    let cfg = cli.global.resolve()?;
    let mut sink = Sink::new(cli)?;
    match &cli.command {
        Command::Generate { family, params, graph } => sink.json(&generate(family, params, graph.as_deref(), &cfg)?),
        Command::Boundary {
            method,
            instance,
            direction,
        } => {
            let h = load_instance(instance)?;
            let d = parse_vec(direction, h.n_events())?;
            let r = boundary(*method, &h, &d, &cfg)?;
            if cfg.format == Some(Format::Csv) {
                let mut w = csv::Writer::from_writer(Vec::new());
                let e = |err: csv::Error| invalid(format!("csv: {err}"));
                w.write_record(["method", "lambda", "residual", "boundary_vector"]).map_err(e)?;
                w.write_record([
                    serde_json::to_value(r.method).unwrap().as_str().unwrap_or_default().to_string(),
                    fmt_f64(r.lambda),
                    fmt_f64(r.residual),
                    join(r.boundary_vector.as_slice()),
                ])
                .map_err(e)?;
                sink.raw(&w.into_inner().map_err(|e| invalid(format!("csv: {e}")))?)
            } else {
                sink.json(&r)
            }
        }
        Command::Shearer { graph, p } => {
            let g: DependencyGraph = read_json(graph)?;
            let p = parse_vec(p, g.n_vertices())?;
            let r = shearer_values(&g, &p)?;
            sink.json(&ShearerSummary {
                min_q: r.min_value,
                min_set: r.min_set.iter().map(|v| v + 1).collect(),
                interior: r.is_interior(),
                q_empty: r.q_empty(),
                total: r.total(),
            })
        }
        Command::ShearerBoundary { graph, direction } => {
            let g: DependencyGraph = read_json(graph)?;
            let d = parse_vec(direction, g.n_vertices())?;
            sink.json(&abstract_boundary_lambda(&g, &d, cfg.tol)?)
        }
        Command::Classify {
            instance,
            numeric,
            dirs,
        } => {
            let h = load_instance(instance)?;
            let verdict = classify_gap_with(&h, &ClassifyConfig { subset_cap: cfg.subset_cap })?;
            let numeric = if *numeric {
                let search = cfg.search()?;
                let rows = random_directions(h.n_events(), *dirs, cfg.seed)
                    .into_iter()
                    .map(|d| numeric_gap_check(&h, &d, &search, 0.0).map(|g| (d, g)))
                    .collect::<Result<Vec<_>>>()?;
                Some(rows.into_iter().map(|(d, g)| NumericRow { direction: d, check: g }).collect())
            } else {
                None
            };
            sink.json(&ClassifyOutput { verdict, numeric })
        }
        Command::Witness {
            method,
            instance,
            direction,
            p,
            evaluate,
        } => witness(&mut sink, *method, instance, direction.as_deref(), p.as_deref(), *evaluate, &cfg),
        Command::Oracle {
            kind,
            instance,
            vector,
        } => {
            let h = load_instance(instance)?;
            let v = parse_vec(vector, h.n_events())?;
            let search = cfg.search()?;
            match kind {
                OracleKind::Exterior => sink.json(&exterior_membership_search(&h, &v, &search)?),
                OracleKind::Boundary => sink.json(&vlll_boundary_lambda_bruteforce(&h, &v, &search)?),
                OracleKind::Mup => sink.json(&mup_bruteforce_report(&h, &v, &search)?),
            }
        }
        Command::Sweep { instance, count } => {
            let h = load_instance(instance)?;
            let rows = sweep(&h, *count, &cfg)?;
            if cfg.format == Some(Format::Json) {
                sink.json(&rows)
            } else {
                sink.raw(&sweep_csv(&rows)?)
            }
        }
    }
}

#[derive(Serialize)]
struct ShearerSummary {
    min_q: f64,
    /// 1-based vertices of the minimizing independent set.
    min_set: Vec<usize>,
    interior: bool,
    q_empty: f64,
    total: f64,
}

#[derive(Serialize)]
struct ClassifyOutput {
    #[serde(flatten)]
    verdict: GapVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    numeric: Option<Vec<NumericRow>>,
}

#[derive(Serialize)]
struct NumericRow {
    direction: ProbVec,
    #[serde(flatten)]
    check: NumericGap,
}

pub fn generate(family: &str, params: &[usize], graph: Option<&Path>, cfg: &RunConfig) -> Result<Bigraph> {
    let want = |k: usize| -> Result<()> {
        if params.len() == k {
            Ok(())
        } else {
            Err(invalid(format!("family {family} takes {k} parameter(s), got {}", params.len())))
        }
    };
    match family {
        "cycle" => {
            want(1)?;
            make_cycle_bigraph(params[0])
        }
        "comb" => {
            want(2)?;
            make_combinatorial_bigraph(params[0], params[1])
        }
        "upper-comb" => {
            want(2)?;
            make_upper_combinatorial(params[0], params[1])
        }
        "hstar" => {
            want(0)?;
            Ok(make_hstar())
        }
        "canonical-of" => {
            want(0)?;
            let g: DependencyGraph = read_json(graph.ok_or_else(|| invalid("canonical-of needs --graph FILE"))?)?;
            Ok(make_canonical_bigraph(&g))
        }
        "random-tree" => {
            want(1)?;
            if params[0] == 0 {
                return Err(invalid("random-tree needs at least one event"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            Ok(random_tree_bigraph(params[0], &mut rng))
        }
        other => Err(invalid(format!(
            "unknown family {other:?} (expected cycle, comb, upper-comb, hstar, canonical-of, random-tree)"
        ))),
    }
}

fn is_cycle_shaped(h: &Bigraph) -> bool {
    h.n_events() >= 3 && h.base_graph().is_cycle() && (0..h.n_variables()).all(|j| h.variable_degree(j) <= 2)
}

pub fn boundary(method: BoundaryMethod, h: &Bigraph, d: &ProbVec, cfg: &RunConfig) -> Result<BoundaryResult> {
    let method = match method {
        BoundaryMethod::Auto => {
            let g = h.base_graph();
            if g.is_tree() {
                BoundaryMethod::Tree
            } else if is_cycle_shaped(h) {
                BoundaryMethod::Cycle
            } else {
                BoundaryMethod::Discrete
            }
        }
        m => m,
    };
    match method {
        BoundaryMethod::Shearer => abstract_boundary_lambda(&h.base_graph(), d, cfg.tol),
        BoundaryMethod::Tree => tree_boundary_lambda(h, d, cfg.tol.max(1e-12)),
        BoundaryMethod::Cycle => cycle_boundary_lambda_bigraph(h, d, cfg.tol),
        BoundaryMethod::Discrete => vlll_boundary_lambda_bruteforce(h, d, &cfg.search()?),
        BoundaryMethod::Auto => unreachable!("auto resolved above"),
    }
}

fn witness(
    sink: &mut Sink,
    method: WitnessMethod,
    instance: &Instance,
    direction: Option<&str>,
    p: Option<&str>,
    evaluate: bool,
    cfg: &RunConfig,
) -> Result<()> {
    let dir_or_ones = |n: usize| match direction {
        Some(s) => parse_vec(s, n),
        None => ProbVec::uniform(n, 1.0),
    };
    let set = match method {
        WitnessMethod::Tree => {
            let h = load_instance(instance)?;
            let r = tree_boundary_lambda(&h, &dir_or_ones(h.n_events())?, cfg.tol.max(1e-12))?;
            let w = tree_witness(&h, &r.boundary_vector)?;
            return if evaluate { sink.json(&w.evaluate(&h)?) } else { sink.json(&w) };
        }
        WitnessMethod::Cycle => {
            let h = load_instance(instance)?;
            if !is_cycle_shaped(&h) {
                return Err(Error::NotApplicable("cycle witness needs a cycle bigraph".into()));
            }
            let d = dir_or_ones(h.n_events())?;
            let r = cycle_boundary_lambda(&d, cfg.tol)?;
            (make_cycle_bigraph(h.n_events())?, cycle_boundary_witness(&d, &r)?)
        }
        WitnessMethod::CycleGapful => {
            let n = match (instance.n, &instance.bigraph) {
                (Some(n), _) => n,
                (None, Some(_)) => load_instance(instance)?.n_events(),
                (None, None) => return Err(invalid("cycle-gapful needs --n N")),
            };
            (make_cycle_bigraph(n)?, cycle_gapful_witness(n)?)
        }
        WitnessMethod::SmallExclusive => {
            let h = load_instance(instance)?;
            let w = small_exclusive_witness(&h);
            (h, w)
        }
        WitnessMethod::H43 => {
            let p = parse_vec(p.ok_or_else(|| invalid("h43 needs --p \"p1,p2,p3,p4\""))?, 4)?;
            (make_combinatorial_bigraph(4, 3)?, h43_witness(&p)?)
        }
    };
    let (h, w) = set;
    if evaluate {
        sink.json(&w.evaluate(&h)?)
    } else {
        sink.json(&w)
    }
}

/// Directions with entries drawn uniformly from [0.05, 1).
pub fn random_directions(n: usize, count: usize, seed: u64) -> Vec<ProbVec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| ProbVec::new((0..n).map(|_| rng.gen_range(0.05..1.0)).collect()).expect("entries in (0, 1)"))
        .collect()
}

#[derive(Debug, Serialize)]
pub struct SweepRow {
    pub direction: ProbVec,
    pub lambda_abstract: f64,
    pub lambda_variable: f64,
    pub margin: f64,
    pub method: Method,
}

pub fn sweep(h: &Bigraph, count: usize, cfg: &RunConfig) -> Result<Vec<SweepRow>> {
    let search = cfg.search()?;
    random_directions(h.n_events(), count, cfg.seed)
        .into_iter()
        .map(|d| {
            let g = numeric_gap_check(h, &d, &search, 0.0)?;
            Ok(SweepRow {
                direction: d,
                lambda_abstract: g.lambda_abstract,
                lambda_variable: g.lambda_variable,
                margin: g.margin,
                method: g.method,
            })
        })
        .collect()
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(";")
}

fn sweep_csv(rows: &[SweepRow]) -> Result<Vec<u8>> {
    let e = |err: csv::Error| invalid(format!("csv: {err}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["direction", "lambda_abstract", "lambda_variable", "margin", "method"])
        .map_err(e)?;
    for r in rows {
        w.write_record([
            join(r.direction.as_slice()),
            fmt_f64(r.lambda_abstract),
            fmt_f64(r.lambda_variable),
            fmt_f64(r.margin),
            serde_json::to_value(r.method).unwrap().as_str().unwrap_or_default().to_string(),
        ])
        .map_err(e)?;
    }
    w.into_inner().map_err(|err| invalid(format!("csv: {err}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(n: usize) -> ProbVec {
        ProbVec::uniform(n, 1.0).unwrap()
    }

    #[test]
    fn generate_families() {
        let c = RunConfig::default();
        assert_eq!(generate("cycle", &[4], None, &c).unwrap().n_events(), 4);
        let h = generate("comb", &[4, 3], None, &c).unwrap();
        assert_eq!((h.n_events(), h.n_variables()), (4, 4));
        assert_eq!(generate("hstar", &[], None, &c).unwrap().n_events(), 5);
        assert!(generate("nope", &[], None, &c).is_err());
        assert!(generate("cycle", &[], None, &c).is_err());
        let a = generate("random-tree", &[6], None, &c).unwrap();
        assert_eq!(a, generate("random-tree", &[6], None, &c).unwrap());
    }

    #[test]
    fn auto_dispatch() {
        let c = RunConfig::default();
        let h4 = make_cycle_bigraph(4).unwrap();
        assert_eq!(boundary(BoundaryMethod::Auto, &h4, &ones(4), &c).unwrap().method, Method::Cycle);
        let path = make_canonical_bigraph(&DependencyGraph::path(3));
        assert_eq!(boundary(BoundaryMethod::Auto, &path, &ones(3), &c).unwrap().method, Method::Tree);
        let s = boundary(BoundaryMethod::Shearer, &h4, &ones(4), &c).unwrap();
        assert!((s.lambda - (1.0 - 0.5f64.sqrt())).abs() < 1e-9);
    }

    #[test]
    fn sweep_on_square_is_gapful() {
        let rows = sweep(&make_cycle_bigraph(4).unwrap(), 10, &RunConfig::default()).unwrap();
        assert_eq!(rows.len(), 10);
        assert!(rows.iter().all(|r| r.margin > 0.0));
    }

    #[test]
    fn sweep_on_path_has_no_margin() {
        let path = make_canonical_bigraph(&DependencyGraph::path(3));
        let rows = sweep(&path, 10, &RunConfig::default()).unwrap();
        assert!(rows.iter().all(|r| r.margin.abs() <= 1e-9));
    }

    #[test]
    fn directions_are_seeded() {
        assert_eq!(random_directions(3, 4, 1), random_directions(3, 4, 1));
        assert_ne!(random_directions(3, 4, 1), random_directions(3, 4, 2));
    }
}
