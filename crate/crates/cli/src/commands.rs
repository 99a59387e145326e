use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use serde_json::{json, Value};

use phylotoric::ehrhart::{
    gnuplot_script, hilbert_ehrhart_polynomial, normalized_volume, relative_ehrhart, volume_distribution,
};
use phylotoric::ideal::{quadratic_relations, socket_relations, socket_string, vanishing_check};
use phylotoric::lattice::division::check_division;
use phylotoric::lattice::{
    dual_vertices, face_lattice, network_of_socket, polarity_check, polytope_of, vertex_link_division, Socket,
};
use phylotoric::tree::{elementary_mutations, mutation_path_to_caterpillar};
use phylotoric::verify::{run_all, run_check, CheckResult, CHECKS, DEFAULT_SEED};
use phylotoric::{parse_tree, PointedTree, Tree};

use crate::{Command, Format, Options};

pub enum Failure {
    Usage(String),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

type Run = Result<ExitCode, Failure>;

fn tree(opts: &Options) -> Result<Tree, Failure> {
    let src = opts
        .tree
        .as_deref()
        .ok_or_else(|| Failure::Usage("this subcommand needs --tree".into()))?;
    // a path to an existing file is read, e.g. a multi-line edge list
    let text = match std::fs::read_to_string(src) {
        Ok(contents) if std::path::Path::new(src).is_file() => contents,
        _ => src.to_string(),
    };
    parse_tree(&text).map_err(|e| Failure::Usage(format!("cannot read tree {src:?}: {e}")))
}

fn emit(opts: &Options, text: &str) -> Run {
    match &opts.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn emit_json(opts: &Options, v: &Value) -> Run {
    emit(opts, &(serde_json::to_string_pretty(v).map_err(anyhow::Error::from)? + "\n"))
}

fn row(v: &[i64]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn csv_row(v: &[i64]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

pub fn run(cmd: Command, opts: &Options) -> Run {
    match cmd {
        Command::Describe => describe(opts),
        Command::Polytope => polytope(opts),
        Command::Faces => faces(opts),
        Command::Dual => dual(opts),
        Command::Ideal => ideal(opts),
        Command::Ehrhart => ehrhart(opts),
        Command::VolumeDist => volume_dist(opts),
        Command::Mutate => mutate(opts),
        Command::Verify => verify(opts),
    }
}

fn describe(opts: &Options) -> Run {
    let t = tree(opts)?;
    let v = json!({
        "canonical": t.canonical_form(),
        "shape": t.shape_form(),
        "leaves": t.leaf_count(),
        "edges": t.edge_count(),
        "inner_nodes": t.inner_nodes().len(),
        "inner_edges": t.inner_edges().len(),
        "trivalent": t.is_trivalent(),
        "star": t.is_star(),
        "caterpillar": t.is_caterpillar(),
    });
    match opts.format {
        Format::Json => emit_json(opts, &v),
        Format::Csv => {
            let mut s = String::from("key,value\n");
            for (k, val) in v.as_object().unwrap() {
                let _ = writeln!(s, "{k},{}", val.to_string().trim_matches('"'));
            }
            emit(opts, &s)
        }
        Format::Human => {
            let mut s = String::new();
            let _ = writeln!(s, "tree         {}", t.canonical_form());
            let _ = writeln!(s, "leaves       {}", t.leaf_count());
            let _ = writeln!(s, "edges        {}", t.edge_count());
            let _ = writeln!(s, "inner nodes  {}", t.inner_nodes().len());
            let _ = writeln!(s, "inner edges  {}", t.inner_edges().len());
            let _ = writeln!(s, "3-valent     {}", t.is_trivalent());
            let _ = writeln!(s, "caterpillar  {}", t.is_caterpillar());
            let edges: Vec<String> = t.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
            let _ = writeln!(s, "edge order   {}", edges.join(" "));
            emit(opts, &s)
        }
    }
}

fn polytope(opts: &Options) -> Run {
    let t = tree(opts)?;
    let p = polytope_of(&t).map_err(anyhow::Error::from)?;
    let sockets: Vec<String> = p.vertices.iter().map(|u| socket_string(&t, u)).collect();
    let mut facets = p.facets.clone();
    facets.sort();
    match opts.format {
        Format::Json => emit_json(
            opts,
            &json!({
                "dim": p.dim(),
                "vertices": p.vertices,
                "sockets": sockets,
                "facets": facets,
            }),
        ),
        Format::Csv => {
            let mut s = String::from("socket,vertex\n");
            for (sock, u) in sockets.iter().zip(&p.vertices) {
                let _ = writeln!(s, "{sock},{}", row(u));
            }
            emit(opts, &s)
        }
        Format::Human => {
            let mut s = String::new();
            let _ = writeln!(s, "dimension {}, {} vertices, {} facets", p.dim(), p.vertices.len(), facets.len());
            let _ = writeln!(s, "\nsocket  vertex");
            for (sock, u) in sockets.iter().zip(&p.vertices) {
                let _ = writeln!(s, "{sock}  [{}]", row(u));
            }
            let _ = writeln!(s, "\nfacets (doubled normal . x >= offset)");
            for f in &facets {
                let _ = writeln!(s, "[{}] >= {}", row(&f.normal), f.offset);
            }
            emit(opts, &s)
        }
    }
}

fn faces(opts: &Options) -> Run {
    let t = tree(opts)?;
    let p = polytope_of(&t).map_err(anyhow::Error::from)?;
    let m = face_lattice(&p).map_err(anyhow::Error::from)?;
    match opts.format {
        Format::Json => emit_json(opts, &json!({ "size": m.size(), "entries": m.row_major() })),
        Format::Csv => {
            let s: String = m
                .entries
                .iter()
                .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(",") + "\n")
                .collect();
            emit(opts, &s)
        }
        Format::Human => {
            let width = m.row_major().iter().map(|x| x.to_string().len()).max().unwrap_or(1);
            let s: String = m
                .entries
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| format!("{x:>width$}"))
                        .collect::<Vec<_>>()
                        .join(" ")
                        + "\n"
                })
                .collect();
            emit(opts, &s)
        }
    }
}

fn dual(opts: &Options) -> Run {
    let t = tree(opts)?;
    let d = dual_vertices(&t);
    let polar = polarity_check(&t).map_err(anyhow::Error::from)?;
    let socket = match &opts.socket {
        Some(s) => Socket::parse(s).map_err(|e| Failure::Usage(e.to_string()))?,
        None => Socket::parse(&"0".repeat(t.leaf_count())).unwrap(),
    };
    let u = network_of_socket(&t, &socket)
        .map_err(|e| Failure::Usage(e.to_string()))?
        .to_vertex();
    let division = vertex_link_division(&t, &u, None).map_err(anyhow::Error::from)?;
    let report = check_division(&t, &division);
    match opts.format {
        Format::Json => emit_json(
            opts,
            &json!({
                "doubled": true,
                "vertices": d,
                "polarity": polar.holds(),
                "division": {
                    "socket": socket.to_string(),
                    "vertex": u,
                    "simplices": division.simplices,
                    "valid": report.holds(),
                },
            }),
        ),
        Format::Csv => {
            let s: String = d.iter().map(|v| csv_row(v) + "\n").collect();
            emit(opts, &s)
        }
        Format::Human => {
            let mut s = String::from("dual vertices (coordinates doubled)\n");
            for v in &d {
                let _ = writeln!(s, "[{}]", row(v));
            }
            let _ = writeln!(s, "\npolarity with 4Δ - 2σ: {}", if polar.holds() { "holds" } else { "FAILS" });
            let _ = writeln!(
                s,
                "\ndivision of the link of vertex {socket}: {} simplices, {}",
                division.simplices.len(),
                if report.holds() { "unimodular, covering" } else { "INVALID" }
            );
            for simplex in &division.simplices {
                let vs: Vec<String> = simplex.iter().map(|v| format!("[{}]", row(v))).collect();
                let _ = writeln!(s, "  {}", vs.join(" "));
            }
            emit(opts, &s)
        }
    }
}

fn ideal(opts: &Options) -> Run {
    let t = tree(opts)?;
    let seed = opts.seed.unwrap_or(DEFAULT_SEED);
    let p = polytope_of(&t).map_err(anyhow::Error::from)?;
    let relations = socket_relations(&t).map_err(anyhow::Error::from)?;
    let vanishes = vanishing_check(&quadratic_relations(&p), 20, seed);
    match opts.format {
        Format::Json => emit_json(
            opts,
            &json!({
                "scope": "quadratic part of the ideal",
                "generated_in_degree_two": "open",
                "relations": relations,
                "vanishing_check": { "trials": 20, "seed": seed, "passed": vanishes },
            }),
        ),
        Format::Csv => {
            let mut s = String::from("left1,left2,right1,right2\n");
            for r in &relations {
                let _ = writeln!(s, "{},{}", r.left.join(","), r.right.join(","));
            }
            emit(opts, &s)
        }
        Format::Human => {
            let mut s = format!("# quadratic part of the ideal: {} relations\n", relations.len());
            for r in &relations {
                let _ = writeln!(s, "{r}");
            }
            let _ = writeln!(
                s,
                "# vanishing on 20 random parameter points (seed {seed}): {}",
                if vanishes { "yes" } else { "NO" }
            );
            emit(opts, &s)
        }
    }
}

fn ehrhart(opts: &Options) -> Run {
    let t = tree(opts)?;
    let h = hilbert_ehrhart_polynomial(&t).map_err(anyhow::Error::from)?;
    let vol = normalized_volume(&t).map_err(anyhow::Error::from)?;
    let leaf = opts.leaf.unwrap_or(1);
    let relative = match opts.n {
        Some(n) => {
            let pt = PointedTree::new(t.clone(), leaf).map_err(|e| Failure::Usage(e.to_string()))?;
            Some((n, relative_ehrhart(&pt, n as usize).map_err(anyhow::Error::from)?))
        }
        None => None,
    };
    match opts.format {
        Format::Json => {
            let mut v = json!({
                "polynomial": h.to_string(),
                "coefficients": h,
                "normalized_volume": vol.to_string(),
            });
            if let Some((n, seq)) = &relative {
                v["relative"] = json!({ "n": n, "leaf": leaf, "values": seq, "total": seq.sum().to_string() });
            }
            emit_json(opts, &v)
        }
        Format::Csv => {
            let mut s = String::from("k,count\n");
            match &relative {
                Some((_, seq)) => {
                    for (k, c) in seq.values().iter().enumerate() {
                        let _ = writeln!(s, "{k},{c}");
                    }
                }
                None => {
                    s = String::from("degree,coefficient\n");
                    for (k, c) in h.coefficients().iter().enumerate() {
                        let _ = writeln!(s, "{k},{c}");
                    }
                }
            }
            emit(opts, &s)
        }
        Format::Human => {
            let mut s = format!("h(n) = {h}\nnormalized volume {vol}\n");
            if let Some((n, seq)) = &relative {
                let _ = writeln!(s, "relative sequence at leaf {leaf}, n = {n}: {seq} (total {})", seq.sum());
            }
            emit(opts, &s)
        }
    }
}

fn volume_dist(opts: &Options) -> Run {
    let r = opts.r.unwrap_or(100);
    if r == 0 {
        return Err(Failure::Usage("--r must be at least 1".into()));
    }
    let high = volume_distribution(r);
    let samples = 201;
    match &opts.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let mut files = Vec::new();
            let mut rs = vec![2, r];
            rs.dedup();
            for k in rs {
                let name = format!("delta_{k}.csv");
                let d = if k == r { high.clone() } else { volume_distribution(k) };
                fs::write(dir.join(&name), d.csv(samples)).map_err(anyhow::Error::from)?;
                files.push((k, name));
            }
            let script = gnuplot_script(&files, "volume_dist.png");
            fs::write(dir.join("volume_dist.gp"), &script).map_err(anyhow::Error::from)?;
            let names: Vec<&str> = files.iter().map(|f| f.1.as_str()).collect();
            println!("wrote {} and volume_dist.gp to {}", names.join(", "), dir.display());
            Ok(ExitCode::SUCCESS)
        }
        None => match opts.format {
            Format::Json => emit_json(
                opts,
                &json!({
                    "r": r,
                    "piece_on_0_to_half": high.piece,
                    "normalization": high.normalization.to_string(),
                }),
            ),
            Format::Csv => emit(opts, &high.csv(samples)),
            Format::Human => emit(
                opts,
                &format!("delta^{r}(t) on [0, 1/2], mirrored on [1/2, 1]:\n{}\n", high.piece.display_in("t")),
            ),
        },
    }
}

fn mutate(opts: &Options) -> Run {
    let t = tree(opts)?;
    let path = mutation_path_to_caterpillar(&t).map_err(anyhow::Error::from)?;
    let mut by_edge = Vec::new();
    for e in t.inner_edges() {
        let [a, b] = elementary_mutations(&t, e).map_err(anyhow::Error::from)?;
        by_edge.push((e, a.canonical_form(), b.canonical_form()));
    }
    let mut cur = t.clone();
    let mut steps = Vec::new();
    for step in &path {
        cur = elementary_mutations(&cur, step.edge).map_err(anyhow::Error::from)?[step.choice].clone();
        steps.push((*step, cur.canonical_form()));
    }
    match opts.format {
        Format::Json => emit_json(
            opts,
            &json!({
                "tree": t.canonical_form(),
                "mutations": by_edge.iter().map(|(e, a, b)| json!({"edge": e, "results": [a, b]})).collect::<Vec<_>>(),
                "path_to_caterpillar": steps.iter().map(|(s, r)| json!({"edge": s.edge, "choice": s.choice, "result": r})).collect::<Vec<_>>(),
            }),
        ),
        Format::Csv => {
            let mut s = String::from("edge,mutation_0,mutation_1\n");
            for (e, a, b) in &by_edge {
                let _ = writeln!(s, "{e},\"{a}\",\"{b}\"");
            }
            emit(opts, &s)
        }
        Format::Human => {
            let mut s = format!("tree {}\n\nelementary mutations\n", t.canonical_form());
            for (e, a, b) in &by_edge {
                let _ = writeln!(s, "  edge {e}: {a}  |  {b}");
            }
            let noun = if steps.len() == 1 { "step" } else { "steps" };
            let _ = writeln!(s, "\npath to a caterpillar ({} {noun})", steps.len());
            for (st, r) in &steps {
                let _ = writeln!(s, "  edge {} choice {}: {r}", st.edge, st.choice);
            }
            emit(opts, &s)
        }
    }
}

fn verify(opts: &Options) -> Run {
    let seed = opts.seed.unwrap_or(DEFAULT_SEED);
    let results: Vec<CheckResult> = match opts.check {
        Some(id) => vec![run_check(id, seed).ok_or_else(|| {
            Failure::Usage(format!("no check numbered {id}; checks are 1..={}", CHECKS.len()))
        })?],
        None => run_all(seed),
    };
    let ok = results.iter().all(|r| r.passed);
    match opts.format {
        Format::Json => {
            emit_json(opts, &json!({ "seed": seed, "passed": ok, "checks": results }))?;
        }
        Format::Csv => {
            let mut s = String::from("id,status,title,detail\n");
            for r in &results {
                let status = if r.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(s, "{},{status},\"{}\",\"{}\"", r.id, r.title, r.detail.replace('"', "'"));
            }
            emit(opts, &s)?;
        }
        Format::Human => {
            let mut s = String::new();
            for r in &results {
                let status = if r.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(s, "{status} {:>2}  {:<46} {} ({:.2}s)", r.id, r.title, r.detail, r.seconds);
            }
            let passed = results.iter().filter(|r| r.passed).count();
            let _ = writeln!(s, "\n{passed}/{} checks passed", results.len());
            emit(opts, &s)?;
        }
    }
    if ok {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(Failure::Other(anyhow!("verification failed")))
    }
}
