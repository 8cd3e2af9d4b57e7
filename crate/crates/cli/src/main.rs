use std::path::PathBuf;
use std::process::ExitCode;

use bundlekit::beilinson::beilinson_terms;
use bundlekit::catalog::{verify_all, Catalog, ComplexExpr, NodeExpr, VerifyOptions};
use bundlekit::chernrr::{chern_of_node, gg_constraints, parity_ok, rr_chi, schwarzenberger_ok, ChernVector};
use bundlekit::exactfield::{Field, Form, PointP};
use bundlekit::freecomplex::ferrand_liaison;
use bundlekit::geomtests::{cayley_bacharach, edge_avoidance, is_globally_generated, splitting_type_on_line, GgHint, LineParam};
use bundlekit::pencil24::{classify, LinearMatrix2x4, PencilTag};
use bundlekit::sheafcoh::{coh_table, default_window, CohTable, SheafNode};
use bundlekit::spectra::{c3_from_spectrum, enumerate_spectra, h1_from_spectrum, h2_from_spectrum, SpectrumOptions};
use bundlekit::Error;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

#[derive(Parser)]
#[command(name = "bundlekit", version, about = "Exact checks for vector bundles on projective space")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Global {
    /// Prime of the coefficient field.
    #[arg(long, global = true, default_value_t = 32003)]
    prime: u64,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Twist window `LO:HI`.
    #[arg(long, global = true, value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<(i64, i64)>,
    #[arg(long, global = true)]
    json: bool,
    /// Random points for sampling checks.
    #[arg(long, global = true, default_value_t = 500)]
    trials: usize,
}

/// A sheaf given as a catalog expression: inline JSON or `@file`.
#[derive(Args)]
struct NodeArg {
    /// Dimension of the projective space.
    #[arg(long)]
    n: usize,
    /// Expression such as '{"ker": {"src": [1,1,1,1], "tgt": [2], "rows": [["x0","x1","x2","x3"]]}}'.
    node: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rank and Chern classes of a sheaf expression.
    Chern(NodeArg),
    /// χ(E(l)) from Chern data over the window.
    Rr {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rank: i64,
        /// `c1,c2,...`
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        c: Vec<i64>,
    },
    /// Admissible spectra of length C with their h^1 and h^2 values.
    Spectra {
        #[arg(long)]
        c: usize,
        #[arg(long)]
        spectrum2: bool,
        #[arg(long)]
        symmetric: bool,
        /// Keep sequences with negative `c3`.
        #[arg(long)]
        allow_negative_c3: bool,
        #[arg(long)]
        exclude_ge_1: bool,
    },
    /// Classify a stable 2x4 linear matrix on P^3, given as 'row0;row1' with comma-separated forms.
    ClassifyPencil { matrix: String },
    /// Cohomology table over the window.
    Coh(NodeArg),
    /// Global generation by sampling, with exact negative witnesses.
    Gg {
        #[command(flatten)]
        node: NodeArg,
        /// Extra line to test, as 'p;q'.
        #[arg(long)]
        line: Vec<String>,
    },
    /// Cayley–Bacharach for points 'a,b,c;...' in P^2 and degree D.
    Cb {
        #[arg(long)]
        d: i64,
        points: String,
    },
    /// Splitting type on the line 'p;q'.
    Splits {
        #[command(flatten)]
        node: NodeArg,
        #[arg(long)]
        line: String,
    },
    /// Whether the line 'p;q' avoids the edges of the tetrahedron on four points.
    Edges {
        #[arg(long)]
        line: String,
        points: String,
    },
    /// Beilinson monad terms from a cohomology table file.
    Beilinson {
        table: PathBuf,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        twist: i64,
    },
    /// Ferrand liaison of a resolution `L → F → O` (JSON complex or @file) by forms A and B.
    Liaison {
        #[arg(long)]
        n: usize,
        resolution: String,
        a: String,
        b: String,
    },
    /// Catalog operations.
    Catalog {
        #[command(subcommand)]
        op: CatalogOp,
    },
}

#[derive(Subcommand)]
enum CatalogOp {
    /// Recompute every entry of a catalog file or directory.
    Verify {
        #[arg(default_value = "catalog")]
        path: PathBuf,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

/// Ran to completion; `false` means a verification failed.
type Outcome = Result<bool, Error>;

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or("expected LO:HI")?;
    let lo = a.trim().parse::<i64>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<i64>().map_err(|e| e.to_string())?;
    if lo > hi {
        return Err("LO exceeds HI".into());
    }
    Ok((lo, hi))
}

fn read_arg(s: &str) -> Result<String, Error> {
    match s.strip_prefix('@') {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("{p}: {e}"))),
        None => Ok(s.to_string()),
    }
}

fn node_of(f: Field, a: &NodeArg) -> Result<SheafNode, Error> {
    let expr: NodeExpr = serde_json::from_str(&read_arg(&a.node)?).map_err(|e| Error::Parse(format!("node: {e}")))?;
    expr.build(f, a.n + 1)
}

fn ints(s: &str) -> Result<Vec<i64>, Error> {
    s.split(',').map(|x| x.trim().parse::<i64>().map_err(|e| Error::Parse(format!("'{x}': {e}")))).collect()
}

fn points(s: &str) -> Result<Vec<Vec<i64>>, Error> {
    s.split(';').filter(|x| !x.trim().is_empty()).map(ints).collect()
}

fn line(f: Field, s: &str) -> Result<LineParam, Error> {
    match points(s)?.as_slice() {
        [p, q] => LineParam::from_ints(f, p, q),
        _ => Err(Error::Parse(format!("line '{s}' needs two points 'p;q'"))),
    }
}

fn emit(g: &Global, value: serde_json::Value, text: String) {
    if g.json {
        println!("{}", serde_json::to_string_pretty(&value).expect("json output"));
    } else {
        print!("{text}");
        if !text.ends_with('\n') {
            println!();
        }
    }
}

fn window(g: &Global, n: usize) -> (i64, i64) {
    g.window.unwrap_or_else(|| default_window(n))
}

fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    let f = Field::new(g.prime)?;
    match &cli.cmd {
        Cmd::Chern(a) => {
            let node = node_of(f, a)?;
            let c = chern_of_node(f, &node)?;
            emit(g, json!(c), format!("rank {} c {:?}", c.rank, c.c));
            Ok(true)
        }
        Cmd::Rr { n, rank, c } => rr(g, *n, *rank, c),
        Cmd::Spectra { c, spectrum2, symmetric, allow_negative_c3, exclude_ge_1 } => {
            let opts = SpectrumOptions {
                spectrum2: *spectrum2,
                symmetric: *symmetric,
                c3_nonneg: !*allow_negative_c3,
                exclude_ge_1: *exclude_ge_1,
            };
            let k = *c as i64;
            let list = enumerate_spectra(*c, -k, k, opts)?;
            let mut rows = Vec::new();
            let mut text = String::new();
            for s in &list {
                let h1: Vec<i64> = (-3..=-1).map(|l| h1_from_spectrum(s, l)).collect::<Result<_, _>>()?;
                let h2: Vec<i64> = (-3..=-1).map(|l| h2_from_spectrum(s, l)).collect::<Result<_, _>>()?;
                let c3 = c3_from_spectrum(s);
                text.push_str(&format!("{:?}  c3 {c3}  h1(-3..-1) {h1:?}  h2(-3..-1) {h2:?}\n", s.values()));
                rows.push(json!({"spectrum": s.values(), "c3": c3, "h1": h1, "h2": h2}));
            }
            text.push_str(&format!("{} spectra\n", list.len()));
            emit(g, json!(rows), text);
            Ok(true)
        }
        Cmd::ClassifyPencil { matrix } => {
            let a = LinearMatrix2x4::parse(f, &read_arg(matrix)?.replace(';', "\n"))?;
            let c = classify(f, &a)?;
            let case = match c.tag {
                PencilTag::Case(k) => k,
                _ => 0,
            };
            let canonical = c.canonical.as_ref().map(|m| {
                m.matrix().entries().iter().map(|r| r.iter().map(|e| e.to_string(f)).collect::<Vec<_>>().join(", ")).collect::<Vec<_>>()
            });
            let eqs: Vec<String> = c.degeneracy.span_equations.iter().map(|e| e.to_string(f)).collect();
            let mut text = format!("case {case}\n");
            if let Some(p) = &c.partition {
                text.push_str(&format!("root multiplicities {p:?}\n"));
            }
            if let (Some(m), Some(e)) = (c.m, c.e) {
                text.push_str(&format!("cokernel degree {m}, syzygy degree {e}\n"));
            }
            text.push_str(&format!("degeneracy: {}\n", c.degeneracy.text));
            match (&canonical, &c.canonical_note) {
                (Some(rows), _) => text.push_str(&format!("canonical form: {}\n", rows.join("; "))),
                (None, Some(note)) => text.push_str(&format!("no canonical form: {note}\n")),
                _ => {}
            }
            let value = json!({
                "case": case, "partition": c.partition, "m": c.m, "e": c.e,
                "degeneracy": c.degeneracy.text, "span_equations": eqs,
                "canonical": canonical, "canonical_note": c.canonical_note,
            });
            emit(g, value, text);
            Ok(true)
        }
        Cmd::Coh(a) => {
            let node = node_of(f, a)?;
            let t = coh_table(f, &node, window(g, a.n))?;
            emit(g, json!(t), t.to_text());
            Ok(true)
        }
        Cmd::Gg { node, line: lines } => {
            let e = node_of(f, node)?;
            let hints = lines.iter().map(|s| line(f, s).map(GgHint::Line)).collect::<Result<Vec<_>, _>>()?;
            let v = is_globally_generated(f, &e, g.trials, g.seed, &hints)?;
            let violations = gg_constraints(&chern_of_node(f, &e)?);
            let text = match v.witness() {
                None => format!("generated up to sampling ({} points, seed {})", v.trials, v.seed),
                Some(w) => format!("not generated: {w}"),
            };
            emit(g, json!({"verdict": v, "chern_violations": violations}), text);
            Ok(true)
        }
        Cmd::Cb { d, points: pts } => {
            let pts = points(pts)?.iter().map(|p| PointP::from_ints(f, p)).collect::<Result<Vec<_>, _>>()?;
            let ok = cayley_bacharach(f, &pts, *d)?;
            emit(g, json!({"cayley_bacharach": ok}), format!("{ok}"));
            Ok(true)
        }
        Cmd::Splits { node, line: l } => {
            let e = node_of(f, node)?;
            let s = splitting_type_on_line(f, &e, &line(f, l)?)?;
            emit(g, json!(s), format!("{s:?}"));
            Ok(true)
        }
        Cmd::Edges { line: l, points: pts } => {
            let pts = points(pts)?.iter().map(|p| PointP::from_ints(f, p)).collect::<Result<Vec<_>, _>>()?;
            let z: [PointP; 4] = pts.try_into().map_err(|_| Error::Parse("edges needs four points".into()))?;
            let ok = edge_avoidance(f, &line(f, l)?, &z)?;
            emit(g, json!({"avoids_edges": ok}), format!("{ok}"));
            Ok(true)
        }
        Cmd::Beilinson { table, twist } => {
            let text = std::fs::read_to_string(table).map_err(|e| Error::Parse(format!("{}: {e}", table.display())))?;
            let shape = beilinson_terms(&CohTable::from_text(&text)?, *twist)?;
            emit(g, json!({"shape": shape.to_string(), "chern": shape.chern()}), shape.to_string());
            Ok(true)
        }
        Cmd::Liaison { n, resolution, a, b } => {
            let nvars = n + 1;
            let expr: ComplexExpr =
                serde_json::from_str(&read_arg(resolution)?).map_err(|e| Error::Parse(format!("resolution: {e}")))?;
            let res = expr.build(f, nvars)?;
            let fa = Form::parse(f, a, nvars, 0)?;
            let fb = Form::parse(f, b, nvars, 0)?;
            let out = ComplexExpr::from_complex(f, &ferrand_liaison(f, &res, &fa, &fb)?);
            let text = serde_json::to_string_pretty(&out).expect("json output");
            emit(g, json!(out), text);
            Ok(true)
        }
        Cmd::Catalog { op: CatalogOp::Verify { path, threads } } => {
            let cat = Catalog::load(path)?;
            let opts = VerifyOptions { trials: g.trials, seed: g.seed, window: g.window, threads: *threads };
            let rep = verify_all(f, &cat, opts);
            emit(g, json!(rep), rep.to_text());
            Ok(rep.passed())
        }
    }
}

fn rr(g: &Global, n: usize, rank: i64, c: &[i64]) -> Outcome {
    if c.len() > n {
        return Err(Error::Parse(format!("{} Chern classes on P^{n}", c.len())));
    }
    let mut cs = c.to_vec();
    cs.resize(n, 0);
    let cv = ChernVector::new(n, rank, cs);
    let mut ok = true;
    let mut text = String::new();
    let mut notes = Vec::new();
    if n == 3 && !parity_ok(&cv) {
        ok = false;
        notes.push("c1 c2 + c3 is odd".to_string());
    }
    if n == 4 {
        let (good, r) = schwarzenberger_ok(&cv);
        if !good {
            ok = false;
            notes.push(format!("Schwarzenberger residue {r} mod 12"));
        }
    }
    let (lo, hi) = window(g, n);
    let mut values = Vec::new();
    if ok {
        for l in lo..=hi {
            let chi = rr_chi(&cv, l)?;
            text.push_str(&format!("chi(E({l})) = {chi}\n"));
            values.push(json!({"l": l, "chi": chi.to_string()}));
        }
    }
    for note in &notes {
        text.push_str(&format!("not integral: {note}\n"));
    }
    emit(g, json!({"integral": ok, "notes": notes, "chi": values}), text);
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Error::Congruence(m)) => {
            eprintln!("not integral: {m}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
