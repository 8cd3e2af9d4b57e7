//! JSON catalog of bundles with their expected invariants, and the verifier
//! that recomputes everything from the constructions.

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chernrr::{chern_of_node, gg_constraints, parity_ok, rr_chi, schwarzenberger_ok, ChernVector};
use crate::error::{Error, Result};
use crate::exactfield::{kernel_basis, rank, Field, Form, GradedMatrix, Matrix, MonomialIndex};
use crate::freecomplex::{koszul, FreeComplex};
use crate::geomtests::{is_globally_generated, verify_witness, GgHint, LineParam};
use crate::pencil24::{classify, LinearMatrix2x4, PencilTag};
use crate::sheafcoh::{certify, coh_table, default_window, CertOptions, SheafNode};

/// Matrix of forms between sums of line bundles; `rows[i][j]` maps `O(src[j])`
/// to `O(tgt[i])`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixExpr {
    pub src: Vec<i64>,
    pub tgt: Vec<i64>,
    pub rows: Vec<Vec<String>>,
}

impl MatrixExpr {
    pub fn build(&self, f: Field, nvars: usize) -> Result<GradedMatrix> {
        let entries = self
            .rows
            .iter()
            .map(|r| r.iter().map(|s| Form::parse(f, s, nvars, 0)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        GradedMatrix::new(nvars, self.src.clone(), self.tgt.clone(), entries)
    }

    pub fn from_matrix(f: Field, m: &GradedMatrix) -> Self {
        MatrixExpr {
            src: m.src().to_vec(),
            tgt: m.tgt().to_vec(),
            rows: m.entries().iter().map(|r| r.iter().map(|e| e.to_string(f)).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexExpr {
    pub lo: i64,
    pub terms: Vec<Vec<i64>>,
    pub diffs: Vec<MatrixExpr>,
}

impl ComplexExpr {
    pub fn build(&self, f: Field, nvars: usize) -> Result<FreeComplex> {
        let diffs = self.diffs.iter().map(|d| d.build(f, nvars)).collect::<Result<Vec<_>>>()?;
        FreeComplex::new(nvars, self.lo, self.terms.clone(), diffs)
    }

    pub fn from_complex(f: Field, c: &FreeComplex) -> Self {
        ComplexExpr {
            lo: c.lo(),
            terms: (c.lo()..=c.hi()).map(|p| c.term(p).to_vec()).collect(),
            diffs: (c.lo()..c.hi()).map(|p| MatrixExpr::from_matrix(f, &c.diff(p))).collect(),
        }
    }
}

/// Serialized sheaf expression.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeExpr {
    /// `⊕ O(a)`.
    Sum(Vec<i64>),
    /// Kernel of an epimorphism.
    Ker(MatrixExpr),
    KerInto { map: MatrixExpr, target: Box<NodeExpr> },
    /// Cokernel of a monomorphism into `target`.
    Quot { map: MatrixExpr, target: Box<NodeExpr> },
    Twist { node: Box<NodeExpr>, by: i64 },
    Direct(Vec<NodeExpr>),
    Homology { complex: ComplexExpr, pos: i64 },
    /// `Ω^i(twist)`, presented through the Koszul complex of the variables.
    Omega { i: usize, twist: i64 },
    Dual(Box<NodeExpr>),
    P(Box<NodeExpr>),
}

impl NodeExpr {
    pub fn build(&self, f: Field, nvars: usize) -> Result<SheafNode> {
        Ok(match self {
            NodeExpr::Sum(t) => SheafNode::line_sum(nvars, t.clone()),
            NodeExpr::Ker(m) => SheafNode::KerEpi(m.build(f, nvars)?),
            NodeExpr::KerInto { map, target } => {
                SheafNode::KerInto { map: map.build(f, nvars)?, target: Box::new(target.build(f, nvars)?) }
            }
            NodeExpr::Quot { map, target } => {
                SheafNode::SubQuot { map: map.build(f, nvars)?, target: Box::new(target.build(f, nvars)?) }
            }
            NodeExpr::Twist { node, by } => node.build(f, nvars)?.twist(*by),
            NodeExpr::Direct(v) => {
                if v.is_empty() {
                    return Err(Error::Shape("empty direct sum".into()));
                }
                SheafNode::Sum(v.iter().map(|x| x.build(f, nvars)).collect::<Result<_>>()?)
            }
            NodeExpr::Homology { complex, pos } => SheafNode::Homology { complex: complex.build(f, nvars)?, pos: *pos },
            NodeExpr::Omega { i, twist } => omega_node(f, nvars, *i)?.twist(twist - *i as i64),
            NodeExpr::Dual(x) => x.build(f, nvars)?.dual(),
            NodeExpr::P(x) => x.build(f, nvars)?.p(),
        })
    }
}

/// `Ω^i(i)` as the cokernel at position `−(i+1)` of the truncated Koszul
/// complex of `x0..xn`.
pub fn omega_node(f: Field, nvars: usize, i: usize) -> Result<SheafNode> {
    if i >= nvars {
        return Err(Error::Domain(format!("Ω^{i} on P^{}", nvars - 1)));
    }
    let vars: Vec<Form> = (0..nvars).map(|k| Form::var(nvars, k)).collect();
    let k = koszul(f, &vars)?.twist(i as i64);
    let lo = -(nvars as i64);
    let hi = -(i as i64) - 1;
    let terms = (lo..=hi).map(|p| k.term(p).to_vec()).collect();
    let diffs = (lo..hi).map(|p| k.diff(p)).collect();
    Ok(SheafNode::Homology { complex: FreeComplex::new(nvars, lo, terms, diffs)?, pos: hi })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GgExpect {
    Generated,
    NotGenerated,
    /// Generated for the stored instance; the family statement is generic.
    GeneratedForThisInstance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellExpect {
    pub i: usize,
    pub l: i64,
    pub h: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilExpect {
    pub rows: Vec<Vec<String>>,
    pub case: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub rank: i64,
    /// `c_1..c_n`.
    pub chern: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cells: Vec<CellExpect>,
    /// `m` with `h^i(E(m−i)) = 0` for `i > 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regularity: Option<i64>,
    pub gg: GgExpect,
    /// Two points spanning a line on which the bundle has a negative summand.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_line: Option<[Vec<i64>; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pencil: Option<PencilExpect>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[i64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub n: usize,
    pub description: String,
    pub construction: NodeExpr,
    pub expected: Expected,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

/// Entries of a catalog, each parsed independently.
#[derive(Clone, Debug)]
pub struct Catalog {
    pub entries: Vec<std::result::Result<CatalogEntry, (String, String)>>,
}

impl Catalog {
    /// Parse `{"entries": [...]}`; a malformed entry is kept as `(id, error)`.
    pub fn parse(text: &str) -> Result<Catalog> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("catalog: {e}")))?;
        let list = v
            .get("entries")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Parse("catalog needs an \"entries\" array".into()))?;
        let entries = list
            .iter()
            .enumerate()
            .map(|(k, item)| {
                CatalogEntry::deserialize(item).map_err(|e| {
                    let id = item.get("id").and_then(|x| x.as_str()).map_or_else(|| format!("#{k}"), str::to_string);
                    (id, e.to_string())
                })
            })
            .collect();
        Ok(Catalog { entries })
    }

    /// A `.json` file, or every `.json` file of a directory in name order.
    pub fn load(path: &Path) -> Result<Catalog> {
        let read = |p: &Path| std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())));
        if path.is_dir() {
            let mut files: Vec<_> = std::fs::read_dir(path)
                .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
                .filter_map(|d| d.ok().map(|d| d.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            files.sort();
            let mut entries = Vec::new();
            for p in files {
                entries.extend(Catalog::parse(&read(&p)?)?.entries);
            }
            Ok(Catalog { entries })
        } else {
            Catalog::parse(&read(path)?)
        }
    }
}

/// Serialize entries in the catalog file format.
pub fn to_json(entries: &[CatalogEntry]) -> String {
    #[derive(Serialize)]
    struct File<'a> {
        entries: &'a [CatalogEntry],
    }
    let v = serde_json::to_value(File { entries }).expect("catalog entries serialize");
    let mut out = String::new();
    write_value(&v, 0, &mut out);
    out
}

/// Pretty JSON that keeps arrays of scalars on one line.
fn write_value(v: &serde_json::Value, depth: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let parts: Vec<String> = items.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("[{}]", parts.join(", ")));
        }
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, x) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(x, depth + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, x)) in map.iter().enumerate() {
                out.push_str(&format!("{}{}: ", pad(depth + 1), Value::String(key.clone())));
                write_value(x, depth + 1, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        _ => out.push_str(&v.to_string()),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
    /// Overrides the default cohomology window.
    pub window: Option<(i64, i64)>,
    pub threads: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { trials: 500, seed: 1, window: None, threads: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub expected: String,
    pub computed: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub id: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub error: Option<String>,
    pub seed: u64,
    pub millis: u128,
}

impl EntryReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: usize,
    pub entries: Vec<EntryReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    /// `(entry id, check name or "error")` for every failure.
    pub fn failures(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for e in &self.entries {
            if e.error.is_some() {
                out.push((e.id.clone(), "error".to_string()));
            }
            out.extend(e.checks.iter().filter(|c| !c.pass).map(|c| (e.id.clone(), c.name.clone())));
        }
        out
    }

    pub fn entry(&self, id: &str) -> Option<&EntryReport> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            s.push_str(&format!("{} {} ({} ms)\n", if e.pass { "PASS" } else { "FAIL" }, e.id, e.millis));
            if let Some(err) = &e.error {
                s.push_str(&format!("  error: {err}\n"));
            }
            for c in e.checks.iter().filter(|c| !c.pass) {
                s.push_str(&format!("  {}: expected {}, computed {}\n", c.name, c.expected, c.computed));
            }
        }
        let bad = self.entries.iter().filter(|e| !e.pass).count();
        s.push_str(&format!(
            "{} entries, {} failed (seed {}, {} trials)\n",
            self.entries.len(),
            bad,
            self.seed,
            self.trials
        ));
        s
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: &str, pass: bool, expected: impl ToString, computed: impl ToString) {
        self.0.push(Check { name: name.into(), pass, expected: expected.to_string(), computed: computed.to_string() });
    }
}

fn chern_text(c: &ChernVector) -> String {
    format!("rank {} c {:?}", c.rank, c.c)
}

/// Recompute every declared expectation of one entry.
pub fn verify_entry(f: Field, e: &CatalogEntry, opts: VerifyOptions) -> EntryReport {
    let start = Instant::now();
    let mut checks = Checks(Vec::new());
    let error = run_checks(f, e, opts, &mut checks).err().map(|x| x.to_string());
    let pass = error.is_none() && checks.0.iter().all(|c| c.pass);
    EntryReport { id: e.id.clone(), pass, checks: checks.0, error, seed: opts.seed, millis: start.elapsed().as_millis() }
}

fn run_checks(f: Field, e: &CatalogEntry, opts: VerifyOptions, out: &mut Checks) -> Result<()> {
    let x = &e.expected;
    let n = e.n;
    let node = e.construction.build(f, n + 1)?;
    match certify(f, &node, CertOptions { seed: opts.seed, ..Default::default() }) {
        Ok(cert) => out.push("certified", true, "well formed", format!("{cert:?}")),
        Err(err) => {
            out.push("certified", false, "well formed", err);
            return Ok(());
        }
    }

    let c = chern_of_node(f, &node)?;
    let want = ChernVector::new(n, x.rank, x.chern.clone());
    out.push("chern", c == want, chern_text(&want), chern_text(&c));
    let shifted = chern_of_node(f, &node.clone().twist(1))?;
    out.push("twist-consistency", shifted == c.twist(1), chern_text(&c.twist(1)), chern_text(&shifted));
    match n {
        3 => out.push("parity", parity_ok(&c), "c1 c2 ≡ c3 mod 2", format!("{:?}", c.c)),
        4 => {
            let (ok, r) = schwarzenberger_ok(&c);
            out.push("schwarzenberger", ok, 0, r);
        }
        _ => {}
    }

    let mut window = opts.window.or(x.window.map(|w| (w[0], w[1]))).unwrap_or_else(|| default_window(n));
    for cell in &x.cells {
        window = (window.0.min(cell.l), window.1.max(cell.l));
    }
    if let Some(m) = x.regularity {
        window = (window.0.min(m - n as i64), window.1.max(m - 1));
    }
    let table = coh_table(f, &node, window)?;
    for cell in &x.cells {
        let got = table.cell(cell.i, cell.l);
        let text = got.map_or("outside window".to_string(), |g| if g.is_exact() { g.lo.to_string() } else { format!("[{},{}]", g.lo, g.hi) });
        out.push(&format!("h{}({})", cell.i, cell.l), table.h(cell.i, cell.l) == Some(cell.h), cell.h, text);
    }
    let mut bad = Vec::new();
    let mut columns = 0;
    for l in window.0..=window.1 {
        if let Some(chi) = table.chi(l) {
            columns += 1;
            let rr = rr_chi(&c, l)?;
            if chi != rr {
                bad.push(format!("l={l}: {chi} vs {rr}"));
            }
        }
    }
    out.push("riemann-roch", bad.is_empty() && columns > 0, format!("{columns} exact columns agree"), if bad.is_empty() { format!("{columns} agree") } else { bad.join(", ") });
    if let Some(m) = x.regularity {
        let nonzero: Vec<String> =
            (1..=n).filter(|&i| table.h(i, m - i as i64) != Some(0)).map(|i| format!("h{i}({})", m - i as i64)).collect();
        out.push("regularity", nonzero.is_empty(), format!("{m}-regular"), if nonzero.is_empty() { "ok".into() } else { nonzero.join(" ") });
    }

    let mut hints = Vec::new();
    if let Some([p, q]) = &x.witness_line {
        hints.push(GgHint::Line(LineParam::from_ints(f, p, q)?));
    }
    let verdict = is_globally_generated(f, &node, opts.trials, opts.seed, &hints)?;
    match x.gg {
        GgExpect::Generated | GgExpect::GeneratedForThisInstance => {
            out.push("gg", verdict.is_generated(), "generated", verdict.witness().unwrap_or_else(|| "generated".into()));
            let v = gg_constraints(&c);
            out.push("gg-constraints", v.is_empty(), "none", format!("{v:?}"));
            if n == 2 {
                let drops = drop_by_two_failures(&table, window);
                out.push("h1-drop", drops.is_empty(), "h1(l) ≤ h1(l−1) − 2", if drops.is_empty() { "ok".into() } else { drops.join(", ") });
            }
        }
        GgExpect::NotGenerated => {
            let ok = !verdict.is_generated() && verify_witness(f, &node, &verdict)?;
            out.push("gg", ok, "not generated with a witness", verdict.witness().unwrap_or_else(|| "generated".into()));
        }
    }
    if let NodeExpr::P(inner) = &e.construction {
        let inner = inner.build(f, n + 1)?;
        let v = is_globally_generated(f, &inner, opts.trials, opts.seed, &[])?;
        out.push("p-input-generated", v.is_generated(), "generated", v.witness().unwrap_or_else(|| "generated".into()));
    }

    if let Some(p) = &x.pencil {
        let m = MatrixExpr { src: vec![0; 4], tgt: vec![1; 2], rows: p.rows.clone() }.build(f, 4)?;
        let class = classify(f, &LinearMatrix2x4::new(m)?);
        let got = match &class {
            Ok(c) => format!("{:?}", c.tag),
            Err(err) => err.to_string(),
        };
        let ok = matches!(&class, Ok(c) if c.tag == PencilTag::Case(p.case));
        out.push("pencil", ok, format!("Case({})", p.case), got);
    }
    Ok(())
}

/// Twists `l ≥ −1` where `h^1(E(l)) ≠ 0` but `h^1(E(l)) > h^1(E(l−1)) − 2`.
pub fn drop_by_two_failures(table: &crate::sheafcoh::CohTable, window: (i64, i64)) -> Vec<String> {
    let mut out = Vec::new();
    for l in (-1).max(window.0 + 1)..=window.1 {
        match (table.h(1, l), table.h(1, l - 1)) {
            (Some(0), _) => {}
            (Some(v), Some(u)) if v <= u - 2 => {}
            (v, u) => out.push(format!("l={l}: {v:?} after {u:?}")),
        }
    }
    out
}

/// Verify all entries; reports come back in entry-id order.
pub fn verify_all(f: Field, catalog: &Catalog, opts: VerifyOptions) -> VerifyReport {
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::new());
    let threads = opts.threads.max(1).min(catalog.entries.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::SeqCst);
                let Some(item) = catalog.entries.get(k) else { break };
                let rep = match item {
                    Ok(e) => verify_entry(f, e, opts),
                    Err((id, err)) => EntryReport {
                        id: id.clone(),
                        pass: false,
                        checks: Vec::new(),
                        error: Some(format!("parse: {err}")),
                        seed: opts.seed,
                        millis: 0,
                    },
                };
                results.lock().expect("report lock").push(rep);
            });
        }
    });
    let mut entries = results.into_inner().expect("report lock");
    entries.sort_by(|a, b| a.id.cmp(&b.id));
    VerifyReport { seed: opts.seed, trials: opts.trials, entries }
}

/// Complex `O(−2) → O ⊕ O(−1)^4 → O(1)^4 ⊕ O^6 → O(2)` on `P^4` in positions
/// `−2..1`. The first two maps are the Koszul complex of `(x0,..,x3,x4^2)`
/// twisted by 4; the last is a seeded map vanishing on the image of the
/// previous one whose linear part has rank 4. Homology sits at position 0.
pub fn p4_koszul_kernel_complex(f: Field, seed: u64) -> Result<FreeComplex> {
    let nvars = 5;
    let mut forms: Vec<Form> = (0..4).map(|i| Form::var(nvars, i)).collect();
    forms.push(Form::var(nvars, 4).mul(f, &Form::var(nvars, 4)));
    let k = koszul(f, &forms)?.twist(4);
    let d5 = k.diff(-5);
    let d4 = k.diff(-4);
    let c3 = k.term(-3).to_vec();
    let mut idx = MonomialIndex::new(nvars);
    // unknowns: coefficients of ψ_j in degree 2 − c3[j]
    let mut unknowns = Vec::new();
    for (j, &a) in c3.iter().enumerate() {
        for e in idx.basis(2 - a).to_vec() {
            unknowns.push((j, e));
        }
    }
    let mut cols = Vec::new();
    for (j, e) in &unknowns {
        let mono = Form::monomial(f, e.clone(), 1);
        let mut col = Vec::new();
        for c in 0..d4.ncols() {
            col.extend(mono.mul(f, d4.entry(*j, c)).coefficients(&mut idx));
        }
        cols.push(col);
    }
    let eqs = Matrix::from_cols(&cols, cols[0].len());
    let kernel = kernel_basis(f, &eqs);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let mut v = vec![0; unknowns.len()];
        for b in &kernel {
            let c = f.elem(rng.gen_range(-1i64..=1));
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi = f.add(*vi, f.mul(c, *bi));
            }
        }
        let mut row: Vec<Form> = c3.iter().map(|&a| Form::zero(nvars, (2 - a) as u32)).collect();
        for ((j, e), &c) in unknowns.iter().zip(&v) {
            if c != 0 {
                row[*j] = row[*j].add(f, &Form::monomial(f, e.clone(), f.signed(c)));
            }
        }
        let linear: Vec<Vec<u64>> =
            c3.iter().zip(&row).filter(|(&a, _)| a == 1).map(|(_, g)| g.coefficients(&mut idx)).collect();
        if rank(f, &Matrix::from_rows(&linear, nvars)) < 4 {
            continue;
        }
        let psi = GradedMatrix::new(nvars, c3.clone(), vec![2], vec![row])?;
        let terms = vec![k.term(-5).to_vec(), k.term(-4).to_vec(), c3, vec![2]];
        return FreeComplex::new(nvars, -2, terms, vec![d5, d4, psi]);
    }
    Err(Error::Degenerate("no admissible map found".into()))
}
