//! Command implementations: resolve structure references, run the checks,
//! render reports, and emit re-verifiable structure files.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use kam_core::{
    catalog, check_adjunction, check_composition_law, check_monoid_laws, corner_algebra,
    dual_module, enumerate_homs, free_module, full_idempotent_scan, hom_module,
    homomorphism_module, lift_semiring_morita, matrix_morita_witness, module_iso_search,
    quotient_module, regular_bimodule, tensor_product, AlgebraHom, Idempotent, KamError,
    KleeneAlgebra, KleeneModule, Limits, MatrixElement, ModuleHom, MoritaWitness, Side,
    TensorPath, TensorProduct,
};

use crate::format::{
    self, parse_structure_file, Catalog, ParseError, TensorEntry, WitnessEntry,
};
use crate::report::{Report, Verdict};

pub struct Context {
    pub limits: Limits,
    pub seed: u64,
    pub emit: Option<PathBuf>,
}

pub enum CommandError {
    Core(KamError),
    Parse(PathBuf, ParseError),
    Usage(String),
}

impl std::fmt::Display for CommandError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CommandError::Core(e) => write!(f, "{e}"),
            CommandError::Parse(path, e) => write!(f, "{}: {e}", path.display()),
            CommandError::Usage(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<KamError> for CommandError {
    fn from(e: KamError) -> Self {
        CommandError::Core(e)
    }
}

type CmdResult = Result<Report, CommandError>;

fn load_catalog(path: &Path, limits: &Limits) -> Result<Catalog, CommandError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CommandError::Core(format::io_error(e, path)))?;
    parse_structure_file(&text, limits).map_err(|e| CommandError::Parse(path.to_path_buf(), e))
}

/// Splits a descriptor argument list at top-level commas.
fn split_args(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(c);
            }
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur = String::new();
            }
            _ => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

fn file_ref(spec: &str) -> Option<(PathBuf, Option<String>)> {
    if let Some((path, name)) = spec.rsplit_once(':') {
        if path.ends_with(".ks") {
            return Some((PathBuf::from(path), Some(name.to_string())));
        }
    }
    if spec.ends_with(".ks") {
        return Some((PathBuf::from(spec), None));
    }
    None
}

pub fn resolve_algebra(spec: &str, ctx: &Context) -> Result<Arc<KleeneAlgebra>, CommandError> {
    if let Some((path, name)) = file_ref(spec) {
        let cat = load_catalog(&path, &ctx.limits)?;
        return match name {
            Some(n) => cat.algebra(&n).cloned().ok_or_else(|| {
                CommandError::Usage(format!("{}: no algebra named {n}", path.display()))
            }),
            None => {
                if cat.algebras.len() == 1 {
                    Ok(cat.algebras[0].1.clone())
                } else {
                    Err(CommandError::Usage(format!(
                        "{}: contains {} algebras, name one as path:NAME",
                        path.display(),
                        cat.algebras.len()
                    )))
                }
            }
        };
    }
    Ok(catalog::builtin_algebra(spec, &ctx.limits)?)
}

pub fn resolve_module(spec: &str, ctx: &Context) -> Result<Arc<KleeneModule>, CommandError> {
    let descriptor = |prefix: &str| -> Option<String> {
        spec.strip_prefix(prefix)
            .and_then(|r| r.strip_suffix(')'))
            .map(|s| s.to_string())
    };
    if let Some(args) = descriptor("regular(") {
        let alg = resolve_algebra(&args, ctx)?;
        return Ok(regular_bimodule(&alg, &ctx.limits)?);
    }
    if let Some(args) = descriptor("free(") {
        let parts = split_args(&args);
        if parts.len() < 2 || parts.len() > 3 {
            return Err(CommandError::Usage(
                "free(<algebra>,<rank>[,left|right|bi]) expected".to_string(),
            ));
        }
        let alg = resolve_algebra(&parts[0], ctx)?;
        let rank: usize = parts[1]
            .parse()
            .map_err(|_| CommandError::Usage(format!("bad rank {}", parts[1])))?;
        let side = parts.get(2).map(|s| s.as_str()).unwrap_or("bi");
        let (l, r) = match side {
            "bi" => (true, true),
            "left" => (true, false),
            "right" => (false, true),
            other => return Err(CommandError::Usage(format!("bad side {other}"))),
        };
        return Ok(free_module(&alg, rank, l, r, &ctx.limits)?);
    }
    if let Some(args) = descriptor("kn(") {
        let parts = split_args(&args);
        if parts.len() != 2 {
            return Err(CommandError::Usage("kn(<algebra>,<n>) expected".to_string()));
        }
        let alg = resolve_algebra(&parts[0], ctx)?;
        let n: usize = parts[1]
            .parse()
            .map_err(|_| CommandError::Usage(format!("bad dimension {}", parts[1])))?;
        let mn = KleeneAlgebra::matrix(&alg, n, &ctx.limits)?;
        return Ok(kam_core::column_bimodule(&alg, &mn, n, &ctx.limits)?);
    }
    if let Some(args) = descriptor("kndual(") {
        let parts = split_args(&args);
        if parts.len() != 2 {
            return Err(CommandError::Usage(
                "kndual(<algebra>,<n>) expected".to_string(),
            ));
        }
        let alg = resolve_algebra(&parts[0], ctx)?;
        let n: usize = parts[1]
            .parse()
            .map_err(|_| CommandError::Usage(format!("bad dimension {}", parts[1])))?;
        let mn = KleeneAlgebra::matrix(&alg, n, &ctx.limits)?;
        return Ok(kam_core::row_bimodule(&alg, &mn, n, &ctx.limits)?);
    }
    if let Some(args) = descriptor("dual(") {
        let parts = split_args(&args);
        if parts.is_empty() || parts.len() > 2 {
            return Err(CommandError::Usage(
                "dual(<module>[,left|right]) expected".to_string(),
            ));
        }
        let module = resolve_module(&parts[0], ctx)?;
        let side = match parts.get(1).map(|s| s.as_str()) {
            Some("left") => Side::Left,
            Some("right") => Side::Right,
            Some(other) => return Err(CommandError::Usage(format!("bad side {other}"))),
            None => {
                if module.left_algebra().is_some() {
                    Side::Left
                } else {
                    Side::Right
                }
            }
        };
        let (dual, _) = dual_module(&module, side, &ctx.limits)?;
        return Ok(dual);
    }
    if let Some((path, name)) = file_ref(spec) {
        let cat = load_catalog(&path, &ctx.limits)?;
        return match name {
            Some(n) => cat.module(&n).cloned().ok_or_else(|| {
                CommandError::Usage(format!("{}: no module named {n}", path.display()))
            }),
            None => {
                if cat.modules.len() == 1 {
                    Ok(cat.modules[0].1.clone())
                } else {
                    Err(CommandError::Usage(format!(
                        "{}: contains {} modules, name one as path:NAME",
                        path.display(),
                        cat.modules.len()
                    )))
                }
            }
        };
    }
    Err(CommandError::Usage(format!("unknown module spec {spec}")))
}

pub fn resolve_hom(spec: &str, ctx: &Context) -> Result<AlgebraHom, CommandError> {
    if let Some(args) = spec.strip_prefix("id(").and_then(|r| r.strip_suffix(')')) {
        let alg = resolve_algebra(args, ctx)?;
        return Ok(AlgebraHom::identity(&alg));
    }
    if let Some(args) = spec.strip_prefix("scalar(").and_then(|r| r.strip_suffix(')')) {
        let parts = split_args(args);
        if parts.len() != 2 {
            return Err(CommandError::Usage(
                "scalar(<algebra>,<n>) expected".to_string(),
            ));
        }
        let alg = resolve_algebra(&parts[0], ctx)?;
        let n: usize = parts[1]
            .parse()
            .map_err(|_| CommandError::Usage(format!("bad dimension {}", parts[1])))?;
        let mn = KleeneAlgebra::matrix(&alg, n, &ctx.limits)?;
        return Ok(catalog::scalar_embedding(&alg, &mn)?);
    }
    if let Some((path, name)) = file_ref(spec) {
        let cat = load_catalog(&path, &ctx.limits)?;
        return match name {
            Some(n) => cat.hom(&n).cloned().ok_or_else(|| {
                CommandError::Usage(format!("{}: no hom named {n}", path.display()))
            }),
            None => {
                if cat.homs.len() == 1 {
                    Ok(cat.homs[0].1.clone())
                } else {
                    Err(CommandError::Usage(format!(
                        "{}: contains {} homs, name one as path:NAME",
                        path.display(),
                        cat.homs.len()
                    )))
                }
            }
        };
    }
    Err(CommandError::Usage(format!("unknown hom spec {spec}")))
}

/// Parses an idempotent spec against M_n(K): `E11`, `E11+E22`, or an index.
pub fn parse_idempotent(
    spec: &str,
    k: &Arc<KleeneAlgebra>,
    mn: &Arc<KleeneAlgebra>,
    n: usize,
) -> Result<usize, CommandError> {
    if let Ok(index) = spec.parse::<usize>() {
        return Ok(index);
    }
    let mut acc = MatrixElement::zero(k, n);
    for term in spec.split('+') {
        let term = term.trim();
        let digits = term
            .strip_prefix('E')
            .ok_or_else(|| CommandError::Usage(format!("bad idempotent term {term}")))?;
        if digits.len() != 2 {
            return Err(CommandError::Usage(format!(
                "bad idempotent term {term}: expected Eij with 1-based i, j"
            )));
        }
        let mut it = digits.chars();
        let i = it.next().unwrap().to_digit(10).unwrap_or(0) as usize;
        let j = it.next().unwrap().to_digit(10).unwrap_or(0) as usize;
        if i == 0 || j == 0 || i > n || j > n {
            return Err(CommandError::Usage(format!(
                "term {term} out of range for dimension {n}"
            )));
        }
        acc = acc.add(&MatrixElement::unit(k, n, i - 1, j - 1));
    }
    Ok(acc.index_in(mn)?)
}

fn emit(ctx: &Context, report: &mut Report, content: &str) -> Result<(), CommandError> {
    if let Some(path) = &ctx.emit {
        std::fs::write(path, content).map_err(|e| CommandError::Core(format::io_error(e, path)))?;
        report.info("emitted", path.display());
    }
    Ok(())
}

/// Collects the distinct algebras of a list of modules, named K0, K1, ...
/// with matrix bases emitted before the matrix algebra itself.
struct AlgebraNames {
    entries: Vec<(u64, String, Arc<KleeneAlgebra>)>,
}

impl AlgebraNames {
    fn new() -> Self {
        AlgebraNames {
            entries: Vec::new(),
        }
    }

    fn register(&mut self, alg: &Arc<KleeneAlgebra>) -> String {
        if let Some((base, _)) = alg.matrix_structure() {
            let base = Arc::clone(base);
            self.register(&base);
        }
        if let Some((_, name, _)) = self
            .entries
            .iter()
            .find(|(id, _, _)| *id == alg.structural_id())
        {
            return name.clone();
        }
        let name = format!("K{}", self.entries.len());
        self.entries
            .push((alg.structural_id(), name.clone(), Arc::clone(alg)));
        name
    }

    fn name_of(&self, alg: &KleeneAlgebra) -> Option<&str> {
        self.entries
            .iter()
            .find(|(id, _, _)| *id == alg.structural_id())
            .map(|(_, n, _)| n.as_str())
    }

    fn write_all(&self, out: &mut String) {
        for (_, name, alg) in &self.entries {
            let base_name = alg
                .matrix_structure()
                .and_then(|(base, _)| self.name_of(base))
                .map(|s| s.to_string());
            format::write_algebra(out, name, alg, base_name.as_deref());
        }
    }
}

fn module_file(module: &Arc<KleeneModule>, name: &str) -> String {
    let mut names = AlgebraNames::new();
    let left = module.left_algebra().map(|a| names.register(a));
    let right = module.right_algebra().map(|a| names.register(a));
    let mut out = String::new();
    names.write_all(&mut out);
    format::write_module(&mut out, name, module, left.as_deref(), right.as_deref());
    out
}

fn witness_file(witness: &MoritaWitness) -> String {
    let mut names = AlgebraNames::new();
    let k = names.register(&witness.k);
    let s = names.register(&witness.s);
    let mut out = String::new();
    names.write_all(&mut out);
    format::write_module(&mut out, "P", &witness.p, Some(&s), Some(&k));
    format::write_module(&mut out, "Q", &witness.q, Some(&k), Some(&s));
    format::write_module(&mut out, "TPQ", &witness.t_pq.module, Some(&s), Some(&s));
    format::write_module(&mut out, "TQP", &witness.t_qp.module, Some(&k), Some(&k));
    format::write_witness_section(
        &mut out,
        "W",
        [&k, &s, "P", "Q", "TPQ", "TQP"],
        &witness.u.map,
        &witness.v.map,
        (&witness.t_pq.pure, witness.q.size()),
        (&witness.t_qp.pure, witness.p.size()),
    );
    out
}

fn tensor_file(t: &TensorProduct) -> String {
    let mut names = AlgebraNames::new();
    let l_left = t.left_input.left_algebra().map(|a| names.register(a));
    let l_right = t.left_input.right_algebra().map(|a| names.register(a));
    let r_left = t.right_input.left_algebra().map(|a| names.register(a));
    let r_right = t.right_input.right_algebra().map(|a| names.register(a));
    let mut out = String::new();
    names.write_all(&mut out);
    format::write_module(&mut out, "L", &t.left_input, l_left.as_deref(), l_right.as_deref());
    format::write_module(&mut out, "R", &t.right_input, r_left.as_deref(), r_right.as_deref());
    format::write_module(&mut out, "T", &t.module, l_left.as_deref(), r_right.as_deref());
    format::write_tensor_section(&mut out, "TP", "L", "R", "T", &t.pure, t.right_input.size());
    out
}

// ---- ka ----

pub fn ka_check(ctx: &Context, input: &str) -> CmdResult {
    let mut report = Report::new(format!("ka check {input}"), ctx.seed);
    if let Some((path, _)) = file_ref(input) {
        let cat = load_catalog(&path, &ctx.limits)?;
        if cat.algebras.is_empty() {
            return Err(CommandError::Usage(format!(
                "{}: no algebra sections",
                path.display()
            )));
        }
        for (name, alg) in &cat.algebras {
            report.info("algebra", format!("{name} ({} elements)", alg.size()));
            let law = alg.check_kleene_axioms(&ctx.limits)?;
            report.push_law_report(&law);
        }
    } else {
        let alg = resolve_algebra(input, ctx)?;
        report.info("algebra", format!("{} ({} elements)", alg.name(), alg.size()));
        let law = alg.check_kleene_axioms(&ctx.limits)?;
        report.push_law_report(&law);
    }
    Ok(report)
}

pub fn ka_star(ctx: &Context, input: &str) -> CmdResult {
    let alg = resolve_algebra(input, ctx)?;
    let mut report = Report::new(format!("ka star {input}"), ctx.seed);
    report.info("algebra", format!("{} ({} elements)", alg.name(), alg.size()));
    let mut mismatch = None;
    for i in 0..alg.size() {
        let saturated = alg.star_saturate(i);
        if saturated != alg.star(i) {
            mismatch = Some(i);
        }
        if alg.size() <= 64 {
            report.line(format!(
                "star {} = {}",
                alg.render_element(i),
                alg.render_element(saturated)
            ));
        }
    }
    match mismatch {
        None => report.line(format!(
            "check star_table_consistent: pass (saturation agrees on all {} elements)",
            alg.size()
        )),
        Some(i) => report.fail(format!(
            "check star_table_consistent: fail at element {i}: stored {} vs saturated {}",
            alg.render_element(alg.star(i)),
            alg.render_element(alg.star_saturate(i))
        )),
    }
    Ok(report)
}

// ---- module ----

pub fn module_check(ctx: &Context, input: &str) -> CmdResult {
    let mut report = Report::new(format!("module check {input}"), ctx.seed);
    if let Some((path, name)) = file_ref(input) {
        let cat = load_catalog(&path, &ctx.limits)?;
        let selected: Vec<&(String, Arc<KleeneModule>)> = match &name {
            Some(n) => cat.modules.iter().filter(|(mn, _)| mn == n).collect(),
            None => cat.modules.iter().collect(),
        };
        if selected.is_empty() {
            return Err(CommandError::Usage(format!(
                "{}: no matching module sections",
                path.display()
            )));
        }
        for (name, module) in selected {
            report.info("module", format!("{name} ({} elements)", module.size()));
            report.push_law_report(&module.check_module_axioms()?);
        }
    } else {
        let module = resolve_module(input, ctx)?;
        report.info("module", format!("{} ({} elements)", module.name, module.size()));
        report.push_law_report(&module.check_module_axioms()?);
    }
    Ok(report)
}

pub fn module_free(ctx: &Context, alg: &str, rank: usize, side: &str) -> CmdResult {
    let algebra = resolve_algebra(alg, ctx)?;
    let (l, r) = match side {
        "bi" => (true, true),
        "left" => (true, false),
        "right" => (false, true),
        other => return Err(CommandError::Usage(format!("bad side {other}"))),
    };
    let module = free_module(&algebra, rank, l, r, &ctx.limits)?;
    let mut report = Report::new(format!("module free {alg} {rank} --side {side}"), ctx.seed);
    report.info("module", &module.name);
    report.info("size", module.size());
    if let Some(f) = module.left_free.as_ref().or(module.right_free.as_ref()) {
        let basis: Vec<String> = f.basis.iter().map(|b| b.to_string()).collect();
        report.info("basis", basis.join(", "));
    }
    report.push_law_report(&module.check_module_axioms()?);
    emit(ctx, &mut report, &module_file(&module, "M"))?;
    Ok(report)
}

pub fn module_dual(ctx: &Context, input: &str, side: Option<&str>) -> CmdResult {
    let module = resolve_module(input, ctx)?;
    let side = match side {
        Some("left") => Side::Left,
        Some("right") => Side::Right,
        Some(other) => return Err(CommandError::Usage(format!("bad side {other}"))),
        None => {
            if module.left_algebra().is_some() {
                Side::Left
            } else {
                Side::Right
            }
        }
    };
    let (dual, _) = dual_module(&module, side, &ctx.limits)?;
    let mut report = Report::new(format!("module dual {input}"), ctx.seed);
    report.info("module", &module.name);
    report.info("dual_size", dual.size());
    report.push_law_report(&dual.check_module_axioms()?);
    emit(ctx, &mut report, &module_file(&dual, "M"))?;
    Ok(report)
}

pub fn module_hom(ctx: &Context, left: &str, right: &str) -> CmdResult {
    let m = resolve_module(left, ctx)?;
    let n = resolve_module(right, ctx)?;
    let (hom, _) = hom_module(&m, &n, &ctx.limits)?;
    let mut report = Report::new(format!("module hom {left} {right}"), ctx.seed);
    report.info("hom_module", &hom.name);
    report.info("size", hom.size());
    report.push_law_report(&hom.check_module_axioms()?);
    emit(ctx, &mut report, &module_file(&hom, "M"))?;
    Ok(report)
}

pub fn module_quotient(ctx: &Context, input: &str, pairs_arg: &str) -> CmdResult {
    let module = resolve_module(input, ctx)?;
    let mut pairs = Vec::new();
    for chunk in pairs_arg.split(',').filter(|c| !c.trim().is_empty()) {
        let (a, b) = chunk.split_once('=').ok_or_else(|| {
            CommandError::Usage(format!("bad pair {chunk}: expected <i>=<j>"))
        })?;
        let a: usize = a.trim().parse().map_err(|_| {
            CommandError::Usage(format!("bad index in {chunk}"))
        })?;
        let b: usize = b.trim().parse().map_err(|_| {
            CommandError::Usage(format!("bad index in {chunk}"))
        })?;
        pairs.push((a, b));
    }
    let (quotient, cong) = quotient_module(&module, &pairs, &ctx.limits)?;
    let mut report = Report::new(
        format!("module quotient {input} --pairs {pairs_arg}"),
        ctx.seed,
    );
    report.info("module", &module.name);
    report.info("classes", cong.class_count());
    report.info("repairs", cong.repairs);
    let reps: Vec<String> = cong.representatives().iter().map(|r| r.to_string()).collect();
    report.info("representatives", reps.join(","));
    report.push_law_report(&quotient.check_module_axioms()?);
    emit(ctx, &mut report, &module_file(&quotient, "Q"))?;
    Ok(report)
}

pub fn module_iso(ctx: &Context, left: &str, right: &str) -> CmdResult {
    let m = resolve_module(left, ctx)?;
    let n = resolve_module(right, ctx)?;
    let mut report = Report::new(format!("module iso {left} {right}"), ctx.seed);
    match module_iso_search(&m, &n, &ctx.limits)? {
        Some(iso) => {
            report.info("isomorphic", "yes");
            let map: Vec<String> = iso.map.iter().map(|v| v.to_string()).collect();
            report.info("map", map.join(","));
        }
        None => {
            report.fail("isomorphic: no (exhaustive search)");
        }
    }
    Ok(report)
}

// ---- tensor ----

pub fn tensor_product_cmd(ctx: &Context, left: &str, right: &str, path: &str) -> CmdResult {
    let m = resolve_module(left, ctx)?;
    let n = resolve_module(right, ctx)?;
    let tensor_path = match path {
        "auto" => TensorPath::Auto,
        "fast" => TensorPath::FreeFastPath,
        "exhaustive" => TensorPath::Exhaustive,
        other => return Err(CommandError::Usage(format!("bad path {other}"))),
    };
    let t = tensor_product(&m, &n, tensor_path, &ctx.limits)?;
    let mut report = Report::new(format!("tensor {left} {right} --path {path}"), ctx.seed);
    report.info("left", &m.name);
    report.info("right", &n.name);
    report.info("size", t.module.size());
    report.info(
        "provenance",
        match t.provenance {
            kam_core::Provenance::Exhaustive => "exhaustive",
            kam_core::Provenance::FreeFastPath => "free-fastpath",
        },
    );
    report.info("repairs", t.repairs);
    report.push_law_report(&t.module.check_module_axioms()?);
    emit(ctx, &mut report, &tensor_file(&t))?;
    Ok(report)
}

pub fn tensor_adjunction(ctx: &Context, m: &str, n: &str, p: &str) -> CmdResult {
    let m = resolve_module(m, ctx)?;
    let n = resolve_module(n, ctx)?;
    let p = resolve_module(p, ctx)?;
    let alphas: Vec<ModuleHom> = enumerate_homs(&m, &m, &ctx.limits)?
        .into_iter()
        .map(|map| ModuleHom::new(&m, &m, map))
        .collect::<Result<_, _>>()?;
    let betas: Vec<ModuleHom> = enumerate_homs(&p, &p, &ctx.limits)?
        .into_iter()
        .map(|map| ModuleHom::new(&p, &p, map))
        .collect::<Result<_, _>>()?;
    let out = check_adjunction(&m, &n, &p, &alphas, &betas, &ctx.limits)?;
    let mut report = Report::new(
        format!("tensor adjunction {} {} {}", m.name, n.name, p.name),
        ctx.seed,
    );
    report.info("outer_homs", out.outer_homs);
    report.info("curried_homs", out.curried_homs);
    report.info("alpha_samples", alphas.len());
    report.info("beta_samples", betas.len());
    report.push_law_report(&out.report);
    Ok(report)
}

pub fn tensor_laws(ctx: &Context, m: &str, n: &str, p: &str) -> CmdResult {
    let m = resolve_module(m, ctx)?;
    let n = resolve_module(n, ctx)?;
    let p = resolve_module(p, ctx)?;
    let out = check_monoid_laws(&m, &n, &p, &ctx.limits)?;
    let mut report = Report::new(
        format!("tensor laws {} {} {}", m.name, n.name, p.name),
        ctx.seed,
    );
    report.push_law_report(&out.report);
    Ok(report)
}

// ---- morita ----

pub fn morita_matrix(ctx: &Context, alg: &str, n: usize) -> CmdResult {
    let k = resolve_algebra(alg, ctx)?;
    let out = matrix_morita_witness(&k, n, &ctx.limits)?;
    let mut report = Report::new(format!("morita matrix {alg} {n}"), ctx.seed);
    report.info("base", k.name());
    report.info("matrix_algebra", out.matrix_algebra.name());
    report.info("tensor_pq_size", out.witness.t_pq.module.size());
    report.info("tensor_qp_size", out.witness.t_qp.module.size());
    for (i, step) in out.chain.iter().enumerate() {
        report.line(format!(
            "chain[{i}]: {}   [{}] -> class {}",
            step.rendered, step.justification, step.class
        ));
    }
    report.push_law_report(&out.report);
    emit(ctx, &mut report, &witness_file(&out.witness))?;
    Ok(report)
}

pub fn morita_full_idempotents(ctx: &Context, alg: &str) -> CmdResult {
    let a = resolve_algebra(alg, ctx)?;
    let scan = full_idempotent_scan(&a);
    let mut report = Report::new(format!("morita full-idempotents {alg}"), ctx.seed);
    report.info("algebra", a.name());
    report.info("idempotents", scan.len());
    for (e, full) in &scan {
        report.line(format!(
            "idempotent {}: {}",
            a.render_element(*e),
            if *full { "full" } else { "not full" }
        ));
    }
    Ok(report)
}

pub fn morita_corner(ctx: &Context, alg: &str, idem: &str) -> CmdResult {
    let a = resolve_algebra(alg, ctx)?;
    let index = match (a.matrix_structure(), idem.parse::<usize>()) {
        (_, Ok(i)) => i,
        (Some((base, dim)), _) => {
            let base = Arc::clone(base);
            parse_idempotent(idem, &base, &a, dim)?
        }
        (None, Err(_)) => {
            return Err(CommandError::Usage(
                "named idempotents need a matrix algebra; pass an index".to_string(),
            ))
        }
    };
    let e = Idempotent::new(&a, index)?;
    let (corner, embedding) = corner_algebra(&e, &ctx.limits)?;
    let mut report = Report::new(format!("morita corner {alg} --idempotent {idem}"), ctx.seed);
    report.info("algebra", a.name());
    report.info("idempotent", a.render_element(index));
    report.info("corner_size", corner.size());
    let carrier: Vec<String> = embedding.iter().map(|x| a.render_element(*x)).collect();
    report.info("corner_carrier", carrier.join("; "));
    report.push_law_report(&corner.check_kleene_axioms(&ctx.limits)?);
    if let Some(path) = &ctx.emit {
        let mut out = String::new();
        format::write_algebra(&mut out, "S", &corner, None);
        std::fs::write(path, out).map_err(|e| CommandError::Core(format::io_error(e, path)))?;
        report.info("emitted", path.display());
    }
    Ok(report)
}

pub fn morita_lift(ctx: &Context, alg: &str, n: usize, idem: &str) -> CmdResult {
    let k = resolve_algebra(alg, ctx)?;
    let mn = KleeneAlgebra::matrix(&k, n, &ctx.limits)?;
    let index = parse_idempotent(idem, &k, &mn, n)?;
    let out = lift_semiring_morita(&k, n, index, &ctx.limits)?;
    let mut report = Report::new(
        format!("morita lift {alg} {n} --idempotent {idem}"),
        ctx.seed,
    );
    report.info("base", k.name());
    report.info("idempotent", mn.render_element(index));
    report.info("corner_size", out.corner.size());
    report.info("tensor_pq_size", out.witness.t_pq.module.size());
    report.info("tensor_qp_size", out.witness.t_qp.module.size());
    report.push_law_report(&out.report);
    emit(ctx, &mut report, &witness_file(&out.witness))?;
    Ok(report)
}

pub fn morita_hom_module(ctx: &Context, hom: &str) -> CmdResult {
    let h = resolve_hom(hom, ctx)?;
    let check = h.check();
    let mut report = Report::new(format!("morita hom-module {hom}"), ctx.seed);
    report.push_law_report(&check);
    if !check.passed() {
        return Ok(report);
    }
    let module = homomorphism_module(&h, &ctx.limits)?;
    report.info("module", &module.name);
    report.info("size", module.size());
    report.push_law_report(&module.check_module_axioms()?);
    let mut names = AlgebraNames::new();
    let from = names.register(&h.source);
    let to = names.register(&h.target);
    let mut out = String::new();
    names.write_all(&mut out);
    format::write_hom(&mut out, "h", &h, &from, &to);
    format::write_module(&mut out, "E", &module, Some(&from), Some(&to));
    emit(ctx, &mut report, &out)?;
    Ok(report)
}

pub fn morita_compose_law(ctx: &Context, f_spec: &str, g_spec: &str) -> CmdResult {
    let f = resolve_hom(f_spec, ctx)?;
    let g = resolve_hom(g_spec, ctx)?;
    let out = check_composition_law(&f, &g, &ctx.limits)?;
    let mut report = Report::new(format!("morita compose-law {f_spec} {g_spec}"), ctx.seed);
    report.info("tensor_size", out.tensor_size);
    report.push_law_report(&out.report);
    Ok(report)
}

// ---- verify ----

fn check_tensor_entry(
    cat: &Catalog,
    name: &str,
    entry: &TensorEntry,
    limits: &Limits,
    report: &mut Report,
) -> Result<(), CommandError> {
    let left = cat.module(&entry.left).expect("resolved at parse time");
    let right = cat.module(&entry.right).expect("resolved at parse time");
    let section = cat.module(&entry.module).expect("resolved at parse time");
    let t = tensor_product(left, right, TensorPath::Auto, limits)?;
    if t.module.size() != section.size() {
        report.fail(format!(
            "check tensor {name}[size]: fail (recomputed {} vs declared {})",
            t.module.size(),
            section.size()
        ));
        return Ok(());
    }
    if entry.pure.len() != left.size() || entry.pure.iter().any(|row| row.len() != right.size()) {
        report.fail(format!("check tensor {name}[pure_shape]: fail"));
        return Ok(());
    }
    // Translate recomputed elements into the declared module through the
    // declared pure table and compare structures.
    let translate: Vec<u32> = (0..t.module.size())
        .map(|x| {
            let mut acc = section.zero();
            for &(m, nn) in t.decompose(x) {
                acc = section.add(acc, entry.pure[m as usize][nn as usize]);
            }
            acc as u32
        })
        .collect();
    let phi = ModuleHom::new(&t.module, section, translate)?;
    let ok = phi.is_bijective() && phi.check().passed();
    let mut pure_ok = true;
    'outer: for m in 0..left.size() {
        for nn in 0..right.size() {
            if phi.apply(t.pure_tensor(m, nn)) != entry.pure[m][nn] {
                pure_ok = false;
                break 'outer;
            }
        }
    }
    if ok && pure_ok {
        report.line(format!("check tensor {name}[faithful]: pass"));
    } else {
        report.fail(format!("check tensor {name}[faithful]: fail"));
    }
    Ok(())
}

fn check_witness_entry(
    cat: &Catalog,
    name: &str,
    entry: &WitnessEntry,
    limits: &Limits,
    report: &mut Report,
) -> Result<(), CommandError> {
    let k = cat.algebra(&entry.k).expect("resolved at parse time");
    let s = cat.algebra(&entry.s).expect("resolved at parse time");
    let p = cat.module(&entry.p).expect("resolved at parse time");
    let q = cat.module(&entry.q).expect("resolved at parse time");
    let tpq = cat.module(&entry.tpq).expect("resolved at parse time");
    let tqp = cat.module(&entry.tqp).expect("resolved at parse time");

    let faithful = |label: &str,
                        a: &Arc<KleeneModule>,
                        b: &Arc<KleeneModule>,
                        section: &Arc<KleeneModule>,
                        pure: &[Vec<usize>],
                        report: &mut Report|
     -> Result<bool, CommandError> {
        let t = tensor_product(a, b, TensorPath::Auto, limits)?;
        if t.module.size() != section.size()
            || pure.len() != a.size()
            || pure.iter().any(|row| row.len() != b.size())
        {
            report.fail(format!("check witness {name}[{label}_shape]: fail"));
            return Ok(false);
        }
        let translate: Vec<u32> = (0..t.module.size())
            .map(|x| {
                let mut acc = section.zero();
                for &(m, nn) in t.decompose(x) {
                    acc = section.add(acc, pure[m as usize][nn as usize]);
                }
                acc as u32
            })
            .collect();
        let phi = ModuleHom::new(&t.module, section, translate)?;
        let ok = phi.is_bijective() && phi.check().passed();
        if ok {
            report.line(format!("check witness {name}[{label}_faithful]: pass"));
        } else {
            report.fail(format!("check witness {name}[{label}_faithful]: fail"));
        }
        Ok(ok)
    };
    let pq_ok = faithful("tpq", p, q, tpq, &entry.pure_pq, report)?;
    let qp_ok = faithful("tqp", q, p, tqp, &entry.pure_qp, report)?;

    let s_regular = regular_bimodule(s, limits)?;
    let k_regular = regular_bimodule(k, limits)?;
    let u = ModuleHom::new(tpq, &s_regular, entry.u.iter().map(|&v| v as u32).collect())?;
    let v = ModuleHom::new(tqp, &k_regular, entry.v.iter().map(|&v| v as u32).collect())?;
    for (label, map) in [("u", &u), ("v", &v)] {
        if map.is_bijective() && map.check().passed() {
            report.line(format!("check witness {name}[{label}_iso]: pass"));
        } else {
            report.fail(format!("check witness {name}[{label}_iso]: fail"));
        }
    }
    if !(pq_ok && qp_ok) {
        report.fail(format!("check witness {name}[overall]: fail"));
    }
    Ok(())
}

pub fn verify(ctx: &Context, input: &str) -> CmdResult {
    let path = PathBuf::from(input);
    let cat = load_catalog(&path, &ctx.limits)?;
    let mut report = Report::new(format!("verify {input}"), ctx.seed);
    for (name, alg) in &cat.algebras {
        report.info("algebra", format!("{name} ({} elements)", alg.size()));
        report.push_law_report(&alg.check_kleene_axioms(&ctx.limits)?);
    }
    for (name, module) in &cat.modules {
        report.info("module", format!("{name} ({} elements)", module.size()));
        report.push_law_report(&module.check_module_axioms()?);
    }
    for (name, hom) in &cat.homs {
        report.info("hom", name);
        report.push_law_report(&hom.check());
    }
    for (name, alg_name, index) in &cat.idempotents {
        let alg = cat.algebra(alg_name).expect("resolved at parse time");
        if *index < alg.size() && alg.mul(*index, *index) == *index {
            report.line(format!("check idempotent {name}: pass"));
        } else {
            report.fail(format!("check idempotent {name}: fail (e*e != e)"));
        }
    }
    for (name, entry) in &cat.tensors {
        check_tensor_entry(&cat, name, entry, &ctx.limits, &mut report)?;
    }
    for (name, entry) in &cat.witnesses {
        check_witness_entry(&cat, name, entry, &ctx.limits, &mut report)?;
    }
    Ok(report)
}

pub fn error_report(command: &str, seed: u64, error: &CommandError) -> Report {
    let mut report = Report::new(command, seed);
    report.verdict = Verdict::Error;
    report.line(format!("error: {error}"));
    report
}
