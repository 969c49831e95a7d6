use std::fmt::Write as _;

use hypersym::bounds::{
    asymptotic_p2, fixed_kset_ceiling, stabilizer_prob_bound, transversal_rate_q2, transversal_union_bound,
    union_bound_asymmetry, BoundReport,
};
use hypersym::constructions::{builtin_catalog, load_catalog, Catalog};
use hypersym::experiments::{
    asymmetry_exact, asymmetry_mc, classify_exception, min_edge_size, orbit_union_lattice, rigidity_mc,
    transversal_asymmetry_exact, transversal_asymmetry_mc, Evidence, ExperimentReport, RigidityModel,
};
use hypersym::group::minimal_degree;
use hypersym::hypergraph::{aut_group_transversal_with, aut_group_with, kset_orbit_reps, setwise_stabilizer};
use hypersym::{Hypergraph, PermGroup, Permutation, PointBase, TransversalHypergraph, VertexSet};
use serde_json::{json, Value};

use crate::args::{CatalogCommand, Cli, Command, GroupArg, GroupCommand, ModelArg};
use crate::output::{report_text, Output};
use crate::CliError;

const VERSION: &str = env!("CARGO_PKG_VERSION");

struct Ctx<'a> {
    cli: &'a Cli,
    catalog: Catalog,
}

impl Ctx<'_> {
    fn base(&self) -> PointBase {
        if self.cli.global.zero_based {
            PointBase::Zero
        } else {
            PointBase::One
        }
    }

    fn offset(&self) -> usize {
        usize::from(!self.cli.global.zero_based)
    }

    fn perm(&self, p: &Permutation) -> String {
        p.to_cycle_string(self.base())
    }

    fn points(&self, pts: &[usize]) -> Vec<usize> {
        pts.iter().map(|p| p + self.offset()).collect()
    }

    fn group(&self, arg: &GroupArg) -> Result<(String, PermGroup), CliError> {
        resolve_group(&self.catalog, &arg.group, arg.degree, self.base())
    }
}

/// A catalog name, or generators in cycle notation separated by `;`.
fn resolve_group(
    catalog: &Catalog,
    selector: &str,
    degree: Option<usize>,
    base: PointBase,
) -> Result<(String, PermGroup), CliError> {
    if let Some(e) = catalog.get(selector) {
        if degree.is_some_and(|d| d != e.degree) {
            return Err(CliError::Input(format!("{selector} has degree {}", e.degree)));
        }
        return Ok((e.name.clone(), e.group().clone()));
    }
    if !selector.contains('(') {
        return Err(CliError::Input(format!(
            "{selector:?} is neither a catalog name nor a generator string"
        )));
    }
    let largest = selector
        .split(|c: char| !c.is_ascii_digit())
        .filter_map(|s| s.parse::<usize>().ok())
        .max()
        .unwrap_or(0);
    let n = degree.unwrap_or(match base {
        PointBase::One => largest,
        PointBase::Zero => largest + 1,
    });
    let gens = selector
        .split(';')
        .map(|g| Permutation::parse_cycles(g.trim(), n, base))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((selector.to_string(), PermGroup::new(n, gens)?))
}

fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Input(format!("cannot start thread pool: {e}")))?;
    Ok(pool.install(f))
}

pub fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let catalog = match &cli.global.catalog {
        Some(path) => load_catalog(path)?,
        None => builtin_catalog(),
    };
    let ctx = Ctx { cli, catalog };
    let out = match &cli.command {
        Command::Group(GroupCommand::Info { group, kmax }) => group_info(&ctx, group, *kmax)?,
        Command::Orbits { group, k } => orbits(&ctx, group, *k)?,
        Command::Stab { group, set } => stab(&ctx, group, set)?,
        Command::Aut { file, transversal } => aut(&ctx, file, *transversal)?,
        Command::Rigidity {
            group,
            trials,
            model,
            k,
            failure_log,
        } => rigidity(&ctx, group, *trials, *model, *k, *failure_log)?,
        Command::Asymmetry { n, t, trials, exact } => asymmetry(&ctx, *n, *t, *trials, *exact, false)?,
        Command::TransversalAsymmetry { n, t, trials, exact } => asymmetry(&ctx, *n, *t, *trials, *exact, true)?,
        Command::Exceptions { degree_max } => exceptions(&ctx, *degree_max)?,
        Command::Lattice { group, k } => lattice(&ctx, group, *k)?,
        Command::Minedge { group, kmax } => minedge(&ctx, group, *kmax)?,
        Command::Bounds { n, t, group, k } => bounds(&ctx, *n, *t, group.as_deref(), *k)?,
        Command::Catalog(CatalogCommand::Dump) => catalog_dump(&ctx),
    };
    out.emit(cli.global.format, cli.global.output.as_deref())
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn group_info(ctx: &Ctx, arg: &GroupArg, kmax: usize) -> Result<Output, CliError> {
    let (name, g) = ctx.group(arg)?;
    let caps = &ctx.cli.global.caps;
    let mut rep = g.structure_report_with_caps(kmax, caps.kset_cap, caps.mindeg_cap);
    if let Some(w) = &rep.minimal_degree_witness {
        rep.minimal_degree_witness = Some(ctx.perm(&Permutation::parse_cycles(w, g.degree(), PointBase::Zero)?));
    }
    rep.nontrivial_block = rep.nontrivial_block.map(|b| ctx.points(&b));
    let gens: Vec<String> = g.generators().iter().map(|p| ctx.perm(p)).collect();

    let mut text = format!("group: {name}\ndegree: {}\norder: {}\n", rep.degree, rep.order);
    let _ = writeln!(text, "transitive: {}", yes(rep.transitive));
    let _ = writeln!(text, "primitive: {}", yes(rep.primitive));
    if let Some(b) = &rep.nontrivial_block {
        let _ = writeln!(text, "block: {b:?}");
    }
    let _ = writeln!(
        text,
        "k-homogeneous for k <= {}{}",
        rep.k_homogeneous_up_to,
        if rep.k_homogeneity_capped { " (scan capped)" } else { "" }
    );
    match (&rep.minimal_degree, &rep.minimal_degree_witness) {
        (Some(m), Some(w)) => {
            let _ = writeln!(text, "minimal degree: {m}, attained by {w}");
        }
        _ => {
            let _ = writeln!(text, "minimal degree: not computed");
        }
    }
    let _ = writeln!(text, "generators: {}", gens.join("; "));
    let json = json!({
        "command": "group-info",
        "group": name,
        "generators": gens,
        "structure": rep,
        "version": VERSION,
    });
    Ok(Output::new(json, text))
}

fn orbits(ctx: &Ctx, arg: &GroupArg, k: Option<usize>) -> Result<Output, CliError> {
    let (name, g) = ctx.group(arg)?;
    let (reps, sizes): (Vec<Vec<usize>>, Vec<u64>) = match k {
        None => g.orbits().into_iter().map(|o| (ctx.points(&o), o.len() as u64)).unzip(),
        Some(k) => kset_orbit_reps(&g, k, ctx.cli.global.caps.kset_cap)?
            .into_iter()
            .map(|(y, s)| (ctx.points(&y.to_vec()), s))
            .unzip(),
    };
    let what = match k {
        None => "points".to_string(),
        Some(k) => format!("{k}-sets"),
    };
    let mut text = format!("{name}: {} orbits on {what}\n", reps.len());
    for (r, s) in reps.iter().zip(&sizes) {
        let label = if k.is_some() { "representative " } else { "" };
        let _ = writeln!(text, "  size {s}: {label}{r:?}");
    }
    let json = json!({
        "command": "orbits",
        "group": name,
        "k": k,
        "orbits": reps.iter().zip(&sizes).map(|(r, s)| json!({ "points": r, "size": s })).collect::<Vec<_>>(),
        "version": VERSION,
    });
    Ok(Output::new(json, text))
}

fn read_points(ctx: &Ctx, n: usize, pts: &[usize]) -> Result<VertexSet, CliError> {
    let mut out = Vec::new();
    for &p in pts {
        let q = p
            .checked_sub(ctx.offset())
            .filter(|&q| q < n)
            .ok_or_else(|| CliError::Input(format!("point {p} is out of range for degree {n}")))?;
        out.push(q);
    }
    Ok(VertexSet::from_points(n, out))
}

fn stab(ctx: &Ctx, arg: &GroupArg, set: &[usize]) -> Result<Output, CliError> {
    let (name, g) = ctx.group(arg)?;
    let y = read_points(ctx, g.degree(), set)?;
    let s = setwise_stabilizer(&g, &y)?;
    let gens: Vec<String> = s.generators().iter().map(|p| ctx.perm(p)).collect();
    let shown = ctx.points(&y.to_vec());
    let text = format!(
        "stabilizer of {shown:?} in {name}\norder: {}\nindex: {}\ngenerators: {}\n",
        s.order(),
        g.order() / s.order(),
        if gens.is_empty() { "(none)".into() } else { gens.join("; ") }
    );
    let json = json!({
        "command": "stab",
        "group": name,
        "set": shown,
        "order": s.order().to_string(),
        "orbit_size": (g.order() / s.order()).to_string(),
        "generators": gens,
        "version": VERSION,
    });
    Ok(Output::new(json, text))
}

fn aut(ctx: &Ctx, file: &std::path::Path, transversal: bool) -> Result<Output, CliError> {
    let text_in = std::fs::read_to_string(file)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", file.display())))?;
    let cfg = ctx.cli.global.caps.aut();
    let (group, n, edges) = if transversal {
        let t = TransversalHypergraph::parse(&text_in)?;
        (aut_group_transversal_with(&t, &cfg)?, t.n(), t.edges().len())
    } else {
        let h = Hypergraph::parse(&text_in)?;
        (aut_group_with(&h, &cfg)?, h.n(), h.edge_count())
    };
    let gens: Vec<String> = group.generators().iter().map(|p| ctx.perm(p)).collect();
    let mut text = format!("vertices: {n}\nedges: {edges}\norder: {}\ngenerators:\n", group.order());
    for g in &gens {
        let _ = writeln!(text, "  {g}");
    }
    if gens.is_empty() {
        text.push_str("  (none: the hypergraph is rigid)\n");
    }
    let json = json!({
        "command": "aut",
        "file": file.display().to_string(),
        "transversal": transversal,
        "n": n,
        "edges": edges,
        "order": group.order().to_string(),
        "generators": gens,
        "version": VERSION,
    });
    Ok(Output::new(json, text))
}

fn rigidity(
    ctx: &Ctx,
    arg: &GroupArg,
    trials: u64,
    model: ModelArg,
    k: Option<usize>,
    failure_log: usize,
) -> Result<Output, CliError> {
    let (name, g) = ctx.group(arg)?;
    let model = match (model, k) {
        (ModelArg::AllSubsets, None) => RigidityModel::AllSubsets,
        (ModelArg::KUniform, Some(k)) => RigidityModel::KUniform { k },
        (ModelArg::AllSubsets, Some(_)) => return Err(CliError::Input("--k needs --model k-uniform".into())),
        (ModelArg::KUniform, None) => return Err(CliError::Input("--model k-uniform needs --k".into())),
    };
    let g_ref = &g;
    let cfg = ctx.cli.global.caps.aut();
    let seed = ctx.cli.global.seed;
    let report = with_pool(ctx.cli.global.threads, || {
        rigidity_mc(g_ref, &name, trials, seed, model, &cfg, failure_log)
    })??
    .to_report(ctx.cli.global.timing);
    Ok(Output::report(&report, report_text(&report)))
}

fn asymmetry(ctx: &Ctx, n: usize, t: usize, trials: u64, exact: bool, transversal: bool) -> Result<Output, CliError> {
    let cfg = ctx.cli.global.caps.aut();
    let seed = ctx.cli.global.seed;
    let report = with_pool(ctx.cli.global.threads, || match (transversal, exact) {
        (false, false) => asymmetry_mc(n, t, trials, seed, &cfg),
        (false, true) => asymmetry_exact(n, t, &cfg),
        (true, false) => transversal_asymmetry_mc(n, t, trials, seed, &cfg),
        (true, true) => transversal_asymmetry_exact(n, t, &cfg),
    })??
    .to_report(ctx.cli.global.timing);
    Ok(Output::report(&report, report_text(&report)))
}

fn describe(e: &Evidence) -> String {
    match e {
        Evidence::SetTransitive { kmax } => format!("set-transitive (one orbit on k-sets for k <= {kmax})"),
        Evidence::NotSetTransitive { k, orbit_count } => format!("not set-transitive ({orbit_count} orbits on {k}-sets)"),
        Evidence::AllOrbitUnionsAdmitOvergroup { levels } => {
            let parts: Vec<String> = levels
                .iter()
                .map(|l| format!("k={}: {} unions, minimal overgroups {{{}}}", l.k, l.unions, l.minimal_overgroup_orders.join(", ")))
                .collect();
            format!("exception candidate, every orbit union admits an overgroup ({})", parts.join("; "))
        }
        Evidence::RigidWitnessFound { k, orbit_reps } => {
            format!("witness at k={k}: union of the orbits of {orbit_reps:?} (points from 0)")
        }
    }
}

fn exceptions(ctx: &Ctx, degree_max: usize) -> Result<Output, CliError> {
    let caps = &ctx.cli.global.caps;
    let cfg = caps.aut();
    let entries: Vec<_> = ctx
        .catalog
        .iter()
        .filter(|e| e.degree <= degree_max && !e.is_giant() && e.group().is_transitive())
        .collect();
    let findings = with_pool(ctx.cli.global.threads, || {
        entries
            .iter()
            .map(|e| classify_exception(e.group(), &e.name, caps.kset_cap, &cfg))
            .collect::<Result<Vec<_>, _>>()
    })??;

    let count = |f: fn(&Evidence) -> bool| findings.iter().filter(|x| f(&x.evidence)).count() as u64;
    let mut report = ExperimentReport::new("exceptions")
        .input("degree_max", degree_max)
        .input("catalog", ctx.cli.global.catalog.as_ref().map(|p| p.display().to_string()).unwrap_or("builtin".into()))
        .count("groups", findings.len() as u64)
        .count("set_transitive", count(|e| matches!(e, Evidence::SetTransitive { .. })))
        .count("exception_candidates", count(|e| matches!(e, Evidence::AllOrbitUnionsAdmitOvergroup { .. })))
        .count("witnessed", count(|e| matches!(e, Evidence::RigidWitnessFound { .. })));
    report.witnesses = findings.iter().map(|f| json!(f)).collect();

    let mut text = format!(
        "{} transitive non-giant catalog groups of degree <= {degree_max}\n",
        findings.len()
    );
    let mut sections: [(&str, Vec<String>); 3] = [
        ("set-transitive", Vec::new()),
        ("exception candidates (not certified)", Vec::new()),
        ("witnessed", Vec::new()),
    ];
    for f in &findings {
        let slot = match f.evidence {
            Evidence::SetTransitive { .. } => 0,
            Evidence::AllOrbitUnionsAdmitOvergroup { .. } => 1,
            _ => 2,
        };
        sections[slot].1.push(format!("  {} (n={}, order {}): {}", f.group, f.n, f.order, describe(&f.evidence)));
    }
    for (title, lines) in sections {
        let _ = writeln!(text, "{title}: {}", lines.len());
        for l in lines {
            let _ = writeln!(text, "{l}");
        }
    }
    Ok(Output::report(&report, text))
}

fn lattice(ctx: &Ctx, arg: &GroupArg, k: usize) -> Result<Output, CliError> {
    let (name, g) = ctx.group(arg)?;
    let caps = &ctx.cli.global.caps;
    let l = orbit_union_lattice(&g, k, caps.kset_cap, &caps.aut())?;
    let report = l.to_report(&name);
    let mut text = format!("{name} on {k}-sets: {} orbits, sizes {:?}\n", l.orbit_reps.len(), l.orbit_sizes);
    for (i, r) in l.orbit_reps.iter().enumerate() {
        let _ = writeln!(text, "  orbit {i}: representative {:?}", ctx.points(r));
    }
    for u in &l.unions {
        let mins: Vec<String> = u
            .minimal_overgroups_contained
            .iter()
            .map(|&i| l.overgroups[i].order.clone())
            .collect();
        let _ = writeln!(
            text,
            "  union {:?}: {} edges, |Aut| = {}{}",
            u.orbits,
            u.edges,
            u.aut_order,
            if mins.is_empty() {
                " (= G)".to_string()
            } else {
                format!(", contains minimal overgroups of order {}", mins.join(", "))
            }
        );
    }
    let _ = writeln!(text, "minimal overgroup orders: {{{}}}", l.minimal_overgroup_orders.join(", "));
    let _ = writeln!(text, "every union has a larger automorphism group: {}", yes(l.all_unions_exceed));
    Ok(Output::report(&report, text))
}

fn minedge(ctx: &Ctx, arg: &GroupArg, kmax: Option<usize>) -> Result<Output, CliError> {
    let (name, g) = ctx.group(arg)?;
    let caps = &ctx.cli.global.caps;
    let kmax = kmax.unwrap_or(g.degree() / 2);
    let r = min_edge_size(&g, &name, kmax, caps.kset_cap, &caps.aut())?;
    let report = r.to_report();
    let text = match &r.witness {
        Some(w) => format!(
            "{name}: smallest k = {}; the orbit of {:?} ({} edges) has automorphism group {name}\n",
            w.k,
            ctx.points(&w.y),
            w.orbit_size
        ),
        None => format!("{name}: no single k-set orbit with k <= {kmax} has automorphism group {name}; exception candidate\n"),
    };
    Ok(Output::report(&report, text))
}

fn bounds(ctx: &Ctx, n: usize, t: usize, group: Option<&str>, k: Option<usize>) -> Result<Output, CliError> {
    let mut values: Vec<BoundReport> = Vec::new();
    if t == 2 && n >= 4 {
        values.push(asymptotic_p2(n)?);
    }
    values.push(union_bound_asymmetry(n, t)?);
    if t >= 1 && n.is_multiple_of(t) && n <= hypersym::bounds::UNION_BOUND_MAX_N {
        values.push(transversal_union_bound(t, n / t)?);
        if t == 2 {
            values.push(transversal_rate_q2(n)?);
        }
    }
    let mut report = ExperimentReport::new("bounds").input("n", n).input("t", t);
    let mut extra = String::new();
    match (group, k) {
        (Some(sel), Some(k)) => {
            let (name, g) = resolve_group(&ctx.catalog, sel, Some(n), ctx.base())?;
            let m = minimal_degree(&g, ctx.cli.global.caps.mindeg_cap)
                .ok_or_else(|| CliError::Lib(hypersym::Error::InvalidArgument("trivial group".into())))?
                .degree;
            let sb = stabilizer_prob_bound(g.order(), n, m, k)?;
            report = report
                .input("group", &name)
                .input("k", k)
                .input("minimal_degree", m)
                .bound("fixed_kset_ceiling", fixed_kset_ceiling(n, m, k).to_string());
            let _ = writeln!(extra, "{name}: minimal degree {m}, fixed {k}-set ceiling {}", fixed_kset_ceiling(n, m, k));
            values.push(sb.binomial);
            values.push(sb.exponential);
        }
        (None, None) => {}
        _ => return Err(CliError::Input("--group and --k go together".into())),
    }
    let mut text = format!("n = {n}, t = {t}\n");
    for b in &values {
        let _ = writeln!(
            text,
            "{}: {}{}{}",
            b.name,
            b.value,
            b.exact.as_ref().map(|e| format!(" (= {e})")).unwrap_or_default(),
            if b.vacuous { " (exceeds 1)" } else { "" }
        );
        report = report.bound(&b.name, b);
    }
    text.push_str(&extra);
    if let Some(b) = values.first() {
        let _ = writeln!(text, "precision: {}", b.precision);
    }
    Ok(Output::report(&report, text))
}

fn catalog_dump(ctx: &Ctx) -> Output {
    let entries: Vec<Value> = ctx
        .catalog
        .iter()
        .map(|e| {
            json!({
                "name": e.name,
                "degree": e.degree,
                "order": e.group().order().to_string(),
                "tags": e.tags,
                "generators": e.generators,
            })
        })
        .collect();
    let mut csv = String::from("name,degree,order,tags,generators\n");
    for e in ctx.catalog.iter() {
        let tags: Vec<&str> = e.tags.iter().map(String::as_str).collect();
        let _ = writeln!(
            csv,
            "{},{},{},\"{}\",\"{}\"",
            e.name,
            e.degree,
            e.group().order(),
            tags.join(","),
            e.generators.join(";")
        );
    }
    Output {
        json: json!({ "command": "catalog-dump", "entries": entries, "version": VERSION }),
        text: ctx.catalog.to_text(),
        csv,
    }
}
