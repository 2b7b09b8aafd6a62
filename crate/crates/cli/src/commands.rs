use crate::render::{self, document};
use crate::{selftest, Cli, Command, Failure, Pair};
use gentle_core::alp::{alp_basis, component_name};
use gentle_core::exceptional::ag_invariants_with;
use gentle_core::field::parse_rational;
use gentle_core::hom::{chain_map_space_shifted, graded_profile_with};
use gentle_core::prelude::*;
use gentle_core::words::parse_band;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

type Outcome = std::result::Result<String, Failure>;

pub fn run(cli: &Cli) -> Outcome {
    let par = Parallelism::from_flag(cli.parallel);
    match &cli.command {
        Command::Validate { file } => validate(&load_file(file)?, cli.json),
        Command::Threads { file } => threads(&load_file(file)?, cli.json),
        Command::Ag { file, dot } => ag(&load_file(file)?, cli.json, *dot, par),
        Command::Hom { file, pair, profile } => hom(&load_file(file)?, pair, *profile, cli.json, par),
        Command::Alp { file, pair } => alp(&load_file(file)?, pair, cli.json),
        Command::Cycles { file, verify } => cycles(&load_file(file)?, *verify, cli.json, par),
        Command::Band { file, band, scalar } => band_cmd(&load_file(file)?, band, scalar, cli.json),
        Command::Search { file, max_letters, shift_window } => {
            search(&load_file(file)?, *max_letters, *shift_window, cli.json, par)
        }
        Command::Selftest { count } => selftest::run(cli.seed, *count, cli.json, par),
    }
}

fn load_file(path: &Path) -> std::result::Result<GentleAlgebra, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Failure::Domain(format!("file not found: {}", path.display())),
        _ => Failure::Domain(format!("cannot read {}: {e}", path.display())),
    })?;
    gentle_core::load(&text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn scalar(text: &str) -> std::result::Result<Q, Failure> {
    parse_rational(text).ok_or_else(|| Failure::Usage(format!("invalid scalar '{text}', expected p or p/q")))
}

/// A word complex `X[shift]` named on the command line.
struct Object {
    word: Word,
    expr: String,
    shift: i32,
    complex: RepComplex,
}

fn object(alg: &GentleAlgebra, arg: &str, mu: Q) -> std::result::Result<Object, Failure> {
    let (expr, shift) = match arg.rsplit_once('@') {
        Some((w, s)) => {
            let s = s.trim().parse::<i32>().map_err(|_| Failure::Usage(format!("invalid shift in '{arg}'")))?;
            (w.trim(), s)
        }
        None => (arg.trim(), 0),
    };
    let word = parse_word(alg, expr)?;
    let base = match &word {
        Word::String(w) => unfold_string(alg, w, 0),
        Word::Band(b) => unfold_band(alg, b, 0, mu)?,
    };
    let expr = match &word {
        Word::String(w) => w.expr(alg),
        Word::Band(b) => b.expr(alg),
    };
    Ok(Object { word, expr, shift, complex: shift_complex(&base, shift) })
}

fn shift_complex(c: &RepComplex, t: i32) -> RepComplex {
    gentle_core::complexes::shift(c, t)
}

fn validate(alg: &GentleAlgebra, as_json: bool) -> Outcome {
    let basis: Vec<String> = (0..alg.dim()).map(|p| alg.path_name(p)).collect();
    let p = alg.presentation();
    if as_json {
        let arrows: Vec<Value> = (0..alg.num_arrows())
            .map(|a| {
                let ar = alg.arrow(a);
                json!({
                    "name": ar.name,
                    "source": alg.vertex_name(ar.source),
                    "target": alg.vertex_name(ar.target),
                    "s": alg.s_prime(a),
                    "e": alg.e_prime(a),
                })
            })
            .collect();
        let relations: Vec<Value> =
            p.relations.iter().map(|&(b, a)| json!([alg.arrow_name(b), alg.arrow_name(a)])).collect();
        return Ok(document(&json!({
            "algebra": alg.name(),
            "gentle": true,
            "vertices": p.vertices,
            "arrows": arrows,
            "relations": relations,
            "dim": alg.dim(),
            "path_basis": basis,
        })));
    }
    let mut out = String::new();
    writeln!(out, "{}: gentle", alg.name()).unwrap();
    writeln!(out, "{} vertices, {} arrows, {} relations", alg.num_vertices(), alg.num_arrows(), p.relations.len()).unwrap();
    writeln!(out, "dim A = {}", alg.dim()).unwrap();
    writeln!(out, "path basis: {}", basis.join(", ")).unwrap();
    let signs: Vec<String> =
        (0..alg.num_arrows()).map(|a| format!("{}({:+},{:+})", alg.arrow_name(a), alg.s_prime(a), alg.e_prime(a))).collect();
    if !signs.is_empty() {
        writeln!(out, "signs: {}", signs.join(" ")).unwrap();
    }
    Ok(out)
}

fn threads(alg: &GentleAlgebra, as_json: bool) -> Outcome {
    let t = enumerate_threads(alg)?;
    let walk = aag_cycles(&t)?;
    let pl: Vec<String> = t.permitted.iter().map(|h| h.label(alg)).collect();
    let fl: Vec<String> = t.forbidden.iter().map(|h| h.label(alg)).collect();
    if as_json {
        let describe = |h: &Thread, label: &str| {
            json!({
                "label": label,
                "word": h.word_expr(alg),
                "start": alg.vertex_name(h.start),
                "end": alg.vertex_name(h.end),
                "length": h.length,
            })
        };
        let permitted: Vec<Value> = t.permitted.iter().zip(&pl).map(|(h, l)| describe(h, l)).collect();
        let forbidden: Vec<Value> = t.forbidden.iter().zip(&fl).map(|(h, l)| describe(h, l)).collect();
        let phi1: Map<String, Value> = t.phi1.iter().enumerate().map(|(i, f)| (pl[i].clone(), json!(f.map(|f| &fl[f])))).collect();
        let phi2: Map<String, Value> = t.phi2.iter().enumerate().map(|(i, h)| (fl[i].clone(), json!(h.map(|h| &pl[h])))).collect();
        let critical: Vec<&String> = fl.iter().zip(&t.critical).filter(|(_, c)| **c).map(|(l, _)| l).collect();
        let cycles: Vec<Value> = walk
            .iter()
            .map(|c| json!({ "n": c.n, "m": c.m, "threads": c.permitted.iter().map(|&h| &pl[h]).collect::<Vec<_>>() }))
            .collect();
        return Ok(document(&json!({
            "permitted": permitted,
            "forbidden": forbidden,
            "phi1": phi1,
            "phi2": phi2,
            "critical": critical,
            "aag_cycles": cycles,
        })));
    }
    let mut out = String::new();
    writeln!(out, "permitted threads").unwrap();
    for (i, h) in t.permitted.iter().enumerate() {
        let f = t.phi1[i].map(|f| fl[f].as_str()).unwrap_or("-");
        writeln!(out, "  {:<12} {} -> {}  phi1 = {f}", pl[i], alg.vertex_name(h.start), alg.vertex_name(h.end)).unwrap();
    }
    writeln!(out, "forbidden threads").unwrap();
    for (i, h) in t.forbidden.iter().enumerate() {
        let p = t.phi2[i].map(|p| pl[p].as_str()).unwrap_or("-");
        let crit = if t.critical[i] { "  critical" } else { "" };
        writeln!(out, "  {:<12} {} -> {}  phi2 = {p}{crit}", fl[i], alg.vertex_name(h.start), alg.vertex_name(h.end)).unwrap();
    }
    writeln!(out, "cycles").unwrap();
    for c in &walk {
        let names: Vec<&str> = c.permitted.iter().map(|&h| pl[h].as_str()).collect();
        writeln!(out, "  (n, m) = ({}, {}): {}", c.n, c.m, names.join(" ")).unwrap();
    }
    Ok(out)
}

fn ag(alg: &GentleAlgebra, as_json: bool, dot: bool, par: Parallelism) -> Outcome {
    let (_, objects, orbits) = ag_invariants_with(alg, par)?;
    if dot {
        let mut out = String::from("digraph serre_orbits {\n  rankdir=LR;\n");
        for (k, o) in orbits.iter().enumerate() {
            writeln!(out, "  subgraph cluster_{k} {{\n    label=\"n = {}, m = {}\";", o.n, o.m).unwrap();
            for &(obj, _) in &o.members {
                writeln!(out, "    m{obj} [label=\"{}\"];", objects[obj].label).unwrap();
            }
            for (i, &(obj, s)) in o.members.iter().enumerate() {
                let (next, next_s) = o.members.get(i + 1).copied().unwrap_or((o.members[0].0, o.m));
                writeln!(out, "    m{obj} -> m{next} [label=\"[{}]\"];", next_s - s).unwrap();
            }
            out.push_str("  }\n");
        }
        out.push_str("}\n");
        return Ok(out);
    }
    if as_json {
        let list: Vec<Value> = orbits
            .iter()
            .map(|o| {
                let members: Vec<Value> = o
                    .members
                    .iter()
                    .map(|&(obj, s)| json!({ "thread": objects[obj].label, "word": objects[obj].word.expr(alg), "shift": s }))
                    .collect();
                json!({ "n": o.n, "m": o.m, "members": members })
            })
            .collect();
        return Ok(document(&json!({ "orbits": list })));
    }
    let mut out = String::new();
    for o in &orbits {
        let chain: Vec<String> = o.members.iter().map(|&(obj, s)| format!("{}[{s}]", objects[obj].label)).collect();
        writeln!(out, "(n, m) = ({}, {}): {}", o.n, o.m, chain.join(" -> ")).unwrap();
    }
    if orbits.is_empty() {
        writeln!(out, "no mouth objects").unwrap();
    }
    Ok(out)
}

fn hom(alg: &GentleAlgebra, pair: &Pair, want_profile: bool, as_json: bool, par: Parallelism) -> Outcome {
    let mu = scalar(&pair.scalar)?;
    let x = object(alg, &pair.from, mu)?;
    let y = object(alg, &pair.to, mu)?;
    let dim = hom_k_dim(alg, &x.complex, &y.complex);
    let profile = want_profile.then(|| graded_profile_with(alg, &x.complex, &y.complex, par));
    if as_json {
        let side = |o: &Object| json!({ "word": o.expr, "shift": o.shift, "complex": render::complex(&o.complex) });
        let mut doc = json!({ "from": side(&x), "to": side(&y), "hom": dim });
        if let Some(p) = &profile {
            doc["profile"] = render::profile(p);
        }
        return Ok(document(&doc));
    }
    let mut out = String::new();
    writeln!(out, "X = ({})[{}]", x.expr, x.shift).unwrap();
    out.push_str(&render::complex_text(alg, &x.complex));
    writeln!(out, "Y = ({})[{}]", y.expr, y.shift).unwrap();
    out.push_str(&render::complex_text(alg, &y.complex));
    writeln!(out, "dim Hom(X, Y) = {dim}").unwrap();
    if let Some(p) = &profile {
        writeln!(out, "dim Hom(X, Y[i]): {}", render::profile_text(p)).unwrap();
    }
    Ok(out)
}

fn alp(alg: &GentleAlgebra, pair: &Pair, as_json: bool) -> Outcome {
    let x = object(alg, &pair.from, Q::from_integer(1))?;
    let y = object(alg, &pair.to, Q::from_integer(1))?;
    let (Word::String(v), Word::String(w)) = (&x.word, &y.word) else {
        return Err(Failure::Domain("the combinatorial basis is defined between string complexes only".into()));
    };
    let mut basis = alp_basis(alg, v, -x.shift, w, -y.shift);
    basis.sort();
    let chain_maps = chain_map_space_shifted(alg, &x.complex, &y.complex, 0).dim();
    if basis.len() != chain_maps {
        return Err(Failure::Internal(format!(
            "{} combinatorial maps but the chain-map space has dimension {chain_maps}",
            basis.len()
        )));
    }
    let homotopy = hom_k_dim(alg, &x.complex, &y.complex);
    let mut by_kind: BTreeMap<MapKind, Vec<&CombMap>> = BTreeMap::new();
    for m in &basis {
        by_kind.entry(m.kind).or_default().push(m);
    }
    if as_json {
        let mut kinds = Map::new();
        for kind in [MapKind::Single, MapKind::Double, MapKind::Graph] {
            let maps: Vec<Value> = by_kind
                .get(&kind)
                .map(|ms| {
                    ms.iter()
                        .map(|m| {
                            let comps: Vec<Value> = m
                                .components
                                .iter()
                                .map(|&(j, i, p)| json!({ "source": j, "target": i, "path": component_name(alg, p) }))
                                .collect();
                            Value::Array(comps)
                        })
                        .collect()
                })
                .unwrap_or_default();
            kinds.insert(kind.as_str().to_string(), Value::Array(maps));
        }
        return Ok(document(&json!({
            "from": { "word": x.expr, "shift": x.shift },
            "to": { "word": y.expr, "shift": y.shift },
            "basis": kinds,
            "chain_maps": chain_maps,
            "hom": homotopy,
        })));
    }
    let mut out = String::new();
    writeln!(out, "({})[{}] -> ({})[{}]: {chain_maps} chain maps, dim Hom = {homotopy}", x.expr, x.shift, y.expr, y.shift).unwrap();
    for (kind, maps) in &by_kind {
        writeln!(out, "{} maps", kind.as_str()).unwrap();
        for m in maps {
            let comps: Vec<String> =
                m.components.iter().map(|&(j, i, p)| format!("{j}->{i}:{}", component_name(alg, p))).collect();
            writeln!(out, "  {}", comps.join(" ")).unwrap();
        }
    }
    Ok(out)
}

fn cycle_list(alg: &GentleAlgebra, cycles: &[ExceptionalCycle], as_json: bool, extra: Map<String, Value>) -> String {
    if as_json {
        let mut doc = extra;
        doc.insert("cycles".into(), Value::Array(cycles.iter().map(|c| render::cycle(alg, c)).collect()));
        return document(&Value::Object(doc));
    }
    let mut out = String::new();
    for c in cycles {
        out.push_str(&render::cycle_text(alg, c));
    }
    if cycles.is_empty() {
        out.push_str("no exceptional cycles\n");
    }
    out
}

fn cycles(alg: &GentleAlgebra, verify: bool, as_json: bool, par: Parallelism) -> Outcome {
    let found = classify_exceptional_cycles(alg, par)?;
    let mut extra = Map::new();
    if verify {
        for c in &found {
            let cert = verify_cycle(alg, &c.entries)?;
            if !cert.passed() {
                let words: Vec<String> = c.entries.iter().map(|e| e.object.expr(alg)).collect();
                return Err(Failure::Internal(format!("cycle {words:?} fails verification: {cert:?}")));
            }
        }
        extra.insert("verified".into(), json!(true));
    }
    let mut out = cycle_list(alg, &found, as_json, extra);
    if verify && !as_json {
        out.push_str(&format!("verified {} cycles\n", found.len()));
    }
    Ok(out)
}

fn band_cmd(alg: &GentleAlgebra, expr: &str, mu_text: &str, as_json: bool) -> Outcome {
    let mu = scalar(mu_text)?;
    let band = parse_band(alg, expr)?;
    let verdict = check_band_spherical(alg, &band, mu)?;
    if as_json {
        let e = unfold_band(alg, &band, 0, mu)?;
        return Ok(document(&json!({
            "band": band.expr(alg),
            "scalar": mu.to_string(),
            "spherical": verdict.spherical,
            "profile": render::profile(&verdict.profile),
            "complex": render::complex(&e),
        })));
    }
    Ok(format!(
        "{} at {mu}: self-Hom {}; {}\n",
        band.expr(alg),
        render::profile_text(&verdict.profile),
        if verdict.spherical { "spherical, an exceptional 1-cycle" } else { "not spherical" }
    ))
}

fn search(alg: &GentleAlgebra, max_letters: Option<usize>, shift_window: Option<i32>, as_json: bool, par: Parallelism) -> Outcome {
    let mut bounds = SearchBounds::default_for(alg)?;
    if let Some(n) = max_letters {
        bounds.max_letters = n;
    }
    if let Some(w) = shift_window {
        if w < 0 {
            return Err(Failure::Usage("--shift-window must be non-negative".into()));
        }
        bounds.shift_window = w;
    }
    let found = brute_force_search(alg, bounds, par)?;
    let mut extra = Map::new();
    extra.insert("max_letters".into(), json!(bounds.max_letters));
    extra.insert("shift_window".into(), json!(bounds.shift_window));
    let mut out = String::new();
    if !as_json {
        writeln!(out, "strings up to {} letters, shift window {}", bounds.max_letters, bounds.shift_window).unwrap();
    }
    out.push_str(&cycle_list(alg, &found, as_json, extra));
    Ok(out)
}
