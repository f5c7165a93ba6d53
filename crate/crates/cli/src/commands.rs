use std::fs;
use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use fsd_core::boolfn::{
    classify, differential_table, gold_scan, graph_fsd_check, transform_graph, walsh_table, BinaryField,
    LinearizedPolynomial, VectorialFunction,
};
use fsd_core::codes::{
    char_sum_distance_identity_check, count_zero_charsums_and_zero_nu, distance_enumerator_poly,
    formal_dual_codes_check, gray_image, macwilliams_transform, weight_enumerator_poly, z4_dual, z4_span, Alphabet,
    CodeSet,
};
use fsd_core::constructions::{gaussian_example, lattice_example, paley_self_dual, sporadic_order64, tito, OddField};
use fsd_core::duality::{
    is_formally_dual_pair, is_formally_self_dual, quick_dual_pair, quick_self_dual, reduce_to_primitive,
};
use fsd_core::evenset::{canonical_fsd_coefficients, canonical_symmetry_holds, even_decomposition, zero_sum_check};
use fsd_core::search::{search_fd_pairs, search_fsd, Canonicalization, PairingChoice, SearchSpec};
use fsd_core::{Error, Group, Pairing, Result, SetInGroup};
use num_rational::BigRational;

use crate::report::Report;
use crate::{
    BoolfnCmd, Cli, CodeInput, CodesCmd, Command, ConstructCmd, EnumeratorKind, FunctionArgs, SearchArgs, TargetArgs,
};

/// Serialized (pairing, set) bundle read by `--bundle` and written by `construct`.
#[derive(Debug, Serialize, Deserialize)]
pub struct Bundle {
    pub group: String,
    pub pairing: Vec<Vec<i64>>,
    pub set: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_set: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Bundle {
    fn new(p: &Pairing, s: &SetInGroup) -> Self {
        Bundle { group: s.group().to_string(), pairing: p.spec().matrix, set: s.literals(), dual_set: None, note: None }
    }
}

pub fn dispatch(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Verify(a) => verify(a, cli.verify_exact),
        Command::Reduce(t) => reduce(t),
        Command::Evenset(t) => evenset(t),
        Command::Construct(c) => construct(c),
        Command::Boolfn(b) => boolfn(b),
        Command::Codes(c) => codes(c),
        Command::Search(s) => search(s),
    }
}

fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse_group(s: &str) -> Result<Group> {
    s.parse()
}

/// `standard`, an inline matrix, or a file containing a matrix.
fn parse_pairing_arg(g: &Group, s: &str) -> Result<Pairing> {
    let t = s.trim();
    let text =
        if t.eq_ignore_ascii_case("standard") || t.starts_with('[') { t.to_string() } else { read_text(Path::new(t))? };
    fsd_core::abelian::parse_pairing(g, &text)
}

fn set_literal(items: &[String]) -> String {
    format!("{{{}}}", items.join(","))
}

fn load_target(t: &TargetArgs) -> Result<(Pairing, SetInGroup, Option<SetInGroup>)> {
    if let Some(path) = &t.bundle {
        let b: Bundle = serde_json::from_str(&read_text(path)?)
            .map_err(|e| Error::Parse(format!("bundle {}: {e}", path.display())))?;
        let g = parse_group(&b.group)?;
        let p = Pairing::new(&g, b.pairing)?;
        let s = SetInGroup::parse(&g, &set_literal(&b.set))?;
        let dual = b.dual_set.map(|d| SetInGroup::parse(&g, &set_literal(&d))).transpose()?;
        return Ok((p, s, dual));
    }
    let g = parse_group(t.group.as_deref().expect("clap requires --group"))?;
    let p = parse_pairing_arg(&g, &t.pairing)?;
    let s = SetInGroup::parse(&g, t.set.as_deref().expect("clap requires --set"))?;
    Ok((p, s, None))
}

fn verify(a: &crate::VerifyArgs, exact: bool) -> Result<Report> {
    let (p, s, bundled_dual) = load_target(&a.target)?;
    let dual = match &a.dual {
        Some(lit) => Some(SetInGroup::parse(s.group(), lit)?),
        None => bundled_dual,
    };
    let label = if dual.is_some() { "formally dual" } else { "formally self dual" };
    if !exact {
        let v = match &dual {
            Some(t) => quick_dual_pair(&p, &s, t)?,
            None => quick_self_dual(&p, &s)?,
        };
        let mut r = Report::new(json!({ "verdict": v }));
        r.line(format!("{label}: {v}"));
        return Ok(r.verdict(v));
    }
    let cert = match &dual {
        Some(t) => is_formally_dual_pair(&p, &s, t)?,
        None => is_formally_self_dual(&p, &s)?,
    };
    let mut r = Report::new(serde_json::to_value(&cert).expect("certificate serializes"));
    r.line(format!("{label}: {}", cert.verdict));
    r.line(format!("group: {}, pairing: {}, |S| = {}", cert.group, p, s.len()));
    if let Some(c) = cert.size_condition {
        r.line(format!("|S|^2 = |G|: {c}"));
    }
    if let Some(v) = cert.first_violation() {
        r.line(format!(
            "first violation: g = {}, nu = {}, expected = {}, |chi|^2 = {}",
            v.element,
            v.nu,
            v.expected,
            v.norm.as_deref().unwrap_or("irrational")
        ));
    }
    if a.table {
        r.line(format!("{:<12} {:>6} {:>10} {:>10}", "g", "nu", "expected", "|chi|^2"));
        for row in &cert.table {
            r.line(format!(
                "{:<12} {:>6} {:>10} {:>10}",
                row.element,
                row.nu,
                row.expected,
                row.norm.as_deref().unwrap_or("irrational")
            ));
        }
    }
    Ok(r.verdict(cert.verdict))
}

fn reduce(t: &TargetArgs) -> Result<Report> {
    let (p, s, _) = load_target(t)?;
    if !quick_self_dual(&p, &s)? {
        let mut r = Report::new(json!({ "formally_self_dual": false }));
        r.line("formally self dual: false");
        return Ok(r.verdict(false));
    }
    let red = reduce_to_primitive(&p, &s)?;
    let all_verified = red.trace.iter().all(|st| st.verified);
    let mut r = Report::new(json!({
        "steps": red.trace,
        "group": red.set.group().to_string(),
        "pairing": red.pairing.spec().matrix,
        "set": red.set.literals(),
        "trivial": red.set.group().is_trivial(),
    }));
    for (i, st) in red.trace.iter().enumerate() {
        r.line(format!(
            "step {}: {} lies in a coset of {}; quotient {} with set {}; verified: {}",
            i + 1,
            set_literal(&st.set),
            set_literal(&st.coset_subgroup),
            st.quotient,
            set_literal(&st.quotient_set),
            st.verified
        ));
    }
    r.line(format!("primitive: {} in {} under {}", red.set, red.set.group(), red.pairing));
    r.line(format!("trivial: {}", red.set.group().is_trivial()));
    Ok(r.verdict(all_verified))
}

fn evenset(t: &TargetArgs) -> Result<Report> {
    let (p, s, _) = load_target(t)?;
    let Some(mu) = even_decomposition(&s)? else {
        let mut r = Report::new(json!({ "even": false }));
        r.line("even decomposition: none");
        return Ok(r.verdict(false));
    };
    let lambda = canonical_fsd_coefficients(&p, &s, &mu)?;
    let zero_sum = zero_sum_check(&p, &s, &mu)?;
    let direct = quick_self_dual(&p, &s)?;
    if zero_sum != direct {
        return Err(Error::Inconsistent(format!("zero-sum check {zero_sum} disagrees with direct verdict {direct}")));
    }
    let symmetric = if direct { Some(canonical_symmetry_holds(&p, &s, &lambda)?) } else { None };
    let mut r = Report::new(json!({
        "mu": mu.serialize_terms(),
        "lambda": lambda.serialize_terms(),
        "zero_sum": zero_sum,
        "formally_self_dual": direct,
        "symmetry_laws": symmetric,
    }));
    r.line(format!("mu: {mu}"));
    r.line(format!("lambda: {lambda}"));
    r.line(format!("zero-sum check: {zero_sum}"));
    r.line(format!("formally self dual: {direct}"));
    if let Some(v) = symmetric {
        r.line(format!("symmetry laws: {v}"));
    }
    Ok(r.verdict(zero_sum))
}

fn construct(c: &ConstructCmd) -> Result<Report> {
    let bundle = match c {
        ConstructCmd::Tito => {
            let (p, s) = tito();
            Bundle::new(&p, &s)
        }
        ConstructCmd::Lattice { n } => {
            let (p, s) = lattice_example(*n)?;
            Bundle::new(&p, &s)
        }
        ConstructCmd::Gaussian { p, alpha } => {
            let (pairing, s) = gaussian_example(*p, *alpha)?;
            Bundle::new(&pairing, &s)
        }
        ConstructCmd::Paley { p, m, alpha, beta } => {
            let field = OddField::new(*p, *m)?;
            let b = paley_self_dual(&field, *alpha, *beta)?;
            let mut out = Bundle::new(&b.composed_pairing, &b.s);
            out.note = Some(format!("D* = {}", if b.dstar_is_d { "D" } else { "D^(-1)" }));
            out
        }
        ConstructCmd::Sporadic { index } => {
            let all = sporadic_order64();
            let (p, s) = index
                .checked_sub(1)
                .and_then(|i| all.get(i))
                .ok_or_else(|| Error::Domain(format!("sporadic index must be 1..={}, got {index}", all.len())))?;
            Bundle::new(p, s)
        }
    };
    let value = serde_json::to_value(&bundle).expect("bundle serializes");
    let mut r = Report::new(value.clone());
    r.line(serde_json::to_string_pretty(&value).expect("bundle serializes"));
    Ok(r)
}

fn load_function(a: &FunctionArgs) -> Result<VectorialFunction> {
    let spec = a.field.trim();
    let field = if spec.chars().all(|c| c.is_ascii_digit()) {
        BinaryField::new(spec.parse().map_err(|e| Error::Parse(format!("degree {spec:?}: {e}")))?)?
    } else {
        BinaryField::parse(spec)?
    };
    VectorialFunction::parse(Arc::new(field), &a.function)
}

fn boolfn(b: &BoolfnCmd) -> Result<Report> {
    match b {
        BoolfnCmd::Classify(a) => {
            let f = load_function(a)?;
            let c = classify(&f)?;
            let mut r = Report::new(serde_json::to_value(&c).expect("classification serializes"));
            r.line(format!("bijective: {}", c.bijective));
            r.line(format!("apn: {}", c.apn));
            r.line(format!("ab: {}", c.ab));
            if let Some(n) = &c.note {
                r.line(format!("note: {n}"));
            }
            Ok(r)
        }
        BoolfnCmd::Graph(a) => {
            let f = load_function(a)?;
            let cert = graph_fsd_check(&f)?;
            let mut r = Report::new(serde_json::to_value(&cert).expect("certificate serializes"));
            r.line(format!("graph formally self dual: {}", cert.verdict));
            if let Some(v) = cert.first_violation() {
                r.line(format!(
                    "first violation: (a,b) = {}, delta = {}, W^2 = {}",
                    v.element,
                    v.nu,
                    v.norm.as_deref().unwrap_or("?")
                ));
            }
            Ok(r.verdict(cert.verdict))
        }
        BoolfnCmd::Walsh(a) => {
            let f = load_function(a)?;
            let t = walsh_table(&f)?;
            Ok(table_report((0..t.size()).map(|a| t.row(a as u32).to_vec()).collect()))
        }
        BoolfnCmd::Differential(a) => {
            let f = load_function(a)?;
            let t = differential_table(&f)?;
            Ok(table_report((0..t.size()).map(|a| t.row(a as u32).to_vec()).collect()))
        }
        BoolfnCmd::Transform { f, l1, l2 } => {
            let func = load_function(f)?;
            let field = func.field().clone();
            let l1 = LinearizedPolynomial::parse(field.clone(), l1)?;
            let l2 = LinearizedPolynomial::parse(field, l2)?;
            let g = transform_graph(&func, &l1, &l2)?;
            let verdict = graph_fsd_check(&g)?.verdict;
            let values: Vec<String> = g.values().iter().map(|v| v.to_string()).collect();
            let mut r = Report::new(json!({ "table": g.values(), "graph_formally_self_dual": verdict }));
            r.line(format!("function: table:[{}]", values.join(",")));
            r.line(format!("graph formally self dual: {verdict}"));
            Ok(r.verdict(verdict))
        }
        BoolfnCmd::GoldScan { n, i } => {
            let mut rows = Vec::new();
            for &deg in n {
                let is: Vec<u32> = if i.is_empty() { (1..deg).collect() } else { i.clone() };
                rows.extend(gold_scan(&[deg], &is)?);
            }
            let mut r = Report::new(serde_json::to_value(&rows).expect("rows serialize"));
            r.line(format!("{:>3} {:>3} {:>9}  graph self dual", "n", "i", "exponent"));
            for row in &rows {
                let v = match (row.verdict, &row.note) {
                    (Some(v), _) => v.to_string(),
                    (None, Some(note)) => format!("skipped ({note})"),
                    (None, None) => "skipped".into(),
                };
                r.line(format!("{:>3} {:>3} {:>9}  {v}", row.n, row.i, row.exponent));
            }
            Ok(r)
        }
    }
}

fn table_report<T: ToString + Serialize>(rows: Vec<Vec<T>>) -> Report {
    let mut r = Report::new(serde_json::to_value(&rows).expect("table serializes"));
    for (a, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(T::to_string).collect();
        r.line(format!("{a}: {}", cells.join(" ")));
    }
    r
}

fn load_code(path: &Path, alphabet: Option<&str>) -> Result<CodeSet> {
    let a = alphabet.map(Alphabet::parse).transpose()?;
    CodeSet::parse(&read_text(path)?, a)
}

fn load_input(c: &CodeInput) -> Result<CodeSet> {
    load_code(&c.input, c.alphabet.as_deref())
}

fn codes(c: &CodesCmd) -> Result<Report> {
    match c {
        CodesCmd::Enumerators(input) => {
            let code = load_input(input)?;
            let w = weight_enumerator_poly(&code);
            let d = distance_enumerator_poly(&code);
            let mut r = Report::new(json!({
                "alphabet": code.alphabet().to_string(),
                "size": code.len(),
                "weight": w.coefficient_line(),
                "distance": d.coefficient_line(),
            }));
            r.line(format!("alphabet: {}, length: {}, words: {}", code.alphabet(), code.length(), code.len()));
            r.line(format!("weight enumerator: {w}"));
            r.line(format!("distance enumerator: {d}"));
            Ok(r)
        }
        CodesCmd::Macwilliams { code, of } => {
            let code = load_input(code)?;
            let e = match of {
                EnumeratorKind::Weight => weight_enumerator_poly(&code),
                EnumeratorKind::Distance => distance_enumerator_poly(&code),
            };
            let size = BigRational::from_integer(code.len().into());
            let t = macwilliams_transform(&e, code.alphabet().q(), &size)?;
            let mut r = Report::new(json!({ "coefficients": t.coefficient_line(), "polynomial": t.to_string() }));
            r.line(t.to_string());
            Ok(r)
        }
        CodesCmd::DualCheck { code, other } => {
            let a = load_input(code)?;
            let b = load_code(other, code.alphabet.as_deref())?;
            let d = formal_dual_codes_check(&a, &b)?;
            let mut r = Report::new(json!({
                "weight_dual": d.weight_dual,
                "distance_dual": d.distance_dual,
                "formal_dual_codes": d.formal_dual_codes(),
            }));
            r.line(format!("weight enumerators dual: {}", d.weight_dual));
            r.line(format!("distance enumerators dual: {}", d.distance_dual));
            r.line(format!("formal dual codes: {}", d.formal_dual_codes()));
            Ok(r.verdict(d.formal_dual_codes()))
        }
        CodesCmd::Gray(input) => {
            let image = gray_image(&load_input(input)?)?;
            let words: Vec<String> = image.words().iter().map(|w| w.iter().map(|s| s.to_string()).collect()).collect();
            let mut r = Report::new(json!({ "words": words }));
            r.line(image.to_string().trim_end().to_string());
            Ok(r)
        }
        CodesCmd::Z4Span(input) => {
            let gens = load_input(input)?;
            let rows: Vec<Vec<i64>> = gens.words().iter().map(|w| w.iter().map(|&s| s as i64).collect()).collect();
            let span = z4_span(&rows, gens.length())?;
            let mut r = Report::new(json!({ "words": span.words() }));
            r.line(span.to_string().trim_end().to_string());
            Ok(r)
        }
        CodesCmd::Z4Dual(input) => {
            let dual = z4_dual(&load_input(input)?)?;
            let mut r = Report::new(json!({ "words": dual.words() }));
            r.line(dual.to_string().trim_end().to_string());
            Ok(r)
        }
        CodesCmd::Identity(input) => {
            let code = load_input(input)?;
            let v = char_sum_distance_identity_check(&code)?;
            let mut r = Report::new(json!({ "identity_holds": v }));
            r.line(format!("character-sum identity: {v}"));
            Ok(r.verdict(v))
        }
        CodesCmd::ZeroCounts { code, other } => {
            let a = load_input(code)?;
            let b = load_code(other, code.alphabet.as_deref())?;
            let (zs, zn) = count_zero_charsums_and_zero_nu(&a, &b)?;
            let mut r = Report::new(json!({ "zero_char_sums": zs, "zero_nu": zn }));
            r.line(format!("zero character sums of C: {zs}"));
            r.line(format!("zero difference counts of C': {zn}"));
            Ok(r)
        }
    }
}

fn search(a: &SearchArgs) -> Result<Report> {
    let g = parse_group(&a.group)?;
    let pairing = if a.pairing.trim().eq_ignore_ascii_case("all") {
        PairingChoice::All
    } else {
        PairingChoice::Fixed(parse_pairing_arg(&g, &a.pairing)?)
    };
    let mut spec = SearchSpec::new(&g, pairing, a.size);
    spec.prune = !a.no_prune;
    spec.budget_nodes = a.budget_nodes;
    spec.max_order = a.max_order;
    if a.all_translates {
        spec.canonicalization = Canonicalization::None;
    }
    if let Some(seed) = &a.seed_prefix {
        spec = spec.with_seed(&SetInGroup::parse(&g, seed)?.members());
    }
    if let Some(dir) = &a.emit_certificates {
        fs::create_dir_all(dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
    }
    let emit = |i: usize, json: String| -> Result<()> {
        if let Some(dir) = &a.emit_certificates {
            let path = dir.join(format!("hit_{i:04}.json"));
            fs::write(&path, json).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        }
        Ok(())
    };
    let mut r;
    if a.pairs {
        let rep = search_fd_pairs(&spec)?;
        let hits: Vec<_> = rep
            .hits
            .iter()
            .map(|h| json!({ "pairing": h.pairing.spec().matrix, "s": h.s.literals(), "t": h.t.literals() }))
            .collect();
        r = Report::new(json!({ "hits": hits, "complete": rep.complete, "nodes": rep.nodes }));
        for (i, h) in rep.hits.iter().enumerate() {
            r.line(format!("{}  {}  pairing {}", h.s, h.t, h.pairing));
            if a.emit_certificates.is_some() {
                emit(i, is_formally_dual_pair(&h.pairing, &h.s, &h.t)?.to_json())?;
            }
        }
        r.line(format!("pairs: {}, nodes: {}, complete: {}", rep.hits.len(), rep.nodes, rep.complete));
    } else {
        let rep = search_fsd(&spec)?;
        let hits: Vec<_> = rep
            .hits
            .iter()
            .map(|h| json!({ "pairing": h.pairing.spec().matrix, "set": h.set.literals(), "primitivity": h.primitivity }))
            .collect();
        r = Report::new(json!({ "hits": hits, "complete": rep.complete, "nodes": rep.nodes }));
        for (i, h) in rep.hits.iter().enumerate() {
            r.line(format!("{}  {}  pairing {}", h.set, h.primitivity, h.pairing));
            if a.emit_certificates.is_some() {
                emit(i, is_formally_self_dual(&h.pairing, &h.set)?.to_json())?;
            }
        }
        r.line(format!("hits: {}, nodes: {}, complete: {}", rep.hits.len(), rep.nodes, rep.complete));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundle_round_trip() {
        let (p, s) = tito();
        let text = serde_json::to_string(&Bundle::new(&p, &s)).unwrap();
        let b: Bundle = serde_json::from_str(&text).unwrap();
        assert_eq!(b.group, "Z4");
        assert_eq!(b.pairing, vec![vec![1]]);
        assert_eq!(set_literal(&b.set), "{0,1}");
    }

    #[test]
    fn pairing_argument_forms() {
        let g = parse_group("Z2xZ2").unwrap();
        assert!(parse_pairing_arg(&g, "standard").unwrap().is_standard());
        assert!(!parse_pairing_arg(&g, "[[0,1],[1,0]]").unwrap().is_standard());
        assert!(parse_pairing_arg(&g, "/nonexistent/pairing.json").is_err());
    }
}
