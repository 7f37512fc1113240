use std::fmt::Write;

use exodromy::cat::FinCat;
use exodromy::order::FinPoset;
use exodromy::strat::LayeredCat;

use crate::doc::Document;
use crate::CliError;

/// DOT text for a poset (Hasse diagram), a category (objects and generators)
/// or a layered category (one cluster per stratum, every cross-stratum morphism).
pub fn emit_dot(doc: &Document) -> Result<String, CliError> {
    match doc {
        Document::Poset { poset, .. } => Ok(poset_dot(poset)),
        Document::Category(c) => Ok(category_dot(c)),
        Document::Layered(pi) => Ok(layered_dot(pi)),
        other => Err(CliError::Usage(format!("dot does not support {} documents", other.kind()))),
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn poset_dot(p: &FinPoset) -> String {
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n");
    for a in 0..p.len() {
        writeln!(out, "  n{a} [label={}];", quote(p.label(a))).unwrap();
    }
    for (a, b) in p.covers() {
        writeln!(out, "  n{a} -> n{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

fn category_dot(c: &FinCat) -> String {
    let mut out = String::from("digraph category {\n");
    for x in 0..c.object_count() {
        writeln!(out, "  n{x} [label={}];", quote(c.object_name(x))).unwrap();
    }
    for g in c.generators() {
        let m = c.morphism(g);
        writeln!(out, "  n{} -> n{} [label={}];", m.source, m.target, quote(&m.name)).unwrap();
    }
    out.push_str("}\n");
    out
}

fn layered_dot(pi: &LayeredCat) -> String {
    let c = pi.cat();
    let mut out = String::from("digraph layered {\n  rankdir=LR;\n");
    for p in 0..pi.base().len() {
        writeln!(out, "  subgraph cluster_{p} {{\n    label={};", quote(pi.base().label(p))).unwrap();
        for x in pi.objects_over(p) {
            writeln!(out, "    n{x} [label={}];", quote(c.object_name(x))).unwrap();
        }
        // Generators of the stratum groupoid.
        if let Ok(s) = pi.stratum(p) {
            for g in s.cat.generators() {
                let m = s.cat.morphism(g);
                let (a, b) = (s.objects[m.source], s.objects[m.target]);
                writeln!(out, "    n{a} -> n{b} [label={}];", quote(&m.name)).unwrap();
            }
        }
        out.push_str("  }\n");
    }
    for f in c.non_identities() {
        let m = c.morphism(f);
        if pi.label(m.source) != pi.label(m.target) {
            writeln!(out, "  n{} -> n{} [label={}, style=dashed];", m.source, m.target, quote(&m.name)).unwrap();
        }
    }
    out.push_str("}\n");
    out
}
