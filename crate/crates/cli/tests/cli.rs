use std::path::{Path, PathBuf};
use std::sync::Arc;

use exodromy::cat::FinCat;
use exodromy::decollage::nerve;
use exodromy::galois::{build_curve_level, curve_base_tower, curve_presentation, CurveSpec};
use exodromy::group::FinGroup;
use exodromy::order::{alexandroff, FinPoset, MonotoneMap, PosetTower};
use exodromy::sheaf::{Domain, SetFunctor};
use exodromy::strat::LayeredCat;
use exodromy_cli::doc::Group;
use exodromy_cli::{emit, load, run, CliError, Document, Outcome};

fn exo(args: &[&str]) -> Outcome {
    run(std::iter::once("exo").chain(args.iter().copied()))
}

struct Dir(tempfile::TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn write(&self, name: &str, text: &str) -> String {
        let p: PathBuf = self.0.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    }

    fn doc(&self, name: &str, doc: &Document) -> String {
        self.write(name, &emit(doc))
    }
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn pseudo_circle() -> FinPoset {
    FinPoset::from_relations(labels(&["a", "b", "u", "v"]), &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
}

fn dvr() -> LayeredCat {
    let out = exo(&["dvr"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    match load(&out.stdout).unwrap() {
        Document::Layered(pi) => pi,
        other => panic!("unexpected {}", other.kind()),
    }
}

fn z5_curve() -> CurveSpec {
    let z5 = Arc::new(FinGroup::cyclic(5));
    CurveSpec::new(1, 2, z5.clone(), vec![z5.generator(0), 0, 0]).unwrap()
}

fn every_kind() -> Vec<Document> {
    let pc = pseudo_circle();
    let strat = MonotoneMap::new(pc.clone(), FinPoset::chain(1), vec![0, 0, 1, 1]).unwrap();
    let pi = dvr();
    let sheaf = SetFunctor::constant(pi.cat(), 2);
    vec![
        Document::Poset {
            poset: pc.clone(),
            stratification: Some(strat),
        },
        Document::poset(FinPoset::chain(2)),
        Document::Space(alexandroff(&pc)),
        Document::Category(Arc::new(FinGroup::symmetric(3).to_cat())),
        Document::Layered(pi.clone()),
        Document::Decollage(nerve(&pi)),
        Document::Sheaf {
            layered: pi.clone(),
            functor: sheaf,
        },
        Document::Tower(curve_base_tower(4)),
        Document::Group(Group::Permutations(Arc::new(FinGroup::symmetric(3)))),
        Document::Group(Group::Presentation(curve_presentation(1, 2))),
        Document::Curve(z5_curve()),
    ]
}

#[test]
fn emit_then_load_is_byte_stable_for_every_kind() {
    for doc in every_kind() {
        let text = emit(&doc);
        let again = emit(&load(&text).unwrap());
        assert_eq!(text, again, "{}", doc.kind());
        assert!(text.ends_with("}\n") && !text.contains('\r'));
    }
}

#[test]
fn load_preserves_the_domain_object() {
    for doc in every_kind() {
        let back = load(&emit(&doc)).unwrap();
        match (&doc, &back) {
            (Document::Poset { poset: a, stratification: s }, Document::Poset { poset: b, stratification: t }) => {
                assert_eq!(a, b);
                assert_eq!(s.as_ref().map(|m| m.as_slice().to_vec()), t.as_ref().map(|m| m.as_slice().to_vec()));
            }
            (Document::Category(a), Document::Category(b)) => assert_eq!(a, b),
            (Document::Layered(a), Document::Layered(b)) => assert_eq!(a, b),
            (Document::Tower(a), Document::Tower(b)) => assert_eq!(a, b),
            (Document::Curve(a), Document::Curve(b)) => {
                assert_eq!((a.genus, a.punctures, &a.images), (b.genus, b.punctures, &b.images))
            }
            (Document::Sheaf { functor: a, .. }, Document::Sheaf { functor: b, .. }) => {
                assert_eq!(a.sizes(), b.sizes());
                assert_eq!(a.maps(), b.maps());
            }
            _ => assert_eq!(doc.kind(), back.kind()),
        }
    }
}

#[test]
fn hand_written_input_is_canonicalized() {
    // Non-covering relation, unsorted keys, compact layout.
    let text = r#"{"relations":[["0","2"],["0","1"],["1","2"]],"version":1,"kind":"poset","format":"exodromy","elements":["0","1","2"]}"#;
    let doc = load(text).unwrap();
    let canonical = emit(&doc);
    assert_ne!(canonical, text);
    assert!(!canonical.contains(r#""0",
      "2""#));
    assert_eq!(emit(&load(&canonical).unwrap()), canonical);
}

#[test]
fn poset_document_for_the_arrow() {
    let text = emit(&Document::poset(FinPoset::chain(1)));
    match load(&text).unwrap() {
        Document::Poset { poset, .. } => assert_eq!(poset, FinPoset::chain(1)),
        other => panic!("{}", other.kind()),
    }
}

#[test]
fn non_layered_data_is_a_validation_error() {
    // A non-invertible endomorphism e with e∘e = e over a single point.
    let text = r#"{
      "format": "exodromy", "version": 1, "kind": "layered",
      "base": {"elements": ["p"], "relations": []},
      "category": {
        "objects": ["x"],
        "morphisms": [{"name": "id", "source": 0, "target": 0}, {"name": "e", "source": 0, "target": 0}],
        "identities": [0],
        "composites": [[1, 1, 1]]
      },
      "labels": ["p"]
    }"#;
    match load(text) {
        Err(CliError::Validation(msg)) => assert!(msg.contains("morphism 1"), "{msg}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn curve_document_round_trips_through_the_builder() {
    let d = Dir::new();
    let path = d.doc("curve.json", &Document::Curve(z5_curve()));
    let out = exo(&["curve", &path]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let Document::Layered(pi) = load(&out.stdout).unwrap() else { panic!() };
    assert_eq!(pi, build_curve_level(&z5_curve()).unwrap().layered);
    let x0 = pi.cat().object_index("x0").unwrap();
    let inf = pi.cat().object_index("inf").unwrap();
    assert_eq!(pi.cat().hom(x0, inf).len(), 5);
}

#[test]
fn subdivision_of_the_two_chain_has_seven_strings() {
    let d = Dir::new();
    let path = d.doc("p.json", &Document::poset(FinPoset::chain(2)));
    let out = exo(&["sd", &path]);
    assert_eq!(out.code, 0);
    let Document::Poset { poset, .. } = load(&out.stdout).unwrap() else { panic!() };
    // Nonempty chains of {0 < 1 < 2}: 2^3 - 1.
    assert_eq!(poset.len(), 7);
}

#[test]
fn alexandroff_and_specialization_invert_each_other() {
    let d = Dir::new();
    let path = d.doc("pc.json", &Document::poset(pseudo_circle()));
    let space = exo(&["alexandroff", &path]);
    assert_eq!(space.code, 0);
    let spath = d.write("space.json", &space.stdout);
    let back = exo(&["specialize", &spath]);
    assert_eq!(back.code, 0);
    assert_eq!(back.stdout, std::fs::read_to_string(&path).unwrap());
}

#[test]
fn exodromy_on_the_pseudo_circle() {
    let d = Dir::new();
    let path = d.doc("pc.json", &Document::poset(pseudo_circle()));
    let out = exo(&["exodromy", "--k", "2", &path]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "ok: 4 = 4\n"));
}

#[test]
fn van_kampen_on_the_dvr() {
    let d = Dir::new();
    let path = d.doc("dvr.json", &Document::Layered(dvr()));
    let out = exo(&["vankampen", &path]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "ok: H0=Z, H1=Z/2\n"));
}

#[test]
fn dot_output() {
    let d = Dir::new();
    let arrow = d.doc("arrow.json", &Document::poset(FinPoset::chain(1)));
    let out = exo(&["dot", &arrow]).stdout;
    assert_eq!(out.matches("[label=").count(), 2);
    assert_eq!(out.matches(" -> ").count(), 1);

    let pc = d.doc("pc.json", &Document::poset(pseudo_circle()));
    let out = exo(&["dot", &pc]).stdout;
    assert_eq!((out.matches("[label=").count(), out.matches(" -> ").count()), (4, 4));

    let dvr_path = d.doc("dvr.json", &Document::Layered(dvr()));
    let out = exo(&["dot", &dvr_path]);
    assert_eq!(out.stdout.matches("subgraph cluster_").count(), 2);
    // Hom(s, η) has |S3| = 6 elements.
    assert_eq!(out.stdout.matches("style=dashed").count(), 6);
    assert_eq!(exo(&["dot", &dvr_path]), out);

    let group = d.doc("g.json", &Document::Group(Group::Permutations(Arc::new(FinGroup::cyclic(2)))));
    assert_eq!(exo(&["dot", &group]).code, 2);
}

#[test]
fn poset_commands() {
    let d = Dir::new();
    let pc = d.doc("pc.json", &Document::poset(pseudo_circle()));
    assert_eq!(exo(&["classify-subposet", &pc, "--subset", "a,b"]).stdout, "ok: sieve\n");
    assert_eq!(exo(&["classify-subposet", &pc, "--subset", "u"]).stdout, "ok: cosieve\n");
    assert_eq!(exo(&["classify-subposet", &pc, "--subset", "zzz"]).code, 2);
    assert_eq!(exo(&["homology", &pc, "--max-dim", "2"]).stdout, "ok: H0=Z, H1=Z\n");
    assert_eq!(exo(&["homology", &pc, "--max-dim", "9"]).code, 2);

    // Surjections with an order on the fibres making the map monotone: for
    // two incomparable points, one partition with one block and three orders
    // on the two singleton blocks; for an arrow, one and one.
    let two = d.doc("two.json", &Document::poset(FinPoset::discrete(2)));
    assert!(exo(&["stratifications", &two]).stdout.ends_with("ok: 4 stratifications\n"));
    let arrow = d.doc("arrow.json", &Document::poset(FinPoset::chain(1)));
    assert!(exo(&["stratifications", &arrow]).stdout.ends_with("ok: 2 stratifications\n"));
}

#[test]
fn tower_limit_of_a_constant_tower() {
    let d = Dir::new();
    let t = PosetTower::constant(FinPoset::chain(1), pseudo_circle());
    let path = d.doc("t.json", &Document::Tower(t));
    let out = exo(&["tower-limit", &path]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let Document::Poset { poset, .. } = load(&out.stdout).unwrap() else { panic!() };
    assert!(poset.is_isomorphic(&pseudo_circle()));
}

#[test]
fn nerve_reassemble_and_grothendieck() {
    let d = Dir::new();
    let path = d.doc("dvr.json", &Document::Layered(dvr()));
    let n = exo(&["nerve", &path]);
    assert_eq!(n.code, 0, "{}", n.stderr);
    let npath = d.write("nerve.json", &n.stdout);
    let back = exo(&["reassemble", &npath]);
    assert_eq!(back.code, 0, "{}", back.stderr);
    let Document::Layered(pi) = load(&back.stdout).unwrap() else { panic!() };
    assert_eq!(pi.cat().morphism_count(), dvr().cat().morphism_count());
    let g = exo(&["grothendieck", &npath]);
    assert_eq!(g.code, 0);
    let Document::Category(c) = load(&g.stdout).unwrap() else { panic!() };
    assert!(c.object_count() >= 3);
    let gpath = d.write("g.json", &g.stdout);
    assert_eq!(exo(&["homology", &gpath, "--max-dim", "2"]).stdout, "ok: H0=Z, H1=Z/2\n");
}

#[test]
fn coarsening_to_the_point() {
    let d = Dir::new();
    let path = d.doc("pc.json", &Document::Layered(LayeredCat::over_itself(&pseudo_circle())));
    let out = exo(&["coarsen", &path]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.ends_with("H1=Z\n"), "{}", out.stdout);

    let strat = Document::Poset {
        poset: pseudo_circle(),
        stratification: Some(MonotoneMap::new(pseudo_circle(), FinPoset::chain(1), vec![0, 0, 1, 1]).unwrap()),
    };
    let spath = d.doc("s.json", &strat);
    let out = exo(&["coarsen", &path, "--to", &spath]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("0 inverted"), "{}", out.stdout);
}

#[test]
fn sheaf_commands() {
    let d = Dir::new();
    let pi = dvr();
    let sheaf = Document::Sheaf {
        layered: pi.clone(),
        functor: SetFunctor::constant(pi.cat(), 2),
    };
    let path = d.doc("f.json", &sheaf);
    let out = exo(&["recollement", &path, "--sieve", "0"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("ok: round trip"));
    let out = exo(&["beck-chevalley", &path, "--sieve", "0"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    // {1} is not downward closed in 0 < 1.
    assert_eq!(exo(&["recollement", &path, "--sieve", "1"]).code, 1);
}

#[test]
fn functor_counts_on_the_arrow() {
    // Pairs (a, b) of sizes at most 2 with a map a -> b: 3 + 3 + 5 = 11; up
    // to isomorphism 3 with a = 0, 2 with a = 1, and 1 + 2 with a = 2.
    let d = Dir::new();
    let path = d.doc("arrow.json", &Document::poset(FinPoset::chain(1)));
    assert_eq!(exo(&["count-functors", &path, "--k", "2"]).stdout, "ok: 11 functors, 8 iso classes\n");
    let capped = exo(&["count-functors", &path, "--k", "2", "--cap", "5"]);
    assert_eq!(capped.code, 1);
    assert!(capped.stderr.contains("cap exceeded"));
}

#[test]
fn h1_of_groups_and_curves() {
    let d = Dir::new();
    let curve = d.doc("c.json", &Document::Curve(z5_curve()));
    assert_eq!(exo(&["h1-presentation", &curve]).stdout, "ok: H1=Z^2 (rank 2, torsion none)\n");
    let s3 = d.doc("s3.json", &Document::Group(Group::Permutations(Arc::new(FinGroup::symmetric(3)))));
    assert_eq!(exo(&["h1-presentation", &s3]).stdout, "ok: H1=Z/2 (rank 0, torsion [2])\n");
    let torus = d.doc("t.json", &Document::Group(Group::Presentation(curve_presentation(2, 3))));
    assert_eq!(exo(&["h1-presentation", &torus]).code, 0);
}

#[test]
fn galois_commands() {
    let d = Dir::new();
    let pi = dvr();
    let path = d.doc("dvr.json", &Document::Layered(pi.clone()));
    let ids: Vec<String> = (0..pi.cat().morphism_count()).map(|m| m.to_string()).collect();
    let out = exo(&["classify-morphism", &path, &path, "--objects", "0,1", "--morphisms", &ids.join(",")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("fibration: left+right+kan, fibers [1, 1]"), "{}", out.stdout);

    let out = exo(&["localize", &path, "--object", "s"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let out = exo(&["normalize", &path, "--object", "eta"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("weakly terminal: yes"), "{}", out.stdout);
    assert_eq!(exo(&["localize", &path, "--object", "nowhere"]).code, 2);
}

#[test]
fn dvr_flags_build_other_triples() {
    let d = Dir::new();
    let z4 = d.doc("z4.json", &Document::Group(Group::Permutations(Arc::new(FinGroup::cyclic(4)))));
    let z2 = d.doc("z2.json", &Document::Group(Group::Permutations(Arc::new(FinGroup::cyclic(2)))));
    let out = exo(&[
        "dvr",
        "--generic",
        &z4,
        "--special",
        &z2,
        "--decomposition",
        "(1 2 3 4)",
        "--to-special",
        "(1 2)",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let Document::Layered(pi) = load(&out.stdout).unwrap() else { panic!() };
    // Hom(s, η) = G_U / I with inertia I = ker(D -> G_Z) of order 2.
    assert_eq!(pi.cat().hom(0, 1).len(), 2);
}

#[test]
fn exit_codes() {
    let d = Dir::new();
    let good = d.doc("good.json", &Document::poset(FinPoset::chain(1)));
    let garbled = d.write("bad.json", "{\"format\": \"exodromy\", \"version\": 1, \"kind\": \"poset\", ");
    let wrong_version = d.write("v.json", &emit(&Document::poset(FinPoset::chain(1))).replace("\"version\": 1", "\"version\": 7"));
    let cyclic = d.write(
        "cyc.json",
        r#"{"format":"exodromy","version":1,"kind":"poset","elements":["a","b"],"relations":[["a","b"],["b","a"]]}"#,
    );
    assert_eq!(exo(&["validate", &good]).code, 0);
    assert_eq!(exo(&["validate", &cyclic]).code, 1);
    let parse = exo(&["validate", &garbled]);
    assert_eq!(parse.code, 2);
    assert!(parse.stderr.contains("line"), "{}", parse.stderr);
    assert_eq!(exo(&["validate", &wrong_version]).code, 2);
    assert_eq!(exo(&["validate", "/nonexistent/file.json"]).code, 2);
    assert_eq!(exo(&["frobnicate"]).code, 2);
    assert_eq!(exo(&["exodromy", &good, "--k", "two"]).code, 2);
    assert_eq!(exo(&["--version"]).code, 0);
    assert!(exo(&["--version"]).stdout.contains("format 1"));
}

#[test]
fn binary_matches_the_library() {
    let d = Dir::new();
    let path = d.doc("pc.json", &Document::poset(pseudo_circle()));
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_exo"))
        .args(["exodromy", "--k", "2", &path])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "ok: 4 = 4\n");
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_exo"))
        .args(["validate", Path::new(&path).with_extension("missing").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn category_documents_keep_duplicate_names() {
    // Curve-level categories name every cross arrow "*".
    let pi = build_curve_level(&z5_curve()).unwrap().layered;
    let c: &FinCat = pi.cat();
    let text = emit(&Document::Category(pi.cat().clone()));
    let Document::Category(back) = load(&text).unwrap() else { panic!() };
    assert_eq!(&*back, c);
    let _ = Domain::Cat(back);
}
