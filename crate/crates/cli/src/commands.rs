use std::io::Read;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use exodromy::cat::{Functor, FinCat};
use exodromy::decollage::nerve;
use exodromy::galois::{
    build_curve_level, build_two_stratum, classify_gal_morphism, curve_presentation, localize_normalize,
};
use exodromy::group::{FinGroup, GroupHom};
use exodromy::homology::{
    grothendieck, homology_groups, low_homology, nerve_complex, pres_cat_h1, presentation_h1, van_kampen_check,
    AbelianGroup, HomologyError, MAX_NERVE_DIM,
};
use exodromy::order::{
    alexandroff, classify_subposet, enumerate_stratifications, specialization_poset, subdivision, FinPoset,
    MonotoneMap,
};
use exodromy::sheaf::{
    beck_chevalley_check, count_functor_iso_classes, exodromy_check, recollement_round_trip, Domain, Recollement,
    SheafError,
    DEFAULT_FUNCTOR_CAP,
};
use exodromy::strat::LayeredCat;

use crate::doc::{element_of, emit, load, resolve, Document, Group};
use crate::dot::emit_dot;
use crate::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "exo",
    version = concat!(env!("CARGO_PKG_VERSION"), " (document format 1)"),
    about = "Finite stratified spaces, layered categories, décollages and constructible sheaves"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Documents are read from a path, or from standard input for `-`.
#[derive(Subcommand, Debug)]
pub enum Command {
    /// Load and validate a document of any kind.
    Validate { input: String },
    /// Alexandroff space of a poset.
    Alexandroff { input: String },
    /// Specialization poset of a T0 space.
    Specialize { input: String },
    /// Subdivision (poset of strings) of a poset.
    Sd { input: String },
    /// Whether a subset of a poset is a sieve, cosieve, interval or none.
    ClassifySubposet {
        input: String,
        /// Comma-separated element labels.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        subset: Vec<String>,
    },
    /// Stratifications of a poset, one per isomorphism class of target.
    Stratifications { input: String },
    /// Limit of a tower of posets.
    TowerLimit { input: String },
    /// Décollage of a layered category.
    Nerve { input: String },
    /// Layered category glued from a décollage.
    Reassemble { input: String },
    /// Presentation of a layered category localized along a stratification of its base.
    Coarsen {
        input: String,
        /// Poset document equal to the base and carrying the stratification; defaults to the point.
        #[arg(long)]
        to: Option<String>,
    },
    /// Compare constructible sheaves with functors on the exit-path category.
    Exodromy {
        input: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_FUNCTOR_CAP)]
        cap: usize,
    },
    /// Decompose a sheaf along a closed sieve and glue it back.
    Recollement {
        input: String,
        #[arg(long, value_delimiter = ',')]
        sieve: Vec<String>,
    },
    /// Base change for the closed sieve, applied to the sheaf restricted to the open complement.
    BeckChevalley {
        input: String,
        #[arg(long, value_delimiter = ',')]
        sieve: Vec<String>,
    },
    /// Integral homology of the nerve of a poset, category or layered category.
    Homology {
        input: String,
        #[arg(long, default_value_t = MAX_NERVE_DIM)]
        max_dim: usize,
    },
    /// First homology of a group (presentation or permutations) or a curve group.
    H1Presentation { input: String },
    /// Total category of a décollage.
    Grothendieck { input: String },
    /// Compare (H0, H1) of a layered category with that of its glued décollage.
    Vankampen { input: String },
    /// Curve-level layered category.
    Curve { input: String },
    /// Two-stratum layered category from D ⊆ G_U and D -> G_Z; defaults to (Z/2, S3, <(1 2)>).
    Dvr {
        /// Group document for G_U, permutations.
        #[arg(long)]
        generic: Option<String>,
        /// Group document for G_Z, permutations.
        #[arg(long)]
        special: Option<String>,
        /// Generators of D as elements of G_U, separated by ';'.
        #[arg(long)]
        decomposition: Option<String>,
        /// Images of those generators in G_Z, separated by ';'.
        #[arg(long)]
        to_special: Option<String>,
    },
    /// Fibration and image tags of a functor between layered categories.
    ClassifyMorphism {
        source: String,
        target: String,
        /// Image of each source object, by name or index.
        #[arg(long, value_delimiter = ',')]
        objects: Vec<String>,
        /// Image of each source morphism, by name or index.
        #[arg(long, value_delimiter = ',')]
        morphisms: Vec<String>,
    },
    /// Coslice at an object and whether it has a weakly initial object.
    Localize {
        input: String,
        #[arg(long)]
        object: String,
    },
    /// Slice at an object and whether the object is weakly terminal in it.
    Normalize {
        input: String,
        #[arg(long)]
        object: String,
    },
    /// Functors to finite sets of size at most k, up to isomorphism.
    CountFunctors {
        input: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_FUNCTOR_CAP)]
        cap: usize,
    },
    /// DOT graph of a poset, category or layered category.
    Dot { input: String },
}

fn read(path: &str) -> Result<Document, CliError> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Usage(format!("cannot read standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?
    };
    load(&text)
}

fn wrong_kind(doc: &Document, expected: &str) -> CliError {
    CliError::Usage(format!("expected a {expected} document, got {}", doc.kind()))
}

fn read_poset(path: &str) -> Result<(FinPoset, Option<MonotoneMap>), CliError> {
    match read(path)? {
        Document::Poset { poset, stratification } => Ok((poset, stratification)),
        other => Err(wrong_kind(&other, "poset")),
    }
}

fn read_layered(path: &str) -> Result<LayeredCat, CliError> {
    match read(path)? {
        Document::Layered(pi) => Ok(pi),
        other => Err(wrong_kind(&other, "layered")),
    }
}

fn read_permutations(path: &str) -> Result<Arc<FinGroup>, CliError> {
    match read(path)? {
        Document::Group(Group::Permutations(g)) => Ok(g),
        other => Err(wrong_kind(&other, "permutation group")),
    }
}

/// The underlying category of a poset, category or layered document.
fn as_category(doc: &Document) -> Result<Arc<FinCat>, CliError> {
    match doc {
        Document::Poset { poset, .. } => Ok(Arc::new(FinCat::from_poset(poset))),
        Document::Category(c) => Ok(c.clone()),
        Document::Layered(pi) => Ok(pi.cat().clone()),
        other => Err(wrong_kind(other, "poset, category or layered")),
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

fn sheaf_error(e: SheafError) -> CliError {
    match e {
        SheafError::CapExceeded(cap) => CliError::CapExceeded(format!("more than {cap} functors; raise --cap")),
        other => invalid(other),
    }
}

fn base_points(base: &FinPoset, labels: &[String]) -> Result<Vec<usize>, CliError> {
    let mut out = labels
        .iter()
        .filter(|l| !l.is_empty())
        .map(|l| {
            base.index_of(l)
                .ok_or_else(|| CliError::Usage(format!("unknown base point {l:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn groups_line(groups: &[AbelianGroup]) -> String {
    groups
        .iter()
        .enumerate()
        .map(|(n, g)| format!("H{n}={g}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn sheaf_doc(path: &str) -> Result<(LayeredCat, exodromy::sheaf::SetFunctor), CliError> {
    match read(path)? {
        Document::Sheaf { layered, functor } => Ok((layered, functor)),
        other => Err(wrong_kind(&other, "sheaf")),
    }
}

fn cycles_list(text: &str) -> Vec<&str> {
    text.split(';').map(str::trim).filter(|s| !s.is_empty()).collect()
}

/// Runs the command and returns what it prints on success.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Validate { input } => {
            let doc = read(input)?;
            Ok(format!("ok: valid {}\n", doc.kind()))
        }
        Command::Alexandroff { input } => {
            let (p, _) = read_poset(input)?;
            Ok(emit(&Document::Space(alexandroff(&p))))
        }
        Command::Specialize { input } => match read(input)? {
            Document::Space(x) => Ok(emit(&Document::poset(specialization_poset(&x).map_err(invalid)?))),
            other => Err(wrong_kind(&other, "space")),
        },
        Command::Sd { input } => {
            let (p, _) = read_poset(input)?;
            Ok(emit(&Document::poset(subdivision(&p).poset)))
        }
        Command::ClassifySubposet { input, subset } => {
            let (p, _) = read_poset(input)?;
            let s = subset
                .iter()
                .filter(|l| !l.is_empty())
                .map(|l| p.index_of(l).ok_or_else(|| CliError::Usage(format!("unknown element {l:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let kind = classify_subposet(&p, &s).map_err(invalid)?;
            Ok(format!("ok: {}\n", kind.as_str()))
        }
        Command::Stratifications { input } => {
            let (p, _) = read_poset(input)?;
            let all = enumerate_stratifications(&p);
            let mut out = String::new();
            for (i, s) in all.iter().enumerate() {
                let parts: Vec<String> = (0..p.len()).map(|a| format!("{}->{}", p.label(a), s.apply(a))).collect();
                out.push_str(&format!("{i}: {} strata: {}\n", s.target().len(), parts.join(" ")));
            }
            out.push_str(&format!("ok: {} stratifications\n", all.len()));
            Ok(out)
        }
        Command::TowerLimit { input } => match read(input)? {
            Document::Tower(t) => Ok(emit(&Document::poset(t.limit().poset))),
            other => Err(wrong_kind(&other, "tower")),
        },
        Command::Nerve { input } => Ok(emit(&Document::Decollage(nerve(&read_layered(input)?)))),
        Command::Reassemble { input } => match read(input)? {
            Document::Decollage(d) => Ok(emit(&Document::Layered(d.reassemble().map_err(invalid)?.layered))),
            other => Err(wrong_kind(&other, "decollage")),
        },
        Command::Coarsen { input, to } => {
            let pi = read_layered(input)?;
            let s = match to {
                None => MonotoneMap::to_point(pi.base()),
                Some(path) => {
                    let (q, s) = read_poset(path)?;
                    if &q != pi.base() {
                        return Err(CliError::Usage("the stratified poset must equal the base".into()));
                    }
                    s.ok_or_else(|| CliError::Usage("the poset document has no stratification".into()))?
                }
            };
            let p = pi.coarsen(&s).map_err(invalid)?;
            Ok(format!("ok: {p}; H1={}\n", pres_cat_h1(&p)))
        }
        Command::Exodromy { input, k, cap } => {
            let (p, s) = read_poset(input)?;
            let s = s.unwrap_or_else(|| MonotoneMap::to_point(&p));
            let r = exodromy_check(&s, *k, *cap).map_err(sheaf_error)?;
            if r.holds {
                Ok(format!("ok: {} = {}\n", r.constructible, r.exit_path))
            } else {
                Err(CliError::Failed(format!("{} != {}", r.constructible, r.exit_path)))
            }
        }
        Command::Recollement { input, sieve } => {
            let (pi, f) = sheaf_doc(input)?;
            let z = base_points(pi.base(), sieve)?;
            let r = recollement_round_trip(&pi, &z, &f).map_err(sheaf_error)?;
            let line = format!(
                "closed sizes {:?}, open sizes {:?}",
                r.triple.closed.sizes(),
                r.triple.open.sizes()
            );
            if r.ok {
                Ok(format!("ok: round trip is isomorphic; {line}\n"))
            } else {
                Err(CliError::Failed(format!("reassembled sheaf differs; {line}")))
            }
        }
        Command::BeckChevalley { input, sieve } => {
            let (pi, f) = sheaf_doc(input)?;
            let z = base_points(pi.base(), sieve)?;
            let open = Recollement::new(&pi, &z).map_err(sheaf_error)?;
            let f = f.pullback(&open.j).map_err(sheaf_error)?;
            let r = beck_chevalley_check(&pi, &z, &f).map_err(sheaf_error)?;
            let line = format!("left sizes {:?}, right sizes {:?}", r.left.sizes(), r.right.sizes());
            if r.holds {
                Ok(format!("ok: comparison is a bijection; {line}\n"))
            } else {
                Err(CliError::Failed(format!("comparison is not a bijection; {line}")))
            }
        }
        Command::Homology { input, max_dim } => {
            let c = as_category(&read(input)?)?;
            if *max_dim == 0 {
                return Err(CliError::Usage("--max-dim must be at least 1".into()));
            }
            let k = nerve_complex(&c, *max_dim).map_err(|e| match e {
                HomologyError::DimensionTooLarge(_) => CliError::Usage(e.to_string()),
                other => invalid(other),
            })?;
            let groups = (0..*max_dim)
                .map(|n| homology_groups(&k, n).map_err(invalid))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(format!("ok: {}\n", groups_line(&groups)))
        }
        Command::H1Presentation { input } => {
            let h1 = match read(input)? {
                Document::Group(Group::Presentation(p)) => presentation_h1(&p),
                Document::Group(Group::Permutations(g)) => low_homology(&g.to_cat()).1,
                Document::Curve(s) => presentation_h1(&curve_presentation(s.genus, s.punctures)),
                other => return Err(wrong_kind(&other, "group or curve")),
            };
            let torsion = if h1.torsion.is_empty() {
                "none".to_string()
            } else {
                format!("{:?}", h1.torsion)
            };
            Ok(format!("ok: H1={h1} (rank {}, torsion {torsion})\n", h1.rank))
        }
        Command::Grothendieck { input } => match read(input)? {
            Document::Decollage(d) => Ok(emit(&Document::Category(Arc::new(grothendieck(&d))))),
            other => Err(wrong_kind(&other, "decollage")),
        },
        Command::Vankampen { input } => {
            let r = van_kampen_check(&read_layered(input)?);
            let (direct, glued) = (
                groups_line(&[r.direct.0.clone(), r.direct.1.clone()]),
                groups_line(&[r.glued.0.clone(), r.glued.1.clone()]),
            );
            if r.holds {
                Ok(format!("ok: {direct}\n"))
            } else {
                Err(CliError::Failed(format!("nerve gives {direct}; glued décollage gives {glued}")))
            }
        }
        Command::Curve { input } => match read(input)? {
            Document::Curve(s) => Ok(emit(&Document::Layered(build_curve_level(&s).map_err(invalid)?.layered))),
            other => Err(wrong_kind(&other, "curve")),
        },
        Command::Dvr {
            generic,
            special,
            decomposition,
            to_special,
        } => {
            let gu = match generic {
                Some(p) => read_permutations(p)?,
                None => Arc::new(FinGroup::symmetric(3)),
            };
            let gz = match special {
                Some(p) => read_permutations(p)?,
                None => Arc::new(FinGroup::cyclic(2)),
            };
            let d_gens = cycles_list(decomposition.as_deref().unwrap_or("(1 2)"));
            let images = cycles_list(to_special.as_deref().unwrap_or("(1 2)"));
            if d_gens.len() != images.len() {
                return Err(CliError::Usage("--decomposition and --to-special need the same length".into()));
            }
            let d = Arc::new(FinGroup::from_cycles(gu.degree(), &d_gens).map_err(invalid)?);
            let images = images
                .iter()
                .map(|c| element_of(&gz, c))
                .collect::<Result<Vec<_>, _>>()?;
            let to_z = GroupHom::new(d.clone(), gz.clone(), images).map_err(invalid)?;
            let to_u = GroupHom::inclusion(d, gu.clone()).map_err(invalid)?;
            let g = build_two_stratum(gz, gu, to_z, to_u).map_err(invalid)?;
            Ok(emit(&Document::Layered(g.layered)))
        }
        Command::ClassifyMorphism {
            source,
            target,
            objects,
            morphisms,
        } => {
            let (from, to) = (read_layered(source)?, read_layered(target)?);
            let (a, b) = (from.cat(), to.cat());
            let obj = objects
                .iter()
                .map(|t| resolve(b.objects(), t, "object"))
                .collect::<Result<Vec<_>, _>>()?;
            let names: Vec<String> = b.morphisms().iter().map(|m| m.name.clone()).collect();
            let mor = morphisms
                .iter()
                .map(|t| resolve(&names, t, "morphism"))
                .collect::<Result<Vec<_>, _>>()?;
            let f = Functor::new(a.clone(), b.clone(), obj, mor).map_err(invalid)?;
            let tags = classify_gal_morphism(&f, &from, &to).map_err(invalid)?;
            let fibration = match &tags.fibration {
                None => "none".to_string(),
                Some(r) => {
                    let kinds: Vec<&str> = [(r.left, "left"), (r.right, "right"), (r.kan, "kan")]
                        .iter()
                        .filter(|(b, _)| *b)
                        .map(|&(_, s)| s)
                        .collect();
                    let kinds = if kinds.is_empty() { "none".to_string() } else { kinds.join("+") };
                    format!("{kinds}, fibers {:?}", r.fiber_sizes)
                }
            };
            Ok(format!(
                "image: {}\nimmersion: {}\nfibration: {fibration}\nfinite fibers: {}\nradicial-like: {}\nok: tags [{}]\n",
                tags.image_kind.as_str(),
                yes(tags.immersion),
                yes(tags.finite_fibers),
                yes(tags.radicial_like),
                tags.tags.join(", ")
            ))
        }
        Command::Localize { input, object } | Command::Normalize { input, object } => {
            let pi = read_layered(input)?;
            let x = resolve(pi.cat().objects(), object, "object")?;
            let r = localize_normalize(&pi, x).map_err(invalid)?;
            let name = pi.cat().object_name(x);
            let describe = |c: &LayeredCat| {
                format!(
                    "{} objects over {} base points, h0 with {} elements",
                    c.cat().object_count(),
                    c.base().len(),
                    c.h0().poset.len()
                )
            };
            Ok(match &cli.command {
                Command::Localize { .. } => format!(
                    "ok: coslice at {name}: {}; weakly initial object: {}\n",
                    describe(&r.coslice),
                    yes(r.weakly_initial)
                ),
                _ => format!(
                    "ok: slice at {name}: {}; {name} weakly terminal: {}\n",
                    describe(&r.slice),
                    yes(r.weakly_terminal)
                ),
            })
        }
        Command::CountFunctors { input, k, cap } => {
            let c = as_category(&read(input)?)?;
            let classes = count_functor_iso_classes(&Domain::Cat(c), *k, *cap).map_err(sheaf_error)?;
            Ok(format!("ok: {} functors, {} iso classes\n", classes.functors, classes.count))
        }
        Command::Dot { input } => emit_dot(&read(input)?),
    }
}
