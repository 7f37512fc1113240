//! Canonical JSON documents for every kind of domain object.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use exodromy::cat::{FinCat, Functor, MorphismData, RawCategory};
use exodromy::decollage::Decollage;
use exodromy::galois::CurveSpec;
use exodromy::group::{cycle_notation, parse_cycles, FinGroup, GroupPresentation};
use exodromy::order::{subdivision, FinPoset, FiniteSpace, MonotoneMap, PosetTower};
use exodromy::sheaf::{Domain, SetFunctor};
use exodromy::strat::LayeredCat;

use crate::CliError;

pub const FORMAT: &str = "exodromy";
pub const FORMAT_VERSION: u32 = 1;

/// A validated domain object.
#[derive(Clone, Debug)]
pub enum Document {
    Poset {
        poset: FinPoset,
        stratification: Option<MonotoneMap>,
    },
    Space(FiniteSpace),
    Category(Arc<FinCat>),
    Layered(LayeredCat),
    Decollage(Decollage),
    Sheaf {
        layered: LayeredCat,
        functor: SetFunctor,
    },
    Tower(PosetTower),
    Group(Group),
    Curve(CurveSpec),
}

#[derive(Clone, Debug)]
pub enum Group {
    Permutations(Arc<FinGroup>),
    Presentation(GroupPresentation),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Poset { .. } => "poset",
            Document::Space(_) => "space",
            Document::Category(_) => "category",
            Document::Layered(_) => "layered",
            Document::Decollage(_) => "decollage",
            Document::Sheaf { .. } => "sheaf",
            Document::Tower(_) => "tower",
            Document::Group(_) => "group",
            Document::Curve(_) => "curve",
        }
    }

    pub fn poset(poset: FinPoset) -> Self {
        Document::Poset {
            poset,
            stratification: None,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct File {
    format: String,
    version: u32,
    #[serde(flatten)]
    body: Body,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Body {
    Poset(PosetDoc),
    Space(SpaceDoc),
    Category(CategoryDoc),
    Layered(LayeredDoc),
    Decollage(DecollageDoc),
    Sheaf(SheafDoc),
    Tower(TowerDoc),
    Group(GroupDoc),
    Curve(CurveDoc),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PosetDoc {
    elements: Vec<String>,
    /// Generating pairs `a <= b`; emitted as cover relations.
    relations: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stratification: Option<StratificationDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StratificationDoc {
    target: Box<PosetDoc>,
    /// Image of each element, by label.
    map: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceDoc {
    points: Vec<String>,
    opens: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CategoryDoc {
    objects: Vec<String>,
    morphisms: Vec<MorphismDoc>,
    identities: Vec<usize>,
    /// `[g, f, h]` for `g ∘ f = h`; composites with identities may be omitted.
    composites: Vec<[usize; 3]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismDoc {
    name: String,
    source: usize,
    target: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayeredDoc {
    base: PosetDoc,
    category: CategoryDoc,
    /// Base label of each object.
    labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecollageDoc {
    base: PosetDoc,
    values: Vec<ValueDoc>,
    restrictions: Vec<RestrictionDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ValueDoc {
    string: Vec<String>,
    category: CategoryDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RestrictionDoc {
    from: Vec<String>,
    to: Vec<String>,
    objects: Vec<usize>,
    morphisms: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SheafDoc {
    layered: LayeredDoc,
    sizes: Vec<usize>,
    maps: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TowerDoc {
    index: PosetDoc,
    nodes: Vec<PosetDoc>,
    bonds: Vec<BondDoc>,
}

/// The map from the stage at `fine` to the stage at `coarse`, for `coarse < fine`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BondDoc {
    coarse: String,
    fine: String,
    map: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    permutations: Option<PermutationsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    presentation: Option<PresentationDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PermutationsDoc {
    degree: usize,
    /// Cycle notation, 1-based.
    generators: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationDoc {
    generators: Vec<String>,
    /// Words as `[generator, exponent]` letters.
    relators: Vec<Vec<(String, i8)>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveDoc {
    genus: usize,
    punctures: usize,
    group: PermutationsDoc,
    /// Images of `a_1, b_1, …, a_g, b_g, c_1, …, c_{n-1}` in cycle notation.
    images: Vec<String>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn lookup(labels: &[String], name: &str, what: &str) -> Result<usize, CliError> {
    labels
        .iter()
        .position(|l| l == name)
        .ok_or_else(|| invalid(format!("unknown {what} {name:?}")))
}

/// Parses and validates a document.
pub fn load(text: &str) -> Result<Document, CliError> {
    let file: File = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    if file.format != FORMAT {
        return Err(CliError::Parse(format!("unknown format {:?}", file.format)));
    }
    if file.version != FORMAT_VERSION {
        return Err(CliError::Parse(format!("unsupported format version {}", file.version)));
    }
    match file.body {
        Body::Poset(d) => {
            let poset = poset_from(&d)?;
            let stratification = d
                .stratification
                .as_ref()
                .map(|s| {
                    let target = poset_from(&s.target)?;
                    if s.target.stratification.is_some() {
                        return Err(invalid("a stratification target cannot be stratified"));
                    }
                    let map = s
                        .map
                        .iter()
                        .map(|l| lookup(target.labels(), l, "stratum"))
                        .collect::<Result<_, _>>()?;
                    MonotoneMap::new(poset.clone(), target, map).map_err(|e| invalid(e.to_string()))
                })
                .transpose()?;
            Ok(Document::Poset { poset, stratification })
        }
        Body::Space(d) => {
            let opens = d
                .opens
                .iter()
                .map(|u| u.iter().map(|l| lookup(&d.points, l, "point")).collect())
                .collect::<Result<_, _>>()?;
            Ok(Document::Space(
                FiniteSpace::new(d.points, opens).map_err(|e| invalid(e.to_string()))?,
            ))
        }
        Body::Category(d) => Ok(Document::Category(Arc::new(category_from(d)?))),
        Body::Layered(d) => Ok(Document::Layered(layered_from(d)?)),
        Body::Decollage(d) => Ok(Document::Decollage(decollage_from(d)?)),
        Body::Sheaf(d) => {
            let layered = layered_from(d.layered)?;
            let functor = SetFunctor::new(Domain::Cat(layered.cat().clone()), d.sizes, d.maps)
                .map_err(|e| invalid(e.to_string()))?;
            Ok(Document::Sheaf { layered, functor })
        }
        Body::Tower(d) => {
            let index = plain_poset(&d.index)?;
            let nodes: Vec<FinPoset> = d.nodes.iter().map(plain_poset).collect::<Result<_, _>>()?;
            let mut bonds = BTreeMap::new();
            for b in &d.bonds {
                let i = lookup(index.labels(), &b.coarse, "index element")?;
                let j = lookup(index.labels(), &b.fine, "index element")?;
                let (coarse, fine) = (
                    nodes.get(i).ok_or_else(|| invalid("fewer nodes than index elements"))?,
                    nodes.get(j).ok_or_else(|| invalid("fewer nodes than index elements"))?,
                );
                let map = b
                    .map
                    .iter()
                    .map(|l| lookup(coarse.labels(), l, "element"))
                    .collect::<Result<_, _>>()?;
                let m = MonotoneMap::new(fine.clone(), coarse.clone(), map).map_err(|e| invalid(e.to_string()))?;
                if bonds.insert((i, j), m).is_some() {
                    return Err(invalid(format!("bond {} -> {} given twice", b.fine, b.coarse)));
                }
            }
            Ok(Document::Tower(
                PosetTower::new(index, nodes, bonds).map_err(|e| invalid(e.to_string()))?,
            ))
        }
        Body::Group(d) => match (d.permutations, d.presentation) {
            (Some(p), None) => Ok(Document::Group(Group::Permutations(Arc::new(group_from(&p)?)))),
            (None, Some(p)) => {
                let relators = p
                    .relators
                    .iter()
                    .map(|w| {
                        w.iter()
                            .map(|(g, e)| Ok((lookup(&p.generators, g, "generator")?, *e)))
                            .collect::<Result<Vec<_>, CliError>>()
                    })
                    .collect::<Result<_, _>>()?;
                Ok(Document::Group(Group::Presentation(GroupPresentation {
                    generators: p.generators,
                    relators,
                })))
            }
            _ => Err(invalid("a group needs exactly one of permutations and presentation")),
        },
        Body::Curve(d) => {
            let group = Arc::new(group_from(&d.group)?);
            let images = d
                .images
                .iter()
                .map(|s| element_of(&group, s))
                .collect::<Result<_, _>>()?;
            Ok(Document::Curve(
                CurveSpec::new(d.genus, d.punctures, group, images).map_err(|e| invalid(e.to_string()))?,
            ))
        }
    }
}

/// Canonical text: sorted keys, two-space indentation, trailing newline.
pub fn emit(doc: &Document) -> String {
    let body = match doc {
        Document::Poset { poset, stratification } => {
            let mut d = poset_doc(poset);
            d.stratification = stratification.as_ref().map(|s| StratificationDoc {
                target: Box::new(poset_doc(s.target())),
                map: s.as_slice().iter().map(|&p| s.target().label(p).to_string()).collect(),
            });
            Body::Poset(d)
        }
        Document::Space(x) => {
            let name = |i: &usize| x.labels()[*i].clone();
            Body::Space(SpaceDoc {
                points: x.labels().to_vec(),
                opens: x.opens().iter().map(|u| u.iter().map(name).collect()).collect(),
            })
        }
        Document::Category(c) => Body::Category(category_doc(c)),
        Document::Layered(pi) => Body::Layered(layered_doc(pi)),
        Document::Decollage(d) => Body::Decollage(decollage_doc(d)),
        Document::Sheaf { layered, functor } => Body::Sheaf(SheafDoc {
            layered: layered_doc(layered),
            sizes: functor.sizes().to_vec(),
            maps: functor.maps().to_vec(),
        }),
        Document::Tower(t) => Body::Tower(TowerDoc {
            index: poset_doc(t.index()),
            nodes: t.nodes().iter().map(poset_doc).collect(),
            bonds: t
                .bonds()
                .iter()
                .map(|(&(i, j), m)| BondDoc {
                    coarse: t.index().label(i).to_string(),
                    fine: t.index().label(j).to_string(),
                    map: m.as_slice().iter().map(|&a| m.target().label(a).to_string()).collect(),
                })
                .collect(),
        }),
        Document::Group(Group::Permutations(g)) => Body::Group(GroupDoc {
            permutations: Some(permutations_doc(g)),
            presentation: None,
        }),
        Document::Group(Group::Presentation(p)) => Body::Group(GroupDoc {
            permutations: None,
            presentation: Some(PresentationDoc {
                generators: p.generators.clone(),
                relators: p
                    .relators
                    .iter()
                    .map(|w| w.iter().map(|&(g, e)| (p.generators[g].clone(), e)).collect())
                    .collect(),
            }),
        }),
        Document::Curve(s) => Body::Curve(CurveDoc {
            genus: s.genus,
            punctures: s.punctures,
            group: permutations_doc(&s.group),
            images: s.images.iter().map(|&i| cycle_notation(s.group.element(i))).collect(),
        }),
    };
    let file = File {
        format: FORMAT.into(),
        version: FORMAT_VERSION,
        body,
    };
    // Round-tripping through `Value` sorts every object's keys.
    let value = serde_json::to_value(&file).expect("documents serialize");
    let mut text = serde_json::to_string_pretty(&value).expect("values serialize");
    text.push('\n');
    text
}

fn plain_poset(d: &PosetDoc) -> Result<FinPoset, CliError> {
    if d.stratification.is_some() {
        return Err(invalid("a stratification is only allowed on a top-level poset"));
    }
    poset_from(d)
}

fn poset_from(d: &PosetDoc) -> Result<FinPoset, CliError> {
    let pairs = d
        .relations
        .iter()
        .map(|[a, b]| Ok((lookup(&d.elements, a, "element")?, lookup(&d.elements, b, "element")?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    FinPoset::from_relations(d.elements.clone(), &pairs).map_err(|e| invalid(e.to_string()))
}

fn poset_doc(p: &FinPoset) -> PosetDoc {
    PosetDoc {
        elements: p.labels().to_vec(),
        relations: p
            .covers()
            .into_iter()
            .map(|(a, b)| [p.label(a).to_string(), p.label(b).to_string()])
            .collect(),
        stratification: None,
    }
}

fn category_from(d: CategoryDoc) -> Result<FinCat, CliError> {
    let raw = RawCategory {
        objects: d.objects,
        morphisms: d
            .morphisms
            .into_iter()
            .map(|m| MorphismData {
                name: m.name,
                source: m.source,
                target: m.target,
            })
            .collect(),
        identities: d.identities,
        composites: d.composites.iter().map(|&[g, f, h]| (g, f, h)).collect(),
        inverses: Vec::new(),
    };
    raw.build().map_err(|e| invalid(e.to_string()))
}

fn category_doc(c: &FinCat) -> CategoryDoc {
    let raw = c.to_raw();
    let mut composites: Vec<[usize; 3]> = raw.composites.iter().map(|&(g, f, h)| [g, f, h]).collect();
    composites.sort_unstable();
    CategoryDoc {
        objects: raw.objects,
        morphisms: raw
            .morphisms
            .into_iter()
            .map(|m| MorphismDoc {
                name: m.name,
                source: m.source,
                target: m.target,
            })
            .collect(),
        identities: raw.identities,
        composites,
    }
}

fn layered_from(d: LayeredDoc) -> Result<LayeredCat, CliError> {
    let base = plain_poset(&d.base)?;
    let labels = d
        .labels
        .iter()
        .map(|l| lookup(base.labels(), l, "base point"))
        .collect::<Result<_, _>>()?;
    let cat = category_from(d.category)?;
    LayeredCat::new(Arc::new(cat), base, labels).map_err(|e| invalid(e.to_string()))
}

fn layered_doc(pi: &LayeredCat) -> LayeredDoc {
    LayeredDoc {
        base: poset_doc(pi.base()),
        category: category_doc(pi.cat()),
        labels: pi.labels().iter().map(|&p| pi.base().label(p).to_string()).collect(),
    }
}

fn string_index(base: &FinPoset, sd: &exodromy::order::Subdivision, labels: &[String]) -> Result<usize, CliError> {
    let mut s = labels
        .iter()
        .map(|l| lookup(base.labels(), l, "base point"))
        .collect::<Result<Vec<_>, _>>()?;
    s.sort_unstable();
    sd.index_of(&s)
        .ok_or_else(|| invalid(format!("{labels:?} is not a chain of the base")))
}

fn decollage_from(d: DecollageDoc) -> Result<Decollage, CliError> {
    let base = plain_poset(&d.base)?;
    let sd = subdivision(&base);
    let mut values: Vec<Option<Arc<FinCat>>> = vec![None; sd.len()];
    for v in d.values {
        let i = string_index(&base, &sd, &v.string)?;
        if values[i].replace(Arc::new(category_from(v.category)?)).is_some() {
            return Err(invalid(format!("value at {:?} given twice", v.string)));
        }
    }
    let values: Vec<Arc<FinCat>> = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| invalid(format!("missing value at {}", sd.poset.label(i)))))
        .collect::<Result<_, _>>()?;
    let mut restrictions = BTreeMap::new();
    for r in d.restrictions {
        let (i, j) = (string_index(&base, &sd, &r.from)?, string_index(&base, &sd, &r.to)?);
        let f = Functor::new(values[i].clone(), values[j].clone(), r.objects, r.morphisms)
            .map_err(|e| invalid(e.to_string()))?;
        restrictions.insert((i, j), f);
    }
    let d = Decollage::new(base, values, restrictions).map_err(|e| invalid(e.to_string()))?;
    d.validate().map_err(|e| invalid(e.to_string()))?;
    Ok(d)
}

fn decollage_doc(d: &Decollage) -> DecollageDoc {
    let sd = d.subdivision();
    let string = |i: usize| -> Vec<String> { sd.strings[i].iter().map(|&p| d.base().label(p).to_string()).collect() };
    DecollageDoc {
        base: poset_doc(d.base()),
        values: d
            .values()
            .iter()
            .enumerate()
            .map(|(i, v)| ValueDoc {
                string: string(i),
                category: category_doc(v),
            })
            .collect(),
        restrictions: d
            .restrictions()
            .iter()
            .map(|(&(i, j), f)| RestrictionDoc {
                from: string(i),
                to: string(j),
                objects: f.object_map().to_vec(),
                morphisms: f.morphism_map().to_vec(),
            })
            .collect(),
    }
}

fn group_from(d: &PermutationsDoc) -> Result<FinGroup, CliError> {
    let gens: Vec<&str> = d.generators.iter().map(String::as_str).collect();
    FinGroup::from_cycles(d.degree, &gens).map_err(|e| invalid(e.to_string()))
}

fn permutations_doc(g: &FinGroup) -> PermutationsDoc {
    PermutationsDoc {
        degree: g.degree(),
        generators: g.generators().iter().map(|p| cycle_notation(p)).collect(),
    }
}

/// The element of `g` written in cycle notation.
pub fn element_of(g: &FinGroup, cycles: &str) -> Result<usize, CliError> {
    let p = parse_cycles(g.degree(), cycles).map_err(|e| invalid(e.to_string()))?;
    g.index_of(&p)
        .ok_or_else(|| invalid(format!("{cycles} is not in the group")))
}

/// Resolves object or morphism references given as names (when unique) or indices.
pub fn resolve(names: &[String], token: &str, what: &str) -> Result<usize, CliError> {
    let mut hits = names.iter().enumerate().filter(|(_, n)| *n == token);
    match (hits.next(), hits.next()) {
        (Some((i, _)), None) => Ok(i),
        _ => match token.parse::<usize>() {
            Ok(i) if i < names.len() => Ok(i),
            _ => Err(CliError::Usage(format!("unknown or ambiguous {what} {token:?}"))),
        },
    }
}

/// Index of each name, for names that occur once.
pub fn unique_names(names: &[String]) -> HashMap<&str, usize> {
    let mut count: HashMap<&str, usize> = HashMap::new();
    for n in names {
        *count.entry(n).or_default() += 1;
    }
    names
        .iter()
        .enumerate()
        .filter(|(_, n)| count[n.as_str()] == 1)
        .map(|(i, n)| (n.as_str(), i))
        .collect()
}
