//! Finite categories with explicit composition tables.

mod comma;
mod equivalence;
mod fiber;
mod fibration;
mod functor;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

use crate::order::FinPoset;

pub use comma::{comma, coslice, slice, Comma};
pub use equivalence::{are_equivalent, are_equivalent_with, Equivalence};
pub use fiber::{pair_fiber, PairFiber};
pub use fibration::{classify_fibration, FibrationReport};
pub use functor::{Functor, FunctorViolation};

const NONE: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatError {
    #[error("category axioms violated: {}", format_list(.0))]
    Invalid(Vec<CategoryViolation>),
    #[error("not a functor: {}", format_list(.0))]
    InvalidFunctor(Vec<FunctorViolation>),
    #[error("functors do not share the required category")]
    Mismatch,
    #[error("search cap of {0} steps exceeded")]
    CapExceeded(usize),
    #[error("functor is not an isofibration: iso {iso} at object {object} has no lift")]
    NotIsofibration { object: usize, iso: usize },
    #[error("unknown object {0}")]
    UnknownObject(usize),
}

pub(crate) fn format_list<T: fmt::Display>(items: &[T]) -> String {
    let shown: Vec<String> = items.iter().take(5).map(|v| v.to_string()).collect();
    let more = items.len().saturating_sub(5);
    if more > 0 {
        format!("{} (and {more} more)", shown.join("; "))
    } else {
        shown.join("; ")
    }
}

/// One failed axiom of a candidate category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CategoryViolation {
    BadEndpoint { morphism: usize },
    BadIdentity { object: usize },
    MissingComposite { g: usize, f: usize },
    NotComposable { g: usize, f: usize },
    WrongCompositeEndpoints { g: usize, f: usize, h: usize },
    ConflictingComposite { g: usize, f: usize },
    LeftUnit { f: usize },
    RightUnit { f: usize },
    Associativity { h: usize, g: usize, f: usize },
    NotInverse { f: usize, g: usize },
}

impl fmt::Display for CategoryViolation {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CategoryViolation::*;
        match *self {
            BadEndpoint { morphism } => write!(fm, "morphism {morphism} has an unknown endpoint"),
            BadIdentity { object } => write!(fm, "identity of object {object} is not an endomorphism of it"),
            MissingComposite { g, f } => write!(fm, "composite {g}∘{f} is missing"),
            NotComposable { g, f } => write!(fm, "composite {g}∘{f} given for a non-composable pair"),
            WrongCompositeEndpoints { g, f, h } => {
                write!(fm, "composite {g}∘{f} = {h} has the wrong endpoints")
            }
            ConflictingComposite { g, f } => write!(fm, "composite {g}∘{f} given twice with different values"),
            LeftUnit { f } => write!(fm, "left unit law fails at {f}"),
            RightUnit { f } => write!(fm, "right unit law fails at {f}"),
            Associativity { h, g, f } => write!(fm, "({h}∘{g})∘{f} != {h}∘({g}∘{f})"),
            NotInverse { f, g } => write!(fm, "{f} and {g} are declared inverse but do not compose to identities"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MorphismData {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// Unvalidated category data: everything a document or a builder supplies.
///
/// Composites involving an identity may be omitted; they are synthesized.
#[derive(Clone, Debug, Default)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismData>,
    pub identities: Vec<usize>,
    /// `(g, f, h)` meaning `g ∘ f = h`.
    pub composites: Vec<(usize, usize, usize)>,
    /// Pairs claimed to be mutually inverse.
    pub inverses: Vec<(usize, usize)>,
}

impl RawCategory {
    /// Every violated axiom; empty iff the data define a category.
    pub fn validate(&self) -> Vec<CategoryViolation> {
        match self.table() {
            Ok(cat) => cat.check_axioms(&self.inverses),
            Err(v) => v,
        }
    }

    pub fn build(self) -> Result<FinCat, CatError> {
        let cat = self.table().map_err(CatError::Invalid)?;
        let violations = cat.check_axioms(&self.inverses);
        if violations.is_empty() {
            Ok(cat)
        } else {
            Err(CatError::Invalid(violations))
        }
    }

    fn table(&self) -> Result<FinCat, Vec<CategoryViolation>> {
        use CategoryViolation::*;
        let n = self.objects.len();
        let m = self.morphisms.len();
        let mut bad = Vec::new();
        for (i, mor) in self.morphisms.iter().enumerate() {
            if mor.source >= n || mor.target >= n {
                bad.push(BadEndpoint { morphism: i });
            }
        }
        if self.identities.len() != n {
            bad.extend((self.identities.len()..n).map(|object| BadIdentity { object }));
        }
        for (x, &id) in self.identities.iter().enumerate() {
            if id >= m || self.morphisms[id].source != x || self.morphisms[id].target != x {
                bad.push(BadIdentity { object: x });
            }
        }
        if !bad.is_empty() {
            return Err(bad);
        }
        let mut table = vec![NONE; m * m];
        let mut explicit = vec![false; m * m];
        for &(g, f, h) in &self.composites {
            if g >= m || f >= m || h >= m {
                bad.push(MissingComposite { g, f });
                continue;
            }
            let (mg, mf, mh) = (&self.morphisms[g], &self.morphisms[f], &self.morphisms[h]);
            if mg.source != mf.target {
                bad.push(NotComposable { g, f });
                continue;
            }
            if mh.source != mf.source || mh.target != mg.target {
                bad.push(WrongCompositeEndpoints { g, f, h });
                continue;
            }
            let slot = &mut table[g * m + f];
            if *slot != NONE && *slot != h as u32 {
                bad.push(ConflictingComposite { g, f });
            }
            *slot = h as u32;
            explicit[g * m + f] = true;
        }
        // Synthesize unit composites that were not given.
        for (x, &id) in self.identities.iter().enumerate() {
            for (f, mor) in self.morphisms.iter().enumerate() {
                if mor.target == x && table[id * m + f] == NONE {
                    table[id * m + f] = f as u32;
                }
                if mor.source == x && table[f * m + id] == NONE {
                    table[f * m + id] = f as u32;
                }
            }
        }
        for g in 0..m {
            for f in 0..m {
                if self.morphisms[g].source == self.morphisms[f].target && table[g * m + f] == NONE {
                    bad.push(MissingComposite { g, f });
                }
            }
        }
        if !bad.is_empty() {
            return Err(bad);
        }
        Ok(FinCat::assemble(
            self.objects.clone(),
            self.morphisms.clone(),
            self.identities.clone(),
            table,
        ))
    }
}

/// A finite category with a total composition table on composable pairs.
#[derive(Clone, PartialEq, Eq)]
pub struct FinCat {
    objects: Vec<String>,
    morphisms: Vec<MorphismData>,
    identities: Vec<usize>,
    table: Vec<u32>,
    hom: Vec<Vec<usize>>,
}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FinCat({} objects, {} morphisms)",
            self.objects.len(),
            self.morphisms.len()
        )
    }
}

impl FinCat {
    fn assemble(
        objects: Vec<String>,
        morphisms: Vec<MorphismData>,
        identities: Vec<usize>,
        table: Vec<u32>,
    ) -> Self {
        let n = objects.len();
        let mut hom = vec![Vec::new(); n * n];
        for (i, mor) in morphisms.iter().enumerate() {
            hom[mor.source * n + mor.target].push(i);
        }
        FinCat {
            objects,
            morphisms,
            identities,
            table,
            hom,
        }
    }

    /// Builds a category from morphisms identified by keys, composing keys with
    /// `compose(g, f)`. The key operation is trusted to be associative; the
    /// table is checked for closure and the unit laws.
    pub fn from_keys<K: Eq + Hash + Clone>(
        objects: Vec<String>,
        morphisms: Vec<(K, MorphismData)>,
        identity: impl Fn(usize) -> K,
        compose: impl Fn(&K, &K) -> K,
    ) -> Result<FinCat, CatError> {
        let n = objects.len();
        let m = morphisms.len();
        let index: HashMap<&K, usize> = morphisms.iter().enumerate().map(|(i, (k, _))| (k, i)).collect();
        let mut bad = Vec::new();
        let identities: Vec<usize> = (0..n)
            .map(|x| match index.get(&identity(x)) {
                Some(&i) => i,
                None => {
                    bad.push(CategoryViolation::BadIdentity { object: x });
                    0
                }
            })
            .collect();
        if !bad.is_empty() {
            return Err(CatError::Invalid(bad));
        }
        let data: Vec<MorphismData> = morphisms.iter().map(|(_, d)| d.clone()).collect();
        let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, d) in data.iter().enumerate() {
            by_source[d.source].push(i);
        }
        let mut table = vec![NONE; m * m];
        for f in 0..m {
            for &g in &by_source[data[f].target] {
                let key = compose(&morphisms[g].0, &morphisms[f].0);
                match index.get(&key) {
                    Some(&h) => table[g * m + f] = h as u32,
                    None => bad.push(CategoryViolation::MissingComposite { g, f }),
                }
            }
        }
        if !bad.is_empty() {
            return Err(CatError::Invalid(bad));
        }
        let cat = FinCat::assemble(objects, data, identities, table);
        let mut bad = Vec::new();
        cat.check_units(&mut bad);
        if bad.is_empty() {
            Ok(cat)
        } else {
            Err(CatError::Invalid(bad))
        }
    }

    /// The category with one object per element of `p` and one morphism per relation.
    ///
    /// Morphism `(a, b)` is listed in lexicographic order of pairs.
    pub fn from_poset(p: &FinPoset) -> FinCat {
        let mut morphisms = Vec::new();
        for a in 0..p.len() {
            for b in 0..p.len() {
                if p.leq(a, b) {
                    let name = if a == b {
                        format!("1_{}", p.label(a))
                    } else {
                        format!("{}<{}", p.label(a), p.label(b))
                    };
                    morphisms.push(((a, b), MorphismData { name, source: a, target: b }));
                }
            }
        }
        FinCat::from_keys(p.labels().to_vec(), morphisms, |a| (a, a), |g, f| (f.0, g.1))
            .expect("posets are categories")
    }

    /// One object, morphisms the elements of a group or monoid given by its
    /// multiplication table `mul[g][h] = g * h`, with `unit` the neutral element.
    pub fn one_object(names: Vec<String>, unit: usize, mul: &[Vec<usize>]) -> Result<FinCat, CatError> {
        let morphisms = names
            .into_iter()
            .enumerate()
            .map(|(i, name)| (i, MorphismData { name, source: 0, target: 0 }))
            .collect();
        let cat = FinCat::from_keys(vec!["*".into()], morphisms, |_| unit, |&g, &f| mul[g][f])?;
        let bad = cat.check_axioms(&[]);
        if bad.is_empty() {
            Ok(cat)
        } else {
            Err(CatError::Invalid(bad))
        }
    }

    pub fn discrete(n: usize) -> FinCat {
        FinCat::from_poset(&FinPoset::discrete(n))
    }

    pub fn terminal() -> FinCat {
        FinCat::discrete(1)
    }

    pub fn empty() -> FinCat {
        FinCat::discrete(0)
    }

    /// Every violated unit, associativity and declared-inverse law.
    pub fn validate(&self) -> Vec<CategoryViolation> {
        self.check_axioms(&[])
    }

    fn check_units(&self, bad: &mut Vec<CategoryViolation>) {
        for (f, mor) in self.morphisms.iter().enumerate() {
            if self.compose(self.identities[mor.target], f) != Some(f) {
                bad.push(CategoryViolation::LeftUnit { f });
            }
            if self.compose(f, self.identities[mor.source]) != Some(f) {
                bad.push(CategoryViolation::RightUnit { f });
            }
        }
    }

    fn check_axioms(&self, inverses: &[(usize, usize)]) -> Vec<CategoryViolation> {
        let mut bad = Vec::new();
        self.check_units(&mut bad);
        for f in 0..self.morphism_count() {
            for &g in self.out_of(self.target(f)) {
                let gf = self.composite(g, f);
                for &h in self.out_of(self.target(g)) {
                    if self.composite(h, gf) != self.composite(self.composite(h, g), f) {
                        bad.push(CategoryViolation::Associativity { h, g, f });
                    }
                }
            }
        }
        for &(f, g) in inverses {
            let ok = f < self.morphism_count()
                && g < self.morphism_count()
                && self.compose(g, f) == Some(self.identities[self.source(f)])
                && self.compose(f, g) == Some(self.identities[self.target(f)]);
            if !ok {
                bad.push(CategoryViolation::NotInverse { f, g });
            }
        }
        bad
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphisms(&self) -> &[MorphismData] {
        &self.morphisms
    }

    pub fn morphism(&self, f: usize) -> &MorphismData {
        &self.morphisms[f]
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    #[inline]
    pub fn source(&self, f: usize) -> usize {
        self.morphisms[f].source
    }

    #[inline]
    pub fn target(&self, f: usize) -> usize {
        self.morphisms[f].target
    }

    #[inline]
    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn identities(&self) -> &[usize] {
        &self.identities
    }

    #[inline]
    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.source(f)] == f
    }

    /// `g ∘ f` when `target(f) = source(g)`.
    #[inline]
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        match self.table[g * self.morphisms.len() + f] {
            NONE => None,
            h => Some(h as usize),
        }
    }

    /// `g ∘ f`, panicking on non-composable input.
    #[inline]
    pub fn composite(&self, g: usize, f: usize) -> usize {
        self.compose(g, f)
            .unwrap_or_else(|| panic!("morphisms {g} and {f} are not composable"))
    }

    /// `Hom(x, y)` in morphism index order.
    #[inline]
    pub fn hom(&self, x: usize, y: usize) -> &[usize] {
        &self.hom[x * self.objects.len() + y]
    }

    /// All morphisms with the given source, in index order.
    pub fn out_of(&self, x: usize) -> impl Iterator<Item = &usize> + '_ {
        (0..self.objects.len()).flat_map(move |y| self.hom(x, y).iter())
    }

    /// All morphisms with the given target.
    pub fn into_obj(&self, y: usize) -> impl Iterator<Item = &usize> + '_ {
        (0..self.objects.len()).flat_map(move |x| self.hom(x, y).iter())
    }

    pub fn non_identities(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.morphisms.len()).filter(move |&f| !self.is_identity(f))
    }

    /// Two-sided inverse of `f`, if any.
    pub fn inverse(&self, f: usize) -> Option<usize> {
        let (x, y) = (self.source(f), self.target(f));
        self.hom(y, x).iter().copied().find(|&g| {
            self.compose(g, f) == Some(self.identities[x]) && self.compose(f, g) == Some(self.identities[y])
        })
    }

    pub fn is_iso(&self, f: usize) -> bool {
        self.inverse(f).is_some()
    }

    pub fn is_groupoid(&self) -> bool {
        (0..self.morphisms.len()).all(|f| self.is_iso(f))
    }

    /// Every hom-set has at most one element.
    pub fn is_thin(&self) -> bool {
        self.hom.iter().all(|h| h.len() <= 1)
    }

    /// The first isomorphism `x -> y` in index order.
    pub fn first_iso(&self, x: usize, y: usize) -> Option<usize> {
        self.hom(x, y).iter().copied().find(|&f| self.is_iso(f))
    }

    /// Isomorphism classes: `class_of[x]` and the classes themselves, each
    /// represented by its least object, ordered by representative.
    pub fn iso_classes(&self) -> (Vec<usize>, Vec<Vec<usize>>) {
        let n = self.objects.len();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let members: Vec<usize> = (x..n)
                .filter(|&y| class_of[y] == usize::MAX && self.first_iso(x, y).is_some())
                .collect();
            for &y in &members {
                class_of[y] = id;
            }
            classes.push(members);
        }
        (class_of, classes)
    }

    /// Connected components (zig-zag classes) of objects, by least member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.objects.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for mor in &self.morphisms {
            let (a, b) = (find(&mut parent, mor.source), find(&mut parent, mor.target));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; n];
        for x in 0..n {
            let r = find(&mut parent, x);
            if slot[r] == usize::MAX {
                slot[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[r]].push(x);
        }
        groups
    }

    /// Full subcategory on `objects` (kept in the given order), with the
    /// indices of its morphisms in `self`.
    pub fn full_subcategory(&self, objects: &[usize]) -> (FinCat, Vec<usize>) {
        let mut local = vec![usize::MAX; self.objects.len()];
        for (i, &x) in objects.iter().enumerate() {
            local[x] = i;
        }
        let mut mors = Vec::new();
        let mut data = Vec::new();
        for &x in objects {
            for &y in objects {
                for &f in self.hom(x, y) {
                    mors.push(f);
                    data.push(MorphismData {
                        name: self.morphisms[f].name.clone(),
                        source: local[x],
                        target: local[y],
                    });
                }
            }
        }
        let mut back = vec![usize::MAX; self.morphisms.len()];
        for (i, &f) in mors.iter().enumerate() {
            back[f] = i;
        }
        let m = mors.len();
        let mut table = vec![NONE; m * m];
        for (i, &f) in mors.iter().enumerate() {
            for (j, &g) in mors.iter().enumerate() {
                if let Some(h) = self.compose(g, f) {
                    table[j * m + i] = back[h] as u32;
                }
            }
        }
        let identities = objects.iter().map(|&x| back[self.identities[x]]).collect();
        let names = objects.iter().map(|&x| self.objects[x].clone()).collect();
        (FinCat::assemble(names, data, identities, table), mors)
    }

    pub fn opposite(&self) -> FinCat {
        let m = self.morphisms.len();
        let data = self
            .morphisms
            .iter()
            .map(|d| MorphismData {
                name: d.name.clone(),
                source: d.target,
                target: d.source,
            })
            .collect();
        let mut table = vec![NONE; m * m];
        for g in 0..m {
            for f in 0..m {
                // g ∘op f = f ∘ g
                if let Some(h) = self.compose(f, g) {
                    table[g * m + f] = h as u32;
                }
            }
        }
        FinCat::assemble(self.objects.clone(), data, self.identities.clone(), table)
    }

    /// Product category; object `(x, y)` has index `x * other.object_count() + y`.
    pub fn product(&self, other: &FinCat) -> FinCat {
        let (n2, m2) = (other.object_count(), other.morphism_count());
        let mut objects = Vec::new();
        for x in &self.objects {
            for y in &other.objects {
                objects.push(format!("({x},{y})"));
            }
        }
        let mut morphisms = Vec::new();
        for (f, df) in self.morphisms.iter().enumerate() {
            for (g, dg) in other.morphisms.iter().enumerate() {
                morphisms.push((
                    f * m2 + g,
                    MorphismData {
                        name: format!("({},{})", df.name, dg.name),
                        source: df.source * n2 + dg.source,
                        target: df.target * n2 + dg.target,
                    },
                ));
            }
        }
        FinCat::from_keys(
            objects,
            morphisms,
            |xy| self.identities[xy / n2] * m2 + other.identities[xy % n2],
            |a, b| self.composite(a / m2, b / m2) * m2 + other.composite(a % m2, b % m2),
        )
        .expect("products of categories are categories")
    }

    /// A generating set: all morphisms that are not composites of two
    /// non-identities, then greedily until everything is reached, trying
    /// endomorphisms first, then other isomorphisms, then the rest.
    pub fn generators(&self) -> Vec<usize> {
        let m = self.morphisms.len();
        let mut decomposable = vec![false; m];
        for a in self.non_identities() {
            for &b in self.out_of(self.target(a)) {
                if !self.is_identity(b) {
                    decomposable[self.composite(b, a)] = true;
                }
            }
        }
        let mut reached = vec![false; m];
        for &id in &self.identities {
            reached[id] = true;
        }
        let mut gens: Vec<usize> = self.non_identities().filter(|&f| !decomposable[f]).collect();
        self.extend_reached(&gens, &mut reached);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&f| (self.source(f) != self.target(f), !self.is_iso(f)));
        for f in order {
            if !reached[f] {
                gens.push(f);
                self.extend_reached(&gens, &mut reached);
            }
        }
        gens.sort_unstable();
        gens
    }

    /// Generators, and for every morphism a shortest word in them
    /// (generator positions, first applied first) found breadth-first.
    pub fn generator_words(&self) -> (Vec<usize>, Vec<Vec<usize>>) {
        let gens = self.generators();
        let mut words: Vec<Option<Vec<usize>>> = vec![None; self.morphisms.len()];
        let mut queue = std::collections::VecDeque::new();
        for &id in &self.identities {
            words[id] = Some(Vec::new());
            queue.push_back(id);
        }
        while let Some(m) = queue.pop_front() {
            for (i, &g) in gens.iter().enumerate() {
                if let Some(h) = self.compose(g, m) {
                    if words[h].is_none() {
                        let mut w = words[m].clone().expect("visited");
                        w.push(i);
                        words[h] = Some(w);
                        queue.push_back(h);
                    }
                }
            }
        }
        let words = words.into_iter().map(|w| w.expect("generators reach every morphism")).collect();
        (gens, words)
    }

    fn extend_reached(&self, gens: &[usize], reached: &mut [bool]) {
        let mut queue: Vec<usize> = (0..reached.len()).filter(|&f| reached[f]).collect();
        while let Some(x) = queue.pop() {
            for &g in gens {
                if let Some(h) = self.compose(g, x) {
                    if !reached[h] {
                        reached[h] = true;
                        queue.push(h);
                    }
                }
            }
        }
    }

    /// Relabels objects and morphisms without touching the structure.
    pub fn renamed(mut self, objects: Vec<String>, morphisms: Vec<String>) -> FinCat {
        assert_eq!(objects.len(), self.objects.len());
        assert_eq!(morphisms.len(), self.morphisms.len());
        self.objects = objects;
        for (d, name) in self.morphisms.iter_mut().zip(morphisms) {
            d.name = name;
        }
        self
    }

    /// The underlying raw data, with all composites of non-identities listed.
    pub fn to_raw(&self) -> RawCategory {
        let mut composites = Vec::new();
        for f in self.non_identities() {
            for &g in self.out_of(self.target(f)) {
                if !self.is_identity(g) {
                    composites.push((g, f, self.composite(g, f)));
                }
            }
        }
        RawCategory {
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
            identities: self.identities.clone(),
            composites,
            inverses: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn b_z2() -> FinCat {
        FinCat::one_object(vec!["1".into(), "e".into()], 0, &[vec![0, 1], vec![1, 0]]).unwrap()
    }

    #[test]
    fn cyclic_group_of_order_two_is_valid() {
        let c = b_z2();
        assert!(c.validate().is_empty());
        assert!(c.is_groupoid());
        assert_eq!(c.inverse(1), Some(1));
    }

    #[test]
    fn idempotent_declared_invertible_is_reported() {
        let raw = RawCategory {
            objects: vec!["*".into()],
            morphisms: vec![
                MorphismData { name: "1".into(), source: 0, target: 0 },
                MorphismData { name: "e".into(), source: 0, target: 0 },
            ],
            identities: vec![0],
            composites: vec![(1, 1, 1)],
            inverses: vec![(1, 1)],
        };
        let report = raw.validate();
        assert_eq!(report, vec![CategoryViolation::NotInverse { f: 1, g: 1 }]);
        assert!(raw.build().is_err());
    }

    #[test]
    fn poset_as_category() {
        let c = FinCat::from_poset(&FinPoset::chain(2));
        assert_eq!(c.morphism_count(), 6);
        assert!(c.validate().is_empty());
        assert!(c.is_thin());
        // Oracle: relations of [2] are exactly the pairs a <= b.
        let expected: Vec<(usize, usize)> = (0..3).flat_map(|a| (a..3).map(move |b| (a, b))).collect();
        let got: Vec<(usize, usize)> = c.morphisms().iter().map(|m| (m.source, m.target)).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn missing_and_misplaced_composites() {
        let raw = RawCategory {
            objects: vec!["a".into(), "b".into()],
            morphisms: vec![
                MorphismData { name: "1a".into(), source: 0, target: 0 },
                MorphismData { name: "1b".into(), source: 1, target: 1 },
                MorphismData { name: "f".into(), source: 0, target: 1 },
                MorphismData { name: "g".into(), source: 1, target: 0 },
            ],
            identities: vec![0, 1],
            composites: vec![(2, 2, 2)],
            inverses: vec![],
        };
        let report = raw.validate();
        assert!(report.contains(&CategoryViolation::NotComposable { g: 2, f: 2 }));
        assert!(report.contains(&CategoryViolation::MissingComposite { g: 3, f: 2 }));
    }

    #[test]
    fn associativity_failure_is_listed() {
        // Monoid {1, a, b} with a table that is not associative.
        let names = vec!["1".into(), "a".into(), "b".into()];
        let mul = vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 1, 1]];
        let err = FinCat::one_object(names, 0, &mul).unwrap_err();
        match err {
            CatError::Invalid(v) => assert!(v.iter().any(|x| matches!(x, CategoryViolation::Associativity { .. }))),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn opposite_and_product() {
        let p = FinCat::from_poset(&FinPoset::chain(1));
        let op = p.opposite();
        assert!(op.validate().is_empty());
        assert_eq!(op.hom(1, 0).len(), 1);
        let sq = p.product(&p);
        assert_eq!(sq.object_count(), 4);
        assert_eq!(sq.morphism_count(), 9);
        assert!(sq.validate().is_empty());
    }

    #[test]
    fn generators_of_a_chain_are_the_covers() {
        let c = FinCat::from_poset(&FinPoset::chain(3));
        let gens: Vec<(usize, usize)> = c
            .generators()
            .into_iter()
            .map(|f| (c.source(f), c.target(f)))
            .collect();
        assert_eq!(gens, vec![(0, 1), (1, 2), (2, 3)]);
    }
}
