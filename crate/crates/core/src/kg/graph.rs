use std::collections::{BTreeSet, HashMap};
use std::ops::Bound;

use super::ontology;
use super::term::{Iri, Term, Triple};

type Id = u32;
type Key = [Id; 3];

/// Which positions of a triple an index orders first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexOrder {
    Spo,
    Pos,
    Osp,
}

impl IndexOrder {
    fn to_key(self, [s, p, o]: Key) -> Key {
        match self {
            IndexOrder::Spo => [s, p, o],
            IndexOrder::Pos => [p, o, s],
            IndexOrder::Osp => [o, s, p],
        }
    }

    fn to_spo(self, k: Key) -> Key {
        match self {
            IndexOrder::Spo => k,
            IndexOrder::Pos => [k[2], k[0], k[1]],
            IndexOrder::Osp => [k[1], k[2], k[0]],
        }
    }
}

/// Indexed triple store with set semantics.
///
/// Asserted triples are what the graph was built from and what gets exported.
/// On top of them the store keeps one hop of `rdfs:subClassOf` entailment on
/// `rdf:type`, so `?x rdf:type tm:Vehicle` finds cars. Entailed triples are
/// visible to lookups and pattern matching but never exported.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    terms: Vec<Term>,
    ids: HashMap<Term, Id>,
    spo: BTreeSet<Key>,
    pos: BTreeSet<Key>,
    osp: BTreeSet<Key>,
    asserted: BTreeSet<Key>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.asserted().all(|t| other.contains_asserted(&t))
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_triples(triples: impl IntoIterator<Item = Triple>) -> Self {
        let mut g = Self::new();
        g.extend(triples);
        g
    }

    /// Number of asserted triples.
    pub fn len(&self) -> usize {
        self.asserted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.asserted.is_empty()
    }

    /// Number of triples visible to queries, entailed ones included.
    pub fn visible_len(&self) -> usize {
        self.spo.len()
    }

    fn intern(&mut self, term: &Term) -> Id {
        if let Some(&id) = self.ids.get(term) {
            return id;
        }
        let id = Id::try_from(self.terms.len()).expect("term table overflow");
        self.terms.push(term.clone());
        self.ids.insert(term.clone(), id);
        id
    }

    fn lookup(&self, term: &Term) -> Option<Id> {
        self.ids.get(term).copied()
    }

    fn term(&self, id: Id) -> &Term {
        &self.terms[id as usize]
    }

    fn decode(&self, [s, p, o]: Key) -> Triple {
        let iri = |id| match self.term(id) {
            Term::Iri(i) => i.clone(),
            Term::Literal { .. } => unreachable!("subject and predicate are always IRIs"),
        };
        Triple { s: iri(s), p: iri(p), o: self.term(o).clone() }
    }

    fn encode(&mut self, t: &Triple) -> Key {
        let s = self.intern(&Term::Iri(t.s.clone()));
        let p = self.intern(&Term::Iri(t.p.clone()));
        let o = self.intern(&t.o);
        [s, p, o]
    }

    fn index_insert(&mut self, key: Key) -> bool {
        let fresh = self.spo.insert(key);
        if fresh {
            self.pos.insert(IndexOrder::Pos.to_key(key));
            self.osp.insert(IndexOrder::Osp.to_key(key));
        }
        fresh
    }

    fn index_remove(&mut self, key: Key) {
        self.spo.remove(&key);
        self.pos.remove(&IndexOrder::Pos.to_key(key));
        self.osp.remove(&IndexOrder::Osp.to_key(key));
    }

    /// Inserts without refreshing entailment. Returns true if the triple was new.
    fn insert_raw(&mut self, t: &Triple) -> bool {
        let key = self.encode(t);
        self.index_insert(key);
        self.asserted.insert(key)
    }

    /// Inserts one triple. Returns true if it was not already asserted.
    pub fn insert(&mut self, t: Triple) -> bool {
        let fresh = self.insert_raw(&t);
        if fresh {
            self.refresh_entailment();
        }
        fresh
    }

    /// Union with set semantics; returns how many triples were new.
    pub fn extend(&mut self, triples: impl IntoIterator<Item = Triple>) -> usize {
        let mut added = 0;
        for t in triples {
            if self.insert_raw(&t) {
                added += 1;
            }
        }
        if added > 0 {
            self.refresh_entailment();
        }
        added
    }

    /// Recomputes the one-hop `rdf:type` / `rdfs:subClassOf` closure.
    fn refresh_entailment(&mut self) {
        let entailed: Vec<Key> = self.spo.iter().filter(|k| !self.asserted.contains(*k)).copied().collect();
        for k in entailed {
            self.index_remove(k);
        }
        let (Some(ty), Some(sub)) =
            (self.lookup(&Term::Iri(ontology::rdf_type())), self.lookup(&Term::Iri(ontology::subclass_of())))
        else {
            return;
        };
        let mut supers: HashMap<Id, Vec<Id>> = HashMap::new();
        for k in self.scan(IndexOrder::Pos, &[sub]) {
            supers.entry(k[0]).or_default().push(k[2]);
        }
        let mut derived = Vec::new();
        for k in self.scan(IndexOrder::Pos, &[ty]) {
            if let Some(cs) = supers.get(&k[2]) {
                derived.extend(cs.iter().map(|&c| [k[0], ty, c]));
            }
        }
        for k in derived {
            self.index_insert(k);
        }
    }

    /// Triples (spo keys) whose first positions in `order` equal `prefix`.
    fn scan(&self, order: IndexOrder, prefix: &[Id]) -> Vec<Key> {
        let index = match order {
            IndexOrder::Spo => &self.spo,
            IndexOrder::Pos => &self.pos,
            IndexOrder::Osp => &self.osp,
        };
        let mut lo = [0; 3];
        let mut hi = [Id::MAX; 3];
        lo[..prefix.len()].copy_from_slice(prefix);
        hi[..prefix.len()].copy_from_slice(prefix);
        index.range((Bound::Included(lo), Bound::Included(hi))).map(|k| order.to_spo(*k)).collect()
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.key_of(t).is_some_and(|k| self.spo.contains(&k))
    }

    pub fn contains_asserted(&self, t: &Triple) -> bool {
        self.key_of(t).is_some_and(|k| self.asserted.contains(&k))
    }

    fn key_of(&self, t: &Triple) -> Option<Key> {
        Some([self.lookup(&Term::Iri(t.s.clone()))?, self.lookup(&Term::Iri(t.p.clone()))?, self.lookup(&t.o)?])
    }

    /// Asserted triples in index order.
    pub fn asserted(&self) -> impl Iterator<Item = Triple> + '_ {
        self.asserted.iter().map(|k| self.decode(*k))
    }

    /// All visible triples (asserted and entailed), enumerated through one index.
    pub fn iter_via(&self, order: IndexOrder) -> impl Iterator<Item = Triple> + '_ {
        let index = match order {
            IndexOrder::Spo => &self.spo,
            IndexOrder::Pos => &self.pos,
            IndexOrder::Osp => &self.osp,
        };
        index.iter().map(move |k| self.decode(order.to_spo(*k)))
    }

    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.iter_via(IndexOrder::Spo)
    }

    /// Visible triples matching the given constants; `None` is a wildcard.
    /// Picks the index whose prefix covers the bound positions.
    pub fn triples_matching(&self, s: Option<&Iri>, p: Option<&Iri>, o: Option<&Term>) -> Vec<Triple> {
        let id = |t: Term| self.lookup(&t);
        let s_id = match s.map(|i| id(Term::Iri(i.clone()))) {
            Some(None) => return Vec::new(),
            other => other.flatten(),
        };
        let p_id = match p.map(|i| id(Term::Iri(i.clone()))) {
            Some(None) => return Vec::new(),
            other => other.flatten(),
        };
        let o_id = match o.map(|t| id(t.clone())) {
            Some(None) => return Vec::new(),
            other => other.flatten(),
        };
        self.match_ids(s_id, p_id, o_id).into_iter().map(|k| self.decode(k)).collect()
    }

    fn match_ids(&self, s: Option<Id>, p: Option<Id>, o: Option<Id>) -> Vec<Key> {
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => {
                if self.spo.contains(&[s, p, o]) {
                    vec![[s, p, o]]
                } else {
                    Vec::new()
                }
            }
            (Some(s), Some(p), None) => self.scan(IndexOrder::Spo, &[s, p]),
            (Some(s), None, None) => self.scan(IndexOrder::Spo, &[s]),
            (None, Some(p), Some(o)) => self.scan(IndexOrder::Pos, &[p, o]),
            (None, Some(p), None) => self.scan(IndexOrder::Pos, &[p]),
            (Some(s), None, Some(o)) => self.scan(IndexOrder::Osp, &[o, s]),
            (None, None, Some(o)) => self.scan(IndexOrder::Osp, &[o]),
            (None, None, None) => self.spo.iter().copied().collect(),
        }
    }

    /// Objects of `(s, p, ?)`.
    pub fn objects(&self, s: &Iri, p: &Iri) -> Vec<Term> {
        self.triples_matching(Some(s), Some(p), None).into_iter().map(|t| t.o).collect()
    }

    /// Subjects of `(?, p, o)`.
    pub fn subjects(&self, p: &Iri, o: &Term) -> Vec<Iri> {
        self.triples_matching(None, Some(p), Some(o)).into_iter().map(|t| t.s).collect()
    }
}
