//! Traffic monitoring ontology: namespaces, class and predicate IRIs, default axioms.

use super::term::Iri;

pub const TM: &str = "http://example.org/tmo#";
pub const TMI: &str = "http://example.org/tmkg/";
pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";

/// Prefix table used for CURIE expansion and compaction.
pub const PREFIXES: [(&str, &str); 6] =
    [("tm", TM), ("tmi", TMI), ("rdf", RDF), ("rdfs", RDFS), ("owl", OWL), ("xsd", XSD)];

/// Expands `prefix:local` against [`PREFIXES`].
pub fn expand(curie: &str) -> Option<String> {
    let (prefix, local) = curie.split_once(':')?;
    PREFIXES.iter().find(|(p, _)| *p == prefix).map(|(_, ns)| format!("{ns}{local}"))
}

/// Compacts a full IRI to `prefix:local` when a namespace matches.
pub fn shrink(iri: &str) -> Option<String> {
    PREFIXES.iter().find_map(|(p, ns)| iri.strip_prefix(ns).map(|local| format!("{p}:{local}")))
}

fn tm(local: &str) -> Iri {
    Iri::new_unchecked(format!("{TM}{local}"))
}

pub fn scene() -> Iri {
    tm("Scene")
}
pub fn camera() -> Iri {
    tm("Camera")
}
pub fn lane() -> Iri {
    tm("Lane")
}
pub fn vehicle() -> Iri {
    tm("Vehicle")
}
pub fn road() -> Iri {
    tm("Road")
}
pub fn unknown() -> Iri {
    tm("Unknown")
}

pub fn rdf_type() -> Iri {
    Iri::new_unchecked(format!("{RDF}type"))
}
pub fn subclass_of() -> Iri {
    Iri::new_unchecked(format!("{RDFS}subClassOf"))
}
pub fn disjoint_with() -> Iri {
    Iri::new_unchecked(format!("{OWL}disjointWith"))
}
pub fn has_object() -> Iri {
    tm("hasObject")
}
pub fn in_lane() -> Iri {
    tm("inLane")
}
pub fn average_speed() -> Iri {
    tm("averageSpeed")
}
pub fn at_time() -> Iri {
    tm("atTime")
}
pub fn captured_by() -> Iri {
    tm("capturedBy")
}
pub fn track_id() -> Iri {
    tm("trackId")
}
pub fn lane_number() -> Iri {
    tm("laneNumber")
}
pub fn has_lane_count() -> Iri {
    tm("hasLaneCount")
}

/// Ontology class for a (lowercased) detection label. Labels outside the
/// known set map to `tm:Unknown`.
pub fn class_for_label(label: &str) -> Iri {
    match label {
        "car" => tm("Car"),
        "truck" => tm("Truck"),
        "bike" => tm("Bike"),
        "person" => tm("Person"),
        _ => unknown(),
    }
}

/// Inverse of [`class_for_label`] for object classes.
pub fn label_for_class(class: &Iri) -> Option<&'static str> {
    match class.as_str().strip_prefix(TM)? {
        "Car" => Some("car"),
        "Truck" => Some("truck"),
        "Bike" => Some("bike"),
        "Person" => Some("person"),
        "Unknown" => Some("unknown"),
        _ => None,
    }
}

/// Default background axioms in N-Triples.
pub const DEFAULT_AXIOMS: &str = "\
<http://example.org/tmo#Car> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <http://example.org/tmo#Vehicle> .
<http://example.org/tmo#Truck> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <http://example.org/tmo#Vehicle> .
<http://example.org/tmo#Truck> <http://www.w3.org/2002/07/owl#disjointWith> <http://example.org/tmo#Car> .
";
