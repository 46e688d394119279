"""Namespace constants for the three layers and the standard RDF stack."""

ILEXIMON_NS = "http://ns.inria.fr/ulk/2011/06/10/ileximon-core#"
ILEXICON_NS = "http://ns.inria.fr/ulk/2011/06/10/ilexicon-ex#"
SEMS_NS = "http://ns.inria.fr/ulk/2011/06/10/sems-ex#"

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
OWL_NS = "http://www.w3.org/2002/07/owl#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

#: Prefix label under which lexicon classes and relations live.
LEXICON_PREFIX = "ilexicon"
#: Prefix label for data-layer node identifiers.
DATA_PREFIX = "sems"
#: Prefix label for the meta-ontology terms.
META_PREFIX = "ileximon"

DEFAULT_PREFIXES = {
    META_PREFIX: ILEXIMON_NS,
    LEXICON_PREFIX: ILEXICON_NS,
    DATA_PREFIX: SEMS_NS,
    "rdf": RDF_NS,
    "rdfs": RDFS_NS,
    "owl": OWL_NS,
    "xsd": XSD_NS,
}

#: Meta-ontology term names, exactly as published.
META_CLASS_TERMS = ("ILexicalUnit", "ISemRelation", "ILexicalPrimitive")
META_PROPERTY_TERMS = ("onISemanticRelation", "allValuesFrom", "isObligatory")
