"""Namespace IRIs used in generated RDF.

Only prefixes are conventional for LBO, DRMO and daQ in this toolchain; the
base IRIs below are placeholders owned by this project and are fixed so
exported documents stay comparable across runs.
"""
from __future__ import annotations

from .terms import RDF_NS, RDFS_NS, XSD_NS

LBO = "http://lqml.example.org/ns/lbo#"
DRMO = "http://lqml.example.org/ns/drmo#"
DAQ = "http://lqml.example.org/ns/daq#"
BLUEPRINT = "http://lqml.example.org/blueprint/"
DCTERMS = "http://purl.org/dc/terms/"

LBO_PREFIXES = {
    "rdf": RDF_NS,
    "rdfs": RDFS_NS,
    "xsd": XSD_NS,
    "lbo": LBO,
    "drmo": DRMO,
    "bp": BLUEPRINT,
}

OBSERVATION_PREFIXES = {
    "xsd": XSD_NS,
    "daq": DAQ,
    "dcterms": DCTERMS,
}
