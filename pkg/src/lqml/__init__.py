"""LQML: a language for linked-data quality metrics.

Blueprints are parsed and validated into immutable ``Blueprint`` values,
evaluated in a streaming fashion over N-Triples, exported to and imported from
RDF, and translated into SPARQL.
"""
from .engine import MetricFailure, ObservationRecord, TypeIndex, assess, eval_condition, render_decimal
from .errors import (
    DivisionByZeroError,
    DuplicateFunctionError,
    LboShapeError,
    LexError,
    LqmlError,
    MixedOperatorError,
    NTriplesSyntaxError,
    ParseError,
    TurtleSyntaxError,
    UntranslatableError,
    ValidationError,
)
from .lbo import export_to_lbo, export_turtle, import_document, import_from_lbo
from .lexer import Token, TokenKind, tokenize
from .model import Blueprint, ExtensionRegistry, default_registry, register_function, validate
from .parser import format_blueprint, load_blueprints, parse, parse_source
from .rdfio import open_ntriples, parse_ntriples, parse_turtle, write_observations
from .sparql import SparqlQuery, to_sparql

__all__ = [
    "Blueprint", "DivisionByZeroError", "DuplicateFunctionError", "ExtensionRegistry",
    "LboShapeError", "LexError", "LqmlError", "MetricFailure", "MixedOperatorError",
    "NTriplesSyntaxError", "ObservationRecord", "ParseError", "SparqlQuery", "Token",
    "TokenKind", "TurtleSyntaxError", "TypeIndex", "UntranslatableError", "ValidationError",
    "assess", "default_registry", "eval_condition", "export_to_lbo", "export_turtle",
    "format_blueprint", "import_document", "import_from_lbo", "load_blueprints",
    "open_ntriples", "parse", "parse_ntriples", "parse_source", "parse_turtle",
    "register_function", "render_decimal", "to_sparql", "tokenize", "validate",
    "write_observations",
]
