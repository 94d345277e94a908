"""Reading N-Triples datasets and writing Turtle."""
from .ntriples import TripleSource, open_ntriples, parse_line, parse_ntriples, serialize_ntriples
from .observations import observations_document, write_observations
from .turtle import TurtleDocument, parse_turtle, serialize_turtle

__all__ = [
    "TripleSource",
    "TurtleDocument",
    "observations_document",
    "open_ntriples",
    "parse_line",
    "parse_ntriples",
    "parse_turtle",
    "serialize_ntriples",
    "serialize_turtle",
    "write_observations",
]
