from __future__ import annotations

from datetime import timezone
from typing import IO, Iterable, Optional

from ..engine import ObservationRecord, render_decimal
from ..terms import RDF_TYPE, XSD_DATETIME, XSD_DECIMAL, BNode, IRI, Literal
from ..vocab import DAQ, DCTERMS, OBSERVATION_PREFIXES
from .turtle import TurtleDocument

HAS_OBSERVATION = IRI(DAQ + "hasObservation")
OBSERVATION = IRI(DAQ + "Observation")
VALUE = IRI(DAQ + "value")
COMPUTED_ON = IRI(DAQ + "computedOn")
DATE = IRI(DCTERMS + "date")


def format_timestamp(record: ObservationRecord) -> str:
    when = record.computed_at
    if when.tzinfo is not None:
        when = when.astimezone(timezone.utc)
    return when.strftime("%Y-%m-%dT%H:%M:%SZ")


def observations_document(records: Iterable[ObservationRecord]) -> TurtleDocument:
    """One anonymous ``daq:Observation`` per record, hung off its metric IRI."""
    doc = TurtleDocument(dict(OBSERVATION_PREFIXES))
    for i, record in enumerate(records):
        node = BNode(f"obs{i}")
        doc.add(IRI(record.metric_uri), HAS_OBSERVATION, node)
        doc.add(node, IRI(RDF_TYPE), OBSERVATION)
        doc.add(node, VALUE, Literal(render_decimal(record.value), datatype=XSD_DECIMAL))
        doc.add(node, COMPUTED_ON, Literal(record.dataset_id))
        doc.add(node, DATE, Literal(format_timestamp(record), datatype=XSD_DATETIME))
    return doc


def write_observations(records: Iterable[ObservationRecord], out: Optional[IO[str]] = None) -> TurtleDocument:
    """Build the observation document and, when ``out`` is given, write it as Turtle."""
    doc = observations_document(records)
    if out is not None:
        out.write(doc.serialize())
    return doc
