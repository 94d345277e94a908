from datetime import datetime, timedelta, timezone
from fractions import Fraction
from pathlib import Path

import rdflib
from rdflib.namespace import XSD

from lqml.engine import ObservationRecord, assess
from lqml.rdfio import write_observations
from lqml.rdfio.observations import format_timestamp, observations_document

GOLDEN = Path(__file__).parent / "golden"
METRIC = "http://www.example.org/ebiqm#SubClassCountingMetric"
DAQ = rdflib.Namespace("http://lqml.example.org/ns/daq#")
WHEN = datetime(2024, 5, 17, 9, 30, tzinfo=timezone.utc)


def test_golden_observation(subclass_counter, five_triples):
    records = assess([subclass_counter], five_triples, "five.nt", computed_at=WHEN)
    text = observations_document(records).serialize()
    assert text == (GOLDEN / "subclass_counter_observation.ttl").read_text()


def test_value_is_decimal_literal_on_metric():
    record = ObservationRecord(METRIC, Fraction(3, 2), "d", WHEN)
    graph = rdflib.Graph().parse(data=observations_document([record]).serialize(), format="turtle")
    (obs,) = graph.objects(rdflib.URIRef(METRIC), DAQ.hasObservation)
    value = graph.value(obs, DAQ.value)
    assert value.datatype == XSD.decimal and str(value) == "1.5"
    assert str(graph.value(obs, DAQ.computedOn)) == "d"
    assert graph.value(obs, rdflib.URIRef("http://purl.org/dc/terms/date")).datatype == XSD.dateTime


def test_zero_value():
    record = ObservationRecord(METRIC, Fraction(0), "d", WHEN)
    assert "daq:value 0.0 ;" in observations_document([record]).serialize()


def test_empty_records_prefixes_only():
    text = observations_document([]).serialize()
    assert all(line.startswith("@prefix") for line in text.splitlines())


def test_timestamps_rendered_in_utc():
    local = WHEN.astimezone(timezone(timedelta(hours=2)))
    assert format_timestamp(ObservationRecord(METRIC, Fraction(1), "d", local)) == "2024-05-17T09:30:00Z"


def test_write_to_stream(tmp_path):
    path = tmp_path / "out.ttl"
    with path.open("w") as out:
        doc = write_observations([ObservationRecord(METRIC, Fraction(1), "d", WHEN)], out)
    assert path.read_text() == doc.serialize()


def test_several_records_distinct_nodes():
    records = [ObservationRecord(f"http://ex.org/m{i}", Fraction(i), "d", WHEN) for i in range(3)]
    graph = rdflib.Graph().parse(data=observations_document(records).serialize(), format="turtle")
    assert len(set(graph.subjects(rdflib.RDF.type, DAQ.Observation))) == 3
