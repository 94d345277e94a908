"""Hypothesis strategies for terms, triples, conditions and blueprints."""
from __future__ import annotations

import random

from hypothesis import strategies as st

from lqml.terms import BNode, IRI, Literal, Triple

from datagen import CLASSES, NUMBERS, PREDICATES, STRINGS, random_blueprint, random_expr

EX = "http://ex.org/"

iris = st.sampled_from([f"{EX}r{i}" for i in range(6)] + CLASSES).map(IRI)
bnodes = st.sampled_from(["b0", "b1", "x.y", "n-1"]).map(BNode)
literals = st.one_of(
    st.builds(Literal, st.sampled_from(STRINGS), st.sampled_from([None, "en", "fr-BE"])),
    st.builds(Literal, st.sampled_from(NUMBERS), st.none(), st.sampled_from([None, "http://www.w3.org/2001/XMLSchema#integer"])),
    st.builds(Literal, st.text(max_size=8)),
)
subjects = st.one_of(iris, bnodes)
predicates = st.sampled_from(PREDICATES).map(IRI)
objects = st.one_of(iris, bnodes, literals)
triples = st.builds(Triple, subjects, predicates, objects)
datasets = st.lists(triples, max_size=40)

seeds = st.integers(min_value=0, max_value=2**32 - 1)
conditions = seeds.map(lambda s: random_expr(random.Random(s)))
blueprints = seeds.map(lambda s: random_blueprint(random.Random(s), s % 1000))
