"""JSON formats: field spec files, ideals, weights. Rationals are "num/den"."""

import json

from .errors import ParseError
from .fields import FracIdeal, construct_field
from .rings import format_rational, parse_rational


def field_to_spec(field):
    spec = {"poly": [int(c) for c in field.poly]}
    g = field.g
    identity = all(field.basis[i][j] == (1 if i == j else 0)
                   for i in range(g) for j in range(g))
    if not identity:
        spec["integral_basis"] = [[format_rational(c) for c in row]
                                  for row in field.basis]
    return spec


def field_from_spec(spec):
    poly = [int(c) for c in spec["poly"]]
    basis = spec.get("integral_basis")
    if basis is not None:
        basis = [[parse_rational(c) for c in row] for row in basis]
    return construct_field(poly, basis)


def load_field(path):
    try:
        with open(path) as fh:
            return field_from_spec(json.load(fh))
    except json.JSONDecodeError as exc:
        raise ParseError("bad field spec: %s" % exc, exc.pos) from exc


def ideal_to_json(I):
    return [[format_rational(c) for c in
             [x / I.den for x in row]] for row in I.mat]


def ideal_from_json(field, rows):
    return FracIdeal.from_rows(field, [[parse_rational(c) for c in row]
                                       for row in rows])
