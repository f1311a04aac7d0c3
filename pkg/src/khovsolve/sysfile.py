"""JSON system files.

Schema:
{
  "field": "QQ" | {"Fp": p},
  "vars": ["t1", "t2", ...],
  "weight": [w1, w2, ...],
  "phi": ["1", "t1", ...],
  "equations": [
      {"degree": d, "poly": "..."} |
      {"degree": d, "coeffs": [{"alpha": [a0, ..., al], "c": "num/den"}, ...]}
  ]
}

Exact scalars are serialized as decimal strings, "num/den" over QQ.
"""

from __future__ import annotations

import json

from .fields import GF, QQ
from .khov import Parameterization, build_parameterization
from .km import Equation, StructuredSystem
from .poly import WeightOrder, parse_polynomial

__all__ = [
    "SystemFileError",
    "parse_field",
    "field_name",
    "load_system",
    "system_to_dict",
    "dump_system",
]


class SystemFileError(ValueError):
    pass


def parse_field(spec):
    if spec == "QQ":
        return QQ
    if isinstance(spec, dict) and set(spec) == {"Fp"}:
        return GF(int(spec["Fp"]))
    if isinstance(spec, str) and spec.startswith("Fp:"):
        return GF(int(spec.split(":", 1)[1]))
    raise SystemFileError(f"unknown field specification {spec!r}")


def field_name(field):
    if field == QQ:
        return "QQ"
    return {"Fp": field.modulus}


def load_system(data):
    """Build (Parameterization, StructuredSystem) from a dict or JSON text."""
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as err:
            raise SystemFileError(f"invalid JSON: {err}") from err
    try:
        field = parse_field(data["field"])
        varnames = tuple(data["vars"])
        weight = tuple(int(w) for w in data["weight"])
        phi_strings = list(data["phi"])
        eq_specs = list(data.get("equations", []))
    except (KeyError, TypeError) as err:
        raise SystemFileError(f"missing or malformed field in system file: {err}")
    if len(weight) != len(varnames):
        raise SystemFileError(
            f"weight has {len(weight)} entries for {len(varnames)} variables"
        )
    try:
        phi = [parse_polynomial(s, varnames, field) for s in phi_strings]
    except ValueError as err:
        raise SystemFileError(f"bad generator polynomial: {err}") from err
    par = build_parameterization(phi, WeightOrder(weight), field)
    eqs = []
    for spec in eq_specs:
        degree = int(spec["degree"])
        if degree < 1:
            raise SystemFileError(f"equation degree must be >= 1, got {degree}")
        if "poly" in spec:
            try:
                f = parse_polynomial(spec["poly"], varnames, field)
            except ValueError as err:
                raise SystemFileError(f"bad equation polynomial: {err}") from err
            eqs.append(Equation(f=f, degree=degree))
        elif "coeffs" in spec:
            form = {}
            for item in spec["coeffs"]:
                alpha = tuple(int(a) for a in item["alpha"])
                form[alpha] = field.parse(str(item["c"]))
            eqs.append(Equation(degree=degree, coeff_form=form))
        else:
            raise SystemFileError("equation needs 'poly' or 'coeffs'")
    sys = StructuredSystem(par, eqs) if eqs else None
    return par, sys


def system_to_dict(par: Parameterization, sys: StructuredSystem = None):
    data = {
        "field": field_name(par.field),
        "vars": list(par.varnames),
        "weight": list(par.ord.omega),
        "phi": [p.to_string() for p in par.phi],
        "equations": [],
    }
    if sys is not None:
        for eq in sys.equations:
            if eq.coeff_form is not None:
                data["equations"].append(
                    {
                        "degree": eq.degree,
                        "coeffs": [
                            {"alpha": list(a), "c": par.field.fmt(c)}
                            for a, c in sorted(eq.coeff_form.items())
                        ],
                    }
                )
            else:
                data["equations"].append(
                    {"degree": eq.degree, "poly": eq.f.to_string()}
                )
    return data


def dump_system(par, sys=None) -> str:
    return json.dumps(system_to_dict(par, sys), indent=2, sort_keys=True)
