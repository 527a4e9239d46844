"""Config schema, JSON loading and the built-in presets."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from typing import Any

from .errors import InvalidData, InvalidField
from .exactfield import FieldSpec, Mat, QQ
from .lefschetz import Budgets, PolarizedData

J2 = [[0, 1], [-1, 0]]


@dataclass
class Config:
    data: PolarizedData
    budgets: Budgets = dc_field(default_factory=Budgets)
    seed: int = 0

    @property
    def field(self) -> FieldSpec:
        return self.data.field

    def echo(self) -> dict:
        d = self.data
        return {
            "name": d.name,
            "field": {"min_poly": [str(c) for c in d.field.min_poly]},
            "g": d.g,
            "phi": d.phi.to_json(),
            "E_basis": [e.to_json() for e in d.e_basis],
            "extra_generators": [h.to_json() for h in d.extra_generators],
            "budgets": {
                "max_operator_dim": self.budgets.max_operator_dim,
                "max_closure_waves": self.budgets.max_closure_waves,
                "idempotent_retries": self.budgets.idempotent_retries,
                "allow_large": self.budgets.allow_large,
            },
            "seed": self.seed,
        }


def _block_diag(blocks: list[Mat]) -> Mat:
    out = blocks[0]
    for b in blocks[1:]:
        out = out.direct_sum(b)
    return out


def siegel(g: int, field: FieldSpec = QQ) -> PolarizedData:
    """E = F, Lef = Sp_2g; phi is the block sum of g copies of [[0,1],[-1,0]]."""
    if g < 1:
        raise InvalidData("siegel preset needs g >= 1")
    phi = _block_diag([Mat.from_rows(J2, field)] * g)
    return PolarizedData(g, phi, (Mat.identity(2 * g, field),), field=field, name=f"siegel(g={g})")


def _squarefree(d: int) -> bool:
    return all(d % (p * p) for p in range(2, math.isqrt(d) + 1))


def cm(d: int = 1, field: FieldSpec = QQ) -> PolarizedData:
    """Elliptic curve with multiplication by Q(sqrt(-d)), regular representation on (1, sqrt(-d))."""
    if d <= 0 or not _squarefree(d):
        raise InvalidData("cm preset needs a positive squarefree d")
    J = Mat.from_rows([[0, -d], [1, 0]], field)
    phi = Mat.from_rows(J2, field)
    return PolarizedData(1, phi, (Mat.identity(2, field), J), field=field, name=f"cm(d={d})")


def product(field: FieldSpec = QQ) -> PolarizedData:
    """Two non-isogenous elliptic curves: E = F x F acting blockwise on V1 + V2."""
    one = Mat.identity(2, field)
    zero = Mat.zeros(2, 2, field)
    phi = _block_diag([Mat.from_rows(J2, field)] * 2)
    return PolarizedData(2, phi, (one.direct_sum(zero), zero.direct_sum(one)), field=field, name="product")


PRESETS = {"siegel", "cm", "product"}


def preset(name: str, g: int | None = None, d: int | None = None, field: FieldSpec = QQ,
           budgets: Budgets | None = None, seed: int = 0) -> Config:
    if name == "siegel":
        data = siegel(1 if g is None else g, field)
    elif name == "cm":
        if g not in (None, 1):
            raise InvalidData("cm preset is defined for g = 1 only")
        data = cm(1 if d is None else d, field)
    elif name == "product":
        if g not in (None, 2):
            raise InvalidData("product preset has g = 2")
        data = product(field)
    else:
        raise InvalidData(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return Config(data, budgets or Budgets(), seed)


def parse_field(obj: Any) -> FieldSpec:
    if obj is None:
        return QQ
    if isinstance(obj, dict):
        obj = obj.get("min_poly")
    if isinstance(obj, str):
        obj = [c for c in obj.replace(" ", "").split(",") if c]
    if not isinstance(obj, list):
        raise InvalidField("field.min_poly must be a list of rational strings")
    return FieldSpec(obj)


def _parse_matrix(rows: Any, field: FieldSpec, what: str) -> Mat:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise InvalidData(f"{what} must be a non-empty list of rows")
    try:
        return Mat.from_rows(rows, field)
    except (ValueError, TypeError) as exc:
        raise InvalidData(f"{what}: {exc}") from exc


def config_from_dict(obj: dict) -> Config:
    if not isinstance(obj, dict):
        raise InvalidData("config must be a JSON object")
    field = parse_field(obj.get("field"))
    try:
        g = int(obj["g"])
        phi = _parse_matrix(obj["phi"], field, "phi")
        e_basis = tuple(_parse_matrix(e, field, "E_basis entry") for e in obj["E_basis"])
    except KeyError as exc:
        raise InvalidData(f"config is missing required key {exc}") from exc
    extras = tuple(_parse_matrix(h, field, "extra generator") for h in obj.get("extra_generators", []))
    b = obj.get("budgets", {})
    budgets = Budgets(
        max_operator_dim=int(b.get("max_operator_dim", 5000)),
        max_closure_waves=int(b.get("max_closure_waves", 64)),
        idempotent_retries=int(b.get("idempotent_retries", 10)),
        allow_large=bool(b.get("allow_large", False)),
    )
    data = PolarizedData(g, phi, e_basis, extras, field, name=str(obj.get("name", "custom")))
    return Config(data, budgets, int(obj.get("seed", 0)))


def load_config(path: str) -> Config:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidData(f"config is not valid JSON: {exc}") from exc
    return config_from_dict(obj)
