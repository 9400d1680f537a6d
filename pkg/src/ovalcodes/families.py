"""Named code families and the predicted-versus-enumerated verification report."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field as dc_field
from typing import Callable

from .codes import (LinearCode, WeightDistribution, dual_min_distance_via_columns,
                    macwilliams_transform, sphere_packing_max_d, weight_distribution)
from .formulas import (OutsideTheoremScope, PredictedDistribution, distribution_mismatch,
                       optimality_label, predict_conic, predict_conic_subfield, predict_hyperoval,
                       predict_segre_binary, predict_translation_binary, predict_translation_odd)
from .geometry import conic_code, hyperoval_code, segre_opoly, translation_opoly
from .gf import FieldError, FieldSpec, make_field
from .subfield import (NoClosedFormWarning, SubfieldBasis, subfield_code, trace_code_conic,
                       trace_code_segre, trace_code_translation, trace_code_translation_odd)


class NoOracle(OutsideTheoremScope):
    """The code can be built but there is no closed form to compare against."""


@dataclass(frozen=True)
class Family:
    name: str
    characteristic: str  # "even" or "odd"
    build: Callable[[FieldSpec], LinearCode]
    predict: Callable[[int, int], PredictedDistribution]
    # the claimed dual minimum distance, or None when no claim is made
    dual_claim: Callable[[int, int], int | None]
    # geometric parent for the basis-expansion construction, if any
    parent: Callable[[FieldSpec], LinearCode] | None = None
    min_m: int = 1

    def check_params(self, p: int, m: int) -> None:
        if self.characteristic == "even" and p != 2:
            raise FieldError(f"{self.name} needs p = 2")
        if self.characteristic == "odd" and p == 2:
            raise FieldError(f"{self.name} needs p odd")
        if m < self.min_m:
            raise FieldError(f"{self.name} needs m >= {self.min_m}")


def _segre_parent(field: FieldSpec) -> LinearCode:
    return hyperoval_code(segre_opoly(field))


def _segre_build(field: FieldSpec) -> LinearCode:
    if field.m % 2 == 0:
        # the even-m code is still well defined through its trace representation
        return trace_code_segre(field)
    return hyperoval_code(segre_opoly(field))


def _predict_segre_hyperoval(p: int, m: int) -> PredictedDistribution:
    if m % 2 == 0:
        raise NoOracle("x^6 is an o-polynomial only for odd m")
    return predict_hyperoval(p**m)


def _predict_segre(p: int, m: int) -> PredictedDistribution:
    if m % 2 == 0:
        raise NoOracle("no closed-form oracle for the Segre subfield code with even m")
    return predict_segre_binary(m)


FAMILIES: dict[str, Family] = {
    f.name: f
    for f in (
        Family("hyperoval-translation", "even", lambda F: hyperoval_code(translation_opoly(F)),
               lambda p, m: predict_hyperoval(p**m), lambda p, m: 4, min_m=2),
        Family("hyperoval-segre", "even", _segre_build, _predict_segre_hyperoval,
               lambda p, m: 4 if m % 2 else None, min_m=3),
        Family("conic", "odd", conic_code, lambda p, m: predict_conic(p**m), lambda p, m: 4),
        Family("translation-binary", "even", trace_code_translation,
               lambda p, m: predict_translation_binary(m), lambda p, m: 4,
               parent=lambda F: hyperoval_code(translation_opoly(F)), min_m=2),
        Family("segre", "even", trace_code_segre, _predict_segre,
               lambda p, m: 4 if m % 2 else None, parent=_segre_parent, min_m=2),
        Family("translation-odd", "odd", trace_code_translation_odd, predict_translation_odd,
               lambda p, m: None),
        Family("conic-subfield", "odd", trace_code_conic, predict_conic_subfield,
               lambda p, m: 4 if p > 3 and m > 1 else None, parent=conic_code),
    )
}


def get_family(name: str) -> Family:
    try:
        return FAMILIES[name]
    except KeyError:
        raise FieldError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}") from None


def build_code(name: str, field: FieldSpec, basis: SubfieldBasis | None = None) -> LinearCode:
    """Construct a family member; with ``basis``, subfield families go through basis expansion."""
    fam = get_family(name)
    fam.check_params(field.p, field.m)
    if basis is None:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NoClosedFormWarning)
            code = fam.build(field)
    else:
        if fam.parent is None:
            raise FieldError(f"{name} has no basis-expansion construction")
        code = subfield_code(fam.parent(field), basis)
    return LinearCode(code.field, code.generator, name=name)


@dataclass
class VerificationReport:
    family: str
    p: int
    m: int
    n: int
    k: int
    predicted: dict[int, int]
    enumerated: dict[int, int]
    mismatch_rows: list[dict]
    min_distance: int
    dual: dict
    optimality: str
    notes: list[str] = dc_field(default_factory=list)

    @property
    def distribution_match(self) -> bool:
        return not self.mismatch_rows

    @property
    def dual_match(self) -> bool:
        claim = self.dual.get("claimed_d")
        return claim is None or (self.dual["d_macwilliams"] == claim and self.dual["d_columns"] == claim)

    @property
    def match(self) -> bool:
        return self.distribution_match and self.dual_match

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "p": self.p,
            "m": self.m,
            "n": self.n,
            "k": self.k,
            "predicted": {str(w): c for w, c in self.predicted.items()},
            "enumerated": {str(w): c for w, c in self.enumerated.items()},
            "match": self.match,
            "mismatch_rows": self.mismatch_rows,
            "min_distance": self.min_distance,
            "dual": self.dual,
            "optimality": self.optimality,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def verify_family(name: str, p: int, m: int, *, field: FieldSpec | None = None,
                  budget: int | None = None, workers: int = 1,
                  basis: SubfieldBasis | None = None) -> VerificationReport:
    """Enumerate a family member and compare with its closed form.

    Raises :class:`NoOracle` / :class:`OutsideTheoremScope` before any
    enumeration when no closed form applies.
    """
    fam = get_family(name)
    fam.check_params(p, m)
    pred = fam.predict(p, m)
    field = make_field(p, m) if field is None else field
    if (field.p, field.m) != (p, m):
        raise FieldError("field does not match (p, m)")
    code = build_code(name, field, basis)
    dist = weight_distribution(code, budget=budget, workers=workers)
    notes = []
    if (code.n, code.k) != (pred.n, pred.k):
        notes.append(f"parameters [{code.n},{code.k}] differ from predicted [{pred.n},{pred.k}]")
    dual = dual_report(code, dist, budget=budget)
    dual["claimed_d"] = fam.dual_claim(p, m)
    predicted = pred.merged()
    mismatch = distribution_mismatch(predicted, dist.counts)
    if notes and not mismatch:
        mismatch = [{"weight": None, "predicted": f"[{pred.n},{pred.k}]", "enumerated": f"[{code.n},{code.k}]"}]
    d = dist.min_distance
    return VerificationReport(name, p, m, code.n, code.k, predicted, dict(dist.counts), mismatch, d,
                              dual, optimality_label(code.n, code.k, d, code.field.q).value, notes)


def dual_report(code: LinearCode, dist: WeightDistribution, budget: int | None = None) -> dict:
    """Dual parameters from the MacWilliams transform and, independently, a column search."""
    n, k = code.n, code.k
    out: dict = {"n": n, "k": n - k}
    if k == n:
        out.update(d_macwilliams=None, d_columns=None, sphere_packing_max_d=None, optimality=None)
        return out
    dual_dist = macwilliams_transform(dist)
    cols = dual_min_distance_via_columns(code, budget=budget)
    sp = sphere_packing_max_d(n, n - k, code.field.q)
    out.update(
        d_macwilliams=dual_dist.min_distance,
        d_columns=cols.distance,
        columns_certificate={"support": list(cols.support), "coefficients": list(cols.coefficients)},
        sphere_packing_max_d=sp,
        optimality=optimality_label(n, n - k, dual_dist.min_distance, code.field.q).value,
    )
    return out

