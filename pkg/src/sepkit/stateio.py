"""State-file parsing and report serialization for the command line.

A state file is a JSON document with ``n_qubits`` and exactly one of:

* ``weights``: ``{"lambda0_plus": x, "lambda0_minus": y, "lambdas": [...]}``
  where each number may also be a rational string like ``"1/5"`` (parsed to
  the nearest double, noted in the report);
* ``matrix``: ``{"re": [[...]], "im": [[...]]}``, row-major with qubit 0 as
  the most significant index bit. Matrices must be Hermitian with unit
  trace within 1e-9.

Reports are JSON objects with a fixed key order, a ``tool_version`` field,
and newline-terminated output. By default floats are emitted with the
shortest representation that round-trips exactly; ``precision`` below 17
rounds to that many significant digits first.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import tensor
from .family import GhzWeights

MATRIX_ATOL = 1e-9


class StateFileError(ValueError):
    """Malformed or invalid input state file."""


@dataclass
class StateInput:
    n_qubits: int
    weights: GhzWeights | None
    matrix: np.ndarray | None
    notes: tuple[str, ...]


def qubit_label(q: int) -> str:
    if q >= len(string.ascii_uppercase):
        raise ValueError(f"qubit index {q} has no letter label")
    return string.ascii_uppercase[q]


def parse_qubit(token: str, n: int) -> int:
    """Accept either a letter (A, B, ...) or a 0-based index."""
    token = token.strip()
    if token.isdigit():
        q = int(token)
    elif len(token) == 1 and token.upper() in string.ascii_uppercase:
        q = string.ascii_uppercase.index(token.upper())
    else:
        raise StateFileError(f"cannot parse qubit {token!r}")
    if not 0 <= q < n:
        raise StateFileError(f"qubit {token!r} out of range for {n} qubits")
    return q


def _number(value, field: str, notes: list[str]) -> float:
    if isinstance(value, bool):
        raise StateFileError(f"{field} must be a number")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            frac = Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise StateFileError(f"{field}: cannot parse rational {value!r}") from exc
        notes.append(f"{field} parsed from rational {value} to nearest double")
        return float(frac)
    raise StateFileError(f"{field} must be a number or rational string")


def _parse_weights(n: int, raw: dict, notes: list[str]) -> GhzWeights:
    if not isinstance(raw, dict):
        raise StateFileError("weights must be an object")
    for key in ("lambda0_plus", "lambda0_minus", "lambdas"):
        if key not in raw:
            raise StateFileError(f"weights missing field {key!r}")
    lams_raw = raw["lambdas"]
    if not isinstance(lams_raw, list):
        raise StateFileError("weights.lambdas must be an array")
    lams = tuple(
        _number(v, f"lambdas[{i}]", notes) for i, v in enumerate(lams_raw)
    )
    # optional: an explicit delta (reports emit it so boundary cases round-trip
    # exactly) and the canonicalization flag
    delta = raw.get("delta")
    if delta is not None:
        delta = _number(delta, "delta", notes)
    flipped = raw.get("basis_flipped", False)
    if not isinstance(flipped, bool):
        raise StateFileError("weights.basis_flipped must be a boolean")
    try:
        return GhzWeights(
            n_qubits=n,
            lambda0_plus=_number(raw["lambda0_plus"], "lambda0_plus", notes),
            lambda0_minus=_number(raw["lambda0_minus"], "lambda0_minus", notes),
            lambdas=lams,
            basis_flipped=flipped,
            delta=delta,
        )
    except ValueError as exc:
        raise StateFileError(f"invalid weights: {exc}") from exc


def _parse_matrix(n: int, raw: dict, notes: list[str]) -> np.ndarray:
    if not isinstance(raw, dict) or "re" not in raw:
        raise StateFileError("matrix must be an object with fields re (and im)")
    try:
        re = np.asarray(raw["re"], dtype=float)
        im = np.asarray(raw.get("im", np.zeros_like(re)), dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateFileError(f"matrix entries are not numeric: {exc}") from exc
    if re.ndim != 2 or re.shape != im.shape or re.shape[0] != re.shape[1]:
        raise StateFileError("matrix re/im must be equal-shape square 2-d arrays")
    if re.shape[0] != (1 << n):
        raise StateFileError(
            f"matrix dimension {re.shape[0]} does not match n_qubits={n}"
        )
    rho = re + 1j * im
    try:
        tensor.check_density(rho, herm_atol=MATRIX_ATOL, trace_atol=MATRIX_ATOL)
    except ValueError as exc:
        raise StateFileError(f"invalid density matrix: {exc}") from exc
    tr = rho.trace().real
    if tr != 1.0:
        rho = rho / tr
        notes.append(f"matrix trace {tr!r} renormalized to 1")
    return rho


def load_state(path: str) -> StateInput:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise StateFileError("state file must be a JSON object")
    if "n_qubits" not in doc:
        raise StateFileError("state file missing n_qubits")
    n = doc["n_qubits"]
    if not isinstance(n, int) or n < 2:
        raise StateFileError(f"n_qubits must be an integer >= 2, got {n!r}")
    has_w = "weights" in doc
    has_m = "matrix" in doc
    if has_w == has_m:
        raise StateFileError("state file must carry exactly one of weights/matrix")
    notes: list[str] = []
    if has_w:
        weights = _parse_weights(n, doc["weights"], notes)
        return StateInput(n_qubits=n, weights=weights, matrix=None, notes=tuple(notes))
    matrix = _parse_matrix(n, doc["matrix"], notes)
    return StateInput(n_qubits=n, weights=None, matrix=matrix, notes=tuple(notes))


def weights_dict(w: GhzWeights) -> dict:
    return {
        "lambda0_plus": w.lambda0_plus,
        "lambda0_minus": w.lambda0_minus,
        "lambdas": list(w.lambdas),
        "delta": w.delta,
        "basis_flipped": w.basis_flipped,
    }


def ket_as_pairs(v: np.ndarray) -> list[list[float]]:
    return [[float(a.real), float(a.imag)] for a in np.asarray(v, dtype=complex)]


def ensemble_dict(e) -> dict:
    return {
        "n_qubits": e.n_qubits,
        "terms": [
            {"weight": float(weight), "factors": [ket_as_pairs(f) for f in factors]}
            for weight, factors in e.terms
        ],
    }


def round_floats(obj, sig: int):
    """Round every float in a JSON-ready structure to ``sig`` significant digits."""
    if isinstance(obj, float):
        return float(f"{obj:.{sig}g}")
    if isinstance(obj, dict):
        return {k: round_floats(v, sig) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v, sig) for v in obj]
    return obj


def dump_report(report: dict, precision: int = 17) -> str:
    if precision < 17:
        report = round_floats(report, precision)
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"
