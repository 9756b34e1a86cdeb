"""JSON wire formats.

Algebra files:
    {"name": str, "dim": n, "weights": [w0, ...],
     "structure": [[i, j, k, re, im], ...],        # sparse, 0-based
     "unit": [[re, im], ...]}                       # optional

Morphism files:
    {"source": str, "target": str, "matrix": [[[re, im], ...], ...]}
    (matrix is target-dim x source-dim)

Sigma files:  {"values": [[re, im], ...]} ordered by the character list.

All floats are emitted with 17 significant digits so parse(emit(x)) is
bit-exact; complex numbers always travel as [re, im] pairs.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .algebra import Algebra, LinearMap
from .errors import SchemaError


def fmt_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError("non-finite float cannot be serialized")
    s = format(float(x), ".17g")
    return s


def render_json(obj: Any, indent: int = 0) -> str:
    """Deterministic JSON rendering: sorted keys, 17-significant-digit floats."""
    pad = " " * indent
    inner = " " * (indent + 2)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = [
            f"{inner}{json.dumps(str(k))}: {render_json(obj[k], indent + 2)}"
            for k in sorted(obj)
        ]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        rendered = [render_json(v, indent + 2) for v in obj]
        if all("\n" not in r and len(r) < 24 for r in rendered) and sum(
            len(r) for r in rendered
        ) < 72:
            return "[" + ", ".join(rendered) + "]"
        return "[\n" + ",\n".join(inner + r for r in rendered) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot render {type(obj).__name__} as JSON")


def complex_pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _check(cond: bool, violations: list[str], where: str, msg: str):
    if not cond:
        violations.append(f"{where}: {msg}")


def algebra_to_dict(algebra: Algebra) -> dict:
    entries = []
    n = algebra.dim
    for i in range(n):
        for j in range(n):
            for k in range(n):
                z = algebra.structure[i, j, k]
                if z != 0:
                    entries.append([i, j, k, float(z.real), float(z.imag)])
    doc: dict[str, Any] = {
        "name": algebra.name,
        "dim": n,
        "weights": [float(w) for w in algebra.weights],
        "structure": entries,
    }
    if algebra.unit is not None:
        doc["unit"] = [complex_pair(z) for z in algebra.unit]
    return doc


def algebra_from_dict(doc: Any, where: str = "$") -> Algebra:
    v: list[str] = []
    _check(isinstance(doc, dict), v, where, "expected an object")
    if v:
        raise SchemaError(v)
    for key in ("name", "dim", "weights", "structure"):
        _check(key in doc, v, where, f"missing field {key!r}")
    if v:
        raise SchemaError(v)
    name = doc["name"]
    _check(isinstance(name, str), v, f"{where}.name", "expected a string")
    dim = doc["dim"]
    _check(isinstance(dim, int) and not isinstance(dim, bool), v, f"{where}.dim", "expected an integer")
    if v:
        raise SchemaError(v)
    _check(dim >= 1, v, f"{where}.dim", "must be >= 1")
    weights = doc["weights"]
    _check(isinstance(weights, list) and len(weights) == dim, v, f"{where}.weights",
           f"expected a list of {dim} numbers")
    if not v:
        for idx, w in enumerate(weights):
            _check(isinstance(w, (int, float)) and not isinstance(w, bool), v,
                   f"{where}.weights[{idx}]", "expected a number")
            if not v and w <= 0:
                v.append(f"{where}.weights[{idx}]: must be > 0")
    structure = doc["structure"]
    _check(isinstance(structure, list), v, f"{where}.structure", "expected a list")
    tensor = np.zeros((dim, dim, dim), dtype=complex) if not v else None
    if not v:
        for idx, row in enumerate(structure):
            loc = f"{where}.structure[{idx}]"
            if not (isinstance(row, list) and len(row) == 5):
                v.append(f"{loc}: expected [i, j, k, re, im]")
                continue
            i, j, k, re, im = row
            ok = all(isinstance(t, int) and not isinstance(t, bool) for t in (i, j, k))
            ok = ok and all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in (re, im))
            if not ok:
                v.append(f"{loc}: expected integer indices and numeric re/im")
                continue
            if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                v.append(f"{loc}: index out of range for dim {dim}")
                continue
            tensor[i, j, k] = complex(re, im)
    unit = None
    if not v and "unit" in doc and doc["unit"] is not None:
        u = doc["unit"]
        if not (isinstance(u, list) and len(u) == dim):
            v.append(f"{where}.unit: expected a list of {dim} [re, im] pairs")
        else:
            unit = np.zeros(dim, dtype=complex)
            for idx, pair in enumerate(u):
                if not (isinstance(pair, list) and len(pair) == 2):
                    v.append(f"{where}.unit[{idx}]: expected [re, im]")
                    break
                unit[idx] = complex(pair[0], pair[1])
    if v:
        raise SchemaError(v)
    return Algebra(name=name, weights=np.array(weights, dtype=float),
                   structure=tensor, unit=unit)


def morphism_to_dict(phi: LinearMap) -> dict:
    return {
        "source": phi.source.name,
        "target": phi.target.name,
        "matrix": [[complex_pair(z) for z in row] for row in phi.matrix],
    }


def morphism_from_dict(doc: Any, source: Algebra, target: Algebra,
                       where: str = "$") -> LinearMap:
    v: list[str] = []
    _check(isinstance(doc, dict), v, where, "expected an object")
    if v:
        raise SchemaError(v)
    m = doc.get("matrix")
    _check(isinstance(m, list) and len(m) == target.dim, v, f"{where}.matrix",
           f"expected {target.dim} rows")
    matrix = np.zeros((target.dim, source.dim), dtype=complex)
    if not v:
        for r, row in enumerate(m):
            if not (isinstance(row, list) and len(row) == source.dim):
                v.append(f"{where}.matrix[{r}]: expected {source.dim} [re, im] pairs")
                break
            for c_, pair in enumerate(row):
                if not (isinstance(pair, list) and len(pair) == 2):
                    v.append(f"{where}.matrix[{r}][{c_}]: expected [re, im]")
                    break
                matrix[r, c_] = complex(pair[0], pair[1])
    if v:
        raise SchemaError(v)
    return LinearMap(source, target, matrix)


def sigma_from_dict(doc: Any, expected_len: int | None = None,
                    where: str = "$") -> np.ndarray:
    v: list[str] = []
    _check(isinstance(doc, dict) and "values" in doc, v, where,
           'expected an object with a "values" field')
    if v:
        raise SchemaError(v)
    vals = doc["values"]
    _check(isinstance(vals, list), v, f"{where}.values", "expected a list")
    if not v and expected_len is not None and len(vals) != expected_len:
        v.append(f"{where}.values: expected {expected_len} entries, got {len(vals)}")
    out = np.zeros(len(vals) if not v else 0, dtype=complex)
    if not v:
        for idx, pair in enumerate(vals):
            if not (isinstance(pair, list) and len(pair) == 2):
                v.append(f"{where}.values[{idx}]: expected [re, im]")
                break
            out[idx] = complex(pair[0], pair[1])
    if v:
        raise SchemaError(v)
    return out


def sigma_to_dict(values: np.ndarray) -> dict:
    return {"values": [complex_pair(z) for z in np.asarray(values, dtype=complex)]}


def _sparse_tensor(t: np.ndarray) -> list:
    entries = []
    it = np.nditer(t, flags=["multi_index"])
    for z in it:
        zz = complex(z)
        if zz != 0:
            i, j, k = it.multi_index
            entries.append([int(i), int(j), int(k), zz.real, zz.imag])
    return entries


def _tensor_from_sparse(entries: Any, shape: tuple[int, int, int],
                        where: str) -> np.ndarray:
    v: list[str] = []
    t = np.zeros(shape, dtype=complex)
    if not isinstance(entries, list):
        raise SchemaError([f"{where}: expected a list"])
    for idx, row in enumerate(entries):
        if not (isinstance(row, list) and len(row) == 5):
            v.append(f"{where}[{idx}]: expected [i, j, k, re, im]")
            continue
        i, j, k, re, im = row
        if not (0 <= i < shape[0] and 0 <= j < shape[1] and 0 <= k < shape[2]):
            v.append(f"{where}[{idx}]: index out of range for shape {shape}")
            continue
        t[i, j, k] = complex(re, im)
    if v:
        raise SchemaError(v)
    return t


def bundle_to_dict(desc) -> dict:
    """Serialize a ProductDescriptor together with its assembled algebra."""
    doc: dict[str, Any] = {
        "algebra": algebra_to_dict(desc.algebra),
        "descriptor": {
            "kind": desc.kind,
            "first": algebra_to_dict(desc.first),
            "second": algebra_to_dict(desc.second),
            "contractive": desc.contractive,
        },
    }
    if desc.phi is not None:
        doc["descriptor"]["phi"] = morphism_to_dict(desc.phi)
    if desc.kind == "semidirect":
        m, p = desc.first.dim, desc.second.dim
        c = desc.algebra.structure
        doc["descriptor"]["action_bi"] = _sparse_tensor(c[:m, m:, m:])
        doc["descriptor"]["action_ib"] = _sparse_tensor(c[m:, :m, m:])
    return doc


def bundle_from_dict(doc: Any, where: str = "$"):
    """Rebuild a ProductDescriptor from a build-output document.

    The product is re-assembled from the parents and checked against the
    stored tensor, so a bundle cannot drift from its own provenance.
    """
    from .constructions import SemidirectSpec, lau_product, semidirect

    if not (isinstance(doc, dict) and "descriptor" in doc and "algebra" in doc):
        raise SchemaError([f"{where}: expected a build bundle with algebra + descriptor"])
    d = doc["descriptor"]
    kind = d.get("kind")
    if kind not in ("semidirect", "lau", "direct_sum"):
        raise SchemaError([f"{where}.descriptor.kind: unknown kind {kind!r}"])
    first = algebra_from_dict(d["first"], f"{where}.descriptor.first")
    second = algebra_from_dict(d["second"], f"{where}.descriptor.second")
    stored = algebra_from_dict(doc["algebra"], f"{where}.algebra")
    if kind == "semidirect":
        m, p = first.dim, second.dim
        bi = _tensor_from_sparse(d.get("action_bi", []), (m, p, p),
                                 f"{where}.descriptor.action_bi")
        ib = _tensor_from_sparse(d.get("action_ib", []), (p, m, p),
                                 f"{where}.descriptor.action_ib")
        desc = semidirect(SemidirectSpec(first, second, bi, ib), name=stored.name)
    else:
        if "phi" not in d:
            raise SchemaError([f"{where}.descriptor.phi: missing for a lau product"])
        phi = morphism_from_dict(d["phi"], second, first, f"{where}.descriptor.phi")
        desc = lau_product(first, second, phi, force=not d.get("contractive", True),
                           name=stored.name)
    if (stored.dim != desc.algebra.dim
            or float(np.max(np.abs(stored.structure - desc.algebra.structure))) > 1e-12
            or float(np.max(np.abs(stored.weights - desc.algebra.weights))) > 1e-12):
        raise SchemaError([f"{where}: stored algebra does not match its descriptor"])
    return desc


def load_json(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError([f"{path}: line {exc.lineno} col {exc.colno}: {exc.msg}"])


def parse_algebra(path: str) -> Algebra:
    return algebra_from_dict(load_json(path), where=path)


def write_json(path: str, doc: Any):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_json(doc) + "\n")
