"""JSON system/target specifications and CSV input files."""

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from ..ensemble import (
    EnsembleSystem,
    InputSequence,
    ParameterGrid,
    PiecewiseConstantInput,
    TargetFamily,
)


class SpecError(ValueError):
    """A specification or data file is malformed."""


def parse_complex(v):
    if isinstance(v, bool):
        raise SpecError(f"not a number: {v!r}")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
        return complex(v[0], v[1])
    raise SpecError(f"expected a number or an [re, im] pair, got {v!r}")


def emit_complex(z):
    z = complex(z)
    return [z.real, z.imag]


def _grid_from(param, samples=None):
    kind = param.get("kind")
    if kind == "interval":
        a, b = float(param["a"]), float(param["b"])
        num = int(samples or param.get("samples", 201))
        if not a < b or num < 2:
            raise SpecError("interval parameter needs a < b and at least two samples")
        return ParameterGrid.interval(a, b, num)
    if kind == "list":
        vals = np.array([parse_complex(v) for v in param["values"]])
        if np.all(vals.imag == 0) and np.all(np.diff(vals.real) > 0):
            return ParameterGrid(vals.real, "real_interval")
        return ParameterGrid(vals, "general_arc")
    raise SpecError(f"unknown parameter kind {kind!r}")


def validation_grid(param, grid):
    """Twice the resolution: ``2M`` points on an interval, interleaved midpoints on a list."""
    if param.get("kind") == "interval":
        return ParameterGrid.interval(float(param["a"]), float(param["b"]), 2 * len(grid))
    return grid.refined(2)


def _eval_poly_entries(entries, shape, grid):
    arr = np.empty((len(grid),) + shape, dtype=complex)
    try:
        for idx in np.ndindex(*shape):
            e = entries
            for i in idx:
                e = e[i]
            coeffs = [parse_complex(c) for c in e]
            if not coeffs:
                raise SpecError("empty coefficient list")
            arr[(slice(None),) + idx] = np.polynomial.polynomial.polyval(grid.samples, coeffs)
    except (IndexError, TypeError, KeyError) as exc:
        raise SpecError(f"entries do not match shape {shape}: {exc}") from None
    return arr


def _eval_table(values, shape, grid):
    size = int(np.prod(shape))
    if not isinstance(values, list) or len(values) != len(grid):
        raise SpecError(f"table needs one entry per grid sample ({len(grid)})")
    rows = [[parse_complex(v) for v in _flatten(row)] for row in values]
    if any(len(r) != size for r in rows):
        raise SpecError(f"every table row needs {size} entries for shape {shape}")
    return np.array(rows, dtype=complex).reshape((len(grid),) + shape)


def _flatten(row):
    """Flatten nested lists whose leaves are numbers or [re, im] pairs."""
    if isinstance(row, (int, float)) or (isinstance(row, list) and len(row) == 2 and all(
            isinstance(x, (int, float)) for x in row)):
        return [row]
    if not isinstance(row, list):
        raise SpecError(f"bad table entry {row!r}")
    out = []
    for r in row:
        out.extend(_flatten(r))
    return out


def _field(block, shape, grid, name):
    if not isinstance(block, dict):
        raise SpecError(f"{name} must be an object")
    kind = block.get("kind")
    if kind == "poly":
        return _eval_poly_entries(block["entries"], shape, grid)
    if kind == "table":
        return _eval_table(block["values"], shape, grid)
    raise SpecError(f"{name}: unknown kind {kind!r}")


@dataclass
class SystemSpec:
    raw: dict
    n: int
    m: int
    time: str

    @property
    def tabulated(self):
        return self.raw["A"].get("kind") == "table" or self.raw["B"].get("kind") == "table"

    def grid(self, samples=None):
        return _grid_from(self.raw["parameter"], samples)

    def system(self, grid):
        A = _field(self.raw["A"], (self.n, self.n), grid, "A")
        B = _field(self.raw["B"], (self.n, self.m), grid, "B")
        return EnsembleSystem(A, B, grid)

    def validation(self, grid):
        """Validation grid, or the synthesis grid itself for tabulated data."""
        if self.tabulated:
            return grid
        return validation_grid(self.raw["parameter"], grid)


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path} is not valid JSON: {exc}") from None


def load_system(path):
    raw = _read_json(path)
    try:
        n, m = int(raw["n"]), int(raw["m"])
        time = raw.get("time", "discrete")
        for key in ("parameter", "A", "B"):
            raw[key]
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"system spec is missing or has a bad field: {exc}") from None
    if n < 1 or m < 1:
        raise SpecError("n and m must be positive")
    if time not in ("discrete", "continuous"):
        raise SpecError(f"time must be 'discrete' or 'continuous', got {time!r}")
    spec = SystemSpec(raw, n, m, time)
    try:
        spec.system(spec.grid())
    except (KeyError, ValueError) as exc:
        raise SpecError(f"system spec does not evaluate: {exc}") from None
    return spec


@dataclass
class TargetSpec:
    raw: dict

    @property
    def tabulated(self):
        return self.raw.get("kind") == "table"

    def target(self, grid, n):
        if self.raw.get("kind") == "poly":
            entries = self.raw["entries"]
            if len(entries) != n:
                raise SpecError(f"target has {len(entries)} components, system has n={n}")
            x = _eval_poly_entries(entries, (n,), grid)
        elif self.raw.get("kind") == "table":
            x = _eval_table(self.raw["values"], (n,), grid)
        else:
            raise SpecError(f"unknown target kind {self.raw.get('kind')!r}")
        return TargetFamily(x)


def load_target(path):
    raw = _read_json(path)
    if not isinstance(raw, dict):
        raise SpecError("target spec must be an object")
    return TargetSpec(raw)


def write_input(path_or_buf, inp):
    """``t,re,im`` rows, or a ``tau=<v>`` line followed by ``l,re,im`` rows."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if isinstance(inp, PiecewiseConstantInput):
        buf.write(f"tau={inp.tau!r}\n")
        w.writerow(["l", "re", "im"])
    else:
        w.writerow(["t", "re", "im"])
    vals = inp.values if inp.values.ndim == 1 else inp.values[:, 0]
    for i, v in enumerate(vals):
        w.writerow([i, repr(float(v.real)), repr(float(v.imag))])
    text = buf.getvalue()
    if hasattr(path_or_buf, "write"):
        path_or_buf.write(text)
    else:
        with open(path_or_buf, "w") as fh:
            fh.write(text)


def read_input(path):
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror}") from None
    tau = None
    if lines and lines[0].startswith("tau="):
        try:
            tau = float(lines[0][4:])
        except ValueError:
            raise SpecError(f"bad step length line {lines[0]!r}") from None
        lines = lines[1:]
    rows = list(csv.reader(lines))
    expect = ["l", "re", "im"] if tau is not None else ["t", "re", "im"]
    if not rows or rows[0] != expect:
        raise SpecError(f"input file header must be {','.join(expect)}")
    vals = []
    for k, row in enumerate(rows[1:]):
        if len(row) != 3:
            raise SpecError(f"row {k + 1} has {len(row)} fields, expected 3")
        try:
            idx, re, im = int(row[0]), float(row[1]), float(row[2])
        except ValueError:
            raise SpecError(f"row {k + 1} is not numeric") from None
        if idx != k:
            raise SpecError(f"row {k + 1} has index {idx}, expected {k}")
        vals.append(complex(re, im))
    if not vals:
        raise SpecError("input file has no values")
    if tau is not None:
        if not tau > 0:
            raise SpecError("tau must be positive")
        return PiecewiseConstantInput(tau, np.array(vals))
    return InputSequence(np.array(vals))
