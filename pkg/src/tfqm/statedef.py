"""State-definition files.

A state file is a UTF-8 JSON object. Every family shares the optional keys
``schema`` (must be 1), ``alphas`` (list of +1/-1, one per photon) and
``grid`` (``{"n_points": int >= 2, "span": float >= 5}``, the half-width of
each axis in marginal standard deviations). Family-specific keys:

=====================  ==========================================  =====================
family                 required                                    optional
=====================  ==========================================  =====================
separable              n, delta_omega                              means
gaussian-pair          delta_omega, rho                            mean1, mean2
heisenberg             n, delta_omega, exactly one of sigma / eta  offsets
coherent               beta, delta_omega                           mean
explicit-covariance    cov                                         means
=====================  ==========================================  =====================

``beta`` is a number or a ``[re, im]`` pair. Unknown keys are rejected.

Example::

    {"schema": 1, "family": "heisenberg", "n": 2, "delta_omega": 1.0,
     "sigma": 0.1, "alphas": [1, 1]}
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

import numpy as np

from . import spectra
from .errors import RangeError, SchemaError, StateSyntaxError, TfqmError
from .metrology import CoherentSpec
from .spectra import GaussianState, SignVector

SCHEMA_VERSION = 1

FAMILIES = {
    "separable": ({"n", "delta_omega"}, {"means"}),
    "gaussian-pair": ({"delta_omega", "rho"}, {"mean1", "mean2"}),
    "heisenberg": ({"n", "delta_omega"}, {"sigma", "eta", "offsets"}),
    "coherent": ({"beta", "delta_omega"}, {"mean"}),
    "explicit-covariance": ({"cov"}, {"means"}),
}
COMMON = {"schema", "family", "alphas", "grid"}
GRID_KEYS = {"n_points", "span"}


@dataclass(frozen=True)
class StateSpec:
    family: str
    parameters: dict
    alphas: tuple | None = None
    grid: dict | None = None
    source: str = field(default="<string>", compare=False)

    @property
    def n(self) -> int:
        p = self.parameters
        if self.family in ("separable", "heisenberg"):
            return p["n"]
        if self.family == "gaussian-pair":
            return 2
        if self.family == "coherent":
            return 1
        return len(p["cov"])


def _is_number(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


class _Checker:
    def __init__(self, text, source):
        self.text = text
        self.source = source

    def where(self, key):
        name = key.split(".")[-1].split("[")[0]
        m = re.search(rf'"{re.escape(name)}"\s*:', self.text)
        if m is None:
            return f"{self.source}"
        return f"{self.source}:{self.text.count(chr(10), 0, m.start()) + 1}"

    def schema(self, msg, key):
        return SchemaError(f"{msg} ({self.where(key)})", key=key)

    def range(self, msg, key):
        return RangeError(f"{msg} ({self.where(key)})", key=key)

    def number(self, doc, key):
        x = doc[key]
        if not _is_number(x):
            raise self.schema(f"expected a finite number, got {json.dumps(x)}", key)
        return float(x)

    def positive(self, doc, key):
        x = self.number(doc, key)
        if x <= 0:
            raise self.range(f"must be > 0, got {x!r}", key)
        return x

    def integer(self, doc, key, minimum):
        x = doc[key]
        if not _is_int(x):
            raise self.schema(f"expected an integer, got {json.dumps(x)}", key)
        if x < minimum:
            raise self.range(f"must be >= {minimum}, got {x}", key)
        return x

    def vector(self, doc, key, length):
        x = doc[key]
        if not isinstance(x, list) or not all(_is_number(v) for v in x):
            raise self.schema("expected a list of numbers", key)
        if len(x) != length:
            raise self.schema(f"expected {length} entries, got {len(x)}", key)
        return [float(v) for v in x]


def _reject_duplicates(pairs):
    seen = {}
    for k, v in pairs:
        if k in seen:
            raise SchemaError("duplicate key", key=k)
        seen[k] = v
    return seen


def parse(text, source="<string>") -> StateSpec:
    """Parse and validate a state document; raises StateSyntaxError, SchemaError or RangeError."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise StateSyntaxError(f"{source}: not valid UTF-8 ({e})") from e
    try:
        doc = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as e:
        raise StateSyntaxError(f"{source}: {e.msg}", line=e.lineno, column=e.colno) from e
    if not isinstance(doc, dict):
        raise StateSyntaxError(f"{source}: top level must be a JSON object")
    c = _Checker(text, source)

    if "schema" in doc:
        version = doc["schema"]
        if not _is_int(version):
            raise c.schema("expected an integer schema version", "schema")
        if version != SCHEMA_VERSION:
            raise c.range(f"unsupported schema version {version} (this reader handles {SCHEMA_VERSION})", "schema")
    if "family" not in doc:
        raise SchemaError(f"missing required key ({source})", key="family")
    family = doc["family"]
    if family not in FAMILIES:
        raise c.schema(f"unknown family {json.dumps(family)}; expected one of {sorted(FAMILIES)}", "family")
    required, optional = FAMILIES[family]
    for key in sorted(set(doc) - required - optional - COMMON):
        raise c.schema(f"unknown key for family {family!r}", key)
    for key in sorted(required - set(doc)):
        raise SchemaError(f"missing required key for family {family!r} ({source})", key=key)

    params = {}
    if family == "separable":
        params["n"] = n = c.integer(doc, "n", 1)
        params["delta_omega"] = c.positive(doc, "delta_omega")
        if "means" in doc:
            params["means"] = c.vector(doc, "means", n)
    elif family == "gaussian-pair":
        n = 2
        params["delta_omega"] = c.positive(doc, "delta_omega")
        rho = c.number(doc, "rho")
        if not abs(rho) < 1:
            raise c.range(f"|rho| must be < 1, got {rho!r}", "rho")
        params["rho"] = rho
        for key in ("mean1", "mean2"):
            if key in doc:
                params[key] = c.number(doc, key)
    elif family == "heisenberg":
        params["n"] = n = c.integer(doc, "n", 2)
        params["delta_omega"] = dw = c.positive(doc, "delta_omega")
        has_sigma, has_eta = "sigma" in doc, "eta" in doc
        if has_sigma and has_eta:
            raise c.schema("sigma and eta are mutually exclusive", "eta")
        if not (has_sigma or has_eta):
            raise SchemaError(f"one of sigma or eta is required ({source})", key="sigma")
        if has_eta:
            eta = c.number(doc, "eta")
            if not 0.0 <= eta <= 1.0:
                raise c.range(f"must lie in [0, 1], got {eta!r}", "eta")
            params["eta"] = eta
        else:
            sigma = c.number(doc, "sigma")
            limit = dw * math.sqrt(n / (n - 1))
            if not 0.0 <= sigma <= limit * (1 + 1e-12):
                raise c.range(f"must lie in [0, {limit:.6g}] for n={n}, got {sigma!r}", "sigma")
            params["sigma"] = sigma
        if "offsets" in doc:
            params["offsets"] = c.vector(doc, "offsets", n)
    elif family == "coherent":
        n = 1
        beta = doc["beta"]
        if _is_number(beta):
            params["beta"] = float(beta)
        elif isinstance(beta, list) and len(beta) == 2 and all(_is_number(v) for v in beta):
            params["beta"] = [float(beta[0]), float(beta[1])]
        else:
            raise c.schema("expected a number or a [re, im] pair", "beta")
        params["delta_omega"] = c.positive(doc, "delta_omega")
        if "mean" in doc:
            params["mean"] = c.number(doc, "mean")
    else:
        cov = doc["cov"]
        if (
            not isinstance(cov, list)
            or not cov
            or not all(isinstance(row, list) and len(row) == len(cov) for row in cov)
            or not all(_is_number(v) for row in cov for v in row)
        ):
            raise c.schema("expected a non-empty square matrix (list of equal-length rows)", "cov")
        n = len(cov)
        cov = [[float(v) for v in row] for row in cov]
        try:
            GaussianState(np.zeros(n), cov)
        except TfqmError as e:
            raise c.range(str(e), "cov") from None
        params["cov"] = cov
        if "means" in doc:
            params["means"] = c.vector(doc, "means", n)

    alphas = None
    if "alphas" in doc:
        raw = doc["alphas"]
        if not isinstance(raw, list) or not all(_is_int(v) for v in raw):
            raise c.schema("expected a list of integers", "alphas")
        if len(raw) != n:
            raise c.schema(f"expected {n} signs, got {len(raw)}", "alphas")
        if any(v not in (1, -1) for v in raw):
            raise c.range("entries must be +1 or -1", "alphas")
        alphas = tuple(raw)

    grid = None
    if "grid" in doc:
        g = doc["grid"]
        if not isinstance(g, dict):
            raise c.schema("expected an object", "grid")
        for key in sorted(set(g) - GRID_KEYS):
            raise c.schema("unknown key", f"grid.{key}")
        grid = {}
        if "n_points" in g:
            if not _is_int(g["n_points"]):
                raise c.schema("expected an integer", "grid.n_points")
            if g["n_points"] < 2:
                raise c.range("must be >= 2", "grid.n_points")
            grid["n_points"] = g["n_points"]
        if "span" in g:
            if not _is_number(g["span"]):
                raise c.schema("expected a finite number", "grid.span")
            if g["span"] < spectra.COVERAGE_SIGMAS:
                raise c.range(f"must be >= {spectra.COVERAGE_SIGMAS:g} standard deviations", "grid.span")
            grid["span"] = float(g["span"])

    return StateSpec(family, params, alphas, grid, source)


def load(path) -> StateSpec:
    with open(path, "rb") as fh:
        return parse(fh.read(), source=str(path))


def serialize(spec: StateSpec) -> str:
    doc = {"schema": SCHEMA_VERSION, "family": spec.family}
    doc.update(spec.parameters)
    if spec.alphas is not None:
        doc["alphas"] = list(spec.alphas)
    if spec.grid is not None:
        doc["grid"] = dict(spec.grid)
    return json.dumps(doc, indent=2) + "\n"


def _grid_settings(spec, n_points, span):
    g = spec.grid or {}
    return g.get("n_points", n_points), g.get("span", span)


def heisenberg_sigma(spec: StateSpec) -> float:
    p = spec.parameters
    if "sigma" in p:
        return p["sigma"]
    return spectra.sigma_from_eta(p["n"], p["delta_omega"], p["eta"])


def realize(spec: StateSpec, n_points=spectra.DEFAULT_POINTS, span=spectra.DEFAULT_SPAN):
    """Build the state described by ``spec``.

    Returns a GaussianState (separable, heisenberg, explicit-covariance), a
    Jsa2D (gaussian-pair) or a CoherentSpec (coherent). Grid settings in the
    file override ``n_points`` / ``span``.
    """
    p = spec.parameters
    n_points, span = _grid_settings(spec, n_points, span)
    try:
        if spec.family == "separable":
            return spectra.build_separable(p["n"], p["delta_omega"], p.get("means"))
        if spec.family == "heisenberg":
            return spectra.build_heisenberg_family(
                p["n"], p["delta_omega"], heisenberg_sigma(spec), p.get("offsets"), spec.alphas
            )
        if spec.family == "explicit-covariance":
            n = len(p["cov"])
            return GaussianState(p.get("means", [0.0] * n), p["cov"])
        if spec.family == "gaussian-pair":
            m1, m2, dw = p.get("mean1", 0.0), p.get("mean2", 0.0), p["delta_omega"]
            return spectra.build_gaussian_pair(
                m1, m2, dw, p["rho"],
                spectra.default_grid(m1, dw, n_points, span),
                spectra.default_grid(m2, dw, n_points, span),
            )
        beta = p["beta"]
        beta = complex(*beta) if isinstance(beta, list) else complex(beta)
        mean, dw = p.get("mean", 0.0), p["delta_omega"]
        return CoherentSpec(beta, spectra.gaussian_spectrum(mean, dw, spectra.default_grid(mean, dw, n_points, span)))
    except TfqmError as e:
        e.args = (f"{spec.source}: {e}",)
        raise


def realize_grid(spec: StateSpec, n_points=spectra.DEFAULT_POINTS, span=spectra.DEFAULT_SPAN):
    """Like :func:`realize` but bridges Gaussian states to grid states (n <= 2)."""
    state = realize(spec, n_points, span)
    n_points, span = _grid_settings(spec, n_points, span)
    try:
        if isinstance(state, GaussianState):
            sd = np.sqrt(np.diag(state.cov))
            grids = [spectra.default_grid(m, s, n_points, span) for m, s in zip(state.mean, sd)]
            if state.n == 1:
                return spectra.gaussian_to_spectrum(state, grids[0])
            if state.n == 2:
                return spectra.gaussian_to_jsa(state, *grids)
            raise spectra.UnsupportedN(f"grid rendering supports n <= 2, got n = {state.n}")
        if isinstance(state, CoherentSpec):
            return state.spectrum
        return state
    except TfqmError as e:
        e.args = (f"{spec.source}: {e}",)
        raise


def signs(spec: StateSpec) -> SignVector:
    return SignVector(spec.alphas) if spec.alphas is not None else SignVector.ones(spec.n)
