"""JSON run configuration for the command-line tools."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Tuple

from .exact import GaussianRational, fraction_str, to_fraction
from .radial import BranchHypothesisViolated, ExpMonomial, LaguerreBasisSpec
from .roots import MultiplicityFunction, RootSystem, RootSystemError, load_root_data, preset

__all__ = ["ConfigError", "RunConfig", "TransformRequest", "load_config", "parse_config"]

DEFAULT_GRID = (0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0)


class ConfigError(ValueError):
    """Invalid or inconsistent configuration (exit status 2)."""


@dataclass(frozen=True)
class TransformRequest:
    kind: str = "ft"
    z: object = 0
    sector: int = 0
    sign: int = 1
    terms: Optional[ExpMonomial] = None


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs.

    ``a`` is stored with its sign; ``sign`` is the branch selected by it and
    ``a_abs`` the positive parameter of :class:`LaguerreBasisSpec`.
    """

    root_system: RootSystem
    k: MultiplicityFunction
    a: Fraction
    sectors: Tuple[int, ...] = (0, 1, 2)
    truncation: int = 32
    nodes: int = 128
    seed: int = 0
    ladder_max_l: int = 7
    spectrum_max_l: int = 5
    grid: Tuple[float, ...] = DEFAULT_GRID
    transform: Optional[TransformRequest] = None
    source: str = ""

    @property
    def N(self) -> int:
        return self.root_system.dimension

    @property
    def index(self) -> Fraction:
        return self.k.index

    @property
    def sign(self) -> int:
        return 1 if self.a > 0 else -1

    @property
    def a_abs(self) -> Fraction:
        return abs(self.a)

    def sector_spec(self, m: int, sign: Optional[int] = None) -> LaguerreBasisSpec:
        return LaguerreBasisSpec(self.N, self.index, self.a_abs, m, self.sign if sign is None else sign)

    def with_overrides(self, nodes: Optional[int] = None, truncation: Optional[int] = None) -> "RunConfig":
        out = self
        if nodes is not None:
            if nodes < 1:
                raise ConfigError("--nodes must be positive")
            out = replace(out, nodes=nodes)
        if truncation is not None:
            if truncation < 1:
                raise ConfigError("--truncation must be positive")
            out = replace(out, truncation=truncation)
        return out

    def echo(self) -> List[str]:
        vals = ", ".join(f"{list(map(str, r))}:{fraction_str(v)}" for r, v in self.k.orbit_values)
        return [
            f"config: {self.source}",
            f"N={self.N} roots={len(self.root_system.roots)} exact={self.root_system.exact}",
            f"k per orbit: {vals}; <k>={fraction_str(self.index)}",
            f"a={fraction_str(self.a)} sectors={list(self.sectors)} truncation={self.truncation} "
            f"nodes={self.nodes} seed={self.seed}",
        ]


def _rational(value, what: str) -> Fraction:
    try:
        return to_fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{what}: expected a rational like \"1/2\", got {value!r}") from exc


def _complex(value, what: str):
    if isinstance(value, list):
        if len(value) != 2:
            raise ConfigError(f"{what}: expected [re, im]")
        return GaussianRational(_rational(value[0], what), _rational(value[1], what))
    return _rational(value, what)


def _root_system(doc) -> Tuple[RootSystem, Optional[MultiplicityFunction]]:
    src = doc.get("root_system")
    if src is None:
        raise ConfigError("missing 'root_system'")
    try:
        if isinstance(src, str):
            return preset(src), None
        return load_root_data(src)
    except (RootSystemError, KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"root_system: {exc}") from exc


def _multiplicity(R: RootSystem, inline: Optional[MultiplicityFunction], value) -> MultiplicityFunction:
    try:
        if value is None:
            if inline is None:
                raise ConfigError("missing 'k'")
            k = inline
        elif isinstance(value, list):
            k = MultiplicityFunction.from_orbits(R, [(e["orbit_root"], _rational(e["k"], "k")) for e in value])
        else:
            k = MultiplicityFunction.constant(R, _rational(value, "k"))
    except (RootSystemError, KeyError) as exc:
        raise ConfigError(f"k: {exc}") from exc
    if not k.is_nonnegative():
        raise ConfigError("k must be nonnegative on every orbit")
    return k


def _int(doc, key, default, minimum=0):
    v = doc.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
        raise ConfigError(f"{key}: expected an integer >= {minimum}, got {v!r}")
    return v


def _transform(doc) -> Optional[TransformRequest]:
    t = doc.get("transform")
    if t is None:
        return None
    kind = t.get("kind", "ft")
    if kind not in ("ft", "inverse_ft", "semigroup"):
        raise ConfigError(f"transform.kind must be ft, inverse_ft or semigroup, got {kind!r}")
    z = _complex(t.get("z", 0), "transform.z")
    inp = doc.get("input")
    terms = None
    sector, sign = 0, 1
    if inp is not None:
        try:
            terms = ExpMonomial.from_json(inp["terms"])
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"input.terms: {exc}") from exc
        sector = _int(inp, "sector", 0)
        branch = inp.get("branch", "+")
        if branch not in ("+", "-"):
            raise ConfigError("input.branch must be '+' or '-'")
        sign = 1 if branch == "+" else -1
    return TransformRequest(kind, z, sector, sign, terms)


def parse_config(doc: dict, source: str = "<dict>") -> RunConfig:
    """Validate a configuration document.

    Raises
    ------
    ConfigError
        On malformed fields, ``a = 0``, negative ``k`` or a sector that
        violates the branch hypothesis.
    """
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    R, inline_k = _root_system(doc)
    k = _multiplicity(R, inline_k, doc.get("k"))
    if "a" not in doc:
        raise ConfigError("missing 'a'")
    a = _rational(doc["a"], "a")
    if a == 0:
        raise ConfigError("a must be nonzero")
    sectors = doc.get("sectors", [0, 1, 2])
    if not isinstance(sectors, list) or not sectors or not all(isinstance(m, int) and m >= 0 for m in sectors):
        raise ConfigError("sectors: expected a nonempty list of nonnegative integers")
    grid = doc.get("grid", list(DEFAULT_GRID))
    try:
        grid = tuple(float(r) for r in grid)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"grid: {exc}") from exc
    if not grid or any(r <= 0 for r in grid):
        raise ConfigError("grid: radii must be positive")
    cfg = RunConfig(
        root_system=R,
        k=k,
        a=a,
        sectors=tuple(sorted(set(sectors))),
        truncation=_int(doc, "truncation", 32, 1),
        nodes=_int(doc, "nodes", 128, 1),
        seed=_int(doc, "seed", 0),
        ladder_max_l=_int(doc, "ladder_max_l", 7),
        spectrum_max_l=_int(doc, "spectrum_max_l", 5),
        grid=grid,
        transform=_transform(doc),
        source=source,
    )
    for m in cfg.sectors:
        try:
            cfg.sector_spec(m).check()
        except BranchHypothesisViolated as exc:
            raise ConfigError(f"BranchHypothesisViolated in sector m={m}: {exc}") from exc
    return cfg


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return parse_config(doc, source=path.name)
