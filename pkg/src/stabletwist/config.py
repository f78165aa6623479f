"""Experiment declarations: TOML files naming a field, an algebra, a triple and a resolution."""

from __future__ import annotations

import os
import re
import sys
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import permgroup as pg
from .algebra import Algebra, QuiverPresentation, corner, group_algebra, quiver_algebra, subalgebra_gen
from .exactcore import WorkbenchError, make_field
from .expr import _read_cycles, element
from .modrep import (
    RightModule,
    cosyzygy,
    projective_indecomposable,
    quotient,
    radical_of,
    regular_module,
    simple_module,
    submodule,
    syzygy,
    trivial_module,
)
from .resolutions import (
    char_p_period1_resolution,
    group_trivial_resolution,
    resolution_from_declaration,
    truncated_poly_resolution,
)


class ConfigError(WorkbenchError):
    pass


SHIPPED = ("ex61i", "ex61ii", "ex61iii", "ex63n2_p1", "ex63n2_p2", "d8_twist")


def locate(name_or_path: str) -> Path:
    p = Path(name_or_path)
    if p.exists():
        return p
    stem = p.name[:-5] if p.name.endswith(".toml") else p.name
    res = resources.files("stabletwist") / "configs" / f"{stem}.toml"
    if res.is_file():
        return Path(str(res))
    raise ConfigError(f"no config file or shipped example named {name_or_path!r}")


def load(name_or_path: str, seed: int | None = None) -> "Experiment":
    path = locate(name_or_path)
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    env = os.environ.get("WORKBENCH_SEED")
    if seed is None and env is not None:
        seed = int(env)
    if seed is None:
        seed = int(raw.get("seed", 0))
    return Experiment(raw, seed, str(path))


def _perm(degree: int, text: str):
    return pg.from_cycles(degree, _read_cycles(text))


_FUNC = re.compile(r"^(Omega|rad|rho)(?:\^(-?\d+))?\((.*)\)$")
_CYCLIC = re.compile(r"^e(\w+)A/(.+)\*A$")


@dataclass
class Experiment:
    raw: dict
    seed: int
    path: str = ""
    _modules: dict = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.raw.get("name", Path(self.path).stem)

    @property
    def claimed(self) -> int:
        return int(self.raw.get("claimed_assumption", 1))

    @cached_property
    def field(self):
        f = self.raw["field"]
        return make_field(int(f["p"]), int(f.get("m", 1)))

    @cached_property
    def group(self):
        a = self.raw["algebra"]
        if a["kind"] != "group":
            return None
        deg = int(a["degree"])
        return pg.enumerate_group(deg, [_perm(deg, g) for g in a["generators"]])

    @cached_property
    def algebra(self) -> Algebra:
        a = self.raw["algebra"]
        F = self.field
        if a["kind"] == "group":
            A = group_algebra(F, self.group)
        elif a["kind"] == "quiver":
            Q = QuiverPresentation(
                list(a["vertices"]), [tuple(x) for x in a["arrows"]], list(a["relations"]), int(a["bound"])
            )
            A = quiver_algebra(F, Q)
        else:
            raise ConfigError(f"unknown algebra kind {a['kind']!r}")
        if "idempotents" in a:
            A.set_idempotents([element(A, s) for s in a["idempotents"]])
        if "simple_labels" in a:
            A.meta["simple_labels"] = list(a["simple_labels"])
        return A

    def _sub(self, key):
        A = self.algebra
        return subalgebra_gen(A, [element(A, s) for s in self.raw["triple"][key]])

    @cached_property
    def R(self):
        return self._sub("R")

    @cached_property
    def B(self):
        return self._sub("B")

    @cached_property
    def groups(self):
        t = self.raw["triple"]
        if not t.get("semidirect") or self.group is None:
            return None
        G = self.group
        N = pg.subgroup(G, [_perm(G.degree, s) for s in t["R"]])
        H = pg.subgroup(G, [_perm(G.degree, s) for s in t["B"]])
        return G, N, H

    @cached_property
    def resolution(self):
        r = self.raw["resolution"]
        A, B = self.algebra, self.B
        kind = r["kind"]
        gen_text = r.get("generator", self.raw["triple"]["B"][0])
        g = np.atleast_2d(B.coords(element(A, gen_text)))[0]
        if kind == "group":
            return group_trivial_resolution(B.algebra, g, r.get("period"))
        if kind == "period1":
            return char_p_period1_resolution(B.algebra, g)
        if kind == "truncated_poly":
            return truncated_poly_resolution(B.algebra, g)
        if kind == "declared":
            names = {k: np.atleast_2d(B.coords(element(A, v)))[0] for k, v in r.get("names", {}).items()}
            return resolution_from_declaration(B.algebra, r, names)
        raise ConfigError(f"unknown resolution kind {kind!r}")

    @cached_property
    def basic(self):
        """Corner algebra f A f for Morita transport, or None."""
        m = self.raw.get("morita")
        if not m:
            return None
        A = self.algebra
        idems = [element(A, s) for s in m["idempotents"]]
        f = A.add(*idems)
        C = corner(A, f)
        C.set_idempotents([C.restrict(e) for e in idems])
        C.meta["simple_labels"] = list(A.simple_labels)
        return C

    # -- twist ------------------------------------------------------------------

    @cached_property
    def checked(self):
        from .twist import check_triple

        return check_triple(self.algebra, self.R, self.B, self.resolution, self.groups, self.seed)

    @property
    def report(self):
        return self.checked[0]

    @property
    def twist(self):
        data = self.checked[1]
        if data is None:
            from .twist import ComplexNotFormed

            raise ComplexNotFormed("triple fails: " + ", ".join(self.report.failed()))
        return data

    # -- modules ------------------------------------------------------------------

    def module(self, name: str) -> RightModule:
        name = name.replace(" ", "")
        if name not in self._modules:
            self._modules[name] = self._build_module(name)
            self._modules[name].name = name
        return self._modules[name]

    def _build_module(self, name: str) -> RightModule:
        from .twist import apply_twist, top_quotient

        A = self.algebra
        labels = A.simple_labels
        m = _FUNC.match(name)
        if m:
            fn, power, inner = m.group(1), m.group(2), m.group(3)
            X = self.module(inner)
            if fn == "Omega":
                n = int(power) if power is not None else 1
                for _ in range(abs(n)):
                    X = syzygy(X) if n > 0 else cosyzygy(X)
                return X
            if fn == "rad":
                return submodule(X, radical_of(X))[0]
            return apply_twist(X, self.twist)
        m = _CYCLIC.match(name)
        if m:
            i = labels.index(m.group(1))
            P, basis = projective_indecomposable(A, i)
            x = element(A, m.group(2))
            F = A.field
            sub = F.span(A.lmul(x), A.dim)
            if not F.in_span(basis, sub):
                raise ConfigError(f"{m.group(2)}A is not inside e{m.group(1)}A")
            coords = np.atleast_2d(F.coords(basis, sub))
            return quotient(P, F.span(coords, P.dim))[0]
        if name == "k":
            return trivial_module(A)
        if name == "A":
            return regular_module(A)
        if name == "T":
            return top_quotient(A, self.R)[0]
        if name[0] in "SP" and name[1:] in labels:
            if name[0] == "S":
                return simple_module(A, name[1:])
            return projective_indecomposable(A, labels.index(name[1:]))[0]
        raise ConfigError(f"cannot read module name {name!r}")
