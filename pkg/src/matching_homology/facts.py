"""Registry of externally sourced or separately recomputed facts.

Each record carries a provenance tag and a citation string; records without
one of the accepted provenances are rejected at load time.

Kinds understood by the pipeline:

``koszul-dim``           dim K_{p,q}(V, b) for dim V = m.
``koszul-multiplicity``  multiplicity of S_lam V in K_{p,q}(V, b), dim V = m.
``row-exclusion``        H_degree(C^d_n) has no summand with at most
                         ``max_rows`` rows.
``row-cap``              H_degree(C^d_n) has no summand with more than
                         ``max_rows`` rows.
``nonvanishing``         K_{p,q}(V, b) != 0; informational only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Iterable

PROVENANCES = ("paper-M2", "recomputed", "external-theorem")
KINDS = ("koszul-dim", "koszul-multiplicity", "row-exclusion", "row-cap", "nonvanishing")

_REQUIRED = {
    "koszul-dim": ("m", "d", "b", "p", "q"),
    "koszul-multiplicity": ("partition", "m", "d", "b", "p", "q"),
    "row-exclusion": ("d", "n", "degree", "max_rows"),
    "row-cap": ("d", "n", "degree", "max_rows"),
    "nonvanishing": ("d", "b", "p", "q"),
}


class FactError(ValueError):
    pass


@dataclass(frozen=True)
class Fact:
    name: str
    kind: str
    params: dict = field(hash=False)
    value: Any
    provenance: str
    citation: str

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise FactError(f"fact {self.name!r}: provenance {self.provenance!r} not in {PROVENANCES}")
        if not self.citation:
            raise FactError(f"fact {self.name!r} has no citation")
        if self.kind not in KINDS:
            raise FactError(f"fact {self.name!r}: unknown kind {self.kind!r}")
        missing = [k for k in _REQUIRED[self.kind] if k not in self.params]
        if missing:
            raise FactError(f"fact {self.name!r} lacks parameters {missing}")

    @property
    def recomputable(self) -> bool:
        return self.kind in ("koszul-dim", "koszul-multiplicity")

    def key(self) -> tuple:
        p = self.params
        if self.kind == "koszul-multiplicity":
            return (self.kind, tuple(p["partition"]), p["m"], p["d"], p["b"], p["p"], p["q"])
        return (self.kind,) + tuple(p[k] for k in _REQUIRED[self.kind])

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "params": self.params,
            "value": self.value,
            "provenance": self.provenance,
            "citation": self.citation,
        }

    @classmethod
    def from_json(cls, rec: dict) -> "Fact":
        for k in ("name", "kind", "params", "value"):
            if k not in rec:
                raise FactError(f"fact record lacks {k!r}: {rec}")
        if "provenance" not in rec:
            raise FactError(f"fact {rec['name']!r} has no provenance")
        return cls(rec["name"], rec["kind"], dict(rec["params"]), rec["value"], rec["provenance"], rec.get("citation", ""))


class FactRegistry:
    def __init__(self, facts: Iterable[Fact] = ()):
        self._facts: dict[str, Fact] = {}
        self._by_key: dict[tuple, Fact] = {}
        for f in facts:
            self.add(f)

    def add(self, fact: Fact) -> None:
        if fact.name in self._facts:
            raise FactError(f"duplicate fact name {fact.name!r}")
        other = self._by_key.get(fact.key())
        if other is not None and other.value != fact.value:
            raise FactError(f"facts {other.name!r} and {fact.name!r} disagree")
        self._facts[fact.name] = fact
        self._by_key.setdefault(fact.key(), fact)

    def __iter__(self):
        return iter(self._facts.values())

    def __len__(self) -> int:
        return len(self._facts)

    def __contains__(self, name: str) -> bool:
        return name in self._facts

    def get(self, name: str) -> Fact:
        try:
            return self._facts[name]
        except KeyError:
            raise FactError(f"fact {name!r} is not in the registry") from None

    def of_kind(self, kind: str) -> list[Fact]:
        return [f for f in self._facts.values() if f.kind == kind]

    def koszul_dim(self, m: int, d: int, b: int, p: int, q: int) -> Fact | None:
        return self._by_key.get(("koszul-dim", m, d, b, p, q))

    def multiplicity(self, lam, m: int, d: int, b: int, p: int, q: int) -> Fact | None:
        return self._by_key.get(("koszul-multiplicity", tuple(lam), m, d, b, p, q))

    def multiplicities_for(self, d: int, b: int, p: int, q: int) -> list[Fact]:
        return [
            f
            for f in self.of_kind("koszul-multiplicity")
            if (f.params["d"], f.params["b"], f.params["p"], f.params["q"]) == (d, b, p, q)
        ]

    def row_exclusions(self, d: int, n: int) -> list[Fact]:
        return [f for f in self.of_kind("row-exclusion") if f.params["d"] == d and f.params["n"] == n]

    def row_caps(self, d: int, n: int) -> list[Fact]:
        return [f for f in self.of_kind("row-cap") if f.params["d"] == d and f.params["n"] == n]

    def to_json(self) -> list[dict]:
        return [f.to_json() for f in self._facts.values()]

    def dumps(self) -> str:
        return json.dumps({"facts": self.to_json()}, indent=1) + "\n"

    @classmethod
    def loads(cls, text: str) -> "FactRegistry":
        data = json.loads(text)
        records = data["facts"] if isinstance(data, dict) else data
        return cls(Fact.from_json(r) for r in records)

    @classmethod
    def load(cls, path: str | Path) -> "FactRegistry":
        return cls.loads(Path(path).read_text())

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps())


def default_registry_path() -> Path:
    return Path(str(resources.files("matching_homology") / "data" / "facts.json"))


def default_registry() -> FactRegistry:
    return FactRegistry.load(default_registry_path())


def recompute(fact: Fact, budget: int | None = None) -> int:
    """Value of a Koszul fact recomputed from scratch (may be slow)."""
    from .koszul import koszul_dim_direct, koszul_multiplicity

    p = fact.params
    if fact.kind == "koszul-dim":
        return koszul_dim_direct(p["m"], p["d"], p["b"], p["p"], p["q"], budget=budget)
    if fact.kind == "koszul-multiplicity":
        return koszul_multiplicity(tuple(p["partition"]), p["d"], p["b"], p["p"], p["q"], m=p["m"])
    raise FactError(f"fact {fact.name!r} of kind {fact.kind} cannot be recomputed")


def verify(registry: FactRegistry, names: Iterable[str] | None = None, budget: int | None = None) -> dict[str, tuple[Any, int]]:
    """Recompute the selected recomputable facts; returns name -> (stored, computed)."""
    chosen = [registry.get(n) for n in names] if names is not None else [f for f in registry if f.recomputable]
    return {f.name: (f.value, recompute(f, budget)) for f in chosen}
