"""Problem files and JSON report envelopes.

Problem files are line oriented::

    # comment
    n 4
    kind combinatorial        # or normalized; optional, defaults to combinatorial
    e 0 1 1.0                 # edge u v w
    p 1 1.0                   # potential W_u
    z 0 1 0.0 1.0             # complex entry H_uv = re + i im (Hermitian inputs)

Vertex ids are 0-based. The ``n`` line must precede every other entry.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import __version__
from .errors import BadHeader, DuplicateEdge, ProblemSyntaxError, SelfLoop
from .graph_core import Hamiltonian, LaplacianKind, SignedWeightedGraph

SCHEMA_VERSION = 1


@dataclass(frozen=True, eq=False)
class Problem:
    n: int
    kind: LaplacianKind = LaplacianKind.COMBINATORIAL
    edges: tuple[tuple[int, int, float], ...] = ()
    potential: tuple[float, ...] = ()
    complex_entries: tuple[tuple[int, int, complex], ...] = ()

    @property
    def graph(self) -> SignedWeightedGraph:
        return SignedWeightedGraph(self.n, self.edges)

    @property
    def is_hermitian(self) -> bool:
        return bool(self.complex_entries)

    def hamiltonian(self) -> Hamiltonian:
        pot = self.potential if self.potential else None
        return Hamiltonian(self.graph, self.kind, pot)

    def matrix(self) -> np.ndarray:
        """Dense operator: the real part from edges and potential plus any complex entries."""
        m = self.hamiltonian().matrix.astype(complex)
        for u, v, z in self.complex_entries:
            if u == v:
                m[u, u] += z.real
            else:
                m[u, v] += z
                m[v, u] += np.conj(z)
        return m

    def __eq__(self, other) -> bool:
        if not isinstance(other, Problem):
            return NotImplemented
        return (self.n, self.kind, self.graph.edges, tuple(self.potential or (0.0,) * self.n), self.complex_entries) == (
            other.n, other.kind, other.graph.edges, tuple(other.potential or (0.0,) * other.n), other.complex_entries)


def problem_from_hamiltonian(h: Hamiltonian) -> Problem:
    return Problem(h.n, h.kind, h.graph.edges, tuple(float(x) for x in h.potential))


def _number(tok: str, lineno: int, col: int, kind=float):
    try:
        val = kind(tok)
    except ValueError:
        raise ProblemSyntaxError(f"expected {'an integer' if kind is int else 'a number'}, got {tok!r}", lineno, col) from None
    if kind is float and not math.isfinite(val):
        raise ProblemSyntaxError(f"non-finite value {tok!r}", lineno, col)
    return val


_ARITY = {"n": 1, "kind": 1, "e": 3, "p": 2, "z": 4}


def parse_problem(text: str) -> Problem:
    n = None
    kind = None
    edges: dict[tuple[int, int], float] = {}
    pots: dict[int, float] = {}
    zs: dict[tuple[int, int], complex] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks, cols, pos = [], [], 0
        for tok in line.split():
            pos = line.index(tok, pos)
            toks.append(tok)
            cols.append(pos + 1)
            pos += len(tok)
        if not toks:
            continue
        key = toks[0]
        if key not in _ARITY:
            raise ProblemSyntaxError(f"unknown keyword {key!r}", lineno, cols[0])
        if len(toks) - 1 != _ARITY[key]:
            col = cols[_ARITY[key] + 1] if len(toks) - 1 > _ARITY[key] else len(line.rstrip()) + 1
            raise ProblemSyntaxError(f"{key!r} takes {_ARITY[key]} value(s), got {len(toks) - 1}", lineno, col)
        if key == "n":
            if n is not None:
                raise BadHeader(f"line {lineno}: repeated 'n' header")
            n = _number(toks[1], lineno, cols[1], int)
            if n < 1:
                raise BadHeader(f"line {lineno}: vertex count must be positive")
            continue
        if key == "kind":
            if kind is not None:
                raise BadHeader(f"line {lineno}: repeated 'kind' header")
            try:
                kind = LaplacianKind(toks[1])
            except ValueError:
                raise BadHeader(f"line {lineno}: unknown kind {toks[1]!r}") from None
            continue
        if n is None:
            raise BadHeader(f"line {lineno}: 'n' must come before any '{key}' line")
        ids = []
        for tok, col in zip(toks[1:3] if key in "ez" else toks[1:2], cols[1:]):
            u = _number(tok, lineno, col, int)
            if not 0 <= u < n:
                raise ProblemSyntaxError(f"vertex {u} outside 0..{n - 1}", lineno, col)
            ids.append(u)
        if key == "p":
            if ids[0] in pots:
                raise DuplicateEdge(f"line {lineno}: second potential entry for vertex {ids[0]}")
            pots[ids[0]] = _number(toks[2], lineno, cols[2])
            continue
        u, v = ids
        pair = (min(u, v), max(u, v))
        if key == "e":
            if u == v:
                raise SelfLoop(f"line {lineno}: self-loop at vertex {u}")
            if pair in edges:
                raise DuplicateEdge(f"line {lineno}: edge {pair} already given")
            edges[pair] = _number(toks[3], lineno, cols[3])
        else:
            re_, im_ = _number(toks[3], lineno, cols[3]), _number(toks[4], lineno, cols[4])
            if u == v and im_ != 0:
                raise ProblemSyntaxError("diagonal complex entry must be real", lineno, cols[4])
            if (u, v) in zs or (v, u) in zs:
                raise DuplicateEdge(f"line {lineno}: entry {pair} already given")
            # store as (smaller, larger) with the value of H[smaller, larger]
            zs[pair] = complex(re_, im_) if u <= v else complex(re_, -im_)
    if n is None:
        raise BadHeader("missing 'n' header")
    pot = tuple(pots.get(u, 0.0) for u in range(n)) if pots else ()
    return Problem(n, kind or LaplacianKind.COMBINATORIAL,
                   tuple((u, v, w) for (u, v), w in sorted(edges.items())), pot,
                   tuple((u, v, z) for (u, v), z in sorted(zs.items())))


def serialize_problem(problem: Problem) -> str:
    lines = [f"n {problem.n}", f"kind {problem.kind.value}"]
    lines += [f"e {u} {v} {w!r}" for u, v, w in problem.edges]
    lines += [f"p {u} {w!r}" for u, w in enumerate(problem.potential) if w != 0]
    lines += [f"z {u} {v} {z.real!r} {z.imag!r}" for u, v, z in problem.complex_entries]
    return "\n".join(lines) + "\n"


def read_problem(path) -> tuple[Problem, str]:
    """Parse a file; returns the problem and the sha256 digest of its bytes."""
    with open(path, "rb") as fh:
        data = fh.read()
    return parse_problem(data.decode("utf-8")), hashlib.sha256(data).hexdigest()


def jsonable(obj: Any) -> Any:
    """Plain JSON types; non-finite floats become the strings 'inf', '-inf', 'nan'."""
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, complex):
        return {"re": jsonable(obj.real), "im": jsonable(obj.imag)}
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


@dataclass
class ReportEnvelope:
    command: str
    payload: Any
    ok: bool = True
    input_digest: str | None = None
    timings: dict | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "schema": SCHEMA_VERSION,
            "tool": "cheegerkit",
            "version": __version__,
            "command": self.command,
            "input_digest": self.input_digest,
            "ok": self.ok,
            "payload": self.payload,
        }
        if self.timings is not None:
            out["timings"] = self.timings
        out.update(self.extra)
        return out

    def dumps(self) -> str:
        # repr-based float output round-trips exactly (at most 17 significant digits)
        return json.dumps(jsonable(self.to_dict()), indent=2, sort_keys=True) + "\n"
