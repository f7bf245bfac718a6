"""SG1, the plain-text signed-graph format.

::

    # optional comments and blank lines anywhere
    n m
    u v +
    u v -
    ...

Exactly ``m`` edge lines follow the header; signs are ``+`` or ``-``.
"""

from __future__ import annotations

from .graph import GraphError, SignedGraph


class SG1FormatError(ValueError):
    """Malformed SG1 text."""


def dumps(g: SignedGraph) -> str:
    lines = [f"{g.n} {g.e}"]
    lines += [f"{u} {v} {'+' if s > 0 else '-'}" for u, v, s in g.edges]
    return "\n".join(lines) + "\n"


def loads(text: str) -> SignedGraph:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    if not rows:
        raise SG1FormatError("empty input: missing 'n m' header")
    lineno, header = rows[0]
    try:
        n, m = (int(tok) for tok in header)
    except ValueError:
        raise SG1FormatError(f"line {lineno}: header must be 'n m', got {' '.join(header)!r}")
    if n < 0 or m < 0:
        raise SG1FormatError(f"line {lineno}: n and m must be non-negative")
    body = rows[1:]
    if len(body) != m:
        raise SG1FormatError(f"header declares {m} edges but {len(body)} edge lines follow")
    edges = []
    for lineno, toks in body:
        if len(toks) != 3 or toks[2] not in ("+", "-"):
            raise SG1FormatError(f"line {lineno}: expected 'u v +|-', got {' '.join(toks)!r}")
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError:
            raise SG1FormatError(f"line {lineno}: non-integer endpoint in {' '.join(toks)!r}")
        edges.append((u, v, 1 if toks[2] == "+" else -1))
    try:
        return SignedGraph(n, edges)
    except GraphError as exc:
        raise SG1FormatError(str(exc)) from exc


def read(path) -> SignedGraph:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def write(g: SignedGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(g))
