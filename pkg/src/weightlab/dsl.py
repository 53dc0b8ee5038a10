"""Tiny textual language for naming groups on the CLI and in corpus files.

Grammar: `S(n)` symmetric, `A(n)` alternating, `C(n)` cyclic, `D(n)` dihedral
of order n (n even), `Q(8)` quaternion, `X x Y` direct products, and
`perm[deg; gen; gen; ...]` with 1-based cycle notation such as
`perm[5; (1 2 3 4 5); (1 2)]`.
"""

from __future__ import annotations

import re

from .errors import DslSyntaxError
from .perm import DEFAULT_GROUP_CAP, Perm, PermGroup

_ATOM_RE = re.compile(r"^([SACDQ])\((\d+)\)$")
_PERM_RE = re.compile(r"^perm\[(.*)\]$", re.DOTALL)
_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def _symmetric_gens(n: int) -> list[Perm]:
    if n <= 1:
        return [Perm.identity(max(n, 1))]
    gens = [Perm.from_cycles(n, [tuple(range(n))])]
    if n > 2:
        gens.append(Perm.from_cycles(n, [(0, 1)]))
    return gens


def _alternating_gens(n: int) -> list[Perm]:
    if n <= 2:
        return [Perm.identity(max(n, 1))]
    gens = [Perm.from_cycles(n, [(0, 1, 2)])]
    if n > 3:
        if n % 2 == 1:
            gens.append(Perm.from_cycles(n, [tuple(range(n))]))
        else:
            gens.append(Perm.from_cycles(n, [tuple(range(1, n))]))
    return gens


def _dihedral_gens(order: int) -> list[Perm]:
    if order % 2 != 0 or order < 2:
        raise DslSyntaxError(f"D(n) needs even n >= 2, got {order}")
    m = order // 2
    if m == 1:
        return [Perm.from_cycles(2, [(0, 1)])]
    if m == 2:
        return [Perm.from_cycles(4, [(0, 1)]), Perm.from_cycles(4, [(2, 3)])]
    rot = Perm.from_cycles(m, [tuple(range(m))])
    refl = Perm(tuple((m - i) % m for i in range(m)))
    return [rot, refl]


def _quaternion_gens(order: int) -> list[Perm]:
    if order != 8:
        raise DslSyntaxError("only Q(8) is available")
    a = Perm.from_cycles(8, [(0, 1, 2, 3), (4, 5, 6, 7)])
    b = Perm.from_cycles(8, [(0, 4, 2, 6), (1, 7, 3, 5)])
    return [a, b]


def _parse_cycles(text: str, degree: int) -> Perm:
    """One generator in 1-based cycle notation, e.g. ``(1 2 3)(4 5)``."""
    normalized = text.replace(",", " ")
    if _CYCLE_RE.sub("", normalized).strip():
        raise DslSyntaxError(f"stray characters in cycle notation: {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(normalized):
        entries = body.split()
        if not entries:
            continue
        try:
            pts = tuple(int(s) - 1 for s in entries)
        except ValueError:
            raise DslSyntaxError(f"bad cycle entry in {text!r}") from None
        if any(pt < 0 or pt >= degree for pt in pts):
            raise DslSyntaxError(f"cycle point out of range 1..{degree}: {text!r}")
        cycles.append(pts)
    return Perm.from_cycles(degree, cycles)


def _parse_atom(text: str) -> list[Perm]:
    text = text.strip()
    m = _ATOM_RE.match(text)
    if m:
        kind, arg = m.group(1), int(m.group(2))
        if kind == "S":
            return _symmetric_gens(arg)
        if kind == "A":
            return _alternating_gens(arg)
        if kind == "C":
            if arg < 1:
                raise DslSyntaxError("C(n) needs n >= 1")
            if arg == 1:
                return [Perm.identity(1)]
            return [Perm.from_cycles(arg, [tuple(range(arg))])]
        if kind == "D":
            return _dihedral_gens(arg)
        if kind == "Q":
            return _quaternion_gens(arg)
    m = _PERM_RE.match(text)
    if m:
        parts = [s.strip() for s in m.group(1).split(";")]
        if len(parts) < 2:
            raise DslSyntaxError("perm[...] needs a degree and at least one generator")
        try:
            degree = int(parts[0])
        except ValueError:
            raise DslSyntaxError(f"bad degree in {text!r}") from None
        if degree < 1:
            raise DslSyntaxError("perm degree must be >= 1")
        return [_parse_cycles(part, degree) for part in parts[1:]]
    raise DslSyntaxError(f"cannot parse group spec {text!r}")


def _split_product(text: str) -> list[str]:
    """Split on top-level `x`, respecting (...) and [...] nesting."""
    parts = []
    depth = 0
    cur = []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise DslSyntaxError(f"unbalanced brackets in {text!r}")
        if ch in "xX" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise DslSyntaxError(f"unbalanced brackets in {text!r}")
    parts.append("".join(cur))
    if any(not p.strip() for p in parts):
        raise DslSyntaxError(f"empty factor in product {text!r}")
    return parts


def _direct_product_gens(factors: list[list[Perm]]) -> list[Perm]:
    degrees = [max(g.degree for g in gens) for gens in factors]
    total = sum(degrees)
    out = []
    offset = 0
    for gens, deg in zip(factors, degrees):
        for g in gens:
            images = list(range(total))
            for i in range(deg):
                images[offset + i] = offset + g(i)
            out.append(Perm(tuple(images)))
        offset += deg
    return out


def parse_group_spec(text: str, cap: int = DEFAULT_GROUP_CAP) -> PermGroup:
    """Build the group named by a DSL string."""
    if not isinstance(text, str) or not text.strip():
        raise DslSyntaxError("empty group spec")
    factor_texts = _split_product(text.strip())
    factors = [_parse_atom(t) for t in factor_texts]
    gens = factors[0] if len(factors) == 1 else _direct_product_gens(factors)
    return PermGroup.from_generators(gens, cap=cap)
