"""Slim Fly router graphs: diameter 2 at near-minimal degree.

The graph lives on two q x q grids of routers. Routers of class 0 carry
coordinates (x, y) over GF(q), routers of class 1 carry (m, c). Within a
grid column, two routers connect when their y (resp. c) coordinates differ
by a member of a generator set X (resp. X'); across the classes, (0, x, y)
connects to (1, m, c) exactly when y = m*x + c. With generator sets chosen
as below, the result is 2q^2 routers of degree (3q - delta)/2 and diameter
2, where q = 4w + delta for delta in {-1, 0, +1}.
"""

from __future__ import annotations

from dcnsim.topo.base import DEFAULT_HOP_DELAY, DEFAULT_LINK_RATE, Topology
from dcnsim.topo.gf import GF


def _delta_split(q: int) -> tuple[int, int]:
    r = q % 4
    if r == 1:
        return q // 4, 1
    if r == 3:
        return (q + 1) // 4, -1
    if r == 0:
        return q // 4, 0
    raise ValueError(f"q must be of the form 4w-1, 4w, or 4w+1; got q={q}")


def _column_reaches_all(field: GF, s: set[int]) -> bool:
    # Within one column the generator set must reach every other router in
    # at most two steps: every nonzero element lies in S or S + S.
    reach = set(s)
    for a in s:
        for b in s:
            reach.add(field.add(a, b))
    reach.add(0)
    return len(reach) == field.q


def _even_order_sets(field: GF, w: int) -> tuple[set[int], set[int]]:
    """Generator sets for q = 4w: search rotations of two half-size windows
    of consecutive primitive-element powers until both columns reach
    everything in two steps."""
    q = field.q
    pw = field.primitive_powers()
    n = q - 1
    half = q // 2
    for rot in range(n):
        x = {pw[(rot + j) % n] for j in range(half)}
        xp = {pw[(rot + half - 1 + j) % n] for j in range(half)}
        if _column_reaches_all(field, x) and _column_reaches_all(field, xp):
            return x, xp
    raise ValueError(f"no generator sets found for q={q}")


def _generator_sets(field: GF) -> tuple[set[int], set[int]]:
    q = field.q
    w, delta = _delta_split(q)
    pw = field.primitive_powers()
    if delta == 1:
        # Quadratic residues and non-residues; both closed under negation
        # because -1 is an even power when q = 4w + 1.
        x = {pw[j] for j in range(0, q - 1, 2)}
        xp = {pw[j] for j in range(1, q - 1, 2)}
    elif delta == -1:
        x = {pw[j] for j in range(0, 2 * w - 1, 2)}
        x |= {pw[j] for j in range(2 * w - 1, 4 * w - 2, 2)}
        xp = {field.mul(field.primitive_element, s) for s in x}
    else:
        x, xp = _even_order_sets(field, w)
    return x, xp


def build_slim_fly(
    q: int,
    p: int,
    *,
    link_rate: int = DEFAULT_LINK_RATE,
    hop_delay: int = DEFAULT_HOP_DELAY,
) -> Topology:
    """2*q^2 routers of network degree (3q - delta)/2 with p servers each."""
    try:
        field = GF(q)
    except ValueError as exc:
        raise ValueError(f"invalid Slim Fly parameter q={q}: {exc}") from None
    x_set, xp_set = _generator_sets(field)

    q2 = q * q
    edges = []
    for col in range(q):
        b0 = col * q
        b1 = q2 + col * q
        for y in range(q):
            for s in x_set:
                y2 = field.add(y, s)
                if y2 > y:
                    edges.append((b0 + y, b0 + y2))
            for s in xp_set:
                y2 = field.add(y, s)
                if y2 > y:
                    edges.append((b1 + y, b1 + y2))
    for m in range(q):
        row = q2 + m * q
        for x in range(q):
            mx = field.mul(m, x)
            b0 = x * q
            for c in range(q):
                edges.append((b0 + field.add(mx, c), row + c))

    return Topology.from_edges(
        "slimfly",
        2 * q2,
        edges,
        concentration=p,
        link_rate=link_rate,
        hop_delay=hop_delay,
    )
