"""Rotation-extension core: single rotations, greedy extension, the layered
endpoint-family construction with its growth schedule, and a brute-force
closure oracle used to cross-check the families.

Conventions: a path's fixed endpoint is its first vertex; the mobile endpoint
is its last.  Pivot positions are 0-based indices into the path; a rotation at
index i requires an edge from the last vertex to path[i] and 0 <= i <= q-3
(rotating at the predecessor of the endpoint is degenerate and rejected).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .graph import Path, edge_key


@dataclass(frozen=True)
class RotationStep:
    pivot: int
    broken_edge: tuple
    new_endpoint: int
    parent: "RotationStep | None" = None

    def chain(self):
        """Steps from the base path to this one, in application order."""
        steps = []
        node = self
        while node is not None:
            steps.append(node)
            node = node.parent
        steps.reverse()
        return steps


def rotate(g, path, pivot_index, parent=None):
    """Rotate `path` at the given pivot position.

    Returns (new_path, step).  The new path keeps the same vertex set and
    length; the segment after the pivot is reversed and the old endpoint's
    chord to the pivot becomes a path edge.
    """
    seq = path.vertices
    q = len(seq)
    if not 0 <= pivot_index <= q - 3:
        raise ValueError(f"pivot index {pivot_index} out of range for length {q}")
    last = seq[-1]
    pivot = seq[pivot_index]
    if not g.has_edge(last, pivot):
        raise ValueError(f"({last}, {pivot}) is not an edge")
    new_seq = seq[: pivot_index + 1] + seq[: pivot_index : -1]
    broken = edge_key(pivot, seq[pivot_index + 1])
    step = RotationStep(pivot, broken, seq[pivot_index + 1], parent)
    return Path(new_seq), step


def extend(g, path, rng=None):
    """Greedily extend at both endpoints until neither has an unused neighbor.

    Deterministic (smallest neighbor first) unless an rng is supplied.
    """
    seq = list(path.vertices)
    used = set(seq)

    def pick(v):
        options = [u for u in g.neighbors(v) if u not in used]
        if not options:
            return None
        if rng is None:
            return min(options)
        return rng.choice(options)

    while True:
        nxt = pick(seq[-1])
        if nxt is not None:
            seq.append(nxt)
            used.add(nxt)
            continue
        prev = pick(seq[0])
        if prev is not None:
            seq.insert(0, prev)
            used.add(prev)
            continue
        break
    return Path(seq)


def is_maximal(g, path):
    used = path.pos
    return not any(
        u not in used for end in (path.first, path.last) for u in g.neighbors(end)
    )


@dataclass
class EndpointFamily:
    """Layered endpoint sets S_0..S_t with replayable rotation chains."""

    base: Path
    fixed: int
    layers: list = field(default_factory=list)
    chains: dict = field(default_factory=dict)  # endpoint -> RotationStep | None
    paths: dict = field(default_factory=dict)  # endpoint -> Path
    broken_edges: set = field(default_factory=set)
    schedule: list = field(default_factory=list)
    stopped: str = ""

    def endpoints(self):
        out = set()
        for layer in self.layers:
            out.update(layer)
        return out

    def chain_steps(self, v):
        step = self.chains[v]
        return step.chain() if step is not None else []

    def rotations_to(self, v):
        return len(self.chain_steps(v))

    def to_json(self):
        return {
            "fixed": self.fixed,
            "layers": [sorted(layer) for layer in self.layers],
            "chains": {
                str(v): [
                    {"pivot": s.pivot, "broken": list(s.broken_edge)}
                    for s in self.chain_steps(v)
                ]
                for v in sorted(self.endpoints())
            },
        }


def _pivot_candidates(g, base_pos, sources, used):
    """Eligible (pivot, source) pairs for growing the next layer.

    A pivot must be a base-path vertex adjacent to some current source whose
    existing base-path neighbors, together with the pivot itself, were never
    endpoints.  This guarantees both base edges at the pivot are intact on the
    source's path, so every rotation breaks an edge of the base path.
    """
    base = None
    pairs = []
    seen = set()
    for src in sources:
        for v in g.neighbors(src):
            if v in seen:
                continue
            i = base_pos.get(v)
            if i is None:
                continue
            if base is None:
                base = [None] * len(base_pos)
                for vv, ii in base_pos.items():
                    base[ii] = vv
            if v in used:
                continue
            left = base[i - 1] if i > 0 else None
            right = base[i + 1] if i + 1 < len(base) else None
            if (left is not None and left in used) or (
                right is not None and right in used
            ):
                continue
            seen.add(v)
            pairs.append((i, v, src))
    pairs.sort()
    return pairs


def _place(g, paths, pivot, source, protected_edge=None):
    """Rotate the source's path at the pivot; returns (endpoint, path, step)."""
    path = paths[source]
    idx = path.pos[pivot]
    if idx > len(path) - 3:
        return None
    if protected_edge is not None:
        broken = edge_key(pivot, path[idx + 1])
        if broken == protected_edge:
            return None
    new_path, step = rotate(g, path, idx)
    return step.new_endpoint, new_path, step


def endpoint_family(
    g,
    path,
    d=9.0,
    total_target=None,
    layer_cap=None,
    max_layers=None,
    surplus=2.0,
    protected_edge=None,
    exclude=None,
    stats=None,
):
    """Build the layered endpoint family of a maximal path (fixed first vertex).

    Layer t targets ceil((d/3)^t) endpoints (optionally capped); up to
    `surplus` times the target is retained (None keeps everything).  The
    construction stops when the cumulative endpoint count reaches
    `total_target` (default ceil(n/3)), a layer comes up empty, or
    `max_layers` is hit.  Trimming keeps lowest vertex ids; pivots are
    processed in ascending base-path position.
    """
    base = path
    fixed = base.first
    if total_target is None:
        total_target = math.ceil(g.n / 3)
    fam = EndpointFamily(base=base, fixed=fixed)
    base_pos = dict(base.pos)
    terminal = base.last
    fam.layers.append([terminal])
    fam.schedule.append(1)
    fam.chains[terminal] = None
    fam.paths[terminal] = base
    used = {terminal}
    if exclude:
        used |= set(exclude)
    t = 0
    while True:
        if len(fam.chains) >= total_target:
            fam.stopped = "target_met"
            break
        if max_layers is not None and t >= max_layers:
            fam.stopped = "max_layers"
            break
        t += 1
        target = math.ceil((d / 3.0) ** t)
        if layer_cap is not None:
            target = min(target, layer_cap)
        keep = target if surplus is None else math.ceil(target * surplus)
        if surplus is None:
            keep = None
        sources = fam.layers[-1]
        placed = []
        placed_set = set()
        for _, pivot, src in _pivot_candidates(g, base_pos, sources, used):
            got = _place(g, fam.paths, pivot, src, protected_edge)
            if got is None:
                continue
            ep, new_path, step = got
            if ep in used or ep in placed_set or ep == fixed:
                continue
            placed_set.add(ep)
            placed.append((ep, new_path, RotationStep(
                step.pivot, step.broken_edge, step.new_endpoint, fam.chains[src]
            )))
            if stats is not None:
                stats["rotations"] = stats.get("rotations", 0) + 1
                stats.setdefault("broken_edges", set()).add(step.broken_edge)
        if not placed:
            fam.stopped = "empty_layer"
            break
        placed.sort(key=lambda item: item[0])
        if keep is not None:
            placed = placed[:keep]
        layer = []
        for ep, new_path, step in placed:
            layer.append(ep)
            fam.chains[ep] = step
            fam.paths[ep] = new_path
            fam.broken_edges.add(step.broken_edge)
            used.add(ep)
        fam.layers.append(layer)
        fam.schedule.append(target)
    return fam


def reconstruct_path(family, v):
    """Replay the stored chain for endpoint v from the base path."""
    if v == family.fixed:
        raise ValueError("fixed endpoint is not a family member")
    if v not in family.chains:
        raise ValueError(f"vertex {v} is not in the family")
    # paths are materialized during construction; replaying validates them
    path = family.paths[v]
    assert path.last == v and path.first == family.fixed
    return path


def replay_chain(g, base, steps):
    """Apply a rotation-step chain to a base path, revalidating each rotation."""
    path = base
    for step in steps:
        idx = path.pos[step.pivot]
        path, applied = rotate(g, path, idx)
        assert applied.broken_edge == step.broken_edge
        assert applied.new_endpoint == step.new_endpoint
    return path


@dataclass
class ClosureResult:
    endpoints: set
    complete: bool
    states: int


def endpoint_closure_oracle(g, path, fixed=None, max_states=200000):
    """Exact set of endpoints reachable by any rotation sequence (fixed first
    vertex), via breadth-first search over path states with deduplication.

    When the state budget runs out the partial endpoint set is returned with
    complete=False.
    """
    if fixed is not None and path.first != fixed:
        if path.last == fixed:
            path = path.reversed()
        else:
            raise ValueError("fixed vertex is not an endpoint of the path")
    start = path.vertices
    q = len(start)
    seen = {start}
    frontier = [start]
    endpoints = {start[-1]}
    states = 1
    complete = True
    while frontier:
        nxt = []
        for seq in frontier:
            last = seq[-1]
            for u in g.neighbors(last):
                i = None
                # pivot must sit at position <= q-3
                try:
                    i = seq.index(u)
                except ValueError:
                    continue
                if i > q - 3:
                    continue
                child = seq[: i + 1] + seq[:i:-1]
                if child in seen:
                    continue
                if states >= max_states:
                    complete = False
                    continue
                seen.add(child)
                states += 1
                endpoints.add(child[-1])
                nxt.append(child)
        frontier = nxt
    return ClosureResult(endpoints, complete, states)


@dataclass
class DoubleRotationTargets:
    """First-stage endpoint set A0 and, per a in A0, the second-stage sets."""

    base: Path
    a0: list
    bmap: dict
    pair_path: dict  # (a, b) -> Path oriented a -> b
    pair_rotations: dict  # (a, b) -> rotation count
    families_built: int = 0

    def pairs(self):
        return sorted(self.pair_path)


def double_rotation_targets(
    g,
    path,
    d=9.0,
    a_cap=None,
    total_target=None,
    surplus=2.0,
    max_layers=None,
    protected_edge=None,
    stats=None,
):
    """Rotate both path ends in two stages: one family with the first vertex
    fixed, then for each reached endpoint a (up to a_cap) a family of the
    reconstructed path with a fixed.  Records P(a, b) and rotation counts.
    """
    fam1 = endpoint_family(
        g,
        path,
        d=d,
        total_target=total_target,
        surplus=surplus,
        max_layers=max_layers,
        protected_edge=protected_edge,
        stats=stats,
    )
    a0 = sorted(fam1.endpoints())
    chosen = a0 if a_cap is None else a0[:a_cap]
    out = DoubleRotationTargets(path, a0, {}, {}, {}, families_built=1)
    for a in chosen:
        p_a = reconstruct_path(fam1, a).reversed()  # a first, fixed end mobile
        rot_a = fam1.rotations_to(a)
        fam2 = endpoint_family(
            g,
            p_a,
            d=d,
            total_target=total_target,
            surplus=surplus,
            max_layers=max_layers,
            protected_edge=protected_edge,
            stats=stats,
        )
        out.families_built += 1
        bset = sorted(fam2.endpoints())
        out.bmap[a] = bset
        for b in bset:
            out.pair_path[(a, b)] = reconstruct_path(fam2, b)
            out.pair_rotations[(a, b)] = rot_a + fam2.rotations_to(b)
    return out
