"""Exhaustive minimal-circuit search.

Relative complexity counts the fewest gates taking x to y; swap complexity the
fewest gates whose symmetrized overlap (|<x|C|y> + <y|C|x>|)/2 reaches 1 - eps.
Both are found by breadth-first search over reached states, deduplicated by a
hash of their rounded, phase-normalized amplitudes. All parent edges into a
layer are kept, so every minimal witness can be read back out of the search.
"""

from __future__ import annotations

import itertools
import json
import math
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .statevec import (
    Circuit,
    CircuitError,
    Gate,
    QuantumState,
    adjoint,
    apply_op,
    cnot,
    compile_gate,
    h,
    inner_product,
    rphi,
    run_vectors,
    superpose,
    x as xgate,
    zero_state,
)

DEFAULT_PHI = math.pi / 64
STRATEGIES = ("forward-bfs", "meet-in-the-middle")
PHASE_MODES = ("symmetric", "exact")
_CHUNK = 1 << 15


@dataclass(frozen=True)
class GateSet:
    """Every gate placement the search may use on a ``width``-qubit register."""

    width: int
    placements: tuple[Gate, ...]
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "placements", tuple(self.placements))
        if not self.placements:
            raise CircuitError("gate set is empty")
        for g in self.placements:
            if max(g.qubits) >= self.width:
                raise CircuitError(f"placement {g} outside width {self.width}")

    @property
    def size(self):
        return len(self.placements)

    @classmethod
    def from_kinds(cls, kinds, width, phi=DEFAULT_PHI, name="custom"):
        """Place each kind on every qubit (1-qubit) or ordered pair (CNOT)."""
        out = []
        for kind in kinds:
            angle = phi
            if isinstance(kind, dict):
                angle = float(kind.get("phi", phi))
                kind = kind["kind"]
            if kind == "CNOT":
                out += [cnot(c, t) for c, t in itertools.permutations(range(width), 2)]
            elif kind == "R":
                out += [rphi(q, angle) for q in range(width)]
            elif kind in ("H", "X", "Z", "S"):
                out += [Gate(kind, (q,)) for q in range(width)]
            else:
                raise CircuitError(f"gate kind {kind!r} cannot be auto-placed")
        return cls(width, tuple(out), name)

    @classmethod
    def default(cls, width, phi=DEFAULT_PHI):
        """H, X, CNOT and a small phase gate R_phi, on every placement."""
        return cls.from_kinds(["H", "X", "CNOT", {"kind": "R", "phi": phi}], width,
                              name="default")

    @classmethod
    def named(cls, name, width):
        if name in ("default", "sec4"):
            return cls.default(width)
        if name == "hxcnot":
            return cls.from_kinds(["H", "X", "CNOT"], width, name=name)
        if name == "clifford":
            return cls.from_kinds(["H", "S", "X", "Z", "CNOT"], width, name=name)
        raise CircuitError(f"unknown gate set {name!r}")

    @classmethod
    def from_dict(cls, d, width):
        if "placements" in d:
            return cls(width, tuple(Gate.from_dict(g) for g in d["placements"]),
                       d.get("name", "custom"))
        return cls.from_kinds(d["kinds"], width, name=d.get("name", "custom"))

    @classmethod
    def load(cls, name_or_path, width):
        """Named set, or a JSON file with ``kinds`` or explicit ``placements``."""
        try:
            return cls.named(name_or_path, width)
        except CircuitError:
            pass
        with open(name_or_path) as fh:
            return cls.from_dict(json.load(fh), width)

    def cost_of(self, gate):
        """Gates of this set needed to realize ``gate`` exactly, or None."""
        if gate in self.placements:
            return 1
        if gate.kind == "R" and not gate.controls:
            for p in self.placements:
                if p.kind != "R" or p.targets != gate.targets:
                    continue
                period = 2 * math.pi / p.params[0]
                k = gate.params[0] / p.params[0]
                if abs(period - round(period)) < 1e-9 and abs(k - round(k)) < 1e-9:
                    return int(round(k)) % int(round(abs(period)))
        return None


@dataclass(frozen=True)
class SearchConfig:
    """Search objective threshold, depth cutoff and tolerances.

    ``phase="exact"`` (swap only) asks for Re(a+b)/2 >= 1 - eps, i.e. a true
    swap U|x>=|y>, U|y>=|x> at eps = 0, and disables global-phase merging.
    """

    epsilon: float = 0.0
    max_depth: int = 8
    match_tol: float = 1e-9
    dedup_tol: float = 1e-12
    n_ancillas: int = 0
    strategy: str = "forward-bfs"
    phase: str = "symmetric"
    threads: int = 1
    max_witnesses: int = 256
    meet_tol: float = 1e-7

    def __post_init__(self):
        if not 0 <= self.epsilon < 1:
            raise CircuitError("epsilon must lie in [0, 1)")
        if self.max_depth < 0:
            raise CircuitError("max_depth must be >= 0")
        if min(self.match_tol, self.dedup_tol, self.meet_tol) <= 0:
            raise CircuitError("tolerances must be positive")
        if self.strategy not in STRATEGIES:
            raise CircuitError(f"strategy must be one of {STRATEGIES}")
        if self.phase not in PHASE_MODES:
            raise CircuitError(f"phase must be one of {PHASE_MODES}")
        if self.n_ancillas < 0 or self.threads < 1:
            raise CircuitError("n_ancillas >= 0 and threads >= 1 required")

    @property
    def threshold(self):
        return 1.0 - self.epsilon - self.match_tol


@dataclass
class SearchResult:
    status: str  # "found" or "exhausted"
    size: int | None
    witness: Circuit | None
    witnesses: list[Circuit]
    explored_states: int
    wall_time: float
    max_depth: int
    objective: float | None = None
    witnesses_truncated: bool = False
    # True when the frontier emptied: nothing is reachable at any depth.
    closed: bool = False

    @property
    def found(self):
        return self.status == "found"

    def to_dict(self, all_witnesses=False):
        d = {
            "status": self.status,
            "size": self.size,
            "max_depth": self.max_depth,
            "witness": self.witness.to_dict() if self.witness else None,
            "witness_count": len(self.witnesses),
            "witnesses_truncated": self.witnesses_truncated,
            "objective_value": self.objective,
            "explored_states": self.explored_states,
            "closed": self.closed,
            "wall_time": self.wall_time,
        }
        if all_witnesses:
            d["witnesses"] = [w.to_dict() for w in self.witnesses]
        return d


class _Explorer:
    """Layered BFS over tuples of states, one tuple per node."""

    def __init__(self, roots, ops, width, cfg, fix_phase, kern=None):
        self.ops = ops
        self.width = width
        self.cfg = cfg
        self.fix_phase = fix_phase
        self.kern = kern or kernels
        self.m, self.dim = roots.shape
        canon, keys = self._quantize(roots[None])
        self.layers = [canon.reshape(1, self.m, self.dim)]
        self.edges = [None]
        self.seen = {keys[0].tobytes()}
        self._parent_index = {}

    @property
    def explored(self):
        return sum(len(layer) for layer in self.layers)

    def _quantize(self, batch):
        flat = np.ascontiguousarray(batch.reshape(len(batch), -1))
        return self.kern.canonical_quantize(flat, self.cfg.dedup_tol, self.fix_phase)

    def _apply(self, op, chunk):
        k = len(chunk)
        out = apply_op(op, chunk.reshape(k * self.m, self.dim), self.width, self.kern)
        return out.reshape(k, self.m, self.dim)

    def _evaluate(self, gi, start, chunk, objective, threshold, build):
        cand = self._apply(self.ops[gi], chunk)
        hits = []
        if objective is not None:
            vals = objective(cand)
            hits = [(start + int(r), gi) for r in np.flatnonzero(vals >= threshold)]
        quant = self._quantize(cand) if build else None
        return hits, quant

    def expand(self, objective=None, threshold=None, build=True):
        """Apply every op to the last layer; return objective hits as (parent, op).

        With ``build`` the deduplicated children become a new layer, unless a
        hit was found (the search stops at that depth anyway).
        """
        frontier = self.layers[-1]
        cur = {}
        new_states = []
        e_child, e_parent, e_gate = [], [], []
        hits = []
        jobs = [(gi, start) for start in range(0, len(frontier), _CHUNK)
                for gi in range(len(self.ops))]

        def run(job):
            gi, start = job
            return self._evaluate(gi, start, frontier[start:start + _CHUNK],
                                  objective, threshold, build and not hits)

        if self.cfg.threads > 1:
            with ThreadPoolExecutor(self.cfg.threads) as pool:
                results = pool.map(run, jobs)
                merged = list(zip(jobs, results))
        else:
            merged = ((job, run(job)) for job in jobs)

        for (gi, start), (job_hits, quant) in merged:
            hits.extend(job_hits)
            if hits or quant is None:
                continue
            canon, keys = quant
            vkeys = keys.view(np.dtype((np.void, keys.shape[1] * 8))).ravel()
            uniq, first, inv = np.unique(vkeys, return_index=True, return_inverse=True)
            local = np.empty(len(uniq), dtype=np.int64)
            for j, kb in enumerate(uniq.tolist()):
                if kb in self.seen:
                    local[j] = -1
                elif kb in cur:
                    local[j] = cur[kb]
                else:
                    local[j] = cur[kb] = len(new_states)
                    new_states.append(canon[first[j]])
            child = local[inv.ravel()]
            keep = child >= 0
            e_child.append(child[keep])
            e_parent.append(np.flatnonzero(keep) + start)
            e_gate.append(np.full(int(keep.sum()), gi, dtype=np.int64))

        if build and not hits:
            self.seen.update(cur)
            if new_states:
                layer = np.stack(new_states).reshape(-1, self.m, self.dim)
            else:
                layer = np.empty((0, self.m, self.dim), dtype=complex)
            self.layers.append(layer)
            cat = (lambda parts: np.concatenate(parts) if parts
                   else np.empty(0, dtype=np.int64))
            self.edges.append((cat(e_child), cat(e_parent), cat(e_gate)))
        return sorted(hits)

    def parents(self, layer, node):
        if layer not in self._parent_index:
            child, parent, gate = self.edges[layer]
            order = np.argsort(child, kind="stable")
            self._parent_index[layer] = (child[order], parent[order], gate[order])
        child, parent, gate = self._parent_index[layer]
        lo, hi = np.searchsorted(child, [node, node + 1])
        return list(zip(parent[lo:hi].tolist(), gate[lo:hi].tolist()))

    def paths(self, layer, node):
        """All op-index sequences from the root to ``node`` of ``layer``."""
        if layer == 0:
            yield []
            return
        for p, g in self.parents(layer, node):
            for path in self.paths(layer - 1, p):
                yield path + [g]


def _circuit(n_qubits, n_ancillas, gs, seq):
    return Circuit(n_qubits, n_ancillas, tuple(gs.placements[g] for g in seq))


def _check_width(gs, n, cfg):
    if gs.width != n + cfg.n_ancillas:
        raise CircuitError(f"gate set width {gs.width} != {n} qubits + "
                           f"{cfg.n_ancillas} ancillas")


def _bfs(roots, objective, n, cfg, gs, fix_phase, evaluate):
    t0 = time.perf_counter()
    ops = [compile_gate(g, gs.width) for g in gs.placements]
    exp = _Explorer(roots, ops, gs.width, cfg, fix_phase)
    if objective(exp.layers[0])[0] >= cfg.threshold:
        w = Circuit(n, cfg.n_ancillas)
        return SearchResult("found", 0, w, [w], 1, time.perf_counter() - t0,
                            cfg.max_depth, evaluate(w))
    for depth in range(1, cfg.max_depth + 1):
        hits = exp.expand(objective, cfg.threshold, build=depth < cfg.max_depth)
        if hits:
            seqs, truncated = [], False
            for parent, gi in hits:
                for path in exp.paths(depth - 1, parent):
                    if len(seqs) >= cfg.max_witnesses:
                        truncated = True
                        break
                    seqs.append(path + [gi])
                if truncated:
                    break
            witnesses = [_circuit(n, cfg.n_ancillas, gs, s) for s in seqs]
            return SearchResult("found", depth, witnesses[0], witnesses, exp.explored,
                                time.perf_counter() - t0, cfg.max_depth,
                                evaluate(witnesses[0]), truncated)
        if depth < cfg.max_depth and len(exp.layers[-1]) == 0:
            return SearchResult("exhausted", None, None, [], exp.explored,
                                time.perf_counter() - t0, cfg.max_depth, closed=True)
    return SearchResult("exhausted", None, None, [], exp.explored,
                        time.perf_counter() - t0, cfg.max_depth)


def relative_objective(circuit, x, y):
    """|<y,0|C|x,0>|^2."""
    out = run_vectors(x.padded(circuit.n_ancillas), circuit)[0]
    return float(abs(np.vdot(y.padded(circuit.n_ancillas), out)) ** 2)


def swap_objective(circuit, x, y, phase="symmetric"):
    """(|<x,0|C|y,0> + <y,0|C|x,0>|)/2, or its real part for ``phase="exact"``."""
    na = circuit.n_ancillas
    px, py = x.padded(na), y.padded(na)
    ux, uy = run_vectors(np.stack([px, py]), circuit)
    total = np.vdot(px, uy) + np.vdot(py, ux)
    return float(total.real / 2 if phase == "exact" else abs(total) / 2)


def relative_complexity(x, y, cfg, gs):
    """Fewest gates C with |<y,0|C|x,0>|^2 >= 1 - eps."""
    if x.n_qubits != y.n_qubits:
        raise CircuitError("x and y differ in width")
    _check_width(gs, x.n_qubits, cfg)
    if cfg.strategy == "meet-in-the-middle":
        return _meet_in_the_middle(x, y, cfg, gs)
    target = np.conj(y.padded(cfg.n_ancillas))

    def objective(batch):
        return np.abs(batch[:, 0, :] @ target) ** 2

    return _bfs(x.padded(cfg.n_ancillas)[None], objective, x.n_qubits, cfg, gs, True,
                lambda c: relative_objective(c, x, y))


def swap_complexity(x, y, cfg, gs):
    """Fewest gates C with symmetrized overlap >= 1 - eps (see `SearchConfig`)."""
    if x.n_qubits != y.n_qubits:
        raise CircuitError("x and y differ in width")
    _check_width(gs, x.n_qubits, cfg)
    if cfg.strategy != "forward-bfs":
        raise CircuitError("swap search supports forward-bfs only")
    if abs(inner_product(x, y)) > 1e-10:
        warnings.warn("swap complexity of non-orthogonal states", stacklevel=2)
    px, py = x.padded(cfg.n_ancillas), y.padded(cfg.n_ancillas)
    cx, cy = np.conj(px), np.conj(py)
    exact = cfg.phase == "exact"

    def objective(batch):
        total = batch[:, 1, :] @ cx + batch[:, 0, :] @ cy
        return total.real / 2 if exact else np.abs(total) / 2

    return _bfs(np.stack([px, py]), objective, x.n_qubits, cfg, gs, not exact,
                lambda c: swap_objective(c, x, y, cfg.phase))


def prep_complexity(target, cfg, gs):
    """Relative complexity from |0...0> to ``target``."""
    return relative_complexity(zero_state(target.n_qubits), target, cfg, gs)


def _meet_in_the_middle(x, y, cfg, gs):
    if cfg.epsilon != 0:
        raise CircuitError("meet-in-the-middle needs epsilon = 0")
    t0 = time.perf_counter()
    n, na = x.n_qubits, cfg.n_ancillas
    fwd_ops = [compile_gate(g, gs.width) for g in gs.placements]
    bwd_ops = [compile_gate(g.inverse(), gs.width) for g in gs.placements]
    sides = [_Explorer(x.padded(na)[None], fwd_ops, gs.width, cfg, True),
             _Explorer(y.padded(na)[None], bwd_ops, gs.width, cfg, True)]
    meet = [{}, {}]

    def index(side, layer):
        states = sides[side].layers[layer]
        _, keys = kernels.canonical_quantize(
            np.ascontiguousarray(states[:, 0, :]), cfg.meet_tol, True)
        found = []
        other = meet[1 - side]
        for node, kb in enumerate(keys.view(np.dtype((np.void, keys.shape[1] * 8)))
                                  .ravel().tolist()):
            if kb in other:
                found.append((node, other[kb]))
            meet[side].setdefault(kb, (layer, node))
        return found

    def finish(side, layer, matches):
        best = None
        for node, (olayer, onode) in matches:
            total = layer + olayer
            if best is None or total < best[0]:
                f = (layer, node) if side == 0 else (olayer, onode)
                b = (olayer, onode) if side == 0 else (layer, node)
                best = (total, f, b)
        total, (fl, fn), (bl, bn) = best
        fseq = next(sides[0].paths(fl, fn))
        bseq = next(sides[1].paths(bl, bn))
        w = _circuit(n, na, gs, fseq + bseq[::-1])
        return SearchResult("found", total, w, [w],
                            sides[0].explored + sides[1].explored,
                            time.perf_counter() - t0, cfg.max_depth,
                            relative_objective(w, x, y))

    index(0, 0)
    m = index(1, 0)
    if m:
        return finish(1, 0, m)
    depth = [0, 0]
    while depth[0] + depth[1] < cfg.max_depth:
        side = 0 if depth[0] <= depth[1] else 1
        sides[side].expand()
        depth[side] += 1
        m = index(side, depth[side])
        if m:
            return finish(side, depth[side], m)
        if len(sides[side].layers[-1]) == 0:
            return SearchResult("exhausted", None, None, [],
                                sides[0].explored + sides[1].explored,
                                time.perf_counter() - t0, cfg.max_depth, closed=True)
    return SearchResult("exhausted", None, None, [],
                        sides[0].explored + sides[1].explored,
                        time.perf_counter() - t0, cfg.max_depth)


# Audits ------------------------------------------------------------------

def _find(gs, gate):
    return gate if gate in gs.placements else None


def zero_reflection(gs):
    """Circuit for I - 2|0...0><0...0| built from ``gs`` gates, or None.

    Uses X-conjugated (multi-)controlled Z: Z = HXH, CZ = H CNOT H and the
    7-T-gate CCZ, with T taken as a power of an R_phi placement.
    """
    w = gs.width
    need = [xgate(q) for q in range(w)] + [h(q) for q in range(w)]
    if w >= 2:
        need += [cnot(c, t) for c, t in itertools.permutations(range(w), 2)]
    if any(_find(gs, g) is None for g in need) or w > 3:
        return None
    flips = [xgate(q) for q in range(w)]
    if w == 1:
        core = [h(0), xgate(0), h(0)]
    elif w == 2:
        core = [h(1), cnot(0, 1), h(1)]
    else:
        t_cost = gs.cost_of(rphi(2, math.pi / 4))
        if t_cost is None or any(gs.cost_of(rphi(q, math.pi / 4)) is None
                                 for q in range(3)):
            return None

        def t(q, dag=False):
            angle = -math.pi / 4 if dag else math.pi / 4
            phi = next(p.params[0] for p in gs.placements
                       if p.kind == "R" and p.targets == (q,))
            reps = gs.cost_of(rphi(q, angle))
            return [rphi(q, phi)] * reps

        a, b, c = 0, 1, 2
        core = ([cnot(b, c)] + t(c, True) + [cnot(a, c)] + t(c) + [cnot(b, c)]
                + t(c, True) + [cnot(a, c)] + t(b) + t(c) + [cnot(a, b)] + t(a)
                + t(b, True) + [cnot(a, b)])
    return Circuit(w, 0, tuple(flips + core + flips))


@dataclass
class InequalityAudit:
    relative: SearchResult
    swap: SearchResult
    prep_psi: SearchResult
    prep_phi: SearchResult
    overhead: int | None  # gates of the |0..0> reflection
    construction_size: int | None  # gates of P R P^dag in the gate set
    construction_objective: float | None
    left_holds: bool | None
    right_holds: bool | None

    @property
    def complete(self):
        return self.left_holds is not None and self.right_holds is not None

    def to_dict(self):
        v = lambda r: r.size if r.found else None  # noqa: E731
        return {
            "C": v(self.relative), "S": v(self.swap),
            "prep_psi": v(self.prep_psi), "prep_phi": v(self.prep_phi),
            "lower_bounds": {k: r.max_depth + 1 for k, r in
                             (("C", self.relative), ("S", self.swap),
                              ("prep_psi", self.prep_psi), ("prep_phi", self.prep_phi))
                             if not r.found},
            "overhead": self.overhead,
            "construction_size": self.construction_size,
            "construction_objective": self.construction_objective,
            "left_holds": self.left_holds,
            "right_holds": self.right_holds,
            "complete": self.complete,
        }


def inequality_audit(x, y, cfg, gs):
    """Check C(x,y) <= S(x,y) <= [prep + its inverse + reflection] by search.

    The right-hand side is realized explicitly: with P preparing psi (or phi)
    from |0...0>, P (I - 2|0><0|) P^dag swaps x and y; it is simulated to
    confirm it and its gate count (inverse gates priced in ``gs`` gates) is the
    bound. An exhausted sub-search leaves the affected inequality as None.
    """
    if abs(inner_product(x, y)) > 1e-10:
        raise CircuitError("x and y must be orthogonal")
    psi, phi = superpose(x, y, 0.0), superpose(x, y, math.pi)
    rel = relative_complexity(x, y, cfg, gs)
    swp = swap_complexity(x, y, cfg, gs)
    pp = prep_complexity(psi, cfg, gs)
    pf = prep_complexity(phi, cfg, gs)
    left = (rel.size <= swp.size) if rel.found and swp.found else None
    refl = zero_reflection(gs) if cfg.n_ancillas == 0 else None
    overhead = size = obj = None
    right = None
    if refl is not None:
        overhead = len(refl)
        best = None
        for res in (pp, pf):
            if not res.found:
                continue
            P = res.witness
            inv_cost = [gs.cost_of(g.inverse()) for g in P.gates]
            if any(c is None for c in inv_cost):
                continue
            total = len(P) + sum(inv_cost) + overhead
            if best is None or total < best[0]:
                best = (total, adjoint(P).then(refl).then(P))
        if best is not None:
            size = best[0]
            obj = swap_objective(best[1], x, y)
            if swp.found and obj >= cfg.threshold:
                right = swp.size <= size
    return InequalityAudit(rel, swp, pp, pf, overhead, size, obj, left, right)


@dataclass
class TriangleAudit:
    which: str
    # (i, j) -> complexity from state i to state j, None if exhausted
    values: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    complete: bool = True

    @property
    def holds(self):
        return None if not self.complete else not self.violations

    def to_dict(self):
        return {
            "which": self.which,
            "values": {f"{i}->{j}": v for (i, j), v in self.values.items()},
            "violations": [list(v) for v in self.violations],
            "complete": self.complete,
            "holds": self.holds,
        }


def triangle_audit(states, which, cfg, gs):
    """Pairwise complexities of three states and every triangle inequality.

    Swap complexity is symmetric, so three searches suffice; relative
    complexity is computed in both directions. A violation ``(i, j, k)`` means
    d(i, j) > d(i, k) + d(k, j).
    """
    if len(states) != 3:
        raise CircuitError("triangle audit takes exactly three states")
    if which not in ("relative", "swap"):
        raise CircuitError("which must be 'relative' or 'swap'")
    rep = TriangleAudit(which)
    for i, j in itertools.permutations(range(3), 2):
        if which == "swap" and i > j:
            rep.values[(i, j)] = rep.values[(j, i)]
            continue
        search = swap_complexity if which == "swap" else relative_complexity
        res = search(states[i], states[j], cfg, gs)
        rep.values[(i, j)] = res.size if res.found else None
    if any(v is None for v in rep.values.values()):
        rep.complete = False
        return rep
    for i, j, k in itertools.permutations(range(3)):
        d = rep.values
        if d[(i, j)] > d[(i, k)] + d[(k, j)]:
            rep.violations.append((i, j, k))
    return rep


def naive_min_size(x, y, gs, max_depth, objective="relative", epsilon=0.0,
                   match_tol=1e-9, phase="symmetric"):
    """Smallest size by enumerating every gate sequence (no dedup); None if > max_depth.

    Uses dense per-placement matrices, independent of the kernel path.
    """
    from .statevec import Circuit as _C

    mats = [_C(gs.width, 0, (g,)).unitary() for g in gs.placements]
    vx, vy = x.amplitudes, y.amplitudes
    thr = 1 - epsilon - match_tol

    def score(ux, uy):
        if objective == "relative":
            return abs(np.vdot(vy, ux)) ** 2
        total = np.vdot(vx, uy) + np.vdot(vy, ux)
        return total.real / 2 if phase == "exact" else abs(total) / 2

    level = [(vx, vy)]
    if score(vx, vy) >= thr:
        return 0
    for depth in range(1, max_depth + 1):
        nxt = []
        for ux, uy in level:
            for m in mats:
                a, b = m @ ux, m @ uy
                if score(a, b) >= thr:
                    return depth
                nxt.append((a, b))
        level = nxt
    return None


def state_key(state, tol=1e-12):
    """Hashable phase-normalized key of a state (same rounding as the search)."""
    _, keys = kernels.canonical_quantize(np.array(state.amplitudes[None]), tol, True)
    return keys[0].tobytes()


__all__ = [
    "GateSet", "SearchConfig", "SearchResult", "relative_complexity",
    "swap_complexity", "prep_complexity", "inequality_audit", "triangle_audit",
    "zero_reflection", "naive_min_size", "relative_objective", "swap_objective",
    "QuantumState",
]
