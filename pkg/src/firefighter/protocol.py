"""Containment Protocol: two-step lookahead vaccination on infinite grids.

At every time step the budget of vaccines is placed, then the infection
spreads to every susceptible neighbour.  Placements are restricted by three
rules (not infected or vaccinated; adjacent to an infected vertex; within
distance two of another new vaccine or a previous one) and then filtered:

CP0  time 0 only: prefer placements where each vaccine touches another one
CP1  minimise |IV2|
CP2  minimise contacts between previous vaccines and IV2
CP3  prefer placements with a good previous vaccine
CP4  prefer placements without a bad previous vaccine
CP5  minimise the summed distance of the new vaccines to previous ones

IV1/IV2 are computed with the candidate's vaccines already in place.
"""

from __future__ import annotations

import random
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass, field
from itertools import combinations

from .grid import Coord, GridTopology, distance_to_set

MAX_ELIGIBLE = 24
DEFAULT_MAX_STEPS = 20
RULES = ("CP0", "CP1", "CP2", "CP3", "CP4", "CP5")


class ProtocolError(RuntimeError):
    pass


@dataclass(frozen=True)
class StepRecord:
    t: int
    cells: tuple[Coord, ...]
    iv1: tuple[Coord, ...]
    iv2_size: int
    decided_by: str
    counts: dict[str, int]  # survivors after each stage, up to state symmetry
    raw_counts: dict[str, int]


@dataclass(frozen=True)
class OutbreakState:
    topo: GridTopology
    aiv: frozenset[Coord]
    ppv: frozenset[Coord]
    t: int
    n_vaccines: int
    history: tuple[StepRecord, ...] = ()
    # time step at which each vertex was infected / vaccinated, for rendering
    infected_at: tuple[tuple[Coord, int], ...] = ()
    vaccinated_at: tuple[tuple[Coord, int], ...] = ()

    @classmethod
    def initial(cls, topo: GridTopology, cells: Iterable[Coord], n_vaccines: int) -> OutbreakState:
        start = frozenset(tuple(c) for c in cells)
        if not start:
            raise ValueError("initial outbreak must be nonempty")
        if n_vaccines < 1:
            raise ValueError("budget must be ≥ 1")
        for c in start:
            if not topo.is_vertex(c):
                raise ValueError(f"{c} is not a vertex of the {topo.name} grid")
        return cls(topo, start, frozenset(), 0, n_vaccines, (), tuple((c, 0) for c in sorted(start)))

    @property
    def frontier(self) -> frozenset[Coord]:
        """Susceptible vertices adjacent to the infection."""
        out = set()
        for a in self.aiv:
            out.update(self.topo.neighbors(a))
        return frozenset(out - self.aiv - self.ppv)

    @property
    def contained(self) -> bool:
        return not self.frontier


@dataclass(frozen=True)
class CandidatePlacement:
    cells: tuple[Coord, ...]
    iv1: frozenset[Coord]
    iv2: frozenset[Coord]
    ppv_adj_iv2: int
    good_ppv: frozenset[Coord]
    bad_ppv: frozenset[Coord]
    total_distance: int

    @property
    def has_good_ppv(self) -> bool:
        return bool(self.good_ppv)

    @property
    def has_bad_ppv(self) -> bool:
        return bool(self.bad_ppv)


def lookahead(state: OutbreakState, cells: Iterable[Coord]) -> tuple[frozenset[Coord], frozenset[Coord]]:
    """Vertices infected this step (IV1) and next step (IV2) with ``cells`` vaccinated."""
    topo = state.topo
    blocked = state.aiv | state.ppv | frozenset(cells)
    iv1 = set()
    for a in state.aiv:
        iv1.update(topo.neighbors(a))
    iv1 -= blocked
    iv2 = set()
    for v in iv1:
        iv2.update(topo.neighbors(v))
    iv2 -= blocked | iv1
    return frozenset(iv1), frozenset(iv2)


def classify_ppv(state: OutbreakState, iv1: frozenset[Coord]) -> dict[Coord, str]:
    """Label previous vaccines touching IV1 as ``good`` or ``bad``.

    Good means at most half of the vertex's neighbours are in AIV ∪ IV1.
    Previous vaccines with no IV1 neighbour get no label.
    """
    topo = state.topo
    burning = state.aiv | iv1
    labels = {}
    for p in state.ppv:
        nbs = topo.neighbors(p)
        if not any(nb in iv1 for nb in nbs):
            continue
        hot = sum(1 for nb in nbs if nb in burning)
        labels[p] = "good" if 2 * hot <= len(nbs) else "bad"
    return labels


CP2_METRICS = ("pairs", "iv2", "ppv")


def ppv_iv2_contacts(state: OutbreakState, iv2: frozenset[Coord], metric: str = "pairs") -> int:
    """How many previous vaccines touch IV2.

    ``pairs`` counts adjacent (vaccine, IV2 vertex) pairs, ``iv2`` counts IV2
    vertices with a vaccinated neighbour, ``ppv`` counts vaccinated vertices
    with an IV2 neighbour.
    """
    nbs = {p: state.topo.neighbors(p) for p in state.ppv}
    if metric == "pairs":
        return sum(1 for p in state.ppv for nb in nbs[p] if nb in iv2)
    if metric == "iv2":
        return len({nb for p in state.ppv for nb in nbs[p] if nb in iv2})
    if metric == "ppv":
        return sum(1 for p in state.ppv if any(nb in iv2 for nb in nbs[p]))
    raise ValueError(f"unknown CP2 metric {metric!r}; known: {', '.join(CP2_METRICS)}")


def _evaluate(
    state: OutbreakState, cells: tuple[Coord, ...], dist: dict[Coord, int], metric: str
) -> CandidatePlacement:
    iv1, iv2 = lookahead(state, cells)
    adj = ppv_iv2_contacts(state, iv2, metric)
    labels = classify_ppv(state, iv1)
    return CandidatePlacement(
        cells=cells,
        iv1=iv1,
        iv2=iv2,
        ppv_adj_iv2=adj,
        good_ppv=frozenset(p for p, lab in labels.items() if lab == "good"),
        bad_ppv=frozenset(p for p, lab in labels.items() if lab == "bad"),
        total_distance=sum(dist[c] for c in cells),
    )


def _rule2_ok(state: OutbreakState, cells: tuple[Coord, ...]) -> bool:
    for c in cells:
        others = [o for o in cells if o != c]
        if distance_to_set(state.topo, c, others, 2, empty=None) is not None:
            continue
        if distance_to_set(state.topo, c, state.ppv, 2, empty=None) is not None:
            continue
        return False
    return True


def candidates(
    state: OutbreakState, cp2_metric: str = "pairs", distance_rule: bool = True
) -> list[CandidatePlacement]:
    """All placements allowed by the placement rules, fully evaluated.

    If the frontier fits in the budget the only candidate is the whole
    frontier, which seals the outbreak.  The distance-two rule is enforced
    once previous vaccines exist; if no full-budget placement satisfies it,
    it is dropped for that step.
    """
    eligible = sorted(state.frontier)
    if not eligible:
        return []
    if len(eligible) > MAX_ELIGIBLE:
        raise ProtocolError(
            f"{len(eligible)} eligible cells at t={state.t} exceeds the limit of {MAX_ELIGIBLE}"
        )
    dist = {c: _ppv_distance(state, c) for c in eligible}
    if len(eligible) <= state.n_vaccines:
        return [_evaluate(state, tuple(eligible), dist, cp2_metric)]
    subsets = list(combinations(eligible, state.n_vaccines))
    allowed = subsets
    if distance_rule and state.ppv:
        allowed = [s for s in subsets if _rule2_ok(state, s)] or subsets
    return [_evaluate(state, s, dist, cp2_metric) for s in allowed]


def _ppv_distance(state: OutbreakState, c: Coord) -> int:
    d = distance_to_set(state.topo, c, state.ppv, cap=256)
    if d is None:
        raise ProtocolError(f"{c} is more than 256 steps from every previous vaccine")
    return d


def _orbit_key(topo: GridTopology, syms: list, cells: tuple[Coord, ...]) -> tuple[Coord, ...]:
    return min(tuple(sorted(topo.act(g, c) for c in cells)) for g in syms)


def orbits(state: OutbreakState, cands: list[CandidatePlacement]) -> list[CandidatePlacement]:
    """One representative per orbit of the state's symmetry group."""
    syms = state.topo.stabilizer(state.aiv, state.ppv)
    reps: dict[tuple[Coord, ...], CandidatePlacement] = {}
    for c in cands:
        reps.setdefault(_orbit_key(state.topo, syms, c.cells), c)
    return list(reps.values())


def _touching(state: OutbreakState, cells: tuple[Coord, ...]) -> bool:
    topo = state.topo
    return all(any(o in topo.neighbors(c) for o in cells if o != c) for c in cells)


def filter_cascade(
    state: OutbreakState, cands: list[CandidatePlacement]
) -> tuple[list[CandidatePlacement], dict]:
    """Apply CP0..CP5 in order; return survivors and a trace of the cascade."""
    if not cands:
        raise ValueError("filter_cascade needs at least one candidate")
    syms = state.topo.stabilizer(state.aiv, state.ppv)

    def n_orbits(cs: list[CandidatePlacement]) -> int:
        return len({_orbit_key(state.topo, syms, c.cells) for c in cs})

    def keep_min(cs, key):
        best = min(key(c) for c in cs)
        return [c for c in cs if key(c) == best]

    def prefer(cs, pred):
        good = [c for c in cs if pred(c)]
        return good or cs

    counts = {"candidates": n_orbits(cands)}
    raw = {"candidates": len(cands)}
    stages = [
        ("CP0", lambda cs: prefer(cs, lambda c: _touching(state, c.cells)) if state.t == 0 else cs),
        ("CP1", lambda cs: keep_min(cs, lambda c: len(c.iv2))),
        ("CP2", lambda cs: keep_min(cs, lambda c: c.ppv_adj_iv2)),
        ("CP3", lambda cs: prefer(cs, lambda c: c.has_good_ppv)),
        ("CP4", lambda cs: prefer(cs, lambda c: not c.has_bad_ppv)),
        ("CP5", lambda cs: keep_min(cs, lambda c: c.total_distance)),
    ]
    decided = "forced" if counts["candidates"] == 1 else None
    survivors = cands
    for name, stage in stages:
        survivors = stage(survivors)
        counts[name] = n_orbits(survivors)
        raw[name] = len(survivors)
        if decided is None and counts[name] == 1:
            decided = name
    if len(cands) == 1 and len(cands[0].cells) >= len(state.frontier):
        decided = "seal"
    return survivors, {"counts": counts, "raw_counts": raw, "decided_by": decided or "tie"}


def step(state: OutbreakState, cells: Iterable[Coord], record: StepRecord | None = None) -> OutbreakState:
    """Vaccinate ``cells`` and let the infection spread one step."""
    cells = tuple(sorted(cells))
    frontier = state.frontier
    if len(cells) > state.n_vaccines:
        raise ProtocolError(f"{len(cells)} vaccines exceed the budget {state.n_vaccines}")
    for c in cells:
        if c not in frontier:
            raise ProtocolError(f"placement {c} is not a susceptible vertex adjacent to the infection")
    iv1, iv2 = lookahead(state, cells)
    if record is None:
        record = StepRecord(state.t, cells, tuple(sorted(iv1)), len(iv2), "manual", {}, {})
    return OutbreakState(
        topo=state.topo,
        aiv=state.aiv | iv1,
        ppv=state.ppv | frozenset(cells),
        t=state.t + 1,
        n_vaccines=state.n_vaccines,
        history=state.history + (record,),
        infected_at=state.infected_at + tuple((c, state.t + 1) for c in sorted(iv1)),
        vaccinated_at=state.vaccinated_at + tuple((c, state.t) for c in cells),
    )


@dataclass(frozen=True)
class ProtocolOutcome:
    contained: bool
    steps: int
    infected: int
    trace: tuple[StepRecord, ...]
    final: OutbreakState
    branch: str = "0"

    @property
    def key(self) -> tuple[int, int]:
        return (self.steps, self.infected)

    @property
    def escaped(self) -> bool:
        return not self.contained and len(self.final.frontier) > MAX_ELIGIBLE

    def rule_histogram(self) -> Counter:
        return Counter(r.decided_by for r in self.trace)


def _decide(state: OutbreakState, cp2_metric: str, distance_rule: bool) -> tuple[list[CandidatePlacement], dict]:
    cands = candidates(state, cp2_metric, distance_rule)
    return filter_cascade(state, cands)


def _advance(state: OutbreakState, choice: CandidatePlacement, info: dict) -> OutbreakState:
    record = StepRecord(
        t=state.t,
        cells=choice.cells,
        iv1=tuple(sorted(choice.iv1)),
        iv2_size=len(choice.iv2),
        decided_by=info["decided_by"],
        counts=info["counts"],
        raw_counts=info["raw_counts"],
    )
    return step(state, choice.cells, record)


def _outcome(state: OutbreakState, branch: str) -> ProtocolOutcome:
    return ProtocolOutcome(state.contained, state.t, len(state.aiv), state.history, state, branch)


def run(
    topo: GridTopology,
    initial: Iterable[Coord],
    n_vaccines: int,
    tie_policy: str = "branch-all",
    seed: int = 0,
    max_steps: int = DEFAULT_MAX_STEPS,
    max_branches: int = 10_000,
    dedup: bool = True,
    cp2_metric: str = "pairs",
    distance_rule: bool = True,
) -> list[ProtocolOutcome]:
    """Run the protocol from ``initial``.

    ``seeded-random`` (alias ``random``) breaks final ties with a seeded
    uniform draw and returns one outcome.  ``branch-all`` forks on every
    remaining tie, one branch per symmetry class of tied placements, and
    returns one outcome per branch; terminal states equivalent under a grid
    symmetry are merged when ``dedup`` is set.

    ``cp2_metric`` picks what CP2 counts (see ``ppv_iv2_contacts``) and
    ``distance_rule=False`` drops the distance-two placement rule.  A random
    run raises ``ProtocolError`` if the frontier outgrows ``MAX_ELIGIBLE``;
    under branch-all that branch is closed as escaped instead.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be ≥ 1")
    if cp2_metric not in CP2_METRICS:
        raise ValueError(f"unknown CP2 metric {cp2_metric!r}; known: {', '.join(CP2_METRICS)}")
    state = OutbreakState.initial(topo, initial, n_vaccines)
    if tie_policy in ("random", "seeded-random"):
        rng = random.Random(seed)
        while not state.contained and state.t < max_steps:
            survivors, info = _decide(state, cp2_metric, distance_rule)
            survivors = sorted(survivors, key=lambda c: c.cells)
            state = _advance(state, rng.choice(survivors), info)
        return [_outcome(state, "0")]
    if tie_policy != "branch-all":
        raise ValueError(f"unknown tie policy {tie_policy!r}")

    outcomes: list[ProtocolOutcome] = []
    stack = [(state, "0")]
    while stack:
        if len(outcomes) + len(stack) > max_branches:
            raise ProtocolError(f"branch-all exceeded {max_branches} branches")
        cur, label = stack.pop()
        while not cur.contained and cur.t < max_steps:
            if len(cur.frontier) > MAX_ELIGIBLE:
                break  # escaped: too many cells to enumerate placements
            survivors, info = _decide(cur, cp2_metric, distance_rule)
            reps = orbits(cur, survivors) if len(survivors) > 1 else survivors
            reps = sorted(reps, key=lambda c: c.cells)
            for i, alt in enumerate(reps[1:], start=1):
                stack.append((_advance(cur, alt, info), f"{label}.{i}"))
            if len(reps) > 1:
                label = f"{label}.0"
            cur = _advance(cur, reps[0], info)
        outcomes.append(_outcome(cur, label))
    outcomes.sort(key=lambda o: _branch_sort(o.branch))
    if dedup:
        outcomes = dedup_outcomes(topo, outcomes)
    return outcomes


def _branch_sort(label: str) -> tuple[int, ...]:
    return tuple(int(x) for x in label.split("."))


def dedup_outcomes(topo: GridTopology, outcomes: list[ProtocolOutcome]) -> list[ProtocolOutcome]:
    """Drop outcomes whose final infected/vaccinated sets repeat an earlier one up to symmetry."""
    kept: list[ProtocolOutcome] = []
    for o in outcomes:
        mine = (o.final.aiv, o.final.ppv)
        if not any(k.key == o.key and topo.equivalent(mine, (k.final.aiv, k.final.ppv)) for k in kept):
            kept.append(o)
    return kept
