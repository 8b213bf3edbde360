"""Swap schedules: which slot exchanges fire on which Dicke-ancilla pattern.

A pattern is an int whose bit ``s`` is the value of ancilla a_{s+1} (slot
``s+1``).  Internally slots and ancillae are 0-based; everything stored on a
SwapOp or printed in a report is 1-based.
"""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from math import comb

from ..layout import AntisymConfig

VARIANTS = ("reference", "shared", "parallel")
COMPILE_MODES = ("terms", "flags")
TERMS_MAX_SLOTS = 8

Literal = tuple[int, int]
Term = tuple[Literal, ...]


def patterns(m: int, k: int) -> list[int]:
    """All m-bit masks of weight k, in lexicographic order of their set bits."""
    return [sum(1 << s for s in ones) for ones in combinations(range(m), k)]


def pattern_string(mask: int, m: int) -> str:
    """Ancilla values a_1 ... a_m, left to right."""
    return "".join(str((mask >> s) & 1) for s in range(m))


def parse_pattern(text: str) -> int:
    if not text or set(text) - {"0", "1"}:
        raise ValueError(f"pattern must be a 0/1 string, got {text!r}")
    return sum(1 << s for s, ch in enumerate(text) if ch == "1")


def exchange_count(mask: int, n_target: int) -> int:
    """k(b): projectile states that must move into the target block."""
    return bin(mask & ((1 << n_target) - 1)).count("1")


def identity_pattern(cfg: AntisymConfig) -> int:
    return sum(1 << s for s in range(cfg.n_target, cfg.num_slots))


def canonical_matching(mask: int, n_target: int, m: int) -> list[tuple[int, int]]:
    takers = [s for s in range(n_target) if mask >> s & 1]
    givers = [s for s in range(n_target, m) if not mask >> s & 1]
    return list(zip(takers, givers))


def band_order(n_target: int, n_projectile: int) -> list[tuple[int, int]]:
    """Slot pairs (0-based) walked diagonal by diagonal: target i with projectile i - d."""
    order = []
    for d in range(n_target):
        for s in range(n_projectile):
            if s + d < n_target:
                order.append((s + d, n_target + s))
    seen = set(order)
    for i in range(n_target):
        for s in range(n_projectile):
            if (i, n_target + s) not in seen:
                order.append((i, n_target + s))
    return order


def greedy_matching(mask: int, order: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    """Fire each pair in turn unless one of its slots was already exchanged."""
    used = 0
    fired = []
    for i, j in order:
        if mask >> i & 1 and not mask >> j & 1 and not (used >> i | used >> j) & 1:
            used |= (1 << i) | (1 << j)
            fired.append((i, j))
    return fired


def term_matches(term: Term, mask: int) -> bool:
    # literals are 1-based (ancilla, value)
    return all((mask >> (a - 1) & 1) == v for a, v in term)


@dataclass(frozen=True)
class SwapOp:
    """Exchange of slots ``slot_a`` (target block) and ``slot_b`` (projectile block).

    ``terms`` is a disjunction of mutually exclusive product terms over the
    Dicke ancillae; the op fires when exactly one term holds.
    """

    slot_a: int
    slot_b: int
    terms: tuple[Term, ...]
    order: int

    def __post_init__(self):
        terms = tuple(tuple(sorted((int(a), int(v)) for a, v in t)) for t in self.terms)
        object.__setattr__(self, "terms", terms)
        if not 1 <= self.slot_a < self.slot_b:
            raise ValueError(f"need 1 <= slot_a < slot_b, got {self.slot_a}, {self.slot_b}")
        if not terms:
            raise ValueError("swap op needs at least one predicate term")
        for t in terms:
            if not t:
                raise ValueError("empty product term (unconditional swap) is not allowed")
            if any(v not in (0, 1) or a < 1 for a, v in t):
                raise ValueError(f"bad literal in {t}")
            if len({a for a, _ in t}) != len(t):
                raise ValueError(f"repeated ancilla in {t}")

    def fires(self, mask: int) -> bool:
        return sum(term_matches(t, mask) for t in self.terms) % 2 == 1

    def to_dict(self) -> dict:
        return {
            "slot_a": self.slot_a,
            "slot_b": self.slot_b,
            "predicate": {"any_of": [[list(lit) for lit in t] for t in self.terms]},
            "order": self.order,
        }

    @classmethod
    def from_dict(cls, d: dict) -> SwapOp:
        pred = d["predicate"]
        terms = pred["any_of"] if isinstance(pred, dict) else [pred]
        return cls(
            int(d["slot_a"]),
            int(d["slot_b"]),
            tuple(tuple((int(a), int(v)) for a, v in t) for t in terms),
            int(d["order"]),
        )


@dataclass(frozen=True)
class SwapSchedule:
    config: AntisymConfig
    ops: tuple[SwapOp, ...]
    variant: str
    compile: str = "terms"

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.compile not in COMPILE_MODES:
            raise ValueError(f"unknown compile mode {self.compile!r}")
        nt, m = self.config.n_target, self.config.num_slots
        for op in self.ops:
            if not (op.slot_a <= nt < op.slot_b <= m):
                raise ValueError(f"op {op.order} must pair a target slot with a projectile slot")
            if any(a > m for t in op.terms for a, _ in t):
                raise ValueError(f"op {op.order} references an ancilla beyond a_{m}")

    @property
    def swap_count(self) -> int:
        return len(self.ops)

    @property
    def slot_pairs(self) -> list[tuple[int, int]]:
        return sorted({(op.slot_a, op.slot_b) for op in self.ops})

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "variant": self.variant,
            "compile": self.compile,
            "ops": [op.to_dict() for op in self.ops],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> SwapSchedule:
        return cls(
            AntisymConfig(**d["config"]),
            tuple(SwapOp.from_dict(o) for o in d["ops"]),
            d["variant"],
            d.get("compile", "terms"),
        )

    @classmethod
    def from_json(cls, text: str) -> SwapSchedule:
        return cls.from_dict(json.loads(text))


def generate_reference_schedule(cfg: AntisymConfig) -> SwapSchedule:
    """Canonical matching per pattern, each swap conditioned on the whole register."""
    m, nt = cfg.num_slots, cfg.n_target
    ident = identity_pattern(cfg)
    ops = []
    for mask in patterns(m, cfg.n_projectile):
        if mask == ident:
            continue
        term = tuple((s + 1, mask >> s & 1) for s in range(m))
        for i, j in canonical_matching(mask, nt, m):
            ops.append(SwapOp(i + 1, j + 1, (term,), len(ops) + 1))
    return SwapSchedule(cfg, tuple(ops), "reference", "terms")


def default_control_budget(cfg: AntisymConfig) -> int:
    """Largest product term allowed when compiling shared predicates."""
    m = cfg.num_slots
    slack = 2 if cfg.n_target == cfg.n_projectile else 3
    return max(1, m - slack)


def fire_sets(cfg: AntisymConfig) -> dict[tuple[int, int], list[int]]:
    """Patterns on which each band-ordered pair fires under the greedy matching."""
    order = band_order(cfg.n_target, cfg.n_projectile)
    out: dict[tuple[int, int], list[int]] = {p: [] for p in order}
    for mask in patterns(cfg.num_slots, cfg.n_projectile):
        for pair in greedy_matching(mask, order):
            out[pair].append(mask)
    return out


@lru_cache(maxsize=64)
def _cube_table(m: int, k: int, budget: int) -> tuple[tuple[int, int, Term], ...]:
    # (coverage bitmask over pattern indices, literal count, 0-based term), fewest literals first
    pats = patterns(m, k)
    lit = {
        (q, v): sum(1 << i for i, p in enumerate(pats) if (p >> q & 1) == v)
        for q in range(m)
        for v in (0, 1)
    }
    full = (1 << len(pats)) - 1
    table = []
    for r in range(1, budget + 1):
        for qs in combinations(range(m), r):
            for vs in product((0, 1), repeat=r):
                cov = full
                for q, v in zip(qs, vs):
                    cov &= lit[(q, v)]
                if cov:
                    table.append((cov, r, tuple(zip(qs, vs))))
    return tuple(table)


def _min_disjoint_cover(onset: int, cubes) -> list[Term] | None:
    best_cov: dict[int, Term] = {}
    for cov, _, term in cubes:
        if cov & ~onset == 0 and cov not in best_cov:
            best_cov[cov] = term
    ranked = sorted(best_cov.items(), key=lambda c: -bin(c[0]).count("1"))
    best: list[list[Term] | None] = [None]

    def search(rem: int, chosen: list[Term]):
        if best[0] is not None and len(chosen) >= len(best[0]):
            return
        if not rem:
            best[0] = list(chosen)
            return
        low = rem & -rem
        for cov, term in ranked:
            if cov & low and cov & ~rem == 0:
                chosen.append(term)
                search(rem & ~cov, chosen)
                chosen.pop()

    search(onset, [])
    return best[0]


def cover_terms(cfg: AntisymConfig, masks: Sequence[int], budget: int) -> list[Term]:
    """Fewest disjoint product terms whose union over Dicke patterns is exactly ``masks``.

    Non-Dicke strings are don't-cares.  The literal budget is raised one step at
    a time if no cover fits.
    """
    m, k = cfg.num_slots, cfg.n_projectile
    index = {p: i for i, p in enumerate(patterns(m, k))}
    onset = sum(1 << index[p] for p in masks)
    for limit in range(max(1, budget), m + 1):
        found = _min_disjoint_cover(onset, _cube_table(m, k, limit))
        if found is not None:
            return found
    raise AssertionError("minterm cover always exists")


def shannon_terms(cfg: AntisymConfig, masks: Sequence[int]) -> list[Term]:
    """Disjoint cover by supercube, split on a free ancilla whenever it overshoots."""
    m, k = cfg.num_slots, cfg.n_projectile
    full = (1 << m) - 1

    def rec(group: list[int]) -> list[Term]:
        ones = full
        any_set = 0
        for p in group:
            ones &= p
            any_set |= p
        zeros = full & ~any_set
        free = m - bin(ones).count("1") - bin(zeros).count("1")
        if comb(free, k - bin(ones).count("1")) == len(group):
            return [tuple((q, 1 if ones >> q & 1 else 0) for q in range(m) if (ones | zeros) >> q & 1)]
        q = next(q for q in range(m) if any_set >> q & 1 and not ones >> q & 1)
        return rec([p for p in group if not p >> q & 1]) + rec([p for p in group if p >> q & 1])

    return rec(list(masks)) if masks else []


def _one_based(term: Term) -> Term:
    return tuple((q + 1, v) for q, v in term)


def generate_shared_schedule(
    cfg: AntisymConfig, compile: str | None = None, max_controls: int | None = None
) -> SwapSchedule:
    """One swap per (pair, product term), shared across every pattern that needs it.

    Each pattern's exchanges come from the greedy walk over :func:`band_order`,
    so every branch fires exactly k(b) disjoint swaps.  With ``compile="terms"``
    the op list is: single-term pairs in band order, then the multi-term pairs
    with first terms forward and the remaining terms in reverse, so repeated
    pairs sit symmetrically around the middle.  With ``compile="flags"`` each
    pair is one op carrying its whole disjunction.
    """
    mode = compile or ("terms" if cfg.num_slots <= TERMS_MAX_SLOTS else "flags")
    if mode not in COMPILE_MODES:
        raise ValueError(f"unknown compile mode {mode!r}")
    sets = fire_sets(cfg)
    if mode == "flags":
        ops = []
        for (i, j), masks in sets.items():
            if masks:
                terms = tuple(_one_based(t) for t in shannon_terms(cfg, masks))
                ops.append(SwapOp(i + 1, j + 1, terms, len(ops) + 1))
        return SwapSchedule(cfg, tuple(ops), "shared", "flags")

    budget = default_control_budget(cfg) if max_controls is None else max_controls
    if budget < 1:
        raise ValueError("max_controls must be at least 1")
    covers = [(pair, cover_terms(cfg, masks, budget)) for pair, masks in sets.items() if masks]
    singles = [(pair, terms[0]) for pair, terms in covers if len(terms) == 1]
    multis = [(pair, terms) for pair, terms in covers if len(terms) > 1]
    sequence = list(singles)
    sequence += [(pair, terms[0]) for pair, terms in multis]
    sequence += [(pair, t) for pair, terms in reversed(multis) for t in reversed(terms[1:])]
    ops = tuple(
        SwapOp(i + 1, j + 1, (_one_based(t),), n) for n, ((i, j), t) in enumerate(sequence, 1)
    )
    return SwapSchedule(cfg, ops, "shared", "terms")


def generate_schedule(cfg: AntisymConfig, variant: str, **kw) -> SwapSchedule:
    if variant == "reference":
        return generate_reference_schedule(cfg)
    if variant in ("shared", "parallel"):
        s = generate_shared_schedule(cfg, **kw)
        return SwapSchedule(cfg, s.ops, variant, s.compile)
    raise ValueError(f"unknown variant {variant!r}")


@dataclass(frozen=True)
class BranchReport:
    pattern: str
    fired: tuple[int, ...]
    final_projectile_slots: tuple[int, ...]
    parity_ok: bool
    occupancy_ok: bool
    minimal: bool

    @property
    def ok(self) -> bool:
        return self.parity_ok and self.occupancy_ok

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern,
            "fired": list(self.fired),
            "final_projectile_slots": list(self.final_projectile_slots),
            "parity_ok": self.parity_ok,
            "occupancy_ok": self.occupancy_ok,
            "minimal": self.minimal,
        }


def branch_report(s: SwapSchedule, mask: int) -> BranchReport:
    cfg = s.config
    m, nt = cfg.num_slots, cfg.n_target
    contents = list(range(m))
    fired = []
    for op in s.ops:
        if op.fires(mask):
            a, b = op.slot_a - 1, op.slot_b - 1
            contents[a], contents[b] = contents[b], contents[a]
            fired.append(op.order)
    final = tuple(slot + 1 for slot in range(m) if contents[slot] >= nt)
    want = tuple(slot + 1 for slot in range(m) if mask >> slot & 1)
    k = exchange_count(mask, nt)
    return BranchReport(
        pattern_string(mask, m),
        tuple(fired),
        final,
        parity_ok=len(fired) % 2 == k % 2,
        occupancy_ok=final == want,
        minimal=len(fired) == k,
    )


def validate_schedule(s: SwapSchedule) -> list[BranchReport]:
    cfg = s.config
    return [branch_report(s, mask) for mask in patterns(cfg.num_slots, cfg.n_projectile)]


def schedule_is_valid(s: SwapSchedule) -> bool:
    return all(r.ok for r in validate_schedule(s))


def corrupt_schedule(s: SwapSchedule, op_index: int = 0, literal_index: int = 0) -> SwapSchedule:
    """Test hook: flip one literal of one op's first predicate term."""
    op = s.ops[op_index]
    term = list(op.terms[0])
    a, v = term[literal_index]
    term[literal_index] = (a, 1 - v)
    bad = SwapOp(op.slot_a, op.slot_b, (tuple(term),) + op.terms[1:], op.order)
    ops = list(s.ops)
    ops[op_index] = bad
    return SwapSchedule(s.config, tuple(ops), s.variant, s.compile)
