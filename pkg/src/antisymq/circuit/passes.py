"""Circuit rewrites: flag-collapse of paired swaps and flag-based parallel swaps.

Both passes append the work qubits they need above the existing register and
return a new circuit; the input is never modified.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .ir import CLOSED, OPEN, Circuit, Gate, block_swap, mcx
from .metrics import depth


@dataclass(frozen=True)
class DickeConstraint:
    """Declares that ``ancillae`` hold a superposition of weight-``weight`` strings."""

    ancillae: tuple[int, ...]
    weight: int

    def __post_init__(self):
        object.__setattr__(self, "ancillae", tuple(self.ancillae))
        if not 0 <= self.weight <= len(self.ancillae):
            raise ValueError("Dicke weight out of range")

    def satisfiable(self, literals: Iterable[tuple[int, int]]) -> bool:
        """Whether some allowed ancilla string meets every (qubit, value) literal."""
        fixed: dict[int, int] = {}
        for q, v in literals:
            if fixed.setdefault(q, v) != v:
                return False
        members = set(self.ancillae)
        ones = sum(1 for q, v in fixed.items() if q in members and v == 1)
        zeros = sum(1 for q, v in fixed.items() if q in members and v == 0)
        free = len(members) - ones - zeros
        return ones <= self.weight <= ones + free


def _commute(g: Gate, h: Gate) -> bool:
    # controls act diagonally, so only target/qubit overlaps can break commutation
    return not (set(g.targets) & set(h.qubits)) and not (set(h.targets) & set(g.qubits))


def _same_blocks(g: Gate, h: Gate) -> bool:
    ga, gb = g.blocks
    ha, hb = h.blocks
    return (ga, gb) == (ha, hb) or (ga, gb) == (hb, ha)


def _work_names(c: Circuit, count: int) -> list[str]:
    used = 0
    if c.qubit_names is not None:
        used = sum(1 for n in c.qubit_names if n.startswith("w") and n[1:].isdigit())
    return [f"w{used + i + 1}" for i in range(count)]


def _split_controls(g: Gate, h: Gate):
    cg, ch = set(g.controls), set(h.controls)
    common = cg & ch
    dg, dh = cg - common, ch - common
    if len(dg) != 1 or len(dh) != 1:
        return None
    (xg, vg), (xh, vh) = next(iter(dg)), next(iter(dh))
    if xg == xh:
        return None
    return [c for c in g.controls if c in common], (xg, vg), (xh, vh)


def find_collapsible(
    gates: Sequence[Gate], constraint: DickeConstraint
) -> tuple[int, int, tuple] | None:
    members = set(constraint.ancillae)

    def candidate(g: Gate) -> bool:
        return g.kind == "BlockSwap" and bool(g.controls) and set(g.control_qubits) <= members

    for i, g in enumerate(gates):
        if not candidate(g):
            continue
        for j in range(i + 1, len(gates)):
            h = gates[j]
            if not candidate(h) or not _same_blocks(g, h):
                continue
            split = _split_controls(g, h)
            if split is None:
                continue
            if constraint.satisfiable(g.controls + h.controls):
                continue
            if all(_commute(gates[k], h) for k in range(i + 1, j)):
                return i, j, split
    return None


def _place_pair(gates: list[Gate], i: int, compute: Gate) -> list[Gate]:
    """Insert ``compute`` before and after ``gates[i]`` at the least-deep commuting spots."""
    lo = i
    while lo > 0 and _commute(gates[lo - 1], compute):
        lo -= 1
    hi = i + 1
    while hi < len(gates) and _commute(gates[hi], compute):
        hi += 1
    best = None
    for p in range(i, lo - 1, -1):
        for q in range(i + 1, hi + 1):
            cand = gates[:p] + [compute] + gates[p:q] + [compute] + gates[q:]
            key = (depth(cand), q - p)
            if best is None or key < best[0]:
                best = (key, cand)
    return best[1]


def peephole_collapse(
    c: Circuit, dicke_constraint: DickeConstraint, *, flag_policy: str = "fresh"
) -> Circuit:
    """Merge swap pairs P1 = C+{x}, P2 = C+{y} into one flag-controlled swap.

    The flag is set by an MCX on the negated literals of x and y, so the merged
    swap fires on C and (x or y).  That equals firing P1 then P2 only when no
    allowed ancilla string satisfies both, which is checked against the
    declared Dicke constraint; pairs that fail the check are left alone.  The
    two flag MCXs are slid through commuting neighbours to wherever the
    greedy depth is smallest.

    ``flag_policy`` is ``"reuse"`` (one flag qubit for every merge) or
    ``"fresh"`` (a new flag qubit per merge).
    """
    if flag_policy not in ("reuse", "fresh"):
        raise ValueError(f"unknown flag_policy {flag_policy!r}")
    gates = list(c.gates)
    flags: list[str] = []
    num_qubits = c.num_qubits
    while True:
        hit = find_collapsible(gates, dicke_constraint)
        if hit is None:
            break
        i, j, (common, (xg, vg), (xh, vh)) = hit
        if flag_policy == "fresh" or not flags:
            flags.append(_work_names(c, len(flags) + 1)[-1])
            flag = num_qubits
            num_qubits += 1
        else:
            flag = c.num_qubits  # reuse the first appended flag
        g, h = gates[i], gates[j]
        tag = g.label.split(":", 1)[-1] + "+" + h.label.split(":", 1)[-1]
        compute = mcx([(xg, 1 - vg), (xh, 1 - vh)], flag, label=f"collapse:{tag}")
        a, b = g.blocks
        merged = block_swap(a, b, list(common) + [(flag, OPEN)], label=f"swap:{tag}")
        rest = gates[:j] + gates[j + 1 :]
        rest[i] = merged
        gates = _place_pair(rest, i, compute)
    if not flags:
        return c
    out = c.widened(flags)
    return out.with_gates(gates)


def _groupable(group: list[Gate], g: Gate) -> bool:
    if g.kind != "BlockSwap" or not g.controls:
        return False
    for other in group:
        if set(other.targets) & set(g.targets):
            return False
        if set(other.targets) & set(g.control_qubits) or set(g.targets) & set(other.control_qubits):
            return False
    return True


def _groups(gates: Sequence[Gate], size: int) -> list[tuple[int, int]]:
    spans = []
    start = 0
    while start < len(gates):
        group: list[Gate] = []
        end = start
        while end < len(gates) and len(group) < size and _groupable(group, gates[end]):
            group.append(gates[end])
            end += 1
        if len(group) >= 2:
            spans.append((start, end))
            start = end
        else:
            start += 1
    return spans


def _rewrite(group: Sequence[Gate], work: Sequence[int]) -> list[Gate]:
    compute = [mcx(g.controls, w, label="parallel:compute") for g, w in zip(group, work)]
    swaps = [
        block_swap(*g.blocks, [(w, CLOSED)], label=g.label) for g, w in zip(group, work)
    ]
    uncompute = [mcx(g.controls, w, label="parallel:uncompute") for g, w in zip(group, work)]
    return compute + swaps + uncompute[::-1]


def parallelize(c: Circuit, extra_ancillae: int, *, require_improvement: bool = True) -> Circuit:
    """Fire runs of disjoint controlled swaps together via per-swap flag qubits.

    Each run of up to ``extra_ancillae`` consecutive controlled BlockSwaps with
    disjoint blocks becomes: one MCX per swap computing its predicate into its
    own work qubit, the swaps singly controlled on those qubits, then the MCXs
    again to uncompute.  With ``require_improvement`` a run is rewritten only if
    the whole circuit's greedy depth does not grow.
    """
    if extra_ancillae < 0:
        raise ValueError("extra_ancillae must be non-negative")
    if extra_ancillae == 0:
        return c
    spans = _groups(c.gates, extra_ancillae)
    if not spans:
        return c
    work = list(range(c.num_qubits, c.num_qubits + extra_ancillae))
    gates = list(c.gates)
    current_depth = depth(gates)
    changed = False
    for start, end in reversed(spans):
        candidate = gates[:start] + _rewrite(gates[start:end], work) + gates[end:]
        new_depth = depth(candidate)
        if require_improvement and new_depth > current_depth:
            continue
        gates, current_depth, changed = candidate, new_depth, True
    if not changed:
        return c
    return c.widened(_work_names(c, extra_ancillae)).with_gates(gates)
