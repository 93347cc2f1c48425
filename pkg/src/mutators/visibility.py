"""Visible local variables at each instruction of a method.

A forward gen/kill analysis over the instruction-level control-flow graph:
a slot is generated at its scope-start index and killed at its scope-end
index; values merge by union. The fixpoint is then restricted to the
declared scope interval.
"""

from collections import namedtuple
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from core.instructions import branch_targets, falls_through
from core.program import LocalSlot, MethodDef

Analysis = namedtuple("Analysis", ["init", "merge", "transfer"])


def union(sets) -> FrozenSet[int]:
    out = set()
    for s in sets:
        out.update(s)
    return frozenset(out)


def successors(method: MethodDef, i: int) -> List[int]:
    ins = method.body[i]
    succs = []
    if falls_through(ins) and i + 1 < len(method.body):
        succs.append(i + 1)
    for label in branch_targets(ins):
        target = method.label_index.get(label)
        if target is not None:
            succs.append(target)
    return succs


def predecessors(method: MethodDef) -> Dict[int, List[int]]:
    preds: Dict[int, List[int]] = {i: [] for i in range(len(method.body))}
    for i in range(len(method.body)):
        for s in successors(method, i):
            preds[s].append(i)
    return preds


def reachable_without(method: MethodDef, blocked: int) -> FrozenSet[int]:
    """Indices reachable from the method entry on paths that never execute `blocked`."""
    seen = set()
    worklist = [0] if method.body and blocked != 0 else []
    while worklist:
        node = worklist.pop()
        if node in seen:
            continue
        seen.add(node)
        worklist.extend(s for s in successors(method, node) if s != blocked)
    return frozenset(seen)


def df_worklist(method: MethodDef, analysis: Analysis) -> Tuple[Dict[int, FrozenSet[int]], Dict[int, FrozenSet[int]]]:
    """Forward worklist solver; only nodes reachable from index 0 get values."""
    preds = predecessors(method)
    in_: Dict[int, FrozenSet[int]] = {}
    out: Dict[int, FrozenSet[int]] = {}
    if not method.body:
        return in_, out
    worklist = [0]
    while worklist:
        node = worklist.pop(0)
        reached = [out[p] for p in preds[node] if p in out]
        inval = analysis.merge(reached) if node != 0 else analysis.merge(reached + [analysis.init])
        in_[node] = inval
        outval = analysis.transfer(node, inval)
        if out.get(node) != outval:
            out[node] = outval
            worklist.extend(successors(method, node))
    return in_, out


@dataclass(frozen=True)
class VisibleLocals:
    method: MethodDef
    visible: Tuple[FrozenSet[int], ...]

    def at(self, index: int) -> Tuple[LocalSlot, ...]:
        return tuple(self.method.locals[s] for s in sorted(self.visible[index]))

    def is_visible(self, slot: int, index: int) -> bool:
        return slot in self.visible[index]


def visible_locals(method: MethodDef) -> VisibleLocals:
    ranges = {slot.index: method.scope_range(slot) for slot in method.locals}
    gen: Dict[int, set] = {}
    kill: Dict[int, set] = {}
    for s, (start, end) in ranges.items():
        gen.setdefault(start, set()).add(s)
        kill.setdefault(end, set()).add(s)

    def transfer(node: int, inval: FrozenSet[int]) -> FrozenSet[int]:
        return frozenset((inval | gen.get(node, set())) - kill.get(node, set()))

    analysis = Analysis(init=frozenset(), merge=union, transfer=transfer)
    _, out = df_worklist(method, analysis)
    visible: List[FrozenSet[int]] = []
    for i in range(len(method.body)):
        in_interval = frozenset(s for s, (start, end) in ranges.items() if start <= i < end)
        flow: Optional[FrozenSet[int]] = out.get(i)
        visible.append(in_interval if flow is None else flow & in_interval)
    return VisibleLocals(method, tuple(visible))
