from __future__ import annotations

from typing import TYPE_CHECKING

from ..core.exception import CapacityError
from ..core.formula import Formula, Leaf, combine_tables, count_satisfying
from ..protocols.tree import evaluate_protocol
from ..tools.bits import all_inputs
from ..tools.logger import INFO1, logger
from ..tools.timer import Timer

if TYPE_CHECKING:
    from .device import LeafDevice

BRUTEFORCE_MAX_VARS = 28
PROTOCOL_RUN_MAX_VARS = 20


def count_sat_bruteforce(d: LeafDevice | Formula) -> int:
    """Satisfying assignments by enumerating all 2^n inputs through the leaf gates."""
    f = d if isinstance(d, Formula) else d.formula
    if f.num_vars > BRUTEFORCE_MAX_VARS:
        raise CapacityError(
            f"Brute force supports up to {BRUTEFORCE_MAX_VARS} variables", size=f.num_vars
        )
    with Timer() as timer:
        count = count_satisfying(f)
    logger.log(INFO1, f"Brute force count over n={f.num_vars}: {count} ({timer.elapsed_ms:.1f} ms)")
    return count


def count_sat_protocols(d: LeafDevice) -> int:
    """Satisfying assignments with every leaf evaluated by running its deterministic protocol."""
    if d.n > PROTOCOL_RUN_MAX_VARS:
        raise CapacityError(
            f"Protocol runs support up to {PROTOCOL_RUN_MAX_VARS} variables", size=d.n
        )
    xs = all_inputs(d.n)
    protocols = d.two_party_protocols()
    values = {}

    def leaf_value(node: Leaf):
        if node.gate_id not in values:
            values[node.gate_id] = evaluate_protocol(protocols[node.gate_id], xs)
        return values[node.gate_id]

    return int(combine_tables(d.formula.root, leaf_value).sum())
