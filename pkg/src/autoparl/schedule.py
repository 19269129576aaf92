"""Circular modification schedule.

At iteration ``k`` (1..n-1) modifier ``i`` edits the chain that started with
generator ``(i - k) mod n``, residue 0 standing for delegate ``n``.
"""

from __future__ import annotations

from autoparl.errors import InvalidParliamentError

Assignment = tuple[int, int]  # (modifier, chain origin)


def chain_for(modifier: int, iteration: int, n: int) -> int:
    return (modifier - iteration - 1) % n + 1


def plan_schedule(n: int) -> tuple[tuple[Assignment, ...], ...]:
    """Iterations 1..n-1, each a tuple of ``(modifier, origin)`` sorted by modifier."""
    if n < 1:
        raise InvalidParliamentError(f"a parliament needs at least one delegate, got n={n}")
    return tuple(
        tuple((i, chain_for(i, k, n)) for i in range(1, n + 1)) for k in range(1, n)
    )


def format_schedule(n: int) -> str:
    plan = plan_schedule(n)
    if not plan:
        return "no modification iterations\n"
    lines = []
    for k, assignments in enumerate(plan, 1):
        pairs = ", ".join(f"{i}->{j}" for i, j in assignments)
        lines.append(f"iteration {k}: {pairs}")
    return "\n".join(lines) + "\n"
