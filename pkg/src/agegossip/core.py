"""Version-age state and the primitive transitions shared by every gossip scheme.

The network state is a vector of per-node version ages: how many versions each
node lags behind the source. Three events can change it:

  * the source publishes a new version    -> every age goes up by one
  * the source pushes its version to i    -> node i's age resets to zero
  * node i gossips its version to node j  -> node j keeps the fresher version

All transitions are pure functions on immutable values, so they are safe to
use from any thread. Node ids are 1-based; the source itself is not part of
the vector.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class AgeVector:
    """Per-node version ages, indexed by node id 1..n.

    Invariants: every entry is a non-negative integer and the length is the
    network size, which never changes during a run.
    """

    ages: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "ages", tuple(int(a) for a in self.ages))
        if any(a < 0 for a in self.ages):
            raise ValueError(f"ages must be non-negative, got {self.ages}")

    def __len__(self) -> int:
        return len(self.ages)

    def __getitem__(self, node: int) -> int:
        """Age of the given node (1-based id)."""
        self._check_node(node)
        return self.ages[node - 1]

    def _check_node(self, node: int) -> None:
        if not isinstance(node, int) or isinstance(node, bool):
            raise ValueError(f"node id must be an integer, got {node!r}")
        if not 1 <= node <= len(self.ages):
            raise ValueError(
                f"node id {node} out of range 1..{len(self.ages)}"
            )


@dataclass(frozen=True)
class MinAgeSet:
    """The minimum age in a vector together with every node attaining it."""

    min_age: int
    members: frozenset[int]

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("min-age set must have at least one member")


def source_self_update(ages: AgeVector) -> AgeVector:
    """Source publishes a new version: every node falls one version behind."""
    return AgeVector(tuple(a + 1 for a in ages.ages))


def source_update_node(ages: AgeVector, node: int) -> AgeVector:
    """Source delivers its current version to `node`, resetting its age to 0."""
    ages._check_node(node)
    updated = list(ages.ages)
    updated[node - 1] = 0
    return AgeVector(tuple(updated))


def gossip_merge(ages: AgeVector, sender: int, receiver: int) -> AgeVector:
    """Receiver keeps the fresher of its own and the sender's version.

    Self-gossip is rejected rather than treated as a no-op: a scheduler that
    generates it is buggy, and silently ignoring it would hide that.
    """
    ages._check_node(sender)
    ages._check_node(receiver)
    if sender == receiver:
        raise ValueError(f"self-gossip rejected (node {sender})")
    merged = min(ages.ages[sender - 1], ages.ages[receiver - 1])
    updated = list(ages.ages)
    updated[receiver - 1] = merged
    return AgeVector(tuple(updated))


def min_age_set(ages: AgeVector) -> MinAgeSet:
    """Minimum age across the network and the exact set of nodes holding it."""
    if len(ages.ages) == 0:
        raise ValueError("age vector must be non-empty")
    lowest = min(ages.ages)
    members = frozenset(i + 1 for i, a in enumerate(ages.ages) if a == lowest)
    return MinAgeSet(min_age=lowest, members=members)
