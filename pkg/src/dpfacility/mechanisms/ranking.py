from typing import Iterable, List, NamedTuple, Tuple

RankKeyType = Tuple[float, int]


class RankSelector(NamedTuple):
    """
    Selects the element of rank floor((n + 1) / 2) (1-indexed) out of n values ordered by
    (value, id), so that equal values are resolved by agent id ascending.
    """
    n: int

    @property
    def rank(self) -> int:
        return (self.n + 1) // 2

    def select(self, keys: List[RankKeyType]) -> RankKeyType:
        return sorted(keys)[self.rank - 1]


def median_rank(values: Iterable[Tuple[float, int]]) -> RankKeyType:
    """
    The (value, id) pair at median rank.

    Parameters
    ----------
    values : iterable of (float, int)
        Values tagged with the id of the agent they belong to.

    Returns
    ----------
    median : (float, int)
        The element of rank floor((n + 1) / 2) in (value, id) order.
    """
    keys = [(float(value), int(agent_id)) for value, agent_id in values]
    if not keys:
        raise ValueError("median_rank needs at least one value")
    return RankSelector(n=len(keys)).select(keys)
