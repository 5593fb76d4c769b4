from functools import reduce
from math import gcd
from typing import Dict
from typing import Hashable
from typing import Iterable
from typing import List
from typing import Optional
from typing import Sequence


def lcm(numbers: Iterable[int]) -> int:
    """Least common multiple, 1 for an empty sequence"""
    return reduce(lambda a, b: a * b // gcd(a, b), numbers, 1)


def bipartite_matching(left: Sequence[Hashable], adjacency: Dict[Hashable, List[int]], right_count: int) -> int:
    """Size of a maximum matching by augmenting paths (Kuhn)

    `adjacency[l]` lists the right-hand indices `l` may be matched to.
    """
    owner: List[Optional[Hashable]] = [None] * right_count

    def augment(node: Hashable, seen: List[bool]) -> bool:
        for r in adjacency.get(node, []):
            if seen[r]:
                continue
            seen[r] = True
            if owner[r] is None or augment(owner[r], seen):
                owner[r] = node
                return True
        return False

    return sum(1 for node in left if augment(node, [False] * right_count))


def state_set_name(states: Iterable[str]) -> str:
    """Name of a set of states, e.g. `{file,main}`"""
    return "{" + ",".join(sorted(states)) + "}"
