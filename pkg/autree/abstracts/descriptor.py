""" Implement this class to plug a horizontal descriptor class
into the generic automaton evaluation
"""
import logging
from abc import ABC
from abc import abstractmethod
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Any
from typing import Callable
from typing import Dict
from typing import FrozenSet
from typing import Type

logger = logging.getLogger("autree")


class ClassTag(Enum):
    """Descriptor classes an automaton can be built over"""

    ARITY = "arity"
    AUTP = "autp"
    AUTA = "auta"
    AUTC = "autc"
    AUTO = "auto"


@dataclass
class EvalStats:
    """Instrumentation counters filled in by evaluation"""

    nodes: int = 0
    steps: int = 0
    search_nodes: int = 0
    filter_evals: int = 0


class DescriptorClass(ABC):
    """Descriptor satisfaction for one class, bound to the automaton holding the
    class-shared machinery (horizontal automaton, atom alphabet, ...)
    """

    def __init__(self, aut: Any):
        self.aut = aut

    @abstractmethod
    def satisfies(self, descriptor: Any, M: Counter, stats: EvalStats) -> bool:
        """True when the annotated multiset M satisfies `descriptor`"""

    @abstractmethod
    def support(self, descriptor: Any) -> FrozenSet[str]:
        """Vertical states the descriptor tests"""

    def size(self, descriptor: Any) -> int:
        """Size of the descriptor, for automaton size accounting"""
        return 1

    def targets(self, M: Counter, stats: EvalStats) -> FrozenSet[str]:
        """States of every rule whose descriptor M satisfies"""
        return frozenset(rule.target for rule in self.aut.rules if self.satisfies(rule.descriptor, M, stats))


_REGISTRY: Dict[ClassTag, Type[DescriptorClass]] = {}


def register_descriptor_class(tag: ClassTag) -> Callable[[Type[DescriptorClass]], Type[DescriptorClass]]:
    def decorator(cls: Type[DescriptorClass]) -> Type[DescriptorClass]:
        _REGISTRY[tag] = cls
        return cls

    return decorator


def descriptor_class_for(tag: ClassTag) -> Type[DescriptorClass]:
    if tag not in _REGISTRY:
        raise KeyError(f"no descriptor class registered for {tag.value}")
    return _REGISTRY[tag]
