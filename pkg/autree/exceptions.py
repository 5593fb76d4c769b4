# pylint: disable=C0114,C0115
from typing import Dict
from typing import Optional
from typing import Union


class AutreeError(Exception):
    """Base class of every error raised by autree"""

    def __init__(self, error: str):
        self.meta_info: Dict[str, Union[str, float]] = {"error": error}
        super().__init__(error)

    def __reduce__(self):
        return (self.__class__, (str(self),))


class TreeFormatError(AutreeError):
    def __init__(self, reason: str, kind: Optional[str] = None):
        error = f"Unsupported tree document: {reason}"
        self.reason = reason
        self.kind = kind
        super().__init__(error)
        self.meta_info["reason"] = reason
        if kind is not None:
            self.meta_info["kind"] = kind

    def __reduce__(self):
        return (self.__class__, (self.reason, self.kind))


class SchemaError(AutreeError):
    def __init__(self, reason: str, position: Optional[int] = None):
        error = reason if position is None else f"{reason} (at offset {position})"
        self.reason = reason
        self.position = position
        super().__init__(error)
        self.meta_info["reason"] = reason
        if position is not None:
            self.meta_info["position"] = position

    def __reduce__(self):
        return (self.__class__, (self.reason, self.position))


class ResourceGuardExceeded(AutreeError):
    def __init__(self, resource: str, limit: int, actual: int):
        error = f"Resource guard exceeded for {resource}: {actual} > allowed {limit}"
        self.resource = resource
        self.limit = limit
        self.actual = actual
        super().__init__(error)
        self.meta_info.update({"resource": resource, "limit": limit, "actual": actual})

    def __reduce__(self):
        return (self.__class__, (self.resource, self.limit, self.actual))


class BudgetExceeded(AutreeError):
    def __init__(self, what: str, budget: int):
        error = f"Budget of {budget} exhausted while {what}"
        self.what = what
        self.budget = budget
        super().__init__(error)
        self.meta_info.update({"what": what, "budget": budget})

    def __reduce__(self):
        return (self.__class__, (self.what, self.budget))


class PreconditionError(AutreeError):
    """An operation was called on an automaton outside its domain"""


class NotConfluentError(PreconditionError):
    def __init__(self, report):
        error = f"Horizontal automaton is not provably confluent: {report}"
        self.report = report
        super().__init__(error)
        self.meta_info["report"] = str(report)

    def __reduce__(self):
        return (self.__class__, (self.report,))


class ReservedSymbolError(AutreeError):
    def __init__(self, symbol: str):
        error = f"Function symbol {symbol!r} is all digits; digit labels are reserved for child positions"
        self.symbol = symbol
        super().__init__(error)
        self.meta_info["symbol"] = symbol

    def __reduce__(self):
        return (self.__class__, (self.symbol,))
