from typing import Any, Optional

import numpy as np


class InvalidInstanceError(ValueError):
    def __init__(self, msg: str = "Instance violates the model invariants.", *args: Any, **kwargs: Any) -> None:
        super().__init__(msg, *args, **kwargs)


class OracleCapacityError(ValueError):
    def __init__(self, msg: str = "instance too large for exact 2D oracle", *args: Any, **kwargs: Any) -> None:
        super().__init__(msg, *args, **kwargs)


class ConvergenceError(RuntimeError):
    def __init__(self, msg: str = "Iterative solver did not converge.",
                 best_iterate: Optional[np.ndarray] = None, *args: Any, **kwargs: Any) -> None:
        super().__init__(msg, *args, **kwargs)
        self.best_iterate = best_iterate


class SplitLineError(RuntimeError):
    def __init__(self, msg: str = "split lines do not meet in working domain", *args: Any, **kwargs: Any) -> None:
        super().__init__(msg, *args, **kwargs)


class InvariantViolationError(AssertionError):
    def __init__(self, msg: str = "Split line intersection is not a single connected piece.",
                 *args: Any, **kwargs: Any) -> None:
        super().__init__(msg, *args, **kwargs)


class UnknownSelectorError(KeyError):
    def __init__(self, msg: str = "Unknown selector.", *args: Any, **kwargs: Any) -> None:
        super().__init__(msg, *args, **kwargs)

    def __str__(self) -> str:
        return str(self.args[0])


class InstanceParseError(ValueError):
    def __init__(self, msg: str = "Malformed instance document.", line: Optional[int] = None,
                 column: Optional[int] = None, *args: Any, **kwargs: Any) -> None:
        position = "" if line is None else " (line {}, column {})".format(line, column)
        super().__init__(msg + position, *args, **kwargs)
        self.line = line
        self.column = column
