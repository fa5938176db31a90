from functools import wraps
from time import time
from typing import Any, Callable, Tuple

import toolz as fp
from toolz import curry

from dpfacility.types import LogType


@curry
def log_running_time(fn: Callable[..., Tuple[Any, LogType]], fn_name: str) -> Callable[..., Tuple[Any, LogType]]:
    """
    Decorates an operation returning (result, log) so that the log gets a `running_time`
    entry under `fn_name`.
    """
    @wraps(fn)
    def timed_fn(*args: Any, **kwargs: Any) -> Tuple[Any, LogType]:
        t0 = time()
        result, log = fn(*args, **kwargs)
        return result, fp.assoc_in(log, [fn_name, 'running_time'], "%2.3f s" % (time() - t0))

    return timed_fn
