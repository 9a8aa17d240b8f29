"""Small shared utilities."""

from __future__ import annotations

import gc
import sys
import threading
from typing import Any, Callable

_DEEP_STACK_BYTES = 512 * 1024 * 1024
_DEEP_RECURSION_LIMIT = 1_000_000


def run_deep(fn: Callable[..., Any], *args: Any, **kwargs: Any) -> Any:
    """Run ``fn`` on a thread with a large stack and the cycle collector
    paused.

    Evaluation and the analyses recurse as deep as the trace, and build
    millions of small acyclic objects; CPython's default C stack cannot
    hold long list folds, and generation-0 collections dominate trace
    construction.  Anything that walks a user-sized structure goes
    through here.
    """
    result: list[Any] = []
    error: list[BaseException] = []

    def work() -> None:
        old_limit = sys.getrecursionlimit()
        sys.setrecursionlimit(_DEEP_RECURSION_LIMIT)
        gc_was_enabled = gc.isenabled()
        gc.disable()
        try:
            result.append(fn(*args, **kwargs))
        except BaseException as e:  # propagated below
            error.append(e)
        finally:
            sys.setrecursionlimit(old_limit)
            if gc_was_enabled:
                gc.enable()

    old_size = threading.stack_size(_DEEP_STACK_BYTES)
    try:
        thread = threading.Thread(target=work, name="galdep-deep")
        thread.start()
        thread.join()
    finally:
        threading.stack_size(old_size)
    if error:
        raise error[0]
    return result[0]
