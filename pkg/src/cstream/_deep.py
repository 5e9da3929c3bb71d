"""Run recursive code on a thread with a large stack and recursion limit."""

import sys
import threading

STACK_BYTES = 1 << 30
RECURSION_LIMIT = 2_000_000

_local = threading.local()
_lock = threading.Lock()  # guards the process-wide stack size and recursion limit
_active = 0
_saved_limit = None


def run_deep(fn, *args, **kwargs):
    """Call ``fn(*args, **kwargs)`` where deep recursion is safe.

    Nested uses run inline on the already-deep thread.  Exceptions are
    re-raised in the caller.  The raised recursion limit is restored once
    the last concurrent deep run finishes.
    """
    global _active, _saved_limit
    if getattr(_local, "deep", False):
        return fn(*args, **kwargs)
    result = {}

    def target():
        _local.deep = True
        try:
            result["value"] = fn(*args, **kwargs)
        except BaseException as err:  # noqa: BLE001 - re-raised below
            result["error"] = err

    with _lock:
        if _active == 0:
            _saved_limit = sys.getrecursionlimit()
            sys.setrecursionlimit(max(_saved_limit, RECURSION_LIMIT))
        _active += 1
        old_size = threading.stack_size(STACK_BYTES)
        try:
            worker = threading.Thread(target=target, name="cstream-deep")
            worker.start()
        finally:
            threading.stack_size(old_size)
    try:
        worker.join()
    finally:
        with _lock:
            _active -= 1
            if _active == 0:
                sys.setrecursionlimit(_saved_limit)
    if "error" in result:
        raise result["error"]
    return result["value"]
