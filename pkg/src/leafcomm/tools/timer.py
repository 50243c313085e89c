from time import perf_counter_ns


class Timer:
    """Context manager measuring wall time in milliseconds."""

    __slots__ = ("_start", "elapsed_ms")
    _start: int
    elapsed_ms: float

    def __init__(self):
        self._start = 0
        self.elapsed_ms = 0.0

    def __enter__(self) -> "Timer":
        self._start = perf_counter_ns()
        return self

    def __exit__(self, *exc) -> None:
        self.elapsed_ms = (perf_counter_ns() - self._start) / 1e6
