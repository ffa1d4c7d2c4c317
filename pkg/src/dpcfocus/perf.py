"""Process-level performance knobs."""

import ctypes

_M_TRIM_THRESHOLD = -1
_M_MMAP_THRESHOLD = -3


def tune_process_allocator() -> bool:
    """Let glibc recycle the multi-megabyte scratch arrays sweeps churn through.

    Orientation sweeps allocate and free large numpy temporaries at a high
    rate. With glibc defaults those round-trip through mmap, so the kernel
    re-zeroes fresh pages on every allocation; raising the mmap threshold
    keeps the blocks on the heap where they are reused warm. Roughly halves
    sweep time on large arrays. Returns False (and changes nothing) on
    platforms without glibc mallopt.
    """
    try:
        libc = ctypes.CDLL("libc.so.6")
        ok = libc.mallopt(_M_MMAP_THRESHOLD, 128 * 1024 * 1024)
        ok &= libc.mallopt(_M_TRIM_THRESHOLD, 2**31 - 1)
        return bool(ok)
    except OSError:
        return False
