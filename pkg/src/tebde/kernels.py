"""Backend selection for the numeric kernels.

The compiled extension is preferred when importable; the pure-NumPy module
is the fallback.  Set ``TEBDE_PURE_PYTHON=1`` to force the fallback (useful
for debugging and for benchmarking one backend against the other; see
``benchmarks/bench_kernels.py``).
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _kernels_py


def load_backend(force_pure: bool = False) -> tuple[ModuleType, str]:
    """Return (kernel module, backend name)."""
    if not force_pure:
        try:
            from . import _kernels_cy

            return _kernels_cy, "compiled"
        except ImportError:
            pass
    return _kernels_py, "python"


_FORCE_PURE = os.environ.get("TEBDE_PURE_PYTHON", "").strip().lower() in {
    "1",
    "true",
    "yes",
}

_impl, BACKEND = load_backend(force_pure=_FORCE_PURE)

tsallis = _impl.tsallis
shannon = _impl.shannon
kl = _impl.kl
jsd = _impl.jsd
lidstone_probs = _impl.lidstone_probs
cross_entropy = _impl.cross_entropy
compositions = _impl.compositions
sampling_law = _impl.sampling_law
enum_expected_tsallis = _impl.enum_expected_tsallis
