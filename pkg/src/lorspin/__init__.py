"""Spinor representation of Lorentzian surfaces in R^{2,2}."""
import os as _os

_threads = _os.environ.get("LORSPIN_THREADS")
if _threads and _threads.isdigit() and int(_threads) > 0:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

__version__ = "0.1.0"
