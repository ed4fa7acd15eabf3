"""Backend selection for the hot loops.

The compiled extension is used when it was built; otherwise, or when
``LEXRERANK_PURE_PYTHON`` is set, the pure-Python twin is used. Both take
the same arguments and return identical values.
"""

import os

import numpy as np

from . import _kernels_py

if os.environ.get("LEXRERANK_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"
    else:
        BACKEND = "cython"


def get_backend(name=None):
    """Return the kernel module for ``name`` ("cython", "python") or the active one."""
    if name is None:
        return _impl
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown kernel backend {name!r}")


def estep(src_len, tgt_len, link_prob, null_prob, tension, diagonal, backend=None):
    """Run one E-step over an encoded corpus.

    Returns ``(posteriors, loglik, empirical_h, model_h)``.
    """
    impl = get_backend(backend)
    src_len = np.ascontiguousarray(src_len, dtype=np.intc)
    tgt_len = np.ascontiguousarray(tgt_len, dtype=np.intc)
    link_prob = np.ascontiguousarray(link_prob, dtype=np.float64)
    post = np.empty_like(link_prob)
    ll, emp, mod = impl.estep(src_len, tgt_len, link_prob, float(null_prob),
                              float(tension), bool(diagonal), post)
    return post, ll, emp, mod


def levenshtein(a, b, backend=None):
    """Edit distance between two token sequences (any hashable tokens)."""
    ids = {}
    ia = np.array([ids.setdefault(t, len(ids)) for t in a], dtype=np.int_)
    ib = np.array([ids.setdefault(t, len(ids)) for t in b], dtype=np.int_)
    return get_backend(backend).levenshtein(ia, ib)
