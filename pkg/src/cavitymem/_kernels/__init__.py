"""Hot-kernel backend selection: compiled extension if available, NumPy otherwise."""

from . import two_exc_np

try:
    from . import _two_exc as _impl
    BACKEND = "cython"
except ImportError:  # extension not built; fall back to NumPy
    _impl = two_exc_np
    BACKEND = "numpy"

make_two_exc_rhs = _impl.make_rhs
make_two_exc_rhs_numpy = two_exc_np.make_rhs

__all__ = ["BACKEND", "make_two_exc_rhs", "make_two_exc_rhs_numpy"]
