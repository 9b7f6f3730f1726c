"""Per-slot atomic operations on integer numpy arrays, usable inside njit code.

numba exposes no CPU atomics, so these intrinsics emit the LLVM atomic
instructions directly. All of them take ``(array, index, ...)`` and operate on
a single aligned element.
"""

import ctypes

from numba import njit, types
from numba.core import cgutils
from numba.extending import intrinsic


def _item_pointer(context, builder, arr_t, arr, idx_t, idx):
    ary = context.make_array(arr_t)(context, builder, arr)
    idx = context.cast(builder, idx, idx_t, types.intp)
    return cgutils.get_item_pointer(context, builder, arr_t, ary, [idx])


def _check(arr):
    if not isinstance(arr, types.Array) or not isinstance(arr.dtype, types.Integer):
        raise TypeError("atomic ops need an integer array")


@intrinsic
def fetch_add(typingctx, arr, idx, val):
    """Atomically add ``val`` to ``arr[idx]``; return the previous value."""
    _check(arr)

    def codegen(context, builder, sig, args):
        arr_t, idx_t, val_t = sig.args
        ptr = _item_pointer(context, builder, arr_t, args[0], idx_t, args[1])
        v = context.cast(builder, args[2], val_t, arr_t.dtype)
        return builder.atomic_rmw("add", ptr, v, "seq_cst")

    return arr.dtype(arr, idx, val), codegen


@intrinsic
def compare_exchange(typingctx, arr, idx, expected, desired):
    """Store ``desired`` if ``arr[idx] == expected``; return the value seen."""
    _check(arr)

    def codegen(context, builder, sig, args):
        arr_t, idx_t, exp_t, des_t = sig.args
        ptr = _item_pointer(context, builder, arr_t, args[0], idx_t, args[1])
        exp = context.cast(builder, args[2], exp_t, arr_t.dtype)
        des = context.cast(builder, args[3], des_t, arr_t.dtype)
        pair = builder.cmpxchg(ptr, exp, des, "acq_rel", "acquire")
        return builder.extract_value(pair, 0)

    return arr.dtype(arr, idx, expected, desired), codegen


def _load(ordering):
    @intrinsic
    def load(typingctx, arr, idx):
        _check(arr)

        def codegen(context, builder, sig, args):
            arr_t, idx_t = sig.args
            ptr = _item_pointer(context, builder, arr_t, args[0], idx_t, args[1])
            align = arr_t.dtype.bitwidth // 8
            return builder.load_atomic(ptr, ordering, align)

        return arr.dtype(arr, idx), codegen

    return load


def _store(ordering):
    @intrinsic
    def store(typingctx, arr, idx, val):
        _check(arr)

        def codegen(context, builder, sig, args):
            arr_t, idx_t, val_t = sig.args
            ptr = _item_pointer(context, builder, arr_t, args[0], idx_t, args[1])
            v = context.cast(builder, args[2], val_t, arr_t.dtype)
            align = arr_t.dtype.bitwidth // 8
            builder.store_atomic(v, ptr, ordering, align)
            return context.get_dummy_value()

        return types.none(arr, idx, val), codegen

    return store


load_relaxed = _load("monotonic")
load_acquire = _load("acquire")
store_relaxed = _store("monotonic")
store_release = _store("release")

_libc = ctypes.CDLL(None)
_sched_yield = _libc.sched_yield
_sched_yield.restype = ctypes.c_int
_sched_yield.argtypes = []


# not cacheable: the ctypes function pointer is a process-local address
@njit(nogil=True)
def cpu_yield():
    _sched_yield()
