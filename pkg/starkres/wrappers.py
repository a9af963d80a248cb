from functools import wraps
from inspect import iscoroutinefunction, signature

from .branchcut import SpectralPoint
from .utils import _normalize_family


def _default_grid(V):
    from .determinant import NystromGrid

    return NystromGrid.for_potential(V)


def _inject_grid(f):
    """ Injects ``NystromGrid.for_potential(V)`` if no grid was passed. The potential must be the first argument """
    sig = signature(f)

    def inject(args, kwargs):
        bound = sig.bind_partial(*args, **kwargs)
        if bound.arguments.get("grid") is None:
            bound.arguments["grid"] = _default_grid(args[0] if args else kwargs["V"])
        return bound.args, bound.kwargs

    @wraps(f)
    def wrapper(*args, **kwargs):
        args, kwargs = inject(args, kwargs)
        return f(*args, **kwargs)

    @wraps(f)
    async def async_wrapper(*args, **kwargs):
        args, kwargs = inject(args, kwargs)
        return await f(*args, **kwargs)

    if iscoroutinefunction(f):
        return async_wrapper
    return wrapper


def _normalize_family_arg(f):
    """ Maps ``family`` given as "+", "plus", 1, ... to ±1. Should be passed as a keyword argument """

    @wraps(f)
    def wrapper(*args, **kwargs):
        if "family" in kwargs:
            kwargs["family"] = _normalize_family(kwargs["family"])
        return f(*args, **kwargs)

    @wraps(f)
    async def async_wrapper(*args, **kwargs):
        if "family" in kwargs:
            kwargs["family"] = _normalize_family(kwargs["family"])
        return await f(*args, **kwargs)

    if iscoroutinefunction(f):
        return async_wrapper
    return wrapper


def _spectral_point_arg(position=0):
    """
    Coerces the positional argument at ``position`` to a ``SpectralPoint``

    Accepts both ``@_spectral_point_arg`` and ``@_spectral_point_arg(1)``.
    """

    def outer_wrapper(f):
        def coerce(args):
            args = list(args)
            if len(args) > position and not isinstance(args[position], SpectralPoint):
                args[position] = SpectralPoint(args[position])
            return args

        @wraps(f)
        def wrapper(*args, **kwargs):
            return f(*coerce(args), **kwargs)

        @wraps(f)
        async def async_wrapper(*args, **kwargs):
            return await f(*coerce(args), **kwargs)

        if iscoroutinefunction(f):
            return async_wrapper
        return wrapper

    # Makes the decorator usable without arguments
    if callable(position):
        f, position = position, 0
        return outer_wrapper(f)
    return outer_wrapper
