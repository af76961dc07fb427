"""
Error types for ockhamlab
Each error carries the CLI exit code it maps to.
"""


class OckhamLabError(Exception):
    """Base error"""
    exit_code = 1


class MalformedInputError(OckhamLabError, ValueError):
    """Ill-formed data or a violated precondition"""
    exit_code = 2


class ConsistencyError(OckhamLabError):
    """Two independent computations disagree; always an implementation bug"""
    exit_code = 3


class ResourceCapError(OckhamLabError):
    """A configured size cap would be exceeded"""
    exit_code = 4


def check_cap(what: str, value: int, cap: int) -> None:
    """Raise ResourceCapError when value exceeds cap"""
    if value > cap:
        raise ResourceCapError(f"{what} is {value}, above the cap of {cap} (see OCKHAMLAB_CAPS)")
