from functools import lru_cache
from importlib.util import find_spec


@lru_cache(maxsize=None)
def check_dependency(module_name: str) -> bool:
    """Check whether an optional dependency can be imported.

    Args:
        module_name (str): Top level module name, e.g. ``"loguru"``.

    Returns:
        bool: True if the module is installed.
    """
    return find_spec(module_name) is not None
