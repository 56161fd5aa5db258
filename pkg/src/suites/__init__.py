"""Verification suite registry with auto-discovery."""

import importlib
import pkgutil
from pathlib import Path
from typing import Type

from .base import BaseSuite, SuiteContext

# Registry of all available suites
_suites: dict[str, Type[BaseSuite]] = {}


def register_suite(suite_class: Type[BaseSuite]) -> Type[BaseSuite]:
    """Decorator to register a suite class."""
    _suites[suite_class.suite_name()] = suite_class
    return suite_class


def get_suite(name: str) -> BaseSuite:
    """Get a suite instance by name.

    Raises:
        ValueError: If no suite has that name
    """
    if name not in _suites:
        available = ", ".join(list_available_suites()) or "none"
        raise ValueError(f"No suite named '{name}'. Available suites: {available}")
    return _suites[name]()


def list_available_suites() -> list[str]:
    """Suite names, cheapest first."""
    return sorted(_suites, key=lambda n: (_suites[n].order, n))


def _discover_suites() -> None:
    """Auto-discover and import all suite modules in this package."""
    package_dir = Path(__file__).parent

    for module_info in pkgutil.iter_modules([str(package_dir)]):
        if module_info.name not in ("base", "__init__"):
            importlib.import_module(f".{module_info.name}", __package__)


# Auto-discover suites on import
_discover_suites()

__all__ = [
    "BaseSuite",
    "SuiteContext",
    "get_suite",
    "list_available_suites",
    "register_suite",
]
