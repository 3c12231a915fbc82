from typing import Any

from django.conf import settings


def numerics(name: str, value: Any = None) -> Any:
    """Return ``value`` unless it is None, else the configured default."""
    if value is not None:
        return value
    return settings.KOPPELMAN[name]
