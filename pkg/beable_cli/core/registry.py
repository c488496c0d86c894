"""
Experiment registry.

Experiments register themselves with the ``@experiment`` decorator; the CLI
builds one command per registered entry.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Dict, Iterator, List, Optional

from beable_sdk.exceptions import ValidationError

if TYPE_CHECKING:
    from beable_cli.core.config import RunConfig
    from beable_cli.core.runner import RunContext

logger = logging.getLogger(__name__)

ExperimentFn = Callable[["RunConfig", "RunContext"], None]


@dataclass(frozen=True)
class Experiment:
    """A named, runnable experiment."""

    name: str
    fn: ExperimentFn
    help: str = ""

    def __call__(self, config: "RunConfig", context: "RunContext") -> None:
        self.fn(config, context)


class ExperimentRegistry:
    """Registry of experiments keyed by subcommand name."""

    def __init__(self) -> None:
        self._experiments: Dict[str, Experiment] = {}

    def register(self, name: str, fn: ExperimentFn, help: Optional[str] = None) -> Experiment:
        if name in self._experiments:
            raise ValidationError(f"experiment '{name}' is already registered")
        entry = Experiment(name=name, fn=fn, help=help or (fn.__doc__ or "").strip())
        self._experiments[name] = entry
        logger.debug(f"Registered experiment: {name}")
        return entry

    def get(self, name: str) -> Experiment:
        try:
            return self._experiments[name]
        except KeyError:
            raise ValidationError(
                f"unknown experiment '{name}'",
                details={"known": self.names()},
            ) from None

    def names(self) -> List[str]:
        return list(self._experiments)

    def __contains__(self, name: object) -> bool:
        return name in self._experiments

    def __iter__(self) -> Iterator[Experiment]:
        return iter(self._experiments.values())

    def __len__(self) -> int:
        return len(self._experiments)


_registry = ExperimentRegistry()


def get_registry() -> ExperimentRegistry:
    """Get the global experiment registry."""
    return _registry


def experiment(name: str, help: Optional[str] = None) -> Callable[[ExperimentFn], ExperimentFn]:
    """Decorator registering ``fn(config, context)`` as experiment ``name``.

    Usage:
        @experiment("spectrum", help="Single-particle spectrum")
        def spectrum(config, context): ...
    """

    def _wrap(fn: ExperimentFn) -> ExperimentFn:
        _registry.register(name, fn, help)
        return fn

    return _wrap
