import logging
from threading import Lock
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, ValidationError

from ..utils.error_handler import KPolyError

logger = logging.getLogger(__name__)


class Tolerances(BaseModel):
    """Numerical tolerances shared by every module.

    Attributes:
        absolute: Absolute tolerance for float comparisons.
        relative: Relative tolerance for float comparisons.
        edge_match: Relative tolerance when matching glued edge lengths.
        alexandrov_slack: Slack added to 2*pi in the vertex condition.
        gauss_bonnet: Bound on the discrete Gauss-Bonnet residual.
        metric: Slack allowed in the symmetry and triangle-inequality checks of a distance matrix.
        small_side: Side length (in units of 1/sqrt|kappa|) below which half-angle formulas are used.
        degenerate: Minimal triangle-inequality gap; closer triples are rejected as degenerate.
    """

    model_config = ConfigDict(frozen=True)

    absolute: float = 1e-10
    relative: float = 1e-8
    edge_match: float = 1e-9
    alexandrov_slack: float = 1e-9
    gauss_bonnet: float = 1e-8
    metric: float = 1e-9
    small_side: float = 1e-4
    degenerate: float = 1e-12


class ConfigManager:
    """Singleton holding the active tolerance record.

    Runs are fully described by their command line, so there is no file or
    environment layer.
    """

    _instance: Optional['ConfigManager'] = None
    _lock = Lock()
    _initialized: bool = False

    def __new__(cls) -> 'ConfigManager':
        with cls._lock:
            if cls._instance is None:
                cls._instance = super().__new__(cls)
                cls._instance._initialized = False
            return cls._instance

    def __init__(self) -> None:
        if self._initialized:
            return
        self.tolerances = Tolerances()
        self._initialized = True

    @classmethod
    def reset(cls) -> None:
        """Forget the shared instance so the next call starts from defaults."""
        with cls._lock:
            cls._instance = None

    def configure(self, **overrides: Any) -> Tolerances:
        """Replace selected tolerance fields.

        Args:
            **overrides: Field names of `Tolerances` with their new values.

        Returns:
            Tolerances: The new active record.

        Raises:
            KPolyError: If a field name is unknown or a value is not a float.
        """
        unknown = set(overrides) - set(Tolerances.model_fields)
        if unknown:
            raise KPolyError(
                code=104,
                message=f"Unknown tolerance field(s): {', '.join(sorted(unknown))}",
            )
        try:
            updated = Tolerances(**{**self.tolerances.model_dump(), **overrides})
        except ValidationError as e:
            raise KPolyError(code=104, message='Invalid tolerance value', original_error=e)
        with self._lock:
            self.tolerances = updated
        logger.debug(f'Active tolerances: {updated}')
        return updated


def get_tolerances() -> Tolerances:
    """Return the active tolerance record."""
    return ConfigManager().tolerances
