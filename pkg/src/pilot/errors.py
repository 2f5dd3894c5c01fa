"""Exception taxonomy shared across the orchestrator."""


class PilotError(Exception):
    """Base class for every orchestrator-raised error."""


# -- structured-completion gateway -------------------------------------------

class SchemaViolation(PilotError):
    """Provider output failed validation for the requested schema."""


class ProviderUnavailable(PilotError):
    """External completion endpoint could not be reached."""


class NoRule(PilotError):
    """Scripted provider has no rule matching the input."""


# -- embeddings ---------------------------------------------------------------

class DimensionMismatch(PilotError):
    """Vectors of different dimension were combined."""


class DegenerateVector(PilotError):
    """A zero (degenerate) vector was used where a direction is required."""


# -- persistence --------------------------------------------------------------

class PersistenceFailure(PilotError):
    """A durable write could not be completed."""


class CorruptStore(PilotError):
    """Memory store file failed its integrity checks; refusing to start."""


class CorruptTable(PilotError):
    """Process table file failed its integrity checks; refusing to start."""


# -- social agent -------------------------------------------------------------

class NoActiveTask(PilotError):
    """An action required an existing task state but none is active."""


class NoMatchingDetail(PilotError):
    """DELETE found no stored detail unit overlapping the requested one."""


# -- physical agent / sensor-tool manager --------------------------------------

class UnknownSkill(PilotError):
    """Referenced skill name is not present in the scanned inventory."""


class UnknownSensor(PilotError):
    """Sensor name is outside the canonical sensor namespace."""


class AlreadyBound(PilotError):
    """BIND targeted a sensor that already has a live binding."""


class NotBound(PilotError):
    """UPDATE/UNBIND targeted a sensor with no binding."""


class SpawnFailure(PilotError):
    """A sensor worker could not be started."""


class RobotUnreachable(PilotError):
    """The robot endpoint rejected or never received a request."""


# -- benchmark harness ----------------------------------------------------------

class InsufficientDiversity(PilotError):
    """Template bank exhausted before the requested dataset size was reached."""
