"""Engine error hierarchy with stable machine-readable codes.

Every error carries a ``code`` (``E_*``) so the CLI, the HTTP service, and
tests can assert on failures without parsing prose.
"""


class EngineError(Exception):
    """Base class for all engine failures."""

    code = "E_ENGINE"


class IOFailure(EngineError):
    code = "E_IO"


class SchemaError(EngineError):
    """Missing column, malformed row, or non-numeric cell."""

    code = "E_SCHEMA"


class RangeError(EngineError):
    """Numeric value outside its documented bounds."""

    code = "E_RANGE"


class IntervalError(EngineError):
    """Segment end precedes start, or a negative time."""

    code = "E_INTERVAL"


class LabelError(EngineError):
    """Identifier outside the relevant label space."""

    code = "E_LABEL"


class MappingError(EngineError):
    """Malformed mapping file: duplicate keys, unknown labels."""

    code = "E_MAPPING"


class QueryError(EngineError):
    """Unknown query name."""

    code = "E_QUERY"


class ParamError(EngineError):
    """Missing or invalid query/CLI parameter."""

    code = "E_PARAM"
