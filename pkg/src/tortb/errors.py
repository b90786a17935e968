"""Exception types shared across the package."""


class TortbError(Exception):
    """Base class for all domain errors raised by this package."""


class NegativeRelativeSpeed(TortbError):
    """The hazard cause is faster than the ego vehicle; closing speed is undefined."""


class SpeedAboveModelRange(TortbError):
    """Relative speed exceeds the last calibrated speed band."""


class UnidentifiableUnknown(TortbError):
    """The anchor scenario gives its unknown coefficient a zero multiplier."""


class NegativeCoefficient(TortbError):
    """A solved coefficient came out negative; the anchor set is inconsistent."""


class DependencyOrderError(TortbError):
    """An anchor needs a coefficient that only a later anchor solves."""


class SchemaError(TortbError):
    """Input file does not match the expected schema."""


class NonUniformSampling(TortbError):
    """Drive-log timestamps deviate from the declared sample rate."""


class MissingTorMarker(TortbError):
    """No drive-log row carries tor_flag=1."""


class MultipleTorMarkers(TortbError):
    """More than one drive-log row carries tor_flag=1."""


class WindowOutOfRange(TortbError):
    """Requested analysis window extends beyond the log extent."""


class EmptyGroup(TortbError):
    """Descriptive statistics requested for an empty collection."""


class EmptyBatch(TortbError):
    """Batch simulation requested with no episode configs."""
