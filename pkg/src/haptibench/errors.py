"""Exception hierarchy shared across the toolkit."""


class HaptibenchError(Exception):
    """Base class for all toolkit errors."""


# ---- file ingestion ----

class MalformedRow(HaptibenchError):
    """A recording CSV row could not be parsed or violates a sample invariant."""

    def __init__(self, line, message="malformed row"):
        self.line = line
        super().__init__(f"{message} (data row {line})")


class NonMonotonicTime(HaptibenchError):
    """Timestamps in a recording are not strictly increasing."""

    def __init__(self, line):
        self.line = line
        super().__init__(f"time not strictly increasing at data row {line}")


class EmptyRecording(HaptibenchError):
    """Recording CSV contains no data rows."""


class MalformedLine(HaptibenchError):
    """A pointing-log line is not a valid trial object."""

    def __init__(self, line, message="malformed line"):
        self.line = line
        super().__init__(f"{message} (line {line})")


class InconsistentSuccessFlag(HaptibenchError):
    """Stored success flag disagrees with release position vs target geometry."""

    def __init__(self, line):
        self.line = line
        super().__init__(f"stored success flag inconsistent with geometry (line {line})")


# ---- swipe pipeline ----

class AllSamplesInvalid(HaptibenchError):
    """No sample in the recording passes the contact threshold."""


class NoSwipesFound(HaptibenchError):
    """No monotone-motion segment could be extracted."""


class InsufficientData(HaptibenchError):
    """Not enough accepted swipes/samples for the requested fit."""


class AlreadyCorrected(HaptibenchError):
    """Trend correction applied twice to the same swipe."""


# ---- metrics ----

class NoAcceptedSwipes(HaptibenchError):
    """Friction statistics requested but every swipe was rejected."""


class ParticipantSetMismatch(HaptibenchError):
    """High/low friction statistics come from different participant sets."""


class RidgeNotCrossed(HaptibenchError):
    """Swipe trajectory never reaches the ridge's leading edge."""


class NoActuationDetected(HaptibenchError):
    """No friction response above the noise floor after the ridge crossing."""


class InsufficientCrossings(HaptibenchError):
    """Fewer than two usable ridge crossings for latency aggregation."""


class NonPositiveGeometry(HaptibenchError):
    """Distance or width of a pointing task is not positive."""


class EmptyCondition(HaptibenchError):
    """No trials available for the requested condition."""


class DegenerateDesign(HaptibenchError):
    """Regression design has no spread on the predictor."""


# ---- statistics ----

class InsufficientSamples(HaptibenchError):
    """A statistical test needs at least two observations per sample."""


class ZeroVariance(HaptibenchError):
    """Variance ratio undefined because the denominator sample has no spread."""


class InsufficientGroups(HaptibenchError):
    """One-way ANOVA needs at least two groups."""


class DomainError(HaptibenchError):
    """Special-function argument outside its domain."""


# ---- reporting / simulation ----

class MissingMetric(HaptibenchError):
    """A tablet profile lacks a metric required by the report."""

    def __init__(self, name):
        self.name = name
        super().__init__(f"missing metric: {name}")


class SampleSizeMismatch(HaptibenchError):
    """Raw sample vectors fed to a comparison have inconsistent sizes."""


class InvalidSpec(HaptibenchError):
    """Simulator specification or protocol is not realizable."""
