"""Exception hierarchy shared by all modules."""


class SpeedupLearningError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(SpeedupLearningError):
    """An argument is non-finite or outside its documented range."""


class OracleIntegrityError(SpeedupLearningError):
    """The teacher returned a solution that does not replay to a goal state."""


class ReplayError(SpeedupLearningError):
    """An operator in a solution sequence was inapplicable mid-replay.

    ``step`` is the zero-based index of the failing solution element.
    """

    def __init__(self, message, step):
        super().__init__(f"{message} (step {step})")
        self.step = step


class ParseError(SpeedupLearningError):
    """Token sequence is not in the grammar's language.

    ``position`` is the index of the first token that could not be consumed.
    """

    def __init__(self, message, position):
        super().__init__(f"{message} (position {position})")
        self.position = position


class AmbiguityError(SpeedupLearningError):
    """Two distinct parses were found; the grammar violates its contract."""


class IncompatibleTreesError(SpeedupLearningError):
    """Trees passed to a common-cap computation have different root labels."""


class EnumerationLimitError(SpeedupLearningError):
    """Exhaustive sentence enumeration exceeded its explosion guard."""


class InapplicableOperatorError(SpeedupLearningError):
    """A rewrite operator's pattern does not match the target subexpression."""


class LocationError(SpeedupLearningError):
    """A child-index path does not resolve to a node of the expression."""


class MoveError(SpeedupLearningError):
    """A sliding-tile move is not applicable in the given board."""


class TableCorruptionError(SpeedupLearningError):
    """A stored macro failed to apply; the macro table violates its invariant."""


class MalformedSolutionError(SpeedupLearningError):
    """A training solution cannot be split into macros for the feature ordering."""


class ConsistencyError(SpeedupLearningError):
    """A learned solver failed to reproduce its own training sample."""
