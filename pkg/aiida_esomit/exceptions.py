"""Exceptions and warnings raised by aiida-esomit.

Every error carries the CLI exit status and the AiiDA exit code it maps to, so
the command line and the process functions report failures the same way.
"""

EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4


class EsomitError(Exception):
    """Base class of all aiida-esomit errors."""

    exit_status = EXIT_NUMERICAL
    aiida_status = 300
    aiida_label = "ERROR_ESOMIT"

    def as_exit_code(self):
        """Return the AiiDA `ExitCode` describing this error."""
        from aiida.engine import ExitCode

        return ExitCode(self.aiida_status, str(self), invalidates_cache=False)


class ParameterError(EsomitError, ValueError):
    """A parameter or configuration value is missing or out of range."""

    exit_status = EXIT_USAGE
    aiida_status = 201
    aiida_label = "ERROR_INVALID_PARAMETERS"

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class MissingField(ParameterError):
    aiida_status = 202
    aiida_label = "ERROR_MISSING_FIELD"

    def __init__(self, field):
        super().__init__(field, "required field is missing")


class NegativeRate(ParameterError):
    aiida_status = 203
    aiida_label = "ERROR_NEGATIVE_RATE"


class T0OutOfRange(ParameterError):
    aiida_status = 204
    aiida_label = "ERROR_T0_OUT_OF_RANGE"

    def __init__(self, value):
        super().__init__("t0", f"fiber transmission {value!r} is outside [0, 1]")


class NonPositiveFrequency(ParameterError):
    aiida_status = 205
    aiida_label = "ERROR_NON_POSITIVE_FREQUENCY"


class InvalidQuantity(ParameterError):
    aiida_status = 206
    aiida_label = "ERROR_INVALID_QUANTITY"


class UnknownPreset(ParameterError):
    aiida_status = 207
    aiida_label = "ERROR_UNKNOWN_PRESET"

    def __init__(self, name, catalog):
        self.catalog = tuple(catalog)
        super().__init__(
            "preset", f"unknown preset {name!r}; available: {', '.join(self.catalog)}"
        )


class ZeroModeVolume(ParameterError):
    aiida_status = 208
    aiida_label = "ERROR_ZERO_MODE_VOLUME"

    def __init__(self, value):
        super().__init__("V_m", f"mode volume must be positive, got {value!r}")


class InvalidGrid(ParameterError):
    aiida_status = 209
    aiida_label = "ERROR_INVALID_GRID"


class FileAccessError(EsomitError, OSError):
    """A configuration, table or report file could not be read or written."""

    exit_status = EXIT_IO
    aiida_status = 211
    aiida_label = "ERROR_FILE_ACCESS"

    def __init__(self, path, message):
        self.path = str(path)
        super().__init__(f"{path}: {message}")


class MalformedTable(EsomitError, ValueError):
    """An exported table does not have the expected columns or values."""

    exit_status = EXIT_IO
    aiida_status = 212
    aiida_label = "ERROR_MALFORMED_TABLE"


class NumericalError(EsomitError, ArithmeticError):
    """A computation failed to produce a trustworthy number."""


class SingularDenominator(NumericalError):
    aiida_status = 310
    aiida_label = "ERROR_SINGULAR_DENOMINATOR"


class NoConvergence(NumericalError):
    aiida_status = 311
    aiida_label = "ERROR_NO_CONVERGENCE"

    def __init__(self, message, best_residual):
        self.best_residual = best_residual
        super().__init__(f"{message} (best residual {best_residual:.3e})")


class SingularSystem(NumericalError):
    aiida_status = 312
    aiida_label = "ERROR_SINGULAR_SYSTEM"

    def __init__(self, xi, row=None):
        self.xi = xi
        self.row = row
        where = f" at row {row}" if row is not None else ""
        super().__init__(f"fluctuation system is singular for xi={xi!r}{where}")


class ZeroB(NumericalError):
    aiida_status = 313
    aiida_label = "ERROR_ZERO_B"


class ZeroProbe(NumericalError):
    aiida_status = 314
    aiida_label = "ERROR_ZERO_PROBE"


class NonConvergentDerivative(NumericalError):
    aiida_status = 315
    aiida_label = "ERROR_NON_CONVERGENT_DERIVATIVE"


class NoExtremum(NumericalError):
    aiida_status = 316
    aiida_label = "ERROR_NO_EXTREMUM"


class OutOfFigureRangeWarning(UserWarning):
    """A figure-derived relation is evaluated outside its plotted range."""


class ConvergenceWarning(RuntimeWarning):
    """A numerical derivative needed extra step halving."""


class MultistabilityWarning(RuntimeWarning):
    """The mean-field steady state has more than one real root."""
