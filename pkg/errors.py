"""
Exception hierarchy for the amplituhedron toolkit
Each error carries the process exit code the CLI reports for it
"""


class AmplituhedronError(Exception):
    """Base class for all toolkit errors"""
    exit_code = 1


class DimensionError(AmplituhedronError):
    """Matrix shapes do not fit the requested operation"""


class ContractError(AmplituhedronError):
    """A documented precondition was violated"""


class ParseError(AmplituhedronError):
    """Malformed JSON, rational literal or grid string"""
    exit_code = 2


class PositivityError(AmplituhedronError):
    """A positivity certificate failed"""
    exit_code = 3


class DegeneratePointError(AmplituhedronError):
    """Y is rank deficient, or an infinitesimal sign could not be resolved"""


class WindingUndefined(AmplituhedronError):
    """Y lies on the coarse boundary, so the winding map is not defined"""
    exit_code = 4

    def __init__(self, message: str, windows: list = None):
        super().__init__(message)
        self.windows = windows or []


class NonGenericRay(AmplituhedronError):
    """A replacement twistor vanished for the chosen ray"""

    def __init__(self, message: str, window: tuple = None):
        super().__init__(message)
        self.window = window


class DegenerateConfiguration(AmplituhedronError):
    """The origin lies on the relative boundary of a window simplex"""

    def __init__(self, message: str, window: tuple = None, values: list = None):
        super().__init__(message)
        self.window = window
        self.values = values or []


class FlatnessError(AmplituhedronError):
    """A twistor needed for a side test is zero"""
