"""Exception hierarchy.

Each exception carries a short machine-readable ``code`` that the command
line reports on standard error as ``code: <code>``.
"""


class WillmoreError(ValueError):
    code = "error"


class NotOnSphere(WillmoreError):
    code = "not_on_sphere"


class NonRegular(WillmoreError):
    code = "non_regular"


class NotUnitSpeed(WillmoreError):
    code = "not_unit_speed"


class DegenerateFrame(WillmoreError):
    code = "degenerate_frame"


class DegenerateMetric(WillmoreError):
    code = "degenerate_metric"


class NotFlatConformal(WillmoreError):
    code = "not_flat_conformal"


class SingularPinch(WillmoreError):
    code = "singular_pinch"


class FrameDrift(WillmoreError):
    code = "frame_drift"


class NoConvergence(WillmoreError):
    code = "no_convergence"


class NotClosed(WillmoreError):
    code = "not_closed"


class BadParams(WillmoreError):
    code = "bad_params"


class OutOfRange(WillmoreError):
    code = "out_of_range"


class FormatError(WillmoreError):
    code = "format_error"
