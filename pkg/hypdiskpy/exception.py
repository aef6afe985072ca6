from enum import Enum
from typing import Optional


class HypDiskError(Exception):
    """
    base class for all hypdisk errors
    """

    pass


class HypDiskParseError(HypDiskError):
    def __init__(self, msg: str = "", position: Optional[int] = None):
        self.msg = msg
        self.position = position
        if position is not None:
            super().__init__(f"parse error at position {position}: {msg}")
        else:
            super().__init__(f"parse error: {msg}")


class HypDiskNumericError(HypDiskError):
    """
    base class for failures of the numerics (exit status 2 on the command line)
    """

    pass


class JetErrorType(str, Enum):
    POLE = "pole"
    BRANCH_CUT = "branch_cut"


class HypDiskJetError(HypDiskNumericError):
    def __init__(self, error_type: JetErrorType, value: complex = 0j, op: str = ""):
        self.error_type = error_type
        self.value = value
        self.op = op
        super().__init__(f"jet error: {error_type.value}, op: {op}, value: {value!r}")


class HypDiskEvaluationError(HypDiskNumericError):
    def __init__(self, msg: str = "", z: Optional[complex] = None):
        self.msg = msg
        self.z = z
        if z is not None:
            super().__init__(f"evaluation error at z={z!r}: {msg}")
        else:
            super().__init__(f"evaluation error: {msg}")


class HypDiskQuadratureError(HypDiskNumericError):
    def __init__(self, msg: str = "", z: Optional[complex] = None):
        self.msg = msg
        self.z = z
        super().__init__(f"quadrature did not converge at z={z!r}: {msg}")


class HypDiskZeroDerivativeError(HypDiskNumericError):
    def __init__(self, z: complex, op: str = ""):
        self.z = z
        self.op = op
        super().__init__(f"phi'(z) = 0 at z={z!r}, {op} is undefined")


class HypDiskUndefinedError(HypDiskNumericError):
    def __init__(self, msg: str = "", z: Optional[complex] = None):
        self.msg = msg
        self.z = z
        super().__init__(f"{msg} at z={z!r}")


class HypDiskInvalidStartError(HypDiskNumericError):
    def __init__(self, z0: complex, reason: str = ""):
        self.z0 = z0
        self.reason = reason
        super().__init__(f"invalid trajectory start z0={z0!r}: {reason}")


class HypDiskLevelError(HypDiskNumericError):
    def __init__(self, msg: str = "", z: Optional[complex] = None, t: Optional[float] = None):
        self.msg = msg
        self.z = z
        self.t = t
        super().__init__(f"level error, t={t}, z={z!r}: {msg}")


class HypDiskNotCriticalError(HypDiskNumericError):
    def __init__(self, msg: str = "", z: Optional[complex] = None):
        self.msg = msg
        self.z = z
        super().__init__(f"{msg}, z={z!r}")
