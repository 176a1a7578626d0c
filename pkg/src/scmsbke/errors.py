class BKEError(Exception):
    """Base class for expansion and flow failures."""


class PointNotOnCurveError(BKEError, ValueError):
    pass


class SignatureError(BKEError):
    pass


class DecryptionError(BKEError):
    """Authenticated decryption rejected the ciphertext."""


class ConsistencyError(BKEError):
    """A derived private key does not match its public counterpart."""


class FlowError(BKEError):
    def __init__(self, step, cause):
        super().__init__(f"flow aborted at step {step}: {cause}")
        self.step = step
        self.cause = cause
