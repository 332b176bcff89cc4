"""Exception types shared across the package."""


class FredkernError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(FredkernError):
    """Invalid configuration; carries the offending field path."""

    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


class CharacteristicValueError(FredkernError):
    """lambda is (numerically) a characteristic value: the determinant is below
    the near-zero threshold and the resolvent kernel does not exist there."""

    def __init__(self, lam, det_value):
        self.lam = complex(lam)
        self.det_value = complex(det_value)
        super().__init__(
            f"lambda={self.lam} is numerically characteristic (|det|={abs(det_value):.3e})"
        )


class NeumannDivergenceError(FredkernError):
    """The Neumann series precondition |lambda|*||T|| < 1 fails."""

    def __init__(self, lam, norm):
        self.lam = complex(lam)
        self.norm = float(norm)
        super().__init__(
            f"Neumann series diverges: |lambda|*norm = {abs(self.lam) * self.norm:.6f} >= 1"
        )


class BudgetExceededError(FredkernError):
    """Series evaluation would exceed the configured node-count ceiling."""


class PoleError(FredkernError):
    """The lambda shift map hits its pole: 1 - beta_n*lambda == 0."""
