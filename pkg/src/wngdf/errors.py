"""Exception types raised across the package."""


class WngDfError(Exception):
    """Base class for all package errors."""


class SingularMatrix(WngDfError, ArithmeticError):
    """A linear system stayed numerically singular after diagonal loading."""


class InvalidSplit(WngDfError, ValueError):
    """Sub-array sizes incompatible with the full array."""


class Unachievable(WngDfError, ValueError):
    """Requested broadband WNG lies outside what a family can reach."""

    def __init__(self, family, target_db, low_db, high_db):
        self.family = family
        self.target_db = target_db
        self.interval = (low_db, high_db)
        super().__init__(
            f"{family}: target WNG {target_db:.4f} dB outside feasible "
            f"interval [{low_db:.4f}, {high_db:.4f}] dB"
        )


class ConfigError(WngDfError, ValueError):
    """Malformed or inconsistent experiment configuration."""
