"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Bad input: wrong shape, unsorted spectrum, unknown key, missing field."""


class ResourceLimitError(RuntimeError):
    """Requested problem size exceeds the configured desk-scale caps."""


class NumericalError(RuntimeError):
    """A numerical procedure failed (non-finite values, failed convergence)."""


class TrainingDivergedError(NumericalError):
    """Autoencoder loss became non-finite during training."""

    def __init__(self, epoch: int, message: str = ""):
        self.epoch = epoch
        super().__init__(message or f"training loss non-finite at epoch {epoch}")
