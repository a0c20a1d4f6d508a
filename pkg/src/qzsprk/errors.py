"""Exception hierarchy shared by the solver, initializers and I/O layers."""


class QZSError(Exception):
    """Base class for all errors raised by :mod:`qzsprk`."""


class InvalidGridError(QZSError, ValueError):
    """Point count is odd, too small, or the domain is degenerate."""


class GridShapeError(QZSError, ValueError):
    """A field does not conform to the grid it is used with."""


class DimensionError(QZSError, ValueError):
    """An initializer was called on a grid of the wrong dimension."""


class CompatibilityError(QZSError, ValueError):
    """The initial ion velocity ``N1`` has a nonzero mean."""

    def __init__(self, mean, tol):
        self.mean = mean
        self.tol = tol
        super().__init__(
            f"N1 violates the compatibility condition: mean {mean:.3e} "
            f"exceeds tolerance {tol:.3e}"
        )


class TableauError(QZSError, ValueError):
    """Unsupported or non-symplectic Runge-Kutta tableau."""


class NumericalError(QZSError, RuntimeError):
    """Base class for failures inside the time stepper."""


class SingularBlockError(NumericalError):
    """A per-mode stage block is numerically singular."""

    def __init__(self, mode, cond):
        self.mode = mode
        self.cond = cond
        super().__init__(
            f"stage block for Fourier mode {mode} is near singular (cond={cond:.3e})"
        )


class NonConvergenceError(NumericalError):
    """The fixed-point stage iteration hit its cap without converging."""

    def __init__(self, step, t, iterations, residual):
        self.step = step
        self.t = t
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"fixed-point iteration did not converge at step {step} (t={t:.6g}): "
            f"residual {residual:.3e} after {iterations} iterations"
        )


class ConfigError(QZSError, ValueError):
    """Malformed run configuration."""


class SnapshotError(QZSError, ValueError):
    """Base class for snapshot decoding failures."""


class BadMagicError(SnapshotError):
    pass


class TruncatedSnapshotError(SnapshotError):
    pass


class SnapshotSizeError(SnapshotError):
    pass


class NonConvergenceWarning(RuntimeWarning):
    """Emitted instead of :class:`NonConvergenceError` under the ``warn`` policy."""
