"""Exception types raised by the tvar engines."""


class TvarError(Exception):
    """Base class for every error raised by this package."""


class NotSaturated(TvarError):
    """The embedding is not injective or its cokernel has torsion."""


class NotInvolution(TvarError):
    pass


class NotEquivariantEmbedding(TvarError):
    pass


class NonEquivariant(NotEquivariantEmbedding):
    pass


class ConeNotStable(TvarError):
    pass


class EmptyInput(TvarError):
    pass


class RankMismatch(TvarError):
    pass


class Unbounded(TvarError):
    """A linear functional is unbounded below on a polyhedron."""


class NonPointedImage(TvarError):
    pass


class NotARay(TvarError):
    pass


class OutsideWeightCone(TvarError):
    pass


class NonConvexSupport(TvarError):
    pass


class FanNotStable(TvarError):
    pass


class NotACocycle(TvarError):
    pass


class PointNotInPiece(TvarError):
    pass


class ParseError(TvarError):
    """Problem-file validation failure; ``path`` names the offending field."""

    def __init__(self, message, path=""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)
