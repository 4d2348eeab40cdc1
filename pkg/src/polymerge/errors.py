"""Exception hierarchy shared by every module."""


class PolytopeError(Exception):
    """Base class for domain errors (CLI exit status 1)."""

    code = "PolytopeError"

    def to_dict(self):
        return {"error": type(self).__name__, "message": str(self)}


class InvalidFacetList(PolytopeError, ValueError):
    pass


class NotGraded(PolytopeError):
    pass


class NotAtomic(NotGraded):
    pass


class DiamondViolation(PolytopeError):
    pass


class NotAFace(PolytopeError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class NotComparable(PolytopeError):
    pass


class NotAVertex(PolytopeError):
    pass


class RankOutOfRange(PolytopeError, ValueError):
    pass


class PreconditionFailed(PolytopeError):
    pass


class DimensionMismatch(PolytopeError, ValueError):
    pass


class BadDimension(PolytopeError, ValueError):
    pass


class NotSimplicial(PolytopeError):
    pass


class NotASimplexFacet(PolytopeError):
    pass


class NotASimpleVertex(PolytopeError):
    pass


class AmbiguousSite(PolytopeError):
    pass


class DegenerateInput(PolytopeError):
    pass


class NotCoplanar(PolytopeError):
    pass


class DegenerateHyperplane(PolytopeError):
    pass


class ContainmentFailed(PolytopeError):
    pass


class EpsilonExhausted(PolytopeError):
    pass


class InconsistentGeometry(PolytopeError):
    """Two exact computations of the same quantity disagreed."""


class QuotientMismatch(PolytopeError):
    """The glued poset is not the face lattice its coatoms generate."""


class NotAChainLattice(PolytopeError):
    pass
