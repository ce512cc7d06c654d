"""Exception hierarchy shared by all modules."""


class TodaTopoError(Exception):
    """Base class; the CLI maps these to exit code 1."""


class UnsupportedType(TodaTopoError):
    pass


class RankCapExceeded(TodaTopoError):
    pass


class SizeCapExceeded(TodaTopoError):
    pass


class NoUncoloredVertices(TodaTopoError):
    pass


class VertexNotColored(TodaTopoError):
    pass


class ZeroVertexAction(TodaTopoError):
    pass


class ComplexInconsistent(TodaTopoError):
    pass


class OutOfChart(TodaTopoError):
    pass


class ToleranceUnreachable(TodaTopoError):
    pass
