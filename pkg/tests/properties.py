"""Graded identities shared by the property tests and the acceptance suite."""

from gerst.exterior import Element


def sgn(k: int) -> int:
    return -1 if k % 2 else 1


def graded_identity_failures(T, a: Element, b: Element, c: Element):
    """Names of the graded identities that fail on (a, b, c); empty when all hold."""
    p, q = a.homogeneous_degree(), b.homogeneous_degree()
    br, wd = T.bracket, T.wedge
    checks = {
        "antisymmetry": br(a, b) == br(b, a).scale(-sgn((p - 1) * (q - 1))),
        "jacobi": br(a, br(b, c)) == br(br(a, b), c) + br(b, br(a, c)).scale(sgn((p - 1) * (q - 1))),
        "leibniz": br(a, wd(b, c)) == wd(br(a, b), c) + wd(b, br(a, c)).scale(sgn((p - 1) * q)),
        "wedge-commutativity": wd(a, b) == wd(b, a).scale(sgn(p * q)),
        "dbar-wedge": T.dbar(wd(a, b)) == wd(T.dbar(a), b) + wd(a, T.dbar(b)).scale(sgn(p)),
        "dbar-bracket": T.dbar(br(a, b)) == br(T.dbar(a), b) + br(a, T.dbar(b)).scale(sgn(p - 1)),
    }
    return [name for name, ok in checks.items() if not ok]
