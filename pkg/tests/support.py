"""Numeric helpers shared by the symbolic tests."""
import mpmath
import sympy as sp

X, Y, T = sp.symbols("x y t")

SMOOTH = {"u": sp.sin(X + 2 * Y) * sp.cos(T) + X * Y,
          "v": sp.cos(X - Y) * sp.exp(T / 3),
          "p": sp.sin(X) * sp.sin(2 * Y) + T * X}


def lambdas(fields=SMOOTH):
    return {w: sp.lambdify((X, Y, T), e, "mpmath") for w, e in fields.items()}


def coefficient(c, re, h, tau):
    syms = sp.symbols("Re h tau")
    return sp.lambdify(syms, c.as_expr().subs(dict(zip(c.field.symbols, syms))), "mpmath")(re, h, tau)


def eval_difference(poly, funcs, point, h, tau, re, digits=40):
    """Value of a difference polynomial on sampled functions at ``point``, in mpmath."""
    mpmath.mp.dps = digits
    h, tau, re = mpmath.mpf(h), mpmath.mpf(tau), mpmath.mpf(re)
    x0, y0, t0 = (mpmath.mpf(a) for a in point)
    total = mpmath.mpf(0)
    for m, c in poly.terms.items():
        term = coefficient(c, re, h, tau)
        for v, e in m:
            i, j, k = v.shift
            term = term * funcs[v.indet](x0 + i * h, y0 + j * h, t0 + k * tau) ** e
        total += term
    return total


def jet_values(limit, point, fields=SMOOTH):
    out = {}
    for v in limit.variables():
        a, b, c = v.deriv
        expr = fields[v.indet]
        for sym, n in ((X, a), (Y, b), (T, c)):
            if n:
                expr = sp.diff(expr, sym, n)
        out[v] = float(expr.subs({X: point[0], Y: point[1], T: point[2]}))
    return out
