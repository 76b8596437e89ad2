"""Difference polynomials with coefficients in Q(Re, h, tau)."""
