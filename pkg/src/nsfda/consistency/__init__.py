"""Continuous limits, differential reduction and consistency reports."""
