"""Legendre functions, spherical harmonics and expansion coefficients."""
