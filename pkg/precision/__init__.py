"""Arbitrary-precision scalar contract, gamma functions and binomials."""
