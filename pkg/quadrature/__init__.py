"""Gauss-Kronrod rules and global-adaptive integration over (xi, nu) rectangles."""
