"""Auxiliary J and K integrals of the Neumann expansion."""
