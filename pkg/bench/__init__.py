"""Bench harness reproducing the three-center integral tables."""
