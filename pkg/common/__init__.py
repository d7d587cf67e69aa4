"""Common utilities for the three-center integral tooling."""
