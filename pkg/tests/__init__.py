"""Tests for the three-center integral library and bench."""
