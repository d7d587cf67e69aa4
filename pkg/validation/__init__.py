"""Bench case records, reference comparison and report writers."""
