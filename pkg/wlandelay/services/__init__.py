"""Analytic models, config files, experiments and CSV output."""
