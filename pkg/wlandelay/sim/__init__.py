"""Discrete-event simulation substrate and the two simulators."""
