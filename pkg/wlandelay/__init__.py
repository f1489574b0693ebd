"""Mean delay modelling for single-cell IEEE 802.11 DCF WLANs."""

__version__ = "0.1.0"
